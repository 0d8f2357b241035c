//! Text and JSON renderings for `compute`, `classify` and `table`.

use std::io::{self, Write};

use divkl::arithmetic::{
    abundancy_h, euler_phi, pillai, radical, sigma, surplus_s, tau, totient_index_h, Factorization,
};
use divkl::classify::{Classification, Deficiency};
use divkl::divergence::{kl_n, v_n, KlSign};
use divkl::format::fmt_sig;
use divkl::sequences::{RecordEntry, SequenceId};

pub enum Value {
    Int(u64),
    Real(f64),
    Undefined,
}

impl Value {
    pub fn to_text(&self, digits: usize) -> String {
        match self {
            Value::Int(k) => k.to_string(),
            Value::Real(x) => fmt_sig(*x, digits),
            Value::Undefined => "undefined".into(),
        }
    }

    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        match self {
            Value::Int(k) => (*k).into(),
            Value::Real(x) => fmt_sig(*x, digits)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(serde_json::Value::Null, serde_json::Value::Number),
            Value::Undefined => serde_json::Value::Null,
        }
    }
}

pub fn compute_values(f: &Factorization, names: &[&str]) -> divkl::Result<Vec<(&'static str, Value)>> {
    let mut out = Vec::new();
    for &name in names {
        let v = match name {
            "phi" => ("phi", Value::Int(euler_phi(f))),
            "sigma" => ("sigma", Value::Int(sigma(f)?)),
            "tau" => ("tau", Value::Int(tau(f))),
            "radical" => ("radical", Value::Int(radical(f))),
            "h" => ("h", Value::Real(abundancy_h(f)?.to_f64())),
            "big_h" => ("big_h", Value::Real(totient_index_h(f).to_f64())),
            "s" => ("s", Value::Real(surplus_s(f).to_f64())),
            "g" => ("g", Value::Real(surplus_s(f).to_f64() * (f.n() as f64).sqrt())),
            "kl" => ("kl", Value::Real(kl_n(f).value)),
            "v" => ("v", v_n(f).map_or(Value::Undefined, Value::Real)),
            "pi" => ("pi", Value::Int(pillai(f)?)),
            other => unreachable!("unknown value {other}"),
        };
        out.push(v);
    }
    Ok(out)
}

fn deficiency_name(d: Deficiency) -> &'static str {
    match d {
        Deficiency::Deficient => "deficient",
        Deficiency::Perfect => "perfect",
        Deficiency::Abundant => "abundant",
    }
}

fn sign_name(s: KlSign) -> &'static str {
    match s {
        KlSign::Negative => "negative",
        KlSign::ZeroAmbiguous => "zero_ambiguous",
        KlSign::Positive => "positive",
    }
}

pub fn write_classifications(rows: &[Classification], json: bool, out: &mut impl Write) -> io::Result<()> {
    if json {
        for c in rows {
            writeln!(out, "{}", serde_json::to_string(c).expect("classification serializes"))?;
        }
        return Ok(());
    }
    let w = rows.iter().map(|c| c.n.to_string().len()).max().unwrap_or(1).max(1);
    writeln!(
        out,
        "{:<w$}  {:<10} {:<23} {:<15} kl_primitive",
        "n", "deficiency", "primitive_non_deficient", "kl_sign"
    )?;
    for c in rows {
        writeln!(
            out,
            "{:<w$}  {:<10} {:<23} {:<15} {}",
            c.n,
            deficiency_name(c.deficiency),
            c.primitive_non_deficient,
            sign_name(c.kl_sign),
            c.kl_primitive
        )?;
    }
    Ok(())
}

/// Columns in table order: n, then g or KL, then h.
pub fn write_table_text(seq: SequenceId, entries: &[RecordEntry], digits: usize, out: &mut impl Write) -> io::Result<()> {
    let (label, pick): (&str, fn(&RecordEntry) -> Option<f64>) = match seq {
        SequenceId::B1 | SequenceId::B2 => ("g(n)", |e| e.g),
        _ => ("KL(n)", |e| e.kl),
    };
    let rows: Vec<[String; 3]> = entries
        .iter()
        .map(|e| {
            [
                e.n.to_string(),
                pick(e).map_or(String::new(), |x| fmt_sig(x, digits)),
                fmt_sig(e.h, digits),
            ]
        })
        .collect();
    let width = |i: usize, head: &str| rows.iter().map(|r| r[i].len()).chain([head.len()]).max().unwrap_or(0);
    let (w0, w1) = (width(0, "n"), width(1, label));
    writeln!(out, "{:<w0$}  {:<w1$}  h(n)", "n", label)?;
    for r in &rows {
        writeln!(out, "{:<w0$}  {:<w1$}  {}", r[0], r[1], r[2])?;
    }
    Ok(())
}
