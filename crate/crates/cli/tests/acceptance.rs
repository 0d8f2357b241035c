//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed. Exits non-zero
//! if any criterion fails, except those in `KNOWN_RED`, which stay reported
//! as FAIL but do not fail the run.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use divkl::arithmetic::{build_sieves, divisors, factorize, pillai, tau};
use divkl::divergence::{
    est_metric, kl_divergence, kl_n, kl_sieve, pinsker_lower_bound, DiscreteDistribution, KlSign,
};
use divkl::ScanContext;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

/// Criteria whose target cannot be met as stated; see the README.
const KNOWN_RED: &[u32] = &[7];

const CONJ_V_EXCEPTIONS: [u64; 12] = [1, 12, 24, 30, 36, 48, 60, 72, 120, 180, 240, 360];

type Outcome = Result<String, String>;

fn divkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divkl"))
        .args(args)
        .output()
        .expect("run divkl")
}

fn stdout_ok(args: &[&str]) -> Result<String, String> {
    let out = divkl(args);
    if !out.status.success() {
        return Err(format!(
            "`divkl {}` exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8(out.stdout).expect("utf-8"))
}

struct Golden {
    n: u64,
    value: f64,
    h: f64,
}

fn golden(name: &str) -> Vec<Golden> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path)
        .expect("golden file")
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            Golden {
                n: f[0].parse().unwrap(),
                value: f[1].parse().unwrap(),
                h: f[2].parse().unwrap(),
            }
        })
        .collect()
}

struct Row {
    n: u64,
    g: Option<f64>,
    h: f64,
    kl: Option<f64>,
}

fn parse_csv(text: &str) -> Vec<Row> {
    let opt = |s: &str| if s.is_empty() { None } else { Some(s.parse::<f64>().unwrap()) };
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            Row {
                n: f[1].parse().unwrap(),
                g: opt(f[2]),
                h: f[3].parse().unwrap(),
                kl: opt(f[4]),
            }
        })
        .collect()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Compares a scanned table with the golden rows up to `limit`.
fn compare_table(table: &str, limit: u64, golden_file: &str, tol: f64) -> Outcome {
    let rows = parse_csv(&stdout_ok(&[
        "table",
        table,
        "--limit",
        &limit.to_string(),
        "--format",
        "csv",
    ])?);
    let expected: Vec<Golden> = golden(golden_file).into_iter().filter(|g| g.n <= limit).collect();
    let got: Vec<u64> = rows.iter().map(|r| r.n).collect();
    let want: Vec<u64> = expected.iter().map(|g| g.n).collect();
    if got != want {
        return Err(format!("rows {got:?}, expected {want:?}"));
    }
    let mut worst: f64 = 0.0;
    for (r, g) in rows.iter().zip(&expected) {
        let v = r.kl.or(r.g).ok_or("missing value column")?;
        worst = worst.max(rel_err(v, g.value)).max(rel_err(r.h, g.h));
    }
    if worst > tol {
        return Err(format!("max relative error {worst:.2e} > {tol:e}"));
    }
    Ok(format!("{} rows, max relative error {worst:.1e}", rows.len()))
}

fn c1() -> Outcome {
    compare_table("T", 100_000, "table_t.csv", 1e-8)
}

fn c2() -> Outcome {
    compare_table("To", 200_000, "table_to.csv", 1e-8)
}

fn c3() -> Outcome {
    let b1 = compare_table("B1", 100_000, "table_b1.csv", 1e-9)?;
    let b2 = compare_table("B2", 100_000, "table_b2.csv", 1e-9)?;
    let rows = parse_csv(&stdout_ok(&["table", "B1", "--limit", "100000", "--format", "csv"])?);
    if rows.iter().any(|r| r.n == 4095) {
        return Err("4095 present in B1".into());
    }
    let b2rows = parse_csv(&stdout_ok(&["table", "B2", "--limit", "100000", "--format", "csv"])?);
    if !b2rows.iter().any(|r| r.n == 47355) {
        return Err("47355 missing from B2".into());
    }
    Ok(format!("B1: {b1}; B2: {b2}; 4095 absent"))
}

fn c4() -> Outcome {
    let expected = "6 20 28 70 88 104 110 130 136 152 170 190 315 368 464 496 572 592 656 688 748 836 884 988 \
                    1012 1078 1150 1155 1196 1276 1292 1364 1365 1450";
    let rows = parse_csv(&stdout_ok(&["table", "KLPrim", "--limit", "1500", "--format", "csv"])?);
    let got: Vec<String> = rows.iter().map(|r| r.n.to_string()).collect();
    if got.join(" ") != expected {
        return Err(format!("got {}", got.join(" ")));
    }
    Ok(format!("{} numbers", got.len()))
}

fn verify_json(lo: u64, hi: u64, claims: &str) -> Result<Vec<Value>, String> {
    let out = divkl(&[
        "verify",
        "--from",
        &lo.to_string(),
        "--limit",
        &hi.to_string(),
        "--claims",
        claims,
        "--format",
        "json",
    ]);
    if !matches!(out.status.code(), Some(0 | 2)) {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect())
}

fn c5() -> Outcome {
    let big = "thm1-*,cor1,thm2,thm3-2kR,lem3-servais,lem4-odd,lem4-even,prop-klmn,prop-h-*";
    let small = "prop-unif,prop-unif-pinsker,ineq-n3-trivial";
    let mut reports = verify_json(3, 1_000_000, big)?;
    reports.extend(verify_json(2, 100_000, small)?);
    let mut bad = Vec::new();
    for r in &reports {
        let id = r["claim_id"].as_str().unwrap();
        if r["violation_count"].as_u64() != Some(0) || !r["undecided"].as_array().unwrap().is_empty() {
            bad.push(id.to_string());
        }
        if id == "prop-unif-pinsker" && r["exception_hits"] != serde_json::json!([2, 3]) {
            bad.push(format!("{id} exception hits {}", r["exception_hits"]));
        }
    }
    if reports.len() != 15 {
        return Err(format!("{} reports, expected 15", reports.len()));
    }
    if !bad.is_empty() {
        return Err(format!("violations in {}", bad.join(", ")));
    }
    Ok("15 claims, zero violations (prop-unif-pinsker exception hits {2, 3})".into())
}

fn c6() -> Outcome {
    let r = verify_json(1, 100, "false-phi-ineq")?.remove(0);
    let status = r["status"].as_str().unwrap();
    let v16 = r["violations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["n"] == 16)
        .ok_or("n = 16 not reported")?;
    let (lhs, rhs) = (v16["lhs"].as_f64().unwrap(), v16["rhs"].as_f64().unwrap());
    if status != "expected_negative" || !(lhs < rhs) {
        return Err(format!("status {status}, lhs {lhs}, rhs {rhs}"));
    }
    Ok(format!("n = 16: {lhs:.4} < {rhs:.4}, status {status}"))
}

fn c7() -> Outcome {
    let v = verify_json(1, 100_000, "conj-v")?.remove(0);
    let r = verify_json(1, 1_000_000, "conj-thm3-R")?.remove(0);
    let outside = v["violation_count"].as_u64().unwrap();
    let first: Vec<u64> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .take(6)
        .map(|x| x["n"].as_u64().unwrap())
        .collect();
    let hits: BTreeSet<u64> = v["exception_hits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    let r_viol = r["violation_count"].as_u64().unwrap();
    let summary = format!(
        "conj-v: {outside} violations outside the exception set (first {first:?}), exception hits {hits:?}; \
         conj-thm3-R: {r_viol} violations over {} primitive non-deficient n",
        r["hypothesis_count"]
    );
    let hits_ok = hits.iter().all(|n| CONJ_V_EXCEPTIONS.contains(n));
    if outside == 0 && hits_ok && r_viol == 0 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn c8() -> Outcome {
    const N: u64 = 100_000;
    let (sieve, t) = build_sieves(N).map_err(|e| e.to_string())?;
    let kl = kl_sieve(N, &t).map_err(|e| e.to_string())?;
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=N);
        let f = factorize(n, None).unwrap();
        worst = worst.max((kl.value(n) - kl_n(&f).value).abs());
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let phi = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
        let rad: u64 = f.primes().product();
        let ok = t.sigma(n) == divs.iter().sum::<u64>()
            && t.tau(n) == divs.len() as u64
            && t.phi(n) == phi
            && t.radical(n) == rad
            && sieve.factorize(n) == f
            && t.h(n) == divkl::arithmetic::abundancy_h(&f).unwrap()
            && t.big_h(n) == divkl::arithmetic::Ratio::new(n as i128, phi as i128)
            && t.surplus(n) == divkl::arithmetic::Ratio::new(n as i128 - 2 * phi as i128, phi as i128);
        if !ok {
            return Err(format!("table mismatch at n = {n}"));
        }
    }
    if worst >= 1e-6 {
        return Err(format!("kl_sieve differs by {worst:e}"));
    }
    for n in 1..=10_000u64 {
        let f = factorize(n, None).unwrap();
        let s: u64 = divisors(&f)
            .into_iter()
            .map(|d| pillai(&factorize(d, None).unwrap()).unwrap())
            .sum();
        if s != n * tau(&f) {
            return Err(format!("Pillai identity fails at n = {n}"));
        }
    }
    Ok(format!("KL max |diff| {worst:.1e}; tables exact on 1000 n; Pillai identity exact n <= 10^4"))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn random_distribution(rng: &mut StdRng, k: usize) -> DiscreteDistribution {
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(1e-6..1.0)).collect();
    DiscreteDistribution::from_weights((1..=k as u64).collect(), &w).unwrap()
}

fn c9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    for i in 0..1000 {
        let k = rng.gen_range(2..12);
        let p = random_distribution(&mut rng, k);
        let q = random_distribution(&mut rng, k);
        let r = random_distribution(&mut rng, k);
        let d = kl_divergence(&p, &q).unwrap();
        let (pq, qp) = (est_metric(&p, &q).unwrap(), est_metric(&q, &p).unwrap());
        let (pr, qr) = (est_metric(&p, &r).unwrap(), est_metric(&q, &r).unwrap());
        if d < -1e-12 {
            return Err(format!("Gibbs fails on sample {i}"));
        }
        if (pq - qp).abs() > 1e-12 || pr > pq + qr + 1e-9 {
            return Err(format!("EST metric axiom fails on sample {i}"));
        }
        if pinsker_lower_bound(&p, &q).unwrap() > d + 1e-12 {
            return Err(format!("Pinsker fails on sample {i}"));
        }
    }
    let ctx = ScanContext::new(100_000, true).map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for n in 1..=5000u64 {
        if ctx.kl_sign(n).is_non_negative() {
            for m in 2..=20 {
                if ctx.kl_sign(m * n) != KlSign::Positive {
                    return Err(format!("KL({m}·{n}) not positive"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("1000 samples ok; {pairs} (n, m) pairs with KL(mn) > 0"))
}

fn c10() -> Outcome {
    let a = stdout_ok(&["--threads", "1", "scan", "B1", "--limit", "100000"])?;
    let b = stdout_ok(&["--threads", "4", "scan", "B1", "--limit", "100000", "--block-size", "999"])?;
    let t1 = stdout_ok(&["--threads", "1", "table", "T", "--limit", "100000"])?;
    let t2 = stdout_ok(&["--threads", "3", "table", "T", "--limit", "100000"])?;
    if a != b || t1 != t2 {
        return Err("output differs across thread counts".into());
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cold = dir.path().join("cold.csv");
    let warm = dir.path().join("warm.csv");
    let cp = dir.path().join("scan.ckpt");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    stdout_ok(&["scan", "B1", "--limit", "10000", "--output", &s(&cold)])?;
    stdout_ok(&[
        "scan", "B1", "--limit", "4000", "--block-size", "1000", "--output", &s(&warm), "--checkpoint", &s(&cp),
    ])?;
    stdout_ok(&[
        "scan", "B1", "--limit", "10000", "--block-size", "1000", "--output", &s(&warm), "--checkpoint", &s(&cp),
        "--resume",
    ])?;
    let (x, y) = (std::fs::read(&cold).unwrap(), std::fs::read(&warm).unwrap());
    if x != y {
        return Err("resumed scan differs from cold scan".into());
    }
    Ok(format!("byte-identical across threads; resume == cold ({} bytes)", x.len()))
}

fn c11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    stdout_ok(&["plot", "--limit", "5000", "--output", dir.path().to_str().unwrap()])?;
    let csv = std::fs::read_to_string(dir.path().join("h_kl.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    if rows.len() != 5000 {
        return Err(format!("{} rows", rows.len()));
    }
    let six: Vec<f64> = rows[5].split(',').map(|x| x.parse().unwrap()).collect();
    if six[0] != 6.0 || six[1] != 2.0 || (six[2] - 0.8766).abs() > 1e-4 {
        return Err(format!("row for 6 is {:?}", rows[5]));
    }
    let mut notes = Vec::new();
    for (file, window) in [
        ("h_kl.svg", None),
        ("h_kl_zoom.svg", Some("x: h(n) in [1.9, 2.1]")),
        ("h_kl_zoom2.svg", Some("x: h(n) in [1.98, 2.02]")),
    ] {
        let svg = std::fs::read_to_string(dir.path().join(file)).unwrap();
        let circles = svg.matches("<circle").count();
        if !svg.starts_with("<?xml") || !svg.trim_end().ends_with("</svg>") || circles == 0 {
            return Err(format!("{file} is not a valid plot"));
        }
        if let Some(w) = window {
            if !svg.contains(w) {
                return Err(format!("{file} header lacks {w:?}"));
            }
        }
        notes.push(format!("{file}: {circles} points"));
    }
    Ok(format!("5000 rows, n = 6 at (2, {}); {}", six[2], notes.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "Table T to 10^5", c1),
        (2, "Table To to 2*10^5", c2),
        (3, "Tables B1/B2 to 10^5", c3),
        (4, "KL-primitive list to 1500", c4),
        (5, "proved-claim soundness", c5),
        (6, "falsity witness n = 16", c6),
        (7, "conjecture scans", c7),
        (8, "oracle equivalence", c8),
        (9, "property suites", c9),
        (10, "determinism and resume", c10),
        (11, "figure data", c11),
    ];
    let mut hard_failures = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {id:>2} {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                let red = KNOWN_RED.contains(&id);
                let tag = if red { " (known red)" } else { "" };
                println!("FAIL criterion {id:>2} {name}{tag} [{secs:.1}s]: {detail}");
                if !red {
                    hard_failures += 1;
                }
            }
        }
    }
    if hard_failures > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
