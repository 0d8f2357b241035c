//! The claim registry.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};

use super::{Check, ClaimKind, Env, Outcome, Strictness, GUARD_ABS};
use crate::arithmetic::{divisors, divisors_with_phi, Factorization, Ratio};
use crate::divergence::{kl_extended_sum, v_n_extended, KlSign, EXTENDED_BITS};
use crate::extended::ExtendedSum;
use crate::sequences::{is_kl_primitive, is_primitive_non_deficient};
use crate::summation::NeumaierSum;

const MAX_BITS: u32 = 2048;
const EPS: f64 = f64::EPSILON;

pub(crate) type EvalFn = fn(&Env, u64, &mut dyn FnMut(Check));

pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub kind: ClaimKind,
    pub strictness: Strictness,
    pub exception_set: &'static [u64],
    pub needs_kl: bool,
    pub(crate) eval: EvalFn,
}

impl std::fmt::Debug for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Claim")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .field("strictness", &self.strictness)
            .field("exception_set", &self.exception_set)
            .finish()
    }
}

pub const CONJ_V_EXCEPTIONS: &[u64] = &[1, 12, 24, 30, 36, 48, 60, 72, 120, 180, 240, 360];
const UNIF_PINSKER_EXCEPTIONS: &[u64] = &[2, 3];

pub fn claim(id: &str) -> Option<&'static Claim> {
    registry().iter().find(|c| c.id == id)
}

pub fn registry() -> &'static [Claim] {
    static REGISTRY: OnceLock<Vec<Claim>> = OnceLock::new();
    REGISTRY.get_or_init(build)
}

fn c(
    id: &'static str,
    statement: &'static str,
    kind: ClaimKind,
    strictness: Strictness,
    needs_kl: bool,
    eval: EvalFn,
) -> Claim {
    Claim {
        id,
        statement,
        kind,
        strictness,
        exception_set: &[],
        needs_kl,
        eval,
    }
}

fn build() -> Vec<Claim> {
    use ClaimKind::*;
    use Strictness::*;
    vec![
        c("thm1-perfect", "n odd, primitive non-deficient and perfect ⇒ S(n) > 2·ln(24√2/25)/√n + 3/n", Proved, Strict, false, thm1_perfect),
        c("thm1-abundant", "n odd, primitive non-deficient and abundant ⇒ S(n) > 2·ln(24√2/25)/√n", Proved, Strict, false, thm1_abundant),
        c("cor1", "n odd non-deficient ⇒ S(n) > 3/(5√n)", Proved, Strict, false, cor1),
        c("thm2", "n odd non-deficient with k distinct primes ⇒ H(n) ≥ 2 + (4/3)·n^(-2/k)", Proved, NonStrict, false, thm2),
        c("thm3-2kR", "n primitive non-deficient ⇒ some p^(a+1) ∥ n·p has p^(a+1) < 2·k·R(n)", Proved, Strict, false, thm3_2kr),
        c("conj-thm3-R", "n primitive non-deficient ⇒ some p^(a+1) < R(n)", Conjecture, Strict, false, conj_thm3_r),
        c("lem1-kl-positive", "n non-deficient ⇒ KL(n) > 0", Proved, Strict, true, lem1),
        c("lem3-servais", "n non-deficient with smallest prime p and k distinct primes ⇒ k ≥ p", Proved, NonStrict, false, lem3),
        c("lem4-odd", "n odd non-deficient, q = min p^(a+1) ⇒ H(n) ≥ 2 + (4/3)/q", Proved, NonStrict, false, lem4_odd),
        c("lem4-even", "n even non-deficient, q = min p^(a+1) attained at an odd p ⇒ H(n) ≥ 2 + (7/4)/q", Proved, NonStrict, false, lem4_even),
        c("lem5-h-gt-2", "KL(n) > 0 ⇒ H(n) > 2", Proved, Strict, true, lem5),
        c("prop-h-12pi2", "KL(n) > 0 ⇒ h(n) ≥ 12/π²", Proved, NonStrict, true, prop_h_12),
        c("prop-h-16pi2", "n odd, KL(n) > 0 ⇒ h(n) ≥ 16/π²", Proved, NonStrict, true, prop_h_16),
        c("prop-h-27-2pi2", "KL(n) > 0 ⇒ h(n) ≥ 27/(2π²)", Proved, NonStrict, true, prop_h_27),
        c("prop-klmn", "KL(n) ≥ 0 and 2 ≤ m ≤ 20 ⇒ KL(mn) > 0 (pairs with mn in range)", Proved, Strict, true, prop_klmn),
        c("prop-pinsker-kl", "n perfect ⇒ KL(n) ≥ (2φ(n) − n)²/(2n)", Proved, NonStrict, true, pinsker_kl),
        c("prop-pinsker-kl-strong", "n perfect ⇒ KL(n) ≥ (2φ(n) − n)²/n", Reported, NonStrict, true, pinsker_kl_strong),
        c("open-pinsker-kl-odd", "n odd non-deficient ⇒ KL(n) ≥ (2φ(n) − n)²/(2n)", Conjecture, NonStrict, true, pinsker_kl_odd),
        c("prop-unif", "Σ_{d|n} φ(d)·ln φ(d) ≥ n·ln(n/τ(n))", Proved, NonStrict, false, prop_unif),
        Claim {
            exception_set: UNIF_PINSKER_EXCEPTIONS,
            ..c("prop-unif-pinsker", "n > 1 ⇒ Σ_{d|n} φ(d)·ln φ(d) ≥ n·ln(n/τ(n)) + n/(2τ(n)²)", Proved, NonStrict, false, prop_unif_pinsker)
        },
        c("false-phi-ineq", "φ(n)·ln φ(n) ≥ n·ln(n/τ(n)) (fails, e.g. at n = 16)", ExpectedFalse, NonStrict, false, false_phi),
        c("ineq-n3-trivial", "n > 3 ⇒ Σ_{d|n} (1/d)·ln(n/(2dφ(d))) ≥ 0", Proved, NonStrict, false, ineq_n3),
        c("prop-v-positive", "n perfect ⇒ v(n) > 0", Proved, Strict, false, v_positive),
        c("prop-v-pinsker", "n perfect with smallest prime p ⇒ v(n) ≥ 1/(2p²)", Reported, NonStrict, false, v_pinsker),
        Claim {
            exception_set: CONJ_V_EXCEPTIONS,
            ..c("conj-v", "n ∉ {1,12,24,30,36,48,60,72,120,180,240,360}, smallest prime p ⇒ v(n) ≥ 1/p²", Conjecture, NonStrict, false, conj_v)
        },
        Claim {
            exception_set: CONJ_V_EXCEPTIONS,
            ..c("conj-v-nondeficient", "as conj-v, restricted to non-deficient n", Conjecture, NonStrict, false, conj_v_nondeficient)
        },
        c("prop-2kp-family", "k ≥ 4, p = 2^k + 1 or 2^k + 3 prime ⇒ n = 2^(k-1)·p is deficient with KL(n) > 0", Proved, Strict, true, family_2kp),
        c("conj-deficient-klprim", "infinitely many deficient KL-primitive n (counts members in range)", Conjecture, NonStrict, true, deficient_klprim),
        c("ineq-surplus-1n", "n non-deficient ⇒ H(n) > 2 + 1/n", Proved, Strict, false, surplus_1n),
    ]
}

// ---- decision helpers -------------------------------------------------------

fn exact_with_margin(strict: Strictness, ord: Ordering, margin: Option<f64>) -> Outcome {
    if strict.accepts(ord) {
        Outcome::Holds(margin)
    } else {
        Outcome::Violated
    }
}

/// Decides `lhs ⋈ rhs` from doubles with absolute error `err`, escalating to
/// fixed point via `ext(bits)`, which must return lhs − rhs (up to a
/// positive factor).
fn numeric(
    lhs: f64,
    rhs: f64,
    err: f64,
    strict: Strictness,
    ext: Option<&dyn Fn(u32) -> ExtendedSum>,
) -> Outcome {
    let diff = lhs - rhs;
    let band = err + GUARD_ABS + 8.0 * EPS * (lhs.abs() + rhs.abs());
    if diff > band {
        return Outcome::Holds(Some(diff));
    }
    if diff < -band {
        return Outcome::Violated;
    }
    let Some(ext) = ext else {
        return Outcome::Undecided;
    };
    let mut bits = EXTENDED_BITS;
    while bits <= MAX_BITS {
        if let Some(ord) = ext(bits).certain_sign() {
            return exact_with_margin(strict, ord, Some(diff.max(0.0)));
        }
        bits *= 2;
    }
    Outcome::Undecided
}

fn check(n: u64, lhs: f64, rhs: f64, outcome: Outcome) -> Check {
    Check {
        n,
        lhs,
        rhs,
        outcome,
        detail: None,
    }
}

fn big(x: i128) -> BigInt {
    BigInt::from(x)
}

fn surplus(env: &Env, n: u64) -> Ratio {
    env.ctx.tables().surplus(n).reduced()
}

fn non_deficient(env: &Env, n: u64) -> bool {
    env.ctx.tables().is_non_deficient(n)
}

fn perfect(env: &Env, n: u64) -> bool {
    env.ctx.tables().sigma(n) == 2 * n
}

/// KL(n) > 0, with an undecidable sign counted as satisfying the hypothesis.
fn kl_positive_hyp(env: &Env, n: u64) -> bool {
    env.ctx.kl_sign(n) != KlSign::Negative
}

/// min over p^a ∥ n of p^(a+1), with its prime.
fn min_next_power(f: &Factorization) -> (u64, u128) {
    f.factors()
        .iter()
        .map(|&(p, a)| (p, (p as u128).pow(a + 1)))
        .min_by_key(|&(_, q)| q)
        .expect("n > 1")
}

fn ln_ratio_const() -> f64 {
    (1152.0f64 / 625.0).ln()
}

// ---- surplus theorems -------------------------------------------------------

fn thm1(env: &Env, n: u64, sink: &mut dyn FnMut(Check), want_perfect: bool) {
    if n % 2 == 0 || perfect(env, n) != want_perfect || !is_primitive_non_deficient(env.ctx, n) {
        return;
    }
    let s = surplus(env, n);
    let c = ln_ratio_const();
    let sqrt_n = (n as f64).sqrt();
    let extra = if want_perfect { 3.0 / n as f64 } else { 0.0 };
    let lhs = s.to_f64();
    let rhs = c / sqrt_n + extra;
    // Compared as S·√n − ln(1152/625) − [3/√n].
    let ext = move |bits: u32| {
        let mut e = ExtendedSum::new(bits);
        let num = BigUint::try_from(big(s.num).pow(2) * n).expect("S > 0");
        let den = BigUint::try_from(big(s.den).pow(2)).expect("positive");
        e.add_sqrt_ratio(&num, &den, false);
        e.add_weighted_ln(1, 625, 1152);
        if want_perfect {
            e.add_sqrt_ratio(&BigUint::from(9u32), &BigUint::from(n), true);
        }
        e
    };
    let outcome = if s.signum() != Ordering::Greater {
        Outcome::Violated
    } else {
        numeric(lhs, rhs, 0.0, Strictness::Strict, Some(&ext))
    };
    sink(check(n, lhs, rhs, outcome));
}

fn thm1_perfect(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    thm1(env, n, sink, true)
}

fn thm1_abundant(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    thm1(env, n, sink, false)
}

fn cor1(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if n % 2 == 0 || !non_deficient(env, n) {
        return;
    }
    let s = surplus(env, n);
    let lhs = s.to_f64();
    let rhs = 3.0 / (5.0 * (n as f64).sqrt());
    // S > 3/(5√n) ⟺ S > 0 and 25·S²·n > 9.
    let ord = if s.signum() != Ordering::Greater {
        Ordering::Less
    } else {
        (big(s.num).pow(2) * BigInt::from(25 * n)).cmp(&(big(s.den).pow(2) * BigInt::from(9)))
    };
    sink(check(n, lhs, rhs, exact_with_margin(Strictness::Strict, ord, Some(lhs - rhs))));
}

fn thm2(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if n % 2 == 0 || !non_deficient(env, n) {
        return;
    }
    let f = env.ctx.factorize(n);
    let k = f.omega() as u32;
    let s = surplus(env, n);
    let lhs = 2.0 + s.to_f64();
    let rhs = 2.0 + (4.0 / 3.0) * (n as f64).powf(-2.0 / k as f64);
    // S ≥ (4/3)·n^(-2/k) ⟺ (3S)^k·n² ≥ 4^k·den^k.
    let ord = if s.signum() == Ordering::Less {
        Ordering::Less
    } else {
        (BigInt::from(3u32).pow(k) * big(s.num).pow(k) * BigInt::from(n).pow(2))
            .cmp(&(BigInt::from(4u32).pow(k) * big(s.den).pow(k)))
    };
    sink(check(n, lhs, rhs, exact_with_margin(Strictness::NonStrict, ord, Some(lhs - rhs))));
}

fn thm3(env: &Env, n: u64, sink: &mut dyn FnMut(Check), with_k: bool) {
    if !is_primitive_non_deficient(env.ctx, n) {
        return;
    }
    let f = env.ctx.factorize(n);
    let (_, q) = min_next_power(&f);
    let r = env.ctx.tables().radical(n) as u128;
    let bound = if with_k { 2 * f.omega() as u128 * r } else { r };
    let (lhs, rhs) = (bound as f64, q as f64);
    sink(check(n, lhs, rhs, exact_with_margin(Strictness::Strict, bound.cmp(&q), Some(lhs - rhs))));
}

fn thm3_2kr(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    thm3(env, n, sink, true)
}

fn conj_thm3_r(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    thm3(env, n, sink, false)
}

fn lem3(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if !non_deficient(env, n) {
        return;
    }
    let f = env.ctx.factorize(n);
    let k = f.omega() as u64;
    let p = f.smallest_prime().expect("n > 1");
    sink(check(
        n,
        k as f64,
        p as f64,
        exact_with_margin(Strictness::NonStrict, k.cmp(&p), Some(k as f64 - p as f64)),
    ));
}

fn lem4(env: &Env, n: u64, sink: &mut dyn FnMut(Check), odd: bool) {
    if (n % 2 == 1) != odd || !non_deficient(env, n) {
        return;
    }
    let f = env.ctx.factorize(n);
    let (p, q) = min_next_power(&f);
    if !odd && p == 2 {
        return;
    }
    let (c_num, c_den) = if odd { (4i128, 3i128) } else { (7, 4) };
    let s = surplus(env, n);
    let lhs = 2.0 + s.to_f64();
    let rhs = 2.0 + c_num as f64 / (c_den as f64 * q as f64);
    // S ≥ c/q ⟺ S·q·c_den ≥ c_num.
    let ord = (big(s.num) * BigInt::from(q) * c_den).cmp(&(big(s.den) * c_num));
    sink(check(n, lhs, rhs, exact_with_margin(Strictness::NonStrict, ord, Some(lhs - rhs))));
}

fn lem4_odd(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    lem4(env, n, sink, true)
}

fn lem4_even(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    lem4(env, n, sink, false)
}

fn surplus_1n(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if !non_deficient(env, n) {
        return;
    }
    let s = surplus(env, n);
    let (lhs, rhs) = (2.0 + s.to_f64(), 2.0 + 1.0 / n as f64);
    let ord = (big(s.num) * n).cmp(&big(s.den));
    sink(check(n, lhs, rhs, exact_with_margin(Strictness::Strict, ord, Some(lhs - rhs))));
}

// ---- KL-sign statements -----------------------------------------------------

fn lem1(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if !non_deficient(env, n) {
        return;
    }
    let kl = env.ctx.kl_value(n);
    let outcome = match env.ctx.kl_sign(n) {
        KlSign::Positive => Outcome::Holds(Some(kl)),
        KlSign::Negative => Outcome::Violated,
        KlSign::ZeroAmbiguous => Outcome::Undecided,
    };
    sink(check(n, kl, 0.0, outcome));
}

fn lem5(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if env.ctx.kl_sign(n) != KlSign::Positive {
        return;
    }
    let s = surplus(env, n);
    let lhs = 2.0 + s.to_f64();
    sink(check(n, lhs, 2.0, exact_with_margin(Strictness::Strict, s.signum(), Some(lhs - 2.0))));
}

fn prop_h(env: &Env, n: u64, sink: &mut dyn FnMut(Check), bound: f64) {
    let h = env.ctx.tables().h(n).to_f64();
    sink(check(n, h, bound, numeric(h, bound, 4.0 * EPS, Strictness::NonStrict, None)));
}

fn prop_h_12(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if kl_positive_hyp(env, n) {
        prop_h(env, n, sink, 12.0 / (PI * PI))
    }
}

fn prop_h_16(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if n % 2 == 1 && kl_positive_hyp(env, n) {
        prop_h(env, n, sink, 16.0 / (PI * PI))
    }
}

fn prop_h_27(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if kl_positive_hyp(env, n) {
        prop_h(env, n, sink, 27.0 / (2.0 * PI * PI))
    }
}

fn prop_klmn(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if !env.ctx.kl_sign(n).is_non_negative() {
        return;
    }
    let top = env.hi.min(env.ctx.limit());
    for m in 2..=20u64 {
        let mn = match m.checked_mul(n) {
            Some(x) if x <= top => x,
            _ => break,
        };
        let kl = env.ctx.kl_value(mn);
        let outcome = match env.ctx.kl_sign(mn) {
            KlSign::Positive => Outcome::Holds(Some(kl)),
            KlSign::Negative => Outcome::Violated,
            KlSign::ZeroAmbiguous => Outcome::Undecided,
        };
        sink(Check {
            n,
            lhs: kl,
            rhs: 0.0,
            outcome,
            detail: Some(format!("m={m}")),
        });
    }
}

fn family_2kp(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    let f = env.ctx.factorize(n);
    let &[(2, a), (p, 1)] = f.factors() else {
        return;
    };
    let k = a + 1;
    if k < 4 || k >= 63 || (p != (1u64 << k) + 1 && p != (1u64 << k) + 3) {
        return;
    }
    let kl = env.ctx.kl_value(n);
    let ok = env.ctx.kl_sign(n) == KlSign::Positive && !non_deficient(env, n);
    let outcome = if ok { Outcome::Holds(Some(kl)) } else { Outcome::Violated };
    sink(check(n, kl, 0.0, outcome));
}

fn deficient_klprim(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if !non_deficient(env, n) && is_kl_primitive(env.ctx, n) {
        sink(check(n, env.ctx.kl_value(n), 0.0, Outcome::Holds(None)));
    }
}

// ---- Pinsker-type bounds on KL ----------------------------------------------

fn pinsker(env: &Env, n: u64, sink: &mut dyn FnMut(Check), den_factor: i128) {
    let f = env.ctx.factorize(n);
    let phi = env.ctx.tables().phi(n) as i128;
    let gap = 2 * phi - n as i128;
    let bound = Ratio::new(gap * gap, den_factor * n as i128);
    let lhs = env.ctx.kl_value(n);
    let rhs = bound.to_f64();
    let ext = |bits: u32| {
        let mut e = kl_extended_sum(&f, bits);
        e.add_ratio(-bound.num, bound.den as u128);
        e
    };
    let outcome = numeric(lhs, rhs, env.ctx.kl_error_bound(n), Strictness::NonStrict, Some(&ext));
    sink(check(n, lhs, rhs, outcome));
}

fn pinsker_kl(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if perfect(env, n) {
        pinsker(env, n, sink, 2)
    }
}

fn pinsker_kl_strong(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if perfect(env, n) {
        pinsker(env, n, sink, 1)
    }
}

fn pinsker_kl_odd(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if n % 2 == 1 && non_deficient(env, n) {
        pinsker(env, n, sink, 2)
    }
}

// ---- uniform-weight inequalities --------------------------------------------

/// Σ_{d|n} φ(d)·ln φ(d) with an absolute error bound.
fn phi_log_phi_sum(f: &Factorization) -> (f64, f64) {
    let mut acc = NeumaierSum::new();
    for (_, phi) in divisors_with_phi(f) {
        let x = phi as f64;
        acc.add(x * x.ln());
    }
    (acc.value(), acc.error_bound() + 2.0 * EPS * acc.abs_sum())
}

fn n_log_n_over_tau(n: u64, tau: u64) -> f64 {
    n as f64 * (n as f64 / tau as f64).ln()
}

fn unif_ext(f: &Factorization, n: u64, tau: u64, bits: u32, single_term: bool) -> ExtendedSum {
    let mut e = ExtendedSum::new(bits);
    if single_term {
        let phi = crate::arithmetic::euler_phi(f);
        e.add_weighted_ln(phi, phi as u128, 1);
    } else {
        for (_, phi) in divisors_with_phi(f) {
            e.add_weighted_ln(phi, phi as u128, 1);
        }
    }
    e.add_weighted_ln(n, tau as u128, n as u128);
    e
}

fn prop_unif(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    let f = env.ctx.factorize(n);
    let tau = env.ctx.tables().tau(n);
    let (lhs, err) = phi_log_phi_sum(&f);
    let rhs = n_log_n_over_tau(n, tau);
    let ext = |bits: u32| unif_ext(&f, n, tau, bits, false);
    let outcome = numeric(lhs, rhs, err + 3.0 * EPS * rhs.abs(), Strictness::NonStrict, Some(&ext));
    sink(check(n, lhs, rhs, outcome));
}

fn prop_unif_pinsker(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if n < 2 {
        return;
    }
    let f = env.ctx.factorize(n);
    let tau = env.ctx.tables().tau(n);
    let (lhs, err) = phi_log_phi_sum(&f);
    let extra = n as f64 / (2.0 * (tau * tau) as f64);
    let rhs = n_log_n_over_tau(n, tau) + extra;
    let ext = |bits: u32| {
        let mut e = unif_ext(&f, n, tau, bits, false);
        e.add_ratio(-(n as i128), 2 * (tau as u128).pow(2));
        e
    };
    let outcome = numeric(lhs, rhs, err + 4.0 * EPS * rhs.abs(), Strictness::NonStrict, Some(&ext));
    sink(check(n, lhs, rhs, outcome));
}

fn false_phi(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    let f = env.ctx.factorize(n);
    let tau = env.ctx.tables().tau(n);
    let phi = env.ctx.tables().phi(n) as f64;
    let lhs = phi * phi.ln();
    let rhs = n_log_n_over_tau(n, tau);
    let ext = |bits: u32| unif_ext(&f, n, tau, bits, true);
    let outcome = numeric(lhs, rhs, 3.0 * EPS * (lhs.abs() + rhs.abs()), Strictness::NonStrict, Some(&ext));
    sink(check(n, lhs, rhs, outcome));
}

fn ineq_n3(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if n <= 3 {
        return;
    }
    let f = env.ctx.factorize(n);
    let divs = divisors_with_phi(&f);
    let mut acc = NeumaierSum::new();
    for &(d, phi) in &divs {
        let dd = d as f64;
        acc.add((n as f64 / (2.0 * dd * phi as f64)).ln() / dd);
    }
    let lhs = acc.value();
    let err = acc.error_bound() + 4.0 * EPS * acc.abs_sum();
    let ext = |bits: u32| {
        let mut e = ExtendedSum::new(bits);
        for &(d, phi) in &divs {
            e.add_ln_over(n as u128, 2 * d as u128 * phi as u128, d);
        }
        e
    };
    sink(check(n, lhs, 0.0, numeric(lhs, 0.0, err, Strictness::NonStrict, Some(&ext))));
}

// ---- v(n) -------------------------------------------------------------------

/// v(n) with an absolute error bound; n ≥ 2.
fn v_value(f: &Factorization, tau: u64) -> (f64, f64) {
    let t = (tau - 1) as f64;
    let mut acc = NeumaierSum::new();
    for d in divisors(f).into_iter().skip(1) {
        let dd = d as f64;
        acc.add((t / dd).ln() / dd);
    }
    (acc.value(), acc.error_bound() + 4.0 * EPS * acc.abs_sum())
}

/// v(n) ⋈ 1/(c·p²), or v(n) ⋈ 0 when `c` is `None`.
fn v_claim(env: &Env, n: u64, sink: &mut dyn FnMut(Check), c: Option<u64>, strict: Strictness) {
    let f = env.ctx.factorize(n);
    let tau = env.ctx.tables().tau(n);
    let p = f.smallest_prime().expect("n > 1");
    let (lhs, err) = v_value(&f, tau);
    let den = c.map(|c| c as u128 * (p as u128).pow(2));
    let rhs = den.map_or(0.0, |d| 1.0 / d as f64);
    let ext = |bits: u32| {
        let mut e = v_n_extended(&f, bits);
        if let Some(d) = den {
            e.add_ratio(-1, d);
        }
        e
    };
    sink(check(n, lhs, rhs, numeric(lhs, rhs, err, strict, Some(&ext))));
}

fn v_positive(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if perfect(env, n) {
        v_claim(env, n, sink, None, Strictness::Strict)
    }
}

fn v_pinsker(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if perfect(env, n) {
        v_claim(env, n, sink, Some(2), Strictness::NonStrict)
    }
}

fn conj_v(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if n >= 2 {
        v_claim(env, n, sink, Some(1), Strictness::NonStrict)
    }
}

fn conj_v_nondeficient(env: &Env, n: u64, sink: &mut dyn FnMut(Check)) {
    if n >= 2 && non_deficient(env, n) {
        v_claim(env, n, sink, Some(1), Strictness::NonStrict)
    }
}
