//! Hermite polynomials, polynomial root isolation, and normal tails.
//!
//! `He_l` is the probabilists' Hermite polynomial with leading
//! coefficient 1: `He_0 = 1`, `He_1 = x`,
//! `He_{l+1} = x·He_l − l·He_{l−1}`, orthogonal under `N(0,1)` with
//! `E He_a He_b = δ_{ab}·a!`.
//!
//! The exact-tail machinery computes `P(|He_k(ξ)| > x)` for a standard
//! normal ξ by isolating the real roots of `He_k ∓ x` (Sturm chains,
//! then bisection) and summing the Gaussian measure of the solution
//! intervals in log space, so tails far below `exp(-700)` stay
//! representable.

use crate::error::{Error, Result};
use statrs::function::erf::erfc;

/// Evaluation cap; the recurrence is stable but factorial growth makes
/// larger orders useless here.
pub const MAX_HERMITE: usize = 60;

/// Root-isolation cap for the exact tail.
pub const MAX_TAIL_ORDER: usize = 5;

/// `He_l(x)` by the three-term recurrence.
pub fn hermite_value(l: usize, x: f64) -> f64 {
    assert!(l <= MAX_HERMITE, "Hermite order {l} above {MAX_HERMITE}");
    let (mut prev, mut cur) = (1.0, x);
    if l == 0 {
        return 1.0;
    }
    for j in 1..l {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients of `He_l`, index = power. Exact in f64 for the orders
/// accepted here (integer coefficients below 2^53).
pub fn hermite_coefficients(l: usize) -> Vec<f64> {
    assert!(l <= 24, "coefficient triangle kept exact only to order 24");
    let mut prev = vec![1.0];
    if l == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for j in 1..l {
        // x·cur − j·prev
        let mut next = vec![0.0; j + 2];
        for (p, &c) in cur.iter().enumerate() {
            next[p + 1] += c;
        }
        for (p, &c) in prev.iter().enumerate() {
            next[p] -= j as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    let mut v = 0.0;
    for &ci in c.iter().rev() {
        v = v * x + ci;
    }
    v
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(p, &ci)| p as f64 * ci)
        .collect()
}

fn poly_trim(c: &mut Vec<f64>, scale: f64) {
    let eps = 1e-14 * scale.max(1e-300);
    while c.len() > 1 && c.last().map(|v| v.abs() <= eps).unwrap_or(false) {
        c.pop();
    }
}

/// Remainder of `a / b`, coefficients ascending.
fn poly_rem(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    while r.len() - 1 >= db && r.len() > 1 {
        let dr = r.len() - 1;
        let factor = r[dr] / lead;
        for i in 0..=db {
            r[dr - db + i] -= factor * b[i];
        }
        r.pop();
        let scale = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        poly_trim(&mut r, scale);
        if r.len() == 1 && r[0].abs() <= 1e-14 * scale.max(1.0) {
            return vec![0.0];
        }
    }
    r
}

fn sturm_chain(c: &[f64]) -> Vec<Vec<f64>> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut p0: Vec<f64> = c.iter().map(|v| v / scale).collect();
    poly_trim(&mut p0, 1.0);
    let mut chain = vec![p0.clone()];
    if p0.len() > 1 {
        chain.push(poly_derivative(&p0));
    }
    while chain.last().map(|p| p.len() > 1).unwrap_or(false) {
        let n = chain.len();
        let mut rem = poly_rem(&chain[n - 2], &chain[n - 1]);
        for v in rem.iter_mut() {
            *v = -*v;
        }
        if rem.len() == 1 && rem[0] == 0.0 {
            break;
        }
        chain.push(rem);
    }
    chain
}

/// Whether `x` is a numerical zero of the polynomial, under the same
/// guard [`sign_changes`] uses to suppress noise signs.
fn near_zero(p: &[f64], x: f64) -> bool {
    let mag = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    poly_eval(p, x).abs() <= 1e-12 * mag * x.abs().max(1.0).powi(p.len() as i32 - 1)
}

fn sign_changes(chain: &[Vec<f64>], x: f64) -> usize {
    let mut changes = 0;
    let mut last = 0.0f64;
    for p in chain {
        let v = poly_eval(p, x);
        let mag = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let s = if v.abs() <= 1e-12 * mag * x.abs().max(1.0).powi(p.len() as i32 - 1) {
            0.0
        } else {
            v.signum()
        };
        if s != 0.0 {
            if last != 0.0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// All real roots of the polynomial with ascending `coeffs`, isolated by
/// Sturm bisection and refined to `tol` (absolute, relative to the root
/// magnitude). Assumes simple roots, which holds for every polynomial
/// this crate feeds it.
pub fn real_roots(coeffs: &[f64], tol: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    poly_trim(&mut c, scale);
    if c.len() <= 1 {
        return Vec::new();
    }
    if c.len() == 2 {
        return vec![-c[0] / c[1]];
    }
    let lead = *c.last().expect("nonempty");
    let bound = 1.0 + c[..c.len() - 1]
        .iter()
        .fold(0.0f64, |m, v| m.max((v / lead).abs()));
    let chain = sturm_chain(&c);
    let mut roots = Vec::new();
    // (lo, hi, roots in (lo, hi]).
    let total = sign_changes(&chain, -bound) - sign_changes(&chain, bound);
    let mut stack = vec![(-bound, bound, total)];
    while let Some((lo, hi, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            roots.push(refine_root(&c, lo, hi, tol));
            continue;
        }
        // Sturm counts are only valid at non-roots; a midpoint landing on
        // a root (0 for every odd-degree Hermite polynomial) silently
        // miscounts, so nudge off any numerical zero of the polynomial.
        let mut frac = 0.5;
        let mut mid = lo + frac * (hi - lo);
        while near_zero(&c, mid) && frac < 0.6 {
            frac += 0.013;
            mid = lo + frac * (hi - lo);
        }
        let left = sign_changes(&chain, lo) - sign_changes(&chain, mid);
        stack.push((lo, mid, left));
        stack.push((mid, hi, count - left));
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    roots
}

/// Bisection on a sign change; falls back to the Sturm count if the
/// endpoint signs agree (the root sits on an endpoint numerically).
fn refine_root(c: &[f64], mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = poly_eval(c, lo);
    if flo == 0.0 {
        return lo;
    }
    let fhi = poly_eval(c, hi);
    if fhi == 0.0 {
        return hi;
    }
    if flo.signum() == fhi.signum() {
        // A simple root strictly inside with equal endpoint signs cannot
        // happen; numerically closest endpoint wins.
        return if flo.abs() < fhi.abs() { lo } else { hi };
    }
    while hi - lo > tol * hi.abs().max(lo.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        let fmid = poly_eval(c, mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Gauss–Hermite nodes and weights under the `N(0,1)` weight: nodes are
/// the roots of `He_n`, weights `w_i = n! / (n² · He_{n−1}(x_i)²)`.
/// Exact for polynomials of degree ≤ 2n−1.
pub fn gauss_hermite(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 || n > 20 {
        return Err(Error::InvalidParam(
            "quadrature size must be in 1..=20".into(),
        ));
    }
    let coeffs = hermite_coefficients(n);
    let nodes = real_roots(&coeffs, 1e-14);
    if nodes.len() != n {
        return Err(Error::InvalidParam(format!(
            "expected {n} quadrature nodes, isolated {}",
            nodes.len()
        )));
    }
    let nf = crate::util::factorial_u128(n) as f64;
    Ok(nodes
        .into_iter()
        .map(|x| {
            let h = hermite_value(n - 1, x);
            (x, nf / ((n * n) as f64 * h * h))
        })
        .collect())
}

/// `ln Φ̄(t)` for the standard normal survival function, accurate over
/// the whole line: complementary error function up to `t = 8`, the
/// divergent-series asymptotics `Φ̄(t) = φ(t)/t · (1 − 1/t² + 3/t⁴ − …)`
/// beyond, truncated at its smallest term.
pub fn ln_normal_sf(t: f64) -> f64 {
    if t < -8.0 {
        // ln(1 − Φ̄(−t)) with a tiny Φ̄(−t).
        return (-ln_normal_sf(-t).exp()).ln_1p();
    }
    if t <= 8.0 {
        return (0.5 * erfc(t / std::f64::consts::SQRT_2)).ln();
    }
    let inv2 = 1.0 / (t * t);
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut prev_mag = f64::INFINITY;
    for n in 1..=12u32 {
        term *= -(2.0 * n as f64 - 1.0) * inv2;
        if term.abs() >= prev_mag {
            break;
        }
        prev_mag = term.abs();
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    -0.5 * t * t - (t * (2.0 * std::f64::consts::PI).sqrt()).ln() + sum.ln()
}

/// `Φ̄(t) = P(ξ > t)`.
pub fn normal_sf(t: f64) -> f64 {
    if t < -8.0 {
        return 1.0 - normal_sf(-t);
    }
    if t <= 8.0 {
        return 0.5 * erfc(t / std::f64::consts::SQRT_2);
    }
    ln_normal_sf(t).exp()
}

/// `ln P(|He_k(ξ)| > x)` exactly (up to root isolation at 1e-14 and the
/// normal-tail evaluation): the event is a union of intervals cut by the
/// real roots of `He_k ∓ x`, and their Gaussian masses are combined by
/// log-sum-exp.
pub fn hermite_tail_ln(k: usize, x: f64) -> Result<f64> {
    if k == 0 || k > MAX_TAIL_ORDER {
        return Err(Error::OrderRange {
            order: k,
            min: 1,
            max: MAX_TAIL_ORDER,
        });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidParam("x must be finite and ≥ 0".into()));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let he = hermite_coefficients(k);
    let mut cuts = Vec::new();
    for target in [x, -x] {
        let mut shifted = he.clone();
        shifted[0] -= target;
        cuts.extend(real_roots(&shifted, 1e-14));
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    // ln-masses of the maximal intervals where |He_k| exceeds x.
    let mut masses: Vec<f64> = Vec::new();
    let exceeds = |t: f64| hermite_value(k, t).abs() > x;
    for i in 0..=cuts.len() {
        let lo = if i == 0 { None } else { Some(cuts[i - 1]) };
        let hi = if i == cuts.len() { None } else { Some(cuts[i]) };
        let probe = match (lo, hi) {
            (None, None) => 0.0,
            (None, Some(b)) => b - 1.0,
            (Some(a), None) => a + 1.0,
            (Some(a), Some(b)) => 0.5 * (a + b),
        };
        if !exceeds(probe) {
            continue;
        }
        let ln_mass = match (lo, hi) {
            (None, None) => 0.0,
            (None, Some(b)) => ln_normal_sf(-b),
            (Some(a), None) => ln_normal_sf(a),
            (Some(a), Some(b)) => {
                let la = ln_normal_sf(a);
                let lb = ln_normal_sf(b);
                la + (-(lb - la).exp()).ln_1p()
            }
        };
        masses.push(ln_mass);
    }
    if masses.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    let top = masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rest: f64 = masses.iter().map(|&m| (m - top).exp()).sum();
    Ok(top + rest.ln())
}

/// `P(|He_k(ξ)| > x)`; underflows to 0 for extreme `x`.
pub fn hermite_tail(k: usize, x: f64) -> Result<f64> {
    Ok(hermite_tail_ln(k, x)?.exp())
}

/// `−ln P(|He_k(ξ)| > x) / (x^{2/k}/2)`: the sharpness diagnostic that
/// tends to 1 as `x → ∞`.
pub fn sharpness_ratio(k: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidParam("x must be positive".into()));
    }
    let ln_p = hermite_tail_ln(k, x)?;
    Ok(-ln_p / (x.powf(2.0 / k as f64) / 2.0))
}
