//! Moment and tail bound evaluators.
//!
//! All bounds are parametrized by explicit constants that default to 1:
//! the inequalities they encode hold for *some* universal constants, so
//! useful checks are ratio-based (how large must the constant be) rather
//! than absolute. `v_s` arguments follow the partition-norm convention
//! `v_s[s-1] = V̄_s` for a kernel of order `k = v_s.len()`.
//!
//! The central quantity is the tail exponent argument
//!
//! ```text
//! min( x²/V̄₁²,  min_{2≤s≤k} (x / (V̄₁^{(s−2)/(s−1)} · V̄_s^{1/(s−1)}))^{2/k} )
//! ```
//!
//! which is exactly what optimizing the Markov bound
//! `P(|Z| > x) ≤ E Z^{2M} / x^{2M}` over `M` against the moment bound
//! produces. At `k = 2` it reduces to `min(x²/Λ², x/‖A‖)`, the
//! Hanson–Wright shape for quadratic forms, and the test suite pins that
//! equivalence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::chaos_moment;
use crate::partition::{norm_profile, NormConfig};
use crate::tensor::CoefficientTensor;

/// Constants the bound evaluators are allowed to tune: `c` scales the
/// moment bound, `c1`/`c2` the tail bound, and `c_tilde` the
/// Markov-order selection.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundParams {
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub c_tilde: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            c: 1.0,
            c1: 1.0,
            c2: 1.0,
            c_tilde: 1.0,
        }
    }
}

fn check_norms(v_s: &[f64]) -> Result<()> {
    if v_s.is_empty() {
        return Err(Error::InvalidParam("empty norm ladder".into()));
    }
    if v_s.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidParam("norms must be finite and ≥ 0".into()));
    }
    Ok(())
}

fn check_positive(x: f64, what: &str) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParam(format!("{what} must be positive")));
    }
    Ok(())
}

/// The argument of the exponential in the tail bound; `+∞` when a
/// denominator vanishes (a zero norm means the variable is that much
/// smaller, never larger).
pub fn tail_exponent_argument(v_s: &[f64], x: f64) -> Result<f64> {
    check_norms(v_s)?;
    check_positive(x, "x")?;
    let k = v_s.len();
    let v1 = v_s[0];
    let mut arg = if v1 > 0.0 {
        (x / v1).powi(2)
    } else {
        f64::INFINITY
    };
    for s in 2..=k {
        let denom = v1.powf((s as f64 - 2.0) / (s as f64 - 1.0))
            * v_s[s - 1].powf(1.0 / (s as f64 - 1.0));
        let term = if denom > 0.0 {
            (x / denom).powf(2.0 / k as f64)
        } else {
            f64::INFINITY
        };
        arg = arg.min(term);
    }
    Ok(arg)
}

/// Moment bound for `E Z^{2M}` from the norm ladder:
///
/// ```text
/// C^M · V̄₁^{2M} · max(M, M^k · max_{2≤s≤k} (V̄_s/V̄₁)^{2/(s−1)})^M
/// ```
///
/// Returns 0 for the zero tensor (`V̄₁ = 0`).
pub fn moment_bound_main(v_s: &[f64], big_m: usize, params: &BoundParams) -> Result<f64> {
    check_norms(v_s)?;
    if big_m == 0 {
        return Err(Error::InvalidParam("M must be ≥ 1".into()));
    }
    let k = v_s.len();
    let v1 = v_s[0];
    if v1 == 0.0 {
        return Ok(0.0);
    }
    let m = big_m as f64;
    let mut inner = m;
    for s in 2..=k {
        let ratio = (v_s[s - 1] / v1).powf(2.0 / (s as f64 - 1.0));
        inner = inner.max(m.powi(k as i32) * ratio);
    }
    Ok((params.c * v1 * v1 * inner).powi(big_m as i32))
}

/// Tail bound `C₁ exp{−C₂ · arg}` with [`tail_exponent_argument`].
pub fn tail_bound_main(v_s: &[f64], params: &BoundParams, x: f64) -> Result<f64> {
    let arg = tail_exponent_argument(v_s, x)?;
    Ok(params.c1 * (-params.c2 * arg).exp())
}

/// The Markov order the tail bound implicitly optimizes: the closest
/// integer to `C̃ · arg`, at least 1.
pub fn markov_order(v_s: &[f64], params: &BoundParams, x: f64) -> Result<usize> {
    let arg = tail_exponent_argument(v_s, x)?;
    let m = (params.c_tilde * arg).round();
    if !m.is_finite() {
        return Ok(usize::MAX);
    }
    Ok((m as usize).max(1))
}

/// Single-norm moment bound `C · (2kM/e)^{kM} · V₁^{2M}`.
pub fn moment_bound_single_norm(v1: f64, k: usize, big_m: usize, c: f64) -> Result<f64> {
    check_positive(v1, "V₁")?;
    if k == 0 || big_m == 0 {
        return Err(Error::InvalidParam("k and M must be ≥ 1".into()));
    }
    let km = (k * big_m) as f64;
    Ok(c * (2.0 * km / std::f64::consts::E).powf(km) * v1.powi(2 * big_m as i32))
}

/// Single-norm tail bound `C₁ exp{−½ (x/V₁)^{2/k}}`. The ½ is fixed:
/// it is the exponent the sharpness example converges to.
pub fn tail_bound_single_norm(v1: f64, k: usize, params: &BoundParams, x: f64) -> Result<f64> {
    check_positive(v1, "V₁")?;
    check_positive(x, "x")?;
    if k == 0 {
        return Err(Error::InvalidParam("k must be ≥ 1".into()));
    }
    Ok(params.c1 * (-0.5 * (x / v1).powf(2.0 / k as f64)).exp())
}

/// Quadratic-form tail bound `C₁ exp{−min(C₂ x/‖A‖, C₂ x²/Λ²)}` with
/// `Λ` the Frobenius and `‖A‖` the spectral norm.
pub fn hanson_wright_bound(
    lambda: f64,
    opnorm: f64,
    params: &BoundParams,
    x: f64,
) -> Result<f64> {
    check_positive(x, "x")?;
    if lambda < 0.0 || opnorm < 0.0 {
        return Err(Error::InvalidParam("norms must be ≥ 0".into()));
    }
    let linear = if opnorm > 0.0 {
        params.c2 * x / opnorm
    } else {
        f64::INFINITY
    };
    let quadratic = if lambda > 0.0 {
        params.c2 * x * x / (lambda * lambda)
    } else {
        f64::INFINITY
    };
    Ok(params.c1 * (-linear.min(quadratic)).exp())
}

/// Outcome of checking the fixed-`R` moment inequality
/// `E Z^{2M} ≤ C^M M^{kM} R^{2M}` on one kernel.
#[derive(Clone, Debug, Serialize)]
pub struct SimplifiedCheck {
    pub order: usize,
    pub big_m: usize,
    pub r: f64,
    /// Norm ladder of the kernel, `v_s[s-1] = V̄_s`.
    pub v_s: Vec<f64>,
    /// `V̄_s ≤ R^{s−1}` for all `s` and `R ≥ M^{−(k−1)/2}`, with float
    /// headroom `1+1e-9` for ladders produced by rescaling.
    pub hypotheses_met: bool,
    /// Exact `E Z^{2M}` by the diagram formula.
    pub moment: f64,
    /// Smallest constant making the inequality hold:
    /// `(moment / (M^{kM} R^{2M}))^{1/M}`.
    pub c_star: f64,
}

/// Evaluate the exact moment against `M^{kM} R^{2M}` and report the
/// minimal admissible constant. Hypothesis failures are flagged, not
/// errors: the caller decides whether the number means anything.
pub fn simplified_theorem_check(
    a: &CoefficientTensor,
    big_m: usize,
    r: f64,
    cfg: &NormConfig,
) -> Result<SimplifiedCheck> {
    if big_m == 0 {
        return Err(Error::InvalidParam("M must be ≥ 1".into()));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParam("R must be finite and ≥ 0".into()));
    }
    let k = a.order();
    let profile = norm_profile(a, cfg)?;
    let slack = 1.0 + 1e-9;
    let mut ok = r >= (big_m as f64).powf(-((k as f64 - 1.0) / 2.0));
    for s in 1..=k {
        if profile.v_s[s - 1] > r.powi(s as i32 - 1) * slack {
            ok = false;
        }
    }
    let moment = chaos_moment(a, 2 * big_m)?;
    let denom = (big_m as f64).powi((k * big_m) as i32) * r.powi(2 * big_m as i32);
    let c_star = if denom > 0.0 {
        (moment / denom).powf(1.0 / big_m as f64)
    } else {
        f64::INFINITY
    };
    Ok(SimplifiedCheck {
        order: k,
        big_m,
        r,
        v_s: profile.v_s,
        hypotheses_met: ok,
        moment,
        c_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::rng;
    use crate::util::double_factorial_odd;
    use rand::Rng;

    fn p() -> BoundParams {
        BoundParams::default()
    }

    #[test]
    fn tail_bound_reduces_to_hanson_wright_at_order_two() {
        let mut rng = rng::stream(7, &[1]);
        for _ in 0..20 {
            let lambda: f64 = rng.gen_range(0.2..3.0);
            let opnorm: f64 = rng.gen_range(0.05..1.0) * lambda;
            let x: f64 = rng.gen_range(0.1..50.0);
            let via_ladder = tail_bound_main(&[lambda, opnorm], &p(), x).unwrap();
            let via_quadratic = hanson_wright_bound(lambda, opnorm, &p(), x).unwrap();
            assert!(
                (via_ladder - via_quadratic).abs() <= 1e-12 * via_quadratic.max(1e-300),
                "{via_ladder} vs {via_quadratic}"
            );
        }
    }

    #[test]
    fn tail_exponent_plug_ins() {
        // k=1: pure Gaussian shape.
        let arg = tail_exponent_argument(&[2.0], 4.0).unwrap();
        assert!((arg - 4.0).abs() < 1e-12);
        // Small x: the quadratic term wins; large x: the s=k term wins.
        let v = [1.0, 0.5, 0.25];
        let small = tail_exponent_argument(&v, 0.1).unwrap();
        assert!((small - 0.01).abs() < 1e-12);
        let large_x = 1e6;
        let big = tail_exponent_argument(&v, large_x).unwrap();
        let s3 = (large_x / (1.0f64.powf(0.5) * 0.25f64.powf(0.5))).powf(2.0 / 3.0);
        assert!((big - s3).abs() <= 1e-9 * s3);
        // Zero tensor: bound collapses to 0.
        let z = tail_bound_main(&[0.0, 0.0], &p(), 1.0).unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn tail_bound_limits_and_monotonicity() {
        let v = [1.0, 0.3];
        let near_zero = tail_bound_main(&v, &p(), 1e-12).unwrap();
        assert!((near_zero - 1.0).abs() < 1e-9);
        let mut prev = f64::INFINITY;
        for i in 1..60 {
            let x = 0.2 * i as f64;
            let b = tail_bound_main(&v, &p(), x).unwrap();
            assert!(b <= prev + 1e-15, "x={x}");
            prev = b;
        }
    }

    #[test]
    fn bounds_are_monotone_in_each_norm() {
        let mut rng = rng::stream(7, &[2]);
        for _ in 0..30 {
            let v1: f64 = rng.gen_range(0.5..2.0);
            let v2: f64 = rng.gen_range(0.1..1.0) * v1;
            let v3: f64 = rng.gen_range(0.1..1.0) * v2;
            let x: f64 = rng.gen_range(0.5..20.0);
            let base_t = tail_bound_main(&[v1, v2, v3], &p(), x).unwrap();
            let base_m = moment_bound_main(&[v1, v2, v3], 3, &p()).unwrap();
            for s in 0..3 {
                let mut v = [v1, v2, v3];
                v[s] *= 1.1;
                let t = tail_bound_main(&v, &p(), x).unwrap();
                let m = moment_bound_main(&v, 3, &p()).unwrap();
                assert!(t >= base_t - 1e-15, "tail not monotone in s={}", s + 1);
                assert!(m >= base_m - 1e-12 * base_m, "moment not monotone in s={}", s + 1);
            }
        }
    }

    #[test]
    fn moment_bound_plug_ins() {
        // k=2, V̄₁ = V̄₂ = 1, M = 1: max(1, 1·1) = 1.
        let b = moment_bound_main(&[1.0, 1.0], 1, &p()).unwrap();
        assert!((b - 1.0).abs() < 1e-12);
        // V̄₂ = M^{-1/2} keeps the inner max at M: Gaussian-type M^M.
        for big_m in 1..=6usize {
            let m = big_m as f64;
            let b = moment_bound_main(&[1.0, m.powf(-0.5)], big_m, &p()).unwrap();
            assert!((b - m.powi(big_m as i32)).abs() <= 1e-9 * b, "M={big_m}");
        }
        assert_eq!(moment_bound_main(&[0.0, 0.0], 2, &p()).unwrap(), 0.0);
    }

    #[test]
    fn single_norm_plug_ins() {
        // x = V₁: exp(−1/2) regardless of k.
        for k in 1..=3usize {
            let b = tail_bound_single_norm(2.0, k, &p(), 2.0).unwrap();
            assert!((b - (-0.5f64).exp()).abs() < 1e-12, "k={k}");
        }
        // k=1: Gaussian shape exp(−x²/2V₁²).
        let b = tail_bound_single_norm(1.5, 1, &p(), 3.0).unwrap();
        assert!((b - (-2.0f64).exp()).abs() < 1e-12);
        // Moment form at k=1, M=1, V₁=1: 2/e.
        let m = moment_bound_single_norm(1.0, 1, 1, 1.0).unwrap();
        assert!((m - 2.0 / std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn hanson_wright_shape() {
        // Large x with fixed opnorm: exponential in x.
        let b1 = hanson_wright_bound(1.0, 0.5, &p(), 100.0).unwrap();
        let b2 = hanson_wright_bound(1.0, 0.5, &p(), 101.0).unwrap();
        assert!((b2 / b1 - (-2.0f64).exp()).abs() < 1e-12);
        // Small x: quadratic regime.
        let s = hanson_wright_bound(2.0, 0.5, &p(), 0.1).unwrap();
        assert!((s - (-0.1f64 * 0.1 / 4.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn markov_order_tracks_argument() {
        let v = [1.0, 0.5];
        let arg = tail_exponent_argument(&v, 6.0).unwrap();
        let m = markov_order(&v, &p(), 6.0).unwrap();
        assert_eq!(m, arg.round().max(1.0) as usize);
        assert_eq!(markov_order(&v, &p(), 1e-6).unwrap(), 1);
    }

    #[test]
    fn simplified_check_gaussian_anchor() {
        // k=1, unit vector, R=1: moment (2M−1)!!, C* = ((2M−1)!!/M^M)^{1/M} ≤ 2.
        let a = gen::random_symmetric_unit(1, 3, 3, 600);
        let cfg = NormConfig::default();
        for big_m in 1..=4usize {
            let rep = simplified_theorem_check(&a, big_m, 1.0, &cfg).unwrap();
            assert!(rep.hypotheses_met, "M={big_m}");
            let want = double_factorial_odd(big_m) as f64;
            assert!((rep.moment - want).abs() <= 1e-9 * want);
            assert!(rep.c_star <= 2.0, "M={big_m}: C*={}", rep.c_star);
        }
    }

    #[test]
    fn simplified_check_flags_violated_hypotheses() {
        let a = gen::random_symmetric_unit(2, 3, 5, 601);
        let cfg = NormConfig::default();
        // R too small for the ladder: V̄₁ = 1 > R⁰ is fine, but
        // R < M^{-1/2} violates the floor.
        let rep = simplified_theorem_check(&a, 4, 0.1, &cfg).unwrap();
        assert!(!rep.hypotheses_met);
        // Scaled ladder satisfies the hypotheses.
        let (scaled, _) = gen::scale_to_ladder(&a, 0.8, &cfg).unwrap();
        let rep = simplified_theorem_check(&scaled, 2, 0.8, &cfg).unwrap();
        assert!(rep.hypotheses_met);
        assert!(rep.c_star.is_finite());
    }

    #[test]
    fn parameter_validation() {
        assert!(tail_exponent_argument(&[], 1.0).is_err());
        assert!(tail_exponent_argument(&[1.0], 0.0).is_err());
        assert!(tail_exponent_argument(&[-1.0], 1.0).is_err());
        assert!(moment_bound_main(&[1.0], 0, &p()).is_err());
        assert!(tail_bound_single_norm(0.0, 2, &p(), 1.0).is_err());
        assert!(hanson_wright_bound(1.0, 1.0, &p(), -1.0).is_err());
    }
}
