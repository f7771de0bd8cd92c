//! Empirical lab for trilinear chaos: conditional decomposition and the
//! open `M^{−1/2}` question.
//!
//! For an order-3 kernel `a` and independent `N(0,1)` vectors ξ, η, ζ,
//! conditioning `Σ a(i,j,k) ξ_i η_j ζ_k` on `ξ = x` leaves the bilinear
//! form with matrix `A(j,k|x) = Σ_i a(i,j,k)·x_i`. Two suprema of that
//! form drive the analysis:
//!
//! * `sup_X`: over Hilbert–Schmidt-unit test matrices; equals the
//!   Frobenius norm of `A(·,·|x)`, exactly;
//! * `sup_Y`: over unit vector pairs `(v, w)`; equals the largest
//!   singular value of `A(·,·|x)`.
//!
//! Whether `E sup_Y ≤ C·M^{−1/2}` holds under the hypothesis ladder is
//! open; the proven bound has exponent `M^{−1/4}`. This module only
//! gathers evidence: it reports ratio tables against both exponents and
//! never asserts the stronger one.
//!
//! Hypothesis ladder: `V̄_1(a) ≤ 1`, every 2-block partition norm
//! `≤ R`, the 3-block norm `≤ R²`, with `R = M^{−1/2}` in the standard
//! reading and a free scale in the generalized one.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen;
use crate::partition::{norm_profile, NormConfig};
use crate::rng;
use crate::tensor::CoefficientTensor;
use crate::util::Kahan;

const SAMPLE_TAG: u64 = 0x1A7A;
const POWER_TAG: u64 = 0x90E7;

/// Relative slack when comparing a computed norm against its ladder
/// limit, absorbing optimizer rounding on instances built to sit exactly
/// on a line.
const LADDER_SLACK: f64 = 1e-9;

/// Default spectral-norm iteration controls for per-sample work.
const SPECTRAL_RESTARTS: usize = 4;
const SPECTRAL_TOL: f64 = 1e-12;
const SPECTRAL_MAX_ITER: usize = 1000;

/// An order-3 kernel with the integer `M` and the hypothesis scale `R`
/// it is meant to be checked against (`R = M^{−1/2}` unless generalized).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrilinearInstance {
    pub a: CoefficientTensor,
    pub big_m: usize,
    pub hypothesis_scale: f64,
}

impl TrilinearInstance {
    pub fn new(a: CoefficientTensor, big_m: usize) -> Result<Self> {
        let r = 1.0 / (big_m as f64).sqrt();
        Self::with_scale(a, big_m, r)
    }

    pub fn with_scale(a: CoefficientTensor, big_m: usize, r: f64) -> Result<Self> {
        if a.order() != 3 {
            return Err(Error::OrderMismatch {
                expected: 3,
                got: a.order(),
            });
        }
        if big_m == 0 {
            return Err(Error::InvalidParam("M must be positive".into()));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParam("scale must be positive".into()));
        }
        Ok(Self {
            a,
            big_m,
            hypothesis_scale: r,
        })
    }

    /// Ladder check at this instance's scale.
    pub fn check(&self, config: &NormConfig) -> Result<HypothesisReport> {
        check_ladder(&self.a, self.big_m, self.hypothesis_scale, config)
    }
}

/// One hypothesis line: a computed norm against its limit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisLine {
    /// Partition shown 1-based, e.g. `{1}{2,3}`.
    pub partition: String,
    pub value: f64,
    pub limit: f64,
    pub satisfied: bool,
    /// False when `value` is only a certified lower bound, making a
    /// `satisfied` verdict heuristic (violations stay definitive).
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub big_m: usize,
    pub scale: f64,
    pub lines: Vec<HypothesisLine>,
    pub all_pass: bool,
    /// True when some satisfied line rests on a lower bound only.
    pub heuristic: bool,
}

/// Standard hypothesis check: `V̄_1 ≤ 1`, 2-block lines `≤ M^{−1/2}`,
/// 3-block line `≤ M^{−1}`.
pub fn check_hypotheses(
    a: &CoefficientTensor,
    big_m: usize,
    config: &NormConfig,
) -> Result<HypothesisReport> {
    check_ladder(a, big_m, 1.0 / (big_m as f64).sqrt(), config)
}

/// Generalized ladder with an explicit scale: limits `1`, `R`, `R²` by
/// block count.
pub fn check_ladder(
    a: &CoefficientTensor,
    big_m: usize,
    r: f64,
    config: &NormConfig,
) -> Result<HypothesisReport> {
    if a.order() != 3 {
        return Err(Error::OrderMismatch {
            expected: 3,
            got: a.order(),
        });
    }
    let profile = norm_profile(a, config)?;
    let mut lines = Vec::new();
    for entry in &profile.per_partition {
        let s = entry.partition.num_blocks();
        let limit = match s {
            1 => 1.0,
            2 => r,
            _ => r * r,
        };
        let exact = s <= 2;
        lines.push(HypothesisLine {
            partition: entry.partition.to_string(),
            value: entry.value,
            limit,
            satisfied: entry.value <= limit * (1.0 + LADDER_SLACK),
            exact,
        });
    }
    let all_pass = lines.iter().all(|l| l.satisfied);
    let heuristic = lines.iter().any(|l| l.satisfied && !l.exact);
    Ok(HypothesisReport {
        big_m,
        scale: r,
        lines,
        all_pass,
        heuristic,
    })
}

/// Dense `dim × dim` realization of `A(j,k|x) = Σ_i a(i,j,k)·x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionedMatrix {
    dim: usize,
    /// Row-major, 0-based `(j, k)`.
    values: Vec<f64>,
}

impl ConditionedMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at 1-based `(j, k)`, matching tensor index conventions.
    pub fn get(&self, j: usize, k: usize) -> f64 {
        assert!(j >= 1 && j <= self.dim && k >= 1 && k <= self.dim);
        self.values[(j - 1) * self.dim + (k - 1)]
    }

    pub fn frobenius(&self) -> f64 {
        let mut acc = Kahan::new();
        for v in &self.values {
            acc.add(v * v);
        }
        acc.value().sqrt()
    }

    fn apply(&self, w: &[f64], out: &mut [f64]) {
        for j in 0..self.dim {
            let row = &self.values[j * self.dim..(j + 1) * self.dim];
            out[j] = row.iter().zip(w).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_transposed(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for j in 0..self.dim {
            let row = &self.values[j * self.dim..(j + 1) * self.dim];
            for (o, &a) in out.iter_mut().zip(row) {
                *o += a * v[j];
            }
        }
    }

    /// Largest singular value by power iteration on `AᵀA` with seeded
    /// restarts. The returned value is an achieved Rayleigh quotient, so
    /// it never exceeds the true singular value.
    pub fn spectral(&self, restarts: usize, tol: f64) -> f64 {
        let mut best = 0.0f64;
        let mut av = vec![0.0; self.dim];
        let mut atav = vec![0.0; self.dim];
        for restart in 0..restarts.max(1) {
            let mut rng = rng::stream(POWER_TAG, &[restart as u64]);
            let mut w: Vec<f64> = (0..self.dim).map(|_| rng.sample(StandardNormal)).collect();
            let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n == 0.0 {
                continue;
            }
            w.iter_mut().for_each(|x| *x /= n);
            let mut sigma = 0.0f64;
            for _ in 0..SPECTRAL_MAX_ITER {
                self.apply(&w, &mut av);
                let new_sigma = av.iter().map(|x| x * x).sum::<f64>().sqrt();
                if new_sigma <= 1e-300 {
                    sigma = 0.0;
                    break;
                }
                self.apply_transposed(&av, &mut atav);
                let n = atav.iter().map(|x| x * x).sum::<f64>().sqrt();
                w = atav.iter().map(|x| x / n).collect();
                if (new_sigma - sigma).abs() <= tol * new_sigma {
                    sigma = new_sigma;
                    break;
                }
                sigma = new_sigma;
            }
            best = best.max(sigma);
        }
        best
    }
}

/// Contract the first axis of an order-3 kernel with `x` (0-based slice
/// of length `dim`). Entries are folded in canonical tensor order, so the
/// result is deterministic.
pub fn conditioned_matrix(a: &CoefficientTensor, x: &[f64]) -> Result<ConditionedMatrix> {
    if a.order() != 3 {
        return Err(Error::OrderMismatch {
            expected: 3,
            got: a.order(),
        });
    }
    if x.len() != a.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: x.len(),
        });
    }
    let dim = a.dim();
    let mut values = vec![0.0; dim * dim];
    for (idx, v) in a.raw_entries() {
        let (i, j, k) = (idx[0] as usize, idx[1] as usize, idx[2] as usize);
        values[j * dim + k] += v * x[i];
    }
    Ok(ConditionedMatrix { dim, values })
}

/// `sup` over Hilbert–Schmidt-unit test matrices of the conditioned
/// bilinear form: the Frobenius norm of `A(·,·|x)`, in closed form.
pub fn sup_x(a: &CoefficientTensor, x: &[f64]) -> Result<f64> {
    Ok(conditioned_matrix(a, x)?.frobenius())
}

/// `sup` over unit vector pairs: the largest singular value of
/// `A(·,·|x)`.
pub fn sup_y(a: &CoefficientTensor, x: &[f64], restarts: usize, tol: f64) -> Result<f64> {
    Ok(conditioned_matrix(a, x)?.spectral(restarts, tol))
}

/// `E[sup_X²] = Σ_i Σ_{j,k} a(i,j,k)²`, computed slice by slice through
/// the conditioned matrix (a code path disjoint from `frobenius_norm` on
/// the kernel, against which the identity is tested).
pub fn sup_x_second_moment(a: &CoefficientTensor) -> Result<f64> {
    let dim = a.dim();
    let mut acc = Kahan::new();
    let mut basis = vec![0.0; dim];
    for i in 0..dim {
        basis[i] = 1.0;
        let slice = conditioned_matrix(a, &basis)?;
        basis[i] = 0.0;
        let f = slice.frobenius();
        acc.add(f * f);
    }
    Ok(acc.value())
}

/// `E Y(v,w)² = Σ_i (Σ_{j,k} a(i,j,k) v_j w_k)²` for fixed `v, w`
/// (0-based slices). Under the ladder this is at most the squared
/// 3-block norm, hence `≤ R⁴ = M^{−2}` at the standard scale.
pub fn y_second_moment(a: &CoefficientTensor, v: &[f64], w: &[f64]) -> Result<f64> {
    if a.order() != 3 {
        return Err(Error::OrderMismatch {
            expected: 3,
            got: a.order(),
        });
    }
    if v.len() != a.dim() || w.len() != a.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: v.len().min(w.len()),
        });
    }
    let dim = a.dim();
    let mut per_i = vec![Kahan::new(); dim];
    for (idx, val) in a.raw_entries() {
        let (i, j, k) = (idx[0] as usize, idx[1] as usize, idx[2] as usize);
        per_i[i].add(val * v[j] * w[k]);
    }
    let mut acc = Kahan::new();
    for k in per_i {
        let t = k.value();
        acc.add(t * t);
    }
    Ok(acc.value())
}

/// Monte Carlo summary for `E sup_Y` on one instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupYEstimate {
    pub big_m: usize,
    pub samples: usize,
    pub estimate: f64,
    /// 1.96 standard errors.
    pub ci_half: f64,
    /// `estimate / M^{−1/2}`: the open conjectured rate.
    pub ratio_m_half: f64,
    /// `estimate / M^{−1/4}`: the proven rate.
    pub ratio_m_quarter: f64,
    pub hypotheses: HypothesisReport,
}

/// Estimate `E sup_Y` over `samples` draws of `x ~ N(0, I)`. Per-sample
/// streams keep the result independent of thread count. The hypothesis
/// report rides along as a status flag; a violation never aborts the
/// estimate, the caller decides what a violated ladder means.
pub fn estimate_sup_y_expectation(
    inst: &TrilinearInstance,
    samples: usize,
    seed: u64,
    config: &NormConfig,
) -> Result<SupYEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParam("need at least one sample".into()));
    }
    let hypotheses = inst.check(config)?;
    let dim = inst.a.dim();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, &[SAMPLE_TAG, i as u64]);
            let x: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            conditioned_matrix(&inst.a, &x)
                .expect("validated instance")
                .spectral(SPECTRAL_RESTARTS, SPECTRAL_TOL)
        })
        .collect();
    let mut acc = Kahan::new();
    for &v in &values {
        acc.add(v);
    }
    let estimate = acc.value() / samples as f64;
    let mut var = Kahan::new();
    for &v in &values {
        var.add((v - estimate) * (v - estimate));
    }
    let sd = (var.value() / (samples.max(2) - 1) as f64).sqrt();
    let ci_half = 1.96 * sd / (samples as f64).sqrt();
    let m = inst.big_m as f64;
    Ok(SupYEstimate {
        big_m: inst.big_m,
        samples,
        estimate,
        ci_half,
        ratio_m_half: estimate * m.sqrt(),
        ratio_m_quarter: estimate * m.powf(0.25),
        hypotheses,
    })
}

// ----- documented instance generators -----

/// `a = M^{−1}·u⊗v⊗w` with unit factors: every partition norm equals
/// `M^{−1}`, so the whole ladder holds with the 3-block line binding.
pub fn rank_one_instance(dim: usize, big_m: usize, seed: u64) -> Result<TrilinearInstance> {
    let u = gen::random_unit_vector(dim, rng::mix(seed, &[1]));
    let v = gen::random_unit_vector(dim, rng::mix(seed, &[2]));
    let w = gen::random_unit_vector(dim, rng::mix(seed, &[3]));
    let c = 1.0 / big_m as f64;
    let mut t = CoefficientTensor::new(3, dim)?;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                t.set(&[i + 1, j + 1, k + 1], c * u[i] * v[j] * w[k])?;
            }
        }
    }
    TrilinearInstance::new(t, big_m)
}

/// Random sparse kernel scaled onto the ladder `V̄_s ≤ R^{s−1}` with
/// `R = M^{−1/2}`; the binding line depends on the draw.
pub fn sparse_instance(
    dim: usize,
    support: usize,
    big_m: usize,
    seed: u64,
) -> Result<TrilinearInstance> {
    let raw = gen::random_sparse(3, dim, support, seed);
    let r = 1.0 / (big_m as f64).sqrt();
    let config = NormConfig {
        seed: rng::mix(seed, &[0x5CA1E]),
        ..NormConfig::default()
    };
    let (scaled, _) = gen::scale_to_ladder(&raw, r, &config)?;
    TrilinearInstance::new(scaled, big_m)
}

/// Slices of a stacked random orthogonal family: `a(i,·,·) = c·U_i` with
/// `U_i` the `i`-th block of a random orthogonal matrix, then scaled onto
/// the ladder. The two 2-block lines that mix the first axis sit at
/// `c·√dim` exactly, which keeps the construction close to tight there.
pub fn orthogonal_slices_instance(
    dim: usize,
    big_m: usize,
    seed: u64,
) -> Result<TrilinearInstance> {
    let mut t = CoefficientTensor::new(3, dim)?;
    for i in 0..dim {
        let q = gen::random_orthogonal(dim, rng::mix(seed, &[i as u64]));
        for j in 0..dim {
            for k in 0..dim {
                if q[j][k] != 0.0 {
                    t.set(&[i + 1, j + 1, k + 1], q[j][k])?;
                }
            }
        }
    }
    let r = 1.0 / (big_m as f64).sqrt();
    let config = NormConfig {
        seed: rng::mix(seed, &[0x0713]),
        ..NormConfig::default()
    };
    let (scaled, _) = gen::scale_to_ladder(&t, r, &config)?;
    TrilinearInstance::new(scaled, big_m)
}
