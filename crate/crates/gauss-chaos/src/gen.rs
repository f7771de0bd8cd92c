//! Seeded random tensor generators used by sweeps, tests and the book.
//!
//! Everything here is a pure function of its arguments: the same seed
//! always yields the same tensor.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::partition::{norm_profile, NormConfig, NormProfile};
use crate::rng;
use crate::tensor::CoefficientTensor;

/// Random sparse tensor: `support` distinct index tuples drawn uniformly,
/// values standard normal. `support` is clamped to the number of cells.
pub fn random_sparse(order: usize, dim: usize, support: usize, seed: u64) -> CoefficientTensor {
    let mut rng = rng::stream(seed, &[order as u64, dim as u64, support as u64]);
    let cells = (dim as u128).pow(order as u32);
    let support = (support as u128).min(cells) as usize;
    let mut t = CoefficientTensor::new(order, dim).expect("valid shape");
    let mut placed = 0;
    while placed < support {
        let idx: Vec<usize> = (0..order).map(|_| rng.gen_range(1..=dim)).collect();
        if t.get(&idx) != 0.0 {
            continue;
        }
        let mut v: f64 = rng.sample(StandardNormal);
        if v == 0.0 {
            v = 1.0;
        }
        t.set(&idx, v).expect("in-range index");
        placed += 1;
    }
    t
}

/// Random symmetric tensor: a sparse draw followed by symmetrization
/// (rescaled so the result keeps unit-order magnitudes).
pub fn random_symmetric(order: usize, dim: usize, support: usize, seed: u64) -> CoefficientTensor {
    random_sparse(order, dim, support, seed).symmetrize()
}

/// Random symmetric tensor scaled to Frobenius norm 1.
pub fn random_symmetric_unit(order: usize, dim: usize, support: usize, seed: u64) -> CoefficientTensor {
    let t = random_symmetric(order, dim, support, seed);
    let norm = t.frobenius_norm();
    if norm == 0.0 {
        // The symmetrized draw cancelled out entirely; rebuild from the
        // next stream. Termination: a fresh support draw is independent.
        return random_symmetric_unit(order, dim, support, rng::mix(seed, &[0xA5]));
    }
    t.scale(1.0 / norm)
}

/// Scale `t` so that the whole norm ladder satisfies `V̄_s ≤ R^{s-1}`,
/// with equality for the binding `s`. Returns the scaled tensor and the
/// profile of the *scaled* tensor (norms scale linearly, so the profile is
/// rescaled rather than recomputed).
pub fn scale_to_ladder(
    t: &CoefficientTensor,
    r: f64,
    config: &NormConfig,
) -> crate::Result<(CoefficientTensor, NormProfile)> {
    let profile = norm_profile(t, config)?;
    let mut c = f64::INFINITY;
    for s in 1..=t.order() {
        let v = profile.v_s[s - 1];
        if v > 0.0 {
            c = c.min(r.powi(s as i32 - 1) / v);
        }
    }
    if !c.is_finite() {
        // Zero tensor: nothing to scale.
        return Ok((t.clone(), profile));
    }
    Ok((t.scale(c), profile.rescaled(c)))
}

/// A uniformly random unit vector of length `n` (dense).
pub fn random_unit_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, &[n as u64, 0x5EC7]);
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// A random n×n orthogonal matrix via Gram–Schmidt on a Gaussian draw.
pub fn random_orthogonal(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng::stream(seed, &[n as u64, 0x0A7B]);
    loop {
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let mut ok = true;
        for i in 0..n {
            for j in 0..i {
                let dot: f64 = (0..n).map(|c| rows[i][c] * rows[j][c]).sum();
                for c in 0..n {
                    rows[i][c] -= dot * rows[j][c];
                }
            }
            let norm: f64 = rows[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for c in 0..n {
                rows[i][c] /= norm;
            }
        }
        if ok {
            return rows;
        }
    }
}

/// Shuffle helper with a deterministic stream (used by sweep drivers).
pub fn shuffled_indices(len: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(&mut rng::stream(seed, &[len as u64, 0x51F7]));
    idx
}
