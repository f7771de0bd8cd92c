//! Moments and cumulants of Gaussian chaos variables.
//!
//! Throughout, the chaos variable of a kernel `f` of order `k` on
//! `{1,…,n}` is
//!
//! ```text
//! Z(f) = Σ f(n_1,…,n_k) · :ξ_{n_1} ⋯ ξ_{n_k}:
//! ```
//!
//! summed over all index tuples, with `:⋯:` the Wick (Hermite)
//! renormalization and ξ i.i.d. standard normals. For symmetric `f` this
//! is `k!` times the multiple stochastic integral of `f`. Expectations of
//! products of Wick monomials reduce to sums over closed diagrams, so
//!
//! ```text
//! E[Z(f_1) ⋯ Z(f_m)] = Σ_γ F_γ          (closed diagrams)
//! κ(Z(f_1), …, Z(f_m)) = Σ_γ connected F_γ
//! ```
//!
//! and the classical moment–cumulant identity reassembles the moment
//! from joint cumulants over set partitions, which is what
//! [`CumulantTable::reconstruct_moment`] and
//! [`reconstruct_power_moment`] do along two independent routes.

use crate::error::{Error, Result};
use crate::partition::enumerate_partitions;
use crate::tensor::CoefficientTensor;
use crate::util::{factorial_u128, Kahan};
use crate::walk::closed_diagram_walk;

/// Subset cumulant tables are exponential in the row count; set-partition
/// reconstruction shares the partition enumerator's cap.
pub const CUMULANT_TABLE_CAP: usize = 8;

/// Aggregates of one closed-diagram sum.
#[derive(Clone, Copy, Debug)]
pub struct DiagramSum {
    /// `Σ F_γ` over the (connected, if requested) closed diagrams.
    pub sum: f64,
    /// Number of contributing diagrams.
    pub count: u128,
    /// `max |F_γ|`; 0 when no diagram exists.
    pub max_abs: f64,
}

/// Sum `F_γ` over closed diagrams with one kernel per row, together with
/// the diagram count and the largest single-diagram magnitude.
pub fn diagram_sum(kernels: &[&CoefficientTensor], connected_only: bool) -> Result<DiagramSum> {
    let w = closed_diagram_walk(kernels, connected_only)?;
    Ok(DiagramSum {
        sum: w.sum,
        count: w.count,
        max_abs: w.max_abs,
    })
}

/// `E[Z(f_1) ⋯ Z(f_m)]` by the diagram formula.
pub fn product_moment(kernels: &[&CoefficientTensor]) -> Result<f64> {
    Ok(diagram_sum(kernels, false)?.sum)
}

/// `E[Z(f)^power]`; `power = 0` gives 1.
pub fn chaos_moment(f: &CoefficientTensor, power: usize) -> Result<f64> {
    if power == 0 {
        return Ok(1.0);
    }
    let kernels: Vec<&CoefficientTensor> = std::iter::repeat(f).take(power).collect();
    product_moment(&kernels)
}

/// Joint cumulant `κ(Z(f_1), …, Z(f_m))`: the connected-diagram sum.
pub fn cumulant(kernels: &[&CoefficientTensor]) -> Result<f64> {
    Ok(diagram_sum(kernels, true)?.sum)
}

/// Cumulants `κ_t(Z(f))` of one chaos variable for `t = 0..=max_order`
/// (entry 0 is unused and set to 0; entry 1 vanishes since `Z` is
/// centered).
pub fn power_cumulants(f: &CoefficientTensor, max_order: usize) -> Result<Vec<f64>> {
    let mut kappa = vec![0.0; max_order + 1];
    for (t, slot) in kappa.iter_mut().enumerate().skip(1) {
        let kernels: Vec<&CoefficientTensor> = std::iter::repeat(f).take(t).collect();
        *slot = cumulant(&kernels)?;
    }
    Ok(kappa)
}

/// Moment of order `m` from the cumulants of a single centered variable:
///
/// ```text
/// E Z^m = Σ over part profiles {c_t} with Σ t·c_t = m, parts t ≥ 2 of
///         m! / Π_t ((t!)^{c_t} · c_t!) · Π_t κ_t^{c_t}
/// ```
///
/// the grouped form of the set-partition identity (singleton blocks drop
/// out because `κ_1 = 0`). Exact integer profile counts, so this stays
/// usable well past the subset-table cap.
pub fn reconstruct_power_moment(kappa: &[f64], m: usize) -> Result<f64> {
    if m == 0 {
        return Ok(1.0);
    }
    if kappa.len() <= m {
        return Err(Error::InvalidParam(format!(
            "need cumulants up to order {m}, got {}",
            kappa.len().saturating_sub(1)
        )));
    }
    // Non-increasing parts ≥ 2; `counts[t]` = multiplicity of part t.
    fn rec(
        left: usize,
        max_part: usize,
        counts: &mut Vec<(usize, usize)>,
        kappa: &[f64],
        m: usize,
        total: &mut Kahan,
    ) {
        if left == 0 {
            let mut ways = factorial_u128(m);
            let mut term = 1.0;
            for &(t, c) in counts.iter() {
                for _ in 0..c {
                    ways /= factorial_u128(t);
                    term *= kappa[t];
                }
                ways /= factorial_u128(c);
            }
            total.add(ways as f64 * term);
            return;
        }
        let mut t = max_part.min(left);
        while t >= 2 {
            // A part of size t only fits if what remains is 0 or ≥ 2.
            if left - t != 1 {
                let reuse = counts.last().map(|&(p, _)| p == t).unwrap_or(false);
                if reuse {
                    counts.last_mut().unwrap().1 += 1;
                } else {
                    counts.push((t, 1));
                }
                rec(left - t, t, counts, kappa, m, total);
                if reuse {
                    counts.last_mut().unwrap().1 -= 1;
                } else {
                    counts.pop();
                }
            }
            t -= 1;
        }
    }
    let mut total = Kahan::new();
    rec(m, m, &mut Vec::new(), kappa, m, &mut total);
    Ok(total.value())
}

/// Joint cumulants of every nonempty subset of a row family, indexed by
/// bitmask. Capped at [`CUMULANT_TABLE_CAP`] rows.
#[derive(Clone, Debug)]
pub struct CumulantTable {
    m: usize,
    values: Vec<f64>,
}

/// Build the subset table for `kernels`.
pub fn cumulant_table(kernels: &[&CoefficientTensor]) -> Result<CumulantTable> {
    let m = kernels.len();
    if m == 0 || m > CUMULANT_TABLE_CAP {
        return Err(Error::CapExceeded {
            what: "cumulant table rows",
            got: m,
            cap: CUMULANT_TABLE_CAP,
        });
    }
    let mut values = vec![0.0; 1 << m];
    for mask in 1usize..(1 << m) {
        let subset: Vec<&CoefficientTensor> = (0..m)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| kernels[j])
            .collect();
        values[mask] = cumulant(&subset)?;
    }
    Ok(CumulantTable { m, values })
}

impl CumulantTable {
    pub fn num_rows(&self) -> usize {
        self.m
    }

    /// Cumulant of the subset given by 0-based row indices.
    pub fn value(&self, rows: &[usize]) -> Result<f64> {
        let mut mask = 0usize;
        for &r in rows {
            if r >= self.m {
                return Err(Error::InvalidParam(format!(
                    "row {r} outside table of {} rows",
                    self.m
                )));
            }
            mask |= 1 << r;
        }
        if mask == 0 {
            return Err(Error::InvalidParam("empty row subset".into()));
        }
        Ok(self.values[mask])
    }

    /// `E[Z_1 ⋯ Z_m] = Σ over set partitions P of Π_{B ∈ P} κ(B)`,
    /// the inverse of the cumulant expansion, summed by brute-force
    /// partition enumeration. Independent of the grouped power route.
    pub fn reconstruct_moment(&self) -> Result<f64> {
        let mut total = Kahan::new();
        for p in enumerate_partitions(self.m)? {
            let mut term = 1.0;
            for block in p.blocks() {
                let mut mask = 0usize;
                for &r in block {
                    mask |= 1 << r;
                }
                term *= self.values[mask];
                if term == 0.0 {
                    break;
                }
            }
            total.add(term);
        }
        Ok(total.value())
    }
}

/// Largest `2M` for which block-profile counts are enumerated.
pub const PROFILE_COUNT_CAP: usize = 12;

/// Exact and bounded count of set partitions with a given block-size
/// profile; see [`partition_profile_count`].
#[derive(Clone, Copy, Debug)]
pub struct ProfileCount {
    pub exact: u128,
    pub bound: f64,
}

/// Visit the block-size vector of every set partition of `{0..n-1}` via
/// restricted-growth strings, without materializing partitions.
fn for_each_partition_sizes(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut a = vec![0usize; n];
    let mut hi = vec![0usize; n];
    let mut sizes = Vec::new();
    loop {
        sizes.clear();
        sizes.resize(hi[n - 1] + 1, 0usize);
        for &ai in &a {
            sizes[ai] += 1;
        }
        visit(&sizes);
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if a[i] <= hi[i - 1] {
                break;
            }
            i -= 1;
        }
        a[i] += 1;
        hi[i] = hi[i - 1].max(a[i]);
        for j in i + 1..n {
            a[j] = 0;
            hi[j] = hi[j - 1];
        }
    }
}

/// Count the set partitions of `{1,…,2M}` whose block sizes match
/// `profile` (all parts ≥ 2, summing to `2M`), by direct enumeration,
/// together with the closed upper bound `Π_r (2M)^{t_r−1}/(t_r−1)!`.
/// The enumeration is deliberately formula-free so it can certify the
/// bound.
pub fn partition_profile_count(big_m: usize, profile: &[usize]) -> Result<ProfileCount> {
    let n = 2 * big_m;
    if n == 0 || n > PROFILE_COUNT_CAP {
        return Err(Error::CapExceeded {
            what: "profile count elements",
            got: n,
            cap: PROFILE_COUNT_CAP,
        });
    }
    if profile.is_empty() || profile.iter().any(|&t| t < 2) {
        return Err(Error::InvalidParam("profile parts must be ≥ 2".into()));
    }
    if profile.iter().sum::<usize>() != n {
        return Err(Error::InvalidParam(format!(
            "profile sums to {}, expected {n}",
            profile.iter().sum::<usize>()
        )));
    }
    let mut want = profile.to_vec();
    want.sort_unstable();
    let mut exact = 0u128;
    for_each_partition_sizes(n, |sizes| {
        if sizes.len() != want.len() {
            return;
        }
        let mut got = sizes.to_vec();
        got.sort_unstable();
        if got == want {
            exact += 1;
        }
    });
    let mut bound = 1.0f64;
    for &t in profile {
        bound *= (n as f64).powi(t as i32 - 1) / factorial_u128(t - 1) as f64;
    }
    assert!(
        exact as f64 <= bound * (1.0 + 1e-12),
        "profile count {exact} exceeds its bound {bound}"
    );
    Ok(ProfileCount { exact, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{enumerate_closed_diagrams, evaluate_closed};
    use crate::gen;
    use crate::tensor::factorial;
    use crate::util::double_factorial_odd;

    #[test]
    fn product_moment_matches_enumeration() {
        let f = gen::random_sparse(2, 3, 5, 400);
        let g = gen::random_sparse(3, 3, 6, 401);
        let h = gen::random_sparse(1, 3, 3, 402);
        let kernels: Vec<&CoefficientTensor> = vec![&f, &g, &h];
        let mut want = 0.0;
        for d in enumerate_closed_diagrams(&[2, 3, 1]).unwrap() {
            want += evaluate_closed(&d, &kernels).unwrap();
        }
        let got = product_moment(&kernels).unwrap();
        assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
    }

    #[test]
    fn symmetric_second_moment_is_k_factorial_times_norm() {
        for k in 1..=3usize {
            let f = gen::random_symmetric_unit(k, 3, 5, 410 + k as u64);
            let m2 = chaos_moment(&f, 2).unwrap();
            let want = factorial(k);
            assert!((m2 - want as f64).abs() <= 1e-12 * want as f64, "k={k}: {m2}");
        }
    }

    #[test]
    fn odd_gaussian_moments_vanish() {
        let a = gen::random_sparse(1, 3, 3, 420);
        assert_eq!(chaos_moment(&a, 3).unwrap(), 0.0);
        assert_eq!(chaos_moment(&a, 5).unwrap(), 0.0);
        assert_eq!(chaos_moment(&a, 0).unwrap(), 1.0);
    }

    #[test]
    fn gaussian_case_closes_in_closed_form() {
        // k = 1: Z is N(0, ‖a‖²), so E Z^{2M} = (2M-1)!!·σ^{2M} and all
        // cumulants above the second vanish.
        let a = gen::random_sparse(1, 3, 3, 430);
        let sigma_sq = crate::tensor::inner(&a, &a).unwrap();
        let kappa = power_cumulants(&a, 8).unwrap();
        assert_eq!(kappa[1], 0.0);
        assert!((kappa[2] - sigma_sq).abs() <= 1e-12 * sigma_sq);
        for t in 3..=8 {
            assert_eq!(kappa[t], 0.0, "kappa[{t}]");
        }
        for big_m in 1..=4usize {
            let want = double_factorial_odd(big_m) as f64 * sigma_sq.powi(big_m as i32);
            let got = chaos_moment(&a, 2 * big_m).unwrap();
            assert!((got - want).abs() <= 1e-10 * want, "M={big_m}");
            let rec = reconstruct_power_moment(&kappa, 2 * big_m).unwrap();
            assert!((rec - want).abs() <= 1e-10 * want, "M={big_m} reconstruct");
        }
    }

    #[test]
    fn second_cumulant_is_second_moment() {
        let f = gen::random_sparse(2, 3, 6, 440);
        let kernels = vec![&f, &f];
        let c2 = cumulant(&kernels).unwrap();
        let m2 = product_moment(&kernels).unwrap();
        assert!((c2 - m2).abs() <= 1e-12 * m2.abs().max(1.0));
    }

    #[test]
    fn cumulants_add_over_independent_blocks() {
        // Kernels supported on disjoint index ranges give independent
        // chaos variables; cumulants are additive, and every connected
        // diagram mixing the blocks contracts to zero.
        let n = 2;
        let f = gen::random_sparse(2, n, 3, 450);
        let g = gen::random_sparse(2, n, 3, 451);
        let mut entries = Vec::new();
        for (idx, v) in f.iter() {
            entries.push((idx.clone(), v));
        }
        for (idx, v) in g.iter() {
            entries.push((idx.iter().map(|&i| i + n).collect(), v));
        }
        let h = CoefficientTensor::from_entries(2, 2 * n, entries.clone()).unwrap();
        for t in 2..=4usize {
            let kf = power_cumulants(&f, t).unwrap();
            let kg = power_cumulants(&g, t).unwrap();
            let kh = power_cumulants(&h, t).unwrap();
            let want = kf[t] + kg[t];
            assert!(
                (kh[t] - want).abs() <= 1e-10 * want.abs().max(1.0),
                "t={t}: {} vs {want}",
                kh[t]
            );
        }
    }

    #[test]
    fn subset_table_reconstructs_mixed_moments() {
        let f = gen::random_sparse(2, 2, 4, 460);
        let g = gen::random_sparse(1, 2, 2, 461);
        let h = gen::random_sparse(3, 2, 4, 462);
        let kernels: Vec<&CoefficientTensor> = vec![&f, &g, &h, &g];
        let table = cumulant_table(&kernels).unwrap();
        let want = product_moment(&kernels).unwrap();
        let got = table.reconstruct_moment().unwrap();
        assert!(
            (got - want).abs() <= 1e-10 * want.abs().max(1.0),
            "{got} vs {want}"
        );
        // Subset access agrees with a direct connected sum.
        let sub = table.value(&[0, 2]).unwrap();
        let direct = cumulant(&[&f, &h]).unwrap();
        assert_eq!(sub, direct);
    }

    #[test]
    fn grouped_and_subset_reconstructions_agree() {
        let f = gen::random_sparse(2, 3, 6, 470);
        for m in 2..=6usize {
            let kernels: Vec<&CoefficientTensor> = std::iter::repeat(&f).take(m).collect();
            let table = cumulant_table(&kernels).unwrap();
            let via_subsets = table.reconstruct_moment().unwrap();
            let kappa = power_cumulants(&f, m).unwrap();
            let via_profiles = reconstruct_power_moment(&kappa, m).unwrap();
            let moment = chaos_moment(&f, m).unwrap();
            let scale = moment.abs().max(1.0);
            assert!(
                (via_subsets - moment).abs() <= 1e-10 * scale,
                "m={m} subsets: {via_subsets} vs {moment}"
            );
            assert!(
                (via_profiles - moment).abs() <= 1e-10 * scale,
                "m={m} profiles: {via_profiles} vs {moment}"
            );
        }
    }

    #[test]
    fn caps_and_validation() {
        let f = gen::random_sparse(1, 2, 2, 480);
        let kernels: Vec<&CoefficientTensor> = std::iter::repeat(&f).take(9).collect();
        assert!(matches!(
            cumulant_table(&kernels),
            Err(Error::CapExceeded { .. })
        ));
        assert!(reconstruct_power_moment(&[0.0, 0.0], 4).is_err());
        let table = cumulant_table(&kernels[..2]).unwrap();
        assert!(table.value(&[5]).is_err());
        assert!(table.value(&[]).is_err());
    }

    #[test]
    fn profile_counts_match_known_values() {
        // Pairings of 4 elements: 3; one whole block: 1; {2,4} on 6: 15.
        assert_eq!(partition_profile_count(2, &[2, 2]).unwrap().exact, 3);
        assert_eq!(partition_profile_count(2, &[4]).unwrap().exact, 1);
        assert_eq!(partition_profile_count(3, &[2, 4]).unwrap().exact, 15);
        // Full pairing profiles reproduce (2M-1)!!.
        for big_m in 1..=5usize {
            let profile = vec![2usize; big_m];
            let got = partition_profile_count(big_m, &profile).unwrap();
            assert_eq!(got.exact, double_factorial_odd(big_m), "M={big_m}");
        }
    }

    #[test]
    fn profile_counts_match_multinomial_formula() {
        // Independent closed form: (2M)! / Π_t ((t!)^{c_t} · c_t!).
        fn formula(n: usize, profile: &[usize]) -> u128 {
            let mut count = factorial_u128(n);
            let mut sorted = profile.to_vec();
            sorted.sort_unstable();
            let mut i = 0;
            while i < sorted.len() {
                let t = sorted[i];
                let mut c = 0;
                while i < sorted.len() && sorted[i] == t {
                    c += 1;
                    i += 1;
                }
                for _ in 0..c {
                    count /= factorial_u128(t);
                }
                count /= factorial_u128(c);
            }
            count
        }
        for (big_m, profile) in [
            (3usize, vec![2usize, 2, 2]),
            (3, vec![3, 3]),
            (4, vec![2, 3, 3]),
            (4, vec![4, 4]),
            (5, vec![2, 2, 3, 3]),
            (6, vec![2, 2, 2, 3, 3]),
            (6, vec![6, 6]),
        ] {
            let got = partition_profile_count(big_m, &profile).unwrap();
            let want = formula(2 * big_m, &profile);
            assert_eq!(got.exact, want, "M={big_m} profile {profile:?}");
            assert!(got.exact as f64 <= got.bound);
        }
    }

    #[test]
    fn profile_count_validation() {
        assert!(partition_profile_count(2, &[1, 3]).is_err());
        assert!(partition_profile_count(2, &[2, 3]).is_err());
        assert!(partition_profile_count(2, &[]).is_err());
        assert!(partition_profile_count(7, &[2; 7]).is_err());
    }
}
