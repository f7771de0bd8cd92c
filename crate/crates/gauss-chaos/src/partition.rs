//! Partition norms of coefficient tensors.
//!
//! For a set partition `P = {A_1,…,A_s}` of the axis set of an order-`k`
//! tensor `a`, the partition norm is
//!
//! ```text
//! V̄_P(a) = sup Σ_idx a(idx) · Π_r b_r(idx|A_r)
//! ```
//!
//! over block functions `b_r` of unit L² norm, where `idx|A_r` is the
//! restriction of the index tuple to the axes in `A_r`. The ladder value
//! `V̄_s(a)` is the maximum of `V̄_P` over all partitions with exactly `s`
//! blocks. Extremes are classical:
//!
//! * `s = 1` is the Frobenius norm (the optimizer is `a` itself, scaled);
//! * `s = 2` is the spectral norm of the matricization grouping the two
//!   blocks, and alternating maximization over the two block vectors is
//!   exactly the singular-vector power iteration;
//! * `s ≥ 3` is an injective (multilinear operator) norm; computing it is
//!   NP-hard in general, so alternating maximization over random restarts
//!   reports a certified **lower bound** with an optimizer certificate.
//!
//! The alternating objective is monotone: fixing all blocks but one, the
//! optimal free block is the normalized partial contraction, so every
//! update can only raise the objective. That monotonicity is asserted at
//! run time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::tensor::CoefficientTensor;
use crate::util::Kahan;
use rand_distr::StandardNormal;

use rand::Rng;

/// Largest flattened block size the dense optimizer vectors may take.
pub const BLOCK_CAP: u128 = 1 << 22;

/// Partitions are enumerated for orders `1..=MAX_ORDER`.
pub const MAX_ORDER: usize = 8;

/// A set partition of the axis set `{0,…,k-1}` in canonical form: every
/// block sorted ascending, blocks ordered by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Build from blocks of 0-based axes; validates that the blocks are
    /// disjoint, non-empty and cover `0..k`, then canonicalizes.
    pub fn new(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k];
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            let mut b = block;
            b.sort_unstable();
            for &a in &b {
                if a >= k {
                    return Err(Error::InvalidPartition(format!(
                        "axis {a} outside 0..{k}"
                    )));
                }
                if std::mem::replace(&mut seen[a], true) {
                    return Err(Error::InvalidPartition(format!("axis {a} repeated")));
                }
            }
            canon.push(b);
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidPartition("blocks do not cover all axes".into()));
        }
        canon.sort_by_key(|b| b[0]);
        Ok(Self { k, blocks: canon })
    }

    /// The all-axes-in-one-block partition.
    pub fn whole(k: usize) -> Self {
        Self {
            k,
            blocks: vec![(0..k).collect()],
        }
    }

    /// The all-singletons partition.
    pub fn singletons(k: usize) -> Self {
        Self {
            k,
            blocks: (0..k).map(|a| vec![a]).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Position of this partition in the canonical enumeration.
    pub fn rank(&self) -> Result<usize> {
        enumerate_partitions(self.k)?
            .iter()
            .position(|p| p == self)
            .ok_or_else(|| Error::InvalidPartition("not in enumeration".into()))
    }
}

impl std::fmt::Display for SetPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for block in &self.blocks {
            write!(f, "{{")?;
            for (i, a) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", a + 1)?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

// JSON form: 1-based blocks, e.g. [[1,2],[3]].
impl Serialize for SetPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&a| a + 1).collect())
            .collect();
        blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let k: usize = blocks.iter().map(|b| b.len()).sum();
        let zero_based: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&a| a.checked_sub(1).ok_or_else(|| D::Error::custom("axis 0")))
                    .collect::<std::result::Result<_, _>>()
            })
            .collect::<std::result::Result<_, _>>()?;
        SetPartition::new(k, zero_based).map_err(D::Error::custom)
    }
}

/// All set partitions of `{0,…,k-1}` in canonical order (restricted growth
/// strings in lexicographic order). `k` is capped at [`MAX_ORDER`]; the
/// list has Bell(k) elements.
pub fn enumerate_partitions(k: usize) -> Result<Vec<SetPartition>> {
    if k == 0 || k > MAX_ORDER {
        return Err(Error::OrderRange {
            order: k,
            min: 1,
            max: MAX_ORDER,
        });
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; k];
    fn rec(rgs: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<SetPartition>) {
        let k = rgs.len();
        if pos == k {
            let nblocks = max_used + 1;
            let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); nblocks];
            for (axis, &b) in rgs.iter().enumerate() {
                blocks[b].push(axis);
            }
            out.push(SetPartition {
                k,
                blocks,
            });
            return;
        }
        for b in 0..=max_used + 1 {
            rgs[pos] = b;
            rec(rgs, pos + 1, max_used.max(b), out);
        }
    }
    // First axis is pinned to block 0.
    rec(&mut rgs, 1, 0, &mut out);
    Ok(out)
}

/// Configuration for the norm optimizer.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NormConfig {
    /// Random restarts per partition (ignored for one-block partitions).
    pub restarts: usize,
    /// Relative stop tolerance on the objective increase.
    pub tol: f64,
    /// Iteration cap per restart.
    pub max_iter: usize,
    /// Stream seed; restart `t` of partition rank `p` draws from the
    /// stream keyed by `(seed, p, t)`.
    pub seed: u64,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            tol: 1e-10,
            max_iter: 500,
            seed: 0,
        }
    }
}

/// Result of a single partition-norm computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionNorm {
    pub partition: SetPartition,
    /// The optimized objective: exact for ≤ 2 blocks, a lower bound for
    /// ≥ 3 blocks.
    pub value: f64,
    /// Unit block vectors achieving `value`, flattened lexicographically
    /// in each block's axis positions.
    pub certificate: Vec<Vec<f64>>,
    /// Whether the reported restart met the tolerance within the
    /// iteration cap.
    pub converged: bool,
}

/// Full norm profile: every partition norm plus the per-`s` ladder.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormProfile {
    pub order: usize,
    pub dim: usize,
    /// One entry per partition, in canonical enumeration order.
    pub per_partition: Vec<PartitionNorm>,
    /// `v_s[s-1] = V̄_s`, the max over partitions with `s` blocks.
    pub v_s: Vec<f64>,
    /// Index into `per_partition` of the canonically smallest partition
    /// achieving each `v_s`.
    pub argmax: Vec<usize>,
    /// `exact[s-1]`: true for `s ≤ 2` (closed form / power iteration),
    /// false for the heuristic lower bounds at `s ≥ 3`.
    pub exact: Vec<bool>,
}

impl NormProfile {
    /// Profile of `c·a` given the profile of `a` (norms are homogeneous).
    pub fn rescaled(&self, c: f64) -> Self {
        let c = c.abs();
        let mut out = self.clone();
        for e in &mut out.per_partition {
            e.value *= c;
        }
        for v in &mut out.v_s {
            *v *= c;
        }
        out
    }
}

/// Flattened position of `idx` restricted to `block` (axes sorted), with
/// the first axis most significant.
fn flat_pos(idx: &[u16], block: &[usize], dim: usize) -> usize {
    let mut p = 0usize;
    for &axis in block {
        p = p * dim + idx[axis] as usize;
    }
    p
}

struct Layout {
    vals: Vec<f64>,
    /// pos[r][e] = flattened index of entry e in block r.
    pos: Vec<Vec<usize>>,
    sizes: Vec<usize>,
}

fn layout(a: &CoefficientTensor, partition: &SetPartition) -> Result<Layout> {
    let dim = a.dim();
    let mut sizes = Vec::with_capacity(partition.num_blocks());
    for block in partition.blocks() {
        let size = (dim as u128).pow(block.len() as u32);
        if size > BLOCK_CAP {
            return Err(Error::BlockTooLarge {
                size,
                cap: BLOCK_CAP,
            });
        }
        sizes.push(size as usize);
    }
    let mut vals = Vec::with_capacity(a.support_len());
    let mut pos = vec![Vec::with_capacity(a.support_len()); partition.num_blocks()];
    for (idx, v) in a.raw_entries() {
        vals.push(v);
        for (r, block) in partition.blocks().iter().enumerate() {
            pos[r].push(flat_pos(idx, block, dim));
        }
    }
    Ok(Layout { vals, pos, sizes })
}

/// Compute one partition norm by block-coordinate ascent with seeded
/// restarts. See the module docs for exactness guarantees per block count.
pub fn partition_norm(
    a: &CoefficientTensor,
    partition: &SetPartition,
    config: &NormConfig,
) -> Result<PartitionNorm> {
    if partition.k() != a.order() {
        return Err(Error::OrderMismatch {
            expected: a.order(),
            got: partition.k(),
        });
    }
    let lay = layout(a, partition)?;
    let s = partition.num_blocks();

    // Zero tensor: zero norm, deterministic unit certificate.
    if a.is_zero() {
        let certificate = lay
            .sizes
            .iter()
            .map(|&d| {
                let mut e = vec![0.0; d];
                e[0] = 1.0;
                e
            })
            .collect();
        return Ok(PartitionNorm {
            partition: partition.clone(),
            value: 0.0,
            certificate,
            converged: true,
        });
    }

    // One block: the optimizer is a/‖a‖ and the value is the Frobenius
    // norm, exactly.
    if s == 1 {
        let norm = a.frobenius_norm();
        let mut cert = vec![0.0; lay.sizes[0]];
        for (e, &v) in lay.vals.iter().enumerate() {
            cert[lay.pos[0][e]] = v / norm;
        }
        return Ok(PartitionNorm {
            partition: partition.clone(),
            value: norm,
            certificate: vec![cert],
            converged: true,
        });
    }

    let rank = partition.rank()? as u64;
    let restarts = config.restarts.max(1);
    let mut best: Option<(f64, Vec<Vec<f64>>, bool)> = None;

    for restart in 0..restarts {
        let mut rng = rng::stream(config.seed, &[rank, restart as u64]);
        let mut blocks: Vec<Vec<f64>> = lay
            .sizes
            .iter()
            .map(|&d| {
                loop {
                    let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
                    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if n > 1e-12 {
                        return v.into_iter().map(|x| x / n).collect();
                    }
                }
            })
            .collect();

        let mut obj = objective(&lay, &blocks);
        let mut converged = false;
        let mut stuck = false;
        for _ in 0..config.max_iter {
            let prev = obj;
            for r in 0..s {
                let mut t = vec![0.0; lay.sizes[r]];
                for (e, &v) in lay.vals.iter().enumerate() {
                    let mut w = v;
                    for (q, pos_q) in lay.pos.iter().enumerate() {
                        if q != r {
                            w *= blocks[q][pos_q[e]];
                        }
                    }
                    t[lay.pos[r][e]] += w;
                }
                let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm <= 1e-300 {
                    // Collapsed onto a zero slice; this restart is stuck
                    // at objective 0 and cannot recover.
                    stuck = true;
                    break;
                }
                for x in &mut t {
                    *x /= norm;
                }
                blocks[r] = t;
                obj = norm;
            }
            if stuck {
                obj = 0.0;
                break;
            }
            // Block ascent can never decrease the objective.
            assert!(
                obj >= prev - 1e-9 * prev.abs().max(1.0),
                "alternating objective decreased: {prev} -> {obj}"
            );
            if obj - prev <= config.tol * obj.abs().max(1.0) {
                converged = true;
                break;
            }
        }

        let better = match &best {
            None => true,
            Some((v, _, _)) => obj > *v,
        };
        if better {
            best = Some((obj, blocks, converged));
        }
    }

    let (value, certificate, converged) = best.expect("at least one restart");
    Ok(PartitionNorm {
        partition: partition.clone(),
        value,
        certificate,
        converged,
    })
}

fn objective(lay: &Layout, blocks: &[Vec<f64>]) -> f64 {
    let mut acc = Kahan::new();
    for (e, &v) in lay.vals.iter().enumerate() {
        let mut w = v;
        for (q, pos_q) in lay.pos.iter().enumerate() {
            w *= blocks[q][pos_q[e]];
        }
        acc.add(w);
    }
    acc.value()
}

/// Evaluate every partition norm of `a` and assemble the `V̄_s` ladder.
/// No cross-`s` repair is applied: each reported value is exactly what its
/// own optimization produced.
pub fn norm_profile(a: &CoefficientTensor, config: &NormConfig) -> Result<NormProfile> {
    let k = a.order();
    let partitions = enumerate_partitions(k)?;
    let mut per_partition = Vec::with_capacity(partitions.len());
    for p in &partitions {
        per_partition.push(partition_norm(a, p, config)?);
    }
    let mut v_s = vec![0.0; k];
    let mut argmax = vec![0usize; k];
    let mut seen = vec![false; k];
    for (i, e) in per_partition.iter().enumerate() {
        let s = e.partition.num_blocks();
        if !seen[s - 1] || e.value > v_s[s - 1] {
            seen[s - 1] = true;
            v_s[s - 1] = e.value;
            argmax[s - 1] = i;
        }
    }
    let exact = (1..=k).map(|s| s <= 2).collect();
    Ok(NormProfile {
        order: k,
        dim: a.dim(),
        per_partition,
        v_s,
        argmax,
        exact,
    })
}

/// Dense matricization of `a` grouping `row_block` against `col_block`
/// (0-based axes, together a partition of all axes). Row-major layout;
/// flattening within each side is lexicographic in the block's sorted axis
/// positions, matching the optimizer certificates.
pub fn matricize(
    a: &CoefficientTensor,
    row_block: &[usize],
    col_block: &[usize],
) -> Result<(usize, usize, Vec<f64>)> {
    let partition = SetPartition::new(
        a.order(),
        vec![row_block.to_vec(), col_block.to_vec()],
    )?;
    // Use the canonicalized (sorted) blocks, preserving which side is rows.
    let mut rows: Vec<usize> = row_block.to_vec();
    rows.sort_unstable();
    let mut cols: Vec<usize> = col_block.to_vec();
    cols.sort_unstable();
    drop(partition);
    let dim = a.dim();
    let nrows = (dim as u128).pow(rows.len() as u32);
    let ncols = (dim as u128).pow(cols.len() as u32);
    if nrows > BLOCK_CAP || ncols > BLOCK_CAP || nrows * ncols > BLOCK_CAP {
        return Err(Error::BlockTooLarge {
            size: nrows * ncols,
            cap: BLOCK_CAP,
        });
    }
    let (nrows, ncols) = (nrows as usize, ncols as usize);
    let mut m = vec![0.0; nrows * ncols];
    for (idx, v) in a.raw_entries() {
        let r = flat_pos(idx, &rows, dim);
        let c = flat_pos(idx, &cols, dim);
        m[r * ncols + c] = v;
    }
    Ok((nrows, ncols, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn enumeration_counts_match_bell_numbers() {
        let bell = [1usize, 2, 5, 15, 52, 203, 877, 4140];
        for (k, &b) in (1..=8).zip(bell.iter()) {
            let parts = enumerate_partitions(k).unwrap();
            assert_eq!(parts.len(), b, "Bell({k})");
            // No duplicates, all canonical, all cover the axis set.
            for p in &parts {
                assert_eq!(p.k(), k);
                let total: usize = p.blocks().iter().map(|b| b.len()).sum();
                assert_eq!(total, k);
            }
            let mut dedup = parts.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), parts.len());
        }
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(9).is_err());
    }

    #[test]
    fn canonical_order_for_k3() {
        let parts = enumerate_partitions(3).unwrap();
        let shown: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            shown,
            vec!["{1,2,3}", "{1,2}{3}", "{1,3}{2}", "{1}{2,3}", "{1}{2}{3}"]
        );
    }

    #[test]
    fn partition_validation() {
        assert!(SetPartition::new(3, vec![vec![0, 1], vec![2]]).is_ok());
        assert!(SetPartition::new(3, vec![vec![0, 1]]).is_err());
        assert!(SetPartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(SetPartition::new(3, vec![vec![0, 3], vec![1, 2]]).is_err());
        assert!(SetPartition::new(2, vec![vec![], vec![0, 1]]).is_err());
        // Canonicalization sorts blocks by smallest element.
        let p = SetPartition::new(3, vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(p.to_string(), "{1,2}{3}");
    }

    #[test]
    fn single_block_is_frobenius() {
        let a = gen::random_sparse(3, 3, 5, 77);
        let p = SetPartition::whole(3);
        let r = partition_norm(&a, &p, &NormConfig::default()).unwrap();
        assert!((r.value - a.frobenius_norm()).abs() < 1e-12);
        assert!(r.converged);
        // Certificate has unit norm.
        let n: f64 = r.certificate[0].iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalized_identity_two_block_norm() {
        // a = I/√n has spectral norm 1/√n under the {rows}{cols} split.
        for n in [2usize, 3, 5] {
            let c = 1.0 / (n as f64).sqrt();
            let a = CoefficientTensor::from_entries(
                2,
                n,
                (1..=n).map(|i| (vec![i, i], c)),
            )
            .unwrap();
            let p = SetPartition::singletons(2);
            let r = partition_norm(&a, &p, &NormConfig::default()).unwrap();
            assert!(
                (r.value - c).abs() < 1e-9,
                "n={n}: got {} want {c}",
                r.value
            );
            assert!((a.frobenius_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_one_order3_injective_norm_is_one() {
        // a(i,j,k) = u_i v_j w_k with unit u,v,w has V̄ = 1 for the
        // all-singletons partition.
        let u = [0.6, 0.8];
        let v = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt()];
        let w = [0.28, 0.96];
        let mut entries = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    entries.push((vec![i + 1, j + 1, k + 1], u[i] * v[j] * w[k]));
                }
            }
        }
        let a = CoefficientTensor::from_entries(3, 2, entries).unwrap();
        let p = SetPartition::singletons(3);
        let r = partition_norm(&a, &p, &NormConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn profile_of_diagonal_matrix() {
        // diag(0.6, 0.8): V̄₁ = 1, V̄₂ = 0.8.
        let a = CoefficientTensor::from_entries(
            2,
            2,
            vec![(vec![1, 1], 0.6), (vec![2, 2], 0.8)],
        )
        .unwrap();
        let profile = norm_profile(&a, &NormConfig::default()).unwrap();
        assert!((profile.v_s[0] - 1.0).abs() < 1e-12);
        assert!((profile.v_s[1] - 0.8).abs() < 1e-9);
        assert_eq!(profile.exact, vec![true, true]);
        // Ladder never exceeds V̄₁.
        for e in &profile.per_partition {
            assert!(e.value <= profile.v_s[0] + 1e-9);
        }
    }

    #[test]
    fn two_block_norm_matches_svd_oracle() {
        use nalgebra::DMatrix;
        let config = NormConfig {
            restarts: 8,
            tol: 1e-13,
            max_iter: 4000,
            seed: 5,
        };
        for seed in 0..20u64 {
            let a = gen::random_sparse(2, 4, 9, 300 + seed);
            let p = SetPartition::singletons(2);
            let got = partition_norm(&a, &p, &config).unwrap().value;
            let (r, c, m) = matricize(&a, &[0], &[1]).unwrap();
            let svd = DMatrix::from_row_slice(r, c, &m).svd(false, false);
            let want = svd.singular_values[0];
            assert!(
                (got - want).abs() <= 1e-8 * want.max(1.0),
                "seed {seed}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn order3_matricizations_match_svd_oracle() {
        use nalgebra::DMatrix;
        let config = NormConfig {
            restarts: 8,
            tol: 1e-13,
            max_iter: 4000,
            seed: 9,
        };
        for seed in 0..5u64 {
            let a = gen::random_sparse(3, 3, 7, 900 + seed);
            for (rows, cols) in [
                (vec![0], vec![1, 2]),
                (vec![1], vec![0, 2]),
                (vec![2], vec![0, 1]),
            ] {
                let p = SetPartition::new(3, vec![rows.clone(), cols.clone()]).unwrap();
                let got = partition_norm(&a, &p, &config).unwrap().value;
                let (r, c, m) = matricize(&a, &rows, &cols).unwrap();
                let svd = DMatrix::from_row_slice(r, c, &m).svd(false, false);
                let want = svd.singular_values[0];
                assert!(
                    (got - want).abs() <= 1e-8 * want.max(1.0),
                    "seed {seed} rows {rows:?}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn zero_tensor_norms() {
        let a = CoefficientTensor::new(3, 2).unwrap();
        let profile = norm_profile(&a, &NormConfig::default()).unwrap();
        assert!(profile.v_s.iter().all(|&v| v == 0.0));
        for e in &profile.per_partition {
            assert!(e.converged);
            for c in &e.certificate {
                let n: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn profile_scales_homogeneously() {
        let a = gen::random_sparse(3, 2, 4, 123);
        let config = NormConfig::default();
        let p1 = norm_profile(&a, &config).unwrap();
        let p2 = norm_profile(&a.scale(0.25), &config).unwrap();
        for s in 0..3 {
            assert!(
                (p2.v_s[s] - 0.25 * p1.v_s[s]).abs() < 1e-9,
                "s={}: {} vs {}",
                s + 1,
                p2.v_s[s],
                0.25 * p1.v_s[s]
            );
        }
        let r = p1.rescaled(0.25);
        for s in 0..3 {
            assert!((r.v_s[s] - p2.v_s[s]).abs() < 1e-9);
        }
    }

    #[test]
    fn determinism_same_seed_same_profile() {
        let a = gen::random_sparse(3, 3, 6, 456);
        let config = NormConfig::default();
        let p1 = norm_profile(&a, &config).unwrap();
        let p2 = norm_profile(&a, &config).unwrap();
        let j1 = serde_json::to_string(&p1).unwrap();
        let j2 = serde_json::to_string(&p2).unwrap();
        assert_eq!(j1, j2);
    }

    #[test]
    fn certificates_are_unit_and_reproduce_value() {
        let a = gen::random_sparse(3, 3, 6, 789);
        let profile = norm_profile(&a, &NormConfig::default()).unwrap();
        for e in &profile.per_partition {
            for c in &e.certificate {
                let n: f64 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!(n <= 1.0 + 1e-12, "certificate norm {n}");
            }
            // Re-evaluating the multilinear form on the certificate
            // reproduces the reported value.
            let lay = layout(&a, &e.partition).unwrap();
            let again = objective(&lay, &e.certificate);
            assert!(
                (again - e.value).abs() <= 1e-9 * e.value.abs().max(1.0),
                "{} vs {}",
                again,
                e.value
            );
        }
    }

    #[test]
    fn block_vectors_flatten_lexicographically() {
        // Single entry a(2,1)=1 over blocks {0},{1}: the s=1 certificate
        // places it at flattened position (2-1)*dim + (1-1) = 3 for dim 3.
        let a = CoefficientTensor::from_entries(2, 3, vec![(vec![2, 1], 1.0)]).unwrap();
        let r = partition_norm(&a, &SetPartition::whole(2), &NormConfig::default()).unwrap();
        assert_eq!(r.certificate[0].len(), 9);
        assert_eq!(r.certificate[0][3], 1.0);
    }

    #[test]
    fn profile_json_round_trip() {
        let a = gen::random_sparse(2, 3, 4, 31);
        let p = norm_profile(&a, &NormConfig::default()).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: NormProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back.v_s, p.v_s);
        assert_eq!(back.per_partition.len(), p.per_partition.len());
    }
}
