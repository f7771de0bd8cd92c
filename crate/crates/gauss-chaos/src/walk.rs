//! Memoized evaluation of closed-diagram sums.
//!
//! Enumerating closed diagrams touches each matching separately and the
//! count grows like `(Σk_j − 1)!!`. The walker instead attaches one row
//! at a time. After `r` rows, everything a completion can see is the
//! multiset of open partial kernels, one per connected component of the
//! partial diagram, each paired with the number of rows it spans. Those
//! contents are interned and the walk is memoized on `(row, multiset)`,
//! which regroups the diagram sum exactly; with identical kernels whole
//! families of diagrams collapse into a single state.
//!
//! One pass accumulates three quantities at once: `Σ F_γ`, the diagram
//! count, and `max |F_γ|`. In connected-only mode a component closing
//! before the final row is pruned, since a closed component can never
//! rejoin the rest: what survives is exactly the single-component sum.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tensor::{group_contract, CoefficientTensor};
use crate::util::Kahan;

/// Aggregates over the closed diagrams of one row profile. `max_abs` is
/// 0 when no diagram exists.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct WalkSummary {
    pub sum: f64,
    pub count: u128,
    pub max_abs: f64,
}

impl WalkSummary {
    fn zero() -> Self {
        WalkSummary {
            sum: 0.0,
            count: 0,
            max_abs: 0.0,
        }
    }

    fn one() -> Self {
        WalkSummary {
            sum: 1.0,
            count: 1,
            max_abs: 1.0,
        }
    }
}

/// Open partial kernel spanning `rows` of the rows attached so far.
struct Component {
    tensor: CoefficientTensor,
    rows: u32,
}

/// Content-addressed store: identical partial kernels (same entries,
/// same row span) share one id, which is what lets states merge.
struct Interner {
    ids: HashMap<Vec<u8>, u32>,
    items: Vec<Component>,
}

impl Interner {
    fn new() -> Self {
        Interner {
            ids: HashMap::new(),
            items: Vec::new(),
        }
    }

    fn intern(&mut self, c: Component) -> u32 {
        let key = content_key(&c);
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.items.len() as u32;
        self.ids.insert(key, id);
        self.items.push(c);
        id
    }
}

/// Byte-exact fingerprint: row span, shape, then the sorted sparse
/// entries with value bits. Tensors never hold NaN or negative zero of
/// consequence here, so bit equality is value equality.
fn content_key(c: &Component) -> Vec<u8> {
    let t = &c.tensor;
    let mut key = Vec::with_capacity(16 + t.support_len() * (2 * t.order() + 8));
    key.extend_from_slice(&c.rows.to_le_bytes());
    key.extend_from_slice(&(t.order() as u16).to_le_bytes());
    key.extend_from_slice(&(t.dim() as u16).to_le_bytes());
    for (idx, v) in t.raw_entries() {
        for &i in idx.iter() {
            key.extend_from_slice(&i.to_le_bytes());
        }
        key.extend_from_slice(&v.to_bits().to_le_bytes());
    }
    key
}

/// State: sorted `(content id, copy count)` pairs.
type State = Vec<(u32, u32)>;

fn encode(state: &[(u32, u32)]) -> Box<[u64]> {
    state
        .iter()
        .map(|&(id, c)| ((id as u64) << 32) | c as u64)
        .collect()
}

fn bump(state: &mut State, id: u32) {
    match state.binary_search_by_key(&id, |&(i, _)| i) {
        Ok(i) => state[i].1 += 1,
        Err(i) => state.insert(i, (id, 1)),
    }
}

/// One distinct copy of a state component being attached to the current
/// row: `pairs` maps row axes to that copy's open axes, injectively.
struct Group {
    slot: usize,
    pairs: Vec<(usize, usize)>,
}

/// Compute `Σ F_γ`, the diagram count, and `max |F_γ|` over the closed
/// diagrams on the given rows in one pass; `connected_only` restricts
/// all three to connected diagrams. Row order does not change the
/// results, only the walk.
pub(crate) fn closed_diagram_walk(
    kernels: &[&CoefficientTensor],
    connected_only: bool,
) -> Result<WalkSummary> {
    if kernels.is_empty() {
        return Err(Error::EmptyRow { row: 0 });
    }
    let dim = kernels[0].dim();
    let mut total = 0usize;
    for (row, k) in kernels.iter().enumerate() {
        if k.order() == 0 {
            return Err(Error::EmptyRow { row });
        }
        if k.dim() != dim {
            return Err(Error::DimMismatch {
                left: dim,
                right: k.dim(),
            });
        }
        total += k.order();
    }
    if total > crate::diagram::VERTEX_CAP {
        return Err(Error::VertexCap {
            total,
            cap: crate::diagram::VERTEX_CAP,
        });
    }
    if total % 2 == 1 {
        return Ok(WalkSummary::zero());
    }
    // remaining[r] = total axis count of rows after r.
    let mut remaining = vec![0usize; kernels.len()];
    for r in (0..kernels.len().saturating_sub(1)).rev() {
        remaining[r] = remaining[r + 1] + kernels[r + 1].order();
    }
    let mut walker = Walker {
        kernels,
        connected_only,
        remaining,
        interner: Interner::new(),
        memo: HashMap::new(),
    };
    Ok(walker.walk(0, &Vec::new()))
}

struct Walker<'a> {
    kernels: &'a [&'a CoefficientTensor],
    connected_only: bool,
    remaining: Vec<usize>,
    interner: Interner,
    memo: HashMap<(u32, Box<[u64]>), WalkSummary>,
}

impl Walker<'_> {
    fn walk(&mut self, r: usize, state: &State) -> WalkSummary {
        if r == self.kernels.len() {
            return if state.is_empty() {
                WalkSummary::one()
            } else {
                WalkSummary::zero()
            };
        }
        let key = (r as u32, encode(state));
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut out = Accum {
            sum: Kahan::new(),
            count: 0,
            max_abs: 0.0,
        };
        let mut groups = Vec::new();
        let mut used = vec![0u32; state.len()];
        self.attach(r, state, 0, &mut groups, &mut used, 1, &mut out);
        let summary = WalkSummary {
            sum: out.sum.value(),
            count: out.count,
            max_abs: out.max_abs,
        };
        self.memo.insert(key, summary);
        summary
    }

    /// Enumerate the choices for row axis `p`: stay open, join an
    /// already-attached copy on a free axis, or claim a fresh copy of
    /// some component. Claiming multiplies `ways` by the number of
    /// interchangeable copies left, which is the only place copies
    /// differ.
    #[allow(clippy::too_many_arguments)]
    fn attach(
        &mut self,
        r: usize,
        state: &State,
        p: usize,
        groups: &mut Vec<Group>,
        used: &mut Vec<u32>,
        ways: u128,
        out: &mut Accum,
    ) {
        let k = self.kernels[r].order();
        if p == k {
            self.settle(r, state, groups, used, ways, out);
            return;
        }
        // Stay open.
        self.attach(r, state, p + 1, groups, used, ways, out);
        // Join an existing group on an unused axis.
        for gi in 0..groups.len() {
            let slot = groups[gi].slot;
            let order = self.interner.items[state[slot].0 as usize].tensor.order();
            for a in 0..order {
                if groups[gi].pairs.iter().any(|&(_, b)| b == a) {
                    continue;
                }
                groups[gi].pairs.push((p, a));
                self.attach(r, state, p + 1, groups, used, ways, out);
                groups[gi].pairs.pop();
            }
        }
        // Claim a fresh copy.
        for slot in 0..state.len() {
            let (id, count) = state[slot];
            let free = count - used[slot];
            if free == 0 {
                continue;
            }
            let order = self.interner.items[id as usize].tensor.order();
            used[slot] += 1;
            for a in 0..order {
                groups.push(Group {
                    slot,
                    pairs: vec![(p, a)],
                });
                self.attach(r, state, p + 1, groups, used, ways * free as u128, out);
                groups.pop();
            }
            used[slot] -= 1;
        }
    }

    /// All row axes decided: merge the touched copies with the row into
    /// one component, emit its factor if it closed, and recurse.
    fn settle(
        &mut self,
        r: usize,
        state: &State,
        groups: &[Group],
        used: &[u32],
        ways: u128,
        out: &mut Accum,
    ) {
        let m = self.kernels.len();
        let mut merged = self.kernels[r].clone();
        let mut rows = 1u32;
        // Position of each original row axis inside `merged`.
        let mut pos: Vec<Option<usize>> = (0..merged.order()).map(Some).collect();
        for g in groups {
            let comp = &self.interner.items[state[g.slot].0 as usize];
            rows += comp.rows;
            let pairs: Vec<(usize, usize)> = g
                .pairs
                .iter()
                .map(|&(pr, ca)| (pos[pr].expect("row axis still free"), ca))
                .collect();
            let old_order = merged.order();
            merged = group_contract(&merged, &comp.tensor, &pairs)
                .expect("walker pairs are in range by construction");
            // Free axes of `merged` keep their order and move to the
            // front; consumed ones vanish.
            let mut shift = vec![None; old_order];
            let mut next = 0;
            for ax in 0..old_order {
                if !pairs.iter().any(|&(pa, _)| pa == ax) {
                    shift[ax] = Some(next);
                    next += 1;
                }
            }
            for slot_pos in pos.iter_mut() {
                *slot_pos = slot_pos.and_then(|old| shift[old]);
            }
        }
        let mut child: State = state
            .iter()
            .enumerate()
            .filter_map(|(i, &(id, c))| {
                let rem = c - used[i];
                (rem > 0).then_some((id, rem))
            })
            .collect();
        let mut factor = 1.0;
        if merged.order() == 0 {
            // The merged component closed.
            if self.connected_only && (r + 1 != m || !child.is_empty()) {
                return;
            }
            factor = merged.scalar_value();
        } else {
            if self.connected_only && r + 1 == m {
                return;
            }
            let id = self.interner.intern(Component {
                tensor: merged,
                rows,
            });
            bump(&mut child, id);
        }
        // A completion must absorb every open axis into future rows.
        let open_total: usize = child
            .iter()
            .map(|&(id, c)| self.interner.items[id as usize].tensor.order() * c as usize)
            .sum();
        let left = self.remaining[r];
        if open_total > left || (open_total + left) % 2 == 1 {
            return;
        }
        let sub = self.walk(r + 1, &child);
        if sub.count == 0 {
            return;
        }
        out.sum.add(ways as f64 * factor * sub.sum);
        out.count += ways * sub.count;
        out.max_abs = out.max_abs.max(factor.abs() * sub.max_abs);
    }
}

struct Accum {
    sum: Kahan,
    count: u128,
    max_abs: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{enumerate_closed_diagrams, evaluate_closed};
    use crate::gen;
    use crate::util::double_factorial_odd;

    /// Reference: enumerate and evaluate every diagram separately.
    fn by_enumeration(kernels: &[&CoefficientTensor], connected_only: bool) -> WalkSummary {
        let rows: Vec<usize> = kernels.iter().map(|k| k.order()).collect();
        let mut sum = Kahan::new();
        let mut count = 0u128;
        let mut max_abs = 0.0f64;
        for d in enumerate_closed_diagrams(&rows).unwrap() {
            if connected_only && !d.is_connected() {
                continue;
            }
            let v = evaluate_closed(&d, kernels).unwrap();
            sum.add(v);
            count += 1;
            max_abs = max_abs.max(v.abs());
        }
        WalkSummary {
            sum: sum.value(),
            count,
            max_abs,
        }
    }

    fn assert_close(a: &WalkSummary, b: &WalkSummary, what: &str) {
        assert_eq!(a.count, b.count, "{what}: count");
        let scale = b.sum.abs().max(1.0);
        assert!(
            (a.sum - b.sum).abs() <= 1e-10 * scale,
            "{what}: sum {} vs {}",
            a.sum,
            b.sum
        );
        let mscale = b.max_abs.max(1.0);
        assert!(
            (a.max_abs - b.max_abs).abs() <= 1e-10 * mscale,
            "{what}: max {} vs {}",
            a.max_abs,
            b.max_abs
        );
    }

    #[test]
    fn matches_enumeration_identical_kernels() {
        for (k, m) in [(1usize, 6usize), (2, 4), (3, 4), (2, 5)] {
            let f = gen::random_sparse(k, 3, 6, 300 + (10 * k + m) as u64);
            let kernels: Vec<&CoefficientTensor> = std::iter::repeat(&f).take(m).collect();
            for connected in [false, true] {
                let got = closed_diagram_walk(&kernels, connected).unwrap();
                let want = by_enumeration(&kernels, connected);
                assert_close(&got, &want, &format!("k={k} m={m} connected={connected}"));
            }
        }
    }

    #[test]
    fn matches_enumeration_mixed_rows() {
        let f = gen::random_sparse(3, 2, 5, 310);
        let g = gen::random_sparse(2, 2, 3, 311);
        let h = gen::random_sparse(1, 2, 2, 312);
        let profiles: Vec<Vec<&CoefficientTensor>> = vec![
            vec![&f, &g, &h],
            vec![&g, &g, &f, &h],
            vec![&h, &g, &h, &g],
            vec![&f, &f, &g, &g, &h, &h],
        ];
        for kernels in profiles {
            for connected in [false, true] {
                let got = closed_diagram_walk(&kernels, connected).unwrap();
                let want = by_enumeration(&kernels, connected);
                let rows: Vec<usize> = kernels.iter().map(|k| k.order()).collect();
                assert_close(&got, &want, &format!("rows {rows:?} connected={connected}"));
            }
        }
    }

    #[test]
    fn gaussian_rows_recover_pairing_count_and_norm_powers() {
        // 2M rows of order 1 with one shared vector a: the sum is
        // (2M-1)!! · ‖a‖^{2M} and every pairing is counted.
        let a = gen::random_sparse(1, 3, 3, 320);
        let norm_sq = crate::tensor::inner(&a, &a).unwrap();
        for big_m in 1..=6usize {
            let kernels: Vec<&CoefficientTensor> =
                std::iter::repeat(&a).take(2 * big_m).collect();
            let got = closed_diagram_walk(&kernels, false).unwrap();
            assert_eq!(got.count, double_factorial_odd(big_m));
            let want = double_factorial_odd(big_m) as f64 * norm_sq.powi(big_m as i32);
            assert!(
                (got.sum - want).abs() <= 1e-10 * want.abs().max(1.0),
                "M={big_m}: {} vs {want}",
                got.sum
            );
            // Only M=1 is connected for order-1 rows.
            let conn = closed_diagram_walk(&kernels, true).unwrap();
            assert_eq!(conn.count, if big_m == 1 { 1 } else { 0 });
        }
    }

    #[test]
    fn two_rows_all_diagrams_connected() {
        let f = gen::random_symmetric_unit(3, 3, 5, 321);
        let kernels = vec![&f, &f];
        let all = closed_diagram_walk(&kernels, false).unwrap();
        let conn = closed_diagram_walk(&kernels, true).unwrap();
        assert_eq!(all.count, 6);
        assert_eq!(conn.count, 6);
        assert_eq!(all.sum, conn.sum);
        // Symmetric unit kernel: every matching contributes 1.
        assert!((all.sum - 6.0).abs() < 1e-9, "{}", all.sum);
    }

    #[test]
    fn odd_profiles_and_errors() {
        let f = gen::random_sparse(2, 2, 3, 322);
        let h = gen::random_sparse(1, 2, 2, 323);
        let odd = closed_diagram_walk(&[&f, &h], false).unwrap();
        assert_eq!(odd.count, 0);
        assert_eq!(odd.sum, 0.0);
        let wrong_dim = gen::random_sparse(2, 3, 3, 324);
        assert!(matches!(
            closed_diagram_walk(&[&f, &wrong_dim], false),
            Err(Error::DimMismatch { .. })
        ));
        assert!(matches!(
            closed_diagram_walk(&[], false),
            Err(Error::EmptyRow { .. })
        ));
        let big = gen::random_sparse(7, 2, 3, 325);
        assert!(matches!(
            closed_diagram_walk(&[&big, &big, &big, &big], false),
            Err(Error::VertexCap { .. })
        ));
    }

    #[test]
    fn walk_is_deterministic() {
        let f = gen::random_sparse(2, 3, 8, 326);
        let kernels: Vec<&CoefficientTensor> = std::iter::repeat(&f).take(6).collect();
        let a = closed_diagram_walk(&kernels, false).unwrap();
        let b = closed_diagram_walk(&kernels, false).unwrap();
        assert_eq!(a.sum.to_bits(), b.sum.to_bits());
        assert_eq!(a.count, b.count);
        assert_eq!(a.max_abs.to_bits(), b.max_abs.to_bits());
    }

    #[test]
    fn deep_profile_stays_fast() {
        // 8 rows of order 2: 16 vertices. Enumeration would visit ~2e6
        // matchings; the memoized walk collapses them through chain
        // contents. This also pins the count against the DP counter.
        let f = gen::random_sparse(2, 3, 9, 327);
        let kernels: Vec<&CoefficientTensor> = std::iter::repeat(&f).take(8).collect();
        let got = closed_diagram_walk(&kernels, false).unwrap();
        let count = crate::diagram::count_closed_diagrams(&[2; 8]).unwrap();
        assert_eq!(got.count, count);
        assert!(got.sum.is_finite());
    }
}
