//! Sparse coefficient tensors.
//!
//! A [`CoefficientTensor`] holds the coefficients `a(n₁,…,n_k)` of a
//! degree-`k` chaos polynomial in `n` Gaussian coordinates: `order = k`
//! axes, every axis indexed by `1..=dim`. Storage is a sorted sparse map;
//! entries whose magnitude falls below [`DROP_EPS`] after arithmetic are
//! dropped, so a tensor never stores explicit zeros and iteration order is
//! canonical.
//!
//! Conventions used across the crate:
//!
//! * **index values** are 1-based (`1..=dim`), matching the JSON format;
//! * **axis positions** are 0-based (`0..order`), like any Rust sequence.
//!
//! All operations are pure: they take `&self` and return fresh tensors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::util::{factorial_u128, multiset_permutations, Kahan};

/// Magnitude below which an entry is considered numerically zero and
/// removed after arithmetic.
pub const DROP_EPS: f64 = 1e-15;

/// Largest dimension an axis may have (indices are stored as `u16`).
pub const MAX_DIM: usize = u16::MAX as usize;

pub(crate) type RawIdx = Box<[u16]>;

/// Sparse real tensor with `order` axes, each indexed by `1..=dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTensor {
    order: usize,
    dim: usize,
    symmetric: bool,
    entries: BTreeMap<RawIdx, f64>,
}

impl CoefficientTensor {
    /// Empty tensor of the given shape. `order == 0` is allowed and models
    /// a scalar (at most one entry, at the empty index tuple).
    pub fn new(order: usize, dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimTooLarge { dim, max: MAX_DIM });
        }
        Ok(Self {
            order,
            dim,
            symmetric: order <= 1,
            entries: BTreeMap::new(),
        })
    }

    /// Build from `(index tuple, value)` pairs with 1-based indices.
    /// Duplicate tuples are rejected; exact zeros are dropped.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        let mut t = Self::new(order, dim)?;
        for (idx, val) in entries {
            let raw = t.check_idx(&idx)?;
            if t.entries.contains_key(&raw) {
                return Err(Error::DuplicateEntry(idx));
            }
            if val != 0.0 {
                t.entries.insert(raw, val);
            }
        }
        t.symmetric = t.support_is_symmetric();
        Ok(t)
    }

    /// Scalar tensor (order 0) holding `value`.
    pub fn scalar(dim: usize, value: f64) -> Result<Self> {
        let mut t = Self::new(0, dim)?;
        if value != 0.0 {
            t.entries.insert(Vec::new().into_boxed_slice(), value);
        }
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Whether the tensor is known to be invariant under all axis
    /// permutations. Maintained by constructors and [`Self::symmetrize`].
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Number of stored (nonzero) entries.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value at a 1-based index tuple (0 when absent).
    pub fn get(&self, idx: &[usize]) -> f64 {
        match self.raw_idx(idx) {
            Some(raw) => self.entries.get(&raw).copied().unwrap_or(0.0),
            None => 0.0,
        }
    }

    /// Set the value at a 1-based index tuple; a zero value removes the
    /// entry. Clears the symmetric flag unless the tensor stays trivially
    /// symmetric.
    pub fn set(&mut self, idx: &[usize], val: f64) -> Result<()> {
        let raw = self.check_idx(idx)?;
        if val == 0.0 {
            self.entries.remove(&raw);
        } else {
            self.entries.insert(raw, val);
        }
        self.symmetric = self.order <= 1;
        Ok(())
    }

    /// Iterate entries in canonical (lexicographic) order with 1-based
    /// index tuples.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.entries
            .iter()
            .map(|(k, &v)| (k.iter().map(|&c| c as usize + 1).collect(), v))
    }

    /// Value of an order-0 tensor.
    pub fn scalar_value(&self) -> f64 {
        debug_assert_eq!(self.order, 0);
        self.entries.values().next().copied().unwrap_or(0.0)
    }

    /// Largest entry magnitude (0 for the zero tensor).
    pub fn max_abs(&self) -> f64 {
        self.entries.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm `sqrt(Σ a(idx)²)`, compensated.
    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = Kahan::new();
        for v in self.entries.values() {
            acc.add(v * v);
        }
        acc.value().sqrt()
    }

    /// Entrywise multiple `c · a`, with the usual small-entry drop.
    pub fn scale(&self, c: f64) -> Self {
        let mut entries = BTreeMap::new();
        for (k, v) in &self.entries {
            let w = c * v;
            if w.abs() >= DROP_EPS {
                entries.insert(k.clone(), w);
            }
        }
        Self {
            order: self.order,
            dim: self.dim,
            symmetric: self.symmetric || self.order <= 1,
            entries,
        }
    }

    /// Symmetrization `ā(idx) = (1/k!) Σ_π a(π·idx)`: every entry becomes
    /// the mean of its permutation orbit. If the input is already
    /// symmetric the output is entrywise identical to it; the output is
    /// always exactly symmetric because one value is written to the whole
    /// orbit.
    pub fn symmetrize(&self) -> Self {
        if self.order <= 1 {
            let mut t = self.clone();
            t.symmetric = true;
            return t;
        }
        // Group the support by sorted representative.
        let mut orbits: BTreeMap<RawIdx, Vec<(&RawIdx, f64)>> = BTreeMap::new();
        for (k, &v) in &self.entries {
            let mut rep: Vec<u16> = k.to_vec();
            rep.sort_unstable();
            orbits
                .entry(rep.into_boxed_slice())
                .or_default()
                .push((k, v));
        }
        let mut entries = BTreeMap::new();
        for (rep, members) in orbits {
            let orbit_size = orbit_size(&rep);
            let complete = members.len() as u128 == orbit_size;
            let uniform = members.iter().all(|&(_, v)| v == members[0].1);
            let value = if complete && uniform {
                // Already symmetric on this orbit: copy bit-for-bit.
                members[0].1
            } else {
                let mut acc = Kahan::new();
                for &(_, v) in &members {
                    acc.add(v);
                }
                acc.value() / orbit_size as f64
            };
            if value.abs() < DROP_EPS {
                continue;
            }
            for idx in rearrangements(&rep) {
                entries.insert(idx, value);
            }
        }
        Self {
            order: self.order,
            dim: self.dim,
            symmetric: true,
            entries,
        }
    }

    /// Exhaustive symmetry test on the stored support: every orbit must be
    /// fully present with one common value.
    pub fn support_is_symmetric(&self) -> bool {
        if self.order <= 1 {
            return true;
        }
        let mut orbits: HashMap<RawIdx, (f64, u128)> = HashMap::new();
        for (k, &v) in &self.entries {
            let mut rep: Vec<u16> = k.to_vec();
            rep.sort_unstable();
            let slot = orbits.entry(rep.into_boxed_slice()).or_insert((v, 0));
            if slot.0 != v {
                return false;
            }
            slot.1 += 1;
        }
        orbits
            .iter()
            .all(|(rep, &(_, seen))| seen == orbit_size(rep))
    }

    fn check_idx(&self, idx: &[usize]) -> Result<RawIdx> {
        if idx.len() != self.order {
            return Err(Error::IndexLength {
                got: idx.len(),
                order: self.order,
            });
        }
        let mut raw = Vec::with_capacity(idx.len());
        for (axis, &value) in idx.iter().enumerate() {
            if value == 0 || value > self.dim {
                return Err(Error::IndexOutOfRange {
                    axis,
                    value,
                    dim: self.dim,
                });
            }
            raw.push((value - 1) as u16);
        }
        Ok(raw.into_boxed_slice())
    }

    fn raw_idx(&self, idx: &[usize]) -> Option<RawIdx> {
        if idx.len() != self.order {
            return None;
        }
        let mut raw = Vec::with_capacity(idx.len());
        for &value in idx {
            if value == 0 || value > self.dim {
                return None;
            }
            raw.push((value - 1) as u16);
        }
        Some(raw.into_boxed_slice())
    }

    // ----- crate-internal raw access for hot paths -----

    pub(crate) fn raw_entries(&self) -> impl Iterator<Item = (&RawIdx, f64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    /// JSON round-trip helpers for the on-disk format.
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("tensor serialization cannot fail")
    }
}

/// Number of distinct rearrangements of a sorted index tuple.
fn orbit_size(sorted: &[u16]) -> u128 {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        runs.push(j - i);
        i = j;
    }
    multiset_permutations(&runs)
}

/// All distinct rearrangements of a sorted tuple, in lexicographic order.
fn rearrangements(sorted: &[u16]) -> Vec<RawIdx> {
    let mut out = Vec::new();
    let mut cur = sorted.to_vec();
    loop {
        out.push(cur.clone().into_boxed_slice());
        // Classic next-permutation on a multiset.
        let n = cur.len();
        let mut i = n.wrapping_sub(2);
        while i != usize::MAX && cur[i] >= cur[i + 1] {
            i = i.wrapping_sub(1);
        }
        if i == usize::MAX {
            return out;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i] {
            j -= 1;
        }
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// Contract `a` and `b` over the listed axis pairs.
///
/// `pairs` holds `(axis_in_a, axis_in_b)` positions (0-based). The result
/// keeps the unpaired axes of `a` in their original order, followed by the
/// unpaired axes of `b`. An empty pair list is the outer product; pairing
/// every axis of both sides yields an order-0 scalar. Contributions to each
/// output entry are accumulated with compensated summation and entries
/// below [`DROP_EPS`] are dropped.
pub fn group_contract(
    a: &CoefficientTensor,
    b: &CoefficientTensor,
    pairs: &[(usize, usize)],
) -> Result<CoefficientTensor> {
    if a.dim != b.dim {
        return Err(Error::DimMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let mut seen_a = vec![false; a.order];
    let mut seen_b = vec![false; b.order];
    for &(pa, pb) in pairs {
        if pa >= a.order {
            return Err(Error::AxisOutOfRange {
                axis: pa,
                order: a.order,
            });
        }
        if pb >= b.order {
            return Err(Error::AxisOutOfRange {
                axis: pb,
                order: b.order,
            });
        }
        if std::mem::replace(&mut seen_a[pa], true) {
            return Err(Error::DuplicateAxis { axis: pa });
        }
        if std::mem::replace(&mut seen_b[pb], true) {
            return Err(Error::DuplicateAxis { axis: pb });
        }
    }
    let free_a: Vec<usize> = (0..a.order).filter(|&i| !seen_a[i]).collect();
    let free_b: Vec<usize> = (0..b.order).filter(|&i| !seen_b[i]).collect();
    let out_order = free_a.len() + free_b.len();

    // Index b's entries by their paired-axis values, in pair-list order.
    let mut by_key: HashMap<RawIdx, Vec<(RawIdx, f64)>> = HashMap::new();
    for (idx, v) in b.raw_entries() {
        let key: RawIdx = pairs.iter().map(|&(_, pb)| idx[pb]).collect();
        let free: RawIdx = free_b.iter().map(|&p| idx[p]).collect();
        by_key.entry(key).or_default().push((free, v));
    }

    let mut acc: HashMap<RawIdx, Kahan> = HashMap::new();
    for (idx, va) in a.raw_entries() {
        let key: RawIdx = pairs.iter().map(|&(pa, _)| idx[pa]).collect();
        let Some(matches) = by_key.get(&key) else {
            continue;
        };
        let head: Vec<u16> = free_a.iter().map(|&p| idx[p]).collect();
        for (free, vb) in matches {
            let mut out = Vec::with_capacity(out_order);
            out.extend_from_slice(&head);
            out.extend_from_slice(free);
            acc.entry(out.into_boxed_slice())
                .or_insert_with(Kahan::new)
                .add(va * vb);
        }
    }

    let mut entries = BTreeMap::new();
    for (k, kahan) in acc {
        let v = kahan.value();
        if v.abs() >= DROP_EPS {
            entries.insert(k, v);
        }
    }
    Ok(CoefficientTensor {
        order: out_order,
        dim: a.dim,
        symmetric: out_order <= 1,
        entries,
    })
}

/// Full inner product `Σ a(idx)·b(idx)` (all axes paired positionally).
pub fn inner(a: &CoefficientTensor, b: &CoefficientTensor) -> Result<f64> {
    if a.order != b.order {
        return Err(Error::OrderMismatch {
            expected: a.order,
            got: b.order,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..a.order).map(|i| (i, i)).collect();
    Ok(group_contract(a, b, &pairs)?.scalar_value())
}

/// Exact `k!` as f64-safe u128 (used in normalizations).
pub fn factorial(k: usize) -> u128 {
    factorial_u128(k)
}

// ----- serde: the on-disk JSON format -----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    idx: Vec<usize>,
    val: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorRepr {
    order: usize,
    dim: usize,
    symmetric: bool,
    entries: Vec<EntryRepr>,
}

impl Serialize for CoefficientTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = TensorRepr {
            order: self.order,
            dim: self.dim,
            symmetric: self.symmetric,
            entries: self
                .iter()
                .map(|(idx, val)| EntryRepr { idx, val })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientTensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TensorRepr::deserialize(d)?;
        let mut t = CoefficientTensor::from_entries(
            repr.order,
            repr.dim,
            repr.entries.into_iter().map(|e| (e.idx, e.val)),
        )
        .map_err(D::Error::custom)?;
        if repr.symmetric && !t.symmetric {
            let witness = t.iter().next().map(|(i, _)| i).unwrap_or_default();
            return Err(D::Error::custom(Error::SymmetryFlag(witness)));
        }
        if !repr.symmetric {
            t.symmetric = t.order <= 1;
        }
        Ok(t)
    }
}

impl fmt::Display for CoefficientTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "order-{} dim-{} tensor, {} entries",
            self.order,
            self.dim,
            self.entries.len()
        )
    }
}
