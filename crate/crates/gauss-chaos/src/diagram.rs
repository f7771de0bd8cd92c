//! Contraction diagrams over rows of tensor axes.
//!
//! A diagram on row lengths `(k_1,…,k_m)` has `k_j` vertices in row `j`;
//! an edge joins two vertices of *different* rows, and every vertex lies
//! on at most one edge. In a **closed** diagram every vertex is matched;
//! diagrams with unmatched (open) vertices arise by restricting a closed
//! diagram to its first rows.
//!
//! Each vertex carries a label: matched pairs share the label of the
//! lexicographically smaller endpoint, open vertices keep their own.
//! Restrictions and connected components preserve parent labels, which is
//! what makes the row-by-row evaluation well defined: attaching row `r`
//! contracts exactly the axes whose labels already appeared in rows
//! `< r`, and the surviving labels name the open axes of the partial
//! kernel.
//!
//! The value of a closed diagram `γ` with one kernel per row is
//!
//! ```text
//! F_γ = Σ over index assignments to labels of Π_j kernel_j(row j labels)
//! ```
//!
//! computed here by that row recursion. `F` factorizes over the connected
//! components of the diagram, a fact the test suite checks and the moment
//! engine exploits.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tensor::{group_contract, CoefficientTensor};

/// Hard cap on the total vertex count for enumeration.
pub const VERTEX_CAP: usize = 24;

/// `(row id, position)`, both 0-based.
pub type Vertex = (usize, usize);

/// Outcome of setting up an enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumStatus {
    /// Diagrams exist (or at least may exist) and will be streamed.
    Ready,
    /// An odd vertex total admits no perfect matching: the stream is
    /// empty by parity, not by error.
    OddVertexTotal,
}

/// A diagram: rows, edges, and the vertex labeling described above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    /// Original row ids, strictly increasing. Fresh diagrams use `0..m`;
    /// restrictions keep the parent's ids.
    row_ids: Vec<usize>,
    row_lengths: Vec<usize>,
    /// Canonical: each edge `(a, b)` with `a < b` lexicographically,
    /// edges sorted.
    edges: Vec<(Vertex, Vertex)>,
    /// `labels[i][p]` = label of vertex `(row_ids[i], p)`.
    labels: Vec<Vec<u32>>,
}

impl Diagram {
    /// Build a diagram on rows `0..lengths.len()` from an edge list.
    /// Labels are assigned canonically (dense ids in vertex order).
    pub fn new(lengths: &[usize], edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let row_ids: Vec<usize> = (0..lengths.len()).collect();
        Self::with_rows(&row_ids, lengths, edges)
    }

    fn with_rows(
        row_ids: &[usize],
        lengths: &[usize],
        edges: &[(Vertex, Vertex)],
    ) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::EmptyRow { row: 0 });
        }
        for (i, &len) in lengths.iter().enumerate() {
            if len == 0 {
                return Err(Error::EmptyRow { row: row_ids[i] });
            }
        }
        let slot = |v: Vertex| -> Result<(usize, usize)> {
            let i = row_ids
                .iter()
                .position(|&r| r == v.0)
                .ok_or(Error::InvalidParam(format!("edge endpoint row {}", v.0)))?;
            if v.1 >= lengths[i] {
                return Err(Error::InvalidParam(format!(
                    "vertex position {} outside row {}",
                    v.1, v.0
                )));
            }
            Ok((i, v.1))
        };
        let mut canon: Vec<(Vertex, Vertex)> = Vec::with_capacity(edges.len());
        let mut used: Vec<Vec<bool>> = lengths.iter().map(|&l| vec![false; l]).collect();
        for &(a, b) in edges {
            let (ia, pa) = slot(a)?;
            let (ib, pb) = slot(b)?;
            if ia == ib {
                return Err(Error::InvalidParam(format!(
                    "edge within row {}: {:?}-{:?}",
                    a.0, a, b
                )));
            }
            for (i, p) in [(ia, pa), (ib, pb)] {
                if std::mem::replace(&mut used[i][p], true) {
                    return Err(Error::InvalidParam(format!(
                        "vertex ({}, {}) on two edges",
                        row_ids[i], p
                    )));
                }
            }
            canon.push(if a <= b { (a, b) } else { (b, a) });
        }
        canon.sort_unstable();
        let mut d = Self {
            row_ids: row_ids.to_vec(),
            row_lengths: lengths.to_vec(),
            edges: canon,
            labels: Vec::new(),
        };
        d.labels = d.canonical_labels();
        Ok(d)
    }

    /// Dense ids in vertex order; matched pairs share the smaller
    /// endpoint's id.
    fn canonical_labels(&self) -> Vec<Vec<u32>> {
        let mut offset = HashMap::new();
        let mut next = 0u32;
        for (i, &r) in self.row_ids.iter().enumerate() {
            offset.insert(r, next);
            next += self.row_lengths[i] as u32;
        }
        let dense = |v: Vertex| offset[&v.0] + v.1 as u32;
        let mut labels: Vec<Vec<u32>> = self
            .row_ids
            .iter()
            .zip(&self.row_lengths)
            .map(|(&r, &len)| (0..len).map(|p| dense((r, p))).collect())
            .collect();
        let slot = |v: Vertex| self.row_ids.iter().position(|&r| r == v.0).unwrap();
        for &(a, b) in &self.edges {
            let id = dense(a);
            labels[slot(a)][a.1] = id;
            labels[slot(b)][b.1] = id;
        }
        labels
    }

    pub fn num_rows(&self) -> usize {
        self.row_ids.len()
    }

    /// Original row ids, ascending.
    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.row_lengths
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Label of a vertex given as `(original row id, position)`.
    pub fn label(&self, v: Vertex) -> u32 {
        let i = self
            .row_ids
            .iter()
            .position(|&r| r == v.0)
            .expect("row id present");
        self.labels[i][v.1]
    }

    /// Labels of one row (by slot index, 0-based within this diagram).
    pub fn row_labels(&self, slot: usize) -> &[u32] {
        &self.labels[slot]
    }

    /// Vertices lying on no edge, in lexicographic order.
    pub fn open_vertices(&self) -> Vec<Vertex> {
        let mut matched: Vec<Vec<bool>> =
            self.row_lengths.iter().map(|&l| vec![false; l]).collect();
        for &(a, b) in &self.edges {
            for v in [a, b] {
                let i = self.row_ids.iter().position(|&r| r == v.0).unwrap();
                matched[i][v.1] = true;
            }
        }
        let mut out = Vec::new();
        for (i, &r) in self.row_ids.iter().enumerate() {
            for p in 0..self.row_lengths[i] {
                if !matched[i][p] {
                    out.push((r, p));
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        2 * self.edges.len() == self.row_lengths.iter().sum::<usize>()
    }

    /// Restriction to a subset of rows (original ids, any order): edges
    /// with both endpoints inside survive, all labels are preserved, so
    /// vertices whose partner falls outside become open but keep the edge
    /// label they already carried.
    pub fn restrict_to_rows(&self, keep: &[usize]) -> Result<Self> {
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let mut lengths = Vec::with_capacity(keep_sorted.len());
        let mut labels = Vec::with_capacity(keep_sorted.len());
        for &r in &keep_sorted {
            let i = self
                .row_ids
                .iter()
                .position(|&q| q == r)
                .ok_or(Error::InvalidParam(format!("row {r} not in diagram")))?;
            lengths.push(self.row_lengths[i]);
            labels.push(self.labels[i].clone());
        }
        let inside = |v: Vertex| keep_sorted.binary_search(&v.0).is_ok();
        let edges: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| inside(a) && inside(b))
            .collect();
        Ok(Self {
            row_ids: keep_sorted,
            row_lengths: lengths,
            edges,
            labels,
        })
    }

    /// Restriction to the first `r` rows in row-id order.
    pub fn restrict_to_first_rows(&self, r: usize) -> Result<Self> {
        let keep: Vec<usize> = self.row_ids.iter().take(r).copied().collect();
        self.restrict_to_rows(&keep)
    }

    /// Connectivity of the row graph (rows are nodes, edges connect the
    /// rows of each diagram edge). A single row with no edges counts as
    /// connected.
    pub fn is_connected(&self) -> bool {
        self.component_ids().iter().all(|&c| c == 0)
    }

    /// Union-find component id per row slot, renumbered by first
    /// appearance.
    fn component_ids(&self) -> Vec<usize> {
        let m = self.row_ids.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let ia = self.row_ids.iter().position(|&r| r == a.0).unwrap();
            let ib = self.row_ids.iter().position(|&r| r == b.0).unwrap();
            let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut ids = vec![usize::MAX; m];
        let mut next = 0;
        for i in 0..m {
            let root = find(&mut parent, i);
            if ids[root] == usize::MAX {
                ids[root] = next;
                next += 1;
            }
            ids[i] = ids[root];
        }
        ids
    }

    /// Connected components as sub-diagrams, ordered by smallest row id,
    /// labels preserved.
    pub fn connected_components(&self) -> Vec<Diagram> {
        let ids = self.component_ids();
        let count = ids.iter().copied().max().map_or(0, |m| m + 1);
        (0..count)
            .map(|c| {
                let rows: Vec<usize> = self
                    .row_ids
                    .iter()
                    .zip(&ids)
                    .filter(|&(_, &id)| id == c)
                    .map(|(&r, _)| r)
                    .collect();
                self.restrict_to_rows(&rows).expect("rows of this diagram")
            })
            .collect()
    }
}

impl std::fmt::Display for Diagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "rows {:?} edges [", self.row_lengths)?;
        for (i, &((r1, p1), (r2, p2))) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({r1},{p1})-({r2},{p2})")?;
        }
        write!(f, "]")
    }
}

/// Lazily enumerate every closed diagram on the given row lengths, in
/// canonical order (each step matches the first unmatched vertex to the
/// smallest admissible partner). An odd vertex total yields an empty
/// stream with [`EnumStatus::OddVertexTotal`]; exceeding [`VERTEX_CAP`]
/// is a hard error.
pub fn enumerate_closed_diagrams(row_lengths: &[usize]) -> Result<ClosedDiagrams> {
    if row_lengths.is_empty() {
        return Err(Error::EmptyRow { row: 0 });
    }
    for (row, &len) in row_lengths.iter().enumerate() {
        if len == 0 {
            return Err(Error::EmptyRow { row });
        }
    }
    let total: usize = row_lengths.iter().sum();
    if total > VERTEX_CAP {
        return Err(Error::VertexCap {
            total,
            cap: VERTEX_CAP,
        });
    }
    let status = if total % 2 == 0 {
        EnumStatus::Ready
    } else {
        EnumStatus::OddVertexTotal
    };
    let mut verts = Vec::with_capacity(total);
    for (r, &len) in row_lengths.iter().enumerate() {
        for p in 0..len {
            verts.push((r, p));
        }
    }
    Ok(ClosedDiagrams {
        rows: row_lengths.to_vec(),
        status,
        verts,
        partner: vec![usize::MAX; total],
        stack: Vec::new(),
        state: if status == EnumStatus::Ready {
            WalkState::Descend
        } else {
            WalkState::Done
        },
    })
}

enum WalkState {
    Descend,
    Backtrack,
    Done,
}

/// Iterator over closed diagrams; see [`enumerate_closed_diagrams`].
pub struct ClosedDiagrams {
    rows: Vec<usize>,
    status: EnumStatus,
    verts: Vec<Vertex>,
    /// Partner index per vertex (`usize::MAX` = unmatched).
    partner: Vec<usize>,
    /// Committed matches `(v, w)` as vertex indices, `v` increasing.
    stack: Vec<(usize, usize)>,
    state: WalkState,
}

impl ClosedDiagrams {
    pub fn status(&self) -> EnumStatus {
        self.status
    }

    fn admissible(&self, v: usize, w: usize) -> bool {
        self.partner[w] == usize::MAX && self.verts[w].0 != self.verts[v].0
    }

    fn emit(&self) -> Diagram {
        let edges: Vec<(Vertex, Vertex)> = self
            .stack
            .iter()
            .map(|&(v, w)| (self.verts[v], self.verts[w]))
            .collect();
        Diagram::new(&self.rows, &edges).expect("enumerated matching is valid")
    }
}

impl Iterator for ClosedDiagrams {
    type Item = Diagram;

    fn next(&mut self) -> Option<Diagram> {
        loop {
            match self.state {
                WalkState::Done => return None,
                WalkState::Descend => {
                    match self.partner.iter().position(|&p| p == usize::MAX) {
                        None => {
                            // Complete matching; emit and resume by
                            // backtracking on the next call.
                            self.state = WalkState::Backtrack;
                            return Some(self.emit());
                        }
                        Some(v) => {
                            let mut found = false;
                            for w in v + 1..self.verts.len() {
                                if self.admissible(v, w) {
                                    self.partner[v] = w;
                                    self.partner[w] = v;
                                    self.stack.push((v, w));
                                    found = true;
                                    break;
                                }
                            }
                            if !found {
                                self.state = WalkState::Backtrack;
                            }
                        }
                    }
                }
                WalkState::Backtrack => match self.stack.pop() {
                    None => {
                        self.state = WalkState::Done;
                    }
                    Some((v, w)) => {
                        self.partner[v] = usize::MAX;
                        self.partner[w] = usize::MAX;
                        let mut advanced = false;
                        for w2 in w + 1..self.verts.len() {
                            if self.admissible(v, w2) {
                                self.partner[v] = w2;
                                self.partner[w2] = v;
                                self.stack.push((v, w2));
                                advanced = true;
                                break;
                            }
                        }
                        if advanced {
                            self.state = WalkState::Descend;
                        }
                    }
                },
            }
        }
    }
}

/// Exact number of closed diagrams on the given rows, by memoized
/// recursion on the multiset of remaining row counts (0 for an odd
/// total). Unlike enumeration this stays fast for any profile under the
/// vertex cap.
pub fn count_closed_diagrams(row_lengths: &[usize]) -> Result<u128> {
    if row_lengths.is_empty() {
        return Err(Error::EmptyRow { row: 0 });
    }
    for (row, &len) in row_lengths.iter().enumerate() {
        if len == 0 {
            return Err(Error::EmptyRow { row });
        }
    }
    let total: usize = row_lengths.iter().sum();
    if total > VERTEX_CAP {
        return Err(Error::VertexCap {
            total,
            cap: VERTEX_CAP,
        });
    }
    if total % 2 == 1 {
        return Ok(0);
    }
    fn rec(counts: &mut Vec<u8>, memo: &mut HashMap<Vec<u8>, u128>) -> u128 {
        counts.sort_unstable();
        while counts.first() == Some(&0) {
            counts.remove(0);
        }
        if counts.is_empty() {
            return 1;
        }
        if let Some(&v) = memo.get(counts) {
            return v;
        }
        let key = counts.clone();
        // Match one vertex of the last (largest) row against every
        // other row; the count depends only on the multiset.
        let i = counts.len() - 1;
        let mut total = 0u128;
        for j in 0..counts.len() - 1 {
            let ways = counts[j] as u128;
            let mut next = counts.clone();
            next[i] -= 1;
            next[j] -= 1;
            total += ways * rec(&mut next, memo);
        }
        memo.insert(key, total);
        total
    }
    let mut counts: Vec<u8> = row_lengths.iter().map(|&l| l as u8).collect();
    Ok(rec(&mut counts, &mut HashMap::new()))
}

/// Partial kernel: the tensor left after evaluating a (possibly open)
/// diagram, with one axis per open vertex, tagged by that vertex's label.
#[derive(Clone, Debug)]
pub struct PartialKernel {
    pub open_labels: Vec<u32>,
    pub tensor: CoefficientTensor,
}

/// Evaluate a diagram against one kernel per row by the row recursion:
/// start from the first row's kernel, then repeatedly attach the next row,
/// contracting every axis pair whose labels match. Closed diagrams yield
/// an order-0 kernel whose value is `F_γ`.
pub fn evaluate(d: &Diagram, kernels: &[&CoefficientTensor]) -> Result<PartialKernel> {
    if kernels.len() != d.num_rows() {
        return Err(Error::KernelCount {
            expected: d.num_rows(),
            got: kernels.len(),
        });
    }
    let dim = kernels[0].dim();
    for (slot, k) in kernels.iter().enumerate() {
        if k.order() != d.row_lengths()[slot] {
            return Err(Error::OrderMismatch {
                expected: d.row_lengths()[slot],
                got: k.order(),
            });
        }
        if k.dim() != dim {
            return Err(Error::DimMismatch {
                left: dim,
                right: k.dim(),
            });
        }
    }
    let mut acc = kernels[0].clone();
    let mut acc_labels: Vec<u32> = d.row_labels(0).to_vec();
    for slot in 1..d.num_rows() {
        let row = d.row_labels(slot);
        let mut pairs = Vec::new();
        for (axis_acc, la) in acc_labels.iter().enumerate() {
            if let Some(axis_row) = row.iter().position(|lr| lr == la) {
                pairs.push((axis_acc, axis_row));
            }
        }
        let paired_acc: Vec<usize> = pairs.iter().map(|&(a, _)| a).collect();
        let paired_row: Vec<usize> = pairs.iter().map(|&(_, b)| b).collect();
        acc = group_contract(&acc, kernels[slot], &pairs)?;
        let mut labels = Vec::with_capacity(acc.order());
        for (axis, la) in acc_labels.iter().enumerate() {
            if !paired_acc.contains(&axis) {
                labels.push(*la);
            }
        }
        for (axis, lr) in row.iter().enumerate() {
            if !paired_row.contains(&axis) {
                labels.push(*lr);
            }
        }
        acc_labels = labels;
    }
    Ok(PartialKernel {
        open_labels: acc_labels,
        tensor: acc,
    })
}

/// `F_γ` of a closed diagram.
pub fn evaluate_closed(d: &Diagram, kernels: &[&CoefficientTensor]) -> Result<f64> {
    if !d.is_closed() {
        return Err(Error::InvalidParam("diagram has open vertices".into()));
    }
    Ok(evaluate(d, kernels)?.tensor.scalar_value())
}
