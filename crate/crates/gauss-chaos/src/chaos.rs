//! Chaos polynomials as functions of a Gaussian vector.
//!
//! `Z(f) = Σ f(n₁,…,n_k) · :ξ_{n₁}⋯ξ_{n_k}:` where ξ has independent
//! `N(0,1)` coordinates and the Wick monomial factorizes over distinct
//! coordinates into Hermite polynomials: if the tuple uses coordinate `c`
//! with multiplicity `m_c`, then `:ξ_{n₁}⋯ξ_{n_k}: = Π_c He_{m_c}(ξ_c)`.
//!
//! Two independent representations live here:
//!
//! * [`ChaosPolynomial`]: compiled Hermite-factor form, built for fast
//!   pointwise evaluation (simulation hot path);
//! * [`MonomialExpansion`]: plain-monomial form `Σ c_α ξ^α`, built for
//!   exact expectations via `E ξ^{2p} = (2p−1)!!` on independent
//!   coordinates. Raising it to a power and taking the expectation gives
//!   [`isserlis_moment`], a moment oracle that never touches the diagram
//!   machinery.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hermite::hermite_coefficients;
use crate::tensor::CoefficientTensor;
use crate::util::{double_factorial_odd, Kahan};

/// Caps for the monomial-expansion oracle; beyond them the dense
/// exponent bookkeeping stops being the easy, obviously-correct path.
pub const MAX_ORACLE_DIM: usize = 4;
pub const MAX_ORACLE_ORDER: usize = 3;
pub const MAX_ORACLE_DEGREE: usize = 16;

/// Compiled Hermite-factor form of `Z(f)`.
///
/// Index tuples with the same coordinate-multiplicity profile are merged
/// at compile time, so a symmetric kernel with a large support can still
/// evaluate over a short term list.
#[derive(Clone, Debug)]
pub struct ChaosPolynomial {
    dim: usize,
    order: usize,
    /// (coordinate, Hermite order) factor lists, coordinates 0-based and
    /// strictly increasing within a term.
    terms: Vec<(Vec<(u16, u8)>, f64)>,
    max_factor: usize,
}

impl ChaosPolynomial {
    pub fn compile(f: &CoefficientTensor) -> Self {
        let mut grouped: BTreeMap<Vec<(u16, u8)>, Kahan> = BTreeMap::new();
        for (idx, v) in f.raw_entries() {
            let mut sorted: Vec<u16> = idx.to_vec();
            sorted.sort_unstable();
            let mut factors: Vec<(u16, u8)> = Vec::new();
            for &c in &sorted {
                match factors.last_mut() {
                    Some((coord, mult)) if *coord == c => *mult += 1,
                    _ => factors.push((c, 1)),
                }
            }
            grouped.entry(factors).or_insert_with(Kahan::new).add(v);
        }
        let mut max_factor = 0usize;
        let terms: Vec<(Vec<(u16, u8)>, f64)> = grouped
            .into_iter()
            .filter_map(|(factors, acc)| {
                let v = acc.value();
                if v == 0.0 {
                    return None;
                }
                for &(_, m) in &factors {
                    max_factor = max_factor.max(m as usize);
                }
                Some((factors, v))
            })
            .collect();
        Self {
            dim: f.dim(),
            order: f.order(),
            terms,
            max_factor,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Degree of the underlying kernel.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Evaluate at a point, `xi.len() == dim` (0-based coordinates).
    pub fn evaluate(&self, xi: &[f64]) -> f64 {
        assert_eq!(xi.len(), self.dim, "point dimension mismatch");
        // He_l(xi[c]) table for every coordinate, orders 0..=max_factor.
        let rows = self.max_factor + 1;
        let mut he = vec![0.0f64; self.dim * rows];
        for (c, &x) in xi.iter().enumerate() {
            let base = c * rows;
            he[base] = 1.0;
            if rows > 1 {
                he[base + 1] = x;
                for l in 1..self.max_factor {
                    he[base + l + 1] = x * he[base + l] - l as f64 * he[base + l - 1];
                }
            }
        }
        let mut acc = Kahan::new();
        for (factors, coeff) in &self.terms {
            let mut prod = *coeff;
            for &(c, m) in factors {
                prod *= he[c as usize * rows + m as usize];
            }
            acc.add(prod);
        }
        acc.value()
    }
}

/// Dense-exponent monomial form `Σ_α c_α · ξ^α`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialExpansion {
    dim: usize,
    terms: BTreeMap<Box<[u8]>, f64>,
}

impl MonomialExpansion {
    fn constant(dim: usize, value: f64) -> Self {
        let mut terms = BTreeMap::new();
        if value != 0.0 {
            terms.insert(vec![0u8; dim].into_boxed_slice(), value);
        }
        Self { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut acc: BTreeMap<Box<[u8]>, Kahan> = BTreeMap::new();
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let sum: Box<[u8]> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                acc.entry(sum).or_insert_with(Kahan::new).add(va * vb);
            }
        }
        let terms = acc
            .into_iter()
            .filter_map(|(e, k)| {
                let v = k.value();
                (v != 0.0).then_some((e, v))
            })
            .collect();
        Self {
            dim: self.dim,
            terms,
        }
    }

    pub fn pow(&self, p: usize) -> Self {
        let mut out = Self::constant(self.dim, 1.0);
        for _ in 0..p {
            out = out.multiply(self);
        }
        out
    }

    /// Exact Gaussian expectation: monomials with any odd exponent
    /// vanish, the rest contribute `c_α · Π (α_c − 1)!!`.
    pub fn expectation(&self) -> f64 {
        let mut acc = Kahan::new();
        for (exps, &v) in &self.terms {
            if exps.iter().any(|&e| e % 2 == 1) {
                continue;
            }
            let mut weight = v;
            for &e in exps.iter() {
                weight *= double_factorial_odd(e as usize / 2) as f64;
            }
            acc.add(weight);
        }
        acc.value()
    }

    /// Pointwise value, for cross-checks against [`ChaosPolynomial`].
    pub fn evaluate(&self, xi: &[f64]) -> f64 {
        assert_eq!(xi.len(), self.dim);
        let mut acc = Kahan::new();
        for (exps, &v) in &self.terms {
            let mut prod = v;
            for (c, &e) in exps.iter().enumerate() {
                prod *= xi[c].powi(e as i32);
            }
            acc.add(prod);
        }
        acc.value()
    }
}

/// Expand `Z(f)` into plain monomials through the Hermite coefficient
/// triangle.
pub fn monomial_expansion(f: &CoefficientTensor) -> MonomialExpansion {
    let dim = f.dim();
    let compiled = ChaosPolynomial::compile(f);
    let mut acc: BTreeMap<Box<[u8]>, Kahan> = BTreeMap::new();
    for (factors, coeff) in &compiled.terms {
        // Product of the univariate expansions of each Hermite factor.
        let mut partial: Vec<(Box<[u8]>, f64)> =
            vec![(vec![0u8; dim].into_boxed_slice(), *coeff)];
        for &(c, m) in factors {
            let he = hermite_coefficients(m as usize);
            let mut next = Vec::with_capacity(partial.len() * (m as usize / 2 + 1));
            for (exps, v) in &partial {
                for (p, &hc) in he.iter().enumerate() {
                    if hc == 0.0 {
                        continue;
                    }
                    let mut e = exps.clone();
                    e[c as usize] += p as u8;
                    next.push((e, v * hc));
                }
            }
            partial = next;
        }
        for (e, v) in partial {
            acc.entry(e).or_insert_with(Kahan::new).add(v);
        }
    }
    let terms = acc
        .into_iter()
        .filter_map(|(e, k)| {
            let v = k.value();
            (v != 0.0).then_some((e, v))
        })
        .collect();
    MonomialExpansion { dim, terms }
}

/// `E Z(f)^p` by monomial expansion and coordinatewise Gaussian moments.
///
/// This path shares nothing with the diagram evaluator: no pairings, no
/// contractions. Caps keep the dense exponent algebra comfortably exact:
/// `dim ≤ 4`, `order ≤ 3`, `p · order ≤ 16`.
pub fn isserlis_moment(f: &CoefficientTensor, p: usize) -> Result<f64> {
    if f.dim() > MAX_ORACLE_DIM {
        return Err(Error::CapExceeded {
            what: "oracle dimension",
            got: f.dim(),
            cap: MAX_ORACLE_DIM,
        });
    }
    if f.order() > MAX_ORACLE_ORDER {
        return Err(Error::CapExceeded {
            what: "oracle kernel order",
            got: f.order(),
            cap: MAX_ORACLE_ORDER,
        });
    }
    let degree = p * f.order();
    if degree > MAX_ORACLE_DEGREE {
        return Err(Error::CapExceeded {
            what: "oracle polynomial degree",
            got: degree,
            cap: MAX_ORACLE_DEGREE,
        });
    }
    Ok(monomial_expansion(f).pow(p).expectation())
}
