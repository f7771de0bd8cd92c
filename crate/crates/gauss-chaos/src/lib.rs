//! Exact moments, partition norms and tail bounds for polynomials of
//! independent standard Gaussian random variables.
//!
//! A degree-`k` Gaussian chaos polynomial is determined by a coefficient
//! tensor `a` on `{1,…,n}^k`:
//!
//! ```text
//! Z = Σ a(n₁,…,n_k) · :ξ_{n₁} ⋯ ξ_{n_k}:
//! ```
//!
//! where `:⋯:` is the Wick product (equal indices group into Hermite
//! polynomials) and the `ξ_i` are independent standard normals. The crate
//! computes:
//!
//! * exact mixed moments `E ∏_j (k_j! Z_j)` by summing closed diagrams,
//!   with cumulants as connected-diagram sums ([`moments`], [`diagram`]);
//! * the ladder of partition norms `V̄_s(a)` interpolating between the
//!   Frobenius norm (`s = 1`) and the injective norm (`s = k`)
//!   ([`partition`]);
//! * moment and tail bounds driven by that ladder, including the
//!   Hanson–Wright inequality as the degree-2 special case ([`bounds`]);
//! * Monte-Carlo sampling, empirical tails and a sharpness probe built on
//!   exact Hermite tail masses ([`sim`], [`chaos`], [`hermite`]);
//! * a lab for the degree-3 supremum experiment around Latała's
//!   conjectured `M^{-1/2}` bound ([`latala`]);
//! * self-contained verification suites that re-derive everything against
//!   independent oracles ([`suites`]).
//!
//! All randomized routines take explicit seeds and are bitwise
//! reproducible; floating-point accumulation is compensated throughout.

pub mod bounds;
pub mod chaos;
pub mod diagram;
pub mod error;
pub mod gen;
pub mod hermite;
pub mod latala;
pub mod moments;
pub mod partition;
pub mod rng;
pub mod sim;
pub mod suites;
pub mod tensor;

#[cfg(doctest)]
pub mod book;
mod util;
mod walk;

pub use error::{Error, Result};
pub use tensor::CoefficientTensor;

/// Library version, embedded into every CLI report.
pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
