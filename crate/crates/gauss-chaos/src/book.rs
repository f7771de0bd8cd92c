//! Doc-test anchors for the guide in `book/`.
//!
//! Each struct below carries one chapter as its doc comment, so every
//! fenced Rust snippet in the guide compiles and runs under
//! `cargo test`. The module only exists while doc-testing; it never
//! appears in the public API or the rendered docs.

#[doc = include_str!("../../../book/src/overview.md")]
pub struct Overview;

#[doc = include_str!("../../../book/src/tensors.md")]
pub struct Tensors;

#[doc = include_str!("../../../book/src/partition-norms.md")]
pub struct PartitionNorms;

#[doc = include_str!("../../../book/src/diagrams.md")]
pub struct Diagrams;

#[doc = include_str!("../../../book/src/moments-cumulants.md")]
pub struct MomentsCumulants;

#[doc = include_str!("../../../book/src/bounds.md")]
pub struct Bounds;

#[doc = include_str!("../../../book/src/hermite-tails.md")]
pub struct HermiteTails;

#[doc = include_str!("../../../book/src/simulation.md")]
pub struct Simulation;

#[doc = include_str!("../../../book/src/latala-lab.md")]
pub struct LatalaLab;

#[doc = include_str!("../../../book/src/cli.md")]
pub struct Cli;

#[doc = include_str!("../../../book/src/verification.md")]
pub struct Verification;

#[doc = include_str!("../../../README.md")]
pub struct Readme;
