//! Distribution-free k-junta testing with exact query accounting.
//!
//! The crate is organized bottom-up:
//!
//! * [`bits`] and [`oracle`]: bit strings, blocks, distinguishing pairs and
//!   black-box Boolean functions whose evaluations are tallied.
//! * [`dist`]: finite distributions and the labeled sampling oracle.
//! * [`search`]: binary search over coordinates and over blocks.
//! * [`uniform`], [`tester`]: the uniform-distribution tester and the two
//!   distribution-free testers built on it.
//! * [`exact`]: brute-force distances and witness checks for small inputs.
//! * [`lbgen`]: random YES/NO instance pairs that are hard to tell apart.
//! * [`harness`]: seeded parallel trials, confidence intervals, profiles.
//! * [`format`]: JSON instance and distribution files.
//!
//! Coordinates are 1-based throughout.

pub mod bits;
pub mod dist;
pub mod error;
pub mod exact;
pub mod format;
pub mod harness;
pub mod lbgen;
pub mod oracle;
pub mod search;
pub mod tester;
pub mod uniform;
pub mod verdict;

pub use bits::{BitString, Block, DistinguishingPair, LabeledPair};
pub use dist::{labeled_sample, FiniteDistribution, LabeledSample};
pub use error::{Error, Result};
pub use oracle::{BooleanFunction, FunctionOracle, JuntaSpec, TruthTable};
pub use tester::{main_djunta, simple_djunta, DFTesterConfig};
pub use uniform::{uniform_junta, UniformTesterConfig};
pub use verdict::{Outcome, Verdict};
