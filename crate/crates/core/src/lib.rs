//! Egalitarian exchange of a homogeneous good on general networks.
//!
//! Agents sit on the nodes of an undirected graph, each with a peak `b_i`, and exchange units
//! with their neighbours. The crate computes
//!
//! * maximum b-matchings and their Gallai-Edmonds structure ([`matching`]),
//! * exact-rational maximum flows, minimum cuts and integral decompositions ([`flow`]),
//! * the Lorenz-dominant (egalitarian) allocation for divisible and indivisible goods, and a
//!   lottery over maximum b-matchings realizing the indivisible one ([`mechanism`]),
//! * brute-force ground truth and manipulation experiments for small instances ([`oracle`]).
//!
//! All quantities on the mechanism path are exact rationals ([`rational::Rational`]).

pub mod error;
pub mod fixtures;
pub mod flow;
pub mod instance;
pub mod matching;
pub mod mechanism;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use instance::{
    contract_matching, expand_nodes, lift_bmatching, parse_instance, ExpandedInstance, Instance,
    UtilityProfile,
};
pub use matching::{
    ged_decompose, max_bmatching, max_matching, realize_targets, BMatching, GedClass,
    GedDecomposition, Matching,
};
pub use rational::Rational;
