//! Midpoint geometry of the discrete hypercube.
//!
//! The cube {0,1}^N with the Hamming metric behaves like a positively
//! curved space: the set of near-half points between two vertex sets is
//! large, quantitatively so in terms of the distance between the sets.
//! This crate makes that statement checkable. It provides
//!
//! - vertices, vertex sets, and balanced crossover patterns with the codec
//!   that maps an endpoint pair to a midpoint pair and back
//!   ([`hypercube`], [`crossover`]),
//! - finitely supported measures in either f64 or exact rational
//!   arithmetic, midpoint mixtures, joint laws and their fibers
//!   ([`measure`], [`weight`]),
//! - exact 1-Wasserstein distances with optimal couplings and dual
//!   certificates ([`transport`]),
//! - coarse Ricci curvature of graphs from one-step ball transport
//!   ([`curvature`]),
//! - subgaussian concentration checks on permutation and crossover spaces,
//!   with the quotient projections tying the two together
//!   ([`concentration`]),
//! - and the verification layer that sweeps the set-level and entropic
//!   midpoint inequalities, the pair injection, fiber bounds, and the full
//!   derivation chain on concrete instances ([`verify`]).
//!
//! Reports carry the checked quantities and margins rather than bare
//! booleans, so a failing instance can be inspected directly.

pub mod concentration;
pub mod crossover;
pub mod curvature;
pub mod error;
pub mod hypercube;
pub mod measure;
pub mod transport;
pub mod verify;
pub mod weight;

pub use concentration::{
    check_laplace, check_tail, corollary4_check, corollary5_check, enumerate_sn, perm_distance,
    project_even, project_star, quotient_check, random_crossover_measure, random_lipschitz,
    sample_lipschitz, uniform_crossovers, w1h_check, LipschitzFunction, Permutation, Space,
    SpaceKind,
};
pub use crossover::{
    crossover_count, crossover_distance, decode, encode, enumerate_crossovers, iter_crossovers,
    k_subsets, midpoint_count, midpoints, Crossover, MidpointPair,
};
pub use curvature::{ball_measure, edge_curvature_sweep, kappa, CurvatureReport, Graph};
pub use error::{Error, Result};
pub use hypercube::{
    enumerate_vertices, hamming, random_subset, set_distance, Vertex, VertexSet, MAX_DIM,
};
pub use measure::{
    build_joint, conditional_laws, mid_measure, mid_of_measures, DiscreteMeasure, Fiber, JointLaw,
};
pub use transport::{
    coupling_transfer, validate_coupling, w1, Coupling, TransportResult, ValidationReport,
};
pub use verify::{
    bm_entropy_check, bm_set_check, default_curvature, density_strata, empirical_k_star,
    fiber_analysis, injection_check, k_star_antipodal, log_log_slope, midpoint_set,
    proof_chain_check, random_vertex_measure, BmEntropyReport, BmSetReport, FiberReport,
    InjectionReport, KStarReport, ProofChainReport,
};
pub use weight::{Exact, Weight};
