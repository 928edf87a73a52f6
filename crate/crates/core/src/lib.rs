//! Secret-key capacity and omnivocality analysis for finite multiterminal sources.
//!
//! A multiterminal source is a joint distribution over `m` components, one per
//! terminal. Everything in this crate consumes such a source only through its
//! subset entropies, via the [`EntropyOracle`] trait. Three oracle families ship
//! with the crate:
//!
//! - [`SealedSource`]: an explicit joint pmf with a precomputed `2^m` entropy table,
//! - [`PinOracle`]: the pairwise independent network model on a multigraph, where the
//!   entropy of a set of terminals is the number of edge bits it sees,
//! - [`EntropyTable`]: any hand-built entropy vector.
//!
//! On top of these the crate computes the partition form of the secret-key
//! capacity, the capacity when only a subset of terminals may speak (a small
//! linear program), and whether every terminal has to speak to reach the
//! capacity.
//!
//! All algorithms are generic over [`Scalar`], so they run equally on `f64` and on
//! exact [`Rational`] values. Floating-point comparisons go through [`Tolerances`],
//! which separates numerical ties from genuinely ambiguous gaps.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod capacity;
pub mod error;
pub mod isentropic;
pub mod omnivocality;
pub mod partition;
pub mod pin;
pub mod scalar;
pub mod silent;
pub mod simplex;
pub mod source;
pub mod terminal;

pub use capacity::{
    delta, delta_t_singleton, lemma3_gap, singleton_minimizer_check, sk_capacity, CapacityReport,
    MinimizerCheck, MinimizerMethod, MinimizerStatus, MinimizerWitness,
};
pub use error::{Error, Result};
pub use isentropic::{
    check_g_over_k_monotone, delta_complement, g, isentropy_check, Isentropy, IsentropyProfile,
    MonotonicityReport,
};
pub use omnivocality::{
    conjecture_probe, decide_three_terminal, decide_via_lp, probe_tabular, sufficient_condition,
    Classification, ConstructionCase, EvidenceRow, Method, OmnivocalityVerdict, ProbeRecord,
    SilentWitness, VerdictStatus,
};
pub use partition::{enumerate_partitions, p_b, singleton_partition, Partition, Partitions};
pub use pin::{complete_graph, pin_delta, pin_entropy, pin_sk_capacity, Edge, PinGraph, PinOracle};
pub use scalar::{Band, Rational, Scalar, Tolerances};
pub use silent::{
    build_rate_region, lemma2_lower_bound, min_sum_rate, reduce_region_co_full, silent_capacity,
    MinSumRate, RateConstraint, RateRegion, SilentCapacityReport,
};
pub use simplex::LpOptions;
pub use source::{
    conditional_entropy, mutual_information, Accumulation, EntropyOracle, EntropyTable,
    JointSource, Normalization, SealedSource,
};
pub use terminal::TerminalSet;
