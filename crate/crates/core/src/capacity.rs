//! Partition form of the secret-key capacity and the singleton-minimizer tests.
//!
//! For a partition `P` of `[m]` with at least two cells,
//!
//! ```text
//! Δ(P) = (Σ_{A∈P} H(X_A) - H(X_[m])) / (|P| - 1)
//! ```
//!
//! and the secret-key capacity is the minimum of `Δ` over all such partitions.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, p_b, singleton_partition, Partition, MAX_ENUMERATION_TERMINALS};
use crate::scalar::{Band, Scalar, Tolerances};
use crate::source::{check_within, EntropyOracle};
use crate::terminal::TerminalSet;

pub fn delta<O: EntropyOracle + ?Sized>(oracle: &O, partition: &Partition) -> Result<O::Value> {
    if partition.terminals() != oracle.terminals() {
        return Err(Error::InvalidPartition(format!(
            "{partition} partitions [{}], the source has {} terminals",
            partition.terminals(),
            oracle.terminals()
        )));
    }
    if partition.len() < 2 {
        return Err(Error::InvalidPartition(format!("Δ needs at least two cells, got {partition}")));
    }
    let mut sum = O::Value::zero();
    for &cell in partition.cells() {
        sum = sum + oracle.entropy(cell);
    }
    let surplus = sum - oracle.entropy(oracle.ground_set());
    Ok(surplus / O::Value::from_usize(partition.len() - 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityReport<V> {
    /// `min_P Δ(P)`.
    pub value: V,
    /// Every partition whose `Δ` is within the tie tolerance of the minimum, in RGS order.
    pub argmin: Vec<Partition>,
    pub partitions_examined: usize,
}

fn check_enumerable(m: usize) -> Result<()> {
    if !(2..=MAX_ENUMERATION_TERMINALS).contains(&m) {
        return Err(Error::SizeLimit(format!(
            "partition minimization needs 2 <= m <= {MAX_ENUMERATION_TERMINALS}, got {m}"
        )));
    }
    Ok(())
}

/// Secret-key capacity by exhaustive partition minimization.
pub fn sk_capacity<O: EntropyOracle + ?Sized>(
    oracle: &O,
    tol: &Tolerances,
) -> Result<CapacityReport<O::Value>> {
    let m = oracle.terminals();
    check_enumerable(m)?;
    let mut best: Option<O::Value> = None;
    let mut candidates: Vec<(Partition, O::Value)> = Vec::new();
    let mut examined = 0;
    for p in enumerate_partitions(m, 2)? {
        let d = delta(oracle, &p)?;
        examined += 1;
        let improves = best.as_ref().is_none_or(|b| d < *b);
        if improves {
            let b = d.clone();
            candidates.retain(|(_, v)| (v.clone() - b.clone()).at_most(tol.tie));
            best = Some(b);
        }
        let b = best.clone().expect("set above");
        if (d.clone() - b).at_most(tol.tie) {
            candidates.push((p, d));
        }
    }
    Ok(CapacityReport {
        value: best.expect("m >= 2 has a two-cell partition"),
        argmin: candidates.into_iter().map(|(p, _)| p).collect(),
        partitions_examined: examined,
    })
}

/// `Δ_T(S) = (Σ_{i∈T} H(X_i) - H(X_T)) / (m - 2)` for `|T| = m - 1`.
pub fn delta_t_singleton<O: EntropyOracle + ?Sized>(
    oracle: &O,
    speakers: TerminalSet,
) -> Result<O::Value> {
    let m = oracle.terminals();
    check_within(oracle, speakers)?;
    if m < 3 || speakers.len() + 1 != m {
        return Err(Error::InvalidSubset(format!(
            "Δ_T(S) needs m >= 3 and |T| = m - 1, got m = {m}, T = {speakers:?}"
        )));
    }
    let mut sum = O::Value::zero();
    for i in speakers.iter() {
        sum = sum + oracle.entropy(TerminalSet::singleton(i));
    }
    Ok((sum - oracle.entropy(speakers)) / O::Value::from_usize(m - 2))
}

/// Both sides of `Δ_T(S) - Δ(S) = (Δ(S) - Δ({{u}, T})) / (m - 2)` with `T = [m] \ {u}`.
pub fn lemma3_gap<O: EntropyOracle + ?Sized>(
    oracle: &O,
    u: usize,
) -> Result<(O::Value, O::Value)> {
    let m = oracle.terminals();
    if m < 3 {
        return Err(Error::SizeLimit(format!("the gap identity needs m >= 3, got {m}")));
    }
    if u == 0 || u > m {
        return Err(Error::InvalidSubset(format!("terminal {u} is outside [1, {m}]")));
    }
    let rest = TerminalSet::singleton(u).complement(m);
    let s = delta(oracle, &singleton_partition(m)?)?;
    let two_cell = delta(oracle, &p_b(m, TerminalSet::singleton(u))?)?;
    let lhs = delta_t_singleton(oracle, rest)? - s.clone();
    let rhs = (s - two_cell) / O::Value::from_usize(m - 2);
    Ok((lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MinimizerMethod {
    /// Compare against every partition with at least two cells.
    Brute,
    /// Compare only against `P_B` for `1 <= |B| <= m - 2`.
    Prop1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MinimizerStatus {
    UniqueMinimizer,
    NonUniqueMinimizer,
    NotMinimizer,
    NumericallyAmbiguous,
}

impl MinimizerStatus {
    pub fn name(self) -> &'static str {
        match self {
            MinimizerStatus::UniqueMinimizer => "UniqueMinimizer",
            MinimizerStatus::NonUniqueMinimizer => "NonUniqueMinimizer",
            MinimizerStatus::NotMinimizer => "NotMinimizer",
            MinimizerStatus::NumericallyAmbiguous => "NumericallyAmbiguous",
        }
    }
}

/// The comparison that decided a non-unique, failing or ambiguous verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimizerWitness<V> {
    /// `B` when the compared partition is `P_B`.
    pub subset: Option<TerminalSet>,
    pub partition: Partition,
    pub delta: V,
    pub delta_singleton: V,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizerCheck<V> {
    pub status: MinimizerStatus,
    pub method: MinimizerMethod,
    pub witness: Option<MinimizerWitness<V>>,
    pub delta_singleton: V,
    pub comparisons: usize,
}

/// Decides whether the singleton partition is the (unique) minimizer of `Δ`.
///
/// The gap `Δ(P) - Δ(S)` of each comparison is banded with `tol`. Any clearly
/// negative gap means `S` is not a minimizer. Otherwise an ambiguous gap makes
/// the whole verdict ambiguous, a tie makes it non-unique, and all-positive gaps
/// make `S` the unique minimizer. Witnesses are the first deciding comparison in
/// enumeration order.
pub fn singleton_minimizer_check<O: EntropyOracle + ?Sized>(
    oracle: &O,
    method: MinimizerMethod,
    tol: &Tolerances,
) -> Result<MinimizerCheck<O::Value>> {
    let m = oracle.terminals();
    if m < 3 {
        return Err(Error::SizeLimit(format!("the singleton test needs m >= 3, got {m}")));
    }
    if method == MinimizerMethod::Brute {
        check_enumerable(m)?;
    }
    let singleton = singleton_partition(m)?;
    let ds = delta(oracle, &singleton)?;

    let mut comparisons = 0;
    let mut negative = None;
    let mut ambiguous = None;
    let mut tie = None;
    let mut consider = |subset: Option<TerminalSet>, partition: Partition| -> Result<()> {
        let d = delta(oracle, &partition)?;
        comparisons += 1;
        let slot = match (d.clone() - ds.clone()).band(tol) {
            Band::Negative => &mut negative,
            Band::Ambiguous => &mut ambiguous,
            Band::Tie => &mut tie,
            Band::Positive => return Ok(()),
        };
        if slot.is_none() {
            *slot = Some(MinimizerWitness { subset, partition, delta: d, delta_singleton: ds.clone() });
        }
        Ok(())
    };

    match method {
        MinimizerMethod::Brute => {
            for p in enumerate_partitions(m, 2)? {
                if p != singleton {
                    consider(None, p)?;
                }
            }
        }
        MinimizerMethod::Prop1 => {
            for bits in 1u32..(1 << m) {
                let b = TerminalSet::from_bits(bits)?;
                if b.len() <= m - 2 {
                    consider(Some(b), p_b(m, b)?)?;
                }
            }
        }
    }

    let (status, witness) = if negative.is_some() {
        (MinimizerStatus::NotMinimizer, negative)
    } else if ambiguous.is_some() {
        (MinimizerStatus::NumericallyAmbiguous, ambiguous)
    } else if tie.is_some() {
        (MinimizerStatus::NonUniqueMinimizer, tie)
    } else {
        (MinimizerStatus::UniqueMinimizer, None)
    };
    Ok(MinimizerCheck { status, method, witness, delta_singleton: ds, comparisons })
}
