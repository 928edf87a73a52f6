//! Is it necessary for every terminal to speak in order to reach the secret-key capacity?
//!
//! Three deciders are provided:
//!
//! - [`sufficient_condition`]: if the singleton partition is the unique minimizer
//!   of `Δ`, every terminal must speak. Otherwise it says nothing.
//! - [`decide_three_terminal`]: for `m = 3` the same condition is also necessary.
//!   When it fails, the decider names the terminal(s) that can stay silent.
//! - [`decide_via_lp`]: compares `C([m] ‖ T)` with `C([m])` for every `T` of
//!   size `m - 1`. If some `C([m] ‖ T)` equals the capacity, the terminal outside
//!   `T` can stay silent. If all of them fall short, every terminal must speak.
//!
//! Only speaker sets of size `m - 1` need checking because `C([m] ‖ T)` is
//! monotone in `T`. Widening the set of allowed speakers cannot shrink the set of
//! admissible protocols. So if some silent set `D` with `|D| >= 2` reaches the
//! capacity, then so does every single terminal `u ∈ D` on its own, with speakers
//! `[m] \ {u} ⊇ [m] \ D`. Reaching the capacity is read in the supremum sense,
//! so equality counts as reaching it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::capacity::{delta, singleton_minimizer_check, sk_capacity, MinimizerMethod, MinimizerStatus};
use crate::error::{Error, Result};
use crate::partition::{p_b, singleton_partition, MAX_ENUMERATION_TERMINALS};
use crate::scalar::{Band, Scalar, Tolerances};
use crate::silent::silent_capacity;
use crate::simplex::LpOptions;
use crate::source::{Accumulation, EntropyOracle, JointSource};
use crate::terminal::TerminalSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictStatus {
    Necessary,
    NotNecessary,
    Unknown,
    NumericallyAmbiguous,
}

impl VerdictStatus {
    pub fn name(self) -> &'static str {
        match self {
            VerdictStatus::Necessary => "Necessary",
            VerdictStatus::NotNecessary => "NotNecessary",
            VerdictStatus::Unknown => "Unknown",
            VerdictStatus::NumericallyAmbiguous => "NumericallyAmbiguous",
        }
    }

    pub fn is_conclusive(self) -> bool {
        matches!(self, VerdictStatus::Necessary | VerdictStatus::NotNecessary)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    SufficientCondition,
    ThreeTerminalIff,
    LpComparison,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::SufficientCondition => "SufficientCondition",
            Method::ThreeTerminalIff => "ThreeTerminalIff",
            Method::LpComparison => "LpComparison",
        }
    }
}

/// How a silent set was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionCase {
    /// `Δ(S)` dominates at least two of the three two-cell values. A single terminal
    /// speaks and the other two stay silent.
    CaseI,
    /// `Δ(S)` dominates exactly one two-cell value `I(X_{ab}; X_k)`. Terminal `k` stays silent.
    CaseII,
    /// `C([m] ‖ [m] \ D) = C([m])` by the rate LP.
    LpEquality,
}

impl ConstructionCase {
    pub fn name(self) -> &'static str {
        match self {
            ConstructionCase::CaseI => "Case I",
            ConstructionCase::CaseII => "Case II",
            ConstructionCase::LpEquality => "LP equality",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SilentWitness {
    /// The reported silent set.
    pub silent: TerminalSet,
    pub case: ConstructionCase,
    /// Every admissible silent set found by the decider, `silent` included.
    pub alternatives: Vec<TerminalSet>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceRow<V> {
    pub speakers: TerminalSet,
    /// `C([m] ‖ T)`.
    pub silent_capacity: V,
    /// `C([m])`.
    pub capacity: V,
}

impl<V: Scalar> EvidenceRow<V> {
    pub fn gap(&self) -> V {
        self.capacity.clone() - self.silent_capacity.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmnivocalityVerdict<V> {
    pub status: VerdictStatus,
    pub method: Method,
    pub silent_witness: Option<SilentWitness>,
    pub evidence: Vec<EvidenceRow<V>>,
    /// Outcome of the singleton-minimizer test when the method consulted it.
    pub minimizer: Option<MinimizerStatus>,
}

const TWO_TERMINALS: &str =
    "with m = 2 omnivocality is never necessary: one terminal speaking already reaches the capacity";

fn require_at_least_three(m: usize) -> Result<()> {
    if m < 3 {
        return Err(Error::SizeLimit(format!("m = {m}: {TWO_TERMINALS}")));
    }
    Ok(())
}

/// Necessary when the singleton partition is the unique minimizer, `Unknown` otherwise.
pub fn sufficient_condition<O: EntropyOracle + ?Sized>(
    oracle: &O,
    tol: &Tolerances,
) -> Result<OmnivocalityVerdict<O::Value>> {
    require_at_least_three(oracle.terminals())?;
    let check = singleton_minimizer_check(oracle, MinimizerMethod::Prop1, tol)?;
    let status = match check.status {
        MinimizerStatus::UniqueMinimizer => VerdictStatus::Necessary,
        MinimizerStatus::NumericallyAmbiguous => VerdictStatus::NumericallyAmbiguous,
        MinimizerStatus::NonUniqueMinimizer | MinimizerStatus::NotMinimizer => VerdictStatus::Unknown,
    };
    Ok(OmnivocalityVerdict {
        status,
        method: Method::SufficientCondition,
        silent_witness: None,
        evidence: Vec::new(),
        minimizer: Some(check.status),
    })
}

/// Exact decision for three terminals.
///
/// With `W = {k : Δ(S) >= I(X_{[3]∖{k}}; X_k)}` (up to the tie tolerance), either
/// the singleton partition is the unique minimizer (`W = ∅`, necessary), or
/// `|W| >= 2` and any pair inside `W` can stay silent, or `W = {k}` and `k` can
/// stay silent.
pub fn decide_three_terminal<O: EntropyOracle + ?Sized>(
    oracle: &O,
    tol: &Tolerances,
) -> Result<OmnivocalityVerdict<O::Value>> {
    let m = oracle.terminals();
    if m != 3 {
        return Err(Error::SizeLimit(format!("the three-terminal decider needs m = 3, got {m}")));
    }
    let check = singleton_minimizer_check(oracle, MinimizerMethod::Brute, tol)?;
    let verdict = |status, silent_witness| OmnivocalityVerdict {
        status,
        method: Method::ThreeTerminalIff,
        silent_witness,
        evidence: Vec::new(),
        minimizer: Some(check.status),
    };
    match check.status {
        MinimizerStatus::UniqueMinimizer => return Ok(verdict(VerdictStatus::Necessary, None)),
        MinimizerStatus::NumericallyAmbiguous => {
            return Ok(verdict(VerdictStatus::NumericallyAmbiguous, None))
        }
        MinimizerStatus::NonUniqueMinimizer | MinimizerStatus::NotMinimizer => {}
    }
    let ds = delta(oracle, &singleton_partition(3)?)?;
    let mut dominated = TerminalSet::EMPTY;
    for k in 1..=3 {
        let two_cell = delta(oracle, &p_b(3, TerminalSet::singleton(k))?)?;
        match (ds.clone() - two_cell).band(tol) {
            Band::Positive | Band::Tie => dominated = dominated | TerminalSet::singleton(k),
            Band::Negative => {}
            Band::Ambiguous => return Ok(verdict(VerdictStatus::NumericallyAmbiguous, None)),
        }
    }
    let witness = match dominated.len() {
        0 => {
            return Err(Error::InternalInconsistency(String::from(
                "singleton partition is not the unique minimizer, yet Δ(S) is below every two-cell value",
            )))
        }
        1 => SilentWitness { silent: dominated, case: ConstructionCase::CaseII, alternatives: alloc::vec![dominated] },
        _ => {
            // Ordered by the one terminal that speaks.
            let alternatives: Vec<TerminalSet> = (1..=3)
                .map(|speaker| TerminalSet::singleton(speaker).complement(3))
                .filter(|pair| pair.is_subset_of(dominated))
                .collect();
            SilentWitness { silent: alternatives[0], case: ConstructionCase::CaseI, alternatives }
        }
    };
    Ok(verdict(VerdictStatus::NotNecessary, Some(witness)))
}

/// Decision by comparing the capacity with every `(m - 1)`-speaker capacity.
pub fn decide_via_lp<O: EntropyOracle + ?Sized>(
    oracle: &O,
    tol: &Tolerances,
    options: &LpOptions,
) -> Result<OmnivocalityVerdict<O::Value>> {
    let m = oracle.terminals();
    require_at_least_three(m)?;
    if m > MAX_ENUMERATION_TERMINALS {
        return Err(Error::SizeLimit(format!(
            "the LP decider needs m <= {MAX_ENUMERATION_TERMINALS}, got {m}"
        )));
    }
    let capacity = sk_capacity(oracle, tol)?.value;
    let mut evidence = Vec::with_capacity(m);
    let mut equal = Vec::new();
    let mut ambiguous = false;
    for u in 1..=m {
        let silent = TerminalSet::singleton(u);
        let speakers = silent.complement(m);
        let report = silent_capacity(oracle, speakers, options)?;
        let row = EvidenceRow { speakers, silent_capacity: report.capacity, capacity: capacity.clone() };
        match row.gap().band(tol) {
            Band::Tie => equal.push(silent),
            Band::Ambiguous => ambiguous = true,
            Band::Positive => {}
            Band::Negative => {
                return Err(Error::InternalInconsistency(format!(
                    "C([m] ‖ {speakers}) = {:?} exceeds C([m]) = {:?}",
                    row.silent_capacity, row.capacity
                )))
            }
        }
        evidence.push(row);
    }
    let (status, silent_witness) = if let Some(&first) = equal.first() {
        let witness = SilentWitness { silent: first, case: ConstructionCase::LpEquality, alternatives: equal };
        (VerdictStatus::NotNecessary, Some(witness))
    } else if ambiguous {
        (VerdictStatus::NumericallyAmbiguous, None)
    } else {
        (VerdictStatus::Necessary, None)
    };
    Ok(OmnivocalityVerdict { status, method: Method::LpComparison, silent_witness, evidence, minimizer: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Unique minimizer and necessary: the proven direction.
    ConsistentProven,
    /// Not a unique minimizer and not necessary: the converse direction holds here.
    ConsistentConverse,
    /// Not a unique minimizer, yet every terminal must speak.
    CandidateCounterexample,
    /// Some ingredient was numerically ambiguous.
    Inconclusive,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::ConsistentProven => "ConsistentProven",
            Classification::ConsistentConverse => "ConsistentConverse",
            Classification::CandidateCounterexample => "CandidateCounterexample",
            Classification::Inconclusive => "Inconclusive",
        }
    }

    pub const ALL: [Classification; 4] = [
        Classification::ConsistentProven,
        Classification::ConsistentConverse,
        Classification::CandidateCounterexample,
        Classification::Inconclusive,
    ];
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRecord<V> {
    pub condition: MinimizerStatus,
    pub lp: VerdictStatus,
    pub classification: Classification,
    pub capacity: V,
    /// `C([m]) - C([m] ‖ [m] \ {u})` for `u = 1..m`.
    pub gaps: Vec<V>,
    /// Whether the record comes from a second, higher-precision pass.
    pub reverified: bool,
}

/// Runs both the sufficient condition and the LP decider and classifies the pair
/// against the proposed equivalence. A unique minimizer whose LP verdict is
/// not `Necessary` contradicts the proven direction and is an error.
pub fn conjecture_probe<O: EntropyOracle + ?Sized>(
    oracle: &O,
    tol: &Tolerances,
    options: &LpOptions,
) -> Result<ProbeRecord<O::Value>> {
    let m = oracle.terminals();
    if m < 4 {
        return Err(Error::SizeLimit(format!(
            "m = {m}: the equivalence is already settled for three terminals"
        )));
    }
    let condition = singleton_minimizer_check(oracle, MinimizerMethod::Prop1, tol)?.status;
    let lp = decide_via_lp(oracle, tol, options)?;
    let unique = condition == MinimizerStatus::UniqueMinimizer;
    let classification = if condition == MinimizerStatus::NumericallyAmbiguous
        || lp.status == VerdictStatus::NumericallyAmbiguous
    {
        Classification::Inconclusive
    } else {
        match (unique, lp.status) {
            (true, VerdictStatus::Necessary) => Classification::ConsistentProven,
            (true, _) => {
                return Err(Error::InternalInconsistency(String::from(
                    "singleton partition is the unique minimizer, but a terminal can stay silent",
                )))
            }
            (false, VerdictStatus::NotNecessary) => Classification::ConsistentConverse,
            (false, _) => Classification::CandidateCounterexample,
        }
    };
    let capacity = lp.evidence.first().map(|r| r.capacity.clone()).unwrap_or_else(O::Value::zero);
    Ok(ProbeRecord {
        condition,
        lp: lp.status,
        classification,
        capacity,
        gaps: lp.evidence.iter().map(EvidenceRow::gap).collect(),
        reverified: false,
    })
}

/// [`conjecture_probe`] on a tabular source. A candidate counterexample is
/// recomputed with compensated entropy sums and tightened pivoting, and the
/// second pass decides the final record.
pub fn probe_tabular(source: &JointSource, tol: &Tolerances, options: &LpOptions) -> Result<ProbeRecord<f64>> {
    let first = conjecture_probe(&source.clone().seal()?, tol, options)?;
    if first.classification != Classification::CandidateCounterexample {
        return Ok(first);
    }
    let precise = source.clone().seal_with(Accumulation::Compensated)?;
    let mut second = conjecture_probe(&precise, tol, &LpOptions::tightened())?;
    second.reverified = true;
    Ok(second)
}
