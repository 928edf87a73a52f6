//! Isentropic sources, where `H(X_A)` depends only on `|A|`.
//!
//! For such sources `g(k) = H(X_[k] | X_{[m]∖[k]})` is a function of `k` alone,
//! and `g(k)/k` is non-decreasing. Equivalently `k·g(k+1) - (k+1)·g(k) >= 0`,
//! which makes the singleton partition a minimizer of `Δ`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::capacity::delta;
use crate::error::{Error, Result};
use crate::partition::{Partition, MAX_ENUMERATION_TERMINALS};
use crate::scalar::{Scalar, Tolerances};
use crate::source::{conditional_entropy, EntropyOracle};
use crate::terminal::TerminalSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Isentropy {
    Yes,
    No,
    Ambiguous,
}

impl Isentropy {
    pub fn name(self) -> &'static str {
        match self {
            Isentropy::Yes => "yes",
            Isentropy::No => "no",
            Isentropy::Ambiguous => "ambiguous",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsentropyProfile<V> {
    pub is_isentropic: Isentropy,
    /// `levels[k - 1]` is the entropy of the lowest-mask subset of size `k`.
    pub levels: Vec<V>,
    /// Largest per-size spread `max H - min H`.
    pub spread: f64,
    /// The two sets realising the largest spread, when the source is not isentropic.
    pub worst_violation: Option<(TerminalSet, TerminalSet, f64)>,
}

/// Per size: (level, lowest set, lowest value, highest set, highest value).
type SizeGroup<V> = (V, TerminalSet, f64, TerminalSet, f64);

/// Groups all nonempty subset entropies by size. Isentropic when every spread is
/// at most `tol`, not isentropic when some spread exceeds `10 · tol`, ambiguous
/// in between.
pub fn isentropy_check<O: EntropyOracle + ?Sized>(
    oracle: &O,
    tol: f64,
) -> Result<IsentropyProfile<O::Value>> {
    let m = oracle.terminals();
    if !(1..=MAX_ENUMERATION_TERMINALS).contains(&m) {
        return Err(Error::SizeLimit(format!(
            "the isentropy check needs 1 <= m <= {MAX_ENUMERATION_TERMINALS}, got {m}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::PreconditionViolation(format!("tolerance must be positive, got {tol}")));
    }
    let mut groups: Vec<Option<SizeGroup<O::Value>>> = Vec::new();
    groups.resize_with(m, || None);
    for set in TerminalSet::full(m).subsets().skip(1) {
        let h = oracle.entropy(set);
        let x = h.to_f64();
        match &mut groups[set.len() - 1] {
            slot @ None => *slot = Some((h, set, x, set, x)),
            Some((_, lo_set, lo, hi_set, hi)) => {
                if x < *lo {
                    *lo = x;
                    *lo_set = set;
                }
                if x > *hi {
                    *hi = x;
                    *hi_set = set;
                }
            }
        }
    }
    let mut levels = Vec::with_capacity(m);
    let mut spread = 0.0;
    let mut worst = None;
    for (level, lo_set, lo, hi_set, hi) in groups.into_iter().flatten() {
        levels.push(level);
        if hi - lo > spread {
            spread = hi - lo;
            worst = Some((lo_set, hi_set, hi - lo));
        }
    }
    let is_isentropic = if spread <= tol {
        Isentropy::Yes
    } else if spread > 10.0 * tol {
        Isentropy::No
    } else {
        Isentropy::Ambiguous
    };
    let worst_violation = if is_isentropic == Isentropy::Yes { None } else { worst };
    Ok(IsentropyProfile { is_isentropic, levels, spread, worst_violation })
}

/// `g(k) = H(X_{1..k} | X_{k+1..m})`.
pub fn g<O: EntropyOracle + ?Sized>(oracle: &O, k: usize) -> Result<O::Value> {
    let m = oracle.terminals();
    if k == 0 || k > m {
        return Err(Error::InvalidSubset(format!("g(k) needs 1 <= k <= {m}, got {k}")));
    }
    conditional_entropy(oracle, TerminalSet::range(1, k), TerminalSet::range(k + 1, m))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport<V> {
    pub holds: bool,
    /// Smallest `k` with `k·g(k+1) - (k+1)·g(k) < -tol`.
    pub first_violation: Option<usize>,
    /// `g(1), ..., g(m)`.
    pub g: Vec<V>,
}

/// Checks that `g(k)/k` is non-decreasing. Only meaningful for isentropic
/// sources; anything else is rejected.
pub fn check_g_over_k_monotone<O: EntropyOracle + ?Sized>(
    oracle: &O,
    tol: &Tolerances,
) -> Result<MonotonicityReport<O::Value>> {
    let profile = isentropy_check(oracle, tol.tie)?;
    if profile.is_isentropic != Isentropy::Yes {
        return Err(Error::PreconditionViolation(String::from(
            "g(k)/k monotonicity is only established for isentropic sources",
        )));
    }
    let m = oracle.terminals();
    let values = (1..=m).map(|k| g(oracle, k)).collect::<Result<Vec<_>>>()?;
    let first_violation = (1..m).find(|&k| {
        let diff = O::Value::from_usize(k) * values[k].clone()
            - O::Value::from_usize(k + 1) * values[k - 1].clone();
        (-diff).exceeds(tol.tie)
    });
    Ok(MonotonicityReport { holds: first_violation.is_none(), first_violation, g: values })
}

/// `δ(P) = H(X_[m]) - Δ(P)`.
pub fn delta_complement<O: EntropyOracle + ?Sized>(
    oracle: &O,
    partition: &Partition,
) -> Result<O::Value> {
    let d = delta(oracle, partition)?;
    Ok(oracle.entropy(oracle.ground_set()) - d)
}
