//! Secret-key capacity when only a subset `T` of the terminals may speak.
//!
//! The capacity is `C([m] ‖ T) = H(X_T) - R_T^min`, where `R_T^min` is the least
//! total rate `Σ_{i∈T} R_i` over the region
//!
//! ```text
//! Σ_{i∈A∩T} R_i >= H(X_{A∩T} | X_{A^c})   for every A ⊊ [m] with A ∩ T ≠ ∅.
//! ```
//!
//! Many `A` share the same `B = A ∩ T`; only the largest bound per `B` matters,
//! so regions are stored with one row per `B`. The minimization is solved through
//! its dual, `max Σ_B b_B y_B` subject to `Σ_{B∋i} y_B <= 1` and `y >= 0`, whose
//! right-hand side is nonnegative. The optimal rates are the row multipliers of
//! that dual, hence a vertex of the rate region.
//!
//! Rates are also constrained to be nonnegative, which keeps the problem bounded
//! when every bound is zero.
//!
//! The same machinery with `T = [m]` gives the communication-for-omniscience
//! region, and `H(X_[m]) - R_[m]^min` is then the unrestricted capacity.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simplex::{maximize, LpOptions};
use crate::source::{check_within, EntropyOracle};
use crate::terminal::TerminalSet;

/// Largest `m` for which regions are built by enumerating every `A`.
pub const MAX_REGION_TERMINALS: usize = 16;

/// Slack below which a rate constraint counts as tight.
pub const BINDING_TOLERANCE: f64 = 1e-9;

/// `Σ_{i∈subset} R_i >= lower_bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateConstraint<V> {
    pub subset: TerminalSet,
    pub lower_bound: V,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateRegion<V> {
    m: usize,
    speakers: TerminalSet,
    /// One row per distinct subset, in increasing mask order.
    constraints: Vec<RateConstraint<V>>,
}

impl<V: Scalar> RateRegion<V> {
    /// Builds a region from explicit rows. Each subset must be a nonempty
    /// subset of `speakers` and appear at most once.
    pub fn new(m: usize, speakers: TerminalSet, mut constraints: Vec<RateConstraint<V>>) -> Result<Self> {
        if speakers.is_empty() || !speakers.is_subset_of(TerminalSet::full(m)) {
            return Err(Error::InvalidSubset(format!("speaker set {speakers:?} for m = {m}")));
        }
        constraints.sort_by_key(|c| c.subset);
        for c in &constraints {
            if c.subset.is_empty() || !c.subset.is_subset_of(speakers) {
                return Err(Error::InvalidSubset(format!(
                    "constraint on {:?} is not over the speakers {speakers:?}",
                    c.subset
                )));
            }
        }
        if constraints.windows(2).any(|w| w[0].subset == w[1].subset) {
            return Err(Error::InvalidSubset(String::from("duplicate constraint subset")));
        }
        Ok(RateRegion { m, speakers, constraints })
    }

    pub fn terminals(&self) -> usize {
        self.m
    }

    pub fn speakers(&self) -> TerminalSet {
        self.speakers
    }

    pub fn constraints(&self) -> &[RateConstraint<V>] {
        &self.constraints
    }

    pub fn bound(&self, subset: TerminalSet) -> Option<&V> {
        self.constraints
            .binary_search_by_key(&subset, |c| c.subset)
            .ok()
            .map(|k| &self.constraints[k].lower_bound)
    }

    /// Whether `rates` (indexed by terminal order within the speaker set) meets
    /// every row up to `eps`.
    pub fn satisfied_by(&self, rates: &[V], eps: f64) -> bool {
        rates.len() == self.speakers.len()
            && self.constraints.iter().all(|c| (-self.slack(c, rates)).at_most(eps))
            && rates.iter().all(|r| (-r.clone()).at_most(eps))
    }

    fn slack(&self, c: &RateConstraint<V>, rates: &[V]) -> V {
        let mut sum = V::zero();
        for (k, i) in self.speakers.iter().enumerate() {
            if c.subset.contains(i) {
                sum = sum + rates[k].clone();
            }
        }
        sum - c.lower_bound.clone()
    }
}

fn check_speakers<O: EntropyOracle + ?Sized>(oracle: &O, speakers: TerminalSet) -> Result<usize> {
    let m = oracle.terminals();
    if !(2..=MAX_REGION_TERMINALS).contains(&m) {
        return Err(Error::SizeLimit(format!(
            "rate regions need 2 <= m <= {MAX_REGION_TERMINALS}, got {m}"
        )));
    }
    check_within(oracle, speakers)?;
    if speakers.is_empty() {
        return Err(Error::InvalidSubset(String::from("the speaker set must be nonempty")));
    }
    Ok(m)
}

/// The rate region for speakers `T`, from every admissible `A` with the largest
/// bound kept per `B = A ∩ T`.
pub fn build_rate_region<O: EntropyOracle + ?Sized>(
    oracle: &O,
    speakers: TerminalSet,
) -> Result<RateRegion<O::Value>> {
    let m = check_speakers(oracle, speakers)?;
    let ground = TerminalSet::full(m);
    let mut best: Vec<Option<O::Value>> = vec![None; 1 << m];
    for a in ground.subsets() {
        let b = a & speakers;
        if a == ground || b.is_empty() {
            continue;
        }
        let rest = a.complement(m);
        let bound = oracle.entropy(b | rest) - oracle.entropy(rest);
        let slot = &mut best[b.bits() as usize];
        *slot = Some(match slot.take() {
            Some(prev) => O::Value::max_of(prev, bound),
            None => bound,
        });
    }
    let constraints = best
        .into_iter()
        .enumerate()
        .filter_map(|(bits, bound)| {
            bound.map(|lower_bound| RateConstraint {
                subset: TerminalSet::from_bits_unchecked(bits as u32),
                lower_bound,
            })
        })
        .collect();
    Ok(RateRegion { m, speakers, constraints })
}

/// The region for `T = [m] \ {u}` written down directly: `H(X_B | X_{T∖B})` for
/// `B ⊊ T` and `H(X_T | X_u)` for `B = T`.
pub fn reduce_region_co_full<O: EntropyOracle + ?Sized>(
    oracle: &O,
    u: usize,
) -> Result<RateRegion<O::Value>> {
    let m = oracle.terminals();
    if u == 0 || u > m {
        return Err(Error::InvalidSubset(format!("terminal {u} is outside [1, {m}]")));
    }
    let speakers = TerminalSet::singleton(u).complement(m);
    check_speakers(oracle, speakers)?;
    let constraints = speakers
        .subsets()
        .skip(1)
        .map(|b| {
            let given = if b == speakers { TerminalSet::singleton(u) } else { speakers.difference(b) };
            RateConstraint {
                subset: b,
                lower_bound: oracle.entropy(b | given) - oracle.entropy(given),
            }
        })
        .collect();
    Ok(RateRegion { m, speakers, constraints })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinSumRate<V> {
    pub r_min: V,
    /// `(terminal, R_i)` for each speaker in increasing order.
    pub rates: Vec<(usize, V)>,
    /// Rows tight at `rates`.
    pub binding: Vec<RateConstraint<V>>,
}

/// `R_T^min` with one optimal vertex and its tight rows.
pub fn min_sum_rate<V: Scalar>(region: &RateRegion<V>, options: &LpOptions) -> Result<MinSumRate<V>> {
    let speakers: Vec<usize> = region.speakers.iter().collect();
    let objective: Vec<V> = region.constraints.iter().map(|c| c.lower_bound.clone()).collect();
    let rows: Vec<Vec<V>> = speakers
        .iter()
        .map(|&i| {
            region
                .constraints
                .iter()
                .map(|c| if c.subset.contains(i) { V::one() } else { V::zero() })
                .collect()
        })
        .collect();
    let rhs = vec![V::one(); speakers.len()];
    let solution = maximize(&objective, &rows, &rhs, options)
        .map_err(|e| Error::InternalInconsistency(format!("rate LP failed: {e:?}")))?;
    let rate_values = solution.dual;
    let binding = region
        .constraints
        .iter()
        .filter(|c| region.slack(c, &rate_values).at_most(BINDING_TOLERANCE))
        .cloned()
        .collect();
    let rates = speakers.into_iter().zip(rate_values).collect();
    Ok(MinSumRate { r_min: solution.objective, rates, binding })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SilentCapacityReport<V> {
    pub speakers: TerminalSet,
    /// `H(X_T)`.
    pub h_t: V,
    pub r_min: V,
    /// `H(X_T) - R_T^min`.
    pub capacity: V,
    pub optimal_rates: Vec<(usize, V)>,
    pub binding_constraints: Vec<RateConstraint<V>>,
    /// Present when `|T| = m - 1` and `m >= 3`.
    pub lemma2_bound: Option<V>,
}

pub fn silent_capacity<O: EntropyOracle + ?Sized>(
    oracle: &O,
    speakers: TerminalSet,
    options: &LpOptions,
) -> Result<SilentCapacityReport<O::Value>> {
    let region = build_rate_region(oracle, speakers)?;
    let lp = min_sum_rate(&region, options)?;
    let h_t = oracle.entropy(speakers);
    let m = oracle.terminals();
    let lemma2_bound = if m >= 3 && speakers.len() + 1 == m {
        Some(lemma2_lower_bound(oracle, speakers)?)
    } else {
        None
    };
    Ok(SilentCapacityReport {
        speakers,
        capacity: h_t.clone() - lp.r_min.clone(),
        h_t,
        r_min: lp.r_min,
        optimal_rates: lp.rates,
        binding_constraints: lp.binding,
        lemma2_bound,
    })
}

/// `(1 / (m - 2)) Σ_{j∈T} H(X_{T∖{j}} | X_j)` for `|T| = m - 1`, a lower bound on `R_T^min`.
pub fn lemma2_lower_bound<O: EntropyOracle + ?Sized>(
    oracle: &O,
    speakers: TerminalSet,
) -> Result<O::Value> {
    let m = oracle.terminals();
    check_within(oracle, speakers)?;
    if m < 3 || speakers.len() + 1 != m {
        return Err(Error::InvalidSubset(format!(
            "the rate bound needs m >= 3 and |T| = m - 1, got m = {m}, T = {speakers:?}"
        )));
    }
    let h_t = oracle.entropy(speakers);
    let mut sum = O::Value::zero();
    for j in speakers.iter() {
        sum = sum + h_t.clone() - oracle.entropy(TerminalSet::singleton(j));
    }
    Ok(sum / O::Value::from_usize(m - 2))
}
