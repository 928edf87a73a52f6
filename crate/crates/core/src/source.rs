//! Finite joint sources and the entropy-oracle abstraction.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::terminal::TerminalSet;

/// Anything that can answer `H(X_A)` for subsets `A` of `[m]`, in bits.
///
/// Implementations must return zero for the empty set. Callers only pass
/// subsets of `[m]`.
pub trait EntropyOracle {
    type Value: Scalar;

    /// The number of terminals `m`.
    fn terminals(&self) -> usize;

    fn entropy(&self, set: TerminalSet) -> Self::Value;

    fn ground_set(&self) -> TerminalSet {
        TerminalSet::full(self.terminals())
    }
}

impl<O: EntropyOracle + ?Sized> EntropyOracle for &O {
    type Value = O::Value;
    fn terminals(&self) -> usize {
        (**self).terminals()
    }
    fn entropy(&self, set: TerminalSet) -> O::Value {
        (**self).entropy(set)
    }
}

pub(crate) fn check_within<O: EntropyOracle + ?Sized>(oracle: &O, set: TerminalSet) -> Result<()> {
    if !set.is_subset_of(oracle.ground_set()) {
        return Err(Error::InvalidSubset(format!(
            "{set:?} is not a subset of [{}]",
            oracle.terminals()
        )));
    }
    Ok(())
}

/// `H(X_A | X_B) = H(X_{A∪B}) - H(X_B)`.
pub fn conditional_entropy<O: EntropyOracle + ?Sized>(
    oracle: &O,
    a: TerminalSet,
    b: TerminalSet,
) -> Result<O::Value> {
    check_within(oracle, a)?;
    check_within(oracle, b)?;
    if a.is_empty() {
        return Err(Error::InvalidSubset(String::from("conditional entropy of the empty set")));
    }
    if !a.is_disjoint(b) {
        return Err(Error::InvalidSubset(format!("{a:?} and {b:?} overlap")));
    }
    Ok(oracle.entropy(a | b) - oracle.entropy(b))
}

/// `I(X_A; X_B) = H(X_A) + H(X_B) - H(X_{A∪B})` for nonempty disjoint `A`, `B`.
pub fn mutual_information<O: EntropyOracle + ?Sized>(
    oracle: &O,
    a: TerminalSet,
    b: TerminalSet,
) -> Result<O::Value> {
    check_within(oracle, a)?;
    check_within(oracle, b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidSubset(String::from(
            "mutual information needs two nonempty sets",
        )));
    }
    if !a.is_disjoint(b) {
        return Err(Error::InvalidSubset(format!("{a:?} and {b:?} overlap")));
    }
    Ok(oracle.entropy(a) + oracle.entropy(b) - oracle.entropy(a | b))
}

/// A dense `2^m` table of subset entropies, indexed by bitmask.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyTable<V> {
    m: usize,
    values: Vec<V>,
}

impl<V: Scalar> EntropyTable<V> {
    /// Wraps a raw table. `values[0]` must be zero and `values.len()` must be `2^m`.
    pub fn new(m: usize, values: Vec<V>) -> Result<Self> {
        if m > SealedSource::MAX_TERMINALS {
            return Err(Error::SizeLimit(format!(
                "entropy tables support at most {} terminals",
                SealedSource::MAX_TERMINALS
            )));
        }
        if values.len() != 1 << m {
            return Err(Error::InvalidSource(format!(
                "entropy table for m={m} needs {} entries, got {}",
                1usize << m,
                values.len()
            )));
        }
        if values[0] != V::zero() {
            return Err(Error::InvalidSource(String::from("entropy of the empty set must be 0")));
        }
        Ok(EntropyTable { m, values })
    }

    /// Tabulates another oracle.
    pub fn from_oracle<O: EntropyOracle<Value = V> + ?Sized>(oracle: &O) -> Self {
        let m = oracle.terminals();
        let values = (0..1u32 << m)
            .map(|bits| oracle.entropy(TerminalSet::from_bits_unchecked(bits)))
            .collect();
        EntropyTable { m, values }
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }
}

impl<V: Scalar> EntropyOracle for EntropyTable<V> {
    type Value = V;
    fn terminals(&self) -> usize {
        self.m
    }
    fn entropy(&self, set: TerminalSet) -> V {
        self.values[set.bits() as usize].clone()
    }
}

/// How probability masses and `-p log p` terms are summed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Accumulation {
    /// Left-to-right summation.
    #[default]
    Naive,
    /// Neumaier-compensated summation.
    Compensated,
}

/// What to do when the atoms do not sum to one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    /// Reject unless the total is within [`JointSource::NORMALIZATION_TOLERANCE`] of 1.
    #[default]
    Strict,
    /// Divide every atom by the total.
    Renormalize,
}

/// An explicit joint pmf over `m` finite alphabets.
///
/// Atoms are stored sorted by symbol tuple; tuples not listed have probability zero.
#[derive(Clone, Debug, PartialEq)]
pub struct JointSource {
    alphabet_sizes: Vec<u32>,
    atoms: Vec<(Vec<u32>, f64)>,
}

impl JointSource {
    pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

    pub fn new(alphabet_sizes: Vec<u32>, atoms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        Self::with_normalization(alphabet_sizes, atoms, Normalization::Strict)
    }

    pub fn with_normalization(
        alphabet_sizes: Vec<u32>,
        mut atoms: Vec<(Vec<u32>, f64)>,
        normalization: Normalization,
    ) -> Result<Self> {
        let m = alphabet_sizes.len();
        if m == 0 {
            return Err(Error::InvalidSource(String::from("a source needs at least one terminal")));
        }
        if m > TerminalSet::MAX_TERMINALS {
            return Err(Error::SizeLimit(format!(
                "m = {m} exceeds the {}-terminal limit",
                TerminalSet::MAX_TERMINALS
            )));
        }
        if let Some(i) = alphabet_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidSource(format!("alphabet_sizes[{i}] must be positive")));
        }
        for (k, (x, p)) in atoms.iter().enumerate() {
            if x.len() != m {
                return Err(Error::InvalidSource(format!(
                    "atom {k} has {} coordinates, expected {m}",
                    x.len()
                )));
            }
            if let Some(i) = (0..m).find(|&i| x[i] >= alphabet_sizes[i]) {
                return Err(Error::InvalidSource(format!(
                    "atom {k}: symbol {} at position {i} is outside [0, {})",
                    x[i], alphabet_sizes[i]
                )));
            }
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidSource(format!("atom {k} has probability {p}")));
            }
        }
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = atoms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidSource(format!("duplicate atom {:?}", w[0].0)));
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        match normalization {
            Normalization::Strict => {
                if (total - 1.0).abs() > Self::NORMALIZATION_TOLERANCE {
                    return Err(Error::InvalidSource(format!("atoms sum to {total:.6}")));
                }
            }
            Normalization::Renormalize => {
                if total <= 0.0 {
                    return Err(Error::InvalidSource(format!("atoms sum to {total:.6}")));
                }
                for atom in &mut atoms {
                    atom.1 /= total;
                }
            }
        }
        Ok(JointSource { alphabet_sizes, atoms })
    }

    pub fn terminals(&self) -> usize {
        self.alphabet_sizes.len()
    }

    pub fn alphabet_sizes(&self) -> &[u32] {
        &self.alphabet_sizes
    }

    pub fn atoms(&self) -> &[(Vec<u32>, f64)] {
        &self.atoms
    }

    /// Size of the product alphabet, if it fits in a `u64`.
    pub fn cell_count(&self) -> Option<u64> {
        self.alphabet_sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(u64::from(s)))
    }

    /// The same distribution with terminal `i` relabelled as `perm[i - 1]`
    /// (1-indexed permutation of `[m]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let m = self.terminals();
        let mut seen = vec![false; m];
        if perm.len() != m || perm.iter().any(|&p| p == 0 || p > m || core::mem::replace(&mut seen[p - 1], true)) {
            return Err(Error::InvalidSubset(format!("{perm:?} is not a permutation of [{m}]")));
        }
        let mut sizes = vec![0; m];
        for i in 0..m {
            sizes[perm[i] - 1] = self.alphabet_sizes[i];
        }
        let atoms = self
            .atoms
            .iter()
            .map(|(x, p)| {
                let mut y = vec![0; m];
                for i in 0..m {
                    y[perm[i] - 1] = x[i];
                }
                (y, *p)
            })
            .collect();
        JointSource::with_normalization(sizes, atoms, Normalization::Renormalize)
    }

    fn check_nonempty(&self, set: TerminalSet) -> Result<()> {
        if set.is_empty() {
            return Err(Error::InvalidSubset(String::from("subset must be nonempty")));
        }
        if !set.is_subset_of(TerminalSet::full(self.terminals())) {
            return Err(Error::InvalidSubset(format!(
                "{set:?} is not a subset of [{}]",
                self.terminals()
            )));
        }
        Ok(())
    }

    /// The pmf of `X_A`: atoms projected onto the coordinates in `set` (in
    /// increasing terminal order), equal projections merged by summing.
    pub fn marginalize(&self, set: TerminalSet) -> Result<Vec<(Vec<u32>, f64)>> {
        self.marginalize_with(set, Accumulation::Naive)
    }

    pub fn marginalize_with(
        &self,
        set: TerminalSet,
        accumulation: Accumulation,
    ) -> Result<Vec<(Vec<u32>, f64)>> {
        self.check_nonempty(set)?;
        let coords: Vec<usize> = set.iter().map(|i| i - 1).collect();
        let mut projected: Vec<(Vec<u32>, f64)> = self
            .atoms
            .iter()
            .map(|(x, p)| (coords.iter().map(|&i| x[i]).collect(), *p))
            .collect();
        projected.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Vec<u32>, f64)> = Vec::new();
        let mut acc = Summer::new(accumulation);
        let mut current: Option<Vec<u32>> = None;
        for (key, p) in projected {
            if let Some(prev) = current.take() {
                if prev != key {
                    out.push((prev, acc.take()));
                }
            }
            current = Some(key);
            acc.add(p);
        }
        if let Some(prev) = current {
            out.push((prev, acc.take()));
        }
        Ok(out)
    }

    /// Shannon entropy of `X_A` in bits.
    pub fn entropy(&self, set: TerminalSet) -> Result<f64> {
        self.entropy_with(set, Accumulation::Naive)
    }

    pub fn entropy_with(&self, set: TerminalSet, accumulation: Accumulation) -> Result<f64> {
        let marginal = self.marginalize_with(set, accumulation)?;
        Ok(shannon_bits(marginal.iter().map(|a| a.1), accumulation))
    }

    pub fn seal(self) -> Result<SealedSource> {
        self.seal_with(Accumulation::Naive)
    }

    /// Computes every subset entropy once and freezes the result.
    pub fn seal_with(self, accumulation: Accumulation) -> Result<SealedSource> {
        let m = self.terminals();
        if m > SealedSource::MAX_TERMINALS {
            return Err(Error::SizeLimit(format!(
                "sealing supports at most {} terminals, got {m}",
                SealedSource::MAX_TERMINALS
            )));
        }
        let values = match self.strides() {
            Some(strides) => self.packed_table(&strides, accumulation),
            None => {
                let mut values = vec![0.0; 1 << m];
                for (bits, slot) in values.iter_mut().enumerate().skip(1) {
                    *slot = self.entropy_with(TerminalSet::from_bits_unchecked(bits as u32), accumulation)?;
                }
                values
            }
        };
        Ok(SealedSource { source: self, table: EntropyTable { m, values }, accumulation })
    }

    /// Mixed-radix place values of each coordinate, if the product alphabet fits in `u64`.
    fn strides(&self) -> Option<Vec<u64>> {
        self.cell_count()?;
        let mut strides = Vec::with_capacity(self.terminals());
        let mut place = 1u64;
        for &s in &self.alphabet_sizes {
            strides.push(place);
            place = place.checked_mul(u64::from(s))?;
        }
        Some(strides)
    }

    fn packed_table(&self, strides: &[u64], accumulation: Accumulation) -> Vec<f64> {
        let m = self.terminals();
        let mut values = vec![0.0; 1 << m];
        let mut keys: Vec<(u64, f64)> = Vec::with_capacity(self.atoms.len());
        for (bits, slot) in values.iter_mut().enumerate().skip(1) {
            let set = TerminalSet::from_bits_unchecked(bits as u32);
            keys.clear();
            keys.extend(self.atoms.iter().map(|(x, p)| {
                let key = set.iter().map(|i| u64::from(x[i - 1]) * strides[i - 1]).sum::<u64>();
                (key, *p)
            }));
            keys.sort_by_key(|k| k.0);
            let mut masses = Vec::new();
            let mut acc = Summer::new(accumulation);
            let mut current = None;
            for &(key, p) in &keys {
                if current.is_some_and(|c| c != key) {
                    masses.push(acc.take());
                }
                current = Some(key);
                acc.add(p);
            }
            if current.is_some() {
                masses.push(acc.take());
            }
            *slot = shannon_bits(masses.into_iter(), accumulation);
        }
        values
    }
}

/// `-Σ p log2 p`, skipping zero masses.
fn shannon_bits<I: Iterator<Item = f64>>(masses: I, accumulation: Accumulation) -> f64 {
    let mut acc = Summer::new(accumulation);
    for p in masses {
        if p > 0.0 {
            acc.add(-p * libm::log2(p));
        }
    }
    // A single atom of mass one yields -0.0.
    acc.take() + 0.0
}

struct Summer {
    mode: Accumulation,
    sum: f64,
    carry: f64,
}

impl Summer {
    fn new(mode: Accumulation) -> Self {
        Summer { mode, sum: 0.0, carry: 0.0 }
    }

    fn add(&mut self, x: f64) {
        match self.mode {
            Accumulation::Naive => self.sum += x,
            Accumulation::Compensated => {
                let t = self.sum + x;
                if libm::fabs(self.sum) >= libm::fabs(x) {
                    self.carry += (self.sum - t) + x;
                } else {
                    self.carry += (x - t) + self.sum;
                }
                self.sum = t;
            }
        }
    }

    fn take(&mut self) -> f64 {
        let out = self.sum + self.carry;
        self.sum = 0.0;
        self.carry = 0.0;
        out
    }
}

/// A joint source whose entropy table has been computed. Read-only from here on.
#[derive(Clone, Debug)]
pub struct SealedSource {
    source: JointSource,
    table: EntropyTable<f64>,
    accumulation: Accumulation,
}

impl SealedSource {
    /// Sealing tabulates `2^m` entropies, so it is capped below the set limit.
    pub const MAX_TERMINALS: usize = 20;

    pub fn source(&self) -> &JointSource {
        &self.source
    }

    pub fn table(&self) -> &EntropyTable<f64> {
        &self.table
    }

    pub fn accumulation(&self) -> Accumulation {
        self.accumulation
    }

    pub fn into_source(self) -> JointSource {
        self.source
    }
}

impl EntropyOracle for SealedSource {
    type Value = f64;
    fn terminals(&self) -> usize {
        self.table.m
    }
    fn entropy(&self, set: TerminalSet) -> f64 {
        self.table.values[set.bits() as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> TerminalSet {
        TerminalSet::from_terminals(v.iter().copied(), 5).unwrap()
    }

    fn xor() -> JointSource {
        JointSource::new(
            vec![2, 2, 2],
            vec![
                (vec![0, 0, 0], 0.25),
                (vec![0, 1, 1], 0.25),
                (vec![1, 0, 1], 0.25),
                (vec![1, 1, 0], 0.25),
            ],
        )
        .unwrap()
    }

    fn identical() -> JointSource {
        JointSource::new(vec![2, 2, 2], vec![(vec![0, 0, 0], 0.5), (vec![1, 1, 1], 0.5)]).unwrap()
    }

    #[test]
    fn marginal_of_xor_pair_is_uniform() {
        let m = xor().marginalize(set(&[1, 2])).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.iter().all(|a| a.1 == 0.25));
        assert_eq!(m[0].0, vec![0, 0]);
        assert_eq!(m[3].0, vec![1, 1]);
    }

    #[test]
    fn full_marginal_is_identity() {
        let s = xor();
        assert_eq!(s.marginalize(set(&[1, 2, 3])).unwrap(), s.atoms().to_vec());
    }

    #[test]
    fn marginal_merges_equal_projections() {
        let m = identical().marginalize(set(&[2])).unwrap();
        assert_eq!(m, vec![(vec![0], 0.5), (vec![1], 0.5)]);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(xor().entropy(set(&[1])).unwrap(), 1.0);
        assert_eq!(xor().entropy(set(&[1, 2, 3])).unwrap(), 2.0);
        assert_eq!(identical().entropy(set(&[1, 2, 3])).unwrap(), 1.0);
    }

    #[test]
    fn empty_subset_is_rejected() {
        assert!(matches!(xor().marginalize(TerminalSet::EMPTY), Err(Error::InvalidSubset(_))));
        assert!(matches!(xor().entropy(TerminalSet::EMPTY), Err(Error::InvalidSubset(_))));
        assert!(xor().entropy(set(&[4])).is_err());
    }

    #[test]
    fn conditional_and_mutual_examples() {
        let o = xor().seal().unwrap();
        assert_eq!(conditional_entropy(&o, set(&[1]), set(&[2, 3])).unwrap(), 0.0);
        assert_eq!(conditional_entropy(&o, set(&[1]), set(&[2])).unwrap(), 1.0);
        assert_eq!(conditional_entropy(&o, set(&[1]), TerminalSet::EMPTY).unwrap(), 1.0);
        assert_eq!(mutual_information(&o, set(&[1, 2]), set(&[3])).unwrap(), 1.0);
        assert!(conditional_entropy(&o, set(&[1, 2]), set(&[2])).is_err());
        assert!(mutual_information(&o, TerminalSet::EMPTY, set(&[2])).is_err());
        let id = identical().seal().unwrap();
        assert_eq!(mutual_information(&id, set(&[1]), set(&[2])).unwrap(), 1.0);
    }

    #[test]
    fn validation_errors() {
        let bad_sum = JointSource::new(vec![2], vec![(vec![0], 0.5), (vec![1], 0.4)]);
        match bad_sum {
            Err(Error::InvalidSource(msg)) => assert!(msg.contains("atoms sum to 0.900000")),
            other => panic!("unexpected {other:?}"),
        }
        let renorm = JointSource::with_normalization(
            vec![2],
            vec![(vec![0], 0.5), (vec![1], 0.4)],
            Normalization::Renormalize,
        )
        .unwrap();
        assert!((renorm.atoms()[0].1 - 5.0 / 9.0).abs() < 1e-15);
        assert!(JointSource::new(vec![2], vec![(vec![0], 0.5), (vec![0], 0.5)]).is_err());
        assert!(JointSource::new(vec![2], vec![(vec![2], 1.0)]).is_err());
        assert!(JointSource::new(vec![2, 2], vec![(vec![0], 1.0)]).is_err());
        assert!(JointSource::new(vec![2], vec![(vec![0], -0.1), (vec![1], 1.1)]).is_err());
        assert!(JointSource::new(vec![0], vec![]).is_err());
    }

    #[test]
    fn sealed_table_matches_direct_entropy() {
        let s = xor();
        let sealed = s.clone().seal().unwrap();
        for bits in 1u32..8 {
            let a = TerminalSet::from_bits(bits).unwrap();
            assert_eq!(sealed.entropy(a), s.entropy(a).unwrap());
        }
        assert_eq!(sealed.entropy(TerminalSet::EMPTY), 0.0);
    }

    #[test]
    fn compensated_agrees_with_naive() {
        let s = xor().seal_with(Accumulation::Compensated).unwrap();
        assert_eq!(s.entropy(set(&[1, 2, 3])), 2.0);
    }

    #[test]
    fn relabel_permutes_coordinates() {
        let s = JointSource::new(vec![2, 3], vec![(vec![1, 2], 1.0)]).unwrap();
        let r = s.relabel(&[2, 1]).unwrap();
        assert_eq!(r.alphabet_sizes(), &[3, 2]);
        assert_eq!(r.atoms()[0].0, vec![2, 1]);
        assert!(s.relabel(&[1, 1]).is_err());
    }
}
