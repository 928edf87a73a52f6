use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Subsets of `[m]` as bitmasks. Terminal `i` (1-indexed) occupies bit `i - 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TerminalSet(u32);

impl TerminalSet {
    /// Largest number of terminals a set can address.
    pub const MAX_TERMINALS: usize = 24;

    pub const EMPTY: TerminalSet = TerminalSet(0);

    /// Builds a set from a raw mask. Bits at or above `MAX_TERMINALS` are rejected.
    pub fn from_bits(bits: u32) -> Result<Self> {
        if bits >> Self::MAX_TERMINALS != 0 {
            return Err(Error::InvalidSubset(format!(
                "mask {bits:#x} addresses terminals beyond {}",
                Self::MAX_TERMINALS
            )));
        }
        Ok(TerminalSet(bits))
    }

    pub(crate) const fn from_bits_unchecked(bits: u32) -> Self {
        TerminalSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// `[m] = {1, ..., m}`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= Self::MAX_TERMINALS);
        if m == 0 {
            Self::EMPTY
        } else {
            TerminalSet(u32::MAX >> (32 - m))
        }
    }

    /// `{i}` for a 1-indexed terminal.
    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=Self::MAX_TERMINALS).contains(&i));
        TerminalSet(1 << (i - 1))
    }

    /// `{lo, lo + 1, ..., hi}`; empty when `lo > hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        if lo > hi {
            return Self::EMPTY;
        }
        TerminalSet(Self::full(hi).0 & !Self::full(lo - 1).0)
    }

    /// Builds a set from 1-indexed terminals, rejecting zero, out-of-range
    /// values and repeats.
    pub fn from_terminals<I: IntoIterator<Item = usize>>(terminals: I, m: usize) -> Result<Self> {
        let mut set = Self::EMPTY;
        for i in terminals {
            if i == 0 || i > m {
                return Err(Error::InvalidSubset(format!("terminal {i} is outside [1, {m}]")));
            }
            let s = Self::singleton(i);
            if set.contains_all(s) {
                return Err(Error::InvalidSubset(format!("terminal {i} listed twice")));
            }
            set = set | s;
        }
        Ok(set)
    }

    /// Parses the CLI subset syntax: 1-indexed terminals separated by commas,
    /// whitespace ignored, e.g. `"1, 3"`.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::InvalidSubset(String::from("empty subset literal")));
        }
        let mut terminals = Vec::new();
        for tok in cleaned.split(',') {
            let i: usize = tok
                .parse()
                .map_err(|_| Error::InvalidSubset(format!("`{tok}` is not a terminal index")))?;
            terminals.push(i);
        }
        Self::from_terminals(terminals, m)
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=Self::MAX_TERMINALS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    /// `other ⊆ self`
    pub const fn contains_all(self, other: TerminalSet) -> bool {
        other.0 & !self.0 == 0
    }

    pub const fn is_subset_of(self, other: TerminalSet) -> bool {
        other.contains_all(self)
    }

    pub const fn is_disjoint(self, other: TerminalSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement inside `[m]`.
    pub fn complement(self, m: usize) -> Self {
        TerminalSet(Self::full(m).0 & !self.0)
    }

    pub const fn difference(self, other: TerminalSet) -> Self {
        TerminalSet(self.0 & !other.0)
    }

    /// Smallest terminal in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Members in increasing order, 1-indexed.
    pub fn iter(self) -> Terminals {
        Terminals(self.0)
    }

    /// Every subset of `self`, including the empty set and `self`, in increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets { universe: self.0, next: Some(0) }
    }
}

impl core::ops::BitOr for TerminalSet {
    type Output = TerminalSet;
    fn bitor(self, rhs: Self) -> Self {
        TerminalSet(self.0 | rhs.0)
    }
}

impl core::ops::BitAnd for TerminalSet {
    type Output = TerminalSet;
    fn bitand(self, rhs: Self) -> Self {
        TerminalSet(self.0 & rhs.0)
    }
}

/// Writes the members comma-separated (`1,2`), the CLI subset syntax.
impl fmt::Display for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[derive(Clone, Debug)]
pub struct Terminals(u32);

impl Iterator for Terminals {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Terminals {}

/// Iterates all subsets of a mask by the `(s - u) & u` successor trick.
#[derive(Clone, Debug)]
pub struct Subsets {
    universe: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = TerminalSet;
    fn next(&mut self) -> Option<TerminalSet> {
        let cur = self.next?;
        self.next = if cur == self.universe {
            None
        } else {
            Some(cur.wrapping_sub(self.universe) & self.universe)
        };
        Some(TerminalSet(cur))
    }
}
