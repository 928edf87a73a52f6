//! Set partitions of `[m]` in restricted-growth form.
//!
//! A partition is stored as its restricted-growth string (RGS): position `i`
//! holds the cell index of terminal `i + 1`, and cells are numbered in order of
//! first appearance. Two partitions are equal iff their strings are, and the
//! derived ordering is lexicographic on the string. Enumerations and argmin
//! reports use that order.
//!
//! The partition stream is single-consumer. To split brute-force work across
//! workers, shard on the cell index of terminal `m` (the last RGS entry), which
//! splits the stream into disjoint classes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::terminal::TerminalSet;

/// Largest `m` for which operations enumerate every partition.
pub const MAX_ENUMERATION_TERMINALS: usize = 12;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    rgs: Vec<u8>,
    cells: Vec<TerminalSet>,
}

impl Partition {
    pub fn from_rgs(rgs: &[u8]) -> Result<Self> {
        if rgs.is_empty() || rgs.len() > TerminalSet::MAX_TERMINALS {
            return Err(Error::InvalidPartition(format!(
                "restricted-growth string of length {}",
                rgs.len()
            )));
        }
        let mut cells: Vec<TerminalSet> = Vec::new();
        for (i, &c) in rgs.iter().enumerate() {
            let c = c as usize;
            if c > cells.len() {
                return Err(Error::InvalidPartition(format!(
                    "{rgs:?} is not a restricted-growth string (position {i})"
                )));
            }
            if c == cells.len() {
                cells.push(TerminalSet::EMPTY);
            }
            cells[c] = cells[c] | TerminalSet::singleton(i + 1);
        }
        Ok(Partition { rgs: rgs.to_vec(), cells })
    }

    /// Builds a partition of `[m]` from its cells in any order.
    pub fn from_cells(m: usize, cells: &[TerminalSet]) -> Result<Self> {
        if m == 0 || m > TerminalSet::MAX_TERMINALS {
            return Err(Error::SizeLimit(format!("cannot partition [{m}]")));
        }
        let ground = TerminalSet::full(m);
        let mut seen = TerminalSet::EMPTY;
        for &cell in cells {
            if cell.is_empty() {
                return Err(Error::InvalidPartition(String::from("empty cell")));
            }
            if !cell.is_subset_of(ground) {
                return Err(Error::InvalidPartition(format!("cell {cell:?} is outside [{m}]")));
            }
            if !cell.is_disjoint(seen) {
                let dup = (cell & seen).first().unwrap_or(0);
                return Err(Error::InvalidPartition(format!("terminal {dup} appears twice")));
            }
            seen = seen | cell;
        }
        if seen != ground {
            let missing = ground.difference(seen).first().unwrap_or(0);
            return Err(Error::InvalidPartition(format!("terminal {missing} is missing")));
        }
        let mut sorted = cells.to_vec();
        sorted.sort_by_key(|c| c.first());
        let mut rgs = vec![0u8; m];
        for (k, cell) in sorted.iter().enumerate() {
            for i in cell.iter() {
                rgs[i - 1] = k as u8;
            }
        }
        Ok(Partition { rgs, cells: sorted })
    }

    /// Parses the CLI partition syntax: cells separated by `|`, members by `,`,
    /// whitespace ignored, e.g. `"1,2|3"`. The ground set is `[max member]`.
    pub fn parse(text: &str) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cells = Vec::new();
        let mut max = 0;
        for chunk in cleaned.split('|') {
            let mut members = Vec::new();
            for tok in chunk.split(',') {
                let i: usize = tok.parse().map_err(|_| {
                    Error::InvalidPartition(format!("`{tok}` is not a terminal index"))
                })?;
                if i == 0 || i > TerminalSet::MAX_TERMINALS {
                    return Err(Error::InvalidPartition(format!("terminal {i} is out of range")));
                }
                max = max.max(i);
                members.push(i);
            }
            cells.push(members);
        }
        let mut sets = Vec::with_capacity(cells.len());
        let mut seen = TerminalSet::EMPTY;
        for members in cells {
            let mut set = TerminalSet::EMPTY;
            for i in members {
                let s = TerminalSet::singleton(i);
                if seen.contains_all(s) || set.contains_all(s) {
                    return Err(Error::InvalidPartition(format!("terminal {i} appears twice")));
                }
                set = set | s;
            }
            seen = seen | set;
            sets.push(set);
        }
        Self::from_cells(max, &sets)
    }

    /// Parses and additionally requires the ground set to be `[m]`.
    pub fn parse_for(text: &str, m: usize) -> Result<Self> {
        let p = Self::parse(text)?;
        if p.terminals() != m {
            return Err(Error::InvalidPartition(format!(
                "`{text}` partitions [{}], expected [{m}]",
                p.terminals()
            )));
        }
        Ok(p)
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    /// Cells ordered by their smallest member.
    pub fn cells(&self) -> &[TerminalSet] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn terminals(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_singleton_partition(&self) -> bool {
        self.cells.len() == self.rgs.len()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, cell) in self.cells.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            write!(f, "{cell}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

/// Lazy stream of partitions of `[m]` in lexicographic RGS order.
#[derive(Clone, Debug)]
pub struct Partitions {
    rgs: Vec<u8>,
    /// `prefix_max[i]` = max of `rgs[..=i]`.
    prefix_max: Vec<u8>,
    min_cells: usize,
    done: bool,
}

impl Partitions {
    fn advance(&mut self) -> bool {
        let m = self.rgs.len();
        // Rightmost position that can grow: rgs[i] <= prefix_max[i - 1].
        let Some(i) = (1..m).rev().find(|&i| self.rgs[i] <= self.prefix_max[i - 1]) else {
            return false;
        };
        self.rgs[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
        for j in i + 1..m {
            self.rgs[j] = 0;
            self.prefix_max[j] = self.prefix_max[i];
        }
        true
    }

    fn cell_count(&self) -> usize {
        *self.prefix_max.last().unwrap_or(&0) as usize + 1
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        while !self.done {
            let count = self.cell_count();
            let current = (count >= self.min_cells)
                .then(|| Partition::from_rgs(&self.rgs).expect("enumerator keeps RGS canonical"));
            if !self.advance() {
                self.done = true;
            }
            if current.is_some() {
                return current;
            }
        }
        None
    }
}

/// Every partition of `[m]` with at least `min_cells` cells, exactly once, in
/// lexicographic RGS order.
pub fn enumerate_partitions(m: usize, min_cells: usize) -> Result<Partitions> {
    if !(2..=MAX_ENUMERATION_TERMINALS).contains(&m) {
        return Err(Error::SizeLimit(format!(
            "partition enumeration needs 2 <= m <= {MAX_ENUMERATION_TERMINALS}, got {m}"
        )));
    }
    if !(1..=m).contains(&min_cells) {
        return Err(Error::SizeLimit(format!("min_cells = {min_cells} is outside [1, {m}]")));
    }
    Ok(Partitions { rgs: vec![0; m], prefix_max: vec![0; m], min_cells, done: false })
}

/// `{{1}, {2}, ..., {m}}`.
pub fn singleton_partition(m: usize) -> Result<Partition> {
    if !(2..=TerminalSet::MAX_TERMINALS).contains(&m) {
        return Err(Error::SizeLimit(format!("the singleton partition needs m >= 2, got {m}")));
    }
    let rgs: Vec<u8> = (0..m as u8).collect();
    Partition::from_rgs(&rgs)
}

/// `{B^c} ∪ {{b} : b ∈ B}` for `∅ ≠ B ⊊ [m]`.
pub fn p_b(m: usize, b: TerminalSet) -> Result<Partition> {
    if !(2..=TerminalSet::MAX_TERMINALS).contains(&m) {
        return Err(Error::SizeLimit(format!("cannot partition [{m}]")));
    }
    let ground = TerminalSet::full(m);
    if b.is_empty() || !b.is_subset_of(ground) || b == ground {
        return Err(Error::InvalidSubset(format!(
            "P_B needs a nonempty proper subset of [{m}], got {b:?}"
        )));
    }
    let mut cells = vec![b.complement(m)];
    cells.extend(b.iter().map(TerminalSet::singleton));
    Partition::from_cells(m, &cells)
}
