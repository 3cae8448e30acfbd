use std::fmt;

use crate::error::{contract, Result};

/// Ordered set of distinct column indices drawn from `[0, n)`.
///
/// Keeps insertion order (positions are stable under [`IndexSubset::replace`])
/// alongside a dense membership table for O(1) lookups.
#[derive(Clone, PartialEq, Eq)]
pub struct IndexSubset {
    indices: Vec<usize>,
    member: Vec<bool>,
}

impl IndexSubset {
    pub fn empty(n: usize) -> Self {
        Self {
            indices: Vec::new(),
            member: vec![false; n],
        }
    }

    pub fn new(indices: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut set = Self::empty(n);
        for j in indices {
            set.insert(j)?;
        }
        Ok(set)
    }

    /// All of `[0, n)` in ascending order.
    pub fn full(n: usize) -> Self {
        Self {
            indices: (0..n).collect(),
            member: vec![true; n],
        }
    }

    pub fn universe(&self) -> usize {
        self.member.len()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.member.get(j).copied().unwrap_or(false)
    }

    pub fn position(&self, j: usize) -> Option<usize> {
        if !self.contains(j) {
            return None;
        }
        self.indices.iter().position(|&i| i == j)
    }

    /// Appends `j`.
    pub fn insert(&mut self, j: usize) -> Result<()> {
        self.check_range(j)?;
        if self.member[j] {
            return Err(contract(format!("index {j} already selected")));
        }
        self.member[j] = true;
        self.indices.push(j);
        Ok(())
    }

    /// Removes `j`, preserving the order of the remaining indices.
    pub fn remove(&mut self, j: usize) -> Result<()> {
        let pos = self
            .position(j)
            .ok_or_else(|| contract(format!("index {j} is not selected")))?;
        self.indices.remove(pos);
        self.member[j] = false;
        Ok(())
    }

    /// Puts `added` at the position previously held by `removed`.
    pub fn replace(&mut self, removed: usize, added: usize) -> Result<()> {
        self.check_range(added)?;
        if self.contains(added) {
            return Err(contract(format!("index {added} already selected")));
        }
        let pos = self
            .position(removed)
            .ok_or_else(|| contract(format!("index {removed} is not selected")))?;
        self.indices[pos] = added;
        self.member[removed] = false;
        self.member[added] = true;
        Ok(())
    }

    /// Indices of `[0, n)` that are not selected, ascending.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.universe()).filter(|&j| !self.member[j]).collect()
    }

    /// Selected indices in ascending order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }

    fn check_range(&self, j: usize) -> Result<()> {
        if j >= self.universe() {
            return Err(contract(format!(
                "index {j} out of range for {} columns",
                self.universe()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexSubset{:?}/{}", self.indices, self.universe())
    }
}

/// Indices of `[0, n)` absent from `selected`, ascending.
pub fn subset_complement(selected: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut seen = vec![false; n];
    for &j in selected {
        if j >= n {
            return Err(contract(format!("index {j} out of range for {n} columns")));
        }
        seen[j] = true;
    }
    Ok((0..n).filter(|&j| !seen[j]).collect())
}
