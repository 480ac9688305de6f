//! Sparse GF(2) linear algebra: column matrices, rank, and solvability.

use alloc::vec;
use alloc::vec::Vec;

/// A sparse GF(2) matrix stored by columns. Column supports are sorted
/// row indices with no explicit zeros.
#[derive(Clone, Debug, Default)]
pub struct BitMatrix {
    rows: usize,
    cols: Vec<Vec<u32>>,
}

/// Symmetric difference of two sorted support vectors.
pub fn xor_support(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl BitMatrix {
    pub fn new(rows: usize) -> Self {
        BitMatrix { rows, cols: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    /// Appends a column; the support must be sorted and within range.
    pub fn push_col(&mut self, support: Vec<u32>) {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(support.last().map_or(true, |&r| (r as usize) < self.rows));
        self.cols.push(support);
    }

    pub fn col(&self, i: usize) -> &[u32] {
        &self.cols[i]
    }

    /// Column echelon form via left-to-right reduction on low entries.
    pub fn echelonize(&self) -> Echelon {
        let mut pivot_owner: Vec<Option<usize>> = vec![None; self.rows];
        let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(self.cols.len());
        for col in &self.cols {
            let mut cur = col.clone();
            while let Some(&low) = cur.last() {
                match pivot_owner[low as usize] {
                    Some(owner) => cur = xor_support(&cur, &reduced[owner]),
                    None => break,
                }
            }
            if let Some(&low) = cur.last() {
                pivot_owner[low as usize] = Some(reduced.len());
            }
            reduced.push(cur);
        }
        Echelon {
            pivot_owner,
            reduced,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelonize().rank()
    }
}

/// Result of reducing a [`BitMatrix`] to column echelon form; reusable
/// across right-hand sides.
pub struct Echelon {
    pivot_owner: Vec<Option<usize>>,
    reduced: Vec<Vec<u32>>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.reduced.iter().filter(|c| !c.is_empty()).count()
    }

    /// Whether `rhs` (sorted support) lies in the column space.
    pub fn solvable(&self, rhs: &[u32]) -> bool {
        let mut cur = rhs.to_vec();
        while let Some(&low) = cur.last() {
            match self.pivot_owner[low as usize] {
                Some(owner) => cur = xor_support(&cur, &self.reduced[owner]),
                None => return false,
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_merges() {
        assert_eq!(xor_support(&[0, 2, 5], &[2, 3]), vec![0, 3, 5]);
        assert_eq!(xor_support(&[], &[1]), vec![1]);
        assert_eq!(xor_support(&[1], &[1]), Vec::<u32>::new());
    }

    #[test]
    fn rank_and_solve() {
        // columns: e0+e1, e1+e2, e0+e2 (sum zero -> rank 2)
        let mut m = BitMatrix::new(3);
        m.push_col(vec![0, 1]);
        m.push_col(vec![1, 2]);
        m.push_col(vec![0, 2]);
        let e = m.echelonize();
        assert_eq!(e.rank(), 2);
        assert!(e.solvable(&[0, 1]));
        assert!(e.solvable(&[0, 2]));
        assert!(!e.solvable(&[0]));
        assert!(e.solvable(&[]));
    }
}
