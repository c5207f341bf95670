//! Point lists: the flat coordinate storage shared by all modules.

use crate::config;
use crate::error::{Error, Result};
use crate::num::Int;
use std::collections::HashSet;

/// A list of lattice points of a common dimension, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointList {
    pub dim: usize,
    coords: Vec<Int>,
}

impl PointList {
    pub fn new(dim: usize) -> PointList {
        PointList {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, n: usize) -> PointList {
        PointList {
            dim,
            coords: Vec::with_capacity(dim * n),
        }
    }

    pub fn from_rows(dim: usize, rows: &[Vec<Int>]) -> PointList {
        let mut pl = PointList::with_capacity(dim, rows.len());
        for r in rows {
            pl.push(r);
        }
        pl
    }

    #[inline]
    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[Int] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn push(&mut self, p: &[Int]) {
        debug_assert_eq!(p.len(), self.dim, "point of wrong dimension");
        self.coords.extend_from_slice(p);
    }

    pub fn push_checked(&mut self, p: &[Int]) -> Result<()> {
        if self.len() >= config::POINT_MAX {
            return Err(Error::Capacity {
                param: config::POINT_MAX_NAME,
                needed: self.len() + 1,
            });
        }
        self.push(p);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Int]> {
        self.coords.chunks_exact(self.dim.max(1))
    }

    /// Index of the first occurrence of `p`, if present.
    pub fn position(&self, p: &[Int]) -> Option<usize> {
        self.iter().position(|q| q == p)
    }

    /// Remove duplicate points, keeping first occurrences in order.
    pub fn dedup(&self) -> PointList {
        let mut seen = HashSet::new();
        let mut out = PointList::with_capacity(self.dim, self.len());
        for p in self.iter() {
            if seen.insert(p.to_vec()) {
                out.push(p);
            }
        }
        out
    }

    /// The subset at the given indices, in the given order.
    pub fn select(&self, idx: &[usize]) -> PointList {
        let mut out = PointList::with_capacity(self.dim, idx.len());
        for &i in idx {
            out.push(self.point(i));
        }
        out
    }

    pub fn contains_origin(&self) -> bool {
        self.iter().any(|p| p.iter().all(|&c| c == 0))
    }

    /// Collect into a hash set of coordinate vectors for membership tests.
    pub fn to_set(&self) -> HashSet<Vec<Int>> {
        self.iter().map(|p| p.to_vec()).collect()
    }

    /// View of the points as a matrix with one point per column.
    pub fn as_col_matrix(&self) -> crate::mat::Mat {
        let mut m = crate::mat::Mat::zero(self.dim, self.len());
        for (j, p) in self.iter().enumerate() {
            for (i, &c) in p.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_accessors() {
        let mut pl = PointList::new(2);
        pl.push(&[1, 2]);
        pl.push(&[3, 4]);
        assert_eq!(pl.len(), 2);
        assert_eq!(pl.point(1), &[3, 4]);
        assert_eq!(pl.position(&[3, 4]), Some(1));
        assert_eq!(pl.position(&[0, 0]), None);
        assert!(!pl.contains_origin());
        pl.push(&[0, 0]);
        assert!(pl.contains_origin());
    }

    #[test]
    fn dedup_keeps_order() {
        let pl = PointList::from_rows(2, &[vec![1, 1], vec![2, 2], vec![1, 1], vec![3, 3]]);
        let d = pl.dedup();
        assert_eq!(d.len(), 3);
        assert_eq!(d.point(0), &[1, 1]);
        assert_eq!(d.point(1), &[2, 2]);
        assert_eq!(d.point(2), &[3, 3]);
    }

    #[test]
    fn col_matrix_layout() {
        let pl = PointList::from_rows(2, &[vec![1, 2], vec![3, 4], vec![5, 6]]);
        let m = pl.as_col_matrix();
        assert_eq!(m.rows, 2);
        assert_eq!(m.cols, 3);
        assert_eq!(m.at(0, 2), 5);
        assert_eq!(m.at(1, 0), 2);
    }
}
