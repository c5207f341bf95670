//! Normal form of a lattice polytope under `GL(n, Z)` and vertex relabeling.
//!
//! The pairing matrix between facet normals and vertices is a lattice
//! invariant: any unimodular coordinate change permutes its rows and columns.
//! Maximizing it lexicographically over both permutation actions therefore
//! yields a canonical vertex order up to the matrix's own symmetries.  The
//! normal form is the lexicographically smallest row style Hermite form of
//! the vertex matrix over the column permutations attaining that maximum.
//! Two polytopes are `GL(n, Z)` equivalent iff their normal forms coincide.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits::Bits;
use crate::error::Result;
use crate::hull::Hull;
use crate::mat::Mat;
use crate::num::{self, Int};
use crate::point::PointList;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// Canonical `n x nv` vertex matrix.
    pub mat: Mat,
    /// Number of vertex orders attaining the maximal pairing matrix.  These
    /// form a coset of the pairing matrix symmetries, so this counts them.
    pub vpm_perms: usize,
    /// Number of those orders induced by lattice automorphisms of the
    /// polytope itself.
    pub gl_perms: usize,
}

impl NormalForm {
    /// Flat entry list, usable as a dictionary key.
    pub fn key(&self) -> &[Int] {
        &self.mat.a
    }
}

/// Pairing matrix of lattice distances a_i.v_k + c_i between facets (rows)
/// and vertices (columns, hull order).
pub fn pairing_matrix(points: &PointList, hull: &Hull) -> Result<Mat> {
    let nf = hull.facets.len();
    let nv = hull.vertices.len();
    let mut w = Mat::zero(nf, nv);
    for (i, f) in hull.facets.iter().enumerate() {
        for (k, &vi) in hull.vertices.iter().enumerate() {
            let d = num::dot(&f.normal, points.point(vi), "pairing")?;
            let d = num::wadd(d, f.c as crate::num::Wide, "pairing")?;
            w.set(i, k, num::narrow(d, "pairing")?);
        }
    }
    Ok(w)
}

/// Ordered partition of the column set; columns inside a block are still
/// interchangeable.  Blocks keep their columns sorted for state dedup.
type Partition = Vec<Vec<usize>>;

/// Entries of one row under a partial column order: within each block the
/// entries appear sorted descending, since any attaining order must place
/// them that way.
fn row_value(w: &Mat, row: usize, part: &Partition) -> Vec<Int> {
    let mut out = Vec::with_capacity(w.cols);
    for block in part {
        let mut vals: Vec<Int> = block.iter().map(|&c| w.at(row, c)).collect();
        vals.sort_unstable_by(|a, b| b.cmp(a));
        out.extend(vals);
    }
    out
}

/// Split every block of the partition by the entries of `row`, descending.
fn refine(w: &Mat, row: usize, part: &Partition) -> Partition {
    let mut out = Vec::with_capacity(part.len());
    for block in part {
        if block.len() == 1 {
            out.push(block.clone());
            continue;
        }
        let mut groups: BTreeMap<Int, Vec<usize>> = BTreeMap::new();
        for &c in block {
            groups.entry(w.at(row, c)).or_default().push(c);
        }
        for (_, cols) in groups.into_iter().rev() {
            out.push(cols);
        }
    }
    out
}

/// Maximize the pairing matrix over row and column permutations.  Returns the
/// maximal matrix and every column order attaining it (as position -> column
/// maps).  Works level by level: all surviving branches agree on the rows
/// placed so far, so pruning against the global best row is exact.
fn maximize(w: &Mat) -> (Mat, Vec<Vec<usize>>) {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct State {
        used: Bits,
        part: Partition,
    }
    let mut states = vec![State {
        used: Bits::new(w.rows),
        part: vec![(0..w.cols).collect()],
    }];
    let mut max_rows: Vec<Vec<Int>> = Vec::with_capacity(w.rows);
    for _ in 0..w.rows {
        let mut best: Option<Vec<Int>> = None;
        let mut next: BTreeSet<State> = BTreeSet::new();
        for st in &states {
            for r in 0..w.rows {
                if st.used.get(r) {
                    continue;
                }
                let val = row_value(w, r, &st.part);
                match best.as_ref().map(|b| val.cmp(b)) {
                    Some(std::cmp::Ordering::Less) => continue,
                    Some(std::cmp::Ordering::Greater) | None => {
                        best = Some(val.clone());
                        next.clear();
                    }
                    Some(std::cmp::Ordering::Equal) => {}
                }
                let mut used = st.used.clone();
                used.set(r);
                next.insert(State {
                    used,
                    part: refine(w, r, &st.part),
                });
            }
        }
        max_rows.push(best.expect("at least one row remains"));
        states = next.into_iter().collect();
    }
    let flat: Vec<Int> = max_rows.concat();
    let wmax = Mat::from_flat(w.rows, w.cols, flat);
    // Distinct vertices give distinct pairing columns, so every block is a
    // singleton by now and each surviving state is one column order.
    let mut perms: BTreeSet<Vec<usize>> = BTreeSet::new();
    for st in states {
        debug_assert!(st.part.iter().all(|b| b.len() == 1));
        perms.insert(st.part.iter().map(|b| b[0]).collect());
    }
    (wmax, perms.into_iter().collect())
}

/// Intermediate results of the normal form computation.
#[derive(Debug, Clone)]
pub struct NfTrace {
    /// Facet x vertex pairing matrix in hull order.
    pub pairing: Mat,
    /// Its maximum over row and column permutations.
    pub pairing_max: Mat,
    /// Every vertex order attaining the maximum, as position -> hull vertex
    /// slot maps.
    pub orders: Vec<Vec<usize>>,
    /// Indices into `orders` whose triangular vertex matrix equals the normal
    /// form: exactly the orders induced by lattice automorphisms of P.
    pub gl_orders: Vec<usize>,
    pub nf: NormalForm,
}

/// Normal form plus every intermediate of its computation.
pub fn normal_form_traced(points: &PointList, hull: &Hull) -> Result<NfTrace> {
    let w = pairing_matrix(points, hull)?;
    let (wmax, perms) = maximize(&w);
    let n = hull.dim;
    let nv = hull.vertices.len();
    let mut forms = Vec::with_capacity(perms.len());
    for perm in &perms {
        let mut vm = Mat::zero(n, nv);
        for (pos, &col) in perm.iter().enumerate() {
            let v = points.point(hull.vertices[col]);
            for i in 0..n {
                vm.set(i, pos, v[i]);
            }
        }
        forms.push(vm.row_hermite()?.h);
    }
    let best = forms
        .iter()
        .min_by(|a, b| a.a.cmp(&b.a))
        .expect("pairing maximum is attained")
        .clone();
    let gl_orders: Vec<usize> = (0..forms.len()).filter(|&i| forms[i].a == best.a).collect();
    let nf = NormalForm {
        mat: best,
        vpm_perms: perms.len(),
        gl_perms: gl_orders.len(),
    };
    Ok(NfTrace {
        pairing: w,
        pairing_max: wmax,
        orders: perms,
        gl_orders,
        nf,
    })
}

/// Normal form of a full dimensional polytope given by its points and hull.
pub fn normal_form(points: &PointList, hull: &Hull) -> Result<NormalForm> {
    normal_form_traced(points, hull).map(|t| t.nf)
}
