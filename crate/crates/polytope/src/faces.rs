//! Face lattice of a hull and lattice point counts on faces.
//!
//! Every proper face is an intersection of facets, so the face set is the
//! closure of the facet vertex sets under intersection.  Point counts use
//! signatures: the signature of a lattice point is the set of facet
//! hyperplanes it lies on, and a point lies on a face exactly when its
//! signature contains the face's facet set (with equality for the relative
//! interior).
//!
//! For a reflexive polytope the dual's face lattice is the transpose of the
//! primal one (vertex and facet roles swap, dimensions complement), so dual
//! face counts never need the dual hull: a dual point's signature against the
//! primal vertices suffices.

use crate::bits::Bits;
use crate::error::Result;
use crate::hull::Hull;
use crate::mat::Mat;
use crate::num::{self, Int};
use crate::point::PointList;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct Face {
    /// Vertices on the face, indexed by position in `hull.vertices`.
    pub vertex_bits: Bits,
    /// Facets containing the face, indexed by position in `hull.facets`.
    pub facet_bits: Bits,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub dim: usize,
    pub n_vertices: usize,
    pub n_facets: usize,
    /// Proper faces bucketed by dimension: `by_dim[d]` holds the
    /// `d`-dimensional faces, `d = 0 .. dim-1`.
    pub by_dim: Vec<Vec<Face>>,
}

impl FaceLattice {
    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.by_dim.iter().flatten()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|v| v.len()).collect()
    }
}

pub fn face_lattice(points: &PointList, hull: &Hull) -> Result<FaceLattice> {
    let n = hull.dim;
    let nv = hull.vertices.len();
    let nf = hull.facets.len();

    // Facet vertex sets in vertex indexing.
    let mut fsets: Vec<Bits> = Vec::with_capacity(nf);
    for f in &hull.facets {
        let mut b = Bits::new(nv);
        for (vi, &pi) in hull.vertices.iter().enumerate() {
            if f.incidence.get(pi) {
                b.set(vi);
            }
        }
        fsets.push(b);
    }

    // Closure under intersection.
    let mut all: BTreeMap<Bits, ()> = fsets.iter().cloned().map(|b| (b, ())).collect();
    let mut frontier: Vec<Bits> = all.keys().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for f in &fsets {
                let i = a.and(f);
                if !i.is_empty() && !all.contains_key(&i) {
                    all.insert(i.clone(), ());
                    next.push(i);
                }
            }
        }
        frontier = next;
    }

    let mut by_dim: Vec<Vec<Face>> = vec![Vec::new(); n];
    for (vbits, _) in all {
        let mut facet_bits = Bits::new(nf);
        for (j, f) in fsets.iter().enumerate() {
            if vbits.is_subset(f) {
                facet_bits.set(j);
            }
        }
        let idx: Vec<usize> = vbits.iter_ones().map(|vi| hull.vertices[vi]).collect();
        let d = affine_rank(points, &idx)?;
        debug_assert!(d < n, "proper face with full dimension");
        by_dim[d].push(Face {
            vertex_bits: vbits,
            facet_bits,
            dim: d,
        });
    }

    Ok(FaceLattice {
        dim: n,
        n_vertices: nv,
        n_facets: nf,
        by_dim,
    })
}

fn affine_rank(points: &PointList, idx: &[usize]) -> Result<usize> {
    if idx.len() <= 1 {
        return Ok(0);
    }
    let base = points.point(idx[0]);
    let rows: Vec<Vec<Int>> = idx[1..]
        .iter()
        .map(|&i| {
            points
                .point(i)
                .iter()
                .zip(base)
                .map(|(&a, &b)| num::sub(a, b, "face rank"))
                .collect::<Result<Vec<Int>>>()
        })
        .collect::<Result<_>>()?;
    Mat::from_rows(&rows).rank()
}

/// Signature of each pool point: the set of facet hyperplanes it lies on.
/// Interior points get the empty signature.
pub fn point_signatures(n_points: usize, hull: &Hull) -> Vec<Bits> {
    let nf = hull.facets.len();
    let mut sigs = vec![Bits::new(nf); n_points];
    for (j, f) in hull.facets.iter().enumerate() {
        for p in f.incidence.iter_ones() {
            sigs[p].set(j);
        }
    }
    sigs
}

/// Signature of each dual point against the primal vertices: bit `v` is set
/// when the point lies on the dual facet carved out by vertex `v`, i.e.
/// `<vertex_v, q> = -1`.
pub fn dual_point_signatures(
    points: &PointList,
    hull: &Hull,
    dual_points: &PointList,
) -> Result<Vec<Bits>> {
    let nv = hull.vertices.len();
    let mut sigs = Vec::with_capacity(dual_points.len());
    for q in dual_points.iter() {
        let mut b = Bits::new(nv);
        for (vi, &pi) in hull.vertices.iter().enumerate() {
            if num::dot(points.point(pi), q, "dual signature")? == -1 {
                b.set(vi);
            }
        }
        sigs.push(b);
    }
    Ok(sigs)
}

/// Lattice point counts of one face: `l` counts points on the face,
/// `l_star` only those in its relative interior.
pub fn face_counts(face_bits: &Bits, sigs: &[Bits]) -> (usize, usize) {
    let mut l = 0;
    let mut l_star = 0;
    for s in sigs {
        if face_bits.is_subset(s) {
            l += 1;
            if s == face_bits {
                l_star += 1;
            }
        }
    }
    (l, l_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::convex_hull;

    fn pl(rows: &[&[Int]]) -> PointList {
        PointList::from_rows(
            rows[0].len(),
            &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn square_face_lattice() {
        let p = pl(&[&[1, 1], &[-1, 1], &[-1, -1], &[1, -1], &[0, 0]]);
        let h = convex_hull(&p).unwrap();
        let fl = face_lattice(&p, &h).unwrap();
        assert_eq!(fl.f_vector(), vec![4, 4]);
        for f in &fl.by_dim[1] {
            assert_eq!(f.vertex_bits.count(), 2);
            assert_eq!(f.facet_bits.count(), 1);
        }
        for f in &fl.by_dim[0] {
            assert_eq!(f.vertex_bits.count(), 1);
            assert_eq!(f.facet_bits.count(), 2);
        }
    }

    #[test]
    fn simplex_face_lattice_and_counts() {
        let g = crate::cws::realize(&crate::cws::Cws::single(4, vec![1, 1, 1, 1])).unwrap();
        let h = convex_hull(&g.points).unwrap();
        let fl = face_lattice(&g.points, &h).unwrap();
        assert_eq!(fl.f_vector(), vec![4, 6, 4]);

        let sigs = point_signatures(g.points.len(), &h);
        // Interior points have empty signature; the origin is one of them.
        let n_interior = sigs.iter().filter(|s| s.is_empty()).count();
        assert_eq!(n_interior, 1);
        // Relative interiors partition the points.
        let total: usize = fl
            .faces()
            .map(|f| face_counts(&f.facet_bits, &sigs).1)
            .sum();
        assert_eq!(total + n_interior, g.points.len());
        // Each facet of the degree-4 simplex is a triangle with 15 points,
        // 3 of them interior to the facet.
        for f in &fl.by_dim[2] {
            assert_eq!(face_counts(&f.facet_bits, &sigs), (15, 3));
        }
        for f in &fl.by_dim[0] {
            assert_eq!(face_counts(&f.facet_bits, &sigs).1, 1);
        }
    }

    #[test]
    fn dual_signatures_of_quartic() {
        let g = crate::cws::realize(&crate::cws::Cws::single(4, vec![1, 1, 1, 1])).unwrap();
        let h = convex_hull(&g.points).unwrap();
        assert!(h.is_reflexive());
        let dual_ineqs: Vec<(Vec<Int>, Int)> = h
            .vertices
            .iter()
            .map(|&vi| (g.points.point(vi).to_vec(), 1))
            .collect();
        let dual_points = crate::complete::lattice_points(3, &dual_ineqs).unwrap();
        assert_eq!(dual_points.len(), 5); // four vertices and the origin
        let sigs = dual_point_signatures(&g.points, &h, &dual_points).unwrap();
        // Four dual vertices lie on three dual facets each; the origin on none.
        let mut counts: Vec<usize> = sigs.iter().map(|s| s.count()).collect();
        counts.sort();
        assert_eq!(counts, vec![0, 3, 3, 3, 3]);
    }
}
