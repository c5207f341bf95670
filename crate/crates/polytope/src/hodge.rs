//! Hodge data of Calabi-Yau hypersurfaces in toric varieties from reflexive
//! polytopes.
//!
//! For a reflexive pair `(P, P*)` in dimension `n`, the Hodge numbers of the
//! associated hypersurface come from lattice point counts on faces:
//!
//! ```text
//! h11     = l(P*) - (n+1) - sum[facets G* of P*] l*(G*)
//!                         + sum[edges E of P] l*(E) l*(E*)
//! h(n-2)1 = same with P and P* exchanged
//! ```
//!
//! where `l` counts lattice points of a face and `l*` only those in its
//! relative interior, and `E*` is the face of the dual polytope dual to `E`.
//! In dimension 3 these are the Picard number and the correction term of a
//! K3 surface; dimension 4 gives threefold data with Euler number
//! `2(h11 - h21)`; dimension 5 gives fourfold data where additionally
//! `h12 = sum[2-faces F of P] l*(F) l*(F*)` and the remaining numbers follow
//! from `chi = 6(8 + h11 + h13 - h12)` and
//! `h22 = 2(22 + 2 h11 + 2 h13 - h12)`.

use crate::error::{Error, Result};
use crate::faces::{self, FaceLattice};
use crate::hull::Hull;
use crate::point::PointList;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HodgeData {
    /// Surface case: Picard number and the toric correction term.
    K3 { pic: i64, cor: i64 },
    /// Threefold case.
    Cy3 { h11: i64, h21: i64, chi: i64 },
    /// Fourfold case.
    Cy4 {
        h11: i64,
        h12: i64,
        h13: i64,
        h22: i64,
        chi: i64,
    },
}

/// Compute Hodge data for the hypersurface of a reflexive polytope.  Returns
/// `None` when the dimension has no associated Calabi-Yau display (only
/// `n = 3, 4, 5` do).
pub fn hodge_numbers(
    points: &PointList,
    hull: &Hull,
    dual_points: &PointList,
) -> Result<Option<HodgeData>> {
    let n = hull.dim;
    if !(3..=5).contains(&n) {
        return Ok(None);
    }
    if !hull.is_reflexive() {
        return Err(Error::NotReflexive);
    }

    let fl: FaceLattice = faces::face_lattice(points, hull)?;
    let sigs = faces::point_signatures(points.len(), hull);
    let dual_sigs = faces::dual_point_signatures(points, hull, dual_points)?;

    // For each face: interior point count of the face and of its dual face.
    let mut sum_ls_vertex_dual = 0i64; // facets of P*, paired with vertices of P
    let mut sum_ls_facet = 0i64; // facets of P
    let mut pair_dim1 = 0i64; // edges of P with their dual faces
    let mut pair_codim2 = 0i64; // codimension-2 faces of P with their duals
    let mut pair_dim2 = 0i64; // 2-faces of P with their duals
    for f in fl.faces() {
        let (_, ls) = faces::face_counts(&f.facet_bits, &sigs);
        let (_, lsd) = faces::face_counts(&f.vertex_bits, &dual_sigs);
        let (ls, lsd) = (ls as i64, lsd as i64);
        if f.dim == 0 {
            sum_ls_vertex_dual += lsd;
        }
        if f.dim == n - 1 {
            sum_ls_facet += ls;
        }
        if f.dim == 1 {
            pair_dim1 += ls * lsd;
        }
        if f.dim == n - 2 {
            pair_codim2 += ls * lsd;
        }
        if f.dim == 2 {
            pair_dim2 += ls * lsd;
        }
    }

    let l_total = points.len() as i64;
    let l_dual_total = dual_points.len() as i64;
    let np1 = (n + 1) as i64;
    let h11 = l_dual_total - np1 - sum_ls_vertex_dual + pair_dim1;
    let h_last = l_total - np1 - sum_ls_facet + pair_codim2;

    Ok(Some(match n {
        3 => HodgeData::K3 {
            pic: h11,
            cor: pair_dim1,
        },
        4 => HodgeData::Cy3 {
            h11,
            h21: h_last,
            chi: 2 * (h11 - h_last),
        },
        5 => {
            let h12 = pair_dim2;
            let h13 = h_last;
            HodgeData::Cy4 {
                h11,
                h12,
                h13,
                h22: 2 * (22 + 2 * h11 + 2 * h13 - h12),
                chi: 6 * (8 + h11 + h13 - h12),
            }
        }
        _ => unreachable!(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cws::{Cws, Quotient, WeightRow};
    use crate::hull::convex_hull;

    fn analyze(cws: &Cws) -> HodgeData {
        let g = crate::cws::realize(cws).unwrap();
        let h = convex_hull(&g.points).unwrap();
        let dual = crate::complete::dual_points(&g.points, &h).unwrap();
        hodge_numbers(&g.points, &h, &dual).unwrap().unwrap()
    }

    #[test]
    fn quintic_threefold() {
        let hd = analyze(&Cws::single(5, vec![1, 1, 1, 1, 1]));
        assert_eq!(
            hd,
            HodgeData::Cy3 {
                h11: 1,
                h21: 101,
                chi: -200
            }
        );
    }

    #[test]
    fn quartic_surface_mod_z2() {
        let cws = Cws {
            rows: vec![WeightRow {
                d: 4,
                w: vec![1, 1, 1, 1],
            }],
            ncols: 4,
            quotients: vec![Quotient {
                m: 2,
                a: vec![1, 0, 1, 0],
            }],
        };
        assert_eq!(analyze(&cws), HodgeData::K3 { pic: 9, cor: 6 });
    }

    #[test]
    fn bicubic_mod_z3() {
        let cws = Cws {
            rows: vec![
                WeightRow {
                    d: 3,
                    w: vec![1, 1, 1, 0, 0, 0],
                },
                WeightRow {
                    d: 3,
                    w: vec![0, 0, 0, 1, 1, 1],
                },
            ],
            ncols: 6,
            quotients: vec![Quotient {
                m: 3,
                a: vec![0, 1, 2, 0, 1, 2],
            }],
        };
        assert_eq!(
            analyze(&cws),
            HodgeData::Cy3 {
                h11: 2,
                h21: 29,
                chi: -54
            }
        );
    }

    #[test]
    fn degree_nine_hypersurface_mod_z3() {
        let cws = Cws {
            rows: vec![WeightRow {
                d: 9,
                w: vec![3, 3, 1, 1, 1],
            }],
            ncols: 5,
            quotients: vec![Quotient {
                m: 3,
                a: vec![1, 2, 1, 2, 0],
            }],
        };
        let g = crate::cws::realize(&cws).unwrap();
        assert_eq!(g.points.len(), 49);
        let h = convex_hull(&g.points).unwrap();
        let dual = crate::complete::dual_points(&g.points, &h).unwrap();
        assert_eq!(dual.len(), 7);
        assert_eq!(
            hodge_numbers(&g.points, &h, &dual).unwrap().unwrap(),
            HodgeData::Cy3 {
                h11: 2,
                h21: 38,
                chi: -72
            }
        );
    }

    #[test]
    fn mirror_swap() {
        // The dual of the quintic simplex has swapped Hodge numbers.
        let g = crate::cws::realize(&Cws::single(5, vec![1, 1, 1, 1, 1])).unwrap();
        let h = convex_hull(&g.points).unwrap();
        let dual = crate::complete::dual_points(&g.points, &h).unwrap();
        let hd = convex_hull(&dual).unwrap();
        let dd = crate::complete::dual_points(&dual, &hd).unwrap();
        assert_eq!(dd.len(), g.points.len());
        assert_eq!(
            hodge_numbers(&dual, &hd, &dd).unwrap().unwrap(),
            HodgeData::Cy3 {
                h11: 101,
                h21: 1,
                chi: 200
            }
        );
    }
}
