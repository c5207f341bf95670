//! Combined weight systems and their lattice polytopes.
//!
//! A weight row `(d; w_1 .. w_N)` selects the monomials `X >= 0` with
//! `sum(w_i X_i) = d`; several rows intersect their solution sets.  The
//! exponent vectors live in an affine lattice of rank `n = N - #rows`, and in
//! suitable coordinates the solution polytope is `{x : K x >= -X0}` where the
//! columns of the kernel matrix `K` span the relation lattice and `X0` is one
//! exponent vector.  For rows with `sum(w) = d` the natural base point is
//! `X0 = (1, .., 1)`, which puts the distinguished origin at the interior
//! monomial.
//!
//! An optional quotient `/Zm: a_1 .. a_N` restricts to the sublattice where
//! `sum(a_i (X_i - X0_i)) = 0 mod m`.

use crate::complete::{self, Ineq};
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::num::{self, Int};
use crate::point::PointList;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightRow {
    pub d: Int,
    pub w: Vec<Int>,
}

impl WeightRow {
    pub fn is_cy(&self) -> bool {
        self.w.iter().sum::<Int>() == self.d
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub m: Int,
    pub a: Vec<Int>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cws {
    pub rows: Vec<WeightRow>,
    pub ncols: usize,
    pub quotients: Vec<Quotient>,
}

impl Cws {
    pub fn single(d: Int, w: Vec<Int>) -> Cws {
        let ncols = w.len();
        Cws {
            rows: vec![WeightRow { d, w }],
            ncols,
            quotients: Vec::new(),
        }
    }

    pub fn is_cy(&self) -> bool {
        self.rows.iter().all(|r| r.is_cy())
    }

    pub fn weight_matrix(&self) -> Mat {
        Mat::from_rows(&self.rows.iter().map(|r| r.w.clone()).collect::<Vec<_>>())
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() || self.ncols == 0 {
            return Err(Error::bad_weights("no weights given"));
        }
        for r in &self.rows {
            if r.w.len() != self.ncols {
                return Err(Error::bad_weights("ragged weight rows"));
            }
            if r.d <= 0 {
                return Err(Error::bad_weights(format!("degree {} is not positive", r.d)));
            }
            if r.w.iter().any(|&x| x < 0) {
                return Err(Error::bad_weights("negative weight"));
            }
            if r.w.iter().all(|&x| x == 0) {
                return Err(Error::bad_weights("weight row is zero"));
            }
        }
        for q in &self.quotients {
            if q.m <= 1 {
                return Err(Error::bad_weights(format!(
                    "quotient order {} is not greater than one",
                    q.m
                )));
            }
            if q.a.len() != self.ncols {
                return Err(Error::bad_weights("quotient action has wrong length"));
            }
        }
        Ok(())
    }
}

/// The realized polytope of a combined weight system.
#[derive(Debug, Clone)]
pub struct CwsGeometry {
    pub dim: usize,
    /// One inequality per exponent coordinate, `a.x + c >= 0`, in the final
    /// lattice basis.
    pub ineqs: Vec<Ineq>,
    /// All lattice points, translated so the distinguished origin (if any)
    /// is zero.  Enumeration order.
    pub points: PointList,
    /// Whether a distinguished interior lattice point exists (and is unique
    /// for rows that are not degree-balanced); points are centered on it.
    pub has_ip: bool,
    /// Exponent vector of the origin: `X = x0 + coord_map * x`.
    pub x0: Vec<Int>,
    /// `ncols x dim` map from final lattice coordinates to exponent shifts.
    pub coord_map: Mat,
}

pub fn realize(cws: &Cws) -> Result<CwsGeometry> {
    cws.validate()?;
    let wmat = cws.weight_matrix();
    let nw = cws.rows.len();
    let ncols = cws.ncols;
    if wmat.rank()? < nw {
        return Err(Error::bad_weights("degrees are linearly dependent"));
    }
    let dim = ncols - nw;
    if dim == 0 {
        return Err(Error::bad_weights("weight system has no free coordinates"));
    }

    let x0 = base_exponent(cws, &wmat)?;
    let mut k = wmat.kernel()?;
    debug_assert_eq!(k.cols, dim);

    if !cws.quotients.is_empty() {
        let t = quotient_sublattice(cws, &k)?;
        k = k.mul(&t)?;
    }

    let mut ineqs: Vec<Ineq> = Vec::with_capacity(ncols);
    for j in 0..ncols {
        let a: Vec<Int> = k.row(j).to_vec();
        let c = x0[j];
        if a.iter().all(|&x| x == 0) {
            if c < 0 {
                return Err(Error::bad_weights("weight system has no solutions"));
            }
            continue; // coordinate is constant on the solution lattice
        }
        ineqs.push((a, c));
    }
    {
        let mut seen = std::collections::HashSet::new();
        ineqs.retain(|i| seen.insert(i.clone()));
    }

    let mut points = complete::lattice_points(dim, &ineqs)?;
    let mut x0 = x0;
    let mut has_ip;
    if cws.is_cy() {
        // The all-ones exponent vector is interior by construction.
        debug_assert!(points.iter().any(|p| p.iter().all(|&c| c == 0)));
        has_ip = true;
    } else {
        let interior: Vec<Vec<Int>> = points
            .iter()
            .filter(|p| {
                ineqs
                    .iter()
                    .all(|(a, c)| num::dot(a, p, "ip scan").map_or(false, |e| e + (*c as i128) > 0))
            })
            .map(|p| p.to_vec())
            .collect();
        has_ip = interior.len() == 1;
        if has_ip {
            let center = &interior[0];
            if center.iter().any(|&c| c != 0) {
                let mut moved = PointList::with_capacity(dim, points.len());
                for p in points.iter() {
                    let q: Vec<Int> = p
                        .iter()
                        .zip(center)
                        .map(|(&a, &b)| num::sub(a, b, "recenter"))
                        .collect::<Result<_>>()?;
                    moved.push(&q);
                }
                points = moved;
                for (a, c) in &mut ineqs {
                    let shift = num::narrow(num::dot(a, center, "recenter")?, "recenter")?;
                    *c = num::add(*c, shift, "recenter")?;
                }
                x0 = k.mul_vec(center)?
                    .iter()
                    .zip(&x0)
                    .map(|(&s, &b)| num::add(b, s, "recenter"))
                    .collect::<Result<_>>()?;
            }
        }
    }
    if points.is_empty() {
        return Err(Error::bad_weights("weight system has no solutions"));
    }
    if has_ip && !points.iter().any(|p| p.iter().all(|&c| c == 0)) {
        has_ip = false;
    }

    Ok(CwsGeometry {
        dim,
        ineqs,
        points,
        has_ip,
        x0,
        coord_map: k,
    })
}

/// One integral exponent vector: all-ones for degree-balanced systems, a
/// Smith-form solve otherwise.
fn base_exponent(cws: &Cws, wmat: &Mat) -> Result<Vec<Int>> {
    if cws.is_cy() {
        return Ok(vec![1; cws.ncols]);
    }
    if cws.rows.len() > 1 {
        return Err(Error::bad_weights(
            "multiple weight rows must each have degree equal to their weight sum",
        ));
    }
    let s = wmat.smith()?;
    let d_vec: Vec<Int> = cws.rows.iter().map(|r| r.d).collect();
    let rhs = s.u.mul_vec(&d_vec)?;
    let mut z = vec![0 as Int; wmat.cols];
    for t in 0..s.d.rows.min(s.d.cols) {
        let dv = s.d.at(t, t);
        if dv != 0 {
            if rhs[t] % dv != 0 {
                return Err(Error::bad_weights(
                    "degree is not attained by any integral exponent vector",
                ));
            }
            z[t] = rhs[t] / dv;
        } else if rhs[t] != 0 {
            return Err(Error::bad_weights(
                "degree is not attained by any integral exponent vector",
            ));
        }
    }
    s.v.mul_vec(&z)
}

/// Basis of the sublattice cut out by the quotient congruences, as columns of
/// an integer matrix in the kernel coordinates.
fn quotient_sublattice(cws: &Cws, k: &Mat) -> Result<Mat> {
    let dim = k.cols;
    let nq = cws.quotients.len();
    // Rows (a^T K | m_i e_i): kernel vectors are (x, y) with a.K x = -m y.
    let mut rows = Vec::with_capacity(nq);
    for (qi, q) in cws.quotients.iter().enumerate() {
        let mut row = Vec::with_capacity(dim + nq);
        for j in 0..dim {
            row.push(num::narrow(num::dot(&q.a, &k.col(j), "quotient")?, "quotient")?);
        }
        for t in 0..nq {
            row.push(if t == qi { q.m } else { 0 });
        }
        rows.push(row);
    }
    let ker = Mat::from_rows(&rows).kernel()?;
    if ker.cols != dim {
        return Err(Error::bad_weights("quotient congruences are inconsistent"));
    }
    let mut t = Mat::zero(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            t.set(i, j, ker.at(i, j));
        }
    }
    if t.det()? == 0 {
        return Err(Error::internal("degenerate quotient sublattice".to_string()));
    }
    Ok(t)
}

/// Span property: every exponent hyperplane `X_i = 0` pulls back to a facet
/// of the realized polytope.  The pulled back inequalities need not be
/// primitive, so each is gcd reduced before comparing against the facet
/// list; a reduced inequality with imprimitive normal lies on a lattice
/// point free hyperplane and can never match.
pub fn span_check(geom: &CwsGeometry, hull: &crate::hull::Hull) -> bool {
    'outer: for (a, c) in &geom.ineqs {
        let mut g = num::gcd_slice(a);
        g = num::gcd(g, *c);
        debug_assert!(g > 0, "inequality rows are nonzero");
        let ra: Vec<Int> = a.iter().map(|&x| x / g).collect();
        let rc = c / g;
        for f in &hull.facets {
            if f.c == rc && f.normal == ra {
                continue 'outer;
            }
        }
        return false;
    }
    true
}
