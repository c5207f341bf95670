//! Enumeration of all lattice points of a polytope given by facet
//! inequalities.
//!
//! Two strategies share the public entry point:
//!
//! * a simplex path for systems with exactly `dim + 1` facets, which
//!   enumerates the facet evaluation vectors directly (they satisfy a single
//!   positive linear relation) and recovers coordinates by an exact adjugate
//!   solve, and
//! * a projection cascade for general systems, which eliminates coordinates
//!   one at a time and then enumerates coordinate by coordinate using the
//!   exact per-level bounds.
//!
//! The simplex path matters for weight-system polytopes with large entries:
//! projection would square coefficient sizes per level, while the evaluation
//! lattice stays within one adjugate of the input scale.

use crate::config;
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::num::{self, Int, Wide};
use crate::point::PointList;

/// One inequality `a.x + c >= 0`.
pub type Ineq = (Vec<Int>, Int);

/// All lattice points satisfying every inequality.  The system must be
/// bounded.  Points come out in enumeration order (simplex path: evaluation
/// vectors in lexicographic order; cascade: coordinates in increasing order,
/// first coordinate outermost).
pub fn lattice_points(dim: usize, facets: &[Ineq]) -> Result<PointList> {
    if dim == 0 || facets.is_empty() {
        return Err(Error::internal("point enumeration needs a bounded system"));
    }
    if facets.len() == dim + 1 {
        if let Some(pl) = simplex_points(dim, facets)? {
            return Ok(pl);
        }
    }
    cascade_points(dim, facets)
}

/// Count without materializing coordinates (same enumeration, cheaper).
pub fn count_lattice_points(dim: usize, facets: &[Ineq]) -> Result<usize> {
    Ok(lattice_points(dim, facets)?.len())
}

/// Lattice points of the polar dual, defined by `v.y >= -1` for every vertex
/// `v`.  Only valid for reflexive polytopes, where the dual is again a
/// lattice polytope.
pub fn dual_points(points: &PointList, hull: &crate::hull::Hull) -> Result<PointList> {
    if !hull.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let ineqs: Vec<Ineq> = hull
        .vertices
        .iter()
        .map(|&vi| (points.point(vi).to_vec(), 1))
        .collect();
    lattice_points(hull.dim, &ineqs)
}

/// Simplex enumeration: with `n + 1` facet normals spanning all of `Z^n`
/// there is a unique positive primitive relation `sum(lam_j * a_j) = 0`, so
/// the evaluation vector `e_j = a_j.x + c_j >= 0` of any point satisfies
/// `sum(lam_j * e_j) = sum(lam_j * c_j)`.  Enumerate those vectors and keep
/// the ones whose coordinate solve is integral.
fn simplex_points(dim: usize, facets: &[Ineq]) -> Result<Option<PointList>> {
    let ne = facets.len();
    debug_assert_eq!(ne, dim + 1);
    let normals = Mat::from_rows(&facets.iter().map(|f| f.0.clone()).collect::<Vec<_>>());
    let rel = normals.transpose().kernel()?;
    if rel.cols != 1 {
        return Ok(None); // normals degenerate: not a simplex
    }
    let mut lam: Vec<Int> = rel.col(0);
    if lam.iter().all(|&x| x <= 0) {
        for x in &mut lam {
            *x = -*x;
        }
    }
    if lam.iter().any(|&x| x <= 0) {
        return Ok(None); // mixed signs: unbounded or degenerate system
    }

    // Total weighted evaluation shared by every point.
    let mut d0: Wide = 0;
    for (l, f) in lam.iter().zip(facets) {
        d0 = num::wadd(d0, num::wmul(*l as Wide, f.1 as Wide, "simplex total")?, "simplex total")?;
    }
    if d0 < 0 {
        return Ok(None);
    }

    // Solve the first n evaluations for x: sub * x = e' - c'.
    let mut sub = Mat::zero(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            sub.set(i, j, facets[i].0[j]);
        }
    }
    let (adj, det) = sub.adjugate_det()?;
    if det == 0 {
        return Ok(None);
    }

    let mut out = PointList::new(dim);
    let mut evals = vec![0 as Wide; ne];
    enumerate_evals(0, d0, &lam, &mut evals, &mut |evals| {
        push_simplex_point(dim, facets, &adj, det, evals, &mut out)
    })?;
    Ok(Some(out))
}

/// Recursively enumerate `e >= 0` with `sum(lam_j * e_j) = remaining`.
fn enumerate_evals(
    j: usize,
    remaining: Wide,
    lam: &[Int],
    evals: &mut Vec<Wide>,
    emit: &mut impl FnMut(&[Wide]) -> Result<()>,
) -> Result<()> {
    if j == lam.len() - 1 {
        let l = lam[j] as Wide;
        if remaining % l == 0 {
            evals[j] = remaining / l;
            emit(evals)?;
        }
        return Ok(());
    }
    let l = lam[j] as Wide;
    let mut e: Wide = 0;
    while num::wmul(e, l, "simplex enum")? <= remaining {
        evals[j] = e;
        enumerate_evals(j + 1, remaining - e * l, lam, evals, emit)?;
        e += 1;
    }
    Ok(())
}

fn push_simplex_point(
    dim: usize,
    facets: &[Ineq],
    adj: &Mat,
    det: Wide,
    evals: &[Wide],
    out: &mut PointList,
) -> Result<()> {
    let mut x = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut acc: Wide = 0;
        for j in 0..dim {
            let rhs = num::wsub(evals[j], facets[j].1 as Wide, "simplex solve")?;
            acc = num::wadd(
                acc,
                num::wmul(adj.at(i, j) as Wide, rhs, "simplex solve")?,
                "simplex solve",
            )?;
        }
        if acc % det != 0 {
            return Ok(()); // evaluation vector of a non-lattice point
        }
        x.push(num::narrow(acc / det, "simplex solve")?);
    }
    out.push_checked(&x)
}

/// Coordinate-elimination cascade.  `levels[k]` holds inequalities in the
/// first `k + 1` coordinates; eliminating the last coordinate of a level by
/// combining its positive/negative-coefficient rows yields the level below.
fn cascade_points(dim: usize, facets: &[Ineq]) -> Result<PointList> {
    let mut levels: Vec<Vec<Ineq>> = vec![Vec::new(); dim];
    levels[dim - 1] = facets
        .iter()
        .map(|(a, c)| reduce_ineq(a.clone(), *c))
        .collect();
    dedup_rows(&mut levels[dim - 1]);
    for k in (1..dim).rev() {
        levels[k - 1] = eliminate_last(k + 1, &levels[k])?;
    }

    let mut out = PointList::new(dim);
    let mut x = vec![0 as Int; dim];
    descend(&levels, 0, &mut x, &mut out)?;
    Ok(out)
}

/// Divide an inequality by the gcd of its coefficients, tightening the
/// constant: `a.x + c >= 0` holds on integers iff
/// `(a/g).x + floor(c/g) >= 0`.
fn reduce_ineq(a: Vec<Int>, c: Int) -> Ineq {
    let g = num::gcd_slice(&a);
    if g <= 1 {
        return (a, c);
    }
    let a = a.into_iter().map(|x| x / g).collect();
    (a, c.div_euclid(g))
}

fn dedup_rows(rows: &mut Vec<Ineq>) {
    rows.sort();
    rows.dedup();
}

fn eliminate_last(nvars: usize, rows: &[Ineq]) -> Result<Vec<Ineq>> {
    let k = nvars - 1;
    let mut out: Vec<Ineq> = Vec::new();
    let pos: Vec<&Ineq> = rows.iter().filter(|r| r.0[k] > 0).collect();
    let neg: Vec<&Ineq> = rows.iter().filter(|r| r.0[k] < 0).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::internal("unbounded system in point enumeration"));
    }
    for r in rows.iter().filter(|r| r.0[k] == 0) {
        out.push((r.0[..k].to_vec(), r.1));
    }
    for rp in &pos {
        for rn in &neg {
            // (-qn) * rp + qp * rn with qp > 0, qn < 0 cancels coordinate k.
            let qp = rp.0[k] as Wide;
            let qn = rn.0[k] as Wide;
            let mut a = Vec::with_capacity(k);
            for i in 0..k {
                let v = num::wadd(
                    num::wmul(-qn, rp.0[i] as Wide, "eliminate")?,
                    num::wmul(qp, rn.0[i] as Wide, "eliminate")?,
                    "eliminate",
                )?;
                a.push(num::narrow(v, "eliminate")?);
            }
            let c = num::narrow(
                num::wadd(
                    num::wmul(-qn, rp.1 as Wide, "eliminate")?,
                    num::wmul(qp, rn.1 as Wide, "eliminate")?,
                    "eliminate",
                )?,
                "eliminate",
            )?;
            if a.iter().all(|&x| x == 0) {
                if c < 0 {
                    return Ok(vec![(vec![0; k.max(1)], -1)]); // infeasible marker
                }
                continue;
            }
            out.push(reduce_ineq(a, c));
        }
    }
    dedup_rows(&mut out);
    if out.len() > config::PROJ_ROW_MAX {
        return Err(Error::Capacity {
            param: config::PROJ_ROW_MAX_NAME,
            needed: out.len(),
        });
    }
    Ok(out)
}

/// Fix coordinates left to right; level `k` bounds coordinate `k` given the
/// prefix.
fn descend(levels: &[Vec<Ineq>], k: usize, x: &mut Vec<Int>, out: &mut PointList) -> Result<()> {
    let rows = &levels[k];
    let mut lo: Option<Wide> = None;
    let mut hi: Option<Wide> = None;
    for (a, c) in rows {
        let ak = a[k] as Wide;
        let mut rest = *c as Wide;
        for i in 0..k {
            rest = num::wadd(
                rest,
                num::wmul(a[i] as Wide, x[i] as Wide, "descend")?,
                "descend",
            )?;
        }
        // ak * xk + rest >= 0
        if ak > 0 {
            let b = (-rest).div_euclid(ak) + if (-rest).rem_euclid(ak) != 0 { 1 } else { 0 };
            lo = Some(lo.map_or(b, |v: Wide| v.max(b)));
        } else if ak < 0 {
            let b = rest.div_euclid(-ak);
            hi = Some(hi.map_or(b, |v: Wide| v.min(b)));
        } else if rest < 0 {
            return Ok(()); // prefix already infeasible
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::internal("unbounded coordinate in point enumeration"));
    };
    let mut v = lo;
    while v <= hi {
        x[k] = num::narrow(v, "descend")?;
        if k + 1 == levels.len() {
            out.push_checked(x)?;
        } else {
            descend(levels, k + 1, x, out)?;
        }
        v += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeSet;

    fn set(pl: &PointList) -> BTreeSet<Vec<Int>> {
        pl.iter().map(|p| p.to_vec()).collect()
    }

    /// Oracle: scan an enclosing box and filter by the inequalities.
    fn grid_points(dim: usize, facets: &[Ineq], r: Int) -> BTreeSet<Vec<Int>> {
        let mut out = BTreeSet::new();
        let mut x = vec![-r; dim];
        loop {
            if facets
                .iter()
                .all(|(a, c)| num::dot(a, &x, "t").unwrap() + (*c as Wide) >= 0)
            {
                out.insert(x.clone());
            }
            let mut k = 0;
            loop {
                if k == dim {
                    return out;
                }
                x[k] += 1;
                if x[k] <= r {
                    break;
                }
                x[k] = -r;
                k += 1;
            }
        }
    }

    #[test]
    fn cross_polytope_counts() {
        // |x| + |y| <= 2: 13 lattice points.
        let facets: Vec<Ineq> = vec![
            (vec![1, 1], 2),
            (vec![1, -1], 2),
            (vec![-1, 1], 2),
            (vec![-1, -1], 2),
        ];
        let pts = lattice_points(2, &facets).unwrap();
        assert_eq!(pts.len(), 13);
        assert_eq!(set(&pts), grid_points(2, &facets, 3));
    }

    #[test]
    fn quintic_simplex_has_126_points() {
        // u_i >= -1 (i = 1..4), sum(u) <= 1: the 4d weight-one polytope.
        let mut facets: Vec<Ineq> = (0..4)
            .map(|i| {
                let mut a = vec![0; 4];
                a[i] = 1;
                (a, 1)
            })
            .collect();
        facets.push((vec![-1, -1, -1, -1], 1));
        let via_simplex = simplex_points(4, &facets).unwrap().unwrap();
        let via_cascade = cascade_points(4, &facets).unwrap();
        assert_eq!(via_simplex.len(), 126);
        assert_eq!(set(&via_simplex), set(&via_cascade));
        assert_eq!(set(&via_simplex), grid_points(4, &facets, 6));
    }

    #[test]
    fn simplex_path_with_scaled_weights() {
        // Facets of the weight system (1, 2, 3; 6) polytope in 2d:
        // vertices of the dual are (1,0), (0,1), (-2,-3) after a basis choice.
        let facets: Vec<Ineq> = vec![(vec![1, 0], 1), (vec![0, 1], 1), (vec![-2, -3], 1)];
        let s = simplex_points(2, &facets).unwrap().unwrap();
        let c = cascade_points(2, &facets).unwrap();
        assert_eq!(set(&s), set(&c));
        assert_eq!(set(&s), grid_points(2, &facets, 8));
        assert!(s.iter().any(|p| p == [0, 0]));
    }

    #[test]
    fn random_systems_match_grid() {
        let mut rng = StdRng::seed_from_u64(0xC0117);
        let mut tested = 0;
        for _ in 0..200 {
            let n = 1 + rng.gen_range(0..3);
            let np = n + 1 + rng.gen_range(0..5);
            let mut pts = PointList::new(n);
            for _ in 0..np {
                let p: Vec<Int> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                pts.push(&p);
            }
            let pts = pts.dedup();
            let Ok(h) = crate::hull::convex_hull(&pts) else {
                continue;
            };
            let facets: Vec<Ineq> = h.facets.iter().map(|f| (f.normal.clone(), f.c)).collect();
            let got = lattice_points(n, &facets).unwrap();
            assert_eq!(set(&got), grid_points(n, &facets, 4));
            assert_eq!(got.len(), got.dedup().len(), "duplicate enumeration");
            tested += 1;
        }
        assert!(tested > 100, "too few full-dimensional samples");
    }

    #[test]
    fn infeasible_prefix_is_pruned() {
        // Empty interior in z for some (x, y): a thin wedge.
        let facets: Vec<Ineq> = vec![
            (vec![1, 0], 0),
            (vec![-1, 0], 3),
            (vec![-3, 1], 0),
            (vec![3, -1], 1),
            (vec![0, -1], 9),
            (vec![0, 1], 0),
        ];
        let got = lattice_points(2, &facets).unwrap();
        assert_eq!(set(&got), grid_points(2, &facets, 12));
    }
}
