//! Incremental convex hull over the integers.
//!
//! The algorithm is beneath-beyond: a full-dimensional seed simplex is chosen
//! greedily, the remaining points are inserted in input order, and each
//! insertion replaces the facets visible from the new point by the cone over
//! the horizon.  All facet data is exact; new facet equations are obtained as
//! positive integer combinations of a visible and an invisible facet meeting
//! along a horizon ridge, so no rational pivoting ever happens.
//!
//! Facets are inequalities `a.x + c >= 0` with `a` primitive.  For hyperplanes
//! spanned by lattice points the gcd of `a` automatically divides `c`, so
//! normalizing by `gcd(a)` keeps the equation integral.

use crate::bits::Bits;
use crate::config;
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::num::{self, Int, Wide};
use crate::point::PointList;

/// One facet inequality `normal . x + c >= 0`, with the set of input points
/// lying on its hyperplane.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vec<Int>,
    pub c: Int,
    pub incidence: Bits,
}

impl Facet {
    pub fn eval(&self, p: &[Int]) -> Result<Wide> {
        num::wadd(
            num::dot(&self.normal, p, "facet eval")?,
            self.c as Wide,
            "facet eval",
        )
    }
}

/// Convex hull of a full-dimensional point list.
#[derive(Debug, Clone)]
pub struct Hull {
    pub dim: usize,
    pub facets: Vec<Facet>,
    /// Indices into the input list, in input order.
    pub vertices: Vec<usize>,
}

impl Hull {
    /// Origin strictly interior: every facet has `c > 0`.
    pub fn has_interior_origin(&self) -> bool {
        self.facets.iter().all(|f| f.c > 0)
    }

    /// Reflexive: every facet has `c = 1`, i.e. all facets are at integral
    /// distance one from the origin.
    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.c == 1)
    }

    /// The facet normals as a point list (for a reflexive polytope these are
    /// the vertices of the polar dual).
    pub fn normals(&self) -> PointList {
        let mut pl = PointList::with_capacity(self.dim, self.facets.len());
        for f in &self.facets {
            pl.push(&f.normal);
        }
        pl
    }
}

/// Compute the convex hull of `points`, which must span the full ambient
/// dimension.  Duplicate input points are not allowed (callers dedup first).
pub fn convex_hull(points: &PointList) -> Result<Hull> {
    let n = points.dim;
    let np = points.len();
    if np == 0 {
        return Err(Error::parse("empty point list"));
    }
    if np > config::VERT_MAX {
        return Err(Error::Capacity {
            param: config::VERT_MAX_NAME,
            needed: np,
        });
    }
    if n == 0 {
        return Err(Error::NotFullDim {
            rank: 0,
            dim: 0,
            eqs: vec![],
        });
    }

    let seed = seed_simplex(points)?;
    if seed.len() < n + 1 {
        return Err(not_full_dim_error(points, seed.len().saturating_sub(1)));
    }

    let mut facets = initial_facets(points, &seed)?;
    let mut processed = vec![false; np];
    for &i in &seed {
        processed[i] = true;
    }

    for p_idx in 0..np {
        if processed[p_idx] {
            continue;
        }
        processed[p_idx] = true;
        insert_point(points, &mut facets, p_idx)?;
    }

    let vertices = extract_vertices(points, &facets)?;
    Ok(Hull {
        dim: n,
        facets,
        vertices,
    })
}

/// Affine-independence greedy seed: start from the first point, then
/// repeatedly take the point whose difference vector has the largest
/// Gram-Schmidt residual against the span so far.  Scores are float-valued
/// for speed; every accepted point is verified by an exact integer rank test,
/// so floats affect only the choice among valid candidates, never correctness.
fn seed_simplex(points: &PointList) -> Result<Vec<usize>> {
    let n = points.dim;
    let np = points.len();
    let mut chosen = vec![0usize];
    let mut basis: Vec<Vec<f64>> = Vec::new(); // orthogonalized difference vectors
    let mut diffs: Vec<Vec<Int>> = Vec::new(); // exact difference vectors

    while chosen.len() < n + 1 {
        let mut order: Vec<(f64, usize)> = Vec::new();
        for i in 0..np {
            if chosen.contains(&i) {
                continue;
            }
            let d: Vec<f64> = points
                .point(i)
                .iter()
                .zip(points.point(chosen[0]))
                .map(|(&a, &b)| a as f64 - b as f64)
                .collect();
            let mut r = d.clone();
            for b in &basis {
                let nb: f64 = b.iter().map(|x| x * x).sum();
                if nb > 0.0 {
                    let proj: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / nb;
                    for (x, y) in r.iter_mut().zip(b) {
                        *x -= proj * y;
                    }
                }
            }
            let score: f64 = r.iter().map(|x| x * x).sum();
            order.push((score, i));
        }
        order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

        let mut accepted = None;
        for &(_, i) in &order {
            let d: Vec<Int> = points
                .point(i)
                .iter()
                .zip(points.point(chosen[0]))
                .map(|(&a, &b)| num::sub(a, b, "seed diff"))
                .collect::<Result<_>>()?;
            let mut trial = diffs.clone();
            trial.push(d.clone());
            if Mat::from_rows(&trial).rank()? == trial.len() {
                accepted = Some((i, d));
                break;
            }
        }
        let Some((i, d)) = accepted else {
            break; // rank deficient: polytope is not full-dimensional
        };
        let mut r: Vec<f64> = d.iter().map(|&x| x as f64).collect();
        for b in &basis {
            let nb: f64 = b.iter().map(|x| x * x).sum();
            if nb > 0.0 {
                let proj: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / nb;
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        basis.push(r);
        diffs.push(d);
        chosen.push(i);
    }
    Ok(chosen)
}

/// Build the `NotFullDim` error carrying integral equations satisfied by all
/// points: the kernel of the matrix with rows `(p_i, 1)`.
fn not_full_dim_error(points: &PointList, rank: usize) -> Error {
    let n = points.dim;
    let mut rows = Vec::with_capacity(points.len());
    for p in points.iter() {
        let mut r: Vec<Int> = p.to_vec();
        r.push(1);
        rows.push(r);
    }
    let eqs = match Mat::from_rows(&rows).kernel() {
        Ok(k) => (0..k.cols)
            .map(|j| (0..k.rows).map(|i| k.at(i, j) as i64).collect())
            .collect(),
        Err(_) => vec![],
    };
    Error::NotFullDim { rank, dim: n, eqs }
}

/// Facets of the seed simplex: each omits one seed point, which fixes the
/// inequality's sign.
fn initial_facets(points: &PointList, seed: &[usize]) -> Result<Vec<Facet>> {
    let n = points.dim;
    let np = points.len();
    let mut facets = Vec::with_capacity(n + 1);
    for omit in 0..seed.len() {
        let on_facet: Vec<usize> = seed
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != omit)
            .map(|(_, &i)| i)
            .collect();
        let apex = seed[omit];
        let base = points.point(on_facet[0]);
        let mut rows = Vec::with_capacity(n - 1);
        for &i in &on_facet[1..] {
            let d: Vec<Int> = points
                .point(i)
                .iter()
                .zip(base)
                .map(|(&a, &b)| num::sub(a, b, "facet span"))
                .collect::<Result<_>>()?;
            rows.push(d);
        }
        let normal_mat = if rows.is_empty() {
            // 1-dimensional case: the "hyperplane" is a point, normal is free.
            Mat::from_rows(&[vec![1 as Int]])
        } else {
            let k = Mat::from_rows(&rows).kernel()?;
            if k.cols != 1 {
                return Err(Error::internal("seed facet is not a hyperplane".to_string()));
            }
            k.transpose()
        };
        let mut normal: Vec<Int> = normal_mat.row(0).to_vec();
        let mut c = num::narrow(
            num::wsub(0, num::dot(&normal, base, "facet offset")?, "facet offset")?,
            "facet offset",
        )?;
        let apex_eval = num::wadd(
            num::dot(&normal, points.point(apex), "facet sign")?,
            c as Wide,
            "facet sign",
        )?;
        if apex_eval == 0 {
            return Err(Error::internal("seed simplex is degenerate".to_string()));
        }
        if apex_eval < 0 {
            for x in &mut normal {
                *x = num::sub(0, *x, "facet sign")?;
            }
            c = num::sub(0, c, "facet sign")?;
        }
        let mut incidence = Bits::new(np);
        for &i in &on_facet {
            incidence.set(i);
        }
        facets.push(Facet {
            normal,
            c,
            incidence,
        });
    }
    Ok(facets)
}

/// Insert one point: either it satisfies every facet (then only incidences
/// are updated) or the visible facets are replaced by the cone over the
/// horizon ridges.
fn insert_point(points: &PointList, facets: &mut Vec<Facet>, p_idx: usize) -> Result<()> {
    let p = points.point(p_idx);
    let evals: Vec<Wide> = facets
        .iter()
        .map(|f| f.eval(p))
        .collect::<Result<_>>()?;
    if evals.iter().all(|&e| e >= 0) {
        for (f, &e) in facets.iter_mut().zip(&evals) {
            if e == 0 {
                f.incidence.set(p_idx);
            }
        }
        return Ok(());
    }

    let visible: Vec<usize> = (0..facets.len()).filter(|&i| evals[i] < 0).collect();
    let kept: Vec<usize> = (0..facets.len()).filter(|&i| evals[i] >= 0).collect();

    if points.dim == 1 {
        // Facets are single points; the violated bound simply moves to p.
        for &fv in &visible {
            let f = &mut facets[fv];
            f.c = num::narrow(
                num::wsub(0, num::dot(&f.normal, p, "bound move")?, "bound move")?,
                "bound move",
            )?;
            f.incidence = Bits::new(points.len());
            f.incidence.set(p_idx);
        }
        return Ok(());
    }

    let mut new_facets: Vec<Facet> = Vec::new();
    for &fv in &visible {
        for &fk in &kept {
            // A facet touching p (eval zero) stays and absorbs the ridge; it
            // cannot serve as a horizon partner.
            if evals[fk] == 0 {
                continue;
            }
            let ridge = facets[fv].incidence.and(&facets[fk].incidence);
            if ridge.is_empty() {
                continue;
            }
            // Combinatorial adjacency: the ridge is genuine unless a third
            // facet's incidence set contains it.
            let adjacent = (0..facets.len()).all(|fo| {
                fo == fv || fo == fk || !ridge.is_subset(&facets[fo].incidence)
            });
            if !adjacent {
                continue;
            }
            let ev = evals[fv];
            let ek = evals[fk];
            debug_assert!(ev < 0 && ek > 0, "horizon pair with wrong visibility");
            let nf = join_facets(&facets[fv], &facets[fk], ev, ek, &ridge, p_idx)?;
            merge_new_facet(&mut new_facets, nf);
        }
    }
    if new_facets.is_empty() {
        // Legitimate when every horizon ridge lies inside touching facets:
        // those extend to absorb p.  Then p must come out as a vertex, i.e.
        // the touching normals span the dual space.
        let touching: Vec<Vec<Int>> = kept
            .iter()
            .filter(|&&fk| evals[fk] == 0)
            .map(|&fk| facets[fk].normal.clone())
            .collect();
        if touching.len() < points.dim || Mat::from_rows(&touching).rank()? < points.dim {
            return Err(Error::internal(
                "no horizon found for exterior point".to_string(),
            ));
        }
    }

    let mut out = Vec::with_capacity(kept.len() + new_facets.len());
    for &fk in &kept {
        let mut f = facets[fk].clone();
        if evals[fk] == 0 {
            f.incidence.set(p_idx);
        }
        out.push(f);
    }
    out.extend(new_facets);
    *facets = out;
    Ok(())
}

/// New facet through a horizon ridge and the inserted point, as the positive
/// combination `ek * visible - ev * kept` of the two adjacent equations.
fn join_facets(
    fvis: &Facet,
    fkeep: &Facet,
    ev: Wide,
    ek: Wide,
    ridge: &Bits,
    p_idx: usize,
) -> Result<Facet> {
    let n = fvis.normal.len();
    let mut wide_normal = Vec::with_capacity(n);
    for i in 0..n {
        let a = num::wmul(ek, fvis.normal[i] as Wide, "facet join")?;
        let b = num::wmul(ev, fkeep.normal[i] as Wide, "facet join")?;
        wide_normal.push(num::wsub(a, b, "facet join")?);
    }
    let a = num::wmul(ek, fvis.c as Wide, "facet join")?;
    let b = num::wmul(ev, fkeep.c as Wide, "facet join")?;
    let mut wide_c = num::wsub(a, b, "facet join")?;

    let mut g: Wide = 0;
    for &x in &wide_normal {
        g = num::wgcd(g, x);
    }
    if g == 0 {
        return Err(Error::internal("zero normal from facet join".to_string()));
    }
    for x in &mut wide_normal {
        *x /= g;
    }
    wide_c = num::div_exact(wide_c, g, "facet join offset")?;

    let normal: Vec<Int> = wide_normal
        .into_iter()
        .map(|x| num::narrow(x, "facet join"))
        .collect::<Result<_>>()?;
    let c = num::narrow(wide_c, "facet join")?;
    let mut incidence = ridge.clone();
    incidence.set(p_idx);
    Ok(Facet {
        normal,
        c,
        incidence,
    })
}

/// Coplanar horizon ridges produce the same equation more than once; merge
/// their incidence sets instead of keeping duplicates.
fn merge_new_facet(new_facets: &mut Vec<Facet>, nf: Facet) {
    for f in new_facets.iter_mut() {
        if f.normal == nf.normal && f.c == nf.c {
            f.incidence.or_with(&nf.incidence);
            return;
        }
    }
    new_facets.push(nf);
}

/// A pool point is a vertex when its containing facet normals span the full
/// dual space.
fn extract_vertices(points: &PointList, facets: &[Facet]) -> Result<Vec<usize>> {
    let n = points.dim;
    let mut vertices = Vec::new();
    for i in 0..points.len() {
        let on: Vec<Vec<Int>> = facets
            .iter()
            .filter(|f| f.incidence.get(i))
            .map(|f| f.normal.clone())
            .collect();
        if on.len() >= n && Mat::from_rows(&on).rank()? == n {
            vertices.push(i);
        }
    }
    Ok(vertices)
}
