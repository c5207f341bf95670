//! IP simplices, sublattice quotient actions, and fibration structure.
//!
//! All routines work on the dual side: the reference list holds the nonzero
//! lattice points (or vertices) of P*, and fibers are intersections of P*
//! with linear subspaces.  The dual of such a fiber is the projection of P
//! along the subspace, which keeps every computation exact.

use crate::bits::Bits;
use crate::complete;
use crate::config;
use crate::error::{Error, Result};
use crate::hull::{self, Hull};
use crate::mat::Mat;
use crate::num::{self, Int};
use crate::point::PointList;

/// Simplex spanned by reference points with the origin in its relative
/// interior: a positive primitive relation `sum weights[k] * refs[points[k]] = 0`.
#[derive(Debug, Clone)]
pub struct IpSimplex {
    /// Ascending indices into the reference list.
    pub points: Vec<usize>,
    /// Parallel to `points`; all positive, gcd one.
    pub weights: Vec<Int>,
    pub d: Int,
    /// n - (#points - 1).
    pub codim: usize,
}

impl IpSimplex {
    /// Weight of reference point `i`, zero when the point is not used.
    pub fn weight_of(&self, i: usize) -> Int {
        match self.points.binary_search(&i) {
            Ok(k) => self.weights[k],
            Err(_) => 0,
        }
    }
}

/// Cyclic factor of (span cap N) / <simplex points>, as residues of every
/// reference point (zero for points outside the saturated span).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeAction {
    pub order: Int,
    pub residues: Vec<Int>,
}

/// Point and vertex counts of a fiber (`n_*`) and of its dual (`m_*`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiberStats {
    pub m_points: usize,
    pub m_vertices: usize,
    pub n_points: usize,
    pub n_vertices: usize,
}

/// One fiber of a fibration: the reflexive section of P* by a subspace.
#[derive(Debug, Clone)]
pub struct FiberLevel {
    pub codim: usize,
    /// Ascending reference indices of the nonzero fiber points.
    pub members: Vec<usize>,
    pub stats: FiberStats,
}

/// A fibration record: one fiber, or a nested pair (innermost first).
#[derive(Debug, Clone)]
pub struct Fibration {
    pub levels: Vec<FiberLevel>,
    /// Unimodular map to fiber-adapted coordinates; the innermost fiber
    /// spans the first coordinates, each outer level the next block.
    pub basis: Mat,
    /// Reference indices in presentation order: innermost fiber first,
    /// then each completion, then the remaining points, each ascending.
    pub perm: Vec<usize>,
}

impl Fibration {
    pub fn inner(&self) -> &FiberLevel {
        &self.levels[0]
    }
}

fn cap_check(len: usize) -> Result<()> {
    if len > config::SIMP_CAND_MAX {
        return Err(Error::Capacity {
            param: config::SIMP_CAND_MAX_NAME,
            needed: len,
        });
    }
    Ok(())
}

fn col_matrix(refs: &PointList, idx: &[usize]) -> Mat {
    let n = refs.dim;
    let mut m = Mat::zero(n, idx.len());
    for (j, &k) in idx.iter().enumerate() {
        let p = refs.point(k);
        for i in 0..n {
            m.set(i, j, p[i]);
        }
    }
    m
}

/// Every coordinate must vanish or change sign over the subset, otherwise a
/// positive vanishing combination cannot exist.
fn sign_feasible(refs: &PointList, idx: &[usize]) -> bool {
    let n = refs.dim;
    for i in 0..n {
        let mut neg = false;
        let mut pos = false;
        for &k in idx {
            let v = refs.point(k)[i];
            neg |= v < 0;
            pos |= v > 0;
        }
        if pos != neg {
            return false;
        }
    }
    true
}

/// All IP simplices over the reference points.  `max_codim` of `None` keeps
/// every codimension (display mode); `Some(c)` keeps `1 <= codim <= c`.
/// Sorted by codimension, then by index set.
pub fn ip_simplices(refs: &PointList, max_codim: Option<usize>) -> Result<Vec<IpSimplex>> {
    cap_check(refs.len())?;
    let n = refs.dim;
    let m = refs.len();
    // codim = n + 1 - size, given that a simplex subset has rank size - 1.
    let (size_min, size_max) = match max_codim {
        None => (2, n + 1),
        Some(c) => (if c >= n { 2 } else { n + 1 - c }, n),
    };
    let mut out = Vec::new();
    let mut idx = Vec::new();
    for s in size_min..=size_max.min(m) {
        subsets(m, s, &mut idx, &mut |sel| {
            if let Some(sx) = try_simplex(refs, sel)? {
                out.push(sx);
            }
            Ok(())
        })?;
    }
    out.sort_by(|a, b| (a.codim, &a.points).cmp(&(b.codim, &b.points)));
    Ok(out)
}

fn try_simplex(refs: &PointList, idx: &[usize]) -> Result<Option<IpSimplex>> {
    if !sign_feasible(refs, idx) {
        return Ok(None);
    }
    let mat = col_matrix(refs, idx);
    let ker = mat.kernel()?;
    if ker.cols != 1 {
        return Ok(None);
    }
    let mut w: Vec<Int> = (0..idx.len()).map(|i| ker.at(i, 0)).collect();
    if w.iter().any(|&x| x == 0) {
        return Ok(None);
    }
    if w[0] < 0 {
        for x in w.iter_mut() {
            *x = num::sub(0, *x, "simplex weight")?;
        }
    }
    if w.iter().any(|&x| x < 0) {
        return Ok(None);
    }
    let g = num::gcd_slice(&w);
    if g > 1 {
        for x in w.iter_mut() {
            *x /= g;
        }
    }
    let mut d: Int = 0;
    for &x in &w {
        d = num::add(d, x, "simplex degree")?;
    }
    let codim = refs.dim + 1 - idx.len();
    Ok(Some(IpSimplex {
        points: idx.to_vec(),
        weights: w,
        d,
        codim,
    }))
}

/// Nontrivial cyclic factors of (span cap Z^n) / <simplex points>, presented
/// as column residues: a generator of the factor of order `m` is
/// `sum_j (residues[j] / m) * refs[j]`, with zero entries off the simplex.
pub fn simplex_quotient(refs: &PointList, sx: &IpSimplex) -> Result<Vec<LatticeAction>> {
    let gen = col_matrix(refs, &sx.points);
    let sm = gen.smith()?;
    // Dividing column i of the Smith V by divisor i expresses the i-th
    // generator of the quotient in the simplex points.
    let mut shift = vec![0 as Int; refs.len()];
    for (j, &pt) in sx.points.iter().enumerate() {
        shift[pt] = sx.weights[j];
    }
    let mut out = Vec::new();
    for (i, &m) in sm.divisors.iter().enumerate() {
        if m <= 1 {
            continue;
        }
        let mut res = vec![0 as Int; refs.len()];
        for (j, &pt) in sx.points.iter().enumerate() {
            res[pt] = num::rem_euclid(sm.v.at(j, i), m);
        }
        out.push(LatticeAction {
            order: m,
            residues: canonical_residues(m, &res, &shift),
        });
    }
    Ok(out)
}

/// Lexicographically smallest presentation of a residue vector over unit
/// multiples mod `m` and shifts by the vanishing relation `shift`.
fn canonical_residues(m: Int, res: &[Int], shift: &[Int]) -> Vec<Int> {
    let mut best: Option<Vec<Int>> = None;
    for u in 1..m {
        if num::gcd(u, m) != 1 {
            continue;
        }
        for t in 0..m {
            let cand: Vec<Int> = res
                .iter()
                .zip(shift)
                .map(|(&r, &s)| num::rem_euclid(r * u + s * t, m))
                .collect();
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_else(|| res.to_vec())
}

/// Saturated basis of the linear span of the chosen reference points, as
/// matrix columns; `None` when the span has lower rank than `want_dim`.
fn span_basis(refs: &PointList, idx: &[usize], want_dim: usize) -> Result<Option<Mat>> {
    let mat = col_matrix(refs, idx);
    // Orthogonal complement, then its kernel: saturated by construction.
    let comp = mat.transpose().kernel()?;
    let n = refs.dim;
    if n - comp.cols != want_dim {
        return Ok(None);
    }
    let basis = comp.transpose().kernel()?;
    debug_assert_eq!(basis.cols, want_dim);
    Ok(Some(basis))
}

/// Canonical key of the lattice spanned by the columns (column Hermite form).
fn span_key(basis: &Mat) -> Result<Vec<Int>> {
    Ok(basis.col_hermite()?.h.a)
}

/// Unimodular `u` such that `u * p` has zeros beyond the first `f`
/// coordinates exactly for points `p` in the span of `basis` (n x f).
fn adapting_map(basis: &Mat) -> Result<Mat> {
    let sm = basis.smith()?;
    if sm.divisors.iter().any(|&d| d != 1) {
        return Err(Error::internal("fiber span basis not saturated"));
    }
    Ok(sm.u)
}

struct LevelData {
    level: FiberLevel,
    map: Mat,
}

/// Analyze the section of P* by the span: project the vertices of P to the
/// first `f` adapted coordinates and test the projection for reflexivity.
/// The projection is the dual of the fiber, so the fiber is reflexive
/// exactly when the projection is.
fn analyze_span(
    p_vertices: &PointList,
    refs: &PointList,
    basis: &Mat,
) -> Result<Option<LevelData>> {
    let map = adapting_map(basis)?;
    match level_from_map(p_vertices, refs, &map, basis.cols)? {
        Some(level) => Ok(Some(LevelData { level, map })),
        None => Ok(None),
    }
}

fn presentation_perm(levels: &[FiberLevel], n_refs: usize) -> Vec<usize> {
    let mut perm = Vec::with_capacity(n_refs);
    let mut seen = Bits::new(n_refs);
    for lv in levels {
        for &i in &lv.members {
            if !seen.get(i) {
                seen.set(i);
                perm.push(i);
            }
        }
    }
    for i in 0..n_refs {
        if !seen.get(i) {
            perm.push(i);
        }
    }
    perm
}

fn single_level(ld: LevelData, n_refs: usize) -> Fibration {
    let perm = presentation_perm(std::slice::from_ref(&ld.level), n_refs);
    Fibration {
        levels: vec![ld.level],
        basis: ld.map,
        perm,
    }
}

/// Fibrations found from the subspaces spanned by IP simplices of codimension
/// at most `max_codim`.  Results follow the simplex order; subspaces seen
/// twice are reported once.
pub fn fiber_scan(
    p_vertices: &PointList,
    refs: &PointList,
    simplices: &[IpSimplex],
    max_codim: usize,
) -> Result<Vec<Fibration>> {
    let n = refs.dim;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for sx in simplices {
        if sx.codim < 1 || sx.codim > max_codim {
            continue;
        }
        let basis = match span_basis(refs, &sx.points, n - sx.codim)? {
            Some(b) => b,
            None => continue,
        };
        if !seen.insert(span_key(&basis)?) {
            continue;
        }
        if let Some(ld) = analyze_span(p_vertices, refs, &basis)? {
            out.push(single_level(ld, refs.len()));
        }
    }
    Ok(out)
}

/// Distinct reflexive sections of the given codimension, as saturated span
/// bases keyed for deduplication.  Candidates are spans of subsets of the
/// reference points restricted to `within` (all points when `None`).
fn reflexive_sections(
    p_vertices: &PointList,
    refs: &PointList,
    codim: usize,
    within: Option<&[usize]>,
) -> Result<Vec<(Vec<Int>, Mat, LevelData)>> {
    let n = refs.dim;
    if codim == 0 || codim >= n {
        return Ok(Vec::new());
    }
    let f = n - codim;
    let pool: Vec<usize> = match within {
        Some(w) => w.to_vec(),
        None => (0..refs.len()).collect(),
    };
    let mut found: Vec<(Vec<Int>, Mat, LevelData)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut idx = vec![0usize; f];
    subsets(pool.len(), f, &mut idx, &mut |sel: &[usize]| {
        let chosen: Vec<usize> = sel.iter().map(|&k| pool[k]).collect();
        let basis = match span_basis(refs, &chosen, f)? {
            Some(b) => b,
            None => return Ok(()),
        };
        let key = span_key(&basis)?;
        if !seen.insert(key.clone()) {
            return Ok(());
        }
        if let Some(ld) = analyze_span(p_vertices, refs, &basis)? {
            found.push((key, basis, ld));
        }
        Ok(())
    })?;
    Ok(found)
}

fn subsets(
    m: usize,
    k: usize,
    idx: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    fn rec(
        m: usize,
        k: usize,
        start: usize,
        idx: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if idx.len() == k {
            return visit(idx);
        }
        let need = k - idx.len();
        for i in start..=m.saturating_sub(need) {
            idx.push(i);
            rec(m, k, i + 1, idx, visit)?;
            idx.pop();
        }
        Ok(())
    }
    idx.clear();
    rec(m, k, 0, idx, visit)
}

/// Exhaustive fibration search.  `spec` is one of 11, 22, 33 (single fiber of
/// codimension 1, 2, 3) or 12, 23 (nested fiber pairs); records are sorted by
/// presentation permutation.
pub fn all_fibrations(
    p_vertices: &PointList,
    refs: &PointList,
    spec: u32,
) -> Result<Vec<Fibration>> {
    cap_check(refs.len())?;
    let (outer_cd, inner_cd) = match spec {
        11 => (1, None),
        22 => (2, None),
        33 => (3, None),
        12 => (1, Some(2)),
        23 => (2, Some(3)),
        _ => {
            return Err(Error::unsupported(
                "fibration spec must be one of 11, 22, 33, 12, 23",
            ))
        }
    };
    let n = refs.dim;
    let mut out = Vec::new();
    match inner_cd {
        None => {
            for (_, _, ld) in reflexive_sections(p_vertices, refs, outer_cd, None)? {
                out.push(single_level(ld, refs.len()));
            }
        }
        Some(icd) => {
            for (_, _, outer) in reflexive_sections(p_vertices, refs, outer_cd, None)? {
                let inner_hits =
                    reflexive_sections(p_vertices, refs, icd, Some(&outer.level.members))?;
                for (_, ibasis, _) in inner_hits {
                    // Adapt the chain: inner fiber to the first coordinates
                    // inside the outer block, outer block unchanged beyond.
                    let f_out = n - outer_cd;
                    let f_in = n - icd;
                    let mut img = Mat::zero(f_out, ibasis.cols);
                    let outer_map = &outer.map;
                    for j in 0..ibasis.cols {
                        let y = outer_map.mul_vec(&ibasis.col(j))?;
                        if y[f_out..].iter().any(|&c| c != 0) {
                            return Err(Error::internal("nested fiber outside outer span"));
                        }
                        for i in 0..f_out {
                            img.set(i, j, y[i]);
                        }
                    }
                    let inner_adapt = adapting_map(&img)?;
                    let mut chain = Mat::identity(n);
                    for i in 0..f_out {
                        for j in 0..f_out {
                            chain.set(i, j, inner_adapt.at(i, j));
                        }
                    }
                    let chain = chain.mul(outer_map)?;
                    // Recompute both levels against the chained map.
                    let inner_level =
                        level_from_map(p_vertices, refs, &chain, f_in)?.ok_or_else(|| {
                            Error::internal("nested fiber lost reflexivity under chain map")
                        })?;
                    let outer_level = FiberLevel {
                        codim: outer_cd,
                        members: outer.level.members.clone(),
                        stats: outer.level.stats,
                    };
                    let levels = vec![inner_level, outer_level];
                    let perm = presentation_perm(&levels, refs.len());
                    out.push(Fibration {
                        levels,
                        basis: chain,
                        perm,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.perm.cmp(&b.perm));
    Ok(out)
}

/// Rebuild a fiber level from an adapted map whose first `f` coordinates span
/// the fiber subspace.
fn level_from_map(
    p_vertices: &PointList,
    refs: &PointList,
    map: &Mat,
    f: usize,
) -> Result<Option<FiberLevel>> {
    let n = refs.dim;
    let proj = project_dual(p_vertices, map, f)?;
    let q_hull = hull::convex_hull(&proj)?;
    if !q_hull.is_reflexive() {
        return Ok(None);
    }
    let ineqs: Vec<(Vec<Int>, Int)> = q_hull
        .facets
        .iter()
        .map(|fc| (fc.normal.clone(), fc.c))
        .collect();
    let m_points = complete::count_lattice_points(f, &ineqs)?;
    let n_points = complete::dual_points(&proj, &q_hull)?.len();
    let mut members = Vec::new();
    for (i, q) in refs.iter().enumerate() {
        let y = map.mul_vec(q)?;
        if y[f..n].iter().all(|&c| c == 0) {
            members.push(i);
        }
    }
    Ok(Some(FiberLevel {
        codim: n - f,
        members,
        stats: FiberStats {
            m_points,
            m_vertices: q_hull.vertices.len(),
            n_points,
            n_vertices: q_hull.facets.len(),
        },
    }))
}

/// Vertices of P pushed down to the first `f` fiber-adapted coordinates:
/// the vertex set of the dual of the fiber cut out by `map`.
fn project_dual(p_vertices: &PointList, map: &Mat, f: usize) -> Result<PointList> {
    let dual_map = map.inverse_unimodular()?.transpose();
    let mut proj = PointList::new(f);
    for v in p_vertices.iter() {
        let x = dual_map.mul_vec(v)?;
        proj.push(&x[..f]);
    }
    Ok(proj.dedup())
}

/// Full point set of the dual of fiber level `k`: the projection of P along
/// the fiber subspace, completed from its vertices.
pub fn level_polytope(fb: &Fibration, k: usize, p_vertices: &PointList) -> Result<PointList> {
    let f = p_vertices.dim - fb.levels[k].codim;
    let proj = project_dual(p_vertices, &fb.basis, f)?;
    let q_hull = hull::convex_hull(&proj)?;
    let ineqs: Vec<(Vec<Int>, Int)> = q_hull
        .facets
        .iter()
        .map(|fc| (fc.normal.clone(), fc.c))
        .collect();
    complete::lattice_points(f, &ineqs)
}

/// Reference points in presentation order, in fiber-adapted coordinates, as
/// matrix columns.
pub fn adapted_matrix(fb: &Fibration, refs: &PointList) -> Result<Mat> {
    let n = refs.dim;
    let mut m = Mat::zero(n, fb.perm.len());
    for (j, &k) in fb.perm.iter().enumerate() {
        let y = fb.basis.mul_vec(refs.point(k))?;
        for i in 0..n {
            m.set(i, j, y[i]);
        }
    }
    Ok(m)
}

/// A lattice refinement of N that adds no points to P* (a free quotient of
/// the Calabi-Yau hypersurface).  The sublattice of M is described by
/// congruences on M coordinates.
#[derive(Debug, Clone)]
pub struct FreeQuotient {
    pub index: Int,
    /// Rows form a basis of the sublattice M' of M.
    pub m_basis: Mat,
    /// Congruences cutting M' out of M, unit-normalized.
    pub actions: Vec<LatticeAction>,
    /// Set when the refinement only adds facet-interior points to P*.
    pub weak_only: bool,
}

pub(crate) const QUOTIENT_GROUP_MAX: Int = 1_000_000;

/// Scan intermediate lattices between the vertex lattice of P and M for
/// refinements of N that keep the dual point set: strict hits add no points
/// at all, weak hits (reported with `weak_only` when `weak` is set) add
/// points only to facet interiors of P*.
pub fn free_quotient_scan(points: &PointList, p_hull: &Hull, weak: bool) -> Result<Vec<FreeQuotient>> {
    let n = points.dim;
    if !p_hull.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let verts = points.select(&p_hull.vertices);
    let sm = verts.as_col_matrix().smith()?;
    if sm.divisors.len() != n {
        return Err(Error::internal("vertex lattice not full rank"));
    }
    let mut group_order: Int = 1;
    for &d in &sm.divisors {
        group_order = num::mul(group_order, d, "vertex lattice index")?;
    }
    if group_order > QUOTIENT_GROUP_MAX {
        return Err(Error::unsupported(
            "vertex lattice index too large for the quotient scan",
        ));
    }
    // Smith coordinates turn the vertex lattice into diag(divisors) * Z^n, so
    // intermediate lattices are enumerable at finite-group scale.
    let mut yverts = PointList::with_capacity(n, verts.len());
    for v in verts.iter() {
        yverts.push(&sm.u.mul_vec(v)?);
    }
    let u_inv = sm.u.inverse_unimodular()?;
    let base_count = complete::dual_points(points, p_hull)?.len();
    let mut out = Vec::new();
    let mut m = 2;
    while m <= group_order {
        if group_order % m == 0 {
            scan_index(&yverts, &sm.divisors, &sm.u, &u_inv, m, base_count, weak, &mut out)?;
        }
        m += 1;
    }
    Ok(out)
}

fn scan_index(
    yverts: &PointList,
    divisors: &[Int],
    u: &Mat,
    u_inv: &Mat,
    index: Int,
    base_count: usize,
    weak: bool,
    out: &mut Vec<FreeQuotient>,
) -> Result<()> {
    let n = yverts.dim;
    for h in crate::mat::intermediate_bases(divisors, index) {
        // Columns of `h` span the candidate M' in Smith coordinates; the
        // vertices of P are contained by construction and their
        // M'-coordinates are adj(h) * y / det(h).
        let (adj, det) = h.adjugate_det()?;
        let mut ineqs: Vec<(Vec<Int>, Int)> = Vec::with_capacity(yverts.len());
        for v in yverts.iter() {
            let y = adj.mul_vec(v)?;
            let mut w = Vec::with_capacity(n);
            for &c in &y {
                let cw = c as crate::num::Wide;
                if cw % det != 0 {
                    return Err(Error::internal("intermediate lattice missing a vertex"));
                }
                w.push(num::narrow(cw / det, "refined vertex")?);
            }
            ineqs.push((w, 1));
        }
        // Dual points of P with respect to the refined lattice N' dual to M'.
        let refined = complete::lattice_points(n, &ineqs)?;
        let extra = refined.len() - base_count;
        let weak_only = if extra == 0 {
            false
        } else if weak && new_points_on_facet_interiors(&refined, &ineqs, &adj, det)? {
            true
        } else {
            continue;
        };
        // Congruences cutting M' out of M: Smith of h in y-coordinates,
        // composed with the map to y.
        let smh = h.smith()?;
        let rows = smh.u.mul(u)?;
        let mut actions = Vec::new();
        for (i, &d) in smh.divisors.iter().enumerate() {
            if d <= 1 {
                continue;
            }
            let row: Vec<Int> = (0..n).map(|j| num::rem_euclid(rows.at(i, j), d)).collect();
            actions.push(LatticeAction {
                order: d,
                residues: canonical_residues(d, &row, &vec![0; n]),
            });
        }
        out.push(FreeQuotient {
            index,
            m_basis: u_inv.mul(&h)?.transpose(),
            actions,
            weak_only,
        });
    }
    Ok(())
}

/// Check that every dual point added by the refinement lies in the relative
/// interior of a facet of P*, i.e. is tight on exactly one vertex inequality.
/// A point belongs to the unrefined N exactly when adj(b)^T maps it into
/// det(b) * Z^n.
fn new_points_on_facet_interiors(
    refined: &PointList,
    ineqs: &[(Vec<Int>, Int)],
    adj: &Mat,
    det: crate::num::Wide,
) -> Result<bool> {
    let adj_t = adj.transpose();
    'next: for y in refined.iter() {
        let back = adj_t.mul_vec(y)?;
        if back.iter().all(|&c| (c as crate::num::Wide) % det == 0) {
            continue 'next; // an old point of N
        }
        let mut tight = 0usize;
        for (a, c) in ineqs {
            let v = num::dot(a, y, "refined point")? + *c as crate::num::Wide;
            if v == 0 {
                tight += 1;
            }
        }
        if tight != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lattice points of P on the sublattice of a free quotient, in sublattice
/// coordinates: the point set of the quotient polytope.
pub fn quotient_polytope(points: &PointList, fq: &FreeQuotient) -> Result<PointList> {
    let n = points.dim;
    let b = fq.m_basis.transpose();
    let (adj, det) = b.adjugate_det()?;
    let mut out = PointList::new(n);
    'next: for p in points.iter() {
        let y = adj.mul_vec(p)?;
        let mut w = Vec::with_capacity(n);
        for &c in &y {
            let cw = c as crate::num::Wide;
            if cw % det != 0 {
                continue 'next;
            }
            w.push(num::narrow(cw / det, "quotient point")?);
        }
        out.push(&w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cws::{realize, Cws, Quotient, WeightRow};
    use crate::hodge::{hodge_numbers, HodgeData};
    use crate::hull::convex_hull;

    struct Setup {
        points: PointList,
        hull: Hull,
        p_verts: PointList,
        /// Nonzero points of the dual, scan references.
        refs: PointList,
        /// Vertices of the dual.
        dual_verts: PointList,
    }

    fn setup(cws: &Cws) -> Setup {
        let g = realize(cws).unwrap();
        let hull = convex_hull(&g.points).unwrap();
        let p_verts = g.points.select(&hull.vertices);
        let dual = crate::complete::dual_points(&g.points, &hull).unwrap();
        let nonzero: Vec<usize> = (0..dual.len())
            .filter(|&i| dual.point(i).iter().any(|&c| c != 0))
            .collect();
        let refs = dual.select(&nonzero);
        let dh = convex_hull(&dual).unwrap();
        let dual_verts = dual.select(&dh.vertices);
        Setup {
            points: g.points,
            hull,
            p_verts,
            refs,
            dual_verts,
        }
    }

    fn weight_multisets(sx: &[IpSimplex], n_refs: usize) -> Vec<(usize, Int, Vec<Int>)> {
        let mut v: Vec<(usize, Int, Vec<Int>)> = sx
            .iter()
            .map(|s| {
                let mut w: Vec<Int> = (0..n_refs).map(|i| s.weight_of(i)).collect();
                w.sort();
                (s.codim, s.d, w)
            })
            .collect();
        v.sort();
        v
    }

    fn sorted_residues(a: &LatticeAction) -> Vec<Int> {
        let mut r = a.residues.clone();
        r.sort();
        r
    }

    #[test]
    fn weighted_projective_chain_simplices() {
        // Two weight rows sharing a column; the dual has seven vertices
        // carrying both weight systems as vanishing relations.
        let cws = Cws {
            rows: vec![
                WeightRow {
                    d: 7,
                    w: vec![2, 1, 1, 1, 1, 1, 0],
                },
                WeightRow {
                    d: 2,
                    w: vec![1, 0, 0, 0, 0, 0, 1],
                },
            ],
            ncols: 7,
            quotients: vec![],
        };
        let s = setup(&cws);
        assert_eq!(s.points.len(), 491);
        assert_eq!(s.refs.len(), 7);
        assert_eq!(s.dual_verts.len(), 7);
        let sx = ip_simplices(&s.dual_verts, None).unwrap();
        assert_eq!(
            weight_multisets(&sx, 7),
            vec![
                (0, 7, vec![0, 1, 1, 1, 1, 1, 2]),
                (4, 2, vec![0, 0, 0, 0, 0, 1, 1]),
            ]
        );
    }

    #[test]
    fn quartic_quotient_simplex_action() {
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
        let s = setup(&cws);
        let sx = ip_simplices(&s.dual_verts, None).unwrap();
        assert_eq!(weight_multisets(&sx, 4), vec![(0, 4, vec![1, 1, 1, 1])]);
        let acts = simplex_quotient(&s.dual_verts, &sx[0]).unwrap();
        assert_eq!(acts.len(), 1);
        assert_eq!(acts[0].order, 2);
        assert_eq!(sorted_residues(&acts[0]), vec![0, 0, 1, 1]);
        // The residues express an actual glue point: sum r_j v_j / 2 is a
        // lattice point outside the lattice the vertices generate.
        let mut glue = vec![0 as Int; 3];
        for (j, r) in acts[0].residues.iter().enumerate() {
            for (i, &c) in s.dual_verts.point(j).iter().enumerate() {
                glue[i] += r * c;
            }
        }
        assert!(glue.iter().all(|&c| c % 2 == 0));
        let half: Vec<Int> = glue.iter().map(|&c| c / 2).collect();
        let sm = s.dual_verts.as_col_matrix().smith().unwrap();
        let y = sm.u.mul_vec(&half).unwrap();
        let in_lattice = sm
            .divisors
            .iter()
            .enumerate()
            .all(|(i, &d)| y[i] % d == 0);
        assert!(!in_lattice);
    }

    #[test]
    fn cross_polytope_edge_simplices() {
        let refs = PointList::from_rows(
            2,
            &[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
        );
        let sx = ip_simplices(&refs, None).unwrap();
        assert_eq!(
            weight_multisets(&sx, 4),
            vec![(1, 2, vec![0, 0, 1, 1]), (1, 2, vec![0, 0, 1, 1])]
        );
        assert_eq!(sx[0].points, vec![0, 1]);
        assert_eq!(sx[1].points, vec![2, 3]);
        let capped = ip_simplices(&refs, Some(1)).unwrap();
        assert_eq!(capped.len(), 2);
    }

    fn product_of_planes() -> Cws {
        Cws {
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
            quotients: vec![],
        }
    }

    #[test]
    fn product_of_planes_fiber_scan() {
        let s = setup(&product_of_planes());
        assert_eq!(s.points.len(), 100);
        assert_eq!(s.refs.len(), 6);
        let sx = ip_simplices(&s.refs, Some(2)).unwrap();
        assert_eq!(
            weight_multisets(&sx, 6),
            vec![
                (2, 3, vec![0, 0, 0, 1, 1, 1]),
                (2, 3, vec![0, 0, 0, 1, 1, 1]),
            ]
        );
        let fbs = fiber_scan(&s.p_verts, &s.refs, &sx, 2).unwrap();
        assert_eq!(fbs.len(), 2);
        let mut seen = std::collections::BTreeSet::new();
        for fb in &fbs {
            assert_eq!(fb.levels.len(), 1);
            let lv = fb.inner();
            assert_eq!(lv.codim, 2);
            assert_eq!(
                lv.stats,
                FiberStats {
                    m_points: 10,
                    m_vertices: 3,
                    n_points: 4,
                    n_vertices: 3
                }
            );
            assert_eq!(lv.members.len(), 3);
            for &m in &lv.members {
                assert!(seen.insert(m));
            }
            // Adapted coordinates vanish beyond the fiber block.
            let am = adapted_matrix(fb, &s.refs).unwrap();
            for j in 0..3 {
                for i in 2..4 {
                    assert_eq!(am.at(i, j), 0);
                }
            }
        }
        assert_eq!(seen.len(), 6);
        // The exhaustive search finds the same two fibrations.
        let all = all_fibrations(&s.p_verts, &s.refs, 22).unwrap();
        assert_eq!(all.len(), 2);
        let key = |f: &Fibration| (f.inner().members.clone(), f.inner().stats);
        let mut a: Vec<_> = fbs.iter().map(key).collect();
        let mut b: Vec<_> = all.iter().map(key).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_scan_matches_annotated_weights() {
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
        let s = setup(&cws);
        assert_eq!(s.refs.len(), 6);
        let sx = ip_simplices(&s.refs, None).unwrap();
        assert_eq!(
            weight_multisets(&sx, 6),
            vec![
                (0, 9, vec![0, 1, 1, 1, 3, 3]),
                (2, 3, vec![0, 0, 0, 1, 1, 1]),
            ]
        );
        let big = sx.iter().find(|x| x.codim == 0).unwrap();
        let acts = simplex_quotient(&s.refs, big).unwrap();
        assert_eq!(acts.len(), 1);
        assert_eq!(acts[0].order, 3);
        assert_eq!(sorted_residues(&acts[0]), vec![0, 0, 1, 1, 2, 2]);
        // The triangle generates its whole span lattice: no quotient.
        let small = sx.iter().find(|x| x.codim == 2).unwrap();
        assert!(simplex_quotient(&s.refs, small).unwrap().is_empty());
        // One elliptic fibration, the cubic curve.
        let all = all_fibrations(&s.p_verts, &s.refs, 22).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(
            all[0].inner().stats,
            FiberStats {
                m_points: 10,
                m_vertices: 3,
                n_points: 4,
                n_vertices: 3
            }
        );
        assert_eq!(all[0].inner().members.len(), 3);
    }

    #[test]
    fn nested_fibration_records() {
        // A four-dimensional reflexive polytope given by its dual points.
        let refs_in = PointList::from_rows(
            4,
            &[
                vec![1, 0, 0, 0],
                vec![-1, 2, 0, 0],
                vec![0, -1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 2, -1, 0],
                vec![1, 1, 1, 2],
                vec![-1, -1, -1, -2],
            ],
        );
        let nh = convex_hull(&refs_in).unwrap();
        assert!(nh.is_reflexive());
        let ineqs: Vec<(Vec<Int>, Int)> = nh
            .facets
            .iter()
            .map(|f| (f.normal.clone(), f.c))
            .collect();
        let npts = crate::complete::lattice_points(4, &ineqs).unwrap();
        assert_eq!(npts.len(), 9);
        assert_eq!(nh.vertices.len(), 7);
        let mpts = crate::complete::dual_points(&npts, &convex_hull(&npts).unwrap()).unwrap();
        assert_eq!(mpts.len(), 53);
        let mh = convex_hull(&mpts).unwrap();
        assert_eq!(mh.vertices.len(), 10);
        let p_verts = mpts.select(&mh.vertices);
        let nonzero: Vec<usize> = (0..npts.len())
            .filter(|&i| npts.point(i).iter().any(|&c| c != 0))
            .collect();
        let refs = npts.select(&nonzero);
        assert_eq!(refs.len(), 8);

        let recs = all_fibrations(&p_verts, &refs, 12).unwrap();
        assert_eq!(recs.len(), 6);
        let mut stat_pairs = Vec::new();
        let mut inner_sets = std::collections::BTreeMap::new();
        let mut outer_sets = std::collections::BTreeMap::new();
        for fb in &recs {
            assert_eq!(fb.levels.len(), 2);
            let (inner, outer) = (&fb.levels[0], &fb.levels[1]);
            assert_eq!(inner.codim, 2);
            assert_eq!(outer.codim, 1);
            let iset: Vec<usize> = inner.members.clone();
            let oset: Vec<usize> = outer.members.clone();
            assert!(iset.iter().all(|i| oset.contains(i)));
            assert_eq!(iset.len(), 4);
            assert_eq!(oset.len(), 6);
            *inner_sets.entry(iset).or_insert(0) += 1;
            *outer_sets.entry(oset).or_insert(0) += 1;
            stat_pairs.push((
                (
                    inner.stats.m_points,
                    inner.stats.m_vertices,
                    inner.stats.n_points,
                    inner.stats.n_vertices,
                ),
                (
                    outer.stats.m_points,
                    outer.stats.m_vertices,
                    outer.stats.n_points,
                    outer.stats.n_vertices,
                ),
            ));
        }
        // Three elliptic curves, each inside two of the three K3 fibers.
        assert_eq!(inner_sets.len(), 3);
        assert!(inner_sets.values().all(|&c| c == 2));
        assert_eq!(outer_sets.len(), 3);
        assert!(outer_sets.values().all(|&c| c == 2));
        stat_pairs.sort();
        assert_eq!(
            stat_pairs,
            vec![
                ((9, 3, 5, 3), (27, 6, 7, 5)),
                ((9, 3, 5, 3), (27, 6, 7, 5)),
                ((9, 3, 5, 3), (35, 5, 7, 5)),
                ((9, 3, 5, 3), (35, 5, 7, 5)),
                ((9, 4, 5, 4), (27, 6, 7, 5)),
                ((9, 4, 5, 4), (27, 6, 7, 5)),
            ]
        );
        // K3 fibers re-analyzed as three-dimensional hypersurfaces.
        for fb in &recs {
            let q = level_polytope(fb, 1, &p_verts).unwrap();
            let qh = convex_hull(&q).unwrap();
            let qd = crate::complete::dual_points(&q, &qh).unwrap();
            let hd = hodge_numbers(&q, &qh, &qd).unwrap().unwrap();
            let expect = if fb.levels[1].stats.m_points == 35 {
                HodgeData::K3 { pic: 2, cor: 0 }
            } else {
                HodgeData::K3 { pic: 4, cor: 1 }
            };
            assert_eq!(hd, expect);
        }
    }

    #[test]
    fn quintic_has_no_fibrations() {
        let s = setup(&Cws::single(5, vec![1, 1, 1, 1, 1]));
        for spec in [22, 33] {
            assert!(all_fibrations(&s.p_verts, &s.refs, spec)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn free_quotient_quintic() {
        let s = setup(&Cws::single(5, vec![1, 1, 1, 1, 1]));
        // The free Z5 glue is unique up to coordinate symmetry: permuting the
        // five homogeneous phases gives a single orbit of six subgroups.
        let hits = free_quotient_scan(&s.points, &s.hull, false).unwrap();
        assert_eq!(hits.len(), 6);
        let mut nfs = std::collections::BTreeSet::new();
        for fq in &hits {
            assert_eq!(fq.index, 5);
            assert!(!fq.weak_only);
            assert_eq!(fq.actions.len(), 1);
            assert_eq!(fq.actions[0].order, 5);
            let q = quotient_polytope(&s.points, fq).unwrap();
            assert_eq!(q.len(), 26);
            nfs.insert(crate::nf::normal_form(&q, &convex_hull(&q).unwrap()).unwrap().mat.a);
        }
        assert_eq!(nfs.len(), 1);
        // Allowing facet-interior points changes nothing here.
        let weak = free_quotient_scan(&s.points, &s.hull, true).unwrap();
        assert_eq!(weak.len(), 6);
        assert!(weak.iter().all(|fq| !fq.weak_only));
        let q = quotient_polytope(&s.points, &hits[0]).unwrap();
        let qh = convex_hull(&q).unwrap();
        let qd = crate::complete::dual_points(&q, &qh).unwrap();
        assert_eq!(
            hodge_numbers(&q, &qh, &qd).unwrap().unwrap(),
            HodgeData::Cy3 {
                h11: 1,
                h21: 21,
                chi: -40
            }
        );
    }

    #[test]
    fn free_quotient_bicubic() {
        let s = setup(&product_of_planes());
        // Two subgroups, one per relative orientation of the cyclic phases on
        // the factors; both give the same quotient up to lattice symmetry.
        let hits = free_quotient_scan(&s.points, &s.hull, false).unwrap();
        assert_eq!(hits.len(), 2);
        let mut nfs = std::collections::BTreeSet::new();
        for fq in &hits {
            assert_eq!(fq.index, 3);
            assert!(!fq.weak_only);
            let q = quotient_polytope(&s.points, fq).unwrap();
            assert_eq!(q.len(), 34);
            nfs.insert(crate::nf::normal_form(&q, &convex_hull(&q).unwrap()).unwrap().mat.a);
        }
        assert_eq!(nfs.len(), 1);
        let q = quotient_polytope(&s.points, &hits[0]).unwrap();
        let qh = convex_hull(&q).unwrap();
        let qd = crate::complete::dual_points(&q, &qh).unwrap();
        assert_eq!(
            hodge_numbers(&q, &qh, &qd).unwrap().unwrap(),
            HodgeData::Cy3 {
                h11: 2,
                h21: 29,
                chi: -54
            }
        );
        // Same polytope as the one realized from the annotated weights.
        let quot = Cws {
            rows: product_of_planes().rows,
            ncols: 6,
            quotients: vec![Quotient {
                m: 3,
                a: vec![0, 1, 2, 0, 1, 2],
            }],
        };
        let g = realize(&quot).unwrap();
        let nf_scan = crate::nf::normal_form(&q, &qh).unwrap();
        let nf_cws = crate::nf::normal_form(&g.points, &convex_hull(&g.points).unwrap()).unwrap();
        assert_eq!(nf_scan.mat, nf_cws.mat);
    }

    #[test]
    fn free_quotient_trivial_vertex_lattice() {
        let pts = PointList::from_rows(
            2,
            &[vec![1, 0], vec![0, 1], vec![-1, -1], vec![0, 0]],
        );
        let h = convex_hull(&pts).unwrap();
        assert!(free_quotient_scan(&pts, &h, true).unwrap().is_empty());
    }
}
