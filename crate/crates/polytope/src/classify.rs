//! Classification of reflexive polytopes by subpolytope recursion.
//!
//! The search starts from the lattice point set of a polytope, drops one hull
//! vertex at a time, rebuilds the hull, and prunes branches whose hull no
//! longer has the origin strictly inside.  Interiorness is inherited upward
//! (a subpolytope with interior origin sits inside every ancestor), so every
//! reflexive subpolytope on the original lattice is reached by some deletion
//! chain, and the prune loses nothing.  Point sets stay closed under taking
//! lattice points of their own hull: a deleted vertex can never reappear
//! inside a later hull.
//!
//! Normal forms of reflexive finds are collected in [`NFStore`], a sorted,
//! line-oriented text store.  On top of the recursion sit the sublattice scan
//! (polytopes reflexive only on a coarser lattice than the one their vertices
//! span), mirror statistics, and a bounded brute-force enumeration of
//! (combined) weight systems with the interior-point property, which supplies
//! the starting polytopes for a classification run.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::complete::{self, Ineq};
use crate::config;
use crate::cws::{self, Cws, WeightRow};
use crate::error::{Error, Result};
use crate::fiber;
use crate::hull::{self, Hull};
use crate::mat::{self, Mat};
use crate::nf;
use crate::num::{self, Int, Wide};
use crate::point::PointList;

/// Store key of a polytope class: dimension, vertex count, then the
/// normal-form vertex matrix row-major.  Keys compare lexicographically, so a
/// sorted key set groups by dimension first.
pub type NfKey = Vec<Int>;

/// Key of a full dimensional polytope given by its points and hull.
pub fn polytope_nf_key(points: &PointList, hull: &Hull) -> Result<NfKey> {
    let nf = nf::normal_form(points, hull)?;
    let mut key = Vec::with_capacity(2 + nf.mat.a.len());
    key.push(nf.mat.rows as Int);
    key.push(nf.mat.cols as Int);
    key.extend_from_slice(&nf.mat.a);
    Ok(key)
}

/// The vertices encoded in a store key, as a point list in key column order.
pub fn key_vertices(key: &NfKey) -> Result<PointList> {
    if key.len() < 2 || key[0] <= 0 || key[1] <= 0 {
        return Err(Error::parse("malformed normal form record"));
    }
    let n = key[0] as usize;
    let nv = key[1] as usize;
    if n > config::DIM_MAX || nv > config::VERT_MAX || key.len() != 2 + n * nv {
        return Err(Error::parse("malformed normal form record"));
    }
    let mut pl = PointList::with_capacity(n, nv);
    for j in 0..nv {
        let col: Vec<Int> = (0..n).map(|i| key[2 + i * nv + j]).collect();
        pl.push(&col);
    }
    Ok(pl)
}

/// Sorted, deduplicated set of polytope normal forms, one per line in the
/// text serialization.  All entries share one dimension.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NFStore {
    dim: Option<usize>,
    set: BTreeSet<NfKey>,
    /// How many entries were found only on a sublattice (set by callers that
    /// merge sublattice-scan results; informational).
    pub sublattice: usize,
}

impl NFStore {
    pub fn new() -> NFStore {
        NFStore::default()
    }

    /// Dimension of the stored polytopes, unset while empty.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, key: &NfKey) -> bool {
        self.set.contains(key)
    }

    /// Insert a key; `Ok(true)` when it was new.  The first insertion fixes
    /// the store dimension.
    pub fn insert(&mut self, key: NfKey) -> Result<bool> {
        key_vertices(&key)?;
        let n = key[0] as usize;
        match self.dim {
            None => self.dim = Some(n),
            Some(d) if d != n => {
                return Err(Error::bad_weights(format!(
                    "store holds {d}-dimensional polytopes, got dimension {n}"
                )))
            }
            _ => {}
        }
        Ok(self.set.insert(key))
    }

    /// Ascending iteration over the stored keys.
    pub fn iter(&self) -> impl Iterator<Item = &NfKey> {
        self.set.iter()
    }

    /// Merge another store into this one; returns how many entries were new.
    pub fn merge(&mut self, other: &NFStore) -> Result<usize> {
        if let (Some(a), Some(b)) = (self.dim, other.dim) {
            if a != b {
                return Err(Error::bad_weights(format!(
                    "cannot merge stores of dimensions {a} and {b}"
                )));
            }
        }
        let mut added = 0;
        for key in other.iter() {
            if self.insert(key.clone())? {
                added += 1;
            }
        }
        self.sublattice += other.sublattice;
        Ok(added)
    }

    /// One line per normal form: dimension, vertex count, matrix entries.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in &self.set {
            let line: Vec<String> = key.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<NFStore> {
        let mut store = NFStore::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let key: NfKey = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<Int>()
                        .map_err(|_| Error::parse(format!("bad store token {t:?}")))
                })
                .collect::<Result<_>>()?;
            store.insert(key)?;
        }
        Ok(store)
    }
}

/// Diagnostic counters of one subpolytope search.  `nf` counts distinct
/// reflexive normal forms found in the run and `hit` those that were already
/// in the store beforehand; `ip` counts interior-point tests and depends on
/// the traversal order, so only `nf` is comparable across implementations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchCounts {
    pub hit: usize,
    pub ip: usize,
    pub nf: usize,
}

struct SearchCtx<'a> {
    store: &'a mut NFStore,
    /// Largest remaining budget each normal-form class was expanded with;
    /// classes reached again with no more budget need no second expansion.
    memo: HashMap<NfKey, usize>,
    run_seen: HashSet<NfKey>,
    /// Point index sets already expanded, scoped to one starting polytope.
    visited: HashMap<Vec<u32>, usize>,
    counts: SearchCounts,
}

fn search_node(
    ctx: &mut SearchCtx,
    points: PointList,
    idx: Vec<u32>,
    remaining: usize,
) -> Result<()> {
    match ctx.visited.get(&idx) {
        Some(&r) if r >= remaining => return Ok(()),
        _ => {}
    }
    ctx.visited.insert(idx.clone(), remaining);
    let hull = match hull::convex_hull(&points) {
        Ok(h) => h,
        Err(Error::NotFullDim { .. }) => return Ok(()),
        Err(e) => return Err(e),
    };
    ctx.counts.ip += 1;
    if !hull.has_interior_origin() {
        return Ok(());
    }
    let key = polytope_nf_key(&points, &hull)?;
    if hull.is_reflexive() && ctx.run_seen.insert(key.clone()) {
        ctx.counts.nf += 1;
        if ctx.store.contains(&key) {
            ctx.counts.hit += 1;
        } else {
            ctx.store.insert(key.clone())?;
        }
    }
    match ctx.memo.get(&key) {
        Some(&r) if r >= remaining => return Ok(()),
        _ => {}
    }
    ctx.memo.insert(key, remaining);
    if remaining == 0 {
        return Ok(());
    }
    for &v in &hull.vertices {
        let keep: Vec<usize> = (0..points.len()).filter(|&i| i != v).collect();
        let child = points.select(&keep);
        let child_idx: Vec<u32> = idx
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != v)
            .map(|(_, &o)| o)
            .collect();
        search_node(ctx, child, child_idx, remaining - 1)?;
    }
    Ok(())
}

fn search_root(ctx: &mut SearchCtx, points: &PointList, depth: Option<usize>) -> Result<()> {
    ctx.visited.clear();
    let budget = depth.unwrap_or(usize::MAX);
    let start = points.dedup();
    let hull0 = match hull::convex_hull(&start) {
        Ok(h) => h,
        Err(Error::NotFullDim { .. }) => return Ok(()),
        Err(e) => return Err(e),
    };
    // Complete the point set so the recursion sees every lattice point of the
    // starting polytope, whatever subset the caller handed in.
    let ineqs: Vec<Ineq> = hull0
        .facets
        .iter()
        .map(|f| (f.normal.clone(), f.c))
        .collect();
    let full = complete::lattice_points(start.dim, &ineqs)?;
    let idx: Vec<u32> = (0..full.len() as u32).collect();
    search_node(ctx, full, idx, budget)
}

/// Recursive search for reflexive subpolytopes of the polytope spanned by
/// `points`, dropping up to `depth` vertices (`None` removes the cap).  New
/// normal forms are added to `store`.
pub fn subpolytopes(
    points: &PointList,
    depth: Option<usize>,
    store: &mut NFStore,
) -> Result<SearchCounts> {
    let mut ctx = SearchCtx {
        store,
        memo: HashMap::new(),
        run_seen: HashSet::new(),
        visited: HashMap::new(),
        counts: SearchCounts::default(),
    };
    search_root(&mut ctx, points, depth)?;
    Ok(ctx.counts)
}

/// Incremental classification over a shared store: feed starting polytopes
/// one at a time and get the counts attributable to each start.  The memo
/// carries over, so later searches reuse earlier expansion work.
pub struct ClassRun {
    pub store: NFStore,
    memo: HashMap<NfKey, usize>,
    run_seen: HashSet<NfKey>,
}

impl ClassRun {
    pub fn new(store: NFStore) -> ClassRun {
        ClassRun {
            store,
            memo: HashMap::new(),
            run_seen: HashSet::new(),
        }
    }

    /// Search one starting polytope with the given depth budget.
    pub fn search(&mut self, points: &PointList, depth: Option<usize>) -> Result<SearchCounts> {
        let mut ctx = SearchCtx {
            store: &mut self.store,
            memo: std::mem::take(&mut self.memo),
            run_seen: std::mem::take(&mut self.run_seen),
            visited: HashMap::new(),
            counts: SearchCounts::default(),
        };
        let r = search_root(&mut ctx, points, depth);
        let counts = ctx.counts;
        self.memo = ctx.memo;
        self.run_seen = ctx.run_seen;
        r?;
        Ok(counts)
    }
}

/// Classification pipeline entry: realize every starting weight system and
/// search each polytope, sharing the expansion memo across starts.  The
/// resulting store does not depend on the order of `starts`.
pub fn run_classification(starts: &[Cws], depth: Option<usize>) -> Result<(NFStore, SearchCounts)> {
    let mut run = ClassRun::new(NFStore::new());
    let mut total = SearchCounts::default();
    for c in starts {
        let geom = cws::realize(c)?;
        let counts = run.search(&geom.points, depth)?;
        total.hit += counts.hit;
        total.ip += counts.ip;
        total.nf += counts.nf;
    }
    Ok((run.store, total))
}

fn divisors_of(n: Int) -> Vec<Int> {
    let mut out = Vec::new();
    let mut i: Int = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// Scan every stored polytope for intermediate lattices between the lattice
/// its vertices span and the ambient one, and collect the normal forms of
/// polytopes that are reflexive on such a lattice but absent from the store.
pub fn sublattice_scan(store: &NFStore) -> Result<NFStore> {
    let mut found = NFStore::new();
    for key in store.iter() {
        let verts = key_vertices(key)?;
        let n = verts.dim;
        let sm = verts.as_col_matrix().smith()?;
        if sm.divisors.len() != n {
            return Err(Error::internal("stored polytope is not full dimensional"));
        }
        let mut order: Int = 1;
        for &d in &sm.divisors {
            order = num::mul(order, d, "vertex lattice index")?;
        }
        if order > fiber::QUOTIENT_GROUP_MAX {
            return Err(Error::unsupported(
                "vertex lattice index too large for the sublattice scan",
            ));
        }
        if order == 1 {
            continue;
        }
        let yverts: Vec<Vec<Int>> = verts
            .iter()
            .map(|v| sm.u.mul_vec(v))
            .collect::<Result<_>>()?;
        for m in divisors_of(order) {
            if m < 2 {
                continue;
            }
            for basis in mat::intermediate_bases(&sm.divisors, m) {
                let (adj, det) = basis.adjugate_det()?;
                let mut pl = PointList::with_capacity(n, yverts.len());
                for y in &yverts {
                    let w = adj.mul_vec(y)?;
                    let q: Vec<Int> = w
                        .iter()
                        .map(|&x| {
                            num::div_exact(x as Wide, det, "sublattice coordinates")
                                .and_then(|r| num::narrow(r, "sublattice coordinates"))
                        })
                        .collect::<Result<_>>()?;
                    pl.push(&q);
                }
                let h = match hull::convex_hull(&pl) {
                    Ok(h) => h,
                    Err(Error::NotFullDim { .. }) => continue,
                    Err(e) => return Err(e),
                };
                if !h.is_reflexive() {
                    continue;
                }
                let sub_key = polytope_nf_key(&pl, &h)?;
                if !store.contains(&sub_key) {
                    found.insert(sub_key)?;
                }
            }
        }
    }
    Ok(found)
}

fn dual_key_of(key: &NfKey) -> Result<NfKey> {
    let verts = key_vertices(key)?;
    let h = hull::convex_hull(&verts)?;
    if !h.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let duals = h.normals();
    let dh = hull::convex_hull(&duals)?;
    polytope_nf_key(&duals, &dh)
}

/// Stored polytopes whose mirror (the normal form of the dual) is missing
/// from the store, as the missing dual keys, sorted.
pub fn missing_mirrors(store: &NFStore) -> Result<Vec<NfKey>> {
    let mut missing = BTreeSet::new();
    for key in store.iter() {
        let dk = dual_key_of(key)?;
        if dk != *key && !store.contains(&dk) {
            missing.insert(dk);
        }
    }
    Ok(missing.into_iter().collect())
}

/// Count mirror pairs and self-dual entries of a store of reflexive
/// polytopes.  Errors when the store is not mirror closed; a closed store
/// satisfies `total = 2 * pairs + selfdual`.
pub fn mirror_stats(store: &NFStore) -> Result<(usize, usize)> {
    let mut pairs = 0usize;
    let mut selfs = 0usize;
    let mut missing = 0usize;
    for key in store.iter() {
        let dk = dual_key_of(key)?;
        if dk == *key {
            selfs += 1;
        } else if !store.contains(&dk) {
            missing += 1;
        } else if *key < dk {
            pairs += 1;
        }
    }
    if missing > 0 {
        return Err(Error::cross_check(format!(
            "{missing} stored polytopes have no mirror partner in the store"
        )));
    }
    Ok((pairs, selfs))
}

/// Mirror counts of a store that need not be mirror closed: entries whose
/// dual is absent count neither as pair nor self dual.
pub fn mirror_stats_lenient(store: &NFStore) -> Result<(usize, usize, usize)> {
    let mut pairs = 0usize;
    let mut selfs = 0usize;
    let mut missing = 0usize;
    for key in store.iter() {
        let dk = dual_key_of(key)?;
        if dk == *key {
            selfs += 1;
        } else if !store.contains(&dk) {
            missing += 1;
        } else if *key < dk {
            pairs += 1;
        }
    }
    Ok((pairs, selfs, missing))
}

/// Result of a bounded brute-force weight-system scan.
#[derive(Debug, Clone)]
pub struct WsScan {
    pub systems: Vec<Cws>,
    /// Scan certificate: some system was found and the bound is at least
    /// twice the largest degree seen, so the enumeration has gone a full
    /// doubling past the last find.  A scan that ends unstabilized is
    /// inconclusive about completeness.
    pub stabilized: bool,
    /// Largest row degree among the systems found (0 when none).
    pub max_degree: Int,
}

/// Can a nonnegative integer combination of `cols` hit `target` exactly?
/// Componentwise-capped reachability table of size prod(target + 1).
fn reachable(cols: &[&[Int]], target: &[Int]) -> bool {
    if target.iter().any(|&t| t < 0) {
        return false;
    }
    let k = target.len();
    let mut strides = vec![0usize; k];
    let mut size = 1usize;
    for r in (0..k).rev() {
        strides[r] = size;
        size *= target[r] as usize + 1;
    }
    let goal = size - 1;
    let mut dp = vec![false; size];
    dp[0] = true;
    for col in cols {
        debug_assert_eq!(col.len(), k);
        if col.iter().all(|&w| w == 0) {
            continue;
        }
        let mut off = 0usize;
        let mut fits = true;
        for r in 0..k {
            if col[r] > target[r] {
                fits = false;
                break;
            }
            off += col[r] as usize * strides[r];
        }
        if !fits {
            continue;
        }
        // Forward scan, so each column may be used any number of times.
        for i in 0..size - off {
            if !dp[i] {
                continue;
            }
            let mut ok = true;
            let mut rem = i;
            for r in 0..k {
                let c = (rem / strides[r]) as Int;
                rem %= strides[r];
                if c + col[r] > target[r] {
                    ok = false;
                    break;
                }
            }
            if ok {
                dp[i + off] = true;
            }
        }
        if dp[goal] {
            return true;
        }
    }
    dp[goal]
}

/// Necessary conditions for the interior-point property, checked per
/// coordinate on the exponent solutions of a degree-balanced system: some
/// solution avoids the coordinate entirely and some uses it at least twice.
/// Either failure puts the distinguished solution on a supporting hyperplane
/// (or collapses the dimension), so pruning is exact on the non-IP side.
fn ip_prefilter(rows: &[Vec<Int>], degrees: &[Int]) -> bool {
    let ncols = rows[0].len();
    let k = rows.len();
    let cols: Vec<Vec<Int>> = (0..ncols)
        .map(|j| (0..k).map(|r| rows[r][j]).collect())
        .collect();
    for j in 0..ncols {
        let others: Vec<&[Int]> = (0..ncols)
            .filter(|&i| i != j)
            .map(|i| cols[i].as_slice())
            .collect();
        if !reachable(&others, degrees) {
            return false;
        }
        let twice: Vec<Int> = (0..k).map(|r| degrees[r] - 2 * cols[j][r]).collect();
        let all: Vec<&[Int]> = cols.iter().map(|c| c.as_slice()).collect();
        if !reachable(&all, &twice) {
            return false;
        }
    }
    true
}

/// Exact interior-point test on the realized polytope; `None` when the hull
/// is degenerate or the origin is not strictly inside.
fn ip_polytope(c: &Cws) -> Result<Option<(PointList, Hull)>> {
    let geom = cws::realize(c)?;
    let h = match hull::convex_hull(&geom.points) {
        Ok(h) => h,
        Err(Error::NotFullDim { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if h.has_interior_origin() {
        Ok(Some((geom.points, h)))
    } else {
        Ok(None)
    }
}

/// Brute-force enumeration of single weight systems with the interior-point
/// property: nondecreasing positive weights, gcd one, degree the weight sum,
/// all degrees up to the bound.
pub fn brute_ws(dim: usize, degree_bound: Int) -> Result<WsScan> {
    if dim == 0 {
        return Err(Error::bad_weights("dimension must be positive"));
    }
    let ncols = dim + 1;
    if ncols > config::WEIGHT_MAX {
        return Err(Error::Capacity {
            param: config::WEIGHT_MAX_NAME,
            needed: ncols,
        });
    }
    if degree_bound < 2 {
        return Err(Error::bad_weights("degree bound must be at least 2"));
    }

    let mut systems = Vec::new();
    let mut w: Vec<Int> = Vec::with_capacity(ncols);
    gen_sorted(&mut w, ncols, 1, degree_bound, &mut |w| {
        if num::gcd_slice(w) != 1 {
            return Ok(());
        }
        let d: Int = w.iter().sum();
        if !ip_prefilter(&[w.to_vec()], &[d]) {
            return Ok(());
        }
        let c = Cws::single(d, w.to_vec());
        if ip_polytope(&c)?.is_some() {
            systems.push(c);
        }
        Ok(())
    })?;

    systems.sort_by_key(|c| (c.rows[0].d, c.rows[0].w.clone()));
    let max_degree = systems.iter().map(|c| c.rows[0].d).max().unwrap_or(0);
    Ok(WsScan {
        stabilized: max_degree > 0 && 2 * max_degree <= degree_bound,
        max_degree,
        systems,
    })
}

/// Nondecreasing positive tuples of the given length with sum at most `left`.
fn gen_sorted(
    w: &mut Vec<Int>,
    len: usize,
    min: Int,
    left: Int,
    f: &mut dyn FnMut(&[Int]) -> Result<()>,
) -> Result<()> {
    if w.len() == len {
        return f(w);
    }
    let remaining = (len - w.len()) as Int;
    let mut v = min;
    while v * remaining <= left {
        w.push(v);
        gen_sorted(w, len, v, left - v, f)?;
        w.pop();
        v += 1;
    }
    Ok(())
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    fn heap(a: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if n <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..n {
            heap(a, n - 1, out);
            if n % 2 == 0 {
                a.swap(i, n - 1);
            } else {
                a.swap(0, n - 1);
            }
        }
    }
    heap(&mut cur, k, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Canonical key of a candidate under row permutations: for each permuted
/// copy, group the columns by support mask, sort them within equal masks, and
/// take the smallest flattening.  Column order is a free choice, so two
/// candidates describe the same combined system exactly when keys agree.
fn cws_canonical_key(cols: &[Vec<Int>], perms: &[Vec<usize>]) -> Vec<Int> {
    let k = cols[0].len();
    let mut best: Option<Vec<Int>> = None;
    for p in perms {
        let mut imgs: Vec<Vec<Int>> = cols
            .iter()
            .map(|c| {
                let mut v = vec![0; k];
                for r in 0..k {
                    v[p[r]] = c[r];
                }
                v
            })
            .collect();
        imgs.sort_by_key(|c| {
            let mask: u32 = c
                .iter()
                .enumerate()
                .map(|(r, &w)| if w > 0 { 1u32 << r } else { 0 })
                .sum();
            (mask, c.clone())
        });
        let flat: Vec<Int> = imgs.concat();
        if best.as_ref().map_or(true, |b| flat < *b) {
            best = Some(flat);
        }
    }
    best.expect("at least the identity permutation")
}

/// State shared by the combined-system candidate filters.
struct CwsSink {
    ncols: usize,
    perms: Vec<Vec<usize>>,
    seen: HashSet<Vec<Int>>,
    // Minimal max-row-degree representative per polytope class.
    by_nf: BTreeMap<NfKey, (Int, Cws)>,
}

impl CwsSink {
    fn consider(&mut self, rows: &[Vec<Int>]) -> Result<()> {
        let cols: Vec<Vec<Int>> = (0..self.ncols)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        if !self.seen.insert(cws_canonical_key(&cols, &self.perms)) {
            return Ok(());
        }
        if Mat::from_rows(rows).rank()? < rows.len() {
            return Ok(());
        }
        let c = Cws {
            rows: rows
                .iter()
                .map(|w| WeightRow {
                    d: w.iter().sum(),
                    w: w.clone(),
                })
                .collect(),
            ncols: self.ncols,
            quotients: Vec::new(),
        };
        if let Some((points, h)) = ip_polytope(&c)? {
            let key = polytope_nf_key(&points, &h)?;
            let dmax = c.rows.iter().map(|r| r.d).max().expect("nonempty");
            let replace = match self.by_nf.get(&key) {
                Some((best, _)) => dmax < *best,
                None => true,
            };
            if replace {
                self.by_nf.insert(key, (dmax, c));
            }
        }
        Ok(())
    }
}

/// Bounded enumeration of combined weight systems with `parts` rows: the
/// candidates combine single systems of lower dimensions over dim + parts
/// columns, either with pairwise disjoint supports or, for two rows, sharing
/// exactly one column, so every column carries a positive weight.  Candidates
/// with the interior-point property are kept, deduplicated by polytope normal
/// form keeping a smallest-degree representative.  The scan is stabilized
/// when every lower-dimensional single scan it draws from is.
pub fn brute_cws(dim: usize, parts: usize, degree_bound: Int) -> Result<WsScan> {
    if parts == 0 {
        return Err(Error::bad_weights("number of rows must be positive"));
    }
    if parts == 1 {
        return brute_ws(dim, degree_bound);
    }
    if dim == 0 {
        return Err(Error::bad_weights("dimension must be positive"));
    }
    let k = parts;
    let ncols = dim + k;
    if ncols > config::WEIGHT_MAX {
        return Err(Error::Capacity {
            param: config::WEIGHT_MAX_NAME,
            needed: ncols,
        });
    }
    if degree_bound < 2 {
        return Err(Error::bad_weights("degree bound must be at least 2"));
    }

    let mut stabilized = true;
    let mut pool: Vec<&WeightRow> = Vec::new();
    let mut scans = Vec::new();
    for s in 1..dim {
        let scan = brute_ws(s, degree_bound)?;
        stabilized &= scan.stabilized;
        scans.push(scan);
    }
    for scan in &scans {
        for c in &scan.systems {
            pool.push(&c.rows[0]);
        }
    }

    let mut sink = CwsSink {
        ncols,
        perms: permutations(k),
        seen: HashSet::new(),
        by_nf: BTreeMap::new(),
    };

    // Direct products: k systems on consecutive column blocks.
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    disjoint_products(&pool, k, ncols, 0, &mut chosen, &mut sink)?;

    // Two systems overlapping in one shared column; larger collections of
    // rows combine disjointly only.
    if k == 2 {
        for i in 0..pool.len() {
            for j in i..pool.len() {
                let (a, b) = (pool[i], pool[j]);
                if a.w.len() + b.w.len() != ncols + 1 {
                    continue;
                }
                for p in 0..a.w.len() {
                    for q in 0..b.w.len() {
                        let mut r1 = vec![0 as Int; ncols];
                        let mut r2 = vec![0 as Int; ncols];
                        r1[0] = a.w[p];
                        r2[0] = b.w[q];
                        let mut col = 1;
                        for (t, &w) in a.w.iter().enumerate() {
                            if t != p {
                                r1[col] = w;
                                col += 1;
                            }
                        }
                        for (t, &w) in b.w.iter().enumerate() {
                            if t != q {
                                r2[col] = w;
                                col += 1;
                            }
                        }
                        sink.consider(&[r1, r2])?;
                    }
                }
            }
        }
    }

    let max_degree = sink.by_nf.values().map(|(d, _)| *d).max().unwrap_or(0);
    Ok(WsScan {
        stabilized,
        max_degree,
        systems: sink.by_nf.into_values().map(|(_, c)| c).collect(),
    })
}

fn disjoint_products(
    pool: &[&WeightRow],
    k: usize,
    cols_left: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    sink: &mut CwsSink,
) -> Result<()> {
    if chosen.len() == k {
        if cols_left != 0 {
            return Ok(());
        }
        let ncols = sink.ncols;
        let mut rows = Vec::with_capacity(k);
        let mut off = 0;
        for &i in chosen.iter() {
            let mut r = vec![0 as Int; ncols];
            r[off..off + pool[i].w.len()].copy_from_slice(&pool[i].w);
            off += pool[i].w.len();
            rows.push(r);
        }
        return sink.consider(&rows);
    }
    let slots = k - chosen.len();
    for i in start..pool.len() {
        let n = pool[i].w.len();
        // Every remaining row needs at least two columns.
        if n + 2 * (slots - 1) > cols_left {
            continue;
        }
        chosen.push(i);
        disjoint_products(pool, k, cols_left - n, i, chosen, sink)?;
        chosen.pop();
    }
    Ok(())
}

/// Number of distinct polytopes spanned by a list of weight systems, all of
/// one dimension.
pub fn ws_dedup(systems: &[Cws]) -> Result<usize> {
    let mut dim: Option<usize> = None;
    let mut set: BTreeSet<NfKey> = BTreeSet::new();
    for c in systems {
        let geom = cws::realize(c)?;
        match dim {
            None => dim = Some(geom.dim),
            Some(d) if d != geom.dim => {
                return Err(Error::bad_weights(format!(
                    "weight systems of dimensions {d} and {} in one list",
                    geom.dim
                )))
            }
            _ => {}
        }
        let h = hull::convex_hull(&geom.points)?;
        set.insert(polytope_nf_key(&geom.points, &h)?);
    }
    Ok(set.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn newton(c: &Cws) -> (PointList, Hull) {
        let geom = cws::realize(c).unwrap();
        let h = hull::convex_hull(&geom.points).unwrap();
        (geom.points, h)
    }

    fn key_of(c: &Cws) -> NfKey {
        let (pts, h) = newton(c);
        polytope_nf_key(&pts, &h).unwrap()
    }

    #[test]
    fn store_insert_merge_roundtrip() {
        let p2 = key_of(&Cws::single(3, vec![1, 1, 1]));
        let sq = {
            let c = Cws {
                rows: vec![
                    WeightRow { d: 2, w: vec![1, 1, 0, 0] },
                    WeightRow { d: 2, w: vec![0, 0, 1, 1] },
                ],
                ncols: 4,
                quotients: Vec::new(),
            };
            key_of(&c)
        };
        let mut a = NFStore::new();
        assert!(a.insert(p2.clone()).unwrap());
        assert!(!a.insert(p2.clone()).unwrap());
        assert_eq!(a.len(), 1);

        let mut b = NFStore::new();
        b.insert(sq.clone()).unwrap();
        b.insert(p2.clone()).unwrap();
        assert_eq!(a.merge(&b).unwrap(), 1);
        assert_eq!(a.len(), 2);

        let text = a.to_text();
        assert_eq!(text.lines().count(), 2);
        let back = NFStore::from_text(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.dim(), Some(2));

        // Keys of the wrong dimension are rejected.
        let quintic = key_of(&Cws::single(5, vec![1, 1, 1, 1, 1]));
        assert!(a.insert(quintic.clone()).is_err());
        let mut c = NFStore::new();
        c.insert(quintic).unwrap();
        assert!(a.merge(&c).is_err());

        assert!(NFStore::from_text("3 4 1 2\n").is_err());
    }

    #[test]
    fn depth_zero_records_the_polytope_itself() {
        let (pts, h) = newton(&Cws::single(5, vec![1, 1, 1, 1, 1]));
        let mut store = NFStore::new();
        let counts = subpolytopes(&pts, Some(0), &mut store).unwrap();
        assert_eq!(counts.nf, 1);
        assert_eq!(counts.hit, 0);
        assert_eq!(store.len(), 1);
        assert!(store.contains(&polytope_nf_key(&pts, &h).unwrap()));
    }

    // Independent oracle: hulls of all point subsets of the Newton polygon.
    fn reflexive_subsets_brute(points: &PointList) -> BTreeSet<NfKey> {
        let n = points.len();
        assert!(n <= 16);
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub = points.select(&idx);
            let h = match hull::convex_hull(&sub) {
                Ok(h) => h,
                Err(_) => continue,
            };
            if h.is_reflexive() {
                out.insert(polytope_nf_key(&sub, &h).unwrap());
            }
        }
        out
    }

    #[test]
    fn triangle_recursion_matches_subset_oracle() {
        let (pts, _) = newton(&Cws::single(3, vec![1, 1, 1]));
        assert_eq!(pts.len(), 10);
        let expect = reflexive_subsets_brute(&pts);

        let mut store = NFStore::new();
        let counts = subpolytopes(&pts, Some(10), &mut store).unwrap();
        let got: BTreeSet<NfKey> = store.iter().cloned().collect();
        assert_eq!(got, expect);
        assert_eq!(counts.nf, store.len());

        // Monotone in the depth cap.
        let mut prev = BTreeSet::new();
        for depth in 0..=6 {
            let mut s = NFStore::new();
            subpolytopes(&pts, Some(depth), &mut s).unwrap();
            let cur: BTreeSet<NfKey> = s.iter().cloned().collect();
            assert!(prev.is_subset(&cur), "depth {depth} lost finds");
            prev = cur;
        }
        assert_eq!(prev, expect);
    }

    fn two_dim_starts() -> Vec<Cws> {
        let mut starts = brute_ws(2, 12).unwrap().systems;
        starts.extend(brute_cws(2, 2, 12).unwrap().systems);
        starts
    }

    #[test]
    fn two_dimensional_classification_is_complete() {
        let starts = two_dim_starts();
        let (mut store, _) = run_classification(&starts, None).unwrap();
        let extra = sublattice_scan(&store).unwrap();
        store.merge(&extra).unwrap();
        // All sixteen reflexive polygons, mirror closed.
        assert_eq!(store.len(), 16);
        let (m, s) = mirror_stats(&store).unwrap();
        assert_eq!(2 * m + s, 16);

        // Every entry is reflexive and its normal form is idempotent.
        for key in store.iter() {
            let verts = key_vertices(key).unwrap();
            let h = hull::convex_hull(&verts).unwrap();
            assert!(h.is_reflexive());
            assert_eq!(&polytope_nf_key(&verts, &h).unwrap(), key);
        }

        // The store does not depend on the order of the starts.
        let mut rev = starts.clone();
        rev.reverse();
        let (store2, _) = run_classification(&rev, None).unwrap();
        let (store1, _) = run_classification(&starts, None).unwrap();
        assert_eq!(store1.to_text(), store2.to_text());
    }

    #[test]
    fn sublattice_scan_finds_the_quartic_quotient() {
        let mut store = NFStore::new();
        store.insert(key_of(&Cws::single(4, vec![1, 1, 1, 1]))).unwrap();
        let found = sublattice_scan(&store).unwrap();
        let quotient: NfKey = vec![3, 4, 1, 1, 1, -3, 0, 2, 0, -2, 0, 0, 4, -4];
        assert!(
            found.contains(&quotient),
            "missing quotient in {:?}",
            found.to_text()
        );
    }

    #[test]
    fn mirror_stats_pairs_and_self_duals() {
        // The segment [-1, 1] is its own dual.
        let seg = PointList::from_rows(1, &[vec![-1], vec![1]]);
        let h = hull::convex_hull(&seg).unwrap();
        let mut store = NFStore::new();
        store.insert(polytope_nf_key(&seg, &h).unwrap()).unwrap();
        assert_eq!(mirror_stats(&store).unwrap(), (0, 1));

        // The projective plane polygon pairs with its dual.
        let p2 = key_of(&Cws::single(3, vec![1, 1, 1]));
        let dual = dual_key_of(&p2).unwrap();
        assert_ne!(p2, dual);
        let mut store = NFStore::new();
        store.insert(p2.clone()).unwrap();
        assert!(missing_mirrors(&store).unwrap().contains(&dual));
        assert!(matches!(
            mirror_stats(&store),
            Err(Error::CrossCheck { .. })
        ));
        store.insert(dual).unwrap();
        assert_eq!(mirror_stats(&store).unwrap(), (1, 0));
        assert!(missing_mirrors(&store).unwrap().is_empty());
    }

    #[test]
    fn brute_ws_small_dimensions() {
        let one = brute_ws(1, 8).unwrap();
        assert_eq!(one.systems.len(), 1);
        assert_eq!(one.systems[0].rows[0].d, 2);
        assert_eq!(one.systems[0].rows[0].w, vec![1, 1]);
        assert!(one.stabilized);

        let two = brute_ws(2, 12).unwrap();
        let got: Vec<(Int, Vec<Int>)> = two
            .systems
            .iter()
            .map(|c| (c.rows[0].d, c.rows[0].w.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                (3, vec![1, 1, 1]),
                (4, vec![1, 1, 2]),
                (6, vec![1, 2, 3]),
            ]
        );
        assert_eq!(two.max_degree, 6);
        assert!(two.stabilized);

        // A bound short of twice the largest degree is inconclusive.
        let tight = brute_ws(2, 8).unwrap();
        assert_eq!(tight.systems.len(), 3);
        assert!(!tight.stabilized);
    }

    #[test]
    fn brute_cws_two_dimensional() {
        // The only two-part combination in two dimensions is the product of
        // two lines: the square.
        let scan = brute_cws(2, 2, 12).unwrap();
        assert!(scan.stabilized);
        assert_eq!(scan.systems.len(), 1);
        let square_key = {
            let c = Cws {
                rows: vec![
                    WeightRow { d: 2, w: vec![1, 1, 0, 0] },
                    WeightRow { d: 2, w: vec![0, 0, 1, 1] },
                ],
                ncols: 4,
                quotients: Vec::new(),
            };
            key_of(&c)
        };
        assert_eq!(key_of(&scan.systems[0]), square_key);
        assert!(scan.systems[0].is_cy());
        assert!(ip_polytope(&scan.systems[0]).unwrap().is_some());

        // No three-part combination fits in two dimensions.
        assert!(brute_cws(2, 3, 12).unwrap().systems.is_empty());
    }

    #[test]
    fn brute_cws_three_dimensional() {
        // Two-part combinations: the three products of a two-dimensional
        // system with a line, plus 17 of the 21 one-column overlaps of two
        // two-dimensional systems (the other 4 fail the interior test).
        let two = brute_cws(3, 2, 12).unwrap();
        assert!(two.stabilized);
        assert_eq!(two.systems.len(), 20);
        let disjoint = two
            .systems
            .iter()
            .filter(|c| (0..c.ncols).all(|j| c.rows.iter().filter(|r| r.w[j] > 0).count() == 1))
            .count();
        assert_eq!(disjoint, 3);

        // Three lines combine only as a direct product: the cube.
        let three = brute_cws(3, 3, 12).unwrap();
        assert!(three.stabilized);
        assert_eq!(three.systems.len(), 1);
        let cube = &three.systems[0];
        assert_eq!(cube.rows.len(), 3);
        assert!(cube.rows.iter().all(|r| r.d == 2));

        // Four rows of at least two columns each do not fit in 7 columns.
        assert!(brute_cws(3, 4, 12).unwrap().systems.is_empty());
    }

    #[test]
    fn ws_dedup_counts_polytopes() {
        let q = Cws::single(4, vec![1, 1, 1, 1]);
        assert_eq!(ws_dedup(&[q.clone(), q.clone()]).unwrap(), 1);
        let two = vec![q, Cws::single(3, vec![1, 1, 1])];
        assert!(matches!(ws_dedup(&two), Err(Error::BadWeights { .. })));
    }
}
