//! Exact integer matrices: Hermite and Smith normal forms, kernels,
//! determinants, adjugates.
//!
//! Matrices here are small (bounded by the dimension and vertex limits), so
//! every routine favours exactness and determinism over asymptotics.  All
//! intermediate arithmetic runs in `Wide` with overflow checks and results are
//! narrowed back to `Int` on output.

use crate::error::{Error, Result};
use crate::num::{self, Int, Wide};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Int>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            a: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut a = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            a.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, a }
    }

    pub fn from_flat(rows: usize, cols: usize, a: Vec<Int>) -> Mat {
        assert_eq!(a.len(), rows * cols);
        Mat { rows, cols, a }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Int {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.a[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Int] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j));
            }
        }
        t
    }

    /// Checked matrix product.
    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Wide = 0;
                for k in 0..self.cols {
                    acc = num::wadd(
                        acc,
                        num::wmul(self.at(i, k) as Wide, other.at(k, j) as Wide, "mat mul")?,
                        "mat mul",
                    )?;
                }
                out.set(i, j, num::narrow(acc, "mat mul")?);
            }
        }
        Ok(out)
    }

    /// Checked matrix-vector product.
    pub fn mul_vec(&self, x: &[Int]) -> Result<Vec<Int>> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in mul_vec");
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            out.push(num::narrow(num::dot(self.row(i), x, "mat mul_vec")?, "mat mul_vec")?);
        }
        Ok(out)
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> Result<usize> {
        let mut w = Wmat::from_mat(self);
        w.bareiss_rank()
    }

    /// Determinant of a square matrix (Bareiss).
    pub fn det(&self) -> Result<Wide> {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let mut w = Wmat::from_mat(self);
        w.bareiss_det()
    }

    /// Row Hermite form `H = U * A` with `U` unimodular.  Pivots are positive,
    /// entries above each pivot are reduced into `[0, pivot)`, pivot columns
    /// are leftmost possible, zero rows sink to the bottom.
    pub fn row_hermite(&self) -> Result<RowHermite> {
        let mut w = Wmat::from_mat(self);
        let mut u = Wmat::identity(self.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Smallest nonzero magnitude keeps intermediate entries tame.
            let mut best: Option<usize> = None;
            for i in r..self.rows {
                let v = w.at(i, j);
                if v != 0 && best.map_or(true, |b| v.unsigned_abs() < w.at(b, j).unsigned_abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { continue };
            w.swap_rows(r, p);
            u.swap_rows(r, p);
            for i in r + 1..self.rows {
                if w.at(i, j) != 0 {
                    gcd_rows(&mut w, &mut u, r, i, j)?;
                }
            }
            if w.at(r, j) < 0 {
                w.negate_row(r)?;
                u.negate_row(r)?;
            }
            let p_val = w.at(r, j);
            for i in 0..r {
                let q = w.at(i, j).div_euclid(p_val);
                if q != 0 {
                    w.row_axpy(i, r, -q)?;
                    u.row_axpy(i, r, -q)?;
                }
            }
            pivots.push(j);
            r += 1;
        }
        Ok(RowHermite {
            h: w.narrow("row hermite")?,
            u: u.narrow("row hermite transform")?,
            pivots,
        })
    }

    /// Column Hermite form `H = A * V` with `V` unimodular; the column analogue
    /// of [`Mat::row_hermite`].
    pub fn col_hermite(&self) -> Result<ColHermite> {
        let rh = self.transpose().row_hermite()?;
        Ok(ColHermite {
            h: rh.h.transpose(),
            v: rh.u.transpose(),
            pivots: rh.pivots,
        })
    }

    /// Basis of the integer kernel lattice `{x : A x = 0}`, returned as the
    /// columns of a matrix.  The basis is saturated: any integer kernel vector
    /// is an integer combination of the columns.
    pub fn kernel(&self) -> Result<Mat> {
        let ch = self.col_hermite()?;
        let r = ch.pivots.len();
        let k = self.cols - r;
        let mut out = Mat::zero(self.cols, k);
        for j in 0..k {
            for i in 0..self.cols {
                out.set(i, j, ch.v.at(i, r + j));
            }
        }
        Ok(out)
    }

    /// Smith normal form `D = U * A * V` with unimodular `U`, `V`, diagonal
    /// `D` nonnegative and each entry dividing the next.
    pub fn smith(&self) -> Result<Smith> {
        let mut d = Wmat::from_mat(self);
        let mut u = Wmat::identity(self.rows);
        let mut v = Wmat::identity(self.cols);
        let t_max = self.rows.min(self.cols);
        for t in 0..t_max {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..self.rows {
                    for j in t..self.cols {
                        let x = d.at(i, j);
                        if x != 0
                            && best
                                .map_or(true, |(bi, bj)| x.unsigned_abs() < d.at(bi, bj).unsigned_abs())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return finish_smith(d, u, v, t);
                };
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                for i in t + 1..self.rows {
                    if d.at(i, t) != 0 {
                        gcd_rows(&mut d, &mut u, t, i, t)?;
                    }
                }
                let mut col_clean = true;
                for j in t + 1..self.cols {
                    if d.at(t, j) != 0 {
                        gcd_cols(&mut d, &mut v, t, j, t)?;
                        col_clean = false;
                    }
                }
                if !col_clean {
                    // Column ops may have refilled column t; run again.
                    continue;
                }
                // Row and column t are clean; enforce divisibility.
                let p = d.at(t, t);
                let mut fixed = true;
                'scan: for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if d.at(i, j) % p != 0 {
                            // Pull the offending column into the pivot column;
                            // the next row pass shrinks the pivot to a proper
                            // divisor, so this terminates.
                            d.col_axpy(j, t, 1)?;
                            v.col_axpy(j, t, 1)?;
                            fixed = false;
                            break 'scan;
                        }
                    }
                }
                if fixed {
                    if d.at(t, t) < 0 {
                        d.negate_col(t)?;
                        v.negate_col(t)?;
                    }
                    break;
                }
            }
        }
        finish_smith(d, u, v, t_max)
    }

    /// Exact inverse of a unimodular square matrix.
    pub fn inverse_unimodular(&self) -> Result<Mat> {
        let (adj, det) = self.adjugate_det()?;
        if det != 1 && det != -1 {
            return Err(Error::internal(format!(
                "inverse_unimodular on matrix with determinant {det}"
            )));
        }
        if det == 1 {
            return Ok(adj);
        }
        let mut out = adj;
        for x in &mut out.a {
            *x = num::sub(0, *x, "inverse negate")?;
        }
        Ok(out)
    }

    /// Adjugate and determinant: `A * adj(A) = det(A) * I`.
    pub fn adjugate_det(&self) -> Result<(Mat, Wide)> {
        assert_eq!(self.rows, self.cols, "adjugate of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok((Mat::zero(0, 0), 1));
        }
        let det = self.det()?;
        let mut adj = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut minor = Mat::zero(n - 1, n - 1);
                for (mi, si) in (0..n).filter(|&x| x != i).enumerate() {
                    for (mj, sj) in (0..n).filter(|&x| x != j).enumerate() {
                        minor.set(mi, mj, self.at(si, sj));
                    }
                }
                let mut c = if n == 1 { 1 } else { minor.det()? };
                if (i + j) % 2 == 1 {
                    c = -c;
                }
                adj.set(j, i, num::narrow(c, "adjugate")?);
            }
        }
        Ok((adj, det))
    }
}

#[derive(Debug, Clone)]
pub struct RowHermite {
    pub h: Mat,
    pub u: Mat,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ColHermite {
    pub h: Mat,
    pub v: Mat,
    /// Pivot row of each nonzero column of `h`.
    pub pivots: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Smith {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
    /// Nonzero diagonal entries, each dividing the next.
    pub divisors: Vec<Int>,
}

fn finish_smith(d: Wmat, u: Wmat, v: Wmat, _t: usize) -> Result<Smith> {
    let d = d.narrow("smith")?;
    let mut divisors = Vec::new();
    for t in 0..d.rows.min(d.cols) {
        let x = d.at(t, t);
        if x != 0 {
            divisors.push(x);
        }
    }
    Ok(Smith {
        u: u.narrow("smith transform")?,
        d,
        v: v.narrow("smith transform")?,
        divisors,
    })
}

/// Enumerate all sublattices of `Z^n` of index `m`, one upper-triangular
/// column basis per lattice: positive diagonal with product `m`, the entry in
/// row `i` of any later column reduced into `[0, h_ii)`.  Each matrix is the
/// unique Hermite form of its lattice, so the results are pairwise distinct.
pub fn sublattice_bases(n: usize, m: Int) -> Vec<Mat> {
    assert!(m > 0, "sublattice index must be positive");
    // Every lattice of index m contains m * Z^n, so the constrained
    // enumeration below degenerates to the unconstrained one.
    intermediate_bases(&vec![m; n], m)
}

/// Enumerate the index-`m` sublattices of `Z^n` containing `diag(d) * Z^n`,
/// in the same Hermite convention as `sublattice_bases`.  Such lattices
/// correspond to subgroups of the finite quotient `Z^n / diag(d)`, and the
/// search is kept near that scale: each diagonal entry must divide the
/// matching entry of `d`, and candidates missing a generator `d_j e_j` are
/// dropped.
pub fn intermediate_bases(d: &[Int], m: Int) -> Vec<Mat> {
    assert!(m > 0, "sublattice index must be positive");
    let n = d.len();
    fn rec_diag(d: &[Int], pos: usize, rem: Int, diag: &mut [Int], out: &mut Vec<Mat>) {
        let n = d.len();
        if pos == n {
            if rem == 1 {
                let mut work = Mat::zero(n, n);
                fill_col(d, diag, 0, &mut work, out);
            }
            return;
        }
        let mut h = 1;
        while h <= d[pos] {
            if d[pos] % h == 0 && rem % h == 0 {
                diag[pos] = h;
                rec_diag(d, pos + 1, rem / h, diag, out);
            }
            h += 1;
        }
    }
    fn fill_col(d: &[Int], diag: &[Int], col: usize, work: &mut Mat, out: &mut Vec<Mat>) {
        if col == d.len() {
            if contains_diag(d, work) {
                out.push(work.clone());
            }
            return;
        }
        work.set(col, col, diag[col]);
        fill_entry(d, diag, col, 0, work, out);
    }
    fn fill_entry(d: &[Int], diag: &[Int], col: usize, i: usize, work: &mut Mat, out: &mut Vec<Mat>) {
        if i == col {
            fill_col(d, diag, col + 1, work, out);
            return;
        }
        let mut v = 0;
        while v < diag[i] {
            work.set(i, col, v);
            fill_entry(d, diag, col, i + 1, work, out);
            v += 1;
        }
        work.set(i, col, 0);
    }
    let mut out = Vec::new();
    let mut diag = vec![0 as Int; n];
    rec_diag(d, 0, m, &mut diag, &mut out);
    out
}

/// Back-substitution test that every generator `d_j e_j` lies in the lattice
/// spanned by the columns of the upper-triangular `h`.
fn contains_diag(d: &[Int], h: &Mat) -> bool {
    let n = d.len();
    let mut x = vec![0 as Wide; n];
    for j in 0..n {
        for i in (0..n).rev() {
            let mut s = if i == j { d[j] as Wide } else { 0 };
            for k in (i + 1)..n {
                s -= h.at(i, k) as Wide * x[k];
            }
            let p = h.at(i, i) as Wide;
            if s % p != 0 {
                return false;
            }
            x[i] = s / p;
        }
    }
    true
}

/// Working matrix in `Wide` precision.
struct Wmat {
    rows: usize,
    cols: usize,
    a: Vec<Wide>,
}

impl Wmat {
    fn from_mat(m: &Mat) -> Wmat {
        Wmat {
            rows: m.rows,
            cols: m.cols,
            a: m.a.iter().map(|&x| x as Wide).collect(),
        }
    }

    fn identity(n: usize) -> Wmat {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        Wmat { rows: n, cols: n, a }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Wide {
        self.a[i * self.cols + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Wide) {
        self.a[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.a.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.a.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) -> Result<()> {
        for k in 0..self.cols {
            let v = self.at(i, k);
            self.set(i, k, num::wsub(0, v, "row negate")?);
        }
        Ok(())
    }

    fn negate_col(&mut self, j: usize) -> Result<()> {
        for r in 0..self.rows {
            let v = self.at(r, j);
            self.set(r, j, num::wsub(0, v, "col negate")?);
        }
        Ok(())
    }

    /// `row[i] += q * row[src]`.
    fn row_axpy(&mut self, i: usize, src: usize, q: Wide) -> Result<()> {
        for k in 0..self.cols {
            let v = num::wadd(
                self.at(i, k),
                num::wmul(q, self.at(src, k), "row axpy")?,
                "row axpy",
            )?;
            self.set(i, k, v);
        }
        Ok(())
    }

    /// `col[j] += q * col[src]`.
    fn col_axpy(&mut self, src: usize, j: usize, q: Wide) -> Result<()> {
        for r in 0..self.rows {
            let v = num::wadd(
                self.at(r, j),
                num::wmul(q, self.at(r, src), "col axpy")?,
                "col axpy",
            )?;
            self.set(r, j, v);
        }
        Ok(())
    }

    fn narrow(&self, op: &'static str) -> Result<Mat> {
        let mut a = Vec::with_capacity(self.a.len());
        for &x in &self.a {
            a.push(num::narrow(x, op)?);
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            a,
        })
    }

    /// Rank by fraction-free Gaussian elimination.
    fn bareiss_rank(&mut self) -> Result<usize> {
        let mut prev: Wide = 1;
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.at(i, j) != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            let pv = self.at(r, j);
            for i in r + 1..self.rows {
                for k in j + 1..self.cols {
                    let t = num::wsub(
                        num::wmul(pv, self.at(i, k), "rank")?,
                        num::wmul(self.at(i, j), self.at(r, k), "rank")?,
                        "rank",
                    )?;
                    self.set(i, k, t / prev);
                }
                self.set(i, j, 0);
            }
            prev = pv;
            r += 1;
        }
        Ok(r)
    }

    /// Determinant by Bareiss elimination; requires a square matrix.
    fn bareiss_det(&mut self) -> Result<Wide> {
        let n = self.rows;
        let mut prev: Wide = 1;
        let mut sign: Wide = 1;
        for j in 0..n {
            let Some(p) = (j..n).find(|&i| self.at(i, j) != 0) else {
                return Ok(0);
            };
            if p != j {
                self.swap_rows(j, p);
                sign = -sign;
            }
            let pv = self.at(j, j);
            for i in j + 1..n {
                for k in j + 1..n {
                    let t = num::wsub(
                        num::wmul(pv, self.at(i, k), "det")?,
                        num::wmul(self.at(i, j), self.at(j, k), "det")?,
                        "det",
                    )?;
                    self.set(i, k, t / prev);
                }
                self.set(i, j, 0);
            }
            prev = pv;
        }
        Ok(sign * self.at(n - 1, n - 1))
    }
}

fn wegcd(a: Wide, b: Wide) -> (Wide, Wide, Wide) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1 as Wide, 0 as Wide);
    let (mut t0, mut t1) = (0 as Wide, 1 as Wide);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Zero out `m[i2][j]` against pivot `m[r][j]` by a unimodular two-row
/// combination, mirrored on the transform `u`.
fn gcd_rows(m: &mut Wmat, u: &mut Wmat, r: usize, i2: usize, j: usize) -> Result<()> {
    let a = m.at(r, j);
    let b = m.at(i2, j);
    if b % a == 0 {
        // Plain elimination keeps the pivot row untouched, which is what
        // makes the Smith iteration terminate.
        let q = b / a;
        m.row_axpy(i2, r, -q)?;
        u.row_axpy(i2, r, -q)?;
        return Ok(());
    }
    let (g, s, t) = wegcd(a, b);
    debug_assert!(g > 0, "gcd of nonzero entries must be positive");
    let (ca, cb) = (a / g, b / g);
    combine_rows(m, r, i2, s, t, -cb, ca)?;
    combine_rows(u, r, i2, s, t, -cb, ca)?;
    debug_assert_eq!(m.at(r, j), g);
    debug_assert_eq!(m.at(i2, j), 0);
    Ok(())
}

/// Zero out `m[i][j2]` against pivot `m[i][c]` by a unimodular two-column
/// combination, mirrored on the transform `v`.
fn gcd_cols(m: &mut Wmat, v: &mut Wmat, c: usize, j2: usize, i: usize) -> Result<()> {
    let a = m.at(i, c);
    let b = m.at(i, j2);
    if b % a == 0 {
        let q = b / a;
        m.col_axpy(c, j2, -q)?;
        v.col_axpy(c, j2, -q)?;
        return Ok(());
    }
    let (g, s, t) = wegcd(a, b);
    debug_assert!(g > 0, "gcd of nonzero entries must be positive");
    let (ca, cb) = (a / g, b / g);
    combine_cols(m, c, j2, s, t, -cb, ca)?;
    combine_cols(v, c, j2, s, t, -cb, ca)?;
    debug_assert_eq!(m.at(i, c), g);
    debug_assert_eq!(m.at(i, j2), 0);
    Ok(())
}

/// Replace rows `(r1, r2)` by `(s*r1 + t*r2, p*r1 + q*r2)`; the coefficient
/// matrix has determinant `s*q - t*p = 1`.
fn combine_rows(
    m: &mut Wmat,
    r1: usize,
    r2: usize,
    s: Wide,
    t: Wide,
    p: Wide,
    q: Wide,
) -> Result<()> {
    for k in 0..m.cols {
        let x = m.at(r1, k);
        let y = m.at(r2, k);
        let nx = num::wadd(num::wmul(s, x, "row combine")?, num::wmul(t, y, "row combine")?, "row combine")?;
        let ny = num::wadd(num::wmul(p, x, "row combine")?, num::wmul(q, y, "row combine")?, "row combine")?;
        m.set(r1, k, nx);
        m.set(r2, k, ny);
    }
    Ok(())
}

fn combine_cols(
    m: &mut Wmat,
    c1: usize,
    c2: usize,
    s: Wide,
    t: Wide,
    p: Wide,
    q: Wide,
) -> Result<()> {
    for r in 0..m.rows {
        let x = m.at(r, c1);
        let y = m.at(r, c2);
        let nx = num::wadd(num::wmul(s, x, "col combine")?, num::wmul(t, y, "col combine")?, "col combine")?;
        let ny = num::wadd(num::wmul(p, x, "col combine")?, num::wmul(q, y, "col combine")?, "col combine")?;
        m.set(r, c1, nx);
        m.set(r, c2, ny);
    }
    Ok(())
}
