//! Orbifold spectra of Landau-Ginzburg models for a single weight system
//! `(d; w_1, ..., w_N)` with `0 < w_i < d`.
//!
//! The central charge is `c/3 = sum(1 - 2 w_i / d)`.  When it is a
//! non-negative integer `D`, the spectrum of the canonical cyclic orbifold is
//! a grid `h[p][q]` (0 <= p, q <= D) built from `d` twisted sectors.  In
//! sector `l` the fields with `l * w_i = 0 mod d` stay untwisted; states are
//! counted by the graded dimensions of the restricted ring
//!
//! ```text
//! P_U(t) = prod[i in U] (1 - t^(d - w_i)) / (1 - t^(w_i))        (*)
//! ```
//!
//! and the twisted fields shift the charges by `sum(r_i - w_i) / d` on the
//! left and `sum(d - r_i - w_i) / d` on the right, `r_i = l * w_i mod d`.
//! The orbifold projection keeps the states of integral left charge; a state
//! of charges `(qL, qR)` lands in `h[qL][D - qR]`.
//!
//! The ring dimensions come from an exact polynomial division carried out as
//! a truncated series (prefix sums), certified afterwards by three
//! independent checks: the tail beyond the expected degree vanishes, the
//! value at `t = 1` equals `prod (d - w_i) / w_i`, and the coefficients are
//! palindromic.  Sectors sharing the same untwisted field set share one
//! evaluation of (*); for large degrees this is the dominant cost (dense
//! arrays of length up to `sum(d - w_i)`).

use std::collections::BTreeMap;

use crate::config;
use crate::error::{Error, Result};
use crate::hodge::HodgeData;
use crate::num::{self, Int};

/// Largest dense polynomial the spectrum path will allocate.
const DEGREE_MAX: usize = 400_000_000;
/// Largest sector count (= degree d) the spectrum path will iterate.
const SECTOR_MAX: Int = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    /// Grid dimension D = c/3.
    pub dim: usize,
    /// h[p][q], each of size (D+1) x (D+1).
    pub h: Vec<Vec<i64>>,
    /// Euler number sum((-1)^(p+q) h[p][q]).
    pub chi: i64,
}

impl Spectrum {
    /// Entries of display row p: q = 0 .. D-p.  The rest of the grid is
    /// fixed by the star symmetry h[p][q] = h[D-p][D-q].
    pub fn display_row(&self, p: usize) -> &[i64] {
        &self.h[p][..self.dim - p + 1]
    }

    /// The h[1][1..D] list shown for threefolds and fourfolds.
    pub fn v_numbers(&self) -> Vec<i64> {
        self.h[1][1..self.dim].to_vec()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LgOutcome {
    /// c/3 is not a non-negative integer: only the reduced fraction.
    CentralCharge { num: Int, den: Int },
    Spectrum(Spectrum),
}

fn validate(d: Int, w: &[Int]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::bad_weights("a weight system needs weights"));
    }
    if w.len() > config::WEIGHT_MAX {
        return Err(Error::Capacity {
            param: "W_Nmax",
            needed: w.len(),
        });
    }
    for &wi in w {
        if wi <= 0 || wi >= d {
            return Err(Error::bad_weights(format!(
                "weights must satisfy 0 < w < d, got w={wi} d={d}"
            )));
        }
    }
    Ok(())
}

/// Reduced c/3 = sum(1 - 2 w_i / d) as (numerator, denominator), den > 0.
pub fn central_charge(d: Int, w: &[Int]) -> Result<(Int, Int)> {
    validate(d, w)?;
    let mut num = 0 as Int;
    for &wi in w {
        num = num::add(num, num::sub(d, num::mul(2, wi, "c3")?, "c3")?, "c3")?;
    }
    let g = num::gcd(num, d).max(1);
    Ok((num / g, d / g))
}

/// Graded dimensions of the restricted ring (*) for the chosen weights.
/// Exact: fails rather than return an inconsistent coefficient list.
fn restricted_poincare(d: Int, w: &[Int]) -> Result<Vec<i64>> {
    if w.is_empty() {
        return Ok(vec![1]);
    }
    let mut len: i64 = 0;
    let mut deg: i64 = 0;
    for &wi in w {
        len += d - wi;
        deg += d - 2 * wi;
    }
    if deg < 0 {
        return Err(Error::internal(
            "restricted spectrum is not polynomial (negative degree); \
             the weight system is not transversal",
        ));
    }
    if len as usize > DEGREE_MAX {
        return Err(Error::unsupported(format!(
            "Poincare polynomial degree {len} exceeds the supported maximum"
        )));
    }
    let len = len as usize;
    let deg = deg as usize;

    // Sparse product of the numerator binomials (1 - t^(d - w_i)).
    let mut numer: BTreeMap<i64, i64> = BTreeMap::new();
    numer.insert(0, 1);
    for &wi in w {
        let shift = d - wi;
        let mut next = numer.clone();
        for (&e, &c) in &numer {
            *next.entry(e + shift).or_insert(0) -= c;
        }
        next.retain(|_, c| *c != 0);
        numer = next;
    }

    let mut a = vec![0i64; len + 1];
    for (&e, &c) in &numer {
        a[e as usize] = c;
    }
    // Series division by each (1 - t^(w_i)) is a prefix sum with stride w_i.
    for &wi in w {
        let s = wi as usize;
        for idx in s..=len {
            a[idx] = num::add(a[idx], a[idx - s], "series")?;
        }
    }

    // Certificates of exactness.
    for (idx, &c) in a.iter().enumerate().skip(deg + 1) {
        if c != 0 {
            return Err(Error::internal(format!(
                "inexact ring dimension series: degree {idx} beyond {deg}"
            )));
        }
    }
    a.truncate(deg + 1);
    let mut milnor_num: i128 = 1;
    let mut milnor_den: i128 = 1;
    for &wi in w {
        milnor_num *= (d - wi) as i128;
        milnor_den *= wi as i128;
        let g = num::wgcd(milnor_num, milnor_den);
        milnor_num /= g;
        milnor_den /= g;
    }
    let mut sum: i128 = 0;
    for &c in &a {
        sum += c as i128;
    }
    if milnor_den != 1 || sum != milnor_num {
        return Err(Error::internal(format!(
            "ring dimension sum {sum} does not match {milnor_num}/{milnor_den}"
        )));
    }
    for idx in 0..=deg / 2 {
        if a[idx] != a[deg - idx] {
            return Err(Error::internal("ring dimensions are not palindromic"));
        }
    }
    Ok(a)
}

/// Coefficient list of (*) over all fields; index = weighted degree.
pub fn poincare_coeffs(d: Int, w: &[Int]) -> Result<Vec<i64>> {
    validate(d, w)?;
    restricted_poincare(d, w)
}

/// Full spectrum when c/3 is a non-negative integer, the reduced central
/// charge otherwise.
pub fn lg_spectrum(d: Int, w: &[Int]) -> Result<LgOutcome> {
    let (num, den) = central_charge(d, w)?;
    if den != 1 || num < 0 {
        return Ok(LgOutcome::CentralCharge { num, den });
    }
    if d > SECTOR_MAX {
        return Err(Error::unsupported(format!(
            "degree {d} exceeds the supported sector count"
        )));
    }
    let dd = num as usize;
    let n = w.len();

    // Group sectors by their untwisted field set so each restricted ring is
    // expanded once.  r_i = l * w_i mod d is tracked incrementally.
    let mut by_mask: BTreeMap<u32, Vec<i64>> = BTreeMap::new();
    let mut r = vec![0 as Int; n];
    for l in 0..d {
        let mut mask = 0u32;
        for (i, ri) in r.iter().enumerate() {
            if *ri == 0 {
                mask |= 1 << i;
            }
        }
        by_mask.entry(mask).or_default().push(l);
        for (i, ri) in r.iter_mut().enumerate() {
            *ri += w[i];
            if *ri >= d {
                *ri -= d;
            }
        }
    }

    let mut h = vec![vec![0i64; dd + 1]; dd + 1];
    for (mask, sectors) in by_mask {
        let sub: Vec<Int> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).collect();
        let ring = restricted_poincare(d, &sub)?;
        for l in sectors {
            // Vacuum charge numerators of the twisted fields.
            let mut dq = 0 as Int;
            let mut dqbar = 0 as Int;
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    continue;
                }
                let ri = (l * w[i]).rem_euclid(d);
                dq += ri - w[i];
                dqbar += d - ri - w[i];
            }
            for (p, row) in h.iter_mut().enumerate() {
                // Integral left charge p needs ring degree p*d - dq.
                let sigma = p as Int * d - dq;
                if sigma < 0 || sigma as usize >= ring.len() {
                    continue;
                }
                let count = ring[sigma as usize];
                if count == 0 {
                    continue;
                }
                let qr_num = sigma + dqbar;
                if qr_num % d != 0 {
                    return Err(Error::internal(format!(
                        "projected state with fractional right charge in sector {l}"
                    )));
                }
                let qr = (qr_num / d) as i64;
                if qr < 0 || qr as usize > dd {
                    return Err(Error::internal(format!(
                        "right charge {qr} out of range in sector {l}"
                    )));
                }
                let q = dd - qr as usize;
                row[q] = num::add(row[q], count, "spectrum")?;
            }
        }
    }

    // Star symmetry is a structural certificate of the whole computation.
    for p in 0..=dd {
        for q in 0..=dd {
            if h[p][q] != h[dd - p][dd - q] {
                return Err(Error::internal(format!(
                    "spectrum violates star symmetry at ({p},{q})"
                )));
            }
        }
    }
    let mut chi: i64 = 0;
    for (p, row) in h.iter().enumerate() {
        for (q, &c) in row.iter().enumerate() {
            chi = num::add(chi, if (p + q) % 2 == 0 { c } else { -c }, "chi")?;
        }
    }
    Ok(LgOutcome::Spectrum(Spectrum { dim: dd, h, chi }))
}

/// Compare the spectrum against the geometric Hodge data of the reflexive
/// Newton polytope.  A mismatch is fatal: it signals an inconsistency
/// between two independently computed sets of invariants.
pub fn cross_check(spec: &Spectrum, hodge: &HodgeData) -> Result<()> {
    let ok = match (spec.dim, hodge) {
        (3, HodgeData::Cy3 { h11, h21, chi }) => {
            spec.h[1][1] == *h11 && spec.h[1][2] == *h21 && spec.chi == *chi
        }
        (4, HodgeData::Cy4 {
            h11, h12, h13, chi, ..
        }) => {
            spec.h[1][1] == *h11
                && spec.h[1][2] == *h12
                && spec.h[1][3] == *h13
                && spec.chi == *chi
        }
        _ => return Ok(()),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::cross_check(format!(
            "spectrum {:?} [{}] disagrees with geometric data {:?}",
            spec.v_numbers(),
            spec.chi,
            hodge
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(d: Int, w: &[Int]) -> Spectrum {
        match lg_spectrum(d, w).unwrap() {
            LgOutcome::Spectrum(s) => s,
            other => panic!("expected spectrum, got {other:?}"),
        }
    }

    #[test]
    fn central_charges() {
        assert_eq!(central_charge(3, &[1, 1, 1, 1, 1]).unwrap(), (5, 3));
        assert_eq!(central_charge(3, &[1, 1, 1, 1, 1, 1]).unwrap(), (2, 1));
        assert_eq!(central_charge(2, &[1, 1]).unwrap(), (0, 1));
        assert!(central_charge(3, &[3, 1]).is_err());
        assert!(central_charge(3, &[0, 1]).is_err());
    }

    #[test]
    fn poincare_expansions() {
        assert_eq!(poincare_coeffs(3, &[1, 1, 1]).unwrap(), vec![1, 3, 3, 1]);
        assert_eq!(poincare_coeffs(2, &[1, 1]).unwrap(), vec![1]);
        let p = poincare_coeffs(4, &[1, 1, 1, 1]).unwrap();
        assert_eq!(p.iter().sum::<i64>(), 81);
        assert_eq!(p.len(), 9);
    }

    #[test]
    fn k3_sextic_spectrum() {
        let s = spectrum(3, &[1, 1, 1, 1, 1, 1]);
        assert_eq!(s.dim, 2);
        assert_eq!(s.display_row(0), &[1, 0, 1]);
        assert_eq!(s.display_row(1), &[0, 20]);
        assert_eq!(s.display_row(2), &[1]);
        assert_eq!(s.chi, 24);
    }

    #[test]
    fn k3_quartic_spectrum() {
        let s = spectrum(4, &[1, 1, 1, 1]);
        assert_eq!(s.h[1][1], 20);
        assert_eq!(s.chi, 24);
    }

    #[test]
    fn quintic_spectrum() {
        let s = spectrum(5, &[1, 1, 1, 1, 1]);
        assert_eq!(s.dim, 3);
        assert_eq!(s.v_numbers(), vec![1, 101]);
        assert_eq!(s.chi, -200);
    }

    #[test]
    fn elliptic_curve_spectrum() {
        let s = spectrum(6, &[1, 2, 3]);
        assert_eq!(s.h, vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(s.chi, 0);
    }

    #[test]
    fn fractional_central_charge() {
        assert_eq!(
            lg_spectrum(3, &[1, 1, 1, 1, 1]).unwrap(),
            LgOutcome::CentralCharge { num: 5, den: 3 }
        );
    }

    #[test]
    fn cross_check_quintic() {
        let g = crate::cws::realize(&crate::cws::Cws::single(5, vec![1, 1, 1, 1, 1])).unwrap();
        let hull = crate::hull::convex_hull(&g.points).unwrap();
        let dual = crate::complete::dual_points(&g.points, &hull).unwrap();
        let hodge = crate::hodge::hodge_numbers(&g.points, &hull, &dual)
            .unwrap()
            .unwrap();
        let s = spectrum(5, &[1, 1, 1, 1, 1]);
        cross_check(&s, &hodge).unwrap();
        // A doctored geometric side must be rejected.
        let bad = HodgeData::Cy3 {
            h11: 2,
            h21: 101,
            chi: -198,
        };
        assert!(cross_check(&s, &bad).is_err());
    }
}
