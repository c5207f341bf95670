//! Checked integer arithmetic on the two working widths.
//!
//! `Int` holds coordinates, facet data and everything stored long-term;
//! `Wide` holds intermediate products (determinant expansions, inner
//! products).  The default pairing is `i64`/`i128`; the `narrow` feature
//! shrinks both one step for memory-bound workloads.  Every helper returns
//! exact values or [`Error::Overflow`]; nothing wraps.

use crate::error::{Error, Result};

#[cfg(not(feature = "narrow"))]
pub type Int = i64;
#[cfg(not(feature = "narrow"))]
pub type Wide = i128;

#[cfg(feature = "narrow")]
pub type Int = i32;
#[cfg(feature = "narrow")]
pub type Wide = i64;

#[inline]
pub fn add(a: Int, b: Int, op: &'static str) -> Result<Int> {
    a.checked_add(b).ok_or(Error::Overflow { op })
}

#[inline]
pub fn sub(a: Int, b: Int, op: &'static str) -> Result<Int> {
    a.checked_sub(b).ok_or(Error::Overflow { op })
}

#[inline]
pub fn mul(a: Int, b: Int, op: &'static str) -> Result<Int> {
    a.checked_mul(b).ok_or(Error::Overflow { op })
}

#[inline]
pub fn wadd(a: Wide, b: Wide, op: &'static str) -> Result<Wide> {
    a.checked_add(b).ok_or(Error::Overflow { op })
}

#[inline]
pub fn wsub(a: Wide, b: Wide, op: &'static str) -> Result<Wide> {
    a.checked_sub(b).ok_or(Error::Overflow { op })
}

#[inline]
pub fn wmul(a: Wide, b: Wide, op: &'static str) -> Result<Wide> {
    a.checked_mul(b).ok_or(Error::Overflow { op })
}

/// Narrow a wide intermediate back to storage width.
#[inline]
pub fn narrow(a: Wide, op: &'static str) -> Result<Int> {
    Int::try_from(a).map_err(|_| Error::Overflow { op })
}

/// Exact inner product of two `Int` slices, accumulated in `Wide`.
pub fn dot(a: &[Int], b: &[Int], op: &'static str) -> Result<Wide> {
    debug_assert_eq!(a.len(), b.len(), "dot of unequal lengths");
    let mut acc: Wide = 0;
    for (&x, &y) in a.iter().zip(b) {
        acc = wadd(acc, wmul(x as Wide, y as Wide, op)?, op)?;
    }
    Ok(acc)
}

/// Nonnegative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: Int, b: Int) -> Int {
    let mut a = a.unsigned_abs();
    let mut b = b.unsigned_abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a as Int
}

/// Gcd of a whole slice.
pub fn gcd_slice(xs: &[Int]) -> Int {
    xs.iter().fold(0, |g, &x| gcd(g, x))
}

pub fn wgcd(a: Wide, b: Wide) -> Wide {
    let mut a = a.unsigned_abs();
    let mut b = b.unsigned_abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a as Wide
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn egcd(a: Int, b: Int) -> (Int, Int, Int) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1 as Int, 0 as Int);
    let (mut t0, mut t1) = (0 as Int, 1 as Int);
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

/// Exact division; errors if `b` does not divide `a`.
pub fn div_exact(a: Wide, b: Wide, op: &'static str) -> Result<Wide> {
    if b == 0 || a % b != 0 {
        return Err(Error::Internal {
            msg: format!("inexact division in {op}: {a} / {b}"),
        });
    }
    Ok(a / b)
}

/// Euclidean remainder in `[0, m)`; `m` must be positive.
#[inline]
pub fn rem_euclid(a: Int, m: Int) -> Int {
    debug_assert!(m > 0, "modulus must be positive");
    a.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(0, 0), 0);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(gcd(-4, 6), 2);
        assert_eq!(gcd(Int::MIN + 1, 1), 1);
        assert_eq!(gcd_slice(&[6, -10, 15]), 1);
        assert_eq!(gcd_slice(&[6, -18, 12]), 6);
    }

    #[test]
    fn egcd_identity() {
        for &(a, b) in &[(12, 18), (-12, 18), (7, 0), (0, -7), (240, 46)] {
            let (g, s, t) = egcd(a, b);
            assert_eq!(g, gcd(a, b));
            assert_eq!(s * a + t * b, g);
        }
    }

    #[test]
    fn overflow_is_detected() {
        assert!(matches!(
            mul(Int::MAX, 2, "t"),
            Err(Error::Overflow { .. })
        ));
        assert!(matches!(
            wmul(Wide::MAX, 2, "t"),
            Err(Error::Overflow { .. })
        ));
        assert!(narrow(Wide::from(Int::MAX) + 1, "t").is_err());
        assert_eq!(narrow(Wide::from(Int::MAX), "t").unwrap(), Int::MAX);
    }

    #[test]
    fn dot_exact() {
        assert_eq!(dot(&[1, 2, 3], &[4, -5, 6], "t").unwrap(), 12);
        let big = Int::MAX / 2;
        // Individual products exceed Int but fit in Wide.
        let d = dot(&[big, big], &[4, 4], "t").unwrap();
        assert_eq!(d, 4 * big as Wide * 2);
    }

    #[test]
    fn div_exact_rejects_remainder() {
        assert_eq!(div_exact(12, 4, "t").unwrap(), 3);
        assert!(div_exact(12, 5, "t").is_err());
        assert!(div_exact(12, 0, "t").is_err());
    }
}
