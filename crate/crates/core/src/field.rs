//! Exact scalar arithmetic: prime fields GF(p) and arbitrary-precision
//! rationals behind one trait.
//!
//! Every computation in this crate happens over a fixed field context; the
//! context is part of every module/complex value and mixing characteristics
//! is rejected at the boundaries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// A field context. Elements are plain data; all arithmetic goes through the
/// context so that GF(p) elements can stay as bare machine words.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    /// 0 for the rationals, p for GF(p).
    fn characteristic(&self) -> u64;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; panics on zero (callers guard).
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// `dst[k] += f * src[k]` for every k. The hot loop of Gaussian
    /// elimination; GF(p) overrides it with delayed-reduction arithmetic.
    fn row_axpy(&self, dst: &mut [Self::Elem], src: &[Self::Elem], f: &Self::Elem) {
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            *d = self.add(d, &self.mul(f, s));
        }
    }

    fn row_scale(&self, row: &mut [Self::Elem], f: &Self::Elem) {
        for d in row.iter_mut() {
            *d = self.mul(d, f);
        }
    }

    /// Human rendering; GF(p) uses the balanced representative so small
    /// negative values print as `-1` rather than `p-1`.
    fn render(&self, a: &Self::Elem) -> String;
}

/// GF(p) for an odd prime p < 2^31. Elements are `u32` in `0..p`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u32,
    // floor(2^64 / p), for Barrett reduction of u64 products
    barrett: u64,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

pub const DEFAULT_PRIME: u32 = 32003;

impl PrimeField {
    pub fn new(p: u32) -> Self {
        assert!((2..(1 << 31)).contains(&p), "prime out of range");
        assert!(is_prime(p), "{p} is not prime");
        let barrett = (u128::from(u64::MAX) + 1)
            .checked_div(u128::from(p))
            .unwrap() as u64;
        PrimeField { p, barrett }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    #[inline(always)]
    fn reduce(&self, x: u64) -> u32 {
        let q = ((u128::from(x) * u128::from(self.barrett)) >> 64) as u64;
        let mut r = x - q * u64::from(self.p);
        while r >= u64::from(self.p) {
            r -= u64::from(self.p);
        }
        r as u32
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    let p = u64::from(p);
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        u64::from(self.p)
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1 % self.p
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn from_i64(&self, v: i64) -> u32 {
        let p = i64::from(self.p);
        (v.rem_euclid(p)) as u32
    }

    #[inline(always)]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline(always)]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.reduce(u64::from(*a) * u64::from(*b))
    }

    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        // extended Euclid on (a, p)
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (i64::from(self.p), i64::from(*a));
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        self.from_i64(t)
    }

    #[inline]
    fn row_axpy(&self, dst: &mut [u32], src: &[u32], f: &u32) {
        let f = u64::from(*f);
        if f == 0 {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            *d = self.reduce(u64::from(*d) + f * u64::from(*s));
        }
    }

    fn row_scale(&self, row: &mut [u32], f: &u32) {
        let f = u64::from(*f);
        for d in row.iter_mut() {
            *d = self.reduce(u64::from(*d) * f);
        }
    }

    fn render(&self, a: &u32) -> String {
        if *a > self.p / 2 {
            format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }
}

/// The field of rational numbers, exact big-integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }

    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Parse a scalar from the module file syntax: a JSON integer, or a string
/// `"p"` / `"p/q"` (required for char 0, accepted everywhere).
pub fn parse_scalar<F: Field>(field: &F, text: &str) -> Result<F::Elem, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator {num:?}"))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator {den:?}"))?;
        if d == 0 {
            return Err("zero denominator".into());
        }
        let dv = field.from_i64(d);
        if field.is_zero(&dv) {
            return Err(format!(
                "denominator {d} vanishes in characteristic {}",
                field.characteristic()
            ));
        }
        Ok(field.div(&field.from_i64(n), &dv))
    } else {
        let n: i64 = text.parse().map_err(|_| format!("bad integer {text:?}"))?;
        Ok(field.from_i64(n))
    }
}
