use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;

use super::AlgebraError;

/// A prime field F_p. Cheap to copy; elements carry their modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
}

/// The Mersenne prime 2^61 - 1, the default modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

impl Field {
    /// Builds the field of residues modulo `p`. `p` must be prime and below 2^62
    /// so that sums of two residues never overflow.
    pub fn new(p: u64) -> Result<Field, AlgebraError> {
        if p >= 1 << 62 || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Field { p })
    }

    pub fn mersenne61() -> Field {
        Field { p: MERSENNE_61 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> Fe {
        Fe { v: v % self.p, p: self.p }
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        let r = v.rem_euclid(self.p as i64) as u64;
        Fe { v: r, p: self.p }
    }

    pub fn zero(&self) -> Fe {
        Fe { v: 0, p: self.p }
    }

    pub fn one(&self) -> Fe {
        Fe { v: 1 % self.p, p: self.p }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe { v: rng.gen_range(0..self.p), p: self.p }
    }

    /// Evaluation point α of party `i` (0-based): α = i + 1.
    pub fn alpha(&self, i: usize) -> Fe {
        self.elem(i as u64 + 1)
    }

    /// Every element of the field, in increasing order. Only sensible for tiny p.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.p).map(move |v| Fe { v, p: self.p })
    }
}

/// An element of F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe {
    v: u64,
    p: u64,
}

impl Fe {
    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn field(&self) -> Field {
        Field { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn pow(self, mut e: u64) -> Fe {
        let mut base = self;
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Fe> {
        if self.v == 0 {
            return None;
        }
        // extended Euclid on (v, p)
        let (mut r0, mut r1) = (self.p as i128, self.v as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        let v = s0.rem_euclid(self.p as i128) as u64;
        Some(Fe { v, p: self.p })
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fe {
    type Output = Fe;
    #[inline]
    fn add(self, o: Fe) -> Fe {
        debug_assert_eq!(self.p, o.p);
        let s = self.v + o.v;
        Fe { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Sub for Fe {
    type Output = Fe;
    #[inline]
    fn sub(self, o: Fe) -> Fe {
        debug_assert_eq!(self.p, o.p);
        let v = if self.v >= o.v { self.v - o.v } else { self.v + self.p - o.v };
        Fe { v, p: self.p }
    }
}

impl Mul for Fe {
    type Output = Fe;
    #[inline]
    fn mul(self, o: Fe) -> Fe {
        debug_assert_eq!(self.p, o.p);
        let v = ((self.v as u128 * o.v as u128) % self.p as u128) as u64;
        Fe { v, p: self.p }
    }
}

impl Div for Fe {
    type Output = Fe;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Fe) -> Fe {
        self * o.inv().expect("division by zero in F_p")
    }
}

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        Fe { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
}

impl AddAssign for Fe {
    fn add_assign(&mut self, o: Fe) {
        *self = *self + o;
    }
}

impl SubAssign for Fe {
    fn sub_assign(&mut self, o: Fe) {
        *self = *self - o;
    }
}

impl MulAssign for Fe {
    fn mul_assign(&mut self, o: Fe) {
        *self = *self * o;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
