//! Prime fields with word-sized odd modulus.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rand::Rng;

use super::{Field, Scalar};
use crate::error::FieldError;
use crate::poly::Poly;

/// The prime field F_p. The modulus must be an odd prime below 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(3..1 << 31).contains(&p) || !is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> Fp {
        Fp { v: v % self.p, p: self.p }
    }

    /// All elements in increasing residue order.
    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.p).map(move |v| Fp { v, p: self.p })
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue modulo an odd prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn check(&self, o: &Fp) {
        debug_assert_eq!(self.p, o.p, "mixing residues of different primes");
    }

    /// Legendre symbol as 1, -1 or 0.
    pub fn legendre(&self) -> i32 {
        if self.v == 0 {
            return 0;
        }
        if self.pow((self.p - 1) / 2).v == 1 {
            1
        } else {
            -1
        }
    }

    fn tonelli_shanks(&self) -> Option<Fp> {
        if self.v == 0 {
            return Some(*self);
        }
        if self.legendre() != 1 {
            return None;
        }
        let p = self.p;
        if p % 4 == 3 {
            return Some(self.pow((p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = Fp { v: 2, p };
        while z.legendre() != -1 {
            z.v += 1;
        }
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow(q.div_ceil(2));
        while t.v != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2.v != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let b = c.pow(1u64 << (m - i - 1));
            m = i;
            c = b * b;
            t = t * c;
            r = r * b;
        }
        Some(r)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        self.check(&o);
        let s = self.v + o.v;
        Fp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        self.check(&o);
        let v = if self.v >= o.v { self.v - o.v } else { self.v + self.p - o.v };
        Fp { v, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        self.check(&o);
        Fp { v: self.v * o.v % self.p, p: self.p }
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Fp) -> Fp {
        self * o.inv().expect("division by zero in F_p")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
}

macro_rules! fp_ref_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<'a> $tr<&'a Fp> for Fp {
            type Output = Fp;
            fn $m(self, o: &'a Fp) -> Fp {
                $tr::$m(self, *o)
            }
        }
    )*};
}
fp_ref_ops!(Add add, Sub sub, Mul mul, Div div);

impl Scalar for Fp {
    type Field = PrimeField;

    fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn inv(&self) -> Option<Fp> {
        if self.v == 0 {
            return None;
        }
        // extended Euclid on machine integers
        let (mut a, mut b) = (self.v as i64, self.p as i64);
        let (mut x0, mut x1) = (1i64, 0i64);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        let v = x0.rem_euclid(self.p as i64) as u64;
        Some(Fp { v, p: self.p })
    }

    fn zero_like(&self) -> Fp {
        Fp { v: 0, p: self.p }
    }

    fn one_like(&self) -> Fp {
        Fp { v: 1, p: self.p }
    }

    fn from_i64_like(&self, n: i64) -> Fp {
        Fp { v: n.rem_euclid(self.p as i64) as u64, p: self.p }
    }

    fn sqrt(&self) -> Option<Fp> {
        self.tonelli_shanks()
    }

    fn canonical_cmp(&self, other: &Fp) -> Ordering {
        self.v.cmp(&other.v)
    }

    fn is_one(&self) -> bool {
        self.v == 1
    }

    fn poly_roots(p: &Poly<Fp>) -> Vec<Fp> {
        crate::roots::fp_roots(p)
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        Fp { v: 0, p: self.p }
    }

    fn one(&self) -> Fp {
        Fp { v: 1, p: self.p }
    }

    fn from_i64(&self, n: i64) -> Fp {
        Fp { v: n.rem_euclid(self.p as i64) as u64, p: self.p }
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn depth(&self) -> usize {
        0
    }

    fn lift(&self, x: &Fp) -> Fp {
        *x
    }

    fn sqrt(&self, x: &Fp) -> Option<Fp> {
        x.tonelli_shanks()
    }

    fn adjoin_sqrt(&self, x: &Fp, _depth_limit: usize) -> Result<(Self, Fp), FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroRadicand);
        }
        match x.tonelli_shanks() {
            Some(r) => Ok((*self, r)),
            None => Err(FieldError::NonSquareInPrimeField { p: self.p, value: x.v }),
        }
    }

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: u64) -> Fp {
        if height >= self.p / 2 {
            self.elem(rng.gen_range(0..self.p))
        } else {
            let h = height as i64;
            self.from_i64(rng.gen_range(-h..=h))
        }
    }

    fn descriptor(&self) -> String {
        format!("fp:{}", self.p)
    }

    fn parse_elem(&self, s: &str) -> Result<Fp, FieldError> {
        let t = s.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| FieldError::Parse(s.to_string()))?;
            let d: i64 = d.trim().parse().map_err(|_| FieldError::Parse(s.to_string()))?;
            let d = self.from_i64(d);
            let di = d.inv().ok_or_else(|| FieldError::Parse(s.to_string()))?;
            return Ok(self.from_i64(n) * di);
        }
        let n: i64 = t.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        Ok(self.from_i64(n))
    }
}
