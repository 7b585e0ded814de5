//! Dense univariate polynomials over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::Scalar;

/// A univariate polynomial with coefficients stored from degree 0 upward.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and [`Poly::lc`] is always nonzero when it exists.
#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `c·x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![c.zero_like(); k];
        v.push(c);
        Poly::new(v)
    }

    /// The polynomial `x`, using `one` as a template for the field.
    pub fn x(one: &F) -> Self {
        Poly::new(vec![one.zero_like(), one.one_like()])
    }

    /// The polynomial `x - r`.
    pub fn linear_root(r: &F) -> Self {
        Poly::new(vec![-r.clone(), r.one_like()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = -1`.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i`, with `zero` returned beyond the degree.
    pub fn coeff(&self, i: usize, zero: &F) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| zero.zero_like())
    }

    pub fn get(&self, i: usize) -> Option<&F> {
        self.coeffs.get(i)
    }

    /// Some element of the coefficient field, if the polynomial is nonzero.
    pub fn template(&self) -> Option<&F> {
        self.coeffs.first()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(|l| l.is_one())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * c.from_i64_like(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn divrem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        let dl = d.lc().expect("polynomial division by zero");
        let dinv = dl.inv().expect("nonzero leading coefficient");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let z = dl.zero_like();
        let mut q = vec![z; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() * &dinv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly<F>) -> Poly<F> {
        self.divrem(d).1
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly<F>) -> Option<Poly<F>> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly<F>) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero if both inputs vanish).
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly<F>) -> (Poly<F>, Poly<F>, Poly<F>) {
        let one = self
            .template()
            .or(other.template())
            .map(|c| c.one_like())
            .expect("xgcd of two zero polynomials");
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(one.clone()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(one));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = r0.lc().expect("nonzero gcd").inv().expect("unit");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly<F>) -> Option<Poly<F>> {
        let (g, s, _) = self.rem(m).xgcd(m);
        g.is_constant().then(|| s.rem(m))
    }

    pub fn pow(&self, k: u32) -> Poly<F> {
        let one = match self.template() {
            Some(c) => c.one_like(),
            None => return if k == 0 { panic!("0^0 for polynomials") } else { Poly::zero() },
        };
        let mut acc = Poly::constant(one);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly<F>) -> Poly<F> {
        let one = m.lc().expect("nonzero modulus").one_like();
        let mut acc = Poly::constant(one).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            base = (&base * &base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly<F>) -> Poly<F> {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        self.gcd(&self.derivative()).is_constant()
    }

    /// Exact square root `s` with `s² = self`, if one exists over the field.
    pub fn sqrt(&self) -> Option<Poly<F>> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let n = self.coeffs.len() - 1;
        if n % 2 == 1 {
            return None;
        }
        let m = n / 2;
        let lead = self.lc().unwrap().sqrt()?;
        // determine coefficients from the top down
        let two_lead = lead.clone() + &lead;
        let z = lead.zero_like();
        let mut s = vec![z; m + 1];
        s[m] = lead;
        for k in (0..m).rev() {
            // coefficient of x^{m+k} in s² equals self[m+k]
            let mut acc = self.coeffs[m + k].clone();
            for i in (k + 1)..=m {
                let j = m + k - i;
                if j > k && j <= m {
                    acc = acc - s[i].clone() * &s[j];
                }
            }
            s[k] = acc / &two_lead;
        }
        let r = Poly::new(s);
        (&r * &r == *self).then_some(r)
    }

    /// Reversed polynomial `x^n p(1/x)` for nominal degree `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Poly<F> {
        if self.is_zero() {
            return Poly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[n - i] = c.clone();
        }
        Poly::new(v)
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &F) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::linear_root(r);
        let mut k = 0;
        let mut p = self.clone();
        while let Some(q) = p.div_exact(&lin) {
            p = q;
            k += 1;
        }
        k
    }

    /// Resultant of two univariate polynomials (Euclidean algorithm).
    pub fn resultant(&self, other: &Poly<F>) -> F {
        let zero = match self.template().or(other.template()) {
            Some(c) => c.zero_like(),
            None => panic!("resultant of two zero polynomials"),
        };
        if self.is_zero() || other.is_zero() {
            return zero;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = zero.one_like();
        loop {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            if db == 0 {
                return acc * b.lc().unwrap().pow(da as u64);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return zero;
            }
            let dr = r.degree().unwrap();
            if da % 2 == 1 && db % 2 == 1 {
                acc = -acc;
            }
            acc = acc * b.lc().unwrap().pow((da - dr) as u64);
            a = b;
            b = r;
        }
    }
}

/// Evaluates the binary form of nominal degree `n` with coefficients `p`
/// (coefficient of `x0^i x1^(n-i)` is `p[i]`) at the homogeneous point `pt`.
pub fn eval_form<F: Scalar>(p: &Poly<F>, n: usize, pt: &[F; 2]) -> F {
    let mut acc = pt[0].zero_like();
    for i in 0..=n {
        if let Some(c) = p.get(i) {
            if !c.is_zero() {
                acc = acc + c.clone() * pt[0].pow(i as u64) * pt[1].pow((n - i) as u64);
            }
        }
    }
    acc
}

/// Substitutes `x0 = m[0]·x + m[1]`, `x1 = m[2]·x + m[3]` into the binary form
/// of nominal degree `n` and returns the resulting polynomial in `x`.
pub fn substitute_form<F: Scalar>(p: &Poly<F>, n: usize, m: &[F; 4]) -> Poly<F> {
    let a = Poly::new(vec![m[1].clone(), m[0].clone()]);
    let b = Poly::new(vec![m[3].clone(), m[2].clone()]);
    let one = m[0].one_like();
    let mut apow = vec![Poly::constant(one.clone())];
    let mut bpow = vec![Poly::constant(one)];
    for _ in 0..n {
        apow.push(apow.last().unwrap() * &a);
        bpow.push(bpow.last().unwrap() * &b);
    }
    let mut acc = Poly::zero();
    for i in 0..=n {
        if let Some(c) = p.get(i) {
            if !c.is_zero() {
                acc = &acc + &(&apow[i] * &bpow[n - i]).scale(c);
            }
        }
    }
    acc
}

impl<F: Scalar> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<F: Scalar> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.clone() + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(v)
    }
}

impl<F: Scalar> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.clone() - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(v)
    }
}

impl<F: Scalar> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let z = self.coeffs[0].zero_like();
        let mut v = vec![z; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b;
            }
        }
        Poly::new(v)
    }
}

impl<F: Scalar> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<F: Scalar> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: Poly<F>) -> Poly<F> {
        &self + &o
    }
}

impl<F: Scalar> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: Poly<F>) -> Poly<F> {
        &self - &o
    }
}

impl<F: Scalar> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: Poly<F>) -> Poly<F> {
        &self * &o
    }
}

impl<F: Scalar> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}
