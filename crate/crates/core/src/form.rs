//! Binary forms on P¹ and Möbius transformations.
//!
//! A binary form of nominal degree `n` is stored as the polynomial obtained by
//! setting `s1 = 1`: the coefficient of `s0^i s1^(n−i)` sits in position `i`.
//! A drop of the actual degree below `n` records roots at `[1:0]`.

use crate::field::Scalar;
use crate::poly::{eval_form, substitute_form, Poly};
use crate::quadric::normalize2;

#[derive(Clone, Debug, PartialEq)]
pub struct Form<F: Scalar> {
    pub p: Poly<F>,
    pub n: usize,
}

impl<F: Scalar> Form<F> {
    pub fn new(p: Poly<F>, n: usize) -> Self {
        assert!(p.deg() <= n as isize, "form degree exceeds its nominal degree");
        Form { p, n }
    }

    pub fn from_coeffs(c: Vec<F>) -> Self {
        let n = c.len() - 1;
        Form { p: Poly::new(c), n }
    }

    /// Coefficients of `s0^i s1^(n−i)` for `i = 0..=n`.
    pub fn coeffs(&self, zero: &F) -> Vec<F> {
        (0..=self.n).map(|i| self.p.coeff(i, zero)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn eval(&self, pt: &[F; 2]) -> F {
        eval_form(&self.p, self.n, pt)
    }

    /// Multiplicity of the root `[1:0]`.
    pub fn mult_at_infinity(&self) -> usize {
        match self.p.degree() {
            None => usize::MAX,
            Some(k) => self.n - k,
        }
    }

    pub fn mul(&self, o: &Form<F>) -> Form<F> {
        Form { p: &self.p * &o.p, n: self.n + o.n }
    }

    pub fn add(&self, o: &Form<F>) -> Form<F> {
        assert_eq!(self.n, o.n, "adding forms of different degrees");
        Form { p: &self.p + &o.p, n: self.n }
    }

    pub fn sub(&self, o: &Form<F>) -> Form<F> {
        assert_eq!(self.n, o.n, "subtracting forms of different degrees");
        Form { p: &self.p - &o.p, n: self.n }
    }

    pub fn scale(&self, c: &F) -> Form<F> {
        Form { p: self.p.scale(c), n: self.n }
    }

    /// Multiplication by `s0`.
    pub fn mul_s0(&self) -> Form<F> {
        Form { p: self.p.shift(1), n: self.n + 1 }
    }

    /// Multiplication by `s1`.
    pub fn mul_s1(&self) -> Form<F> {
        Form { p: self.p.clone(), n: self.n + 1 }
    }

    /// Whether all roots in P¹ are simple.
    pub fn is_squarefree(&self) -> bool {
        !self.p.is_zero() && self.mult_at_infinity() <= 1 && self.p.is_squarefree()
    }

    /// Whether the two forms have no common root in P¹.
    pub fn coprime(&self, o: &Form<F>) -> bool {
        if self.p.is_zero() || o.p.is_zero() {
            return false;
        }
        if self.mult_at_infinity() > 0 && o.mult_at_infinity() > 0 {
            return false;
        }
        self.p.gcd(&o.p).is_constant()
    }

    /// Whether the two forms are proportional.
    pub fn proportional(&self, o: &Form<F>) -> bool {
        if self.n != o.n {
            return false;
        }
        match (self.p.lc(), o.p.lc()) {
            (None, None) => true,
            (Some(a), Some(b)) => self.p.deg() == o.p.deg() && self.p.scale(b) == o.p.scale(a),
            _ => false,
        }
    }

    /// Distinct roots rational over the coefficient field, `[1:0]` first if present.
    pub fn roots(&self) -> Vec<[F; 2]> {
        let t = self.p.template().expect("roots of the zero form");
        let mut out = Vec::new();
        if self.mult_at_infinity() > 0 {
            out.push([t.one_like(), t.zero_like()]);
        }
        for r in F::poly_roots(&self.p) {
            out.push([r, t.one_like()]);
        }
        out
    }

    /// The pullback `F(M(x))`, a form of the same nominal degree in `x`.
    pub fn pullback(&self, m: &Moebius<F>) -> Form<F> {
        Form { p: substitute_form(&self.p, self.n, &m.m), n: self.n }
    }

    /// Monic affine part (the polynomial with the roots at `[1:0]` dropped).
    pub fn monic_affine(&self) -> Poly<F> {
        self.p.monic()
    }
}

/// `[x0 : x1] ↦ [m0·x0 + m1·x1 : m2·x0 + m3·x1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Moebius<F> {
    pub m: [F; 4],
}

impl<F: Scalar> Moebius<F> {
    pub fn new(m: [F; 4]) -> Self {
        let d = m[0].clone() * &m[3] - m[1].clone() * &m[2];
        assert!(!d.is_zero(), "singular Möbius transformation");
        Moebius { m }
    }

    pub fn identity(one: &F) -> Self {
        Moebius::new([one.one_like(), one.zero_like(), one.zero_like(), one.one_like()])
    }

    pub fn apply(&self, p: &[F; 2]) -> [F; 2] {
        let m = &self.m;
        normalize2([
            m[0].clone() * &p[0] + m[1].clone() * &p[1],
            m[2].clone() * &p[0] + m[3].clone() * &p[1],
        ])
    }

    pub fn inverse(&self) -> Moebius<F> {
        let m = &self.m;
        Moebius::new([m[3].clone(), -m[1].clone(), -m[2].clone(), m[0].clone()])
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Moebius<F>) -> Moebius<F> {
        let (a, b) = (&self.m, &o.m);
        Moebius::new([
            a[0].clone() * &b[0] + a[1].clone() * &b[2],
            a[0].clone() * &b[1] + a[1].clone() * &b[3],
            a[2].clone() * &b[0] + a[3].clone() * &b[2],
            a[2].clone() * &b[1] + a[3].clone() * &b[3],
        ])
    }

    pub fn det(&self) -> F {
        self.m[0].clone() * &self.m[3] - self.m[1].clone() * &self.m[2]
    }

    /// Whether two transformations agree projectively.
    pub fn proj_eq(&self, o: &Moebius<F>) -> bool {
        crate::field::proj_eq(&self.m, &o.m)
    }

    /// The unique transformation sending three distinct points to three distinct points.
    pub fn from_three(src: [&[F; 2]; 3], dst: [&[F; 2]; 3]) -> Option<Moebius<F>> {
        let a = Moebius::to_standard(src)?;
        let b = Moebius::to_standard(dst)?;
        Some(b.inverse().compose(&a))
    }

    /// The transformation sending `p1, p2, p3` to `∞ = [1:0]`, `0 = [0:1]`, `1 = [1:1]`.
    fn to_standard(p: [&[F; 2]; 3]) -> Option<Moebius<F>> {
        let det = |a: &[F; 2], b: &[F; 2]| a[0].clone() * &b[1] - a[1].clone() * &b[0];
        if det(p[0], p[1]).is_zero() || det(p[0], p[2]).is_zero() || det(p[1], p[2]).is_zero() {
            return None;
        }
        // numerator vanishes at p2, denominator at p1; scale so p3 ↦ [1:1]
        let num_scale = det(p[2], p[0]);
        let den_scale = det(p[2], p[1]);
        // det(x, p2) = x0·p2[1] − x1·p2[0]
        let m = [
            p[1][1].clone() * &num_scale,
            -(p[1][0].clone() * &num_scale),
            p[0][1].clone() * &den_scale,
            -(p[0][0].clone() * &den_scale),
        ];
        Some(Moebius::new(m))
    }
}
