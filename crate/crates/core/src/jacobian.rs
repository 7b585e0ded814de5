//! Divisors on odd-degree hyperelliptic curves `y² = f(x)` with one point at
//! infinity: Mumford representation, Cantor composition and reduction,
//! effective representatives, theta characteristics, Riemann–Roch spaces and
//! the pencils they span.
//!
//! Effective divisors are kept in a canonical form `fibers(h) + (u, v) + k·∞`
//! where `(u, v)` is semireduced (no pair `P + ιP`) and `h` collects the full
//! fibers `P + ιP` of the x-projection. Two effective divisors are equal
//! exactly when their canonical forms agree.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub enum Point<F> {
    Infinity,
    Affine(F, F),
}

/// An effective divisor `fibers(h) + (u, v) + inf·∞` in canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct EffDiv<F: Scalar> {
    pub h: Poly<F>,
    pub u: Poly<F>,
    pub v: Poly<F>,
    pub inf: usize,
}

impl<F: Scalar> EffDiv<F> {
    pub fn zero(one: &F) -> Self {
        EffDiv { h: Poly::constant(one.one_like()), u: Poly::constant(one.one_like()), v: Poly::zero(), inf: 0 }
    }

    pub fn infinity(one: &F, k: usize) -> Self {
        EffDiv { inf: k, ..EffDiv::zero(one) }
    }

    pub fn degree(&self) -> usize {
        2 * self.h.deg() as usize + self.u.deg() as usize + self.inf
    }

    pub fn affine_degree(&self) -> usize {
        2 * self.h.deg() as usize + self.u.deg() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_constant() && self.u.is_constant() && self.inf == 0
    }

    /// The affine part, with the points at infinity dropped.
    pub fn affine(&self) -> Self {
        EffDiv { inf: 0, ..self.clone() }
    }

    /// The image under the hyperelliptic involution.
    pub fn iota(&self) -> Self {
        EffDiv { h: self.h.clone(), u: self.u.clone(), v: (-&self.v).rem(&self.u), inf: self.inf }
    }

    /// Product of the x-coordinates' minimal polynomials over the support.
    pub fn support_poly(&self) -> Poly<F> {
        &self.h * &self.u
    }

    /// Points with multiplicities, when every point is rational.
    pub fn rational_points(&self, curve: &Curve<F>) -> Option<Vec<(Point<F>, usize)>> {
        let mut out: Vec<(Point<F>, usize)> = Vec::new();
        let mut push = |p: Point<F>, m: usize| match out.iter_mut().find(|e| e.0 == p) {
            Some(e) => e.1 += m,
            None => out.push((p, m)),
        };
        let mut seen = 0usize;
        for x in F::poly_roots(&self.u) {
            let m = self.u.root_multiplicity(&x);
            seen += m;
            push(Point::Affine(x.clone(), self.v.eval(&x)), m);
        }
        if seen as isize != self.u.deg() {
            return None;
        }
        seen = 0;
        for x in F::poly_roots(&self.h) {
            let m = self.h.root_multiplicity(&x);
            seen += m;
            let y = curve.f.eval(&x).sqrt()?;
            if y.is_zero() {
                push(Point::Affine(x, y), 2 * m);
            } else {
                push(Point::Affine(x.clone(), -y.clone()), m);
                push(Point::Affine(x, y), m);
            }
        }
        if seen as isize != self.h.deg() {
            return None;
        }
        if self.inf > 0 {
            push(Point::Infinity, self.inf);
        }
        Some(out)
    }
}

/// A divisor written as a difference of two effective divisors.
#[derive(Clone, Debug, PartialEq)]
pub struct Divisor<F: Scalar> {
    pub pos: EffDiv<F>,
    pub neg: EffDiv<F>,
}

impl<F: Scalar> Divisor<F> {
    pub fn effective(e: EffDiv<F>) -> Self {
        let one = e.h.lc().expect("monic").one_like();
        Divisor { pos: e, neg: EffDiv::zero(&one) }
    }

    pub fn degree(&self) -> isize {
        self.pos.degree() as isize - self.neg.degree() as isize
    }
}

/// A reduced Mumford pair: the class of `(u, v) − deg(u)·∞` with `deg u ≤ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mumford<F: Scalar> {
    pub u: Poly<F>,
    pub v: Poly<F>,
}

impl<F: Scalar> Mumford<F> {
    pub fn weight(&self) -> usize {
        self.u.deg() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_constant()
    }
}

/// A theta characteristic `θ = Σ_{f_i | side} w_i + ε·∞ − 2·∞`, given by a
/// monic factor of `f` and a flag for the point at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaChar<F: Scalar> {
    pub side: Poly<F>,
    pub with_inf: bool,
}

/// A Riemann–Roch space `L(D)` for `D = D_aff + k·∞`, with elements written as
/// `(p + y·q)/s` for a fixed denominator `s`.
#[derive(Clone, Debug)]
pub struct RrSpace<F: Scalar> {
    pub s: Poly<F>,
    /// Zeros every numerator must carry: `div(s)_aff − D_aff`.
    pub forced: EffDiv<F>,
    /// Bound on the pole order at infinity of the numerators.
    pub bound: isize,
    pub basis: Vec<(Poly<F>, Poly<F>)>,
}

/// A base-point-free pencil spanned by two elements of a Riemann–Roch space.
#[derive(Clone, Debug)]
pub struct Pencil<F: Scalar> {
    pub space: RrSpace<F>,
    pub degree: usize,
}

#[derive(Clone, Debug)]
pub struct Curve<F: Scalar> {
    pub f: Poly<F>,
    pub g: usize,
    one: F,
}

impl<F: Scalar> Curve<F> {
    pub fn new(f: Poly<F>) -> Result<Self> {
        let deg = f.deg();
        if deg < 3 || deg % 2 == 0 {
            return Err(Error::Input(format!("hyperelliptic model needs odd degree at least 3, got {deg}")));
        }
        if !f.is_squarefree() {
            return Err(Error::Degenerate("branch polynomial is not squarefree".into()));
        }
        let one = f.lc().unwrap().one_like();
        Ok(Curve { g: (deg as usize - 1) / 2, f, one })
    }

    pub fn one(&self) -> F {
        self.one.clone()
    }

    fn poly_one(&self) -> Poly<F> {
        Poly::constant(self.one.clone())
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => (y.clone() * y - self.f.eval(x)).is_zero(),
        }
    }

    pub fn involution(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), -y.clone()),
        }
    }

    pub fn is_weierstrass(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(_, y) => y.is_zero(),
        }
    }

    pub fn zero_div(&self) -> EffDiv<F> {
        EffDiv::zero(&self.one)
    }

    pub fn identity(&self) -> Mumford<F> {
        Mumford { u: self.poly_one(), v: Poly::zero() }
    }

    pub fn point_div(&self, p: &Point<F>) -> EffDiv<F> {
        match p {
            Point::Infinity => EffDiv::infinity(&self.one, 1),
            Point::Affine(x, y) => EffDiv {
                h: self.poly_one(),
                u: Poly::linear_root(x),
                v: Poly::constant(y.clone()),
                inf: 0,
            },
        }
    }

    /// The sum of the given points as an effective divisor.
    pub fn points_div(&self, pts: &[Point<F>]) -> EffDiv<F> {
        pts.iter().fold(self.zero_div(), |acc, p| self.eff_add(&acc, &self.point_div(p)))
    }

    /// The divisor `Σ_{f_i | w} w_i` of the Weierstrass points over the roots of `w`.
    pub fn weierstrass_div(&self, w: &Poly<F>) -> EffDiv<F> {
        EffDiv { h: self.poly_one(), u: w.monic(), v: Poly::zero(), inf: 0 }
    }

    /// Whether `(u, v)` is a valid semireduced pair: `u | f − v²`.
    pub fn is_semireduced(&self, u: &Poly<F>, v: &Poly<F>) -> bool {
        u.is_monic() && v.deg() < u.deg() && u.divides(&(&self.f - &(v * v)))
    }

    /// Composition of two semireduced pairs: returns the common fibers `d`
    /// together with the semireduced pair of `D1 + D2 − fibers(d)`.
    fn compose(&self, a: (&Poly<F>, &Poly<F>), b: (&Poly<F>, &Poly<F>)) -> (Poly<F>, Poly<F>, Poly<F>) {
        let (u1, v1) = a;
        let (u2, v2) = b;
        let (d0, e1, e2) = u1.xgcd(u2);
        let (d, c1, c2) = d0.xgcd(&(v1 + v2));
        let s1 = &c1 * &e1;
        let s2 = &c1 * &e2;
        let s3 = c2;
        let d2 = &d * &d;
        let u = (u1 * u2).div_exact(&d2).expect("gcd divides both").monic();
        let num = &(&(&(&s1 * u1) * v2) + &(&(&s2 * u2) * v1)) + &(&s3 * &(&(v1 * v2) + &self.f));
        let v = num.div_exact(&d).expect("Cantor composition divides exactly");
        let v = if u.is_constant() { Poly::zero() } else { v.rem(&u) };
        (d, u, v)
    }

    /// Sum of effective divisors in canonical form.
    pub fn eff_add(&self, a: &EffDiv<F>, b: &EffDiv<F>) -> EffDiv<F> {
        let (d, u, v) = self.compose((&a.u, &a.v), (&b.u, &b.v));
        EffDiv { h: &(&a.h * &b.h) * &d, u, v, inf: a.inf + b.inf }
    }

    pub fn eff_scale(&self, a: &EffDiv<F>, k: usize) -> EffDiv<F> {
        (0..k).fold(self.zero_div(), |acc, _| self.eff_add(&acc, a))
    }

    /// `a − b` when `b ≤ a`, and `None` otherwise.
    pub fn eff_sub(&self, a: &EffDiv<F>, b: &EffDiv<F>) -> Option<EffDiv<F>> {
        if b.inf > a.inf {
            return None;
        }
        let t = self.eff_add(&a.affine(), &b.iota().affine());
        let hb = &(&b.h * &b.h) * &b.u;
        let h = t.h.div_exact(&hb)?;
        let out = EffDiv { h, u: t.u, v: t.v, inf: a.inf - b.inf };
        // `b ≤ a` exactly when adding `b` back recovers `a`
        (self.eff_add(&out, b) == *a).then_some(out)
    }

    pub fn eff_contains(&self, a: &EffDiv<F>, b: &EffDiv<F>) -> bool {
        self.eff_sub(a, b).is_some()
    }

    /// The reduced representative of the class of `(u, v) − deg(u)·∞`.
    pub fn reduce(&self, u: &Poly<F>, v: &Poly<F>) -> Mumford<F> {
        let (mut u, mut v) = (u.clone(), v.clone());
        while u.deg() > self.g as isize {
            let up = (&self.f - &(&v * &v)).div_exact(&u).expect("semireduced pair").monic();
            v = (-&v).rem(&up);
            u = up;
        }
        if u.is_constant() {
            v = Poly::zero();
        }
        Mumford { u, v }
    }

    pub fn add(&self, a: &Mumford<F>, b: &Mumford<F>) -> Mumford<F> {
        let (_, u, v) = self.compose((&a.u, &a.v), (&b.u, &b.v));
        self.reduce(&u, &v)
    }

    pub fn neg(&self, a: &Mumford<F>) -> Mumford<F> {
        Mumford { u: a.u.clone(), v: (-&a.v).rem(&a.u) }
    }

    pub fn sub(&self, a: &Mumford<F>, b: &Mumford<F>) -> Mumford<F> {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Mumford<F>, k: i64) -> Mumford<F> {
        let base = if k < 0 { self.neg(a) } else { a.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &sq);
            }
            sq = self.add(&sq, &sq);
            e >>= 1;
        }
        acc
    }

    /// Class of `E − deg(E)·∞` for an effective `E`.
    pub fn class_of_eff(&self, e: &EffDiv<F>) -> Mumford<F> {
        self.reduce(&e.u, &e.v)
    }

    /// Class of `D − deg(D)·∞`.
    pub fn class(&self, d: &Divisor<F>) -> Mumford<F> {
        self.sub(&self.class_of_eff(&d.pos), &self.class_of_eff(&d.neg))
    }

    /// Whether two divisors of the same degree are linearly equivalent.
    pub fn linearly_equivalent(&self, a: &Divisor<F>, b: &Divisor<F>) -> bool {
        a.degree() == b.degree() && self.class(a) == self.class(b)
    }

    /// An effective divisor linearly equivalent to `D`, if one exists.
    pub fn effective_in_class(&self, d: &Divisor<F>) -> Option<EffDiv<F>> {
        let k = d.degree();
        if k < 0 {
            return None;
        }
        let m = self.class(d);
        let e = m.weight() as isize;
        (e <= k).then(|| EffDiv { h: self.poly_one(), u: m.u, v: m.v, inf: (k - e) as usize })
    }

    pub fn theta(&self, side: Poly<F>, with_inf: bool) -> Result<ThetaChar<F>> {
        let side = side.monic();
        if !side.divides(&self.f) {
            return Err(Error::Input("theta side must divide the branch polynomial".into()));
        }
        let t = ThetaChar { side, with_inf };
        if (t.side.deg() as usize + usize::from(with_inf)) % 2 != (self.g + 1) % 2 {
            return Err(Error::Input("theta side has the wrong parity of Weierstrass points".into()));
        }
        Ok(t)
    }

    /// The divisor `Σ w_i + ε·∞ − (deg + ε − g + 1)·∞` of degree `g − 1`.
    pub fn theta_divisor(&self, t: &ThetaChar<F>) -> Divisor<F> {
        let k = t.side.deg() as usize + usize::from(t.with_inf);
        let pos = EffDiv { h: self.poly_one(), u: t.side.clone(), v: Poly::zero(), inf: usize::from(t.with_inf) };
        let neg_inf = k as isize - (self.g as isize - 1);
        if neg_inf >= 0 {
            Divisor { pos, neg: EffDiv::infinity(&self.one, neg_inf as usize) }
        } else {
            Divisor {
                pos: EffDiv { inf: pos.inf + (-neg_inf) as usize, ..pos },
                neg: self.zero_div(),
            }
        }
    }

    /// Checks `2θ ∼ K = (2g − 2)·∞`.
    pub fn is_theta_characteristic(&self, t: &ThetaChar<F>) -> bool {
        let c = self.class(&self.theta_divisor(t));
        self.add(&c, &c).is_identity()
    }

    /// Whether `h⁰(θ) = 0`; errors if `t` is not a theta characteristic.
    pub fn is_ineffective(&self, t: &ThetaChar<F>) -> Result<bool> {
        if !self.is_theta_characteristic(t) {
            return Err(Error::Invariant("2θ is not canonical".into()));
        }
        Ok(self.effective_in_class(&self.theta_divisor(t)).is_none())
    }

    /// The unique effective divisor of degree `g` in `|θ + P|` for an
    /// ineffective `θ` and an effective divisor `P` of degree one.
    pub fn theta_polyhedron(&self, t: &ThetaChar<F>, p: &EffDiv<F>) -> Result<EffDiv<F>> {
        if p.degree() != 1 {
            return Err(Error::Input("polyhedron needs a single point".into()));
        }
        if !self.is_ineffective(t)? {
            return Err(Error::Degenerate("theta characteristic is effective".into()));
        }
        let mut d = self.theta_divisor(t);
        d.pos = self.eff_add(&d.pos, p);
        self.effective_in_class(&d).ok_or_else(|| Error::Invariant("|θ + P| is empty".into()))
    }

    /// Pole order at infinity of `p + y·q`.
    pub fn pole_order(&self, p: &Poly<F>, q: &Poly<F>) -> isize {
        let a = if p.is_zero() { isize::MIN } else { 2 * p.deg() };
        let b = if q.is_zero() { isize::MIN } else { 2 * q.deg() + 2 * self.g as isize + 1 };
        a.max(b)
    }

    /// Linear conditions on the coefficients of `p` (degree ≤ `dp`) and `q`
    /// (degree ≤ `dq`, absent when negative) for `p + y·q` to vanish on the
    /// affine part of `t` and to have pole order at most `bound − t.inf`.
    fn vanishing_rows(&self, t: &EffDiv<F>, dp: isize, dq: isize, bound: isize) -> Vec<Vec<F>> {
        let zero = self.one.zero_like();
        let np = (dp + 1).max(0) as usize;
        let nq = (dq + 1).max(0) as usize;
        let ncols = np + nq;
        let mut rows = Vec::new();
        let mono = |i: usize| Poly::monomial(self.one.clone(), i);
        let push_map = |rows: &mut Vec<Vec<F>>, images: Vec<Poly<F>>, len: usize| {
            for j in 0..len {
                rows.push(images.iter().map(|im| im.coeff(j, &zero)).collect());
            }
        };
        let hdeg = t.h.deg() as usize;
        if hdeg > 0 {
            let mut im = Vec::with_capacity(ncols);
            for i in 0..np {
                im.push(mono(i).rem(&t.h));
            }
            for _ in 0..nq {
                im.push(Poly::zero());
            }
            push_map(&mut rows, im, hdeg);
            let mut im = Vec::with_capacity(ncols);
            for _ in 0..np {
                im.push(Poly::zero());
            }
            for j in 0..nq {
                im.push(mono(j).rem(&t.h));
            }
            push_map(&mut rows, im, hdeg);
        }
        let hu = &t.h * &t.u;
        let hudeg = hu.deg() as usize;
        if t.u.deg() > 0 {
            let mut im = Vec::with_capacity(ncols);
            for i in 0..np {
                im.push(mono(i).rem(&hu));
            }
            for j in 0..nq {
                im.push((&mono(j) * &t.v).rem(&hu));
            }
            push_map(&mut rows, im, hudeg);
        }
        let cap = bound - t.inf as isize;
        for i in 0..np {
            if 2 * i as isize > cap {
                let mut r = vec![zero.clone(); ncols];
                r[i] = self.one.clone();
                rows.push(r);
            }
        }
        for j in 0..nq {
            if 2 * j as isize + 2 * self.g as isize + 1 > cap {
                let mut r = vec![zero.clone(); ncols];
                r[np + j] = self.one.clone();
                rows.push(r);
            }
        }
        rows
    }

    /// A basis of `L(E + k·∞)`; `k` may be negative.
    pub fn rr_space(&self, e: &EffDiv<F>, k: isize) -> RrSpace<F> {
        let s = e.support_poly();
        let forced = EffDiv { h: self.poly_one(), u: e.u.clone(), v: (-&e.v).rem(&e.u), inf: 0 };
        let bound = e.inf as isize + k + 2 * s.deg();
        if bound < 0 {
            return RrSpace { s, forced, bound, basis: Vec::new() };
        }
        let dp = bound / 2;
        let dq = if bound > 2 * self.g as isize { (bound - 2 * self.g as isize - 1) / 2 } else { -1 };
        let np = (dp + 1) as usize;
        let rows = self.vanishing_rows(&forced, dp, dq, bound);
        let ncols = np + (dq + 1).max(0) as usize;
        let m = if rows.is_empty() { Matrix::zeros(0, ncols, &self.one) } else { Matrix::from_rows(rows) };
        let basis = m
            .kernel_with(&self.one)
            .into_iter()
            .map(|v| (Poly::new(v[..np].to_vec()), Poly::new(v[np..].to_vec())))
            .collect();
        RrSpace { s, forced, bound, basis }
    }

    /// Zero divisor of `p + y·q` on the affine part of the curve.
    pub fn zero_divisor(&self, p: &Poly<F>, q: &Poly<F>) -> Result<EffDiv<F>> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::Invariant("zero divisor of the zero function".into()));
        }
        let c = p.gcd(q);
        let (p1, q1) = (p.div_exact(&c).unwrap(), q.div_exact(&c).unwrap());
        if q1.is_zero() {
            return Ok(EffDiv { h: c, u: self.poly_one(), v: Poly::zero(), inf: 0 });
        }
        let norm = &(&p1 * &p1) - &(&(&q1 * &q1) * &self.f);
        let u = norm.monic();
        let v = if u.is_constant() {
            Poly::zero()
        } else {
            let qi = q1.inv_mod(&u).ok_or_else(|| Error::Invariant("q not invertible on the zero set".into()))?;
            (-&(&p1 * &qi)).rem(&u)
        };
        Ok(EffDiv { h: c, u, v, inf: 0 })
    }

    /// The pencil `|E + k·∞|`, which must be two-dimensional and free of base points.
    pub fn pencil(&self, e: &EffDiv<F>, k: isize) -> Result<Pencil<F>> {
        let space = self.rr_space(e, k);
        if space.basis.len() != 2 {
            return Err(Error::Degenerate(format!("linear system has dimension {} instead of 2", space.basis.len())));
        }
        let degree = (e.degree() as isize + k) as usize;
        let pencil = Pencil { space, degree };
        self.check_base_point_free(&pencil)?;
        Ok(pencil)
    }

    fn check_base_point_free(&self, pencil: &Pencil<F>) -> Result<()> {
        // two disjoint members rule out base points
        let vals: Vec<[F; 2]> = (0..6)
            .map(|i| [self.one.from_i64_like(i), self.one.from_i64_like(if i == 0 { 0 } else { 1 })])
            .map(|v| if v[1].is_zero() { [self.one.clone(), self.one.zero_like()] } else { v })
            .collect();
        let mut vals = vals;
        vals.insert(1, [self.one.zero_like(), self.one.clone()]);
        vals.dedup();
        let fibers: Vec<EffDiv<F>> = vals.iter().filter_map(|v| self.fiber(pencil, v).ok()).collect();
        for i in 0..fibers.len() {
            for j in (i + 1)..fibers.len() {
                let (a, b) = (&fibers[i], &fibers[j]);
                if a.support_poly().gcd(&b.support_poly()).is_constant() && (a.inf == 0 || b.inf == 0) {
                    return Ok(());
                }
            }
        }
        Err(Error::Degenerate("pencil has a base point".into()))
    }

    /// Numerator `b·N0 − a·N1` of the member over `[a : b]`.
    pub fn pencil_numerator(&self, pencil: &Pencil<F>, ab: &[F; 2]) -> (Poly<F>, Poly<F>) {
        let (p0, q0) = &pencil.space.basis[0];
        let (p1, q1) = &pencil.space.basis[1];
        (&p0.scale(&ab[1]) - &p1.scale(&ab[0]), &q0.scale(&ab[1]) - &q1.scale(&ab[0]))
    }

    /// The member of the pencil over `[a : b]`.
    pub fn fiber(&self, pencil: &Pencil<F>, ab: &[F; 2]) -> Result<EffDiv<F>> {
        let (p, q) = self.pencil_numerator(pencil, ab);
        let z = self.zero_divisor(&p, &q)?;
        let mut e = self
            .eff_sub(&z, &pencil.space.forced)
            .ok_or_else(|| Error::Invariant("numerator misses the forced zeros".into()))?;
        let excess = pencil.space.bound - self.pole_order(&p, &q);
        if excess < 0 {
            return Err(Error::Invariant("numerator exceeds the pole bound".into()));
        }
        e.inf = excess as usize;
        Ok(e)
    }

    /// The value `[a : b]` of the pencil's map on a divisor contained in one
    /// member; errors when the divisor lies in the base locus or in no member.
    pub fn pencil_value(&self, pencil: &Pencil<F>, e: &EffDiv<F>) -> Result<[F; 2]> {
        let sp = &pencil.space;
        let t = EffDiv { inf: e.inf, ..self.eff_add(&e.affine(), &sp.forced) };
        let dp = sp.bound / 2;
        let dq = if sp.bound > 2 * self.g as isize { (sp.bound - 2 * self.g as isize - 1) / 2 } else { -1 };
        let np = (dp + 1) as usize;
        let nq = (dq + 1).max(0) as usize;
        let rows = self.vanishing_rows(&t, dp, dq, sp.bound);
        let zero = self.one.zero_like();
        let vec_of = |(p, q): &(Poly<F>, Poly<F>)| {
            let mut v: Vec<F> = (0..np).map(|i| p.coeff(i, &zero)).collect();
            v.extend((0..nq).map(|j| q.coeff(j, &zero)));
            v
        };
        let c0 = vec_of(&sp.basis[0]);
        let c1 = vec_of(&sp.basis[1]);
        let dot = |r: &[F], c: &[F]| r.iter().zip(c).fold(zero.clone(), |acc, (a, b)| acc + a.clone() * b);
        let m: Vec<Vec<F>> = rows.iter().map(|r| vec![dot(r, &c0), dot(r, &c1)]).collect();
        let ker = if m.is_empty() {
            Matrix::zeros(0, 2, &self.one).kernel_with(&self.one)
        } else {
            Matrix::from_rows(m).kernel_with(&self.one)
        };
        match ker.len() {
            1 => {
                let l = &ker[0];
                Ok(crate::quadric::normalize2([-l[1].clone(), l[0].clone()]))
            }
            0 => Err(Error::Invariant("divisor lies in no member of the pencil".into())),
            _ => Err(Error::Degenerate("divisor lies in the base locus".into())),
        }
    }

    pub fn pencil_value_at(&self, pencil: &Pencil<F>, p: &Point<F>) -> Result<[F; 2]> {
        self.pencil_value(pencil, &self.point_div(p))
    }

    /// Values of the pencil at the Weierstrass points over the roots of `w`, as
    /// the pair `(a mod w, b mod w)` read pointwise as `[a(x_i) : b(x_i)]`.
    /// The forced zeros of the pencil must avoid these points.
    pub fn pencil_weierstrass_values(&self, pencil: &Pencil<F>, w: &Poly<F>) -> Result<(Poly<F>, Poly<F>)> {
        let w = w.monic();
        if !w.divides(&self.f) {
            return Err(Error::Input("Weierstrass values need a factor of the branch polynomial".into()));
        }
        if !w.gcd(&pencil.space.forced.support_poly()).is_constant() {
            return Err(Error::Degenerate("forced zeros meet the Weierstrass points".into()));
        }
        let (p0, _) = &pencil.space.basis[0];
        let (p1, _) = &pencil.space.basis[1];
        // N_j(w_i) = p_j(x_i) since y vanishes there; the value is [N0 : N1]
        let a = p0.rem(&w);
        let b = p1.rem(&w);
        if !a.gcd(&b).gcd(&w).is_constant() {
            return Err(Error::Degenerate("a Weierstrass point is a base point".into()));
        }
        Ok((a, b))
    }
}

/// Elements `p + y·q` of the function field, with `y² = f`.
#[derive(Clone, Debug, PartialEq)]
pub struct FyElem<F: Scalar> {
    pub p: Poly<F>,
    pub q: Poly<F>,
}

impl<F: Scalar> FyElem<F> {
    pub fn new(p: Poly<F>, q: Poly<F>) -> Self {
        FyElem { p, q }
    }

    pub fn add(&self, o: &Self) -> Self {
        FyElem { p: &self.p + &o.p, q: &self.q + &o.q }
    }

    pub fn mul(&self, o: &Self, f: &Poly<F>) -> Self {
        FyElem {
            p: &(&self.p * &o.p) + &(&(&self.q * &o.q) * f),
            q: &(&self.p * &o.q) + &(&self.q * &o.p),
        }
    }

    pub fn scale_poly(&self, c: &Poly<F>) -> Self {
        FyElem { p: &self.p * c, q: &self.q * c }
    }
}

impl<F: Scalar> Curve<F> {
    /// The effective divisor `I` with `2·I = Z`, when every multiplicity of `Z` is even.
    pub fn halve(&self, z: &EffDiv<F>) -> Option<EffDiv<F>> {
        if z.inf % 2 == 1 {
            return None;
        }
        // Weierstrass points of I sit in h with odd multiplicity
        let w = z.h.gcd(&self.f);
        let mut odd = self.poly_one();
        if !w.is_constant() {
            let levels: Vec<Poly<F>> = (0..=z.h.deg() as u32 + 1)
                .map(|k| if k == 0 { self.poly_one() } else { z.h.gcd(&w.pow(k)) })
                .collect();
            // at_least[k] = roots of multiplicity ≥ k
            let at_least: Vec<Poly<F>> =
                (1..levels.len()).map(|k| levels[k].div_exact(&levels[k - 1]).expect("nested gcds")).collect();
            for k in (0..at_least.len().saturating_sub(1)).step_by(2) {
                let exact = at_least[k].div_exact(&at_least[k + 1]).expect("nested levels");
                odd = &odd * &exact;
            }
        }
        let h = z.h.div_exact(&odd)?.sqrt()?.monic();
        let un = z.u.sqrt()?.monic();
        let vn = z.v.rem(&un);
        let u = &un * &odd;
        let v = if odd.is_constant() {
            vn
        } else if un.is_constant() {
            Poly::zero()
        } else {
            // v ≡ vn mod un and v ≡ 0 mod odd
            let (_, s, _) = odd.xgcd(&un);
            (&(&vn * &s) * &odd).rem(&u)
        };
        let out = EffDiv { h, u, v, inf: z.inf / 2 };
        (self.eff_add(&out, &out) == *z).then_some(out)
    }
}
