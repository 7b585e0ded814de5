//! The odd hyperelliptic model `y² = f(x)` of a correspondence curve `C(R)`.
//!
//! The x-line is the s-line of `R` after the substitution
//! `s = [σL·x0 + x1 : L·x0]`, which sends `x = ∞` to the chosen root `σ` of
//! `P_z` and makes `f` monic. The marked line over `s` with `v = [w : 1]` sits
//! at `y = (2·Ã(x)·w + B̃(x))/μ`, where `Ã, B̃, C̃` are the pulled-back
//! coefficients of `F` and `μ² = lc` of the pulled-back branch form.

use crate::correspondence::{Correspondence, MarkedPoint};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::form::{Form, Moebius};
use crate::jacobian::{Curve, EffDiv, FyElem, Point, ThetaChar};
use crate::poly::Poly;
use crate::quadric::{normalize2, QuadricContext};

#[derive(Clone, Debug)]
pub struct HyperellipticModel<F: Scalar> {
    pub curve: Curve<F>,
    pub d: usize,
    /// The substitution from the x-line to the s-line.
    pub moebius: Moebius<F>,
    pub mu: F,
    pub fa: Poly<F>,
    pub fb: Poly<F>,
    pub fc: Poly<F>,
    /// Affine Weierstrass points on the `Δ_H` side (the point at infinity
    /// belongs to this side as well).
    pub side: Poly<F>,
    /// Weierstrass points on the `Δ′_H` side.
    pub side_prime: Poly<F>,
    pub m: Point<F>,
    pub n: Point<F>,
    anchor: [F; 2],
}

/// Builds the odd model of `C(R)` and transports `m(R)` and `n(R)`.
pub fn extract_model<F: Scalar>(ctx: &QuadricContext<F>, corr: &Correspondence<F>) -> Result<HyperellipticModel<F>> {
    let d = corr.d;
    let sigma = corr.anchor[0].clone() / &corr.anchor[1];
    let one = sigma.one_like();
    let zero = sigma.zero_like();
    let m0 = Moebius::new([sigma.clone(), one.clone(), one.clone(), zero.clone()]);
    let lead = corr
        .disc
        .pullback(&m0)
        .p
        .lc()
        .cloned()
        .ok_or_else(|| Error::Invariant("model: branch form vanishes".into()))?;
    let mb = Moebius::new([sigma.clone() * &lead, one.clone(), lead.clone(), zero.clone()]);
    let mu = lead.pow(d as u64);
    let pull = |f: &Form<F>| f.pullback(&mb).p;
    let (fa, fb, fc) = (pull(&corr.fa), pull(&corr.fb), pull(&corr.fc));
    let disc = &(&fb * &fb) - &(&fa * &fc).scale(&one.from_i64_like(4));
    let mu2inv = (mu.clone() * &mu).inv().expect("nonzero leading coefficient");
    let f = disc.scale(&mu2inv);
    if f.deg() != 2 * d as isize - 1 || !f.is_monic() {
        return Err(Error::Invariant("model: branch polynomial is not monic of degree 2d − 1".into()));
    }
    let side = pull(&corr.pz).monic();
    let side_prime = pull(&corr.pzp).monic();
    if side.deg() != d as isize - 1 || side_prime.deg() != d as isize || &side * &side_prime != f {
        return Err(Error::Invariant("model: branch partition does not split f".into()));
    }
    let curve = Curve::new(f)?;
    let mut model = HyperellipticModel {
        curve,
        d,
        moebius: mb,
        mu,
        fa,
        fb,
        fc,
        side,
        side_prime,
        m: Point::Infinity,
        n: Point::Infinity,
        anchor: normalize2(corr.anchor.clone()),
    };
    let m = model.to_point(&corr.m_point(ctx))?;
    let n = model.to_point(&corr.n_point(ctx))?;
    model.m = m;
    model.n = n;
    Ok(model)
}

impl<F: Scalar> HyperellipticModel<F> {
    pub fn g(&self) -> usize {
        self.curve.g
    }

    /// `θ(R) = Σ_{Δ_H} w_i − g¹₂`, with the point at infinity on the `Δ_H` side.
    pub fn theta(&self) -> ThetaChar<F> {
        ThetaChar { side: self.side.clone(), with_inf: true }
    }

    /// The x-coordinate of the point over `s`.
    fn x_of(&self, s: &[F; 2]) -> Option<F> {
        let x = self.moebius.inverse().apply(s);
        (!x[1].is_zero()).then(|| x[0].clone() / &x[1])
    }

    /// The point of the model corresponding to a marked line of `C(R)`.
    pub fn to_point(&self, p: &MarkedPoint<F>) -> Result<Point<F>> {
        let Some(x) = self.x_of(&p.s) else {
            if !crate::field::proj_eq(&p.s, &self.anchor) {
                return Err(Error::Invariant("model: point at infinity off the anchor".into()));
            }
            return Ok(Point::Infinity);
        };
        let (a, b, c) = (self.fa.eval(&x), self.fb.eval(&x), self.fc.eval(&x));
        let muinv = self.mu.inv().expect("nonzero");
        let y = if !p.v[1].is_zero() {
            let w = p.v[0].clone() / &p.v[1];
            (a.from_i64_like(2) * &a * &w + &b) * &muinv
        } else {
            let w = p.v[1].clone() / &p.v[0];
            -((c.from_i64_like(2) * &c * &w + &b) * &muinv)
        };
        let pt = Point::Affine(x, y);
        if !self.curve.contains(&pt) {
            return Err(Error::Input("marked point is not on C(R)".into()));
        }
        Ok(pt)
    }

    /// The marked line `(s, v)` at a point of the model.
    pub fn to_marked(&self, p: &Point<F>) -> MarkedPoint<F> {
        match p {
            Point::Infinity => {
                let s = self.anchor.clone();
                let one = s[0].one_like();
                // the anchor is a branch point: the fiber is a double root of F(s, ·)
                let x_inf = [one.clone(), one.zero_like()];
                let a = Form::new(self.fa.clone(), self.d).eval(&x_inf);
                let b = Form::new(self.fb.clone(), self.d).eval(&x_inf);
                let v = normalize2([-b, a.clone() + &a]);
                MarkedPoint { s, v }
            }
            Point::Affine(x, y) => {
                let s = self.moebius.apply(&[x.clone(), x.one_like()]);
                let (a, b, c) = (self.fa.eval(x), self.fb.eval(x), self.fc.eval(x));
                let my = self.mu.clone() * y;
                let first = [my.clone() - &b, a.clone() + &a];
                let v = if first.iter().all(|t| t.is_zero()) {
                    [-(c.clone() + &c), my + &b]
                } else {
                    first
                };
                MarkedPoint { s, v: normalize2(v) }
            }
        }
    }

    /// The divisor of marked lines cut by a biform `G(s, v) = Σ_j G_j(s)·v0^j·v1^(b−j)`
    /// of bidegree `(a, b)`, given as the list `G_0, …, G_b` of forms of degree `a`.
    pub fn section_divisor(&self, g: &[Form<F>]) -> Result<EffDiv<F>> {
        let b = g.len().checked_sub(1).ok_or_else(|| Error::Input("empty biform".into()))?;
        let a = g[0].n;
        let f = &self.curve.f;
        let one = self.curve.one();
        let two_a = FyElem::new(self.fa.scale(&one.from_i64_like(2)), Poly::zero());
        let yv = FyElem::new(-&self.fb, Poly::constant(self.mu.clone()));
        let mut acc = FyElem::new(Poly::zero(), Poly::zero());
        for (j, gj) in g.iter().enumerate() {
            if gj.n != a {
                return Err(Error::Input("biform coefficients of different degrees".into()));
            }
            if gj.is_zero() {
                continue;
            }
            let mut term = FyElem::new(gj.pullback(&self.moebius).p, Poly::zero());
            for _ in 0..j {
                term = term.mul(&yv, f);
            }
            for _ in j..b {
                term = term.mul(&two_a, f);
            }
            acc = acc.add(&term);
        }
        let z = self.curve.zero_divisor(&acc.p, &acc.q)?;
        let mut z = z;
        if b > 0 {
            let e1 = EffDiv {
                h: Poly::constant(one.clone()),
                u: self.fa.monic(),
                v: self.fb.scale(&self.mu.inv().expect("nonzero")).rem(&self.fa),
                inf: 0,
            };
            let eb = self.curve.eff_scale(&e1, b);
            z = self
                .curve
                .eff_sub(&z, &eb)
                .ok_or_else(|| Error::Invariant("section misses the chart correction".into()))?;
        }
        let total = 2 * a + self.d * b;
        let aff = z.affine_degree();
        if aff > total {
            return Err(Error::Invariant("section divisor exceeds the intersection number".into()));
        }
        z.inf = total - aff;
        Ok(z)
    }

    /// The divisor of the `d` marked lines ending at `c(v)`.
    pub fn v_fiber(&self, v: &[F; 2]) -> Result<EffDiv<F>> {
        let g0 = Form::new(Poly::constant(-v[0].clone()), 0);
        let g1 = Form::new(Poly::constant(v[1].clone()), 0);
        self.section_divisor(&[g0, g1])
    }

    /// The divisor of marked lines over `s` (the two lines from `r(s)`).
    pub fn s_fiber(&self, s: &[F; 2]) -> Result<EffDiv<F>> {
        let form = Form::new(Poly::new(vec![-s[0].clone(), s[1].clone()]), 1);
        self.section_divisor(&[form])
    }
}
