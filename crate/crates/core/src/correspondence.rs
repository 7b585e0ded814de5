//! Ruling curves `R ∈ |(1, d−1)|` on `Q_H` and the correspondence curve
//! `C(R) ⊂ R × q` of marked lines.

use rand::Rng;

use crate::bipoly::{resultant_v, BiPoly};
use crate::error::{Error, Result};
use crate::field::{proj_eq, Field, Scalar};
use crate::form::Form;
use crate::poly::Poly;
use crate::quadric::QuadricContext;

/// `σ = t0·Σ a_i s0^i s1^(r−i) + t1·Σ b_i s0^i s1^(r−i)` with `r = d − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RulingCurve<F: Scalar> {
    pub d: usize,
    pub a: Vec<F>,
    pub b: Vec<F>,
}

impl<F: Scalar> RulingCurve<F> {
    pub fn new(d: usize, a: Vec<F>, b: Vec<F>) -> Result<Self> {
        if d < 3 {
            return Err(Error::Input(format!("d must be at least 3, got {d}")));
        }
        if a.len() != d || b.len() != d {
            return Err(Error::Input(format!("expected {d} coefficients for each of A and B")));
        }
        if a.iter().chain(&b).all(|c| c.is_zero()) {
            return Err(Error::Input("the zero vector does not define a curve".into()));
        }
        Ok(RulingCurve { d, a, b })
    }

    /// The coefficient vector `(a_0, …, a_r, b_0, …, b_r)`.
    pub fn coeffs(&self) -> Vec<F> {
        self.a.iter().chain(&self.b).cloned().collect()
    }

    pub fn from_coeffs(d: usize, c: &[F]) -> Result<Self> {
        if c.len() != 2 * d {
            return Err(Error::Input(format!("expected {} coefficients, got {}", 2 * d, c.len())));
        }
        RulingCurve::new(d, c[..d].to_vec(), c[d..].to_vec())
    }

    pub fn r(&self) -> usize {
        self.d - 1
    }

    /// `A(s)`, whose roots are the points of `R ∩ l_x`.
    pub fn form_a(&self) -> Form<F> {
        Form::new(Poly::new(self.a.clone()), self.r())
    }

    /// `B(s)`, whose roots are the points of `R ∩ l_y`.
    pub fn form_b(&self) -> Form<F> {
        Form::new(Poly::new(self.b.clone()), self.r())
    }

    /// The `t`-coordinate `[B(s) : −A(s)]` of the point of `R` over `s`.
    pub fn t_at(&self, s: &[F; 2]) -> [F; 2] {
        [self.form_b().eval(s), -self.form_a().eval(s)]
    }

    /// The degree-`d` parametrization
    /// `r(s) = B·s0·x − A·s1·y + B·s1·e2′ − A·s0·e3′`, as five binary forms.
    pub fn param(&self, ctx: &QuadricContext<F>) -> Vec<Form<F>> {
        let a = self.form_a();
        let b = self.form_b();
        let parts = [
            (b.mul_s0(), &ctx.segre[0]),
            (a.mul_s1().scale(&-ctx.one()), &ctx.segre[1]),
            (b.mul_s1(), &ctx.segre[2]),
            (a.mul_s0().scale(&-ctx.one()), &ctx.segre[3]),
        ];
        (0..5)
            .map(|k| {
                let mut acc = Form::new(Poly::zero(), self.d);
                for (f, e) in &parts {
                    if !e[k].is_zero() {
                        acc = acc.add(&f.scale(&e[k]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn point_at(&self, ctx: &QuadricContext<F>, s: &[F; 2]) -> Vec<F> {
        ctx.segre_point(&self.t_at(s), s)
    }

    /// Whether two curves agree as projective coefficient vectors.
    pub fn proj_eq(&self, o: &RulingCurve<F>) -> bool {
        self.d == o.d && proj_eq(&self.coeffs(), &o.coeffs())
    }
}

/// `b(r(s), w)` as a binary form of degree `d`.
pub fn pairing_form<F: Scalar>(ctx: &QuadricContext<F>, r: &[Form<F>], w: &[F]) -> Form<F> {
    let bw = ctx.gram.mul_vec(w);
    let mut acc = Form::new(Poly::zero(), r[0].n);
    for k in 0..5 {
        if !bw[k].is_zero() {
            acc = acc.add(&r[k].scale(&bw[k]));
        }
    }
    acc
}

/// The generality flags (a)–(f) on `R` together with the extra invariants the
/// construction relies on.
#[derive(Clone, Debug, PartialEq)]
pub struct RGenerality {
    /// `A` and `B` coprime (σ irreducible).
    pub irreducible: bool,
    /// (a) `Δ_H ∩ l_x ∩ R = ∅` and `Δ_H ∩ l_y ∩ R = ∅`.
    pub a: bool,
    /// (b) the same for `Δ′_H`.
    pub b: bool,
    /// (c) `Δ_H ∩ R` transversal.
    pub c: bool,
    /// (d) `Δ′_H ∩ R` transversal.
    pub d: bool,
    /// (e) `R ∩ l_x` transversal.
    pub e: bool,
    /// (f) `R ∩ l_y` transversal.
    pub f: bool,
    /// Branch points, fiber points, `p_x` and `p_y` pairwise distinct.
    pub distinct: bool,
    /// `C(R)` smooth.
    pub smooth: bool,
    /// `P_z` has a root over the field (used to build the odd model).
    pub anchor: bool,
}

impl RGenerality {
    pub fn flags(&self) -> [(&'static str, bool); 10] {
        [
            ("irreducible", self.irreducible),
            ("(a) Delta_H misses R on l_x, l_y", self.a),
            ("(b) Delta'_H misses R on l_x, l_y", self.b),
            ("(c) Delta_H meets R transversally", self.c),
            ("(d) Delta'_H meets R transversally", self.d),
            ("(e) l_x meets R transversally", self.e),
            ("(f) l_y meets R transversally", self.f),
            ("special points distinct", self.distinct),
            ("C(R) smooth", self.smooth),
            ("rational Weierstrass anchor", self.anchor),
        ]
    }

    /// The transversality conditions (a) through (f) plus irreducibility.
    pub fn transversality_conditions(&self) -> bool {
        self.irreducible && self.a && self.b && self.c && self.d && self.e && self.f
    }

    pub fn all(&self) -> bool {
        self.flags().iter().all(|(_, f)| *f)
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.flags().iter().find(|(_, f)| !f).map(|(n, _)| *n)
    }
}

/// The curve `C(R)`: the biform `F(s, v) = b(r(s), c(v))` of bidegree `(d, 2)`
/// with its branch data.
#[derive(Clone, Debug)]
pub struct Correspondence<F: Scalar> {
    pub curve: RulingCurve<F>,
    pub d: usize,
    /// `r(s)`.
    pub param: Vec<Form<F>>,
    /// `F = fa·v0² + fb·v0v1 + fc·v1²`, each a form of degree `d` in `s`.
    pub fa: Form<F>,
    pub fb: Form<F>,
    pub fc: Form<F>,
    /// `fb² − 4·fa·fc`, a form of degree `2d`.
    pub disc: Form<F>,
    /// `P_z = b(r(s), z)` and `P_z′ = b(r(s), z′)`.
    pub pz: Form<F>,
    pub pzp: Form<F>,
    /// The chosen root `s₁` of `P_z` sent to infinity by the odd model.
    pub anchor: [F; 2],
}

/// A point `(s, v)` of `C(R)`, i.e. the marked line from `r(s)` to `c(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedPoint<F> {
    pub s: [F; 2],
    pub v: [F; 2],
}

impl<F: Scalar> Correspondence<F> {
    /// `F` as a bivariate polynomial in affine coordinates `u = s0/s1`, `v = v0/v1`.
    pub fn bipoly(&self) -> BiPoly<F> {
        BiPoly::new(vec![self.fc.p.clone(), self.fb.p.clone(), self.fa.p.clone()])
    }

    pub fn eval(&self, s: &[F; 2], v: &[F; 2]) -> F {
        self.fa.eval(s) * &v[0].square()
            + self.fb.eval(s) * &v[0] * &v[1]
            + self.fc.eval(s) * &v[1].square()
    }

    /// The binary quadratic `F(s, ·)` as `[coefficient of v1², v0v1, v0²]`.
    pub fn fiber_quadratic(&self, s: &[F; 2]) -> [F; 3] {
        [self.fc.eval(s), self.fb.eval(s), self.fa.eval(s)]
    }

    pub fn contains(&self, p: &MarkedPoint<F>) -> bool {
        self.eval(&p.s, &p.v).is_zero()
    }

    /// `m(R) = [p_x(R), x]` with `p_x(R) = R ∩ m_x` at `s = [1:0]`.
    pub fn m_point(&self, ctx: &QuadricContext<F>) -> MarkedPoint<F> {
        MarkedPoint { s: [ctx.one(), ctx.zero()], v: ctx.v_x.clone() }
    }

    /// `n(R) = [p_y(R), y]` with `p_y(R) = R ∩ n_y` at `s = [0:1]`.
    pub fn n_point(&self, ctx: &QuadricContext<F>) -> MarkedPoint<F> {
        MarkedPoint { s: [ctx.zero(), ctx.one()], v: ctx.v_y() }
    }

    /// The point `r(s)` of `R`.
    pub fn r_point(&self, s: &[F; 2]) -> Vec<F> {
        self.param.iter().map(|f| f.eval(s)).collect()
    }

    /// The support line `⟨r(s), c(v)⟩` of a marked point.
    pub fn support(&self, ctx: &QuadricContext<F>, p: &MarkedPoint<F>) -> crate::quadric::Line<F> {
        crate::quadric::Line::new(self.r_point(&p.s), ctx.conic_point(&p.v))
    }

    pub fn genus(&self) -> usize {
        self.d - 1
    }
}

/// Evaluates flags (a)–(f) and the extra invariants.
pub fn check_generality_r<F: Scalar>(ctx: &QuadricContext<F>, r: &RulingCurve<F>) -> RGenerality {
    let fa = r.form_a();
    let fb = r.form_b();
    let param = r.param(ctx);
    let pz = pairing_form(ctx, &param, &ctx.z);
    let pzp = pairing_form(ctx, &param, &ctx.zp);
    let irreducible = fa.coprime(&fb);
    let mut g = RGenerality {
        irreducible,
        a: pz.coprime(&fa) && pz.coprime(&fb),
        b: pzp.coprime(&fa) && pzp.coprime(&fb),
        c: pz.is_squarefree(),
        d: pzp.is_squarefree(),
        e: fa.is_squarefree(),
        f: fb.is_squarefree(),
        distinct: false,
        smooth: false,
        anchor: false,
    };
    if !irreducible {
        return g;
    }
    let one = ctx.one();
    let s0s1 = Form::new(Poly::x(&one), 2);
    let all = pz.mul(&pzp).mul(&fa).mul(&fb).mul(&s0s1);
    g.distinct = all.is_squarefree();
    let (fa2, fb2, fc2) = biform(ctx, &param);
    let disc = fb2.mul(&fb2).sub(&fa2.mul(&fc2).scale(&one.from_i64_like(4)));
    g.smooth = disc.is_squarefree() && {
        let bp = BiPoly::new(vec![fc2.p.clone(), fb2.p.clone(), fa2.p.clone()]);
        match resultant_v(&bp, &bp.derivative_u()) {
            Ok(res) => !res.is_zero() && disc.p.gcd(&res).is_constant(),
            Err(_) => false,
        }
    };
    g.anchor = !pz.is_zero() && pz.mult_at_infinity() == 0 && !F::poly_roots(&pz.p).is_empty();
    g
}

/// The three `v`-coefficients of `F(s, v) = b(r(s), c(v))`.
fn biform<F: Scalar>(ctx: &QuadricContext<F>, param: &[Form<F>]) -> (Form<F>, Form<F>, Form<F>) {
    let d = param[0].n;
    let conic = ctx.conic_forms();
    // (B r(s))_k
    let br: Vec<Form<F>> = (0..5)
        .map(|k| {
            let mut acc = Form::new(Poly::zero(), d);
            for j in 0..5 {
                let g = &ctx.gram[(k, j)];
                if !g.is_zero() {
                    acc = acc.add(&param[j].scale(g));
                }
            }
            acc
        })
        .collect();
    let mut out: Vec<Form<F>> = (0..3).map(|_| Form::new(Poly::zero(), d)).collect();
    for k in 0..5 {
        for (j, o) in out.iter_mut().enumerate() {
            if !conic[k][j].is_zero() {
                *o = o.add(&br[k].scale(&conic[k][j]));
            }
        }
    }
    // out[j] multiplies v0^j v1^(2−j)
    (out[2].clone(), out[1].clone(), out[0].clone())
}

/// Builds `C(R)` and verifies every invariant of the construction.
pub fn build_correspondence<F: Scalar>(ctx: &QuadricContext<F>, r: &RulingCurve<F>) -> Result<Correspondence<F>> {
    let gen = check_generality_r(ctx, r);
    if let Some(name) = gen.first_failure() {
        return Err(Error::Degenerate(format!("ruling curve fails: {name}")));
    }
    let param = r.param(ctx);
    let (fa, fb, fc) = biform(ctx, &param);
    let one = ctx.one();
    let disc = fb.mul(&fb).sub(&fa.mul(&fc).scale(&one.from_i64_like(4)));
    let pz = pairing_form(ctx, &param, &ctx.z);
    let pzp = pairing_form(ctx, &param, &ctx.zp);
    let anchor_root = F::poly_roots(&pz.p).into_iter().next().expect("anchor flag checked");
    let corr = Correspondence {
        curve: r.clone(),
        d: r.d,
        param,
        fa,
        fb,
        fc,
        disc,
        pz,
        pzp,
        anchor: [anchor_root, one],
    };
    verify_correspondence(ctx, &corr)?;
    Ok(corr)
}

fn invariant(what: &str) -> Error {
    Error::Invariant(format!("correspondence: {what}"))
}

/// Re-checks the invariants of a built correspondence.
pub fn verify_correspondence<F: Scalar>(ctx: &QuadricContext<F>, c: &Correspondence<F>) -> Result<()> {
    let d = c.d;
    // R lies on Q: b(r, r) vanishes identically
    let mut q = Form::new(Poly::zero(), 2 * d);
    for i in 0..5 {
        for j in 0..5 {
            let g = &ctx.gram[(i, j)];
            if !g.is_zero() {
                q = q.add(&c.param[i].mul(&c.param[j]).scale(g));
            }
        }
    }
    if !q.is_zero() {
        return Err(invariant("R does not lie on Q"));
    }
    // R lies in H
    let mut hf = Form::new(Poly::zero(), d);
    for k in 0..5 {
        hf = hf.add(&c.param[k].scale(&ctx.h[k]));
    }
    if !hf.is_zero() {
        return Err(invariant("R does not lie in H"));
    }
    // exact bidegree (d, 2): no fixed component along s0, s1, v0 or v1
    let zero = ctx.zero();
    let (inf, orig) = ([ctx.one(), zero.clone()], [zero.clone(), ctx.one()]);
    if c.fa.is_zero() || c.fc.is_zero() {
        return Err(invariant("F has a fixed component v0 = 0 or v1 = 0"));
    }
    if c.fiber_quadratic(&inf).iter().all(|x| x.is_zero()) || c.fiber_quadratic(&orig).iter().all(|x| x.is_zero()) {
        return Err(invariant("F has a fixed component s0 = 0 or s1 = 0"));
    }
    if c.disc.n != 2 * d || !c.disc.is_squarefree() {
        return Err(invariant("branch form does not have 2d distinct roots"));
    }
    if !c.disc.proportional(&c.pz.mul(&c.pzp)) {
        return Err(invariant("branch form is not proportional to P_z·P_z'"));
    }
    for p in [c.m_point(ctx), c.n_point(ctx)] {
        if !c.contains(&p) {
            return Err(invariant("special marked point off C(R)"));
        }
    }
    if !c.pz.eval(&c.anchor).is_zero() {
        return Err(invariant("anchor is not a root of P_z"));
    }
    // every Weierstrass fiber carries a double marked line: with
    // v = −fb/(2 fa) mod P (or the reciprocal chart where fa vanishes), F ≡ 0
    for p in [&c.pz, &c.pzp] {
        let on_fa = c.fa.p.gcd(&p.p);
        let rest = p.p.div_exact(&on_fa).expect("gcd divides");
        for (m, lead, tail) in [(&rest, &c.fa.p, &c.fc.p), (&on_fa, &c.fc.p, &c.fa.p)] {
            if m.is_constant() {
                continue;
            }
            let two = lead.scale(&ctx.one().from_i64_like(2));
            let inv = two.inv_mod(m).ok_or_else(|| invariant("fiber of a Weierstrass point is not a line"))?;
            let vi = (&(-&c.fb.p) * &inv).rem(m);
            let val = &(&(lead * &(&vi * &vi)) + &(&c.fb.p * &vi)) + tail;
            if !val.rem(m).is_zero() {
                return Err(invariant("Weierstrass fiber is not a double marked line"));
            }
        }
    }
    Ok(())
}

/// Samples a ruling curve through a random point of `Δ_H`, resampling until
/// every generality flag holds. Deterministic for a fixed RNG state.
pub fn random_ruling_curve<F: Scalar, R: Rng + ?Sized>(
    ctx: &QuadricContext<F>,
    d: usize,
    height: u64,
    rng: &mut R,
    budget: usize,
) -> Result<RulingCurve<F>> {
    if d < 3 {
        return Err(Error::Input(format!("d must be at least 3, got {d}")));
    }
    if height == 0 {
        return Err(Error::Input("height bound 0 admits no nonzero coefficient vector".into()));
    }
    let field = &ctx.field;
    let mut last = String::from("no draws");
    for _ in 0..budget {
        let mut c: Vec<F> = (0..2 * d).map(|_| field.random_element(rng, height)).collect();
        let sigma = field.random_element(rng, height);
        if sigma.is_zero() {
            last = "anchor at p_y".into();
            continue;
        }
        force_through_delta(ctx, d, &mut c, &sigma);
        let Ok(r) = RulingCurve::from_coeffs(d, &c) else {
            last = "zero coefficient vector".into();
            continue;
        };
        let gen = check_generality_r(ctx, &r);
        match gen.first_failure() {
            None => return Ok(r),
            Some(name) => last = name.to_string(),
        }
    }
    Err(Error::SamplingExhausted { attempts: budget, last })
}

/// Adjusts one coefficient so that `P_z([σ : 1]) = 0`. `P_z` is linear in the
/// coefficient vector, so the first coefficient with a nonzero weight is solved for.
fn force_through_delta<F: Scalar>(ctx: &QuadricContext<F>, d: usize, c: &mut [F], sigma: &F) {
    let s = [sigma.clone(), ctx.one()];
    let zero = ctx.zero();
    let value = |c: &[F]| -> F {
        let r = RulingCurve { d, a: c[..d].to_vec(), b: c[d..].to_vec() };
        pairing_form(ctx, &r.param(ctx), &ctx.z).eval(&s)
    };
    let base = value(c);
    for k in (d..2 * d).chain(0..d) {
        let mut probe = vec![zero.clone(); 2 * d];
        probe[k] = ctx.one();
        let w = value(&probe);
        if !w.is_zero() {
            c[k] = c[k].clone() - base / &w;
            return;
        }
    }
}
