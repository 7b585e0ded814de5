//! Reconstruction of a ruling curve from its spin tuple `(C, θ, m, n)`.
//!
//! The curve `C` is mapped to `P¹ × P¹` by the two pencils `|θ + m + n|` and
//! `|θ + g¹₂|`. The first factor is identified with the conic `q` and the
//! second with `Λ`, the double cover of the hyperplanes through `P(W)`. The
//! Weierstrass points then land on the cones `Π_z` and `Π_z′`, and each one
//! pins down a point of `R ∩ H`. The resulting `2d` linear conditions cut out
//! `R` up to the torus fixing `x` and `y`.

use crate::correspondence::{build_correspondence, check_generality_r, pairing_form, RulingCurve};
use crate::error::{Error, Result};
use crate::field::{proj_eq, Scalar};
use crate::form::{Form, Moebius};
use crate::incidence::LambdaChart;
use crate::jacobian::{Curve, EffDiv, FyElem, Pencil, Point, ThetaChar};
use crate::linalg::Matrix;
use crate::model::{extract_model, HyperellipticModel};
use crate::poly::Poly;
use crate::quadric::{normalize2, QuadricContext};
use std::collections::BTreeMap;

/// A point of `P¹ × P¹`.
pub type Pair<F> = [[F; 2]; 2];

/// The tuple `(C, θ, m, n)` on an odd model `y² = f(x)`.
#[derive(Clone, Debug)]
pub struct SpinTuple<F: Scalar> {
    pub curve: Curve<F>,
    pub theta: ThetaChar<F>,
    pub m: Point<F>,
    pub n: Point<F>,
    /// The substitution from the x-line to the s-line of the ruling curve the
    /// tuple was extracted from. It fixes the torus ambiguity of the
    /// reconstruction and is absent for tuples read from disk.
    pub x_to_s: Option<Moebius<F>>,
}

impl<F: Scalar> SpinTuple<F> {
    pub fn new(curve: Curve<F>, theta: ThetaChar<F>, m: Point<F>, n: Point<F>) -> Result<Self> {
        let t = SpinTuple { curve, theta, m, n, x_to_s: None };
        t.validate()?;
        Ok(t)
    }

    pub fn d(&self) -> usize {
        self.curve.g + 1
    }

    /// Checks the defining conditions: `θ` is an ineffective theta
    /// characteristic, `m ≠ n`, neither is a Weierstrass point and `m + n` is
    /// not a member of the `g¹₂`.
    pub fn validate(&self) -> Result<()> {
        let c = &self.curve;
        if c.g < 2 {
            return Err(Error::Input("spin tuples need genus at least 2".into()));
        }
        if !c.is_theta_characteristic(&self.theta) {
            return Err(Error::Input("θ is not a theta characteristic".into()));
        }
        if !c.is_ineffective(&self.theta)? {
            return Err(Error::Input("θ is effective".into()));
        }
        for p in [&self.m, &self.n] {
            if !c.contains(p) {
                return Err(Error::Input("marked point is not on the curve".into()));
            }
            if c.is_weierstrass(p) {
                return Err(Error::Input("marked point is a Weierstrass point".into()));
            }
        }
        if self.m == self.n {
            return Err(Error::Input("m and n coincide".into()));
        }
        if c.involution(&self.m) == self.n {
            return Err(Error::Input("m + n is a member of the g¹₂".into()));
        }
        Ok(())
    }

    /// The Weierstrass points split as `θ + g¹₂ = Σ_{side} w_i`; returns the
    /// affine factor on the other side.
    pub fn other_side(&self) -> Poly<F> {
        self.curve.f.div_exact(&self.theta.side).expect("side divides f").monic()
    }
}

/// The spin tuple of a correspondence model.
pub fn spin_tuple_of_model<F: Scalar>(model: &HyperellipticModel<F>) -> Result<SpinTuple<F>> {
    let t = SpinTuple {
        curve: model.curve.clone(),
        theta: model.theta(),
        m: model.m.clone(),
        n: model.n.clone(),
        x_to_s: Some(model.moebius.clone()),
    };
    t.validate()?;
    Ok(t)
}

/// `(C(R), θ(R), m(R), n(R))` on the odd model of `C(R)`.
pub fn extract_spin_tuple<F: Scalar>(ctx: &QuadricContext<F>, r: &RulingCurve<F>) -> Result<SpinTuple<F>> {
    let corr = build_correspondence(ctx, r)?;
    let model = extract_model(ctx, &corr)?;
    spin_tuple_of_model(&model)
}

/// The map `Φ = (φ₁, φ₂): C → P¹ × P¹` with its distinguished points.
#[derive(Clone, Debug)]
pub struct ProductEmbedding<F: Scalar> {
    /// `φ₁`, the pencil `|θ + m + n|`.
    pub phi1: Pencil<F>,
    /// `φ₂`, the pencil `|θ + g¹₂|`.
    pub phi2: Pencil<F>,
    /// `Σ n_i`, the member of `|θ + m|`.
    pub poly_m: EffDiv<F>,
    /// `Σ m_i`, the member of `|θ + n|`.
    pub poly_n: EffDiv<F>,
    /// `Φ(Σ m_i)`, the image of the polyhedron of `n`.
    pub a_m: Pair<F>,
    /// `Φ(Σ n_i)`.
    pub a_n: Pair<F>,
    pub phi_m: Pair<F>,
    pub phi_n: Pair<F>,
    /// `φ₂` of the Weierstrass points on the side of `θ` (the fiber `L`).
    pub l_value: [F; 2],
    /// `φ₂` of the remaining Weierstrass points (the fiber `L′`).
    pub l_prime_value: [F; 2],
    /// The involution `j_C` of the second factor induced by `ι`.
    pub exchanger: Moebius<F>,
}

/// The common value `[a : b]` of a pair of residues modulo `w`, if constant.
fn constant_value<F: Scalar>(a: &Poly<F>, b: &Poly<F>, one: &F) -> Option<[F; 2]> {
    if b.is_zero() {
        return (!a.is_zero()).then(|| [one.clone(), one.zero_like()]);
    }
    let k = (0..b.coeffs().len()).find(|&i| !b.coeffs()[i].is_zero())?;
    let c = a.coeff(k, &one.zero_like()) / &b.coeffs()[k];
    (a == &b.scale(&c)).then(|| normalize2([c, one.clone()]))
}

fn value_pair<F: Scalar>(c: &Curve<F>, e: &EffDiv<F>, p1: &Pencil<F>, p2: &Pencil<F>) -> Result<Pair<F>> {
    Ok([c.pencil_value(p1, e)?, c.pencil_value(p2, e)?])
}

/// Builds `Φ` and checks the incidences it must satisfy: the polyhedra
/// collapse to single points, the Weierstrass points fill two fibers of `φ₂`
/// and `j_C` fixes exactly those fibers.
pub fn product_embedding<F: Scalar>(t: &SpinTuple<F>) -> Result<ProductEmbedding<F>> {
    let c = &t.curve;
    let one = c.one();
    let dm = c.point_div(&t.m);
    let dn = c.point_div(&t.n);
    let poly_m = c.theta_polyhedron(&t.theta, &dm)?;
    let poly_n = c.theta_polyhedron(&t.theta, &dn)?;
    let phi1 = c.pencil(&c.eff_add(&poly_n, &dm), 0)?;
    let phi2 = c.pencil(&c.eff_add(&poly_n, &c.point_div(&c.involution(&t.n))), 0)?;
    let a_m = value_pair(c, &poly_n, &phi1, &phi2)?;
    let a_n = value_pair(c, &poly_m, &phi1, &phi2)?;
    let phi_m = value_pair(c, &dm, &phi1, &phi2)?;
    let phi_n = value_pair(c, &dn, &phi1, &phi2)?;

    let side_value = |w: &Poly<F>| -> Result<Option<[F; 2]>> {
        if w.is_constant() {
            return Ok(None);
        }
        let (a, b) = c.pencil_weierstrass_values(&phi2, w)?;
        constant_value(&a, &b, &one)
            .map(Some)
            .ok_or_else(|| Error::Invariant("Weierstrass points of one side leave a fiber of φ₂".into()))
    };
    let at_inf = c.pencil_value_at(&phi2, &Point::Infinity)?;
    let mut l_value = side_value(&t.theta.side)?;
    let mut l_prime_value = side_value(&t.other_side())?;
    let slot = if t.theta.with_inf { &mut l_value } else { &mut l_prime_value };
    match slot {
        Some(v) if !proj_eq(v, &at_inf) => {
            return Err(Error::Invariant("the point at infinity leaves its fiber of φ₂".into()));
        }
        Some(_) => {}
        None => *slot = Some(at_inf),
    }
    let (l_value, l_prime_value) = (l_value.expect("nonempty side"), l_prime_value.expect("nonempty side"));
    if proj_eq(&l_value, &l_prime_value) {
        return Err(Error::Invariant("both Weierstrass sides share a fiber of φ₂".into()));
    }
    let exchanger = exchanger_of(c, &phi2)?;
    for v in [&l_value, &l_prime_value] {
        if !proj_eq(&exchanger.apply(v), v) {
            return Err(Error::Invariant("j_C moves a Weierstrass fiber".into()));
        }
    }
    Ok(ProductEmbedding { phi1, phi2, poly_m, poly_n, a_m, a_n, phi_m, phi_n, l_value, l_prime_value, exchanger })
}

/// Small projective points `[k : 1]` and `[1 : 0]` used as probes.
fn probes<F: Scalar>(one: &F, count: usize) -> Vec<[F; 2]> {
    let mut v = vec![[one.clone(), one.zero_like()]];
    v.extend((0..count as i64).map(|k| [one.from_i64_like(k), one.clone()]));
    v
}

/// `j_C` on the second factor, read off from the members `F` and `ιF` of `|θ + g¹₂|`.
fn exchanger_of<F: Scalar>(c: &Curve<F>, phi2: &Pencil<F>) -> Result<Moebius<F>> {
    let mut src = Vec::new();
    let mut dst = Vec::new();
    for p in probes(&c.one(), 12) {
        let Ok(fib) = c.fiber(phi2, &p) else { continue };
        let Ok(img) = c.pencil_value(phi2, &fib.iota()) else { continue };
        src.push(p);
        dst.push(img);
        if src.len() == 4 {
            break;
        }
    }
    if src.len() < 4 {
        return Err(Error::Degenerate("too few usable members of |θ + g¹₂|".into()));
    }
    let m = Moebius::from_three([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]])
        .ok_or_else(|| Error::Invariant("j_C is not a Möbius transformation".into()))?;
    if !proj_eq(&m.apply(&src[3]), &dst[3]) || !m.compose(&m).proj_eq(&Moebius::identity(&c.one())) {
        return Err(Error::Invariant("j_C is not an involution of the second factor".into()));
    }
    Ok(m)
}

/// A biform of bidegree `(d1, d2)` on `P¹ × P¹`; `c[i][j]` multiplies
/// `u0^i·u1^(d1−i)·w0^j·w1^(d2−j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiForm<F> {
    pub c: Vec<Vec<F>>,
}

impl<F: Scalar> BiForm<F> {
    pub fn bidegree(&self) -> (usize, usize) {
        (self.c.len() - 1, self.c[0].len() - 1)
    }

    pub fn eval(&self, p: &Pair<F>) -> F {
        let (d1, d2) = self.bidegree();
        let zero = self.c[0][0].zero_like();
        let mut acc = zero;
        for i in 0..=d1 {
            for j in 0..=d2 {
                let m = p[0][0].pow(i as u64)
                    * &p[0][1].pow((d1 - i) as u64)
                    * &p[1][0].pow(j as u64)
                    * &p[1][1].pow((d2 - j) as u64);
                acc = acc + self.c[i][j].clone() * &m;
            }
        }
        acc
    }

    /// `G(A·u, B·w)`.
    pub fn pullback(&self, a: &Moebius<F>, b: &Moebius<F>) -> BiForm<F> {
        let (d1, d2) = self.bidegree();
        let zero = self.c[0][0].zero_like();
        let cols: Vec<Vec<F>> = (0..=d2)
            .map(|j| {
                let f = Form::from_coeffs((0..=d1).map(|i| self.c[i][j].clone()).collect());
                let f = Form { n: d1, ..f };
                f.pullback(a).coeffs(&zero)
            })
            .collect();
        let mut out = vec![vec![zero.clone(); d2 + 1]; d1 + 1];
        for i in 0..=d1 {
            let f = Form { n: d2, ..Form::from_coeffs(cols.iter().map(|c| c[i].clone()).collect()) };
            for (j, v) in f.pullback(b).coeffs(&zero).into_iter().enumerate() {
                out[i][j] = v;
            }
        }
        BiForm { c: out }
    }

    /// Multiplicity of the curve `G = 0` at a point.
    pub fn multiplicity_at(&self, p: &Pair<F>) -> usize {
        let g = self.pullback(&to_origin(&p[0]), &to_origin(&p[1]));
        let mut best = usize::MAX;
        for (i, row) in g.c.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    best = best.min(i + j);
                }
            }
        }
        best
    }
}

/// A Möbius transformation sending `[0 : 1]` to `p`.
fn to_origin<F: Scalar>(p: &[F; 2]) -> Moebius<F> {
    let (one, zero) = (p[0].one_like(), p[0].zero_like());
    if p[1].is_zero() {
        Moebius::new([zero.clone(), one.clone(), one, zero])
    } else {
        Moebius::new([one, p[0].clone(), zero, p[1].clone()])
    }
}

fn fy_vector<F: Scalar>(e: &FyElem<F>, len: usize, zero: &F) -> Vec<F> {
    let mut v: Vec<F> = (0..len).map(|i| e.p.coeff(i, zero)).collect();
    v.extend((0..len).map(|i| e.q.coeff(i, zero)));
    v
}

/// The equation of `Φ(C)`: the unique biform of bidegree `(d, d)` vanishing on it.
pub fn image_biform<F: Scalar>(t: &SpinTuple<F>, pe: &ProductEmbedding<F>) -> Result<BiForm<F>> {
    let c = &t.curve;
    let d = t.d();
    let one = c.one();
    let zero = one.zero_like();
    let gens = |p: &Pencil<F>| -> [FyElem<F>; 2] {
        let (p0, q0) = p.space.basis[0].clone();
        let (p1, q1) = p.space.basis[1].clone();
        [FyElem::new(p0, q0), FyElem::new(p1, q1)]
    };
    let powers = |g: &[FyElem<F>; 2]| -> Vec<FyElem<F>> {
        (0..=d)
            .map(|i| {
                let mut acc = FyElem::new(Poly::constant(one.clone()), Poly::zero());
                for _ in 0..i {
                    acc = acc.mul(&g[0], &c.f);
                }
                for _ in i..d {
                    acc = acc.mul(&g[1], &c.f);
                }
                acc
            })
            .collect()
    };
    let u = powers(&gens(&pe.phi1));
    let w = powers(&gens(&pe.phi2));
    let mut cols = Vec::with_capacity((d + 1) * (d + 1));
    for ui in &u {
        for wj in &w {
            cols.push(ui.mul(wj, &c.f));
        }
    }
    let len = cols.iter().map(|e| e.p.coeffs().len().max(e.q.coeffs().len())).max().unwrap_or(0);
    let m = Matrix::from_cols(cols.iter().map(|e| fy_vector(e, len, &zero)).collect());
    let ker = m.kernel_with(&one);
    if ker.len() != 1 {
        return Err(Error::Invariant(format!("image of Φ satisfies {} independent (d, d) biforms", ker.len())));
    }
    let k = &ker[0];
    Ok(BiForm { c: (0..=d).map(|i| k[i * (d + 1)..(i + 1) * (d + 1)].to_vec()).collect() })
}

/// Degree and singularity of the plane curve obtained by projecting `Φ(C)`
/// from `a_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneProjection {
    pub degree: usize,
    /// Multiplicity of `Φ(C)` at the centre `a_m`.
    pub centre_multiplicity: usize,
    /// Multiplicity of the plane curve at the image of `a_n`.
    pub multiplicity_at_a_n: usize,
}

type Mono = [usize; 3];

fn hp_mul<F: Scalar>(a: &BTreeMap<Mono, F>, b: &BTreeMap<Mono, F>) -> BTreeMap<Mono, F> {
    let mut out: BTreeMap<Mono, F> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let v = ca.clone() * cb;
            match out.get_mut(&e) {
                Some(x) => *x = x.clone() + &v,
                None => {
                    out.insert(e, v);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Multiplicity at `pt` of a homogeneous ternary polynomial.
fn plane_multiplicity<F: Scalar>(poly: &BTreeMap<Mono, F>, pt: &[F; 3]) -> usize {
    let one = pt[0].one_like();
    let zero = one.zero_like();
    // columns: two unit vectors completing pt to a basis, then pt itself
    let units: Vec<[F; 3]> = (0..3)
        .map(|k| {
            let mut u = [zero.clone(), zero.clone(), zero.clone()];
            u[k] = one.clone();
            u
        })
        .collect();
    let mut cols: Vec<[F; 3]> = Vec::new();
    for u in &units {
        let mut trial: Vec<Vec<F>> = cols.iter().map(|c| c.to_vec()).collect();
        trial.push(u.to_vec());
        trial.push(pt.to_vec());
        if cols.len() < 2 && Matrix::from_cols(trial).rank() == cols.len() + 2 {
            cols.push(u.clone());
        }
    }
    cols.push(pt.clone());
    // X_k = Σ_l cols[l][k]·Y_l
    let lin: Vec<BTreeMap<Mono, F>> = (0..3)
        .map(|k| {
            let mut m = BTreeMap::new();
            for (l, col) in cols.iter().enumerate() {
                if !col[k].is_zero() {
                    let mut e = [0; 3];
                    e[l] = 1;
                    m.insert(e, col[k].clone());
                }
            }
            m
        })
        .collect();
    let mut total: BTreeMap<Mono, F> = BTreeMap::new();
    for (e, cf) in poly {
        let mut term: BTreeMap<Mono, F> = BTreeMap::from([([0, 0, 0], cf.clone())]);
        for k in 0..3 {
            for _ in 0..e[k] {
                term = hp_mul(&term, &lin[k]);
            }
        }
        for (m, v) in term {
            let x = total.remove(&m).unwrap_or_else(|| zero.clone()) + &v;
            if !x.is_zero() {
                total.insert(m, x);
            }
        }
    }
    total.keys().map(|e| e[0] + e[1]).min().unwrap_or(usize::MAX)
}

/// Projects `Φ(C)` from `a_m` to the plane and measures the result.
pub fn plane_projection<F: Scalar>(g: &BiForm<F>, a_m: &Pair<F>, a_n: &Pair<F>) -> Result<PlaneProjection> {
    let (ma, mb) = (to_origin(&a_m[0]), to_origin(&a_m[1]));
    let h = g.pullback(&ma, &mb);
    let (d1, d2) = h.bidegree();
    let mu = g.multiplicity_at(a_m);
    // (u, w) ↦ [u0w0 : u0w1 : u1w0]; u = X0/X2 and w = X0/X1 in the affine chart
    let mut poly: BTreeMap<Mono, F> = BTreeMap::new();
    for (i, row) in h.c.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                poly.insert([i + j - mu, d2 - j, d1 - i], v.clone());
            }
        }
    }
    let k1 = poly.keys().map(|e| e[1]).min().unwrap_or(0);
    let k2 = poly.keys().map(|e| e[2]).min().unwrap_or(0);
    let poly: BTreeMap<Mono, F> = poly.into_iter().map(|(e, v)| ([e[0], e[1] - k1, e[2] - k2], v)).collect();
    let degree = d1 + d2 - mu - k1 - k2;
    let u = ma.inverse().apply(&a_n[0]);
    let w = mb.inverse().apply(&a_n[1]);
    let pt = [u[0].clone() * &w[0], u[0].clone() * &w[1], u[1].clone() * &w[0]];
    if pt.iter().all(|c| c.is_zero()) {
        return Err(Error::Degenerate("a_n lies on a ruling through a_m".into()));
    }
    Ok(PlaneProjection { degree, centre_multiplicity: mu, multiplicity_at_a_n: plane_multiplicity(&poly, &pt) })
}

/// Identifications of the two factors with `q` and `Λ`.
#[derive(Clone, Debug)]
pub struct Frames<F: Scalar> {
    /// First factor to the conic parameter, normalized by a fixed third point;
    /// the full family is `T_λ ∘ xi`.
    pub xi: Moebius<F>,
    /// Second factor to the `Λ` chart.
    pub psi: Moebius<F>,
    /// `0` when the `θ` side of the Weierstrass points goes to `Π_z`, `1` for `Π_z′`.
    pub epsilon: usize,
    pub chart: LambdaChart<F>,
}

/// Finds the Möbius transformations identifying the factors of `P¹ × P¹`
/// with `q` and `Λ`. The `Λ` factor is pinned by the two cones and `l_y`; the
/// images of `l_x`, `m_x`, `n_y` and the conjugation of `j_C` into `j_Λ`
/// are then checked, which decides `ε`.
pub fn identify_frames<F: Scalar>(ctx: &QuadricContext<F>, pe: &ProductEmbedding<F>) -> Result<Frames<F>> {
    let one = ctx.one();
    let (src1, src2) = (&pe.a_m[0], &pe.a_n[0]);
    if proj_eq(src1, src2) {
        return Err(Error::Degenerate("a_m and a_n share a first coordinate".into()));
    }
    let vy = ctx.v_y();
    let third_src = probes(&one, 4).into_iter().find(|p| !proj_eq(p, src1) && !proj_eq(p, src2)).expect("enough probes");
    let third_dst = probes(&one, 4)
        .into_iter()
        .find(|p| !proj_eq(p, &ctx.v_x) && !proj_eq(p, &vy))
        .expect("enough probes");
    let xi = Moebius::from_three([src1, src2, &third_src], [&ctx.v_x, &vy, &third_dst])
        .ok_or_else(|| Error::Degenerate("first factor points are not distinct".into()))?;

    let chart = LambdaChart::new(ctx)?;
    let target_ly = chart.of_line(ctx, &ctx.l_y())?;
    let checks = [
        (&pe.a_m[1], chart.of_line(ctx, &ctx.l_x())?),
        (&pe.phi_m[1], chart.of_line(ctx, &ctx.m_x())?),
        (&pe.phi_n[1], chart.of_line(ctx, &ctx.n_y())?),
    ];
    let cones = [chart.t_z.clone(), chart.t_zp.clone()];
    let mut found = None;
    for eps in 0..2 {
        let Some(psi) = Moebius::from_three(
            [&pe.l_value, &pe.l_prime_value, &pe.a_n[1]],
            [&cones[eps], &cones[1 - eps], &target_ly],
        ) else {
            continue;
        };
        let points_ok = checks.iter().all(|(s, t)| proj_eq(&psi.apply(s), t));
        let conj = psi.compose(&pe.exchanger).compose(&psi.inverse());
        if points_ok && conj.proj_eq(&chart.exchanger) {
            found = Some((psi, eps));
            break;
        }
    }
    let (psi, epsilon) =
        found.ok_or_else(|| Error::NotInImage("the Λ-factor conditions are inconsistent for both cone orders".into()))?;
    Ok(Frames { xi, psi, epsilon, chart })
}

/// `T_λ` on the conic parameter: the Möbius transformation fixing `v_x` and
/// `v_y` with multiplier `λ` at `v_x`.
pub fn conic_torus<F: Scalar>(ctx: &QuadricContext<F>, lambda: &F) -> Moebius<F> {
    let (a, c) = (ctx.v_x[0].clone(), ctx.v_x[1].clone());
    let (b, d) = (ctx.zero(), ctx.one());
    // A = [[a, b], [c, d]] sends [1:0] ↦ v_x and [0:1] ↦ v_y; T = A·diag(λ, 1)·A⁻¹
    let m = Moebius::new([a.clone(), b.clone(), c.clone(), d.clone()]);
    let diag = Moebius::new([lambda.clone(), ctx.zero(), ctx.zero(), ctx.one()]);
    m.compose(&diag).compose(&m.inverse())
}

/// The torus element `T_κ` acting on ruling curves: `a_i ↦ κ^(r−i)·a_i`,
/// `b_i ↦ κ^(r+1−i)·b_i`.
pub fn torus_action<F: Scalar>(r: &RulingCurve<F>, kappa: &F) -> RulingCurve<F> {
    let rr = r.r();
    let a = r.a.iter().enumerate().map(|(i, x)| kappa.pow((rr - i) as u64) * x).collect();
    let b = r.b.iter().enumerate().map(|(i, x)| kappa.pow((rr + 1 - i) as u64) * x).collect();
    RulingCurve { d: r.d, a, b }
}

/// One block of interpolation conditions: the Weierstrass points over the
/// roots of `w` (or a single rational point when `w = x`) with their values
/// under both factors, sent to the cone with vertex `vertex`.
struct Block<'a, F: Scalar> {
    w: Poly<F>,
    first: (Poly<F>, Poly<F>),
    vertex: &'a [F],
}

fn mobius_mod<F: Scalar>(m: &Moebius<F>, v: &(Poly<F>, Poly<F>), w: &Poly<F>) -> (Poly<F>, Poly<F>) {
    let [a, b, c, d] = &m.m;
    ((&v.0.scale(a) + &v.1.scale(b)).rem(w), (&v.0.scale(c) + &v.1.scale(d)).rem(w))
}

/// Segre coordinates `(y0, y1, y2, y3)` of the points `R ∩ H` attached to a block,
/// as residues modulo `w`.
fn block_points<F: Scalar>(ctx: &QuadricContext<F>, xi: &Moebius<F>, blk: &Block<F>) -> Result<Vec<Poly<F>>> {
    let w = &blk.w;
    let (v0, v1) = mobius_mod(xi, &blk.first, w);
    let (v00, v01, v11) = ((&v0 * &v0).rem(w), (&v0 * &v1).rem(w), (&v1 * &v1).rem(w));
    let conic: Vec<Poly<F>> = ctx
        .conic_forms()
        .iter()
        .map(|f| &(&v11.scale(&f[0]) + &v01.scale(&f[1])) + &v00.scale(&f[2]))
        .collect();
    let h_c = conic.iter().zip(&ctx.h).fold(Poly::zero(), |acc, (p, h)| &acc + &p.scale(h));
    let h_z = ctx.h.iter().zip(blk.vertex).fold(ctx.zero(), |acc, (h, z)| acc + h.clone() * z);
    // the point of the line ⟨vertex, c(v)⟩ lying in H
    let pt: Vec<Poly<F>> = (0..5).map(|k| &h_c.scale(&blk.vertex[k]) - &conic[k].scale(&h_z)).collect();
    let s = Matrix::from_cols(ctx.segre.to_vec());
    let rows = (0..5usize)
        .flat_map(|a| (a + 1..5).flat_map(move |b| (b + 1..5).flat_map(move |c| (c + 1..5).map(move |e| [a, b, c, e]))))
        .find(|idx| Matrix::from_rows(idx.iter().map(|&i| s.row(i).to_vec()).collect()).rank() == 4)
        .expect("the Segre basis spans H");
    let sub = Matrix::from_rows(rows.iter().map(|&i| s.row(i).to_vec()).collect());
    let inv = sub.inverse().expect("invertible minor");
    Ok((0..4)
        .map(|k| rows.iter().enumerate().fold(Poly::zero(), |acc, (l, &i)| &acc + &pt[i].scale(&inv[(k, l)])))
        .map(|p| p.rem(w))
        .collect())
}

/// The linear conditions `t0^(r−1)·σ = 0` and `t1^(r−1)·σ = 0` at the points of a block.
fn block_rows<F: Scalar>(d: usize, y: &[Poly<F>], w: &Poly<F>) -> Vec<Vec<F>> {
    let r = d - 1;
    let one = w.lc().expect("nonzero modulus").one_like();
    let zero = one.zero_like();
    let pw = |p: &Poly<F>, k: usize| if k == 0 { Poly::constant(one.clone()) } else { p.pow_mod(k as u64, w) };
    let mul = |ps: &[Poly<F>]| ps.iter().fold(Poly::constant(one.clone()), |acc, p| (&acc * p).rem(w));
    let (y0, y1, y2, y3) = (&y[0], &y[1], &y[2], &y[3]);
    let mut v0 = Vec::with_capacity(2 * d);
    let mut v1 = Vec::with_capacity(2 * d);
    for i in 0..=r {
        v0.push(mul(&[pw(y0, i), pw(y2, r - i)]));
        v1.push(if i < r { mul(&[y2.clone(), pw(y1, r - 1 - i), pw(y3, i)]) } else { mul(&[y0.clone(), pw(y3, r - 1)]) });
    }
    for i in 0..=r {
        v0.push(if i == 0 { mul(&[y1.clone(), pw(y2, r - 1)]) } else { mul(&[y3.clone(), pw(y0, i - 1), pw(y2, r - i)]) });
        v1.push(mul(&[pw(y3, i), pw(y1, r - i)]));
    }
    let n = w.deg() as usize;
    let mut rows = Vec::new();
    for polys in [v0, v1] {
        for k in 0..n {
            rows.push(polys.iter().map(|p| p.coeff(k, &zero)).collect());
        }
    }
    rows
}

/// The interpolation system for `T_λ ∘ ξ` and its kernel.
fn interpolation<F: Scalar>(
    ctx: &QuadricContext<F>,
    t: &SpinTuple<F>,
    pe: &ProductEmbedding<F>,
    frames: &Frames<F>,
    lambda: &F,
) -> Result<(Vec<Vec<F>>, Vec<Vec<F>>, Vec<Poly<F>>)> {
    let c = &t.curve;
    let one = c.one();
    let xi = conic_torus(ctx, lambda).compose(&frames.xi);
    let (v_side, v_other) = if frames.epsilon == 0 { (&ctx.z, &ctx.zp) } else { (&ctx.zp, &ctx.z) };
    let mut blocks = Vec::new();
    for (w, vertex) in [(t.theta.side.clone(), v_side), (t.other_side(), v_other)] {
        if !w.is_constant() {
            blocks.push(Block { first: c.pencil_weierstrass_values(&pe.phi1, &w)?, w, vertex });
        }
    }
    let inf = c.pencil_value_at(&pe.phi1, &Point::Infinity)?;
    let xw = Poly::x(&one);
    let inf_block = Block {
        w: xw,
        first: (Poly::constant(inf[0].clone()), Poly::constant(inf[1].clone())),
        vertex: if t.theta.with_inf { v_side } else { v_other },
    };
    let inf_y = block_points(ctx, &xi, &inf_block)?;
    blocks.push(inf_block);
    let mut rows = Vec::new();
    for b in &blocks {
        let y = block_points(ctx, &xi, b)?;
        rows.extend(block_rows(t.d(), &y, &b.w));
    }
    let ker = Matrix::from_rows(rows.clone()).kernel_with(&one);
    Ok((rows, ker, inf_y))
}

/// Recovery of `R` from the frames.
#[derive(Clone, Debug)]
pub struct Recovery<F: Scalar> {
    pub curve: RulingCurve<F>,
    /// Dimension of the solution space of the interpolation conditions.
    pub kernel_dim: usize,
    /// Whether the torus ambiguity was resolved with the stored x-to-s substitution.
    pub pinned: bool,
    /// The torus parameter applied to the interpolated curve when pinning.
    pub lambda: Option<F>,
    /// Whether `det` of the square `2d × 2d` interpolation system vanished at
    /// every sampled `λ`.
    pub det_identically_zero: bool,
}

/// Solves the interpolation conditions for `R` and fixes the torus.
pub fn recover_and_interpolate<F: Scalar>(
    ctx: &QuadricContext<F>,
    t: &SpinTuple<F>,
    pe: &ProductEmbedding<F>,
    frames: &Frames<F>,
) -> Result<Recovery<F>> {
    let one = ctx.one();
    let d = t.d();
    let (_, ker, inf_y) = interpolation(ctx, t, pe, frames, &one)?;
    match ker.len() {
        0 => return Err(Error::NotInImage("no ruling curve meets the reconstructed points".into())),
        1 => {}
        k => return Err(Error::Degenerate(format!("interpolation leaves a {k}-dimensional family"))),
    }
    let hat = RulingCurve::from_coeffs(d, &ker[0])?;

    // the square system made of the t0-multiplied conditions, one per point
    let mut det_zero = true;
    for k in 2..5 {
        let lambda = one.from_i64_like(k);
        let (rows, ker, _) = interpolation(ctx, t, pe, frames, &lambda)?;
        let square: Vec<Vec<F>> = square_rows(&rows, t, d);
        det_zero &= Matrix::from_rows(square).det().is_zero() && ker.len() == 1;
    }

    let mut curve = hat.clone();
    let mut pinned = false;
    let mut lambda = None;
    if let Some(mb) = &t.x_to_s {
        let sigma = mb.apply(&[one.clone(), one.zero_like()]);
        let y: Vec<F> = inf_y.iter().map(|p| p.coeff(0, &one.zero_like())).collect();
        let s_hat = if !y[0].is_zero() || !y[2].is_zero() { [y[0].clone(), y[2].clone()] } else { [y[3].clone(), y[1].clone()] };
        if s_hat[0].is_zero() || s_hat[1].is_zero() || sigma[0].is_zero() || sigma[1].is_zero() {
            return Err(Error::Degenerate("the anchor sits at a fixed point of the torus".into()));
        }
        let kappa = s_hat[1].clone() * &sigma[0] / &(s_hat[0].clone() * &sigma[1]);
        let vertex = if t.theta.with_inf == (frames.epsilon == 0) { &ctx.z } else { &ctx.zp };
        for cand in [kappa.clone(), kappa.inv().expect("nonzero")] {
            let rc = torus_action(&hat, &cand);
            if pairing_form(ctx, &rc.param(ctx), vertex).eval(&sigma).is_zero() {
                curve = rc;
                pinned = true;
                lambda = Some(cand);
                break;
            }
        }
        if !pinned {
            return Err(Error::Invariant("the torus cannot move the anchor back into place".into()));
        }
    }
    Ok(Recovery { curve, kernel_dim: 1, pinned, lambda, det_identically_zero: det_zero })
}

/// The `2d` conditions `t0^(r−1)·σ = 0`, one per Weierstrass point, taken from
/// the first half of each block's rows.
fn square_rows<F: Scalar>(rows: &[Vec<F>], t: &SpinTuple<F>, d: usize) -> Vec<Vec<F>> {
    let mut sizes = Vec::new();
    for w in [t.theta.side.clone(), t.other_side()] {
        if !w.is_constant() {
            sizes.push(w.deg() as usize);
        }
    }
    sizes.push(1);
    let mut out = Vec::with_capacity(2 * d);
    let mut at = 0;
    for n in sizes {
        out.extend(rows[at..at + n].iter().cloned());
        at += 2 * n;
    }
    out
}

/// The outcome of `R → (C, θ, m, n) → R′`.
#[derive(Clone, Debug)]
pub struct RoundtripReport<F: Scalar> {
    pub recovered: RulingCurve<F>,
    /// `R′ = R`.
    pub equals_input: bool,
    /// `R′ = g·R` for the involution `g = T_{−1}`.
    pub equals_g_image: bool,
    pub epsilon: usize,
    /// The torus parameter used to pin `R′`.
    pub lambda: Option<F>,
    pub det_identically_zero: bool,
    /// Whether `R′` is general in the sense of the generality checks.
    pub recovered_general: bool,
    pub image_multiplicity_a_m: usize,
    pub image_multiplicity_a_n: usize,
    pub projection: PlaneProjection,
}

impl<F: Scalar> RoundtripReport<F> {
    pub fn success(&self) -> bool {
        (self.equals_input || self.equals_g_image) && self.recovered_general
    }
}

/// Runs the whole reconstruction on a tuple and reports the recovered curve.
pub fn reconstruct<F: Scalar>(ctx: &QuadricContext<F>, t: &SpinTuple<F>) -> Result<(Recovery<F>, Frames<F>, ProductEmbedding<F>)> {
    t.validate()?;
    let pe = product_embedding(t)?;
    let frames = identify_frames(ctx, &pe)?;
    let rec = recover_and_interpolate(ctx, t, &pe, &frames)?;
    Ok((rec, frames, pe))
}

pub fn roundtrip<F: Scalar>(ctx: &QuadricContext<F>, r: &RulingCurve<F>) -> Result<RoundtripReport<F>> {
    let t = extract_spin_tuple(ctx, r)?;
    let (rec, frames, pe) = reconstruct(ctx, &t)?;
    let g = image_biform(&t, &pe)?;
    let projection = plane_projection(&g, &pe.a_m, &pe.a_n)?;
    let minus_one = -ctx.one();
    Ok(RoundtripReport {
        equals_input: rec.curve.proj_eq(r),
        equals_g_image: rec.curve.proj_eq(&torus_action(r, &minus_one)),
        recovered_general: check_generality_r(ctx, &rec.curve).all(),
        epsilon: frames.epsilon,
        lambda: rec.lambda.clone(),
        det_identically_zero: rec.det_identically_zero,
        image_multiplicity_a_m: g.multiplicity_at(&pe.a_m),
        image_multiplicity_a_n: g.multiplicity_at(&pe.a_n),
        projection,
        recovered: rec.curve,
    })
}
