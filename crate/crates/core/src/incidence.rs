//! Supports of marked lines, the incidence divisors they cut on `C(R)`, and
//! the coordinates of lines meeting the conic.

use crate::correspondence::{pairing_form, Correspondence, MarkedPoint};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::form::{Form, Moebius};
use crate::jacobian::{EffDiv, Point};
use crate::linalg::Matrix;
use crate::model::HyperellipticModel;
use crate::poly::Poly;
use crate::quadric::{normalize2, Line, QuadricContext};

/// Position of the Plücker coordinate `(i, j)`, `i < j`, among the ten of P⁴.
fn pidx(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 5);
    // rows of lengths 4, 3, 2, 1
    i * (9 - i) / 2 + (j - i - 1)
}

/// The five coordinates of `l1 ∧ l2 ∈ Λ⁴`, indexed by the omitted basis vector.
fn wedge4<F: Scalar>(l1: &[F], l2: &[F]) -> Vec<F> {
    let zero = l1[0].zero_like();
    (0..5)
        .map(|omit| {
            let idx: Vec<usize> = (0..5).filter(|&k| k != omit).collect();
            let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
            let t = |a: usize, b: usize, c: usize, d: usize| {
                l1[pidx(a, b)].clone() * &l2[pidx(c, d)] + l1[pidx(c, d)].clone() * &l2[pidx(a, b)]
            };
            zero.clone() + t(i, j, k, l) - t(i, k, j, l) + t(i, l, j, k)
        })
        .collect()
}

/// Whether a Plücker vector comes from a line (`l ∧ l = 0`, nonzero).
pub fn is_decomposable<F: Scalar>(l: &[F]) -> bool {
    l.len() == 10 && l.iter().any(|c| !c.is_zero()) && wedge4(l, l).iter().all(|c| c.is_zero())
}

/// Whether two lines of P⁴, given by Plücker vectors, meet or coincide.
pub fn lines_meet<F: Scalar>(l1: &[F], l2: &[F]) -> Result<bool> {
    if !is_decomposable(l1) || !is_decomposable(l2) {
        return Err(Error::Input("Plücker vector is not decomposable".into()));
    }
    Ok(wedge4(l1, l2).iter().all(|c| c.is_zero()))
}

/// A point of `C(R)` together with the Plücker vector of its support.
#[derive(Clone, Debug)]
pub struct MarkedLine<F: Scalar> {
    pub point: MarkedPoint<F>,
    pub support: Vec<F>,
}

pub fn marked_line<F: Scalar>(ctx: &QuadricContext<F>, corr: &Correspondence<F>, p: &MarkedPoint<F>) -> Result<MarkedLine<F>> {
    if !corr.contains(p) {
        return Err(Error::Input("point is not on C(R)".into()));
    }
    let line = corr.support(ctx, p);
    if line.is_degenerate() {
        return Err(Error::Degenerate("marked line with coincident endpoints".into()));
    }
    Ok(MarkedLine { point: p.clone(), support: line.plucker() })
}

/// `Σ_k w_k·(conic coordinate k)` as the three coefficients of `v0^j v1^(2−j)`.
fn conic_pairing<F: Scalar>(ctx: &QuadricContext<F>, w: &[F]) -> [F; 3] {
    let bw = ctx.gram.mul_vec(w);
    let forms = ctx.conic_forms();
    let mut out = [ctx.zero(), ctx.zero(), ctx.zero()];
    for k in 0..5 {
        for j in 0..3 {
            out[j] = out[j].clone() + bw[k].clone() * &forms[k][j];
        }
    }
    out
}

/// The biform `det[[b(r, p), b(r, q)], [b(c(v), p), b(c(v), q)]]` of bidegree
/// `(d, 2)`, which vanishes exactly where the support of `(s, v)` meets the
/// line `⟨p, q⟩ ⊂ Q`.
pub fn incidence_biform<F: Scalar>(ctx: &QuadricContext<F>, corr: &Correspondence<F>, l: &Line<F>) -> Result<Vec<Form<F>>> {
    if l.is_degenerate() || !ctx.line_in_quadric(&l.p, &l.q) {
        return Err(Error::Input("incidence needs a line of Q".into()));
    }
    let rp = pairing_form(ctx, &corr.param, &l.p);
    let rq = pairing_form(ctx, &corr.param, &l.q);
    let cp = conic_pairing(ctx, &l.p);
    let cq = conic_pairing(ctx, &l.q);
    Ok((0..3).map(|j| rp.scale(&cq[j]).sub(&rq.scale(&cp[j]))).collect())
}

/// The divisor of marked lines whose support meets the line `l ⊂ Q`, in
/// model coordinates. Its degree is `2d`.
pub fn incidence_divisor<F: Scalar>(
    ctx: &QuadricContext<F>,
    corr: &Correspondence<F>,
    model: &HyperellipticModel<F>,
    l: &Line<F>,
) -> Result<EffDiv<F>> {
    let g = incidence_biform(ctx, corr, l)?;
    if g.iter().all(|f| f.is_zero()) {
        return Err(Error::Degenerate("incidence biform vanishes on C(R)".into()));
    }
    let z = model.section_divisor(&g)?;
    // the Gram condition cuts the incidence divisor twice
    let d = model
        .curve
        .halve(&z)
        .ok_or_else(|| Error::Degenerate("incidence cut is not a double divisor".into()))?;
    if d.degree() != 2 * corr.d {
        return Err(Error::Invariant(format!("incidence divisor has degree {} instead of {}", d.degree(), 2 * corr.d)));
    }
    Ok(d)
}

/// `D_{[t,a]}`: the incidence divisor of the support of `[t, a]` minus
/// `[t, a′]` and minus the `d` marked lines ending at `a`.
pub fn theta_from_incidence<F: Scalar>(
    ctx: &QuadricContext<F>,
    corr: &Correspondence<F>,
    model: &HyperellipticModel<F>,
    p: &Point<F>,
) -> Result<EffDiv<F>> {
    let mp = model.to_marked(p);
    let line = corr.support(ctx, &mp);
    let inc = incidence_divisor(ctx, corr, model, &line)?;
    let cv = &model.curve;
    let fiber = model.v_fiber(&mp.v)?;
    let rest = cv
        .eff_sub(&inc, &fiber)
        .ok_or_else(|| Error::Degenerate("incidence divisor misses the fiber of a".into()))?;
    let d = cv
        .eff_sub(&rest, &cv.point_div(&cv.involution(p)))
        .ok_or_else(|| Error::Degenerate("incidence divisor misses [t, a']".into()))?;
    if d.degree() != corr.d - 1 {
        return Err(Error::Invariant("residual incidence divisor has the wrong degree".into()));
    }
    Ok(d)
}

/// Number of distinct roots in P¹ common to a family of binary forms.
fn common_root_count<F: Scalar>(forms: &[Form<F>]) -> Option<usize> {
    let nonzero: Vec<&Form<F>> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return None;
    }
    let at_inf = nonzero.iter().all(|f| f.mult_at_infinity() > 0);
    let g = nonzero.iter().fold(Poly::zero(), |acc, f| acc.gcd(&f.p));
    let distinct = if g.is_constant() { 0 } else { g.div_exact(&g.gcd(&g.derivative())).unwrap().deg() as usize };
    Some(distinct + usize::from(at_inf))
}

/// Forms `det(pt(s), p, q)` over all 3×3 minors; they vanish exactly where `pt(s) ∈ ⟨p, q⟩`.
fn on_line_forms<F: Scalar>(pt: &[Form<F>], l: &Line<F>) -> Vec<Form<F>> {
    let pl = l.plucker();
    let mut out = Vec::new();
    for i in 0..5 {
        for j in (i + 1)..5 {
            for k in (j + 1)..5 {
                let f = pt[i]
                    .scale(&pl[pidx(j, k)])
                    .sub(&pt[j].scale(&pl[pidx(i, k)]))
                    .add(&pt[k].scale(&pl[pidx(i, j)]));
                out.push(f);
            }
        }
    }
    out
}

/// The number of marked lines of `C(R)` whose support is the line `l`.
pub fn support_multiplicity<F: Scalar>(ctx: &QuadricContext<F>, corr: &Correspondence<F>, l: &Line<F>) -> Result<usize> {
    if l.is_degenerate() {
        return Err(Error::Input("degenerate line".into()));
    }
    let ns = common_root_count(&on_line_forms(&corr.param, l)).unwrap_or(0);
    let conic: Vec<Form<F>> = ctx.conic_forms().iter().map(|c| Form::from_coeffs(c.to_vec())).collect();
    let nv = common_root_count(&on_line_forms(&conic, l)).unwrap_or(0);
    if ns == 0 || nv == 0 {
        return Ok(0);
    }
    // r(s) and c(v) both on l means l is their join, a line of Q
    if !ctx.line_in_quadric(&l.p, &l.q) {
        return Ok(0);
    }
    Ok(ns * nv)
}

/// Coordinates of a line of `Q` meeting `q` on `S_q ≅ q × Λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SqCoords<F> {
    /// Conic parameter of the point `l ∩ q`.
    pub a: [F; 2],
    /// Pencil parameter of the hyperplane `⟨P(W), l⟩`.
    pub member: [F; 2],
}

pub fn sq_coordinates<F: Scalar>(ctx: &QuadricContext<F>, l: &Line<F>) -> Result<SqCoords<F>> {
    let (p, q) = (&l.p, &l.q);
    let coeffs = if !p[0].is_zero() || !q[0].is_zero() {
        [q[0].clone(), -p[0].clone()]
    } else {
        [q[1].clone(), -p[1].clone()]
    };
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::Input("line lies in the plane of q".into()));
    }
    let pt: Vec<F> = p.iter().zip(q).map(|(a, b)| coeffs[0].clone() * a + coeffs[1].clone() * b).collect();
    if !ctx.in_conic_plane(&pt) {
        return Err(Error::Input("line misses the plane of q".into()));
    }
    let a = ctx.conic_param(&pt).ok_or_else(|| Error::Input("line is disjoint from q".into()))?;
    let member = ctx.pencil_member_of_line(l).expect("line leaves the plane of q");
    Ok(SqCoords { a, member })
}

/// Chinese remaindering of `a mod m1` and `b mod m2` for coprime moduli.
fn crt<F: Scalar>(a: &Poly<F>, m1: &Poly<F>, b: &Poly<F>, m2: &Poly<F>) -> Poly<F> {
    if m1.is_constant() {
        return b.rem(m2);
    }
    if m2.is_constant() {
        return a.rem(m1);
    }
    let (_, s, t) = m1.xgcd(m2);
    let m = m1 * m2;
    (&(&(a * &t) * m2) + &(&(b * &s) * m1)).rem(&m)
}

/// Plücker vectors of the supports of the Weierstrass marked lines over the
/// roots of `side` (a form in `s` without roots at infinity), as ten
/// polynomials modulo the side.
fn weierstrass_supports<F: Scalar>(ctx: &QuadricContext<F>, corr: &Correspondence<F>, side: &Form<F>) -> Result<(Poly<F>, Vec<Poly<F>>)> {
    if side.mult_at_infinity() > 0 {
        return Err(Error::Input("Weierstrass side with a root at infinity".into()));
    }
    let m = side.p.monic();
    let two = ctx.one().from_i64_like(2);
    let on_fa = corr.fa.p.gcd(&m);
    let rest = m.div_exact(&on_fa).expect("gcd divides");
    // v = [−fb : 2fa] away from fa = 0, and [−2fc : fb] on it
    let v0 = crt(&(-&corr.fb.p), &rest, &corr.fc.p.scale(&-two.clone()), &on_fa);
    let v1 = crt(&corr.fa.p.scale(&two), &rest, &corr.fb.p, &on_fa);
    let forms = ctx.conic_forms();
    let conic: Vec<Poly<F>> = (0..5)
        .map(|k| {
            let c = &forms[k];
            let t0 = (&v1 * &v1).scale(&c[0]);
            let t1 = (&v0 * &v1).scale(&c[1]);
            let t2 = (&v0 * &v0).scale(&c[2]);
            (&(&t0 + &t1) + &t2).rem(&m)
        })
        .collect();
    let r: Vec<Poly<F>> = corr.param.iter().map(|f| f.p.rem(&m)).collect();
    let mut pl = Vec::with_capacity(10);
    for i in 0..5 {
        for j in (i + 1)..5 {
            pl.push((&(&r[i] * &conic[j]) - &(&r[j] * &conic[i])).rem(&m));
        }
    }
    Ok((m, pl))
}

fn coeff_matrix<F: Scalar>(polys: &[Poly<F>], n: usize, zero: &F) -> Matrix<F> {
    Matrix::from_rows(polys.iter().map(|p| (0..n).map(|i| p.coeff(i, zero)).collect()).collect())
}

/// Whether the Plücker images of the supports of the `d` Weierstrass marked
/// lines on one side span a plane and lie on a conic there.
fn side_on_conic<F: Scalar>(ctx: &QuadricContext<F>, corr: &Correspondence<F>, side: &Form<F>) -> Result<bool> {
    let (m, pl) = weierstrass_supports(ctx, corr, side)?;
    let n = m.deg() as usize;
    let zero = ctx.zero();
    let mat = coeff_matrix(&pl, n, &zero);
    let rank = mat.rank();
    if rank > 3 {
        return Err(Error::Invariant(format!("Weierstrass supports span a P^{} in Plücker space", rank - 1)));
    }
    // coordinates on the plane: three independent Plücker rows
    let mut rows: Vec<usize> = Vec::new();
    for k in 0..10 {
        let mut cand = rows.clone();
        cand.push(k);
        let sub: Vec<Poly<F>> = cand.iter().map(|&i| pl[i].clone()).collect();
        if coeff_matrix(&sub, n, &zero).rank() == cand.len() {
            rows = cand;
        }
    }
    let mut quads = Vec::new();
    for a in 0..rows.len() {
        for b in a..rows.len() {
            quads.push((&pl[rows[a]] * &pl[rows[b]]).rem(&m));
        }
    }
    let q = coeff_matrix(&quads, n, &zero);
    Ok(q.rank() < quads.len())
}

/// Checks that each side of the Weierstrass partition has supports on a plane conic of
/// the Plücker embedding. Vacuous for `d ≤ 5`, where any five points of a plane lie on a conic.
pub fn plucker_conic_check<F: Scalar>(ctx: &QuadricContext<F>, corr: &Correspondence<F>) -> Result<bool> {
    Ok(side_on_conic(ctx, corr, &corr.pz)? && side_on_conic(ctx, corr, &corr.pzp)?)
}

/// A coordinate on `Λ`, the double cover of the pencil of hyperplanes through
/// `P(W)`, realized as the conic of lines of `Q` through `x`. The lines through
/// `x` are the isotropic points of `x^⊥/x`, projected from the line `⟨x, z⟩`
/// onto the `(e, f)` coordinates of a basis `{x, z, e, f}` of `x^⊥`.
#[derive(Clone, Debug)]
pub struct LambdaChart<F: Scalar> {
    basis: Matrix<F>,
    /// Coordinate of `⟨x, z⟩`, the line of `Π_z` through `x`.
    pub t_z: [F; 2],
    /// Coordinate of `⟨x, z′⟩`.
    pub t_zp: [F; 2],
    /// The exchanger `j_Λ`: the involution fixing `t_z` and `t_zp`.
    pub exchanger: Moebius<F>,
}

impl<F: Scalar> LambdaChart<F> {
    pub fn new(ctx: &QuadricContext<F>) -> Result<Self> {
        let row: Vec<F> = ctx.gram.mul_vec(&ctx.x);
        let perp = Matrix::from_rows(vec![row]).kernel_with(&ctx.one());
        let mut cols = vec![ctx.x.clone(), ctx.z.clone()];
        for k in perp {
            let mut trial = cols.clone();
            trial.push(k.clone());
            if cols.len() < 4 && Matrix::from_cols(trial).rank() == cols.len() + 1 {
                cols.push(k);
            }
        }
        if cols.len() != 4 {
            return Err(Error::Degenerate("x^⊥ does not contain a frame through z".into()));
        }
        let (e, f) = (cols[2].clone(), cols[3].clone());
        let basis = Matrix::from_cols(cols);
        let t_z = normalize2([ctx.bil(&ctx.z, &f), -ctx.bil(&ctx.z, &e)]);
        let mut chart = LambdaChart { basis, t_zp: t_z.clone(), t_z, exchanger: Moebius::identity(&ctx.one()) };
        chart.t_zp = chart.point_coordinate(&ctx.zp)?;
        if crate::field::proj_eq(&chart.t_z, &chart.t_zp) {
            return Err(Error::Degenerate("the two cones give the same point of Λ".into()));
        }
        let (a, c) = (chart.t_z[0].clone(), chart.t_z[1].clone());
        let (b, d) = (chart.t_zp[0].clone(), chart.t_zp[1].clone());
        let two = ctx.one().from_i64_like(2);
        let tr = a.clone() * &d + b.clone() * &c;
        chart.exchanger = Moebius::new([tr.clone(), -(two.clone() * &a * &b), two * &c * &d, -tr]);
        Ok(chart)
    }

    /// Coordinate of the line `⟨x, p⟩` for an isotropic `p ∈ x^⊥` off `x`.
    pub fn point_coordinate(&self, p: &[F]) -> Result<[F; 2]> {
        let c = self
            .basis
            .solve(p)
            .ok_or_else(|| Error::Input("point is not orthogonal to x".into()))?;
        if c[1].is_zero() && c[2].is_zero() && c[3].is_zero() {
            return Err(Error::Input("point coincides with x".into()));
        }
        if c[2].is_zero() && c[3].is_zero() {
            return Ok(self.t_z.clone());
        }
        Ok(normalize2([c[2].clone(), c[3].clone()]))
    }

    /// `π_Λ(l)` for a line `l` of `Q` meeting `q`: the line through `x` in the
    /// same ruling of `Q ∩ ⟨P(W), l⟩`.
    pub fn of_line(&self, ctx: &QuadricContext<F>, l: &Line<F>) -> Result<[F; 2]> {
        if !ctx.line_in_quadric(&l.p, &l.q) {
            return Err(Error::Input("line is not contained in Q".into()));
        }
        let through_x = Matrix::from_cols(vec![l.p.clone(), l.q.clone(), ctx.x.clone()]).rank() < 3;
        if through_x {
            let other = if Matrix::from_cols(vec![l.p.clone(), ctx.x.clone()]).rank() == 2 { &l.p } else { &l.q };
            return self.point_coordinate(other);
        }
        // the line through x meeting l lies in the opposite ruling
        let (bp, bq) = (ctx.bil(&ctx.x, &l.p), ctx.bil(&ctx.x, &l.q));
        let w: Vec<F> = l.p.iter().zip(&l.q).map(|(a, b)| bq.clone() * a - bp.clone() * b).collect();
        if w.iter().all(|c| c.is_zero()) {
            return Err(Error::Degenerate("line spans a plane of Q with x".into()));
        }
        Ok(self.exchanger.apply(&self.point_coordinate(&w)?))
    }
}
