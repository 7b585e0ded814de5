//! Automorphisms of `(Q, q, H)`, their action on ruling curves, the invariant
//! map realizing the quotient by `G′`, and isomorphism testing of spin tuples.

use crate::correspondence::RulingCurve;
use crate::error::{Error, Result};
use crate::field::{proj_eq, Scalar};
use crate::form::{Form, Moebius};
use crate::jacobian::Point;
use crate::linalg::Matrix;
use crate::quadric::QuadricContext;
use crate::reconstruction::{torus_action, SpinTuple};

/// The four sign matrices `diag(1, ±1, ±1, 1, 1)`, their restrictions to the
/// Segre coordinates of `Q_H`, and the sign involution `g` of `G′`.
#[derive(Clone, Debug)]
pub struct AutAction<F: Scalar> {
    /// In the order `diag(1,1,1,1,1)`, `diag(1,−1,1,1,1)`, `diag(1,1,−1,1,1)`, `diag(1,−1,−1,1,1)`.
    pub matrices: Vec<Matrix<F>>,
    /// The same elements acting on `(y0, y1, y2, y3)`.
    pub segre: Vec<Matrix<F>>,
    /// `g`: `−1` on `⟨x, y⟩`, the identity on `⟨x, y⟩^⊥`.
    pub g_matrix: Matrix<F>,
    pub g_segre: Matrix<F>,
}

/// An element of `G′ = {1, g}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GPrime {
    Identity,
    G,
}

fn diag<F: Scalar>(signs: [i64; 5], one: &F) -> Matrix<F> {
    let mut m = Matrix::zeros(5, 5, one);
    for (i, s) in signs.iter().enumerate() {
        m[(i, i)] = one.from_i64_like(*s);
    }
    m
}

/// Whether `M` preserves the quadric, the hyperplane and the conic plane, each up to scalar.
fn preserves_triple<F: Scalar>(ctx: &QuadricContext<F>, m: &Matrix<F>) -> bool {
    let congr = m.transpose().mul(&ctx.gram).mul(m);
    let flat = |a: &Matrix<F>| a.to_rows().concat();
    let quadric = proj_eq(&flat(&congr), &flat(&ctx.gram));
    let h_row = Matrix::from_rows(vec![ctx.h.clone()]).mul(m);
    let hyperplane = proj_eq(h_row.row(0), &ctx.h);
    let plane = (2..5).all(|k| {
        let col = m.col(k);
        ctx.in_conic_plane(&col)
    });
    quadric && hyperplane && plane
}

/// The 4×4 matrix of `M` restricted to `H` in the Segre basis.
fn segre_restriction<F: Scalar>(ctx: &QuadricContext<F>, m: &Matrix<F>) -> Result<Matrix<F>> {
    let cols = ctx
        .segre
        .iter()
        .map(|e| {
            ctx.segre_coords(&m.mul_vec(e))
                .map(|c| c.to_vec())
                .ok_or_else(|| Error::Invariant("automorphism does not preserve H".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_cols(cols))
}

/// Builds the group and verifies congruence, the Klein four structure and
/// faithfulness on `Q_H`.
pub fn aut_group<F: Scalar>(ctx: &QuadricContext<F>) -> Result<AutAction<F>> {
    let one = ctx.one();
    let matrices: Vec<Matrix<F>> = [[1, 1, 1, 1, 1], [1, -1, 1, 1, 1], [1, 1, -1, 1, 1], [1, -1, -1, 1, 1]]
        .into_iter()
        .map(|s| diag(s, &one))
        .collect();
    for m in &matrices {
        if !preserves_triple(ctx, m) {
            return Err(Error::Invariant("sign matrix does not preserve (Q, q, H)".into()));
        }
    }
    // Klein four: every element is an involution and the set is closed
    let id = Matrix::identity(5, &one);
    for a in &matrices {
        if a.mul(a) != id {
            return Err(Error::Invariant("group element is not an involution".into()));
        }
        for b in &matrices {
            let p = a.mul(b);
            if !matrices.contains(&p) {
                return Err(Error::Invariant("sign matrices are not closed under composition".into()));
            }
        }
    }
    let segre = matrices.iter().map(|m| segre_restriction(ctx, m)).collect::<Result<Vec<_>>>()?;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if proj_eq(&segre[i].to_rows().concat(), &segre[j].to_rows().concat()) {
                return Err(Error::Invariant("restriction to Q_H is not faithful".into()));
            }
        }
    }

    // g = T_{−1}: basis (x, y, ⟨x,y⟩^⊥) with signs (−1, −1, 1, 1, 1)
    let rows = vec![ctx.gram.mul_vec(&ctx.x), ctx.gram.mul_vec(&ctx.y)];
    let perp = Matrix::from_rows(rows).kernel_with(&one);
    let mut cols = vec![ctx.x.clone(), ctx.y.clone()];
    cols.extend(perp);
    let p = Matrix::from_cols(cols);
    let pinv = p.inverse().ok_or_else(|| Error::Invariant("⟨x, y⟩ is degenerate".into()))?;
    let g_matrix = p.mul(&diag([-1, -1, 1, 1, 1], &one)).mul(&pinv);
    if !preserves_triple(ctx, &g_matrix) {
        return Err(Error::Invariant("g does not preserve (Q, q, H)".into()));
    }
    let g_segre = segre_restriction(ctx, &g_matrix)?;
    Ok(AutAction { matrices, segre, g_matrix, g_segre })
}

/// The sign table of `g` on the `2d` coefficients: `a_i ↦ (−1)^(r−i)·a_i`,
/// `b_i ↦ (−1)^(r+1−i)·b_i`.
pub fn g_signs(d: usize) -> Vec<i8> {
    let r = d - 1;
    let sign = |e: usize| if e.is_multiple_of(2) { 1 } else { -1 };
    (0..d).map(|i| sign(r - i)).chain((0..d).map(|i| sign(r + 1 - i))).collect()
}

pub fn act_on_ruling_curve<F: Scalar>(elt: GPrime, r: &RulingCurve<F>) -> RulingCurve<F> {
    match elt {
        GPrime::Identity => r.clone(),
        GPrime::G => {
            let minus = -r.a[0].one_like();
            torus_action(r, &minus)
        }
    }
}

/// Coordinates of the `+1` eigenspace followed by the products `c_i·c_j`
/// (`i ≤ j`) of the `−1` eigenspace, before normalization.
fn raw_invariants<F: Scalar>(c: &[F], signs: &[i8]) -> (Vec<F>, Vec<F>) {
    let plus: Vec<F> = c.iter().zip(signs).filter(|(_, s)| **s > 0).map(|(x, _)| x.clone()).collect();
    let minus: Vec<F> = c.iter().zip(signs).filter(|(_, s)| **s < 0).map(|(x, _)| x.clone()).collect();
    let mut prods = Vec::new();
    for i in 0..minus.len() {
        for j in i..minus.len() {
            prods.push(minus[i].clone() * &minus[j]);
        }
    }
    (plus, prods)
}

/// The invariant vector of `R` under `G′`. The linear part has weight 1 and
/// the products weight 2, so the vector is normalized in weighted projective
/// space: the first nonzero linear coordinate becomes 1 (dividing products by
/// its square); if all linear coordinates vanish, the first nonzero product
/// becomes 1.
pub fn quotient_invariants<F: Scalar>(r: &RulingCurve<F>) -> Vec<F> {
    let (plus, prods) = raw_invariants(&r.coeffs(), &g_signs(r.d));
    let (s1, s2) = match plus.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let inv = p.inv().expect("nonzero");
            (inv.clone(), inv.square())
        }
        None => {
            let q = prods.iter().find(|x| !x.is_zero()).expect("nonzero curve").inv().expect("nonzero");
            (q.zero_like(), q)
        }
    };
    plus.iter().map(|x| x.clone() * &s1).chain(prods.iter().map(|x| x.clone() * &s2)).collect()
}

/// Rank of the differential of the normalized invariant map at `R`, computed
/// exactly in the affine chart where the first nonzero `+1` coordinate is 1.
pub fn invariant_differential_rank<F: Scalar>(r: &RulingCurve<F>) -> Result<usize> {
    let signs = g_signs(r.d);
    let c = r.coeffs();
    let pivot = (0..c.len())
        .find(|&k| signs[k] > 0 && !c[k].is_zero())
        .ok_or_else(|| Error::Degenerate("all invariant-linear coordinates vanish".into()))?;
    let c: Vec<F> = {
        let inv = c[pivot].inv().expect("nonzero");
        c.iter().map(|x| x.clone() * &inv).collect()
    };
    let zero = c[0].zero_like();
    let minus: Vec<usize> = (0..c.len()).filter(|&k| signs[k] < 0).collect();
    let vars: Vec<usize> = (0..c.len()).filter(|&k| k != pivot).collect();
    let mut rows = Vec::new();
    for k in (0..c.len()).filter(|&k| signs[k] > 0) {
        rows.push(vars.iter().map(|&v| if v == k { c[0].one_like() } else { zero.clone() }).collect::<Vec<F>>());
    }
    for i in 0..minus.len() {
        for j in i..minus.len() {
            let (a, b) = (minus[i], minus[j]);
            let row = vars
                .iter()
                .map(|&v| {
                    let mut acc = zero.clone();
                    if v == a {
                        acc = acc + &c[b];
                    }
                    if v == b {
                        acc = acc + &c[a];
                    }
                    acc
                })
                .collect();
            rows.push(row);
        }
    }
    Ok(Matrix::from_rows(rows).rank())
}

/// `R₂ ∈ {R₁, g·R₁}` as projective coefficient vectors.
pub fn orbit_equal<F: Scalar>(r1: &RulingCurve<F>, r2: &RulingCurve<F>) -> bool {
    r1.proj_eq(r2) || act_on_ruling_curve(GPrime::G, r1).proj_eq(r2)
}

/// The rational branch points of the odd model: `∞` and the base-field roots of `f`.
fn rational_branch_points<F: Scalar>(t: &SpinTuple<F>) -> Vec<[F; 2]> {
    let one = t.curve.one();
    let mut pts = vec![[one.clone(), one.zero_like()]];
    pts.extend(F::poly_roots(&t.curve.f).into_iter().map(|x| [x, one.clone()]));
    pts
}

/// The binary form of degree `2g + 2` with the branch points as roots, and
/// the sides of `θ` as forms (the one holding `∞` gets the extra degree).
fn branch_forms<F: Scalar>(t: &SpinTuple<F>) -> (Form<F>, Form<F>, Form<F>) {
    let g = t.curve.g;
    let big = Form::new(t.curve.f.clone(), 2 * g + 2);
    let side = t.theta.side.clone();
    let other = t.other_side();
    let (ds, dother) = if t.theta.with_inf { (side.deg() + 1, other.deg()) } else { (side.deg(), other.deg() + 1) };
    (big, Form::new(side, ds as usize), Form::new(other, dother as usize))
}

fn affine_xy<F: Scalar>(p: &Point<F>) -> Option<(F, F)> {
    match p {
        Point::Affine(x, y) => Some((x.clone(), y.clone())),
        Point::Infinity => None,
    }
}

/// Whether a Möbius transformation `χ` of the x-line lifts to an isomorphism
/// `(C₁, θ₁, m₁, n₁) → (C₂, θ₂, m₂, n₂)`.
fn lifts<F: Scalar>(t1: &SpinTuple<F>, t2: &SpinTuple<F>, chi: &Moebius<F>) -> bool {
    let (f1, s1, o1) = branch_forms(t1);
    let (f2, s2, o2) = branch_forms(t2);
    let zero = t1.curve.one().zero_like();
    if !proj_eq(&f2.pullback(chi).coeffs(&zero), &f1.coeffs(&zero)) {
        return false;
    }
    let same = |a: &Form<F>, b: &Form<F>| a.n == b.n && proj_eq(&a.pullback(chi).coeffs(&zero), &b.coeffs(&zero));
    if !((same(&s2, &s1) && same(&o2, &o1)) || (same(&o2, &s1) && same(&s2, &o1))) {
        return false;
    }
    // y ↦ ±λ·y/(γx + δ)^(g+1); both marked points must use the same sign
    let [_, _, gamma, delta] = &chi.m;
    let ratio = |p1: &Point<F>, p2: &Point<F>| -> Option<F> {
        let (x1, y1) = affine_xy(p1)?;
        let (x2, y2) = affine_xy(p2)?;
        let img = chi.apply(&[x1.clone(), x1.one_like()]);
        if img[1].is_zero() || !(img[0].clone() / &img[1] - &x2).is_zero() {
            return None;
        }
        let den = (gamma.clone() * &x1 + delta).pow(t1.curve.g as u64 + 1);
        Some(y2 * &den / &y1)
    };
    match (ratio(&t1.m, &t2.m), ratio(&t1.n, &t2.n)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

/// Whether two spin tuples are isomorphic, by searching the Möbius
/// transformations sending `(x(m₁), x(n₁), ∞)` to `(x(m₂), x(n₂), b)` for the
/// rational branch points `b` of the second model.
pub fn spin_tuple_isomorphic<F: Scalar>(t1: &SpinTuple<F>, t2: &SpinTuple<F>) -> bool {
    if t1.curve.g != t2.curve.g {
        return false;
    }
    let (Some((xm1, _)), Some((xn1, _)), Some((xm2, _)), Some((xn2, _))) =
        (affine_xy(&t1.m), affine_xy(&t1.n), affine_xy(&t2.m), affine_xy(&t2.n))
    else {
        return false;
    };
    let one = t1.curve.one();
    let src = [[xm1, one.clone()], [xn1, one.clone()], [one.clone(), one.zero_like()]];
    rational_branch_points(t2).into_iter().any(|b| {
        let dst = [[xm2.clone(), one.clone()], [xn2.clone(), one.clone()], b];
        Moebius::from_three([&src[0], &src[1], &src[2]], [&dst[0], &dst[1], &dst[2]])
            .is_some_and(|chi| lifts(t1, t2, &chi))
    })
}
