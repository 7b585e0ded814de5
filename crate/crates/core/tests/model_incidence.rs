use spinlab::correspondence::{build_correspondence, Correspondence, MarkedPoint};
use spinlab::field::{Fp, PrimeField, Scalar};
use spinlab::incidence::{
    incidence_divisor, is_decomposable, lines_meet, marked_line, plucker_conic_check, support_multiplicity, theta_from_incidence,
};
use spinlab::io::Instance;
use spinlab::jacobian::{Curve, Divisor, EffDiv, Point};
use spinlab::model::{extract_model, HyperellipticModel};
use spinlab::quadric::{binary_quadratic_roots, Line, QuadricContext};

struct Built {
    ctx: QuadricContext<Fp>,
    corr: Correspondence<Fp>,
    model: HyperellipticModel<Fp>,
}

fn built(p: u64, d: usize, seed: u64) -> Built {
    let inst = Instance::sample(PrimeField::new(p).unwrap(), d, seed).unwrap();
    let corr = build_correspondence(&inst.ctx, &inst.r).unwrap();
    let model = extract_model(&inst.ctx, &corr).unwrap();
    Built { ctx: inst.ctx, corr, model }
}

/// `dim L(D)` for a divisor whose negative part sits at infinity.
fn rr_dim(cv: &Curve<Fp>, d: &Divisor<Fp>) -> usize {
    assert_eq!(d.neg.affine_degree(), 0);
    cv.rr_space(&d.pos, -(d.neg.inf as isize)).basis.len()
}

/// Marked points over `s = [k : 1]` with a split fiber, away from branch points.
fn split_marked_points(b: &Built, count: usize) -> Vec<MarkedPoint<Fp>> {
    let one = b.ctx.one();
    let mut out = Vec::new();
    for k in 1..200i64 {
        let s = [one.from_i64_like(k), one];
        if b.corr.disc.eval(&s).is_zero() {
            continue;
        }
        if let Some(vs) = binary_quadratic_roots(&b.corr.fiber_quadratic(&s)) {
            for v in vs {
                if v != b.ctx.v_x && v != b.ctx.v_y() && out.len() < count {
                    out.push(MarkedPoint { s, v });
                }
            }
        }
    }
    out
}

#[test]
fn odd_model_shape() {
    for (d, seed) in [(3, 0), (4, 1), (5, 2)] {
        let b = built(10007, d, seed);
        let cv = &b.model.curve;
        assert_eq!(cv.f.deg() as usize, 2 * d - 1);
        assert!(cv.f.is_squarefree() && cv.f.is_monic());
        assert_eq!(cv.g, d - 1);
        // ∞ sits on the Δ_H side, which holds d Weierstrass points in all
        let t = b.model.theta();
        assert!(t.with_inf);
        assert_eq!(t.side.deg() as usize + 1, d);
        assert_eq!(b.model.side_prime.deg() as usize, d);
        assert!(cv.contains(&b.model.m) && cv.contains(&b.model.n));
        assert!(!cv.is_weierstrass(&b.model.m) && !cv.is_weierstrass(&b.model.n));
        // to_point and to_marked are inverse on generic points
        for mp in split_marked_points(&b, 6) {
            let p = b.model.to_point(&mp).unwrap();
            let back = b.model.to_marked(&p);
            assert!(spinlab::field::proj_eq(&back.s, &mp.s) && spinlab::field::proj_eq(&back.v, &mp.v));
        }
    }
}

#[test]
fn weierstrass_point_is_its_own_effective_representative() {
    let b = built(101, 3, 3);
    let cv = &b.model.curve;
    let w = EffDiv::infinity(&cv.one(), 1);
    let e = cv.effective_in_class(&Divisor::effective(w.clone())).unwrap();
    assert_eq!(e, w);
}

#[test]
fn both_sides_give_the_same_theta() {
    for seed in 0..3 {
        let b = built(10007, 4, seed);
        let cv = &b.model.curve;
        let t = b.model.theta();
        let other = cv.theta(b.model.side_prime.clone(), false).unwrap();
        assert!(cv.is_theta_characteristic(&t) && cv.is_theta_characteristic(&other));
        assert!(cv.linearly_equivalent(&cv.theta_divisor(&t), &cv.theta_divisor(&other)));
        assert!(cv.is_ineffective(&t).unwrap());
    }
}

#[test]
fn riemann_roch_dimensions_at_special_divisors() {
    for (d, seed) in [(3, 1), (4, 2), (5, 3)] {
        let b = built(10007, d, seed);
        let cv = &b.model.curve;
        let g = cv.g;
        let theta = cv.theta_divisor(&b.model.theta());
        let mn = cv.points_div(&[b.model.m.clone(), b.model.n.clone()]);
        let plus = |e: &EffDiv<Fp>| Divisor { pos: cv.eff_add(&theta.pos, e), neg: theta.neg.clone() };
        assert_eq!(rr_dim(cv, &plus(&mn)), 2, "θ + m + n");
        assert_eq!(rr_dim(cv, &plus(&EffDiv::infinity(&cv.one(), 2))), 2, "θ + g¹₂");
        assert_eq!(cv.rr_space(&cv.zero_div(), 2 * g as isize - 2).basis.len(), g, "K");
        // the hyperelliptic pencil is the x-coordinate
        let pencil = cv.pencil(&cv.zero_div(), 2).unwrap();
        let one = cv.one();
        for x in 1..5i64 {
            let fib = cv.fiber(&pencil, &[one.from_i64_like(x), one]).unwrap();
            let val = cv.pencil_value(&pencil, &fib).unwrap();
            assert_eq!(fib.degree(), 2);
            assert!(cv.class_of_eff(&fib).is_identity());
            assert!(spinlab::field::proj_eq(&val, &[one.from_i64_like(x), one]));
        }
    }
}

#[test]
fn polyhedra_commute_with_the_involution() {
    let b = built(10007, 4, 5);
    let cv = &b.model.curve;
    let t = b.model.theta();
    for mp in split_marked_points(&b, 4) {
        let p = b.model.to_point(&mp).unwrap();
        let a = cv.theta_polyhedron(&t, &cv.point_div(&p)).unwrap();
        let ia = cv.theta_polyhedron(&t, &cv.point_div(&cv.involution(&p))).unwrap();
        assert_eq!(a.degree(), cv.g);
        assert_eq!(ia, a.iota());
    }
}

#[test]
fn incidence_divisors_of_lines_of_q_have_degree_2d() {
    let b = built(10007, 4, 6);
    let ctx = &b.ctx;
    let one = ctx.one();
    let mut lines: Vec<Line<Fp>> = split_marked_points(&b, 4).iter().map(|mp| b.corr.support(ctx, mp)).collect();
    // lines of the two rulings of Q_H
    for k in 2..5i64 {
        let t = [one, one.from_i64_like(k)];
        lines.push(Line::new(ctx.segre_point(&t, &[one, ctx.zero()]), ctx.segre_point(&t, &[ctx.zero(), one])));
        lines.push(Line::new(ctx.segre_point(&[one, ctx.zero()], &t), ctx.segre_point(&[ctx.zero(), one], &t)));
    }
    assert!(lines.len() >= 10);
    for l in &lines {
        let div = incidence_divisor(ctx, &b.corr, &b.model, l).unwrap();
        assert_eq!(div.degree(), 2 * b.corr.d);
    }
}

#[test]
fn incidence_divisor_of_l_x() {
    for seed in 0..3 {
        let b = built(10007, 3 + seed as usize, seed);
        let cv = &b.model.curve;
        let inc = incidence_divisor(&b.ctx, &b.corr, &b.model, &b.ctx.l_x()).unwrap();
        // [p_x, x] + Σ[x_i, x] is the fiber over x; [p_y, y] is n
        let rest = cv.eff_sub(&inc, &b.model.v_fiber(&b.ctx.v_x).unwrap()).unwrap();
        let rest = cv.eff_sub(&rest, &cv.point_div(&b.model.n)).unwrap();
        assert_eq!(rest.degree(), b.corr.d - 1);
    }
}

#[test]
fn theta_from_incidence_matches_the_polyhedron() {
    for (d, seed) in [(3, 0), (4, 1), (5, 2)] {
        let b = built(10007, d, seed);
        let cv = &b.model.curve;
        let t = b.model.theta();
        let pts = split_marked_points(&b, 5);
        assert_eq!(pts.len(), 5);
        for mp in pts {
            let p = b.model.to_point(&mp).unwrap();
            let dd = theta_from_incidence(&b.ctx, &b.corr, &b.model, &p).unwrap();
            assert_eq!(dd.degree(), d - 1);
            // D − θ − [t, a] reduces to the identity
            let theta = cv.theta_divisor(&t);
            let lhs = Divisor { pos: cv.eff_add(&dd, &theta.neg), neg: cv.eff_add(&theta.pos, &cv.point_div(&p)) };
            assert!(cv.class(&lhs).is_identity());
            assert_eq!(dd, cv.theta_polyhedron(&t, &cv.point_div(&p)).unwrap());
        }
    }
}

#[test]
fn fibers_over_x_and_y_are_theta_polyhedra() {
    for (d, seed) in [(3, 4), (4, 5), (5, 6)] {
        let b = built(101, d, seed);
        let (cv, m) = (&b.model.curve, &b.model);
        let t = m.theta();
        let xs = cv.eff_sub(&m.v_fiber(&b.ctx.v_x).unwrap(), &cv.point_div(&m.m)).unwrap();
        let ys = cv.eff_sub(&m.v_fiber(&b.ctx.v_y()).unwrap(), &cv.point_div(&m.n)).unwrap();
        assert_eq!(xs, cv.theta_polyhedron(&t, &cv.point_div(&m.n)).unwrap());
        assert_eq!(ys, cv.theta_polyhedron(&t, &cv.point_div(&m.m)).unwrap());
    }
}

#[test]
fn support_multiplicities() {
    for (d, seed) in [(3, 0), (4, 1), (5, 2)] {
        let b = built(10007, d, seed);
        let (ctx, c) = (&b.ctx, &b.corr);
        assert_eq!(support_multiplicity(ctx, c, &ctx.l_x()).unwrap(), d - 1);
        assert_eq!(support_multiplicity(ctx, c, &ctx.l_y()).unwrap(), d - 1);
        for mp in split_marked_points(&b, 4) {
            assert_eq!(support_multiplicity(ctx, c, &c.support(ctx, &mp)).unwrap(), 1);
        }
    }
}

#[test]
fn plucker_predicates() {
    let b = built(101, 4, 2);
    let ctx = &b.ctx;
    let lx = ctx.l_x().plucker();
    assert!(is_decomposable(&lx));
    assert!(lines_meet(&lx, &lx).unwrap());
    // two skew coordinate lines ⟨e0, e1⟩ and ⟨e2, e3⟩
    let e = |i: usize| -> Vec<Fp> { (0..5).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect() };
    let l01 = Line::new(e(0), e(1)).plucker();
    let l23 = Line::new(e(2), e(3)).plucker();
    assert!(!lines_meet(&l01, &l23).unwrap());
    assert!(lines_meet(&l01, &Line::new(e(1), e(4)).plucker()).unwrap());
    // the marked lines [x_i, x] all have support l_x
    let m = &b.model;
    let xs = m.curve.eff_sub(&m.v_fiber(&ctx.v_x).unwrap(), &m.curve.point_div(&m.m)).unwrap();
    if let Some(pts) = xs.rational_points(&m.curve) {
        for (p, _) in pts {
            let ml = marked_line(ctx, &b.corr, &m.to_marked(&p)).unwrap();
            assert!(lines_meet(&ml.support, &lx).unwrap());
            assert!(spinlab::field::proj_eq(&ml.support, &lx));
        }
    }
    let mut bad = lx.clone();
    bad[0] = bad[0] + ctx.one();
    if !is_decomposable(&bad) {
        assert!(lines_meet(&bad, &lx).is_err());
    }
}

#[test]
fn weierstrass_supports_lie_on_conics() {
    for (d, seed) in [(3, 0), (4, 1), (4, 7), (5, 2)] {
        let b = built(10007, d, seed);
        assert!(plucker_conic_check(&b.ctx, &b.corr).unwrap());
    }
}

#[test]
fn marked_points_m_and_n_are_model_points() {
    let b = built(101, 3, 9);
    let m = &b.model;
    assert_eq!(m.to_point(&b.corr.m_point(&b.ctx)).unwrap(), m.m);
    assert_eq!(m.to_point(&b.corr.n_point(&b.ctx)).unwrap(), m.n);
    assert!(matches!(m.m, Point::Affine(..)));
}
