use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinlab::error::Error;
use spinlab::field::{proj_eq, Fp, PrimeField, Qt, Scalar, TowerField};
use spinlab::linalg::Matrix;
use spinlab::quadric::{sample_context, Line, QuadricContext};

fn fp_ctx(seed: u64) -> QuadricContext<Fp> {
    let k = PrimeField::new(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_context(&k, &mut rng, 101, 200).unwrap()
}

fn q(n: i64) -> Qt {
    Qt::from_ratio(n, 1)
}

fn plane_of_q<F: Scalar>(ctx: &QuadricContext<F>) -> Vec<Vec<F>> {
    (2..5).map(|i| (0..5).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect()).collect()
}

#[test]
fn small_parameters_build_or_name_the_failing_condition() {
    let k = PrimeField::new(101).unwrap();
    match QuadricContext::build(&k, k.elem(1), k.elem(2), k.elem(5)) {
        Ok(ctx) => assert!(ctx.check_generality().all()),
        Err(Error::Generality { index, .. }) => assert!((1..=7).contains(&index)),
        Err(e) => assert!(matches!(e, Error::Field(_)), "unexpected error {e}"),
    }
}

#[test]
fn anchors_satisfy_their_defining_equations() {
    for seed in 0..5 {
        let ctx = fp_ctx(seed);
        assert!(ctx.check_generality().all());
        assert!(!ctx.gram.det().is_zero());
        for (pt, name) in [(&ctx.x, "x"), (&ctx.y, "y")] {
            assert!(ctx.on_conic(pt) && ctx.in_h(pt), "{name} is not on q ∩ H");
        }
        assert!(ctx.x != ctx.y);
        for z in [&ctx.z, &ctx.zp] {
            assert!(ctx.on_quadric(z));
            for w in plane_of_q(&ctx) {
                assert!(ctx.bil(z, &w).is_zero());
            }
        }
        // the conic of the plane {x0 = x1 = 0} is nonsingular
        let w = plane_of_q(&ctx);
        let g = Matrix::from_rows(w.iter().map(|a| w.iter().map(|b| ctx.bil(a, b)).collect()).collect());
        assert!(!g.det().is_zero());
        for l in [ctx.l_x(), ctx.l_y(), ctx.m_x(), ctx.n_y()] {
            assert!(ctx.line_in_quadric(&l.p, &l.q) && ctx.in_h(&l.p) && ctx.in_h(&l.q));
        }
        assert!(ctx.l_x().contains(&ctx.x) && ctx.m_x().contains(&ctx.x));
        assert!(ctx.l_y().contains(&ctx.y) && ctx.n_y().contains(&ctx.y));
        assert!(proj_eq(&ctx.conic_point(&ctx.v_x), &ctx.x));
        assert!(proj_eq(&ctx.conic_point(&ctx.v_y()), &ctx.y));
    }
}

#[test]
fn segre_basis_splits_the_hyperplane_section() {
    for seed in 0..5 {
        let ctx = fp_ctx(seed);
        // Gram matrix of the Segre basis is a multiple of that of y0·y1 − y2·y3
        let g: Vec<Vec<Fp>> = ctx.segre.iter().map(|a| ctx.segre.iter().map(|b| ctx.bil(a, b)).collect()).collect();
        let k = g[0][1];
        assert!(!k.is_zero());
        for i in 0..4 {
            for j in 0..4 {
                let want = match (i.min(j), i.max(j)) {
                    (0, 1) => k,
                    (2, 3) => -k,
                    _ => ctx.zero(),
                };
                assert_eq!(g[i][j], want, "entry ({i}, {j})");
            }
        }
        assert!(ctx.segre.iter().all(|v| ctx.in_h(v)));
        let one = ctx.one();
        assert_eq!(ctx.segre_inverse(&ctx.x), Some(([one, ctx.zero()], [one, ctx.zero()])));
        assert_eq!(ctx.segre_inverse(&ctx.y), Some(([ctx.zero(), one], [ctx.zero(), one])));
    }
}

#[test]
fn opposite_parameters_are_rejected() {
    // α² = k² + n² with k = 3, n = 4 gives b1 = k²α²/(k² + n²) = 9 = −b0
    let qq = TowerField::rationals();
    let err = QuadricContext::build(&qq, q(-9), q(9), q(5)).unwrap_err();
    assert!(matches!(err, Error::Generality { .. }), "{err}");
}

#[test]
fn tangent_hyperplane_is_rejected() {
    // x = y exactly when α² = b1
    let k = PrimeField::new(101).unwrap();
    assert!(QuadricContext::build(&k, k.elem(100), k.elem(4), k.elem(2)).is_err());
    let qq = TowerField::rationals();
    assert!(QuadricContext::build(&qq, q(-1), q(9), q(3)).is_err());
}

#[test]
fn rational_context_over_the_tower() {
    let qq = TowerField::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ctx = sample_context(&qq, &mut rng, 10, 50).unwrap();
    assert!(ctx.check_generality().all());
    assert!(ctx.on_conic(&ctx.x) && ctx.in_h(&ctx.x));
}

#[test]
fn line_membership() {
    let ctx = fp_ctx(0);
    let lx = ctx.l_x();
    let mid: Vec<Fp> = lx.p.iter().zip(&lx.q).map(|(a, b)| *a + *b * ctx.one().from_i64_like(7)).collect();
    assert!(ctx.line_in_quadric(&mid, &ctx.x));
    // two points of Q with nonzero pairing span a chord, not a line of Q
    assert!(!ctx.bil(&ctx.x, &ctx.y).is_zero());
    assert!(!ctx.line_in_quadric(&ctx.x, &ctx.y));
    let off: Vec<Fp> = (0..5).map(|i| ctx.one().from_i64_like(i as i64 + 1)).collect();
    if !ctx.on_quadric(&off) {
        assert!(!ctx.line_in_quadric(&off, &ctx.x));
    }
}

#[test]
fn chord_points_of_the_cone_vertex_coincide() {
    let ctx = fp_ctx(1);
    assert!(ctx.chord_points(&ctx.z).unwrap().is_double());
    assert!(ctx.chord_points(&ctx.zp).unwrap().is_double());
    assert!(ctx.chord_points(&ctx.x).is_err());
}

fn point_of_q_h<F: Scalar>(ctx: &QuadricContext<F>, a: i64, b: i64) -> Vec<F> {
    let one = ctx.one();
    ctx.segre_point(&[one.clone(), one.from_i64_like(a)], &[one.clone(), one.from_i64_like(b)])
}

#[test]
fn chord_points_of_generic_points_span_lines_of_q() {
    let ctx = fp_ctx(2);
    let mut checked = 0;
    for a in 1..12 {
        let t = point_of_q_h(&ctx, a, 2 * a + 3);
        assert!(ctx.on_quadric(&t));
        let Ok(ch) = ctx.chord_points(&t) else { continue };
        let Some([v1, v2]) = ch.params else { continue };
        let (p1, p2) = (ctx.conic_point(&v1), ctx.conic_point(&v2));
        assert!(ctx.line_in_quadric(&t, &p1) && ctx.line_in_quadric(&t, &p2));
        let double = ctx.bil(&t, &ctx.z).is_zero() || ctx.bil(&t, &ctx.zp).is_zero();
        assert_eq!(ch.is_double(), double);
        if !double {
            assert_ne!(p1, p2);
            let member = ctx.pencil_member(&t).unwrap();
            // two lines through t lie in opposite rulings
            assert!(!ctx.same_ruling(&Line::new(t.clone(), p1.clone()), &Line::new(t.clone(), p2), &member).unwrap());
            assert!(ctx.same_ruling(&Line::new(t.clone(), p1.clone()), &Line::new(p1, t.clone()), &member).unwrap());
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn singular_members_have_one_ruling() {
    let ctx = fp_ctx(3);
    let [m, _] = ctx.singular_members();
    let l = ctx.l_x();
    assert!(matches!(ctx.same_ruling(&l, &l, &m), Err(Error::Input(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn segre_points_lie_on_q_and_h(seed in 0u64..6, t in 0i64..101, s in 0i64..101, u in 1i64..101) {
        let ctx = fp_ctx(seed);
        let one = ctx.one();
        let tt = [one.from_i64_like(u), one.from_i64_like(t)];
        let ss = [one.from_i64_like(s), one.from_i64_like(u)];
        let p = ctx.segre_point(&tt, &ss);
        prop_assert!(ctx.on_quadric(&p) && ctx.in_h(&p));
        let (t2, s2) = ctx.segre_inverse(&p).unwrap();
        prop_assert!(proj_eq(&t2, &tt) && proj_eq(&s2, &ss));
    }

    #[test]
    fn chord_pairs_do_not_depend_on_the_conic_chart(seed in 0u64..6, a in 1i64..50, b in 1i64..50) {
        let ctx = fp_ctx(seed);
        let t = point_of_q_h(&ctx, a, b);
        prop_assume!(!ctx.in_conic_plane(&t));
        let ch = ctx.chord_points(&t).unwrap();
        if let Some([v1, v2]) = ch.params {
            // the same two points, found by brute force over the conic
            let mut pts: Vec<Vec<Fp>> = Vec::new();
            for v in 0..=101i64 {
                let vv = if v == 101 { [ctx.one(), ctx.zero()] } else { [ctx.one().from_i64_like(v), ctx.one()] };
                let c = ctx.conic_point(&vv);
                if ctx.bil(&t, &c).is_zero() {
                    pts.push(c);
                }
            }
            let found = [ctx.conic_point(&v1), ctx.conic_point(&v2)];
            for f in &found {
                prop_assert!(pts.iter().any(|p| proj_eq(p, f)));
            }
        }
    }
}
