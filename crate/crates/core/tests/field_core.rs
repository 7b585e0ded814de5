use num::rational::BigRational;
use proptest::prelude::*;
use spinlab::bipoly::{discriminant_v, resultant_v, BiPoly};
use spinlab::field::{Field, Fp, PrimeField, Qt, Scalar, TowerField, DEFAULT_TOWER_DEPTH};
use spinlab::linalg::Matrix;
use spinlab::poly::Poly;
use spinlab::FieldError;

fn q(n: i64) -> Qt {
    Qt::from_ratio(n, 1)
}

fn qpoly(c: &[i64]) -> Poly<Qt> {
    Poly::new(c.iter().map(|&n| q(n)).collect())
}

/// Bivariate polynomial from a table indexed `[u-power][v-power]`.
fn qbi(t: &[&[i64]]) -> BiPoly<Qt> {
    let rows: Vec<Vec<Qt>> = t.iter().map(|r| r.iter().map(|&n| q(n)).collect()).collect();
    BiPoly::from_table(&rows)
}

#[test]
fn adjoin_sqrt_of_perfect_square_keeps_rationals() {
    let qq = TowerField::rationals();
    let (k, r) = qq.adjoin_sqrt(&q(4), DEFAULT_TOWER_DEPTH).unwrap();
    assert_eq!(k.depth(), 0);
    assert!(r == q(2) || r == q(-2));
}

#[test]
fn adjoin_sqrt_in_f7() {
    let f7 = PrimeField::new(7).unwrap();
    let (k, r) = f7.adjoin_sqrt(&f7.elem(2), 3).unwrap();
    assert_eq!(k, f7);
    assert_eq!(r * r, f7.elem(2));
    assert!(r == f7.elem(3) || r == f7.elem(4));
    assert!(matches!(
        f7.adjoin_sqrt(&f7.elem(3), 3),
        Err(FieldError::NonSquareInPrimeField { p: 7, value: 3 })
    ));
}

#[test]
fn adjoin_sqrt_two_over_q() {
    let qq = TowerField::rationals();
    let (k, r) = qq.adjoin_sqrt(&q(2), DEFAULT_TOWER_DEPTH).unwrap();
    assert_eq!(k.depth(), 1);
    assert_eq!(r.clone() * &r, q(2));
    assert!(r.as_rational().is_none());
    // adjoining again inside the new field reuses the root
    let (k2, r2) = k.adjoin_sqrt(&q(8), DEFAULT_TOWER_DEPTH).unwrap();
    assert_eq!(k2, k);
    assert_eq!(r2.clone() * &r2, q(8));
}

#[test]
fn tower_depth_limit_is_enforced() {
    let mut k = TowerField::rationals();
    for p in [2, 3, 5] {
        k = k.adjoin_sqrt(&q(p), 3).unwrap().0;
    }
    assert_eq!(k.depth(), 3);
    assert!(matches!(k.adjoin_sqrt(&q(7), 3), Err(FieldError::TowerDepth { limit: 3 })));
    // sqrt(6) = sqrt(2) sqrt(3) already lives in the tower
    let (k6, r6) = k.adjoin_sqrt(&q(6), 3).unwrap();
    assert_eq!(k6, k);
    assert_eq!(r6.clone() * &r6, q(6));
}

#[test]
fn zero_radicand_is_rejected() {
    assert!(matches!(
        TowerField::rationals().adjoin_sqrt(&q(0), 3),
        Err(FieldError::ZeroRadicand)
    ));
}

#[test]
fn resultant_linear_case() {
    // v - u^2 and v - (u + 1)
    let f = qbi(&[&[0, 1], &[0], &[-1]]);
    let g = qbi(&[&[-1, 1], &[-1]]);
    let r = resultant_v(&f, &g).unwrap();
    let diff = qpoly(&[1, 1, -1]);
    assert!(r == diff || r == -&diff);
}

#[test]
fn resultant_of_equal_polynomials_vanishes() {
    let f = qbi(&[&[1, 2, 3], &[0, 1], &[5]]);
    assert!(resultant_v(&f, &f).unwrap().is_zero());
}

#[test]
fn resultant_quadratic_and_linear() {
    // Sylvester matrix of v^2 - u and v + 1: [[1,0,-u],[1,1,0],[0,1,1]], det = 1 - u
    let f = qbi(&[&[0, 0, 1], &[-1]]);
    let g = qbi(&[&[1, 1]]);
    let oracle = {
        let u = qpoly(&[0, 1]);
        let one = qpoly(&[1]);
        let zero = Poly::zero();
        let m = [[one.clone(), zero.clone(), -&u], [one.clone(), one.clone(), zero.clone()], [zero, one.clone(), one]];
        // cofactor expansion along the first row
        let minor = |r: usize, c: usize| -> Poly<Qt> {
            let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
            let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
            &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]]) - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]])
        };
        &(&(&m[0][0] * &minor(0, 0)) - &(&m[0][1] * &minor(0, 1))) + &(&m[0][2] * &minor(0, 2))
    };
    let r = resultant_v(&f, &g).unwrap();
    assert_eq!(r, oracle);
    assert_eq!(r, qpoly(&[1, -1]));
}

#[test]
fn discriminant_examples() {
    assert_eq!(discriminant_v(&qbi(&[&[0, 0, 1], &[-1]])).unwrap(), qpoly(&[0, 4]));
    // (v - u)(v + u) = v^2 - u^2
    assert_eq!(discriminant_v(&qbi(&[&[0, 0, 1], &[0], &[-1]])).unwrap(), qpoly(&[0, 0, 4]));
    // A = u, B = u + 1, C = 1
    let f = qbi(&[&[1, 1, 0], &[0, 1, 1]]);
    let b = qpoly(&[1, 1]);
    let oracle = &(&b * &b) - &qpoly(&[0, 4]);
    assert_eq!(discriminant_v(&f).unwrap(), oracle);
    assert_eq!(oracle, qpoly(&[1, -2, 1]));
    assert!(discriminant_v(&qbi(&[&[0, 1]])).is_err());
}

#[test]
fn kernel_examples() {
    let id = Matrix::identity(3, &q(1));
    assert!(id.kernel().is_empty());
    let z = Matrix::zeros(2, 3, &q(0));
    assert_eq!(z.kernel().len(), 3);
    let m = Matrix::from_rows(vec![vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]]);
    let k = m.kernel();
    assert_eq!(k.len(), 1);
    assert!(spinlab::field::proj_eq(&k[0], &[q(1), q(-1), q(0)]));
}

#[test]
fn rational_roots_by_lifting() {
    // (2x - 3)(x + 5)(x^2 + 1)(7x + 1)
    let p = &(&(&qpoly(&[-3, 2]) * &qpoly(&[5, 1])) * &qpoly(&[1, 0, 1])) * &qpoly(&[1, 7]);
    let roots = Qt::poly_roots(&p);
    let want = [Qt::from_ratio(-5, 1), Qt::from_ratio(-1, 7), Qt::from_ratio(3, 2)];
    assert_eq!(roots.len(), 3);
    for w in want {
        assert!(roots.contains(&w));
    }
}

#[test]
fn roots_in_quadratic_extension() {
    let (k, r2) = TowerField::rationals().adjoin_sqrt(&q(2), 3).unwrap();
    let _ = k;
    // (x - sqrt2)(x - 1/3)
    let p = &Poly::linear_root(&r2) * &Poly::linear_root(&Qt::from_ratio(1, 3));
    let roots = Qt::poly_roots(&p);
    assert_eq!(roots.len(), 2);
    assert!(roots.contains(&r2));
}

fn fp_strategy() -> impl Strategy<Value = (u64, Vec<u64>)> {
    (prop::sample::select(vec![101u64, 103, 10007]), prop::collection::vec(0u64..100_000, 1..7))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fp_roots_match_brute_force((p, c) in fp_strategy()) {
        let k = PrimeField::new(p).unwrap();
        let f = Poly::new(c.iter().map(|&v| k.elem(v)).collect());
        prop_assume!(!f.is_zero() && p < 200);
        let brute: Vec<Fp> = k.elements().filter(|x| f.eval(x).is_zero()).collect();
        prop_assert_eq!(Fp::poly_roots(&f), brute);
    }

    #[test]
    fn tower_arithmetic_identities(a in -50i64..50, b in -50i64..50, c in 1i64..9, e in -9i64..9) {
        let (_, r) = TowerField::rationals().adjoin_sqrt(&q(3), 3).unwrap();
        let x = q(a) + r.clone() * &q(b);
        let y = Qt::from_ratio(e, c) + r.clone() * &Qt::from_ratio(1, c);
        prop_assert_eq!((x.clone() + &y) - &y, x.clone());
        prop_assert!(!y.is_zero());
        prop_assert_eq!((x.clone() * &y) / &y, x.clone());
        prop_assert_eq!(r.clone() * &r, q(3));
        let s = x.clone() * &x;
        let t = s.sqrt().unwrap();
        prop_assert_eq!(t.clone() * &t, s);
    }

    #[test]
    fn resultant_detects_common_roots((p, c) in fp_strategy(), d in prop::collection::vec(0u64..200, 6)) {
        prop_assume!(p < 200);
        let k = PrimeField::new(p).unwrap();
        let e = |v: u64| k.elem(v);
        // f, g of v-degree 2 and 1 with u-linear coefficients
        let f = BiPoly::new(vec![
            Poly::new(vec![e(d[0]), e(d[1])]),
            Poly::new(vec![e(c[0]), e(d[2])]),
            Poly::new(vec![e(1), e(d[3])]),
        ]);
        let g = BiPoly::new(vec![Poly::new(vec![e(d[4]), e(1)]), Poly::new(vec![e(d[5]), e(2)])]);
        let r = resultant_v(&f, &g).unwrap();
        for u0 in k.elements() {
            let fu = f.eval_u(&u0);
            let gu = g.eval_u(&u0);
            let both_drop = f.v_coeff(2).eval(&u0).is_zero() && g.v_coeff(1).eval(&u0).is_zero();
            let common = !fu.is_zero() && !gu.is_zero() && !fu.gcd(&gu).is_constant();
            let zero_poly = fu.is_zero() || gu.is_zero();
            prop_assert_eq!(r.eval(&u0).is_zero(), common || both_drop || zero_poly);
        }
    }

    #[test]
    fn kernel_rank_nullity(rows in 1usize..5, cols in 1usize..6, seed in prop::collection::vec(-3i64..4, 30)) {
        let m = Matrix::from_rows((0..rows).map(|i| (0..cols).map(|j| q(seed[i * cols + j])).collect()).collect());
        let k = m.kernel();
        prop_assert_eq!(k.len() + m.rank(), cols);
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn polynomial_division_and_gcd((p, c) in fp_strategy(), d in prop::collection::vec(0u64..1000, 1..5)) {
        let k = PrimeField::new(p).unwrap();
        let a = Poly::new(c.iter().map(|&v| k.elem(v)).collect());
        let b = Poly::new(d.iter().map(|&v| k.elem(v)).collect());
        prop_assume!(!b.is_zero());
        let (qq, r) = a.divrem(&b);
        prop_assert_eq!(&(&qq * &b) + &r, a.clone());
        prop_assert!(r.deg() < b.deg());
        let g = a.gcd(&b);
        prop_assert!(g.divides(&a) && g.divides(&b));
        let prod = &a * &a;
        let s = prod.sqrt().unwrap();
        prop_assert_eq!(&s * &s, prod);
        let _ = BigRational::from_integer(1.into());
    }
}
