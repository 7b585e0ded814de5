mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinlab::correspondence::RulingCurve;
use spinlab::field::{proj_eq, Fp, PrimeField, Scalar};
use spinlab::io::Instance;
use spinlab::linalg::Matrix;
use spinlab::reconstruction::extract_spin_tuple;
use spinlab::symmetry::{
    act_on_ruling_curve, aut_group, g_signs, invariant_differential_rank, orbit_equal, quotient_invariants, spin_tuple_isomorphic,
    GPrime,
};

const P: u64 = 10007;

fn k() -> PrimeField {
    PrimeField::new(P).unwrap()
}

fn sample(d: usize, seed: u64) -> Instance<PrimeField> {
    Instance::sample(k(), d, seed).unwrap()
}

fn random_curve(rng: &mut ChaCha8Rng, d: usize) -> RulingCurve<Fp> {
    let c: Vec<Fp> = (0..2 * d).map(|_| k().elem(rng.gen_range(0..P))).collect();
    RulingCurve::from_coeffs(d, &c).unwrap()
}

fn curve_of(d: usize, c: &[i64]) -> RulingCurve<Fp> {
    let f = k();
    RulingCurve::from_coeffs(d, &c.iter().map(|&x| f.elem(x.rem_euclid(P as i64) as u64)).collect::<Vec<_>>()).unwrap()
}

#[test]
fn automorphisms_form_a_klein_four_group() {
    for seed in 0..3 {
        let inst = sample(3, seed);
        let ctx = &inst.ctx;
        let aut = aut_group(ctx).unwrap();
        assert_eq!(aut.matrices.len(), 4);
        // composition table: a·b is the sign pattern of the product
        let signs = |m: &Matrix<Fp>| -> Vec<bool> { (0..5).map(|i| m[(i, i)] == ctx.one()).collect() };
        for a in &aut.matrices {
            for b in &aut.matrices {
                let ab = a.mul(b);
                let want: Vec<bool> = signs(a).iter().zip(signs(b)).map(|(x, y)| *x == y).collect();
                assert_eq!(signs(&ab), want);
                assert_eq!(a.mul(b), b.mul(a));
            }
            // each element keeps the conic: points of q go to points of q in the conic plane
            for v in 0..6i64 {
                let pt = ctx.conic_point(&[ctx.one().from_i64_like(v), ctx.one()]);
                let img = a.mul_vec(&pt);
                assert!(ctx.on_conic(&img));
            }
        }
        // g fixes ⟨x, y⟩^⊥ pointwise and negates x, y
        let minus_x: Vec<Fp> = ctx.x.iter().map(|c| -*c).collect();
        assert_eq!(aut.g_matrix.mul_vec(&ctx.x), minus_x);
        assert_eq!(aut.g_matrix.mul(&aut.g_matrix), Matrix::identity(5, &ctx.one()));
    }
}

#[test]
fn ruling_exchange_on_segre_coordinates() {
    let inst = sample(4, 1);
    let ctx = &inst.ctx;
    let aut = aut_group(ctx).unwrap();
    let h = &aut.matrices[2];
    let one = ctx.one();
    for (t, s) in [(2i64, 5i64), (7, 3), (0, 1)] {
        let tt = [one, one.from_i64_like(t)];
        let ss = [one, one.from_i64_like(s)];
        let img = h.mul_vec(&ctx.segre_point(&tt, &ss));
        let (t2, s2) = ctx.segre_inverse(&img).unwrap();
        assert!(proj_eq(&t2, &[ss[1], ss[0]]));
        assert!(proj_eq(&s2, &[tt[1], tt[0]]));
    }
}

#[test]
fn sign_table_at_degree_three() {
    assert_eq!(g_signs(3), vec![1, -1, 1, -1, 1, -1]);
    let r = curve_of(3, &[2, 3, 5, 7, 11, 13]);
    let gr = act_on_ruling_curve(GPrime::G, &r);
    assert_eq!(gr, curve_of(3, &[2, -3, 5, -7, 11, -13]));
    assert_eq!(act_on_ruling_curve(GPrime::G, &gr), r);
    assert_eq!(act_on_ruling_curve(GPrime::Identity, &r), r);
}

#[test]
fn invariants_at_degree_three() {
    // a0 = 1, so no rescaling happens
    let (a0, a1, a2, b0, b1, b2) = (1i64, 3, 5, 7, 11, 13);
    let r = curve_of(3, &[a0, a1, a2, b0, b1, b2]);
    let want: Vec<i64> = vec![a0, a2, b1, a1 * a1, a1 * b0, a1 * b2, b0 * b0, b0 * b2, b2 * b2];
    let f = k();
    assert_eq!(quotient_invariants(&r), want.iter().map(|&x| f.elem(x as u64)).collect::<Vec<_>>());
    // the weights: scaling R by c multiplies the linear part by c and the products by c²
    let scaled = curve_of(3, &[2 * a0, 2 * a1, 2 * a2, 2 * b0, 2 * b1, 2 * b2]);
    assert_eq!(quotient_invariants(&scaled), quotient_invariants(&r));
}

#[test]
fn differential_rank_is_2d_minus_1() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in 3..=5 {
        for _ in 0..5 {
            let mut c: Vec<u64> = (0..2 * d).map(|_| rng.gen_range(1..P)).collect();
            // normalize the first +1 coordinate to 1 so the chart is affine
            let pivot = g_signs(d).iter().position(|&s| s > 0).unwrap();
            let inv = common::pw(c[pivot], P - 2, P);
            c.iter_mut().for_each(|x| *x = *x * inv % P);
            let r = RulingCurve::from_coeffs(d, &c.iter().map(|&x| k().elem(x)).collect::<Vec<_>>()).unwrap();
            assert_eq!(invariant_differential_rank(&r).unwrap(), 2 * d - 1);
            assert_eq!(common::rank_by_differences(P, d, &c, pivot), 2 * d - 1);
        }
    }
}

#[test]
fn invariants_separate_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut separated = 0;
    for i in 0..50 {
        let d = 3 + i % 3;
        let r1 = random_curve(&mut rng, d);
        // half the pairs are small perturbations, half independent draws
        let r2 = if i % 2 == 0 {
            let mut c = r1.coeffs();
            let j = rng.gen_range(0..2 * d);
            c[j] = c[j] + k().elem(1);
            RulingCurve::from_coeffs(d, &c).unwrap()
        } else {
            random_curve(&mut rng, d)
        };
        assert!(!orbit_equal(&r1, &r2));
        if quotient_invariants(&r1) != quotient_invariants(&r2) {
            separated += 1;
        }
        let g1 = act_on_ruling_curve(GPrime::G, &r1);
        assert!(orbit_equal(&r1, &g1));
        assert_eq!(quotient_invariants(&r1), quotient_invariants(&g1));
    }
    assert_eq!(separated, 50);
}

#[test]
fn spin_tuples_of_an_orbit_are_isomorphic() {
    for (d, seed) in [(3, 0), (4, 1), (5, 2)] {
        let inst = sample(d, seed);
        let t = extract_spin_tuple(&inst.ctx, &inst.r).unwrap();
        let gr = act_on_ruling_curve(GPrime::G, &inst.r);
        let tg = extract_spin_tuple(&inst.ctx, &gr).unwrap();
        assert!(spin_tuple_isomorphic(&t, &t));
        assert!(spin_tuple_isomorphic(&t, &tg));
        assert!(spin_tuple_isomorphic(&tg, &t));
    }
}

#[test]
fn independent_spin_tuples_are_not_isomorphic() {
    let mut distinct = 0;
    for seed in 0..5 {
        let a = sample(4, seed);
        let t1 = extract_spin_tuple(&a.ctx, &a.r).unwrap();
        // a second curve on the same quadric
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let r2 = spinlab::correspondence::random_ruling_curve(&a.ctx, 4, P, &mut rng, 200).unwrap();
        let Ok(t2) = extract_spin_tuple(&a.ctx, &r2) else { continue };
        if !spin_tuple_isomorphic(&t1, &t2) {
            distinct += 1;
        }
    }
    assert!(distinct >= 4, "only {distinct} of 5 pairs told apart");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_is_an_involution_preserving_invariants(d in 3usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_curve(&mut rng, d);
        let gr = act_on_ruling_curve(GPrime::G, &r);
        prop_assert_eq!(act_on_ruling_curve(GPrime::G, &gr), r.clone());
        prop_assert_eq!(quotient_invariants(&r), quotient_invariants(&gr));
        prop_assert_eq!(g_signs(d).iter().filter(|&&s| s < 0).count(), d);
    }
}
