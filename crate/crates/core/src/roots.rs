//! Root finding for univariate polynomials over the supported fields.

use num::bigint::{BigInt, Sign};
use num::integer::Integer;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::field::{Fp, PrimeField, Qt, Scalar};
use crate::poly::Poly;

fn sort_dedup<F: Scalar>(mut v: Vec<F>) -> Vec<F> {
    v.sort_by(|a, b| a.canonical_cmp(b));
    v.dedup();
    v
}

/// Distinct roots in F_p by splitting `gcd(f, x^p − x)`.
pub fn fp_roots(f: &Poly<Fp>) -> Vec<Fp> {
    let Some(t) = f.template().copied() else {
        panic!("roots of the zero polynomial");
    };
    if f.is_constant() {
        return Vec::new();
    }
    let p = t.modulus();
    let f = f.monic();
    let x = Poly::x(&t);
    let xp = x.pow_mod(p, &f);
    let g = (&xp - &x).gcd(&f);
    let g = if g.is_zero() { f.clone() } else { g };
    let mut out = Vec::new();
    split_linear(&g, p, &mut out);
    sort_dedup(out)
}

/// Splits a product of distinct linear factors with the Cantor–Zassenhaus
/// trick, trying shifts `x + a` for `a = 0, 1, 2, …` in order.
fn split_linear(g: &Poly<Fp>, p: u64, out: &mut Vec<Fp>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let c = g.monic();
            out.push(-c.coeffs()[0]);
        }
        Some(_) => {
            let t = *g.lc().unwrap();
            let field = PrimeField::new(p).expect("valid modulus");
            for a in 0..p {
                let shift = Poly::new(vec![field.elem(a), t.one_like()]);
                let h = &shift.pow_mod((p - 1) / 2, g) - &Poly::constant(t.one_like());
                let d = h.gcd(g);
                if !d.is_constant() && d.degree() < g.degree() {
                    let q = g.div_exact(&d).expect("gcd divides");
                    split_linear(&d, p, out);
                    split_linear(&q, p, out);
                    return;
                }
            }
            unreachable!("a product of distinct linear factors always splits");
        }
    }
}

/// Roots of a polynomial over a quadratic tower that lie in the field of its
/// coefficients and are either rational or roots of a residual quadratic.
pub fn tower_roots(f: &Poly<Qt>) -> Vec<Qt> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    if f.is_constant() {
        return Vec::new();
    }
    let mut found = Vec::new();
    if f.degree() == Some(1) {
        let c = f.coeffs();
        return vec![-(c[0].clone() / &c[1])];
    }
    let rat = descend_to_q(f);
    for r in rational_roots(&rat) {
        let q = Qt::from_big(r);
        if f.eval(&q).is_zero() {
            found.push(q);
        }
    }
    // whatever remains may be a quadratic with roots in the coefficient field
    let mut rest = f.clone();
    for r in &found {
        while let Some(q) = rest.div_exact(&Poly::linear_root(r)) {
            rest = q;
        }
    }
    if rest.degree() == Some(1) {
        let c = rest.coeffs();
        found.push(-(c[0].clone() / &c[1]));
    }
    if rest.degree() == Some(2) {
        let c = rest.coeffs();
        let disc = c[1].clone() * &c[1] - c[0].from_i64_like(4) * &c[0] * &c[2];
        if let Some(s) = disc.sqrt() {
            let two_a = c[2].clone() + &c[2];
            found.push((-c[1].clone() + &s) / &two_a);
            found.push((-c[1].clone() - s) / &two_a);
        }
    }
    sort_dedup(found)
}

/// Multiplies by Galois conjugates until every coefficient is rational.
fn descend_to_q(f: &Poly<Qt>) -> Vec<BigRational> {
    let mut cur = f.clone();
    loop {
        let deepest = cur
            .coeffs()
            .iter()
            .filter_map(|c| c.level())
            .max_by_key(|l| l.depth());
        match deepest {
            None => {
                return cur.coeffs().iter().map(|c| c.as_rational().expect("rational")).collect()
            }
            Some(l) => {
                let conj = Poly::new(cur.coeffs().iter().map(|c| c.conjugate(&l)).collect());
                let prod = &cur * &conj;
                cur = Poly::new(
                    prod.coeffs().iter().map(|c| c.lower().expect("norm descends")).collect(),
                );
            }
        }
    }
}

/// Distinct rational roots of a nonzero rational polynomial.
pub fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let mut c: Vec<BigRational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    assert!(!c.is_empty(), "roots of the zero polynomial");
    let mut roots = Vec::new();
    // strip the root at zero
    let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(BigRational::zero());
        c.drain(..lead_zeros);
    }
    if c.len() <= 1 {
        return roots;
    }
    let q = Poly::new(c.into_iter().map(Qt::from_big).collect());
    let sf = q.div_exact(&q.gcd(&q.derivative())).expect("gcd divides");
    let ints = primitive_integer(&sf);
    for r in integer_poly_rational_roots(&ints) {
        roots.push(r);
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Scales a rational polynomial to a primitive integer polynomial.
fn primitive_integer(p: &Poly<Qt>) -> Vec<BigInt> {
    let rats: Vec<BigRational> = p.coeffs().iter().map(|c| c.as_rational().unwrap()).collect();
    let mut lcm = BigInt::one();
    for r in &rats {
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for i in &ints {
        g = g.gcd(i);
    }
    ints.into_iter().map(|i| i / &g).collect()
}

fn eval_big(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

const HENSEL_PRIMES: [u64; 6] = [2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543];

/// Rational roots of a squarefree primitive integer polynomial with nonzero
/// constant term, by p-adic Newton lifting and rational reconstruction.
fn integer_poly_rational_roots(c: &[BigInt]) -> Vec<BigRational> {
    let n = c.len() - 1;
    let lc = c[n].abs();
    let c0 = c[0].abs();
    let bound = BigInt::from(2) * &lc * &c0 + BigInt::one();
    let deriv: Vec<BigInt> = (1..=n).map(|i| &c[i] * BigInt::from(i)).collect();
    for &p in &HENSEL_PRIMES {
        let pb = BigInt::from(p);
        if (&c[n] % &pb).is_zero() {
            continue;
        }
        let field = PrimeField::new(p).expect("prime");
        let to_fp = |x: &BigInt| field.elem(x.mod_floor(&pb).to_u64().unwrap());
        let fp = Poly::new(c.iter().map(to_fp).collect());
        if !fp.is_squarefree() {
            continue;
        }
        let mut out = Vec::new();
        for r in fp_roots(&fp) {
            let mut x = BigInt::from(r.value());
            let mut m = pb.clone();
            while m <= bound {
                m = &m * &m;
                let fx = eval_big(c, &x, &m);
                let dfx = eval_big(&deriv, &x, &m);
                let inv = mod_inverse(&dfx, &m).expect("simple root lifts");
                x = (x - fx * inv).mod_floor(&m);
            }
            if let Some(q) = rational_reconstruct(&x, &m, &c0, &lc) {
                if is_root(c, &q) {
                    out.push(q);
                }
            }
        }
        return out;
    }
    // every prime divided the leading coefficient or the discriminant; fall back
    // to a divisor search, which never happens for the sizes used here
    unreachable!("no suitable Hensel prime")
}

fn is_root(c: &[BigInt], q: &BigRational) -> bool {
    let mut acc = BigRational::zero();
    for a in c.iter().rev() {
        acc = acc * q + BigRational::from_integer(a.clone());
    }
    acc.is_zero()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Finds `a/b ≡ x (mod m)` with `|a| ≤ na`, `0 < b ≤ db`.
fn rational_reconstruct(x: &BigInt, m: &BigInt, na: &BigInt, db: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > na {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (t0, t1) = (t1.clone(), &t0 - &q * &t1);
    }
    if t1.is_zero() || &t1.abs() > db {
        return None;
    }
    let (a, b) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(BigRational::new(a, b))
}
