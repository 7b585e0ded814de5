//! An independent oracle for divisor classes on `y² = f(x)` over Z/p, in
//! plain u64 arithmetic, shared by the Jacobian tests and the acceptance run.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinlab::field::{Fp, PrimeField, Scalar};
use spinlab::jacobian::{Curve, Mumford, Point};
use spinlab::correspondence::RulingCurve;
use spinlab::poly::Poly;
use spinlab::symmetry::quotient_invariants;


pub fn pw(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

pub fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_multiple_of(p)) else { continue };
        m.swap(rank, piv);
        let inv = pw(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let k = m[r][c];
                for j in 0..cols {
                    m[r][j] = (m[r][j] + p * p - k * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `Σ mult·(x, y) − pole·∞` is the divisor of some `p(x) + y·q(x)`.
/// At a Weierstrass point `(a, 0)` the order of such a function is
/// `min(2·ord_a p, 1 + 2·ord_a q)`; other points must have multiplicity one.
pub fn principal(p: u64, g: usize, pts: &[(u64, u64, usize)], pole: usize) -> bool {
    assert_eq!(pts.iter().map(|t| t.2).sum::<usize>(), pole, "degree must match the pole order");
    let np = pole / 2 + 1;
    let nq = if pole > 2 * g { (pole - 2 * g - 1) / 2 + 1 } else { 0 };
    let mut rows = Vec::new();
    for &(a, b, m) in pts {
        if b == 0 {
            for t in 0..m.div_ceil(2) {
                let mut row = vec![0; np + nq];
                for i in t..np {
                    row[i] = binom(i, t) % p * pw(a, (i - t) as u64, p) % p;
                }
                rows.push(row);
            }
            for t in 0..(m - 1).div_ceil(2) {
                let mut row = vec![0; np + nq];
                for j in t..nq {
                    row[np + j] = binom(j, t) % p * pw(a, (j - t) as u64, p) % p;
                }
                rows.push(row);
            }
        } else {
            assert_eq!(m, 1, "the oracle handles simple non-Weierstrass points only");
            let mut row = vec![0; np + nq];
            for i in 0..np {
                row[i] = pw(a, i as u64, p);
            }
            for j in 0..nq {
                row[np + j] = b * pw(a, j as u64, p) % p;
            }
            rows.push(row);
        }
    }
    rows.is_empty() || rank_mod(rows, p) < np + nq
}

pub fn curve(k: &PrimeField, f: &[u64]) -> Curve<Fp> {
    Curve::new(Poly::new(f.iter().map(|&c| k.elem(c)).collect())).unwrap()
}

pub fn rational_points(k: &PrimeField, f: &[u64]) -> Vec<(u64, u64)> {
    let p = k.modulus();
    let fx = |x: u64| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
    (0..p).flat_map(|x| (0..p).filter(move |&y| y * y % p == fx(x)).map(move |y| (x, y))).collect()
}

pub fn to_point(k: &PrimeField, (x, y): (u64, u64)) -> Point<Fp> {
    Point::Affine(k.elem(x), k.elem(y))
}

/// The points of a reduced class whose `u` splits into distinct linear factors.
pub fn split_points(k: &PrimeField, m: &Mumford<Fp>) -> Option<Vec<(u64, u64)>> {
    let roots: Vec<u64> = (0..k.modulus()).filter(|&x| m.u.eval(&k.elem(x)).is_zero()).collect();
    (roots.len() == m.u.deg() as usize).then(|| roots.iter().map(|&x| (x, m.v.eval(&k.elem(x)).value())).collect())
}

pub fn random_squarefree(rng: &mut ChaCha8Rng, k: &PrimeField, deg: usize) -> Vec<u64> {
    loop {
        let mut f: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..k.modulus())).collect();
        f.push(1);
        if Poly::new(f.iter().map(|&c| k.elem(c)).collect::<Vec<_>>()).is_squarefree() {
            return f;
        }
    }
}

/// Checks Cantor addition against `principal` on random classes of random
/// curves of genus at most 2 over F_7, F_11, F_13. Returns the number of sums
/// confirmed and the number of wrong answers the oracle rejected.
pub fn cantor_against_oracle(seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut negatives = 0;
    for &(p, g) in [(7u64, 1usize), (11, 2), (13, 2), (13, 1)].iter().cycle().take(40) {
        let k = PrimeField::new(p).unwrap();
        let f = random_squarefree(&mut rng, &k, 2 * g + 1);
        let c = curve(&k, &f);
        let pts: Vec<(u64, u64)> = rational_points(&k, &f).into_iter().filter(|&(_, y)| y != 0).collect();
        if pts.len() < 4 {
            continue;
        }
        for _ in 0..6 {
            let pick = |rng: &mut ChaCha8Rng| -> Vec<(u64, u64)> {
                let n = rng.gen_range(1..=g);
                (0..n).map(|_| pts[rng.gen_range(0..pts.len())]).collect()
            };
            let (sa, sb) = (pick(&mut rng), pick(&mut rng));
            let class = |s: &[(u64, u64)]| {
                let pts: Vec<Point<Fp>> = s.iter().map(|&q| to_point(&k, q)).collect();
                c.class_of_eff(&c.points_div(&pts))
            };
            let (a, b) = (class(&sa), class(&sb));
            let sum = c.add(&a, &b);
            assert!(sum.weight() <= g);
            let Some(sc) = split_points(&k, &sum) else { continue };
            let mut all: Vec<(u64, u64)> = sa.iter().chain(&sb).copied().collect();
            all.extend(sc.iter().map(|&(x, y)| (x, (p - y) % p)));
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != all.len() || all.iter().any(|&(_, y)| y == 0) {
                continue;
            }
            let simple: Vec<(u64, u64, usize)> = all.iter().map(|&(x, y)| (x, y, 1)).collect();
            assert!(principal(p, g, &simple, all.len()), "A + B − C is not principal over F_{p}");
            checked += 1;

            // the oracle rejects a wrong answer
            let wrong = c.sub(&a, &b);
            if wrong != sum {
                if let Some(sw) = split_points(&k, &wrong) {
                    let mut bad: Vec<(u64, u64)> = sa.iter().chain(&sb).copied().collect();
                    bad.extend(sw.iter().map(|&(x, y)| (x, (p - y) % p)));
                    let mut s2 = bad.clone();
                    s2.sort();
                    s2.dedup();
                    if s2.len() == bad.len() && bad.iter().all(|&(_, y)| y != 0) {
                        let simple: Vec<_> = bad.iter().map(|&(x, y)| (x, y, 1)).collect();
                        assert!(!principal(p, g, &simple, bad.len()));
                        negatives += 1;
                    }
                }
            }
        }
    }
    (checked, negatives)
}

/// The sixteen theta characteristics of `y² = (x − 3)(x − 17)(x − 40)(x − 58)(x − 91)`
/// over F_101. Returns `(ineffective balanced, effective singletons)`; each
/// library answer is compared with the oracle on the way.
pub fn genus_two_theta_census() -> (usize, usize) {
    let k = PrimeField::new(101).unwrap();
    let roots = [3u64, 17, 40, 58, 91];
    let f = roots
        .iter()
        .fold(Poly::constant(k.elem(1)), |acc, &r| &acc * &Poly::linear_root(&k.elem(r)));
    let c = Curve::new(f.clone()).unwrap();
    let fc: Vec<u64> = f.coeffs().iter().map(|x| x.value()).collect();
    let pts = rational_points(&k, &fc);

    // `θ = Σ_S w + ε·∞ − (|S| + ε − 1)·∞` has degree one; it is effective
    // exactly when `θ ~ P` for a rational point `P` (a non-rational `P` would
    // share the class with its conjugate). With `−P ~ ιP − 2∞` this asks
    // whether `Σ_S w − |S|·∞` (for `P = ∞`) or `Σ_S w + ιP − (|S| + 1)·∞` is principal.
    let effective_by_oracle = |side: &[u64]| -> bool {
        let base: Vec<(u64, u64, usize)> = side.iter().map(|&a| (a, 0, 1)).collect();
        if principal(101, 2, &base, side.len()) {
            return true;
        }
        pts.iter().any(|&(x, y)| {
            let mut d = base.clone();
            let iy = (101 - y) % 101;
            match d.iter_mut().find(|t| t.0 == x && t.1 == iy) {
                Some(t) => t.2 += 1,
                None => d.push((x, iy, 1)),
            }
            principal(101, 2, &d, side.len() + 1)
        })
    };

    let mut ineffective = 0;
    let mut effective = 0;
    // singletons: the six Weierstrass points
    let one = Poly::constant(k.elem(1));
    let mut singles = vec![(vec![], c.theta(one, true).unwrap())];
    for &r in &roots {
        singles.push((vec![r], c.theta(Poly::linear_root(&k.elem(r)), false).unwrap()));
    }
    for (side, t) in singles {
        assert!(c.is_theta_characteristic(&t));
        let lib = !c.is_ineffective(&t).unwrap();
        assert_eq!(lib, effective_by_oracle(&side));
        effective += usize::from(lib);
    }
    // balanced splits: one representative per complementary pair, the side holding ∞
    for i in 0..5 {
        for j in (i + 1)..5 {
            let side = vec![roots[i], roots[j]];
            let u = &Poly::linear_root(&k.elem(side[0])) * &Poly::linear_root(&k.elem(side[1]));
            let t = c.theta(u, true).unwrap();
            assert!(c.is_theta_characteristic(&t));
            let lib = c.is_ineffective(&t).unwrap();
            assert_eq!(lib, !effective_by_oracle(&side));
            ineffective += usize::from(lib);
        }
    }
    (ineffective, effective)
}

/// Rank of the differential of the invariant map at `c` in the chart
/// `c[pivot] = 1`, by exact three-point differences of the quadratic
/// coordinate functions and a rank over Z/p in u64 arithmetic.
pub fn rank_by_differences(p: u64, d: usize, c: &[u64], pivot: usize) -> usize {
    let f = PrimeField::new(p).unwrap();
    let inv2 = pw(2, p - 2, p);
    let mut rows = Vec::new();
    for dir in (0..2 * d).filter(|&k| k != pivot) {
        let at = |t: u64| -> Vec<u64> {
            let mut v: Vec<Fp> = c.iter().map(|&x| f.elem(x)).collect();
            v[dir] = v[dir] + f.elem(t);
            let r = RulingCurve::from_coeffs(d, &v).unwrap();
            quotient_invariants(&r).iter().map(|x| x.value()).collect()
        };
        let (f0, f1, f2) = (at(0), at(1), at(2));
        // for a quadratic q(t): q′(0) = (−3 q(0) + 4 q(1) − q(2)) / 2
        let row: Vec<u64> = (0..f0.len())
            .map(|i| (4 * f1[i] + 3 * (p - f0[i]) + (p - f2[i])) % p * inv2 % p)
            .collect();
        rows.push(row);
    }
    rank_mod(rows, p)
}
