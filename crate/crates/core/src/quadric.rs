//! The smooth quadric threefold `Q`, the conic `q = Q ∩ P(W)` and the
//! hyperplane `H`, in the normal coordinates
//! `b_Q = b0·x0² + x1² + x2² + b1·x3² + 2α·x3·x4 + x4²`, `H = (b0·x0 + b1·x3 + α·x4 = 0)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{proj_eq, Field, Fp, PrimeField, Qt, Scalar, TowerField, DEFAULT_TOWER_DEPTH};
use crate::linalg::{bilinear, Matrix};
use crate::poly::Poly;

/// A line of P⁴ spanned by two points.
#[derive(Clone, Debug, PartialEq)]
pub struct Line<F> {
    pub p: Vec<F>,
    pub q: Vec<F>,
}

impl<F: Scalar> Line<F> {
    pub fn new(p: Vec<F>, q: Vec<F>) -> Self {
        Line { p, q }
    }

    /// Plücker coordinates `p_i q_j − p_j q_i` for `i < j` in lexicographic order.
    pub fn plucker(&self) -> Vec<F> {
        plucker(&self.p, &self.q)
    }

    pub fn contains(&self, pt: &[F]) -> bool {
        Matrix::from_rows(vec![self.p.clone(), self.q.clone(), pt.to_vec()]).rank() <= 2
    }

    pub fn is_degenerate(&self) -> bool {
        Matrix::from_rows(vec![self.p.clone(), self.q.clone()]).rank() < 2
    }
}

pub fn plucker<F: Scalar>(p: &[F], q: &[F]) -> Vec<F> {
    let n = p.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(p[i].clone() * &q[j] - p[j].clone() * &q[i]);
        }
    }
    out
}

/// Outcome of [`QuadricContext::chord_points`].
#[derive(Clone, Debug)]
pub struct ChordPoints<F> {
    /// The binary quadratic `b(t, c(v))` in `v = v0/v1`, coefficients from `v⁰` up.
    pub quadratic: [F; 3],
    /// Conic parameters of the two points, when they are rational over the field.
    pub params: Option<[[F; 2]; 2]>,
}

impl<F: Scalar> ChordPoints<F> {
    pub fn is_double(&self) -> bool {
        let [c, b, a] = &self.quadratic;
        (b.clone() * b - a.from_i64_like(4) * a * c).is_zero()
    }
}

/// Outcome of the seven generality conditions on `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralityReport {
    pub flags: [bool; 7],
}

impl GeneralityReport {
    pub fn all(&self) -> bool {
        self.flags.iter().all(|&f| f)
    }

    /// One-based index of the first failing condition.
    pub fn first_failure(&self) -> Option<usize> {
        self.flags.iter().position(|&f| !f).map(|i| i + 1)
    }
}

const CONDITION_NAMES: [&str; 7] = [
    "[H] lies on the dual quadric",
    "[H] contains the plane of q",
    "the pole of H lies in P(W)",
    "the pole of H lies in P(W^perp)",
    "U meets W^perp badly",
    "the complement of v1 in U meets W badly",
    "z, z', x, y, v2 are not in general position",
];

/// The triple `(Q, q, H)` with all derived anchors.
#[derive(Clone, Debug)]
pub struct QuadricContext<F: Scalar> {
    pub field: F::Field,
    pub b0: F,
    pub b1: F,
    pub alpha: F,
    pub gram: Matrix<F>,
    /// Coefficients of the functional defining `H`.
    pub h: Vec<F>,
    /// The pole of `H`, `B⁻¹·h`.
    pub pole: Vec<F>,
    /// `c` with `c² = −b0`, so `z = (1, c, 0, 0, 0)` and `z′ = (1, −c, 0, 0, 0)`.
    pub c: F,
    pub z: Vec<F>,
    pub zp: Vec<F>,
    /// `ρ` with `ρ² = b1(α² − b1)/α²`, so `x = (0, 0, ρ, 1, −b1/α)`.
    pub rho: F,
    pub x: Vec<F>,
    pub y: Vec<F>,
    /// `κ = α − b1/α`, the slope of the conic parametrization.
    pub kappa: F,
    /// Segre basis `(x, y, e2′, e3′)` of `H`: `([t0:t1],[s0:s1]) ↦ t0s0·x + t1s1·y + t0s1·e2′ + t1s0·e3′`.
    pub segre: [Vec<F>; 4],
    /// Conic parameter of `x` (the parameter of `y` is `[0:1]`).
    pub v_x: [F; 2],
}

fn unit<F: Scalar>(i: usize, t: &F) -> Vec<F> {
    (0..5).map(|j| if i == j { t.one_like() } else { t.zero_like() }).collect()
}

fn add_vec<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

fn scale_vec<F: Scalar>(c: &F, a: &[F]) -> Vec<F> {
    a.iter().map(|x| c.clone() * x).collect()
}

impl<F: Scalar> QuadricContext<F> {
    /// Builds the context for parameters `(b0, b1, α)`, adjoining the square
    /// roots it needs.
    pub fn build(field: &F::Field, b0: F, b1: F, alpha: F) -> Result<Self> {
        Self::build_with_limit(field, b0, b1, alpha, DEFAULT_TOWER_DEPTH)
    }

    pub fn build_with_limit(field: &F::Field, b0: F, b1: F, alpha: F, depth: usize) -> Result<Self> {
        if b0.is_zero() || b1.is_zero() || alpha.is_zero() {
            return Err(Error::Input("b0, b1 and alpha must be nonzero".into()));
        }
        let one = field.one();
        let zero = field.zero();
        let a2 = alpha.square();
        if (a2.clone() - &b1).is_zero() {
            // Q singular, q singular, x = y all at once
            return Err(Error::Generality {
                index: 7,
                reason: "alpha^2 = b1 makes q singular and x = y".into(),
            });
        }
        let mut gram = Matrix::zeros(5, 5, &one);
        gram[(0, 0)] = b0.clone();
        gram[(1, 1)] = one.clone();
        gram[(2, 2)] = one.clone();
        gram[(3, 3)] = b1.clone();
        gram[(3, 4)] = alpha.clone();
        gram[(4, 3)] = alpha.clone();
        gram[(4, 4)] = one.clone();
        let h = vec![b0.clone(), zero.clone(), zero.clone(), b1.clone(), alpha.clone()];
        let pole = gram.inverse().expect("nonsingular Gram matrix").mul_vec(&h);

        let (field, c) = field.adjoin_sqrt(&(-b0.clone()), depth)?;
        let z = vec![one.clone(), c.clone(), zero.clone(), zero.clone(), zero.clone()];
        let zp = vec![one.clone(), -c.clone(), zero.clone(), zero.clone(), zero.clone()];

        let rho_sq = b1.clone() * &(a2.clone() - &b1) / &a2;
        let (field, rho) = field.adjoin_sqrt(&rho_sq, depth)?;
        let x4 = -(b1.clone() / &alpha);
        let x = vec![zero.clone(), zero.clone(), rho.clone(), one.clone(), x4.clone()];
        let y = vec![zero.clone(), zero.clone(), -rho.clone(), one.clone(), x4];
        let kappa = alpha.clone() - b1.clone() / &alpha;

        // <x,y>^perp ∩ H = span(e1, f) with f = (b1, 0, 0, -b0, 0)
        let e1 = unit(1, &one);
        let f = vec![b1.clone(), zero.clone(), zero.clone(), -b0.clone(), zero.clone()];
        let bff = bilinear(&gram, &f, &f);
        if bff.is_zero() {
            return Err(Error::Generality { index: 1, reason: CONDITION_NAMES[0].into() });
        }
        // e1 ± μ f isotropic: 1 + μ² b(f,f) = 0
        let mu_sq = -(one.clone() / &bff);
        let (field, mu) = field.adjoin_sqrt(&mu_sq, depth)?;
        let e2p = add_vec(&e1, &scale_vec(&mu, &f));
        let e3raw = add_vec(&e1, &scale_vec(&(-mu.clone()), &f));
        let bxy = bilinear(&gram, &x, &y);
        let braw = bilinear(&gram, &e2p, &e3raw);
        let e3p = scale_vec(&(-(bxy / &braw)), &e3raw);
        let v_x = [-(rho.clone()), kappa.clone()];

        let ctx = QuadricContext {
            field,
            b0,
            b1,
            alpha,
            gram,
            h,
            pole,
            c,
            z,
            zp,
            rho,
            x: x.clone(),
            y: y.clone(),
            kappa,
            segre: [x, y, e2p, e3p],
            v_x,
        };
        let report = ctx.check_generality();
        if let Some(i) = report.first_failure() {
            return Err(Error::Generality { index: i, reason: CONDITION_NAMES[i - 1].into() });
        }
        ctx.verify_anchors()?;
        Ok(ctx)
    }

    pub fn one(&self) -> F {
        self.b0.one_like()
    }

    pub fn zero(&self) -> F {
        self.b0.zero_like()
    }

    pub fn bil(&self, a: &[F], b: &[F]) -> F {
        bilinear(&self.gram, a, b)
    }

    pub fn quad(&self, a: &[F]) -> F {
        self.bil(a, a)
    }

    pub fn on_quadric(&self, p: &[F]) -> bool {
        self.quad(p).is_zero()
    }

    pub fn in_h(&self, p: &[F]) -> bool {
        crate::linalg::dot(&self.h, p).is_zero()
    }

    pub fn in_conic_plane(&self, p: &[F]) -> bool {
        p[0].is_zero() && p[1].is_zero()
    }

    pub fn on_conic(&self, p: &[F]) -> bool {
        self.in_conic_plane(p) && self.on_quadric(p)
    }

    /// The point `c(v)` of `q` for `v = [v0 : v1]`:
    /// `(v0² + v1²)·x − 2(κv0 + ρv1)(v0·e4 + v1·e2)`.
    pub fn conic_point(&self, v: &[F; 2]) -> Vec<F> {
        let s = v[0].square() + v[1].square();
        let l = self.kappa.clone() * &v[0] + self.rho.clone() * &v[1];
        let two_l = l.clone() + &l;
        let mut p = scale_vec(&s, &self.x);
        p[4] = p[4].clone() - two_l.clone() * &v[0];
        p[2] = p[2].clone() - two_l * &v[1];
        p
    }

    /// The five coordinates of `c(v)` as binary quadratic forms in `v`,
    /// coefficients of `v0^i v1^(2−i)` in position `i`.
    pub fn conic_forms(&self) -> Vec<[F; 3]> {
        let zero = self.zero();
        let two = self.one() + &self.one();
        (0..5)
            .map(|k| {
                // (v0² + v1²)·x_k
                let mut f = [self.x[k].clone(), zero.clone(), self.x[k].clone()];
                if k == 4 {
                    // −2(κ v0 + ρ v1)·v0
                    f[2] = f[2].clone() - two.clone() * &self.kappa;
                    f[1] = f[1].clone() - two.clone() * &self.rho;
                }
                if k == 2 {
                    // −2(κ v0 + ρ v1)·v1
                    f[1] = f[1].clone() - two.clone() * &self.kappa;
                    f[0] = f[0].clone() - two.clone() * &self.rho;
                }
                f
            })
            .collect()
    }

    /// Inverse of [`Self::conic_point`] for a point of `q`.
    pub fn conic_param(&self, a: &[F]) -> Option<[F; 2]> {
        if !self.on_conic(a) || a.iter().all(|c| c.is_zero()) {
            return None;
        }
        if a[3].is_zero() {
            return Some(normalize2([a[4].clone(), a[2].clone()]));
        }
        let d4 = a[4].clone() + a[3].clone() * &self.b1 / &self.alpha;
        let d2 = a[2].clone() - a[3].clone() * &self.rho;
        if d4.is_zero() && d2.is_zero() {
            return Some(normalize2(self.v_x.clone()));
        }
        Some(normalize2([d4, d2]))
    }

    pub fn v_y(&self) -> [F; 2] {
        [self.zero(), self.one()]
    }

    /// The Segre point `t0s0·x + t1s1·y + t0s1·e2′ + t1s0·e3′`.
    pub fn segre_point(&self, t: &[F; 2], s: &[F; 2]) -> Vec<F> {
        let w = [
            t[0].clone() * &s[0],
            t[1].clone() * &s[1],
            t[0].clone() * &s[1],
            t[1].clone() * &s[0],
        ];
        let mut p = vec![self.zero(); 5];
        for (wi, e) in w.iter().zip(&self.segre) {
            for k in 0..5 {
                p[k] = p[k].clone() + wi.clone() * &e[k];
            }
        }
        p
    }

    /// Coordinates `(y0, y1, y2, y3)` of a point of `H` in the Segre basis.
    pub fn segre_coords(&self, p: &[F]) -> Option<[F; 4]> {
        let m = Matrix::from_cols(self.segre.to_vec());
        let sol = m.solve(p)?;
        Some([sol[0].clone(), sol[1].clone(), sol[2].clone(), sol[3].clone()])
    }

    /// The pair `([t0:t1], [s0:s1])` of a point of `Q_H`.
    pub fn segre_inverse(&self, p: &[F]) -> Option<([F; 2], [F; 2])> {
        if !self.in_h(p) || !self.on_quadric(p) {
            return None;
        }
        let [y0, y1, y2, y3] = self.segre_coords(p)?;
        let s = if !y0.is_zero() || !y2.is_zero() { [y0.clone(), y2.clone()] } else { [y3.clone(), y1.clone()] };
        let t = if !y0.is_zero() || !y3.is_zero() { [y0, y3] } else { [y2, y1] };
        Some((normalize2(t), normalize2(s)))
    }

    /// The line `{t = [t0:t1]}` of the `(1,0)` family (`s` varies).
    pub fn t_line(&self, t: &[F; 2]) -> Line<F> {
        let (one, zero) = (self.one(), self.zero());
        Line::new(self.segre_point(t, &[one.clone(), zero.clone()]), self.segre_point(t, &[zero, one]))
    }

    /// The line `{s = [s0:s1]}` of the `(0,1)` family (`t` varies).
    pub fn s_line(&self, s: &[F; 2]) -> Line<F> {
        let (one, zero) = (self.one(), self.zero());
        Line::new(self.segre_point(&[one.clone(), zero.clone()], s), self.segre_point(&[zero, one], s))
    }

    /// `l_x = {t = [1:0]}`, the line of the first family through `x`.
    pub fn l_x(&self) -> Line<F> {
        self.t_line(&[self.one(), self.zero()])
    }

    /// `l_y = {t = [0:1]}`.
    pub fn l_y(&self) -> Line<F> {
        self.t_line(&[self.zero(), self.one()])
    }

    /// `m_x = {s = [1:0]}`, the line of the second family through `x`.
    pub fn m_x(&self) -> Line<F> {
        self.s_line(&[self.one(), self.zero()])
    }

    /// `n_y = {s = [0:1]}`.
    pub fn n_y(&self) -> Line<F> {
        self.s_line(&[self.zero(), self.one()])
    }

    /// Whether the whole line `⟨p, a⟩` lies in `Q`.
    pub fn line_in_quadric(&self, p: &[F], a: &[F]) -> bool {
        self.quad(p).is_zero() && self.quad(a).is_zero() && self.bil(p, a).is_zero()
    }

    /// The two points `a(t), a′(t)` of `q` joined to `t` by lines of `Q`.
    pub fn chord_points(&self, t: &[F]) -> Result<ChordPoints<F>> {
        if self.in_conic_plane(t) {
            return Err(Error::Input("point lies on the plane of q".into()));
        }
        let forms = self.conic_forms();
        let mut quad = [self.zero(), self.zero(), self.zero()];
        for k in 0..5 {
            let bt = self.gram.row(k).iter().zip(t).fold(self.zero(), |acc, (g, tt)| acc + g.clone() * tt);
            for i in 0..3 {
                quad[i] = quad[i].clone() + bt.clone() * &forms[k][i];
            }
        }
        let params = binary_quadratic_roots(&quad);
        Ok(ChordPoints { quadratic: quad, params })
    }

    /// Pencil parameter `[μ0:μ1]` of the hyperplane `μ0·x0 + μ1·x1 = 0`
    /// through `P(W)` and a point off it.
    pub fn pencil_member(&self, p: &[F]) -> Option<[F; 2]> {
        if self.in_conic_plane(p) {
            return None;
        }
        Some(normalize2([p[1].clone(), -p[0].clone()]))
    }

    /// The pencil member spanned by `P(W)` and a line meeting it in at most a point.
    pub fn pencil_member_of_line(&self, l: &Line<F>) -> Option<[F; 2]> {
        self.pencil_member(&l.p).or_else(|| self.pencil_member(&l.q))
    }

    /// `[b0 : c]`, the pencil parameter of `Π_z`, and `[b0 : −c]` for `Π_z′`.
    pub fn singular_members(&self) -> [[F; 2]; 2] {
        [normalize2([self.b0.clone(), self.c.clone()]), normalize2([self.b0.clone(), -self.c.clone()])]
    }

    /// Whether two lines of `Q ∩ Π` lie in the same ruling of that surface.
    pub fn same_ruling(&self, l1: &Line<F>, l2: &Line<F>, member: &[F; 2]) -> Result<bool> {
        let m = normalize2(member.clone());
        if self.singular_members().contains(&m) {
            return Err(Error::Input("cone has a single ruling".into()));
        }
        for l in [l1, l2] {
            for p in [&l.p, &l.q] {
                let val = m[0].clone() * &p[0] + m[1].clone() * &p[1];
                if !val.is_zero() || !self.on_quadric(p) {
                    return Err(Error::Input("line is not contained in Q ∩ Π".into()));
                }
            }
        }
        let rank = Matrix::from_rows(vec![l1.p.clone(), l1.q.clone(), l2.p.clone(), l2.q.clone()]).rank();
        Ok(rank == 2 || rank == 4)
    }

    /// Evaluates the seven generality conditions on `H`.
    pub fn check_generality(&self) -> GeneralityReport {
        let one = self.one();
        let e = |i: usize| unit(i, &one);
        let gram_row = |v: &[F]| self.gram.mul_vec(v);
        let pole = &self.pole;
        let c1 = !self.quad(pole).is_zero();
        let c2 = !(self.h[2].is_zero() && self.h[3].is_zero() && self.h[4].is_zero());
        let c3 = !(pole[0].is_zero() && pole[1].is_zero());
        // W^perp is spanned by vectors orthogonal to e2, e3, e4
        let wperp_rows = vec![gram_row(&e(2)), gram_row(&e(3)), gram_row(&e(4))];
        let in_wperp = Matrix::from_rows(wperp_rows.clone()).mul_vec(pole).iter().all(|x| x.is_zero());
        let c4 = !in_wperp;
        let mut rows = wperp_rows.clone();
        rows.push(self.h.clone());
        let z_space = Matrix::from_rows(rows).kernel();
        let c5 = z_space.len() == 1 && !self.quad(&z_space[0]).is_zero();
        let (c6, v2) = if c5 {
            let v1 = &z_space[0];
            let ut_w = Matrix::from_rows(vec![self.h.clone(), gram_row(v1), e(0), e(1)]).kernel();
            let line_ok = ut_w.len() == 2 && {
                let m = Matrix::from_rows(vec![ut_w[0].clone(), ut_w[1].clone(), self.x.clone(), self.y.clone()]);
                m.rank() == 2
            };
            let comp = Matrix::from_rows(vec![e(0), e(1), gram_row(&self.x), gram_row(&self.y)]).kernel();
            if line_ok && comp.len() == 1 {
                (true, Some(comp[0].clone()))
            } else {
                (false, None)
            }
        } else {
            (false, None)
        };
        let c7 = match v2 {
            Some(v2) => {
                let m = Matrix::from_rows(vec![self.z.clone(), self.zp.clone(), self.x.clone(), self.y.clone(), v2]);
                !m.det().is_zero()
            }
            None => false,
        };
        GeneralityReport { flags: [c1, c2, c3, c4, c5, c6, c7] }
    }

    /// Membership checks for every derived anchor.
    fn verify_anchors(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Invariant(format!("context anchor check failed: {what}")));
        if self.gram.det().is_zero() {
            return fail("Q is singular");
        }
        for (name, p) in [("z", &self.z), ("z'", &self.zp)] {
            if !self.on_quadric(p) {
                return fail(&format!("{name} is not on Q"));
            }
            for k in 2..5 {
                if !self.bil(p, &unit(k, &self.one())).is_zero() {
                    return fail(&format!("tangent hyperplane at {name} misses the conic plane"));
                }
            }
        }
        for (name, p) in [("x", &self.x), ("y", &self.y)] {
            if !self.on_conic(p) || !self.in_h(p) {
                return fail(&format!("{name} is not on q ∩ H"));
            }
        }
        if !proj_eq(&self.conic_point(&self.v_x), &self.x)
            || !proj_eq(&self.conic_point(&self.v_y()), &self.y)
        {
            return fail("conic parameters of x and y");
        }
        // pullback of the Segre form: b(P, P) must vanish identically and the
        // basis must span H
        for e in &self.segre {
            if !self.in_h(e) || !self.on_quadric(e) {
                return fail("Segre basis vector off Q_H");
            }
        }
        let bxy = self.bil(&self.segre[0], &self.segre[1]);
        let b23 = self.bil(&self.segre[2], &self.segre[3]);
        if bxy.is_zero() || !(bxy.clone() + &b23).is_zero() {
            return fail("Segre normalization");
        }
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            if !self.bil(&self.segre[i], &self.segre[j]).is_zero() {
                return fail("Segre basis orthogonality");
            }
        }
        if Matrix::from_rows(self.segre.to_vec()).rank() != 4 {
            return fail("Segre basis rank");
        }
        Ok(())
    }

    /// The quadratic form of `Q_H` pulled back to Segre coordinates, as the
    /// symmetric 4×4 Gram matrix. It equals `b(x,y)` times the form of `y0y1 − y2y3`.
    pub fn segre_gram(&self) -> Matrix<F> {
        let rows = (0..4)
            .map(|i| (0..4).map(|j| self.bil(&self.segre[i], &self.segre[j])).collect())
            .collect();
        Matrix::from_rows(rows)
    }

    /// Serializable parameters `(field descriptor, b0, b1, α)`.
    pub fn params(&self) -> (String, F, F, F) {
        (self.field.descriptor(), self.b0.clone(), self.b1.clone(), self.alpha.clone())
    }
}

/// Normalizes a point of P¹ so that its first nonzero coordinate is one.
pub fn normalize2<F: Scalar>(v: [F; 2]) -> [F; 2] {
    if !v[0].is_zero() {
        let inv = v[0].inv().unwrap();
        [v[0].one_like(), v[1].clone() * &inv]
    } else if !v[1].is_zero() {
        [v[0].zero_like(), v[1].one_like()]
    } else {
        v
    }
}

/// Roots `[v0 : v1]` of `c0·v1² + c1·v0v1 + c2·v0²` when they are rational.
pub fn binary_quadratic_roots<F: Scalar>(c: &[F; 3]) -> Option<[[F; 2]; 2]> {
    let one = c[0].one_like();
    let zero = c[0].zero_like();
    if c[2].is_zero() {
        // one root at infinity [1:0]
        if c[1].is_zero() {
            return if c[0].is_zero() { None } else { Some([[one.clone(), zero.clone()], [one, zero]]) };
        }
        let r = -(c[0].clone() / &c[1]);
        return Some([normalize2([r, one.clone()]), [one, zero]]);
    }
    let disc = c[1].square() - c[0].from_i64_like(4) * &c[2] * &c[0];
    let s = disc.sqrt()?;
    let two_a = c[2].clone() + &c[2];
    let r1 = (-c[1].clone() + &s) / &two_a;
    let r2 = (-c[1].clone() - s) / &two_a;
    Some([[r1, one.clone()], [r2, one]])
}

/// Parameter sampling for random contexts, specific to each field backend.
pub trait ContextSampling: Field {
    /// Draws candidate parameters `(b0, b1, α)`.
    fn sample_params<R: Rng + ?Sized>(&self, rng: &mut R, height: u64) -> [Self::Elem; 3];
    /// Height bounds `(context, ruling curve)` used by seeded instance generation.
    fn default_heights(&self) -> (u64, u64);
}

impl ContextSampling for PrimeField {
    fn sample_params<R: Rng + ?Sized>(&self, rng: &mut R, height: u64) -> [Fp; 3] {
        [
            self.random_element(rng, height),
            self.random_element(rng, height),
            self.random_element(rng, height),
        ]
    }

    fn default_heights(&self) -> (u64, u64) {
        (self.modulus(), self.modulus())
    }
}

impl ContextSampling for TowerField {
    /// Parameters from a Pythagorean quadruple `α² = k² + n² + p²` with
    /// `b0 = −k²`, `b1 = k²α²/(k² + n²)`, which make every square root the
    /// context needs rational.
    fn sample_params<R: Rng + ?Sized>(&self, rng: &mut R, height: u64) -> [Qt; 3] {
        let h = height.clamp(2, 24) as i64;
        let mut quads = Vec::new();
        for k in 1..=h {
            for n in 1..=h {
                for p in 1..=h {
                    let s = k * k + n * n + p * p;
                    let a = (s as f64).sqrt().round() as i64;
                    if a * a == s {
                        quads.push((k, n, a));
                    }
                }
            }
        }
        let (k, n, a) = quads[rng.gen_range(0..quads.len())];
        let b0 = Qt::from_ratio(-k * k, 1);
        let b1 = Qt::from_ratio(k * k * a * a, k * k + n * n);
        [b0, b1, Qt::from_ratio(a, 1)]
    }

    fn default_heights(&self) -> (u64, u64) {
        (10, 5)
    }
}

/// Rejection-samples a context whose square roots lie in the base field and
/// which satisfies all generality conditions.
pub fn sample_context<K: ContextSampling, R: Rng + ?Sized>(
    field: &K,
    rng: &mut R,
    height: u64,
    budget: usize,
) -> Result<QuadricContext<K::Elem>> {
    let mut last = String::from("no draws");
    for _ in 0..budget {
        let [b0, b1, a] = field.sample_params(rng, height);
        match QuadricContext::build_with_limit(field, b0, b1, a, 0) {
            Ok(ctx) => return Ok(ctx),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::SamplingExhausted { attempts: budget, last })
}

/// Polynomial vector helper: `Σ_k coeffs[k] · vecs[k]` with polynomial coefficients.
pub fn poly_combination<F: Scalar>(coeffs: &[Poly<F>], vecs: &[&[F]]) -> Vec<Poly<F>> {
    (0..5)
        .map(|k| {
            let mut acc = Poly::zero();
            for (c, v) in coeffs.iter().zip(vecs) {
                if !v[k].is_zero() {
                    acc = &acc + &c.scale(&v[k]);
                }
            }
            acc
        })
        .collect()
}
