//! Bivariate polynomials in `(u, v)`, stored as polynomials in `v` with
//! coefficients in `k[u]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::poly::Poly;

/// `Σ_j c_j(u) v^j`. Trailing zero `v`-coefficients are stripped.
#[derive(Clone, PartialEq)]
pub struct BiPoly<F> {
    cv: Vec<Poly<F>>,
}

impl<F: Scalar> BiPoly<F> {
    pub fn new(mut cv: Vec<Poly<F>>) -> Self {
        while cv.last().is_some_and(|c| c.is_zero()) {
            cv.pop();
        }
        BiPoly { cv }
    }

    pub fn zero() -> Self {
        BiPoly { cv: Vec::new() }
    }

    /// Builds from a dense table `t[i][j]` = coefficient of `u^i v^j`.
    pub fn from_table(t: &[Vec<F>]) -> Self {
        let nv = t.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut cv = Vec::with_capacity(nv);
        for j in 0..nv {
            let col: Vec<F> = t
                .iter()
                .map(|r| match r.get(j) {
                    Some(c) => c.clone(),
                    None => r[0].zero_like(),
                })
                .collect();
            cv.push(Poly::new(col));
        }
        BiPoly::new(cv)
    }

    /// A polynomial in `u` alone.
    pub fn from_u(p: Poly<F>) -> Self {
        BiPoly::new(vec![p])
    }

    /// A polynomial in `v` alone.
    pub fn from_v(p: &Poly<F>) -> Self {
        BiPoly::new(p.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    pub fn v_coeffs(&self) -> &[Poly<F>] {
        &self.cv
    }

    /// Coefficient of `v^j` as a polynomial in `u`.
    pub fn v_coeff(&self, j: usize) -> Poly<F> {
        self.cv.get(j).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.cv.is_empty()
    }

    pub fn deg_v(&self) -> isize {
        self.cv.len() as isize - 1
    }

    pub fn deg_u(&self) -> isize {
        self.cv.iter().map(|c| c.deg()).max().unwrap_or(-1)
    }

    /// Coefficient of `u^i v^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Option<F> {
        self.cv.get(j).and_then(|p| p.get(i).cloned())
    }

    /// Specializes `u = u0`, giving a polynomial in `v`.
    pub fn eval_u(&self, u0: &F) -> Poly<F> {
        Poly::new(self.cv.iter().map(|c| c.eval(u0)).collect())
    }

    /// Specializes `v = v0`, giving a polynomial in `u`.
    pub fn eval_v(&self, v0: &F) -> Poly<F> {
        let mut acc = Poly::zero();
        for c in self.cv.iter().rev() {
            acc = &acc.scale(v0) + c;
        }
        acc
    }

    pub fn eval(&self, u0: &F, v0: &F) -> F {
        self.eval_u(u0).eval(v0)
    }

    /// Exchanges the roles of `u` and `v`.
    pub fn swap(&self) -> Self {
        let du = self.deg_u();
        if du < 0 {
            return BiPoly::zero();
        }
        let z = self.cv.iter().find_map(|c| c.template().cloned()).unwrap().zero_like();
        let mut out = Vec::with_capacity(du as usize + 1);
        for i in 0..=du as usize {
            out.push(Poly::new(
                self.cv.iter().map(|c| c.get(i).cloned().unwrap_or_else(|| z.clone())).collect(),
            ));
        }
        BiPoly::new(out)
    }

    pub fn derivative_v(&self) -> Self {
        BiPoly::new(
            self.cv
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| match c.template() {
                    Some(t) => c.scale(&t.from_i64_like(j as i64)),
                    None => Poly::zero(),
                })
                .collect(),
        )
    }

    pub fn derivative_u(&self) -> Self {
        BiPoly::new(self.cv.iter().map(|c| c.derivative()).collect())
    }

    pub fn scale_u(&self, p: &Poly<F>) -> Self {
        BiPoly::new(self.cv.iter().map(|c| c * p).collect())
    }

    pub fn add(&self, o: &BiPoly<F>) -> Self {
        let n = self.cv.len().max(o.cv.len());
        BiPoly::new((0..n).map(|j| &self.v_coeff(j) + &o.v_coeff(j)).collect())
    }

    pub fn sub(&self, o: &BiPoly<F>) -> Self {
        let n = self.cv.len().max(o.cv.len());
        BiPoly::new((0..n).map(|j| &self.v_coeff(j) - &o.v_coeff(j)).collect())
    }

    pub fn mul(&self, o: &BiPoly<F>) -> Self {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.cv.len() + o.cv.len() - 1];
        for (i, a) in self.cv.iter().enumerate() {
            for (j, b) in o.cv.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::new(out)
    }

    /// Substitutes a polynomial `v = w(u)`.
    pub fn subs_v(&self, w: &Poly<F>) -> Poly<F> {
        let mut acc = Poly::zero();
        for c in self.cv.iter().rev() {
            acc = &(&acc * w) + c;
        }
        acc
    }
}

impl<F: Scalar> fmt::Debug for BiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.cv.iter().enumerate().map(|(j, c)| format!("({c:?})*v^{j}")).collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Determinant of a square matrix over `k[u]` by fraction-free elimination.
pub fn poly_det<F: Scalar>(mut m: Vec<Vec<Poly<F>>>) -> Poly<F> {
    let n = m.len();
    if n == 0 {
        panic!("determinant of an empty polynomial matrix");
    }
    let mut sign = false;
    let mut prev: Option<Poly<F>> = None;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Poly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = match &prev {
                    None => num,
                    Some(d) => num.div_exact(d).expect("Bareiss division is exact"),
                };
            }
            m[i][k] = Poly::zero();
        }
        prev = Some(m[k][k].clone());
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Classical resultant with respect to `v`, using the actual `v`-degrees.
pub fn resultant_v<F: Scalar>(f: &BiPoly<F>, g: &BiPoly<F>) -> Result<Poly<F>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::Input("resultant of a zero polynomial".into()));
    }
    let m = f.deg_v() as usize;
    let n = g.deg_v() as usize;
    if m == 0 && n == 0 {
        return Ok(Poly::constant(f.v_coeff(0).template().unwrap().one_like()));
    }
    if m == 0 {
        return Ok(f.v_coeff(0).pow(n as u32));
    }
    if n == 0 {
        return Ok(g.v_coeff(0).pow(m as u32));
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    // rows of f shifted n times, then g shifted m times; columns from v^{size-1} down
    for s in 0..n {
        let mut row = vec![Poly::zero(); size];
        for j in 0..=m {
            row[s + (m - j)] = f.v_coeff(j);
        }
        rows.push(row);
    }
    for s in 0..m {
        let mut row = vec![Poly::zero(); size];
        for j in 0..=n {
            row[s + (n - j)] = g.v_coeff(j);
        }
        rows.push(row);
    }
    Ok(poly_det(rows))
}

/// `B² − 4AC` for `f = A v² + B v + C`.
pub fn discriminant_v<F: Scalar>(f: &BiPoly<F>) -> Result<Poly<F>> {
    if f.deg_v() != 2 {
        return Err(Error::Input(format!("discriminant needs v-degree 2, got {}", f.deg_v())));
    }
    let (a, b, c) = (f.v_coeff(2), f.v_coeff(1), f.v_coeff(0));
    let four = a.template().unwrap().from_i64_like(4);
    Ok(&(&b * &b) - &(&a * &c).scale(&four))
}
