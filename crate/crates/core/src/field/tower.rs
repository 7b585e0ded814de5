//! Iterated quadratic extensions of the rationals.
//!
//! A [`Level`] records one adjoined square root over its parent. Elements carry
//! the level they live in; binary operations lift the shallower operand along
//! the parent chain, so elements of Q mix freely with elements of any tower.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::Rng;

use super::{Field, Scalar};
use crate::error::FieldError;
use crate::poly::Poly;

static LEVEL_IDS: AtomicU64 = AtomicU64::new(1);

/// One step `K(√r)` of a tower over its parent `K`.
#[derive(Debug)]
pub struct Level {
    parent: Option<Arc<Level>>,
    radicand: Qt,
    depth: usize,
    id: u64,
}

impl Level {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn radicand(&self) -> &Qt {
        &self.radicand
    }

    pub fn parent(&self) -> Option<&Arc<Level>> {
        self.parent.as_ref()
    }
}

type Lv = Option<Arc<Level>>;

fn depth_of(l: &Lv) -> usize {
    l.as_ref().map_or(0, |l| l.depth)
}

fn same_level(a: &Lv, b: &Lv) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => x.id == y.id,
        _ => false,
    }
}

/// Ancestor of `l` at the given depth.
fn ancestor(l: &Lv, depth: usize) -> Lv {
    let mut cur = l.clone();
    while depth_of(&cur) > depth {
        cur = cur.and_then(|c| c.parent.clone());
    }
    cur
}

/// An element `a + b·√r` of a tower level, or a rational.
#[derive(Clone)]
pub enum Qt {
    Rat(BigRational),
    Ext(Arc<Level>, Box<Qt>, Box<Qt>),
}

impl Qt {
    pub fn from_ratio(num: i64, den: i64) -> Qt {
        Qt::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Qt {
        Qt::Rat(r)
    }

    pub fn level(&self) -> Lv {
        match self {
            Qt::Rat(_) => None,
            Qt::Ext(l, _, _) => Some(l.clone()),
        }
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Qt::Rat(r) => Some(r.clone()),
            Qt::Ext(_, a, b) => {
                if b.is_zero() {
                    a.as_rational()
                } else {
                    None
                }
            }
        }
    }

    /// Galois conjugate over the parent of `level`: `a + b√r ↦ a − b√r`.
    /// Elements shallower than `level` are first lifted to it.
    pub fn conjugate(&self, level: &Arc<Level>) -> Qt {
        match self.lift_to(&Some(level.clone())) {
            Qt::Ext(l, a, b) => Qt::Ext(l, a, Box::new(b.neg_ref())),
            Qt::Rat(_) => unreachable!(),
        }
    }

    /// The same element one level down, if it lies in the parent of its level.
    pub fn lower(&self) -> Option<Qt> {
        match self {
            Qt::Rat(_) => Some(self.clone()),
            Qt::Ext(_, a, b) => b.is_zero_ref().then(|| (**a).clone()),
        }
    }

    fn lift_to(&self, target: &Lv) -> Qt {
        let own = self.level();
        if same_level(&own, target) {
            return self.clone();
        }
        let t = target.as_ref().expect("cannot lower a tower element to Q");
        assert!(depth_of(&own) < t.depth, "incompatible tower levels");
        let inner = self.lift_to(&t.parent);
        Qt::Ext(t.clone(), Box::new(inner), Box::new(Qt::Rat(BigRational::zero())))
    }

    fn unify(a: &Qt, b: &Qt) -> Lv {
        let (la, lb) = (a.level(), b.level());
        let (deep, shallow) = if depth_of(&la) >= depth_of(&lb) { (la, lb) } else { (lb, la) };
        let anc = ancestor(&deep, depth_of(&shallow));
        assert!(same_level(&anc, &shallow), "elements from incompatible tower branches");
        deep
    }

    fn binop(a: &Qt, b: &Qt, f: &dyn Fn(&Qt, &Qt, Option<&Arc<Level>>) -> Qt) -> Qt {
        if let (Qt::Rat(_), Qt::Rat(_)) = (a, b) {
            return f(a, b, None);
        }
        let l = Qt::unify(a, b);
        let (x, y) = (a.lift_to(&l), b.lift_to(&l));
        f(&x, &y, l.as_ref())
    }

    fn add_ref(&self, o: &Qt) -> Qt {
        Qt::binop(self, o, &|x, y, l| match (x, y) {
            (Qt::Rat(p), Qt::Rat(q)) => Qt::Rat(p + q),
            (Qt::Ext(_, a1, b1), Qt::Ext(_, a2, b2)) => Qt::Ext(
                l.unwrap().clone(),
                Box::new(a1.add_ref(a2)),
                Box::new(b1.add_ref(b2)),
            ),
            _ => unreachable!(),
        })
    }

    fn neg_ref(&self) -> Qt {
        match self {
            Qt::Rat(p) => Qt::Rat(-p),
            Qt::Ext(l, a, b) => Qt::Ext(l.clone(), Box::new(a.neg_ref()), Box::new(b.neg_ref())),
        }
    }

    fn mul_ref(&self, o: &Qt) -> Qt {
        Qt::binop(self, o, &|x, y, l| match (x, y) {
            (Qt::Rat(p), Qt::Rat(q)) => Qt::Rat(p * q),
            (Qt::Ext(lv, a1, b1), Qt::Ext(_, a2, b2)) => {
                let r = &lv.radicand;
                let a = a1.mul_ref(a2).add_ref(&b1.mul_ref(b2).mul_ref(r));
                let b = a1.mul_ref(b2).add_ref(&a2.mul_ref(b1));
                Qt::Ext(l.unwrap().clone(), Box::new(a), Box::new(b))
            }
            _ => unreachable!(),
        })
    }

    fn inv_ref(&self) -> Option<Qt> {
        match self {
            Qt::Rat(p) => {
                if p.is_zero() {
                    None
                } else {
                    Some(Qt::Rat(p.recip()))
                }
            }
            Qt::Ext(l, a, b) => {
                let n = a.mul_ref(a).add_ref(&b.mul_ref(b).mul_ref(&l.radicand).neg_ref());
                let ni = n.inv_ref()?;
                Some(Qt::Ext(
                    l.clone(),
                    Box::new(a.mul_ref(&ni)),
                    Box::new(b.mul_ref(&ni).neg_ref()),
                ))
            }
        }
    }

    fn eq_ref(&self, o: &Qt) -> bool {
        match (self, o) {
            (Qt::Rat(p), Qt::Rat(q)) => p == q,
            _ => {
                let l = Qt::unify(self, o);
                match (self.lift_to(&l), o.lift_to(&l)) {
                    (Qt::Ext(_, a1, b1), Qt::Ext(_, a2, b2)) => a1.eq_ref(&a2) && b1.eq_ref(&b2),
                    _ => unreachable!(),
                }
            }
        }
    }

    fn is_zero_ref(&self) -> bool {
        match self {
            Qt::Rat(p) => p.is_zero(),
            Qt::Ext(_, a, b) => a.is_zero_ref() && b.is_zero_ref(),
        }
    }

    /// Square root inside the element's own level.
    fn sqrt_here(&self) -> Option<Qt> {
        match self {
            Qt::Rat(p) => rational_sqrt(p).map(Qt::Rat),
            Qt::Ext(l, a, b) => {
                let wrap = |c: Qt, e: Qt| Qt::Ext(l.clone(), Box::new(c), Box::new(e));
                let zero = Qt::Rat(BigRational::zero());
                let parent = &l.parent;
                if b.is_zero_ref() {
                    if let Some(c) = sqrt_at(a, parent) {
                        return Some(wrap(c, zero));
                    }
                    let q = a.mul_ref(&l.radicand.inv_ref()?);
                    return sqrt_at(&q, parent).map(|e| wrap(zero, e));
                }
                let norm = a.mul_ref(a).add_ref(&b.mul_ref(b).mul_ref(&l.radicand).neg_ref());
                let n = sqrt_at(&norm, parent)?;
                let half = Qt::from_ratio(1, 2);
                for cand in [a.add_ref(&n), a.add_ref(&n.neg_ref())] {
                    let c2 = cand.mul_ref(&half);
                    if c2.is_zero_ref() {
                        continue;
                    }
                    if let Some(c) = sqrt_at(&c2, parent) {
                        let e = b.mul_ref(&c.mul_ref(&Qt::from_ratio(2, 1)).inv_ref()?);
                        return Some(wrap(c, e));
                    }
                }
                None
            }
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Qt::Rat(p) => write!(f, "{}/{}", p.numer(), p.denom()),
            Qt::Ext(l, a, b) => {
                write!(f, "(")?;
                a.fmt_inner(f)?;
                write!(f, ")+(")?;
                b.fmt_inner(f)?;
                write!(f, ")*r{}", l.depth)
            }
        }
    }
}

fn sqrt_at(x: &Qt, level: &Lv) -> Option<Qt> {
    x.lift_to(level).sqrt_here()
}

fn rational_sqrt(p: &BigRational) -> Option<BigRational> {
    if p.is_negative() {
        return None;
    }
    let n = p.numer().sqrt();
    let d = p.denom().sqrt();
    if &(&n * &n) == p.numer() && &(&d * &d) == p.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl PartialEq for Qt {
    fn eq(&self, o: &Qt) -> bool {
        self.eq_ref(o)
    }
}

impl fmt::Debug for Qt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f)
    }
}

impl fmt::Display for Qt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f)
    }
}

impl Add for Qt {
    type Output = Qt;
    fn add(self, o: Qt) -> Qt {
        self.add_ref(&o)
    }
}

impl Sub for Qt {
    type Output = Qt;
    fn sub(self, o: Qt) -> Qt {
        self.add_ref(&o.neg_ref())
    }
}

impl Mul for Qt {
    type Output = Qt;
    fn mul(self, o: Qt) -> Qt {
        self.mul_ref(&o)
    }
}

impl Div for Qt {
    type Output = Qt;
    fn div(self, o: Qt) -> Qt {
        self.mul_ref(&o.inv_ref().expect("division by zero in a tower field"))
    }
}

impl Neg for Qt {
    type Output = Qt;
    fn neg(self) -> Qt {
        self.neg_ref()
    }
}

impl<'a> Add<&'a Qt> for Qt {
    type Output = Qt;
    fn add(self, o: &'a Qt) -> Qt {
        self.add_ref(o)
    }
}

impl<'a> Sub<&'a Qt> for Qt {
    type Output = Qt;
    fn sub(self, o: &'a Qt) -> Qt {
        self.add_ref(&o.neg_ref())
    }
}

impl<'a> Mul<&'a Qt> for Qt {
    type Output = Qt;
    fn mul(self, o: &'a Qt) -> Qt {
        self.mul_ref(o)
    }
}

impl<'a> Div<&'a Qt> for Qt {
    type Output = Qt;
    fn div(self, o: &'a Qt) -> Qt {
        self.mul_ref(&o.inv_ref().expect("division by zero in a tower field"))
    }
}

fn cmp_qt(a: &Qt, b: &Qt) -> Ordering {
    match (a, b) {
        (Qt::Rat(p), Qt::Rat(q)) => p.cmp(q),
        _ => {
            let l = Qt::unify(a, b);
            match (a.lift_to(&l), b.lift_to(&l)) {
                (Qt::Ext(_, a1, b1), Qt::Ext(_, a2, b2)) => {
                    cmp_qt(&b1, &b2).then_with(|| cmp_qt(&a1, &a2))
                }
                _ => unreachable!(),
            }
        }
    }
}

impl Scalar for Qt {
    type Field = TowerField;

    fn field(&self) -> TowerField {
        TowerField { level: self.level() }
    }

    fn is_zero(&self) -> bool {
        self.is_zero_ref()
    }

    fn inv(&self) -> Option<Qt> {
        self.inv_ref()
    }

    fn zero_like(&self) -> Qt {
        Qt::Rat(BigRational::zero())
    }

    fn one_like(&self) -> Qt {
        Qt::Rat(BigRational::one())
    }

    fn from_i64_like(&self, n: i64) -> Qt {
        Qt::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    fn sqrt(&self) -> Option<Qt> {
        self.sqrt_here()
    }

    fn canonical_cmp(&self, other: &Qt) -> Ordering {
        cmp_qt(self, other)
    }

    fn is_one(&self) -> bool {
        match self.as_rational() {
            Some(r) => r.is_one(),
            None => false,
        }
    }

    fn poly_roots(p: &Poly<Qt>) -> Vec<Qt> {
        crate::roots::tower_roots(p)
    }
}

/// A field in the tower: Q itself (`level == None`) or some adjoined level.
#[derive(Clone, Debug)]
pub struct TowerField {
    level: Lv,
}

impl PartialEq for TowerField {
    fn eq(&self, o: &TowerField) -> bool {
        same_level(&self.level, &o.level)
    }
}

impl TowerField {
    /// The rational numbers.
    pub fn rationals() -> TowerField {
        TowerField { level: None }
    }

    pub fn level(&self) -> Option<&Arc<Level>> {
        self.level.as_ref()
    }

    /// Whether `self` is a subfield of `other` along the tower.
    pub fn is_subfield_of(&self, other: &TowerField) -> bool {
        depth_of(&self.level) <= depth_of(&other.level)
            && same_level(&ancestor(&other.level, depth_of(&self.level)), &self.level)
    }

    /// The deeper of two comparable fields.
    pub fn join(&self, other: &TowerField) -> TowerField {
        if self.is_subfield_of(other) {
            other.clone()
        } else {
            assert!(other.is_subfield_of(self), "incompatible tower fields");
            self.clone()
        }
    }
}

impl Field for TowerField {
    type Elem = Qt;

    fn zero(&self) -> Qt {
        Qt::Rat(BigRational::zero())
    }

    fn one(&self) -> Qt {
        Qt::Rat(BigRational::one())
    }

    fn from_i64(&self, n: i64) -> Qt {
        Qt::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_ratio(&self, num: i64, den: i64) -> Qt {
        Qt::from_ratio(num, den)
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn depth(&self) -> usize {
        depth_of(&self.level)
    }

    fn lift(&self, x: &Qt) -> Qt {
        x.lift_to(&self.level)
    }

    fn sqrt(&self, x: &Qt) -> Option<Qt> {
        x.lift_to(&self.level).sqrt_here()
    }

    fn adjoin_sqrt(&self, x: &Qt, depth_limit: usize) -> Result<(Self, Qt), FieldError> {
        if x.is_zero_ref() {
            return Err(FieldError::ZeroRadicand);
        }
        let lifted = x.lift_to(&self.level);
        if let Some(r) = lifted.sqrt_here() {
            return Ok((self.clone(), r));
        }
        let depth = depth_of(&self.level) + 1;
        if depth > depth_limit {
            return Err(FieldError::TowerDepth { limit: depth_limit });
        }
        let level = Arc::new(Level {
            parent: self.level.clone(),
            radicand: lifted,
            depth,
            id: LEVEL_IDS.fetch_add(1, AtomicOrdering::Relaxed),
        });
        let root = Qt::Ext(level.clone(), Box::new(self.zero()), Box::new(self.one()));
        Ok((TowerField { level: Some(level) }, root))
    }

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: u64) -> Qt {
        let h = height.min(i64::MAX as u64) as i64;
        self.from_i64(rng.gen_range(-h..=h))
    }

    fn descriptor(&self) -> String {
        "qq".to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<Qt, FieldError> {
        let t = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Qt::Rat(BigRational::new(n, d)))
    }
}
