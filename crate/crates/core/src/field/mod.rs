//! Exact scalar fields.
//!
//! Two backends implement [`Scalar`]: [`Fp`], residues modulo an odd prime, and
//! [`Qt`], elements of an iterated quadratic extension of the rationals. Every
//! algebraic routine in the crate is generic over [`Scalar`] and never compares
//! with a tolerance.

mod fp;
mod tower;

pub use fp::{Fp, PrimeField};
pub use tower::{Level, Qt, TowerField};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rand::Rng;

use crate::error::FieldError;
use crate::poly::Poly;

/// Default bound on the number of adjoined square roots.
pub const DEFAULT_TOWER_DEPTH: usize = 3;

/// An element of an exact field of characteristic different from two.
///
/// Division by zero panics, mirroring integer division; callers test
/// [`Scalar::is_zero`] or use [`Scalar::inv`] when the divisor may vanish.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    type Field: Field<Elem = Self>;

    /// The smallest field this element is known to live in.
    fn field(&self) -> Self::Field;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    /// Square root inside [`Scalar::field`], if one exists there.
    fn sqrt(&self) -> Option<Self>;
    /// A fixed total order used only to make outputs deterministic.
    fn canonical_cmp(&self, other: &Self) -> Ordering;
    /// Distinct roots of `p` in the field of its coefficients, sorted by
    /// [`Scalar::canonical_cmp`]. `p` must be nonzero.
    fn poly_roots(p: &Poly<Self>) -> Vec<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    fn characteristic(&self) -> u64 {
        self.field().characteristic()
    }
}

/// A field descriptor: constructs elements and adjoins square roots.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Scalar<Field = Self>;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// `num / den`; panics if `den` vanishes in the field.
    fn from_ratio(&self, num: i64, den: i64) -> Self::Elem {
        self.from_i64(num) / self.from_i64(den)
    }
    fn characteristic(&self) -> u64;
    /// Number of adjoined square roots (zero for prime fields and for Q).
    fn depth(&self) -> usize;
    /// Moves an element of a subfield into this field.
    fn lift(&self, x: &Self::Elem) -> Self::Elem;
    /// Square root of `x` inside this field.
    fn sqrt(&self, x: &Self::Elem) -> Option<Self::Elem>;
    /// Returns a field containing a square root of `x` together with the root.
    ///
    /// If `x` is already a square the field is returned unchanged.
    fn adjoin_sqrt(&self, x: &Self::Elem, depth_limit: usize)
        -> Result<(Self, Self::Elem), FieldError>;
    /// An element of bounded height: an integer in `[-height, height]`
    /// (reduced modulo p for prime fields, where `height >= p` means uniform).
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: u64) -> Self::Elem;
    /// Short descriptor such as `fp:101` or `qq`.
    fn descriptor(&self) -> String;
    /// Parses the serialized form of a base-field element.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FieldError>;
    /// Serialized form of an element (residue integer or `num/den`).
    fn format_elem(&self, x: &Self::Elem) -> String {
        x.to_string()
    }
}

/// Normalizes a projective vector so that its first nonzero entry is one.
/// Returns `None` for the zero vector.
pub fn normalize_projective<F: Scalar>(v: &[F]) -> Option<Vec<F>> {
    let lead = v.iter().find(|c| !c.is_zero())?;
    let inv = lead.inv()?;
    Some(v.iter().map(|c| c.clone() * &inv).collect())
}

/// Projective equality of two vectors of the same length.
pub fn proj_eq<F: Scalar>(a: &[F], b: &[F]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    match (normalize_projective(a), normalize_projective(b)) {
        (Some(x), Some(y)) => x == y,
        (None, None) => true,
        _ => false,
    }
}
