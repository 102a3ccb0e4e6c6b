use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LatticeError;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 3;

/// An exact integer lattice point (or move vector) in dimension 1..=3.
///
/// Arithmetic panics on `i64` overflow; use the `checked_*` variants where the
/// operands are untrusted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVec {
    dim: u8,
    coords: [i64; MAX_DIM],
}

impl IntVec {
    pub fn new(coords: &[i64]) -> Self {
        Self::try_new(coords).expect("IntVec dimension must be 1..=3")
    }

    pub fn try_new(coords: &[i64]) -> Result<Self, LatticeError> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(LatticeError::UnsupportedDimension(coords.len()));
        }
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Self { dim: coords.len() as u8, coords: c })
    }

    pub const fn xy(x: i64, y: i64) -> Self {
        Self { dim: 2, coords: [x, y, 0] }
    }

    pub const fn xyz(x: i64, y: i64, z: i64) -> Self {
        Self { dim: 3, coords: [x, y, z] }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(&vec![0; dim])
    }

    /// The `k`-th unit vector.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[k] = 1;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn get(&self, k: usize) -> i64 {
        assert!(k < self.dim(), "coordinate {k} out of range for dimension {}", self.dim);
        self.coords[k]
    }

    #[inline]
    pub fn x(&self) -> i64 {
        self.coords[0]
    }

    #[inline]
    pub fn y(&self) -> i64 {
        self.coords[1]
    }

    #[inline]
    pub fn z(&self) -> i64 {
        self.coords[2]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&c| c == 0)
    }

    /// Membership in the board ℕ^d.
    #[inline]
    pub fn is_nonneg(&self) -> bool {
        self.coords().iter().all(|&c| c >= 0)
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &IntVec) -> bool {
        self.same_dim(other);
        self.coords().iter().zip(other.coords()).all(|(a, b)| a >= b)
    }

    pub fn checked_add(&self, other: &IntVec) -> Option<IntVec> {
        self.zip_checked(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &IntVec) -> Option<IntVec> {
        self.zip_checked(other, i64::checked_sub)
    }

    pub fn checked_scale(&self, k: i64) -> Option<IntVec> {
        let mut out = *self;
        for c in &mut out.coords[..self.dim as usize] {
            *c = c.checked_mul(k)?;
        }
        Some(out)
    }

    /// Exact dot product; panics on overflow.
    pub fn dot(&self, other: &IntVec) -> i64 {
        self.same_dim(other);
        let wide: i128 = self
            .coords()
            .iter()
            .zip(other.coords())
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum();
        i64::try_from(wide).expect("dot product overflows i64")
    }

    /// Appends a coordinate: `(x, y).extend(z) == (x, y, z)`.
    pub fn extend(&self, last: i64) -> IntVec {
        let mut c = self.coords().to_vec();
        c.push(last);
        IntVec::new(&c)
    }

    /// Drops the last coordinate.
    pub fn truncate(&self) -> IntVec {
        IntVec::new(&self.coords()[..self.dim() - 1])
    }

    pub fn last(&self) -> i64 {
        self.coords[self.dim as usize - 1]
    }

    /// Largest absolute coordinate.
    pub fn norm_inf(&self) -> i64 {
        self.coords().iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    fn zip_checked(&self, other: &IntVec, f: impl Fn(i64, i64) -> Option<i64>) -> Option<IntVec> {
        if self.dim != other.dim {
            return None;
        }
        let mut out = *self;
        for k in 0..self.dim as usize {
            out.coords[k] = f(self.coords[k], other.coords[k])?;
        }
        Some(out)
    }

    #[inline]
    fn same_dim(&self, other: &IntVec) {
        assert_eq!(self.dim, other.dim, "dimension mismatch: {self} vs {other}");
    }
}

impl Add for IntVec {
    type Output = IntVec;
    fn add(self, rhs: IntVec) -> IntVec {
        self.same_dim(&rhs);
        self.checked_add(&rhs).expect("IntVec addition overflow")
    }
}

impl Sub for IntVec {
    type Output = IntVec;
    fn sub(self, rhs: IntVec) -> IntVec {
        self.same_dim(&rhs);
        self.checked_sub(&rhs).expect("IntVec subtraction overflow")
    }
}

impl Neg for IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        self.checked_scale(-1).expect("IntVec negation overflow")
    }
}

impl Mul<IntVec> for i64 {
    type Output = IntVec;
    fn mul(self, rhs: IntVec) -> IntVec {
        rhs.checked_scale(self).expect("IntVec scaling overflow")
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IntVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<i64> = Vec::deserialize(d)?;
        IntVec::try_new(&v).map_err(serde::de::Error::custom)
    }
}

impl From<(i64, i64)> for IntVec {
    fn from((x, y): (i64, i64)) -> Self {
        IntVec::xy(x, y)
    }
}

impl From<(i64, i64, i64)> for IntVec {
    fn from((x, y, z): (i64, i64, i64)) -> Self {
        IntVec::xyz(x, y, z)
    }
}
