use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{IntVec, LatticeError};

/// A full-rank sublattice `L ⊆ ℤ^d` (d = 2 or 3), given by basis rows.
///
/// Membership solves `basisᵀ·x = v` exactly through the adjugate: `v ∈ L`
/// iff every entry of `adj(basisᵀ)·v` is divisible by `det`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<IntVec>", into = "Vec<IntVec>")]
pub struct Sublattice {
    basis: Vec<IntVec>,
    det: i64,
    // adj(basisᵀ), row-major.
    adj: Vec<Vec<i128>>,
}

impl Sublattice {
    pub fn new(basis: Vec<IntVec>) -> Result<Self, LatticeError> {
        let d = basis.len();
        if !(2..=3).contains(&d) {
            return Err(LatticeError::UnsupportedDimension(d));
        }
        if basis.iter().any(|b| b.dim() != d) {
            return Err(LatticeError::DimensionMismatch { expected: d, found: basis[0].dim() });
        }
        // transpose: column k of the matrix is basis[k].
        let t: Vec<Vec<i128>> =
            (0..d).map(|r| (0..d).map(|c| basis[c].get(r) as i128).collect()).collect();
        let det = determinant(&t);
        if det == 0 {
            return Err(LatticeError::Singular);
        }
        let det = i64::try_from(det).map_err(|_| LatticeError::Overflow)?;
        let adj = adjugate(&t);
        Ok(Self { basis, det, adj })
    }

    pub fn standard(dim: usize) -> Self {
        Self::new((0..dim).map(|k| IntVec::unit(dim, k)).collect()).expect("identity basis")
    }

    /// `{(a, b) : a + b even}`, index 2 in ℤ².
    pub fn even_sum() -> Self {
        Self::new(vec![IntVec::xy(1, 1), IntVec::xy(1, -1)]).expect("nonsingular")
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        let basis = rows.iter().map(|r| IntVec::try_new(r)).collect::<Result<Vec<_>, _>>()?;
        Self::new(basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    /// `[ℤ^d : L] = |det|`.
    pub fn index(&self) -> i64 {
        self.det.abs()
    }

    /// `mL`.
    pub fn scaled(&self, m: i64) -> Result<Self, LatticeError> {
        if m == 0 {
            return Err(LatticeError::Singular);
        }
        let basis = self
            .basis
            .iter()
            .map(|b| b.checked_scale(m).ok_or(LatticeError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(basis)
    }

    /// Integral coordinates of `v` in the basis, if `v ∈ L`.
    pub fn coordinates(&self, v: &IntVec) -> Result<Option<Vec<i64>>, LatticeError> {
        self.check_dim(v)?;
        let det = self.det as i128;
        let mut out = Vec::with_capacity(self.dim());
        for row in &self.adj {
            let num: i128 = row.iter().zip(v.coords()).map(|(&a, &c)| a * c as i128).sum();
            if num % det != 0 {
                return Ok(None);
            }
            out.push(i64::try_from(num / det).map_err(|_| LatticeError::Overflow)?);
        }
        Ok(Some(out))
    }

    pub fn contains(&self, v: &IntVec) -> Result<bool, LatticeError> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Membership without the dimension check; callers guarantee `v.dim() == self.dim()`.
    #[inline]
    pub(crate) fn holds(&self, v: &IntVec) -> bool {
        let det = self.det as i128;
        self.adj
            .iter()
            .all(|row| row.iter().zip(v.coords()).map(|(&a, &c)| a * c as i128).sum::<i128>() % det == 0)
    }

    /// Membership in `L⁺ = L ∩ ℕ^d`.
    pub fn contains_nonneg(&self, v: &IntVec) -> bool {
        v.dim() == self.dim() && v.is_nonneg() && self.holds(v)
    }

    /// Hermite basis `[(a, b), (0, d)]` with `a, d > 0` and `0 ≤ b < d` (2-D only).
    pub fn hermite_basis(&self) -> [IntVec; 2] {
        assert_eq!(self.dim(), 2, "hermite basis is implemented for planar lattices");
        hermite_2d(&self.basis).expect("full-rank basis")
    }

    /// Canonical representative of `v + L` in `[0, a) × [0, d)` (2-D only).
    pub fn reduce(&self, v: &IntVec) -> IntVec {
        let [u1, u2] = self.hermite_basis();
        reduce_with(&u1, &u2, v)
    }

    /// The planar lattice spanned by `gens`, in Hermite form; fails unless they span rank 2.
    pub fn generated_by(gens: &[IntVec]) -> Result<Self, LatticeError> {
        if let Some(g) = gens.iter().find(|g| g.dim() != 2) {
            return Err(LatticeError::DimensionMismatch { expected: 2, found: g.dim() });
        }
        let mut rows: Vec<IntVec> = gens.iter().copied().filter(|g| !g.is_zero()).collect();
        // Euclid down the first column until one row carries the gcd.
        let mut pivot: Option<IntVec> = None;
        loop {
            rows.retain(|r| !r.is_zero());
            let Some(i) = (0..rows.len()).filter(|&i| rows[i].x() != 0).min_by_key(|&i| rows[i].x().abs()) else {
                break;
            };
            let p = rows.swap_remove(i);
            if rows.iter().all(|r| r.x() == 0) {
                pivot = Some(p);
                break;
            }
            for r in rows.iter_mut() {
                let q = Integer::div_floor(&r.x(), &p.x());
                *r = r.checked_sub(&p.checked_scale(q).ok_or(LatticeError::Overflow)?).ok_or(LatticeError::Overflow)?;
            }
            rows.push(p);
        }
        let d = rows.iter().fold(0i64, |acc, r| acc.gcd(&r.y()));
        match pivot {
            Some(p) if d != 0 => Self::new(vec![p, IntVec::xy(0, d)]).map(|l| {
                let [u1, u2] = l.hermite_basis();
                Self::new(vec![u1, u2]).expect("nonsingular")
            }),
            _ => Err(LatticeError::Singular),
        }
    }

    pub fn residues(&self) -> ResidueSystem {
        ResidueSystem::new(self)
    }

    fn check_dim(&self, v: &IntVec) -> Result<(), LatticeError> {
        if v.dim() != self.dim() {
            return Err(LatticeError::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        Ok(())
    }
}

impl TryFrom<Vec<IntVec>> for Sublattice {
    type Error = LatticeError;
    fn try_from(basis: Vec<IntVec>) -> Result<Self, Self::Error> {
        Sublattice::new(basis)
    }
}

impl From<Sublattice> for Vec<IntVec> {
    fn from(l: Sublattice) -> Self {
        l.basis
    }
}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sublattice{:?}", self.basis)
    }
}

/// Canonical coset arithmetic for `ℤ²/L`, with the Hermite basis cached.
///
/// Residues are encoded as dense indices in `0..index()`.
#[derive(Clone, Debug)]
pub struct ResidueSystem {
    u1: IntVec,
    u2: IntVec,
}

impl ResidueSystem {
    pub fn new(lattice: &Sublattice) -> Self {
        let [u1, u2] = lattice.hermite_basis();
        Self { u1, u2 }
    }

    pub fn index(&self) -> usize {
        (self.u1.x() * self.u2.y()) as usize
    }

    #[inline]
    pub fn reduce(&self, v: &IntVec) -> IntVec {
        reduce_with(&self.u1, &self.u2, v)
    }

    #[inline]
    pub fn class(&self, v: &IntVec) -> usize {
        let r = self.reduce(v);
        (r.x() * self.u2.y() + r.y()) as usize
    }

    /// Representative of a class index.
    pub fn representative(&self, class: usize) -> IntVec {
        let d = self.u2.y() as usize;
        IntVec::xy((class / d) as i64, (class % d) as i64)
    }

    pub fn classes(&self) -> impl Iterator<Item = usize> {
        0..self.index()
    }
}

fn reduce_with(u1: &IntVec, u2: &IntVec, v: &IntVec) -> IntVec {
    let k = Integer::div_floor(&v.x(), &u1.x());
    let w = *v - k * *u1;
    let j = Integer::div_floor(&w.y(), &u2.y());
    w - j * *u2
}

fn hermite_2d(basis: &[IntVec]) -> Option<[IntVec; 2]> {
    let (mut r1, mut r2) = (basis[0], basis[1]);
    // Euclid on the first column.
    while r2.x() != 0 {
        let q = Integer::div_floor(&r1.x(), &r2.x());
        let t = r1 - q * r2;
        r1 = r2;
        r2 = t;
    }
    if r1.x() < 0 {
        r1 = -r1;
    }
    if r2.y() < 0 {
        r2 = -r2;
    }
    if r1.x() == 0 || r2.y() == 0 {
        return None;
    }
    let k = Integer::div_floor(&r1.y(), &r2.y());
    r1 = r1 - k * r2;
    Some([r1, r2])
}

fn determinant(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        n => unreachable!("determinant of {n}x{n}"),
    }
}

fn adjugate(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 2 {
        return vec![vec![m[1][1], -m[0][1]], vec![-m[1][0], m[0][0]]];
    }
    let minor = |r: usize, c: usize| -> i128 {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
    };
    // adj = transpose of the cofactor matrix.
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    sign * minor(j, i)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_lattice_contains_everything() {
        let z2 = Sublattice::standard(2);
        assert!(z2.contains(&IntVec::xy(3, -5)).unwrap());
    }

    #[test]
    fn scaled_lattice_tests_divisibility() {
        let six = Sublattice::standard(2).scaled(6).unwrap();
        assert!(six.contains(&IntVec::xy(6, -12)).unwrap());
        assert!(!six.contains(&IntVec::xy(6, 1)).unwrap());
        assert_eq!(six.index(), 36);
    }

    #[test]
    fn even_sum_lattice() {
        let l = Sublattice::even_sum();
        assert!(l.contains(&IntVec::xy(2, 0)).unwrap());
        assert!(!l.contains(&IntVec::xy(1, 0)).unwrap());
        assert_eq!(l.coordinates(&IntVec::xy(2, 0)).unwrap(), Some(vec![1, 1]));
        assert_eq!(l.index(), 2);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let l = Sublattice::standard(2);
        assert!(matches!(
            l.contains(&IntVec::xyz(0, 0, 0)),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn singular_basis_rejected() {
        assert!(matches!(
            Sublattice::new(vec![IntVec::xy(1, 2), IntVec::xy(2, 4)]),
            Err(LatticeError::Singular)
        ));
    }

    #[test]
    fn three_dimensional_membership() {
        let l = Sublattice::new(vec![IntVec::xyz(2, 0, 0), IntVec::xyz(1, 1, 0), IntVec::xyz(0, 0, 3)])
            .unwrap();
        assert!(l.contains(&IntVec::xyz(3, 1, 6)).unwrap());
        assert!(!l.contains(&IntVec::xyz(1, 0, 0)).unwrap());
        assert!(!l.contains(&IntVec::xyz(0, 0, 1)).unwrap());
    }

    #[test]
    fn hermite_basis_is_canonical() {
        let l = Sublattice::new(vec![IntVec::xy(3, 1), IntVec::xy(1, 2)]).unwrap();
        let [u1, u2] = l.hermite_basis();
        assert_eq!(u2.x(), 0);
        assert_eq!(u1.x() * u2.y(), l.index());
        assert!(0 <= u1.y() && u1.y() < u2.y());
    }

    fn basis2() -> impl Strategy<Value = Sublattice> {
        (-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6)
            .prop_filter_map("singular", |(a, b, c, d)| {
                Sublattice::new(vec![IntVec::xy(a, b), IntVec::xy(c, d)]).ok()
            })
    }

    proptest! {
        #[test]
        fn reduce_is_a_canonical_coset_representative(l in basis2(), x in -40i64..40, y in -40i64..40) {
            let v = IntVec::xy(x, y);
            let r = l.reduce(&v);
            prop_assert!(l.contains(&(v - r)).unwrap());
            // representatives of the same class coincide
            let shifted = v + 3 * l.basis()[0] - 2 * l.basis()[1];
            prop_assert_eq!(l.reduce(&shifted), r);
            let rs = l.residues();
            prop_assert!(rs.class(&v) < rs.index());
            prop_assert_eq!(rs.representative(rs.class(&v)), r);
        }

        #[test]
        fn membership_matches_integer_combination(l in basis2(), a in -5i64..5, b in -5i64..5) {
            let v = a * l.basis()[0] + b * l.basis()[1];
            prop_assert_eq!(l.coordinates(&v).unwrap(), Some(vec![a, b]));
        }
    }

    #[test]
    fn span_of_periods() {
        let l = Sublattice::generated_by(&[IntVec::xy(6, 0), IntVec::xy(0, 6), IntVec::xy(6, -6), IntVec::xy(12, 6)]).unwrap();
        assert_eq!(l.hermite_basis(), [IntVec::xy(6, 0), IntVec::xy(0, 6)]);
        let l = Sublattice::generated_by(&[IntVec::xy(4, 2), IntVec::xy(6, 3), IntVec::xy(0, 4)]).unwrap();
        assert_eq!(l.hermite_basis(), [IntVec::xy(2, 1), IntVec::xy(0, 4)]);
        assert!(Sublattice::generated_by(&[IntVec::xy(2, 2), IntVec::xy(3, 3)]).is_err());
    }
}
