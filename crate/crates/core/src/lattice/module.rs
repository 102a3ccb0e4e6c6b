use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{box_points, IntVec, LatticeError, PointSet, Sublattice};

/// An `L⁺`-module `⋃ (g + L⁺)` inside `L⁺`, stored by its minimal generators.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ModuleIdeal {
    ambient: Sublattice,
    generators: Vec<IntVec>,
}

impl ModuleIdeal {
    /// Builds the module generated by `gens`; redundant generators are dropped.
    pub fn new(ambient: Sublattice, gens: impl IntoIterator<Item = IntVec>) -> Result<Self, LatticeError> {
        let gens: BTreeSet<IntVec> = gens.into_iter().collect();
        if gens.is_empty() {
            return Err(LatticeError::Invalid("a module needs at least one generator".into()));
        }
        for g in &gens {
            if g.dim() != ambient.dim() {
                return Err(LatticeError::DimensionMismatch { expected: ambient.dim(), found: g.dim() });
            }
            if !ambient.contains_nonneg(g) {
                return Err(LatticeError::Invalid(format!("generator {g} is not in L⁺")));
            }
        }
        let generators = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && ambient.contains_nonneg(&(**g - *h))))
            .copied()
            .collect();
        Ok(Self { ambient, generators })
    }

    /// `L⁺` itself.
    pub fn whole(ambient: Sublattice) -> Self {
        let zero = IntVec::zero(ambient.dim());
        Self { ambient, generators: vec![zero] }
    }

    pub fn ambient(&self) -> &Sublattice {
        &self.ambient
    }

    /// Minimal generators, lexicographically sorted.
    pub fn generators(&self) -> &[IntVec] {
        &self.generators
    }

    pub fn contains(&self, v: &IntVec) -> bool {
        v.dim() == self.ambient.dim()
            && self.ambient.contains_nonneg(v)
            && self.generators.iter().any(|g| v.dominates(g) && self.ambient.holds(&(*v - *g)))
    }

    pub fn is_generator(&self, v: &IntVec) -> bool {
        self.generators.binary_search(v).is_ok()
    }

    /// True when `L⁺ ∖ M` is finite, i.e. `M` meets every coordinate axis.
    pub fn has_finite_complement(&self) -> bool {
        let d = self.ambient.dim();
        (0..d).all(|k| self.generators.iter().any(|g| (0..d).all(|j| j == k || g.get(j) == 0)))
    }

    /// The finite set `L⁺ ∖ M`, or `None` if it is infinite.
    pub fn complement(&self) -> Option<Vec<IntVec>> {
        if !self.has_finite_complement() {
            return None;
        }
        let d = self.ambient.dim();
        let hi: Vec<i64> = (0..d).map(|k| self.generators.iter().map(|g| g.get(k)).max().unwrap_or(0)).collect();
        Some(
            box_points(&IntVec::zero(d), &IntVec::new(&hi))
                .into_iter()
                .filter(|p| self.ambient.holds(p) && !self.contains(p))
                .collect(),
        )
    }
}

impl PointSet for ModuleIdeal {
    fn contains_point(&self, p: &IntVec) -> bool {
        self.contains(p)
    }
}

/// Minimal elements of `set` under `x ≼ y ⇔ y − x ∈ L⁺`, searched in the box `[lo, hi]`.
///
/// The caller guarantees that `set` lies in `lo + ℕ^d`. A minimal element on an
/// upper face of the box means the box may be hiding further generators, and is
/// reported as `BoxTooSmall`.
pub fn minimal_elements(
    set: &impl PointSet,
    order: &Sublattice,
    lo: &IntVec,
    hi: &IntVec,
) -> Result<Vec<IntVec>, LatticeError> {
    if lo.dim() != order.dim() || hi.dim() != order.dim() {
        return Err(LatticeError::DimensionMismatch { expected: order.dim(), found: lo.dim() });
    }
    let mut pts: Vec<IntVec> = box_points(lo, hi).into_iter().filter(|p| set.contains_point(p)).collect();
    pts.sort_by_key(|p| (p.coords().iter().sum::<i64>(), *p));
    let mut found: Vec<IntVec> = Vec::new();
    for p in pts {
        if found.iter().any(|g| order.contains_nonneg(&(p - *g))) {
            continue;
        }
        if p.coords().iter().zip(hi.coords()).any(|(a, b)| a == b) {
            return Err(LatticeError::BoxTooSmall { point: p });
        }
        found.push(p);
    }
    found.sort();
    Ok(found)
}

/// `B″`: minimal generators of `L⁺ ∖ {0}`.
pub fn nonzero_generators(lattice: &Sublattice) -> Vec<IntVec> {
    let d = lattice.dim();
    let top = IntVec::new(&vec![lattice.index() + 1; d]);
    let set = |p: &IntVec| !p.is_zero() && lattice.holds(p);
    minimal_elements(&set, lattice, &IntVec::zero(d), &top).expect("det·e_k ∈ L bounds every generator")
}

/// `B′`: minimal `L⁺`-module generators of `⋂ (β_i + L⁺)`, for `β_i ∈ L`.
pub fn translate_generators(lattice: &Sublattice, betas: &[IntVec]) -> Result<Vec<IntVec>, LatticeError> {
    let d = lattice.dim();
    if betas.is_empty() {
        return Err(LatticeError::Invalid("no translates given".into()));
    }
    for b in betas {
        if b.dim() != d {
            return Err(LatticeError::DimensionMismatch { expected: d, found: b.dim() });
        }
        if !lattice.holds(b) {
            return Err(LatticeError::Invalid(format!("{b} is not in L")));
        }
    }
    let lo: Vec<i64> = (0..d).map(|k| betas.iter().map(|b| b.get(k)).max().unwrap()).collect();
    let lo = IntVec::new(&lo);
    let span = IntVec::new(&vec![lattice.index() + 1; d]);
    let set = |p: &IntVec| lattice.holds(p) && betas.iter().all(|b| p.dominates(b));
    minimal_elements(&set, lattice, &lo, &(lo + span))
}

/// `F`: points of `ℕ²` lying above no nonzero element of `mL⁺`.
///
/// Every class of `ℤ²/mL` has a representative in `F`; this is checked.
pub fn enumerate_f(lattice: &Sublattice, m: i64) -> Result<Vec<IntVec>, LatticeError> {
    if lattice.dim() != 2 {
        return Err(LatticeError::UnsupportedDimension(lattice.dim()));
    }
    if m < 1 {
        return Err(LatticeError::Invalid(format!("scale m = {m} must be positive")));
    }
    let bound = m.checked_mul(lattice.index()).ok_or(LatticeError::Overflow)?;
    let scaled: Vec<IntVec> = nonzero_generators(lattice).iter().map(|g| m * *g).collect();
    let f: Vec<IntVec> = box_points(&IntVec::xy(0, 0), &IntVec::xy(bound - 1, bound - 1))
        .into_iter()
        .filter(|p| !scaled.iter().any(|g| p.dominates(g)))
        .collect();
    let ml = lattice.scaled(m)?.residues();
    let covered: BTreeSet<usize> = f.iter().map(|p| ml.class(p)).collect();
    if covered.len() != ml.index() {
        return Err(LatticeError::Invalid(format!(
            "F covers {} of {} classes of ℤ²/mL",
            covered.len(),
            ml.index()
        )));
    }
    Ok(f)
}
