//! Ruleset axiom checks: pointedness by exact Fourier–Motzkin elimination and
//! the per-axis tangent-cone surrogate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Ruleset;
use crate::lattice::IntVec;

/// A functional `φ` with `φ_k ≥ 1` and `φ·γ ≥ 1` for every move.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointednessWitness {
    phi: Vec<BigRational>,
    weights: IntVec,
}

impl PointednessWitness {
    /// Wraps an integer functional; `None` if some coordinate is below 1.
    pub fn from_weights(weights: IntVec) -> Option<Self> {
        if weights.coords().iter().any(|&w| w < 1) {
            return None;
        }
        let phi = weights.coords().iter().map(|&w| BigRational::from_integer(w.into())).collect();
        Some(Self { phi, weights })
    }

    fn from_phi(phi: Vec<BigRational>) -> Option<Self> {
        let lcm = phi.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let w: Option<Vec<i64>> = phi.iter().map(|q| (q.numer() * (&lcm / q.denom())).to_i64()).collect();
        Some(Self { phi, weights: IntVec::new(&w?) })
    }

    /// The rational functional found by elimination.
    pub fn phi(&self) -> &[BigRational] {
        &self.phi
    }

    /// `φ` scaled to integers; still satisfies both inequality families.
    pub fn weights(&self) -> IntVec {
        self.weights
    }

    /// Integer level of a position.
    #[inline]
    pub fn level(&self, p: &IntVec) -> i64 {
        self.weights.dot(p)
    }

    /// Independent re-check against a ruleset.
    pub fn certifies(&self, rs: &Ruleset) -> bool {
        self.weights.dim() == rs.dim()
            && self.weights.coords().iter().all(|&w| w >= 1)
            && rs.moves().all(|g| self.weights.dot(g) >= 1)
    }

    /// `min φ·γ` over the moves (integer weights).
    pub fn min_pairing(&self, rs: &Ruleset) -> Option<(i64, Vec<IntVec>)> {
        let min = rs.moves().map(|g| self.weights.dot(g)).min()?;
        Some((min, rs.moves().filter(|g| self.weights.dot(g) == min).copied().collect()))
    }
}

impl fmt::Display for PointednessWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, q) in self.phi.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, ")")
    }
}

/// Farkas certificate: nonnegative weights with `Σ y_γ γ + Σ z_k e_k = 0`
/// and `Σ y + Σ z > 0`, so no `φ` can satisfy every inequality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Infeasibility {
    pub move_weights: Vec<(IntVec, BigRational)>,
    pub axis_weights: Vec<(usize, BigRational)>,
}

impl Infeasibility {
    pub fn verify(&self, dim: usize) -> bool {
        let mut sum = vec![BigRational::zero(); dim];
        let mut total = BigRational::zero();
        for (g, y) in &self.move_weights {
            if y.is_negative() || g.dim() != dim {
                return false;
            }
            for k in 0..dim {
                sum[k] += y * BigRational::from_integer(g.get(k).into());
            }
            total += y;
        }
        for (k, z) in &self.axis_weights {
            if z.is_negative() || *k >= dim {
                return false;
            }
            sum[*k] += z;
            total += z;
        }
        sum.iter().all(Zero::is_zero) && total.is_positive()
    }
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, y) in &self.move_weights {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{y}·{g}")?;
        }
        for (k, z) in &self.axis_weights {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{z}·e{k}")?;
        }
        write!(f, " = 0")
    }
}

pub type Pointedness = Result<PointednessWitness, Infeasibility>;

#[derive(Clone, Debug)]
struct Row {
    coef: Vec<BigRational>,
    rhs: BigRational,
    // Nonnegative combination of the original rows that produced this one.
    mult: BTreeMap<usize, BigRational>,
}

impl Row {
    fn combine(&self, a: &BigRational, other: &Row, b: &BigRational) -> Row {
        let coef = self.coef.iter().zip(&other.coef).map(|(x, y)| x * a + y * b).collect();
        let rhs = &self.rhs * a + &other.rhs * b;
        let mut mult = BTreeMap::new();
        for (k, v) in &self.mult {
            *mult.entry(*k).or_insert_with(BigRational::zero) += v * a;
        }
        for (k, v) in &other.mult {
            *mult.entry(*k).or_insert_with(BigRational::zero) += v * b;
        }
        Row { coef, rhs, mult }
    }

    /// Direction key and normalized right-hand side for dedupe.
    fn normalized(&self) -> Option<(Vec<BigRational>, BigRational)> {
        let scale = self.coef.iter().map(|c| c.abs()).max()?;
        if scale.is_zero() {
            return None;
        }
        Some((self.coef.iter().map(|c| c / &scale).collect(), &self.rhs / &scale))
    }
}

/// Finds `φ` with `φ_k ≥ 1` and `φ·γ ≥ 1` for all moves, or a certificate that none exists.
pub fn check_pointedness(rs: &Ruleset) -> Pointedness {
    let d = rs.dim();
    let moves: Vec<IntVec> = rs.moves().copied().collect();
    let one = BigRational::one();
    let mut rows: Vec<Row> = moves
        .iter()
        .enumerate()
        .map(|(i, g)| Row {
            coef: g.coords().iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            rhs: one.clone(),
            mult: BTreeMap::from([(i, one.clone())]),
        })
        .collect();
    for k in 0..d {
        let mut coef = vec![BigRational::zero(); d];
        coef[k] = one.clone();
        rows.push(Row { coef, rhs: one.clone(), mult: BTreeMap::from([(moves.len() + k, one.clone())]) });
    }

    let certificate = |row: &Row| Infeasibility {
        move_weights: row.mult.iter().filter(|(k, _)| **k < moves.len()).map(|(k, v)| (moves[*k], v.clone())).collect(),
        axis_weights: row.mult.iter().filter(|(k, _)| **k >= moves.len()).map(|(k, v)| (k - moves.len(), v.clone())).collect(),
    };

    let mut stages: Vec<(usize, Vec<Row>)> = Vec::new();
    let mut live: Vec<usize> = (0..d).collect();
    loop {
        rows = match prune(rows) {
            Ok(r) => r,
            Err(bad) => return Err(certificate(&bad)),
        };
        if live.is_empty() {
            break;
        }
        // Eliminate the variable producing the fewest new rows.
        let (pick, _) = live
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let pos = rows.iter().filter(|r| r.coef[v].is_positive()).count();
                let neg = rows.iter().filter(|r| r.coef[v].is_negative()).count();
                (i, pos * neg)
            })
            .min_by_key(|&(i, cost)| (cost, i))
            .unwrap();
        let var = live.remove(pick);
        let (pos, rest): (Vec<Row>, Vec<Row>) = rows.iter().cloned().partition(|r| r.coef[var].is_positive());
        let (neg, zero): (Vec<Row>, Vec<Row>) = rest.into_iter().partition(|r| r.coef[var].is_negative());
        let mut next = zero;
        for p in &pos {
            for n in &neg {
                let a = n.coef[var].abs();
                let b = p.coef[var].clone();
                next.push(p.combine(&a, n, &b));
            }
        }
        stages.push((var, rows));
        rows = next;
    }

    let mut value: Vec<Option<BigRational>> = vec![None; d];
    for (var, system) in stages.iter().rev() {
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for r in system {
            let c = &r.coef[*var];
            if c.is_zero() {
                continue;
            }
            let mut slack = r.rhs.clone();
            for (k, ck) in r.coef.iter().enumerate() {
                if k != *var && !ck.is_zero() {
                    slack -= ck * value[k].as_ref().expect("later variables are fixed");
                }
            }
            let bound = slack / c;
            if c.is_positive() {
                lower = Some(lower.map_or(bound.clone(), |l: BigRational| l.max(bound)));
            } else {
                upper = Some(upper.map_or(bound.clone(), |u: BigRational| u.min(bound)));
            }
        }
        let lo = lower.expect("φ_k ≥ 1 always bounds from below");
        let ceil = lo.ceil();
        let pick = match &upper {
            Some(u) if ceil > *u => lo,
            _ => ceil,
        };
        value[*var] = Some(pick);
    }
    let phi: Vec<BigRational> = value.into_iter().map(|v| v.expect("every variable fixed")).collect();
    let w = PointednessWitness::from_phi(phi).expect("witness weights fit in i64");
    debug_assert!(w.certifies(rs));
    Ok(w)
}

/// Drops trivial rows and keeps only the tightest row per direction; a row
/// `0 ≥ b` with `b > 0` is returned as the contradiction.
fn prune(rows: Vec<Row>) -> Result<Vec<Row>, Row> {
    let mut best: BTreeMap<Vec<BigRational>, (BigRational, Row)> = BTreeMap::new();
    for r in rows {
        match r.normalized() {
            None => {
                if r.rhs.is_positive() {
                    return Err(r);
                }
            }
            Some((key, rhs)) => match best.get(&key) {
                Some((old, _)) if *old >= rhs => {}
                _ => {
                    best.insert(key, (rhs, r));
                }
            },
        }
    }
    Ok(best.into_values().map(|(_, r)| r).collect())
}

/// Per-axis result of the tangent-cone surrogate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxisReport {
    pub axis: usize,
    pub witness: Option<IntVec>,
}

/// Surrogate for the tangent-cone axiom: for each axis `k` some move has
/// `γ_k > 0` and `γ_j ≤ 0` for `j ≠ k`. Advisory only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangentConeReport {
    pub axes: Vec<AxisReport>,
}

impl TangentConeReport {
    pub fn passes(&self) -> bool {
        self.axes.iter().all(|a| a.witness.is_some())
    }
}

impl fmt::Display for TangentConeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axes {
            match a.witness {
                Some(g) => writeln!(f, "axis {}: pass, witness {g}", a.axis)?,
                None => writeln!(f, "axis {}: FAIL", a.axis)?,
            }
        }
        Ok(())
    }
}

pub fn check_tangent_cone(rs: &Ruleset) -> TangentConeReport {
    let d = rs.dim();
    let axes = (0..d)
        .map(|k| AxisReport {
            axis: k,
            witness: rs
                .moves()
                .find(|g| g.get(k) > 0 && (0..d).all(|j| j == k || g.get(j) <= 0))
                .copied(),
        })
        .collect();
    TangentConeReport { axes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs(moves: &[(i64, i64, i64)]) -> Ruleset {
        Ruleset::new(3, moves.iter().map(|&m| IntVec::from(m))).unwrap()
    }

    #[test]
    fn trivial_cases() {
        let w = check_pointedness(&rs(&[(1, 1, 0)])).unwrap();
        assert_eq!(w.weights(), IntVec::xyz(1, 1, 1));
        let bad = check_pointedness(&rs(&[(1, 0, 0), (-1, 0, 0)])).unwrap_err();
        assert!(bad.verify(3));
        assert_eq!(bad.move_weights.len(), 2);
    }

    #[test]
    fn infeasible_with_axis_rows() {
        // (-1,-1) can only be positive if some φ_k is negative.
        let r = Ruleset::new(2, [IntVec::xy(-1, -1)]).unwrap();
        let c = check_pointedness(&r).unwrap_err();
        assert!(c.verify(2));
        assert!(!c.axis_weights.is_empty());
    }

    #[test]
    fn needs_fractional_back_substitution() {
        // 2φ₁ − φ₂ ≥ 1, −3φ₁ + 2φ₂ ≥ 1 forces 2φ₁ − 1 ≥ φ₂ ≥ (1 + 3φ₁)/2.
        let r = Ruleset::new(2, [IntVec::xy(2, -1), IntVec::xy(-3, 2)]).unwrap();
        let w = check_pointedness(&r).unwrap();
        assert!(w.certifies(&r));
    }

    #[test]
    fn tangent_cone_surrogate() {
        let r = rs(&[(1, 1, 0)]);
        assert!(check_tangent_cone(&r).axes.iter().all(|a| a.witness.is_none()));
        let r = rs(&[(5, -2, 0), (-3, 4, 0), (-1, -1, 1), (1, 1, 0)]);
        let rep = check_tangent_cone(&r);
        assert!(rep.passes());
        assert_eq!(rep.axes[0].witness, Some(IntVec::xyz(5, -2, 0)));
        assert_eq!(rep.axes[1].witness, Some(IntVec::xyz(-3, 4, 0)));
        assert_eq!(rep.axes[2].witness, Some(IntVec::xyz(-1, -1, 1)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        // Either answer must be self-certifying.
        #[test]
        fn elimination_is_certified(moves in proptest::collection::vec((-4i64..5, -4i64..5, -2i64..3), 1..9)) {
            let moves: Vec<IntVec> = moves.into_iter().map(IntVec::from).filter(|g| !g.is_zero()).collect();
            prop_assume!(!moves.is_empty());
            let r = Ruleset::new(3, moves).unwrap();
            match check_pointedness(&r) {
                Ok(w) => prop_assert!(w.certifies(&r)),
                Err(c) => prop_assert!(c.verify(3)),
            }
        }

        // Agreement with a brute-force search over small integer functionals.
        #[test]
        fn agrees_with_grid_search(moves in proptest::collection::vec((-3i64..4, -3i64..4), 1..6)) {
            let moves: Vec<IntVec> = moves.into_iter().map(IntVec::from).filter(|g| !g.is_zero()).collect();
            prop_assume!(!moves.is_empty());
            let r = Ruleset::new(2, moves.clone()).unwrap();
            let brute = (1..=40i64).any(|a| (1..=40i64).any(|b| moves.iter().all(|g| a * g.x() + b * g.y() >= 1)));
            prop_assert_eq!(check_pointedness(&r).is_ok(), brute);
        }
    }
}
