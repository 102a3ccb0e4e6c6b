//! Position-set expressions.
//!
//! Textual form (whitespace is ignored):
//!
//! ```text
//! set    := "orthant(" vec ")"                      v + ℕ^d
//!         | "coset(" vec (";" vec)+ ";" int ")"    v + m·L, basis rows between
//!         | "finite{" [ "(" vec ")" ("," "(" vec ")")* ] "}"
//!         | "union(" set ("," set)* ")"
//!         | "inter(" set ("," set)* ")"
//!         | "diff(" set "," set ")"
//! vec    := int ("," int)*
//! ```
//!
//! `finite{}` is the empty set and has no fixed dimension.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{IntVec, LatticeError, PointSet, Sublattice};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LatticeSet {
    /// `v + ℕ^d`.
    Orthant(IntVec),
    /// `offset + scale·lattice`.
    Coset { offset: IntVec, lattice: Sublattice, scale: i64 },
    Finite(BTreeSet<IntVec>),
    Union(Vec<LatticeSet>),
    Inter(Vec<LatticeSet>),
    Diff(Box<LatticeSet>, Box<LatticeSet>),
}

impl LatticeSet {
    pub fn empty() -> Self {
        LatticeSet::Finite(BTreeSet::new())
    }

    pub fn orthant(v: IntVec) -> Self {
        LatticeSet::Orthant(v)
    }

    pub fn coset(offset: IntVec, lattice: Sublattice, scale: i64) -> Result<Self, LatticeError> {
        if scale == 0 {
            return Err(LatticeError::Singular);
        }
        if offset.dim() != lattice.dim() {
            return Err(LatticeError::DimensionMismatch { expected: lattice.dim(), found: offset.dim() });
        }
        Ok(LatticeSet::Coset { offset, lattice, scale })
    }

    pub fn finite(points: impl IntoIterator<Item = IntVec>) -> Self {
        LatticeSet::Finite(points.into_iter().collect())
    }

    pub fn union(mut parts: Vec<LatticeSet>) -> Self {
        match parts.len() {
            0 => LatticeSet::empty(),
            1 => parts.pop().expect("one part"),
            _ => LatticeSet::Union(parts),
        }
    }

    pub fn inter(parts: Vec<LatticeSet>) -> Self {
        LatticeSet::Inter(parts)
    }

    pub fn diff(a: LatticeSet, b: LatticeSet) -> Self {
        LatticeSet::Diff(Box::new(a), Box::new(b))
    }

    /// The plane `{p ∈ ℕ^d : p_last = c}` (for `c ≥ 0`).
    pub fn board_slice(dim: usize, c: i64) -> Self {
        let mut lo = vec![0; dim];
        lo[dim - 1] = c;
        let mut hi = lo.clone();
        hi[dim - 1] = c + 1;
        LatticeSet::diff(
            LatticeSet::Orthant(IntVec::new(&lo)),
            LatticeSet::Orthant(IntVec::new(&hi)),
        )
    }

    /// `true` when the expression syntactically denotes the empty set.
    pub fn is_trivially_empty(&self) -> bool {
        match self {
            LatticeSet::Finite(s) => s.is_empty(),
            LatticeSet::Union(parts) => parts.iter().all(LatticeSet::is_trivially_empty),
            LatticeSet::Inter(parts) => parts.iter().any(LatticeSet::is_trivially_empty),
            LatticeSet::Diff(a, _) => a.is_trivially_empty(),
            _ => false,
        }
    }

    /// Common dimension of all atoms, `None` if the expression has no sized atom.
    pub fn dim(&self) -> Result<Option<usize>, LatticeError> {
        let merge = |acc: Option<usize>, d: Option<usize>| match (acc, d) {
            (Some(a), Some(b)) if a != b => Err(LatticeError::DimensionMismatch { expected: a, found: b }),
            (a, b) => Ok(a.or(b)),
        };
        match self {
            LatticeSet::Orthant(v) => Ok(Some(v.dim())),
            LatticeSet::Coset { lattice, .. } => Ok(Some(lattice.dim())),
            LatticeSet::Finite(s) => {
                let mut acc = None;
                for p in s {
                    acc = merge(acc, Some(p.dim()))?;
                }
                Ok(acc)
            }
            LatticeSet::Union(parts) | LatticeSet::Inter(parts) => {
                let mut acc = None;
                for p in parts {
                    acc = merge(acc, p.dim()?)?;
                }
                Ok(acc)
            }
            LatticeSet::Diff(a, b) => merge(a.dim()?, b.dim()?),
        }
    }

    /// Exact membership test.
    pub fn contains(&self, p: &IntVec) -> Result<bool, LatticeError> {
        if let Some(d) = self.dim()? {
            if d != p.dim() {
                return Err(LatticeError::DimensionMismatch { expected: d, found: p.dim() });
            }
        }
        Ok(self.holds(p))
    }

    /// Membership with dimensions already validated.
    pub(crate) fn holds(&self, p: &IntVec) -> bool {
        match self {
            LatticeSet::Orthant(v) => p.dominates(v),
            LatticeSet::Coset { offset, lattice, scale } => {
                let d = *p - *offset;
                if d.coords().iter().any(|c| c % scale != 0) {
                    return false;
                }
                let mut q = d.coords().to_vec();
                q.iter_mut().for_each(|c| *c /= scale);
                lattice.holds(&IntVec::new(&q))
            }
            LatticeSet::Finite(s) => s.contains(p),
            LatticeSet::Union(parts) => parts.iter().any(|s| s.holds(p)),
            LatticeSet::Inter(parts) => parts.iter().all(|s| s.holds(p)),
            LatticeSet::Diff(a, b) => a.holds(p) && !b.holds(p),
        }
    }
}

impl PointSet for LatticeSet {
    fn contains_point(&self, p: &IntVec) -> bool {
        self.holds(p)
    }
}

fn write_vec(f: &mut fmt::Formatter<'_>, v: &IntVec) -> fmt::Result {
    for (k, c) in v.coords().iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, parts: &[LatticeSet]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (k, s) in parts.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{s}")?;
    }
    write!(f, ")")
}

impl fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSet::Orthant(v) => {
                write!(f, "orthant(")?;
                write_vec(f, v)?;
                write!(f, ")")
            }
            LatticeSet::Coset { offset, lattice, scale } => {
                write!(f, "coset(")?;
                write_vec(f, offset)?;
                for b in lattice.basis() {
                    write!(f, ";")?;
                    write_vec(f, b)?;
                }
                write!(f, ";{scale})")
            }
            LatticeSet::Finite(s) => {
                write!(f, "finite{{")?;
                for (k, p) in s.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
            // the grammar has no empty union
            LatticeSet::Union(parts) if parts.is_empty() => write!(f, "finite{{}}"),
            LatticeSet::Union(parts) => write_list(f, "union", parts),
            LatticeSet::Inter(parts) => write_list(f, "inter", parts),
            LatticeSet::Diff(a, b) => write!(f, "diff({a},{b})"),
        }
    }
}

impl FromStr for LatticeSet {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { src: &compact, at: 0 };
        let set = p.set()?;
        if p.at != compact.len() {
            return Err(p.error("trailing input"));
        }
        set.dim()?;
        Ok(set)
    }
}

impl Serialize for LatticeSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LatticeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [char],
    at: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> LatticeError {
        LatticeError::Parse { at: self.at, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.at).copied()
    }

    fn eat(&mut self, c: char) -> Result<(), LatticeError> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> String {
        let start = self.at;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.at += 1;
        }
        self.src[start..self.at].iter().collect()
    }

    fn int(&mut self) -> Result<i64, LatticeError> {
        let start = self.at;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.at += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.at += 1;
        }
        let text: String = self.src[start..self.at].iter().collect();
        text.parse().map_err(|_| LatticeError::Parse { at: start, msg: "expected integer".into() })
    }

    fn vec(&mut self) -> Result<IntVec, LatticeError> {
        let mut c = vec![self.int()?];
        while self.peek() == Some(',') {
            self.at += 1;
            c.push(self.int()?);
        }
        IntVec::try_new(&c)
    }

    fn set(&mut self) -> Result<LatticeSet, LatticeError> {
        let start = self.at;
        let name = self.word();
        match name.as_str() {
            "orthant" => {
                self.eat('(')?;
                let v = self.vec()?;
                self.eat(')')?;
                Ok(LatticeSet::Orthant(v))
            }
            "coset" => {
                self.eat('(')?;
                let mut vecs = vec![self.vec()?];
                let mut scale = None;
                while self.peek() == Some(';') {
                    self.at += 1;
                    let v = self.vec()?;
                    if v.dim() == 1 && self.peek() == Some(')') {
                        scale = Some(v.x());
                    } else {
                        vecs.push(v);
                    }
                }
                self.eat(')')?;
                let scale = scale.ok_or_else(|| self.error("coset needs a trailing scale"))?;
                let offset = vecs.remove(0);
                let lattice = Sublattice::new(vecs)?;
                LatticeSet::coset(offset, lattice, scale)
            }
            "finite" => {
                self.eat('{')?;
                let mut pts = BTreeSet::new();
                if self.peek() != Some('}') {
                    loop {
                        self.eat('(')?;
                        pts.insert(self.vec()?);
                        self.eat(')')?;
                        if self.peek() == Some(',') {
                            self.at += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.eat('}')?;
                Ok(LatticeSet::Finite(pts))
            }
            "union" | "inter" => {
                self.eat('(')?;
                let mut parts = vec![self.set()?];
                while self.peek() == Some(',') {
                    self.at += 1;
                    parts.push(self.set()?);
                }
                self.eat(')')?;
                Ok(if name == "union" { LatticeSet::Union(parts) } else { LatticeSet::Inter(parts) })
            }
            "diff" => {
                self.eat('(')?;
                let a = self.set()?;
                self.eat(',')?;
                let b = self.set()?;
                self.eat(')')?;
                Ok(LatticeSet::diff(a, b))
            }
            "" => Err(self.error("expected a set expression")),
            other => Err(LatticeError::Parse { at: start, msg: format!("unknown set constructor '{other}'") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn published_stair() -> Vec<IntVec> {
        vec![IntVec::xy(0, 0), IntVec::xy(1, 0), IntVec::xy(2, 0), IntVec::xy(0, 1)]
    }

    #[test]
    fn stair_plus_six_lattice() {
        let six = Sublattice::standard(2);
        let s = LatticeSet::union(
            published_stair()
                .into_iter()
                .map(|i| LatticeSet::coset(i, six.clone(), 6).unwrap())
                .collect(),
        );
        assert!(s.contains(&IntVec::xy(7, 6)).unwrap());
        assert!(!s.contains(&IntVec::xy(7, 7)).unwrap());
    }

    #[test]
    fn self_difference_is_empty() {
        let a = LatticeSet::orthant(IntVec::xy(1, 1));
        let d = LatticeSet::diff(a.clone(), a);
        for x in -3..6 {
            for y in -3..6 {
                assert!(!d.contains(&IntVec::xy(x, y)).unwrap());
            }
        }
    }

    #[test]
    fn orthant_membership() {
        let s = LatticeSet::orthant(IntVec::xy(2, 3));
        assert!(!s.contains(&IntVec::xy(2, 2)).unwrap());
        assert!(s.contains(&IntVec::xy(5, 3)).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let s = LatticeSet::orthant(IntVec::xy(0, 0));
        assert!(s.contains(&IntVec::xyz(0, 0, 0)).is_err());
        assert!("union(orthant(0,0),orthant(0,0,0))".parse::<LatticeSet>().is_err());
        // the empty set accepts any dimension
        assert!(!LatticeSet::empty().contains(&IntVec::xyz(1, 2, 3)).unwrap());
    }

    #[test]
    fn grammar_round_trip() {
        let text = "diff(union(orthant(0,0,0),coset(1,0,0;6,0,0;0,6,0;0,0,1;2)),inter(finite{(0,0,0),(1,2,3)},orthant(0,0,1)))";
        let s: LatticeSet = text.parse().unwrap();
        assert_eq!(s.to_string(), text);
        let spaced: LatticeSet = "coset( 0 , 0 ; 6,0 ; 0,6 ; 1 )".parse().unwrap();
        assert!(spaced.contains(&IntVec::xy(12, -6)).unwrap());
        assert_eq!("finite{}".parse::<LatticeSet>().unwrap(), LatticeSet::empty());
    }

    #[test]
    fn parse_errors_are_positioned() {
        for bad in ["orthant(1,2", "coset(0,0;1,0;0,1)", "blob(1)", "finite{(1,2),}", "diff(orthant(0,0))", ""] {
            assert!(bad.parse::<LatticeSet>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn board_slice_selects_one_level() {
        let s = LatticeSet::board_slice(3, 1);
        assert!(s.contains(&IntVec::xyz(4, 5, 1)).unwrap());
        assert!(!s.contains(&IntVec::xyz(4, 5, 0)).unwrap());
        assert!(!s.contains(&IntVec::xyz(4, 5, 2)).unwrap());
    }

    fn atom() -> impl Strategy<Value = LatticeSet> {
        prop_oneof![
            (0i64..30, 0i64..30).prop_map(|(x, y)| LatticeSet::orthant(IntVec::xy(x, y))),
            (0i64..6, 0i64..6, 1i64..5).prop_map(|(x, y, m)| LatticeSet::coset(
                IntVec::xy(x, y),
                Sublattice::even_sum(),
                m
            )
            .unwrap()),
            proptest::collection::btree_set((0i64..50, 0i64..50).prop_map(|(x, y)| IntVec::xy(x, y)), 0..12)
                .prop_map(LatticeSet::Finite),
        ]
    }

    fn expr() -> impl Strategy<Value = LatticeSet> {
        atom().prop_recursive(3, 24, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 1..3).prop_map(LatticeSet::Union),
                proptest::collection::vec(inner.clone(), 1..3).prop_map(LatticeSet::Inter),
                (inner.clone(), inner).prop_map(|(a, b)| LatticeSet::diff(a, b)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn de_morgan_identities_hold_pointwise(a in expr(), b in expr()) {
            let universe = LatticeSet::orthant(IntVec::xy(0, 0));
            let not = |s: &LatticeSet| LatticeSet::diff(universe.clone(), s.clone());
            let lhs1 = not(&LatticeSet::union(vec![a.clone(), b.clone()]));
            let rhs1 = LatticeSet::inter(vec![not(&a), not(&b)]);
            let lhs2 = not(&LatticeSet::inter(vec![a.clone(), b.clone()]));
            let rhs2 = LatticeSet::union(vec![not(&a), not(&b)]);
            let self_diff = LatticeSet::diff(a.clone(), a.clone());
            for x in 0..50 {
                for y in 0..50 {
                    let p = IntVec::xy(x, y);
                    prop_assert_eq!(lhs1.holds(&p), rhs1.holds(&p));
                    prop_assert_eq!(lhs2.holds(&p), rhs2.holds(&p));
                    prop_assert!(!self_diff.holds(&p));
                }
            }
        }

        #[test]
        fn text_form_round_trips(a in expr()) {
            let back: LatticeSet = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
