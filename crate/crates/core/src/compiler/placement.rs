use std::collections::BTreeSet;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::CompilerError;
use crate::lattice::{IntVec, ResidueSystem};
use crate::recurrence::{NorCircuit, RecurrenceSpec, Role, Variant};

/// Gate positions, the scale `m`, the staircase `I` and the halfspace normal `ν`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Placement {
    /// Indexed by circuit vertex.
    pub pos: Vec<IntVec>,
    pub m: i64,
    #[serde(rename = "I")]
    pub stair: Vec<IntVec>,
    pub normal: IntVec,
}

impl Placement {
    pub fn new(pos: Vec<IntVec>, m: i64, stair: Vec<IntVec>, normal: IntVec) -> Result<Self, CompilerError> {
        let pl = Self { pos, m, stair: stair.into_iter().collect::<BTreeSet<_>>().into_iter().collect(), normal };
        pl.validate()?;
        Ok(pl)
    }

    pub fn validate(&self) -> Result<(), CompilerError> {
        let bad = |m: String| Err(CompilerError::Invalid(m));
        if self.m < 1 {
            return bad(format!("m = {} must be positive", self.m));
        }
        if self.normal.dim() != 2 || self.normal.x() < 1 || self.normal.y() < 1 {
            return bad(format!("normal {} must have positive coordinates", self.normal));
        }
        if self.pos.iter().any(|p| p.dim() != 2) {
            return bad("positions must be planar".into());
        }
        if self.stair.is_empty() {
            return bad("I must be nonempty".into());
        }
        for p in &self.stair {
            if p.dim() != 2 || !p.is_nonneg() {
                return bad(format!("{p} is not in ℕ²"));
            }
            for q in [IntVec::xy(p.x() - 1, p.y()), IntVec::xy(p.x(), p.y() - 1)] {
                if q.is_nonneg() && self.stair.binary_search(&q).is_err() {
                    return bad(format!("I is not downward closed: {p} ∈ I but {q} ∉ I"));
                }
            }
        }
        Ok(())
    }
}

/// `{(i,j) : 0 ≤ i ≤ ν₂, 0 ≤ j ≤ ν₁}`.
pub fn stair_for_normal(normal: &IntVec) -> Vec<IntVec> {
    let mut out = Vec::new();
    for i in 0..=normal.y() {
        for j in 0..=normal.x() {
            out.push(IntVec::xy(i, j));
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Status {
    Pass,
    /// Nothing to check for this circuit and variant.
    Vacuous,
    Fail(String),
}

impl Status {
    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail(_))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Vacuous => write!(f, "vacuous"),
            Status::Fail(w) => write!(f, "FAIL {w}"),
        }
    }
}

/// One entry per condition `a`..`i`, plus the strengthened form of (c)
/// that the search aims for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConditionReport {
    pub conditions: Vec<(char, Status)>,
    pub strict_c: Status,
}

impl ConditionReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|(_, s)| !s.is_fail())
    }

    pub fn get(&self, c: char) -> &Status {
        &self.conditions.iter().find(|(k, _)| *k == c).expect("conditions a..i").1
    }

    pub fn failures(&self) -> Vec<char> {
        self.conditions.iter().filter(|(_, s)| s.is_fail()).map(|(c, _)| *c).collect()
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, s) in &self.conditions {
            writeln!(f, "({c}) {s}")?;
        }
        writeln!(f, "(c, strengthened) {}", self.strict_c)
    }
}

/// Residue bookkeeping shared by the checks, the search and the emitter.
pub(crate) struct Residues {
    pub sys: ResidueSystem,
    /// Classes of `I − I`.
    pub stair_diffs: FxHashSet<usize>,
    /// Classes of `I`.
    pub stair: FxHashSet<usize>,
}

impl Residues {
    pub fn new(spec: &RecurrenceSpec, pl: &Placement) -> Result<Self, CompilerError> {
        let sys = spec.lattice().scaled(pl.m)?.residues();
        let stair_diffs = pl.stair.iter().flat_map(|a| pl.stair.iter().map(|b| sys.class(&(*a - *b)))).collect();
        let stair = pl.stair.iter().map(|a| sys.class(a)).collect();
        Ok(Self { sys, stair_diffs, stair })
    }
}

/// `in_{ij}` stands in for `out_j`: their positions agree modulo `mL`.
pub(crate) fn canonical(c: &NorCircuit, v: usize) -> usize {
    match c.role(v) {
        Role::Input(t) => c.output(t % c.width()),
        _ => v,
    }
}

fn name(c: &NorCircuit, v: usize) -> String {
    format!("v{v}[{}]", c.role(v))
}

/// Decides conditions (a)–(i) exactly, reducing every quantifier over `mL`
/// to residue classes.
///
/// Readings: in (c) the difference of an edge is head minus tail; the second
/// clause of (i) constrains `pos(v)`; (i) is checked in every variant.
pub fn check_conditions(
    pl: &Placement,
    c: &NorCircuit,
    spec: &RecurrenceSpec,
    variant: Variant,
) -> Result<ConditionReport, CompilerError> {
    pl.validate()?;
    if pl.pos.len() != c.len() {
        return Err(CompilerError::Invalid(format!("{} positions for {} vertices", pl.pos.len(), c.len())));
    }
    if c.arity() != spec.r() {
        return Err(CompilerError::Invalid("circuit arity differs from the number of shifts".into()));
    }
    if (variant == Variant::B) != c.in_double_prime().is_some() {
        return Err(CompilerError::Invalid("in'' is present exactly in variant B".into()));
    }
    let res = Residues::new(spec, pl)?;
    let ctx = Ctx { pl, c, spec, res };
    let conditions = vec![
        ('a', ctx.a()),
        ('b', ctx.b()),
        ('c', ctx.c()),
        ('d', ctx.d()),
        ('e', ctx.e()),
        ('f', ctx.f()),
        ('g', ctx.g()),
        ('h', ctx.h()),
        ('i', ctx.i()),
    ];
    Ok(ConditionReport { conditions, strict_c: ctx.strict_c() })
}

struct Ctx<'a> {
    pl: &'a Placement,
    c: &'a NorCircuit,
    spec: &'a RecurrenceSpec,
    res: Residues,
}

impl Ctx<'_> {
    fn pos(&self, v: usize) -> IntVec {
        self.pl.pos[v]
    }

    fn class(&self, p: &IntVec) -> usize {
        self.res.sys.class(p)
    }

    fn diff_class(&self, v: usize, w: usize) -> usize {
        self.class(&(self.pos(w) - self.pos(v)))
    }

    fn a(&self) -> Status {
        let nu = self.pl.normal;
        for (v, w) in self.c.edges() {
            let d = self.pos(w) - self.pos(v);
            if nu.dot(&d) <= 0 {
                return Status::Fail(format!("edge {}->{} has difference {d} with ν·δ = {}", v, w, nu.dot(&d)));
            }
        }
        // q = n − i with ν·q ≤ 0 forces ν·n ≤ max ν·I.
        let top = self.pl.stair.iter().map(|i| nu.dot(i)).max().unwrap_or(0);
        let stair_diffs: FxHashSet<IntVec> =
            self.pl.stair.iter().flat_map(|a| self.pl.stair.iter().map(move |b| *a - *b)).collect();
        for x in 0..=top / nu.x() {
            for y in 0..=(top - nu.x() * x) / nu.y() {
                let n = IntVec::xy(x, y);
                for i in &self.pl.stair {
                    let q = n - *i;
                    if nu.dot(&q) <= 0 && !stair_diffs.contains(&q) {
                        return Status::Fail(format!("{q} ∈ (ℕ²−I)∖(I−I) has ν·q = {}", nu.dot(&q)));
                    }
                }
            }
        }
        Status::Pass
    }

    fn b(&self) -> Status {
        for i in 0..self.c.arity() {
            for j in 0..self.c.width() {
                let want = self.pos(self.c.output(j)) - self.pl.m * self.spec.betas()[i];
                if self.pos(self.c.input(i, j)) != want {
                    return Status::Fail(format!(
                        "(i,j)=({},{}): pos(in) = {} but pos(out) − mβ = {want}",
                        i + 1,
                        j + 1,
                        self.pos(self.c.input(i, j))
                    ));
                }
            }
        }
        Status::Pass
    }

    fn c(&self) -> Status {
        let n = self.c.len();
        let mut by_class: FxHashMap<usize, Vec<IntVec>> = FxHashMap::default();
        for (t, h) in self.c.edges() {
            let d = self.pos(h) - self.pos(t);
            by_class.entry(self.class(&d)).or_default().push(d);
        }
        for w in 0..n {
            if matches!(self.c.role(w), Role::Input(_)) {
                continue;
            }
            for v in 0..n {
                let Some(deltas) = by_class.get(&self.diff_class(v, w)) else { continue };
                for d in deltas {
                    let feeders: Vec<usize> = (0..n).filter(|&u| self.pos(w) - self.pos(u) == *d).collect();
                    if feeders.is_empty() {
                        return Status::Fail(format!(
                            "w={}, v={}: difference ≡ edge difference {d} but no vertex sits at pos(w) − {d}",
                            name(self.c, w),
                            name(self.c, v)
                        ));
                    }
                    if let Some(&u) = feeders.iter().find(|&&u| !self.c.has_edge(u, w)) {
                        return Status::Fail(format!(
                            "w={}: {} sits at pos(w) − {d} without an edge into w",
                            name(self.c, w),
                            name(self.c, u)
                        ));
                    }
                }
            }
        }
        Status::Pass
    }

    fn canonical_vertices(&self) -> Vec<usize> {
        (0..self.c.len()).filter(|&v| canonical(self.c, v) == v).collect()
    }

    fn strict_c(&self) -> Status {
        let ks = self.canonical_vertices();
        let zero = self.class(&IntVec::xy(0, 0));
        let mut seen: FxHashMap<usize, (usize, usize)> = FxHashMap::default();
        for &a in &ks {
            for &b in &ks {
                if a == b {
                    continue;
                }
                let k = self.diff_class(a, b);
                let lhs = format!("pos({}) − pos({})", name(self.c, b), name(self.c, a));
                if k == zero {
                    return Status::Fail(format!("{lhs} ≡ 0"));
                }
                if let Some(&(a2, b2)) = seen.get(&k) {
                    return Status::Fail(format!("{lhs} ≡ pos({}) − pos({})", name(self.c, b2), name(self.c, a2)));
                }
                seen.insert(k, (a, b));
            }
        }
        Status::Pass
    }

    fn d(&self) -> Status {
        let n = self.c.len();
        let mut covered: FxHashSet<usize> = self.res.stair_diffs.clone();
        for v in 0..n {
            for w in 0..n {
                covered.insert(self.diff_class(v, w));
            }
        }
        for k in self.res.sys.classes() {
            if self.res.stair.contains(&k) {
                continue;
            }
            let p = self.res.sys.representative(k);
            if self.pl.stair.iter().all(|i| covered.contains(&self.class(&(p - *i)))) {
                return Status::Fail(format!("the translate {p} − I is covered"));
            }
        }
        Status::Pass
    }

    fn e(&self) -> Status {
        let occupied: FxHashSet<usize> = self.pl.pos.iter().map(|p| self.class(p)).collect();
        let stair = &self.pl.stair;
        for k in self.res.sys.classes() {
            let q = self.res.sys.representative(k);
            // h may be chosen independently at each point of I.
            let choice: Option<Vec<IntVec>> = stair
                .iter()
                .map(|p| stair.iter().copied().find(|h| h != p && occupied.contains(&self.class(&(q + *p - *h)))))
                .collect();
            if let Some(h) = choice {
                let pairs: Vec<String> = stair.iter().zip(&h).map(|(p, h)| format!("{p}↦{h}")).collect();
                return Status::Fail(format!("translate by {q} with h = {{{}}}", pairs.join(", ")));
            }
        }
        Status::Pass
    }

    fn f(&self) -> Status {
        for (v, w) in self.c.edges() {
            if self.res.stair_diffs.contains(&self.diff_class(v, w)) {
                return Status::Fail(format!("edge {}->{} has difference in (I−I)+mL", name(self.c, v), name(self.c, w)));
            }
        }
        Status::Pass
    }

    fn g(&self) -> Status {
        let specials: Vec<usize> = [self.c.in_prime(), self.c.in_double_prime()].into_iter().flatten().collect();
        if specials.is_empty() {
            return Status::Vacuous;
        }
        for &x in &specials {
            for v in 0..self.c.len() {
                if v != x && self.res.stair.contains(&self.diff_class(x, v)) {
                    return Status::Fail(format!("pos({}) ∈ pos({}) + I + mL", name(self.c, v), name(self.c, x)));
                }
            }
        }
        if let Some(x) = self.c.in_double_prime() {
            let n = self.c.len();
            for w in self.c.successors(x) {
                let k = self.diff_class(x, w);
                for v2 in 0..n {
                    for w2 in 0..n {
                        let same = canonical(self.c, v2) == x && canonical(self.c, w2) == canonical(self.c, w);
                        if !same && self.diff_class(v2, w2) == k {
                            return Status::Fail(format!(
                                "pos({}) − pos(in'') ≡ pos({}) − pos({})",
                                name(self.c, w),
                                name(self.c, w2),
                                name(self.c, v2)
                            ));
                        }
                    }
                }
            }
        }
        Status::Pass
    }

    fn h(&self) -> Status {
        for t in 0..self.c.arity() * self.c.width() {
            let v = self.c.input(t / self.c.width(), t % self.c.width());
            if self.pos(v).is_nonneg() {
                return Status::Fail(format!("pos({}) = {} lies in ℕ²", name(self.c, v), self.pos(v)));
            }
        }
        for x in [self.c.in_prime(), self.c.in_double_prime()].into_iter().flatten() {
            if !self.pos(x).is_nonneg() {
                return Status::Fail(format!("pos({}) = {} is outside ℕ²", name(self.c, x), self.pos(x)));
            }
        }
        Status::Pass
    }

    fn i(&self) -> Status {
        let s = self.c.width();
        for j in 0..s {
            for j2 in j + 1..s {
                let (a, b) = (self.pos(self.c.output(j)), self.pos(self.c.output(j2)));
                if !(a.x() < b.x() && a.y() > b.y()) {
                    return Status::Fail(format!("out[{j}] at {a} and out[{j2}] at {b} are not ordered"));
                }
            }
        }
        for j in 0..s {
            for v in self.c.predecessors(self.c.output(j)) {
                for j2 in 0..s {
                    let o = self.pos(self.c.output(j2));
                    if self.pos(v).dominates(&o) {
                        return Status::Fail(format!("{} feeds out[{j}] but lies in pos(out[{j2}]) + ℕ²", name(self.c, v)));
                    }
                }
            }
        }
        Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden;
    use crate::recurrence::xor_spec;

    fn published() -> (Placement, NorCircuit) {
        (golden::published_placement(), golden::published_xor_circuit())
    }

    #[test]
    fn published_placement_conditions() {
        let (pl, c) = published();
        let r = check_conditions(&pl, &c, &xor_spec(), Variant::C).unwrap();
        for k in ['a', 'b', 'c', 'e', 'f', 'h', 'i'] {
            assert_eq!(r.get(k), &Status::Pass, "({k})");
        }
        assert_eq!(r.get('g'), &Status::Vacuous);
        // (1,1) = pos(v2) − pos(v0), and (0,1), (1,0), (−1,1) lie in I − I.
        assert_eq!(r.get('d'), &Status::Fail("the translate (1,1) − I is covered".into()));
        assert!(r.strict_c.is_fail());
    }

    #[test]
    fn moved_input_breaks_b() {
        let (mut pl, c) = published();
        pl.pos[0] = IntVec::xy(-5, 0);
        let r = check_conditions(&pl, &c, &xor_spec(), Variant::C).unwrap();
        match r.get('b') {
            Status::Fail(w) => assert!(w.starts_with("(i,j)=(1,1)"), "{w}"),
            s => panic!("expected failure, got {s}"),
        }
    }

    #[test]
    fn unit_scale_collapses_residues() {
        let (mut pl, c) = published();
        pl.m = 1;
        let r = check_conditions(&pl, &c, &xor_spec(), Variant::C).unwrap();
        // a single class: every edge difference lies in (I − I) + L
        assert!(r.get('f').is_fail());
        assert_eq!(r.get('d'), &Status::Pass);
    }

    #[test]
    fn placement_validation() {
        let stair = vec![IntVec::xy(0, 0), IntVec::xy(1, 1)];
        assert!(Placement::new(vec![], 3, stair, IntVec::xy(1, 1)).is_err());
        assert!(Placement::new(vec![], 0, vec![IntVec::xy(0, 0)], IntVec::xy(1, 1)).is_err());
        assert!(Placement::new(vec![], 2, vec![IntVec::xy(0, 0)], IntVec::xy(0, 1)).is_err());
        assert_eq!(stair_for_normal(&IntVec::xy(1, 2)).len(), 6);
    }

    #[test]
    fn halfspace_condition_brute_force() {
        // I = {(0,0),(1,0),(2,0)} with ν = (1,1): (0,1) − (2,0) has ν-pairing −1.
        let stair = vec![IntVec::xy(0, 0), IntVec::xy(1, 0), IntVec::xy(2, 0)];
        let (mut pl, c) = published();
        pl.stair = stair;
        pl.normal = IntVec::xy(1, 1);
        let ctx = Ctx { pl: &pl, c: &c, spec: &xor_spec(), res: Residues::new(&xor_spec(), &pl).unwrap() };
        assert!(ctx.a().is_fail());
        pl.stair = vec![IntVec::xy(0, 0), IntVec::xy(1, 0)];
        pl.normal = IntVec::xy(3, 4);
        let ctx = Ctx { pl: &pl, c: &c, spec: &xor_spec(), res: Residues::new(&xor_spec(), &pl).unwrap() };
        assert_eq!(ctx.a(), Status::Pass);
    }
}
