use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use super::placement::{canonical, Residues};
use super::{check_conditions, check_reachability, stair_for_normal, CompilerError, ConditionReport, Placement, Status};
use crate::lattice::IntVec;
use crate::recurrence::{NorCircuit, RecurrenceSpec, Role, Variant};

pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

/// Samples per vertex before an attempt is abandoned.
const TRIES_PER_VERTEX: usize = 64;

/// Attempts between increments of `m`.
const ATTEMPTS_PER_SCALE: usize = 100;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub seed: u64,
    pub max_attempts: usize,
    /// Starting scale; derived from the circuit size when absent.
    pub initial_m: Option<i64>,
    /// Returned unchanged when it already satisfies every condition.
    pub hint: Option<Placement>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { seed: 0, max_attempts: DEFAULT_MAX_ATTEMPTS, initial_m: None, hint: None }
    }
}

pub fn search_placement(
    c: &NorCircuit,
    spec: &RecurrenceSpec,
    variant: Variant,
    seed: u64,
) -> Result<Placement, CompilerError> {
    search_placement_with(c, spec, variant, &SearchOptions { seed, ..SearchOptions::default() })
}

/// Randomized search for a placement passing (a)–(i) together with the
/// strengthened form of (c).
///
/// Outputs are drawn from `[0,m)²`, which fixes the inputs by (b). The other
/// vertices are drawn in topological order, each on a `ν`-level strictly
/// between its placed predecessors and the outputs it feeds. Each vertex is
/// rejected locally against the residue conditions that only involve placed
/// vertices; the full check runs on the finished placement. `m` grows every
/// hundred attempts.
pub fn search_placement_with(
    c: &NorCircuit,
    spec: &RecurrenceSpec,
    variant: Variant,
    opts: &SearchOptions,
) -> Result<Placement, CompilerError> {
    if c.arity() == 0 || c.edges().next().is_none() {
        return Err(CompilerError::Invalid("the circuit has no edges".into()));
    }
    if (variant == Variant::B) != c.in_double_prime().is_some() {
        return Err(CompilerError::Invalid("in'' is present exactly in variant B".into()));
    }
    check_reachability(c, spec)?;
    if let Some(h) = &opts.hint {
        let report = check_conditions(h, c, spec, variant)?;
        if report.passes() {
            return Ok(h.clone());
        }
        return Err(CompilerError::Conditions(Box::new(report)));
    }
    let normal = primitive(spec.normal());
    let stair = stair_for_normal(&normal);
    let canon = (0..c.len()).filter(|&v| canonical(c, v) == v).count() as i64;
    let idx = spec.lattice().index();
    let m0 = opts.initial_m.unwrap_or_else(|| {
        let need = canon * (canon - 1) + 1;
        (1..).find(|m| m * m * idx >= 2 * need).expect("unbounded")
    });
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut last: Option<ConditionReport> = None;
    for attempt in 0..opts.max_attempts {
        let m = m0 + (attempt / ATTEMPTS_PER_SCALE) as i64;
        let Some(pos) = Attempt::new(c, spec, m, &stair, normal)?.run(&mut rng) else { continue };
        let pl = Placement::new(pos, m, stair.clone(), normal)?;
        let report = check_conditions(&pl, c, spec, variant)?;
        if report.passes() && report.strict_c == Status::Pass {
            return Ok(pl);
        }
        last = Some(report);
    }
    Err(CompilerError::SearchExhausted { attempts: opts.max_attempts, last: last.map(Box::new) })
}

fn primitive(v: IntVec) -> IntVec {
    let g = num_integer::gcd(v.x(), v.y()).max(1);
    IntVec::xy(v.x() / g, v.y() / g)
}

struct Attempt<'a> {
    c: &'a NorCircuit,
    spec: &'a RecurrenceSpec,
    m: i64,
    normal: IntVec,
    res: Residues,
    pos: Vec<Option<IntVec>>,
    /// Difference classes of placed canonical vertices, zero included.
    diffs: FxHashSet<usize>,
    lower: IntVec,
    upper: IntVec,
}

impl<'a> Attempt<'a> {
    fn new(
        c: &'a NorCircuit,
        spec: &'a RecurrenceSpec,
        m: i64,
        stair: &[IntVec],
        normal: IntVec,
    ) -> Result<Self, CompilerError> {
        let probe = Placement { pos: Vec::new(), m, stair: stair.to_vec(), normal };
        let res = Residues::new(spec, &probe)?;
        let pos_part = |k: usize| spec.betas().iter().map(|b| b.get(k).max(0)).max().unwrap_or(0);
        let big = spec.betas().iter().map(|b| b.norm_inf()).max().unwrap_or(1).max(1);
        // Gates stay on the board in every active copy: pos + m·max(0,β) ≥ 0.
        let lower = IntVec::xy(-m * pos_part(0), -m * pos_part(1));
        let upper = IntVec::xy(m * big, m * big);
        let mut diffs = FxHashSet::default();
        diffs.insert(res.sys.class(&IntVec::xy(0, 0)));
        Ok(Self { c, spec, m, normal, res, pos: vec![None; c.len()], diffs, lower, upper })
    }

    fn level(&self, v: usize) -> i64 {
        self.normal.dot(&self.pos[v].expect("placed"))
    }

    fn run(mut self, rng: &mut ChaCha8Rng) -> Option<Vec<IntVec>> {
        let c = self.c;
        let s = c.width();
        let mut outs: Vec<IntVec> = Vec::with_capacity(s);
        for _ in 0..TRIES_PER_VERTEX {
            outs = (0..s).map(|_| IntVec::xy(rng.random_range(0..self.m), rng.random_range(0..self.m))).collect();
            outs.sort();
            if outs.windows(2).all(|w| w[0].x() < w[1].x() && w[0].y() > w[1].y()) {
                break;
            }
            outs.clear();
        }
        if outs.is_empty() {
            return None;
        }
        for (j, p) in outs.iter().enumerate() {
            if !self.accept(c.output(j), *p) {
                return None;
            }
            self.pos[c.output(j)] = Some(*p);
            for i in 0..c.arity() {
                self.pos[c.input(i, j)] = Some(*p - self.m * self.spec.betas()[i]);
            }
        }
        let order = c.topo_order().expect("acyclic");
        let specials = [c.in_double_prime(), c.in_prime()];
        let rest = specials
            .iter()
            .flatten()
            .copied()
            .chain(order.into_iter().filter(|&v| c.role(v) == Role::Gate));
        for v in rest.collect::<Vec<_>>() {
            let on_board = matches!(c.role(v), Role::InPrime | Role::InDoublePrime);
            let (lo, hi) =
                if on_board { (IntVec::xy(0, 0), IntVec::xy(self.m - 1, self.m - 1)) } else { (self.lower, self.upper) };
            let ub = self.upper_level(v).unwrap_or(self.normal.dot(&hi));
            let lb = c.predecessors(v).iter().map(|&u| self.level(u) + 1).max();
            let lb = lb.unwrap_or(self.normal.dot(&lo));
            if lb > ub {
                return None;
            }
            let mut placed = false;
            for _ in 0..TRIES_PER_VERTEX {
                let lambda = rng.random_range(lb..=ub);
                let Some(p) = point_on_level(self.normal, lambda, lo, hi, rng) else { continue };
                if self.accept(v, p) {
                    self.pos[v] = Some(p);
                    placed = true;
                    break;
                }
            }
            if !placed {
                return None;
            }
        }
        self.pos.into_iter().collect()
    }

    /// Highest level `v` may take below every placed vertex it reaches.
    fn upper_level(&self, v: usize) -> Option<i64> {
        let mut memo: Vec<Option<Option<i64>>> = vec![None; self.c.len()];
        self.ub(v, &mut memo)
    }

    fn ub(&self, v: usize, memo: &mut Vec<Option<Option<i64>>>) -> Option<i64> {
        if let Some(b) = memo[v] {
            return b;
        }
        let b = if self.pos[v].is_some() {
            Some(self.level(v))
        } else {
            let mut best: Option<i64> = None;
            for w in self.c.successors(v) {
                if let Some(x) = self.ub(w, memo) {
                    best = Some(best.map_or(x - 1, |b: i64| b.min(x - 1)));
                }
            }
            best
        };
        memo[v] = Some(b);
        b
    }

    /// Local conditions involving `v` and the already placed vertices.
    fn accept(&mut self, v: usize, p: IntVec) -> bool {
        let c = self.c;
        let sys = &self.res.sys;
        let placed: Vec<(usize, IntVec)> =
            (0..c.len()).filter(|&u| canonical(c, u) == u).filter_map(|u| self.pos[u].map(|q| (u, q))).collect();
        let mut fresh = FxHashSet::default();
        for &(_, q) in &placed {
            for k in [sys.class(&(p - q)), sys.class(&(q - p))] {
                if self.diffs.contains(&k) || !fresh.insert(k) {
                    return false;
                }
            }
        }
        for (a, b) in c.edges() {
            let pa = if a == v { Some(p) } else { self.pos[a] };
            let pb = if b == v { Some(p) } else { self.pos[b] };
            if let (true, Some(pa), Some(pb)) = (a == v || b == v, pa, pb) {
                let d = pb - pa;
                if self.normal.dot(&d) <= 0 || self.res.stair_diffs.contains(&sys.class(&d)) {
                    return false;
                }
            }
        }
        let special = |u: usize| matches!(c.role(u), Role::InPrime | Role::InDoublePrime);
        for u in 0..c.len() {
            let Some(q) = self.pos[u] else { continue };
            if (special(v) && self.res.stair.contains(&sys.class(&(q - p))))
                || (special(u) && self.res.stair.contains(&sys.class(&(p - q))))
            {
                return false;
            }
        }
        let feeds_output = c.successors(v).iter().any(|&w| matches!(c.role(w), Role::Output(_)));
        if feeds_output && (0..c.width()).any(|j| self.pos[c.output(j)].is_some_and(|o| p.dominates(&o))) {
            return false;
        }
        self.diffs.extend(fresh);
        true
    }
}

/// A uniformly chosen point of the box `[lo, hi]` on the line `ν·p = λ`.
fn point_on_level(normal: IntVec, lambda: i64, lo: IntVec, hi: IntVec, rng: &mut ChaCha8Rng) -> Option<IntVec> {
    let pts: Vec<IntVec> = (lo.x()..=hi.x())
        .filter_map(|x| {
            let rest = lambda - normal.x() * x;
            (rest % normal.y() == 0).then(|| IntVec::xy(x, rest / normal.y()))
        })
        .filter(|p| p.y() >= lo.y() && p.y() <= hi.y())
        .collect();
    (!pts.is_empty()).then(|| pts[rng.random_range(0..pts.len())])
}
