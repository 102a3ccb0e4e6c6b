use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::RecurrenceError;
use crate::engine::{check_pointedness, Outcome, Ruleset};
use crate::lattice::{IntVec, ModuleIdeal, Sublattice};

/// How the compiled game receives the initial values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Variant {
    /// Through defeated positions.
    A,
    /// Through extra moves, with no defeated positions.
    B,
    /// No external input.
    C,
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            "C" | "c" => Ok(Variant::C),
            other => Err(format!("unknown variant '{other}' (A, B or C)")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `f : M → Σ` with `f = f0` on `gens M`, otherwise `g(f(ℓ−β_1), …, f(ℓ−β_r))`
/// when every `ℓ − β_i ∈ M`, and `σ0` when some is not.
///
/// Symbols are indices into `alphabet`. `g` is row-major over `Σ^r` with the
/// first argument most significant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RecurrenceSpec {
    lattice: Sublattice,
    module: ModuleIdeal,
    betas: Vec<IntVec>,
    alphabet: Vec<String>,
    g: Vec<usize>,
    sigma0: usize,
    f0: BTreeMap<IntVec, usize>,
    normal: IntVec,
}

impl RecurrenceSpec {
    pub fn new(
        module: ModuleIdeal,
        betas: Vec<IntVec>,
        alphabet: Vec<String>,
        g: Vec<usize>,
        sigma0: usize,
        f0: BTreeMap<IntVec, usize>,
    ) -> Result<Self, RecurrenceError> {
        let bad = |m: String| Err(RecurrenceError::InvalidSpec(m));
        let lattice = module.ambient().clone();
        if lattice.dim() != 2 {
            return bad("the lattice must be planar".into());
        }
        if !module.has_finite_complement() {
            return bad("M must have finite complement in L⁺".into());
        }
        if betas.is_empty() {
            return bad("at least one shift β is needed".into());
        }
        for b in &betas {
            if b.dim() != 2 || b.is_zero() {
                return bad(format!("shift {b} must be a nonzero planar vector"));
            }
            if !lattice.contains(b)? {
                return bad(format!("shift {b} is not in L"));
            }
        }
        if !betas.iter().any(|b| b.x() <= 0) || !betas.iter().any(|b| b.y() <= 0) {
            return bad("tangent cone: need some β with β₁ ≤ 0 and some with β₂ ≤ 0".into());
        }
        let normal = match check_pointedness(&Ruleset::new(2, betas.iter().copied()).expect("nonzero planar shifts")) {
            Ok(w) => w.weights(),
            Err(c) => return bad(format!("shifts lie in no common open halfspace ({c})")),
        };
        let n = alphabet.len();
        if n == 0 {
            return bad("empty alphabet".into());
        }
        let rows = n.checked_pow(betas.len() as u32).ok_or_else(|| RecurrenceError::InvalidSpec("table too large".into()))?;
        if g.len() != rows {
            return bad(format!("g has {} entries, expected |Σ|^r = {rows}", g.len()));
        }
        if g.iter().any(|&s| s >= n) || sigma0 >= n {
            return bad("symbol index out of range".into());
        }
        let gens: Vec<&IntVec> = module.generators().iter().collect();
        if f0.keys().collect::<Vec<_>>() != gens {
            return bad("f0 must be defined exactly on the generators of M".into());
        }
        if f0.values().any(|&s| s >= n) {
            return bad("f0 symbol out of range".into());
        }
        Ok(Self { lattice, module, betas, alphabet, g, sigma0, f0, normal })
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.lattice
    }

    pub fn module(&self) -> &ModuleIdeal {
        &self.module
    }

    pub fn betas(&self) -> &[IntVec] {
        &self.betas
    }

    pub fn r(&self) -> usize {
        self.betas.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    pub fn g_table(&self) -> &[usize] {
        &self.g
    }

    pub fn g(&self, args: &[usize]) -> usize {
        let n = self.alphabet.len();
        self.g[args.iter().fold(0, |acc, &a| acc * n + a)]
    }

    pub fn sigma0(&self) -> usize {
        self.sigma0
    }

    pub fn f0(&self) -> &BTreeMap<IntVec, usize> {
        &self.f0
    }

    /// Positive integer normal `ν` with `ν·β ≥ 1` for every shift.
    pub fn normal(&self) -> IntVec {
        self.normal
    }

    /// Whether `ℓ` is computed by `g` (every `ℓ − β_i ∈ M`), for non-generators.
    pub fn recursive_at(&self, ell: &IntVec) -> bool {
        self.betas.iter().all(|b| self.module.contains(&(*ell - *b)))
    }
}

/// Memoized evaluator of a recurrence.
pub struct RecurrenceEval<'s> {
    spec: &'s RecurrenceSpec,
    memo: FxHashMap<IntVec, usize>,
}

impl<'s> RecurrenceEval<'s> {
    pub fn new(spec: &'s RecurrenceSpec) -> Self {
        Self { spec, memo: FxHashMap::default() }
    }

    pub fn eval(&mut self, ell: &IntVec) -> Result<usize, RecurrenceError> {
        if !self.spec.module.contains(ell) {
            return Err(RecurrenceError::OutsideDomain(*ell));
        }
        if let Some(&v) = self.memo.get(ell) {
            return Ok(v);
        }
        let spec = self.spec;
        let mut stack = vec![*ell];
        while let Some(&l) = stack.last() {
            if self.memo.contains_key(&l) {
                stack.pop();
                continue;
            }
            if let Some(&v) = spec.f0.get(&l) {
                self.memo.insert(l, v);
                stack.pop();
                continue;
            }
            if !spec.recursive_at(&l) {
                self.memo.insert(l, spec.sigma0);
                stack.pop();
                continue;
            }
            let preds: Vec<IntVec> = spec.betas.iter().map(|b| l - *b).collect();
            let missing: Vec<IntVec> = preds.iter().filter(|p| !self.memo.contains_key(p)).copied().collect();
            if missing.is_empty() {
                let args: Vec<usize> = preds.iter().map(|p| self.memo[p]).collect();
                self.memo.insert(l, spec.g(&args));
                stack.pop();
            } else {
                stack.extend(missing);
            }
        }
        Ok(self.memo[ell])
    }
}

/// One-shot evaluation of the recurrence at `ℓ`.
pub fn eval_recurrence(spec: &RecurrenceSpec, ell: &IntVec) -> Result<usize, RecurrenceError> {
    RecurrenceEval::new(spec).eval(ell)
}

/// `P` iff `C(i+j, i)` is odd, i.e. `i & j = 0`.
pub fn binom_parity_oracle(i: u64, j: u64) -> Outcome {
    Outcome::from_bool(i & j == 0)
}

/// `f(i,j) = f(i,j−1) xor f(i−1,j)` on `ℕ²` with `P` on the axes; alphabet `[P, N]`.
pub fn xor_spec() -> RecurrenceSpec {
    let z2 = Sublattice::standard(2);
    let module = ModuleIdeal::whole(z2);
    // P = 0, N = 1; with P as true, xor(a, b) is P exactly when a ≠ b.
    let g = vec![1, 0, 0, 1];
    RecurrenceSpec::new(
        module,
        vec![IntVec::xy(1, 0), IntVec::xy(0, 1)],
        vec!["P".into(), "N".into()],
        g,
        0,
        BTreeMap::from([(IntVec::xy(0, 0), 0)]),
    )
    .expect("the xor recurrence is well formed")
}
