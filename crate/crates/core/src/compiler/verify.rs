use std::fmt;

use super::placement::Residues;
use super::{CompiledGame, CompilerError};
use crate::engine::{Cell, Outcome, PointednessWitness, Solver};
use crate::lattice::IntVec;
use crate::recurrence::{Encoding, RecurrenceEval, RecurrenceSpec, Variant};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    /// Positions compared.
    pub checked: usize,
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.failure {
                None => writeln!(f, "{}: ok ({} positions)", c.name, c.checked)?,
                Some(w) => writeln!(f, "{}: FAIL after {} positions: {w}", c.name, c.checked)?,
            }
        }
        Ok(())
    }
}

/// Runs [`verify_at`] on every `ℓ ∈ L⁺` with `ν·mℓ ≤ bound`.
pub fn verify_construction(
    cg: &CompiledGame,
    spec: &RecurrenceSpec,
    enc: &Encoding,
    bound: i64,
) -> Result<VerifyReport, CompilerError> {
    let pl = &cg.placement;
    let top = bound / pl.m;
    let ells: Vec<IntVec> = (0..=top)
        .flat_map(|x| (0..=top).map(move |y| IntVec::xy(x, y)))
        .filter(|l| pl.normal.dot(l) * pl.m <= bound && spec.lattice().contains_nonneg(l))
        .collect();
    verify_at(cg, spec, enc, &ells)
}

/// Compares the game against the recurrence at the given `ℓ ∈ L⁺`:
///
/// * `outputs`: `enc(f(ℓ))_j` against `(pos(out_j) + mℓ, 1)` for `ℓ ∈ M`,
///   a defeated position reading as N;
/// * `in_prime`: `(pos(in′) + mℓ, 1)` is P iff some `ℓ − β_i ∉ M`. In variant B
///   the generators of `M` are skipped, where `in″` overrides `in′`, and so is
///   `L⁺ ∖ M`, where slice 0 has no defeated positions to exclude;
/// * `in_double_prime`: `(pos(in″) + mℓ, 1)` is P iff `ℓ = 0`;
/// * `slice0`: on the box spanned by the positions above, `(p, 0)` is P iff
///   `p ∈ I + mL` and it is not defeated.
pub fn verify_at(
    cg: &CompiledGame,
    spec: &RecurrenceSpec,
    enc: &Encoding,
    ells: &[IntVec],
) -> Result<VerifyReport, CompilerError> {
    let pl = &cg.placement;
    let c = &cg.circuit;
    let m = pl.m;
    if let Some(l) = ells.iter().find(|l| !spec.lattice().contains_nonneg(l)) {
        return Err(CompilerError::Invalid(format!("{l} is not in L⁺")));
    }
    let mut solver = solver_for(cg)?;
    let mut eval = RecurrenceEval::new(spec);
    let lift = |p: IntVec, z: i64| IntVec::xyz(p.x(), p.y(), z);
    let mut checks = Vec::new();
    let mut corner = IntVec::xy(0, 0);
    let mut grow = |p: IntVec| corner = IntVec::xy(corner.x().max(p.x()), corner.y().max(p.y()));

    let mut out = CheckResult { name: "outputs", checked: 0, failure: None };
    'ells: for ell in ells.iter().filter(|l| spec.module().contains(l)) {
        let sym = eval.eval(ell)?;
        let want = enc.encode(sym);
        for j in 0..c.width() {
            let p = lift(pl.pos[c.output(j)] + m * *ell, 1);
            grow(p.truncate());
            let got = read(&mut solver, &p);
            out.checked += 1;
            if got != want[j] {
                out.failure = Some(format!(
                    "ℓ = {ell}, f(ℓ) = {}: position {p} (out[{j}]) is {got:?}, encoding bit is {:?}",
                    spec.alphabet()[sym],
                    want[j]
                ));
                break 'ells;
            }
        }
    }
    checks.push(out);

    if let Some(ip) = c.in_prime() {
        let mut r = CheckResult { name: "in_prime", checked: 0, failure: None };
        for ell in ells {
            let in_m = spec.module().contains(ell);
            if cg.variant == Variant::B && (!in_m || spec.module().is_generator(ell)) {
                continue;
            }
            let want = Outcome::from_bool(spec.betas().iter().any(|b| !spec.module().contains(&(*ell - *b))));
            let p = lift(pl.pos[ip] + m * *ell, 1);
            grow(p.truncate());
            let got = read(&mut solver, &p);
            r.checked += 1;
            if got != want {
                r.failure = Some(format!("ℓ = {ell}: position {p} (in') is {got:?}, expected {want:?}"));
                break;
            }
        }
        checks.push(r);
    }

    if let Some(ipp) = c.in_double_prime() {
        let mut r = CheckResult { name: "in_double_prime", checked: 0, failure: None };
        for ell in ells {
            let want = Outcome::from_bool(ell.is_zero());
            let p = lift(pl.pos[ipp] + m * *ell, 1);
            grow(p.truncate());
            let got = read(&mut solver, &p);
            r.checked += 1;
            if got != want {
                r.failure = Some(format!("ℓ = {ell}: position {p} (in'') is {got:?}, expected {want:?}"));
                break;
            }
        }
        checks.push(r);
    }

    let res = Residues::new(spec, pl)?;
    let mut r = CheckResult { name: "slice0", checked: 0, failure: None };
    'box_: for x in 0..=corner.x() {
        for y in 0..=corner.y() {
            let p = IntVec::xyz(x, y, 0);
            let cell = solver.cell(&p);
            let want = if cell == Cell::Defeated {
                Cell::Defeated
            } else {
                let k = res.sys.class(&IntVec::xy(x, y));
                if res.stair.contains(&k) {
                    Cell::P
                } else {
                    Cell::N
                }
            };
            r.checked += 1;
            if cell != want {
                r.failure = Some(format!("position {p} is {cell:?}, expected {want:?}"));
                break 'box_;
            }
        }
    }
    checks.push(r);
    Ok(VerifyReport { checks })
}

fn read(solver: &mut Solver<'_>, p: &IntVec) -> Outcome {
    solver.cell(p).outcome().unwrap_or(Outcome::N)
}

/// `(ν₁, ν₂, λ)` certifies pointedness once `λ` lifts every move with positive
/// third coordinate; exact elimination is the fallback.
fn solver_for(cg: &CompiledGame) -> Result<Solver<'_>, CompilerError> {
    let nu = cg.placement.normal;
    let rs = cg.game.ruleset();
    let mut lambda = 1i64;
    for g in rs.moves().filter(|g| g.z() > 0) {
        let need = 1 - nu.x() * g.x() - nu.y() * g.y();
        lambda = lambda.max(need.div_euclid(g.z()) + i64::from(need.rem_euclid(g.z()) != 0));
    }
    match PointednessWitness::from_weights(IntVec::xyz(nu.x(), nu.y(), lambda)) {
        Some(w) if w.certifies(rs) => Ok(Solver::with_witness(&cg.game, w)),
        _ => Ok(Solver::new(&cg.game)?),
    }
}
