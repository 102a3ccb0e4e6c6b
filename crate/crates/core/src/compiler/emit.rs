use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::placement::Residues;
use super::{check_conditions, CompilerError, Placement};
use crate::engine::{GameSpec, Outcome, Ruleset};
use crate::lattice::{enumerate_f, minimal_elements, nonzero_generators, translate_generators, IntVec, LatticeSet};
use crate::recurrence::{Encoding, NorCircuit, RecurrenceSpec, Variant};

/// The lines of the ruleset, in emission order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Line {
    Wires,
    Slice0,
    Slice1,
    InPrime,
    InDoublePrime,
    Tangent,
    GammaB,
}

impl Line {
    pub const ALL: [Line; 7] =
        [Line::Wires, Line::Slice0, Line::Slice1, Line::InPrime, Line::InDoublePrime, Line::Tangent, Line::GammaB];

    pub fn name(self) -> &'static str {
        match self {
            Line::Wires => "wires",
            Line::Slice0 => "slice0",
            Line::Slice1 => "slice1",
            Line::InPrime => "in_prime",
            Line::InDoublePrime => "in_double_prime",
            Line::Tangent => "tangent",
            Line::GammaB => "gamma_b",
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A ruleset on `ℕ³` together with everything it was built from.
#[derive(Clone, Debug)]
pub struct CompiledGame {
    pub game: GameSpec,
    pub placement: Placement,
    pub circuit: NorCircuit,
    pub variant: Variant,
    /// Moves by line; a vector may sit on several lines.
    pub lines: BTreeMap<Line, BTreeSet<IntVec>>,
}

/// Emits the ruleset for a placement that passes its conditions. With
/// `core_only` only the wire and slice lines are produced.
pub fn emit_ruleset(
    pl: &Placement,
    c: &NorCircuit,
    spec: &RecurrenceSpec,
    enc: &Encoding,
    variant: Variant,
    core_only: bool,
) -> Result<CompiledGame, CompilerError> {
    let report = check_conditions(pl, c, spec, variant)?;
    if !report.passes() {
        return Err(CompilerError::Conditions(Box::new(report)));
    }
    emit_ruleset_unchecked(pl, c, spec, enc, variant, core_only)
}

/// [`emit_ruleset`] without the condition check, for placements known to
/// violate some condition. The lines still follow their formulas.
pub fn emit_ruleset_unchecked(
    pl: &Placement,
    c: &NorCircuit,
    spec: &RecurrenceSpec,
    enc: &Encoding,
    variant: Variant,
    core_only: bool,
) -> Result<CompiledGame, CompilerError> {
    if pl.pos.len() != c.len() {
        return Err(CompilerError::Invalid(format!("{} positions for {} vertices", pl.pos.len(), c.len())));
    }
    if enc.width() != c.width() || enc.symbols() != spec.alphabet().len() {
        return Err(CompilerError::Invalid("encoding does not match the circuit".into()));
    }
    let res = Residues::new(spec, pl)?;
    let sys = &res.sys;
    let m = pl.m;
    let n = c.len();
    let pos = &pl.pos;
    let lift = |p: IntVec, z: i64| IntVec::xyz(p.x(), p.y(), z);
    let mut lines: BTreeMap<Line, BTreeSet<IntVec>> = BTreeMap::new();

    let wires =
        c.edges().filter(|&(v, _)| Some(v) != c.in_double_prime()).map(|(v, w)| lift(pos[w] - pos[v], 0)).collect();
    lines.insert(Line::Wires, wires);

    let f = enumerate_f(spec.lattice(), m)?;
    let f_minus_i: BTreeSet<IntVec> = f.iter().flat_map(|a| pl.stair.iter().map(move |i| *a - *i)).collect();
    let pair_diffs: FxHashSet<usize> = (0..n).flat_map(|v| (0..n).map(move |w| (v, w))).map(|(v, w)| sys.class(&(pos[w] - pos[v]))).collect();
    let slice0 = f_minus_i
        .iter()
        .filter(|p| {
            let k = sys.class(p);
            !res.stair_diffs.contains(&k) && !pair_diffs.contains(&k)
        })
        .map(|p| lift(*p, 0))
        .collect();
    lines.insert(Line::Slice0, slice0);

    let occupied: FxHashSet<usize> = pos.iter().map(|p| sys.class(p)).collect();
    let mut slice1 = BTreeSet::new();
    for b in spec.betas() {
        for q in &f_minus_i {
            let p = *q - m * *b;
            if pl.stair.iter().all(|i| !occupied.contains(&sys.class(&(p + *i)))) {
                slice1.insert(lift(p, 1));
            }
        }
    }
    lines.insert(Line::Slice1, slice1);

    if !core_only {
        if let Some(ip) = c.in_prime() {
            let b1 = translate_generators(spec.lattice(), spec.betas())?;
            lines.insert(Line::InPrime, b1.iter().map(|l| lift(pos[ip] + m * *l, 1)).collect());
        }
        if let Some(ipp) = c.in_double_prime() {
            let b2 = nonzero_generators(spec.lattice());
            lines.insert(Line::InDoublePrime, b2.iter().map(|l| lift(pos[ipp] + m * *l, 1)).collect());
        }
        lines.insert(Line::Tangent, BTreeSet::from([IntVec::xyz(0, 0, 2)]));
        if variant == Variant::B {
            let ipp = c.in_double_prime().expect("variant B has in''");
            let mut gb = BTreeSet::new();
            for ell in spec.module().generators() {
                let code = enc.encode(spec.f0()[ell]);
                for j in 0..c.width() {
                    let out = c.output(j);
                    // in'' itself is not a source: it is only an option here.
                    for v in c.predecessors(out).into_iter().filter(|&v| v != ipp) {
                        gb.insert(lift(pos[v] - pos[ipp] + m * *ell, 0));
                    }
                    if code[j] == Outcome::N {
                        gb.insert(lift(pos[out] - pos[ipp] + m * *ell, 0));
                    }
                }
            }
            lines.insert(Line::GammaB, gb);
        }
    }

    let all: BTreeSet<IntVec> = lines.values().flatten().copied().collect();
    let ruleset = Ruleset::new(3, all)?;
    let game = if variant == Variant::A && !core_only {
        GameSpec::new(ruleset, emit_defeated(pl, c, spec, enc, variant)?)?
    } else {
        GameSpec::normal(ruleset)
    };
    Ok(CompiledGame { game, placement: pl.clone(), circuit: c.clone(), variant, lines })
}

/// Variant A's defeated positions. Slice 0 is `ℕ²` minus the upward closure of
/// `M ∖ gens M`; slice 1 repeats it and frees the upward closures of
/// `pos(out_j) + mℓ` for generators `ℓ` with `enc(f0(ℓ))_j = P`.
pub fn emit_defeated(
    pl: &Placement,
    c: &NorCircuit,
    spec: &RecurrenceSpec,
    enc: &Encoding,
    variant: Variant,
) -> Result<LatticeSet, CompilerError> {
    if variant != Variant::A {
        return Err(CompilerError::Invalid(format!("defeated positions belong to variant A, not {variant}")));
    }
    let l = spec.lattice();
    let gens = spec.module().generators();
    let b2 = nonzero_generators(l);
    let cand: Vec<IntVec> = gens.iter().flat_map(|g| b2.iter().map(move |b| *g + *b)).collect();
    let lo = IntVec::xy(0, 0);
    let hi = IntVec::xy(
        cand.iter().map(|p| p.x()).max().unwrap_or(0) + 1,
        cand.iter().map(|p| p.y()).max().unwrap_or(0) + 1,
    );
    let inner = |p: &IntVec| spec.module().contains(p) && !spec.module().is_generator(p);
    let upper = minimal_elements(&inner, l, &lo, &hi)?;
    let free = |z: i64| LatticeSet::union(upper.iter().map(|u| LatticeSet::orthant(m_lift(*u, z))).collect());
    let d0 = LatticeSet::diff(LatticeSet::board_slice(3, 0), free(0));
    let mut p_outputs = Vec::new();
    for ell in gens {
        let code = enc.encode(spec.f0()[ell]);
        for j in 0..c.width() {
            if code[j] == Outcome::P {
                p_outputs.push(LatticeSet::orthant(m_lift(pl.pos[c.output(j)] + pl.m * *ell, 1)));
            }
        }
    }
    let d1 = LatticeSet::diff(LatticeSet::diff(LatticeSet::board_slice(3, 1), free(1)), LatticeSet::union(p_outputs));
    Ok(LatticeSet::union(vec![d0, d1]))
}

fn m_lift(p: IntVec, z: i64) -> IntVec {
    IntVec::xyz(p.x(), p.y(), z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden;
    use crate::recurrence::xor_spec;

    #[test]
    fn published_core_lines() {
        let spec = xor_spec();
        let enc = Encoding::single_bit(2, &[spec.symbol("P").unwrap()]);
        let (pl, c) = (golden::published_placement(), golden::published_xor_circuit());
        assert!(matches!(emit_ruleset(&pl, &c, &spec, &enc, Variant::C, true), Err(CompilerError::Conditions(_))));
        let g = emit_ruleset_unchecked(&pl, &c, &spec, &enc, Variant::C, true).unwrap();
        assert_eq!(g.lines.keys().copied().collect::<Vec<_>>(), [Line::Wires, Line::Slice0, Line::Slice1]);
        let set = |v: Vec<IntVec>| v.into_iter().collect::<BTreeSet<_>>();
        assert_eq!(g.lines[&Line::Wires], set(golden::wire_moves()));
        assert_eq!(g.lines[&Line::Slice0], set(golden::slice0_moves()));
        // The printed slice-1 line also lists four base points whose I-translates meet pos(V) + 6ℤ².
        let extra = [(0, 5), (4, 0), (5, 0), (5, 1)];
        let printed: BTreeSet<IntVec> = golden::SLICE1_SHIFTS
            .iter()
            .flat_map(|&(sx, sy)| {
                golden::SLICE1_BASE
                    .iter()
                    .filter(|p| !extra.contains(p))
                    .map(move |&(x, y)| IntVec::xyz(x + sx, y + sy, 1))
            })
            .collect();
        assert_eq!(g.lines[&Line::Slice1], printed);
        assert_eq!(g.game.ruleset().len(), 82);
    }

    #[test]
    fn refuses_failing_placement() {
        let spec = xor_spec();
        let enc = Encoding::single_bit(2, &[1]);
        let mut pl = golden::published_placement();
        pl.m = 1;
        assert!(matches!(
            emit_ruleset(&pl, &golden::published_xor_circuit(), &spec, &enc, Variant::C, true),
            Err(CompilerError::Conditions(_))
        ));
    }

    #[test]
    fn defeated_slices_for_full_quadrant() {
        let spec = xor_spec();
        let (p_sym, n_sym) = (spec.symbol("P").unwrap(), spec.symbol("N").unwrap());
        let c = golden::published_xor_circuit();
        let mut pl = golden::published_placement();
        pl.pos[c.output(0)] = IntVec::xy(0, 0);
        let window: Vec<IntVec> = (0..8).flat_map(|x| (0..8).map(move |y| IntVec::xy(x, y))).collect();
        let slice = |d: &LatticeSet, z: i64| -> Vec<IntVec> {
            window.iter().filter(|p| d.contains(&IntVec::xyz(p.x(), p.y(), z)).unwrap()).copied().collect()
        };
        // f0(0) = P, encoded as P: slice 1 loses its only point
        let enc = Encoding::single_bit(2, &[p_sym]);
        let d = emit_defeated(&pl, &c, &spec, &enc, Variant::A).unwrap();
        assert_eq!(slice(&d, 0), [IntVec::xy(0, 0)]);
        assert!(slice(&d, 1).is_empty());
        assert!(slice(&d, 2).is_empty());
        // encoded as N: nothing is removed
        let enc = Encoding::single_bit(2, &[n_sym]);
        let d = emit_defeated(&pl, &c, &spec, &enc, Variant::A).unwrap();
        assert_eq!(slice(&d, 1), [IntVec::xy(0, 0)]);
        assert!(emit_defeated(&pl, &c, &spec, &enc, Variant::C).is_err());
    }
}
