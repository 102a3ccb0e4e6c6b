// Runs the emission formulas on the published xor placement and compares
// them with the printed ruleset. The placement fails condition (d), so the
// checked emitter refuses it and the unchecked one is used for the diff.

use std::collections::BTreeSet;

use lattice_games::compiler::{check_conditions, emit_ruleset, emit_ruleset_unchecked, Line};
use lattice_games::golden;
use lattice_games::lattice::IntVec;
use lattice_games::recurrence::{xor_spec, Encoding, Variant};

fn main() -> anyhow::Result<()> {
    let spec = xor_spec();
    let enc = Encoding::single_bit(2, &[spec.symbol("N").unwrap()]);
    let (pl, circuit) = (golden::published_placement(), golden::published_xor_circuit());

    let report = check_conditions(&pl, &circuit, &spec, Variant::C)?;
    print!("{report}");
    if emit_ruleset(&pl, &circuit, &spec, &enc, Variant::C, true).is_err() {
        println!("emit_ruleset refuses the placement");
    }

    let emitted = emit_ruleset_unchecked(&pl, &circuit, &spec, &enc, Variant::C, true)?;
    let printed: BTreeSet<IntVec> = golden::printed_gamma().moves().copied().collect();
    let ours: BTreeSet<IntVec> = emitted.game.ruleset().moves().copied().collect();
    for line in [Line::Wires, Line::Slice0, Line::Slice1] {
        println!("{line}: {} moves", emitted.lines[&line].len());
    }
    println!("printed only: {:?}", printed.difference(&ours).map(ToString::to_string).collect::<Vec<_>>());
    println!("emitted only: {:?}", ours.difference(&printed).map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}
