// Compiles f(ℓ) = f(ℓ−(1,0)) xor f(ℓ−(0,1)) into a ruleset on ℕ³ and checks
// the outcomes at the output gates against the recurrence.

use lattice_games::compiler::{compile, verify_construction, SearchOptions};
use lattice_games::recurrence::{xor_spec, Encoding, Variant};

fn main() -> anyhow::Result<()> {
    let spec = xor_spec();
    // σ0 must encode as all-N, so the symbol N is carried by a P output
    let enc = Encoding::single_bit(2, &[spec.symbol("N").unwrap()]);
    let cg = compile(&spec, &enc, Variant::C, &SearchOptions { seed: 0, ..SearchOptions::default() })?;

    println!("m = {}, I = {:?}, ν = {}", cg.placement.m, cg.placement.stair.iter().map(ToString::to_string).collect::<Vec<_>>(), cg.placement.normal);
    for (v, p) in cg.placement.pos.iter().enumerate() {
        println!("  {:<6} at {p}", cg.circuit.role(v).to_string());
    }
    for (line, moves) in &cg.lines {
        println!("{line}: {}", moves.len());
    }

    let report = verify_construction(&cg, &spec, &enc, 12 * cg.placement.m)?;
    print!("{report}");
    Ok(())
}
