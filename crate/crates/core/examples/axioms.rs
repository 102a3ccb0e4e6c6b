// Pointedness witnesses and the tangent-cone surrogate for the published
// rulesets, and a Farkas certificate for a ruleset with a move and its negation.

use lattice_games::engine::{check_pointedness, check_tangent_cone, Ruleset};
use lattice_games::golden;
use lattice_games::lattice::IntVec;

fn main() -> anyhow::Result<()> {
    let cases = [
        ("printed Γ", golden::printed_gamma()),
        ("Γ′", golden::gamma_prime()),
        ("{±e₁}", Ruleset::new(3, [IntVec::xyz(1, 0, 0), IntVec::xyz(-1, 0, 0)])?),
    ];
    for (name, rs) in cases {
        println!("{name} ({} moves)", rs.len());
        match check_pointedness(&rs) {
            Ok(w) => println!("  pointed, witness {w}"),
            Err(c) => println!("  not pointed: {c}"),
        }
        for line in check_tangent_cone(&rs).to_string().lines() {
            println!("  {line}");
        }
    }
    Ok(())
}
