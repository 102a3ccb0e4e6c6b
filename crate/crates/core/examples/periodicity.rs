// Slice 1 of the 28-move ruleset has no period in the cone x ≥ y ≥ 0: every
// candidate shift up to 12 is refuted by an explicit pair of positions.

use lattice_games::engine::{periodicity_probe, Cone, GameSpec, Probe, SolveMode, Solver, Window};
use lattice_games::golden;
use lattice_games::lattice::IntVec;

fn main() -> anyhow::Result<()> {
    let game = GameSpec::normal(golden::gamma_prime());
    let window = Window::new(IntVec::xyz(0, 0, 1), IntVec::xyz(48, 48, 1));
    let grid = Solver::new(&game)?.solve_window(&window, SolveMode::TopDown)?;
    let cone = Cone::new(IntVec::xy(1, 0), IntVec::xy(1, 1))?;

    let mut refuted = 0;
    for x in -12..=12 {
        for y in -12..=12 {
            if (x, y) == (0, 0) {
                continue;
            }
            let ell = IntVec::xy(x, y);
            match periodicity_probe(&grid, Some(1), &cone, &ell)? {
                Probe::Periodic => println!("{ell}: no counterexample in the window"),
                Probe::Violation { p, at_p, at_shift } => {
                    refuted += 1;
                    if x.abs() + y.abs() <= 1 {
                        println!("{ell}: {p} is {at_p:?} but {} is {at_shift:?}", p - ell);
                    }
                }
            }
        }
    }
    println!("{refuted} of 624 shifts refuted");
    Ok(())
}
