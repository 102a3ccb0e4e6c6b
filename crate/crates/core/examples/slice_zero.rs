// On the plane z = 0 the P-positions of the 28-move ruleset are the
// staircase I repeated with period 6.

use lattice_games::engine::{find_periods, Cone, GameSpec, SolveMode, Solver, Window};
use lattice_games::golden;
use lattice_games::lattice::IntVec;

fn main() -> anyhow::Result<()> {
    let game = GameSpec::normal(golden::gamma_prime());
    let window = Window::new(IntVec::xyz(0, 0, 0), IntVec::xyz(47, 47, 0));
    let grid = Solver::new(&game)?.solve_window(&window, SolveMode::BottomUp)?;

    let stair = golden::stair();
    let expected = |p: &IntVec| stair.iter().any(|i| (p.x() - i.x()) % 6 == 0 && (p.y() - i.y()) % 6 == 0 && p.x() >= i.x() && p.y() >= i.y());
    let p_positions = grid.p_positions();
    let agree = window.points().all(|p| p_positions.contains(&p) == expected(&p));
    println!("{} P-positions in [0,47]²×{{0}}; matches I + 6ℤ²: {agree}", p_positions.len());

    let periods = find_periods(&grid, Some(0), &Cone::quadrant(), 12)?;
    if let Some([a, b]) = periods.basis {
        println!("period lattice basis: {a} {b}");
    }
    Ok(())
}
