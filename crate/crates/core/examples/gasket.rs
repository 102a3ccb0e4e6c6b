// Outcomes of the 28-move ruleset at `(6i, 6j, 1)` trace Pascal's triangle
// mod 2. Prints the triangle and checks it against Lucas' theorem.

use lattice_games::engine::{GameSpec, Outcome, Solver};
use lattice_games::golden;
use lattice_games::lattice::IntVec;
use lattice_games::recurrence::binom_parity_oracle;

fn main() -> anyhow::Result<()> {
    let game = GameSpec::normal(golden::gamma_prime());
    let mut solver = Solver::new(&game)?;
    let n = 16;
    let mut mismatches = 0;
    for s in 0..n {
        let mut row = String::new();
        for i in 0..=s {
            let j = s - i;
            let o = solver.outcome(&IntVec::xyz(6 * i, 6 * j, 1))?;
            if o != binom_parity_oracle(i as u64, j as u64) {
                mismatches += 1;
            }
            row.push(if o == Outcome::P { '#' } else { '.' });
        }
        println!("{:>w$}{row}", "", w = (n - s) as usize);
    }
    println!("mismatches against C(i+j, i) mod 2: {mismatches}");
    Ok(())
}
