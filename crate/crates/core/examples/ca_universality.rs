// Embeds elementary cellular automata (rules 90 and 110, one live cell) in
// lattice games and reads the cell states back off the output gates.

use lattice_games::compiler::{compile, SearchOptions};
use lattice_games::engine::Solver;
use lattice_games::lattice::IntVec;
use lattice_games::recurrence::{ca_to_recurrence, CaEmbedding, CaRule, Variant};

fn main() -> anyhow::Result<()> {
    for (number, steps) in [(90u8, 8i64), (110, 6)] {
        let rule = CaRule::elementary(number)?;
        let word = rule.parse_word("1")?;
        let spec = ca_to_recurrence(&rule, &word)?;
        let enc = rule.binary_encoding().expect("two states");
        let cg = compile(&spec, &enc, Variant::B, &SearchOptions::default())?;
        println!("rule {number}: m = {}, {} gates, {} moves", cg.placement.m, cg.circuit.len(), cg.game.ruleset().len());

        let history = rule.simulate(&word, steps as usize);
        let emb = CaEmbedding::for_word(word.len());
        let mut solver = Solver::new(&cg.game)?;
        let mut wrong = 0;
        for t in 0..=steps {
            let mut row = String::new();
            for x in -steps..=steps {
                if !emb.in_domain(x, t) {
                    row.push(' ');
                    continue;
                }
                let ell = emb.cell_to_ell(x, t);
                let bits: Vec<_> = (0..cg.circuit.width())
                    .map(|j| {
                        let p = cg.placement.pos[cg.circuit.output(j)] + cg.placement.m * ell;
                        solver.outcome(&IntVec::xyz(p.x(), p.y(), 1))
                    })
                    .collect::<Result<_, _>>()?;
                let state = enc.decode(&bits).expect("valid code");
                if state != history.get(x, t as usize) {
                    wrong += 1;
                }
                row.push_str(&rule.alphabet()[state].replace('0', ".").replace('1', "#"));
            }
            println!("  {row}");
        }
        println!("  cells disagreeing with direct simulation: {wrong}");
    }
    Ok(())
}
