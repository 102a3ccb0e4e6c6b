// Sublattices, residue classes and the position-set grammar used for
// defeated positions.

use lattice_games::lattice::{enumerate_f, IntVec, LatticeSet, Sublattice};

fn main() -> anyhow::Result<()> {
    let l = Sublattice::even_sum();
    println!("L = {:?}, index {}", l.basis().iter().map(ToString::to_string).collect::<Vec<_>>(), l.index());
    let res = l.scaled(3)?.residues();
    println!("ℤ²/3L has {} classes; (5,2) is in class {}", res.index(), res.class(&IntVec::xy(5, 2)));
    let f = enumerate_f(&l, 3)?;
    println!("F for m = 3: {} points", f.len());

    let d: LatticeSet = "diff(union(orthant(0,0,0),finite{(1,2,3)}),orthant(2,2,0))".parse()?;
    for p in [IntVec::xyz(1, 0, 0), IntVec::xyz(3, 3, 0)] {
        println!("{p} ∈ {d}: {}", d.contains(&p)?);
    }
    Ok(())
}
