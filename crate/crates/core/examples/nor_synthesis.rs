// Synthesizes a nor circuit for an encoded recurrence step and checks it on
// every input row, then adds the in′ and in″ vertices of variant B.

use lattice_games::recurrence::{encoded_truth_table, eval_circuit, extend_circuit, synthesize_nor_circuit, xor_spec, Encoding, TruthTable, Variant};

fn main() -> anyhow::Result<()> {
    let spec = xor_spec();
    let enc = Encoding::single_bit(2, &[spec.symbol("N").unwrap()]);
    let table = encoded_truth_table(&spec, &enc);
    let c = synthesize_nor_circuit(&table, spec.r())?;
    println!("{} vertices, {} edges", c.len(), c.edges().count());
    for row in 0..1 << table.inputs() {
        let x = TruthTable::row_inputs(table.inputs(), row);
        let out = eval_circuit(&c, &x, None, None)?;
        println!("  {x:?} -> {out:?}");
        assert_eq!(out, table.row(row));
    }
    let b = extend_circuit(&c, Variant::B)?;
    println!("variant B circuit: {} vertices, in' = {:?}, in'' = {:?}", b.len(), b.in_prime(), b.in_double_prime());
    Ok(())
}
