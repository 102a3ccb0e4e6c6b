use std::collections::BTreeMap;

use super::{Encoding, RecurrenceError, RecurrenceSpec};
use crate::lattice::{IntVec, ModuleIdeal, Sublattice};

/// A radius-1 cellular automaton.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CaRule {
    alphabet: Vec<String>,
    /// Row-major over `(left, center, right)`.
    table: Vec<usize>,
    quiescent: usize,
}

impl CaRule {
    pub fn new(alphabet: Vec<String>, table: Vec<usize>, quiescent: usize) -> Result<Self, RecurrenceError> {
        let n = alphabet.len();
        if n == 0 || table.len() != n * n * n || table.iter().any(|&s| s >= n) || quiescent >= n {
            return Err(RecurrenceError::InvalidSpec("rule table must be total over Σ³".into()));
        }
        let rule = Self { alphabet, table, quiescent };
        if rule.step(quiescent, quiescent, quiescent) != quiescent {
            return Err(RecurrenceError::InvalidSpec(format!("state {} is not quiescent", rule.alphabet[quiescent])));
        }
        Ok(rule)
    }

    /// Wolfram-numbered binary rule over `["0", "1"]` with background `0`.
    pub fn elementary(number: u8) -> Result<Self, RecurrenceError> {
        let table = (0..8).map(|k| (number >> k) as usize & 1).collect::<Vec<_>>();
        // row index l·4 + c·2 + r is exactly the Wolfram bit position.
        Self::new(vec!["0".into(), "1".into()], table, 0)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn quiescent(&self) -> usize {
        self.quiescent
    }

    pub fn step(&self, left: usize, center: usize, right: usize) -> usize {
        let n = self.alphabet.len();
        self.table[(left * n + center) * n + right]
    }

    /// Reads a word whose symbols are single characters of the alphabet.
    pub fn parse_word(&self, word: &str) -> Result<Vec<usize>, RecurrenceError> {
        word.chars()
            .map(|ch| {
                self.alphabet
                    .iter()
                    .position(|a| a.chars().eq(std::iter::once(ch)))
                    .ok_or_else(|| RecurrenceError::InvalidSpec(format!("'{ch}' is not a state")))
            })
            .collect()
    }

    /// Direct simulation from `word` at cells `0..n` on a quiescent background.
    /// Row `t` of the result covers cells `-(steps+1) ..= n+steps`.
    pub fn simulate(&self, word: &[usize], steps: usize) -> CaHistory {
        let pad = steps as i64 + 1;
        let width = word.len() + 2 * pad as usize;
        let mut row = vec![self.quiescent; width];
        row[pad as usize..pad as usize + word.len()].copy_from_slice(word);
        let mut rows = vec![row];
        for _ in 0..steps {
            let prev = rows.last().expect("nonempty");
            let at = |k: isize| if k < 0 || k as usize >= width { self.quiescent } else { prev[k as usize] };
            let next = (0..width as isize).map(|k| self.step(at(k - 1), at(k), at(k + 1))).collect();
            rows.push(next);
        }
        CaHistory { origin: pad, rows, background: self.quiescent }
    }

    /// Binary encoding with the quiescent state as N, for two-state rules.
    pub fn binary_encoding(&self) -> Option<Encoding> {
        (self.alphabet.len() == 2).then(|| Encoding::single_bit(2, &[1 - self.quiescent]))
    }
}

/// Space-time diagram of a simulation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CaHistory {
    origin: i64,
    rows: Vec<Vec<usize>>,
    background: usize,
}

impl CaHistory {
    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    /// State of cell `x` at time `t`; cells beyond the simulated strip are quiescent.
    pub fn get(&self, x: i64, t: usize) -> usize {
        let k = x + self.origin;
        let row = &self.rows[t];
        if k < 0 || k as usize >= row.len() {
            self.background
        } else {
            row[k as usize]
        }
    }
}

/// Cell `(x, t)` sits at `ℓ = (t+x+c, t−x+c)` in the even-sum lattice, with
/// `c` one more than the word length: the two outermost cells of each row
/// fall back to `σ0`, and this keeps them outside the light cone of the word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CaEmbedding {
    pub offset: i64,
}

impl CaEmbedding {
    pub fn for_word(len: usize) -> Self {
        Self { offset: len as i64 + 1 }
    }

    pub fn in_domain(&self, x: i64, t: i64) -> bool {
        t >= 0 && x.abs() <= t + self.offset
    }

    pub fn cell_to_ell(&self, x: i64, t: i64) -> IntVec {
        IntVec::xy(t + x + self.offset, t - x + self.offset)
    }

    pub fn ell_to_cell(&self, ell: &IntVec) -> Option<(i64, i64)> {
        let (a, b) = (ell.x(), ell.y());
        if (a + b) % 2 != 0 {
            return None;
        }
        let (x, t) = ((a - b) / 2, (a + b) / 2 - self.offset);
        self.in_domain(x, t).then_some((x, t))
    }

    /// Cells of the mapped domain with `t ≤ steps`.
    pub fn cells(&self, steps: i64) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..=steps).flat_map(move |t| (-(t + self.offset)..=t + self.offset).map(move |x| (x, t)))
    }
}

/// The recurrence whose value at the image of cell `(x, t)` is the state of
/// that cell, with shifts `(2,0), (1,1), (0,2)` for the left, center and right neighbours.
pub fn ca_to_recurrence(rule: &CaRule, word: &[usize]) -> Result<RecurrenceSpec, RecurrenceError> {
    let n = rule.alphabet.len();
    if word.iter().any(|&s| s >= n) {
        return Err(RecurrenceError::InvalidSpec("word symbol out of range".into()));
    }
    let emb = CaEmbedding::for_word(word.len());
    let c = emb.offset;
    let f0: BTreeMap<IntVec, usize> = (-c..=c)
        .map(|x| {
            let sym = if (0..word.len() as i64).contains(&x) { word[x as usize] } else { rule.quiescent };
            (emb.cell_to_ell(x, 0), sym)
        })
        .collect();
    let module = ModuleIdeal::new(Sublattice::even_sum(), f0.keys().copied())?;
    let betas = vec![IntVec::xy(2, 0), IntVec::xy(1, 1), IntVec::xy(0, 2)];
    RecurrenceSpec::new(module, betas, rule.alphabet.clone(), rule.table.clone(), rule.quiescent, f0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{validate_encoding, RecurrenceEval};

    fn check_against_simulation(number: u8, word: &str, steps: usize) {
        let rule = CaRule::elementary(number).unwrap();
        let w = rule.parse_word(word).unwrap();
        let spec = ca_to_recurrence(&rule, &w).unwrap();
        let emb = CaEmbedding::for_word(w.len());
        let hist = rule.simulate(&w, steps);
        let mut ev = RecurrenceEval::new(&spec);
        for (x, t) in emb.cells(steps as i64) {
            let ell = emb.cell_to_ell(x, t);
            assert_eq!(emb.ell_to_cell(&ell), Some((x, t)));
            assert_eq!(ev.eval(&ell).unwrap(), hist.get(x, t as usize), "rule {number} cell ({x},{t})");
        }
    }

    #[test]
    fn rule_90_is_pascal_mod_2() {
        let rule = CaRule::elementary(90).unwrap();
        let hist = rule.simulate(&[1], 8);
        for t in 0..=8i64 {
            for x in -10..=10i64 {
                let k = x + t;
                let pascal = k >= 0 && k % 2 == 0 && k / 2 <= t && (k / 2) & (t - k / 2) == 0;
                assert_eq!(hist.get(x, t as usize) == 1, pascal, "({x},{t})");
            }
        }
        check_against_simulation(90, "1", 8);
        check_against_simulation(90, "1011", 8);
    }

    #[test]
    fn rule_110_triangle() {
        let rule = CaRule::elementary(110).unwrap();
        let hist = rule.simulate(&[1], 6);
        let rows: Vec<String> =
            (0..=6).map(|t| (-6..=0).map(|x| if hist.get(x, t) == 1 { '1' } else { '0' }).collect()).collect();
        // Rule 110 grows to the left only.
        assert_eq!(rows, ["0000001", "0000011", "0000111", "0001101", "0011111", "0110001", "1110011"]);
        check_against_simulation(110, "1", 6);
        check_against_simulation(30, "0110", 6);
    }

    #[test]
    fn initial_row_is_padded_word() {
        let rule = CaRule::elementary(110).unwrap();
        let w = rule.parse_word("101").unwrap();
        let spec = ca_to_recurrence(&rule, &w).unwrap();
        let emb = CaEmbedding::for_word(3);
        let row: Vec<usize> = (-4..=4).map(|x| spec.f0()[&emb.cell_to_ell(x, 0)]).collect();
        assert_eq!(row, vec![0, 0, 0, 0, 1, 0, 1, 0, 0]);
        assert_eq!(spec.module().generators().len(), 9);
    }

    #[test]
    fn encodings_and_errors() {
        for number in [90, 110] {
            let rule = CaRule::elementary(number).unwrap();
            let spec = ca_to_recurrence(&rule, &[1]).unwrap();
            assert!(validate_encoding(&spec, &rule.binary_encoding().unwrap()).passes());
        }
        assert!(CaRule::elementary(1).is_err());
        assert!(CaRule::elementary(90).unwrap().parse_word("12").is_err());
    }
}
