use std::fmt;

use serde::{Deserialize, Serialize};

use super::{RecurrenceError, RecurrenceSpec, TruthTable};
use crate::engine::Outcome;

/// Injective `enc : Σ → {P,N}^s`, stored per symbol index.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Encoding {
    codes: Vec<Vec<Outcome>>,
}

impl Encoding {
    pub fn new(codes: Vec<Vec<Outcome>>) -> Result<Self, RecurrenceError> {
        let s = codes.first().map_or(0, Vec::len);
        if s == 0 || codes.iter().any(|c| c.len() != s) {
            return Err(RecurrenceError::InvalidEncoding("codes must share a positive width".into()));
        }
        Ok(Self { codes })
    }

    /// `s = 1` with `enc(σ) = P` exactly for the listed symbols.
    pub fn single_bit(symbols: usize, p_symbols: &[usize]) -> Self {
        Self { codes: (0..symbols).map(|k| vec![Outcome::from_bool(p_symbols.contains(&k))]).collect() }
    }

    pub fn width(&self) -> usize {
        self.codes[0].len()
    }

    pub fn symbols(&self) -> usize {
        self.codes.len()
    }

    pub fn encode(&self, sym: usize) -> &[Outcome] {
        &self.codes[sym]
    }

    pub fn decode(&self, bits: &[Outcome]) -> Option<usize> {
        self.codes.iter().position(|c| c == bits)
    }

    pub fn codes(&self) -> &[Vec<Outcome>] {
        &self.codes
    }
}

/// Outcome of each clause of [`validate_encoding`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EncodingReport {
    pub clauses: Vec<(&'static str, Result<(), String>)>,
}

impl EncodingReport {
    pub fn passes(&self) -> bool {
        self.clauses.iter().all(|(_, r)| r.is_ok())
    }

    /// Name of the first violated clause.
    pub fn first_failure(&self) -> Option<&'static str> {
        self.clauses.iter().find(|(_, r)| r.is_err()).map(|(n, _)| *n)
    }
}

impl fmt::Display for EncodingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, r) in &self.clauses {
            match r {
                Ok(()) => writeln!(f, "{name}: ok")?,
                Err(e) => writeln!(f, "{name}: FAIL ({e})")?,
            }
        }
        Ok(())
    }
}

/// Whether bit `bit` of `enc(g(σ))` changes with argument `i` somewhere.
fn depends_on(spec: &RecurrenceSpec, enc: &Encoding, bit: usize, i: usize) -> bool {
    let n = spec.alphabet().len();
    let r = spec.r();
    let rows = spec.g_table().len();
    (0..rows).any(|row| {
        let mut args: Vec<usize> = (0..r).map(|k| (row / n.pow((r - 1 - k) as u32)) % n).collect();
        let base = enc.encode(spec.g(&args))[bit];
        (0..n).any(|alt| {
            args[i] = alt;
            enc.encode(spec.g(&args))[bit] != base
        })
    })
}

/// Checks `enc(σ0) = (N,…,N)`, injectivity, and that the first (last) output
/// bit depends on an argument whose shift has nonpositive first (second) coordinate.
pub fn validate_encoding(spec: &RecurrenceSpec, enc: &Encoding) -> EncodingReport {
    let mut clauses = Vec::new();
    clauses.push((
        "alphabet",
        if enc.symbols() == spec.alphabet().len() {
            Ok(())
        } else {
            Err(format!("{} codes for {} symbols", enc.symbols(), spec.alphabet().len()))
        },
    ));
    if enc.symbols() != spec.alphabet().len() {
        return EncodingReport { clauses };
    }
    clauses.push((
        "sigma0",
        if enc.encode(spec.sigma0()).iter().all(|&b| b == Outcome::N) {
            Ok(())
        } else {
            Err(format!("enc({}) is not all N", spec.alphabet()[spec.sigma0()]))
        },
    ));
    let mut injective = Ok(());
    for a in 0..enc.symbols() {
        for b in a + 1..enc.symbols() {
            if enc.encode(a) == enc.encode(b) && injective.is_ok() {
                injective = Err(format!("{} and {} share a code", spec.alphabet()[a], spec.alphabet()[b]));
            }
        }
    }
    clauses.push(("injective", injective));
    let s = enc.width();
    let first = (0..spec.r()).filter(|&i| spec.betas()[i].x() <= 0).any(|i| depends_on(spec, enc, 0, i));
    clauses.push((
        "first-bit-dependency",
        if first { Ok(()) } else { Err("bit 1 depends on no argument with β₁ ≤ 0".into()) },
    ));
    let last = (0..spec.r()).filter(|&i| spec.betas()[i].y() <= 0).any(|i| depends_on(spec, enc, s - 1, i));
    clauses.push((
        "last-bit-dependency",
        if last { Ok(()) } else { Err(format!("bit {s} depends on no argument with β₂ ≤ 0")) },
    ));
    EncodingReport { clauses }
}

/// The table of `g̃ : {P,N}^{r·s} → {P,N}^s`; input `t = i·s + j` carries bit `j`
/// of argument `i`. Rows that decode to no symbol tuple map to all `N`.
pub fn encoded_truth_table(spec: &RecurrenceSpec, enc: &Encoding) -> TruthTable {
    let s = enc.width();
    let k = spec.r() * s;
    let rows = (0..1usize << k)
        .map(|row| {
            let args: Option<Vec<usize>> = (0..spec.r())
                .map(|i| {
                    let bits: Vec<Outcome> = (0..s).map(|j| Outcome::from_bool(row >> (i * s + j) & 1 == 1)).collect();
                    enc.decode(&bits)
                })
                .collect();
            match args {
                Some(a) => enc.encode(spec.g(&a)).to_vec(),
                None => vec![Outcome::N; s],
            }
        })
        .collect();
    TruthTable::new(k, s, rows).expect("row count matches")
}
