//! JSON files: rulesets (optionally labelled by line), recurrence specs with
//! the cellular-automaton shorthand, and the placement sidecar written next
//! to a compiled ruleset. Objects are written with sorted keys.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::compiler::{CompiledGame, Line, Placement};
use crate::engine::{GameSpec, Outcome, Ruleset};
use crate::golden;
use crate::lattice::{IntVec, LatticeSet, ModuleIdeal, Sublattice};
use crate::recurrence::{ca_to_recurrence, CaRule, Encoding, NorCircuit, RecurrenceSpec, Variant};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RulesetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    defeated: Option<LatticeSet>,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lines: Option<BTreeMap<String, BTreeSet<IntVec>>>,
    moves: BTreeSet<IntVec>,
}

/// A game read from disk, with its line labels when it was compiled.
#[derive(Clone, Debug)]
pub struct LoadedGame {
    pub game: GameSpec,
    pub lines: Option<BTreeMap<Line, BTreeSet<IntVec>>>,
}

fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json's map type keeps keys sorted
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = String::new();
    write_json(&v, 0, &mut s);
    s.push('\n');
    s
}

/// Pretty printing with short object-free arrays kept on one line, so that
/// each vector occupies a single line.
fn inline(v: &Value) -> bool {
    fn flat(v: &Value) -> bool {
        match v {
            Value::Array(xs) => xs.iter().all(flat),
            Value::Object(_) => false,
            _ => true,
        }
    }
    let Value::Array(xs) = v else { return false };
    xs.iter().all(|x| !x.is_array() && !x.is_object())
        || (flat(v) && serde_json::to_string(v).is_ok_and(|t| t.len() <= 40))
}

fn write_json(v: &Value, depth: usize, s: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(_) if inline(v) => s.push_str(&serde_json::to_string(v).expect("serializable")),
        Value::Array(xs) => {
            s.push_str("[\n");
            for (k, x) in xs.iter().enumerate() {
                s.push_str(&pad(depth + 1));
                write_json(x, depth + 1, s);
                s.push_str(if k + 1 < xs.len() { ",\n" } else { "\n" });
            }
            s.push_str(&pad(depth));
            s.push(']');
        }
        Value::Object(map) if map.is_empty() => s.push_str("{}"),
        Value::Object(map) => {
            s.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                s.push_str(&pad(depth + 1));
                s.push_str(&serde_json::to_string(key).expect("serializable"));
                s.push_str(": ");
                write_json(x, depth + 1, s);
                s.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            s.push_str(&pad(depth));
            s.push('}');
        }
        _ => s.push_str(&serde_json::to_string(v).expect("serializable")),
    }
}

fn line_from_name(name: &str) -> Result<Line> {
    Line::ALL.into_iter().find(|l| l.name() == name).ok_or_else(|| anyhow!("unknown line label '{name}'"))
}

pub fn game_to_json(game: &GameSpec, lines: Option<&BTreeMap<Line, BTreeSet<IntVec>>>) -> String {
    let defeated = (!game.defeated().is_trivially_empty()).then(|| game.defeated().clone());
    let file = RulesetFile {
        defeated,
        dim: game.dim(),
        lines: lines.map(|ls| ls.iter().map(|(l, v)| (l.name().to_string(), v.clone())).collect()),
        moves: game.ruleset().moves().copied().collect(),
    };
    to_sorted_json(&file)
}

pub fn parse_game(text: &str) -> Result<LoadedGame> {
    let file: RulesetFile = serde_json::from_str(text).context("malformed ruleset file")?;
    let ruleset = Ruleset::new(file.dim, file.moves)?;
    let game = match file.defeated {
        Some(d) => GameSpec::new(ruleset, d)?,
        None => GameSpec::normal(ruleset),
    };
    let lines = match file.lines {
        None => None,
        Some(ls) => {
            let mut out = BTreeMap::new();
            for (name, moves) in ls {
                out.insert(line_from_name(&name)?, moves);
            }
            let union: BTreeSet<IntVec> = out.values().flatten().copied().collect();
            let moves: BTreeSet<IntVec> = game.ruleset().moves().copied().collect();
            if union != moves {
                bail!("the labelled lines do not add up to the move list");
            }
            Some(out)
        }
    };
    Ok(LoadedGame { game, lines })
}

/// Reads a ruleset file, or a builtin name such as `paper-gamma-prime`.
pub fn load_game(source: &str) -> Result<LoadedGame> {
    if let Some(rs) = golden::builtin(source) {
        return Ok(LoadedGame { game: GameSpec::normal(rs), lines: None });
    }
    let text = fs::read_to_string(source).with_context(|| format!("cannot read ruleset '{source}'"))?;
    parse_game(&text).with_context(|| format!("in '{source}'"))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaBlock {
    rule: u8,
    word: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    steps: Option<i64>,
}

/// Symbols are given by name; codes are strings over `P` and `N`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ca: Option<CaBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lattice: Option<Vec<IntVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<IntVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    betas: Option<Vec<IntVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f0: Option<Vec<(IntVec, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    encoding: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variant: Option<Variant>,
}

/// A recurrence together with the encoding and variant to compile it with.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub spec: RecurrenceSpec,
    pub encoding: Encoding,
    pub variant: Variant,
    /// Set for the automaton shorthand.
    pub ca: Option<CaSource>,
}

#[derive(Clone, Debug)]
pub struct CaSource {
    pub rule: CaRule,
    pub word: Vec<usize>,
    pub steps: Option<i64>,
}

fn parse_code(code: &str) -> Result<Vec<Outcome>> {
    code.chars()
        .map(|c| match c {
            'P' => Ok(Outcome::P),
            'N' => Ok(Outcome::N),
            other => Err(anyhow!("code character '{other}' is neither P nor N")),
        })
        .collect()
}

pub fn parse_spec(text: &str) -> Result<LoadedSpec> {
    let file: SpecFile = serde_json::from_str(text).context("malformed recurrence spec")?;
    if let Some(ca) = file.ca {
        let rule = CaRule::elementary(ca.rule)?;
        let word = rule.parse_word(&ca.word)?;
        let spec = ca_to_recurrence(&rule, &word)?;
        let encoding = rule.binary_encoding().expect("elementary rules are binary");
        let variant = file.variant.unwrap_or(Variant::B);
        return Ok(LoadedSpec { spec, encoding, variant, ca: Some(CaSource { rule, word, steps: ca.steps }) });
    }
    let need = |name: &str| anyhow!("recurrence spec lacks '{name}'");
    let alphabet = file.alphabet.ok_or_else(|| need("alphabet"))?;
    let sym = |name: &str| {
        alphabet.iter().position(|a| a == name).ok_or_else(|| anyhow!("'{name}' is not in the alphabet"))
    };
    let lattice = match file.lattice {
        Some(basis) => Sublattice::new(basis)?,
        None => Sublattice::standard(2),
    };
    let module = match file.generators {
        Some(gens) => ModuleIdeal::new(lattice, gens)?,
        None => ModuleIdeal::whole(lattice),
    };
    let betas = file.betas.ok_or_else(|| need("betas"))?;
    let g = file.g.ok_or_else(|| need("g"))?.iter().map(|s| sym(s)).collect::<Result<Vec<_>>>()?;
    let sigma0 = sym(&file.sigma0.ok_or_else(|| need("sigma0"))?)?;
    let f0 = file
        .f0
        .ok_or_else(|| need("f0"))?
        .iter()
        .map(|(p, s)| Ok((*p, sym(s)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let spec = RecurrenceSpec::new(module, betas, alphabet.clone(), g, sigma0, f0)?;
    let codes = file.encoding.ok_or_else(|| need("encoding"))?;
    let mut table = Vec::with_capacity(alphabet.len());
    for a in &alphabet {
        let code = codes.get(a).ok_or_else(|| anyhow!("encoding lacks symbol '{a}'"))?;
        table.push(parse_code(code)?);
    }
    if let Some(extra) = codes.keys().find(|k| !alphabet.contains(k)) {
        bail!("encoding names unknown symbol '{extra}'");
    }
    let encoding = Encoding::new(table)?;
    Ok(LoadedSpec { spec, encoding, variant: file.variant.unwrap_or(Variant::C), ca: None })
}

pub fn load_spec(path: &str) -> Result<LoadedSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read spec '{path}'"))?;
    parse_spec(&text).with_context(|| format!("in '{path}'"))
}

/// Writes a spec in the long form that [`parse_spec`] reads back.
pub fn spec_to_json(spec: &RecurrenceSpec, enc: &Encoding, variant: Variant) -> String {
    let name = |k: usize| spec.alphabet()[k].clone();
    let code = |k: usize| enc.encode(k).iter().map(|o| if o.is_p() { 'P' } else { 'N' }).collect::<String>();
    let file = SpecFile {
        ca: None,
        lattice: Some(spec.lattice().basis().to_vec()),
        generators: Some(spec.module().generators().to_vec()),
        betas: Some(spec.betas().to_vec()),
        alphabet: Some(spec.alphabet().to_vec()),
        g: Some(spec.g_table().iter().map(|&k| name(k)).collect()),
        sigma0: Some(name(spec.sigma0())),
        f0: Some(spec.f0().iter().map(|(p, &k)| (*p, name(k))).collect()),
        encoding: Some((0..spec.alphabet().len()).map(|k| (name(k), code(k))).collect()),
        variant: Some(variant),
    };
    to_sorted_json(&file)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sidecar {
    circuit: NorCircuit,
    placement: Placement,
    variant: Variant,
}

/// `<ruleset>.placement.json`.
pub fn sidecar_path(ruleset: &Path) -> PathBuf {
    let mut s = ruleset.as_os_str().to_owned();
    s.push(".placement.json");
    PathBuf::from(s)
}

/// Writes the ruleset and its placement sidecar.
pub fn write_compiled(cg: &CompiledGame, out: &Path) -> Result<()> {
    fs::write(out, game_to_json(&cg.game, Some(&cg.lines))).with_context(|| format!("cannot write {}", out.display()))?;
    let side = Sidecar { circuit: cg.circuit.clone(), placement: cg.placement.clone(), variant: cg.variant };
    let path = sidecar_path(out);
    fs::write(&path, to_sorted_json(&side)).with_context(|| format!("cannot write {}", path.display()))
}

/// Reads a compiled ruleset back together with its sidecar.
pub fn load_compiled(path: &str) -> Result<CompiledGame> {
    let loaded = load_game(path)?;
    let side_path = sidecar_path(Path::new(path));
    let text = fs::read_to_string(&side_path)
        .with_context(|| format!("cannot read placement sidecar {}", side_path.display()))?;
    let side: Sidecar = serde_json::from_str(&text).context("malformed placement sidecar")?;
    side.placement.validate()?;
    if side.placement.pos.len() != side.circuit.len() {
        bail!("sidecar places {} vertices of a {}-vertex circuit", side.placement.pos.len(), side.circuit.len());
    }
    let lines = loaded.lines.ok_or_else(|| anyhow!("'{path}' carries no line labels"))?;
    Ok(CompiledGame { game: loaded.game, placement: side.placement, circuit: side.circuit, variant: side.variant, lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::xor_spec;
    use proptest::prelude::*;

    #[test]
    fn ruleset_round_trip_is_sorted() {
        let g = GameSpec::normal(golden::gamma_prime());
        let text = game_to_json(&g, None);
        assert_eq!(parse_game(&text).unwrap().game, g);
        assert_eq!(game_to_json(&parse_game(&text).unwrap().game, None), text);
        assert!(text.find("\"dim\"").unwrap() < text.find("\"moves\"").unwrap());
    }

    #[test]
    fn defeated_and_unknown_fields() {
        let text = r#"{"dim":2,"moves":[[1,0],[0,1]],"defeated":"orthant(3,3)"}"#;
        let g = parse_game(text).unwrap().game;
        assert!(!g.is_position(&IntVec::xy(4, 3)));
        assert!(parse_game(r#"{"dim":2,"moves":[[1,0]],"extra":1}"#).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec = xor_spec();
        let enc = Encoding::single_bit(2, &[1]);
        let text = spec_to_json(&spec, &enc, Variant::C);
        let back = parse_spec(&text).unwrap();
        assert_eq!(back.spec, spec);
        assert_eq!(back.encoding, enc);
        assert_eq!(back.variant, Variant::C);
    }

    #[test]
    fn ca_shorthand() {
        let s = parse_spec(r#"{"ca":{"rule":110,"word":"1","steps":4}}"#).unwrap();
        assert_eq!(s.variant, Variant::B);
        assert_eq!(s.ca.unwrap().steps, Some(4));
        assert!(parse_spec(r#"{"ca":{"rule":110,"word":"2"}}"#).is_err());
    }

    proptest! {
        #[test]
        fn random_rulesets_round_trip(moves in proptest::collection::btree_set((-9i64..9, -9i64..9, 0i64..3), 1..30)) {
            prop_assume!(!moves.contains(&(0, 0, 0)));
            let rs = Ruleset::new(3, moves.iter().map(|&(x, y, z)| IntVec::xyz(x, y, z))).unwrap();
            let text = game_to_json(&GameSpec::normal(rs.clone()), None);
            let back = parse_game(&text).unwrap();
            prop_assert_eq!(back.game.ruleset(), &rs);
            prop_assert_eq!(game_to_json(&back.game, None), text);
        }
    }
}
