use std::fs;
use std::path::Path;

use lattice_games::cli::run;
use lattice_games::engine::{GameSpec, Ruleset};
use lattice_games::golden;
use lattice_games::io;
use lattice_games::lattice::IntVec;
use lattice_games::recurrence::binom_parity_oracle;

fn latgame(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("latgame").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn spec_file(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name).to_string_lossy().into_owned()
}

#[test]
fn builtin_prints_the_28_move_ruleset() {
    let (code, out, _) = latgame(&["builtin", "paper-gamma-prime"]);
    assert_eq!(code, 0);
    let loaded = io::parse_game(&out).unwrap();
    assert_eq!(loaded.game, GameSpec::normal(golden::gamma_prime()));
    assert_eq!(loaded.game.ruleset().len(), 28);
    // sorted and stable
    assert_eq!(latgame(&["builtin", "paper-gamma-prime"]).1, out);
    let (code, out, _) = latgame(&["builtin", "paper-gamma"]);
    assert_eq!(code, 0);
    assert_eq!(io::parse_game(&out).unwrap().game.ruleset(), &golden::printed_gamma());
}

#[test]
fn solve_draws_the_gasket_on_the_highlighted_lattice() {
    let (code, out, _) = latgame(&["solve", "paper-gamma-prime", "--window", "108,108,1", "--slice", "1", "--highlight", "6"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 109);
    for (r, row) in rows.iter().enumerate() {
        let y = 108 - r as i64;
        for (x, ch) in row.chars().enumerate() {
            let x = x as i64;
            if x % 6 == 0 && y % 6 == 0 {
                let want = if binom_parity_oracle((x / 6) as u64, (y / 6) as u64).is_p() { '@' } else { ':' };
                assert_eq!(ch, want, "at ({x},{y})");
            } else {
                assert!(ch == '#' || ch == '.');
            }
        }
    }
}

#[test]
fn render_formats_are_deterministic() {
    for format in ["pbm", "svg", "text"] {
        let args = ["render", "paper-gamma-prime", "--window", "30,30,1", "--slice", "1", "--format", format];
        let (code, a, _) = latgame(&args);
        assert_eq!(code, 0);
        assert_eq!(latgame(&args).1, a);
    }
    assert!(latgame(&["render", "paper-gamma-prime", "--window", "5,5,1"]).1.starts_with("<svg"));
    assert!(latgame(&["solve", "paper-gamma-prime", "--window", "5,5,1", "--format", "pbm"]).1.starts_with("P1"));
}

#[test]
fn probe_finds_the_slice_zero_periods() {
    let (code, out, _) =
        latgame(&["probe", "paper-gamma-prime", "--slice", "0", "--cone", "1,0:0,1", "--max-period", "12", "--window", "48,48"]);
    assert_eq!(code, 0);
    assert!(out.contains("basis: (6,0) (0,6)"), "{out}");
    let (_, out, _) = latgame(&["probe", "paper-gamma-prime", "--slice", "1", "--cone", "1,0:1,1", "--window", "48,48", "--ell", "6,0"]);
    assert!(out.starts_with("(6,0): violation at"), "{out}");
}

#[test]
fn axioms_and_equiv_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let rs = Ruleset::new(3, [IntVec::xyz(1, 0, 0), IntVec::xyz(-1, 0, 0)]).unwrap();
    fs::write(&bad, io::game_to_json(&GameSpec::normal(rs), None)).unwrap();
    let bad = bad.to_str().unwrap();

    let (code, out, _) = latgame(&["axioms", "paper-gamma-prime"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("pointed: witness"));
    let (code, out, _) = latgame(&["axioms", bad]);
    assert_eq!(code, 1);
    assert!(out.starts_with("not pointed"));
    let (code, _, err) = latgame(&["solve", bad, "--window", "3,3,0"]);
    assert_eq!(code, 2);
    assert!(err.contains("pointed"), "{err}");

    assert_eq!(latgame(&["equiv", "paper-gamma-prime", "paper-gamma-prime", "--window", "10,10,1"]).0, 0);
    assert_eq!(latgame(&["equiv", "paper-gamma", "paper-gamma-prime", "--window", "10,10,1"]).0, 1);
}

#[test]
fn usage_errors() {
    assert_eq!(latgame(&[]).0, 2);
    assert_eq!(latgame(&["solve", "paper-gamma-prime"]).0, 2);
    assert_eq!(latgame(&["solve", "paper-gamma-prime", "--window", "3,3,1", "--nope"]).0, 2);
    assert_eq!(latgame(&["solve", "paper-gamma-prime", "--window", "3,x,1"]).0, 2);
    assert_eq!(latgame(&["compile", "/nonexistent.json", "-o", "/tmp/x.json"]).0, 2);
    assert_eq!(latgame(&["oracle", "fibonacci", "--window", "3,3"]).0, 2);
    assert_eq!(latgame(&["--help"]).0, 0);
}

#[test]
fn compile_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("xor.json");
    let out_s = out.to_str().unwrap();
    let spec = spec_file("xor.json");
    let (code, _, err) = latgame(&["compile", &spec, "--seed", "0", "-o", out_s]);
    assert_eq!(code, 0, "{err}");
    assert!(io::sidecar_path(&out).exists());

    // parsed back identically, labels included
    let text = fs::read_to_string(&out).unwrap();
    let loaded = io::parse_game(&text).unwrap();
    let cg = io::load_compiled(out_s).unwrap();
    assert_eq!(loaded.lines.as_ref(), Some(&cg.lines));
    assert_eq!(io::game_to_json(&loaded.game, loaded.lines.as_ref()), text);

    let first = fs::read(&out).unwrap();
    latgame(&["compile", &spec, "--seed", "0", "-o", out_s]);
    assert_eq!(fs::read(&out).unwrap(), first);

    let (code, report, _) = latgame(&["verify", out_s, "--spec", &spec, "--bound", "60"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.contains("outputs: ok"));
}

#[test]
fn verify_fails_on_a_tampered_ruleset() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("xor.json");
    let spec = spec_file("xor.json");
    latgame(&["compile", &spec, "-o", out.to_str().unwrap()]);
    // drop every wire move; the sidecar still describes the circuit
    let mut loaded = io::parse_game(&fs::read_to_string(&out).unwrap()).unwrap();
    let wires = loaded.lines.as_mut().unwrap().remove(&lattice_games::compiler::Line::Wires).unwrap();
    let mut rs = loaded.game.ruleset().clone();
    for w in &wires {
        rs = rs.without_move(w);
    }
    let left: std::collections::BTreeSet<IntVec> = loaded.lines.as_ref().unwrap().values().flatten().copied().collect();
    assert!(rs.moves().all(|m| left.contains(m)));
    fs::write(&out, io::game_to_json(&GameSpec::normal(rs), loaded.lines.as_ref())).unwrap();
    let (code, report, err) = latgame(&["verify", out.to_str().unwrap(), "--spec", &spec, "--bound", "40"]);
    assert_eq!(code, 1, "{report}{err}");
    assert!(report.contains("FAIL"));
}

#[test]
fn compile_ca_shorthand() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r90.json");
    let spec = spec_file("rule90.json");
    let (code, summary, err) = latgame(&["compile", &spec, "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(summary.starts_with("variant B"));
    assert!(summary.contains("gamma_b"));
    let (code, report, _) = latgame(&["verify", out.to_str().unwrap(), "--spec", &spec, "--bound", "80"]);
    assert_eq!(code, 0, "{report}");
}

#[test]
fn oracle_patterns_agree() {
    let a = latgame(&["oracle", "binom-parity", "--window", "31,31"]);
    let b = latgame(&["oracle", "xor", "--window", "31,31"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}
