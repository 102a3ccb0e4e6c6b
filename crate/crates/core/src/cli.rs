//! The `latgame` command line. [`run`] never exits the process; it returns
//! 0 on success, 1 when a check fails and 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use crate::compiler::{self, verify_construction, SearchOptions};
use crate::engine::{
    check_pointedness, check_tangent_cone, equivalence_in_window, find_periods, periodicity_probe, render_grid, Cell,
    Cone, Equivalence, ImageFormat, OutcomeGrid, Probe, RenderOptions, SolveMode, Solver, Window,
};
use crate::golden;
use crate::io;
use crate::lattice::IntVec;
use crate::recurrence::{binom_parity_oracle, xor_spec, RecurrenceEval, Variant};

#[derive(Parser)]
#[command(name = "latgame", about = "Exact lattice-game solver and recurrence compiler")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pointedness witness (or Farkas certificate) and the tangent-cone surrogate.
    Axioms { ruleset: String },
    /// Solve a window and print one slice.
    Solve(SolveArgs),
    /// Like `solve`, defaulting to SVG.
    Render(SolveArgs),
    /// Compile a recurrence spec into a ruleset and placement sidecar.
    Compile {
        spec: String,
        #[arg(long)]
        variant: Option<Variant>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        core_only: bool,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Check a compiled ruleset against its recurrence.
    Verify {
        ruleset: String,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        bound: i64,
    },
    /// Search periods of one slice inside a cone.
    Probe {
        ruleset: String,
        #[arg(long)]
        slice: Option<i64>,
        #[arg(long)]
        cone: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_period: i64,
        #[arg(long)]
        window: String,
        /// Probe a single period instead of searching.
        #[arg(long)]
        ell: Option<String>,
    },
    /// Compare the P-positions of two games on a window.
    Equiv {
        left: String,
        right: String,
        #[arg(long)]
        window: String,
    },
    /// Print a reference pattern: `binom-parity` or `xor`.
    Oracle {
        name: String,
        #[arg(long)]
        window: String,
    },
    /// Print a builtin ruleset.
    Builtin { name: String },
}

#[derive(clap::Args)]
struct SolveArgs {
    ruleset: String,
    #[arg(long)]
    window: String,
    #[arg(long)]
    slice: Option<i64>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    highlight: Option<i64>,
    #[arg(long, default_value_t = 1)]
    stride: i64,
}

/// Exit status for a failed check, as opposed to a usage error.
struct CheckFailed;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 2 { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(Ok(())) => 0,
        Ok(Err(CheckFailed)) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn parse_vec(s: &str) -> Result<IntVec> {
    let coords: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().with_context(|| format!("'{t}' is not an integer")))
        .collect::<Result<_>>()?;
    Ok(IntVec::try_new(&coords)?)
}

fn parse_cone(s: &str) -> Result<Cone> {
    let (r, t) = s.split_once(':').ok_or_else(|| anyhow!("cone must read rx,ry:sx,sy"))?;
    Ok(Cone::new(parse_vec(r)?, parse_vec(t)?)?)
}

/// The window `[0, hi]`, flattened to slice `k` when one is given.
fn window_for(hi: IntVec, dim: usize, slice: Option<i64>) -> Result<(Window, Option<i64>)> {
    if hi.dim() != dim {
        bail!("window {hi} does not have dimension {dim}");
    }
    match (dim, slice) {
        (3, Some(k)) => Ok((Window::new(IntVec::xyz(0, 0, k), IntVec::xyz(hi.x(), hi.y(), k)), Some(k))),
        (3, None) => Ok((Window::new(IntVec::xyz(0, 0, hi.z()), hi), Some(hi.z()))),
        (2, None) => Ok((Window::upto(hi), None)),
        _ => bail!("--slice applies to 3-dimensional games only"),
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<Result<(), CheckFailed>> {
    let pass = |ok: bool| if ok { Ok(()) } else { Err(CheckFailed) };
    match cmd {
        Cmd::Axioms { ruleset } => {
            let g = io::load_game(&ruleset)?.game;
            let pointed = check_pointedness(g.ruleset());
            match &pointed {
                Ok(w) => writeln!(out, "pointed: witness {w}")?,
                Err(c) => writeln!(out, "not pointed: {c}")?,
            }
            let tc = check_tangent_cone(g.ruleset());
            writeln!(out, "tangent cone (surrogate, advisory):")?;
            write!(out, "{tc}")?;
            Ok(pass(pointed.is_ok()))
        }
        Cmd::Solve(a) => solve(a, ImageFormat::Text, out).map(Ok),
        Cmd::Render(a) => solve(a, ImageFormat::Svg, out).map(Ok),
        Cmd::Compile { spec, variant, seed, core_only, out: path } => {
            let loaded = io::load_spec(&spec)?;
            let variant = variant.unwrap_or(loaded.variant);
            let opts = SearchOptions { seed, ..SearchOptions::default() };
            let mut cg = compiler::compile(&loaded.spec, &loaded.encoding, variant, &opts)?;
            if core_only {
                cg = compiler::emit_ruleset(&cg.placement, &cg.circuit, &loaded.spec, &loaded.encoding, variant, true)?;
            }
            io::write_compiled(&cg, &path)?;
            writeln!(out, "variant {variant}, m = {}, {} vertices, {} moves", cg.placement.m, cg.circuit.len(), cg.game.ruleset().len())?;
            for (line, moves) in &cg.lines {
                writeln!(out, "  {line}: {}", moves.len())?;
            }
            writeln!(out, "wrote {} and {}", path.display(), io::sidecar_path(&path).display())?;
            Ok(Ok(()))
        }
        Cmd::Verify { ruleset, spec, bound } => {
            let cg = io::load_compiled(&ruleset)?;
            let loaded = io::load_spec(&spec)?;
            let report = verify_construction(&cg, &loaded.spec, &loaded.encoding, bound)?;
            write!(out, "{report}")?;
            Ok(pass(report.passes()))
        }
        Cmd::Probe { ruleset, slice, cone, max_period, window, ell } => {
            let g = io::load_game(&ruleset)?.game;
            let hi = parse_vec(&window)?;
            if hi.dim() != 2 {
                bail!("probe windows are planar: x,y");
            }
            let hi = if g.dim() == 3 { hi.extend(slice.unwrap_or(0)) } else { hi };
            let (w, level) = window_for(hi, g.dim(), if g.dim() == 3 { slice.or(Some(0)) } else { slice })?;
            let grid = Solver::new(&g)?.solve_window(&w, SolveMode::TopDown)?;
            let cone = cone.as_deref().map(parse_cone).transpose()?.unwrap_or_else(Cone::quadrant);
            if let Some(ell) = ell {
                let ell = parse_vec(&ell)?;
                match periodicity_probe(&grid, level, &cone, &ell)? {
                    Probe::Periodic => writeln!(out, "{ell}: periodic")?,
                    Probe::Violation { p, at_p, at_shift } => {
                        writeln!(out, "{ell}: violation at {p} ({at_p}) vs {} ({at_shift})", p - ell)?
                    }
                }
                return Ok(Ok(()));
            }
            let found = find_periods(&grid, level, &cone, max_period)?;
            let list: Vec<String> = found.periods.iter().map(|p| p.to_string()).collect();
            writeln!(out, "periods: {}", if list.is_empty() { "none".into() } else { list.join(" ") })?;
            match found.basis {
                Some([a, b]) => writeln!(out, "basis: {a} {b}")?,
                None => writeln!(out, "basis: none")?,
            }
            writeln!(out, "violations: {}", found.violations.len())?;
            Ok(Ok(()))
        }
        Cmd::Equiv { left, right, window } => {
            let a = io::load_game(&left)?.game;
            let b = io::load_game(&right)?.game;
            let e = equivalence_in_window(&a, &b, &Window::upto(parse_vec(&window)?))?;
            writeln!(out, "{e}")?;
            Ok(pass(e == Equivalence::Equal))
        }
        Cmd::Oracle { name, window } => {
            let hi = parse_vec(&window)?;
            if hi.dim() != 2 || !hi.is_nonneg() {
                bail!("oracle windows are planar and nonnegative: x,y");
            }
            let w = Window::upto(hi);
            let cells: Vec<Cell> = match name.as_str() {
                "binom-parity" => w.points().map(|p| binom_parity_oracle(p.x() as u64, p.y() as u64).into()).collect(),
                "xor" => {
                    let spec = xor_spec();
                    let p_sym = spec.symbol("P").expect("xor alphabet");
                    let mut ev = RecurrenceEval::new(&spec);
                    w.points().map(|p| if ev.eval(&p).expect("ℕ² is the domain") == p_sym { Cell::P } else { Cell::N }).collect()
                }
                other => bail!("unknown oracle '{other}' (binom-parity, xor)"),
            };
            let grid = OutcomeGrid::from_cells(w, cells);
            out.write_all(&render_grid(&grid, None, &RenderOptions::default())?)?;
            Ok(Ok(()))
        }
        Cmd::Builtin { name } => {
            let rs = golden::builtin(&name)
                .ok_or_else(|| anyhow!("unknown builtin '{name}' ({})", golden::BUILTIN_NAMES.join(", ")))?;
            write!(out, "{}", io::game_to_json(&crate::engine::GameSpec::normal(rs), None))?;
            Ok(Ok(()))
        }
    }
}

fn solve(a: SolveArgs, default: ImageFormat, out: &mut dyn Write) -> Result<()> {
    let g = io::load_game(&a.ruleset)?.game;
    let (w, level) = window_for(parse_vec(&a.window)?, g.dim(), a.slice)?;
    let format = match a.format {
        Some(f) => f.parse()?,
        None => default,
    };
    let grid = Solver::new(&g)?.solve_window(&w, SolveMode::TopDown)?;
    let opts = RenderOptions { format, stride: a.stride, highlight: a.highlight };
    out.write_all(&render_grid(&grid, level, &opts)?)?;
    Ok(())
}
