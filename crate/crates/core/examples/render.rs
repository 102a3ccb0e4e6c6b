// Renders slice 1 of the 28-move ruleset as text, PBM and SVG, highlighting
// the positions with both coordinates divisible by 6.

use std::fs;

use lattice_games::engine::{render_grid, GameSpec, ImageFormat, RenderOptions, SolveMode, Solver, Window};
use lattice_games::golden;
use lattice_games::lattice::IntVec;

fn main() -> anyhow::Result<()> {
    let game = GameSpec::normal(golden::gamma_prime());
    let window = Window::new(IntVec::xyz(0, 0, 1), IntVec::xyz(108, 108, 1));
    let grid = Solver::new(&game)?.solve_window(&window, SolveMode::TopDown)?;

    let text = RenderOptions { format: ImageFormat::Text, stride: 6, highlight: None };
    print!("{}", String::from_utf8(render_grid(&grid, Some(1), &text)?)?);

    let dir = std::env::temp_dir();
    for format in [ImageFormat::Pbm, ImageFormat::Svg] {
        let opts = RenderOptions { format, stride: 1, highlight: Some(6) };
        let path = dir.join(format!("gasket.{}", if format == ImageFormat::Pbm { "pbm" } else { "svg" }));
        fs::write(&path, render_grid(&grid, Some(1), &opts)?)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
