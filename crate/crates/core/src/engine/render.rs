use std::fmt::Write as _;
use std::str::FromStr;

use super::{Cell, EngineError, OutcomeGrid};
use crate::lattice::IntVec;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ImageFormat {
    Text,
    Pbm,
    Svg,
}

impl FromStr for ImageFormat {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self, EngineError> {
        match s {
            "text" => Ok(ImageFormat::Text),
            "pbm" => Ok(ImageFormat::Pbm),
            "svg" => Ok(ImageFormat::Svg),
            other => Err(EngineError::Invalid(format!("unsupported image format '{other}' (text, pbm, svg)"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RenderOptions {
    pub format: ImageFormat,
    /// Sample only coordinates divisible by this.
    pub stride: i64,
    /// Mark points whose coordinates are both divisible by this.
    pub highlight: Option<i64>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self { format: ImageFormat::Text, stride: 1, highlight: None }
    }
}

const SVG_CELL: usize = 4;

/// Renders one planar slice with `y` increasing upward.
///
/// Text uses `#` for P, `.` for N and `x` for defeated points; highlighted
/// points show as `@` (P) and `:` (N). PBM is plain `P1` with P as 1.
pub fn render_grid(grid: &OutcomeGrid, level: Option<i64>, opts: &RenderOptions) -> Result<Vec<u8>, EngineError> {
    if opts.stride < 1 {
        return Err(EngineError::Invalid("stride must be positive".into()));
    }
    if matches!(opts.highlight, Some(h) if h < 1) {
        return Err(EngineError::Invalid("highlight modulus must be positive".into()));
    }
    let w = grid.window();
    let (lo, hi) = match (w.dim(), level) {
        (2, None) => (w.lo(), w.hi()),
        (3, Some(_)) => (w.lo().truncate(), w.hi().truncate()),
        _ => return Err(EngineError::Invalid("render needs a planar grid or a slice of a 3-D grid".into())),
    };
    let take = |lo: i64, hi: i64| -> Vec<i64> { (lo..=hi).filter(|c| c.rem_euclid(opts.stride) == 0).collect() };
    let xs = take(lo.x(), hi.x());
    let mut ys = take(lo.y(), hi.y());
    ys.reverse();
    let cell = |x: i64, y: i64| -> Cell {
        let p = match level {
            Some(z) => IntVec::xyz(x, y, z),
            None => IntVec::xy(x, y),
        };
        grid.get(&p).expect("inside the window")
    };
    let marked = |x: i64, y: i64| opts.highlight.is_some_and(|h| x.rem_euclid(h) == 0 && y.rem_euclid(h) == 0);

    let mut out = String::new();
    match opts.format {
        ImageFormat::Text => {
            for &y in &ys {
                for &x in &xs {
                    out.push(match (cell(x, y), marked(x, y)) {
                        (Cell::P, false) => '#',
                        (Cell::N, false) => '.',
                        (Cell::P, true) => '@',
                        (Cell::N, true) => ':',
                        (Cell::Defeated, _) => 'x',
                    });
                }
                out.push('\n');
            }
        }
        ImageFormat::Pbm => {
            writeln!(out, "P1\n{} {}", xs.len(), ys.len()).unwrap();
            for &y in &ys {
                for &x in &xs {
                    out.push(if cell(x, y).is_p() { '1' } else { '0' });
                }
                out.push('\n');
            }
        }
        ImageFormat::Svg => {
            let (wpx, hpx) = (xs.len() * SVG_CELL, ys.len() * SVG_CELL);
            writeln!(
                out,
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{wpx}" height="{hpx}" viewBox="0 0 {wpx} {hpx}" shape-rendering="crispEdges">"#
            )
            .unwrap();
            writeln!(out, r#"<rect width="{wpx}" height="{hpx}" fill="white"/>"#).unwrap();
            for (row, &y) in ys.iter().enumerate() {
                for (col, &x) in xs.iter().enumerate() {
                    let fill = match (cell(x, y), marked(x, y)) {
                        (Cell::P, false) => "black",
                        (Cell::P, true) => "red",
                        (Cell::N, true) => "pink",
                        (Cell::Defeated, _) => "gray",
                        (Cell::N, false) => continue,
                    };
                    writeln!(
                        out,
                        r#"<rect x="{}" y="{}" width="{SVG_CELL}" height="{SVG_CELL}" fill="{fill}"/>"#,
                        col * SVG_CELL,
                        row * SVG_CELL
                    )
                    .unwrap();
                }
            }
            out.push_str("</svg>\n");
        }
    }
    Ok(out.into_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{GameSpec, Ruleset, SolveMode, Solver, Window};
    use crate::lattice::LatticeSet;

    fn grid_from(moves: &[(i64, i64)], defeated: LatticeSet, hi: (i64, i64)) -> OutcomeGrid {
        let rs = Ruleset::new(2, moves.iter().map(|&m| IntVec::from(m))).unwrap();
        let g = GameSpec::new(rs, defeated).unwrap();
        Solver::new(&g).unwrap().solve_window(&Window::upto(IntVec::from(hi)), SolveMode::TopDown).unwrap()
    }

    #[test]
    fn all_n_square() {
        let w = Window::upto(IntVec::xy(1, 1));
        let g = OutcomeGrid::from_cells(w, vec![Cell::N; 4]);
        assert_eq!(render_grid(&g, None, &RenderOptions::default()).unwrap(), b"..\n..\n");
    }

    #[test]
    fn y_grows_upward() {
        let g = grid_from(&[(1, 0), (0, 1)], LatticeSet::empty(), (1, 1));
        let text = String::from_utf8(render_grid(&g, None, &RenderOptions::default()).unwrap()).unwrap();
        // (0,0) P, (1,0) and (0,1) N, (1,1) P; the top row is y = 1.
        assert_eq!(text, ".#\n#.\n");
    }

    #[test]
    fn formats_agree() {
        let g = grid_from(&[(1, 0), (0, 2)], LatticeSet::finite([IntVec::xy(2, 2)]), (3, 2));
        let text = String::from_utf8(render_grid(&g, None, &RenderOptions::default()).unwrap()).unwrap();
        let pbm = String::from_utf8(
            render_grid(&g, None, &RenderOptions { format: ImageFormat::Pbm, ..Default::default() }).unwrap(),
        )
        .unwrap();
        let mut lines = pbm.lines();
        assert_eq!(lines.next(), Some("P1"));
        assert_eq!(lines.next(), Some("4 3"));
        let raster: Vec<String> = lines.map(str::to_string).collect();
        let from_text: Vec<String> =
            text.lines().map(|l| l.chars().map(|c| if c == '#' { '1' } else { '0' }).collect()).collect();
        assert_eq!(raster, from_text);
        assert!(text.contains('x'));
        let svg = render_grid(&g, None, &RenderOptions { format: ImageFormat::Svg, ..Default::default() }).unwrap();
        assert_eq!(svg, render_grid(&g, None, &RenderOptions { format: ImageFormat::Svg, ..Default::default() }).unwrap());
        assert!(String::from_utf8(svg).unwrap().starts_with("<svg"));
    }

    #[test]
    fn stride_and_highlight() {
        let g = grid_from(&[(1, 0), (0, 1)], LatticeSet::empty(), (4, 4));
        let text = render_grid(&g, None, &RenderOptions { stride: 2, highlight: Some(4), ..Default::default() }).unwrap();
        // sampled points all have even coordinate sum, hence P.
        assert_eq!(String::from_utf8(text).unwrap(), "@#@\n###\n@#@\n");
        assert!("png".parse::<ImageFormat>().is_err());
    }
}
