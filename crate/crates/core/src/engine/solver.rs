use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use super::{check_pointedness, Cell, EngineError, GameSpec, Outcome, PointednessWitness};
use crate::lattice::IntVec;

/// Inclusive box `[lo, hi]`; empty if `hi < lo` in some coordinate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Window {
    lo: IntVec,
    hi: IntVec,
}

impl Window {
    pub fn new(lo: IntVec, hi: IntVec) -> Self {
        assert_eq!(lo.dim(), hi.dim(), "window corners must share a dimension");
        Self { lo, hi }
    }

    /// `[0, hi]`.
    pub fn upto(hi: IntVec) -> Self {
        Self::new(IntVec::zero(hi.dim()), hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> IntVec {
        self.lo
    }

    pub fn hi(&self) -> IntVec {
        self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo.coords().iter().zip(self.hi.coords()).any(|(a, b)| b < a)
    }

    fn extent(&self, k: usize) -> usize {
        (self.hi.get(k) - self.lo.get(k) + 1).max(0) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.dim()).map(|k| self.extent(k)).product()
    }

    pub fn contains(&self, p: &IntVec) -> bool {
        p.dim() == self.dim() && p.dominates(&self.lo) && self.hi.dominates(p)
    }

    /// Dense index in lexicographic order.
    fn index(&self, p: &IntVec) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let mut idx = 0;
        for k in 0..self.dim() {
            idx = idx * self.extent(k) + (p.get(k) - self.lo.get(k)) as usize;
        }
        Some(idx)
    }

    fn point(&self, mut idx: usize) -> IntVec {
        let mut c = [0i64; 3];
        for k in (0..self.dim()).rev() {
            let e = self.extent(k);
            c[k] = self.lo.get(k) + (idx % e) as i64;
            idx /= e;
        }
        IntVec::new(&c[..self.dim()])
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = IntVec> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}

/// Outcomes of every point of a window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OutcomeGrid {
    window: Window,
    cells: Vec<Cell>,
}

impl OutcomeGrid {
    /// Cells in the window's lexicographic order.
    pub fn from_cells(window: Window, cells: Vec<Cell>) -> Self {
        assert_eq!(window.len(), cells.len(), "one cell per window point");
        Self { window, cells }
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn get(&self, p: &IntVec) -> Option<Cell> {
        self.window.index(p).map(|i| self.cells[i])
    }

    /// `(point, cell)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (IntVec, Cell)> + '_ {
        self.cells.iter().enumerate().map(|(i, c)| (self.window.point(i), *c))
    }

    pub fn p_positions(&self) -> Vec<IntVec> {
        self.iter().filter(|(_, c)| c.is_p()).map(|(p, _)| p).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveMode {
    /// Memoized depth-first search with an explicit stack.
    TopDown,
    /// Closure of the window under moves, evaluated in increasing `φ`-level.
    BottomUp,
}

/// Memoized outcome evaluator for one game.
pub struct Solver<'g> {
    game: &'g GameSpec,
    witness: PointednessWitness,
    moves: Vec<IntVec>,
    memo: FxHashMap<IntVec, Cell>,
}

impl<'g> Solver<'g> {
    /// Refuses games whose ruleset admits no pointedness witness.
    pub fn new(game: &'g GameSpec) -> Result<Self, EngineError> {
        let witness = check_pointedness(game.ruleset()).map_err(EngineError::NotPointed)?;
        Ok(Self::with_witness(game, witness))
    }

    pub fn with_witness(game: &'g GameSpec, witness: PointednessWitness) -> Self {
        assert!(witness.certifies(game.ruleset()), "witness {witness} does not certify the ruleset");
        let moves = game.ruleset().moves().copied().collect();
        Self { game, witness, moves, memo: FxHashMap::default() }
    }

    pub fn witness(&self) -> &PointednessWitness {
        &self.witness
    }

    pub fn game(&self) -> &GameSpec {
        self.game
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Memo contents in lexicographic order.
    pub fn memo_snapshot(&self) -> Vec<(IntVec, Cell)> {
        let mut v: Vec<(IntVec, Cell)> = self.memo.iter().map(|(p, c)| (*p, *c)).collect();
        v.sort_by_key(|(p, _)| *p);
        v
    }

    fn cell_of(&mut self, p: &IntVec) -> Option<Cell> {
        if let Some(c) = self.memo.get(p) {
            return Some(*c);
        }
        if !p.is_nonneg() {
            return Some(Cell::Defeated);
        }
        if self.game.defeated().holds(p) {
            self.memo.insert(*p, Cell::Defeated);
            return Some(Cell::Defeated);
        }
        None
    }

    /// Legal options of `p` in move order.
    pub fn options(&self, p: &IntVec) -> Vec<IntVec> {
        self.moves
            .iter()
            .filter_map(|g| p.checked_sub(g))
            .filter(|q| self.game.is_position(q))
            .collect()
    }

    /// Outcome of a position.
    pub fn outcome(&mut self, p: &IntVec) -> Result<Outcome, EngineError> {
        if p.dim() != self.game.dim() {
            return Err(EngineError::Invalid(format!("position {p} has the wrong dimension")));
        }
        if !p.is_nonneg() {
            return Err(EngineError::NotAPosition(*p));
        }
        match self.cell_of(p) {
            Some(Cell::Defeated) => Err(EngineError::NotAPosition(*p)),
            Some(c) => Ok(c.outcome().unwrap()),
            None => {
                self.run_from(*p);
                Ok(self.memo[p].outcome().unwrap())
            }
        }
    }

    /// Cell for any point; points outside `ℕ^d` read as defeated.
    pub fn cell(&mut self, p: &IntVec) -> Cell {
        match self.cell_of(p) {
            Some(c) => c,
            None => {
                self.run_from(*p);
                self.memo[p]
            }
        }
    }

    // Depth-first evaluation with an explicit stack of (position, next move index).
    // Levels strictly decrease up the stack, so no position appears twice on it.
    fn run_from(&mut self, root: IntVec) {
        let mut stack: Vec<(IntVec, usize)> = vec![(root, 0)];
        while let Some(&(p, start)) = stack.last() {
            let mut result = Some(Cell::P);
            let mut i = start;
            while i < self.moves.len() {
                let Some(q) = p.checked_sub(&self.moves[i]) else {
                    i += 1;
                    continue;
                };
                match self.cell_of(&q) {
                    Some(Cell::P) => {
                        result = Some(Cell::N);
                        break;
                    }
                    Some(_) => i += 1,
                    None => {
                        stack.last_mut().unwrap().1 = i;
                        stack.push((q, 0));
                        result = None;
                        break;
                    }
                }
            }
            if let Some(c) = result {
                self.memo.insert(p, c);
                stack.pop();
            }
        }
    }

    /// Evaluates every position reachable from `roots` in increasing level order.
    fn run_bottom_up(&mut self, roots: impl Iterator<Item = IntVec>) {
        let mut seen: FxHashSet<IntVec> = FxHashSet::default();
        let mut queue: VecDeque<IntVec> = VecDeque::new();
        for r in roots {
            if self.cell_of(&r).is_none() && seen.insert(r) {
                queue.push_back(r);
            }
        }
        let mut order: Vec<IntVec> = Vec::new();
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for i in 0..self.moves.len() {
                if let Some(q) = p.checked_sub(&self.moves[i]) {
                    if !seen.contains(&q) && self.cell_of(&q).is_none() {
                        seen.insert(q);
                        queue.push_back(q);
                    }
                }
            }
        }
        let w = self.witness.weights();
        order.sort_by_key(|p| (w.dot(p), *p));
        for p in order {
            let mut c = Cell::P;
            for i in 0..self.moves.len() {
                if let Some(q) = p.checked_sub(&self.moves[i]) {
                    match self.cell_of(&q) {
                        Some(Cell::P) => {
                            c = Cell::N;
                            break;
                        }
                        Some(_) => {}
                        None => unreachable!("option {q} of {p} has a lower level and is already solved"),
                    }
                }
            }
            self.memo.insert(p, c);
        }
    }

    pub fn solve_window(&mut self, window: &Window, mode: SolveMode) -> Result<OutcomeGrid, EngineError> {
        if window.dim() != self.game.dim() {
            return Err(EngineError::Invalid("window dimension differs from the game".into()));
        }
        if mode == SolveMode::BottomUp {
            self.run_bottom_up(window.points());
        }
        let cells = window.points().map(|p| self.cell(&p)).collect();
        Ok(OutcomeGrid { window: *window, cells })
    }
}

/// Solves a window with a fresh solver.
pub fn solve_window(game: &GameSpec, window: &Window, mode: SolveMode) -> Result<OutcomeGrid, EngineError> {
    Solver::new(game)?.solve_window(window, mode)
}

/// First position of the grid violating the nor law, if any.
pub fn check_nor_property(solver: &mut Solver<'_>, grid: &OutcomeGrid) -> Option<IntVec> {
    for (p, c) in grid.iter() {
        let Some(o) = c.outcome() else { continue };
        let opts = solver.options(&p);
        let expect = Outcome::nor(opts.iter().map(|q| solver.cell(q).outcome().expect("options are positions")));
        if o != expect {
            return Some(p);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Ruleset;
    use crate::lattice::LatticeSet;
    use proptest::prelude::*;

    fn subtraction_game(moves: &[i64]) -> GameSpec {
        let rs = Ruleset::new(1, moves.iter().map(|&m| IntVec::new(&[m]))).unwrap();
        GameSpec::normal(rs)
    }

    #[test]
    fn one_heap_subtraction() {
        // Take 1 or 2: P exactly at multiples of 3.
        let g = subtraction_game(&[1, 2]);
        let grid = solve_window(&g, &Window::upto(IntVec::new(&[20])), SolveMode::TopDown).unwrap();
        for (p, c) in grid.iter() {
            assert_eq!(c.is_p(), p.x() % 3 == 0, "{p}");
        }
    }

    #[test]
    fn window_indexing() {
        let w = Window::new(IntVec::xy(1, -1), IntVec::xy(3, 2));
        assert_eq!(w.len(), 12);
        let pts: Vec<IntVec> = w.points().collect();
        assert_eq!(pts[0], IntVec::xy(1, -1));
        assert_eq!(pts[1], IntVec::xy(1, 0));
        assert_eq!(pts[11], IntVec::xy(3, 2));
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(w.index(p), Some(i));
        }
        assert!(Window::upto(IntVec::xy(-1, 3)).is_empty());
        assert_eq!(Window::upto(IntVec::xy(-1, 3)).points().count(), 0);
    }

    #[test]
    fn refuses_unpointed() {
        let rs = Ruleset::new(2, [IntVec::xy(1, 0), IntVec::xy(-1, 0)]).unwrap();
        let g = GameSpec::normal(rs);
        assert!(matches!(Solver::new(&g), Err(EngineError::NotPointed(_))));
    }

    #[test]
    fn defeated_positions_are_neither_played_nor_reached() {
        // Wythoff-free toy: moves (1,0),(0,1); defeating (0,0) makes the
        // axes' first points terminal.
        let rs = Ruleset::new(2, [IntVec::xy(1, 0), IntVec::xy(0, 1)]).unwrap();
        let g = GameSpec::new(rs, LatticeSet::finite([IntVec::xy(0, 0)])).unwrap();
        let mut s = Solver::new(&g).unwrap();
        assert!(s.outcome(&IntVec::xy(0, 0)).is_err());
        assert_eq!(s.outcome(&IntVec::xy(1, 0)).unwrap(), Outcome::P);
        assert_eq!(s.outcome(&IntVec::xy(1, 1)).unwrap(), Outcome::N);
        assert_eq!(s.outcome(&IntVec::xy(2, 1)).unwrap(), Outcome::P);
        assert!(s.outcome(&IntVec::xy(-1, 1)).is_err());
    }

    #[test]
    fn deep_chains_do_not_recurse() {
        let g = subtraction_game(&[1]);
        let mut s = Solver::new(&g).unwrap();
        assert_eq!(s.outcome(&IntVec::new(&[200_001])).unwrap(), Outcome::N);
    }

    fn naive(game: &GameSpec, p: IntVec, memo: &mut std::collections::HashMap<IntVec, bool>) -> bool {
        if let Some(v) = memo.get(&p) {
            return *v;
        }
        let v = !game
            .ruleset()
            .moves()
            .map(|g| p - *g)
            .filter(|q| game.is_position(q))
            .any(|q| naive(game, q, memo));
        memo.insert(p, v);
        v
    }

    fn small_game() -> impl Strategy<Value = GameSpec> {
        (
            proptest::collection::vec((-2i64..4, -2i64..4), 1..6),
            proptest::collection::btree_set((0i64..6, 0i64..6).prop_map(IntVec::from), 0..4),
        )
            .prop_filter_map("pointed", |(moves, defeated)| {
                let moves: Vec<IntVec> = moves.into_iter().map(IntVec::from).filter(|g| !g.is_zero()).collect();
                let rs = Ruleset::new(2, moves).ok()?;
                check_pointedness(&rs).ok()?;
                GameSpec::new(rs, LatticeSet::Finite(defeated)).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn modes_agree_and_match_recursion(game in small_game()) {
            let w = Window::upto(IntVec::xy(9, 9));
            let mut top = Solver::new(&game).unwrap();
            let a = top.solve_window(&w, SolveMode::TopDown).unwrap();
            let mut bottom = Solver::new(&game).unwrap();
            let b = bottom.solve_window(&w, SolveMode::BottomUp).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(check_nor_property(&mut top, &a), None);
            let mut memo = std::collections::HashMap::new();
            for (p, c) in a.iter() {
                match c {
                    Cell::Defeated => prop_assert!(!game.is_position(&p)),
                    _ => prop_assert_eq!(c.is_p(), naive(&game, p, &mut memo)),
                }
            }
        }

        #[test]
        fn solving_is_deterministic(game in small_game()) {
            let w = Window::upto(IntVec::xy(7, 7));
            let mut s1 = Solver::new(&game).unwrap();
            let mut s2 = Solver::new(&game).unwrap();
            prop_assert_eq!(s1.solve_window(&w, SolveMode::TopDown).unwrap(), s2.solve_window(&w, SolveMode::TopDown).unwrap());
            prop_assert_eq!(s1.memo_snapshot(), s2.memo_snapshot());
        }

        #[test]
        fn every_move_lowers_the_level(game in small_game()) {
            let s = Solver::new(&game).unwrap();
            for g in game.ruleset().moves() {
                prop_assert!(s.witness().level(g) >= 1);
            }
        }
    }
}
