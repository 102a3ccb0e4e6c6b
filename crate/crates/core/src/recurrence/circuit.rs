use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{RecurrenceError, Variant};
use crate::engine::Outcome;

/// Largest `k·2^k` accepted by [`synthesize_nor_circuit`].
pub const DEFAULT_SYNTHESIS_BOUND: usize = 1 << 16;

/// A total table `{P,N}^k → {P,N}^s`. Bit `t` of the row index is input `t`, with P as 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruthTable {
    inputs: usize,
    outputs: usize,
    rows: Vec<Vec<Outcome>>,
}

impl TruthTable {
    pub fn new(inputs: usize, outputs: usize, rows: Vec<Vec<Outcome>>) -> Result<Self, RecurrenceError> {
        if inputs >= usize::BITS as usize - 1 || rows.len() != 1 << inputs {
            return Err(RecurrenceError::InvalidCircuit(format!("a table on {inputs} inputs needs 2^{inputs} rows")));
        }
        if outputs == 0 || rows.iter().any(|r| r.len() != outputs) {
            return Err(RecurrenceError::InvalidCircuit("every row needs the same positive width".into()));
        }
        Ok(Self { inputs, outputs, rows })
    }

    pub fn from_fn(inputs: usize, outputs: usize, f: impl Fn(&[Outcome]) -> Vec<Outcome>) -> Result<Self, RecurrenceError> {
        let rows = (0..1usize << inputs).map(|row| f(&Self::row_inputs(inputs, row))).collect();
        Self::new(inputs, outputs, rows)
    }

    pub fn row_inputs(inputs: usize, row: usize) -> Vec<Outcome> {
        (0..inputs).map(|t| Outcome::from_bool(row >> t & 1 == 1)).collect()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn row(&self, row: usize) -> &[Outcome] {
        &self.rows[row]
    }

    pub fn lookup(&self, x: &[Outcome]) -> &[Outcome] {
        let row = x.iter().enumerate().fold(0, |acc, (t, o)| acc | (o.is_p() as usize) << t);
        &self.rows[row]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Role {
    /// `in_{ij}` as input `t = i·s + j` (zero-based).
    Input(usize),
    Gate,
    Output(usize),
    InPrime,
    InDoublePrime,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Input(t) => write!(f, "in[{t}]"),
            Role::Gate => write!(f, "gate"),
            Role::Output(j) => write!(f, "out[{j}]"),
            Role::InPrime => write!(f, "in'"),
            Role::InDoublePrime => write!(f, "in''"),
        }
    }
}

/// Directed acyclic graph of nor gates. Edges point from an operand to the gate reading it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NorCircuit {
    r: usize,
    s: usize,
    roles: Vec<Role>,
    edges: BTreeSet<(usize, usize)>,
}

impl NorCircuit {
    /// Checks roles, edge endpoints and acyclicity. `r·s` inputs and `s` outputs
    /// must each appear exactly once.
    pub fn new(r: usize, s: usize, roles: Vec<Role>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, RecurrenceError> {
        let bad = |m: String| Err(RecurrenceError::InvalidCircuit(m));
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if s == 0 {
            return bad("at least one output is needed".into());
        }
        let count = |pred: &dyn Fn(&Role) -> bool| roles.iter().filter(|r| pred(r)).count();
        for t in 0..r * s {
            if count(&|x| *x == Role::Input(t)) != 1 {
                return bad(format!("input {t} must appear exactly once"));
            }
        }
        for j in 0..s {
            if count(&|x| *x == Role::Output(j)) != 1 {
                return bad(format!("output {j} must appear exactly once"));
            }
        }
        if count(&|x| matches!(x, Role::Input(t) if *t >= r * s)) > 0 || count(&|x| matches!(x, Role::Output(j) if *j >= s)) > 0 {
            return bad("input or output index out of range".into());
        }
        if count(&|x| *x == Role::InPrime) > 1 || count(&|x| *x == Role::InDoublePrime) > 1 {
            return bad("in' and in'' appear at most once".into());
        }
        for &(v, w) in &edges {
            if v >= roles.len() || w >= roles.len() || v == w {
                return bad(format!("bad edge {v}->{w}"));
            }
            let allowed = match roles[w] {
                Role::Input(_) | Role::InDoublePrime => false,
                Role::InPrime => roles[v] == Role::InDoublePrime,
                _ => true,
            };
            if !allowed {
                return bad(format!("{} cannot read {}", roles[w], roles[v]));
            }
            if matches!(roles[v], Role::Output(_)) {
                return bad(format!("{} has an out-edge", roles[v]));
            }
        }
        let c = Self { r, s, roles, edges };
        if c.topo_order().is_none() {
            return bad("the graph has a cycle".into());
        }
        Ok(c)
    }

    /// Number of arguments `r`.
    pub fn arity(&self) -> usize {
        self.r
    }

    /// Bits per symbol `s`.
    pub fn width(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, v: usize) -> Role {
        self.roles[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.edges.contains(&(v, w))
    }

    pub fn predecessors(&self, w: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.1 == w).map(|e| e.0).collect()
    }

    pub fn successors(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect()
    }

    fn find(&self, role: Role) -> Option<usize> {
        self.roles.iter().position(|&x| x == role)
    }

    /// Vertex of `in_{ij}` (zero-based `i`, `j`).
    pub fn input(&self, i: usize, j: usize) -> usize {
        self.find(Role::Input(i * self.s + j)).expect("validated")
    }

    pub fn output(&self, j: usize) -> usize {
        self.find(Role::Output(j)).expect("validated")
    }

    pub fn in_prime(&self) -> Option<usize> {
        self.find(Role::InPrime)
    }

    pub fn in_double_prime(&self) -> Option<usize> {
        self.find(Role::InDoublePrime)
    }

    /// Vertices ordered so that every edge goes forward; ties broken by index.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let n = self.roles.len();
        let mut indeg = vec![0usize; n];
        for &(_, w) in &self.edges {
            indeg[w] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for w in self.successors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Whether a directed path leads from `v` to `w`.
    pub fn reaches(&self, v: usize, w: usize) -> bool {
        let mut seen = vec![false; self.roles.len()];
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if u == w {
                return true;
            }
            if !std::mem::replace(&mut seen[u], true) {
                stack.extend(self.successors(u));
            }
        }
        false
    }

    /// Arguments `i` with no path from any `in_{ij}` to any output.
    pub fn unreached_arguments(&self) -> Vec<usize> {
        (0..self.r)
            .filter(|&i| !(0..self.s).any(|j| (0..self.s).any(|j2| self.reaches(self.input(i, j), self.output(j2)))))
            .collect()
    }

    /// Whether some `in_{ij}` with `i` in `args` reaches `out_{j2}`.
    pub fn output_reached_from(&self, j2: usize, args: impl IntoIterator<Item = usize>) -> bool {
        let out = self.output(j2);
        args.into_iter().any(|i| (0..self.s).any(|j| self.reaches(self.input(i, j), out)))
    }
}

impl fmt::Display for NorCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, role) in self.roles.iter().enumerate() {
            let preds = self.predecessors(v);
            if preds.is_empty() && matches!(role, Role::Input(_) | Role::InPrime | Role::InDoublePrime) {
                writeln!(f, "v{v} {role}")?;
            } else {
                let args: Vec<String> = preds.iter().map(|p| format!("v{p}")).collect();
                writeln!(f, "v{v} {role} = nor({})", args.join(","))?;
            }
        }
        Ok(())
    }
}

/// Evaluates every output. `inputs[t]` feeds `Role::Input(t)`; the `in′` and
/// `in″` values are required exactly when those vertices exist.
pub fn eval_circuit(
    c: &NorCircuit,
    inputs: &[Outcome],
    in_prime: Option<Outcome>,
    in_double_prime: Option<Outcome>,
) -> Result<Vec<Outcome>, RecurrenceError> {
    let bad = |m: &str| Err(RecurrenceError::InvalidCircuit(m.into()));
    if inputs.len() != c.r * c.s {
        return bad("wrong number of input values");
    }
    if c.in_prime().is_some() != in_prime.is_some() || c.in_double_prime().is_some() != in_double_prime.is_some() {
        return bad("in'/in'' values must be given exactly when present");
    }
    let Some(order) = c.topo_order() else { return bad("the graph has a cycle") };
    let mut val = vec![Outcome::N; c.len()];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); c.len()];
    for (v, w) in c.edges() {
        preds[w].push(v);
    }
    for v in order {
        val[v] = match c.roles[v] {
            Role::Input(t) => inputs[t],
            Role::InPrime => in_prime.expect("checked"),
            Role::InDoublePrime => in_double_prime.expect("checked"),
            Role::Gate | Role::Output(_) => Outcome::nor(preds[v].iter().map(|&p| val[p])),
        };
    }
    Ok((0..c.s).map(|j| val[c.output(j)]).collect())
}

/// Two-level nor-of-nors over the P-rows of `table`, with one shared
/// inverter per input. `arity` is `r`, so `table.inputs()` must be `r·s`.
pub fn synthesize_nor_circuit(table: &TruthTable, arity: usize) -> Result<NorCircuit, RecurrenceError> {
    synthesize_bounded(table, arity, DEFAULT_SYNTHESIS_BOUND)
}

pub(crate) fn synthesize_bounded(table: &TruthTable, arity: usize, bound: usize) -> Result<NorCircuit, RecurrenceError> {
    let (k, s) = (table.inputs(), table.outputs());
    if k.checked_mul(1usize << k).is_none_or(|size| size > bound) {
        return Err(RecurrenceError::TooLarge { inputs: k, bound });
    }
    if arity * s != k {
        return Err(RecurrenceError::InvalidCircuit(format!("{k} inputs do not split into {arity} arguments of {s} bits")));
    }
    let mut roles: Vec<Role> = (0..k).map(Role::Input).collect();
    let mut edges = Vec::new();
    let p_rows: Vec<usize> = (0..1usize << k).filter(|&row| table.row(row).iter().any(|o| o.is_p())).collect();

    let mut inverter = vec![None; k];
    for t in 0..k {
        if p_rows.iter().any(|row| row >> t & 1 == 1) {
            inverter[t] = Some(roles.len());
            edges.push((t, roles.len()));
            roles.push(Role::Gate);
        }
    }
    // The minterm of a row is P exactly on that row: it reads every literal the row makes N.
    let mut minterm = Vec::with_capacity(p_rows.len());
    for &row in &p_rows {
        let g = roles.len();
        roles.push(Role::Gate);
        for t in 0..k {
            let lit = if row >> t & 1 == 1 { inverter[t].expect("created above") } else { t };
            edges.push((lit, g));
        }
        minterm.push(g);
    }
    for j in 0..s {
        let or = roles.len();
        roles.push(Role::Gate);
        for (&row, &g) in p_rows.iter().zip(&minterm) {
            if table.row(row)[j].is_p() {
                edges.push((g, or));
            }
        }
        edges.push((or, roles.len()));
        roles.push(Role::Output(j));
    }
    NorCircuit::new(arity, s, roles, edges)
}

/// Adds `in′` with edges to every output, and for variant B also `in″` with
/// edges to every output and every predecessor of an output (`in′` included).
pub fn extend_circuit(c: &NorCircuit, variant: Variant) -> Result<NorCircuit, RecurrenceError> {
    if c.in_prime().is_some() || c.in_double_prime().is_some() {
        return Err(RecurrenceError::InvalidCircuit("circuit is already extended".into()));
    }
    let mut roles = c.roles.clone();
    let mut edges = c.edges.clone();
    let ip = roles.len();
    roles.push(Role::InPrime);
    let outs: Vec<usize> = (0..c.s).map(|j| c.output(j)).collect();
    for &o in &outs {
        edges.insert((ip, o));
    }
    if variant == Variant::B {
        let ipp = roles.len();
        roles.push(Role::InDoublePrime);
        let targets: BTreeSet<usize> =
            edges.iter().filter(|e| outs.contains(&e.1)).map(|e| e.0).chain(outs.iter().copied()).collect();
        for w in targets {
            edges.insert((ipp, w));
        }
    }
    NorCircuit::new(c.r, c.s, roles, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden;
    use proptest::prelude::*;

    fn xor_circuit() -> NorCircuit {
        let mut roles = vec![Role::Input(0), Role::Input(1)];
        roles.extend([Role::Gate; 4]);
        roles.push(Role::Output(0));
        NorCircuit::new(2, 1, roles, golden::XOR_EDGES).unwrap()
    }

    use Outcome::{N, P};

    #[test]
    fn published_xor_circuit() {
        let c = xor_circuit();
        for (a, b) in [(P, P), (P, N), (N, P), (N, N)] {
            let want = Outcome::from_bool(a.is_p() != b.is_p());
            assert_eq!(eval_circuit(&c, &[a, b], None, None).unwrap(), vec![want]);
        }
        assert!(c.unreached_arguments().is_empty());
    }

    #[test]
    fn extension_edges() {
        let c = xor_circuit();
        let ext = extend_circuit(&c, Variant::C).unwrap();
        let ip = ext.in_prime().unwrap();
        assert_eq!(ext.successors(ip), vec![6]);
        assert_eq!(extend_circuit(&c, Variant::A).unwrap(), ext);
        let b = extend_circuit(&c, Variant::B).unwrap();
        let ipp = b.in_double_prime().unwrap();
        assert_eq!(b.successors(ipp), vec![4, 5, 6, b.in_prime().unwrap()]);
        assert!(extend_circuit(&ext, Variant::C).is_err());
        for x in [[P, P], [P, N], [N, P], [N, N]] {
            assert_eq!(eval_circuit(&ext, &x, Some(P), None).unwrap(), vec![N]);
            assert_eq!(eval_circuit(&ext, &x, Some(N), None).unwrap(), eval_circuit(&c, &x, None, None).unwrap());
        }
        assert!(eval_circuit(&ext, &[P, P], None, None).is_err());
    }

    #[test]
    fn small_tables() {
        let xor = TruthTable::from_fn(2, 1, |x| vec![Outcome::from_bool(x[0].is_p() != x[1].is_p())]).unwrap();
        let c = synthesize_nor_circuit(&xor, 2).unwrap();
        for row in 0..4 {
            let x = TruthTable::row_inputs(2, row);
            assert_eq!(eval_circuit(&c, &x, None, None).unwrap(), xor.row(row));
        }

        let constant = TruthTable::from_fn(2, 1, |_| vec![N]).unwrap();
        let c = synthesize_nor_circuit(&constant, 2).unwrap();
        let out = c.output(0);
        let feeders = c.predecessors(out);
        assert_eq!(feeders.len(), 1);
        assert!(c.predecessors(feeders[0]).is_empty());
        assert_eq!(c.unreached_arguments(), vec![0, 1]);

        let id = TruthTable::from_fn(1, 1, |x| x.to_vec()).unwrap();
        let c = synthesize_nor_circuit(&id, 1).unwrap();
        assert_eq!(eval_circuit(&c, &[P], None, None).unwrap(), vec![P]);
        assert_eq!(eval_circuit(&c, &[N], None, None).unwrap(), vec![N]);
    }

    #[test]
    fn bound_and_shape_errors() {
        let t = TruthTable::from_fn(4, 1, |_| vec![N]).unwrap();
        assert!(matches!(synthesize_bounded(&t, 4, 63), Err(RecurrenceError::TooLarge { .. })));
        assert!(synthesize_bounded(&t, 4, 64).is_ok());
        assert!(synthesize_nor_circuit(&t, 3).is_err());
        assert!(NorCircuit::new(1, 1, vec![Role::Input(0), Role::Output(0)], [(1, 0)]).is_err());
        assert!(NorCircuit::new(1, 1, vec![Role::Input(0), Role::Gate, Role::Gate, Role::Output(0)], [(1, 2), (2, 1)]).is_err());
    }

    fn table_strategy() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
        (1usize..=3, 1usize..=2).prop_flat_map(|(r, s)| {
            let k = r * s;
            (Just(r), Just(s), proptest::collection::vec(any::<u64>(), 1 << k))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn synthesis_round_trip((r, s, bits) in table_strategy()) {
            let k = r * s;
            let rows: Vec<Vec<Outcome>> =
                bits.iter().map(|b| (0..s).map(|j| Outcome::from_bool(b >> j & 1 == 1)).collect()).collect();
            let t = TruthTable::new(k, s, rows).unwrap();
            let c = synthesize_nor_circuit(&t, r).unwrap();
            let ext = extend_circuit(&c, Variant::B).unwrap();
            for row in 0..1usize << k {
                let x = TruthTable::row_inputs(k, row);
                prop_assert_eq!(eval_circuit(&c, &x, None, None).unwrap(), t.row(row).to_vec());
                prop_assert_eq!(eval_circuit(&ext, &x, Some(P), Some(N)).unwrap(), vec![N; s]);
            }
        }
    }
}
