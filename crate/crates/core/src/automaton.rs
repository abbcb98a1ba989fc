//! Finite-state presentations of the (b,k) constraint.
//!
//! Two constructions of the same language are provided. The window form
//! tracks the last b+k-2 symbols directly, mirroring the pruned de Bruijn
//! graph view. The prefix form is an Aho-Corasick-style automaton over the
//! reduced forbidden family, where each state is the longest suffix of the
//! word read so far that is a prefix of a forbidden pattern. Both are
//! deterministic, and both feed the transfer-matrix machinery: the number
//! of constrained words of length n is the number of length-n paths from
//! the initial state, and the largest eigenvalue of the essential part
//! gives the asymptotic rate.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::Write;

use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::constraint::{forbidden_family, reduce_forbidden, ConstraintParams, PatternSet};
use crate::error::{Error, Result};
use crate::words::Word;

/// Default cap on the number of automaton states.
pub const DEFAULT_STATE_BUDGET: usize = 1 << 22;

/// Which presentation of the constraint to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// States remember the last b+k-2 symbols.
    Window,
    /// States are proper prefixes of the reduced forbidden patterns.
    Prefix,
}

impl std::str::FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "window" => Ok(Form::Window),
            "prefix" => Ok(Form::Prefix),
            other => Err(Error::InvalidInput(format!(
                "unknown automaton form {other:?} (expected window or prefix)"
            ))),
        }
    }
}

/// Deterministic labeled automaton accepting exactly the constrained words.
///
/// A word is accepted when every transition along it exists. There are no
/// rejecting states: missing transitions encode the forbidden extensions.
/// `initial` is `None` only for the empty automaton (unsatisfiable
/// constraint) and for essential components whose transient initial state
/// was trimmed away.
#[derive(Debug, Clone)]
pub struct ConstraintAutomaton {
    labels: Vec<Word>,
    /// delta[state][symbol]
    delta: Vec<Vec<Option<usize>>>,
    initial: Option<usize>,
    sigma: u32,
}

impl ConstraintAutomaton {
    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn label(&self, state: usize) -> &Word {
        &self.labels[state]
    }

    pub fn step(&self, state: usize, symbol: u32) -> Option<usize> {
        self.delta[state][symbol as usize]
    }

    pub fn transitions_from(&self, state: usize) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.delta[state]
            .iter()
            .enumerate()
            .filter_map(|(a, t)| t.map(|v| (a as u32, v)))
    }

    /// Run the automaton over a word from the initial state.
    pub fn accepts(&self, w: &Word) -> bool {
        let Some(mut state) = self.initial else {
            return w.is_empty() && self.num_states() > 0;
        };
        for &a in w.symbols() {
            if a >= self.sigma {
                return false;
            }
            match self.step(state, a) {
                Some(next) => state = next,
                None => return false,
            }
        }
        true
    }

    /// Serializable description: states with labels, transition list,
    /// initial index.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct StateJson {
            index: usize,
            label: String,
        }
        #[derive(Serialize)]
        struct TransitionJson {
            from: usize,
            symbol: u32,
            to: usize,
        }
        #[derive(Serialize)]
        struct AutomatonJson {
            schema: u32,
            sigma: u32,
            initial: Option<usize>,
            states: Vec<StateJson>,
            transitions: Vec<TransitionJson>,
        }
        let states = self
            .labels
            .iter()
            .enumerate()
            .map(|(index, label)| StateJson {
                index,
                label: label.to_string(),
            })
            .collect();
        let mut transitions = Vec::new();
        for u in 0..self.num_states() {
            for (symbol, to) in self.transitions_from(u) {
                transitions.push(TransitionJson { from: u, symbol, to });
            }
        }
        serde_json::to_value(AutomatonJson {
            schema: 1,
            sigma: self.sigma,
            initial: self.initial,
            states,
            transitions,
        })
        .expect("serialization cannot fail")
    }
}

/// Build the automaton for a constraint with the default state budget.
pub fn build_automaton(c: &ConstraintParams, form: Form) -> Result<ConstraintAutomaton> {
    build_automaton_with_budget(c, form, DEFAULT_STATE_BUDGET)
}

pub fn build_automaton_with_budget(
    c: &ConstraintParams,
    form: Form,
    budget: usize,
) -> Result<ConstraintAutomaton> {
    match form {
        Form::Window => build_window(c, budget),
        Form::Prefix => {
            let reduced = reduce_forbidden(&forbidden_family(c));
            build_prefix_from_patterns(&reduced, budget)
        }
    }
}

fn build_window(c: &ConstraintParams, budget: usize) -> Result<ConstraintAutomaton> {
    let memory = if c.b == 1 { 0 } else { c.b + c.k - 2 };
    let sigma = c.sigma as usize;

    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut labels: Vec<Vec<u32>> = Vec::new();
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = VecDeque::new();

    index.insert(Vec::new(), 0);
    labels.push(Vec::new());
    delta.push(vec![None; sigma]);
    queue.push_back(0usize);

    while let Some(u) = queue.pop_front() {
        let label = labels[u].clone();
        for a in 0..sigma as u32 {
            let mut ext = label.clone();
            ext.push(a);
            // the freshly created k-window must differ from the previous
            // b-1 windows; all of them sit inside `ext`
            if ext.len() >= c.k {
                let new_start = ext.len() - c.k;
                let lo = new_start.saturating_sub(c.b - 1);
                let clash = (lo..new_start)
                    .any(|j| ext[j..j + c.k] == ext[new_start..new_start + c.k]);
                if clash {
                    continue;
                }
            }
            let keep = ext.len().min(memory);
            let succ_label = ext[ext.len() - keep..].to_vec();
            let v = match index.get(&succ_label) {
                Some(&v) => v,
                None => {
                    let v = labels.len();
                    if v >= budget {
                        return Err(Error::Resource(format!(
                            "window automaton exceeds the state budget of {budget} states"
                        )));
                    }
                    index.insert(succ_label.clone(), v);
                    labels.push(succ_label);
                    delta.push(vec![None; sigma]);
                    queue.push_back(v);
                    v
                }
            };
            delta[u][a as usize] = Some(v);
        }
    }

    Ok(ConstraintAutomaton {
        labels: labels.into_iter().map(Word::new).collect(),
        delta,
        initial: Some(0),
        sigma: c.sigma,
    })
}

/// Build the prefix-form automaton from an arbitrary forbidden set. The set
/// is reduced first so that no pattern is a substring of another; states
/// are then exactly the proper prefixes of the surviving patterns.
///
/// The automaton accepts the avoiders of the reduced set. For the (b,k)
/// families that is the same language as the input set; for arbitrary
/// sets it may exclude dead-end words that avoid the input set but end in
/// a collapsed stem (see [`reduce_forbidden`]).
pub fn build_prefix_from_patterns(
    patterns: &PatternSet,
    budget: usize,
) -> Result<ConstraintAutomaton> {
    let reduced = reduce_forbidden(patterns);
    let sigma = reduced.sigma as usize;

    if reduced.forbids_everything() {
        return Ok(ConstraintAutomaton {
            labels: Vec::new(),
            delta: Vec::new(),
            initial: None,
            sigma: reduced.sigma,
        });
    }

    // trie over the patterns
    struct Node {
        children: BTreeMap<u32, usize>,
        fail: usize,
        terminal: bool,
        label: Vec<u32>,
    }
    let mut nodes = vec![Node {
        children: BTreeMap::new(),
        fail: 0,
        terminal: false,
        label: Vec::new(),
    }];
    for pat in reduced.iter() {
        let mut cur = 0usize;
        for &a in pat.symbols() {
            cur = match nodes[cur].children.get(&a) {
                Some(&v) => v,
                None => {
                    let v = nodes.len();
                    if v > budget {
                        return Err(Error::Resource(format!(
                            "prefix automaton exceeds the state budget of {budget} states"
                        )));
                    }
                    let mut label = nodes[cur].label.clone();
                    label.push(a);
                    nodes.push(Node {
                        children: BTreeMap::new(),
                        fail: 0,
                        terminal: false,
                        label,
                    });
                    nodes[cur].children.insert(a, v);
                    v
                }
            };
        }
        nodes[cur].terminal = true;
    }

    // failure links and full goto function, breadth first
    let mut goto: Vec<Vec<usize>> = vec![vec![0; sigma]; nodes.len()];
    let mut order = VecDeque::new();
    for a in 0..sigma as u32 {
        if let Some(&v) = nodes[0].children.get(&a) {
            nodes[v].fail = 0;
            goto[0][a as usize] = v;
            order.push_back(v);
        } else {
            goto[0][a as usize] = 0;
        }
    }
    while let Some(u) = order.pop_front() {
        let fail = nodes[u].fail;
        for a in 0..sigma as u32 {
            if let Some(&v) = nodes[u].children.get(&a) {
                nodes[v].fail = goto[fail][a as usize];
                goto[u][a as usize] = v;
                order.push_back(v);
            } else {
                goto[u][a as usize] = goto[fail][a as usize];
            }
        }
    }

    // live states are the non-terminal nodes; a transition into a terminal
    // node means the pattern just completed, so the edge is dropped
    let mut remap: Vec<Option<usize>> = vec![None; nodes.len()];
    let mut labels = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        if !node.terminal {
            remap[i] = Some(labels.len());
            labels.push(Word::new(node.label.clone()));
        }
    }
    let mut delta = vec![vec![None; sigma]; labels.len()];
    for i in 0..nodes.len() {
        let Some(u) = remap[i] else { continue };
        for a in 0..sigma {
            let v = goto[i][a];
            if !nodes[v].terminal {
                delta[u][a] = remap[v];
            }
        }
    }

    Ok(ConstraintAutomaton {
        labels,
        delta,
        initial: Some(0),
        sigma: reduced.sigma,
    })
}

/// Restrict to the states that lie on arbitrarily long paths: repeatedly
/// drop states with no incoming or no outgoing transition. What remains is
/// the part that carries the growth rate of the language.
pub fn essential_component(a: &ConstraintAutomaton) -> ConstraintAutomaton {
    let n = a.num_states();
    let mut alive = vec![true; n];
    loop {
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for u in 0..n {
            if !alive[u] {
                continue;
            }
            for (_, v) in a.transitions_from(u) {
                if alive[v] {
                    outdeg[u] += 1;
                    indeg[v] += 1;
                }
            }
        }
        let mut changed = false;
        for u in 0..n {
            if alive[u] && (indeg[u] == 0 || outdeg[u] == 0) {
                alive[u] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut remap = vec![None; n];
    let mut labels = Vec::new();
    for u in 0..n {
        if alive[u] {
            remap[u] = Some(labels.len());
            labels.push(a.labels[u].clone());
        }
    }
    let mut delta = vec![vec![None; a.sigma as usize]; labels.len()];
    for u in 0..n {
        let Some(nu) = remap[u] else { continue };
        for (sym, v) in a.transitions_from(u) {
            if let Some(nv) = remap[v] {
                delta[nu][sym as usize] = Some(nv);
            }
        }
    }
    ConstraintAutomaton {
        labels,
        delta,
        initial: a.initial.and_then(|i| remap[i]),
        sigma: a.sigma,
    }
}

/// Nonnegative integer adjacency matrix: entry (u,v) counts the symbols
/// labeling edges u -> v. Row sums never exceed sigma by determinism.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    dim: usize,
    /// rows[u] = sorted list of (v, multiplicity)
    rows: Vec<Vec<(usize, u32)>>,
    sigma: u32,
}

impl TransferMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn row(&self, u: usize) -> &[(usize, u32)] {
        &self.rows[u]
    }

    pub fn entry(&self, u: usize, v: usize) -> u32 {
        self.rows[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, c)| c)
    }

    pub fn row_sum(&self, u: usize) -> u32 {
        self.rows[u].iter().map(|&(_, c)| c).sum()
    }

    /// y = A x
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (u, row) in self.rows.iter().enumerate() {
            let xu = x[u];
            if xu == 0.0 {
                continue;
            }
            for &(v, c) in row {
                y[v] += xu * c as f64;
            }
        }
    }

    /// Dense CSV, one row per line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for u in 0..self.dim {
            let line: Vec<String> = (0..self.dim).map(|v| self.entry(u, v).to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Adjacency matrix of an automaton. Errors on the empty automaton.
pub fn transfer_matrix(a: &ConstraintAutomaton) -> Result<TransferMatrix> {
    if a.num_states() == 0 {
        return Err(Error::InvalidInput(
            "cannot take the transfer matrix of an empty automaton".into(),
        ));
    }
    let dim = a.num_states();
    let mut rows = Vec::with_capacity(dim);
    for u in 0..dim {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for (_, v) in a.transitions_from(u) {
            *counts.entry(v).or_insert(0) += 1;
        }
        rows.push(counts.into_iter().collect());
    }
    Ok(TransferMatrix {
        dim,
        rows,
        sigma: a.sigma,
    })
}

/// Outcome of the eigenvalue computation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PerronResult {
    pub lambda: f64,
    /// log_sigma of lambda, clamped into the unit interval.
    pub capacity: f64,
    pub iterations: u64,
    pub residual: f64,
}

pub const EIGEN_ITERATION_CAP: u64 = 1_000_000;

/// Largest eigenvalue of a nonnegative matrix by power iteration.
///
/// The matrix is split into strongly connected components and each
/// component with at least one edge is iterated separately; the answer is
/// the maximum over components (zero when there is none, i.e. the language
/// of long words is empty). Iterating A+I instead of A keeps the iteration
/// convergent on periodic components without changing eigenvectors. For a
/// component of period d the eigenvalue is still the growth rate of its
/// path counts, only sampled every d steps.
pub fn largest_eigenvalue(m: &TransferMatrix, tol: f64) -> Result<PerronResult> {
    if tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..m.dim()).map(|_| graph.add_node(())).collect();
    for u in 0..m.dim() {
        for &(v, _) in m.row(u) {
            graph.add_edge(nodes[u], nodes[v], ());
        }
    }

    let mut best = PerronResult {
        lambda: 0.0,
        capacity: 0.0,
        iterations: 0,
        residual: 0.0,
    };
    let mut total_iterations = 0u64;
    for scc in petgraph::algo::tarjan_scc(&graph) {
        let members: Vec<usize> = scc.iter().map(|n| n.index()).collect();
        let nontrivial = members.len() > 1 || m.entry(members[0], members[0]) > 0;
        if !nontrivial {
            continue;
        }
        let (lambda, iterations, residual) = power_iterate_component(m, &members, tol)?;
        total_iterations += iterations;
        if lambda > best.lambda {
            best.lambda = lambda;
            best.residual = residual;
        }
    }
    best.iterations = total_iterations;
    best.capacity = if best.lambda > 0.0 {
        (best.lambda.ln() / (m.sigma() as f64).ln()).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(best)
}

fn power_iterate_component(
    m: &TransferMatrix,
    members: &[usize],
    tol: f64,
) -> Result<(f64, u64, f64)> {
    let dim = members.len();
    let mut local = vec![usize::MAX; m.dim()];
    for (i, &u) in members.iter().enumerate() {
        local[u] = i;
    }
    // submatrix rows restricted to the component
    let rows: Vec<Vec<(usize, f64)>> = members
        .iter()
        .map(|&u| {
            m.row(u)
                .iter()
                .filter(|&&(v, _)| local[v] != usize::MAX)
                .map(|&(v, c)| (local[v], c as f64))
                .collect()
        })
        .collect();

    let apply = |x: &[f64], y: &mut [f64]| {
        for (row, slot) in rows.iter().zip(y.iter_mut()) {
            let mut acc = 0.0;
            for &(j, c) in row {
                acc += c * x[j];
            }
            *slot = acc;
        }
    };

    let mut x = vec![1.0 / dim as f64; dim];
    let mut ax = vec![0.0; dim];
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for it in 1..=EIGEN_ITERATION_CAP {
        apply(&x, &mut ax);
        // Rayleigh quotient on A with the current iterate
        let num: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let den: f64 = x.iter().map(|a| a * a).sum();
        lambda = num / den;
        let xmax = x.iter().cloned().fold(0.0f64, f64::max);
        residual = x
            .iter()
            .zip(&ax)
            .map(|(xi, axi)| (axi - lambda * xi).abs())
            .fold(0.0f64, f64::max)
            / xmax;
        if residual <= tol {
            return Ok((lambda, it, residual));
        }
        // next iterate from A+I, normalized in the infinity norm
        let mut norm = 0.0f64;
        for i in 0..dim {
            x[i] += ax[i];
            norm = norm.max(x[i]);
        }
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    Err(Error::Numeric(format!(
        "power iteration did not reach tolerance {tol:e} within {EIGEN_ITERATION_CAP} iterations (best estimate lambda={lambda}, residual={residual:e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::is_constrained_acyclic;
    use crate::words::Alphabet;

    fn cp(b: usize, k: usize, sigma: u32) -> ConstraintParams {
        ConstraintParams::new(b, k, sigma).unwrap()
    }

    #[test]
    fn b1_is_a_single_absorbing_state() {
        for form in [Form::Window, Form::Prefix] {
            let a = build_automaton(&cp(1, 4, 3), form).unwrap();
            assert_eq!(a.num_states(), 1);
            for sym in 0..3 {
                assert_eq!(a.step(0, sym), Some(0));
            }
        }
    }

    #[test]
    fn prefix_form_33_has_13_states() {
        let a = build_automaton(&cp(3, 3, 2), Form::Prefix).unwrap();
        assert_eq!(a.num_states(), 13);
        let e = essential_component(&a);
        assert_eq!(e.num_states(), 10);
    }

    #[test]
    fn essential_21_is_the_two_cycle() {
        let a = build_automaton(&cp(2, 1, 2), Form::Prefix).unwrap();
        let e = essential_component(&a);
        assert_eq!(e.num_states(), 2);
        // transitions only 0 <-> 1
        for u in 0..2 {
            let targets: Vec<_> = e.transitions_from(u).collect();
            assert_eq!(targets.len(), 1);
            assert_eq!(targets[0].1, 1 - u);
        }
    }

    #[test]
    fn essential_22_has_4_states() {
        let a = build_automaton(&cp(2, 2, 2), Form::Prefix).unwrap();
        let e = essential_component(&a);
        assert_eq!(e.num_states(), 4);
    }

    #[test]
    fn transfer_matrix_of_b1_is_sigma() {
        let a = build_automaton(&cp(1, 2, 5), Form::Prefix).unwrap();
        let m = transfer_matrix(&a).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.entry(0, 0), 5);
        let r = largest_eigenvalue(&m, 1e-10).unwrap();
        assert!((r.lambda - 5.0).abs() < 1e-9);
        assert!((r.capacity - 1.0).abs() < 1e-9);
    }

    #[test]
    fn row_sums_bounded_by_sigma() {
        for (b, k, sigma) in [(2, 2, 2u32), (3, 3, 2), (2, 1, 3), (4, 2, 3)] {
            let a = build_automaton(&cp(b, k, sigma), Form::Prefix).unwrap();
            let m = transfer_matrix(&a).unwrap();
            for u in 0..m.dim() {
                assert!(m.row_sum(u) <= sigma);
            }
        }
    }

    /// Reference 10x10 adjacency matrix of the essential (3,3) binary
    /// system, checked up to a simultaneous row/column permutation.
    const REF_33: [[u32; 10]; 10] = [
        [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
        [1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
        [0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
    ];

    fn isomorphic(a: &[Vec<u32>], b: &[[u32; 10]; 10]) -> bool {
        // backtracking search for a permutation carrying a onto b
        let n = a.len();
        if n != 10 {
            return false;
        }
        let sig = |m: &dyn Fn(usize, usize) -> u32, v: usize| -> (u32, u32) {
            let out = (0..n).map(|w| m(v, w)).sum();
            let inn = (0..n).map(|w| m(w, v)).sum();
            (out, inn)
        };
        let fa = |u: usize, v: usize| a[u][v];
        let fb = |u: usize, v: usize| b[u][v];
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        #[allow(clippy::too_many_arguments)]
        fn go(
            i: usize,
            n: usize,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            fa: &dyn Fn(usize, usize) -> u32,
            fb: &dyn Fn(usize, usize) -> u32,
            sig_a: &[(u32, u32)],
            sig_b: &[(u32, u32)],
        ) -> bool {
            if i == n {
                return true;
            }
            for cand in 0..n {
                if used[cand] || sig_a[i] != sig_b[cand] {
                    continue;
                }
                let ok = (0..i).all(|j| {
                    fa(i, j) == fb(cand, perm[j]) && fa(j, i) == fb(perm[j], cand)
                }) && fa(i, i) == fb(cand, cand);
                if ok {
                    perm[i] = cand;
                    used[cand] = true;
                    if go(i + 1, n, perm, used, fa, fb, sig_a, sig_b) {
                        return true;
                    }
                    used[cand] = false;
                    perm[i] = usize::MAX;
                }
            }
            false
        }
        let sig_a: Vec<_> = (0..n).map(|v| sig(&fa, v)).collect();
        let sig_b: Vec<_> = (0..n).map(|v| sig(&fb, v)).collect();
        go(0, n, &mut perm, &mut used, &fa, &fb, &sig_a, &sig_b)
    }

    #[test]
    fn transfer_33_matches_reference_up_to_permutation() {
        let a = build_automaton(&cp(3, 3, 2), Form::Prefix).unwrap();
        let e = essential_component(&a);
        let m = transfer_matrix(&e).unwrap();
        assert_eq!(m.dim(), 10);
        let dense: Vec<Vec<u32>> = (0..10)
            .map(|u| (0..10).map(|v| m.entry(u, v)).collect())
            .collect();
        assert!(isomorphic(&dense, &REF_33));
    }

    /// Perron root of the reference (3,3) matrix above, cross-checked by
    /// outside linear algebra and by the count ratio |C(41)|/|C(40)|.
    pub(crate) const LAMBDA_33: f64 = 1.7346913456924684;

    #[test]
    fn eigenvalue_33_and_22() {
        let a = build_automaton(&cp(3, 3, 2), Form::Prefix).unwrap();
        let m = transfer_matrix(&essential_component(&a)).unwrap();
        let r = largest_eigenvalue(&m, 1e-10).unwrap();
        assert!((r.lambda - LAMBDA_33).abs() < 1e-8, "lambda={}", r.lambda);
        assert!((r.capacity - 0.7946).abs() < 5e-4, "capacity={}", r.capacity);

        let a = build_automaton(&cp(2, 2, 2), Form::Prefix).unwrap();
        let m = transfer_matrix(&essential_component(&a)).unwrap();
        let r = largest_eigenvalue(&m, 1e-10).unwrap();
        assert!((r.capacity - 0.6942).abs() < 5e-4, "capacity={}", r.capacity);
    }

    #[test]
    fn eigenvalue_of_periodic_component_converges() {
        // the essential (2,1) system is a pure 2-cycle with lambda 1
        let a = build_automaton(&cp(2, 1, 2), Form::Prefix).unwrap();
        let m = transfer_matrix(&essential_component(&a)).unwrap();
        let r = largest_eigenvalue(&m, 1e-10).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-9);
        assert!((r.capacity - 0.0).abs() < 1e-9);
    }

    #[test]
    fn full_and_essential_share_the_growth_rate() {
        for (b, k) in [(2, 2), (3, 3), (3, 2), (4, 3)] {
            let a = build_automaton(&cp(b, k, 2), Form::Prefix).unwrap();
            let lam_full = largest_eigenvalue(&transfer_matrix(&a).unwrap(), 1e-10)
                .unwrap()
                .lambda;
            let e = essential_component(&a);
            let lam_ess = largest_eigenvalue(&transfer_matrix(&e).unwrap(), 1e-10)
                .unwrap()
                .lambda;
            assert!((lam_full - lam_ess).abs() < 1e-8, "b={b} k={k}");
        }
    }

    #[test]
    fn both_forms_accept_exactly_the_constrained_words() {
        for sigma in [2u32, 3] {
            let alpha = Alphabet::new(sigma).unwrap();
            for b in 1..=4usize {
                for k in 1..=3usize {
                    let c = cp(b, k, sigma);
                    let win = build_automaton(&c, Form::Window).unwrap();
                    let pre = build_automaton(&c, Form::Prefix).unwrap();
                    let max_n = if sigma == 2 { 9 } else { 6 };
                    for n in 0..=max_n {
                        for word in alpha.words(n) {
                            let expect = is_constrained_acyclic(&word, &c).unwrap();
                            assert_eq!(win.accepts(&word), expect, "window {word} b={b} k={k}");
                            assert_eq!(pre.accepts(&word), expect, "prefix {word} b={b} k={k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn state_budget_is_enforced() {
        let err = build_automaton_with_budget(&cp(3, 3, 2), Form::Window, 4);
        assert!(matches!(err, Err(Error::Resource(_))));
    }

    #[test]
    fn unsatisfiable_pattern_set_yields_empty_automaton() {
        let f = PatternSet::new([Word::new(vec![0]), Word::new(vec![1])], 2);
        let a = build_prefix_from_patterns(&f, 1024).unwrap();
        assert_eq!(a.num_states(), 0);
        assert_eq!(a.initial(), None);
        assert!(transfer_matrix(&a).is_err());
    }

    #[test]
    fn automaton_json_roundtrip_shape() {
        let a = build_automaton(&cp(2, 1, 2), Form::Prefix).unwrap();
        let v = a.to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["states"].as_array().unwrap().len(), a.num_states());
        assert_eq!(v["initial"], 0);
    }
}
