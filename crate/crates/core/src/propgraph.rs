//! Directed graphs as propositional programs: isomorphic graphs give
//! intensionally equivalent encodings.
//!
//! ```text
//! nodes 3
//! edge 0 1
//! edge 1 2
//! ```

use std::collections::BTreeSet;
use std::fmt::Write;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::identities::Oracle;
use crate::intension::intensionally_equivalent;
use crate::syntax::{Equation, FnVar, Program, Sort, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidProgram("a graph needs at least one node".into()));
        }
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some((i, j)) = edges.iter().find(|(i, j)| *i >= n || *j >= n) {
            return Err(Error::InvalidProgram(format!("edge ({i}, {j}) is out of range")));
        }
        Ok(Graph { n, edges })
    }

    /// The graph whose edge set is the bits of `code`, edge `(i, j)` at bit `i * n + j`.
    pub fn from_code(n: usize, code: u64) -> Result<Graph> {
        let edges = (0..n * n).filter(|b| code >> b & 1 == 1).map(|b| (b / n, b % n));
        Graph::new(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    /// Node `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.iter().map(|&(i, j)| (perm[i], perm[j])).collect(),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let fail = |line, msg: String| Error::Format { line, msg };
    let mut n = None;
    let mut edges = Vec::new();
    for (k, l) in text.lines().enumerate() {
        let line = k + 1;
        let w: Vec<&str> = l.split_whitespace().collect();
        if w.is_empty() || w[0].starts_with('#') {
            continue;
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| fail(line, format!("bad number `{s}`")));
        match (n, w.as_slice()) {
            (None, ["nodes", c]) => n = Some(num(c)?),
            (None, _) => return Err(fail(line, "expected `nodes <n>`".into())),
            (Some(c), ["edge", i, j]) => {
                let (i, j) = (num(i)?, num(j)?);
                if i >= c || j >= c {
                    return Err(fail(line, format!("edge ({i}, {j}) is out of range")));
                }
                edges.push((i, j));
            }
            (Some(_), _) => return Err(fail(line, "expected `edge <i> <j>`".into())),
        }
    }
    let n = n.ok_or_else(|| fail(1, "missing `nodes <n>`".into()))?;
    Graph::new(n, edges).map_err(|e| fail(1, e.to_string()))
}

pub fn print_graph(g: &Graph) -> String {
    let mut out = format!("nodes {}\n", g.n);
    for (i, j) in &g.edges {
        writeln!(out, "edge {i} {j}").unwrap();
    }
    out
}

fn prop(index: usize) -> FnVar {
    FnVar::new(index as u32, Sort::Bool, 0)
}

fn call(p: FnVar) -> Term {
    Term::App(p, vec![])
}

/// `true` where `p_i = p_i`, `p_ij = if p_i then p_j else r` for edges,
/// `p_ij = if p_i then r else p_j` for non-edges, and `r = false`.
pub fn encode_graph(g: &Graph) -> Program {
    let n = g.n;
    let node = |i: usize| prop(i);
    let pair = |i: usize, j: usize| prop(n + i * n + j);
    let r = prop(n + n * n);
    let eq = |var, body| Equation {
        var,
        params: vec![],
        body,
    };
    let mut equations: Vec<Equation> = (0..n).map(|i| eq(node(i), call(node(i)))).collect();
    for (i, j) in (0..n).cartesian_product(0..n) {
        let body = if g.has_edge(i, j) {
            Term::cond(call(node(i)), call(node(j)), call(r))
        } else {
            Term::cond(call(node(i)), call(r), call(node(j)))
        };
        equations.push(eq(pair(i, j), body));
    }
    equations.push(eq(r, Term::False));
    Program::new(Term::True, vec![], equations).expect("encodings are well formed")
}

pub fn graphs_isomorphic_via_intension(g1: &Graph, g2: &Graph) -> bool {
    if g1.n != g2.n {
        return false;
    }
    intensionally_equivalent(&Oracle::Free, &encode_graph(g1), &encode_graph(g2))
        .expect("free-mode decisions do not fail")
        .is_some()
}

const MAX_BRUTE_FORCE: usize = 8;

pub fn brute_force_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    let n = g1.n.max(g2.n);
    if n > MAX_BRUTE_FORCE {
        return Err(Error::GuardExceeded(format!(
            "brute-force isomorphism is limited to {MAX_BRUTE_FORCE} nodes"
        )));
    }
    if g1.n != g2.n || g1.edges.len() != g2.edges.len() {
        return Ok(false);
    }
    Ok((0..n).permutations(n).any(|perm| g1.relabel(&perm) == *g2))
}

/// The least relabeling of `g` in edge-set order, a complete isomorphism invariant.
pub fn brute_force_canonical(g: &Graph) -> Result<Graph> {
    if g.n > MAX_BRUTE_FORCE {
        return Err(Error::GuardExceeded(format!(
            "brute-force canonical labeling is limited to {MAX_BRUTE_FORCE} nodes"
        )));
    }
    Ok((0..g.n)
        .permutations(g.n)
        .map(|perm| g.relabel(&perm))
        .min()
        .expect("at least one permutation"))
}
