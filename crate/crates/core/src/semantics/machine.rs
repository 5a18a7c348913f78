//! Iterators (sequential machines) and the tail-recursive program that simulates them.

use std::collections::HashSet;

use super::{FiniteStructure, PartialValue, Value};
use crate::error::{Error, Result};
use crate::syntax::{Equation, FnVar, FuncSymbol, IndVar, Program, Signature, Sort, Term};

/// An iterator `(input, S, next, T, output)` from inputs `X` to outputs `W`.
///
/// In the associated structure the carrier is `X ⊎ W ⊎ S`, laid out as
/// `0..|X|`, then `|X|..|X|+|W|`, then the states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    pub inputs: usize,
    pub outputs: usize,
    pub states: usize,
    pub input: Vec<usize>,
    pub next: Vec<Option<usize>>,
    pub terminal: Vec<bool>,
    pub output: Vec<Option<usize>>,
}

impl Machine {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidProgram(format!("machine: {m}")));
        if self.input.len() != self.inputs
            || self.next.len() != self.states
            || self.terminal.len() != self.states
            || self.output.len() != self.states
        {
            return bad("table sizes do not match the declared sets");
        }
        if self.input.iter().any(|&s| s >= self.states) {
            return bad("input leaves the state set");
        }
        if self.next.iter().flatten().any(|&s| s >= self.states) {
            return bad("transition leaves the state set");
        }
        for (s, o) in self.output.iter().enumerate() {
            match o {
                Some(w) if *w >= self.outputs => return bad("output leaves the output set"),
                Some(_) if !self.terminal[s] => return bad("output defined on a non-terminal state"),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn x_elem(&self, x: usize) -> usize {
        x
    }

    pub fn w_elem(&self, w: usize) -> usize {
        self.inputs + w
    }

    pub fn s_elem(&self, s: usize) -> usize {
        self.inputs + self.outputs + s
    }
}

pub fn iterator_signature() -> Signature {
    Signature::with_symbols([
        FuncSymbol::new("input", 1, Sort::Ind),
        FuncSymbol::new("sigma", 1, Sort::Ind),
        FuncSymbol::new("output", 1, Sort::Ind),
        FuncSymbol::new("T", 1, Sort::Bool),
    ])
    .expect("fixed signature")
}

pub fn iterator_structure(it: &Machine) -> Result<FiniteStructure> {
    it.validate()?;
    let n = it.inputs + it.outputs + it.states;
    let mut a = FiniteStructure::new("iterator", n, iterator_signature(), false)?;
    for x in 0..it.inputs {
        a.set("input", &[it.x_elem(x)], Value::Ind(it.s_elem(it.input[x])))?;
    }
    for s in 0..it.states {
        let e = it.s_elem(s);
        a.set("T", &[e], Value::Bool(it.terminal[s]))?;
        if let Some(t) = it.next[s] {
            a.set("sigma", &[e], Value::Ind(it.s_elem(t)))?;
        }
        if let Some(w) = it.output[s] {
            a.set("output", &[e], Value::Ind(it.w_elem(w)))?;
        }
    }
    Ok(a)
}

/// `q(input(x)) (x) where { q(s) = if T(s) then output(s) else q(sigma(s)) }`
pub fn iterator_program() -> Program {
    let sig = iterator_signature();
    let sym = |n: &str| sig.get(n).unwrap().clone();
    let (x, s) = (IndVar(0), IndVar(1));
    let q = FnVar::new(0, Sort::Ind, 1);
    let head = Term::App(q, vec![Term::Sym(sym("input"), vec![Term::Var(x)])]);
    let body = Term::cond(
        Term::Sym(sym("T"), vec![Term::Var(s)]),
        Term::Sym(sym("output"), vec![Term::Var(s)]),
        Term::App(q, vec![Term::Sym(sym("sigma"), vec![Term::Var(s)])]),
    );
    Program::new(
        head,
        vec![x],
        vec![Equation {
            var: q,
            params: vec![s],
            body,
        }],
    )
    .expect("well-formed")
}

/// Runs the machine from input `x`; the result is the output's carrier element in the
/// iterator structure, or divergence on a cycle or a stuck state.
pub fn run_iterator(it: &Machine, x: usize) -> PartialValue {
    let mut s = it.input[x];
    let mut seen = HashSet::new();
    loop {
        if it.terminal[s] {
            return it.output[s].map(|w| Value::Ind(it.w_elem(w)));
        }
        if !seen.insert(s) {
            return None;
        }
        s = it.next[s]?;
    }
}
