#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mccarthy::semantics::{FiniteStructure, Machine, Value};
use mccarthy::syntax::{Equation, FnVar, FuncSymbol, IndVar, Program, Signature, Sort, Term};

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `c` (a constant), `f` unary, `g` binary, `h` unary, and boolean `b` unary, `r` binary.
pub fn program_signature() -> Signature {
    Signature::with_symbols([
        FuncSymbol::new("c", 0, Sort::Ind),
        FuncSymbol::new("f", 1, Sort::Ind),
        FuncSymbol::new("g", 2, Sort::Ind),
        FuncSymbol::new("h", 1, Sort::Ind),
        FuncSymbol::new("b", 1, Sort::Bool),
        FuncSymbol::new("r", 2, Sort::Bool),
    ])
    .unwrap()
}

/// Up to `ind` individual and `bools` boolean user symbols of arity at most `max_arity`.
pub fn random_signature(r: &mut Rng8, ind: usize, bools: usize, max_arity: usize) -> Signature {
    let mut syms = Vec::new();
    for (k, name) in ["f", "g", "h", "k"].iter().take(ind).enumerate() {
        let arity = if k == 0 { 1 } else { r.gen_range(0..=max_arity) };
        syms.push(FuncSymbol::new(name, arity, Sort::Ind));
    }
    for name in ["a", "b"].iter().take(bools) {
        syms.push(FuncSymbol::new(name, r.gen_range(0..=max_arity), Sort::Bool));
    }
    Signature::with_symbols(syms).unwrap()
}

fn random_value(r: &mut Rng8, sort: Sort, carrier: usize) -> Value {
    match sort {
        Sort::Ind => Value::Ind(r.gen_range(0..carrier)),
        Sort::Bool => Value::Bool(r.gen()),
    }
}

fn tuples(carrier: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..carrier).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Each entry is defined with probability `density`, always when `total`.
pub fn random_structure(r: &mut Rng8, sig: &Signature, carrier: usize, total: bool, density: f64) -> FiniteStructure {
    let mut a = FiniteStructure::new("random", carrier, sig.clone(), total).unwrap();
    for f in sig.user_symbols() {
        for t in tuples(carrier, f.arity) {
            if total || r.gen_bool(density) {
                let v = random_value(r, f.sort, carrier);
                a.set(&f.name, &t, v).unwrap();
            }
        }
    }
    a
}

/// Copies the table of `from` onto `to` (same arity and sort).
pub fn copy_table(a: &mut FiniteStructure, from: &str, to: &str) {
    for (t, v) in a.entries(from) {
        a.set(to, &t, v).unwrap();
    }
}

struct ProgGen<'a> {
    sig: &'a Signature,
    fns: Vec<FnVar>,
}

impl ProgGen<'_> {
    fn term(&self, r: &mut Rng8, sort: Sort, vars: &[IndVar], depth: usize) -> Term {
        if depth <= 1 || r.gen_bool(0.3) {
            return self.leaf(r, sort, vars);
        }
        let syms: Vec<&FuncSymbol> = self.sig.user_symbols().iter().filter(|f| f.sort == sort).collect();
        let fns: Vec<&FnVar> = self.fns.iter().filter(|p| p.sort == sort).collect();
        let args = |r: &mut Rng8, n: usize| (0..n).map(|_| self.term(r, Sort::Ind, vars, depth - 1)).collect();
        match r.gen_range(0..3) {
            0 => Term::cond(
                self.term(r, Sort::Bool, vars, depth - 1),
                self.term(r, sort, vars, depth - 1),
                self.term(r, sort, vars, depth - 1),
            ),
            1 if !syms.is_empty() => {
                let f = (*syms.choose(r).unwrap()).clone();
                let a = args(r, f.arity);
                Term::Sym(f, a)
            }
            _ if !fns.is_empty() => {
                let p = **fns.choose(r).unwrap();
                let a = args(r, p.arity as usize);
                Term::App(p, a)
            }
            _ => self.leaf(r, sort, vars),
        }
    }

    fn leaf(&self, r: &mut Rng8, sort: Sort, vars: &[IndVar]) -> Term {
        match sort {
            Sort::Bool => match r.gen_range(0..3) {
                0 => Term::True,
                1 => Term::False,
                _ => match self.fns.iter().find(|p| p.sort == Sort::Bool && p.arity == 0) {
                    Some(p) => Term::App(*p, vec![]),
                    None => Term::True,
                },
            },
            Sort::Ind => {
                if !vars.is_empty() && r.gen_bool(0.8) {
                    Term::Var(*vars.choose(r).unwrap())
                } else {
                    Term::Sym(self.sig.get("c").unwrap().clone(), vec![])
                }
            }
        }
    }
}

/// A random valid program over [`program_signature`]: at most `max_eqs` equations of
/// arity at most 2 and term depth at most `depth`.
pub fn random_program(r: &mut Rng8, max_eqs: usize, depth: usize) -> Program {
    let sig = program_signature();
    let n = r.gen_range(0..=max_eqs);
    let fns: Vec<FnVar> = (0..n)
        .map(|i| {
            let sort = if r.gen_bool(0.3) { Sort::Bool } else { Sort::Ind };
            FnVar::new(i as u32, sort, r.gen_range(0..=2))
        })
        .collect();
    let g = ProgGen { sig: &sig, fns: fns.clone() };
    let free: Vec<IndVar> = (0..r.gen_range(0..=2)).map(IndVar).collect();
    let head_sort = if r.gen_bool(0.25) { Sort::Bool } else { Sort::Ind };
    let head = g.term(r, head_sort, &free, depth);
    let equations = fns
        .iter()
        .map(|&p| {
            let params: Vec<IndVar> = (0..p.arity).map(IndVar).collect();
            Equation {
                var: p,
                params: params.clone(),
                body: g.term(r, p.sort, &params, depth),
            }
        })
        .collect();
    Program::new(head, free, equations).expect("generated programs are valid")
}

pub fn random_machine(r: &mut Rng8, max_states: usize) -> Machine {
    let inputs = r.gen_range(1..=3);
    let outputs = r.gen_range(1..=3);
    let states = r.gen_range(1..=max_states);
    let terminal: Vec<bool> = (0..states).map(|_| r.gen_bool(0.35)).collect();
    Machine {
        inputs,
        outputs,
        states,
        input: (0..inputs).map(|_| r.gen_range(0..states)).collect(),
        next: (0..states)
            .map(|_| r.gen_bool(0.85).then(|| r.gen_range(0..states)))
            .collect(),
        output: terminal
            .iter()
            .map(|&t| (t && r.gen_bool(0.85)).then(|| r.gen_range(0..outputs)))
            .collect(),
        terminal,
    }
}
