//! Congruence (renaming plus body permutation), properization, global equivalence.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::reduction::canonical_form;
use crate::syntax::{print_program, FnVar, IndVar, Program, Sort, Term};

/// Maps `e` onto `f`: equation `i` of `e` goes to `body_permutation[i]` of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceWitness {
    pub body_permutation: Vec<usize>,
    pub fn_renaming: HashMap<FnVar, FnVar>,
    /// Parameter renaming of each equation of `e`.
    pub per_equation_ind_renaming: Vec<HashMap<IndVar, IndVar>>,
}

impl CongruenceWitness {
    pub fn inverse(&self) -> CongruenceWitness {
        let n = self.body_permutation.len();
        let mut perm = vec![0; n];
        let mut ind = vec![HashMap::new(); n];
        for (i, &j) in self.body_permutation.iter().enumerate() {
            perm[j] = i;
            ind[j] = self.per_equation_ind_renaming[i]
                .iter()
                .map(|(a, b)| (*b, *a))
                .collect();
        }
        CongruenceWitness {
            body_permutation: perm,
            fn_renaming: self.fn_renaming.iter().map(|(a, b)| (*b, *a)).collect(),
            per_equation_ind_renaming: ind,
        }
    }

    /// `self` maps e onto f, `then` maps f onto g; the result maps e onto g.
    pub fn compose(&self, then: &CongruenceWitness) -> CongruenceWitness {
        CongruenceWitness {
            body_permutation: self
                .body_permutation
                .iter()
                .map(|&j| then.body_permutation[j])
                .collect(),
            fn_renaming: self
                .fn_renaming
                .iter()
                .map(|(a, b)| (*a, then.fn_renaming[b]))
                .collect(),
            per_equation_ind_renaming: self
                .per_equation_ind_renaming
                .iter()
                .zip(&self.body_permutation)
                .map(|(m, &j)| {
                    m.iter()
                        .map(|(a, b)| (*a, then.per_equation_ind_renaming[j][b]))
                        .collect()
                })
                .collect(),
        }
    }

    /// Checks that the witness carries every part of `e` to the corresponding part of `f`.
    pub fn verify(&self, e: &Program, f: &Program) -> bool {
        if e.free_vars != f.free_vars || e.equations.len() != f.equations.len() {
            return false;
        }
        let fv = |p: FnVar| *self.fn_renaming.get(&p).unwrap_or(&p);
        if e.head.map_vars(&fv, &|v| v) != f.head {
            return false;
        }
        e.equations.iter().enumerate().all(|(i, eq)| {
            let Some(target) = self.body_permutation.get(i).and_then(|&j| f.equations.get(j)) else {
                return false;
            };
            let m = &self.per_equation_ind_renaming[i];
            let iv = |v: IndVar| *m.get(&v).unwrap_or(&v);
            fv(eq.var) == target.var
                && eq.params.iter().map(|&v| iv(v)).collect::<Vec<_>>() == target.params
                && eq.body.map_vars(&fv, &iv) == target.body
        })
    }
}

/// Root structure with function variables anonymized and parameters replaced by position.
fn shape(t: &Term, params: &[IndVar]) -> Term {
    t.map_vars(
        &|p| FnVar::new(0, p.sort, p.arity),
        &|v| IndVar(params.iter().position(|w| *w == v).map_or(u32::MAX, |k| k as u32)),
    )
}

fn occurrences(t: &Term) -> Vec<FnVar> {
    let mut out = Vec::new();
    t.visit(&mut |s| {
        if let Term::App(p, _) = s {
            out.push(*p);
        }
    });
    out
}

/// Matches equations of `e` to equations of `f`. Pairing two parts of equal shape
/// forces the image of every function variable they call, so assignments propagate
/// from the head and from each chosen part down to its callees.
type Part = ((Sort, u32), Term, Vec<usize>);

struct Matcher {
    /// `(sort and arity, shape, callees)` of each equation of `e` and of `f`
    e_parts: Vec<Part>,
    f_parts: Vec<Part>,
    f_of: Vec<Option<usize>>,
    used: Vec<bool>,
    trail: Vec<usize>,
    /// equations of `e` calling each equation of `e`, excluding itself
    callers: Vec<Vec<usize>>,
}

impl Matcher {
    fn new(e: &Program, f: &Program) -> Matcher {
        let parts = |p: &Program| {
            let idx: HashMap<FnVar, usize> = p.equations.iter().enumerate().map(|(i, q)| (q.var, i)).collect();
            let calls = |t: &Term| occurrences(t).iter().map(|q| idx[q]).collect::<Vec<_>>();
            let eqs = p
                .equations
                .iter()
                .map(|q| ((q.var.sort, q.var.arity), shape(&q.body, &q.params), calls(&q.body)))
                .collect::<Vec<_>>();
            (eqs, calls(&p.head))
        };
        let (e_parts, _) = parts(e);
        let (f_parts, _) = parts(f);
        let mut callers = vec![Vec::new(); e_parts.len()];
        for (i, (_, _, calls)) in e_parts.iter().enumerate() {
            for &c in calls {
                if c != i && !callers[c].contains(&i) {
                    callers[c].push(i);
                }
            }
        }
        let m = e_parts.len();
        Matcher {
            e_parts,
            f_parts,
            f_of: vec![None; m],
            used: vec![false; m],
            trail: Vec::new(),
            callers,
        }
    }

    fn head_calls(p: &Program) -> Vec<usize> {
        occurrences(&p.head)
            .iter()
            .map(|q| p.equations.iter().position(|r| r.var == *q).expect("head calls a defined variable"))
            .collect()
    }

    fn fits(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.e_parts[i], &self.f_parts[j]);
        a.0 == b.0 && a.1 == b.1
    }

    fn pair(&mut self, i: usize, j: usize) -> bool {
        let mut stack = vec![(i, j)];
        while let Some((i, j)) = stack.pop() {
            match self.f_of[i] {
                Some(k) if k == j => continue,
                Some(_) => return false,
                None if self.used[j] || !self.fits(i, j) => return false,
                None => {}
            }
            self.f_of[i] = Some(j);
            self.used[j] = true;
            self.trail.push(i);
            stack.extend(self.e_parts[i].2.iter().copied().zip(self.f_parts[j].2.iter().copied()));
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().unwrap();
            self.used[self.f_of[i].take().unwrap()] = false;
        }
    }

    /// Unmatched equations of `f` that `i` can be paired with without contradiction.
    fn options(&mut self, i: usize) -> Vec<usize> {
        let mark = self.trail.len();
        let mut out = Vec::new();
        for j in 0..self.f_parts.len() {
            if !self.used[j] && self.fits(i, j) {
                if self.pair(i, j) {
                    out.push(j);
                }
                self.undo(mark);
            }
        }
        out
    }

    fn search(&mut self) -> bool {
        let open: Vec<usize> = (0..self.f_of.len()).filter(|&i| self.f_of[i].is_none()).collect();
        if open.is_empty() {
            return true;
        }
        let sources: Vec<usize> = open
            .iter()
            .copied()
            .filter(|&i| self.callers[i].iter().all(|&c| self.f_of[c].is_some()))
            .collect();
        let pool = if sources.is_empty() { open } else { sources };
        let mut best: Option<(usize, Vec<usize>)> = None;
        for i in pool {
            let opts = self.options(i);
            if opts.len() <= 1 {
                best = Some((i, opts));
                break;
            }
            if best.as_ref().is_none_or(|(_, b)| opts.len() < b.len()) {
                best = Some((i, opts));
            }
        }
        let (i, opts) = best.expect("an open equation exists");
        let mark = self.trail.len();
        for j in opts {
            if self.pair(i, j) && self.search() {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

pub fn congruent(e: &Program, f: &Program) -> Option<CongruenceWitness> {
    if e.free_vars != f.free_vars || e.equations.len() != f.equations.len() {
        return None;
    }
    if shape(&e.head, &e.free_vars) != shape(&f.head, &f.free_vars) {
        return None;
    }
    let mut m = Matcher::new(e, f);
    let heads = Matcher::head_calls(e).into_iter().zip(Matcher::head_calls(f));
    for (i, j) in heads {
        if !m.pair(i, j) {
            return None;
        }
    }
    if !m.search() {
        return None;
    }
    let body_permutation: Vec<usize> = m.f_of.iter().map(|j| j.unwrap()).collect();
    let fn_renaming = e
        .equations
        .iter()
        .zip(&body_permutation)
        .map(|(eq, &j)| (eq.var, f.equations[j].var))
        .collect();
    let per_equation_ind_renaming = e
        .equations
        .iter()
        .zip(&body_permutation)
        .map(|(eq, &j)| {
            eq.params
                .iter()
                .copied()
                .zip(f.equations[j].params.iter().copied())
                .collect()
        })
        .collect();
    Some(CongruenceWitness {
        body_permutation,
        fn_renaming,
        per_equation_ind_renaming,
    })
}

/// Replaces every boolean immediate part `E` by `if E then E else E`.
pub fn properize(p: &Program) -> Result<Program> {
    if !p.is_irreducible() {
        return Err(Error::NotIrreducible(print_program(p)));
    }
    let fix = |t: &Term| {
        if t.is_immediate() && t.sort() == Sort::Bool {
            Term::cond(t.clone(), t.clone(), t.clone())
        } else {
            t.clone()
        }
    };
    let mut out = p.clone();
    out.head = fix(&p.head);
    for eq in &mut out.equations {
        eq.body = fix(&eq.body);
    }
    Ok(out)
}

/// Equivalence in every structure: canonical forms, properized, are congruent.
pub fn globally_equivalent(e: &Program, f: &Program) -> bool {
    let pe = properize(&canonical_form(e)).expect("canonical forms are irreducible");
    let pf = properize(&canonical_form(f)).expect("canonical forms are irreducible");
    congruent(&pe, &pf).is_some()
}
