//! Arrow reduction, size, and canonical forms.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::syntax::{print_program, Equation, FnVar, Program, Term};

/// Where a reduction happens: the head, or the body equation of a function variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    Head,
    Body(FnVar),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReductionLabel {
    pub site: Site,
    /// 1-based argument position of the non-immediate subterm.
    pub arg: usize,
    pub fresh: FnVar,
}

impl fmt::Display for ReductionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.site {
            Site::Head => write!(f, "(HEAD,{},p{})", self.arg, self.fresh.index),
            Site::Body(p) => write!(f, "(p{},{},p{})", p.index, self.arg, self.fresh.index),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub start: Program,
    pub steps: Vec<(ReductionLabel, Program)>,
}

impl ReductionTrace {
    pub fn result(&self) -> &Program {
        self.steps.last().map_or(&self.start, |(_, p)| p)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The start program, then one labelled line per step.
    pub fn render(&self) -> String {
        let mut out = print_program(&self.start);
        out.push('\n');
        for (label, p) in &self.steps {
            out.push_str(&format!("{label} {}\n", print_program(p)));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    First,
    Random(u64),
}

pub fn term_size(t: &Term) -> usize {
    t.arguments()
        .into_iter()
        .filter(|g| !g.is_immediate())
        .map(|g| term_size(g) + 1)
        .sum()
}

pub fn size(p: &Program) -> usize {
    p.parts().map(term_size).sum()
}

fn replace_argument(t: &Term, j: usize, with: Term) -> Term {
    match t {
        Term::App(p, args) => {
            let mut args = args.clone();
            args[j] = with;
            Term::App(*p, args)
        }
        Term::Sym(f, args) => {
            let mut args = args.clone();
            args[j] = with;
            Term::Sym(f.clone(), args)
        }
        Term::Cond(a, b, c) => {
            let mut parts = [(**a).clone(), (**b).clone(), (**c).clone()];
            parts[j] = with;
            let [a, b, c] = parts;
            Term::cond(a, b, c)
        }
        _ => unreachable!("caller checked the argument exists"),
    }
}

fn occurs(p: &Program, index: u32) -> bool {
    p.equations.iter().any(|e| e.var.index == index)
        || p.parts().any(|t| t.fn_vars().iter().any(|q| q.index == index))
}

pub fn step(p: &Program, label: ReductionLabel) -> Result<Program> {
    let (term, params) = match label.site {
        Site::Head => (&p.head, &p.free_vars),
        Site::Body(v) => {
            let eq = p.equation_for(v).ok_or_else(|| {
                Error::NotReducibleHere(format!("no equation defines p{}", v.index))
            })?;
            (&eq.body, &eq.params)
        }
    };
    let args = term.arguments();
    let g = match label.arg.checked_sub(1).and_then(|j| args.get(j)) {
        Some(g) if !g.is_immediate() => (*g).clone(),
        Some(_) => return Err(Error::NotReducibleHere(format!("{label}: argument is immediate"))),
        None => return Err(Error::NotReducibleHere(format!("{label}: no such argument"))),
    };
    if occurs(p, label.fresh.index) {
        return Err(Error::NotFresh(format!("p{}", label.fresh.index)));
    }
    if label.fresh.arity as usize != params.len() || label.fresh.sort != g.sort() {
        return Err(Error::SortArityMismatch(format!(
            "{label}: fresh variable must have sort {} and arity {}",
            g.sort(),
            params.len()
        )));
    }
    let call = Term::App(label.fresh, params.iter().copied().map(Term::Var).collect());
    let reduced = replace_argument(term, label.arg - 1, call);
    let new_eq = Equation {
        var: label.fresh,
        params: params.clone(),
        body: g,
    };
    let mut out = p.clone();
    match label.site {
        Site::Head => out.head = reduced,
        Site::Body(v) => {
            let eq = out.equations.iter_mut().find(|e| e.var == v).unwrap();
            eq.body = reduced;
        }
    }
    out.equations.push(new_eq);
    Ok(out)
}

/// Redex positions: equations in order, arguments left to right, the head last.
pub fn enumerate_redexes(p: &Program) -> Vec<(Site, usize)> {
    let positions = |t: &Term| -> Vec<usize> {
        t.arguments()
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_immediate())
            .map(|(j, _)| j + 1)
            .collect()
    };
    let mut out = Vec::new();
    for eq in &p.equations {
        out.extend(positions(&eq.body).into_iter().map(|j| (Site::Body(eq.var), j)));
    }
    out.extend(positions(&p.head).into_iter().map(|j| (Site::Head, j)));
    out
}

fn label_for(p: &Program, site: Site, arg: usize, index: u32) -> ReductionLabel {
    let (term, params) = match site {
        Site::Head => (&p.head, p.free_vars.len()),
        Site::Body(v) => {
            let eq = p.equation_for(v).unwrap();
            (&eq.body, eq.params.len())
        }
    };
    let sort = term.arguments()[arg - 1].sort();
    ReductionLabel {
        site,
        arg,
        fresh: FnVar::new(index, sort, params as u32),
    }
}

pub fn normalize(p: &Program, strategy: Strategy) -> ReductionTrace {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::First => None,
    };
    let mut next = p.max_fn_index().map_or(0, |m| m + 1);
    let mut steps = Vec::new();
    let mut cur = p.clone();
    loop {
        let redexes = enumerate_redexes(&cur);
        if redexes.is_empty() {
            break;
        }
        let k = rng.as_mut().map_or(0, |r| r.gen_range(0..redexes.len()));
        let (site, arg) = redexes[k];
        let label = label_for(&cur, site, arg, next);
        next += 1;
        cur = step(&cur, label).expect("enumerated redexes reduce");
        steps.push((label, cur.clone()));
    }
    ReductionTrace {
        start: p.clone(),
        steps,
    }
}

/// The canonical form `nf(p)`, meaningful up to congruence.
pub fn canonical_form(p: &Program) -> Program {
    normalize(p, Strategy::First).result().clone()
}
