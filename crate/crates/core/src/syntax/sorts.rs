//! Sort inference by union-find over sort classes.

use std::collections::HashMap;

use super::{FnVar, Sort, Term};

const BOOL: usize = 0;
const IND: usize = 1;

pub(crate) struct Unifier {
    parent: Vec<usize>,
    fns: HashMap<u32, usize>,
}

pub(crate) struct Conflict;

impl Unifier {
    pub fn new() -> Self {
        Unifier {
            parent: vec![BOOL, IND],
            fns: HashMap::new(),
        }
    }

    fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut n: usize) -> usize {
        while self.parent[n] != n {
            self.parent[n] = self.parent[self.parent[n]];
            n = self.parent[n];
        }
        n
    }

    pub fn union(&mut self, a: usize, b: usize) -> Result<(), Conflict> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(());
        }
        if ra <= IND && rb <= IND {
            return Err(Conflict);
        }
        // sort roots stay roots
        if ra <= IND {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        Ok(())
    }

    pub fn sort_node(s: Sort) -> usize {
        match s {
            Sort::Bool => BOOL,
            Sort::Ind => IND,
        }
    }

    /// Node of a function variable, keyed by index; sorts of `FnVar`s are ignored.
    pub fn fn_node(&mut self, index: u32) -> usize {
        if let Some(&n) = self.fns.get(&index) {
            return n;
        }
        let n = self.fresh();
        self.fns.insert(index, n);
        n
    }

    /// Walks a term, returning the node of its sort; `on_conflict` names the subterm at fault.
    pub fn walk<'t>(&mut self, t: &'t Term) -> Result<usize, &'t Term> {
        match t {
            Term::True | Term::False => Ok(BOOL),
            Term::Var(_) => Ok(IND),
            Term::App(p, args) => {
                for a in args {
                    let n = self.walk(a)?;
                    self.union(n, IND).map_err(|_| a)?;
                }
                Ok(self.fn_node(p.index))
            }
            Term::Sym(f, args) => {
                for a in args {
                    let n = self.walk(a)?;
                    self.union(n, IND).map_err(|_| a)?;
                }
                Ok(Self::sort_node(f.sort))
            }
            Term::Cond(c, a, b) => {
                let nc = self.walk(c)?;
                self.union(nc, BOOL).map_err(|_| &**c)?;
                let na = self.walk(a)?;
                let nb = self.walk(b)?;
                self.union(na, nb).map_err(|_| t)?;
                Ok(na)
            }
        }
    }

    /// Resolved sort of a function variable; unconstrained ones default to `Ind`.
    pub fn fn_sort(&mut self, index: u32) -> Sort {
        let n = self.fn_node(index);
        if self.find(n) == BOOL {
            Sort::Bool
        } else {
            Sort::Ind
        }
    }

    pub fn forced_bool(&mut self, p: FnVar) -> bool {
        let n = self.fn_node(p.index);
        self.find(n) == BOOL
    }
}
