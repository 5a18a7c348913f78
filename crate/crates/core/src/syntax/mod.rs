//! Terms, extended programs and their syntactic classification.

mod parse;
mod print;
mod sorts;

pub use parse::{parse_identity, parse_program, parse_term};
pub use print::{print_identity, print_program, print_term};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Ind,
    Bool,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Ind => "ind",
            Sort::Bool => "bool",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncSymbol {
    pub name: Arc<str>,
    pub arity: usize,
    pub sort: Sort,
}

impl FuncSymbol {
    pub fn new(name: &str, arity: usize, sort: Sort) -> Self {
        FuncSymbol {
            name: Arc::from(name),
            arity,
            sort,
        }
    }
}

pub const PSI_TRUE: &str = "psi_true";
pub const PSI_FALSE: &str = "psi_false";
pub const ID: &str = "id";

const KEYWORDS: [&str; 6] = ["true", "false", "if", "then", "else", "where"];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Names the printer uses for variables (`v3`, `p12`).
pub(crate) fn is_variable_spelling(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('v' | 'p'))
        && s.len() > 1
        && chars.all(|c| c.is_ascii_digit())
}

/// A signature. The builtins `psi_true`, `psi_false` and `id` are always present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<FuncSymbol>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    pub fn new() -> Self {
        Signature {
            symbols: vec![
                FuncSymbol::new(PSI_TRUE, 0, Sort::Bool),
                FuncSymbol::new(PSI_FALSE, 0, Sort::Bool),
                FuncSymbol::new(ID, 1, Sort::Ind),
            ],
        }
    }

    pub fn with_symbols<I: IntoIterator<Item = FuncSymbol>>(symbols: I) -> Result<Self> {
        let mut sig = Signature::new();
        for s in symbols {
            sig.add(s)?;
        }
        Ok(sig)
    }

    pub fn add(&mut self, sym: FuncSymbol) -> Result<()> {
        let name = &*sym.name;
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || is_keyword(name) || is_variable_spelling(name) {
            return Err(Error::InvalidProgram(format!(
                "`{name}` cannot be used as a symbol name"
            )));
        }
        if self.get(name).is_some() {
            return Err(Error::DuplicateDefinition(name.to_string()));
        }
        self.symbols.push(sym);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&FuncSymbol> {
        self.symbols.iter().find(|s| &*s.name == name)
    }

    /// All symbols, builtins first, then in declaration order.
    pub fn symbols(&self) -> &[FuncSymbol] {
        &self.symbols
    }

    pub fn user_symbols(&self) -> &[FuncSymbol] {
        &self.symbols[3..]
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    pub fn psi_true(&self) -> &FuncSymbol {
        &self.symbols[0]
    }

    pub fn psi_false(&self) -> &FuncSymbol {
        &self.symbols[1]
    }

    pub fn id(&self) -> &FuncSymbol {
        &self.symbols[2]
    }
}

pub fn is_builtin(sym: &FuncSymbol) -> bool {
    matches!(&*sym.name, PSI_TRUE | PSI_FALSE | ID)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndVar(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnVar {
    pub index: u32,
    pub sort: Sort,
    pub arity: u32,
}

impl FnVar {
    pub fn new(index: u32, sort: Sort, arity: u32) -> Self {
        FnVar { index, sort, arity }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    Ind(IndVar),
    Fn(FnVar),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    True,
    False,
    Var(IndVar),
    App(FnVar, Vec<Term>),
    Sym(FuncSymbol, Vec<Term>),
    Cond(Box<Term>, Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermClass {
    Immediate,
    IrreducibleOnly,
    Reducible,
}

impl Term {
    pub fn var(i: u32) -> Term {
        Term::Var(IndVar(i))
    }

    pub fn cond(test: Term, then: Term, otherwise: Term) -> Term {
        Term::Cond(Box::new(test), Box::new(then), Box::new(otherwise))
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::True | Term::False => Sort::Bool,
            Term::Var(_) => Sort::Ind,
            Term::App(p, _) => p.sort,
            Term::Sym(f, _) => f.sort,
            Term::Cond(_, a, _) => a.sort(),
        }
    }

    /// Checks arities and sorts, returning the sort of the term.
    pub fn check(&self) -> Result<Sort> {
        let check_args = |name: String, arity: usize, args: &[Term]| -> Result<()> {
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    name,
                    expected: arity,
                    found: args.len(),
                });
            }
            for a in args {
                if a.check()? != Sort::Ind {
                    return Err(Error::SortMismatch(format!(
                        "boolean argument `{}` of `{name}`",
                        print_term(a)
                    )));
                }
            }
            Ok(())
        };
        match self {
            Term::True | Term::False => Ok(Sort::Bool),
            Term::Var(_) => Ok(Sort::Ind),
            Term::App(p, args) => {
                check_args(format!("p{}", p.index), p.arity as usize, args)?;
                Ok(p.sort)
            }
            Term::Sym(f, args) => {
                check_args(f.name.to_string(), f.arity, args)?;
                Ok(f.sort)
            }
            Term::Cond(t, a, b) => {
                if t.check()? != Sort::Bool {
                    return Err(Error::SortMismatch(format!(
                        "test `{}` is not boolean",
                        print_term(t)
                    )));
                }
                let (sa, sb) = (a.check()?, b.check()?);
                if sa != sb {
                    return Err(Error::SortMismatch(format!(
                        "branches of `{}` differ in sort",
                        print_term(self)
                    )));
                }
                Ok(sa)
            }
        }
    }

    pub fn is_immediate(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::App(_, args) => args.iter().all(|a| matches!(a, Term::Var(_))),
            _ => false,
        }
    }

    pub fn classify(&self) -> TermClass {
        if self.is_immediate() {
            return TermClass::Immediate;
        }
        let irreducible = match self {
            Term::True | Term::False => true,
            Term::App(_, args) | Term::Sym(_, args) => args.iter().all(Term::is_immediate),
            Term::Cond(t, a, b) => t.is_immediate() && a.is_immediate() && b.is_immediate(),
            Term::Var(_) => unreachable!(),
        };
        if irreducible {
            TermClass::IrreducibleOnly
        } else {
            TermClass::Reducible
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.classify() != TermClass::Reducible
    }

    /// Immediate subterms directly below the root, as the reduction calculus sees them.
    pub fn arguments(&self) -> Vec<&Term> {
        match self {
            Term::App(_, args) | Term::Sym(_, args) => args.iter().collect(),
            Term::Cond(t, a, b) => vec![t, a, b],
            _ => Vec::new(),
        }
    }

    pub fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::App(_, args) | Term::Sym(_, args) => args.iter().for_each(|a| a.visit(f)),
            Term::Cond(t, a, b) => {
                t.visit(f);
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Individual variables in order of first occurrence.
    pub fn ind_vars(&self) -> Vec<IndVar> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
        });
        out
    }

    /// Function variables in order of first occurrence.
    pub fn fn_vars(&self) -> Vec<FnVar> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let Term::App(p, _) = t {
                if !out.contains(p) {
                    out.push(*p);
                }
            }
        });
        out
    }

    pub fn symbols(&self) -> Vec<FuncSymbol> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let Term::Sym(f, _) = t {
                if !out.contains(f) {
                    out.push(f.clone());
                }
            }
        });
        out
    }

    /// Simultaneous renaming through two total functions.
    pub fn map_vars(&self, fv: &impl Fn(FnVar) -> FnVar, iv: &impl Fn(IndVar) -> IndVar) -> Term {
        match self {
            Term::True => Term::True,
            Term::False => Term::False,
            Term::Var(v) => Term::Var(iv(*v)),
            Term::App(p, args) => Term::App(fv(*p), args.iter().map(|a| a.map_vars(fv, iv)).collect()),
            Term::Sym(f, args) => {
                Term::Sym(f.clone(), args.iter().map(|a| a.map_vars(fv, iv)).collect())
            }
            Term::Cond(t, a, b) => Term::cond(
                t.map_vars(fv, iv),
                a.map_vars(fv, iv),
                b.map_vars(fv, iv),
            ),
        }
    }

    /// Simultaneous replacement; unmapped variables are kept.
    pub fn substitute(
        &self,
        fn_map: &HashMap<FnVar, FnVar>,
        ind_map: &HashMap<IndVar, IndVar>,
    ) -> Result<Term> {
        for (k, v) in fn_map {
            if k.sort != v.sort || k.arity != v.arity {
                let msg = format!("p{} cannot be replaced by p{}", k.index, v.index);
                return Err(if k.sort != v.sort {
                    Error::SortMismatch(msg)
                } else {
                    Error::ArityMismatch {
                        name: format!("p{}", v.index),
                        expected: k.arity as usize,
                        found: v.arity as usize,
                    }
                });
            }
        }
        Ok(self.map_vars(
            &|p| *fn_map.get(&p).unwrap_or(&p),
            &|v| *ind_map.get(&v).unwrap_or(&v),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equation {
    pub var: FnVar,
    pub params: Vec<IndVar>,
    pub body: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    pub head: Term,
    pub free_vars: Vec<IndVar>,
    pub equations: Vec<Equation>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    Head(Term),
    Equation(Equation),
}

pub type SetRepresentation = BTreeSet<Part>;

fn distinct<T: PartialEq>(xs: &[T]) -> bool {
    xs.iter().enumerate().all(|(i, x)| !xs[..i].contains(x))
}

impl Program {
    pub fn new(head: Term, free_vars: Vec<IndVar>, equations: Vec<Equation>) -> Result<Program> {
        let p = Program {
            head,
            free_vars,
            equations,
        };
        p.validate()?;
        Ok(p)
    }

    /// An empty-body program.
    pub fn explicit(head: Term, free_vars: Vec<IndVar>) -> Result<Program> {
        Program::new(head, free_vars, Vec::new())
    }

    pub fn validate(&self) -> Result<()> {
        self.head.check()?;
        if !distinct(&self.free_vars) {
            return Err(Error::InvalidProgram("repeated free variable".into()));
        }
        for v in self.head.ind_vars() {
            if !self.free_vars.contains(&v) {
                return Err(Error::UnboundVariable(format!("v{}", v.0)));
            }
        }
        let mut defined: HashMap<u32, FnVar> = HashMap::new();
        for eq in &self.equations {
            if defined.insert(eq.var.index, eq.var).is_some() {
                return Err(Error::DuplicateDefinition(format!("p{}", eq.var.index)));
            }
            if eq.var.arity as usize != eq.params.len() {
                return Err(Error::ArityMismatch {
                    name: format!("p{}", eq.var.index),
                    expected: eq.var.arity as usize,
                    found: eq.params.len(),
                });
            }
            if !distinct(&eq.params) {
                return Err(Error::InvalidProgram(format!(
                    "repeated parameter in the equation for p{}",
                    eq.var.index
                )));
            }
            if eq.body.check()? != eq.var.sort {
                return Err(Error::SortMismatch(format!(
                    "p{} has sort {} but its body does not",
                    eq.var.index, eq.var.sort
                )));
            }
            for v in eq.body.ind_vars() {
                if !eq.params.contains(&v) {
                    return Err(Error::UnboundVariable(format!("v{}", v.0)));
                }
            }
        }
        for part in self.parts() {
            for p in part.fn_vars() {
                match defined.get(&p.index) {
                    None => return Err(Error::FreeFunctionVariable(format!("p{}", p.index))),
                    Some(d) if *d != p => {
                        return Err(Error::InvalidProgram(format!(
                            "p{} is used with two different sorts or arities",
                            p.index
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Head followed by the equation bodies.
    pub fn parts(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.head).chain(self.equations.iter().map(|e| &e.body))
    }

    pub fn part_count(&self) -> usize {
        self.equations.len() + 1
    }

    pub fn sort(&self) -> Sort {
        self.head.sort()
    }

    pub fn equation_for(&self, p: FnVar) -> Option<&Equation> {
        self.equations.iter().find(|e| e.var == p)
    }

    pub fn max_fn_index(&self) -> Option<u32> {
        self.equations.iter().map(|e| e.var.index).max()
    }

    pub fn is_irreducible(&self) -> bool {
        self.parts().all(Term::is_irreducible)
    }

    pub fn is_proper(&self) -> Result<bool> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible(print_program(self)));
        }
        Ok(!self
            .parts()
            .any(|t| t.is_immediate() && t.sort() == Sort::Bool))
    }

    pub fn is_propositional(&self) -> bool {
        fn prop(t: &Term) -> bool {
            match t {
                Term::True | Term::False => true,
                Term::App(p, args) => p.sort == Sort::Bool && args.is_empty(),
                Term::Cond(a, b, c) => prop(a) && prop(b) && prop(c),
                _ => false,
            }
        }
        self.free_vars.is_empty()
            && self.equations.iter().all(|e| e.params.is_empty())
            && self.parts().all(prop)
    }

    pub fn set_representation(&self) -> SetRepresentation {
        std::iter::once(Part::Head(self.head.clone()))
            .chain(self.equations.iter().cloned().map(Part::Equation))
            .collect()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_program(self))
    }
}
