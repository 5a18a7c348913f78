//! Validity of irreducible identities: the ten forms, the structure-free cases,
//! bare identities and dictionaries.

mod bare;
mod dictionary;

pub use bare::{bare_normalize, partition_expansion, set_partitions, total_reduce, BareIdentity, Slot};
pub use dictionary::{
    bare_bound, build_dictionary, candidate_bare_identities, parse_dictionary, print_dictionary,
    Dictionary, DictionaryMode, StructureOracle,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::semantics::placed_in;
use crate::syntax::{parse_identity, print_identity, FuncSymbol, IndVar, Signature, Sort, Term, ID, PSI_FALSE, PSI_TRUE};

/// `lhs = rhs` with both sides irreducible and of one sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Result<Identity> {
        for t in [&lhs, &rhs] {
            if !t.is_irreducible() {
                return Err(Error::NotIrreducible(t.to_string()));
            }
        }
        if lhs.check()? != rhs.check()? {
            return Err(Error::SortMismatch(format!(
                "the sides of `{}` differ in sort",
                print_identity(&lhs, &rhs)
            )));
        }
        Ok(Identity { lhs, rhs })
    }

    pub fn parse(text: &str, sig: &Signature) -> Result<Identity> {
        let (l, r) = parse_identity(text, sig)?;
        Identity::new(l, r)
    }

    /// Individual variables of both sides, in order of first occurrence.
    pub fn ind_vars(&self) -> Vec<IndVar> {
        let mut vs = self.lhs.ind_vars();
        for v in self.rhs.ind_vars() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_identity(&self.lhs, &self.rhs))
    }
}

/// The four forms of an irreducible term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Form {
    /// `true`, `false` or an individual variable.
    F1,
    /// Function variable application.
    F2,
    /// Conditional.
    F3,
    /// Primitive application.
    F4,
}

impl Form {
    pub fn of(t: &Term) -> Form {
        match t {
            Term::True | Term::False | Term::Var(_) => Form::F1,
            Term::App(..) => Form::F2,
            Term::Cond(..) => Form::F3,
            Term::Sym(..) => Form::F4,
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self {
            Form::F1 => 1,
            Form::F2 => 2,
            Form::F3 => 3,
            Form::F4 => 4,
        };
        write!(f, "{k}")
    }
}

/// The form pair, smaller form first.
pub fn classify_identity(id: &Identity) -> Result<(Form, Form)> {
    classify(&id.lhs, &id.rhs)
}

fn classify(lhs: &Term, rhs: &Term) -> Result<(Form, Form)> {
    for t in [lhs, rhs] {
        if !t.is_irreducible() {
            return Err(Error::NotIrreducible(t.to_string()));
        }
    }
    let (a, b) = (Form::of(lhs), Form::of(rhs));
    Ok((a.min(b), a.max(b)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
    /// Valid iff this primitive identity is.
    NeedsDictionary(Identity),
}

fn verdict(b: bool) -> Verdict {
    if b {
        Verdict::Valid
    } else {
        Verdict::Invalid
    }
}

fn builtin(name: &str, arity: usize, sort: Sort) -> FuncSymbol {
    FuncSymbol::new(name, arity, sort)
}

/// Decides every form pair except (4-4) and the primitive cases that reduce to it.
pub fn decide_structure_free(id: &Identity) -> Result<Verdict> {
    structure_free(&id.lhs, &id.rhs)
}

fn structure_free(lhs: &Term, rhs: &Term) -> Result<Verdict> {
    classify(lhs, rhs)?;
    let (a, b) = if Form::of(lhs) <= Form::of(rhs) {
        (lhs, rhs)
    } else {
        (rhs, lhs)
    };
    use Form::*;
    Ok(match (Form::of(a), Form::of(b)) {
        (F1, F1) | (F2, F2) | (F3, F3) => verdict(a == b),
        (F1, F2) | (F1, F3) | (F3, F4) => Verdict::Invalid,
        (F2, F3) => {
            let Term::Cond(w1, w2, w3) = b else { unreachable!() };
            verdict(a == &**w1 && a == &**w2 && a == &**w3)
        }
        (F1, F4) | (F2, F4) => match a {
            Term::True => Verdict::NeedsDictionary(Identity {
                lhs: b.clone(),
                rhs: Term::Sym(builtin(PSI_TRUE, 0, Sort::Bool), vec![]),
            }),
            Term::False => Verdict::NeedsDictionary(Identity {
                lhs: b.clone(),
                rhs: Term::Sym(builtin(PSI_FALSE, 0, Sort::Bool), vec![]),
            }),
            w => {
                let Term::Sym(_, zs) = b else { unreachable!() };
                if zs.contains(w) {
                    Verdict::NeedsDictionary(Identity {
                        lhs: b.clone(),
                        rhs: Term::Sym(builtin(ID, 1, Sort::Ind), vec![w.clone()]),
                    })
                } else {
                    Verdict::Invalid
                }
            }
        },
        (F4, F4) => Verdict::NeedsDictionary(Identity {
            lhs: lhs.clone(),
            rhs: rhs.clone(),
        }),
        _ => unreachable!("pairs are ordered"),
    })
}

/// Individual variables occurring directly as arguments of a primitive side.
pub fn placed_variables(id: &Identity) -> Vec<IndVar> {
    placed_in(&id.lhs, &id.rhs)
}

/// What a `NEEDS_DICTIONARY` residue is decided against.
pub enum Oracle<'a> {
    /// The generic infinite structure: primitive identities hold only when syntactically identical.
    Free,
    Dictionary(&'a Dictionary),
    /// A finite structure whose dictionary entries are computed on demand.
    Structure(&'a StructureOracle<'a>),
}

impl Oracle<'_> {
    fn mode(&self) -> Option<DictionaryMode> {
        match self {
            Oracle::Free => None,
            Oracle::Dictionary(d) => Some(d.mode),
            Oracle::Structure(s) => Some(s.mode()),
        }
    }

    fn contains(&self, b: &BareIdentity) -> Result<bool> {
        match self {
            Oracle::Free => Ok(b.is_trivial()),
            Oracle::Dictionary(d) => Ok(d.entries.contains(b)),
            Oracle::Structure(s) => s.contains(b),
        }
    }
}

pub fn decide_identity(oracle: &Oracle, id: &Identity) -> Result<bool> {
    decide_terms(oracle, &id.lhs, &id.rhs)
}

pub(crate) fn decide_terms(oracle: &Oracle, lhs: &Term, rhs: &Term) -> Result<bool> {
    let residue = match structure_free(lhs, rhs)? {
        Verdict::Valid => return Ok(true),
        Verdict::Invalid => return Ok(false),
        Verdict::NeedsDictionary(r) => r,
    };
    match oracle.mode() {
        None => Ok(residue.lhs == residue.rhs),
        Some(DictionaryMode::TotalIndividual) => match total_reduce(&residue)? {
            Some(b) => oracle.contains(&b),
            None => Ok(false),
        },
        Some(DictionaryMode::GeneralInjective) => {
            for b in partition_expansion(&residue)? {
                if !oracle.contains(&b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
