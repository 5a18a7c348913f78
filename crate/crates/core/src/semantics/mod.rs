//! Finite partial structures, denotations and least-fixed-point program semantics.

mod enumerate;
mod format;
mod machine;
mod program;

pub(crate) use enumerate::placed_in;
pub use enumerate::{find_countermodel, satisfies, satisfies_injective, Guard, Satisfaction};
pub use format::{parse_signature, parse_structure, print_structure};
pub use machine::{iterator_program, iterator_signature, iterator_structure, run_iterator, Machine};
pub use program::{denote_program, kleene_stages, FnTables};

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{is_builtin, FnVar, FuncSymbol, IndVar, Signature, Sort, Term, ID, PSI_FALSE, PSI_TRUE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Ind(usize),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Ind(a) => write!(f, "{a}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// `None` is divergence.
pub type PartialValue = Option<Value>;

pub fn show(v: PartialValue) -> String {
    v.map_or_else(|| "diverges".to_string(), |v| v.to_string())
}

/// Largest table a structure or a recursion table may allocate.
const MAX_TABLE: usize = 1 << 22;

pub(crate) fn table_len(carrier: usize, arity: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..arity {
        n = n
            .checked_mul(carrier)
            .filter(|&n| n <= MAX_TABLE)
            .ok_or(Error::CarrierTooLargeForEnumeration {
                bound: MAX_TABLE as u64,
            })?;
    }
    Ok(n)
}

pub(crate) fn tuple_index(carrier: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * carrier + a)
}

pub(crate) fn tuple_at(carrier: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % carrier;
        index /= carrier;
    }
    out
}

/// A structure on the carrier `0..carrier` with partial tables for each user symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteStructure {
    pub name: String,
    carrier: usize,
    sig: Signature,
    tables: Vec<Vec<PartialValue>>,
    total: bool,
}

impl FiniteStructure {
    /// Everywhere-divergent structure; fill it with `set`.
    pub fn new(name: &str, carrier: usize, sig: Signature, total: bool) -> Result<Self> {
        let tables = sig
            .user_symbols()
            .iter()
            .map(|f| table_len(carrier, f.arity).map(|n| vec![None; n]))
            .collect::<Result<_>>()?;
        Ok(FiniteStructure {
            name: name.to_string(),
            carrier,
            sig,
            tables,
            total,
        })
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn is_total(&self) -> bool {
        self.total
    }

    fn slot(&self, name: &str) -> Option<usize> {
        self.sig.user_symbols().iter().position(|f| &*f.name == name)
    }

    pub fn set(&mut self, name: &str, args: &[usize], value: Value) -> Result<()> {
        let k = self.slot(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let f = &self.sig.user_symbols()[k];
        if args.len() != f.arity {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                expected: f.arity,
                found: args.len(),
            });
        }
        let ok = match value {
            Value::Ind(a) => f.sort == Sort::Ind && a < self.carrier,
            Value::Bool(_) => f.sort == Sort::Bool,
        };
        if !ok || args.iter().any(|&a| a >= self.carrier) {
            return Err(Error::SortMismatch(format!(
                "value {value} for `{name}` is out of range or of the wrong sort"
            )));
        }
        let i = tuple_index(self.carrier, args);
        self.tables[k][i] = Some(value);
        Ok(())
    }

    /// Entries of one user symbol, in tuple order.
    pub fn entries(&self, name: &str) -> Vec<(Vec<usize>, Value)> {
        let Some(k) = self.slot(name) else {
            return Vec::new();
        };
        let arity = self.sig.user_symbols()[k].arity;
        self.tables[k]
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (tuple_at(self.carrier, arity, i), v)))
            .collect()
    }

    /// Checks the totality flag against the tables.
    pub fn validate(&self) -> Result<()> {
        if self.total {
            for (f, t) in self.sig.user_symbols().iter().zip(&self.tables) {
                if t.iter().any(Option::is_none) {
                    return Err(Error::InvalidProgram(format!(
                        "structure `{}` is declared total but `{}` is partial",
                        self.name, f.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, f: &FuncSymbol, args: &[usize]) -> Result<PartialValue> {
        if is_builtin(f) {
            return Ok(match &*f.name {
                PSI_TRUE => Some(Value::Bool(true)),
                PSI_FALSE => Some(Value::Bool(false)),
                ID => Some(Value::Ind(args[0])),
                _ => unreachable!(),
            });
        }
        match self.slot(&f.name) {
            Some(k) if self.sig.user_symbols()[k] == *f => {
                Ok(self.tables[k][tuple_index(self.carrier, args)])
            }
            _ => Err(Error::UnknownSymbol(f.name.to_string())),
        }
    }
}

/// Partial function tables keyed by argument tuple.
pub type FnTable = HashMap<Vec<usize>, Value>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub ind: HashMap<IndVar, usize>,
    pub fns: HashMap<FnVar, FnTable>,
}

pub(crate) trait Env {
    fn ind(&self, v: IndVar) -> Result<usize>;
    fn call(&mut self, p: FnVar, args: &[usize]) -> Result<PartialValue>;
}

impl Env for &Assignment {
    fn ind(&self, v: IndVar) -> Result<usize> {
        self.ind
            .get(&v)
            .copied()
            .ok_or_else(|| Error::UnboundVariable(format!("v{}", v.0)))
    }

    fn call(&mut self, p: FnVar, args: &[usize]) -> Result<PartialValue> {
        let table = self
            .fns
            .get(&p)
            .ok_or_else(|| Error::UnboundVariable(format!("p{}", p.index)))?;
        Ok(table.get(args).copied())
    }
}

fn eval_args<E: Env>(a: &FiniteStructure, env: &mut E, args: &[Term]) -> Result<Option<Vec<usize>>> {
    let mut vals = Vec::with_capacity(args.len());
    for t in args {
        match eval(a, env, t)? {
            Some(Value::Ind(x)) => vals.push(x),
            Some(Value::Bool(_)) => {
                return Err(Error::SortMismatch(format!("boolean argument `{t}`")))
            }
            None => return Ok(None),
        }
    }
    Ok(Some(vals))
}

pub(crate) fn eval<E: Env>(a: &FiniteStructure, env: &mut E, t: &Term) -> Result<PartialValue> {
    match t {
        Term::True => Ok(Some(Value::Bool(true))),
        Term::False => Ok(Some(Value::Bool(false))),
        Term::Var(v) => Ok(Some(Value::Ind(env.ind(*v)?))),
        Term::App(p, args) => match eval_args(a, env, args)? {
            Some(vals) => env.call(*p, &vals),
            None => Ok(None),
        },
        Term::Sym(f, args) => match eval_args(a, env, args)? {
            Some(vals) => a.apply(f, &vals),
            None => Ok(None),
        },
        Term::Cond(c, x, y) => match eval(a, env, c)? {
            Some(Value::Bool(true)) => eval(a, env, x),
            Some(Value::Bool(false)) => eval(a, env, y),
            Some(Value::Ind(_)) => Err(Error::SortMismatch(format!("test `{c}` is not boolean"))),
            None => Ok(None),
        },
    }
}

pub fn denote_term(a: &FiniteStructure, sigma: &Assignment, t: &Term) -> Result<PartialValue> {
    eval(a, &mut &*sigma, t)
}
