//! Dictionaries: the bare identities a structure satisfies.
//!
//! ```text
//! dictionary nat3 injective
//! inj: succ(v0) = succ(v0)
//! inj: succ(p0()) = succ(p0())
//! ```

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use log::warn;

use super::{set_partitions, BareIdentity, Identity, Slot};
use crate::error::{Error, Result};
use crate::semantics::{find_countermodel, placed_in, satisfies, FiniteStructure, Guard};
use crate::syntax::{parse_identity, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DictionaryMode {
    /// Individual bare identities valid in a total structure.
    TotalIndividual,
    /// Bare identities valid under injective assignments.
    GeneralInjective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    pub structure_name: String,
    pub mode: DictionaryMode,
    pub entries: BTreeSet<BareIdentity>,
}

/// Every bare identity over the signature in the given mode, builtins included.
pub fn candidate_bare_identities(sig: &Signature, mode: DictionaryMode) -> Vec<BareIdentity> {
    let mut out = Vec::new();
    for f in sig.symbols() {
        for g in sig.symbols().iter().filter(|g| g.sort == f.sort) {
            for blocks in set_partitions(f.arity + g.arity) {
                let k = blocks.iter().max().map_or(0, |m| m + 1);
                let colorings: u32 = match mode {
                    DictionaryMode::TotalIndividual => 1,
                    DictionaryMode::GeneralInjective => 1 << k,
                };
                for mask in 0..colorings {
                    let mut names = Vec::with_capacity(k);
                    let (mut ni, mut nf) = (0, 0);
                    for b in 0..k {
                        if mask >> b & 1 == 0 {
                            names.push(Slot::Ind(ni));
                            ni += 1;
                        } else {
                            names.push(Slot::Fn(nf));
                            nf += 1;
                        }
                    }
                    out.push(BareIdentity {
                        lhs: f.clone(),
                        rhs: g.clone(),
                        slots: blocks.iter().map(|&b| names[b]).collect(),
                    });
                }
            }
        }
    }
    out
}

/// `2^(2 arity(Φ)) |Φ|²`, counting the builtins in `Φ`.
pub fn bare_bound(sig: &Signature) -> u128 {
    let n = sig.symbols().len() as u128;
    (1u128 << (2 * sig.max_arity())) * n * n
}

/// Validity of one entry; the flag reports vacuous injective validity.
fn check(a: &FiniteStructure, b: &BareIdentity, mode: DictionaryMode, guard: Guard) -> Result<(bool, bool)> {
    let (l, r) = b.to_terms();
    match mode {
        DictionaryMode::TotalIndividual => Ok((satisfies(a, &l, &r, guard)?, false)),
        DictionaryMode::GeneralInjective => {
            let vacuous = a.carrier() < placed_in(&l, &r).len();
            Ok((find_countermodel(a, &l, &r, true, guard)?.is_none(), vacuous))
        }
    }
}

fn mode_of(a: &FiniteStructure) -> DictionaryMode {
    if a.is_total() {
        DictionaryMode::TotalIndividual
    } else {
        DictionaryMode::GeneralInjective
    }
}

pub fn build_dictionary(a: &FiniteStructure, guard: Guard) -> Result<Dictionary> {
    if a.carrier() > guard.max_carrier {
        return Err(Error::CarrierTooLargeForEnumeration {
            bound: guard.max_carrier as u64,
        });
    }
    let mode = mode_of(a);
    let mut entries = BTreeSet::new();
    let mut vacuous = 0;
    for b in candidate_bare_identities(a.signature(), mode) {
        let (holds, vac) = check(a, &b, mode, guard)?;
        if holds {
            vacuous += usize::from(vac);
            entries.insert(b);
        }
    }
    if vacuous > 0 {
        warn!(
            "{vacuous} entries of the dictionary of `{}` hold vacuously: they place more variables than its {} elements",
            a.name,
            a.carrier()
        );
    }
    Ok(Dictionary {
        structure_name: a.name.clone(),
        mode,
        entries,
    })
}

/// Dictionary membership on a finite structure, computed on demand and memoized.
pub struct StructureOracle<'a> {
    structure: &'a FiniteStructure,
    guard: Guard,
    mode: DictionaryMode,
    memo: RefCell<HashMap<BareIdentity, bool>>,
}

impl<'a> StructureOracle<'a> {
    /// Individual mode for total structures, injective mode otherwise.
    pub fn new(a: &'a FiniteStructure, guard: Guard) -> Self {
        Self::with_mode(a, guard, mode_of(a))
    }

    pub fn with_mode(a: &'a FiniteStructure, guard: Guard, mode: DictionaryMode) -> Self {
        StructureOracle {
            structure: a,
            guard,
            mode,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn mode(&self) -> DictionaryMode {
        self.mode
    }

    pub fn structure(&self) -> &FiniteStructure {
        self.structure
    }

    pub fn contains(&self, b: &BareIdentity) -> Result<bool> {
        if let Some(&v) = self.memo.borrow().get(b) {
            return Ok(v);
        }
        let (holds, vacuous) = check(self.structure, b, self.mode, self.guard)?;
        if vacuous {
            warn!("`{b}` holds vacuously on `{}`", self.structure.name);
        }
        self.memo.borrow_mut().insert(b.clone(), holds);
        Ok(holds)
    }
}

fn mode_name(m: DictionaryMode) -> (&'static str, &'static str) {
    match m {
        DictionaryMode::TotalIndividual => ("individual", "ind"),
        DictionaryMode::GeneralInjective => ("injective", "inj"),
    }
}

pub fn print_dictionary(d: &Dictionary) -> String {
    let (name, tag) = mode_name(d.mode);
    let mut out = format!("dictionary {} {name}\n", d.structure_name);
    for b in &d.entries {
        writeln!(out, "{tag}: {b}").unwrap();
    }
    out
}

/// Parses a dictionary file; the signature supplies the primitives.
pub fn parse_dictionary(text: &str, sig: &Signature) -> Result<Dictionary> {
    let fail = |line, msg: String| Error::Format { line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (name, mode) = match lines.next().map(|(n, l)| (n, l.split_whitespace().collect::<Vec<_>>())) {
        Some((_, w)) if w.len() == 3 && w[0] == "dictionary" => {
            let mode = match w[2] {
                "individual" => DictionaryMode::TotalIndividual,
                "injective" => DictionaryMode::GeneralInjective,
                m => return Err(fail(1, format!("unknown dictionary mode `{m}`"))),
            };
            (w[1].to_string(), mode)
        }
        Some((n, _)) => return Err(fail(n, "expected `dictionary <name> individual|injective`".into())),
        None => return Err(fail(1, "empty dictionary file".into())),
    };
    let tag = mode_name(mode).1;
    let mut entries = BTreeSet::new();
    for (n, l) in lines {
        let Some(body) = l.strip_prefix(tag).and_then(|r| r.strip_prefix(':')) else {
            return Err(fail(n, format!("expected an entry starting with `{tag}:`")));
        };
        let parsed = parse_identity(body, sig).and_then(|(lhs, rhs)| {
            let b = BareIdentity::from_identity(&Identity { lhs, rhs })?;
            if mode == DictionaryMode::TotalIndividual && !b.is_individual() {
                return Err(Error::InvalidProgram(format!("`{b}` is not an individual bare identity")));
            }
            Ok(b)
        });
        match parsed {
            Ok(b) => {
                entries.insert(b);
            }
            Err(e) => return Err(fail(n, e.root().to_string())),
        }
    }
    Ok(Dictionary {
        structure_name: name,
        mode,
        entries,
    })
}
