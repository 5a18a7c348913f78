//! Intensions and intensional equivalence on a structure.

use crate::congruence::{congruent, globally_equivalent};
use crate::error::Result;
use crate::identities::{decide_terms, Oracle};
use crate::matcher::{find_correspondence, same_type, PartCheck};
use crate::reduction::canonical_form;
use crate::syntax::{Program, Term};

/// A program's intension, represented by its canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intension {
    /// Structure name, or `FREE`.
    pub structure: String,
    pub canonical: Program,
}

impl Oracle<'_> {
    pub fn structure_name(&self) -> &str {
        match self {
            Oracle::Free => "FREE",
            Oracle::Dictionary(d) => &d.structure_name,
            Oracle::Structure(s) => &s.structure().name,
        }
    }
}

pub fn intension(oracle: &Oracle, p: &Program) -> Intension {
    Intension {
        structure: oracle.structure_name().to_string(),
        canonical: canonical_form(p),
    }
}

struct IdentityCheck<'o, 'a> {
    oracle: &'o Oracle<'a>,
}

impl PartCheck for IdentityCheck<'_, '_> {
    fn candidates(&mut self, e: &Program, f: &Program, j: usize) -> Vec<usize> {
        same_type(e, f, j)
    }

    fn check(&mut self, _: usize, e_term: &Term, renamed: &Term) -> Result<bool> {
        decide_terms(self.oracle, e_term, renamed)
    }
}

/// Like [`intensionally_equivalent`] for programs already in canonical form.
pub fn equivalent_irreducible(oracle: &Oracle, e: &Program, f: &Program) -> Result<Option<Vec<usize>>> {
    if e.free_vars != f.free_vars || e.sort() != f.sort() || e.part_count() != f.part_count() {
        return Ok(None);
    }
    let Some(corr) = find_correspondence(e, f, IdentityCheck { oracle })? else {
        return Ok(None);
    };
    let mut pi = vec![0; e.part_count()];
    for (j, &i) in corr.e_of.iter().enumerate() {
        pi[i + 1] = j + 1;
    }
    Ok(Some(pi))
}

/// A part permutation `π` with `π[0] = 0` under which part `i` of `nf(e)` and part
/// `π[i]` of `nf(f)` define the same function on the structure.
pub fn intensionally_equivalent(oracle: &Oracle, e: &Program, f: &Program) -> Result<Option<Vec<usize>>> {
    equivalent_irreducible(oracle, &canonical_form(e), &canonical_form(f))
}

/// Cross-checks the deciders on one pair: congruent canonical forms are equivalent
/// under every oracle given and in `FREE` mode, and `FREE` equivalence of proper
/// canonical forms implies global equivalence.
pub fn equality_search_consistency(oracles: &[Oracle], e: &Program, f: &Program) -> Result<bool> {
    let (ce, cf) = (canonical_form(e), canonical_form(f));
    let free = equivalent_irreducible(&Oracle::Free, &ce, &cf)?.is_some();
    if congruent(&ce, &cf).is_some() {
        if !free {
            return Ok(false);
        }
        for o in oracles {
            if equivalent_irreducible(o, &ce, &cf)?.is_none() {
                return Ok(false);
            }
        }
    }
    if free && ce.is_proper()? && cf.is_proper()? && !globally_equivalent(e, f) {
        return Ok(false);
    }
    Ok(true)
}
