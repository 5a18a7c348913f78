use std::collections::HashMap;
use std::fmt;

use super::Identity;
use crate::error::{Error, Result};
use crate::semantics::placed_in;
use crate::syntax::{print_identity, FnVar, FuncSymbol, IndVar, Sort, Term};

/// One argument of a bare identity: `v<k>` or the nullary `p<k>()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Ind(u32),
    Fn(u32),
}

impl Slot {
    fn term(self) -> Term {
        match self {
            Slot::Ind(k) => Term::var(k),
            Slot::Fn(k) => Term::App(FnVar::new(k, Sort::Ind, 0), vec![]),
        }
    }
}

/// `lhs(x1, ..., xk) = rhs(x(k+1), ..., xl)` with each `xi` a slot, named
/// in order of first appearance within each kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BareIdentity {
    pub lhs: FuncSymbol,
    pub rhs: FuncSymbol,
    pub slots: Vec<Slot>,
}

impl BareIdentity {
    pub fn lhs_slots(&self) -> &[Slot] {
        &self.slots[..self.lhs.arity]
    }

    pub fn rhs_slots(&self) -> &[Slot] {
        &self.slots[self.lhs.arity..]
    }

    pub fn is_individual(&self) -> bool {
        self.slots.iter().all(|s| matches!(s, Slot::Ind(_)))
    }

    /// Both sides syntactically identical.
    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs && self.lhs_slots() == self.rhs_slots()
    }

    pub fn to_terms(&self) -> (Term, Term) {
        let side = |f: &FuncSymbol, s: &[Slot]| Term::Sym(f.clone(), s.iter().map(|x| x.term()).collect());
        (side(&self.lhs, self.lhs_slots()), side(&self.rhs, self.rhs_slots()))
    }

    pub fn to_identity(&self) -> Identity {
        let (lhs, rhs) = self.to_terms();
        Identity { lhs, rhs }
    }

    /// Reads back a bare identity from its term form, rejecting non-canonical names.
    pub fn from_identity(id: &Identity) -> Result<BareIdentity> {
        let not_bare = || Error::InvalidProgram(format!("`{id}` is not a bare identity"));
        let (Term::Sym(_, l), Term::Sym(_, r)) = (&id.lhs, &id.rhs) else {
            return Err(not_bare());
        };
        let ok = l.iter().chain(r).all(|z| match z {
            Term::Var(_) => true,
            Term::App(p, args) => args.is_empty() && p.sort == Sort::Ind,
            _ => false,
        });
        if !ok {
            return Err(not_bare());
        }
        let (b, _) = bare_normalize(id)?;
        if b.to_identity() != *id {
            return Err(not_bare());
        }
        Ok(b)
    }
}

impl fmt::Display for BareIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = self.to_terms();
        f.write_str(&print_identity(&l, &r))
    }
}

fn sides(id: &Identity) -> Result<(&FuncSymbol, &FuncSymbol, Vec<&Term>)> {
    match (&id.lhs, &id.rhs) {
        (Term::Sym(f, l), Term::Sym(g, r)) if id.lhs.is_irreducible() && id.rhs.is_irreducible() => {
            Ok((f, g, l.iter().chain(r).collect()))
        }
        _ => Err(Error::NotForm44(id.to_string())),
    }
}

/// Slots mirroring the identity pattern of `zs`; `individual` forces every slot to `v<k>`.
fn pattern<'t>(zs: &[&'t Term], individual: bool) -> (Vec<Slot>, Vec<(Slot, &'t Term)>) {
    let mut seen: Vec<(Slot, &Term)> = Vec::new();
    let (mut ni, mut nf) = (0, 0);
    let slots = zs
        .iter()
        .map(|&z| {
            if let Some((s, _)) = seen.iter().find(|(_, t)| *t == z) {
                return *s;
            }
            let s = if individual || matches!(z, Term::Var(_)) {
                ni += 1;
                Slot::Ind(ni - 1)
            } else {
                nf += 1;
                Slot::Fn(nf - 1)
            };
            seen.push((s, z));
            s
        })
        .collect();
    (slots, seen)
}

/// The bare identity of a primitive identity, with the original term behind each slot.
pub fn bare_normalize(id: &Identity) -> Result<(BareIdentity, Vec<(Slot, Term)>)> {
    let (f, g, zs) = sides(id)?;
    let (slots, map) = pattern(&zs, false);
    Ok((
        BareIdentity {
            lhs: f.clone(),
            rhs: g.clone(),
            slots,
        },
        map.into_iter().map(|(s, t)| (s, t.clone())).collect(),
    ))
}

/// Set partitions of `0..m` as restricted-growth strings, the discrete partition first.
pub fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        let top = if prefix.is_empty() { 0 } else { max + 1 };
        for b in (0..=top).rev() {
            prefix.push(b);
            go(prefix, max.max(b), m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(m), 0, m, &mut out);
    out
}

/// One bare identity per equivalence relation on the placed variables.
pub fn partition_expansion(id: &Identity) -> Result<Vec<BareIdentity>> {
    sides(id)?;
    let placed = placed_in(&id.lhs, &id.rhs);
    set_partitions(placed.len())
        .into_iter()
        .map(|blocks| {
            let rep: HashMap<IndVar, IndVar> = placed
                .iter()
                .zip(&blocks)
                .map(|(&v, &b)| (v, placed[blocks.iter().position(|&c| c == b).unwrap()]))
                .collect();
            let merged = Identity {
                lhs: id.lhs.map_vars(&|p| p, &|v| *rep.get(&v).unwrap_or(&v)),
                rhs: id.rhs.map_vars(&|p| p, &|v| *rep.get(&v).unwrap_or(&v)),
            };
            bare_normalize(&merged).map(|(b, _)| b)
        })
        .collect()
}

/// The individual bare identity of a primitive identity on a total structure, or
/// `None` when an application on one side occurs nowhere on the other (then invalid).
pub fn total_reduce(id: &Identity) -> Result<Option<BareIdentity>> {
    let (f, g, zs) = sides(id)?;
    let (l, r) = zs.split_at(f.arity);
    let covered = |from: &[&Term], to: &[&Term]| {
        from.iter()
            .all(|z| matches!(z, Term::Var(_)) || to.contains(z))
    };
    if !covered(l, r) || !covered(r, l) {
        return Ok(None);
    }
    Ok(Some(BareIdentity {
        lhs: f.clone(),
        rhs: g.clone(),
        slots: pattern(&zs, true).0,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signature;

    fn sig() -> Signature {
        Signature::with_symbols([
            FuncSymbol::new("phi", 3, Sort::Ind),
            FuncSymbol::new("psi", 3, Sort::Ind),
            FuncSymbol::new("f", 2, Sort::Ind),
        ])
        .unwrap()
    }

    fn id(t: &str) -> Identity {
        Identity::parse(t, &sig()).unwrap()
    }

    #[test]
    fn normalization() {
        let (b, map) = bare_normalize(&id("phi(p(s), s, t) = psi(p(t), s, t)")).unwrap();
        assert_eq!(b.to_string(), "phi(p0(), v0, v1) = psi(p1(), v0, v1)");
        assert_eq!(map.len(), 4);
        assert_eq!(map[0].0, Slot::Fn(0));
        let (b, _) = bare_normalize(&id("f(s, s) = f(s, s)")).unwrap();
        assert_eq!(b.to_string(), "f(v0, v0) = f(v0, v0)");
        let (b, _) = bare_normalize(&id("f(q(), x) = f(x, p(x, x))")).unwrap();
        assert_eq!(b.to_string(), "f(p0(), v0) = f(v0, p1())");
        assert!(matches!(bare_normalize(&id("x = x")), Err(Error::NotForm44(_))));
    }

    #[test]
    fn normalization_preserves_the_slot_pattern() {
        let i = id("phi(p(s), t, p(s)) = psi(s, q(t, s), t)");
        let (b, _) = bare_normalize(&i).unwrap();
        let Term::Sym(_, l) = &i.lhs else { panic!() };
        let Term::Sym(_, r) = &i.rhs else { panic!() };
        let zs: Vec<&Term> = l.iter().chain(r).collect();
        for a in 0..zs.len() {
            for c in 0..zs.len() {
                assert_eq!(zs[a] == zs[c], b.slots[a] == b.slots[c]);
            }
        }
    }

    #[test]
    fn idempotent() {
        let (b, _) = bare_normalize(&id("phi(p(s), s, t) = psi(p(t), s, t)")).unwrap();
        let (again, _) = bare_normalize(&b.to_identity()).unwrap();
        assert_eq!(again, b);
        assert_eq!(BareIdentity::from_identity(&b.to_identity()).unwrap(), b);
        assert!(BareIdentity::from_identity(&id("f(v1, v0) = f(v0, v1)")).is_err());
        assert!(BareIdentity::from_identity(&id("f(p(x), v0) = f(v0, v0)")).is_err());
    }

    #[test]
    fn partitions_in_order() {
        assert_eq!(set_partitions(0), vec![Vec::<usize>::new()]);
        assert_eq!(
            set_partitions(3),
            vec![
                vec![0, 1, 2],
                vec![0, 1, 1],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![0, 0, 0]
            ]
        );
    }

    #[test]
    fn bell_numbers() {
        // Bell numbers from the triangle recurrence
        let mut row = vec![1u64];
        let mut bell = vec![1u64];
        for _ in 0..7 {
            let mut next = vec![*row.last().unwrap()];
            for x in &row {
                next.push(next.last().unwrap() + x);
            }
            bell.push(next[0]);
            row = next;
        }
        for (m, &b) in bell.iter().enumerate().take(8) {
            assert_eq!(set_partitions(m).len() as u64, b, "m = {m}");
        }
    }

    #[test]
    fn expansion() {
        let e = partition_expansion(&id("phi(p(s), s, t) = psi(p(t), s, t)")).unwrap();
        let shown: Vec<String> = e.iter().map(|b| b.to_string()).collect();
        assert_eq!(
            shown,
            vec![
                "phi(p0(), v0, v1) = psi(p1(), v0, v1)",
                "phi(p0(), v0, v0) = psi(p0(), v0, v0)"
            ]
        );
        let e = partition_expansion(&id("f(p(s), q(t)) = f(q(t), p(s))")).unwrap();
        assert_eq!(e.len(), 1);
        let e = partition_expansion(&id("phi(x, y, z) = psi(z, y, x)")).unwrap();
        assert_eq!(e.len(), 5);
    }

    #[test]
    fn total_reduction() {
        assert_eq!(total_reduce(&id("phi(p(s), s, t) = psi(p(t), s, t)")).unwrap(), None);
        let b = total_reduce(&id("phi(p(s), s, t) = psi(p(s), s, t)")).unwrap().unwrap();
        assert_eq!(b.to_string(), "phi(v0, v1, v2) = psi(v0, v1, v2)");
        assert!(b.is_individual());
        let b = total_reduce(&id("f(s, s) = f(s, s)")).unwrap().unwrap();
        assert_eq!(b.to_string(), "f(v0, v0) = f(v0, v0)");
        assert_eq!(total_reduce(&id("f(s, t) = f(s, p(t))")).unwrap(), None);
    }
}
