//! Backtracking search for a part-to-part correspondence between two programs.
//!
//! A correspondence maps each equation of `f` to a distinct equation of `e` with the
//! same sort and arity, heads to heads. Part `F_j` is compared with part `E_i` after
//! renaming the function variables of `f` into those of `e` and the parameters of
//! `F_j` positionally into those of `E_i`. Congruence and intensional equivalence
//! differ only in the comparison.

use rustc_hash::FxHashMap as HashMap;

use crate::error::Result;
use crate::syntax::{FnVar, IndVar, Program, Term};

pub(crate) struct Correspondence {
    /// `e_of[j]` is the equation of `e` matched with equation `j` of `f`.
    pub e_of: Vec<usize>,
}

/// Compares `E_i` (by part index, 0 for the head) with a renamed part of `f`.
pub(crate) trait PartCheck {
    fn candidates(&mut self, e: &Program, f: &Program, j: usize) -> Vec<usize>;
    fn check(&mut self, e_part: usize, e_term: &Term, renamed: &Term) -> Result<bool>;
}

struct Search<'a, C: PartCheck> {
    e: &'a Program,
    f: &'a Program,
    cmp: C,
    /// equation indices of `f` occurring in each part of `f`
    deps: Vec<Vec<usize>>,
    /// parts of `f` whose dependencies include each equation of `f`
    rdeps: Vec<Vec<usize>>,
    cands: Vec<Vec<usize>>,
    /// candidates passing the equation's own check, while its dependencies stay assigned
    doms: Vec<Option<Vec<usize>>>,
    assign: Vec<Option<usize>>,
    used: Vec<bool>,
    memo: HashMap<(usize, usize, Vec<usize>), bool>,
    order: Vec<usize>,
}

impl<'a, C: PartCheck> Search<'a, C> {
    fn e_part_of(&self, k: usize) -> Option<usize> {
        if k == 0 {
            Some(0)
        } else {
            self.assign[k - 1].map(|i| i + 1)
        }
    }

    fn determined(&self, k: usize) -> bool {
        self.e_part_of(k).is_some() && self.deps[k].iter().all(|&d| self.assign[d].is_some())
    }

    fn check_part(&mut self, k: usize) -> Result<bool> {
        let i = self.e_part_of(k).expect("part is matched");
        let images: Vec<usize> = self.deps[k]
            .iter()
            .map(|&d| self.assign[d].expect("dependency assigned"))
            .collect();
        let key = (k, i, images);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let (e, f) = (self.e, self.f);
        let fn_map: Vec<(FnVar, FnVar)> = self.deps[k]
            .iter()
            .zip(&key.2)
            .map(|(&d, &img)| (f.equations[d].var, e.equations[img].var))
            .collect();
        let params: &[IndVar] = if k == 0 { &[] } else { &f.equations[k - 1].params };
        let e_params: &[IndVar] = if k == 0 { &[] } else { &e.equations[i - 1].params };
        let f_term = if k == 0 { &f.head } else { &f.equations[k - 1].body };
        let e_term = if i == 0 { &e.head } else { &e.equations[i - 1].body };
        let renamed = f_term.map_vars(
            &|q| fn_map.iter().find(|(a, _)| *a == q).expect("dependency mapped").1,
            &|v| params.iter().position(|w| *w == v).map_or(v, |n| e_params[n]),
        );
        let ok = self.cmp.check(i, e_term, &renamed)?;
        self.memo.insert(key, ok);
        Ok(ok)
    }

    /// Assigns `j ↦ i` and checks every part this determines.
    fn try_assign(&mut self, j: usize, i: usize) -> Result<bool> {
        self.assign[j] = Some(i);
        self.used[i] = true;
        if self.determined(j + 1) && !self.check_part(j + 1)? {
            self.unassign(j, i);
            return Ok(false);
        }
        for r in 0..self.rdeps[j].len() {
            let k = self.rdeps[j][r];
            if self.determined(k) && !self.check_part(k)? {
                self.unassign(j, i);
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn unassign(&mut self, j: usize, i: usize) {
        self.assign[j] = None;
        self.used[i] = false;
        for &k in &self.rdeps[j] {
            if k > 0 {
                self.doms[k - 1] = None;
            }
        }
    }

    fn checkable(&self, j: usize) -> bool {
        self.deps[j + 1]
            .iter()
            .all(|&d| d == j || self.assign[d].is_some())
    }

    /// Candidates of a checkable equation that pass its own part check.
    fn own_domain(&mut self, j: usize) -> Result<&[usize]> {
        if self.doms[j].is_none() {
            let mut out = Vec::new();
            for c in 0..self.cands[j].len() {
                let i = self.cands[j][c];
                self.assign[j] = Some(i);
                let ok = self.check_part(j + 1)?;
                self.assign[j] = None;
                if ok {
                    out.push(i);
                }
            }
            self.doms[j] = Some(out);
        }
        Ok(self.doms[j].as_deref().unwrap())
    }

    fn search(&mut self, remaining: usize) -> Result<bool> {
        if remaining == 0 {
            return Ok(true);
        }
        // smallest checkable domain first; otherwise the static order
        let mut best: Option<(usize, usize)> = None;
        for j in 0..self.assign.len() {
            if self.assign[j].is_some() || !self.checkable(j) {
                continue;
            }
            let used = std::mem::take(&mut self.used);
            let free = self.own_domain(j)?.iter().filter(|&&i| !used[i]).count();
            self.used = used;
            if free == 0 {
                return Ok(false);
            }
            if best.is_none_or(|(_, b)| free < b) {
                best = Some((j, free));
                if free == 1 {
                    break;
                }
            }
        }
        let (j, dom) = match best {
            Some((j, _)) => (j, self.doms[j].clone().unwrap()),
            None => {
                let j = *self
                    .order
                    .iter()
                    .find(|&&j| self.assign[j].is_none())
                    .expect("an unassigned equation remains");
                (j, self.cands[j].clone())
            }
        };
        for i in dom {
            if self.used[i] {
                continue;
            }
            if self.try_assign(j, i)? {
                if self.search(remaining - 1)? {
                    return Ok(true);
                }
                self.unassign(j, i);
            }
        }
        Ok(false)
    }
}

fn eq_index(p: &Program) -> HashMap<FnVar, usize> {
    p.equations
        .iter()
        .enumerate()
        .map(|(i, e)| (e.var, i))
        .collect()
}

/// Finds the first correspondence in search order, if any.
pub(crate) fn find_correspondence<C: PartCheck>(
    e: &Program,
    f: &Program,
    mut cmp: C,
) -> Result<Option<Correspondence>> {
    let m = f.equations.len();
    if e.equations.len() != m || e.free_vars != f.free_vars {
        return Ok(None);
    }
    let f_idx = eq_index(f);
    let deps: Vec<Vec<usize>> = f
        .parts()
        .map(|t| t.fn_vars().iter().map(|q| f_idx[q]).collect())
        .collect();
    let mut rdeps = vec![Vec::new(); m];
    for (k, ds) in deps.iter().enumerate() {
        for &d in ds {
            if k != d + 1 {
                rdeps[d].push(k);
            }
        }
    }
    let cands: Vec<Vec<usize>> = (0..m).map(|j| cmp.candidates(e, f, j)).collect();
    // breadth-first from the head through the dependency graph
    let mut order = Vec::with_capacity(m);
    let mut seen = vec![false; m];
    let mut queue: Vec<usize> = deps[0].clone();
    let mut at = 0;
    while order.len() < m {
        if at == queue.len() {
            queue.push((0..m).find(|&j| !seen[j]).unwrap());
        }
        let j = queue[at];
        at += 1;
        if seen[j] {
            continue;
        }
        seen[j] = true;
        order.push(j);
        queue.extend(deps[j + 1].iter().copied());
    }
    let mut s = Search {
        e,
        f,
        cmp,
        deps,
        rdeps,
        cands,
        doms: vec![None; m],
        assign: vec![None; m],
        used: vec![false; m],
        memo: HashMap::default(),
        order,
    };
    if s.determined(0) && !s.check_part(0)? {
        return Ok(None);
    }
    if !s.search(m)? {
        return Ok(None);
    }
    Ok(Some(Correspondence {
        e_of: s.assign.iter().map(|a| a.unwrap()).collect(),
    }))
}

/// Equations of `e` with the sort and arity of equation `j` of `f`.
pub(crate) fn same_type(e: &Program, f: &Program, j: usize) -> Vec<usize> {
    let q = f.equations[j].var;
    e.equations
        .iter()
        .enumerate()
        .filter(|(_, eq)| eq.var.sort == q.sort && eq.var.arity == q.arity)
        .map(|(i, _)| i)
        .collect()
}
