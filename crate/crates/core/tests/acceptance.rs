mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use mccarthy::congruence::{congruent, globally_equivalent};
use mccarthy::identities::{
    bare_bound, build_dictionary, decide_identity, decide_structure_free, partition_expansion, set_partitions,
    Identity, Oracle, StructureOracle, Verdict,
};
use mccarthy::intension::{equivalent_irreducible, intensionally_equivalent};
use mccarthy::propgraph::{brute_force_canonical, brute_force_isomorphic, encode_graph, Graph};
use mccarthy::reduction::{canonical_form, enumerate_redexes, normalize, size, step, ReductionLabel, Site, Strategy};
use mccarthy::semantics::{
    denote_program, find_countermodel, iterator_program, iterator_signature, iterator_structure, run_iterator,
    satisfies, satisfies_injective, Guard,
};
use mccarthy::syntax::{parse_program, FnVar, FuncSymbol, IndVar, Program, Signature, Sort, Term};

struct Report {
    ok: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn timed(limit_secs: u64, f: impl FnOnce() -> (bool, String)) -> Report {
    let t = Instant::now();
    let (ok, detail) = f();
    Report {
        ok,
        detail,
        elapsed: t.elapsed(),
        limit: Duration::from_secs(limit_secs),
    }
}

fn loop_signature() -> Signature {
    Signature::with_symbols([
        FuncSymbol::new("phi0", 1, Sort::Ind),
        FuncSymbol::new("test", 2, Sort::Bool),
        FuncSymbol::new("sigma", 2, Sort::Ind),
    ])
    .unwrap()
}

const LOOP: &str = "p(x, phi0(x)) (x) where { p(x, y) = if test(phi0(x), y) then y else p(x, sigma(x, y)) }";

fn label(p: &Program, site: Site, arg: usize) -> ReductionLabel {
    let (term, params) = match site {
        Site::Head => (&p.head, p.free_vars.len()),
        Site::Body(v) => {
            let eq = p.equation_for(v).unwrap();
            (&eq.body, eq.params.len())
        }
    };
    let fresh = p.max_fn_index().map_or(0, |m| m + 1);
    ReductionLabel {
        site,
        arg,
        fresh: FnVar::new(fresh, term.arguments()[arg - 1].sort(), params as u32),
    }
}

/// Lengths and end points of every maximal reduction sequence.
fn all_sequences(p: &Program, depth: usize, lengths: &mut BTreeSet<usize>, finals: &mut Vec<Program>) {
    let redexes = enumerate_redexes(p);
    if redexes.is_empty() {
        lengths.insert(depth);
        finals.push(p.clone());
        return;
    }
    for (site, arg) in redexes {
        let next = step(p, label(p, site, arg)).unwrap();
        assert_eq!(size(&next) + 1, size(p));
        all_sequences(&next, depth + 1, lengths, finals);
    }
}

fn criterion_1() -> (bool, String) {
    let e = parse_program(LOOP, &loop_signature()).unwrap();
    let mut lengths = BTreeSet::new();
    let mut finals = Vec::new();
    all_sequences(&e, 0, &mut lengths, &mut finals);
    let pairwise = finals.iter().all(|a| congruent(a, &finals[0]).is_some());
    let ok = size(&e) == 5 && lengths == BTreeSet::from([5]) && pairwise;
    (
        ok,
        format!(
            "size {}, {} maximal sequences with lengths {:?}, normal forms pairwise congruent: {pairwise}",
            size(&e),
            finals.len(),
            lengths
        ),
    )
}

fn criterion_2() -> (bool, String) {
    let mut r = rng(2);
    let mut agree = 0;
    let total = 500;
    for k in 0..total {
        let p = random_program(&mut r, 4, 4);
        let a = normalize(&p, Strategy::Random(2 * k));
        let b = normalize(&p, Strategy::Random(2 * k + 1));
        if a.result().is_irreducible() && congruent(a.result(), b.result()).is_some() {
            agree += 1;
        }
    }
    (agree == total, format!("{agree}/{total} pairs of random-order normal forms congruent"))
}

fn criterion_3() -> (bool, String) {
    let mut r = rng(3);
    let sig = program_signature();
    let total = 200;
    let mut agree = 0;
    let mut defined = 0;
    for _ in 0..total {
        let p = random_program(&mut r, 4, 4);
        let carrier = r.gen_range(1..=4);
        let density = *[0.3, 0.6, 0.9, 1.0].choose(&mut r).unwrap();
        let a = random_structure(&mut r, &sig, carrier, false, density);
        let input: Vec<usize> = p.free_vars.iter().map(|_| r.gen_range(0..carrier)).collect();
        let before = denote_program(&a, &p, &input).unwrap();
        let after = denote_program(&a, &canonical_form(&p), &input).unwrap();
        agree += usize::from(before == after);
        defined += usize::from(before.is_some());
    }
    (
        agree == total,
        format!("{agree}/{total} triples Kleene-equal ({defined} convergent)"),
    )
}

fn criterion_4() -> (bool, String) {
    let sig = program_signature();
    let e = parse_program("true () where { p:bool() = p() }", &sig).unwrap();
    let f = parse_program("true () where { p() = if p() then p() else p() }", &sig).unwrap();
    let not_congruent = congruent(&e, &f).is_none();
    let free = intensionally_equivalent(&Oracle::Free, &e, &f).unwrap().is_some();
    let mut r = rng(4);
    let mut on_structures = 0;
    for k in 0..20 {
        let a = random_structure(&mut r, &sig, 1 + k % 4, k % 2 == 0, 0.5);
        let o = StructureOracle::new(&a, Guard::default());
        on_structures += usize::from(intensionally_equivalent(&Oracle::Structure(&o), &e, &f).unwrap().is_some());
    }
    let global = globally_equivalent(&e, &f);
    (
        not_congruent && free && on_structures == 20 && global,
        format!("not congruent: {not_congruent}, FREE: {free}, structures: {on_structures}/20, global: {global}"),
    )
}

/// The three relations on one pair; `Err` describes a disagreement.
fn graph_verdict(a: &Graph, b: &Graph, ea: &Program, eb: &Program) -> Result<bool, String> {
    let iso = brute_force_isomorphic(a, b).unwrap();
    let cong = congruent(ea, eb).is_some();
    let free = equivalent_irreducible(&Oracle::Free, ea, eb).unwrap().is_some();
    if iso == cong && cong == free {
        Ok(iso)
    } else {
        Err(format!("{a:?} vs {b:?}: iso {iso}, congruent {cong}, FREE {free}"))
    }
}

#[derive(Default)]
struct Tally {
    pairs: u64,
    positives: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, a: &Graph, b: &Graph, ea: &Program, eb: &Program) {
        self.pairs += 1;
        match graph_verdict(a, b, ea, eb) {
            Ok(v) => self.positives += u64::from(v),
            Err(m) => self.failures.push(m),
        }
    }
}

/// Sorted (out-degree, in-degree, loop) triples.
fn degree_profile(g: &Graph) -> Vec<(usize, usize, bool)> {
    let n = g.node_count();
    let mut p: Vec<_> = (0..n)
        .map(|i| {
            let out = (0..n).filter(|&j| g.has_edge(i, j)).count();
            let inn = (0..n).filter(|&j| g.has_edge(j, i)).count();
            (out, inn, g.has_edge(i, i))
        })
        .collect();
    p.sort();
    p
}

fn criterion_5() -> (bool, String) {
    let mut t = Tally::default();
    // every ordered pair on at most three nodes
    for n in 1..=3usize {
        let gs: Vec<Graph> = (0..1u64 << (n * n)).map(|c| Graph::from_code(n, c).unwrap()).collect();
        let es: Vec<Program> = gs.iter().map(encode_graph).collect();
        for i in 0..gs.len() {
            for j in 0..gs.len() {
                t.check(&gs[i], &gs[j], &es[i], &es[j]);
            }
        }
    }
    let small = t.pairs;
    // four nodes: every graph against its class representative; each representative
    // against up to 48 others with the same degree profile and 48 random ones; random pairs
    let gs: Vec<Graph> = (0..1u64 << 16).map(|c| Graph::from_code(4, c).unwrap()).collect();
    let reps: BTreeSet<Graph> = gs.iter().map(|g| brute_force_canonical(g).unwrap()).collect();
    let reps: Vec<Graph> = reps.into_iter().collect();
    let rep_encs: Vec<Program> = reps.iter().map(encode_graph).collect();
    for g in &gs {
        let c = brute_force_canonical(g).unwrap();
        let k = reps.binary_search(&c).unwrap();
        t.check(g, &reps[k], &encode_graph(g), &rep_encs[k]);
    }
    let mut profiles: BTreeMap<Vec<(usize, usize, bool)>, Vec<usize>> = BTreeMap::new();
    for (k, g) in reps.iter().enumerate() {
        profiles.entry(degree_profile(g)).or_default().push(k);
    }
    let mut r = rng(5);
    let mut rep_pairs = 0;
    for i in 0..reps.len() {
        let same = &profiles[&degree_profile(&reps[i])];
        let mut partners: Vec<usize> = same.choose_multiple(&mut r, 48).copied().collect();
        partners.extend((0..48).map(|_| r.gen_range(0..reps.len())));
        for j in partners {
            rep_pairs += 1;
            t.check(&reps[i], &reps[j], &rep_encs[i], &rep_encs[j]);
        }
    }
    for _ in 0..10_000 {
        let (a, b) = (gs.choose(&mut r).unwrap(), gs.choose(&mut r).unwrap());
        t.check(a, b, &encode_graph(a), &encode_graph(b));
    }
    // five and six nodes
    for k in 0..200 {
        let n = 5 + k % 2;
        let a = Graph::from_code(n, r.gen_range(0..1u64 << (n * n))).unwrap();
        let b = if r.gen_bool(0.5) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut r);
            a.relabel(&perm)
        } else {
            Graph::from_code(n, r.gen_range(0..1u64 << (n * n))).unwrap()
        };
        t.check(&a, &b, &encode_graph(&a), &encode_graph(&b));
    }
    let Tally { pairs, positives, failures } = t;
    let ok = failures.is_empty();
    let mut detail = format!(
        "{pairs} pairs ({small} exhaustive on <=3 nodes; 4 nodes: all 65536 graphs vs their class representative, {rep_pairs} pairs among the {} classes, 10000 random; 200 on 5-6 nodes), {positives} isomorphic, {} disagreements",
        reps.len(),
        failures.len()
    );
    if let Some(m) = failures.first() {
        detail.push_str(&format!("; first: {m}"));
    }
    (ok, detail)
}

fn criterion_6() -> (bool, String) {
    let sig = iterator_signature();
    let shape = parse_program(
        "q(p1(x)) (x) where { p1(x) = input(x), p2(s) = T(s), p3(s) = output(s), p4(s) = sigma(s), \
         p5(s) = q(p4(s)), q(s) = if p2(s) then p3(s) else p5(s) }",
        &sig,
    )
    .unwrap();
    let e = iterator_program();
    let nf = canonical_form(&e);
    let shape_ok = nf.equations.len() == 6 && congruent(&nf, &shape).is_some();
    let mut r = rng(6);
    let (mut inputs, mut agree) = (0, 0);
    for _ in 0..100 {
        let m = random_machine(&mut r, 6);
        let a = iterator_structure(&m).unwrap();
        for x in 0..m.inputs {
            inputs += 1;
            agree += usize::from(run_iterator(&m, x) == denote_program(&a, &e, &[m.x_elem(x)]).unwrap());
        }
    }
    (
        shape_ok && agree == inputs,
        format!(
            "{agree}/{inputs} inputs agree over 100 iterators; canonical form has {} equations, congruent to the expected shape: {shape_ok}",
            nf.equations.len()
        ),
    )
}

/// Random irreducible identities with at most three individual variables.
struct IdGen {
    sig: Signature,
}

impl IdGen {
    fn var(&self, r: &mut Rng8, vars: usize) -> Term {
        Term::Var(IndVar(r.gen_range(0..vars) as u32))
    }

    fn immediate(&self, r: &mut Rng8, sort: Sort, vars: usize) -> Term {
        if sort == Sort::Ind && r.gen_bool(0.5) {
            return self.var(r, vars);
        }
        let arity = r.gen_range(0..=2u32);
        // one function variable per sort and arity, so that repeats are frequent
        let index = arity * 2 + u32::from(sort == Sort::Bool) + 6 * r.gen_range(0..2u32);
        Term::App(
            FnVar::new(index, sort, arity),
            (0..arity).map(|_| self.var(r, vars)).collect(),
        )
    }

    fn primitive(&self, r: &mut Rng8, f: &FuncSymbol, vars: usize) -> Term {
        Term::Sym(f.clone(), (0..f.arity).map(|_| self.immediate(r, Sort::Ind, vars)).collect())
    }

    fn side(&self, r: &mut Rng8, sort: Sort, vars: usize) -> Term {
        let syms: Vec<&FuncSymbol> = self.sig.symbols().iter().filter(|f| f.sort == sort).collect();
        match r.gen_range(0..10) {
            0 => match sort {
                Sort::Bool => [Term::True, Term::False].choose(r).unwrap().clone(),
                Sort::Ind => self.var(r, vars),
            },
            1 => self.immediate(r, sort, vars),
            2 => Term::cond(
                self.immediate(r, Sort::Bool, vars),
                self.immediate(r, sort, vars),
                self.immediate(r, sort, vars),
            ),
            _ => {
                let f = (*syms.choose(r).unwrap()).clone();
                self.primitive(r, &f, vars)
            }
        }
    }

    fn identity(&self, r: &mut Rng8) -> Identity {
        let vars = r.gen_range(1..=3);
        let sort = if r.gen_bool(0.3) { Sort::Bool } else { Sort::Ind };
        let lhs = self.side(r, sort, vars);
        let rhs = match (&lhs, r.gen_range(0..4)) {
            // same argument pattern under a same-sort symbol of equal arity
            (Term::Sym(f, args), 0 | 1) => {
                let same: Vec<&FuncSymbol> = self
                    .sig
                    .symbols()
                    .iter()
                    .filter(|g| g.sort == f.sort && g.arity == f.arity)
                    .collect();
                let mut args = args.clone();
                if r.gen_bool(0.3) {
                    args.reverse();
                }
                Term::Sym((*same.choose(r).unwrap()).clone(), args)
            }
            (_, 2) => lhs.clone(),
            _ => self.side(r, sort, vars),
        };
        Identity::new(lhs, rhs).unwrap()
    }
}

fn criterion_7() -> (bool, String) {
    let guard = Guard::default();
    let mut r = rng(7);
    let (mut identities, mut decisions, mut valid, mut countermodels, mut confirmed) = (0, 0, 0, 0, 0);
    let mut failures: Vec<String> = Vec::new();
    for _ in 0..100 {
        let sig = random_signature(&mut r, 3, 1, 2);
        let gen = IdGen { sig: sig.clone() };
        for _ in 0..30 {
            let id = gen.identity(&mut r);
            identities += 1;
            let vars = id.ind_vars().len();
            let residue = match decide_structure_free(&id).unwrap() {
                Verdict::NeedsDictionary(res) => Some(res),
                _ => None,
            };
            for _ in 0..10 {
                let total = r.gen_bool(0.3);
                let density = *[0.5, 0.8, 1.0].choose(&mut r).unwrap();
                let mut a = random_structure(&mut r, &sig, vars + 2, total, density);
                if let Term::Sym(f, _) = &id.lhs {
                    let twins: Vec<String> = sig
                        .user_symbols()
                        .iter()
                        .filter(|g| g.sort == f.sort && g.arity == f.arity && g.name != f.name)
                        .map(|g| g.name.to_string())
                        .collect();
                    if !twins.is_empty() && r.gen_bool(0.5) && sig.user_symbols().contains(f) {
                        copy_table(&mut a, &f.name, twins.choose(&mut r).unwrap());
                    }
                }
                let o = StructureOracle::new(&a, guard);
                let verdict = decide_identity(&Oracle::Structure(&o), &id).unwrap();
                decisions += 1;
                if verdict {
                    valid += 1;
                    let holds = satisfies(&a, &id.lhs, &id.rhs, guard).unwrap();
                    let expanded = match &residue {
                        Some(res) => partition_expansion(res).unwrap().iter().all(|b| {
                            let (l, r) = b.to_terms();
                            satisfies_injective(&a, &l, &r, guard).unwrap().holds
                        }),
                        None => true,
                    };
                    if holds && expanded {
                        confirmed += 1;
                    } else {
                        failures.push(format!("VALID `{id}` (total: {total}): satisfies {holds}, expansion {expanded}"));
                    }
                } else if find_countermodel(&a, &id.lhs, &id.rhs, false, guard).unwrap().is_some() {
                    countermodels += 1;
                } else {
                    failures.push(format!("INVALID `{id}` (total: {total}) has no countermodel"));
                }
            }
        }
    }
    let mut detail = format!(
        "{identities} identities x 10 structures: {valid} VALID ({confirmed} confirmed), {} INVALID ({countermodels} with countermodels), {} disagreements",
        decisions - valid,
        failures.len()
    );
    if let Some(m) = failures.first() {
        detail.push_str(&format!("; first: {m}"));
    }
    (failures.is_empty(), detail)
}

fn bell(m: usize) -> u64 {
    // Stirling numbers of the second kind, summed
    let mut s = vec![vec![0u64; m + 1]; m + 1];
    s[0][0] = 1;
    for n in 1..=m {
        for k in 1..=n {
            s[n][k] = k as u64 * s[n - 1][k] + s[n - 1][k - 1];
        }
    }
    s[m].iter().sum()
}

fn criterion_8() -> (bool, String) {
    let guard = Guard::default();
    let mut r = rng(8);
    let mut sigs: Vec<Signature> = (0..24)
        .map(|k| random_signature(&mut r, 1 + k % 4, k % 3, 1 + k % 2))
        .collect();
    sigs.push(
        Signature::with_symbols([
            FuncSymbol::new("f", 2, Sort::Ind),
            FuncSymbol::new("g", 2, Sort::Ind),
            FuncSymbol::new("h", 2, Sort::Ind),
        ])
        .unwrap(),
    );
    let (mut tested, mut within) = (0, 0);
    let mut worst: Option<(u128, u128, String)> = None;
    for sig in &sigs {
        for density in [0.0, 0.3, 0.7, 1.0] {
            for total in [false, true] {
                if total && density < 1.0 {
                    continue;
                }
                let a = random_structure(&mut r, sig, 3, total, density);
                let d = build_dictionary(&a, guard).unwrap();
                let (n, bound) = (d.entries.len() as u128, bare_bound(sig));
                tested += 1;
                if n <= bound {
                    within += 1;
                } else if worst.as_ref().is_none_or(|w| n * w.1 > w.0 * bound) {
                    let names: Vec<String> = sig.user_symbols().iter().map(|f| format!("{}/{}", f.name, f.arity)).collect();
                    worst = Some((n, bound, format!("{{{}}} at density {density}", names.join(", "))));
                }
            }
        }
    }
    let bell_ok = (0..=6).all(|m| {
        let vars: Vec<Term> = (0..m as u32).map(Term::var).collect();
        let f = FuncSymbol::new("f", m, Sort::Ind);
        let id = Identity::new(Term::Sym(f.clone(), vars.clone()), Term::Sym(f, vars)).unwrap();
        set_partitions(m).len() as u64 == bell(m) && partition_expansion(&id).unwrap().len() as u64 == bell(m)
    });
    let mut detail = format!("{within}/{tested} dictionaries within the bound; Bell counts for m = 0..6: {bell_ok}");
    if let Some((n, b, s)) = worst {
        detail.push_str(&format!("; largest excess {n} entries against a bound of {b} on {s}"));
    }
    (within == tested && bell_ok, detail)
}

#[test]
fn acceptance() {
    let reports = [
        timed(1, criterion_1),
        timed(60, criterion_2),
        timed(60, criterion_3),
        timed(1, criterion_4),
        timed(300, criterion_5),
        timed(60, criterion_6),
        timed(300, criterion_7),
        timed(60, criterion_8),
    ];
    let mut failed = Vec::new();
    for (k, rep) in reports.iter().enumerate() {
        let in_time = rep.elapsed <= rep.limit;
        let ok = rep.ok && in_time;
        println!(
            "{} criterion {}: {} [{:.2?}, limit {:?}]",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            rep.detail,
            rep.elapsed,
            rep.limit
        );
        if !ok {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
#[ignore = "every ordered pair on four nodes; billions of decisions"]
fn graph_pairs_on_four_nodes_exhaustive() {
    let gs: Vec<Graph> = (0..1u64 << 16).map(|c| Graph::from_code(4, c).unwrap()).collect();
    let es: Vec<Program> = gs.iter().map(encode_graph).collect();
    for i in 0..gs.len() {
        for j in 0..gs.len() {
            graph_verdict(&gs[i], &gs[j], &es[i], &es[j]).unwrap();
        }
    }
}
