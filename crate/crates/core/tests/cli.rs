use std::path::PathBuf;
use std::process::{Command, Output};

use mccarthy::syntax::{parse_program, print_program, FuncSymbol, Signature, Sort};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mccarthy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn loop_sig() -> Signature {
    Signature::with_symbols([
        FuncSymbol::new("phi0", 1, Sort::Ind),
        FuncSymbol::new("test", 2, Sort::Bool),
        FuncSymbol::new("sigma", 2, Sort::Ind),
    ])
    .unwrap()
}

#[test]
fn size_of_the_loop_program() {
    let o = run(&["size", &fixture("loop.prog")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "5\n");
}

#[test]
fn normalize_output_reparses() {
    let o = run(&["normalize", &fixture("loop.prog")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let p = parse_program(&text, &loop_sig()).unwrap();
    assert!(p.is_irreducible());
    assert_eq!(print_program(&p), text.trim_end());
}

#[test]
fn trace_lines_carry_labels_and_programs() {
    let o = run(&["trace", &fixture("loop.prog")]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    for l in &lines[1..] {
        let (label, prog) = l.split_once(' ').unwrap();
        assert!(label.starts_with('(') && label.ends_with(')'));
        parse_program(prog, &loop_sig()).unwrap();
    }
    assert!(lines[1..].iter().any(|l| l.starts_with("(HEAD,")));
}

#[test]
fn random_traces_depend_only_on_the_seed() {
    let f = fixture("loop.prog");
    let a = run(&["trace", "--strategy", "random", "--seed", "11", &f]);
    let b = run(&["trace", "--strategy", "random", "--seed", "11", &f]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 6);
}

#[test]
fn free_equivalence_of_the_truthteller_pair() {
    let (e, f) = (fixture("cong_e.prog"), fixture("cong_f.prog"));
    let o = run(&["equiv", "--free", &e, &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EQUIVALENT\n0 1\n"));
    let o = run(&["congruent", &e, &f]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NOT CONGRUENT\n");
    assert_eq!(run(&["global-equiv", &e, &f]).status.code(), Some(0));
}

#[test]
fn congruent_prints_a_witness() {
    let e = fixture("cong_f.prog");
    let o = run(&["congruent", &e, &e]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "CONGRUENT\n0\np0 -> p0\n");
}

#[test]
fn equivalence_on_a_structure_and_its_dictionary() {
    let (a, b) = (fixture("fg.prog"), fixture("gf.prog"));
    let o = run(&["equiv", "--structure", &fixture("twins.st"), &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["equiv", "--dict", &fixture("twins.dict"), "--sig", &fixture("unary.sig"), &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["equiv", "--free", "--sig", &fixture("unary.sig"), &a, &b]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "NOT EQUIVALENT\n");
}

#[test]
fn dict_matches_the_stored_file() {
    let o = run(&["dict", &fixture("twins.st")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("twins.dict")).unwrap());
}

#[test]
fn eval_on_a_structure() {
    let o = run(&["eval", "--structure", &fixture("twins.st"), &fixture("fg.prog"), "1"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn graphs() {
    let (a, b, c) = (fixture("path_fwd.graph"), fixture("path_back.graph"), fixture("cycle.graph"));
    assert_eq!(run(&["graph-iso", &a, &b]).status.code(), Some(0));
    assert_eq!(run(&["graph-iso", &a, &c]).status.code(), Some(1));
    let o = run(&["graph-encode", &a]);
    let p = parse_program(&stdout(&o), &Signature::new()).unwrap();
    assert_eq!(p.part_count(), 3 + 9 + 2);
    assert!(p.is_propositional());
}

#[test]
fn errors_exit_2_with_one_line() {
    for args in [
        vec!["equiv".to_string(), fixture("cong_e.prog"), fixture("cong_f.prog")],
        vec!["equiv".to_string(), "--free".into(), "--structure".into(), fixture("twins.st"), fixture("fg.prog"), fixture("gf.prog")],
        vec!["size".to_string(), fixture("missing.prog")],
        vec!["parse".to_string(), fixture("twins.st")],
        vec!["bogus".to_string()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&o).lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
    let o = run(&["parse", &fixture("twins.st")]);
    let msg = stderr(&o);
    assert!(msg.contains("twins.st") && msg.contains("line 5"), "{msg}");
}

#[test]
fn library_entry_point() {
    let out = mccarthy::cli::run(["mccarthy", "size", &fixture("loop.prog")]);
    assert_eq!((out.code, out.stdout.as_str()), (0, "5\n"));
    let out = mccarthy::cli::run(["mccarthy", "--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("graph-iso"));
}
