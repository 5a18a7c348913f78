//! Command-line front end. Exit codes: 0 positive or success, 1 negative verdict,
//! 2 usage or input error.
//!
//! A program file may start with `func` declarations, as in a signature file,
//! which extend the signature used to read it.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use crate::congruence::{congruent, globally_equivalent};
use crate::error::Error;
use crate::identities::{build_dictionary, parse_dictionary, print_dictionary, Oracle, StructureOracle};
use crate::intension::intensionally_equivalent;
use crate::propgraph::{encode_graph, graphs_isomorphic_via_intension, parse_graph, Graph};
use crate::reduction::{normalize, size, Strategy};
use crate::semantics::{denote_program, parse_signature, parse_structure, show, FiniteStructure, Guard};
use crate::syntax::{parse_program, print_program, Program, Signature};

#[derive(Debug, Parser)]
#[command(name = "mccarthy", version, about = "Recursive programs, canonical forms and intensions")]
pub struct Cli {
    /// Signature file with `func <name> arity <k> sort ind|bool` lines.
    #[arg(long, global = true)]
    pub sig: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = Guard::default().max_assignments)]
    pub max_assignments: u64,
    #[arg(long, global = true, default_value_t = Guard::default().max_carrier)]
    pub max_carrier: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    First,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and print a program.
    Parse { file: PathBuf },
    /// Evaluate a program on a structure at the given carrier elements.
    Eval {
        #[arg(long)]
        structure: PathBuf,
        file: PathBuf,
        args: Vec<usize>,
    },
    Size { file: PathBuf },
    /// One program per reduction step, prefixed by its label.
    Trace {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::First)]
        strategy: StrategyArg,
    },
    Normalize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::First)]
        strategy: StrategyArg,
    },
    Congruent { a: PathBuf, b: PathBuf },
    /// Intensional equivalence on a structure, a dictionary, or in FREE mode.
    #[command(group(ArgGroup::new("mode").required(true).multiple(true).args(["structure", "dict", "free"])))]
    Equiv {
        #[arg(long, conflicts_with = "free")]
        structure: Option<PathBuf>,
        #[arg(long, conflicts_with = "free")]
        dict: Option<PathBuf>,
        #[arg(long)]
        free: bool,
        a: PathBuf,
        b: PathBuf,
    },
    GlobalEquiv { a: PathBuf, b: PathBuf },
    /// Print the dictionary of a structure.
    Dict { structure: PathBuf },
    GraphEncode { graph: PathBuf },
    GraphIso { g1: PathBuf, g2: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure(String);

impl Failure {
    fn at(file: &Path, e: Error) -> Failure {
        Failure(format!("{}: {e}", file.display()))
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn read(file: &Path) -> Run<String> {
    fs::read_to_string(file).map_err(|e| Failure(format!("{}: {e}", file.display())))
}

fn merge(into: &mut Signature, from: &Signature) -> std::result::Result<(), Error> {
    for f in from.user_symbols() {
        match into.get(&f.name) {
            Some(g) if g == f => {}
            Some(_) => return Err(Error::DuplicateDefinition(f.name.to_string())),
            None => into.add(f.clone())?,
        }
    }
    Ok(())
}

/// Splits leading `func` lines off a program file, blanking them to keep line numbers.
fn split_header(text: &str) -> (String, String) {
    let mut header = String::new();
    let mut body = String::new();
    let mut in_header = true;
    for l in text.lines() {
        let t = l.trim_start();
        if in_header && (t.starts_with("func ") || t.starts_with('#') || t.is_empty()) {
            header.push_str(l);
            body.push('\n');
        } else {
            in_header = false;
            body.push_str(l);
            body.push('\n');
        }
        header.push('\n');
    }
    (header, body)
}

struct Ctx {
    sig: Signature,
    guard: Guard,
    seed: u64,
}

impl Ctx {
    fn with_structure(&mut self, path: &Path) -> Run<FiniteStructure> {
        let a = parse_structure(&read(path)?).map_err(|e| Failure::at(path, e))?;
        merge(&mut self.sig, a.signature()).map_err(|e| Failure::at(path, e))?;
        Ok(a)
    }

    fn program(&mut self, path: &Path) -> Run<Program> {
        let (header, body) = split_header(&read(path)?);
        let decl = parse_signature(&header).map_err(|e| Failure::at(path, e))?;
        merge(&mut self.sig, &decl).map_err(|e| Failure::at(path, e))?;
        parse_program(&body, &self.sig).map_err(|e| Failure::at(path, e))
    }

    fn graph(&self, path: &Path) -> Run<Graph> {
        parse_graph(&read(path)?).map_err(|e| Failure::at(path, e))
    }

    fn strategy(&self, s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::First => Strategy::First,
            StrategyArg::Random => Strategy::Random(self.seed),
        }
    }
}

fn verdict(yes: bool, positive: String, negative: &str) -> (i32, String) {
    if yes {
        (0, positive)
    } else {
        (1, format!("{negative}\n"))
    }
}

fn permutation_line(pi: &[usize]) -> String {
    let shown: Vec<String> = pi.iter().map(usize::to_string).collect();
    format!("{}\n", shown.join(" "))
}

fn execute(cli: Cli) -> Run<(i32, String)> {
    let mut ctx = Ctx {
        sig: Signature::new(),
        guard: Guard {
            max_assignments: cli.max_assignments,
            max_carrier: cli.max_carrier,
        },
        seed: cli.seed,
    };
    if let Some(path) = &cli.sig {
        let s = parse_signature(&read(path)?).map_err(|e| Failure::at(path, e))?;
        merge(&mut ctx.sig, &s).map_err(|e| Failure::at(path, e))?;
    }
    let ok = |s: String| Ok((0, s));
    match cli.command {
        Command::Parse { file } => ok(format!("{}\n", print_program(&ctx.program(&file)?))),
        Command::Eval { structure, file, args } => {
            let a = ctx.with_structure(&structure)?;
            let p = ctx.program(&file)?;
            let v = denote_program(&a, &p, &args).map_err(|e| Failure::at(&file, e))?;
            ok(format!("{}\n", show(v)))
        }
        Command::Size { file } => ok(format!("{}\n", size(&ctx.program(&file)?))),
        Command::Trace { file, strategy } => {
            let p = ctx.program(&file)?;
            ok(normalize(&p, ctx.strategy(strategy)).render())
        }
        Command::Normalize { file, strategy } => {
            let p = ctx.program(&file)?;
            ok(format!("{}\n", print_program(normalize(&p, ctx.strategy(strategy)).result())))
        }
        Command::Congruent { a, b } => {
            let (e, f) = (ctx.program(&a)?, ctx.program(&b)?);
            let w = congruent(&e, &f);
            let mut out = String::from("CONGRUENT\n");
            if let Some(w) = &w {
                out.push_str(&permutation_line(&w.body_permutation));
                let mut ren: Vec<_> = w.fn_renaming.iter().collect();
                ren.sort_by_key(|(x, _)| x.index);
                for (x, y) in ren {
                    writeln!(out, "p{} -> p{}", x.index, y.index).unwrap();
                }
            }
            Ok(verdict(w.is_some(), out, "NOT CONGRUENT"))
        }
        Command::Equiv {
            structure,
            dict,
            free,
            a,
            b,
        } => {
            let st = structure.as_deref().map(|s| ctx.with_structure(s)).transpose()?;
            let (e, f) = (ctx.program(&a)?, ctx.program(&b)?);
            let d = match &dict {
                Some(path) => Some(parse_dictionary(&read(path)?, &ctx.sig).map_err(|e| Failure::at(path, e))?),
                None => None,
            };
            let so = st.as_ref().map(|s| StructureOracle::new(s, ctx.guard));
            let oracle = match (&d, &so) {
                (Some(d), _) => Oracle::Dictionary(d),
                (None, Some(s)) => Oracle::Structure(s),
                (None, None) => {
                    debug_assert!(free);
                    Oracle::Free
                }
            };
            let which = dict.as_deref().or(structure.as_deref()).unwrap_or(&a);
            let pi = intensionally_equivalent(&oracle, &e, &f).map_err(|e| Failure::at(which, e))?;
            let out = pi.as_deref().map(|p| format!("EQUIVALENT\n{}", permutation_line(p)));
            Ok(verdict(pi.is_some(), out.unwrap_or_default(), "NOT EQUIVALENT"))
        }
        Command::GlobalEquiv { a, b } => {
            let (e, f) = (ctx.program(&a)?, ctx.program(&b)?);
            Ok(verdict(
                globally_equivalent(&e, &f),
                "GLOBALLY EQUIVALENT\n".into(),
                "NOT GLOBALLY EQUIVALENT",
            ))
        }
        Command::Dict { structure } => {
            let a = ctx.with_structure(&structure)?;
            let d = build_dictionary(&a, ctx.guard).map_err(|e| Failure::at(&structure, e))?;
            ok(print_dictionary(&d))
        }
        Command::GraphEncode { graph } => ok(format!("{}\n", print_program(&encode_graph(&ctx.graph(&graph)?)))),
        Command::GraphIso { g1, g2 } => {
            let (x, y) = (ctx.graph(&g1)?, ctx.graph(&g2)?);
            Ok(verdict(
                graphs_isomorphic_via_intension(&x, &y),
                "ISOMORPHIC\n".into(),
                "NOT ISOMORPHIC",
            ))
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: bad usage");
                (String::new(), format!("{}\n", first.trim_end()))
            };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}
