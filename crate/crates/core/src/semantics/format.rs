//! Structure files and signature files.
//!
//! ```text
//! structure nat3
//! carrier 3
//! partial
//! func succ arity 1 sort ind
//! 0 -> 1
//! 1 -> 2
//! end
//! ```
//!
//! A signature file holds `func` lines only.

use std::fmt::Write;

use super::{FiniteStructure, Value};
use crate::error::{Error, Result};
use crate::syntax::{FuncSymbol, Signature, Sort};

fn fail<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Format {
        line,
        msg: msg.into(),
    })
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, w)| !w.is_empty() && !w[0].starts_with('#'))
}

fn func_line(line: usize, w: &[&str]) -> Result<FuncSymbol> {
    match w {
        ["func", name, "arity", k, "sort", s] => {
            let arity = k
                .parse()
                .or_else(|_| fail(line, format!("bad arity `{k}`")))?;
            let sort = match *s {
                "ind" => Sort::Ind,
                "bool" => Sort::Bool,
                _ => return fail(line, format!("bad sort `{s}`")),
            };
            Ok(FuncSymbol::new(name, arity, sort))
        }
        _ => fail(line, "expected `func <name> arity <k> sort ind|bool`"),
    }
}

fn add(sig: &mut Signature, line: usize, f: FuncSymbol) -> Result<()> {
    sig.add(f).map_err(|e| Error::Format {
        line,
        msg: e.to_string(),
    })
}

pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut sig = Signature::new();
    for (line, w) in lines(text) {
        let f = func_line(line, &w)?;
        add(&mut sig, line, f)?;
    }
    Ok(sig)
}

pub fn parse_structure(text: &str) -> Result<FiniteStructure> {
    let mut it = lines(text).peekable();
    let (name, carrier, total);
    match it.next() {
        Some((_, w)) if w.len() == 2 && w[0] == "structure" => name = w[1].to_string(),
        Some((l, _)) => return fail(l, "expected `structure <name>`"),
        None => return fail(1, "empty structure file"),
    }
    match it.next() {
        Some((l, w)) if w.len() == 2 && w[0] == "carrier" => {
            carrier = w[1]
                .parse::<usize>()
                .or_else(|_| fail(l, format!("bad carrier size `{}`", w[1])))?
        }
        Some((l, _)) => return fail(l, "expected `carrier <n>`"),
        None => return fail(2, "missing `carrier <n>`"),
    }
    match it.next() {
        Some((_, w)) if w == ["total"] => total = true,
        Some((_, w)) if w == ["partial"] => total = false,
        Some((l, _)) => return fail(l, "expected `total` or `partial`"),
        None => return fail(3, "missing `total` or `partial`"),
    }

    let mut sig = Signature::new();
    let mut rows: Vec<(usize, String, Vec<usize>, String)> = Vec::new();
    while let Some((line, w)) = it.next() {
        let f = func_line(line, &w)?;
        let fname = f.name.to_string();
        let arity = f.arity;
        add(&mut sig, line, f)?;
        loop {
            let Some((l, w)) = it.next() else {
                return fail(line, format!("table of `{fname}` is missing `end`"));
            };
            if w == ["end"] {
                break;
            }
            let arrow = w.iter().position(|&t| t == "->");
            let Some(k) = arrow.filter(|&k| k == arity && w.len() == k + 2) else {
                return fail(l, format!("expected {arity} arguments, `->` and a value"));
            };
            let args = w[..k]
                .iter()
                .map(|a| a.parse::<usize>().or_else(|_| fail(l, format!("bad element `{a}`"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push((l, fname.clone(), args, w[k + 1].to_string()));
        }
    }

    let mut a = FiniteStructure::new(&name, carrier, sig, total).map_err(|e| Error::Format {
        line: 2,
        msg: e.to_string(),
    })?;
    for (l, f, args, v) in rows {
        let value = match v.as_str() {
            "true" => Value::Bool(true),
            "false" => Value::Bool(false),
            n => Value::Ind(n.parse().or_else(|_| fail(l, format!("bad value `{n}`")))?),
        };
        if a.entries(&f).iter().any(|(t, _)| *t == args) {
            return fail(l, format!("duplicate tuple for `{f}`"));
        }
        a.set(&f, &args, value).map_err(|e| Error::Format {
            line: l,
            msg: e.to_string(),
        })?;
    }
    a.validate().map_err(|e| Error::Format {
        line: 3,
        msg: e.to_string(),
    })?;
    Ok(a)
}

pub fn print_structure(a: &FiniteStructure) -> String {
    let mut out = String::new();
    writeln!(out, "structure {}", a.name).unwrap();
    writeln!(out, "carrier {}", a.carrier()).unwrap();
    out.push_str(if a.is_total() { "total\n" } else { "partial\n" });
    for f in a.signature().user_symbols() {
        writeln!(out, "func {} arity {} sort {}", f.name, f.arity, f.sort).unwrap();
        for (args, v) in a.entries(&f.name) {
            for x in &args {
                write!(out, "{x} ").unwrap();
            }
            writeln!(out, "-> {v}").unwrap();
        }
        out.push_str("end\n");
    }
    out
}
