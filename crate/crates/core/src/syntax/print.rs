//! Printing in the concrete grammar accepted by the parser.
//!
//! Variables print as `v<k>` and `p<k>`. A boolean function variable whose
//! sort the parser could not infer gets a `:bool` annotation.

use std::collections::HashSet;
use std::fmt::Write;

use super::sorts::Unifier;
use super::{Program, Sort, Term};

struct Printer {
    annotate: HashSet<u32>,
}

impl Printer {
    fn unforced(u: &mut Unifier, vars: impl Iterator<Item = super::FnVar>) -> HashSet<u32> {
        vars.filter(|p| p.sort == Sort::Bool && !u.forced_bool(*p))
            .map(|p| p.index)
            .collect()
    }

    fn var_name(&mut self, out: &mut String, index: u32) {
        write!(out, "p{index}").unwrap();
        if self.annotate.remove(&index) {
            out.push_str(":bool");
        }
    }

    fn term(&mut self, out: &mut String, t: &Term) {
        match t {
            Term::True => out.push_str("true"),
            Term::False => out.push_str("false"),
            Term::Var(v) => write!(out, "v{}", v.0).unwrap(),
            Term::App(p, args) => {
                self.var_name(out, p.index);
                self.args(out, args);
            }
            Term::Sym(f, args) => {
                out.push_str(&f.name);
                if !args.is_empty() {
                    self.args(out, args);
                }
            }
            Term::Cond(a, b, c) => {
                out.push_str("if ");
                self.term(out, a);
                out.push_str(" then ");
                self.term(out, b);
                out.push_str(" else ");
                self.term(out, c);
            }
        }
    }

    fn args(&mut self, out: &mut String, args: &[Term]) {
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.term(out, a);
        }
        out.push(')');
    }
}

fn var_list(out: &mut String, vs: &[super::IndVar]) {
    out.push('(');
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "v{}", v.0).unwrap();
    }
    out.push(')');
}

pub fn print_term(t: &Term) -> String {
    let mut u = Unifier::new();
    let _ = u.walk(t);
    let mut pr = Printer {
        annotate: Printer::unforced(&mut u, t.fn_vars().into_iter()),
    };
    let mut out = String::new();
    pr.term(&mut out, t);
    out
}

pub fn print_identity(lhs: &Term, rhs: &Term) -> String {
    let mut u = Unifier::new();
    if let (Ok(a), Ok(b)) = (u.walk(lhs), u.walk(rhs)) {
        let _ = u.union(a, b);
    }
    let vars = lhs.fn_vars().into_iter().chain(rhs.fn_vars());
    let mut pr = Printer {
        annotate: Printer::unforced(&mut u, vars),
    };
    let mut out = String::new();
    pr.term(&mut out, lhs);
    out.push_str(" = ");
    pr.term(&mut out, rhs);
    out
}

pub fn print_program(p: &Program) -> String {
    let mut u = Unifier::new();
    let _ = u.walk(&p.head);
    for eq in &p.equations {
        if let Ok(n) = u.walk(&eq.body) {
            let v = u.fn_node(eq.var.index);
            let _ = u.union(v, n);
        }
    }
    let mut pr = Printer {
        annotate: Printer::unforced(&mut u, p.equations.iter().map(|e| e.var)),
    };
    let mut out = String::new();
    // annotations go on the defining left-hand sides
    let mut body = String::new();
    for (i, eq) in p.equations.iter().enumerate() {
        body.push_str(if i == 0 { " " } else { ", " });
        pr.var_name(&mut body, eq.var.index);
        var_list(&mut body, &eq.params);
        body.push_str(" = ");
        pr.term(&mut body, &eq.body);
    }
    pr.term(&mut out, &p.head);
    out.push(' ');
    var_list(&mut out, &p.free_vars);
    out.push_str(" where {");
    out.push_str(&body);
    out.push_str(if p.equations.is_empty() { "}" } else { " }" });
    out
}
