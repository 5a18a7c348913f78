//! Recursive-descent parser for terms, identities and extended programs.
//!
//! Parsing runs in two phases: a raw tree over names, then name resolution
//! and sort inference.

use std::collections::{HashMap, HashSet};

use super::sorts::Unifier;
use super::{is_keyword, Equation, FnVar, IndVar, Program, Signature, Sort, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Eq,
    Colon,
    Slash,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Pos {
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            chars.next();
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            chars.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let mut n = 0usize;
            while let Some(&d) = chars.peek() {
                if let Some(v) = d.to_digit(10) {
                    n = n.saturating_mul(10).saturating_add(v as usize);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Num(n), pos));
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            ':' => Tok::Colon,
            '/' => Tok::Slash,
            _ => {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((tok, pos));
        chars.next();
        col += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct Ann {
    sort: Sort,
    arity: Option<usize>,
}

#[derive(Debug, Clone)]
enum Raw {
    True,
    False,
    Name(String, Option<Ann>, Pos),
    Apply(String, Option<Ann>, Vec<Raw>, Pos),
    Cond(Box<Raw>, Box<Raw>, Box<Raw>),
}

#[derive(Debug, Clone)]
struct RawEq {
    name: String,
    ann: Option<Ann>,
    params: Vec<(String, Pos)>,
    body: Raw,
    pos: Pos,
}

struct Parser<'a> {
    toks: &'a [(Tok, Pos)],
    at: usize,
    end: Pos,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [(Tok, Pos)], end: Pos) -> Self {
        Parser { toks, at: 0, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::Syntax {
            line: p.line,
            col: p.col,
            msg: msg.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Num(n)) => format!("`{n}`"),
            Some(t) => format!(
                "`{}`",
                match t {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Comma => ",",
                    Tok::Eq => "=",
                    Tok::Colon => ":",
                    _ => "/",
                }
            ),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", self.describe()))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected `{kw}`, found {}", self.describe()))
        }
    }

    fn done(&self) -> Result<()> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            self.err(format!("unexpected {}", self.describe()))
        }
    }

    fn name(&mut self) -> Result<(String, Pos)> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.at += 1;
                Ok((s, pos))
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn annotation(&mut self) -> Result<Option<Ann>> {
        if self.peek() != Some(&Tok::Colon) {
            return Ok(None);
        }
        self.at += 1;
        let sort = match self.peek() {
            Some(Tok::Ident(s)) if s == "bool" => Sort::Bool,
            Some(Tok::Ident(s)) if s == "ind" => Sort::Ind,
            _ => return self.err(format!("expected `bool` or `ind`, found {}", self.describe())),
        };
        self.at += 1;
        let mut arity = None;
        if self.peek() == Some(&Tok::Slash) {
            self.at += 1;
            match self.peek() {
                Some(Tok::Num(n)) => {
                    arity = Some(*n);
                    self.at += 1;
                }
                _ => return self.err(format!("expected an arity, found {}", self.describe())),
            }
        }
        Ok(Some(Ann { sort, arity }))
    }

    fn term(&mut self) -> Result<Raw> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "true" => {
                self.at += 1;
                Ok(Raw::True)
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.at += 1;
                Ok(Raw::False)
            }
            Some(Tok::Ident(s)) if s == "if" => {
                self.at += 1;
                let c = self.term()?;
                self.keyword("then")?;
                let a = self.term()?;
                self.keyword("else")?;
                let b = self.term()?;
                Ok(Raw::Cond(Box::new(c), Box::new(a), Box::new(b)))
            }
            _ => {
                let (name, pos) = self.name()?;
                let ann = self.annotation()?;
                if self.peek() != Some(&Tok::LParen) {
                    return Ok(Raw::Name(name, ann, pos));
                }
                self.at += 1;
                let mut args = Vec::new();
                if self.peek() != Some(&Tok::RParen) {
                    loop {
                        args.push(self.term()?);
                        if self.peek() == Some(&Tok::Comma) {
                            self.at += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                Ok(Raw::Apply(name, ann, args, pos))
            }
        }
    }

    fn name_list(&mut self) -> Result<Vec<(String, Pos)>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            loop {
                out.push(self.name()?);
                if self.peek() == Some(&Tok::Comma) {
                    self.at += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(out)
    }

    fn equation(&mut self) -> Result<RawEq> {
        let (name, pos) = self.name()?;
        let ann = self.annotation()?;
        let params = self.name_list()?;
        self.expect(Tok::Eq, "`=`")?;
        let body = self.term()?;
        Ok(RawEq {
            name,
            ann,
            params,
            body,
            pos,
        })
    }

    fn body(&mut self) -> Result<Vec<RawEq>> {
        self.keyword("where")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut eqs = Vec::new();
        if self.peek() != Some(&Tok::RBrace) {
            loop {
                eqs.push(self.equation()?);
                if self.peek() == Some(&Tok::Comma) {
                    self.at += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace, "`,` or `}`")?;
        self.done()?;
        Ok(eqs)
    }
}

fn end_pos(text: &str) -> Pos {
    let line = text.matches('\n').count() + 1;
    let col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, col }
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Ind,
    Fn(usize),
}

/// Name resolution and sort inference over one parse unit.
struct Resolver<'s> {
    sig: &'s Signature,
    kinds: HashMap<String, (Kind, Pos)>,
    order: Vec<String>,
    anns: Vec<(String, Ann, Pos)>,
    ind: HashMap<String, u32>,
    fns: HashMap<String, u32>,
}

fn located(e: Error, p: Pos) -> Error {
    e.at(p.line, p.col)
}

impl<'s> Resolver<'s> {
    fn new(sig: &'s Signature) -> Self {
        Resolver {
            sig,
            kinds: HashMap::new(),
            order: Vec::new(),
            anns: Vec::new(),
            ind: HashMap::new(),
            fns: HashMap::new(),
        }
    }

    fn note(&mut self, name: &str, kind: Kind, pos: Pos) -> Result<()> {
        if let Some((k, _)) = self.kinds.get(name) {
            if *k == kind {
                return Ok(());
            }
            let e = match (*k, kind) {
                (Kind::Fn(a), Kind::Fn(b)) => Error::ArityMismatch {
                    name: name.into(),
                    expected: a,
                    found: b,
                },
                _ => Error::SortMismatch(format!(
                    "`{name}` is used both as an individual and as a function variable"
                )),
            };
            return Err(located(e, pos));
        }
        self.kinds.insert(name.into(), (kind, pos));
        self.order.push(name.into());
        Ok(())
    }

    fn symbol_use(&self, name: &str, n: usize, pos: Pos) -> Result<bool> {
        match self.sig.get(name) {
            Some(f) if f.arity != n => Err(located(
                Error::ArityMismatch {
                    name: name.into(),
                    expected: f.arity,
                    found: n,
                },
                pos,
            )),
            Some(_) => Ok(true),
            None => Ok(false),
        }
    }

    fn collect(&mut self, r: &Raw) -> Result<()> {
        match r {
            Raw::True | Raw::False => Ok(()),
            Raw::Name(name, ann, pos) => {
                if self.symbol_use(name, 0, *pos)? {
                    return self.no_annotation(name, ann, *pos);
                }
                if ann.is_some() {
                    // an annotated bare name can only be a nullary function variable
                    return Err(located(
                        Error::SortMismatch(format!("individual variable `{name}` cannot be annotated")),
                        *pos,
                    ));
                }
                self.note(name, Kind::Ind, *pos)
            }
            Raw::Apply(name, ann, args, pos) => {
                if self.symbol_use(name, args.len(), *pos)? {
                    self.no_annotation(name, ann, *pos)?;
                } else {
                    self.note(name, Kind::Fn(args.len()), *pos)?;
                    self.annotate(name, ann, args.len(), *pos)?;
                }
                args.iter().try_for_each(|a| self.collect(a))
            }
            Raw::Cond(a, b, c) => {
                self.collect(a)?;
                self.collect(b)?;
                self.collect(c)
            }
        }
    }

    fn no_annotation(&self, name: &str, ann: &Option<Ann>, pos: Pos) -> Result<()> {
        if ann.is_some() {
            return Err(located(
                Error::SortMismatch(format!("symbol `{name}` cannot be annotated")),
                pos,
            ));
        }
        Ok(())
    }

    fn annotate(&mut self, name: &str, ann: &Option<Ann>, arity: usize, pos: Pos) -> Result<()> {
        if let Some(a) = ann {
            if let Some(k) = a.arity {
                if k != arity {
                    return Err(located(
                        Error::ArityMismatch {
                            name: name.into(),
                            expected: k,
                            found: arity,
                        },
                        pos,
                    ));
                }
            }
            self.anns.push((name.into(), *a, pos));
        }
        Ok(())
    }

    fn collect_ind_binder(&mut self, name: &str, pos: Pos) -> Result<()> {
        if self.sig.get(name).is_some() {
            return Err(located(
                Error::SortMismatch(format!("symbol `{name}` cannot be bound as a variable")),
                pos,
            ));
        }
        self.note(name, Kind::Ind, pos)
    }

    /// Gives explicit spellings `v<k>`/`p<k>` their index; other names get the least unused one.
    fn assign_indices(&mut self) {
        let explicit = |name: &str, prefix: char| -> Option<u32> {
            let rest = name.strip_prefix(prefix)?;
            if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            rest.parse().ok()
        };
        let mut used_ind = HashSet::new();
        let mut used_fn = HashSet::new();
        for name in &self.order {
            match self.kinds[name].0 {
                Kind::Ind => {
                    if let Some(i) = explicit(name, 'v') {
                        used_ind.insert(i);
                        self.ind.insert(name.clone(), i);
                    }
                }
                Kind::Fn(_) => {
                    if let Some(i) = explicit(name, 'p') {
                        used_fn.insert(i);
                        self.fns.insert(name.clone(), i);
                    }
                }
            }
        }
        let (mut next_ind, mut next_fn) = (0u32, 0u32);
        for name in &self.order {
            match self.kinds[name].0 {
                Kind::Ind if !self.ind.contains_key(name) => {
                    while used_ind.contains(&next_ind) {
                        next_ind += 1;
                    }
                    used_ind.insert(next_ind);
                    self.ind.insert(name.clone(), next_ind);
                }
                Kind::Fn(_) if !self.fns.contains_key(name) => {
                    while used_fn.contains(&next_fn) {
                        next_fn += 1;
                    }
                    used_fn.insert(next_fn);
                    self.fns.insert(name.clone(), next_fn);
                }
                _ => {}
            }
        }
    }

    fn fn_var(&self, name: &str) -> FnVar {
        let Kind::Fn(arity) = self.kinds[name].0 else {
            unreachable!()
        };
        FnVar::new(self.fns[name], Sort::Ind, arity as u32)
    }

    /// Builds a term whose function variables carry a provisional sort.
    fn build(&self, r: &Raw) -> Term {
        match r {
            Raw::True => Term::True,
            Raw::False => Term::False,
            Raw::Name(name, _, _) => match self.sig.get(name) {
                Some(f) => Term::Sym(f.clone(), Vec::new()),
                None => Term::Var(IndVar(self.ind[name])),
            },
            Raw::Apply(name, _, args, _) => {
                let args = args.iter().map(|a| self.build(a)).collect();
                match self.sig.get(name) {
                    Some(f) => Term::Sym(f.clone(), args),
                    None => Term::App(self.fn_var(name), args),
                }
            }
            Raw::Cond(a, b, c) => Term::cond(self.build(a), self.build(b), self.build(c)),
        }
    }

    fn unifier(&self) -> Result<Unifier> {
        let mut u = Unifier::new();
        for (name, ann, pos) in &self.anns {
            let n = u.fn_node(self.fns[name]);
            u.union(n, Unifier::sort_node(ann.sort)).map_err(|_| {
                located(
                    Error::SortMismatch(format!("conflicting sort annotations for `{name}`")),
                    *pos,
                )
            })?;
        }
        Ok(u)
    }
}

fn walk(u: &mut Unifier, t: &Term) -> Result<usize> {
    u.walk(t).map_err(|bad| {
        Error::SortMismatch(format!(
            "`{}` is used at a position requiring the other sort",
            super::print_term(bad)
        ))
    })
}

fn fix_sorts(u: &mut Unifier, t: &Term) -> Term {
    match t {
        Term::App(p, args) => Term::App(
            FnVar::new(p.index, u.fn_sort(p.index), p.arity),
            args.iter().map(|a| fix_sorts(u, a)).collect(),
        ),
        Term::Sym(f, args) => Term::Sym(f.clone(), args.iter().map(|a| fix_sorts(u, a)).collect()),
        Term::Cond(a, b, c) => Term::cond(fix_sorts(u, a), fix_sorts(u, b), fix_sorts(u, c)),
        t => t.clone(),
    }
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks, end_pos(text));
    let raw = p.term()?;
    p.done()?;
    let mut r = Resolver::new(sig);
    r.collect(&raw)?;
    r.assign_indices();
    let t = r.build(&raw);
    let mut u = r.unifier()?;
    walk(&mut u, &t)?;
    Ok(fix_sorts(&mut u, &t))
}

/// Parses `lhs = rhs` with one shared variable namespace.
pub fn parse_identity(text: &str, sig: &Signature) -> Result<(Term, Term)> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks, end_pos(text));
    let lhs = p.term()?;
    p.expect(Tok::Eq, "`=`")?;
    let rhs = p.term()?;
    p.done()?;
    let mut r = Resolver::new(sig);
    r.collect(&lhs)?;
    r.collect(&rhs)?;
    r.assign_indices();
    let (l, rt) = (r.build(&lhs), r.build(&rhs));
    let mut u = r.unifier()?;
    let nl = walk(&mut u, &l)?;
    let nr = walk(&mut u, &rt)?;
    u.union(nl, nr)
        .map_err(|_| Error::SortMismatch("the two sides of the identity differ in sort".into()))?;
    Ok((fix_sorts(&mut u, &l), fix_sorts(&mut u, &rt)))
}

fn matching_open(toks: &[(Tok, Pos)], close: usize) -> Option<usize> {
    let mut depth = 0usize;
    for i in (0..=close).rev() {
        match toks[i].0 {
            Tok::RParen => depth += 1,
            Tok::LParen => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Parses an extended program `head (x, ...) where { p(x, ...) = body, ... }`.
/// The free-variable list may be omitted when it is empty.
pub fn parse_program(text: &str, sig: &Signature) -> Result<Program> {
    let toks = lex(text)?;
    let end = end_pos(text);
    let Some(k) = toks
        .iter()
        .position(|t| matches!(&t.0, Tok::Ident(s) if s == "where"))
    else {
        let mut p = Parser::new(&toks, end);
        p.at = toks.len();
        return p.err("expected `where`");
    };
    let with_list = (k > 0 && toks[k - 1].0 == Tok::RParen)
        .then(|| matching_open(&toks, k - 1))
        .flatten()
        .filter(|&m| m > 0);
    let first = match with_list {
        Some(m) => program_from(&toks, m, Some(k), end, sig),
        None => program_from(&toks, k, None, end, sig),
    };
    match (first, with_list) {
        (Ok(p), _) => Ok(p),
        (Err(e), Some(_)) => program_from(&toks, k, None, end, sig).map_err(|_| e),
        (Err(e), None) => Err(e),
    }
}

/// `head_end` bounds the head tokens; `list_end` is the `where` index when a variable list follows.
fn program_from(
    toks: &[(Tok, Pos)],
    head_end: usize,
    list_end: Option<usize>,
    end: Pos,
    sig: &Signature,
) -> Result<Program> {
    let head_end_pos = toks.get(head_end).map_or(end, |t| t.1);
    let mut hp = Parser::new(&toks[..head_end], head_end_pos);
    let head = hp.term()?;
    hp.done()?;
    let mut p = Parser::new(toks, end);
    p.at = head_end;
    let free = if list_end.is_some() {
        p.name_list()?
    } else {
        Vec::new()
    };
    let eqs = p.body()?;

    let mut r = Resolver::new(sig);
    for (name, pos) in &free {
        r.collect_ind_binder(name, *pos)?;
    }
    r.collect(&head)?;
    for eq in &eqs {
        if r.sig.get(&eq.name).is_some() {
            return Err(located(
                Error::SortMismatch(format!("symbol `{}` cannot be defined by an equation", eq.name)),
                eq.pos,
            ));
        }
        r.note(&eq.name, Kind::Fn(eq.params.len()), eq.pos)?;
        r.annotate(&eq.name, &eq.ann, eq.params.len(), eq.pos)?;
        for (name, pos) in &eq.params {
            r.collect_ind_binder(name, *pos)?;
        }
        r.collect(&eq.body)?;
    }
    r.assign_indices();

    let mut defined = HashSet::new();
    for eq in &eqs {
        if !defined.insert(eq.name.as_str()) {
            return Err(located(Error::DuplicateDefinition(eq.name.clone()), eq.pos));
        }
    }
    let mut seen = HashSet::new();
    for (name, pos) in &free {
        if !seen.insert(name) {
            return Err(located(
                Error::InvalidProgram(format!("`{name}` repeated in the free-variable list")),
                *pos,
            ));
        }
    }
    check_scope(&head, &free, &defined, sig)?;
    for eq in &eqs {
        let mut seen = HashSet::new();
        for (name, pos) in &eq.params {
            if !seen.insert(name) {
                return Err(located(
                    Error::InvalidProgram(format!("parameter `{name}` repeated")),
                    *pos,
                ));
            }
        }
        check_scope(&eq.body, &eq.params, &defined, sig)?;
    }

    let head_t = r.build(&head);
    let built: Vec<(FnVar, Vec<IndVar>, Term)> = eqs
        .iter()
        .map(|eq| {
            (
                r.fn_var(&eq.name),
                eq.params.iter().map(|(n, _)| IndVar(r.ind[n])).collect(),
                r.build(&eq.body),
            )
        })
        .collect();
    let mut u = r.unifier()?;
    walk(&mut u, &head_t).map_err(|e| located(e, toks[0].1))?;
    for ((var, _, body), eq) in built.iter().zip(&eqs) {
        let nb = walk(&mut u, body).map_err(|e| located(e, eq.pos))?;
        let nv = u.fn_node(var.index);
        u.union(nv, nb).map_err(|_| {
            located(
                Error::SortMismatch(format!("`{}` and its body differ in sort", eq.name)),
                eq.pos,
            )
        })?;
    }
    let equations = built
        .iter()
        .map(|(var, params, body)| Equation {
            var: FnVar::new(var.index, u.fn_sort(var.index), var.arity),
            params: params.clone(),
            body: fix_sorts(&mut u, body),
        })
        .collect();
    let free_vars = free.iter().map(|(n, _)| IndVar(r.ind[n])).collect();
    Program::new(fix_sorts(&mut u, &head_t), free_vars, equations)
}

fn check_scope(
    r: &Raw,
    bound: &[(String, Pos)],
    defined: &HashSet<&str>,
    sig: &Signature,
) -> Result<()> {
    match r {
        Raw::True | Raw::False => Ok(()),
        Raw::Name(name, _, pos) => {
            if bound.iter().any(|(b, _)| b == name) || sig.get(name).is_some() {
                Ok(())
            } else {
                Err(located(Error::UnboundVariable(name.clone()), *pos))
            }
        }
        Raw::Apply(name, _, args, pos) => {
            if !defined.contains(name.as_str()) && sig.get(name).is_none() {
                return Err(located(Error::FreeFunctionVariable(name.clone()), *pos));
            }
            args.iter().try_for_each(|a| check_scope(a, bound, defined, sig))
        }
        Raw::Cond(a, b, c) => {
            check_scope(a, bound, defined, sig)?;
            check_scope(b, bound, defined, sig)?;
            check_scope(c, bound, defined, sig)
        }
    }
}
