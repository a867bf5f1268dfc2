//! Line-oriented text formats.
//!
//! One declaration per line; a token starting with `#` at the start of a
//! line or after whitespace begins a comment. Marker names such as `p#1`
//! are ordinary tokens.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::constructions::{RightLinearBody, RightLinearGrammar, RightLinearRule};
use crate::engine::{DerivationTrace, TraceStep};
use crate::model::{is_valid_label, ActionKind, Configuration, ControlledRule, GcidSystem, InsDelAction};
use crate::sgnf::{GrammarRule, SgnfGrammar};
use crate::symbol::{Symbol, SymbolString, EMPTY_WORD};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{file}:{line}:{column}: {message}")]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

struct Line<'a> {
    no: usize,
    toks: Vec<Tok<'a>>,
    /// Column just past the last token, for "missing token" errors.
    end: usize,
}

fn strip_comment(line: &str) -> &str {
    let mut prev_ws = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_ws {
            return &line[..i];
        }
        prev_ws = c.is_whitespace();
    }
    line
}

fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        let mut toks = Vec::new();
        let mut start = None;
        for (j, c) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    toks.push(Tok { text: &body[s..j], col: body[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            let end = body.trim_end().chars().count() + 1;
            out.push(Line { no: i + 1, toks, end });
        }
    }
    out
}

struct Ctx<'f> {
    file: &'f str,
}

impl Ctx<'_> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { file: self.file.to_string(), line, column, message: message.into() }
    }

    fn at(&self, line: &Line<'_>, tok: &Tok<'_>, message: impl Into<String>) -> ParseError {
        self.err(line.no, tok.col, message)
    }

    fn symbol(&self, line: &Line<'_>, tok: &Tok<'_>) -> Result<Symbol, ParseError> {
        Symbol::new(tok.text).map_err(|e| self.at(line, tok, e.to_string()))
    }

    fn symbols(&self, line: &Line<'_>, toks: &[Tok<'_>]) -> Result<SymbolString, ParseError> {
        if toks.len() == 1 && toks[0].text == EMPTY_WORD {
            return Ok(SymbolString::empty());
        }
        toks.iter().map(|t| self.symbol(line, t)).collect::<Result<Vec<_>, _>>().map(SymbolString)
    }

    fn index(&self, line: &Line<'_>, tok: &Tok<'_>) -> Result<usize, ParseError> {
        tok.text
            .parse::<usize>()
            .map_err(|_| self.at(line, tok, format!("expected a component index, found `{}`", tok.text)))
    }

    fn expect(&self, line: &Line<'_>, i: usize, want: &str) -> Result<(), ParseError> {
        match line.toks.get(i) {
            Some(t) if t.text == want => Ok(()),
            Some(t) => Err(self.at(line, t, format!("expected `{want}`, found `{}`", t.text))),
            None => Err(self.err(line.no, line.end, format!("expected `{want}`"))),
        }
    }

    fn label(&self, line: &Line<'_>, i: usize, seen: &mut HashSet<String>) -> Result<String, ParseError> {
        let Some(t) = line.toks.get(i) else {
            return Err(self.err(line.no, line.end, "expected a rule label"));
        };
        if !is_valid_label(t.text) || t.text == "->" {
            return Err(self.at(line, t, format!("invalid rule label `{}`", t.text)));
        }
        if !seen.insert(t.text.to_string()) {
            return Err(self.at(line, t, format!("duplicate rule label `{}`", t.text)));
        }
        Ok(t.text.to_string())
    }

    fn header<'a>(&self, ls: &'a [Line<'a>], want: &str) -> Result<&'a [Line<'a>], ParseError> {
        match ls.first() {
            Some(l) if l.toks.len() == 1 && l.toks[0].text == want => Ok(&ls[1..]),
            Some(l) => Err(self.at(l, &l.toks[0], format!("expected header `{want}`"))),
            None => Err(self.err(1, 1, format!("empty input, expected header `{want}`"))),
        }
    }
}

fn once<T>(ctx: &Ctx<'_>, slot: &mut Option<T>, v: T, line: &Line<'_>) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(ctx.at(line, &line.toks[0], format!("duplicate `{}` declaration", line.toks[0].text)));
    }
    *slot = Some(v);
    Ok(())
}

fn single<'a>(ctx: &Ctx<'_>, line: &Line<'a>) -> Result<Tok<'a>, ParseError> {
    match line.toks.len() {
        2 => Ok(line.toks[1]),
        1 => Err(ctx.err(line.no, line.end, "missing value")),
        _ => Err(ctx.at(line, &line.toks[2], "unexpected token")),
    }
}

// ---------------------------------------------------------------------------
// GCID systems.

pub fn parse_gcid(text: &str, file: &str) -> Result<GcidSystem, ParseError> {
    let ctx = Ctx { file };
    let all = lines(text);
    let body = ctx.header(&all, "gcid")?;
    let mut components = None;
    let mut alphabet: Option<Vec<Symbol>> = None;
    let mut terminals: Option<Vec<Symbol>> = None;
    let mut axioms = Vec::new();
    let mut initial = None;
    let mut finals: Option<Vec<(usize, usize, usize)>> = None;
    let mut rules = Vec::new();
    let mut labels = HashSet::new();
    // (rule index, line, column of source, column of target)
    let mut rule_pos = Vec::new();
    for line in body {
        let key = line.toks[0];
        match key.text {
            "components" => {
                let t = single(&ctx, line)?;
                let k = ctx.index(line, &t)?;
                if k == 0 {
                    return Err(ctx.at(line, &t, "at least one component is required"));
                }
                once(&ctx, &mut components, (k, line.no, t.col), line)?;
            }
            "alphabet" => {
                let s = ctx.symbols(line, &line.toks[1..])?;
                once(&ctx, &mut alphabet, s.0, line)?;
            }
            "terminals" => {
                let s = ctx.symbols(line, &line.toks[1..])?;
                once(&ctx, &mut terminals, s.0, line)?;
            }
            "axiom" => {
                if line.toks.len() < 2 {
                    return Err(ctx.err(line.no, line.end, "missing axiom (use <empty> for λ)"));
                }
                axioms.push(ctx.symbols(line, &line.toks[1..])?);
            }
            "initial" => {
                let t = single(&ctx, line)?;
                let i = ctx.index(line, &t)?;
                once(&ctx, &mut initial, (i, line.no, t.col), line)?;
            }
            "final" => {
                if line.toks.len() < 2 {
                    return Err(ctx.err(line.no, line.end, "missing final component"));
                }
                let mut fs = Vec::new();
                for t in &line.toks[1..] {
                    fs.push((ctx.index(line, t)?, line.no, t.col));
                }
                once(&ctx, &mut finals, fs, line)?;
            }
            "rule" => {
                let (rule, src_col, tgt_col) = parse_gcid_rule(&ctx, line, &mut labels)?;
                rule_pos.push((line.no, src_col, tgt_col));
                rules.push(rule);
            }
            other => return Err(ctx.at(line, &key, format!("unknown key `{other}`"))),
        }
    }
    let end = all.last().map_or(1, |l| l.no);
    let missing = |what: &str| ctx.err(end, 1, format!("missing `{what}` declaration"));
    let (k, _, _) = components.ok_or_else(|| missing("components"))?;
    let alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
    let terminals = terminals.ok_or_else(|| missing("terminals"))?;
    if axioms.is_empty() {
        return Err(missing("axiom"));
    }
    let (initial, il, ic) = initial.ok_or_else(|| missing("initial"))?;
    let finals = finals.ok_or_else(|| missing("final"))?;
    let range = |v: usize, l: usize, c: usize, what: &str| {
        if v == 0 || v > k {
            Err(ctx.err(l, c, format!("{what} {v} out of range 1..={k}")))
        } else {
            Ok(v)
        }
    };
    range(initial, il, ic, "initial component")?;
    for &(f, l, c) in &finals {
        range(f, l, c, "final component")?;
    }
    for (r, &(l, sc, tc)) in rules.iter().zip(&rule_pos) {
        range(r.source, l, sc, "source component")?;
        range(r.target, l, tc, "target component")?;
    }
    Ok(GcidSystem {
        components: k,
        alphabet,
        terminals,
        axioms,
        initial,
        finals: finals.into_iter().map(|(f, _, _)| f).collect(),
        rules,
    })
}

fn parse_gcid_rule(
    ctx: &Ctx<'_>,
    line: &Line<'_>,
    labels: &mut HashSet<String>,
) -> Result<(ControlledRule, usize, usize), ParseError> {
    // rule L : i -> j ins|del | u . body . v |
    let label = ctx.label(line, 1, labels)?;
    ctx.expect(line, 2, ":")?;
    let get = |i: usize, what: &str| line.toks.get(i).copied().ok_or_else(|| ctx.err(line.no, line.end, format!("expected {what}")));
    let src = get(3, "source component")?;
    let source = ctx.index(line, &src)?;
    ctx.expect(line, 4, "->")?;
    let tgt = get(5, "target component")?;
    let target = ctx.index(line, &tgt)?;
    let kt = get(6, "`ins` or `del`")?;
    let kind = match kt.text {
        "ins" => ActionKind::Insertion,
        "del" => ActionKind::Deletion,
        other => return Err(ctx.at(line, &kt, format!("expected `ins` or `del`, found `{other}`"))),
    };
    ctx.expect(line, 7, "|")?;
    let rest = &line.toks[8..];
    let close = rest
        .iter()
        .position(|t| t.text == "|")
        .ok_or_else(|| ctx.err(line.no, line.end, "expected closing `|`"))?;
    if let Some(extra) = rest.get(close + 1) {
        return Err(ctx.at(line, extra, "unexpected token after closing `|`"));
    }
    let fields: Vec<&[Tok<'_>]> = rest[..close].split(|t| t.text == ".").collect();
    if fields.len() != 3 {
        let at = rest.get(close).copied().unwrap_or(kt);
        return Err(ctx.at(line, &at, format!("expected `u . body . v`, found {} field(s)", fields.len())));
    }
    let left = ctx.symbols(line, fields[0])?;
    let body = ctx.symbols(line, fields[1])?;
    let right = ctx.symbols(line, fields[2])?;
    if body.is_empty() {
        return Err(ctx.at(line, &line.toks[7], "rule body must be non-empty"));
    }
    let action = InsDelAction { kind, left, body, right };
    Ok((ControlledRule::new(label, source, action, target), src.col, tgt.col))
}

fn push_symbols(out: &mut String, key: &str, syms: &[Symbol]) {
    out.push_str(key);
    for s in syms {
        out.push(' ');
        out.push_str(s.as_str());
    }
    out.push('\n');
}

fn field(s: &SymbolString) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("{s} ")
    }
}

pub fn write_gcid(sys: &GcidSystem) -> String {
    let mut out = String::from("gcid\n");
    let _ = writeln!(out, "components {}", sys.components);
    push_symbols(&mut out, "alphabet", &sys.alphabet);
    push_symbols(&mut out, "terminals", &sys.terminals);
    for a in &sys.axioms {
        let _ = writeln!(out, "axiom {}", a.render());
    }
    let _ = writeln!(out, "initial {}", sys.initial);
    out.push_str("final");
    for f in &sys.finals {
        let _ = write!(out, " {f}");
    }
    out.push('\n');
    for r in &sys.rules {
        let a = &r.action;
        let _ = writeln!(
            out,
            "rule {} : {} -> {} {} | {}. {}. {}|",
            r.label,
            r.source,
            r.target,
            a.kind.keyword(),
            field(&a.left),
            field(&a.body),
            field(&a.right)
        );
    }
    out
}

// ---------------------------------------------------------------------------
// SGNF grammars.

pub fn parse_sgnf(text: &str, file: &str) -> Result<SgnfGrammar, ParseError> {
    let ctx = Ctx { file };
    let all = lines(text);
    let body = ctx.header(&all, "sgnf")?;
    let mut nprime = None;
    let mut terminals = None;
    let mut start = None;
    let mut s_prime = None;
    let mut rules = Vec::new();
    let mut labels = HashSet::new();
    for line in body {
        let key = line.toks[0];
        match key.text {
            "nprime" => {
                let s = ctx.symbols(line, &line.toks[1..])?;
                once(&ctx, &mut nprime, s.0, line)?;
            }
            "terminals" => {
                let s = ctx.symbols(line, &line.toks[1..])?;
                once(&ctx, &mut terminals, s.0, line)?;
            }
            "start" => {
                let t = single(&ctx, line)?;
                let s = ctx.symbol(line, &t)?;
                once(&ctx, &mut start, s, line)?;
            }
            "center" => {
                let t = single(&ctx, line)?;
                let s = ctx.symbol(line, &t)?;
                once(&ctx, &mut s_prime, s, line)?;
            }
            "rule" => {
                let (label, lhs, rhs) = parse_production(&ctx, line, &mut labels)?;
                rules.push(GrammarRule::new(label, lhs, rhs));
            }
            other => return Err(ctx.at(line, &key, format!("unknown key `{other}`"))),
        }
    }
    let end = all.last().map_or(1, |l| l.no);
    let nprime = nprime.ok_or_else(|| ctx.err(end, 1, "missing `nprime` declaration"))?;
    let terminals = terminals.ok_or_else(|| ctx.err(end, 1, "missing `terminals` declaration"))?;
    let mut g = SgnfGrammar::new(nprime, terminals, rules);
    if let Some(s) = start {
        g.start = s;
    }
    if let Some(s) = s_prime {
        g.s_prime = s;
    }
    Ok(g)
}

/// `rule L : lhs -> rhs`, where an empty or `<empty>` rhs is λ.
fn parse_production(
    ctx: &Ctx<'_>,
    line: &Line<'_>,
    labels: &mut HashSet<String>,
) -> Result<(String, SymbolString, SymbolString), ParseError> {
    let label = ctx.label(line, 1, labels)?;
    ctx.expect(line, 2, ":")?;
    let rest = &line.toks[3..];
    let arrow = rest
        .iter()
        .position(|t| t.text == "->")
        .ok_or_else(|| ctx.err(line.no, line.end, "expected `->`"))?;
    if arrow == 0 {
        return Err(ctx.at(line, &rest[0], "empty left-hand side"));
    }
    let lhs = ctx.symbols(line, &rest[..arrow])?;
    let rhs = ctx.symbols(line, &rest[arrow + 1..])?;
    Ok((label, lhs, rhs))
}

fn write_production(out: &mut String, label: &str, lhs: &SymbolString, rhs: &SymbolString) {
    let _ = write!(out, "rule {label} : {lhs} ->");
    if !rhs.is_empty() {
        let _ = write!(out, " {rhs}");
    }
    out.push('\n');
}

pub fn write_sgnf(g: &SgnfGrammar) -> String {
    let mut out = String::from("sgnf\n");
    push_symbols(&mut out, "nprime", &g.nprime);
    push_symbols(&mut out, "terminals", &g.terminals);
    let _ = writeln!(out, "start {}", g.start);
    let _ = writeln!(out, "center {}", g.s_prime);
    for r in &g.rules {
        write_production(&mut out, &r.label, &r.lhs, &r.rhs);
    }
    out
}

// ---------------------------------------------------------------------------
// Right-linear grammars.

pub fn parse_regular(text: &str, file: &str) -> Result<RightLinearGrammar, ParseError> {
    let ctx = Ctx { file };
    let all = lines(text);
    let body = ctx.header(&all, "regular")?;
    let mut nonterminals: Option<Vec<Symbol>> = None;
    let mut terminals: Option<Vec<Symbol>> = None;
    let mut start = None;
    let mut rules = Vec::new();
    let mut labels = HashSet::new();
    for line in body {
        let key = line.toks[0];
        match key.text {
            "nonterminals" => {
                let s = ctx.symbols(line, &line.toks[1..])?;
                once(&ctx, &mut nonterminals, s.0, line)?;
            }
            "terminals" => {
                let s = ctx.symbols(line, &line.toks[1..])?;
                once(&ctx, &mut terminals, s.0, line)?;
            }
            "start" => {
                let t = single(&ctx, line)?;
                let s = ctx.symbol(line, &t)?;
                once(&ctx, &mut start, s, line)?;
            }
            "rule" => {
                let (label, lhs, rhs) = parse_production(&ctx, line, &mut labels)?;
                let at = line.toks[3];
                let [lhs] = lhs.0.as_slice() else {
                    return Err(ctx.at(line, &at, "left-hand side must be a single nonterminal"));
                };
                let body = match rhs.0.as_slice() {
                    [] => RightLinearBody::Erase,
                    [a, b] => RightLinearBody::Step(a.clone(), b.clone()),
                    _ => return Err(ctx.at(line, &at, "right-hand side must be `a B` or empty")),
                };
                rules.push(RightLinearRule { label, lhs: lhs.clone(), body });
            }
            other => return Err(ctx.at(line, &key, format!("unknown key `{other}`"))),
        }
    }
    let end = all.last().map_or(1, |l| l.no);
    let missing = |what: &str| ctx.err(end, 1, format!("missing `{what}` declaration"));
    let g = RightLinearGrammar {
        nonterminals: nonterminals.ok_or_else(|| missing("nonterminals"))?,
        terminals: terminals.ok_or_else(|| missing("terminals"))?,
        start: start.ok_or_else(|| missing("start"))?,
        rules,
    };
    g.validate().map_err(|m| ctx.err(end, 1, m))?;
    Ok(g)
}

pub fn write_regular(g: &RightLinearGrammar) -> String {
    let mut out = String::from("regular\n");
    push_symbols(&mut out, "nonterminals", &g.nonterminals);
    push_symbols(&mut out, "terminals", &g.terminals);
    let _ = writeln!(out, "start {}", g.start);
    for r in &g.rules {
        let rhs = match &r.body {
            RightLinearBody::Step(a, b) => SymbolString(vec![a.clone(), b.clone()]),
            RightLinearBody::Erase => SymbolString::empty(),
        };
        write_production(&mut out, &r.label, &SymbolString(vec![r.lhs.clone()]), &rhs);
    }
    out
}

// ---------------------------------------------------------------------------
// Traces: `label @ position` per line, optionally preceded by
// `start <component> : <tokens>`.

pub fn parse_trace(text: &str, file: &str) -> Result<(Option<Configuration>, Vec<TraceStep>), ParseError> {
    let ctx = Ctx { file };
    let mut start = None;
    let mut steps = Vec::new();
    for line in lines(text) {
        let first = line.toks[0];
        if first.text == "start" {
            if start.is_some() || !steps.is_empty() {
                return Err(ctx.at(&line, &first, "`start` must be the first declaration"));
            }
            let ct = line.toks.get(1).copied().ok_or_else(|| ctx.err(line.no, line.end, "expected a component"))?;
            let comp = ctx.index(&line, &ct)?;
            ctx.expect(&line, 2, ":")?;
            if line.toks.len() < 4 {
                return Err(ctx.err(line.no, line.end, "missing start string (use <empty> for λ)"));
            }
            let w = ctx.symbols(&line, &line.toks[3..])?;
            start = Some(Configuration::new(w, comp));
            continue;
        }
        if line.toks.len() != 3 {
            return Err(ctx.at(&line, &first, "expected `label @ position`"));
        }
        ctx.expect(&line, 1, "@")?;
        let pt = line.toks[2];
        let position = pt
            .text
            .parse::<usize>()
            .map_err(|_| ctx.at(&line, &pt, format!("expected a position, found `{}`", pt.text)))?;
        steps.push(TraceStep::new(first.text, position));
    }
    Ok((start, steps))
}

pub fn write_trace(trace: &DerivationTrace) -> String {
    let mut out = format!("start {} : {}\n", trace.start.component, trace.start.string.render());
    for s in &trace.steps {
        let _ = writeln!(out, "{s}");
    }
    out
}

/// One word per line, `<empty>` for λ.
pub fn write_words(words: &[SymbolString]) -> String {
    let mut out = String::new();
    for w in words {
        out.push_str(&w.render());
        out.push('\n');
    }
    out
}
