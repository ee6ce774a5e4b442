//! Statement and expression parser.

use std::collections::HashMap;
use std::sync::Arc;

use csl_core::algebra::{Poly, Rational, Var};
use csl_core::contact::BoundHint;
use csl_core::exterior::{Blade, Chart, ChartBuilder, DiffForm, VarKind};
use csl_core::psphere::lambda_names;
use num_bigint::BigInt;
use num_traits::Zero;

use super::lexer::{tokenize, Pos, Tok, Token};
use super::{is_reserved, parse_property, DslError, NamedForm, SpecFile};

/// Statement whose expression is parsed once the chart exists.
struct Deferred<'a> {
    target: String,
    pos: Pos,
    expr: &'a [Token],
}

struct HintDecl<'a> {
    name: String,
    pos: Pos,
    expr: &'a [Token],
    lo: Rational,
    hi: Rational,
    assumed: bool,
}

fn core_err(pos: Pos, e: csl_core::Error) -> DslError {
    DslError::at(pos, e.to_string())
}

fn ident(t: &Token) -> Option<&str> {
    match &t.tok {
        Tok::Ident(s) => Some(s),
        _ => None,
    }
}

fn expect_tok(toks: &[Token], i: usize, want: &Tok, end: Pos) -> Result<(), DslError> {
    match toks.get(i) {
        Some(t) if &t.tok == want => Ok(()),
        Some(t) => Err(DslError::at(t.pos, format!("expected {}, found {}", want.describe(), t.tok.describe()))),
        None => Err(DslError::at(end, format!("expected {}, found end of line", want.describe()))),
    }
}

fn expect_ident(toks: &[Token], i: usize, end: Pos) -> Result<(String, Pos), DslError> {
    match toks.get(i) {
        Some(t) => ident(t)
            .map(|s| (s.to_string(), t.pos))
            .ok_or_else(|| DslError::at(t.pos, format!("expected a name, found {}", t.tok.describe()))),
        None => Err(DslError::at(end, "expected a name, found end of line")),
    }
}

/// Names separated by optional commas.
fn name_list(toks: &[Token], end: Pos) -> Result<Vec<(String, Pos)>, DslError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if toks[i].tok == Tok::Comma && !out.is_empty() {
            i += 1;
            continue;
        }
        out.push(expect_ident(toks, i, end)?);
        i += 1;
    }
    if out.is_empty() {
        return Err(DslError::at(end, "expected at least one name"));
    }
    Ok(out)
}

fn signed_rational(toks: &[Token], i: &mut usize, end: Pos) -> Result<Rational, DslError> {
    let neg = toks.get(*i).is_some_and(|t| t.tok == Tok::Minus);
    if neg {
        *i += 1;
    }
    let int = |j: usize| -> Result<BigInt, DslError> {
        match toks.get(j) {
            Some(Token { tok: Tok::Int(n), .. }) => Ok(n.clone()),
            Some(t) => Err(DslError::at(t.pos, format!("expected a number, found {}", t.tok.describe()))),
            None => Err(DslError::at(end, "expected a number")),
        }
    };
    let num = int(*i)?;
    *i += 1;
    let mut value = Rational::from_integer(num);
    if toks.get(*i).is_some_and(|t| t.tok == Tok::Slash) {
        let pos = toks[*i].pos;
        let den = int(*i + 1)?;
        if den.is_zero() {
            return Err(DslError::at(pos, "division by zero"));
        }
        value /= Rational::from_integer(den);
        *i += 2;
    }
    Ok(if neg { -value } else { value })
}

fn check_new_name(name: &str, pos: Pos, taken: &HashMap<String, Pos>) -> Result<(), DslError> {
    if is_reserved(name) {
        return Err(DslError::at(pos, format!("`{name}` is reserved")));
    }
    if let Some(first) = taken.get(name) {
        return Err(DslError::at(pos, format!("`{name}` is already declared on line {}", first.line)));
    }
    Ok(())
}

pub fn parse_spec(text: &str) -> Result<SpecFile, DslError> {
    let tokens = tokenize(text)?;
    let raw: Vec<&str> = text.lines().collect();
    let mut lines: Vec<&[Token]> = Vec::new();
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        if matches!(t.tok, Tok::Newline | Tok::Eof) {
            if i > start {
                lines.push(&tokens[start..i]);
            }
            start = i + 1;
        }
    }

    let mut builder: Option<(ChartBuilder, Pos)> = None;
    let mut sphere = false;
    let mut names: HashMap<String, Pos> = HashMap::new();
    let mut relations: Vec<(Vec<(String, Pos)>, Pos)> = Vec::new();
    let mut gen_diffs: Vec<Deferred> = Vec::new();
    let mut var_diffs: Vec<Deferred> = Vec::new();
    let mut forms: Vec<Deferred> = Vec::new();
    let mut family: Option<(Vec<(String, Pos)>, Pos)> = None;
    let mut scan: Option<Vec<(String, Pos)>> = None;
    let mut hints: Vec<HintDecl> = Vec::new();
    let mut expectations = Vec::new();

    for line in lines {
        let head = &line[0];
        let rest = &line[1..];
        let end = Pos { line: head.pos.line, col: raw.get(head.pos.line - 1).map_or(1, |r| r.chars().count() + 1) };
        let keyword = ident(head).ok_or_else(|| DslError::at(head.pos, format!("expected a statement, found {}", head.tok.describe())))?;
        if keyword != "chart" && builder.is_none() {
            return Err(DslError::at(head.pos, "the file must start with a `chart` statement"));
        }
        match keyword {
            "chart" => {
                if builder.is_some() {
                    return Err(DslError::at(head.pos, "only one chart per file"));
                }
                let text = raw[head.pos.line - 1].split('#').next().unwrap_or("");
                let words: Vec<&str> = text.split_whitespace().collect();
                match words.as_slice() {
                    [_, _] => {}
                    [_, _, "sphere"] => sphere = true,
                    _ => return Err(DslError::at(head.pos, "expected `chart <name>` or `chart <name> sphere`")),
                }
                builder = Some((ChartBuilder::new(words[1]), head.pos));
            }
            "vars" | "params" | "funcs" => {
                let b = &mut builder.as_mut().expect("checked above").0;
                for (n, pos) in name_list(rest, end)? {
                    check_new_name(&n, pos, &names)?;
                    names.insert(n.clone(), pos);
                    match keyword {
                        "vars" => b.coordinate(&n),
                        "params" => b.param(&n),
                        _ => b.func(&n),
                    };
                }
            }
            "gen" => {
                if rest.len() >= 2 && ident(&rest[1]) == Some("with") {
                    let (n, pos) = expect_ident(rest, 0, end)?;
                    check_new_name(&n, pos, &names)?;
                    names.insert(n.clone(), pos);
                    builder.as_mut().expect("checked above").0.generator(&n);
                    // with d ( n ) = expr
                    let at = |i: usize| rest.get(i).map(|t| t.pos).unwrap_or(end);
                    if ident(rest.get(2).unwrap_or(head)) != Some("d") || rest.len() < 7 {
                        return Err(DslError::at(at(2), format!("expected `d({n}) = <form>`")));
                    }
                    expect_tok(rest, 3, &Tok::LParen, end)?;
                    let (m, mpos) = expect_ident(rest, 4, end)?;
                    if m != n {
                        return Err(DslError::at(mpos, format!("expected `d({n})`")));
                    }
                    expect_tok(rest, 5, &Tok::RParen, end)?;
                    expect_tok(rest, 6, &Tok::Eq, end)?;
                    gen_diffs.push(Deferred { target: n, pos, expr: &rest[7..] });
                } else {
                    for (n, pos) in name_list(rest, end)? {
                        check_new_name(&n, pos, &names)?;
                        names.insert(n.clone(), pos);
                        builder.as_mut().expect("checked above").0.generator(&n);
                    }
                }
            }
            "let" => {
                if ident(rest.first().unwrap_or(head)) != Some("d") || rest.len() < 5 {
                    return Err(DslError::at(head.pos, "expected `let d(<function>) = <form>`"));
                }
                expect_tok(rest, 1, &Tok::LParen, end)?;
                let (n, pos) = expect_ident(rest, 2, end)?;
                expect_tok(rest, 3, &Tok::RParen, end)?;
                expect_tok(rest, 4, &Tok::Eq, end)?;
                var_diffs.push(Deferred { target: n, pos, expr: &rest[5..] });
            }
            "relation" => {
                let mut vars = Vec::new();
                let mut i = 0;
                loop {
                    vars.push(expect_ident(rest, i, end)?);
                    expect_tok(rest, i + 1, &Tok::Caret, end)?;
                    expect_tok(rest, i + 2, &Tok::Int(2.into()), end)?;
                    i += 3;
                    match rest.get(i).map(|t| &t.tok) {
                        Some(Tok::Plus) => i += 1,
                        Some(Tok::Eq) => break,
                        Some(other) => return Err(DslError::at(rest[i].pos, format!("expected `+` or `=`, found {}", other.describe()))),
                        None => return Err(DslError::at(end, "expected `= 1`")),
                    }
                }
                expect_tok(rest, i + 1, &Tok::Int(1.into()), end)?;
                if let Some(t) = rest.get(i + 2) {
                    return Err(DslError::at(t.pos, format!("unexpected {}", t.tok.describe())));
                }
                relations.push((vars, head.pos));
            }
            "form" => {
                let (n, pos) = expect_ident(rest, 0, end)?;
                check_new_name(&n, pos, &names)?;
                names.insert(n.clone(), pos);
                expect_tok(rest, 1, &Tok::Eq, end)?;
                forms.push(Deferred { target: n, pos, expr: &rest[2..] });
            }
            "family" => {
                if family.is_some() {
                    return Err(DslError::at(head.pos, "only one `family` line per file"));
                }
                family = Some((name_list(rest, end)?, head.pos));
            }
            "scan" => {
                if scan.is_some() {
                    return Err(DslError::at(head.pos, "only one `scan` line per file"));
                }
                scan = Some(name_list(rest, end)?);
            }
            "hint" => {
                let (n, pos) = expect_ident(rest, 0, end)?;
                expect_tok(rest, 1, &Tok::Eq, end)?;
                let in_at = rest.iter().position(|t| ident(t) == Some("in")).ok_or_else(|| DslError::at(end, "expected `in [lo, hi]`"))?;
                let mut i = in_at + 1;
                expect_tok(rest, i, &Tok::LBracket, end)?;
                i += 1;
                let lo = signed_rational(rest, &mut i, end)?;
                expect_tok(rest, i, &Tok::Comma, end)?;
                i += 1;
                let hi = signed_rational(rest, &mut i, end)?;
                expect_tok(rest, i, &Tok::RBracket, end)?;
                i += 1;
                let assumed = match rest.get(i) {
                    None => false,
                    Some(t) if ident(t) == Some("assumed") && i + 1 == rest.len() => true,
                    Some(t) => return Err(DslError::at(t.pos, format!("unexpected {}", t.tok.describe()))),
                };
                if lo >= hi {
                    return Err(DslError::at(rest[in_at].pos, "hint range must satisfy lo < hi"));
                }
                hints.push(HintDecl { name: n, pos, expr: &rest[2..in_at], lo, hi, assumed });
            }
            "expect" => {
                let (p, pos) = expect_ident(rest, 0, end)?;
                let property = parse_property(&p)
                    .ok_or_else(|| DslError::at(pos, format!("unknown property `{p}`; expected contact, psphere, taut or round")))?;
                let holds = match rest.len() {
                    1 => true,
                    3 => {
                        expect_tok(rest, 1, &Tok::Eq, end)?;
                        match ident(&rest[2]) {
                            Some("true") => true,
                            Some("false") => false,
                            _ => return Err(DslError::at(rest[2].pos, "expected `true` or `false`")),
                        }
                    }
                    _ => return Err(DslError::at(head.pos, "expected `expect <property> [= true|false]`")),
                };
                expectations.push((property, holds));
            }
            other => return Err(DslError::at(head.pos, format!("unknown statement `{other}`"))),
        }
    }

    let (mut builder, chart_pos) = builder.ok_or_else(|| DslError::at(Pos { line: 1, col: 1 }, "missing `chart` statement"))?;
    for (vars, _) in &relations {
        let mut group = Vec::new();
        for (n, vpos) in vars {
            group.push(builder.var(n).ok_or_else(|| DslError::at(*vpos, format!("undeclared variable `{n}`")))?);
        }
        builder.relation(group);
    }
    if sphere {
        let coords: Vec<Var> =
            builder.vars().iter().enumerate().filter(|(_, d)| d.kind == VarKind::Coordinate).map(|(i, _)| Var(i as u32)).collect();
        let idx = builder.groups().iter().position(|g| {
            let mut g = g.clone();
            g.sort();
            g == coords
        });
        let idx = idx.ok_or_else(|| DslError::at(chart_pos, "a sphere chart needs a relation over exactly its coordinates"))?;
        builder.sphere(idx);
    }
    let skeleton = builder.skeleton().map_err(|e| core_err(chart_pos, e))?;
    let no_forms = HashMap::new();
    for d in &var_diffs {
        let v = builder.var(&d.target).ok_or_else(|| DslError::at(d.pos, format!("undeclared variable `{}`", d.target)))?;
        let form = parse_expr(d.expr, &skeleton, &no_forms, d.pos)?;
        builder.set_var_differential(v, &form).map_err(|e| core_err(d.pos, e))?;
    }
    for d in &gen_diffs {
        let form = parse_expr(d.expr, &skeleton, &no_forms, d.pos)?;
        builder.set_gen_differential(&d.target, &form).map_err(|e| core_err(d.pos, e))?;
    }
    let chart = builder.build().map_err(|e| core_err(chart_pos, e))?;

    let mut named: HashMap<String, DiffForm> = HashMap::new();
    let mut out_forms = Vec::new();
    for d in &forms {
        let shadows_differential = d.target.strip_prefix('d').and_then(|r| chart.var(r)).is_some();
        if chart.generator(&d.target).is_some() || shadows_differential {
            return Err(DslError::at(d.pos, format!("form name `{}` clashes with a differential", d.target)));
        }
        let form = parse_expr(d.expr, &chart, &named, d.pos)?;
        named.insert(d.target.clone(), form.clone());
        out_forms.push(NamedForm { name: d.target.clone(), form });
    }

    let mut spec =
        SpecFile { chart: chart.clone(), forms: out_forms, family: Vec::new(), hints: Vec::new(), expectations, scan: Vec::new() };
    if let Some((list, _)) = &family {
        for (n, pos) in list {
            let f = spec.form(n).ok_or_else(|| DslError::at(*pos, format!("`{n}` is not a declared form")))?;
            if !f.is_homogeneous(1) || f.is_zero() {
                return Err(DslError::at(*pos, format!("family member `{n}` must be a nonzero 1-form")));
            }
        }
        spec.family = list.iter().map(|(n, _)| n.clone()).collect();
    }
    if let Some(list) = &scan {
        for (n, pos) in list {
            let f = spec.form(n).ok_or_else(|| DslError::at(*pos, format!("`{n}` is not a declared form")))?;
            if !(f.is_zero() || f.is_homogeneous(0)) {
                return Err(DslError::at(*pos, format!("scan function `{n}` must be a 0-form")));
            }
        }
        spec.scan = list.iter().map(|(n, _)| n.clone()).collect();
    }
    if !hints.is_empty() {
        let k = spec.family_names().len();
        let (ext, _) = chart.with_params(&lambda_names(k), true).map_err(|e| core_err(hints[0].pos, e))?;
        for h in &hints {
            let f = parse_expr(h.expr, &ext, &no_forms, h.pos)?;
            if !(f.is_zero() || f.is_homogeneous(0)) {
                return Err(DslError::at(h.pos, "a hint must be a function"));
            }
            let auxiliary = f.coefficient(Blade::EMPTY);
            spec.hints.push(BoundHint { name: h.name.clone(), auxiliary, lo: h.lo.clone(), hi: h.hi.clone(), assumed: h.assumed });
        }
    }
    Ok(spec)
}

/// Parses a whole expression; `pos` locates an empty one.
fn parse_expr(toks: &[Token], chart: &Arc<Chart>, forms: &HashMap<String, DiffForm>, pos: Pos) -> Result<DiffForm, DslError> {
    let end = toks.last().map_or(pos, |t| Pos { line: t.pos.line, col: t.pos.col + 1 });
    let mut p = ExprParser { toks, i: 0, chart, forms, end };
    let f = p.sum()?;
    if let Some(t) = toks.get(p.i) {
        return Err(DslError::at(t.pos, format!("unexpected {}", t.tok.describe())));
    }
    Ok(f)
}

struct ExprParser<'a> {
    toks: &'a [Token],
    i: usize,
    chart: &'a Arc<Chart>,
    forms: &'a HashMap<String, DiffForm>,
    end: Pos,
}

fn degree_of(f: &DiffForm) -> Option<usize> {
    if f.is_zero() {
        None
    } else {
        f.degree()
    }
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, want: &Tok) -> Result<(), DslError> {
        match self.peek() {
            Some(t) if t == want => {
                self.i += 1;
                Ok(())
            }
            Some(t) => Err(DslError::at(self.pos(), format!("expected {}, found {}", want.describe(), t.describe()))),
            None => Err(DslError::at(self.end, format!("expected {}, found end of line", want.describe()))),
        }
    }

    fn sum(&mut self) -> Result<DiffForm, DslError> {
        let mut acc = self.wedge()?;
        while let Some(op @ (Tok::Plus | Tok::Minus)) = self.peek().cloned() {
            let pos = self.pos();
            self.i += 1;
            let rhs = self.wedge()?;
            if let (Some(a), Some(b)) = (degree_of(&acc), degree_of(&rhs)) {
                if a != b {
                    return Err(DslError::at(pos, format!("cannot combine a {a}-form and a {b}-form")));
                }
            }
            acc = if op == Tok::Plus { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn wedge(&mut self) -> Result<DiffForm, DslError> {
        let mut acc = self.product()?;
        while self.peek() == Some(&Tok::Caret) {
            let pos = self.pos();
            self.i += 1;
            let rhs = self.product()?;
            acc = acc.wedge(&rhs).map_err(|e| core_err(pos, e))?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<DiffForm, DslError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    let pos = self.pos();
                    self.i += 1;
                    let rhs = self.unary()?;
                    let scalar = |f: &DiffForm| matches!(degree_of(f), None | Some(0));
                    if !scalar(&acc) && !scalar(&rhs) {
                        return Err(DslError::at(pos, "`*` needs a function on one side; use `^` for the wedge product"));
                    }
                    acc = acc.wedge(&rhs).map_err(|e| core_err(pos, e))?;
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.i += 1;
                    match self.peek() {
                        Some(Tok::Int(n)) if !n.is_zero() => {
                            let inv = Rational::new(1.into(), n.clone());
                            self.i += 1;
                            acc = acc.scale(&Poly::constant(inv));
                        }
                        Some(Tok::Int(_)) => return Err(DslError::at(pos, "division by zero")),
                        _ => return Err(DslError::at(self.pos(), "only division by an integer literal is supported")),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<DiffForm, DslError> {
        if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            return Ok(-&self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<DiffForm, DslError> {
        let pos = self.pos();
        let tok = self.peek().cloned().ok_or_else(|| DslError::at(self.end, "expected an expression, found end of line"))?;
        self.i += 1;
        match tok {
            Tok::Int(n) => Ok(DiffForm::scalar(self.chart, Poly::constant(Rational::from_integer(n)))),
            Tok::LParen => {
                let f = self.sum()?;
                self.eat(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if name == "d" && self.peek() == Some(&Tok::LParen) => {
                self.i += 1;
                let f = self.sum()?;
                self.eat(&Tok::RParen)?;
                Ok(f.ext_d())
            }
            Tok::Ident(name) if name == "wpow" && self.peek() == Some(&Tok::LParen) => {
                self.i += 1;
                let f = self.sum()?;
                self.eat(&Tok::Comma)?;
                let npos = self.pos();
                let n = match self.peek() {
                    Some(Tok::Int(n)) => u32::try_from(n.clone()).map_err(|_| DslError::at(npos, "exponent too large"))?,
                    _ => return Err(DslError::at(npos, "expected an integer exponent")),
                };
                self.i += 1;
                self.eat(&Tok::RParen)?;
                Ok(f.wedge_pow(n))
            }
            Tok::Ident(name) => self.resolve(&name, pos),
            other => Err(DslError::at(pos, format!("expected an expression, found {}", other.describe()))),
        }
    }

    fn resolve(&self, name: &str, pos: Pos) -> Result<DiffForm, DslError> {
        if let Some(v) = self.chart.var(name) {
            return Ok(DiffForm::scalar(self.chart, Poly::var(v)));
        }
        if let Some(g) = self.chart.generator(name) {
            return Ok(DiffForm::generator(self.chart, g));
        }
        if let Some(f) = self.forms.get(name) {
            return Ok(f.clone());
        }
        if let Some(v) = name.strip_prefix('d').and_then(|rest| self.chart.var(rest)) {
            if self.chart.var_kind(v) == VarKind::Func {
                return Ok(DiffForm::var_differential(self.chart, v));
            }
        }
        Err(DslError::at(pos, format!("unknown name `{name}`")))
    }
}
