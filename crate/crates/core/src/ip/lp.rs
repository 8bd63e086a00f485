//! CPLEX LP text emission and a parser for the same dialect.
//!
//! Every variable is listed in `Bounds` in declaration order, so parsing an
//! emitted file restores the model exactly when all coefficients have a
//! terminating decimal expansion. Other rationals are written rounded to
//! 15 fractional digits.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ip::model::{IpModel, LinExpr, ModelError, Relation, Sense, VarKind, VarTag};
use crate::rational::{format_decimal, int, parse_rational, Rational};

const WRAP: usize = 78;

fn push_expr(out: &mut String, model: &IpModel, expr: &LinExpr, indent: &str, mut col: usize) -> usize {
    let mut first = true;
    for (v, c) in expr.terms() {
        let name = &model.variable(v).name;
        let mag = c.abs();
        let mut piece = String::new();
        if c.is_negative() {
            piece.push_str(if first { "- " } else { " - " });
        } else if !first {
            piece.push_str(" + ");
        }
        if !mag.is_one() {
            piece.push_str(&format_decimal(&mag));
            piece.push(' ');
        }
        piece.push_str(name);
        if col + piece.len() > WRAP && !first {
            out.push('\n');
            out.push_str(indent);
            col = indent.len();
            let trimmed = piece.trim_start();
            out.push_str(trimmed);
            col += trimmed.len();
        } else {
            out.push_str(&piece);
            col += piece.len();
        }
        first = false;
    }
    if first {
        out.push('0');
        col += 1;
    }
    col
}

/// Deterministic LP text for `model`.
pub fn emit_lp(model: &IpModel) -> String {
    let mut out = String::new();
    let stats = model.stats();
    let _ = writeln!(out, "\\ gmip model");
    let _ = writeln!(out, "\\ {stats}");
    out.push_str(match model.objective().sense {
        Sense::Minimize => "Minimize\n",
        Sense::Maximize => "Maximize\n",
    });
    out.push_str(" obj: ");
    push_expr(&mut out, model, &model.objective().expr, "    ", 6);
    out.push('\n');
    out.push_str("Subject To\n");
    for c in model.constraints() {
        let head = format!(" {}: ", c.name);
        out.push_str(&head);
        let col = push_expr(&mut out, model, &c.expr, "    ", head.len());
        let tail = format!(" {} {}", c.rel.symbol(), format_decimal(&c.rhs));
        if col + tail.len() > WRAP {
            out.push_str("\n   ");
        }
        out.push_str(&tail);
        out.push('\n');
    }
    if !model.vars().is_empty() {
        out.push_str("Bounds\n");
        for v in model.vars() {
            match v.upper {
                Some(u) => {
                    let _ = writeln!(out, " {} <= {} <= {}", format_decimal(&v.lower), v.name, format_decimal(&u));
                }
                None => {
                    let _ = writeln!(out, " {} >= {}", v.name, format_decimal(&v.lower));
                }
            }
        }
    }
    for (kind, header) in [(VarKind::Binary, "Binary"), (VarKind::Integer, "General")] {
        let names: Vec<&str> =
            model.vars().iter().filter(|v| v.kind == kind).map(|v| v.name.as_str()).collect();
        if names.is_empty() {
            continue;
        }
        out.push_str(header);
        out.push('\n');
        let mut line = String::new();
        for n in names {
            if !line.is_empty() && line.len() + n.len() + 1 > WRAP {
                out.push_str(&line);
                out.push('\n');
                line.clear();
            }
            line.push(' ');
            line.push_str(n);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: usize, message: impl Into<String>) -> LpParseError {
    LpParseError::Syntax { line, message: message.into() }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Rows,
    Bounds,
    Binary,
    General,
    Done,
}

fn section_of(line: &str) -> Option<(Section, Option<Sense>)> {
    match line.to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "min" => Some((Section::Objective, Some(Sense::Minimize))),
        "maximize" | "maximise" | "max" => Some((Section::Objective, Some(Sense::Maximize))),
        "subject to" | "such that" | "st" | "s.t." => Some((Section::Rows, None)),
        "bounds" => Some((Section::Bounds, None)),
        "binary" | "binaries" | "bin" => Some((Section::Binary, None)),
        "general" | "generals" | "gen" => Some((Section::General, None)),
        "end" => Some((Section::Done, None)),
        _ => None,
    }
}

type Terms = Vec<(String, Rational)>;

fn parse_terms(text: &str, line: usize) -> Result<Terms, LpParseError> {
    let mut out = Vec::new();
    let mut sign = Rational::one();
    let mut coef: Option<Rational> = None;
    for tok in text.split_whitespace() {
        match tok {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                if let Some(r) = parse_rational(tok) {
                    if coef.is_some() {
                        return Err(syntax(line, format!("two coefficients in a row near `{tok}`")));
                    }
                    coef = Some(r);
                } else {
                    out.push((tok.to_string(), sign * coef.unwrap_or_else(Rational::one)));
                    sign = Rational::one();
                    coef = None;
                }
            }
        }
    }
    match coef {
        Some(c) if c.is_zero() && out.is_empty() => Ok(out),
        Some(_) => Err(syntax(line, "constant terms are not supported")),
        None => Ok(out),
    }
}

fn split_relation(text: &str) -> Option<(&str, Relation, &str)> {
    for (sym, rel) in [("<=", Relation::Le), (">=", Relation::Ge), ("=<", Relation::Le), ("=>", Relation::Ge)] {
        if let Some((l, r)) = text.split_once(sym) {
            return Some((l, rel, r));
        }
    }
    for (sym, rel) in [("<", Relation::Le), (">", Relation::Ge), ("=", Relation::Eq)] {
        if let Some((l, r)) = text.split_once(sym) {
            return Some((l, rel, r));
        }
    }
    None
}

struct RawRow {
    line: usize,
    name: String,
    terms: Terms,
    rel: Relation,
    rhs: Rational,
}

struct RawBound {
    line: usize,
    name: String,
    lower: Rational,
    upper: Option<Rational>,
}

/// Parses LP text produced by [`emit_lp`] (and the same dialect by hand).
pub fn parse_lp(text: &str) -> Result<IpModel, LpParseError> {
    let mut section = Section::Preamble;
    let mut sense = Sense::Minimize;
    let mut obj_text = String::new();
    let mut obj_line = 0;
    let mut rows: Vec<RawRow> = Vec::new();
    let mut pending: Option<(usize, String)> = None;
    let mut bounds: Vec<RawBound> = Vec::new();
    let mut binaries: BTreeSet<String> = BTreeSet::new();
    let mut generals: BTreeSet<String> = BTreeSet::new();
    let mut row_counter = 0usize;

    let finish_row = |pending: &mut Option<(usize, String)>, rows: &mut Vec<RawRow>, counter: &mut usize| {
        let Some((line, buf)) = pending.take() else { return Ok(()) };
        let (name, body) = match buf.split_once(':') {
            Some((n, b)) => (n.trim().to_string(), b.to_string()),
            None => {
                *counter += 1;
                (format!("r_{counter}"), buf.clone())
            }
        };
        let (lhs, rel, rhs) = split_relation(&body).ok_or_else(|| syntax(line, "row without relation"))?;
        let rhs = parse_rational(rhs.trim()).ok_or_else(|| syntax(line, format!("bad right-hand side `{}`", rhs.trim())))?;
        let terms = parse_terms(lhs, line)?;
        rows.push(RawRow { line, name, terms, rel, rhs });
        Ok::<(), LpParseError>(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('\\').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((next, s)) = section_of(line) {
            finish_row(&mut pending, &mut rows, &mut row_counter)?;
            if let Some(s) = s {
                sense = s;
                obj_line = line_no;
            }
            section = next;
            continue;
        }
        match section {
            Section::Preamble => return Err(syntax(line_no, "expected an objective section")),
            Section::Done => return Err(syntax(line_no, "content after End")),
            Section::Objective => {
                obj_text.push(' ');
                obj_text.push_str(line);
            }
            Section::Rows => {
                let starts_row = line.contains(':') || pending.is_none();
                if starts_row {
                    finish_row(&mut pending, &mut rows, &mut row_counter)?;
                    pending = Some((line_no, line.to_string()));
                } else if let Some((_, buf)) = pending.as_mut() {
                    buf.push(' ');
                    buf.push_str(line);
                }
            }
            Section::Bounds => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                let b = match toks.as_slice() {
                    [l, "<=", n, "<=", u] => RawBound {
                        line: line_no,
                        name: n.to_string(),
                        lower: parse_rational(l).ok_or_else(|| syntax(line_no, "bad lower bound"))?,
                        upper: Some(parse_rational(u).ok_or_else(|| syntax(line_no, "bad upper bound"))?),
                    },
                    [n, ">=", l] => RawBound {
                        line: line_no,
                        name: n.to_string(),
                        lower: parse_rational(l).ok_or_else(|| syntax(line_no, "bad lower bound"))?,
                        upper: None,
                    },
                    [n, "<=", u] => RawBound {
                        line: line_no,
                        name: n.to_string(),
                        lower: int(0),
                        upper: Some(parse_rational(u).ok_or_else(|| syntax(line_no, "bad upper bound"))?),
                    },
                    _ => return Err(syntax(line_no, "unsupported bound form")),
                };
                bounds.push(b);
            }
            Section::Binary => binaries.extend(line.split_whitespace().map(str::to_string)),
            Section::General => generals.extend(line.split_whitespace().map(str::to_string)),
        }
    }
    finish_row(&mut pending, &mut rows, &mut row_counter)?;
    if section != Section::Done {
        return Err(syntax(text.lines().count().max(1), "missing End"));
    }

    let obj_body = obj_text.trim();
    let obj_body = match obj_body.split_once(':') {
        Some((_, b)) => b,
        None => obj_body,
    };
    let obj_terms = parse_terms(obj_body, obj_line)?;

    let mut model = IpModel::new();
    let mut declared = HashSet::new();
    for b in &bounds {
        if !declared.insert(b.name.clone()) {
            return Err(syntax(b.line, format!("variable `{}` bounded twice", b.name)));
        }
        let kind = if binaries.contains(&b.name) {
            VarKind::Binary
        } else if generals.contains(&b.name) {
            VarKind::Integer
        } else {
            VarKind::Continuous
        };
        model.add_var(VarTag::from_name(&b.name), kind, b.lower, b.upper)?;
    }
    for n in binaries.iter().chain(generals.iter()) {
        if !declared.contains(n) {
            let (kind, upper) =
                if binaries.contains(n) { (VarKind::Binary, Some(int(1))) } else { (VarKind::Integer, None) };
            model.add_var(VarTag::from_name(n), kind, int(0), upper)?;
            declared.insert(n.clone());
        }
    }
    let resolve = |model: &IpModel, terms: &Terms, line: usize| -> Result<LinExpr, LpParseError> {
        let mut e = LinExpr::new();
        for (n, c) in terms {
            let v = model.var_by_name(n).ok_or_else(|| syntax(line, format!("undeclared variable `{n}`")))?;
            e.add(v, *c);
        }
        Ok(e)
    };
    let obj = resolve(&model, &obj_terms, obj_line)?;
    model.set_objective(sense, obj)?;
    for r in rows {
        let e = resolve(&model, &r.terms, r.line)?;
        model.add_named_constraint(r.name, e, r.rel, r.rhs)?;
    }
    Ok(model)
}
