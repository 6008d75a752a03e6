//! Text format for group definitions.
//!
//! ```text
//! # comment
//! scalar rational            # or: field, interval
//! field -2 0 1               # minimal polynomial, constant term first
//! embedding 1.4142 0.01      # real embedding: midpoint and radius
//! matrix 3 0,2 0,2 3         # four scalars; field scalars are coordinate lists
//! relation genus 2           # or: none
//! preset sanov               # instead of matrices
//! ```
//! Interval scalars are written `lo..hi` or as a single rational.

use std::sync::Arc;

use num_bigint::BigInt;

use super::matrix::Matrix2;
use super::scalar::ScalarKind;
use super::schottky::{preset, AnyTuple};
use super::tuple::{GeneratorTuple, Relation};
use crate::error::{Error, Result};
use crate::number_theory::field::parse_rational;
use crate::number_theory::{FieldElement, NumberField, RigorousReal};

/// Precision of interval scalars read from text.
pub const INTERVAL_PRECISION: u32 = 128;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a group definition.
pub fn parse_group(text: &str) -> Result<AnyTuple> {
    let mut kind = ScalarKind::Rational;
    let mut field_coeffs: Option<Vec<BigInt>> = None;
    let mut embedding: Option<(f64, f64)> = None;
    let mut matrices: Vec<(usize, Vec<Token>)> = Vec::new();
    let mut relation = Relation::None;
    let mut preset_name: Option<(usize, usize, String)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(head) = toks.first() else { continue };
        let args = &toks[1..];
        let end_col = line.trim_end().len() + 1;
        match head.text {
            "scalar" => {
                let t = args.first().ok_or_else(|| err(ln, end_col, "missing scalar kind"))?;
                kind = match t.text {
                    "rational" => ScalarKind::Rational,
                    "field" => ScalarKind::Field,
                    "interval" => ScalarKind::Interval,
                    other => return Err(err(ln, t.column, format!("unknown scalar kind {other:?}"))),
                };
            }
            "field" => {
                if args.len() < 2 {
                    return Err(err(ln, end_col, "field needs at least two coefficients"));
                }
                let c = args
                    .iter()
                    .map(|t| {
                        t.text
                            .parse::<BigInt>()
                            .map_err(|_| err(ln, t.column, format!("not an integer: {:?}", t.text)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                field_coeffs = Some(c);
            }
            "embedding" => {
                if args.len() != 2 {
                    return Err(err(ln, end_col, "embedding needs a midpoint and a radius"));
                }
                let f = |t: &Token| {
                    t.text
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| err(ln, t.column, format!("not a number: {:?}", t.text)))
                };
                embedding = Some((f(&args[0])?, f(&args[1])?));
            }
            "matrix" => {
                if args.len() != 4 {
                    let col = args.get(4).map_or(end_col, |t| t.column);
                    return Err(err(ln, col, format!("matrix needs 4 entries, got {}", args.len())));
                }
                matrices.push((ln, toks.into_iter().skip(1).collect()));
            }
            "relation" => {
                let t = args.first().ok_or_else(|| err(ln, end_col, "missing relation"))?;
                relation = match t.text {
                    "none" => Relation::None,
                    "genus" => {
                        let g = args.get(1).ok_or_else(|| err(ln, end_col, "missing genus"))?;
                        Relation::Genus(
                            g.text
                                .parse()
                                .map_err(|_| err(ln, g.column, format!("bad genus {:?}", g.text)))?,
                        )
                    }
                    other => return Err(err(ln, t.column, format!("unknown relation {other:?}"))),
                };
            }
            "preset" => {
                let t = args.first().ok_or_else(|| err(ln, end_col, "missing preset name"))?;
                preset_name = Some((ln, t.column, t.text.to_string()));
            }
            other => return Err(err(ln, head.column, format!("unknown keyword {other:?}"))),
        }
    }

    if let Some((ln, col, name)) = preset_name {
        if !matrices.is_empty() {
            return Err(err(ln, col, "preset cannot be combined with matrices"));
        }
        return preset(&name).map_err(|e| err(ln, col, e.to_string()));
    }
    if matrices.is_empty() {
        return Err(err(text.lines().count().max(1), 1, "no matrices given"));
    }
    let first_line = matrices[0].0;
    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => err(first_line, 1, other.to_string()),
    };
    match kind {
        ScalarKind::Rational => {
            let gens = matrices
                .iter()
                .map(|(ln, toks)| {
                    let e = |t: &Token| {
                        parse_rational(t.text).map_err(|m| err(*ln, t.column, m.to_string()))
                    };
                    Matrix2::new(e(&toks[0])?, e(&toks[1])?, e(&toks[2])?, e(&toks[3])?)
                        .map_err(|m| err(*ln, toks[0].column, m.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTuple::Rational(GeneratorTuple::new(gens, relation).map_err(wrap)?))
        }
        ScalarKind::Field => {
            let coeffs = field_coeffs.ok_or_else(|| err(first_line, 1, "field scalars need a field line"))?;
            let k: Arc<NumberField> = NumberField::new(&coeffs, embedding).map_err(wrap)?;
            let gens = matrices
                .iter()
                .map(|(ln, toks)| {
                    let e = |t: &Token| {
                        FieldElement::parse(&k, t.text).map_err(|m| err(*ln, t.column, m.to_string()))
                    };
                    Matrix2::new(e(&toks[0])?, e(&toks[1])?, e(&toks[2])?, e(&toks[3])?)
                        .map_err(|m| err(*ln, toks[0].column, m.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTuple::Field(GeneratorTuple::new(gens, relation).map_err(wrap)?))
        }
        ScalarKind::Interval => {
            let gens = matrices
                .iter()
                .map(|(ln, toks)| {
                    let e = |t: &Token| parse_interval(t.text).map_err(|m| err(*ln, t.column, m.to_string()));
                    Matrix2::new(e(&toks[0])?, e(&toks[1])?, e(&toks[2])?, e(&toks[3])?)
                        .map_err(|m| err(*ln, toks[0].column, m.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTuple::Interval(GeneratorTuple::new(gens, relation).map_err(wrap)?))
        }
    }
}

fn parse_interval(s: &str) -> Result<RigorousReal> {
    let p = INTERVAL_PRECISION;
    match s.split_once("..") {
        Some((lo, hi)) => {
            let lo = RigorousReal::from_rational(&parse_rational(lo)?, p);
            let hi = RigorousReal::from_rational(&parse_rational(hi)?, p);
            if hi.certainly_lt(&lo) {
                return Err(Error::InvalidInput(format!("empty interval {s:?}")));
            }
            Ok(lo.hull(&hi))
        }
        None => Ok(RigorousReal::from_rational(&parse_rational(s)?, p)),
    }
}

fn interval_text(x: &RigorousReal) -> String {
    if x.is_point() {
        x.lo().to_rational().to_string()
    } else {
        format!("{}..{}", x.lo().to_rational(), x.hi().to_rational())
    }
}

fn relation_line(r: Relation) -> String {
    match r {
        Relation::None => "relation none\n".into(),
        Relation::Genus(g) => format!("relation genus {g}\n"),
    }
}

/// Serializes a tuple in the format accepted by [`parse_group`].
pub fn to_group_text(t: &AnyTuple) -> String {
    let mut out = String::new();
    match t {
        AnyTuple::Rational(t) => {
            out.push_str("scalar rational\n");
            for g in t.generators() {
                out.push_str(&format!("matrix {} {} {} {}\n", g.a, g.b, g.c, g.d));
            }
            out.push_str(&relation_line(t.relation()));
        }
        AnyTuple::Field(t) => {
            out.push_str("scalar field\n");
            out.push_str(&t.generator(0).a.field().to_text());
            for g in t.generators() {
                out.push_str(&format!("matrix {} {} {} {}\n", g.a, g.b, g.c, g.d));
            }
            out.push_str(&relation_line(t.relation()));
        }
        AnyTuple::Interval(t) => {
            out.push_str("scalar interval\n");
            for g in t.generators() {
                let e: Vec<String> = g.entries().iter().map(|x| interval_text(x)).collect();
                out.push_str(&format!("matrix {}\n", e.join(" ")));
            }
            out.push_str(&relation_line(t.relation()));
        }
    }
    out
}
