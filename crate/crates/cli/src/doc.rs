//! The plain-text input document: variable declaration, generators, and
//! options, one `key: value` pair per line.
//!
//! ```text
//! # a pinch point
//! vars: x, y, z
//! gen: x^2 + y^2*z
//! order: 12
//! ```
//!
//! Recognized keys: `vars` (exactly once, before any expression), `gen`
//! (one per generator of the germ ideal, at least one), `ideal_a` (one per
//! generator of an optional weight ideal), `t` (non-negative rational
//! exponent for the weight ideal), `levels` (jet level bound), `order`
//! (power-series truncation order).  `#` starts a comment, blank lines are
//! skipped, and expression syntax is the polynomial grammar of the library
//! parser.

use std::str::FromStr;

use num_rational::BigRational;

use mj_singular::poly::{parse_polynomial, MultiPoly, Vars};

/// A parsed input document.
pub struct InputDocument {
    pub vars: Vars,
    pub gens: Vec<MultiPoly>,
    pub ideal_a: Vec<MultiPoly>,
    pub t: Option<BigRational>,
    pub levels: Option<usize>,
    pub order: Option<u32>,
}

fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a document, reporting errors with their line number.
pub fn parse_document(text: &str) -> Result<InputDocument, String> {
    let mut names: Option<Vec<String>> = None;
    let mut gen_srcs: Vec<(usize, String)> = Vec::new();
    let mut a_srcs: Vec<(usize, String)> = Vec::new();
    let mut t: Option<BigRational> = None;
    let mut levels: Option<usize> = None;
    let mut order: Option<u32> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(format!("line {lineno}: expected 'key: value', got '{line}'"));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "vars" => {
                if names.is_some() {
                    return Err(format!("line {lineno}: duplicate 'vars' declaration"));
                }
                let list: Vec<String> = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if list.is_empty() {
                    return Err(format!("line {lineno}: 'vars' declares no variables"));
                }
                for name in &list {
                    if !valid_var_name(name) {
                        return Err(format!("line {lineno}: invalid variable name '{name}'"));
                    }
                }
                for (i, name) in list.iter().enumerate() {
                    if list[..i].contains(name) {
                        return Err(format!("line {lineno}: duplicate variable '{name}'"));
                    }
                }
                names = Some(list);
            }
            "gen" => gen_srcs.push((lineno, value.to_string())),
            "ideal_a" => a_srcs.push((lineno, value.to_string())),
            "t" => {
                let parsed = BigRational::from_str(value)
                    .map_err(|e| format!("line {lineno}: invalid rational '{value}': {e}"))?;
                if parsed < BigRational::from_integer(0.into()) {
                    return Err(format!("line {lineno}: 't' must be non-negative"));
                }
                t = Some(parsed);
            }
            "levels" => {
                levels = Some(
                    value
                        .parse::<usize>()
                        .map_err(|e| format!("line {lineno}: invalid 'levels': {e}"))?,
                );
            }
            "order" => {
                order = Some(
                    value
                        .parse::<u32>()
                        .map_err(|e| format!("line {lineno}: invalid 'order': {e}"))?,
                );
            }
            other => return Err(format!("line {lineno}: unknown key '{other}'")),
        }
    }

    let Some(names) = names else {
        return Err("missing 'vars' declaration".to_string());
    };
    if gen_srcs.is_empty() {
        return Err("no 'gen' lines: the germ ideal needs at least one generator".to_string());
    }
    let vars: Vars = std::sync::Arc::new(names);

    let parse_all = |srcs: &[(usize, String)]| -> Result<Vec<MultiPoly>, String> {
        srcs.iter()
            .map(|(lineno, src)| {
                parse_polynomial(src, &vars)
                    .map_err(|e| format!("line {lineno}: {e}"))
            })
            .collect()
    };
    let gens = parse_all(&gen_srcs)?;
    let ideal_a = parse_all(&a_srcs)?;

    Ok(InputDocument {
        vars,
        gens,
        ideal_a,
        t,
        levels,
        order,
    })
}
