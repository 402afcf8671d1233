//! Plain-text polynomial system format.
//!
//! ```text
//! # format 1
//! vars: 2 x y
//! 1 0 2 0
//! 1 0 0 2
//! -1 0 0 0
//!
//! 1 0 1 0
//! -1 0 0 1
//! ```
//!
//! One term per line as `re im e1 … en`, polynomials separated by blank
//! lines, `#` lines ignored. A zero polynomial is written as a single term
//! with zero coefficient. Coefficients use shortest round-trip decimals, so
//! export → parse → export is byte-identical.

use std::fmt::Write as _;

use num_complex::Complex;

use super::poly::MultiPoly;
use super::system::{ExactModel, PolySystem};
use crate::geometry::Point2;
use crate::taylor::UniPoly;
use crate::{Error, Result, Scalar};

pub const FORMAT_VERSION: u32 = 1;

const MODEL_TAG: &str = "# model:";
const TAYLOR_TAG: &str = "# taylor:";

pub fn export_system<T: Scalar>(sys: &PolySystem<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# format {FORMAT_VERSION}");
    if let (Some(model), Some(taylor)) = (sys.exact(), sys.taylor()) {
        match model {
            ExactModel::PieCut { lambda1, lambda2 } => {
                let _ = writeln!(out, "{MODEL_TAG} piecut {lambda1} {lambda2}");
            }
            ExactModel::SingleSector { lambda, apex } => {
                let _ = writeln!(out, "{MODEL_TAG} single-sector {lambda} {} {}", apex.x, apex.y);
            }
        }
        let _ = write!(out, "{TAYLOR_TAG} {}", taylor.center);
        for c in &taylor.coeffs {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "vars: {} {}", sys.n_vars(), sys.var_names().join(" "));
    for (i, p) in sys.polys().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if p.is_zero() {
            let _ = write!(out, "0 0");
            for _ in 0..p.n_vars() {
                out.push_str(" 0");
            }
            out.push('\n');
            continue;
        }
        for (exps, c) in p.terms() {
            let _ = write!(out, "{} {}", unsigned_zero(c.re), unsigned_zero(c.im));
            for e in exps {
                let _ = write!(out, " {e}");
            }
            out.push('\n');
        }
    }
    out
}

fn unsigned_zero<T: Scalar>(x: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x
    }
}

fn parse_err(line: usize, expected: impl Into<String>) -> Error {
    Error::Parse {
        line,
        expected: expected.into(),
    }
}

/// Parses a system; the exact companion is restored when the `# model:` and
/// `# taylor:` comments are present.
pub fn parse_system<T: Scalar>(text: &str) -> Result<PolySystem<T>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut header = None;
    for (no, line) in lines.by_ref() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        header = Some((no, line));
        break;
    }
    let (hline, header) = header.ok_or_else(|| parse_err(1, "`vars:` header"))?;
    let rest = header
        .strip_prefix("vars:")
        .ok_or_else(|| parse_err(hline, "`vars:` header"))?;
    let mut tokens = rest.split_whitespace();
    let n: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(hline, "variable count"))?;
    let names: Vec<String> = tokens.map(str::to_string).collect();
    if names.len() != n {
        return Err(parse_err(hline, format!("{n} variable names")));
    }

    let mut polys = Vec::new();
    let mut current: Option<Vec<(Complex<T>, Vec<u32>)>> = None;
    for (no, line) in lines {
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if let Some(terms) = current.take() {
                polys.push(MultiPoly::from_terms(n, terms)?);
            }
            continue;
        }
        let mut tok = line.split_whitespace();
        let re: T = tok
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(no, "coefficient real part"))?;
        let im: T = tok
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(no, "coefficient imaginary part"))?;
        let exps = (0..n)
            .map(|k| {
                tok.next()
                    .and_then(|t| t.parse::<u32>().ok())
                    .ok_or_else(|| parse_err(no, format!("exponent {} of {n}", k + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if tok.next().is_some() {
            return Err(parse_err(no, "end of line"));
        }
        current.get_or_insert_with(Vec::new).push((Complex::new(re, im), exps));
    }
    if let Some(terms) = current.take() {
        polys.push(MultiPoly::from_terms(n, terms)?);
    }
    if polys.len() != n {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("{n} polynomials, found {}", polys.len()),
        ));
    }
    let sys = PolySystem::new(names, polys)?;
    match model_hint(text)? {
        Some((model, taylor)) => sys.with_exact(model, taylor),
        None => Ok(sys),
    }
}

/// Reads the `# model:` and `# taylor:` comments written by
/// [`export_system`], from which the exact companion can be rebuilt.
pub fn model_hint<T: Scalar>(text: &str) -> Result<Option<(ExactModel<T>, UniPoly<T>)>> {
    let mut model = None;
    let mut taylor = None;
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let line = line.trim();
        let nums = |s: &str| -> Result<Vec<T>> {
            s.split_whitespace()
                .map(|t| t.parse::<T>().map_err(|_| parse_err(no, "number")))
                .collect()
        };
        if let Some(rest) = line.strip_prefix(MODEL_TAG) {
            let rest = rest.trim();
            if let Some(args) = rest.strip_prefix("piecut") {
                match nums(args)?.as_slice() {
                    &[lambda1, lambda2] => model = Some(ExactModel::PieCut { lambda1, lambda2 }),
                    _ => return Err(parse_err(no, "two shares after `piecut`")),
                }
            } else if let Some(args) = rest.strip_prefix("single-sector") {
                match nums(args)?.as_slice() {
                    &[lambda, x, y] => {
                        model = Some(ExactModel::SingleSector {
                            lambda,
                            apex: Point2::new(x, y),
                        })
                    }
                    _ => return Err(parse_err(no, "share and apex after `single-sector`")),
                }
            } else {
                return Err(parse_err(no, "model kind `piecut` or `single-sector`"));
            }
        } else if let Some(rest) = line.strip_prefix(TAYLOR_TAG) {
            let v = nums(rest)?;
            if v.len() < 2 {
                return Err(parse_err(no, "center and at least one coefficient"));
            }
            taylor = Some(UniPoly::new(v[0], v[1..].to_vec())?);
        }
    }
    Ok(model.zip(taylor))
}
