//! Plain-text node/weight tables.
//!
//! One `node weight` pair per line, each value in normalized scientific
//! notation with 30 significant digits, a blank line after every fifth pair
//! and a final line feed. Symmetric kernels list only the nodes x ≥ 0.

use crate::error::{QuadError, Result};
use crate::moments::Kernel;
use crate::numerics::{parse_decimal, BigNum};
use crate::rulegen::QuadratureRule;

/// Significant digits of every printed value.
pub const TABLE_DIGITS: u32 = 30;

/// Pairs per block.
pub const BLOCK: usize = 5;

/// Working precision of parsed values. Printed values are exact decimals, so
/// the extra width only protects arithmetic done on them afterwards.
pub const PARSED_DIGITS: u32 = 2 * TABLE_DIGITS;

/// Number of lines with pairs in the table of an `n`-node rule.
pub fn table_rows(kernel: Kernel, n: usize) -> usize {
    if kernel.is_symmetric() {
        n.div_ceil(2)
    } else {
        n
    }
}

pub fn render_table(rule: &QuadratureRule) -> Result<String> {
    if rule.output_digits() < TABLE_DIGITS {
        return Err(QuadError::contract(format!(
            "tables print {TABLE_DIGITS} digits, rule is stable to {}",
            rule.output_digits()
        )));
    }
    let n = rule.len();
    let skip = n - table_rows(rule.kernel(), n);
    let mut out = String::new();
    for (row, (x, w)) in rule.nodes().iter().zip(rule.weights()).skip(skip).enumerate() {
        if row > 0 && row % BLOCK == 0 {
            out.push('\n');
        }
        out.push_str(&x.to_sci_string(TABLE_DIGITS));
        out.push(' ');
        out.push_str(&w.to_sci_string(TABLE_DIGITS));
        out.push('\n');
    }
    Ok(out)
}

/// `d.ddd…e±XX` with exactly [`TABLE_DIGITS`] significant digits.
fn is_table_number(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    let Some((mantissa, exp)) = s.split_once('e') else {
        return false;
    };
    let m = mantissa.as_bytes();
    let mantissa_ok = m.len() == TABLE_DIGITS as usize + 1
        && m[0].is_ascii_digit()
        && m[1] == b'.'
        && m[2..].iter().all(u8::is_ascii_digit);
    let exp_ok = match exp.as_bytes() {
        [b'+' | b'-', rest @ ..] => rest.len() >= 2 && rest.iter().all(u8::is_ascii_digit),
        _ => false,
    };
    mantissa_ok && exp_ok
}

fn parse_value(token: &str, line: usize) -> Result<BigNum> {
    if !is_table_number(token) {
        return Err(QuadError::parse(line, format!("malformed number {token:?}")));
    }
    let r = parse_decimal(token).ok_or_else(|| QuadError::parse(line, format!("malformed number {token:?}")))?;
    Ok(BigNum::from_rational(&r, PARSED_DIGITS))
}

/// Rebuild the rule printed by [`render_table`]; symmetric tables are mirrored.
pub fn parse_table(text: &str, kernel: Kernel, n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(QuadError::contract("a rule needs at least one node"));
    }
    let expected = table_rows(kernel, n);
    let Some(body) = text.strip_suffix('\n') else {
        return Err(QuadError::parse(text.lines().count().max(1), "missing final line feed"));
    };
    let mut nodes = Vec::with_capacity(expected);
    let mut weights = Vec::with_capacity(expected);
    for (i, raw) in body.split('\n').enumerate() {
        let line = i + 1;
        let pairs = nodes.len();
        let blank_due = pairs > 0 && pairs % BLOCK == 0 && line == pairs + pairs / BLOCK;
        if blank_due {
            if !raw.is_empty() {
                return Err(QuadError::parse(line, "expected a blank line after five pairs"));
            }
            continue;
        }
        if raw.is_empty() {
            return Err(QuadError::parse(line, "unexpected blank line"));
        }
        if pairs == expected {
            return Err(QuadError::parse(line, format!("more than {expected} pairs for N = {n}")));
        }
        let Some((x, w)) = raw.split_once(' ') else {
            return Err(QuadError::parse(line, "expected `node weight`"));
        };
        let x = parse_value(x, line)?;
        let w = parse_value(w, line)?;
        if let Some(prev) = nodes.last() {
            if &x <= prev {
                return Err(QuadError::parse(line, "nodes are not increasing"));
            }
        }
        if !w.is_positive() {
            return Err(QuadError::parse(line, "weight is not positive"));
        }
        nodes.push(x);
        weights.push(w);
    }
    let lines = body.split('\n').count();
    if nodes.len() != expected {
        return Err(QuadError::parse(
            lines,
            format!("found {} pairs, N = {n} needs {expected}", nodes.len()),
        ));
    }
    if kernel.is_symmetric() {
        let centered = n % 2 == 1;
        if nodes[0].is_negative() || (centered != nodes[0].is_zero()) {
            let why = if centered { "odd N needs a node at 0" } else { "even N has no node at 0" };
            return Err(QuadError::parse(1, why));
        }
        let mirror = usize::from(centered);
        let mut full_x: Vec<BigNum> = nodes[mirror..].iter().rev().map(|x| -x).collect();
        let mut full_w: Vec<BigNum> = weights[mirror..].iter().rev().cloned().collect();
        full_x.extend(nodes);
        full_w.extend(weights);
        nodes = full_x;
        weights = full_w;
    }
    QuadratureRule::new(kernel, nodes, weights, TABLE_DIGITS, PARSED_DIGITS)
        .map_err(|e| QuadError::parse(1, e.to_string()))
}
