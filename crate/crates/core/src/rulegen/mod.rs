//! Gaussian rules from the orthogonal family: nodes, weights, and the
//! precision-escalating drivers that certify the printed digits.

mod roots;

use std::collections::BTreeMap;
use std::fmt::Display;

pub use roots::{ascend, find_roots, newton_cap, TRACE_DIGITS};

use crate::error::{QuadError, Result};
use crate::moments::Kernel;
use crate::numerics::{stabilized, BigNum, PrecisionPolicy, Rational, Rendered};
use crate::orthopoly::RecurrenceTable;
use crate::par;

/// N-point Gaussian rule Σ w_i f(x_i) for one kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kernel: Kernel,
    nodes: Vec<BigNum>,
    weights: Vec<BigNum>,
    output_digits: u32,
    working_digits: u32,
    retries: u32,
}

impl QuadratureRule {
    /// Checks node order, the open interval and weight positivity.
    pub fn new(
        kernel: Kernel,
        nodes: Vec<BigNum>,
        weights: Vec<BigNum>,
        output_digits: u32,
        working_digits: u32,
    ) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(QuadError::contract(format!(
                "rule needs matching non-empty node and weight lists, got {} and {}",
                nodes.len(),
                weights.len()
            )));
        }
        let (lo, hi) = kernel.interval();
        let (lo, hi) = (BigNum::from_i64(lo, 10), BigNum::from_i64(hi, 10));
        if let Some(i) = nodes.iter().position(|x| *x <= lo || *x >= hi) {
            return Err(QuadError::contract(format!("node {i} lies outside the open interval")));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[0] >= w[1]) {
            return Err(QuadError::contract(format!("nodes {i} and {} are not increasing", i + 1)));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(QuadError::contract(format!("weight {i} is not positive")));
        }
        Ok(QuadratureRule {
            kernel,
            nodes,
            weights,
            output_digits,
            working_digits,
            retries: 0,
        })
    }

    pub fn with_retries(mut self, retries: u32) -> Self {
        self.retries = retries;
        self
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[BigNum] {
        &self.nodes
    }

    pub fn weights(&self) -> &[BigNum] {
        &self.weights
    }

    /// Digits certified stable, and the width tables are printed at.
    pub fn output_digits(&self) -> u32 {
        self.output_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    /// Escalations beyond the first precision comparison.
    pub fn retries(&self) -> u32 {
        self.retries
    }

    /// Σ w_i f(x_i).
    pub fn apply<F, E>(&self, f: F) -> Result<BigNum>
    where
        F: Fn(&BigNum) -> std::result::Result<BigNum, E>,
        E: Display,
    {
        let mut acc = BigNum::zero(self.working_digits);
        for (index, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let fx = f(x).map_err(|e| QuadError::Integrand {
                index,
                message: e.to_string(),
            })?;
            acc = &acc + &(w * &fx);
        }
        Ok(acc)
    }
}

/// Σ w_i f(x_i); integrand failures carry the node index.
pub fn apply_rule<F, E>(rule: &QuadratureRule, f: F) -> Result<BigNum>
where
    F: Fn(&BigNum) -> std::result::Result<BigNum, E>,
    E: Display,
{
    rule.apply(f)
}

/// w_i = −([x^{N+1}]p*_{N+1} / [x^N]p*_N) / (p*_{N+1}(x_i) p*_N'(x_i)).
pub fn compute_weights(
    table: &RecurrenceTable<BigNum>,
    n: usize,
    roots: &[BigNum],
) -> Result<Vec<BigNum>> {
    if n == 0 || n > table.max_degree() {
        return Err(QuadError::contract(format!(
            "weights of degree {n} need p_{} from a table of degree {}",
            n + 1,
            table.max_degree()
        )));
    }
    let Some(digits) = roots.iter().map(BigNum::digits).max() else {
        return Ok(Vec::new());
    };
    let lead_n = table.norms()[n].with_digits(digits).sqrt()?.recip();
    let lead_next = table.norms()[n + 1].with_digits(digits).sqrt()?.recip();
    let ratio = -(&lead_next / &lead_n);
    par::map(roots, |x| {
        let p_next = &table.eval(n + 1, x) * &lead_next;
        let dp = &table.eval_with_derivative(n, x).1 * &lead_n;
        if p_next.is_zero() || dp.is_zero() {
            return Err(QuadError::precision(format!(
                "p*_{} or p*_{n}' vanishes at a node",
                n + 1
            )));
        }
        let w = &ratio / &(&p_next * &dp);
        if !w.is_positive() {
            return Err(QuadError::contract(format!("weight formula gave non-positive {w}")));
        }
        Ok(w)
    })
    .into_iter()
    .collect()
}

/// Weights for the full node set; symmetric kernels evaluate the x ≥ 0 half
/// and mirror it.
fn weights_for(table: &RecurrenceTable<BigNum>, n: usize, nodes: &[BigNum]) -> Result<Vec<BigNum>> {
    if !table.kernel().is_symmetric() {
        return compute_weights(table, n, nodes);
    }
    let half = n / 2;
    let upper = compute_weights(table, n, &nodes[half..])?;
    let mut all: Vec<BigNum> = upper[n % 2..].iter().rev().cloned().collect();
    all.extend(upper);
    Ok(all)
}

/// Nodes and weights at a single working precision.
#[derive(Debug, Clone)]
struct RuleValues {
    nodes: Vec<BigNum>,
    weights: Vec<BigNum>,
}

impl Rendered for RuleValues {
    fn rendered(&self, digits: u32) -> Vec<String> {
        let mut out = self.nodes.rendered(digits);
        out.extend(self.weights.rendered(digits));
        out
    }
}

/// Recurrence coefficients at any precision, building exact tables once.
enum TableSource {
    Exact(RecurrenceTable<Rational>),
    Moments(Kernel, usize),
}

impl TableSource {
    fn new(kernel: Kernel, n: usize) -> Result<Self> {
        Ok(match kernel {
            Kernel::LogPower(_) => TableSource::Exact(RecurrenceTable::exact(kernel, n)?),
            Kernel::Cosine => TableSource::Moments(kernel, n),
        })
    }

    fn at(&self, digits: u32) -> Result<RecurrenceTable<BigNum>> {
        match self {
            TableSource::Exact(t) => Ok(t.to_bignum(digits)),
            TableSource::Moments(kernel, n) => RecurrenceTable::at_precision(*kernel, *n, digits),
        }
    }
}

/// Rules for every degree in `wanted` from one ascent at `digits`. A precision
/// loss at degree k leaves `None` for all wanted degrees ≥ k.
fn rules_at(source: &TableSource, wanted: &[usize], digits: u32) -> Result<Vec<Option<RuleValues>>> {
    let top = *wanted.iter().max().expect("at least one degree");
    let mut found: BTreeMap<usize, RuleValues> = BTreeMap::new();
    let outcome = source.at(digits).and_then(|table| {
        ascend(&table, top, digits, |k| wanted.contains(&k), |k, roots| {
            let weights = weights_for(&table, k, roots)?;
            let nodes = roots.to_vec();
            found.insert(k, RuleValues { nodes, weights });
            Ok(())
        })
    });
    match outcome {
        Ok(()) | Err(QuadError::PrecisionLoss(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(wanted.iter().map(|k| found.remove(k)).collect())
}

fn finish(kernel: Kernel, v: RuleValues, policy: &PrecisionPolicy, digits: u32, retries: u32) -> Result<QuadratureRule> {
    Ok(QuadratureRule::new(kernel, v.nodes, v.weights, policy.output_digits(), digits)?.with_retries(retries))
}

/// The N-point rule, stabilized to `policy.output_digits()`.
pub fn generate_rule(kernel: Kernel, n: usize, policy: &PrecisionPolicy) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(QuadError::contract("a rule needs at least one node"));
    }
    let source = TableSource::new(kernel, n)?;
    let s = stabilized(policy, |digits| {
        rules_at(&source, &[n], digits)?
            .pop()
            .flatten()
            .ok_or_else(|| QuadError::precision(format!("degree {n} lost at {digits} digits")))
    })?;
    finish(kernel, s.value, policy, s.working_digits, s.retries)
}

/// Rules for every N in `ns`, sharing one recurrence table and one root ascent
/// per working precision. Each entry matches what [`generate_rule`] returns
/// for that N, stabilization failures included.
pub fn generate_rules(
    kernel: Kernel,
    ns: &[usize],
    policy: &PrecisionPolicy,
) -> Result<Vec<(usize, Result<QuadratureRule>)>> {
    if ns.contains(&0) {
        return Err(QuadError::contract("a rule needs at least one node"));
    }
    let Some(&top) = ns.iter().max() else {
        return Ok(Vec::new());
    };
    let source = TableSource::new(kernel, top)?;
    let schedule = policy.schedule();
    let out_digits = policy.output_digits();
    let render = |v: Option<RuleValues>| v.map(|v| {
        let r = v.rendered(out_digits);
        (v, r)
    });

    let mut done: BTreeMap<usize, Result<QuadratureRule>> = BTreeMap::new();
    let mut pending: BTreeMap<usize, Option<(RuleValues, Vec<String>)>> = BTreeMap::new();
    let mut mismatch: BTreeMap<usize, usize> = BTreeMap::new();
    let mut wanted: Vec<usize> = ns.to_vec();
    wanted.sort_unstable();
    wanted.dedup();

    let (first, second) = par::join(
        || rules_at(&source, &wanted, schedule[0]),
        || rules_at(&source, &wanted, schedule[1]),
    );
    for (k, v) in wanted.iter().zip(first?) {
        pending.insert(*k, render(v));
    }
    let mut next = Some(second?);
    for (step, &digits) in schedule.iter().enumerate().skip(1) {
        let open: Vec<usize> = pending.keys().copied().collect();
        if open.is_empty() {
            break;
        }
        let runs = match next.take() {
            Some(r) => r,
            None => rules_at(&source, &open, digits)?,
        };
        for (k, cur) in wanted.iter().filter(|k| pending.contains_key(k)).copied().collect::<Vec<_>>().into_iter().zip(runs) {
            let cur = render(cur);
            let prev = pending.remove(&k).flatten();
            if let (Some((_, a)), Some((v, b))) = (&prev, &cur) {
                match first_mismatch(a, b) {
                    None => {
                        done.insert(k, finish(kernel, v.clone(), policy, digits, (step - 1) as u32));
                        continue;
                    }
                    Some(i) => {
                        mismatch.insert(k, i);
                    }
                }
            }
            pending.insert(k, cur);
        }
    }
    let last = *schedule.last().unwrap();
    for k in pending.keys() {
        done.insert(
            *k,
            Err(QuadError::StabilizationFailure {
                index: mismatch.get(k).copied().unwrap_or(0),
                digits: last,
            }),
        );
    }
    Ok(ns.iter().map(|k| (*k, done[k].clone())).collect())
}

fn first_mismatch(a: &[String], b: &[String]) -> Option<usize> {
    if a.len() != b.len() {
        return Some(a.len().min(b.len()));
    }
    a.iter().zip(b).position(|(x, y)| x != y)
}
