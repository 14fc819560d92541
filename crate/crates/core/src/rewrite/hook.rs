//! The composite relation `↪` and normalization.

use super::algebraic::canonicalize;
use super::arrow::{step_arrow, ArrowStep};
use crate::syntax::Term;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Arrow(u8),
    Algebraic,
}

#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub kind: StepKind,
    /// Child-index path from the root to the redex; empty for algebraic steps.
    pub position: Vec<usize>,
    pub before: Term,
    pub after: Term,
}

#[derive(Serialize)]
struct TraceLine<'a> {
    kind: &'static str,
    rule: Option<u8>,
    position: &'a [usize],
    before: String,
    after: String,
}

impl TraceEntry {
    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        let (kind, rule) = match self.kind {
            StepKind::Arrow(r) => ("arrow", Some(r)),
            StepKind::Algebraic => ("algebraic", None),
        };
        serde_json::to_string(&TraceLine {
            kind,
            rule,
            position: &self.position,
            before: self.before.to_string(),
            after: self.after.to_string(),
        })
        .expect("trace lines serialize")
    }
}

pub type Trace = Vec<TraceEntry>;

pub fn trace_to_json_lines(trace: &[TraceEntry]) -> String {
    trace.iter().map(|e| e.to_json_line() + "\n").collect()
}

/// A single `↪` step. An `↪` step that first rewrites to `⌊t⌋` and then
/// fires `→` is reported as two trace entries; the result is the last
/// entry's `after`.
pub fn step_hook(t: &Term) -> Option<Vec<TraceEntry>> {
    if t.is_value() {
        return None;
    }
    if let Some(s) = step_arrow(t) {
        return Some(vec![arrow_entry(t, s)]);
    }
    let c = canonicalize(t);
    let alg = TraceEntry {
        kind: StepKind::Algebraic,
        position: vec![],
        before: t.clone(),
        after: c.clone(),
    };
    if c.is_value() {
        return Some(vec![alg]);
    }
    let s = step_arrow(&c)?;
    let arrow = arrow_entry(&c, s);
    Some(vec![alg, arrow])
}

fn arrow_entry(t: &Term, s: ArrowStep) -> TraceEntry {
    TraceEntry {
        kind: StepKind::Arrow(s.rule),
        position: s.position,
        before: t.clone(),
        after: s.term,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum NormalizeError {
    #[error("fuel exhausted after {steps} steps")]
    FuelExhausted { steps: usize, last: Term },
    #[error("no reduction applies to the non-value term {term}")]
    Stuck { term: Term },
}

pub struct Normalized {
    pub value: Term,
    pub trace: Trace,
    pub steps: usize,
}

/// Iterates `↪` to a value and returns its algebraic form. `fuel` bounds the
/// number of `↪` steps. The trace is collected only when `record` is set.
pub fn normalize(t: &Term, fuel: usize, record: bool) -> Result<Normalized, NormalizeError> {
    normalize_with(t, fuel, record, canonicalize)
}

pub(crate) fn normalize_with(
    t: &Term,
    fuel: usize,
    record: bool,
    mut canon: impl FnMut(&Term) -> Term,
) -> Result<Normalized, NormalizeError> {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        if cur.is_value() {
            let value = canon(&cur);
            if value.is_value() {
                if record && !crate::syntax::alpha_eq(&value, &cur) {
                    trace.push(TraceEntry {
                        kind: StepKind::Algebraic,
                        position: vec![],
                        before: cur,
                        after: value.clone(),
                    });
                }
                return Ok(Normalized {
                    value,
                    trace,
                    steps,
                });
            }
            // The canonical form of a value is not always a value: reduce it.
            if record {
                trace.push(TraceEntry {
                    kind: StepKind::Algebraic,
                    position: vec![],
                    before: cur,
                    after: value.clone(),
                });
            }
            cur = value;
        }
        if steps >= fuel {
            return Err(NormalizeError::FuelExhausted { steps, last: cur });
        }
        let next = match step_arrow(&cur) {
            Some(s) => vec![arrow_entry(&cur, s)],
            None => {
                let c = canon(&cur);
                let alg = TraceEntry {
                    kind: StepKind::Algebraic,
                    position: vec![],
                    before: cur.clone(),
                    after: c.clone(),
                };
                if c.is_value() {
                    vec![alg]
                } else {
                    match step_arrow(&c) {
                        Some(s) => vec![alg, arrow_entry(&c, s)],
                        None => return Err(NormalizeError::Stuck { term: cur }),
                    }
                }
            }
        };
        steps += 1;
        cur = next.last().unwrap().after.clone();
        if record {
            trace.extend(next);
        }
    }
}
