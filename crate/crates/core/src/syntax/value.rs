use super::{pairwise_distinct, Fragment, Kind, Scalar, Term, ValueClass};

pub fn classify(t: &Term) -> ValueClass {
    use ValueClass::*;
    let neutral = |c: &Term| matches!(c.value_class(), BaseValue | NeutralValue);
    match t.kind() {
        Kind::Var(_) | Kind::Star => BaseValue,
        Kind::Top | Kind::Lam(..) => NeutralValue,
        Kind::Pair(a, b) if a.is_value() && b.is_value() => NeutralValue,
        Kind::Tensor(a, b) if neutral(a) && neutral(b) => BaseValue,
        Kind::Inl(a) | Kind::Inr(a) if neutral(a) => BaseValue,
        Kind::Bang(v) if v.is_value() && !is_rule18_redex(v) => BaseValue,
        Kind::Sum(..) | Kind::Scale(..) if is_value_sum(t) => Value,
        _ => NotValue,
    }
}

pub fn is_base_value(t: &Term) -> bool {
    t.value_class() == ValueClass::BaseValue
}

/// Base or neutral: a value that is not a linear combination.
pub fn is_neutral_value(t: &Term) -> bool {
    matches!(
        t.value_class(),
        ValueClass::BaseValue | ValueClass::NeutralValue
    )
}

/// `a·v_b` with `a ≠ 1`, which is not a value under 𝓑.
fn is_rule18_redex(v: &Term) -> bool {
    matches!(v.kind(), Kind::Scale(a, b) if !a.is_one() && is_base_value(b))
}

/// Flattens nested sums into their leaves, left to right.
pub(crate) fn sum_leaves(t: &Term) -> Vec<&Term> {
    let mut out = Vec::new();
    let mut stack = vec![t];
    while let Some(u) = stack.pop() {
        match u.kind() {
            Kind::Sum(a, b) => {
                stack.push(b);
                stack.push(a);
            }
            _ => out.push(u),
        }
    }
    out
}

fn is_value_sum(t: &Term) -> bool {
    let leaves = sum_leaves(t);
    let mut atoms: Vec<&Term> = Vec::with_capacity(leaves.len());
    let mut coeffs: Vec<Option<Scalar>> = Vec::with_capacity(leaves.len());
    for l in &leaves {
        match l.kind() {
            Kind::Scale(a, b) if is_base_value(b) => {
                atoms.push(b);
                coeffs.push(Some(*a));
            }
            Kind::Scale(..) => return false,
            _ if is_base_value(l) => {
                atoms.push(l);
                coeffs.push(None);
            }
            _ => return false,
        }
    }
    if atoms.len() == 1 && coeffs[0].is_none() {
        // a lone base value is classified by its own constructor
        return false;
    }
    if !pairwise_distinct(&atoms) {
        return false;
    }
    let all_zero = coeffs.iter().all(|c| matches!(c, Some(a) if a.is_zero()));
    if all_zero {
        return true;
    }
    let mixed = t.frag() == Fragment::Mixed;
    coeffs.iter().all(|c| match c {
        None => true,
        Some(a) if mixed => a.re() > 0.0 && !a.is_one(),
        Some(a) => !a.is_zero() && !a.is_one(),
    })
}
