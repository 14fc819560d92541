//! The cut-reduction relation `→` under the evaluation contexts `K`,
//! leftmost-outermost. Traces report rule numbers 1 to 14 and 16 to 19;
//! 15 is unused.

use crate::syntax::LeafShape;
use crate::syntax::{
    free_vars, fresh_name, is_base_value, is_neutral_value, pairwise_distinct, substitute,
    substitute_many, Fragment, Kind, Name, Scalar, Term,
};
use std::collections::BTreeSet;

/// One `→` step: the reduct of the whole term, the rule number and the
/// path (child indices) of the redex.
#[derive(Clone, Debug)]
pub struct ArrowStep {
    pub term: Term,
    pub rule: u8,
    pub position: Vec<usize>,
}

pub fn step_arrow(t: &Term) -> Option<ArrowStep> {
    let mut path = Vec::new();
    let (term, rule) = find(t, &mut path)?;
    Some(ArrowStep {
        term,
        rule,
        position: path,
    })
}

/// Whether some `→` rule applies at the root of `t`.
pub fn root_redex(t: &Term) -> Option<(Term, u8)> {
    root(t)
}

fn find(t: &Term, path: &mut Vec<usize>) -> Option<(Term, u8)> {
    if t.node().arrow_normal.get() == Some(&true) {
        return None;
    }
    if let Some(r) = root(t) {
        return Some(r);
    }
    for &i in k_positions(t) {
        path.push(i);
        if let Some((new, rule)) = find(t.children()[i], path) {
            let mut new = Some(new);
            let cs = t.children().into_iter().enumerate().map(|(j, c)| {
                if j == i {
                    new.take().unwrap()
                } else {
                    c.clone()
                }
            });
            return Some((t.with_children(cs), rule));
        }
        path.pop();
    }
    let _ = t.node().arrow_normal.set(true);
    None
}

/// Children of `t` that are holes of an evaluation context `K`, in search
/// order. Both summands of a sum are positions.
fn k_positions(t: &Term) -> &'static [usize] {
    match t.kind() {
        Kind::Var(_) | Kind::Star | Kind::Top | Kind::Lam(..) => &[],
        Kind::Sum(..) => &[0, 1],
        Kind::Scale(..)
        | Kind::Abort(_)
        | Kind::ElimOne(..)
        | Kind::ElimWith(..)
        | Kind::Inl(_)
        | Kind::Inr(_)
        | Kind::ElimPlus(..)
        | Kind::ElimTensor(..)
        | Kind::Bang(_)
        | Kind::Tau(_) => &[0],
        Kind::App(m, _) | Kind::Pair(m, _) | Kind::Tensor(m, _) => {
            if m.is_value() {
                &[0, 1]
            } else {
                &[0]
            }
        }
    }
}

/// Flattens nested sums and scalings into `(coefficient, atom)` pairs; the
/// atoms are neither sums nor scalings.
pub(crate) fn flatten(t: &Term) -> Vec<(Scalar, Term)> {
    let mut out = Vec::new();
    flatten_into(t, Scalar::ONE, &mut out);
    out
}

fn flatten_into(t: &Term, k: Scalar, out: &mut Vec<(Scalar, Term)>) {
    match t.kind() {
        Kind::Sum(a, b) => {
            flatten_into(a, k, out);
            flatten_into(b, k, out);
        }
        Kind::Scale(s, m) => flatten_into(m, k * *s, out),
        _ => out.push((k, t.clone())),
    }
}

fn is_lincomb(t: &Term) -> bool {
    matches!(t.kind(), Kind::Sum(..) | Kind::Scale(..))
}

fn distinct(atoms: &[(Scalar, Term)]) -> bool {
    pairwise_distinct(&atoms.iter().map(|(_, a)| a).collect::<Vec<_>>())
}

/// `Σ αᵢ·Mᵢ` with coefficient-1 summands left bare.
pub(crate) fn lincomb(items: Vec<(Scalar, Term)>) -> Term {
    let leaf = |(a, m): (Scalar, Term)| if a.is_one() { m } else { Term::scale(a, m) };
    let mut it = items.into_iter();
    let mut acc = leaf(it.next().expect("nonempty sum"));
    for x in it {
        acc = Term::sum(acc, leaf(x));
    }
    acc
}

/// Atoms of a linear combination of base values, when distinct.
fn base_value_sum(t: &Term) -> Option<Vec<(Scalar, Term)>> {
    if !is_lincomb(t) {
        return None;
    }
    let atoms = flatten(t);
    (atoms.iter().all(|(_, a)| is_base_value(a)) && distinct(&atoms)).then_some(atoms)
}

fn subst(m: &Term, x: &Name, v: &Term) -> Term {
    substitute(m, x, v).expect("fragments agree in well-typed terms")
}

fn root(t: &Term) -> Option<(Term, u8)> {
    match t.kind() {
        Kind::ElimOne(s, m) => {
            let alpha = match s.kind() {
                Kind::Star => Scalar::ONE,
                Kind::Scale(a, u) if matches!(u.kind(), Kind::Star) => *a,
                _ => return None,
            };
            Some((lincomb(vec![(alpha, m.clone())]), 1))
        }
        Kind::App(f, v) => {
            if let Kind::Lam(x, m) = f.kind() {
                return v.is_value().then(|| (subst(m, x, v), 2));
            }
            rule19(f, v).map(|r| (r, 19))
        }
        Kind::ElimWith(i, p, x, body) => match p.kind() {
            Kind::Pair(v, w) if v.is_value() && w.is_value() => {
                let c = if *i == 1 { v } else { w };
                Some((subst(body, x, c), 2 + *i))
            }
            _ => None,
        },
        Kind::ElimPlus(m, x, n, y, o) => match m.kind() {
            Kind::Inl(v) if v.is_value() => Some((subst(n, x, v), 5)),
            Kind::Inr(v) if v.is_value() => Some((subst(o, y, v), 6)),
            _ => {
                let atoms = base_value_sum(m)?;
                let items = atoms
                    .into_iter()
                    .map(|(p, vb)| {
                        (
                            p,
                            Term::elim_plus_named(vb, x.clone(), n.clone(), y.clone(), o.clone()),
                        )
                    })
                    .collect();
                Some((lincomb(items), 11))
            }
        },
        Kind::ElimTensor(m, x, y, body) => match m.kind() {
            Kind::Tensor(v, w) if is_neutral_value(v) && is_neutral_value(w) => {
                let r = substitute_many(body, &[(x.clone(), v.clone()), (y.clone(), w.clone())])
                    .expect("fragments agree in well-typed terms");
                Some((r, 7))
            }
            _ => {
                let atoms = base_value_sum(m)?;
                let items = atoms
                    .into_iter()
                    .map(|(a, vb)| {
                        (
                            a,
                            Term::elim_tensor_named(vb, x.clone(), y.clone(), body.clone()),
                        )
                    })
                    .collect();
                Some((lincomb(items), 12))
            }
        },
        Kind::Scale(_, m) if matches!(m.kind(), Kind::Top) => Some((m.clone(), 8)),
        Kind::Sum(..) | Kind::Scale(..) => {
            let shape = t.leaf_shape();
            if shape == LeafShape::Other {
                return None;
            }
            let atoms = flatten(t);
            if !distinct(&atoms) {
                return None;
            }
            if shape == LeafShape::Lam {
                return Some((rule9(&atoms), 9));
            }
            let (mut ls, mut rs) = (Vec::new(), Vec::new());
            for (a, p) in &atoms {
                let Kind::Pair(v, w) = p.kind() else {
                    unreachable!()
                };
                ls.push((*a, v.clone()));
                rs.push((*a, w.clone()));
            }
            Some((Term::pair(lincomb(ls), lincomb(rs)), 10))
        }
        Kind::Inl(m) | Kind::Inr(m) => {
            let atoms = base_value_sum(m)?;
            let left = matches!(t.kind(), Kind::Inl(_));
            let items = atoms
                .into_iter()
                .map(|(p, vb)| (p, if left { Term::inl(vb) } else { Term::inr(vb) }))
                .collect();
            Some((lincomb(items), if left { 13 } else { 14 }))
        }
        Kind::Tau(m) => {
            if let Kind::Tensor(a, b) = m.kind() {
                if let (Kind::Bang(v), Kind::Bang(w)) = (a.kind(), b.kind()) {
                    if v.is_value() && w.is_value() {
                        return Some((Term::bang(Term::tensor(v.clone(), w.clone())), 16));
                    }
                }
            }
            let atoms = base_value_sum(m)?;
            let items = atoms
                .into_iter()
                .map(|(p, vb)| (p, Term::tau(vb)))
                .collect();
            Some((lincomb(items), 17))
        }
        Kind::Bang(m) => match m.kind() {
            Kind::Scale(a, vb) if !a.is_one() && is_base_value(vb) => {
                let k = Scalar::real(a.norm_sqr());
                Some((lincomb(vec![(k, Term::bang(vb.clone()))]), 18))
            }
            _ => None,
        },
        _ => None,
    }
}

/// `Σ αᵢ·λx.Mᵢ → λx.Σ αᵢ·Mᵢ`, renaming binders to a common fresh name.
fn rule9(atoms: &[(Scalar, Term)]) -> Term {
    let lams: Vec<(&Name, &Term)> = atoms
        .iter()
        .map(|(_, l)| match l.kind() {
            Kind::Lam(x, m) => (x, m),
            _ => unreachable!(),
        })
        .collect();
    let first = lams[0].0.clone();
    let mut avoid = BTreeSet::new();
    for (_, l) in atoms {
        avoid.extend(free_vars(l));
    }
    let x = if avoid.contains(&first) {
        fresh_name(&first, &avoid)
    } else {
        first
    };
    let frag = atoms[0].1.frag();
    let xv = Term::var_named(frag, x.clone());
    let items = atoms
        .iter()
        .zip(&lams)
        .map(|((a, _), (y, m))| {
            let body = if **y == x {
                (*m).clone()
            } else {
                subst(m, y, &xv)
            };
            (*a, body)
        })
        .collect();
    Term::lam_named(x, lincomb(items))
}

/// `(Σ pᵢ·𝓑(vᵢ)) (Σ qⱼ·𝓑(wⱼ)) → Σ pᵢqⱼ·𝓑(vᵢ wⱼ)`.
fn rule19(f: &Term, a: &Term) -> Option<Term> {
    if f.frag() != Fragment::Mixed {
        return None;
    }
    let bangs = |t: &Term| -> Option<Vec<(Scalar, Term)>> {
        let atoms = flatten(t);
        atoms
            .into_iter()
            .map(|(p, b)| match b.kind() {
                Kind::Bang(v) if v.is_value() => Some((p, v.clone())),
                _ => None,
            })
            .collect()
    };
    let (fs, xs) = (bangs(f)?, bangs(a)?);
    let mut items = Vec::with_capacity(fs.len() * xs.len());
    for (p, v) in &fs {
        for (q, w) in &xs {
            items.push((*p * *q, Term::bang(Term::app(v.clone(), w.clone()))));
        }
    }
    Some(lincomb(items))
}
