use super::{Kind, Name, Term};
use std::collections::{BTreeSet, HashMap};

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    (**t.free_var_set()).clone()
}

pub fn is_closed(t: &Term) -> bool {
    t.free_var_set().is_empty()
}

/// All names occurring in `t`, bound or free.
pub fn all_names(t: &Term, out: &mut BTreeSet<Name>) {
    if let Kind::Var(x) = t.kind() {
        out.insert(x.clone());
    }
    for i in 0..t.children().len() {
        out.extend(t.binders_of_child(i));
    }
    for c in t.children() {
        all_names(c, out);
    }
}

/// A variant of `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(base) {
        return base.into();
    }
    (1..)
        .map(|k| format!("{stem}_{k}"))
        .find(|c| !avoid.contains(c.as_str()))
        .unwrap()
        .into()
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot substitute a {found} term for the {expected} variable `{var}`")]
pub struct FragmentMismatch {
    pub var: String,
    pub expected: super::Fragment,
    pub found: super::Fragment,
}

/// Capture-avoiding `(v/x)t`. The fragment of `v` must match the fragment
/// of the occurrences of `x` in `t`.
pub fn substitute(t: &Term, x: &str, v: &Term) -> Result<Term, FragmentMismatch> {
    substitute_many(t, &[(x.into(), v.clone())])
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute_many(t: &Term, sub: &[(Name, Term)]) -> Result<Term, FragmentMismatch> {
    let map: HashMap<Name, Term> = sub.iter().cloned().collect();
    let mut fv_sub = BTreeSet::new();
    for (_, v) in sub {
        fv_sub.extend(free_vars(v));
    }
    subst_rec(t, &map, &fv_sub)
}

fn subst_rec(
    t: &Term,
    map: &HashMap<Name, Term>,
    fv_sub: &BTreeSet<Name>,
) -> Result<Term, FragmentMismatch> {
    if map.is_empty() {
        return Ok(t.clone());
    }
    match t.kind() {
        Kind::Var(x) => match map.get(x) {
            Some(v) => {
                if v.frag() != t.frag() {
                    return Err(FragmentMismatch {
                        var: x.to_string(),
                        expected: t.frag(),
                        found: v.frag(),
                    });
                }
                Ok(v.clone())
            }
            None => Ok(t.clone()),
        },
        Kind::Top | Kind::Star => Ok(t.clone()),
        _ => {
            // The node is rebuilt only when a binder must be renamed or a
            // child changes; untouched subtrees stay shared.
            let mut renames: Vec<(Name, Name)> = Vec::new();
            let mut cs = Vec::new();
            let mut changed = false;
            for (i, c) in t.children().into_iter().enumerate() {
                let bs = t.binders_of_child(i);
                let mut inner = map.clone();
                for b in &bs {
                    inner.remove(b);
                }
                let mut c2 = c.clone();
                if !inner.is_empty() {
                    let fv_c = c.free_var_set();
                    inner.retain(|k, _| fv_c.contains(k));
                }
                if inner.is_empty() {
                    cs.push(c2);
                    continue;
                }
                for b in &bs {
                    if fv_sub.contains(b) {
                        let mut avoid = fv_sub.clone();
                        all_names(c, &mut avoid);
                        avoid.extend(inner.keys().cloned());
                        avoid.extend(renames.iter().map(|(_, n)| n.clone()));
                        let fresh = fresh_name(b, &avoid);
                        let var = Term::var_named(var_frag(t, i), fresh.clone());
                        c2 = subst_rec(
                            &c2,
                            &[(b.clone(), var)].into_iter().collect(),
                            &[fresh.clone()].into_iter().collect(),
                        )?;
                        renames.push((b.clone(), fresh));
                    }
                }
                let fv_inner: BTreeSet<Name> = inner.values().flat_map(free_vars).collect();
                cs.push(subst_rec(&c2, &inner, &fv_inner)?);
                changed = true;
            }
            if !changed {
                return Ok(t.clone());
            }
            let rebuilt = t.with_children(cs);
            Ok(if renames.is_empty() {
                rebuilt
            } else {
                rename_binders(&rebuilt, &renames)
            })
        }
    }
}

/// Fragment of variables bound by the binders of child `i` of `t`.
fn var_frag(t: &Term, i: usize) -> super::Fragment {
    t.children()[i].frag()
}

/// Renames binder names of the root node only (bodies already renamed).
fn rename_binders(t: &Term, renames: &[(Name, Name)]) -> Term {
    let r = |x: &Name| -> Name {
        renames
            .iter()
            .find(|(o, _)| o == x)
            .map(|(_, n)| n.clone())
            .unwrap_or_else(|| x.clone())
    };
    let f = t.frag();
    let kind = match t.kind().clone() {
        Kind::Lam(x, b) => Kind::Lam(r(&x), b),
        Kind::ElimWith(i, m, x, n) => Kind::ElimWith(i, m, r(&x), n),
        Kind::ElimPlus(m, x, n, y, o) => Kind::ElimPlus(m, r(&x), n, r(&y), o),
        Kind::ElimTensor(m, x, y, n) => Kind::ElimTensor(m, r(&x), r(&y), n),
        k => k,
    };
    Term::new_spanned(kind, f, t.span())
}

/// Renames every binder to a name distinct from all other binders and from
/// `avoid`, producing an α-equivalent term with no shadowing.
pub fn rename_apart(t: &Term, avoid: &BTreeSet<Name>) -> Term {
    let mut used = avoid.clone();
    used.extend(free_vars(t));
    rename_apart_rec(t, &mut HashMap::new(), &mut used)
}

fn rename_apart_rec(t: &Term, env: &mut HashMap<Name, Name>, used: &mut BTreeSet<Name>) -> Term {
    match t.kind() {
        Kind::Var(x) => match env.get(x) {
            Some(n) if n != x => Term::var_named(t.frag(), n.clone()),
            _ => t.clone(),
        },
        Kind::Top | Kind::Star => t.clone(),
        _ => {
            let mut cs = Vec::new();
            let mut new_binders: Vec<Vec<Name>> = Vec::new();
            for (i, c) in t.children().into_iter().enumerate() {
                let bs = t.binders_of_child(i);
                let mut saved = Vec::new();
                let mut fresh_bs = Vec::new();
                for b in &bs {
                    let fresh = fresh_name(b, used);
                    used.insert(fresh.clone());
                    saved.push((b.clone(), env.insert(b.clone(), fresh.clone())));
                    fresh_bs.push(fresh);
                }
                cs.push(rename_apart_rec(c, env, used));
                for (b, old) in saved.into_iter().rev() {
                    match old {
                        Some(o) => env.insert(b, o),
                        None => env.remove(&b),
                    };
                }
                new_binders.push(fresh_bs);
            }
            let rebuilt = t.with_children(cs);
            let f = t.frag();
            let kind = match rebuilt.kind().clone() {
                Kind::Lam(_, b) => Kind::Lam(new_binders[0][0].clone(), b),
                Kind::ElimWith(i, m, _, n) => Kind::ElimWith(i, m, new_binders[1][0].clone(), n),
                Kind::ElimPlus(m, _, n, _, o) => Kind::ElimPlus(
                    m,
                    new_binders[1][0].clone(),
                    n,
                    new_binders[2][0].clone(),
                    o,
                ),
                Kind::ElimTensor(m, _, _, n) => {
                    Kind::ElimTensor(m, new_binders[1][0].clone(), new_binders[1][1].clone(), n)
                }
                _ => return rebuilt,
            };
            Term::new_spanned(kind, f, t.span())
        }
    }
}
