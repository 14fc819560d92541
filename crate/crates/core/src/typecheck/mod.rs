//! Linear type checking. Checking runs in two passes: the first walks the
//! term, solving proposition unknowns and computing which variables each
//! subterm consumes; the second lays out the exact context of every
//! derivation node, inserting exchange nodes where the order differs.

mod derivation;
mod ty;

pub use derivation::{validate, Context, Derivation, Judgement, Rule};

use crate::syntax::{free_vars, rename_apart, Fragment, Kind, Name, Prop, Span, Term};
use std::collections::BTreeSet;
use ty::{Metas, Ty};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, serde::Serialize)]
#[error("{rule}: {message}")]
pub struct TypeError {
    pub rule: String,
    pub span: Option<Span>,
    pub message: String,
}

impl TypeError {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Checks `ctx ⊢ t : prop` and returns its derivation.
pub fn check(ctx: &[(Name, Prop)], t: &Term, prop: &Prop) -> Result<Derivation, TypeError> {
    run(ctx, t, Some(prop)).map(|(_, d)| d)
}

/// Synthesizes the proposition of `t`. Fails when some part of the result is
/// left undetermined by the term.
pub fn infer(ctx: &[(Name, Prop)], t: &Term) -> Result<(Prop, Derivation), TypeError> {
    run(ctx, t, None)
}

fn err(rule: &str, t: &Term, message: impl Into<String>) -> TypeError {
    TypeError {
        rule: rule.into(),
        span: t.span(),
        message: message.into(),
    }
}

fn run(
    ctx: &[(Name, Prop)],
    t: &Term,
    expected: Option<&Prop>,
) -> Result<(Prop, Derivation), TypeError> {
    t.check_fragments().map_err(|m| err("fragment", t, m))?;
    let frag = t.frag();
    let mut names = BTreeSet::new();
    for (x, p) in ctx {
        if !names.insert(x.clone()) {
            return Err(err("context", t, format!("variable `{x}` declared twice")));
        }
        p.well_formed().map_err(|m| err("context", t, m))?;
        if p.fragment() != frag {
            return Err(err(
                "fragment",
                t,
                format!("context entry `{x} : {p}` is not {frag}"),
            ));
        }
    }
    if let Some(p) = expected {
        p.well_formed().map_err(|m| err("fragment", t, m))?;
        if p.fragment() != frag {
            return Err(err(
                "fragment",
                t,
                format!(
                    "a {frag} term cannot have the {} proposition {p}",
                    p.fragment()
                ),
            ));
        }
    }
    for x in free_vars(t) {
        if !names.contains(&x) {
            return Err(err("ax", t, format!("unbound variable `{x}`")));
        }
    }
    let t = rename_apart(t, &names);
    let mut ck = Checker {
        metas: Metas::default(),
        env: ctx
            .iter()
            .map(|(x, p)| (x.clone(), Ty::from_prop(p)))
            .collect(),
    };
    let root_ty = match expected {
        Some(p) => Ty::from_prop(p),
        None => ck.metas.fresh(frag),
    };
    let pre = ck.pre(&t, root_ty.clone(), &names)?;
    if !pre.slack {
        if let Some((x, _)) = ctx.iter().find(|(x, _)| !pre.used.contains(x)) {
            return Err(err(
                "linearity",
                &t,
                format!("variable `{x}` is never used"),
            ));
        }
    }
    let prop = match ck.metas.to_prop(&root_ty) {
        Some(p) => p,
        None if expected.is_none() => {
            return Err(err(
                "infer",
                &t,
                format!(
                    "cannot synthesize a proposition, found {}",
                    ck.metas.show(&root_ty)
                ),
            ))
        }
        None => unreachable!("the root type is the declared proposition"),
    };
    ck.metas.default_all();
    let d = ck.build(&pre, ctx.to_vec());
    Ok((prop, d))
}

/// First-pass result for one subterm.
struct Pre {
    term: Term,
    ty: Ty,
    rule: Rule,
    /// Variables consumed by the subterm (binders of the node excluded).
    used: BTreeSet<Name>,
    /// The subterm can absorb additional context (contains ⊤ᵢ or 𝟘ₑ in a
    /// position that may weaken).
    slack: bool,
    kids: Vec<Pre>,
    /// Binder declarations appended to each kid's context.
    binders: Vec<Vec<(Name, Ty)>>,
}

struct Checker {
    metas: Metas,
    env: Vec<(Name, Ty)>,
}

impl Checker {
    fn unify(&mut self, rule: &str, t: &Term, expected: &Ty, found: &Ty) -> Result<(), TypeError> {
        self.metas
            .unify(expected, found)
            .map_err(|m| err(rule, t, m))
    }

    fn lookup(&self, x: &str) -> Option<Ty> {
        self.env
            .iter()
            .rev()
            .find(|(y, _)| &**y == x)
            .map(|(_, t)| t.clone())
    }

    fn pre_bound(
        &mut self,
        t: &Term,
        ty: Ty,
        avail: &BTreeSet<Name>,
        binders: &[(Name, Ty)],
    ) -> Result<Pre, TypeError> {
        let mut avail = avail.clone();
        for (x, bt) in binders {
            avail.insert(x.clone());
            self.env.push((x.clone(), bt.clone()));
        }
        let r = self.pre(t, ty, &avail);
        self.env.truncate(self.env.len() - binders.len());
        r
    }

    fn pre(&mut self, t: &Term, ty: Ty, avail: &BTreeSet<Name>) -> Result<Pre, TypeError> {
        let f = t.frag();
        let node = |rule: Rule, kids: Vec<Pre>, binders: Vec<Vec<(Name, Ty)>>| Pre {
            term: t.clone(),
            ty: ty.clone(),
            rule,
            used: BTreeSet::new(),
            slack: false,
            kids,
            binders,
        };
        let none = || -> Vec<Vec<(Name, Ty)>> { vec![] };
        match t.kind() {
            Kind::Var(x) => {
                let Some(xt) = self.lookup(x) else {
                    return Err(err("ax", t, format!("unbound variable `{x}`")));
                };
                if !avail.contains(x) {
                    return Err(err("linearity", t, format!("variable `{x}` used twice")));
                }
                self.unify("ax", t, &ty, &xt)?;
                let mut p = node(Rule::Ax, vec![], none());
                p.used.insert(x.clone());
                Ok(p)
            }
            Kind::Sum(a, b) => {
                let pa = self.pre(a, ty.clone(), avail)?;
                let pb = self.pre(b, ty.clone(), avail)?;
                let (used, slack) =
                    additive(t, "sum", &[(&pa.used, pa.slack), (&pb.used, pb.slack)])?;
                let mut p = node(Rule::Sum, vec![pa, pb], none());
                p.used = used;
                p.slack = slack;
                Ok(p)
            }
            Kind::Scale(s, m) => {
                let pm = self.pre(m, ty.clone(), avail)?;
                let mut p = node(Rule::Prod(*s), vec![], none());
                p.used = pm.used.clone();
                p.slack = pm.slack;
                p.kids.push(pm);
                Ok(p)
            }
            Kind::Top => {
                self.unify("top_i", t, &ty, &Ty::Top)?;
                let mut p = node(Rule::TopI, vec![], none());
                p.slack = true;
                Ok(p)
            }
            Kind::Star => {
                self.unify("one_i", t, &ty, &Ty::One(f))?;
                Ok(node(Rule::OneI, vec![], none()))
            }
            Kind::ElimOne(m, n) => {
                let pm = self.pre(m, Ty::One(f), avail)?;
                let rest = minus(avail, &pm.used);
                let pn = self.pre(n, ty.clone(), &rest)?;
                Ok(multiplicative(node(Rule::OneE, vec![pm, pn], none())))
            }
            Kind::Lam(x, b) => {
                let (a, c) = (self.metas.fresh(f), self.metas.fresh(f));
                self.unify("lolli_i", t, &ty, &Ty::lolli(f, a.clone(), c.clone()))?;
                let bs = vec![(x.clone(), a)];
                let pb = self.pre_bound(b, c, avail, &bs)?;
                let mut p = node(Rule::LolliI, vec![], vec![bs]);
                p.used = bind(t, "lolli_i", &pb, std::slice::from_ref(x))?;
                p.slack = pb.slack;
                p.kids.push(pb);
                Ok(p)
            }
            Kind::App(m, n) => {
                // The argument is checked first so that a function bound by
                // a lambda already knows its type.
                let nt = self.metas.fresh(f);
                let pn = self.pre(n, nt.clone(), avail)?;
                let rest = minus(avail, &pn.used);
                // A lambda in function position can only be typed by ⊸ₑ, so
                // the argument type is pushed into its binder.
                let mt = match m.kind() {
                    Kind::Lam(..) => Ty::lolli(f, nt.clone(), ty.clone()),
                    _ => self.metas.fresh(f),
                };
                let pm = self.pre(m, mt.clone(), &rest)?;
                let rule = match self.metas.resolve(&mt) {
                    Ty::Bang(inner) if f == Fragment::Mixed => {
                        let (p, q) = (
                            self.metas.fresh(Fragment::Pure),
                            self.metas.fresh(Fragment::Pure),
                        );
                        self.metas
                            .unify(&Ty::lolli(Fragment::Pure, p.clone(), q.clone()), &inner)
                            .map_err(|_| {
                                err(
                                    "bang_lolli_e",
                                    t,
                                    format!(
                                        "function must have type B(P -o Q), found {}",
                                        self.metas.show(&mt)
                                    ),
                                )
                            })?;
                        self.unify("bang_lolli_e", n, &Ty::bang(p), &nt)?;
                        self.unify("bang_lolli_e", t, &ty, &Ty::bang(q))?;
                        Rule::BangLolliE
                    }
                    _ => {
                        self.unify("lolli_e", m, &Ty::lolli(f, nt, ty.clone()), &mt)?;
                        Rule::LolliE
                    }
                };
                Ok(multiplicative(node(rule, vec![pm, pn], none())))
            }
            Kind::Pair(a, b) => {
                let (p, q) = (self.metas.fresh(f), self.metas.fresh(f));
                self.unify("with_i", t, &ty, &Ty::with(p.clone(), q.clone()))?;
                let pa = self.pre(a, p, avail)?;
                let pb = self.pre(b, q, avail)?;
                let (used, slack) =
                    additive(t, "with_i", &[(&pa.used, pa.slack), (&pb.used, pb.slack)])?;
                let mut p = node(Rule::WithI, vec![pa, pb], none());
                p.used = used;
                p.slack = slack;
                Ok(p)
            }
            Kind::ElimWith(i, m, x, n) => {
                let (p, q) = (self.metas.fresh(f), self.metas.fresh(f));
                let pm = self.pre(m, Ty::with(p.clone(), q.clone()), avail)?;
                let rest = minus(avail, &pm.used);
                let bs = vec![(x.clone(), if *i == 1 { p } else { q })];
                let pn = self.pre_bound(n, ty.clone(), &rest, &bs)?;
                let rule = Rule::WithE(*i);
                let nused = bind(t, rule.name(), &pn, std::slice::from_ref(x))?;
                let mut p = node(rule, vec![], vec![vec![], bs]);
                p.used = pm.used.union(&nused).cloned().collect();
                p.slack = pm.slack || pn.slack;
                p.kids = vec![pm, pn];
                Ok(p)
            }
            Kind::Inl(m) | Kind::Inr(m) => {
                let (a, b) = (self.metas.fresh(f), self.metas.fresh(f));
                let left = matches!(t.kind(), Kind::Inl(_));
                let rule = Rule::PlusI(if left { 1 } else { 2 });
                self.unify(rule.name(), t, &ty, &Ty::plus(a.clone(), b.clone()))?;
                let pm = self.pre(m, if left { a } else { b }, avail)?;
                let mut p = node(rule, vec![], none());
                p.used = pm.used.clone();
                p.slack = pm.slack;
                p.kids.push(pm);
                Ok(p)
            }
            Kind::ElimPlus(m, x, n, y, o) => {
                let (a, b) = (self.metas.fresh(f), self.metas.fresh(f));
                let pm = self.pre(m, Ty::plus(a.clone(), b.clone()), avail)?;
                let rest = minus(avail, &pm.used);
                let bx = vec![(x.clone(), a)];
                let by = vec![(y.clone(), b)];
                let pn = self.pre_bound(n, ty.clone(), &rest, &bx)?;
                let po = self.pre_bound(o, ty.clone(), &rest, &by)?;
                let nu = bind(t, "plus_e", &pn, std::slice::from_ref(x))?;
                let ou = bind(t, "plus_e", &po, std::slice::from_ref(y))?;
                let (bu, bslack) = additive(t, "plus_e", &[(&nu, pn.slack), (&ou, po.slack)])?;
                let mut p = node(Rule::PlusE, vec![], vec![vec![], bx, by]);
                p.used = pm.used.union(&bu).cloned().collect();
                p.slack = pm.slack || bslack;
                p.kids = vec![pm, pn, po];
                Ok(p)
            }
            Kind::Tensor(a, b) => {
                let (s1, s2) = (self.metas.fresh(f), self.metas.fresh(f));
                self.unify("tensor_i", t, &ty, &Ty::tensor(f, s1.clone(), s2.clone()))?;
                let pa = self.pre(a, s1, avail)?;
                let rest = minus(avail, &pa.used);
                let pb = self.pre(b, s2, &rest)?;
                Ok(multiplicative(node(Rule::TensorI, vec![pa, pb], none())))
            }
            Kind::ElimTensor(m, x, y, n) => {
                let (s1, s2) = (self.metas.fresh(f), self.metas.fresh(f));
                let pm = self.pre(m, Ty::tensor(f, s1.clone(), s2.clone()), avail)?;
                let rest = minus(avail, &pm.used);
                let bs = vec![(x.clone(), s1), (y.clone(), s2)];
                let pn = self.pre_bound(n, ty.clone(), &rest, &bs)?;
                let nused = bind(t, "tensor_e", &pn, &[x.clone(), y.clone()])?;
                let mut p = node(Rule::TensorE, vec![], vec![vec![], bs]);
                p.used = pm.used.union(&nused).cloned().collect();
                p.slack = pm.slack || pn.slack;
                p.kids = vec![pm, pn];
                Ok(p)
            }
            Kind::Abort(m) => {
                let pm = self.pre(m, Ty::Zero, avail)?;
                let mut p = node(Rule::ZeroE, vec![], none());
                p.used = pm.used.clone();
                p.slack = true;
                p.kids.push(pm);
                Ok(p)
            }
            Kind::Bang(m) => {
                if let Some(x) = free_vars(m).into_iter().next() {
                    return Err(err(
                        "bang",
                        t,
                        format!("B requires a closed pure term, but `{x}` is free"),
                    ));
                }
                let p = self.metas.fresh(Fragment::Pure);
                self.unify("bang", t, &ty, &Ty::bang(p.clone()))?;
                let saved = std::mem::take(&mut self.env);
                let pm = self.pre(m, p, &BTreeSet::new());
                self.env = saved;
                Ok(node(Rule::BangI, vec![pm?], none()))
            }
            Kind::Tau(m) => {
                let (p, q) = (
                    self.metas.fresh(Fragment::Pure),
                    self.metas.fresh(Fragment::Pure),
                );
                self.unify(
                    "bang_tensor",
                    t,
                    &ty,
                    &Ty::bang(Ty::tensor(Fragment::Pure, p.clone(), q.clone())),
                )?;
                let want = Ty::tensor(Fragment::Mixed, Ty::bang(p), Ty::bang(q));
                let mt = self.metas.fresh(Fragment::Mixed);
                let pm = self.pre(m, mt.clone(), avail)?;
                self.metas.unify(&want, &mt).map_err(|_| {
                    err(
                        "bang_tensor",
                        t,
                        format!(
                            "tau expects an argument of type B(P) * B(Q), found {}",
                            self.metas.show(&mt)
                        ),
                    )
                })?;
                let mut p = node(Rule::BangTensor, vec![], none());
                p.used = pm.used.clone();
                p.slack = pm.slack;
                p.kids.push(pm);
                Ok(p)
            }
        }
    }

    fn prop(&self, t: &Ty) -> Prop {
        self.metas.to_prop(t).expect("all unknowns defaulted")
    }

    fn build(&self, pre: &Pre, ctx: Context) -> Derivation {
        let prop = self.prop(&pre.ty);
        let binders = |k: usize| -> Context {
            pre.binders
                .get(k)
                .map(|bs| bs.iter().map(|(x, t)| (x.clone(), self.prop(t))).collect())
                .unwrap_or_default()
        };
        let with_binders = |mut c: Context, k: usize| {
            c.extend(binders(k));
            c
        };
        let (rule_ctx, premises) = match &pre.rule {
            Rule::Ax | Rule::TopI | Rule::OneI => (ctx.clone(), vec![]),
            Rule::BangI => (ctx.clone(), vec![self.build(&pre.kids[0], vec![])]),
            Rule::Sum | Rule::Prod(_) | Rule::WithI | Rule::PlusI(_) | Rule::BangTensor => {
                let ps = pre
                    .kids
                    .iter()
                    .map(|k| self.build(k, ctx.clone()))
                    .collect();
                (ctx.clone(), ps)
            }
            Rule::LolliI => (
                ctx.clone(),
                vec![self.build(&pre.kids[0], with_binders(ctx.clone(), 0))],
            ),
            Rule::ZeroE => {
                let gamma = filter(&ctx, &pre.kids[0].used);
                let delta: Context = ctx
                    .iter()
                    .filter(|(x, _)| !pre.kids[0].used.contains(x))
                    .cloned()
                    .collect();
                let d = self.build(&pre.kids[0], gamma.clone());
                let mut c = gamma;
                c.extend(delta);
                (c, vec![d])
            }
            Rule::OneE
            | Rule::LolliE
            | Rule::BangLolliE
            | Rule::WithE(_)
            | Rule::TensorI
            | Rule::TensorE
            | Rule::PlusE => {
                // Kid groups in the order their contexts are concatenated.
                let groups: Vec<Vec<usize>> = match pre.rule {
                    Rule::PlusE => vec![vec![0], vec![1, 2]],
                    _ => vec![vec![0], vec![1]],
                };
                let group_used = |g: &[usize]| -> (BTreeSet<Name>, bool) {
                    let mut u = BTreeSet::new();
                    for &k in g {
                        u.extend(pre.kids[k].used.iter().cloned());
                        for (x, _) in pre.binders.get(k).into_iter().flatten() {
                            u.remove(x);
                        }
                    }
                    (u, g.iter().all(|&k| pre.kids[k].slack))
                };
                let infos: Vec<_> = groups.iter().map(|g| group_used(g)).collect();
                let all: BTreeSet<Name> =
                    infos.iter().flat_map(|(u, _)| u.iter().cloned()).collect();
                let extras: BTreeSet<Name> = ctx
                    .iter()
                    .map(|(x, _)| x.clone())
                    .filter(|x| !all.contains(x))
                    .collect();
                let mut given = false;
                let mut shares = Vec::new();
                for (u, slack) in &infos {
                    let mut u = u.clone();
                    if *slack && !given {
                        u.extend(extras.iter().cloned());
                        given = true;
                    }
                    shares.push(filter(&ctx, &u));
                }
                assert!(given || extras.is_empty(), "unabsorbed context entries");
                let mut ps = Vec::new();
                for (g, share) in groups.iter().zip(&shares) {
                    for &k in g {
                        ps.push(self.build(&pre.kids[k], with_binders(share.clone(), k)));
                    }
                }
                (shares.concat(), ps)
            }
            Rule::Ex(_) => unreachable!("the first pass emits no exchange"),
        };
        let node = Derivation {
            rule: pre.rule.clone(),
            concl: Judgement {
                ctx: rule_ctx.clone(),
                term: pre.term.clone(),
                prop: prop.clone(),
            },
            premises,
        };
        if rule_ctx
            .iter()
            .map(|(x, _)| x)
            .eq(ctx.iter().map(|(x, _)| x))
        {
            return node;
        }
        let perm = rule_ctx
            .iter()
            .map(|(x, _)| ctx.iter().position(|(y, _)| y == x).expect("same entries"))
            .collect();
        Derivation {
            rule: Rule::Ex(perm),
            concl: Judgement {
                ctx,
                term: pre.term.clone(),
                prop,
            },
            premises: vec![node],
        }
    }
}

fn minus(a: &BTreeSet<Name>, b: &BTreeSet<Name>) -> BTreeSet<Name> {
    a.difference(b).cloned().collect()
}

fn filter(ctx: &[(Name, Prop)], keep: &BTreeSet<Name>) -> Context {
    ctx.iter()
        .filter(|(x, _)| keep.contains(x))
        .cloned()
        .collect()
}

fn multiplicative(mut p: Pre) -> Pre {
    p.used = p.kids.iter().flat_map(|k| k.used.iter().cloned()).collect();
    p.slack = p.kids.iter().any(|k| k.slack);
    p
}

/// Usage of a node whose premises share one context.
fn additive(
    t: &Term,
    rule: &str,
    kids: &[(&BTreeSet<Name>, bool)],
) -> Result<(BTreeSet<Name>, bool), TypeError> {
    let union: BTreeSet<Name> = kids.iter().flat_map(|(u, _)| u.iter().cloned()).collect();
    for (u, slack) in kids {
        if !slack {
            if let Some(x) = union.difference(u).next() {
                return Err(err(
                    rule,
                    t,
                    format!("variable `{x}` is used in one additive premise but not in the other"),
                ));
            }
        }
    }
    Ok((union, kids.iter().all(|(_, s)| *s)))
}

/// Usage of a kid with its binders removed; binders must be used unless the
/// kid can absorb them.
fn bind(t: &Term, rule: &str, kid: &Pre, xs: &[Name]) -> Result<BTreeSet<Name>, TypeError> {
    let mut used = kid.used.clone();
    for x in xs {
        if !used.remove(x) && !kid.slack {
            return Err(err(rule, t, format!("variable `{x}` is never used")));
        }
    }
    Ok(used)
}
