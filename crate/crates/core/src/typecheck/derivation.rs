use crate::syntax::{alpha_eq, Fragment, Kind, Name, Prop, Scalar, Term};
use std::fmt;

pub type Context = Vec<(Name, Prop)>;

#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    Ax,
    Sum,
    Prod(Scalar),
    TopI,
    ZeroE,
    OneI,
    OneE,
    LolliI,
    LolliE,
    WithI,
    /// `&ₑ₁` or `&ₑ₂`.
    WithE(u8),
    /// `⊕ᵢ₁` or `⊕ᵢ₂`.
    PlusI(u8),
    PlusE,
    TensorI,
    TensorE,
    BangI,
    BangLolliE,
    BangTensor,
    /// Exchange. `perm[j]` is the position in the conclusion context of the
    /// `j`-th entry of the premise context.
    Ex(Vec<usize>),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::Sum => "sum",
            Rule::Prod(_) => "prod",
            Rule::TopI => "top_i",
            Rule::ZeroE => "zero_e",
            Rule::OneI => "one_i",
            Rule::OneE => "one_e",
            Rule::LolliI => "lolli_i",
            Rule::LolliE => "lolli_e",
            Rule::WithI => "with_i",
            Rule::WithE(1) => "with_e1",
            Rule::WithE(_) => "with_e2",
            Rule::PlusI(1) => "plus_i1",
            Rule::PlusI(_) => "plus_i2",
            Rule::PlusE => "plus_e",
            Rule::TensorI => "tensor_i",
            Rule::TensorE => "tensor_e",
            Rule::BangI => "bang",
            Rule::BangLolliE => "bang_lolli_e",
            Rule::BangTensor => "bang_tensor",
            Rule::Ex(_) => "ex",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct Judgement {
    pub ctx: Context,
    pub term: Term,
    pub prop: Prop,
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.ctx.iter().map(|(x, p)| format!("{x} : {p}")).collect();
        write!(f, "{} |- {} : {}", ctx.join(", "), self.term, self.prop)
    }
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub rule: Rule,
    pub concl: Judgement,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn prop(&self) -> &Prop {
        &self.concl.prop
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Rules used anywhere in the tree, in pre-order.
    pub fn rules(&self) -> Vec<&Rule> {
        let mut out = vec![&self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }
}

fn ctx_eq(a: &[(Name, Prop)], b: &[(Name, Prop)]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

fn concat(parts: &[&[(Name, Prop)]]) -> Context {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// Checks that every node of `d` is an instance of its rule schema.
pub fn validate(d: &Derivation) -> Result<(), String> {
    for p in &d.premises {
        validate(p)?;
    }
    let j = &d.concl;
    let ps: Vec<&Judgement> = d.premises.iter().map(|p| &p.concl).collect();
    let fail = |why: &str| Err(format!("{} node {j}: {why}", d.rule));
    let arity = |n: usize| -> Result<(), String> {
        if ps.len() == n {
            Ok(())
        } else {
            Err(format!("{} node {j}: expected {n} premises", d.rule))
        }
    };
    let same_term = |a: &Term, b: &Term| alpha_eq(a, b);
    let f = j.term.frag();
    if j.prop.fragment() != f {
        return fail("fragment of term and proposition differ");
    }
    for (_, p) in &j.ctx {
        if p.fragment() != f {
            return fail("context entry of the wrong fragment");
        }
    }
    match (&d.rule, j.term.kind()) {
        (Rule::Ax, Kind::Var(x)) => {
            arity(0)?;
            if !(j.ctx.len() == 1 && j.ctx[0].0 == *x && j.ctx[0].1 == j.prop) {
                return fail("axiom context must be exactly the variable");
            }
        }
        (Rule::Sum, Kind::Sum(a, b)) => {
            arity(2)?;
            for (p, t) in ps.iter().zip([a, b]) {
                if !ctx_eq(&p.ctx, &j.ctx) || !same_term(&p.term, t) || p.prop != j.prop {
                    return fail("premise mismatch");
                }
            }
        }
        (Rule::Prod(s), Kind::Scale(r, m)) => {
            arity(1)?;
            if s.total_cmp(r).is_ne()
                || !ctx_eq(&ps[0].ctx, &j.ctx)
                || !same_term(&ps[0].term, m)
                || ps[0].prop != j.prop
            {
                return fail("premise mismatch");
            }
        }
        (Rule::TopI, Kind::Top) => {
            arity(0)?;
            if j.prop != Prop::Top {
                return fail("type must be top");
            }
        }
        (Rule::ZeroE, Kind::Abort(m)) => {
            arity(1)?;
            let n = ps[0].ctx.len();
            if n > j.ctx.len()
                || !ctx_eq(&ps[0].ctx, &j.ctx[..n])
                || !same_term(&ps[0].term, m)
                || ps[0].prop != Prop::Zero
            {
                return fail("premise mismatch");
            }
        }
        (Rule::OneI, Kind::Star) => {
            arity(0)?;
            if !j.ctx.is_empty() || j.prop != Prop::One(f) {
                return fail("expected the empty context and unit type");
            }
        }
        (Rule::OneE, Kind::ElimOne(m, n)) => {
            arity(2)?;
            if !ctx_eq(&j.ctx, &concat(&[&ps[0].ctx, &ps[1].ctx]))
                || !same_term(&ps[0].term, m)
                || !same_term(&ps[1].term, n)
                || ps[0].prop != Prop::One(f)
                || ps[1].prop != j.prop
            {
                return fail("premise mismatch");
            }
        }
        (Rule::LolliI, Kind::Lam(x, m)) => {
            arity(1)?;
            let Prop::Lolli(g, a, b) = &j.prop else {
                return fail("type must be an implication");
            };
            let mut want = j.ctx.clone();
            want.push((x.clone(), (**a).clone()));
            if *g != f
                || !ctx_eq(&ps[0].ctx, &want)
                || !same_term(&ps[0].term, m)
                || ps[0].prop != **b
            {
                return fail("premise mismatch");
            }
        }
        (Rule::LolliE, Kind::App(m, n)) => {
            arity(2)?;
            let want = Prop::lolli(f, ps[1].prop.clone(), j.prop.clone());
            if !ctx_eq(&j.ctx, &concat(&[&ps[0].ctx, &ps[1].ctx]))
                || !same_term(&ps[0].term, m)
                || !same_term(&ps[1].term, n)
                || ps[0].prop != want
            {
                return fail("premise mismatch");
            }
        }
        (Rule::BangLolliE, Kind::App(m, n)) => {
            arity(2)?;
            let (Prop::Bang(pq), Prop::Bang(p), Prop::Bang(q)) =
                (&ps[0].prop, &ps[1].prop, &j.prop)
            else {
                return fail("expected B-types");
            };
            if **pq != Prop::lolli(Fragment::Pure, (**p).clone(), (**q).clone())
                || !ctx_eq(&j.ctx, &concat(&[&ps[0].ctx, &ps[1].ctx]))
                || !same_term(&ps[0].term, m)
                || !same_term(&ps[1].term, n)
            {
                return fail("premise mismatch");
            }
        }
        (Rule::WithI, Kind::Pair(a, b)) => {
            arity(2)?;
            let Prop::With(p, q) = &j.prop else {
                return fail("type must be a with");
            };
            for (pr, (t, ty)) in ps.iter().zip([(a, p), (b, q)]) {
                if !ctx_eq(&pr.ctx, &j.ctx) || !same_term(&pr.term, t) || pr.prop != **ty {
                    return fail("premise mismatch");
                }
            }
        }
        (Rule::WithE(i), Kind::ElimWith(k, m, x, n)) => {
            arity(2)?;
            let Prop::With(p, q) = &ps[0].prop else {
                return fail("scrutinee must be a with");
            };
            let comp = if *i == 1 { p } else { q };
            let Some(((y, ty), delta)) = ps[1].ctx.split_last() else {
                return fail("missing binder");
            };
            if i != k
                || y != x
                || ty != &**comp
                || !ctx_eq(&j.ctx, &concat(&[&ps[0].ctx, delta]))
                || !same_term(&ps[0].term, m)
                || !same_term(&ps[1].term, n)
                || ps[1].prop != j.prop
            {
                return fail("premise mismatch");
            }
        }
        (Rule::PlusI(i), Kind::Inl(m) | Kind::Inr(m)) => {
            arity(1)?;
            let Prop::Plus(a, b) = &j.prop else {
                return fail("type must be a plus");
            };
            let is_left = matches!(j.term.kind(), Kind::Inl(_));
            let comp = if is_left { a } else { b };
            if (*i == 1) != is_left
                || !ctx_eq(&ps[0].ctx, &j.ctx)
                || !same_term(&ps[0].term, m)
                || ps[0].prop != **comp
            {
                return fail("premise mismatch");
            }
        }
        (Rule::PlusE, Kind::ElimPlus(m, x, n, y, o)) => {
            arity(3)?;
            let Prop::Plus(a, b) = &ps[0].prop else {
                return fail("scrutinee must be a plus");
            };
            let (Some(((x1, ta), g1)), Some(((y1, tb), g2))) =
                (ps[1].ctx.split_last(), ps[2].ctx.split_last())
            else {
                return fail("missing binder");
            };
            if x1 != x
                || y1 != y
                || ta != &**a
                || tb != &**b
                || !ctx_eq(g1, g2)
                || !ctx_eq(&j.ctx, &concat(&[&ps[0].ctx, g1]))
                || !same_term(&ps[0].term, m)
                || !same_term(&ps[1].term, n)
                || !same_term(&ps[2].term, o)
                || ps[1].prop != j.prop
                || ps[2].prop != j.prop
            {
                return fail("premise mismatch");
            }
        }
        (Rule::TensorI, Kind::Tensor(m, n)) => {
            arity(2)?;
            let want = Prop::tensor(f, ps[0].prop.clone(), ps[1].prop.clone());
            if want != j.prop
                || !ctx_eq(&j.ctx, &concat(&[&ps[0].ctx, &ps[1].ctx]))
                || !same_term(&ps[0].term, m)
                || !same_term(&ps[1].term, n)
            {
                return fail("premise mismatch");
            }
        }
        (Rule::TensorE, Kind::ElimTensor(m, x, y, n)) => {
            arity(2)?;
            let Prop::Tensor(_, s1, s2) = &ps[0].prop else {
                return fail("scrutinee must be a tensor");
            };
            let c = &ps[1].ctx;
            if c.len() < 2 {
                return fail("missing binders");
            }
            let (gamma, xy) = c.split_at(c.len() - 2);
            if xy[0].0 != *x
                || xy[1].0 != *y
                || xy[0].1 != **s1
                || xy[1].1 != **s2
                || !ctx_eq(&j.ctx, &concat(&[&ps[0].ctx, gamma]))
                || !same_term(&ps[0].term, m)
                || !same_term(&ps[1].term, n)
                || ps[1].prop != j.prop
            {
                return fail("premise mismatch");
            }
        }
        (Rule::BangI, Kind::Bang(m)) => {
            arity(1)?;
            if !j.ctx.is_empty()
                || !ps[0].ctx.is_empty()
                || !same_term(&ps[0].term, m)
                || j.prop != Prop::bang(ps[0].prop.clone())
            {
                return fail("premise mismatch");
            }
        }
        (Rule::BangTensor, Kind::Tau(m)) => {
            arity(1)?;
            let Prop::Tensor(Fragment::Mixed, a, b) = &ps[0].prop else {
                return fail("argument must be a tensor");
            };
            let (Prop::Bang(p), Prop::Bang(q)) = (&**a, &**b) else {
                return fail("argument must be B(P) * B(Q)");
            };
            if j.prop != Prop::bang(Prop::tensor(Fragment::Pure, (**p).clone(), (**q).clone()))
                || !ctx_eq(&ps[0].ctx, &j.ctx)
                || !same_term(&ps[0].term, m)
            {
                return fail("premise mismatch");
            }
        }
        (Rule::Ex(perm), _) => {
            arity(1)?;
            let n = j.ctx.len();
            let mut seen = vec![false; n];
            if perm.len() != n || ps[0].ctx.len() != n {
                return fail("permutation size");
            }
            for (k, &i) in perm.iter().enumerate() {
                if i >= n || seen[i] || ps[0].ctx[k] != j.ctx[i] {
                    return fail("not a permutation of the context");
                }
                seen[i] = true;
            }
            if !same_term(&ps[0].term, &j.term) || ps[0].prop != j.prop {
                return fail("premise mismatch");
            }
        }
        _ => return fail("rule does not match the term"),
    }
    Ok(())
}
