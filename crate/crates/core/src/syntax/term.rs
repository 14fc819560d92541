use super::{Fragment, Scalar, ValueClass};
use smallvec::{smallvec, SmallVec};
use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::{Arc, OnceLock};

pub type Name = Arc<str>;

/// Children of a node; never more than three.
pub type Children<'a> = SmallVec<[&'a Term; 3]>;

/// Names bound in one child; never more than two.
pub type Binders = SmallVec<[Name; 2]>;

/// Source position of a parsed node. Lines and columns are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize)]
pub struct Span {
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

/// Immutable, cheaply clonable proof term.
#[derive(Clone)]
pub struct Term(Arc<Node>);

pub struct Node {
    kind: Kind,
    frag: Fragment,
    span: Option<Span>,
    class: OnceLock<ValueClass>,
    pub(crate) arrow_normal: OnceLock<bool>,
    leaves: OnceLock<LeafShape>,
    free: OnceLock<Arc<BTreeSet<Name>>>,
    /// Set on terms known to be fixed points of canonicalization.
    canonical: AtomicBool,
}

/// Common shape of the non-sum, non-scale leaves of a linear combination.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum LeafShape {
    Lam,
    ValuePair,
    Other,
}

#[derive(Clone)]
pub enum Kind {
    Var(Name),
    Sum(Term, Term),
    Scale(Scalar, Term),
    /// Introduction of ⊤ (pure).
    Top,
    Star,
    /// δ₁(m, n)
    ElimOne(Term, Term),
    Lam(Name, Term),
    App(Term, Term),
    /// ⟨m, n⟩ (pure)
    Pair(Term, Term),
    /// δ&ⁱ(m, x.n) with `i ∈ {1, 2}` (pure)
    ElimWith(u8, Term, Name, Term),
    Inl(Term),
    Inr(Term),
    /// δ⊕(m, x.n, y.o)
    ElimPlus(Term, Name, Term, Name, Term),
    Tensor(Term, Term),
    /// δ⊗(m, xy.n)
    ElimTensor(Term, Name, Name, Term),
    /// δ₀(m)
    Abort(Term),
    /// 𝓑(m): a closed pure term embedded in the mixed fragment.
    Bang(Term),
    Tau(Term),
}

/// Constructor tag, used for ordering and error messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    Var,
    Sum,
    Scale,
    Top,
    Star,
    ElimOne,
    Lam,
    App,
    Pair,
    ElimWith,
    Inl,
    Inr,
    ElimPlus,
    Tensor,
    ElimTensor,
    Abort,
    Bang,
    Tau,
}

impl Kind {
    pub fn tag(&self) -> Tag {
        match self {
            Kind::Var(_) => Tag::Var,
            Kind::Sum(..) => Tag::Sum,
            Kind::Scale(..) => Tag::Scale,
            Kind::Top => Tag::Top,
            Kind::Star => Tag::Star,
            Kind::ElimOne(..) => Tag::ElimOne,
            Kind::Lam(..) => Tag::Lam,
            Kind::App(..) => Tag::App,
            Kind::Pair(..) => Tag::Pair,
            Kind::ElimWith(..) => Tag::ElimWith,
            Kind::Inl(_) => Tag::Inl,
            Kind::Inr(_) => Tag::Inr,
            Kind::ElimPlus(..) => Tag::ElimPlus,
            Kind::Tensor(..) => Tag::Tensor,
            Kind::ElimTensor(..) => Tag::ElimTensor,
            Kind::Abort(_) => Tag::Abort,
            Kind::Bang(_) => Tag::Bang,
            Kind::Tau(_) => Tag::Tau,
        }
    }
}

impl Term {
    pub fn new(kind: Kind, frag: Fragment) -> Term {
        Term::new_spanned(kind, frag, None)
    }

    pub fn new_spanned(kind: Kind, frag: Fragment, span: Option<Span>) -> Term {
        Term(Arc::new(Node {
            kind,
            frag,
            span,
            class: OnceLock::new(),
            arrow_normal: OnceLock::new(),
            leaves: OnceLock::new(),
            free: OnceLock::new(),
            canonical: AtomicBool::new(false),
        }))
    }

    pub fn with_span(self, span: Span) -> Term {
        Term(Arc::new(Node {
            kind: self.0.kind.clone(),
            frag: self.0.frag,
            span: Some(span),
            class: OnceLock::new(),
            arrow_normal: OnceLock::new(),
            leaves: OnceLock::new(),
            free: OnceLock::new(),
            canonical: AtomicBool::new(false),
        }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn frag(&self) -> Fragment {
        self.0.frag
    }

    pub fn span(&self) -> Option<Span> {
        self.0.span
    }

    pub fn tag(&self) -> Tag {
        self.0.kind.tag()
    }

    pub(crate) fn node(&self) -> &Node {
        &self.0
    }

    pub fn ptr_eq(a: &Term, b: &Term) -> bool {
        Arc::ptr_eq(&a.0, &b.0)
    }

    pub fn var(frag: Fragment, x: &str) -> Term {
        Term::new(Kind::Var(x.into()), frag)
    }

    pub fn var_named(frag: Fragment, x: Name) -> Term {
        Term::new(Kind::Var(x), frag)
    }

    pub fn sum(a: Term, b: Term) -> Term {
        let f = a.frag();
        Term::new(Kind::Sum(a, b), f)
    }

    /// `α·m`. Panics on an invalid mixed scalar; use [`Term::try_scale`] for
    /// user input.
    pub fn scale(s: Scalar, t: Term) -> Term {
        Term::try_scale(s, t).expect("invalid mixed scalar")
    }

    pub fn try_scale(s: Scalar, t: Term) -> Result<Term, String> {
        let f = t.frag();
        if f == Fragment::Mixed && !s.is_valid_mixed() {
            return Err(format!(
                "mixed scalars must be non-negative reals, found {s}"
            ));
        }
        Ok(Term::new(Kind::Scale(s, t), f))
    }

    pub fn top() -> Term {
        Term::new(Kind::Top, Fragment::Pure)
    }

    pub fn star(frag: Fragment) -> Term {
        Term::new(Kind::Star, frag)
    }

    pub fn elim_one(m: Term, n: Term) -> Term {
        let f = n.frag();
        Term::new(Kind::ElimOne(m, n), f)
    }

    pub fn lam(x: &str, body: Term) -> Term {
        Term::lam_named(x.into(), body)
    }

    pub fn lam_named(x: Name, body: Term) -> Term {
        let f = body.frag();
        Term::new(Kind::Lam(x, body), f)
    }

    pub fn app(m: Term, n: Term) -> Term {
        let f = m.frag();
        Term::new(Kind::App(m, n), f)
    }

    pub fn pair(m: Term, n: Term) -> Term {
        Term::new(Kind::Pair(m, n), Fragment::Pure)
    }

    pub fn elim_with(i: u8, m: Term, x: &str, n: Term) -> Term {
        Term::elim_with_named(i, m, x.into(), n)
    }

    pub fn elim_with_named(i: u8, m: Term, x: Name, n: Term) -> Term {
        assert!(i == 1 || i == 2);
        Term::new(Kind::ElimWith(i, m, x, n), Fragment::Pure)
    }

    pub fn inl(m: Term) -> Term {
        Term::new(Kind::Inl(m), Fragment::Mixed)
    }

    pub fn inr(m: Term) -> Term {
        Term::new(Kind::Inr(m), Fragment::Mixed)
    }

    pub fn elim_plus(m: Term, x: &str, n: Term, y: &str, o: Term) -> Term {
        Term::elim_plus_named(m, x.into(), n, y.into(), o)
    }

    pub fn elim_plus_named(m: Term, x: Name, n: Term, y: Name, o: Term) -> Term {
        Term::new(Kind::ElimPlus(m, x, n, y, o), Fragment::Mixed)
    }

    pub fn tensor(m: Term, n: Term) -> Term {
        let f = m.frag();
        Term::new(Kind::Tensor(m, n), f)
    }

    pub fn elim_tensor(m: Term, x: &str, y: &str, n: Term) -> Term {
        Term::elim_tensor_named(m, x.into(), y.into(), n)
    }

    pub fn elim_tensor_named(m: Term, x: Name, y: Name, n: Term) -> Term {
        let f = n.frag();
        Term::new(Kind::ElimTensor(m, x, y, n), f)
    }

    pub fn abort(m: Term) -> Term {
        Term::new(Kind::Abort(m), Fragment::Mixed)
    }

    pub fn bang(m: Term) -> Term {
        Term::new(Kind::Bang(m), Fragment::Mixed)
    }

    pub fn tau(m: Term) -> Term {
        Term::new(Kind::Tau(m), Fragment::Mixed)
    }

    /// Immediate subterms, in source order.
    pub fn children(&self) -> Children<'_> {
        match self.kind() {
            Kind::Var(_) | Kind::Top | Kind::Star => smallvec![],
            Kind::Scale(_, a)
            | Kind::Lam(_, a)
            | Kind::Inl(a)
            | Kind::Inr(a)
            | Kind::Abort(a)
            | Kind::Bang(a)
            | Kind::Tau(a) => smallvec![a],
            Kind::Sum(a, b)
            | Kind::ElimOne(a, b)
            | Kind::App(a, b)
            | Kind::Pair(a, b)
            | Kind::Tensor(a, b)
            | Kind::ElimWith(_, a, _, b)
            | Kind::ElimTensor(a, _, _, b) => smallvec![a, b],
            Kind::ElimPlus(a, _, b, _, c) => smallvec![a, b, c],
        }
    }

    /// Names bound in the `i`-th child.
    pub fn binders_of_child(&self, i: usize) -> Binders {
        match (self.kind(), i) {
            (Kind::Lam(x, _), 0) => smallvec![x.clone()],
            (Kind::ElimWith(_, _, x, _), 1) => smallvec![x.clone()],
            (Kind::ElimPlus(_, x, _, _, _), 1) => smallvec![x.clone()],
            (Kind::ElimPlus(_, _, _, y, _), 2) => smallvec![y.clone()],
            (Kind::ElimTensor(_, x, y, _), 1) => smallvec![x.clone(), y.clone()],
            _ => smallvec![],
        }
    }

    /// Rebuilds this node with new children (same arity, binders and span
    /// kept).
    pub fn with_children(&self, cs: impl IntoIterator<Item = Term>) -> Term {
        let mut cs: SmallVec<[Term; 3]> = cs.into_iter().collect();
        let f = self.frag();
        let kind = match self.kind() {
            Kind::Var(_) | Kind::Top | Kind::Star => return self.clone(),
            Kind::Scale(s, _) => Kind::Scale(*s, cs.pop().unwrap()),
            Kind::Lam(x, _) => Kind::Lam(x.clone(), cs.pop().unwrap()),
            Kind::Inl(_) => Kind::Inl(cs.pop().unwrap()),
            Kind::Inr(_) => Kind::Inr(cs.pop().unwrap()),
            Kind::Abort(_) => Kind::Abort(cs.pop().unwrap()),
            Kind::Bang(_) => Kind::Bang(cs.pop().unwrap()),
            Kind::Tau(_) => Kind::Tau(cs.pop().unwrap()),
            _ => {
                let b = cs.pop().unwrap();
                match self.kind() {
                    Kind::ElimPlus(_, x, _, y, _) => {
                        let n = cs.pop().unwrap();
                        let m = cs.pop().unwrap();
                        Kind::ElimPlus(m, x.clone(), n, y.clone(), b)
                    }
                    other => {
                        let a = cs.pop().unwrap();
                        match other {
                            Kind::Sum(..) => Kind::Sum(a, b),
                            Kind::ElimOne(..) => Kind::ElimOne(a, b),
                            Kind::App(..) => Kind::App(a, b),
                            Kind::Pair(..) => Kind::Pair(a, b),
                            Kind::Tensor(..) => Kind::Tensor(a, b),
                            Kind::ElimWith(i, _, x, _) => Kind::ElimWith(*i, a, x.clone(), b),
                            Kind::ElimTensor(_, x, y, _) => {
                                Kind::ElimTensor(a, x.clone(), y.clone(), b)
                            }
                            _ => unreachable!(),
                        }
                    }
                }
            }
        };
        Term::new_spanned(kind, f, self.span())
    }

    /// Replaces the subterm at `path` (child indices from the root).
    pub fn replace_at(&self, path: &[usize], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => {
                let mut cs: Vec<Term> = self.children().into_iter().cloned().collect();
                cs[i] = cs[i].replace_at(rest, new);
                self.with_children(cs)
            }
        }
    }

    pub fn subterm_at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i).and_then(|c| c.subterm_at(rest)),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Cached value classification.
    pub fn value_class(&self) -> ValueClass {
        *self.0.class.get_or_init(|| super::value::classify(self))
    }

    /// Cached [`LeafShape`] of the leaves of `self` seen as a linear
    /// combination.
    pub(crate) fn leaf_shape(&self) -> LeafShape {
        *self.0.leaves.get_or_init(|| match self.kind() {
            Kind::Sum(a, b) => {
                let s = a.leaf_shape();
                if s == b.leaf_shape() {
                    s
                } else {
                    LeafShape::Other
                }
            }
            Kind::Scale(_, m) => m.leaf_shape(),
            Kind::Lam(..) => LeafShape::Lam,
            Kind::Pair(v, w) if v.is_value() && w.is_value() => LeafShape::ValuePair,
            _ => LeafShape::Other,
        })
    }

    /// Cached set of free variables.
    pub(crate) fn free_var_set(&self) -> &Arc<BTreeSet<Name>> {
        self.0.free.get_or_init(|| {
            if let Kind::Var(x) = self.kind() {
                return Arc::new(BTreeSet::from([x.clone()]));
            }
            let cs = self.children();
            // A single binder-free child shares its set.
            if let [c] = cs.as_slice() {
                if self.binders_of_child(0).is_empty() {
                    return c.free_var_set().clone();
                }
            }
            let mut out = BTreeSet::new();
            for (i, c) in cs.into_iter().enumerate() {
                let bs = self.binders_of_child(i);
                out.extend(c.free_var_set().iter().filter(|x| !bs.contains(x)).cloned());
            }
            Arc::new(out)
        })
    }

    pub(crate) fn is_canonical(&self) -> bool {
        self.0.canonical.load(AtomicOrdering::Relaxed)
    }

    pub(crate) fn mark_canonical(&self) {
        self.0.canonical.store(true, AtomicOrdering::Relaxed);
    }

    pub fn is_value(&self) -> bool {
        self.value_class() != ValueClass::NotValue
    }

    /// Checks the constructor/fragment table and mixed scalar ranges.
    pub fn check_fragments(&self) -> Result<(), String> {
        use Fragment::*;
        let f = self.frag();
        let need = |t: &Term, g: Fragment| -> Result<(), String> {
            t.check_fragments()?;
            if t.frag() != g {
                Err(format!(
                    "{} subterm inside a {} {:?} node",
                    t.frag(),
                    g,
                    self.tag()
                ))
            } else {
                Ok(())
            }
        };
        match self.kind() {
            Kind::Top | Kind::Pair(..) | Kind::ElimWith(..) if f != Pure => {
                return Err(format!("{:?} is pure-only", self.tag()))
            }
            Kind::Inl(_)
            | Kind::Inr(_)
            | Kind::ElimPlus(..)
            | Kind::Abort(_)
            | Kind::Bang(_)
            | Kind::Tau(_)
                if f != Mixed =>
            {
                return Err(format!("{:?} is mixed-only", self.tag()))
            }
            Kind::Scale(s, _) if f == Mixed && !s.is_valid_mixed() => {
                return Err(format!("mixed scalar {s} is not a non-negative real"))
            }
            _ => {}
        }
        match self.kind() {
            Kind::Bang(m) => need(m, Pure),
            _ => {
                for c in self.children() {
                    need(c, f)?;
                }
                Ok(())
            }
        }
    }
}

impl std::fmt::Debug for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::parser::pretty(self))
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::parser::pretty(self))
    }
}
