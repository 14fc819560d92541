//! Propositions with unification variables.

use crate::syntax::{Fragment, Prop};
use std::fmt;

#[derive(Clone, Debug)]
pub(super) enum Ty {
    Meta(usize),
    Top,
    One(Fragment),
    Lolli(Fragment, Box<Ty>, Box<Ty>),
    With(Box<Ty>, Box<Ty>),
    Tensor(Fragment, Box<Ty>, Box<Ty>),
    Zero,
    Plus(Box<Ty>, Box<Ty>),
    Bang(Box<Ty>),
}

impl Ty {
    pub(super) fn lolli(f: Fragment, a: Ty, b: Ty) -> Ty {
        Ty::Lolli(f, Box::new(a), Box::new(b))
    }
    pub(super) fn with(a: Ty, b: Ty) -> Ty {
        Ty::With(Box::new(a), Box::new(b))
    }
    pub(super) fn tensor(f: Fragment, a: Ty, b: Ty) -> Ty {
        Ty::Tensor(f, Box::new(a), Box::new(b))
    }
    pub(super) fn plus(a: Ty, b: Ty) -> Ty {
        Ty::Plus(Box::new(a), Box::new(b))
    }
    pub(super) fn bang(a: Ty) -> Ty {
        Ty::Bang(Box::new(a))
    }

    pub(super) fn from_prop(p: &Prop) -> Ty {
        let b = |p: &Prop| Box::new(Ty::from_prop(p));
        match p {
            Prop::Top => Ty::Top,
            Prop::One(f) => Ty::One(*f),
            Prop::Lolli(f, a, c) => Ty::Lolli(*f, b(a), b(c)),
            Prop::With(a, c) => Ty::With(b(a), b(c)),
            Prop::Tensor(f, a, c) => Ty::Tensor(*f, b(a), b(c)),
            Prop::Zero => Ty::Zero,
            Prop::Plus(a, c) => Ty::Plus(b(a), b(c)),
            Prop::Bang(a) => Ty::Bang(b(a)),
        }
    }
}

#[derive(Default)]
pub(super) struct Metas {
    sol: Vec<Option<Ty>>,
    frag: Vec<Fragment>,
}

impl Metas {
    pub(super) fn fresh(&mut self, f: Fragment) -> Ty {
        self.sol.push(None);
        self.frag.push(f);
        Ty::Meta(self.sol.len() - 1)
    }

    /// Follows solved metas at the head.
    pub(super) fn resolve(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Meta(i) = t {
            match &self.sol[i] {
                Some(s) => t = s.clone(),
                None => break,
            }
        }
        t
    }

    pub(super) fn frag_of(&self, t: &Ty) -> Fragment {
        match self.resolve(t) {
            Ty::Meta(i) => self.frag[i],
            Ty::Top | Ty::With(..) => Fragment::Pure,
            Ty::Zero | Ty::Plus(..) | Ty::Bang(_) => Fragment::Mixed,
            Ty::One(f) | Ty::Lolli(f, ..) | Ty::Tensor(f, ..) => f,
        }
    }

    fn occurs(&self, i: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(j) => i == j,
            Ty::Top | Ty::One(_) | Ty::Zero => false,
            Ty::Bang(a) => self.occurs(i, &a),
            Ty::Lolli(_, a, b) | Ty::With(a, b) | Ty::Tensor(_, a, b) | Ty::Plus(a, b) => {
                self.occurs(i, &a) || self.occurs(i, &b)
            }
        }
    }

    /// Unifies `expected` with `found`; the error message names both sides.
    pub(super) fn unify(&mut self, expected: &Ty, found: &Ty) -> Result<(), String> {
        if self.unify_rec(expected, found) {
            Ok(())
        } else {
            Err(format!(
                "expected {}, found {}",
                self.show(expected),
                self.show(found)
            ))
        }
    }

    fn unify_rec(&mut self, a: &Ty, b: &Ty) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Ty::Meta(i), Ty::Meta(j)) if i == j => true,
            (Ty::Meta(i), t) | (t, Ty::Meta(i)) => {
                if self.frag[*i] != self.frag_of(t) || self.occurs(*i, t) {
                    return false;
                }
                self.sol[*i] = Some(t.clone());
                true
            }
            (Ty::Top, Ty::Top) | (Ty::Zero, Ty::Zero) => true,
            (Ty::One(f), Ty::One(g)) => f == g,
            (Ty::Lolli(f, a1, b1), Ty::Lolli(g, a2, b2))
            | (Ty::Tensor(f, a1, b1), Ty::Tensor(g, a2, b2)) => {
                f == g && self.unify_rec(a1, a2) && self.unify_rec(b1, b2)
            }
            (Ty::With(a1, b1), Ty::With(a2, b2)) | (Ty::Plus(a1, b1), Ty::Plus(a2, b2)) => {
                self.unify_rec(a1, a2) && self.unify_rec(b1, b2)
            }
            (Ty::Bang(x), Ty::Bang(y)) => self.unify_rec(x, y),
            _ => false,
        }
    }

    /// Instantiates every unsolved meta with the unit of its fragment.
    pub(super) fn default_all(&mut self) {
        for i in 0..self.sol.len() {
            if self.sol[i].is_none() {
                self.sol[i] = Some(Ty::One(self.frag[i]));
            }
        }
    }

    pub(super) fn to_prop(&self, t: &Ty) -> Option<Prop> {
        let b = |t: &Ty| self.to_prop(t).map(Box::new);
        Some(match self.resolve(t) {
            Ty::Meta(_) => return None,
            Ty::Top => Prop::Top,
            Ty::One(f) => Prop::One(f),
            Ty::Lolli(f, x, y) => Prop::Lolli(f, b(&x)?, b(&y)?),
            Ty::With(x, y) => Prop::With(b(&x)?, b(&y)?),
            Ty::Tensor(f, x, y) => Prop::Tensor(f, b(&x)?, b(&y)?),
            Ty::Zero => Prop::Zero,
            Ty::Plus(x, y) => Prop::Plus(b(&x)?, b(&y)?),
            Ty::Bang(x) => Prop::Bang(b(&x)?),
        })
    }

    pub(super) fn show(&self, t: &Ty) -> String {
        Shown(self, t).to_string()
    }
}

struct Shown<'a>(&'a Metas, &'a Ty);

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        if let Some(p) = m.to_prop(self.1) {
            return write!(f, "{p}");
        }
        let sub = |t: &Ty| -> String {
            let s = Shown(m, t).to_string();
            match m.resolve(t) {
                Ty::Lolli(..) | Ty::Plus(..) | Ty::With(..) | Ty::Tensor(..) => format!("({s})"),
                _ => s,
            }
        };
        match m.resolve(self.1) {
            Ty::Meta(i) => write!(f, "?{i}"),
            Ty::Lolli(_, a, b) => write!(f, "{} -o {}", sub(&a), sub(&b)),
            Ty::With(a, b) => write!(f, "{} & {}", sub(&a), sub(&b)),
            Ty::Tensor(_, a, b) => write!(f, "{} * {}", sub(&a), sub(&b)),
            Ty::Plus(a, b) => write!(f, "{} + {}", sub(&a), sub(&b)),
            Ty::Bang(a) => write!(f, "B({})", Shown(m, &a)),
            _ => unreachable!(),
        }
    }
}
