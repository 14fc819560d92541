//! Seeded, type-directed generator of well-typed closed terms.
//!
//! Terms are grown goal-first: free variables are eliminated by their type,
//! closed goals are introduced by their type, and at positive depth the
//! generator also inserts cuts (redexes) and linear combinations. Every
//! emitted term is re-checked by the type checker.

use crate::denote::dim;
use crate::syntax::{Fragment, Name, Prop, Scalar, Term};
use crate::typecheck::check;
use rand::seq::SliceRandom;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

/// Largest dimension allowed for generated types, which keeps denotations
/// small.
pub const MAX_DIM: usize = 64;

#[derive(Clone, Debug)]
pub struct Generated {
    pub fragment: Fragment,
    pub prop: Prop,
    pub term: Term,
}

/// A random well-typed closed term of a random type in a random fragment.
pub fn generate<R: Rng>(rng: &mut R, max_depth: usize) -> Generated {
    let frag = if rng.gen_bool(0.5) {
        Fragment::Pure
    } else {
        Fragment::Mixed
    };
    generate_in(rng, frag, max_depth)
}

pub fn generate_in<R: Rng>(rng: &mut R, frag: Fragment, max_depth: usize) -> Generated {
    loop {
        let prop = random_type(rng, frag, 2);
        if !inhabited(&prop) || dim(&prop) > MAX_DIM {
            continue;
        }
        let depth = rng.gen_range(1..=max_depth.max(1));
        let mut g = TermGen {
            rng: &mut *rng,
            next: 0,
            budget: 400,
        };
        if let Some(term) = g.closed(&prop, depth) {
            if check(&[], &term, &prop).is_ok() {
                return Generated {
                    fragment: frag,
                    prop,
                    term,
                };
            }
        }
    }
}

/// A closed term of `prop`, if the generator finds one within its budget.
pub fn generate_of_type<R: Rng>(rng: &mut R, prop: &Prop, depth: usize) -> Option<Term> {
    for _ in 0..50 {
        let mut g = TermGen {
            rng: &mut *rng,
            next: 0,
            budget: 400,
        };
        if let Some(t) = g.closed(prop, depth) {
            if check(&[], &t, prop).is_ok() {
                return Some(t);
            }
        }
    }
    None
}

pub fn random_type<R: Rng>(rng: &mut R, frag: Fragment, depth: usize) -> Prop {
    match frag {
        Fragment::Pure => random_pure(rng, depth),
        Fragment::Mixed => random_mixed(rng, depth),
    }
}

fn random_pure<R: Rng>(rng: &mut R, depth: usize) -> Prop {
    let leaf = |rng: &mut R| match rng.gen_range(0..10) {
        0 => Prop::Top,
        1..=4 => Prop::qubit(),
        _ => Prop::one_pure(),
    };
    if depth == 0 || rng.gen_bool(0.35) {
        return leaf(rng);
    }
    let (a, b) = (random_pure(rng, depth - 1), random_pure(rng, depth - 1));
    match rng.gen_range(0..3) {
        0 => Prop::with(a, b),
        1 => Prop::tensor(Fragment::Pure, a, b),
        _ => Prop::lolli(Fragment::Pure, a, b),
    }
}

fn random_mixed<R: Rng>(rng: &mut R, depth: usize) -> Prop {
    let leaf = |rng: &mut R| match rng.gen_range(0..12) {
        0 => Prop::Zero,
        1..=4 => Prop::one_mixed(),
        _ => loop {
            let p = random_pure(rng, 1);
            if pure_bang_ok(&p) && dim(&p) <= 4 {
                break Prop::bang(p);
            }
        },
    };
    if depth == 0 || rng.gen_bool(0.35) {
        return leaf(rng);
    }
    let (a, b) = (random_mixed(rng, depth - 1), random_mixed(rng, depth - 1));
    match rng.gen_range(0..3) {
        0 => Prop::plus(a, b),
        1 => Prop::tensor(Fragment::Mixed, a, b),
        _ => Prop::lolli(Fragment::Mixed, a, b),
    }
}

/// Pure types allowed under 𝓑: closed terms exist and variables of the type
/// can be eliminated into any pure goal.
fn pure_bang_ok(p: &Prop) -> bool {
    inhabited(p) && consumable(p, &Prop::one_pure())
}

/// Whether the generator can build a closed term of `t`.
pub fn inhabited(t: &Prop) -> bool {
    match t {
        Prop::Top | Prop::One(_) => true,
        Prop::Zero => false,
        Prop::With(a, b) | Prop::Tensor(_, a, b) => inhabited(a) && inhabited(b),
        Prop::Plus(a, b) => inhabited(a) || inhabited(b),
        Prop::Lolli(_, a, b) => **b == Prop::Top || a == b || (consumable(a, b) && inhabited(b)),
        Prop::Bang(p) => pure_bang_ok(p),
    }
}

/// Whether a variable of type `a` can be eliminated while building `goal`.
fn consumable(a: &Prop, goal: &Prop) -> bool {
    if *goal == Prop::Top {
        return true;
    }
    match a {
        Prop::One(_) | Prop::Zero => true,
        Prop::Top => false,
        Prop::With(p, q) => consumable(p, goal) || consumable(q, goal),
        Prop::Tensor(_, p, q) | Prop::Plus(p, q) => consumable(p, goal) && consumable(q, goal),
        Prop::Lolli(_, p, q) => inhabited(p) && consumable(q, goal),
        Prop::Bang(_) => absorbs_bang(goal),
    }
}

/// Whether `goal` can absorb 𝓑-typed variables.
fn absorbs_bang(goal: &Prop) -> bool {
    match goal {
        Prop::Bang(q) => inhabited(q),
        Prop::Lolli(Fragment::Mixed, _, g) => absorbs_bang(g),
        Prop::Tensor(Fragment::Mixed, a, b) => {
            (absorbs_bang(a) && inhabited(b)) || (absorbs_bang(b) && inhabited(a))
        }
        Prop::Plus(a, b) => absorbs_bang(a) || absorbs_bang(b),
        _ => false,
    }
}

type Var = (Name, Prop);

struct TermGen<'a, R> {
    rng: &'a mut R,
    next: usize,
    /// Remaining node allowance; generation fails when it runs out.
    budget: usize,
}

impl<R: Rng> TermGen<'_, R> {
    fn fresh(&mut self) -> Name {
        self.next += 1;
        format!("v{}", self.next).into()
    }

    fn tick(&mut self) -> Option<()> {
        self.budget = self.budget.checked_sub(1)?;
        Some(())
    }

    fn scalar(&mut self, f: Fragment) -> Scalar {
        match f {
            Fragment::Pure => match self.rng.gen_range(0..10) {
                0 => Scalar::ZERO,
                1 => Scalar::ONE,
                2 => Scalar::real(-1.0),
                3 => Scalar::real(0.5),
                4 => Scalar::real(FRAC_1_SQRT_2),
                5 => Scalar::new(0.0, 1.0),
                6 => Scalar::real(2.0),
                _ => Scalar::new(
                    (self.rng.gen_range(-2.0..2.0f64) * 8.0).round() / 8.0,
                    (self.rng.gen_range(-2.0..2.0f64) * 8.0).round() / 8.0,
                ),
            },
            Fragment::Mixed => match self.rng.gen_range(0..8) {
                0 => Scalar::ZERO,
                1 => Scalar::ONE,
                2 => Scalar::real(0.5),
                3 => Scalar::real(FRAC_1_SQRT_2),
                4 => Scalar::real(2.0),
                _ => Scalar::real((self.rng.gen_range(0.0..2.0f64) * 8.0).round() / 8.0),
            },
        }
    }

    fn closed(&mut self, goal: &Prop, depth: usize) -> Option<Term> {
        self.term(goal, Vec::new(), depth)
    }

    fn term(&mut self, goal: &Prop, mut vars: Vec<Var>, depth: usize) -> Option<Term> {
        self.tick()?;
        let f = goal.fragment();
        let d = depth.saturating_sub(1);
        if depth > 0 && self.rng.gen_bool(0.12) {
            let a = self.term(goal, vars.clone(), d)?;
            let b = self.term(goal, vars, d)?;
            let (s, r) = (self.scalar(f), self.scalar(f));
            let a = if self.rng.gen_bool(0.5) {
                Term::scale(s, a)
            } else {
                a
            };
            let b = if self.rng.gen_bool(0.5) {
                Term::scale(r, b)
            } else {
                b
            };
            return Some(Term::sum(a, b));
        }
        if depth > 0 && self.rng.gen_bool(0.08) {
            let s = self.scalar(f);
            return Some(Term::scale(s, self.term(goal, vars, d)?));
        }
        if vars.is_empty() {
            return self.closed_step(goal, depth);
        }
        if vars.len() == 1 && vars[0].1 == *goal && (depth == 0 || self.rng.gen_bool(0.5)) {
            return Some(Term::var_named(f, vars[0].0.clone()));
        }
        if let Some(i) = vars.iter().position(|(_, p)| *p == Prop::Zero) {
            return Some(Term::abort(Term::var_named(f, vars[i].0.clone())));
        }
        if *goal == Prop::Top {
            return Some(Term::top());
        }
        let plain: Vec<usize> = (0..vars.len())
            .filter(|&i| !matches!(vars[i].1, Prop::Bang(_)))
            .collect();
        if let Some(&i) = plain.choose(self.rng) {
            let (x, a) = vars.remove(i);
            return self.eliminate(goal, x, &a, vars, d);
        }
        self.absorb_bangs(goal, vars, d)
    }

    /// Eliminates `x : a`, continuing with `goal` over `rest` plus the new
    /// binders.
    fn eliminate(
        &mut self,
        goal: &Prop,
        x: Name,
        a: &Prop,
        rest: Vec<Var>,
        depth: usize,
    ) -> Option<Term> {
        let f = a.fragment();
        let xv = Term::var_named(f, x);
        let with = |mut v: Vec<Var>, extra: &[Var]| {
            v.extend_from_slice(extra);
            v
        };
        match a {
            Prop::One(_) => Some(Term::elim_one(xv, self.term(goal, rest, depth)?)),
            Prop::With(p, q) => {
                let mut sides = vec![];
                if consumable(p, goal) {
                    sides.push(1u8);
                }
                if consumable(q, goal) {
                    sides.push(2);
                }
                let i = *sides.choose(self.rng)?;
                let comp = if i == 1 { p } else { q };
                let y = self.fresh();
                let body = self.term(goal, with(rest, &[(y.clone(), (**comp).clone())]), depth)?;
                Some(Term::elim_with_named(i, xv, y, body))
            }
            Prop::Tensor(_, p, q) => {
                let (y, z) = (self.fresh(), self.fresh());
                let ext = [(y.clone(), (**p).clone()), (z.clone(), (**q).clone())];
                let body = self.term(goal, with(rest, &ext), depth)?;
                Some(Term::elim_tensor_named(xv, y, z, body))
            }
            Prop::Plus(p, q) => {
                let (y, z) = (self.fresh(), self.fresh());
                let l = self.term(
                    goal,
                    with(rest.clone(), &[(y.clone(), (**p).clone())]),
                    depth,
                )?;
                let r = self.term(goal, with(rest, &[(z.clone(), (**q).clone())]), depth)?;
                Some(Term::elim_plus_named(xv, y, l, z, r))
            }
            Prop::Lolli(_, p, q) => {
                let v = self.closed(p, depth)?;
                let app = Term::app(xv, v);
                if rest.is_empty() && **q == *goal && self.rng.gen_bool(0.5) {
                    return Some(app);
                }
                let y = self.fresh();
                let body = self.term(goal, with(rest, &[(y.clone(), (**q).clone())]), depth)?;
                Some(Term::app(Term::lam_named(y, body), app))
            }
            Prop::Top | Prop::Zero | Prop::Bang(_) => None,
        }
    }

    /// Builds `goal` from 𝓑-typed variables only.
    fn absorb_bangs(&mut self, goal: &Prop, vars: Vec<Var>, depth: usize) -> Option<Term> {
        let f = Fragment::Mixed;
        if vars.len() == 1 && vars[0].1 == *goal && self.rng.gen_bool(0.5) {
            let x = Term::var_named(f, vars[0].0.clone());
            return Some(if self.rng.gen_bool(0.3) {
                Term::scale(self.scalar(f), x)
            } else {
                x
            });
        }
        match goal {
            Prop::Bang(q) => {
                // τ(x₁ ⊗ τ(x₂ ⊗ …)) : 𝓑(P₁ ⊗ (P₂ ⊗ …))
                let mut it = vars.into_iter().rev();
                let (x, p) = it.next()?;
                let (mut arg, mut p) = (Term::var_named(f, x), p_of(&p));
                for (y, py) in it {
                    arg = Term::tau(Term::tensor(Term::var_named(f, y), arg));
                    p = Prop::tensor(Fragment::Pure, p_of(&py), p);
                }
                let k = self.rng.gen_range(1..=2);
                let mut fun: Option<Term> = None;
                for _ in 0..k {
                    let z = self.fresh();
                    let body = self.term(q, vec![(z.clone(), p.clone())], depth)?;
                    let b = Term::bang(Term::lam_named(z, body));
                    let b = if self.rng.gen_bool(0.4) {
                        Term::scale(self.scalar(f), b)
                    } else {
                        b
                    };
                    fun = Some(match fun {
                        None => b,
                        Some(acc) => Term::sum(acc, b),
                    });
                }
                Some(Term::app(fun?, arg))
            }
            Prop::Lolli(_, a, g) => {
                let z = self.fresh();
                let mut vars = vars;
                vars.push((z.clone(), (**a).clone()));
                Some(Term::lam_named(z, self.term(g, vars, depth)?))
            }
            Prop::Tensor(_, a, b) => {
                if absorbs_bang(a) && inhabited(b) && (!absorbs_bang(b) || self.rng.gen_bool(0.5)) {
                    Some(Term::tensor(
                        self.term(a, vars, depth)?,
                        self.closed(b, depth)?,
                    ))
                } else {
                    Some(Term::tensor(
                        self.closed(a, depth)?,
                        self.term(b, vars, depth)?,
                    ))
                }
            }
            Prop::Plus(a, b) => {
                if absorbs_bang(a) && (!absorbs_bang(b) || self.rng.gen_bool(0.5)) {
                    Some(Term::inl(self.term(a, vars, depth)?))
                } else {
                    Some(Term::inr(self.term(b, vars, depth)?))
                }
            }
            _ => None,
        }
    }

    fn closed_step(&mut self, goal: &Prop, depth: usize) -> Option<Term> {
        if depth > 0 && self.rng.gen_bool(0.35) {
            if let Some(t) = self.cut(goal, depth - 1) {
                return Some(t);
            }
        }
        self.intro(goal, depth.saturating_sub(1))
    }

    fn intro(&mut self, goal: &Prop, d: usize) -> Option<Term> {
        let f = goal.fragment();
        match goal {
            Prop::Top => Some(Term::top()),
            Prop::One(_) => {
                let s = Term::star(f);
                Some(if self.rng.gen_bool(0.5) {
                    Term::scale(self.scalar(f), s)
                } else {
                    s
                })
            }
            Prop::Zero => None,
            Prop::With(a, b) => Some(Term::pair(self.closed(a, d)?, self.closed(b, d)?)),
            Prop::Tensor(_, a, b) => Some(Term::tensor(self.closed(a, d)?, self.closed(b, d)?)),
            Prop::Lolli(_, a, b) => {
                let x = self.fresh();
                let body = self.term(b, vec![(x.clone(), (**a).clone())], d)?;
                Some(Term::lam_named(x, body))
            }
            Prop::Plus(a, b) => {
                let left = inhabited(a) && (!inhabited(b) || self.rng.gen_bool(0.5));
                if left {
                    Some(Term::inl(self.closed(a, d)?))
                } else {
                    Some(Term::inr(self.closed(b, d)?))
                }
            }
            Prop::Bang(p) => {
                let choice = self.rng.gen_range(0..6);
                if choice == 0 {
                    if let Prop::Tensor(_, p1, p2) = &**p {
                        let arg = Prop::tensor(
                            Fragment::Mixed,
                            Prop::bang((**p1).clone()),
                            Prop::bang((**p2).clone()),
                        );
                        return Some(Term::tau(self.closed(&arg, d)?));
                    }
                }
                if choice == 1 && d > 0 {
                    let a = random_pure(self.rng, 1);
                    let fun = Prop::lolli(Fragment::Pure, a.clone(), (**p).clone());
                    if pure_bang_ok(&a) && inhabited(&fun) && dim(&fun) <= 16 {
                        let m = self.closed(&Prop::bang(fun), d)?;
                        let n = self.closed(&Prop::bang(a), d)?;
                        return Some(Term::app(m, n));
                    }
                }
                Some(Term::bang(self.closed(p, d)?))
            }
        }
    }

    /// A closed redex of type `goal`.
    fn cut(&mut self, goal: &Prop, d: usize) -> Option<Term> {
        let f = goal.fragment();
        let a = random_type(self.rng, f, 1);
        if !inhabited(&a) || dim(&a) > 16 {
            return None;
        }
        match self.rng.gen_range(0..4) {
            0 => {
                if !consumable(&a, goal) {
                    return None;
                }
                let x = self.fresh();
                let body = self.term(goal, vec![(x.clone(), a.clone())], d)?;
                Some(Term::app(Term::lam_named(x, body), self.closed(&a, d)?))
            }
            1 => {
                let m = self.closed(&Prop::One(f), d)?;
                Some(Term::elim_one(m, self.closed(goal, d)?))
            }
            2 => {
                let b = random_type(self.rng, f, 1);
                let t = Prop::tensor(f, a.clone(), b.clone());
                if !inhabited(&t) || dim(&t) > 16 || !consumable(&t, goal) {
                    return None;
                }
                let (x, y) = (self.fresh(), self.fresh());
                let body = self.term(goal, vec![(x.clone(), a), (y.clone(), b)], d)?;
                Some(Term::elim_tensor_named(self.closed(&t, d)?, x, y, body))
            }
            _ => {
                let b = random_type(self.rng, f, 1);
                let t = match f {
                    Fragment::Pure => Prop::with(a.clone(), b.clone()),
                    Fragment::Mixed => Prop::plus(a.clone(), b.clone()),
                };
                if !inhabited(&t) || dim(&t) > 16 || !consumable(&t, goal) {
                    return None;
                }
                let x = self.fresh();
                let y = self.fresh();
                match f {
                    Fragment::Pure => {
                        let i = if consumable(&a, goal) { 1 } else { 2 };
                        let comp = if i == 1 { a } else { b };
                        let body = self.term(goal, vec![(x.clone(), comp)], d)?;
                        Some(Term::elim_with_named(i, self.closed(&t, d)?, x, body))
                    }
                    Fragment::Mixed => {
                        let l = self.term(goal, vec![(x.clone(), a)], d)?;
                        let r = self.term(goal, vec![(y.clone(), b)], d)?;
                        Some(Term::elim_plus_named(self.closed(&t, d)?, x, l, y, r))
                    }
                }
            }
        }
    }
}

fn p_of(b: &Prop) -> Prop {
    match b {
        Prop::Bang(p) => (**p).clone(),
        _ => unreachable!("only 𝓑-typed variables are absorbed"),
    }
}
