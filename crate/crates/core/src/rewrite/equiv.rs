//! Elimination contexts and the contextual-equivalence harness.

use super::hook::{normalize, NormalizeError};
use crate::syntax::{alpha_eq_tol, substitute, Fragment, Name, Prop, Scalar, Term};
use crate::typecheck::{check, TypeError};
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

/// Name of the hole variable `[.]`.
pub const HOLE: &str = "hole";

/// A term with exactly one free variable [`HOLE`] of type `hole_type`,
/// producing an observable `result` (𝟙, 1 or 𝓑(𝟙)).
#[derive(Clone, Debug)]
pub struct ElimContext {
    pub hole_type: Prop,
    pub term: Term,
    pub result: Prop,
}

impl ElimContext {
    pub fn fill(&self, m: &Term) -> Term {
        substitute(&self.term, HOLE, m).expect("hole fragment matches its type")
    }

    pub fn typecheck(&self) -> Result<(), TypeError> {
        let ctx = [(Name::from(HOLE), self.hole_type.clone())];
        check(&ctx, &self.term, &self.result).map(|_| ())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EquivError {
    #[error("context {index} is ill-typed: {error}")]
    Context { index: usize, error: TypeError },
    #[error("normalizing a filled context failed: {0}")]
    Normalize(#[from] NormalizeError),
}

/// Whether `normalize(E[m])` and `normalize(E[n])` agree up to `tol` for
/// every context `E`.
pub fn equiv_in_contexts(
    m: &Term,
    n: &Term,
    contexts: &[ElimContext],
    fuel: usize,
    tol: f64,
) -> Result<bool, EquivError> {
    for (index, e) in contexts.iter().enumerate() {
        e.typecheck()
            .map_err(|error| EquivError::Context { index, error })?;
        let vm = normalize(&e.fill(m), fuel, false)?.value;
        let vn = normalize(&e.fill(n), fuel, false)?.value;
        if !alpha_eq_tol(&vm, &vn, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Up to `count` distinct random elimination contexts for closed terms of
/// type `ty`. Types whose closed terms cannot be observed (e.g. ⊤) yield
/// no contexts.
pub fn context_corpus<R: Rng>(ty: &Prop, count: usize, rng: &mut R) -> Vec<ElimContext> {
    let mut out: Vec<ElimContext> = Vec::new();
    let mut g = Gen { rng, next: 0 };
    let hole = Term::var(ty.fragment(), HOLE);
    for _ in 0..count * 4 {
        if out.len() >= count {
            break;
        }
        let Some((term, result)) = g.observe(hole.clone(), ty, 3) else {
            break;
        };
        if !out.iter().any(|c| crate::syntax::alpha_eq(&c.term, &term)) {
            out.push(ElimContext {
                hole_type: ty.clone(),
                term,
                result,
            });
        }
    }
    out
}

/// A random closed term of type `ty`, if the sampler can build one.
pub fn sample_closed<R: Rng>(ty: &Prop, rng: &mut R) -> Option<Term> {
    Gen { rng, next: 0 }.closed(ty, 3)
}

struct Gen<'a, R> {
    rng: &'a mut R,
    next: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self, f: Fragment) -> (Name, Term) {
        self.next += 1;
        let x: Name = format!("c{}", self.next).into();
        (x.clone(), Term::var_named(f, x))
    }

    fn pure_scalar(&mut self) -> Scalar {
        match self.rng.gen_range(0..8) {
            0 => Scalar::ONE,
            1 => Scalar::real(-1.0),
            2 => Scalar::real(0.5),
            3 => Scalar::real(FRAC_1_SQRT_2),
            4 => Scalar::new(0.0, 1.0),
            5 => Scalar::real(2.0),
            _ => Scalar::new(self.rng.gen_range(-2.0..2.0), self.rng.gen_range(-2.0..2.0)),
        }
    }

    fn mixed_scalar(&mut self) -> Scalar {
        match self.rng.gen_range(0..6) {
            0 => Scalar::ONE,
            1 => Scalar::real(0.5),
            2 => Scalar::real(FRAC_1_SQRT_2),
            3 => Scalar::real(2.0),
            _ => Scalar::real(self.rng.gen_range(0.0..2.0)),
        }
    }

    fn scaled(&mut self, f: Fragment, t: Term) -> Term {
        let a = match f {
            Fragment::Pure => self.pure_scalar(),
            Fragment::Mixed => self.mixed_scalar(),
        };
        Term::scale(a, t)
    }

    /// Wraps `e : ty` in an elimination context with an observable result.
    fn observe(&mut self, e: Term, ty: &Prop, depth: usize) -> Option<(Term, Prop)> {
        match ty {
            Prop::One(f) => {
                if self.rng.gen_bool(0.5) {
                    Some((e, ty.clone()))
                } else {
                    let s = self.scaled(*f, Term::star(*f));
                    Some((Term::elim_one(e, s), ty.clone()))
                }
            }
            Prop::Top => None,
            Prop::With(a, b) => {
                let first = self.rng.gen_bool(0.5);
                for i in if first { [1u8, 2] } else { [2, 1] } {
                    let comp = if i == 1 { a } else { b };
                    let (x, xv) = self.fresh(Fragment::Pure);
                    if let Some((body, r)) = self.observe(xv, comp, depth) {
                        return Some((Term::elim_with_named(i, e, x, body), r));
                    }
                }
                None
            }
            Prop::Tensor(Fragment::Pure, a, b) => {
                let (x, xv) = self.fresh(Fragment::Pure);
                let (y, yv) = self.fresh(Fragment::Pure);
                let (ex, _) = self.observe(xv, a, depth)?;
                let (ey, _) = self.observe(yv, b, depth)?;
                let body = Term::elim_one(ex, ey);
                Some((Term::elim_tensor_named(e, x, y, body), Prop::one_pure()))
            }
            Prop::Lolli(_, a, b) => {
                let v = self.closed(a, depth.saturating_sub(1))?;
                self.observe(Term::app(e, v), b, depth)
            }
            Prop::Zero => Some((Term::abort(e), Prop::one_mixed())),
            Prop::Bang(p) => self.observe_bang(e, p, depth),
            Prop::Plus(a, b) => {
                let (x, xv) = self.fresh(Fragment::Mixed);
                let (y, yv) = self.fresh(Fragment::Mixed);
                let (mut l, rl) = self.observe(xv, a, depth)?;
                let (mut r, rr) = self.observe(yv, b, depth)?;
                let result = if rl == rr {
                    rl
                } else {
                    if rl == Prop::one_mixed() {
                        l = Term::elim_one(l, bang_star());
                    } else {
                        r = Term::elim_one(r, bang_star());
                    }
                    bang_one()
                };
                Some((Term::elim_plus_named(e, x, l, y, r), result))
            }
            Prop::Tensor(Fragment::Mixed, a, b) => {
                let (x, xv) = self.fresh(Fragment::Mixed);
                let (y, yv) = self.fresh(Fragment::Mixed);
                let (ex, ra) = self.observe(xv, a, depth)?;
                let (ey, rb) = self.observe(yv, b, depth)?;
                let one = Prop::one_mixed();
                let (body, result) = match (ra == one, rb == one) {
                    (true, _) => (Term::elim_one(ex, ey), rb),
                    (false, true) => (Term::elim_one(ey, ex), ra),
                    (false, false) => {
                        let (z, zv) = self.fresh(Fragment::Pure);
                        let (u, uv) = self.fresh(Fragment::Pure);
                        let (w, wv) = self.fresh(Fragment::Pure);
                        let merge = Term::lam_named(
                            z,
                            Term::elim_tensor_named(zv, u, w, Term::elim_one(uv, wv)),
                        );
                        let joined = Term::tau(Term::tensor(ex, ey));
                        (Term::app(Term::bang(merge), joined), bang_one())
                    }
                };
                Some((Term::elim_tensor_named(e, x, y, body), result))
            }
        }
    }

    /// Observes `e : 𝓑(p)`, either by applying it to a closed argument (for
    /// functions) or by applying a combination of pure observers to it.
    fn observe_bang(&mut self, e: Term, p: &Prop, depth: usize) -> Option<(Term, Prop)> {
        if *p == Prop::one_pure() && self.rng.gen_bool(0.3) {
            return Some((e, bang_one()));
        }
        if let Prop::Lolli(_, a, b) = p {
            if self.rng.gen_bool(0.5) {
                if let Some(v) = self.closed(a, depth.saturating_sub(1)) {
                    let arg = self.scaled(Fragment::Mixed, Term::bang(v));
                    return self.observe_bang(Term::app(e, arg), b, depth);
                }
            }
        }
        let k = self.rng.gen_range(1..=2);
        let mut f: Option<Term> = None;
        for _ in 0..k {
            let (x, xv) = self.fresh(Fragment::Pure);
            let (body, _) = self.observe(xv, p, depth)?;
            let g = self.scaled(Fragment::Mixed, Term::bang(Term::lam_named(x, body)));
            f = Some(match f {
                None => g,
                Some(acc) => Term::sum(acc, g),
            });
        }
        Some((Term::app(f?, e), bang_one()))
    }

    fn closed(&mut self, ty: &Prop, depth: usize) -> Option<Term> {
        let t = self.closed_atom(ty, depth)?;
        if depth > 0 && self.rng.gen_bool(0.25) && !matches!(ty, Prop::Zero) {
            let u = self.closed_atom(ty, depth - 1)?;
            let f = ty.fragment();
            let l = self.scaled(f, t);
            let r = self.scaled(f, u);
            return Some(Term::sum(l, r));
        }
        Some(t)
    }

    fn closed_atom(&mut self, ty: &Prop, depth: usize) -> Option<Term> {
        let d = depth.saturating_sub(1);
        match ty {
            Prop::Top => Some(Term::top()),
            Prop::One(f) => Some(self.scaled(*f, Term::star(*f))),
            Prop::Zero => None,
            Prop::With(a, b) => Some(Term::pair(self.closed(a, d)?, self.closed(b, d)?)),
            Prop::Tensor(_, a, b) => Some(Term::tensor(self.closed(a, d)?, self.closed(b, d)?)),
            Prop::Plus(a, b) => {
                if self.rng.gen_bool(0.5) {
                    self.closed(a, d)
                        .map(Term::inl)
                        .or_else(|| self.closed(b, d).map(Term::inr))
                } else {
                    self.closed(b, d)
                        .map(Term::inr)
                        .or_else(|| self.closed(a, d).map(Term::inl))
                }
            }
            Prop::Bang(p) => Some(Term::bang(self.closed(p, d)?)),
            Prop::Lolli(f, a, b) => {
                let (x, xv) = self.fresh(*f);
                let body = self.consume(xv, a, b, d)?;
                Some(Term::lam_named(x, body))
            }
        }
    }

    /// A term of type `goal` whose only free variable is `x : a`.
    fn consume(&mut self, x: Term, a: &Prop, goal: &Prop, depth: usize) -> Option<Term> {
        if goal == a && self.rng.gen_bool(0.4) {
            return Some(x);
        }
        if *goal == Prop::Top {
            return Some(Term::top());
        }
        if let Some((e, r)) = self.observe(x.clone(), a, depth) {
            if r == Prop::one_pure() || r == Prop::one_mixed() {
                let rest = self.closed(goal, depth)?;
                return Some(Term::elim_one(e, rest));
            }
            if r == *goal {
                return Some(e);
            }
        }
        match goal {
            _ if goal == a => Some(x),
            Prop::With(l, r) => Some(Term::pair(
                self.consume(x.clone(), a, l, depth)?,
                self.consume(x, a, r, depth)?,
            )),
            Prop::Tensor(_, l, r) => {
                if self.rng.gen_bool(0.5) {
                    Some(Term::tensor(
                        self.consume(x, a, l, depth)?,
                        self.closed(r, depth)?,
                    ))
                } else {
                    Some(Term::tensor(
                        self.closed(l, depth)?,
                        self.consume(x, a, r, depth)?,
                    ))
                }
            }
            Prop::Plus(l, r) => {
                if self.rng.gen_bool(0.5) {
                    Some(Term::inl(self.consume(x, a, l, depth)?))
                } else {
                    Some(Term::inr(self.consume(x, a, r, depth)?))
                }
            }
            _ => None,
        }
    }
}

fn bang_star() -> Term {
    Term::bang(Term::star(Fragment::Pure))
}

fn bang_one() -> Prop {
    Prop::bang(Prop::one_pure())
}
