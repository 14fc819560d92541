//! Random `⇆` rewriting, used to test that algebraic forms are unique and
//! that normal forms do not depend on the order of `⇆` steps.

use super::algebraic::{algebraic_form, canonicalize_shuffled};
use super::hook::{normalize_with, NormalizeError, Normalized};
use crate::syntax::{alpha_eq, Kind, Scalar, Term};
use rand::seq::SliceRandom;
use rand::Rng;

/// Applies `moves` random `⇆` rewrites at random positions. Positions under
/// binders are included. The result has the same type and the same
/// algebraic form as `t` (up to float rounding).
pub fn scramble<R: Rng>(t: &Term, moves: usize, rng: &mut R) -> Term {
    let mut cur = t.clone();
    for _ in 0..moves {
        let mut paths = Vec::new();
        positions(&cur, &mut Vec::new(), &mut paths);
        // A few attempts, since not every move applies everywhere.
        for _ in 0..8 {
            let path = paths.choose(rng).expect("root is a position");
            let sub = cur.subterm_at(path).expect("valid path").clone();
            if let Some(new) = random_move(&sub, rng) {
                cur = cur.replace_at(path, new);
                break;
            }
        }
    }
    cur
}

fn positions(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        positions(c, path, out);
        path.pop();
    }
}

fn random_move<R: Rng>(t: &Term, rng: &mut R) -> Option<Term> {
    let mut moves = applicable(t);
    moves.shuffle(rng);
    moves.into_iter().find_map(|m| apply(m, t))
}

#[derive(Clone, Copy, Debug)]
enum Move {
    IntroOne,
    ElimOne,
    Commute,
    AssocLeft,
    AssocRight,
    SplitScalar,
    MergeScalars,
    NestScale,
    FlattenScale,
    Distribute,
    Factor,
    AddZero,
    DropZero,
    TensorScaleOut,
    TensorScaleIn,
    TensorSumOut,
    TensorSumIn,
}

fn applicable(t: &Term) -> Vec<Move> {
    use Move::*;
    let mut v = vec![IntroOne, AddZero];
    match t.kind() {
        Kind::Sum(..) => v.extend([
            Commute,
            AssocLeft,
            AssocRight,
            MergeScalars,
            Factor,
            DropZero,
        ]),
        Kind::Scale(..) => v.extend([ElimOne, SplitScalar, NestScale, FlattenScale, Distribute]),
        Kind::Tensor(..) => v.extend([TensorScaleOut, TensorSumOut]),
        _ => {}
    }
    if matches!(t.kind(), Kind::Scale(..) | Kind::Sum(..)) {
        v.push(TensorScaleIn);
        v.push(TensorSumIn);
    }
    v
}

fn two() -> Scalar {
    Scalar::real(2.0)
}

fn half(a: Scalar) -> Scalar {
    Scalar::new(a.re() / 2.0, a.im() / 2.0)
}

fn apply(m: Move, t: &Term) -> Option<Term> {
    use Move::*;
    match (m, t.kind()) {
        (IntroOne, _) => Some(Term::scale(Scalar::ONE, t.clone())),
        (ElimOne, Kind::Scale(a, x)) if *a == Scalar::ONE => Some(x.clone()),
        (Commute, Kind::Sum(a, b)) => Some(Term::sum(b.clone(), a.clone())),
        (AssocLeft, Kind::Sum(a, bc)) => match bc.kind() {
            Kind::Sum(b, c) => Some(Term::sum(Term::sum(a.clone(), b.clone()), c.clone())),
            _ => None,
        },
        (AssocRight, Kind::Sum(ab, c)) => match ab.kind() {
            Kind::Sum(a, b) => Some(Term::sum(a.clone(), Term::sum(b.clone(), c.clone()))),
            _ => None,
        },
        (SplitScalar, Kind::Scale(a, x)) => {
            let h = half(*a);
            Some(Term::sum(
                Term::scale(h, x.clone()),
                Term::scale(h, x.clone()),
            ))
        }
        (MergeScalars, Kind::Sum(l, r)) => match (l.kind(), r.kind()) {
            (Kind::Scale(a, x), Kind::Scale(b, y)) if alpha_eq(x, y) => {
                Some(Term::scale(*a + *b, x.clone()))
            }
            _ => None,
        },
        (NestScale, Kind::Scale(a, x)) => {
            Some(Term::scale(half(*a), Term::scale(two(), x.clone())))
        }
        (FlattenScale, Kind::Scale(a, inner)) => match inner.kind() {
            Kind::Scale(b, x) => Some(Term::scale(*a * *b, x.clone())),
            _ => None,
        },
        (Distribute, Kind::Scale(a, s)) => match s.kind() {
            Kind::Sum(x, y) => Some(Term::sum(
                Term::scale(*a, x.clone()),
                Term::scale(*a, y.clone()),
            )),
            _ => None,
        },
        (Factor, Kind::Sum(l, r)) => match (l.kind(), r.kind()) {
            (Kind::Scale(a, x), Kind::Scale(b, y)) if a == b => {
                Some(Term::scale(*a, Term::sum(x.clone(), y.clone())))
            }
            _ => None,
        },
        (AddZero, _) => {
            if algebraic_form(t).is_all_zero() {
                return None;
            }
            Some(Term::sum(t.clone(), Term::scale(Scalar::ZERO, t.clone())))
        }
        (DropZero, Kind::Sum(l, r)) => match r.kind() {
            Kind::Scale(z, _) if z.is_zero() && !algebraic_form(l).is_all_zero() => Some(l.clone()),
            _ => None,
        },
        (TensorScaleOut, Kind::Tensor(l, r)) => match (l.kind(), r.kind()) {
            (Kind::Scale(a, x), _) => Some(Term::scale(*a, Term::tensor(x.clone(), r.clone()))),
            (_, Kind::Scale(a, y)) => Some(Term::scale(*a, Term::tensor(l.clone(), y.clone()))),
            _ => None,
        },
        (TensorSumOut, Kind::Tensor(l, r)) => match (l.kind(), r.kind()) {
            (Kind::Sum(a, b), _) => Some(Term::sum(
                Term::tensor(a.clone(), r.clone()),
                Term::tensor(b.clone(), r.clone()),
            )),
            (_, Kind::Sum(a, b)) => Some(Term::sum(
                Term::tensor(l.clone(), a.clone()),
                Term::tensor(l.clone(), b.clone()),
            )),
            _ => None,
        },
        (TensorScaleIn, Kind::Scale(a, p)) => match p.kind() {
            Kind::Tensor(x, y) => Some(Term::tensor(Term::scale(*a, x.clone()), y.clone())),
            _ => None,
        },
        (TensorSumIn, Kind::Sum(l, r)) => match (l.kind(), r.kind()) {
            (Kind::Tensor(a, b), Kind::Tensor(c, d)) if alpha_eq(b, d) => {
                Some(Term::tensor(Term::sum(a.clone(), c.clone()), b.clone()))
            }
            (Kind::Tensor(a, b), Kind::Tensor(c, d)) if alpha_eq(a, c) => {
                Some(Term::tensor(a.clone(), Term::sum(b.clone(), d.clone())))
            }
            _ => None,
        },
        _ => None,
    }
}

/// Normalization where every canonicalization is preceded by a random
/// scramble and merges summands in a random order.
pub fn normalize_randomized<R: Rng>(
    t: &Term,
    fuel: usize,
    rng: &mut R,
) -> Result<Normalized, NormalizeError> {
    normalize_with(t, fuel, false, |x| {
        let moves = rng.gen_range(0..4);
        let s = scramble(x, moves, rng);
        canonicalize_shuffled(&s, rng)
    })
}
