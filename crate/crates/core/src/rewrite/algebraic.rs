use crate::syntax::{alpha_eq_tol, canonical_cmp, Kind, Scalar, Term};
use rand::seq::SliceRandom;
use rand::Rng;

/// Coefficients within this distance of 0 or 1 are snapped onto them.
pub const SNAP_EPS: f64 = 1e-12;

/// A canonical linear combination `Σ αᵢ·𝔟ᵢ` of pairwise distinct base forms,
/// sorted by [`canonical_cmp`]. Either every coefficient is nonzero or every
/// coefficient is exactly zero.
#[derive(Clone, Debug)]
pub struct AlgebraicForm {
    pub summands: Vec<(Scalar, Term)>,
}

impl AlgebraicForm {
    pub fn is_all_zero(&self) -> bool {
        self.summands.iter().all(|(a, _)| a.is_zero())
    }

    /// The term `Σ αᵢ·𝔟ᵢ`, left-nested, with coefficient-1 summands bare.
    pub fn to_term(&self) -> Term {
        let leaf = |(a, b): &(Scalar, Term)| {
            if a.is_one() {
                b.clone()
            } else {
                Term::scale(*a, b.clone())
            }
        };
        let mut it = self.summands.iter();
        let mut acc = leaf(it.next().expect("nonempty form"));
        for s in it {
            acc = Term::sum(acc, leaf(s));
        }
        acc
    }

    /// [`to_term`](Self::to_term) with every new node marked canonical.
    fn to_canonical_term(&self) -> Term {
        let leaf = |(a, b): &(Scalar, Term)| {
            let t = if a.is_one() {
                b.clone()
            } else {
                Term::scale(*a, b.clone())
            };
            t.mark_canonical();
            t
        };
        let mut it = self.summands.iter();
        let mut acc = leaf(it.next().expect("nonempty form"));
        for s in it {
            acc = Term::sum(acc, leaf(s));
            acc.mark_canonical();
        }
        acc
    }
}

/// `⌊t⌋`.
pub fn algebraic_form(t: &Term) -> AlgebraicForm {
    AlgebraicForm {
        summands: canon(t, &mut Deterministic),
    }
}

/// `⌊t⌋` as a term.
pub fn canonicalize(t: &Term) -> Term {
    if t.is_canonical() {
        return t.clone();
    }
    algebraic_form(t).to_canonical_term()
}

/// `⌊t⌋` computed with summands merged in a random order before the final
/// sort. The result is the same as [`canonicalize`] up to float rounding.
pub fn canonicalize_shuffled<R: Rng>(t: &Term, rng: &mut R) -> Term {
    AlgebraicForm {
        summands: canon(t, &mut Shuffled(rng)),
    }
    .to_term()
}

pub(crate) trait MergeOrder {
    fn prepare(&mut self, v: &mut Vec<(Scalar, Term)>);

    /// Whether results may be cached on and reused from term nodes.
    fn memoized(&self) -> bool {
        false
    }
}

struct Deterministic;

impl MergeOrder for Deterministic {
    fn prepare(&mut self, _: &mut Vec<(Scalar, Term)>) {}

    fn memoized(&self) -> bool {
        true
    }
}

struct Shuffled<'a, R>(&'a mut R);

impl<R: Rng> MergeOrder for Shuffled<'_, R> {
    fn prepare(&mut self, v: &mut Vec<(Scalar, Term)>) {
        v.shuffle(self.0);
    }
}

fn canon(t: &Term, order: &mut dyn MergeOrder) -> Vec<(Scalar, Term)> {
    let memo = order.memoized();
    if memo && t.is_canonical() {
        // Already sorted, merged and snapped: only the shape is read back.
        return canonical_summands(t);
    }
    match t.kind() {
        Kind::Sum(..) | Kind::Scale(..) => {
            // Nested sums and scalings are merged in one pass; merging at
            // every level is quadratic in the number of summands.
            let mut v = Vec::new();
            let mut stack = vec![(Scalar::ONE, t)];
            while let Some((k, u)) = stack.pop() {
                match u.kind() {
                    _ if memo && u.is_canonical() => {
                        v.extend(canonical_summands(u).into_iter().map(|(a, b)| (k * a, b)))
                    }
                    Kind::Sum(a, b) => {
                        stack.push((k, b));
                        stack.push((k, a));
                    }
                    Kind::Scale(s, m) => stack.push((k * *s, m)),
                    _ => v.extend(canon(u, order).into_iter().map(|(a, b)| (k * a, b))),
                }
            }
            finish(v, order)
        }
        Kind::Tensor(a, b) => {
            let (va, vb) = (canon(a, order), canon(b, order));
            if let ([(x, bx)], [(y, by)]) = (va.as_slice(), vb.as_slice()) {
                if x.is_one() && y.is_one() && Term::ptr_eq(bx, a) && Term::ptr_eq(by, b) {
                    if memo {
                        t.mark_canonical();
                    }
                    return vec![(Scalar::ONE, t.clone())];
                }
            }
            let mut v = Vec::with_capacity(va.len() * vb.len());
            for (x, bx) in &va {
                for (y, by) in &vb {
                    v.push((*x * *y, base(Term::tensor(bx.clone(), by.clone()), memo)));
                }
            }
            finish(v, order)
        }
        Kind::Var(_) | Kind::Star | Kind::Top => {
            if memo {
                t.mark_canonical();
            }
            vec![(Scalar::ONE, t.clone())]
        }
        _ => {
            let children = t.children();
            let mut changed = false;
            let mut cs = Vec::with_capacity(children.len());
            for c in children {
                let form = AlgebraicForm {
                    summands: canon(c, order),
                };
                let ct = if memo {
                    form.to_canonical_term()
                } else {
                    form.to_term()
                };
                // A lone bare summand is the child itself when nothing moved.
                let ct = match form.summands.as_slice() {
                    [(a, b)] if a.is_one() && Term::ptr_eq(b, c) => c.clone(),
                    _ => ct,
                };
                changed |= !Term::ptr_eq(&ct, c);
                cs.push(ct);
            }
            let u = if changed {
                t.with_children(cs)
            } else {
                t.clone()
            };
            vec![(Scalar::ONE, base(u, memo))]
        }
    }
}

fn base(t: Term, memo: bool) -> Term {
    if memo {
        t.mark_canonical();
    }
    t
}

/// The summands of a term already in canonical form.
fn canonical_summands(t: &Term) -> Vec<(Scalar, Term)> {
    let mut out = Vec::new();
    let mut stack = vec![t];
    while let Some(u) = stack.pop() {
        match u.kind() {
            Kind::Sum(a, b) => {
                stack.push(b);
                stack.push(a);
            }
            Kind::Scale(s, b) => out.push((*s, b.clone())),
            _ => out.push((Scalar::ONE, u.clone())),
        }
    }
    out
}

fn finish(mut v: Vec<(Scalar, Term)>, order: &mut dyn MergeOrder) -> Vec<(Scalar, Term)> {
    order.prepare(&mut v);
    v.sort_by(|a, b| canonical_cmp(&a.1, &b.1));
    let mut out: Vec<(Scalar, Term)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some((c, last)) if alpha_eq_tol(last, &b, SNAP_EPS) => *c = *c + a,
            _ => out.push((a, b)),
        }
    }
    for (c, _) in out.iter_mut() {
        *c = c.snapped(SNAP_EPS);
    }
    if out.iter().any(|(c, _)| !c.is_zero()) {
        out.retain(|(c, _)| !c.is_zero());
    }
    out
}
