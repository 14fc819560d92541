//! α-equivalence and the canonical total order on terms, both computed on
//! the de Bruijn view of bound variables.

use super::{Kind, Name, Scalar, Term};
use std::cmp::Ordering;

pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    Cmp { scalar: exact }.run(a, b) == Ordering::Equal
}

/// α-equivalence with scalars compared up to `tol`.
pub fn alpha_eq_tol(a: &Term, b: &Term, tol: f64) -> bool {
    let scalar = move |x: &Scalar, y: &Scalar| {
        if x.approx_eq(y, tol) {
            Ordering::Equal
        } else {
            x.total_cmp(y)
        }
    };
    Cmp { scalar }.run(a, b) == Ordering::Equal
}

/// Total order: fragment, constructor tag, then children left to right, then
/// scalars by `(re, im)`. Bound variables compare by de Bruijn index and sort
/// before free variables, which compare by name.
pub fn canonical_cmp(a: &Term, b: &Term) -> Ordering {
    Cmp { scalar: exact }.run(a, b)
}

fn exact(x: &Scalar, y: &Scalar) -> Ordering {
    x.total_cmp(y)
}

struct Cmp<F> {
    scalar: F,
}

impl<F: Fn(&Scalar, &Scalar) -> Ordering> Cmp<F> {
    fn run(&self, a: &Term, b: &Term) -> Ordering {
        self.rec(a, b, &mut Vec::new(), &mut Vec::new(), true)
    }

    /// `same_env` holds when both binder stacks are identical, so shared
    /// subterms can be skipped.
    fn rec(
        &self,
        a: &Term,
        b: &Term,
        ea: &mut Vec<Name>,
        eb: &mut Vec<Name>,
        same_env: bool,
    ) -> Ordering {
        if same_env && Term::ptr_eq(a, b) {
            return Ordering::Equal;
        }
        let head = a.frag().cmp(&b.frag()).then(a.tag().cmp(&b.tag()));
        if head != Ordering::Equal {
            return head;
        }
        match (a.kind(), b.kind()) {
            (Kind::Var(x), Kind::Var(y)) => {
                let ix = ea.iter().rposition(|n| n == x).map(|p| ea.len() - 1 - p);
                let iy = eb.iter().rposition(|n| n == y).map(|p| eb.len() - 1 - p);
                match (ix, iy) {
                    (Some(i), Some(j)) => i.cmp(&j),
                    (Some(_), None) => Ordering::Less,
                    (None, Some(_)) => Ordering::Greater,
                    (None, None) => x.cmp(y),
                }
            }
            (Kind::Scale(s, _), Kind::Scale(r, _)) => self
                .children(a, b, ea, eb, same_env)
                .then_with(|| (self.scalar)(s, r)),
            (Kind::ElimWith(i, ..), Kind::ElimWith(j, ..)) if i != j => i.cmp(j),
            _ => self.children(a, b, ea, eb, same_env),
        }
    }

    fn children(
        &self,
        a: &Term,
        b: &Term,
        ea: &mut Vec<Name>,
        eb: &mut Vec<Name>,
        same_env: bool,
    ) -> Ordering {
        let (ca, cb) = (a.children(), b.children());
        for (i, (x, y)) in ca.iter().zip(cb.iter()).enumerate() {
            let (ba, bb) = (a.binders_of_child(i), b.binders_of_child(i));
            let same = same_env && ba == bb;
            let (na, nb) = (ba.len(), bb.len());
            ea.extend(ba);
            eb.extend(bb);
            let o = self.rec(x, y, ea, eb, same);
            ea.truncate(ea.len() - na);
            eb.truncate(eb.len() - nb);
            if o != Ordering::Equal {
                return o;
            }
        }
        ca.len().cmp(&cb.len())
    }
}

/// Whether no two of `terms` are α-equivalent.
pub fn pairwise_distinct(terms: &[&Term]) -> bool {
    let mut sorted = terms.to_vec();
    sorted.sort_by(|a, b| canonical_cmp(a, b));
    sorted
        .windows(2)
        .all(|w| canonical_cmp(w[0], w[1]) != Ordering::Equal)
}
