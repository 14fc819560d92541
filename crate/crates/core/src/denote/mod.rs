//! Matrix semantics of propositions and typing derivations. Pure
//! propositions denote finite-dimensional Hilbert spaces; mixed ones denote
//! the underlying spaces of finite-dimensional C*-algebras, with morphisms
//! acting on row-stacked vectorizations.

use crate::linalg::{
    bee, copair, curry, inj, kron, pairing, permutation, tau_iso, LinalgError, Matrix, MatrixJson,
};
use crate::syntax::{Fragment, Prop};
use crate::typecheck::{Derivation, Rule};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Category {
    #[serde(rename = "FHilb")]
    FHilb,
    #[serde(rename = "FCstar")]
    FCstar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SemObject {
    pub dim: usize,
    pub category: Category,
}

#[derive(Clone, Debug)]
pub struct Denotation {
    /// Dimensions of the context entries, in order.
    pub source_factors: Vec<usize>,
    pub source: SemObject,
    pub target: SemObject,
    pub matrix: Matrix,
}

#[derive(Serialize)]
pub struct DenotationJson {
    pub source: SemObject,
    pub source_factors: Vec<usize>,
    pub target: SemObject,
    pub matrix: MatrixJson,
}

impl Denotation {
    pub fn to_json(&self) -> DenotationJson {
        DenotationJson {
            source: self.source,
            source_factors: self.source_factors.clone(),
            target: self.target,
            matrix: self.matrix.to_json(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DenoteError {
    #[error("dimension mismatch at rule {rule}: {source}")]
    Dim {
        rule: &'static str,
        #[source]
        source: LinalgError,
    },
}

pub fn dim(p: &Prop) -> usize {
    match p {
        Prop::Top | Prop::Zero => 0,
        Prop::One(_) => 1,
        Prop::Lolli(_, a, b) | Prop::Tensor(_, a, b) => dim(a) * dim(b),
        Prop::With(a, b) | Prop::Plus(a, b) => dim(a) + dim(b),
        Prop::Bang(p) => {
            let d = dim(p);
            d * d
        }
    }
}

pub fn denote_prop(p: &Prop) -> SemObject {
    SemObject {
        dim: dim(p),
        category: match p.fragment() {
            Fragment::Pure => Category::FHilb,
            Fragment::Mixed => Category::FCstar,
        },
    }
}

pub fn denote(d: &Derivation) -> Result<Denotation, DenoteError> {
    let matrix = interp(d)?;
    let factors: Vec<usize> = d.concl.ctx.iter().map(|(_, p)| dim(p)).collect();
    let target = denote_prop(&d.concl.prop);
    let source = SemObject {
        dim: factors.iter().product(),
        category: target.category,
    };
    Ok(Denotation {
        source_factors: factors,
        source,
        target,
        matrix,
    })
}

fn ctx_dim(d: &Derivation) -> usize {
    d.concl.ctx.iter().map(|(_, p)| dim(p)).product()
}

fn id(n: usize) -> Matrix {
    Matrix::identity(n)
}

fn interp(d: &Derivation) -> Result<Matrix, DenoteError> {
    let rule = d.rule.name();
    let e = |source| DenoteError::Dim { rule, source };
    let ps = &d.premises;
    let target = dim(&d.concl.prop);
    let m = match &d.rule {
        Rule::Ax => id(target),
        Rule::Sum => interp(&ps[0])?.add(&interp(&ps[1])?).map_err(e)?,
        Rule::Prod(a) => interp(&ps[0])?.scale(a.0),
        Rule::TopI => Matrix::zeros(0, ctx_dim(d)),
        // Factors through the zero object.
        Rule::ZeroE => Matrix::zeros(target, ctx_dim(d)),
        Rule::OneI => id(1),
        Rule::OneE | Rule::TensorI => kron(&interp(&ps[0])?, &interp(&ps[1])?),
        Rule::LolliI => {
            let Prop::Lolli(_, a, b) = &d.concl.prop else {
                unreachable!()
            };
            curry(&interp(&ps[0])?, ctx_dim(d), dim(a), dim(b)).map_err(e)?
        }
        Rule::LolliE => {
            let a = dim(&ps[1].concl.prop);
            apply_eval(&interp(&ps[0])?, &interp(&ps[1])?, a, target)
        }
        Rule::WithI => pairing(&interp(&ps[0])?, &interp(&ps[1])?).map_err(e)?,
        Rule::WithE(i) => {
            let Prop::With(p, q) = &ps[0].concl.prop else {
                unreachable!()
            };
            let (dp, dq) = (dim(p), dim(q));
            let (di, off) = if *i == 1 { (dp, 0) } else { (dq, dp) };
            let delta = rest_dim(&ps[1], 1);
            // (πᵢ ⊗ id) then σ, as a row selection of ⟦m⟧ ⊗ id.
            let x = kron(&interp(&ps[0])?, &id(delta));
            let y = reindex_rows(&x, delta * di, |r| {
                let (t, s) = (r / di, r % di);
                (off + s) * delta + t
            });
            interp(&ps[1])?.compose(&y).map_err(e)?
        }
        Rule::PlusI(i) => {
            let Prop::Plus(a, b) = &d.concl.prop else {
                unreachable!()
            };
            inj(*i, dim(a), dim(b))
                .compose(&interp(&ps[0])?)
                .map_err(e)?
        }
        Rule::PlusE => {
            let Prop::Plus(a, b) = &ps[0].concl.prop else {
                unreachable!()
            };
            let (da, db) = (dim(a), dim(b));
            let delta = rest_dim(&ps[1], 1);
            // d ∘ σ ∘ (⟦m⟧ ⊗ id), as a row permutation of ⟦m⟧ ⊗ id.
            let x = kron(&interp(&ps[0])?, &id(delta));
            let y = reindex_rows(&x, delta * (da + db), |r| {
                let (t, s) = if r < delta * da {
                    (r / da.max(1), r % da.max(1))
                } else {
                    let r = r - delta * da;
                    (r / db.max(1), da + r % db.max(1))
                };
                s * delta + t
            });
            let br = copair(&interp(&ps[1])?, &interp(&ps[2])?).map_err(e)?;
            br.compose(&y).map_err(e)?
        }
        Rule::TensorE => {
            let s12 = dim(&ps[0].concl.prop);
            let delta = rest_dim(&ps[1], 2);
            // σ ∘ (⟦m⟧ ⊗ id), as a row permutation.
            let x = kron(&interp(&ps[0])?, &id(delta));
            let y = reindex_rows(&x, delta * s12, |r| {
                let (t, s) = (r / s12.max(1), r % s12.max(1));
                s * delta + t
            });
            interp(&ps[1])?.compose(&y).map_err(e)?
        }
        Rule::BangI => bee(&interp(&ps[0])?),
        Rule::BangLolliE => {
            let Prop::Bang(pq) = &ps[0].concl.prop else {
                unreachable!()
            };
            let Prop::Lolli(_, p, q) = &**pq else {
                unreachable!()
            };
            apply_bang_eval(&interp(&ps[0])?, &interp(&ps[1])?, dim(p), dim(q))
        }
        Rule::BangTensor => {
            let Prop::Tensor(_, a, b) = &ps[0].concl.prop else {
                unreachable!()
            };
            let (Prop::Bang(p), Prop::Bang(q)) = (&**a, &**b) else {
                unreachable!()
            };
            tau_iso(dim(p), dim(q))
                .compose(&interp(&ps[0])?)
                .map_err(e)?
        }
        Rule::Ex(perm) => {
            let dims: Vec<usize> = d.concl.ctx.iter().map(|(_, p)| dim(p)).collect();
            let inner = interp(&ps[0])?;
            let map = exchange_map(&dims, perm);
            Matrix::from_fn(inner.rows(), inner.cols(), |r, k| inner[(r, map(k))])
        }
    };
    Ok(m)
}

/// Product of the dimensions of a premise context without its last `k`
/// entries (the binders).
fn rest_dim(d: &Derivation, k: usize) -> usize {
    let c = &d.concl.ctx;
    c[..c.len() - k].iter().map(|(_, p)| dim(p)).product()
}

/// The symmetry `⟦Γ⟧ → ⟦Γ'⟧` where entry `k` of `Γ'` is entry `perm[k]` of
/// `Γ`.
pub fn exchange(dims: &[usize], perm: &[usize]) -> Matrix {
    permutation(dims.iter().product(), exchange_map(dims, perm))
}

fn exchange_map<'a>(dims: &'a [usize], perm: &'a [usize]) -> impl Fn(usize) -> usize + 'a {
    let pdims: Vec<usize> = perm.iter().map(|&i| dims[i]).collect();
    move |idx| {
        let digits = to_digits(idx, dims);
        let out: Vec<usize> = perm.iter().map(|&i| digits[i]).collect();
        from_digits(&out, &pdims)
    }
}

/// A matrix with `rows` rows whose row `r` is row `src(r)` of `x`.
fn reindex_rows(x: &Matrix, rows: usize, src: impl Fn(usize) -> usize) -> Matrix {
    Matrix::from_fn(rows, x.cols(), |r, k| x[(src(r), k)])
}

/// `eval ∘ (f ⊗ g)` for `f : Γ → [A, C]`, `g : Δ → A`, without building the
/// evaluation matrix.
pub fn apply_eval(f: &Matrix, g: &Matrix, a: usize, c: usize) -> Matrix {
    let dd = g.cols();
    Matrix::from_fn(c, f.cols() * dd, |z, col| {
        let (gi, di) = (col / dd.max(1), col % dd.max(1));
        (0..a).map(|y| f[(y * c + z, gi)] * g[(y, di)]).sum()
    })
}

/// `𝓑(eval) ∘ τ ∘ (f ⊗ g)` for `f : Γ → 𝓑([P, Q])`, `g : Δ → 𝓑(P)`:
/// the output operator is `O[z][z'] = Σ F[yq+z][y'q+z'] ρ[y][y']`.
pub fn apply_bang_eval(f: &Matrix, g: &Matrix, p: usize, q: usize) -> Matrix {
    let n = p * q;
    let dd = g.cols();
    Matrix::from_fn(q * q, f.cols() * dd, |row, col| {
        let (z, z2) = (row / q, row % q);
        let (gi, di) = (col / dd.max(1), col % dd.max(1));
        let mut acc = crate::linalg::C64::default();
        for y in 0..p {
            for y2 in 0..p {
                let fr = (y * q + z) * n + (y2 * q + z2);
                acc += f[(fr, gi)] * g[(y * p + y2, di)];
            }
        }
        acc
    })
}

fn to_digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

fn from_digits(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// The map `B → C` named by a closed element of `[B, C]` (inverse of
/// currying with a trivial context).
pub fn uncurry_point(point: &Matrix, b: usize, c: usize) -> Matrix {
    assert_eq!(point.shape(), (b * c, 1), "not a point of the hom object");
    Matrix::from_fn(c, b, |z, y| point[(y * c + z, 0)])
}
