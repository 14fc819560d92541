//! Quantum encodings: qubit states, linear maps, measurements, the quantum
//! switch and teleportation, plus the decoding of values back to vectors.

use crate::denote::{denote, dim, uncurry_point};
use crate::linalg::{kron, Matrix, C64};
use crate::syntax::{Fragment, Kind, Prop, Scalar, Term};
use crate::typecheck::{check, infer};
use std::f64::consts::FRAC_1_SQRT_2;

/// Pauli coefficients smaller than this are dropped.
pub const PAULI_EPS: f64 = 1e-12;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum QError {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("expected a square matrix with power-of-two side, got {0}x{1}")]
    BadShape(usize, usize),
    #[error("not a value of qubit shape: {0}")]
    NotQubitValue(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn log2_exact(n: usize) -> Option<usize> {
    (n >= 2 && n.is_power_of_two()).then(|| n.trailing_zeros() as usize)
}

/// `c·∗` with `c = 1` written as a bare `∗`.
fn scaled_star(a: C64) -> Term {
    let star = Term::star(Fragment::Pure);
    if a == c(1.0) {
        star
    } else {
        Term::scale(Scalar(a), star)
    }
}

fn ket(bit: usize) -> Term {
    if bit == 0 {
        Term::pair(scaled_star(c(1.0)), scaled_star(c(0.0)))
    } else {
        Term::pair(scaled_star(c(0.0)), scaled_star(c(1.0)))
    }
}

/// `|b₁⟩ ⊗ (|b₂⟩ ⊗ (… ⊗ |bₙ⟩))` for the bits of `k`, most significant first.
fn basis_ket(k: usize, n: usize) -> Term {
    let bit = |i: usize| (k >> (n - 1 - i)) & 1;
    let mut t = ket(bit(n - 1));
    for i in (0..n - 1).rev() {
        t = Term::tensor(ket(bit(i)), t);
    }
    t
}

/// `⟨a·∗, b·∗⟩`.
pub fn encode_qubit(a: C64, b: C64) -> Term {
    Term::pair(scaled_star(a), scaled_star(b))
}

/// A closed term of the n-qubit proposition denoting `v`. One qubit is a
/// pair; more qubits are a combination of basis kets with the zero
/// amplitudes omitted.
pub fn encode_nqubit(v: &[C64]) -> Result<Term, QError> {
    let n = log2_exact(v.len()).ok_or(QError::NotPowerOfTwo(v.len()))?;
    if n == 1 {
        return Ok(encode_qubit(v[0], v[1]));
    }
    let terms: Vec<Term> = v
        .iter()
        .enumerate()
        .filter(|(_, a)| **a != c(0.0))
        .map(|(k, a)| {
            if *a == c(1.0) {
                basis_ket(k, n)
            } else {
                Term::scale(Scalar(*a), basis_ket(k, n))
            }
        })
        .collect();
    Ok(match terms.into_iter().reduce(Term::sum) {
        Some(t) => t,
        None => Term::scale(Scalar::ZERO, basis_ket(0, n)),
    })
}

/// The vector denoted by a value of a proposition built from 𝟙, & and ⊗.
pub fn decode_value(t: &Term, prop: &Prop) -> Result<Vec<C64>, QError> {
    let bad = || QError::NotQubitValue(t.to_string());
    match t.kind() {
        Kind::Sum(a, b) => {
            let (x, y) = (decode_value(a, prop)?, decode_value(b, prop)?);
            return Ok(x.iter().zip(&y).map(|(p, q)| p + q).collect());
        }
        Kind::Scale(s, m) => {
            return Ok(decode_value(m, prop)?
                .into_iter()
                .map(|x| x * s.0)
                .collect());
        }
        _ => {}
    }
    match (t.kind(), prop) {
        (Kind::Star, Prop::One(Fragment::Pure)) => Ok(vec![c(1.0)]),
        (Kind::Pair(a, b), Prop::With(p, q)) => {
            let mut v = decode_value(a, p)?;
            v.extend(decode_value(b, q)?);
            Ok(v)
        }
        (Kind::Tensor(a, b), Prop::Tensor(Fragment::Pure, p, q)) => {
            let x = Matrix::column(&decode_value(a, p)?);
            let y = Matrix::column(&decode_value(b, q)?);
            Ok(kron(&x, &y).entries().to_vec())
        }
        _ => Err(bad()),
    }
}

fn var(x: &str) -> Term {
    Term::var(Fragment::Pure, x)
}

/// `λx. δ&¹(x, x₁. f₁ x₁) ⊞ δ&²(x, x₂. f₂ x₂)` where `fᵢ` maps `∗` to the
/// i-th column of `m`.
pub fn encode_matrix2(m: &Matrix) -> Term {
    assert_eq!(m.shape(), (2, 2));
    let col = |j: usize| {
        Term::lam(
            "y",
            Term::elim_one(var("y"), encode_qubit(m[(0, j)], m[(1, j)])),
        )
    };
    let branch = |i: u8| {
        let xi = if i == 1 { "x1" } else { "x2" };
        Term::elim_with(i, var("x"), xi, Term::app(col(i as usize - 1), var(xi)))
    };
    Term::lam("x", Term::sum(branch(1), branch(2)))
}

/// `λz. δ⊗(z, xy. f x ⊗ g y)`.
pub fn tensor_maps(f: Term, g: Term) -> Term {
    Term::lam(
        "z",
        Term::elim_tensor(
            var("z"),
            "x",
            "y",
            Term::tensor(Term::app(f, var("x")), Term::app(g, var("y"))),
        ),
    )
}

pub fn pauli(k: usize) -> Matrix {
    let i = C64::new(0.0, 1.0);
    let (o, l) = (c(0.0), c(1.0));
    match k {
        0 => Matrix::from_vec(2, 2, vec![l, o, o, l]),
        1 => Matrix::from_vec(2, 2, vec![o, l, l, o]),
        2 => Matrix::from_vec(2, 2, vec![o, -i, i, o]),
        3 => Matrix::from_vec(2, 2, vec![l, o, o, -l]),
        _ => panic!("Pauli index out of range"),
    }
}

/// `(index word, coefficient)` pairs of the n-fold Pauli expansion of `m`,
/// with negligible coefficients dropped. Digit `i` of the word (most
/// significant first) selects I, X, Y or Z on qubit `i`.
pub fn pauli_decomposition(m: &Matrix) -> Result<Vec<(Vec<usize>, C64)>, QError> {
    let (r, cc) = m.shape();
    let n = match log2_exact(r) {
        Some(n) if r == cc => n,
        _ => return Err(QError::BadShape(r, cc)),
    };
    let mut out = Vec::new();
    for w in 0..4usize.pow(n as u32) {
        let word: Vec<usize> = (0..n).map(|i| (w >> (2 * (n - 1 - i))) & 3).collect();
        let p = word
            .iter()
            .skip(1)
            .fold(pauli(word[0]), |acc, &k| kron(&acc, &pauli(k)));
        // tr(P† M) / 2ⁿ
        let mut tr = c(0.0);
        for a in 0..r {
            for b in 0..r {
                tr += p[(b, a)].conj() * m[(b, a)];
            }
        }
        let coeff = tr / r as f64;
        if coeff.norm() >= PAULI_EPS {
            out.push((word, coeff));
        }
    }
    Ok(out)
}

fn pauli_word_term(word: &[usize]) -> Term {
    let last = encode_matrix2(&pauli(word[word.len() - 1]));
    word[..word.len() - 1]
        .iter()
        .rev()
        .fold(last, |acc, &k| tensor_maps(encode_matrix2(&pauli(k)), acc))
}

/// A closed term of `qubitⁿ ⊸ qubitⁿ` denoting `m`, as a combination of
/// tensor products of Pauli encodings. One-qubit maps are encoded directly.
pub fn encode_matrix_n(m: &Matrix) -> Result<Term, QError> {
    let (r, cc) = m.shape();
    if r == 2 && cc == 2 {
        return Ok(encode_matrix2(m));
    }
    let terms = pauli_decomposition(m)?;
    let n = log2_exact(r).expect("checked by the decomposition");
    let summands: Vec<Term> = terms
        .into_iter()
        .map(|(word, a)| {
            let t = pauli_word_term(&word);
            if a == c(1.0) {
                t
            } else {
                Term::scale(Scalar(a), t)
            }
        })
        .collect();
    Ok(match summands.into_iter().reduce(Term::sum) {
        Some(t) => t,
        None => Term::scale(Scalar::ZERO, pauli_word_term(&vec![0; n])),
    })
}

pub fn cnot_matrix() -> Matrix {
    Matrix::from_real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    )
}

pub fn hadamard_matrix() -> Matrix {
    let h = FRAC_1_SQRT_2;
    Matrix::from_real(2, 2, &[h, h, h, -h])
}

pub fn cnot() -> Term {
    encode_matrix_n(&cnot_matrix()).expect("4x4")
}

/// Operators `Pᵢ` of a measurement `ρ ↦ Σ Pᵢ ρ Pᵢ†`, validated so that
/// `Σ Pᵢ† Pᵢ = I`.
#[derive(Clone, Debug)]
pub struct Povm {
    pub operators: Vec<Matrix>,
}

impl Povm {
    pub fn new(operators: Vec<Matrix>) -> Result<Povm, QError> {
        let first = operators
            .first()
            .ok_or(QError::InvalidPovm("no operators".into()))?;
        let (r, cc) = first.shape();
        if log2_exact(r).is_none() || r != cc {
            return Err(QError::BadShape(r, cc));
        }
        let mut sum = Matrix::zeros(r, r);
        for p in &operators {
            if p.shape() != (r, r) {
                return Err(QError::BadShape(p.rows(), p.cols()));
            }
            let pp = p.dagger().compose(p).expect("square");
            sum = sum.add(&pp).expect("same shape");
        }
        if !sum.approx_eq(&Matrix::identity(r), 1e-9) {
            return Err(QError::InvalidPovm(
                "the operators Pᵢ†Pᵢ do not sum to the identity".into(),
            ));
        }
        Ok(Povm { operators })
    }

    pub fn computational() -> Povm {
        let p0 = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let p1 = Matrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        Povm::new(vec![p0, p1]).expect("valid")
    }

    /// Projectors onto the Bell states `βᵢⱼ = CNOT((H|i⟩) ⊗ |j⟩)`, in the
    /// order β₀₀, β₀₁, β₁₀, β₁₁.
    pub fn bell() -> Povm {
        let ops = (0..4).map(|k| {
            let b = Matrix::column(&bell_state(k >> 1, k & 1));
            b.compose(&b.dagger()).expect("outer product")
        });
        Povm::new(ops.collect()).expect("valid")
    }

    /// The superoperator `Σ Pᵢ ⊗ conj(Pᵢ)` on row-stacked vectorizations.
    pub fn superoperator(&self) -> Matrix {
        let d = self.operators[0].rows();
        self.operators
            .iter()
            .fold(Matrix::zeros(d * d, d * d), |acc, p| {
                acc.add(&crate::linalg::bee(p)).expect("same shape")
            })
    }
}

/// Amplitudes of `βᵢⱼ`.
pub fn bell_state(i: usize, j: usize) -> Vec<C64> {
    let h = hadamard_matrix();
    let hi = Matrix::column(&[h[(0, i)], h[(1, i)]]);
    let kj = Matrix::column(&[c((1 - j) as f64), c(j as f64)]);
    cnot_matrix()
        .compose(&kron(&hi, &kj))
        .expect("4x4 on 4")
        .entries()
        .to_vec()
}

/// `𝓑(m₁) ⊞ … ⊞ 𝓑(mₙ)` with `mᵢ` encoding `Pᵢ`.
pub fn measurement_term(povm: &Povm) -> Term {
    povm.operators
        .iter()
        .map(|p| Term::bang(encode_matrix_n(p).expect("validated shape")))
        .reduce(Term::sum)
        .expect("nonempty")
}

pub fn bell_measurement() -> Term {
    measurement_term(&Povm::bell())
}

/// The quantum switch at `P = qubit`:
/// `λh. λz. δ⊗(h, fg. δ⊗(z, xy. δ&¹(x, x₁. δ₁(x₁, |0⟩) ⊗ f (g y)) ⊞
/// δ&²(x, x₂. δ₁(x₂, |1⟩) ⊗ g (f y))))`. The control components `xᵢ : 𝟙`
/// are turned back into the kets they select so that the result has type
/// `qubit ⊗ P`.
pub fn quantum_switch() -> Term {
    let branch = |i: u8, xi: &str, first: &str, second: &str| {
        let ctrl = Term::elim_one(var(xi), ket(i as usize - 1));
        let target = Term::app(var(first), Term::app(var(second), var("y")));
        Term::elim_with(i, var("x"), xi, Term::tensor(ctrl, target))
    };
    let body = Term::sum(branch(1, "x1", "f", "g"), branch(2, "x2", "g", "f"));
    Term::lam(
        "h",
        Term::lam(
            "z",
            Term::elim_tensor(
                var("h"),
                "f",
                "g",
                Term::elim_tensor(var("z"), "x", "y", body),
            ),
        ),
    )
}

pub fn quantum_switch_prop() -> Prop {
    let p = Prop::qubit();
    let pp = Prop::lolli(Fragment::Pure, p.clone(), p.clone());
    let qp = Prop::tensor(Fragment::Pure, Prop::qubit(), p);
    Prop::lolli(
        Fragment::Pure,
        Prop::tensor(Fragment::Pure, pp.clone(), pp),
        Prop::lolli(Fragment::Pure, qp.clone(), qp),
    )
}

/// Correction `Zⁱ Xʲ` for Bell outcome `βᵢⱼ`.
pub fn teleport_correction(i: usize, j: usize) -> Matrix {
    let mut m = Matrix::identity(2);
    if j == 1 {
        m = pauli(1).compose(&m).expect("2x2");
    }
    if i == 1 {
        m = pauli(3).compose(&m).expect("2x2");
    }
    m
}

/// `U = Σₖ 𝓑(λz. δ⊗(z, xy. fₖ x ⊗ hₖ y))`: correction `fₖ` on the first
/// qubit, Bell projector `hₖ` on the remaining pair.
pub fn teleport_u() -> Term {
    let bell = Povm::bell();
    (0..4)
        .map(|k| {
            let f = encode_matrix2(&teleport_correction(k >> 1, k & 1));
            let h = encode_matrix_n(&bell.operators[k]).expect("4x4");
            Term::bang(tensor_maps(f, h))
        })
        .reduce(Term::sum)
        .expect("four outcomes")
}

/// `λw. δ⊗(w, pc. δ⊗(p, ab. b ⊗ (c ⊗ a)))`, which moves the second half of
/// the entangled pair to the front so that the Bell measurement acts on the
/// input and the first half.
pub fn teleport_arrange() -> Term {
    Term::lam(
        "w",
        Term::elim_tensor(
            var("w"),
            "p",
            "c",
            Term::elim_tensor(
                var("p"),
                "a",
                "b",
                Term::tensor(var("b"), Term::tensor(var("c"), var("a"))),
            ),
        ),
    )
}

/// `λz. U (𝓑(arrange) τ(𝓑(β₀₀) ⊗ z))` of type
/// `𝓑(qubit) ⊸ 𝓑(qubit ⊗ (qubit ⊗ qubit))`. The teleported state ends up
/// on the first qubit; the measured pair is the last two.
pub fn teleportation() -> Term {
    let beta = encode_nqubit(&bell_state(0, 0)).expect("4 amplitudes");
    let z = Term::var(Fragment::Mixed, "z");
    let joint = Term::tau(Term::tensor(Term::bang(beta), z));
    let arranged = Term::app(Term::bang(teleport_arrange()), joint);
    Term::lam("z", Term::app(teleport_u(), arranged))
}

pub fn teleportation_prop() -> Prop {
    Prop::lolli(
        Fragment::Mixed,
        Prop::bang(Prop::qubit()),
        Prop::bang(Prop::qubits(3)),
    )
}

/// The superoperator of a closed term of type `𝓑(P ⊸ Q)` or
/// `𝓑(P) ⊸ 𝓑(Q)`, acting on row-stacked vectorizations.
pub fn channel(t: &Term) -> Result<Matrix, String> {
    let (ty, _) = infer(&[], t).map_err(|e| e.message)?;
    let (p, q, f) = match &ty {
        Prop::Bang(pq) => match &**pq {
            Prop::Lolli(_, p, q) => {
                let x = Term::var(Fragment::Mixed, "x_in");
                let f = Term::lam("x_in", Term::app(t.clone(), x));
                (Prop::bang((**p).clone()), Prop::bang((**q).clone()), f)
            }
            _ => return Err(format!("not a channel type: {ty}")),
        },
        Prop::Lolli(Fragment::Mixed, p, q) => ((**p).clone(), (**q).clone(), t.clone()),
        _ => return Err(format!("not a channel type: {ty}")),
    };
    let want = Prop::lolli(Fragment::Mixed, p.clone(), q.clone());
    let d = check(&[], &f, &want).map_err(|e| e.message)?;
    let point = denote(&d).map_err(|e| e.to_string())?.matrix;
    Ok(uncurry_point(&point, dim(&p), dim(&q)))
}

/// Named closed definitions shipped as the prelude, in dependency order.
pub fn prelude_definitions() -> Vec<(&'static str, Fragment, Prop, Term)> {
    let h = FRAC_1_SQRT_2;
    let q = Prop::qubit;
    let q2 = || Prop::qubits(2);
    let gate = |p: Prop| Prop::lolli(Fragment::Pure, p.clone(), p);
    let bang = |p: Prop| Prop::bang(p);
    let pm = |a: f64, b: f64| encode_qubit(c(a), c(b));
    let comp = Povm::computational();
    vec![
        ("ket0", Fragment::Pure, q(), pm(1.0, 0.0)),
        ("ket1", Fragment::Pure, q(), pm(0.0, 1.0)),
        ("plus", Fragment::Pure, q(), pm(h, h)),
        ("minus", Fragment::Pure, q(), pm(h, -h)),
        (
            "id_gate",
            Fragment::Pure,
            gate(q()),
            encode_matrix2(&pauli(0)),
        ),
        (
            "x_gate",
            Fragment::Pure,
            gate(q()),
            encode_matrix2(&pauli(1)),
        ),
        (
            "y_gate",
            Fragment::Pure,
            gate(q()),
            encode_matrix2(&pauli(2)),
        ),
        (
            "z_gate",
            Fragment::Pure,
            gate(q()),
            encode_matrix2(&pauli(3)),
        ),
        (
            "hadamard",
            Fragment::Pure,
            gate(q()),
            encode_matrix2(&hadamard_matrix()),
        ),
        ("cnot", Fragment::Pure, gate(q2()), cnot()),
        (
            "bell00",
            Fragment::Pure,
            q2(),
            encode_nqubit(&bell_state(0, 0)).expect("4 amplitudes"),
        ),
        (
            "qswitch",
            Fragment::Pure,
            quantum_switch_prop(),
            quantum_switch(),
        ),
        (
            "measure",
            Fragment::Mixed,
            bang(gate(q())),
            measurement_term(&comp),
        ),
        (
            "bell_measure",
            Fragment::Mixed,
            bang(gate(q2())),
            bell_measurement(),
        ),
        (
            "teleport",
            Fragment::Mixed,
            teleportation_prop(),
            teleportation(),
        ),
        (
            "measure_plus",
            Fragment::Mixed,
            bang(q()),
            Term::app(measurement_term(&comp), Term::bang(pm(h, h))),
        ),
    ]
}

/// Text of `prelude.lc`.
pub fn prelude_source() -> String {
    let mut s = String::from(
        "# Standard library of quantum encodings. Generated by `lcalc::qstdlib::prelude_source`.\n",
    );
    for (name, frag, prop, term) in prelude_definitions() {
        s.push_str(&format!("\n{frag} def {name} : {prop} =\n  {term}\n"));
    }
    s
}
