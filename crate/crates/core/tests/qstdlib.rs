use lcalc::denote::denote;
use lcalc::linalg::{kron, oracle_choi_positive, oracle_partial_trace, Keep, Matrix, C64};
use lcalc::parser::{parse_program, parse_term};
use lcalc::qstdlib::*;
use lcalc::rewrite::normalize;
use lcalc::syntax::{alpha_eq, Fragment, Prop, Scalar, Term};
use lcalc::typecheck::{check, infer};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn apply(f: &Term, v: &Term) -> Term {
    Term::app(f.clone(), v.clone())
}

fn run_on(f: &Term, v: &[C64]) -> Vec<C64> {
    let n = v.len().trailing_zeros() as usize;
    let t = apply(f, &encode_nqubit(v).unwrap());
    let out = normalize(&t, 100_000, false).unwrap().value;
    decode_value(&out, &Prop::qubits(n)).unwrap()
}

fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

fn mat_vec(m: &Matrix, v: &[C64]) -> Vec<C64> {
    m.compose(&Matrix::column(v)).unwrap().entries().to_vec()
}

#[test]
fn qubit_encodings() {
    let t = encode_qubit(c(0.5), C64::new(0.0, 2.0));
    assert!(alpha_eq(
        &t,
        &parse_term("<0.5 . *, 2i . *>", Fragment::Pure).unwrap()
    ));
    let k1 = encode_nqubit(&[c(0.0), c(1.0)]).unwrap();
    assert!(alpha_eq(
        &k1,
        &parse_term("<0 . *, *>", Fragment::Pure).unwrap()
    ));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = encode_nqubit(&[c(h), c(0.0), c(0.0), c(h)]).unwrap();
    let want = parse_term(
        &format!("{h} . (<*, 0 . *> @ <*, 0 . *>) ++ {h} . (<0 . *, *> @ <0 . *, *>)"),
        Fragment::Pure,
    )
    .unwrap();
    assert!(alpha_eq(&bell, &want));
    assert_eq!(
        encode_nqubit(&[c(1.0); 3]).unwrap_err(),
        QError::NotPowerOfTwo(3)
    );
}

#[test]
fn decoding_is_linear() {
    let q2 = Prop::qubits(2);
    let v = parse_term("<*, 0 . *> @ <0 . *, *>", Fragment::Pure).unwrap();
    assert_eq!(
        decode_value(&v, &q2).unwrap(),
        vec![c(0.0), c(1.0), c(0.0), c(0.0)]
    );
    let z = parse_term("0 . <*, 0 . *> ++ 0 . <0 . *, *>", Fragment::Pure).unwrap();
    assert_eq!(
        decode_value(&z, &Prop::qubit()).unwrap(),
        vec![c(0.0), c(0.0)]
    );
    let amps = [C64::new(0.3, -1.0), c(0.0), c(2.5), C64::new(0.0, 0.125)];
    assert_eq!(
        decode_value(&encode_nqubit(&amps).unwrap(), &q2).unwrap(),
        amps.to_vec()
    );
    let a = Scalar::new(0.5, 0.25);
    let s = Term::scale(a, Term::sum(v.clone(), v.clone()));
    let d = decode_value(&s, &q2).unwrap();
    assert_eq!(d[1], a.0 * c(2.0));
    assert!(decode_value(
        &parse_term("\\x. x", Fragment::Pure).unwrap(),
        &Prop::qubit()
    )
    .is_err());
}

#[test]
fn one_qubit_gates() {
    let x = encode_matrix2(&pauli(1));
    assert_eq!(run_on(&x, &[c(1.0), c(0.0)]), vec![c(0.0), c(1.0)]);
    let z = encode_matrix2(&pauli(3));
    assert_eq!(run_on(&z, &[c(0.0), c(1.0)]), vec![c(0.0), c(-1.0)]);
    let h = hadamard_matrix();
    let out = run_on(&encode_matrix2(&h), &[c(1.0), c(0.0)]);
    assert!(close(&out, &mat_vec(&h, &[c(1.0), c(0.0)]), 1e-12));
    let (ty, _) = infer(&[], &x).unwrap();
    assert_eq!(
        ty,
        Prop::lolli(Fragment::Pure, Prop::qubit(), Prop::qubit())
    );
}

#[test]
fn cnot_encoding() {
    let words = pauli_decomposition(&cnot_matrix()).unwrap();
    let expect = [
        (vec![0, 0], 0.5),
        (vec![0, 1], 0.5),
        (vec![3, 0], 0.5),
        (vec![3, 1], -0.5),
    ];
    assert_eq!(words.len(), 4);
    for ((w, a), (ew, ea)) in words.iter().zip(expect.iter()) {
        assert_eq!(w, ew);
        assert!((a - c(*ea)).norm() < 1e-15);
    }
    let t = cnot();
    let d = check(
        &[],
        &t,
        &Prop::lolli(Fragment::Pure, Prop::qubits(2), Prop::qubits(2)),
    )
    .unwrap();
    let m = denote(&d).unwrap().matrix;
    let f = lcalc::denote::uncurry_point(&m, 4, 4);
    assert!(f.approx_eq(&cnot_matrix(), 1e-12));
    let out = run_on(&t, &[c(0.0), c(0.0), c(1.0), c(0.0)]);
    assert!(close(&out, &[c(0.0), c(0.0), c(0.0), c(1.0)], 1e-12));
}

#[test]
fn identity_decomposes_to_one_word() {
    let w = pauli_decomposition(&Matrix::identity(4)).unwrap();
    assert_eq!(w, vec![(vec![0, 0], c(1.0))]);
}

#[test]
fn measurement_channels() {
    let comp = Povm::computational();
    let ch = channel(&measurement_term(&comp)).unwrap();
    assert!(ch.approx_eq(&comp.superoperator(), 1e-12));
    assert!(oracle_choi_positive(&ch, 2, 2, 1e-9).unwrap());
    let trivial = Povm::new(vec![Matrix::identity(2)]).unwrap();
    assert!(channel(&measurement_term(&trivial))
        .unwrap()
        .approx_eq(&Matrix::identity(4), 1e-12));
    let bell = Povm::bell();
    let ch = channel(&bell_measurement()).unwrap();
    // Independent oracle: Σ Pᵢ ⊗ conj(Pᵢ) built entry by entry.
    let mut oracle = Matrix::zeros(16, 16);
    for p in &bell.operators {
        for r in 0..16 {
            for s in 0..16 {
                oracle[(r, s)] += p[(r / 4, s / 4)] * p[(r % 4, s % 4)].conj();
            }
        }
    }
    assert!(ch.approx_eq(&oracle, 1e-9));
    assert!(oracle_choi_positive(&ch, 4, 4, 1e-9).unwrap());
    let bad = Povm::new(vec![Matrix::identity(2), Matrix::identity(2)]);
    assert!(matches!(bad, Err(QError::InvalidPovm(_))));
}

#[test]
fn quantum_switch_cases() {
    let qs = quantum_switch();
    check(&[], &qs, &quantum_switch_prop()).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (x, z) = (pauli(1), pauli(3));
    let fg = Term::tensor(encode_matrix2(&x), encode_matrix2(&z));
    let ket0 = [c(1.0), c(0.0)];
    for (ctrl, name) in [
        ([c(1.0), c(0.0)], "0"),
        ([c(0.0), c(1.0)], "1"),
        ([c(h), c(h)], "+"),
    ] {
        let input = Term::tensor(
            encode_qubit(ctrl[0], ctrl[1]),
            encode_qubit(ket0[0], ket0[1]),
        );
        let t = apply(&apply(&qs, &fg), &input);
        let out = normalize(&t, 100_000, false).unwrap().value;
        let got = decode_value(&out, &Prop::qubits(2)).unwrap();
        // Oracle: ctrl₀·|0⟩⊗XZ|0⟩ + ctrl₁·|1⟩⊗ZX|0⟩.
        let xz = mat_vec(&x.compose(&z).unwrap(), &ket0);
        let zx = mat_vec(&z.compose(&x).unwrap(), &ket0);
        let b0 = kron(&Matrix::column(&[c(1.0), c(0.0)]), &Matrix::column(&xz));
        let b1 = kron(&Matrix::column(&[c(0.0), c(1.0)]), &Matrix::column(&zx));
        let want = b0.scale(ctrl[0]).add(&b1.scale(ctrl[1])).unwrap();
        assert!(close(&got, want.entries(), 1e-9), "control {name}: {got:?}");
    }
}

#[test]
fn teleportation_keeps_the_state() {
    let tel = teleportation();
    check(&[], &tel, &teleportation_prop()).unwrap();
    let ch = channel(&tel).unwrap();
    assert_eq!(ch.shape(), (64, 4));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for psi in [[c(1.0), c(0.0)], [c(h), c(h)], [c(0.6), C64::new(0.0, 0.8)]] {
        let k = Matrix::column(&psi);
        let rho = k.compose(&k.dagger()).unwrap();
        let out = ch.compose(&rho.vec()).unwrap();
        let kept = oracle_partial_trace(&out, 2, 4, Keep::A).unwrap();
        assert!(kept.approx_eq(&rho, 1e-9), "{psi:?}");
    }
    let mixed = Matrix::identity(2).scale(c(0.5));
    let kept = oracle_partial_trace(&ch.compose(&mixed.vec()).unwrap(), 2, 4, Keep::A).unwrap();
    assert!(kept.approx_eq(&mixed, 1e-9));
}

#[test]
fn prelude_is_current_and_typechecks() {
    let src = prelude_source();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/prelude.lc");
    if std::env::var_os("LC_WRITE_PRELUDE").is_some() {
        std::fs::write(path, &src).unwrap();
    }
    let on_disk = std::fs::read_to_string(path).unwrap();
    assert_eq!(
        on_disk, src,
        "prelude.lc is stale; regenerate with LC_WRITE_PRELUDE=1"
    );
    let prog = parse_program(&src).unwrap();
    let defs = prelude_definitions();
    assert_eq!(prog.definitions.len(), defs.len());
    for (d, (name, frag, prop, term)) in prog.definitions.iter().zip(defs) {
        assert_eq!(d.name, name);
        assert_eq!(d.fragment, frag);
        assert_eq!(d.prop, prop);
        assert!(alpha_eq(&d.term, &term), "{name} does not round-trip");
        check(&[], &d.term, &d.prop).unwrap_or_else(|e| panic!("{name}: {e:?}"));
    }
}
