use lcalc::denote::{denote, denote_prop, dim, exchange, Category};
use lcalc::linalg::{Matrix, C64};
use lcalc::parser::{parse_prop, parse_term};
use lcalc::rewrite::normalize;
use lcalc::syntax::{Fragment, Name, Prop, Term};
use lcalc::typecheck::{check, infer};

fn den(t: &Term) -> Matrix {
    let (_, d) = infer(&[], t).unwrap();
    denote(&d).unwrap().matrix
}

fn pure(s: &str) -> Term {
    parse_term(s, Fragment::Pure).unwrap()
}

fn mixed(s: &str) -> Term {
    parse_term(s, Fragment::Mixed).unwrap()
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[test]
fn prop_dimensions() {
    let q = denote_prop(&Prop::qubit());
    assert_eq!((q.dim, q.category), (2, Category::FHilb));
    let b = denote_prop(&parse_prop("B(qubit)", Fragment::Mixed).unwrap());
    assert_eq!((b.dim, b.category), (4, Category::FCstar));
    assert_eq!(dim(&Prop::Top), 0);
    assert_eq!(
        dim(&parse_prop("qubit -o qubit * qubit", Fragment::Pure).unwrap()),
        8
    );
    assert_eq!(
        dim(&parse_prop("1 + B(qubit)", Fragment::Mixed).unwrap()),
        5
    );
}

#[test]
fn closed_values() {
    assert_eq!(den(&pure("<*, 0 . *>")), Matrix::column(&[c(1.0), c(0.0)]));
    assert!(den(&mixed("B(0.5 . *)")).approx_eq(&Matrix::column(&[c(0.25)]), 1e-12));
    let k = den(&pure("<2i . *, 0 . *> @ <0 . *, *>"));
    assert!(k.approx_eq(
        &Matrix::column(&[c(0.0), C64::new(0.0, 2.0), c(0.0), c(0.0)]),
        1e-12
    ));
    // Top denotes the zero space.
    assert_eq!(den(&pure("<>")).shape(), (0, 1));
}

#[test]
fn functions_apply_by_evaluation() {
    let x = "(\\x. proj1(x, a. let * = a in <0 . *, *>) ++ proj2(x, b. let * = b in <*, 0 . *>))";
    let app = den(&pure(&format!("{x} <0.25 . *, 0.5 . *>")));
    assert!(app.approx_eq(&Matrix::column(&[c(0.5), c(0.25)]), 1e-12));
}

#[test]
fn measurement_denotation() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = mixed(&format!(
        "(B(\\x. proj1(x, a. let * = a in <*, 0 . *>)) ++ B(\\x. proj2(x, b. let * = b in <0 . *, *>))) \
         B(<{h} . *, {h} . *>)"
    ));
    let m = den(&t);
    let want = Matrix::column(&[c(0.5), c(0.0), c(0.0), c(0.5)]);
    assert!(m.approx_eq(&want, 1e-12), "{m:?}");
    let v = normalize(&t, 1000, false).unwrap().value;
    assert!(den(&v).approx_eq(&want, 1e-12));
}

#[test]
fn open_terms_and_exchange() {
    let ctx: Vec<(Name, Prop)> = vec![("x".into(), Prop::qubit()), ("y".into(), Prop::one_pure())];
    let t = pure("let * = y in x");
    let d = check(&ctx, &t, &Prop::qubit()).unwrap();
    let m = denote(&d).unwrap();
    assert_eq!(m.source_factors, vec![2, 1]);
    assert!(m.matrix.approx_eq(&Matrix::identity(2), 1e-12));

    let ctx: Vec<(Name, Prop)> = vec![("x".into(), Prop::qubit()), ("y".into(), Prop::qubit())];
    let t = pure("y @ x");
    let d = check(
        &ctx,
        &t,
        &Prop::tensor(Fragment::Pure, Prop::qubit(), Prop::qubit()),
    )
    .unwrap();
    let m = denote(&d).unwrap().matrix;
    assert!(m.approx_eq(&lcalc::linalg::swap(2, 2), 1e-12));
    assert!(exchange(&[2, 3], &[1, 0]).approx_eq(&lcalc::linalg::swap(2, 3), 0.0));
}

#[test]
fn steps_preserve_denotation() {
    let cases = [
        (
            Fragment::Mixed,
            "case inl(*) ++ inl(*) of { inl x -> x ; inr y -> 3 . y }",
        ),
        (
            Fragment::Pure,
            "let x @ y = (<*, 2 . *> ++ <0 . *, *>) @ <*, 1i . *> in y @ x",
        ),
        (Fragment::Mixed, "tau(B(<*, 1i . *>) @ B(0.5 . *))"),
        (
            Fragment::Mixed,
            "B(\\x. x) (0.5 . B(<*, *>) ++ B(<*, 0 . *>))",
        ),
    ];
    for (f, s) in cases {
        let t = parse_term(s, f).unwrap();
        let before = den(&t);
        let n = normalize(&t, 1000, true).unwrap();
        for e in &n.trace {
            assert!(
                den(&e.after).approx_eq(&before, 1e-9),
                "{s}: step to {}",
                e.after
            );
        }
    }
}

fn random_matrix(rows: usize, cols: usize, seed: &mut u64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        *seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let a = ((*seed >> 33) as f64) / (1u64 << 31) as f64 - 0.5;
        *seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let b = ((*seed >> 33) as f64) / (1u64 << 31) as f64 - 0.5;
        C64::new(a, b)
    })
}

#[test]
fn direct_evaluation_matches_structure_maps() {
    use lcalc::denote::{apply_bang_eval, apply_eval};
    use lcalc::linalg::{bee, eval_map, kron, tau_iso};
    let mut seed = 11;
    for (a, cdim, g, d) in [(2, 3, 1, 2), (3, 2, 2, 1), (1, 4, 2, 3)] {
        let f = random_matrix(a * cdim, g, &mut seed);
        let x = random_matrix(a, d, &mut seed);
        let lit = eval_map(a, cdim).compose(&kron(&f, &x)).unwrap();
        assert!(apply_eval(&f, &x, a, cdim).approx_eq(&lit, 1e-12));
    }
    for (p, q, g, d) in [(2, 2, 1, 1), (2, 3, 2, 1), (3, 1, 1, 2)] {
        let n = p * q;
        let f = random_matrix(n * n, g, &mut seed);
        let x = random_matrix(p * p, d, &mut seed);
        let lit = bee(&eval_map(p, q))
            .compose(&tau_iso(n, p))
            .unwrap()
            .compose(&kron(&f, &x))
            .unwrap();
        assert!(apply_bang_eval(&f, &x, p, q).approx_eq(&lit, 1e-12));
    }
}
