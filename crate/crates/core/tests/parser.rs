use lcalc::parser::{parse_program, parse_prop, parse_term, pretty, ParseErrorKind};
use lcalc::syntax::{alpha_eq, Fragment, Kind, Prop, Scalar, Term};

fn pure(s: &str) -> Term {
    parse_term(s, Fragment::Pure).unwrap()
}

fn mixed(s: &str) -> Term {
    parse_term(s, Fragment::Mixed).unwrap()
}

#[test]
fn scale_binds_looser_than_tensor() {
    let t = pure("1/sqrt(2) . <*, 0.*> @ <*, 0.*>");
    let Kind::Scale(s, m) = t.kind() else {
        panic!("{t}")
    };
    assert!((s.re() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert!(matches!(m.kind(), Kind::Tensor(..)));
}

#[test]
fn case_and_tau() {
    let t = mixed("case z of { inl x -> x ; inr y -> y }");
    assert!(matches!(t.kind(), Kind::ElimPlus(..)));
    let t = mixed("tau(B(v) @ B(w))");
    let Kind::Tau(m) = t.kind() else { panic!() };
    assert!(matches!(m.kind(), Kind::Tensor(..)));
}

#[test]
fn pretty_examples() {
    assert_eq!(pretty(&pure("\\x. x")), "\\x. x");
    assert_eq!(pretty(&pure("<*, 0 . *>")), "<*, 0 . *>");
    let p = parse_prop("qubit -o qubit", Fragment::Pure).unwrap();
    assert_eq!(p.to_string(), "qubit -o qubit");
    assert_eq!(p, Prop::lolli(Fragment::Pure, Prop::qubit(), Prop::qubit()));
}

#[test]
fn round_trips() {
    for s in [
        "\\x. \\y. x @ y",
        "(\\x. x) ++ (\\y. y)",
        "a ++ (b ++ c)",
        "(a ++ b) ++ c",
        "2 . (a ++ b)",
        "a @ (2 . b)",
        "(a @ b) @ c",
        "f (g x) y",
        "let x @ y = z in x @ y",
        "let * = u in (\\x. x) v",
        "proj2(<*, <>>, x. x)",
        "(0.5-0.25i) . * ++ -1 . * ++ 2i . *",
        "(\\x. x) (let * = a in b)",
        "(let * = a in b) ++ c",
    ] {
        let t = pure(s);
        let back = pure(&pretty(&t));
        assert!(alpha_eq(&t, &back), "{s} -> {}", pretty(&t));
    }
    for s in [
        "case z of { inl x -> inr(x) ; inr y -> inl(y) }",
        "tau(B(\\x. x) @ B(<*, 0 . *>)) ++ 0.5 . abort(u)",
        "B(\\x. x) B(*)",
    ] {
        let t = mixed(s);
        let back = mixed(&pretty(&t));
        assert!(alpha_eq(&t, &back), "{s} -> {}", pretty(&t));
    }
}

#[test]
fn programs_expand_definitions() {
    let p = parse_program(
        "pure def id : qubit -o qubit = \\x. x\n\
         pure def k0 : qubit = <*, 0 . *>   # |0>\n\
         mixed def m : B(qubit) = B(k0)\n",
    )
    .unwrap();
    assert_eq!(p.definitions.len(), 3);
    let m = &p.get("m").unwrap().term;
    assert!(alpha_eq(m, &mixed("B(<*, 0 . *>)")));
    let k0 = &p.get("k0").unwrap().term;
    let Kind::Pair(_, b) = k0.kind() else {
        panic!()
    };
    assert!(matches!(b.kind(), Kind::Scale(s, _) if *s == Scalar::ZERO));
}

#[test]
fn program_errors() {
    let e = parse_program("pure def a : 1 = b").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::UndefinedName);
    let e = parse_program("pure def a : 1 = a").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::RecursiveDefinition);
    let e = parse_program("pure def a : 1 = *\npure def a : 1 = *").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::DuplicateDefinition);
    let e = parse_program("pure def a : 1 = * ++").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Syntax);
    assert_eq!(e.span.line, 1);
    let e = parse_program("mixed def a : 1 = -1 . *").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::Syntax);
    let e = parse_program("pure def a : 1 = *\nmixed def b : 1 = a").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::FragmentMismatch);
    assert_eq!(e.span.line, 2);
}
