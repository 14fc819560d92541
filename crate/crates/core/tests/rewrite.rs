use lcalc::parser::parse_term;
use lcalc::rewrite::{
    algebraic_form, canonicalize, context_corpus, equiv_in_contexts, normalize, step_arrow,
    step_hook, ElimContext, StepKind, HOLE,
};
use lcalc::syntax::{alpha_eq, alpha_eq_tol, Fragment, Prop, Scalar, Term};
use lcalc::typecheck::infer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pure(s: &str) -> Term {
    parse_term(s, Fragment::Pure).unwrap()
}

fn mixed(s: &str) -> Term {
    parse_term(s, Fragment::Mixed).unwrap()
}

fn nf(t: &Term) -> Term {
    normalize(t, 100_000, false).unwrap().value
}

#[test]
fn single_rules() {
    let cases: &[(Fragment, &str, &str, u8)] = &[
        (Fragment::Pure, "let * = 2 . * in <*, *>", "2 . <*, *>", 1),
        (Fragment::Pure, "(\\x. x) *", "*", 2),
        (Fragment::Pure, "proj2(<*, 0 . *>, x. x)", "0 . *", 4),
        (
            Fragment::Mixed,
            "case inl(*) of { inl x -> x ; inr y -> 2 . y }",
            "*",
            5,
        ),
        (
            Fragment::Pure,
            "let x @ y = <*, *> @ * in let * = y in x",
            "let * = * in <*, *>",
            7,
        ),
        (Fragment::Pure, "2 . <>", "<>", 8),
        (
            Fragment::Pure,
            "2 . (\\x. x) ++ (\\y. 3 . y)",
            "\\x. 2 . x ++ 3 . x",
            9,
        ),
        (
            Fragment::Pure,
            "2 . <*, *> ++ <0 . *, *>",
            "<2 . * ++ 0 . *, 2 . * ++ *>",
            10,
        ),
        (Fragment::Mixed, "tau(B(*) @ B(*))", "B(* @ *)", 16),
        (Fragment::Mixed, "B(0.5 . *)", "0.25 . B(*)", 18),
        (Fragment::Mixed, "B(\\x. x) B(*)", "B((\\x. x) *)", 19),
    ];
    for (f, src, expect, rule) in cases {
        let t = parse_term(src, *f).unwrap();
        let s = step_arrow(&t).unwrap_or_else(|| panic!("no step for {src}"));
        assert_eq!(s.rule, *rule, "{src}");
        let e = parse_term(expect, *f).unwrap();
        assert!(alpha_eq(&s.term, &e), "{src} gave {}", s.term);
    }
}

#[test]
fn sum_distribution_rules() {
    let t = mixed("case 2 . inl(*) ++ inr(*) of { inl x -> x ; inr y -> y }");
    let s = step_arrow(&t).unwrap();
    assert_eq!(s.rule, 11);
    let t = mixed("inl(0.5 . B(<*, 0 . *>) ++ B(<0 . *, *>))");
    assert_eq!(step_arrow(&t).unwrap().rule, 13);
    let t = mixed("inl(* ++ *)");
    assert!(step_arrow(&t).is_none(), "atoms must be distinct");
    let t = mixed("tau(0.5 . (B(*) @ B(*)))");
    assert_eq!(step_arrow(&t).unwrap().rule, 17);
}

#[test]
fn redex_positions_follow_k() {
    let t = pure("<(\\x. x) *, (\\y. y) *>");
    let s = step_arrow(&t).unwrap();
    assert_eq!(s.position, vec![0]);
    // The right component is only reduced once the left one is a value.
    let t = pure("<*, (\\y. y) *>");
    assert_eq!(step_arrow(&t).unwrap().position, vec![1]);
    // No reduction under a binder.
    assert!(step_arrow(&pure("\\x. (\\y. y) x")).is_none());
}

#[test]
fn hook_rewrites_before_case() {
    let t = mixed("case inl(*) ++ inl(*) of { inl x -> x ; inr y -> y }");
    let steps = step_hook(&t).unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0].kind, StepKind::Algebraic);
    assert!(alpha_eq(
        &steps[0].after,
        &mixed("case 2 . inl(*) of { inl x -> x ; inr y -> y }")
    ));
    assert_eq!(steps[1].kind, StepKind::Arrow(11));
    assert!(alpha_eq(&nf(&t), &mixed("2 . *")));
}

#[test]
fn normalize_examples() {
    let v = nf(&mixed("inl(0.5 . *) ++ inl(0.25 . *)"));
    assert!(alpha_eq(&v, &mixed("0.75 . inl(*)")), "{v}");
    let v = nf(&mixed("tau(B(*) @ B(*))"));
    assert!(alpha_eq(&v, &mixed("B(* @ *)")));
    let x = "(\\x. proj1(x, a. let * = a in <0 . *, *>) ++ proj2(x, b. let * = b in <*, 0 . *>))";
    let v = nf(&pure(&format!("{x} <*, 0 . *>")));
    assert!(alpha_eq_tol(&v, &pure("<0 . *, *>"), 1e-12), "{v}");
    let meas = "(B(\\x. proj1(x, a. let * = a in <*, 0 . *>)) ++ B(\\x. proj2(x, b. let * = b in <0 . *, *>))) \
                B(<0.7071067811865476 . *, 0.7071067811865476 . *>)";
    let v = nf(&mixed(meas));
    let expect = canonicalize(&mixed(
        "B(<0.7071067811865476 . *, 0 . *>) ++ B(<0 . *, 0.7071067811865476 . *>)",
    ));
    assert!(alpha_eq_tol(&v, &expect, 1e-9), "{v}");
}

#[test]
fn algebraic_forms() {
    let f = algebraic_form(&pure("2 . <*, *> ++ 3 . <*, *>"));
    assert_eq!(f.summands.len(), 1);
    assert_eq!(f.summands[0].0, Scalar::real(5.0));
    let t = pure("(<*, *> ++ <0 . *, *>) @ *");
    let c = canonicalize(&t);
    let d = canonicalize(&pure("<0 . *, *> @ * ++ <*, *> @ *"));
    assert!(alpha_eq(&c, &d));
    let c = canonicalize(&pure("<*, *> ++ 0 . <0 . *, *>"));
    assert!(alpha_eq(&c, &pure("<*, *>")));
    let z = canonicalize(&pure("0 . <*, *> ++ 0 . <0 . *, *>"));
    assert!(algebraic_form(&z).is_all_zero());
    assert!(alpha_eq(&canonicalize(&c), &c));
}

#[test]
fn values_do_not_step() {
    for s in ["<*, 0 . *>", "2 . * ++ 3 . (* @ *)", "\\x. (\\y. y) x"] {
        let t = pure(s);
        assert!(t.is_value(), "{s}");
        assert!(step_hook(&t).is_none());
    }
    assert!(step_hook(&mixed("B(<*, 0 . *>)")).is_none());
}

#[test]
fn contextual_equivalence() {
    let lhs = pure("(\\x. x) (2 . * ++ 3 . *)");
    let rhs = pure("2 . ((\\x. x) *) ++ 3 . ((\\x. x) *)");
    let id = ElimContext {
        hole_type: Prop::one_pure(),
        term: Term::var(Fragment::Pure, HOLE),
        result: Prop::one_pure(),
    };
    assert!(equiv_in_contexts(&lhs, &rhs, std::slice::from_ref(&id), 1000, 1e-9).unwrap());
    assert!(!equiv_in_contexts(&pure("*"), &pure("2 . *"), &[id], 1000, 1e-9).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let types = [
        "qubit",
        "qubit -o qubit",
        "qubit * (1 & top)",
        "(qubit -o 1) -o 1",
    ];
    for s in types {
        let ty = lcalc::parser::parse_prop(s, Fragment::Pure).unwrap();
        let corpus = context_corpus(&ty, 20, &mut rng);
        assert!(corpus.len() >= 5, "{s}: only {}", corpus.len());
        for c in &corpus {
            c.typecheck()
                .unwrap_or_else(|e| panic!("{s}: {} {e:?}", c.term));
        }
    }
    for s in [
        "B(qubit)",
        "1 + B(1)",
        "B(qubit) * 1",
        "B(qubit -o qubit)",
        "B(1) * B(1)",
    ] {
        let ty = lcalc::parser::parse_prop(s, Fragment::Mixed).unwrap();
        let corpus = context_corpus(&ty, 20, &mut rng);
        assert!(corpus.len() >= 5, "{s}: only {}", corpus.len());
        for c in &corpus {
            c.typecheck()
                .unwrap_or_else(|e| panic!("{s}: {} {e:?}", c.term));
        }
    }
}

#[test]
fn preservation_on_examples() {
    let t = mixed("case inl(*) ++ inl(*) of { inl x -> x ; inr y -> y }");
    let (ty, _) = infer(&[], &t).unwrap();
    let n = normalize(&t, 100, true).unwrap();
    for e in &n.trace {
        let (ty2, _) = infer(&[], &e.after).unwrap();
        assert_eq!(ty, ty2);
    }
}
