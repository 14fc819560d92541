use lcalc::parser::{parse_prop, parse_term};
use lcalc::syntax::{Fragment, Name, Prop};
use lcalc::typecheck::{check, infer, validate, Rule};

fn prop(s: &str, f: Fragment) -> Prop {
    parse_prop(s, f).unwrap()
}

fn ok(ctx: &[(&str, &str)], term: &str, ty: &str, f: Fragment) {
    let ctx: Vec<(Name, Prop)> = ctx.iter().map(|(x, p)| ((*x).into(), prop(p, f))).collect();
    let t = parse_term(term, f).unwrap();
    let d = check(&ctx, &t, &prop(ty, f)).unwrap_or_else(|e| panic!("{term}: {e}"));
    validate(&d).unwrap_or_else(|e| panic!("{term}: {e}"));
}

fn fails(ctx: &[(&str, &str)], term: &str, ty: &str, f: Fragment) -> String {
    let ctx: Vec<(Name, Prop)> = ctx.iter().map(|(x, p)| ((*x).into(), prop(p, f))).collect();
    let t = parse_term(term, f).unwrap();
    check(&ctx, &t, &prop(ty, f)).unwrap_err().message
}

const P: Fragment = Fragment::Pure;
const M: Fragment = Fragment::Mixed;

#[test]
fn unit_intro_is_a_leaf() {
    let t = parse_term("*", P).unwrap();
    let d = check(&[], &t, &Prop::one_pure()).unwrap();
    assert_eq!(d.rule, Rule::OneI);
    assert!(d.premises.is_empty());
}

#[test]
fn accepts_well_typed_terms() {
    ok(&[], "\\x. x", "qubit -o qubit", P);
    ok(&[("x", "1"), ("y", "1")], "y @ x", "1 * 1", P);
    ok(&[("z", "1 * 1")], "let x @ y = z in let * = x in y", "1", P);
    ok(&[("x", "top & 1")], "proj2(x, y. y)", "1", P);
    ok(&[("x", "1")], "<x, x ++ 2 . x>", "1 & 1", P);
    ok(&[("x", "1"), ("y", "1")], "<>", "top", P);
    ok(
        &[("x", "1"), ("y", "1")],
        "<let * = x in y, <>>",
        "1 & top",
        P,
    );
    ok(
        &[],
        "\\f. \\x. f x",
        "(qubit -o qubit) -o qubit -o qubit",
        P,
    );
    ok(&[("u", "0"), ("v", "1")], "abort(u)", "1 + 1", M);
    ok(
        &[("z", "1 + 1")],
        "case z of { inl x -> x ; inr y -> y }",
        "1",
        M,
    );
    ok(&[], "B(<*, 0 . *>)", "B(qubit)", M);
    ok(&[], "B(\\x. x) B(<*, *>)", "B(qubit)", M);
    ok(&[], "tau(B(*) @ B(*))", "B(1 * 1)", M);
    ok(&[], "(\\f. f B(*)) B(\\x. x)", "B(1)", M);
    ok(
        &[("w", "1"), ("z", "1 + 1")],
        "case z of { inl x -> let * = x in w ; inr y -> let * = w in y }",
        "1",
        M,
    );
}

#[test]
fn exchange_is_recorded() {
    let ctx: Vec<(Name, Prop)> = vec![
        ("x".into(), Prop::one_pure()),
        ("y".into(), Prop::one_pure()),
    ];
    let t = parse_term("y @ x", P).unwrap();
    let ty = prop("1 * 1", P);
    let d = check(&ctx, &t, &ty).unwrap();
    assert!(matches!(d.rule, Rule::Ex(ref p) if p == &vec![1, 0]));
    validate(&d).unwrap();
}

#[test]
fn linearity_errors() {
    assert!(fails(&[("x", "1")], "x @ x", "1 * 1", P).contains("used twice"));
    assert!(fails(&[("x", "1")], "*", "1", P).contains("never used"));
    assert!(fails(&[], "\\x. *", "1 -o 1", P).contains("never used"));
    assert!(fails(&[("x", "1")], "<x, *>", "1 & 1", P).contains("additive"));
    assert!(fails(&[("x", "1")], "B(x)", "B(qubit)", M).contains("closed"));
    assert!(fails(&[], "tau(*)", "B(1 * 1)", M).contains("B(P) * B(Q)"));
    assert!(fails(&[], "B(*) B(*)", "B(1)", M).contains("B(P -o Q)"));
}

#[test]
fn inference() {
    let t = parse_term("B(<*, 0 . *>)", M).unwrap();
    assert_eq!(infer(&[], &t).unwrap().0, prop("B(qubit)", M));
    let t = parse_term("tau(B(*) @ B(*))", M).unwrap();
    assert_eq!(infer(&[], &t).unwrap().0, prop("B(1 * 1)", M));
    let t = parse_term("inl(*)", M).unwrap();
    assert!(infer(&[], &t)
        .unwrap_err()
        .message
        .contains("cannot synthesize"));
}
