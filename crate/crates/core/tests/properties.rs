//! Property tests over generated terms and random matrices.

use lcalc::cli::gen::{self, Generated};
use lcalc::denote::denote;
use lcalc::linalg::{bee, kron, tau_iso, Matrix, C64};
use lcalc::parser::{parse_prop, parse_term, pretty, pretty_prop};
use lcalc::rewrite::scramble::scramble;
use lcalc::rewrite::{algebraic_form, canonicalize, normalize};
use lcalc::syntax::{
    alpha_eq, alpha_eq_tol, canonical_cmp, free_vars, rename_apart, substitute, Fragment, Kind,
    Name, Prop, Term,
};
use lcalc::typecheck::check;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BTreeSet;

const TOL: f64 = 1e-9;

fn generated(seed: u64) -> Generated {
    gen::generate(&mut ChaCha8Rng::seed_from_u64(seed), 3)
}

fn den(t: &Term, p: &Prop) -> Matrix {
    let d = check(&[], t, p).unwrap_or_else(|e| panic!("{}: {}", pretty(t), e.message));
    denote(&d).unwrap().matrix
}

fn c64() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(c64(), r * c).prop_map(move |d| Matrix::from_vec(r, c, d))
}

fn dims() -> impl Strategy<Value = usize> {
    1..4usize
}

fn first_lambda(t: &Term) -> Option<Term> {
    if matches!(t.kind(), Kind::Lam(..)) {
        return Some(t.clone());
    }
    t.children().into_iter().find_map(first_lambda)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pretty_then_parse_is_identity(seed in any::<u64>()) {
        let g = generated(seed);
        let back = parse_term(&pretty(&g.term), g.fragment).unwrap();
        prop_assert!(alpha_eq(&back, &g.term), "{}", pretty(&g.term));
        let p = parse_prop(&pretty_prop(&g.prop), g.fragment).unwrap();
        prop_assert_eq!(p, g.prop);
    }

    #[test]
    fn canonical_order_is_a_total_order(a in any::<u64>(), b in any::<u64>()) {
        let (s, t) = (generated(a).term, generated(b).term);
        prop_assert_eq!(canonical_cmp(&s, &t), canonical_cmp(&t, &s).reverse());
        prop_assert_eq!(canonical_cmp(&s, &t) == Ordering::Equal, alpha_eq(&s, &t));
        prop_assert_eq!(canonical_cmp(&s, &s), Ordering::Equal);
    }

    #[test]
    fn renaming_binders_preserves_alpha_class(seed in any::<u64>()) {
        let t = generated(seed).term;
        let mut avoid = BTreeSet::new();
        lcalc::syntax::all_names(&t, &mut avoid);
        let r = rename_apart(&t, &avoid);
        prop_assert!(alpha_eq(&r, &t));
    }

    #[test]
    fn substituting_a_variable_renames_it(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (
            gen::random_type(&mut rng, Fragment::Pure, 1),
            gen::random_type(&mut rng, Fragment::Pure, 1),
        );
        let f = gen::generate_of_type(&mut rng, &Prop::lolli(Fragment::Pure, a, b), 3);
        let lam = f.as_ref().and_then(first_lambda);
        prop_assume!(lam.is_some());
        let t = lam.unwrap();
        let Kind::Lam(x, body) = t.kind() else { unreachable!() };
        let z: Name = "fresh_z".into();
        let zv = Term::var_named(body.frag(), z.clone());
        let s = substitute(body, x, &zv).unwrap();
        let mut want = free_vars(body);
        if want.remove(x) {
            want.insert(z.clone());
        }
        prop_assert_eq!(free_vars(&s), want);
        prop_assert!(alpha_eq(&Term::lam_named(z, s), &t));
    }

    #[test]
    fn substituting_an_absent_variable_is_identity(seed in any::<u64>()) {
        let t = generated(seed).term;
        let s = substitute(&t, "absent", &Term::star(t.frag())).unwrap();
        prop_assert!(Term::ptr_eq(&s, &t));
    }

    #[test]
    fn canonicalization_is_idempotent(seed in any::<u64>()) {
        let t = generated(seed).term;
        let c = canonicalize(&t);
        prop_assert!(alpha_eq(&canonicalize(&c), &c));
        // A fresh copy carries no cached flags and must land on the same form.
        let fresh = parse_term(&pretty(&c), t.frag()).unwrap();
        prop_assert!(alpha_eq(&canonicalize(&fresh), &c), "{}", pretty(&c));
    }

    #[test]
    fn scrambling_keeps_form_and_meaning(seed in any::<u64>(), moves in 1..8usize) {
        let g = generated(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let s = scramble(&g.term, moves, &mut rng);
        prop_assert!(den(&s, &g.prop).approx_eq(&den(&g.term, &g.prop), TOL));
        let (a, b) = (algebraic_form(&s), algebraic_form(&g.term));
        prop_assert!(alpha_eq_tol(&a.to_term(), &b.to_term(), TOL));
    }

    #[test]
    fn normal_forms_are_typed_values_with_the_same_meaning(seed in any::<u64>()) {
        let g = generated(seed);
        let n = normalize(&g.term, 100_000, false).unwrap();
        prop_assert!(n.value.is_value());
        prop_assert!(den(&n.value, &g.prop).approx_eq(&den(&g.term, &g.prop), TOL));
        // Values are fixed points up to canonical form.
        let again = normalize(&n.value, 100_000, false).unwrap();
        prop_assert_eq!(again.steps, 0);
        prop_assert!(alpha_eq(&again.value, &n.value));
    }

    #[test]
    fn kron_mixed_product(
        (a, b, c, d) in (dims(), dims(), dims(), dims()),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = |r, c, rng: &mut ChaCha8Rng| {
            use rand::Rng;
            Matrix::from_fn(r, c, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        };
        let (f, g) = (m(b, a, &mut rng), m(d, c, &mut rng));
        let (h, k) = (m(a, 2, &mut rng), m(c, 3, &mut rng));
        let lhs = kron(&f, &g).compose(&kron(&h, &k)).unwrap();
        let rhs = kron(&f.compose(&h).unwrap(), &g.compose(&k).unwrap());
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn kron_is_associative(f in matrix(2, 1), g in matrix(1, 3), h in matrix(2, 2)) {
        let l = kron(&kron(&f, &g), &h);
        let r = kron(&f, &kron(&g, &h));
        prop_assert!(l.approx_eq(&r, 1e-12));
    }

    #[test]
    fn compose_is_associative(f in matrix(2, 3), g in matrix(3, 4), h in matrix(4, 2)) {
        let l = f.compose(&g).unwrap().compose(&h).unwrap();
        let r = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert!(l.approx_eq(&r, 1e-12));
    }

    #[test]
    fn dagger_reverses_composition(f in matrix(2, 3), g in matrix(3, 2)) {
        let l = f.compose(&g).unwrap().dagger();
        let r = g.dagger().compose(&f.dagger()).unwrap();
        prop_assert!(l.approx_eq(&r, 1e-12));
    }

    #[test]
    fn bee_is_functorial(f in matrix(2, 3), g in matrix(3, 2)) {
        let l = bee(&f.compose(&g).unwrap());
        let r = bee(&f).compose(&bee(&g)).unwrap();
        prop_assert!(l.approx_eq(&r, 1e-12));
    }

    #[test]
    fn tau_is_invertible(h in dims(), k in dims()) {
        let t = tau_iso(h, k);
        prop_assert!(t.is_permutation());
        let id = t.transpose().compose(&t).unwrap();
        prop_assert!(id.approx_eq(&Matrix::identity(t.cols()), 0.0));
    }
}
