use crate::syntax::{Kind, Prop, Term};

/// Printing levels, loosest first.
const SUM: u8 = 0;
const SCALE: u8 = 1;
const TENSOR: u8 = 2;
const APP: u8 = 3;
const ATOM: u8 = 4;

pub fn pretty(t: &Term) -> String {
    let mut out = String::new();
    go(t, SUM, true, &mut out);
    out
}

pub fn pretty_prop(p: &Prop) -> String {
    p.to_string()
}

fn level(t: &Term) -> u8 {
    match t.kind() {
        Kind::Sum(..) => SUM,
        Kind::Scale(..) => SCALE,
        Kind::Tensor(..) => TENSOR,
        Kind::App(..) => APP,
        _ => ATOM,
    }
}

/// Lambdas and `let` extend as far right as possible.
fn open_ended(t: &Term) -> bool {
    matches!(
        t.kind(),
        Kind::Lam(..) | Kind::ElimOne(..) | Kind::ElimTensor(..)
    )
}

/// `tail` is set when nothing follows `t` up to the nearest enclosing
/// delimiter.
fn go(t: &Term, ctx: u8, tail: bool, out: &mut String) {
    let parens = level(t) < ctx || (open_ended(t) && !tail);
    if parens {
        out.push('(');
    }
    let tail = tail || parens;
    match t.kind() {
        Kind::Var(x) => out.push_str(x),
        Kind::Star => out.push('*'),
        Kind::Top => out.push_str("<>"),
        Kind::Sum(a, b) => {
            go(a, SUM, false, out);
            out.push_str(" ++ ");
            go(b, SCALE, tail, out);
        }
        Kind::Scale(s, m) => {
            out.push_str(&s.to_string());
            out.push_str(" . ");
            go(m, SCALE, tail, out);
        }
        Kind::Tensor(a, b) => {
            go(a, APP, false, out);
            out.push_str(" @ ");
            go(b, TENSOR, tail, out);
        }
        Kind::App(a, b) => {
            go(a, APP, false, out);
            out.push(' ');
            go(b, ATOM, tail, out);
        }
        Kind::Lam(x, b) => {
            out.push('\\');
            out.push_str(x);
            out.push_str(". ");
            go(b, SUM, true, out);
        }
        Kind::ElimOne(m, n) => {
            out.push_str("let * = ");
            go(m, SUM, true, out);
            out.push_str(" in ");
            go(n, SUM, true, out);
        }
        Kind::ElimTensor(m, x, y, n) => {
            out.push_str(&format!("let {x} @ {y} = "));
            go(m, SUM, true, out);
            out.push_str(" in ");
            go(n, SUM, true, out);
        }
        Kind::Pair(a, b) => {
            out.push('<');
            go(a, SUM, true, out);
            out.push_str(", ");
            go(b, SUM, true, out);
            out.push('>');
        }
        Kind::ElimWith(i, m, x, n) => {
            out.push_str(&format!("proj{i}("));
            go(m, SUM, true, out);
            out.push_str(&format!(", {x}. "));
            go(n, SUM, true, out);
            out.push(')');
        }
        Kind::ElimPlus(m, x, n, y, o) => {
            out.push_str("case ");
            go(m, SUM, true, out);
            out.push_str(&format!(" of {{ inl {x} -> "));
            go(n, SUM, true, out);
            out.push_str(&format!(" ; inr {y} -> "));
            go(o, SUM, true, out);
            out.push_str(" }");
        }
        Kind::Inl(m) => wrap("inl", m, out),
        Kind::Inr(m) => wrap("inr", m, out),
        Kind::Abort(m) => wrap("abort", m, out),
        Kind::Bang(m) => wrap("B", m, out),
        Kind::Tau(m) => wrap("tau", m, out),
    }
    if parens {
        out.push(')');
    }
}

fn wrap(head: &str, m: &Term, out: &mut String) {
    out.push_str(head);
    out.push('(');
    go(m, SUM, true, out);
    out.push(')');
}
