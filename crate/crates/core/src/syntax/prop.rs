use super::Fragment;
use std::fmt;

/// Formulas of both fragments. Connectives shared by the two fragments carry
/// their fragment explicitly; `With` and `Top` are pure-only, `Zero`, `Plus`
/// and `Bang` (the 𝓑 modality) are mixed-only.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Prop {
    Top,
    One(Fragment),
    Lolli(Fragment, Box<Prop>, Box<Prop>),
    With(Box<Prop>, Box<Prop>),
    Tensor(Fragment, Box<Prop>, Box<Prop>),
    Zero,
    Plus(Box<Prop>, Box<Prop>),
    Bang(Box<Prop>),
}

/// The erasure of a formula to plain IMALL (𝓑 and fragment tags removed).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Imall {
    Top,
    One,
    Zero,
    Lolli(Box<Imall>, Box<Imall>),
    With(Box<Imall>, Box<Imall>),
    Plus(Box<Imall>, Box<Imall>),
    Tensor(Box<Imall>, Box<Imall>),
}

impl Prop {
    pub fn one_pure() -> Prop {
        Prop::One(Fragment::Pure)
    }

    pub fn one_mixed() -> Prop {
        Prop::One(Fragment::Mixed)
    }

    /// `qubit`, i.e. `𝟙 & 𝟙`.
    pub fn qubit() -> Prop {
        Prop::With(Box::new(Prop::one_pure()), Box::new(Prop::one_pure()))
    }

    /// `qubit ⊗ (qubit ⊗ (… ⊗ qubit))` with `n ≥ 1` factors.
    pub fn qubits(n: usize) -> Prop {
        assert!(n >= 1);
        let mut p = Prop::qubit();
        for _ in 1..n {
            p = Prop::tensor(Fragment::Pure, Prop::qubit(), p);
        }
        p
    }

    pub fn lolli(f: Fragment, a: Prop, b: Prop) -> Prop {
        Prop::Lolli(f, Box::new(a), Box::new(b))
    }

    pub fn tensor(f: Fragment, a: Prop, b: Prop) -> Prop {
        Prop::Tensor(f, Box::new(a), Box::new(b))
    }

    pub fn with(a: Prop, b: Prop) -> Prop {
        Prop::With(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Prop, b: Prop) -> Prop {
        Prop::Plus(Box::new(a), Box::new(b))
    }

    pub fn bang(p: Prop) -> Prop {
        Prop::Bang(Box::new(p))
    }

    pub fn fragment(&self) -> Fragment {
        match self {
            Prop::Top | Prop::With(..) => Fragment::Pure,
            Prop::Zero | Prop::Plus(..) | Prop::Bang(_) => Fragment::Mixed,
            Prop::One(f) | Prop::Lolli(f, ..) | Prop::Tensor(f, ..) => *f,
        }
    }

    /// Checks that every node agrees with its children's fragments.
    pub fn well_formed(&self) -> Result<(), String> {
        let expect = |p: &Prop, f: Fragment| -> Result<(), String> {
            p.well_formed()?;
            if p.fragment() != f {
                Err(format!("{p} is not a {f} proposition"))
            } else {
                Ok(())
            }
        };
        match self {
            Prop::Top | Prop::One(_) | Prop::Zero => Ok(()),
            Prop::Lolli(f, a, b) | Prop::Tensor(f, a, b) => {
                expect(a, *f)?;
                expect(b, *f)
            }
            Prop::With(a, b) => {
                expect(a, Fragment::Pure)?;
                expect(b, Fragment::Pure)
            }
            Prop::Plus(a, b) => {
                expect(a, Fragment::Mixed)?;
                expect(b, Fragment::Mixed)
            }
            Prop::Bang(p) => expect(p, Fragment::Pure),
        }
    }

    pub fn erase(&self) -> Imall {
        let bx = |p: &Prop| Box::new(p.erase());
        match self {
            Prop::Top => Imall::Top,
            Prop::One(_) => Imall::One,
            Prop::Zero => Imall::Zero,
            Prop::Lolli(_, a, b) => Imall::Lolli(bx(a), bx(b)),
            Prop::With(a, b) => Imall::With(bx(a), bx(b)),
            Prop::Plus(a, b) => Imall::Plus(bx(a), bx(b)),
            Prop::Tensor(_, a, b) => Imall::Tensor(bx(a), bx(b)),
            Prop::Bang(p) => p.erase(),
        }
    }

    pub fn is_qubit(&self) -> bool {
        matches!(self, Prop::With(a, b)
            if **a == Prop::One(Fragment::Pure) && **b == Prop::One(Fragment::Pure))
    }

    /// Binding strength used by the printer; larger binds tighter.
    pub(crate) fn precedence(&self) -> u8 {
        match self {
            Prop::Lolli(..) => 1,
            Prop::Plus(..) => 2,
            Prop::With(..) if !self.is_qubit() => 3,
            Prop::Tensor(..) => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Binary connectives are right-associative.
        let binop = |f: &mut fmt::Formatter<'_>, a: &Prop, op: &str, b: &Prop, prec: u8| {
            if a.precedence() <= prec {
                write!(f, "({a})")?;
            } else {
                write!(f, "{a}")?;
            }
            write!(f, " {op} ")?;
            if b.precedence() < prec {
                write!(f, "({b})")
            } else {
                write!(f, "{b}")
            }
        };
        match self {
            _ if self.is_qubit() => write!(f, "qubit"),
            Prop::Top => write!(f, "top"),
            Prop::One(_) => write!(f, "1"),
            Prop::Zero => write!(f, "0"),
            Prop::Lolli(_, a, b) => binop(f, a, "-o", b, 1),
            Prop::Plus(a, b) => binop(f, a, "+", b, 2),
            Prop::With(a, b) => binop(f, a, "&", b, 3),
            Prop::Tensor(_, a, b) => binop(f, a, "*", b, 4),
            Prop::Bang(p) => write!(f, "B({p})"),
        }
    }
}
