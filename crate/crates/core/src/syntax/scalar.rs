use crate::linalg::C64;
use std::fmt;

/// A coefficient. Pure terms use arbitrary complex numbers, mixed terms use
/// non-negative reals.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Scalar(pub C64);

impl Scalar {
    pub const ZERO: Scalar = Scalar(C64::new(0.0, 0.0));
    pub const ONE: Scalar = Scalar(C64::new(1.0, 0.0));

    pub fn new(re: f64, im: f64) -> Self {
        Scalar(C64::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        Scalar(C64::new(re, 0.0))
    }

    /// A mixed-fragment scalar; rejects negative, complex or non-finite values.
    pub fn mixed(re: f64, im: f64) -> Result<Self, String> {
        let s = Scalar::new(re, im);
        if s.is_valid_mixed() {
            Ok(s)
        } else {
            Err(format!(
                "mixed scalars must be non-negative reals, found {s}"
            ))
        }
    }

    pub fn is_valid_mixed(&self) -> bool {
        self.0.im == 0.0 && self.0.re >= 0.0 && self.0.re.is_finite()
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn conj(&self) -> Scalar {
        Scalar(self.0.conj())
    }

    /// |a|².
    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn abs(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    pub fn is_one(&self) -> bool {
        self.0.re == 1.0 && self.0.im == 0.0
    }

    /// Snap values within `eps` of 0 or 1 onto those points exactly.
    pub fn snapped(self, eps: f64) -> Scalar {
        if self.0.norm() < eps {
            Scalar::ZERO
        } else if (self.0 - C64::new(1.0, 0.0)).norm() < eps {
            Scalar::ONE
        } else {
            self
        }
    }

    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        (self.0 - other.0).norm() <= tol
    }

    /// Total order by `(re, im)`.
    pub fn total_cmp(&self, other: &Scalar) -> std::cmp::Ordering {
        // `+ 0.0` folds -0.0 onto 0.0
        (self.0.re + 0.0)
            .total_cmp(&(other.0.re + 0.0))
            .then((self.0.im + 0.0).total_cmp(&(other.0.im + 0.0)))
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl From<C64> for Scalar {
    fn from(c: C64) -> Self {
        Scalar(c)
    }
}

fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Prints in the concrete scalar syntax: `0.5`, `-1`, `2i`, `(0.5-0.25i)`.
/// The shortest round-trip float representation is used, so parsing the
/// output recovers the exact stored value.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.0.re, self.0.im);
        if im == 0.0 {
            write!(f, "{}", fmt_real(re))
        } else if re == 0.0 {
            if im < 0.0 {
                write!(f, "-{}i", fmt_real(-im))
            } else {
                write!(f, "{}i", fmt_real(im))
            }
        } else if im < 0.0 {
            write!(f, "({}-{}i)", fmt_real(re), fmt_real(-im))
        } else {
            write!(f, "({}+{}i)", fmt_real(re), fmt_real(im))
        }
    }
}
