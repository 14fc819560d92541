//! Abstract syntax of both fragments: propositions, terms, scalars, and the
//! operations that only depend on term structure.

mod alpha;
mod prop;
mod scalar;
mod subst;
mod term;
mod value;

pub use alpha::{alpha_eq, alpha_eq_tol, canonical_cmp, pairwise_distinct};
pub use prop::{Imall, Prop};
pub use scalar::Scalar;
pub use subst::{
    all_names, free_vars, fresh_name, is_closed, rename_apart, substitute, substitute_many,
    FragmentMismatch,
};
pub(crate) use term::LeafShape;
pub use term::{Binders, Children, Kind, Name, Span, Tag, Term};
pub use value::{classify, is_base_value, is_neutral_value};

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fragment {
    Pure,
    Mixed,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Pure => "pure",
            Fragment::Mixed => "mixed",
        })
    }
}

/// Position of a term in the value grammar. `BaseValue` and `NeutralValue`
/// are the innermost matching class, so every base value is also neutral.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ValueClass {
    NotValue,
    BaseValue,
    NeutralValue,
    Value,
}
