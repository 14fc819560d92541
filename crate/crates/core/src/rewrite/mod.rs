//! Cut elimination: algebraic forms, the reduction `→`, the composite `↪`
//! and contextual equivalence.

mod algebraic;
mod arrow;
mod equiv;
mod hook;
pub mod scramble;

pub use algebraic::{algebraic_form, canonicalize, canonicalize_shuffled, AlgebraicForm, SNAP_EPS};
pub use arrow::{root_redex, step_arrow, ArrowStep};
pub use equiv::{context_corpus, equiv_in_contexts, sample_closed, ElimContext, EquivError, HOLE};
pub use hook::{
    normalize, step_hook, trace_to_json_lines, NormalizeError, Normalized, StepKind, Trace,
    TraceEntry,
};
