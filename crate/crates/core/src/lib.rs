pub mod cli;
pub mod denote;
pub mod linalg;
pub mod parser;
pub mod qstdlib;
pub mod rewrite;
pub mod syntax;
pub mod typecheck;
