//! The `lc` command-line front end. [`run`] does all the work and returns
//! the exit code with the text destined for stdout and stderr, so the binary
//! is a thin wrapper and tests can drive commands in-process.

pub mod gen;

use crate::denote::denote;
use crate::parser::{
    parse_program, parse_program_with, pretty, Definition, ParseError, ParseErrorKind, Program,
};
use crate::rewrite::{
    context_corpus, equiv_in_contexts, normalize, trace_to_json_lines, EquivError, NormalizeError,
};
use crate::syntax::Fragment;
use crate::typecheck::check;
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::PathBuf;

/// The bundled standard prelude.
pub const PRELUDE: &str = include_str!("../../prelude.lc");

/// Environment variable naming a prelude file that replaces the bundled one.
pub const PRELUDE_ENV: &str = "LC_PRELUDE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FUEL: i32 = 3;
pub const EXIT_NOT_EQUIV: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "lc",
    version,
    about = "Linear-algebraic proof language toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type-check every definition of a file, or only `--def`.
    Check {
        file: PathBuf,
        #[arg(long)]
        def: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Normalize a definition and print its algebraic form.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        def: Option<String>,
        /// Print the reduction trace as JSON lines before the value.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print the denotation of a definition.
    Denote {
        file: PathBuf,
        #[arg(long)]
        def: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Compare two definitions over a corpus of elimination contexts.
    Equiv {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Number of contexts generated for the common type.
        #[arg(long, default_value_t = 20)]
        contexts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, value_parser = positive_f64)]
        tol: f64,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
        #[arg(long)]
        json: bool,
    },
    /// Emit random well-typed closed definitions.
    Gen {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 => Ok(v),
        Ok(_) => Err("must be positive".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn fail(code: i32, stdout: String, stderr: String) -> Output {
        Output {
            code,
            stdout,
            stderr,
        }
    }
}

/// Runs `lc` with `args`, which start with the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output::fail(code, String::new(), text)
            };
        }
    };
    match run_command(cli.command) {
        Ok(o) | Err(o) => o,
    }
}

type CmdResult = Result<Output, Output>;

fn run_command(cmd: Command) -> CmdResult {
    match cmd {
        Command::Check { file, def, json } => cmd_check(&load(&file)?, def.as_deref(), json),
        Command::Normalize {
            file,
            def,
            trace,
            fuel,
            json,
        } => cmd_normalize(&load(&file)?, def.as_deref(), trace, fuel as usize, json),
        Command::Denote { file, def, json } => cmd_denote(&load(&file)?, def.as_deref(), json),
        Command::Equiv {
            file,
            left,
            right,
            contexts,
            seed,
            tol,
            fuel,
            json,
        } => {
            let program = load(&file)?;
            cmd_equiv(
                &program,
                &left,
                &right,
                contexts,
                seed,
                tol,
                fuel as usize,
                json,
            )
        }
        Command::Gen {
            count,
            seed,
            max_depth,
        } => Ok(cmd_gen(count, seed, max_depth)),
    }
}

/// A parsed file together with the prelude it was resolved against.
pub struct Loaded {
    pub prelude: Program,
    pub program: Program,
}

impl Loaded {
    /// Looks a definition up in the file first, then in the prelude.
    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.program.get(name).or_else(|| self.prelude.get(name))
    }
}

fn parse_failure(e: &ParseError, origin: &str) -> Output {
    let json = serde_json::json!({ "error": "parse", "file": origin, "detail": e });
    Output::fail(EXIT_PARSE, format!("{json}\n"), format!("{origin}:{e}\n"))
}

fn prelude_program() -> Result<Program, Output> {
    let (text, origin) = match std::env::var_os(PRELUDE_ENV) {
        Some(p) => match std::fs::read_to_string(&p) {
            Ok(t) => (t, p.to_string_lossy().into_owned()),
            Err(e) => {
                let msg = format!("cannot read prelude {}: {e}\n", p.to_string_lossy());
                return Err(Output::fail(EXIT_PARSE, String::new(), msg));
            }
        },
        None => (PRELUDE.to_string(), "<prelude>".to_string()),
    };
    parse_program(&text).map_err(|e| parse_failure(&e, &origin))
}

/// Parses `text` with the prelude in scope. A file that redefines prelude
/// names (such as the prelude itself) is read standalone.
pub fn load_source(text: &str, origin: &str) -> Result<Loaded, Output> {
    let prelude = prelude_program()?;
    match parse_program_with(text, &prelude) {
        Ok(program) => Ok(Loaded { prelude, program }),
        Err(e) if e.kind == ParseErrorKind::DuplicateDefinition => match parse_program(text) {
            Ok(program) => Ok(Loaded {
                prelude: Program::default(),
                program,
            }),
            Err(_) => Err(parse_failure(&e, origin)),
        },
        Err(e) => Err(parse_failure(&e, origin)),
    }
}

fn load(path: &PathBuf) -> Result<Loaded, Output> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| {
        Output::fail(
            EXIT_PARSE,
            String::new(),
            format!("cannot read {origin}: {e}\n"),
        )
    })?;
    load_source(&text, &origin)
}

fn select<'a>(loaded: &'a Loaded, name: Option<&str>) -> Result<&'a Definition, Output> {
    match name {
        Some(n) => loaded.get(n).ok_or_else(|| {
            let json = serde_json::json!({ "error": "undefined", "name": n });
            Output::fail(
                EXIT_PARSE,
                format!("{json}\n"),
                format!("no definition named `{n}`\n"),
            )
        }),
        None => loaded.program.definitions.last().ok_or_else(|| {
            Output::fail(
                EXIT_PARSE,
                String::new(),
                "the file has no definitions\n".into(),
            )
        }),
    }
}

fn type_failure(d: &Definition, e: &crate::typecheck::TypeError) -> Output {
    let detail: serde_json::Value =
        serde_json::from_str(&e.to_json()).unwrap_or(serde_json::Value::Null);
    let json = serde_json::json!({ "error": "type", "definition": d.name, "detail": detail });
    Output::fail(
        EXIT_TYPE,
        format!("{json}\n"),
        format!("{}: {}\n", d.name, e.message),
    )
}

fn typecheck_def(d: &Definition) -> Result<crate::typecheck::Derivation, Output> {
    check(&[], &d.term, &d.prop).map_err(|e| type_failure(d, &e))
}

pub fn cmd_check(loaded: &Loaded, name: Option<&str>, json: bool) -> CmdResult {
    let defs: Vec<&Definition> = match name {
        Some(_) => vec![select(loaded, name)?],
        None => loaded.program.definitions.iter().collect(),
    };
    let mut out = String::new();
    for d in defs {
        typecheck_def(d)?;
        if json {
            let line = serde_json::json!({
                "definition": d.name,
                "fragment": d.fragment,
                "type": d.prop.to_string(),
            });
            writeln!(out, "{line}").unwrap();
        } else {
            writeln!(out, "{} : {}", d.name, d.prop).unwrap();
        }
    }
    Ok(Output {
        code: EXIT_OK,
        stdout: out,
        stderr: String::new(),
    })
}

pub fn cmd_normalize(
    loaded: &Loaded,
    name: Option<&str>,
    trace: bool,
    fuel: usize,
    json: bool,
) -> CmdResult {
    let d = select(loaded, name)?;
    typecheck_def(d)?;
    let n = normalize(&d.term, fuel, trace).map_err(|e| {
        let kind = match e {
            NormalizeError::FuelExhausted { .. } => "fuel_exhausted",
            NormalizeError::Stuck { .. } => "stuck",
        };
        let json =
            serde_json::json!({ "error": kind, "definition": d.name, "message": e.to_string() });
        Output::fail(EXIT_FUEL, format!("{json}\n"), format!("{}: {e}\n", d.name))
    })?;
    let mut out = String::new();
    if trace {
        out.push_str(&trace_to_json_lines(&n.trace));
    }
    let value = pretty(&n.value);
    if json {
        let line = serde_json::json!({ "definition": d.name, "value": value, "steps": n.steps });
        writeln!(out, "{line}").unwrap();
    } else {
        writeln!(out, "{value}").unwrap();
    }
    Ok(Output {
        code: EXIT_OK,
        stdout: out,
        stderr: String::new(),
    })
}

pub fn cmd_denote(loaded: &Loaded, name: Option<&str>, json: bool) -> CmdResult {
    let d = select(loaded, name)?;
    let deriv = typecheck_def(d)?;
    let den = denote(&deriv)
        .map_err(|e| Output::fail(EXIT_TYPE, String::new(), format!("{}: {e}\n", d.name)))?;
    let mut out = String::new();
    if json {
        writeln!(out, "{}", serde_json::to_string(&den.to_json()).unwrap()).unwrap();
    } else {
        let m = &den.matrix;
        writeln!(
            out,
            "{} x {} ({:?} -> {:?})",
            m.rows(),
            m.cols(),
            den.source.category,
            den.target.category
        )
        .unwrap();
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|j| fmt_c64(m[(i, j)])).collect();
            writeln!(out, "[{}]", row.join(", ")).unwrap();
        }
    }
    Ok(Output {
        code: EXIT_OK,
        stdout: out,
        stderr: String::new(),
    })
}

fn fmt_c64(c: num_complex::Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    let (re, im) = (clean(c.re), clean(c.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else {
        format!("{re}{}{}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_equiv(
    loaded: &Loaded,
    left: &str,
    right: &str,
    contexts: usize,
    seed: u64,
    tol: f64,
    fuel: usize,
    json: bool,
) -> CmdResult {
    let l = select(loaded, Some(left))?;
    let r = select(loaded, Some(right))?;
    typecheck_def(l)?;
    typecheck_def(r)?;
    if l.prop != r.prop {
        let msg = format!(
            "`{left}` has type {} but `{right}` has type {}",
            l.prop, r.prop
        );
        let json = serde_json::json!({ "error": "type", "message": msg });
        return Err(Output::fail(
            EXIT_TYPE,
            format!("{json}\n"),
            format!("{msg}\n"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus = context_corpus(&l.prop, contexts, &mut rng);
    let equal = equiv_in_contexts(&l.term, &r.term, &corpus, fuel, tol).map_err(|e| {
        let code = match e {
            EquivError::Context { .. } => EXIT_TYPE,
            EquivError::Normalize(_) => EXIT_FUEL,
        };
        Output::fail(code, String::new(), format!("{e}\n"))
    })?;
    let verdict = if equal { "equivalent" } else { "distinguished" };
    let stdout = if json {
        let line = serde_json::json!({ "left": left, "right": right, "contexts": corpus.len(), "result": verdict });
        format!("{line}\n")
    } else {
        format!("{verdict} ({} contexts)\n", corpus.len())
    };
    let code = if equal { EXIT_OK } else { EXIT_NOT_EQUIV };
    Ok(Output {
        code,
        stdout,
        stderr: String::new(),
    })
}

/// `count` definitions `g0, g1, …`, one per line, determined by `seed`.
pub fn cmd_gen(count: usize, seed: u64, max_depth: usize) -> Output {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for i in 0..count {
        let g = gen::generate(&mut rng, max_depth);
        let frag = match g.fragment {
            Fragment::Pure => "pure",
            Fragment::Mixed => "mixed",
        };
        writeln!(out, "{frag} def g{i} : {} = {}", g.prop, pretty(&g.term)).unwrap();
    }
    Output {
        code: EXIT_OK,
        stdout: out,
        stderr: String::new(),
    }
}
