//! Command-line front end: argument grammar, dispatch and output.
//!
//! Exit codes: 0 success, 1 verification failure (or a computation error),
//! 2 usage error. Every JSON document carries `"schema": 1`.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use shqa::cartan::{CartanData, Node};
use shqa::identities::{check_identity, IdentityName};
use shqa::lweight::{build_named_weight, LWeight, NamedWeight, Spec};
use shqa::modrel::{realize, rmatrix_check, verify_definition_relations, RealizationName, RealizeParams, Relation, Window};
use shqa::qchar::{qc_inflation, qc_kr_sl2, qc_neg_prefund_rank1, qc_neg_prefund_sl3_pair, TruncatedQChar};
use shqa::suite::{run_suite, Topic};
use shqa::Error;

pub const SCHEMA: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable read for the worker-thread count.
pub const THREADS_ENV: &str = "SHQA_THREADS";

#[derive(Parser, Debug)]
#[command(name = "shqa", version, about = "Exact l-weight and q-character calculus for shifted quantum affine algebras")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads (0 = one per core).
    #[arg(long, env = THREADS_ENV, default_value_t = 0, global = true)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cartan matrix, symmetrizers, dual Coxeter and lacing numbers.
    Dynkin {
        /// Type and rank, e.g. A2, B3, E8.
        diagram: String,
    },
    /// Canonical form of a named l-weight or of an expression like
    /// `Psi[1,0]^-1 * Y[2,1] * t[1]^2`.
    Lweight {
        /// A name (psi_star, psi_tilde, qq_psi_p, qqstar_psi_p1,
        /// qqstar_psi_p2, newT_psi_p) or an expression.
        weight: String,
        #[command(flatten)]
        at: Location,
    },
    /// Depth-truncated q-character of a closed-form family.
    Qchar {
        /// kr, neg-prefund, sl3-pair, psi-tilde or psi-star.
        family: QcharFamily,
        #[command(flatten)]
        at: Location,
        /// Second node of the sl3 pair (defaults to a neighbour of --node).
        #[arg(long)]
        node2: Option<Node>,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// KR length.
        #[arg(long, default_value_t = 1)]
        length: u32,
    },
    /// Explicit module realizations.
    Module {
        #[command(subcommand)]
        action: ModuleAction,
    },
    /// Checks a Grothendieck-ring identity exactly.
    Identity {
        /// wronskian, qq-tilde, qq-star, baxter-qt, t-system or inflated-t-system.
        name: String,
        #[command(flatten)]
        at: Location,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// KR length for the T-systems.
        #[arg(long)]
        length: Option<u32>,
    },
    /// R-matrix between the A2 modules L(Psi~[1,a]) and L(Psi~[2,1]).
    Rmatrix {
        /// Spectral exponent k of a = q^k.
        #[arg(long = "a", allow_hyphen_values = true)]
        a: Spec,
        #[arg(long, default_value_t = 4)]
        basis: u32,
        #[arg(long, default_value_t = 2)]
        modes: i64,
    },
    /// Runs the full regression matrix.
    Suite {
        /// Restrict to these topics (1-7); all by default.
        #[arg(long, value_delimiter = ',')]
        topic: Vec<u8>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Location {
    /// Type and rank, e.g. A2.
    #[arg(long = "type", default_value = "A1")]
    pub dynkin: String,
    #[arg(long, default_value_t = 1)]
    pub node: Node,
    /// Spectral exponent k of a = q^k.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub spec: Spec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QcharFamily {
    Kr,
    NegPrefund,
    Sl3Pair,
    PsiTilde,
    PsiStar,
}

#[derive(Subcommand, Debug)]
pub enum ModuleAction {
    /// Verifies the defining relations on a truncated window.
    Verify {
        /// sl2-kr, sl2-neg-prefund, sl3-pair-inflation, invertible or pos-prefund.
        name: String,
        #[arg(long = "type", default_value = "A1")]
        dynkin: String,
        /// Node(s) the module lives on, comma separated.
        #[arg(long, value_delimiter = ',')]
        nodes: Vec<Node>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        spec: Spec,
        /// KR length.
        #[arg(long)]
        length: Option<u32>,
        /// Largest basis level.
        #[arg(long, default_value_t = 6)]
        basis: u32,
        /// Largest |r| of x and phi modes.
        #[arg(long, default_value_t = 3)]
        modes: i64,
        /// Largest |m| of h modes (defaults to --modes).
        #[arg(long)]
        h_modes: Option<i64>,
        /// `all` or a comma-separated list of relation names.
        #[arg(long, default_value = "all")]
        relations: String,
    },
}

/// Failure of a command: usage (exit 2) or anything else (exit 1).
enum Failure {
    Usage(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidDynkin(_)
            | Error::UnknownName(_)
            | Error::NodeOutOfRange { .. }
            | Error::Parse(_)
            | Error::Argument(_) => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

/// Buffered output of one command.
struct Output {
    format: Format,
    out: Vec<u8>,
}

impl Output {
    /// Writes `text`, or the JSON object `value` with the schema field.
    fn emit(&mut self, text: &str, value: Value) -> std::io::Result<()> {
        match self.format {
            Format::Text => writeln!(self.out, "{text}"),
            Format::Json => {
                let mut value = value;
                if let Value::Object(map) = &mut value {
                    map.insert("schema".into(), json!(SCHEMA));
                }
                writeln!(self.out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Parses `argv` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build();
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {} worker threads: {e}", cli.threads);
            return EXIT_FAIL;
        }
    };
    let mut output = Output {
        format: cli.format,
        out: Vec::new(),
    };
    let result = pool.install(|| dispatch(&cli.command, &mut output));
    if let Err(e) = out.write_all(&output.out) {
        let _ = writeln!(err, "error: write failed: {e}");
        return EXIT_FAIL;
    }
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\n{}", Cli::command().render_usage());
            EXIT_USAGE
        }
        Err(Failure::Other(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
    }
}

/// Runs with the process arguments on stdout/stderr.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn status(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Other(format!("write failed: {e}"))
}

fn dispatch(cmd: &Command, out: &mut Output) -> Result<i32, Failure> {
    match cmd {
        Command::Dynkin { diagram } => dynkin(diagram, out),
        Command::Lweight { weight, at } => lweight(weight, at, out),
        Command::Qchar {
            family,
            at,
            node2,
            depth,
            length,
        } => qchar(*family, at, *node2, *depth, *length, out),
        Command::Module { action } => match action {
            ModuleAction::Verify {
                name,
                dynkin,
                nodes,
                spec,
                length,
                basis,
                modes,
                h_modes,
                relations,
            } => {
                let cd = CartanData::from_name(dynkin)?;
                let name = RealizationName::from_name(name)?;
                let mut params = RealizeParams::new(cd).with_nodes(nodes.clone()).with_spec(*spec);
                if let Some(l) = length {
                    params = params.with_length(*l);
                }
                let window = Window {
                    basis: *basis,
                    modes: *modes,
                    h_modes: h_modes.unwrap_or(*modes),
                };
                let relations = Relation::parse_list(relations)?;
                let real = realize(name, &params)?;
                let report = verify_definition_relations(&real, &window, &relations)?;
                let mut value = to_json(&report);
                value["window"] = to_json(&window);
                out.emit(&report.to_string(), value).map_err(io)?;
                Ok(status(report.all_passed()))
            }
        },
        Command::Identity {
            name,
            at,
            depth,
            length,
        } => {
            let cd = CartanData::from_name(&at.dynkin)?;
            let name = IdentityName::from_name(name)?;
            let report = check_identity(name, &cd, at.node, at.spec, *depth, *length)?;
            let mut text = format!(
                "{} on {} node {} at q^{} (depth {}): {}",
                report.identity,
                report.params.dynkin,
                report.params.node,
                report.params.spec,
                report.params.depth,
                if report.pass { "holds" } else { "FAILS" }
            );
            text.push_str(&format!(
                "\n  {} l-weights on the left, {} on the right",
                report.lhs_weights, report.rhs_weights
            ));
            if let Some(m) = &report.mismatch {
                text.push_str(&format!(
                    "\n  first mismatch {} = {}: lhs {}, rhs {}",
                    m.monomial, m.weight, m.lhs, m.rhs
                ));
            }
            out.emit(&text, to_json(&report)).map_err(io)?;
            Ok(status(report.pass))
        }
        Command::Rmatrix { a, basis, modes } => {
            let window = Window {
                basis: *basis,
                modes: *modes,
                h_modes: *modes,
            };
            let report = rmatrix_check(*a, &window)?;
            let mut text = format!("R-matrix at a = q^{a}, l, m <= {basis}, |r| <= {modes}\n");
            for g in &report.gamma {
                text.push_str(&format!(
                    "  gamma[{},{}] = {}\n",
                    g.l,
                    g.m,
                    g.value.as_deref().unwrap_or("pole")
                ));
            }
            match &report.intertwining {
                Some(r) => text.push_str(&r.to_string()),
                None => text.push_str("gamma has a pole in the window; intertwining not checked"),
            }
            out.emit(&text, to_json(&report)).map_err(io)?;
            Ok(status(report.passed()))
        }
        Command::Suite { topic } => {
            let topics: Vec<Topic> = if topic.is_empty() {
                Topic::ALL.to_vec()
            } else {
                topic
                    .iter()
                    .map(|&i| Topic::from_index(i).ok_or_else(|| Failure::Usage(format!("no topic {i}; topics are 1-7"))))
                    .collect::<Result<_, _>>()?
            };
            let report = run_suite(&topics);
            out.emit(&report.to_string(), to_json(&report)).map_err(io)?;
            Ok(status(report.passed()))
        }
    }
}

fn dynkin(diagram: &str, out: &mut Output) -> Result<i32, Failure> {
    let cd = CartanData::from_name(diagram)?;
    let mut text = format!("{}\nCartan matrix:\n", cd.name());
    for row in cd.matrix() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>3}")).collect();
        text.push_str(&cells.join(""));
        text.push('\n');
    }
    text.push_str(&format!(
        "d = {:?}\ndual Coxeter number = {}\nlacing number = {}",
        cd.symmetrizers(),
        cd.dual_coxeter(),
        cd.lacing()
    ));
    let value = json!({
        "type": cd.name(),
        "cartan": cd.matrix(),
        "d": cd.symmetrizers(),
        "dual_coxeter": cd.dual_coxeter(),
        "lacing": cd.lacing(),
    });
    out.emit(&text, value).map_err(io)?;
    Ok(EXIT_OK)
}

fn lweight(weight: &str, at: &Location, out: &mut Output) -> Result<i32, Failure> {
    let cd = CartanData::from_name(&at.dynkin)?;
    let w = match NamedWeight::from_name(weight) {
        Ok(name) => build_named_weight(&cd, name, at.node, at.spec)?,
        Err(_) => LWeight::parse(&cd, weight)?,
    };
    let degree = w.degree(&cd);
    let varpi = w.varpi(&cd);
    let text = format!("{w}\ndegree = {:?}\nvarpi = {:?}", degree.0, varpi.0);
    let value = json!({
        "lweight": to_json(&w),
        "text": w.to_string(),
        "degree": degree.0,
        "varpi": varpi.0,
    });
    out.emit(&text, value).map_err(io)?;
    Ok(EXIT_OK)
}

fn qchar(
    family: QcharFamily,
    at: &Location,
    node2: Option<Node>,
    depth: u32,
    length: u32,
    out: &mut Output,
) -> Result<i32, Failure> {
    let cd = CartanData::from_name(&at.dynkin)?;
    let (j, k) = (at.node, at.spec);
    cd.check_node(j)?;
    let c: TruncatedQChar = match family {
        QcharFamily::Kr => qc_kr_sl2(&cd, j, k, length, depth)?,
        QcharFamily::NegPrefund => qc_neg_prefund_rank1(&cd, j, k, depth)?,
        QcharFamily::Sl3Pair => {
            let j2 = match node2 {
                Some(n) => n,
                None => *cd
                    .neighbors(j)
                    .first()
                    .ok_or_else(|| Failure::Usage(format!("node {j} of {} has no neighbour", cd.name())))?,
            };
            qc_neg_prefund_sl3_pair(&cd, j, j2, k, depth)?
        }
        QcharFamily::PsiTilde => qc_inflation(
            &qc_neg_prefund_rank1(&cd, j, k, depth)?,
            &build_named_weight(&cd, NamedWeight::PsiTilde, j, k)?,
        )?,
        QcharFamily::PsiStar => qc_inflation(
            &qc_kr_sl2(&cd, j, k, 1, depth)?,
            &build_named_weight(&cd, NamedWeight::PsiStar, j, k)?,
        )?,
    };
    let mut value = to_json(&c);
    value["terms_count"] = json!(c.len());
    let support: Option<&BTreeSet<Node>> = c.support();
    value["support"] = to_json(&support);
    out.emit(&c.to_string(), value).map_err(io)?;
    Ok(EXIT_OK)
}
