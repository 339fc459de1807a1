//! The `trapsem` command line.
//!
//! [`run`] parses arguments, runs one subcommand, writes the result to
//! `stdout` and diagnostics to `stderr`, and returns the process exit code.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dynamics::{
    all_classes, build_graph, is_class, is_strict_class, is_trap_set, strict_classes, to_dot, Kind, StateSet,
    TransitionGraph,
};
use crate::error::Error;
use crate::interp::{Interp2, Interp3};
use crate::limits::Limits;
use crate::oracle::GenConfig;
use crate::program::{completion, lfp_transform, parse_program, Program};
use crate::semantics::{
    enumerate_models, is_stable_model, is_stable_partial, is_supported_model, is_supported_partial, Method, Semantics,
};
use crate::trapspaces::{
    cover, enumerate_trap_spaces, is_trap_space, minimal_trap_spaces, u_minimal_stable_trap_spaces,
};
use crate::verify::run_corpus;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_CHECK_FALSE: i32 = 4;
/// `verify` found at least one failing property.
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Upper bound on cycles combined by `classes` without `--strict`.
const MAX_CYCLES_FOR_CLASSES: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "trapsem", version, about = "Trap spaces and partial-model semantics of ground normal logic programs")]
struct Cli {
    /// Largest atom count for which a transition graph is built.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    max_atoms_graph: u64,
    /// Largest atom count for exhaustive three-valued scans.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    max_atoms_enum3: u64,
    /// Largest rule count the least-fixpoint transformation may accumulate.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_lfp_rules: u64,
    /// Output format. `graph` defaults to dot, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Stable,
    Supported,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Stable => Kind::Stable,
            KindArg::Supported => Kind::Supported,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SemanticsArg {
    Stable,
    Supported,
    StablePartial,
    SupportedPartial,
    Regular,
    LStable,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Semantics {
        match s {
            SemanticsArg::Stable => Semantics::Stable,
            SemanticsArg::Supported => Semantics::Supported,
            SemanticsArg::StablePartial => Semantics::StablePartial,
            SemanticsArg::SupportedPartial => Semantics::SupportedPartial,
            SemanticsArg::Regular => Semantics::Regular,
            SemanticsArg::LStable => Semantics::LStable,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Direct,
    Trap,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Trap => Method::Trap,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Property {
    SupportedTrapSpace,
    StableTrapSpace,
    TrapSet,
    Class,
    StrictClass,
    StableModel,
    SupportedModel,
    StablePartial,
    SupportedPartial,
}

#[derive(Args, Debug)]
struct ProgramArg {
    /// Program file, or `-` for standard input.
    program: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical program and its atom table.
    Parse(ProgramArg),
    /// Print Clark's completion, one equivalence per atom.
    Completion(ProgramArg),
    /// Print the least-fixpoint transformation of the program.
    Lfp(ProgramArg),
    /// Dump a transition graph; DOT output outlines the strict classes.
    Graph {
        #[command(flatten)]
        input: ProgramArg,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// List classes of a transition graph.
    Classes {
        #[command(flatten)]
        input: ProgramArg,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Only strict classes (terminal cycles).
        #[arg(long)]
        strict: bool,
    },
    /// List trap spaces.
    Trapspaces {
        #[command(flatten)]
        input: ProgramArg,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// ≤s-minimal trap spaces (the default).
        #[arg(long, group = "which")]
        minimal: bool,
        /// Minimal stable trap spaces with a ⊆-minimal undefined set.
        #[arg(long, group = "which")]
        u_minimal: bool,
        /// Every trap space.
        #[arg(long, group = "which")]
        all: bool,
    },
    /// The smallest trap space whose cube holds the given states.
    Cover {
        #[command(flatten)]
        input: ProgramArg,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Comma-separated compact states, e.g. `01,10`.
        #[arg(long)]
        states: String,
    },
    /// Enumerate models under one semantics.
    Models {
        #[command(flatten)]
        input: ProgramArg,
        #[arg(long, value_enum)]
        semantics: SemanticsArg,
        #[arg(long, value_enum, default_value = "direct")]
        method: MethodArg,
    },
    /// Decide one property; exits 4 when it does not hold.
    Check {
        #[command(flatten)]
        input: ProgramArg,
        #[arg(long, value_enum)]
        property: Property,
        /// Interpretation, compact (`01*`) or explicit (`a=0,b=1,c=*`).
        #[arg(long)]
        interp: Option<String>,
        /// State set for trap-set, class and strict-class.
        #[arg(long)]
        states: Option<String>,
        /// Transition graph kind for trap-set, class and strict-class.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Generate programs from a corpus file and cross-check every route.
    Verify {
        /// JSON array of generator configurations.
        #[arg(long)]
        corpus: PathBuf,
    },
}

/// Runs one command line. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(stderr, "trapsem: {e}");
                EXIT_USAGE
            }
        },
        Err(failure) => {
            let _ = writeln!(stderr, "trapsem: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::NonGround { .. } => EXIT_PARSE,
            Error::ResourceCap { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Reply = Result<(String, i32), Failure>;

fn execute(cli: &Cli) -> Reply {
    let limits = Limits {
        max_atoms_graph: clamp(cli.max_atoms_graph),
        max_atoms_enum3: clamp(cli.max_atoms_enum3),
        max_lfp_rules: clamp(cli.max_lfp_rules),
        ..Limits::default()
    };
    let format = cli.format;
    let text_or_json = |allowed_dot: bool| -> Result<Format, Failure> {
        match format.unwrap_or(Format::Text) {
            Format::Dot if !allowed_dot => Err(usage("--format dot is only available for `graph`")),
            f => Ok(f),
        }
    };
    let ok = |s: String| Ok((s, EXIT_OK));

    match &cli.command {
        Command::Parse(input) => {
            let p = load(&input.program)?;
            match text_or_json(false)? {
                Format::Json => ok(line(program_json(&p))),
                _ => ok(program_text(&p)),
            }
        }
        Command::Completion(input) => {
            let p = load(&input.program)?;
            let c = completion(&p);
            match text_or_json(false)? {
                Format::Json => ok(line(completion_json(&p))),
                _ => ok(p.atoms().ids().map(|a| c.display_equivalence(p.atoms(), a) + "\n").collect()),
            }
        }
        Command::Lfp(input) => {
            let p = load(&input.program)?;
            let lfp = lfp_transform(&p, limits.max_lfp_rules)?;
            match text_or_json(false)? {
                Format::Json => ok(line(program_json(&lfp))),
                _ => ok(program_text(&lfp)),
            }
        }
        Command::Graph { input, kind } => {
            let p = load(&input.program)?;
            let g = build_graph(&p, (*kind).into(), &limits)?;
            match format.unwrap_or(Format::Dot) {
                Format::Dot => ok(to_dot(&g, &strict_classes(&g))),
                Format::Json => ok(line(g.to_json(p.atoms().names()))),
                Format::Text => ok(graph_text(&g)),
            }
        }
        Command::Classes { input, kind, strict } => {
            let p = load(&input.program)?;
            let kind: Kind = (*kind).into();
            let g = build_graph(&p, kind, &limits)?;
            let classes = if *strict {
                strict_classes(&g)
            } else {
                all_classes(&g, MAX_CYCLES_FOR_CLASSES)?
            };
            match text_or_json(false)? {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Dump<'a> {
                        kind: Kind,
                        strict: bool,
                        classes: Vec<Vec<String>>,
                        atoms: &'a [String],
                    }
                    ok(line(to_json(&Dump {
                        kind,
                        strict: *strict,
                        classes: classes.iter().map(StateSet::compact).collect(),
                        atoms: p.atoms().names(),
                    })))
                }
                _ => ok(classes.iter().map(|c| c.compact().join(" ") + "\n").collect()),
            }
        }
        Command::Trapspaces {
            input,
            kind,
            minimal: _,
            u_minimal,
            all,
        } => {
            let p = load(&input.program)?;
            let kind: Kind = (*kind).into();
            let set = if *all {
                enumerate_trap_spaces(&p, kind, &limits)?
            } else if *u_minimal {
                if kind != Kind::Stable {
                    return Err(usage("--u-minimal applies to stable trap spaces only"));
                }
                u_minimal_stable_trap_spaces(&p, &limits)?
            } else {
                minimal_trap_spaces(&p, kind, &limits)?
            };
            match text_or_json(false)? {
                Format::Json => ok(line(set.to_json(p.atoms().names()))),
                _ => ok(lines(set.compact())),
            }
        }
        Command::Cover { input, kind, states } => {
            let p = load(&input.program)?;
            let kind: Kind = (*kind).into();
            let states = parse_states(states, &p)?;
            let c = cover(&p, kind, &states, &limits)?;
            match text_or_json(false)? {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Dump<'a> {
                        kind: Kind,
                        states: Vec<String>,
                        cover: String,
                        atoms: &'a [String],
                    }
                    ok(line(to_json(&Dump {
                        kind,
                        states: states.iter().map(Interp2::to_compact).collect(),
                        cover: c.to_compact(),
                        atoms: p.atoms().names(),
                    })))
                }
                _ => ok(line(c.to_compact())),
            }
        }
        Command::Models {
            input,
            semantics,
            method,
        } => {
            let p = load(&input.program)?;
            let set = enumerate_models(&p, (*semantics).into(), (*method).into(), &limits)?;
            match text_or_json(false)? {
                Format::Json => ok(line(set.to_json(p.atoms()))),
                _ => ok(lines(set.compact())),
            }
        }
        Command::Check {
            input,
            property,
            interp,
            states,
            kind,
        } => {
            let p = load(&input.program)?;
            let (subject, holds) = check(&p, *property, interp.as_deref(), states.as_deref(), *kind, &limits)?;
            let code = if holds { EXIT_OK } else { EXIT_CHECK_FALSE };
            let text = match text_or_json(false)? {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Dump<'a> {
                        property: &'a str,
                        subject: Vec<String>,
                        holds: bool,
                        atoms: &'a [String],
                    }
                    let name = property.to_possible_value().expect("no skipped variants");
                    line(to_json(&Dump {
                        property: name.get_name(),
                        subject,
                        holds,
                        atoms: p.atoms().names(),
                    }))
                }
                _ => line(holds.to_string()),
            };
            Ok((text, code))
        }
        Command::Verify { corpus } => {
            let raw = read_input(corpus)?;
            let configs: Vec<GenConfig> =
                serde_json::from_str(&raw).map_err(|e| usage(format!("{}: {e}", corpus.display())))?;
            let reports = run_corpus(&configs, &limits);
            let failed = reports.iter().any(|r| r.results.iter().any(|x| x.outcome.is_fail()));
            let code = if failed { EXIT_VERIFY_FAILED } else { EXIT_OK };
            let text = match text_or_json(false)? {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Entry {
                        property: &'static str,
                        outcome: &'static str,
                        #[serde(skip_serializing_if = "String::is_empty")]
                        detail: String,
                    }
                    #[derive(Serialize)]
                    struct Report {
                        config: GenConfig,
                        forced_negation: bool,
                        results: Vec<Entry>,
                    }
                    let out: Vec<Report> = reports
                        .iter()
                        .map(|r| Report {
                            config: r.config,
                            forced_negation: r.forced_negation,
                            results: r
                                .results
                                .iter()
                                .map(|x| Entry {
                                    property: x.property,
                                    outcome: x.outcome.label(),
                                    detail: x.outcome.detail().to_string(),
                                })
                                .collect(),
                        })
                        .collect();
                    line(to_json(&out))
                }
                _ => {
                    let mut s = String::new();
                    for (k, r) in reports.iter().enumerate() {
                        let c = &r.config;
                        let _ = writeln!(
                            s,
                            "program {k}: seed={} n_atoms={} n_rules={} max_body={} neg_prob={} forced_negation={}",
                            c.seed, c.n_atoms, c.n_rules, c.max_body, c.neg_prob, r.forced_negation
                        );
                        for x in &r.results {
                            let _ = match x.outcome.detail() {
                                "" => writeln!(s, "  {} {}", x.outcome.label(), x.property),
                                why => writeln!(s, "  {} {}: {why}", x.outcome.label(), x.property),
                            };
                        }
                    }
                    let _ = writeln!(s, "{}", if failed { "FAILED" } else { "OK" });
                    s
                }
            };
            Ok((text, code))
        }
    }
}

fn clamp(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn line(s: String) -> String {
    s + "\n"
}

fn lines(items: Vec<String>) -> String {
    items.into_iter().map(|s| s + "\n").collect()
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn load(path: &Path) -> Result<Program, Failure> {
    let text = read_input(path)?;
    parse_program(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}:{}", path.display(), f.message);
        f
    })
}

fn program_text(p: &Program) -> String {
    let mut s = format!("% atoms: {}\n", p.atoms().names().join(" "));
    s.push_str(&p.to_string());
    s
}

fn program_json(p: &Program) -> String {
    #[derive(Serialize)]
    struct R<'a> {
        head: &'a str,
        pos: Vec<&'a str>,
        neg: Vec<&'a str>,
    }
    #[derive(Serialize)]
    struct Dump<'a> {
        atoms: &'a [String],
        rules: Vec<R<'a>>,
    }
    let names = |ids: &[crate::program::AtomId]| ids.iter().map(|&a| p.atoms().name(a)).collect();
    to_json(&Dump {
        atoms: p.atoms().names(),
        rules: p
            .rules_by_head()
            .into_iter()
            .map(|r| R {
                head: p.atoms().name(r.head),
                pos: names(&r.pos),
                neg: names(&r.neg),
            })
            .collect(),
    })
}

fn completion_json(p: &Program) -> String {
    #[derive(Serialize)]
    struct Disjunct<'a> {
        pos: Vec<&'a str>,
        neg: Vec<&'a str>,
    }
    #[derive(Serialize)]
    struct Entry<'a> {
        atom: &'a str,
        disjuncts: Vec<Disjunct<'a>>,
    }
    #[derive(Serialize)]
    struct Dump<'a> {
        atoms: &'a [String],
        completion: Vec<Entry<'a>>,
    }
    let c = completion(p);
    let names = |ids: &[crate::program::AtomId]| ids.iter().map(|&a| p.atoms().name(a)).collect();
    to_json(&Dump {
        atoms: p.atoms().names(),
        completion: p
            .atoms()
            .ids()
            .map(|a| Entry {
                atom: p.atoms().name(a),
                disjuncts: c
                    .rhs(a)
                    .iter()
                    .map(|b| Disjunct {
                        pos: names(&b.pos),
                        neg: names(&b.neg),
                    })
                    .collect(),
            })
            .collect(),
    })
}

fn graph_text(g: &TransitionGraph) -> String {
    (0..g.state_count() as u64)
        .map(|s| format!("{} -> {}\n", g.compact(s), g.compact(g.succ(s))))
        .collect()
}

/// Compact states separated by commas, or explicit states separated by `;`.
fn parse_states(text: &str, p: &Program) -> Result<Vec<Interp2>, Failure> {
    let sep = if text.contains('=') { ';' } else { ',' };
    let states = text
        .split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Interp2::parse(s, p.atoms()))
        .collect::<Result<Vec<_>, _>>()?;
    if states.is_empty() {
        return Err(Error::EmptySet.into());
    }
    Ok(states)
}

fn check(
    p: &Program,
    property: Property,
    interp: Option<&str>,
    states: Option<&str>,
    kind: Option<KindArg>,
    limits: &Limits,
) -> Result<(Vec<String>, bool), Failure> {
    let need_interp = || interp.ok_or_else(|| usage("this property needs --interp"));
    let three = |s: &str| Interp3::parse(s, p.atoms()).map_err(Failure::from);
    let two = |s: &str| Interp2::parse(s, p.atoms()).map_err(Failure::from);
    match property {
        Property::SupportedTrapSpace | Property::StableTrapSpace => {
            let i = three(need_interp()?)?;
            let k = if property == Property::StableTrapSpace {
                Kind::Stable
            } else {
                Kind::Supported
            };
            Ok((vec![i.to_compact()], is_trap_space(p, k, &i, limits)?))
        }
        Property::StablePartial => {
            let i = three(need_interp()?)?;
            Ok((vec![i.to_compact()], is_stable_partial(p, &i)?))
        }
        Property::SupportedPartial => {
            let i = three(need_interp()?)?;
            Ok((vec![i.to_compact()], is_supported_partial(p, &i)?))
        }
        Property::StableModel => {
            let i = two(need_interp()?)?;
            Ok((vec![i.to_compact()], is_stable_model(p, &i)?))
        }
        Property::SupportedModel => {
            let i = two(need_interp()?)?;
            Ok((vec![i.to_compact()], is_supported_model(p, &i)?))
        }
        Property::TrapSet | Property::Class | Property::StrictClass => {
            let kind = kind.ok_or_else(|| usage("this property needs --kind"))?;
            let states = states.ok_or_else(|| usage("this property needs --states"))?;
            let states = parse_states(states, p)?;
            let g = build_graph(p, kind.into(), limits)?;
            let set = StateSet::from_interps(p.atom_count(), &states)?;
            let holds = match property {
                Property::TrapSet => is_trap_set(&g, &set)?,
                Property::Class => is_class(&g, &set)?,
                _ => is_strict_class(&g, &set)?,
            };
            Ok((set.compact(), holds))
        }
    }
}
