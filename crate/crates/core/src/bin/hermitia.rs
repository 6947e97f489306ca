//! Command-line front end. Exit codes: 0 pass, 1 verification failure,
//! 2 usage or input error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hermitia::classify::{negative_controls, verify_classification};
use hermitia::criteria::{certify, check_criterion, CriterionSet, DEFAULT_EMPIRICAL_BOUND};
use hermitia::enumerate::{represented_set, represents, truant, DEFAULT_TRUANT_CAP};
use hermitia::escalate::{build_tree, Regime, MAX_TREE_RANK};
use hermitia::hermitian::{catalog, parse_lattice};
use hermitia::qform::{extract_basis, parse_form, trace_form, QuadraticForm};

/// `println!` that ignores a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "hermitia", version, about = "Universal binary Hermitian lattices and their trace forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Classical,
    Integral,
}

#[derive(Subcommand)]
enum Command {
    /// List the 25 catalog lattices.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Trace form of a lattice (label or `m=<int>: ...`).
    TraceForm { lattice: String },
    /// Check a criterion set against a form or lattice.
    Check {
        target: String,
        #[arg(long, value_parser = parse_set)]
        set: CriterionSet,
    },
    /// Route a lattice to a certification argument (JSON report).
    Certify {
        lattice: String,
        #[arg(long, default_value_t = DEFAULT_EMPIRICAL_BOUND)]
        bound: i64,
    },
    /// Smallest positive integer not represented.
    Truant {
        target: String,
        #[arg(long, default_value_t = DEFAULT_TRUANT_CAP)]
        cap: i64,
    },
    /// Search for a representation of `t`.
    Represents { target: String, t: i64 },
    /// Represented and missing values up to a bound.
    Spectrum {
        target: String,
        #[arg(long)]
        upto: i64,
    },
    /// Escalation tree per rank.
    Escalators {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long, default_value_t = MAX_TREE_RANK)]
        max_rank: usize,
        #[arg(long, default_value_t = DEFAULT_TRUANT_CAP)]
        cap: i64,
        #[arg(long)]
        json: bool,
    },
    /// Full verification of the classification.
    VerifyClassification {
        #[arg(long, default_value_t = DEFAULT_EMPIRICAL_BOUND)]
        bound: i64,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
    },
    /// Truants of lattices just outside the catalog.
    Controls,
}

fn parse_set(s: &str) -> Result<CriterionSet, String> {
    CriterionSet::parse(s).ok_or_else(|| format!("unknown set {s:?}; use 15, 290 or 15h"))
}

type Failure = (u8, String);

fn input<E: std::fmt::Display>(e: E) -> Failure {
    (2, e.to_string())
}

/// A form, or the basis-extracted trace form of a lattice.
fn target_form(text: &str) -> Result<QuadraticForm, Failure> {
    let t = text.trim();
    let q = if t.starts_with("m=") || t.starts_with("Qm") {
        trace_form(&parse_lattice(t).map_err(input)?).map_err(input)?
    } else {
        parse_form(t).map_err(input)?
    };
    if q.is_positive_definite() {
        Ok(q)
    } else {
        Ok(extract_basis(&q).map_err(input)?.0)
    }
}

fn print_json(v: &impl serde::Serialize) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Catalog { json } => {
            let cat = catalog();
            if json {
                let rows: Vec<_> = cat
                    .iter()
                    .map(|l| json!({"label": l.label(), "field_m": l.field().m(), "lattice": l.to_string()}))
                    .collect();
                print_json(&rows);
            } else {
                for l in &cat {
                    out!("{:<24} {}", l.label().unwrap_or_default(), l);
                }
            }
        }
        Command::TraceForm { lattice } => {
            let l = parse_lattice(&lattice).map_err(input)?;
            let q = trace_form(&l).map_err(input)?;
            out!("trace form ({} variables, rank {}): {}", q.n(), q.rank(), q.to_alias_string());
            if !q.is_positive_definite() {
                let (r, t) = extract_basis(&q).map_err(input)?;
                out!("extracted basis: {}", r.to_alias_string());
                out!("basis matrix: {t:?}");
            }
        }
        Command::Check { target, set } => {
            let q = target_form(&target)?;
            let c = check_criterion(&q, set).map_err(input)?;
            print_json(&json!({"form": q.to_alias_string(), "check": c}));
            return Ok(c.pass);
        }
        Command::Certify { lattice, bound } => {
            let l = parse_lattice(&lattice).map_err(input)?;
            let r = certify(&l, bound).map_err(input)?;
            print_json(&r);
            return Ok(r.certified);
        }
        Command::Truant { target, cap } => {
            let q = target_form(&target)?;
            match truant(&q, cap).map_err(input)?.value() {
                Some(t) => out!("{t}"),
                None => out!("none up to {cap}"),
            }
        }
        Command::Represents { target, t } => {
            let q = target_form(&target)?;
            return match represents(&q, t).map_err(input)? {
                Some(w) => {
                    out!("{} = Q{:?}", t, w.vector);
                    Ok(true)
                }
                None => {
                    out!("{t} is not represented");
                    Ok(false)
                }
            };
        }
        Command::Spectrum { target, upto } => {
            let q = target_form(&target)?;
            let s = represented_set(&q, upto).map_err(input)?;
            let missing: Vec<i64> = (1..=upto).filter(|&t| !s.contains(t)).collect();
            out!("form: {}", q.to_alias_string());
            out!("represented: {:?}", s.values());
            out!("missing: {missing:?}");
        }
        Command::Escalators { regime, max_rank, cap, json } => {
            let regime = match regime {
                RegimeArg::Classical => Regime::Classical,
                RegimeArg::Integral => Regime::IntegerValued,
            };
            let tree = build_tree(regime, max_rank, cap).map_err(input)?;
            if json {
                let levels: Vec<_> = tree
                    .levels
                    .iter()
                    .enumerate()
                    .map(|(rank, nodes)| {
                        let nodes: Vec<_> = nodes
                            .iter()
                            .map(|n| json!({"form": n.form.to_alias_string(), "truant": n.truant, "parent": n.parent}))
                            .collect();
                        json!({"rank": rank, "count": nodes.len(), "nodes": nodes})
                    })
                    .collect();
                print_json(&json!({"regime": regime, "truant_cap": cap, "levels": levels, "truants": tree.truants()}));
            } else {
                for (rank, nodes) in tree.levels.iter().enumerate() {
                    let leaves = nodes.iter().filter(|n| n.truant.is_none()).count();
                    out!("rank {rank}: {} classes, {leaves} with no truant up to {cap}", nodes.len());
                    if rank < 4 {
                        for n in nodes {
                            let t = n.truant.map_or_else(|| "-".to_owned(), |t| t.to_string());
                            out!("  {:<40} truant {t}", n.form.to_alias_string());
                        }
                    }
                }
                out!("truants: {:?}", tree.truants());
            }
        }
        Command::VerifyClassification { bound, json, text } => {
            let r = verify_classification(bound).map_err(input)?;
            if json || !text {
                out!("{}", r.to_json());
            } else {
                out!("{}", r.to_text().trim_end());
            }
            return Ok(r.overall_pass);
        }
        Command::Controls => {
            let c = negative_controls().map_err(input)?;
            print_json(&c);
            return Ok(c.iter().all(|c| c.verified));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HERMITIA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
