//! Command dispatch. `run` is pure apart from reading and writing files, so
//! tests can drive it directly.

use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use prolie_core::constructions::{
    build_extension, central_extension, current_algebra, direct_sum, exp_derivation, ExtensionSpec,
};
use prolie_core::derivations::{
    center_and_inner, characteristically_pronilpotent, derivation_space, describe_on_layer_one, format_root, rank,
    root_decomposition, torus_of_quotient,
};
use prolie_core::exactlin::Matrix;
use prolie_core::filtration::{nilpotency_profile, series, solvability_profile, truncate, SeriesKind};
use prolie_core::presentation::{check_jacobi, classify_weighting, window_kind, Presentation};
use prolie_core::{Error, RandomCheck, Verdict};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::catalog;
use crate::dsl::{parse_cocycle, parse_presentation, parse_vector, to_dsl, DslError};
use crate::report::{self, Report};

#[derive(Parser, Debug)]
#[command(name = "prolie", version, about = "Finite-depth analysis of pro-nilpotent and residually solvable Lie algebras")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized checks, overriding PROLIE_SEED and the input hash.
    #[arg(long, global = true)]
    seed_override: Option<u64>,
    /// Override a `param` of the input, as NAME=VALUE.
    #[arg(long = "param", global = true, value_parser = parse_param)]
    params: Vec<(String, i64)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Lcs,
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Complement {
    Abelian,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basis, weighting and Jacobi identity on one window.
    Check {
        file: String,
        #[arg(long, default_value_t = 10)]
        window: i64,
    },
    /// Lower central or derived series of one window.
    Series {
        file: String,
        #[arg(long, default_value_t = 10)]
        window: i64,
        #[arg(long, value_enum, default_value_t = Kind::Lcs)]
        kind: Kind,
    },
    /// Residual and pro properties across windows.
    Profile {
        file: String,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 12])]
        windows: Vec<i64>,
    },
    /// Maximal torus of diagonal derivations on one window.
    Torus {
        file: String,
        #[arg(long, default_value_t = 10)]
        window: i64,
    },
    /// Rank across windows.
    Rank {
        file: String,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 12, 16])]
        windows: Vec<i64>,
    },
    /// Root decomposition under the maximal torus.
    Roots {
        file: String,
        #[arg(long, default_value_t = 10)]
        window: i64,
    },
    /// Derivation algebra, inner derivations and center of one window.
    Derivations {
        file: String,
        #[arg(long, default_value_t = 8)]
        window: i64,
    },
    /// Whether every derivation acts nilpotently.
    CharPronilpotent {
        file: String,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 12])]
        windows: Vec<i64>,
    },
    /// Residually solvable extension by the maximal torus.
    Extend {
        file: String,
        #[arg(long, value_enum, default_value_t = Complement::Abelian)]
        complement: Complement,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [6, 8, 10])]
        windows: Vec<i64>,
    },
    /// Central extension by a 2-cocycle file.
    CentralExt {
        file: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [8, 10])]
        windows: Vec<i64>,
    },
    /// Current algebra over t·C[t].
    Current {
        file: String,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, default_value_t = 4)]
        degree_max: i64,
        #[arg(long, default_value_t = 8)]
        window: i64,
    },
    /// Direct sum of two presentations.
    Sum {
        first: String,
        second: String,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, default_value_t = 8)]
        window: i64,
    },
    /// Exponential of a nilpotent derivation: ad(SUM), torus(K) or zero.
    Exp {
        file: String,
        #[arg(long)]
        derivation: String,
        #[arg(long, default_value_t = 8)]
        window: i64,
    },
    /// List the builtin algebras, or show one.
    Catalog { name: Option<String> },
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v = v.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok((k.trim().to_string(), v))
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: msg,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Dsl { path: String, source: DslError },
    #[error("{0}")]
    Core(#[from] Error),
}

/// Validation errors from the core are answers about the algebra, not
/// operational failures.
fn as_verdict(e: &Error, depth: i64) -> Option<Verdict> {
    let property = match e {
        Error::JacobiFailure(_) => "jacobi",
        Error::RadicalViolation(_) => "non_nilpotent_action",
        Error::CodimBound { .. } => "codim_bound",
        Error::NotCocycle(_) => "cocycle",
        Error::NotAlternating(_) => "alternating",
        _ => return None,
    };
    Some(Verdict::fails(property, depth, e.to_string()))
}

struct Input {
    presentation: Presentation,
    text: String,
}

fn read_text(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn load(path: &str, params: &[(String, i64)]) -> Result<Input, Failure> {
    let dsl = |source| Failure::Dsl {
        path: path.into(),
        source,
    };
    let (mut presentation, mut text) = if let Some(name) = path.strip_prefix("catalog:") {
        let p = catalog::load(name)
            .ok_or_else(|| Failure::Usage(format!("no catalog entry `{name}`")))?
            .map_err(dsl)?;
        let entry = catalog::find(name.split('(').next().unwrap_or(name)).expect("loaded entries exist");
        (p, format!("{path}\n{}", entry.source))
    } else {
        let text = read_text(path)?;
        (parse_presentation(&text).map_err(dsl)?, text)
    };
    for (k, v) in params {
        if presentation.param(k).is_none() {
            return Err(Failure::Usage(format!("{path} has no parameter `{k}`")));
        }
        presentation.set_param(k, *v);
        text.push_str(&format!("\nparam {k} = {v}"));
    }
    if !params.is_empty() {
        presentation.validate()?;
        presentation.check_overlaps()?;
    }
    Ok(Input { presentation, text })
}

fn hash(texts: &[&str]) -> String {
    let mut h = Sha256::new();
    for t in texts {
        h.update((t.len() as u64).to_be_bytes());
        h.update(t.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn seed_from(input_hash: &str, env: Option<&str>, cli: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = cli {
        return Ok(s);
    }
    if let Some(s) = env {
        return s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("PROLIE_SEED must be an unsigned integer, got `{s}`")));
    }
    Ok(u64::from_str_radix(&input_hash[..16], 16).expect("hex digest"))
}

fn write_out(path: &Option<String>, text: &str) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| Failure::Usage(format!("{p}: {e}")))?;
    }
    Ok(())
}

fn verdicts_into(r: &mut Report, vs: &[Verdict], required: bool) {
    for v in vs {
        if required {
            r.require(v.clone());
        } else {
            r.verdicts.push(v.clone());
        }
    }
}

fn command_echo(args: &[String]) -> String {
    args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ")
}

/// Runs one invocation. `args[0]` is the program name; `env_seed` is the
/// value of `PROLIE_SEED`, if set.
pub fn run(args: &[String], env_seed: Option<&str>) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome::usage(text),
            };
        }
    };
    let echo = command_echo(args);
    match dispatch(&cli, &echo, env_seed) {
        Ok(report) => {
            let stdout = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            Outcome {
                code: if report.failed() { 1 } else { 0 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}

fn max_window(ws: &[i64]) -> i64 {
    ws.iter().copied().max().unwrap_or(0)
}

fn check_windows(ws: &[i64]) -> Result<(), Failure> {
    if ws.is_empty() || ws.iter().any(|&w| w < 1) {
        return Err(Failure::Usage("windows must be positive".into()));
    }
    Ok(())
}

fn dispatch(cli: &Cli, echo: &str, env_seed: Option<&str>) -> Result<Report, Failure> {
    let params = &cli.params;
    match &cli.command {
        Command::Catalog { name } => catalog_report(name.as_deref(), echo),
        Command::Check { file, window } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(&[*window])?;
            r.windows = vec![*window];
            let p = &inp.presentation;
            let q = truncate(p, *window)?;
            r.set("name", json!(p.name));
            r.set("dim", json!(q.dim()));
            r.set("basis", json!(q.labels()));
            r.set("weighting", json!(classify_weighting(p, *window)?.as_str()));
            r.set("window_kind", json!(window_kind(p, *window)?.as_str()));
            r.require(check_jacobi(p, *window)?);
            Ok(r)
        }
        Command::Series { file, window, kind } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(&[*window])?;
            r.windows = vec![*window];
            let q = truncate(&inp.presentation, *window)?;
            let kind = match kind {
                Kind::Lcs => SeriesKind::LowerCentral,
                Kind::Derived => SeriesKind::Derived,
            };
            let s = series(&q, kind);
            r.set("kind", json!(kind.as_str()));
            r.set("dim", json!(q.dim()));
            r.set("dims", json!(s.dims()));
            r.set("layer_dims", json!(s.layer_dims()));
            r.set("stabilized", json!(s.stabilized));
            r.set("reaches_zero", json!(s.reaches_zero()));
            r.set(
                "terms",
                Value::Array(s.terms.iter().map(|t| json!(q.format_subspace(t))).collect()),
            );
            Ok(r)
        }
        Command::Profile { file, windows } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(windows)?;
            r.windows = windows.clone();
            let p = &inp.presentation;
            for prof in [nilpotency_profile(p, windows)?, solvability_profile(p, windows)?] {
                let rows: Vec<Value> = prof
                    .windows
                    .iter()
                    .map(|w| {
                        json!({
                            "window": w.window,
                            "window_kind": w.kind.as_str(),
                            "weighting": w.weighting.as_str(),
                            "dim": w.dim,
                            "term_dims": w.term_dims,
                            "layer_dims": w.layer_dims,
                            "stabilized": w.stabilized,
                        })
                    })
                    .collect();
                r.set(
                    prof.kind.as_str(),
                    json!({"windows": rows, "stable_layers": prof.stable_layers, "notes": prof.notes}),
                );
                verdicts_into(&mut r, &prof.verdicts, false);
            }
            Ok(r)
        }
        Command::Torus { file, window } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(&[*window])?;
            r.windows = vec![*window];
            let q = truncate(&inp.presentation, *window)?;
            let t = torus_of_quotient(&q);
            r.set("dim", json!(t.dim()));
            r.set("equations", json!(t.equations.len()));
            r.set(
                "free",
                json!(t.free_positions.iter().map(|&i| t.labels[i].clone()).collect::<Vec<_>>()),
            );
            let gens: Vec<Value> = t
                .values
                .iter()
                .map(|vals| {
                    let m: serde_json::Map<String, Value> = t
                        .labels
                        .iter()
                        .zip(vals)
                        .map(|(l, v)| (l.clone(), report::scalar(v)))
                        .collect();
                    Value::Object(m)
                })
                .collect();
            r.set("generators", Value::Array(gens));
            Ok(r)
        }
        Command::Rank { file, windows } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(windows)?;
            r.windows = windows.clone();
            let rep = rank(&inp.presentation, windows)?;
            r.set(
                "per_window",
                Value::Array(rep.per_window.iter().map(|(w, k)| json!({"window": w, "rank": k})).collect()),
            );
            r.set("rank", json!(rep.rank));
            r.set("layer_one_dim", json!(rep.layer_one_dim));
            r.set("maximal_rank", json!(rep.maximal_rank));
            r.set("bound_respected", json!(rep.bound_respected));
            r.verdicts.push(rep.verdict);
            Ok(r)
        }
        Command::Roots { file, window } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(&[*window])?;
            r.windows = vec![*window];
            let q = truncate(&inp.presentation, *window)?;
            let t = torus_of_quotient(&q);
            let d = root_decomposition(&t);
            let roots: Vec<Value> = d
                .roots
                .iter()
                .map(|(root, pos)| {
                    json!({
                        "root": report::scalars(root),
                        "elements": pos.iter().map(|&i| t.labels[i].clone()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            r.set("torus_dim", json!(t.dim()));
            r.set("roots", Value::Array(roots));
            r.set("primitive", Value::Array(d.primitive.iter().map(|x| report::scalars(x)).collect()));
            r.set(
                "non_integral",
                Value::Array(d.non_integral.iter().map(|x| report::scalars(x)).collect()),
            );
            let v = match d.non_integral.first() {
                None => Verdict::holds("roots_integral", *window),
                Some(x) => Verdict::fails(
                    "roots_integral",
                    *window,
                    format!("{} is not an integer combination of the primitive roots", format_root(x)),
                ),
            };
            r.verdicts.push(v);
            Ok(r)
        }
        Command::Derivations { file, window } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(&[*window])?;
            r.windows = vec![*window];
            let q = truncate(&inp.presentation, *window)?;
            let ci = center_and_inner(&q);
            let ders = derivation_space(&q);
            r.set("dim", json!(q.dim()));
            r.set("derivation_dim", json!(ci.derivation_dim));
            r.set("inner_dim", json!(ci.inner_dim));
            r.set("der_equals_inner", json!(ci.der_equals_inner));
            r.set("center", json!(q.format_subspace(&ci.center)));
            r.set("center_dim", json!(ci.center.dim()));
            r.set(
                "basis_on_generators",
                Value::Array(ders.iter().map(|d| json!(describe_on_layer_one(&q, d))).collect()),
            );
            Ok(r)
        }
        Command::CharPronilpotent { file, windows } => {
            let inp = load(file, params)?;
            let h = hash(&[&inp.text]);
            let mut r = Report::new(echo, &h);
            check_windows(windows)?;
            r.windows = windows.clone();
            let seed = seed_from(&h, env_seed, cli.seed_override)?;
            let check = RandomCheck::new(seed);
            let rep = characteristically_pronilpotent(&inp.presentation, windows, &check)?;
            let rows: Vec<Value> = rep
                .per_window
                .iter()
                .map(|w| {
                    json!({
                        "window": w.window,
                        "block_side": w.block_side,
                        "parameters": w.parameters,
                        "method": w.method.as_str(),
                        "exact": w.method.is_exact(),
                        "nil": w.nil,
                        "witness": w.witness,
                        "miss_probability": (!w.method.is_exact())
                            .then(|| format!("{:e}", check.miss_probability(w.block_side as u32))),
                    })
                })
                .collect();
            r.set("per_window", Value::Array(rows));
            r.set("seed", json!(seed));
            r.set(
                "sampling",
                json!({"samples": check.samples, "height": check.height}),
            );
            r.verdicts.push(rep.verdict);
            Ok(r)
        }
        Command::Extend {
            file,
            complement: Complement::Abelian,
            out,
            windows,
        } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(windows)?;
            r.windows = windows.clone();
            let top = max_window(windows);
            let spec = ExtensionSpec::full_torus(inp.presentation.clone(), top)?;
            match build_extension(&spec, windows) {
                Ok(ext) => {
                    let text = to_dsl(&ext.presentation);
                    write_out(out, &text)?;
                    let rows: Vec<Value> = ext
                        .report
                        .windows
                        .iter()
                        .map(|w| {
                            json!({
                                "window": w.window,
                                "dim": w.dim,
                                "codim": w.codim,
                                "layer_one_dim": w.layer_one_dim,
                                "rank": w.rank,
                                "square_in_radical": w.square_in_radical,
                                "derived_containment": w.derived_containment,
                                "codim_equals_rank": w.codim_equals_rank,
                                "center_dim": w.center_dim,
                                "der_equals_inner": w.der_equals_inner,
                            })
                        })
                        .collect();
                    r.set("per_window", Value::Array(rows));
                    r.set("presentation", json!(text));
                    verdicts_into(&mut r, &ext.report.verdicts, true);
                    r.warnings.extend(ext.report.warnings);
                }
                Err(e) => r.require(as_verdict(&e, top).ok_or(e)?),
            }
            Ok(r)
        }
        Command::CentralExt {
            file,
            cocycle,
            out,
            windows,
        } => {
            let inp = load(file, params)?;
            let ctext = read_text(cocycle)?;
            let mut r = Report::new(echo, &hash(&[&inp.text, &ctext]));
            check_windows(windows)?;
            r.windows = windows.clone();
            let c = parse_cocycle(&ctext, &inp.presentation).map_err(|source| Failure::Dsl {
                path: cocycle.clone(),
                source,
            })?;
            match central_extension(&inp.presentation, &c, windows) {
                Ok(ce) => {
                    let text = to_dsl(&ce.presentation);
                    write_out(out, &text)?;
                    let rows: Vec<Value> = ce
                        .report
                        .windows
                        .iter()
                        .map(|w| {
                            json!({
                                "window": w.window,
                                "coboundary": w.coboundary.as_ref().map(|nu| {
                                    nu.iter().map(|(e, v)| (e.clone(), json!(v))).collect::<serde_json::Map<_, _>>()
                                }),
                                "theta_perp": w.theta_perp,
                                "theta_perp_dim": w.theta_perp_dim,
                                "center_dim": w.center_dim,
                                "center_formula": w.center_formula,
                            })
                        })
                        .collect();
                    let weights: serde_json::Map<String, Value> =
                        ce.report.weights.iter().map(|(z, w)| (z.clone(), json!(w))).collect();
                    r.set("weights", Value::Object(weights));
                    r.set("per_window", Value::Array(rows));
                    r.set("presentation", json!(text));
                    verdicts_into(&mut r, &ce.report.verdicts, true);
                    r.warnings.extend(ce.report.warnings);
                }
                Err(e) => r.require(as_verdict(&e, max_window(windows)).ok_or(e)?),
            }
            Ok(r)
        }
        Command::Current {
            file,
            out,
            degree_max,
            window,
        } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(&[*window])?;
            r.windows = vec![*window];
            let c = current_algebra(&inp.presentation, *degree_max)?;
            let text = to_dsl(&c);
            write_out(out, &text)?;
            r.set("dim", json!(truncate(&c, *window)?.dim()));
            r.set("presentation", json!(text));
            r.require(check_jacobi(&c, *window)?);
            Ok(r)
        }
        Command::Sum {
            first,
            second,
            out,
            window,
        } => {
            let a = load(first, params)?;
            let b = load(second, params)?;
            let mut r = Report::new(echo, &hash(&[&a.text, &b.text]));
            check_windows(&[*window])?;
            r.windows = vec![*window];
            let s = direct_sum(&a.presentation, &b.presentation);
            let text = to_dsl(&s.presentation);
            write_out(out, &text)?;
            r.set("dim", json!(truncate(&s.presentation, *window)?.dim()));
            r.set("presentation", json!(text));
            r.warnings.extend(s.warnings);
            r.require(check_jacobi(&s.presentation, *window)?);
            Ok(r)
        }
        Command::Exp {
            file,
            derivation,
            window,
        } => {
            let inp = load(file, params)?;
            let mut r = Report::new(echo, &hash(&[&inp.text]));
            check_windows(&[*window])?;
            r.windows = vec![*window];
            let q = truncate(&inp.presentation, *window)?;
            let d = derivation_matrix(&inp.presentation, &q, derivation)?;
            let e = exp_derivation(&q, &d)?;
            r.set("basis", json!(q.labels()));
            r.set("derivation", report::matrix(&d));
            r.set("exp", report::matrix(&e.matrix));
            r.require(e.verdict);
            Ok(r)
        }
    }
}

fn derivation_matrix(
    p: &Presentation,
    q: &prolie_core::filtration::FiniteQuotient,
    spec: &str,
) -> Result<Matrix, Failure> {
    let spec = spec.trim();
    if spec == "zero" {
        return Ok(Matrix::zeros(q.dim(), q.dim()));
    }
    if let Some(inner) = spec.strip_prefix("ad(").and_then(|s| s.strip_suffix(')')) {
        let v = parse_vector(inner, p).map_err(|source| Failure::Dsl {
            path: "--derivation".into(),
            source,
        })?;
        let x = q.from_elems(&v);
        return Ok(q.ad(&x));
    }
    if let Some(k) = spec.strip_prefix("torus(").and_then(|s| s.strip_suffix(')')) {
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("bad torus index in `{spec}`")))?;
        let t = torus_of_quotient(q);
        if k == 0 || k > t.dim() {
            return Err(Failure::Usage(format!("torus has {} generators, asked for t{k}", t.dim())));
        }
        return Ok(t.matrix(k - 1));
    }
    Err(Failure::Usage(format!(
        "derivation must be ad(SUM), torus(K) or zero, got `{spec}`"
    )))
}

fn catalog_report(name: Option<&str>, echo: &str) -> Result<Report, Failure> {
    let entry_value = |e: &catalog::Entry| {
        let expected: serde_json::Map<String, Value> =
            e.expected.iter().map(|(k, v)| ((*k).to_string(), json!(v))).collect();
        json!({"name": e.name, "summary": e.summary, "expected": expected})
    };
    match name {
        None => {
            let text: String = catalog::ENTRIES.iter().map(|e| e.source).collect();
            let mut r = Report::new(echo, &hash(&[&text]));
            r.set("count", json!(catalog::ENTRIES.len()));
            r.set(
                "algebras",
                Value::Array(catalog::ENTRIES.iter().map(entry_value).collect()),
            );
            Ok(r)
        }
        Some(n) => {
            let e = catalog::find(n).ok_or_else(|| Failure::Usage(format!("no catalog entry `{n}`")))?;
            let mut r = Report::new(echo, &hash(&[e.source]));
            r.set("algebra", entry_value(e));
            r.set("source", json!(e.source));
            Ok(r)
        }
    }
}
