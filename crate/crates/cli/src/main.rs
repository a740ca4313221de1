//! `qmap`: command-line front end for the quasimap invariant engine.

mod table;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qmap_core::git_model::GitPresentation;
use qmap_core::invariants::{compute, generating_series_truncated, InvariantRequest, Mode};
use qmap_core::presets::{catalogue, PresetId};
use qmap_core::ratfun::{parse_polynomial, Polynomial};
use qmap_core::vafa_intriligator::{sigma_shift, solve_fiber, to_torus, vi_sum, vi_vs_series_check, TorusBasis};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "qmap", version, about = "Genus-zero quasimap invariants of GIT quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads (defaults to one per core).
    #[arg(long, env = "QMAP_THREADS", global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral of an insertion over the quasimap space of one degree.
    Invariant(InvariantArgs),
    /// Truncated generating series at a point q of the dual group.
    Series(SeriesArgs),
    /// Vafa-Intriligator sum at sigma(q).
    Vi(ViArgs),
    /// Compare the truncated series at q with the VI sum at sigma(q).
    Check(SeriesArgs),
    /// List the built-in presentations.
    Presets,
    /// Same as `invariant --explain`.
    Explain(InvariantArgs),
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Built-in presentation: p:n, pp:a,b,... or gr:r,n.
    #[arg(long, group = "source")]
    preset: Option<String>,
    /// Presentation JSON file.
    #[arg(long, group = "source")]
    custom: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InvariantArgs {
    #[command(flatten)]
    source: Source,
    /// G-degree in degree-basis coordinates, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    degree: String,
    /// Insertion polynomial in u1..ur (and z).
    #[arg(long)]
    insertion: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Nonequivariant)]
    mode: ModeArg,
    /// Use P(-u) in place of P(u).
    #[arg(long)]
    dualize: bool,
    /// Include the residue computation of every term.
    #[arg(long)]
    explain: bool,
    /// Accept insertions that are not Weyl invariant.
    #[arg(long)]
    allow_non_invariant: bool,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    insertion: String,
    /// Point of the dual group, one complex number per degree-basis
    /// coordinate (e.g. `0.1` or `0.1+0.05i,0.2`).
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, default_value_t = 8)]
    kappa_bound: i64,
    /// Only nonequivariant series are supported.
    #[arg(long, value_enum, default_value_t = ModeArg::Nonequivariant)]
    mode: ModeArg,
    #[arg(long)]
    dualize: bool,
}

#[derive(Args, Debug)]
struct ViArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    insertion: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    /// Evaluate at the image of q itself rather than at sigma(q).
    #[arg(long)]
    no_sigma: bool,
    #[arg(long)]
    dualize: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    Equivariant,
    Nonequivariant,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Equivariant => Mode::Equivariant,
            ModeArg::Nonequivariant => Mode::Nonequivariant,
        }
    }
}

enum Failure {
    Usage(String),
    Domain(qmap_core::Error),
}

impl From<qmap_core::Error> for Failure {
    fn from(e: qmap_core::Error) -> Self {
        match e {
            qmap_core::Error::Parse { .. } | qmap_core::Error::InvalidPreset(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

type Outcome = Result<(Value, String), Failure>;

fn presentation(s: &Source) -> Result<GitPresentation, Failure> {
    match (&s.preset, &s.custom) {
        (Some(p), None) => Ok(p.parse::<PresetId>()?.build()?),
        (None, Some(path)) => Ok(GitPresentation::load(path)?),
        _ => Err(Failure::Usage("give exactly one of --preset and --custom".into())),
    }
}

fn parse_degree(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot parse degree `{s}`")))
}

fn parse_q(s: &str) -> Result<Vec<Complex64>, Failure> {
    s.split(',')
        .map(|x| Complex64::from_str(x.trim()))
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot parse q `{s}`")))
}

fn insertion(s: &str, p: &GitPresentation) -> Result<Polynomial, Failure> {
    Ok(parse_polynomial(s, p.rank())?)
}

fn pair(x: Complex64) -> Value {
    json!([x.re, x.im])
}

fn run_invariant(a: &InvariantArgs, explain: bool) -> Outcome {
    let p = presentation(&a.source)?;
    let mut req = InvariantRequest::new(&p, parse_degree(&a.degree)?, insertion(&a.insertion, &p)?, a.mode.into());
    req.dualize = a.dualize;
    req.allow_non_invariant = a.allow_non_invariant;
    req.explain = explain || a.explain;
    let res = compute(&req)?;
    let mut rows = vec![vec!["lift".to_string(), "split".to_string(), "value".to_string()]];
    for t in &res.breakdown {
        let split = t.split.as_ref().map(|(a, b)| format!("{a:?} | {b:?}")).unwrap_or_else(|| "-".into());
        rows.push(vec![format!("{:?}", t.lift), split, t.value.to_string()]);
    }
    let mut text = table::render(&rows);
    text.push_str(&format!("\ninvariant ({}, degree {}): {}\n", p.label(), a.degree, res.value));
    Ok((res.to_json(), text))
}

fn run_series(a: &SeriesArgs) -> Outcome {
    if a.mode == ModeArg::Equivariant {
        return Err(Failure::Usage("series are computed in nonequivariant mode only".into()));
    }
    let p = presentation(&a.source)?;
    let ins = insertion(&a.insertion, &p)?;
    let s = generating_series_truncated(&p, &ins, &parse_q(&a.q)?, a.kappa_bound, a.dualize)?;
    let terms: Vec<Value> = s
        .terms
        .iter()
        .map(|t| {
            json!({
                "degree": t.degree,
                "kappa_pairing": t.kappa_pairing.to_string(),
                "coefficient": t.coefficient.to_string(),
                "term": pair(t.term),
            })
        })
        .collect();
    let mut rows = vec![vec!["degree".to_string(), "<d,kappa>".to_string(), "coefficient".to_string()]];
    for t in s.terms.iter().filter(|t| !num_is_zero(&t.coefficient)) {
        rows.push(vec![format!("{:?}", t.degree), t.kappa_pairing.to_string(), t.coefficient.to_string()]);
    }
    let mut text = table::render(&rows);
    text.push_str(&format!("\nseries value: {}\nlast term: {:e}\n", s.value, s.last_term));
    let value = json!({
        "value": pair(s.value),
        "terms": terms,
        "last_term": s.last_term,
        "kappa_bound": s.kappa_bound,
        "dualize": a.dualize,
    });
    Ok((value, text))
}

fn num_is_zero(q: &qmap_core::linalg::Q) -> bool {
    *q.numer() == 0.into()
}

fn run_vi(a: &ViArgs) -> Outcome {
    let p = presentation(&a.source)?;
    let mut ins = insertion(&a.insertion, &p)?;
    if a.dualize {
        ins = ins.negate_vars();
    }
    let qg = parse_q(&a.q)?;
    let qt = to_torus(&qg, &p, TorusBasis::standard(p.rank()))?;
    let at = if a.no_sigma { qt } else { sigma_shift(&qt, &p) };
    let fiber = solve_fiber(&at, &p, None)?;
    let v = vi_sum(&ins, &at, &p, None)?;
    let value = json!({
        "q": qg.iter().copied().map(pair).collect::<Vec<_>>(),
        "torus_q": at.coords().iter().copied().map(pair).collect::<Vec<_>>(),
        "sigma_applied": !a.no_sigma,
        "value": pair(v),
        "fiber_size": fiber.len(),
        "dualize": a.dualize,
    });
    let text = table::render(&[
        vec!["quantity".to_string(), "value".to_string()],
        vec!["torus q".into(), format!("{:?}", at.coords())],
        vec!["fiber size".into(), fiber.len().to_string()],
        vec!["VI sum".into(), v.to_string()],
    ]);
    Ok((value, text))
}

fn run_check(a: &SeriesArgs) -> Outcome {
    if a.mode == ModeArg::Equivariant {
        return Err(Failure::Usage("series are computed in nonequivariant mode only".into()));
    }
    let p = presentation(&a.source)?;
    let ins = insertion(&a.insertion, &p)?;
    let rep = vi_vs_series_check(&ins, &parse_q(&a.q)?, &p, a.kappa_bound, a.dualize)?;
    let value = serde_json::to_value(&rep).expect("report serializes");
    let c = |x: [f64; 2]| Complex64::new(x[0], x[1]).to_string();
    let text = table::render(&[
        vec!["quantity".to_string(), "value".to_string()],
        vec!["series".into(), c(rep.series_value)],
        vec!["VI at sigma(q)".into(), c(rep.vi_value)],
        vec!["abs diff".into(), format!("{:e}", rep.abs_diff)],
        vec!["rel diff".into(), format!("{:e}", rep.rel_diff)],
        vec!["last term".into(), format!("{:e}", rep.last_term)],
        vec!["kappa bound".into(), rep.kappa_bound.to_string()],
        vec!["fiber size".into(), rep.fiber_size.to_string()],
    ]);
    Ok((value, text))
}

fn run_presets() -> Outcome {
    let list = catalogue();
    let value = Value::Array(list.iter().map(|(s, d)| json!({ "syntax": s, "description": d })).collect());
    let mut rows = vec![vec!["syntax".to_string(), "description".to_string()]];
    rows.extend(list.iter().map(|(s, d)| vec![s.to_string(), d.to_string()]));
    Ok((value, table::render(&rows)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({ "kind": "usage", "message": e.to_string() }));
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Invariant(a) => run_invariant(a, false),
        Command::Explain(a) => run_invariant(a, true),
        Command::Series(a) => run_series(a),
        Command::Vi(a) => run_vi(a),
        Command::Check(a) => run_check(a),
        Command::Presets => run_presets(),
    };
    match outcome {
        Ok((value, text)) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&value).expect("json") + "\n",
                Format::Table => text,
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", json!({ "kind": "usage", "message": msg }));
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("{}", json!({ "kind": e.kind(), "message": e.to_string() }));
            ExitCode::from(1)
        }
    }
}
