use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use knotkernel::alexander::{alexander_polynomial_with_primes, DEFAULT_PRIMES};
use knotkernel::criteria::{analyze, CriteriaError, PrimeClass};
use knotkernel::laurent::LaurentError;
use knotkernel::recurrence::{has_integer_biinfinite, witness_sequence, AuxPolynomial, RecurrenceError};
use knotkernel::repshift::FiniteGroup;
use knotkernel::repshift::{build_sft, census_with_tol, periodic_point_count, DEFAULT_TOL};
use knotkernel::rscover::{abelianized_recurrence, reidemeister_schreier, stabilize, RsError};
use knotkernel::twobridge::{epsilon_sequence, family_presentation, presentation, TwoBridgeParams};
use knotkernel::words::{abelianization_invariants, canonical_weighting, parse_presentation, Presentation, Weighting, WordsError};

/// Periodic point counts are skipped above this many essential states.
const PERIODIC_COUNT_LIMIT: usize = 2000;

#[derive(Parser)]
#[command(name = "knotkernel", version, about = "Finite-index structure of the kernel of a map onto the integers")]
struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a presentation file and print its canonical form.
    Parse { file: PathBuf },
    /// Alexander polynomial and its reductions mod small primes.
    Alex {
        file: PathBuf,
        #[command(flatten)]
        opts: PresentationOpts,
    },
    /// Full report: prime-index counts, index 2, surjection onto Z, finite generation.
    #[command(alias = "analyze")]
    Criteria {
        file: PathBuf,
        #[command(flatten)]
        opts: PresentationOpts,
    },
    /// Two-bridge knot group presentation, or the family used for the kernel examples.
    Twobridge {
        #[arg(required_unless_present = "family", requires = "q")]
        p: Option<i64>,
        q: Option<i64>,
        #[arg(long, conflicts_with_all = ["p", "q"])]
        family: Option<i64>,
    },
    /// Reidemeister-Schreier presentation of the kernel as shifted templates.
    Rs {
        file: PathBuf,
        #[arg(long)]
        chi: Option<String>,
    },
    /// Census of representations of the kernel into a finite group.
    Reps {
        file: PathBuf,
        #[arg(long, required_unless_present = "table")]
        group: Option<String>,
        /// Multiplication table file: the order, then one row per element.
        #[arg(long, conflicts_with = "group")]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        max_period: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        chi: Option<String>,
    },
    /// Integer solutions of a linear recurrence extending in both directions.
    Recurrence {
        /// Coefficients a_d,...,a_0.
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        witness: Option<Vec<i64>>,
    },
}

#[derive(Args)]
struct PresentationOpts {
    /// Weighting such as `t=1,a=0`; defaults to the abelianization.
    #[arg(long)]
    chi: Option<String>,
    /// Primes for the reduction table, such as `2,3,5,7`.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
}

enum Failure {
    Parse(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Parse(_) => 2,
        }
    }
}

impl From<WordsError> for Failure {
    fn from(e: WordsError) -> Self {
        match e {
            WordsError::Parse(_) => Failure::Parse(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

macro_rules! domain_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Domain(e.to_string())
            }
        }
    )*};
}

domain_errors!(
    CriteriaError,
    knotkernel::alexander::AlexanderError,
    knotkernel::twobridge::TwoBridgeError,
    knotkernel::repshift::RepShiftError,
    knotkernel::repshift::GroupError
);

impl From<RsError> for Failure {
    fn from(e: RsError) -> Self {
        match e {
            RsError::Words(w) => w.into(),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<RecurrenceError> for Failure {
    fn from(e: RecurrenceError) -> Self {
        match e {
            RecurrenceError::Laurent(LaurentError::Parse { .. }) => Failure::Parse(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

struct Outcome {
    /// Everything the result depends on, hashed into the report.
    input: String,
    result: Value,
    text: String,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn load(file: &Path) -> Result<(String, Presentation), Failure> {
    let text = read(file)?;
    let p = parse_presentation(&text)?;
    Ok((text, p))
}

fn weighting(p: &Presentation, chi: Option<&str>) -> Result<Weighting, Failure> {
    let Some(text) = chi else { return Ok(canonical_weighting(p)?) };
    let mut values = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (g, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::Parse(format!("--chi entry {item:?} is not of the form name=value")))?;
        let v: i64 = v.trim().parse().map_err(|_| Failure::Parse(format!("--chi value {v:?} is not an integer")))?;
        values.insert(g.trim().to_string(), v);
    }
    Ok(Weighting::new(p, values)?)
}

fn input_key(parts: &[&str]) -> String {
    parts.join("\u{0}")
}

fn cmd_parse(file: &Path) -> Result<Outcome, Failure> {
    let (text, p) = load(file)?;
    let (rank, torsion) = abelianization_invariants(&p);
    let torsion: Vec<String> = torsion.iter().map(ToString::to_string).collect();
    let mut out = format!("{p}\ndeficiency {}\nabelianization rank {rank}", p.deficiency());
    if !torsion.is_empty() {
        let _ = write!(out, ", torsion {}", torsion.join(" "));
    }
    Ok(Outcome {
        input: input_key(&[&text]),
        result: json!({
            "presentation": p.to_string(),
            "generators": p.generators(),
            "relators": p.relators().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "deficiency": p.deficiency(),
            "abelianization": { "rank": rank, "torsion": torsion },
        }),
        text: out,
    })
}

fn primes_of(opts: &PresentationOpts) -> Vec<u64> {
    opts.primes.clone().unwrap_or_else(|| DEFAULT_PRIMES.to_vec())
}

fn cmd_alex(file: &Path, opts: &PresentationOpts) -> Result<Outcome, Failure> {
    let (text, p) = load(file)?;
    let chi = weighting(&p, opts.chi.as_deref())?;
    let primes = primes_of(opts);
    let res = alexander_polynomial_with_primes(&p, &chi, &primes)?;
    let mut out = format!("Delta = {}\n", res.delta);
    for (q, rec) in &res.mod_p_table {
        let _ = writeln!(out, "p = {q}: Delta mod p = {}, d = {}", rec.reduction, span_text(&to_value(&rec.d)));
    }
    Ok(Outcome {
        input: input_key(&[&text, &to_value(&chi).to_string(), &format!("{primes:?}")]),
        result: json!({ "weighting": to_value(&chi), "alexander": to_value(&res) }),
        text: out.trim_end().to_string(),
    })
}

fn span_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn cmd_criteria(file: &Path, opts: &PresentationOpts) -> Result<Outcome, Failure> {
    let (text, p) = load(file)?;
    let chi = weighting(&p, opts.chi.as_deref())?;
    let primes = primes_of(opts);
    let report = analyze(&p, &chi, &primes)?;
    let mut out = format!("Delta = {}\nbeta1(Q) of kernel = {}\n", report.delta, span_text(&to_value(&report.beta1_Q)));
    let _ = writeln!(out, "{:>5} {:>10} {:>12} {:>12}  class", "p", "d(p)", "r_p", "n_p");
    for r in &report.primes {
        let class = match &r.classification {
            PrimeClass::None => "none".to_string(),
            PrimeClass::Finite(n) => format!("finite ({})", span_text(&to_value(n))),
            PrimeClass::Infinite => "infinite".to_string(),
        };
        let _ = writeln!(
            out,
            "{:>5} {:>10} {:>12} {:>12}  {class}",
            r.p,
            span_text(&to_value(&r.d)),
            span_text(&to_value(&r.r_p)),
            span_text(&to_value(&r.n_p)),
        );
    }
    let surj = &report.surjects_to_Z;
    let _ = writeln!(out, "index 2 subgroups: {}", report.index2);
    let _ = write!(out, "surjects onto Z: {}", surj.answer);
    if let Some(w) = &surj.witness {
        let _ = write!(out, " (witness {})", span_text(&to_value(w)));
    }
    let k = &report.kervaire;
    let _ = write!(
        out,
        "\nlargeness flag: {}\nkernel finitely generated: {:?}\nknot-group conditions: H1 = Z {}, deficiency one {}, weight-one witness {}, H2 = 0 {}",
        report.large_flag,
        report.kernel_fg,
        k.h1_is_Z,
        k.deficiency_one,
        k.weight_one_witness.as_deref().unwrap_or("unknown"),
        k.h2_zero_inferred,
    );
    Ok(Outcome {
        input: input_key(&[&text, &to_value(&chi).to_string(), &format!("{primes:?}")]),
        result: json!({ "weighting": to_value(&chi), "report": to_value(&report) }),
        text: out,
    })
}

fn cmd_twobridge(p: Option<i64>, q: Option<i64>, family: Option<i64>) -> Result<Outcome, Failure> {
    if let Some(n) = family {
        let pres = family_presentation(n)?;
        return Ok(Outcome {
            input: format!("family {n}"),
            result: json!({ "family": n, "presentation": pres.to_string() }),
            text: pres.to_string(),
        });
    }
    let (p, q) = (p.expect("clap requires P"), q.expect("clap requires Q"));
    let params = TwoBridgeParams::new(p, q)?;
    let pres = presentation(params);
    Ok(Outcome {
        input: format!("{p} {q}"),
        result: json!({
            "p": p,
            "q": q,
            "epsilon": epsilon_sequence(params),
            "presentation": pres.to_string(),
        }),
        text: pres.to_string(),
    })
}

/// Makes the weighting 1 on one generator and 0 elsewhere when it is not already.
fn shift_ready(p: Presentation, chi: Weighting) -> Result<(Presentation, Weighting, bool), Failure> {
    match reidemeister_schreier(&p, &chi) {
        Err(RsError::UnsupportedWeighting) => {
            let (q, psi) = stabilize(&p, &chi)?;
            Ok((q, psi, true))
        }
        Err(e) => Err(e.into()),
        Ok(_) => Ok((p, chi, false)),
    }
}

fn cmd_rs(file: &Path, chi: Option<&str>) -> Result<Outcome, Failure> {
    let (text, p) = load(file)?;
    let chi = weighting(&p, chi)?;
    let key = input_key(&[&text, &to_value(&chi).to_string()]);
    let (p, chi, stabilized) = shift_ready(p, chi)?;
    let sp = reidemeister_schreier(&p, &chi)?;
    let rows = abelianized_recurrence(&sp);
    let mut out = String::new();
    if stabilized {
        let _ = writeln!(out, "rewritten as {p}");
    }
    let _ = writeln!(out, "stable letter {}, symbols {}, width {}", sp.stable, sp.symbols.join(" "), sp.width());
    for t in &sp.templates {
        let _ = writeln!(out, "  {t}");
    }
    for r in &rows {
        let _ = writeln!(out, "template {} in {}: {}", r.template, r.symbol, r.polynomial());
    }
    let polys: Vec<String> = rows.iter().map(|r| r.polynomial().to_string()).collect();
    Ok(Outcome {
        input: key,
        result: json!({
            "presentation": p.to_string(),
            "stabilized": stabilized,
            "shift": to_value(&sp),
            "width": sp.width(),
            "recurrence": to_value(&rows),
            "recurrence_polynomials": polys,
        }),
        text: out.trim_end().to_string(),
    })
}

struct RepsArgs<'a> {
    file: &'a Path,
    group: Option<&'a str>,
    table: Option<&'a Path>,
    max_period: usize,
    tol: f64,
    chi: Option<&'a str>,
}

fn cmd_reps(a: RepsArgs<'_>) -> Result<Outcome, Failure> {
    let (text, p) = load(a.file)?;
    let (group, group_key) = match (a.group, a.table) {
        (_, Some(path)) => {
            let t = read(path)?;
            let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table").to_string();
            let g = FiniteGroup::from_table_text(&name, &t).map_err(|e| Failure::Parse(e.to_string()))?;
            (g, t)
        }
        (Some(name), None) => (FiniteGroup::by_name(name)?, name.to_string()),
        (None, None) => unreachable!("clap requires --group or --table"),
    };
    if a.max_period == 0 {
        return Err(Failure::Domain("--max-period must be at least 1".into()));
    }
    if !(a.tol > 0.0 && a.tol < 1.0) {
        return Err(Failure::Domain(format!("--tol {} must lie strictly between 0 and 1", a.tol)));
    }
    let chi = weighting(&p, a.chi)?;
    let key = input_key(&[
        &text,
        &group_key,
        &to_value(&chi).to_string(),
        &a.max_period.to_string(),
        &a.tol.to_string(),
    ]);
    let (p, chi, stabilized) = shift_ready(p, chi)?;
    let sp = reidemeister_schreier(&p, &chi)?;
    let graph = build_sft(&sp, &group)?;
    let census = census_with_tol(&graph, a.tol);
    let periodic: Option<Vec<String>> = (graph.essential_count() <= PERIODIC_COUNT_LIMIT)
        .then(|| (1..=a.max_period).map(|n| periodic_point_count(&graph, n).to_string()).collect());
    let mut out = format!(
        "group {}, window {}, templates {}\nstates {}, essential {}\nclassification {:?}\nentropy {:.9}",
        group.name(),
        graph.window(),
        sp.templates.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        census.state_count,
        census.essential_count,
        census.classification,
        census.entropy,
    );
    if let Some(counts) = &periodic {
        let _ = write!(out, "\nperiodic points for n = 1..{}: {}", a.max_period, counts.join(" "));
    }
    Ok(Outcome {
        input: key,
        result: json!({
            "presentation": p.to_string(),
            "stabilized": stabilized,
            "census": to_value(&census),
            "periodic_points": periodic,
        }),
        text: out,
    })
}

fn cmd_recurrence(coeffs: &str, witness: Option<&[i64]>) -> Result<Outcome, Failure> {
    let f = AuxPolynomial::parse(coeffs)?;
    let verdict = has_integer_biinfinite(&f);
    let mut out = format!("f = {f}\ninteger biinfinite solution: {}", verdict.answer);
    if let Some(g) = &verdict.witness_factor {
        let _ = write!(out, " (factor {g})");
    }
    let window = match witness {
        Some(&[lo, hi]) => {
            let w = witness_sequence(&f, lo, hi)?;
            let vals: Vec<String> = w.values.iter().map(ToString::to_string).collect();
            let _ = write!(out, "\nx[{lo}..={hi}] = {}", vals.join(" "));
            Some(to_value(&w))
        }
        _ => None,
    };
    Ok(Outcome {
        input: input_key(&[&f.to_string(), &format!("{witness:?}")]),
        result: json!({
            "polynomial": f.to_string(),
            "answer": verdict.answer,
            "witness_factor": to_value(&verdict.witness_factor),
            "window": window,
        }),
        text: out,
    })
}

fn run(cli: &Cli) -> Result<(&'static str, Outcome), Failure> {
    Ok(match &cli.command {
        Command::Parse { file } => ("parse", cmd_parse(file)?),
        Command::Alex { file, opts } => ("alex", cmd_alex(file, opts)?),
        Command::Criteria { file, opts } => ("criteria", cmd_criteria(file, opts)?),
        Command::Twobridge { p, q, family } => ("twobridge", cmd_twobridge(*p, *q, *family)?),
        Command::Rs { file, chi } => ("rs", cmd_rs(file, chi.as_deref())?),
        Command::Reps { file, group, table, max_period, tol, chi } => (
            "reps",
            cmd_reps(RepsArgs {
                file,
                group: group.as_deref(),
                table: table.as_deref(),
                max_period: *max_period,
                tol: *tol,
                chi: chi.as_deref(),
            })?,
        ),
        Command::Recurrence { coeffs, witness } => ("recurrence", cmd_recurrence(coeffs, witness.as_deref())?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((command, outcome)) => {
            if cli.json {
                let report = json!({
                    "command": command,
                    "input_digest": hex::encode(Sha256::digest(format!("{command}\u{0}{}", outcome.input))),
                    "version": env!("CARGO_PKG_VERSION"),
                    "result": outcome.result,
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("json values serialize"));
            } else {
                println!("{}", outcome.text);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Parse(m) => eprintln!("parse error: {m}"),
                Failure::Domain(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
