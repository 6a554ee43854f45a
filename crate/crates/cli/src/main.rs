use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use haarent::entropy::{self, EntropyValue};
use haarent::groups::{haar, Group};
use haarent::measure::{self, MeasurableSet, Measure};
use haarent::verifier::{self, Summary, VerificationReport};
use haarent::{dsl, maxent, specfile, supnorm, Error, Integrator, DEFAULT_TOL};

/// Relative entropies with Haar references, and a numeric verification suite.
#[derive(Parser, Debug)]
#[command(name = "haarent", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Tolerance for checks
    #[arg(long, global = true, env = "HAARENT_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write results here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Form {
    Finite,
    Prob,
    Weight,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropy of a measure relative to a reference over a set
    Entropy(EntropyArgs),
    /// Sup-normalize measures against a reference
    Supnorm(SupnormArgs),
    /// Run claim checks on seeded random instances
    Verify(VerifyArgs),
    /// Reproduce the worked examples
    Examples,
    /// Maximize discrete entropy by projected gradient ascent
    Maxent(MaxentArgs),
}

#[derive(Args, Debug)]
struct Sources {
    /// Measure spec file (JSON)
    #[arg(long)]
    measure: Vec<PathBuf>,
    /// Reference measure spec file (JSON)
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Group descriptor such as Z6, D4, S3, R+add:[0,10], R*mul:[0.1,10], circle;
    /// its Haar measure is the default measure and reference
    #[arg(long)]
    group: Option<String>,
    /// Set as "[a,b]∪[c,d]" or "{1,3,5}"; defaults to the whole space
    #[arg(long)]
    set: Option<String>,
    /// Atom set of a subgroup of --group, used as the set
    #[arg(long)]
    subgroup: Option<String>,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    #[command(flatten)]
    src: Sources,
    /// Entropy functional
    #[arg(long, value_enum, default_value_t = Form::Finite)]
    form: Form,
}

#[derive(Args, Debug)]
struct SupnormArgs {
    #[command(flatten)]
    src: Sources,
    /// Common supremum after scaling
    #[arg(long, default_value_t = 1.0)]
    target: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run every claim and the worked examples
    #[arg(long, conflicts_with = "claim")]
    all: bool,
    /// Claim id to run (repeatable)
    #[arg(long)]
    claim: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    /// List the catalog and exit
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct MaxentArgs {
    /// Number of atoms (3 when neither this nor --weights is given)
    #[arg(long)]
    n: Option<usize>,
    /// Total mass of the simplex
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 5000)]
    iters: usize,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reference weights "1,2,3"; counting measure when omitted
    #[arg(long)]
    weights: Option<String>,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric error: {m}");
            ExitCode::from(3)
        }
    }
}

/// Ok(false) means a check failed.
fn run(cli: Cli) -> Result<bool, Failure> {
    let c = &cli.common;
    if !(c.tol > 0.0 && c.tol.is_finite()) {
        return Err(usage(format!("--tol must be positive, got {}", c.tol)));
    }
    let (text, ok) = match &cli.command {
        Command::Entropy(a) => (entropy_cmd(a, c.format)?, true),
        Command::Supnorm(a) => supnorm_cmd(a, c)?,
        Command::Verify(a) => verify_cmd(a, c)?,
        Command::Examples => {
            let reports = verifier::run_examples();
            let ok = reports.iter().all(|r| r.passed);
            (render_reports(&reports, c.format)?, ok)
        }
        Command::Maxent(a) => (maxent_cmd(a, c.format)?, true),
    };
    emit(&text, c.output.as_deref())?;
    Ok(ok)
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    let res = match path {
        Some(p) => File::create(p).and_then(|mut f| f.write_all(text.as_bytes())),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| usage(format!("cannot write output: {e}")))
}

fn load(path: &Path) -> Result<Measure, Failure> {
    specfile::load(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

struct Loaded {
    measures: Vec<Measure>,
    reference: Measure,
    set: MeasurableSet,
    group: Option<Group>,
}

fn load_sources(src: &Sources, needed: usize) -> Result<Loaded, Failure> {
    let group = match &src.group {
        Some(g) => Some(g.parse::<Group>().map_err(|e| usage(format!("--group: {e}")))?),
        None => None,
    };
    let haar_measure = match &group {
        Some(g) => Some(haar(g, 1.0)?.measure()),
        None => None,
    };
    let reference = match (&src.reference, &haar_measure) {
        (Some(p), _) => load(p)?,
        (None, Some(h)) => h.clone(),
        (None, None) => return Err(usage("--reference or --group is required")),
    };
    let mut measures = src.measure.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    if measures.is_empty() {
        match &haar_measure {
            Some(h) => measures.push(h.clone()),
            None => return Err(usage("--measure is required without --group")),
        }
    }
    if measures.len() > needed {
        return Err(usage(format!("at most {needed} --measure given, got {}", measures.len())));
    }
    let space = reference.space().clone();
    let set = match (&src.set, &src.subgroup) {
        (Some(_), Some(_)) => return Err(usage("--set and --subgroup are exclusive")),
        (Some(s), None) => dsl::parse_set(s, &space).map_err(|e| usage(format!("--set: {e}")))?,
        (None, Some(s)) => {
            let g = group.as_ref().ok_or_else(|| usage("--subgroup needs --group"))?;
            let set = dsl::parse_set(s, &space).map_err(|e| usage(format!("--subgroup: {e}")))?;
            let MeasurableSet::Atoms(idx) = &set else {
                return Err(usage("--subgroup must be an atom set"));
            };
            let elements: Vec<usize> = idx.iter().copied().collect();
            if !g.cayley()?.is_subgroup(&elements) {
                return Err(usage(format!("{s} is not a subgroup of {g}")));
            }
            set
        }
        (None, None) => space.full_set(),
    };
    Ok(Loaded { measures, reference, set, group })
}

fn entropy_cmd(a: &EntropyArgs, format: Format) -> Result<String, Failure> {
    let l = load_sources(&a.src, 1)?;
    let cfg = Integrator::default();
    let m = &l.measures[0];
    let v: EntropyValue = match a.form {
        Form::Finite => entropy::entropy_finite(m, &l.reference, &l.set, &cfg)?,
        Form::Prob => entropy::entropy_prob(m, &l.reference, &l.set, &cfg)?,
        Form::Weight => {
            let phi = measure::weight_of(m, &l.reference)?;
            entropy::entropy_weight(&phi, &l.reference, &l.set, &cfg)?
        }
    };
    let form = format!("{:?}", v.form);
    Ok(match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&v).expect("serializes")),
        Format::Csv => format!("nats,form,mass\n{:e},{form},{:e}\n", v.nats, v.mass),
        Format::Table => format!(
            "measure    {}\nreference  {}\nset        {}\nform       {form}\nmass       {}\nnats       {}\n",
            m.label(),
            l.reference.label(),
            l.set,
            v.mass,
            v.nats
        ),
    })
}

fn supnorm_cmd(a: &SupnormArgs, c: &Common) -> Result<(String, bool), Failure> {
    let l = load_sources(&a.src, 2)?;
    let full = l.reference.space().full_set();
    let mut rows: Vec<(String, String)> = Vec::new();
    let mut doc = serde_json::Map::new();
    let mut ok = true;
    for m in &l.measures {
        let (sup, at) = supnorm::sup_density_with_witness(m, &l.reference, &full)?;
        let info = supnorm::is_information_measure(m, &l.reference, &full, supnorm::SUP_TOL)?;
        rows.push((format!("sup d{}/dref", m.label()), sup.to_string()));
        rows.push((format!("{} is information measure", m.label()), info.to_string()));
        doc.insert(m.label().to_string(), json!({"sup": sup, "achieved_at": at, "information": info}));
    }
    if l.measures.len() == 2 {
        let (_, _, rep) = supnorm::sup_normalize(&l.measures[0], &l.measures[1], &l.reference, &full, a.target)?;
        rows.push(("c".into(), rep.c.to_string()));
        rows.push(("scale applied".into(), format!("{}, {}", rep.scale_applied.0, rep.scale_applied.1)));
        doc.insert("normalization".into(), serde_json::to_value(&rep).expect("serializes"));
    }
    let mut reports = Vec::new();
    if let (Some(g), true) = (&l.group, a.src.set.is_some() || a.src.subgroup.is_some()) {
        let samples = supnorm::sample_translations(g, &l.set, supnorm::DEFAULT_SAMPLES)?;
        for m in &l.measures {
            let r = supnorm::check_translate_bound(m, &l.reference, g, &l.set, &samples, c.tol)?;
            ok &= r.passed || r.is_skipped();
            reports.push(r);
        }
    }
    let text = match c.format {
        Format::Json => {
            doc.insert("schema".into(), json!(verifier::REPORT_SCHEMA));
            doc.insert("reports".into(), serde_json::to_value(&reports).expect("serializes"));
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes"))
        }
        Format::Csv => csv_reports(&reports)?,
        Format::Table => {
            let mut s = String::new();
            for (k, v) in &rows {
                s.push_str(&format!("{k:<40} {v}\n"));
            }
            for r in &reports {
                s.push_str(&report_line(r));
            }
            s
        }
    };
    Ok((text, ok))
}

fn verify_cmd(a: &VerifyArgs, c: &Common) -> Result<(String, bool), Failure> {
    if a.list {
        let mut s = String::new();
        for cl in verifier::catalog() {
            s.push_str(&format!("{:<26} {}\n", cl.id, cl.statement));
        }
        return Ok((s, true));
    }
    let summary = if a.all {
        verifier::run_all(a.seed, a.trials, c.tol)?
    } else if !a.claim.is_empty() {
        let mut reports = Vec::new();
        for id in &a.claim {
            reports.extend(verifier::verify(id, a.trials, a.seed, c.tol)?);
        }
        Summary::from_reports(reports, a.seed, a.trials, c.tol)
    } else {
        return Err(usage("verify needs --all or --claim <id>"));
    };
    if a.trials == 0 {
        eprintln!("warning: --trials 0, every claim was skipped");
    }
    let text = match c.format {
        Format::Json => format!("{}\n", verifier::summary_to_json(&summary)),
        Format::Csv => csv_reports(&summary.reports)?,
        Format::Table => summary_table(&summary),
    };
    Ok((text, summary.all_passed()))
}

fn summary_table(s: &Summary) -> String {
    let mut out = format!("{:<30} {:>6} {:>6} {:>7} {:>14}\n", "claim", "pass", "fail", "skipped", "worst slack");
    for c in &s.claims {
        let slack = c.worst_slack.map_or("-".to_string(), |w| format!("{w:.3e}"));
        out.push_str(&format!(
            "{:<30} {:>6} {:>6} {:>7} {:>14}\n",
            c.claim_id, c.passed, c.failed, c.skipped, slack
        ));
    }
    out.push_str(&format!(
        "total: {} passed, {} failed, {} skipped (seed {}, trials {}, tol {:e})\n",
        s.passed, s.failed, s.skipped, s.seed, s.trials, s.tolerance
    ));
    for r in s.reports.iter().filter(|r| !r.passed && !r.is_skipped()).take(20) {
        out.push_str(&report_line(r));
    }
    out
}

fn report_line(r: &VerificationReport) -> String {
    let status = match r.status {
        verifier::Status::Pass => "PASS",
        verifier::Status::Fail => "FAIL",
        verifier::Status::Skipped => "SKIP",
    };
    format!(
        "{status} {} [{}] trial {}: lhs={} rhs={} slack={:e} {}\n",
        r.claim_id, r.check, r.trial, r.lhs, r.rhs, r.slack, r.scope
    )
}

fn csv_reports(reports: &[VerificationReport]) -> Result<String, Failure> {
    let mut buf = Vec::new();
    verifier::write_csv(reports, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

fn render_reports(reports: &[VerificationReport], format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => format!("{}\n", verifier::reports_to_json(reports)),
        Format::Csv => csv_reports(reports)?,
        Format::Table => reports.iter().map(report_line).collect(),
    })
}

fn maxent_cmd(a: &MaxentArgs, format: Format) -> Result<String, Failure> {
    let nu: Vec<f64> = match &a.weights {
        Some(w) => w
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| usage(format!("--weights: '{t}': {e}"))))
            .collect::<Result<_, _>>()?,
        None => vec![1.0; a.n.unwrap_or(3)],
    };
    if let Some(n) = a.n.filter(|&n| n != nu.len()) {
        return Err(usage(format!("--n {n} disagrees with {} weights", nu.len())));
    }
    if nu.is_empty() {
        return Err(usage("need at least one atom"));
    }
    let (p, s) = maxent::maximize_entropy(&nu, a.mass, a.iters, a.step, a.seed)?;
    let target = maxent::maximizer(&nu, a.mass);
    let dist = p.sup_distance(&target);
    Ok(match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "weights": p.weights,
                "entropy": s,
                "maximizer": target,
                "sup_distance": dist,
            }))
            .expect("serializes")
        ),
        Format::Csv => {
            let mut out = String::from("atom,weight,maximizer\n");
            for (i, (w, t)) in p.weights.iter().zip(&target).enumerate() {
                out.push_str(&format!("{i},{w:e},{t:e}\n"));
            }
            out
        }
        Format::Table => {
            let mut out = format!("entropy       {s}\nsup distance  {dist:e}\n");
            for (i, (w, t)) in p.weights.iter().zip(&target).enumerate() {
                out.push_str(&format!("{i:>4}  {w:<24} {t}\n"));
            }
            out
        }
    })
}
