use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quantagg::builtin::{classify_rule, parse_quantale_selector, QuantaleSpec, RuleSelector};
use quantagg::continuous::{DdfQuantale, Lawvere, StepDdf, TNorm};
use quantagg::morphisms::brute::{default_roster, verify_equivalences, DEFAULT_NMAX};
use quantagg::morphisms::lift::lift_rule;
use quantagg::morphisms::{classify_table, parse_map_file, qpm_aggregator_verdict, NumericRule};
use quantagg::quantale::{parse_raw_quantale, render_quantale_file, FiniteQuantale};
use quantagg::sampling::{DEFAULT_SAMPLES, DEFAULT_SEED};
use quantagg::vcat::{
    aggregate_category, diagonal_category, fuzzy_bridge, product_category, qpm_bridge, DistanceMatrix,
    FuzzyMetricFamily, VCategory, VcViolation, DEFAULT_POINT_CAP,
};
use quantagg::continuous::ddf::InfinityRule;

#[derive(Parser)]
#[command(name = "quantagg", version, about = "Aggregation functions between quantales")]
struct Cli {
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random samples per sampled check.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Largest category size for brute-force enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_NMAX)]
    nmax: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Product,
    Diagonal,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a quantale file.
    CheckQuantale { path: PathBuf },
    /// Classify a map between quantales.
    Classify {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Table map file with `src -> dst` lines.
        #[arg(long, conflicts_with = "rule", required_unless_present = "rule")]
        map: Option<PathBuf>,
        /// sum, max, min, wsum:w1,..., proj:i, prod, massanet-valero,
        /// first-zero, ext:RULE or threshold-half.
        #[arg(long)]
        rule: Option<String>,
    },
    /// Aggregate distance matrices (.csv) or fuzzy families (.json).
    Aggregate {
        #[arg(long)]
        rule: String,
        #[arg(long, value_enum, default_value_t = Mode::Diagonal)]
        mode: Mode,
        /// t-norm for fuzzy families that do not name one.
        #[arg(long, default_value = "min")]
        tnorm: String,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Check the numeric criteria for aggregating quasi-(pseudo)metrics.
    AggregatorVerdict {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// Compare every characterization on every map between small quantales.
    VerifyTheorems {
        /// `FROM=TO` selector pairs; the built-in roster when omitted.
        #[arg(long = "pair")]
        pairs: Vec<String>,
    },
    /// Convolve DDF files.
    Convolve {
        #[arg(long, default_value = "min")]
        tnorm: String,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Print a builtin quantale in the quantale file format.
    DumpQuantale { selector: String },
}

/// Exit 2: unusable input.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// What a command produced and whether the checked property held.
struct Outcome {
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.out.as_deref(), &outcome.text) {
                eprintln!("error: {}", e.0);
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::CheckQuantale { path } => check_quantale(cli, path),
        Command::Classify { from, to, map, rule } => classify(cli, from, to, map.as_deref(), rule.as_deref()),
        Command::Aggregate {
            rule,
            mode,
            tnorm,
            inputs,
        } => aggregate(cli, rule, *mode, tnorm, inputs),
        Command::AggregatorVerdict { rule, arity } => {
            let rule: NumericRule = rule.parse()?;
            let r = qpm_aggregator_verdict(&rule, *arity, cli.samples, cli.seed)?;
            let text = match cli.format {
                Format::Json => pretty(&serde_json::to_value(&r)?),
                Format::Text => {
                    let mut s = format!("{} on [0,∞]^{}\n", r.rule, r.arity);
                    for (name, v) in [
                        ("isotone", &r.isotone),
                        ("subadditive", &r.subadditive),
                        ("F(0) = 0", &r.zero_at_zero),
                        ("F⁻¹(0) = {0}", &r.zero_fiber_singleton),
                        ("quasi-pseudometric aggregator", &r.quasi_pseudometric),
                        ("quasi-metric aggregator", &r.quasi_metric),
                    ] {
                        s.push_str(&format!("{name:<32} {v}\n"));
                    }
                    if let Some(c) = &r.construction {
                        s.push_str("three-point construction:\n");
                        for (i, d) in c.coordinates.iter().enumerate() {
                            s.push_str(&format!("d{}:\n{}", i + 1, d.to_csv()));
                        }
                        s.push_str(&format!("aggregate:\n{}", c.aggregate.to_csv()));
                        if let Some(v) = &c.violation {
                            s.push_str(&format!("{}\n", violation_text(v)));
                        }
                    }
                    s
                }
            };
            Ok(Outcome {
                text,
                ok: r.quasi_pseudometric.holds(),
            })
        }
        Command::VerifyTheorems { pairs } => verify(cli, pairs),
        Command::Convolve { tnorm, inputs } => {
            let tnorm: TNorm = tnorm.parse()?;
            let mut acc = StepDdf::unit();
            for p in inputs {
                let f = StepDdf::from_json_str(&read(p)?, InfinityRule::Strict)
                    .map_err(|e| Failure(format!("{}: {e}", p.display())))?;
                acc = acc.convolve(&f, tnorm);
            }
            Ok(Outcome {
                text: acc.to_json_string(),
                ok: true,
            })
        }
        Command::DumpQuantale { selector } => match parse_quantale_selector(selector)? {
            QuantaleSpec::Finite(q) => Ok(Outcome {
                text: render_quantale_file(&q),
                ok: true,
            }),
            other => Err(Failure(format!("{other} has no finite table"))),
        },
    }
}

fn check_quantale(cli: &Cli, path: &Path) -> Result<Outcome, Failure> {
    let raw = parse_raw_quantale(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let report = raw.validate().map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let text = match cli.format {
        Format::Json => pretty(&serde_json::to_value(&report)?),
        Format::Text => report.to_string(),
    };
    Ok(Outcome {
        text,
        ok: report.passed,
    })
}

fn finite(sel: &str) -> Result<FiniteQuantale, Failure> {
    match parse_quantale_selector(sel)? {
        QuantaleSpec::Finite(q) => Ok(q),
        other => Err(Failure(format!("`{sel}` ({other}) is not finite"))),
    }
}

fn classify(
    cli: &Cli,
    from: &str,
    to: &str,
    map: Option<&Path>,
    rule: Option<&str>,
) -> Result<Outcome, Failure> {
    let report = match (map, rule) {
        (Some(path), _) => {
            let (v, w) = (finite(from)?, finite(to)?);
            let table = parse_map_file(&read(path)?, &v, &w)?;
            classify_table(&table, &v, &w)?
        }
        (None, Some(rule)) => {
            let rule: RuleSelector = rule.parse()?;
            let v = parse_quantale_selector(from)?;
            let w = parse_quantale_selector(to)?;
            classify_rule(&rule, &v, &w, cli.samples, cli.seed)?
        }
        (None, None) => return Err(Failure("give --map or --rule".into())),
    };
    let text = match cli.format {
        Format::Json => pretty(&report.to_json()),
        Format::Text => report.to_text(),
    };
    Ok(Outcome {
        text,
        ok: report.preserving.holds(),
    })
}

fn violation_text(v: &VcViolation) -> String {
    format!(
        "{:?} fails at ({}): {} ⋠ {}",
        v.axiom,
        v.points.join(", "),
        v.lhs,
        v.rhs
    )
    .replace("Vc", "VC")
}

fn combine<Q: quantagg::Quantale + Clone>(
    cats: &[VCategory<Q>],
    mode: Mode,
) -> Result<VCategory<quantagg::quantale::Product<Q>>, Failure> {
    Ok(match mode {
        Mode::Product => product_category(cats, DEFAULT_POINT_CAP)?,
        Mode::Diagonal => diagonal_category(cats)?,
    })
}

fn aggregate(cli: &Cli, rule: &str, mode: Mode, tnorm: &str, inputs: &[PathBuf]) -> Result<Outcome, Failure> {
    let rule: NumericRule = rule.parse()?;
    rule.check_arity(inputs.len())?;
    let fuzzy = inputs
        .iter()
        .all(|p| p.extension().is_some_and(|e| e == "json"));
    if !fuzzy && inputs.iter().any(|p| p.extension().is_some_and(|e| e == "json")) {
        return Err(Failure("cannot mix distance matrices and fuzzy families".into()));
    }
    let (result, rendered, violations) = if fuzzy {
        let default: TNorm = tnorm.parse()?;
        let mut cats = Vec::new();
        for p in inputs {
            let base = p.parent().unwrap_or(Path::new("."));
            let fam = FuzzyMetricFamily::from_json_str(&read(p)?, default, base)
                .map_err(|e| Failure(format!("{}: {e}", p.display())))?;
            cats.push(fuzzy_bridge(&fam).map_err(|e| Failure(format!("{}: {e}", p.display())))?);
        }
        let t = cats[0].quantale.tnorm;
        if cats.iter().any(|c| c.quantale.tnorm != t) {
            return Err(Failure("fuzzy families use different t-norms".into()));
        }
        let joined = combine(&cats, mode)?;
        let (out, violations) = aggregate_category(lift_rule(&rule), &joined, DdfQuantale::new(t))?;
        let fam = FuzzyMetricFamily::from_category(&out);
        let v = fam.to_json_value();
        (v.clone(), pretty(&v), violations)
    } else {
        let mut cats = Vec::new();
        for p in inputs {
            let d = DistanceMatrix::from_csv(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
            cats.push(qpm_bridge(&d).map_err(|e| Failure(format!("{}: {e}", p.display())))?);
        }
        let joined = combine(&cats, mode)?;
        let (out, violations) =
            aggregate_category(|x: &Vec<quantagg::Ext>| rule.eval(x), &joined, Lawvere)?;
        let d = DistanceMatrix::from_category(&out);
        (serde_json::to_value(&d)?, d.to_csv(), violations)
    };
    let valid = violations.is_empty();
    let text = match (cli.format, &cli.out) {
        (Format::Json, _) => pretty(&json!({
            "rule": rule.to_string(),
            "valid": valid,
            "violations": violations,
            "result": result,
        })),
        (Format::Text, _) => {
            let mut s = rendered;
            match violations.first() {
                None => s.push_str("# valid\n"),
                Some(v) => s.push_str(&format!("# invalid: {}\n", violation_text(v))),
            }
            s
        }
    };
    Ok(Outcome { text, ok: valid })
}

fn verify(cli: &Cli, pairs: &[String]) -> Result<Outcome, Failure> {
    let roster = if pairs.is_empty() {
        default_roster()
    } else {
        pairs
            .iter()
            .map(|p| {
                let (a, b) = p
                    .split_once('=')
                    .ok_or_else(|| Failure(format!("pair `{p}` is not of the form FROM=TO")))?;
                Ok((a.to_string(), finite(a)?, b.to_string(), finite(b)?))
            })
            .collect::<Result<Vec<_>, Failure>>()?
    };
    let mut summaries = Vec::new();
    for (a, v, b, w) in &roster {
        summaries.push(verify_equivalences(a, v, b, w, cli.nmax)?);
    }
    let ok = summaries.iter().all(|s| s.disagreements.is_empty());
    let text = match cli.format {
        Format::Json => pretty(&serde_json::to_value(&summaries)?),
        Format::Text => {
            let mut s: String = summaries.iter().map(|s| s.to_text()).collect();
            let total: usize = summaries.iter().map(|s| s.disagreements.len()).sum();
            s.push_str(&format!("total disagreements: {total}\n"));
            s
        }
    };
    Ok(Outcome { text, ok })
}
