//! Command-line front end: `mine`, `score`, `compare`, `generate`, `curve`.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::apriori::{self, MineOptions, Thresholds, DEFAULT_MAX_LEN};
use crate::error::Error;
use crate::measures::{Measure, SupportTriple};
use crate::randgen::{self, RandomSpec};
use crate::rankcompare::{tau_b, tau_b_by_decile, DECILES};
use crate::report::{
    fmt_num, read_support_rows, ComparisonRow, ComparisonTable, CurveTable, Format, Metadata,
    RuleRow, RuleTable,
};
use crate::standardize::{lift_bound_curve, MeasureReport};
use crate::transactions::{parse_basket, parse_dense_csv, Delimiter, TransactionSet};

#[derive(Debug, Parser)]
#[command(
    name = "rulestd",
    version,
    about = "Mine association rules and score them with raw and standardized measures"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine rules from a transaction file and score them
    Mine(MineArgs),
    /// Score externally supplied support rows
    Score(ScoreArgs),
    /// Tau-b between raw and standardized rankings of a scored rule file
    Compare(CompareArgs),
    /// Generate random transactions with independent items
    Generate(GenerateArgs),
    /// Lift bound curves for P(A) = P(B)
    Curve(CurveArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    /// Minimum support (defaults to 1/n)
    #[arg(long)]
    pub min_support: Option<f64>,
    /// Minimum confidence (defaults to 1/n)
    #[arg(long)]
    pub min_confidence: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format; defaults to json for `.json` outputs and csv otherwise
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout when omitted)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        self.format
            .or_else(|| self.output.as_deref().map(Format::from_path))
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Args)]
pub struct MineArgs {
    /// Basket file (or a 0/1 CSV matrix with --dense)
    pub input: PathBuf,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
    pub max_len: usize,
    /// Largest consequent size to emit
    #[arg(long)]
    pub consequent_size: Option<usize>,
    /// Item delimiter: a single character or "whitespace"
    #[arg(long, default_value = "whitespace")]
    pub delimiter: String,
    /// Read the input as a dense 0/1 CSV matrix
    #[arg(long)]
    pub dense: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// CSV or JSON rows with p_a, p_b, p_ab (or support) and optional n
    pub input: PathBuf,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// Stop at the first row whose measures cannot all be scored
    #[arg(long)]
    pub fail_fast: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Scored rule file written by `mine` or `score`
    pub input: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub transactions: usize,
    #[arg(long)]
    pub items: usize,
    #[arg(long, default_value_t = 0.01)]
    pub prob: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 0.2)]
    pub from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub to: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn base_metadata(command: &str) -> Metadata {
    let mut m = Metadata::new();
    m.insert("tool".into(), "rulestd".into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    m.insert("command".into(), command.into());
    m
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn read_input(path: &Path, meta: &mut Metadata) -> CliResult<Vec<u8>> {
    let bytes = std::fs::read(path).map_err(Error::from)?;
    meta.insert("input".into(), path.display().to_string());
    meta.insert("input_sha256".into(), sha256_hex(&bytes));
    Ok(bytes)
}

fn check_threshold_args(th: &ThresholdArgs) -> CliResult<()> {
    for (flag, v) in [
        ("--min-support", th.min_support),
        ("--min-confidence", th.min_confidence),
    ] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0 && v <= 1.0) {
                return Err(CliError::Usage(format!(
                    "{flag} must lie in (0, 1], got {v}"
                )));
            }
        }
    }
    Ok(())
}

fn record_thresholds(meta: &mut Metadata, args: &ThresholdArgs, th: &Thresholds) {
    let source = |given: Option<f64>| {
        if given.is_some() {
            "given"
        } else {
            "default 1/n"
        }
    };
    meta.insert("min_support".into(), fmt_num(th.sigma));
    meta.insert("min_support_source".into(), source(args.min_support).into());
    meta.insert("min_confidence".into(), fmt_num(th.kappa));
    meta.insert(
        "min_confidence_source".into(),
        source(args.min_confidence).into(),
    );
}

pub fn load_transactions(
    bytes: &[u8],
    dense: bool,
    delimiter: Delimiter,
) -> crate::Result<TransactionSet> {
    if dense {
        parse_dense_csv(bytes)
    } else {
        parse_basket(bytes, delimiter)
    }
}

/// Mines, scores and orders rules for presentation.
pub fn cmd_mine(args: &MineArgs) -> CliResult<RuleTable> {
    check_threshold_args(&args.thresholds)?;
    if args.max_len == 0 {
        return Err(CliError::Usage("--max-len must be at least 1".into()));
    }
    if args.consequent_size == Some(0) {
        return Err(CliError::Usage(
            "--consequent-size must be at least 1".into(),
        ));
    }
    let delimiter: Delimiter = args
        .delimiter
        .parse()
        .map_err(|e: Error| CliError::Usage(e.to_string()))?;

    let mut meta = base_metadata("mine");
    let bytes = read_input(&args.input, &mut meta)?;
    let ts = load_transactions(&bytes, args.dense, delimiter)?;
    let n = ts.n();
    let th = Thresholds::resolve(
        args.thresholds.min_support,
        args.thresholds.min_confidence,
        n,
    )?;
    let opts = MineOptions {
        max_len: args.max_len,
        max_consequent_len: args.consequent_size,
    };
    let mut rules = apriori::mine_rules(&ts, &th, &opts)?;
    apriori::sort_for_presentation(&mut rules);

    let catalog = ts.catalog();
    let rows = rules
        .par_iter()
        .map(|r| {
            let t = r.triple()?;
            Ok(RuleRow::from_report(
                catalog.format_itemset(&r.antecedent),
                catalog.format_itemset(&r.consequent),
                Some(n as u64),
                &MeasureReport::new(&t, &th),
            ))
        })
        .collect::<crate::Result<Vec<_>>>()?;

    meta.insert("n_transactions".into(), n.to_string());
    meta.insert("n_items".into(), catalog.len().to_string());
    record_thresholds(&mut meta, &args.thresholds, &th);
    meta.insert("max_len".into(), args.max_len.to_string());
    meta.insert(
        "consequent_size".into(),
        args.consequent_size.map_or("any".into(), |c| c.to_string()),
    );
    meta.insert("n_rules".into(), rows.len().to_string());
    Ok(RuleTable {
        metadata: meta,
        rules: rows,
    })
}

/// Snaps a support printed with 12 significant digits back onto `c / n`.
fn snap(p: f64, n: Option<u64>) -> f64 {
    match n {
        Some(n) if n > 0 => {
            let c = (p * n as f64).round();
            let q = c / n as f64;
            if (q - p).abs() <= 1e-10 * p.abs().max(q.abs()) {
                q
            } else {
                p
            }
        }
        _ => p,
    }
}

/// Re-scores support rows, optionally under hypothetical thresholds.
pub fn cmd_score(args: &ScoreArgs) -> CliResult<RuleTable> {
    check_threshold_args(&args.thresholds)?;
    let mut meta = base_metadata("score");
    let bytes = read_input(&args.input, &mut meta)?;
    let (_, rows) = read_support_rows(&bytes[..], Format::from_path(&args.input))?;

    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = i + 1;
        let th = match (
            args.thresholds.min_support,
            args.thresholds.min_confidence,
            row.n,
        ) {
            (Some(s), Some(k), _) => Thresholds::new(s, k)?,
            (s, k, Some(n)) => Thresholds::resolve(s, k, n as usize).or_else(|_| {
                let floor = Thresholds::floor_for(n as usize);
                Thresholds::new(s.unwrap_or(floor.sigma), k.unwrap_or(floor.kappa))
            })?,
            _ => {
                return Err(Error::InvalidThresholds(format!(
                    "row {line}: thresholds not given and n unknown"
                ))
                .into())
            }
        };
        let t = SupportTriple::new(
            snap(row.p_a, row.n),
            snap(row.p_b, row.n),
            snap(row.p_ab, row.n),
        )
        .map_err(|e| Error::InvalidValue(format!("row {line}: {e}")))?;
        let report = MeasureReport::new(&t, &th);
        let scored = RuleRow::from_report(
            row.antecedent.clone(),
            row.consequent.clone(),
            row.n,
            &report,
        );
        if args.fail_fast {
            if let Some(e) = &scored.error {
                return Err(Error::InvalidValue(format!("row {line}: {e}")).into());
            }
        }
        out.push(scored);
    }

    if let Some(s) = args.thresholds.min_support {
        meta.insert("min_support".into(), fmt_num(s));
    } else {
        meta.insert("min_support".into(), "default 1/n per row".into());
    }
    if let Some(k) = args.thresholds.min_confidence {
        meta.insert("min_confidence".into(), fmt_num(k));
    } else {
        meta.insert("min_confidence".into(), "default 1/n per row".into());
    }
    meta.insert("n_rules".into(), out.len().to_string());
    Ok(RuleTable {
        metadata: meta,
        rules: out,
    })
}

/// Tau-b of raw against standardized values for each measure. Rules whose
/// measure is missing or has a degenerate window are left out of that
/// measure's comparison.
pub fn cmd_compare(args: &CompareArgs) -> CliResult<ComparisonTable> {
    let mut meta = base_metadata("compare");
    let bytes = read_input(&args.input, &mut meta)?;
    let table = RuleTable::read(&bytes[..], Format::from_path(&args.input))?;

    let mut comparisons = Vec::new();
    for m in Measure::ALL {
        let mut raw = Vec::new();
        let mut std = Vec::new();
        let mut degenerate = 0usize;
        for c in table.rules.iter().filter_map(|r| r.measure(m)) {
            if c.degenerate {
                degenerate += 1;
            } else {
                raw.push(c.raw);
                std.push(c.standardized);
            }
        }
        meta.insert(format!("{m}_degenerate_excluded"), degenerate.to_string());

        let row = if raw.len() >= DECILES {
            match tau_b_by_decile(&raw, &std) {
                Ok(r) => ComparisonRow::from_report(m, &r),
                Err(e) => {
                    eprintln!("warning: {m}: {e}");
                    ComparisonRow {
                        measure: m,
                        n_rules: raw.len(),
                        overall: None,
                        by_decile: None,
                    }
                }
            }
        } else {
            eprintln!(
                "warning: {m}: only {} rules, decile section omitted",
                raw.len()
            );
            let overall = tau_b(&raw, &std)
                .map_err(|e| eprintln!("warning: {m}: {e}"))
                .ok()
                .map(crate::report::round12);
            ComparisonRow {
                measure: m,
                n_rules: raw.len(),
                overall,
                by_decile: None,
            }
        };
        comparisons.push(row);
    }
    Ok(ComparisonTable {
        metadata: meta,
        comparisons,
    })
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<(Metadata, TransactionSet)> {
    let spec = RandomSpec {
        n_transactions: args.transactions,
        n_items: args.items,
        p: args.prob,
        seed: args.seed,
    };
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let ts = randgen::generate(&spec)?;
    let mut meta = base_metadata("generate");
    meta.insert("n_transactions".into(), spec.n_transactions.to_string());
    meta.insert("n_items".into(), spec.n_items.to_string());
    meta.insert("prob".into(), fmt_num(spec.p));
    meta.insert("seed".into(), spec.seed.to_string());
    meta.insert(
        "rng".into(),
        "ChaCha8 seed_from_u64, one u64 draw per cell, row-major".into(),
    );
    Ok((meta, ts))
}

/// Grid points `from, from + step, ...` up to `to`, each rounded to 12
/// significant digits.
pub fn curve_grid(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(from > 0.0 && from <= to && to <= 1.0 && step > 0.0) {
        return Err(CliError::Usage(format!(
            "curve grid needs 0 < from <= to <= 1 and step > 0, got from={from} to={to} step={step}"
        )));
    }
    let steps = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=steps)
        .map(|i| crate::report::round12(from + i as f64 * step))
        .collect())
}

pub fn cmd_curve(args: &CurveArgs) -> CliResult<CurveTable> {
    let grid = curve_grid(args.from, args.to, args.step)?;
    let points = lift_bound_curve(&grid)?;
    let mut meta = base_metadata("curve");
    meta.insert("from".into(), fmt_num(args.from));
    meta.insert("to".into(), fmt_num(args.to));
    meta.insert("step".into(), fmt_num(args.step));
    Ok(CurveTable::new(meta, &points))
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(Error::from)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(config: &RunConfig) -> CliResult<()> {
    match &config.command {
        Command::Mine(a) => {
            let table = cmd_mine(a)?;
            table.write(open_output(a.out.output.as_deref())?, a.out.format())?;
        }
        Command::Score(a) => {
            let table = cmd_score(a)?;
            table.write(open_output(a.out.output.as_deref())?, a.out.format())?;
        }
        Command::Compare(a) => {
            let table = cmd_compare(a)?;
            table.write(open_output(a.out.output.as_deref())?, a.out.format())?;
        }
        Command::Generate(a) => {
            let (meta, ts) = cmd_generate(a)?;
            let mut out = open_output(a.output.as_deref())?;
            for (k, v) in &meta {
                writeln!(out, "# {k}: {v}").map_err(Error::from)?;
            }
            ts.write_basket(&mut out)?;
            out.flush().map_err(Error::from)?;
        }
        Command::Curve(a) => {
            let table = cmd_curve(a)?;
            table.write(open_output(a.out.output.as_deref())?, a.out.format())?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match run(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
