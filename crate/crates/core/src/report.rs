//! Rule, comparison and curve tables in CSV and JSON.
//!
//! Floats are written with 12 significant digits. Rows hold values that are
//! already rounded, so a table parsed back from either format compares equal
//! to the rows that produced it. CSV files start with `# key: value`
//! metadata lines; JSON files carry the same pairs under `"metadata"`.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::rankcompare::{TauBReport, DECILES};
use crate::standardize::{CurvePoint, MeasureReport, StandardizedScore};

pub type Metadata = BTreeMap<String, String>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest text that parses back to `round12(x)`.
pub fn fmt_num(x: f64) -> String {
    let r = round12(x);
    let a = r.abs();
    if r == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidValue(format!("bad number {s:?} in column {what}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureCells {
    pub raw: f64,
    pub lower: f64,
    pub upper: f64,
    pub standardized: f64,
    pub degenerate: bool,
}

impl From<&StandardizedScore> for MeasureCells {
    fn from(s: &StandardizedScore) -> Self {
        Self {
            raw: round12(s.raw),
            lower: round12(s.bounds.lower),
            upper: round12(s.bounds.upper),
            standardized: round12(s.value),
            degenerate: s.degenerate,
        }
    }
}

/// One scored rule as written by the `mine` and `score` commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleRow {
    pub antecedent: String,
    pub consequent: String,
    pub support: f64,
    pub confidence: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub n: Option<u64>,
    pub lift: Option<MeasureCells>,
    pub cosine: Option<MeasureCells>,
    pub yule_q: Option<MeasureCells>,
    pub gini: Option<MeasureCells>,
    pub error: Option<String>,
}

impl RuleRow {
    pub fn from_report(
        antecedent: String,
        consequent: String,
        n: Option<u64>,
        report: &MeasureReport,
    ) -> Self {
        let t = &report.triple;
        let mut errors = Vec::new();
        let mut cells = |m: Measure| match report.get(m) {
            Ok(s) => Some(MeasureCells::from(s)),
            Err(e) => {
                errors.push(format!("{m}: {e}"));
                None
            }
        };
        let (lift, cosine, yule_q, gini) = (
            cells(Measure::Lift),
            cells(Measure::Cosine),
            cells(Measure::YuleQ),
            cells(Measure::Gini),
        );
        Self {
            antecedent,
            consequent,
            support: round12(t.p_ab()),
            confidence: round12(t.p_ab() / t.p_a()),
            p_a: round12(t.p_a()),
            p_b: round12(t.p_b()),
            n,
            lift,
            cosine,
            yule_q,
            gini,
            error: (!errors.is_empty()).then(|| errors.join("; ")),
        }
    }

    pub fn measure(&self, m: Measure) -> Option<&MeasureCells> {
        match m {
            Measure::Lift => self.lift.as_ref(),
            Measure::Cosine => self.cosine.as_ref(),
            Measure::YuleQ => self.yule_q.as_ref(),
            Measure::Gini => self.gini.as_ref(),
        }
    }

    fn measure_mut(&mut self, m: Measure) -> &mut Option<MeasureCells> {
        match m {
            Measure::Lift => &mut self.lift,
            Measure::Cosine => &mut self.cosine,
            Measure::YuleQ => &mut self.yule_q,
            Measure::Gini => &mut self.gini,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleTable {
    pub metadata: Metadata,
    pub rules: Vec<RuleRow>,
}

pub fn rule_columns() -> Vec<String> {
    let mut cols: Vec<String> = [
        "antecedent",
        "consequent",
        "support",
        "confidence",
        "p_a",
        "p_b",
        "n",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for m in Measure::ALL {
        let name = m.name();
        cols.push(name.to_string());
        for suffix in ["lower", "upper", "std", "degenerate"] {
            cols.push(format!("{name}_{suffix}"));
        }
    }
    cols.push("error".into());
    cols
}

fn write_metadata<W: Write>(out: &mut W, metadata: &Metadata) -> Result<()> {
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}")?;
    }
    Ok(())
}

/// Splits leading `# key: value` lines from the rest of a CSV document.
fn split_metadata<R: Read>(reader: R) -> Result<(Metadata, String)> {
    let mut metadata = Metadata::new();
    let mut body = String::new();
    let mut in_header = true;
    for line in BufReader::new(reader).lines() {
        let line = line?;
        if in_header {
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.trim_start().split_once(": ") {
                    metadata.insert(k.to_string(), v.to_string());
                } else if let Some(k) = rest.trim().strip_suffix(':') {
                    metadata.insert(k.to_string(), String::new());
                }
                continue;
            }
            in_header = false;
        }
        body.push_str(&line);
        body.push('\n');
    }
    Ok((metadata, body))
}

impl RuleTable {
    pub fn write<W: Write>(&self, out: W, format: Format) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => write_json(out, self),
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write_metadata(&mut out, &self.metadata)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(rule_columns())?;
        for r in &self.rules {
            let mut rec = vec![
                r.antecedent.clone(),
                r.consequent.clone(),
                fmt_num(r.support),
                fmt_num(r.confidence),
                fmt_num(r.p_a),
                fmt_num(r.p_b),
                r.n.map(|n| n.to_string()).unwrap_or_default(),
            ];
            for m in Measure::ALL {
                match r.measure(m) {
                    Some(c) => rec.extend([
                        fmt_num(c.raw),
                        fmt_num(c.lower),
                        fmt_num(c.upper),
                        fmt_num(c.standardized),
                        c.degenerate.to_string(),
                    ]),
                    None => rec.extend(std::iter::repeat_n(String::new(), 5)),
                }
            }
            rec.push(r.error.clone().unwrap_or_default());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(reader: R, format: Format) -> Result<Self> {
        match format {
            Format::Csv => Self::read_csv(reader),
            Format::Json => Ok(serde_json::from_reader(reader)?),
        }
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let (metadata, body) = split_metadata(reader)?;
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header != rule_columns() {
            return Err(Error::InvalidValue("not a scored rule table".into()));
        }
        let mut rules = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let num = |i: usize| parse_num(&rec[i], &header[i]);
            let mut row = RuleRow {
                antecedent: rec[0].to_string(),
                consequent: rec[1].to_string(),
                support: num(2)?,
                confidence: num(3)?,
                p_a: num(4)?,
                p_b: num(5)?,
                n: match rec[6].trim() {
                    "" => None,
                    s => Some(
                        s.parse()
                            .map_err(|_| Error::InvalidValue(format!("bad n {s:?}")))?,
                    ),
                },
                lift: None,
                cosine: None,
                yule_q: None,
                gini: None,
                error: match &rec[header.len() - 1] {
                    "" => None,
                    e => Some(e.to_string()),
                },
            };
            for (mi, m) in Measure::ALL.into_iter().enumerate() {
                let base = 7 + mi * 5;
                if rec[base].is_empty() {
                    continue;
                }
                let degenerate = match &rec[base + 4] {
                    "true" => true,
                    "false" => false,
                    other => return Err(Error::InvalidValue(format!("bad flag {other:?}"))),
                };
                *row.measure_mut(m) = Some(MeasureCells {
                    raw: num(base)?,
                    lower: num(base + 1)?,
                    upper: num(base + 2)?,
                    standardized: num(base + 3)?,
                    degenerate,
                });
            }
            rules.push(row);
        }
        Ok(Self { metadata, rules })
    }
}

fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Externally supplied supports to be scored.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportRow {
    pub antecedent: String,
    pub consequent: String,
    pub p_a: f64,
    pub p_b: f64,
    pub p_ab: f64,
    pub n: Option<u64>,
}

/// Reads rows carrying `p_a`, `p_b` and `p_ab` (or `support`), with
/// optional `n`, `antecedent` and `consequent`. Scored rule tables qualify.
pub fn read_support_rows<R: Read>(
    reader: R,
    format: Format,
) -> Result<(Metadata, Vec<SupportRow>)> {
    match format {
        Format::Csv => {
            let (metadata, body) = split_metadata(reader)?;
            let mut rdr = csv::ReaderBuilder::new()
                .trim(csv::Trim::All)
                .from_reader(body.as_bytes());
            let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
            let col = |name: &str| header.iter().position(|h| h == name);
            let need = |name: &str| {
                col(name).ok_or_else(|| Error::InvalidValue(format!("missing column {name}")))
            };
            let (ia, ib) = (need("p_a")?, need("p_b")?);
            let iab = col("p_ab")
                .or_else(|| col("support"))
                .ok_or_else(|| Error::InvalidValue("missing column p_ab (or support)".into()))?;
            let (i_n, i_ante, i_cons) = (col("n"), col("antecedent"), col("consequent"));
            let mut rows = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let text = |i: Option<usize>| i.map(|i| rec[i].to_string()).unwrap_or_default();
                rows.push(SupportRow {
                    antecedent: text(i_ante),
                    consequent: text(i_cons),
                    p_a: parse_num(&rec[ia], "p_a")?,
                    p_b: parse_num(&rec[ib], "p_b")?,
                    p_ab: parse_num(&rec[iab], &header[iab])?,
                    n: match i_n.map(|i| rec[i].trim()) {
                        None | Some("") => None,
                        Some(s) => Some(
                            s.parse()
                                .map_err(|_| Error::InvalidValue(format!("bad n {s:?}")))?,
                        ),
                    },
                });
            }
            Ok((metadata, rows))
        }
        Format::Json => {
            #[derive(Deserialize)]
            struct In {
                #[serde(default)]
                metadata: Metadata,
                rules: Vec<serde_json::Map<String, serde_json::Value>>,
            }
            let doc: In = serde_json::from_reader(reader)?;
            let mut rows = Vec::new();
            for obj in doc.rules {
                let num = |k: &str| obj.get(k).and_then(serde_json::Value::as_f64);
                let text = |k: &str| {
                    obj.get(k)
                        .and_then(|v| v.as_str())
                        .unwrap_or_default()
                        .to_string()
                };
                let missing = |k: &str| Error::InvalidValue(format!("missing field {k}"));
                rows.push(SupportRow {
                    antecedent: text("antecedent"),
                    consequent: text("consequent"),
                    p_a: num("p_a").ok_or_else(|| missing("p_a"))?,
                    p_b: num("p_b").ok_or_else(|| missing("p_b"))?,
                    p_ab: num("p_ab")
                        .or_else(|| num("support"))
                        .ok_or_else(|| missing("p_ab"))?,
                    n: obj.get("n").and_then(serde_json::Value::as_u64),
                });
            }
            Ok((doc.metadata, rows))
        }
    }
}

/// Tau-b of one measure's raw against standardized values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub measure: Measure,
    pub n_rules: usize,
    pub overall: Option<f64>,
    pub by_decile: Option<Vec<Option<f64>>>,
}

impl ComparisonRow {
    pub fn from_report(measure: Measure, r: &TauBReport) -> Self {
        Self {
            measure,
            n_rules: r.n_rules,
            overall: Some(round12(r.overall)),
            by_decile: Some(r.by_decile.iter().map(|d| d.map(round12)).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub metadata: Metadata,
    pub comparisons: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn write<W: Write>(&self, mut out: W, format: Format) -> Result<()> {
        if format == Format::Json {
            return write_json(out, self);
        }
        write_metadata(&mut out, &self.metadata)?;
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["measure".to_string(), "n_rules".into(), "overall".into()];
        header.extend((1..=DECILES).map(|d| format!("decile_{d}")));
        w.write_record(&header)?;
        let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
        for c in &self.comparisons {
            let mut rec = vec![
                c.measure.name().to_string(),
                c.n_rules.to_string(),
                opt(c.overall),
            ];
            match &c.by_decile {
                Some(d) => rec.extend(d.iter().map(|v| opt(*v))),
                None => rec.extend(std::iter::repeat_n(String::new(), DECILES)),
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(reader: R, format: Format) -> Result<Self> {
        if format == Format::Json {
            return Ok(serde_json::from_reader(reader)?);
        }
        let (metadata, body) = split_metadata(reader)?;
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                parse_num(s, "tau-b").map(Some)
            }
        };
        let mut comparisons = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let measure = Measure::ALL
                .into_iter()
                .find(|m| m.name() == &rec[0])
                .ok_or_else(|| Error::InvalidValue(format!("unknown measure {:?}", &rec[0])))?;
            let deciles: Vec<Option<f64>> = (3..3 + DECILES)
                .map(|i| opt(&rec[i]))
                .collect::<Result<_>>()?;
            comparisons.push(ComparisonRow {
                measure,
                n_rules: rec[1]
                    .parse()
                    .map_err(|_| Error::InvalidValue("bad n_rules".into()))?,
                overall: opt(&rec[2])?,
                by_decile: deciles.iter().any(Option::is_some).then_some(deciles),
            });
        }
        Ok(Self {
            metadata,
            comparisons,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub metadata: Metadata,
    pub points: Vec<CurvePoint>,
}

impl CurveTable {
    pub fn new(metadata: Metadata, points: &[CurvePoint]) -> Self {
        let points = points
            .iter()
            .map(|p| CurvePoint {
                x: round12(p.x),
                upper: round12(p.upper),
                lower: round12(p.lower),
            })
            .collect();
        Self { metadata, points }
    }

    pub fn write<W: Write>(&self, mut out: W, format: Format) -> Result<()> {
        if format == Format::Json {
            return write_json(out, self);
        }
        write_metadata(&mut out, &self.metadata)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "upper", "lower"])?;
        for p in &self.points {
            w.write_record([fmt_num(p.x), fmt_num(p.upper), fmt_num(p.lower)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(reader: R, format: Format) -> Result<Self> {
        if format == Format::Json {
            return Ok(serde_json::from_reader(reader)?);
        }
        let (metadata, body) = split_metadata(reader)?;
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            points.push(CurvePoint {
                x: parse_num(&rec[0], "x")?,
                upper: parse_num(&rec[1], "upper")?,
                lower: parse_num(&rec[2], "lower")?,
            });
        }
        Ok(Self { metadata, points })
    }
}
