//! Bound sweeps over blocklength or crossover probability, and the CSV
//! format they are exchanged in.
//!
//! A sweep file is a block of `# key: value` metadata lines, a mandatory
//! header row with the columns of [`CSV_COLUMNS`] in that order, and one row
//! per configuration. Floats carry 12 significant digits. Absent exact
//! values are written as empty fields. Negative lower bounds are written
//! as computed.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::bounds::{BoundReport, ComparisonProtocol};
use crate::error::{Error, Result};
use crate::error_model::Qsc;

pub const CSV_COLUMNS: [&str; 13] = [
    "n",
    "q",
    "eps",
    "p_b",
    "p_s",
    "h_exact",
    "h_ext_ub",
    "h_fano_ub",
    "i_exact",
    "i_ext_lb",
    "i_fano_lb",
    "logm_ext_ub",
    "logm_fano_ub",
];

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Default blocklength range for `sweep-n`.
pub const DEFAULT_N_MIN: usize = 1;
pub const DEFAULT_N_MAX: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Blocklength,
    Crossover,
}

impl SweepAxis {
    pub fn column(&self) -> &'static str {
        match self {
            SweepAxis::Blocklength => "n",
            SweepAxis::Crossover => "eps",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grid {
    #[default]
    Linear,
    Geometric,
}

/// Bound reports keyed by the swept variable, plus metadata for the file
/// header.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<BoundReport>,
}

fn base_metadata(axis: SweepAxis, protocol: &ComparisonProtocol) -> Vec<(String, String)> {
    vec![
        (
            "tool".into(),
            format!("fano-ext {}", env!("CARGO_PKG_VERSION")),
        ),
        ("sweep".into(), axis.column().into()),
        ("eps_fraction".into(), format_sig(protocol.eps_fraction())),
    ]
}

/// One row per `n` in `n_min, n_min + step, ..., <= n_max`.
pub fn sweep_blocklength(
    q: u32,
    eps: f64,
    n_min: usize,
    n_max: usize,
    step: usize,
    protocol: &ComparisonProtocol,
) -> Result<SweepTable> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::Grid(format!(
            "need 1 <= n_min <= n_max (got {n_min}..{n_max})"
        )));
    }
    if step == 0 {
        return Err(Error::Grid("n step must be at least 1".into()));
    }
    Qsc::new(q, eps)?;
    let ns: Vec<usize> = (n_min..=n_max).step_by(step).collect();
    let rows = ns
        .par_iter()
        .map(|&n| BoundReport::for_qsc(n, q, eps, protocol))
        .collect::<Result<Vec<_>>>()?;

    let mut metadata = base_metadata(SweepAxis::Blocklength, protocol);
    metadata.extend([
        ("q".into(), q.to_string()),
        ("eps".into(), format_sig(eps)),
        ("n_range".into(), format!("{n_min}..={n_max} step {step}")),
    ]);
    Ok(SweepTable {
        axis: SweepAxis::Blocklength,
        metadata,
        rows,
    })
}

/// Crossover grid with `steps` points from `eps_min` to `eps_max`
/// inclusive, strictly increasing.
pub fn crossover_grid(eps_min: f64, eps_max: f64, steps: usize, grid: Grid) -> Result<Vec<f64>> {
    if !(eps_min.is_finite() && eps_max.is_finite()) || eps_min < 0.0 || eps_min > eps_max {
        return Err(Error::Grid(format!(
            "need 0 <= eps_min <= eps_max (got {eps_min}, {eps_max})"
        )));
    }
    if steps == 0 {
        return Err(Error::Grid("steps must be at least 1".into()));
    }
    if steps == 1 {
        return if eps_min == eps_max {
            Ok(vec![eps_min])
        } else {
            Err(Error::Grid("a single step needs eps_min == eps_max".into()))
        };
    }
    if eps_min == eps_max {
        return Err(Error::Grid(format!(
            "{steps} steps over an empty range would repeat eps = {eps_min}"
        )));
    }
    let last = (steps - 1) as f64;
    let mut points: Vec<f64> = match grid {
        Grid::Linear => (0..steps)
            .map(|i| eps_min + (eps_max - eps_min) * (i as f64 / last))
            .collect(),
        Grid::Geometric => {
            if eps_min <= 0.0 {
                return Err(Error::Grid("geometric grid needs eps_min > 0".into()));
            }
            let ratio = (eps_max / eps_min).ln();
            (0..steps)
                .map(|i| eps_min * (ratio * i as f64 / last).exp())
                .collect()
        }
    };
    points[0] = eps_min;
    points[steps - 1] = eps_max;
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Grid(
            "grid points are not strictly increasing".into(),
        ));
    }
    Ok(points)
}

pub fn sweep_crossover(
    q: u32,
    n: usize,
    eps_min: f64,
    eps_max: f64,
    steps: usize,
    grid: Grid,
    protocol: &ComparisonProtocol,
) -> Result<SweepTable> {
    if n == 0 {
        return Err(Error::Grid("blocklength n must be at least 1".into()));
    }
    let points = crossover_grid(eps_min, eps_max, steps, grid)?;
    Qsc::new(q, eps_max).map_err(|e| Error::Grid(e.to_string()))?;
    let rows = points
        .par_iter()
        .map(|&eps| BoundReport::for_qsc(n, q, eps, protocol))
        .collect::<Result<Vec<_>>>()?;

    let mut metadata = base_metadata(SweepAxis::Crossover, protocol);
    metadata.extend([
        ("q".into(), q.to_string()),
        ("n".into(), n.to_string()),
        (
            "eps_range".into(),
            format!(
                "{}..={} steps {steps} {}",
                format_sig(eps_min),
                format_sig(eps_max),
                match grid {
                    Grid::Linear => "linear",
                    Grid::Geometric => "geometric",
                }
            ),
        ),
    ]);
    Ok(SweepTable {
        axis: SweepAxis::Crossover,
        metadata,
        rows,
    })
}

impl SweepTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (key, value) in &self.metadata {
            writeln!(out, "# {key}: {value}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            w.write_record(CsvRecord::from_report(r).to_fields())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
    }

    pub fn is_strictly_ordered(&self) -> bool {
        self.rows.windows(2).all(|w| match self.axis {
            SweepAxis::Blocklength => w[0].n < w[1].n,
            SweepAxis::Crossover => w[0].eps < w[1].eps,
        })
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.is_strictly_ordered() {
            out.push(format!(
                "rows are not strictly ordered by {}",
                self.axis.column()
            ));
        }
        for r in &self.rows {
            for v in r.violations() {
                out.push(format!("n={} eps={}: {v}", r.n, r.eps));
            }
        }
        out
    }
}

/// One CSV row, as written or as read back.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRecord {
    pub n: usize,
    pub q: u32,
    pub eps: f64,
    pub p_b: f64,
    pub p_s: f64,
    pub h_exact: Option<f64>,
    pub h_ext_ub: f64,
    pub h_fano_ub: f64,
    pub i_exact: Option<f64>,
    pub i_ext_lb: f64,
    pub i_fano_lb: f64,
    pub logm_ext_ub: f64,
    pub logm_fano_ub: f64,
}

impl CsvRecord {
    pub fn from_report(r: &BoundReport) -> Self {
        CsvRecord {
            n: r.n,
            q: r.q,
            eps: r.eps,
            p_b: r.p_b,
            p_s: r.p_s,
            h_exact: r.h_exact,
            h_ext_ub: r.h_ext_ub,
            h_fano_ub: r.h_fano_ub,
            i_exact: r.i_exact,
            i_ext_lb: r.i_ext_lb,
            i_fano_lb: r.i_fano_lb,
            logm_ext_ub: r.logm_ext_ub,
            logm_fano_ub: r.logm_fano_ub,
        }
    }

    /// Floating columns in schema order, starting at `eps`.
    pub fn values(&self) -> [(&'static str, Option<f64>); 11] {
        [
            ("eps", Some(self.eps)),
            ("p_b", Some(self.p_b)),
            ("p_s", Some(self.p_s)),
            ("h_exact", self.h_exact),
            ("h_ext_ub", Some(self.h_ext_ub)),
            ("h_fano_ub", Some(self.h_fano_ub)),
            ("i_exact", self.i_exact),
            ("i_ext_lb", Some(self.i_ext_lb)),
            ("i_fano_lb", Some(self.i_fano_lb)),
            ("logm_ext_ub", Some(self.logm_ext_ub)),
            ("logm_fano_ub", Some(self.logm_fano_ub)),
        ]
    }

    pub fn to_fields(&self) -> Vec<String> {
        let mut fields = vec![self.n.to_string(), self.q.to_string()];
        fields.extend(
            self.values()
                .iter()
                .map(|(_, v)| v.map(format_sig).unwrap_or_default()),
        );
        fields
    }

    fn from_fields(line: usize, rec: &csv::StringRecord) -> Result<Self> {
        let field = |i: usize| rec.get(i).unwrap_or("").trim();
        let err = |col: &str, text: &str| Error::Parse {
            line,
            message: format!("column {col}: cannot parse {text:?}"),
        };
        let float = |i: usize| -> Result<f64> {
            field(i).parse().map_err(|_| err(CSV_COLUMNS[i], field(i)))
        };
        let optional = |i: usize| -> Result<Option<f64>> {
            match field(i) {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| err(CSV_COLUMNS[i], s)),
            }
        };
        if rec.len() != CSV_COLUMNS.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", CSV_COLUMNS.len(), rec.len()),
            });
        }
        Ok(CsvRecord {
            n: field(0).parse().map_err(|_| err("n", field(0)))?,
            q: field(1).parse().map_err(|_| err("q", field(1)))?,
            eps: float(2)?,
            p_b: float(3)?,
            p_s: float(4)?,
            h_exact: optional(5)?,
            h_ext_ub: float(6)?,
            h_fano_ub: float(7)?,
            i_exact: optional(8)?,
            i_ext_lb: float(9)?,
            i_fano_lb: float(10)?,
            logm_ext_ub: float(11)?,
            logm_fano_ub: float(12)?,
        })
    }
}

/// A sweep file read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSweep {
    pub metadata: Vec<(String, String)>,
    pub records: Vec<CsvRecord>,
}

impl ParsedSweep {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn read_csv<R: Read>(mut input: R) -> Result<ParsedSweep> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;

    let mut metadata = Vec::new();
    let mut body = String::new();
    let mut body_start = None;
    for (i, line) in text.lines().enumerate() {
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once(':') {
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
        } else {
            body_start.get_or_insert(i + 1);
            body.push_str(line);
            body.push('\n');
        }
    }
    let first_line = body_start.ok_or(Error::Parse {
        line: 0,
        message: "missing header row".into(),
    })?;

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(body.as_bytes());
    let header = reader.headers()?.clone();
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != CSV_COLUMNS {
        return Err(Error::Parse {
            line: first_line,
            message: format!(
                "header {:?} does not match schema {:?}",
                names.join(","),
                CSV_COLUMNS.join(",")
            ),
        });
    }
    let records = reader
        .records()
        .enumerate()
        .map(|(i, rec)| CsvRecord::from_fields(first_line + 1 + i, &rec?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedSweep { metadata, records })
}

/// Formats `v` with [`SIGNIFICANT_DIGITS`] significant digits, fixed
/// notation for moderate exponents and scientific otherwise.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let digits = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
