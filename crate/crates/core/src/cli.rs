//! The `bnloci` command line.
//!
//! Every command produces rows of cells that render as JSON, CSV or an
//! aligned text table. Exit status is 0 on success, 1 when a check fails and
//! 2 for bad input.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bn::{bn_global, bn_local, bn_stratum, multiplicity_strata, rho_global, rho_local, BNReport, Dim, Query};
use crate::degloci::{census, census_fit, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exactalg::FieldSpec;
use crate::hstype::{dim_stratum, enumerate_types, join, validate_type, HSType, Shape};
use crate::iarrobino::beta_dims;
use crate::suites::{self, Suite, SuiteConfig, SuiteResult, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// Global loci `BN_{r,n}` with their multiplicity strata.
    Main,
    /// Local loci `BN^loc_{r,n}`.
    Local,
    /// Loci on each Hilbert-Samuel stratum.
    Strata,
}

#[derive(Debug, Parser)]
#[command(
    name = "bnloci",
    version,
    about = "Brill-Noether loci on punctual Hilbert schemes of the plane"
)]
pub struct Cli {
    /// Ground field: `rational` or `prime:P`.
    #[arg(long, global = true, env = "BNLOCI_FIELD")]
    pub field: Option<FieldSpec>,

    #[arg(long, global = true, env = "BNLOCI_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Truncation order for power series computations.
    #[arg(long, global = true, env = "BNLOCI_CAP")]
    pub cap: Option<u32>,

    /// Largest number of matrices a census may enumerate.
    #[arg(long, global = true, env = "BNLOCI_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,

    #[arg(long, global = true, env = "BNLOCI_OUTPUT", value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All Hilbert-Samuel types of colength N.
    Types {
        #[arg(long)]
        n: u32,
    },
    /// The locus of ideals of type T with exactly r + 1 generators.
    Stratum {
        /// Comma list such as 1,2,3,2,2.
        #[arg(long = "type", value_parser = parse_type)]
        t: HSType,
        #[arg(long)]
        r: u32,
    },
    /// Local loci of colength N, for one r or all of them.
    BnLocal {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: Option<u32>,
    },
    /// Loci in Hilb_N(S) x S, for one r or all of them.
    BnGlobal {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: Option<u32>,
    },
    /// Exact rank and echelon-sequence counts of shape-e matrices over F_q.
    Census {
        /// Comma list such as 1,2,2.
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
        #[arg(long)]
        q: u64,
        /// Also write the counts to this CSV file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Polynomial fits of the per-rank census counts across several q.
    CensusFit {
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        qs: Vec<u64>,
    },
    /// Run invariant suites; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Numeric tables for all parameters up to N_MAX.
    Table {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
    },
}

fn parse_list(s: &str) -> std::result::Result<Vec<u32>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| format!("`{p}` is not a nonnegative integer"))
        })
        .collect()
}

fn parse_type(s: &str) -> std::result::Result<HSType, String> {
    validate_type(&parse_list(s)?).map_err(|e| e.to_string())
}

fn parse_shape(s: &str) -> std::result::Result<Shape, String> {
    Shape::new(parse_list(s)?).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<u32>),
    Dim(Dim),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::List(v) => join(v),
            Cell::Dim(d) => d.to_string(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Text(t) => s.serialize_str(t),
            Cell::List(v) => v.serialize(s),
            Cell::Dim(d) => d.serialize(s),
        }
    }
}

/// One output record with its columns in display order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Row(Vec<(&'static str, Cell)>);

impl Row {
    fn with(mut self, key: &'static str, cell: Cell) -> Self {
        self.0.push((key, cell));
        self
    }

    fn int(self, key: &'static str, v: impl Into<i64>) -> Self {
        self.with(key, Cell::Int(v.into()))
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// A command result: its JSON text and its tabular form.
struct Rendered {
    json: String,
    rows: Vec<Row>,
}

impl Rendered {
    fn new<T: Serialize + ?Sized>(value: &T, rows: Vec<Row>) -> Result<Self> {
        Ok(Self {
            json: serde_json::to_string_pretty(value)?,
            rows,
        })
    }

    fn from_rows(rows: Vec<Row>) -> Result<Self> {
        Self::new(&rows, rows.clone())
    }

    fn write(&self, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
        match format {
            OutputFormat::Json => writeln!(out, "{}", self.json)?,
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                if let Some(first) = self.rows.first() {
                    w.write_record(first.0.iter().map(|(k, _)| *k))?;
                }
                for row in &self.rows {
                    w.write_record(row.0.iter().map(|(_, c)| c.render()))?;
                }
                w.flush()?;
            }
            OutputFormat::Table => {
                let Some(first) = self.rows.first() else { return Ok(()) };
                let header: Vec<String> = first.0.iter().map(|(k, _)| k.to_string()).collect();
                let body: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.0.iter().map(|(_, c)| c.render()).collect())
                    .collect();
                let widths: Vec<usize> = (0..header.len())
                    .map(|i| {
                        std::iter::once(&header)
                            .chain(&body)
                            .map(|r| r[i].len())
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                for line in std::iter::once(&header).chain(&body) {
                    let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    writeln!(out, "{}", cells.join("  ").trim_end())?;
                }
            }
        }
        Ok(())
    }
}

fn report_row(rep: &BNReport) -> Row {
    let row = match &rep.query {
        Query::Stratum { t, r } => Row::default()
            .with("level", Cell::Text("stratum".into()))
            .with("t", Cell::List(t.as_slice().to_vec()))
            .int("r", *r),
        Query::Local { r, n } => Row::default()
            .with("level", Cell::Text("local".into()))
            .int("r", *r)
            .int("n", *n),
        Query::Global { r, n } => Row::default()
            .with("level", Cell::Text("global".into()))
            .int("r", *r)
            .int("n", *n),
    };
    row.with("nonempty", Cell::Bool(rep.nonempty))
        .with("dim", Cell::Dim(rep.dim))
        .with("tight", Cell::Bool(rep.tight))
}

fn reports(reps: Vec<BNReport>, single: bool) -> Result<Rendered> {
    let rows = reps.iter().map(report_row).collect();
    if single {
        Rendered::new(&reps[0], rows)
    } else {
        Rendered::new(&reps, rows)
    }
}

fn type_row(t: &HSType) -> Row {
    let (_, n_e) = beta_dims(t);
    Row::default()
        .with("t", Cell::List(t.as_slice().to_vec()))
        .int("n", t.n())
        .int("d", t.order())
        .with("e", Cell::List(t.jumping_indices().shape().parts().to_vec()))
        .with("k", Cell::List(t.partition().rows().to_vec()))
        .int("dim", dim_stratum(t))
        .int("n_e", n_e)
}

fn main_table(n_max: u32) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for r in 0..=n_max {
            let rep = bn_global(r, n)?;
            let top = multiplicity_strata(r, n)?.first().map(|&(m, _)| m as i64);
            rows.push(
                Row::default()
                    .int("r", r)
                    .int("n", n)
                    .int("rho", rho_global(r, n))
                    .with("nonempty", Cell::Bool(rep.nonempty))
                    .with("dim", Cell::Dim(rep.dim))
                    .with("top_m", Cell::Dim(top.into())),
            );
        }
    }
    Ok(rows)
}

fn local_table(n_max: u32) -> Vec<Row> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for r in 0..=n_max {
            let rep = bn_local(r, n);
            rows.push(
                Row::default()
                    .int("r", r)
                    .int("n", n)
                    .int("rho_loc", rho_local(r, n))
                    .with("nonempty", Cell::Bool(rep.nonempty))
                    .with("dim", Cell::Dim(rep.dim)),
            );
        }
    }
    rows
}

fn strata_table(n_max: u32) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for t in enumerate_types(n) {
            let jumps = t.jumping_indices();
            let d = t.order();
            for r in jumps.r_min()..=d {
                let rep = bn_stratum(&t, r)?;
                let bound = n as i64 - (r * (r + 1) / 2) as i64 - (d - r) as i64;
                rows.push(
                    Row::default()
                        .with("t", Cell::List(t.as_slice().to_vec()))
                        .int("n", n)
                        .int("d", d)
                        .with("e", Cell::List(jumps.shape().parts().to_vec()))
                        .int("r", r)
                        .with("dim", Cell::Dim(rep.dim))
                        .int("bound", bound),
                );
            }
        }
    }
    Ok(rows)
}

fn suite_rows(results: &[SuiteResult]) -> Vec<Row> {
    results
        .iter()
        .map(|s| {
            Row::default()
                .with("suite", Cell::Text(s.suite.into()))
                .int("n_max", s.n_max)
                .int("checks", s.checks as i64)
                .with("passed", Cell::Bool(s.passed))
                .int("violations", s.violations.len() as i64)
        })
        .collect()
}

/// Outcome of a command: rendered output and whether every check passed.
fn execute(cli: &Cli) -> Result<(Rendered, Option<Violation>)> {
    let ok = |r: Rendered| Ok((r, None));
    match &cli.command {
        Command::Types { n } => {
            let rows: Vec<Row> = enumerate_types(*n).iter().map(type_row).collect();
            ok(Rendered::from_rows(rows)?)
        }
        Command::Stratum { t, r } => ok(reports(vec![bn_stratum(t, *r)?], true)?),
        Command::BnLocal { n, r } => {
            let reps: Vec<BNReport> = match r {
                Some(r) => vec![bn_local(*r, *n)],
                None => (0..=*n).map(|r| bn_local(r, *n)).collect(),
            };
            ok(reports(reps, r.is_some())?)
        }
        Command::BnGlobal { n, r } => {
            let reps = match r {
                Some(r) => vec![bn_global(*r, *n)?],
                None => (0..=*n).map(|r| bn_global(r, *n)).collect::<Result<_>>()?,
            };
            ok(reports(reps, r.is_some())?)
        }
        Command::Census { shape, q, export } => {
            let c = census(shape, *q, cli.budget)?;
            if let Some(path) = export {
                c.write_csv(File::create(path)?)?;
            }
            let rows = c
                .rows()
                .into_iter()
                .map(|r| {
                    Row::default()
                        .int("q", r.q as i64)
                        .with("e", Cell::Text(r.e))
                        .int("R", r.rank as i64)
                        .with("a", Cell::Text(r.a))
                        .int("count", r.count as i64)
                })
                .collect();
            ok(Rendered::new(&c, rows)?)
        }
        Command::CensusFit { shape, qs } => {
            let fit = census_fit(shape, qs, cli.budget)?;
            let rows = fit
                .ranks
                .iter()
                .map(|f| {
                    Row::default()
                        .int("R", f.rank as i64)
                        .with("counts", Cell::Text(join(&f.counts)))
                        .with("coefficients", Cell::Text(f.coefficients.join(",")))
                        .with(
                            "consistent_degree",
                            f.consistent_degree
                                .map_or(Cell::Text("none".into()), |d| Cell::Int(d as i64)),
                        )
                })
                .collect();
            ok(Rendered::new(&fit, rows)?)
        }
        Command::Verify { suite, n_max } => {
            let config = SuiteConfig {
                seed: cli.seed,
                field: cli.field,
                cap: cli.cap,
                budget: cli.budget,
            };
            let results = suites::run(*suite, *n_max, &config);
            let first = results.iter().flat_map(|r| r.violations.first()).next().cloned();
            Ok((Rendered::new(&results, suite_rows(&results))?, first))
        }
        Command::Table { theorem, n_max } => {
            let rows = match theorem {
                Theorem::Main => main_table(*n_max)?,
                Theorem::Local => local_table(*n_max),
                Theorem::Strata => strata_table(*n_max)?,
            };
            ok(Rendered::from_rows(rows)?)
        }
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<&'a str>,
    message: String,
}

fn diagnose(err: &mut dyn Write, kind: &str, reference: Option<&str>, message: String) {
    let d = Diagnostic {
        error: kind,
        reference,
        message,
    };
    let _ = writeln!(err, "{}", serde_json::to_string(&d).unwrap_or_default());
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok((rendered, violation)) => {
            if let Err(e) = rendered.write(cli.output, out) {
                diagnose(err, "io", None, e.to_string());
                return 1;
            }
            match violation {
                None => 0,
                Some(v) => {
                    diagnose(err, "assertion", Some(&v.reference), v.detail);
                    1
                }
            }
        }
        Err(Error::Violation { reference, detail }) => {
            diagnose(err, "assertion", Some(reference), detail);
            1
        }
        Err(e @ (Error::Io(_) | Error::Csv(_) | Error::Json(_))) => {
            diagnose(err, "io", None, e.to_string());
            1
        }
        Err(e) => {
            diagnose(err, "usage", None, e.to_string());
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("bnloci").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bad_usage_exits_2() {
        assert_eq!(call(&["stratum", "--type", "1,3", "--r", "1"]).0, 2);
        assert_eq!(call(&["nope"]).0, 2);
        assert_eq!(call(&["census", "--shape", "1,1", "--q", "4"]).0, 2);
        assert_eq!(call(&["--budget", "0", "types", "--n", "3"]).0, 2);
    }

    #[test]
    fn table_output() {
        let (code, out, _) = call(&["--output", "table", "types", "--n", "3"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "t      n  d  e  k    dim  n_e\n1,1,1  3  1  1  3    2    0\n1,2    3  2  2  2,1  0    0\n"
        );
    }
}
