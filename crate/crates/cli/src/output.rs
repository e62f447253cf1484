//! CSV tables and their atomic emission.

use std::io::Write;
use std::path::Path;

use zerosum::{FormulaReport, MeanSquareReport, Term};

use crate::CliError;

pub const FORMULA_HEADER: [&str; 16] = [
    "problem",
    "N",
    "k",
    "H",
    "T",
    "lhs",
    "main",
    "secondary_main",
    "zero_sum_1",
    "zero_sum_2",
    "double_zero_sum",
    "bessel_sum",
    "bessel_zero_sum",
    "residual",
    "reference_bound",
    "ratio",
];

pub const MEAN_SQUARE_HEADER: [&str; 7] = ["N", "ell", "xi", "integral", "bound", "ratio", "bound_kind"];

/// Seventeen significant digits, enough to recover every `f64` exactly.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn formulas(reports: &[FormulaReport]) -> Self {
        let mut t = Table::new(&FORMULA_HEADER);
        for r in reports {
            t.push(formula_row(r));
        }
        t
    }

    pub fn mean_squares(reports: &[MeanSquareReport]) -> Self {
        let mut t = Table::new(&MEAN_SQUARE_HEADER);
        for r in reports {
            t.push(mean_square_row(r));
        }
        t
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| CliError::Output(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

pub fn formula_row(r: &FormulaReport) -> Vec<String> {
    let mut row = vec![
        r.problem.tag().to_string(),
        r.n.to_string(),
        opt(r.k),
        r.h.map(|h| h.to_string()).unwrap_or_default(),
        opt(r.t),
        num(r.lhs),
    ];
    row.extend(Term::ALL.iter().map(|&t| opt(r.term(t))));
    row.extend([num(r.residual), num(r.reference_bound), num(r.ratio)]);
    row
}

pub fn mean_square_row(r: &MeanSquareReport) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.ell.to_string(),
        num(r.xi),
        num(r.integral_value),
        num(r.reference_bound),
        num(r.ratio),
        r.bound_kind.to_string(),
    ]
}

/// Writes `table` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind. `None` means stdout.
pub fn emit(table: &Table, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = table.to_csv()?;
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(&bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Output(format!("stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(&bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Checks that `path` can be written before any computation starts.
pub fn check_writable(path: &Path) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(CliError::Output(format!("output directory {} does not exist", dir.display())));
    }
    if path.is_dir() {
        return Err(CliError::Output(format!("{} is a directory", path.display())));
    }
    Ok(())
}
