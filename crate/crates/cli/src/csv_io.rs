//! Numeric CSV tables: one header row, comma separated, `\n` line ends,
//! values printed with 17 significant digits so they read back bit for bit.

use desk_numerics::{Matrix, NumError};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(headers: &[S]) -> Self {
        Table { headers: headers.iter().map(|h| h.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row);
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `printf("%.17g")` formatting.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mant), exp.abs())
    }
}

pub fn write_csv(table: &Table) -> CliResult<Vec<u8>> {
    write_records(table, true)
}

pub fn read_csv(bytes: &[u8]) -> CliResult<Table> {
    read_records(bytes, true)
}

fn write_records(table: &Table, rectangular: bool) -> CliResult<Vec<u8>> {
    let width = table.headers.len();
    let mut w =
        csv::WriterBuilder::new().flexible(true).terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::MalformedCsv(e.to_string());
    w.write_record(&table.headers).map_err(csv_err)?;
    for row in &table.rows {
        if rectangular && row.len() != width {
            return Err(CliError::MalformedCsv(format!("row of {} values under {width} headers", row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(NumError::NonFinite.into());
        }
        w.write_record(row.iter().map(|&v| format_g17(v))).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::MalformedCsv(e.to_string()))
}

fn read_records(bytes: &[u8], rectangular: bool) -> CliResult<Table> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(bytes);
    let headers: Vec<String> =
        r.headers().map_err(|e| CliError::MalformedCsv(e.to_string()))?.iter().map(str::to_string).collect();
    if headers.is_empty() {
        return Err(CliError::MalformedCsv("missing header row".into()));
    }
    let mut table = Table { headers, rows: Vec::new() };
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::MalformedCsv(e.to_string()))?;
        let row = rec
            .iter()
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::MalformedCsv(format!("record {}: {field:?} is not a number", line + 1)))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        if rectangular && row.len() != table.headers.len() {
            return Err(CliError::MalformedCsv(format!("record {} has {} fields", line + 1, row.len())));
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Header line holds the dimensions `r,c`, followed by the rows.
pub fn write_matrix_csv(m: &Matrix) -> CliResult<Vec<u8>> {
    let (r, c) = m.shape();
    write_records(&Table { headers: vec![r.to_string(), c.to_string()], rows: m.to_rows() }, false)
}

pub fn read_matrix_csv(bytes: &[u8]) -> CliResult<Matrix> {
    let t = read_records(bytes, false)?;
    let dims: Vec<usize> = t.headers.iter().filter_map(|h| h.trim().parse().ok()).collect();
    let (r, c) = match dims[..] {
        [r, c] if t.headers.len() == 2 => (r, c),
        _ => return Err(CliError::MalformedCsv("matrix header must be `rows,cols`".into())),
    };
    if t.rows.len() != r || t.rows.iter().any(|row| row.len() != c) {
        return Err(CliError::MalformedCsv(format!("expected {r} rows of {c} values")));
    }
    Ok(Matrix::from_rows(&t.rows)?)
}
