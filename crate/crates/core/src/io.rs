//! Strict CSV readers for observed datasets.
//!
//! Every file has a header row naming its columns. Blank fields, extra or
//! missing fields, and non-numeric values abort with the offending line.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::models::{ExpRegData, PowerLawData};

/// Reads the named numeric columns, in the requested order.
pub fn read_columns<R: Read>(reader: R, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(false).from_reader(reader);
    let headers = rdr.headers().map_err(|e| parse_error(1, e.to_string()))?.clone();
    let idx = names
        .iter()
        .map(|name| {
            headers.iter().position(|h| h == *name).ok_or_else(|| {
                parse_error(
                    1,
                    format!("missing column `{name}` (found: {})", headers.iter().collect::<Vec<_>>().join(",")),
                )
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        for (col, &i) in cols.iter_mut().zip(&idx) {
            let field = &record[i];
            let value: f64 = field
                .parse()
                .map_err(|_| parse_error(line, format!("`{field}` in column `{}` is not a number", &headers[i])))?;
            if !value.is_finite() {
                return Err(parse_error(line, format!("non-finite value `{field}`")));
            }
            col.push(value);
        }
    }
    Ok(cols)
}

fn parse_error(line: u64, message: String) -> Error {
    Error::Parse { line, message }
}

fn open(path: &Path) -> Result<File> {
    Ok(File::open(path)?)
}

/// Power-law event times from a `time` column.
pub fn read_powerlaw<R: Read>(reader: R) -> Result<PowerLawData> {
    let mut cols = read_columns(reader, &["time"])?;
    PowerLawData::new(cols.remove(0))
}

/// Exponential-regression pairs from `x,y` columns.
pub fn read_expreg<R: Read>(reader: R) -> Result<ExpRegData> {
    let mut cols = read_columns(reader, &["x", "y"])?;
    let y = cols.remove(1);
    ExpRegData::new(cols.remove(0), y)
}

/// Log-lifetimes (lognormal) or raw observations (location-scale) from a `y` column.
pub fn read_observations<R: Read>(reader: R) -> Result<Vec<f64>> {
    Ok(read_columns(reader, &["y"])?.remove(0))
}

pub fn read_powerlaw_file(path: &Path) -> Result<PowerLawData> {
    read_powerlaw(open(path)?)
}

pub fn read_expreg_file(path: &Path) -> Result<ExpRegData> {
    read_expreg(open(path)?)
}

pub fn read_observations_file(path: &Path) -> Result<Vec<f64>> {
    read_observations(open(path)?)
}
