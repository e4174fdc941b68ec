use crate::error::{CliError, CliResult};
use confine::glinvert::{RecoveryResult, SpectralDataset, SpectralDatum};
use confine::models::Tabulated;
use serde::Deserialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Deserialize)]
struct DatasetRow {
    j: usize,
    energy: f64,
    slope: f64,
}

#[derive(Debug, Deserialize)]
struct TableRow {
    r: f64,
    p: f64,
}

fn reader(path: &Path) -> CliResult<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::io(path.display().to_string(), io),
            other => CliError::usage(format!("{}: {other:?}", path.display())),
        })
}

fn parse_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<Vec<T>> {
    reader(path)?
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Reads a `j,energy,slope` file.
pub fn read_dataset(path: &Path) -> CliResult<SpectralDataset> {
    let items = parse_rows::<DatasetRow>(path)?
        .into_iter()
        .map(|r| SpectralDatum {
            index: r.j,
            energy: r.energy,
            slope: r.slope,
        })
        .collect();
    SpectralDataset::new(items).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Reads an `r,p` table.
pub fn read_table(path: &Path) -> CliResult<Tabulated> {
    let rows = parse_rows::<TableRow>(path)?;
    let (r, p) = rows.into_iter().map(|t| (t.r, t.p)).unzip();
    Tabulated::new(path.display().to_string(), r, p).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn csv_error(e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io("output", io),
        other => CliError::usage(format!("csv: {other:?}")),
    }
}

pub fn write_dataset<W: Write>(out: W, data: &SpectralDataset, precision: usize) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "energy", "slope"]).map_err(csv_error)?;
    for d in data.items() {
        w.write_record([
            d.index.to_string(),
            format!("{:.*}", precision, d.energy),
            format!("{:.*}", precision, d.slope),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::io("output", e))
}

pub fn write_potential<W: Write>(out: W, res: &RecoveryResult, precision: usize) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "q", "p"]).map_err(csv_error)?;
    for i in 0..res.len() {
        w.write_record([
            format!("{:.*}", precision, res.r(i)),
            format!("{:.*}", precision, res.q[i]),
            format!("{:.*}", precision, res.p[i]),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| CliError::io("output", e))
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| CliError::io(p.display().to_string(), e))?;
            let mut buf = std::io::BufWriter::new(file);
            body(&mut buf)?;
            buf.flush().map_err(|e| CliError::io(p.display().to_string(), e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)
        }
    }
}
