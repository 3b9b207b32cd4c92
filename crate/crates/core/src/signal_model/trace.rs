//! CSV trace format: header `t,va,vb,vc`, one sample per line.

use std::io::{Read, Write};

use super::ThreePhaseSignal;
use crate::error::{Error, Result};

const HEADER: [&str; 4] = ["t", "va", "vb", "vc"];

/// Maximum relative deviation of a time step from the mean step.
pub const MAX_STEP_JITTER: f64 = 1e-9;

fn row_error(row: usize, reason: impl Into<String>) -> Error {
    Error::Trace {
        row,
        line: row + 2,
        reason: reason.into(),
    }
}

/// Reads a trace. Rows are numbered from 0 (the first line after the header).
pub fn read_trace<R: Read>(source: R) -> Result<ThreePhaseSignal> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::Io(e.to_string()))?
        .clone();
    if headers.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if headers.iter().ne(HEADER.iter().copied()) {
        return Err(Error::TraceHeader(
            headers.iter().collect::<Vec<_>>().join(","),
        ));
    }

    let mut times = Vec::new();
    let mut samples = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| row_error(row, e.to_string()))?;
        let mut vals = [0.0; 4];
        for (slot, field) in vals.iter_mut().zip(record.iter()) {
            *slot = field
                .parse::<f64>()
                .map_err(|e| row_error(row, format!("`{field}`: {e}")))?;
            if !slot.is_finite() {
                return Err(row_error(row, "non-finite value"));
            }
        }
        times.push(vals[0]);
        samples.push([vals[1], vals[2], vals[3]]);
    }
    if samples.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if samples.len() < super::MIN_SAMPLES {
        return Err(Error::TooShort {
            required: super::MIN_SAMPLES,
            actual: samples.len(),
        });
    }

    let n = times.len();
    let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
    if dt.is_nan() || dt <= 0.0 {
        return Err(row_error(n - 1, "time column is not increasing"));
    }
    for row in 1..n {
        let step = times[row] - times[row - 1];
        // Rounding of the printed time stamps themselves.
        let slack = 2.0 * f64::EPSILON * (times[row].abs() + times[0].abs());
        if step <= 0.0 {
            return Err(row_error(row, "time column is not strictly increasing"));
        }
        if (step - dt).abs() > MAX_STEP_JITTER * dt + slack {
            return Err(row_error(
                row,
                format!("non-uniform sampling: step {step:e} vs mean step {dt:e}"),
            ));
        }
    }
    ThreePhaseSignal::new(times[0], dt, samples)
}

/// Writes a trace with 17 significant digits per value.
pub fn write_trace<W: Write>(signal: &ThreePhaseSignal, sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    let io = |e: csv::Error| Error::Io(e.to_string());
    writer.write_record(HEADER).map_err(io)?;
    for (j, s) in signal.samples().iter().enumerate() {
        writer
            .write_record([
                format!("{:.16e}", signal.time(j)),
                format!("{:.16e}", s[0]),
                format!("{:.16e}", s[1]),
                format!("{:.16e}", s[2]),
            ])
            .map_err(io)?;
    }
    writer.flush()?;
    Ok(())
}
