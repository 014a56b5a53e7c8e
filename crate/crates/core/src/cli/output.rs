//! CSV and JSON emitters.

use std::io::Write;

use serde::Serialize;

use crate::analysis::SweepResult;
use crate::error::{Error, Result};
use crate::scattering::{Port, SMatrix, Transmission};

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Header `delta,T11,...,T44`, where `Tij` is T_{i→j}, ordered by input
/// port then exit port.
pub fn csv_header() -> Vec<String> {
    let mut h = vec!["delta".to_string()];
    for from in Port::ALL {
        for to in Port::ALL {
            h.push(format!("T{}{}", from.number(), to.number()));
        }
    }
    h
}

fn csv_row(delta: f64, t: &Transmission) -> Vec<String> {
    let mut row = vec![fmt_f64(delta)];
    for from in Port::ALL {
        for to in Port::ALL {
            row.push(fmt_f64(t.get(from, to)));
        }
    }
    row
}

pub fn write_csv<W: Write>(result: &SweepResult, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(csv_header()).map_err(csv_error)?;
    for (delta, t) in result.deltas.iter().zip(&result.tables) {
        w.write_record(csv_row(*delta, t)).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Transmission table indexed `[from][to]` for external consumers.
pub fn by_input(t: &Transmission) -> [[f64; 4]; 4] {
    t.transpose().0
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    delta: &'a [f64],
    /// transmission[k][i][j] = T_{i+1→j+1} at delta[k]
    transmission: Vec<[[f64; 4]; 4]>,
}

pub fn write_spectrum_json<W: Write>(result: &SweepResult, sink: W) -> Result<()> {
    let doc = SpectrumJson {
        delta: &result.deltas,
        transmission: result.tables.iter().map(by_input).collect(),
    };
    write_json(&doc, sink)
}

#[derive(Serialize)]
pub struct SMatrixJson {
    pub delta: f64,
    /// s_re[i][j] + i s_im[i][j] = t_{i+1→j+1}
    pub s_re: [[f64; 4]; 4],
    pub s_im: [[f64; 4]; 4],
    pub transmission: [[f64; 4]; 4],
}

impl From<&SMatrix> for SMatrixJson {
    fn from(s: &SMatrix) -> Self {
        let part = |f: fn(num_complex::Complex64) -> f64| {
            std::array::from_fn(|i| std::array::from_fn(|j| f(s.t(Port::ALL[i], Port::ALL[j]))))
        };
        SMatrixJson {
            delta: s.delta,
            s_re: part(|z| z.re),
            s_im: part(|z| z.im),
            transmission: by_input(&s.transmission()),
        }
    }
}

/// `from,to,re,im,T`, one row per amplitude.
pub fn write_smatrix_csv<W: Write>(s: &SMatrix, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(["from", "to", "re", "im", "T"])
        .map_err(csv_error)?;
    for from in Port::ALL {
        for to in Port::ALL {
            let z = s.t(from, to);
            w.write_record([
                from.number().to_string(),
                to.number().to_string(),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(z.norm_sqr()),
            ])
            .map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut sink: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut sink, value)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    sink.write_all(b"\n")?;
    Ok(())
}
