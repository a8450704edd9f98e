//! File formats read by the CLI.
//!
//! Binary grid fields carry a text header, one `key values...` line each,
//! terminated by a line `data`, followed by little-endian `f64` values in
//! row-major order (last axis fastest):
//!
//! ```text
//! shape 33 33 33
//! lo -1 -1 -1
//! spacing 0.0625
//! data
//! ```

use conecalc::norms::SampledField;
use conecalc::sl_graph::GridScalarField;
use conecalc::spectrum::SpectrumTable;
use conecalc::{Error, Result};
use serde::Deserialize;
use serde_json::Value;

pub fn read_text(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn read_bytes(path: &str) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{path}: {e}")))
}

pub fn read_spectrum(path: &str) -> Result<SpectrumTable> {
    spectrum_from_json(&read_text(path)?)
}

/// Accepts a bare spectrum table or a report from `spectrum`.
pub fn spectrum_from_json(text: &str) -> Result<SpectrumTable> {
    let v: Value = serde_json::from_str(text)?;
    let table = match v.get("results") {
        Some(results) => results.get("spectrum").unwrap_or(results).clone(),
        None => v,
    };
    Ok(serde_json::from_value(table)?)
}

#[derive(Deserialize)]
struct FieldJson {
    values: Vec<f64>,
    #[serde(default)]
    grad_norm: Option<Vec<f64>>,
    #[serde(default)]
    hess_norm: Option<Vec<f64>>,
}

pub fn read_field_json(path: &str) -> Result<SampledField> {
    let f: FieldJson = serde_json::from_str(&read_text(path)?)?;
    Ok(SampledField { values: f.values, grad_norm: f.grad_norm, hess_norm: f.hess_norm })
}

fn le_f64s(bytes: &[u8]) -> Result<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::Parse(format!("binary payload of {} bytes is not a whole number of f64", bytes.len())));
    }
    Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

pub fn read_f64_column(path: &str) -> Result<Vec<f64>> {
    le_f64s(&read_bytes(path)?)
}

pub fn parse_exponent(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse().map_err(|_| Error::InvalidInput(format!("exponent `{other}` is not a number or `inf`"))),
    }
}

pub fn read_grid(path: &str) -> Result<GridScalarField> {
    grid_from_bytes(&read_bytes(path)?)
}

pub fn grid_from_bytes(bytes: &[u8]) -> Result<GridScalarField> {
    if bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{') {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        let g: GridScalarField = serde_json::from_str(text)?;
        g.validate()?;
        return Ok(g);
    }
    let mut shape = None;
    let mut lo = None;
    let mut spacing = None;
    let mut pos = 0;
    loop {
        let end = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|i| pos + i)
            .ok_or_else(|| Error::Parse("grid header has no `data` line".into()))?;
        let line = std::str::from_utf8(&bytes[pos..end]).map_err(|e| Error::Parse(e.to_string()))?.trim();
        pos = end + 1;
        let mut words = line.split_whitespace();
        let key = words.next().unwrap_or("");
        let rest: Vec<&str> = words.collect();
        let floats = || -> Result<Vec<f64>> {
            rest.iter().map(|w| w.parse().map_err(|_| Error::Parse(format!("bad number `{w}` in `{line}`")))).collect()
        };
        match key {
            "" => {}
            "data" => break,
            "shape" => {
                shape = Some(
                    rest.iter()
                        .map(|w| w.parse().map_err(|_| Error::Parse(format!("bad extent `{w}`"))))
                        .collect::<Result<Vec<usize>>>()?,
                )
            }
            "lo" => lo = Some(floats()?),
            "spacing" => spacing = floats()?.first().copied(),
            other => return Err(Error::Parse(format!("unknown grid header key `{other}`"))),
        }
    }
    let shape = shape.ok_or_else(|| Error::Parse("grid header lacks `shape`".into()))?;
    let lo = lo.unwrap_or_else(|| vec![0.0; shape.len()]);
    let spacing = spacing.ok_or_else(|| Error::Parse("grid header lacks `spacing`".into()))?;
    GridScalarField::new(lo, shape, spacing, le_f64s(&bytes[pos..])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_grid_round_trip() {
        let values: Vec<f64> = (0..27).map(|i| i as f64 * 0.5).collect();
        let mut bytes = b"shape 3 3 3\nlo 0 0 0\nspacing 0.5\ndata\n".to_vec();
        bytes.extend(values.iter().flat_map(|v| v.to_le_bytes()));
        let g = grid_from_bytes(&bytes).unwrap();
        assert_eq!(g.shape, vec![3, 3, 3]);
        assert_eq!(g.values, values);
        assert!(grid_from_bytes(b"shape 3 3 3\nspacing 1\n").is_err());
    }

    #[test]
    fn spectrum_from_report_or_table() {
        let table = conecalc::spectrum::sphere_spectrum(3, 2).unwrap();
        let bare = table.to_json();
        assert_eq!(spectrum_from_json(&bare).unwrap(), table);
        let report = format!("{{\"command\":\"spectrum\",\"results\":{bare}}}");
        assert_eq!(spectrum_from_json(&report).unwrap(), table);
        assert_eq!(parse_exponent("inf").unwrap(), f64::INFINITY);
    }
}
