//! File formats: reproducible CSV/JSON emission with provenance headers,
//! observable and custom-density input parsers, and operator import/export.
//!
//! Float output is fixed at 17 significant digits so identical inputs give
//! byte-identical files.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::cs::PhasePoint;
use crate::dist::{
    ActionDistribution, AdmissibilityReport, Interpolation, Kind, SampledDensity,
};
use crate::dynamics::EvolutionFrame;
use crate::error::{Error, Result};
use crate::quantizer::{ObservableSpec, RadialFn, TruncatedOperator};
use crate::symbols::LowerSymbolField;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, round-trippable, with negative zero normalized.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Provenance block shared by every output file.
pub fn provenance(dist: Option<&ActionDistribution>, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut out = vec![("tool".to_string(), format!("cylcs {TOOL_VERSION}"))];
    if let Some(d) = dist {
        out.push(("dist".into(), d.kind().to_string()));
        out.push(("sigma".into(), fmt_f64(d.sigma())));
        if d.sigma_override() {
            out.push(("sigma_override".into(), "true".into()));
        }
    }
    for (k, v) in extra {
        out.push((k.to_string(), v.clone()));
    }
    out
}

fn header_lines(prov: &[(String, String)]) -> String {
    let mut s = String::new();
    for (k, v) in prov {
        s.push_str(&format!("# {k}: {v}\n"));
    }
    s
}

fn prov_json(prov: &[(String, String)]) -> Value {
    Value::Object(
        prov.iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect(),
    )
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown output format '{other}'"))),
        }
    }
}

/// Operator export: triplet list (n, n', re, im) under a provenance header,
/// or the same data as self-describing JSON.
pub fn operator_to_csv(op: &TruncatedOperator, dist: Option<&ActionDistribution>) -> String {
    let prov = provenance(
        dist,
        &[
            ("label".into(), op.label().to_string()),
            ("trunc".into(), op.n_trunc().to_string()),
            ("bandwidth".into(), op.bandwidth().to_string()),
            ("entry_quad_tol".into(), fmt_f64(crate::quantizer::ENTRY_QUAD_TOL)),
        ],
    );
    let mut s = header_lines(&prov);
    s.push_str("n,nprime,re,im\n");
    let nt = op.n_trunc() as i64;
    for n in -nt..=nt {
        for n2 in -nt..=nt {
            let v = op.entry(n, n2);
            if v != Complex64::ZERO {
                s.push_str(&format!("{n},{n2},{},{}\n", fmt_f64(v.re), fmt_f64(v.im)));
            }
        }
    }
    s
}

pub fn operator_to_json(op: &TruncatedOperator, dist: Option<&ActionDistribution>) -> String {
    let nt = op.n_trunc() as i64;
    let mut entries = Vec::new();
    for n in -nt..=nt {
        for n2 in -nt..=nt {
            let v = op.entry(n, n2);
            if v != Complex64::ZERO {
                entries.push(json!([n, n2, v.re, v.im]));
            }
        }
    }
    let doc = json!({
        "provenance": prov_json(&provenance(dist, &[
            ("label".into(), op.label().to_string()),
        ])),
        "trunc": op.n_trunc(),
        "bandwidth": op.bandwidth(),
        "entries": entries,
    });
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}

/// Read back an operator written by [`operator_to_csv`] or
/// [`operator_to_json`] (sniffed from the first non-blank byte).
pub fn operator_from_str(text: &str) -> Result<TruncatedOperator> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        operator_from_json(text)
    } else {
        operator_from_csv(text)
    }
}

fn operator_from_csv(text: &str) -> Result<TruncatedOperator> {
    let mut trunc: Option<usize> = None;
    let mut label = String::from("imported operator");
    let mut bandwidth = 0usize;
    let mut entries: Vec<(i64, i64, Complex64)> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once(':') {
                match k.trim() {
                    "trunc" => {
                        trunc = Some(v.trim().parse().map_err(|_| {
                            Error::Parse(format!("bad trunc value '{}'", v.trim()))
                        })?)
                    }
                    "label" => label = v.trim().to_string(),
                    _ => {}
                }
            }
            continue;
        }
        if line.starts_with("n,") {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("bad operator row '{line}'")));
        }
        let n: i64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index '{}'", parts[0])))?;
        let n2: i64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index '{}'", parts[1])))?;
        let re: f64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad float '{}'", parts[2])))?;
        let im: f64 = parts[3]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad float '{}'", parts[3])))?;
        bandwidth = bandwidth.max((n - n2).unsigned_abs() as usize);
        entries.push((n, n2, Complex64::new(re, im)));
    }
    let trunc = match trunc {
        Some(t) => t,
        None => entries
            .iter()
            .map(|(n, n2, _)| n.unsigned_abs().max(n2.unsigned_abs()) as usize)
            .max()
            .ok_or_else(|| Error::Parse("operator file holds no entries".into()))?,
    };
    let mut op = TruncatedOperator::from_fn(trunc, 0, label, |_, _| Complex64::ZERO);
    let mat = op.matrix_mut();
    let nt = trunc as i64;
    for (n, n2, v) in entries {
        if n.abs() > nt || n2.abs() > nt {
            return Err(Error::Parse(format!(
                "entry ({n}, {n2}) outside the declared window [-{trunc}, {trunc}]"
            )));
        }
        mat[((n + nt) as usize, (n2 + nt) as usize)] = v;
    }
    op.set_bandwidth(bandwidth);
    Ok(op)
}

fn operator_from_json(text: &str) -> Result<TruncatedOperator> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    let trunc = doc["trunc"]
        .as_u64()
        .ok_or_else(|| Error::Parse("operator JSON lacks 'trunc'".into()))? as usize;
    let label = doc["provenance"]["label"]
        .as_str()
        .unwrap_or("imported operator")
        .to_string();
    let entries = doc["entries"]
        .as_array()
        .ok_or_else(|| Error::Parse("operator JSON lacks 'entries'".into()))?;
    let mut op = TruncatedOperator::from_fn(trunc, 0, label, |_, _| Complex64::ZERO);
    let nt = trunc as i64;
    let mut bandwidth = 0usize;
    {
        let mat = op.matrix_mut();
        for e in entries {
            let row = e
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| Error::Parse("operator entry is not [n, n', re, im]".into()))?;
            let n = row[0]
                .as_i64()
                .ok_or_else(|| Error::Parse("bad entry index".into()))?;
            let n2 = row[1]
                .as_i64()
                .ok_or_else(|| Error::Parse("bad entry index".into()))?;
            let re = row[2]
                .as_f64()
                .ok_or_else(|| Error::Parse("bad entry value".into()))?;
            let im = row[3]
                .as_f64()
                .ok_or_else(|| Error::Parse("bad entry value".into()))?;
            if n.abs() > nt || n2.abs() > nt {
                return Err(Error::Parse(format!(
                    "entry ({n}, {n2}) outside the declared window"
                )));
            }
            bandwidth = bandwidth.max((n - n2).unsigned_abs() as usize);
            mat[((n + nt) as usize, (n2 + nt) as usize)] = Complex64::new(re, im);
        }
    }
    op.set_bandwidth(bandwidth);
    Ok(op)
}

/// Lower-symbol field as CSV rows (J, phi, re, im).
pub fn field_to_csv(field: &LowerSymbolField, dist: Option<&ActionDistribution>) -> String {
    let prov = provenance(dist, &[("provenance".into(), field.provenance.clone())]);
    let mut s = header_lines(&prov);
    s.push_str("J,phi,re,im\n");
    for (p, v) in field.points.iter().zip(&field.values) {
        s.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(p.j()),
            fmt_f64(p.phi()),
            fmt_f64(v.re),
            fmt_f64(v.im)
        ));
    }
    s
}

pub fn field_to_json(field: &LowerSymbolField, dist: Option<&ActionDistribution>) -> String {
    let rows: Vec<Value> = field
        .points
        .iter()
        .zip(&field.values)
        .map(|(p, v)| json!([p.j(), p.phi(), v.re, v.im]))
        .collect();
    let doc = json!({
        "provenance": prov_json(&provenance(dist, &[("provenance".into(), field.provenance.clone())])),
        "columns": ["J", "phi", "re", "im"],
        "rows": rows,
    });
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}

/// One evolution frame as CSV rows (t, J, phi, rho).
pub fn frame_to_csv(frame: &EvolutionFrame, dist: Option<&ActionDistribution>) -> String {
    let prov = provenance(
        dist,
        &[
            ("t".into(), fmt_f64(frame.t)),
            ("J0".into(), fmt_f64(frame.initial.j())),
            ("phi0".into(), fmt_f64(frame.initial.phi())),
        ],
    );
    let mut s = header_lines(&prov);
    s.push_str("t,J,phi,rho\n");
    for (i, &j) in frame.grid.j.iter().enumerate() {
        for (k, &phi) in frame.grid.phi.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(frame.t),
                fmt_f64(j),
                fmt_f64(phi),
                fmt_f64(frame.rho_at(i, k))
            ));
        }
    }
    s
}

/// Coherent-state coefficients as CSV rows (n, re, im).
pub fn cs_coeffs_to_csv(
    coeffs: &[Complex64],
    n_trunc: usize,
    dist: Option<&ActionDistribution>,
    p: PhasePoint,
) -> String {
    let prov = provenance(
        dist,
        &[
            ("trunc".into(), n_trunc.to_string()),
            ("J".into(), fmt_f64(p.j())),
            ("phi".into(), fmt_f64(p.phi())),
        ],
    );
    let mut s = header_lines(&prov);
    s.push_str("n,re,im\n");
    for (idx, c) in coeffs.iter().enumerate() {
        let n = idx as i64 - n_trunc as i64;
        s.push_str(&format!("{n},{},{}\n", fmt_f64(c.re), fmt_f64(c.im)));
    }
    s
}

pub fn report_to_json(report: &AdmissibilityReport, dist: &ActionDistribution) -> String {
    let doc = json!({
        "provenance": prov_json(&provenance(Some(dist), &[])),
        "conditions": report.records.iter().map(|r| json!({
            "label": r.label,
            "status": r.status.to_string(),
            "max_deviation": if r.max_deviation.is_nan() { Value::Null } else { json!(r.max_deviation) },
            "grid": r.grid,
            "notes": r.notes,
        })).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}

pub fn report_to_csv(report: &AdmissibilityReport, dist: &ActionDistribution) -> String {
    let mut s = header_lines(&provenance(Some(dist), &[]));
    s.push_str("condition,status,max_deviation,grid,notes\n");
    for r in &report.records {
        s.push_str(&format!(
            "{},{},{},\"{}\",\"{}\"\n",
            r.label.replace(',', ";"),
            r.status,
            if r.max_deviation.is_nan() {
                "".into()
            } else {
                fmt_f64(r.max_deviation)
            },
            r.grid.replace('"', "'"),
            r.notes.replace('"', "'"),
        ));
    }
    s
}

/// Parse a complex token: `1.5`, `-2i`, `0.3+0.25i`, `1-0.5i`.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let t = token.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty complex token".into()));
    }
    if let Ok(re) = t.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    if let Some(imag_part) = t.strip_suffix(['i', 'I']) {
        // split at the last +/- that is not an exponent sign or leading sign
        let bytes = imag_part.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = imag_part[..i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad complex token '{t}'")))?;
                let im_str = &imag_part[i..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad complex token '{t}'")))?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if imag_part.is_empty() || imag_part == "+" {
                    1.0
                } else if imag_part == "-" {
                    -1.0
                } else {
                    imag_part
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad complex token '{t}'")))?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        Err(Error::Parse(format!("bad complex token '{t}'")))
    }
}

/// Observable file: one `term` line per Fourier index.
///
/// ```text
/// # f(J, phi) = J^2 + 2 cos(phi)
/// term 0 poly 0 0 1
/// term 1 const 1
/// term -1 const 1
/// term 2 table -1:0.5 0:1 1:0.5
/// ```
///
/// Polynomial and constant coefficients accept complex tokens (`0.5-0.5i`).
pub fn parse_observable(text: &str) -> Result<ObservableSpec> {
    let mut terms: Vec<(i32, RadialFn)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap();
        if head != "term" {
            return Err(Error::Parse(format!(
                "line {}: expected 'term', found '{head}'",
                lineno + 1
            )));
        }
        let m: i32 = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing Fourier index", lineno + 1)))?
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad Fourier index", lineno + 1)))?;
        let kind = tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing radial kind", lineno + 1)))?;
        let radial = match kind {
            "const" => {
                let tok = tokens.next().ok_or_else(|| {
                    Error::Parse(format!("line {}: missing constant", lineno + 1))
                })?;
                RadialFn::Const(parse_complex(tok)?)
            }
            "poly" => {
                let coeffs = tokens
                    .map(parse_complex)
                    .collect::<Result<Vec<Complex64>>>()?;
                if coeffs.is_empty() {
                    return Err(Error::Parse(format!(
                        "line {}: polynomial needs at least one coefficient",
                        lineno + 1
                    )));
                }
                RadialFn::Poly(coeffs)
            }
            "table" => {
                let mut js = Vec::new();
                let mut gs = Vec::new();
                for pair in tokens {
                    let (a, b) = pair.split_once(':').ok_or_else(|| {
                        Error::Parse(format!("line {}: table entries are J:value", lineno + 1))
                    })?;
                    js.push(a.parse::<f64>().map_err(|_| {
                        Error::Parse(format!("line {}: bad abscissa '{a}'", lineno + 1))
                    })?);
                    gs.push(parse_complex(b)?);
                }
                if js.len() < 2 {
                    return Err(Error::Parse(format!(
                        "line {}: table needs at least two samples",
                        lineno + 1
                    )));
                }
                if js.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Parse(format!(
                        "line {}: table abscissae must increase",
                        lineno + 1
                    )));
                }
                RadialFn::Table { j: js, g: gs }
            }
            other => {
                return Err(Error::Parse(format!(
                    "line {}: unknown radial kind '{other}' (const | poly | table)",
                    lineno + 1
                )))
            }
        };
        terms.push((m, radial));
    }
    if terms.is_empty() {
        return Err(Error::Parse(
            "observable file holds no term lines".into(),
        ));
    }
    ObservableSpec::from_terms(terms).map(|s| s.with_desc("observable from file"))
}

/// Custom density file: declarations followed by a sample block.
///
/// ```text
/// sigma 0.8
/// support 1.6
/// interpolation cubic     # or linear
/// symmetrize even         # samples on [0, R]; 'full' lists both signs
/// samples
/// 0.0 0.625
/// 0.4 0.625
/// ...
/// ```
pub fn parse_custom_density(text: &str) -> Result<ActionDistribution> {
    let mut sigma: Option<f64> = None;
    let mut support: Option<f64> = None;
    let mut interp = Interpolation::Linear;
    let mut symmetrize_even = true;
    let mut in_samples = false;
    let mut j = Vec::new();
    let mut v = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if in_samples {
            let mut it = line.split_whitespace();
            let (a, b) = (it.next(), it.next());
            match (a, b) {
                (Some(a), Some(b)) => {
                    j.push(a.parse::<f64>().map_err(|_| {
                        Error::Parse(format!("line {}: bad sample abscissa", lineno + 1))
                    })?);
                    v.push(b.parse::<f64>().map_err(|_| {
                        Error::Parse(format!("line {}: bad sample value", lineno + 1))
                    })?);
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: samples are 'J value' pairs",
                        lineno + 1
                    )))
                }
            }
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next().unwrap() {
            "sigma" => {
                sigma = Some(parse_decl_f64(it.next(), lineno)?);
            }
            "support" => {
                support = Some(parse_decl_f64(it.next(), lineno)?);
            }
            "interpolation" => {
                interp = match it.next() {
                    Some("linear") => Interpolation::Linear,
                    Some("cubic") => Interpolation::Cubic,
                    other => {
                        return Err(Error::Parse(format!(
                            "line {}: interpolation is linear or cubic, got {other:?}",
                            lineno + 1
                        )))
                    }
                };
            }
            "symmetrize" => {
                symmetrize_even = match it.next() {
                    Some("even") => true,
                    Some("full") => false,
                    other => {
                        return Err(Error::Parse(format!(
                            "line {}: symmetrize is even or full, got {other:?}",
                            lineno + 1
                        )))
                    }
                };
            }
            "samples" => in_samples = true,
            other => {
                return Err(Error::Parse(format!(
                    "line {}: unknown declaration '{other}'",
                    lineno + 1
                )))
            }
        }
    }
    let sigma =
        sigma.ok_or_else(|| Error::Parse("custom density file lacks 'sigma'".into()))?;
    let support =
        support.ok_or_else(|| Error::Parse("custom density file lacks 'support'".into()))?;
    if j.is_empty() {
        return Err(Error::Parse("custom density file lacks samples".into()));
    }
    let (j, v) = if symmetrize_even {
        (j, v)
    } else {
        // fold a full-range table onto [0, R], verifying evenness
        fold_even(j, v)?
    };
    let samples = SampledDensity::new(j, v, interp)?;
    ActionDistribution::custom_from_samples(sigma, support, samples)
}

fn parse_decl_f64(tok: Option<&str>, lineno: usize) -> Result<f64> {
    tok.ok_or_else(|| Error::Parse(format!("line {}: missing value", lineno + 1)))?
        .parse()
        .map_err(|_| Error::Parse(format!("line {}: bad value", lineno + 1)))
}

fn fold_even(j: Vec<f64>, v: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut pairs: Vec<(f64, f64)> = j.into_iter().zip(v).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut folded: Vec<(f64, f64)> = Vec::new();
    for (x, y) in pairs {
        let key = x.abs();
        match folded.iter_mut().find(|(k, _)| (*k - key).abs() < 1e-12) {
            Some((_, val)) => {
                if (*val - y).abs() > 1e-8 * (1.0 + val.abs()) {
                    return Err(Error::Parse(format!(
                        "full-range samples are not even at |J| = {key}: {val} vs {y}"
                    )));
                }
            }
            None => folded.push((key, y)),
        }
    }
    folded.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(folded.into_iter().unzip())
}

/// Build an [`ObservableSpec`] or dist-backed density from a path.
pub fn load_observable(path: &Path) -> Result<ObservableSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_observable(&text)
}

pub fn load_custom_density(path: &Path) -> Result<ActionDistribution> {
    let text = std::fs::read_to_string(path)?;
    parse_custom_density(&text)
}

pub fn load_operator(path: &Path) -> Result<TruncatedOperator> {
    let text = std::fs::read_to_string(path)?;
    operator_from_str(&text)
}

/// Self-describing JSON for a distribution, used in verify output filenames.
pub fn dist_summary(dist: &ActionDistribution) -> String {
    match dist.kind() {
        Kind::Gaussian => format!("gaussian-{}", dist.sigma()),
        Kind::Uniform => format!("uniform-{}", dist.sigma()),
        Kind::Custom => format!("custom-{}", dist.sigma()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantizer::quantize;
    use approx::assert_abs_diff_eq;

    #[test]
    fn float_format_is_stable() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.0), "0.0000000000000000e0");
        let x = std::f64::consts::PI;
        let round_trip: f64 = fmt_f64(x).parse().unwrap();
        assert_eq!(round_trip.to_bits(), x.to_bits());
    }

    #[test]
    fn complex_tokens() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(
            parse_complex("0.3+0.25i").unwrap(),
            Complex64::new(0.3, 0.25)
        );
        assert_eq!(parse_complex("1-0.5i").unwrap(), Complex64::new(1.0, -0.5));
        assert_eq!(parse_complex("2e-3+1e-2i").unwrap(), Complex64::new(2e-3, 1e-2));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn observable_file_roundtrip() {
        let text = "# energy plus harmonic\nterm 0 poly 0 0 1\nterm 1 const 0.5\nterm -1 const 0.5\n";
        let f = parse_observable(text).unwrap();
        assert!(f.is_real());
        assert_eq!(f.bandwidth(), 1);
        let v = f.eval(2.0, 0.0);
        assert_abs_diff_eq!(v.re, 5.0, epsilon = 1e-15);
    }

    #[test]
    fn observable_file_rejects_garbage() {
        assert!(parse_observable("").is_err());
        assert!(parse_observable("term x poly 1").is_err());
        assert!(parse_observable("term 0 spline 1 2").is_err());
    }

    #[test]
    fn operator_csv_roundtrip() {
        let d = ActionDistribution::uniform(0.75).unwrap();
        let op = quantize(&d, &ObservableSpec::energy(), 4).unwrap();
        let text = operator_to_csv(&op, Some(&d));
        let back = operator_from_str(&text).unwrap();
        assert_eq!(back.n_trunc(), 4);
        assert!(op.max_abs_diff(&back) < 1e-15);
    }

    #[test]
    fn operator_json_roundtrip() {
        let d = ActionDistribution::gaussian(1.0).unwrap();
        let op = crate::quantizer::angle_operator(&d, 3).unwrap();
        let text = operator_to_json(&op, Some(&d));
        let back = operator_from_str(&text).unwrap();
        assert_eq!(back.n_trunc(), 3);
        assert!(op.max_abs_diff(&back) < 1e-15);
    }

    #[test]
    fn custom_density_file() {
        let text = "sigma 0.75\nsupport 0.75\ninterpolation linear\nsymmetrize even\nsamples\n0.0 1.0\n0.75 1.0\n";
        let d = parse_custom_density(text).unwrap();
        // renormalized to the uniform density of half-width 0.75
        assert_abs_diff_eq!(d.density(0.2), 1.0 / 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d.density(1.0), 0.0);
    }

    #[test]
    fn custom_density_file_full_range() {
        let text = "sigma 0.5\nsupport 1.0\nsymmetrize full\nsamples\n-1.0 0.0\n0.0 1.0\n1.0 0.0\n";
        let d = parse_custom_density(text).unwrap();
        assert_abs_diff_eq!(d.density(0.5), d.density(-0.5), epsilon = 1e-14);
        let bad = "sigma 0.5\nsupport 1.0\nsymmetrize full\nsamples\n-1.0 0.2\n0.0 1.0\n1.0 0.0\n";
        assert!(parse_custom_density(bad).is_err());
    }
}
