//! CSV and JSON dumps of states, measures, spectra and certificates.
//!
//! CSV floats are written with 17 significant digits and JSON floats with the shortest
//! round-trip representation, so every dump reloads bit-exactly.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coin::{CoinLabel, ShiftKind};
use crate::error::{Result, WalkError};
use crate::evolution::Measure;
use crate::linalg::C64;
use crate::spectra::{LocalizationCertificate, SpectrumRow, Verdict};
use crate::state::{Amplitude4, Space, TorusState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(WalkError::Parse(format!("unknown format '{other}'"))),
        }
    }
}

fn float(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String");
}

fn coord_names(space: Space) -> (&'static str, &'static str) {
    match space {
        Space::Position => ("x1", "x2"),
        Space::Momentum => ("k1", "k2"),
    }
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| WalkError::Parse(format!("line {line}: bad number '{field}'")))
}

fn parse_usize(field: &str, line: usize) -> Result<usize> {
    field
        .trim()
        .parse()
        .map_err(|_| WalkError::Parse(format!("line {line}: bad index '{field}'")))
}

fn side_from_rows(rows: usize) -> Result<usize> {
    let n = (rows as f64).sqrt().round() as usize;
    if n == 0 || n * n != rows {
        return Err(WalkError::Parse(format!("{rows} rows do not form a square grid")));
    }
    Ok(n)
}

pub fn state_to_csv(state: &TorusState) -> String {
    let (a, b) = coord_names(state.space());
    let mut out = format!("{a},{b},re1,im1,re2,im2,re3,im3,re4,im4\n");
    for (x1, x2, amp) in state.iter() {
        write!(out, "{x1},{x2}").expect("writing to a String");
        for v in amp.to_reals() {
            out.push(',');
            float(&mut out, v);
        }
        out.push('\n');
    }
    out
}

pub fn state_from_csv(text: &str) -> Result<TorusState> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| WalkError::Parse("empty state file".into()))?;
    let space = match header.split(',').next().map(str::trim) {
        Some("x1") => Space::Position,
        Some("k1") => Space::Momentum,
        _ => return Err(WalkError::Parse(format!("unrecognised header '{header}'"))),
    };
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(WalkError::Parse(format!("line {}: expected 10 fields", i + 2)));
        }
        let a = parse_usize(fields[0], i + 2)?;
        let b = parse_usize(fields[1], i + 2)?;
        let mut reals = [0.0; 8];
        for (j, r) in reals.iter_mut().enumerate() {
            *r = parse_f64(fields[2 + j], i + 2)?;
        }
        rows.push((a, b, Amplitude4::from_reals(reals)));
    }
    let n_side = side_from_rows(rows.len())?;
    let mut state = TorusState::zeros(n_side, space)?;
    let mut seen = vec![false; n_side * n_side];
    for (a, b, amp) in rows {
        if a >= n_side || b >= n_side || seen[a * n_side + b] {
            return Err(WalkError::Parse(format!("site ({a},{b}) is out of range or repeated")));
        }
        seen[a * n_side + b] = true;
        state.set(a, b, amp);
    }
    Ok(state)
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    n_side: usize,
    space: Space,
    /// grid[x1][x2][component] = [re, im]
    grid: Vec<Vec<[[f64; 2]; 4]>>,
}

pub fn state_to_json(state: &TorusState) -> String {
    let n = state.n_side();
    let grid = (0..n)
        .map(|a| (0..n).map(|b| state.get(a, b).0.map(|z| [z.re, z.im])).collect())
        .collect();
    let doc = StateDoc {
        n_side: n,
        space: state.space(),
        grid,
    };
    serde_json::to_string(&doc).expect("state serialises")
}

pub fn state_from_json(text: &str) -> Result<TorusState> {
    let doc: StateDoc = serde_json::from_str(text)?;
    let n = doc.n_side;
    if doc.grid.len() != n || doc.grid.iter().any(|row| row.len() != n) {
        return Err(WalkError::Parse(format!("grid is not {n}x{n}")));
    }
    TorusState::from_fn(n, doc.space, |a, b| {
        Amplitude4(doc.grid[a][b].map(|[re, im]| C64::new(re, im)))
    })
}

pub fn state_to_string(state: &TorusState, format: Format) -> String {
    match format {
        Format::Csv => state_to_csv(state),
        Format::Json => state_to_json(state),
    }
}

/// Detects JSON by a leading brace.
pub fn state_from_str(text: &str) -> Result<TorusState> {
    if text.trim_start().starts_with('{') {
        state_from_json(text)
    } else {
        state_from_csv(text)
    }
}

pub fn measure_to_csv(m: &Measure) -> String {
    let mut out = String::from("x1,x2,prob\n");
    for a in 0..m.n_side {
        for b in 0..m.n_side {
            write!(out, "{a},{b},").expect("writing to a String");
            float(&mut out, m.prob(a, b));
            out.push('\n');
        }
    }
    out
}

pub fn measure_from_csv(text: &str) -> Result<Measure> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == "x1,x2,prob" => {}
        _ => return Err(WalkError::Parse("expected header x1,x2,prob".into())),
    }
    let rows: Vec<(usize, usize, f64)> = lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(WalkError::Parse(format!("line {}: expected 3 fields", i + 2)));
            }
            Ok((parse_usize(f[0], i + 2)?, parse_usize(f[1], i + 2)?, parse_f64(f[2], i + 2)?))
        })
        .collect::<Result<_>>()?;
    let n = side_from_rows(rows.len())?;
    let mut probs = vec![0.0; n * n];
    for (a, b, p) in rows {
        if a >= n || b >= n {
            return Err(WalkError::Parse(format!("site ({a},{b}) is out of range")));
        }
        probs[a * n + b] = p;
    }
    Ok(Measure { n_side: n, probs })
}

pub fn measure_to_json(m: &Measure) -> String {
    serde_json::to_string(m).expect("measure serialises")
}

pub fn measure_from_json(text: &str) -> Result<Measure> {
    let m: Measure = serde_json::from_str(text)?;
    if m.probs.len() != m.n_side * m.n_side {
        return Err(WalkError::Parse("measure size does not match n_side".into()));
    }
    Ok(m)
}

pub fn measure_to_string(m: &Measure, format: Format) -> String {
    match format {
        Format::Csv => measure_to_csv(m),
        Format::Json => measure_to_json(m),
    }
}

pub fn spectrum_to_csv(rows: &[SpectrumRow]) -> String {
    let mut out = String::from("k1,k2,re1,im1,re2,im2,re3,im3,re4,im4,residual\n");
    for r in rows {
        write!(out, "{},{}", r.k1, r.k2).expect("writing to a String");
        for z in r.eigenvalues {
            out.push(',');
            float(&mut out, z.re);
            out.push(',');
            float(&mut out, z.im);
        }
        out.push(',');
        float(&mut out, r.poly_residual);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct SpectrumRowDoc {
    k1: usize,
    k2: usize,
    eigenvalues: [[f64; 2]; 4],
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    relation_residual: Option<f64>,
}

pub fn spectrum_to_json(rows: &[SpectrumRow]) -> String {
    let docs: Vec<SpectrumRowDoc> = rows
        .iter()
        .map(|r| SpectrumRowDoc {
            k1: r.k1,
            k2: r.k2,
            eigenvalues: r.eigenvalues.map(|z| [z.re, z.im]),
            residual: r.poly_residual,
            relation_residual: r.relation_residual,
        })
        .collect();
    serde_json::to_string(&docs).expect("spectrum serialises")
}

#[derive(Serialize)]
struct CandidateDoc {
    lambda: [f64; 2],
    max_residual: f64,
    worst_momentum: [usize; 2],
}

#[derive(Serialize)]
struct CertificateDoc {
    coin: CoinLabel,
    shift: ShiftKind,
    grid: usize,
    constant_roots: Vec<[f64; 2]>,
    verdict: Verdict,
    candidates: Vec<CandidateDoc>,
}

pub fn certificate_to_json(cert: &LocalizationCertificate) -> String {
    let doc = CertificateDoc {
        coin: cert.coin_label,
        shift: cert.shift,
        grid: cert.grid_resolution,
        constant_roots: cert.constant_roots.iter().map(|z| [z.re, z.im]).collect(),
        verdict: cert.verdict,
        candidates: cert
            .candidates
            .iter()
            .map(|c| CandidateDoc {
                lambda: [c.lambda.re, c.lambda.im],
                max_residual: c.max_residual,
                worst_momentum: [c.worst_momentum.0, c.worst_momentum.1],
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("certificate serialises")
}
