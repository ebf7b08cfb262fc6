//! CSV serialization of every on-disk artifact.
//!
//! All numbers are written with 17 significant digits so files round-trip
//! exactly and identical runs produce byte-identical output. The header row
//! of each format is the schema contract.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::diagnostics::{CheckReport, DiagRecord};
use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};
use crate::lagrangian::{FlowMap, StringConfig};

/// Full-precision float formatting (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `records.csv` column order; the schema contract for one record per row.
pub const RECORD_HEADER: &str = "t,fbar,fmin,fmax,l1_f,l2_f,l4_f,l1_F,l2_F,l4_F,\
hhalf_f,hhalf_lnf,h1_sqrtf,entropy,dissipation,diss_integral,entropy_flux_integral,\
clip_flux_integral,clip_excess,energy_residual,dxf_min,dxf_max,wiener01,wiener01_nu,\
holder_alpha,hminus_half_F,hm_dissipation,w1_to_initial";

fn record_row(r: &DiagRecord) -> String {
    let vals = [
        r.t,
        r.fbar,
        r.fmin,
        r.fmax,
        r.l1_f,
        r.l2_f,
        r.l4_f,
        r.l1_big_f,
        r.l2_big_f,
        r.l4_big_f,
        r.hhalf_f,
        r.hhalf_lnf,
        r.h1_sqrtf,
        r.entropy,
        r.dissipation,
        r.diss_integral,
        r.entropy_flux_integral,
        r.clip_flux_integral,
        r.clip_excess,
        r.energy_residual,
        r.dxf_min,
        r.dxf_max,
        r.wiener01,
        r.wiener01_nu,
        r.holder_alpha,
        r.hminus_half_big_f,
        r.hm_dissipation,
        r.w1_to_initial,
    ];
    let mut row = String::new();
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            row.push(',');
        }
        row.push_str(&fmt_f64(*v));
    }
    row
}

/// Serialize diagnostic records.
pub fn records_to_csv(records: &[DiagRecord]) -> String {
    let mut out = String::from(RECORD_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&record_row(r));
        out.push('\n');
    }
    out
}

/// Parse `records.csv` back into records.
pub fn records_from_csv(text: &str) -> Result<Vec<DiagRecord>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != RECORD_HEADER {
        return Err(Error::Parse {
            context: "records.csv".into(),
            detail: "unexpected header".into(),
        });
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let v = parse_floats(line, 28, "records.csv", lineno + 2)?;
        out.push(DiagRecord {
            t: v[0],
            fbar: v[1],
            fmin: v[2],
            fmax: v[3],
            l1_f: v[4],
            l2_f: v[5],
            l4_f: v[6],
            l1_big_f: v[7],
            l2_big_f: v[8],
            l4_big_f: v[9],
            hhalf_f: v[10],
            hhalf_lnf: v[11],
            h1_sqrtf: v[12],
            entropy: v[13],
            dissipation: v[14],
            diss_integral: v[15],
            entropy_flux_integral: v[16],
            clip_flux_integral: v[17],
            clip_excess: v[18],
            energy_residual: v[19],
            dxf_min: v[20],
            dxf_max: v[21],
            wiener01: v[22],
            wiener01_nu: v[23],
            holder_alpha: v[24],
            hminus_half_big_f: v[25],
            hm_dissipation: v[26],
            w1_to_initial: v[27],
        });
    }
    Ok(out)
}

fn parse_floats(line: &str, n: usize, context: &str, lineno: usize) -> Result<Vec<f64>> {
    let vals: Vec<f64> = line
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            context: context.into(),
            detail: format!("line {lineno}: {e}"),
        })?;
    if vals.len() != n {
        return Err(Error::Parse {
            context: context.into(),
            detail: format!("line {lineno}: expected {n} columns, got {}", vals.len()),
        });
    }
    Ok(vals)
}

/// Grid field: header `x,value`, rows in grid order.
pub fn grid_to_csv(g: &GridField) -> String {
    let mut out = String::from("x,value\n");
    for (j, v) in g.samples().iter().enumerate() {
        let _ = writeln!(out, "{},{}", fmt_f64(g.node(j)), fmt_f64(*v));
    }
    out
}

pub fn grid_from_csv(text: &str) -> Result<GridField> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "x,value" {
        return Err(Error::Parse {
            context: "grid csv".into(),
            detail: "expected header 'x,value'".into(),
        });
    }
    let mut samples = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let v = parse_floats(line, 2, "grid csv", lineno + 2)?;
        samples.push(v[1]);
    }
    GridField::new(samples)
}

/// Spectral field: header `k,re,im`, rows `k = 0..=K`.
pub fn spectral_to_csv(f: &SpectralField) -> String {
    let mut out = String::from("k,re,im\n");
    for (k, c) in f.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{k},{},{}", fmt_f64(c.re), fmt_f64(c.im));
    }
    out
}

pub fn spectral_from_csv(text: &str) -> Result<SpectralField> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != "k,re,im" {
        return Err(Error::Parse {
            context: "spectral csv".into(),
            detail: "expected header 'k,re,im'".into(),
        });
    }
    let mut coeffs = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let v = parse_floats(line, 3, "spectral csv", lineno + 2)?;
        if v[0] as usize != coeffs.len() {
            return Err(Error::Parse {
                context: "spectral csv".into(),
                detail: format!("line {}: modes must be contiguous from 0", lineno + 2),
            });
        }
        coeffs.push(Complex64::new(v[1], v[2]));
    }
    SpectralField::from_coeffs(coeffs)
}

/// Checks table: one row per check.
pub fn checks_to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from("name,status,worst,time,tolerance,note\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.name,
            r.status.as_str(),
            fmt_f64(r.worst),
            fmt_f64(r.t_worst),
            fmt_f64(r.tolerance),
            r.note.replace(',', ";")
        );
    }
    out
}

/// Human-readable one-line-per-check summary.
pub fn checks_summary(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(
            out,
            "{:<28} {:<7} worst {:>12.4e} at t = {:<10.4} tol {:>10.3e}  {}",
            r.name,
            r.status.as_str(),
            r.worst,
            r.t_worst,
            r.tolerance,
            r.note
        );
    }
    out
}

/// String configuration: header `s,X`.
pub fn string_to_csv(cfg: &StringConfig) -> String {
    let mut out = String::from("s,X\n");
    for (s, x) in cfg.labels().iter().zip(cfg.positions()) {
        let _ = writeln!(out, "{},{}", fmt_f64(*s), fmt_f64(*x));
    }
    out
}

/// Flow map: header `t,i,x`, particle-major within each time.
pub fn flow_to_csv(flow: &FlowMap) -> String {
    let mut out = String::from("t,i,x\n");
    for (ti, t) in flow.times.iter().enumerate() {
        for (i, x) in flow.positions[ti].iter().enumerate() {
            let _ = writeln!(out, "{},{i},{}", fmt_f64(*t), fmt_f64(*x));
        }
    }
    out
}

pub fn read_grid_csv(path: &Path) -> Result<GridField> {
    grid_from_csv(&std::fs::read_to_string(path)?)
}

pub fn read_spectral_csv(path: &Path) -> Result<SpectralField> {
    spectral_from_csv(&std::fs::read_to_string(path)?)
}
