//! File formats for core types: CSV side files and the spectrum-atom JSON
//! array. Floats are written with 13 significant digits.

use std::fmt::Write as _;

use specgap_core::density::{DensityProfile, SupportGaps};
use specgap_core::oracle::Histogram;
use specgap_core::simulate::EigenSample;
use specgap_core::spectrum::JointSpectrum;

fn push_f64(out: &mut String, x: f64) {
    write!(out, "{x:.12e}").expect("write to string");
}

/// `x,f,v`: one row per grid node.
pub fn density_csv(profile: &DensityProfile) -> String {
    let mut out = String::from("x,f,v\n");
    for (&x, &f) in profile.xs().iter().zip(profile.fs()) {
        push_f64(&mut out, x);
        out.push(',');
        push_f64(&mut out, f);
        out.push(',');
        push_f64(&mut out, profile.v_used());
        out.push('\n');
    }
    out
}

/// `x,F`: cumulative distribution points.
pub fn cdf_csv(cdf: &[(f64, f64)]) -> String {
    let mut out = String::from("x,F\n");
    for &(x, f) in cdf {
        push_f64(&mut out, x);
        out.push(',');
        push_f64(&mut out, f);
        out.push('\n');
    }
    out
}

/// `trial,index,lambda`: eigenvalues of one or more samples.
pub fn eigenvalues_csv(samples: &[(u64, &EigenSample)]) -> String {
    let mut out = String::from("trial,index,lambda\n");
    for (trial, sample) in samples {
        for (index, &l) in sample.eigenvalues().iter().enumerate() {
            write!(out, "{trial},{index},").expect("write to string");
            push_f64(&mut out, l);
            out.push('\n');
        }
    }
    out
}

/// `bin_lo,bin_hi,mass`: histogram rows.
pub fn histogram_csv(hist: &Histogram) -> String {
    let mut out = String::from("bin_lo,bin_hi,mass\n");
    for (i, &m) in hist.masses.iter().enumerate() {
        push_f64(&mut out, hist.edges[i]);
        out.push(',');
        push_f64(&mut out, hist.edges[i + 1]);
        out.push(',');
        push_f64(&mut out, m);
        out.push('\n');
    }
    out
}

/// Spectrum atoms as a JSON array of `{"u", "t", "w"}` objects.
pub fn atoms_json(h: &JointSpectrum) -> String {
    let rows: Vec<serde_json::Value> = h
        .atoms()
        .iter()
        .map(|a| serde_json::json!({"u": a.u, "t": a.t, "w": a.w}))
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("atoms serialization");
    s.push('\n');
    s
}

/// Support gaps as a JSON list of `{"c","a","b","d","exterior"}`.
pub fn gaps_json(gaps: &SupportGaps) -> String {
    let rows: Vec<serde_json::Value> = gaps
        .gaps
        .iter()
        .map(|g| {
            serde_json::json!({
                "c": g.c, "a": g.a, "b": g.b, "d": g.d, "exterior": g.exterior
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("gaps serialization");
    s.push('\n');
    s
}
