//! The experiment runners: reproducible pipelines from a validated config
//! to a report plus CSV side files. Reports are pure functions of
//! (config, seed) apart from their `runtime_ms` field.

use std::time::Instant;

use specgap_core::density::{cdf, certify_gap, density_grid, detect_gaps, SupportGaps};
use specgap_core::simulate::{
    count_in_interval, empirical_stieltjes, ks_distance, sample_eigenvalues, EnsembleSpec,
};
use specgap_core::solver::solve_primal;
use specgap_core::spectrum::JointSpectrum;
use specgap_core::C64;

use crate::config::ExperimentConfig;
use crate::report::{
    to_json, CertificateReport, GapEntry, GapReport, GapVerifyEntry, GapsReport, KsSection,
    LsdReport, RateReport, RateRow, SCHEMA_VERSION,
};
use crate::{formats, CliError};

/// A side file: name suffix (appended to the report stem) and content.
pub type SideFile = (String, String);

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len();
    Some(if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    })
}

struct ScanOutput {
    profile: specgap_core::density::DensityProfile,
    gaps: SupportGaps,
    certificates: Vec<CertificateReport>,
}

/// Shared pipeline: density grid → gap detection → certification of every
/// detected region (exterior ones included; they are reported, never
/// silently dropped).
fn scan(config: &ExperimentConfig, h: &JointSpectrum) -> Result<ScanOutput, CliError> {
    config.validate_grid()?;
    let opts = config.solver.options();
    let profile = density_grid(
        config.grid.lo,
        config.grid.hi,
        config.grid.points,
        config.y,
        h,
        &opts,
        config.solver.v_eval,
    )?;
    let gaps = detect_gaps(
        &profile,
        config.gap.f_threshold,
        config.gap.min_width_steps,
        config.gap.margin_frac,
    )?;
    let mut certificates = Vec::with_capacity(gaps.gaps.len());
    for g in &gaps.gaps {
        let cert = certify_gap(
            (g.a, g.b),
            config.y,
            h,
            &opts,
            config.solver.v_eval,
            config.gap.probe_points.max(3),
        )?;
        certificates.push(cert.into());
    }
    Ok(ScanOutput {
        profile,
        gaps,
        certificates,
    })
}

/// Density/CDF emission plus per-trial Kolmogorov–Smirnov distances of
/// simulated spectra against the solver CDF; summary is the median KS.
pub fn run_lsd_experiment(
    config: &ExperimentConfig,
) -> Result<(LsdReport, Vec<SideFile>), CliError> {
    let start = Instant::now();
    let h = config.spectrum()?;
    config.validate_grid()?;
    let opts = config.solver.options();
    let profile = density_grid(
        config.grid.lo,
        config.grid.hi,
        config.grid.points,
        config.y,
        h_ref(&h),
        &opts,
        config.solver.v_eval,
    )?;
    let cdf_points = cdf(&profile);
    let total_mass = cdf_points.last().map(|&(_, f)| f).unwrap_or(0.0);

    let mut side = vec![
        ("density.csv".to_string(), formats::density_csv(&profile)),
        ("cdf.csv".to_string(), formats::cdf_csv(&cdf_points)),
        ("atoms.json".to_string(), formats::atoms_json(&h)),
    ];

    let mut per_trial = Vec::new();
    if config.trials > 0 {
        let spec = config.ensemble_spec()?;
        let mut rows = Vec::new();
        let mut samples = Vec::new();
        for trial in 0..config.trials {
            samples.push((trial, sample_eigenvalues(&spec, trial)?));
        }
        for (trial, sample) in &samples {
            per_trial.push(ks_distance(sample, &cdf_points)?);
            rows.push((*trial, sample));
        }
        side.push(("eigenvalues.csv".to_string(), formats::eigenvalues_csv(&rows)));
    }
    let report = LsdReport {
        schema: SCHEMA_VERSION,
        kind: "lsd".to_string(),
        config: config.clone(),
        zero_mass: profile.zero_mass(),
        total_mass,
        ks: KsSection {
            trials: config.trials,
            median: median(per_trial.clone()),
            per_trial,
        },
        artifacts: side.iter().map(|(name, _)| name.clone()).collect(),
        runtime_ms: start.elapsed().as_millis(),
    };
    Ok((report, side))
}

fn h_ref(h: &JointSpectrum) -> &JointSpectrum {
    h
}

/// Gap detection and certification only.
pub fn run_gaps_scan(config: &ExperimentConfig) -> Result<(GapsReport, Vec<SideFile>), CliError> {
    let start = Instant::now();
    let h = config.spectrum()?;
    let out = scan(config, &h)?;
    let total_mass = cdf(&out.profile).last().map(|&(_, f)| f).unwrap_or(0.0);
    let gaps = out
        .gaps
        .gaps
        .iter()
        .zip(&out.certificates)
        .map(|(g, cert)| GapEntry {
            c: g.c,
            a: g.a,
            b: g.b,
            d: g.d,
            exterior: g.exterior,
            certificate: cert.clone(),
        })
        .collect();
    let side = vec![
        ("density.csv".to_string(), formats::density_csv(&out.profile)),
        ("gaps.json".to_string(), formats::gaps_json(&out.gaps)),
    ];
    let report = GapsReport {
        schema: SCHEMA_VERSION,
        kind: "gaps".to_string(),
        config: config.clone(),
        zero_mass: out.profile.zero_mass(),
        total_mass,
        gaps,
        runtime_ms: start.elapsed().as_millis(),
    };
    Ok((report, side))
}

/// Full no-eigenvalues-in-gap check: detect, certify, then count
/// eigenvalues of `trials` independent realizations inside each certified
/// interior gap.
pub fn run_gap_experiment(
    config: &ExperimentConfig,
) -> Result<(GapReport, Vec<SideFile>), CliError> {
    let start = Instant::now();
    if config.trials == 0 {
        return Err(CliError::Validation(
            "verify-gap needs trials ≥ 1 (use --trials or the config)".into(),
        ));
    }
    let h = config.spectrum()?;
    let spec = config.ensemble_spec()?;
    let out = scan(config, &h)?;

    let interior: Vec<usize> = (0..out.gaps.gaps.len())
        .filter(|&i| !out.gaps.gaps[i].exterior)
        .collect();
    if interior.is_empty() {
        return Err(CliError::NoGapFound);
    }
    if !interior.iter().any(|&i| out.certificates[i].valid) {
        let detail = interior
            .iter()
            .map(|&i| {
                let g = &out.gaps.gaps[i];
                let c = &out.certificates[i];
                format!(
                    "[{:.4}, {:.4}] (delta_min {:.3e}, slope_min {:.3e}, im_max {:.3e})",
                    g.a, g.b, c.delta_min, c.slope_min, c.im_max
                )
            })
            .collect::<Vec<_>>()
            .join("; ");
        return Err(CliError::CertificationFailed(detail));
    }

    // one pass over the trials covers every certified interior gap
    let mut violations = vec![0u64; out.gaps.gaps.len()];
    let mut max_count = vec![0usize; out.gaps.gaps.len()];
    for trial in 0..config.trials {
        let sample = sample_eigenvalues(&spec, trial)?;
        for &i in &interior {
            if !out.certificates[i].valid {
                continue;
            }
            let g = &out.gaps.gaps[i];
            let count = count_in_interval(&sample, g.a, g.b);
            if count > 0 {
                violations[i] += 1;
            }
            max_count[i] = max_count[i].max(count);
        }
    }

    let gaps = out
        .gaps
        .gaps
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let counted = !g.exterior && out.certificates[i].valid;
            GapVerifyEntry {
                c: g.c,
                a: g.a,
                b: g.b,
                d: g.d,
                exterior: g.exterior,
                certificate: out.certificates[i].clone(),
                trials: counted.then_some(config.trials),
                violations: counted.then_some(violations[i]),
                max_count: counted.then_some(max_count[i]),
            }
        })
        .collect();
    let side = vec![
        ("density.csv".to_string(), formats::density_csv(&out.profile)),
        ("gaps.json".to_string(), formats::gaps_json(&out.gaps)),
    ];
    let report = GapReport {
        schema: SCHEMA_VERSION,
        kind: "verify-gap".to_string(),
        config: config.clone(),
        gaps,
        runtime_ms: start.elapsed().as_millis(),
    };
    Ok((report, side))
}

/// Convergence-rate ladder: at a gap point `x`, compares the empirical
/// transform of finite samples against the finite-`n` solver value at
/// `z = x + i n^{-δ}` across the dimension ladder.
pub fn run_rate_experiment(
    config: &ExperimentConfig,
) -> Result<(RateReport, Vec<SideFile>), CliError> {
    let start = Instant::now();
    let rate = config.rate.clone().unwrap_or_default();
    if !(rate.delta > 0.0 && rate.delta <= 0.1) {
        return Err(CliError::Validation(format!(
            "rate.delta = {} must lie in (0, 1/10]",
            rate.delta
        )));
    }
    if rate.n_list.is_empty() || rate.seeds == 0 {
        return Err(CliError::Validation(
            "rate.n_list must be nonempty and rate.seeds ≥ 1".into(),
        ));
    }
    let mut n_list = rate.n_list.clone();
    n_list.sort_unstable();
    n_list.dedup();

    let h = config.spectrum()?;
    let ensemble = config.ensemble.as_ref().ok_or_else(|| {
        CliError::Validation("rate needs an \"ensemble\" section (entry_dist and seed)".into())
    })?;
    let out = scan(config, &h)?;
    let certified: Vec<(f64, f64)> = out
        .gaps
        .gaps
        .iter()
        .zip(&out.certificates)
        .filter(|(g, c)| !g.exterior && c.valid)
        .map(|(g, _)| (g.a, g.b))
        .collect();
    let x = match rate.x {
        Some(x) => x,
        None => {
            let &(a, b) = certified.first().ok_or(CliError::NoGapFound)?;
            0.5 * (a + b)
        }
    };
    let x_in_certified_gap = certified.iter().any(|&(a, b)| a <= x && x <= b);

    let opts = config.solver.options();
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in &n_list {
        let p = (config.y * n as f64).round() as usize;
        if p == 0 {
            return Err(CliError::Validation(format!(
                "n = {n} gives p = round(y·n) = 0"
            )));
        }
        let v_n = (n as f64).powf(-rate.delta);
        let z = C64::new(x, v_n);
        let spec_n = EnsembleSpec::from_joint_spectrum(
            &h,
            p,
            n,
            ensemble.entry_dist.into(),
            ensemble.seed,
        )?;
        let h_n = spec_n.induced_spectrum()?;
        let y_n = p as f64 / n as f64;
        let s0 = solve_primal(z, y_n, &h_n, &opts)?.s;
        let mut abs_err = Vec::with_capacity(rate.seeds as usize);
        for trial in 0..rate.seeds {
            let sample = sample_eigenvalues(&spec_n, trial)?;
            abs_err.push((empirical_stieltjes(&sample, z) - s0).norm());
        }
        let med = median(abs_err).expect("seeds ≥ 1");
        rows.push(RateRow {
            n,
            v_n,
            median_abs: med,
            median_scaled: n as f64 * v_n * med,
        });
    }

    let mut rate_csv = String::from("n,v_n,median_abs,median_scaled\n");
    for r in &rows {
        rate_csv.push_str(&format!(
            "{},{:.12e},{:.12e},{:.12e}\n",
            r.n, r.v_n, r.median_abs, r.median_scaled
        ));
    }
    let side = vec![
        ("density.csv".to_string(), formats::density_csv(&out.profile)),
        ("rate.csv".to_string(), rate_csv),
    ];
    let report = RateReport {
        schema: SCHEMA_VERSION,
        kind: "rate".to_string(),
        config: config.clone(),
        x,
        x_in_certified_gap,
        delta: rate.delta,
        seeds: rate.seeds,
        rows,
        runtime_ms: start.elapsed().as_millis(),
    };
    Ok((report, side))
}

/// Renders a report and its side files under the given output path: the
/// report at `out`, side files as `<out stem>.<suffix>`.
pub fn write_outputs<T: serde::Serialize>(
    out: &std::path::Path,
    report: &T,
    side: &[SideFile],
) -> Result<(), CliError> {
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(out, to_json(report))?;
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".to_string());
    for (suffix, content) in side {
        let name = format!("{stem}.{suffix}");
        let path = out.with_file_name(name);
        std::fs::write(path, content)?;
    }
    Ok(())
}
