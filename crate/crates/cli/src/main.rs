//! `ghk`: batch front-end for the `ghk-core` computations.
//!
//! Exit status: 0 on success, 1 when `--expect` is not met, 2 on usage,
//! input or computation errors.

mod args;
mod report;

use std::process::ExitCode;

use clap::Parser;
use ghk_core::barriers::{
    check_plane_separates, constant_c, constant_rk, margin_curve, max_axial_radius, Line, MarginFamily,
};
use ghk_core::convexity::{scan_samples, summarize, Verdict};
use ghk_core::geodesics::{find_critical_points, SeedStrategy};
use ghk_core::potential::ConfigurationFile;
use ghk_core::stability::{
    counterexample_closed_form, counterexample_segment, curvature_profile, mn_decomposition, strong_stability_scan,
    sufficient_condition, SegmentSurface,
};
use ghk_core::{PointConfiguration, Sampling, Vec3};
use serde_json::json;

use args::{Cli, Command, ConfigArg, MarginKind, OutputArgs};
use report::{Report, RunSpec, Sign};

fn load_config(arg: &ConfigArg) -> Result<(PointConfiguration, ConfigurationFile), String> {
    let text = std::fs::read_to_string(&arg.config)
        .map_err(|e| format!("cannot read config {}: {e}", arg.config.display()))?;
    let file: ConfigurationFile =
        serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", arg.config.display()))?;
    let config = file.validate().map_err(|e| format!("config {}: {e}", arg.config.display()))?;
    Ok((config, file))
}

fn sign_of(value: f64) -> Sign {
    if value > 0.0 {
        Sign::Positive
    } else if value < 0.0 {
        Sign::Negative
    } else {
        Sign::Neither
    }
}

fn fmt(v: f64) -> String {
    v.to_string()
}

fn run(command: Command) -> Result<(Report, OutputArgs), String> {
    match command {
        Command::Constants { kmax, output } => {
            if kmax < 2 {
                return Err("--kmax must be at least 2".into());
            }
            let c = constant_c();
            let table: Vec<(usize, f64)> = (2..=kmax).map(|k| (k, constant_rk(k).unwrap())).collect();
            let spec = RunSpec::new("constants", &output).params(json!({ "kmax": kmax }));
            let mut rows = vec![vec!["C".to_string(), String::new(), fmt(c)]];
            rows.extend(table.iter().map(|(k, v)| vec!["R_k".to_string(), k.to_string(), fmt(*v)]));
            let body = json!({
                "C": c,
                "R_k": table.iter().map(|(k, v)| json!({ "k": k, "value": v })).collect::<Vec<_>>(),
            });
            Ok((Report::new(spec, body, &["name", "k", "value"], rows, Sign::Positive), output))
        }
        Command::Scan {
            config,
            surface,
            k,
            grid,
            random,
            output,
        } => {
            if !(1..=3).contains(&k) {
                return Err(format!("--k must be 1, 2 or 3, got {k}"));
            }
            let (cfg, file) = load_config(&config)?;
            let surface = surface.resolve()?;
            let sampling = Sampling {
                grid: [grid, grid],
                random,
                seed: output.seed,
            };
            let samples = scan_samples(&cfg, &surface, k, &sampling).map_err(|e| e.to_string())?;
            let report = summarize(k, &samples).map_err(|e| e.to_string())?;
            let spec = RunSpec::new("scan", &output)
                .config(&config, file)
                .surface(surface)
                .k(k)
                .sampling(sampling);
            let rows = samples
                .iter()
                .flatten()
                .map(|s| {
                    vec![
                        s.index.to_string(),
                        fmt(s.params[0]),
                        fmt(s.params[1]),
                        fmt(s.x.x),
                        fmt(s.x.y),
                        fmt(s.x.z),
                        fmt(s.eigensum),
                        fmt(s.scale),
                        fmt(s.relative()),
                    ]
                })
                .collect();
            let sign = match report.verdict {
                Verdict::StrictlyConvex => Sign::Positive,
                Verdict::Violated => Sign::Negative,
                Verdict::Inconclusive => Sign::Neither,
            };
            let header = ["index", "param0", "param1", "x", "y", "z", "eigensum", "scale", "relative"];
            Ok((Report::new(spec, json!({ "report": report }), &header, rows, sign), output))
        }
        Command::Margins {
            config,
            family,
            axis_point,
            direction,
            from,
            to,
            steps,
            samples,
            output,
        } => {
            let (cfg, file) = load_config(&config)?;
            let direction = Vec3::from(direction);
            let (margin_family, threshold) = match family {
                MarginKind::Sphere => (MarginFamily::Sphere, 4.0 / 3.0 * cfg.max_centre_norm()),
                MarginKind::Codim2 => (MarginFamily::SphereCodim2, constant_c() * cfg.max_centre_norm()),
                MarginKind::Cylinder => {
                    let axis = Line::new(Vec3::from(axis_point), direction).map_err(|e| e.to_string())?;
                    (MarginFamily::Cylinder(axis), 2.0 * max_axial_radius(&cfg, &axis))
                }
                MarginKind::Plane => {
                    if direction.norm() == 0.0 {
                        return Err("--direction must be nonzero".into());
                    }
                    let n = direction.normalize();
                    let behind = cfg.centres().iter().map(|c| c.position.dot(&n)).fold(f64::NEG_INFINITY, f64::max);
                    (MarginFamily::Plane(n), behind)
                }
            };
            let scale = threshold.abs().max(1e-3 * (1.0 + cfg.diameter()));
            let (lo, hi) = match family {
                MarginKind::Plane => (
                    from.unwrap_or(threshold + 0.1 * (1.0 + cfg.diameter())),
                    to.unwrap_or(threshold + 5.0 * (1.0 + cfg.diameter())),
                ),
                _ => (from.unwrap_or(0.5 * scale), to.unwrap_or(2.0 * scale)),
            };
            if steps == 0 || samples == 0 || !(lo.is_finite() && hi.is_finite()) {
                return Err("--steps and --samples must be positive and the range finite".into());
            }
            let params: Vec<f64> = (0..steps)
                .map(|i| if steps == 1 { lo } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
                .collect();
            if let MarginFamily::Plane(n) = margin_family {
                for p in &params {
                    check_plane_separates(&cfg, &n, *p).map_err(|e| format!("plane offset {p}: {e}"))?;
                }
            }
            if matches!(family, MarginKind::Sphere | MarginKind::Codim2 | MarginKind::Cylinder)
                && params.iter().any(|p| *p <= 0.0)
            {
                return Err("radii must be positive".into());
            }
            let curve = margin_curve(&cfg, &margin_family, &params, samples, output.seed).map_err(|e| e.to_string())?;
            let above: Vec<bool> = curve.iter().map(|c| c.parameter > threshold).collect();
            let considered: Vec<f64> = if above.iter().any(|a| *a) {
                curve.iter().zip(&above).filter(|(_, a)| **a).map(|(c, _)| c.min_margin).collect()
            } else {
                curve.iter().map(|c| c.min_margin).collect()
            };
            let sign = if considered.iter().all(|m| *m > 0.0) {
                Sign::Positive
            } else if considered.iter().any(|m| *m < 0.0) {
                Sign::Negative
            } else {
                Sign::Neither
            };
            let rows = curve
                .iter()
                .zip(&above)
                .map(|(c, a)| {
                    vec![
                        fmt(c.parameter),
                        fmt(c.min_margin),
                        fmt(c.argmin[0]),
                        fmt(c.argmin[1]),
                        fmt(c.argmin[2]),
                        a.to_string(),
                    ]
                })
                .collect();
            let spec = RunSpec::new("margins", &output).config(&config, file).params(json!({
                "family": family,
                "axis_point": axis_point,
                "direction": [direction.x, direction.y, direction.z],
                "from": lo,
                "to": hi,
                "steps": steps,
                "samples": samples,
            }));
            let body = json!({ "threshold": threshold, "curve": curve });
            let header = ["parameter", "min_margin", "argmin_x", "argmin_y", "argmin_z", "above_threshold"];
            Ok((Report::new(spec, body, &header, rows, sign), output))
        }
        Command::Curvature {
            config,
            segment,
            samples,
            output,
        } => {
            if samples == 0 {
                return Err("--samples must be positive".into());
            }
            let (cfg, file) = load_config(&config)?;
            let seg = SegmentSurface::new(&cfg, segment.i, segment.j).map_err(|e| e.to_string())?;
            let profile = curvature_profile(&seg, samples).map_err(|e| e.to_string())?;
            let min_k = profile.iter().map(|s| s.k).fold(f64::INFINITY, f64::min);
            let rows = profile
                .iter()
                .map(|s| {
                    let mut row = vec![fmt(s.t), fmt(s.k), fmt(s.m), fmt(s.n)];
                    row.extend(s.terms.iter().map(|v| fmt(*v)));
                    row
                })
                .collect();
            let spec = RunSpec::new("curvature", &output)
                .config(&config, file)
                .params(json!({ "i": segment.i, "j": segment.j, "samples": samples }));
            let body = json!({ "a": seg.a(), "min_K": min_k, "profile": profile });
            let header = ["t", "K", "M", "N", "I", "II", "III", "IV"];
            Ok((Report::new(spec, body, &header, rows, sign_of(min_k)), output))
        }
        Command::Stability {
            config,
            segment,
            samples,
            output,
        } => {
            let (cfg, file) = load_config(&config)?;
            let seg = SegmentSurface::new(&cfg, segment.i, segment.j).map_err(|e| e.to_string())?;
            let scan = strong_stability_scan(&seg, samples).map_err(|e| e.to_string())?;
            let cond = sufficient_condition(&seg);
            let spec = RunSpec::new("stability", &output)
                .config(&config, file)
                .params(json!({ "i": segment.i, "j": segment.j, "samples": samples }));
            let rows = vec![vec![
                fmt(seg.a()),
                fmt(scan.min_k),
                fmt(scan.argmin_t),
                scan.strongly_stable().to_string(),
                cond.holds.to_string(),
                fmt(cond.s),
                fmt(cond.threshold),
            ]];
            let body = json!({
                "a": seg.a(),
                "min_K": scan.min_k,
                "argmin_t": scan.argmin_t,
                "strongly_stable": scan.strongly_stable(),
                "sufficient_condition": cond,
            });
            let header = ["a", "min_K", "argmin_t", "strongly_stable", "sufficient_holds", "s", "threshold"];
            Ok((Report::new(spec, body, &header, rows, sign_of(scan.min_k)), output))
        }
        Command::Geodesics { config, random, output } => {
            let (cfg, file) = load_config(&config)?;
            let strategy = SeedStrategy {
                random,
                seed: output.seed,
            };
            let found = find_critical_points(&cfg, &strategy).map_err(|e| e.to_string())?;
            let required = cfg.len().saturating_sub(1);
            let sign = if found.points.len() >= required {
                Sign::Positive
            } else {
                Sign::Negative
            };
            let rows = found
                .points
                .iter()
                .map(|p| {
                    vec![
                        fmt(p.x[0]),
                        fmt(p.x[1]),
                        fmt(p.x[2]),
                        fmt(p.residual),
                        fmt(p.length),
                        p.in_hull.to_string(),
                        p.hessian_signature.positive.to_string(),
                        p.hessian_signature.negative.to_string(),
                        p.hessian_signature.zero.to_string(),
                        p.degenerate.to_string(),
                    ]
                })
                .collect();
            let spec = RunSpec::new("geodesics", &output)
                .config(&config, file)
                .params(json!({ "random": random }));
            let body = json!({
                "required": required,
                "seeds": found.seeds,
                "non_converged": found.non_converged,
                "points": found.points,
            });
            let header = ["x", "y", "z", "residual", "length", "in_hull", "positive", "negative", "zero", "degenerate"];
            Ok((Report::new(spec, body, &header, rows, sign), output))
        }
        Command::Counterexample { a, eps, m, output } => {
            let value = counterexample_closed_form(a, eps, m).map_err(|e| e.to_string())?;
            let sample = mn_decomposition(&counterexample_segment(a, eps, m).map_err(|e| e.to_string())?, 0.0)
                .map_err(|e| e.to_string())?;
            let spec = RunSpec::new("counterexample", &output).params(json!({ "a": a, "eps": eps, "m": m }));
            let rows = vec![vec![fmt(a), fmt(eps), fmt(m), fmt(value), fmt(sample.k)]];
            let body = json!({
                "M_plus_N": value,
                "K_at_midpoint": sample.k,
                "negative_curvature": value > 0.0,
            });
            Ok((Report::new(spec, body, &["a", "eps", "m", "M_plus_N", "K"], rows, sign_of(value)), output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((report, output)) => {
            eprintln!("seed: {}", output.seed);
            if let Err(e) = report.write(&output) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            match report.check(output.expect) {
                Ok(()) => ExitCode::SUCCESS,
                Err(msg) => {
                    eprintln!("expectation not met: {msg}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
