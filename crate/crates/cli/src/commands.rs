use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use schwartzkit::battery::{pairing_battery, Target};
use schwartzkit::delta::{
    build_compact_approximant, build_schwartz_approximant, pairing_convergence, BoundSequence,
    DeltaApproximant,
};
use schwartzkit::factorize::{
    default_seminorms, strong_factorize, weak_factorize_compact, BoundPolicy, FactorizationResult,
};
use schwartzkit::gridfn::{io::write_csv, rapid_decay_profile, GridFunction};
use schwartzkit::hadamard::{reciprocal_product_grid, robust_transform, schwartz_certificate};
use schwartzkit::Grid;

use crate::config::{parse_target, parse_zeros, Command, ConfigError, Flavor, Format, GridSpec, RunConfig};
use crate::criteria;
use crate::report::{Metric, Report};

/// Grid used when the configuration names none; `None` for commands that
/// work without one.
pub fn default_grid(command: Command, flavor: Flavor) -> Option<GridSpec> {
    let (l, n) = match command {
        Command::VerifyMainTheorem => (24.0, 4096),
        // f = ω·ψ varies on the scale 1/(2π a₁), a few samples at N = 4096;
        // P_N f̂ in the pairings needs it resolved, while Φ = P_N(D)φ in the
        // factorization loses accuracy to rounding on finer grids
        Command::Delta if flavor == Flavor::Compact => (16.0, 16384),
        Command::Factorize if flavor == Flavor::Compact => (16.0, 4096),
        Command::Factorize | Command::Delta => (48.0, 8192),
        Command::Poisson => (64.0, 4096),
        Command::Growth | Command::Suite => return None,
    };
    Some(GridSpec::new(l, n))
}

/// Fills per-command defaults and checks the result against the
/// preconditions of the routines it will be handed to.
pub fn resolve(mut c: RunConfig) -> Result<RunConfig, ConfigError> {
    let command = c
        .command
        .ok_or_else(|| ConfigError::new("command", "no command given"))?;
    let flavor = c.flavor.unwrap_or_default();
    let compact = flavor == Flavor::Compact;
    if let Some(d) = default_grid(command, flavor) {
        c.grid.get_or_insert(d).grid()?;
    }
    c.format.get_or_insert(Format::Json);
    c.seed.get_or_insert(0);
    if let Some(t) = c.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(ConfigError::new("tolerance", format!("{t} must be positive")));
        }
    }
    match command {
        Command::VerifyMainTheorem => {
            let l = c.grid.expect("set above").half_width;
            let spec = c.zeros.get_or_insert_with(|| "linear:pi".into());
            let zeros = parse_zeros(spec, l)?;
            // files are read once; the echo carries their contents
            if spec.starts_with('@') {
                *spec = zeros.to_json().map_err(|e| ConfigError::new("zeros", e.to_string()))?;
            }
            c.orders.get_or_insert((4, 6));
        }
        Command::Factorize | Command::Delta => {
            c.flavor = Some(flavor);
            let j = *c.terms.get_or_insert(6);
            let nf = *c.factors.get_or_insert(6);
            if nf == 0 {
                return Err(ConfigError::new("N_factors", "need at least one factor"));
            }
            if j > nf {
                return Err(ConfigError::new("J", format!("J = {j} exceeds N_factors = {nf}")));
            }
            if let Some(b) = &c.bounds {
                if b.len() <= j {
                    return Err(ConfigError::new(
                        "bounds",
                        format!("need {} bounds, got {}", j + 1, b.len()),
                    ));
                }
                BoundSequence::new(b.clone()).map_err(|e| ConfigError::new("bounds", e.to_string()))?;
            }
            if compact {
                let l = c.grid.expect("set above").half_width;
                let s = *c.sigma.get_or_insert(1.0);
                if !(s > 0.0 && 2.0 * s < l / 4.0) {
                    return Err(ConfigError::new(
                        "sigma",
                        format!("σ = {s} needs 0 < 2σ < L/4 = {}", l / 4.0),
                    ));
                }
            }
            let default: Vec<Target> = match (command, compact) {
                (Command::Factorize, false) => vec![Target::unit_gaussian()],
                (Command::Factorize, true) => vec![Target::Bump {
                    radius: c.sigma.unwrap_or(1.0),
                }],
                _ => pairing_battery(),
            };
            let labels = c
                .battery
                .get_or_insert_with(|| default.iter().map(Target::label).collect());
            for label in labels.iter() {
                parse_target(label)?;
            }
        }
        Command::Poisson | Command::Growth | Command::Suite => {}
    }
    Ok(c)
}

fn targets(c: &RunConfig) -> Vec<Target> {
    c.battery
        .as_ref()
        .map(|v| v.iter().filter_map(|l| parse_target(l).ok()).collect())
        .unwrap_or_default()
}

fn bounds(c: &RunConfig) -> Option<BoundSequence> {
    c.bounds.as_ref().and_then(|b| BoundSequence::new(b.clone()).ok())
}

fn grid(c: &RunConfig) -> Grid {
    c.grid
        .expect("resolved configs carry a grid")
        .grid()
        .expect("resolved grids are valid")
}

/// Writes `f` as CSV under `dir` and records the path.
fn emit(report: &mut Report, dir: Option<&Path>, name: &str, f: &GridFunction) {
    if let Some(dir) = dir {
        let path = dir.join(name);
        match File::create(&path)
            .map_err(schwartzkit::Error::from)
            .and_then(|w| write_csv(f, w))
        {
            Ok(()) => report.artifacts.push(path),
            Err(e) => report.errors.push(format!("{}: {e}", path.display())),
        }
    }
}

fn emit_text(report: &mut Report, dir: Option<&Path>, name: &str, text: &[u8]) {
    if let Some(dir) = dir {
        let path = dir.join(name);
        match File::create(&path).and_then(|mut w| w.write_all(text)) {
            Ok(()) => report.artifacts.push(path),
            Err(e) => report.errors.push(format!("{}: {e}", path.display())),
        }
    }
}

/// Runs a resolved configuration.
pub fn execute(config: RunConfig) -> Report {
    let start = Instant::now();
    let command = config.command.expect("resolved configs carry a command");
    let dir: Option<PathBuf> = config.out.clone();
    if let Some(d) = &dir {
        let _ = std::fs::create_dir_all(d);
    }
    let mut report = Report::new(command.name(), config.clone());
    let dir = dir.as_deref();
    match command {
        Command::VerifyMainTheorem => verify_main_theorem(&config, &mut report, dir),
        Command::Factorize => factorize(&config, &mut report, dir),
        Command::Delta => delta(&config, &mut report, dir),
        Command::Poisson => poisson(&config, &mut report, dir),
        Command::Growth => report.extend(criteria::growth(config.tolerance.unwrap_or(0.02))),
        Command::Suite => suite(&config, &mut report),
    }
    report.wall_time = start.elapsed().as_secs_f64();
    report
}

fn verify_main_theorem(c: &RunConfig, report: &mut Report, dir: Option<&Path>) {
    let fam = "main_theorem";
    let spec = c.grid.expect("resolved");
    let zeros = match parse_zeros(c.zeros.as_deref().unwrap_or("linear:pi"), spec.half_width) {
        Ok(z) => z,
        Err(e) => return report.fail(fam, "zeros", e.to_string()),
    };
    let orders = c.orders.unwrap_or((4, 6));
    match schwartz_certificate(&zeros, spec.half_width, spec.len, orders) {
        Ok(cert) => {
            report.push(Metric::count(fam, "certificate_failures", cert.failures.len()));
            report.errors.extend(cert.failures.iter().cloned());
            let expected = 2.0 * std::f64::consts::PI * zeros.first();
            report.push(Metric::new(
                fam,
                "decay_rate.relative_error",
                (cert.decay.rate / expected - 1.0).abs(),
                c.tolerance.unwrap_or(0.02),
            ));
        }
        Err(e) => report.fail(fam, "certificate", e.to_string()),
    }
    match reciprocal_product_grid(&zeros, spec.half_width, spec.len) {
        Ok(f) => {
            let powers: Vec<u32> = (0..=orders.0 + 2).collect();
            let profile = rapid_decay_profile(&f, &powers);
            report.push(Metric::count(
                fam,
                "non_finite_decay_profile",
                (!profile.all_finite()) as usize,
            ));
            emit(report, dir, "f.csv", &f);
            match robust_transform(&f) {
                Ok(fh) => emit(report, dir, "f_hat.csv", &fh),
                Err(e) => report.fail(fam, "transform", e.to_string()),
            }
        }
        Err(e) => report.fail(fam, "samples", e.to_string()),
    }
}

fn factorization_metrics(label: &str, r: &FactorizationResult, tol: f64, compact: bool) -> Vec<Metric> {
    let fam = "factorize";
    let norm = r.phi.max_abs();
    let rel = if norm > 0.0 {
        r.residual_sup / norm
    } else {
        r.residual_sup
    };
    let mut out = vec![Metric::new(fam, format!("{label}.relative_residual"), rel, tol)];
    if compact {
        let s = r.support.expect("compact results carry supports");
        out.push(Metric::new(fam, format!("{label}.h_inner"), s.h_inner, 1e-6));
        out.push(Metric::new(
            fam,
            format!("{label}.outside_4sigma"),
            s.max_outside(),
            1e-6,
        ));
    } else {
        out.push(Metric::count(
            fam,
            format!("{label}.trace_increases"),
            r.residual_not_decreasing as usize,
        ));
    }
    out
}

fn factorize(c: &RunConfig, report: &mut Report, dir: Option<&Path>) {
    let fam = "factorize";
    let g = grid(c);
    let (j, n) = (c.terms.unwrap_or(6), c.factors.unwrap_or(6));
    let compact = c.flavor == Some(Flavor::Compact);
    let tol = c.tolerance.unwrap_or(if compact { 1e-5 } else { 1e-9 });
    let appx = if compact {
        let b = bounds(c).unwrap_or_else(|| BoundSequence::uniform(1.0, j + 1).expect("positive"));
        match build_compact_approximant(&b, j, n, g, c.sigma.unwrap_or(1.0)) {
            Ok(a) => Some(a),
            Err(e) => return report.fail(fam, "approximant", e.to_string()),
        }
    } else {
        None
    };
    let policy = match bounds(c) {
        Some(b) => BoundPolicy::Fixed(b),
        None => BoundPolicy::Diagonal,
    };
    let results: Vec<_> = targets(c)
        .par_iter()
        .map(|t| {
            let r = t.sample(g).and_then(|phi| match &appx {
                Some(a) => weak_factorize_compact(&phi, a),
                None => strong_factorize(&phi, j, n, &policy, &default_seminorms()),
            });
            (t.label(), r)
        })
        .collect();
    for (label, r) in results {
        match r {
            Ok(r) => {
                let r = r.with_target(label.clone());
                report.extend(factorization_metrics(&label, &r, tol, compact));
                if let Ok(json) = r.to_json() {
                    emit_text(
                        report,
                        dir,
                        &format!("factorization_{label}.json"),
                        json.as_bytes(),
                    );
                }
                emit(report, dir, &format!("{label}_big_phi.csv"), &r.big_phi);
                emit(report, dir, &format!("{label}_kernel.csv"), &r.psi);
                if let Some(h) = &r.h {
                    emit(report, dir, &format!("{label}_h.csv"), h);
                }
            }
            Err(e) => report.fail(fam, &label, format!("{label}: {e}")),
        }
    }
}

fn approximant(c: &RunConfig) -> schwartzkit::Result<DeltaApproximant> {
    let g = grid(c);
    let (j, n) = (c.terms.unwrap_or(6), c.factors.unwrap_or(6));
    let b = match bounds(c) {
        Some(b) => b,
        None => BoundSequence::uniform(1.0, j + 1)?,
    };
    if c.flavor == Some(Flavor::Compact) {
        build_compact_approximant(&b, j, n, g, c.sigma.unwrap_or(1.0))
    } else {
        build_schwartz_approximant(&b, j, n, g)
    }
}

fn delta(c: &RunConfig, report: &mut Report, dir: Option<&Path>) {
    let fam = "delta";
    let compact = c.flavor == Some(Flavor::Compact);
    let tol = c.tolerance.unwrap_or(if compact { 1e-6 } else { 1e-9 });
    let appx = match approximant(c) {
        Ok(a) => a,
        Err(e) => return report.fail(fam, "approximant", e.to_string()),
    };
    if let Ok(json) = appx.to_json() {
        emit_text(report, dir, "approximant.json", json.as_bytes());
    }
    let half = appx.terms().div_ceil(2);
    let mut not_monotone = 0;
    for t in targets(c) {
        let label = t.label();
        let trace = t
            .sample(appx.grid())
            .and_then(|tau| pairing_convergence(&appx, &tau));
        match trace {
            Ok(trace) => {
                let trace = trace.with_label(label.clone());
                let full = trace.final_error();
                if !(full <= trace.error_at(half).unwrap_or(f64::NAN)) {
                    not_monotone += 1;
                }
                report.push(Metric::new(fam, format!("{label}.final_error"), full, tol));
                let mut buf = Vec::new();
                if trace.write_csv(&mut buf).is_ok() {
                    emit_text(report, dir, &format!("pairing_{label}.csv"), &buf);
                }
            }
            Err(e) => report.fail(fam, &label, format!("{label}: {e}")),
        }
    }
    report.push(Metric::count(fam, "non_monotone_traces", not_monotone));
}

fn poisson(c: &RunConfig, report: &mut Report, dir: Option<&Path>) {
    let (metrics, spectra) = criteria::poisson(grid(c), c.tolerance.unwrap_or(1e-6));
    report.extend(metrics.into_iter().map(|mut m| {
        m.family = "poisson".into();
        m
    }));
    for (a, s) in spectra {
        emit(report, dir, &format!("poisson_a{a}.csv"), &s);
    }
}

fn suite(c: &RunConfig, report: &mut Report) {
    let seed = c.seed.unwrap_or(0);
    let results: Vec<Vec<Metric>> = (1..=criteria::COUNT)
        .into_par_iter()
        .map(|k| criteria::run(k, seed))
        .collect();
    for ms in results {
        report.extend(ms);
    }
}
