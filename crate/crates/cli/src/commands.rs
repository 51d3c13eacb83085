use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use spinshift::basis::{binomial, enumerate_sector};
use spinshift::bethe::{
    bethe_energy, distinct_solutions, solve_all, solve_bethe, BetheRoots, QuantumNumberSet,
};
use spinshift::hsm::hs_energy;
use spinshift::models::{build_hamiltonian_with, HamiltonianSpec, Model};
use spinshift::oracle::{eig_hermitian, eigen_residual, rayleigh, spectrum_match};
use spinshift::resonance::{dipole_from_ladder, resonance_scan, DriveField, LevelSystem, ScanSettings};
use spinshift::shift::{family_state, AmplitudeFamily};
use spinshift::verify::{run_suite, CheckResult, VerifyOptions};
use spinshift::{Error, Exec};

use crate::report::{cell, num, nums, Report};
use crate::{BetheArgs, Common, ModelArg, ResonanceArgs, SpectrumArgs, VerifyArgs};

/// Largest sector handed to the dense eigensolver.
pub const SPECTRUM_MAX_DIM: usize = 1000;
/// Bethe predictions are attempted up to this many roots.
const MAX_PREDICTED_ROOTS: usize = 3;

pub enum Failure {
    Usage(String),
    Science(String),
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn science(e: impl ToString) -> Failure {
    Failure::Science(e.to_string())
}

fn check(name: impl Into<String>, value: f64, tolerance: f64, detail: Option<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed: value <= tolerance,
        value,
        tolerance,
        detail,
    }
}

fn failed(name: impl Into<String>, detail: String) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed: false,
        value: f64::NAN,
        tolerance: 0.0,
        detail: Some(detail),
    }
}

fn positive(name: &str, x: f64) -> Outcome<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(usage(format!("--{name} must be positive, got {x}")))
    }
}

impl Common {
    fn sites(&self) -> Outcome<usize> {
        self.n.ok_or_else(|| usage("--n is required"))
    }

    fn spec(&self) -> Outcome<HamiltonianSpec> {
        let n = self.sites()?;
        let model = match self.model {
            ModelArg::Xxx => Model::Xxx { j: self.j },
            ModelArg::Hs => Model::Hs { j0: self.j0 },
        };
        HamiltonianSpec::new(model, n).map_err(usage)
    }
}

fn base_config(spec: &HamiltonianSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("model".into(), json!(spec.name()));
    m.insert("n".into(), json!(spec.n_sites()));
    m.insert("coupling".into(), num(spec.coupling()));
    m
}

fn sector_eigenvalues(spec: &HamiltonianSpec, r: usize, exec: Exec) -> Outcome<Vec<f64>> {
    let sector = Arc::new(enumerate_sector(spec.n_sites(), r).map_err(usage)?);
    let h = build_hamiltonian_with(spec, &sector, exec).map_err(science)?;
    Ok(eig_hermitian(&h).map_err(science)?.eigenvalues().to_vec())
}

struct Prediction {
    label: String,
    energy: f64,
}

fn predictions(spec: &HamiltonianSpec, r: usize, exec: Exec) -> Outcome<Vec<Prediction>> {
    let n = spec.n_sites();
    let c = spec.coupling();
    let mut out = Vec::new();
    match spec.model() {
        Model::Xxx { .. } => match r {
            0 => out.push(Prediction {
                label: "vacuum".into(),
                energy: 0.0,
            }),
            1 => {
                for k in 0..n {
                    out.push(Prediction {
                        label: format!("k={k}"),
                        energy: c * ((TAU * k as f64 / n as f64).cos() - 1.0),
                    });
                }
            }
            r if r <= MAX_PREDICTED_ROOTS && r <= n / 2 => {
                for roots in distinct_solutions(&solve_all(n, r, exec)) {
                    out.push(Prediction {
                        label: roots.quantum_numbers().to_string(),
                        energy: bethe_energy(&roots, c).map_err(science)?,
                    });
                }
            }
            _ => {}
        },
        Model::Hs { .. } => {
            if r <= n / 2 {
                out.push(Prediction {
                    label: format!("jastrow r={r}"),
                    energy: hs_energy(n, r, c).map_err(science)?,
                });
            }
        }
    }
    Ok(out)
}

pub fn spectrum(args: &SpectrumArgs) -> Outcome<Report> {
    let spec = args.common.spec()?;
    let tol = positive("tol", args.tol)?;
    let n = spec.n_sites();
    let sectors: Vec<usize> = if args.sector.is_empty() {
        (0..=n).filter(|&r| binomial(n, r) <= SPECTRUM_MAX_DIM).collect()
    } else {
        for &r in &args.sector {
            if r > n {
                return Err(usage(format!("sector {r} exceeds N = {n}")));
            }
            if binomial(n, r) > SPECTRUM_MAX_DIM {
                return Err(usage(format!(
                    "sector {r} has {} states, above the dense limit {SPECTRUM_MAX_DIM}",
                    binomial(n, r)
                )));
            }
        }
        args.sector.clone()
    };

    let mut config = base_config(&spec);
    config.insert("sectors".into(), json!(sectors));
    config.insert("tol".into(), num(tol));
    let mut report = Report::new("spectrum", config);
    let mut rows = Vec::new();
    let exec = Exec::default();
    for &r in &sectors {
        let eigs = sector_eigenvalues(&spec, r, exec)?;
        let preds = predictions(&spec, r, exec)?;
        let mut worst = 0.0f64;
        let mut pred_json = Vec::new();
        for (i, e) in eigs.iter().enumerate() {
            rows.push(vec![r.to_string(), "eigenvalue".into(), i.to_string(), cell(*e), String::new(), String::new()]);
        }
        for p in &preds {
            let m = spectrum_match(&eigs, p.energy, tol).map_err(science)?;
            worst = worst.max(m.gap);
            pred_json.push(json!({
                "label": p.label,
                "energy": num(p.energy),
                "nearest": num(m.nearest),
                "gap": num(m.gap),
            }));
            rows.push(vec![
                r.to_string(),
                "prediction".into(),
                p.label.clone(),
                cell(p.energy),
                cell(m.nearest),
                cell(m.gap),
            ]);
        }
        report.results.push(json!({
            "sector": r,
            "dim": eigs.len(),
            "eigenvalues": nums(&eigs),
            "predictions": pred_json,
        }));
        if !preds.is_empty() {
            report.checks.push(check(
                format!("sector{r}_prediction_gap"),
                worst,
                tol,
                Some(format!("{} predictions", preds.len())),
            ));
        }
    }
    report.table = (vec!["sector", "kind", "label", "energy", "nearest", "gap"], rows);
    Ok(report)
}

pub fn bethe(args: &BetheArgs) -> Outcome<Report> {
    let spec = args.common.spec()?;
    if args.common.model != ModelArg::Xxx {
        return Err(usage("the bethe command applies to the XXX model only"));
    }
    let tol = positive("tol", args.tol)?;
    let n = spec.n_sites();
    let qn = QuantumNumberSet::parse(n, &args.qn).map_err(usage)?;

    let mut config = base_config(&spec);
    config.insert("quantum_numbers".into(), json!(qn.to_string()));
    config.insert("tol".into(), num(tol));
    let mut report = Report::new("bethe", config);

    let roots = match solve_bethe(n, &qn) {
        Ok(roots) => roots,
        Err(e) => {
            let kind = match e {
                Error::DegenerateRoots { .. } => "degenerate_roots",
                Error::Diverged { .. } => "diverged",
                Error::Singular(_) => "singular",
                _ => "error",
            };
            report.results.push(json!({
                "quantum_numbers": qn.to_string(),
                "status": kind,
                "diagnostic": e.to_string(),
            }));
            report.checks.push(failed("solver_converged", e.to_string()));
            report.table = (
                vec!["quantity", "value"],
                vec![vec!["status".into(), kind.into()], vec!["diagnostic".into(), e.to_string()]],
            );
            return Ok(report);
        }
    };
    bethe_report(&spec, &roots, tol, &mut report)?;
    Ok(report)
}

fn bethe_report(spec: &HamiltonianSpec, roots: &BetheRoots, tol: f64, report: &mut Report) -> Outcome<()> {
    let n = spec.n_sites();
    let r = roots.len();
    let energy = bethe_energy(roots, spec.coupling()).map_err(science)?;
    let family = AmplitudeFamily::bethe(roots.clone()).map_err(science)?;
    let psi = family_state(&family).map_err(science)?;
    let residual = eigen_residual(spec, &psi, energy).map_err(science)?;
    let quotient = rayleigh(spec, &psi).map_err(science)?;

    let mut result = json!({
        "quantum_numbers": roots.quantum_numbers().to_string(),
        "status": "converged",
        "thetas": nums(roots.thetas()),
        "bethe_residual": num(roots.residual()),
        "iterations": roots.iterations(),
        "energy": num(energy),
        "rayleigh": num(quotient),
        "eigen_residual": num(residual),
    });
    let mut rows = vec![vec!["quantum_numbers".into(), roots.quantum_numbers().to_string()]];
    for (i, t) in roots.thetas().iter().enumerate() {
        rows.push(vec![format!("theta_{}", i + 1), cell(*t)]);
    }
    rows.push(vec!["bethe_residual".into(), cell(roots.residual())]);
    rows.push(vec!["iterations".into(), roots.iterations().to_string()]);
    rows.push(vec!["energy".into(), cell(energy)]);
    rows.push(vec!["eigen_residual".into(), cell(residual)]);

    report.checks.push(check("bethe_residual", roots.residual(), 1e-10, None));
    report.checks.push(check("eigen_residual", residual, tol, None));
    if binomial(n, r) <= SPECTRUM_MAX_DIM {
        let eigs = sector_eigenvalues(spec, r, Exec::default())?;
        let m = spectrum_match(&eigs, energy, tol).map_err(science)?;
        result["nearest_eigenvalue"] = num(m.nearest);
        result["gap"] = num(m.gap);
        rows.push(vec!["nearest_eigenvalue".into(), cell(m.nearest)]);
        rows.push(vec!["gap".into(), cell(m.gap)]);
        report.checks.push(check("spectrum_match", m.gap, tol, None));
    }
    report.results.push(result);
    report.table = (vec!["quantity", "value"], rows);
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Outcome<Report> {
    let spec = args.common.spec()?;
    let tol = positive("tol", args.tol)?;
    if args.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let opts = VerifyOptions {
        tol,
        seed: args.seed,
        samples: args.samples,
        exec: Exec::default(),
    };
    let mut config = base_config(&spec);
    config.insert("tol".into(), num(tol));
    config.insert("seed".into(), json!(args.seed));
    config.insert("samples".into(), json!(args.samples));
    let mut report = Report::new("verify", config);
    report.checks = run_suite(&spec, &opts);
    let passed = report.checks.iter().filter(|c| c.passed).count();
    report.results.push(json!({
        "checks": report.checks.len(),
        "passed": passed,
        "failed": report.checks.len() - passed,
    }));
    let rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.passed.to_string(),
                cell(c.value),
                cell(c.tolerance),
                c.detail.clone().unwrap_or_default(),
            ]
        })
        .collect();
    report.table = (vec!["name", "passed", "value", "tolerance", "detail"], rows);
    Ok(report)
}

/// Ladder families for the model-based level system: vacuum, then the
/// lowest rung the model offers in each higher sector.
fn ladder_families(spec: &HamiltonianSpec, rungs: usize) -> Outcome<Vec<AmplitudeFamily>> {
    let n = spec.n_sites();
    match spec.model() {
        Model::Hs { .. } => {
            if rungs > n / 2 + 1 {
                return Err(usage(format!("at most {} rungs for N = {n}", n / 2 + 1)));
            }
            (0..rungs)
                .map(|r| AmplitudeFamily::jastrow(n, r).map_err(science))
                .collect()
        }
        Model::Xxx { .. } => {
            if rungs > 3 || rungs > n / 2 + 1 {
                return Err(usage(format!("at most {} rungs for the XXX ladder", 3.min(n / 2 + 1))));
            }
            let mut fams = vec![AmplitudeFamily::vacuum(n)];
            if rungs >= 2 {
                // lowest one-magnon level: cos θ closest to −1
                fams.push(AmplitudeFamily::plane_wave_mode(n, (n / 2) as i64));
            }
            if rungs >= 3 {
                let c = spec.coupling();
                let best = distinct_solutions(&solve_all(n, 2, Exec::default()))
                    .into_iter()
                    .filter_map(|rt| bethe_energy(&rt, c).ok().map(|e| (e, rt)))
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .ok_or_else(|| science("no converged two-magnon root set"))?;
                fams.push(AmplitudeFamily::bethe(best.1).map_err(science)?);
            }
            Ok(fams)
        }
    }
}

pub fn resonance(args: &ResonanceArgs) -> Outcome<Report> {
    let mut config = Map::new();
    let system = match args.e1 {
        Some(e1) => {
            let e0 = args.e0.unwrap_or(0.0);
            config.insert("levels".into(), json!("two-level"));
            config.insert("e0".into(), num(e0));
            config.insert("e1".into(), num(e1));
            config.insert("dipole".into(), num(args.dipole));
            LevelSystem::two_level(e0, e1, args.dipole).map_err(usage)?
        }
        None => {
            if args.e0.is_some() {
                return Err(usage("--e0 needs --e1"));
            }
            if args.rungs < 2 {
                return Err(usage("--rungs must be at least 2"));
            }
            let spec = args.common.spec()?;
            config = base_config(&spec);
            config.insert("levels".into(), json!("ladder"));
            config.insert("rungs".into(), json!(args.rungs));
            let fams = ladder_families(&spec, args.rungs)?;
            let weights: BTreeMap<(usize, usize), f64> = (1..fams.len())
                .flat_map(|k| [((k, k - 1), 1.0), ((k - 1, k), 1.0)])
                .collect();
            dipole_from_ladder(&weights, &spec, &fams).map_err(science)?
        }
    };

    let bohr = system.bohr_frequencies();
    if bohr.is_empty() {
        return Err(usage("the level system has no coupled transition"));
    }
    let lo_bohr = bohr[0];
    let hi_bohr = *bohr.last().expect("non-empty");
    let omega_min = args.omega_min.unwrap_or(0.8 * lo_bohr);
    let omega_max = args.omega_max.unwrap_or(1.2 * hi_bohr);
    if !(omega_min.is_finite() && omega_max.is_finite()) || omega_min < 0.0 || omega_min > omega_max {
        return Err(usage(format!("malformed frequency range [{omega_min}, {omega_max}]")));
    }
    if args.points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    let field = positive("field", args.field)?;
    let d_max = system.dipole().iter().flatten().map(|d| d.norm()).fold(0.0, f64::max);
    let rabi = field * d_max;
    if rabi == 0.0 {
        return Err(usage("zero dipole: nothing to drive"));
    }
    let t_end = match args.t_end {
        Some(t) => positive("t-end", t)?,
        None => PI / rabi,
    };
    let dt = match args.dt {
        Some(dt) => positive("dt", dt)?,
        None => TAU / (200.0 * (omega_max + hi_bohr + rabi)),
    };
    let settings = ScanSettings {
        omega_min,
        omega_max,
        points: args.points,
        t_end,
        dt,
        rwa: !args.full,
        initial: 0,
    };
    config.insert("field".into(), num(field));
    config.insert("omega_min".into(), num(omega_min));
    config.insert("omega_max".into(), num(omega_max));
    config.insert("points".into(), json!(args.points));
    config.insert("t_end".into(), num(t_end));
    config.insert("dt".into(), num(dt));
    config.insert("rwa".into(), json!(!args.full));

    let template = DriveField::new(Complex64::new(field, 0.0), 0.0, 1.0).map_err(usage)?;
    let scan = resonance_scan(&system, &template, &settings, Exec::default()).map_err(|e| match e {
        Error::Domain(msg) => usage(msg),
        other => science(other),
    })?;

    let mut report = Report::new("resonance", config);
    let offset = bohr
        .iter()
        .map(|w| (scan.best_omega - w).abs())
        .fold(f64::INFINITY, f64::min);
    let step = scan.grid_step();
    report.checks.push(check(
        "peak_at_bohr_frequency",
        offset,
        step.max(f64::EPSILON * omega_max.max(1.0)) * (1.0 + 1e-9),
        Some(format!("grid step {step}")),
    ));
    report.results.push(json!({
        "energies": nums(system.energies()),
        "bohr_frequencies": nums(&bohr),
        "best_omega": num(scan.best_omega),
        "best_peak": num(scan.best_peak),
        "scan": scan.points.iter().map(|p| json!({
            "omega": num(p.omega),
            "peak_transfer": num(p.peak_transfer),
        })).collect::<Vec<_>>(),
    }));
    let rows = scan
        .points
        .iter()
        .map(|p| vec![cell(p.omega), cell(p.peak_transfer)])
        .collect();
    report.table = (vec!["omega", "peak_transfer"], rows);
    Ok(report)
}
