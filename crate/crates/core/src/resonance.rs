//! Driven transitions between ladder-connected levels.
//!
//! In the interaction picture the level amplitudes obey
//!
//! ```text
//! dC_n/dt = i Σ_k Σ_λ w_λ d_nk [ℰ_λ e^{−i(ω_λ − ω_nk)t} + ℰ_λ* e^{+i(ω_λ + ω_nk)t}] C_k
//! ```
//!
//! with ω_nk = E_n − E_k. The bracket makes the generator Hermitian at every
//! instant, so populations are conserved. In the rotating-wave approximation
//! only the term that can become stationary is kept: the first when
//! ω_nk > 0, the second when ω_nk < 0, neither when ω_nk = 0.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::models::HamiltonianSpec;
use crate::oracle::rayleigh;
use crate::shift::{family_state, ladder_compose, AmplitudeFamily, LadderChain};
use crate::{Error, Exec, Result};

/// Largest |Σ|C|² − 1| an integration may accumulate before it is rejected.
pub const MAX_UNITARITY_DRIFT: f64 = 1e-6;

/// Minimum integrator steps per period of the fastest relevant frequency.
pub const MIN_STEPS_PER_PERIOD: f64 = 20.0;

const HERMITIAN_TOL: f64 = 1e-12;

/// A monochromatic drive with constant envelope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveField {
    pub amplitude: Complex64,
    pub frequency: f64,
    /// Scalar stand-in for the polarization projection d·e(λ).
    pub weight: f64,
}

impl DriveField {
    pub fn new(amplitude: Complex64, frequency: f64, weight: f64) -> Result<Self> {
        if !(amplitude.re.is_finite() && amplitude.im.is_finite() && weight.is_finite()) {
            return Err(Error::domain("drive amplitude and weight must be finite"));
        }
        if !frequency.is_finite() || frequency < 0.0 {
            return Err(Error::domain(format!(
                "drive frequency must be finite and >= 0, got {frequency}"
            )));
        }
        Ok(DriveField {
            amplitude,
            frequency,
            weight,
        })
    }

    pub fn with_frequency(&self, frequency: f64) -> Result<Self> {
        Self::new(self.amplitude, frequency, self.weight)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSystem {
    energies: Vec<f64>,
    dipole: Vec<Vec<Complex64>>,
}

impl LevelSystem {
    pub fn new(energies: Vec<f64>, dipole: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = energies.len();
        if n == 0 {
            return Err(Error::domain("a level system needs at least one level"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::domain("level energies must be finite"));
        }
        if dipole.len() != n || dipole.iter().any(|row| row.len() != n) {
            return Err(Error::domain(format!("dipole must be {n}x{n}")));
        }
        let mut defect: f64 = 0.0;
        for (i, row) in dipole.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                defect = defect.max((d - dipole[j][i].conj()).norm());
            }
        }
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(LevelSystem { energies, dipole })
    }

    /// Two levels coupled by a real dipole element.
    pub fn two_level(e0: f64, e1: f64, d: f64) -> Result<Self> {
        let z = Complex64::new(0.0, 0.0);
        let d = Complex64::new(d, 0.0);
        Self::new(vec![e0, e1], vec![vec![z, d], vec![d, z]])
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dipole(&self) -> &[Vec<Complex64>] {
        &self.dipole
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// ω_nk = E_n − E_k.
    pub fn bohr(&self, n: usize, k: usize) -> f64 {
        self.energies[n] - self.energies[k]
    }

    /// Distinct |ω_nk| over coupled pairs n > k, ascending.
    pub fn bohr_frequencies(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for n in 0..self.len() {
            for k in 0..n {
                if self.dipole[n][k].norm() > 0.0 {
                    out.push(self.bohr(n, k).abs());
                }
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// Dipole between ladder-connected family states.
///
/// `families` must have consecutive arities; level n is the n-th family and
/// its energy is the Rayleigh quotient of its state. Each weighted entry
/// becomes weight · |⟨ψ_n|ℒ(n,m)|ψ_m⟩| / (‖ψ_n‖ ‖ℒ(n,m)ψ_m‖), which is the
/// weight itself whenever the chain carries ψ_m onto ψ_n and zero when the
/// chain annihilates it.
pub fn dipole_from_ladder(
    weights: &BTreeMap<(usize, usize), f64>,
    spec: &HamiltonianSpec,
    families: &[AmplitudeFamily],
) -> Result<LevelSystem> {
    let levels = families.len();
    if levels == 0 {
        return Err(Error::domain("no ladder families given"));
    }
    for pair in families.windows(2) {
        if pair[1].arity() != pair[0].arity() + 1 {
            return Err(Error::domain("ladder families must have consecutive arities"));
        }
    }
    for (&(n, m), &w) in weights {
        if n >= levels || m >= levels {
            return Err(Error::domain(format!("weight ({n},{m}) outside {levels} levels")));
        }
        if !w.is_finite() {
            return Err(Error::domain(format!("weight ({n},{m}) is not finite")));
        }
        let mirror = weights.get(&(m, n)).copied().unwrap_or(0.0);
        if mirror != w {
            return Err(Error::domain(format!(
                "weights not symmetric: d({n},{m}) = {w}, d({m},{n}) = {mirror}"
            )));
        }
    }
    let states = families
        .iter()
        .map(family_state)
        .collect::<Result<Vec<_>>>()?;
    let energies = states
        .iter()
        .map(|s| rayleigh(spec, s))
        .collect::<Result<Vec<_>>>()?;
    let zero = Complex64::new(0.0, 0.0);
    let mut dipole = vec![vec![zero; levels]; levels];
    for (&(n, m), &w) in weights {
        if w == 0.0 || n < m {
            continue;
        }
        let chain = LadderChain::raising(&families[m..=n])?;
        let moved = ladder_compose(&chain, &states[m])?;
        let denom = states[n].norm() * moved.norm();
        let overlap = if denom == 0.0 {
            0.0
        } else {
            states[n].inner(&moved)?.norm() / denom
        };
        let d = Complex64::new(w * overlap, 0.0);
        dipole[n][m] = d;
        dipole[m][n] = d;
    }
    LevelSystem::new(energies, dipole)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeTrajectory {
    pub times: Vec<f64>,
    /// One row of level amplitudes per time point.
    pub amplitudes: Vec<Vec<Complex64>>,
}

impl AmplitudeTrajectory {
    pub fn population(&self, level: usize) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c[level].norm_sqr()).collect()
    }

    pub fn max_unitarity_drift(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|c| (c.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// max_t (1 − |C_initial(t)|²).
    pub fn peak_transfer(&self, initial: usize) -> f64 {
        self.population(initial)
            .into_iter()
            .map(|p| 1.0 - p)
            .fold(0.0, f64::max)
    }

    pub fn final_amplitudes(&self) -> &[Complex64] {
        self.amplitudes.last().expect("trajectory holds the initial point")
    }
}

/// One oscillating contribution g·e^{iνt} to G_nk.
#[derive(Clone, Copy, Debug)]
struct Term {
    n: usize,
    k: usize,
    g: Complex64,
    nu: f64,
}

fn generator_terms(system: &LevelSystem, drives: &[DriveField], rwa: bool) -> Vec<Term> {
    let mut terms = Vec::new();
    for n in 0..system.len() {
        for k in 0..system.len() {
            let d = system.dipole[n][k];
            if d.norm() == 0.0 {
                continue;
            }
            let w_nk = system.bohr(n, k);
            for drive in drives {
                let base = d * drive.weight;
                let rotating = Term {
                    n,
                    k,
                    g: base * drive.amplitude,
                    nu: -(drive.frequency - w_nk),
                };
                let counter = Term {
                    n,
                    k,
                    g: base * drive.amplitude.conj(),
                    nu: drive.frequency + w_nk,
                };
                if !rwa || w_nk > 0.0 {
                    terms.push(rotating);
                }
                if !rwa || w_nk < 0.0 {
                    terms.push(counter);
                }
            }
        }
    }
    terms.retain(|t| t.g.norm() > 0.0);
    terms
}

fn derivative(terms: &[Term], t: f64, c: &[Complex64], out: &mut [Complex64]) {
    out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    for term in terms {
        let phase = Complex64::from_polar(1.0, term.nu * t);
        out[term.n] += Complex64::i() * term.g * phase * c[term.k];
    }
}

/// Fourth-order Runge-Kutta over [0, t_end] with the step shrunk to divide
/// the interval evenly.
pub fn integrate_amplitudes(
    system: &LevelSystem,
    drives: &[DriveField],
    initial: &[Complex64],
    t_end: f64,
    dt: f64,
    rwa: bool,
) -> Result<AmplitudeTrajectory> {
    let levels = system.len();
    if initial.len() != levels {
        return Err(Error::domain(format!(
            "{} initial amplitudes for {levels} levels",
            initial.len()
        )));
    }
    let norm: f64 = initial.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("initial state has norm² {norm}, expected 1")));
    }
    if !(t_end.is_finite() && t_end >= 0.0) || !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain("need t_end >= 0 and dt > 0"));
    }
    let steps = (t_end / dt).ceil().max(if t_end > 0.0 { 1.0 } else { 0.0 }) as usize;
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let terms = generator_terms(system, drives, rwa);

    let fastest = terms
        .iter()
        .flat_map(|t| [t.nu.abs(), t.g.norm()])
        .fold(0.0, f64::max);
    if fastest > 0.0 && h * fastest * MIN_STEPS_PER_PERIOD > TAU {
        return Err(Error::domain(format!(
            "dt = {h} gives fewer than {MIN_STEPS_PER_PERIOD} steps per period at frequency {fastest}"
        )));
    }

    let mut times = Vec::with_capacity(steps + 1);
    let mut amplitudes = Vec::with_capacity(steps + 1);
    let mut c = initial.to_vec();
    times.push(0.0);
    amplitudes.push(c.clone());
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![zero; levels],
        vec![zero; levels],
        vec![zero; levels],
        vec![zero; levels],
    );
    let mut tmp = vec![zero; levels];
    for step in 0..steps {
        let t = step as f64 * h;
        derivative(&terms, t, &c, &mut k1);
        for i in 0..levels {
            tmp[i] = c[i] + k1[i] * (h / 2.0);
        }
        derivative(&terms, t + h / 2.0, &tmp, &mut k2);
        for i in 0..levels {
            tmp[i] = c[i] + k2[i] * (h / 2.0);
        }
        derivative(&terms, t + h / 2.0, &tmp, &mut k3);
        for i in 0..levels {
            tmp[i] = c[i] + k3[i] * h;
        }
        derivative(&terms, t + h, &tmp, &mut k4);
        for i in 0..levels {
            c[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
        let drift = (c.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs();
        if drift > MAX_UNITARITY_DRIFT {
            return Err(Error::Integrator(format!(
                "unitarity drift {drift:e} at t = {}",
                t + h
            )));
        }
        times.push(if step + 1 == steps { t_end } else { t + h });
        amplitudes.push(c.clone());
    }
    Ok(AmplitudeTrajectory { times, amplitudes })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSettings {
    pub omega_min: f64,
    pub omega_max: f64,
    /// Grid points, endpoints included.
    pub points: usize,
    pub t_end: f64,
    pub dt: f64,
    pub rwa: bool,
    /// Level that starts fully populated.
    pub initial: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub omega: f64,
    pub peak_transfer: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub points: Vec<ScanPoint>,
    pub best_omega: f64,
    pub best_peak: f64,
}

impl ScanReport {
    pub fn grid_step(&self) -> f64 {
        match self.points.as_slice() {
            [a, b, ..] => b.omega - a.omega,
            _ => 0.0,
        }
    }
}

/// Sweeps the template drive's frequency over the grid and records the
/// largest population lost by the initial level at each point.
pub fn resonance_scan(
    system: &LevelSystem,
    template: &DriveField,
    settings: &ScanSettings,
    exec: Exec,
) -> Result<ScanReport> {
    let ScanSettings {
        omega_min,
        omega_max,
        points,
        ..
    } = *settings;
    // written negated so a NaN bound is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if points == 0 || !(omega_min <= omega_max) {
        return Err(Error::domain(format!(
            "empty frequency range [{omega_min}, {omega_max}] with {points} points"
        )));
    }
    if settings.initial >= system.len() {
        return Err(Error::domain(format!(
            "initial level {} outside {} levels",
            settings.initial,
            system.len()
        )));
    }
    let covered = system
        .bohr_frequencies()
        .iter()
        .any(|&w| w >= omega_min && w <= omega_max);
    if !covered {
        return Err(Error::domain(format!(
            "range [{omega_min}, {omega_max}] contains no coupled Bohr frequency"
        )));
    }
    let grid: Vec<f64> = if points == 1 {
        vec![omega_min]
    } else {
        let step = (omega_max - omega_min) / (points - 1) as f64;
        (0..points).map(|i| omega_min + step * i as f64).collect()
    };
    let mut initial = vec![Complex64::new(0.0, 0.0); system.len()];
    initial[settings.initial] = Complex64::new(1.0, 0.0);

    let results = exec.map_slice(&grid, |&omega| -> Result<ScanPoint> {
        let drive = template.with_frequency(omega)?;
        let traj = integrate_amplitudes(
            system,
            &[drive],
            &initial,
            settings.t_end,
            settings.dt,
            settings.rwa,
        )?;
        Ok(ScanPoint {
            omega,
            peak_transfer: traj.peak_transfer(settings.initial),
        })
    });
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    let best = points
        .iter()
        .copied()
        .reduce(|a, b| if b.peak_transfer > a.peak_transfer { b } else { a })
        .expect("grid is non-empty");
    Ok(ScanReport {
        best_omega: best.omega,
        best_peak: best.peak_transfer,
        points,
    })
}
