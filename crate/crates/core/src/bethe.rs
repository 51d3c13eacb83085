//! Real-root Bethe ansatz for the XXX ring: two-body scattering phases,
//! the damped fixed-point solver, permutation-sum amplitudes and energies.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Exec, Result};

/// Integer or half-odd-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub fn from_twice(twice: i64) -> Self {
        HalfInteger(twice)
    }

    pub fn from_int(value: i64) -> Self {
        HalfInteger(2 * value)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Accepts `p` or `p/q` with the value an integer or half-odd-integer.
impl FromStr for HalfInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("quantum number {s:?} is not an integer or p/q rational"));
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|_| bad())?,
                q.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        if q <= 0 {
            return Err(bad());
        }
        if (2 * p) % q != 0 {
            return Err(Error::domain(format!(
                "quantum number {s} is neither an integer nor a half-odd-integer"
            )));
        }
        Ok(HalfInteger(2 * p / q))
    }
}

/// Distinct Bethe quantum numbers for one chain length.
///
/// Odd r takes integers, even r half-odd-integers, both with |I| ≤ N/2
/// (for even N the half-odd values therefore stop at (N−1)/2). The parity
/// rule holds for odd N as well. Values keep their input order; root m
/// belongs to I_m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantumNumberSet {
    values: Vec<HalfInteger>,
    n_sites: usize,
}

impl QuantumNumberSet {
    pub fn new(n_sites: usize, values: Vec<HalfInteger>) -> Result<Self> {
        let r = values.len();
        if r == 0 {
            return Err(Error::domain("empty quantum-number set"));
        }
        if r > n_sites {
            return Err(Error::domain(format!("{r} quantum numbers for {n_sites} sites")));
        }
        let want_integer = r % 2 == 1;
        let bound = n_sites as i64;
        for (i, v) in values.iter().enumerate() {
            if v.is_integer() != want_integer {
                return Err(Error::domain(format!(
                    "r={r} needs {} quantum numbers, got {v}",
                    if want_integer { "integer" } else { "half-odd-integer" }
                )));
            }
            if v.twice().abs() > bound {
                return Err(Error::domain(format!(
                    "quantum number {v} outside the window |I| <= {}",
                    HalfInteger(bound)
                )));
            }
            if values[..i].contains(v) {
                return Err(Error::domain(format!("quantum number {v} repeated")));
            }
        }
        Ok(QuantumNumberSet { values, n_sites })
    }

    /// Parses a comma-separated list such as `3/2,-3/2`.
    pub fn parse(n_sites: usize, list: &str) -> Result<Self> {
        let values = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(HalfInteger::from_str)
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_sites, values)
    }

    /// Admissible values for `r` roots, ascending.
    pub fn window(n_sites: usize, r: usize) -> Vec<HalfInteger> {
        let b = n_sites as i64;
        let parity = if r % 2 == 1 { 0 } else { 1 };
        (-b..=b)
            .filter(|t| t.rem_euclid(2) == parity)
            .map(HalfInteger)
            .collect()
    }

    /// Every admissible set of `r` distinct values, as ascending tuples.
    pub fn enumerate(n_sites: usize, r: usize) -> Vec<QuantumNumberSet> {
        let window = Self::window(n_sites, r);
        let mut out = Vec::new();
        if r == 0 || r > window.len() {
            return out;
        }
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            out.push(QuantumNumberSet {
                values: idx.iter().map(|&i| window[i]).collect(),
                n_sites,
            });
            let mut k = r;
            while k > 0 && idx[k - 1] == window.len() - r + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for i in k..r {
                idx[i] = idx[i - 1] + 1;
            }
        }
        out
    }

    pub fn values(&self) -> &[HalfInteger] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }
}

impl fmt::Display for QuantumNumberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn half_cot(theta: f64) -> Result<f64> {
    let s = (theta / 2.0).sin();
    if s == 0.0 || theta.rem_euclid(TAU) == 0.0 {
        return Err(Error::Singular(theta));
    }
    Ok((theta / 2.0).cos() / s)
}

/// Two-magnon scattering phase Θ(θ, θ′) = 2 arctan{½[cot(θ/2) − cot(θ′/2)]},
/// principal branch, odd under exchange.
pub fn theta_scatter(theta: f64, theta_prime: f64) -> Result<f64> {
    let x = 0.5 * (half_cot(theta)? - half_cot(theta_prime)?);
    Ok(2.0 * x.atan())
}

/// Pair phase φ₁₂ with 2 cot(φ₁₂/2) = cot(θ₁/2) − cot(θ₂/2), in (−π, π].
///
/// φ/2 is taken as arccot in (0, π); the result above π is shifted down by
/// 2π. A vanishing right-hand side gives φ = π.
pub fn pair_phase(theta1: f64, theta2: f64) -> Result<f64> {
    let x = 0.5 * (half_cot(theta1)? - half_cot(theta2)?);
    let phi = 2.0 * 1f64.atan2(x);
    Ok(if phi > PI { phi - TAU } else { phi })
}

/// Antisymmetric table of pair phases φ_jk.
#[derive(Clone, Debug, PartialEq)]
pub struct PairPhaseTable {
    phi: Vec<Vec<f64>>,
}

impl PairPhaseTable {
    /// φ_jk for j < k from [`pair_phase`], φ_kj = −φ_jk, zero diagonal.
    pub fn from_thetas(thetas: &[f64]) -> Result<Self> {
        let r = thetas.len();
        let mut phi = vec![vec![0.0; r]; r];
        for j in 0..r {
            for k in j + 1..r {
                let p = pair_phase(thetas[j], thetas[k])?;
                phi[j][k] = p;
                phi[k][j] = -p;
            }
        }
        Ok(PairPhaseTable { phi })
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.phi[j][k]
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.phi
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Mixing weight of the new iterate.
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Minimum separation (mod 2π) between distinct roots.
    pub separation: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            damping: 0.5,
            tol: 1e-12,
            max_iter: 10_000,
            separation: 1e-8,
        }
    }
}

/// Converged real Bethe roots.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheRoots {
    thetas: Vec<f64>,
    quantum_numbers: QuantumNumberSet,
    residual: f64,
    iterations: usize,
    converged: bool,
}

impl BetheRoots {
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn quantum_numbers(&self) -> &QuantumNumberSet {
        &self.quantum_numbers
    }

    /// Max-norm defect of N θ_m − 2π I_m + Σ_{k≠m} Θ(θ_m, θ_k).
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn n_sites(&self) -> usize {
        self.quantum_numbers.n_sites
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Roots wrapped into (−π, π] and sorted, for deduplication.
    pub fn canonical_thetas(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.thetas.iter().map(|&x| wrap_angle(x)).collect();
        t.sort_by(f64::total_cmp);
        t
    }
}

/// Maps an angle into (−π, π].
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

fn angular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Max-norm defect of the Bethe equations at the given roots.
pub fn bethe_residual(n_sites: usize, qn: &QuantumNumberSet, thetas: &[f64]) -> Result<f64> {
    if thetas.len() != qn.len() {
        return Err(Error::Arity {
            expected: qn.len(),
            found: thetas.len(),
        });
    }
    let mut worst: f64 = 0.0;
    for (m, &tm) in thetas.iter().enumerate() {
        let mut scatter = 0.0;
        for (k, &tk) in thetas.iter().enumerate() {
            if k != m {
                scatter += theta_scatter(tm, tk)?;
            }
        }
        let defect = n_sites as f64 * tm - TAU * qn.values[m].value() + scatter;
        worst = worst.max(defect.abs());
    }
    Ok(worst)
}

pub fn solve_bethe(n_sites: usize, qn: &QuantumNumberSet) -> Result<BetheRoots> {
    solve_bethe_with(n_sites, qn, &SolverOptions::default())
}

/// Damped fixed-point iteration of N θ_m = 2π I_m − Σ_{k≠m} Θ(θ_m, θ_k)
/// from θ_m = 2π I_m / N.
pub fn solve_bethe_with(
    n_sites: usize,
    qn: &QuantumNumberSet,
    opts: &SolverOptions,
) -> Result<BetheRoots> {
    if qn.n_sites != n_sites {
        return Err(Error::domain(format!(
            "quantum numbers built for N={}, solving for N={n_sites}",
            qn.n_sites
        )));
    }
    let n = n_sites as f64;
    let r = qn.len();
    let targets: Vec<f64> = qn.values.iter().map(|v| TAU * v.value()).collect();
    let mut thetas: Vec<f64> = targets.iter().map(|t| t / n).collect();
    let mut next = vec![0.0; r];
    let mut update = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        for m in 0..r {
            let mut scatter = 0.0;
            for k in 0..r {
                if k != m {
                    scatter += theta_scatter(thetas[m], thetas[k])?;
                }
            }
            let fixed = (targets[m] - scatter) / n;
            next[m] = (1.0 - opts.damping) * thetas[m] + opts.damping * fixed;
        }
        update = thetas
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut thetas, &mut next);
        if !update.is_finite() {
            return Err(Error::Diverged {
                iterations,
                last_update: update,
            });
        }
        if update < opts.tol {
            break;
        }
    }
    if update >= opts.tol {
        return Err(Error::Diverged {
            iterations,
            last_update: update,
        });
    }
    for a in 0..r {
        for b in a + 1..r {
            let sep = angular_distance(thetas[a], thetas[b]);
            if sep <= opts.separation {
                return Err(Error::DegenerateRoots {
                    first: a,
                    second: b,
                    separation: sep,
                });
            }
        }
    }
    let residual = bethe_residual(n_sites, qn, &thetas)?;
    Ok(BetheRoots {
        thetas,
        quantum_numbers: qn.clone(),
        residual,
        iterations,
        converged: true,
    })
}

/// Wraps externally supplied roots; `converged` is set when they are
/// pairwise distinct (mod 2π) and satisfy the Bethe equations to `tol`.
pub fn roots_from_thetas(qn: &QuantumNumberSet, thetas: Vec<f64>, tol: f64) -> Result<BetheRoots> {
    let residual = bethe_residual(qn.n_sites, qn, &thetas)?;
    let distinct = (0..thetas.len())
        .all(|a| (a + 1..thetas.len()).all(|b| angular_distance(thetas[a], thetas[b]) > 1e-8));
    Ok(BetheRoots {
        thetas,
        quantum_numbers: qn.clone(),
        residual,
        iterations: 0,
        converged: distinct && residual <= tol,
    })
}

/// One quantum-number set and what the solver made of it.
#[derive(Clone, Debug)]
pub struct BetheSolution {
    pub quantum_numbers: QuantumNumberSet,
    pub outcome: Result<BetheRoots>,
}

/// Runs the solver on every admissible quantum-number set with `r` roots.
pub fn solve_all(n_sites: usize, r: usize, exec: Exec) -> Vec<BetheSolution> {
    let sets = QuantumNumberSet::enumerate(n_sites, r);
    exec.map_slice(&sets, |qn| BetheSolution {
        quantum_numbers: qn.clone(),
        outcome: solve_bethe(n_sites, qn),
    })
}

/// Converged solutions with duplicate root multisets (mod 2π) removed,
/// keeping the first occurrence.
pub fn distinct_solutions(solutions: &[BetheSolution]) -> Vec<BetheRoots> {
    let mut seen: Vec<Vec<f64>> = Vec::new();
    let mut out = Vec::new();
    for s in solutions {
        if let Ok(roots) = &s.outcome {
            let key = roots.canonical_thetas();
            let dup = seen.iter().any(|k| {
                k.iter()
                    .zip(&key)
                    .all(|(a, b)| angular_distance(*a, *b) < 1e-9)
            });
            if !dup {
                seen.push(key);
                out.push(roots.clone());
            }
        }
    }
    out
}

/// All permutations of `0..r` (Heap's algorithm).
pub(crate) fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut items: Vec<usize> = (0..r).collect();
    let mut out = vec![items.clone()];
    let mut c = vec![0usize; r];
    let mut i = 0;
    while i < r {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            out.push(items.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// a(m₁…m_r) = Σ_P exp[i(Σ_k θ_{P_k} m_k + ½ Σ_{k<n} φ_{P_k P_n})] over
/// arbitrary integer coordinates.
pub fn bethe_amplitude_at(roots: &BetheRoots, phases: &PairPhaseTable, coords: &[i64]) -> Complex64 {
    amplitude_with_perms(&roots.thetas, phases, coords, &permutations(roots.len()))
}

pub(crate) fn amplitude_with_perms(
    thetas: &[f64],
    phases: &PairPhaseTable,
    coords: &[i64],
    perms: &[Vec<usize>],
) -> Complex64 {
    let r = thetas.len();
    perms
        .iter()
        .map(|p| {
            let mut arg = 0.0;
            for k in 0..r {
                arg += thetas[p[k]] * coords[k] as f64;
            }
            let mut pair = 0.0;
            for k in 0..r {
                for n in k + 1..r {
                    pair += phases.get(p[k], p[n]);
                }
            }
            Complex64::from_polar(1.0, arg + 0.5 * pair)
        })
        .sum()
}

/// Bethe amplitude on strictly increasing 1-based sites.
pub fn bethe_amplitude(roots: &BetheRoots, phases: &PairPhaseTable, sites: &[usize]) -> Result<Complex64> {
    let n = roots.n_sites();
    if sites.len() != roots.len() {
        return Err(Error::Arity {
            expected: roots.len(),
            found: sites.len(),
        });
    }
    if sites.iter().any(|&s| s == 0 || s > n) || sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(format!("sites {sites:?} not strictly increasing in 1..={n}")));
    }
    let coords: Vec<i64> = sites.iter().map(|&s| s as i64).collect();
    Ok(bethe_amplitude_at(roots, phases, &coords))
}

/// E_r = J Σ_m (cos θ_m − 1).
pub fn bethe_energy(roots: &BetheRoots, j: f64) -> Result<f64> {
    if !roots.converged {
        return Err(Error::domain("energy requested for unconverged roots"));
    }
    Ok(energy_of_thetas(&roots.thetas, j))
}

pub fn energy_of_thetas(thetas: &[f64], j: f64) -> f64 {
    j * thetas.iter().map(|t| t.cos() - 1.0).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hi(s: &str) -> HalfInteger {
        s.parse().unwrap()
    }

    #[test]
    fn parse_half_integers() {
        assert_eq!(hi("3/2").twice(), 3);
        assert_eq!(hi("-3/2").twice(), -3);
        assert_eq!(hi("2").twice(), 4);
        assert_eq!(hi("4/2").twice(), 4);
        assert!("1/3".parse::<HalfInteger>().is_err());
        assert!("0.5".parse::<HalfInteger>().is_err());
        assert!("1/0".parse::<HalfInteger>().is_err());
        assert_eq!(hi("-5/2").to_string(), "-5/2");
        assert_eq!(hi("-2").to_string(), "-2");
    }

    #[test]
    fn quantum_number_windows() {
        assert!(QuantumNumberSet::parse(4, "3/2,-3/2").is_ok());
        assert!(QuantumNumberSet::parse(4, "5/2,-3/2").is_err());
        assert!(QuantumNumberSet::parse(4, "1,2").is_err()); // even r needs half-odd
        assert!(QuantumNumberSet::parse(4, "1/2").is_err()); // odd r needs integer
        assert!(QuantumNumberSet::parse(4, "2").is_ok());
        assert!(QuantumNumberSet::parse(4, "3").is_err());
        assert!(QuantumNumberSet::parse(6, "1,1,2").is_err());
        assert!(QuantumNumberSet::parse(6, "").is_err());
        assert_eq!(QuantumNumberSet::enumerate(4, 2).len(), 6);
        assert_eq!(QuantumNumberSet::enumerate(6, 3).len(), 35);
        // odd chains keep the parity rule
        let w: Vec<String> = QuantumNumberSet::window(5, 2).iter().map(|v| v.to_string()).collect();
        assert_eq!(w, ["-5/2", "-3/2", "-1/2", "1/2", "3/2", "5/2"]);
        assert_eq!(QuantumNumberSet::window(5, 1).len(), 5);
        assert!(QuantumNumberSet::parse(5, "1,2").is_err());
        assert!(QuantumNumberSet::parse(5, "1/2,3/2").is_ok());
    }

    #[test]
    fn scatter_values() {
        assert_eq!(theta_scatter(1.1, 1.1).unwrap(), 0.0);
        let v = theta_scatter(2.0 * PI / 3.0, -2.0 * PI / 3.0).unwrap();
        assert!((v - PI / 3.0).abs() < 1e-15);
        let v = theta_scatter(PI, PI / 2.0).unwrap();
        assert!((v - (-0.927_295_218_001_612_2)).abs() < 1e-15);
        assert!(matches!(theta_scatter(0.0, 1.0), Err(Error::Singular(_))));
        assert!(matches!(theta_scatter(1.0, TAU), Err(Error::Singular(_))));
    }

    #[test]
    fn pair_phase_branches() {
        let p = pair_phase(2.0 * PI / 3.0, -2.0 * PI / 3.0).unwrap();
        assert!((p - 2.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(pair_phase(0.7, 0.7).unwrap(), PI);
        let a = pair_phase(0.4, 2.5).unwrap();
        let b = pair_phase(2.5, 0.4).unwrap();
        assert!((a + b).abs() < 1e-15);
        assert!((-PI..=PI).contains(&a));
        let t = PairPhaseTable::from_thetas(&[0.4, 2.5, -1.0]).unwrap();
        for j in 0..3 {
            assert_eq!(t.get(j, j), 0.0);
            for k in 0..3 {
                assert_eq!(t.get(j, k), -t.get(k, j));
            }
        }
    }

    #[test]
    fn two_magnon_n4_ground() {
        let qn = QuantumNumberSet::parse(4, "3/2,-3/2").unwrap();
        let roots = solve_bethe(4, &qn).unwrap();
        assert!((roots.thetas()[0] - 2.0 * PI / 3.0).abs() < 1e-11);
        assert!((roots.thetas()[1] + 2.0 * PI / 3.0).abs() < 1e-11);
        assert!(roots.residual() <= 1e-10);
        assert!((bethe_energy(&roots, 1.0).unwrap() + 3.0).abs() < 1e-10);
    }

    #[test]
    fn single_magnon_is_exact() {
        for n in [4usize, 5, 8] {
            for qn in QuantumNumberSet::enumerate(n, 1) {
                let roots = solve_bethe(n, &qn).unwrap();
                let want = TAU * qn.values()[0].value() / n as f64;
                assert_eq!(roots.thetas()[0], want);
                assert_eq!(roots.iterations(), 1);
            }
        }
    }

    #[test]
    fn collapsing_pair_is_degenerate() {
        let qn = QuantumNumberSet::parse(4, "1/2,-1/2").unwrap();
        assert!(matches!(solve_bethe(4, &qn), Err(Error::DegenerateRoots { .. })));
    }

    #[test]
    fn aliased_roots_are_degenerate() {
        // I = ±N/2 at odd r: roots coincide modulo 2π
        let qn = QuantumNumberSet::parse(6, "-3,-2,3").unwrap();
        assert!(matches!(solve_bethe(6, &qn), Err(Error::DegenerateRoots { .. })));
    }

    #[test]
    fn zero_quantum_number_hits_the_singularity() {
        let qn = QuantumNumberSet::parse(6, "-1,0,1").unwrap();
        assert!(matches!(solve_bethe(6, &qn), Err(Error::Singular(_))));
    }

    #[test]
    fn amplitude_values() {
        let qn = QuantumNumberSet::parse(4, "3/2,-3/2").unwrap();
        let roots = solve_bethe(4, &qn).unwrap();
        let phases = PairPhaseTable::from_thetas(roots.thetas()).unwrap();
        let a12 = bethe_amplitude(&roots, &phases, &[1, 2]).unwrap();
        assert!((a12 - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        let a13 = bethe_amplitude(&roots, &phases, &[1, 3]).unwrap();
        assert!((a13 - Complex64::new(-2.0, 0.0)).norm() < 1e-10);
        assert!(bethe_amplitude(&roots, &phases, &[2, 1]).is_err());
        assert!(bethe_amplitude(&roots, &phases, &[1]).is_err());
    }

    #[test]
    fn energy_edge_cases() {
        assert_eq!(energy_of_thetas(&[], 1.0), 0.0);
        assert!((energy_of_thetas(&[PI], 1.0) + 2.0).abs() < 1e-15);
        let qn = QuantumNumberSet::parse(4, "3/2,-3/2").unwrap();
        let bogus = roots_from_thetas(&qn, vec![0.3, 0.5], 1e-10).unwrap();
        assert!(!bogus.converged());
        assert!(bethe_energy(&bogus, 1.0).is_err());
    }

    #[test]
    fn heap_permutations() {
        assert_eq!(permutations(0).len(), 1);
        let p = permutations(4);
        assert_eq!(p.len(), 24);
        let mut sorted = p.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
    }
}
