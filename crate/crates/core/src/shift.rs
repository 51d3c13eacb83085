//! Raising and lowering (shift) operators between adjacent magnetization
//! sectors.
//!
//! A shift operator is always defined relative to an amplitude family: the
//! coefficient function a(m₁…m_r) whose expansion over basis kets is the
//! eigenstate in each sector. For r = 1 the raising operator is assembled
//! explicitly from the cross-product spin operators weighted by W^(1). For
//! general r the coefficient-selecting ("pick") derivative operators reduce,
//! on the basis kets, to choosing one term of the lower state and dividing
//! out its coefficient; the flip then attaches the higher family's
//! coefficient. Raising from sector r−1 reaches every r-site configuration
//! from its r subsets, and lowering from sector r reaches every
//! (r−1)-site configuration from its N−r+1 supersets, which fixes the
//! normalizations 1/r and 1/(N−r+1).

use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{
    apply_cross_minus, apply_site_lowering, apply_site_raising, down_sites, enumerate_sector,
    SectorBasis, SpinConfig, StateVector,
};
use crate::bethe::{amplitude_with_perms, permutations, BetheRoots, PairPhaseTable};
use crate::hsm::jastrow_value;
use crate::models::{apply_hamiltonian, HamiltonianSpec, SectorMatrix};
use crate::oracle::eigen_residual;
use crate::{Error, Exec, Result};

/// |Σ_m a(m)| above which a one-site family is rejected by
/// [`shift_matrix_r1`].
pub const SUM_RULE_TOL: f64 = 1e-10;

/// Eigen-residual a lower state must meet before a commutator is evaluated.
pub const EIGENSTATE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub enum FamilyKind {
    Vacuum,
    /// a(m) = e^{iθm}.
    PlaneWave { theta: f64 },
    Bethe {
        roots: BetheRoots,
        phases: PairPhaseTable,
    },
    Jastrow,
}

/// Analytic coefficient function for one sector arity.
#[derive(Clone, Debug)]
pub struct AmplitudeFamily {
    n_sites: usize,
    arity: usize,
    kind: FamilyKind,
    perms: Vec<Vec<usize>>,
}

impl AmplitudeFamily {
    pub fn vacuum(n_sites: usize) -> Self {
        AmplitudeFamily {
            n_sites,
            arity: 0,
            kind: FamilyKind::Vacuum,
            perms: Vec::new(),
        }
    }

    pub fn plane_wave(n_sites: usize, theta: f64) -> Self {
        AmplitudeFamily {
            n_sites,
            arity: 1,
            kind: FamilyKind::PlaneWave { theta },
            perms: Vec::new(),
        }
    }

    /// Plane wave with lattice momentum θ = 2πk/N.
    pub fn plane_wave_mode(n_sites: usize, k: i64) -> Self {
        Self::plane_wave(n_sites, std::f64::consts::TAU * k as f64 / n_sites as f64)
    }

    /// Permutation-sum family from converged, pairwise distinct roots.
    pub fn bethe(roots: BetheRoots) -> Result<Self> {
        if !roots.converged() {
            return Err(Error::domain("Bethe family needs converged roots"));
        }
        let phases = PairPhaseTable::from_thetas(roots.thetas())?;
        let arity = roots.len();
        Ok(AmplitudeFamily {
            n_sites: roots.n_sites(),
            arity,
            perms: permutations(arity),
            kind: FamilyKind::Bethe { roots, phases },
        })
    }

    pub fn jastrow(n_sites: usize, r: usize) -> Result<Self> {
        if n_sites < 4 || !n_sites.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "Jastrow family needs even N >= 4, got {n_sites}"
            )));
        }
        if r > n_sites {
            return Err(Error::domain(format!("r={r} exceeds N={n_sites}")));
        }
        Ok(AmplitudeFamily {
            n_sites,
            arity: r,
            kind: FamilyKind::Jastrow,
            perms: Vec::new(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        match &self.kind {
            FamilyKind::Vacuum => "vacuum".into(),
            FamilyKind::PlaneWave { theta } => format!("plane-wave(theta={theta})"),
            FamilyKind::Bethe { roots, .. } => format!("bethe{}", roots.quantum_numbers()),
            FamilyKind::Jastrow => format!("jastrow(r={})", self.arity),
        }
    }

    /// Coefficient on strictly increasing 1-based sites.
    pub fn amplitude(&self, sites: &[usize]) -> Result<Complex64> {
        if sites.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                found: sites.len(),
            });
        }
        if sites.iter().any(|&s| s == 0 || s > self.n_sites)
            || sites.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::domain(format!(
                "sites {sites:?} not strictly increasing in 1..={}",
                self.n_sites
            )));
        }
        Ok(self.eval(sites))
    }

    fn eval(&self, sites: &[usize]) -> Complex64 {
        match &self.kind {
            FamilyKind::Vacuum => Complex64::new(1.0, 0.0),
            FamilyKind::PlaneWave { theta } => Complex64::from_polar(1.0, theta * sites[0] as f64),
            FamilyKind::Bethe { roots, phases } => {
                let coords: Vec<i64> = sites.iter().map(|&s| s as i64).collect();
                amplitude_with_perms(roots.thetas(), phases, &coords, &self.perms)
            }
            FamilyKind::Jastrow => jastrow_value(self.n_sites, sites),
        }
    }

    fn check_sector(&self, sector: &SectorBasis) -> Result<()> {
        if sector.n_sites() != self.n_sites {
            return Err(Error::domain(format!(
                "family has N={}, sector has N={}",
                self.n_sites,
                sector.n_sites()
            )));
        }
        if sector.n_down() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                found: sector.n_down(),
            });
        }
        Ok(())
    }
}

/// |ψ_r⟩ = Σ a(m₁…m_r) φ(m₁…m_r) over the sector.
pub fn build_state(family: &AmplitudeFamily, sector: &Arc<SectorBasis>) -> Result<StateVector> {
    build_state_with(family, sector, Exec::default())
}

pub fn build_state_with(
    family: &AmplitudeFamily,
    sector: &Arc<SectorBasis>,
    exec: Exec,
) -> Result<StateVector> {
    family.check_sector(sector)?;
    let amps = exec.map(sector.dim(), |i| family.eval(&down_sites(sector.configs()[i])));
    StateVector::new(sector.clone(), amps)
}

/// Convenience: the family's state on a freshly enumerated sector.
pub fn family_state(family: &AmplitudeFamily) -> Result<StateVector> {
    let sector = Arc::new(enumerate_sector(family.n_sites, family.arity)?);
    build_state(family, &sector)
}

/// Antisymmetric W^(1)_jk = (2/N)(a(j) − a(k)), 0-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftCoefficientsR1 {
    w: Vec<Vec<Complex64>>,
}

/// α_j = ½ Σ_{k≠j} W_jk.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplifiedShiftR1 {
    pub alpha: Vec<Complex64>,
}

impl ShiftCoefficientsR1 {
    pub fn from_family(family: &AmplitudeFamily) -> Result<Self> {
        if family.arity != 1 {
            return Err(Error::Arity {
                expected: 1,
                found: family.arity,
            });
        }
        let n = family.n_sites;
        let a: Vec<Complex64> = (1..=n).map(|m| family.eval(&[m])).collect();
        let scale = 2.0 / n as f64;
        let w = (0..n)
            .map(|j| (0..n).map(|k| (a[j] - a[k]) * scale).collect())
            .collect();
        Ok(ShiftCoefficientsR1 { w })
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.w[j][k]
    }

    pub fn n_sites(&self) -> usize {
        self.w.len()
    }

    pub fn simplified(&self) -> SimplifiedShiftR1 {
        let alpha = self
            .w
            .iter()
            .enumerate()
            .map(|(j, row)| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, w)| *w)
                    .sum::<Complex64>()
                    * 0.5
            })
            .collect();
        SimplifiedShiftR1 { alpha }
    }
}

/// Q⁺_{1,0} = −i Σ_{j<k} W^(1)_jk (S_j × S_k)^⁻ as an explicit matrix from
/// sector 0 to sector 1.
pub fn shift_matrix_r1(family: &AmplitudeFamily) -> Result<SectorMatrix> {
    let w = ShiftCoefficientsR1::from_family(family)?;
    let n = family.n_sites;
    let sum: Complex64 = (1..=n).map(|m| family.eval(&[m])).sum();
    if sum.norm() > SUM_RULE_TOL {
        return Err(Error::domain(format!(
            "one-site amplitudes do not sum to zero (|sum| = {:e})",
            sum.norm()
        )));
    }
    let lo = Arc::new(enumerate_sector(n, 0)?);
    let hi = Arc::new(enumerate_sector(n, 1)?);
    SectorMatrix::from_action(hi.clone(), lo, |v| {
        let mut acc = StateVector::zeros(hi.clone());
        for j in 1..=n {
            for k in j + 1..=n {
                let term = apply_cross_minus(v, j, k)?.scaled(w.get(j - 1, k - 1));
                acc = sum_states(&acc, &term)?;
            }
        }
        Ok(acc)
    })
}

fn sum_states(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.sub(&b.scaled(Complex64::new(-1.0, 0.0)))
}

/// Σ_m c_m S_m^- (sector r → r+1) or Σ_m c_m S_m^+ (sector r → r−1).
pub fn site_ladder_matrix(
    n_sites: usize,
    r: usize,
    coeffs: &[Complex64],
    raising: bool,
) -> Result<SectorMatrix> {
    if coeffs.len() != n_sites {
        return Err(Error::domain(format!(
            "{} coefficients for {n_sites} sites",
            coeffs.len()
        )));
    }
    let target = if raising {
        r.checked_sub(1)
            .ok_or_else(|| Error::domain("no sector below the all-up configuration"))?
    } else {
        r + 1
    };
    let cols = Arc::new(enumerate_sector(n_sites, r)?);
    let rows = Arc::new(enumerate_sector(n_sites, target)?);
    let mut entries = Vec::new();
    for (c, &mask) in cols.configs().iter().enumerate() {
        let cfg = SpinConfig::new(mask, n_sites)?;
        for m in 1..=n_sites {
            let image = if raising {
                apply_site_raising(cfg, m)?
            } else {
                apply_site_lowering(cfg, m)?
            };
            if let Some(img) = image {
                entries.push((rows.rank_unchecked(img.mask()), c, coeffs[m - 1]));
            }
        }
    }
    SectorMatrix::from_triplets(rows, cols, entries)
}

/// 𝒬⁺_{1,0} = Σ_m a(m) S_m^-.
pub fn simplified_raising_r1(family: &AmplitudeFamily) -> Result<SectorMatrix> {
    if family.arity != 1 {
        return Err(Error::Arity {
            expected: 1,
            found: family.arity,
        });
    }
    let a: Vec<Complex64> = (1..=family.n_sites).map(|m| family.eval(&[m])).collect();
    site_ladder_matrix(family.n_sites, 0, &a, false)
}

/// 𝒬⁻_{0,1} = Σ_m a(m)^{-1} S_m^+. Maps ψ₁ to N·ψ₀.
pub fn simplified_lowering_r1(family: &AmplitudeFamily) -> Result<SectorMatrix> {
    if family.arity != 1 {
        return Err(Error::Arity {
            expected: 1,
            found: family.arity,
        });
    }
    let inv = (1..=family.n_sites)
        .map(|m| {
            let a = family.eval(&[m]);
            if a.norm() == 0.0 {
                Err(Error::domain(format!("a({m}) = 0 has no inverse")))
            } else {
                Ok(a.inv())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    site_ladder_matrix(family.n_sites, 1, &inv, true)
}

fn check_pair(lo: &AmplitudeFamily, hi: &AmplitudeFamily) -> Result<()> {
    if lo.n_sites != hi.n_sites {
        return Err(Error::domain(format!(
            "families on different chains (N={} vs N={})",
            lo.n_sites, hi.n_sites
        )));
    }
    if lo.arity + 1 != hi.arity {
        return Err(Error::Arity {
            expected: lo.arity + 1,
            found: hi.arity,
        });
    }
    Ok(())
}

fn check_input(state: &StateVector, family: &AmplitudeFamily) -> Result<()> {
    if state.n_sites() != family.n_sites {
        return Err(Error::domain("input state lives on a different chain"));
    }
    if state.n_down() != family.arity {
        return Err(Error::Arity {
            expected: family.arity,
            found: state.n_down(),
        });
    }
    Ok(())
}

fn nonzero(value: Complex64, mask: u32) -> Result<Complex64> {
    if value.norm() == 0.0 {
        return Err(Error::domain(format!(
            "pick on configuration {:?} whose family coefficient vanishes",
            down_sites(mask)
        )));
    }
    Ok(value)
}

/// Q⁺_{r,r−1} applied to an arbitrary vector of sector r−1:
/// each term c_D φ(D) is picked (divided by a_lo(D)), flipped at every free
/// site j, and weighted by A(D ∪ {j}) / r.
pub fn apply_raise(
    lo: &AmplitudeFamily,
    hi: &AmplitudeFamily,
    input: &StateVector,
    exec: Exec,
) -> Result<StateVector> {
    check_pair(lo, hi)?;
    check_input(input, lo)?;
    let n = lo.n_sites;
    let r = hi.arity;
    let lo_sector = input.sector().clone();
    let lo_amps = build_state_with(lo, &lo_sector, exec)?;
    let hi_sector = Arc::new(enumerate_sector(n, r)?);
    let hi_amps = build_state_with(hi, &hi_sector, exec)?;
    let psi = input.amplitudes();
    let out = exec.map(hi_sector.dim(), |t| -> Result<Complex64> {
        let mask = hi_sector.configs()[t];
        let mut acc = Complex64::new(0.0, 0.0);
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            let src = lo_sector.rank_unchecked(mask & !bit);
            let picked = psi[src] / nonzero(lo_amps.amplitudes()[src], mask & !bit)?;
            acc += picked;
            rest &= rest - 1;
        }
        Ok(acc * hi_amps.amplitudes()[t] / r as f64)
    });
    StateVector::new(hi_sector, out.into_iter().collect::<Result<Vec<_>>>()?)
}

/// Q⁻_{r−1,r} applied to an arbitrary vector of sector r: each term is
/// picked (divided by a_hi(D)), one down spin m ∈ D is flipped up, and the
/// result is weighted by a_lo(D \ {m}) / (N − r + 1).
pub fn apply_lower(
    hi: &AmplitudeFamily,
    lo: &AmplitudeFamily,
    input: &StateVector,
    exec: Exec,
) -> Result<StateVector> {
    check_pair(lo, hi)?;
    check_input(input, hi)?;
    let n = lo.n_sites;
    let r = hi.arity;
    let hi_sector = input.sector().clone();
    let hi_amps = build_state_with(hi, &hi_sector, exec)?;
    let lo_sector = Arc::new(enumerate_sector(n, r - 1)?);
    let lo_amps = build_state_with(lo, &lo_sector, exec)?;
    let psi = input.amplitudes();
    let full: u32 = (1u32 << n) - 1;
    let norm = (n - r + 1) as f64;
    let out = exec.map(lo_sector.dim(), |e| -> Result<Complex64> {
        let mask = lo_sector.configs()[e];
        let mut acc = Complex64::new(0.0, 0.0);
        let mut free = !mask & full;
        while free != 0 {
            let bit = free & free.wrapping_neg();
            let src = hi_sector.rank_unchecked(mask | bit);
            acc += psi[src] / nonzero(hi_amps.amplitudes()[src], mask | bit)?;
            free &= free - 1;
        }
        Ok(acc * lo_amps.amplitudes()[e] / norm)
    });
    StateVector::new(lo_sector, out.into_iter().collect::<Result<Vec<_>>>()?)
}

/// Q⁺_{r,r−1}|ψ_{r−1}⟩ for the lower family's own state; reproduces the
/// higher family's state.
pub fn raise_action(
    family_lo: &AmplitudeFamily,
    family_hi: &AmplitudeFamily,
    sector_hi: &Arc<SectorBasis>,
) -> Result<StateVector> {
    check_pair(family_lo, family_hi)?;
    family_hi.check_sector(sector_hi)?;
    let psi_lo = family_state(family_lo)?;
    let out = apply_raise(family_lo, family_hi, &psi_lo, Exec::default())?;
    StateVector::new(sector_hi.clone(), out.into_amplitudes())
}

/// Q⁻_{r−1,r}|ψ_r⟩ for the higher family's own state; reproduces the lower
/// family's state.
pub fn lower_action(
    family_hi: &AmplitudeFamily,
    family_lo: &AmplitudeFamily,
    sector_lo: &Arc<SectorBasis>,
) -> Result<StateVector> {
    check_pair(family_lo, family_hi)?;
    family_lo.check_sector(sector_lo)?;
    let psi_hi = family_state(family_hi)?;
    let out = apply_lower(family_hi, family_lo, &psi_hi, Exec::default())?;
    StateVector::new(sector_lo.clone(), out.into_amplitudes())
}

/// Explicit matrix of Q⁺_{r,r−1} (sector r−1 → r).
pub fn raise_matrix(lo: &AmplitudeFamily, hi: &AmplitudeFamily) -> Result<SectorMatrix> {
    check_pair(lo, hi)?;
    let cols = Arc::new(enumerate_sector(lo.n_sites, lo.arity)?);
    let rows = Arc::new(enumerate_sector(hi.n_sites, hi.arity)?);
    SectorMatrix::from_action(rows, cols, |v| apply_raise(lo, hi, v, Exec::Seq))
}

/// Explicit matrix of Q⁻_{r−1,r} (sector r → r−1).
pub fn lower_matrix(hi: &AmplitudeFamily, lo: &AmplitudeFamily) -> Result<SectorMatrix> {
    check_pair(lo, hi)?;
    let cols = Arc::new(enumerate_sector(hi.n_sites, hi.arity)?);
    let rows = Arc::new(enumerate_sector(lo.n_sites, lo.arity)?);
    SectorMatrix::from_action(rows, cols, |v| apply_lower(hi, lo, v, Exec::Seq))
}

/// ‖[H, Q⁺]ψ_lo − ω Q⁺ψ_lo‖ / ‖Q⁺ψ_lo‖ with ω = E_hi − E_lo.
///
/// ψ_lo is first confirmed to be an eigenstate at E_lo, which licenses
/// Q(Hψ_lo) = E_lo·Qψ_lo. The residual is then H(Qψ) − E_lo·Qψ − ω·Qψ.
/// Evaluating Q(Hψ_lo) term by term instead is ill-conditioned: the pick
/// divides by the lower family's coefficients, and Bethe states carry
/// coefficients that vanish by symmetry but come out as round-off.
pub fn commutator_residual(
    spec: &HamiltonianSpec,
    family_lo: &AmplitudeFamily,
    family_hi: &AmplitudeFamily,
    e_lo: f64,
    e_hi: f64,
) -> Result<f64> {
    check_pair(family_lo, family_hi)?;
    if spec.n_sites() != family_lo.n_sites {
        return Err(Error::domain("Hamiltonian and families on different chains"));
    }
    let psi_lo = family_state(family_lo)?;
    let lo_residual = eigen_residual(spec, &psi_lo, e_lo)?;
    if lo_residual > EIGENSTATE_TOL {
        return Err(Error::NotEigenstate(lo_residual));
    }
    let exec = Exec::default();
    let q_psi = apply_raise(family_lo, family_hi, &psi_lo, exec)?;
    let norm = q_psi.norm();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let h_q_psi = apply_hamiltonian(spec, &q_psi)?;
    let q_h_psi = q_psi.scaled(Complex64::new(e_lo, 0.0));
    let omega = Complex64::new(e_hi - e_lo, 0.0);
    let defect = h_q_psi.sub(&q_h_psi)?.sub(&q_psi.scaled(omega))?;
    Ok(defect.norm() / norm)
}

#[derive(Clone, Debug)]
pub enum LadderStep {
    Raise { lo: AmplitudeFamily, hi: AmplitudeFamily },
    Lower { hi: AmplitudeFamily, lo: AmplitudeFamily },
}

impl LadderStep {
    fn source_arity(&self) -> usize {
        match self {
            LadderStep::Raise { lo, .. } => lo.arity,
            LadderStep::Lower { hi, .. } => hi.arity,
        }
    }

    fn target_arity(&self) -> usize {
        match self {
            LadderStep::Raise { hi, .. } => hi.arity,
            LadderStep::Lower { lo, .. } => lo.arity,
        }
    }
}

/// Product of shift operators, stored in application order.
#[derive(Clone, Debug, Default)]
pub struct LadderChain {
    steps: Vec<LadderStep>,
}

impl LadderChain {
    pub fn new(steps: Vec<LadderStep>) -> Result<Self> {
        for step in &steps {
            let (lo, hi) = match step {
                LadderStep::Raise { lo, hi } | LadderStep::Lower { hi, lo } => (lo, hi),
            };
            check_pair(lo, hi)?;
        }
        for pair in steps.windows(2) {
            if pair[0].target_arity() != pair[1].source_arity() {
                return Err(Error::domain(format!(
                    "ladder steps not contiguous: sector {} then sector {}",
                    pair[0].target_arity(),
                    pair[1].source_arity()
                )));
            }
        }
        Ok(LadderChain { steps })
    }

    /// ℒ⁺(n, m) = Q⁺_{n,n−1} ⋯ Q⁺_{m+1,m} for families with consecutive
    /// arities m, m+1, …, n.
    pub fn raising(families: &[AmplitudeFamily]) -> Result<Self> {
        let steps = families
            .windows(2)
            .map(|w| LadderStep::Raise {
                lo: w[0].clone(),
                hi: w[1].clone(),
            })
            .collect();
        Self::new(steps)
    }

    /// ℒ⁻(m, n) = Q⁻_{m,m+1} ⋯ Q⁻_{n−1,n}; families listed with ascending
    /// arity m, …, n.
    pub fn lowering(families: &[AmplitudeFamily]) -> Result<Self> {
        let steps = families
            .windows(2)
            .rev()
            .map(|w| LadderStep::Lower {
                hi: w[1].clone(),
                lo: w[0].clone(),
            })
            .collect();
        Self::new(steps)
    }

    pub fn steps(&self) -> &[LadderStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }
}

/// Applies the chain's steps in order; an empty chain is the identity.
pub fn ladder_compose(chain: &LadderChain, start: &StateVector) -> Result<StateVector> {
    let exec = Exec::default();
    let mut state = start.clone();
    for (i, step) in chain.steps.iter().enumerate() {
        if state.n_down() != step.source_arity() {
            return Err(Error::domain(format!(
                "step {i} expects sector {}, state is in sector {}",
                step.source_arity(),
                state.n_down()
            )));
        }
        state = match step {
            LadderStep::Raise { lo, hi } => apply_raise(lo, hi, &state, exec)?,
            LadderStep::Lower { hi, lo } => apply_lower(hi, lo, &state, exec)?,
        };
    }
    Ok(state)
}
