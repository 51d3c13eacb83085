//! XXX Heisenberg and Haldane-Shastry ring Hamiltonians on one
//! magnetization sector.
//!
//! Both are sums of isotropic bond terms w·(S_i·S_j − ¼). On a pair with
//! aligned spins a bond contributes nothing; on an anti-aligned pair it
//! contributes −w/2 on the diagonal and +w/2 to the configuration with the
//! two spins exchanged.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{SectorBasis, StateVector};
use crate::{Error, Exec, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    /// Nearest-neighbour ring, H = J Σ (S_j·S_{j+1} − ¼).
    Xxx { j: f64 },
    /// Inverse-square ring, H = 4 Σ_{i<j} J_{j−i} (S_i·S_j − ¼).
    Hs { j0: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianSpec {
    model: Model,
    n_sites: usize,
}

/// One exchange bond between 0-based bit positions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bond {
    pub bits: u32,
    pub weight: f64,
}

impl HamiltonianSpec {
    pub fn new(model: Model, n_sites: usize) -> Result<Self> {
        let coupling = match model {
            Model::Xxx { j } => {
                if n_sites < 3 {
                    return Err(Error::domain(format!(
                        "XXX ring needs N >= 3, got {n_sites}"
                    )));
                }
                j
            }
            Model::Hs { j0 } => {
                if n_sites < 4 || !n_sites.is_multiple_of(2) {
                    return Err(Error::domain(format!(
                        "Haldane-Shastry ring needs even N >= 4, got {n_sites}"
                    )));
                }
                j0
            }
        };
        if n_sites > crate::basis::MAX_SITES {
            return Err(Error::domain(format!("chain length {n_sites} too large")));
        }
        if !coupling.is_finite() || coupling == 0.0 {
            return Err(Error::domain(format!("coupling must be finite and nonzero, got {coupling}")));
        }
        Ok(HamiltonianSpec { model, n_sites })
    }

    pub fn xxx(n_sites: usize, j: f64) -> Result<Self> {
        Self::new(Model::Xxx { j }, n_sites)
    }

    pub fn hs(n_sites: usize, j0: f64) -> Result<Self> {
        Self::new(Model::Hs { j0 }, n_sites)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn coupling(&self) -> f64 {
        match self.model {
            Model::Xxx { j } => j,
            Model::Hs { j0 } => j0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.model {
            Model::Xxx { .. } => "xxx",
            Model::Hs { .. } => "hs",
        }
    }

    /// Exchange bonds with their weights (J for XXX ring bonds, 4·J_{j−i}
    /// for every Haldane-Shastry pair).
    pub fn bonds(&self) -> Vec<Bond> {
        let n = self.n_sites;
        match self.model {
            Model::Xxx { j } => (0..n)
                .map(|i| Bond {
                    bits: 1 << i | 1 << ((i + 1) % n),
                    weight: j,
                })
                .collect(),
            Model::Hs { j0 } => {
                let mut out = Vec::with_capacity(n * (n - 1) / 2);
                for i in 0..n {
                    for k in i + 1..n {
                        out.push(Bond {
                            bits: 1 << i | 1 << k,
                            weight: 4.0 * hs_coupling_unchecked(k - i, n, j0),
                        });
                    }
                }
                out
            }
        }
    }
}

/// J_n = J0 / sin²(nπ/N) for a site separation n in 1..N−1.
pub fn coupling_hs(separation: usize, n_sites: usize, j0: f64) -> Result<f64> {
    if separation == 0 || separation >= n_sites {
        return Err(Error::domain(format!(
            "separation {separation} outside 1..{n_sites}"
        )));
    }
    Ok(hs_coupling_unchecked(separation, n_sites, j0))
}

fn hs_coupling_unchecked(separation: usize, n_sites: usize, j0: f64) -> f64 {
    let s = (separation as f64 * PI / n_sites as f64).sin();
    j0 / (s * s)
}

/// Sparse operator between two sectors, coordinate list in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorMatrix {
    rows: Arc<SectorBasis>,
    cols: Arc<SectorBasis>,
    entries: Vec<(usize, usize, Complex64)>,
}

/// Largest dimension accepted by [`SectorMatrix::to_dense`].
pub const MAX_DENSE_DIM: usize = 4096;

impl SectorMatrix {
    /// Builds from unordered triplets; duplicates are summed and exact zeros
    /// dropped.
    pub fn from_triplets(
        rows: Arc<SectorBasis>,
        cols: Arc<SectorBasis>,
        mut entries: Vec<(usize, usize, Complex64)>,
    ) -> Result<Self> {
        if let Some(&(r, c, _)) = entries
            .iter()
            .find(|&&(r, c, _)| r >= rows.dim() || c >= cols.dim())
        {
            return Err(Error::domain(format!("entry ({r}, {c}) out of range")));
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != Complex64::new(0.0, 0.0));
        Ok(SectorMatrix {
            rows,
            cols,
            entries: merged,
        })
    }

    /// Matrix of a linear map given its action on each column basis vector.
    pub fn from_action<F>(rows: Arc<SectorBasis>, cols: Arc<SectorBasis>, mut action: F) -> Result<Self>
    where
        F: FnMut(&StateVector) -> Result<StateVector>,
    {
        let mut entries = Vec::new();
        for c in 0..cols.dim() {
            let image = action(&StateVector::basis_vector(cols.clone(), c))?;
            if image.n_down() != rows.n_down() || image.n_sites() != rows.n_sites() {
                return Err(Error::domain("action lands outside the row sector"));
            }
            for (r, &v) in image.amplitudes().iter().enumerate() {
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((r, c, v));
                }
            }
        }
        Self::from_triplets(rows, cols, entries)
    }

    pub fn rows(&self) -> &Arc<SectorBasis> {
        &self.rows
    }

    pub fn cols(&self) -> &Arc<SectorBasis> {
        &self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .binary_search_by_key(&(row, col), |&(r, c, _)| (r, c))
            .map(|i| self.entries[i].2)
            .unwrap_or_default()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.dim(), self.cols.dim())
    }

    pub fn adjoint(&self) -> SectorMatrix {
        let entries = self
            .entries
            .iter()
            .map(|&(r, c, v)| (c, r, v.conj()))
            .collect();
        Self::from_triplets(self.cols.clone(), self.rows.clone(), entries)
            .expect("transposed indices stay in range")
    }

    pub fn scaled(&self, factor: Complex64) -> SectorMatrix {
        let entries = self.entries.iter().map(|&(r, c, v)| (r, c, v * factor)).collect();
        Self::from_triplets(self.rows.clone(), self.cols.clone(), entries)
            .expect("same indices")
    }

    /// Sum of two matrices on the same sectors.
    pub fn add(&self, other: &SectorMatrix) -> Result<SectorMatrix> {
        if self.shape() != other.shape()
            || self.rows.n_down() != other.rows.n_down()
            || self.cols.n_down() != other.cols.n_down()
        {
            return Err(Error::domain("adding matrices on different sectors"));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::from_triplets(self.rows.clone(), self.cols.clone(), entries)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &SectorMatrix) -> Result<f64> {
        let diff = self.add(&other.scaled(Complex64::new(-1.0, 0.0)))?;
        Ok(diff.entries.iter().map(|e| e.2.norm()).fold(0.0, f64::max))
    }

    /// max |A_ab − conj(A_ba)|; only meaningful for square matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(r, c, v)| (v - self.entry(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n_sites() != self.cols.n_sites() || state.n_down() != self.cols.n_down() {
            return Err(Error::domain("state is not in the matrix column sector"));
        }
        let mut out = StateVector::zeros(self.rows.clone()).into_amplitudes();
        let a = state.amplitudes();
        for &(r, c, v) in &self.entries {
            out[r] += v * a[c];
        }
        StateVector::new(self.rows.clone(), out)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Result<Vec<Complex64>> {
        let (nr, nc) = self.shape();
        if nr.max(nc) > MAX_DENSE_DIM {
            return Err(Error::domain(format!(
                "dense conversion limited to dimension {MAX_DENSE_DIM}, got {}",
                nr.max(nc)
            )));
        }
        let mut dense = vec![Complex64::new(0.0, 0.0); nr * nc];
        for &(r, c, v) in &self.entries {
            dense[r * nc + c] = v;
        }
        Ok(dense)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries
            .iter()
            .filter(|e| e.0 == e.1)
            .map(|e| e.2)
            .sum()
    }
}

fn check_sector(spec: &HamiltonianSpec, sector: &SectorBasis) -> Result<()> {
    if sector.n_sites() != spec.n_sites {
        return Err(Error::domain(format!(
            "sector has {} sites, Hamiltonian has {}",
            sector.n_sites(),
            spec.n_sites
        )));
    }
    Ok(())
}

/// Row `mask` of H as (column mask, value) pairs; diagonal first.
fn hamiltonian_row(bonds: &[Bond], mask: u32) -> (f64, Vec<(u32, f64)>) {
    let mut diag = 0.0;
    let mut off = Vec::new();
    for b in bonds {
        let both = mask & b.bits;
        if both != 0 && both != b.bits {
            diag -= 0.5 * b.weight;
            off.push((mask ^ b.bits, 0.5 * b.weight));
        }
    }
    (diag, off)
}

pub fn build_hamiltonian(spec: &HamiltonianSpec, sector: &Arc<SectorBasis>) -> Result<SectorMatrix> {
    build_hamiltonian_with(spec, sector, Exec::default())
}

/// Row-parallel assembly; each worker owns one row.
pub fn build_hamiltonian_with(
    spec: &HamiltonianSpec,
    sector: &Arc<SectorBasis>,
    exec: Exec,
) -> Result<SectorMatrix> {
    check_sector(spec, sector)?;
    let bonds = spec.bonds();
    let rows = exec.map(sector.dim(), |row| {
        let (diag, off) = hamiltonian_row(&bonds, sector.configs()[row]);
        let mut entries: Vec<(usize, usize, Complex64)> = off
            .into_iter()
            .map(|(m, v)| (row, sector.rank_unchecked(m), Complex64::new(v, 0.0)))
            .collect();
        if diag != 0.0 {
            entries.push((row, row, Complex64::new(diag, 0.0)));
        }
        entries
    });
    SectorMatrix::from_triplets(sector.clone(), sector.clone(), rows.concat())
}

/// H·ψ without materialising H.
pub fn apply_hamiltonian(spec: &HamiltonianSpec, state: &StateVector) -> Result<StateVector> {
    apply_hamiltonian_with(spec, state, Exec::default())
}

pub fn apply_hamiltonian_with(
    spec: &HamiltonianSpec,
    state: &StateVector,
    exec: Exec,
) -> Result<StateVector> {
    let sector = state.sector();
    check_sector(spec, sector)?;
    let bonds = spec.bonds();
    let psi = state.amplitudes();
    let out = exec.map(sector.dim(), |row| {
        let mask = sector.configs()[row];
        let mut acc = Complex64::new(0.0, 0.0);
        for b in &bonds {
            let both = mask & b.bits;
            if both != 0 && both != b.bits {
                let partner = sector.rank_unchecked(mask ^ b.bits);
                acc += (psi[partner] - psi[row]) * (0.5 * b.weight);
            }
        }
        acc
    });
    StateVector::new(sector.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_sector, translate};
    use crate::oracle::eig_hermitian;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sector(n: usize, r: usize) -> Arc<SectorBasis> {
        Arc::new(enumerate_sector(n, r).unwrap())
    }

    #[test]
    fn hs_couplings() {
        assert!((coupling_hs(1, 4, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((coupling_hs(2, 4, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((coupling_hs(3, 4, 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(coupling_hs(0, 4, 1.0).is_err());
        assert!(coupling_hs(4, 4, 1.0).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(HamiltonianSpec::xxx(2, 1.0).is_err());
        assert!(HamiltonianSpec::xxx(3, 1.0).is_ok());
        assert!(HamiltonianSpec::hs(3, 1.0).is_err());
        assert!(HamiltonianSpec::hs(2, 1.0).is_err());
        assert!(HamiltonianSpec::hs(6, 1.0).is_ok());
        assert!(HamiltonianSpec::xxx(4, 0.0).is_err());
        assert!(HamiltonianSpec::hs(4, f64::INFINITY).is_err());
    }

    #[test]
    fn vacuum_block_is_zero() {
        let h = build_hamiltonian(&HamiltonianSpec::xxx(4, 1.0).unwrap(), &sector(4, 0)).unwrap();
        assert_eq!(h.shape(), (1, 1));
        assert_eq!(h.entry(0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn xxx_one_magnon_spectrum() {
        let j = 1.3;
        let h = build_hamiltonian(&HamiltonianSpec::xxx(4, j).unwrap(), &sector(4, 1)).unwrap();
        let eig = eig_hermitian(&h).unwrap();
        let expected = [-2.0 * j, -j, -j, 0.0];
        for (a, b) in eig.eigenvalues().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn hs_one_magnon_ground() {
        let h = build_hamiltonian(&HamiltonianSpec::hs(4, 1.0).unwrap(), &sector(4, 1)).unwrap();
        let eig = eig_hermitian(&h).unwrap();
        assert!((eig.eigenvalues()[0] + 16.0).abs() < 1e-12);
    }

    #[test]
    fn sector_mismatch_is_rejected() {
        let spec = HamiltonianSpec::xxx(5, 1.0).unwrap();
        assert!(build_hamiltonian(&spec, &sector(4, 1)).is_err());
        assert!(apply_hamiltonian(&spec, &StateVector::vacuum(4).unwrap()).is_err());
    }

    #[test]
    fn hermitian_and_matrix_free_agree() {
        for n in 4..=8 {
            let specs = [
                HamiltonianSpec::xxx(n, 0.7).unwrap(),
                HamiltonianSpec::hs(n + n % 2, 1.1).unwrap(),
            ];
            for spec in specs {
                let n = spec.n_sites();
                for r in 0..=n {
                    let s = sector(n, r);
                    let h = build_hamiltonian(&spec, &s).unwrap();
                    assert_eq!(h.hermiticity_defect(), 0.0);
                    for col in 0..s.dim() {
                        let e = StateVector::basis_vector(s.clone(), col);
                        let hv = apply_hamiltonian(&spec, &e).unwrap();
                        for row in 0..s.dim() {
                            assert!((hv.amplitudes()[row] - h.entry(row, col)).norm() < 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn off_diagonal_pattern_matches_pair_couplings() {
        let n = 6;
        let j0 = 0.8;
        let spec = HamiltonianSpec::hs(n, j0).unwrap();
        let s = sector(n, 1);
        let h = build_hamiltonian(&spec, &s).unwrap();
        for a in 1..=n {
            for b in 1..=n {
                if a == b {
                    continue;
                }
                let ra = s.rank(1 << (a - 1)).unwrap();
                let rb = s.rank(1 << (b - 1)).unwrap();
                let d = a.abs_diff(b);
                let want = 2.0 * coupling_hs(d, n, j0).unwrap();
                assert!((h.entry(ra, rb).re - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_energy_is_zero() {
        for n in 4..=12 {
            let vac = StateVector::vacuum(n).unwrap();
            for spec in [HamiltonianSpec::xxx(n, 1.0).unwrap()]
                .into_iter()
                .chain(HamiltonianSpec::hs(n, 1.0).ok())
            {
                let hv = apply_hamiltonian(&spec, &vac).unwrap();
                assert!(hv.norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn plane_wave_pi_is_eigenstate() {
        let j = 1.0;
        let s = sector(4, 1);
        let v = StateVector::new(
            s,
            [-1.0, 1.0, -1.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
        .unwrap();
        let hv = apply_hamiltonian(&HamiltonianSpec::xxx(4, j).unwrap(), &v).unwrap();
        assert!(hv.max_abs_diff(&v.scaled(Complex64::new(-2.0 * j, 0.0))).unwrap() < 1e-14);
    }

    #[test]
    fn commutes_with_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 4..=8 {
            for spec in [HamiltonianSpec::xxx(n, 1.0).unwrap()]
                .into_iter()
                .chain(HamiltonianSpec::hs(n, 1.0).ok())
            {
                for r in 0..=n {
                    let s = sector(n, r);
                    for _ in 0..10 {
                        let amps = (0..s.dim())
                            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                            .collect();
                        let v = StateVector::new(s.clone(), amps).unwrap();
                        let a = apply_hamiltonian(&spec, &translate(&v)).unwrap();
                        let b = translate(&apply_hamiltonian(&spec, &v).unwrap());
                        assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn seq_and_par_assembly_identical() {
        let spec = HamiltonianSpec::hs(10, 1.0).unwrap();
        let s = sector(10, 5);
        let a = build_hamiltonian_with(&spec, &s, Exec::Seq).unwrap();
        let b = build_hamiltonian_with(&spec, &s, Exec::Par).unwrap();
        assert_eq!(a, b);
    }
}
