//! Brute-force validation: a dense Hermitian eigensolver plus the Rayleigh
//! quotient and eigen-residual used to judge every closed-form claim.
//!
//! The eigensolver is cyclic Jacobi. Each rotation first removes the phase
//! of the pivot A_pq with a diagonal unitary, then applies an ordinary real
//! Jacobi rotation, so the whole sweep works on complex Hermitian input.

use num_complex::Complex64;

use crate::basis::StateVector;
use crate::models::{apply_hamiltonian, HamiltonianSpec, SectorMatrix};
use crate::{Error, Result};

/// Non-Hermiticity tolerated on input.
pub const HERMITIAN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    /// Column-major: `eigenvectors[i]` belongs to `eigenvalues[i]`.
    eigenvectors: Vec<Vec<Complex64>>,
    backward_error: f64,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Vec<Complex64>] {
        &self.eigenvectors
    }

    /// max_i ‖A v_i − λ_i v_i‖ / max(‖A‖_F, 1).
    pub fn backward_error(&self) -> f64 {
        self.backward_error
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Full eigendecomposition of a Hermitian sector matrix.
pub fn eig_hermitian(matrix: &SectorMatrix) -> Result<EigenDecomposition> {
    let (nr, nc) = matrix.shape();
    if nr != nc {
        return Err(Error::domain(format!("matrix is {nr}x{nc}, not square")));
    }
    eig_hermitian_dense(&matrix.to_dense()?, nr)
}

/// Full eigendecomposition of a row-major dense Hermitian matrix.
pub fn eig_hermitian_dense(dense: &[Complex64], n: usize) -> Result<EigenDecomposition> {
    if dense.len() != n * n {
        return Err(Error::domain("dense buffer does not match dimension"));
    }
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((dense[i * n + j] - dense[j * n + i].conj()).norm());
        }
    }
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }

    let mut a = dense.to_vec();
    // Symmetrise exactly so the sweep sees a Hermitian matrix.
    for i in 0..n {
        a[i * n + i] = Complex64::new(a[i * n + i].re, 0.0);
        for j in i + 1..n {
            let v = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = v;
            a[j * n + i] = v.conj();
        }
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let frob = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let target = f64::EPSILON * n as f64 * frob.max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();

    let scale = frob.max(1.0);
    let mut backward_error: f64 = 0.0;
    for (lambda, vec) in eigenvalues.iter().zip(&eigenvectors) {
        let mut res = 0.0;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += dense[i * n + j] * vec[j];
            }
            res += (acc - vec[i] * lambda).norm_sqr();
        }
        backward_error = backward_error.max(res.sqrt() / scale);
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        backward_error,
    })
}

/// Zeroes a[p][q] (and a[q][p]) by a unitary similarity, accumulating the
/// transformation into the columns of `v`.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * n + q] = Complex64::new(0.0, 0.0);
        a[q * n + p] = Complex64::new(0.0, 0.0);
        return;
    }

    // Phase step: D = diag(.., e^{-iα} at q, ..) makes a[p][q] real positive.
    let phase = apq / mag;
    let phase_conj = phase.conj();
    for k in 0..n {
        a[k * n + q] *= phase_conj;
    }
    for k in 0..n {
        a[q * n + k] *= phase;
    }
    for k in 0..n {
        v[k * n + q] *= phase_conj;
    }

    // Real Jacobi rotation on the (p, q) plane.
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * s;
        a[k * n + q] = akp * s + akq * c;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * s;
        a[q * n + k] = apk * s + aqk * c;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(app - t * mag, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * s;
        v[k * n + q] = vkp * s + vkq * c;
    }
}

/// Nearest eigenvalue to a predicted energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumMatch {
    pub energy: f64,
    pub nearest: f64,
    pub index: usize,
    pub gap: f64,
    pub matched: bool,
}

pub fn spectrum_contains(eigs: &EigenDecomposition, energy: f64, tol: f64) -> Result<SpectrumMatch> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    spectrum_match(eigs.eigenvalues(), energy, tol)
}

/// [`spectrum_contains`] on a bare eigenvalue list.
pub fn spectrum_match(eigenvalues: &[f64], energy: f64, tol: f64) -> Result<SpectrumMatch> {
    let (index, gap) = eigenvalues
        .iter()
        .map(|l| (l - energy).abs())
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::domain("empty spectrum"))?;
    Ok(SpectrumMatch {
        energy,
        nearest: eigenvalues[index],
        index,
        gap,
        matched: gap <= tol,
    })
}

/// ⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩.
pub fn rayleigh(spec: &HamiltonianSpec, state: &StateVector) -> Result<f64> {
    let norm2 = state.norm().powi(2);
    if norm2 == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let hv = apply_hamiltonian(spec, state)?;
    let num = state.inner(&hv)?;
    let value = num.re / norm2;
    let leak = num.im.abs() / norm2;
    // H is Hermitian, so leakage is pure round-off.
    debug_assert!(leak <= 1e-12 * value.abs().max(1.0) * state.sector().dim() as f64);
    Ok(value)
}

/// ‖Hψ − Eψ‖ / ‖ψ‖.
pub fn eigen_residual(spec: &HamiltonianSpec, state: &StateVector, energy: f64) -> Result<f64> {
    let norm = state.norm();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let hv = apply_hamiltonian(spec, state)?;
    let diff = hv.sub(&state.scaled(Complex64::new(energy, 0.0)))?;
    Ok(diff.norm() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_sector;
    use crate::models::build_hamiltonian;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn one_by_one_zero() {
        let e = eig_hermitian_dense(&[c(0.0, 0.0)], 1).unwrap();
        assert_eq!(e.eigenvalues(), &[0.0]);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let m = [c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
        let e = eig_hermitian_dense(&m, 2).unwrap();
        assert!((e.eigenvalues()[0]).abs() < 1e-15);
        assert!((e.eigenvalues()[1] - 2.0).abs() < 1e-15);
        assert!(e.backward_error() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(matches!(eig_hermitian_dense(&m, 2), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn random_complex_hermitian_matches_nalgebra() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [3usize, 7, 20] {
            let mut m = vec![c(0.0, 0.0); n * n];
            for i in 0..n {
                m[i * n + i] = c(rng.random_range(-1.0..1.0), 0.0);
                for j in i + 1..n {
                    let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    m[i * n + j] = z;
                    m[j * n + i] = z.conj();
                }
            }
            let ours = eig_hermitian_dense(&m, n).unwrap();
            let na = nalgebra::DMatrix::from_row_slice(n, n, &m);
            let mut theirs: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.eigenvalues().iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
            }
            assert!(ours.backward_error() < 1e-13);
            // orthonormal columns
            for i in 0..n {
                for j in 0..n {
                    let dot: Complex64 = ours.eigenvectors()[i]
                        .iter()
                        .zip(&ours.eigenvectors()[j])
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spectrum_queries() {
        let spec = HamiltonianSpec::xxx(4, 1.0).unwrap();
        let s = Arc::new(enumerate_sector(4, 2).unwrap());
        let eig = eig_hermitian(&build_hamiltonian(&spec, &s).unwrap()).unwrap();
        let m = spectrum_contains(&eig, -3.0, 1e-8).unwrap();
        assert!(m.matched && m.gap <= 1e-8 && m.index == 0);
        assert!(!spectrum_contains(&eig, 1.0, 1e-8).unwrap().matched);
        assert!(spectrum_contains(&eig, 1.0, 0.0).is_err());
    }

    #[test]
    fn rayleigh_basics() {
        let spec = HamiltonianSpec::xxx(4, 1.0).unwrap();
        assert_eq!(rayleigh(&spec, &StateVector::vacuum(4).unwrap()).unwrap(), 0.0);
        let s = Arc::new(enumerate_sector(4, 1).unwrap());
        let v = StateVector::new(s.clone(), [-1.0, 1.0, -1.0, 1.0].map(|x| c(x, 0.0)).to_vec()).unwrap();
        assert!((rayleigh(&spec, &v).unwrap() + 2.0).abs() < 1e-15);
        assert_eq!(rayleigh(&spec, &StateVector::zeros(s)), Err(Error::ZeroNorm));
    }
}
