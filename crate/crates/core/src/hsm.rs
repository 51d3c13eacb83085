//! Haldane-Shastry Jastrow states and their closed-form energy ladder.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::models::coupling_hs;
use crate::{Error, Result};

fn check_even(n_sites: usize) -> Result<()> {
    if n_sites < 4 || !n_sites.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "Haldane-Shastry ring needs even N >= 4, got {n_sites}"
        )));
    }
    Ok(())
}

/// Lattice sums x = Σ J_n and y = Σ (−1)^{n+1} J_n over n = 1..N−1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HsConstants {
    pub x: f64,
    pub y: f64,
    pub n_sites: usize,
    pub j0: f64,
}

/// Closed forms x = J0(N²−1)/3, y = J0(N²/2+1)/3.
pub fn hs_constants(n_sites: usize, j0: f64) -> Result<HsConstants> {
    check_even(n_sites)?;
    let n2 = (n_sites * n_sites) as f64;
    Ok(HsConstants {
        x: j0 * (n2 - 1.0) / 3.0,
        y: j0 * (n2 / 2.0 + 1.0) / 3.0,
        n_sites,
        j0,
    })
}

impl HsConstants {
    /// The same sums evaluated term by term from the couplings.
    pub fn direct_sums(&self) -> (f64, f64) {
        let mut x = 0.0;
        let mut y = 0.0;
        for n in 1..self.n_sites {
            let j = coupling_hs(n, self.n_sites, self.j0).expect("separation in range");
            x += j;
            y += if n % 2 == 1 { j } else { -j };
        }
        (x, y)
    }
}

/// a(m₁…m_r) = e^{iπ Σm} ∏_{i<j} sin²(π(m_j − m_i)/N).
pub fn jastrow_amplitude(n_sites: usize, sites: &[usize]) -> Result<Complex64> {
    check_even(n_sites)?;
    if sites.iter().any(|&s| s == 0 || s > n_sites) {
        return Err(Error::domain(format!("sites {sites:?} outside 1..={n_sites}")));
    }
    if sites.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain(format!("repeated site in {sites:?}")));
    }
    if sites.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::domain(format!("sites {sites:?} not increasing")));
    }
    Ok(jastrow_value(n_sites, sites))
}

/// Unchecked product form; vanishes when two coordinates coincide.
pub(crate) fn jastrow_value(n_sites: usize, sites: &[usize]) -> Complex64 {
    let sum: usize = sites.iter().sum();
    let sign = if sum.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut prod = 1.0;
    for (i, &a) in sites.iter().enumerate() {
        for &b in &sites[i + 1..] {
            let s = (PI * (b as f64 - a as f64) / n_sites as f64).sin();
            prod *= s * s;
        }
    }
    Complex64::new(sign * prod, 0.0)
}

/// E_r = −2r(x+y) + 4r(r−1)J0 + (4/3) r(r−1)(r−2) J0.
pub fn hs_energy(n_sites: usize, r: usize, j0: f64) -> Result<f64> {
    let c = hs_constants(n_sites, j0)?;
    if r > n_sites {
        return Err(Error::domain(format!("r={r} exceeds N={n_sites}")));
    }
    let r = r as f64;
    Ok(-2.0 * r * (c.x + c.y)
        + 4.0 * r * (r - 1.0) * j0
        + 4.0 / 3.0 * r * (r - 1.0) * (r - 2.0) * j0)
}

/// cot λ₁ cot λ₃ + cot λ₂ cot λ₃ − cot λ₁ cot λ₂ + 1 with λ₃ = λ₁ + λ₂;
/// identically zero away from the poles.
pub fn cot_identity_defect(l1: f64, l2: f64) -> f64 {
    let cot = |x: f64| x.cos() / x.sin();
    let l3 = l1 + l2;
    cot(l1) * cot(l3) + cot(l2) * cot(l3) - cot(l1) * cot(l2) + 1.0
}

/// (Σ e^{−inπ} sin²(nπ/N), Σ e^{−inπ} cos²(nπ/N), Σ e^{−inπ}) over
/// n = 1..N−1; for even N these are 0, −1 and −1.
pub fn alternating_sums(n_sites: usize) -> (f64, f64, f64) {
    let (mut s, mut c, mut e) = (0.0, 0.0, 0.0);
    for n in 1..n_sites {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let a = n as f64 * PI / n_sites as f64;
        s += sign * a.sin().powi(2);
        c += sign * a.cos().powi(2);
        e += sign;
    }
    (s, c, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_n4_n6() {
        let c = hs_constants(4, 1.0).unwrap();
        assert!((c.x - 5.0).abs() < 1e-15 && (c.y - 3.0).abs() < 1e-15);
        let (x, y) = c.direct_sums();
        assert!((x - 5.0).abs() < 1e-13 && (y - 3.0).abs() < 1e-13);
        let c = hs_constants(6, 2.0).unwrap();
        assert!((c.x - 2.0 * 35.0 / 3.0).abs() < 1e-13);
        assert!(hs_constants(5, 1.0).is_err());
        assert!(hs_constants(2, 1.0).is_err());
    }

    #[test]
    fn constants_match_direct_sums() {
        for n in (4..=16).step_by(2) {
            let c = hs_constants(n, 0.9).unwrap();
            let (x, y) = c.direct_sums();
            assert!(((x - c.x) / c.x).abs() <= 1e-10);
            assert!(((y - c.y) / c.y).abs() <= 1e-10);
            assert!(c.x >= c.y);
            assert!((c.x + c.y - 0.9 * (n * n) as f64 / 2.0).abs() < 1e-12 * c.x);
        }
    }

    #[test]
    fn jastrow_values() {
        let one = Complex64::new(1.0, 0.0);
        assert!((jastrow_amplitude(4, &[1, 3]).unwrap() - one).norm() < 1e-15);
        assert!((jastrow_amplitude(4, &[1, 2]).unwrap() - one * -0.5).norm() < 1e-15);
        assert!((jastrow_amplitude(4, &[1, 2, 3, 4]).unwrap() - one / 16.0).norm() < 1e-15);
        assert_eq!(jastrow_amplitude(4, &[]).unwrap(), one);
        assert!(jastrow_amplitude(4, &[2, 2]).is_err());
        assert!(jastrow_amplitude(4, &[0, 2]).is_err());
        assert!(jastrow_amplitude(5, &[1, 2]).is_err());
        assert_eq!(jastrow_value(4, &[2, 2]).norm(), 0.0);
    }

    #[test]
    fn energy_ladder_identities() {
        for n in (4..=12).step_by(2) {
            let j0 = 1.7;
            let c = hs_constants(n, j0).unwrap();
            let s = c.x + c.y;
            assert_eq!(hs_energy(n, 0, j0).unwrap(), 0.0);
            assert!((hs_energy(n, 1, j0).unwrap() + 2.0 * s).abs() < 1e-12 * s);
            assert!((hs_energy(n, 2, j0).unwrap() - (-4.0 * s + 8.0 * j0)).abs() < 1e-12 * s);
            assert!((hs_energy(n, 3, j0).unwrap() - (-6.0 * s + 32.0 * j0)).abs() < 1e-12 * s);
        }
        assert!((hs_energy(4, 1, 1.0).unwrap() + 16.0).abs() < 1e-14);
        assert!((hs_energy(4, 2, 1.0).unwrap() + 24.0).abs() < 1e-14);
        assert!(hs_energy(4, 5, 1.0).is_err());
    }

    #[test]
    fn summation_identities() {
        for n in (4..=16).step_by(2) {
            let (s, c, e) = alternating_sums(n);
            assert!(s.abs() <= 1e-12);
            assert!((c + 1.0).abs() <= 1e-12);
            assert!((e + 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn cot_identity() {
        assert!(cot_identity_defect(0.3, 0.9).abs() < 1e-12);
        assert!(cot_identity_defect(-1.2, 2.0).abs() < 1e-12);
    }
}
