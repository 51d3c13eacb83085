//! Fixed-magnetization bases of a periodic spin-1/2 ring and the elementary
//! spin-operator actions on them.
//!
//! Configurations are bit masks: site `m` (1-based) is bit `m - 1` and a set
//! bit is a down spin, so the popcount is the down-spin count `r`. Within a
//! sector masks are kept in ascending numeric order, which is colexicographic
//! order of the down-site sets; ranks are therefore given by the
//! combinatorial number system and need no lookup table.

use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest supported chain length (masks are `u32`, C(24,12) is enumerable).
pub const MAX_SITES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    mask: u32,
    n_sites: usize,
}

impl SpinConfig {
    pub fn new(mask: u32, n_sites: usize) -> Result<Self> {
        check_n_sites(n_sites)?;
        if n_sites < 32 && mask >> n_sites != 0 {
            return Err(Error::domain(format!(
                "mask {mask:#b} has bits beyond site {n_sites}"
            )));
        }
        Ok(SpinConfig { mask, n_sites })
    }

    /// Configuration with down spins on the given 1-based sites.
    pub fn from_down_sites(n_sites: usize, sites: &[usize]) -> Result<Self> {
        check_n_sites(n_sites)?;
        let mut mask = 0u32;
        for &s in sites {
            if s == 0 || s > n_sites {
                return Err(Error::domain(format!("site {s} outside 1..={n_sites}")));
            }
            let bit = 1u32 << (s - 1);
            if mask & bit != 0 {
                return Err(Error::domain(format!("site {s} listed twice")));
            }
            mask |= bit;
        }
        Ok(SpinConfig { mask, n_sites })
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn n_sites(self) -> usize {
        self.n_sites
    }

    pub fn n_down(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_down(self, site: usize) -> bool {
        self.mask >> (site - 1) & 1 == 1
    }

    /// Ascending 1-based positions of the down spins.
    pub fn down_sites(self) -> Vec<usize> {
        down_sites(self.mask)
    }
}

/// Ascending 1-based positions of the set bits of `mask`.
pub fn down_sites(mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

fn check_n_sites(n_sites: usize) -> Result<()> {
    if !(2..=MAX_SITES).contains(&n_sites) {
        return Err(Error::domain(format!(
            "chain length {n_sites} outside 2..={MAX_SITES}"
        )));
    }
    Ok(())
}

/// Binomial coefficient for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All configurations of `n_sites` spins with `n_down` down spins.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBasis {
    n_sites: usize,
    n_down: usize,
    configs: Vec<u32>,
    // pascal[n][k] = C(n, k) for n <= n_sites, k <= n_down + 1
    pascal: Vec<Vec<usize>>,
}

/// Enumerates the sector with `n_down` down spins, masks ascending.
pub fn enumerate_sector(n_sites: usize, n_down: usize) -> Result<SectorBasis> {
    check_n_sites(n_sites)?;
    if n_down > n_sites {
        return Err(Error::domain(format!(
            "down-spin count {n_down} exceeds chain length {n_sites}"
        )));
    }
    let dim = binomial(n_sites, n_down);
    let mut configs = Vec::with_capacity(dim);
    if n_down == 0 {
        configs.push(0);
    } else {
        // Gosper's hack: next larger word with the same popcount.
        let limit = 1u64 << n_sites;
        let mut v: u64 = (1u64 << n_down) - 1;
        while v < limit {
            configs.push(v as u32);
            let t = v | (v - 1);
            v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
        }
    }
    debug_assert_eq!(configs.len(), dim);
    let pascal = (0..=n_sites)
        .map(|n| (0..=n_down + 1).map(|k| binomial(n, k)).collect())
        .collect();
    Ok(SectorBasis {
        n_sites,
        n_down,
        configs,
        pascal,
    })
}

impl SectorBasis {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_down(&self) -> usize {
        self.n_down
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn configs(&self) -> &[u32] {
        &self.configs
    }

    pub fn config(&self, index: usize) -> SpinConfig {
        SpinConfig {
            mask: self.configs[index],
            n_sites: self.n_sites,
        }
    }

    /// Magnetization S_z = N/2 - r.
    pub fn s_z(&self) -> f64 {
        self.n_sites as f64 / 2.0 - self.n_down as f64
    }

    /// Ordinal of `mask` within the sector.
    pub fn rank(&self, mask: u32) -> Result<usize> {
        if mask.count_ones() as usize != self.n_down
            || (self.n_sites < 32 && mask >> self.n_sites != 0)
        {
            return Err(Error::NotInSector {
                mask: mask as u64,
                n_sites: self.n_sites,
                n_down: self.n_down,
            });
        }
        Ok(self.rank_unchecked(mask))
    }

    /// Colex rank of a mask already known to belong to the sector.
    #[inline]
    pub fn rank_unchecked(&self, mask: u32) -> usize {
        let mut rank = 0;
        let mut m = mask;
        let mut i = 1;
        while m != 0 {
            let pos = m.trailing_zeros() as usize;
            rank += self.pascal[pos][i];
            m &= m - 1;
            i += 1;
        }
        rank
    }

    pub fn rank_config(&self, config: SpinConfig) -> Result<usize> {
        if config.n_sites != self.n_sites {
            return Err(Error::domain(format!(
                "configuration has {} sites, sector has {}",
                config.n_sites, self.n_sites
            )));
        }
        self.rank(config.mask)
    }

    pub fn unrank(&self, index: usize) -> Option<SpinConfig> {
        self.configs.get(index).map(|&mask| SpinConfig {
            mask,
            n_sites: self.n_sites,
        })
    }
}

/// Complex amplitudes over one sector, in the sector's canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    sector: Arc<SectorBasis>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(sector: Arc<SectorBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != sector.dim() {
            return Err(Error::domain(format!(
                "{} amplitudes for a sector of dimension {}",
                amplitudes.len(),
                sector.dim()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::domain("non-finite amplitude"));
        }
        Ok(StateVector { sector, amplitudes })
    }

    pub fn zeros(sector: Arc<SectorBasis>) -> Self {
        let amplitudes = vec![Complex64::new(0.0, 0.0); sector.dim()];
        StateVector { sector, amplitudes }
    }

    /// Unit amplitude on a single configuration.
    pub fn basis_vector(sector: Arc<SectorBasis>, index: usize) -> Self {
        let mut v = Self::zeros(sector);
        v.amplitudes[index] = Complex64::new(1.0, 0.0);
        v
    }

    /// The all-up state |↑…↑⟩ with coefficient 1.
    pub fn vacuum(n_sites: usize) -> Result<Self> {
        let sector = Arc::new(enumerate_sector(n_sites, 0)?);
        Ok(Self::basis_vector(sector, 0))
    }

    pub fn sector(&self) -> &Arc<SectorBasis> {
        &self.sector
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn n_sites(&self) -> usize {
        self.sector.n_sites()
    }

    pub fn n_down(&self) -> usize {
        self.sector.n_down()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.same_sector(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector {
            sector: self.sector.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// `self - other`.
    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        self.same_sector(other)?;
        Ok(StateVector {
            sector: self.sector.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.same_sector(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn same_sector(&self, other: &StateVector) -> Result<()> {
        if self.sector.n_sites() != other.sector.n_sites()
            || self.sector.n_down() != other.sector.n_down()
        {
            return Err(Error::domain(format!(
                "sector mismatch: (N={}, r={}) vs (N={}, r={})",
                self.sector.n_sites(),
                self.sector.n_down(),
                other.sector.n_sites(),
                other.sector.n_down()
            )));
        }
        Ok(())
    }
}

/// S_j^- on a configuration: flips an up spin at `site` down (coefficient 1)
/// or annihilates a down spin.
pub fn apply_site_lowering(config: SpinConfig, site: usize) -> Result<Option<SpinConfig>> {
    check_site(config.n_sites, site)?;
    let bit = 1u32 << (site - 1);
    if config.mask & bit != 0 {
        return Ok(None);
    }
    Ok(Some(SpinConfig {
        mask: config.mask | bit,
        n_sites: config.n_sites,
    }))
}

/// S_j^+ on a configuration: the mirror of [`apply_site_lowering`].
pub fn apply_site_raising(config: SpinConfig, site: usize) -> Result<Option<SpinConfig>> {
    check_site(config.n_sites, site)?;
    let bit = 1u32 << (site - 1);
    if config.mask & bit == 0 {
        return Ok(None);
    }
    Ok(Some(SpinConfig {
        mask: config.mask & !bit,
        n_sites: config.n_sites,
    }))
}

fn check_site(n_sites: usize, site: usize) -> Result<()> {
    if site == 0 || site > n_sites {
        return Err(Error::domain(format!("site {site} outside 1..={n_sites}")));
    }
    Ok(())
}

fn check_pair(n_sites: usize, j: usize, k: usize) -> Result<()> {
    check_site(n_sites, j)?;
    check_site(n_sites, k)?;
    if j == k {
        return Err(Error::domain(format!("cross product needs distinct sites, got {j} twice")));
    }
    Ok(())
}

/// −i(S_j × S_k)^- = S_j^- S_k^z − S_k^- S_j^z, mapping sector r to r + 1.
///
/// Two-site actions: |↑↑⟩ → ½(|↓↑⟩ − |↑↓⟩), |↓↑⟩ → ½|↓↓⟩, |↑↓⟩ → −½|↓↓⟩,
/// |↓↓⟩ → 0.
pub fn apply_cross_minus(state: &StateVector, j: usize, k: usize) -> Result<StateVector> {
    let n = state.n_sites();
    check_pair(n, j, k)?;
    let r = state.n_down();
    if r == n {
        return Err(Error::domain("no sector above the all-down configuration"));
    }
    let target = Arc::new(enumerate_sector(n, r + 1)?);
    let mut out = StateVector::zeros(target.clone());
    let (bj, bk) = (1u32 << (j - 1), 1u32 << (k - 1));
    for (&mask, &a) in state.sector.configs().iter().zip(&state.amplitudes) {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let half = a * 0.5;
        match (mask & bj != 0, mask & bk != 0) {
            (false, false) => {
                out.amplitudes[target.rank_unchecked(mask | bj)] += half;
                out.amplitudes[target.rank_unchecked(mask | bk)] -= half;
            }
            (true, false) => out.amplitudes[target.rank_unchecked(mask | bk)] += half,
            (false, true) => out.amplitudes[target.rank_unchecked(mask | bj)] -= half,
            (true, true) => {}
        }
    }
    Ok(out)
}

/// i(S_j × S_k)^+ = S_j^+ S_k^z − S_k^+ S_j^z, mapping sector r to r − 1.
///
/// Two-site actions: |↑↓⟩ → −½|↑↑⟩, |↓↑⟩ → ½|↑↑⟩, |↓↓⟩ → ½(|↓↑⟩ − |↑↓⟩),
/// |↑↑⟩ → 0.
pub fn apply_cross_plus(state: &StateVector, j: usize, k: usize) -> Result<StateVector> {
    let n = state.n_sites();
    check_pair(n, j, k)?;
    let r = state.n_down();
    if r == 0 {
        return Err(Error::domain("no sector below the all-up configuration"));
    }
    let target = Arc::new(enumerate_sector(n, r - 1)?);
    let mut out = StateVector::zeros(target.clone());
    let (bj, bk) = (1u32 << (j - 1), 1u32 << (k - 1));
    for (&mask, &a) in state.sector.configs().iter().zip(&state.amplitudes) {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let half = a * 0.5;
        match (mask & bj != 0, mask & bk != 0) {
            (false, true) => out.amplitudes[target.rank_unchecked(mask & !bk)] -= half,
            (true, false) => out.amplitudes[target.rank_unchecked(mask & !bj)] += half,
            (true, true) => {
                // |↓↓⟩ → ½|↓↑⟩ − ½|↑↓⟩
                out.amplitudes[target.rank_unchecked(mask & !bk)] += half;
                out.amplitudes[target.rank_unchecked(mask & !bj)] -= half;
            }
            (false, false) => {}
        }
    }
    Ok(out)
}

/// Cyclic rotation of a mask by one site: site m moves to m + 1 (mod N).
#[inline]
pub fn rotate_mask(mask: u32, n_sites: usize) -> u32 {
    let full = if n_sites == 32 { u32::MAX } else { (1u32 << n_sites) - 1 };
    ((mask << 1) | (mask >> (n_sites - 1))) & full
}

/// Translation T by one site: (Tψ)(rot(c)) = ψ(c).
pub fn translate(state: &StateVector) -> StateVector {
    let sector = state.sector.clone();
    let n = sector.n_sites();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); sector.dim()];
    for (&mask, &a) in sector.configs().iter().zip(&state.amplitudes) {
        amplitudes[sector.rank_unchecked(rotate_mask(mask, n))] = a;
    }
    StateVector { sector, amplitudes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn sector_4_2_masks() {
        let s = enumerate_sector(4, 2).unwrap();
        assert_eq!(s.configs(), &[3, 5, 6, 9, 10, 12]);
        assert_eq!(s.dim(), 6);
        assert_eq!(s.rank(3).unwrap(), 0);
        assert_eq!(s.rank(5).unwrap(), 1);
        assert_eq!(s.rank(12).unwrap(), 5);
    }

    #[test]
    fn vacuum_and_half_filling_dims() {
        assert_eq!(enumerate_sector(7, 0).unwrap().configs(), &[0]);
        assert_eq!(enumerate_sector(6, 3).unwrap().dim(), 20);
        assert_eq!(enumerate_sector(5, 5).unwrap().configs(), &[31]);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(enumerate_sector(1, 0).is_err());
        assert!(enumerate_sector(25, 1).is_err());
        assert!(enumerate_sector(4, 5).is_err());
        let s = enumerate_sector(4, 2).unwrap();
        assert!(matches!(s.rank(7), Err(Error::NotInSector { .. })));
        assert!(s.rank(1 << 5 | 1).is_err());
    }

    #[test]
    fn dims_sum_to_hilbert_space() {
        for n in 2..=12 {
            let total: usize = (0..=n).map(|r| enumerate_sector(n, r).unwrap().dim()).sum();
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn rank_is_inverse_of_enumeration() {
        for n in 2..=12 {
            for r in 0..=n {
                let s = enumerate_sector(n, r).unwrap();
                assert!(s.configs().windows(2).all(|w| w[0] < w[1]));
                for (i, &m) in s.configs().iter().enumerate() {
                    assert_eq!(s.rank(m).unwrap(), i);
                    assert_eq!(s.unrank(i).unwrap().mask(), m);
                }
            }
        }
    }

    #[test]
    fn site_lowering() {
        let up = SpinConfig::new(0, 4).unwrap();
        assert_eq!(apply_site_lowering(up, 2).unwrap().unwrap().mask(), 2);
        let two = SpinConfig::new(2, 4).unwrap();
        assert_eq!(apply_site_lowering(two, 2).unwrap(), None);
        let five = SpinConfig::new(5, 4).unwrap();
        assert_eq!(apply_site_lowering(five, 2).unwrap().unwrap().mask(), 7);
        assert!(apply_site_lowering(five, 5).is_err());
        assert!(apply_site_lowering(five, 0).is_err());
    }

    fn two_site(mask: u32) -> StateVector {
        let s = Arc::new(enumerate_sector(2, mask.count_ones() as usize).unwrap());
        let i = s.rank(mask).unwrap();
        StateVector::basis_vector(s, i)
    }

    // In the two-site kets below the first arrow is site j = 1 (bit 0).
    #[test]
    fn cross_minus_cases() {
        // |↑↑⟩ → ½(|↓↑⟩ − |↑↓⟩); sector 1 masks are [1 (↓↑), 2 (↑↓)]
        let out = apply_cross_minus(&two_site(0), 1, 2).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.5), c(-0.5)]);
        let out = apply_cross_minus(&two_site(1), 1, 2).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.5)]);
        let out = apply_cross_minus(&two_site(2), 1, 2).unwrap();
        assert_eq!(out.amplitudes(), &[c(-0.5)]);
        assert!(apply_cross_minus(&two_site(3), 1, 2).is_err());
        assert!(apply_cross_minus(&two_site(0), 1, 1).is_err());
    }

    #[test]
    fn cross_minus_annihilates_both_down_pair() {
        let s = Arc::new(enumerate_sector(3, 2).unwrap());
        let i = s.rank(0b011).unwrap();
        let out = apply_cross_minus(&StateVector::basis_vector(s, i), 1, 2).unwrap();
        assert!(out.amplitudes().iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn cross_plus_cases() {
        let out = apply_cross_plus(&two_site(2), 1, 2).unwrap();
        assert_eq!(out.amplitudes(), &[c(-0.5)]);
        let out = apply_cross_plus(&two_site(1), 1, 2).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.5)]);
        let out = apply_cross_plus(&two_site(3), 1, 2).unwrap();
        assert_eq!(out.amplitudes(), &[c(0.5), c(-0.5)]);
        assert!(apply_cross_plus(&two_site(0), 1, 2).is_err());
    }

    #[test]
    fn cross_plus_annihilates_both_up_pair() {
        let s = Arc::new(enumerate_sector(3, 1).unwrap());
        let i = s.rank(0b100).unwrap();
        let out = apply_cross_plus(&StateVector::basis_vector(s, i), 1, 2).unwrap();
        assert!(out.amplitudes().iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn cross_minus_is_adjoint_of_cross_plus() {
        for n in 2..=6 {
            for r in 0..n {
                let lo = Arc::new(enumerate_sector(n, r).unwrap());
                let hi = Arc::new(enumerate_sector(n, r + 1).unwrap());
                for j in 1..=n {
                    for k in 1..=n {
                        if j == k {
                            continue;
                        }
                        // ⟨b| M⁻ |a⟩ = conj ⟨a| M⁺ |b⟩
                        let minus: Vec<_> = (0..lo.dim())
                            .map(|a| {
                                apply_cross_minus(&StateVector::basis_vector(lo.clone(), a), j, k)
                                    .unwrap()
                            })
                            .collect();
                        for b in 0..hi.dim() {
                            let plus =
                                apply_cross_plus(&StateVector::basis_vector(hi.clone(), b), j, k)
                                    .unwrap();
                            for (a, col) in minus.iter().enumerate() {
                                let m = col.amplitudes()[b];
                                let p = plus.amplitudes()[a].conj();
                                assert_eq!(m, p, "n={n} r={r} j={j} k={k}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn translate_vacuum_and_plane_wave() {
        let vac = StateVector::vacuum(5).unwrap();
        assert_eq!(translate(&vac), vac);

        let s = Arc::new(enumerate_sector(4, 1).unwrap());
        // masks [1,2,4,8] are sites 1..4; a(m) = (-1)^m
        let v = StateVector::new(s, vec![c(-1.0), c(1.0), c(-1.0), c(1.0)]).unwrap();
        assert_eq!(translate(&v), v.scaled(c(-1.0)));
    }

    #[test]
    fn state_vector_rejects_bad_input() {
        let s = Arc::new(enumerate_sector(4, 1).unwrap());
        assert!(StateVector::new(s.clone(), vec![c(1.0); 3]).is_err());
        assert!(StateVector::new(s, vec![c(f64::NAN); 4]).is_err());
    }

    proptest! {
        #[test]
        fn translate_n_times_is_identity(n in 2usize..=10, r_frac in 0.0f64..1.0, seed in any::<u64>()) {
            let r = ((n as f64) * r_frac) as usize;
            let s = Arc::new(enumerate_sector(n, r).unwrap());
            let amps: Vec<Complex64> = (0..s.dim())
                .map(|i| {
                    let x = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) >> 11) as f64;
                    Complex64::new((x * 1e-9).sin(), (x * 3e-9).cos())
                })
                .collect();
            let v = StateVector::new(s, amps).unwrap();
            let mut w = v.clone();
            for _ in 0..n {
                w = translate(&w);
            }
            prop_assert_eq!(w, v);
        }

        #[test]
        fn rank_matches_position(n in 2usize..=16, r_frac in 0.0f64..1.0, pick in any::<usize>()) {
            let r = ((n as f64) * r_frac) as usize;
            let s = enumerate_sector(n, r).unwrap();
            let i = pick % s.dim();
            let cfg = s.unrank(i).unwrap();
            prop_assert_eq!(cfg.n_down(), r);
            prop_assert_eq!(s.rank_config(cfg).unwrap(), i);
        }
    }
}
