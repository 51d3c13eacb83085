use std::sync::Arc;

use spinshift::basis::{enumerate_sector, StateVector};
use spinshift::bethe::{bethe_energy, distinct_solutions, solve_all};
use spinshift::hsm::hs_energy;
use spinshift::models::{apply_hamiltonian_with, build_hamiltonian_with, HamiltonianSpec};
use spinshift::oracle::{eig_hermitian, eigen_residual, spectrum_match};
use spinshift::shift::{build_state_with, family_state, ladder_compose, AmplitudeFamily, LadderChain};
use spinshift::{Exec, Result};

#[test]
fn jastrow_ladder_from_vacuum_reaches_half_filling() -> Result<()> {
    let n = 8;
    let spec = HamiltonianSpec::hs(n, 1.0)?;
    let fams = (0..=n / 2)
        .map(|r| AmplitudeFamily::jastrow(n, r))
        .collect::<Result<Vec<_>>>()?;
    let top = ladder_compose(&LadderChain::raising(&fams)?, &StateVector::vacuum(n)?)?;
    assert_eq!(top.n_down(), n / 2);
    assert!(eigen_residual(&spec, &top, hs_energy(n, n / 2, 1.0)?)? <= 1e-9);
    let back = ladder_compose(&LadderChain::lowering(&fams)?, &top)?;
    assert!(back.max_abs_diff(&StateVector::vacuum(n)?)? <= 1e-12);
    Ok(())
}

#[test]
fn odd_chains_produce_bethe_eigenstates() -> Result<()> {
    for n in [5usize, 7] {
        let spec = HamiltonianSpec::xxx(n, 1.0)?;
        for r in 2..=3 {
            let sector = Arc::new(enumerate_sector(n, r)?);
            let eigs = eig_hermitian(&build_hamiltonian_with(&spec, &sector, Exec::Seq)?)?;
            let sets = distinct_solutions(&solve_all(n, r, Exec::default()));
            assert!(!sets.is_empty());
            for roots in sets {
                let e = bethe_energy(&roots, 1.0)?;
                let psi = family_state(&AmplitudeFamily::bethe(roots.clone())?)?;
                assert!(eigen_residual(&spec, &psi, e)? <= 1e-8, "N={n} {}", roots.quantum_numbers());
                assert!(spectrum_match(eigs.eigenvalues(), e, 1e-8)?.matched);
            }
        }
    }
    Ok(())
}

#[test]
fn sequential_and_parallel_paths_agree_bitwise() -> Result<()> {
    let spec = HamiltonianSpec::hs(10, 0.8)?;
    let sector = Arc::new(enumerate_sector(10, 4)?);
    let fam = AmplitudeFamily::jastrow(10, 4)?;
    let a = build_state_with(&fam, &sector, Exec::Seq)?;
    let b = build_state_with(&fam, &sector, Exec::default())?;
    assert_eq!(a, b);
    assert_eq!(
        apply_hamiltonian_with(&spec, &a, Exec::Seq)?,
        apply_hamiltonian_with(&spec, &a, Exec::default())?
    );
    assert_eq!(
        build_hamiltonian_with(&spec, &sector, Exec::Seq)?,
        build_hamiltonian_with(&spec, &sector, Exec::default())?
    );
    let seq: Vec<_> = solve_all(8, 2, Exec::Seq).into_iter().map(|s| format!("{:?}", s.outcome)).collect();
    let par: Vec<_> = solve_all(8, 2, Exec::default()).into_iter().map(|s| format!("{:?}", s.outcome)).collect();
    assert_eq!(seq, par);
    Ok(())
}
