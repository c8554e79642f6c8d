// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Photon-loss and dephasing channels, Monte Carlo trajectories, and cat and
//! binomial code states.

mod channel;
mod codes;
mod trajectory;

pub use channel::{dephasing_channel, photon_loss_channel, NoiseChannel, FIRST_ORDER_GUARD};
pub use codes::{
    apply_photon_losses, binomial_codewords, cat_encode, cat_state, mean_photon_number, parity,
    subspace_weight, subsystem_parity, CatAxis, CatBasis, CatParity,
};
pub use trajectory::{apply_channel_trajectory, run_ensemble, Jump, StepRecord, Trajectory};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fock::linalg::{CMatrix, C64};
    use crate::fock::{self, HilbertShape, StateVector};

    fn pure(psi: &StateVector) -> CMatrix {
        let v = psi.amplitudes();
        ndarray::Array2::from_shape_fn((v.len(), v.len()), |(i, j)| v[i] * v[j].conj())
    }

    fn population(rho: &CMatrix, n: usize) -> f64 {
        rho[[n, n]].re
    }

    #[test]
    fn kraus_sets_are_complete() {
        for n in [2, 8, 30] {
            assert!(photon_loss_channel(1.0, 1e-5, n).unwrap().completeness_defect() < 1e-12);
            assert!(dephasing_channel(1.0, 1e-6, n).unwrap().completeness_defect() < 1e-12);
        }
    }

    #[test]
    fn oversized_steps_are_rejected() {
        assert!(matches!(photon_loss_channel(1.0, 0.01, 10), Err(Error::StepSize(_))));
        assert!(matches!(photon_loss_channel(1.0, 0.0, 10), Err(Error::StepSize(_))));
        assert!(matches!(dephasing_channel(1e3, 1e-3, 4), Err(Error::StepSize(_))));
    }

    #[test]
    fn vacuum_is_fixed() {
        let ch = photon_loss_channel(1.0, 1e-4, 6).unwrap();
        let rho = pure(&StateVector::fock(6, 0).unwrap());
        assert_eq!(ch.apply(&rho).unwrap(), rho);
    }

    #[test]
    fn single_photon_decays_exponentially() {
        let (t1, dt) = (1.0, 1e-4);
        let ch = photon_loss_channel(t1, dt, 4).unwrap();
        let rho0 = pure(&StateVector::fock(4, 1).unwrap());
        for (s, rho) in ch.evolve(&rho0, 10_000).unwrap().iter().enumerate() {
            let t = (s + 1) as f64 * dt;
            let mean: f64 = (0..4).map(|k| k as f64 * population(rho, k)).sum();
            let want = (-t / t1).exp();
            assert!((mean / want - 1.0).abs() < 0.01, "t={t}: {mean} vs {want}");
        }
    }

    #[test]
    fn fock_decay_slope_scales_with_n() {
        let (t1, dt, steps) = (1.0, 1e-5, 200);
        let ch = photon_loss_channel(t1, dt, 8).unwrap();
        let slope = |n: usize| {
            let rho0 = pure(&StateVector::fock(8, n).unwrap());
            let end = ch.evolve(&rho0, steps).unwrap().pop().unwrap();
            -population(&end, n).ln() / (steps as f64 * dt)
        };
        let base = slope(1);
        for n in [2, 3, 5] {
            let ratio = slope(n) / base;
            assert!((ratio / n as f64 - 1.0).abs() < 0.02, "n={n}: ratio {ratio}");
        }
    }

    #[test]
    fn zero_rate_trajectory_is_identity() {
        let ch = dephasing_channel(0.0, 1e-3, 5).unwrap();
        let psi = fock::coherent_state(C64::new(0.5, 0.5), 5).unwrap().value;
        let tr = apply_channel_trajectory(&ch, &psi, 100, 3).unwrap();
        assert!(tr.jumps.is_empty());
        assert!(tr.state.max_diff(&psi) < 1e-15);
        assert_eq!(tr.records.len(), 101);
    }

    #[test]
    fn trajectories_are_seed_deterministic() {
        let ch = photon_loss_channel(1.0, 2e-4, 6).unwrap();
        let psi = StateVector::fock(6, 5).unwrap();
        let a = apply_channel_trajectory(&ch, &psi, 300, 42).unwrap();
        let b = apply_channel_trajectory(&ch, &psi, 300, 42).unwrap();
        assert_eq!(a, b);
        let seeds: Vec<u64> = (0..16).collect();
        let ens = run_ensemble(&ch, &psi, 300, &seeds).unwrap();
        assert_eq!(ens[7], apply_channel_trajectory(&ch, &psi, 300, 7).unwrap());
    }

    #[test]
    fn single_step_jump_probability() {
        let (t1, dt) = (1.0, 5e-4);
        let ch = photon_loss_channel(t1, dt, 3).unwrap();
        let psi = StateVector::fock(3, 1).unwrap();
        let seeds: Vec<u64> = (0..100_000).collect();
        let jumps = run_ensemble(&ch, &psi, 1, &seeds)
            .unwrap()
            .iter()
            .filter(|t| !t.jumps.is_empty())
            .count() as f64;
        let p = dt / t1;
        let sigma = (seeds.len() as f64 * p * (1.0 - p)).sqrt();
        assert!((jumps - seeds.len() as f64 * p).abs() < 4.0 * sigma, "{jumps}");
    }

    #[test]
    fn ensemble_matches_kraus_populations() {
        let (t1, dt, steps) = (1.0, 2e-4, 250);
        let ch = photon_loss_channel(t1, dt, 4).unwrap();
        let psi = StateVector::fock(4, 3).unwrap();
        let rho = ch.evolve(&pure(&psi), steps).unwrap().pop().unwrap();
        let seeds: Vec<u64> = (0..10_000).collect();
        let ens = run_ensemble(&ch, &psi, steps, &seeds).unwrap();
        let m = seeds.len() as f64;
        for n in 0..4 {
            let freq = ens.iter().map(|t| t.state.amplitude(n).norm_sqr()).sum::<f64>() / m;
            let p = population(&rho, n);
            let sigma = (p * (1.0 - p) / m).sqrt().max(1e-12);
            assert!((freq - p).abs() < 3.0 * sigma + 1e-12, "n={n}: {freq} vs {p}");
        }
        let par = ens.iter().map(|t| t.records[steps].parity).sum::<f64>() / m;
        let want: f64 = (0..4).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 } * population(&rho, n)).sum();
        assert!((par - want).abs() < 3.0 * (1.0 / m).sqrt() * 2.0);
    }

    #[test]
    fn cat_limits() {
        let z = cat_state(C64::new(0.0, 0.0), CatParity::Even, CatAxis::Real, 8).unwrap();
        assert!(z.value.max_diff(&StateVector::fock(8, 0).unwrap()) < 1e-15);
        assert!(matches!(
            cat_state(C64::new(0.0, 0.0), CatParity::Odd, CatAxis::Real, 8),
            Err(Error::Degenerate(_))
        ));
        let n = 40;
        let even = cat_state(C64::new(2.0, 0.0), CatParity::Even, CatAxis::Real, n).unwrap();
        assert!(!even.warning());
        let probs = even.value.probabilities();
        let even_weight: f64 = probs.iter().step_by(2).sum();
        assert!((even_weight - 1.0).abs() < 1e-10);
        let odd = cat_state(C64::new(2.0, 0.0), CatParity::Odd, CatAxis::Imag, n).unwrap();
        assert!((parity(&odd.value) + 1.0).abs() < 1e-10);
        assert!(cat_state(C64::new(4.0, 0.0), CatParity::Even, CatAxis::Real, 12).unwrap().warning());
    }

    #[test]
    fn coherent_parity_closed_form() {
        let psi = fock::coherent_state(C64::new(1.0, 0.0), 40).unwrap().value;
        assert!((parity(&psi) - (-2.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn cat_basis_overlap() {
        let b = CatBasis::new(C64::new(2.0, 0.0), 48).unwrap().value;
        assert!(b.plus_real.inner(&b.minus_real).unwrap().norm() < 1e-15);
        // Four coherent overlaps of magnitude e^-4 with phases ±4.
        let want = 4.0 * (-4.0f64).exp() * 4.0f64.cos() / (2.0 + 2.0 * (-8.0f64).exp());
        let got = b.plus_real.inner(&b.plus_imag).unwrap();
        assert!((got - C64::new(want, 0.0)).norm() < 1e-12);
        let a = fock::coherent_state(C64::new(2.0, 0.0), 48).unwrap().value;
        let ia = fock::coherent_state(C64::new(0.0, 2.0), 48).unwrap().value;
        assert!((a.inner(&ia).unwrap().norm() - (-4.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn cat_encoding() {
        let alpha = C64::new(2.0, 0.0);
        let g = cat_encode(C64::new(1.0, 0.0), C64::new(0.0, 0.0), alpha, 40).unwrap().value;
        let c = cat_state(alpha, CatParity::Even, CatAxis::Real, 40).unwrap().value;
        assert!(g.max_diff(&c) < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mix = cat_encode(C64::new(s, 0.0), C64::new(0.0, s), alpha, 40).unwrap().value;
        assert!((mix.norm() - 1.0).abs() < 1e-10);
        assert!(matches!(
            cat_encode(C64::new(1.0, 0.0), C64::new(1.0, 0.0), alpha, 40),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn photon_loss_cycle() {
        let n = 48;
        let alpha = C64::new(2.0, 0.0);
        let basis = CatBasis::new(alpha, n).unwrap().value;
        assert!(apply_photon_losses(&basis.plus_real, 0, 0).unwrap().max_diff(&basis.plus_real) < 1e-15);
        let one = apply_photon_losses(&basis.plus_real, 0, 1).unwrap();
        assert!(fock::fidelity(&one, &basis.minus_real).unwrap() > 1.0 - 1e-10);
        assert!((parity(&one) + 1.0).abs() < 1e-10);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let logical = cat_encode(C64::new(s, 0.0), C64::new(0.0, s), alpha, n).unwrap().value;
        let four = apply_photon_losses(&logical, 0, 4).unwrap();
        let w = subspace_weight(&four, &[basis.plus_real.clone(), basis.plus_imag.clone()]).unwrap();
        assert!(w > 1.0 - 1e-6, "{w}");
        assert!((parity(&four) - 1.0).abs() < 1e-10);
        assert!(matches!(apply_photon_losses(&StateVector::fock(4, 1).unwrap(), 0, 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn binomial_code_detects_loss() {
        let (zero, one) = binomial_codewords(6).unwrap();
        assert_eq!(zero.inner(&one).unwrap(), C64::new(0.0, 0.0));
        assert!((mean_photon_number(&zero, 0).unwrap() - 2.0).abs() < 1e-14);
        assert!((mean_photon_number(&one, 0).unwrap() - 2.0).abs() < 1e-14);
        let a = fock::annihilation(6).unwrap();
        let (z1, o1) = (a.apply(&zero).unwrap(), a.apply(&one).unwrap());
        assert!(z1.inner(&o1).unwrap().norm() < 1e-15);
        assert!((z1.norm_sqr() - o1.norm_sqr()).abs() < 1e-14);
        assert!(matches!(binomial_codewords(4), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn embedded_channel_tracks_its_mode() {
        let shape = HilbertShape::new(vec![2, 5]).unwrap();
        let ch = photon_loss_channel(1.0, 1e-4, 5).unwrap().on_subsystem(1, &shape).unwrap();
        assert_eq!(ch.mode(), 1);
        assert!(ch.completeness_defect() < 1e-12);
        let psi = StateVector::basis(shape, &[1, 3]).unwrap();
        let tr = apply_channel_trajectory(&ch, &psi, 1, 0).unwrap();
        assert_eq!(tr.records[0].mean_n, 3.0);
        assert_eq!(tr.records[0].parity, -1.0);
    }
}
