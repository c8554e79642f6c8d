// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use ndarray::Array2;

use cavityq::fock::linalg::C64;
use cavityq::noise::{cat_encode, parity, photon_loss_channel, run_ensemble};

#[test]
fn trajectory_average_tracks_density_matrix() {
    let n = 20;
    let t1 = 1e-4;
    let dt = 5e-9;
    let steps = 4000;
    let psi = cat_encode(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.5, 0.0), n).unwrap().value;
    let ch = photon_loss_channel(t1, dt, n).unwrap();

    let seeds: Vec<u64> = (0..400).collect();
    let runs = run_ensemble(&ch, &psi, steps, &seeds).unwrap();
    let mean_parity: f64 = runs.iter().map(|r| parity(&r.state)).sum::<f64>() / runs.len() as f64;

    let a = psi.amplitudes();
    let rho0 = Array2::from_shape_fn((n, n), |(i, j)| a[i] * a[j].conj());
    let rho = ch.evolve(&rho0, steps).unwrap().pop().unwrap();
    let exact: f64 = (0..n).map(|k| if k % 2 == 0 { rho[[k, k]].re } else { -rho[[k, k]].re }).sum();

    // Single-shot parity is ±1, so the standard error is at most 1/√400.
    assert!((mean_parity - exact).abs() < 4.0 * 0.05, "{mean_parity} vs {exact}");
    // Damped even cat: populations of |±β> with β = α e^{-t/2T1}, and
    // coherences shrunk by exp(-2|α|²(1 - e^{-t/T1})).
    let a2 = 1.5f64.powi(2);
    let decay = (-(steps as f64) * dt / t1).exp();
    let coherence = (-2.0 * a2 * (1.0 - decay)).exp();
    let norm = 1.0 / (2.0 + 2.0 * (-2.0 * a2).exp());
    let analytic = norm * (2.0 * (-2.0 * a2 * decay).exp() + 2.0 * coherence);
    assert!((exact - analytic).abs() < 1e-3, "{exact} vs {analytic}");
}

#[test]
fn ensembles_depend_only_on_seeds() {
    let n = 8;
    let psi = cat_encode(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), n).unwrap().value;
    let ch = photon_loss_channel(1e-5, 1e-9, n).unwrap();
    let seeds = [3u64, 1, 4, 1, 5];
    let a = run_ensemble(&ch, &psi, 500, &seeds).unwrap();
    let b: Vec<_> = seeds
        .iter()
        .map(|&s| cavityq::noise::apply_channel_trajectory(&ch, &psi, 500, s).unwrap())
        .collect();
    assert_eq!(a, b);
    assert_eq!(a[1], a[3]);
}
