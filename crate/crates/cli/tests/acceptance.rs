// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs every criterion, prints one line each, and fails
//! if any criterion misses its tolerance or runtime budget.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cavityq::device::{self, DeviceParams};
use cavityq::fit::linear_fit;
use cavityq::fock::linalg::{eye, CMatrix, C64};
use cavityq::fock::{coherent_state, Operator, StateVector};
use cavityq::gates;
use cavityq::hep::{otoc, trotter_convergence, QuditHamiltonian};
use cavityq::noise::{apply_photon_losses, cat_state, parity, photon_loss_channel, subspace_weight, CatAxis, CatBasis, CatParity};
use cavityq::pulse::{
    grape_objective, haar_random_state, optimize_snap_displacement, snap_pulse_infidelity,
    synthesize_snap_pulse_with, ControlModel, GrapeTarget, PulseSchedule, SequenceOptions, SnapPulseOptions,
};
use cavityq::qst::{detuning_sweep, simulate_transfer, QstConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn reference_device() -> DeviceParams {
    DeviceParams {
        omega_q: 7.0e9,
        omega_c: 5.0e9,
        g: 1.0e7,
        chi_prime: 0.0,
        alpha: -2.0e8,
        t1_fock0: 1.0,
        t1_min: 200e-6,
    }
}

fn criterion_1() -> Outcome {
    let p = reference_device();
    let start = Instant::now();
    let ncrit = device::critical_photon_number(&p).unwrap();
    let mf = device::max_fock(&p);
    let elapsed = start.elapsed();
    let pass = ncrit == 10_000.0 && mf.levels == 5_000 && elapsed < Duration::from_millis(1);
    outcome(pass, format!("n_crit = {ncrit}, max_fock = {}, {elapsed:?}", mf.levels))
}

fn criterion_2() -> Outcome {
    let n = 64;
    let a = coherent_state(c(2.0, 0.0), n).unwrap().value;
    let b = coherent_state(c(0.0, 2.0), n).unwrap().value;
    let overlap = a.inner(&b).unwrap().norm_sqr();
    // |<α|β>|² = exp(-|α - β|²) with |2 - 2i|² = 8.
    let oracle = (-8.0f64).exp();
    let err = (overlap - oracle).abs();
    outcome(err < 1e-8 && overlap < 0.1, format!("|<2|2i>|^2 = {overlap:.6e}, oracle {oracle:.6e}, error {err:.1e}"))
}

/// Column indices of `qubit ⊗ mode` with the mode restricted to `k` levels.
fn qubit_mode_cols(mode_dim: usize, k: usize) -> Vec<usize> {
    (0..2).flat_map(|q| (0..k).map(move |n| q * mode_dim + n)).collect()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut worst: f64 = 0.0;
    let mut worst_kind = "";
    for case in 0..200 {
        let kind = case % 10;
        let angle = |rng: &mut ChaCha8Rng| rng.random_range(-2.0 * PI..2.0 * PI);
        let (name, defect) = match kind {
            0 => {
                let n = rng.random_range(1..=32);
                let theta: Vec<f64> = (0..n).map(|_| angle(&mut rng)).collect();
                ("snap", gates::snap(&theta, n).unwrap().unitarity_defect())
            }
            1 => {
                let n = rng.random_range(8..=32);
                let alpha = c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
                let d = gates::displacement(alpha, n).unwrap().value;
                let k = gates::interior_levels(alpha.norm(), n);
                ("displacement", d.subspace_unitarity_defect(&(0..k).collect::<Vec<_>>()))
            }
            2 => {
                let n = rng.random_range(1..=16);
                let level = rng.random_range(0..n);
                let (t, ph) = (angle(&mut rng), angle(&mut rng));
                ("cond_rotation", gates::cond_rotation(level, t, ph, n).unwrap().unitarity_defect())
            }
            3 => {
                let (t, ph) = (angle(&mut rng), angle(&mut rng));
                ("qubit_rotation", gates::qubit_rotation(t, ph).unwrap().unitarity_defect())
            }
            4 => {
                let n = rng.random_range(2..=5);
                ("controlled_increment", gates::controlled_increment(n).unwrap().unitarity_defect())
            }
            5 => {
                let n = rng.random_range(2..=32);
                let m = rng.random_range(0..n);
                let k = (m + rng.random_range(1..n)) % n;
                ("givens", gates::givens(m, k, angle(&mut rng), n).unwrap().unitarity_defect())
            }
            6 => {
                let n = rng.random_range(2..=32);
                let m = rng.random_range(0..n);
                let k = (m + rng.random_range(1..n)) % n;
                ("phase_swap", gates::phase_swap(m, k, n).unwrap().unitarity_defect())
            }
            7 => {
                let n = rng.random_range(2..=32);
                ("fourier", gates::fourier(n).unwrap().unitarity_defect())
            }
            8 => {
                let n = rng.random_range(8..=16);
                let beta = c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
                let e = gates::ecd(beta, n).unwrap().value;
                let k = gates::interior_levels(beta.norm() / 2.0, n);
                ("ecd", e.subspace_unitarity_defect(&qubit_mode_cols(n, k)))
            }
            _ => {
                let dims = [rng.random_range(2..=4), rng.random_range(2..=8)];
                let shape = cavityq::fock::HilbertShape::new(dims.to_vec()).unwrap();
                let k = rng.random_range(0..2);
                let theta: Vec<f64> = (0..dims[k]).map(|_| angle(&mut rng)).collect();
                ("multiqudit_snap", gates::multiqudit_snap(k, &theta, &shape).unwrap().unitarity_defect())
            }
        };
        if defect > worst {
            worst = defect;
            worst_kind = name;
        }
    }
    outcome(worst < 1e-10, format!("200 cases, worst defect {worst:.1e} ({worst_kind})"))
}

fn criterion_4() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for seed in 1..=5u64 {
        let target = haar_random_state(8, 1000 + seed).unwrap();
        let res = optimize_snap_displacement(&target, &SequenceOptions::default(), seed).unwrap();
        let iterations = res.trace.last().map_or(0, |r| r.iteration);
        pass &= res.infidelity < 1e-3 && iterations <= 2000;
        details.push(format!("{:.1e}@{iterations}", res.infidelity));
    }
    outcome(pass, format!("infidelity@iterations per seed: {}", details.join(", ")))
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    // Exponential of a random anti-Hermitian matrix.
    let mut h = Array2::<C64>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let z = c(rng.random_range(-1.0..1.0), if i == j { 0.0 } else { rng.random_range(-1.0..1.0) });
            h[[i, j]] = z;
            h[[j, i]] = z.conj();
        }
    }
    let op = Operator::new(cavityq::fock::HilbertShape::single(n).unwrap(), h).unwrap();
    op.expm(1.0).unwrap().into_matrix()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for inst in 0..50 {
        let mode_dim = rng.random_range(2..=6);
        let chi = rng.random_range(0.5e6..3e6) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let model = ControlModel::dispersive(chi, rng.random_range(-2e4..2e4), mode_dim).unwrap();
        let shape = model.shape().clone();
        let n = shape.total();
        let segments = rng.random_range(2..=6);
        let dt = rng.random_range(5e-9..3e-8);
        let carriers = [rng.random_range(-2e6..2e6), rng.random_range(-2e6..2e6)];
        let mut sched = PulseSchedule::zeros(dt, segments, &carriers).unwrap();
        for ch in &mut sched.controls {
            for a in &mut ch.amps {
                *a = c(rng.random_range(-3e6..3e6), rng.random_range(-3e6..3e6));
            }
        }
        let target = if inst % 2 == 0 {
            let k = rng.random_range(1..=n);
            let mut cols: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = rng.random_range(i..n);
                cols.swap(i, j);
            }
            cols.truncate(k);
            cols.sort_unstable();
            let u = Operator::new(shape.clone(), random_unitary(n, &mut rng)).unwrap();
            GrapeTarget::Unitary { target: u, subspace: Some(cols) }
        } else {
            let mut rand_state = || {
                let v: Vec<C64> = (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
                StateVector::from_vec(shape.clone(), v).unwrap().normalized().unwrap()
            };
            GrapeTarget::State { initial: rand_state(), target: rand_state() }
        };
        let levels: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < 0.3).collect();
        let weight = rng.random_range(0.0..2.0);
        let eval = grape_objective(&model, &target, &sched, &levels, weight).unwrap();
        // Step of 1e-5 in the optimiser's coordinates 2π dt u.
        let h = 1e-5 / (2.0 * PI * dt);
        for k in 0..2 {
            for j in 0..segments {
                for part in 0..2 {
                    let bump = |s: f64| {
                        let mut p = sched.clone();
                        p.controls[k].amps[j] += if part == 0 { c(s, 0.0) } else { c(0.0, s) };
                        grape_objective(&model, &target, &p, &levels, weight).unwrap().objective
                    };
                    let fd = (bump(h) - bump(-h)) / (2.0 * h);
                    let g = eval.gradient[k][j];
                    let an = if part == 0 { g.re } else { g.im };
                    let scale = eval.gradient.iter().flatten().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
                    worst = worst.max((an - fd).abs() / scale.max(1e-300));
                    checked += 1;
                }
            }
        }
    }
    outcome(worst < 1e-6, format!("50 instances, {checked} partials, worst relative error {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let chi = -1.0e6;
    let model = ControlModel::dispersive(chi, 0.0, 6).unwrap();
    let tmin = device::snap_min_gate_time_for_chi(chi).unwrap();
    let theta = [0.0, PI, 0.5, -1.2, 2.0, 0.3];
    let opts = SnapPulseOptions { enforce_bound: false, ..SnapPulseOptions::default() };
    let factors = [4.0, 2.0, 1.0, 0.5];
    let inf: Vec<f64> = factors
        .iter()
        .map(|f| {
            let s = synthesize_snap_pulse_with(&model, &theta, f * tmin, &opts).unwrap();
            snap_pulse_infidelity(&model, &s, &theta).unwrap()
        })
        .collect();
    let monotone = inf.windows(2).all(|w| w[1] > w[0]);
    let list: Vec<String> = factors.iter().zip(&inf).map(|(f, i)| format!("{f}x:{i:.1e}")).collect();
    outcome(inf[0] < 1e-2 && monotone, list.join(", "))
}

fn criterion_7() -> Outcome {
    let n_dim = 6;
    let t1 = 1.0;
    let dt = 2e-4;
    let steps = 1000;
    let channel = photon_loss_channel(t1, dt, n_dim).unwrap();
    let rate = |n: usize| {
        let mut rho = Array2::<C64>::zeros((n_dim, n_dim));
        rho[[n, n]] = c(1.0, 0.0);
        let series = channel.evolve(&rho, steps).unwrap();
        let ts: Vec<f64> = (0..series.len()).map(|k| k as f64 * dt).collect();
        let ln_p: Vec<f64> = series.iter().map(|r| r[[n, n]].re.ln()).collect();
        -linear_fit(&ts, &ln_p).unwrap().slope
    };
    let g1 = rate(1);
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [2usize, 3, 5] {
        let ratio = rate(n) / g1;
        pass &= (ratio / n as f64 - 1.0).abs() < 0.02;
        parts.push(format!("n={n}: {ratio:.4}"));
    }
    outcome(pass, format!("rate ratios {}", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let alpha = c(2.0, 0.0);
    let n = 40;
    let cat = cat_state(alpha, CatParity::Even, CatAxis::Real, n).unwrap().value;
    let one = apply_photon_losses(&cat, 0, 1).unwrap();
    let dp = parity(&one) - parity(&cat);
    let four = apply_photon_losses(&cat, 0, 4).unwrap();
    let basis = CatBasis::new(alpha, n).unwrap().value;
    let w = subspace_weight(&four, &[basis.plus_real, basis.plus_imag]).unwrap();
    let fid = cavityq::fock::fidelity(&four, &cat).unwrap();
    outcome(
        dp.abs() > 1.9 && w > 1.0 - 1e-6,
        format!("delta parity {dp:.6}, four-loss code weight 1 - {:.1e}, overlap with input {fid:.9}", 1.0 - w),
    )
}

fn criterion_9() -> Outcome {
    let kappa = 1e6;
    let cfg = QstConfig::matched_sech(kappa, 40.0);
    let eta = simulate_transfer(&cfg).unwrap().eta;
    let deltas: Vec<f64> = (-10..=10).map(|k| k as f64 * 0.005 * kappa).collect();
    let sweep = detuning_sweep(&cfg, &deltas).unwrap();
    let fit = sweep.fit.unwrap();
    outcome(
        eta >= 0.999 && fit.r_squared >= 0.99,
        format!("eta = {eta:.9}, R^2 = {:.6} (slope {:.3e} per Hz)", fit.r_squared, fit.slope),
    )
}

/// Dense OTOC with its own DFT and a Taylor exponential.
fn brute_force_otoc(w: &CMatrix, v: &CMatrix, pot: &[f64], kin: &[f64], t: f64) -> C64 {
    let n = pot.len();
    let mut h = Array2::<C64>::zeros((n, n));
    for a in 0..n {
        for b in 0..n {
            let mut acc = c(0.0, 0.0);
            for (j, kj) in kin.iter().enumerate() {
                acc += C64::from_polar(kj / n as f64, 2.0 * PI * (a as f64 - b as f64) * j as f64 / n as f64);
            }
            h[[a, b]] = acc * 2.0 * PI;
        }
        h[[a, a]] += 2.0 * PI * pot[a];
    }
    let norm: f64 = h.iter().map(|z| z.norm()).sum();
    let squarings = (norm * t.abs() / 0.05).log2().ceil().max(0.0) as i32;
    let tau = t / 2f64.powi(squarings);
    let a = h.mapv(|z| c(0.0, -1.0) * z * tau);
    let mut u = eye(n);
    let mut term = eye(n);
    for k in 1..25 {
        term = term.dot(&a) / c(k as f64, 0.0);
        u = u + &term;
    }
    for _ in 0..squarings {
        u = u.dot(&u);
    }
    let dag = |m: &CMatrix| m.t().mapv(|z| z.conj());
    let wt = dag(&u).dot(w).dot(&u);
    dag(&wt).dot(&dag(v)).dot(&wt).dot(v)[[0, 0]]
}

fn criterion_10() -> Outcome {
    let pot = vec![0.8, -0.3, 0.5, 0.1, -0.9, 0.4, -0.2, 0.7];
    let kin = vec![0.2, 0.6, -0.5, 0.9, -0.1, 0.3, -0.7, 0.4];
    let h = QuditHamiltonian::new(pot.clone(), kin.clone()).unwrap();
    let t_total = 5.0 / h.spectral_norm().unwrap();
    let psi = StateVector::fock(8, 0).unwrap();
    let conv = trotter_convergence(&h, t_total, &[50, 100, 200, 400, 800], &psi).unwrap();
    let order = conv.fit.slope;

    let w = gates::displacement(c(0.3, 0.1), 8).unwrap().value;
    let v = gates::givens(0, 1, 0.7, 8).unwrap();
    let mut worst: f64 = 0.0;
    for k in 0..=10 {
        let t = k as f64 * 0.1;
        let got = otoc(&w, &v, &h, t, None).unwrap();
        let want = brute_force_otoc(w.matrix(), v.matrix(), &pot, &kin, t);
        worst = worst.max((got - want).norm());
    }
    outcome(
        (0.9..=1.1).contains(&order) && worst < 1e-9,
        format!("global error order {order:.4}, OTOC max deviation {worst:.1e}"),
    )
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn criterion_11() -> Outcome {
    let experiments: [(&str, &str); 7] = [
        ("run", "circuit_phase_swap.json"),
        ("qst", "qst_matched.json"),
        ("grape", "grape_x.json"),
        ("code", "code_cat.json"),
        ("trotter", "trotter.json"),
        ("otoc", "otoc.json"),
        ("device", "device_reference.json"),
    ];
    let mut mismatches = Vec::new();
    let mut files = 0;
    for (cmd, cfg) in experiments {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        for d in &dirs {
            let status = Command::new(env!("CARGO_BIN_EXE_cavityq"))
                .args([cmd, data(cfg).to_str().unwrap(), "--seed", "20260", "--threads", "1"])
                .args(["--out", d.path().to_str().unwrap()])
                .env_remove("CAVITYQ_DIM_CAP")
                .output()
                .unwrap()
                .status;
            if !status.success() {
                mismatches.push(format!("{cmd} exited with {status}"));
            }
        }
        let mut names: Vec<_> = std::fs::read_dir(dirs[0].path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        for name in names {
            files += 1;
            let a = std::fs::read(dirs[0].path().join(&name)).unwrap();
            let b = std::fs::read(dirs[1].path().join(&name)).ok();
            if b.as_deref() != Some(&a[..]) {
                mismatches.push(format!("{cmd}/{}", name.to_string_lossy()));
            }
        }
    }
    let pass = mismatches.is_empty() && files >= 7;
    outcome(pass, if pass { format!("{files} output files byte-identical") } else { mismatches.join("; ") })
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("device estimators", Duration::from_secs(1), criterion_1),
        ("coherent-state overlap", Duration::from_secs(1), criterion_2),
        ("gate unitarity", Duration::from_secs(30), criterion_3),
        ("SNAP+displacement universality", Duration::from_secs(600), criterion_4),
        ("GRAPE gradient check", Duration::from_secs(120), criterion_5),
        ("SNAP pulse bandwidth law", Duration::from_secs(300), criterion_6),
        ("photon-loss scaling", Duration::from_secs(120), criterion_7),
        ("cat-code parity", Duration::from_secs(60), criterion_8),
        ("state transfer", Duration::from_secs(60), criterion_9),
        ("Trotter order and OTOC", Duration::from_secs(120), criterion_10),
        ("CLI determinism", Duration::from_secs(300), criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<32} {}  [{:.2?}] {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            out.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
