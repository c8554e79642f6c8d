// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-level simulation of the driven dispersive qubit-cavity system and
//! gradient-based control optimisation.

mod grape;
mod model;
mod optimizer;
mod schedule;
mod sequence;
mod snap;

pub use grape::{grape_objective, grape_optimize, GrapeEvaluation, GrapeOptions, GrapeResult, GrapeTarget};
pub use model::{
    average_infidelity, gate_fidelity, schedule_propagator, segment_propagators, simulate_schedule, sub_block,
    ControlModel, DispersiveInfo,
};
pub use optimizer::{minimize, DescentOptions, DescentResult, Evaluation, TraceRow};
pub use schedule::{ControlChannel, PulseSchedule};
pub use sequence::{haar_random_state, optimize_snap_displacement, SequenceOptions, SequenceResult};
pub use snap::{snap_block, snap_pulse_infidelity, synthesize_snap_pulse, synthesize_snap_pulse_with, SnapPulseOptions};

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::error::Error;
    use crate::fock::linalg::C64;
    use crate::fock::{pauli, HilbertShape, Operator, StateVector};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn idle_schedule_is_identity() {
        let shape = HilbertShape::single(3).unwrap();
        let model = ControlModel::new(Operator::zeros(shape.clone()), vec![]).unwrap();
        let sched = PulseSchedule::new(1e-3, vec![]).unwrap();
        let psi = StateVector::fock(3, 2).unwrap();
        assert_eq!(simulate_schedule(&model, &sched, &psi).unwrap(), psi);
        let model = ControlModel::qubit(0.0).unwrap();
        let sched = PulseSchedule::zeros(1e-6, 10, &[0.0]).unwrap();
        let u = schedule_propagator(&model, &sched).unwrap();
        assert!(gate_fidelity(&u, &Operator::identity(model.shape().clone())).unwrap() > 1.0 - 1e-15);
    }

    #[test]
    fn resonant_pi_pulse_flips_qubit() {
        // Constant Rabi frequency u for time T with u T = 1/2.
        let model = ControlModel::qubit(0.0).unwrap();
        let (segments, dt) = (50, 1e-8);
        let u = 0.5 / (segments as f64 * dt);
        let sched = PulseSchedule::new(dt, vec![ControlChannel { carrier_hz: 0.0, amps: vec![c(u, 0.0); segments] }]).unwrap();
        let out = simulate_schedule(&model, &sched, &StateVector::fock(2, 0).unwrap()).unwrap();
        assert!(out.amplitude(1).norm_sqr() > 0.9999);
        assert!((out.norm() - 1.0).abs() < 1e-12);
        let x = Operator::new(model.shape().clone(), pauli::x()).unwrap();
        assert!(gate_fidelity(&schedule_propagator(&model, &sched).unwrap(), &x).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn carrier_sampling_converges_at_second_order() {
        let model = ControlModel::qubit(0.3e6).unwrap();
        let total = 4e-6;
        let run = |segments: usize| {
            let dt = total / segments as f64;
            let amps = (0..segments)
                .map(|j| {
                    let t = (j as f64 + 0.5) * dt;
                    c(0.4e6 * (PI * t / total).sin(), 0.1e6)
                })
                .collect();
            let sched = PulseSchedule::new(dt, vec![ControlChannel { carrier_hz: 0.3e6, amps }]).unwrap();
            simulate_schedule(&model, &sched, &StateVector::fock(2, 0).unwrap()).unwrap()
        };
        let (a, b, d) = (run(100), run(200), run(400));
        let ratio = a.distance(&b) / b.distance(&d);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn schedule_validation() {
        let bad = PulseSchedule::new(
            1e-9,
            vec![
                ControlChannel { carrier_hz: 0.0, amps: vec![c(0.0, 0.0); 3] },
                ControlChannel { carrier_hz: 0.0, amps: vec![c(0.0, 0.0); 2] },
            ],
        );
        assert!(matches!(bad, Err(Error::Shape(_))));
        let nan = PulseSchedule::new(1e-9, vec![ControlChannel { carrier_hz: 0.0, amps: vec![c(f64::NAN, 0.0)] }]);
        assert!(matches!(nan, Err(Error::NonFinite(_))));
        assert!(matches!(PulseSchedule::zeros(0.0, 3, &[0.0]), Err(Error::StepSize(_))));
        let json = r#"{"dt_s": 1e-9, "controls": [{"carrier_hz": -5e4, "amps": [[1.0, 0.5], [0.0, -2.0]]}]}"#;
        let s = PulseSchedule::from_json(json).unwrap();
        assert_eq!(s.controls[0].amps[1], c(0.0, -2.0));
        assert_eq!(PulseSchedule::from_json(&serde_json::to_string(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn gate_fidelity_values() {
        let shape = HilbertShape::single(2).unwrap();
        let id = Operator::identity(shape.clone());
        let x = Operator::new(shape, pauli::x()).unwrap();
        assert_eq!(gate_fidelity(&x, &x).unwrap(), 1.0);
        assert_eq!(gate_fidelity(&id, &x).unwrap(), 0.0);
        let phased = x.scale(C64::from_polar(1.0, 0.7));
        assert!((gate_fidelity(&x, &phased).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dispersive_drift_matches_stark_ladder() {
        let m = ControlModel::dispersive(1e6, -1e4, 4).unwrap();
        for n in 0..4 {
            let want = -2.0 * PI * (1e6 * n as f64 - 1e4 * (n * n) as f64 / 2.0);
            assert!((m.drift().get(4 + n, 4 + n).re - want).abs() < 1e-6);
            assert_eq!(m.drift().get(n, n), c(0.0, 0.0));
        }
    }

    #[test]
    fn identity_target_converges_immediately() {
        let model = ControlModel::qubit(0.0).unwrap();
        let target = GrapeTarget::Unitary { target: Operator::identity(model.shape().clone()), subspace: None };
        let sched = PulseSchedule::zeros(1e-8, 20, &[0.0]).unwrap();
        let res = grape_optimize(&model, &target, &sched, &GrapeOptions::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.trace.len(), 1);
        assert_eq!(res.schedule, sched);
    }

    #[test]
    fn grape_reaches_x_gate() {
        let model = ControlModel::qubit(0.2e6).unwrap();
        let x = Operator::new(model.shape().clone(), pauli::x()).unwrap();
        let target = GrapeTarget::Unitary { target: x.clone(), subspace: None };
        let sched = PulseSchedule::zeros(2e-8, 40, &[0.0]).unwrap();
        let opts = GrapeOptions {
            descent: DescentOptions { iterations: 500, tolerance: 1e-7, ..DescentOptions::default() },
            init_noise_hz: 1e5,
            seed: 11,
            ..GrapeOptions::default()
        };
        let res = grape_optimize(&model, &target, &sched, &opts).unwrap();
        assert!(res.infidelity < 1e-6, "{}", res.infidelity);
        let again = 1.0 - gate_fidelity(&schedule_propagator(&model, &res.schedule).unwrap(), &x).unwrap();
        assert!((again - res.infidelity).abs() < 1e-9);
        for w in res.trace.windows(2) {
            assert!(w[1].value <= w[0].value);
        }
        let rerun = grape_optimize(&model, &target, &sched, &opts).unwrap();
        assert_eq!(rerun, res);
    }

    #[test]
    fn grape_gradient_matches_finite_differences() {
        let model = ControlModel::dispersive(2e6, 0.0, 3).unwrap();
        let n = model.shape().total();
        let target = GrapeTarget::Unitary {
            target: Operator::new(model.shape().clone(), crate::fock::linalg::eye(n)).unwrap(),
            subspace: Some(vec![0, 1]),
        };
        let dt = 2e-8;
        let mut sched = PulseSchedule::zeros(dt, 6, &[0.0, 1e6]).unwrap();
        for (k, ch) in sched.controls.iter_mut().enumerate() {
            for (j, a) in ch.amps.iter_mut().enumerate() {
                *a = c(1e6 * ((j + k) as f64).sin(), 0.7e6 * ((2 * j + k) as f64).cos());
            }
        }
        let levels = [2, 5];
        let eval = grape_objective(&model, &target, &sched, &levels, 0.8).unwrap();
        let h = 1e-5 / (2.0 * PI * dt);
        for k in 0..2 {
            for j in 0..6 {
                for part in 0..2 {
                    let bump = |s: f64| {
                        let mut p = sched.clone();
                        p.controls[k].amps[j] += if part == 0 { c(s, 0.0) } else { c(0.0, s) };
                        grape_objective(&model, &target, &p, &levels, 0.8).unwrap().objective
                    };
                    let fd = (bump(h) - bump(-h)) / (2.0 * h);
                    let g = eval.gradient[k][j];
                    let an = if part == 0 { g.re } else { g.im };
                    assert!((an - fd).abs() <= 1e-6 * fd.abs().max(1e-9), "k={k} j={j} part={part}: {an} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn state_target_grape() {
        let model = ControlModel::dispersive(1e6, 0.0, 3).unwrap();
        let shape = model.shape().clone();
        let initial = StateVector::basis(shape.clone(), &[0, 0]).unwrap();
        let target = StateVector::basis(shape, &[0, 1]).unwrap();
        let sched = PulseSchedule::zeros(2e-8, 30, &[0.0, 0.0]).unwrap();
        let opts = GrapeOptions {
            leakage_levels: vec![2, 5],
            init_noise_hz: 2e5,
            seed: 4,
            descent: DescentOptions { iterations: 400, tolerance: 1e-6, ..DescentOptions::default() },
            ..GrapeOptions::default()
        };
        let res = grape_optimize(&model, &GrapeTarget::State { initial: initial.clone(), target: target.clone() }, &sched, &opts).unwrap();
        assert!(res.objective < 1e-5, "{}", res.objective);
        let out = simulate_schedule(&model, &res.schedule, &initial).unwrap();
        let f = crate::fock::fidelity(&out, &target).unwrap();
        assert!((1.0 - f - res.infidelity).abs() < 1e-9);
    }

    #[test]
    fn snap_pulse_basics() {
        let chi = 1e6;
        let model = ControlModel::dispersive(chi, 0.0, 3).unwrap();
        let tmin = 2.0 * PI / chi;
        assert!(matches!(synthesize_snap_pulse(&model, &[0.0; 3], 0.5 * tmin), Err(Error::Bandwidth(_))));
        assert!(matches!(synthesize_snap_pulse(&model, &[0.0; 2], tmin), Err(Error::Shape(_))));
        let zero = synthesize_snap_pulse(&model, &[0.0; 3], 4.0 * tmin).unwrap();
        assert!(snap_pulse_infidelity(&model, &zero, &[0.0; 3]).unwrap() < 1e-3);
        let theta = [0.0, PI, 0.0];
        let flip = synthesize_snap_pulse(&model, &theta, 4.0 * tmin).unwrap();
        assert!(snap_pulse_infidelity(&model, &flip, &theta).unwrap() < 1e-2);
        // (|0> + |1>)/√2 on the cavity with the qubit in |g>.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 6];
        amps[0] = c(s, 0.0);
        amps[1] = c(s, 0.0);
        let psi = StateVector::from_vec(model.shape().clone(), amps).unwrap();
        let out = simulate_schedule(&model, &flip, &psi).unwrap();
        let rel = out.amplitude(1) / out.amplitude(0);
        assert!((rel.arg().abs() - PI).abs() < 0.05, "{rel}");
    }

    #[test]
    fn sequence_gradient_and_small_target() {
        let target = haar_random_state(3, 5).unwrap();
        let opts = SequenceOptions { layers: 4, ..SequenceOptions::default() };
        let res = optimize_snap_displacement(&target, &opts, 1).unwrap();
        assert!(res.infidelity < 1e-3, "{}", res.infidelity);
        assert!(res.converged);
        assert_eq!(res.state.dim(), 4);
        for w in res.trace.windows(2) {
            assert!(w[1].value <= w[0].value);
        }
    }
}
