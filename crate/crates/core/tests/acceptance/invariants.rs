use faer::complex_native::c64;
use monitored_entropy::exact::{run_monitoring, KrausFamily, MonitoringRun, SpinChainModel};
use monitored_entropy::gaussian::{entropy_ledger_gaussian, eta, BosonModel, Mode};
use monitored_entropy::spectral::{
    fdt_complete, hilbert_transform, rates::pointwise_violations, scnt_rate, FdtConvention, Parity, SpectralData,
    TailModel,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn exact_ledger_identity(
        sites in 2usize..5,
        gamma in -1.0f64..1.0,
        beta in 0.0f64..2.0,
        dt in 0.1f64..2.0,
        steps in 1usize..6,
        field in 0.0f64..2.0,
    ) {
        let model = SpinChainModel::new(sites, field, 0.945).unwrap();
        let q = model.microscopic_observable(gamma, 0, 1).unwrap();
        let kraus = KrausFamily::binary(&q).unwrap();
        prop_assert!(kraus.completeness_residual() < 1e-12);
        let run = MonitoringRun::thermal(model.hamiltonian().unwrap(), beta, dt, steps, kraus).unwrap();
        let l = run_monitoring(&run).unwrap();
        prop_assert!(l.check().is_ok(), "{:?}", l.check());
        prop_assert!(l.identity_residual() <= 1e-10);
        prop_assert!(l.defects().iter().all(|d| *d >= -1e-9));
        prop_assert!(l.purification <= l.joint_shannon + 1e-9);
    }

    #[test]
    fn gaussian_ledger_identity(
        freqs in proptest::collection::vec((0.1f64..5.0, 0.01f64..0.5), 1..5),
        beta in 0.2f64..3.0,
        dt in 0.05f64..0.5,
        steps in 1usize..12,
    ) {
        let modes = freqs.into_iter().map(|(omega, coupling)| Mode { omega, coupling }).collect();
        let model = BosonModel::new(modes, beta).unwrap();
        let l = entropy_ledger_gaussian(&model, dt, steps).unwrap();
        prop_assert!(l.check().is_ok(), "{:?}", l.check());
        prop_assert!(l.purification >= 0.0);
    }

    #[test]
    fn pointwise_inequalities(
        gk in proptest::collection::vec(0.0f64..1e4, 8..40),
        re in -10.0f64..10.0,
        im in -10.0f64..10.0,
        beta in 0.1f64..10.0,
    ) {
        let n = gk.len();
        let omega: Vec<f64> = (1..=n).map(|k| k as f64 * 0.3).collect();
        let gr = (0..n).map(|k| c64::new(re * (k as f64).cos(), im / (1.0 + k as f64))).collect();
        let sd = SpectralData::with_retarded(omega, gk, gr, beta).unwrap();
        let (a, b) = pointwise_violations(&sd);
        prop_assert!(a <= 0.0 && b <= 0.0);
    }

    #[test]
    fn planckian_scaling(amp in 1e-3f64..1e2, width in 0.2f64..5.0, beta in 0.2f64..5.0) {
        let rate = |b: f64| {
            let y: Vec<f64> = (0..600).map(|k| 30.0 * (k as f64 + 0.5) / 600.0).collect();
            let gk = y.iter().map(|v| amp / (1.0 + (v / width).powi(2))).collect();
            let omega = y.iter().map(|v| v / b).collect();
            scnt_rate(&fdt_complete(omega, gk, b, FdtConvention::ModeExpansion, TailModel::Vanishing).unwrap()).unwrap()
        };
        let (r1, r2) = (rate(beta), rate(2.0 * beta));
        // quadrature tolerance is relative to the size of the terms that cancel in s_CNT
        let scale = r1.joint_term.abs() + r1.marginal_term.abs() + r1.first_order_term.abs();
        prop_assert!((r2.s_cnt - r1.s_cnt / 2.0).abs() <= 1e-9 * scale);
        prop_assert!((r2.purification - r1.purification / 2.0).abs() <= 1e-9 * r1.purification);
        prop_assert!(beta * r1.purification <= std::f64::consts::PI / 8.0 + 1e-9);
    }

    #[test]
    fn hilbert_transform_is_linear(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let x: Vec<f64> = (0..200).map(|k| 10.0 * (k as f64 + 0.5) / 200.0).collect();
        let f: Vec<f64> = x.iter().map(|v| v / (1.0 + v * v)).collect();
        let g: Vec<f64> = x.iter().map(|v| v * (-v * v).exp()).collect();
        let h = |s: &[f64]| hilbert_transform(&x, s, Parity::Odd, TailModel::Vanishing).unwrap();
        let mix: Vec<f64> = f.iter().zip(&g).map(|(p, q)| a * p + b * q).collect();
        let (hf, hg, hm) = (h(&f), h(&g), h(&mix));
        for k in 0..x.len() {
            prop_assert!((hm[k] - a * hf[k] - b * hg[k]).abs() <= 1e-10 * (1.0 + hm[k].abs()));
        }
    }

    #[test]
    fn eta_is_increasing_and_positive(x in 1e-6f64..50.0, dx in 1e-3f64..1.0) {
        prop_assert!(eta(x) > 0.0);
        prop_assert!(eta(x + dx) > eta(x));
    }
}
