macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(rate_bounds, "rate_bounds.rs");
example!(chain_monitoring, "chain_monitoring.rs");
example!(mesoscopic_meter, "mesoscopic_meter.rs");
example!(channel_iteration, "channel_iteration.rs");
example!(wick_residual, "wick_residual.rs");
example!(gaussian_bath, "gaussian_bath.rs");
example!(oscillator_oracle, "oscillator_oracle.rs");
example!(optimal_spectrum, "optimal_spectrum.rs");
example!(run_experiment, "run_experiment.rs");
example!(spectrum_file, "spectrum_file.rs");
