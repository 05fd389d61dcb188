#![no_main]
use libfuzzer_sys::fuzz_target;

use qtomo::config::Settings;
use qtomo::ExperimentKind;

fuzz_target!(|data: &str| {
    if let Ok(settings) = Settings::parse(data) {
        // Building a config must never panic, only fail validation.
        for kind in [
            ExperimentKind::SweepN,
            ExperimentKind::SweepLength,
            ExperimentKind::Single,
        ] {
            let _ = settings.experiment(kind);
        }
        let _ = settings.simulation_plan();
    }
});
