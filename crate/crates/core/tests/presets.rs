//! The shipped preset files must stay in lock-step with the built-in
//! constructors.

use std::path::Path;

use drxsim_core::power::PowerConfig;
use drxsim_core::scenario::ScenarioConfig;

fn preset_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets").join(name)
}

#[test]
fn power_preset_files_match_builtins() {
    for (file, builtin) in [
        ("power_28ghz.toml", PowerConfig::<f64>::preset_28ghz()),
        ("power_140ghz.toml", PowerConfig::<f64>::preset_140ghz()),
    ] {
        let text = std::fs::read_to_string(preset_path(file)).unwrap();
        let parsed: PowerConfig<f64> = toml::from_str(&text).unwrap();
        assert_eq!(parsed, builtin, "{file} drifted from the built-in preset");
        parsed.validate().unwrap();
    }
}

#[test]
fn scenario_preset_files_match_builtins() {
    for (file, builtin) in [
        ("scenario_28ghz.toml", ScenarioConfig::<f64>::band_28ghz()),
        ("scenario_140ghz.toml", ScenarioConfig::<f64>::band_140ghz()),
    ] {
        let text = std::fs::read_to_string(preset_path(file)).unwrap();
        let parsed: ScenarioConfig<f64> = toml::from_str(&text).unwrap();
        assert_eq!(parsed, builtin, "{file} drifted from the built-in preset");
        parsed.validate().unwrap();
    }
}
