//! Browser demo: three interactive views over the optimization library,
//! each returning a complete SVG document as a string.
//!
//! The `*_svg` functions hold the logic and are exercised by host-side
//! tests; the `#[wasm_bindgen]` wrappers only translate errors for JS.

use wasm_bindgen::prelude::*;

use eve_opt::harness::{self, ProblemSpec, RunConfig};
use eve_opt::optim::OptimizerKind;
use eve_opt::plot::{
    epoch_mean_series, line_chart_svg, sort_series_by_final, PlotOptions, Series,
};
use eve_opt::problems::Activation;
use eve_opt::schedules::{gamma_for_final_ratio, schedule_alpha, DecayKind, DecayPolicy};

const DEMO_ALPHA1: f64 = 1e-3;

fn demo_config(seed: u64, epochs: u32, optimizer: OptimizerKind) -> RunConfig {
    let mut config = RunConfig::new(
        ProblemSpec::Blobs {
            n: 96,
            d: 8,
            classes: 3,
            separation: 4.0,
            hidden: vec![8],
            activation: Activation::Tanh,
        },
        optimizer,
    );
    config.batch_size = 16;
    config.epochs = epochs;
    config.seed = seed;
    config
}

fn check_epochs(epochs: u32) -> Result<(), String> {
    if (1..=200).contains(&epochs) {
        Ok(())
    } else {
        Err(format!("epochs must be in 1..=200, got {epochs}"))
    }
}

/// Trains the seven optimizers (default rates) on a small three-class
/// blobs MLP and charts the per-epoch mean loss of each.
pub fn compare_optimizers_svg(seed: u64, epochs: u32) -> Result<String, String> {
    check_epochs(epochs)?;
    let mut series = Vec::new();
    for kind in OptimizerKind::ALL {
        let config = demo_config(seed, epochs, kind);
        let trace = harness::run(&config).map_err(|e| e.to_string())?;
        series.push(epoch_mean_series(kind.name(), &trace.records));
    }
    sort_series_by_final(&mut series);
    let opts = PlotOptions {
        title: "optimizers on a 3-class blobs MLP".into(),
        x_label: "epoch".into(),
        y_label: "mean minibatch loss".into(),
        log_y: true,
        ..PlotOptions::default()
    };
    line_chart_svg(&series, &opts).map_err(|e| e.to_string())
}

/// Runs the feedback-scaled optimizer with the given smoothing and clip
/// settings and charts the clipped and smoothed coefficients per step.
pub fn feedback_coefficients_svg(
    seed: u64,
    epochs: u32,
    beta3: f64,
    c: f64,
) -> Result<String, String> {
    check_epochs(epochs)?;
    let mut config = demo_config(seed, epochs, OptimizerKind::Eve);
    config.hyper = config.hyper.with_beta3(beta3).with_c(c);
    config.hyper.validate().map_err(|e| e.to_string())?;
    let trace = harness::run(&config).map_err(|e| e.to_string())?;

    let mut d_hat = Vec::new();
    let mut d_tilde = Vec::new();
    for r in &trace.records {
        let t = r.t as f64;
        if let (Some(h), Some(s)) = (r.d_hat, r.d_tilde) {
            d_hat.push((t, h));
            d_tilde.push((t, s));
        }
    }
    let series = vec![
        Series {
            label: "d_hat (clipped)".into(),
            points: d_hat,
        },
        Series {
            label: "d_tilde (smoothed)".into(),
            points: d_tilde,
        },
    ];
    let opts = PlotOptions {
        title: format!("feedback coefficients (beta3 = {beta3}, c = {c})"),
        x_label: "step".into(),
        y_label: "coefficient".into(),
        log_y: true,
        ..PlotOptions::default()
    };
    line_chart_svg(&series, &opts).map_err(|e| e.to_string())
}

/// Charts the four decay schedules, each solved so the rate ends at
/// alpha1/k after the given number of steps.
pub fn decay_profiles_svg(total_steps: u32, k: f64) -> Result<String, String> {
    if !(1..=1_000_000).contains(&total_steps) {
        return Err(format!(
            "total_steps must be in 1..=1000000, got {total_steps}"
        ));
    }
    let total = total_steps as u64;
    let mut series = Vec::new();
    for kind in [
        DecayKind::Constant,
        DecayKind::Exponential,
        DecayKind::InvT,
        DecayKind::InvSqrtT,
    ] {
        // The constant schedule cannot end anywhere but alpha1.
        let gamma = if kind == DecayKind::Constant {
            0.0
        } else {
            gamma_for_final_ratio(kind, k, total).map_err(|e| e.to_string())?
        };
        let policy = DecayPolicy::new(kind, gamma, DEMO_ALPHA1).map_err(|e| e.to_string())?;
        let step = (total / 200).max(1);
        let mut points: Vec<(f64, f64)> = (1..=total)
            .step_by(step as usize)
            .map(|t| (t as f64, schedule_alpha(&policy, t)))
            .collect();
        if points.last().map(|p| p.0) != Some(total as f64) {
            points.push((total as f64, schedule_alpha(&policy, total)));
        }
        series.push(Series {
            label: kind.name().into(),
            points,
        });
    }
    let opts = PlotOptions {
        title: format!("decay schedules ending at alpha1/{k}"),
        x_label: "step".into(),
        y_label: "alpha_t".into(),
        log_y: true,
        ..PlotOptions::default()
    };
    line_chart_svg(&series, &opts).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn compare_optimizers(seed: u32, epochs: u32) -> Result<String, JsValue> {
    compare_optimizers_svg(seed as u64, epochs).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn feedback_coefficients(
    seed: u32,
    epochs: u32,
    beta3: f64,
    c: f64,
) -> Result<String, JsValue> {
    feedback_coefficients_svg(seed as u64, epochs, beta3, c).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decay_profiles(total_steps: u32, k: f64) -> Result<String, JsValue> {
    decay_profiles_svg(total_steps, k).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimizer_comparison_renders_seven_curves_deterministically() {
        let a = compare_optimizers_svg(1, 5).unwrap();
        let b = compare_optimizers_svg(1, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<polyline").count(), 7);
        for kind in OptimizerKind::ALL {
            assert!(a.contains(kind.name()), "{} missing", kind.name());
        }
        assert_ne!(a, compare_optimizers_svg(2, 5).unwrap());
    }

    #[test]
    fn feedback_view_renders_both_coefficient_curves() {
        let svg = feedback_coefficients_svg(7, 8, 0.999, 10.0).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("d_hat (clipped)"));
        assert!(svg.contains("d_tilde (smoothed)"));
        assert!(feedback_coefficients_svg(7, 8, 1.5, 10.0).is_err());
        assert!(feedback_coefficients_svg(7, 0, 0.999, 10.0).is_err());
    }

    #[test]
    fn decay_view_renders_all_four_schedules() {
        let svg = decay_profiles_svg(400, 100.0).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 4);
        for name in ["constant", "exp", "inv-t", "inv-sqrt-t"] {
            assert!(svg.contains(&format!(">{name}</text>")), "{name} missing");
        }
        assert!(decay_profiles_svg(0, 100.0).is_err());
        assert!(decay_profiles_svg(400, 0.5).is_err());
    }
}
