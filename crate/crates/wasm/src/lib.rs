//! Browser bindings: three interactive views over the core simulator, each
//! returning a JSON string for a static page to plot.
//!
//! The underlying spectrum is the cookbook two-pole family: a ± pole pair
//! carrying Λ2 (so B = √(1+Λ2)) whose overlap asymmetry sets the detuning
//! A = Λ1 at φ = π; sliding φ shifts A by cot(φ/2). All randomness is
//! seeded, so the page is deterministic for fixed controls.

use diffsearch_core::analysis::{analyze, distinct_poles, secular_residual, secular_roots};
use diffsearch_core::engine::{default_q_max, find_first_max, success_curve, StateVector};
use diffsearch_core::amplify::{modified_search, IsImpl, PipelineOptions};
use diffsearch_core::scenario::detuning_sweep_spec;
use diffsearch_core::spectrum::{build_diffusion, DiffusionSpec};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

const LAMBDA2: f64 = 2.24;
const SEED: u64 = 21;

/// Largest detuning the two-pole recipe supports at this Λ2 and dimension.
fn a_cap(n: usize) -> f64 {
    let a2 = 1.0 / n as f64;
    0.8 * (LAMBDA2 * (1.0 - a2)).sqrt()
}

fn family_spec(n: usize, a_at_pi: f64) -> Result<DiffusionSpec, diffsearch_core::Error> {
    let c = LAMBDA2 / a_cap(n);
    detuning_sweep_spec(n, LAMBDA2, c, a_at_pi, SEED)
}

fn err_json(e: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": e.to_string() }).to_string()
}

#[derive(Serialize)]
struct CurveDoc {
    curve: Vec<(usize, f64)>,
    q_m_pred: f64,
    beta_pred: f64,
    p_m_pred: f64,
    a: f64,
    b: f64,
    theta_min: f64,
    alpha: f64,
    first_max: Option<(usize, f64)>,
}

/// Success-probability curve |⟨t|S^q|s⟩|² with the two-level prediction.
///
/// `detuning` is the Λ1 detuning of the φ = π family; the effective A also
/// picks up cot(φ/2) when φ ≠ π. `q_max = 0` selects the default window.
#[wasm_bindgen]
pub fn explore_curve(log2_n: u32, detuning: f64, phi: f64, q_max: usize) -> String {
    let n = 1usize << log2_n.clamp(2, 10);
    let spec = match family_spec(n, detuning.clamp(0.0, a_cap(n))) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let run = || -> Result<CurveDoc, diffsearch_core::Error> {
        let (ds, eig) = build_diffusion(&spec)?;
        let summary = analyze(&eig, phi)?;
        let q_max = if q_max == 0 {
            default_q_max(summary.b, summary.alpha).min(4000)
        } else {
            q_max.min(4000)
        };
        let s = StateVector::new(spec.source_vector())?;
        let curve = success_curve(&ds, spec.target, phi, &s, q_max)?;
        let first_max = find_first_max(&curve).ok();
        Ok(CurveDoc {
            curve: curve.points().to_vec(),
            q_m_pred: summary.q_m,
            beta_pred: summary.beta,
            p_m_pred: summary.p_m,
            a: summary.a,
            b: summary.b,
            theta_min: summary.theta_min,
            alpha: summary.alpha,
            first_max,
        })
    };
    match run() {
        Ok(doc) => serde_json::to_string(&doc).unwrap_or_else(err_json),
        Err(e) => err_json(e),
    }
}

#[derive(Serialize)]
struct LandscapeDoc {
    poles: Vec<(f64, f64)>,
    roots: Vec<f64>,
    lambda_plus_pred: f64,
    lambda_minus_pred: f64,
    /// (λ, clipped secular residual) samples for plotting the cotangent sum.
    samples: Vec<(f64, f64)>,
}

/// Poles, secular roots, and the cotangent-sum landscape over (−π, π].
#[wasm_bindgen]
pub fn secular_landscape(log2_n: u32, detuning: f64, phi: f64, samples: usize) -> String {
    let n = 1usize << log2_n.clamp(2, 10);
    let spec = match family_spec(n, detuning.clamp(0.0, a_cap(n))) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let run = || -> Result<LandscapeDoc, diffsearch_core::Error> {
        let (_, eig) = build_diffusion(&spec)?;
        let summary = analyze(&eig, phi)?;
        let poles = distinct_poles(&eig);
        let roots = secular_roots(&eig, phi)?;
        let m = samples.clamp(64, 4096);
        let mut pts = Vec::with_capacity(m);
        for k in 0..m {
            let lam = -std::f64::consts::PI
                + std::f64::consts::TAU * (k as f64 + 0.5) / m as f64;
            let f = secular_residual(&poles, phi, lam).clamp(-25.0, 25.0);
            pts.push((lam, f));
        }
        Ok(LandscapeDoc {
            poles: poles.iter().map(|p| (p.theta, p.weight)).collect(),
            roots,
            lambda_plus_pred: summary.lambda_plus,
            lambda_minus_pred: summary.lambda_minus,
            samples: pts,
        })
    };
    match run() {
        Ok(doc) => serde_json::to_string(&doc).unwrap_or_else(err_json),
        Err(e) => err_json(e),
    }
}

#[derive(Serialize)]
struct SweepPoint {
    a: f64,
    p_m_original: f64,
    original_model_units: f64,
    modified_model_units: f64,
    modified_success: f64,
    modified_total_units: f64,
}

/// Sweep the detuning A at fixed (α, B, θ_min, φ = π): the original
/// algorithm's single-pass P_m collapses with A while the modified
/// pipeline's measured cost and success stay flat.
#[wasm_bindgen]
pub fn compare_costs(log2_n: u32, points: usize) -> String {
    let n = 1usize << log2_n.clamp(2, 10);
    let phi = std::f64::consts::PI;
    let run = || -> Result<Vec<SweepPoint>, diffsearch_core::Error> {
        let mut rows = Vec::new();
        let k = points.clamp(2, 16);
        for i in 0..k {
            let a = a_cap(n) * i as f64 / (k - 1) as f64;
            let spec = family_spec(n, a)?;
            let (_, eig) = build_diffusion(&spec)?;
            let summary = analyze(&eig, phi)?;
            let model = diffsearch_core::amplify::cost_model(&summary, summary.theta_min)?;
            let opts = PipelineOptions {
                is_impl: IsImpl::Exact,
                refine_qm: true,
                ..Default::default()
            };
            let report = modified_search(&spec, phi, None, &opts)?;
            rows.push(SweepPoint {
                a: summary.a,
                p_m_original: summary.p_m,
                original_model_units: model.original_units,
                modified_model_units: model.modified_units,
                modified_success: report.final_success,
                modified_total_units: report.cost.total_units,
            });
        }
        Ok(rows)
    };
    match run() {
        Ok(rows) => serde_json::to_string(&rows).unwrap_or_else(err_json),
        Err(e) => err_json(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_json_has_grover_shape_at_zero_detuning() {
        let text = explore_curve(6, 0.0, std::f64::consts::PI, 0);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(doc.get("error").is_none(), "{text}");
        assert!((doc["a"].as_f64().unwrap()).abs() < 1e-9);
        assert!((doc["b"].as_f64().unwrap() - 1.8).abs() < 1e-9);
        let curve = doc["curve"].as_array().unwrap();
        assert!(curve.len() > 10);
        let p0 = curve[0][1].as_f64().unwrap();
        assert!((p0 - 1.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn landscape_reports_one_root_per_pole() {
        let text = secular_landscape(5, 0.4, 2.6, 128);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(doc.get("error").is_none(), "{text}");
        let poles = doc["poles"].as_array().unwrap();
        let roots = doc["roots"].as_array().unwrap();
        assert_eq!(poles.len(), roots.len());
        assert_eq!(doc["samples"].as_array().unwrap().len(), 128);
    }

    #[test]
    fn sweep_success_stays_high_while_original_collapses() {
        let text = compare_costs(6, 5);
        let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
        let rows = rows.as_array().unwrap();
        assert_eq!(rows.len(), 5);
        let first_pm = rows[0]["p_m_original"].as_f64().unwrap();
        let last_pm = rows[4]["p_m_original"].as_f64().unwrap();
        assert!(last_pm < first_pm);
        for r in rows {
            assert!(r["modified_success"].as_f64().unwrap() >= 0.5);
        }
    }

    #[test]
    fn invalid_inputs_become_error_json() {
        let text = explore_curve(6, 0.0, 0.0, 0);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(doc.get("error").is_some());
    }
}
