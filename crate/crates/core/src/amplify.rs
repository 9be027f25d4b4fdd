//! Amplitude amplification on top of the search iterate: assemble
//! I_u = S^{q_m}·I_s·S^{−q_m}, run the QAA loop with exact or
//! phase-estimated selective inversions, account costs, and classify specs
//! by the original vs relaxed fast-search conditions.
//!
//! Unit-step ledger: one unit per S application (both in preparing |u⟩ and
//! inside the I_u conjugation), one per QAA target inversion, and one per
//! controlled-D_s inside the phase-estimation circuit. One QAA iteration
//! therefore costs 2·q_m + 1 + T[I_s] units, and a full modified run
//! q_m + k·(2·q_m + 1 + T[I_s]).

use crate::analysis::{analyze, SpectralSummary};
use crate::engine::{self, SearchIterate, StateVector};
use crate::linalg::{adjoint, UnitaryOperator};
use crate::pea::{
    ancilla_excited_mass, approx_selective_inversion, embed_system, required_ancillas,
    target_probability, ApproxInversion, PEAConfig, DEFAULT_AMPLITUDE_BUDGET,
};
use crate::spectrum::{build_diffusion, DiffusionSpec, EigenData};
use crate::{Error, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Numerical floor below which |⟨t|u⟩| is treated as zero.
pub const BETA_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RunMode {
    #[serde(rename = "original")]
    Original,
    #[serde(rename = "modified-exact-Is")]
    ModifiedExactIs,
    #[serde(rename = "modified-pea-Is")]
    ModifiedPeaIs,
}

/// Which selective-inversion implementation the modified pipeline uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsImpl {
    Exact,
    Pea,
}

/// Classifier thresholds c₁ (original, A ≤ c₁·2αB) and c₂ (modified,
/// A ≤ c₂·1.57·B²·θ_min).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Thresholds {
    pub c1: f64,
    pub c2: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { c1: 1.0, c2: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionVerdict {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub theta_min: f64,
    pub c1: f64,
    pub c2: f64,
    /// |A| ≤ c₁·2αB
    pub original_ok: bool,
    pub original_threshold: f64,
    /// |A| ≤ c₂·1.57·B²·θ_min
    pub modified_ok: bool,
    pub modified_threshold: f64,
}

/// Classify a spec against the original and relaxed fast-search conditions.
pub fn classify_conditions(
    a: f64,
    b: f64,
    alpha: f64,
    theta_min: f64,
    thresholds: Thresholds,
) -> ConditionVerdict {
    let original_threshold = thresholds.c1 * 2.0 * alpha * b;
    let modified_threshold = thresholds.c2 * 1.57 * b * b * theta_min;
    ConditionVerdict {
        a,
        b,
        alpha,
        theta_min,
        c1: thresholds.c1,
        c2: thresholds.c2,
        original_ok: a.abs() <= original_threshold,
        original_threshold,
        modified_ok: a.abs() <= modified_threshold,
        modified_threshold,
    }
}

/// Model costs in unit steps: original repetition cost q_m/β² and the
/// modified cost (1/β)·(q_m + ln(1/β)/θ_min). The two modified terms are
/// also reported separately, never folded.
#[derive(Debug, Clone, Serialize)]
pub struct CostModel {
    pub original_units: f64,
    pub modified_units: f64,
    pub modified_search_term: f64,
    pub modified_inversion_term: f64,
}

pub fn cost_model(summary: &SpectralSummary, theta_min: f64) -> Result<CostModel> {
    let beta = summary.beta;
    if beta <= 0.0 {
        return Err(Error::Numerical("β = 0: cost model diverges".into()));
    }
    let log_term = (1.0 / beta).ln().max(0.0) / theta_min;
    Ok(CostModel {
        original_units: summary.q_m / (beta * beta),
        modified_units: (summary.q_m + log_term) / beta,
        modified_search_term: summary.q_m / beta,
        modified_inversion_term: log_term / beta,
    })
}

/// Build I_u = S^{q_m}·I_s·S^{−q_m} as a dense matrix.
///
/// With the exact I_s this is exactly the reflection 1 − 2|u⟩⟨u| about
/// u = S^{q_m}|s⟩. With the phase-estimated Ĩ_s the system block of the
/// extended circuit is conjugated instead, and the result deviates from the
/// exact reflection by at most the circuit's measured error.
pub fn build_iu(
    ds: &UnitaryOperator,
    eig: &EigenData,
    t: usize,
    phi: f64,
    q_m: usize,
    is_impl: IsImpl,
    pea_cfg: Option<&PEAConfig>,
) -> Result<Array2<C64>> {
    let iter = SearchIterate::new(ds, t, phi)?;
    match is_impl {
        IsImpl::Exact => {
            let s = StateVector::new(eig.vectors.column(eig.s_index).to_owned())?;
            let u = iter.power(&s, q_m as i64)?;
            Ok(reflection_about(u.amps()))
        }
        IsImpl::Pea => {
            let cfg = pea_cfg.ok_or_else(|| {
                Error::InvalidSpec("PEA-based I_u needs a PEAConfig".into())
            })?;
            let w = approx_selective_inversion(eig, cfg)?;
            let (block, leakage) = w.system_block();
            // leakage is bounded by the vector-deviation error the sizing
            // rule was asked for
            if leakage > cfg.target_error * 1.5 + 1e-9 {
                return Err(Error::Numerical(format!(
                    "inversion leakage {leakage:.3e} above the configured bound {:.3e}",
                    cfg.target_error
                )));
            }
            let smat = iter.to_matrix();
            let mut spow = Array2::eye(ds.dim()).mapv(|x: f64| C64::new(x, 0.0));
            for _ in 0..q_m {
                spow = smat.mat().dot(&spow);
            }
            // W's block implements I − 2|s⟩⟨s| up to ε; conjugation flips it
            // into a reflection about u. Negate to match I_s = 1 − 2|s⟩⟨s|.
            Ok(spow.dot(&block).dot(&adjoint(&spow)))
        }
    }
}

fn reflection_about(u: &Array1<C64>) -> Array2<C64> {
    let n = u.len();
    let mut m = Array2::zeros((n, n));
    for r in 0..n {
        for c in 0..n {
            m[[r, c]] = -2.0 * u[r] * u[c].conj();
            if r == c {
                m[[r, c]] += 1.0;
            }
        }
    }
    m
}

/// Outcome of a QAA loop.
#[derive(Debug, Clone)]
pub struct QaaOutcome {
    pub iterations: usize,
    pub final_success: f64,
    pub final_state: StateVector,
}

/// Iterate G = −I_u·I_t^π on |u⟩ for ⌊π/(4·arcsin β)⌋ rounds with the exact
/// reflection about u, where β = |⟨t|u⟩|.
pub fn qaa_run(u: &StateVector, t: usize, beta: f64) -> Result<QaaOutcome> {
    if beta < BETA_FLOOR {
        return Err(Error::Numerical(format!(
            "β = {beta:.3e} below the numerical floor {BETA_FLOOR:e}"
        )));
    }
    qaa_loop(u, t, qaa_iterations(beta))
}

/// The QAA loop itself, for an externally chosen iteration count.
pub fn qaa_loop(u: &StateVector, t: usize, iterations: usize) -> Result<QaaOutcome> {
    if t >= u.dim() {
        return Err(Error::IndexOutOfRange { index: t, dim: u.dim() });
    }
    let mut psi = u.amps().clone();
    let u_amps = u.amps();
    for _ in 0..iterations {
        psi[t] = -psi[t];
        let proj: C64 = u_amps.iter().zip(psi.iter()).map(|(a, b)| a.conj() * b).sum();
        psi.zip_mut_with(u_amps, |x, y| *x -= 2.0 * proj * y);
        psi.mapv_inplace(|z| -z);
    }
    let final_success = psi[t].norm_sqr();
    Ok(QaaOutcome {
        iterations,
        final_success,
        final_state: StateVector::new(psi)?,
    })
}

pub fn qaa_iterations(beta: f64) -> usize {
    (std::f64::consts::PI / (4.0 * beta.min(1.0).asin())).floor() as usize
}

/// Unit-step cost ledger of one run.
#[derive(Debug, Clone, Serialize)]
pub struct CostLedger {
    pub prep_units: f64,
    pub is_units_per_call: f64,
    /// 2·q_m + 1 + T[I_s]
    pub per_iteration_units: f64,
    pub qaa_iterations: usize,
    pub total_units: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PeaDetails {
    pub bits: u32,
    pub queries_per_call: u64,
    pub epsilon: f64,
    pub worst_error: f64,
    /// Squared norm left on excited ancillas after the run.
    pub residual_ancilla_mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assumption15 {
    /// ln(1/β)/θ_min
    pub inversion_term: f64,
    pub q_m: f64,
    pub satisfied: bool,
}

/// Measured outcome of a full pipeline run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub mode: RunMode,
    pub dimension: usize,
    pub alpha: f64,
    pub phi: f64,
    pub q_m_pred: f64,
    pub beta_pred: f64,
    pub p_m_pred: f64,
    /// Iterations of S used to prepare |u⟩ (or the empirical first maximum
    /// for the original mode).
    pub q_m_used: usize,
    /// |⟨t|u⟩| measured at q_m_used.
    pub beta_emp: f64,
    /// Single-pass maximum success probability (original mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_m_emp: Option<f64>,
    pub final_success: f64,
    pub cost: CostLedger,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pea: Option<PeaDetails>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumption15: Option<Assumption15>,
    pub verdict: ConditionVerdict,
    pub model: CostModel,
    pub flags: Vec<String>,
}

/// Pipeline options for [`modified_search`] and [`original_search`].
#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    pub is_impl: IsImpl,
    /// Search q in [q_m−2, q_m+2] for the empirically best |⟨t|S^q|s⟩|.
    pub refine_qm: bool,
    pub thresholds: Thresholds,
    pub amplitude_budget: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            is_impl: IsImpl::Pea,
            refine_qm: false,
            thresholds: Thresholds::default(),
            amplitude_budget: DEFAULT_AMPLITUDE_BUDGET,
        }
    }
}

/// Original algorithm: iterate S from |s⟩, stop at the first empirical
/// maximum, and model the classical repetition cost q_m/P_m.
pub fn original_search(spec: &DiffusionSpec, phi: f64) -> Result<RunReport> {
    let (ds, eig) = build_diffusion(spec)?;
    let summary = analyze(&eig, phi)?;
    let s = StateVector::new(spec.source_vector())?;
    let q_max = engine::default_q_max(summary.b, summary.alpha);
    let curve = engine::success_curve(&ds, spec.target, phi, &s, q_max)?;
    let (q_m_emp, p_m_emp) = engine::find_first_max(&curve)?;
    let beta_emp = p_m_emp.sqrt();
    let verdict = classify_conditions(
        summary.a,
        summary.b,
        summary.alpha,
        summary.theta_min,
        Thresholds::default(),
    );
    let model = cost_model(&summary, summary.theta_min)?;
    let total_units = if p_m_emp > 0.0 {
        q_m_emp as f64 / p_m_emp
    } else {
        f64::INFINITY
    };
    Ok(RunReport {
        mode: RunMode::Original,
        dimension: spec.dimension,
        alpha: summary.alpha,
        phi,
        q_m_pred: summary.q_m,
        beta_pred: summary.beta,
        p_m_pred: summary.p_m,
        q_m_used: q_m_emp,
        beta_emp,
        p_m_emp: Some(p_m_emp),
        final_success: p_m_emp,
        cost: CostLedger {
            prep_units: q_m_emp as f64,
            is_units_per_call: 0.0,
            per_iteration_units: 0.0,
            qaa_iterations: 0,
            total_units,
        },
        pea: None,
        assumption15: None,
        verdict,
        model,
        flags: summary.flags.clone(),
    })
}

/// Modified pipeline: analyze → prepare u = S^{q_m}|s⟩ → QAA with the chosen
/// I_s implementation → measured success and unit-step ledger.
pub fn modified_search(
    spec: &DiffusionSpec,
    phi: f64,
    epsilon: Option<f64>,
    opts: &PipelineOptions,
) -> Result<RunReport> {
    let (ds, eig) = build_diffusion(spec)?;
    let summary = analyze(&eig, phi)?;
    let iter = SearchIterate::new(&ds, spec.target, phi)?;
    let s = StateVector::new(spec.source_vector())?;

    let q_pred = summary.q_m.round().max(1.0) as usize;
    let (q_m, u) = if opts.refine_qm {
        pick_best_q(&iter, &s, spec.target, q_pred)?
    } else {
        (q_pred, iter.power(&s, q_pred as i64)?)
    };
    let beta_emp = u.amps()[spec.target].norm();
    if beta_emp < BETA_FLOOR {
        return Err(Error::Numerical(format!(
            "|⟨t|u⟩| = {beta_emp:.3e} at q_m = {q_m}; amplification has nothing to amplify"
        )));
    }
    // The algorithm only knows the theory's β: the iteration count and the
    // per-call error budget come from the prediction, the outcome from the
    // simulated state.
    let beta_run = summary.beta.clamp(BETA_FLOOR, 1.0);
    let eps_call = epsilon.unwrap_or(beta_run / 10.0).clamp(1e-12, 0.999);
    let iterations = qaa_iterations(beta_run);
    let theta_min = summary.theta_min;

    let (final_success, is_units, pea_details, mode) = match opts.is_impl {
        IsImpl::Exact => {
            let outcome = qaa_loop(&u, spec.target, iterations)?;
            (outcome.final_success, 1.0, None, RunMode::ModifiedExactIs)
        }
        IsImpl::Pea => {
            let (bits, queries) = required_ancillas(theta_min, eps_call)?;
            let mut cfg = PEAConfig::new(bits, theta_min, eps_call);
            cfg.amplitude_budget = opts.amplitude_budget;
            let w = approx_selective_inversion(&eig, &cfg)?;
            let (final_p, resid) =
                qaa_run_extended(&iter, &w, &u, spec.target, q_m, iterations)?;
            let worst_error = w.report().worst_error;
            (
                final_p,
                queries as f64,
                Some(PeaDetails {
                    bits,
                    queries_per_call: queries,
                    epsilon: eps_call,
                    worst_error,
                    residual_ancilla_mass: resid,
                }),
                RunMode::ModifiedPeaIs,
            )
        }
    };

    let per_iteration_units = 2.0 * q_m as f64 + 1.0 + is_units;
    let total_units = q_m as f64 + iterations as f64 * per_iteration_units;
    let inversion_term = (1.0 / beta_run).ln().max(0.0) / theta_min;
    let verdict = classify_conditions(
        summary.a,
        summary.b,
        summary.alpha,
        theta_min,
        opts.thresholds,
    );
    let model = cost_model(&summary, theta_min)?;
    Ok(RunReport {
        mode,
        dimension: spec.dimension,
        alpha: summary.alpha,
        phi,
        q_m_pred: summary.q_m,
        beta_pred: summary.beta,
        p_m_pred: summary.p_m,
        q_m_used: q_m,
        beta_emp,
        p_m_emp: None,
        final_success,
        cost: CostLedger {
            prep_units: q_m as f64,
            is_units_per_call: is_units,
            per_iteration_units,
            qaa_iterations: iterations,
            total_units,
        },
        pea: pea_details,
        assumption15: Some(Assumption15 {
            inversion_term,
            q_m: q_m as f64,
            satisfied: inversion_term <= q_m as f64,
        }),
        verdict,
        model,
        flags: summary.flags.clone(),
    })
}

/// ±2 search around the predicted q_m maximizing |⟨t|S^q|s⟩|.
fn pick_best_q(
    iter: &SearchIterate,
    s: &StateVector,
    t: usize,
    q_pred: usize,
) -> Result<(usize, StateVector)> {
    let lo = q_pred.saturating_sub(2).max(1);
    let hi = q_pred + 2;
    let mut state = iter.power(s, lo as i64)?;
    let mut best = (lo, state.clone(), state.probability(t));
    for q in lo + 1..=hi {
        state = iter.step(&state)?;
        let p = state.probability(t);
        if p > best.2 {
            best = (q, state.clone(), p);
        }
    }
    Ok((best.0, best.1))
}

/// QAA on the extended space with the phase-estimated inversion:
/// G = −(S̃^{q_m} W S̃^{−q_m}) · I_t^π, ancillas initialized to |0…0⟩.
/// Returns the final target probability (any ancilla value) and the residual
/// excited-ancilla mass.
fn qaa_run_extended(
    iter: &SearchIterate,
    w: &ApproxInversion,
    u: &StateVector,
    t: usize,
    q_m: usize,
    iterations: usize,
) -> Result<(f64, f64)> {
    let n = u.dim();
    let m = w.ancilla_dim();
    let mut ext = embed_system(u.amps(), w.bits());
    let mut slice_buf: Array1<C64> = Array1::zeros(n);
    for _ in 0..iterations {
        // I_t^π on the system register
        for a in 0..m {
            ext[a * n + t] = -ext[a * n + t];
        }
        // S^{−q_m} per ancilla slice
        for a in 0..m {
            for i in 0..n {
                slice_buf[i] = ext[a * n + i];
            }
            for _ in 0..q_m {
                slice_buf = step_inv_raw(iter, &slice_buf);
            }
            for i in 0..n {
                ext[a * n + i] = slice_buf[i];
            }
        }
        ext = w.apply_extended(&ext)?;
        // S^{q_m} per ancilla slice
        for a in 0..m {
            for i in 0..n {
                slice_buf[i] = ext[a * n + i];
            }
            for _ in 0..q_m {
                slice_buf = step_raw(iter, &slice_buf);
            }
            for i in 0..n {
                ext[a * n + i] = slice_buf[i];
            }
        }
        ext.mapv_inplace(|z| -z);
    }
    let p = target_probability(&ext, n, t);
    let resid = ancilla_excited_mass(&ext, n);
    Ok((p, resid))
}

fn step_raw(iter: &SearchIterate, amps: &Array1<C64>) -> Array1<C64> {
    let mut v = amps.clone();
    v[iter.t] *= C64::from_polar(1.0, iter.phi);
    iter.ds().apply(&v)
}

fn step_inv_raw(iter: &SearchIterate, amps: &Array1<C64>) -> Array1<C64> {
    let mut v = iter.ds_adj().apply(amps);
    v[iter.t] *= C64::from_polar(1.0, -iter.phi);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::spectrum::testkit::{grover_spec, random_spec};
    use std::f64::consts::PI;

    #[test]
    fn exact_iu_is_reflection_about_u() {
        let spec = grover_spec(16, 8);
        let (ds, eig) = build_diffusion(&spec).unwrap();
        let iu = build_iu(&ds, &eig, spec.target, PI, 3, IsImpl::Exact, None).unwrap();
        // I_u² = 1
        let sq = iu.dot(&iu);
        let eye = Array2::eye(16).mapv(|x: f64| C64::new(x, 0.0));
        assert!(max_abs_diff(&sq, &eye) < 1e-9);
        // I_u·u = −u
        let iter = SearchIterate::new(&ds, spec.target, PI).unwrap();
        let s = StateVector::new(spec.source_vector()).unwrap();
        let u = iter.power(&s, 3).unwrap();
        let iu_u = iu.dot(u.amps());
        for (a, b) in iu_u.iter().zip(u.amps().iter()) {
            assert!((a + b).norm() < 1e-10);
        }
        // eigenvalue −1 exactly once: trace = N − 2
        let tr: C64 = (0..16).map(|i| iu[[i, i]]).sum();
        assert!((tr.re - 14.0).abs() < 1e-9 && tr.im.abs() < 1e-9);
    }

    #[test]
    fn q_m_zero_gives_is_itself() {
        let spec = grover_spec(8, 2);
        let (ds, eig) = build_diffusion(&spec).unwrap();
        let iu = build_iu(&ds, &eig, spec.target, PI, 0, IsImpl::Exact, None).unwrap();
        let s = spec.source_vector();
        let refl = reflection_about(&s);
        assert!(max_abs_diff(&iu, &refl) < 1e-12);
    }

    #[test]
    fn approximate_iu_close_to_exact() {
        let spec = random_spec(8, 0.5, 12);
        let (ds, eig) = build_diffusion(&spec).unwrap();
        let exact = build_iu(&ds, &eig, spec.target, PI, 2, IsImpl::Exact, None).unwrap();
        let theta_min = eig.theta_min();
        // a block-deviation budget of 1e−3 corresponds to a vector-norm
        // budget √(2·1e−3); the block error is quadratically smaller
        let eps_vec = (2.0 * 1e-3f64).sqrt();
        let (bits, _) = required_ancillas(theta_min, eps_vec).unwrap();
        let cfg = PEAConfig::new(bits, theta_min, eps_vec);
        let approx =
            build_iu(&ds, &eig, spec.target, PI, 2, IsImpl::Pea, Some(&cfg)).unwrap();
        assert!(
            max_abs_diff(&approx, &exact) < 2e-3,
            "‖Ĩ_u − I_u‖ = {}",
            max_abs_diff(&approx, &exact)
        );
    }

    #[test]
    fn qaa_beta_one_is_noop() {
        let u = StateVector::basis(4, 1).unwrap();
        let out = qaa_run(&u, 1, 1.0).unwrap();
        assert_eq!(out.iterations, 0);
        assert!((out.final_success - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qaa_matches_two_dimensional_closed_form() {
        // u with β = 0.3 against a basis target
        let n = 8;
        let beta: f64 = 0.3;
        let mut amps = Array1::zeros(n);
        amps[2] = C64::new(beta, 0.0);
        let rest = ((1.0 - beta * beta) / (n as f64 - 1.0)).sqrt();
        for i in 0..n {
            if i != 2 {
                amps[i] = C64::new(rest, 0.0);
            }
        }
        let u = StateVector::new(amps).unwrap();
        let out = qaa_run(&u, 2, beta).unwrap();
        let theta = beta.asin();
        let expect = ((2 * out.iterations + 1) as f64 * theta).sin().powi(2);
        assert!(
            (out.final_success - expect).abs() < 1e-6,
            "{} vs {}",
            out.final_success,
            expect
        );
        assert!(out.iterations == 2);
        assert!(out.final_success >= 0.5);
        assert!(qaa_run(&u, 2, 1e-12).is_err());
    }

    #[test]
    fn qaa_contract_p_at_least_half_below_beta_07() {
        for k in 1..14 {
            let beta = 0.05 * k as f64; // 0.05 .. 0.65
            let n = 4;
            let mut amps = Array1::zeros(n);
            amps[0] = C64::new(beta, 0.0);
            let rest = ((1.0 - beta * beta) / 3.0).sqrt();
            for i in 1..n {
                amps[i] = C64::new(rest, 0.0);
            }
            let u = StateVector::new(amps).unwrap();
            let out = qaa_run(&u, 0, beta).unwrap();
            assert!(
                out.final_success >= 0.5,
                "β = {beta}: P = {}",
                out.final_success
            );
        }
    }

    #[test]
    fn grover64_modified_pipeline_degenerates_gracefully() {
        let spec = grover_spec(64, 5);
        let opts = PipelineOptions {
            is_impl: IsImpl::Pea,
            refine_qm: false,
            ..Default::default()
        };
        let report = modified_search(&spec, PI, None, &opts).unwrap();
        // β ≈ 1 at the first maximum: QAA is a no-op or a single round
        assert!(report.final_success >= 0.98, "{report:?}");
        assert!(report.cost.qaa_iterations <= 1);
        // ledger consistency
        assert!(
            (report.cost.per_iteration_units
                - (2.0 * report.q_m_used as f64 + 1.0 + report.cost.is_units_per_call))
                .abs()
                < 1e-12
        );
        assert!(
            (report.cost.total_units
                - (report.cost.prep_units
                    + report.cost.qaa_iterations as f64 * report.cost.per_iteration_units))
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn original_report_on_grover64() {
        let spec = grover_spec(64, 5);
        let report = original_search(&spec, PI).unwrap();
        assert_eq!(report.q_m_used, 6);
        assert!(report.final_success >= 0.99);
        assert!(report.verdict.original_ok && report.verdict.modified_ok);
    }

    #[test]
    fn classifier_cases() {
        let v = classify_conditions(0.0, 1.0, 0.1, 0.5, Thresholds::default());
        assert!(v.original_ok && v.modified_ok);
        // boundary pass at A = 2αB exactly
        let v = classify_conditions(0.2, 1.0, 0.1, 0.5, Thresholds::default());
        assert!(v.original_ok);
        // A = B²θ_min: modified passes (1 ≤ 1.57), original fails when Bθ_min > 2α
        let v = classify_conditions(0.5, 1.0, 0.1, 0.5, Thresholds::default());
        assert!(!v.original_ok && v.modified_ok);
    }

    #[test]
    fn classifier_implication_property() {
        // original_ok ⇒ modified_ok whenever θ_min ≥ (2/π)(2α/B)
        for &(a, b, alpha, theta) in &[
            (0.01f64, 1.0f64, 0.1f64, 0.2f64),
            (0.3, 1.5, 0.2, 0.9),
            (0.0, 2.0, 0.05, 0.1),
            (0.12, 1.2, 0.06, 0.07),
        ] {
            let v = classify_conditions(a, b, alpha, theta, Thresholds::default());
            if theta >= (2.0 / std::f64::consts::PI) * (2.0 * alpha / b) && v.original_ok {
                assert!(v.modified_ok, "implication fails at {a},{b},{alpha},{theta}");
            }
        }
    }

    #[test]
    fn cost_model_cases() {
        let spec = grover_spec(4, 1);
        let (_, eig) = build_diffusion(&spec).unwrap();
        let summary = analyze(&eig, PI).unwrap();
        let m = cost_model(&summary, summary.theta_min).unwrap();
        // Grover: β = 1 → both costs equal q_m
        assert!((m.original_units - summary.q_m).abs() < 1e-9);
        assert!((m.modified_units - summary.q_m).abs() < 1e-9);

        // ratio ≈ 1/β when the log term is negligible
        let synthetic = SpectralSummary {
            beta: 0.1,
            q_m: 100.0,
            ..summary
        };
        let m = cost_model(&synthetic, 0.5).unwrap();
        let ratio = m.original_units / m.modified_units;
        assert!((ratio - 10.0).abs() / 10.0 < 0.05, "ratio {ratio}");
    }
}
