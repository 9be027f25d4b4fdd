//! Exact secular-equation root-finding and closed-form performance predictors
//! for the search iterate `S = D_s · I_t^φ`.
//!
//! Every eigenphase λ of S with a target-coupled eigenvector satisfies
//!
//! Σ_ℓ |⟨ℓ|t⟩|² · cot((λ − θ_ℓ)/2) = cot(φ/2)
//!
//! with one root strictly between each pair of circularly consecutive
//! distinct poles θ_ℓ. The cotangent sum is strictly decreasing on every
//! inter-pole branch, so bracketed bisection is guaranteed to converge.
//! Eigenstates with ⟨ℓ|t⟩ = 0 decouple exactly and are excluded from the
//! secular system.

use crate::linalg::wrap_angle;
use crate::spectrum::{ab_quantities, moments, EigenData};
use crate::{Error, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Overlaps below this are treated as exact zeros (decoupled eigenstates).
pub const ZERO_OVERLAP_TOL: f64 = 1e-14;
/// Poles closer than this (circularly) are merged into one.
pub const POLE_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct Pole {
    pub theta: f64,
    pub weight: f64,
}

/// Distinct poles of the secular equation: eigenphases carrying nonzero
/// target overlap, circularly deduplicated with weights combined. The |s⟩
/// slot enters with weight α².
pub fn distinct_poles(eig: &EigenData) -> Vec<Pole> {
    let mut poles: Vec<Pole> = Vec::new();
    let overlaps = eig.overlaps_sq();
    let mut idx: Vec<usize> = (0..eig.n()).collect();
    idx.sort_by(|&i, &j| eig.phases[i].total_cmp(&eig.phases[j]));
    for l in idx {
        let w = overlaps[l];
        if w < ZERO_OVERLAP_TOL {
            continue;
        }
        let th = wrap_angle(eig.phases[l]);
        match poles.last_mut() {
            Some(last) if crate::linalg::circ_dist(last.theta, th) < POLE_MERGE_TOL => {
                last.weight += w;
            }
            _ => poles.push(Pole { theta: th, weight: w }),
        }
    }
    // wrap-around merge (−π side against +π side)
    if poles.len() > 1 {
        let first = poles[0];
        let last = *poles.last().unwrap();
        if crate::linalg::circ_dist(first.theta, last.theta) < POLE_MERGE_TOL {
            poles[0].weight += last.weight;
            poles.pop();
        }
    }
    poles
}

/// Σ_k w_k · cot((λ − θ_k)/2) − cot(φ/2); strictly decreasing between poles.
pub fn secular_residual(poles: &[Pole], phi: f64, lambda: f64) -> f64 {
    let mut acc = -1.0 / (phi / 2.0).tan();
    for p in poles {
        acc += p.weight / ((lambda - p.theta) / 2.0).tan();
    }
    acc
}

/// All eigenphases of S coupled to the target, via interlaced bisection.
/// Returned sorted ascending in (−π, π].
pub fn secular_roots(eig: &EigenData, phi: f64) -> Result<Vec<f64>> {
    if !(phi > 0.0 && phi < std::f64::consts::TAU) {
        return Err(Error::InvalidSpec(format!("φ = {phi} outside (0, 2π)")));
    }
    let poles = distinct_poles(eig);
    if poles.is_empty() {
        return Err(Error::InvalidSpec(
            "all target overlaps are zero; the target is orthogonal to the spectrum".into(),
        ));
    }
    let m = poles.len();
    let mut roots = Vec::with_capacity(m);
    for i in 0..m {
        let left = poles[i].theta;
        let right = if i + 1 < m {
            poles[i + 1].theta
        } else {
            poles[0].theta + std::f64::consts::TAU
        };
        let root = bisect_branch(&poles, phi, left, right)?;
        roots.push(wrap_angle(root));
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// One root on the open branch (left, right); F goes +∞ → −∞ across it.
fn bisect_branch(poles: &[Pole], phi: f64, left: f64, right: f64) -> Result<f64> {
    let gap = right - left;
    if gap <= 0.0 {
        return Err(Error::RootFinding(format!(
            "empty bracket ({left}, {right})"
        )));
    }
    let mut delta = 1e-9_f64.min(gap / 4.0);
    for _ in 0..4 {
        let mut lo = left + delta;
        let mut hi = right - delta;
        let flo = secular_residual(poles, phi, lo);
        let fhi = secular_residual(poles, phi, hi);
        if flo >= 0.0 && fhi <= 0.0 {
            for _ in 0..200 {
                if hi - lo <= 1e-13 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if secular_residual(poles, phi, mid) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        // root sits within delta of a pole; tighten the offset and retry
        delta *= 1e-3;
        if delta < 1e-15 {
            break;
        }
    }
    Err(Error::RootFinding(format!(
        "no sign change on branch ({left:.6}, {right:.6}) at φ = {phi:.6}"
    )))
}

/// Two-level closed form for the slow eigenphases around the |s⟩ pole:
/// cot 2η = A/(2αB) with η ∈ (0, π/2), λ± = ±(2α/B)·(tan η)^{±1}.
///
/// A here is the detuning produced by [`ab_quantities`]; A = 0 gives the
/// symmetric resonance η = π/4, λ± = ±2α/B.
pub fn predict_two_level(a: f64, b: f64, alpha: f64) -> Result<(f64, f64, f64)> {
    if alpha <= 0.0 {
        return Err(Error::InvalidSpec(format!("α = {alpha} must be positive")));
    }
    if b < 1.0 - 1e-12 {
        return Err(Error::InvalidSpec(format!("B = {b} must be ≥ 1")));
    }
    let cot2eta = a / (2.0 * alpha * b);
    // arccot onto (0, π) keeps η inside (0, π/2)
    let eta = f64::atan2(1.0, cot2eta) / 2.0;
    let lambda_plus = (2.0 * alpha / b) * eta.tan();
    let lambda_minus = -(2.0 * alpha / b) / eta.tan();
    Ok((eta, lambda_plus, lambda_minus))
}

/// q_m ≈ πB sin2η/(4α), β = sin2η/(B sin(φ/2)), Q = q_m/β².
pub fn performance_prediction(eta: f64, b: f64, alpha: f64, phi: f64) -> Result<(f64, f64, f64)> {
    if !(phi > 0.0 && phi < std::f64::consts::TAU) {
        return Err(Error::InvalidSpec(format!("φ = {phi} outside (0, 2π)")));
    }
    if alpha <= 0.0 || !alpha.is_finite() || !eta.is_finite() || !b.is_finite() {
        return Err(Error::InvalidSpec(
            "performance prediction needs finite inputs and α > 0".into(),
        ));
    }
    let sin2eta = (2.0 * eta).sin();
    let q_m = std::f64::consts::PI * b * sin2eta / (4.0 * alpha);
    let beta = sin2eta / (b * (phi / 2.0).sin());
    let q_cost = q_m / (beta * beta);
    Ok((q_m, beta, q_cost))
}

/// All derived scalars of the two-level theory for one spec + φ.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Detuning A = Λ1 + cot(φ/2) (0 at the fast-search resonance).
    pub a: f64,
    /// B = √(1 + Λ2) ≥ 1.
    pub b: f64,
    pub eta: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub theta_min: f64,
    pub alpha: f64,
    pub phi: f64,
    /// Predicted first-maximum iteration count (real-valued, pre-rounding).
    pub q_m: f64,
    /// Predicted |⟨t|u⟩| at the first maximum.
    pub beta: f64,
    /// Predicted β².
    pub p_m: f64,
    /// Predicted repetition-based query cost Q = q_m/β².
    pub q_cost: f64,
    /// Validity warnings (two-level assumptions that do not hold).
    pub flags: Vec<String>,
}

/// Compute the full summary from eigendata and the oracle angle.
pub fn analyze(eig: &EigenData, phi: f64) -> Result<SpectralSummary> {
    let lambda1 = moments(eig, 1)?;
    let lambda2 = moments(eig, 2)?;
    let (a, b) = ab_quantities(lambda1, lambda2, phi)?;
    let alpha = eig.alpha;
    let theta_min = eig.theta_min();
    let (eta, lambda_plus, lambda_minus) = predict_two_level(a, b, alpha)?;
    let (q_m, beta, q_cost) = performance_prediction(eta, b, alpha, phi)?;
    let mut flags = Vec::new();
    if lambda_plus.abs().max(lambda_minus.abs()) > 0.5 * theta_min {
        flags.push(format!(
            "two_level_marginal: max|λ±| = {:.3e} not ≪ θ_min = {:.3e}",
            lambda_plus.abs().max(lambda_minus.abs()),
            theta_min
        ));
    }
    let bsin = b * (phi / 2.0).sin();
    if bsin < 1.0 {
        flags.push(format!(
            "t_decomposition_invalid: B·sin(φ/2) = {bsin:.6} < 1"
        ));
    }
    if beta > 1.0 + 1e-9 {
        flags.push(format!("beta_exceeds_unity: β = {beta:.6}"));
    }
    Ok(SpectralSummary {
        lambda1,
        lambda2,
        a,
        b,
        eta,
        lambda_plus,
        lambda_minus,
        theta_min,
        alpha,
        phi,
        q_m,
        beta,
        p_m: beta * beta,
        q_cost,
        flags,
    })
}

/// The two smallest-|phase| secular roots with λ+ > 0 > λ−.
pub fn numeric_lambda_pm(roots: &[f64]) -> Result<(f64, f64)> {
    let mut sorted: Vec<f64> = roots.to_vec();
    sorted.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let mut plus = None;
    let mut minus = None;
    for &r in &sorted {
        if r > 0.0 && plus.is_none() {
            plus = Some(r);
        } else if r < 0.0 && minus.is_none() {
            minus = Some(r);
        }
        if plus.is_some() && minus.is_some() {
            break;
        }
    }
    match (plus, minus) {
        (Some(p), Some(m)) => Ok((p, m)),
        _ => Err(Error::Numerical(
            "fewer than two sign-separated eigenphases around zero".into(),
        )),
    }
}

/// Residuals of the λ±-basis decompositions against the numeric
/// eigendecomposition of S.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaBasisResiduals {
    pub lambda_plus_numeric: f64,
    pub lambda_minus_numeric: f64,
    /// ||⟨λ+|s⟩|² − cos²η|
    pub r_plus_overlap: f64,
    /// ||⟨λ−|s⟩|² − sin²η|
    pub r_minus_overlap: f64,
    /// ||⟨w|t⟩|² − 1/(B²sin²(φ/2))| where |w⟩ is the normalized projection
    /// of |t⟩ on the λ± subspace.
    pub r_w_overlap: f64,
    /// |‖t − P_{λ±}t‖ − √(1 − 1/(B²sin²(φ/2)))|, only when B·sin(φ/2) ≥ 1.
    pub r_perp: Option<f64>,
    /// B·sin(φ/2) ≥ 1, the condition for the |t⟩ decomposition target.
    pub t_decomposition_valid: bool,
}

/// Compare the η-parameterized decompositions against a numeric
/// eigendecomposition of S given as (phases, eigenvector columns).
#[allow(clippy::too_many_arguments)]
pub fn decompose_in_lambda_basis(
    phases: &[f64],
    vectors: &Array2<C64>,
    s: &Array1<C64>,
    t: &Array1<C64>,
    eta: f64,
    b: f64,
    phi: f64,
    theta_min: f64,
) -> Result<LambdaBasisResiduals> {
    let n = phases.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| phases[i].abs().total_cmp(&phases[j].abs()));
    let mut plus = None;
    let mut minus = None;
    for &k in &order {
        if phases[k].abs() >= theta_min {
            break;
        }
        if phases[k] > 0.0 && plus.is_none() {
            plus = Some(k);
        } else if phases[k] < 0.0 && minus.is_none() {
            minus = Some(k);
        }
    }
    let (kp, km) = match (plus, minus) {
        (Some(p), Some(m)) => (p, m),
        _ => {
            return Err(Error::Numerical(
                "fewer than two eigenphases inside (−θ_min, θ_min)".into(),
            ))
        }
    };
    let vp = vectors.column(kp).to_owned();
    let mut vm = vectors.column(km).to_owned();
    // enforce orthonormality of the pair (numeric eigenvectors of a normal
    // matrix are orthogonal up to roundoff for distinct eigenvalues)
    let proj = crate::linalg::inner(&vp, &vm);
    vm.zip_mut_with(&vp, |x, y| *x -= proj * y);
    let nm = crate::linalg::norm(&vm);
    vm.mapv_inplace(|z| z / nm);

    let op = crate::linalg::inner(&vp, s).norm_sqr();
    let om = crate::linalg::inner(&vm, s).norm_sqr();
    let r_plus_overlap = (op - eta.cos().powi(2)).abs();
    let r_minus_overlap = (om - eta.sin().powi(2)).abs();

    let cp = crate::linalg::inner(&vp, t);
    let cm = crate::linalg::inner(&vm, t);
    let w_sq = cp.norm_sqr() + cm.norm_sqr();
    let bsin = b * (phi / 2.0).sin();
    let target_w = 1.0 / (bsin * bsin);
    let r_w_overlap = (w_sq - target_w).abs();
    let t_decomposition_valid = bsin >= 1.0;
    let r_perp = if t_decomposition_valid {
        let perp = (1.0 - w_sq).max(0.0).sqrt();
        let target_perp = (1.0 - target_w).max(0.0).sqrt();
        Some((perp - target_perp).abs())
    } else {
        None
    };

    Ok(LambdaBasisResiduals {
        lambda_plus_numeric: phases[kp],
        lambda_minus_numeric: phases[km],
        r_plus_overlap,
        r_minus_overlap,
        r_w_overlap,
        r_perp,
        t_decomposition_valid,
    })
}

/// One row of a predicted-vs-numeric comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub quantity: String,
    pub predicted: f64,
    pub numeric: f64,
    pub abs_residual: f64,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ResidualTable {
    pub rows: Vec<ResidualRow>,
}

impl ResidualTable {
    pub fn push(&mut self, quantity: &str, predicted: f64, numeric: f64) {
        self.rows.push(ResidualRow {
            quantity: quantity.to_string(),
            predicted,
            numeric,
            abs_residual: (predicted - numeric).abs(),
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,predicted,numeric,abs_residual\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.quantity, r.predicted, r.numeric, r.abs_residual
            ));
        }
        out
    }
}

/// Full predicted-vs-numeric report for a built spec: secular roots against
/// the dense eigendecomposition of S, two-level λ± and the η/B
/// decompositions. Requires the LAPACK oracle.
#[cfg(feature = "lapack")]
pub fn residual_report(
    ds: &crate::linalg::UnitaryOperator,
    eig: &EigenData,
    target: usize,
    phi: f64,
) -> Result<(SpectralSummary, ResidualTable)> {
    use crate::engine::SearchIterate;

    let summary = analyze(eig, phi)?;
    let mut table = ResidualTable::default();

    let iter = SearchIterate::new(ds, target, phi)?;
    let smat = iter.to_matrix();
    let (sphases, svecs) = crate::linalg::eig_unitary(&smat)?;

    // secular roots vs target-coupled dense eigenphases
    let roots = secular_roots(eig, phi)?;
    let mut coupled: Vec<f64> = Vec::new();
    let t_row = target;
    for (k, &ph) in sphases.iter().enumerate() {
        let ov = svecs.column(k)[t_row].conj().norm_sqr();
        if ov > 1e-12 {
            coupled.push(ph);
        }
    }
    coupled.sort_by(f64::total_cmp);
    let mut worst = 0.0f64;
    if coupled.len() == roots.len() {
        for (a, b) in roots.iter().zip(coupled.iter()) {
            worst = worst.max(crate::linalg::circ_dist(*a, *b));
        }
    } else {
        worst = f64::NAN;
    }
    table.push("secular_max_residual", 0.0, worst);

    let (lp, lm) = numeric_lambda_pm(&roots)?;
    table.push("lambda_plus", summary.lambda_plus, lp);
    table.push("lambda_minus", summary.lambda_minus, lm);

    let s = eig.vectors.column(eig.s_index).to_owned();
    let mut t = Array1::zeros(eig.n());
    t[target] = C64::new(1.0, 0.0);
    let res = decompose_in_lambda_basis(
        &sphases,
        &svecs,
        &s,
        &t,
        summary.eta,
        summary.b,
        phi,
        summary.theta_min,
    )?;
    table.push(
        "s_overlap_plus",
        summary.eta.cos().powi(2),
        summary.eta.cos().powi(2) - res.r_plus_overlap,
    );
    table.push(
        "s_overlap_minus",
        summary.eta.sin().powi(2),
        summary.eta.sin().powi(2) - res.r_minus_overlap,
    );
    let bsin = summary.b * (phi / 2.0).sin();
    table.push(
        "w_overlap_sq",
        1.0 / (bsin * bsin),
        1.0 / (bsin * bsin) - res.r_w_overlap,
    );

    Ok((summary, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::testkit::{grover_spec, random_spec};
    use crate::spectrum::build_diffusion;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn grover4_secular_roots_are_pm_pi_over_3() {
        let spec = grover_spec(4, 1);
        let (_, eig) = build_diffusion(&spec).unwrap();
        let roots = secular_roots(&eig, PI).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + PI / 3.0).abs() < 1e-10, "{roots:?}");
        assert!((roots[1] - PI / 3.0).abs() < 1e-10, "{roots:?}");
    }

    #[test]
    fn zero_overlap_spectrum_rejected() {
        let spec = grover_spec(4, 1);
        let (_, mut eig) = build_diffusion(&spec).unwrap();
        for ov in eig.target_overlaps.iter_mut() {
            *ov = C64::new(0.0, 0.0);
        }
        assert!(matches!(
            secular_roots(&eig, PI),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn interlacing_one_root_per_gap() {
        let spec = random_spec(10, 0.3, 33);
        let (_, eig) = build_diffusion(&spec).unwrap();
        let phi = 2.4;
        let poles = distinct_poles(&eig);
        let roots = secular_roots(&eig, phi).unwrap();
        assert_eq!(roots.len(), poles.len());
        // each circular gap contains exactly one root
        let thetas: Vec<f64> = poles.iter().map(|p| p.theta).collect();
        for w in 0..thetas.len() {
            let left = thetas[w];
            let right = if w + 1 < thetas.len() {
                thetas[w + 1]
            } else {
                thetas[0] + std::f64::consts::TAU
            };
            let count = roots
                .iter()
                .map(|&r| {
                    let mut x = r;
                    while x <= left {
                        x += std::f64::consts::TAU;
                    }
                    x
                })
                .filter(|&x| x > left && x < right)
                .count();
            assert_eq!(count, 1, "gap ({left}, {right}) holds {count} roots");
        }
        // every root satisfies the equation to tight residual
        for &r in &roots {
            let f = secular_residual(&poles, phi, r);
            assert!(f.abs() < 1e-9, "residual {f:.3e} at root {r}");
        }
    }

    #[cfg(feature = "lapack")]
    #[test]
    fn secular_matches_dense_eigenphases() {
        for seed in [5u64, 17, 91] {
            let spec = random_spec(8, 0.3, seed);
            let (ds, eig) = build_diffusion(&spec).unwrap();
            let phi = 1.9;
            let roots = secular_roots(&eig, phi).unwrap();
            let iter = crate::engine::SearchIterate::new(&ds, spec.target, phi).unwrap();
            let (sphases, svecs) = crate::linalg::eig_unitary(&iter.to_matrix()).unwrap();
            let mut coupled: Vec<f64> = sphases
                .iter()
                .enumerate()
                .filter(|(k, _)| svecs.column(*k)[spec.target].norm_sqr() > 1e-10)
                .map(|(_, &p)| p)
                .collect();
            coupled.sort_by(f64::total_cmp);
            assert_eq!(coupled.len(), roots.len());
            for (a, b) in roots.iter().zip(coupled.iter()) {
                assert!(
                    crate::linalg::circ_dist(*a, *b) < 1e-8,
                    "secular {a} vs eig {b} (seed {seed})"
                );
            }
        }
    }

    #[test]
    fn two_level_symmetric_case() {
        let (eta, lp, lm) = predict_two_level(0.0, 1.0, 0.125).unwrap();
        assert!((eta - FRAC_PI_4).abs() < 1e-14);
        assert!((lp - 0.25).abs() < 1e-14);
        assert!((lm + 0.25).abs() < 1e-14);
        // against the Grover closed form ±2·arcsin(α): O(α³) agreement
        let exact = 2.0 * 0.125f64.asin();
        assert!((lp - exact).abs() < 1e-3);
    }

    #[test]
    fn two_level_detuned_case() {
        let alpha = 0.1;
        let b = 1.0;
        let a = 2.0 * alpha * b; // cot2η = 1
        let (eta, lp, _) = predict_two_level(a, b, alpha).unwrap();
        assert!((eta - PI / 8.0).abs() < 1e-14);
        assert!((lp - 2.0 * alpha * (PI / 8.0).tan()).abs() < 1e-14);
        assert!(predict_two_level(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn two_level_matches_secular_on_detuned_spectrum() {
        // exact check of the sign convention: detuning A > 0 pushes the
        // small-magnitude root to +, the large one to −
        let n = 256;
        let spec = grover_spec(n, 3);
        let alpha = 1.0 / (n as f64).sqrt();
        let phi = 2.0 * (1.0f64 / 1.25).atan(); // cot(φ/2) = 1.25
        let (_, eig) = build_diffusion(&spec).unwrap();
        let sum = analyze(&eig, phi).unwrap();
        assert!((sum.a - 1.25).abs() < 1e-12);
        let roots = secular_roots(&eig, phi).unwrap();
        let (lp, lm) = numeric_lambda_pm(&roots).unwrap();
        // prediction picks up the near root to O(α²/θ_min)
        assert!(
            (sum.lambda_plus - lp).abs() < 20.0 * alpha * alpha,
            "pred {} vs secular {}",
            sum.lambda_plus,
            lp
        );
        assert!(lm < 0.0 && sum.lambda_minus < 0.0);
    }

    #[test]
    fn performance_prediction_cases() {
        // Grover N=4: q_m = π/2, β = 1
        let (qm, beta, _) = performance_prediction(FRAC_PI_4, 1.0, 0.5, PI).unwrap();
        assert!((qm - PI / 2.0).abs() < 1e-12);
        assert!((beta - 1.0).abs() < 1e-12);
        // arithmetic case
        let (qm, beta, q) = performance_prediction(PI / 8.0, 2.0, 0.05, PI).unwrap();
        assert!((qm - PI * 2.0 * FRAC_PI_4.sin() / 0.2).abs() < 1e-3);
        assert!((beta - FRAC_PI_4.sin() / 2.0).abs() < 1e-6);
        assert!((q - qm / (beta * beta)).abs() < 1e-9);
        assert!((qm - 22.214).abs() < 1e-3);
        assert!((beta - 0.35355).abs() < 1e-5);
        assert!((q - 177.7).abs() < 0.1);
        assert!(performance_prediction(0.4, 1.0, 0.1, 0.0).is_err());
    }

    #[cfg(feature = "lapack")]
    #[test]
    fn grover4_lambda_basis_overlaps_are_half() {
        let spec = grover_spec(4, 1);
        let (ds, eig) = build_diffusion(&spec).unwrap();
        let sum = analyze(&eig, PI).unwrap();
        let iter = crate::engine::SearchIterate::new(&ds, spec.target, PI).unwrap();
        let (sphases, svecs) = crate::linalg::eig_unitary(&iter.to_matrix()).unwrap();
        let s = eig.vectors.column(eig.s_index).to_owned();
        let mut t = Array1::zeros(4);
        t[spec.target] = C64::new(1.0, 0.0);
        let res = decompose_in_lambda_basis(
            &sphases, &svecs, &s, &t, sum.eta, sum.b, PI, sum.theta_min,
        )
        .unwrap();
        assert!(res.r_plus_overlap < 1e-3, "{res:?}");
        assert!(res.r_minus_overlap < 1e-3, "{res:?}");
        // φ = π, B = 1: t lies fully inside the λ± subspace
        assert!(res.r_perp.unwrap() < 1e-6);
        assert!(res.r_w_overlap < 1e-6);
    }

    #[cfg(feature = "lapack")]
    #[test]
    fn two_dimensional_confinement_of_small_alpha_specs() {
        // α ≤ 0.05·θ_min: the component of S^q|s⟩ outside span{λ±} is
        // constant in q (eigencomponents only rotate), so measure it once:
        // 1 − Σ±|⟨λ±|s⟩|² ≤ a few × (α/θ_min)².
        let phi = 2.6;
        let spec = grover_spec(64, 4); // α = 1/8, θ_min = π → ratio ≈ 0.04
        let (ds, eig) = build_diffusion(&spec).unwrap();
        let it = crate::engine::SearchIterate::new(&ds, spec.target, phi).unwrap();
        let (ph, vecs) = crate::linalg::eig_unitary(&it.to_matrix()).unwrap();
        let mut order: Vec<usize> = (0..64).collect();
        order.sort_by(|&i, &j| ph[i].abs().total_cmp(&ph[j].abs()));
        let s = eig.vectors.column(eig.s_index).to_owned();
        let mut inside = 0.0;
        for &k in order.iter().take(2) {
            inside += crate::linalg::inner(&vecs.column(k).to_owned(), &s).norm_sqr();
        }
        let ratio = eig.alpha / eig.theta_min();
        assert!(ratio <= 0.05);
        let outside = (1.0 - inside).max(0.0);
        assert!(
            outside <= 5.0 * ratio * ratio,
            "outside = {outside:.3e}, bound = {:.3e}",
            5.0 * ratio * ratio
        );
    }
}
