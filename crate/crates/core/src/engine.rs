//! Dense statevector engine: apply `I_t^φ`, iterate `S = D_s · I_t^φ`, and
//! measure success-probability curves.

use crate::linalg::{self, UnitaryOperator};
use crate::{Error, Result};
use ndarray::Array1;
use num_complex::Complex64 as C64;

pub const NORM_TOL: f64 = 1e-10;

/// Normalized complex amplitude vector over the search space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Array1<C64>,
}

impl StateVector {
    pub fn new(amps: Array1<C64>) -> Result<Self> {
        let n = linalg::norm(&amps);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::Numerical(format!(
                "state norm {n} deviates from 1 beyond {NORM_TOL:e}"
            )));
        }
        Ok(Self { amps })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = Array1::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn into_amps(self) -> Array1<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amps)
    }

    /// |⟨index|ψ⟩|²
    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn overlap(&self, other: &StateVector) -> C64 {
        linalg::inner(&other.amps, &self.amps)
    }
}

/// Multiply the amplitude at `t` by e^{iφ}, leaving the rest unchanged.
pub fn selective_phase(psi: &StateVector, t: usize, phi: f64) -> Result<StateVector> {
    if t >= psi.dim() {
        return Err(Error::IndexOutOfRange {
            index: t,
            dim: psi.dim(),
        });
    }
    let mut amps = psi.amps.clone();
    amps[t] *= C64::from_polar(1.0, phi);
    Ok(StateVector { amps })
}

/// One search step: ψ ↦ D_s · I_t^φ · ψ.
pub fn search_step(
    ds: &UnitaryOperator,
    t: usize,
    phi: f64,
    psi: &StateVector,
) -> Result<StateVector> {
    if ds.dim() != psi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} vs state dim {}",
            ds.dim(),
            psi.dim()
        )));
    }
    let rotated = selective_phase(psi, t, phi)?;
    Ok(StateVector {
        amps: ds.apply(&rotated.amps),
    })
}

/// Forward/inverse application of the search iterate without materializing S.
pub struct SearchIterate<'a> {
    ds: &'a UnitaryOperator,
    ds_adj: UnitaryOperator,
    pub t: usize,
    pub phi: f64,
}

impl<'a> SearchIterate<'a> {
    pub fn new(ds: &'a UnitaryOperator, t: usize, phi: f64) -> Result<Self> {
        if t >= ds.dim() {
            return Err(Error::IndexOutOfRange {
                index: t,
                dim: ds.dim(),
            });
        }
        Ok(Self {
            ds,
            ds_adj: ds.adjoint(),
            t,
            phi,
        })
    }

    pub fn dim(&self) -> usize {
        self.ds.dim()
    }

    pub fn ds(&self) -> &UnitaryOperator {
        self.ds
    }

    pub fn ds_adj(&self) -> &UnitaryOperator {
        &self.ds_adj
    }

    pub fn step(&self, psi: &StateVector) -> Result<StateVector> {
        search_step(self.ds, self.t, self.phi, psi)
    }

    /// S^{-1} = I_t^{-φ} · D_s†
    pub fn step_inv(&self, psi: &StateVector) -> Result<StateVector> {
        let moved = StateVector {
            amps: self.ds_adj.apply(&psi.amps),
        };
        selective_phase(&moved, self.t, -self.phi)
    }

    /// S^q (q may be negative).
    pub fn power(&self, psi: &StateVector, q: i64) -> Result<StateVector> {
        let mut state = psi.clone();
        if q >= 0 {
            for _ in 0..q {
                state = self.step(&state)?;
            }
        } else {
            for _ in 0..(-q) {
                state = self.step_inv(&state)?;
            }
        }
        Ok(state)
    }

    /// Materialize S as a dense unitary (for eigendecomposition oracles).
    pub fn to_matrix(&self) -> UnitaryOperator {
        let mut m = self.ds.mat().clone();
        let ph = C64::from_polar(1.0, self.phi);
        for r in 0..m.nrows() {
            m[[r, self.t]] *= ph;
        }
        UnitaryOperator::new_unchecked(m)
    }
}

/// Success probabilities |⟨t|S^q|s⟩|² for q = 0..=q_max.
#[derive(Debug, Clone)]
pub struct SuccessCurve {
    points: Vec<(usize, f64)>,
}

impl SuccessCurve {
    pub fn points(&self) -> &[(usize, f64)] {
        &self.points
    }

    pub fn probability(&self, q: usize) -> f64 {
        self.points[q].1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn from_points(points: Vec<(usize, f64)>) -> Self {
        Self { points }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,probability\n");
        for (q, p) in &self.points {
            out.push_str(&format!("{q},{p}\n"));
        }
        out
    }
}

/// Default curve-sampling cap: 10·⌈πB/(4α)⌉ comfortably covers the first
/// predicted maximum.
pub fn default_q_max(b: f64, alpha: f64) -> usize {
    let q = (std::f64::consts::PI * b / (4.0 * alpha)).ceil();
    ((10.0 * q) as usize).max(2)
}

/// Sample |⟨t|S^q|s⟩|² for q = 0..=q_max.
pub fn success_curve(
    ds: &UnitaryOperator,
    t: usize,
    phi: f64,
    source: &StateVector,
    q_max: usize,
) -> Result<SuccessCurve> {
    if q_max < 1 {
        return Err(Error::InvalidSpec("q_max must be at least 1".into()));
    }
    let iter = SearchIterate::new(ds, t, phi)?;
    if iter.dim() != source.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} vs state dim {}",
            iter.dim(),
            source.dim()
        )));
    }
    let mut points = Vec::with_capacity(q_max + 1);
    let mut state = source.clone();
    points.push((0, state.probability(t)));
    for q in 1..=q_max {
        state = iter.step(&state)?;
        let p = state.probability(t);
        if p > 1.0 + 1e-12 {
            return Err(Error::Numerical(format!(
                "probability {p} exceeds 1 at q = {q}"
            )));
        }
        points.push((q, p));
    }
    Ok(SuccessCurve { points })
}

/// Smallest q that is a local maximum of the curve (non-strict comparisons,
/// ties resolved to the smallest q). A curve still rising at q_max has no
/// maximum and reports the boundary value instead.
pub fn find_first_max(curve: &SuccessCurve) -> Result<(usize, f64)> {
    let pts = curve.points();
    if pts.len() < 2 {
        return Err(Error::InvalidSpec(
            "curve must contain at least two points".into(),
        ));
    }
    for i in 0..pts.len() - 1 {
        let (q, p) = pts[i];
        let left_ok = i == 0 || p >= pts[i - 1].1;
        let right_ok = p >= pts[i + 1].1;
        if left_ok && right_ok {
            return Ok((q, p));
        }
    }
    let (q, p) = *pts.last().unwrap();
    Err(Error::NoMaximum { q, p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_diffusion, DiffusionSpec, SourceSpec};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn grover(n: usize) -> (UnitaryOperator, DiffusionSpec) {
        let a2 = 1.0 / n as f64;
        let mut phases = vec![PI; n];
        phases[0] = 0.0;
        let spec = DiffusionSpec {
            dimension: n,
            source: SourceSpec::Uniform,
            target: n - 1,
            eigenphases: phases,
            target_overlaps: vec![a2; n],
            seed: 1,
        };
        let (d, _) = build_diffusion(&spec).unwrap();
        (d, spec)
    }

    fn uniform_state(n: usize) -> StateVector {
        StateVector::new(Array1::from_elem(
            n,
            C64::new(1.0 / (n as f64).sqrt(), 0.0),
        ))
        .unwrap()
    }

    #[test]
    fn selective_phase_cases() {
        let psi = uniform_state(4);
        let same = selective_phase(&psi, 2, 0.0).unwrap();
        assert_eq!(psi, same);

        let t = StateVector::basis(4, 1).unwrap();
        let flipped = selective_phase(&t, 1, PI).unwrap();
        assert!((flipped.amps()[1] + C64::new(1.0, 0.0)).norm() < 1e-15);

        // (|t⟩ + |x⟩)/√2 → (i|t⟩ + |x⟩)/√2 at φ = π/2
        let r = 1.0 / 2.0f64.sqrt();
        let mut amps = Array1::zeros(4);
        amps[0] = C64::new(r, 0.0);
        amps[3] = C64::new(r, 0.0);
        let psi = StateVector::new(amps).unwrap();
        let out = selective_phase(&psi, 0, FRAC_PI_2).unwrap();
        assert!((out.amps()[0] - C64::new(0.0, r)).norm() < 1e-15);
        assert!((out.amps()[3] - C64::new(r, 0.0)).norm() < 1e-15);

        assert!(selective_phase(&psi, 9, 0.1).is_err());
    }

    #[test]
    fn grover4_one_step_exact() {
        let (d, spec) = grover(4);
        let s = uniform_state(4);
        let out = search_step(&d, spec.target, PI, &s).unwrap();
        assert!((out.probability(spec.target) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phi_zero_is_pure_diffusion() {
        let (d, spec) = grover(8);
        let s = uniform_state(8);
        let out = search_step(&d, spec.target, 0.0, &s).unwrap();
        let direct = StateVector::new(d.apply(s.amps())).unwrap();
        assert!((out.overlap(&direct).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn step_matches_explicit_matrix_product() {
        let spec = crate::spectrum::testkit::random_spec(8, 0.3, 5);
        let (d, _) = build_diffusion(&spec).unwrap();
        let iter = SearchIterate::new(&d, spec.target, 1.234).unwrap();
        let s = StateVector::new(spec.source_vector()).unwrap();
        let fast = iter.step(&s).unwrap();
        let smat = iter.to_matrix();
        let slow = StateVector::new(smat.apply(s.amps())).unwrap();
        for (a, b) in fast.amps().iter().zip(slow.amps().iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        // inverse undoes the step
        let back = iter.step_inv(&fast).unwrap();
        for (a, b) in back.amps().iter().zip(s.amps().iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn grover4_curve_values() {
        let (d, spec) = grover(4);
        let s = uniform_state(4);
        let curve = success_curve(&d, spec.target, PI, &s, 1).unwrap();
        assert!((curve.probability(0) - 0.25).abs() < 1e-12);
        assert!((curve.probability(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grover64_matches_closed_form_and_peaks_at_six() {
        let (d, spec) = grover(64);
        let s = uniform_state(64);
        let alpha: f64 = 1.0 / 8.0;
        let q_max = default_q_max(1.0, alpha);
        let curve = success_curve(&d, spec.target, PI, &s, q_max).unwrap();
        let theta = alpha.asin();
        for q in 0..=20 {
            let expect = ((2 * q + 1) as f64 * theta).sin().powi(2);
            assert!(
                (curve.probability(q) - expect).abs() < 1e-9,
                "q={q}: {} vs {expect}",
                curve.probability(q)
            );
        }
        let (qm, pm) = find_first_max(&curve).unwrap();
        assert_eq!(qm, 6);
        assert!(pm >= 0.99);
    }

    #[test]
    fn phi_zero_curve_is_flat_at_alpha_squared() {
        let spec = crate::spectrum::testkit::random_spec(8, 0.4, 9);
        let (d, _) = build_diffusion(&spec).unwrap();
        let s = StateVector::new(spec.source_vector()).unwrap();
        let a2 = spec.alpha() * spec.alpha();
        let curve = success_curve(&d, spec.target, 0.0, &s, 40).unwrap();
        for &(_, p) in curve.points() {
            assert!((p - a2).abs() < 1e-10);
        }
    }

    #[test]
    fn first_max_edge_cases() {
        let rising = SuccessCurve::from_points(vec![(0, 0.1), (1, 0.2), (2, 0.3)]);
        match find_first_max(&rising) {
            Err(Error::NoMaximum { q, p }) => {
                assert_eq!(q, 2);
                assert!((p - 0.3).abs() < 1e-15);
            }
            other => panic!("expected NoMaximum, got {other:?}"),
        }

        let flat = SuccessCurve::from_points(vec![(0, 0.5), (1, 0.5), (2, 0.5)]);
        assert_eq!(find_first_max(&flat).unwrap(), (0, 0.5));

        let bump = SuccessCurve::from_points(vec![(0, 0.1), (1, 0.4), (2, 0.4), (3, 0.2)]);
        assert_eq!(find_first_max(&bump).unwrap(), (1, 0.4));
    }

    #[test]
    fn norm_preserved_over_long_runs() {
        let spec = crate::spectrum::testkit::random_spec(8, 0.35, 13);
        let (d, _) = build_diffusion(&spec).unwrap();
        let iter = SearchIterate::new(&d, spec.target, 2.1).unwrap();
        let mut psi = StateVector::new(spec.source_vector()).unwrap();
        for _ in 0..100_000 {
            psi = iter.step(&psi).unwrap();
        }
        assert!((psi.norm() - 1.0).abs() < 1e-9);
    }
}
