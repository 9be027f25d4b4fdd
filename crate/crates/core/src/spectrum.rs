//! Synthesis of diffusion operators from declarative eigenspectrum recipes,
//! and the overlap-weighted cotangent moments derived from them.
//!
//! A diffusion operator `D_s` is any unitary with the source state |s⟩ as a
//! non-degenerate eigenstate of eigenvalue 1. A [`DiffusionSpec`] prescribes
//! the remaining eigenphases θ_ℓ together with the target-overlap distribution
//! |⟨ℓ|t⟩|²; [`build_diffusion`] realizes a concrete dense unitary with those
//! properties, deterministically in the seed.

use crate::linalg::{
    self, adjoint, complete_unitary_with_first_column, wrap_angle, UnitaryOperator,
};
use crate::{Error, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Tolerance below which an eigenphase counts as the |s⟩ slot's zero.
pub const ZERO_PHASE_TOL: f64 = 1e-12;
/// Tolerance on Σ target_overlaps = 1 and the s-slot = α² consistency check.
pub const OVERLAP_SUM_TOL: f64 = 1e-12;

/// How the source state |s⟩ is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceSpec {
    /// |s⟩ = Σ_i |i⟩ / √N
    Uniform,
    /// |s⟩ = |i⟩
    Basis(usize),
}

impl Serialize for SourceSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SourceSpec::Uniform => s.serialize_str("uniform"),
            SourceSpec::Basis(i) => s.serialize_u64(*i as u64),
        }
    }
}

impl<'de> Deserialize<'de> for SourceSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(i) => Ok(SourceSpec::Basis(i as usize)),
            Raw::Str(s) if s == "uniform" => Ok(SourceSpec::Uniform),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "source must be \"uniform\" or a basis index, got \"{s}\""
            ))),
        }
    }
}

/// Declarative recipe for a diffusion operator.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DiffusionSpec {
    pub dimension: usize,
    pub source: SourceSpec,
    pub target: usize,
    /// Eigenphases θ_ℓ in radians, θ_ℓ ∈ [−π, π], exactly one equal to 0.
    pub eigenphases: Vec<f64>,
    /// |⟨ℓ|t⟩|² per slot; sums to 1; the zero-phase slot must equal α².
    pub target_overlaps: Vec<f64>,
    pub seed: u64,
}

/// Validated facts extracted from a spec before construction.
#[derive(Debug, Clone, Copy)]
pub struct SpecFacts {
    /// Slot index carrying the zero eigenphase.
    pub s_slot: usize,
    /// min_{ℓ≠s} |θ_ℓ|
    pub theta_min: f64,
    /// |⟨t|s⟩|
    pub alpha: f64,
}

impl DiffusionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DiffusionSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    /// The source statevector as amplitudes.
    pub fn source_vector(&self) -> Array1<C64> {
        let n = self.dimension;
        match self.source {
            SourceSpec::Uniform => {
                Array1::from_elem(n, C64::new(1.0 / (n as f64).sqrt(), 0.0))
            }
            SourceSpec::Basis(i) => {
                let mut v = Array1::zeros(n);
                v[i] = C64::new(1.0, 0.0);
                v
            }
        }
    }

    /// ⟨s|t⟩ for the declared geometry (real and non-negative in both modes).
    pub fn alpha(&self) -> f64 {
        match self.source {
            SourceSpec::Uniform => 1.0 / (self.dimension as f64).sqrt(),
            SourceSpec::Basis(i) => {
                if i == self.target {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn validate(&self) -> Result<SpecFacts> {
        let n = self.dimension;
        if n < 2 {
            return Err(Error::InvalidSpec(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        if self.target >= n {
            return Err(Error::IndexOutOfRange {
                index: self.target,
                dim: n,
            });
        }
        if let SourceSpec::Basis(i) = self.source {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, dim: n });
            }
            if i == self.target {
                return Err(Error::InvalidSpec(
                    "source and target coincide (α = 1); nothing to search".into(),
                ));
            }
        }
        if self.eigenphases.len() != n {
            return Err(Error::InvalidSpec(format!(
                "expected {n} eigenphases, got {}",
                self.eigenphases.len()
            )));
        }
        if self.target_overlaps.len() != n {
            return Err(Error::InvalidSpec(format!(
                "expected {n} target overlaps, got {}",
                self.target_overlaps.len()
            )));
        }
        for (l, &th) in self.eigenphases.iter().enumerate() {
            if !th.is_finite() || th.abs() > std::f64::consts::PI + 1e-12 {
                return Err(Error::InvalidSpec(format!(
                    "eigenphase[{l}] = {th} outside [-π, π]"
                )));
            }
        }
        let zeros: Vec<usize> = self
            .eigenphases
            .iter()
            .enumerate()
            .filter(|(_, &th)| th.abs() < ZERO_PHASE_TOL)
            .map(|(l, _)| l)
            .collect();
        if zeros.len() != 1 {
            return Err(Error::DegenerateSpectrum(format!(
                "exactly one eigenphase must be 0 (the |s⟩ slot), found {}",
                zeros.len()
            )));
        }
        let s_slot = zeros[0];
        let theta_min = self
            .eigenphases
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != s_slot)
            .map(|(_, &th)| wrap_angle(th).abs())
            .fold(f64::INFINITY, f64::min);
        if theta_min < ZERO_PHASE_TOL {
            return Err(Error::DegenerateSpectrum(
                "a non-source eigenphase is zero (θ_min = 0)".into(),
            ));
        }
        let mut sum = 0.0;
        for (l, &p) in self.target_overlaps.iter().enumerate() {
            if !p.is_finite() || p < -1e-15 || p > 1.0 + 1e-12 {
                return Err(Error::InvalidSpec(format!(
                    "target_overlaps[{l}] = {p} outside [0, 1]"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > OVERLAP_SUM_TOL {
            return Err(Error::InvalidSpec(format!(
                "target overlaps sum to {sum}, expected 1 (|Δ| ≤ {OVERLAP_SUM_TOL:e})"
            )));
        }
        let alpha = self.alpha();
        let a2 = alpha * alpha;
        if (self.target_overlaps[s_slot] - a2).abs() > OVERLAP_SUM_TOL {
            return Err(Error::InvalidSpec(format!(
                "s-slot overlap {} inconsistent with α² = {a2}",
                self.target_overlaps[s_slot]
            )));
        }
        // Feasibility: the remaining overlap mass must fit inside the
        // orthogonal complement of |s⟩, whose t-component carries 1 − α².
        let rest = 1.0 - a2;
        if rest <= 0.0 {
            return Err(Error::InvalidSpec(
                "α = 1 leaves no search space (target equals source)".into(),
            ));
        }
        for (l, &p) in self.target_overlaps.iter().enumerate() {
            if l != s_slot && p > rest + 1e-12 {
                return Err(Error::Infeasible(format!(
                    "target_overlaps[{l}] = {p} exceeds 1 - α² = {rest}; \
                     no orthonormal eigenbasis can realize it"
                )));
            }
        }
        Ok(SpecFacts {
            s_slot,
            theta_min,
            alpha,
        })
    }
}

/// Eigendecomposition of a diffusion operator, sorted by eigenphase.
#[derive(Debug, Clone)]
pub struct EigenData {
    /// Eigenphases in (−π, π], ascending.
    pub phases: Vec<f64>,
    /// Eigenvectors as columns, ordered to match `phases`.
    pub vectors: Array2<C64>,
    /// Complex overlaps ⟨ℓ|t⟩, ordered to match `phases`.
    pub target_overlaps: Vec<C64>,
    /// Position of the zero-phase (|s⟩) entry in the sorted order.
    pub s_index: usize,
    /// |⟨t|s⟩|
    pub alpha: f64,
}

impl EigenData {
    pub fn n(&self) -> usize {
        self.phases.len()
    }

    pub fn theta_min(&self) -> f64 {
        self.phases
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != self.s_index)
            .map(|(_, &th)| th.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// |⟨ℓ|t⟩|² per sorted slot.
    pub fn overlaps_sq(&self) -> Vec<f64> {
        self.target_overlaps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Reconstruct Σ_ℓ e^{iθ_ℓ} |ℓ⟩⟨ℓ|.
    pub fn reconstruct(&self) -> Array2<C64> {
        let n = self.n();
        let mut d = Array2::zeros((n, n));
        for l in 0..n {
            let ph = C64::from_polar(1.0, self.phases[l]);
            let v = self.vectors.column(l);
            for r in 0..n {
                for c in 0..n {
                    d[[r, c]] += ph * v[r] * v[c].conj();
                }
            }
        }
        d
    }
}

/// Build a dense `D_s` realizing the spec, together with its eigendata.
///
/// Construction: |s⟩ occupies the zero-phase slot. In the orthogonal
/// complement of |s⟩ the first basis vector τ is the normalized t-component;
/// the remaining eigenvectors are the columns of an (N−1)-dimensional unitary
/// whose first row has moduli √(p_ℓ/(1−α²)) with seeded random phases, so the
/// prescribed overlaps hold exactly. Deterministic in `spec.seed`.
pub fn build_diffusion(spec: &DiffusionSpec) -> Result<(UnitaryOperator, EigenData)> {
    let facts = spec.validate()?;
    let n = spec.dimension;
    let s_slot = facts.s_slot;
    let alpha = facts.alpha;
    let a2 = alpha * alpha;
    let rest = 1.0 - a2;

    let s = spec.source_vector();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // t = α s + √(1−α²) τ with τ ⊥ s.
    let mut tau: Array1<C64> = Array1::zeros(n);
    tau[spec.target] = C64::new(1.0, 0.0);
    tau.zip_mut_with(&s, |x, y| *x -= alpha * y);
    let tnorm = linalg::norm(&tau);
    tau.mapv_inplace(|z| z / tnorm);

    // Orthonormal basis of s⊥ beginning with τ: complete [s, τ, ...] and drop s.
    let mut seed_cols = Array2::zeros((n, 2));
    seed_cols.column_mut(0).assign(&s);
    seed_cols.column_mut(1).assign(&tau);
    let basis = complete_with_fixed_columns(&seed_cols, &mut rng)?;

    // First row of the (N−1)-dim completion: √w_ℓ with seeded random phases.
    let m = n - 1;
    let mut row: Array1<C64> = Array1::zeros(m);
    let mut non_s_slots = Vec::with_capacity(m);
    for l in 0..n {
        if l != s_slot {
            non_s_slots.push(l);
        }
    }
    for (j, &l) in non_s_slots.iter().enumerate() {
        let w = (spec.target_overlaps[l] / rest).clamp(0.0, 1.0);
        let phase = std::f64::consts::TAU * unit_f64(&mut rng);
        row[j] = C64::from_polar(w.sqrt(), phase);
    }
    let rn = linalg::norm(&row);
    if (rn - 1.0).abs() > 1e-9 {
        return Err(Error::Infeasible(format!(
            "non-source overlap weights have norm {rn}, expected 1"
        )));
    }
    row.mapv_inplace(|z| z / rn);

    // U with first row = row: complete conj(row) to a unitary X, take U = X†.
    let first_col = row.mapv(|z| z.conj());
    let x = complete_unitary_with_first_column(first_col.view(), &mut rng)?;
    let u = adjoint(&x);

    // Assemble eigenvector columns in slot order.
    let mut vmat: Array2<C64> = Array2::zeros((n, n));
    vmat.column_mut(s_slot).assign(&s);
    for (j, &l) in non_s_slots.iter().enumerate() {
        let mut col: Array1<C64> = Array1::zeros(n);
        for k in 0..m {
            // basis column k+1 spans s⊥ (column 0 is s itself).
            let b = basis.column(k + 1);
            let coeff = u[[k, j]];
            col.zip_mut_with(&b, |x, y| *x += coeff * y);
        }
        vmat.column_mut(l).assign(&col);
    }

    // D_s = V diag(e^{iθ}) V†
    let mut vd = vmat.clone();
    for l in 0..n {
        let ph = C64::from_polar(1.0, wrap_angle(spec.eigenphases[l]));
        vd.column_mut(l).mapv_inplace(|z| z * ph);
    }
    let d = vd.dot(&adjoint(&vmat));
    let op = UnitaryOperator::new(d)?;

    // Sorted eigendata + overlap fidelity check.
    let mut order: Vec<usize> = (0..n).collect();
    let wrapped: Vec<f64> = spec.eigenphases.iter().map(|&t| wrap_angle(t)).collect();
    order.sort_by(|&i, &j| wrapped[i].total_cmp(&wrapped[j]));
    let mut phases = Vec::with_capacity(n);
    let mut vectors = Array2::zeros((n, n));
    let mut overlaps = Vec::with_capacity(n);
    let mut s_index = 0;
    for (k, &l) in order.iter().enumerate() {
        phases.push(wrapped[l]);
        vectors.column_mut(k).assign(&vmat.column(l));
        // ⟨ℓ|t⟩ with |t⟩ a basis state: conj of the target row entry.
        let ov = vmat[[spec.target, l]].conj();
        let err = (ov.norm_sqr() - spec.target_overlaps[l]).abs();
        if err > 1e-10 {
            return Err(Error::Numerical(format!(
                "constructed overlap drifted from spec by {err:.3e} at slot {l}"
            )));
        }
        overlaps.push(ov);
        if l == s_slot {
            s_index = k;
        }
    }

    Ok((
        op,
        EigenData {
            phases,
            vectors,
            target_overlaps: overlaps,
            s_index,
            alpha,
        },
    ))
}

/// Complete a set of orthonormal seed columns to a full orthonormal basis
/// with seeded random vectors (modified Gram–Schmidt, two passes).
fn complete_with_fixed_columns(
    seed_cols: &Array2<C64>,
    rng: &mut ChaCha8Rng,
) -> Result<Array2<C64>> {
    let n = seed_cols.nrows();
    let k = seed_cols.ncols();
    let mut cols: Vec<Array1<C64>> = (0..k).map(|j| seed_cols.column(j).to_owned()).collect();
    while cols.len() < n {
        let mut v = Array1::from_iter((0..n).map(|_| linalg::random_c64(rng)));
        for _pass in 0..2 {
            for c in &cols {
                let proj = linalg::inner(c, &v);
                v.zip_mut_with(c, |x, y| *x -= proj * y);
            }
        }
        let nv = linalg::norm(&v);
        if nv < 1e-8 {
            continue;
        }
        v.mapv_inplace(|z| z / nv);
        cols.push(v);
    }
    let mut m = Array2::zeros((n, n));
    for (j, c) in cols.iter().enumerate() {
        m.column_mut(j).assign(c);
    }
    Ok(m)
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    use rand::RngCore;
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// p-th moment of cot(θ_ℓ/2) under the |⟨ℓ|t⟩|² distribution over ℓ ≠ s.
pub fn moments(eig: &EigenData, p: u32) -> Result<f64> {
    if p != 1 && p != 2 {
        return Err(Error::InvalidSpec(format!("moment order must be 1 or 2, got {p}")));
    }
    let overlaps = eig.overlaps_sq();
    let mut acc = 0.0;
    for l in 0..eig.n() {
        if l == eig.s_index {
            continue;
        }
        let th = eig.phases[l];
        if th.abs() < ZERO_PHASE_TOL {
            return Err(Error::DegenerateSpectrum(format!(
                "eigenphase[{l}] = {th:e} coincides with the |s⟩ phase"
            )));
        }
        let c = 1.0 / (th / 2.0).tan();
        acc += overlaps[l] * c.powi(p as i32);
    }
    Ok(acc)
}

/// The detuning A and bandwidth B of the search iterate.
///
/// A measures how far the spectrum-plus-oracle sits from the slow-rotation
/// resonance: A = Λ1 + cot(φ/2) under this crate's e^{+iφ} oracle convention
/// (A = 0 is the fast-search point). B = √(1 + Λ2) ≥ 1.
pub fn ab_quantities(lambda1: f64, lambda2: f64, phi: f64) -> Result<(f64, f64)> {
    if !(phi > 0.0 && phi < std::f64::consts::TAU) {
        return Err(Error::InvalidSpec(format!(
            "φ = {phi} outside (0, 2π); cot(φ/2) is singular at the endpoints"
        )));
    }
    assert!(lambda2 >= -1e-12, "Λ2 = {lambda2} must be non-negative");
    let a = lambda1 + 1.0 / (phi / 2.0).tan();
    let b = (1.0 + lambda2.max(0.0)).sqrt();
    Ok((a, b))
}

/// Seeded spec constructors shared by unit tests across modules.
#[cfg(test)]
pub(crate) mod testkit {
    use super::*;
    use std::f64::consts::PI;

    pub(crate) fn grover_spec(n: usize, seed: u64) -> DiffusionSpec {
        let a2 = 1.0 / n as f64;
        let mut phases = vec![PI; n];
        phases[0] = 0.0;
        DiffusionSpec {
            dimension: n,
            source: SourceSpec::Uniform,
            target: n - 1,
            eigenphases: phases,
            target_overlaps: vec![a2; n],
            seed,
        }
    }

    /// Generic spec: seeded random phases in ±[θ_floor, π] and random overlaps.
    pub(crate) fn random_spec(n: usize, theta_floor: f64, seed: u64) -> DiffusionSpec {
        crate::scenario::seeded_spec(n, theta_floor, seed)
    }
}
