//! Dense complex linear algebra helpers shared by all modules.

use crate::{Error, Result};
use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64 as C64;
use rand::RngCore;

pub const UNITARITY_TOL: f64 = 1e-10;

/// Wrap an angle into (−π, π].
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut t = theta % two_pi;
    if t <= -std::f64::consts::PI {
        t += two_pi;
    } else if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}

/// Shortest circular distance between two angles.
pub fn circ_dist(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// Dense unitary matrix. Construction through [`UnitaryOperator::new`]
/// verifies ‖U†U − 1‖_max ≤ 1e−10.
#[derive(Debug, Clone)]
pub struct UnitaryOperator {
    mat: Array2<C64>,
}

impl UnitaryOperator {
    pub fn new(mat: Array2<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let err = unitarity_error(&mat);
        if err > UNITARITY_TOL {
            return Err(Error::Numerical(format!(
                "matrix fails unitarity check: max |U†U - 1| = {err:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Wrap a matrix known unitary by construction (checked in debug builds).
    pub fn new_unchecked(mat: Array2<C64>) -> Self {
        debug_assert!(unitarity_error(&mat) <= UNITARITY_TOL);
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Array2<C64> {
        &self.mat
    }

    pub fn into_mat(self) -> Array2<C64> {
        self.mat
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.mat.dot(v)
    }

    pub fn adjoint(&self) -> UnitaryOperator {
        UnitaryOperator {
            mat: adjoint(&self.mat),
        }
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.mat)
    }
}

pub fn adjoint(m: &Array2<C64>) -> Array2<C64> {
    let mut a = m.t().to_owned();
    a.mapv_inplace(|z| z.conj());
    a
}

/// max_{ij} |(M†M − 1)_{ij}|
pub fn unitarity_error(m: &Array2<C64>) -> f64 {
    let prod = adjoint(m).dot(m);
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((prod[[i, j]] - expect).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn inner(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &Array1<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Uniform f64 in [0, 1) from a raw 64-bit draw.
fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Standard-normal-ish complex draw (Box–Muller); distribution details are
/// irrelevant here, only seeded determinism and genericity matter.
pub fn random_c64<R: RngCore>(rng: &mut R) -> C64 {
    let u1 = unit_f64(rng).max(1e-300);
    let u2 = unit_f64(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let phi = std::f64::consts::TAU * u2;
    C64::new(r * phi.cos(), r * phi.sin())
}

/// Complete `first` (assumed unit norm) to a full unitary: column 0 is
/// `first`, remaining columns are seeded random vectors orthonormalized by
/// modified Gram–Schmidt with one re-orthogonalization pass.
pub fn complete_unitary_with_first_column<R: RngCore>(
    first: ArrayView1<C64>,
    rng: &mut R,
) -> Result<Array2<C64>> {
    let n = first.len();
    let mut cols: Vec<Array1<C64>> = Vec::with_capacity(n);
    cols.push(first.to_owned());
    for _ in 1..n {
        let mut v = ortho_random_column(&cols, n, rng)?;
        let nv = norm(&v);
        v.mapv_inplace(|z| z / nv);
        cols.push(v);
    }
    let mut m = Array2::zeros((n, n));
    for (j, c) in cols.iter().enumerate() {
        m.column_mut(j).assign(c);
    }
    Ok(m)
}

fn ortho_random_column<R: RngCore>(
    cols: &[Array1<C64>],
    n: usize,
    rng: &mut R,
) -> Result<Array1<C64>> {
    for _attempt in 0..16 {
        let mut v = Array1::from_iter((0..n).map(|_| random_c64(rng)));
        for _pass in 0..2 {
            for c in cols {
                let proj = inner(c, &v);
                v.zip_mut_with(c, |x, y| *x -= proj * y);
            }
        }
        if norm(&v) > 1e-8 * (n as f64).sqrt() {
            return Ok(v);
        }
    }
    Err(Error::Numerical(
        "Gram-Schmidt completion failed: could not draw an independent vector".into(),
    ))
}

/// Dense eigendecomposition of a unitary matrix via LAPACK zgeev.
/// Returns (eigenphases in (−π, π], eigenvector columns), sorted by phase.
#[cfg(feature = "lapack")]
pub fn eig_unitary(u: &UnitaryOperator) -> Result<(Vec<f64>, Array2<C64>)> {
    use ndarray_linalg::Eig;
    let (vals, vecs) = u
        .mat()
        .eig()
        .map_err(|e| Error::Numerical(format!("zgeev failed: {e}")))?;
    let n = u.dim();
    let mut order: Vec<usize> = (0..n).collect();
    let phases: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
    order.sort_by(|&i, &j| phases[i].total_cmp(&phases[j]));
    let sorted_phases: Vec<f64> = order.iter().map(|&i| phases[i]).collect();
    let mut sorted_vecs = Array2::zeros((n, n));
    for (k, &i) in order.iter().enumerate() {
        let col = vecs.column(i);
        let nv = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for r in 0..n {
            sorted_vecs[[r, k]] = col[r] / nv;
        }
    }
    Ok((sorted_phases, sorted_vecs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_angle(-std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_angle(0.3) - 0.3).abs() < 1e-15);
        assert!((wrap_angle(-7.0) - (std::f64::consts::TAU - 7.0)).abs() < 1e-12);
    }

    #[test]
    fn circ_dist_shortest() {
        let pi = std::f64::consts::PI;
        assert!((circ_dist(pi - 0.1, -pi + 0.1) - 0.2).abs() < 1e-12);
        assert!((circ_dist(0.0, 0.3) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn unitarity_check_rejects_non_unitary() {
        let m = array![
            [C64::new(1.0, 0.0), C64::new(0.1, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        ];
        assert!(UnitaryOperator::new(m).is_err());
    }

    #[test]
    fn gram_schmidt_completion_is_unitary_and_deterministic() {
        let n = 16;
        let first = Array1::from_elem(n, C64::new(1.0 / (n as f64).sqrt(), 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = complete_unitary_with_first_column(first.view(), &mut rng).unwrap();
        assert!(unitarity_error(&m) < 1e-12);
        let mut rng2 = ChaCha8Rng::seed_from_u64(5);
        let m2 = complete_unitary_with_first_column(first.view(), &mut rng2).unwrap();
        assert_eq!(m, m2);
    }

    #[cfg(feature = "lapack")]
    #[test]
    fn eig_recovers_diagonal_phases() {
        let z = C64::new(0.0, 0.0);
        let m = array![
            [C64::new(1.0, 0.0), z],
            [z, C64::new(0.0, 1.0)]
        ];
        let u = UnitaryOperator::new(m).unwrap();
        let (phases, vecs) = eig_unitary(&u).unwrap();
        assert!((phases[0] - 0.0).abs() < 1e-12);
        assert!((phases[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(vecs.column(0)[0].norm() > 0.99);
    }
}
