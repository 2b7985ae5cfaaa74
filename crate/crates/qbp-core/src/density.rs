// Copyright 2026 The qbp Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Dense density operators, partial trace, and a cyclic Jacobi eigensolver
//! for Hermitian matrices.
//!
//! Everything here works on row-major `Vec<Complex64>` matrices. Dimensions of
//! interest are small (the oracles cap out at a few thousand, tests at 64), so
//! a Jacobi sweep is plenty fast and keeps residuals near machine precision.

use crate::statevec::StateVector;
use num_complex::Complex64;
use thiserror::Error;

/// Hermiticity / trace tolerance for validated constructors.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum DensityError {
    #[error("matrix of length {0} is not square of dim {1}")]
    BadShape(usize, usize),
    #[error("matrix is not Hermitian (max |A - A^dag| = {0:.3e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1 beyond tolerance")]
    BadTrace(f64),
    #[error("keep set is empty")]
    EmptyKeep,
    #[error("keep set must be strictly ascending wire indices below {0}")]
    BadKeepSet(usize),
    #[error("dimension {0} is not a power of two (qubit structure required)")]
    NotQubits(usize),
    #[error("mixture weights must be non-negative and sum to 1, got {0}")]
    BadWeights(f64),
}

/// A Hermitian, unit-trace operator on a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityOperator {
    /// Validating constructor: Hermitian within [`HERMITIAN_TOL`] and trace 1.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self, DensityError> {
        if data.len() != dim * dim {
            return Err(DensityError::BadShape(data.len(), dim));
        }
        let op = Self { dim, data };
        let dev = op.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(DensityError::NotHermitian(dev));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(DensityError::BadTrace(tr.re));
        }
        Ok(op)
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in amps {
            for b in amps {
                data.push(a * b.conj());
            }
        }
        Self { dim, data }
    }

    /// Probability-weighted mixture of operators of equal dimension.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self, DensityError> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < -1e-15) || (total - 1.0).abs() > 1e-10 {
            return Err(DensityError::BadWeights(total));
        }
        let dim = parts[0].1.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (w, op) in parts {
            for (d, s) in data.iter_mut().zip(&op.data) {
                *d += s * *w;
            }
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..=r {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Max entrywise distance to another operator.
    pub fn max_distance(&self, other: &DensityOperator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Scale by a real factor (used for sub-normalized branch blocks).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Sum of two equal-dimension operators.
    pub fn add(&self, other: &DensityOperator) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Entrywise difference weighted by priors, `w0*self - w1*other`.
    pub fn weighted_diff(&self, w0: f64, other: &DensityOperator, w1: f64) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * w0 - b * w1)
                .collect(),
        }
    }

    /// `U rho U^dag` for a dense unitary `u` (row-major, same dimension).
    pub fn conjugated(&self, u: &[Complex64]) -> Result<Self, DensityError> {
        let d = self.dim;
        if u.len() != d * d {
            return Err(DensityError::BadShape(u.len(), d));
        }
        // tmp = U rho
        let mut tmp = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let urk = u[r * d + k];
                if urk.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..d {
                    tmp[r * d + c] += urk * self.data[k * d + c];
                }
            }
        }
        // out = tmp U^dag
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += tmp[r * d + k] * u[c * d + k].conj();
                }
                out[r * d + c] = acc;
            }
        }
        Ok(Self { dim: d, data: out })
    }

    /// Tensor product, `self` on the high wires.
    pub fn tensor(&self, other: &DensityOperator) -> Self {
        let d1 = self.dim;
        let d2 = other.dim;
        let d = d1 * d2;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r1 in 0..d1 {
            for c1 in 0..d1 {
                let a = self.entry(r1, c1);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for r2 in 0..d2 {
                    for c2 in 0..d2 {
                        data[(r1 * d2 + r2) * d + (c1 * d2 + c2)] = a * other.entry(r2, c2);
                    }
                }
            }
        }
        Self { dim: d, data }
    }

    /// Partial trace keeping the listed wires (strictly ascending), assuming
    /// qubit structure with wire 0 the most significant index bit. Preserves
    /// trace and Hermiticity.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self, DensityError> {
        if self.dim & (self.dim - 1) != 0 {
            return Err(DensityError::NotQubits(self.dim));
        }
        let m = self.dim.trailing_zeros() as usize;
        if keep.is_empty() {
            return Err(DensityError::EmptyKeep);
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&w| w >= m) {
            return Err(DensityError::BadKeepSet(m));
        }
        let traced: Vec<usize> = (0..m).filter(|w| !keep.contains(w)).collect();
        let kd = 1usize << keep.len();
        let td = 1usize << traced.len();
        // expand a (keep-index, traced-index) pair into a full basis index
        let expand = |ki: usize, ti: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &w) in keep.iter().enumerate() {
                if ki >> (keep.len() - 1 - pos) & 1 == 1 {
                    idx |= 1 << (m - 1 - w);
                }
            }
            for (pos, &w) in traced.iter().enumerate() {
                if ti >> (traced.len() - 1 - pos) & 1 == 1 {
                    idx |= 1 << (m - 1 - w);
                }
            }
            idx
        };
        let mut data = vec![Complex64::new(0.0, 0.0); kd * kd];
        for r in 0..kd {
            for c in 0..kd {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..td {
                    acc += self.entry(expand(r, t), expand(c, t));
                }
                data[r * kd + c] = acc;
            }
        }
        Ok(Self { dim: kd, data })
    }

    /// Eigenvalues (descending) and matching eigenvectors of a Hermitian
    /// operator, via cyclic Jacobi sweeps.
    pub fn hermitian_eig(&self) -> Result<(Vec<f64>, Vec<Vec<Complex64>>), DensityError> {
        hermitian_eig(self.dim, &self.data)
    }

    /// Eigenvalues only, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, DensityError> {
        Ok(self.hermitian_eig()?.0)
    }

    /// Trace norm `||A||_1 = sum |lambda_i|`.
    pub fn trace_norm(&self) -> Result<f64, DensityError> {
        Ok(self.eigenvalues()?.iter().map(|l| l.abs()).sum())
    }

    /// Von Neumann entropy in bits; eigenvalues below 1e-15 contribute 0.
    pub fn entropy_bits(&self) -> Result<f64, DensityError> {
        Ok(self
            .eigenvalues()?
            .iter()
            .filter(|&&l| l > 1e-15)
            .map(|&l| -l * l.log2())
            .sum())
    }
}

/// Jacobi eigendecomposition of a Hermitian matrix given as row-major data.
///
/// Returns eigenvalues in descending order and the matching eigenvectors.
/// Rejects inputs whose Hermiticity deviation exceeds [`HERMITIAN_TOL`].
pub fn hermitian_eig(
    dim: usize,
    data: &[Complex64],
) -> Result<(Vec<f64>, Vec<Vec<Complex64>>), DensityError> {
    if data.len() != dim * dim {
        return Err(DensityError::BadShape(data.len(), dim));
    }
    let mut dev: f64 = 0.0;
    for r in 0..dim {
        for c in 0..=r {
            dev = dev.max((data[r * dim + c] - data[c * dim + r].conj()).norm());
        }
    }
    if dev > HERMITIAN_TOL {
        return Err(DensityError::NotHermitian(dev));
    }

    let mut a: Vec<Complex64> = data.to_vec();
    // symmetrize away the tolerated deviation so sweeps converge cleanly
    for r in 0..dim {
        for c in 0..r {
            let avg = (a[r * dim + c] + a[c * dim + r].conj()) * 0.5;
            a[r * dim + c] = avg;
            a[c * dim + r] = avg.conj();
        }
        let d = a[r * dim + r];
        a[r * dim + r] = Complex64::new(d.re, 0.0);
    }

    let mut v = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        v[i * dim + i] = Complex64::new(1.0, 0.0);
    }

    let scale: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let stop = (scale * 1e-15).powi(2);
    for _sweep in 0..60 {
        let off: f64 = (0..dim)
            .flat_map(|r| (0..r).map(move |c| (r, c)))
            .map(|(r, c)| a[r * dim + c].norm_sqr())
            .sum();
        if off <= stop {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                let abs = apq.norm();
                if abs <= scale * 1e-18 {
                    continue;
                }
                let phase = apq / abs;
                let app = a[p * dim + p].re;
                let aqq = a[q * dim + q].re;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotation R: R[p][p]=c, R[p][q]=s, R[q][p]=-s*conj(phase),
                // R[q][q]=c*conj(phase); apply A <- R^dag A R, V <- V R.
                let rpp = Complex64::new(c, 0.0);
                let rpq = Complex64::new(s, 0.0);
                let rqp = -phase.conj() * s;
                let rqq = phase.conj() * c;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = akp * rpp + akq * rqp;
                    a[k * dim + q] = akp * rpq + akq * rqq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = rpp.conj() * apk + rqp.conj() * aqk;
                    a[q * dim + k] = rpq.conj() * apk + rqq.conj() * aqk;
                }
                a[p * dim + q] = Complex64::new(0.0, 0.0);
                a[q * dim + p] = Complex64::new(0.0, 0.0);
                a[p * dim + p] = Complex64::new(a[p * dim + p].re, 0.0);
                a[q * dim + q] = Complex64::new(a[q * dim + q].re, 0.0);
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = vkp * rpp + vkq * rqp;
                    v[k * dim + q] = vkp * rpq + vkq * rqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        a[j * dim + j]
            .re
            .partial_cmp(&a[i * dim + i].re)
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * dim + i].re).collect();
    let eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&col| (0..dim).map(|row| v[row * dim + col]).collect())
        .collect();
    Ok((eigenvalues, eigenvectors))
}

/// Dense 4x4 CNOT (control = high wire) as complex data, for conjugations.
pub fn cnot_matrix() -> Vec<Complex64> {
    let mut u = vec![Complex64::new(0.0, 0.0); 16];
    for (r, c) in [(0usize, 0usize), (1, 1), (2, 3), (3, 2)] {
        u[r * 4 + c] = Complex64::new(1.0, 0.0);
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::pure_state;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        let mut a = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            a[r * dim + r] = Complex64::new(rng.gen::<f64>() - 0.5, 0.0);
            for c in 0..r {
                let z = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                a[r * dim + c] = z;
                a[c * dim + r] = z.conj();
            }
        }
        a
    }

    #[test]
    fn eig_diagonal_matrix_sorted() {
        let d = 4;
        let mut data = vec![Complex64::new(0.0, 0.0); 16];
        for (i, &x) in [0.3, -1.0, 2.5, 0.7].iter().enumerate() {
            data[i * d + i] = Complex64::new(x, 0.0);
        }
        let (vals, _) = hermitian_eig(d, &data).unwrap();
        assert_eq!(vals, vec![2.5, 0.7, 0.3, -1.0]);
    }

    #[test]
    fn eig_sigma_x() {
        let data = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let (vals, _) = hermitian_eig(2, &data).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_average_pure_state_pair() {
        // 0.5(|t><t| + |-t><-t|) at t = pi/3 has eigenvalues (0.75, 0.25).
        let theta = PI / 3.0;
        let plus = DensityOperator::from_pure(&pure_state(theta, 1).unwrap());
        let minus = DensityOperator::from_pure(&pure_state(theta, -1).unwrap());
        let avg = DensityOperator::mixture(&[(0.5, plus), (0.5, minus)]).unwrap();
        let vals = avg.eigenvalues().unwrap();
        assert!((vals[0] - 0.75).abs() < 1e-12);
        assert!((vals[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn eig_residual_random_hermitians() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &dim in &[2usize, 3, 8, 16, 64] {
            let a = random_hermitian(dim, &mut rng);
            let (vals, vecs) = hermitian_eig(dim, &a).unwrap();
            for (lam, vec) in vals.iter().zip(&vecs) {
                // ||A v - lambda v||
                let mut resid = 0.0f64;
                for r in 0..dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..dim {
                        acc += a[r * dim + c] * vec[c];
                    }
                    resid += (acc - vec[r] * *lam).norm_sqr();
                }
                assert!(resid.sqrt() < 1e-9, "dim {dim} residual {}", resid.sqrt());
            }
            // reconstruction: A = sum lambda v v^dag
            let mut recon = vec![Complex64::new(0.0, 0.0); dim * dim];
            for (lam, vec) in vals.iter().zip(&vecs) {
                for r in 0..dim {
                    for c in 0..dim {
                        recon[r * dim + c] += vec[r] * vec[c].conj() * *lam;
                    }
                }
            }
            let worst = recon
                .iter()
                .zip(&a)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0f64, f64::max);
            assert!(worst < 1e-9, "dim {dim} reconstruction {worst}");
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let data = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(matches!(
            hermitian_eig(2, &data),
            Err(DensityError::NotHermitian(_))
        ));
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let rho = DensityOperator::from_pure(&pure_state(0.8, 1).unwrap());
        let sigma = DensityOperator::from_pure(&pure_state(2.0, -1).unwrap());
        let joint = rho.tensor(&sigma);
        let back = joint.partial_trace(&[0]).unwrap();
        assert!(back.max_distance(&rho) < 1e-12);
        let back2 = joint.partial_trace(&[1]).unwrap();
        assert!(back2.max_distance(&sigma) < 1e-12);
        assert!((joint.partial_trace(&[0]).unwrap().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let bell = StateVector::from_amplitudes(vec![
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let rho = DensityOperator::from_pure(&bell);
        for wire in 0..2 {
            let red = rho.partial_trace(&[wire]).unwrap();
            assert!((red.entry(0, 0).re - 0.5).abs() < 1e-12);
            assert!((red.entry(1, 1).re - 0.5).abs() < 1e-12);
            assert!(red.entry(0, 1).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_empty_keep_errors() {
        let rho = DensityOperator::from_pure(&pure_state(0.3, 1).unwrap());
        assert_eq!(rho.partial_trace(&[]), Err(DensityError::EmptyKeep));
    }

    #[test]
    fn trace_norm_of_pure_state_difference() {
        // 0.5||rho_+ - rho_-||_1 = sin theta for the pure-state pair.
        let theta = 1.1;
        let plus = DensityOperator::from_pure(&pure_state(theta, 1).unwrap());
        let minus = DensityOperator::from_pure(&pure_state(theta, -1).unwrap());
        let diff = plus.weighted_diff(0.5, &minus, 0.5);
        assert!((diff.trace_norm().unwrap() - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn validated_constructor_rejects_bad_trace() {
        let data = vec![
            Complex64::new(0.7, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.7, 0.0),
        ];
        assert!(matches!(
            DensityOperator::new(2, data),
            Err(DensityError::BadTrace(_))
        ));
    }
}
