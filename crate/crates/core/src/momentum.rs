//! Momentum space: the Fourier transform on π_N², the matrices U(k₁,k₂) and the
//! spectral evolution path.
//!
//! Ψ̂(k₁,k₂) = (1/N)·Σ_x ω^{−(k₁x₁+k₂x₂)}Ψ(x₁,x₂), ω = exp(2πi/N), and the inverse uses
//! ω^{+(k·x)} with the same 1/N, so both maps are unitary on the N² grid. Under this
//! transform one step of the walk is Ψ̂ ↦ U(k)·Ψ̂ pointwise with
//! U(k₁,k₂) = diag(ω^{k₁}, ω^{−k₁}, ω^{k₂}, ω^{−k₂})·U.

use std::cmp::Ordering;

use nalgebra::linalg::Schur;
use rayon::prelude::*;

use crate::coin::Coin;
use crate::error::{Result, WalkError};
use crate::linalg::{max_abs, omega_pow, outer, principal_arg, unitarity_residual, Mat4, Vec4, C64};
use crate::state::{Amplitude4, Space, TorusState};

/// Reconstruction and unit-modulus tolerance of [`eigen_unitary`].
pub const EIGEN_TOL: f64 = 1e-10;

fn transform(state: &TorusState, sign: i64, to: Space) -> TorusState {
    let n = state.n_side();
    let twiddle: Vec<C64> = (0..n as i64).map(|e| omega_pow(n, sign * e)).collect();
    let tw = |k: usize, x: usize| twiddle[(k * x) % n];
    let src = state.as_slice();

    // Second coordinate first, then the first; each output row is independent.
    let mut tmp = vec![Amplitude4::ZERO; n * n];
    tmp.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
        for (k2, cell) in row.iter_mut().enumerate() {
            let mut acc = Amplitude4::ZERO;
            for x2 in 0..n {
                acc = acc + src[a * n + x2] * tw(k2, x2);
            }
            *cell = acc;
        }
    });
    let scale = C64::new(1.0 / n as f64, 0.0);
    let mut out = vec![Amplitude4::ZERO; n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(k1, row)| {
        for (k2, cell) in row.iter_mut().enumerate() {
            let mut acc = Amplitude4::ZERO;
            for x1 in 0..n {
                acc = acc + tmp[x1 * n + k2] * tw(k1, x1);
            }
            *cell = acc * scale;
        }
    });
    TorusState::from_grid(n, to, out)
}

pub fn dft_forward(state: &TorusState) -> Result<TorusState> {
    if state.space() != Space::Position {
        return Err(WalkError::SpaceMismatch {
            expected: Space::Position,
            found: state.space(),
        });
    }
    Ok(transform(state, -1, Space::Momentum))
}

pub fn dft_inverse(state: &TorusState) -> Result<TorusState> {
    if state.space() != Space::Momentum {
        return Err(WalkError::SpaceMismatch {
            expected: Space::Momentum,
            found: state.space(),
        });
    }
    Ok(transform(state, 1, Space::Position))
}

/// U(k₁,k₂) on π_N².
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumMatrix {
    pub k1: usize,
    pub k2: usize,
    pub n_side: usize,
    pub m: Mat4,
}

pub fn momentum_matrix(coin: &Coin, k1: usize, k2: usize, n_side: usize) -> Result<MomentumMatrix> {
    if n_side == 0 {
        return Err(WalkError::EmptyLattice);
    }
    for k in [k1, k2] {
        if k >= n_side {
            return Err(WalkError::IndexOutOfRange {
                what: "momentum",
                index: k,
                bound: n_side,
            });
        }
    }
    let (a, b) = (k1 as i64, k2 as i64);
    let phases = [
        omega_pow(n_side, a),
        omega_pow(n_side, -a),
        omega_pow(n_side, b),
        omega_pow(n_side, -b),
    ];
    Ok(MomentumMatrix {
        k1,
        k2,
        n_side,
        m: phase_rows(coin.matrix(), phases),
    })
}

/// diag(e^{iθ₁}, e^{−iθ₁}, e^{iθ₂}, e^{−iθ₂})·U for arbitrary real angles.
pub fn momentum_matrix_at(coin: &Coin, theta1: f64, theta2: f64) -> Mat4 {
    let phases = [
        C64::from_polar(1.0, theta1),
        C64::from_polar(1.0, -theta1),
        C64::from_polar(1.0, theta2),
        C64::from_polar(1.0, -theta2),
    ];
    phase_rows(coin.matrix(), phases)
}

fn phase_rows(u: &Mat4, phases: [C64; 4]) -> Mat4 {
    Mat4::from_fn(|r, col| phases[r] * u[(r, col)])
}

/// Eigenvalues λ_i and orthonormal eigenvectors v_i with U = Σ λ_i|v_i⟩⟨v_i|.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub eigenvalues: [C64; 4],
    pub eigenvectors: [Vec4; 4],
}

impl EigenSystem {
    pub fn reconstruct(&self) -> Mat4 {
        self.eigenvalues
            .iter()
            .zip(self.eigenvectors.iter())
            .fold(Mat4::zeros(), |acc, (l, v)| acc + outer(v) * *l)
    }

    /// max_i ‖m·v_i − λ_i·v_i‖₂
    pub fn pair_residual(&self, m: &Mat4) -> f64 {
        self.eigenvalues
            .iter()
            .zip(self.eigenvectors.iter())
            .map(|(l, v)| (m * v - v * *l).norm())
            .fold(0.0, f64::max)
    }

    /// ‖V†V − I‖_max
    pub fn orthonormality_residual(&self) -> f64 {
        let v = Mat4::from_columns(&self.eigenvectors);
        max_abs(&(v.adjoint() * v - Mat4::identity()))
    }

    /// Σ |v_i⟩⟨v_i| over the eigenvalues within `tol` of `lambda`.
    pub fn projector(&self, lambda: C64, tol: f64) -> Mat4 {
        self.eigenvalues
            .iter()
            .zip(self.eigenvectors.iter())
            .filter(|(l, _)| (**l - lambda).norm() <= tol)
            .fold(Mat4::zeros(), |acc, (_, v)| acc + outer(v))
    }

    pub fn multiplicity(&self, lambda: C64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|l| (**l - lambda).norm() <= tol)
            .count()
    }
}

/// Full eigendecomposition of a unitary 4×4 matrix.
///
/// For a normal matrix the complex Schur form is diagonal, so the Schur vectors are
/// already an orthonormal eigenbasis, degenerate eigenspaces included. Eigenpairs are
/// sorted by principal argument in [0, 2π); ties fall back to the rounded eigenvector
/// entries so the order is reproducible.
pub fn eigen_unitary(m: &Mat4) -> Result<EigenSystem> {
    let schur = Schur::try_new(*m, 1e-15, 10_000)
        .ok_or_else(|| WalkError::Eigen("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let mut pairs: Vec<(C64, Vec4)> = (0..4).map(|i| (t[(i, i)], q.column(i).into_owned())).collect();
    pairs.sort_by(|a, b| order_key(a).partial_cmp(&order_key(b)).unwrap_or(Ordering::Equal));
    let es = EigenSystem {
        eigenvalues: [pairs[0].0, pairs[1].0, pairs[2].0, pairs[3].0],
        eigenvectors: [pairs[0].1, pairs[1].1, pairs[2].1, pairs[3].1],
    };
    let recon = max_abs(&(es.reconstruct() - m));
    let modulus = es
        .eigenvalues
        .iter()
        .map(|l| (l.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if recon > EIGEN_TOL || modulus > EIGEN_TOL {
        return Err(WalkError::NotUnitary {
            residual: unitarity_residual(m).max(recon),
        });
    }
    Ok(es)
}

fn order_key((lambda, v): &(C64, Vec4)) -> Vec<f64> {
    let round = |x: f64| (x * 1e9).round() / 1e9;
    let mut key = vec![round(principal_arg(*lambda))];
    key.extend(v.iter().flat_map(|z| [round(z.re), round(z.im)]));
    key
}

pub fn eigensystem(mm: &MomentumMatrix) -> Result<EigenSystem> {
    eigen_unitary(&mm.m)
}

/// Σ λ_iⁿ |v_i⟩⟨v_i|.
pub fn spectral_power(es: &EigenSystem, steps: usize) -> Mat4 {
    if steps == 0 {
        return Mat4::identity();
    }
    es.eigenvalues
        .iter()
        .zip(es.eigenvectors.iter())
        .fold(Mat4::zeros(), |acc, (l, v)| acc + outer(v) * l.powu(steps as u32))
}

/// Evolution by diagonalising every U(k): Ψ_n = F⁻¹[ U(k)ⁿ·(FΨ₀)(k) ].
pub fn evolve_via_momentum(initial: &TorusState, coin: &Coin, steps: usize) -> Result<TorusState> {
    let n = initial.n_side();
    let mut hat = dft_forward(initial)?;
    if steps > 0 {
        let updated: Result<Vec<Amplitude4>> = hat
            .as_slice()
            .par_iter()
            .enumerate()
            .map(|(i, v)| {
                let mm = momentum_matrix(coin, i / n, i % n, n)?;
                let power = spectral_power(&eigensystem(&mm)?, steps);
                Ok(v.apply(&power))
            })
            .collect();
        hat.as_mut_slice().copy_from_slice(&updated?);
    }
    dft_inverse(&hat)
}
