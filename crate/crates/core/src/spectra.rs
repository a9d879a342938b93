//! Characteristic polynomials, closed-form eigenpairs on special momentum lines, and
//! the constant-root certificate.
//!
//! A walk on ℤ² can only localise if det(λI − U(k₁,k₂)) has a root λ that does not
//! depend on the momentum. [`constant_root_certificate`] takes the eigenvalues at one
//! reference momentum as candidates and keeps those that stay roots on a full M×M grid.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::coin::{fourier_coin_ff, Coin, CoinLabel, ShiftKind};
use crate::error::{Result, WalkError};
use crate::linalg::{c, omega_pow, Mat4, Vec4, C64, I, ONE, ZERO};
use crate::momentum::{eigen_unitary, momentum_matrix, EigenSystem};

/// Survival threshold for a constant root.
pub const CONSTANT_ROOT_TOL: f64 = 1e-8;

/// Below this norm a closed-form eigenvector is treated as the zero vector.
const ZERO_VECTOR_TOL: f64 = 1e-8;

/// Which closed-form polynomial a set of coefficients came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PolyFamily {
    /// A = cos k̃₁+sin k̃₁+cos k̃₂+sin k̃₂, B = (1+cos(k̃₁−k̃₂))/2
    FourierMs { a: f64, b: f64 },
    /// C = cos k̃₁ − cos k̃₂, D = (1−cos(k̃₁−k̃₂))/2
    FourierFf { c: f64, d: f64 },
    /// Expanded numerically from a matrix.
    Numeric,
}

/// Monic quartic Σ coeffs[j]·λʲ with coeffs[4] = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticCoeffs {
    pub coeffs: [C64; 5],
    pub family: PolyFamily,
}

impl QuarticCoeffs {
    pub fn eval(&self, lambda: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, a| acc * lambda + a)
    }

    /// det(λI − m) expanded by the Faddeev–LeVerrier recursion.
    pub fn from_matrix(m: &Mat4) -> Self {
        let mut coeffs = [ZERO; 5];
        coeffs[4] = ONE;
        let mut mk = Mat4::identity();
        for k in 1..=4 {
            if k > 1 {
                mk = m * mk + Mat4::identity() * coeffs[5 - k];
            }
            let am = m * mk;
            coeffs[4 - k] = -am.trace() / k as f64;
        }
        QuarticCoeffs {
            coeffs,
            family: PolyFamily::Numeric,
        }
    }
}

/// det(λI − U^{(m)}(k₁,k₂)) of the Fourier walk with moving shift, angles in radians.
pub fn char_poly_ms(k1: f64, k2: f64) -> QuarticCoeffs {
    let a = k1.cos() + k1.sin() + k2.cos() + k2.sin();
    let b = (1.0 + (k1 - k2).cos()) / 2.0;
    let p = c(0.5, 0.5);
    let q = c(0.5, -0.5);
    QuarticCoeffs {
        coeffs: [-I, p * a, -q * (2.0 * b), -p * a, ONE],
        family: PolyFamily::FourierMs { a, b },
    }
}

/// det(λI − U^{(f)}(k₁,k₂)) of the Fourier walk with flip-flop shift.
pub fn char_poly_ff(k1: f64, k2: f64) -> QuarticCoeffs {
    let cc = k1.cos() - k2.cos();
    let d = (1.0 - (k1 - k2).cos()) / 2.0;
    let q = c(0.5, -0.5);
    QuarticCoeffs {
        coeffs: [-I, I * cc, q * (2.0 * d), c(-cc, 0.0), ONE],
        family: PolyFamily::FourierFf { c: cc, d },
    }
}

pub fn char_poly(shift: ShiftKind, k1: f64, k2: f64) -> QuarticCoeffs {
    match shift {
        ShiftKind::Moving => char_poly_ms(k1, k2),
        ShiftKind::FlipFlop => char_poly_ff(k1, k2),
    }
}

fn check_unit(lambda: C64) -> Result<()> {
    if (lambda.norm() - 1.0).abs() > 1e-8 {
        return Err(WalkError::InvalidArgument(format!(
            "|lambda| = {} is not 1",
            lambda.norm()
        )));
    }
    Ok(())
}

/// Residual of the real relation satisfied by x = Re λ, y = Im λ for a unit-modulus root:
/// MS: x² − y² − 2xy + Ay − B; FF: x² − y² − 2xy − C(x − y) + D.
pub fn real_imag_residual(coeffs: &QuarticCoeffs, lambda: C64) -> Result<f64> {
    check_unit(lambda)?;
    let (x, y) = (lambda.re, lambda.im);
    let base = x * x - y * y - 2.0 * x * y;
    match coeffs.family {
        PolyFamily::FourierMs { a, b } => Ok((base + a * y - b).abs()),
        PolyFamily::FourierFf { c, d } => Ok((base - c * (x - y) + d).abs()),
        PolyFamily::Numeric => Err(WalkError::MissingShiftTag),
    }
}

/// |∂/∂k₁ det(λI − U(k₁,k₂))| at fixed λ for the Fourier walk.
pub fn derivative_residual(shift: ShiftKind, k1: f64, k2: f64, lambda: C64) -> Result<f64> {
    check_unit(lambda)?;
    let l2 = lambda * lambda;
    let l3 = l2 * lambda;
    let value = match shift {
        ShiftKind::Moving => {
            let p = c(0.5, 0.5);
            let q = c(0.5, -0.5);
            let g = -k1.sin() + k1.cos();
            -p * g * l3 + q * (k1 - k2).sin() * l2 + p * g * lambda
        }
        ShiftKind::FlipFlop => {
            let q = c(0.5, -0.5);
            l3 * k1.sin() + q * (k1 - k2).sin() * l2 - I * k1.sin() * lambda
        }
    };
    Ok(value.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsLine {
    /// (k₁,k₂) = (0,0)
    Origin,
    /// (k₁,k₂) = (k,k)
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfLine {
    /// (k₁,k₂) = (k,k)
    Diagonal,
    /// (k₁,k₂) = (k, N−k)
    AntiDiagonal,
}

fn check_index(k: usize, n_side: usize) -> Result<()> {
    if n_side == 0 {
        return Err(WalkError::EmptyLattice);
    }
    if k >= n_side {
        return Err(WalkError::IndexOutOfRange {
            what: "momentum",
            index: k,
            bound: n_side,
        });
    }
    Ok(())
}

/// Closed-form eigensystem of U^{(m)}(k,k) for the Fourier coin, in the order
/// λ = 1, ω^k, −1, iω^{−k}. `Origin` is the k = 0 case with eigenvalues 1, 1, −1, i.
pub fn eig_ms_special(line: MsLine, k: usize, n_side: usize) -> Result<EigenSystem> {
    check_index(k, n_side)?;
    if line == MsLine::Origin && k != 0 {
        return Err(WalkError::InvalidArgument(format!(
            "origin eigensystem requested at k = {k}"
        )));
    }
    let w = omega_pow(n_side, k as i64);
    let s = 1.0 / 2f64.sqrt();
    let h = 0.5;
    let v0 = Vec4::new(w, ONE, -w, ONE) * c(h, 0.0);
    let v1 = Vec4::new(ONE, ZERO, ONE, ZERO) * c(s, 0.0);
    let v2 = Vec4::new(w, -ONE, -w, -ONE) * c(h, 0.0);
    let v3 = Vec4::new(ZERO, ONE, ZERO, -ONE) * c(s, 0.0);
    Ok(EigenSystem {
        eigenvalues: [ONE, w, -ONE, I * w.conj()],
        eigenvectors: [v0, v1, v2, v3],
    })
}

/// Closed-form eigenpairs of U^{(f)} on a special line, with per-pair fallback to the
/// numerical eigenvector where the formula degenerates to the zero vector.
#[derive(Clone, Debug, PartialEq)]
pub struct FfSpecialEigen {
    pub eigen: EigenSystem,
    /// `fallback[j]` is set when pair j came from the numerical solver.
    pub fallback: [bool; 4],
}

impl FfSpecialEigen {
    pub fn used_fallback(&self) -> bool {
        self.fallback.iter().any(|&f| f)
    }
}

/// The four roots λ⁴ = i, i.e. e^{iπ(1+4j)/8}.
pub fn fourth_roots_of_i() -> [C64; 4] {
    [0, 1, 2, 3].map(|j| C64::from_polar(1.0, PI * (1 + 4 * j) as f64 / 8.0))
}

/// Roots of λ⁴ + (1−i)sin²k̃·λ² − i from the ± closed forms.
pub fn anti_diagonal_roots(k_angle: f64) -> [C64; 4] {
    let s2 = k_angle.sin().powi(2);
    let r = (2.0 - s2 * s2).sqrt();
    let first = c((2.0 - s2 + r).sqrt(), (2.0 + s2 - r).max(0.0).sqrt()) * 0.5;
    let second = c((2.0 - s2 - r).max(0.0).sqrt(), -(2.0 + s2 + r).sqrt()) * 0.5;
    [first, -first, second, -second]
}

pub fn eig_ff_special(line: FfLine, k: usize, n_side: usize) -> Result<FfSpecialEigen> {
    check_index(k, n_side)?;
    let coin = fourier_coin_ff();
    let ki = k as i64;
    let w = omega_pow(n_side, ki);
    let wc = omega_pow(n_side, -ki);
    let (k2, lambdas, vectors): (usize, [C64; 4], [Vec4; 4]) = match line {
        FfLine::Diagonal => {
            let w2 = omega_pow(n_side, 2 * ki);
            let w2c = omega_pow(n_side, -2 * ki);
            let lambdas = fourth_roots_of_i();
            let vectors = lambdas.map(|l| {
                let a = l * l + I * w2c;
                let b = l * l + w2;
                Vec4::new(w * a * (l + w), wc * b * (l + wc), -w * a * (l - w), wc * b * (l - wc))
            });
            (k, lambdas, vectors)
        }
        FfLine::AntiDiagonal => {
            let angle = 2.0 * PI * k as f64 / n_side as f64;
            let s = angle.sin();
            let lambdas = anti_diagonal_roots(angle);
            let vectors = lambdas.map(|l| {
                let a = l + I * s;
                let b = l.conj() + I * s;
                Vec4::new(a * (ONE + l * w), b * (ONE + l * wc), a * (ONE - l * wc), -b * (ONE - l * w))
            });
            ((n_side - k) % n_side, lambdas, vectors)
        }
    };
    let mm = momentum_matrix(&coin, k, k2, n_side)?;
    let mut fallback = [false; 4];
    let mut numeric: Option<EigenSystem> = None;
    let mut normalized = [Vec4::zeros(); 4];
    for j in 0..4 {
        let norm = vectors[j].norm();
        if norm < ZERO_VECTOR_TOL {
            let es = match &numeric {
                Some(es) => es.clone(),
                None => {
                    let es = eigen_unitary(&mm.m)?;
                    numeric = Some(es.clone());
                    es
                }
            };
            let nearest = (0..4)
                .min_by(|&a, &b| {
                    (es.eigenvalues[a] - lambdas[j])
                        .norm()
                        .total_cmp(&(es.eigenvalues[b] - lambdas[j]).norm())
                })
                .expect("four eigenvalues");
            normalized[j] = es.eigenvectors[nearest];
            fallback[j] = true;
        } else {
            normalized[j] = vectors[j] / c(norm, 0.0);
        }
    }
    // Pair eigenvalues with vectors by the assignment minimising Σ‖Uv − λv‖.
    let mut best: Option<(f64, [usize; 4])> = None;
    for perm in permutations4() {
        let cost: f64 = (0..4)
            .map(|j| {
                let v = &normalized[perm[j]];
                (mm.m * v - v * lambdas[j]).norm()
            })
            .sum();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, perm));
        }
    }
    let (_, perm) = best.expect("24 permutations");
    Ok(FfSpecialEigen {
        eigen: EigenSystem {
            eigenvalues: lambdas,
            eigenvectors: perm.map(|p| normalized[p]),
        },
        fallback: perm.map(|p| fallback[p]),
    })
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    NoConstantRoot,
    ConstantRoots,
}

/// A root of the characteristic polynomial at the reference momentum.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCandidate {
    pub lambda: C64,
    /// max over the grid of |det(λI − U(k))|
    pub max_residual: f64,
    /// grid indices (t₁, t₂) where the maximum was attained
    pub worst_momentum: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationCertificate {
    pub coin_label: CoinLabel,
    pub shift: ShiftKind,
    pub grid_resolution: usize,
    pub candidates: Vec<RootCandidate>,
    pub constant_roots: Vec<C64>,
    pub verdict: Verdict,
}

impl LocalizationCertificate {
    pub fn has_root(&self, lambda: C64, tol: f64) -> bool {
        self.constant_roots.iter().any(|r| (r - lambda).norm() <= tol)
    }
}

/// Tests every eigenvalue of U(0,0) as a momentum-independent root on the grid
/// k̃ = 2π(t₁,t₂)/M.
pub fn constant_root_certificate(coin: &Coin, grid: usize) -> Result<LocalizationCertificate> {
    if grid < 8 {
        return Err(WalkError::InvalidArgument(format!(
            "grid resolution {grid} is below 8"
        )));
    }
    let reference = eigen_unitary(&momentum_matrix(coin, 0, 0, grid)?.m)?;
    let mut lambdas: Vec<C64> = Vec::new();
    for l in reference.eigenvalues {
        if lambdas.iter().all(|x| (x - l).norm() > CONSTANT_ROOT_TOL) {
            lambdas.push(l);
        }
    }
    let residuals: Vec<Vec<f64>> = (0..grid * grid)
        .into_par_iter()
        .map(|i| {
            let mm = momentum_matrix(coin, i / grid, i % grid, grid).expect("index in range");
            let poly = QuarticCoeffs::from_matrix(&mm.m);
            lambdas.iter().map(|&l| poly.eval(l).norm()).collect()
        })
        .collect();
    let candidates: Vec<RootCandidate> = lambdas
        .iter()
        .enumerate()
        .map(|(j, &lambda)| {
            let mut worst = (0.0, 0);
            for (i, r) in residuals.iter().enumerate() {
                if r[j] > worst.0 {
                    worst = (r[j], i);
                }
            }
            RootCandidate {
                lambda,
                max_residual: worst.0,
                worst_momentum: (worst.1 / grid, worst.1 % grid),
            }
        })
        .collect();
    let constant_roots: Vec<C64> = candidates
        .iter()
        .filter(|cand| cand.max_residual <= CONSTANT_ROOT_TOL)
        .map(|cand| cand.lambda)
        .collect();
    let verdict = if constant_roots.is_empty() {
        Verdict::NoConstantRoot
    } else {
        Verdict::ConstantRoots
    };
    Ok(LocalizationCertificate {
        coin_label: coin.label(),
        shift: coin.shift(),
        grid_resolution: grid,
        candidates,
        constant_roots,
        verdict,
    })
}

/// Momentum points covered by a spectrum sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumLine {
    Full,
    Diagonal,
    AntiDiagonal,
}

impl SpectrumLine {
    pub fn points(self, grid: usize) -> Vec<(usize, usize)> {
        match self {
            SpectrumLine::Full => (0..grid * grid).map(|i| (i / grid, i % grid)).collect(),
            SpectrumLine::Diagonal => (0..grid).map(|k| (k, k)).collect(),
            SpectrumLine::AntiDiagonal => (0..grid).map(|k| (k, (grid - k) % grid)).collect(),
        }
    }
}

/// Eigenvalues at one grid momentum with their polynomial residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub k1: usize,
    pub k2: usize,
    pub eigenvalues: [C64; 4],
    /// max_j |p(λ_j)| for the closed-form polynomial (Fourier) or the expanded one.
    pub poly_residual: f64,
    /// max_j of the real/imaginary relation residual; `None` without a closed form.
    pub relation_residual: Option<f64>,
}

/// Numerical eigenvalues of U(k̃) on the grid k̃ = 2π(k₁,k₂)/M.
pub fn spectrum_sweep(coin: &Coin, grid: usize, line: SpectrumLine) -> Result<Vec<SpectrumRow>> {
    if grid == 0 {
        return Err(WalkError::EmptyLattice);
    }
    let closed = coin.label() == CoinLabel::Fourier;
    line.points(grid)
        .into_par_iter()
        .map(|(k1, k2)| {
            let mm = momentum_matrix(coin, k1, k2, grid)?;
            let es = eigen_unitary(&mm.m)?;
            let poly = if closed {
                let t = 2.0 * PI / grid as f64;
                char_poly(coin.shift(), t * k1 as f64, t * k2 as f64)
            } else {
                QuarticCoeffs::from_matrix(&mm.m)
            };
            let mut poly_residual: f64 = 0.0;
            let mut relation: Option<f64> = if closed { Some(0.0) } else { None };
            for &l in &es.eigenvalues {
                poly_residual = poly_residual.max(poly.eval(l).norm());
                if let Some(r) = relation.as_mut() {
                    *r = r.max(real_imag_residual(&poly, l)?);
                }
            }
            Ok(SpectrumRow {
                k1,
                k2,
                eigenvalues: es.eigenvalues,
                poly_residual,
                relation_residual: relation,
            })
        })
        .collect()
}
