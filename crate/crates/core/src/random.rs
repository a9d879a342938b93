//! Seeded random amplitudes, states and unitaries for tests and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::coin::{Coin, CoinLabel, ShiftKind};
use crate::linalg::{Mat4, Vec4, C64};
use crate::state::{Amplitude4, Space, TorusState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed unit vector in ℂ⁴.
pub fn random_alpha(rng: &mut impl Rng) -> Amplitude4 {
    Amplitude4::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)).normalized()
}

/// Gaussian amplitudes at every site, normalised to total norm 1.
pub fn random_state(rng: &mut impl Rng, n_side: usize) -> crate::Result<TorusState> {
    let s = TorusState::from_fn(n_side, Space::Position, |_, _| {
        Amplitude4::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng))
    })?;
    let norm = s.norm_sqr().sqrt();
    Ok(s.scaled(C64::new(1.0 / norm, 0.0)))
}

/// Haar-like unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng) -> Mat4 {
    loop {
        let cols: Vec<Vec4> = (0..4)
            .map(|_| Vec4::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)))
            .collect();
        let mut basis: Vec<Vec4> = Vec::with_capacity(4);
        for mut v in cols {
            // Two passes keep the basis orthonormal to machine precision.
            for _ in 0..2 {
                for b in &basis {
                    let proj = b.dotc(&v);
                    v -= b * proj;
                }
            }
            let norm = v.norm();
            if norm < 1e-6 {
                break;
            }
            basis.push(v / C64::new(norm, 0.0));
        }
        if basis.len() == 4 {
            return Mat4::from_columns(&basis);
        }
    }
}

pub fn random_coin(rng: &mut impl Rng, shift: ShiftKind) -> Coin {
    Coin::new(random_unitary(rng), shift, CoinLabel::Custom).expect("Gram-Schmidt output is unitary")
}
