//! Coin operators.
//!
//! A [`Coin`] bundles the 4×4 unitary that is applied at every site with the shift
//! it was built for. The local update rule is the same for both shifts; the
//! flip-flop variant of a coin is the moving-shift coin left-multiplied by the
//! pairwise swap (1↔2, 3↔4), so the shift is already contained in the matrix.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{c, mat_from_rows, swap_matrix, unitarity_residual, Mat4, C64, I, ONE, ZERO};

/// Tolerance of the unitarity check applied to every constructed coin.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShiftKind {
    #[serde(rename = "ms")]
    Moving,
    #[serde(rename = "ff")]
    FlipFlop,
}

impl ShiftKind {
    pub fn tag(self) -> &'static str {
        match self {
            ShiftKind::Moving => "ms",
            ShiftKind::FlipFlop => "ff",
        }
    }
}

impl fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ShiftKind {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ms" | "moving" => Ok(ShiftKind::Moving),
            "ff" | "flip-flop" | "flipflop" => Ok(ShiftKind::FlipFlop),
            other => Err(WalkError::Parse(format!("unknown shift '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoinLabel {
    Fourier,
    Grover,
    Custom,
}

impl fmt::Display for CoinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoinLabel::Fourier => "fourier",
            CoinLabel::Grover => "grover",
            CoinLabel::Custom => "custom",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coin {
    u: Mat4,
    shift: ShiftKind,
    label: CoinLabel,
}

impl Coin {
    /// Wraps `u` after checking ‖u·u† − I‖_max ≤ 1e−12.
    pub fn new(u: Mat4, shift: ShiftKind, label: CoinLabel) -> Result<Self> {
        let residual = unitarity_residual(&u);
        if residual.is_nan() || residual > UNITARITY_TOL {
            return Err(WalkError::NotUnitary { residual });
        }
        Ok(Coin { u, shift, label })
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.u
    }

    pub fn shift(&self) -> ShiftKind {
        self.shift
    }

    pub fn label(&self) -> CoinLabel {
        self.label
    }

    /// Row `j` (0-based) of the coin, i.e. the row of U_j = P_j·U that is not zero.
    pub fn row(&self, j: usize) -> [C64; 4] {
        [self.u[(j, 0)], self.u[(j, 1)], self.u[(j, 2)], self.u[(j, 3)]]
    }

    /// Parses `{"shift":"ms"|"ff","matrix":[[[re,im],..4],..4]}`. The matrix is taken
    /// as the coin applied at each site.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CoinDoc = serde_json::from_str(text)?;
        let mut rows = [[ZERO; 4]; 4];
        for (r, row) in doc.matrix.iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                rows[r][col] = c(z[0], z[1]);
            }
        }
        Coin::new(mat_from_rows(rows), doc.shift, CoinLabel::Custom)
    }

    pub fn to_json(&self) -> String {
        let mut matrix = [[[0.0; 2]; 4]; 4];
        for (r, row) in matrix.iter_mut().enumerate() {
            for (col, z) in row.iter_mut().enumerate() {
                let v = self.u[(r, col)];
                *z = [v.re, v.im];
            }
        }
        serde_json::to_string(&CoinDoc {
            shift: self.shift,
            matrix,
        })
        .expect("coin document serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct CoinDoc {
    shift: ShiftKind,
    matrix: [[[f64; 2]; 4]; 4],
}

/// U^{(m)} of the Fourier walk: the 4-point DFT matrix scaled by 1/2.
pub fn fourier_coin_ms() -> Coin {
    let h = c(0.5, 0.0);
    let u = mat_from_rows([
        [ONE, ONE, ONE, ONE],
        [ONE, I, -ONE, -I],
        [ONE, -ONE, ONE, -ONE],
        [ONE, -I, -ONE, I],
    ]) * h;
    Coin {
        u,
        shift: ShiftKind::Moving,
        label: CoinLabel::Fourier,
    }
}

/// U^{(f)} of the Fourier walk, written out entrywise; equals swap·U^{(m)}.
pub fn fourier_coin_ff() -> Coin {
    let h = c(0.5, 0.0);
    let u = mat_from_rows([
        [ONE, I, -ONE, -I],
        [ONE, ONE, ONE, ONE],
        [ONE, -I, -ONE, I],
        [ONE, -ONE, ONE, -ONE],
    ]) * h;
    Coin {
        u,
        shift: ShiftKind::FlipFlop,
        label: CoinLabel::Fourier,
    }
}

pub fn fourier_coin(shift: ShiftKind) -> Coin {
    match shift {
        ShiftKind::Moving => fourier_coin_ms(),
        ShiftKind::FlipFlop => fourier_coin_ff(),
    }
}

/// The Grover coin 2|s⟩⟨s| − I₄ with |s⟩ = (1,1,1,1)/2; the FF variant is swap·(MS variant).
pub fn grover_coin(shift: ShiftKind) -> Coin {
    let u = Mat4::from_fn(|r, col| if r == col { c(-0.5, 0.0) } else { c(0.5, 0.0) });
    let u = match shift {
        ShiftKind::Moving => u,
        ShiftKind::FlipFlop => swap_matrix() * u,
    };
    Coin {
        u,
        shift,
        label: CoinLabel::Grover,
    }
}

/// P_j for j ∈ {1,2,3,4}: the diagonal projector onto component j.
pub fn projection(j: usize) -> Result<Mat4> {
    if !(1..=4).contains(&j) {
        return Err(WalkError::IndexOutOfRange {
            what: "projection",
            index: j,
            bound: 5,
        });
    }
    Ok(Mat4::from_fn(|r, col| {
        if r == col && r == j - 1 {
            ONE
        } else {
            ZERO
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det4, max_abs};

    #[test]
    fn fourier_ms_entries() {
        let u = fourier_coin_ms();
        assert_eq!(u.matrix()[(1, 1)], c(0.0, 0.5));
        assert!(unitarity_residual(u.matrix()) <= 1e-15);
        assert!((det4(u.matrix()).norm() - 1.0).abs() < 1e-15);
        assert_eq!(u.shift(), ShiftKind::Moving);
    }

    #[test]
    fn fourier_ff_is_swapped_ms() {
        let ff = fourier_coin_ff();
        assert_eq!(ff.row(1), [c(0.5, 0.0); 4]);
        let prod = swap_matrix() * fourier_coin_ms().matrix();
        assert!(max_abs(&(prod - ff.matrix())) <= 1e-15);
        assert!(unitarity_residual(ff.matrix()) <= 1e-15);
    }

    #[test]
    fn grover_rows_sum_to_one() {
        for shift in [ShiftKind::Moving, ShiftKind::FlipFlop] {
            let g = grover_coin(shift);
            for j in 0..4 {
                let s: C64 = g.row(j).iter().sum();
                assert!((s - ONE).norm() < 1e-15);
            }
            assert!(unitarity_residual(g.matrix()) <= 1e-15);
        }
    }

    #[test]
    fn projections_resolve_identity() {
        let sum = (1..=4).map(|j| projection(j).unwrap()).fold(Mat4::zeros(), |a, b| a + b);
        assert_eq!(sum, Mat4::identity());
        assert_eq!(projection(1).unwrap()[(0, 0)], ONE);
        assert!(projection(0).is_err());
        assert!(projection(5).is_err());
    }

    #[test]
    fn projection_picks_a_row() {
        let u = fourier_coin_ms();
        let p = projection(2).unwrap() * u.matrix();
        for r in 0..4 {
            for col in 0..4 {
                let expected = if r == 1 { u.matrix()[(r, col)] } else { ZERO };
                assert_eq!(p[(r, col)], expected);
            }
        }
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let g = grover_coin(ShiftKind::FlipFlop);
        let back = Coin::from_json(&g.to_json()).unwrap();
        assert_eq!(back.matrix(), g.matrix());
        assert_eq!(back.shift(), ShiftKind::FlipFlop);
        assert_eq!(back.label(), CoinLabel::Custom);

        let bad = r#"{"shift":"ms","matrix":[[[1,0],[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#;
        assert!(matches!(Coin::from_json(bad), Err(WalkError::NotUnitary { .. })));
        assert!(Coin::from_json(r#"{"shift":"xx","matrix":[]}"#).is_err());
    }

    #[test]
    fn shift_parsing() {
        assert_eq!("MS".parse::<ShiftKind>().unwrap(), ShiftKind::Moving);
        assert_eq!("ff".parse::<ShiftKind>().unwrap(), ShiftKind::FlipFlop);
        assert!("diag".parse::<ShiftKind>().is_err());
    }
}
