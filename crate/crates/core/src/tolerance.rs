//! The single set of numerical tolerances used across the crate.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bound on `||M - M^dagger||_F` for a matrix to count as hermitian.
    pub hermiticity: f64,
    /// Eigenvalues down to `-psd_clip` are clipped to zero instead of rejected.
    pub psd_clip: f64,
    /// Reconstruction bound for square roots, Choi round trips and trace-preservation.
    pub reconstruction: f64,
    /// Off-diagonal Frobenius norm at which the Jacobi sweeps stop (relative to `||M||_F`).
    pub jacobi: f64,
    pub jacobi_max_sweeps: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-10,
        psd_clip: 1e-10,
        reconstruction: 1e-9,
        jacobi: 1e-12,
        jacobi_max_sweeps: 100,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
