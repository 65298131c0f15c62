//! Centralized numeric tolerances and size caps.

/// Tolerance defaults used by validating constructors and consistency checks.
///
/// One record for the whole crate so tests and applications agree on what
/// "Hermitian", "normalized" and "positive" mean numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max conjugate-transpose residual for Hermitian matrices.
    pub hermitian: f64,
    /// Max deviation of a state vector norm from 1.
    pub unit_norm: f64,
    /// Max deviation of a density operator trace from 1.
    pub trace_one: f64,
    /// Eigenvalues of positive operators may dip this far below 0.
    pub psd: f64,
    /// Eigenvalues below this are clamped to 0 before logarithms.
    pub eig_clamp: f64,
    /// Cap on symmetric-sector dimensions (capacity errors beyond it).
    pub dim_cap: usize,
    /// Cap on full-tensor dimensions `d^N` for the reference paths.
    pub tensor_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-12,
            unit_norm: 1e-10,
            trace_one: 1e-10,
            psd: 1e-10,
            eig_clamp: 1e-14,
            dim_cap: 1 << 20,
            tensor_cap: 4096,
        }
    }
}

impl Tolerances {
    /// Shared default instance.
    pub const fn standard() -> Self {
        Tolerances {
            hermitian: 1e-12,
            unit_norm: 1e-10,
            trace_one: 1e-10,
            psd: 1e-10,
            eig_clamp: 1e-14,
            dim_cap: 1 << 20,
            tensor_cap: 4096,
        }
    }
}

/// Crate-wide default tolerances.
pub const TOL: Tolerances = Tolerances::standard();
