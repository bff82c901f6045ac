//! Numerical tolerances shared by the engine, its diagnostics and the test
//! suites. All are absolute unless the name says otherwise.

/// Two closed forms for the same volume (lengths route vs angles route).
pub const FORMULA_VS_FORMULA: f64 = 1e-8;

/// Closed form vs the Klein-model quadrature oracle.
pub const FORMULA_VS_ORACLE: f64 = 1e-6;

/// Distance of `Im(z dU/dz)` from the nearest multiple of 2π at a root.
pub const RESIDUE_SNAP: f64 = 1e-6;

/// Bound on `|Re(z dU/dz)|` at a root.
pub const RESIDUE_REAL: f64 = 1e-8;

/// Mod-π defect of `2 dV/dl_i - A_i`.
pub const CONGRUENCE: f64 = 1e-7;

/// Central-difference step for derivatives of the volume functions.
pub const FD_STEP: f64 = 1e-5;

/// Finite differences must land within this of an analytic coset
/// representative before the integer shift is accepted...
pub const PARTIAL_COSET: f64 = 1e-4;

/// ...and within this after the shift.
pub const PARTIAL_AGREEMENT: f64 = 1e-7;

/// Relative bound on the imaginary part of `V` for length input.
pub const V_REAL_REL: f64 = 1e-9;

/// Bound on the discarded imaginary part of the reported volume for angle
/// input.
pub const ANGLE_IMAG: f64 = 1e-8;

/// Quadratic residual, relative to `|q0| + |q1| + |q2|`.
pub const QUADRATIC_RESIDUAL: f64 = 1e-10;

/// Eigenvalues below this times `‖G‖` count as zero.
pub const SIGNATURE_REL: f64 = 1e-10;

/// Cofactors below this times `‖G‖³` count as zero (ideal vertices).
pub const COFACTOR_REL: f64 = 1e-13;
