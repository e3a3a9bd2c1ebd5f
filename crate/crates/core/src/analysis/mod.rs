//! Threshold and steady-state analysis: next-generation matrix and `R0`,
//! equilibria, the fractional stability test, normalized sensitivity indices,
//! and the Mittag-Leffler function.

mod equilibrium;
mod mittag_leffler;
mod ngm;
mod sensitivity;
mod stability;

pub use equilibrium::{
    disease_free_equilibrium, endemic_equilibrium, lambda_residual, EquilibriumKind,
    EquilibriumPoint,
};
pub use mittag_leffler::mittag_leffler;
pub use ngm::{
    next_generation_matrices, r0_closed_form, r0_spectral, susceptibility_factor, NGMatrices,
};
pub use sensitivity::{
    sensitivity_index, sensitivity_indices, Magnitude, SensitivityEntry, SensitivityReport, Sign,
    NO_EFFECT,
};
pub use stability::{
    jacobian, stability_check, Eigenvalue, Jacobian, StabilityReport, Verdict, MARGINAL_BAND,
};
