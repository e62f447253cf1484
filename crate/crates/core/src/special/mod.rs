//! Special functions: complex log-Gamma, Bessel `J_ν` of complex order and
//! the Jacobi theta function.

pub mod bessel;
pub mod gamma;
pub mod theta;

pub use bessel::{
    bessel_j, bessel_j_hankel, bessel_j_poisson, bessel_j_series, bessel_j_sonine, lattice_family,
    LatticeFamily,
};
pub use gamma::{gamma, gamma_ratio, ln_gamma_real, log_gamma, recip_gamma};
pub use theta::{exp_power_sum, power_cutoff, theta, theta_modular_residual, TAIL_EPSILON};
