//! Numerical kernel: special functions, adaptive quadrature, root finding
//! and 1-D search. All routines are pure and generic over [`Real`](crate::Real).

pub mod quadrature;
pub mod roots;
pub mod special;

pub use quadrature::{
    integrate, integrate_semi_infinite, integrate_semi_infinite_scaled, Quadrature,
    QuadratureSpec,
};
pub use roots::{find_root_bracketed, golden_section_max};
pub use special::{
    bessel_k0, bessel_k01_scaled, bessel_k1, erfc, erfcx, exp_integral_e1, gamma_fn, scaled_e1,
};
