//! Exact symbolic calculus for the archimedean coefficient polynomials and
//! constants: `omega*`, the operators `D_lambda`, `K^M`, the coefficients
//! `w_{0,b,c}`, Gamma-factor bookkeeping and the raised Whittaker
//! functions. `pi` and `i` are formal symbols throughout; the only floating
//! point code lives in [`numeric`].

pub mod coefficient;
pub mod gamma;
pub mod maass;
pub mod numeric;
pub mod omega;
pub mod sympoly;

pub use coefficient::{
    binomial_identity, coefficient_indices, constant_check, gamma_star, is_balanced, q_coefficient_symbolic, r_range,
    w_coefficient, w_coefficient_check, CoefficientCheck, CoefficientIndices, ConstantCheck,
};
pub use gamma::{gamma, gamma_c, gamma_m, GammaValue};
pub use maass::{maass_shimura, motivic_gamma, whittaker_value};
pub use omega::{
    apply_d_lambda, k_polynomial, leading_term_check, omega_d_lambda, omega_star, parity_vanishing_holds, LeadingTerm,
    ParityType,
};
pub use sympoly::{Monomial, SymPoly, Var};
