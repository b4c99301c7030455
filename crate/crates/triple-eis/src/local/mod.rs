//! Local factors at finite primes and the elliptic-curve toolkit.

pub mod adjoint;
pub mod elliptic;
pub mod factor;
pub mod rep;
pub mod tate;
pub mod whittaker;

pub use adjoint::{ep_adjoint, gauss_sum};
pub use elliptic::{
    classify_curves, epsilon_signs, l_invariants, root_numbers_from_local_factors, trivial_zero_classify,
    trivial_zero_equations, EllipticCurveData, EpsilonSigns, LInvariants, OrdinaryParameter, Reduction, TrivialZeroCase,
};
pub use factor::{LinearFactor, RationalFunctionT};
pub use rep::{
    central_point, functional_equation_check, gamma_gl1, gamma_gl2, modified_euler_factor, triple_epsilon, triple_l,
    FunctionalEquation, LocalRepGL2, RepKind, SpecialBlock,
};
pub use tate::{j_of_period, tate_period};
pub use whittaker::{q_b_residue, whittaker_value_p, SchwartzFunction, WhittakerSection, WhittakerValue};
