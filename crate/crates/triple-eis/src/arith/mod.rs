//! Exact arithmetic substrate: p-adic numbers, residue rings, cyclotomic
//! quotients, polynomials, quadratic numbers and Iwasawa power series.

pub mod cyclotomic;
pub mod iwasawa;
pub mod padic;
pub mod point;
pub mod poly;
pub mod quadratic;
pub mod zmod;

pub use cyclotomic::{Coefficient, CyclotomicElement};
pub use iwasawa::{diamond_bracket, diamond_power, IwasawaSeries, Variable};
pub use padic::{iwasawa_log, padic_log, teichmuller, PadicNumber};
pub use point::{ArithmeticPoint, FiniteCharacter};
pub use poly::{Field, Poly};
pub use quadratic::QuadraticNumber;
pub use zmod::Zmod;
