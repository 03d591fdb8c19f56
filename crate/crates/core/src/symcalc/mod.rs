//! Truncated symmetric power series in Chern roots.
//!
//! Series live either in the root basis ([`RootSeries`], monomials in
//! `x_1..x_m`) or in the Chern-class basis ([`ChernSeries`], monomials in
//! `c_1..c_m` graded by `deg c_k = k`). The genera are generated directly in
//! the Chern basis through power sums and Newton's identities; the root basis
//! is kept for conversions and as an independent route for checks.

mod chern;
mod genera;
mod identities;
mod roots;

pub use chern::{ChernSeries, DegreeWindow, Monomial};
pub use genera::{
    ch_exterior, ch_exterior_all, degree_part, power_sums, shift_derivative, todd,
    todd_generator, todd_prime,
};
pub use identities::{
    todd_log_derivative_expected, todd_log_derivative_low, verify_prop2_total_class, verify_prop2_total_class_with,
    verify_prop_total_class, verify_prop_total_class_with, DerivedToddResiduals, IdentityConfig,
    TotalClassResiduals,
};
pub use roots::{elementary_symmetric, symmetrize_to_chern, RootSeries};
