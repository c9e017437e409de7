//! Deformations of the rational Poisson algebra: first order through dual
//! numbers, all orders through the truncated Rees algebra of differential
//! operators and its localizations.

mod dual;
mod hbar;

pub use dual::{dual_commutator, dual_commuting_family, dual_inverse, dual_mul, DualNum};
pub use hbar::{
    check_commutator_degeneration, check_lift_independence, check_localization_axioms,
    check_product_against_operators, check_xd_relation, localize_product, truncate_operator, HElem,
    LocalSeries, HBAR_BRACKET_SIGN,
};
