//! Jet-symbol polynomials: Monge-Ampere extraction, total derivatives,
//! Euler-Lagrange expressions and representation synthesis.

mod calculus;
mod symbols;
mod synth;

pub use calculus::{
    euler_lagrange_fields, extract_pde, extract_pde_for, substitute_field, total_derivative,
};
pub use symbols::{
    fields_of, jet, order_in, prolong, split_parameters, JetPolynomial, JetSymbol, JetVar,
    DEFAULT_FIELD,
};
pub use synth::synthesize_form;
