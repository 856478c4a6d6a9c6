//! Graded exterior algebra over an ordered set of 1-form generators with
//! polynomial coefficients.

mod fields;
mod form;
mod generators;

pub use fields::{PolyBiVector, PolyVectorField};
pub use form::DifferentialForm;
pub use generators::{ExtMonomial, Generator, GeneratorSet, MAX_BASE_DIM};

/// `dq^{i_1} ^ .. ^ dq^{i_a} ^ dp_{j_1} ^ .. ^ dp_{j_b}`, the `d^{I}_{J}` shorthand.
pub fn dqp(gens: GeneratorSet, qs: &[usize], ps: &[usize]) -> crate::Result<DifferentialForm> {
    let seq: Vec<Generator> = qs
        .iter()
        .map(|&i| Generator::dq(i))
        .chain(ps.iter().map(|&j| Generator::dp(j)))
        .collect();
    DifferentialForm::monomial(gens, &seq, crate::ratpoly::Polynomial::one())
}

#[cfg(test)]
mod tests;
