//! Text syntax for forms and jet polynomials, and the text / JSON / LaTeX
//! emitters.
//!
//! ```text
//! form := term (("+" | "-") term)*
//! term := factor (("*" | "/") factor)*
//! factor := "-" factor | atom ("^" atom)*
//! atom := number | "(" form ")" | "d[" idx,* [";" idx,*] "]"
//!       | dq# | du | dp# | de | dphi | beta | beta_# | Omega | contact
//!       | q# | u | p# | e | phi | parameter | binding
//! ```
//!
//! `^` is the wedge product, or a power when its right operand is an integer
//! literal. `*` multiplies (wedges) and `/` divides by a nonzero constant.

mod parser;
mod render;
mod workspace;

pub use render::{
    form_from_json, form_to_json, jet_from_json, jet_to_json, latex_form, latex_monomial_form,
    latex_polynomial, render_form, render_jet, Format, SCHEMA_VERSION,
};
pub use workspace::{Binding, Workspace};

#[cfg(test)]
mod tests;
