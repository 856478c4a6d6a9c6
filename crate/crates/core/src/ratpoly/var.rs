use std::fmt;
use std::sync::Arc;

/// A coordinate of the chart, or a declared constant parameter.
///
/// The derived ordering is the fixed variable order used by polynomial
/// term ordering: base coordinates, fiber, momenta, the extension
/// coordinates `e` and `phi`, then parameters by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableId {
    /// `q^mu`, 1-based.
    BaseCoord(u8),
    /// `u`.
    Fiber,
    /// `p_mu`, 1-based.
    Momentum(u8),
    /// Fiber coordinate `e` of the trivial line bundle.
    Energy,
    /// Field coordinate `phi` of the multisymplectic phase space.
    Field,
    /// A named constant such as `m` or `c`. Constant only for the exterior
    /// derivative; ordinary partial derivatives treat it as a variable.
    Parameter(Arc<str>),
}

impl VariableId {
    pub fn q(mu: usize) -> Self {
        VariableId::BaseCoord(mu as u8)
    }

    pub fn p(mu: usize) -> Self {
        VariableId::Momentum(mu as u8)
    }

    pub fn param(name: &str) -> Self {
        VariableId::Parameter(Arc::from(name))
    }

    pub fn is_parameter(&self) -> bool {
        matches!(self, VariableId::Parameter(_))
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableId::BaseCoord(mu) => write!(f, "q{mu}"),
            VariableId::Fiber => f.write_str("u"),
            VariableId::Momentum(mu) => write!(f, "p{mu}"),
            VariableId::Energy => f.write_str("e"),
            VariableId::Field => f.write_str("phi"),
            VariableId::Parameter(name) => f.write_str(name),
        }
    }
}
