use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::ratpoly::VariableId;

/// A basis 1-form, or (read as a direction) its dual coordinate vector field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `dq^mu`, 1-based.
    DQ(u8),
    DU,
    /// `dp_mu`, 1-based.
    DP(u8),
    DE,
    DPhi,
}

impl Generator {
    pub fn dq(mu: usize) -> Self {
        Generator::DQ(mu as u8)
    }

    pub fn dp(mu: usize) -> Self {
        Generator::DP(mu as u8)
    }

    /// The coordinate whose differential this is.
    pub fn variable(self) -> VariableId {
        match self {
            Generator::DQ(mu) => VariableId::BaseCoord(mu),
            Generator::DU => VariableId::Fiber,
            Generator::DP(mu) => VariableId::Momentum(mu),
            Generator::DE => VariableId::Energy,
            Generator::DPhi => VariableId::Field,
        }
    }

    pub fn of_variable(v: &VariableId) -> Option<Self> {
        match v {
            VariableId::BaseCoord(mu) => Some(Generator::DQ(*mu)),
            VariableId::Fiber => Some(Generator::DU),
            VariableId::Momentum(mu) => Some(Generator::DP(*mu)),
            VariableId::Energy => Some(Generator::DE),
            VariableId::Field => Some(Generator::DPhi),
            VariableId::Parameter(_) => None,
        }
    }

    /// Name of the dual direction, e.g. `d/dq1`.
    pub fn direction_name(self) -> String {
        format!("d/d{}", self.variable())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::DQ(mu) => write!(f, "dq{mu}"),
            Generator::DU => f.write_str("du"),
            Generator::DP(mu) => write!(f, "dp{mu}"),
            Generator::DE => f.write_str("de"),
            Generator::DPhi => f.write_str("dphi"),
        }
    }
}

/// Ordered generator set `dq^1 < .. < dq^n < du < dp_1 < .. < dp_n < de < dphi`,
/// with `du`, `de`, `dphi` each optionally present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    n: u8,
    du: bool,
    de: bool,
    dphi: bool,
}

/// Largest `n` representable by the bitmask monomials.
pub const MAX_BASE_DIM: usize = 14;

impl GeneratorSet {
    /// `{dq, du, dp}`: the first jet space.
    pub fn jet(n: usize) -> Self {
        Self::new(n, true, false, false)
    }

    /// `{dq, du, dp, de}`: the trivial line bundle over the first jet space.
    pub fn jet_with_energy(n: usize) -> Self {
        Self::new(n, true, true, false)
    }

    /// `{dq, dp, de, dphi}`: the covariant phase space of a scalar field.
    pub fn phase_space(n: usize) -> Self {
        Self::new(n, false, true, true)
    }

    pub fn new(n: usize, du: bool, de: bool, dphi: bool) -> Self {
        assert!(
            (1..=MAX_BASE_DIM).contains(&n),
            "base dimension {n} out of range"
        );
        GeneratorSet {
            n: n as u8,
            du,
            de,
            dphi,
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn has(&self, g: Generator) -> bool {
        let n = self.n;
        match g {
            Generator::DQ(mu) | Generator::DP(mu) => (1..=n).contains(&mu),
            Generator::DU => self.du,
            Generator::DE => self.de,
            Generator::DPhi => self.dphi,
        }
    }

    pub fn has_du(&self) -> bool {
        self.du
    }

    /// True when `self` contains every generator of `other`.
    pub fn contains(&self, other: &GeneratorSet) -> bool {
        self.n == other.n
            && (self.du || !other.du)
            && (self.de || !other.de)
            && (self.dphi || !other.dphi)
    }

    /// Bit position of `g` in monomial masks (its rank in the canonical order
    /// of the full universe).
    pub fn index(&self, g: Generator) -> usize {
        let n = self.n();
        match g {
            Generator::DQ(mu) => mu as usize - 1,
            Generator::DU => n,
            Generator::DP(mu) => n + mu as usize,
            Generator::DE => 2 * n + 1,
            Generator::DPhi => 2 * n + 2,
        }
    }

    pub fn generator_at(&self, idx: usize) -> Generator {
        let n = self.n();
        match idx {
            i if i < n => Generator::DQ((i + 1) as u8),
            i if i == n => Generator::DU,
            i if i <= 2 * n => Generator::DP((i - n) as u8),
            i if i == 2 * n + 1 => Generator::DE,
            i if i == 2 * n + 2 => Generator::DPhi,
            _ => panic!("generator index {idx} out of range"),
        }
    }

    /// Generators in canonical order.
    pub fn generators(&self) -> Vec<Generator> {
        let n = self.n();
        let mut out: Vec<Generator> = (1..=n).map(Generator::dq).collect();
        if self.du {
            out.push(Generator::DU);
        }
        out.extend((1..=n).map(Generator::dp));
        if self.de {
            out.push(Generator::DE);
        }
        if self.dphi {
            out.push(Generator::DPhi);
        }
        out
    }

    pub fn len(&self) -> usize {
        2 * self.n() + self.du as usize + self.de as usize + self.dphi as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mask(&self) -> u32 {
        self.generators()
            .iter()
            .fold(0, |m, g| m | (1 << self.index(*g)))
    }

    pub fn check(&self, g: Generator) -> Result<()> {
        if self.has(g) {
            Ok(())
        } else {
            Err(Error::UnknownGenerator {
                generator: g.to_string(),
                set: *self,
            })
        }
    }

    /// All monomials of the given degree, in canonical order.
    pub fn monomials(&self, degree: usize) -> Vec<ExtMonomial> {
        let gens: Vec<usize> = self.generators().iter().map(|g| self.index(*g)).collect();
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(degree);
        fn rec(
            gens: &[usize],
            start: usize,
            left: usize,
            stack: &mut Vec<usize>,
            out: &mut Vec<ExtMonomial>,
        ) {
            if left == 0 {
                out.push(ExtMonomial(stack.iter().fold(0, |m, i| m | (1 << i))));
                return;
            }
            for k in start..gens.len() {
                if gens.len() - k < left {
                    break;
                }
                stack.push(gens[k]);
                rec(gens, k + 1, left - 1, stack, out);
                stack.pop();
            }
        }
        rec(&gens, 0, degree, &mut stack, &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.generators().iter().map(Generator::to_string).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

/// A wedge product of distinct generators, stored as a bitmask over the
/// canonical generator order.
///
/// Monomials order lexicographically by their increasing index sequence, so
/// `dq1^dq2^dq3^dq4 < dq1^dq2^dp1^dp2 < dq1^dq3^dp1^dp3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtMonomial(pub(crate) u32);

impl ExtMonomial {
    pub const ONE: ExtMonomial = ExtMonomial(0);

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains_index(self, idx: usize) -> bool {
        self.0 & (1 << idx) != 0
    }

    /// Increasing generator indices.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn generators(self, gens: &GeneratorSet) -> Vec<Generator> {
        self.indices().map(|i| gens.generator_at(i)).collect()
    }

    /// Builds the canonical monomial of an arbitrary generator sequence,
    /// returning the permutation sign, or `None` on a repeated generator.
    pub fn from_sequence(gens: &GeneratorSet, seq: &[Generator]) -> Option<(ExtMonomial, i8)> {
        let mut mono = ExtMonomial::ONE;
        let mut sign = 1i8;
        for g in seq {
            let (m, s) = mono.wedge_index(gens.index(*g))?;
            mono = m;
            sign *= s;
        }
        Some((mono, sign))
    }

    /// `self ^ g` for the generator at `idx`, appended on the right.
    pub(crate) fn wedge_index(self, idx: usize) -> Option<(ExtMonomial, i8)> {
        if self.contains_index(idx) {
            return None;
        }
        let above = (self.0 >> idx).count_ones();
        let sign = if above % 2 == 0 { 1 } else { -1 };
        Some((ExtMonomial(self.0 | (1 << idx)), sign))
    }

    /// `self ^ other`, with the sign of sorting the concatenation.
    pub fn wedge(self, other: ExtMonomial) -> Option<(ExtMonomial, i8)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for j in other.indices() {
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((ExtMonomial(self.0 | other.0), sign))
    }

    /// Interior product of the coordinate direction at `idx`:
    /// removes the generator with sign `(-1)^(position)`.
    pub fn contract_index(self, idx: usize) -> Option<(ExtMonomial, i8)> {
        if !self.contains_index(idx) {
            return None;
        }
        let below = (self.0 & ((1u32 << idx) - 1)).count_ones();
        let sign = if below % 2 == 0 { 1 } else { -1 };
        Some((ExtMonomial(self.0 & !(1 << idx)), sign))
    }
}

impl Ord for ExtMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.0, other.0);
        loop {
            match (a, b) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {}
            }
            let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
            if la != lb {
                return la.cmp(&lb);
            }
            a &= a - 1;
            b &= b - 1;
        }
    }
}

impl PartialOrd for ExtMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_of_generators() {
        let g = GeneratorSet::new(2, true, true, true);
        let names: Vec<String> = g.generators().iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["dq1", "dq2", "du", "dp1", "dp2", "de", "dphi"]);
        assert_eq!(
            GeneratorSet::phase_space(2).to_string(),
            "{dq1, dq2, dp1, dp2, de, dphi}"
        );
    }

    #[test]
    fn monomial_order_is_lexicographic() {
        let g = GeneratorSet::jet(4);
        let seq = |s: &[Generator]| ExtMonomial::from_sequence(&g, s).unwrap().0;
        let beta = seq(&[
            Generator::dq(1),
            Generator::dq(2),
            Generator::dq(3),
            Generator::dq(4),
        ]);
        let d1212 = seq(&[
            Generator::dq(1),
            Generator::dq(2),
            Generator::dp(1),
            Generator::dp(2),
        ]);
        let d1313 = seq(&[
            Generator::dq(1),
            Generator::dq(3),
            Generator::dp(1),
            Generator::dp(3),
        ]);
        assert!(beta < d1212 && d1212 < d1313);
    }

    #[test]
    fn sequence_signs() {
        let g = GeneratorSet::jet(2);
        let (_, s) = ExtMonomial::from_sequence(&g, &[Generator::dp(1), Generator::dq(1)]).unwrap();
        assert_eq!(s, -1);
        assert!(ExtMonomial::from_sequence(&g, &[Generator::dq(1), Generator::dq(1)]).is_none());
        assert_eq!(g.monomials(2).len(), 10);
    }
}
