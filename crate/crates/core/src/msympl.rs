//! Multisymplectic forms: Harrivel's `m_w = de^beta + contact^w` with its two
//! criteria, a direct closed/nondegenerate check, and Hélein's Klein–Gordon
//! data on the covariant phase space.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dsl::SCHEMA_VERSION;
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, ExtMonomial, Generator, GeneratorSet};
use crate::jetcalc::JetContext;
use crate::jetpde::{jet, JetPolynomial, JetVar};
use crate::ratpoly::{
    nullspace, poly_rank, rat, Matrix, Monomial, Polynomial, Rational, VariableId,
};

pub const DEFAULT_SAMPLES: usize = 16;
pub const DEFAULT_SEED: u64 = 0x6a65_7466;

/// `de^beta + contact^w` on the jet chart extended by `de`.
pub fn harrivel_form(ctx: &JetContext, w: &DifferentialForm) -> Result<DifferentialForm> {
    if w.degree() != ctx.n() {
        return Err(Error::WrongDegree {
            expected: ctx.n(),
            found: w.degree(),
        });
    }
    if !ctx.is_effective(w)?.is_effective() {
        return Err(Error::NotEffective);
    }
    let ext = GeneratorSet::jet_with_energy(ctx.n());
    let de = DifferentialForm::generator(ext, Generator::DE)?;
    let head = de.wedge(&ctx.beta().extend_to(ext)?)?;
    let tail = ctx.contact().extend_to(ext)?.wedge(&w.extend_to(ext)?)?;
    Ok(&head + &tail)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion1 {
    /// `d/dq^mu _| w` for `mu = 1..n`.
    pub contractions: Vec<DifferentialForm>,
    /// Independence over the constants.
    pub independent: bool,
    /// Constant coefficients of a vanishing combination, if dependent.
    pub dependency: Option<Vec<Rational>>,
    /// Rank over the field of rational functions in the chart coordinates;
    /// below `n` means a dependency with polynomial coefficients exists.
    pub function_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion2 {
    pub dp_omega: DifferentialForm,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePoint {
    pub values: BTreeMap<VariableId, Rational>,
    pub full_rank: bool,
}

/// A tangent vector `sum v_i d/dx_i` with `v _| m = 0`, at `point` (none when
/// the coefficients are constant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelWitness {
    pub point: Option<usize>,
    pub vector: Vec<(Generator, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nondegeneracy {
    pub verdict: bool,
    /// False when the verdict only holds on the sampled points.
    pub exact: bool,
    /// True when decided in the coframe `(dq, contact, dp, de)`; kernel
    /// components then refer to its dual frame.
    pub contact_frame: bool,
    pub samples: Vec<SamplePoint>,
    pub kernel: Option<KernelWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectCheck {
    pub closed: bool,
    pub d_m: DifferentialForm,
    pub nondegenerate: Nondegeneracy,
}

impl DirectCheck {
    pub fn multisymplectic(&self) -> bool {
        self.closed && self.nondegenerate.verdict
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisymplecticReport {
    pub omega: DifferentialForm,
    pub form: DifferentialForm,
    pub criterion1: Criterion1,
    pub criterion2: Criterion2,
    pub verdict: bool,
    pub direct: Option<DirectCheck>,
}

impl MultisymplecticReport {
    /// Whether the criteria verdict and the direct check say the same thing.
    pub fn agreement(&self) -> Option<bool> {
        self.direct
            .as_ref()
            .map(|d| d.multisymplectic() == self.verdict)
    }
}

fn criterion1(ctx: &JetContext, w: &DifferentialForm) -> Result<Criterion1> {
    let n = ctx.n();
    let contractions: Vec<DifferentialForm> = (1..=n)
        .map(|mu| w.contract(Generator::dq(mu)))
        .collect::<Result<_>>()?;

    let mut rows: BTreeMap<(ExtMonomial, Monomial<VariableId>), usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (mu, c) in contractions.iter().enumerate() {
        for (m, coeff) in c.terms() {
            for (cm, r) in coeff.terms() {
                let next = rows.len();
                let row = *rows.entry((m, cm.clone())).or_insert(next);
                entries.push((row, mu, r.clone()));
            }
        }
    }
    let mut a = Matrix::zeros(rows.len(), n);
    for (i, j, r) in entries {
        a[(i, j)] = r;
    }
    let kernel = nullspace(&a);
    let monos: BTreeSet<ExtMonomial> = contractions
        .iter()
        .flat_map(|c| c.terms().map(|(m, _)| m))
        .collect();
    let poly_rows: Vec<Vec<Polynomial>> = contractions
        .iter()
        .map(|c| monos.iter().map(|m| c.coefficient(*m)).collect())
        .collect();
    Ok(Criterion1 {
        independent: kernel.is_empty(),
        dependency: kernel.into_iter().next(),
        function_rank: poly_rank(&poly_rows),
        contractions,
    })
}

/// Decides both criteria for `de^beta + contact^w`.
pub fn check_harrivel(ctx: &JetContext, w: &DifferentialForm) -> Result<MultisymplecticReport> {
    let form = harrivel_form(ctx, w)?;
    let criterion1 = criterion1(ctx, w)?;
    let dp_omega = ctx.d_p(w)?;
    let criterion2 = Criterion2 {
        vanishes: dp_omega.is_zero(),
        dp_omega,
    };
    Ok(MultisymplecticReport {
        omega: w.clone(),
        form,
        verdict: criterion1.independent && criterion2.vanishes,
        criterion1,
        criterion2,
        direct: None,
    })
}

/// [`check_harrivel`] plus [`verify_multisymplectic_direct`] on the
/// constructed form.
pub fn check_multisymplectic(
    ctx: &JetContext,
    w: &DifferentialForm,
    samples: usize,
    seed: u64,
) -> Result<MultisymplecticReport> {
    let mut report = check_harrivel(ctx, w)?;
    report.direct = Some(verify_multisymplectic_direct(&report.form, samples, seed));
    Ok(report)
}

fn contraction_rows(m: &DifferentialForm) -> (Vec<Generator>, Vec<Vec<Polynomial>>) {
    let gens = m.gens().generators();
    let images: Vec<DifferentialForm> = gens
        .iter()
        .map(|g| m.contract(*g).expect("generator of m"))
        .collect();
    let monos: BTreeSet<ExtMonomial> = images
        .iter()
        .flat_map(|c| c.terms().map(|(x, _)| x))
        .collect();
    let rows = monos
        .iter()
        .map(|x| images.iter().map(|c| c.coefficient(*x)).collect())
        .collect();
    (gens, rows)
}

fn kernel_at(gens: &[Generator], rows: &[Vec<Rational>]) -> Option<Vec<(Generator, Rational)>> {
    let a = if rows.is_empty() {
        Matrix::zeros(1, gens.len())
    } else {
        Matrix::from_rows(rows.to_vec())
    };
    nullspace(&a).into_iter().next().map(|v| {
        gens.iter()
            .copied()
            .zip(v)
            .filter(|(_, x)| !x.is_zero())
            .collect()
    })
}

fn sample_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=7))
}

/// Rewrites `m` in the coframe where `du` is replaced by the contact form,
/// i.e. substitutes `du -> du + p_mu dq^mu` and reads `du` as the contact form.
fn in_contact_coframe(m: &DifferentialForm) -> DifferentialForm {
    let g = m.gens();
    let image = |x: Generator| {
        let mut f = DifferentialForm::generator(g, x).expect("generator of m");
        if x == Generator::DU {
            for mu in 1..=g.n() {
                let dq = DifferentialForm::generator(g, Generator::dq(mu)).expect("dq");
                f = &f + &dq.scale(&Polynomial::var(VariableId::p(mu)));
            }
        }
        f
    };
    let mut out = DifferentialForm::zero(g, m.degree());
    for (mono, c) in m.terms() {
        let mut t = DifferentialForm::scalar(g, c.clone()).expect("scalar");
        for x in mono.generators(&g) {
            t = t.wedge(&image(x)).expect("same generators");
        }
        out = &out + &t;
    }
    out
}

/// Closedness exactly; nondegeneracy exactly when the coefficients are
/// constant in the chart or in the contact coframe, otherwise at `samples`
/// seeded rational points.
pub fn verify_multisymplectic_direct(
    m: &DifferentialForm,
    samples: usize,
    seed: u64,
) -> DirectCheck {
    let d_m = m.ext_d();
    let (mut gens, mut rows) = contraction_rows(m);
    let mut contact_frame = false;
    if m.gens().has_du() && !rows.iter().flatten().all(|p| p.is_constant()) {
        let (g2, r2) = contraction_rows(&in_contact_coframe(m));
        if r2.iter().flatten().all(|p| p.is_constant()) {
            (gens, rows) = (g2, r2);
            contact_frame = true;
        }
    }
    let constant = rows.iter().flatten().all(|p| p.as_constant().is_some());

    let nondegenerate = if constant {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|p| p.as_constant().expect("constant"))
                    .collect()
            })
            .collect();
        let kernel = kernel_at(&gens, &rows).map(|vector| KernelWitness {
            point: None,
            vector,
        });
        Nondegeneracy {
            verdict: kernel.is_none(),
            exact: true,
            contact_frame,
            samples: Vec::new(),
            kernel,
        }
    } else {
        let vars: BTreeSet<VariableId> = rows
            .iter()
            .flatten()
            .flat_map(Polynomial::variables)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<BTreeMap<VariableId, Rational>> = (0..samples)
            .map(|_| {
                vars.iter()
                    .map(|v| (v.clone(), sample_rational(&mut rng)))
                    .collect()
            })
            .collect();
        let kernels: Vec<Option<Vec<(Generator, Rational)>>> = points
            .par_iter()
            .map(|pt| {
                let vals: Vec<Vec<Rational>> = rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|p| p.eval(pt).expect("all variables sampled"))
                            .collect()
                    })
                    .collect();
                kernel_at(&gens, &vals)
            })
            .collect();
        let kernel = kernels.iter().enumerate().find_map(|(i, k)| {
            k.clone().map(|vector| KernelWitness {
                point: Some(i),
                vector,
            })
        });
        let samples = points
            .into_iter()
            .zip(&kernels)
            .map(|(values, k)| SamplePoint {
                values,
                full_rank: k.is_none(),
            })
            .collect();
        Nondegeneracy {
            verdict: kernel.is_none(),
            exact: false,
            contact_frame,
            samples,
            kernel,
        }
    };
    DirectCheck {
        closed: d_m.is_zero(),
        d_m,
        nondegenerate,
    }
}

/// Hélein's Klein–Gordon data on the covariant phase space over `n`
/// dimensions with mass parameter `mass`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeleinKgData {
    pub form: DifferentialForm,
    pub hamiltonian: Polynomial,
    /// Diagonal of the Minkowski metric, `(+1, -1, ..., -1)`.
    pub eta: Vec<i64>,
    /// Hamiltonian n-curve: each phase-space coordinate as a jet polynomial.
    pub relations: Vec<(VariableId, JetPolynomial)>,
}

pub fn helein_kg(n: usize, mass: &str) -> Result<HeleinKgData> {
    let ctx = JetContext::with_max_dim(n, crate::exterior::MAX_BASE_DIM)?;
    let g = GeneratorSet::phase_space(n);
    let de = DifferentialForm::generator(g, Generator::DE)?;
    let dphi = DifferentialForm::generator(g, Generator::DPhi)?;
    let mut form = de.wedge(&ctx.beta().extend_to(g)?)?;
    for mu in 1..=n {
        let dp = DifferentialForm::generator(g, Generator::dp(mu))?;
        form = &form + &dp.wedge(&dphi)?.wedge(&ctx.beta_mu(mu).extend_to(g)?)?;
    }

    let eta: Vec<i64> = (1..=n).map(|mu| if mu == 1 { 1 } else { -1 }).collect();
    let half = rat(1, 2);
    let m2 = Polynomial::var(VariableId::param(mass)).pow(2);
    let phi = Polynomial::var(VariableId::Field);
    let mut hamiltonian = Polynomial::var(VariableId::Energy) + (&m2 * &phi.pow(2)).scale(&half);
    for (mu, s) in eta.iter().enumerate() {
        let p = Polynomial::var(VariableId::p(mu + 1));
        hamiltonian += &p.pow(2).scale(&(&half * rat(*s, 1)));
    }

    let jm2 = JetPolynomial::var(JetVar::param(mass)).pow(2);
    let jphi = jet(crate::jetpde::DEFAULT_FIELD, &[]);
    let mut energy = (&jm2 * &jphi.pow(2)).scale(&-half.clone());
    let mut relations = Vec::new();
    for (mu, s) in eta.iter().enumerate() {
        let d = jet(crate::jetpde::DEFAULT_FIELD, &[mu + 1]);
        energy = &energy - &d.pow(2).scale(&(&half * rat(*s, 1)));
        relations.push((VariableId::p(mu + 1), d.scale(&rat(*s, 1))));
    }
    relations.push((VariableId::Energy, energy));
    relations.push((VariableId::Field, jphi));
    Ok(HeleinKgData {
        form,
        hamiltonian,
        eta,
        relations,
    })
}

impl HeleinKgData {
    /// The Hamiltonian restricted to the n-curve.
    pub fn hamiltonian_on_curve(&self) -> JetPolynomial {
        self.hamiltonian.substitute(|v| match v {
            VariableId::Parameter(name) => JetPolynomial::var(JetVar::param(name)),
            other => self
                .relations
                .iter()
                .find(|(w, _)| w == other)
                .map(|(_, p)| p.clone())
                .expect("every phase-space variable has a relation"),
        })
    }
}

fn generator_vector_json(vector: &[(Generator, Rational)]) -> Value {
    Value::Array(
        vector
            .iter()
            .map(|(g, r)| json!({ "direction": g.direction_name(), "coeff": r.to_string() }))
            .collect(),
    )
}

impl MultisymplecticReport {
    pub fn to_json(&self) -> Value {
        let c1 = &self.criterion1;
        let mut out = json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "multisymplectic_report",
            "n": self.omega.n(),
            "omega": self.omega.to_string(),
            "form": self.form.to_string(),
            "criterion1": {
                "independent": c1.independent,
                "contractions": c1.contractions.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "dependency": c1.dependency.as_ref().map(|v| v.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
                "function_rank": c1.function_rank,
            },
            "criterion2": {
                "vanishes": self.criterion2.vanishes,
                "dp_omega": self.criterion2.dp_omega.to_string(),
            },
            "verdict": self.verdict,
            "direct": Value::Null,
            "agreement": self.agreement(),
        });
        if let Some(d) = &self.direct {
            let nd = &d.nondegenerate;
            out["direct"] = json!({
                "closed": d.closed,
                "d_m": d.d_m.to_string(),
                "nondegenerate": {
                    "verdict": nd.verdict,
                    "exact": nd.exact,
                    "contact_frame": nd.contact_frame,
                    "samples": nd.samples.iter().map(|s| json!({
                        "values": s.values.iter().map(|(v, r)| (v.to_string(), Value::String(r.to_string()))).collect::<serde_json::Map<_, _>>(),
                        "full_rank": s.full_rank,
                    })).collect::<Vec<_>>(),
                    "kernel": nd.kernel.as_ref().map(|k| json!({
                        "point": k.point,
                        "vector": generator_vector_json(&k.vector),
                    })),
                },
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::dsl::Workspace;

    const KG: &str = "m^2*u*beta - beta_1^dp1 + beta_2^dp2 + beta_3^dp3 + beta_4^dp4";
    const P1E: &str = "-beta + 1/3*(d[1,2;1,2] + d[3,4;3,4]) - 1/6*(d[1,3;1,3] + d[1,4;1,4] + d[2,3;2,3] + d[2,4;2,4])";

    fn ws(n: usize) -> Workspace {
        Workspace::new(n).unwrap().with_params(["m"]).unwrap()
    }

    #[test]
    fn construction() {
        let w = ws(4);
        let ctx = w.context();
        let zero = DifferentialForm::zero(ctx.gens(), 4);
        assert_eq!(
            harrivel_form(ctx, &zero).unwrap(),
            w.parse_form("de^beta").unwrap()
        );
        let kg = w.parse_form(KG).unwrap();
        let expected = w
            .parse_form(&format!(
                "de^beta + (du - p1*dq1 - p2*dq2 - p3*dq3 - p4*dq4)^({KG})"
            ))
            .unwrap();
        assert_eq!(harrivel_form(ctx, &kg).unwrap(), expected);
        let not_eff = w.parse_form("d[1,2;1,2]").unwrap();
        assert_eq!(harrivel_form(ctx, &not_eff), Err(Error::NotEffective));
    }

    #[test]
    fn plebanski_one_is_multisymplectic() {
        let w = ws(4);
        let r = check_multisymplectic(
            w.context(),
            &w.parse_form(P1E).unwrap(),
            DEFAULT_SAMPLES,
            DEFAULT_SEED,
        )
        .unwrap();
        assert!(r.criterion1.independent && r.criterion2.vanishes && r.verdict);
        assert_eq!(r.criterion1.function_rank, 4);
        let d = r.direct.as_ref().unwrap();
        assert!(d.closed && d.nondegenerate.verdict && d.nondegenerate.exact);
        assert!(d.nondegenerate.contact_frame);
        assert_eq!(r.agreement(), Some(true));
    }

    #[test]
    fn klein_gordon_projected_derivative() {
        // m^2 p_mu dq^mu ^ beta has n + 1 base differentials, so it is zero.
        let w = ws(4);
        let kg = w.parse_form(KG).unwrap();
        let r = check_multisymplectic(w.context(), &kg, DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert!(r.criterion1.independent);
        assert!(w
            .parse_form("m^2*(p1*dq1 + p2*dq2 + p3*dq3 + p4*dq4)^beta")
            .unwrap()
            .is_zero());
        assert!(r.criterion2.vanishes);
        let d = r.direct.as_ref().unwrap();
        assert!(d.closed);
        assert!(!d.nondegenerate.exact);
        assert_eq!(d.nondegenerate.samples.len(), DEFAULT_SAMPLES);
    }

    #[test]
    fn beta_is_degenerate() {
        // de^beta + du^beta: no direction along dp appears.
        let w = ws(3);
        let ctx = w.context();
        let r = check_multisymplectic(ctx, ctx.beta(), DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert!(r.verdict);
        let d = r.direct.as_ref().unwrap();
        assert!(d.closed && !d.nondegenerate.verdict && d.nondegenerate.exact);
        assert_eq!(r.agreement(), Some(false));
    }

    #[test]
    fn dependent_contractions() {
        // Both contractions equal dp2 - dp1.
        let w = ws(2);
        let a = w.parse_form("(dq1 + dq2)^(dp2 - dp1)").unwrap();
        let r = check_harrivel(w.context(), &a).unwrap();
        assert!(!r.criterion1.independent);
        let dep = r.criterion1.dependency.clone().unwrap();
        assert_eq!(dep[0], -dep[1].clone());
        assert_eq!(r.criterion1.function_rank, 1);
        assert!(!r.verdict);
    }

    #[test]
    fn extended_de_beta_alone() {
        let m = ws(2).parse_form("de^beta").unwrap();
        let d = verify_multisymplectic_direct(&m, DEFAULT_SAMPLES, DEFAULT_SEED);
        assert!(d.closed && !d.nondegenerate.verdict);
        let k = d.nondegenerate.kernel.unwrap();
        assert!(k.vector.iter().any(|(g, _)| *g == Generator::DU));
    }

    #[test]
    fn helein_data() {
        let data = helein_kg(4, "m").unwrap();
        let w = ws(4);
        assert_eq!(
            data.form,
            w.parse_form(
                "de^beta + dp1^dphi^beta_1 + dp2^dphi^beta_2 + dp3^dphi^beta_3 + dp4^dphi^beta_4"
            )
            .unwrap()
        );
        assert_eq!(data.eta, vec![1, -1, -1, -1]);
        assert!(data.hamiltonian_on_curve().is_zero());
        let d = verify_multisymplectic_direct(&data.form, DEFAULT_SAMPLES, DEFAULT_SEED);
        assert!(d.closed && d.nondegenerate.verdict && d.nondegenerate.exact);
        assert_eq!(
            data.hamiltonian,
            w.parse_polynomial("e + 1/2*(p1^2 - p2^2 - p3^2 - p4^2) + 1/2*m^2*phi^2")
                .unwrap()
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        let w = ws(4);
        let m = harrivel_form(w.context(), &w.parse_form(KG).unwrap()).unwrap();
        let a = verify_multisymplectic_direct(&m, 8, 7);
        let b = verify_multisymplectic_direct(&m, 8, 7);
        assert_eq!(a, b);
        assert_ne!(
            a.nondegenerate.samples,
            verify_multisymplectic_direct(&m, 8, 8)
                .nondegenerate
                .samples
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn constant_coefficients_satisfy_criterion_two_and_close(
            (n, a) in (2usize..=4).prop_flat_map(|n| (Just(n), crate::test_support::constant_form(n, n, 5)))
        ) {
            let ctx = JetContext::new(n).unwrap();
            let w = ctx.effective_part(&a).unwrap();
            let r = check_harrivel(&ctx, &w).unwrap();
            prop_assert!(r.criterion2.vanishes);
            prop_assert!(r.form.ext_d().is_zero());
        }
    }
}
