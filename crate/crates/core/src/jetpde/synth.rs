use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::calculus::extract_pde;
use super::symbols::{order_in, split_parameters, JetPolynomial, JetVar, DEFAULT_FIELD};
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, ExtMonomial, Generator};
use crate::jetcalc::JetContext;
use crate::ratpoly::{solve, Matrix, Monomial, Polynomial, Rational, VariableId};

/// Largest number of terms tried by the minimal-support search.
const MAX_SUPPORT: usize = 8;
/// Node budget of the minimal-support search before falling back to a basic
/// solution of the full system.
const NODE_BUDGET: usize = 200_000;

type Sparse = BTreeMap<usize, Rational>;

struct Column {
    form: ExtMonomial,
    coeff: Monomial<VariableId>,
    image: Sparse,
}

/// A form `w` with `chi ⌟ w = 0` and `extract_pde(w) = lhs`, with polynomial
/// coefficients of degree at most `max_degree`.
///
/// Constant coefficients are tried first. Among solutions of the lowest
/// coefficient degree the one with fewest terms is returned; ties go to the
/// earliest monomials in canonical order.
pub fn synthesize_form(
    ctx: &JetContext,
    lhs: &JetPolynomial,
    max_degree: u32,
) -> Result<DifferentialForm> {
    let n = ctx.n();
    for v in lhs.variables() {
        match &v {
            JetVar::Sym(s) if s.field() != DEFAULT_FIELD => {
                return Err(not_representable(
                    max_degree,
                    format!("second field `{}`", s.field()),
                ));
            }
            JetVar::Sym(s) if s.indices().any(|i| i == 0 || i > n) => {
                return Err(Error::Dimension(format!(
                    "symbol {s} outside dimension {n}"
                )));
            }
            JetVar::Coord(mu) if *mu as usize > n || *mu == 0 => {
                return Err(Error::Dimension(format!(
                    "coordinate q{mu} outside dimension {n}"
                )));
            }
            _ => {}
        }
    }
    let order = order_in(lhs, DEFAULT_FIELD);
    if order > 2 {
        return Err(not_representable(
            max_degree,
            format!("jet order {order} exceeds 2"),
        ));
    }

    let mut out = DifferentialForm::zero(ctx.gens(), n);
    for (pmono, part) in split_parameters(lhs) {
        let w = synthesize_part(ctx, &part, max_degree)?;
        let factor = Polynomial::from_terms([(
            Monomial::from_pairs(pmono.pairs().iter().map(|(v, e)| match v {
                JetVar::Param(name) => (VariableId::Parameter(name.clone()), *e),
                _ => unreachable!("split keeps parameters only"),
            })),
            Rational::from_integer(1.into()),
        )]);
        out = &out + &w.scale(&factor);
    }
    Ok(out)
}

fn not_representable(degree: u32, reason: String) -> Error {
    Error::NotRepresentable { degree, reason }
}

fn chart_monomials(n: usize, max_degree: u32) -> Vec<Monomial<VariableId>> {
    let mut vars: Vec<VariableId> = (1..=n).map(VariableId::q).collect();
    vars.push(VariableId::Fiber);
    vars.extend((1..=n).map(VariableId::p));
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::<VariableId>::one(), 0usize)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                let mm = m.mul(&Monomial::var(v.clone()));
                out.push(mm.clone());
                next.push((mm, i));
            }
        }
        frontier = next;
    }
    out.sort();
    out
}

fn synthesize_part(
    ctx: &JetContext,
    target: &JetPolynomial,
    max_degree: u32,
) -> Result<DifferentialForm> {
    let n = ctx.n();
    let g = ctx.gens();
    let du = g.index(Generator::DU);
    let forms: Vec<ExtMonomial> = g
        .monomials(n)
        .into_iter()
        .filter(|m| !m.contains_index(du))
        .collect();

    for d in 0..=max_degree {
        let mut rows: BTreeMap<Monomial<JetVar>, usize> = BTreeMap::new();
        let index = |m: &Monomial<JetVar>, rows: &mut BTreeMap<Monomial<JetVar>, usize>| {
            let next = rows.len();
            *rows.entry(m.clone()).or_insert(next)
        };
        let mut coeffs = chart_monomials(n, d);
        coeffs.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.cmp(b)));
        let mut columns = Vec::new();
        for cm in &coeffs {
            for fm in &forms {
                let w = DifferentialForm::from_terms(
                    g,
                    n,
                    [(
                        *fm,
                        Polynomial::term(Rational::from_integer(1.into()), cm.clone()),
                    )],
                )?;
                let img = extract_pde(ctx, &w)?;
                if img.is_zero() {
                    continue;
                }
                let image: Sparse = img
                    .terms()
                    .map(|(m, c)| (index(m, &mut rows), c.clone()))
                    .collect();
                columns.push(Column {
                    form: *fm,
                    coeff: cm.clone(),
                    image,
                });
            }
        }
        let b: Sparse = target
            .terms()
            .map(|(m, c)| (index(m, &mut rows), c.clone()))
            .collect();

        let mut a = Matrix::zeros(rows.len(), columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, c) in &col.image {
                a[(*i, j)] = c.clone();
            }
        }
        let dense_b: Vec<Rational> = (0..rows.len())
            .map(|i| b.get(&i).cloned().unwrap_or_default())
            .collect();
        let Some(basic) = solve(&a, &dense_b) else {
            continue;
        };

        let chosen = minimal_support(&columns, &b).unwrap_or_else(|| {
            basic
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect()
        });
        let mut out = DifferentialForm::zero(g, n);
        for (j, x) in chosen {
            let col = &columns[j];
            let t = DifferentialForm::from_terms(
                g,
                n,
                [(col.form, Polynomial::term(x, col.coeff.clone()))],
            )?;
            out = &out + &t;
        }
        return Ok(out);
    }
    Err(not_representable(
        max_degree,
        "extraction image does not contain the equation".into(),
    ))
}

/// Exact solution of `sum x_j col_j = b` restricted to `cols`, if any, with
/// all `x_j` nonzero.
fn solve_on(columns: &[Column], cols: &[usize], b: &Sparse) -> Option<Vec<Rational>> {
    let mut rows: BTreeSet<usize> = b.keys().copied().collect();
    for &j in cols {
        rows.extend(columns[j].image.keys().copied());
    }
    let rows: Vec<usize> = rows.into_iter().collect();
    let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let mut a = Matrix::zeros(rows.len(), cols.len());
    for (k, &j) in cols.iter().enumerate() {
        for (r, c) in &columns[j].image {
            a[(pos[r], k)] = c.clone();
        }
    }
    let rhs: Vec<Rational> = rows
        .iter()
        .map(|r| b.get(r).cloned().unwrap_or_default())
        .collect();
    let x = solve(&a, &rhs)?;
    if x.iter().any(Zero::is_zero) {
        return None;
    }
    Some(x)
}

struct Search<'a> {
    columns: &'a [Column],
    b: &'a Sparse,
    by_row: BTreeMap<usize, Vec<usize>>,
    seen: BTreeSet<Vec<usize>>,
    found: Vec<(Vec<usize>, Vec<Rational>)>,
    nodes: usize,
}

impl Search<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, size: usize) -> bool {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return false;
        }
        let mut key = chosen.clone();
        key.sort_unstable();
        if !self.seen.insert(key.clone()) {
            return true;
        }
        if chosen.len() == size {
            if let Some(x) = solve_on(self.columns, &key, self.b) {
                self.found.push((key, x));
            }
            return true;
        }
        let touched: BTreeSet<usize> = chosen
            .iter()
            .flat_map(|&j| self.columns[j].image.keys().copied())
            .collect();
        let uncovered: Vec<usize> = self
            .b
            .keys()
            .copied()
            .filter(|r| !touched.contains(r))
            .collect();
        if uncovered.len() > size - chosen.len() {
            // Each new column can only clear so much; a weak but cheap bound.
            let reach = self.max_cover(&uncovered) * (size - chosen.len());
            if reach < uncovered.len() {
                return true;
            }
        }
        let candidates: BTreeSet<usize> = match uncovered.first() {
            Some(r) => self
                .by_row
                .get(r)
                .cloned()
                .unwrap_or_default()
                .into_iter()
                .collect(),
            None => touched
                .iter()
                .chain(self.b.keys())
                .flat_map(|r| self.by_row.get(r).cloned().unwrap_or_default())
                .collect(),
        };
        for j in candidates {
            if chosen.contains(&j) {
                continue;
            }
            chosen.push(j);
            let ok = self.run(chosen, size);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    fn max_cover(&self, rows: &[usize]) -> usize {
        let set: BTreeSet<usize> = rows.iter().copied().collect();
        self.columns
            .iter()
            .map(|c| c.image.keys().filter(|r| set.contains(r)).count())
            .max()
            .unwrap_or(0)
    }
}

fn minimal_support(columns: &[Column], b: &Sparse) -> Option<Vec<(usize, Rational)>> {
    if b.is_empty() {
        return Some(Vec::new());
    }
    let mut by_row: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, c) in columns.iter().enumerate() {
        for r in c.image.keys() {
            by_row.entry(*r).or_default().push(j);
        }
    }
    let mut search = Search {
        columns,
        b,
        by_row,
        seen: BTreeSet::new(),
        found: Vec::new(),
        nodes: 0,
    };
    for size in 1..=MAX_SUPPORT {
        search.seen.clear();
        if !search.run(&mut Vec::new(), size) {
            return None;
        }
        if let Some((cols, x)) = search.found.iter().min_by(|a, b| a.0.cmp(&b.0)) {
            return Some(cols.iter().copied().zip(x.iter().cloned()).collect());
        }
    }
    None
}
