//! Moment functionals `L(f) = ∫ f dμ` on the polynomial algebra.
//!
//! Measures are finitely atomic with rational atoms and weights, so every
//! forward computation is exact. Functionals known only through their values
//! are [`MomentTable`]s: a complete list of `L(x^k)` for `|k| ≤ 2t`, stored as
//! floats with an exact rational copy when one is available.
//!
//! Submodules hold the positivity tests (moment and localizing matrices,
//! Hurwitz–Reznick bounds), the growth diagnostics (continuity with respect
//! to the extended weighted ℓ1 norm, the `m_k` sequence, quasi-analyticity,
//! support radii) and univariate reconstruction by Gauss quadrature.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{monomials_up_to, AlgebraError, Monomial, Polynomial};
use crate::rational::{self, Exact, Rational, Real};
use crate::seminorm::SeminormError;

mod growth;
mod positivity;
mod reconstruct;

pub use growth::{
    continuity_norm, determinacy_report, mk_sequence, mk_unreduced, quasi_analytic_classify,
    support_radius, support_radius_estimate, unit_ball_basis, bounded_products_check,
    BoundedProducts, ContinuityReport, DeterminacyReport, MkSequence, QuasiAnalyticDiagnostics,
    QuasiAnalyticVerdict, RadiusEstimate, MIN_CLASSIFY_LENGTH,
};
pub use positivity::{
    hurwitz_reznick_check, m_positivity_check, positivity_check, positivity_check_at, BlockReport,
    HurwitzReznickEntry, HurwitzReznickReport, PositivityMethod, PositivityReport,
    HURWITZ_REZNICK_TOL, PSD_TOL,
};
pub use reconstruct::{gauss_nodes, reconstruct_univariate, RECONSTRUCTION_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("atom {index} has nonpositive weight {weight}")]
    NonPositiveWeight { index: usize, weight: String },
    #[error("atoms {first} and {second} share a point")]
    DuplicateAtom { first: usize, second: usize },
    #[error("measure has no atoms and no explicit nvars")]
    UnknownDimension,
    #[error("moment table is missing the entry for {0}")]
    MissingMoment(String),
    #[error("moment table entry {0} exceeds max_degree")]
    ExcessMoment(String),
    #[error("moment table entry {0} is not finite")]
    NonFinite(String),
    #[error("moment table entry {0} is listed twice")]
    DuplicateMoment(String),
    #[error("needs moments up to degree {needed}, table has {available}")]
    InsufficientDegree { needed: u32, available: u32 },
    #[error("functional is not positive: {0}")]
    NotPositive(String),
    #[error("expected a univariate table, found {0} variables")]
    NotUnivariate(usize),
    #[error("no atomic representation within budget: {0}")]
    Reconstruction(String),
    #[error("weights must be strictly positive")]
    BadWeights,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Seminorm(#[from] SeminormError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<Rational>,
    pub weight: Rational,
}

/// `μ = Σ w_j δ_{α_j}` with distinct points and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    nvars: usize,
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(nvars: usize, atoms: Vec<Atom>) -> Result<Self, MomentError> {
        for (index, a) in atoms.iter().enumerate() {
            if a.point.len() != nvars {
                return Err(MomentError::DimensionMismatch { expected: nvars, found: a.point.len() });
            }
            if !a.weight.is_positive() {
                return Err(MomentError::NonPositiveWeight { index, weight: rational::format_rational(&a.weight) });
            }
            if let Some(first) = atoms[..index].iter().position(|b| b.point == a.point) {
                return Err(MomentError::DuplicateAtom { first, second: index });
            }
        }
        Ok(AtomicMeasure { nvars, atoms })
    }

    /// Dirac mass at `point`.
    pub fn dirac(point: Vec<Rational>) -> Self {
        let nvars = point.len();
        AtomicMeasure { nvars, atoms: vec![Atom { point, weight: Rational::from_integer(1.into()) }] }
    }

    /// Builds from `(point, weight)` pairs.
    pub fn from_pairs(nvars: usize, pairs: Vec<(Vec<Rational>, Rational)>) -> Result<Self, MomentError> {
        AtomicMeasure::new(nvars, pairs.into_iter().map(|(point, weight)| Atom { point, weight }).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|a| &a.weight).sum()
    }

    /// `c·μ` for `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Result<Self, MomentError> {
        AtomicMeasure::new(
            self.nvars,
            self.atoms.iter().map(|a| Atom { point: a.point.clone(), weight: &a.weight * c }).collect(),
        )
    }
}

/// `∫ f dμ = Σ_j w_j f(α_j)`, exact.
pub fn integrate(mu: &AtomicMeasure, f: &Polynomial) -> Result<Rational, MomentError> {
    if f.nvars() != mu.nvars {
        return Err(MomentError::DimensionMismatch { expected: mu.nvars, found: f.nvars() });
    }
    let mut acc = Rational::zero();
    for a in &mu.atoms {
        acc += &a.weight * f.evaluate(&a.point)?;
    }
    Ok(acc)
}

fn integrate_monomial(mu: &AtomicMeasure, m: &Monomial) -> Rational {
    mu.atoms.iter().map(|a| &a.weight * m.evaluate(&a.point)).sum()
}

/// Values of a functional on every monomial of degree `≤ max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    nvars: usize,
    max_degree: u32,
    values: BTreeMap<Monomial, f64>,
    exact: Option<BTreeMap<Monomial, Rational>>,
}

impl MomentTable {
    fn check_keys<V>(nvars: usize, max_degree: u32, values: &BTreeMap<Monomial, V>) -> Result<(), MomentError> {
        for m in values.keys() {
            if m.nvars() != nvars {
                return Err(MomentError::DimensionMismatch { expected: nvars, found: m.nvars() });
            }
            if m.degree() > max_degree {
                return Err(MomentError::ExcessMoment(m.to_string()));
            }
        }
        for m in monomials_up_to(nvars, max_degree) {
            if !values.contains_key(&m) {
                return Err(MomentError::MissingMoment(m.to_string()));
            }
        }
        Ok(())
    }

    pub fn new(nvars: usize, max_degree: u32, values: BTreeMap<Monomial, f64>) -> Result<Self, MomentError> {
        MomentTable::check_keys(nvars, max_degree, &values)?;
        if let Some((m, _)) = values.iter().find(|(_, v)| !v.is_finite()) {
            return Err(MomentError::NonFinite(m.to_string()));
        }
        Ok(MomentTable { nvars, max_degree, values, exact: None })
    }

    pub fn new_exact(nvars: usize, max_degree: u32, exact: BTreeMap<Monomial, Rational>) -> Result<Self, MomentError> {
        MomentTable::check_keys(nvars, max_degree, &exact)?;
        let values = exact.iter().map(|(m, q)| (m.clone(), rational::to_f64(q))).collect();
        Ok(MomentTable { nvars, max_degree, values, exact: Some(exact) })
    }

    /// Univariate table `L(x^k) = values[k]`.
    pub fn univariate(values: &[f64]) -> Result<Self, MomentError> {
        let max_degree = values.len().checked_sub(1).ok_or(MomentError::MissingMoment("1".into()))? as u32;
        let map = values.iter().enumerate().map(|(k, v)| (Monomial::new(vec![k as u32]), *v)).collect();
        MomentTable::new(1, max_degree, map)
    }

    pub fn univariate_exact(values: &[Rational]) -> Result<Self, MomentError> {
        let max_degree = values.len().checked_sub(1).ok_or(MomentError::MissingMoment("1".into()))? as u32;
        let map = values.iter().enumerate().map(|(k, v)| (Monomial::new(vec![k as u32]), v.clone())).collect();
        MomentTable::new_exact(1, max_degree, map)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn value(&self, m: &Monomial) -> Option<f64> {
        self.values.get(m).copied()
    }

    pub fn exact_value(&self, m: &Monomial) -> Option<&Rational> {
        self.exact.as_ref()?.get(m)
    }

    /// Exact when the table carries rationals, float otherwise.
    pub fn real_value(&self, m: &Monomial) -> Option<Real> {
        match &self.exact {
            Some(e) => e.get(m).cloned().map(Real::Exact),
            None => self.value(m).map(Real::Approx),
        }
    }

    /// Entries in ascending graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, f64)> + '_ {
        self.values.iter().map(|(m, v)| (m, *v))
    }

    pub fn unit_value(&self) -> f64 {
        self.values[&Monomial::one(self.nvars)]
    }

    pub fn require_degree(&self, needed: u32) -> Result<(), MomentError> {
        if needed > self.max_degree {
            return Err(MomentError::InsufficientDegree { needed, available: self.max_degree });
        }
        Ok(())
    }

    fn check_poly(&self, f: &Polynomial) -> Result<(), MomentError> {
        if f.nvars() != self.nvars {
            return Err(MomentError::DimensionMismatch { expected: self.nvars, found: f.nvars() });
        }
        self.require_degree(f.degree().unwrap_or(0))
    }

    /// `L(f)` in floating point.
    pub fn apply(&self, f: &Polynomial) -> Result<f64, MomentError> {
        self.check_poly(f)?;
        Ok(f.terms().map(|(m, c)| rational::to_f64(c) * self.values[m]).sum())
    }

    /// `L(f)` exactly, or `None` for a float-only table.
    pub fn apply_exact(&self, f: &Polynomial) -> Result<Option<Rational>, MomentError> {
        self.check_poly(f)?;
        Ok(self.exact.as_ref().map(|e| f.terms().map(|(m, c)| c * &e[m]).sum()))
    }

    /// `L(f)` together with `Σ |c_m L(x^m)|`, the scale for relative tolerances.
    pub fn apply_with_scale(&self, f: &Polynomial) -> Result<(f64, f64), MomentError> {
        self.check_poly(f)?;
        let mut value = 0.0;
        let mut scale = 0.0;
        for (m, c) in f.terms() {
            let t = rational::to_f64(c) * self.values[m];
            value += t;
            scale += t.abs();
        }
        Ok((value, scale))
    }

    /// `L(x_i^k)` for `k = 0..=max_degree`.
    pub fn marginal(&self, i: usize) -> Vec<f64> {
        (0..=self.max_degree).map(|k| self.values[&Monomial::var(self.nvars, i).pow(k)]).collect()
    }

    pub fn marginal_exact(&self, i: usize) -> Option<Vec<Rational>> {
        let e = self.exact.as_ref()?;
        Some((0..=self.max_degree).map(|k| e[&Monomial::var(self.nvars, i).pow(k)].clone()).collect())
    }

    /// The same functional restricted to degree `≤ degree`.
    pub fn truncated(&self, degree: u32) -> Result<MomentTable, MomentError> {
        self.require_degree(degree)?;
        let keep = |m: &Monomial| m.degree() <= degree;
        Ok(MomentTable {
            nvars: self.nvars,
            max_degree: degree,
            values: self.values.iter().filter(|(m, _)| keep(m)).map(|(m, v)| (m.clone(), *v)).collect(),
            exact: self
                .exact
                .as_ref()
                .map(|e| e.iter().filter(|(m, _)| keep(m)).map(|(m, v)| (m.clone(), v.clone())).collect()),
        })
    }
}

/// Complete table of `∫ x^k dμ` for `|k| ≤ max_degree`, exact.
pub fn table_from_measure(mu: &AtomicMeasure, max_degree: u32) -> MomentTable {
    let exact = monomials_up_to(mu.nvars, max_degree)
        .into_iter()
        .map(|m| {
            let v = integrate_monomial(mu, &m);
            (m, v)
        })
        .collect();
    MomentTable::new_exact(mu.nvars, max_degree, exact).expect("table is complete by construction")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Distinction {
    /// Lowest graded-lex monomial whose integrals differ by more than `1e-12`.
    Differ { monomial: Monomial, first: Rational, second: Rational },
    AgreeToDegree(u32),
}

/// Separates two measures by their moments, scanning in graded-lex order.
pub fn distinguish_measures(mu1: &AtomicMeasure, mu2: &AtomicMeasure, max_degree: u32) -> Result<Distinction, MomentError> {
    if mu1.nvars != mu2.nvars {
        return Err(MomentError::DimensionMismatch { expected: mu1.nvars, found: mu2.nvars });
    }
    let gap = rational::rat(1, 1_000_000_000_000);
    for m in monomials_up_to(mu1.nvars, max_degree) {
        let first = integrate_monomial(mu1, &m);
        let second = integrate_monomial(mu2, &m);
        if (&first - &second).abs() > gap {
            return Ok(Distinction::Differ { monomial: m, first, second });
        }
    }
    Ok(Distinction::AgreeToDegree(max_degree))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub point: Vec<Exact>,
    pub weight: Exact,
}

/// `{"atoms": [{"point": [..], "weight": w}]}`, with optional `nvars` for
/// the empty measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureJson {
    pub atoms: Vec<AtomJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
}

impl TryFrom<MeasureJson> for AtomicMeasure {
    type Error = MomentError;

    fn try_from(j: MeasureJson) -> Result<Self, MomentError> {
        let nvars = j
            .atoms
            .first()
            .map(|a| a.point.len())
            .or(j.nvars)
            .ok_or(MomentError::UnknownDimension)?;
        AtomicMeasure::new(
            nvars,
            j.atoms
                .into_iter()
                .map(|a| Atom { point: a.point.into_iter().map(|x| x.0).collect(), weight: a.weight.0 })
                .collect(),
        )
    }
}

impl From<&AtomicMeasure> for MeasureJson {
    fn from(mu: &AtomicMeasure) -> Self {
        MeasureJson {
            atoms: mu
                .atoms
                .iter()
                .map(|a| AtomJson {
                    point: a.point.iter().cloned().map(Exact).collect(),
                    weight: Exact(a.weight.clone()),
                })
                .collect(),
            nvars: mu.atoms.is_empty().then_some(mu.nvars),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentJson {
    pub exp: Vec<u32>,
    pub value: Exact,
}

/// `{"nvars": n, "max_degree": 2t, "moments": [{"exp": [..], "value": v}]}`.
/// Values are read exactly from their decimal text.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    pub nvars: usize,
    pub max_degree: u32,
    pub moments: Vec<MomentJson>,
}

impl TryFrom<TableJson> for MomentTable {
    type Error = MomentError;

    fn try_from(j: TableJson) -> Result<Self, MomentError> {
        let mut map = BTreeMap::new();
        for e in j.moments {
            let m = Monomial::new(e.exp);
            if map.contains_key(&m) {
                return Err(MomentError::DuplicateMoment(m.to_string()));
            }
            map.insert(m, e.value.0);
        }
        MomentTable::new_exact(j.nvars, j.max_degree, map)
    }
}

impl From<&MomentTable> for TableJson {
    fn from(t: &MomentTable) -> Self {
        let moments = t
            .values
            .iter()
            .map(|(m, v)| MomentJson {
                exp: m.exponents().to_vec(),
                value: Exact(
                    t.exact_value(m)
                        .cloned()
                        .unwrap_or_else(|| rational::from_f64(*v).expect("table values are finite")),
                ),
            })
            .collect();
        TableJson { nvars: t.nvars, max_degree: t.max_degree, moments }
    }
}

fn nonneg_sqrt(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

fn ratio_f64(num: &Rational, den: &Rational) -> f64 {
    (num / den).to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    pub(crate) fn two_point() -> AtomicMeasure {
        AtomicMeasure::from_pairs(1, vec![(vec![int(1)], rat(1, 2)), (vec![int(-1)], rat(1, 2))]).unwrap()
    }

    #[test]
    fn integrate_examples() {
        let d = AtomicMeasure::dirac(vec![int(1), int(2)]);
        assert_eq!(integrate(&d, &Polynomial::parse(2, "x1*x2").unwrap()).unwrap(), int(2));
        let mu = two_point();
        assert_eq!(integrate(&mu, &Polynomial::parse(1, "x1").unwrap()).unwrap(), int(0));
        assert_eq!(integrate(&mu, &Polynomial::parse(1, "x1^2").unwrap()).unwrap(), int(1));
        let diag = AtomicMeasure::from_pairs(
            2,
            vec![(vec![int(1), int(1)], rat(1, 2)), (vec![int(-1), int(-1)], rat(1, 2))],
        )
        .unwrap();
        assert_eq!(integrate(&diag, &Polynomial::parse(2, "x1*x2").unwrap()).unwrap(), int(1));
        assert!(integrate(&diag, &Polynomial::parse(1, "x1").unwrap()).is_err());
    }

    #[test]
    fn measure_validation() {
        assert!(AtomicMeasure::from_pairs(1, vec![(vec![int(1)], int(0))]).is_err());
        assert!(AtomicMeasure::from_pairs(1, vec![(vec![int(1)], int(1)), (vec![int(1)], int(2))]).is_err());
        assert!(AtomicMeasure::from_pairs(2, vec![(vec![int(1)], int(1))]).is_err());
    }

    #[test]
    fn table_examples() {
        let t = table_from_measure(&AtomicMeasure::dirac(vec![int(0), int(0)]), 3);
        for (m, v) in t.iter() {
            assert_eq!(v, if m.is_one() { 1.0 } else { 0.0 });
        }
        let t = table_from_measure(&two_point(), 4);
        assert_eq!(t.marginal(0), vec![1.0, 0.0, 1.0, 0.0, 1.0]);
        let scaled = table_from_measure(&two_point().scaled(&int(3)).unwrap(), 4);
        assert_eq!(scaled.marginal(0), vec![3.0, 0.0, 3.0, 0.0, 3.0]);
    }

    #[test]
    fn table_validation() {
        let mut map = BTreeMap::new();
        map.insert(Monomial::new(vec![0]), 1.0);
        assert!(MomentTable::new(1, 1, map.clone()).is_err());
        map.insert(Monomial::new(vec![1]), f64::NAN);
        assert!(MomentTable::new(1, 1, map.clone()).is_err());
        map.insert(Monomial::new(vec![1]), 0.5);
        assert!(MomentTable::new(1, 1, map.clone()).is_ok());
        map.insert(Monomial::new(vec![2]), 0.5);
        assert!(MomentTable::new(1, 1, map).is_err());
    }

    #[test]
    fn distinguish_examples() {
        let a = AtomicMeasure::dirac(vec![int(1)]);
        let b = AtomicMeasure::dirac(vec![int(-1)]);
        match distinguish_measures(&a, &b, 4).unwrap() {
            Distinction::Differ { monomial, first, second } => {
                assert_eq!(monomial, Monomial::new(vec![1]));
                assert_eq!((first, second), (int(1), int(-1)));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(distinguish_measures(&a, &a, 6).unwrap(), Distinction::AgreeToDegree(6));
        match distinguish_measures(&two_point(), &AtomicMeasure::dirac(vec![int(0)]), 4).unwrap() {
            Distinction::Differ { monomial, .. } => assert_eq!(monomial, Monomial::new(vec![2])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_round_trips() {
        let mu: AtomicMeasure = serde_json::from_str::<MeasureJson>(
            r#"{"atoms":[{"point":[1],"weight":0.5},{"point":[-1],"weight":"1/2"}]}"#,
        )
        .unwrap()
        .try_into()
        .unwrap();
        assert_eq!(mu, two_point());
        let t = table_from_measure(&mu, 4);
        let text = serde_json::to_string(&TableJson::from(&t)).unwrap();
        let back: MomentTable = serde_json::from_str::<TableJson>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, t);
        let bad = serde_json::from_str::<TableJson>(r#"{"nvars":1,"max_degree":1,"moments":[{"exp":[0],"value":1}]}"#)
            .unwrap();
        assert!(matches!(MomentTable::try_from(bad), Err(MomentError::MissingMoment(_))));
    }
}
