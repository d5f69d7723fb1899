//! 2d-power modules `M = ΣA^{2d} + ΣA^{2d}·g_1 + ⋯ + ΣA^{2d}·g_s` of the
//! polynomial algebra, their positivity sets `X_M`, and a sound search for
//! exact membership certificates.
//!
//! The search fixes a finite dictionary of bases `p` of degree `≤ t` and asks
//! for nonnegative rationals `c` with `a = Σ c·p^{2d}·g_j`. The dictionary holds
//! every monomial `m` and every binomial `m ± m′` (so for `d = 1` it spans the
//! diagonally dominant sums of squares), which keeps the problem linear in
//! `c`. It is solved by exact rational simplex, so every reported certificate
//! re-expands to its target with zero tolerance. `NotFound` is not a proof of
//! non-membership; when possible it comes with a point of `X_M` where the
//! target is negative, which is.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{monomials_up_to, AlgebraError, Monomial, Polynomial};
use crate::feasibility::nonnegative_solution;
use crate::rational::{self, Exact, Rational};
use crate::spectrum::{SpectrumBall, SpectrumError};

/// Upper bound on `rows × columns` of the feasibility tableau.
pub const MAX_TABLEAU_ENTRIES: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuleError {
    #[error("power parameter d must be at least 1")]
    ZeroPower,
    #[error("generator {index} has {found} variables, module has {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("epsilon must be strictly positive")]
    NonPositiveEpsilon,
    #[error("dictionary too large: {rows} x {columns} exceeds the tableau budget")]
    BudgetTooLarge { rows: usize, columns: usize },
    #[error("module has no generators and no explicit nvars")]
    UnknownDimension,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerModule {
    nvars: usize,
    d: u32,
    generators: Vec<Polynomial>,
}

impl PowerModule {
    pub fn new(nvars: usize, d: u32, generators: Vec<Polynomial>) -> Result<Self, ModuleError> {
        if d == 0 {
            return Err(ModuleError::ZeroPower);
        }
        for (index, g) in generators.iter().enumerate() {
            if g.nvars() != nvars {
                return Err(ModuleError::DimensionMismatch { index: index + 1, expected: nvars, found: g.nvars() });
            }
        }
        Ok(PowerModule { nvars, d, generators })
    }

    /// `ΣA^{2d}`, the module with only the implicit generator 1.
    pub fn sums_of_powers(nvars: usize, d: u32) -> Result<Self, ModuleError> {
        PowerModule::new(nvars, d, Vec::new())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Generator by certificate index: 0 is the implicit unit, `j ≥ 1` is `g_j`.
    pub fn generator(&self, index: usize) -> Option<Polynomial> {
        match index {
            0 => Some(Polynomial::one(self.nvars)),
            j => self.generators.get(j - 1).cloned(),
        }
    }

    /// `v* ∈ X_M` in floating point: every generator is `≥ -1e-12` at `v*`.
    pub fn xm_contains(&self, point: &[f64]) -> Result<bool, ModuleError> {
        for g in &self.generators {
            if g.evaluate_f64(point)? < -1e-12 {
                return Ok(false);
            }
        }
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: point.len() }.into());
        }
        Ok(true)
    }

    /// `v* ∈ X_M` decided exactly at a rational point.
    pub fn xm_contains_exact(&self, point: &[Rational]) -> Result<bool, ModuleError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: point.len() }.into());
        }
        for g in &self.generators {
            if g.evaluate(point)?.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateTerm {
    pub coefficient: Rational,
    pub base: Polynomial,
    /// 0 for the implicit unit generator, `j` for `g_j`.
    pub generator: usize,
}

/// `target = Σ c·p^{2d}·g_j` with every `c ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub target: Polynomial,
    pub d: u32,
    pub terms: Vec<CertificateTerm>,
}

impl Certificate {
    pub fn expand(&self, module: &PowerModule) -> Option<Polynomial> {
        let mut acc = Polynomial::zero(self.target.nvars());
        for t in &self.terms {
            let g = module.generator(t.generator)?;
            acc = &acc + &(&t.base.pow(2 * self.d) * &g).scale(&t.coefficient);
        }
        Some(acc)
    }

    /// Exact re-expansion check with zero tolerance.
    pub fn verify(&self, module: &PowerModule) -> bool {
        self.d == module.d()
            && self.terms.iter().all(|t| !t.coefficient.is_negative())
            && self.expand(module).as_ref() == Some(&self.target)
    }

    /// `target + δ` for `δ ≥ 0`, obtained by adding `δ·1^{2d}·1`.
    pub fn shifted(&self, delta: &Rational) -> Certificate {
        let n = self.target.nvars();
        let mut out = self.clone();
        out.target = &self.target + &Polynomial::constant(n, delta.clone());
        if delta.is_zero() {
            return out;
        }
        match out
            .terms
            .iter_mut()
            .find(|t| t.generator == 0 && t.base == Polynomial::one(n))
        {
            Some(t) => t.coefficient += delta,
            None => out.terms.push(CertificateTerm {
                coefficient: delta.clone(),
                base: Polynomial::one(n),
                generator: 0,
            }),
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found(Certificate),
    NotFound {
        /// A rational point of `X_M` where the target is negative; its
        /// presence proves the target is not in `M`.
        negativity_witness: Option<Vec<Rational>>,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

/// Bases of degree `≤ t`: monomials first, then `m_a + m_b`, then `m_a - m_b`.
pub fn dictionary_bases(nvars: usize, t: u32) -> Vec<Polynomial> {
    let monos = monomials_up_to(nvars, t);
    let as_poly = |m: &Monomial| Polynomial::monomial(nvars, m.clone(), Rational::one());
    let mut out: Vec<Polynomial> = monos.iter().map(as_poly).collect();
    for sign in [Rational::one(), -Rational::one()] {
        for a in 0..monos.len() {
            for b in a + 1..monos.len() {
                out.push(&as_poly(&monos[a]) + &as_poly(&monos[b]).scale(&sign));
            }
        }
    }
    out
}

/// Expanded dictionary `{p^{2d}·g_j}` indexed by a shared monomial basis.
struct Dictionary {
    entries: Vec<(Polynomial, usize)>,
    rows: BTreeMap<Monomial, usize>,
    columns: Vec<Vec<Rational>>,
}

impl Dictionary {
    fn build(module: &PowerModule, t: u32) -> Result<Self, ModuleError> {
        let bases = dictionary_bases(module.nvars, t);
        let ngens = module.generators.len() + 1;
        let ncols = bases.len() * ngens;
        let max_deg = 2 * module.d * t
            + module.generators.iter().filter_map(Polynomial::degree).max().unwrap_or(0);
        let est_rows = monomials_up_to(module.nvars, 0).len().max(binomial(module.nvars as u64 + max_deg as u64, max_deg as u64));
        if est_rows.saturating_mul(ncols) > MAX_TABLEAU_ENTRIES {
            return Err(ModuleError::BudgetTooLarge { rows: est_rows, columns: ncols });
        }
        let mut entries = Vec::with_capacity(ncols);
        let mut expanded = Vec::with_capacity(ncols);
        for j in 0..ngens {
            let g = module.generator(j).expect("generator index in range");
            for p in &bases {
                let col = &p.pow(2 * module.d) * &g;
                if col.is_zero() {
                    continue;
                }
                expanded.push(col);
                entries.push((p.clone(), j));
            }
        }
        let mut rows = BTreeMap::new();
        for col in &expanded {
            for (m, _) in col.terms() {
                let next = rows.len();
                rows.entry(m.clone()).or_insert(next);
            }
        }
        let columns = expanded
            .iter()
            .map(|col| {
                let mut v = vec![Rational::zero(); rows.len()];
                for (m, c) in col.terms() {
                    v[rows[m]] = c.clone();
                }
                v
            })
            .collect();
        Ok(Dictionary { entries, rows, columns })
    }

    fn solve(&self, module: &PowerModule, target: &Polynomial) -> Option<Certificate> {
        let mut rhs = vec![Rational::zero(); self.rows.len()];
        for (m, c) in target.terms() {
            rhs[*self.rows.get(m)?] = c.clone();
        }
        let x = nonnegative_solution(&self.columns, &rhs)?;
        let terms = x
            .into_iter()
            .zip(&self.entries)
            .filter(|(c, _)| !c.is_zero())
            .map(|(coefficient, (base, generator))| CertificateTerm {
                coefficient,
                base: base.clone(),
                generator: *generator,
            })
            .collect();
        let cert = Certificate { target: target.clone(), d: module.d, terms };
        // The simplex is exact, so this only guards against dictionary bugs.
        cert.verify(module).then_some(cert)
    }
}

fn binomial(n: u64, k: u64) -> usize {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Looks for a rational point of `X_M` where `a < 0`: a small grid for
/// `n ≤ 4`, seeded random rationals beyond.
pub fn negativity_witness(module: &PowerModule, a: &Polynomial) -> Result<Option<Vec<Rational>>, ModuleError> {
    let n = module.nvars;
    let values: Vec<Rational> = [0, 1, -1, 2, -2, 4, -4]
        .iter()
        .map(|&k| rational::rat(k, 2))
        .collect();
    let check = |p: Vec<Rational>| -> Result<Option<Vec<Rational>>, ModuleError> {
        if a.evaluate(&p)?.is_negative() && module.xm_contains_exact(&p)? {
            return Ok(Some(p));
        }
        Ok(None)
    };
    if n <= 4 {
        let total = values.len().pow(n as u32);
        for mut idx in 0..total {
            let mut p = Vec::with_capacity(n);
            for _ in 0..n {
                p.push(values[idx % values.len()].clone());
                idx /= values.len();
            }
            if let Some(w) = check(p)? {
                return Ok(Some(w));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
        for _ in 0..4096 {
            let p = (0..n).map(|_| rational::rat(rng.random_range(-16..=16), 4)).collect();
            if let Some(w) = check(p)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Sound, incomplete search for `a ∈ M` with bases of degree `≤ t`.
///
/// Complete relative to the dictionary: if some nonnegative combination of
/// dictionary elements equals `a`, it is found. Larger `t` only enlarges the
/// dictionary, so success is monotone in `t`.
pub fn certificate_search(module: &PowerModule, a: &Polynomial, t: u32) -> Result<SearchOutcome, ModuleError> {
    if a.nvars() != module.nvars {
        return Err(AlgebraError::DimensionMismatch { expected: module.nvars, found: a.nvars() }.into());
    }
    let dict = Dictionary::build(module, t)?;
    match dict.solve(module, a) {
        Some(c) => Ok(SearchOutcome::Found(c)),
        None => Ok(SearchOutcome::NotFound { negativity_witness: negativity_witness(module, a)? }),
    }
}

/// Searches for a certificate of `a + ε ∈ M`.
pub fn jacobi_epsilon_check(
    module: &PowerModule,
    a: &Polynomial,
    epsilon: &Rational,
    t: u32,
) -> Result<SearchOutcome, ModuleError> {
    if !epsilon.is_positive() {
        return Err(ModuleError::NonPositiveEpsilon);
    }
    let shifted = a + &Polynomial::constant(a.nvars(), epsilon.clone());
    certificate_search(module, &shifted, t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMinimum {
    /// `None` when no sample lies in `X_M ∩ ball`.
    pub min_value: Option<f64>,
    pub argmin: Option<Vec<f64>>,
    pub considered: usize,
    /// The minimum is negative and re-checks exactly at the rational argmin,
    /// which lies in `X_M ∩ ball`: `a` is not nonnegative there.
    pub disproof: bool,
}

/// Minimum of `a` over the samples that lie in `X_M ∩ ball`.
pub fn pos_on_spectrum(
    a: &Polynomial,
    module: &PowerModule,
    ball: &SpectrumBall,
    samples: &[Vec<f64>],
) -> Result<SpectrumMinimum, ModuleError> {
    let mut out = SpectrumMinimum { min_value: None, argmin: None, considered: 0, disproof: false };
    for s in samples {
        if !ball.contains(s)? || !module.xm_contains(s)? {
            continue;
        }
        out.considered += 1;
        let v = a.evaluate_f64(s)?;
        if out.min_value.is_none_or(|m| v < m) {
            out.min_value = Some(v);
            out.argmin = Some(s.clone());
        }
    }
    if let (Some(m), Some(p)) = (out.min_value, &out.argmin) {
        if m < 0.0 {
            let q: Vec<Rational> = p.iter().map(|x| rational::from_f64(*x).expect("finite sample")).collect();
            out.disproof = a.evaluate(&q)?.is_negative()
                && module.xm_contains_exact(&q)?
                && ball.contains_exact(&q)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchimedeanWitness {
    pub k: u64,
    pub certificate: Certificate,
    /// Set for `d > 1`, where `k - Σ x_i^{2d} ∈ M` is not known to imply
    /// that `M` is archimedean.
    pub heuristic: bool,
}

/// Largest power of two tried in the doubling phase.
pub const MAX_ARCHIMEDEAN_EXPONENT: u32 = 20;

/// Smallest integer `k` (doubling, then bisection) with a certificate for
/// `k - Σ x_i^{2d} ∈ M` at budget `t`.
pub fn archimedean_witness(module: &PowerModule, t: u32) -> Result<Option<ArchimedeanWitness>, ModuleError> {
    let n = module.nvars;
    let power_sum = (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &Polynomial::var(n, i).pow(2 * module.d));
    let dict = Dictionary::build(module, t)?;
    let attempt = |k: u64| {
        let target = &Polynomial::constant(n, Rational::from_integer(k.into())) - &power_sum;
        dict.solve(module, &target)
    };
    let mut found: Option<(u64, Certificate)> = None;
    for e in 0..=MAX_ARCHIMEDEAN_EXPONENT {
        let k = 1u64 << e;
        if let Some(c) = attempt(k) {
            found = Some((k, c));
            break;
        }
    }
    let Some((mut hi, mut cert)) = found else {
        return Ok(None);
    };
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match attempt(mid) {
            Some(c) => {
                hi = mid;
                cert = c;
            }
            None => lo = mid,
        }
    }
    Ok(Some(ArchimedeanWitness { k: hi, certificate: cert, heuristic: module.d > 1 }))
}

/// `{"d": 1, "generators": [polynomial, …], "nvars": n}`; `nvars` may be
/// omitted when there is at least one generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerModuleJson {
    pub d: u32,
    #[serde(default)]
    pub generators: Vec<Polynomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nvars: Option<usize>,
}

impl PowerModuleJson {
    /// Builds the module, taking the dimension from the generators, the
    /// explicit `nvars` field, or `fallback` in that order.
    pub fn build(self, fallback: Option<usize>) -> Result<PowerModule, ModuleError> {
        let nvars = self
            .generators
            .first()
            .map(Polynomial::nvars)
            .or(self.nvars)
            .or(fallback)
            .ok_or(ModuleError::UnknownDimension)?;
        if let Some(explicit) = self.nvars {
            if explicit != nvars {
                return Err(ModuleError::DimensionMismatch { index: 0, expected: explicit, found: nvars });
            }
        }
        PowerModule::new(nvars, self.d, self.generators)
    }
}

impl From<&PowerModule> for PowerModuleJson {
    fn from(m: &PowerModule) -> Self {
        PowerModuleJson { d: m.d, generators: m.generators.clone(), nvars: Some(m.nvars) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateTermJson {
    pub coefficient: Exact,
    pub base: Polynomial,
    pub generator: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub found: bool,
    pub d: u32,
    pub target: Polynomial,
    pub terms: Vec<CertificateTermJson>,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        CertificateJson {
            found: true,
            d: c.d,
            target: c.target.clone(),
            terms: c
                .terms
                .iter()
                .map(|t| CertificateTermJson {
                    coefficient: Exact(t.coefficient.clone()),
                    base: t.base.clone(),
                    generator: t.generator,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::seminorm::Seminorm;

    fn p(n: usize, s: &str) -> Polynomial {
        Polynomial::parse(n, s).unwrap()
    }

    fn interval_module() -> PowerModule {
        PowerModule::new(1, 1, vec![p(1, "x1"), p(1, "1 - x1")]).unwrap()
    }

    #[test]
    fn xm_examples() {
        let m = interval_module();
        assert!(m.xm_contains(&[0.5]).unwrap());
        assert!(!m.xm_contains(&[2.0]).unwrap());
        assert!(m.xm_contains_exact(&[rat(1, 2)]).unwrap());
        let free = PowerModule::sums_of_powers(2, 1).unwrap();
        assert!(free.xm_contains(&[-100.0, 3.0]).unwrap());
        let ring = PowerModule::new(1, 1, vec![p(1, "x1^2 - 1")]).unwrap();
        assert!(!ring.xm_contains(&[0.0]).unwrap());
        assert!(PowerModule::new(1, 0, vec![]).is_err());
        assert!(PowerModule::new(2, 1, vec![p(1, "x1")]).is_err());
    }

    #[test]
    fn square_is_found() {
        let m = PowerModule::sums_of_powers(1, 1).unwrap();
        let out = certificate_search(&m, &p(1, "x1^2"), 1).unwrap();
        let c = out.certificate().unwrap();
        assert!(c.verify(&m));
        assert_eq!(c.terms.len(), 1);
        assert_eq!(c.terms[0].coefficient, int(1));
        assert_eq!(c.terms[0].base, p(1, "x1"));
        assert_eq!(c.terms[0].generator, 0);
    }

    #[test]
    fn negative_constant_has_witness() {
        let m = PowerModule::sums_of_powers(1, 1).unwrap();
        match certificate_search(&m, &p(1, "-1"), 3).unwrap() {
            SearchOutcome::NotFound { negativity_witness: Some(w) } => {
                assert!(p(1, "-1").evaluate(&w).unwrap().is_negative());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shifted_interval_product_is_found() {
        let m = interval_module();
        let a = p(1, "x1 - x1^2 + 1/10");
        let c = certificate_search(&m, &a, 3).unwrap();
        assert!(c.certificate().unwrap().verify(&m));
        let j = jacobi_epsilon_check(&m, &p(1, "x1 - x1^2"), &rat(1, 10), 3).unwrap();
        assert!(j.certificate().unwrap().verify(&m));
        let bigger = j.certificate().unwrap().shifted(&rat(2, 5));
        assert!(bigger.verify(&m));
        assert!(jacobi_epsilon_check(&m, &a, &int(0), 3).is_err());
    }

    #[test]
    fn epsilon_check_examples() {
        let free = PowerModule::sums_of_powers(1, 1).unwrap();
        assert!(jacobi_epsilon_check(&free, &p(1, "x1^2"), &rat(1, 7), 1).unwrap().is_found());
        match jacobi_epsilon_check(&free, &p(1, "-1"), &rat(1, 2), 2).unwrap() {
            SearchOutcome::NotFound { negativity_witness } => assert!(negativity_witness.is_some()),
            _ => panic!("-1/2 cannot be a sum of squares"),
        }
    }

    #[test]
    fn quartic_powers() {
        let m = PowerModule::sums_of_powers(2, 2).unwrap();
        let a = p(2, "x1^4 + 4 x1^3 x2 + 6 x1^2 x2^2 + 4 x1 x2^3 + x2^4 + 3");
        let c = certificate_search(&m, &a, 1).unwrap();
        assert!(c.certificate().unwrap().verify(&m));
    }

    #[test]
    fn spectrum_minimum_examples() {
        let free = PowerModule::sums_of_powers(1, 1).unwrap();
        let ball = SpectrumBall::unit(Seminorm::lp(1.0).unwrap());
        let samples = crate::spectrum::sample_ball(&ball, 1, 50, 3).unwrap();
        let r = pos_on_spectrum(&p(1, "1 - x1^2"), &free, &ball, &samples).unwrap();
        assert_eq!(r.min_value, Some(0.0));
        assert_eq!(r.argmin.as_ref().unwrap()[0].abs(), 1.0);
        assert!(!r.disproof);
        let one = pos_on_spectrum(&Polynomial::one(1), &free, &ball, &samples).unwrap();
        assert_eq!(one.min_value, Some(1.0));
        let neg = pos_on_spectrum(&p(1, "-x1^2"), &free, &ball, &samples).unwrap();
        assert_eq!(neg.min_value, Some(-1.0));
        assert!(neg.disproof);
    }

    #[test]
    fn archimedean_examples() {
        let box_module = PowerModule::new(2, 1, vec![p(2, "1 - x1^2"), p(2, "1 - x2^2")]).unwrap();
        let w = archimedean_witness(&box_module, 1).unwrap().unwrap();
        assert_eq!(w.k, 2);
        assert!(w.certificate.verify(&box_module));
        assert_eq!(w.certificate.target, p(2, "2 - x1^2 - x2^2"));
        assert!(!w.heuristic);

        let ballm = PowerModule::new(2, 1, vec![p(2, "1 - x1^2 - x2^2")]).unwrap();
        assert_eq!(archimedean_witness(&ballm, 1).unwrap().unwrap().k, 1);

        let free = PowerModule::sums_of_powers(1, 1).unwrap();
        assert!(archimedean_witness(&free, 2).unwrap().is_none());
    }

    #[test]
    fn oversized_dictionary_is_a_resource_error() {
        let m = PowerModule::sums_of_powers(6, 1).unwrap();
        assert!(matches!(
            certificate_search(&m, &p(6, "x1^2"), 6),
            Err(ModuleError::BudgetTooLarge { .. })
        ));
    }

    #[test]
    fn module_json() {
        let j: PowerModuleJson =
            serde_json::from_str(r#"{"d":1,"generators":[{"nvars":1,"terms":[{"exp":[1],"coef":1}]}]}"#).unwrap();
        let m = j.build(None).unwrap();
        assert_eq!(m.generators().len(), 1);
        let empty: PowerModuleJson = serde_json::from_str(r#"{"d":1,"generators":[]}"#).unwrap();
        assert!(empty.clone().build(None).is_err());
        assert_eq!(empty.build(Some(3)).unwrap().nvars(), 3);
    }
}
