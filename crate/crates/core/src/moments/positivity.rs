use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MomentError, MomentTable};
use crate::algebra::{monomials_of_degree, monomials_up_to, Monomial, Polynomial};
use crate::modules2d::{dictionary_bases, PowerModule};
use crate::rational::{self, Rational};

/// Eigenvalue slack for PSD tests, relative to the trace.
pub const PSD_TOL: f64 = 1e-9;

/// Relative slack for Hurwitz–Reznick comparisons on float tables.
pub const HURWITZ_REZNICK_TOL: f64 = 1e-12;

const SAMPLED_RANDOM_BASES: usize = 32;
const SAMPLED_SEED: u64 = 0x5EED_2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityMethod {
    /// Eigenvalues of moment or localizing matrices: exact criterion for `d = 1`.
    MomentMatrix,
    /// `L(p^{2d}·g) ≥ 0` over a fixed dictionary of `p`: necessary only.
    SampledPowers,
}

/// One PSD block (or sampled family) per generator; index 0 is the unit.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    pub generator: usize,
    pub size: usize,
    /// Smallest eigenvalue, or smallest sampled value of `L(p^{2d}·g)`.
    pub min_value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub pass: bool,
    pub method: PositivityMethod,
    pub d: u32,
    pub t: u32,
    pub blocks: Vec<BlockReport>,
}

fn localizing_block(table: &MomentTable, g: &Polynomial, basis: &[Monomial], generator: usize) -> Result<BlockReport, MomentError> {
    let size = basis.len();
    let mut mat = DMatrix::<f64>::zeros(size, size);
    for a in 0..size {
        for b in a..size {
            let m = Polynomial::monomial(table.nvars(), basis[a].mul(&basis[b]), Rational::from_integer(1.into()));
            let f = &m * g;
            let v = match table.apply_exact(&f)? {
                Some(q) => rational::to_f64(&q),
                None => table.apply(&f)?,
            };
            mat[(a, b)] = v;
            mat[(b, a)] = v;
        }
    }
    let min_value = if size == 0 {
        0.0
    } else {
        SymmetricEigen::new(mat.clone()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let tolerance = PSD_TOL * mat.trace().abs();
    Ok(BlockReport { generator, size, min_value, tolerance, pass: min_value >= -tolerance })
}

fn sampled_bases(nvars: usize, t: u32) -> Vec<Polynomial> {
    let mut bases = dictionary_bases(nvars, t);
    let monos = monomials_up_to(nvars, t);
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLED_SEED);
    for _ in 0..SAMPLED_RANDOM_BASES {
        let terms = monos.iter().map(|m| (m.clone(), rational::int(rng.random_range(-3..=3))));
        let p = Polynomial::from_terms(nvars, terms).expect("dimensions agree");
        if !p.is_zero() {
            bases.push(p);
        }
    }
    bases
}

fn sampled_block(table: &MomentTable, g: &Polynomial, d: u32, t: u32, generator: usize) -> Result<BlockReport, MomentError> {
    let bases = sampled_bases(table.nvars(), t);
    let mut min_value = f64::INFINITY;
    let mut pass = true;
    let mut tolerance: f64 = 0.0;
    for p in &bases {
        let f = &p.pow(2 * d) * g;
        match table.apply_exact(&f)? {
            Some(q) => {
                min_value = min_value.min(rational::to_f64(&q));
                pass &= !q.is_negative();
            }
            None => {
                let (v, scale) = table.apply_with_scale(&f)?;
                let tol = PSD_TOL * scale.max(1.0);
                min_value = min_value.min(v);
                tolerance = tolerance.max(tol);
                pass &= v >= -tol;
            }
        }
    }
    Ok(BlockReport { generator, size: bases.len(), min_value, tolerance, pass })
}

/// `L(ΣA^{2d}) ⊆ [0,∞)` tested with bases of degree `≤ t = max_degree/(2d)`.
pub fn positivity_check(table: &MomentTable, d: u32) -> Result<PositivityReport, MomentError> {
    positivity_check_at(table, d, table.max_degree() / (2 * d.max(1)))
}

/// Positivity with an explicit base degree `t`; needs `2d·t ≤ max_degree`.
///
/// For `d = 1` this is the PSD test of the moment matrix indexed by monomials
/// of degree `≤ t`, equivalent to `L(p²) ≥ 0` for every `p` of degree `≤ t`.
/// For `d ≥ 2` it evaluates `L(p^{2d})` over monomials, binomials and seeded
/// random integer combinations, exactly when the table is exact.
pub fn positivity_check_at(table: &MomentTable, d: u32, t: u32) -> Result<PositivityReport, MomentError> {
    let module = PowerModule::sums_of_powers(table.nvars(), d.max(1)).map_err(|e| MomentError::NotPositive(e.to_string()))?;
    m_positivity_check(table, &module, t)
}

/// `L(M) ⊆ [0,∞)` on the part of `M` visible at degree `2t`: bases `p` with
/// `deg(p^{2d}·g_j) ≤ 2t`. Necessary conditions only.
pub fn m_positivity_check(table: &MomentTable, module: &PowerModule, t: u32) -> Result<PositivityReport, MomentError> {
    if module.nvars() != table.nvars() {
        return Err(MomentError::DimensionMismatch { expected: table.nvars(), found: module.nvars() });
    }
    let d = module.d();
    table.require_degree(2 * d * t)?;
    let budget = 2 * d * t;
    let method = if d == 1 { PositivityMethod::MomentMatrix } else { PositivityMethod::SampledPowers };
    let mut blocks = Vec::new();
    for j in 0..=module.generators().len() {
        let g = module.generator(j).expect("index in range");
        let gdeg = g.degree().unwrap_or(0);
        if gdeg > budget {
            continue;
        }
        let tj = (budget - gdeg) / (2 * d);
        let block = if d == 1 {
            localizing_block(table, &g, &monomials_up_to(table.nvars(), tj), j)?
        } else {
            sampled_block(table, &g, d, tj, j)?
        };
        blocks.push(block);
    }
    Ok(PositivityReport { pass: blocks.iter().all(|b| b.pass), method, d, t, blocks })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HurwitzReznickEntry {
    pub exponent: Monomial,
    pub lhs: f64,
    pub rhs: f64,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HurwitzReznickReport {
    pub k: u32,
    pub entries: Vec<HurwitzReznickEntry>,
    pub violations: usize,
}

/// Checks `|L(x^α)| ≤ max_i L(x_i^{2k})` for every `|α| = 2k`; exact on exact
/// tables, relative tolerance [`HURWITZ_REZNICK_TOL`] otherwise.
pub fn hurwitz_reznick_check(table: &MomentTable, k: u32) -> Result<HurwitzReznickReport, MomentError> {
    table.require_degree(2 * k)?;
    let n = table.nvars();
    let pure: Vec<Monomial> = (0..n).map(|i| Monomial::var(n, i).pow(2 * k)).collect();
    let rhs = pure.iter().map(|m| table.value(m).expect("complete")).fold(f64::NEG_INFINITY, f64::max);
    let rhs_exact: Option<Rational> = table
        .exact_value(&pure[0])
        .map(|_| pure.iter().map(|m| table.exact_value(m).expect("complete").clone()).max().expect("n ≥ 1"));
    let mut entries = Vec::new();
    for alpha in monomials_of_degree(n, 2 * k) {
        let lhs = table.value(&alpha).expect("complete").abs();
        let violation = match (&rhs_exact, table.exact_value(&alpha)) {
            (Some(r), Some(q)) => q.abs() > *r,
            _ => lhs > rhs + HURWITZ_REZNICK_TOL * rhs.abs().max(lhs),
        };
        entries.push(HurwitzReznickEntry { exponent: alpha, lhs, rhs, violation });
    }
    let violations = entries.iter().filter(|e| e.violation).count();
    Ok(HurwitzReznickReport { k, entries, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::tests::two_point;
    use crate::moments::{table_from_measure, AtomicMeasure};
    use crate::rational::{int, rat};

    #[test]
    fn two_point_moment_matrix_is_identity() {
        let t = table_from_measure(&two_point(), 2);
        let r = positivity_check_at(&t, 1, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.method, PositivityMethod::MomentMatrix);
        assert_eq!(r.blocks[0].size, 2);
        assert!((r.blocks[0].min_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_second_moment_fails() {
        let t = MomentTable::univariate(&[1.0, 0.0, -1.0]).unwrap();
        assert!(!positivity_check(&t, 1).unwrap().pass);
    }

    #[test]
    fn atomic_tables_pass_for_all_powers() {
        let mu = AtomicMeasure::from_pairs(
            2,
            vec![(vec![int(1), rat(-1, 2)], rat(1, 3)), (vec![int(-2), int(1)], rat(2, 3))],
        )
        .unwrap();
        let t = table_from_measure(&mu, 12);
        for d in 1..=3 {
            let r = positivity_check(&t, d).unwrap();
            assert!(r.pass, "d = {d}: {r:?}");
        }
        assert_eq!(positivity_check(&t, 2).unwrap().method, PositivityMethod::SampledPowers);
    }

    #[test]
    fn localizing_examples() {
        let m = PowerModule::new(
            1,
            1,
            vec![Polynomial::parse(1, "x1").unwrap(), Polynomial::parse(1, "1 - x1").unwrap()],
        )
        .unwrap();
        let inside = table_from_measure(&AtomicMeasure::dirac(vec![rat(1, 2)]), 4);
        assert!(m_positivity_check(&inside, &m, 2).unwrap().pass);
        let outside = table_from_measure(&AtomicMeasure::dirac(vec![int(2)]), 4);
        let r = m_positivity_check(&outside, &m, 2).unwrap();
        assert!(!r.pass);
        assert!(!r.blocks[2].pass);
        let zero = MomentTable::univariate(&[0.0; 5]).unwrap();
        assert!(m_positivity_check(&zero, &m, 2).unwrap().pass);
        assert!(m_positivity_check(&zero, &m, 3).is_err());
    }

    #[test]
    fn hurwitz_reznick_examples() {
        let diag = AtomicMeasure::from_pairs(
            2,
            vec![(vec![int(1), int(1)], rat(1, 2)), (vec![int(-1), int(-1)], rat(1, 2))],
        )
        .unwrap();
        let r = hurwitz_reznick_check(&table_from_measure(&diag, 2), 1).unwrap();
        assert_eq!(r.violations, 0);
        let mixed = r.entries.iter().find(|e| e.exponent == Monomial::new(vec![1, 1])).unwrap();
        assert_eq!((mixed.lhs, mixed.rhs), (1.0, 1.0));

        let origin = table_from_measure(&AtomicMeasure::dirac(vec![int(0), int(0)]), 6);
        assert_eq!(hurwitz_reznick_check(&origin, 3).unwrap().violations, 0);

        let r = hurwitz_reznick_check(&table_from_measure(&AtomicMeasure::dirac(vec![int(2), int(1)]), 4), 2).unwrap();
        let e = r.entries.iter().find(|e| e.exponent == Monomial::new(vec![2, 2])).unwrap();
        assert_eq!((e.lhs, e.rhs), (4.0, 16.0));
        assert_eq!(r.violations, 0);

        let bad = MomentTable::univariate(&[1.0, 0.0, 1.0]).unwrap();
        assert!(hurwitz_reznick_check(&bad, 2).is_err());
    }
}
