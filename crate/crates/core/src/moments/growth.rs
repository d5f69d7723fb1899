use num_traits::{One, Signed, Zero};

use super::positivity::{positivity_check, PositivityReport};
use super::reconstruct::gauss_nodes;
use super::{nonneg_sqrt, ratio_f64, AtomicMeasure, MomentError, MomentTable};
use crate::algebra::{Monomial, Polynomial};
use crate::rational::{self, Rational, Real};
use crate::seminorm::Seminorm;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    /// `sup |L(x^k)| / (i·r)^k` over the table; the smallest `C` with
    /// `|L(f)| ≤ C·ρ̄_{i·r}(f)` for all `f` of the table's degree.
    pub sup_ratio: Real,
    /// The same supremum restricted to each degree `0..=max_degree`.
    pub per_degree: Vec<Real>,
    /// The per-degree maxima strictly increase over the last (up to three)
    /// degrees, suggesting no finite `C` exists.
    pub growing: bool,
}

/// Continuity of `L` with respect to the extension of the weighted ℓ1 norm
/// `ρ_{i·r}`, whose value on monomials is `(i·r)^k`.
pub fn continuity_norm(table: &MomentTable, r: &[Rational], i: &Rational) -> Result<ContinuityReport, MomentError> {
    if r.len() != table.nvars() {
        return Err(MomentError::DimensionMismatch { expected: table.nvars(), found: r.len() });
    }
    if !i.is_positive() || r.iter().any(|w| !w.is_positive()) {
        return Err(MomentError::BadWeights);
    }
    let scaled: Vec<Rational> = r.iter().map(|w| w * i).collect();
    let mut per_degree: Vec<Real> = vec![Real::zero(); table.max_degree() as usize + 1];
    for (m, v) in table.iter() {
        let weight = m.weight(&scaled);
        let ratio = match table.exact_value(m) {
            Some(q) => Real::Exact(q.abs() / &weight),
            None => Real::Approx(v.abs() / rational::to_f64(&weight)),
        };
        let slot = &mut per_degree[m.degree() as usize];
        *slot = std::mem::replace(slot, Real::zero()).max(ratio);
    }
    let sup_ratio = per_degree.iter().cloned().fold(Real::zero(), Real::max);
    let tail: Vec<f64> = per_degree.iter().skip(1).map(Real::to_f64).collect();
    let window = tail.len().min(4);
    let growing = window >= 2 && tail[tail.len() - window..].windows(2).all(|w| w[1] > w[0]);
    Ok(ContinuityReport { sup_ratio, per_degree, growing })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MkSequence {
    pub values: Vec<f64>,
}

impl MkSequence {
    pub fn new(values: Vec<f64>) -> Self {
        MkSequence { values }
    }
}

/// `m_0 = √L(1)` and `m_k = √(max_i L(x_i^{2k}))`, the form of `m_k` for a
/// positive functional and `E` the coordinate basis.
pub fn mk_sequence(table: &MomentTable, k_max: u32) -> Result<MkSequence, MomentError> {
    table.require_degree(2 * k_max)?;
    let n = table.nvars();
    let unit = table.unit_value();
    if unit < 0.0 {
        return Err(MomentError::NotPositive(format!("L(1) = {unit}")));
    }
    let mut values = vec![unit.sqrt()];
    for k in 1..=k_max {
        let mut best = 0.0f64;
        for i in 0..n {
            let m = Monomial::var(n, i).pow(2 * k);
            let v = table.value(&m).expect("complete");
            if v < 0.0 {
                return Err(MomentError::NotPositive(format!("L({m}) = {v}")));
            }
            best = best.max(v);
        }
        values.push(best.sqrt());
    }
    Ok(MkSequence { values })
}

/// `m_k = √(sup |L(f_1⋯f_{2k})|)` over all products of `2k` elements of
/// `basis`, without assuming positivity. Exhaustive over multisets, so keep
/// `basis` small.
pub fn mk_unreduced(table: &MomentTable, k_max: u32, basis: &[Polynomial]) -> Result<MkSequence, MomentError> {
    table.require_degree(2 * k_max)?;
    let n = table.nvars();
    let mut values = vec![nonneg_sqrt(table.unit_value())];
    for k in 1..=k_max {
        let mut best = 0.0f64;
        let mut stack: Vec<(usize, u32, Polynomial)> = vec![(0, 0, Polynomial::one(n))];
        while let Some((start, len, prod)) = stack.pop() {
            if len == 2 * k {
                best = best.max(table.apply(&prod)?.abs());
                continue;
            }
            for (idx, f) in basis.iter().enumerate().skip(start) {
                stack.push((idx, len + 1, &prod * f));
            }
        }
        values.push(best.sqrt());
    }
    Ok(MkSequence { values })
}

/// `E = {e_i / ρ(e_i)}`: the coordinate basis scaled onto the unit sphere of
/// `ρ`, so every element has `ρ(f) ≤ 1`. In finite dimension this countable
/// set already has dense span.
pub fn unit_ball_basis(rho: &Seminorm, n: usize) -> Result<Vec<Polynomial>, MomentError> {
    rho.check_nvars(n)?;
    Ok((0..n)
        .map(|i| Polynomial::var(n, i).scale(&(Rational::one() / rho.basis_value(i))))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundedProducts {
    /// Continuity constant of `L` for the extension of `ρ`.
    pub constant: Real,
    /// `m_k` over products from the unit-ball basis.
    pub mk: MkSequence,
    /// Every `m_k ≤ √C`, so `C{m_k}` is bounded and hence quasi-analytic.
    pub pass: bool,
}

/// If `|L(f)| ≤ C·ρ̄(f)` then `|L(f_1⋯f_k)| ≤ C` whenever every `ρ(f_i) ≤ 1`.
/// Computes `C` for a weighted ℓ1 `ρ` and checks the bound on products from
/// [`unit_ball_basis`] up to half the table degree.
pub fn bounded_products_check(table: &MomentTable, rho: &Seminorm) -> Result<BoundedProducts, MomentError> {
    let n = table.nvars();
    let weights = rho.l1_weights(n).ok_or(MomentError::BadWeights)?;
    let scaled: Vec<Rational> = weights.iter().map(|w| w * rho.scale()).collect();
    let constant = continuity_norm(table, &scaled, &Rational::one())?.sup_ratio;
    let mk = mk_unreduced(table, table.max_degree() / 2, &unit_ball_basis(rho, n)?)?;
    let bound = constant.to_f64().sqrt() * (1.0 + 1e-12);
    let pass = mk.values.iter().all(|m| *m <= bound);
    Ok(BoundedProducts { constant, mk, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiAnalyticVerdict {
    QuasiAnalytic,
    NotQuasiAnalytic,
    Inconclusive,
}

impl QuasiAnalyticVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            QuasiAnalyticVerdict::QuasiAnalytic => "quasi_analytic",
            QuasiAnalyticVerdict::NotQuasiAnalytic => "not_quasi_analytic",
            QuasiAnalyticVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiAnalyticDiagnostics {
    pub verdict: QuasiAnalyticVerdict,
    /// Log-convex minorant of `m_k / m_0`.
    pub regularized: Vec<f64>,
    /// `b_k = regularized_k^{1/k}` for `k ≥ 1`.
    pub roots: Vec<f64>,
    /// `Σ_{j ≤ k} 1/b_j`; the class is quasi-analytic iff these diverge.
    pub partial_sums: Vec<f64>,
    /// Least-squares slope of `ln b_k` against `ln k` over the upper half.
    pub slope: Option<f64>,
}

/// Shortest sequence (`m_0..m_K` with `K` at least this) that is classified.
pub const MIN_CLASSIFY_LENGTH: usize = 8;

const BOUNDED_SLOPE: f64 = 0.2;
const SUPERLINEAR_SLOPE: f64 = 1.2;

/// Lower convex hull of `(k, y_k)` evaluated at every `k`.
fn lower_hull(ys: &[f64]) -> Vec<f64> {
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..ys.len() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b if it lies on or above the segment from a to k.
            let cross = (ys[b] - ys[a]) * (k - a) as f64 - (ys[k] - ys[a]) * (b - a) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = vec![0.0; ys.len()];
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for (k, slot) in out.iter_mut().enumerate().take(b + 1).skip(a) {
            *slot = ys[a] + (ys[b] - ys[a]) * (k - a) as f64 / (b - a) as f64;
        }
    }
    if hull.len() == 1 {
        out[0] = ys[0];
    }
    out
}

/// Heuristic Denjoy–Carleman classification of `C{m_k}`.
///
/// Normalizes by `m_0` (the class is unchanged by constant factors), takes
/// the log-convex regularization and fits the growth of `b_k = m_k^{1/k}`:
/// bounded growth means the series `Σ 1/b_k` diverges (quasi-analytic),
/// super-linear growth means it converges. Anything in between, and any
/// sequence shorter than [`MIN_CLASSIFY_LENGTH`] + 1, is inconclusive. A zero
/// entry contributes an infinite term and forces quasi-analyticity.
pub fn quasi_analytic_classify(m: &MkSequence) -> QuasiAnalyticDiagnostics {
    let values = &m.values;
    let mut out = QuasiAnalyticDiagnostics {
        verdict: QuasiAnalyticVerdict::Inconclusive,
        regularized: Vec::new(),
        roots: Vec::new(),
        partial_sums: Vec::new(),
        slope: None,
    };
    if values.iter().any(|v| *v == 0.0) {
        out.verdict = QuasiAnalyticVerdict::QuasiAnalytic;
        return out;
    }
    if values.len() < MIN_CLASSIFY_LENGTH + 1 || values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return out;
    }
    let logs: Vec<f64> = values.iter().map(|v| (v / values[0]).ln()).collect();
    let hull = lower_hull(&logs);
    out.regularized = hull.iter().map(|h| h.exp()).collect();
    out.roots = hull.iter().enumerate().skip(1).map(|(k, h)| (h / k as f64).exp()).collect();
    let mut acc = 0.0;
    out.partial_sums = out
        .roots
        .iter()
        .map(|b| {
            acc += 1.0 / b;
            acc
        })
        .collect();
    let kk = out.roots.len();
    let pts: Vec<(f64, f64)> = (kk / 2..kk)
        .map(|j| (((j + 1) as f64).ln(), out.roots[j].ln()))
        .collect();
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    out.slope = Some(slope);
    out.verdict = if slope <= BOUNDED_SLOPE {
        QuasiAnalyticVerdict::QuasiAnalytic
    } else if slope >= SUPERLINEAR_SLOPE {
        QuasiAnalyticVerdict::NotQuasiAnalytic
    } else {
        QuasiAnalyticVerdict::Inconclusive
    };
    out
}

/// Smallest `i` with `μ` supported in `B̄_i(ρ_r′)`: the largest dual norm
/// `max_j |α_j| / r_j` over the atoms.
pub fn support_radius(mu: &AtomicMeasure, r: &[Rational]) -> Result<Rational, MomentError> {
    let rho = Seminorm::weighted_l1(r.to_vec())?;
    let mut best = Rational::zero();
    for a in mu.atoms() {
        let d = rho.dual_norm_exact(&a.point)?.expect("weighted l1 duals are exact");
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusEstimate {
    /// `max_k (|L(x^k)| / (L(1)·r^k))^{1/|k|}`.
    pub root_test: f64,
    /// Largest `|node| / r_i` over Gauss nodes of each coordinate marginal.
    pub quadrature: Option<f64>,
    /// The larger of the two; both are lower estimates of the support radius.
    pub estimate: f64,
}

/// Lower estimate of the support radius from moments alone.
///
/// The root test converges slowly when the outermost atom has small weight.
/// Gauss nodes of each marginal lie inside the convex hull of the marginal's
/// support and coincide with its atoms once the table determines them, so
/// the combined estimate is exact for atomic measures with few atoms.
pub fn support_radius_estimate(table: &MomentTable, r: &[Rational]) -> Result<RadiusEstimate, MomentError> {
    let n = table.nvars();
    if r.len() != n {
        return Err(MomentError::DimensionMismatch { expected: n, found: r.len() });
    }
    if r.iter().any(|w| !w.is_positive()) {
        return Err(MomentError::BadWeights);
    }
    let unit = table.unit_value();
    let mut root_test = 0.0f64;
    if unit > 0.0 {
        for (m, v) in table.iter() {
            if m.is_one() || v == 0.0 {
                continue;
            }
            let ratio = match table.exact_value(m) {
                Some(q) => ratio_f64(&q.abs(), &(table.exact_value(&Monomial::one(n)).expect("exact") * m.weight(r))),
                None => v.abs() / (unit * rational::to_f64(&m.weight(r))),
            };
            root_test = root_test.max(ratio.powf(1.0 / m.degree() as f64));
        }
    }
    let max_nodes = (table.max_degree() / 2) as usize;
    let mut quadrature = Some(0.0f64);
    for (i, ri) in r.iter().enumerate() {
        let marginal = table.marginal(i);
        match gauss_nodes(&marginal, table.marginal_exact(i).as_deref(), max_nodes) {
            Ok(nodes) => {
                let reach = nodes.iter().map(|(x, _)| x.abs()).fold(0.0, f64::max) / rational::to_f64(ri);
                quadrature = quadrature.map(|q| q.max(reach));
            }
            Err(_) => quadrature = None,
        }
        if quadrature.is_none() {
            break;
        }
    }
    let estimate = root_test.max(quadrature.unwrap_or(0.0));
    Ok(RadiusEstimate { root_test, quadrature, estimate })
}

/// Hypotheses of the nuclear-space moment theorem, checked on a table:
/// positivity on squares, a continuity constant per degree for the extension
/// of `ρ_r`, and the quasi-analyticity of `C{m_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminacyReport {
    pub positivity: PositivityReport,
    pub continuity: ContinuityReport,
    pub mk: Option<MkSequence>,
    pub quasi_analytic: Option<QuasiAnalyticDiagnostics>,
}

pub fn determinacy_report(table: &MomentTable, r: &[Rational]) -> Result<DeterminacyReport, MomentError> {
    let positivity = positivity_check(table, 1)?;
    let continuity = continuity_norm(table, r, &Rational::one())?;
    let mk = positivity.pass.then(|| mk_sequence(table, table.max_degree() / 2)).transpose()?;
    let quasi_analytic = mk.as_ref().map(quasi_analytic_classify);
    Ok(DeterminacyReport { positivity, continuity, mk, quasi_analytic })
}
