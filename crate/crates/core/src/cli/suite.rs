//! Named batch checks behind `symm suite run`.
//!
//! Each check draws its cases from a ChaCha8 stream keyed by the suite seed
//! and the check name, so adding or reordering checks never changes another
//! check's inputs. Checks run on scoped threads; results are assembled in
//! config order.

use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{parse_json, Context, InputError, Outcome, Verdict};
use crate::algebra::{monomials_up_to, Monomial, Polynomial};
use crate::extension::{ext_exact, ext_lower_bound_exact, ext_upper_bound, ext_weighted_l1};
use crate::hilbert_scale::{quasi_nuclear_embedding, ScaleIndex};
use crate::modules2d::{certificate_search, jacobi_epsilon_check, PowerModule, SearchOutcome};
use crate::moments::{
    continuity_norm, hurwitz_reznick_check, positivity_check, positivity_check_at, quasi_analytic_classify,
    reconstruct_univariate, support_radius, support_radius_estimate, table_from_measure, AtomicMeasure, MkSequence,
    MomentTable, QuasiAnalyticVerdict,
};
use crate::rational::{self, int, rat, Rational, Real};
use crate::seminorm::{dominates, Seminorm};
use crate::spectrum::{sample_ball, SpectrumBall};

/// Every check, in default order.
pub const CHECK_NAMES: [&str; 13] = [
    "closed_form_extension",
    "submultiplicativity",
    "spectrum_dual_ball",
    "lp_ball_example",
    "dominance_non_inheritance",
    "correspondence_round_trip",
    "continuity_criterion",
    "positivity_machinery",
    "hurwitz_reznick",
    "jacobi_epsilon",
    "quasi_analytic_classifier",
    "quasi_nuclear_criterion",
    "cli_determinism",
];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: String,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Number of random cases, where the check has any.
    #[serde(default)]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub checks: Option<Vec<CheckSpec>>,
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub pass: bool,
    pub summary: Value,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

/// Counts cases and remembers the first failure.
struct Tally {
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: 0, first: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn error(&mut self, what: String) {
        self.record(false, || what);
    }

    fn finish(self, extra: Value) -> CheckResult {
        let mut summary = json!({"cases": self.cases, "failures": self.failures});
        if let (Value::Object(s), Value::Object(e)) = (&mut summary, extra) {
            s.extend(e);
        }
        CheckResult { pass: self.failures == 0 && self.cases > 0, summary, first_failure: self.first }
    }
}

fn check_rng(seed: u64, name: &str) -> ChaCha8Rng {
    let h = Sha256::digest(name.as_bytes());
    let mut key = [0u8; 8];
    key.copy_from_slice(&h[..8]);
    ChaCha8Rng::seed_from_u64(seed ^ u64::from_le_bytes(key))
}

fn rand_rat(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rat(rng.random_range(-max_num..=max_num), rng.random_range(1..=max_den))
}

fn rand_poly(rng: &mut ChaCha8Rng, n: usize, max_deg: u32, max_terms: usize, nonneg: bool) -> Polynomial {
    let terms = rng.random_range(1..=max_terms);
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let deg = rng.random_range(0..=max_deg);
        let mut exps = vec![0u32; n];
        for _ in 0..deg {
            exps[rng.random_range(0..n)] += 1;
        }
        let mut c = rand_rat(rng, 9, 6);
        if nonneg {
            c = c.abs();
        }
        out.push((Monomial::new(exps), c));
    }
    Polynomial::from_terms(n, out).expect("dimensions agree")
}

fn rand_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.random_range(1..=12), rng.random_range(1..=4))).collect()
}

/// Distinct points from `point`, weights normalized to `mass`.
fn rand_measure(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_atoms: usize,
    mass: &Rational,
    mut point: impl FnMut(&mut ChaCha8Rng) -> Vec<Rational>,
) -> AtomicMeasure {
    let k = rng.random_range(1..=max_atoms);
    let mut points: Vec<Vec<Rational>> = Vec::with_capacity(k);
    let mut guard = 0;
    while points.len() < k && guard < 100 * k {
        guard += 1;
        let p = point(rng);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let raw: Vec<Rational> = points.iter().map(|_| int(rng.random_range(1..=20))).collect();
    let total: Rational = raw.iter().sum();
    let pairs = points.into_iter().zip(raw.into_iter().map(|w| w / &total * mass)).collect();
    AtomicMeasure::from_pairs(n, pairs).expect("distinct points, positive weights")
}

fn poly_string(f: &Polynomial) -> String {
    f.to_string()
}

fn closed_form_extension(seed: u64, count: Option<usize>) -> CheckResult {
    let mut rng = check_rng(seed, "closed_form_extension");
    let mut tally = Tally::new();
    for _ in 0..count.unwrap_or(1000) {
        let n = rng.random_range(1..=4);
        let r = rand_weights(&mut rng, n);
        let scale = rat(rng.random_range(1..=3), rng.random_range(1..=2));
        let f = rand_poly(&mut rng, n, 6, 6, false);
        let mut direct = Rational::zero();
        for (m, a) in f.terms() {
            let mut w = a.abs();
            for (j, e) in m.exponents().iter().enumerate() {
                w *= rational::pow(&(&r[j] * &scale), *e);
            }
            direct += w;
        }
        match ext_weighted_l1(&r, &scale, &f) {
            Ok(v) => tally.record(v == direct, || format!("f = {}: {} vs {}", poly_string(&f), v, direct)),
            Err(e) => tally.error(e.to_string()),
        }
    }
    tally.finish(json!({}))
}

fn submultiplicativity(seed: u64, count: Option<usize>) -> CheckResult {
    let mut rng = check_rng(seed, "submultiplicativity");
    let total = count.unwrap_or(1000);
    let nonneg_cases = (total / 5).max(1);
    let mut tally = Tally::new();
    let mut equalities = 0usize;
    for case in 0..total + nonneg_cases {
        let nonneg = case >= total;
        let n = rng.random_range(1..=3);
        let rho = Seminorm::weighted_l1(rand_weights(&mut rng, n)).expect("positive weights");
        let f = rand_poly(&mut rng, n, 3, 4, nonneg);
        let g = rand_poly(&mut rng, n, 3, 4, nonneg);
        let vals = (|| -> Result<_, crate::extension::ExtensionError> {
            Ok((
                ext_exact(&rho, &(&f * &g))?.expect("closed form"),
                ext_exact(&rho, &f)?.expect("closed form"),
                ext_exact(&rho, &g)?.expect("closed form"),
            ))
        })();
        match vals {
            Ok((fg, a, b)) => {
                let prod = &a * &b;
                if nonneg {
                    equalities += usize::from(fg == prod);
                    tally.record(fg == prod, || format!("nonnegative pair not equal: {fg} vs {prod}"));
                } else {
                    tally.record(fg <= prod, || format!("{fg} > {prod} for f = {}, g = {}", poly_string(&f), poly_string(&g)));
                }
            }
            Err(e) => tally.error(e.to_string()),
        }
    }
    tally.finish(json!({"equalities": equalities}))
}

fn random_seminorm(rng: &mut ChaCha8Rng, n: usize) -> Seminorm {
    match rng.random_range(0..4) {
        0 => Seminorm::weighted_l1(rand_weights(rng, n)).expect("positive weights"),
        1 => Seminorm::lp(1.0).expect("valid"),
        2 => Seminorm::lp(2.0).expect("valid"),
        _ => Seminorm::lp(3.0).expect("valid"),
    }
}

fn spectrum_dual_ball(seed: u64, count: Option<usize>) -> CheckResult {
    let mut rng = check_rng(seed, "spectrum_dual_ball");
    let mut tally = Tally::new();
    for _ in 0..count.unwrap_or(500) {
        let n = rng.random_range(1..=3);
        let rho = random_seminorm(&mut rng, n);
        let f = rand_poly(&mut rng, n, 4, 5, false);
        let ball = SpectrumBall::unit(rho.clone());
        let sample_seed = rng.random::<u64>();
        let pick = rng.random_range(0..16);
        let outcome = (|| -> Result<(f64, f64, Rational), String> {
            let points = sample_ball(&ball, n, 16, sample_seed).map_err(|e| e.to_string())?;
            let v = &points[pick];
            let dual = rho.dual_norm(v).map_err(|e| e.to_string())?;
            let value = f.evaluate_f64(v).map_err(|e| e.to_string())?.abs();
            let bound = match ext_exact(&rho, &f).map_err(|e| e.to_string())? {
                Some(q) => q,
                None => ext_upper_bound(&rho, &f).map_err(|e| e.to_string())?.0,
            };
            Ok((dual, value, bound))
        })();
        match outcome {
            Ok((dual, value, bound)) => {
                let b = rational::to_f64(&bound);
                tally.record(dual <= 1.0 + 1e-12 && value <= b + 1e-10 * b.max(1.0), || {
                    format!("|f(v*)| = {value} > {b} (dual norm {dual}) for f = {}", poly_string(&f))
                })
            }
            Err(e) => tally.error(e),
        }
    }
    // Box vertices attain the closed form on nonnegative coefficients.
    let mut vertex_cases = 0usize;
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let rho = Seminorm::weighted_l1(rand_weights(&mut rng, n)).expect("positive weights");
        let f = rand_poly(&mut rng, n, 5, 5, true);
        let ball = SpectrumBall::unit(rho.clone());
        let vertices = ball.box_vertices(n, 1 << n, 0).unwrap_or_default();
        vertex_cases += 1;
        match (ext_lower_bound_exact(&rho, &f, &vertices), ext_exact(&rho, &f)) {
            (Ok((lower, _)), Ok(Some(exact))) => {
                tally.record(lower == exact, || format!("vertex bound {lower} != closed form {exact}"))
            }
            (a, b) => tally.error(format!("{:?} {:?}", a.err(), b.err())),
        }
    }
    tally.finish(json!({"vertex_cases": vertex_cases}))
}

fn lp_ball_example(seed: u64, count: Option<usize>) -> CheckResult {
    let mut rng = check_rng(seed, "lp_ball_example");
    let total = count.unwrap_or(1000);
    let mut tally = Tally::new();
    let l1 = SpectrumBall::unit(Seminorm::lp(1.0).expect("valid"));
    for _ in 0..total {
        let n = rng.random_range(1..=4);
        let v: Vec<Rational> = (0..n).map(|_| rat(rng.random_range(-12..=12), 8)).collect();
        let expected = v.iter().all(|x| x.abs() <= Rational::one());
        match l1.contains_exact(&v) {
            Ok(got) => tally.record(got == expected, || format!("p = 1 at {v:?}: {got}")),
            Err(e) => tally.error(e.to_string()),
        }
    }
    let l2 = SpectrumBall::unit(Seminorm::lp(2.0).expect("valid"));
    let mut ambiguous = 0usize;
    for _ in 0..total {
        let n = rng.random_range(1..=4);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.2..1.2)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() <= 1e-12 {
            ambiguous += 1;
            continue;
        }
        match l2.contains(&v) {
            Ok(got) => tally.record(got == (norm <= 1.0), || format!("p = 2 at {v:?}: {got}, norm {norm}")),
            Err(e) => tally.error(e.to_string()),
        }
    }
    // Rational points on the unit circle are decided exactly.
    for (a, b) in [(3, 5), (5, 13), (8, 17)] {
        let on = vec![rat(a, b), rat((b * b - a * a).isqrt(), b)];
        let out = vec![rat(a, b), rat((b * b - a * a).isqrt() + 1, b)];
        tally.record(l2.contains_exact(&on).unwrap_or(false), || format!("{on:?} should be on the sphere"));
        tally.record(!l2.contains_exact(&out).unwrap_or(true), || format!("{out:?} should be outside"));
    }
    tally.finish(json!({"ambiguous_skipped": ambiguous}))
}

fn dominance_non_inheritance(_seed: u64, _count: Option<usize>) -> CheckResult {
    let mut tally = Tally::new();
    let r = Seminorm::weighted_l1(vec![int(1)]).expect("valid");
    let s = Seminorm::weighted_l1(vec![int(2)]).expect("valid");
    let c = match dominates(&r, &s, 1) {
        Ok(d) => d.constant,
        Err(e) => {
            tally.error(e.to_string());
            return tally.finish(json!({}));
        }
    };
    tally.record(c == Real::Exact(int(2)), || format!("C = {c}"));
    let c_exact = c.exact().cloned().unwrap_or_else(|| int(2));
    let mut exceeded_from = None;
    for k in 0..=20u32 {
        let xk = Polynomial::monomial(1, Monomial::new(vec![k]), Rational::one());
        let ratio = ext_exact(&s, &xk).ok().flatten().zip(ext_exact(&r, &xk).ok().flatten()).map(|(a, b)| a / b);
        tally.record(ratio == Some(rational::pow(&int(2), k)), || format!("ratio at k = {k}: {ratio:?}"));
        if exceeded_from.is_none() && ratio.as_ref().is_some_and(|q| q > &c_exact) {
            exceeded_from = Some(k);
        }
        let repaired = Seminorm::weighted_l1(vec![c_exact.clone()]).expect("valid");
        let ok = ext_exact(&repaired, &xk).ok().flatten() >= ext_exact(&s, &xk).ok().flatten();
        tally.record(ok, || format!("repaired inequality fails at k = {k}"));
    }
    tally.record(exceeded_from == Some(2), || format!("ratio exceeds C from k = {exceeded_from:?}"));
    tally.finish(json!({"constant": rational::format_rational(&c_exact), "exceeds_from": exceeded_from}))
}

fn correspondence_round_trip(seed: u64, count: Option<usize>) -> CheckResult {
    let mut rng = check_rng(seed, "correspondence_round_trip");
    let mut tally = Tally::new();
    let mut worst_atom = 0.0f64;
    let mut worst_radius = 0.0f64;
    for _ in 0..count.unwrap_or(100) {
        let mu = rand_measure(&mut rng, 1, 5, &Rational::one(), |g| vec![rat(g.random_range(-12..=12), 4)]);
        let table = table_from_measure(&mu, 12);
        match reconstruct_univariate(&table, 6) {
            Ok(nu) => {
                let mut want: Vec<(f64, f64)> =
                    mu.atoms().iter().map(|a| (rational::to_f64(&a.point[0]), rational::to_f64(&a.weight))).collect();
                let mut got: Vec<(f64, f64)> =
                    nu.atoms().iter().map(|a| (rational::to_f64(&a.point[0]), rational::to_f64(&a.weight))).collect();
                want.sort_by(|a, b| a.0.total_cmp(&b.0));
                got.sort_by(|a, b| a.0.total_cmp(&b.0));
                let err = if want.len() == got.len() {
                    want.iter().zip(&got).map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs())).fold(0.0, f64::max)
                } else {
                    f64::INFINITY
                };
                worst_atom = worst_atom.max(err);
                tally.record(err <= 1e-6, || format!("atoms {want:?} reconstructed as {got:?}"));
            }
            Err(e) => tally.error(format!("reconstruction failed: {e}")),
        }
        let r = [Rational::one()];
        match (support_radius(&mu, &r), support_radius_estimate(&table_from_measure(&mu, 20), &r)) {
            (Ok(exact), Ok(est)) => {
                let err = (rational::to_f64(&exact) - est.estimate).abs();
                worst_radius = worst_radius.max(err);
                tally.record(err <= 1e-4, || format!("radius {exact} estimated as {}", est.estimate));
            }
            (a, b) => tally.error(format!("{:?} {:?}", a.err(), b.err())),
        }
    }
    tally.finish(json!({"max_atom_error": worst_atom, "max_radius_error": worst_radius}))
}

fn continuity_criterion(seed: u64, count: Option<usize>) -> CheckResult {
    let mut rng = check_rng(seed, "continuity_criterion");
    let mut tally = Tally::new();
    for _ in 0..count.unwrap_or(200) {
        let n = rng.random_range(1..=3);
        let r = rand_weights(&mut rng, n);
        let i = rat(rng.random_range(1..=6), 2);
        let radii: Vec<Rational> = r.iter().map(|w| w * &i).collect();
        let mass = rat(rng.random_range(1..=9), rng.random_range(1..=3));
        let mu = rand_measure(&mut rng, n, 4, &mass, |g| {
            radii.iter().map(|h| h * rat(g.random_range(-8..=8), 8)).collect()
        });
        match continuity_norm(&table_from_measure(&mu, 6), &r, &i) {
            Ok(rep) => {
                let ok = rep.sup_ratio.exact().is_some_and(|q| q <= &mass);
                tally.record(ok, || format!("sup ratio {} exceeds mass {mass}", rep.sup_ratio));
            }
            Err(e) => tally.error(e.to_string()),
        }
    }
    let delta = table_from_measure(&AtomicMeasure::dirac(vec![int(2)]), 12);
    for (i, base) in [(1, 2), (2, 1)] {
        match continuity_norm(&delta, &[Rational::one()], &int(i)) {
            Ok(rep) => {
                for (k, v) in rep.per_degree.iter().enumerate() {
                    let want = Real::Exact(rational::pow(&int(base), k as u32));
                    tally.record(*v == want, || format!("delta_2 at i = {i}, degree {k}: {v}"));
                }
            }
            Err(e) => tally.error(e.to_string()),
        }
    }
    tally.finish(json!({}))
}

/// Moment matrix built directly from the table entries.
fn hankel(table: &MomentTable, t: u32) -> (Vec<Monomial>, DMatrix<f64>) {
    let basis = monomials_up_to(table.nvars(), t);
    let k = basis.len();
    let mat = DMatrix::from_fn(k, k, |a, b| table.value(&basis[a].mul(&basis[b])).expect("complete"));
    (basis, mat)
}

fn square_value(table: &MomentTable, basis: &[Monomial], c: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (a, ca) in basis.iter().zip(c) {
        for (b, cb) in basis.iter().zip(c) {
            acc += ca * cb * table.value(&a.mul(b)).expect("complete");
        }
    }
    acc / c.iter().map(|x| x * x).sum::<f64>()
}

fn positivity_machinery(seed: u64, count: Option<usize>) -> CheckResult {
    let mut rng = check_rng(seed, "positivity_machinery");
    let mut tally = Tally::new();
    let mut passing = 0usize;
    for case in 0..count.unwrap_or(200) {
        let n = rng.random_range(1..=2);
        let t = rng.random_range(1..=if n == 1 { 4 } else { 3 });
        let mu = rand_measure(&mut rng, n, 6, &Rational::one(), |g| (0..n).map(|_| rat(g.random_range(-6..=6), 4)).collect());
        let exact = table_from_measure(&mu, 2 * t);
        let mut values: std::collections::BTreeMap<Monomial, f64> = exact.iter().map(|(m, v)| (m.clone(), v)).collect();
        match case % 3 {
            0 => {}
            1 => {
                // Push the top pure moment below what any measure allows.
                let m = Monomial::var(n, 0).pow(2 * t);
                let v = values[&m];
                values.insert(m, -v - 1.0);
            }
            _ => {
                for v in values.values_mut() {
                    *v += rng.sample::<f64, _>(StandardNormal);
                }
            }
        }
        let table = MomentTable::new(n, 2 * t, values).expect("complete table");
        let verdict = match positivity_check_at(&table, 1, t) {
            Ok(r) => r.pass,
            Err(e) => {
                tally.error(e.to_string());
                continue;
            }
        };
        let (basis, mat) = hankel(&table, t);
        let scale = mat.trace().abs().max(1.0);
        let mut min = f64::INFINITY;
        for _ in 0..400 {
            let c: Vec<f64> = basis.iter().map(|_| rng.sample(StandardNormal)).collect();
            min = min.min(square_value(&table, &basis, &c));
        }
        for e in basis.iter().enumerate().map(|(i, _)| i) {
            let mut c = vec![0.0; basis.len()];
            c[e] = 1.0;
            min = min.min(square_value(&table, &basis, &c));
        }
        let eig = SymmetricEigen::new(mat);
        for col in 0..basis.len() {
            let c: Vec<f64> = eig.eigenvectors.column(col).iter().copied().collect();
            min = min.min(square_value(&table, &basis, &c));
        }
        let oracle = min >= -1e-8 * scale;
        passing += usize::from(verdict);
        tally.record(verdict == oracle, || format!("case {case}: PSD verdict {verdict}, smallest sampled square {min}"));
    }
    let mut atomic = 0usize;
    for _ in 0..20 {
        let n = rng.random_range(1..=2);
        let mu = rand_measure(&mut rng, n, 5, &Rational::one(), |g| (0..n).map(|_| rat(g.random_range(-6..=6), 4)).collect());
        let table = table_from_measure(&mu, 12);
        for d in 1..=3 {
            atomic += 1;
            match positivity_check(&table, d) {
                Ok(r) => tally.record(r.pass, || format!("atomic table fails for d = {d}")),
                Err(e) => tally.error(e.to_string()),
            }
        }
    }
    tally.finish(json!({"psd_passing": passing, "atomic_checks": atomic}))
}

fn hurwitz_reznick(seed: u64, count: Option<usize>) -> CheckResult {
    let mut rng = check_rng(seed, "hurwitz_reznick");
    let mut tally = Tally::new();
    let mut entries = 0usize;
    for _ in 0..count.unwrap_or(200) {
        let n = rng.random_range(1..=3);
        let k = rng.random_range(1..=4);
        let mass = rat(rng.random_range(1..=5), rng.random_range(1..=3));
        let mu = rand_measure(&mut rng, n, 5, &mass, |g| (0..n).map(|_| rand_rat(g, 8, 4)).collect());
        match hurwitz_reznick_check(&table_from_measure(&mu, 2 * k), k) {
            Ok(r) => {
                entries += r.entries.len();
                tally.record(r.violations == 0, || format!("{} violations at k = {k}", r.violations));
            }
            Err(e) => tally.error(e.to_string()),
        }
    }
    tally.finish(json!({"entries": entries}))
}

fn jacobi_epsilon(_seed: u64, _count: Option<usize>) -> CheckResult {
    let mut tally = Tally::new();
    let module = PowerModule::new(
        1,
        1,
        vec![Polynomial::parse(1, "x1").expect("valid"), Polynomial::parse(1, "1 - x1").expect("valid")],
    )
    .expect("valid module");
    let a = Polynomial::parse(1, "x1 - x1^2").expect("valid");
    let mut degrees = serde_json::Map::new();
    for eps in [rat(1, 2), rat(1, 10)] {
        let target = &a + &Polynomial::constant(1, eps.clone());
        let mut found = None;
        for t in 1..=6 {
            match jacobi_epsilon_check(&module, &a, &eps, t) {
                Ok(SearchOutcome::Found(c)) => {
                    found = Some((t, c));
                    break;
                }
                Ok(_) => {}
                Err(e) => tally.error(e.to_string()),
            }
        }
        let label = rational::format_rational(&eps);
        match found {
            Some((t, c)) => {
                degrees.insert(label, json!(t));
                let ok = c.verify(&module) && c.expand(&module).as_ref() == Some(&target);
                tally.record(ok, || format!("certificate for eps = {eps} does not expand to the target"));
            }
            None => tally.error(format!("no certificate for eps = {eps} at degree <= 6")),
        }
    }
    let minus_one = Polynomial::constant(1, int(-1));
    match certificate_search(&module, &minus_one, 2) {
        Ok(SearchOutcome::NotFound { negativity_witness: Some(w) }) => {
            tally.record(module.xm_contains_exact(&w).unwrap_or(false), || format!("witness {w:?} is outside X_M"))
        }
        other => tally.error(format!("a = -1 gave {other:?}")),
    }
    tally.finish(json!({"degrees": degrees}))
}

fn quasi_analytic_classifier(_seed: u64, _count: Option<usize>) -> CheckResult {
    let mut tally = Tally::new();
    let k_max = 20;
    let mut factorial = 1.0f64;
    let squares: Vec<f64> = (0..=k_max)
        .map(|k| {
            if k > 0 {
                factorial *= k as f64;
            }
            factorial * factorial
        })
        .collect();
    let cases = [
        ("two_pow_k", (0..=k_max).map(|k| 2f64.powi(k)).collect::<Vec<_>>(), QuasiAnalyticVerdict::QuasiAnalytic),
        ("factorial_squared", squares, QuasiAnalyticVerdict::NotQuasiAnalytic),
        ("constant_one", vec![1.0; k_max as usize + 1], QuasiAnalyticVerdict::QuasiAnalytic),
    ];
    let mut verdicts = serde_json::Map::new();
    for (name, values, want) in cases {
        let d = quasi_analytic_classify(&MkSequence::new(values));
        verdicts.insert(name.into(), json!(d.verdict.as_str()));
        tally.record(d.verdict == want, || format!("{name}: {} (slope {:?})", d.verdict.as_str(), d.slope));
    }
    tally.finish(json!({"verdicts": verdicts}))
}

fn quasi_nuclear_criterion(_seed: u64, _count: Option<usize>) -> CheckResult {
    let mut tally = Tally::new();
    let gaps = [int(0), rat(2, 5), rat(1, 2), rat(3, 5), int(1), int(2)];
    let mut grid = Vec::new();
    for s1 in [int(-1), int(0), rat(1, 3), int(2)] {
        for gap in &gaps {
            let s2 = &s1 + gap;
            // Σ (i+1)^{-2·gap} converges iff 2·gap > 1.
            let want = gap * int(2) > Rational::one();
            let got = quasi_nuclear_embedding(&ScaleIndex::new(s2), &ScaleIndex::new(s1.clone()));
            if s1.is_zero() {
                grid.push(json!({"gap": rational::format_rational(gap), "quasi_nuclear": got}));
            }
            tally.record(got == want, || format!("s1 = {s1}, gap = {gap}: {got}"));
        }
    }
    tally.finish(json!({"grid": grid}))
}

const DETERMINISM_SUBSET: &str = r#"{"checks": [
  {"name": "closed_form_extension", "count": 50},
  {"name": "dominance_non_inheritance"},
  {"name": "quasi_nuclear_criterion"},
  {"name": "quasi_analytic_classifier"}
]}"#;

fn cli_determinism(seed: u64, _count: Option<usize>) -> CheckResult {
    let mut tally = Tally::new();
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => {
            tally.error(format!("temporary directory: {e}"));
            return tally.finish(json!({}));
        }
    };
    let write = |name: &str, body: &str| std::fs::write(dir.path().join(name), body);
    let files = [
        ("subset.json", DETERMINISM_SUBSET),
        ("l1.json", r#"{"kind": "weighted_l1", "r": [1, 1]}"#),
        ("f.json", r#"{"nvars": 2, "terms": [{"exp": [1, 1], "coef": 1}, {"exp": [1, 0], "coef": 2}]}"#),
        ("truncated.json", r#"{"kind": "weighted_l1", "r": [1, "#),
        ("bad_weight.json", r#"{"kind": "weighted_l1", "r": [1, -2]}"#),
        ("bad_type.json", r#"{"atoms": [{"point": [1], "weight": "heavy"}]}"#),
        ("unknown_check.json", r#"{"checks": [{"name": "no_such_check"}]}"#),
        ("unknown_field.json", r#"{"seed": 1, "extra": true}"#),
    ];
    for (name, body) in files {
        if let Err(e) = write(name, body) {
            tally.error(format!("{name}: {e}"));
            return tally.finish(json!({}));
        }
    }
    let base = dir.path().to_string_lossy().into_owned();
    let run = |args: &[&str]| {
        let mut full = vec!["symm", "--input", &base, "--seed"];
        let s = seed.to_string();
        full.push(&s);
        full.extend_from_slice(args);
        super::run(full)
    };
    let first = run(&["suite", "run", "--config", "subset.json"]);
    let second = run(&["suite", "run", "--config", "subset.json"]);
    tally.record(first.code == 0, || format!("subset exit code {}", first.code));
    tally.record(first.stdout == second.stdout, || "repeated suite runs differ".into());
    let corpus: [(&[&str], i32); 9] = [
        (&["ext", "eval", "--seminorm", "l1.json", "--poly", "f.json"], 0),
        (&["spectrum", "test", "--seminorm", "l1.json", "--point", "1,-1"], 0),
        (&["spectrum", "test", "--seminorm", "l1.json", "--point", "2,0"], 1),
        (&["ext", "eval", "--seminorm", "missing.json", "--poly", "f.json"], 2),
        (&["ext", "eval", "--seminorm", "truncated.json", "--poly", "f.json"], 2),
        (&["norm", "eval", "--seminorm", "bad_weight.json", "--point", "1,1"], 2),
        (&["moments", "mk", "--measure", "bad_type.json"], 2),
        (&["suite", "run", "--config", "unknown_check.json"], 2),
        (&["suite", "run", "--config", "unknown_field.json"], 2),
    ];
    let mut codes = Vec::new();
    for (args, want) in corpus {
        let out = run(args);
        codes.push(out.code);
        let emitted = serde_json::from_str::<Value>(&out.stdout).is_ok();
        tally.record(out.code == want && emitted, || format!("`{}` exited {} (want {want})", args.join(" "), out.code));
    }
    tally.finish(json!({"corpus_exit_codes": codes}))
}

/// Runs one named check; `None` for an unknown name.
pub fn run_check(name: &str, seed: u64, count: Option<usize>) -> Option<CheckResult> {
    let f: fn(u64, Option<usize>) -> CheckResult = match name {
        "closed_form_extension" => closed_form_extension,
        "submultiplicativity" => submultiplicativity,
        "spectrum_dual_ball" => spectrum_dual_ball,
        "lp_ball_example" => lp_ball_example,
        "dominance_non_inheritance" => dominance_non_inheritance,
        "correspondence_round_trip" => correspondence_round_trip,
        "continuity_criterion" => continuity_criterion,
        "positivity_machinery" => positivity_machinery,
        "hurwitz_reznick" => hurwitz_reznick,
        "jacobi_epsilon" => jacobi_epsilon,
        "quasi_analytic_classifier" => quasi_analytic_classifier,
        "quasi_nuclear_criterion" => quasi_nuclear_criterion,
        "cli_determinism" => cli_determinism,
        _ => return None,
    };
    Some(f(seed, count))
}

/// Runs the configured checks concurrently and reports them in config order.
pub fn run_suite(config: &SuiteConfig, default_seed: u64) -> Result<Vec<(String, CheckResult)>, InputError> {
    let specs: Vec<CheckSpec> = match &config.checks {
        Some(c) => c.clone(),
        None => CHECK_NAMES.iter().map(|n| CheckSpec { name: n.to_string(), seed: None, count: None }).collect(),
    };
    if let Some((i, s)) = specs.iter().enumerate().find(|(_, s)| !CHECK_NAMES.contains(&s.name.as_str())) {
        return Err(InputError(format!("checks[{i}].name: unknown check `{}`", s.name)));
    }
    let base = config.seed.unwrap_or(default_seed);
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = specs
            .iter()
            .map(|s| scope.spawn(move || run_check(&s.name, s.seed.unwrap_or(base), s.count).expect("name checked")))
            .collect();
        handles.into_iter().map(|h| h.join().expect("check panicked")).collect::<Vec<_>>()
    });
    Ok(specs.into_iter().map(|s| s.name).zip(results).collect())
}

pub(super) fn run_command(ctx: &mut Context, config: Option<&Path>) -> Result<Outcome, InputError> {
    let config: SuiteConfig = match config {
        Some(path) => {
            let bytes = ctx.read("config", path)?;
            parse_json(&bytes).map_err(|e| InputError(format!("{}: {}", path.display(), e.0)))?
        }
        None => SuiteConfig::default(),
    };
    let results = run_suite(&config, ctx.seed)?;
    let mut failures = serde_json::Map::new();
    let verdicts = results
        .into_iter()
        .map(|(name, r)| {
            if let Some(f) = r.first_failure {
                failures.insert(name.clone(), json!(f));
            }
            Verdict::new(name, r.pass, r.summary)
        })
        .collect();
    let outcome = Outcome::new(verdicts);
    Ok(if failures.is_empty() { outcome } else { outcome.with_witnesses(Value::Object(failures)) })
}
