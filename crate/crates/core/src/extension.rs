//! The projective extension `ρ̄` of a seminorm from `V` to the whole algebra.
//!
//! On the degree-`k` part, `ρ̄_k(f)` is the infimum of `Σ ρ(f_1)⋯ρ(f_k)` over
//! all ways of writing `f` as a sum of products of `k` vectors; `ρ̄` sums the
//! graded pieces and is the absolute value on constants.
//!
//! For weighted ℓ1 norms this infimum has the closed form
//! `ρ̄_r(Σ a_k x^k) = Σ |a_k| r^k`, so it is computed exactly. For ℓp
//! (`p > 1`) only certified bounds are produced: any single decomposition
//! bounds `ρ̄` from above, and any character in the unit dual ball bounds it
//! from below because `|f(v*)| ≤ ρ̄(f)` whenever `ρ′(v*) ≤ 1`. The gap between
//! the two (for instance `[1/2, 1]` for `x1·x2` under ℓ2) is not closed here.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, Monomial, Polynomial};
use crate::rational::{self, Rational, Real};
use crate::seminorm::{Seminorm, SeminormError};
use crate::spectrum::{self, SpectrumBall, SpectrumError, MEMBERSHIP_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtensionError {
    #[error("sample {index} lies outside the unit dual ball (dual norm {dual_norm})")]
    SampleOutsideBall { index: usize, dual_norm: f64 },
    #[error("weights have {weights} entries but the polynomial has {nvars} variables")]
    DimensionMismatch { weights: usize, nvars: usize },
    #[error(transparent)]
    Seminorm(#[from] SeminormError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `Σ_k |a_k| ∏_j (scale·r_j)^{k_j}`, exact. The constant term contributes `|a_0|`.
pub fn ext_weighted_l1(
    weights: &[Rational],
    scale: &Rational,
    f: &Polynomial,
) -> Result<Rational, ExtensionError> {
    if weights.len() != f.nvars() {
        return Err(ExtensionError::DimensionMismatch { weights: weights.len(), nvars: f.nvars() });
    }
    let scaled: Vec<Rational> = weights.iter().map(|r| r * scale).collect();
    Ok(f.terms()
        .map(|(m, a)| a.abs() * m.weight(&scaled))
        .fold(Rational::zero(), |acc, x| acc + x))
}

/// Closed-form `ρ̄(f)` when `ρ` is weighted ℓ1 (or ℓ1); `None` otherwise.
pub fn ext_exact(rho: &Seminorm, f: &Polynomial) -> Result<Option<Rational>, ExtensionError> {
    rho.check_nvars(f.nvars())?;
    match rho.l1_weights(f.nvars()) {
        Some(w) => Ok(Some(ext_weighted_l1(&w, &Rational::from_integer(1.into()), f)?)),
        None => Ok(None),
    }
}

/// One product `c · x_{j1} ⋯ x_{jk}` of a decomposition; an empty factor
/// list is a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub coefficient: Rational,
    pub factors: Vec<usize>,
}

/// `f = Σ c · x_{j1}⋯x_{jk}`, a witness for an upper bound on `ρ̄(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub nvars: usize,
    pub terms: Vec<ProductTerm>,
}

impl Decomposition {
    /// The monomial decomposition of `f`.
    pub fn monomial(f: &Polynomial) -> Self {
        Decomposition {
            nvars: f.nvars(),
            terms: f
                .terms()
                .map(|(m, c)| ProductTerm { coefficient: c.clone(), factors: m.factors() })
                .collect(),
        }
    }

    pub fn expand(&self) -> Polynomial {
        let mut acc = Polynomial::zero(self.nvars);
        for t in &self.terms {
            let mut exps = vec![0u32; self.nvars];
            for &j in &t.factors {
                exps[j] += 1;
            }
            acc = &acc + &Polynomial::monomial(self.nvars, Monomial::new(exps), t.coefficient.clone());
        }
        acc
    }

    /// `Σ ρ(c·x_{j1}) ρ(x_{j2}) ⋯`, i.e. `Σ |c| ∏ ρ(x_j)`.
    pub fn cost(&self, rho: &Seminorm) -> Rational {
        self.terms
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .fold(t.coefficient.abs(), |acc, &j| acc * rho.basis_value(j))
            })
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Upper bound on `ρ̄(f)` from the monomial decomposition, with the witness.
pub fn ext_upper_bound(
    rho: &Seminorm,
    f: &Polynomial,
) -> Result<(Rational, Decomposition), ExtensionError> {
    rho.check_nvars(f.nvars())?;
    let d = Decomposition::monomial(f);
    Ok((d.cost(rho), d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub value: f64,
    /// Best point after projection into the ball; `None` for an empty sample.
    pub point: Option<Vec<f64>>,
}

/// `max |f(v*)|` over samples of the unit dual ball of `ρ`.
///
/// Each sample must satisfy `ρ′(v*) ≤ 1 + 1e-12`; samples in the tolerance
/// band are pulled radially onto the ball before evaluation.
pub fn ext_lower_bound(
    rho: &Seminorm,
    f: &Polynomial,
    samples: &[Vec<f64>],
) -> Result<LowerBound, ExtensionError> {
    rho.check_nvars(f.nvars())?;
    let mut best = LowerBound { value: 0.0, point: None };
    for (index, s) in samples.iter().enumerate() {
        let dual_norm = rho.dual_norm(s)?;
        if dual_norm > 1.0 + MEMBERSHIP_TOL {
            return Err(ExtensionError::SampleOutsideBall { index, dual_norm });
        }
        let point: Vec<f64> = if dual_norm > 1.0 {
            s.iter().map(|x| x / dual_norm).collect()
        } else {
            s.clone()
        };
        let value = f.evaluate_f64(&point)?.abs();
        if best.point.is_none() || value > best.value {
            best = LowerBound { value, point: Some(point) };
        }
    }
    Ok(best)
}

/// Exact variant for rational samples; membership is decided exactly where
/// the seminorm allows (see [`Seminorm::dual_ball_contains_exact`]).
pub fn ext_lower_bound_exact(
    rho: &Seminorm,
    f: &Polynomial,
    samples: &[Vec<Rational>],
) -> Result<(Rational, Option<Vec<Rational>>), ExtensionError> {
    rho.check_nvars(f.nvars())?;
    let ball = SpectrumBall::unit(rho.clone());
    let mut best: (Rational, Option<Vec<Rational>>) = (Rational::zero(), None);
    for (index, s) in samples.iter().enumerate() {
        if !ball.contains_exact(s)? {
            let xs: Vec<f64> = s.iter().map(rational::to_f64).collect();
            return Err(ExtensionError::SampleOutsideBall { index, dual_norm: rho.dual_norm(&xs)? });
        }
        let value = f.evaluate(s)?.abs();
        if best.1.is_none() || value > best.0 {
            best = (value, Some(s.clone()));
        }
    }
    Ok(best)
}

/// How the lower end of a [`CertifiedInterval`] is justified.
#[derive(Debug, Clone, PartialEq)]
pub enum LowerWitness {
    /// A character with `ρ′(v*) ≤ 1` and `|f(v*)| = lower`.
    Character { point: Vec<Rational> },
    /// The closed form for weighted ℓ1; `best_character` records the best
    /// sampled vertex, which attains the closed form only for
    /// nonnegative-coefficient inputs.
    ClosedForm { best_character: Option<Vec<Rational>> },
}

/// `lower ≤ ρ̄(f) ≤ upper`, with witnesses for both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedInterval {
    pub lower: Real,
    pub upper: Rational,
    pub lower_witness: LowerWitness,
    pub upper_witness: Decomposition,
}

impl CertifiedInterval {
    pub fn is_exact(&self) -> bool {
        self.lower.exact() == Some(&self.upper)
    }

    pub fn width(&self) -> f64 {
        rational::to_f64(&self.upper) - self.lower.to_f64()
    }

    /// Re-checks both witnesses against `f`.
    pub fn verify(&self, rho: &Seminorm, f: &Polynomial) -> Result<bool, ExtensionError> {
        if self.upper_witness.expand() != *f || self.upper_witness.cost(rho) != self.upper {
            return Ok(false);
        }
        if self.lower.to_f64() > rational::to_f64(&self.upper) {
            return Ok(false);
        }
        match &self.lower_witness {
            LowerWitness::Character { point } => {
                let ball = SpectrumBall::unit(rho.clone());
                let inside = match &self.lower {
                    Real::Exact(_) => ball.contains_exact(point)?,
                    Real::Approx(_) => {
                        ball.contains(&point.iter().map(rational::to_f64).collect::<Vec<_>>())?
                    }
                };
                if !inside {
                    return Ok(false);
                }
                let value = f.evaluate(point)?.abs();
                Ok(match &self.lower {
                    Real::Exact(q) => value == *q,
                    Real::Approx(x) => (rational::to_f64(&value) - x).abs() <= 1e-12 * x.abs().max(1.0),
                })
            }
            LowerWitness::ClosedForm { .. } => {
                Ok(ext_exact(rho, f)?.is_some_and(|c| self.lower.exact() == Some(&c)))
            }
        }
    }
}

/// Certified interval for `ρ̄(f)`.
///
/// For box duals (weighted ℓ1, ℓ1) the closed form makes the interval a single
/// point and every dual-ball vertex is evaluated exactly. For ℓp the lower end
/// is the best of `budget` sampled characters from `seed`, rounded down to the
/// upper end if floating evaluation overshoots it.
pub fn ext_interval(
    rho: &Seminorm,
    f: &Polynomial,
    budget: usize,
    seed: u64,
) -> Result<CertifiedInterval, ExtensionError> {
    let n = f.nvars();
    let (upper, upper_witness) = ext_upper_bound(rho, f)?;
    let ball = SpectrumBall::unit(rho.clone());

    if let Some(exact) = ext_exact(rho, f)? {
        let vertices = ball.box_vertices(n, budget.max(1), seed).unwrap_or_default();
        let (best_value, best_point) = ext_lower_bound_exact(rho, f, &vertices)?;
        let lower_witness = match best_point {
            Some(point) if best_value == exact => LowerWitness::Character { point },
            other => LowerWitness::ClosedForm { best_character: other },
        };
        debug_assert_eq!(exact, upper);
        return Ok(CertifiedInterval { lower: Real::Exact(exact), upper, lower_witness, upper_witness });
    }

    let samples = spectrum::sample_ball(&ball, n, budget.max(1), seed)?;
    let best = ext_lower_bound(rho, f, &samples)?;
    let upper_f = rational::to_f64(&upper);
    let (lower, point) = match best.point {
        Some(p) => (best.value.min(upper_f), p),
        None => (0.0, vec![0.0; n]),
    };
    let point: Vec<Rational> = point.iter().map(|x| rational::from_f64(*x).expect("finite sample")).collect();
    Ok(CertifiedInterval {
        lower: Real::Approx(lower),
        upper,
        lower_witness: LowerWitness::Character { point },
        upper_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn wl1(ws: &[i64]) -> Seminorm {
        Seminorm::weighted_l1(ws.iter().map(|&w| int(w)).collect()).unwrap()
    }

    fn p(n: usize, s: &str) -> Polynomial {
        Polynomial::parse(n, s).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let one = int(1);
        assert_eq!(ext_weighted_l1(&[int(1), int(1)], &one, &p(2, "x1 x2 + 2 x1")).unwrap(), int(3));
        assert_eq!(ext_weighted_l1(&[int(2), int(1)], &one, &p(2, "x1^2 x2")).unwrap(), int(4));
        assert_eq!(ext_weighted_l1(&[int(2), int(1)], &one, &p(2, "5")).unwrap(), int(5));
        assert_eq!(ext_weighted_l1(&[int(2), int(1)], &one, &p(2, "-5")).unwrap(), int(5));
        assert_eq!(ext_weighted_l1(&[int(1)], &int(3), &p(1, "x1^2")).unwrap(), int(9));
        assert!(ext_weighted_l1(&[int(1)], &one, &p(2, "x1")).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        let l2 = Seminorm::lp(2.0).unwrap();
        let (u, d) = ext_upper_bound(&l2, &p(2, "x1 x2")).unwrap();
        assert_eq!(u, int(1));
        assert_eq!(d.expand(), p(2, "x1 x2"));
        let r = wl1(&[3, 2]);
        let f = p(2, "x1^2 - 4 x1 x2 + 1/2");
        assert_eq!(
            ext_upper_bound(&r, &f).unwrap().0,
            ext_weighted_l1(&[int(3), int(2)], &int(1), &f).unwrap()
        );
        assert_eq!(ext_upper_bound(&l2, &Polynomial::zero(2)).unwrap().0, int(0));
    }

    #[test]
    fn lower_bound_examples() {
        let l2 = Seminorm::lp(2.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let lb = ext_lower_bound(&l2, &p(2, "x1 x2"), &[vec![h, h]]).unwrap();
        assert!((lb.value - 0.5).abs() < 1e-15);
        let lb1 = ext_lower_bound(&l2, &Polynomial::one(2), &[vec![0.1, 0.2]]).unwrap();
        assert_eq!(lb1.value, 1.0);
        let r = wl1(&[2, 3]);
        let f = p(2, "x1^2 x2 + 3 x2 + 1");
        let (v, _) = ext_lower_bound_exact(&r, &f, &[vec![int(2), int(3)]]).unwrap();
        assert_eq!(v, ext_weighted_l1(&[int(2), int(3)], &int(1), &f).unwrap());
    }

    #[test]
    fn lower_bound_rejects_outside_samples() {
        let l2 = Seminorm::lp(2.0).unwrap();
        let err = ext_lower_bound(&l2, &p(2, "x1"), &[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap_err();
        assert!(matches!(err, ExtensionError::SampleOutsideBall { index: 1, .. }));
        // Inside the tolerance band the sample is projected.
        let lb = ext_lower_bound(&l2, &p(2, "x1"), &[vec![1.0 + 5e-13, 0.0]]).unwrap();
        assert!(lb.value <= 1.0);
        assert!(ext_lower_bound_exact(&wl1(&[1, 1]), &p(2, "x1"), &[vec![rat(3, 2), int(0)]]).is_err());
    }

    #[test]
    fn interval_examples() {
        let iv = ext_interval(&wl1(&[1, 1]), &p(2, "x1 x2 + 2 x1"), 64, 0).unwrap();
        assert_eq!(iv.lower, Real::Exact(int(3)));
        assert_eq!(iv.upper, int(3));
        assert!(matches!(iv.lower_witness, LowerWitness::Character { .. }));
        assert!(iv.verify(&wl1(&[1, 1]), &p(2, "x1 x2 + 2 x1")).unwrap());

        let l2 = Seminorm::lp(2.0).unwrap();
        let f = p(2, "x1 x2");
        let iv = ext_interval(&l2, &f, 64, 0).unwrap();
        assert_eq!(iv.upper, int(1));
        assert!((iv.lower.to_f64() - 0.5).abs() < 1e-12);
        assert!(iv.verify(&l2, &f).unwrap());

        let c = p(2, "-7/3");
        for rho in [wl1(&[2, 5]), l2.clone()] {
            let iv = ext_interval(&rho, &c, 8, 1).unwrap();
            assert_eq!(iv.upper, rat(7, 3));
            assert!((iv.lower.to_f64() - 7.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn mixed_signs_fall_back_to_closed_form_witness() {
        let r = wl1(&[1]);
        let f = p(1, "x1^2 - 1");
        let iv = ext_interval(&r, &f, 8, 0).unwrap();
        assert_eq!(iv.lower, Real::Exact(int(2)));
        assert!(matches!(iv.lower_witness, LowerWitness::ClosedForm { .. }));
        assert!(iv.verify(&r, &f).unwrap());
    }
}
