//! Seminorms on `V = span(x1, …, xn)` and their dual norms on `V* = ℝ^n`.
//!
//! Two kinds are supported, each with an optional positive scale factor:
//! weighted ℓ1 norms `Σ |a_i| r_i` and ℓp norms. Both have closed-form dual
//! norms, which is what makes every spectrum-ball membership test below
//! exact (weighted ℓ1, ℓ1) or tightly toleranced (ℓp, `p > 1`).

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Polynomial;
use crate::rational::{self, Exact, Rational, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeminormError {
    #[error("weights must be strictly positive (weight {index} is {value})")]
    NonPositiveWeight { index: usize, value: String },
    #[error("weighted l1 needs at least one weight")]
    EmptyWeights,
    #[error("exponent p must be a finite number >= 1, got {0}")]
    BadExponent(f64),
    #[error("scale must be strictly positive, got {0}")]
    NonPositiveScale(String),
    #[error("dimension mismatch: seminorm has {expected} variables, input has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input is not a linear form (it has a term of degree != 1)")]
    NotInV,
    #[error("a seminorm family needs at least one member")]
    EmptyFamily,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeminormKind {
    /// `Σ |a_i| r_i` with all `r_i > 0`.
    WeightedL1 { weights: Vec<Rational> },
    /// `(Σ |a_i|^p)^{1/p}`, `p >= 1`.
    Lp { p: f64 },
}

/// A norm on `V`, possibly multiplied by a positive rational scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Seminorm {
    kind: SeminormKind,
    scale: Rational,
}

impl Seminorm {
    pub fn weighted_l1(weights: Vec<Rational>) -> Result<Self, SeminormError> {
        if weights.is_empty() {
            return Err(SeminormError::EmptyWeights);
        }
        if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_positive()) {
            return Err(SeminormError::NonPositiveWeight {
                index,
                value: rational::format_rational(w),
            });
        }
        Ok(Seminorm { kind: SeminormKind::WeightedL1 { weights }, scale: Rational::one() })
    }

    pub fn lp(p: f64) -> Result<Self, SeminormError> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(SeminormError::BadExponent(p));
        }
        Ok(Seminorm { kind: SeminormKind::Lp { p }, scale: Rational::one() })
    }

    /// Replaces the scale factor.
    pub fn with_scale(mut self, scale: Rational) -> Result<Self, SeminormError> {
        if !scale.is_positive() {
            return Err(SeminormError::NonPositiveScale(rational::format_rational(&scale)));
        }
        self.scale = scale;
        Ok(self)
    }

    /// `i·ρ`: multiplies the current scale by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self, SeminormError> {
        self.clone().with_scale(&self.scale * factor)
    }

    pub fn kind(&self) -> &SeminormKind {
        &self.kind
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// Number of variables when the seminorm fixes it (weighted ℓ1).
    pub fn nvars(&self) -> Option<usize> {
        match &self.kind {
            SeminormKind::WeightedL1 { weights } => Some(weights.len()),
            SeminormKind::Lp { .. } => None,
        }
    }

    pub fn check_nvars(&self, n: usize) -> Result<(), SeminormError> {
        match self.nvars() {
            Some(expected) if expected != n => Err(SeminormError::DimensionMismatch { expected, found: n }),
            _ => Ok(()),
        }
    }

    /// True when the dual unit ball is a box (weighted ℓ1 or ℓ1).
    pub fn has_box_dual(&self) -> bool {
        match &self.kind {
            SeminormKind::WeightedL1 { .. } => true,
            SeminormKind::Lp { p } => *p == 1.0,
        }
    }

    /// Half-widths of the box `{v* : ρ′(v*) ≤ 1}` when the dual ball is a box.
    pub fn dual_box_half_widths(&self, n: usize) -> Option<Vec<Rational>> {
        match &self.kind {
            SeminormKind::WeightedL1 { weights } => {
                Some(weights.iter().map(|w| w * &self.scale).collect())
            }
            SeminormKind::Lp { p } if *p == 1.0 => Some(vec![self.scale.clone(); n]),
            SeminormKind::Lp { .. } => None,
        }
    }

    /// `ρ(x_j)`, the value on a basis vector; rational for both kinds.
    pub fn basis_value(&self, j: usize) -> Rational {
        match &self.kind {
            SeminormKind::WeightedL1 { weights } => &weights[j] * &self.scale,
            SeminormKind::Lp { .. } => self.scale.clone(),
        }
    }

    /// Per-variable weights of the closed-form extension, when one exists
    /// (weighted ℓ1, and ℓ1 as the all-ones weighting).
    pub fn l1_weights(&self, n: usize) -> Option<Vec<Rational>> {
        self.dual_box_half_widths(n)
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`; infinite for `p = 1`.
    pub fn conjugate_exponent(p: f64) -> f64 {
        if p == 1.0 {
            f64::INFINITY
        } else {
            p / (p - 1.0)
        }
    }

    /// `ρ(v)` for `v` given by its coordinates.
    pub fn eval_coords(&self, coords: &[Rational]) -> Result<Real, SeminormError> {
        self.check_nvars(coords.len())?;
        Ok(match &self.kind {
            SeminormKind::WeightedL1 { weights } => Real::Exact(
                coords
                    .iter()
                    .zip(weights)
                    .map(|(a, w)| a.abs() * w)
                    .fold(Rational::zero(), |acc, x| acc + x)
                    * &self.scale,
            ),
            SeminormKind::Lp { p } if *p == 1.0 => Real::Exact(
                coords.iter().map(|a| a.abs()).fold(Rational::zero(), |acc, x| acc + x) * &self.scale,
            ),
            SeminormKind::Lp { p } => {
                let xs: Vec<f64> = coords.iter().map(rational::to_f64).collect();
                Real::Approx(lp_norm(&xs, *p) * rational::to_f64(&self.scale))
            }
        })
    }

    /// `ρ(v)` for `v ∈ V` given as a linear form.
    pub fn eval(&self, v: &Polynomial) -> Result<Real, SeminormError> {
        let coords = v.linear_coefficients().ok_or(SeminormError::NotInV)?;
        self.eval_coords(&coords)
    }

    pub fn eval_f64(&self, coords: &[f64]) -> Result<f64, SeminormError> {
        self.check_nvars(coords.len())?;
        let s = rational::to_f64(&self.scale);
        Ok(match &self.kind {
            SeminormKind::WeightedL1 { weights } => {
                coords.iter().zip(weights).map(|(a, w)| a.abs() * rational::to_f64(w)).sum::<f64>() * s
            }
            SeminormKind::Lp { p } => lp_norm(coords, *p) * s,
        })
    }

    /// Dual norm `ρ′(v*) = sup{|v*(w)| : ρ(w) ≤ 1}` in floating point.
    pub fn dual_norm(&self, vstar: &[f64]) -> Result<f64, SeminormError> {
        self.check_nvars(vstar.len())?;
        let s = rational::to_f64(&self.scale);
        Ok(match &self.kind {
            SeminormKind::WeightedL1 { weights } => vstar
                .iter()
                .zip(weights)
                .map(|(v, w)| v.abs() / (rational::to_f64(w) * s))
                .fold(0.0, f64::max),
            SeminormKind::Lp { p } => lp_norm(vstar, Self::conjugate_exponent(*p)) / s,
        })
    }

    /// Exact dual norm, available when the dual ball is a box.
    pub fn dual_norm_exact(&self, vstar: &[Rational]) -> Result<Option<Rational>, SeminormError> {
        self.check_nvars(vstar.len())?;
        Ok(self.dual_box_half_widths(vstar.len()).map(|widths| {
            vstar
                .iter()
                .zip(&widths)
                .map(|(v, w)| v.abs() / w)
                .fold(Rational::zero(), |acc, x| if x > acc { x } else { acc })
        }))
    }

    /// Exact where possible, floating otherwise.
    pub fn dual_norm_real(&self, vstar: &[Rational]) -> Result<Real, SeminormError> {
        match self.dual_norm_exact(vstar)? {
            Some(q) => Ok(Real::Exact(q)),
            None => {
                let xs: Vec<f64> = vstar.iter().map(rational::to_f64).collect();
                Ok(Real::Approx(self.dual_norm(&xs)?))
            }
        }
    }

    /// Decides `ρ′(v*) ≤ radius` exactly when the arithmetic allows it:
    /// box duals compare rationals, `p = 2` compares squared Euclidean norms.
    /// Returns `None` for other exponents.
    pub fn dual_ball_contains_exact(
        &self,
        vstar: &[Rational],
        radius: &Rational,
    ) -> Result<Option<bool>, SeminormError> {
        if let Some(d) = self.dual_norm_exact(vstar)? {
            return Ok(Some(&d <= radius));
        }
        if let SeminormKind::Lp { p } = &self.kind {
            if *p == 2.0 {
                let sq = vstar.iter().fold(Rational::zero(), |acc, v| acc + v * v);
                let r = radius * &self.scale;
                return Ok(Some(sq <= &r * &r));
            }
        }
        Ok(None)
    }
}

/// ℓp norm (`p` may be infinite) with max-scaling against overflow.
pub fn lp_norm(xs: &[f64], p: f64) -> f64 {
    let m = xs.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if m == 0.0 || p.is_infinite() {
        return m;
    }
    if p == 1.0 {
        return xs.iter().map(|x| x.abs()).sum();
    }
    if p == 2.0 {
        return m * xs.iter().map(|x| (x / m) * (x / m)).sum::<f64>().sqrt();
    }
    m * xs.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Least constant `C` with `C·ρ1 ≥ ρ2` on `V`, plus a vector where equality holds.
#[derive(Debug, Clone, PartialEq)]
pub struct Dominance {
    pub constant: Real,
    pub witness: Vec<Rational>,
}

/// Closed-form comparison constant `C = sup ρ2(v)/ρ1(v)` in `n` variables.
///
/// Every pair of supported kinds has a closed form: the supremum of a ratio of
/// norms is attained at an extreme point of the unit ball of `ρ1` or, for
/// ℓp against weighted ℓ1, at the Hölder-dual direction.
pub fn dominates(rho1: &Seminorm, rho2: &Seminorm, n: usize) -> Result<Dominance, SeminormError> {
    rho1.check_nvars(n)?;
    rho2.check_nvars(n)?;
    let ratio = &rho2.scale / &rho1.scale;
    let unit = |i: usize| -> Vec<Rational> {
        (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
    };
    let argmax = |xs: &[Rational]| -> usize {
        let mut best = 0;
        for (i, x) in xs.iter().enumerate() {
            if x > &xs[best] {
                best = i;
            }
        }
        best
    };
    let dominance = match (&rho1.kind, &rho2.kind) {
        (SeminormKind::WeightedL1 { weights: r1 }, SeminormKind::WeightedL1 { weights: r2 }) => {
            let quotients: Vec<Rational> = r1.iter().zip(r2).map(|(a, b)| b / a).collect();
            let i = argmax(&quotients);
            Dominance { constant: Real::Exact(&quotients[i] * &ratio), witness: unit(i) }
        }
        (SeminormKind::WeightedL1 { weights }, SeminormKind::Lp { .. }) => {
            // Extreme points of the weighted-ℓ1 ball are ±e_i / r_i.
            let inverses: Vec<Rational> = weights.iter().map(|w| w.recip()).collect();
            let i = argmax(&inverses);
            Dominance { constant: Real::Exact(&inverses[i] * &ratio), witness: unit(i) }
        }
        (SeminormKind::Lp { p }, SeminormKind::WeightedL1 { weights }) => {
            let q = Seminorm::conjugate_exponent(*p);
            if q.is_infinite() {
                let i = argmax(weights);
                Dominance { constant: Real::Exact(&weights[i] * &ratio), witness: unit(i) }
            } else {
                let wf: Vec<f64> = weights.iter().map(rational::to_f64).collect();
                let witness = wf
                    .iter()
                    .map(|w| rational::from_f64(w.powf(q - 1.0)).expect("finite weight"))
                    .collect();
                Dominance {
                    constant: Real::Approx(lp_norm(&wf, q) * rational::to_f64(&ratio)),
                    witness,
                }
            }
        }
        (SeminormKind::Lp { p: p1 }, SeminormKind::Lp { p: p2 }) => {
            if p2 >= p1 {
                Dominance { constant: Real::Exact(ratio), witness: unit(0) }
            } else {
                // ‖v‖_{p2} ≤ n^{1/p2 - 1/p1} ‖v‖_{p1}, equality at the all-ones vector.
                let factor = (n as f64).powf(1.0 / p2 - 1.0 / p1);
                Dominance {
                    constant: Real::Approx(factor * rational::to_f64(&ratio)),
                    witness: vec![Rational::one(); n],
                }
            }
        }
    };
    Ok(dominance)
}

/// A finite family of seminorms (the generating family of a locally convex
/// topology on `V`).
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormFamily {
    members: Vec<Seminorm>,
}

impl SeminormFamily {
    pub fn new(members: Vec<Seminorm>) -> Result<Self, SeminormError> {
        if members.is_empty() {
            return Err(SeminormError::EmptyFamily);
        }
        Ok(SeminormFamily { members })
    }

    pub fn members(&self) -> &[Seminorm] {
        &self.members
    }

    /// `max_ρ∈S ρ(v)`; the pointwise maximum is again a seminorm, which is
    /// what makes finite families directed.
    pub fn max_bound(&self, v: &Polynomial) -> Result<Real, SeminormError> {
        self.members
            .iter()
            .map(|rho| rho.eval(v))
            .try_fold(Real::zero(), |acc, x| Ok(acc.max(x?)))
    }
}

/// Wire form of a seminorm: `{"kind":"weighted_l1","r":[..],"scale":"p/q"}`
/// or `{"kind":"lp","p":2.0,"scale":"p/q"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeminormJson {
    WeightedL1 {
        r: Vec<Exact>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Exact>,
    },
    Lp {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Exact>,
    },
}

impl TryFrom<SeminormJson> for Seminorm {
    type Error = SeminormError;

    fn try_from(j: SeminormJson) -> Result<Self, SeminormError> {
        let (base, scale) = match j {
            SeminormJson::WeightedL1 { r, scale } => {
                (Seminorm::weighted_l1(r.into_iter().map(|e| e.0).collect())?, scale)
            }
            SeminormJson::Lp { p, scale } => (Seminorm::lp(p)?, scale),
        };
        match scale {
            Some(s) => base.with_scale(s.0),
            None => Ok(base),
        }
    }
}

impl From<&Seminorm> for SeminormJson {
    fn from(s: &Seminorm) -> Self {
        let scale = Some(Exact(s.scale.clone()));
        match &s.kind {
            SeminormKind::WeightedL1 { weights } => SeminormJson::WeightedL1 {
                r: weights.iter().cloned().map(Exact).collect(),
                scale,
            },
            SeminormKind::Lp { p } => SeminormJson::Lp { p: *p, scale },
        }
    }
}

impl Serialize for Seminorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeminormJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Seminorm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Seminorm::try_from(SeminormJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `{"members": [seminorm, …]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub members: Vec<Seminorm>,
}

impl<'de> Deserialize<'de> for SeminormFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = FamilyJson::deserialize(d)?;
        SeminormFamily::new(j.members).map_err(serde::de::Error::custom)
    }
}

impl Serialize for SeminormFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FamilyJson { members: self.members.clone() }.serialize(s)
    }
}
