//! Characters of the polynomial algebra and the closed dual-norm balls
//! `B̄_i(ρ′)` that make up the Gelfand spectrum of the projective extension.
//!
//! A character is evaluation at a point `v* ∈ ℝ^n`. It is continuous for the
//! extension of `i·ρ` exactly when `ρ′(v*) ≤ i`, so spectrum membership is a
//! dual-norm comparison.

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::algebra::{AlgebraError, Polynomial};
use crate::rational::{self, Rational};
use crate::seminorm::{lp_norm, Seminorm, SeminormError, SeminormFamily, SeminormKind};

/// Absolute slack for floating membership tests, applied symmetrically.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Vertex enumeration is exhaustive up to this many variables.
pub const MAX_VERTEX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("radius must be strictly positive, got {0}")]
    NonPositiveRadius(String),
    #[error("sample count must be at least 1")]
    EmptySample,
    #[error(transparent)]
    Seminorm(#[from] SeminormError),
}

/// Point evaluation `f ↦ f(v*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    pub point: Vec<f64>,
}

impl Character {
    pub fn new(point: Vec<f64>) -> Self {
        Character { point }
    }

    pub fn evaluate(&self, f: &Polynomial) -> Result<f64, AlgebraError> {
        f.evaluate_f64(&self.point)
    }
}

/// `B̄_i(ρ′) = {v* : ρ′(v*) ≤ i}`, the spectrum of the extension of `i·ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumBall {
    seminorm: Seminorm,
    radius: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub contains: bool,
    pub dual_norm: f64,
}

impl SpectrumBall {
    pub fn new(seminorm: Seminorm, radius: Rational) -> Result<Self, SpectrumError> {
        if !radius.is_positive() {
            return Err(SpectrumError::NonPositiveRadius(rational::format_rational(&radius)));
        }
        Ok(SpectrumBall { seminorm, radius })
    }

    pub fn unit(seminorm: Seminorm) -> Self {
        SpectrumBall { seminorm, radius: Rational::one() }
    }

    pub fn seminorm(&self) -> &Seminorm {
        &self.seminorm
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn membership(&self, vstar: &[f64]) -> Result<Membership, SpectrumError> {
        let dual_norm = self.seminorm.dual_norm(vstar)?;
        Ok(Membership {
            contains: dual_norm <= rational::to_f64(&self.radius) + MEMBERSHIP_TOL,
            dual_norm,
        })
    }

    /// Floating membership test with [`MEMBERSHIP_TOL`] slack.
    pub fn contains(&self, vstar: &[f64]) -> Result<bool, SpectrumError> {
        Ok(self.membership(vstar)?.contains)
    }

    /// Membership for a rational point: exact for box duals and `p = 2`,
    /// toleranced for other exponents.
    pub fn contains_exact(&self, vstar: &[Rational]) -> Result<bool, SpectrumError> {
        match self.seminorm.dual_ball_contains_exact(vstar, &self.radius)? {
            Some(b) => Ok(b),
            None => {
                let xs: Vec<f64> = vstar.iter().map(rational::to_f64).collect();
                self.contains(&xs)
            }
        }
    }

    /// Half-widths of the ball when it is a box.
    pub fn box_half_widths(&self, n: usize) -> Option<Vec<Rational>> {
        self.seminorm
            .dual_box_half_widths(n)
            .map(|w| w.into_iter().map(|h| h * &self.radius).collect())
    }

    /// Exact box vertices (all `2^n` sign patterns for `n ≤ 16`; otherwise
    /// `cap` sign patterns drawn from `seed`). `None` if the ball is not a box.
    pub fn box_vertices(&self, n: usize, cap: usize, seed: u64) -> Option<Vec<Vec<Rational>>> {
        let widths = self.box_half_widths(n)?;
        let patterns = sign_patterns(n, cap, seed);
        Some(
            patterns
                .into_iter()
                .map(|signs| {
                    widths
                        .iter()
                        .zip(signs)
                        .map(|(h, s)| if s { -h.clone() } else { h.clone() })
                        .collect()
                })
                .collect(),
        )
    }
}

/// Sign patterns in binary-counting order (bit `j` set means coordinate `j`
/// is negative); exhaustive up to [`MAX_VERTEX_DIM`], seeded subsample beyond.
fn sign_patterns(n: usize, cap: usize, seed: u64) -> Vec<Vec<bool>> {
    if n <= MAX_VERTEX_DIM {
        (0..1usize << n)
            .map(|mask| (0..n).map(|j| mask >> j & 1 == 1).collect())
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_5167);
        (0..cap).map(|_| (0..n).map(|_| rng.random::<bool>()).collect()).collect()
    }
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut k = 2u64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= k).all(|&p| k % p != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut result = 0.0;
    while index > 0 {
        result += (index % base) as f64 * inv;
        index /= base;
        inv /= base as f64;
    }
    result
}

/// Deterministic points of the ball, reproducible from `(ball, n, count, seed)`.
///
/// Box balls: all vertices first, then a Halton sequence with a seeded
/// Cranley–Patterson shift. ℓp balls (`p > 1`): the `2n` axis extremes, the
/// normalized sign vectors, then ChaCha8-seeded Gaussian directions alternating
/// between the boundary sphere and the interior. Every returned point passes
/// [`SpectrumBall::contains`].
pub fn sample_ball(
    ball: &SpectrumBall,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>, SpectrumError> {
    if count == 0 {
        return Err(SpectrumError::EmptySample);
    }
    ball.seminorm.check_nvars(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(count);

    if let Some(widths) = ball.box_half_widths(n) {
        let h: Vec<f64> = widths.iter().map(rational::to_f64).collect();
        for signs in sign_patterns(n, count, seed) {
            if out.len() == count {
                return Ok(out);
            }
            out.push(h.iter().zip(signs).map(|(w, s)| if s { -w } else { *w }).collect());
        }
        let bases = primes(n);
        let shift: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let mut k = 1u64;
        while out.len() < count {
            out.push(
                (0..n)
                    .map(|j| {
                        let u = (radical_inverse(k, bases[j]) + shift[j]).fract();
                        (2.0 * u - 1.0) * h[j]
                    })
                    .collect(),
            );
            k += 1;
        }
        return Ok(out);
    }

    let p = match ball.seminorm.kind() {
        SeminormKind::Lp { p } => *p,
        SeminormKind::WeightedL1 { .. } => unreachable!("weighted l1 balls are boxes"),
    };
    let q = Seminorm::conjugate_exponent(p);
    let radius = rational::to_f64(&ball.radius) * rational::to_f64(ball.seminorm.scale());

    let push = |out: &mut Vec<Vec<f64>>, mut v: Vec<f64>| {
        let norm = lp_norm(&v, q);
        if norm > radius {
            let shrink = radius / norm;
            v.iter_mut().for_each(|x| *x *= shrink);
        }
        out.push(v);
    };

    for j in 0..n {
        for sign in [1.0, -1.0] {
            if out.len() == count {
                return Ok(out);
            }
            let mut v = vec![0.0; n];
            v[j] = sign * radius;
            push(&mut out, v);
        }
    }
    if n > 1 {
        let corner = radius / (n as f64).powf(1.0 / q);
        for signs in sign_patterns(n, count, seed) {
            if out.len() == count {
                return Ok(out);
            }
            push(&mut out, signs.iter().map(|&s| if s { -corner } else { corner }).collect());
        }
    }
    let mut boundary = true;
    while out.len() < count {
        let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = lp_norm(&g, q);
        if norm == 0.0 {
            continue;
        }
        let r = if boundary { radius } else { radius * rng.random::<f64>().powf(1.0 / n as f64) };
        boundary = !boundary;
        push(&mut out, g.iter().map(|x| x / norm * r).collect());
    }
    Ok(out)
}

/// `v* ∈ ⋃_{ρ∈S, i} B̄_i(ρ′)`, the spectrum of the finest lmc extension
/// generated by a finite family and finitely many scalings.
pub fn union_contains(
    family: &SeminormFamily,
    scalings: &[Rational],
    vstar: &[f64],
) -> Result<bool, SpectrumError> {
    for rho in family.members() {
        for i in scalings {
            if SpectrumBall::new(rho.clone(), i.clone())?.contains(vstar)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
