//! A concrete scale of Hilbert norms on finitely supported sequences:
//! `‖v‖_s² = Σ v_i² (i+1)^{2s}`. The embedding `H_{s2} ↪ H_{s1}` is diagonal
//! with singular values `(i+1)^{s1-s2}`, so it is Hilbert–Schmidt exactly when
//! `Σ (i+1)^{2(s1-s2)}` converges, that is when `2(s2 - s1) > 1`.
//!
//! Separability and density of the finitely supported sequences hold in this
//! model automatically.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Exact, Rational, Real};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScaleIndex(pub Rational);

impl ScaleIndex {
    pub fn new(s: Rational) -> Self {
        ScaleIndex(s)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// Finitely supported sequence; zero entries are not stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HilbertScalePoint {
    coords: BTreeMap<usize, Rational>,
}

impl HilbertScalePoint {
    pub fn new<I: IntoIterator<Item = (usize, Rational)>>(entries: I) -> Self {
        let mut coords = BTreeMap::new();
        for (i, v) in entries {
            let slot: &mut Rational = coords.entry(i).or_insert_with(Rational::zero);
            *slot += v;
        }
        coords.retain(|_, v| !v.is_zero());
        HilbertScalePoint { coords }
    }

    /// The basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        HilbertScalePoint::new([(i, Rational::one())])
    }

    pub fn coords(&self) -> &BTreeMap<usize, Rational> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

/// `‖v‖_s²` exactly, available when `s` is an integer.
pub fn hs_norm_squared_exact(s: &ScaleIndex, v: &HilbertScalePoint) -> Option<Rational> {
    if !s.0.is_integer() {
        return None;
    }
    let e = s.0.to_integer().to_i32()?.checked_mul(2)?;
    Some(
        v.coords
            .iter()
            .map(|(i, x)| x * x * rational::int(*i as i64 + 1).pow(e))
            .sum(),
    )
}

fn exact_sqrt(q: &Rational) -> Option<Rational> {
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// `‖v‖_s = √(Σ v_i² (i+1)^{2s})`; exact when `s` is an integer and the
/// squared norm is a rational square.
pub fn hs_norm(s: &ScaleIndex, v: &HilbertScalePoint) -> Real {
    if let Some(sq) = hs_norm_squared_exact(s, v) {
        return match exact_sqrt(&sq) {
            Some(r) => Real::Exact(r),
            None => Real::Approx(rational::to_f64(&sq).sqrt()),
        };
    }
    let sf = rational::to_f64(&s.0);
    let sum: f64 = v
        .coords
        .iter()
        .map(|(i, x)| rational::to_f64(x).powi(2) * ((*i + 1) as f64).powf(2.0 * sf))
        .sum();
    Real::Approx(sum.sqrt())
}

/// `H_{s2} ↪ H_{s1}` is Hilbert–Schmidt iff `2(s2 - s1) > 1`.
pub fn quasi_nuclear_embedding(s2: &ScaleIndex, s1: &ScaleIndex) -> bool {
    (&s2.0 - &s1.0) * rational::int(2) > Rational::one()
}

/// `‖·‖_{s1} ≤ ‖·‖_{s2}` for every point iff `s2 ≥ s1`.
pub fn scale_dominance(s2: &ScaleIndex, s1: &ScaleIndex) -> bool {
    s2.0 >= s1.0
}

/// A witness that `s2` does not dominate `s1`: `e_1` has
/// `‖e_1‖_{s1} = 2^{s1} > 2^{s2} = ‖e_1‖_{s2}`.
pub fn dominance_witness(s2: &ScaleIndex, s1: &ScaleIndex) -> Option<HilbertScalePoint> {
    (!scale_dominance(s2, s1)).then(|| HilbertScalePoint::basis(1))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordJson {
    pub i: usize,
    pub v: Exact,
}

/// `{"coords": [{"i": 0, "v": 1}, …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub coords: Vec<CoordJson>,
}

impl From<PointJson> for HilbertScalePoint {
    fn from(j: PointJson) -> Self {
        HilbertScalePoint::new(j.coords.into_iter().map(|c| (c.i, c.v.0)))
    }
}

impl From<&HilbertScalePoint> for PointJson {
    fn from(p: &HilbertScalePoint) -> Self {
        PointJson {
            coords: p.coords.iter().map(|(i, v)| CoordJson { i: *i, v: Exact(v.clone()) }).collect(),
        }
    }
}
