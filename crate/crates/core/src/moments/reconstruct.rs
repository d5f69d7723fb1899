use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Num, Signed, Zero};

use super::{table_from_measure, Atom, AtomicMeasure, MomentError, MomentTable};
use crate::rational::{self, Rational};

/// Per-entry agreement required of a reconstruction, relative to
/// `max(1, |L(x^k)|)`.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Relative size below which a float `L(p_j²)` counts as zero.
const FLOAT_RANK_TOL: f64 = 1e-9;

struct Recurrence<T> {
    alphas: Vec<T>,
    /// `betas[j]` pairs `p_{j+1}` with `p_j`; one shorter than `alphas`.
    betas: Vec<T>,
    /// The next orthogonal polynomial vanished in `L`-norm: `L` has finite
    /// rank `alphas.len()`.
    rank_found: bool,
}

fn pair<T: Clone + Num>(p: &[T], q: &[T], moments: &[T], shift: usize) -> (T, T)
where
    T: Signed,
{
    let mut acc = T::zero();
    let mut scale = T::zero();
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            let t = a.clone() * b.clone() * moments[i + j + shift].clone();
            scale = scale + t.abs();
            acc = acc + t;
        }
    }
    (acc, scale)
}

/// Three-term recurrence of the monic orthogonal polynomials of the
/// functional with moments `moments[k] = L(x^k)`, run until a polynomial has
/// zero norm, `max_rank` nodes are reached, or the moments run out.
fn stieltjes<T>(moments: &[T], max_rank: usize, negligible: impl Fn(&T, &T) -> bool) -> Result<Recurrence<T>, MomentError>
where
    T: Clone + Num + Signed + PartialOrd + std::fmt::Debug,
{
    let top = moments.len() - 1;
    let mut prev: Vec<T> = Vec::new();
    let mut cur: Vec<T> = vec![T::one()];
    let mut prev_norm = T::one();
    let mut out = Recurrence { alphas: Vec::new(), betas: Vec::new(), rank_found: false };
    for j in 0.. {
        if 2 * j > top {
            break;
        }
        let (norm, scale) = pair(&cur, &cur, moments, 0);
        if negligible(&norm, &scale) {
            out.rank_found = true;
            break;
        }
        if norm.is_negative() {
            return Err(MomentError::NotPositive(format!("L(p_{j}^2) = {norm:?} < 0")));
        }
        if j == max_rank || 2 * j + 1 > top {
            break;
        }
        let alpha = pair(&cur, &cur, moments, 1).0 / norm.clone();
        let mut next = vec![T::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + c.clone();
            next[i] = next[i].clone() - alpha.clone() * c.clone();
        }
        if j > 0 {
            let beta = norm.clone() / prev_norm.clone();
            for (i, c) in prev.iter().enumerate() {
                next[i] = next[i].clone() - beta.clone() * c.clone();
            }
            out.betas.push(beta);
        }
        out.alphas.push(alpha);
        prev = std::mem::replace(&mut cur, next);
        prev_norm = norm;
    }
    Ok(out)
}

fn quadrature(alphas: &[f64], betas: &[f64], mass: f64) -> Vec<(f64, f64)> {
    let r = alphas.len();
    if r == 0 {
        return Vec::new();
    }
    let mut jac = DMatrix::<f64>::zeros(r, r);
    for i in 0..r {
        jac[(i, i)] = alphas[i];
        if i + 1 < r {
            let b = betas[i].max(0.0).sqrt();
            jac[(i, i + 1)] = b;
            jac[(i + 1, i)] = b;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut nodes: Vec<(f64, f64)> = (0..r)
        .map(|i| (eig.eigenvalues[i], mass * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes
}

fn recurrence_f64(moments: &[f64], exact: Option<&[Rational]>, max_rank: usize) -> Result<(Vec<f64>, Vec<f64>, bool), MomentError> {
    match exact {
        Some(q) => {
            let rec = stieltjes(q, max_rank, |v, _| v.is_zero())?;
            let conv = |xs: &[Rational]| xs.iter().map(rational::to_f64).collect();
            Ok((conv(&rec.alphas), conv(&rec.betas), rec.rank_found))
        }
        None => {
            let rec = stieltjes(moments, max_rank, |v, scale| v.abs() <= FLOAT_RANK_TOL * scale)?;
            Ok((rec.alphas, rec.betas, rec.rank_found))
        }
    }
}

/// Gauss nodes and weights of a univariate positive functional, using as many
/// nodes (at most `max_nodes`) as the moments determine. Exact recurrence
/// coefficients when `exact` is given. The nodes lie in the convex hull of
/// any representing measure's support.
pub fn gauss_nodes(moments: &[f64], exact: Option<&[Rational]>, max_nodes: usize) -> Result<Vec<(f64, f64)>, MomentError> {
    if moments.is_empty() {
        return Ok(Vec::new());
    }
    let (alphas, betas, _) = recurrence_f64(moments, exact, max_nodes)?;
    Ok(quadrature(&alphas, &betas, moments[0]))
}

/// Recovers `μ = Σ w_j δ_{α_j}` with at most `budget` atoms from a univariate
/// table, via the orthogonal-polynomial recurrence: the atoms are the roots of
/// the first orthogonal polynomial of zero norm (eigenvalues of the Jacobi
/// matrix) and the weights come from its first eigenvector components.
///
/// Fails unless the rank is detected within the budget and the recovered
/// measure reproduces every table entry to [`RECONSTRUCTION_TOL`].
pub fn reconstruct_univariate(table: &MomentTable, budget: usize) -> Result<AtomicMeasure, MomentError> {
    if table.nvars() != 1 {
        return Err(MomentError::NotUnivariate(table.nvars()));
    }
    let moments = table.marginal(0);
    let exact = table.marginal_exact(0);
    let (alphas, betas, rank_found) = recurrence_f64(&moments, exact.as_deref(), budget)?;
    if !rank_found {
        return Err(MomentError::Reconstruction(format!(
            "moment matrix has rank above {} or the table (degree {}) is too short to show it",
            alphas.len(),
            table.max_degree()
        )));
    }
    let atoms = quadrature(&alphas, &betas, moments[0])
        .into_iter()
        .map(|(x, w)| {
            let point = rational::from_f64(x).ok_or_else(|| MomentError::Reconstruction("non-finite node".into()))?;
            let weight = rational::from_f64(w).ok_or_else(|| MomentError::Reconstruction("non-finite weight".into()))?;
            Ok(Atom { point: vec![point], weight })
        })
        .collect::<Result<Vec<_>, MomentError>>()?;
    let mu = AtomicMeasure::new(1, atoms).map_err(|e| MomentError::Reconstruction(e.to_string()))?;
    let forward = table_from_measure(&mu, table.max_degree());
    for (m, v) in table.iter() {
        let got = forward.value(m).expect("complete");
        if (got - v).abs() > RECONSTRUCTION_TOL * v.abs().max(1.0) {
            return Err(MomentError::Reconstruction(format!("entry {m}: table {v}, reconstruction {got}")));
        }
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn atoms(mu: &AtomicMeasure) -> Vec<(f64, f64)> {
        mu.atoms().iter().map(|a| (rational::to_f64(&a.point[0]), rational::to_f64(&a.weight))).collect()
    }

    #[test]
    fn alternating_table_gives_two_atoms() {
        let t = MomentTable::univariate(&[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        let got = atoms(&reconstruct_univariate(&t, 5).unwrap());
        assert_eq!(got.len(), 2);
        for ((x, w), ex) in got.iter().zip([-1.0, 1.0]) {
            assert!((x - ex).abs() < 1e-12 && (w - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn point_mass_at_origin() {
        let t = MomentTable::univariate(&[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(atoms(&reconstruct_univariate(&t, 3).unwrap()), vec![(0.0, 1.0)]);
    }

    #[test]
    fn three_atoms_round_trip() {
        let third = rat(1, 3);
        let mu = AtomicMeasure::from_pairs(
            1,
            vec![(vec![int(-1)], third.clone()), (vec![int(0)], third.clone()), (vec![int(1)], third)],
        )
        .unwrap();
        let t = table_from_measure(&mu, 6);
        let got = atoms(&reconstruct_univariate(&t, 3).unwrap());
        for ((x, w), ex) in got.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((x - ex).abs() < 1e-8 && (w - 1.0 / 3.0).abs() < 1e-8);
        }
        // The float path agrees with the exact one.
        let floats = MomentTable::univariate(&t.marginal(0)).unwrap();
        let got = atoms(&reconstruct_univariate(&floats, 3).unwrap());
        for ((x, _), ex) in got.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((x - ex).abs() < 1e-8);
        }
    }

    #[test]
    fn failures_are_explicit() {
        let t = table_from_measure(
            &AtomicMeasure::from_pairs(1, vec![(vec![int(1)], int(1)), (vec![int(2)], int(1)), (vec![int(3)], int(1))])
                .unwrap(),
            8,
        );
        assert!(matches!(reconstruct_univariate(&t, 2), Err(MomentError::Reconstruction(_))));
        let short = t.truncated(4).unwrap();
        assert!(matches!(reconstruct_univariate(&short, 5), Err(MomentError::Reconstruction(_))));
        let neg = MomentTable::univariate(&[1.0, 0.0, -1.0]).unwrap();
        assert!(matches!(reconstruct_univariate(&neg, 2), Err(MomentError::NotPositive(_))));
    }

    #[test]
    fn gauss_nodes_stay_in_the_hull() {
        let mu = AtomicMeasure::from_pairs(
            1,
            (0..7).map(|k| (vec![rat(k - 3, 2)], rat(1, 7))).collect(),
        )
        .unwrap();
        let t = table_from_measure(&mu, 8);
        let nodes = gauss_nodes(&t.marginal(0), t.marginal_exact(0).as_deref(), 4).unwrap();
        assert_eq!(nodes.len(), 4);
        assert!(nodes.iter().all(|(x, w)| x.abs() <= 1.5 && *w > 0.0));
        let mass: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }
}
