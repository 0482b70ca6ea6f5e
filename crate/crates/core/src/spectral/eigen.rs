//! Hermitian tridiagonal eigendecomposition by implicit QL with Wilkinson shifts.

use crate::error::{Error, Result};
use crate::reps::Tridiagonal;
use crate::scalar::{Cx, Real};

/// Eigenvalues in ascending order and the first `rows` components of each
/// normalized eigenvector (`vectors[k][j]` is component `j` of vector `k`).
#[derive(Clone, Debug, PartialEq)]
pub struct Eigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<Cx<T>>>,
}

/// Diagonalizes a Hermitian tridiagonal matrix.
///
/// The off-diagonal phases are removed by a diagonal unitary, the resulting
/// real symmetric matrix is diagonalized by implicit QL, and the phases are
/// restored on the returned components. `rows = 1` gives the Golub–Welsch
/// weights for the first basis vector at `O(n^2)` cost; `rows = n` gives
/// full eigenvectors.
pub fn hermitian_tridiagonal_eigen<T: Real>(tri: &Tridiagonal<T>, rows: usize) -> Result<Eigen<T>> {
    let n = tri.dim();
    let rows = rows.min(n);
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    let mut d: Vec<T> = tri.diag.iter().map(|c| c.re).collect();
    let mut e = vec![T::zero(); n];
    let mut phase = vec![Cx::new(T::one(), T::zero()); n];
    for k in 0..n - 1 {
        let s = tri.sub[k];
        let a = s.norm();
        e[k] = a;
        phase[k + 1] = if a.is_zero() { phase[k] } else { phase[k] * s / a };
    }
    // z[r][j]: row r of the accumulated rotation, column j
    let mut z = vec![vec![T::zero(); n]; rows];
    for (r, row) in z.iter_mut().enumerate() {
        row[r] = T::one();
    }
    ql_implicit(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..rows).map(|r| phase[r] * z[r][k]).collect())
        .collect();
    Ok(Eigen { values, vectors })
}

/// Implicit QL on a real symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[k] = A[k+1][k]` (`e[n-1]` ignored). Rotations are applied
/// to the rows held in `z`.
fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T], z: &mut [Vec<T>]) -> Result<()> {
    let n = d.len();
    if n > 0 {
        e[n - 1] = T::zero();
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Accuracy("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (T::two() * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r.is_zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::two() * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn tri(diag: &[f64], sub: &[Cx<f64>]) -> Tridiagonal<f64> {
        Tridiagonal {
            diag: diag.iter().map(|&d| cx(d, 0.0)).collect(),
            sub: sub.to_vec(),
            sup: sub.iter().map(|s| s.conj()).collect(),
        }
    }

    #[test]
    fn two_by_two() {
        let t = tri(&[0.0, 0.0], &[cx(1.0, 0.0)]);
        let eig = hermitian_tridiagonal_eigen(&t, 2).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15 && (eig.values[1] - 1.0).abs() < 1e-15);
        let w: f64 = eig.vectors.iter().map(|v| v[0].norm_sqr()).sum();
        assert!((w - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_off_diagonal_reconstructs() {
        let t = tri(&[1.0, -0.5, 2.0, 0.3], &[cx(0.3, 0.4), cx(0.0, -1.0), cx(-0.7, 0.2)]);
        let eig = hermitian_tridiagonal_eigen(&t, 4).unwrap();
        let m = t.to_matrix();
        for (k, lam) in eig.values.iter().enumerate() {
            let v = &eig.vectors[k];
            let mv = m.matvec(v);
            for j in 0..4 {
                assert!((mv[j] - v[j] * *lam).norm() < 1e-13);
            }
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
