//! Small dense symmetric-matrix helpers for the feature-vector
//! Gaussian. Matrices here are z x z with z around 16, so a plain
//! Jacobi eigensolver is plenty.

/// Jacobi eigendecomposition of a symmetric matrix. Returns
/// `(eigenvalues, eigenvectors)` with eigenvector `k` stored as column
/// `k` (i.e. `vectors[i][k]` is component `i` of eigenvector `k`).
pub fn jacobi_eigen(sym: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = sym.len();
    let mut a: Vec<Vec<f64>> = sym.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off <= 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    (values, v)
}

/// Reconstructs the matrix with eigenvalues clamped below `min_eig`,
/// yielding a strictly positive definite result.
pub fn clamp_eigenvalues(sym: &[Vec<f64>], min_eig: f64) -> Vec<Vec<f64>> {
    let n = sym.len();
    let (vals, vecs) = jacobi_eigen(sym);
    let mut out = vec![vec![0.0; n]; n];
    for k in 0..n {
        let lam = vals[k].max(min_eig);
        for i in 0..n {
            for j in 0..n {
                out[i][j] += lam * vecs[i][k] * vecs[j][k];
            }
        }
    }
    // Force exact symmetry against rounding drift.
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (out[i][j] + out[j][i]);
            out[i][j] = m;
            out[j][i] = m;
        }
    }
    out
}

/// Factor `L = V sqrt(D)` such that `L L^T` equals the matrix with
/// eigenvalues clamped below `min_eig`. Drawing `L x` with standard
/// normal `x` samples the corresponding Gaussian.
pub fn sampling_factor(sym: &[Vec<f64>], min_eig: f64) -> Vec<Vec<f64>> {
    let n = sym.len();
    let (vals, vecs) = jacobi_eigen(sym);
    let mut l = vec![vec![0.0; n]; n];
    for k in 0..n {
        let root = vals[k].max(min_eig).sqrt();
        for i in 0..n {
            l[i][k] = vecs[i][k] * root;
        }
    }
    l
}

pub fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_diagonal() {
        let m = vec![vec![3.0, 0.0], vec![0.0, 1.0]];
        let (mut vals, _) = jacobi_eigen(&m);
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn factor_reproduces_matrix() {
        let m = vec![
            vec![2.0, 0.5, 0.1],
            vec![0.5, 1.5, 0.2],
            vec![0.1, 0.2, 1.0],
        ];
        let l = sampling_factor(&m, 1e-12);
        let n = m.len();
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += l[i][k] * l[j][k];
                }
                assert!((s - m[i][j]).abs() < 1e-9, "LL^T mismatch at ({i},{j})");
            }
        }
    }

    #[test]
    fn clamp_lifts_zero_matrix() {
        let m = vec![vec![0.0; 3]; 3];
        let c = clamp_eigenvalues(&m, 1e-9);
        for (i, row) in c.iter().enumerate() {
            assert!((row[i] - 1e-9).abs() < 1e-15);
        }
    }
}
