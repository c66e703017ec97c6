use super::dense::{CMat, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Relative pivot size below which a matrix is declared singular.
const PIVOT_EPS: f64 = 1e-13;

/// Inverse by LU with partial pivoting.
pub fn inverse(a: &CMat) -> Result<CMat> {
    a.ensure_square("inverse")?;
    let n = a.rows();
    let scale = a.fro_norm();
    if scale == 0.0 {
        return Err(Error::Singular { op: "inverse" });
    }
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (piv, piv_abs) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty pivot range");
        if piv_abs <= PIVOT_EPS * scale {
            return Err(Error::Singular { op: "inverse" });
        }
        if piv != k {
            perm.swap(piv, k);
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
            }
        }
        let d = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / d;
            lu[(i, k)] = f;
            if f == ZERO {
                continue;
            }
            for j in (k + 1)..n {
                let t = lu[(k, j)];
                lu[(i, j)] -= f * t;
            }
        }
    }

    let mut inv = CMat::zeros(n, n);
    let mut col = vec![ZERO; n];
    for c in 0..n {
        for (i, x) in col.iter_mut().enumerate() {
            *x = if perm[i] == c { ONE } else { ZERO };
        }
        for i in 0..n {
            let mut s = col[i];
            for j in 0..i {
                s -= lu[(i, j)] * col[j];
            }
            col[i] = s;
        }
        for i in (0..n).rev() {
            let mut s: C64 = col[i];
            for j in (i + 1)..n {
                s -= lu[(i, j)] * col[j];
            }
            col[i] = s / lu[(i, i)];
        }
        inv.set_column(c, &col);
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::sample::{sample, SampleKind};

    #[test]
    fn inverse_of_random_matrix() {
        for seed in 0..10 {
            let a = sample(SampleKind::Ginibre, 5, seed).unwrap();
            let ai = inverse(&a).unwrap();
            assert!((&(&a * &ai) - &CMat::identity(5)).fro_norm() < 1e-10);
        }
    }

    #[test]
    fn singular_is_reported() {
        assert_eq!(
            inverse(&CMat::diag(&[1.0, 0.0])),
            Err(Error::Singular { op: "inverse" })
        );
        assert!(inverse(&CMat::zeros(3, 3)).is_err());
        assert!(matches!(
            inverse(&CMat::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn permutation_needs_pivoting() {
        let p = CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(inverse(&p).unwrap(), p);
    }
}
