//! Least squares by Householder QR with column pivoting.

use super::dense::{CMat, C64, ZERO};
use super::tol::Tol;

/// A basic solution of `min ‖m·x − rhs‖₂`, with the numerical rank decided
/// by the pivoted diagonal of R against `tol.rank_cutoff`. Columns beyond
/// the rank get zero coefficients.
pub fn lstsq(m: &CMat, rhs: &[C64], tol: &Tol) -> Vec<C64> {
    let (rows, cols) = m.shape();
    assert_eq!(rows, rhs.len(), "lstsq: rhs length mismatch");
    // column-major working copy
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut b = rhs.to_vec();
    let mut perm: Vec<usize> = (0..cols).collect();
    let steps = rows.min(cols);
    let mut diag = Vec::with_capacity(steps);

    for k in 0..steps {
        let (piv, _) = (k..cols)
            .map(|j| (j, a[j][k..].iter().map(|z| z.norm_sqr()).sum::<f64>()))
            .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(&x.0)))
            .expect("non-empty");
        a.swap(k, piv);
        perm.swap(k, piv);

        let x = &a[k][k..];
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            diag.push(0.0);
            break;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = x.to_vec();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            for z in v.iter_mut() {
                *z /= vnorm;
            }
            // H = I − 2vvᴴ applied to the trailing columns and rhs
            for col in a.iter_mut().skip(k) {
                reflect(&v, &mut col[k..]);
            }
            reflect(&v, &mut b[k..]);
        }
        diag.push(a[k][k].norm());
    }

    let rmax = diag.first().copied().unwrap_or(0.0);
    let cutoff = tol.rank_cutoff(rmax, rows, cols);
    let r = diag.iter().take_while(|&&d| d > cutoff).count();

    let mut y = vec![ZERO; r];
    for i in (0..r).rev() {
        let mut s = b[i];
        for j in (i + 1)..r {
            s -= a[j][i] * y[j];
        }
        y[i] = s / a[i][i];
    }
    let mut x = vec![ZERO; cols];
    for (i, yi) in y.into_iter().enumerate() {
        x[perm[i]] = yi;
    }
    x
}

fn reflect(v: &[C64], x: &mut [C64]) {
    let proj: C64 = v.iter().zip(x.iter()).map(|(a, b)| a.conj() * b).sum();
    let f = proj * 2.0;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= f * vi;
    }
}
