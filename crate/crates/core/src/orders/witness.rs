use crate::error::Result;
use crate::geninv::{inner_inverse, pinv};
use crate::matcore::{lstsq, CMat, Tol, C64};

/// Constructive minus-order test: look for an inner inverse `b⁻` of `b`
/// with `a = a b⁻ b = b b⁻ a = a b⁻ a`.
///
/// Inner inverses are parametrized as `b⁻ = b† + v − PvQ` (`P = b†b`,
/// `Q = bb†`). Substituting, the three identities are linear in `v`:
///
/// ```text
/// a(I−P) v b          = a(I−P)
/// b v (I−Q) a         = (I−Q) a
/// a v a − aP v Q a    = a − a b† a
/// ```
///
/// The stacked system is solved for `vec(v)` in the least-squares sense, and
/// the candidate is accepted only if the three residuals, recomputed from
/// `b⁻` itself, pass their thresholds.
pub fn minus_witness(a: &CMat, b: &CMat, tol: &Tol) -> Result<Option<CMat>> {
    a.ensure_same_shape(b, "minus_witness")?;
    let (m, n) = a.shape();
    let bp = pinv(b, tol)?;
    let p = &bp * b; // n×n
    let q = b * &bp; // m×m
    let ip = &CMat::identity(n) - &p;
    let iq = &CMat::identity(m) - &q;

    let a_ip = a * &ip;
    let iq_a = &iq * a;
    let qa = &q * a;
    let ap = a * &p;

    // vec(X v Y) = (Yᵀ ⊗ X) vec(v), column-major
    let block1 = b.transpose().kron(&a_ip);
    let block2 = iq_a.transpose().kron(b);
    let block3 = &a.transpose().kron(a) - &qa.transpose().kron(&ap);
    let system = CMat::vstack(&[&block1, &block2, &block3]);

    let mut rhs: Vec<C64> = a_ip.to_col_major();
    rhs.extend(iq_a.to_col_major());
    rhs.extend((a - &(&(a * &bp) * a)).to_col_major());

    let v = CMat::from_col_major(n, m, &lstsq(&system, &rhs, tol));
    let g = inner_inverse(b, &v, tol)?;
    if witness_residuals(a, b, &g, tol).iter().all(|(r, t)| r <= t) {
        Ok(Some(g))
    } else {
        Ok(None)
    }
}

/// `(residual, threshold)` for `a b⁻ b = a`, `b b⁻ a = a`, `a b⁻ a = a`.
/// Thresholds scale with the product of the factor norms.
pub(crate) fn witness_residuals(a: &CMat, b: &CMat, g: &CMat, tol: &Tol) -> [(f64, f64); 3] {
    let (na, nb, ng) = (a.fro_norm(), b.fro_norm(), g.fro_norm());
    let ag = a * g;
    [
        (
            (&(&ag * b) - a).fro_norm(),
            tol.threshold(na.max(na * ng * nb)),
        ),
        (
            (&(&(b * g) * a) - a).fro_norm(),
            tol.threshold(na.max(nb * ng * na)),
        ),
        (
            (&(&ag * a) - a).fro_norm(),
            tol.threshold(na.max(na * ng * na)),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{sample, SampleKind};
    use crate::orders::leq_minus;

    #[test]
    fn diagonal_witness() {
        let tol = Tol::default();
        let a = CMat::diag(&[1.0, 0.0, 0.0]);
        let b = CMat::diag(&[1.0, 2.0, 0.0]);
        let g = minus_witness(&a, &b, &tol).unwrap().expect("a ≤⁻ b");
        // direct substitution of b⁻ = diag(1, 1/2, 0)
        let expect = CMat::diag(&[1.0, 0.5, 0.0]);
        for (r, t) in witness_residuals(&a, &b, &expect, &tol) {
            assert!(r <= t);
        }
        for (r, t) in witness_residuals(&a, &b, &g, &tol) {
            assert!(r <= t);
        }
    }

    #[test]
    fn reflexive_witness_is_pinv() {
        let tol = Tol::default();
        let a = sample(SampleKind::Rank(2), 4, 5).unwrap();
        let g = minus_witness(&a, &a, &tol).unwrap().unwrap();
        assert!((&g - &pinv(&a, &tol).unwrap()).fro_norm() < 1e-9);
    }

    #[test]
    fn no_witness_when_not_below() {
        let tol = Tol::default();
        let a = CMat::diag(&[1.0, 0.0]);
        let b = CMat::diag(&[2.0, 0.0]);
        assert_eq!(minus_witness(&a, &b, &tol).unwrap(), None);
    }

    #[test]
    fn agrees_with_rank_route_on_random_pairs() {
        let tol = Tol::default();
        for seed in 0..30 {
            let a = sample(SampleKind::Rank(1 + (seed as usize % 2)), 3, seed).unwrap();
            let b = sample(SampleKind::Rank(2), 3, seed + 100).unwrap();
            let rank_route = leq_minus(&a, &b, &tol).unwrap().holds();
            let witness_route = minus_witness(&a, &b, &tol).unwrap().is_some();
            assert_eq!(rank_route, witness_route, "seed {seed}");
        }
    }
}
