//! Exact re-evaluation of the order definitions for real 2×2 matrices with
//! rational entries. Shares no code with the floating-point predicates:
//! range inclusion is decided by ranks of stacked matrices, the group
//! inverse by `rank(a²) = rank(a)` and a closed form.

use num_rational::Ratio;
use num_traits::{One, Zero};

use diamond_core::{CMat, OrderKind, Verdict, C64};

pub type Q = Ratio<i128>;
pub type M2 = [[Q; 2]; 2];

pub fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

pub fn m2(e: [[(i128, i128); 2]; 2]) -> M2 {
    e.map(|row| row.map(|(n, d)| q(n, d)))
}

pub fn to_cmat(a: &M2) -> CMat {
    CMat::from_fn(2, 2, |i, j| {
        let x = a[i][j];
        C64::new(*x.numer() as f64 / *x.denom() as f64, 0.0)
    })
}

fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[Q::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn sub(a: &M2, b: &M2) -> M2 {
    let mut c = *a;
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] -= b[i][j];
        }
    }
    c
}

fn scale(a: &M2, s: Q) -> M2 {
    a.map(|row| row.map(|x| x * s))
}

fn t(a: &M2) -> M2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Rank of a dense rational matrix by Gaussian elimination.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c] / m[r][c];
                let pivot = m[r].clone();
                for (x, v) in m[i][c..].iter_mut().zip(&pivot[c..]) {
                    *x -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

fn rows(a: &M2) -> Vec<Vec<Q>> {
    a.iter().map(|r| r.to_vec()).collect()
}

fn rk(a: &M2) -> usize {
    rank(&rows(a))
}

/// `aA ⊆ bA` iff appending the columns of `a` to `b` keeps the rank.
fn col_incl(a: &M2, b: &M2) -> bool {
    let side: Vec<Vec<Q>> = (0..2)
        .map(|i| vec![b[i][0], b[i][1], a[i][0], a[i][1]])
        .collect();
    rank(&side) == rk(b)
}

fn row_incl(a: &M2, b: &M2) -> bool {
    let mut stacked = rows(b);
    stacked.extend(rows(a));
    rank(&stacked) == rk(b)
}

fn group_inverse(a: &M2) -> Option<M2> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let tr = a[0][0] + a[1][1];
    match rk(a) {
        0 => Some(*a),
        2 => Some(scale(
            &[[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]],
            Q::one() / det,
        )),
        // rank one: a² = tr(a)·a, so a♯ = a / tr(a)² when tr(a) ≠ 0
        _ if tr.is_zero() => None,
        _ => Some(scale(a, Q::one() / (tr * tr))),
    }
}

pub fn verdict(kind: OrderKind, a: &M2, b: &M2) -> Verdict {
    let at = t(a);
    let space = col_incl(a, b) && row_incl(a, b);
    let left_gram = mul(&at, a) == mul(&at, b);
    let right_gram = mul(a, &at) == mul(b, &at);
    let holds = match kind {
        OrderKind::Space => space,
        OrderKind::Diamond => space && mul(&mul(a, &at), a) == mul(&mul(a, &t(b)), a),
        OrderKind::Star => left_gram && right_gram,
        OrderKind::LeftStar => left_gram && col_incl(a, b),
        OrderKind::RightStar => right_gram && row_incl(a, b),
        OrderKind::Minus => rk(&sub(b, a)) + rk(a) == rk(b),
        OrderKind::Sharp => {
            let (Some(ag), Some(_)) = (group_inverse(a), group_inverse(b)) else {
                return Verdict::Inapplicable;
            };
            mul(&ag, a) == mul(&ag, b) && mul(a, &ag) == mul(b, &ag)
        }
    };
    Verdict::from_bool(holds)
}

/// 200 structured pairs: diagonal, Jordan-block and projection-based
/// families (8×8 ordered pairs each) plus 8 cross-family pairs.
pub fn grid() -> Vec<(M2, M2)> {
    let diag = |x: (i128, i128), y: (i128, i128)| m2([[x, (0, 1)], [(0, 1), y]]);
    let diagonal = vec![
        diag((0, 1), (0, 1)),
        diag((1, 1), (0, 1)),
        diag((0, 1), (1, 1)),
        diag((2, 1), (0, 1)),
        diag((1, 1), (1, 1)),
        diag((1, 1), (2, 1)),
        diag((1, 1), (-1, 1)),
        diag((-1, 2), (3, 4)),
    ];
    let jordan = vec![
        m2([[(0, 1), (1, 1)], [(0, 1), (0, 1)]]),
        m2([[(0, 1), (0, 1)], [(1, 1), (0, 1)]]),
        m2([[(1, 1), (1, 1)], [(0, 1), (1, 1)]]),
        m2([[(2, 1), (1, 1)], [(0, 1), (2, 1)]]),
        m2([[(1, 1), (1, 1)], [(0, 1), (0, 1)]]),
        m2([[(0, 1), (2, 1)], [(0, 1), (0, 1)]]),
        m2([[(-1, 2), (1, 1)], [(0, 1), (-1, 2)]]),
        m2([[(1, 1), (0, 1)], [(0, 1), (1, 1)]]),
    ];
    let projection = vec![
        m2([[(1, 2), (1, 2)], [(1, 2), (1, 2)]]),
        m2([[(1, 2), (-1, 2)], [(-1, 2), (1, 2)]]),
        m2([[(1, 1), (1, 1)], [(0, 1), (0, 1)]]),
        m2([[(1, 1), (0, 1)], [(1, 1), (0, 1)]]),
        m2([[(1, 1), (1, 1)], [(1, 1), (1, 1)]]),
        // the worked example with 1/√2 replaced by 1/2: a and a + u
        m2([[(1, 1), (0, 1)], [(0, 1), (0, 1)]]),
        m2([[(1, 1), (1, 2)], [(0, 1), (1, 2)]]),
        m2([[(0, 1), (1, 2)], [(0, 1), (1, 2)]]),
    ];
    let mut out = Vec::with_capacity(200);
    for fam in [&diagonal, &jordan, &projection] {
        for a in fam.iter() {
            for b in fam.iter() {
                out.push((*a, *b));
            }
        }
    }
    for k in 0..8 {
        let (x, y, z) = (diagonal[k], jordan[k], projection[k]);
        out.push(if k % 2 == 0 { (x, z) } else { (z, y) });
    }
    assert_eq!(out.len(), 200);
    out
}
