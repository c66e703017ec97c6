use super::{OrderKind, OrderReport, Residual, Verdict};
use crate::error::{Error, Result};
use crate::geninv::{group_inverse, pinv};
use crate::matcore::{rank, BlockMat, CMat, Tol};

fn check_pair(a: &CMat, b: &CMat, op: &'static str, square: bool) -> Result<()> {
    a.ensure_same_shape(b, op)?;
    if square {
        a.ensure_square(op)?;
    }
    Ok(())
}

/// Range-inclusion residuals shared by space, diamond and the one-sided
/// star orders: `‖bb†a − a‖` (column space) and `‖ab†b − a‖` (row space).
fn inclusion(a: &CMat, b: &CMat, bp: &CMat, tol: &Tol) -> (Residual, Residual) {
    let thr = tol.threshold(a.fro_norm());
    let col = (&(&(b * bp) * a) - a).fro_norm();
    let row = (&(&(a * bp) * b) - a).fro_norm();
    (
        Residual::new("col_inclusion", col, thr),
        Residual::new("row_inclusion", row, thr),
    )
}

/// `a ≤_sp b`: `aA ⊆ bA` and `Aa ⊆ Ab`. Attaches witnesses `y = b†a`
/// (`a = by`) and `x = ab†` (`a = xb`) when it holds.
pub fn leq_space(a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    check_pair(a, b, "leq_space", true)?;
    let bp = pinv(b, tol)?;
    Ok(space_with(a, b, &bp, tol))
}

fn space_with(a: &CMat, b: &CMat, bp: &CMat, tol: &Tol) -> OrderReport {
    let (col, row) = inclusion(a, b, bp, tol);
    let mut rep = OrderReport::from_residuals(OrderKind::Space, vec![col, row]);
    if rep.holds() {
        rep.witnesses.push(("y".into(), bp * a));
        rep.witnesses.push(("x".into(), a * bp));
    }
    rep
}

/// Diamond order: `a ≤_sp b` and `aa*a = ab*a`.
pub fn leq_diamond(a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    check_pair(a, b, "leq_diamond", true)?;
    let bp = pinv(b, tol)?;
    let mut rep = space_with(a, b, &bp, tol);
    let na = a.fro_norm();
    let ad = a.adjoint();
    let lhs = &(a * &ad) * a;
    let rhs = &(a * &b.adjoint()) * a;
    rep.residuals.push(Residual::new(
        "cubic",
        (&lhs - &rhs).fro_norm(),
        tol.threshold(na * na * na),
    ));
    rep.kind = OrderKind::Diamond;
    rep.verdict = Verdict::from_bool(rep.residuals.iter().all(Residual::ok));
    if !rep.holds() {
        rep.witnesses.clear();
    }
    Ok(rep)
}

/// Diamond order through the Moore-Penrose inverse of `a`:
/// `a ≤_sp b` and `a†ba† = a†`.
pub fn leq_diamond_dagger(a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    check_pair(a, b, "leq_diamond_dagger", true)?;
    let bp = pinv(b, tol)?;
    let ap = pinv(a, tol)?;
    let mut rep = space_with(a, b, &bp, tol);
    let resid = (&(&(&ap * b) * &ap) - &ap).fro_norm();
    rep.residuals
        .push(Residual::new("dagger", resid, tol.threshold(ap.fro_norm())));
    rep.kind = OrderKind::Diamond;
    rep.verdict = Verdict::from_bool(rep.residuals.iter().all(Residual::ok));
    if !rep.holds() {
        rep.witnesses.clear();
    }
    Ok(rep)
}

fn quad_threshold(a: &CMat, b: &CMat, tol: &Tol) -> f64 {
    let na = a.fro_norm();
    tol.threshold(na * na.max(b.fro_norm()))
}

/// Star order: `a*a = a*b` and `aa* = ba*`.
pub fn leq_star(a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    check_pair(a, b, "leq_star", false)?;
    let thr = quad_threshold(a, b, tol);
    let ad = a.adjoint();
    let left = (&(&ad * a) - &(&ad * b)).fro_norm();
    let right = (&(a * &ad) - &(b * &ad)).fro_norm();
    Ok(OrderReport::from_residuals(
        OrderKind::Star,
        vec![
            Residual::new("left_gram", left, thr),
            Residual::new("right_gram", right, thr),
        ],
    ))
}

/// Left-star order: `a*a = a*b` and `Im a ⊆ Im b`.
pub fn leq_left_star(a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    check_pair(a, b, "leq_left_star", false)?;
    let thr = quad_threshold(a, b, tol);
    let ad = a.adjoint();
    let gram = (&(&ad * a) - &(&ad * b)).fro_norm();
    let bp = pinv(b, tol)?;
    let (col, _) = inclusion(a, b, &bp, tol);
    Ok(OrderReport::from_residuals(
        OrderKind::LeftStar,
        vec![Residual::new("left_gram", gram, thr), col],
    ))
}

/// Right-star order: `aa* = ba*` and `Im a* ⊆ Im b*`.
pub fn leq_right_star(a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    check_pair(a, b, "leq_right_star", false)?;
    let thr = quad_threshold(a, b, tol);
    let ad = a.adjoint();
    let gram = (&(a * &ad) - &(b * &ad)).fro_norm();
    let bp = pinv(b, tol)?;
    let (_, row) = inclusion(a, b, &bp, tol);
    Ok(OrderReport::from_residuals(
        OrderKind::RightStar,
        vec![Residual::new("right_gram", gram, thr), row],
    ))
}

/// Minus (rank-subtractivity) order: `rank(b − a) = rank(b) − rank(a)`.
/// The residual is the integer rank defect, tested against zero.
pub fn leq_minus(a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    check_pair(a, b, "leq_minus", false)?;
    let ra = rank(a, tol)? as i64;
    let rb = rank(b, tol)? as i64;
    let rd = rank(&(b - a), tol)? as i64;
    Ok(OrderReport::from_residuals(
        OrderKind::Minus,
        vec![Residual::new(
            "rank_defect",
            (rd - (rb - ra)).abs() as f64,
            0.0,
        )],
    ))
}

/// Sharp order: `a♯a = a♯b` and `aa♯ = ba♯`. Inapplicable unless both
/// arguments are group invertible.
pub fn leq_sharp(a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    check_pair(a, b, "leq_sharp", true)?;
    let Some(ag) = group_inverse(a, tol)? else {
        return Ok(OrderReport::inapplicable(OrderKind::Sharp));
    };
    if group_inverse(b, tol)?.is_none() {
        return Ok(OrderReport::inapplicable(OrderKind::Sharp));
    }
    let thr = tol.threshold(ag.fro_norm() * a.fro_norm().max(b.fro_norm()));
    let left = (&(&ag * a) - &(&ag * b)).fro_norm();
    let right = (&(a * &ag) - &(b * &ag)).fro_norm();
    let mut rep = OrderReport::from_residuals(
        OrderKind::Sharp,
        vec![
            Residual::new("left_sharp", left, thr),
            Residual::new("right_sharp", right, thr),
        ],
    );
    rep.witnesses.push(("a_sharp".into(), ag));
    Ok(rep)
}

/// `a ⊥ b`: `ab* = 0` and `b*a = 0`.
pub fn orthogonal(a: &CMat, b: &CMat, tol: &Tol) -> Result<bool> {
    a.ensure_same_shape(b, "orthogonal")?;
    let thr = tol.threshold(a.fro_norm() * b.fro_norm());
    let bd = b.adjoint();
    Ok((a * &bd).fro_norm() <= thr && (&bd * a).fro_norm() <= thr)
}

pub fn leq(kind: OrderKind, a: &CMat, b: &CMat, tol: &Tol) -> Result<OrderReport> {
    match kind {
        OrderKind::Space => leq_space(a, b, tol),
        OrderKind::Diamond => leq_diamond(a, b, tol),
        OrderKind::Star => leq_star(a, b, tol),
        OrderKind::LeftStar => leq_left_star(a, b, tol),
        OrderKind::RightStar => leq_right_star(a, b, tol),
        OrderKind::Minus => leq_minus(a, b, tol),
        OrderKind::Sharp => leq_sharp(a, b, tol),
    }
}

/// Blockwise verdict in `⊕ M_{nᵢ}`: holds iff it holds in every block,
/// inapplicable if any block is.
pub fn leq_blocks(kind: OrderKind, a: &BlockMat, b: &BlockMat, tol: &Tol) -> Result<Verdict> {
    if a.sizes() != b.sizes() {
        return Err(Error::BlockStructure);
    }
    let mut verdict = Verdict::Holds;
    for (x, y) in a.blocks().iter().zip(b.blocks()) {
        match leq(kind, x, y, tol)?.verdict {
            Verdict::Inapplicable => return Ok(Verdict::Inapplicable),
            Verdict::Fails => verdict = Verdict::Fails,
            Verdict::Holds => {}
        }
    }
    Ok(verdict)
}
