//! Partial orders and pre-orders on matrix algebras.
//!
//! Every predicate returns an [`OrderReport`] carrying the verdict, the
//! residual of each defining identity next to the threshold it was tested
//! against, and witnesses where the definition is existential. Range
//! inclusions `aA ⊆ bA` and `Aa ⊆ Ab` are tested through the projector
//! residuals `‖bb†a − a‖` and `‖ab†b − a‖`.
//!
//! Thresholds are `atol + rtol·scale` with the scale following the degree
//! of the identity: `‖a‖` for range inclusions, `‖a‖·max(‖a‖,‖b‖)` for the
//! quadratic star/sharp/orthogonality identities and `‖a‖³` for the cubic
//! diamond identity `aa*a = ab*a`.

pub mod corpus;
mod generate;
mod hasse;
mod predicates;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::matcore::CMat;

pub use generate::{
    diamond_below, diamond_lift, gen_diamond_pair, gen_diamond_pair_with, minus_pair,
};
pub use hasse::{hasse, Hasse};
pub use predicates::{
    leq, leq_blocks, leq_diamond, leq_diamond_dagger, leq_left_star, leq_minus, leq_right_star,
    leq_sharp, leq_space, leq_star, orthogonal,
};
pub use witness::minus_witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    Space,
    Diamond,
    Star,
    LeftStar,
    RightStar,
    Minus,
    Sharp,
}

impl OrderKind {
    pub const ALL: [OrderKind; 7] = [
        OrderKind::Space,
        OrderKind::Diamond,
        OrderKind::Star,
        OrderKind::LeftStar,
        OrderKind::RightStar,
        OrderKind::Minus,
        OrderKind::Sharp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderKind::Space => "space",
            OrderKind::Diamond => "diamond",
            OrderKind::Star => "star",
            OrderKind::LeftStar => "left-star",
            OrderKind::RightStar => "right-star",
            OrderKind::Minus => "minus",
            OrderKind::Sharp => "sharp",
        }
    }

    /// Only the space relation is a pre-order; the rest are partial orders.
    pub fn is_preorder(self) -> bool {
        self == OrderKind::Space
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        OrderKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// The relation is undefined for these arguments (sharp order on a
    /// matrix without group inverse, a precondition that does not hold).
    Inapplicable,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
}

impl Residual {
    pub fn new(name: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            name,
            value,
            threshold,
        }
    }

    pub fn ok(&self) -> bool {
        self.value <= self.threshold
    }
}

#[derive(Debug, Clone)]
pub struct OrderReport {
    pub kind: OrderKind,
    pub verdict: Verdict,
    pub residuals: Vec<Residual>,
    pub witnesses: Vec<(String, CMat)>,
}

impl OrderReport {
    pub(crate) fn from_residuals(kind: OrderKind, residuals: Vec<Residual>) -> Self {
        let verdict = Verdict::from_bool(residuals.iter().all(Residual::ok));
        Self {
            kind,
            verdict,
            residuals,
            witnesses: Vec::new(),
        }
    }

    pub(crate) fn inapplicable(kind: OrderKind) -> Self {
        Self {
            kind,
            verdict: Verdict::Inapplicable,
            residuals: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }

    pub fn residual(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    pub fn witness(&self, name: &str) -> Option<&CMat> {
        self.witnesses
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }
}
