use std::fmt::Write as _;

use super::{leq, OrderKind, Verdict};
use crate::error::{Error, Result};
use crate::matcore::{CMat, Tol};

/// Cover relation of a finite set of matrices.
///
/// Mutually related elements are collapsed into one class first (the space
/// relation is only a pre-order; for partial orders this merges numerical
/// duplicates). Edges run between class indices, lower to upper.
#[derive(Debug, Clone, PartialEq)]
pub struct Hasse {
    pub kind: OrderKind,
    /// Input indices per class, each sorted; classes ordered by first member.
    pub classes: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    /// Inputs dropped because the relation is undefined for them.
    pub excluded: Vec<usize>,
    pub warnings: Vec<String>,
}

pub fn hasse(elements: &[CMat], kind: OrderKind, tol: &Tol) -> Result<Hasse> {
    if let Some(first) = elements.first() {
        for e in elements {
            first.ensure_same_shape(e, "hasse")?;
        }
    }
    let mut warnings = Vec::new();
    let mut excluded = Vec::new();
    let mut live = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if leq(kind, e, e, tol)?.verdict == Verdict::Inapplicable {
            warnings.push(format!(
                "element {i} excluded: {kind} order undefined for it"
            ));
            excluded.push(i);
        } else {
            live.push(i);
        }
    }

    let m = live.len();
    let mut rel = vec![vec![false; m]; m];
    for p in 0..m {
        for q in 0..m {
            rel[p][q] = p == q || leq(kind, &elements[live[p]], &elements[live[q]], tol)?.holds();
        }
    }

    // a position joins the first class whose representative it is mutually related to
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut reps = Vec::new();
    for p in 0..m {
        match reps.iter().position(|&r: &usize| rel[p][r] && rel[r][p]) {
            Some(c) => classes[c].push(live[p]),
            None => {
                classes.push(vec![live[p]]);
                reps.push(p);
            }
        }
    }
    if kind != OrderKind::Space && classes.len() < m {
        warnings.push(format!(
            "{} numerically equal elements merged under the {kind} order",
            m - classes.len()
        ));
    }

    let k = classes.len();
    let crel = |x: usize, y: usize| rel[reps[x]][reps[y]];
    let mut edges = Vec::new();
    for x in 0..k {
        for y in 0..k {
            if x == y || !crel(x, y) {
                continue;
            }
            let covered = (0..k).any(|z| z != x && z != y && crel(x, z) && crel(z, y));
            if !covered {
                edges.push((x, y));
            }
        }
    }
    Ok(Hasse {
        kind,
        classes,
        edges,
        excluded,
        warnings,
    })
}

impl Hasse {
    /// Edges as pairs of input indices (class representatives).
    pub fn element_edges(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .map(|&(x, y)| (self.classes[x][0], self.classes[y][0]))
            .collect()
    }

    /// Graphviz digraph with one node per retained input. Members of a
    /// collapsed class share a cluster; edges leave class representatives.
    pub fn to_dot(&self, labels: &[String]) -> Result<String> {
        let total = self.classes.iter().map(Vec::len).sum::<usize>() + self.excluded.len();
        if labels.len() != total {
            return Err(Error::Format(format!(
                "expected {total} labels, got {}",
                labels.len()
            )));
        }
        let mut out = String::new();
        let _ = writeln!(out, "digraph hasse {{");
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  label=\"{} order\";", self.kind);
        for (c, members) in self.classes.iter().enumerate() {
            if members.len() > 1 {
                let _ = writeln!(out, "  subgraph cluster_{c} {{");
                for &i in members {
                    let _ = writeln!(out, "    n{i} [label=\"{}\"];", escape(&labels[i]));
                }
                let _ = writeln!(out, "  }}");
            } else {
                let i = members[0];
                let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(&labels[i]));
            }
        }
        for (x, y) in self.element_edges() {
            let _ = writeln!(out, "  n{x} -> n{y};");
        }
        out.push_str("}\n");
        Ok(out)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
