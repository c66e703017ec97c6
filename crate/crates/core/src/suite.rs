//! Seeded property sweeps.
//!
//! Each property function runs a fixed number of cases for one matrix size
//! and returns a [`PropertyResult`] with the failure count and a description
//! of the first failing case. [`run`] strings them together per suite for
//! `diamond-lab props`; the output depends only on the configuration.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geninv::{group_inverse, inner_inverse, penrose_residuals, pinv};
use crate::matcore::sample::{ginibre_with, sample_with, stream, Stream};
use crate::matcore::{approx_eq, inverse, rank, svd, BlockMat, CMat, SampleKind, Tol};
use crate::orders::corpus::{labelled_pairs, pair_from, Source};
use crate::orders::{
    diamond_below, diamond_lift, gen_diamond_pair, gen_diamond_pair_with, leq, leq_blocks,
    leq_diamond, leq_diamond_dagger, leq_left_star, leq_minus, leq_right_star, leq_star,
    minus_witness, orthogonal, OrderKind, Verdict,
};
use crate::preservers::{
    decompose_preserver, jordan_map, jordan_star_check, make_canonical, mp_preservation_check,
    phase_distance, preserves_diamond, Flavor, LinearMap,
};
use crate::structure::{
    forced_singular, invertibility_probe, is_maximal_diamond, is_minimal_diamond, minimal_below,
    projection_characterization, scalar_unitary_defect, unitary_mult_preserves, Defect, Side,
};

const SUITE_TAG: u64 = 0x5017e;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Matcore,
    Geninv,
    Orders,
    Structure,
    Preservers,
    Jordan,
    All,
}

impl SuiteName {
    pub const EACH: [SuiteName; 6] = [
        SuiteName::Matcore,
        SuiteName::Geninv,
        SuiteName::Orders,
        SuiteName::Structure,
        SuiteName::Preservers,
        SuiteName::Jordan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteName::Matcore => "matcore",
            SuiteName::Geninv => "geninv",
            SuiteName::Orders => "orders",
            SuiteName::Structure => "structure",
            SuiteName::Preservers => "preservers",
            SuiteName::Jordan => "jordan",
            SuiteName::All => "all",
        }
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        SuiteName::EACH
            .into_iter()
            .chain([SuiteName::All])
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub sizes: Vec<usize>,
    /// Pairs (or samples) per property and size.
    pub pairs: usize,
    pub tol: Tol,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            sizes: vec![2, 3, 4, 8],
            pairs: 1000,
            tol: Tol::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub property: &'static str,
    pub n: usize,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally(PropertyResult);

impl Tally {
    fn new(suite: &'static str, property: &'static str, n: usize) -> Self {
        Tally(PropertyResult {
            suite,
            property,
            n,
            cases: 0,
            failures: 0,
            first_failure: None,
        })
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.0.cases += 1;
        if !ok {
            self.0.failures += 1;
            if self.0.first_failure.is_none() {
                self.0.first_failure = Some(format!("case {}: {}", self.0.cases - 1, describe()));
            }
        }
    }

    /// Count a case that returned an error as a failure.
    fn check(&mut self, outcome: Result<bool>, describe: impl FnOnce() -> String) {
        match outcome {
            Ok(ok) => self.record(ok, describe),
            Err(e) => self.record(false, || format!("{} (error: {e})", describe())),
        }
    }

    fn done(self) -> PropertyResult {
        self.0
    }
}

/// One-line rendering, entries to 6 significant digits.
pub fn compact(m: &CMat) -> String {
    let mut s = String::from("[");
    for i in 0..m.rows() {
        if i > 0 {
            s.push_str("; ");
        }
        for j in 0..m.cols() {
            if j > 0 {
                s.push(' ');
            }
            let z = m[(i, j)];
            let _ = write!(s, "{:.6}{:+.6}i", z.re, z.im);
        }
    }
    s.push(']');
    s
}

fn pair_text(a: &CMat, b: &CMat) -> String {
    format!("a={} b={}", compact(a), compact(b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub results: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(PropertyResult::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "seed: {}  sizes: {:?}  pairs: {}  tol: atol={:e} rtol={:e} rank_rel={:e}",
            self.config.seed,
            self.config.sizes,
            self.config.pairs,
            self.config.tol.atol,
            self.config.tol.rtol,
            self.config.tol.rank_rel
        )?;
        writeln!(
            f,
            "{:<11} {:<28} {:>3} {:>6} {:>6}  result",
            "suite", "property", "n", "cases", "fails"
        )?;
        for r in &self.results {
            writeln!(
                f,
                "{:<11} {:<28} {:>3} {:>6} {:>6}  {}",
                r.suite,
                r.property,
                r.n,
                r.cases,
                r.failures,
                if r.passed() { "pass" } else { "FAIL" }
            )?;
        }
        for r in self.results.iter().filter(|r| !r.passed()) {
            if let Some(ff) = &r.first_failure {
                writeln!(
                    f,
                    "first failure [{} {} n={}]: {ff}",
                    r.suite, r.property, r.n
                )?;
            }
        }
        let failed = self.results.iter().filter(|r| !r.passed()).count();
        write!(
            f,
            "summary: {} properties, {} failed",
            self.results.len(),
            failed
        )
    }
}

pub fn run(suite: SuiteName, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let list: Vec<SuiteName> = match suite {
        SuiteName::All => SuiteName::EACH.to_vec(),
        s => vec![s],
    };
    let mut results = Vec::new();
    for s in list {
        for &n in &cfg.sizes {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "matrix size must be positive".into(),
                ));
            }
            let seed = cfg.seed;
            let tol = &cfg.tol;
            let k = cfg.pairs;
            match s {
                SuiteName::Matcore => results.extend(matcore_props(n, k, seed, tol)),
                SuiteName::Geninv => results.extend(geninv_props(n, k, seed, tol)),
                SuiteName::Orders => {
                    results.push(reflexivity(n, k, seed, tol));
                    results.push(transitivity(n, k, seed, tol));
                    results.push(antisymmetry(n, k / 5, seed, tol));
                    results.push(generator_consistency(n, k, seed, tol));
                    results.extend(equivalences(n, k, seed, tol));
                    results.push(orthogonal_sums(n, k / 5, seed, tol));
                    results.push(blockwise_lifting(n, k / 5, seed, tol));
                }
                SuiteName::Structure => {
                    results.push(minimal_below_prop(n, k / 2, seed, tol));
                    results.push(rank_one_rigidity(n, k / 5, seed, tol));
                    results.extend(projection_characterization_props(n, k / 2, seed, tol));
                    results.push(invertibility_probe_prop(n, k, seed, tol));
                    results.push(maximality_witness(n, k / 2, seed, tol));
                    results.push(scaled_unitary_mult(n, k / 5, seed, tol));
                    if n <= 4 {
                        results.push(diagonal_defect(n, k / 10, seed, tol));
                    }
                }
                SuiteName::Preservers => {
                    if n <= 4 {
                        results.extend(canonical_preservation(n, k / 2, seed, tol));
                        results.push(round_trip(n, 50, seed, tol));
                    }
                    results.push(diagonal_multiplier(n, k / 10, seed, tol));
                }
                SuiteName::Jordan => results.extend(jordan_props(n, k / 2, seed, tol)),
                SuiteName::All => unreachable!(),
            }
        }
    }
    Ok(SuiteReport {
        config: cfg.clone(),
        results,
    })
}

fn rng_for(seed: u64, property: u64, n: usize) -> Stream {
    stream(seed, &[SUITE_TAG, property, n as u64])
}

// ---------------------------------------------------------------- matcore

pub fn matcore_props(n: usize, count: usize, seed: u64, tol: &Tol) -> Vec<PropertyResult> {
    let mut rng = rng_for(seed, 1, n);
    let mut recon = Tally::new("matcore", "svd-reconstruction", n);
    let mut rk = Tally::new("matcore", "rank-of-product", n);
    let mut sym = Tally::new("matcore", "approx-eq-symmetry", n);
    for k in 0..count {
        let r = k % (n + 1);
        let a = sample_with(&mut rng, SampleKind::Rank(r), n).expect("r ≤ n");
        let f = svd(&a);
        recon.check(
            f.map(|f| (&f.reconstruct() - &a).fro_norm() <= 1e-12 * a.fro_norm().max(1.0)),
            || compact(&a),
        );
        rk.check(rank(&a, tol).map(|x| x == r), || {
            format!("expected rank {r}: {}", compact(&a))
        });
        let b = &a + &ginibre_with(&mut rng, n, n).scale_real(10f64.powi(-((k % 12) as i32)));
        sym.check(
            approx_eq(&a, &b, tol).and_then(|x| Ok(x == approx_eq(&b, &a, tol)?)),
            || pair_text(&a, &b),
        );
    }
    vec![recon.done(), rk.done(), sym.done()]
}

// ----------------------------------------------------------------- geninv

pub fn geninv_props(n: usize, count: usize, seed: u64, tol: &Tol) -> Vec<PropertyResult> {
    let mut rng = rng_for(seed, 2, n);
    let mut penrose = Tally::new("geninv", "penrose-equations", n);
    let mut invol = Tally::new("geninv", "pinv-involution", n);
    let mut group = Tally::new("geninv", "group-inverse-normal", n);
    let mut inner = Tally::new("geninv", "inner-inverse-family", n);
    for k in 0..count {
        let a = sample_with(&mut rng, SampleKind::Rank(k % (n + 1)), n).expect("r ≤ n");
        let outcome = pinv(&a, tol).and_then(|g| {
            let ok = penrose_residuals(&a, &g)?.accepts(a.fro_norm() * g.fro_norm(), tol);
            Ok((g, ok))
        });
        match outcome {
            Ok((g, ok)) => {
                penrose.record(ok, || compact(&a));
                invol.check(
                    pinv(&g, tol).map(|gg| {
                        (&gg - &a).fro_norm()
                            <= tol.threshold(a.fro_norm() * (a.fro_norm() * g.fro_norm()).max(1.0))
                    }),
                    || compact(&a),
                );
                let v = ginibre_with(&mut rng, n, n);
                inner.check(
                    inner_inverse(&a, &v, tol).map(|b| {
                        let r = (&(&(&a * &b) * &a) - &a).fro_norm();
                        r <= tol.threshold(a.fro_norm() * a.fro_norm() * b.fro_norm())
                    }),
                    || compact(&a),
                );
            }
            Err(e) => penrose.record(false, || format!("{}: {e}", compact(&a))),
        }
        // normal matrices are group invertible with a♯ = a†
        let u = sample_with(&mut rng, SampleKind::Unitary, n).expect("n > 0");
        let d: Vec<f64> = (0..n)
            .map(|i| {
                if i < k % (n + 1) {
                    rng.random_range(0.5..2.0)
                } else {
                    0.0
                }
            })
            .collect();
        let m = &(&u * &CMat::diag(&d)) * &u.adjoint();
        group.check(
            group_inverse(&m, tol).and_then(|g| match g {
                Some(g) => approx_eq(
                    &g,
                    &pinv(&m, tol)?,
                    &Tol::new(1e3 * tol.atol, 1e3 * tol.rtol, tol.rank_rel),
                ),
                None => Ok(false),
            }),
            || compact(&m),
        );
    }
    vec![penrose.done(), invol.done(), group.done(), inner.done()]
}

// ----------------------------------------------------------------- orders

const SAMPLE_KINDS: usize = 6;

fn assorted(rng: &mut Stream, k: usize, n: usize) -> CMat {
    let r = rng.random_range(0..=n);
    let kind = match k % SAMPLE_KINDS {
        0 => SampleKind::Ginibre,
        1 => SampleKind::Rank(r),
        2 => SampleKind::Hermitian,
        3 => SampleKind::Projection(r),
        4 => SampleKind::Unitary,
        _ => SampleKind::PartialIsometry(r),
    };
    sample_with(rng, kind, n).expect("r ≤ n")
}

pub fn reflexivity(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 3, n);
    let mut t = Tally::new("orders", "reflexivity", n);
    for k in 0..count {
        let a = assorted(&mut rng, k, n);
        t.check(leq_diamond(&a, &a, tol).map(|r| r.holds()), || compact(&a));
    }
    t.done()
}

/// Chains `a ◇≤ b ◇≤ c`, built either by lifting above a generated pair or
/// by taking a random element below one.
pub fn transitivity(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 4, n);
    let mut t = Tally::new("orders", "transitivity", n);
    for k in 0..count {
        let route = rng.random_bool(0.5);
        let chain = gen_diamond_pair_with(&mut rng, n, route).and_then(|(x, y)| {
            if k % 2 == 0 {
                let c = diamond_lift(&y, &ginibre_with(&mut rng, n, n), tol)?;
                Ok((x, y, c))
            } else {
                Ok((diamond_below(&x, &mut rng, tol)?, x, y))
            }
        });
        match chain {
            Ok((a, b, c)) => {
                let ok = (|| -> Result<bool> {
                    let ab = leq_diamond(&a, &b, tol)?.holds();
                    let bc = leq_diamond(&b, &c, tol)?.holds();
                    Ok(!(ab && bc) || leq_diamond(&a, &c, tol)?.holds())
                })();
                t.check(ok, || format!("{} c={}", pair_text(&a, &b), compact(&c)));
            }
            Err(e) => t.record(false, || format!("chain construction: {e}")),
        }
    }
    t.done()
}

/// Two-way related pairs: `b = a + ε·g` for Ginibre `g` and `ε` spread over
/// `0` and `10⁻¹⁶ … 10⁻¹⁰` (relative to `‖a‖`). Every pair found related
/// both ways must satisfy `‖a − b‖ ≤ 100·tol·max(1, ‖b‖)`; `count` two-way
/// pairs are collected.
pub fn antisymmetry(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 5, n);
    let mut t = Tally::new("orders", "antisymmetry", n);
    let mut attempts = 0;
    while t.0.cases < count && attempts < 20 * count.max(1) {
        attempts += 1;
        let a = assorted(&mut rng, attempts, n);
        let e = rng.random_range(9..=17);
        let eps = if e == 17 {
            0.0
        } else {
            10f64.powi(-e) * a.fro_norm().max(1.0)
        };
        let b = &a + &ginibre_with(&mut rng, n, n).scale_real(eps);
        let both = leq_diamond(&a, &b, tol)
            .and_then(|x| Ok(x.holds() && leq_diamond(&b, &a, tol)?.holds()));
        match both {
            Ok(true) => {
                let bound = 100.0 * tol.scalar() * b.fro_norm().max(1.0);
                t.record((&a - &b).fro_norm() <= bound, || pair_text(&a, &b));
            }
            Ok(false) => {}
            Err(e) => t.record(false, || format!("{}: {e}", pair_text(&a, &b))),
        }
    }
    if t.0.cases < count {
        t.0.failures += 1;
        t.0.first_failure.get_or_insert_with(|| {
            format!("only {} two-way pairs in {attempts} attempts", t.0.cases)
        });
    }
    t.done()
}

pub fn generator_consistency(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut t = Tally::new("orders", "generator-consistency", n);
    for k in 0..count as u64 {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(k);
        match gen_diamond_pair(n, s) {
            Ok((a, b)) => t.check(leq_diamond(&a, &b, tol).map(|r| r.holds()), || {
                format!("seed {s}: {}", pair_text(&a, &b))
            }),
            Err(e) => t.record(false, || format!("seed {s}: {e}")),
        }
    }
    t.done()
}

/// The characterization sweep over a mixed corpus: diamond against its
/// dagger route, diamond against the minus order of the Moore-Penrose
/// inverses, minus rank route against the witness route, star against both
/// one-sided stars, and star ⇒ diamond.
pub fn equivalences(n: usize, count: usize, seed: u64, tol: &Tol) -> Vec<PropertyResult> {
    let mut dagger = Tally::new("orders", "diamond<=>dagger-route", n);
    let mut dual = Tally::new("orders", "diamond<=>minus-of-pinv", n);
    let mut witness = Tally::new("orders", "minus-rank<=>witness", n);
    let mut sides = Tally::new("orders", "star<=>left-and-right", n);
    let mut implies = Tally::new("orders", "star=>diamond", n);
    let corpus = match labelled_pairs(n, count, seed) {
        Ok(c) => c,
        Err(e) => {
            dagger.record(false, || format!("corpus: {e}"));
            return vec![dagger.done()];
        }
    };
    for (src, a, b) in &corpus {
        let text = || format!("{src:?} {}", pair_text(a, b));
        let d = leq_diamond(a, b, tol).map(|r| r.holds());
        dagger.check(
            d.clone()
                .and_then(|d| Ok(d == leq_diamond_dagger(a, b, tol)?.holds())),
            text,
        );
        dual.check(
            d.clone().and_then(|d| {
                let (ap, bp) = (pinv(a, tol)?, pinv(b, tol)?);
                Ok(d == leq_minus(&ap, &bp, tol)?.holds())
            }),
            text,
        );
        witness.check(
            leq_minus(a, b, tol).and_then(|m| Ok(m.holds() == minus_witness(a, b, tol)?.is_some())),
            text,
        );
        let star = leq_star(a, b, tol).map(|r| r.holds());
        sides.check(
            star.clone().and_then(|s| {
                Ok(s == (leq_left_star(a, b, tol)?.holds() && leq_right_star(a, b, tol)?.holds()))
            }),
            text,
        );
        implies.check(star.and_then(|s| Ok(!s || d.clone()?)), text);
    }
    vec![
        dagger.done(),
        dual.done(),
        witness.done(),
        sides.done(),
        implies.done(),
    ]
}

pub fn orthogonal_sums(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 6, n);
    let mut t = Tally::new("orders", "orthogonal-sum-below", n);
    for _ in 0..count {
        match pair_from(&mut rng, Source::OrthogonalSum, n) {
            Ok((a, b)) => t.check(
                (|| {
                    let c = &b - &a;
                    Ok(!orthogonal(&a, &c, tol)? || leq_diamond(&a, &b, tol)?.holds())
                })(),
                || pair_text(&a, &b),
            ),
            Err(e) => t.record(false, || e.to_string()),
        }
    }
    t.done()
}

/// Block pairs in `M_n ⊕ M_{n'}` built from corpus pairs: the blockwise
/// verdict must equal the verdict on the block-diagonal embedding, for every
/// order kind.
pub fn blockwise_lifting(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 7, n);
    let mut t = Tally::new("orders", "blockwise-lifting", n);
    let m = 1 + n / 2;
    for k in 0..count {
        let s1 = Source::CYCLE[k % Source::CYCLE.len()];
        let s2 = Source::CYCLE[(k / 3) % Source::CYCLE.len()];
        let built = (|| -> Result<(BlockMat, BlockMat)> {
            let (a1, b1) = pair_from(&mut rng, s1, n)?;
            let (a2, b2) = pair_from(&mut rng, s2, m)?;
            Ok((BlockMat::new(vec![a1, a2])?, BlockMat::new(vec![b1, b2])?))
        })();
        let (a, b) = match built {
            Ok(p) => p,
            Err(e) => {
                t.record(false, || e.to_string());
                continue;
            }
        };
        for kind in OrderKind::ALL {
            t.check(
                (|| {
                    let blockwise = leq_blocks(kind, &a, &b, tol)?;
                    let dense = leq(kind, &a.to_dense(), &b.to_dense(), tol)?.verdict;
                    Ok(blockwise == dense)
                })(),
                || format!("{kind}: {}", pair_text(&a.to_dense(), &b.to_dense())),
            );
        }
    }
    t.done()
}

// -------------------------------------------------------------- structure

fn nonzero_sample(rng: &mut Stream, n: usize) -> CMat {
    let r = rng.random_range(1..=n);
    sample_with(rng, SampleKind::Rank(r), n).expect("r ≤ n")
}

pub fn minimal_below_prop(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 8, n);
    let mut t = Tally::new("structure", "minimal-below", n);
    for k in 0..count {
        let a = nonzero_sample(&mut rng, n);
        t.check(
            minimal_below(&a, tol, seed ^ k as u64).and_then(|u| {
                let u = u.to_matrix();
                Ok(rank(&u, tol)? == 1 && leq_diamond(&u, &a, tol)?.holds())
            }),
            || compact(&a),
        );
    }
    t.done()
}

/// Nonzero `v ◇≤ u` with both rank one forces `v ≈ u`. Probes include the
/// rank-one pieces of `u` itself, multiples of `u` and random rank-one
/// matrices sharing a range with `u`.
pub fn rank_one_rigidity(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 9, n);
    let mut t = Tally::new("structure", "rank-one-rigidity", n);
    for k in 0..count {
        let u = sample_with(&mut rng, SampleKind::Rank(1), n).expect("n ≥ 1");
        let f = svd(&u).expect("finite");
        let col = CMat::from_fn(n, 1, |i, _| f.left[(i, 0)]);
        let row = CMat::from_fn(1, n, |_, j| f.right[(j, 0)].conj());
        let same_ranges = &(&col * &row).scale_real(rng.random_range(0.1..3.0));
        let probes = vec![
            u.clone(),
            u.scale_real(2.0),
            same_ranges.clone(),
            minimal_below(&u, tol, k as u64)
                .map(|m| m.to_matrix())
                .unwrap_or_else(|_| u.clone()),
            sample_with(&mut rng, SampleKind::Rank(1), n).expect("n ≥ 1"),
        ];
        t.check(
            is_minimal_diamond(&u, &probes, tol).map(|r| r.minimal && r.violations.is_empty()),
            || compact(&u),
        );
    }
    t.done()
}

/// Positives: projections `p` below projections `q` (including `q = I`).
/// Negatives against `q = I`: oblique idempotents, Hermitian
/// non-idempotents and scaled projections.
pub fn projection_characterization_props(
    n: usize,
    count: usize,
    seed: u64,
    tol: &Tol,
) -> Vec<PropertyResult> {
    let mut rng = rng_for(seed, 10, n);
    let mut pos = Tally::new("structure", "projection-char-positive", n);
    let mut neg = Tally::new("structure", "projection-char-negative", n);
    let id = CMat::identity(n);
    for k in 0..count {
        let r = rng.random_range(0..=n);
        let s = rng.random_range(0..=n - r);
        let frame = sample_with(&mut rng, SampleKind::Unitary, n).expect("n > 0");
        let proj = |lo: usize, hi: usize| {
            let d: Vec<f64> = (0..n)
                .map(|i| if (lo..hi).contains(&i) { 1.0 } else { 0.0 })
                .collect();
            &(&frame * &CMat::diag(&d)) * &frame.adjoint()
        };
        let p = proj(0, r);
        let q = if k % 2 == 0 {
            id.clone()
        } else {
            proj(0, r + s)
        };
        pos.check(
            projection_characterization(&p, &q, tol).map(|v| v == Verdict::Holds),
            || pair_text(&p, &q),
        );

        let bad = match k % 3 {
            0 => {
                // S·diag(1,…,0,…)·S⁻¹, not selfadjoint unless S is special
                let j = rng.random_range(1..n.max(2)).min(n);
                let sm = ginibre_with(&mut rng, n, n);
                let d: Vec<f64> = (0..n).map(|i| if i < j { 1.0 } else { 0.0 }).collect();
                match inverse(&sm) {
                    Ok(si) if n > 1 => &(&sm * &CMat::diag(&d)) * &si,
                    _ => id.scale_real(0.5),
                }
            }
            1 => sample_with(&mut rng, SampleKind::Hermitian, n).expect("n > 0"),
            _ => {
                let r = rng.random_range(1..=n);
                let c = rng.random_range(0.2..0.8);
                sample_with(&mut rng, SampleKind::Projection(r), n)
                    .expect("r ≤ n")
                    .scale_real(c)
            }
        };
        neg.check(
            projection_characterization(&bad, &id, tol).map(|v| v == Verdict::Fails),
            || compact(&bad),
        );
    }
    vec![pos.done(), neg.done()]
}

pub fn invertibility_probe_prop(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 11, n);
    let mut t = Tally::new("structure", "invertibility-probe", n);
    for k in 0..count {
        let a = if k % 2 == 0 {
            forced_singular(&mut rng, n)
        } else {
            assorted(&mut rng, k, n)
        };
        t.check(
            (|| Ok(invertibility_probe(&a, tol)?.invertible == (rank(&a, tol)? == n)))(),
            || compact(&a),
        );
    }
    t.done()
}

pub fn maximality_witness(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 12, n);
    let mut t = Tally::new("structure", "maximality-witness", n);
    for k in 0..count {
        let a = forced_singular(&mut rng, n);
        t.check(
            is_maximal_diamond(&a, tol, seed ^ k as u64).and_then(|r| match r.strictly_above {
                Some(b) => {
                    Ok(!r.maximal && leq_diamond(&a, &b, tol)?.holds() && !approx_eq(&a, &b, tol)?)
                }
                None => Ok(false),
            }),
            || compact(&a),
        );
    }
    t.done()
}

/// Multiplication by `c·U` (U unitary) on either side preserves generated
/// diamond pairs and does not relate unrelated corpus pairs.
pub fn scaled_unitary_mult(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 13, n);
    let mut t = Tally::new("structure", "scaled-unitary-mult", n);
    let pairs = match labelled_pairs(n, count, seed ^ 0x13) {
        Ok(p) => p,
        Err(e) => {
            t.record(false, || e.to_string());
            return t.done();
        }
    };
    for side in [Side::Left, Side::Right] {
        let c = rng.random_range(0.3..4.0);
        let u = sample_with(&mut rng, SampleKind::Unitary, n)
            .expect("n > 0")
            .scale_real(c);
        let related: Vec<(CMat, CMat)> = (0..count)
            .map(|_| {
                let route = rng.random_bool(0.5);
                gen_diamond_pair_with(&mut rng, n, route)
            })
            .collect::<Result<_>>()
            .unwrap_or_default();
        t.check(
            unitary_mult_preserves(&u, &related, side, tol).map(|v| v == Verdict::Holds),
            || format!("{side:?} u={}", compact(&u)),
        );
        for (_, a, b) in &pairs {
            let (ua, ub) = match side {
                Side::Left => (&u * a, &u * b),
                Side::Right => (a * &u, b * &u),
            };
            t.check(
                (|| Ok(leq_diamond(a, b, tol)?.holds() == leq_diamond(&ua, &ub, tol)?.holds()))(),
                || format!("{side:?} u={} {}", compact(&u), pair_text(a, b)),
            );
        }
    }
    t.done()
}

fn non_scalar_diagonal(rng: &mut Stream, n: usize) -> CMat {
    loop {
        let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.25..4.0)).collect();
        let (lo, hi) = d
            .iter()
            .fold((f64::MAX, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
        if hi - lo > 1e-3 {
            return CMat::diag(&d);
        }
    }
}

/// Non-scalar positive diagonal multipliers: the defect search must return
/// a verified witness, never `NoDefect`.
pub fn diagonal_defect(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 14, n);
    let mut t = Tally::new("structure", "diagonal-defect-search", n);
    for k in 0..count {
        let d = non_scalar_diagonal(&mut rng, n);
        let side = if k % 2 == 0 { Side::Left } else { Side::Right };
        t.check(
            scalar_unitary_defect(&d, side, tol, seed ^ k as u64).and_then(|r| match r {
                Defect::Witness(w) => {
                    let rel = leq_diamond(&w.a, &w.b, tol)?.holds();
                    let (da, db) = match side {
                        Side::Left => (&d * &w.a, &d * &w.b),
                        Side::Right => (&w.a * &d, &w.b * &d),
                    };
                    Ok(rel != leq_diamond(&da, &db, tol)?.holds())
                }
                _ => Ok(false),
            }),
            || format!("{side:?} {}", compact(&d)),
        );
    }
    t.done()
}

// ------------------------------------------------------------- preservers

/// Canonical maps for the four (transpose, λ = 1 or not) combinations pass
/// both-direction preservation on `count` pairs each.
pub fn canonical_preservation(n: usize, count: usize, seed: u64, tol: &Tol) -> Vec<PropertyResult> {
    let mut rng = rng_for(seed, 15, n);
    let mut out = Vec::new();
    for (name, transpose, unit_scale) in [
        ("canonical-plain-unit", false, true),
        ("canonical-plain-scaled", false, false),
        ("canonical-transpose-unit", true, true),
        ("canonical-transpose-scaled", true, false),
    ] {
        let mut t = Tally::new("preservers", name, n);
        let lambda = if unit_scale {
            1.0
        } else {
            rng.random_range(0.2..5.0)
        };
        let u = sample_with(&mut rng, SampleKind::Unitary, n).expect("n > 0");
        let v = sample_with(&mut rng, SampleKind::Unitary, n).expect("n > 0");
        match make_canonical(lambda, &u, &v, transpose)
            .and_then(|m| preserves_diamond(&m, count, seed ^ 0x15, tol, true))
        {
            Ok(pv) => {
                t.0.cases = pv.sample_count;
                if !pv.holds() {
                    t.0.failures = 1;
                    t.0.first_failure = pv
                        .counterexample
                        .map(|c| format!("{:?}: {}", c.direction, pair_text(&c.a, &c.b)));
                }
            }
            Err(e) => t.record(false, || e.to_string()),
        }
        out.push(t.done());
    }
    out
}

/// `decompose_preserver ∘ make_canonical` recovers the scale within 1e-8
/// relative, the flavor exactly and `U`, `V` up to a phase, with
/// reconstruction residual ≤ 1e-8.
pub fn round_trip(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let mut rng = rng_for(seed, 16, n);
    let mut t = Tally::new("preservers", "decompose-round-trip", n);
    for k in 0..count {
        let lambda = rng.random_range(0.1..10.0);
        let u = sample_with(&mut rng, SampleKind::Unitary, n).expect("n > 0");
        let v = sample_with(&mut rng, SampleKind::Unitary, n).expect("n > 0");
        let transpose = k % 2 == 1;
        t.check(
            make_canonical(lambda, &u, &v, transpose)
                .and_then(|m| decompose_preserver(&m, tol))
                .map(|rep| {
                    let want = if transpose {
                        Flavor::AntiIso
                    } else {
                        Flavor::Iso
                    };
                    match (&rep.canonical, rep.residual("reconstruction")) {
                        (Some((c, cu, cv)), Some(recon)) => {
                            rep.flavor == want
                                && (c - lambda).abs() <= 1e-8 * lambda
                                && recon <= 1e-8
                                && phase_distance(cu, &u) <= 1e-8
                                && phase_distance(cv, &v) <= 1e-8
                        }
                        _ => false,
                    }
                }),
            || {
                format!(
                    "λ={lambda} transpose={transpose} U={} V={}",
                    compact(&u),
                    compact(&v)
                )
            },
        );
    }
    t.done()
}

/// Runs of `x ↦ D·x` with non-scalar positive diagonal `D`: each run must
/// end with a verified counterexample (forward or backward) from a 50-pair
/// budget, or the defect search.
pub fn diagonal_multiplier(n: usize, count: usize, seed: u64, tol: &Tol) -> PropertyResult {
    let found = diagonal_multiplier_runs(n, count, seed, tol);
    let mut t = Tally::new("preservers", "diagonal-multiplier-caught", n);
    for (k, outcome) in found.into_iter().enumerate() {
        t.check(outcome, || format!("run {k}: inconclusive"));
    }
    t.done()
}

/// Per-run outcome: `Ok(true)` verified counterexample, `Ok(false)`
/// inconclusive. Never reports preservation for a non-scalar multiplier.
pub fn diagonal_multiplier_runs(n: usize, runs: usize, seed: u64, tol: &Tol) -> Vec<Result<bool>> {
    let mut rng = rng_for(seed, 17, n);
    (0..runs)
        .map(|k| {
            let d = non_scalar_diagonal(&mut rng, n);
            let t = LinearMap::from_fn(n, |x| &d * x);
            let pv = preserves_diamond(&t, 50, seed ^ (k as u64) << 8, tol, true)?;
            if pv.counterexample.is_some() {
                return Ok(true);
            }
            Ok(matches!(
                scalar_unitary_defect(&d, Side::Left, tol, seed ^ k as u64)?,
                Defect::Witness(_)
            ))
        })
        .collect()
}

// ----------------------------------------------------------------- jordan

pub fn jordan_props(n: usize, count: usize, seed: u64, tol: &Tol) -> Vec<PropertyResult> {
    let j = jordan_map(n);
    let mut star = Tally::new("jordan", "embedding-jordan-star", n);
    star.check(
        jordan_star_check(&j, count, seed, tol).map(|c| c.holds),
        || "a ↦ a ⊕ aᵀ".into(),
    );
    star.0.cases = count;
    let mut mp = Tally::new("jordan", "embedding-mp-preservation", n);
    mp.check(
        mp_preservation_check(&j, count, seed, tol).map(|v| v == Verdict::Holds),
        || "a ↦ a ⊕ aᵀ".into(),
    );
    mp.0.cases = count;
    let mut pres = Tally::new("jordan", "embedding-diamond-blockwise", n);
    match preserves_diamond(&j, count, seed, tol, false) {
        Ok(pv) => {
            pres.0.cases = pv.sample_count;
            if !pv.forward_ok {
                pres.0.failures = 1;
                pres.0.first_failure = pv.counterexample.map(|c| pair_text(&c.a, &c.b));
            }
        }
        Err(e) => pres.record(false, || e.to_string()),
    }
    let mut neg = Tally::new("jordan", "scaling-fails-jordan-star", n);
    let two = LinearMap::from_fn(n, |a| a.scale_real(2.0));
    neg.check(
        jordan_star_check(&two, count.min(50), seed, tol).map(|c| !c.holds),
        || "a ↦ 2a passed".into(),
    );
    vec![star.done(), mp.done(), pres.done(), neg.done()]
}
