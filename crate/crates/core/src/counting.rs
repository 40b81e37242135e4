//! Three independent ways to count dot-product triples.
//!
//! A triple is an ordered `(p, q, r) ∈ P³` with `p·q = α` and `p·r = β`;
//! repeated points are allowed. The counters are:
//!
//! * [`count_bruteforce`]: enumerate all `n³` triples.
//! * [`incidence_profile`]: count, for each `p`, the points on its α-line
//!   and β-line, then sum the products.
//! * [`count_via_ab`]: walk ordered pairs `(q, r)`, split them into pairs
//!   whose cross lines are all distinct (A) and pairs sharing a line (B),
//!   and locate the contributing `p` for each pair.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Crossing, ScaledFrame};
use crate::geometry::{dot, lines_coincide, radial_direction, PointSet, RadialDirection};
use crate::rational::Rational;

/// The prescribed pair of dot products.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DotPair {
    pub alpha: Rational,
    pub beta: Rational,
}

impl DotPair {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        DotPair { alpha, beta }
    }

    pub fn swapped(&self) -> Self {
        DotPair::new(self.beta.clone(), self.alpha.clone())
    }

    pub fn both_nonzero(&self) -> bool {
        !self.alpha.is_zero() && !self.beta.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointIncidence {
    pub index: usize,
    pub count_alpha: u64,
    pub count_beta: u64,
}

/// Per-point line populations with their totals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceProfile {
    pub per_point: Vec<PointIncidence>,
    pub total_incidences: u64,
    pub total_triples: u64,
}

impl IncidenceProfile {
    /// Assembles a profile from raw `(count_alpha, count_beta)` pairs.
    pub fn from_counts(counts: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let per_point: Vec<PointIncidence> = counts
            .into_iter()
            .enumerate()
            .map(|(index, (count_alpha, count_beta))| PointIncidence {
                index,
                count_alpha,
                count_beta,
            })
            .collect();
        let total_incidences = per_point.iter().map(|c| c.count_alpha + c.count_beta).sum();
        let total_triples = per_point.iter().map(|c| c.count_alpha * c.count_beta).sum();
        IncidenceProfile {
            per_point,
            total_incidences,
            total_triples,
        }
    }

    pub fn n(&self) -> usize {
        self.per_point.len()
    }
}

/// Outcome of the A/B pair decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClassification {
    pub a_pairs: u64,
    pub b_pairs: u64,
    pub triples_from_a: u64,
    pub triples_from_b: u64,
    /// Triples contributed by B pairs, keyed by their common radial line.
    pub per_radial_b: BTreeMap<RadialDirection, u64>,
    /// Largest number of contributing points seen for a single A pair.
    pub max_a_pair_triples: u64,
}

impl PairClassification {
    pub fn total_triples(&self) -> u64 {
        self.triples_from_a + self.triples_from_b
    }
}

/// Counts by explicit enumeration of every ordered triple.
pub fn count_bruteforce(set: &PointSet, pair: &DotPair) -> u64 {
    bruteforce_with_incidences(set, pair).0
}

/// Brute-force triple count together with the incidence total seen along
/// the way.
pub fn bruteforce_with_incidences(set: &PointSet, pair: &DotPair) -> (u64, u64) {
    let points = set.points();
    points
        .par_iter()
        .map(|p| {
            let hits: Vec<(bool, bool)> = points
                .iter()
                .map(|q| {
                    let d = dot(p, q);
                    (d == pair.alpha, d == pair.beta)
                })
                .collect();
            let mut triples = 0u64;
            for &(q_alpha, _) in &hits {
                for &(_, r_beta) in &hits {
                    if q_alpha && r_beta {
                        triples += 1;
                    }
                }
            }
            let incidences = hits
                .iter()
                .map(|&(a, b)| u64::from(a) + u64::from(b))
                .sum::<u64>();
            (triples, incidences)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0, 0), |acc, (t, i)| (acc.0 + t, acc.1 + i))
}

/// Quadratic count through per-point line populations.
pub fn incidence_profile(set: &PointSet, pair: &DotPair) -> IncidenceProfile {
    let frame = ScaledFrame::new(set);
    let alpha = frame.target(&pair.alpha);
    let beta = frame.target(&pair.beta);
    let counts: Vec<(u64, u64)> = (0..frame.len())
        .into_par_iter()
        .map(|i| frame.row_counts(i, &alpha, &beta))
        .collect();
    IncidenceProfile::from_counts(counts)
}

#[derive(Default)]
struct RowTally {
    a_pairs: u64,
    b_pairs: u64,
    triples_from_a: u64,
    triples_from_b: u64,
    max_a_pair_triples: u64,
    b_triples: Vec<(usize, u64)>,
}

/// A/B pair decomposition. Requires nonzero targets and no origin point.
///
/// A pairs whose cross lines meet in a single point are resolved by solving
/// the 2×2 system in scaled integer coordinates and looking the solution up;
/// parallel lines (same radial line) fall through to the coincidence
/// predicate. B pairs scan the set for points on the shared line.
pub fn count_via_ab(set: &PointSet, pair: &DotPair) -> Result<PairClassification> {
    if !pair.both_nonzero() || set.contains_origin() {
        return Err(Error::DecompositionHypotheses);
    }
    let (alpha, beta) = (&pair.alpha, &pair.beta);
    let points = set.points();
    let n = points.len() as u64;

    let frame = ScaledFrame::new(set);
    let lookup = frame.lookup();
    let (ta, tb) = (frame.target(alpha), frame.target(beta));

    let rows: Vec<Result<RowTally>> = (0..points.len())
        .into_par_iter()
        .map(|qi| {
            let q = &points[qi];
            let mut tally = RowTally::default();
            for (ri, r) in points.iter().enumerate() {
                let is_b;
                let contributed;
                match frame.crossing(&lookup, qi, ri, &ta, &tb) {
                    Crossing::Meets(hit) => {
                        is_b = false;
                        contributed = u64::from(hit.is_some());
                    }
                    Crossing::Parallel => {
                        is_b = lines_coincide(q, alpha, r, beta)?
                            || lines_coincide(q, beta, r, alpha)?;
                        contributed = if is_b {
                            (0..points.len())
                                .filter(|&pi| frame.on_both_lines(pi, qi, ri, &ta, &tb))
                                .count() as u64
                        } else {
                            0
                        };
                    }
                }
                if is_b {
                    tally.b_pairs += 1;
                    tally.triples_from_b += contributed;
                    if contributed > 0 {
                        tally.b_triples.push((qi, contributed));
                    }
                } else {
                    if contributed > 4 {
                        return Err(Error::BoundViolation(format!(
                            "A pair ({q}, {r}) contributes {contributed} > 4 triples"
                        )));
                    }
                    tally.a_pairs += 1;
                    tally.triples_from_a += contributed;
                    tally.max_a_pair_triples = tally.max_a_pair_triples.max(contributed);
                }
            }
            Ok(tally)
        })
        .collect();

    let mut out = PairClassification {
        a_pairs: 0,
        b_pairs: 0,
        triples_from_a: 0,
        triples_from_b: 0,
        per_radial_b: BTreeMap::new(),
        max_a_pair_triples: 0,
    };
    for row in rows {
        let row = row?;
        out.a_pairs += row.a_pairs;
        out.b_pairs += row.b_pairs;
        out.triples_from_a += row.triples_from_a;
        out.triples_from_b += row.triples_from_b;
        out.max_a_pair_triples = out.max_a_pair_triples.max(row.max_a_pair_triples);
        for (qi, t) in row.b_triples {
            *out.per_radial_b
                .entry(radial_direction(&points[qi])?)
                .or_default() += t;
        }
    }
    for (dir, &t) in &out.per_radial_b {
        if t > n {
            return Err(Error::BoundViolation(format!(
                "B pairs on radial line {dir} contribute {t} > n = {n} triples"
            )));
        }
    }
    Ok(out)
}

/// Check of the `4·|A| + n² ≤ 5n²` accounting for one input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralBoundReport {
    pub n: u64,
    pub triples: u64,
    pub a_pairs: u64,
    pub triples_from_a: u64,
    pub triples_from_b: u64,
    /// `4·a_pairs + n²`
    pub pair_bound: u64,
    /// `5n²`
    pub bound: u64,
    pub ratio: f64,
    pub passed: bool,
}

pub fn verify_general_bound(set: &PointSet, pair: &DotPair) -> Result<GeneralBoundReport> {
    let split = count_via_ab(set, pair)?;
    let n = set.len() as u64;
    let triples = split.total_triples();
    let pair_bound = 4 * split.a_pairs + n * n;
    let bound = 5 * n * n;
    let passed = split.triples_from_a <= 4 * split.a_pairs
        && split.triples_from_b <= n * n
        && triples <= pair_bound
        && pair_bound <= bound;
    Ok(GeneralBoundReport {
        n,
        triples,
        a_pairs: split.a_pairs,
        triples_from_a: split.triples_from_a,
        triples_from_b: split.triples_from_b,
        pair_bound,
        bound,
        ratio: if n == 0 {
            0.0
        } else {
            triples as f64 / (n * n) as f64
        },
        passed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Quadratic,
    Ab,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "quadratic" => Ok(Method::Quadratic),
            "ab" => Ok(Method::Ab),
            other => Err(Error::Parameter(format!(
                "unknown method {other:?} (expected brute, quadratic or ab)"
            ))),
        }
    }
}

/// JSON count report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: u64,
    pub alpha: Rational,
    pub beta: Rational,
    pub method: Method,
    pub triples: u64,
    pub incidences: u64,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a_pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b_pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub triples_from_a: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub triples_from_b: Option<u64>,
}

pub fn count_report(set: &PointSet, pair: &DotPair, method: Method) -> Result<CountReport> {
    let start = Instant::now();
    let mut report = CountReport {
        n: set.len() as u64,
        alpha: pair.alpha.clone(),
        beta: pair.beta.clone(),
        method,
        triples: 0,
        incidences: 0,
        elapsed_ms: 0,
        a_pairs: None,
        b_pairs: None,
        triples_from_a: None,
        triples_from_b: None,
    };
    match method {
        Method::Brute => {
            let (triples, incidences) = bruteforce_with_incidences(set, pair);
            report.triples = triples;
            report.incidences = incidences;
        }
        Method::Quadratic => {
            let profile = incidence_profile(set, pair);
            report.triples = profile.total_triples;
            report.incidences = profile.total_incidences;
        }
        Method::Ab => {
            let split = count_via_ab(set, pair)?;
            report.triples = split.total_triples();
            report.incidences = incidence_profile(set, pair).total_incidences;
            report.a_pairs = Some(split.a_pairs);
            report.b_pairs = Some(split.b_pairs);
            report.triples_from_a = Some(split.triples_from_a);
            report.triples_from_b = Some(split.triples_from_b);
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
