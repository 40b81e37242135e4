//! Incidence statistics for the α-lines and β-lines of a point set.
//!
//! Points are bucketed by the dyadic scale of their line populations:
//! bucket `(j, k)` holds the points with `2^j ≤ |L_α(p)| < 2^(j+1)` and
//! `2^k ≤ |L_β(p)| < 2^(k+1)`. Index `−1` stands for an empty line so every
//! point lands somewhere.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::adaptability::closest_pair;
use crate::constructions::ConstructionSpec;
use crate::counting::{incidence_profile, DotPair, IncidenceProfile};
use crate::error::{Error, Result};
use crate::experiments::{fit_exponent, FitRow};
use crate::geometry::{Point, PointSet};
use crate::rational::Rational;

/// Dyadic index of a line population; `−1` for zero.
pub fn dyadic_index(count: u64) -> i32 {
    if count == 0 {
        -1
    } else {
        63 - count.leading_zeros() as i32
    }
}

/// Lower dyadic weight `2^j` of an index, `0` for the empty bucket.
fn weight(index: i32) -> u64 {
    if index < 0 {
        0
    } else {
        1u64 << index
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bucket {
    pub j: i32,
    pub k: i32,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicStats {
    pub buckets: BTreeMap<(i32, i32), u64>,
    pub j_max: i32,
    pub k_max: i32,
    pub epsilon_sq: Option<Rational>,
    /// `⌈log₂(1/ε)⌉` when a separation is known.
    pub index_cap: Option<i32>,
}

impl DyadicStats {
    pub fn bucket(&self, j: i32, k: i32) -> u64 {
        self.buckets.get(&(j, k)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.buckets.values().sum()
    }

    pub fn bucket_list(&self) -> Vec<Bucket> {
        self.buckets
            .iter()
            .map(|(&(j, k), &count)| Bucket { j, k, count })
            .collect()
    }

    /// Whether some occupied index exceeds the separation-derived cap.
    pub fn exceeds_index_cap(&self) -> Option<bool> {
        self.index_cap
            .map(|cap| self.j_max > cap || self.k_max > cap)
    }
}

impl Serialize for DyadicStats {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            buckets: Vec<Bucket>,
            j_max: i32,
            k_max: i32,
            epsilon_sq: &'a Option<Rational>,
            index_cap: Option<i32>,
            /// The maxima come from the data, not from a separation bound.
            indices_from_data: bool,
        }
        Wire {
            buckets: self.bucket_list(),
            j_max: self.j_max,
            k_max: self.k_max,
            epsilon_sq: &self.epsilon_sq,
            index_cap: self.index_cap,
            indices_from_data: true,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DyadicStats {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            buckets: Vec<Bucket>,
            j_max: i32,
            k_max: i32,
            epsilon_sq: Option<Rational>,
            index_cap: Option<i32>,
        }
        let wire = Wire::deserialize(deserializer)?;
        Ok(DyadicStats {
            buckets: wire
                .buckets
                .into_iter()
                .map(|b| ((b.j, b.k), b.count))
                .collect(),
            j_max: wire.j_max,
            k_max: wire.k_max,
            epsilon_sq: wire.epsilon_sq,
            index_cap: wire.index_cap,
        })
    }
}

pub fn dyadic_decompose(profile: &IncidenceProfile) -> DyadicStats {
    let mut buckets = BTreeMap::new();
    for c in &profile.per_point {
        *buckets
            .entry((dyadic_index(c.count_alpha), dyadic_index(c.count_beta)))
            .or_insert(0) += 1;
    }
    let j_max = buckets.keys().map(|&(j, _)| j).max().unwrap_or(-1);
    let k_max = buckets.keys().map(|&(_, k)| k).max().unwrap_or(-1);
    DyadicStats {
        buckets,
        j_max,
        k_max,
        epsilon_sq: None,
        index_cap: None,
    }
}

/// Smallest `K ≥ 0` with `2^K ≥ 1/ε`, i.e. `4^K · ε² ≥ 1`.
pub fn log2_inverse_epsilon_ceil(epsilon_sq: &Rational) -> i32 {
    assert!(epsilon_sq.is_positive(), "epsilon must be positive");
    let mut k = 0;
    let mut scaled = epsilon_sq.clone();
    let four = Rational::from(4);
    while scaled < Rational::one() {
        scaled = scaled * &four;
        k += 1;
    }
    k
}

/// Decomposition annotated with a known separation `ε`.
pub fn dyadic_decompose_separated(
    profile: &IncidenceProfile,
    epsilon_sq: &Rational,
) -> DyadicStats {
    DyadicStats {
        epsilon_sq: Some(epsilon_sq.clone()),
        index_cap: Some(log2_inverse_epsilon_ceil(epsilon_sq)),
        ..dyadic_decompose(profile)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicIdentityReport {
    /// `Σ |P_{j,k}| (2^j + 2^k)` with empty-line buckets weighted 0.
    pub incidences_lower: u64,
    pub incidences: u64,
    /// `Σ |P_{j,k}| 2^j 2^k`
    pub triples_lower: u64,
    pub triples: u64,
    pub partition_complete: bool,
    pub incidence_bracket: bool,
    pub triple_bracket: bool,
}

impl DyadicIdentityReport {
    pub fn holds(&self) -> bool {
        self.partition_complete && self.incidence_bracket && self.triple_bracket
    }
}

/// Checks `I_lower ≤ I < 2·I_lower` and `Π_lower ≤ Π < 4·Π_lower` (both
/// sides zero together). Each dyadic weight undercounts its population by
/// less than a factor of two, and empty lines contribute zero on both sides.
pub fn check_dyadic_identities(
    stats: &DyadicStats,
    profile: &IncidenceProfile,
) -> DyadicIdentityReport {
    let mut incidences_lower = 0u64;
    let mut triples_lower = 0u64;
    for (&(j, k), &count) in &stats.buckets {
        incidences_lower += count * (weight(j) + weight(k));
        triples_lower += count * weight(j) * weight(k);
    }
    let incidences = profile.total_incidences;
    let triples = profile.total_triples;
    let bracket = |lower: u64, exact: u64, factor: u64| {
        if exact == 0 {
            lower == 0
        } else {
            lower <= exact && exact < factor * lower
        }
    };
    DyadicIdentityReport {
        incidences_lower,
        incidences,
        triples_lower,
        triples,
        partition_complete: stats.total() == profile.n() as u64,
        incidence_bracket: bracket(incidences_lower, incidences, 2),
        triple_bracket: bracket(triples_lower, triples, 4),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCapacityReport {
    pub epsilon_sq: Rational,
    /// `⌊√2/ε⌋ + 1`
    pub capacity: u64,
    pub max_alpha: u64,
    pub max_beta: u64,
    pub passed: bool,
}

/// `⌊√2/ε⌋ + 1` computed as `⌊√⌊2/ε²⌋⌋ + 1`.
pub fn line_capacity(epsilon_sq: &Rational) -> Result<u64> {
    if !epsilon_sq.is_positive() {
        return Err(Error::Parameter(format!(
            "epsilon^2 must be positive, got {epsilon_sq}"
        )));
    }
    let ratio = (Rational::from(2) / epsilon_sq).floor();
    let root: BigInt = ratio.sqrt();
    u64::try_from(root + 1u8)
        .map_err(|_| Error::Parameter(format!("epsilon^2 = {epsilon_sq} is too small")))
}

/// Checks that no α-line or β-line carries more than `⌊√2/ε⌋ + 1` points of
/// an ε-separated subset of the unit square.
pub fn check_line_capacity(
    set: &PointSet,
    pair: &DotPair,
    epsilon_sq: &Rational,
) -> Result<LineCapacityReport> {
    let capacity = line_capacity(epsilon_sq)?;
    if let Some(index) = set.iter().position(|p: &Point| !p.in_unit_square()) {
        return Err(Error::OutsideUnitSquare { index });
    }
    if set.len() >= 2 {
        let (sq_distance, first, second) = closest_pair(set)?;
        if sq_distance < *epsilon_sq {
            return Err(Error::SeparationViolated {
                first,
                second,
                sq_distance: Box::new(sq_distance),
                required: Box::new(epsilon_sq.clone()),
            });
        }
    }
    let profile = incidence_profile(set, pair);
    // the origin's locus is the whole plane or empty, never a line
    let on_lines = || {
        set.iter()
            .zip(&profile.per_point)
            .filter(|(p, _)| !p.is_origin())
            .map(|(_, c)| c)
    };
    let max_alpha = on_lines().map(|c| c.count_alpha).max().unwrap_or(0);
    let max_beta = on_lines().map(|c| c.count_beta).max().unwrap_or(0);
    Ok(LineCapacityReport {
        epsilon_sq: epsilon_sq.clone(),
        capacity,
        max_alpha,
        max_beta,
        passed: max_alpha <= capacity && max_beta <= capacity,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncidenceRow {
    pub n: u64,
    pub incidences: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncidenceExponentReport {
    pub family: ConstructionSpec,
    pub pair: DotPair,
    pub rows: Vec<IncidenceRow>,
    pub slope: Option<f64>,
    pub residual: Option<f64>,
    /// `ok`, `no incidences` or `insufficient data`.
    pub status: String,
}

/// Fits `ln I` against `ln n` across a construction family.
pub fn incidence_exponent_check(
    family: &ConstructionSpec,
    n_list: &[u64],
    pair: &DotPair,
) -> Result<IncidenceExponentReport> {
    let mut n_sorted = n_list.to_vec();
    n_sorted.sort_unstable();
    let mut rows = Vec::with_capacity(n_sorted.len());
    for &n in &n_sorted {
        let set = family.with_n(n).generate()?;
        rows.push(IncidenceRow {
            n,
            incidences: incidence_profile(&set, pair).total_incidences,
        });
    }
    let fit_rows: Vec<FitRow> = rows
        .iter()
        .map(|r| FitRow {
            n: r.n,
            count: r.incidences as f64,
        })
        .collect();
    let (slope, residual, status) = if rows.iter().all(|r| r.incidences == 0) {
        (None, None, "no incidences".to_string())
    } else {
        match fit_exponent(&fit_rows) {
            Ok(fit) => (Some(fit.slope), Some(fit.residual), "ok".to_string()),
            Err(Error::InsufficientData(_)) => (None, None, "insufficient data".to_string()),
            Err(e) => return Err(e),
        }
    };
    Ok(IncidenceExponentReport {
        family: family.clone(),
        pair: pair.clone(),
        rows,
        slope,
        residual,
        status,
    })
}
