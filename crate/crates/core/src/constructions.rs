//! Point-set generators.
//!
//! All generators are pure functions of a [`ConstructionSpec`] and produce
//! sets inside the unit square `[0,1]²`.
//!
//! Randomized kinds draw from SplitMix64 seeded directly with `seed` (the
//! state starts equal to the seed). Each step adds `0x9E3779B97F4A7C15` to
//! the state and outputs the state mixed by
//! `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`.
//! Draws are consumed as follows:
//!
//! * `random`: for each point, `x` then `y`, each `((w >> 32) + 1) / 2³²`
//!   for a fresh output `w`; a point equal to an earlier one is re-drawn.
//! * `perturbed-grid`: for each grid point in order, a jitter for `x` then
//!   `y`, each `δ · ((w >> 44) − 2¹⁹) / 2¹⁹`.

use std::cmp::Ordering;

use num_integer::Roots;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};
use crate::rational::{at_least_inverse_power, cmp_inverse_power, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    Sharp,
    Zero,
    Grid,
    Random,
    PerturbedGrid,
}

impl std::str::FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sharp" => Ok(ConstructionKind::Sharp),
            "zero" => Ok(ConstructionKind::Zero),
            "grid" => Ok(ConstructionKind::Grid),
            "random" => Ok(ConstructionKind::Random),
            "perturbed-grid" => Ok(ConstructionKind::PerturbedGrid),
            other => Err(Error::Parameter(format!(
                "unknown construction kind {other:?} (expected sharp, zero, grid, random or perturbed-grid)"
            ))),
        }
    }
}

impl std::fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConstructionKind::Sharp => "sharp",
            ConstructionKind::Zero => "zero",
            ConstructionKind::Grid => "grid",
            ConstructionKind::Random => "random",
            ConstructionKind::PerturbedGrid => "perturbed-grid",
        })
    }
}

/// Parameters of one generated set. Also used as a family template whose
/// `n` is replaced per experiment row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s: Option<Rational>,
    pub seed: u64,
}

impl ConstructionSpec {
    fn bare(kind: ConstructionKind, n: u64) -> Self {
        ConstructionSpec {
            kind,
            n,
            alpha: None,
            beta: None,
            s: None,
            seed: 0,
        }
    }

    pub fn sharp(n: u64, alpha: Rational, beta: Rational) -> Self {
        ConstructionSpec {
            alpha: Some(alpha),
            beta: Some(beta),
            ..Self::bare(ConstructionKind::Sharp, n)
        }
    }

    pub fn zero(n: u64) -> Self {
        Self::bare(ConstructionKind::Zero, n)
    }

    pub fn grid(n: u64) -> Self {
        Self::bare(ConstructionKind::Grid, n)
    }

    pub fn random(n: u64, seed: u64) -> Self {
        ConstructionSpec {
            seed,
            ..Self::bare(ConstructionKind::Random, n)
        }
    }

    pub fn perturbed_grid(n: u64, s: Rational, seed: u64) -> Self {
        ConstructionSpec {
            s: Some(s),
            seed,
            ..Self::bare(ConstructionKind::PerturbedGrid, n)
        }
    }

    pub fn with_n(&self, n: u64) -> Self {
        ConstructionSpec { n, ..self.clone() }
    }

    /// Parameter checks only; `generate` fails exactly when this does.
    pub fn validate(&self) -> Result<()> {
        let need = |v: &Option<Rational>, name: &str| {
            v.clone()
                .ok_or_else(|| Error::Parameter(format!("{} construction needs {name}", self.kind)))
        };
        match self.kind {
            ConstructionKind::Sharp => check_sharp(
                self.n,
                &need(&self.alpha, "alpha")?,
                &need(&self.beta, "beta")?,
            ),
            ConstructionKind::Zero => check_zero(self.n),
            ConstructionKind::Grid => exact_sqrt(self.n, "grid").map(drop),
            ConstructionKind::Random => Ok(()),
            ConstructionKind::PerturbedGrid => {
                perturbation_amplitude(self.n, &need(&self.s, "s")?).map(drop)
            }
        }
    }

    pub fn generate(&self) -> Result<PointSet> {
        let need = |v: &Option<Rational>, name: &str| {
            v.clone()
                .ok_or_else(|| Error::Parameter(format!("{} construction needs {name}", self.kind)))
        };
        match self.kind {
            ConstructionKind::Sharp => sharp_set(
                self.n,
                &need(&self.alpha, "alpha")?,
                &need(&self.beta, "beta")?,
            ),
            ConstructionKind::Zero => zero_set(self.n),
            ConstructionKind::Grid => grid_set(self.n),
            ConstructionKind::Random => random_set(self.n, self.seed),
            ConstructionKind::PerturbedGrid => {
                perturbed_grid(self.n, &need(&self.s, "s")?, self.seed)
            }
        }
    }
}

/// `m` interior points of `{x + y = c} ∩ [0,1]²` at equal spacing, endpoints
/// excluded.
fn points_on_antidiagonal(c: &Rational, m: u64) -> Vec<Point> {
    let zero = Rational::zero();
    let one = Rational::one();
    let lo = std::cmp::max(zero, c - &one);
    let hi = std::cmp::min(one, c.clone());
    let step = (&hi - &lo) / Rational::from(m as i64 + 1);
    (1..=m)
        .map(|i| {
            let x = &lo + &step * Rational::from(i as i64);
            let y = c - &x;
            Point::new(x, y)
        })
        .collect()
}

fn check_sharp(n: u64, alpha: &Rational, beta: &Rational) -> Result<()> {
    if n < 3 {
        return Err(Error::Parameter(format!(
            "sharp construction needs n >= 3, got {n}"
        )));
    }
    let two = Rational::from(2);
    for (name, t) in [("alpha", alpha), ("beta", beta)] {
        if !t.is_positive() || *t >= two {
            return Err(Error::Parameter(format!(
                "sharp construction needs 0 < {name} < 2, got {t}"
            )));
        }
    }
    Ok(())
}

/// `(1,1)` plus `⌊(n−1)/2⌋` points on `y = α − x` and `⌈(n−1)/2⌉` on
/// `y = β − x`, so the apex alone contributes every cross pair as a triple.
pub fn sharp_set(n: u64, alpha: &Rational, beta: &Rational) -> Result<PointSet> {
    check_sharp(n, alpha, beta)?;
    let mut points = vec![Point::from_ints(1, 1)];
    if alpha == beta {
        points.extend(points_on_antidiagonal(alpha, n - 1));
    } else {
        points.extend(points_on_antidiagonal(alpha, (n - 1) / 2));
        points.extend(points_on_antidiagonal(beta, n / 2));
    }
    PointSet::new(points, format!("sharp n={n} alpha={alpha} beta={beta}"))
}

fn check_zero(n: u64) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "zero construction needs an even n >= 4, got {n}"
        )));
    }
    Ok(())
}

/// `n/2` points on each positive half-axis at `k/(n/2)`, `k = 1..n/2`.
pub fn zero_set(n: u64) -> Result<PointSet> {
    check_zero(n)?;
    let half = n / 2;
    let coord = |k: u64| Rational::new(k, half);
    let mut points: Vec<Point> = (1..=half)
        .map(|k| Point::new(coord(k), Rational::zero()))
        .collect();
    points.extend((1..=half).map(|k| Point::new(Rational::zero(), coord(k))));
    PointSet::new(points, format!("zero n={n}"))
}

fn exact_sqrt(n: u64, kind: &str) -> Result<u64> {
    let m = n.sqrt();
    if n == 0 || m * m != n {
        return Err(Error::Parameter(format!(
            "{kind} construction needs a positive perfect square n, got {n}"
        )));
    }
    Ok(m)
}

/// `{(i/m, j/m) : 1 ≤ i, j ≤ m}` for `m = √n`, row-major in `i`.
pub fn grid_set(n: u64) -> Result<PointSet> {
    let m = exact_sqrt(n, "grid")?;
    let points = (1..=m)
        .flat_map(|i| (1..=m).map(move |j| Point::new(Rational::new(i, m), Rational::new(j, m))))
        .collect();
    PointSet::new(points, format!("grid n={n}"))
}

pub fn random_set(n: u64, seed: u64) -> Result<PointSet> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let denom = 1u64 << 32;
    let mut draw = || Rational::new((rng.next_u64() >> 32) + 1, denom);
    let mut seen = std::collections::HashSet::with_capacity(n as usize);
    let mut points = Vec::with_capacity(n as usize);
    while (points.len() as u64) < n {
        let p = Point::new(draw(), draw());
        if seen.insert(p.clone()) {
            points.push(p);
        }
    }
    PointSet::new(points, format!("random n={n} seed={seed}"))
}

/// Dyadic bracket `lo < n^(−1/s) ≤ hi` found by exact bisection on `(0, 1]`,
/// refined until `hi < limit` when such a bracket exists.
fn bracket_inverse_root(n: u64, s: &Rational, limit: &Rational) -> (Rational, Rational) {
    let exponent = Rational::from(2) / s;
    // e ≥ n^(−1/s) ⇔ e² ≥ n^(−2/s)
    let at_least = |e: &Rational| at_least_inverse_power(&(e * e), n, &exponent);
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    let half = Rational::new(1, 2);
    for step in 0..512 {
        if step >= 64 && hi < *limit {
            break;
        }
        let mid = (&lo + &hi) * &half;
        if at_least(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Lattice side `√n` and jitter amplitude `δ` for the perturbed grid.
fn perturbation_amplitude(n: u64, s: &Rational) -> Result<(u64, Rational)> {
    let m = exact_sqrt(n, "perturbed-grid")?;
    if !s.is_positive() {
        return Err(Error::Parameter(format!(
            "perturbed-grid needs s > 0, got {s}"
        )));
    }
    let h = Rational::new(1, m);
    let exponent = Rational::from(2) / s;
    // sign of h² − n^(−2/s), i.e. of h − ε
    let delta = match cmp_inverse_power(&(&h * &h), n, &exponent) {
        Ordering::Less => {
            return Err(Error::Parameter(format!(
                "perturbed-grid cannot keep separation n^(-1/s) on n = {n} points: need n^(-1/s) <= 1/sqrt(n), i.e. s <= 2 (got s = {s})"
            )))
        }
        Ordering::Equal => Rational::zero(),
        Ordering::Greater => {
            let (lo, hi) = bracket_inverse_root(n, s, &h);
            if hi >= h {
                Rational::zero()
            } else {
                let quarter = &lo * Rational::new(1, 4);
                let gap = (&h - &hi) * Rational::new(1, 2);
                std::cmp::min(quarter, gap).floor_dyadic(20)
            }
        }
    };
    Ok((m, delta))
}

/// Grid with seeded jitter keeping separation at least `n^(−1/s)`.
///
/// Two distinct lattice points differ by at least `h = 1/√n` in some
/// coordinate, so a per-coordinate jitter of at most `δ` leaves separation
/// `≥ h − 2δ`. The jitter amplitude is `δ = min(ε/4, (h − ε)/2)` with
/// `ε = n^(−1/s)` bracketed by exact rationals; `δ = 0` when `ε = h`.
/// Clamping to `[0,1]` cannot merge points because `δ < h`.
pub fn perturbed_grid(n: u64, s: &Rational, seed: u64) -> Result<PointSet> {
    let (m, delta) = perturbation_amplitude(n, s)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let unit = 1i64 << 19;
    let mut jitter = || &delta * Rational::new((rng.next_u64() >> 44) as i64 - unit, unit);
    let zero = Rational::zero();
    let one = Rational::one();
    let clamp = |v: Rational| std::cmp::min(std::cmp::max(v, zero.clone()), one.clone());
    let mut points = Vec::with_capacity(n as usize);
    for i in 1..=m {
        for j in 1..=m {
            let x = clamp(Rational::new(i, m) + jitter());
            let y = clamp(Rational::new(j, m) + jitter());
            points.push(Point::new(x, y));
        }
    }
    PointSet::new(points, format!("perturbed-grid n={n} s={s} seed={seed}"))
}
