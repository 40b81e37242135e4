//! Common-denominator integer view of a point set.
//!
//! Multiplying every coordinate by the lcm `D` of all coordinate
//! denominators turns each point into an integer vector `X`. Then
//! `p · q = (X_p · X_q) / D²` and `|p − q|² = |X_p − X_q|² / D²`, so the
//! quadratic loops compare integers against `t·D²` instead of doing fraction
//! arithmetic per pair. When every `|X|` stays below 2^61 the products fit in
//! `i128`; otherwise the same loops run over `BigInt`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, RefNum, Signed, ToPrimitive, Zero};

use crate::geometry::PointSet;
use crate::rational::Rational;

const SMALL_LIMIT_BITS: u64 = 61;

enum Coords {
    Small(Vec<[i128; 2]>),
    Big(Vec<[BigInt; 2]>),
}

pub(crate) struct ScaledFrame {
    scale: BigInt,
    coords: Coords,
}

/// A target value `t·D²` in the frame's integer lane. `Never` means `t·D²`
/// is not an integer (or is out of lane range), so no pair can reach it.
#[derive(Clone, Debug)]
pub(crate) enum ScaledTarget {
    Never,
    Small(i128),
    Big(BigInt),
}

impl ScaledFrame {
    pub fn new(set: &PointSet) -> Self {
        let scale = set.iter().fold(BigInt::from(1u8), |acc, p| {
            acc.lcm(p.x.denom()).lcm(p.y.denom())
        });
        let big: Vec<[BigInt; 2]> = set
            .iter()
            .map(|p| {
                [
                    p.x.numer() * (&scale / p.x.denom()),
                    p.y.numer() * (&scale / p.y.denom()),
                ]
            })
            .collect();
        let fits = big
            .iter()
            .flatten()
            .all(|v| v.abs().bits() <= SMALL_LIMIT_BITS);
        let coords = if fits {
            Coords::Small(
                big.iter()
                    .map(|[x, y]| [x.to_i128().unwrap(), y.to_i128().unwrap()])
                    .collect(),
            )
        } else {
            Coords::Big(big)
        };
        ScaledFrame { scale, coords }
    }

    pub fn len(&self) -> usize {
        match &self.coords {
            Coords::Small(c) => c.len(),
            Coords::Big(c) => c.len(),
        }
    }

    #[cfg(test)]
    pub fn is_small(&self) -> bool {
        matches!(self.coords, Coords::Small(_))
    }

    fn scale_sq(&self) -> BigInt {
        &self.scale * &self.scale
    }

    pub fn target(&self, t: &Rational) -> ScaledTarget {
        let scaled = t * Rational::from(self.scale_sq());
        if !scaled.is_integer() {
            return ScaledTarget::Never;
        }
        let value = scaled.numer().clone();
        match &self.coords {
            Coords::Small(_) => value
                .to_i128()
                .map_or(ScaledTarget::Never, ScaledTarget::Small),
            Coords::Big(_) => ScaledTarget::Big(value),
        }
    }

    /// Number of `j` with `p_i · p_j` hitting each target.
    pub fn row_counts(&self, i: usize, alpha: &ScaledTarget, beta: &ScaledTarget) -> (u64, u64) {
        match &self.coords {
            Coords::Small(c) => row_counts(c, i, small(alpha), small(beta)),
            Coords::Big(c) => row_counts(c, i, big(alpha), big(beta)),
        }
    }

    /// Exact minimum squared distance over distinct index pairs and the
    /// first pair attaining it. Requires at least two points.
    pub fn min_sq_distance(&self) -> (Rational, usize, usize) {
        let (value, i, j) = match &self.coords {
            Coords::Small(c) => {
                let (v, i, j) = min_sq(c);
                (BigInt::from(v), i, j)
            }
            Coords::Big(c) => min_sq(c),
        };
        (Rational::new(value, self.scale_sq()), i, j)
    }

    /// Natural log of `|p_i − p_j|²` for every unordered pair `i < j`,
    /// or the first coincident pair.
    pub fn log_sq_distances(&self) -> Result<Vec<f64>, (usize, usize)> {
        let log_scale_sq = 2.0 * big_ln(&self.scale);
        let n = self.len();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let ln_raw = match &self.coords {
                    Coords::Small(c) => {
                        let s = sq_dist(&c[i], &c[j]);
                        if s == 0 {
                            return Err((i, j));
                        }
                        (s as f64).ln()
                    }
                    Coords::Big(c) => {
                        let s = sq_dist(&c[i], &c[j]);
                        if s == BigInt::from(0u8) {
                            return Err((i, j));
                        }
                        big_ln(&s)
                    }
                };
                out.push(ln_raw - log_scale_sq);
            }
        }
        Ok(out)
    }
}

/// Where the `α`-line of one point meets the `β`-line of another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Crossing {
    /// The two lines are parallel or equal.
    Parallel,
    /// The lines meet in one point; the index if that point is in the set.
    Meets(Option<usize>),
}

/// Hash index from scaled coordinates to point indices.
pub(crate) enum Lookup {
    Small(HashMap<[i128; 2], usize>),
    Big(HashMap<[BigInt; 2], usize>),
}

impl Lookup {
    fn find_big(&self, z: &[BigInt; 2]) -> Option<usize> {
        match self {
            Lookup::Small(m) => {
                let key = [z[0].to_i128()?, z[1].to_i128()?];
                m.get(&key).copied()
            }
            Lookup::Big(m) => m.get(z).copied(),
        }
    }
}

impl ScaledFrame {
    pub fn lookup(&self) -> Lookup {
        match &self.coords {
            Coords::Small(c) => Lookup::Small(c.iter().enumerate().map(|(i, x)| (*x, i)).collect()),
            Coords::Big(c) => {
                Lookup::Big(c.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect())
            }
        }
    }

    /// Solves `X_q · Z = αD²`, `X_r · Z = βD²`. A point of the set lies at
    /// the crossing exactly when `Z` is one of the scaled coordinate vectors.
    pub fn crossing(
        &self,
        lookup: &Lookup,
        q: usize,
        r: usize,
        alpha: &ScaledTarget,
        beta: &ScaledTarget,
    ) -> Crossing {
        match &self.coords {
            Coords::Small(c) => {
                let (xq, xr) = (&c[q], &c[r]);
                let det = xq[0] * xr[1] - xq[1] * xr[0];
                if det == 0 {
                    return Crossing::Parallel;
                }
                let (Some(&a), Some(&b)) = (small(alpha), small(beta)) else {
                    return Crossing::Meets(None);
                };
                let numerators = a
                    .checked_mul(xr[1])
                    .zip(b.checked_mul(xq[1]))
                    .and_then(|(u, v)| u.checked_sub(v))
                    .zip(
                        b.checked_mul(xq[0])
                            .zip(a.checked_mul(xr[0]))
                            .and_then(|(u, v)| u.checked_sub(v)),
                    );
                match numerators {
                    Some((nx, ny)) => {
                        if nx % det != 0 || ny % det != 0 {
                            return Crossing::Meets(None);
                        }
                        let Lookup::Small(m) = lookup else {
                            unreachable!("lane mismatch")
                        };
                        Crossing::Meets(m.get(&[nx / det, ny / det]).copied())
                    }
                    None => {
                        let widen = |v: &[i128; 2]| [BigInt::from(v[0]), BigInt::from(v[1])];
                        solve_big(
                            &widen(xq),
                            &widen(xr),
                            &BigInt::from(a),
                            &BigInt::from(b),
                            lookup,
                        )
                    }
                }
            }
            Coords::Big(c) => {
                let (xq, xr) = (&c[q], &c[r]);
                if (&xq[0] * &xr[1] - &xq[1] * &xr[0]).is_zero() {
                    return Crossing::Parallel;
                }
                match (big(alpha), big(beta)) {
                    (Some(a), Some(b)) => solve_big(xq, xr, a, b, lookup),
                    _ => Crossing::Meets(None),
                }
            }
        }
    }

    /// Whether `p_i · p_q = α` and `p_i · p_r = β`.
    pub fn on_both_lines(
        &self,
        i: usize,
        q: usize,
        r: usize,
        alpha: &ScaledTarget,
        beta: &ScaledTarget,
    ) -> bool {
        match &self.coords {
            Coords::Small(c) => match (small(alpha), small(beta)) {
                (Some(a), Some(b)) => dot(&c[i], &c[q]) == *a && dot(&c[i], &c[r]) == *b,
                _ => false,
            },
            Coords::Big(c) => match (big(alpha), big(beta)) {
                (Some(a), Some(b)) => dot(&c[i], &c[q]) == *a && dot(&c[i], &c[r]) == *b,
                _ => false,
            },
        }
    }
}

fn solve_big(
    xq: &[BigInt; 2],
    xr: &[BigInt; 2],
    a: &BigInt,
    b: &BigInt,
    lookup: &Lookup,
) -> Crossing {
    let det = &xq[0] * &xr[1] - &xq[1] * &xr[0];
    let nx = a * &xr[1] - b * &xq[1];
    let ny = b * &xq[0] - a * &xr[0];
    let (zx, rx) = nx.div_rem(&det);
    let (zy, ry) = ny.div_rem(&det);
    if !rx.is_zero() || !ry.is_zero() {
        return Crossing::Meets(None);
    }
    Crossing::Meets(lookup.find_big(&[zx, zy]))
}

fn small(t: &ScaledTarget) -> Option<&i128> {
    match t {
        ScaledTarget::Small(v) => Some(v),
        _ => None,
    }
}

fn big(t: &ScaledTarget) -> Option<&BigInt> {
    match t {
        ScaledTarget::Big(v) => Some(v),
        _ => None,
    }
}

/// ln of a positive big integer without overflowing `f64`.
fn big_ln(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = v >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn dot<T>(a: &[T; 2], b: &[T; 2]) -> T
where
    T: Num,
    for<'a> &'a T: RefNum<T>,
{
    &a[0] * &b[0] + &a[1] * &b[1]
}

fn sq_dist<T>(a: &[T; 2], b: &[T; 2]) -> T
where
    T: Num,
    for<'a> &'a T: RefNum<T>,
{
    let dx = &a[0] - &b[0];
    let dy = &a[1] - &b[1];
    &dx * &dx + &dy * &dy
}

fn row_counts<T>(coords: &[[T; 2]], i: usize, alpha: Option<&T>, beta: Option<&T>) -> (u64, u64)
where
    T: Num,
    for<'a> &'a T: RefNum<T>,
{
    if alpha.is_none() && beta.is_none() {
        return (0, 0);
    }
    let p = &coords[i];
    let (mut ca, mut cb) = (0u64, 0u64);
    for q in coords {
        let d = dot(p, q);
        if alpha == Some(&d) {
            ca += 1;
        }
        if beta == Some(&d) {
            cb += 1;
        }
    }
    (ca, cb)
}

fn min_sq<T>(coords: &[[T; 2]]) -> (T, usize, usize)
where
    T: Num + PartialOrd,
    for<'a> &'a T: RefNum<T>,
{
    assert!(coords.len() >= 2, "min_sq needs two points");
    let mut best = (sq_dist(&coords[0], &coords[1]), 0, 1);
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            let d = sq_dist(&coords[i], &coords[j]);
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    best
}
