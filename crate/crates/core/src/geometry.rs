//! Points, canonical lines and radial directions with exact predicates.
//!
//! The α-line of a point `p` is the locus `{z : p · z = α}`. For `p` away
//! from the origin it is a genuine line perpendicular to the radial line
//! through `p`; [`CanonicalLine`] gives it a unique integer key so that
//! coincident lines coming from different `(point, target)` pairs compare
//! equal.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    /// Shorthand for integer coordinates.
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Rational::from(x), Rational::from(y))
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, t: &Rational) -> Point {
        Point::new(&self.x * t, &self.y * t)
    }

    pub fn in_unit_square(&self) -> bool {
        let zero = Rational::zero();
        let one = Rational::one();
        self.x >= zero && self.x <= one && self.y >= zero && self.y <= one
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Duplicate-free point collection with deterministic insertion order.
#[derive(Clone)]
pub struct PointSet {
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    provenance: String,
}

impl PointSet {
    /// Builds a set, rejecting repeated points.
    pub fn new(points: Vec<Point>, provenance: impl Into<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint {
                    index: i,
                    point: Box::new(p.clone()),
                });
            }
        }
        Ok(PointSet {
            points,
            index,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn get(&self, i: usize) -> Option<&Point> {
        self.points.get(i)
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Insertion index of `p`, if present.
    pub fn position(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn contains_origin(&self) -> bool {
        self.points.iter().any(Point::is_origin)
    }

    /// Image of the set under `p ↦ t·p`. `t` must be nonzero.
    pub fn scaled(&self, t: &Rational) -> Result<PointSet> {
        if t.is_zero() {
            return Err(Error::Parameter("scale factor must be nonzero".into()));
        }
        PointSet::new(
            self.points.iter().map(|p| p.scale(t)).collect(),
            format!("{} scaled by {t}", self.provenance),
        )
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet")
            .field("provenance", &self.provenance)
            .field("points", &self.points)
            .finish()
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Integer line `a·x + b·y = c`, reduced and sign-normalized.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct CanonicalLine {
    #[serde(serialize_with = "as_decimal")]
    pub a: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub b: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub c: BigInt,
}

fn as_decimal<S: serde::Serializer>(value: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

impl CanonicalLine {
    /// Normalizes `a·x + b·y = c` given with rational coefficients.
    /// Returns `None` when `a = b = 0`.
    pub fn from_rational(a: &Rational, b: &Rational, c: &Rational) -> Option<Self> {
        if a.is_zero() && b.is_zero() {
            return None;
        }
        let [a, b, c] = clear_denominators([a, b, c]);
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        let leading_negative = if a.is_zero() {
            b.is_negative()
        } else {
            a.is_negative()
        };
        if leading_negative {
            a = -a;
            b = -b;
            c = -c;
        }
        Some(CanonicalLine { a, b, c })
    }

    /// Whether `p` satisfies the line equation.
    pub fn contains(&self, p: &Point) -> bool {
        let lhs = Rational::from(self.a.clone()) * &p.x + Rational::from(self.b.clone()) * &p.y;
        lhs == Rational::from(self.c.clone())
    }
}

/// Reduced integer direction of a line through the origin.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct RadialDirection {
    #[serde(serialize_with = "as_decimal")]
    pub dx: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub dy: BigInt,
}

impl fmt::Display for RadialDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.dx, self.dy)
    }
}

/// Multiplies rationals by the lcm of their denominators.
fn clear_denominators<const N: usize>(values: [&Rational; N]) -> [BigInt; N] {
    let lcm = values
        .iter()
        .fold(BigInt::from(1u8), |acc, v| acc.lcm(v.denom()));
    values.map(|v| v.numer() * (&lcm / v.denom()))
}

pub fn dot(p: &Point, q: &Point) -> Rational {
    &p.x * &q.x + &p.y * &q.y
}

pub fn squared_distance(p: &Point, q: &Point) -> Rational {
    let dx = &p.x - &q.x;
    let dy = &p.y - &q.y;
    &dx * &dx + &dy * &dy
}

/// Canonical form of `{z : p · z = alpha}`; `None` for the origin, whose
/// locus is empty or the whole plane.
pub fn alpha_line(p: &Point, alpha: &Rational) -> Option<CanonicalLine> {
    CanonicalLine::from_rational(&p.x, &p.y, alpha)
}

pub fn radial_direction(p: &Point) -> Result<RadialDirection> {
    if p.is_origin() {
        return Err(Error::OriginHasNoRadialLine);
    }
    let [dx, dy] = clear_denominators([&p.x, &p.y]);
    let g = dx.gcd(&dy);
    let (mut dx, mut dy) = (dx / &g, dy / &g);
    let leading_negative = if dx.is_zero() {
        dy.is_negative()
    } else {
        dx.is_negative()
    };
    if leading_negative {
        dx = -dx;
        dy = -dy;
    }
    Ok(RadialDirection { dx, dy })
}

/// Whether the α-line of `q` is the β-line of `r`.
///
/// The triples `(q_x, q_y, α)` and `(r_x, r_y, β)` describe the same line
/// exactly when they are proportional, which for nonzero targets reduces to
/// `β·q = α·r` componentwise.
pub fn lines_coincide(q: &Point, alpha: &Rational, r: &Point, beta: &Rational) -> Result<bool> {
    if alpha.is_zero() || beta.is_zero() || q.is_origin() || r.is_origin() {
        return Err(Error::CoincidenceHypotheses);
    }
    Ok(beta * &q.x == alpha * &r.x && beta * &q.y == alpha * &r.y)
}
