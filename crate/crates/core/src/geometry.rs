//! Exact rational points and the segment predicates built on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical `numerator/denominator` text, denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `a/b` (any sign, `b != 0`) and plain integers.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2 { x: rat(x), y: rat(y) }
    }

    /// `self + t (other - self)`.
    pub fn lerp(&self, other: &Point2, t: &Rational) -> Point2 {
        Point2 {
            x: &self.x + t * (&other.x - &self.x),
            y: &self.y + t * (&other.y - &self.y),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl serde::Serialize for Point2 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.x), format_rational(&self.y)].serialize(serializer)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Cross product of `b - a` and `c - a`; positive for a left turn.
pub fn cross(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

pub fn orientation(a: &Point2, b: &Point2, c: &Point2) -> Ordering {
    cross(a, b, c).cmp(&Rational::zero())
}

/// True when `p` lies on the open segment `ab` (endpoints excluded).
pub fn on_open_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    if orientation(a, b, p) != Ordering::Equal || p == a || p == b {
        return false;
    }
    within(&a.x, &b.x, &p.x) && within(&a.y, &b.y, &p.y)
}

fn within(a: &Rational, b: &Rational, x: &Rational) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    lo <= x && x <= hi
}

/// Do two collinear-capable segments share more than a single point?
pub fn collinear_overlap(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    if orientation(a, b, c) != Ordering::Equal || orientation(a, b, d) != Ordering::Equal {
        return false;
    }
    // Project on the dominant axis of ab.
    let use_x = (&b.x - &a.x).abs() >= (&b.y - &a.y).abs();
    let key = |p: &Point2| if use_x { p.x.clone() } else { p.y.clone() };
    let (a0, a1) = minmax(key(a), key(b));
    let (c0, c1) = minmax(key(c), key(d));
    let lo = if a0 > c0 { a0 } else { c0 };
    let hi = if a1 < c1 { a1 } else { c1 };
    lo < hi
}

fn minmax(a: Rational, b: Rational) -> (Rational, Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A crossing strictly inside both segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperCrossing {
    pub point: Point2,
    /// Position along `ab`, in (0, 1).
    pub along_first: Rational,
    /// Position along `cd`, in (0, 1).
    pub along_second: Rational,
}

/// Intersection of `ab` and `cd` when it is a single point interior to both.
pub fn proper_crossing(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Option<ProperCrossing> {
    let rx = &b.x - &a.x;
    let ry = &b.y - &a.y;
    let sx = &d.x - &c.x;
    let sy = &d.y - &c.y;
    let denom = &rx * &sy - &ry * &sx;
    if denom.is_zero() {
        return None;
    }
    let qx = &c.x - &a.x;
    let qy = &c.y - &a.y;
    let t = (&qx * &sy - &qy * &sx) / &denom;
    let u = (&qx * &ry - &qy * &rx) / &denom;
    let open = |v: &Rational| v.is_positive() && v < &rat(1);
    if !open(&t) || !open(&u) {
        return None;
    }
    Some(ProperCrossing { point: a.lerp(b, &t), along_first: t, along_second: u })
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingBox {
    pub min: Point2,
    pub max: Point2,
}

impl BoundingBox {
    pub fn of<'a>(points: impl IntoIterator<Item = &'a Point2>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = BoundingBox { min: first.clone(), max: first.clone() };
        for p in it {
            if p.x < bb.min.x {
                bb.min.x = p.x.clone();
            }
            if p.y < bb.min.y {
                bb.min.y = p.y.clone();
            }
            if p.x > bb.max.x {
                bb.max.x = p.x.clone();
            }
            if p.y > bb.max.y {
                bb.max.y = p.y.clone();
            }
        }
        Some(bb)
    }

    /// Closed boxes share at least one point.
    pub fn intersects(&self, other: &BoundingBox) -> bool {
        self.min.x <= other.max.x && other.min.x <= self.max.x && self.min.y <= other.max.y && other.min.y <= self.max.y
    }
}

/// Counter-clockwise order of directions `a` and `b` measured from `reference`.
/// Directions are vectors from a common origin; none may be zero.
pub fn ccw_from(reference: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)) -> Ordering {
    let half = |v: &(Rational, Rational)| -> u8 {
        let c = &reference.0 * &v.1 - &reference.1 * &v.0;
        let dot = &reference.0 * &v.0 + &reference.1 * &v.1;
        if c.is_positive() || (c.is_zero() && dot.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = &a.0 * &b.1 - &a.1 * &b.0;
        // a before b when b is to the left of a
        Rational::zero().cmp(&c)
    })
}
