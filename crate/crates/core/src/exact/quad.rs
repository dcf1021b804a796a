use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// Real number `a + b*sqrt(s)` with rational `a`, `b` and radicand `s >= 0`.
///
/// Equality and ordering compare real values, so two elements written over
/// different radicands compare correctly (`3 + 0*sqrt(5) == 3 + 0*sqrt(7)`).
/// Arithmetic is only defined inside one extension; see [`QuadExt::align`].
#[derive(Clone)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    s: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, s: Rational) -> Result<Self> {
        if s.is_negative() {
            return Err(Error::InvalidRadicand(s.to_string()));
        }
        Ok(Self::normalized(a, b, s))
    }

    fn normalized(a: Rational, b: Rational, s: Rational) -> Self {
        if b.is_zero() || s.is_zero() {
            return Self::rational(a);
        }
        if let Some(r) = s.sqrt_exact() {
            return Self::rational(a + b * r);
        }
        QuadExt { a, b, s }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt {
            a,
            b: Rational::zero(),
            s: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// `sqrt(s)` as an element of its own extension.
    pub fn sqrt(s: Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), s)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Radicand; zero for rational values.
    pub fn radicand(&self) -> &Rational {
        &self.s
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Exact sign in {-1, 0, +1}.
    pub fn sign(&self) -> i8 {
        sign_of(&self.a, &self.b, &self.s)
    }

    /// Exact comparison of real values, valid across different radicands.
    pub fn compare(&self, other: &Self) -> Ordering {
        if let Ok((x, y)) = self.align(other) {
            return sign_of(&(&x.a - &y.a), &(&x.b - &y.b), &x.s).cmp(&0);
        }
        // x - y = u - v with u = (ax - ay) + bx*sqrt(sx) and v = by*sqrt(sy).
        let u = QuadExt {
            a: &self.a - &other.a,
            b: self.b.clone(),
            s: self.s.clone(),
        };
        let su = u.sign();
        let sv = other.b.signum();
        match (su, sv) {
            (0, 0) => Ordering::Equal,
            _ if su >= 0 && sv <= 0 => Ordering::Greater,
            _ if su <= 0 && sv >= 0 => Ordering::Less,
            _ => {
                // Same strict sign: compare squares, u^2 - v^2 lives in Q(sqrt(sx)).
                let d = sign_of(
                    &(u.a.square() + u.b.square() * &u.s - other.b.square() * &other.s),
                    &(Rational::from(2) * &u.a * &u.b),
                    &u.s,
                );
                if su > 0 {
                    d.cmp(&0)
                } else {
                    0.cmp(&d)
                }
            }
        }
    }

    /// Rewrites both values over one common radicand, if they share a field.
    pub fn align(&self, other: &Self) -> Result<(QuadExt, QuadExt)> {
        if other.is_rational() || self.s == other.s {
            let mut o = other.clone();
            if o.is_rational() {
                o.s = self.s.clone();
            }
            return Ok((self.clone(), o));
        }
        if self.is_rational() {
            let mut x = self.clone();
            x.s = other.s.clone();
            return Ok((x, other.clone()));
        }
        // sqrt(s1) = k sqrt(s2) when s1/s2 = k^2.
        if let Some(k) = (&self.s / &other.s).sqrt_exact() {
            let x = QuadExt {
                a: self.a.clone(),
                b: &self.b * &k,
                s: other.s.clone(),
            };
            return Ok((x, other.clone()));
        }
        Err(Error::MixedRadicands(self.s.to_string(), other.s.to_string()))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.align(other)?;
        Ok(Self::normalized(x.a + y.a, x.b + y.b, x.s))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.align(other)?;
        Ok(Self::normalized(x.a - y.a, x.b - y.b, x.s))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.align(other)?;
        let a = &x.a * &y.a + &x.b * &y.b * &x.s;
        let b = &x.a * &y.b + &x.b * &y.a;
        Ok(Self::normalized(a, b, x.s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.recip()?)
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(&self.a / &n, -(&self.b / &n), self.s.clone()))
    }

    /// Field norm `a^2 - b^2 s`; zero only for the zero element.
    pub fn norm(&self) -> Rational {
        self.a.square() - self.b.square() * &self.s
    }

    pub fn neg(&self) -> Self {
        Self::normalized(-&self.a, -&self.b, self.s.clone())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::normalized(&self.a * k, &self.b * k, self.s.clone())
    }

    pub fn add_rational(&self, k: &Rational) -> Self {
        Self::normalized(&self.a + k, self.b.clone(), self.s.clone())
    }

    pub fn square(&self) -> Self {
        self.try_mul(self).expect("same field")
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * self.s.to_f64().sqrt()
    }
}

fn sign_of(a: &Rational, b: &Rational, s: &Rational) -> i8 {
    let sb = if s.is_zero() { 0 } else { b.signum() };
    let sa = a.signum();
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // Opposite signs: the larger magnitude wins.
    match a.square().cmp(&(b.square() * s)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

impl From<Rational> for QuadExt {
    fn from(a: Rational) -> Self {
        QuadExt::rational(a)
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for QuadExt {}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.s)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "quadratic number",
            input: s.to_string(),
        };
        let t = s.trim();
        let Some((head, tail)) = t.split_once("*sqrt(") else {
            return Ok(QuadExt::rational(t.parse().map_err(|_| bad())?));
        };
        let radicand = tail.strip_suffix(')').ok_or_else(bad)?;
        // The separating '+' is the last one that is not a leading sign.
        let split = head
            .char_indices()
            .filter(|&(i, c)| c == '+' && i > 0)
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let a: Rational = head[..split].parse().map_err(|_| bad())?;
        let b: Rational = head[split + 1..].parse().map_err(|_| bad())?;
        let r: Rational = radicand.parse().map_err(|_| bad())?;
        QuadExt::new(a, b, r)
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
