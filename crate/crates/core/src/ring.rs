//! Homogeneous arithmetic in the coefficient ring `M2`, the RO(C2)-graded
//! cohomology of a point with constant `F2` coefficients.
//!
//! `M2` has two cones. The top cone is the polynomial ring `F2[rho, tau]` with
//! `rho` in bidegree `(1,1)` and `tau` in `(0,1)`. The bottom cone consists of
//! the elements `theta / (rho^c tau^d)`, with `theta` in `(0,-2)`, and every
//! product of two bottom-cone elements vanishes. Each bidegree holds at most a
//! single copy of `F2`, so a homogeneous element is either zero or one
//! monomial.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A bidegree `(p, q)`: topological dimension `p` and weight `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub p: i64,
    pub q: i64,
}

impl Bidegree {
    pub const fn new(p: i64, q: i64) -> Self {
        Self { p, q }
    }

    /// Fixed-set dimension `p - q`.
    pub const fn fix(self) -> i64 {
        self.p - self.q
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.p, -self.q)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// A nonzero monomial of `M2`.
///
/// `Top { rho: a, tau: b }` is `rho^a tau^b`; `Bottom { rho: c, tau: d }` is
/// `theta / (rho^c tau^d)`. Exponents are unsigned, so negative divisor
/// exponents cannot be represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    Top { rho: u32, tau: u32 },
    Bottom { rho: u32, tau: u32 },
}

impl Monomial {
    pub const ONE: Monomial = Monomial::Top { rho: 0, tau: 0 };
    pub const RHO: Monomial = Monomial::Top { rho: 1, tau: 0 };
    pub const TAU: Monomial = Monomial::Top { rho: 0, tau: 1 };
    pub const THETA: Monomial = Monomial::Bottom { rho: 0, tau: 0 };

    pub const fn top(rho: u32, tau: u32) -> Self {
        Monomial::Top { rho, tau }
    }

    pub const fn bottom(rho: u32, tau: u32) -> Self {
        Monomial::Bottom { rho, tau }
    }

    pub fn bidegree(self) -> Bidegree {
        match self {
            Monomial::Top { rho, tau } => {
                let (a, b) = (i64::from(rho), i64::from(tau));
                Bidegree::new(a, a + b)
            }
            Monomial::Bottom { rho, tau } => {
                let (c, d) = (i64::from(rho), i64::from(tau));
                Bidegree::new(-c, -2 - c - d)
            }
        }
    }

    /// The unique monomial in bidegree `deg`, if `M2` is nonzero there.
    pub fn at(deg: Bidegree) -> Option<Monomial> {
        let Bidegree { p, q } = deg;
        if p >= 0 && q >= p {
            Some(Monomial::Top {
                rho: u32::try_from(p).ok()?,
                tau: u32::try_from(q - p).ok()?,
            })
        } else if p <= 0 && q <= p - 2 {
            Some(Monomial::Bottom {
                rho: u32::try_from(-p).ok()?,
                tau: u32::try_from(p - q - 2).ok()?,
            })
        } else {
            None
        }
    }

    pub fn is_one(self) -> bool {
        self == Monomial::ONE
    }

    pub fn is_top(self) -> bool {
        matches!(self, Monomial::Top { .. })
    }

    pub fn is_bottom(self) -> bool {
        matches!(self, Monomial::Bottom { .. })
    }

    pub fn times(self, other: Monomial) -> Option<Monomial> {
        use Monomial::*;
        match (self, other) {
            (Top { rho: a1, tau: b1 }, Top { rho: a2, tau: b2 }) => Some(Top {
                rho: a1 + a2,
                tau: b1 + b2,
            }),
            (Top { rho: a, tau: b }, Bottom { rho: c, tau: d })
            | (Bottom { rho: c, tau: d }, Top { rho: a, tau: b }) => {
                if c >= a && d >= b {
                    Some(Bottom {
                        rho: c - a,
                        tau: d - b,
                    })
                } else {
                    None
                }
            }
            (Bottom { .. }, Bottom { .. }) => None,
        }
    }
}

/// A homogeneous element of `M2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum M2Elem {
    #[default]
    Zero,
    Mono(Monomial),
}

impl M2Elem {
    pub const ONE: M2Elem = M2Elem::Mono(Monomial::ONE);
    pub const THETA: M2Elem = M2Elem::Mono(Monomial::THETA);

    pub fn is_zero(self) -> bool {
        self == M2Elem::Zero
    }

    pub fn monomial(self) -> Option<Monomial> {
        match self {
            M2Elem::Zero => None,
            M2Elem::Mono(m) => Some(m),
        }
    }

    /// Bidegree of a nonzero element; zero lives in every bidegree.
    pub fn bidegree(self) -> Option<Bidegree> {
        self.monomial().map(Monomial::bidegree)
    }

    /// Sum of two elements of the same bidegree.
    pub fn try_add(self, other: M2Elem) -> Result<M2Elem, Error> {
        match (self, other) {
            (M2Elem::Zero, x) | (x, M2Elem::Zero) => Ok(x),
            (M2Elem::Mono(a), M2Elem::Mono(b)) if a == b => Ok(M2Elem::Zero),
            (M2Elem::Mono(a), M2Elem::Mono(b)) => Err(Error::DegreeMismatch(format!(
                "cannot add {a} in {} to {b} in {}",
                a.bidegree(),
                b.bidegree()
            ))),
        }
    }
}

impl From<Monomial> for M2Elem {
    fn from(m: Monomial) -> Self {
        M2Elem::Mono(m)
    }
}

impl From<Option<Monomial>> for M2Elem {
    fn from(m: Option<Monomial>) -> Self {
        m.map_or(M2Elem::Zero, M2Elem::Mono)
    }
}

/// Ring multiplication. Total: products that leave both cones are zero.
pub fn m2_mul(x: M2Elem, y: M2Elem) -> M2Elem {
    match (x, y) {
        (M2Elem::Mono(a), M2Elem::Mono(b)) => a.times(b).into(),
        _ => M2Elem::Zero,
    }
}

/// Dimension of `M2` in bidegree `(p, q)`; always 0 or 1.
pub fn m2_dim(p: i64, q: i64) -> usize {
    usize::from((p >= 0 && q >= p) || (p <= 0 && q <= p - 2))
}

/// Dimension of `A_n = F2[tau, tau^-1, rho]/(rho^(n+1))`, the cohomology of the
/// antipodal `n`-sphere: an infinite vertical strip over `0 <= p <= n`.
pub fn an_dim(n: u32, p: i64, _q: i64) -> usize {
    usize::from(0 <= p && p <= i64::from(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Localization {
    TauInverse,
    RhoInverse,
}

/// Dimension at `(p, q)` of the localization of a free summand generated in
/// bidegree `generator`.
///
/// Inverting `tau` turns `Sigma^{g} M2` into a copy of `A_infinity` over the
/// columns `p >= g.p`. Inverting `rho` gives `F2[tau, rho^±]` shifted by the
/// fixed-set dimension, which occupies `q - p >= -(g.p - g.q)`.
pub fn localized_dim(kind: Localization, generator: Bidegree, p: i64, q: i64) -> usize {
    match kind {
        Localization::TauInverse => usize::from(p >= generator.p),
        Localization::RhoInverse => usize::from(q - p >= -generator.fix()),
    }
}

/// Whether `theta` times the element with these coordinates is nonzero, i.e.
/// whether it generates a free summand.
pub fn is_theta_survivor(coeffs: &[M2Elem]) -> bool {
    coeffs
        .iter()
        .any(|&c| !m2_mul(M2Elem::THETA, c).is_zero())
}

// Text grammar:
//   monomial := "0" | "1" | top | bottom
//   top      := ["rho" ["^" uint]] ["*"] ["tau" ["^" uint]]   (at least one factor)
//   bottom   := "theta" ["/(" top ")"]

fn write_top(f: &mut fmt::Formatter<'_>, rho: u32, tau: u32) -> fmt::Result {
    let factor = |f: &mut fmt::Formatter<'_>, name: &str, e: u32| match e {
        1 => write!(f, "{name}"),
        _ => write!(f, "{name}^{e}"),
    };
    match (rho, tau) {
        (0, 0) => write!(f, "1"),
        (r, 0) => factor(f, "rho", r),
        (0, t) => factor(f, "tau", t),
        (r, t) => {
            factor(f, "rho", r)?;
            write!(f, "*")?;
            factor(f, "tau", t)
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Monomial::Top { rho, tau } => write_top(f, rho, tau),
            Monomial::Bottom { rho: 0, tau: 0 } => write!(f, "theta"),
            Monomial::Bottom { rho, tau } => {
                write!(f, "theta/(")?;
                write_top(f, rho, tau)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for M2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            M2Elem::Zero => write!(f, "0"),
            M2Elem::Mono(m) => m.fmt(f),
        }
    }
}

/// A monomial string that does not match the grammar. `offset` is the byte
/// position of the first offending character.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at offset {offset}")]
pub struct MonomialParseError {
    pub offset: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, MonomialParseError> {
        Err(MonomialParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn uint(&mut self) -> Result<u32, MonomialParseError> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.fail("expected exponent");
        }
        let text = &self.rest()[..digits];
        match text.parse::<u32>() {
            Ok(v) => {
                self.pos += digits;
                Ok(v)
            }
            Err(_) => self.fail("exponent out of range"),
        }
    }

    fn exponent(&mut self) -> Result<u32, MonomialParseError> {
        if self.eat("^") {
            self.uint()
        } else {
            Ok(1)
        }
    }

    fn top(&mut self) -> Result<(u32, u32), MonomialParseError> {
        let start = self.pos;
        let mut factors = 0;
        let mut rho = 0;
        let mut tau = 0;
        if self.eat("rho") {
            rho = self.exponent()?;
            factors += 1;
        }
        let star = self.eat("*");
        if self.eat("tau") {
            tau = self.exponent()?;
            factors += 1;
        }
        if factors == 0 {
            self.pos = if star { self.pos } else { start };
            return self.fail("expected rho or tau");
        }
        Ok((rho, tau))
    }
}

/// Parses a monomial string. Returns [`M2Elem::Zero`] for `"0"`.
pub fn parse_m2(text: &str) -> Result<M2Elem, MonomialParseError> {
    let mut cur = Cursor { src: text, pos: 0 };
    let elem = if text == "0" {
        cur.pos = 1;
        M2Elem::Zero
    } else if text == "1" {
        cur.pos = 1;
        M2Elem::ONE
    } else if cur.eat("theta") {
        if cur.eat("/(") {
            let (rho, tau) = cur.top()?;
            if !cur.eat(")") {
                return cur.fail("expected ')'");
            }
            Monomial::bottom(rho, tau).into()
        } else {
            M2Elem::THETA
        }
    } else {
        let (rho, tau) = cur.top()?;
        Monomial::top(rho, tau).into()
    };
    if cur.pos != text.len() {
        return cur.fail("unexpected trailing input");
    }
    Ok(elem)
}

impl FromStr for M2Elem {
    type Err = MonomialParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_m2(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_monomials(max: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in 0..=max {
            for b in 0..=max {
                out.push(Monomial::top(a, b));
                out.push(Monomial::bottom(a, b));
            }
        }
        out
    }

    fn m(s: &str) -> M2Elem {
        s.parse().unwrap()
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(m2_mul(m("rho"), m("theta/(rho)")), m("theta"));
        assert_eq!(m2_mul(m("tau"), m("theta")), M2Elem::Zero);
        assert_eq!(m2_mul(m("theta"), m("theta")), M2Elem::Zero);
        assert_eq!(m2_mul(m("rho^2*tau"), m("rho*tau^3")), m("rho^3*tau^4"));
        assert_eq!(m2_mul(m("0"), m("1")), M2Elem::Zero);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(m2_dim(0, 0), 1);
        assert_eq!(m2_dim(1, 0), 0);
        assert_eq!(m2_dim(-2, -5), 1);
        assert_eq!(m2_dim(0, -1), 0);
        assert_eq!(m2_dim(0, -2), 1);
        assert_eq!(an_dim(0, 0, -7), 1);
        assert_eq!(an_dim(4, 5, 0), 0);
        assert_eq!(an_dim(4, 2, 3), 1);
    }

    #[test]
    fn localized_dimension_examples() {
        let g = Bidegree::new(2, 1);
        assert_eq!(localized_dim(Localization::TauInverse, g, 3, -9), 1);
        assert_eq!(localized_dim(Localization::TauInverse, g, 1, 5), 0);
        assert_eq!(localized_dim(Localization::RhoInverse, g, -3, -4), 1);
    }

    #[test]
    fn rho_localization_matches_laurent_enumeration() {
        // F2[tau, rho^±] shifted to g: monomials tau^b rho^a sit at g + (a, a + b).
        let g = Bidegree::new(2, 1);
        for p in -8..=8 {
            for q in -8..=8 {
                let a = p - g.p;
                let b = (q - g.q) - a;
                let expected = usize::from(b >= 0);
                assert_eq!(localized_dim(Localization::RhoInverse, g, p, q), expected);
            }
        }
    }

    #[test]
    fn theta_survivors() {
        assert!(is_theta_survivor(&[m("rho"), m("1")]));
        assert!(!is_theta_survivor(&[m("rho"), m("tau^2")]));
        assert!(!is_theta_survivor(&[m("theta/(rho)")]));
        assert!(!is_theta_survivor(&[]));
    }

    #[test]
    fn ring_axioms_exhaustive() {
        let monos = all_monomials(6);
        for &x in &monos {
            for &y in &monos {
                let xy = x.times(y);
                assert_eq!(xy, y.times(x));
                if let Some(z) = xy {
                    assert_eq!(z.bidegree(), x.bidegree() + y.bidegree());
                }
            }
        }
        // Associativity on a smaller cube keeps the triple loop fast in debug builds.
        let small = all_monomials(3);
        for &x in &small {
            for &y in &small {
                for &z in &small {
                    let l = m2_mul(m2_mul(x.into(), y.into()), z.into());
                    let r = m2_mul(x.into(), m2_mul(y.into(), z.into()));
                    assert_eq!(l, r, "{x} {y} {z}");
                }
            }
        }
    }

    #[test]
    fn monomial_at_inverts_bidegree() {
        for x in all_monomials(8) {
            assert_eq!(Monomial::at(x.bidegree()), Some(x));
        }
        for p in -10..=10 {
            for q in -10..=10 {
                let found = Monomial::at(Bidegree::new(p, q));
                assert_eq!(usize::from(found.is_some()), m2_dim(p, q));
            }
        }
    }

    #[test]
    fn grammar_round_trip() {
        for x in all_monomials(4) {
            let text = x.to_string();
            assert_eq!(parse_m2(&text), Ok(M2Elem::Mono(x)), "{text}");
        }
        assert_eq!(m("theta/(rho^3*tau)"), Monomial::bottom(3, 1).into());
        assert_eq!(m("rho^2*tau"), Monomial::top(2, 1).into());
        assert_eq!(m("rhotau"), Monomial::top(1, 1).into());
        assert_eq!(m("rho^0"), M2Elem::ONE);
        assert_eq!(m("0"), M2Elem::Zero);
    }

    #[test]
    fn grammar_rejects_malformed_input() {
        let err = parse_m2("theta/(rho^2").unwrap_err();
        assert_eq!(err.offset, 12);
        assert!(parse_m2("").is_err());
        assert!(parse_m2("*").is_err());
        assert!(parse_m2("theta/()").is_err());
        assert!(parse_m2("theta/(1)").is_err());
        assert!(parse_m2("rho^").is_err());
        assert!(parse_m2("rho^99999999999").is_err());
        assert!(parse_m2("tau*rho").is_err());
        assert!(parse_m2("00").is_err());
    }

    #[test]
    fn addition_requires_matching_bidegree() {
        let t = M2Elem::from(Monomial::TAU);
        assert_eq!(t.try_add(t), Ok(M2Elem::Zero));
        assert_eq!(t.try_add(M2Elem::Zero), Ok(t));
        assert!(t.try_add(M2Elem::ONE).is_err());
    }
}
