//! The two supported base fields and their rings of integers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;

/// An element of `Z` or `Z[i]` with arbitrary-precision parts.
pub type RingElement = Gaussian<BigInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    Rational,
    Gaussian,
}

/// Which base field is in play, with its degree, signature and unit group.
///
/// Both fields have exactly one archimedean place (real for `Q`, complex for
/// `Q(i)`), class number one and a finite unit group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldContext {
    pub kind: FieldKind,
}

impl FieldContext {
    pub const RATIONAL: FieldContext = FieldContext { kind: FieldKind::Rational };
    pub const GAUSSIAN: FieldContext = FieldContext { kind: FieldKind::Gaussian };

    pub fn degree(&self) -> u32 {
        match self.kind {
            FieldKind::Rational => 1,
            FieldKind::Gaussian => 2,
        }
    }

    /// `(r1, r2)`: numbers of real and complex-conjugate-pair embeddings.
    pub fn signature(&self) -> (u32, u32) {
        match self.kind {
            FieldKind::Rational => (1, 0),
            FieldKind::Gaussian => (0, 1),
        }
    }

    pub fn unit_count(&self) -> usize {
        match self.kind {
            FieldKind::Rational => 2,
            FieldKind::Gaussian => 4,
        }
    }

    pub fn units(&self) -> Vec<RingElement> {
        let all = RingElement::units();
        match self.kind {
            FieldKind::Rational => vec![all[0].clone(), all[2].clone()],
            FieldKind::Gaussian => all.to_vec(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.kind == FieldKind::Rational
    }

    /// CLI token: `q` or `qi`.
    pub fn token(&self) -> &'static str {
        match self.kind {
            FieldKind::Rational => "q",
            FieldKind::Gaussian => "qi",
        }
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        self.kind == FieldKind::Gaussian || x.im.is_zero()
    }

    pub fn check(&self, x: &RingElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInField(x.to_string()))
        }
    }

    /// Contribution of `x` at the archimedean place: `|x|` over `Q`, `N(x)`
    /// over `Q(i)` (the squared absolute value).
    pub fn abs_at_infinity(&self, x: &RingElement) -> BigInt {
        match self.kind {
            FieldKind::Rational => x.re.abs(),
            FieldKind::Gaussian => x.norm(),
        }
    }

    /// Unique unit multiple of `x` in canonical position: positive over `Q`,
    /// `Re > 0, Im >= 0` over `Q(i)`. Returns the normalized element and
    /// the unit that was applied.
    pub fn unit_canonicalize(&self, x: &RingElement) -> Result<(RingElement, RingElement)> {
        self.check(x)?;
        x.unit_normalize(self.is_rational()).ok_or(Error::ZeroElement)
    }

    pub fn is_canonical_unit_position(&self, x: &RingElement) -> bool {
        match self.kind {
            FieldKind::Rational => x.re.is_positive(),
            FieldKind::Gaussian => x.in_canonical_quadrant(),
        }
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FieldContext {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" => Ok(FieldContext::RATIONAL),
            "qi" | "q(i)" => Ok(FieldContext::GAUSSIAN),
            other => Err(Error::Parse(format!("unknown field `{other}` (expected q or qi)"))),
        }
    }
}

/// An element `re + im·i` of `Q` or `Q(i)` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub re: BigRational,
    pub im: BigRational,
}

impl FieldElement {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        FieldElement { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, o: &FieldElement) -> FieldElement {
        FieldElement { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl From<&RingElement> for FieldElement {
    fn from(x: &RingElement) -> Self {
        FieldElement { re: BigRational::from_integer(x.re.clone()), im: BigRational::from_integer(x.im.clone()) }
    }
}

impl From<RingElement> for FieldElement {
    fn from(x: RingElement) -> Self {
        FieldElement::from(&x)
    }
}

pub fn ring(re: i64, im: i64) -> RingElement {
    Gaussian::new(BigInt::from(re), BigInt::from(im))
}

pub fn int(re: i64) -> RingElement {
    ring(re, 0)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (decimal, unit coefficient optional).
pub fn parse_ring_element(s: &str) -> Result<RingElement> {
    let err = || Error::Parse(format!("bad ring element `{s}`"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return BigInt::from_str(&t).map(Gaussian::real).map_err(|_| err());
    };
    // Split the imaginary term at the last sign that is not the leading one.
    let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(k, _)| k).last();
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { BigInt::zero() } else { BigInt::from_str(re_part).map_err(|_| err())? };
    let im = match im_part {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        digits => BigInt::from_str(digits).map_err(|_| err())?,
    };
    Ok(Gaussian::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_matches_degree() {
        for ctx in [FieldContext::RATIONAL, FieldContext::GAUSSIAN] {
            let (r1, r2) = ctx.signature();
            assert_eq!(ctx.degree(), r1 + 2 * r2);
            assert_eq!(ctx.units().len(), ctx.unit_count());
            assert!(ctx.units().iter().all(|u| u.is_unit()));
        }
    }

    #[test]
    fn unit_canonicalize_examples() {
        let q = FieldContext::RATIONAL;
        let qi = FieldContext::GAUSSIAN;
        assert_eq!(q.unit_canonicalize(&int(-7)).unwrap(), (int(7), int(-1)));
        assert_eq!(qi.unit_canonicalize(&ring(1, -1)).unwrap(), (ring(1, 1), ring(0, 1)));
        assert_eq!(qi.unit_canonicalize(&ring(0, 5)).unwrap(), (int(5), ring(0, -1)));
        assert_eq!(q.unit_canonicalize(&int(0)), Err(Error::ZeroElement));
        assert!(matches!(q.unit_canonicalize(&ring(1, 1)), Err(Error::NotInField(_))));
    }

    #[test]
    fn unit_canonicalize_is_unique_among_associates() {
        let qi = FieldContext::GAUSSIAN;
        for a in -6..=6 {
            for b in -6..=6 {
                let x = ring(a, b);
                if x.is_zero() {
                    continue;
                }
                let hits: Vec<_> = qi
                    .units()
                    .into_iter()
                    .map(|u| u * x.clone())
                    .filter(|c| qi.is_canonical_unit_position(c))
                    .collect();
                assert_eq!(hits.len(), 1);
                let (c, u) = qi.unit_canonicalize(&x).unwrap();
                assert_eq!(c, hits[0]);
                assert_eq!(u * x, c);
                assert_eq!(qi.unit_canonicalize(&c).unwrap().0, c);
            }
        }
    }

    #[test]
    fn parse_and_display_agree() {
        for (text, re, im) in [
            ("7", 7, 0),
            ("-3", -3, 0),
            ("i", 0, 1),
            ("-i", 0, -1),
            ("2i", 0, 2),
            ("1+i", 1, 1),
            ("1-i", 1, -1),
            ("-3+4i", -3, 4),
            ("12-15i", 12, -15),
        ] {
            let x = parse_ring_element(text).unwrap();
            assert_eq!(x, ring(re, im), "{text}");
            assert_eq!(x.to_string(), text);
        }
        assert_eq!(parse_ring_element(" 1 + 2i ").unwrap(), ring(1, 2));
        assert_eq!(parse_ring_element("0+3i").unwrap(), ring(0, 3));
        for bad in ["", "x", "1+", "++i", "1.5", "i2"] {
            assert!(parse_ring_element(bad).is_err(), "{bad}");
        }
    }
}
