//! Canonical projective points and the (unnormalized) height.
//!
//! A point of `P^n(K)` is stored by its primitive integral representative:
//! coordinates in the ring of integers generating the unit ideal, scaled by
//! the unit that puts the first nonzero coordinate in canonical position.
//! With that representative every finite place contributes `1` to the
//! height, so `H(P)` is the archimedean factor alone.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{parse_ring_element, FieldContext, FieldElement, RingElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<RingElement>,
}

impl ProjectivePoint {
    pub fn coords(&self) -> &[RingElement] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<RingElement> {
        self.coords
    }

    /// `n` for a point of `P^n`.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Wraps coordinates already known to be canonical. Debug builds check it.
    pub(crate) fn from_canonical_unchecked(coords: Vec<RingElement>) -> Self {
        debug_assert!(coords.iter().any(|c| !c.is_zero()));
        ProjectivePoint { coords }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.coords)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, coords: &[RingElement]) -> fmt::Result {
    f.write_str("[")?;
    for (k, c) in coords.iter().enumerate() {
        if k > 0 {
            f.write_str(":")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("]")
}

pub fn format_tuple(coords: &[RingElement]) -> String {
    struct T<'a>(&'a [RingElement]);
    impl fmt::Display for T<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_tuple(f, self.0)
        }
    }
    T(coords).to_string()
}

/// Parses a bracketed, colon-separated tuple such as `[1+i:2:0]`.
pub fn parse_tuple(s: &str) -> Result<Vec<RingElement>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("point literal `{s}` must be bracketed")))?;
    inner.split(':').map(parse_ring_element).collect()
}

impl FromStr for ProjectivePoint {
    type Err = Error;
    /// Parses and canonicalizes over `Q(i)`; use [`canonicalize_integral`]
    /// with an explicit context to work over `Q`.
    fn from_str(s: &str) -> Result<Self> {
        canonicalize_integral(&parse_tuple(s)?, &FieldContext::GAUSSIAN)
    }
}

fn check_dims(len: usize) -> Result<()> {
    if len < 2 {
        return Err(Error::DimensionMismatch(format!("a projective point needs at least 2 coordinates, got {len}")));
    }
    Ok(())
}

/// Gcd of all coordinates (up to a unit); zero iff every coordinate is zero.
pub fn content(v: &[RingElement]) -> RingElement {
    v.iter().fold(RingElement::zero(), |g, x| g.gcd(x))
}

/// Canonical representative of the projective point with integral
/// coordinates `raw`.
pub fn canonicalize_integral(raw: &[RingElement], ctx: &FieldContext) -> Result<ProjectivePoint> {
    check_dims(raw.len())?;
    primitive_normalize(raw, ctx).map(|coords| ProjectivePoint { coords })
}

/// Divides out the content and applies the canonical unit; any length >= 1.
pub(crate) fn primitive_normalize(raw: &[RingElement], ctx: &FieldContext) -> Result<Vec<RingElement>> {
    for x in raw {
        ctx.check(x)?;
    }
    let g = content(raw);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut coords: Vec<RingElement> =
        raw.iter().map(|x| x.div_exact(&g).expect("content divides every coordinate")).collect();
    let lead = coords.iter().find(|c| !c.is_zero()).expect("nonzero vector");
    let (_, unit) = ctx.unit_canonicalize(lead)?;
    if unit != RingElement::one() {
        for c in coords.iter_mut() {
            *c = unit.clone() * c.clone();
        }
    }
    Ok(coords)
}

/// Canonical representative of the projective point `[raw_0 : ... : raw_n]`
/// with coordinates in `K`. Denominators are cleared first, so the result is
/// invariant under scaling `raw` by any nonzero element of `K`.
pub fn canonicalize(raw: &[FieldElement], ctx: &FieldContext) -> Result<ProjectivePoint> {
    check_dims(raw.len())?;
    if ctx.is_rational() {
        if let Some(x) = raw.iter().find(|x| !x.im.is_zero()) {
            return Err(Error::NotInField(format!("{} + ({})i", x.re, x.im)));
        }
    }
    let denom = raw.iter().fold(BigInt::one(), |l, x| l.lcm(x.re.denom()).lcm(x.im.denom()));
    let integral: Vec<RingElement> = raw
        .iter()
        .map(|x| {
            let re = (&x.re * &denom).to_integer();
            let im = (&x.im * &denom).to_integer();
            RingElement::new(re, im)
        })
        .collect();
    canonicalize_integral(&integral, ctx)
}

/// Archimedean absolute values `|v|_i`, one per place. Both supported
/// fields have a single archimedean place, so the result has length
/// `r1 + r2 = 1`: `max_j |v_j|` over `Q`, `max_j N(v_j)` over `Q(i)`.
pub fn local_norms(v: &[RingElement], ctx: &FieldContext) -> Result<Vec<BigInt>> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let m = v.iter().map(|x| ctx.abs_at_infinity(x)).max().expect("nonempty");
    Ok(vec![m])
}

/// `||v||^d`, the `d`-th power of the sup norm, where the exponent `d_i` of
/// a complex place is `1/2`. The power is always an integer here, and for a
/// canonical `v` it equals `H(v)`.
pub fn sup_norm(v: &[RingElement], ctx: &FieldContext) -> Result<BigInt> {
    let (r1, r2) = ctx.signature();
    let norms = local_norms(v, ctx)?;
    debug_assert_eq!(norms.len() as u32, r1 + r2);
    Ok(norms.into_iter().max().expect("one place"))
}

/// `H_K(P)`, the height relative to `K` (not normalized by `[K:Q]`):
/// `max |x_i|` over `Q`, `max N(x_i)` over `Q(i)`.
pub fn height(p: &ProjectivePoint, ctx: &FieldContext) -> BigInt {
    sup_norm(&p.coords, ctx).expect("canonical points are nonzero")
}
