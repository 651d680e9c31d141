//! Rational normal scrolls `S(a, b)` in `P^{a+b+1}`.
//!
//! Coordinates are `(x_0..x_a, y_0..y_b)`. The fiber over `[s:t]` joins the
//! points `(s^a, s^{a-1}t, ..., t^a, 0..0)` and `(0..0, s^b, ..., t^b)` of
//! two rational normal curves; the scroll itself is the locus where
//! `[[x_0..x_{a-1}, y_0..y_{b-1}], [x_1..x_a, y_1..y_b]]` has rank `<= 1`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{ambient_profile, ambient_scan, int_root, Fibration, Quadric};
use crate::enumerate::{check_bound, line_min_height, HeightProfile, Limits};
use crate::error::{Error, Result};
use crate::field::{FieldContext, RingElement};
use crate::kernel::{to_ring_vec, Elem};
use crate::line::{plucker_height, Line};
use crate::point::{canonicalize_integral, height, ProjectivePoint};
use crate::with_elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scroll {
    pub a: u32,
    pub b: u32,
    pub ctx: FieldContext,
}

impl Scroll {
    pub fn new(a: u32, b: u32, ctx: FieldContext) -> Result<Self> {
        if a > b || a + b == 0 {
            return Err(Error::InvalidArgument(format!("scroll S({a},{b}) needs a <= b and a + b >= 1")));
        }
        Ok(Scroll { a, b, ctx })
    }

    /// `n = a + b + 1`.
    pub fn ambient_dim(&self) -> usize {
        (self.a + self.b + 1) as usize
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b
    }

    pub fn token(&self) -> String {
        format!("scroll:{},{}", self.a, self.b)
    }

    /// Column `k` of the rolling-ratio matrix as `(top, bottom)` indices.
    fn columns(&self) -> Vec<(usize, usize)> {
        let a = self.a as usize;
        let b = self.b as usize;
        let xs = (0..a).map(|k| (k, k + 1));
        let ys = (0..b).map(|k| (a + 1 + k, a + 2 + k));
        xs.chain(ys).collect()
    }

    /// All 2x2 minors of the rolling-ratio matrix.
    pub fn equations(&self) -> Vec<Quadric> {
        let cols = self.columns();
        let mut out = Vec::new();
        for (k, &(t1, b1)) in cols.iter().enumerate() {
            for &(t2, b2) in &cols[k + 1..] {
                out.push(Quadric::binomial(t1, b2, t2, b1));
            }
        }
        out
    }

    pub fn contains(&self, x: &[RingElement]) -> bool {
        x.len() == self.ambient_dim() + 1
            && self.equations().iter().all(|q| {
                q.terms
                    .iter()
                    .fold(RingElement::zero(), |acc, &(plus, i, j)| {
                        let t = x[i].clone() * x[j].clone();
                        if plus {
                            acc + t
                        } else {
                            acc - t
                        }
                    })
                    .is_zero()
            })
    }
}

impl fmt::Display for Scroll {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.a, self.b)
    }
}

fn monomials(s: &RingElement, t: &RingElement, deg: u32) -> Vec<RingElement> {
    (0..=deg).map(|k| pow(s, deg - k) * pow(t, k)).collect()
}

fn pow(x: &RingElement, e: u32) -> RingElement {
    (0..e).fold(RingElement::one(), |acc, _| acc * x.clone())
}

fn check_base(basept: &ProjectivePoint) -> Result<(&RingElement, &RingElement)> {
    match basept.coords() {
        [s, t] => Ok((s, t)),
        c => Err(Error::DimensionMismatch(format!("base point must lie on P^1, got {} coordinates", c.len()))),
    }
}

/// The fiber line over `[s:t]`.
pub fn scroll_fiber(scroll: &Scroll, basept: &ProjectivePoint) -> Result<Line> {
    let (s, t) = check_base(basept)?;
    let zeros = |k: u32| vec![RingElement::zero(); k as usize + 1];
    let mut u = monomials(s, t, scroll.a);
    u.extend(zeros(scroll.b));
    let mut w = zeros(scroll.a);
    w.extend(monomials(s, t, scroll.b));
    Line::new(u, w, scroll.ctx)
}

/// `H_A(P)`: the Plücker height of the fiber over `P`.
pub fn scroll_psi_height(scroll: &Scroll, basept: &ProjectivePoint) -> Result<BigInt> {
    Ok(plucker_height(&scroll_fiber(scroll, basept)?))
}

/// Smallest height of a point on the fiber over `P`, by lattice enumeration
/// with a doubling bound.
pub fn fiber_min_height(scroll: &Scroll, basept: &ProjectivePoint, limits: &Limits) -> Result<u64> {
    line_min_height(&scroll_fiber(scroll, basept)?, limits)
}

/// `phi(P)`: the base point whose fiber contains `P`, or `None` for the
/// vertex of a cone `S(0, b)`, which lies on every fiber.
pub fn scroll_base_point(scroll: &Scroll, x: &[RingElement]) -> Result<Option<ProjectivePoint>> {
    if !scroll.contains(x) {
        return Err(Error::InvalidArgument("point does not lie on the scroll".into()));
    }
    let col = scroll.columns().into_iter().find(|&(t, b)| !x[t].is_zero() || !x[b].is_zero());
    match col {
        Some((t, b)) => Ok(Some(canonicalize_integral(&[x[t].clone(), x[b].clone()], &scroll.ctx)?)),
        None => Ok(None),
    }
}

/// Fiber-sum model. Over `[s:t]` with `H(s:t) = h`, a point
/// `lambda u + mu w` has a block equal to `lambda (s^a..t^a)` or
/// `mu (s^b..t^b)` with nonzero multiplier, so its height is at least
/// `h^a`; for `a = 0` the same holds with `h^b` off the vertex `e_0`.
fn with_fibration<E: Elem, R>(
    scroll: &Scroll,
    bound: u64,
    f: impl FnOnce(&Fibration<'_, E>) -> Result<R>,
) -> Result<R> {
    check_bound(bound)?;
    let cut = if scroll.a >= 1 { scroll.a } else { scroll.b };
    let fiber = |p: &[E]| {
        let basept = ProjectivePoint::from_canonical_unchecked(to_ring_vec(p));
        scroll_fiber(scroll, &basept)
    };
    let fib = Fibration { base_dim: 2, base_radius: int_root(bound, cut), common: scroll.a == 0, fiber: &fiber };
    f(&fib)
}

/// `N_S(B)` by summing fiber counts over the base points that can carry a
/// point of height `<= B`.
pub fn count_scroll_fibersum(scroll: &Scroll, bound: u64, limits: &Limits) -> Result<u64> {
    with_elem!(&scroll.ctx, E => with_fibration::<E, _>(scroll, bound, |f| f.count(bound, limits)))
}

/// `N_S(B)` by scanning `P^n` against the determinantal equations.
pub fn count_scroll_bruteforce(scroll: &Scroll, bound: u64, limits: &Limits) -> Result<u64> {
    Ok(scroll_profile_bruteforce(scroll, bound, limits)?.total())
}

/// Only the ambient-scan profile.
pub fn scroll_profile_bruteforce(scroll: &Scroll, bound: u64, limits: &Limits) -> Result<HeightProfile> {
    let dim = scroll.ambient_dim() + 1;
    with_elem!(&scroll.ctx, E => ambient_profile::<E>(dim, &scroll.equations(), bound, limits))
}

/// Height profiles `(fiber sum, ambient scan)` up to `bound`.
pub fn scroll_profiles(scroll: &Scroll, bound: u64, limits: &Limits) -> Result<(HeightProfile, HeightProfile)> {
    Ok((scroll_profile_fibersum(scroll, bound, limits)?, scroll_profile_bruteforce(scroll, bound, limits)?))
}

/// Only the fiber-sum profile.
pub fn scroll_profile_fibersum(scroll: &Scroll, bound: u64, limits: &Limits) -> Result<HeightProfile> {
    with_elem!(&scroll.ctx, E => with_fibration::<E, _>(scroll, bound, |f| f.profile(bound, limits)))
}

fn to_points<E: Elem>(set: BTreeSet<Vec<E>>) -> BTreeSet<ProjectivePoint> {
    set.into_iter().map(|v| ProjectivePoint::from_canonical_unchecked(to_ring_vec(&v))).collect()
}

/// The union of the fiber point sets with `H <= B`.
pub fn scroll_point_set_fibersum(scroll: &Scroll, bound: u64, limits: &Limits) -> Result<BTreeSet<ProjectivePoint>> {
    with_elem!(&scroll.ctx, E => {
        let set = with_fibration::<E, _>(scroll, bound, |f| f.point_set(bound, limits))?;
        Ok(to_points(set))
    })
}

/// The points of the scroll with `H <= B` found by the ambient scan.
pub fn scroll_point_set_bruteforce(scroll: &Scroll, bound: u64, limits: &Limits) -> Result<BTreeSet<ProjectivePoint>> {
    let b = check_bound(bound)?;
    let eqs = scroll.equations();
    let dim = scroll.ambient_dim() + 1;
    with_elem!(&scroll.ctx, E => {
        let mut set = BTreeSet::new();
        ambient_scan::<E>(dim, &eqs, b, limits, &mut |x| {
            set.insert(x.to_vec());
        })?;
        Ok(to_points(set))
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparabilitySample {
    pub point: ProjectivePoint,
    pub base: ProjectivePoint,
    pub height: BigInt,
    pub psi_height: BigInt,
}

/// Observed relation between `H_A(phi(P))` and `H(P)` on a sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparabilityReport {
    pub samples: Vec<ComparabilitySample>,
    /// Points without a well-defined `phi(P)` (the vertex of `S(0, b)`).
    pub skipped: usize,
    /// `max H_A(phi(P)) / H(P)`.
    pub max_ratio: Option<BigRational>,
    /// Range of `log H_A(phi(P)) / log H(P)` over samples with `H(P) > 1`.
    pub log_ratio_range: Option<(f64, f64)>,
}

pub fn measure_height_comparability(scroll: &Scroll, sample: &[ProjectivePoint]) -> Result<ComparabilityReport> {
    if sample.is_empty() {
        return Err(Error::InsufficientData("empty sample of scroll points".into()));
    }
    let mut samples = Vec::new();
    let mut skipped = 0;
    for p in sample {
        let Some(base) = scroll_base_point(scroll, p.coords())? else {
            skipped += 1;
            continue;
        };
        let psi_height = scroll_psi_height(scroll, &base)?;
        samples.push(ComparabilitySample { point: p.clone(), height: height(p, &scroll.ctx), base, psi_height });
    }
    let max_ratio = samples.iter().map(|s| BigRational::new(s.psi_height.clone(), s.height.clone())).max();
    let logs: Vec<f64> = samples
        .iter()
        .filter(|s| s.height > BigInt::one())
        .filter_map(|s| Some(s.psi_height.to_f64()?.ln() / s.height.to_f64()?.ln()))
        .collect();
    let log_ratio_range = logs.iter().copied().fold(None, |acc: Option<(f64, f64)>, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    });
    Ok(ComparabilityReport { samples, skipped, max_ratio, log_ratio_range })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    const Q: FieldContext = FieldContext::RATIONAL;

    fn pt(v: &[i64]) -> ProjectivePoint {
        canonicalize_integral(&v.iter().map(|&x| int(x)).collect::<Vec<_>>(), &Q).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn fibers() {
        let s12 = Scroll::new(1, 2, Q).unwrap();
        let f = scroll_fiber(&s12, &pt(&[1, 0])).unwrap();
        assert_eq!((f.span_a(), f.span_b()), (ints(&[1, 0, 0, 0, 0]).as_slice(), ints(&[0, 0, 1, 0, 0]).as_slice()));
        let f = scroll_fiber(&s12, &pt(&[1, 1])).unwrap();
        assert_eq!((f.span_a(), f.span_b()), (ints(&[1, 1, 0, 0, 0]).as_slice(), ints(&[0, 0, 1, 1, 1]).as_slice()));
        let s11 = Scroll::new(1, 1, Q).unwrap();
        let f = scroll_fiber(&s11, &pt(&[0, 1])).unwrap();
        assert_eq!((f.span_a(), f.span_b()), (ints(&[0, 1, 0, 0]).as_slice(), ints(&[0, 0, 0, 1]).as_slice()));
        assert!(Scroll::new(2, 1, Q).is_err());
        assert!(Scroll::new(0, 0, Q).is_err());
    }

    #[test]
    fn psi_heights() {
        let s12 = Scroll::new(1, 2, Q).unwrap();
        assert_eq!(scroll_psi_height(&s12, &pt(&[1, 0])).unwrap(), BigInt::from(1));
        assert_eq!(scroll_psi_height(&s12, &pt(&[1, 2])).unwrap(), BigInt::from(8));
        let s11 = Scroll::new(1, 1, Q).unwrap();
        assert_eq!(scroll_psi_height(&s11, &pt(&[2, 3])).unwrap(), BigInt::from(9));
    }

    #[test]
    fn equations_define_the_quadric_for_s11() {
        let s11 = Scroll::new(1, 1, Q).unwrap();
        // Columns (x0, x1), (y0, y1) = (0, 1), (2, 3): x0 x3 - x2 x1.
        assert_eq!(s11.equations(), vec![Quadric::binomial(0, 3, 2, 1)]);
        assert!(Scroll::new(0, 1, Q).unwrap().equations().is_empty());
        assert_eq!(Scroll::new(1, 2, Q).unwrap().equations().len(), 3);
    }

    #[test]
    fn fiber_minimum_is_h_to_the_a() {
        let l = Limits::default();
        let s12 = Scroll::new(1, 2, Q).unwrap();
        for (s, t) in [(1, 0), (1, 2), (3, -2), (5, 7)] {
            let p = pt(&[s, t]);
            let h = height(&p, &Q).to_u64().unwrap();
            assert_eq!(fiber_min_height(&s12, &p, &l).unwrap(), h);
        }
        let s03 = Scroll::new(0, 3, Q).unwrap();
        assert_eq!(fiber_min_height(&s03, &pt(&[2, 3]), &l).unwrap(), 1);
    }

    #[test]
    fn small_counts_agree() {
        let l = Limits::default();
        for (a, b) in [(0, 1), (1, 1), (0, 2), (1, 2), (0, 3), (2, 2)] {
            let s = Scroll::new(a, b, Q).unwrap();
            for bound in [1, 2, 4] {
                assert_eq!(
                    count_scroll_fibersum(&s, bound, &l).unwrap(),
                    count_scroll_bruteforce(&s, bound, &l).unwrap(),
                    "{s} B={bound}"
                );
            }
        }
        let plane = Scroll::new(0, 1, Q).unwrap();
        assert_eq!(count_scroll_fibersum(&plane, 5, &l).unwrap(), crate::count_pn(2, 5, &Q).unwrap());
    }

    #[test]
    fn base_point_and_comparability() {
        let s12 = Scroll::new(1, 2, Q).unwrap();
        // 3 u + 5 w over [1:2]: (3, 6, 5, 10, 20).
        let p = pt(&[3, 6, 5, 10, 20]);
        assert_eq!(scroll_base_point(&s12, p.coords()).unwrap(), Some(pt(&[1, 2])));
        assert!(scroll_base_point(&s12, &ints(&[1, 0, 0, 0, 1])).is_err());
        let rep = measure_height_comparability(&s12, &[p, pt(&[1, 1, 0, 0, 0])]).unwrap();
        assert_eq!(rep.samples[0].psi_height, BigInt::from(8));
        assert_eq!(rep.samples[1].psi_height, BigInt::from(1));
        assert!(measure_height_comparability(&s12, &[]).is_err());
        let s03 = Scroll::new(0, 3, Q).unwrap();
        let rep = measure_height_comparability(&s03, &[pt(&[1, 0, 0, 0, 0])]).unwrap();
        assert_eq!(rep.skipped, 1);
    }
}
