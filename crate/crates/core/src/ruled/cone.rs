//! The quadric cone `x_0 x_2 = x_1^2` in `P^3`, ruled by the lines joining
//! the vertex `[0:0:0:1]` to the conic `[s^2 : st : t^2 : 0]`.

use super::{ambient_profile, int_root, kernel_line, Fibration, Quadric};
use crate::enumerate::{check_bound, HeightProfile, Limits};
use crate::error::{Error, Result};
use crate::field::{FieldContext, RingElement};
use crate::kernel::{to_kernel, Elem};
use crate::line::Line;
use crate::point::ProjectivePoint;
use crate::with_elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadricCone {
    pub ctx: FieldContext,
}

impl QuadricCone {
    pub fn new(ctx: FieldContext) -> Self {
        QuadricCone { ctx }
    }

    pub fn equation() -> Quadric {
        Quadric::binomial(0, 2, 1, 1)
    }

    pub fn vertex(&self) -> ProjectivePoint {
        let c = [0, 0, 0, 1].map(crate::field::int).to_vec();
        ProjectivePoint::from_canonical_unchecked(c)
    }
}

fn ruling<E: Elem>(st: &[E]) -> Result<Line> {
    let (s, t) = (st[0], st[1]);
    kernel_line(&[s * s, s * t, t * t, E::zero()], &[E::zero(), E::zero(), E::zero(), E::one()])
}

/// The ruling through the vertex and `[s^2 : st : t^2 : 0]`.
pub fn cone_ruling(cone: &QuadricCone, basept: &ProjectivePoint) -> Result<Line> {
    let coords: &[RingElement] = basept.coords();
    if coords.len() != 2 {
        return Err(Error::DimensionMismatch("base point must lie on P^1".into()));
    }
    with_elem!(&cone.ctx, E => ruling::<E>(&to_kernel::<E>(coords)?))
}

fn with_fibration<E: Elem, R>(bound: u64, f: impl FnOnce(&Fibration<'_, E>) -> Result<R>) -> Result<R> {
    let fiber = |p: &[E]| ruling(p);
    // Off the vertex, lambda (s^2, st, t^2) has lambda != 0 and height at
    // least H(s:t)^2.
    f(&Fibration { base_dim: 2, base_radius: int_root(bound, 2), common: true, fiber: &fiber })
}

/// Height profiles `(fiber sum, ambient scan)` up to `bound`.
pub fn cone_profiles(cone: &QuadricCone, bound: u64, limits: &Limits) -> Result<(HeightProfile, HeightProfile)> {
    check_bound(bound)?;
    with_elem!(&cone.ctx, E => {
        let fibers = with_fibration::<E, _>(bound, |f| f.profile(bound, limits))?;
        let brute = ambient_profile::<E>(4, &[QuadricCone::equation()], bound, limits)?;
        Ok((fibers, brute))
    })
}

/// `N(B)` on the cone: `1 + sum over rulings of (N_L(B) - 1)`.
pub fn count_cone(bound: u64, ctx: &FieldContext, limits: &Limits) -> Result<u64> {
    check_bound(bound)?;
    with_elem!(ctx, E => with_fibration::<E, _>(bound, |f| f.count(bound, limits)))
}

/// `N(B)` on the cone by scanning `P^3` against `x_0 x_2 = x_1^2`.
pub fn count_cone_bruteforce(bound: u64, ctx: &FieldContext, limits: &Limits) -> Result<u64> {
    with_elem!(ctx, E => Ok(ambient_profile::<E>(4, &[QuadricCone::equation()], bound, limits)?.total()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: the coordinate box with plain integer filtering.
    fn cone_oracle(b: i64) -> u64 {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let mut n = 0;
        for x0 in -b..=b {
            for x1 in -b..=b {
                for x2 in -b..=b {
                    if x0 * x2 != x1 * x1 {
                        continue;
                    }
                    for x3 in -b..=b {
                        let v = [x0, x1, x2, x3];
                        let g = v.iter().fold(0, |g, &x| gcd(g, x));
                        if g == 1 && v.iter().rev().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn cone_counts() {
        let l = Limits::default();
        let q = FieldContext::RATIONAL;
        for b in [1, 2, 3, 7, 12] {
            let oracle = cone_oracle(b);
            assert_eq!(count_cone(b as u64, &q, &l).unwrap(), oracle, "B={b}");
            assert_eq!(count_cone_bruteforce(b as u64, &q, &l).unwrap(), oracle);
        }
        let qi = FieldContext::GAUSSIAN;
        for b in [1, 2, 5] {
            assert_eq!(count_cone(b, &qi, &l).unwrap(), count_cone_bruteforce(b, &qi, &l).unwrap());
        }
    }

    #[test]
    fn vertex_on_every_ruling() {
        let cone = QuadricCone::new(FieldContext::RATIONAL);
        for s in ["[1:0]", "[0:1]", "[2:3]"] {
            let l = cone_ruling(&cone, &s.parse().unwrap()).unwrap();
            assert!(l.contains(cone.vertex().coords()));
        }
    }
}
