//! Line-covered varieties: rational normal scrolls, the pencil through a
//! point of `P^n`, and the quadric cone.
//!
//! Each variety is counted two ways: by summing line counts over the base of
//! its fibration, and by scanning the ambient box against its defining
//! quadrics.

mod cone;
mod hypothesis;
mod pencil;
mod scroll;

pub use cone::{cone_profiles, cone_ruling, count_cone, count_cone_bruteforce, QuadricCone};
pub use hypothesis::{
    check_epsilon_hypothesis, fit_slope, ratio_f64, verify_theorem_bundle, BundleReport, EpsilonReport,
    EPSILON_PASS_CEILING,
};
pub use pencil::{count_pn_via_pencil, pencil_line, PencilDecomposition};
pub use scroll::{
    count_scroll_bruteforce, count_scroll_fibersum, fiber_min_height, measure_height_comparability, scroll_base_point,
    scroll_fiber, scroll_point_set_bruteforce, scroll_point_set_fibersum, scroll_profile_bruteforce,
    scroll_profile_fibersum, scroll_profiles, scroll_psi_height, ComparabilityReport, ComparabilitySample, Scroll,
};

use std::cell::Cell;

use rayon::prelude::*;

use crate::enumerate::{line_profile_lattice, HeightProfile, Limits};
use crate::error::{Error, Result};
use crate::kernel::{scan_box_pruned, sup_size, to_ring_vec, BoxPoints, Elem, UnitMode};
use crate::line::Line;

/// A homogeneous quadric `sum ± x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadric {
    pub terms: Vec<(bool, usize, usize)>,
}

impl Quadric {
    /// `x_i x_j - x_k x_l`.
    pub fn binomial(i: usize, j: usize, k: usize, l: usize) -> Self {
        Quadric { terms: vec![(true, i, j), (false, k, l)] }
    }

    fn max_index(&self) -> usize {
        self.terms.iter().map(|&(_, i, j)| i.max(j)).max().unwrap_or(0)
    }

    pub fn eval<E: Elem>(&self, x: &[E]) -> E {
        self.terms.iter().fold(E::zero(), |acc, &(plus, i, j)| {
            let t = x[i] * x[j];
            if plus {
                acc + t
            } else {
                acc - t
            }
        })
    }
}

/// Visits the canonical points of `{Q = 0 for all Q}` in `P^{dim-1}` with
/// `H <= bound`, pruning a prefix as soon as a quadric in its placed
/// coordinates fails.
pub(crate) fn ambient_scan<E: Elem>(
    dim: usize,
    quadrics: &[Quadric],
    bound: i64,
    limits: &Limits,
    f: &mut dyn FnMut(&[E]),
) -> Result<()> {
    let mut by_last: Vec<Vec<&Quadric>> = vec![Vec::new(); dim];
    for q in quadrics {
        by_last[q.max_index()].push(q);
    }
    let visited = Cell::new(0u64);
    let keep = |pos: usize, x: &[E]| -> bool {
        let v = visited.get() + 1;
        visited.set(v);
        v <= limits.max_candidates && by_last[pos].iter().all(|q| q.eval(x).is_zero())
    };
    scan_box_pruned::<E>(dim, &E::with_size_at_most(bound), UnitMode::Quotient, &keep, f);
    if visited.get() > limits.max_candidates {
        return Err(Error::ResourceLimit { needed: visited.get() as u128, limit: limits.max_candidates });
    }
    Ok(())
}

pub(crate) fn ambient_profile<E: Elem>(
    dim: usize,
    quadrics: &[Quadric],
    bound: u64,
    limits: &Limits,
) -> Result<HeightProfile> {
    let b = crate::enumerate::check_bound(bound)?;
    let mut prof = HeightProfile::new(bound);
    ambient_scan::<E>(dim, quadrics, b, limits, &mut |x| prof.record(sup_size(x)))?;
    Ok(prof)
}

/// A family of lines indexed by the points of a projective base.
pub(crate) struct Fibration<'a, E: Elem> {
    /// Coordinates of a base point, `base_dim` of them.
    pub base_dim: usize,
    /// Base points above this height carry no point of height `<= bound`
    /// other than `common`.
    pub base_radius: i64,
    /// Whether all fibers pass through one point of height 1.
    pub common: bool,
    pub fiber: &'a (dyn Fn(&[E]) -> Result<Line> + Sync),
}

impl<E: Elem> Fibration<'_, E> {
    fn base_points(&self, limits: &Limits) -> Result<Vec<Vec<E>>> {
        let choices = E::with_size_at_most(self.base_radius).len() as u128;
        let needed = choices.checked_pow(self.base_dim as u32).unwrap_or(u128::MAX);
        if needed > limits.max_candidates as u128 {
            return Err(Error::ResourceLimit { needed, limit: limits.max_candidates });
        }
        Ok(BoxPoints::<E>::new(self.base_dim, self.base_radius).collect())
    }

    /// Height profile of the union of the fibers, the common point once.
    pub fn profile(&self, bound: u64, limits: &Limits) -> Result<HeightProfile> {
        let base = self.base_points(limits)?;
        let nfib = base.len() as u64;
        let mut prof = base.par_iter().map(|p| line_profile_lattice(&(self.fiber)(p)?, bound, limits)).try_reduce(
            || HeightProfile::new(bound),
            |mut acc, part| {
                acc.merge(&part);
                Ok(acc)
            },
        )?;
        if self.common && nfib > 0 {
            prof.by_height[1] -= nfib - 1;
        }
        Ok(prof)
    }

    pub fn count(&self, bound: u64, limits: &Limits) -> Result<u64> {
        Ok(self.profile(bound, limits)?.total())
    }

    /// The union of the fibers' point sets, as canonical kernel vectors.
    pub fn point_set(&self, bound: u64, limits: &Limits) -> Result<std::collections::BTreeSet<Vec<E>>> {
        let base = self.base_points(limits)?;
        let mut out = std::collections::BTreeSet::new();
        for p in &base {
            let line = (self.fiber)(p)?;
            out.extend(crate::enumerate::line_points::<E>(&line, bound, limits)?);
        }
        Ok(out)
    }
}

/// `Line` through two kernel vectors.
pub(crate) fn kernel_line<E: Elem>(u: &[E], w: &[E]) -> Result<Line> {
    Line::new(to_ring_vec(u), to_ring_vec(w), E::CTX)
}

/// Largest `r` with `r^k <= b`.
pub(crate) fn int_root(b: u64, k: u32) -> i64 {
    if k == 0 {
        return i64::MAX;
    }
    let mut r = (b as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > b) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= b) {
        r += 1;
    }
    r as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roots() {
        assert_eq!(int_root(100, 2), 10);
        assert_eq!(int_root(99, 2), 9);
        assert_eq!(int_root(10_000, 4), 10);
        assert_eq!(int_root(9_999, 4), 9);
        assert_eq!(int_root(7, 1), 7);
        assert_eq!(int_root(1, 3), 1);
        assert_eq!(int_root(1000, 3), 10);
    }

    #[test]
    fn quadric_evaluation() {
        let q = Quadric::binomial(0, 3, 1, 2);
        assert!(q.eval::<i64>(&[2, 3, 4, 6]).is_zero());
        assert_eq!(q.eval::<i64>(&[1, 1, 1, 2]), 1);
    }
}
