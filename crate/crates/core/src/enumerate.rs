//! Counting points of bounded height on `P^n` and on lines.
//!
//! Three independent routes are kept apart on purpose:
//!
//! * ambient scans over the box of primitive vectors (`*_bruteforce`),
//! * a parametrized superset that solves for a line's points from two of
//!   their coordinates (`count_line_parametrized`),
//! * lattice enumeration in the saturated module `M` (`count_line_lattice`).
//!
//! "Modulo `K*`" is realized as primitive vectors modulo the finite unit
//! group, which for class number one is exactly one vector orbit per point.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldKind};
use crate::kernel::{
    content, scan_box, scan_box_pruned, sup_size, to_kernel, to_ring_vec, unit_normalize, BoxPoints, Elem,
    PlaneLattice, UnitMode,
};
use crate::line::{plucker_pairs, Line};
use crate::point::ProjectivePoint;
use crate::with_elem;

pub const DEFAULT_LIMIT: u64 = 100_000_000;

/// Ceiling on candidate vectors examined by one query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_candidates: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_candidates: DEFAULT_LIMIT }
    }
}

impl Limits {
    pub fn new(max_candidates: u64) -> Self {
        Limits { max_candidates }
    }

    fn check(&self, needed: u128) -> Result<()> {
        if needed > self.max_candidates as u128 {
            Err(Error::ResourceLimit { needed, limit: self.max_candidates })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn check_bound(bound: u64) -> Result<i64> {
    if bound == 0 {
        return Err(Error::InvalidArgument("height bound must be >= 1".into()));
    }
    i64::try_from(bound)
        .ok()
        .filter(|b| *b < (1 << 31))
        .ok_or_else(|| Error::Overflow(format!("bound {bound} too large")))
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("projective dimension must be >= 1".into()));
    }
    Ok(())
}

fn box_size<E: Elem>(dim: usize, bound: i64) -> u128 {
    let c = E::with_size_at_most(bound).len() as u128;
    c.checked_pow(dim as u32).unwrap_or(u128::MAX)
}

/// Counts of points by exact height, `by_height[h]` for `h <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightProfile {
    pub bound: u64,
    pub by_height: Vec<u64>,
}

impl HeightProfile {
    pub fn new(bound: u64) -> Self {
        HeightProfile { bound, by_height: vec![0; bound as usize + 1] }
    }

    pub fn record(&mut self, h: i64) {
        self.by_height[h as usize] += 1;
    }

    /// `N(b)` for `b <= bound`.
    pub fn count_at(&self, b: u64) -> u64 {
        assert!(b <= self.bound, "profile only covers heights up to {}", self.bound);
        self.by_height[..=b as usize].iter().sum()
    }

    pub fn merge(&mut self, other: &HeightProfile) {
        assert_eq!(self.bound, other.bound, "profiles with different bounds");
        for (a, b) in self.by_height.iter_mut().zip(&other.by_height) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.by_height.iter().sum()
    }
}

/// Every point of `P^n(K)` with `H <= bound`, canonical, each exactly once.
pub fn enumerate_pn(
    n: usize,
    bound: u64,
    ctx: &FieldContext,
    limits: &Limits,
) -> Result<Box<dyn Iterator<Item = ProjectivePoint> + Send>> {
    check_n(n)?;
    let b = check_bound(bound)?;
    with_elem!(ctx, E => {
        limits.check(box_size::<E>(n + 1, b))?;
        let it = BoxPoints::<E>::new(n + 1, b)
            .map(|v| ProjectivePoint::from_canonical_unchecked(to_ring_vec(&v)));
        Ok(Box::new(it))
    })
}

/// Number of points of `P^n(K)` with `H <= bound` by direct box scan.
pub fn count_pn_scan(n: usize, bound: u64, ctx: &FieldContext, limits: &Limits) -> Result<u64> {
    check_n(n)?;
    let b = check_bound(bound)?;
    with_elem!(ctx, E => {
        limits.check(box_size::<E>(n + 1, b))?;
        let mut count = 0u64;
        scan_box::<E>(n + 1, &E::with_size_at_most(b), UnitMode::Quotient, &mut |_| count += 1);
        Ok(count)
    })
}

/// Möbius function on `1..=m`.
fn mobius_table(m: usize) -> Vec<i8> {
    let mut mu = vec![1i8; m + 1];
    let mut is_comp = vec![false; m + 1];
    if m >= 1 {
        mu[0] = 0;
    }
    for p in 2..=m {
        if is_comp[p] {
            continue;
        }
        for k in (p..=m).step_by(p) {
            if k > p {
                is_comp[k] = true;
            }
            mu[k] = -mu[k];
        }
        let pp = p.saturating_mul(p);
        for k in (pp..=m).step_by(pp.max(1)) {
            mu[k] = 0;
        }
    }
    mu
}

/// `sum_{N(d) = k} mu(d)` over ideals of `Z[i]`: the Dirichlet coefficients
/// of `1/zeta_{Q(i)}(s) = 1/(zeta(s) L(s, chi_4))`, i.e. `mu * (mu chi_4)`.
fn gaussian_ideal_mobius(m: usize) -> Vec<i64> {
    let mu = mobius_table(m);
    let chi = |k: usize| -> i64 {
        match k % 4 {
            1 => 1,
            3 => -1,
            _ => 0,
        }
    };
    let mut a = vec![0i64; m + 1];
    for d in 1..=m {
        if mu[d] == 0 {
            continue;
        }
        for e in 1..=m / d {
            a[d * e] += mu[d] as i64 * mu[e] as i64 * chi(e);
        }
    }
    a
}

/// `#{(a, b) in Z^2 : a^2 + b^2 <= x}`.
fn gaussian_ball_count(x: u64) -> u128 {
    let x = x as i128;
    let r = crate::kernel::isqrt(x);
    (-r..=r).map(|a| (2 * crate::kernel::isqrt(x - a * a) + 1) as u128).sum()
}

/// Number of points of `P^n(K)` with `H <= bound`, by Möbius inversion over
/// the content ideal of nonzero integral vectors. No points are generated.
pub fn count_pn(n: usize, bound: u64, ctx: &FieldContext) -> Result<u64> {
    check_n(n)?;
    check_bound(bound)?;
    let m = bound as usize;
    let overflow = || Error::Overflow(format!("count of P^{n} at B={bound}"));
    let mut total: i128 = 0;
    match ctx.kind {
        FieldKind::Rational => {
            let mu = mobius_table(m);
            for d in 1..=m {
                if mu[d] == 0 {
                    continue;
                }
                let side = (2 * (bound / d as u64) + 1) as i128;
                let vecs = side.checked_pow(n as u32 + 1).ok_or_else(overflow)? - 1;
                total = total.checked_add(mu[d] as i128 * vecs).ok_or_else(overflow)?;
            }
            total /= 2;
        }
        FieldKind::Gaussian => {
            let a = gaussian_ideal_mobius(m);
            for k in 1..=m {
                if a[k] == 0 {
                    continue;
                }
                let g = gaussian_ball_count(bound / k as u64) as i128;
                let vecs = g.checked_pow(n as u32 + 1).ok_or_else(overflow)? - 1;
                total =
                    total.checked_add((a[k] as i128).checked_mul(vecs).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
            total /= 4;
        }
    }
    total.to_u64().ok_or_else(overflow)
}

/// Kernel view of a line: reduced plane lattice plus its Plücker entries.
pub struct KernelLine<E: Elem> {
    pub plane: PlaneLattice<E>,
    pub plucker: Vec<E>,
    pub dim: usize,
}

impl<E: Elem> KernelLine<E> {
    pub fn new(line: &Line) -> Result<Self> {
        if line.ctx() != E::CTX {
            return Err(Error::InvalidArgument("line field does not match kernel".into()));
        }
        let [u, w] = line.lattice().basis();
        let plane = PlaneLattice::new(to_kernel(u)?, to_kernel(w)?)?;
        let plucker = to_kernel(line.plucker().entries())?;
        Ok(KernelLine { plane, plucker, dim: line.ambient_dim() + 1 })
    }

    /// Antisymmetric extension `P(i, j)` of the Plücker entries.
    fn p(&self, i: usize, j: usize) -> E {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => E::zero(),
            Less => self.plucker[pair_index(self.dim, i, j)],
            Greater => -self.plucker[pair_index(self.dim, j, i)],
        }
    }
}

fn pair_index(m: usize, i: usize, j: usize) -> usize {
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// `(i, j, p_jk, p_ik, p_ij)`: `x_i p_jk - x_j p_ik + x_k p_ij = 0`.
type Relation<E> = (usize, usize, E, E, E);

/// Point-of-line relations grouped by their largest coordinate index, for
/// pruning partial vectors during ambient scans.
fn relations_by_last<E: Elem>(kl: &KernelLine<E>) -> Vec<Vec<Relation<E>>> {
    let m = kl.dim;
    let mut out = vec![Vec::new(); m];
    for k in 0..m {
        for i in 0..k {
            for j in i + 1..k {
                out[k].push((i, j, kl.p(j, k), kl.p(i, k), kl.p(i, j)));
            }
        }
    }
    out
}

fn line_scan<E: Elem>(
    kl: &KernelLine<E>,
    b: i64,
    mode: UnitMode,
    limits: &Limits,
    f: &mut dyn FnMut(&[E]),
) -> Result<()> {
    let rels = relations_by_last(kl);
    let visited = std::cell::Cell::new(0u64);
    let over = std::cell::Cell::new(false);
    let keep = |pos: usize, x: &[E]| -> bool {
        let v = visited.get() + 1;
        visited.set(v);
        if v > limits.max_candidates {
            over.set(true);
            return false;
        }
        rels[pos].iter().all(|&(i, j, pjk, pik, pij)| (x[i] * pjk - x[j] * pik + x[pos] * pij).is_zero())
    };
    scan_box_pruned::<E>(kl.dim, &E::with_size_at_most(b), mode, &keep, f);
    if over.get() {
        return Err(Error::ResourceLimit { needed: visited.get() as u128, limit: limits.max_candidates });
    }
    Ok(())
}

/// `N_L(B)` by scanning the ambient box of `P^n` and keeping the points that
/// satisfy `x ∧ p = 0` exactly. Partial vectors violating a relation among
/// their placed coordinates are pruned.
pub fn count_line_bruteforce(line: &Line, bound: u64, limits: &Limits) -> Result<u64> {
    let b = check_bound(bound)?;
    with_elem!(line.ctx(), E => {
        let kl = KernelLine::<E>::new(line)?;
        let mut count = 0u64;
        line_scan(&kl, b, UnitMode::Quotient, limits, &mut |_| count += 1)?;
        Ok(count)
    })
}

/// Ambient-scan height profile of a line up to `bound`.
pub fn line_profile_bruteforce(line: &Line, bound: u64, limits: &Limits) -> Result<HeightProfile> {
    let b = check_bound(bound)?;
    with_elem!(line.ctx(), E => {
        let kl = KernelLine::<E>::new(line)?;
        let mut prof = HeightProfile::new(bound);
        line_scan(&kl, b, UnitMode::Quotient, limits, &mut |x| prof.record(sup_size(x)))?;
        Ok(prof)
    })
}

/// `N_L(B)` from a superset parametrized by two coordinates `(x_i, x_j)`
/// with `p_ij != 0`: the rest of the vector is forced by
/// `x_k p_ij = x_i P(k, j) + x_j P(i, k)`.
pub fn count_line_parametrized(line: &Line, bound: u64, limits: &Limits) -> Result<u64> {
    let b = check_bound(bound)?;
    with_elem!(line.ctx(), E => {
        let kl = KernelLine::<E>::new(line)?;
        parametrized::<E>(&kl, b, limits)
    })
}

fn parametrized<E: Elem>(kl: &KernelLine<E>, b: i64, limits: &Limits) -> Result<u64> {
    let m = kl.dim;
    let (i, j) = plucker_pairs(m - 1).into_iter().max_by_key(|&(i, j)| kl.p(i, j).abs2()).expect("at least one pair");
    let pij = kl.p(i, j);
    let choices = E::with_size_at_most(b);
    limits.check((choices.len() as u128).pow(2))?;
    let mut x = vec![E::zero(); m];
    let mut count = 0u64;
    for &xi in &choices {
        'pair: for &xj in &choices {
            if xi.is_zero() && xj.is_zero() {
                continue;
            }
            for k in 0..m {
                x[k] = if k == i {
                    xi
                } else if k == j {
                    xj
                } else {
                    match (xi * kl.p(k, j) + xj * kl.p(i, k)).div_exact(pij) {
                        Some(v) if v.size() <= b => v,
                        _ => continue 'pair,
                    }
                };
            }
            let lead = x.iter().find(|c| !c.is_zero()).expect("nonzero");
            if lead.is_canonical() && content(&x).is_unit() {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn lattice_visit<E: Elem>(line: &Line, b: i64, mode: UnitMode, limits: &Limits, f: &mut dyn FnMut(&[E])) -> Result<()> {
    let kl = KernelLine::<E>::new(line)?;
    kl.plane.for_each_primitive(b, mode, limits.max_candidates, &mut |_, _, v| f(v))?;
    Ok(())
}

/// `N_L(B)` by enumerating primitive vectors of the saturated lattice `M`
/// with every coordinate of size `<= B`, one per unit orbit.
pub fn count_line_lattice(line: &Line, bound: u64, limits: &Limits) -> Result<u64> {
    count_line_lattice_mode(line, bound, UnitMode::Quotient, limits)
}

/// Like [`count_line_lattice`] but without the unit quotient: every
/// primitive vector is counted, so the result is `|units| * N_L(B)`.
pub fn count_line_lattice_raw(line: &Line, bound: u64, limits: &Limits) -> Result<u64> {
    count_line_lattice_mode(line, bound, UnitMode::Raw, limits)
}

pub fn count_line_lattice_mode(line: &Line, bound: u64, mode: UnitMode, limits: &Limits) -> Result<u64> {
    let b = check_bound(bound)?;
    with_elem!(line.ctx(), E => {
        let mut count = 0u64;
        lattice_visit::<E>(line, b, mode, limits, &mut |_| count += 1)?;
        Ok(count)
    })
}

/// Lattice-route height profile of a line up to `bound`.
pub fn line_profile_lattice(line: &Line, bound: u64, limits: &Limits) -> Result<HeightProfile> {
    let b = check_bound(bound)?;
    with_elem!(line.ctx(), E => {
        let mut prof = HeightProfile::new(bound);
        lattice_visit::<E>(line, b, UnitMode::Quotient, limits, &mut |v| prof.record(sup_size(v)))?;
        Ok(prof)
    })
}

/// Points of the line with `H <= bound` as canonical kernel vectors.
pub fn line_points<E: Elem>(line: &Line, bound: u64, limits: &Limits) -> Result<Vec<Vec<E>>> {
    let b = check_bound(bound)?;
    let mut out = Vec::new();
    lattice_visit::<E>(line, b, UnitMode::Quotient, limits, &mut |v| {
        let mut v = v.to_vec();
        unit_normalize(&mut v);
        out.push(v);
    })?;
    Ok(out)
}

/// Smallest height of a point on the line, found by doubling the bound
/// until the lattice enumeration returns a point.
pub fn line_min_height(line: &Line, limits: &Limits) -> Result<u64> {
    let mut b: u64 = 1;
    loop {
        let prof = line_profile_lattice(line, b, limits)?;
        if let Some(h) = prof.by_height.iter().position(|&c| c > 0) {
            return Ok(h as u64);
        }
        b = b.checked_mul(2).ok_or_else(|| Error::Overflow("minimum search".into()))?;
    }
}

/// `H(L)` as a machine integer, for campaign bookkeeping.
pub fn plucker_height_u64(line: &Line) -> Result<u64> {
    let h: BigInt = crate::line::plucker_height(line);
    h.to_u64().ok_or_else(|| Error::Overflow(format!("line height {h}")))
}
