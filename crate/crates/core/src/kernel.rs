//! Machine-integer enumeration kernels.
//!
//! The public types carry arbitrary-precision coordinates; the hot loops run
//! on `i64` (for `Z`) and `Gaussian<i64>` (for `Z[i]`) through the [`Elem`]
//! trait. Conversions into the kernel are checked, and all intermediate
//! products that can outgrow `i64` are formed in `i128`.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldKind, RingElement};
use crate::gaussian::Gaussian;

pub type GaussInt = Gaussian<i64>;

/// Ring operations needed by the enumeration kernels.
pub trait Elem:
    Copy
    + Eq
    + Ord
    + Hash
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const CTX: FieldContext;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(self) -> bool;
    fn units() -> &'static [Self];
    /// Height contribution at the archimedean place: `|x|` or `N(x)`.
    fn size(self) -> i64;
    /// Squared Euclidean modulus `|x|^2`.
    fn abs2(self) -> i128;
    /// `self * conj(other)` as `(re, im)`.
    fn herm(self, other: Self) -> (i128, i128);
    fn gcd(self, other: Self) -> Self;
    fn is_unit(self) -> bool {
        self.size() == 1
    }
    /// The unit-position rule used for canonical representatives.
    fn is_canonical(self) -> bool;
    fn div_exact(self, d: Self) -> Option<Self>;
    /// Nearest element to `(re + im·i) / den`, `den > 0`.
    fn round_quotient(re: i128, im: i128, den: i128) -> Self;
    /// Converts an `abs2` bound for the size: `size(x) <= b` iff `abs2(x) <= abs2_of_size(b)`.
    fn abs2_of_size(b: i64) -> i128;
    /// Every element with `abs2(x) <= r2`.
    fn for_each_in_ball(r2: i128, f: &mut dyn FnMut(Self));
    /// Every `a` with `size(a·c + d) <= bound`, for `c != 0`.
    fn for_each_solution(c: Self, d: Self, bound: i64, f: &mut dyn FnMut(Self));
    fn to_ring(self) -> RingElement;
    fn from_ring(x: &RingElement) -> Result<Self>;

    /// All elements of size at most `bound`, sorted.
    fn with_size_at_most(bound: i64) -> Vec<Self> {
        let mut v = Vec::new();
        Self::for_each_in_ball(Self::abs2_of_size(bound), &mut |x| v.push(x));
        v.sort();
        v
    }
}

static RATIONAL_UNITS: [i64; 2] = [1, -1];
static GAUSSIAN_UNITS: [GaussInt; 4] =
    [Gaussian::new(1, 0), Gaussian::new(0, 1), Gaussian::new(-1, 0), Gaussian::new(0, -1)];

fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&(-a), &b)
}

fn round_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&(2 * a + b), &(2 * b))
}

pub(crate) fn isqrt(x: i128) -> i128 {
    debug_assert!(x >= 0);
    (x as u128).isqrt() as i128
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .filter(|v| v.unsigned_abs() < (1u64 << 40))
        .ok_or_else(|| Error::Overflow(format!("coordinate {x} too large for the kernel")))
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("kernel value fits in i64")
}

impl Elem for i64 {
    const CTX: FieldContext = FieldContext::RATIONAL;

    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(self) -> bool {
        self == 0
    }
    fn units() -> &'static [Self] {
        &RATIONAL_UNITS
    }
    fn size(self) -> i64 {
        self.abs()
    }
    fn abs2(self) -> i128 {
        (self as i128) * (self as i128)
    }
    fn herm(self, other: Self) -> (i128, i128) {
        ((self as i128) * (other as i128), 0)
    }
    fn gcd(self, other: Self) -> Self {
        Integer::gcd(&self, &other)
    }
    fn is_canonical(self) -> bool {
        self > 0
    }
    fn div_exact(self, d: Self) -> Option<Self> {
        if d != 0 && self % d == 0 {
            Some(self / d)
        } else {
            None
        }
    }
    fn round_quotient(re: i128, _im: i128, den: i128) -> Self {
        narrow(round_div(re, den))
    }
    fn abs2_of_size(b: i64) -> i128 {
        (b as i128) * (b as i128)
    }
    fn for_each_in_ball(r2: i128, f: &mut dyn FnMut(Self)) {
        if r2 < 0 {
            return;
        }
        let r = narrow(isqrt(r2));
        for x in -r..=r {
            f(x);
        }
    }
    fn for_each_solution(c: Self, d: Self, bound: i64, f: &mut dyn FnMut(Self)) {
        // |a c + d| <= bound
        let (c, d, b) = (c as i128, d as i128, bound as i128);
        let (lo, hi) =
            if c > 0 { (ceil_div(-b - d, c), floor_div(b - d, c)) } else { (ceil_div(b - d, c), floor_div(-b - d, c)) };
        for a in lo..=hi {
            f(narrow(a));
        }
    }
    fn to_ring(self) -> RingElement {
        Gaussian::new(BigInt::from(self), BigInt::from(0))
    }
    fn from_ring(x: &RingElement) -> Result<Self> {
        if x.im != BigInt::from(0) {
            return Err(Error::NotInField(x.to_string()));
        }
        to_i64(&x.re)
    }
}

impl Elem for GaussInt {
    const CTX: FieldContext = FieldContext::GAUSSIAN;

    fn zero() -> Self {
        Gaussian::new(0, 0)
    }
    fn one() -> Self {
        Gaussian::new(1, 0)
    }
    fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }
    fn units() -> &'static [Self] {
        &GAUSSIAN_UNITS
    }
    fn size(self) -> i64 {
        self.norm()
    }
    fn abs2(self) -> i128 {
        let (a, b) = (self.re as i128, self.im as i128);
        a * a + b * b
    }
    fn herm(self, other: Self) -> (i128, i128) {
        let (a, b) = (self.re as i128, self.im as i128);
        let (c, d) = (other.re as i128, other.im as i128);
        (a * c + b * d, b * c - a * d)
    }
    fn gcd(self, other: Self) -> Self {
        Gaussian::gcd(&self, &other)
    }
    fn is_canonical(self) -> bool {
        self.in_canonical_quadrant()
    }
    fn div_exact(self, d: Self) -> Option<Self> {
        Gaussian::div_exact(&self, &d)
    }
    fn round_quotient(re: i128, im: i128, den: i128) -> Self {
        Gaussian::new(narrow(round_div(re, den)), narrow(round_div(im, den)))
    }
    fn abs2_of_size(b: i64) -> i128 {
        b as i128
    }
    fn for_each_in_ball(r2: i128, f: &mut dyn FnMut(Self)) {
        if r2 < 0 {
            return;
        }
        let r = isqrt(r2);
        for a in -r..=r {
            let t = isqrt(r2 - a * a);
            for b in -t..=t {
                f(Gaussian::new(narrow(a), narrow(b)));
            }
        }
    }
    fn for_each_solution(c: Self, d: Self, bound: i64, f: &mut dyn FnMut(Self)) {
        // N(a c + d) <= bound  <=>  N(a D + d conj(c)) <= bound D,  D = N(c).
        let den = c.abs2();
        let (er, ei) = d.herm(c);
        let rhs = bound as i128 * den;
        if rhs < 0 {
            return;
        }
        let s = isqrt(rhs);
        for a in ceil_div(-s - er, den)..=floor_div(s - er, den) {
            let x = a * den + er;
            let t = isqrt(rhs - x * x);
            for b in ceil_div(-t - ei, den)..=floor_div(t - ei, den) {
                f(Gaussian::new(narrow(a), narrow(b)));
            }
        }
    }
    fn to_ring(self) -> RingElement {
        Gaussian::new(BigInt::from(self.re), BigInt::from(self.im))
    }
    fn from_ring(x: &RingElement) -> Result<Self> {
        Ok(Gaussian::new(to_i64(&x.re)?, to_i64(&x.im)?))
    }
}

/// Runs `$body` with `$E` bound to the kernel element type of `$ctx`.
#[macro_export]
macro_rules! with_elem {
    ($ctx:expr, $E:ident => $body:expr) => {
        match $ctx.kind {
            $crate::field::FieldKind::Rational => {
                type $E = i64;
                $body
            }
            $crate::field::FieldKind::Gaussian => {
                type $E = $crate::kernel::GaussInt;
                $body
            }
        }
    };
}

pub fn to_kernel<E: Elem>(v: &[RingElement]) -> Result<Vec<E>> {
    v.iter().map(E::from_ring).collect()
}

pub fn to_ring_vec<E: Elem>(v: &[E]) -> Vec<RingElement> {
    v.iter().map(|x| x.to_ring()).collect()
}

/// `max_j size(v_j)`.
pub fn sup_size<E: Elem>(v: &[E]) -> i64 {
    v.iter().map(|x| x.size()).max().unwrap_or(0)
}

pub fn content<E: Elem>(v: &[E]) -> E {
    v.iter().fold(E::zero(), |g, &x| g.gcd(x))
}

/// True iff `v` is primitive and its first nonzero coordinate is canonical.
pub fn is_canonical_primitive<E: Elem>(v: &[E]) -> bool {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => lead.is_canonical() && content(v).is_unit(),
        None => false,
    }
}

/// Multiplies `v` by the unit that makes its first nonzero coordinate
/// canonical.
pub fn unit_normalize<E: Elem>(v: &mut [E]) {
    let Some(&lead) = v.iter().find(|x| !x.is_zero()) else { return };
    let &u = E::units().iter().find(|&&u| (lead * u).is_canonical()).expect("some unit multiple is canonical");
    if u != E::one() {
        v.iter_mut().for_each(|x| *x = *x * u);
    }
}

/// Whether the unit action is quotiented out when counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitMode {
    /// One representative per point (canonical unit position).
    Quotient,
    /// Every primitive vector, i.e. each point counted `|units|` times.
    Raw,
}

/// Visits each primitive vector with `max size <= bound` in the `dim`-fold
/// product, restricted to canonical representatives under
/// [`UnitMode::Quotient`]. Coordinates are drawn from `choices` (which must be
/// every element of size `<= bound`).
pub fn scan_box<E: Elem>(dim: usize, choices: &[E], mode: UnitMode, f: &mut dyn FnMut(&[E])) {
    scan_box_pruned(dim, choices, mode, &|_, _| true, f);
}

/// [`scan_box`] with exact pruning: after coordinate `pos` is placed,
/// `keep(pos, prefix)` may return `false` when no completion of `prefix` can
/// be accepted.
pub fn scan_box_pruned<E: Elem>(
    dim: usize,
    choices: &[E],
    mode: UnitMode,
    keep: &dyn Fn(usize, &[E]) -> bool,
    f: &mut dyn FnMut(&[E]),
) {
    let mut buf = vec![E::zero(); dim];
    let mut scan = Scan { choices, mode, keep, f };
    scan.rec(0, false, E::zero(), &mut buf);
}

struct Scan<'a, E> {
    choices: &'a [E],
    mode: UnitMode,
    keep: &'a dyn Fn(usize, &[E]) -> bool,
    f: &'a mut dyn FnMut(&[E]),
}

impl<E: Elem> Scan<'_, E> {
    fn rec(&mut self, pos: usize, seen_nonzero: bool, g: E, buf: &mut [E]) {
        if pos == buf.len() {
            if seen_nonzero && g.is_unit() {
                (self.f)(&*buf);
            }
            return;
        }
        for k in 0..self.choices.len() {
            let x = self.choices[k];
            if !seen_nonzero && !x.is_zero() && self.mode == UnitMode::Quotient && !x.is_canonical() {
                continue;
            }
            buf[pos] = x;
            if !(self.keep)(pos, &buf[..=pos]) {
                continue;
            }
            let g2 = if g.is_unit() { g } else { g.gcd(x) };
            self.rec(pos + 1, seen_nonzero || !x.is_zero(), g2, buf);
        }
    }
}

/// Streaming odometer over the canonical primitive vectors of a box.
pub struct BoxPoints<E: Elem> {
    choices: Vec<E>,
    idx: Vec<usize>,
    done: bool,
}

impl<E: Elem> BoxPoints<E> {
    pub fn new(dim: usize, bound: i64) -> Self {
        let choices = E::with_size_at_most(bound);
        BoxPoints { idx: vec![0; dim], done: choices.is_empty() || dim == 0, choices }
    }

    fn advance(&mut self) {
        for k in (0..self.idx.len()).rev() {
            self.idx[k] += 1;
            if self.idx[k] < self.choices.len() {
                return;
            }
            self.idx[k] = 0;
        }
        self.done = true;
    }
}

impl<E: Elem> Iterator for BoxPoints<E> {
    type Item = Vec<E>;

    fn next(&mut self) -> Option<Vec<E>> {
        while !self.done {
            let v: Vec<E> = self.idx.iter().map(|&k| self.choices[k]).collect();
            self.advance();
            if is_canonical_primitive(&v) {
                return Some(v);
            }
        }
        None
    }
}

/// A rank-2 module `Z_K u + Z_K w` inside `Z_K^{n+1}` with a reduced basis,
/// ready for bounded enumeration.
#[derive(Clone, Debug)]
pub struct PlaneLattice<E: Elem> {
    pub u: Vec<E>,
    pub w: Vec<E>,
    /// `|u|^2`.
    pub g11: i128,
    /// Hermitian Gram determinant `|u|^2 |w|^2 - |<u,w>|^2`.
    pub gram_det: i128,
    pivot: usize,
}

fn herm_dot<E: Elem>(x: &[E], y: &[E]) -> (i128, i128) {
    x.iter().zip(y).fold((0, 0), |(r, i), (&a, &b)| {
        let (pr, pi) = a.herm(b);
        (r + pr, i + pi)
    })
}

fn norm2<E: Elem>(x: &[E]) -> i128 {
    x.iter().map(|a| a.abs2()).sum()
}

impl<E: Elem> PlaneLattice<E> {
    /// Lagrange-reduces `(u, w)` under the Hermitian inner product.
    pub fn new(mut u: Vec<E>, mut w: Vec<E>) -> Result<Self> {
        if u.len() != w.len() {
            return Err(Error::DimensionMismatch("basis vectors differ in length".into()));
        }
        if norm2(&u) > norm2(&w) {
            std::mem::swap(&mut u, &mut w);
        }
        loop {
            let nu = norm2(&u);
            if nu == 0 {
                return Err(Error::DegenerateSpan);
            }
            let (re, im) = herm_dot(&w, &u);
            let q = E::round_quotient(re, im, nu);
            if !q.is_zero() {
                for (wj, &uj) in w.iter_mut().zip(&u) {
                    *wj = *wj - q * uj;
                }
            }
            if norm2(&w) < nu {
                std::mem::swap(&mut u, &mut w);
            } else {
                break;
            }
        }
        let g11 = norm2(&u);
        let g22 = norm2(&w);
        let (re, im) = herm_dot(&u, &w);
        let gram_det = g11 * g22 - (re * re + im * im);
        if gram_det <= 0 {
            return Err(Error::DegenerateSpan);
        }
        let pivot = (0..u.len()).max_by_key(|&j| u[j].abs2()).expect("nonempty");
        Ok(PlaneLattice { u, w, g11, gram_det, pivot })
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// Visits every vector `v = a u + b w` with `gcd(a, b)` a unit and
    /// `max_j size(v_j) <= bound`, calling `f(a, b, v)`. Under
    /// [`UnitMode::Quotient`] exactly one vector per unit orbit is visited:
    /// the one whose first nonzero coefficient of `(b, a)` is canonical.
    ///
    /// Every such `v` satisfies `|v|^2 <= (n+1)·abs2_of_size(bound)`, and
    /// projecting orthogonally to `u` gives `|b|^2 · gram_det <= |v|^2 · |u|^2`,
    /// which bounds the outer loop over `b`. The inner loop solves the
    /// pivot coordinate exactly and checks the remaining ones.
    pub fn for_each_primitive(
        &self,
        bound: i64,
        mode: UnitMode,
        limit: u64,
        f: &mut dyn FnMut(E, E, &[E]),
    ) -> Result<u64> {
        let n1 = self.dim() as i128;
        let r2 = n1 * E::abs2_of_size(bound);
        let beta_r2 =
            r2.checked_mul(self.g11).ok_or_else(|| Error::Overflow("coefficient bound".into()))? / self.gram_det;
        let mut visited: u64 = 0;
        let mut over = false;
        let mut buf = vec![E::zero(); self.dim()];

        // b = 0: only unit multiples of u are primitive.
        if sup_size(&self.u) <= bound {
            for &a in E::units() {
                if mode == UnitMode::Quotient && a != E::one() {
                    continue;
                }
                buf.iter_mut().zip(&self.u).for_each(|(x, &uj)| *x = a * uj);
                f(a, E::zero(), &buf);
            }
        }

        let (p, up) = (self.pivot, self.u[self.pivot]);
        E::for_each_in_ball(beta_r2, &mut |b| {
            if over || b.is_zero() || (mode == UnitMode::Quotient && !b.is_canonical()) {
                return;
            }
            visited += 1;
            let d = b * self.w[p];
            E::for_each_solution(up, d, bound, &mut |a| {
                if over {
                    return;
                }
                visited += 1;
                if visited > limit {
                    over = true;
                    return;
                }
                for j in 0..buf.len() {
                    let x = a * self.u[j] + b * self.w[j];
                    if x.size() > bound {
                        return;
                    }
                    buf[j] = x;
                }
                if a.gcd(b).is_unit() {
                    f(a, b, &buf);
                }
            });
        });
        if over {
            return Err(Error::ResourceLimit { needed: visited as u128, limit });
        }
        Ok(visited)
    }
}

pub fn ctx_kind<E: Elem>() -> FieldKind {
    E::CTX.kind
}
