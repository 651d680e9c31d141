//! Gaussian integers `a + b·i` over a generic integer type.
//!
//! The same type carries both supported rings: rational integers are the
//! elements with `im == 0`, and every operation here maps that subring into
//! itself (in particular the nearest-integer Euclidean quotient of two real
//! elements is real).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::Signed;

/// A Gaussian integer `re + im·i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T> Gaussian<T> {
    pub const fn new(re: T, im: T) -> Self {
        Gaussian { re, im }
    }
}

impl<T: Clone + Integer + Signed> Gaussian<T> {
    pub fn real(re: T) -> Self {
        Gaussian { re, im: T::zero() }
    }

    pub fn zero() -> Self {
        Gaussian::real(T::zero())
    }

    pub fn one() -> Self {
        Gaussian::real(T::one())
    }

    pub fn i() -> Self {
        Gaussian::new(T::zero(), T::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`.
    pub fn norm(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// The four units in the order `1, i, -1, -i`.
    pub fn units() -> [Self; 4] {
        [Gaussian::one(), Gaussian::i(), -Gaussian::one(), -Gaussian::i()]
    }

    /// True iff `re > 0` and `im >= 0`: the canonical quadrant.
    pub fn in_canonical_quadrant(&self) -> bool {
        self.re.is_positive() && !self.im.is_negative()
    }

    /// Returns `(c, u)` with `c = u·self` in the canonical quadrant.
    ///
    /// When `real_units_only` is set the search is restricted to `±1`, which
    /// is the unit group of `Z`; for a real nonzero input the result then has
    /// `c > 0`. Returns `None` for zero.
    pub fn unit_normalize(&self, real_units_only: bool) -> Option<(Self, Self)> {
        if self.is_zero() {
            return None;
        }
        let units = Self::units();
        let step = if real_units_only { 2 } else { 1 };
        units.iter().step_by(step).map(|u| (u.clone() * self.clone(), u.clone())).find(|(c, _)| {
            if real_units_only {
                c.re.is_positive() || (c.re.is_zero() && c.im.is_positive())
            } else {
                c.in_canonical_quadrant()
            }
        })
    }

    /// Nearest-integer quotient `round(self / d)` (ties rounded up).
    pub fn div_round(&self, d: &Self) -> Self {
        let n = d.norm();
        let num = self.clone() * d.conj();
        Gaussian::new(round_div(&num.re, &n), round_div(&num.im, &n))
    }

    /// Euclidean division: `self = q·d + r` with `N(r) <= N(d)/2`.
    pub fn div_rem_round(&self, d: &Self) -> (Self, Self) {
        let q = self.div_round(d);
        let r = self.clone() - q.clone() * d.clone();
        (q, r)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let num = self.clone() * d.conj();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(Gaussian::new(qr, qi))
        } else {
            None
        }
    }

    pub fn divides(&self, x: &Self) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        x.div_exact(self).is_some()
    }

    /// A greatest common divisor (defined up to a unit).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem_round(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Returns `(g, x, y)` with `self·x + other·y = g`, `g` a gcd.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem_round(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0 - q.clone() * s1.clone();
            s0 = std::mem::replace(&mut s1, s);
            let t = t0 - q * t1.clone();
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }
}

/// `round(a / n)` for `n > 0`, halves rounded towards `+inf`.
fn round_div<T: Clone + Integer + Signed>(a: &T, n: &T) -> T {
    let two = T::one() + T::one();
    (two.clone() * a.clone() + n.clone()).div_floor(&(two * n.clone()))
}

impl<T: Clone + Integer + Signed> Add for Gaussian<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Gaussian::new(self.re + o.re, self.im + o.im)
    }
}

impl<T: Clone + Integer + Signed> Sub for Gaussian<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Gaussian::new(self.re - o.re, self.im - o.im)
    }
}

impl<T: Clone + Integer + Signed> Mul for Gaussian<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Gaussian::new(re, im)
    }
}

impl<T: Clone + Integer + Signed> Neg for Gaussian<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Gaussian::new(-self.re, -self.im)
    }
}

impl<T: Clone + Integer + Signed + fmt::Display> fmt::Display for Gaussian<T> {
    /// Renders `a`, `bi`, `a+bi` or `a-bi`, omitting a unit imaginary
    /// coefficient (`1+i`, `-i`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let imag = |f: &mut fmt::Formatter<'_>, v: &T, leading: bool| -> fmt::Result {
            let neg = v.is_negative();
            let mag = v.abs();
            if neg {
                f.write_str("-")?;
            } else if !leading {
                f.write_str("+")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            f.write_str("i")
        };
        if self.re.is_zero() {
            imag(f, &self.im, true)
        } else {
            write!(f, "{}", self.re)?;
            imag(f, &self.im, false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = Gaussian<i64>;

    fn g(a: i64, b: i64) -> G {
        G::new(a, b)
    }

    #[test]
    fn euclidean_remainder_is_small() {
        for a in -7..=7 {
            for b in -7..=7 {
                for c in -4..=4 {
                    for d in -4..=4 {
                        let (x, y) = (g(a, b), g(c, d));
                        if y.is_zero() {
                            continue;
                        }
                        let (q, r) = x.div_rem_round(&y);
                        assert_eq!(q * y + r, x);
                        assert!(2 * r.norm() <= y.norm());
                    }
                }
            }
        }
    }

    #[test]
    fn real_inputs_stay_real() {
        let (q, r) = g(17, 0).div_rem_round(&g(-5, 0));
        assert!(q.is_real() && r.is_real());
        assert_eq!(g(12, 0).gcd(&g(-18, 0)).re.abs(), 6);
    }

    #[test]
    fn ext_gcd_identity() {
        let (a, b) = (g(1, -1), g(2, 0));
        let (gd, x, y) = a.ext_gcd(&b);
        assert_eq!(a * x + b * y, gd);
        assert_eq!(gd.norm(), 2);
    }

    #[test]
    fn display_forms() {
        assert_eq!(g(1, 1).to_string(), "1+i");
        assert_eq!(g(1, -1).to_string(), "1-i");
        assert_eq!(g(0, 2).to_string(), "2i");
        assert_eq!(g(0, -1).to_string(), "-i");
        assert_eq!(g(-3, 0).to_string(), "-3");
        assert_eq!(g(3, -4).to_string(), "3-4i");
    }

    #[test]
    fn unit_normalize_picks_quadrant() {
        assert_eq!(g(1, -1).unit_normalize(false), Some((g(1, 1), g(0, 1))));
        assert_eq!(g(0, 5).unit_normalize(false), Some((g(5, 0), g(0, -1))));
        assert_eq!(g(-7, 0).unit_normalize(true), Some((g(7, 0), g(-1, 0))));
        assert_eq!(g(0, 0).unit_normalize(false), None);
    }
}
