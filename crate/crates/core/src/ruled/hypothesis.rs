//! Base-growth exponent of scrolls and the two-sided `B^2` band for their
//! point counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::int_root;
use super::scroll::{scroll_profile_fibersum, scroll_psi_height, Scroll};
use crate::enumerate::{enumerate_pn, Limits};
use crate::error::{Error, Result};

/// Fitted exponents at or above this value are read as `epsilon = 1`.
pub const EPSILON_PASS_CEILING: f64 = 0.9;

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!("slope fit needs at least 3 points, got {}", points.len())));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("slope fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonReport {
    pub scroll: Scroll,
    /// `(B_A, N_X(B_A))` with `N_X(B_A) = #{P in P^1 : H_A(P) <= B_A}`.
    pub rows: Vec<(u64, u64)>,
    pub slope: f64,
    /// `2 / (a + b)`.
    pub predicted: f64,
}

impl EpsilonReport {
    /// Whether the base count grows like `B_A^epsilon` with `epsilon < 1`.
    pub fn holds(&self) -> bool {
        self.slope < EPSILON_PASS_CEILING
    }

    pub fn matches_prediction(&self, tol: f64) -> bool {
        (self.slope - self.predicted).abs() <= tol
    }
}

/// Counts base points by `H_A` and fits the growth exponent in `B_A`.
///
/// Every fiber's Plücker vector contains `s^{a+b}` and `t^{a+b}`, so
/// `H_A(P) >= H(P)^{a+b}`; only base points up to that root are visited,
/// and `H_A` is computed exactly for each.
pub fn check_epsilon_hypothesis(scroll: &Scroll, bounds: &[u64], limits: &Limits) -> Result<EpsilonReport> {
    let mut bs: Vec<u64> = bounds.to_vec();
    bs.sort_unstable();
    bs.dedup();
    if bs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "exponent fit needs at least 3 distinct bounds, got {}",
            bs.len()
        )));
    }
    if bs[0] == 0 {
        return Err(Error::InvalidArgument("height bound must be >= 1".into()));
    }
    let max = *bs.last().expect("nonempty");
    let radius = int_root(max, scroll.degree()) as u64;
    let mut heights: Vec<BigInt> = Vec::new();
    for p in enumerate_pn(1, radius, &scroll.ctx, limits)? {
        heights.push(scroll_psi_height(scroll, &p)?);
    }
    let rows: Vec<(u64, u64)> = bs
        .iter()
        .map(|&b| {
            let bb = BigInt::from(b);
            (b, heights.iter().filter(|h| **h <= bb).count() as u64)
        })
        .collect();
    let pts: Vec<(f64, f64)> = rows.iter().map(|&(b, n)| ((b as f64).ln(), (n as f64).ln())).collect();
    let slope = fit_slope(&pts)?;
    Ok(EpsilonReport { scroll: *scroll, rows, slope, predicted: 2.0 / scroll.degree() as f64 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BundleReport {
    pub scroll: Scroll,
    /// `(B, N_S(B), N_S(B) / B^2)`.
    pub rows: Vec<(u64, u64, BigRational)>,
    pub band: BigRational,
}

impl BundleReport {
    pub fn min_ratio(&self) -> &BigRational {
        self.rows.iter().map(|r| &r.2).min().expect("nonempty")
    }

    pub fn max_ratio(&self) -> &BigRational {
        self.rows.iter().map(|r| &r.2).max().expect("nonempty")
    }

    /// `max / min` of the normalized counts.
    pub fn spread(&self) -> BigRational {
        self.max_ratio() / self.min_ratio()
    }

    /// Every normalized count lies in `[1/c, c]`.
    pub fn within_band(&self) -> bool {
        let lo = BigRational::one() / &self.band;
        self.rows.iter().all(|r| r.2 >= lo && r.2 <= self.band)
    }
}

/// `N_S(B) / B^2` over the given bounds, checked against the band `[1/c, c]`.
/// Scrolls with `a + b < 3` are rejected: their base count grows like
/// `B_A^epsilon` with `epsilon >= 1`.
pub fn verify_theorem_bundle(
    scroll: &Scroll,
    bounds: &[u64],
    band: &BigRational,
    limits: &Limits,
) -> Result<BundleReport> {
    if scroll.degree() < 3 {
        return Err(Error::HypothesisFails(format!("{scroll} has base exponent 2/{} >= 1", scroll.degree())));
    }
    if bounds.is_empty() {
        return Err(Error::InsufficientData("no bounds given".into()));
    }
    if band <= &BigRational::one() {
        return Err(Error::InvalidArgument("band constant must exceed 1".into()));
    }
    let max = *bounds.iter().max().expect("nonempty");
    let prof = scroll_profile_fibersum(scroll, max, limits)?;
    let mut rows: Vec<(u64, u64, BigRational)> = bounds
        .iter()
        .map(|&b| {
            let n = prof.count_at(b);
            (b, n, BigRational::new(BigInt::from(n), BigInt::from(b) * BigInt::from(b)))
        })
        .collect();
    rows.sort_by_key(|r| r.0);
    debug_assert!(rows.iter().all(|r| !r.2.is_zero()));
    Ok(BundleReport { scroll: *scroll, rows, band: band.clone() })
}

/// `count / B^2` rendered as a float, for summaries.
pub fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    const Q: FieldContext = FieldContext::RATIONAL;

    #[test]
    fn slope_of_a_line() {
        let pts = [(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)];
        assert!((fit_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(fit_slope(&pts[..2]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn base_counts_follow_h_to_the_degree() {
        let l = Limits::default();
        let s = Scroll::new(1, 2, Q).unwrap();
        let rep = check_epsilon_hypothesis(&s, &[8, 27, 64], &l).unwrap();
        // H_A = H^3, so N_X(r^3) = #P^1(Q) with H <= r: 8, 16, 24.
        assert_eq!(rep.rows, vec![(8, 8), (27, 16), (64, 24)]);
        assert!(check_epsilon_hypothesis(&s, &[10, 100], &l).is_err());
    }

    #[test]
    fn bundle_rejects_small_degree() {
        let l = Limits::default();
        let c = BigRational::from_integer(3.into());
        let s11 = Scroll::new(1, 1, Q).unwrap();
        assert!(matches!(verify_theorem_bundle(&s11, &[10, 20], &c, &l), Err(Error::HypothesisFails(_))));
        let s12 = Scroll::new(1, 2, Q).unwrap();
        let rep = verify_theorem_bundle(&s12, &[5, 10, 20], &c, &l).unwrap();
        assert_eq!(rep.rows.len(), 3);
    }
}
