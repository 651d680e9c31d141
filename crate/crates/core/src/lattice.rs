//! The saturated lattice `M = L ∩ O_K^{n+1}` of a line and its covolume.
//!
//! Saturation uses a column-style Hermite reduction of the 2 x (n+1) span
//! matrix `A`: unimodular column operations `A V = [H | 0]` are mirrored as
//! row operations on `W = V^{-1}`, and the first two rows of `W` are a basis
//! of `M` (they extend to a unimodular matrix, so their span is saturated).
//! The same code runs over `Z` and `Z[i]`, both Euclidean.
//!
//! Over `Q(i)` the module is also viewed as a rank-4 `Z`-lattice in
//! `R^{2(n+1)}` with basis `{u, iu, w, iw}` and the real inner product
//! `Re <x, y>`; its Gram determinant is the square of the Hermitian one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, RingElement};
use crate::line::{binomial2, plucker_height, wedge, Line};
use crate::point::content;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineLattice {
    ctx: FieldContext,
    /// Reduced ring basis `(u, w)` of `M`.
    basis: [Vec<RingElement>; 2],
    /// `Z`-basis: `{u, w}` over `Q`, `{u, iu, w, iw}` flattened to
    /// `(re_0, im_0, re_1, ...)` over `Q(i)`.
    z_basis: Vec<Vec<BigInt>>,
    gram: Vec<Vec<BigInt>>,
    det_squared: BigInt,
}

impl LineLattice {
    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn basis(&self) -> &[Vec<RingElement>; 2] {
        &self.basis
    }

    pub fn z_basis(&self) -> &[Vec<BigInt>] {
        &self.z_basis
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    /// Gram determinant of the `Z`-basis, i.e. `det(M)^2`.
    pub fn det_squared(&self) -> &BigInt {
        &self.det_squared
    }

    /// Builds the lattice data from an already saturated ring basis.
    pub fn from_basis(u: Vec<RingElement>, w: Vec<RingElement>, ctx: FieldContext) -> Result<Self> {
        if u.len() != w.len() {
            return Err(Error::DimensionMismatch("basis vectors differ in length".into()));
        }
        let (u, w) = lagrange_reduce(u, w)?;
        let z_basis = z_basis(&u, &w, &ctx);
        let gram = gram_matrix(&z_basis);
        let det_squared = bareiss_det(&gram);
        if !det_squared.is_positive() {
            return Err(Error::DegenerateSpan);
        }
        Ok(LineLattice { ctx, basis: [u, w], z_basis, gram, det_squared })
    }
}

fn z_basis(u: &[RingElement], w: &[RingElement], ctx: &FieldContext) -> Vec<Vec<BigInt>> {
    if ctx.is_rational() {
        return vec![u.iter().map(|x| x.re.clone()).collect(), w.iter().map(|x| x.re.clone()).collect()];
    }
    let flat = |v: &[RingElement]| -> Vec<BigInt> { v.iter().flat_map(|x| [x.re.clone(), x.im.clone()]).collect() };
    let times_i = |v: &[RingElement]| -> Vec<RingElement> { v.iter().map(|x| RingElement::i() * x.clone()).collect() };
    vec![flat(u), flat(&times_i(u)), flat(w), flat(&times_i(w))]
}

pub fn gram_matrix(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect()
}

/// Fraction-free Gaussian elimination; exact determinant.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn herm(x: &[RingElement], y: &[RingElement]) -> RingElement {
    x.iter().zip(y).fold(RingElement::zero(), |s, (a, b)| s + a.clone() * b.conj())
}

fn norm2(x: &[RingElement]) -> BigInt {
    x.iter().map(|a| a.norm()).sum()
}

/// Lagrange reduction of a rank-2 basis under the Hermitian inner product.
fn lagrange_reduce(mut u: Vec<RingElement>, mut w: Vec<RingElement>) -> Result<(Vec<RingElement>, Vec<RingElement>)> {
    if norm2(&u) > norm2(&w) {
        std::mem::swap(&mut u, &mut w);
    }
    loop {
        let nu = norm2(&u);
        if nu.is_zero() {
            return Err(Error::DegenerateSpan);
        }
        let q = herm(&w, &u).div_round(&RingElement::real(nu.clone()));
        if !q.is_zero() {
            for (wj, uj) in w.iter_mut().zip(&u) {
                *wj = wj.clone() - q.clone() * uj.clone();
            }
        }
        if norm2(&w) < nu {
            std::mem::swap(&mut u, &mut w);
        } else {
            return Ok((u, w));
        }
    }
}

/// Saturated basis of the integral points on `line`.
pub fn line_lattice(line: &Line) -> Result<LineLattice> {
    let ctx = line.ctx();
    let m = line.ambient_dim() + 1;
    let mut a = [line.span_a().to_vec(), line.span_b().to_vec()];
    let mut winv: Vec<Vec<RingElement>> = (0..m)
        .map(|r| (0..m).map(|c| if r == c { RingElement::one() } else { RingElement::zero() }).collect())
        .collect();

    for row in 0..2 {
        // Gather the gcd of a[row][row..] into column `row`.
        for c in row + 1..m {
            if a[row][c].is_zero() {
                continue;
            }
            let (p, q) = (a[row][row].clone(), a[row][c].clone());
            let (g, x, y) = p.ext_gcd(&q);
            let pg = p.div_exact(&g).expect("gcd divides");
            let qg = q.div_exact(&g).expect("gcd divides");
            // Columns: (col_row, col_c) <- (x col_row + y col_c, -qg col_row + pg col_c).
            for r in a.iter_mut() {
                let (s, t) = (r[row].clone(), r[c].clone());
                r[row] = x.clone() * s.clone() + y.clone() * t.clone();
                r[c] = pg.clone() * t - qg.clone() * s;
            }
            // Inverse block on rows of W: (row, c) <- (pg row + qg c, -y row + x c).
            let (s, t) = (winv[row].clone(), winv[c].clone());
            winv[row] = s.iter().zip(&t).map(|(si, ti)| pg.clone() * si.clone() + qg.clone() * ti.clone()).collect();
            winv[c] = s.iter().zip(&t).map(|(si, ti)| x.clone() * ti.clone() - y.clone() * si.clone()).collect();
        }
        if a[row][row].is_zero() {
            return Err(Error::DegenerateSpan);
        }
    }
    debug_assert!(a.iter().all(|r| r[2..].iter().all(|x| x.is_zero())));
    let u = winv[0].clone();
    let w = winv[1].clone();
    LineLattice::from_basis(u, w, ctx)
}

/// True iff `(u, w)` spans a saturated module: its Plücker vector is
/// primitive.
pub fn is_saturated(u: &[RingElement], w: &[RingElement]) -> bool {
    content(&wedge(u, w)).is_unit()
}

/// An exact determinant together with a rational enclosure of its root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Determinant {
    #[serde(serialize_with = "crate::table::ser_display")]
    pub det_squared: BigInt,
    #[serde(serialize_with = "crate::table::ser_display")]
    pub sqrt_lo: BigRational,
    #[serde(serialize_with = "crate::table::ser_display")]
    pub sqrt_hi: BigRational,
}

impl Determinant {
    pub fn is_exact(&self) -> bool {
        self.sqrt_lo == self.sqrt_hi
    }

    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.sqrt_lo + &self.sqrt_hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }
}

/// The root itself when exact, otherwise the enclosure `[lo,hi]`.
impl std::fmt::Display for Determinant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.sqrt_lo)
        } else {
            write!(f, "[{},{}]", self.sqrt_lo, self.sqrt_hi)
        }
    }
}

const SQRT_BITS: usize = 33;

/// Encloses `sqrt(x)` for an integer `x >= 1` in `[lo, hi]` with
/// `(hi - lo) / lo <= 2^-32`; `lo == hi` when `x` is a perfect square.
pub fn sqrt_interval(x: &BigInt) -> (BigRational, BigRational) {
    let r = x.sqrt();
    if &(&r * &r) == x {
        let v = BigRational::from_integer(r);
        return (v.clone(), v);
    }
    let scale = BigInt::one() << SQRT_BITS;
    let s = (x * &scale * &scale).sqrt();
    let lo = BigRational::new(s.clone(), scale.clone());
    let hi = BigRational::new(s + 1, scale);
    (lo, hi)
}

pub fn lattice_determinant(m: &LineLattice) -> Determinant {
    let (sqrt_lo, sqrt_hi) = sqrt_interval(&m.det_squared);
    Determinant { det_squared: m.det_squared.clone(), sqrt_lo, sqrt_hi }
}

/// Comparison of `det(M)` with `H(L)` for one line.
#[derive(Clone, Debug, Serialize)]
pub struct DetLemmaReport {
    pub n: usize,
    pub field: String,
    #[serde(serialize_with = "crate::table::ser_display")]
    pub height: BigInt,
    pub det: Determinant,
    /// Square of the upper band: `binom(n+1,2)` over `Q`, its square over
    /// `Q(i)` (where `det(M)` is the `Z`-covolume and `H` uses norms).
    pub band_upper_squared: u64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl DetLemmaReport {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }

    /// Enclosure of `det(M) / H(L)`.
    pub fn ratio_interval(&self) -> (BigRational, BigRational) {
        let h = BigRational::from_integer(self.height.clone());
        (&self.det.sqrt_lo / &h, &self.det.sqrt_hi / &h)
    }

    /// `(det(M) / H(L))^2`, exact; lies in `[1, band_upper_squared]`.
    pub fn ratio_squared(&self) -> BigRational {
        BigRational::new(self.det.det_squared.clone(), &self.height * &self.height)
    }
}

/// Checks `1 <= det(M)/H(L) <= sqrt(binom(n+1,2))` exactly via squares.
///
/// Over `Q` the saturated basis has the primitive Plücker vector `p` as its
/// wedge, `det(M)^2 = |p|_2^2` and `H(L) = |p|_inf`. Over `Q(i)` the rank-4
/// covolume is `sum N(p_ij)` and `H(L) = max N(p_ij)`, giving the band
/// `[1, binom(n+1,2)]` for the unsquared ratio.
pub fn verify_det_lemma(line: &Line) -> Result<DetLemmaReport> {
    let lattice = line.lattice();
    let det = lattice_determinant(lattice);
    let height = plucker_height(line);
    let c = binomial2(line.ambient_dim() + 1) as u64;
    let band_upper_squared = c.pow(line.ctx().degree());
    let h2 = &height * &height;
    let lower_ok = det.det_squared >= h2;
    let upper_ok = det.det_squared <= &h2 * BigInt::from(band_upper_squared);
    Ok(DetLemmaReport {
        n: line.ambient_dim(),
        field: line.ctx().token().into(),
        height,
        det,
        band_upper_squared,
        lower_ok,
        upper_ok,
    })
}

/// Solves `v = alpha u + beta w` over the ring, if possible.
pub fn coefficients(u: &[RingElement], w: &[RingElement], v: &[RingElement]) -> Option<(RingElement, RingElement)> {
    let m = u.len();
    let (i, j) = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .find(|&(i, j)| !(u[i].clone() * w[j].clone() - u[j].clone() * w[i].clone()).is_zero())?;
    let det = u[i].clone() * w[j].clone() - u[j].clone() * w[i].clone();
    let alpha = (v[i].clone() * w[j].clone() - v[j].clone() * w[i].clone()).div_exact(&det)?;
    let beta = (u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone()).div_exact(&det)?;
    let ok = (0..m).all(|k| alpha.clone() * u[k].clone() + beta.clone() * w[k].clone() == v[k]);
    ok.then_some((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    const Q: FieldContext = FieldContext::RATIONAL;

    fn ints(v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn axes_and_scaled_axes() {
        let l = Line::from_ints(&[1, 0, 0], &[0, 1, 0], Q).unwrap();
        let m = line_lattice(&l).unwrap();
        assert_eq!(m.det_squared(), &BigInt::from(1));
        let [u, w] = m.basis();
        assert!(u[2].is_zero() && w[2].is_zero());
        assert!(is_saturated(u, w));

        let scaled = Line::from_ints(&[2, 0, 0], &[0, 2, 0], Q).unwrap();
        let ms = line_lattice(&scaled).unwrap();
        assert_eq!(ms.det_squared(), &BigInt::from(1));
        assert!(is_saturated(&ms.basis()[0], &ms.basis()[1]));
    }

    #[test]
    fn sum_zero_plane() {
        let l = Line::from_ints(&[1, -1, 0], &[0, 1, -1], Q).unwrap();
        let m = line_lattice(&l).unwrap();
        let d = lattice_determinant(&m);
        assert_eq!(d.det_squared, BigInt::from(3));
        assert!(!d.is_exact());
        assert!((d.approx() - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn scaled_basis_determinant() {
        let m = LineLattice::from_basis(ints(&[2, 0, 0]), ints(&[0, 2, 0]), Q).unwrap();
        let d = lattice_determinant(&m);
        assert_eq!(d.det_squared, BigInt::from(16));
        assert!(d.is_exact());
        assert_eq!(d.sqrt_lo, BigRational::from_integer(4.into()));
    }

    #[test]
    fn sqrt_interval_width() {
        for x in [2u64, 3, 5, 1_000_003, 987_654_321_987] {
            let x = BigInt::from(x);
            let (lo, hi) = sqrt_interval(&x);
            let xr = BigRational::from_integer(x.clone());
            assert!(&lo * &lo <= xr && xr <= &hi * &hi);
            let width = (&hi - &lo) / &lo;
            assert!(width <= BigRational::new(1.into(), BigInt::one() << 32));
        }
    }

    #[test]
    fn det_lemma_examples() {
        let r = verify_det_lemma(&Line::from_ints(&[1, -1, 0], &[0, 1, -1], Q).unwrap()).unwrap();
        assert!(r.holds());
        assert_eq!(r.height, BigInt::from(1));
        assert_eq!(r.det.det_squared, BigInt::from(3));
        assert_eq!(r.band_upper_squared, 3);
        let r = verify_det_lemma(&Line::from_ints(&[1, 0, 0], &[0, 1, 0], Q).unwrap()).unwrap();
        assert!(r.holds());
        let (lo, hi) = r.ratio_interval();
        assert_eq!(lo, BigRational::one());
        assert_eq!(hi, BigRational::one());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m: Vec<Vec<BigInt>> = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(bareiss_det(&m), BigInt::from(4));
        let z: Vec<Vec<BigInt>> =
            [[0, 1], [1, 0]].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(bareiss_det(&z), BigInt::from(-1));
    }
}
