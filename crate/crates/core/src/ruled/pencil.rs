//! `P^n` as the pencil of lines through `[1:0:...:0]`.

use super::{kernel_line, Fibration};
use crate::enumerate::{check_bound, Limits};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::kernel::Elem;
use crate::line::Line;
use crate::point::ProjectivePoint;
use crate::with_elem;

/// Lines `L_d` joining `e_0` to `(0, d)` for `[d] in P^{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PencilDecomposition {
    pub n: usize,
    pub ctx: FieldContext,
}

impl PencilDecomposition {
    pub fn new(n: usize, ctx: FieldContext) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("a pencil of lines needs n >= 2".into()));
        }
        Ok(PencilDecomposition { n, ctx })
    }

    pub fn basepoint(&self) -> ProjectivePoint {
        let mut c = vec![crate::field::int(0); self.n + 1];
        c[0] = crate::field::int(1);
        ProjectivePoint::from_canonical_unchecked(c)
    }
}

pub fn pencil_line(pencil: &PencilDecomposition, direction: &ProjectivePoint) -> Result<Line> {
    if direction.coords().len() != pencil.n {
        return Err(Error::DimensionMismatch(format!("direction must lie on P^{}", pencil.n - 1)));
    }
    let mut d = vec![crate::field::int(0)];
    d.extend_from_slice(direction.coords());
    Line::new(pencil.basepoint().into_coords(), d, pencil.ctx)
}

fn pencil_fibration<E: Elem>(n: usize, bound: i64, f: impl FnOnce(&Fibration<'_, E>) -> Result<u64>) -> Result<u64> {
    let fiber = |d: &[E]| {
        let mut e0 = vec![E::zero(); n + 1];
        e0[0] = E::one();
        let mut w = vec![E::zero()];
        w.extend_from_slice(d);
        kernel_line(&e0, &w)
    };
    // Off e_0 a point is lambda e_0 + mu (0, d) with mu != 0, so its height
    // is at least H(d).
    f(&Fibration { base_dim: n, base_radius: bound, common: true, fiber: &fiber })
}

/// `sum_{[d], H(d) <= B} (N_{L_d}(B) - 1) + 1`, which counts every point of
/// `P^n` with `H <= B` once.
pub fn count_pn_via_pencil(n: usize, bound: u64, ctx: &FieldContext, limits: &Limits) -> Result<u64> {
    PencilDecomposition::new(n, *ctx)?;
    let b = check_bound(bound)?;
    with_elem!(ctx, E => pencil_fibration::<E>(n, b, |f| f.count(bound, limits)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::count_pn;

    #[test]
    fn pencil_matches_pn() {
        let l = Limits::default();
        let q = FieldContext::RATIONAL;
        assert_eq!(count_pn_via_pencil(2, 1, &q, &l).unwrap(), 13);
        for (n, b) in [(2, 5), (3, 2), (2, 9)] {
            assert_eq!(count_pn_via_pencil(n, b, &q, &l).unwrap(), count_pn(n, b, &q).unwrap());
        }
        let qi = FieldContext::GAUSSIAN;
        for (n, b) in [(2, 1), (2, 4), (3, 2)] {
            assert_eq!(count_pn_via_pencil(n, b, &qi, &l).unwrap(), count_pn(n, b, &qi).unwrap());
        }
        assert!(count_pn_via_pencil(1, 3, &q, &l).is_err());
    }

    #[test]
    fn pencil_lines() {
        let p = PencilDecomposition::new(2, FieldContext::RATIONAL).unwrap();
        let d: ProjectivePoint = "[1:2]".parse().unwrap();
        let line = pencil_line(&p, &d).unwrap();
        assert!(line.contains(p.basepoint().coords()));
        assert_eq!(line.to_string(), "span=[1:0:0];[0:1:2]");
    }
}
