//! Lines in `P^n` as 2-dimensional subspaces, and their Plücker coordinates.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{FieldContext, RingElement};
use crate::lattice::{line_lattice, LineLattice};
use crate::point::{format_tuple, parse_tuple, primitive_normalize, sup_norm};

/// Index pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn plucker_pairs(n: usize) -> Vec<(usize, usize)> {
    let m = n + 1;
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

pub fn binomial2(m: usize) -> usize {
    m * (m - 1) / 2
}

/// The raw 2x2 minors `a_i b_j - a_j b_i` in [`plucker_pairs`] order.
pub fn wedge(a: &[RingElement], b: &[RingElement]) -> Vec<RingElement> {
    plucker_pairs(a.len() - 1)
        .into_iter()
        .map(|(i, j)| a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone())
        .collect()
}

/// A line given by a spanning pair of integral vectors.
#[derive(Clone, Debug)]
pub struct Line {
    span_a: Vec<RingElement>,
    span_b: Vec<RingElement>,
    ctx: FieldContext,
    plucker: PluckerVector,
    lattice: OnceLock<LineLattice>,
}

impl PartialEq for Line {
    /// Two lines are equal when they are the same subspace.
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.plucker == other.plucker
    }
}

impl Eq for Line {}

impl Line {
    pub fn new(span_a: Vec<RingElement>, span_b: Vec<RingElement>, ctx: FieldContext) -> Result<Self> {
        if span_a.len() != span_b.len() {
            return Err(Error::DimensionMismatch(format!(
                "spanning vectors have lengths {} and {}",
                span_a.len(),
                span_b.len()
            )));
        }
        if span_a.len() < 2 {
            return Err(Error::DimensionMismatch("a line needs ambient dimension >= 1".into()));
        }
        for x in span_a.iter().chain(&span_b) {
            ctx.check(x)?;
        }
        let raw = wedge(&span_a, &span_b);
        if raw.iter().all(|p| p.is_zero()) {
            return Err(Error::DegenerateSpan);
        }
        let n = span_a.len() - 1;
        let plucker = PluckerVector { n, entries: primitive_normalize(&raw, &ctx)? };
        Ok(Line { span_a, span_b, ctx, plucker, lattice: OnceLock::new() })
    }

    pub fn from_ints(a: &[i64], b: &[i64], ctx: FieldContext) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| crate::field::int(x)).collect();
        Line::new(conv(a), conv(b), ctx)
    }

    pub fn span_a(&self) -> &[RingElement] {
        &self.span_a
    }

    pub fn span_b(&self) -> &[RingElement] {
        &self.span_b
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn ambient_dim(&self) -> usize {
        self.span_a.len() - 1
    }

    pub fn plucker(&self) -> &PluckerVector {
        &self.plucker
    }

    /// The saturated lattice `M` of integral vectors on the line, built on
    /// first use.
    pub fn lattice(&self) -> &LineLattice {
        self.lattice.get_or_init(|| line_lattice(self).expect("a valid line has a lattice"))
    }

    /// Exact membership: `x ∧ p = 0`, i.e. every 3-term relation
    /// `x_i p_jk - x_j p_ik + x_k p_ij` vanishes.
    pub fn contains(&self, x: &[RingElement]) -> bool {
        if x.len() != self.span_a.len() {
            return false;
        }
        let m = x.len();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let t = x[i].clone() * self.plucker.entry(j, k).clone()
                        - x[j].clone() * self.plucker.entry(i, k).clone()
                        + x[k].clone() * self.plucker.entry(i, j).clone();
                    if !t.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span={};{}", format_tuple(&self.span_a), format_tuple(&self.span_b))
    }
}

/// Parses `span=[a0:...:an];[b0:...:bn]` (the `span=` prefix is optional).
pub fn parse_line(s: &str, ctx: FieldContext) -> Result<Line> {
    let t = s.trim();
    let body = t.strip_prefix("span=").unwrap_or(t);
    let (a, b) = body
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("line literal `{s}` needs two `;`-separated points")))?;
    Line::new(parse_tuple(a)?, parse_tuple(b)?, ctx)
}

impl FromStr for Line {
    type Err = Error;
    /// Parses over `Q(i)`; use [`parse_line`] to choose the field.
    fn from_str(s: &str) -> Result<Self> {
        parse_line(s, FieldContext::GAUSSIAN)
    }
}

/// The canonical Plücker point of a line in `P^{binom(n+1,2) - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PluckerVector {
    n: usize,
    entries: Vec<RingElement>,
}

impl PluckerVector {
    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// `p_ij` for `i < j`.
    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        debug_assert!(i < j && j <= self.n);
        let m = self.n + 1;
        // Offset of row i in the lexicographic pair list.
        let row = i * m - i * (i + 1) / 2;
        &self.entries[row + (j - i - 1)]
    }

    /// CSV header legend: `p01,p02,...`.
    pub fn legend(n: usize) -> Vec<String> {
        plucker_pairs(n).into_iter().map(|(i, j)| format!("p{i}{j}")).collect()
    }

    /// `p_ij p_kl - p_ik p_jl + p_il p_jk = 0` for all `i < j < k < l`.
    pub fn satisfies_relations(&self) -> bool {
        let m = self.n + 1;
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    for l in k + 1..m {
                        let e = |a, b| self.entry(a, b).clone();
                        let r = e(i, j) * e(k, l) - e(i, k) * e(j, l) + e(i, l) * e(j, k);
                        if !r.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for PluckerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_tuple(&self.entries))
    }
}

pub fn plucker_vector(line: &Line) -> &PluckerVector {
    line.plucker()
}

/// `H(L)`, the height of the Plücker point.
pub fn plucker_height(line: &Line) -> BigInt {
    sup_norm(&line.plucker.entries, &line.ctx).expect("Plücker vector is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, ring};

    const Q: FieldContext = FieldContext::RATIONAL;

    fn ints(v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn plucker_examples() {
        let axes = Line::from_ints(&[1, 0, 0], &[0, 1, 0], Q).unwrap();
        assert_eq!(axes.plucker().entries(), ints(&[1, 0, 0]).as_slice());
        assert_eq!(plucker_height(&axes), BigInt::from(1));

        // Minors by hand: p01 = 1*1 - (-1)*0, p02 = 1*(-1) - 0*0, p12 = (-1)(-1) - 0*1.
        let sum_zero = Line::from_ints(&[1, -1, 0], &[0, 1, -1], Q).unwrap();
        assert_eq!(sum_zero.plucker().entries(), ints(&[1, -1, 1]).as_slice());
        assert_eq!(plucker_height(&sum_zero), BigInt::from(1));

        let changed = Line::from_ints(&[1, 0, 0], &[2, 1, 0], Q).unwrap();
        assert_eq!(changed.plucker(), axes.plucker());

        // p01 = 1, p02 = -13, p12 = 0*(-13) - 7*1 = -7; already primitive.
        let l = Line::from_ints(&[1, 0, 7], &[0, 1, -13], Q).unwrap();
        assert_eq!(l.plucker().entries(), ints(&[1, -13, -7]).as_slice());
        assert_eq!(plucker_height(&l), BigInt::from(13));
    }

    #[test]
    fn degenerate_and_mismatched_spans() {
        assert_eq!(Line::from_ints(&[1, 2, 3], &[2, 4, 6], Q).unwrap_err(), Error::DegenerateSpan);
        assert!(matches!(Line::from_ints(&[1, 2], &[2, 4, 6], Q), Err(Error::DimensionMismatch(_))));
        assert!(matches!(Line::new(vec![ring(1, 1), int(0)], ints(&[0, 1]), Q), Err(Error::NotInField(_))));
    }

    #[test]
    fn entry_indexing_matches_pairs() {
        let l = Line::from_ints(&[1, 2, 3, 5, 7], &[0, 1, 4, 9, 16], Q).unwrap();
        let raw = wedge(l.span_a(), l.span_b());
        for (k, (i, j)) in plucker_pairs(4).into_iter().enumerate() {
            assert_eq!(l.plucker().entry(i, j), &l.plucker().entries()[k]);
            let _ = &raw[k];
        }
        assert!(l.plucker().satisfies_relations());
        assert_eq!(PluckerVector::legend(2), vec!["p01", "p02", "p12"]);
    }

    #[test]
    fn membership() {
        let l = Line::from_ints(&[1, -1, 0], &[0, 1, -1], Q).unwrap();
        assert!(l.contains(&ints(&[2, 1, -3])));
        assert!(!l.contains(&ints(&[1, 1, 1])));
    }

    #[test]
    fn serialization() {
        let l = parse_line("span=[1:0:7];[0:1:-13]", Q).unwrap();
        assert_eq!(l.to_string(), "span=[1:0:7];[0:1:-13]");
        let g: Line = "[1+i:0:2];[0:1:-i]".parse().unwrap();
        assert_eq!(g.to_string(), "span=[1+i:0:2];[0:1:-i]");
        assert!(parse_line("[1:0]", Q).is_err());
    }
}
