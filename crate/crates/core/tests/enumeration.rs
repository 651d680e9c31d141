use std::collections::BTreeSet;

use ruled_core::corpus::{random_lines, CorpusSpec};
use ruled_core::enumerate::{
    count_line_bruteforce, count_line_lattice, count_line_lattice_raw, count_line_parametrized, count_pn, enumerate_pn,
    line_points, line_profile_bruteforce, Limits,
};
use ruled_core::field::FieldContext;
use ruled_core::kernel::{is_canonical_primitive, GaussInt};
use ruled_core::line::Line;

const Q: FieldContext = FieldContext::RATIONAL;
const QI: FieldContext = FieldContext::GAUSSIAN;

fn corpus(seed: u64, n: usize, e: i64, count: usize, ctx: FieldContext) -> Vec<Line> {
    random_lines(&CorpusSpec { seed, n, entry_bound: e, count, ctx }).unwrap()
}

#[test]
fn three_methods_agree_over_q() {
    let l = Limits::default();
    for n in [2, 3, 4] {
        for line in corpus(100 + n as u64, n, 6, 15, Q) {
            for b in [1, 3, 8, 15] {
                let brute = count_line_bruteforce(&line, b, &l).unwrap();
                assert_eq!(count_line_lattice(&line, b, &l).unwrap(), brute, "{line} B={b}");
                assert_eq!(count_line_parametrized(&line, b, &l).unwrap(), brute, "{line} B={b}");
            }
        }
    }
}

#[test]
fn three_methods_agree_over_qi() {
    let l = Limits::default();
    for n in [2, 3] {
        for line in corpus(200 + n as u64, n, 3, 12, QI) {
            for b in [1, 2, 5, 10] {
                let brute = count_line_bruteforce(&line, b, &l).unwrap();
                assert_eq!(count_line_lattice(&line, b, &l).unwrap(), brute, "{line} B={b}");
                assert_eq!(count_line_parametrized(&line, b, &l).unwrap(), brute, "{line} B={b}");
            }
        }
    }
}

#[test]
fn counts_are_monotone_and_eventually_grow() {
    let l = Limits::default();
    for line in corpus(5, 3, 10, 20, Q) {
        let prof = line_profile_bruteforce(&line, 60, &l).unwrap();
        let counts: Vec<u64> = (1..=60).map(|b| prof.count_at(b)).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        assert!(counts[59] > counts[0], "{line}");
    }
}

#[test]
fn raw_counts_carry_the_unit_factor() {
    let l = Limits::default();
    for (ctx, w) in [(Q, 2), (QI, 4)] {
        for line in corpus(6, 3, 4, 10, ctx) {
            for b in [1, 4, 9] {
                let q = count_line_lattice(&line, b, &l).unwrap();
                assert_eq!(count_line_lattice_raw(&line, b, &l).unwrap(), w * q);
            }
        }
    }
}

#[test]
fn line_points_are_canonical_and_distinct() {
    let l = Limits::default();
    for line in corpus(7, 3, 3, 10, QI) {
        let pts = line_points::<GaussInt>(&line, 8, &l).unwrap();
        assert!(pts.iter().all(|v| is_canonical_primitive(v)));
        let set: BTreeSet<_> = pts.iter().collect();
        assert_eq!(set.len(), pts.len());
    }
}

#[test]
fn enumerate_is_a_canonical_stream() {
    let l = Limits::default();
    for ctx in [Q, QI] {
        let pts: Vec<_> = enumerate_pn(2, 3, &ctx, &l).unwrap().collect();
        let set: BTreeSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), pts.len());
        assert_eq!(pts.len() as u64, count_pn(2, 3, &ctx).unwrap());
        for p in &pts {
            let again = ruled_core::point::canonicalize_integral(p.coords(), &ctx).unwrap();
            assert_eq!(&again, p);
        }
    }
}

#[test]
fn lines_far_from_small_points_are_empty() {
    let l = Limits::default();
    // Points are (a, 5a + 7b, 11b), smallest at (1, 5, 0).
    let line = Line::from_ints(&[1, 5, 0], &[0, 7, 11], Q).unwrap();
    let min = ruled_core::enumerate::line_min_height(&line, &l).unwrap();
    assert_eq!(min, 5);
    assert_eq!(count_line_lattice(&line, min - 1, &l).unwrap(), 0);
    assert_eq!(count_line_bruteforce(&line, min - 1, &l).unwrap(), 0);
    assert!(count_line_lattice(&line, min, &l).unwrap() > 0);
}
