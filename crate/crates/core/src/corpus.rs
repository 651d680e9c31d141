//! Seeded random line corpora.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{ring, FieldContext, RingElement};
use crate::line::{plucker_height, Line};

/// Spanning pairs with entries uniform in `[-E, E]` (real and imaginary parts
/// separately over `Q(i)`), degenerate pairs rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub n: usize,
    pub entry_bound: i64,
    pub count: usize,
    pub ctx: FieldContext,
}

fn draw(rng: &mut ChaCha8Rng, len: usize, e: i64, ctx: &FieldContext) -> Vec<RingElement> {
    (0..len)
        .map(|_| {
            let re = rng.gen_range(-e..=e);
            let im = if ctx.is_rational() { 0 } else { rng.gen_range(-e..=e) };
            ring(re, im)
        })
        .collect()
}

fn draw_line(rng: &mut ChaCha8Rng, n: usize, e: i64, ctx: &FieldContext) -> Line {
    loop {
        let a = draw(rng, n + 1, e, ctx);
        let b = draw(rng, n + 1, e, ctx);
        if let Ok(line) = Line::new(a, b, *ctx) {
            return line;
        }
    }
}

fn check_spec(n: usize, e: i64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("lines need ambient dimension >= 1".into()));
    }
    if e < 1 {
        return Err(Error::InvalidArgument("entry bound must be >= 1".into()));
    }
    Ok(())
}

pub fn random_lines(spec: &CorpusSpec) -> Result<Vec<Line>> {
    check_spec(spec.n, spec.entry_bound)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok((0..spec.count).map(|_| draw_line(&mut rng, spec.n, spec.entry_bound, &spec.ctx)).collect())
}

/// `count` lines for each ambient dimension in `dims`, all from `seed`.
pub fn lines_by_dimension(
    seed: u64,
    dims: &[usize],
    entry_bound: i64,
    count: usize,
    ctx: &FieldContext,
) -> Result<Vec<Line>> {
    let mut out = Vec::with_capacity(dims.len() * count);
    for &n in dims {
        out.extend(random_lines(&CorpusSpec { seed, n, entry_bound, count, ctx: *ctx })?);
    }
    Ok(out)
}

/// Line `k` draws entries from `[-E_k, E_k]` with `E_k` cycling through
/// `entry_bounds`, and is redrawn while `H(L) > max_height`.
pub fn stratified_lines(
    seed: u64,
    n: usize,
    entry_bounds: &[i64],
    count: usize,
    max_height: u64,
    ctx: &FieldContext,
) -> Result<Vec<Line>> {
    if entry_bounds.is_empty() {
        return Err(Error::InvalidArgument("no entry bounds given".into()));
    }
    for &e in entry_bounds {
        check_spec(n, e)?;
    }
    let cap = BigInt::from(max_height);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let e = entry_bounds[k % entry_bounds.len()];
        let mut tries = 0u32;
        loop {
            let line = draw_line(&mut rng, n, e, ctx);
            if plucker_height(&line) <= cap {
                out.push(line);
                break;
            }
            tries += 1;
            if tries > 10_000 {
                return Err(Error::InvalidArgument(format!(
                    "entry bound {e} cannot produce lines with H(L) <= {max_height}"
                )));
            }
        }
    }
    Ok(out)
}
