//! Frozen campaign constants and the parameters that produced them.
//!
//! The version-controlled copy lives in `calibration.toml` next to this
//! crate's manifest and is compiled in; [`Calibration::from_path`] reads an
//! alternative file.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Deserialize;

use crate::error::{Error, Result};

const FROZEN: &str = include_str!("../calibration.toml");

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Calibration {
    pub theorem_main: TheoremMainCalibration,
    pub bundle: BundleCalibration,
    pub det_lemma: CorpusCalibration,
    pub oracle: OracleCalibration,
    pub units: CorpusCalibration,
    pub epsilon: EpsilonCalibration,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct TheoremMainCalibration {
    /// Bound on `(N_L(B) - 1) H(L) / B^2`, as `"p/q"`.
    pub c_max: String,
    pub seed: u64,
    pub dimension: usize,
    pub count: usize,
    pub entry_bounds: Vec<i64>,
    pub max_line_height: u64,
    pub bounds: Vec<u64>,
    /// Lines with `H(L)` at least this form the high-height stratum.
    pub height_split: u64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct BundleCalibration {
    /// `c` in the band `[1/c, c]` for `N_S(B) / B^2`, as `"p/q"`.
    pub c: String,
    pub a: u32,
    pub b: u32,
    pub bounds: Vec<u64>,
    /// Ceiling on `max / min` of `N_S(B) / B^2` over `bounds`.
    pub max_spread: String,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct CorpusCalibration {
    pub seed: u64,
    pub count: usize,
    pub entry_bound: i64,
    pub dimensions: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct OracleCalibration {
    pub seed: u64,
    /// Lines per ambient dimension.
    pub count: usize,
    pub entry_bound: i64,
    pub dimensions: Vec<usize>,
    pub bounds: Vec<u64>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct EpsilonCalibration {
    pub bounds: Vec<u64>,
    pub tolerance: f64,
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|e| Error::Parse(format!("rational `{s}`: {e}")))
}

impl Calibration {
    /// The constants shipped with the crate.
    pub fn frozen() -> Self {
        Self::parse(FROZEN).expect("shipped calibration parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cal: Calibration = toml::from_str(text).map_err(|e| Error::Parse(format!("calibration: {e}")))?;
        cal.c_max()?;
        cal.bundle_band()?;
        cal.bundle_spread()?;
        Ok(cal)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn c_max(&self) -> Result<BigRational> {
        parse_rational(&self.theorem_main.c_max)
    }

    pub fn bundle_band(&self) -> Result<BigRational> {
        parse_rational(&self.bundle.c)
    }

    pub fn bundle_spread(&self) -> Result<BigRational> {
        parse_rational(&self.bundle.max_spread)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_parses() {
        let cal = Calibration::frozen();
        assert!(cal.c_max().unwrap() > BigRational::from_integer(1.into()));
        assert!(cal.bundle_band().unwrap() > BigRational::from_integer(1.into()));
        assert_eq!(cal.theorem_main.dimension, 3);
    }

    #[test]
    fn bad_rationals_are_rejected() {
        let text =
            FROZEN.replace(&format!("c_max = \"{}\"", Calibration::frozen().theorem_main.c_max), "c_max = \"x/2\"");
        assert!(Calibration::parse(&text).is_err());
    }
}
