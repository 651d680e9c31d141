//! Counting rational points of bounded height on lines and ruled varieties
//! over `Q` and `Q(i)`.

pub mod calibration;
pub mod campaign;
pub mod corpus;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod gaussian;
pub mod kernel;
pub mod lattice;
pub mod line;
pub mod object;
pub mod point;
pub mod ruled;
pub mod table;

pub use calibration::Calibration;
pub use enumerate::{
    count_line_bruteforce, count_line_lattice, count_line_parametrized, count_pn, enumerate_pn, HeightProfile, Limits,
};
pub use error::{Error, Result};
pub use field::{FieldContext, FieldElement, FieldKind, RingElement};
pub use lattice::{lattice_determinant, verify_det_lemma, DetLemmaReport, Determinant, LineLattice};
pub use line::{parse_line, plucker_height, plucker_vector, Line, PluckerVector};
pub use object::{Method, Object};
pub use point::{canonicalize, canonicalize_integral, height, local_norms, sup_norm, ProjectivePoint};
pub use table::{CountRow, CountingTable};
