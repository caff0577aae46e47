//! Exact analysis of SL2 representations of finitely generated groups over
//! the rationals with a p-adic valuation.
//!
//! The crate covers the Bruhat–Tits tree of SL2(Q_p) with its SL2 action,
//! translation lengths and axes of single elements, the integral trace
//! calculus for words, and whole-representation classification
//! (boundedness with fixed-lattice certificates, reducibility, absolute
//! irreducibility, Zariski density, abelian length functions).

pub mod classify;
pub mod error;
pub mod field;
pub mod isometry;
pub mod matrix;
pub mod repfile;
pub mod spectrum;
pub mod traces;
pub mod tree;
pub mod words;

pub use classify::{ClassificationReport, Representation};
pub use error::{Error, Result};
pub use field::{PrimeContext, Valuation, ValuedRational};
pub use isometry::{AxisSegment, IsometryClass, IsometryKind};
pub use matrix::{Matrix2, Sl2Matrix};
pub use repfile::RepresentationFile;
pub use spectrum::LengthSpectrum;
pub use traces::{FundamentalTraceVector, TracePolynomial};
pub use tree::{TreeEdge, TreeVertex};
pub use words::{Letter, Presentation, Word};
