//! Radar localization error analysis: monostatic MIMO vs distributed SISO pairs.
//!
//! A two-node SISO radar pair localizes a target by intersecting the two
//! range circles measured at the nodes. Projecting the range uncertainty of
//! that intersection into the angular domain yields an *equivalent angular
//! resolution* that can be compared directly against the Rayleigh beamwidth
//! of a monostatic MIMO array, and from it an error margin comparable to the
//! classic ½·r·sin(Δθ) cross-range bound.
//!
//! The crate is organized as:
//! - [`geometry`] — closed-form triangulation, equivalent polar coordinates,
//!   equivalent angular resolution, and error margins for both architectures.
//! - [`signal_chain`] — FMCW beat-signal synthesis, range spectrum, CA-CFAR
//!   detection, and bin-to-range conversion.
//! - [`fieldmap`] — metric maps over a room grid with FoV masking, summary
//!   statistics, and end-to-end Monte-Carlo localization experiments.
//! - [`placement`] — exhaustive node-placement search along a wall segment.
//!
//! All operations are pure functions of their arguments; randomness only
//! enters through explicit seeds.

pub mod fieldmap;
pub mod geometry;
pub mod placement;
pub mod signal_chain;

pub use fieldmap::{FieldStats, GridSpec, MonteCarloReport, ScalarField};
pub use geometry::{
    MimoArrayConfig, Point2D, PolarFix, RangePair, SisoPairConfig, SPEED_OF_LIGHT,
};
pub use signal_chain::{BeatSignal, CfarConfig, ChirpConfig, Detection, RangeSpectrum};
