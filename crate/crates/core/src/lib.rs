//! Spectra `X^A(β)` of quadratic and cubic Pisot-cyclotomic numbers with
//! polygonal digit alphabets.
//!
//! The crate is organised bottom-up:
//!
//! - [`cyclotomic`]: exact arithmetic in `Z[ω_n]`, Galois automorphisms,
//!   embeddings and the polygonal alphabets `A_n = {0} ∪ {ω^j}`.
//! - [`catalog`]: the fourteen quadratic and cubic Pisot-cyclotomic bases.
//! - [`spectrum`]: finite patches of the spectrum and relative-density verdicts.
//! - [`attractor`]: the IFS attractors `K(γ, A)` and exact membership tests.
//! - [`cut_project`]: cut-and-project sets and missing-point detection.
//! - [`voronoi`]: Voronoi cells, region radii and covering radii.
//! - [`localconfig`]: local configurations up to dihedral symmetry and tile classes.
//! - [`io`]: CSV / JSON / SVG / dot writers shared with the command line tool.

pub mod attractor;
pub mod catalog;
pub mod cut_project;
pub mod cyclotomic;
pub mod error;
pub mod geometry;
pub mod io;
pub mod localconfig;
pub mod precise;
pub mod spectrum;
pub mod voronoi;

pub use attractor::{AttractorApprox, IfsSpec, MembershipResult, MembershipStatus, PointClass};
pub use catalog::{base_catalog, delone_cases, BaseSpec};
pub use cut_project::{CapSpec, MissingClassification, MissingReport, OneDimWindow, WindowSpec};
pub use cyclotomic::{Alphabet, CyclotomicInt, Order};
pub use error::{Error, Result};
pub use localconfig::{Enumeration, LocalConfig, TileClass};
pub use spectrum::{DensityVerdict, Patch, PatchKind};
pub use voronoi::{CoveringRadiusResult, DeltaStep, VoronoiCell};
