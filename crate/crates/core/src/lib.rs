//! Laplace eigenfunctions on model domains, nodal-domain counting on
//! structured grids, and reproducible counterexamples to the extended Courant
//! property.

pub mod chebyshev;
pub mod error;
pub mod field;
pub mod plot;
pub mod scenarios;
pub mod spectra;
pub mod triangle;

pub use error::{FieldError, PlotError, PolyError, ScenarioError, SpectraError};
pub use field::{Chart, Crack, CrackSet, GridSpec, NodalCountReport, Refinement, SignGrid};
pub use spectra::{BoundaryCondition, Combination, Domain, DomainSpec, EigenMode, ModeIndex, SpectrumEntry};
pub use scenarios::{ScenarioConfig, ScenarioResult};
