//! Dynamics of the holomorphic correspondences `(w - c)^q = z^p`.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the bottom of this file fix the scalar to `f64` for everyday use.

pub mod bundle;
pub mod correspondence;
pub mod cycles;
pub mod error;
pub mod export;
pub mod motion;
pub mod orbit;
pub mod render;
pub mod rng;
pub mod roots;
pub mod scalar;
pub mod solenoid;
pub mod spatial;
pub mod verify;

pub use correspondence::{annulus_bounds, estimate_expansion, AnnulusBounds, CorrespondenceParams, ExpansionEstimate};
pub use cycles::{attracting_cycles_search, continue_cycle, cycle_from_symbols, unit_circle_periodic_points, CycleKind};
pub use error::{Error, Result};
pub use orbit::{Direction, SymbolSequence};
pub use scalar::Real;

pub use num_complex::Complex;

pub type Complex64 = num_complex::Complex<f64>;
pub type Params = CorrespondenceParams<f64>;
pub type Annulus = AnnulusBounds<f64>;
pub type Orbit = orbit::OrbitSegment<f64>;
pub type Cycle = cycles::Cycle<f64>;
pub type BundleParams = bundle::BundleParams<f64>;
pub type BundlePoint = bundle::BundlePoint<f64>;
pub type SectionTable = bundle::SectionTable<f64>;
pub type TorusPoint = solenoid::TorusPoint<f64>;
pub type MotionConfig = motion::MotionConfig<f64>;
pub type CurveSample = motion::CurveSample<f64>;
pub type Viewport = render::Viewport<f64>;
pub type RasterGrid = render::RasterGrid<f64>;
