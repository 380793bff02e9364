//! Post-processing for skewed permanent-magnet synchronous machines.
//!
//! Starting from air-gap flux-density maps, either read from CSV or
//! synthesized from harmonic tables, the crate computes Maxwell-stress torque
//! and per-tooth forces, skew factors and slice schedules for step, V and
//! continuous skew, and 1D/2D harmonic decompositions of the results.
//!
//! Angles are radians and lengths meters throughout.

pub mod error;
pub mod harmonics;
pub mod io;
pub mod model;
pub mod mst;
pub mod pipeline;
pub mod skew;
pub mod synth;

pub use error::{Error, Result};
pub use model::{
    AirGapFieldMap, FieldComponent, FieldSource, ForceComponents, MachineGeometry,
    SkewConfiguration, SkewStyle, Spectrum2D, ToothForceSeries, ToothPath, ToothWindow,
    TorqueSeries, MU_0,
};
pub use synth::FieldHarmonic;
