//! Linear stability analysis: closed-form stability functions, their
//! derivation from the stage relations, MPDeC recursions, and region and
//! threshold computations.

mod closed_forms;
mod mpdec;
mod rational;
mod recursion;
mod region;

pub use closed_forms::{
    check_mprk43ab_conditions, imaginary_axis_constants, mprk43ab_coefficients, stability_mprk32,
    stability_mprk43ab, stability_mprk43g, ConditionReport,
};
pub use mpdec::{mpdec_jacobian, mpdec_stability, MpdecMode, MpdecStability};
pub use rational::{RationalStabilityFunction, StabilityFunction};
pub use recursion::{
    Affine, ComplexAlgebra, JacobianAlgebra, MatrixAlgebra, RationalAlgebra, StageJacobian, StageRecursion,
};
pub use region::{
    find_stability_threshold, sample_ray, stability_region_raster, time_step_bound, StabilityRaster, Window,
    MAX_RASTER_SIDE, THRESHOLD_RAY_LIMIT, THRESHOLD_SCAN_STEP, THRESHOLD_TOL,
};
