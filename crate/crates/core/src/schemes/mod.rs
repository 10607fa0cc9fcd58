//! One-step modified Patankar schemes.

mod mprk;
mod system;

use std::fmt;

pub use mprk::{
    alpha0, in_mprk43_region, mpe_step, mprk32_step, mprk43_step, mprk43ab_step, mprk43ab_tableau,
    mprk43g_step, Mprk43GammaParams, Mprk43Params, Mprk43Tableau, REGION_SLACK,
};
pub use system::{assemble_mp_system, PatankarSystem, StageRates};
pub(crate) use system::{check_stage, check_state, check_time_step};

use crate::error::{Error, Result};
use crate::mpdec::{mpdec_step, MpdecConfig};
use crate::pds::ProductionDestruction;
use crate::scalar::Scalar;

/// Any of the supported schemes with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme<T> {
    Mpe,
    Mprk32,
    Mprk43(Mprk43Params<T>),
    Mprk43Gamma(Mprk43GammaParams<T>),
    Mpdec(MpdecConfig<T>),
}

impl<T: Scalar> Scheme<T> {
    pub fn step(&self, rates: &dyn ProductionDestruction<T>, y_n: &[T], dt: T) -> Result<Vec<T>> {
        match self {
            Self::Mpe => mpe_step(rates, y_n, dt),
            Self::Mprk32 => mprk32_step(rates, y_n, dt),
            Self::Mprk43(p) => mprk43ab_step(p, rates, y_n, dt),
            Self::Mprk43Gamma(p) => mprk43g_step(p, rates, y_n, dt),
            Self::Mpdec(c) => mpdec_step(c, rates, y_n, dt),
        }
    }

    /// Nominal order of accuracy.
    pub fn order(&self) -> usize {
        match self {
            Self::Mpe => 1,
            Self::Mprk32 => 2,
            Self::Mprk43(_) | Self::Mprk43Gamma(_) => 3,
            Self::Mpdec(c) => c.order(),
        }
    }

    /// Runs `steps` steps and returns every iterate, starting with `y0`.
    pub fn integrate(
        &self,
        rates: &dyn ProductionDestruction<T>,
        y0: &[T],
        dt: T,
        steps: usize,
    ) -> Result<Vec<Vec<T>>> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(y0.to_vec());
        for step in 1..=steps {
            let next = self
                .step(rates, &out[step - 1], dt)
                .map_err(|e| Error::AtStep { step, source: Box::new(e) })?;
            out.push(next);
        }
        Ok(out)
    }
}

impl<T: Scalar> fmt::Display for Scheme<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mpe => write!(f, "MPE"),
            Self::Mprk32 => write!(f, "MPRK32"),
            Self::Mprk43(p) => write!(f, "MPRK43({},{})", p.alpha(), p.beta()),
            Self::Mprk43Gamma(p) => write!(f, "MPRK43({})", p.gamma()),
            Self::Mpdec(c) => write!(f, "MPDeC({},{})", c.order(), c.kind()),
        }
    }
}
