//! Initial data families.

use crate::config::{DataSpec, SimConfig};
use crate::persist::load_state;
use anyhow::Result;
use hyperwave_core::ensemble::symmetric_gaussian;
use hyperwave_core::evolve::{SpectralState, StatePair};
use hyperwave_core::functionals::extremal_family;
use hyperwave_core::transform::{RadialField, TransformPlan};
use std::path::Path;

/// Which component of a stored state a file descriptor supplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    U,
    Ut,
}

/// Samples one descriptor on the plan's radial grid. Relative file paths
/// are resolved against `base_dir`.
pub fn sample(spec: &DataSpec, plan: &TransformPlan, component: Component, base_dir: &Path) -> Result<RadialField> {
    let grid = plan.radial();
    Ok(match spec {
        DataSpec::Zero => grid.zeros(),
        &DataSpec::Gaussian { amplitude, center, width } => {
            grid.sample(|r| symmetric_gaussian(amplitude, center, width, r))
        }
        &DataSpec::FR { r, amplitude } => extremal_family(r, grid)?.scaled(amplitude),
        &DataSpec::SpectralBump { lambda0, width, amplitude } => {
            let spec = plan.spectral().sample(|l| amplitude * (-((l - lambda0) / width).powi(2)).exp());
            plan.inverse(&spec)?
        }
        DataSpec::File { path } => {
            let full = if path.is_absolute() { path.clone() } else { base_dir.join(path) };
            let state = load_state(&full)?.into_state(plan)?;
            let coeffs = if component == Component::U { &state.u } else { &state.ut };
            plan.inverse(coeffs)?
        }
    })
}

/// (u₀, u₁) at time 0 from the config's `data` and `velocity`.
pub fn initial_data(cfg: &SimConfig, plan: &TransformPlan) -> Result<StatePair> {
    let u = sample(&cfg.data, plan, Component::U, &cfg.base_dir)?;
    let ut = sample(&cfg.velocity, plan, Component::Ut, &cfg.base_dir)?;
    Ok(StatePair::new(u, ut, 0.0)?)
}

/// The spectral starting state. When `data` and `velocity` name the same
/// snapshot file the stored coefficients and time are used as they are, so
/// a run resumes bit-exactly.
pub fn initial_state(cfg: &SimConfig, plan: &TransformPlan) -> Result<SpectralState> {
    if let (DataSpec::File { path: a }, DataSpec::File { path: b }) = (&cfg.data, &cfg.velocity) {
        if a == b {
            return load_state(&cfg.resolve(a))?.into_state(plan);
        }
    }
    Ok(SpectralState::from_radial(plan, &initial_data(cfg, plan)?)?)
}
