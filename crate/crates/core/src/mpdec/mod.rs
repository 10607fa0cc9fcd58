//! Modified Patankar deferred correction schemes of arbitrary order.

mod nodes;
mod theta;

pub use nodes::{
    equispaced_nodes, gauss_lobatto_nodes, legendre_with_derivatives, NodeKind, NodeSet, MAX_SUBINTERVALS,
};
pub use theta::{theta_table, ThetaTable};

use crate::error::{Error, Result};
use crate::pds::ProductionDestruction;
use crate::scalar::Scalar;
use crate::schemes::{check_stage, check_state, check_time_step, PatankarSystem, StageRates};

/// Highest supported order.
pub const MAX_ORDER: usize = 14;

/// Order, node family and precomputed correction weights of an MPDeC scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct MpdecConfig<T> {
    order: usize,
    nodes: NodeSet<T>,
    theta: ThetaTable<T>,
}

/// Number of subintervals used for order `p` with the given node family.
pub fn subintervals_for(order: usize, kind: NodeKind) -> usize {
    match kind {
        NodeKind::Equispaced => order.saturating_sub(1).max(1),
        NodeKind::GaussLobatto => order.div_ceil(2),
    }
}

impl<T: Scalar> MpdecConfig<T> {
    pub fn new(order: usize, kind: NodeKind) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::OrderOutOfRange { order, min: 1, max: MAX_ORDER });
        }
        let nodes = NodeSet::new(kind, subintervals_for(order, kind))?;
        let theta = ThetaTable::new(&nodes)?;
        Ok(Self { order, nodes, theta })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of correction sweeps `K`, equal to the order.
    pub fn corrections(&self) -> usize {
        self.order
    }

    pub fn subintervals(&self) -> usize {
        self.nodes.subintervals()
    }

    pub fn kind(&self) -> NodeKind {
        self.nodes.kind()
    }

    pub fn nodes(&self) -> &NodeSet<T> {
        &self.nodes
    }

    pub fn theta(&self) -> &ThetaTable<T> {
        &self.theta
    }

    /// Whether every linear invariant, not only the total mass, is preserved.
    pub fn preserves_all_invariants(&self) -> bool {
        !self.theta.has_negative_final_weights()
    }

    /// Advisory message for configurations that lose linear invariants.
    pub fn warning(&self) -> Option<String> {
        (!self.preserves_all_invariants()).then(|| {
            format!(
                "MPDeC({}) with {} nodes has negative final correction weights; only the total mass is conserved",
                self.order,
                self.kind()
            )
        })
    }
}

fn correction_system<T: Scalar>(
    theta: &ThetaTable<T>,
    m: usize,
    previous_rates: &[StageRates<T>],
    sigma: &[T],
    dt: T,
) -> PatankarSystem<T> {
    let mut sys = PatankarSystem::new(sigma.len());
    for (r, rates) in previous_rates.iter().enumerate() {
        sys.add_weighted(theta.get(m, r), rates, sigma, dt);
    }
    debug_assert!(sys.is_m_matrix(), "correction system lost its sign structure");
    sys
}

/// One correction solve for subtimenode `m`, given the previous sweep
/// `y^{r,(k-1)}`, `r = 0..=M`. The Patankar denominators are the previous
/// iterate at the same node.
pub fn mpdec_correction_solve<T: Scalar>(
    rates: &dyn ProductionDestruction<T>,
    y_n: &[T],
    previous_sweep: &[Vec<T>],
    m: usize,
    theta: &ThetaTable<T>,
    dt: T,
) -> Result<Vec<T>> {
    check_time_step(dt)?;
    check_state(y_n)?;
    let big_m = theta.subintervals();
    if previous_sweep.len() != big_m + 1 {
        return Err(Error::DimensionMismatch { expected: big_m + 1, got: previous_sweep.len() });
    }
    if m == 0 || m > big_m {
        return Err(Error::DimensionMismatch { expected: big_m, got: m });
    }
    for y in previous_sweep {
        if y.len() != y_n.len() {
            return Err(Error::DimensionMismatch { expected: y_n.len(), got: y.len() });
        }
        check_state(y)?;
    }
    let previous_rates = previous_sweep.iter().map(|y| StageRates::eval(rates, y)).collect::<Result<Vec<_>>>()?;
    correction_system(theta, m, &previous_rates, &previous_sweep[m], dt).solve(y_n)
}

/// One MPDeC step: `K` sweeps over the `M` subtimenodes starting from
/// `y^{r,(0)} = y_n`.
pub fn mpdec_step<T: Scalar>(
    config: &MpdecConfig<T>,
    rates: &dyn ProductionDestruction<T>,
    y_n: &[T],
    dt: T,
) -> Result<Vec<T>> {
    check_time_step(dt)?;
    if y_n.len() != rates.dim() {
        return Err(Error::DimensionMismatch { expected: rates.dim(), got: y_n.len() });
    }
    check_state(y_n)?;
    let big_m = config.subintervals();
    let rates_n = StageRates::eval(rates, y_n)?;
    let mut previous = vec![y_n.to_vec(); big_m + 1];
    let mut previous_rates = vec![rates_n.clone(); big_m + 1];
    let mut current = previous.clone();
    for k in 1..=config.corrections() {
        for m in 1..=big_m {
            let y = correction_system(&config.theta, m, &previous_rates, &previous[m], dt).solve(y_n)?;
            check_stage(&y, k)?;
            current[m] = y;
        }
        std::mem::swap(&mut previous, &mut current);
        if k < config.corrections() {
            for m in 1..=big_m {
                previous_rates[m] = StageRates::eval(rates, &previous[m])?;
            }
        }
    }
    Ok(previous.swap_remove(big_m))
}
