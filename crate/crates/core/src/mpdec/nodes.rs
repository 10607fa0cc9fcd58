use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest number of subintervals supported.
pub const MAX_SUBINTERVALS: usize = 14;

const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Equispaced,
    GaussLobatto,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Equispaced => "equi",
            Self::GaussLobatto => "gl",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "equi" | "equispaced" | "equidistant" => Ok(Self::Equispaced),
            "gl" | "gauss-lobatto" | "gausslobatto" | "lobatto" => Ok(Self::GaussLobatto),
            _ => Err(Error::InvalidParams(format!("unknown node family `{s}`"))),
        }
    }
}

/// Subtimenodes `0 = t_0 < ... < t_M = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet<T> {
    kind: NodeKind,
    nodes: Vec<T>,
}

impl<T: Scalar> NodeSet<T> {
    pub fn new(kind: NodeKind, subintervals: usize) -> Result<Self> {
        match kind {
            NodeKind::Equispaced => equispaced_nodes(subintervals),
            NodeKind::GaussLobatto => gauss_lobatto_nodes(subintervals),
        }
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    /// Number of subintervals `M`.
    pub fn subintervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }
}

fn check_count(m: usize) -> Result<()> {
    if (1..=MAX_SUBINTERVALS).contains(&m) {
        Ok(())
    } else {
        Err(Error::OrderOutOfRange { order: m, min: 1, max: MAX_SUBINTERVALS })
    }
}

pub fn equispaced_nodes<T: Scalar>(m: usize) -> Result<NodeSet<T>> {
    check_count(m)?;
    let mm = T::from_usize_lossy(m);
    let mut nodes: Vec<T> = (0..=m).map(|i| T::from_usize_lossy(i) / mm).collect();
    nodes[m] = T::one();
    Ok(NodeSet { kind: NodeKind::Equispaced, nodes })
}

/// Legendre polynomial `P_n` and its first two derivatives at `x`.
pub fn legendre_with_derivatives<T: Scalar>(n: usize, x: T) -> (T, T, T) {
    if n == 0 {
        return (T::one(), T::zero(), T::zero());
    }
    let (mut prev, mut cur) = (T::one(), x);
    for k in 1..n {
        let kk = T::from_usize_lossy(k);
        let next = ((kk + kk + T::one()) * x * cur - kk * prev) / (kk + T::one());
        prev = cur;
        cur = next;
    }
    let nn = T::from_usize_lossy(n);
    let one_minus = T::one() - x * x;
    let d1 = nn * (prev - x * cur) / one_minus;
    let d2 = ((x + x) * d1 - nn * (nn + T::one()) * cur) / one_minus;
    (cur, d1, d2)
}

/// Gauss-Lobatto nodes on `[0, 1]`: the endpoints and the mapped roots of
/// `P'_M`, found by Newton's method from Chebyshev-Lobatto guesses.
pub fn gauss_lobatto_nodes<T: Scalar>(m: usize) -> Result<NodeSet<T>> {
    check_count(m)?;
    let half = T::lit(0.5);
    let mut x = vec![T::zero(); m + 1];
    x[0] = -T::one();
    x[m] = T::one();
    let tol = T::epsilon() * T::lit(4.0);
    // Interior roots come in symmetric pairs; solve for the upper half.
    for k in 1..m {
        if 2 * k > m {
            break;
        }
        let mut xi = (T::PI() * T::from_usize_lossy(m - k) / T::from_usize_lossy(m)).cos();
        if 2 * k == m {
            xi = T::zero();
        } else {
            let mut converged = false;
            for _ in 0..NEWTON_MAX_ITER {
                let (_, d1, d2) = legendre_with_derivatives(m, xi);
                let step = d1 / d2;
                xi -= step;
                if step.abs() <= tol {
                    converged = true;
                    break;
                }
            }
            if !converged || !(xi.abs() < T::one()) {
                return Err(Error::NewtonDivergence { index: k });
            }
        }
        x[k] = -xi.abs();
        x[m - k] = xi.abs();
    }
    let mut nodes: Vec<T> = x.iter().map(|&xi| half * (xi + T::one())).collect();
    nodes[0] = T::zero();
    nodes[m] = T::one();
    if m.is_multiple_of(2) {
        nodes[m / 2] = half;
    }
    Ok(NodeSet { kind: NodeKind::GaussLobatto, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_node_sets() {
        assert_eq!(gauss_lobatto_nodes::<f64>(1).unwrap().nodes(), &[0.0, 1.0]);
        assert_eq!(gauss_lobatto_nodes::<f64>(2).unwrap().nodes(), &[0.0, 0.5, 1.0]);
        let n = gauss_lobatto_nodes::<f64>(3).unwrap();
        let s = 1.0 / 5f64.sqrt();
        assert!((n.nodes()[1] - (1.0 - s) / 2.0).abs() < 1e-15);
        assert!((n.nodes()[2] - (1.0 + s) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn interior_nodes_are_legendre_derivative_roots() {
        // Residuals are measured relative to max |P'_M| = P'_M(1) = M(M+1)/2.
        for m in 2..=MAX_SUBINTERVALS {
            let scale = (m * (m + 1)) as f64 / 2.0;
            let n = gauss_lobatto_nodes::<f64>(m).unwrap();
            for w in n.nodes().windows(2) {
                assert!(w[1] > w[0]);
            }
            for &t in &n.nodes()[1..m] {
                let (_, d1, _) = legendre_with_derivatives(m, 2.0 * t - 1.0);
                assert!(d1.abs() <= 1e-13 * scale, "M = {m}, t = {t}, P' = {d1}");
            }
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(gauss_lobatto_nodes::<f64>(0), Err(Error::OrderOutOfRange { .. })));
        assert!(matches!(equispaced_nodes::<f64>(15), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("GL".parse::<NodeKind>().unwrap(), NodeKind::GaussLobatto);
        assert_eq!("equispaced".parse::<NodeKind>().unwrap(), NodeKind::Equispaced);
    }
}
