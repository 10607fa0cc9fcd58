use crate::error::Result;
use crate::linalg::InterpolatoryQuadrature;
use crate::mpdec::NodeSet;
use crate::scalar::Scalar;

/// Correction weights `theta[m][r] = int_0^{t_m} phi_r(t) dt` for
/// `m, r = 0..=M`, where `phi_r` is the Lagrange basis of the nodes. Row zero
/// is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaTable<T> {
    theta: Vec<Vec<T>>,
}

impl<T: Scalar> ThetaTable<T> {
    pub fn new(nodes: &NodeSet<T>) -> Result<Self> {
        theta_table(nodes)
    }

    pub fn subintervals(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn get(&self, m: usize, r: usize) -> T {
        self.theta[m][r]
    }

    pub fn row(&self, m: usize) -> &[T] {
        &self.theta[m]
    }

    /// `max(0, theta)`.
    pub fn plus(&self, m: usize, r: usize) -> T {
        self.theta[m][r].max(T::zero())
    }

    /// `min(0, theta)`.
    pub fn minus(&self, m: usize, r: usize) -> T {
        self.theta[m][r].min(T::zero())
    }

    /// `sum_r max(0, theta[m][r])`.
    pub fn row_plus_sum(&self, m: usize) -> T {
        (0..self.theta.len()).fold(T::zero(), |a, r| a + self.plus(m, r))
    }

    /// `sum_r min(0, theta[m][r])`, a non-positive number.
    pub fn row_minus_sum(&self, m: usize) -> T {
        (0..self.theta.len()).fold(T::zero(), |a, r| a + self.minus(m, r))
    }

    /// `sum_r |theta[m][r]|`.
    pub fn row_abs_sum(&self, m: usize) -> T {
        self.theta[m].iter().fold(T::zero(), |a, &x| a + x.abs())
    }

    /// True when the last row has a negative entry. The final solve then mixes
    /// production and destruction terms, and linear invariants other than the
    /// total mass are no longer preserved.
    pub fn has_negative_final_weights(&self) -> bool {
        self.theta[self.subintervals()].iter().any(|&x| x < T::zero())
    }
}

pub fn theta_table<T: Scalar>(nodes: &NodeSet<T>) -> Result<ThetaTable<T>> {
    let t = nodes.nodes();
    let quadrature = InterpolatoryQuadrature::new(t)?;
    let mut theta = vec![vec![T::zero(); t.len()]];
    for &tm in &t[1..] {
        theta.push(quadrature.weights(t[0], tm)?);
    }
    Ok(ThetaTable { theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpdec::{equispaced_nodes, gauss_lobatto_nodes};

    #[test]
    fn one_subinterval_is_trapezoidal() {
        let th = theta_table(&equispaced_nodes::<f64>(1).unwrap()).unwrap();
        assert!((th.get(1, 0) - 0.5).abs() < 1e-15 && (th.get(1, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_subintervals() {
        let th = theta_table(&equispaced_nodes::<f64>(2).unwrap()).unwrap();
        let expect = [[5.0 / 24.0, 1.0 / 3.0, -1.0 / 24.0], [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]];
        for m in 1..=2 {
            for r in 0..=2 {
                assert!((th.get(m, r) - expect[m - 1][r]).abs() < 1e-15);
            }
        }
        assert_eq!(th.plus(1, 2), 0.0);
        assert_eq!(th.minus(1, 2), th.get(1, 2));
        assert_eq!(th.plus(1, 1), th.get(1, 1));
        assert!(!th.has_negative_final_weights());
    }

    #[test]
    fn rows_sum_to_node_values() {
        for m in 1..=14 {
            for nodes in [equispaced_nodes::<f64>(m).unwrap(), gauss_lobatto_nodes(m).unwrap()] {
                let th = theta_table(&nodes).unwrap();
                for (i, &t) in nodes.nodes().iter().enumerate() {
                    let s: f64 = th.row(i).iter().sum();
                    assert!((s - t).abs() < 1e-12, "M = {m}, row {i}, {:?} {}", nodes.kind(), s - t);
                }
            }
        }
    }

    #[test]
    fn first_negative_final_weight() {
        let negative: Vec<usize> = (1..=13)
            .filter(|&m| theta_table(&equispaced_nodes::<f64>(m).unwrap()).unwrap().has_negative_final_weights())
            .collect();
        assert_eq!(negative, vec![8, 10, 11, 12, 13]);
        for m in 1..=14 {
            let th = theta_table(&gauss_lobatto_nodes::<f64>(m).unwrap()).unwrap();
            assert!(!th.has_negative_final_weights());
        }
    }
}
