//! Weighted planar networks realizing a totally nonnegative matrix.
//!
//! Layout for an `n×n` matrix: vertices `(x, ℓ)` with `0 ≤ x < 2n` and
//! `0 ≤ ℓ < n`; origin `o_i = (0, i)`, destination `d_j = (2n-1, j)`.
//! Every level carries a horizontal line of unit edges except for the middle
//! edge `(n-1, ℓ) → (n, ℓ)`, which carries the central weight `D_ℓ`. The left
//! half has descending diagonal chains, the right half ascending ones:
//!
//! * left chain `k`, step `ℓ` (`k ≤ ℓ ≤ n-2`): `(c, ℓ+1) → (c+1, ℓ)` with `c = n-2-ℓ+k`
//! * right chain `k`, step `ℓ`: `(n+c, ℓ) → (n+c+1, ℓ+1)` with `c = ℓ-k`
//!
//! Weights are solved one at a time in the order `D_k`, then the left and
//! right edges of chain `k` from column `k` and row `k` of the matrix.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lgv::{Edge, WeightedDag};
use crate::positivity::{total_positivity, PositivityMode};
use crate::rational::format_rational;
use crate::{ExactMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    Unit,
    Central(usize),
    Left { chain: usize, level: usize },
    Right { chain: usize, level: usize },
}

impl EdgeRole {
    pub fn label(self) -> Option<String> {
        match self {
            EdgeRole::Unit => None,
            EdgeRole::Central(l) => Some(format!("D{l}")),
            EdgeRole::Left { chain, level } => Some(format!("L{chain},{level}")),
            EdgeRole::Right { chain, level } => Some(format!("R{chain},{level}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanarNetwork {
    pub dag: WeightedDag,
    /// Role of each edge, parallel to `dag.edges()`.
    pub roles: Vec<EdgeRole>,
}

impl PlanarNetwork {
    pub fn weight(&self, role: EdgeRole) -> Option<&Rational> {
        self.roles.iter().position(|&r| r == role).map(|i| &self.dag.edges()[i].weight)
    }

    /// Central weights `D_0..D_{n-1}`.
    pub fn central(&self) -> Vec<Rational> {
        (0..self.dag.origins().len()).map(|l| self.weight(EdgeRole::Central(l)).cloned().unwrap_or_default()).collect()
    }

    /// Non-unit edges as `(label, weight)` in edge order.
    pub fn labelled(&self) -> Vec<(String, String)> {
        self.roles
            .iter()
            .zip(self.dag.edges())
            .filter_map(|(r, e)| r.label().map(|l| (l, format_rational(&e.weight))))
            .collect()
    }
}

/// Builds the network topology with every non-unit weight set to zero.
pub fn network_topology(n: usize) -> Result<PlanarNetwork> {
    if n == 0 {
        return Err(Error::Dimension("network needs n ≥ 1".into()));
    }
    let w = 2 * n;
    let id = |x: usize, l: usize| l * w + x;
    let mut edges = Vec::new();
    let mut roles = Vec::new();
    let mut push = |s: usize, t: usize, role: EdgeRole| {
        let weight = if role == EdgeRole::Unit { Rational::one() } else { Rational::zero() };
        edges.push(Edge { source: s, target: t, weight, multiplicity: 1 });
        roles.push(role);
    };
    for l in 0..n {
        for x in 0..w - 1 {
            let role = if x == n - 1 { EdgeRole::Central(l) } else { EdgeRole::Unit };
            push(id(x, l), id(x + 1, l), role);
        }
    }
    for k in 0..n {
        for l in k..n.saturating_sub(1) {
            let c = n - 2 - l + k;
            push(id(c, l + 1), id(c + 1, l), EdgeRole::Left { chain: k, level: l });
            let c = l - k;
            push(id(n + c, l), id(n + c + 1, l + 1), EdgeRole::Right { chain: k, level: l });
        }
    }
    let origins = (0..n).map(|i| id(0, i)).collect();
    let destinations = (0..n).map(|j| id(w - 1, j)).collect();
    let dag = WeightedDag::new(n * w, edges, origins, destinations)?;
    Ok(PlanarNetwork { dag, roles })
}

fn entry_with(net: &PlanarNetwork, weights: &[Rational], i: usize, j: usize) -> Result<Rational> {
    let g = net.dag.with_weights(weights).map_err(|e| Error::Domain(format!("intermediate weight invalid: {e}")))?;
    g.count_paths(g.origins()[i], g.destinations()[j])
}

/// Extracts the weights of the network whose path matrix equals `m`.
///
/// The input must be totally nonnegative. Where an entry does not depend on
/// the unknown being solved (possible only with vanishing minors) the weight
/// is set to zero.
pub fn planar_network_weights(m: &ExactMatrix) -> Result<PlanarNetwork> {
    if !m.is_square() {
        return Err(Error::Dimension("planar network needs a square matrix".into()));
    }
    let verdict = total_positivity(m, PositivityMode::AllMinors)?;
    if verdict.totally_nonnegative != Some(true) {
        return Err(Error::Domain("matrix is not totally nonnegative".into()));
    }
    let n = m.rows();
    let mut net = network_topology(n)?;
    let mut weights: Vec<Rational> = net.dag.edges().iter().map(|e| e.weight.clone()).collect();
    let position = |roles: &[EdgeRole], role: EdgeRole| roles.iter().position(|&r| r == role).expect("role exists");

    let solve = |weights: &mut Vec<Rational>, idx: usize, i: usize, j: usize| -> Result<()> {
        weights[idx] = Rational::zero();
        let a0 = entry_with(&net, weights, i, j)?;
        weights[idx] = Rational::one();
        let a1 = entry_with(&net, weights, i, j)?;
        let slope = a1 - a0.clone();
        let target = m[(i, j)].clone();
        weights[idx] = if slope.is_zero() {
            if target != a0 {
                return Err(Error::Domain(format!("entry ({i},{j}) cannot be matched by the network")));
            }
            Rational::zero()
        } else {
            (target - a0) / slope
        };
        if weights[idx] < Rational::zero() {
            return Err(Error::Domain(format!("negative weight forced by entry ({i},{j})")));
        }
        Ok(())
    };

    for k in 0..n {
        solve(&mut weights, position(&net.roles, EdgeRole::Central(k)), k, k)?;
        for i in k + 1..n {
            solve(&mut weights, position(&net.roles, EdgeRole::Left { chain: k, level: i - 1 }), i, k)?;
            solve(&mut weights, position(&net.roles, EdgeRole::Right { chain: k, level: i - 1 }), k, i)?;
        }
    }
    net.dag = net.dag.with_weights(&weights)?;
    if &net.dag.path_matrix() != m {
        return Err(Error::Consistency("network path matrix differs from the input".into()));
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, int_matrix};

    #[test]
    fn one_by_one() {
        let net = planar_network_weights(&int_matrix(&[&[5]])).unwrap();
        assert_eq!(net.labelled(), vec![("D0".to_string(), "5".to_string())]);
    }

    #[test]
    fn identity_round_trip() {
        let id = ExactMatrix::identity(3);
        let net = planar_network_weights(&id).unwrap();
        assert_eq!(net.dag.path_matrix(), id);
        assert_eq!(net.central(), vec![int(1); 3]);
    }

    #[test]
    fn rejects_negative_minor() {
        assert!(planar_network_weights(&int_matrix(&[&[1, 2], &[3, 1]])).is_err());
    }
}
