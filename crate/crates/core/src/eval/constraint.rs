//! Burt's constraint on unweighted graphs, with tie strength `p_xy = 1/δ_x`:
//!
//! ```text
//! c_v = Σ_{j ∈ N(v)} (p_vj + Σ_{q ∈ N(v) ∩ N(j)} p_vq p_qj)²
//! ```

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Constraint of `v`, or `None` when `v` is isolated.
pub fn burt_constraint(g: &Graph, v: NodeId) -> Result<Option<f64>> {
    if v as usize >= g.node_count() {
        return Err(Error::NodeOutOfRange {
            index: v as usize,
            node_count: g.node_count(),
        });
    }
    let nv = g.neighbors(v);
    if nv.is_empty() {
        return Ok(None);
    }
    let pv = 1.0 / nv.len() as f64;
    let mut c = 0.0;
    for &j in nv {
        // q ranges over common neighbours; adjacency lists are sorted.
        let nj = g.neighbors(j);
        let (mut a, mut b) = (0, 0);
        let mut indirect = 0.0;
        while a < nv.len() && b < nj.len() {
            match nv[a].cmp(&nj[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    indirect += pv / g.neighbors(nv[a]).len() as f64;
                    a += 1;
                    b += 1;
                }
            }
        }
        let t = pv + indirect;
        c += t * t;
    }
    Ok(Some(c))
}

/// Constraint of every node; isolated nodes map to `None`.
pub fn all_constraints(g: &Graph) -> Vec<Option<f64>> {
    g.nodes()
        .map(|v| burt_constraint(g, v).expect("node in range"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate::{cycle, star};

    #[test]
    fn star_values() {
        for leaves in [1usize, 3, 10] {
            let g = star(leaves);
            let c = all_constraints(&g);
            assert!((c[0].unwrap() - 1.0 / leaves as f64).abs() < 1e-12);
            for leaf in &c[1..] {
                assert!((leaf.unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triangle_value() {
        let g = cycle(3);
        for c in all_constraints(&g) {
            assert!((c.unwrap() - 1.125).abs() < 1e-12);
        }
    }

    #[test]
    fn isolated_is_undefined() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(burt_constraint(&g, 2).unwrap(), None);
        assert!(burt_constraint(&g, 3).is_err());
    }
}
