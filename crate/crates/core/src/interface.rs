//! Interface analysis of a non-overlapping decomposition.
//!
//! Interface nodes are grouped into nodal equivalence classes (necs): maximal
//! sets of nodes shared by exactly the same subdomains. A nec is an ancestor of
//! another when its subdomain set strictly contains the other's; necs without
//! ancestors are the coarse nodes that carry the coarse basis functions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::dirichlet::node_is_free;
use crate::fem::{Constraints, FeSpace};
use crate::partition::Partition;

/// One nodal equivalence class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Nec {
    /// Sharing subdomains, ascending.
    pub subdomains: Vec<usize>,
    /// Scalar nodes, ascending.
    pub nodes: Vec<usize>,
}

/// Reporting label in the vertex/edge/face sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Vertex,
    Edge,
    Face,
}

/// Interface nodes and the subdomains sharing each, ascending by node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interface {
    pub nodes: Vec<usize>,
    pub subdomains: Vec<Vec<usize>>,
}

/// Scalar nodes whose supporting elements lie in at least two subdomains,
/// excluding Dirichlet nodes.
pub fn build_interface(space: &FeSpace, partition: &Partition, constraints: &Constraints) -> Interface {
    let mask = constraints.mask(space.num_dofs());
    let mut nodes = Vec::new();
    let mut subdomains = Vec::new();
    for (node, elems) in space.node_elements().into_iter().enumerate() {
        let mut s: Vec<usize> = elems.iter().map(|&t| partition.part_of(t)).collect();
        s.sort_unstable();
        s.dedup();
        if s.len() >= 2 && node_is_free(space, &mask, node) {
            nodes.push(node);
            subdomains.push(s);
        }
    }
    Interface { nodes, subdomains }
}

/// Groups interface nodes by identical subdomain sets, ordered by that set.
pub fn build_necs(interface: &Interface) -> Vec<Nec> {
    let mut groups: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
    for (node, s) in interface.nodes.iter().zip(&interface.subdomains) {
        groups.entry(s.as_slice()).or_default().push(*node);
    }
    groups
        .into_iter()
        .map(|(s, nodes)| Nec {
            subdomains: s.to_vec(),
            nodes,
        })
        .collect()
}

/// `a` is a strict subset of `b` (both ascending).
pub fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    if a.len() >= b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Coarse nodes and the offspring/covering relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseNodes {
    /// Nec indices without ancestors.
    pub coarse: Vec<usize>,
    /// Per nec, its ancestors.
    pub ancestors: Vec<Vec<usize>>,
    /// Per coarse node (parallel to `coarse`), its offspring necs.
    pub offspring: Vec<Vec<usize>>,
    /// Per nec, positions in `coarse` of the coarse nodes covering it
    /// (a coarse node covers itself).
    pub covering: Vec<Vec<usize>>,
}

pub fn build_coarse_nodes(necs: &[Nec]) -> CoarseNodes {
    let n = necs.len();
    let ancestors: Vec<Vec<usize>> = (0..n)
        .map(|k| {
            (0..n)
                .filter(|&j| is_strict_subset(&necs[k].subdomains, &necs[j].subdomains))
                .collect()
        })
        .collect();
    let coarse: Vec<usize> = (0..n).filter(|&k| ancestors[k].is_empty()).collect();
    let mut offspring = vec![Vec::new(); coarse.len()];
    let mut covering = vec![Vec::new(); n];
    for (ci, &c) in coarse.iter().enumerate() {
        covering[c].push(ci);
        for k in 0..n {
            if ancestors[k].contains(&c) {
                offspring[ci].push(k);
                covering[k].push(ci);
            }
        }
    }
    CoarseNodes {
        coarse,
        ancestors,
        offspring,
        covering,
    }
}

/// Vertex/edge/face labels. Two sharing subdomains make a face; a nec with an
/// ancestor is an edge; otherwise the geometric spread of its nodes decides.
pub fn classify_components(necs: &[Nec], coarse: &CoarseNodes, coords: &[[f64; 3]]) -> Vec<ComponentKind> {
    necs.iter()
        .enumerate()
        .map(|(k, nec)| {
            if nec.subdomains.len() == 2 {
                return ComponentKind::Face;
            }
            if !coarse.ancestors[k].is_empty() {
                return ComponentKind::Edge;
            }
            match spread_dimension(nec.nodes.iter().map(|&v| coords[v])) {
                0 => ComponentKind::Vertex,
                1 => ComponentKind::Edge,
                _ => ComponentKind::Face,
            }
        })
        .collect()
}

/// 0 for a point, 1 for collinear points, 2 otherwise.
fn spread_dimension(points: impl Iterator<Item = [f64; 3]>) -> usize {
    let pts: Vec<[f64; 3]> = points.collect();
    let p0 = pts[0];
    let dist = |p: &[f64; 3]| ((p[0] - p0[0]).powi(2) + (p[1] - p0[1]).powi(2) + (p[2] - p0[2]).powi(2)).sqrt();
    let Some(far) = pts.iter().max_by(|a, b| dist(a).total_cmp(&dist(b))) else {
        return 0;
    };
    let len = dist(far);
    if len < 1e-12 {
        return 0;
    }
    let dir = [(far[0] - p0[0]) / len, (far[1] - p0[1]) / len, (far[2] - p0[2]) / len];
    for p in &pts {
        let v = [p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]];
        let cross = [
            v[1] * dir[2] - v[2] * dir[1],
            v[2] * dir[0] - v[0] * dir[2],
            v[0] * dir[1] - v[1] * dir[0],
        ];
        if cross.iter().map(|c| c * c).sum::<f64>().sqrt() > 1e-9 * len {
            return 2;
        }
    }
    1
}

/// Complete interface description used to build the coarse space.
#[derive(Debug, Clone)]
pub struct InterfaceStructure {
    pub interface: Interface,
    pub necs: Vec<Nec>,
    pub coarse: CoarseNodes,
    pub kinds: Vec<ComponentKind>,
    /// Nec index of each scalar node (`usize::MAX` off the interface).
    nec_of_node: Vec<usize>,
}

impl InterfaceStructure {
    pub fn build(space: &FeSpace, partition: &Partition, constraints: &Constraints) -> Result<Self> {
        let interface = build_interface(space, partition, constraints);
        let necs = build_necs(&interface);
        let coarse = build_coarse_nodes(&necs);
        let kinds = classify_components(&necs, &coarse, space.node_coords());
        let mut nec_of_node = vec![usize::MAX; space.num_nodes()];
        for (k, nec) in necs.iter().enumerate() {
            for &v in &nec.nodes {
                nec_of_node[v] = k;
            }
        }
        let s = Self {
            interface,
            necs,
            coarse,
            kinds,
            nec_of_node,
        };
        if let Some(k) = s.coarse.covering.iter().position(Vec::is_empty) {
            return Err(Error::InconsistentInterface(format!(
                "nec {k} is covered by no coarse node"
            )));
        }
        Ok(s)
    }

    pub fn gamma(&self) -> &[usize] {
        &self.interface.nodes
    }

    pub fn num_coarse_nodes(&self) -> usize {
        self.coarse.coarse.len()
    }

    pub fn nec_of(&self, node: usize) -> Option<usize> {
        self.nec_of_node
            .get(node)
            .copied()
            .filter(|&k| k != usize::MAX)
    }

    /// Partition-of-unity weight of an interface node: 1 on a coarse node's
    /// own nec, otherwise `1 / |C_k|`.
    pub fn pou_value(&self, node: usize) -> Result<f64> {
        let k = self.nec_of(node).ok_or(Error::NotOnInterface(node))?;
        if self.coarse.ancestors[k].is_empty() {
            Ok(1.0)
        } else {
            Ok(1.0 / self.coarse.covering[k].len() as f64)
        }
    }

    /// Serializable summary for inspection.
    pub fn summary(&self) -> InterfaceSummary {
        InterfaceSummary {
            gamma_nodes: self.gamma().len(),
            coarse_nodes: self.coarse.coarse.clone(),
            necs: self
                .necs
                .iter()
                .enumerate()
                .map(|(k, nec)| NecSummary {
                    index: k,
                    subdomains: nec.subdomains.clone(),
                    num_nodes: nec.nodes.len(),
                    kind: self.kinds[k],
                    coarse: self.coarse.ancestors[k].is_empty(),
                    ancestors: self.coarse.ancestors[k].clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NecSummary {
    pub index: usize,
    pub subdomains: Vec<usize>,
    pub num_nodes: usize,
    pub kind: ComponentKind,
    pub coarse: bool,
    pub ancestors: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InterfaceSummary {
    pub gamma_nodes: usize,
    pub coarse_nodes: Vec<usize>,
    pub necs: Vec<NecSummary>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_test() {
        assert!(is_strict_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_strict_subset(&[1, 3], &[1, 3]));
        assert!(!is_strict_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(is_strict_subset(&[], &[0]));
    }

    #[test]
    fn tied_maximal_necs_share_offspring() {
        // two coarse nodes {0,1,2} and {1,2,3} both covering the face {1,2}
        let necs = vec![
            Nec { subdomains: vec![0, 1, 2], nodes: vec![0] },
            Nec { subdomains: vec![1, 2], nodes: vec![1, 2] },
            Nec { subdomains: vec![1, 2, 3], nodes: vec![3] },
        ];
        let c = build_coarse_nodes(&necs);
        assert_eq!(c.coarse, vec![0, 2]);
        assert_eq!(c.covering[1], vec![0, 1]);
        assert_eq!(c.offspring, vec![vec![1], vec![1]]);
    }

    #[test]
    fn spread() {
        assert_eq!(spread_dimension([[0.0, 0.0, 0.0]].into_iter()), 0);
        assert_eq!(spread_dimension([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.5]].into_iter()), 1);
        assert_eq!(spread_dimension([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].into_iter()), 2);
    }
}
