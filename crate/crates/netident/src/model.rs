//! Model sets: network topology plus signal pattern plus per-edge knowledge.
//!
//! A model set fixes which vertices are excited (receive a known external
//! input) and which are measured, and marks each edge module as parameterized
//! (to be identified) or known a priori. Identifiability questions are asked
//! of the parameterized modules given the observed transfer submatrix from
//! excited columns to measured rows.

use crate::graph::{Dag, GraphError, Vertex, VertexSet};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("signal pattern names vertex {0}, but the graph has {1} vertices")]
    PatternOutOfRange(Vertex, usize),
    #[error("no edge {0} -> {1} to mark as known")]
    NoSuchEdge(Vertex, Vertex),
}

/// Which vertices are excited (set R) and which are measured (set C).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SignalPattern {
    pub excited: VertexSet,
    pub measured: VertexSet,
}

impl SignalPattern {
    pub fn new(excited: VertexSet, measured: VertexSet) -> Self {
        SignalPattern { excited, measured }
    }

    /// Excitation and measurement roles swapped.
    pub fn swapped(&self) -> SignalPattern {
        SignalPattern {
            excited: self.measured.clone(),
            measured: self.excited.clone(),
        }
    }
}

/// Knowledge status of one edge module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeStatus {
    /// Unknown module that the experiment must identify.
    Parameterized,
    /// Module fixed a priori (or already identified in an earlier round).
    Known,
}

/// Three-valued outcome of an identifiability test. `NotIdentifiable` may
/// only come from a violated *necessary* condition, `Identifiable` only from
/// a satisfied *sufficient* one; everything else stays `Unknown`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Identifiable,
    Unknown,
    NotIdentifiable,
}

impl Verdict {
    /// True when `self` and `other` make contradictory claims.
    pub fn contradicts(self, other: Verdict) -> bool {
        matches!(
            (self, other),
            (Verdict::Identifiable, Verdict::NotIdentifiable)
                | (Verdict::NotIdentifiable, Verdict::Identifiable)
        )
    }

    /// The more informative of two compatible verdicts.
    pub fn strongest(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Unknown, v) | (v, Verdict::Unknown) => v,
            (a, b) => {
                debug_assert!(!a.contradicts(b), "contradictory verdicts combined");
                a
            }
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Identifiable => "identifiable",
            Verdict::Unknown => "unknown",
            Verdict::NotIdentifiable => "not-identifiable",
        };
        f.write_str(s)
    }
}

/// A network model set: DAG topology, signal pattern and per-edge knowledge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSet {
    dag: Dag,
    pattern: SignalPattern,
    // Edges whose module is known a priori; all others are parameterized.
    known: BTreeSet<(Vertex, Vertex)>,
}

impl ModelSet {
    pub fn new(dag: Dag, pattern: SignalPattern) -> Result<Self, ModelError> {
        let n = dag.vertex_count();
        for v in pattern.excited.iter().chain(pattern.measured.iter()) {
            if v == 0 || v > n {
                return Err(ModelError::PatternOutOfRange(v, n));
            }
        }
        Ok(ModelSet {
            dag,
            pattern,
            known: BTreeSet::new(),
        })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn pattern(&self) -> &SignalPattern {
        &self.pattern
    }

    pub fn excited(&self) -> &VertexSet {
        &self.pattern.excited
    }

    pub fn measured(&self) -> &VertexSet {
        &self.pattern.measured
    }

    pub fn is_excited(&self, v: Vertex) -> bool {
        self.pattern.excited.contains(v)
    }

    pub fn is_measured(&self, v: Vertex) -> bool {
        self.pattern.measured.contains(v)
    }

    /// Marks an existing edge as known a priori.
    pub fn set_known(&mut self, from: Vertex, to: Vertex) -> Result<(), ModelError> {
        if !self.dag.has_edge(from, to) {
            return Err(ModelError::NoSuchEdge(from, to));
        }
        self.known.insert((from, to));
        Ok(())
    }

    pub fn edge_status(&self, from: Vertex, to: Vertex) -> EdgeStatus {
        if self.known.contains(&(from, to)) {
            EdgeStatus::Known
        } else {
            EdgeStatus::Parameterized
        }
    }

    pub fn known_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.known.iter().copied()
    }

    /// Edges still to be identified, in lexicographic order.
    pub fn parameterized_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.dag
            .edges()
            .into_iter()
            .filter(|e| !self.known.contains(e))
            .collect()
    }

    /// In-neighbors of `v` along parameterized edges only.
    pub fn parameterized_in_neighbors(&self, v: Vertex) -> VertexSet {
        self.dag
            .in_neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !self.known.contains(&(u, v)))
            .collect()
    }

    /// Out-neighbors of `v` along parameterized edges only.
    pub fn parameterized_out_neighbors(&self, v: Vertex) -> VertexSet {
        self.dag
            .out_neighbors(v)
            .iter()
            .copied()
            .filter(|&w| !self.known.contains(&(v, w)))
            .collect()
    }

    /// True when every vertex is excited or measured (or both). Required by
    /// the sufficient checkers, not by the necessary one.
    pub fn has_full_cover(&self) -> bool {
        self.dag
            .vertices()
            .all(|v| self.is_excited(v) || self.is_measured(v))
    }

    /// The transpose model: edges reversed, excitation and measurement roles
    /// swapped, knowledge carried over to the reversed edges. Identifiability
    /// is invariant under this construction, which is what makes dual checks
    /// sound.
    pub fn transpose_model(&self) -> ModelSet {
        ModelSet {
            dag: self.dag.transpose(),
            pattern: self.pattern.swapped(),
            known: self.known.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }
}

/// Free-function form of [`ModelSet::has_full_cover`].
pub fn validate_full_cover(ms: &ModelSet) -> bool {
    ms.has_full_cover()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vset;

    fn acyclic7_dag() -> Dag {
        Dag::from_edges(
            7,
            &[(1, 3), (3, 6), (2, 5), (4, 3), (4, 7), (5, 7), (2, 4), (2, 1)],
        )
        .unwrap()
    }

    fn acyclic7_model() -> ModelSet {
        ModelSet::new(
            acyclic7_dag(),
            SignalPattern::new(vset![1, 2, 3, 4, 5], vset![5, 6, 7]),
        )
        .unwrap()
    }

    #[test]
    fn pattern_validation() {
        let err = ModelSet::new(
            Dag::new(3),
            SignalPattern::new(vset![1, 9], vset![2]),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::PatternOutOfRange(9, 3));
    }

    #[test]
    fn full_cover_detection() {
        let ms = ModelSet::new(
            acyclic7_dag(),
            SignalPattern::new(vset![1, 2, 3, 4], vset![5, 6, 7]),
        )
        .unwrap();
        assert!(validate_full_cover(&ms));

        let ms = ModelSet::new(Dag::new(2), SignalPattern::new(vset![1], vset![])).unwrap();
        assert!(!validate_full_cover(&ms));

        let ms = ModelSet::new(Dag::new(2), SignalPattern::new(vset![1, 2], vset![])).unwrap();
        assert!(validate_full_cover(&ms));
    }

    #[test]
    fn transpose_swaps_roles_and_reverses_knowledge() {
        let mut ms = acyclic7_model();
        ms.set_known(2, 5).unwrap();
        let t = ms.transpose_model();
        assert_eq!(t.excited(), &vset![5, 6, 7]);
        assert_eq!(t.measured(), &vset![1, 2, 3, 4, 5]);
        assert!(t.dag().has_edge(5, 2));
        assert_eq!(t.edge_status(5, 2), EdgeStatus::Known);
        assert_eq!(t.edge_status(3, 1), EdgeStatus::Parameterized);

        // Involution.
        assert_eq!(t.transpose_model(), ms);
    }

    #[test]
    fn transpose_of_symmetric_pattern_keeps_roles() {
        let dag = Dag::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let all = VertexSet::full(3);
        let ms = ModelSet::new(dag, SignalPattern::new(all.clone(), all.clone())).unwrap();
        let t = ms.transpose_model();
        assert_eq!(t.excited(), &all);
        assert_eq!(t.measured(), &all);
    }

    #[test]
    fn knowledge_bookkeeping() {
        let mut ms = acyclic7_model();
        assert_eq!(ms.parameterized_edges().len(), 8);
        ms.set_known(1, 3).unwrap();
        ms.set_known(4, 3).unwrap();
        assert_eq!(ms.edge_status(1, 3), EdgeStatus::Known);
        assert_eq!(ms.parameterized_edges().len(), 6);
        assert_eq!(ms.parameterized_in_neighbors(3), vset![]);
        assert_eq!(ms.parameterized_out_neighbors(1), vset![]);
        assert_eq!(ms.parameterized_in_neighbors(7), vset![4, 5]);
        assert!(ms.set_known(3, 1).is_err());
    }

    #[test]
    fn verdict_lattice() {
        use Verdict::*;
        assert!(Identifiable.contradicts(NotIdentifiable));
        assert!(!Identifiable.contradicts(Unknown));
        assert_eq!(Unknown.strongest(Identifiable), Identifiable);
        assert_eq!(NotIdentifiable.strongest(Unknown), NotIdentifiable);
        assert_eq!(Unknown.strongest(Unknown), Unknown);
    }
}
