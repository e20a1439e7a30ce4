use std::ops::Range;

use petgraph::graph::{DiGraph, NodeIndex};
use rustc_hash::FxHashMap;

use super::{validate, Circuit, GadgetTag, ValidationError};

/// A DAG node: one bare instruction or one whole gadget span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagNode {
    pub instructions: Range<usize>,
    pub gadget: Option<GadgetTag>,
}

/// Dependency graph over instructions, with gadget spans collapsed.
///
/// Node indices increase with instruction order and every edge points
/// forward, so index order is a topological order.
#[derive(Clone, Debug)]
pub struct Dag {
    pub graph: DiGraph<DagNode, ()>,
    node_of: Vec<NodeIndex>,
}

impl Dag {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn node_of_instruction(&self, index: usize) -> NodeIndex {
        self.node_of[index]
    }

    pub fn has_edge(&self, from_instruction: usize, to_instruction: usize) -> bool {
        self.graph
            .find_edge(self.node_of[from_instruction], self.node_of[to_instruction])
            .is_some()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeIndex, &DagNode)> {
        self.graph.node_indices().map(move |n| (n, &self.graph[n]))
    }

    pub fn predecessors(&self, n: NodeIndex) -> impl Iterator<Item = NodeIndex> + '_ {
        self.graph.neighbors_directed(n, petgraph::Direction::Incoming)
    }
}

/// Builds the dependency DAG of a valid circuit.
pub fn build_dag(c: &Circuit) -> Result<Dag, ValidationError> {
    validate(c)?;
    let mut graph = DiGraph::new();
    let mut node_of = Vec::with_capacity(c.len());
    let mut spans = c.gadget_spans.iter().peekable();
    let mut index = 0;
    while index < c.len() {
        let node = match spans.peek() {
            Some(s) if s.start == index => {
                let s = spans.next().unwrap();
                DagNode { instructions: s.start..s.end, gadget: Some(s.tag) }
            }
            _ => DagNode { instructions: index..index + 1, gadget: None },
        };
        let range = node.instructions.clone();
        let n = graph.add_node(node);
        node_of.extend(range.clone().map(|_| n));
        index = range.end;
    }

    let mut last_qubit: FxHashMap<u32, NodeIndex> = FxHashMap::default();
    let mut last_bit: FxHashMap<u32, NodeIndex> = FxHashMap::default();
    for (i, ins) in c.instructions.iter().enumerate() {
        let n = node_of[i];
        let link = |prev: Option<NodeIndex>, graph: &mut DiGraph<DagNode, ()>| {
            if let Some(p) = prev {
                if p != n && graph.find_edge(p, n).is_none() {
                    graph.add_edge(p, n, ());
                }
            }
        };
        for q in &ins.qubits {
            link(last_qubit.insert(q.0, n), &mut graph);
        }
        for bit in ins.op.result().into_iter().chain(ins.condition) {
            link(last_bit.insert(bit.0, n), &mut graph);
        }
    }
    Ok(Dag { graph, node_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{CircuitBuilder, Op};

    #[test]
    fn disjoint_gates_have_no_edge() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 2);
        b.h(q[0]);
        b.x(q[1]);
        let dag = build_dag(&b.finish().unwrap()).unwrap();
        assert_eq!(dag.graph.edge_count(), 0);
        assert!(!dag.has_edge(0, 1));
    }

    #[test]
    fn measurement_feeds_fixup() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 3);
        let c = b.measure_z(q[0]);
        b.conditioned(c, Op::Cz, &[q[1], q[2]]);
        let dag = build_dag(&b.finish().unwrap()).unwrap();
        assert!(dag.has_edge(0, 1));
    }

    #[test]
    fn edges_point_forward() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 3);
        b.cx(q[0], q[1]);
        b.cx(q[1], q[2]);
        b.h(q[0]);
        b.cz(q[0], q[2]);
        let dag = build_dag(&b.finish().unwrap()).unwrap();
        for e in dag.graph.edge_indices() {
            let (a, z) = dag.graph.edge_endpoints(e).unwrap();
            assert!(a < z);
        }
        assert_eq!(dag.graph.edge_count(), 4);
    }
}
