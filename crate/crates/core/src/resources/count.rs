use std::fmt::Write as _;

use rustc_hash::FxHashSet;

use super::CostModel;
use crate::circuit::{build_dag, Circuit, Dag, Op, ValidationError};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ResourceReport {
    /// T, Tdg and |T⟩ allocations. Unlowered Toffolis are not included.
    pub t_count: usize,
    pub ccx_count: usize,
    pub meas_depth: usize,
    /// Peak number of simultaneously live non-input qubits.
    pub ancilla_max: usize,
    /// Sum over ancilla allocations of the number of depth layers held.
    pub ancilla_depth: usize,
    /// Exact Z rotations, each standing for one synthesized rotation.
    pub rotation_bucket: usize,
}

impl ResourceReport {
    /// Flat `key=value` form; `effective_t` uses the default cost model.
    pub fn to_kv(&self) -> String {
        self.to_kv_with(&CostModel::<f64>::default())
    }

    pub fn to_kv_with(&self, model: &CostModel<f64>) -> String {
        let mut s = String::new();
        for (k, v) in [
            ("t_count", self.t_count),
            ("ccx_count", self.ccx_count),
            ("meas_depth", self.meas_depth),
            ("ancilla_max", self.ancilla_max),
            ("ancilla_depth", self.ancilla_depth),
            ("rotation_bucket", self.rotation_bucket),
        ] {
            writeln!(s, "{k}={v}").unwrap();
        }
        writeln!(s, "effective_t={:.6}", model.effective_t_report(self)).unwrap();
        s
    }
}

/// Start and finish layer of every DAG node under the depth weighting.
#[derive(Clone, Debug)]
pub struct DepthLevels {
    pub dag: Dag,
    pub start: Vec<usize>,
    pub finish: Vec<usize>,
}

impl DepthLevels {
    pub fn depth(&self) -> usize {
        self.finish.iter().copied().max().unwrap_or(0)
    }
}

/// Gadget spans, bare measurements and bare T-type instructions weigh one
/// layer; everything else is free.
pub fn depth_levels(c: &Circuit) -> Result<DepthLevels, ValidationError> {
    let dag = build_dag(c)?;
    let mut start = vec![0; dag.node_count()];
    let mut finish = vec![0; dag.node_count()];
    for (n, node) in dag.nodes() {
        let weight = match node.gadget {
            Some(_) => 1,
            None => {
                let op = c.instructions[node.instructions.start].op;
                (op.is_measurement() || op.is_t_type()) as usize
            }
        };
        let s = dag.predecessors(n).map(|p| finish[p.index()]).max().unwrap_or(0);
        start[n.index()] = s;
        finish[n.index()] = s + weight;
    }
    Ok(DepthLevels { dag, start, finish })
}

pub fn count(c: &Circuit) -> Result<ResourceReport, ValidationError> {
    let levels = depth_levels(c)?;
    let depth = levels.depth();
    let inputs: FxHashSet<u32> = c.input_qubits().iter().map(|q| q.0).collect();

    let mut report = ResourceReport { meas_depth: depth, ..Default::default() };
    for ins in &c.instructions {
        match ins.op {
            op if op.is_t_type() => report.t_count += 1,
            Op::Ccx => report.ccx_count += 1,
            Op::Rz(_) => report.rotation_bucket += 1,
            _ => {}
        }
    }

    let mut uses: Vec<Vec<usize>> = vec![Vec::new(); c.qubit_count];
    for (i, ins) in c.instructions.iter().enumerate() {
        for q in &ins.qubits {
            uses[q.index()].push(i);
        }
    }

    let mut live = 0usize;
    for (i, ins) in c.instructions.iter().enumerate() {
        let q = match ins.qubits.first() {
            Some(q) if !inputs.contains(&q.0) => *q,
            _ => continue,
        };
        if ins.op.is_alloc() {
            live += 1;
            report.ancilla_max = report.ancilla_max.max(live);

            let node = levels.dag.node_of_instruction(i);
            let in_span = c.span_of(i).is_some();
            let mut begin = in_span.then(|| levels.start[node.index()]);
            let mut end = depth;
            let touches = &uses[q.index()];
            let from = touches.partition_point(|&j| j <= i);
            for &j in &touches[from..] {
                let n = levels.dag.node_of_instruction(j).index();
                if c.instructions[j].op == Op::Release {
                    end = levels.finish[n];
                    break;
                }
                begin.get_or_insert(levels.start[n]);
            }
            let begin = begin.unwrap_or(end);
            report.ancilla_depth += end.saturating_sub(begin);
        } else if ins.op == Op::Release {
            live -= 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::gadgets::{adder_block, and_compute, and_uncompute, gidney_adder, AdderSpec};

    #[test]
    fn fig_counts() {
        let r = count(&gidney_adder(AdderSpec::new(5)).unwrap()).unwrap();
        assert_eq!((r.t_count, r.meas_depth, r.ancilla_max), (16, 8, 4));
        assert_eq!(r.ancilla_depth, 20);
        let b = count(&adder_block()).unwrap();
        assert_eq!((b.t_count, b.meas_depth), (4, 2));
        let a = count(&and_compute().1).unwrap();
        assert_eq!((a.t_count, a.meas_depth), (4, 1));
        let u = count(&and_uncompute()).unwrap();
        assert_eq!((u.t_count, u.meas_depth), (0, 1));
    }

    #[test]
    fn clifford_only_counts_measurements() {
        let mut b = CircuitBuilder::new();
        let q = b.input("q", 2);
        b.h(q[0]);
        b.cx(q[0], q[1]);
        b.measure_z(q[0]);
        b.measure_z(q[1]);
        let r = count(&b.finish().unwrap()).unwrap();
        assert_eq!(r.t_count, 0);
        assert_eq!(r.meas_depth, 1);
    }

    #[test]
    fn serialization_keys() {
        let r = ResourceReport { t_count: 16, ..Default::default() };
        let text = r.to_kv();
        assert!(text.starts_with("t_count=16\nccx_count=0\n"));
        assert!(text.ends_with("effective_t=16.000000\n"));
    }

    #[test]
    fn reverse_variant_depth_is_one() {
        let c = crate::gadgets::and_uncompute_reverse().circuit;
        assert_eq!(count(&c).unwrap().meas_depth, 1);
    }
}
