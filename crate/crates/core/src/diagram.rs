//! ZX-diagrams: spiders, Hadamard boxes and float-only matrix boxes joined by
//! wires, with ordered input and output boundaries.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phase::DyadicPhase;

pub type NodeId = u64;

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("cannot compose: first has {outputs} outputs, second has {inputs} inputs")]
    ArityMismatch { outputs: usize, inputs: usize },
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("diagram json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Which leg of a node a wire attaches to. Spiders and H boxes only use
/// `Plain`; a matrix box has exactly one `In` and one `Out` leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    Plain,
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Node { id: NodeId, port: Port },
    Input(usize),
    Output(usize),
}

impl Endpoint {
    pub fn node(id: NodeId) -> Self {
        Endpoint::Node {
            id,
            port: Port::Plain,
        }
    }

    pub fn port_in(id: NodeId) -> Self {
        Endpoint::Node { id, port: Port::In }
    }

    pub fn port_out(id: NodeId) -> Self {
        Endpoint::Node {
            id,
            port: Port::Out,
        }
    }

    pub fn node_id(&self) -> Option<NodeId> {
        match self {
            Endpoint::Node { id, .. } => Some(*id),
            _ => None,
        }
    }

    fn shifted(self, node_off: NodeId, in_off: usize, out_off: usize) -> Self {
        match self {
            Endpoint::Node { id, port } => Endpoint::Node {
                id: id + node_off,
                port,
            },
            Endpoint::Input(i) => Endpoint::Input(i + in_off),
            Endpoint::Output(i) => Endpoint::Output(i + out_off),
        }
    }

    fn mirrored(self) -> Self {
        match self {
            Endpoint::Node { id, port } => Endpoint::Node {
                id,
                port: match port {
                    Port::Plain => Port::Plain,
                    Port::In => Port::Out,
                    Port::Out => Port::In,
                },
            },
            Endpoint::Input(i) => Endpoint::Output(i),
            Endpoint::Output(i) => Endpoint::Input(i),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Z(DyadicPhase),
    X(DyadicPhase),
    H,
    /// Row-major `[m00, m01, m10, m11]`, rows indexed by the output leg.
    Matrix([Complex64; 4]),
}

impl NodeKind {
    pub fn is_spider(&self) -> bool {
        matches!(self, NodeKind::Z(_) | NodeKind::X(_))
    }

    pub fn phase(&self) -> Option<DyadicPhase> {
        match self {
            NodeKind::Z(p) | NodeKind::X(p) => Some(*p),
            _ => None,
        }
    }

    pub fn same_colour(&self, other: &NodeKind) -> bool {
        matches!(
            (self, other),
            (NodeKind::Z(_), NodeKind::Z(_)) | (NodeKind::X(_), NodeKind::X(_))
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

/// A ZX-diagram. Wires are identified by their index in [`Diagram::wires`].
#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    pub(crate) nodes: BTreeMap<NodeId, NodeKind>,
    pub(crate) wires: Vec<(Endpoint, Endpoint)>,
    pub(crate) n_inputs: usize,
    pub(crate) n_outputs: usize,
}

impl Diagram {
    pub fn new(n_inputs: usize, n_outputs: usize) -> Self {
        Diagram {
            nodes: BTreeMap::new(),
            wires: Vec::new(),
            n_inputs,
            n_outputs,
        }
    }

    pub fn empty() -> Self {
        Self::new(0, 0)
    }

    pub fn identity(n: usize) -> Self {
        let mut d = Self::new(n, n);
        for i in 0..n {
            d.add_wire(Endpoint::Input(i), Endpoint::Output(i));
        }
        d
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn nodes(&self) -> &BTreeMap<NodeId, NodeKind> {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeKind> {
        self.nodes.get(&id)
    }

    pub fn wires(&self) -> &[(Endpoint, Endpoint)] {
        &self.wires
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn next_id(&self) -> NodeId {
        self.nodes.keys().next_back().map_or(0, |k| k + 1)
    }

    pub fn add_node(&mut self, kind: NodeKind) -> NodeId {
        let id = self.next_id();
        self.nodes.insert(id, kind);
        id
    }

    pub fn add_z(&mut self, phase: DyadicPhase) -> NodeId {
        self.add_node(NodeKind::Z(phase))
    }

    pub fn add_x(&mut self, phase: DyadicPhase) -> NodeId {
        self.add_node(NodeKind::X(phase))
    }

    pub fn add_h(&mut self) -> NodeId {
        self.add_node(NodeKind::H)
    }

    pub fn add_matrix(&mut self, m: [Complex64; 4]) -> NodeId {
        self.add_node(NodeKind::Matrix(m))
    }

    /// Adds a wire and returns its index.
    pub fn add_wire(&mut self, a: Endpoint, b: Endpoint) -> usize {
        self.wires.push((a, b));
        self.wires.len() - 1
    }

    /// Adds a plain wire between two nodes.
    pub fn connect(&mut self, a: NodeId, b: NodeId) -> usize {
        self.add_wire(Endpoint::node(a), Endpoint::node(b))
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.wires
            .iter()
            .map(|(a, b)| (a.node_id() == Some(id)) as usize + (b.node_id() == Some(id)) as usize)
            .sum()
    }

    /// Indices of wires touching `id`.
    pub fn incident_wires(&self, id: NodeId) -> Vec<usize> {
        self.wires
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| a.node_id() == Some(id) || b.node_id() == Some(id))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn count_kind(&self, pred: impl Fn(&NodeKind) -> bool) -> usize {
        self.nodes.values().filter(|k| pred(k)).count()
    }

    pub fn has_matrix_box(&self) -> bool {
        self.nodes
            .values()
            .any(|k| matches!(k, NodeKind::Matrix(_)))
    }

    /// Sequential composition: `first`'s outputs feed `second`'s inputs.
    /// The result denotes `second ∘ first`.
    pub fn compose(first: &Diagram, second: &Diagram) -> Result<Diagram, DiagramError> {
        if first.n_outputs != second.n_inputs {
            return Err(DiagramError::ArityMismatch {
                outputs: first.n_outputs,
                inputs: second.n_inputs,
            });
        }
        #[derive(Clone, Copy, PartialEq)]
        enum E {
            Real(Endpoint),
            Junction(usize),
        }
        let off = first.next_id();
        let mut nodes = first.nodes.clone();
        for (id, k) in &second.nodes {
            nodes.insert(id + off, k.clone());
        }

        let mut pre: Vec<(E, E)> = Vec::new();
        let map_first = |e: Endpoint| match e {
            Endpoint::Output(k) => E::Junction(k),
            other => E::Real(other),
        };
        let map_second = |e: Endpoint| match e {
            Endpoint::Input(k) => E::Junction(k),
            other => E::Real(other.shifted(off, 0, 0)),
        };
        for &(a, b) in &first.wires {
            pre.push((map_first(a), map_first(b)));
        }
        for &(a, b) in &second.wires {
            pre.push((map_second(a), map_second(b)));
        }

        let mut at_junction: Vec<Vec<usize>> = vec![Vec::new(); first.n_outputs];
        for (w, (a, b)) in pre.iter().enumerate() {
            for e in [a, b] {
                if let E::Junction(k) = e {
                    at_junction[*k].push(w);
                }
            }
        }
        if at_junction.iter().any(|v| v.len() != 2) {
            return Err(DiagramError::Invalid(
                "boundary slot not wired exactly once".into(),
            ));
        }

        let mut used = vec![false; pre.len()];
        let mut wires = Vec::new();
        let far = |w: usize, from: E| -> E {
            let (a, b) = pre[w];
            if a == from {
                b
            } else {
                a
            }
        };
        for start in 0..pre.len() {
            if used[start] {
                continue;
            }
            let (a, b) = pre[start];
            let (origin, mut cur) = match (a, b) {
                (E::Real(_), _) => (a, b),
                (_, E::Real(_)) => (b, a),
                _ => continue,
            };
            used[start] = true;
            let mut w = start;
            while let E::Junction(k) = cur {
                let next = at_junction[k]
                    .iter()
                    .copied()
                    .find(|&x| x != w)
                    .unwrap_or(w);
                if next == w {
                    // the same wire meets this junction twice; cannot happen for
                    // a wire with a real end
                    break;
                }
                used[next] = true;
                cur = far(next, E::Junction(k));
                w = next;
            }
            if let (E::Real(x), E::Real(y)) = (origin, cur) {
                wires.push((x, y));
            }
        }
        let loops = {
            // remaining wires form closed junction cycles
            let mut count = 0;
            for start in 0..pre.len() {
                if used[start] {
                    continue;
                }
                count += 1;
                let mut cur = pre[start].1;
                used[start] = true;
                while let E::Junction(k) = cur {
                    match at_junction[k].iter().copied().find(|&x| !used[x]) {
                        Some(next) => {
                            used[next] = true;
                            cur = far(next, E::Junction(k));
                        }
                        None => break,
                    }
                }
            }
            count
        };

        let mut d = Diagram {
            nodes,
            wires,
            n_inputs: first.n_inputs,
            n_outputs: second.n_outputs,
        };
        for _ in 0..loops {
            // a closed loop is the scalar 2, the value of a leg-free Z spider
            d.add_z(DyadicPhase::ZERO);
        }
        d.remove_self_loops();
        Ok(d)
    }

    /// Eliminates self-loops produced by composition, preserving semantics.
    fn remove_self_loops(&mut self) {
        let mut i = 0;
        while i < self.wires.len() {
            let (a, b) = self.wires[i];
            let (Some(x), Some(y)) = (a.node_id(), b.node_id()) else {
                i += 1;
                continue;
            };
            if x != y {
                i += 1;
                continue;
            }
            self.wires.remove(i);
            match self.nodes[&x].clone() {
                NodeKind::Z(_) | NodeKind::X(_) => {}
                NodeKind::H => {
                    // tr(H) = 0
                    self.nodes.remove(&x);
                    self.add_z(DyadicPhase::PI);
                }
                NodeKind::Matrix(m) => {
                    let t = m[0] + m[3];
                    let zero = Complex64::new(0.0, 0.0);
                    self.nodes
                        .insert(x, NodeKind::Matrix([t, zero, zero, zero]));
                    let z = self.add_z(DyadicPhase::ZERO);
                    self.add_wire(Endpoint::port_out(x), Endpoint::node(z));
                    self.add_wire(Endpoint::node(z), Endpoint::port_in(x));
                }
            }
        }
    }

    /// Parallel composition; `bottom`'s boundaries follow `top`'s.
    pub fn tensor(top: &Diagram, bottom: &Diagram) -> Diagram {
        let off = top.next_id();
        let mut d = top.clone();
        for (id, k) in &bottom.nodes {
            d.nodes.insert(id + off, k.clone());
        }
        for &(a, b) in &bottom.wires {
            d.wires.push((
                a.shifted(off, top.n_inputs, top.n_outputs),
                b.shifted(off, top.n_inputs, top.n_outputs),
            ));
        }
        d.n_inputs += bottom.n_inputs;
        d.n_outputs += bottom.n_outputs;
        d
    }

    /// Mirror image with phases negated; denotes the conjugate transpose.
    pub fn adjoint(&self) -> Diagram {
        let nodes = self
            .nodes
            .iter()
            .map(|(id, k)| {
                let k = match k {
                    NodeKind::Z(p) => NodeKind::Z(-*p),
                    NodeKind::X(p) => NodeKind::X(-*p),
                    NodeKind::H => NodeKind::H,
                    NodeKind::Matrix(m) => {
                        NodeKind::Matrix([m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()])
                    }
                };
                (*id, k)
            })
            .collect();
        let wires = self
            .wires
            .iter()
            .map(|&(a, b)| (a.mirrored(), b.mirrored()))
            .collect();
        Diagram {
            nodes,
            wires,
            n_inputs: self.n_outputs,
            n_outputs: self.n_inputs,
        }
    }

    /// Every structural violation; empty when the diagram is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut v = |code: &'static str, detail: String| out.push(Violation { code, detail });
        let mut in_count = vec![0usize; self.n_inputs];
        let mut out_count = vec![0usize; self.n_outputs];
        let ids: Vec<NodeId> = self.nodes.keys().copied().collect();
        // per node: plain, in and out leg counts
        let mut legs = vec![[0usize; 3]; ids.len()];
        for (w, &(a, b)) in self.wires.iter().enumerate() {
            if let (Some(x), Some(y)) = (a.node_id(), b.node_id()) {
                if x == y {
                    v("self-loop", format!("wire {w} has both ends on node {x}"));
                }
            }
            for e in [a, b] {
                match e {
                    Endpoint::Input(i) => match in_count.get_mut(i) {
                        Some(c) => *c += 1,
                        None => v("boundary-range", format!("wire {w} uses input {i}")),
                    },
                    Endpoint::Output(i) => match out_count.get_mut(i) {
                        Some(c) => *c += 1,
                        None => v("boundary-range", format!("wire {w} uses output {i}")),
                    },
                    Endpoint::Node { id, port } => {
                        let Ok(pos) = ids.binary_search(&id) else {
                            v("unknown-node", format!("wire {w} references node {id}"));
                            continue;
                        };
                        let slot = match port {
                            Port::Plain => 0,
                            Port::In => 1,
                            Port::Out => 2,
                        };
                        legs[pos][slot] += 1;
                    }
                }
            }
        }
        for (i, c) in in_count.iter().enumerate() {
            match c {
                0 => v("boundary-unwired", format!("input {i}")),
                1 => {}
                _ => v("boundary-multiwired", format!("input {i} has {c} wires")),
            }
        }
        for (i, c) in out_count.iter().enumerate() {
            match c {
                0 => v("boundary-unwired", format!("output {i}")),
                1 => {}
                _ => v("boundary-multiwired", format!("output {i} has {c} wires")),
            }
        }
        for ((id, kind), &[p, i, o]) in self.nodes.iter().zip(&legs) {
            match kind {
                NodeKind::Matrix(_) => {
                    if p > 0 {
                        v("mbox-port", format!("matrix box {id} has an unported leg"));
                    }
                    if i != 1 || o != 1 {
                        v(
                            "mbox-arity",
                            format!("matrix box {id} has {i} in and {o} out legs"),
                        );
                    }
                }
                other => {
                    if i + o > 0 {
                        v("port-kind", format!("node {id} has in/out ports"));
                    }
                    if matches!(other, NodeKind::H) && p + i + o != 2 {
                        v("hbox-arity", format!("H box {id} has degree {}", p + i + o));
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DiagramFile::from(self)).expect("diagram serializes")
    }

    pub fn to_json_string(&self, pretty: bool) -> String {
        let f = DiagramFile::from(self);
        if pretty {
            serde_json::to_string_pretty(&f).expect("diagram serializes")
        } else {
            serde_json::to_string(&f).expect("diagram serializes")
        }
    }

    pub fn from_json_str(s: &str) -> Result<Diagram, DiagramError> {
        let f: DiagramFile = serde_json::from_str(s)?;
        f.into_diagram()
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramFile {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    nodes: Vec<NodeRecord>,
    wires: Vec<[EndRecord; 2]>,
}

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: NodeId,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase: Option<DyadicPhase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<[[f64; 2]; 4]>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EndRecord {
    Node {
        node: NodeId,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        port: Option<String>,
    },
    Boundary {
        boundary: String,
        index: usize,
    },
}

impl From<&Diagram> for DiagramFile {
    fn from(d: &Diagram) -> Self {
        let nodes = d
            .nodes
            .iter()
            .map(|(id, k)| {
                let (kind, phase, matrix) = match k {
                    NodeKind::Z(p) => ("Z", Some(*p), None),
                    NodeKind::X(p) => ("X", Some(*p), None),
                    NodeKind::H => ("H", None, None),
                    NodeKind::Matrix(m) => ("M", None, Some(m.map(|c| [c.re, c.im]))),
                };
                NodeRecord {
                    id: *id,
                    kind: kind.into(),
                    phase,
                    matrix,
                }
            })
            .collect();
        let end = |e: Endpoint| match e {
            Endpoint::Node { id, port } => EndRecord::Node {
                node: id,
                port: match port {
                    Port::Plain => None,
                    Port::In => Some("in".into()),
                    Port::Out => Some("out".into()),
                },
            },
            Endpoint::Input(i) => EndRecord::Boundary {
                boundary: "in".into(),
                index: i,
            },
            Endpoint::Output(i) => EndRecord::Boundary {
                boundary: "out".into(),
                index: i,
            },
        };
        DiagramFile {
            inputs: (0..d.n_inputs).collect(),
            outputs: (0..d.n_outputs).collect(),
            nodes,
            wires: d.wires.iter().map(|&(a, b)| [end(a), end(b)]).collect(),
        }
    }
}

impl DiagramFile {
    fn into_diagram(self) -> Result<Diagram, DiagramError> {
        let bad = |m: String| DiagramError::Invalid(m);
        let position = |slots: &[usize]| -> Result<BTreeMap<usize, usize>, DiagramError> {
            let mut m = BTreeMap::new();
            for (pos, s) in slots.iter().enumerate() {
                if m.insert(*s, pos).is_some() {
                    return Err(bad(format!("boundary slot {s} listed twice")));
                }
            }
            Ok(m)
        };
        let in_pos = position(&self.inputs)?;
        let out_pos = position(&self.outputs)?;
        let mut d = Diagram::new(self.inputs.len(), self.outputs.len());
        for n in self.nodes {
            let phase = n.phase.unwrap_or_default();
            let kind = match n.kind.as_str() {
                "Z" => NodeKind::Z(phase),
                "X" => NodeKind::X(phase),
                "H" => NodeKind::H,
                "M" => {
                    let m = n
                        .matrix
                        .ok_or_else(|| bad(format!("matrix box {} lacks matrix", n.id)))?;
                    NodeKind::Matrix(m.map(|[re, im]| Complex64::new(re, im)))
                }
                other => return Err(bad(format!("unknown node kind {other:?}"))),
            };
            if d.nodes.insert(n.id, kind).is_some() {
                return Err(bad(format!("duplicate node id {}", n.id)));
            }
        }
        for [a, b] in self.wires {
            let conv = |e: EndRecord| -> Result<Endpoint, DiagramError> {
                match e {
                    EndRecord::Node { node, port } => {
                        let port = match port.as_deref() {
                            None => Port::Plain,
                            Some("in") => Port::In,
                            Some("out") => Port::Out,
                            Some(p) => return Err(bad(format!("unknown port {p:?}"))),
                        };
                        Ok(Endpoint::Node { id: node, port })
                    }
                    EndRecord::Boundary { boundary, index } => match boundary.as_str() {
                        "in" => in_pos
                            .get(&index)
                            .map(|&p| Endpoint::Input(p))
                            .ok_or_else(|| bad(format!("input slot {index} not declared"))),
                        "out" => out_pos
                            .get(&index)
                            .map(|&p| Endpoint::Output(p))
                            .ok_or_else(|| bad(format!("output slot {index} not declared"))),
                        other => Err(bad(format!("unknown boundary {other:?}"))),
                    },
                }
            };
            let (a, b) = (conv(a)?, conv(b)?);
            d.add_wire(a, b);
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnot() -> Diagram {
        let mut d = Diagram::new(2, 2);
        let z = d.add_z(DyadicPhase::ZERO);
        let x = d.add_x(DyadicPhase::ZERO);
        d.add_wire(Endpoint::Input(0), Endpoint::node(z));
        d.add_wire(Endpoint::node(z), Endpoint::Output(0));
        d.add_wire(Endpoint::Input(1), Endpoint::node(x));
        d.add_wire(Endpoint::node(x), Endpoint::Output(1));
        d.connect(z, x);
        d
    }

    #[test]
    fn validate_examples() {
        assert!(cnot().validate().is_empty());

        let mut d = Diagram::new(1, 1);
        let h = d.add_h();
        let z = d.add_z(DyadicPhase::ZERO);
        d.add_wire(Endpoint::Input(0), Endpoint::node(h));
        d.add_wire(Endpoint::node(h), Endpoint::Output(0));
        d.connect(h, z);
        let codes: Vec<_> = d.validate().iter().map(|v| v.code).collect();
        assert_eq!(codes, vec!["hbox-arity"]);

        let mut d = Diagram::new(1, 1);
        let z = d.add_z(DyadicPhase::ZERO);
        d.add_wire(Endpoint::Input(0), Endpoint::node(z));
        let codes: Vec<_> = d.validate().iter().map(|v| v.code).collect();
        assert_eq!(codes, vec!["boundary-unwired"]);
    }

    #[test]
    fn adjoint_involution() {
        let mut d = cnot();
        let m = d.add_matrix([
            Complex64::new(1.0, 2.0),
            Complex64::new(3.0, -1.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 1.0),
        ]);
        let z = d.add_z(DyadicPhase::new(1, 2));
        d.add_wire(Endpoint::port_in(m), Endpoint::node(z));
        d.add_wire(Endpoint::port_out(m), Endpoint::node(z));
        assert_eq!(d.adjoint().adjoint(), d);
        assert_ne!(d.adjoint(), d);
    }

    #[test]
    fn compose_joins_chains() {
        let id = Diagram::identity(2);
        let c = Diagram::compose(&id, &cnot()).unwrap();
        assert_eq!(c.node_count(), 2);
        assert_eq!(c.wires().len(), 5);
        assert!(c.is_valid());
        let c2 = Diagram::compose(&Diagram::identity(2), &Diagram::identity(2)).unwrap();
        assert_eq!(c2, Diagram::identity(2));
        assert!(Diagram::compose(&Diagram::identity(1), &cnot()).is_err());
    }

    #[test]
    fn compose_closed_loop_becomes_scalar() {
        // cup then cap
        let mut cup = Diagram::new(0, 2);
        cup.add_wire(Endpoint::Output(0), Endpoint::Output(1));
        let mut cap = Diagram::new(2, 0);
        cap.add_wire(Endpoint::Input(0), Endpoint::Input(1));
        let d = Diagram::compose(&cup, &cap).unwrap();
        assert_eq!(d.node_count(), 1);
        assert_eq!(d.wires().len(), 0);
    }

    #[test]
    fn tensor_shifts_boundaries() {
        let d = Diagram::tensor(&cnot(), &Diagram::identity(1));
        assert_eq!(d.n_inputs(), 3);
        assert!(d.is_valid());
        assert_eq!(Diagram::tensor(&cnot(), &Diagram::empty()), cnot());
    }

    #[test]
    fn json_round_trip() {
        let mut d = cnot();
        let m = d.add_matrix([Complex64::new(0.1, 0.2); 4]);
        let z = d.add_z(DyadicPhase::new(3, 3));
        d.add_wire(Endpoint::port_in(m), Endpoint::node(z));
        d.add_wire(Endpoint::port_out(m), Endpoint::node(z));
        let s = d.to_json_string(false);
        let back = Diagram::from_json_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json_string(false), s);
    }

    #[test]
    fn json_slot_permutation() {
        let s = r#"{"inputs":[5,3],"outputs":[0,1],"nodes":[],
            "wires":[[{"boundary":"in","index":3},{"boundary":"out","index":0}],
                     [{"boundary":"in","index":5},{"boundary":"out","index":1}]]}"#;
        let d = Diagram::from_json_str(s).unwrap();
        assert_eq!(d.wires()[0], (Endpoint::Input(1), Endpoint::Output(0)));
        assert_eq!(d.wires()[1], (Endpoint::Input(0), Endpoint::Output(1)));
    }
}
