//! Spider fusion, identity removal and Hadamard cancellation.
//!
//! With spiders normalized as `|0…0⟩⟨0…0| + e^{iα}|1…1⟩⟨1…1|` (and the
//! Hadamard conjugate for X), fusing along one wire is exact with scalar 1, and
//! tracing out two legs of one spider is exact with scalar 1 as well. The tests
//! below and the integration suite check both against exact contraction.

use thiserror::Error;

use crate::diagram::{Diagram, Endpoint, NodeId, NodeKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("wire {0} does not exist")]
    NoSuchWire(usize),
    #[error("wire {0} does not join two distinct spiders of the same colour")]
    NotFusible(usize),
}

/// True iff `wire` joins two distinct spiders of the same colour.
pub fn is_fusible(d: &Diagram, wire: usize) -> bool {
    let Some(&(a, b)) = d.wires().get(wire) else {
        return false;
    };
    match (a.node_id(), b.node_id()) {
        (Some(x), Some(y)) if x != y => match (d.node(x), d.node(y)) {
            (Some(kx), Some(ky)) => kx.same_colour(ky),
            _ => false,
        },
        _ => false,
    }
}

/// Merges the two spiders joined by `wire`, summing their phases. Parallel
/// wires between them would become self-loops and are dropped.
pub fn fuse_once(d: &Diagram, wire: usize) -> Result<Diagram, RewriteError> {
    if wire >= d.wires().len() {
        return Err(RewriteError::NoSuchWire(wire));
    }
    if !is_fusible(d, wire) {
        return Err(RewriteError::NotFusible(wire));
    }
    let (a, b) = d.wires()[wire];
    let (keep, gone) = (a.node_id().unwrap(), b.node_id().unwrap());
    let mut out = d.clone();
    let merged = match (&d.nodes[&keep], &d.nodes[&gone]) {
        (NodeKind::Z(p), NodeKind::Z(q)) => NodeKind::Z(*p + *q),
        (NodeKind::X(p), NodeKind::X(q)) => NodeKind::X(*p + *q),
        _ => unreachable!("checked fusible"),
    };
    out.nodes.insert(keep, merged);
    out.nodes.remove(&gone);
    let redirect = |e: Endpoint| match e {
        Endpoint::Node { id, port } if id == gone => Endpoint::Node { id: keep, port },
        other => other,
    };
    out.wires = d
        .wires()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != wire)
        .map(|(_, &(x, y))| (redirect(x), redirect(y)))
        .filter(|(x, y)| !(x.node_id() == Some(keep) && y.node_id() == Some(keep)))
        .collect();
    Ok(out)
}

fn other_end(d: &Diagram, w: usize, id: NodeId) -> Endpoint {
    let (a, b) = d.wires()[w];
    if a.node_id() == Some(id) {
        b
    } else {
        a
    }
}

/// Would joining `x` and `y` directly create a loop on a non-spider?
fn bad_loop(d: &Diagram, x: Endpoint, y: Endpoint) -> bool {
    match (x.node_id(), y.node_id()) {
        (Some(p), Some(q)) if p == q => !d.nodes[&p].is_spider(),
        _ => false,
    }
}

/// Replaces the two wires at `mid` (and the node itself) by one wire.
fn splice(
    d: &Diagram,
    removed: &[NodeId],
    drop_wires: &[usize],
    x: Endpoint,
    y: Endpoint,
) -> Diagram {
    let mut out = d.clone();
    for id in removed {
        out.nodes.remove(id);
    }
    out.wires = d
        .wires()
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop_wires.contains(i))
        .map(|(_, w)| *w)
        .collect();
    if x.node_id().is_some() && x.node_id() == y.node_id() {
        // a spider traced over two legs: exact with scalar 1
    } else {
        out.wires.push((x, y));
    }
    out
}

fn try_fuse(d: &Diagram) -> Option<Diagram> {
    (0..d.wires().len())
        .find(|&w| is_fusible(d, w))
        .map(|w| fuse_once(d, w).expect("fusible"))
}

fn try_identity(d: &Diagram) -> Option<Diagram> {
    for (&id, kind) in d.nodes() {
        if !kind.is_spider() || !kind.phase().is_some_and(|p| p.is_zero()) {
            continue;
        }
        let ws = d.incident_wires(id);
        if ws.len() != 2 {
            continue;
        }
        let (x, y) = (other_end(d, ws[0], id), other_end(d, ws[1], id));
        if bad_loop(d, x, y) {
            continue;
        }
        return Some(splice(d, &[id], &ws, x, y));
    }
    None
}

fn try_hh(d: &Diagram) -> Option<Diagram> {
    for (w, &(a, b)) in d.wires().iter().enumerate() {
        let (Some(p), Some(q)) = (a.node_id(), b.node_id()) else {
            continue;
        };
        if p == q || d.nodes[&p] != NodeKind::H || d.nodes[&q] != NodeKind::H {
            continue;
        }
        let wp = d.incident_wires(p);
        let wq = d.incident_wires(q);
        let (Some(&op), Some(&oq)) = (wp.iter().find(|&&x| x != w), wq.iter().find(|&&x| x != w))
        else {
            continue;
        };
        if op == oq {
            // two H boxes joined by a double wire
            continue;
        }
        let (x, y) = (other_end(d, op, p), other_end(d, oq, q));
        if bad_loop(d, x, y) {
            continue;
        }
        return Some(splice(d, &[p, q], &[w, op, oq], x, y));
    }
    None
}

/// Applies one rewrite if any applies.
pub fn simplify_step(d: &Diagram) -> Option<Diagram> {
    try_fuse(d)
        .or_else(|| try_identity(d))
        .or_else(|| try_hh(d))
}

/// Rewrites until no rule applies. Each rule removes at least one node.
pub fn simplify(d: &Diagram) -> Diagram {
    let mut cur = d.clone();
    while let Some(next) = simplify_step(&cur) {
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::contract_exact;
    use crate::phase::DyadicPhase;

    fn chain(phases: &[DyadicPhase]) -> Diagram {
        let mut d = Diagram::new(1, 1);
        let ids: Vec<_> = phases.iter().map(|p| d.add_z(*p)).collect();
        d.add_wire(Endpoint::Input(0), Endpoint::node(ids[0]));
        for w in ids.windows(2) {
            d.connect(w[0], w[1]);
        }
        d.add_wire(Endpoint::node(*ids.last().unwrap()), Endpoint::Output(0));
        d
    }

    #[test]
    fn fuse_two_phases() {
        let a = DyadicPhase::new(1, 2);
        let b = DyadicPhase::new(1, 1);
        let d = chain(&[a, b]);
        let f = fuse_once(&d, 1).unwrap();
        assert_eq!(f.node_count(), 1);
        assert_eq!(f.nodes().values().next(), Some(&NodeKind::Z(a + b)));
        assert_eq!(contract_exact(&f).unwrap(), contract_exact(&d).unwrap());
        assert_eq!(fuse_once(&d, 0), Err(RewriteError::NotFusible(0)));
    }

    #[test]
    fn fuse_parallel_wires() {
        let mut d = Diagram::new(1, 1);
        let a = d.add_z(DyadicPhase::new(1, 2));
        let b = d.add_z(DyadicPhase::new(3, 2));
        d.add_wire(Endpoint::Input(0), Endpoint::node(a));
        d.connect(a, b);
        d.connect(a, b);
        d.connect(b, a);
        d.add_wire(Endpoint::node(b), Endpoint::Output(0));
        let f = fuse_once(&d, 1).unwrap();
        assert_eq!(f.wires().len(), 2);
        assert_eq!(contract_exact(&f).unwrap(), contract_exact(&d).unwrap());
    }

    #[test]
    fn simplify_chain() {
        let p = [
            DyadicPhase::new(1, 2),
            DyadicPhase::new(1, 1),
            DyadicPhase::new(3, 3),
        ];
        let d = chain(&p);
        let s = simplify(&d);
        assert_eq!(s.node_count(), 1);
        assert_eq!(
            s.nodes().values().next(),
            Some(&NodeKind::Z(p[0] + p[1] + p[2]))
        );
        assert_eq!(simplify(&s), s);
    }

    #[test]
    fn hh_cancels() {
        let mut d = Diagram::new(1, 1);
        let a = d.add_h();
        let b = d.add_h();
        d.add_wire(Endpoint::Input(0), Endpoint::node(a));
        d.connect(a, b);
        d.add_wire(Endpoint::node(b), Endpoint::Output(0));
        let s = simplify(&d);
        assert_eq!(s, Diagram::identity(1));
        assert_eq!(contract_exact(&s).unwrap(), contract_exact(&d).unwrap());
    }

    #[test]
    fn identity_spider_removed() {
        let d = chain(&[DyadicPhase::ZERO]);
        assert_eq!(simplify(&d), Diagram::identity(1));
    }
}
