//! Seeded generators for formulas, circuits and CNF instances, and the
//! exhaustive formula enumeration used by the test corpus.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuits::{Circuit, Gate};
use crate::diagram::{Diagram, Endpoint, NodeId};
use crate::gadgets::{BoolFormula, Expr};
use crate::phase::DyadicPhase;

/// A random tree with exactly `ops` operators over `x1..xn`.
pub fn random_expr(rng: &mut impl Rng, n: usize, ops: usize) -> Expr {
    if ops == 0 {
        return Expr::var(rng.gen_range(0..n));
    }
    match rng.gen_range(0..3) {
        0 => Expr::not(random_expr(rng, n, ops - 1)),
        k => {
            let left = rng.gen_range(0..ops);
            let a = random_expr(rng, n, left);
            let b = random_expr(rng, n, ops - 1 - left);
            if k == 1 {
                Expr::and(a, b)
            } else {
                Expr::or(a, b)
            }
        }
    }
}

/// A random formula with `n` variables and at most `max_ops` operators.
pub fn random_formula(rng: &mut impl Rng, n: usize, max_ops: usize) -> BoolFormula {
    let ops = rng.gen_range(0..=max_ops);
    BoolFormula::new(n, random_expr(rng, n, ops))
}

/// A random formula that is neither constantly true nor constantly false.
pub fn random_nonconstant_formula(rng: &mut impl Rng, n: usize, max_ops: usize) -> BoolFormula {
    loop {
        let f = random_formula(rng, n, max_ops.max(1));
        let first = f.eval(0);
        if (1..1u64 << n).any(|x| f.eval(x) != first) {
            return f;
        }
    }
}

/// Every tree with at most `max_ops` operators over `x1..xn`, with
/// `Not`, `And` and `Or` at internal nodes.
pub fn enumerate_exprs(n: usize, max_ops: usize) -> Vec<Expr> {
    let mut by_ops: Vec<Vec<Expr>> = vec![(0..n).map(Expr::var).collect()];
    for k in 1..=max_ops {
        let mut level: Vec<Expr> = by_ops[k - 1].iter().cloned().map(Expr::not).collect();
        for left in 0..k {
            let right = k - 1 - left;
            for a in &by_ops[left] {
                for b in &by_ops[right] {
                    level.push(Expr::and(a.clone(), b.clone()));
                    level.push(Expr::or(a.clone(), b.clone()));
                }
            }
        }
        by_ops.push(level);
    }
    by_ops.into_iter().flatten().collect()
}

/// Calls `f` on every tree [`enumerate_exprs`] would return, in the same
/// order, keeping only the trees below the top level in memory.
pub fn for_each_expr(n: usize, max_ops: usize, mut f: impl FnMut(&Expr)) {
    if max_ops == 0 {
        (0..n).map(Expr::var).for_each(|e| f(&e));
        return;
    }
    let lower = enumerate_exprs(n, max_ops - 1);
    lower.iter().for_each(&mut f);
    // start offset of each operator count inside `lower`
    let mut starts = vec![0usize];
    starts.extend((0..max_ops).map(|k| count_exprs(n, k) as usize));
    let level = |k: usize| &lower[starts[k]..starts[k + 1]];
    for e in level(max_ops - 1) {
        f(&Expr::not(e.clone()));
    }
    for left in 0..max_ops {
        for a in level(left) {
            for b in level(max_ops - 1 - left) {
                f(&Expr::and(a.clone(), b.clone()));
                f(&Expr::or(a.clone(), b.clone()));
            }
        }
    }
}

/// Number of trees [`enumerate_exprs`] returns, without building them.
pub fn count_exprs(n: usize, max_ops: usize) -> u128 {
    let mut t = vec![n as u128];
    for k in 1..=max_ops {
        let pairs: u128 = (0..k).map(|l| t[l] * t[k - 1 - l]).sum();
        t.push(t[k - 1] + 2 * pairs);
    }
    t.iter().sum()
}

/// A random circuit of `depth` gates over `Z_{aπ/2^k}` (`k ≤ max_k`), `H` and
/// CNOT.
pub fn random_circuit(rng: &mut impl Rng, n: usize, depth: usize, max_k: u32) -> Circuit {
    let gates = (0..depth)
        .map(|_| match rng.gen_range(0..3) {
            0 => {
                let k = rng.gen_range(0..=max_k);
                let a = rng.gen_range(0..1i64 << (k + 1));
                Gate::z(rng.gen_range(0..n), DyadicPhase::new(a, k))
            }
            1 if n >= 2 => {
                let mut qs: Vec<usize> = (0..n).collect();
                qs.shuffle(rng);
                Gate::cnot(qs[0], qs[1])
            }
            _ => Gate::h(rng.gen_range(0..n)),
        })
        .collect();
    Circuit::new(n, gates).expect("generated gates are in range")
}

/// A random connected diagram: `spiders` Z/X spiders with phases `aπ/2^k`
/// (`k ≤ max_k`) joined by a random spanning tree plus `extra` further wires,
/// each spider-spider wire carrying a Hadamard box with probability 1/5, and
/// every boundary attached to a random spider.
pub fn random_diagram(
    rng: &mut impl Rng,
    n_in: usize,
    n_out: usize,
    spiders: usize,
    extra: usize,
    max_k: u32,
) -> Diagram {
    let spiders = spiders.max(1);
    let mut d = Diagram::new(n_in, n_out);
    let ids: Vec<NodeId> = (0..spiders)
        .map(|_| {
            let k = rng.gen_range(0..=max_k);
            let p = DyadicPhase::new(rng.gen_range(0..1i64 << (k + 1)), k);
            if rng.gen::<bool>() {
                d.add_z(p)
            } else {
                d.add_x(p)
            }
        })
        .collect();
    let link = |d: &mut Diagram, rng: &mut dyn rand::RngCore, a: NodeId, b: NodeId| {
        if rng.gen_range(0..5) == 0 {
            let h = d.add_h();
            d.connect(a, h);
            d.connect(h, b);
        } else {
            d.connect(a, b);
        }
    };
    for i in 1..spiders {
        let j = rng.gen_range(0..i);
        link(&mut d, rng, ids[i], ids[j]);
    }
    if spiders >= 2 {
        for _ in 0..extra {
            let a = rng.gen_range(0..spiders);
            let b = (a + rng.gen_range(1..spiders)) % spiders;
            link(&mut d, rng, ids[a], ids[b]);
        }
    }
    for i in 0..n_in {
        let s = ids[rng.gen_range(0..spiders)];
        d.add_wire(Endpoint::Input(i), Endpoint::node(s));
    }
    for i in 0..n_out {
        let s = ids[rng.gen_range(0..spiders)];
        d.add_wire(Endpoint::node(s), Endpoint::Output(i));
    }
    d
}

/// A random CNF with `clauses` clauses of `width` distinct literals.
pub fn random_cnf<R: Rng>(rng: &mut R, n: usize, clauses: usize, width: usize) -> BoolFormula {
    let width = width.min(n).max(1);
    let clause = |rng: &mut R| {
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(rng);
        let lits: Vec<Expr> = vars[..width]
            .iter()
            .map(|&v| {
                if rng.gen::<bool>() {
                    Expr::var(v)
                } else {
                    Expr::not(Expr::var(v))
                }
            })
            .collect();
        lits.into_iter().reduce(Expr::or).expect("width >= 1")
    };
    let first = clause(rng);
    let expr = (1..clauses.max(1)).fold(first, |acc, _| Expr::and(acc, clause(rng)));
    BoolFormula::new(n, expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumeration_counts_match() {
        for n in 1..=3 {
            for k in 0..=3 {
                assert_eq!(enumerate_exprs(n, k).len() as u128, count_exprs(n, k));
            }
        }
        assert_eq!(count_exprs(1, 1), 1 + 3);
        for (n, k) in [(1, 0), (2, 2), (2, 3)] {
            let mut seen = Vec::new();
            for_each_expr(n, k, |e| seen.push(e.clone()));
            assert_eq!(seen, enumerate_exprs(n, k));
        }
    }

    #[test]
    fn random_diagrams_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let d = random_diagram(&mut rng, 2, 1, 5, 3, 2);
            assert!(d.is_valid(), "{:?}", d.validate());
        }
    }

    #[test]
    fn generators_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let f = random_formula(&mut rng, 4, 10);
            assert!(f.expr.op_count() <= 10);
            let c = random_circuit(&mut rng, 3, 12, 3);
            assert_eq!(c.gates.len(), 12);
            let g = random_nonconstant_formula(&mut rng, 3, 6);
            assert!((0..8).any(|x| g.eval(x)) && (0..8).any(|x| !g.eval(x)));
        }
    }
}
