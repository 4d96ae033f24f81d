//! Random parity constraints and the sampling-based satisfiability test.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_n, ReductionError};
use crate::eval::EvalOptions;
use crate::gadgets::{sampling_gadget, BoolFormula, Expr};
use crate::verify;

/// `p ⊕ q` as `¬(¬p ∧ ¬q) ∧ ¬(p ∧ q)`.
fn xor(p: Expr, q: Expr) -> Expr {
    let either = Expr::not(Expr::and(Expr::not(p.clone()), Expr::not(q.clone())));
    let both = Expr::not(Expr::and(p, q));
    Expr::and(either, both)
}

fn parity(vars: &[usize]) -> Expr {
    match vars {
        [v] => Expr::var(*v),
        _ => {
            let (l, r) = vars.split_at(vars.len() / 2);
            xor(parity(l), parity(r))
        }
    }
}

/// `m` formulas `f ∧ (A_j·x = b_j)` over GF(2), with `k_j` uniform in
/// `1..=n+1` rows and `A_j`, `b_j` uniform. Formula `j` draws from ChaCha8
/// stream `j` of `seed`.
pub fn vv_reduce(f: &BoolFormula, seed: u64, m: usize) -> Vec<BoolFormula> {
    let n = f.n;
    (0..m)
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let k = rng.gen_range(1..=n + 1);
            let mut expr = f.expr.clone();
            for _ in 0..k {
                let row: Vec<usize> = (0..n).filter(|_| rng.gen::<bool>()).collect();
                let b: bool = rng.gen();
                let c = if row.is_empty() {
                    if !b {
                        continue;
                    }
                    Expr::and(Expr::var(0), Expr::not(Expr::var(0)))
                } else if b {
                    parity(&row)
                } else {
                    Expr::not(parity(&row))
                };
                expr = Expr::and(expr, c);
            }
            BoolFormula::new(n, expr)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatDecision {
    pub sat: bool,
    /// First constrained formula whose samples were mostly 1.
    pub witness_index: Option<usize>,
    /// Number of 1 outcomes per constrained formula.
    pub ones: Vec<usize>,
    pub trials: usize,
}

/// Samples `sampling_gadget(f_j, 1)` `trials` times for each `f_j` of
/// `vv_reduce(f, seed, m)`, under the arbitrary-output promise. Declares sat
/// iff some `f_j` gives 1 in a strict majority of its trials.
pub fn sat_decide_randomized(
    f: &BoolFormula,
    seed: u64,
    m: usize,
    trials: usize,
) -> Result<SatDecision, ReductionError> {
    sat_decide_randomized_with(f, seed, m, trials, EvalOptions::default())
}

pub fn sat_decide_randomized_with(
    f: &BoolFormula,
    seed: u64,
    m: usize,
    trials: usize,
    opts: EvalOptions,
) -> Result<SatDecision, ReductionError> {
    check_n(f.n, 20)?;
    let mut ones = Vec::with_capacity(m);
    let mut seeds = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5a3f_1e5d_0b57);
    let mut witness = None;
    for (j, fj) in vv_reduce(f, seed, m).iter().enumerate() {
        let d = sampling_gadget(fj, 1)?;
        let s = verify::sample_with(&d, seeds.next_u64(), trials, true, opts)?;
        let k = s.iter().filter(|b| b.as_str() == "1").count();
        if witness.is_none() && 2 * k > trials {
            witness = Some(j);
        }
        ones.push(k);
    }
    Ok(SatDecision {
        sat: witness.is_some(),
        witness_index: witness,
        ones,
        trials,
    })
}
