//! Tensor-network form of a diagram, the greedy planner and the pairwise
//! contraction engine shared by the exact and float evaluators.
//!
//! Every tensor stores `data · 2^{scale/2}`; spider and Hadamard prefactors
//! live in `scale` so the data stays integral in exact mode.

use std::borrow::Cow;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use smallvec::{smallvec, SmallVec};

use super::EvalError;
use crate::diagram::{Diagram, Endpoint, NodeKind, Port};
use crate::phase::DyadicPhase;

pub(crate) type Label = usize;
pub(crate) type Labels = SmallVec<[Label; 8]>;

#[derive(Clone, Debug)]
pub(crate) enum ProtoKind {
    Z(DyadicPhase),
    X(DyadicPhase),
    H,
    Matrix([Complex64; 4]),
    Delta,
}

#[derive(Clone, Debug)]
pub(crate) struct Proto {
    pub kind: ProtoKind,
    pub legs: Labels,
}

/// A diagram flattened into tensors over wire labels. Spiders of degree above
/// three are split into chains of three-legged spiders (fusion is exact).
#[derive(Clone, Debug)]
pub(crate) struct Network {
    pub protos: Vec<Proto>,
    pub inputs: Vec<Label>,
    pub outputs: Vec<Label>,
    pub n_labels: usize,
}

impl Network {
    pub fn build(d: &Diagram) -> Result<Network, EvalError> {
        let violations = d.validate();
        if !violations.is_empty() {
            return Err(EvalError::Invalid(violations));
        }
        let mut n_labels = d.wires().len();
        let mut inputs = vec![usize::MAX; d.n_inputs()];
        let mut outputs = vec![usize::MAX; d.n_outputs()];
        let ids: Vec<u64> = d.nodes().keys().copied().collect();
        let pos = |id: u64| ids.binary_search(&id).expect("validated node");
        let mut plain: Vec<Labels> = vec![Labels::new(); ids.len()];
        let mut ports: Vec<[Label; 2]> = vec![[0, 0]; ids.len()];
        let mut protos = Vec::with_capacity(ids.len());

        for (w, &(a, b)) in d.wires().iter().enumerate() {
            let both_boundary = a.node_id().is_none() && b.node_id().is_none();
            let mut labels = [w, w];
            if both_boundary {
                labels = [n_labels, n_labels + 1];
                n_labels += 2;
                protos.push(Proto {
                    kind: ProtoKind::Delta,
                    legs: Labels::from_slice(&labels),
                });
            }
            for (e, l) in [(a, labels[0]), (b, labels[1])] {
                match e {
                    Endpoint::Input(i) => inputs[i] = l,
                    Endpoint::Output(i) => outputs[i] = l,
                    Endpoint::Node { id, port } => match port {
                        Port::Plain => plain[pos(id)].push(l),
                        Port::In => ports[pos(id)][0] = l,
                        Port::Out => ports[pos(id)][1] = l,
                    },
                }
            }
        }

        for (i, kind) in d.nodes().values().enumerate() {
            let legs = std::mem::take(&mut plain[i]);
            match kind {
                NodeKind::Z(p) | NodeKind::X(p) => {
                    let mk = |p: DyadicPhase| match kind {
                        NodeKind::Z(_) => ProtoKind::Z(p),
                        _ => ProtoKind::X(p),
                    };
                    if legs.len() <= 3 {
                        protos.push(Proto { kind: mk(*p), legs });
                        continue;
                    }
                    // unfuse into a chain of degree-3 spiders
                    let n = legs.len();
                    let mut link = n_labels;
                    n_labels += 1;
                    protos.push(Proto {
                        kind: mk(*p),
                        legs: smallvec![legs[0], legs[1], link],
                    });
                    for &leg in &legs[2..n - 2] {
                        let next = n_labels;
                        n_labels += 1;
                        protos.push(Proto {
                            kind: mk(DyadicPhase::ZERO),
                            legs: smallvec![link, leg, next],
                        });
                        link = next;
                    }
                    protos.push(Proto {
                        kind: mk(DyadicPhase::ZERO),
                        legs: smallvec![link, legs[n - 2], legs[n - 1]],
                    });
                }
                NodeKind::H => protos.push(Proto {
                    kind: ProtoKind::H,
                    legs,
                }),
                NodeKind::Matrix(m) => {
                    protos.push(Proto {
                        kind: ProtoKind::Matrix(*m),
                        legs: Labels::from_slice(&ports[i]),
                    });
                }
            }
        }
        Ok(Network {
            protos,
            inputs,
            outputs,
            n_labels,
        })
    }

    /// Smallest power-of-two cyclotomic order holding every phase.
    pub fn order(&self) -> Result<u32, EvalError> {
        let mut k = 0;
        for p in &self.protos {
            if let ProtoKind::Z(ph) | ProtoKind::X(ph) = &p.kind {
                k = k.max(ph.k());
            }
        }
        if k > super::MAX_EXACT_K {
            return Err(EvalError::PhaseTooFine(k));
        }
        Ok(1u32 << (k + 1))
    }

    pub fn has_matrix(&self) -> bool {
        self.protos
            .iter()
            .any(|p| matches!(p.kind, ProtoKind::Matrix(_)))
    }
}

/// Ordered pairwise contractions. Initial tensors are numbered `0..initial`;
/// the result of step `s` receives number `initial + s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionPlan {
    pub initial: usize,
    pub steps: Vec<(usize, usize)>,
    /// Largest tensor (in entries) produced by any step.
    pub max_size: u128,
}

fn size_of_rank(r: usize) -> u128 {
    1u128 << r.min(126)
}

fn combine(a: &[Label], b: &[Label]) -> Labels {
    let mut out: Labels = a.iter().copied().filter(|l| !b.contains(l)).collect();
    out.extend(b.iter().copied().filter(|l| !a.contains(l)));
    out
}

pub(crate) fn greedy_plan(net: &Network, cap: u128) -> Result<ContractionPlan, EvalError> {
    const NONE: usize = usize::MAX;
    const IDX_MASK: u128 = (1 << 28) - 1;
    let initial = net.protos.len();
    if 2 * initial >= IDX_MASK as usize {
        return Err(EvalError::SizeCap {
            needed: 2 * initial as u128,
            cap: IDX_MASK,
        });
    }
    let mut tensors: Vec<Option<Labels>> = Vec::with_capacity(2 * initial);
    tensors.extend(net.protos.iter().map(|p| Some(p.legs.clone())));
    // every label has at most two owners
    let mut owners: Vec<[usize; 2]> = vec![[NONE, NONE]; net.n_labels];
    for (t, p) in net.protos.iter().enumerate() {
        for &l in &p.legs {
            let slot = &mut owners[l];
            if slot[0] == NONE {
                slot[0] = t;
            } else {
                slot[1] = t;
            }
        }
    }
    let mut heap = BinaryHeap::with_capacity(4 * initial);
    let key = |a: usize, b: usize, ta: &[Label], tb: &[Label]| {
        let shared = ta.iter().filter(|l| tb.contains(l)).count();
        let r = ta.len() + tb.len() - 2 * shared;
        let rank = |r: usize| 1i64 << r.min(62);
        let cost = rank(r) - rank(ta.len()) - rank(tb.len());
        // lexicographic (cost, r, min, -max) packed into one word
        let (lo, hi) = (a.min(b) as u128, a.max(b) as u128);
        let biased = (cost as u64 ^ 1 << 63) as u128;
        Reverse(biased << 64 | (r as u128) << 56 | lo << 28 | (IDX_MASK - hi))
    };
    for &[a, b] in &owners {
        if a != NONE && b != NONE && a != b {
            let (ta, tb) = (tensors[a].as_ref().unwrap(), tensors[b].as_ref().unwrap());
            heap.push(key(a, b, ta, tb));
        }
    }
    let mut steps = Vec::with_capacity(initial);
    let mut max_size = 0u128;
    let mut push_result = |tensors: &mut Vec<Option<Labels>>,
                           steps: &mut Vec<(usize, usize)>,
                           a: usize,
                           b: usize|
     -> Result<usize, EvalError> {
        let ta = tensors[a].take().unwrap();
        let tb = tensors[b].take().unwrap();
        let res = combine(&ta, &tb);
        let size = size_of_rank(res.len());
        if size > cap {
            return Err(EvalError::SizeCap { needed: size, cap });
        }
        max_size = max_size.max(size);
        steps.push((a, b));
        tensors.push(Some(res));
        Ok(tensors.len() - 1)
    };
    let mut neighbours: Vec<usize> = Vec::new();
    while let Some(Reverse(k)) = heap.pop() {
        let a = (k >> 28 & IDX_MASK) as usize;
        let b = (IDX_MASK - (k & IDX_MASK)) as usize;
        if tensors[a].is_none() || tensors[b].is_none() {
            continue;
        }
        let t = push_result(&mut tensors, &mut steps, a, b)?;
        neighbours.clear();
        for &l in tensors[t].as_ref().unwrap() {
            let slot = &mut owners[l];
            for o in slot.iter_mut() {
                if *o == a || *o == b {
                    *o = t;
                }
            }
            for &o in slot.iter() {
                if o != t && o != NONE && !neighbours.contains(&o) {
                    neighbours.push(o);
                }
            }
        }
        for &o in &neighbours {
            let (ta, to) = (tensors[t].as_ref().unwrap(), tensors[o].as_ref().unwrap());
            heap.push(key(t, o, ta, to));
        }
    }
    // disconnected pieces: outer products, smallest first
    let mut alive: Vec<(usize, usize)> = tensors
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.as_ref().map(|t| (t.len(), i)))
        .collect();
    while alive.len() >= 2 {
        alive.sort_unstable_by(|x, y| y.cmp(x));
        let (_, a) = alive.pop().unwrap();
        let (_, b) = alive.pop().unwrap();
        let t = push_result(&mut tensors, &mut steps, a.min(b), a.max(b))?;
        alive.push((tensors[t].as_ref().unwrap().len(), t));
    }
    Ok(ContractionPlan {
        initial,
        steps,
        max_size,
    })
}

/// A plan combining random pairs of live tensors.
pub(crate) fn random_plan(initial: usize, rng: &mut impl rand::Rng) -> ContractionPlan {
    let mut alive: Vec<usize> = (0..initial).collect();
    let mut steps = Vec::new();
    let mut next = initial;
    while alive.len() > 1 {
        let i = rng.gen_range(0..alive.len());
        let a = alive.swap_remove(i);
        let j = rng.gen_range(0..alive.len());
        let b = alive.swap_remove(j);
        steps.push((a, b));
        alive.push(next);
        next += 1;
    }
    ContractionPlan {
        initial,
        steps,
        max_size: 0,
    }
}

#[derive(Debug)]
pub(crate) struct Overflow;

/// Coefficient ring for the engine.
pub(crate) trait Ring: Clone + Sized {
    const ENTRY_ERR: f64;
    fn zero(h: usize) -> Self;
    fn one(h: usize) -> Self;
    /// `ω^e` with `ω` a primitive root of order `2h`.
    fn root(e: u64, h: usize) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn from_complex(c: Complex64) -> Option<Self>;
    /// `C = A·B` for row-major `A: m×k`, `B: k×n`, with propagated error.
    fn matmul(
        a: &[Self],
        b: &[Self],
        m: usize,
        k: usize,
        n: usize,
        ea: f64,
        eb: f64,
    ) -> Result<(Vec<Self>, f64), Overflow>;
    /// Divides out a common power of two; returns the added `scale`.
    fn normalize(data: &mut [Self], err: &mut f64) -> i64;
}

#[derive(Clone)]
pub(crate) struct Tensor<R> {
    pub labels: Labels,
    pub data: Vec<R>,
    pub scale: i64,
    pub err: f64,
}

fn proto_tensor<R: Ring>(p: &Proto, h: usize) -> Tensor<R> {
    let r = p.legs.len();
    let size = 1usize << r;
    let d = 2 * h as u64;
    let exponent = |ph: &DyadicPhase| -> u64 {
        // ω_{2^{k+1}}^{num} = ω_d^{num · d / 2^{k+1}}
        let stride = d >> (ph.k() + 1);
        (ph.num() as u64) * stride
    };
    let (data, scale) = match &p.kind {
        ProtoKind::Z(ph) => {
            let mut data = vec![R::zero(h); size];
            let w = R::root(exponent(ph), h);
            if r == 0 {
                data[0] = R::one(h).add(&w);
            } else {
                data[0] = R::one(h);
                data[size - 1] = w;
            }
            (data, 0)
        }
        ProtoKind::X(ph) => {
            let w = R::root(exponent(ph), h);
            let plus = R::one(h).add(&w);
            let minus = R::one(h).add(&w.neg());
            let data = (0..size)
                .map(|x: usize| {
                    if x.count_ones() % 2 == 0 {
                        plus.clone()
                    } else {
                        minus.clone()
                    }
                })
                .collect();
            (data, -(r as i64))
        }
        ProtoKind::H => {
            let one = R::one(h);
            (vec![one.clone(), one.clone(), one.clone(), one.neg()], -1)
        }
        ProtoKind::Delta => (vec![R::one(h), R::zero(h), R::zero(h), R::one(h)], 0),
        ProtoKind::Matrix(m) => {
            // legs are (in, out); the box maps column `in` to row `out`
            let c = |z: Complex64| R::from_complex(z).expect("matrix box in exact mode");
            (vec![c(m[0]), c(m[2]), c(m[1]), c(m[3])], 0)
        }
    };
    Tensor {
        labels: p.legs.clone(),
        data,
        scale,
        err: R::ENTRY_ERR,
    }
}

/// Reorders tensor axes; `order` lists the existing labels in the new order.
pub(crate) fn permute<R: Clone>(data: &[R], labels: &[Label], order: &[Label]) -> Vec<R> {
    permute_cow(data, labels, order).into_owned()
}

fn permute_cow<'a, R: Clone>(data: &'a [R], labels: &[Label], order: &[Label]) -> Cow<'a, [R]> {
    if labels == order {
        return Cow::Borrowed(data);
    }
    let r = labels.len();
    // new index bit (r-1-q) carries weights[q]
    let mut weights = [0usize; usize::BITS as usize];
    for (q, l) in order.iter().enumerate() {
        let p = labels.iter().position(|x| x == l).expect("label present");
        weights[q] = 1usize << (r - 1 - p);
    }
    let source = |ni: usize| {
        (0..r)
            .filter(|&q| ni >> (r - 1 - q) & 1 == 1)
            .map(|q| weights[q])
            .sum::<usize>()
    };
    if r <= 4 {
        return Cow::Owned(
            (0..1usize << r)
                .map(|ni| data[source(ni)].clone())
                .collect(),
        );
    }
    let lo_bits = r / 2;
    let lo: Vec<usize> = (0..1usize << lo_bits).map(source).collect();
    let hi: Vec<usize> = (0..1usize << (r - lo_bits))
        .map(|v| source(v << lo_bits))
        .collect();
    let mask = (1usize << lo_bits) - 1;
    Cow::Owned(
        (0..1usize << r)
            .map(|ni| data[hi[ni >> lo_bits] + lo[ni & mask]].clone())
            .collect(),
    )
}

fn contract_pair<R: Ring>(a: Tensor<R>, b: Tensor<R>) -> Result<Tensor<R>, Overflow> {
    let mut order_a = Labels::new();
    let mut shared = 0;
    for &l in &a.labels {
        if !b.labels.contains(&l) {
            order_a.push(l);
        }
    }
    let n_free_a = order_a.len();
    let mut order_b = Labels::new();
    for &l in &a.labels {
        if b.labels.contains(&l) {
            order_a.push(l);
            order_b.push(l);
            shared += 1;
        }
    }
    for &l in &b.labels {
        if !a.labels.contains(&l) {
            order_b.push(l);
        }
    }
    let da = permute_cow(&a.data, &a.labels, &order_a);
    let db = permute_cow(&b.data, &b.labels, &order_b);
    let n_free_b = order_b.len() - shared;
    let (m, k, n) = (1usize << n_free_a, 1usize << shared, 1usize << n_free_b);
    let (mut data, mut err) = R::matmul(&da, &db, m, k, n, a.err, b.err)?;
    let scale = a.scale + b.scale + R::normalize(&mut data, &mut err);
    order_a.truncate(n_free_a);
    order_a.extend_from_slice(&order_b[shared..]);
    Ok(Tensor {
        labels: order_a,
        data,
        scale,
        err,
    })
}

/// Runs `plan` and returns the final tensor with axes ordered
/// outputs then inputs.
pub(crate) fn execute<R: Ring>(
    net: &Network,
    plan: &ContractionPlan,
    h: usize,
    cap: u128,
) -> Result<Result<Tensor<R>, Overflow>, EvalError> {
    let mut tensors: Vec<Option<Tensor<R>>> =
        Vec::with_capacity(net.protos.len() + plan.steps.len());
    tensors.extend(net.protos.iter().map(|p| {
        let mut t = proto_tensor::<R>(p, h);
        let mut e = t.err;
        t.scale += R::normalize(&mut t.data, &mut e);
        t.err = e;
        Some(t)
    }));
    for &(a, b) in &plan.steps {
        let ta = tensors.get_mut(a).and_then(Option::take);
        let tb = tensors.get_mut(b).and_then(Option::take);
        let (Some(ta), Some(tb)) = (ta, tb) else {
            return Err(EvalError::BadPlan(format!(
                "step ({a}, {b}) uses a dead tensor"
            )));
        };
        let shared = ta.labels.iter().filter(|l| tb.labels.contains(l)).count();
        let rank = ta.labels.len() + tb.labels.len() - 2 * shared;
        if size_of_rank(rank) > cap {
            return Err(EvalError::SizeCap {
                needed: size_of_rank(rank),
                cap,
            });
        }
        match contract_pair(ta, tb) {
            Ok(t) => tensors.push(Some(t)),
            Err(o) => return Ok(Err(o)),
        }
    }
    let mut alive = tensors.into_iter().flatten();
    let last = alive.next();
    if alive.next().is_some() {
        return Err(EvalError::BadPlan(
            "plan leaves more than one tensor".into(),
        ));
    }
    let t = last.unwrap_or(Tensor {
        labels: Labels::new(),
        data: vec![R::one(h)],
        scale: 0,
        err: 0.0,
    });
    let order: Labels = net.outputs.iter().chain(&net.inputs).copied().collect();
    let data = permute(&t.data, &t.labels, &order);
    Ok(Ok(Tensor {
        labels: order,
        data,
        scale: t.scale,
        err: t.err,
    }))
}

// ---------------------------------------------------------------------------
// rings

/// `Z[ω]` for `ω` of order `2H`, with machine-word coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct SmallCyc<const H: usize>(pub [i64; H]);

impl<const H: usize> SmallCyc<H> {
    #[inline(always)]
    fn mul_acc(acc: &mut [i64; H], a: &[i64; H], b: &[i64; H]) {
        for i in 0..H {
            let ai = a[i];
            if ai == 0 {
                continue;
            }
            for j in 0..H {
                let p = ai * b[j];
                if i + j < H {
                    acc[i + j] += p;
                } else {
                    acc[i + j - H] -= p;
                }
            }
        }
    }

    fn max_abs(data: &[Self]) -> u64 {
        data.iter()
            .flat_map(|c| c.0.iter())
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

impl<const H: usize> Ring for SmallCyc<H> {
    const ENTRY_ERR: f64 = 0.0;

    fn zero(_: usize) -> Self {
        SmallCyc([0; H])
    }

    fn one(_: usize) -> Self {
        let mut c = [0; H];
        c[0] = 1;
        SmallCyc(c)
    }

    fn root(e: u64, _: usize) -> Self {
        let e = (e % (2 * H as u64)) as usize;
        let mut c = [0; H];
        if e < H {
            c[e] = 1;
        } else {
            c[e - H] = -1;
        }
        SmallCyc(c)
    }

    fn add(&self, other: &Self) -> Self {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(other.0) {
            *x += y;
        }
        SmallCyc(c)
    }

    fn neg(&self) -> Self {
        SmallCyc(self.0.map(|x| -x))
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    fn from_complex(_: Complex64) -> Option<Self> {
        None
    }

    fn matmul(
        a: &[Self],
        b: &[Self],
        m: usize,
        k: usize,
        n: usize,
        _: f64,
        _: f64,
    ) -> Result<(Vec<Self>, f64), Overflow> {
        let bound =
            (k as u128) * (H as u128) * (Self::max_abs(a) as u128) * (Self::max_abs(b) as u128);
        if bound >= 1u128 << 62 {
            return Err(Overflow);
        }
        let mut c = vec![SmallCyc([0i64; H]); m * n];
        for i in 0..m {
            let row = &mut c[i * n..(i + 1) * n];
            for kk in 0..k {
                let av = &a[i * k + kk].0;
                if av.iter().all(|&x| x == 0) {
                    continue;
                }
                let brow = &b[kk * n..(kk + 1) * n];
                for (acc, bv) in row.iter_mut().zip(brow) {
                    Self::mul_acc(&mut acc.0, av, &bv.0);
                }
            }
        }
        Ok((c, 0.0))
    }

    fn normalize(data: &mut [Self], _: &mut f64) -> i64 {
        let acc = data
            .iter()
            .flat_map(|c| c.0.iter())
            .fold(0i64, |acc, &x| acc | x);
        if acc == 0 {
            return 0;
        }
        let tz = acc.trailing_zeros();
        if tz == 0 {
            return 0;
        }
        for c in data.iter_mut() {
            for x in c.0.iter_mut() {
                *x >>= tz;
            }
        }
        2 * tz as i64
    }
}

/// `Z[ω]` with arbitrary-precision coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct BigCyc(pub Vec<BigInt>);

impl Ring for BigCyc {
    const ENTRY_ERR: f64 = 0.0;

    fn zero(h: usize) -> Self {
        BigCyc(vec![BigInt::zero(); h])
    }

    fn one(h: usize) -> Self {
        let mut c = vec![BigInt::zero(); h];
        c[0] = BigInt::from(1);
        BigCyc(c)
    }

    fn root(e: u64, h: usize) -> Self {
        let e = (e % (2 * h as u64)) as usize;
        let mut c = vec![BigInt::zero(); h];
        if e < h {
            c[e] = BigInt::from(1);
        } else {
            c[e - h] = BigInt::from(-1);
        }
        BigCyc(c)
    }

    fn add(&self, other: &Self) -> Self {
        BigCyc(self.0.iter().zip(&other.0).map(|(x, y)| x + y).collect())
    }

    fn neg(&self) -> Self {
        BigCyc(self.0.iter().map(|x| -x).collect())
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn from_complex(_: Complex64) -> Option<Self> {
        None
    }

    fn matmul(
        a: &[Self],
        b: &[Self],
        m: usize,
        k: usize,
        n: usize,
        _: f64,
        _: f64,
    ) -> Result<(Vec<Self>, f64), Overflow> {
        let h = a.first().or(b.first()).map_or(1, |x| x.0.len());
        let mut c = vec![BigCyc::zero(h); m * n];
        for i in 0..m {
            for kk in 0..k {
                let av = &a[i * k + kk];
                if av.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let bv = &b[kk * n + j];
                    if bv.is_zero() {
                        continue;
                    }
                    let acc = &mut c[i * n + j].0;
                    for (p, x) in av.0.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (q, y) in bv.0.iter().enumerate() {
                            if y.is_zero() {
                                continue;
                            }
                            if p + q < h {
                                acc[p + q] += x * y;
                            } else {
                                acc[p + q - h] -= x * y;
                            }
                        }
                    }
                }
            }
        }
        Ok((c, 0.0))
    }

    fn normalize(data: &mut [Self], _: &mut f64) -> i64 {
        let tz = data
            .iter()
            .flat_map(|c| c.0.iter())
            .filter(|x| !x.is_zero())
            .map(|x| x.trailing_zeros().unwrap_or(0))
            .min();
        match tz {
            Some(t) if t > 0 => {
                for c in data.iter_mut() {
                    for x in c.0.iter_mut() {
                        *x = &*x >> t;
                    }
                }
                2 * t as i64
            }
            _ => 0,
        }
    }
}

/// Floating point entries with a running entrywise error bound.
#[derive(Clone, Copy, PartialEq, Debug)]
pub(crate) struct Flt(pub Complex64);

impl Ring for Flt {
    const ENTRY_ERR: f64 = 2.0 * f64::EPSILON;

    fn zero(_: usize) -> Self {
        Flt(Complex64::new(0.0, 0.0))
    }

    fn one(_: usize) -> Self {
        Flt(Complex64::new(1.0, 0.0))
    }

    fn root(e: u64, h: usize) -> Self {
        let d = 2 * h as u64;
        let e = e % d;
        let z = if e == 0 {
            Complex64::new(1.0, 0.0)
        } else if 2 * e == d {
            Complex64::new(-1.0, 0.0)
        } else if 4 * e == d {
            Complex64::new(0.0, 1.0)
        } else if 4 * e == 3 * d {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / d as f64)
        };
        Flt(z)
    }

    fn add(&self, other: &Self) -> Self {
        Flt(self.0 + other.0)
    }

    fn neg(&self) -> Self {
        Flt(-self.0)
    }

    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn from_complex(c: Complex64) -> Option<Self> {
        Some(Flt(c))
    }

    fn matmul(
        a: &[Self],
        b: &[Self],
        m: usize,
        k: usize,
        n: usize,
        ea: f64,
        eb: f64,
    ) -> Result<(Vec<Self>, f64), Overflow> {
        let mut c = vec![Complex64::new(0.0, 0.0); m * n];
        for i in 0..m {
            let row = &mut c[i * n..(i + 1) * n];
            for kk in 0..k {
                let av = a[i * k + kk].0;
                if av.re == 0.0 && av.im == 0.0 {
                    continue;
                }
                let brow = &b[kk * n..(kk + 1) * n];
                for (acc, bv) in row.iter_mut().zip(brow) {
                    *acc += av * bv.0;
                }
            }
        }
        // |Σ_k (a+δa)(b+δb) − Σ_k a·b| ≤ eb·Σ_k|a_ik| + ea·Σ_k|b_kj| + k·ea·eb,
        // plus rounding of at most γ·Σ_k |a_ik||b_kj|
        let max_a = a.iter().map(|z| z.0.norm()).fold(0.0, f64::max);
        let max_b = b.iter().map(|z| z.0.norm()).fold(0.0, f64::max);
        let row_a = (0..m)
            .map(|i| {
                a[i * k..(i + 1) * k]
                    .iter()
                    .map(|z| z.0.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        let mut col_b = vec![0.0f64; n];
        for kk in 0..k {
            for (s, z) in col_b.iter_mut().zip(&b[kk * n..(kk + 1) * n]) {
                *s += z.0.norm();
            }
        }
        let col_b = col_b.into_iter().fold(0.0, f64::max);
        let kf = k as f64;
        let gamma = 2.0 * (kf + 3.0) * f64::EPSILON;
        let err =
            row_a * eb + ea * col_b + kf * ea * eb + gamma * (row_a * max_b).min(max_a * col_b);
        let err = err * (1.0 + 4.0 * f64::EPSILON);
        Ok((c.into_iter().map(Flt).collect(), err))
    }

    fn normalize(data: &mut [Self], err: &mut f64) -> i64 {
        let max = data.iter().map(|z| z.0.norm()).fold(0.0, f64::max);
        if max == 0.0 || !max.is_finite() {
            return 0;
        }
        let e = max.log2().floor() as i32;
        if e == 0 {
            return 0;
        }
        let f = (-e as f64).exp2();
        for z in data.iter_mut() {
            z.0 *= f;
        }
        *err *= f;
        2 * e as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permute_axes() {
        // t[a][b] = 2a + b, transposed
        let data = vec![0, 1, 2, 3];
        assert_eq!(permute(&data, &[7, 9], &[9, 7]), vec![0, 2, 1, 3]);
        let data: Vec<usize> = (0..8).collect();
        let p = permute(&data, &[1, 2, 3], &[3, 1, 2]);
        // new index (c, a, b) -> old 4a + 2b + c
        for c in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    assert_eq!(p[4 * c + 2 * a + b], 4 * a + 2 * b + c);
                }
            }
        }
    }

    #[test]
    fn negacyclic_product() {
        // ω_8 · ω_8^3 = -1
        let mut acc = [0i64; 4];
        SmallCyc::<4>::mul_acc(&mut acc, &[0, 1, 0, 0], &[0, 0, 0, 1]);
        assert_eq!(acc, [-1, 0, 0, 0]);
    }

    #[test]
    fn small_ring_overflow_detected() {
        let big = SmallCyc::<1>([1i64 << 40]);
        let r = SmallCyc::<1>::matmul(&[big], &[big], 1, 1, 1, 0.0, 0.0);
        assert!(r.is_err());
    }
}
