//! Seeded random models.
//!
//! Every generated model carries the same named objects, built so that the
//! preconditions of the suites hold by construction:
//!
//! - vectors `x, y, z, w` (signed, some `inf`), `a, b` (finite), `u` (finite, `≥ 0`);
//! - a partition chain `f`;
//! - sequences `s1, s2` (signed), `p1, p2` (`≥ 0`), `mart`, `submart`;
//! - processes `mart` and `submart` over `f`;
//! - projections `ps` (arbitrary), `bc` (block-union tail for the global
//!   operator of `f`), `comp` (`P_n` commuting with `T_n`), `stop` (a
//!   bounded stopping time for `f`).

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use supcone::{AtomicSpace, CondExp, LatVec, Rational};

use crate::model::{
    lat_to_q, ChainSpec, ModelSpec, ProcessKind, ProcessSpec, ProjSpec, ProjTailSpec, Q, SeqSpec,
    TailSpec, XQ,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeBounds {
    pub max_atoms: usize,
    /// Levels of the partition chain, the global level included.
    pub max_levels: usize,
    pub max_prefix: usize,
    pub max_period: usize,
}

impl Default for SizeBounds {
    fn default() -> Self {
        Self {
            max_atoms: 16,
            max_levels: 6,
            max_prefix: 8,
            max_period: 4,
        }
    }
}

/// Percent chance of each degenerate shape.
const DEGENERATE_PERCENT: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Generic,
    SingleAtom,
    OneBlock,
    IdentityT,
}

pub fn shape_of(rng: &mut ChaCha8Rng) -> Shape {
    let r = rng.gen_range(0..100);
    if r < DEGENERATE_PERCENT {
        Shape::SingleAtom
    } else if r < 2 * DEGENERATE_PERCENT {
        Shape::OneBlock
    } else if r < 3 * DEGENERATE_PERCENT {
        Shape::IdentityT
    } else {
        Shape::Generic
    }
}

pub fn small_q(rng: &mut ChaCha8Rng, nonneg: bool) -> Q {
    let lo = if nonneg { 0 } else { -12 };
    Q::new(rng.gen_range(lo..=12), rng.gen_range(1..=4))
}

fn lat_q(rng: &mut ChaCha8Rng, n: usize, nonneg: bool) -> Vec<Q> {
    (0..n).map(|_| small_q(rng, nonneg)).collect()
}

fn ext_q(rng: &mut ChaCha8Rng, n: usize) -> Vec<XQ> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                XQ::Inf
            } else {
                XQ::Fin(small_q(rng, false))
            }
        })
        .collect()
}

fn band(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A random union of the blocks of `labels`.
fn block_union(rng: &mut ChaCha8Rng, labels: &[usize]) -> Vec<usize> {
    let distinct: BTreeSet<usize> = labels.iter().copied().collect();
    let chosen: BTreeSet<usize> = distinct.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    (0..labels.len()).filter(|a| chosen.contains(&labels[*a])).collect()
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    set.into_iter().collect()
}

fn relabel(labels: Vec<usize>) -> Vec<usize> {
    let mut map = BTreeMap::new();
    labels
        .into_iter()
        .map(|l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

fn chain(rng: &mut ChaCha8Rng, n: usize, shape: Shape, max_levels: usize) -> Vec<Vec<usize>> {
    let levels = rng.gen_range(1..=max_levels.max(1));
    match shape {
        Shape::OneBlock => vec![vec![0; n]; levels],
        Shape::IdentityT => vec![(0..n).collect(); levels],
        _ => {
            let k = rng.gen_range(1..=n.min(3));
            let mut current = relabel((0..n).map(|_| rng.gen_range(0..k)).collect());
            let mut out = vec![current.clone()];
            for _ in 1..levels {
                current = relabel(current.iter().map(|l| 2 * l + rng.gen_range(0..2)).collect());
                out.push(current.clone());
            }
            out
        }
    }
}

pub fn tail(rng: &mut ChaCha8Rng, n: usize, nonneg: bool, max_period: usize) -> TailSpec {
    match rng.gen_range(0..4) {
        0 => TailSpec::Zero,
        1 => TailSpec::Constant {
            value: lat_q(rng, n, nonneg),
        },
        2 => TailSpec::Periodic {
            values: (0..rng.gen_range(1..=max_period.max(1)))
                .map(|_| lat_q(rng, n, nonneg))
                .collect(),
        },
        _ => TailSpec::Geometric {
            v: lat_q(rng, n, true),
            ratio: Q::new(rng.gen_range(1..=3), 4),
        },
    }
}

pub fn sequence(rng: &mut ChaCha8Rng, n: usize, nonneg: bool, bounds: &SizeBounds) -> SeqSpec {
    SeqSpec {
        prefix: (0..rng.gen_range(0..=bounds.max_prefix))
            .map(|_| lat_q(rng, n, nonneg))
            .collect(),
        tail: tail(rng, n, nonneg, bounds.max_period),
    }
}

fn proj_tail(rng: &mut ChaCha8Rng, max_period: usize, mut draw: impl FnMut(&mut ChaCha8Rng) -> Vec<usize>) -> ProjTailSpec {
    if rng.gen_bool(0.5) {
        ProjTailSpec::Constant { band: draw(rng) }
    } else {
        let period = rng.gen_range(1..=max_period.max(1));
        ProjTailSpec::Periodic {
            bands: (0..period).map(|_| draw(rng)).collect(),
        }
    }
}

/// The operator of level `n` (0 is the global operator).
fn level(levels: &[Vec<usize>], n: usize) -> &[usize] {
    &levels[n.min(levels.len() - 1)]
}

pub fn generate_model(seed: u64, bounds: &SizeBounds) -> ModelSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = shape_of(&mut rng);
    let n = match shape {
        Shape::SingleAtom => 1,
        _ => rng.gen_range(1..=bounds.max_atoms.max(1)),
    };
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    let weights: Vec<Q> = raw.iter().map(|&w| Q::new(w, total)).collect();

    let mut vectors = BTreeMap::new();
    for name in ["x", "y", "z", "w"] {
        vectors.insert(name.to_string(), ext_q(&mut rng, n));
    }
    for name in ["a", "b"] {
        vectors.insert(name.to_string(), lat_q(&mut rng, n, false).into_iter().map(XQ::Fin).collect());
    }
    let u = (0..n)
        .map(|_| XQ::Fin(if rng.gen_bool(0.3) { Q::new(0, 1) } else { small_q(&mut rng, true) }))
        .collect();
    vectors.insert("u".to_string(), u);

    let levels = chain(&mut rng, n, shape, bounds.max_levels);

    let mut sequences = BTreeMap::new();
    sequences.insert("s1".to_string(), sequence(&mut rng, n, false, bounds));
    sequences.insert("s2".to_string(), sequence(&mut rng, n, false, bounds));
    sequences.insert("p1".to_string(), sequence(&mut rng, n, true, bounds));
    sequences.insert("p2".to_string(), sequence(&mut rng, n, true, bounds));
    let (mart, submart) = processes(&mut rng, &weights, &levels, bounds);
    sequences.insert("mart".to_string(), mart);
    sequences.insert("submart".to_string(), submart);

    let mut projections = BTreeMap::new();
    let general = ProjSpec {
        prefix: (0..rng.gen_range(0..=bounds.max_prefix)).map(|_| band(&mut rng, n)).collect(),
        tail: proj_tail(&mut rng, bounds.max_period, |r| band(r, n)),
    };
    projections.insert("ps".to_string(), general);

    // One arbitrary band among block unions keeps the family independent.
    let global = levels[0].clone();
    let free = band(&mut rng, n);
    let bc = ProjSpec {
        prefix: (0..rng.gen_range(0..=bounds.max_prefix))
            .map(|_| if rng.gen_bool(0.3) { free.clone() } else { block_union(&mut rng, &global) })
            .collect(),
        tail: proj_tail(&mut rng, bounds.max_period, |r| block_union(r, &global)),
    };
    projections.insert("bc".to_string(), bc);

    let comp_len = rng.gen_range(0..=bounds.max_prefix);
    let comp = ProjSpec {
        prefix: (1..=comp_len).map(|i| block_union(&mut rng, level(&levels, i))).collect(),
        tail: {
            let tail_level = level(&levels, comp_len + 1).to_vec();
            proj_tail(&mut rng, bounds.max_period, |r| block_union(r, &tail_level))
        },
    };
    projections.insert("comp".to_string(), comp);

    let stop_len = rng.gen_range(0..=bounds.max_prefix);
    let mut current = Vec::new();
    let mut stop_prefix = Vec::new();
    for i in 1..=stop_len {
        current = union(&current, &block_union(&mut rng, level(&levels, i)));
        stop_prefix.push(current.clone());
    }
    projections.insert(
        "stop".to_string(),
        ProjSpec {
            prefix: stop_prefix,
            tail: ProjTailSpec::Constant {
                band: (0..n).collect(),
            },
        },
    );

    let mut processes = BTreeMap::new();
    for (name, kind) in [("mart", ProcessKind::Martingale), ("submart", ProcessKind::Submartingale)] {
        processes.insert(
            name.to_string(),
            ProcessSpec {
                sequence: name.to_string(),
                filtration: "f".to_string(),
                kind,
            },
        );
    }

    let mut partitions = BTreeMap::new();
    partitions.insert("f".to_string(), ChainSpec { levels });

    ModelSpec {
        atoms: (0..n).map(|i| format!("w{i}")).collect(),
        weights,
        vectors,
        partitions,
        sequences,
        projections,
        processes,
    }
}

/// A Doob martingale `T_n y` and the submartingale `T_n y + Σ_{k≤n} T_k v_k`
/// with `v_k ≥ 0`, both constant once the chain is.
fn processes(
    rng: &mut ChaCha8Rng,
    weights: &[Q],
    levels: &[Vec<usize>],
    bounds: &SizeBounds,
) -> (SeqSpec, SeqSpec) {
    let n = weights.len();
    let space = AtomicSpace::new(weights.iter().map(|w| w.0.clone()).collect()).expect("generated weights are valid");
    let op = |i: usize| CondExp::from_labels(&space, level(levels, i)).expect("generated labels are valid");
    let y: LatVec<Rational> = LatVec::new(lat_q(rng, n, false).into_iter().map(|q| q.0).collect());
    // Extra prefix terms after the chain settles exercise late stopping.
    let len = levels.len() + rng.gen_range(0..=2usize);
    let len = len.min(bounds.max_prefix + 1).max(1);
    let mut mart = Vec::new();
    let mut sub = Vec::new();
    let mut acc = LatVec::zeros(n);
    for i in 1..=len {
        let t = op(i);
        let m = t.apply(&y).expect("dimensions agree");
        if i < levels.len() || rng.gen_bool(0.5) {
            let v = LatVec::new(lat_q(rng, n, true).into_iter().map(|q| q.0).collect());
            acc = acc.add(&t.apply(&v).expect("dimensions agree")).expect("dimensions agree");
        }
        mart.push(m.clone());
        sub.push(m.add(&acc).expect("dimensions agree"));
    }
    let finish = |mut terms: Vec<LatVec<Rational>>| {
        let last = terms.pop().expect("at least one term");
        SeqSpec {
            prefix: terms.iter().map(lat_to_q).collect(),
            tail: TailSpec::Constant { value: lat_to_q(&last) },
        }
    };
    (finish(mart), finish(sub))
}
