#![allow(dead_code)]

use pcmtree::PcMatrix;
use proptest::prelude::*;

pub const EX1: &str = include_str!("../data/ex1.pcm");
pub const EX2: &str = include_str!("../data/ex2.pcm");
pub const EX8: &str = include_str!("../data/ex8.pcm");

/// Positive generating vector with components in [1/9, 9].
pub fn weights(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    n.prop_flat_map(|n| prop::collection::vec(-2.2f64..2.2, n))
        .prop_map(|logs| logs.into_iter().map(f64::exp).collect())
}

pub fn consistent(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PcMatrix> {
    weights(n).prop_map(|v| PcMatrix::from_weights(&v).unwrap())
}

/// Complete matrix with independent log-uniform upper entries in [1/9, 9].
pub fn complete(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PcMatrix> {
    n.prop_flat_map(|n| prop::collection::vec(-2.2f64..2.2, n * (n - 1) / 2).prop_map(move |logs| (n, logs)))
        .prop_map(|(n, logs)| {
            let mut it = logs.into_iter();
            PcMatrix::from_upper(n, |_, _| Some(it.next().unwrap().exp())).unwrap()
        })
}

/// Consistent matrix with a single entry multiplied by a factor of at least 1.05 (or its inverse).
pub fn inconsistent(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PcMatrix> {
    (weights(n), any::<prop::sample::Index>(), 0.05f64..1.5, any::<bool>()).prop_map(|(v, idx, log_f, up)| {
        let n = v.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let (pi, pj) = pairs[idx.index(pairs.len())];
        let f = if up { log_f.exp() } else { (-log_f).exp() };
        PcMatrix::from_upper(n, |i, j| Some(v[i] / v[j] * if (i, j) == (pi, pj) { f } else { 1.0 })).unwrap()
    })
}

/// Random connected graph on `n` vertices: a random spanning path order plus extra edges.
pub fn connected_graph(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    n.prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(any::<bool>(), pairs),
        )
    })
    .prop_map(|(n, order, extra)| {
        let mut edges: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
        let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        edges.extend(all.into_iter().zip(extra).filter(|(_, keep)| *keep).map(|(e, _)| e));
        (n, edges)
    })
}

/// Matrix on a given edge set with log-uniform labels.
pub fn on_edges(n: usize, edges: &[(usize, usize)], seed: u64) -> PcMatrix {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut labels = vec![None; n * n];
    for &(a, b) in edges {
        let (i, j) = (a.min(b), a.max(b));
        labels[i * n + j] = Some(((next() * 4.4) - 2.2).exp());
    }
    PcMatrix::from_upper(n, |i, j| labels[i * n + j]).unwrap()
}
