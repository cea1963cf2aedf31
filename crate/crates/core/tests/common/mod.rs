#![allow(dead_code)]

use brat_core::bratteli::Matrix;
use brat_core::{BratteliDiagram, Tail};
use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random matrix with entries in `0..=max_entry`, patched so that no row
/// or column is zero.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, max_entry: u64) -> Matrix {
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..=max_entry)).collect())
        .collect();
    for row in m.iter_mut() {
        if row.iter().all(|&x| x == 0) {
            let j = rng.gen_range(0..cols);
            row[j] = rng.gen_range(1..=max_entry.max(1));
        }
    }
    for j in 0..cols {
        if m.iter().all(|row| row[j] == 0) {
            let i = rng.gen_range(0..rows);
            m[i][j] = rng.gen_range(1..=max_entry.max(1));
        }
    }
    Matrix::from_rows(
        m.into_iter()
            .map(|row| row.into_iter().map(BigUint::from).collect())
            .collect(),
    )
}

/// Diagram with `1..=max_matrices` matrices, widths up to `max_width`; about
/// half of them get a repeating tail.
pub fn random_diagram(
    rng: &mut impl Rng,
    max_width: usize,
    max_entry: u64,
    max_matrices: usize,
) -> BratteliDiagram {
    let count = rng.gen_range(1..=max_matrices);
    let mut levels = vec![1];
    for _ in 0..count {
        levels.push(rng.gen_range(1..=max_width));
    }
    let repeat = rng.gen_bool(0.5);
    if repeat {
        levels[count] = if count == 1 { 1 } else { levels[count - 1] };
    }
    let matrices = (1..=count)
        .map(|n| random_matrix(rng, levels[n], levels[n - 1], max_entry))
        .collect();
    let tail = if repeat { Tail::RepeatLast } else { Tail::None };
    BratteliDiagram::new(levels, matrices, tail).expect("patched matrices are valid")
}

/// Depth to inspect: the last level of a finite diagram, else `wanted`.
pub fn depth_for(d: &BratteliDiagram, wanted: usize) -> usize {
    d.max_depth().map_or(wanted, |m| m.min(wanted))
}

/// Number of root-to-vertex paths at each level, by walking every path edge
/// by edge.
pub fn enumerate_paths(d: &BratteliDiagram, depth: usize) -> Vec<Vec<u64>> {
    let mut counts: Vec<Vec<u64>> = (0..=depth).map(|n| vec![0; d.width(n)]).collect();
    let mut stack = vec![(0usize, 0usize)];
    while let Some((level, vertex)) = stack.pop() {
        counts[level][vertex] += 1;
        if level == depth {
            continue;
        }
        let m = d.matrix(level + 1);
        for target in 0..d.width(level + 1) {
            let k: u64 = m.get(target, vertex).try_into().expect("small entry");
            for _ in 0..k {
                stack.push((level + 1, target));
            }
        }
    }
    counts
}
