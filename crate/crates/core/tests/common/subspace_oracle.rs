//! Brute-force count of `x`-stable `𝒪`-lattices between `ϖ^N 𝒪^2` and `ϖ^{-N} 𝒪^2`, as
//! `𝔽_p`-subspaces of the quotient closed under `ϖ` and under the companion matrix.

use std::collections::BTreeMap;

/// `f = x^2 + c1 x + c0` with `c1`, `c0` given by coefficient lists in `ϖ`.
pub fn stable_lattice_counts(p: u64, n: usize, c1: &[u64], c0: &[u64]) -> BTreeMap<i64, usize> {
    let d = 2;
    let dim = 2 * n * d;
    // coordinate (i, e) with e ∈ [0, 2N) stands for ϖ^{e - N} e_i
    let idx = |i: usize, e: usize| i * 2 * n + e;
    let coeff = |c: &[u64], k: usize| c.get(k).copied().unwrap_or(0) % p;
    let mut uni = vec![vec![0u64; dim]; dim];
    let mut xmap = vec![vec![0u64; dim]; dim];
    for e in 0..2 * n {
        for i in 0..d {
            if e + 1 < 2 * n {
                uni[idx(i, e + 1)][idx(i, e)] = 1;
            }
        }
        // x e_0 = e_1, x e_1 = -c0 e_0 - c1 e_1
        xmap[idx(1, e)][idx(0, e)] = 1;
        for k in 0..2 * n - e {
            xmap[idx(0, e + k)][idx(1, e)] = (p - coeff(c0, k)) % p;
            xmap[idx(1, e + k)][idx(1, e)] = (xmap[idx(1, e + k)][idx(1, e)] + p - coeff(c1, k)) % p;
        }
    }
    let mut counts = BTreeMap::new();
    for k in 0..=dim {
        for_each_rref(p, k, dim, &mut |rows| {
            if closed(rows, &uni, p) && closed(rows, &xmap, p) {
                let degree = (n * d) as i64 - k as i64;
                *counts.entry(degree).or_insert(0) += 1;
            }
        });
    }
    counts
}

fn apply(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b % p).sum::<u64>() % p).collect()
}

fn inv(a: u64, p: u64) -> u64 {
    (1..p).find(|b| a * b % p == 1).expect("unit")
}

fn in_span(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut w = v.to_vec();
    for r in rows {
        let lead = r.iter().position(|&c| c != 0).expect("nonzero row");
        if w[lead] != 0 {
            let f = w[lead] * inv(r[lead], p) % p;
            for (a, b) in w.iter_mut().zip(r) {
                *a = (*a + p * p - f * b % p) % p;
            }
        }
    }
    w.iter().all(|&c| c == 0)
}

fn closed(rows: &[Vec<u64>], m: &[Vec<u64>], p: u64) -> bool {
    rows.iter().all(|r| in_span(rows, &apply(m, r, p), p))
}

/// Every `k`-dimensional subspace of `𝔽_p^dim`, once, via its reduced row echelon basis.
fn for_each_rref(p: u64, k: usize, dim: usize, visit: &mut dyn FnMut(&[Vec<u64>])) {
    let mut pivots = Vec::new();
    choose(0, k, dim, &mut pivots, &mut |piv| {
        let free: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(r, &c)| (c + 1..dim).filter(|j| !piv.contains(j)).map(move |j| (r, j)))
            .collect();
        let total = p.pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0u64; dim]; k];
            for (r, &c) in piv.iter().enumerate() {
                rows[r][c] = 1;
            }
            for &(r, j) in &free {
                rows[r][j] = code % p;
                code /= p;
            }
            visit(&rows);
        }
    });
}

fn choose(start: usize, k: usize, dim: usize, acc: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if acc.len() == k {
        visit(acc);
        return;
    }
    for c in start..dim {
        acc.push(c);
        choose(c + 1, k, dim, acc, visit);
        acc.pop();
    }
}
