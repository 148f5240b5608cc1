//! Independent oracles: elimination without division, series expansion,
//! monomial counting, and agreement between the rational and prime backends.

use lefschetz_core::inverse::dual_socle_generator;
use lefschetz_core::rng::stream;
use lefschetz_core::{koszul_hf, Algebra, Field, Instance, Matrix, Rational, F65521};
use rand::Rng;

const P: u64 = 65521;

/// Rank mod `P` by fraction-free elimination: rows are combined with
/// `r_j <- a_ii r_j - a_ji r_i`, no inverses taken.
fn oracle_rank(rows: &[Vec<u64>]) -> usize {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % P).collect()).collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let pivot_row = a[rank].clone();
        let lead = pivot_row[col] as u128;
        for row in a.iter_mut().skip(rank + 1) {
            let f = row[col] as u128;
            if f == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                let (x2, y2) = ((*x as u128 * lead) % P as u128, (y as u128 * f) % P as u128);
                *x = ((x2 + P as u128 - y2) % P as u128) as u64;
            }
        }
        rank += 1;
    }
    rank
}

fn to_matrix(rows: &[Vec<u64>]) -> Matrix<F65521> {
    let cols = rows[0].len();
    Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| F65521::new(x)).collect()).collect())
        .unwrap()
}

#[test]
fn rank_matches_division_free_elimination() {
    let mut rng = stream(11, "oracle.rank", 0);
    for trial in 0..100 {
        // Every other matrix is a product of 10 x r and r x 10 factors.
        let rows: Vec<Vec<u64>> = if trial % 2 == 0 {
            (0..10).map(|_| (0..10).map(|_| rng.gen_range(0..P)).collect()).collect()
        } else {
            let r = rng.gen_range(0..=10usize);
            let left: Vec<Vec<u64>> = (0..10).map(|_| (0..r).map(|_| rng.gen_range(0..P)).collect()).collect();
            let right: Vec<Vec<u64>> = (0..r).map(|_| (0..10).map(|_| rng.gen_range(0..P)).collect()).collect();
            (0..10)
                .map(|i| {
                    (0..10)
                        .map(|j| (0..r).fold(0u64, |acc, t| (acc + left[i][t] * right[t][j] % P) % P))
                        .collect()
                })
                .collect()
        };
        assert_eq!(to_matrix(&rows).rank(), oracle_rank(&rows), "trial {trial}");
    }
}

/// Coefficients of `(1 + t + ... + t^{d-1})^{m+1}` by repeated convolution.
fn series(m: usize, d: usize) -> Vec<u64> {
    let mut acc = vec![1u64];
    for _ in 0..=m {
        let mut next = vec![0u64; acc.len() + d - 1];
        for (i, a) in acc.iter().enumerate() {
            for slot in next.iter_mut().skip(i).take(d) {
                *slot += a;
            }
        }
        acc = next;
    }
    acc
}

#[test]
fn koszul_formula_matches_series_expansion() {
    for m in 1..=6 {
        for d in 2..=5 {
            let s = series(m, d);
            for (k, &c) in s.iter().enumerate() {
                assert_eq!(koszul_hf(m, d, k), c, "m = {m}, d = {d}, k = {k}");
            }
            assert_eq!(koszul_hf(m, d, s.len()), 0);
            assert_eq!(koszul_hf(m, d, s.len() + 3), 0);
        }
    }
}

#[test]
fn known_hilbert_sequences() {
    assert_eq!(series(2, 3), vec![1, 3, 6, 7, 6, 3, 1]);
    assert_eq!(series(3, 3), vec![1, 4, 10, 16, 19, 16, 10, 4, 1]);
    assert_eq!(series(4, 2), vec![1, 5, 10, 10, 5, 1]);
    let a = Algebra::new(Instance::<F65521>::monomial(2, 3).unwrap());
    assert_eq!(a.hilbert_table()[..7], [1, 3, 6, 7, 6, 3, 1]);
}

/// Monomials of degree `k` in `n` variables with every exponent below `d`.
fn count_bounded(n: usize, d: usize, k: usize) -> usize {
    if n == 0 {
        return usize::from(k == 0);
    }
    (0..d.min(k + 1)).map(|e| count_bounded(n - 1, d, k - e)).sum()
}

#[test]
fn monomial_algebra_counts_bounded_monomials() {
    for (m, d) in [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4)] {
        let a = Algebra::new(Instance::<F65521>::monomial(m, d).unwrap());
        for k in 0..=a.socle_degree() + 1 {
            assert_eq!(a.hf(k), count_bounded(m + 1, d, k), "m = {m}, d = {d}, k = {k}");
        }
    }
}

#[test]
fn rational_and_prime_backends_agree() {
    let mut compared = 0;
    for seed in 0..4u64 {
        let mut rng = stream(seed, "oracle.agree", 0);
        let inst = Instance::<Rational>::random(3, 2, &mut rng).unwrap();
        let mut file = inst.to_file();
        file.field = F65521::spec();
        let reduced = file.to_instance::<F65521>().unwrap();
        let aq = Algebra::new(inst);
        let ap = Algebra::new(reduced);
        if !aq.is_regular() {
            continue;
        }
        assert_eq!(aq.hilbert_table(), ap.hilbert_table(), "seed {seed}");
        let gq = dual_socle_generator(&aq).unwrap().g;
        let gp = dual_socle_generator(&ap).unwrap().g;
        // Reduce g over Q coefficientwise, then renormalize like the prime side.
        let lead = gq.lead_coeff().unwrap().clone();
        let Some(lead_mod) = lead.reduce_mod(P) else { continue };
        if lead_mod == 0 {
            continue;
        }
        let inv = F65521::new(lead_mod).inv().unwrap();
        for (mono, c) in gq.terms() {
            let c = F65521::new(c.reduce_mod(P).unwrap()) * inv;
            assert_eq!(gp.coeff(mono), c, "seed {seed}, monomial {mono:?}");
        }
        assert_eq!(gp.num_terms(), gq.terms().filter(|(_, c)| c.reduce_mod(P) != Some(0)).count());
        compared += 1;
    }
    assert!(compared >= 2, "only {compared} instances compared");
}
