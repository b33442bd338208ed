//! Integer abelianization via Smith normal form of the exponent-sum matrix.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Presentation, Weighting, WordsError};

/// Rows are relators, columns are generators in declaration order.
pub fn exponent_sum_matrix(p: &Presentation) -> Vec<Vec<BigInt>> {
    p.relators()
        .iter()
        .map(|r| p.generators().iter().map(|g| BigInt::from(r.exponent_sum(g))).collect())
        .collect()
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the next.
pub fn smith_diagonal(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for k in 0..rows.min(cols) {
        // Full pivoting on the smallest nonzero absolute value.
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return diag;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let pivot = m[k][k].clone();
            let mut clean = true;
            for i in k + 1..rows {
                let q = m[i][k].div_floor(&pivot);
                if !q.is_zero() {
                    for j in k..cols {
                        let d = &q * &m[k][j];
                        m[i][j] -= d;
                    }
                }
                clean &= m[i][k].is_zero();
            }
            for j in k + 1..cols {
                let q = m[k][j].div_floor(&pivot);
                if !q.is_zero() {
                    for i in k..rows {
                        let d = &q * &m[i][k];
                        m[i][j] -= d;
                    }
                }
                clean &= m[k][j].is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide the rest of the block.
            let offending = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_multiple_of(&pivot));
            match offending {
                Some((i, _)) => {
                    for j in k..cols {
                        let v = m[i][j].clone();
                        m[k][j] += v;
                    }
                }
                None => {
                    diag.push(pivot.abs());
                    break;
                }
            }
        }
    }
    diag
}

/// `(free_rank, torsion)` with torsion coefficients greater than one, each
/// dividing the next.
pub fn abelianization_invariants(p: &Presentation) -> (usize, Vec<BigInt>) {
    let diag = smith_diagonal(&exponent_sum_matrix(p));
    let free_rank = p.generators().len() - diag.len();
    let torsion = diag.into_iter().filter(|d| !d.is_one()).collect();
    (free_rank, torsion)
}

/// Basis of the integer kernel `{c : M c = 0}` via column Hermite reduction.
fn integer_kernel(matrix: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let rows = matrix.len();
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    // Column operations are mirrored on the identity to track the transform.
    let mut q: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut lead = 0;
    for r in 0..rows {
        if lead >= cols {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (lead..cols).filter(|&j| !m[r][j].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let pj = *nonzero.iter().min_by_key(|&&j| m[r][j].abs()).unwrap();
            swap_cols(&mut m, &mut q, lead, pj);
            let mut done = true;
            for j in lead + 1..cols {
                if m[r][j].is_zero() {
                    continue;
                }
                let f = m[r][j].div_floor(&m[r][lead]);
                sub_col(&mut m, &mut q, j, lead, &f);
                done &= m[r][j].is_zero();
            }
            if done {
                lead += 1;
                break;
            }
        }
    }
    (lead..cols).map(|j| q.iter().map(|row| row[j].clone()).collect()).collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], q: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut().chain(q.iter_mut()) {
        row.swap(a, b);
    }
}

fn sub_col(m: &mut [Vec<BigInt>], q: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    for row in m.iter_mut().chain(q.iter_mut()) {
        let d = factor * &row[source];
        row[target] -= d;
    }
}

/// The weighting induced by `H_1 = Z`, signed so that the first generator
/// with nonzero weight is positive.
pub fn canonical_weighting(p: &Presentation) -> Result<Weighting, WordsError> {
    let (free_rank, torsion) = abelianization_invariants(p);
    if free_rank != 1 || !torsion.is_empty() {
        return Err(WordsError::NotKnotLike {
            free_rank,
            torsion: torsion.iter().map(ToString::to_string).collect(),
        });
    }
    let n = p.generators().len();
    let kernel = integer_kernel(&exponent_sum_matrix(p), n);
    debug_assert_eq!(kernel.len(), 1);
    let mut v = kernel.into_iter().next().expect("rank-one kernel");
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    let values: BTreeMap<String, i64> = p
        .generators()
        .iter()
        .zip(&v)
        .map(|(g, x)| (g.clone(), i64::try_from(x).expect("weight fits in i64")))
        .collect();
    Weighting::new(p, values)
}
