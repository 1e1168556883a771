//! Lattice basis reduction over integer rows.
//!
//! Textbook LLL with delta = 0.99, exact i128 row arithmetic and Gram
//! -Schmidt coefficients carried in f64. The instances here are tiny (at
//! most 13 rows from the integer-relation lattice), so recomputing the
//! orthogonalization after every change is cheaper than maintaining it
//! incrementally, and the f64 projections are accurate enough for the
//! swap/size-reduction decisions; a swap cap guards against livelock from
//! rounding at the margin.

const DELTA: f64 = 0.99;
const MAX_SWAPS: usize = 100_000;

/// Gram-Schmidt data: squared norms of the orthogonalized rows and the
/// projection coefficients mu[i][j] for j < i.
fn orthogonalize(basis: &[Vec<i128>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = basis.len();
    let dim = basis[0].len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = vec![0.0f64; n];
    let mut mu = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        let mut v: Vec<f64> = basis[i].iter().map(|x| *x as f64).collect();
        for j in 0..i {
            let m = if norms[j] > 0.0 {
                basis[i]
                    .iter()
                    .zip(&star[j])
                    .map(|(x, y)| (*x as f64) * y)
                    .sum::<f64>()
                    / norms[j]
            } else {
                0.0
            };
            mu[i][j] = m;
            for d in 0..dim {
                v[d] -= m * star[j][d];
            }
        }
        norms[i] = v.iter().map(|x| x * x).sum();
        star.push(v);
    }
    (norms, mu)
}

/// Reduce `basis` in place. Rows must share a length; the basis need not
/// be full-rank (zero rows sink to the front and are tolerated).
pub(crate) fn lll_reduce(basis: &mut [Vec<i128>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let mut swaps = 0usize;
    let mut k = 1usize;
    let (mut norms, mut mu) = orthogonalize(basis);
    while k < n {
        // Size-reduce row k against all earlier rows.
        let mut changed = false;
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r.abs() >= 1.0 {
                let r = r as i128;
                let (head, tail) = basis.split_at_mut(k);
                let bj = &head[j];
                for (x, y) in tail[0].iter_mut().zip(bj) {
                    *x -= r * *y;
                }
                changed = true;
            }
        }
        if changed {
            let fresh = orthogonalize(basis);
            norms = fresh.0;
            mu = fresh.1;
        }
        let lovasz = (DELTA - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1];
        if norms[k] >= lovasz || swaps >= MAX_SWAPS {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            swaps += 1;
            let fresh = orthogonalize(basis);
            norms = fresh.0;
            mu = fresh.1;
            k = k.max(2) - 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm2(v: &[i128]) -> f64 {
        v.iter().map(|x| (*x as f64).powi(2)).sum()
    }

    #[test]
    fn reduction_shortens_a_planted_relation_lattice() {
        // Rows (e_i | round(v_i * 10^9)) for v = (1, sqrt(2), 1 + sqrt(2)):
        // the relation (1, 1, -1) gives a lattice vector of tiny last
        // coordinate, far shorter than the inputs.
        let scale = 1e9f64;
        let vals = [1.0, std::f64::consts::SQRT_2, 1.0 + std::f64::consts::SQRT_2];
        let mut basis: Vec<Vec<i128>> = (0..3)
            .map(|i| {
                let mut row = vec![0i128; 4];
                row[i] = 1;
                row[3] = (vals[i] * scale).round() as i128;
                row
            })
            .collect();
        lll_reduce(&mut basis);
        let shortest = basis.iter().map(|r| norm2(r)).fold(f64::INFINITY, f64::min);
        assert!(shortest <= 4.0, "shortest^2 = {shortest}");
        let hit = basis.iter().any(|r| {
            let q = [r[0], r[1], r[2]];
            (q == [1, 1, -1] || q == [-1, -1, 1]) && r[3].abs() <= 1
        });
        assert!(hit, "expected the (1, 1, -1) relation row: {basis:?}");
    }

    #[test]
    fn already_reduced_bases_are_untouched_in_length() {
        let mut basis = vec![vec![1i128, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let before = basis.clone();
        lll_reduce(&mut basis);
        assert_eq!(basis, before);
    }

    #[test]
    fn dependent_rows_do_not_panic() {
        let mut basis = vec![vec![2i128, 4], vec![1, 2], vec![3, 6]];
        lll_reduce(&mut basis);
        assert!(basis.iter().any(|r| r.iter().any(|x| *x != 0)));
    }
}
