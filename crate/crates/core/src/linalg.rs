//! Exact Gauss-Jordan elimination over ℚ(i).

use num_traits::Zero;

use crate::scalar::GaussianRational;

/// Reduce `rows` to reduced row echelon form in place, returning the pivot
/// column of each nonzero row.
pub fn rref(rows: &mut [Vec<GaussianRational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &(&factor * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solve `Σ_k x_k·columns[k] = rhs`. Returns one solution (free variables set
/// to zero) or `None` if the system is inconsistent.
pub fn solve(columns: &[Vec<GaussianRational>], rhs: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
    let m = columns.len();
    let mut rows: Vec<Vec<GaussianRational>> = (0..rhs.len())
        .map(|i| {
            let mut row: Vec<_> = columns.iter().map(|col| col[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.last() == Some(&m) {
        return None;
    }
    let mut x = vec![GaussianRational::zero(); m];
    for (row, &c) in rows.iter().zip(&pivots) {
        x[c] = row[m].clone();
    }
    Some(x)
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows.
pub fn null_space(mut rows: Vec<Vec<GaussianRational>>, ncols: usize) -> Vec<Vec<GaussianRational>> {
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussianRational::zero(); ncols];
            v[f] = GaussianRational::from(1);
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

pub fn rank(columns: &[Vec<GaussianRational>]) -> usize {
    let Some(len) = columns.first().map(Vec::len) else {
        return 0;
    };
    let mut rows: Vec<Vec<GaussianRational>> =
        (0..len).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    rref(&mut rows).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[&str]) -> Vec<GaussianRational> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn solves_consistent_system() {
        // x·(1, i) + y·(2, 0) = (3, 2i)  →  x = 2, y = 1/2
        let cols = vec![v(&["1", "i"]), v(&["2", "0"])];
        let x = solve(&cols, &v(&["3", "2i"])).unwrap();
        assert_eq!(x, v(&["2", "1/2"]));
    }

    #[test]
    fn detects_inconsistency() {
        let cols = vec![v(&["1", "1"])];
        assert!(solve(&cols, &v(&["1", "2"])).is_none());
    }

    #[test]
    fn null_space_of_rank_one() {
        let ns = null_space(vec![v(&["1", "i"]), v(&["2", "2i"])], 2);
        assert_eq!(ns, vec![v(&["-i", "1"])]);
        assert_eq!(rank(&[v(&["1", "2"]), v(&["i", "2i"])]), 1);
    }
}
