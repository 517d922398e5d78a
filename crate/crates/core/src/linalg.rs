//! Exact dense linear algebra over `ℚ(v)`.

use crate::coeff::VRat;

/// Row-major matrix.
pub type Matrix = Vec<Vec<VRat>>;

/// Reduced row echelon form; returns the pivot columns.
///
/// Pivots are chosen as the first nonzero entry in column order, so the
/// result is deterministic.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                if !m[r][j].is_zero() {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    rref(&mut m.clone()).len()
}

/// Basis of the null space `{x : m x = 0}` with `cols` unknowns, one vector
/// per free column, normalized to 1 there.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<VRat>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![VRat::zero(); cols];
            v[f] = VRat::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_vec(m: &Matrix, v: &[VRat]) -> Vec<VRat> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(VRat::zero(), |acc, (a, b)| if a.is_zero() { acc } else { &acc + &(a * b) }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|x| VRat::from_int(*x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = int(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&m, &k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn empty_matrix_has_full_kernel() {
        let m: Matrix = Vec::new();
        assert_eq!(kernel(&m, 2).len(), 2);
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn symbolic_entries() {
        let v = VRat::v_pow(1);
        let m = vec![vec![v.clone(), VRat::one()], vec![&v * &v, v.clone()]];
        assert_eq!(rank(&m), 1);
    }
}
