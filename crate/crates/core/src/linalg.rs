//! Fraction-free (Bareiss) elimination over an exact field.

use crate::fields::{Field, Scalar};

/// Rank of a dense matrix given as rows.
pub fn rank(field: &Field, mut rows: Vec<Vec<Scalar>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = field.one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, piv);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let num = field.sub(
                    &field.mul(&rows[i][j], &rows[r][c]),
                    &field.mul(&rows[i][c], &rows[r][j]),
                );
                rows[i][j] = field.div(&num, &prev).expect("previous pivot is nonzero");
            }
            rows[i][c] = field.zero();
        }
        prev = rows[r][c].clone();
        r += 1;
    }
    r
}

/// Determinant of a square matrix.
pub fn determinant(field: &Field, mut rows: Vec<Vec<Scalar>>) -> Scalar {
    let n = rows.len();
    if n == 0 {
        return field.one();
    }
    let mut prev = field.one();
    let mut negate = false;
    for k in 0..n {
        if field.is_zero(&rows[k][k]) {
            let Some(i) = (k + 1..n).find(|&i| !field.is_zero(&rows[i][k])) else {
                return field.zero();
            };
            rows.swap(k, i);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = field.sub(
                    &field.mul(&rows[i][j], &rows[k][k]),
                    &field.mul(&rows[i][k], &rows[k][j]),
                );
                rows[i][j] = field.div(&num, &prev).expect("previous pivot is nonzero");
            }
        }
        prev = rows[k][k].clone();
    }
    let d = rows[n - 1][n - 1].clone();
    if negate {
        field.neg(&d)
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(field: &Field, m: &[&[i64]]) -> Vec<Vec<Scalar>> {
        m.iter().map(|r| r.iter().map(|&c| field.from_i64(c)).collect()).collect()
    }

    #[test]
    fn rank_and_det() {
        let q = Field::rationals();
        let a = mat(&q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(rank(&q, a.clone()), 2);
        assert_eq!(determinant(&q, a), q.zero());
        let b = mat(&q, &[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&q, b.clone()), q.from_i64(-1));
        assert_eq!(rank(&q, b), 2);
        let c = mat(&q, &[&[0, 0, 1], &[0, 0, 2], &[0, 0, 0], &[1, 1, 1]]);
        assert_eq!(rank(&q, c), 2);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(rank(&f3, mat(&f3, &[&[1, 2], &[2, 1]])), 1);
        assert_eq!(rank(&q, Vec::new()), 0);
    }
}
