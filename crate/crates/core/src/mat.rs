//! Small exact matrices over [`Scalar`]: 2x2 helpers and generic Gaussian
//! elimination for determinants, ranks and nullspaces of desk-sized systems.

use crate::field::{FieldSpec, Scalar};

/// A 2x2 matrix over the active field, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2(pub [[Scalar; 2]; 2]);

impl Mat2 {
    pub fn identity(spec: FieldSpec) -> Self {
        Mat2([
            [spec.one(), spec.zero()],
            [spec.zero(), spec.one()],
        ])
    }

    pub fn from_i64(spec: FieldSpec, m: [[i64; 2]; 2]) -> Self {
        Mat2([
            [spec.from_i64(m[0][0]), spec.from_i64(m[0][1])],
            [spec.from_i64(m[1][0]), spec.from_i64(m[1][1])],
        ])
    }

    pub fn spec(&self) -> FieldSpec {
        self.0[0][0].spec()
    }

    pub fn det(&self) -> Scalar {
        &(&self.0[0][0] * &self.0[1][1]) - &(&self.0[0][1] * &self.0[1][0])
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// Inverse; panics if singular.
    pub fn inv(&self) -> Mat2 {
        let d = self.det();
        assert!(!d.is_zero(), "inverting a singular 2x2 matrix");
        let di = d.inv();
        Mat2([
            [&self.0[1][1] * &di, &(-&self.0[0][1]) * &di],
            [&(-&self.0[1][0]) * &di, &self.0[0][0] * &di],
        ])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::identity(self.spec());
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = &(&self.0[i][0] * &rhs.0[0][j]) + &(&self.0[i][1] * &rhs.0[1][j]);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Mat2 {
        let mut out = self.clone();
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e = &*e * c;
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar; 2]) -> [Scalar; 2] {
        [
            &(&self.0[0][0] * &v[0]) + &(&self.0[0][1] * &v[1]),
            &(&self.0[1][0] * &v[0]) + &(&self.0[1][1] * &v[1]),
        ]
    }
}

/// Rank of an arbitrary matrix by exact elimination. Rows are consumed.
pub fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][col].inv();
        for i in r + 1..nrows {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] * &inv;
            for j in col..ncols {
                let t = &rows[r][j] * &factor;
                rows[i][j] = &rows[i][j] - &t;
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

/// Determinant of a square matrix by exact elimination.
pub fn det(mut rows: Vec<Vec<Scalar>>, spec: FieldSpec) -> Scalar {
    let n = rows.len();
    let mut result = spec.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&i| !rows[i][col].is_zero()) else {
            return spec.zero();
        };
        if pivot != col {
            rows.swap(col, pivot);
            result = -result;
        }
        result = &result * &rows[col][col];
        let inv = rows[col][col].inv();
        for i in col + 1..n {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] * &inv;
            for j in col..n {
                let t = &rows[col][j] * &factor;
                rows[i][j] = &rows[i][j] - &t;
            }
        }
    }
    result
}

/// Basis of the right nullspace of `rows` (an m x n matrix), as vectors of
/// length n.
pub fn nullspace(mut rows: Vec<Vec<Scalar>>, ncols: usize, spec: FieldSpec) -> Vec<Vec<Scalar>> {
    let nrows = rows.len();
    // reduced row echelon form
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][col].inv();
        for j in col..ncols {
            rows[r][j] = &rows[r][j] * &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in col..ncols {
                    let t = &rows[r][j] * &factor;
                    rows[i][j] = &rows[i][j] - &t;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![spec.zero(); ncols];
        v[free] = spec.one();
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -&rows[i][free];
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix by Gauss–Jordan; `None` if singular.
pub fn inverse(m: &[Vec<Scalar>], spec: FieldSpec) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut b: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { spec.one() } else { spec.zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv();
        for j in 0..n {
            a[col][j] = &a[col][j] * &inv;
            b[col][j] = &b[col][j] * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for j in 0..n {
                    let t = &a[col][j] * &factor;
                    a[i][j] = &a[i][j] - &t;
                    let t = &b[col][j] * &factor;
                    b[i][j] = &b[i][j] - &t;
                }
            }
        }
    }
    Some(b)
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], spec: FieldSpec) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = spec.zero();
                    for l in 0..k {
                        acc += &(&a[i][l] * &b[l][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn rows(m: &[&[i64]]) -> Vec<Vec<Scalar>> {
        m.iter()
            .map(|r| r.iter().map(|&v| Q.from_i64(v)).collect())
            .collect()
    }

    #[test]
    fn det_and_rank() {
        assert_eq!(
            det(rows(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]), Q),
            Q.from_i64(1)
        );
        assert_eq!(det(rows(&[&[1, 2], &[2, 4]]), Q), Q.zero());
        assert_eq!(rank(rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])), 2);
    }

    #[test]
    fn nullspace_members_are_killed() {
        let m = rows(&[&[1, 2, 3], &[4, 5, 6]]);
        let ns = nullspace(m.clone(), 3, Q);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let mut acc = Q.zero();
            for (a, b) in row.iter().zip(&ns[0]) {
                acc += &(a * b);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn mat2_inverse() {
        let m = Mat2::from_i64(Q, [[1, 2], [3, 4]]);
        let id = m.mul(&m.inv());
        assert_eq!(id, Mat2::identity(Q));
    }

    #[test]
    fn generic_inverse() {
        let m = rows(&[&[2, 1, 0], &[0, 1, 0], &[1, 0, 1]]);
        let mi = inverse(&m, Q).unwrap();
        let prod = mat_mul(&m, &mi, Q);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(prod[i][j], if i == j { Q.one() } else { Q.zero() });
            }
        }
        assert!(inverse(&rows(&[&[1, 2], &[2, 4]]), Q).is_none());
    }
}
