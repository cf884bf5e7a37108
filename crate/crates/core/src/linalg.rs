//! Dense exact linear algebra over a [`Field`].

use crate::field::Field;

/// Row echelon data of a column set: lets one test whether a target vector
/// lies in the span and recover the coefficients.
pub struct Span<F: Field> {
    dim: usize,
    /// Pivot rows; each row is `(vector, combination of input columns)`.
    rows: Vec<(Vec<F>, Vec<F>)>,
    pivots: Vec<usize>,
    ncols: usize,
}

impl<F: Field> Span<F> {
    /// `columns[j]` are vectors of length `dim`.
    pub fn new(dim: usize, columns: &[Vec<F>]) -> Self {
        let mut span = Span {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            ncols: columns.len(),
        };
        for (j, c) in columns.iter().enumerate() {
            let mut comb = vec![F::zero(); columns.len()];
            comb[j] = F::one();
            span.insert(c.clone(), comb);
        }
        span
    }

    fn eliminate(&self, v: &mut [F], comb: &mut [F]) {
        for ((row, rcomb), p) in self.rows.iter().zip(&self.pivots) {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (a, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
            for (a, b) in comb.iter_mut().zip(rcomb) {
                if !b.is_zero() {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<F>, mut comb: Vec<F>) {
        debug_assert_eq!(v.len(), self.dim);
        self.eliminate(&mut v, &mut comb);
        if let Some(p) = v.iter().position(|a| !a.is_zero()) {
            let inv = v[p].inverse().expect("pivot is nonzero");
            for a in v.iter_mut() {
                *a = a.clone() * inv.clone();
            }
            for a in comb.iter_mut() {
                *a = a.clone() * inv.clone();
            }
            // keep earlier rows reduced against the new pivot
            for ((row, rcomb), _) in self.rows.iter_mut().zip(&self.pivots) {
                if row[p].is_zero() {
                    continue;
                }
                let f = row[p].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    *a = a.clone() - f.clone() * b.clone();
                }
                for (a, b) in rcomb.iter_mut().zip(&comb) {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
            self.rows.push((v, comb));
            self.pivots.push(p);
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients `c` with `sum_j c_j columns[j] = target`, if any.
    pub fn solve(&self, target: &[F]) -> Option<Vec<F>> {
        let mut v = target.to_vec();
        let mut comb = vec![F::zero(); self.ncols];
        self.eliminate(&mut v, &mut comb);
        if v.iter().any(|a| !a.is_zero()) {
            return None;
        }
        // target - sum(comb) = 0 after elimination, so target = -comb
        Some(comb.into_iter().map(|c| -c).collect())
    }
}

/// Unique solution of the square system `A c = b` given by rows, or `None`
/// when `A` is singular.
pub fn solve_square<F: Field>(rows: &[Vec<F>], rhs: &[F]) -> Option<Vec<F>> {
    let n = rows.len();
    let mut a: Vec<Vec<F>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|r| !a[*r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inverse().expect("pivot is nonzero");
        for x in a[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_rational::BigRational;

    type F = Fp<101>;

    fn v(xs: &[i64]) -> Vec<F> {
        xs.iter().map(|x| F::from_i64(*x)).collect()
    }

    #[test]
    fn span_membership() {
        let span = Span::new(3, &[v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 2])]);
        assert_eq!(span.rank(), 2);
        let c = span.solve(&v(&[2, 3, 5])).unwrap();
        let mut acc = v(&[0, 0, 0]);
        for (col, cj) in [v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 2])].iter().zip(&c) {
            for (a, b) in acc.iter_mut().zip(col) {
                *a = *a + *cj * *b;
            }
        }
        assert_eq!(acc, v(&[2, 3, 5]));
        assert!(span.solve(&v(&[0, 0, 1])).is_none());
    }

    #[test]
    fn square_solve_rational() {
        let q = |x: i64| BigRational::from_i64(x);
        let rows = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let sol = solve_square(&rows, &[q(1), q(2)]).unwrap();
        assert_eq!(sol, vec![BigRational::new(1.into(), 5.into()), BigRational::new(3.into(), 5.into())]);
        assert!(solve_square(&[vec![q(1), q(2)], vec![q(2), q(4)]], &[q(0), q(1)]).is_none());
    }
}
