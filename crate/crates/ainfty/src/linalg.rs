//! Exact dense linear algebra: row reduction, solving, image bases.
//!
//! Sizes here are desk scale (operators on graded pieces of small spaces),
//! so a dense representation with exact scalars is the simplest correct
//! choice.

use crate::field::{FieldSpec, Scalar};

/// A dense matrix over the field, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    /// Builds the matrix whose j-th column is `columns[j]`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zero(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, c) in col.iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.get(row, col).inv().expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for j in col..self.cols {
                        let v = self.get(r, j) - &(self.get(row, j) * &factor);
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Solves `A x = b`; returns one solution if any exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent system
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// A basis of the column space, as column vectors.
    pub fn column_space_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        pivots
            .into_iter()
            .map(|j| (0..self.rows).map(|i| self.get(i, j).clone()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(field: &FieldSpec, vals: &[i64]) -> Vec<Scalar> {
        vals.iter().map(|&v| field.from_i64(v)).collect()
    }

    #[test]
    fn solve_rational_system() {
        let q = FieldSpec::RATIONALS;
        // Columns (1, 2), (3, 4); solve for b = (5, 6):
        // x1 + 3 x2 = 5 and 2 x1 + 4 x2 = 6 give x = (-1, 2).
        let m = Matrix::from_columns(q, 2, &[s(&q, &[1, 2]), s(&q, &[3, 4])]);
        let x = m.solve(&s(&q, &[5, 6])).unwrap();
        assert_eq!(x, s(&q, &[-1, 2]));
    }

    #[test]
    fn inconsistent_system() {
        let q = FieldSpec::RATIONALS;
        let m = Matrix::from_columns(q, 2, &[s(&q, &[1, 2])]);
        assert!(m.solve(&s(&q, &[1, 3])).is_none());
        assert!(m.solve(&s(&q, &[2, 4])).is_some());
    }

    #[test]
    fn image_basis_mod_3() {
        let f3 = FieldSpec::prime(3).unwrap();
        // Second column is twice the first; third is independent.
        let m = Matrix::from_columns(
            f3,
            2,
            &[s(&f3, &[1, 1]), s(&f3, &[2, 2]), s(&f3, &[0, 1])],
        );
        let basis = m.column_space_basis();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], s(&f3, &[1, 1]));
        assert_eq!(basis[1], s(&f3, &[0, 1]));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn verified_solution_property() {
        let f5 = FieldSpec::prime(5).unwrap();
        let cols = vec![s(&f5, &[1, 2, 3]), s(&f5, &[0, 1, 4]), s(&f5, &[2, 0, 1])];
        let m = Matrix::from_columns(f5, 3, &cols);
        let b = s(&f5, &[4, 4, 1]);
        let x = m.solve(&b).unwrap();
        for i in 0..3 {
            let mut acc = f5.zero();
            for j in 0..3 {
                acc = &acc + &(m.get(i, j) * &x[j]);
            }
            assert_eq!(acc, b[i]);
        }
    }
}
