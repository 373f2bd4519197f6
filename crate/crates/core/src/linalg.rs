//! Exact Gauss–Jordan elimination over the rationals for small dense
//! matrices.
//!
//! Pivots are chosen as the first nonzero entry in column order — arithmetic
//! is exact, so there is no numerical pivoting. Internally the sweep works
//! on integer-scaled rows (`row <- p·row - e·pivot`) with the content gcd
//! divided out after every update; normalizing by rational pivots during the
//! sweep would let denominators accumulate multiplicatively and the entry
//! sizes explode.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rat::Rat;

/// Row-major dense matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Result of a reduced-row-echelon computation.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// The reduced matrix.
    pub matrix: RatMatrix,
    /// Pivot column of each nonzero row, in row order (strictly increasing).
    pub pivot_cols: Vec<usize>,
    /// Transform with `transform · original = matrix`.
    pub transform: RatMatrix,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduced row echelon form with the row-operation transform recorded.
    pub fn rref(&self) -> Echelon {
        // integer-scaled augmented rows [matrix | identity]
        let width = self.cols + self.rows;
        let mut work: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for c in self.row(i) {
                    lcm = lcm.lcm(c.denom());
                }
                let mut row: Vec<BigInt> = self
                    .row(i)
                    .iter()
                    .map(|c| c.numer() * (&lcm / c.denom()))
                    .collect();
                row.resize(width, BigInt::zero());
                row[self.cols + i] = lcm;
                row
            })
            .collect();

        let mut pivot_cols = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            if next_row == self.rows {
                break;
            }
            let Some(p) = (next_row..self.rows).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(next_row, p);
            let pivot_val = work[next_row][col].clone();
            for r in 0..self.rows {
                if r == next_row || work[r][col].is_zero() {
                    continue;
                }
                let factor = work[r][col].clone();
                let mut content = BigInt::zero();
                for j in 0..width {
                    let v = &work[r][j] * &pivot_val - &factor * &work[next_row][j];
                    if !v.is_zero() && !content.is_one() {
                        content = content.gcd(&v);
                    }
                    work[r][j] = v;
                }
                if content > BigInt::one() {
                    for v in work[r].iter_mut() {
                        *v /= &content;
                    }
                }
            }
            pivot_cols.push(col);
            next_row += 1;
        }

        // normalize each pivot row by its (nonzero) pivot entry
        let mut matrix = RatMatrix::zero(self.rows, self.cols);
        let mut transform = RatMatrix::zero(self.rows, self.rows);
        for (r, row) in work.iter().enumerate() {
            let pivot = pivot_cols
                .get(r)
                .map(|&c| row[c].clone())
                .unwrap_or_else(BigInt::one);
            for j in 0..self.cols {
                if !row[j].is_zero() {
                    matrix[(r, j)] = Rat::new(row[j].clone(), pivot.clone());
                }
            }
            for j in 0..self.rows {
                if !row[self.cols + j].is_zero() {
                    transform[(r, j)] = Rat::new(row[self.cols + j].clone(), pivot.clone());
                }
            }
        }
        Echelon {
            matrix,
            pivot_cols,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivot_cols.len()
    }

    /// Basis of the right kernel (solutions of `M x = 0`), one vector per
    /// free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let ech = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in ech.pivot_cols.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rat::zero(); self.cols];
            vec[free] = Rat::one();
            for (col, &piv) in pivot_set.iter().enumerate() {
                if let Some(r) = piv {
                    vec[col] = -ech.matrix[(r, free)].clone();
                }
            }
            basis.push(vec);
        }
        basis
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}
