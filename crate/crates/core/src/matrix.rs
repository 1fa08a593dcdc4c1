//! Fixed-size dense real matrices (2×2 and 4×4), row-major.
//!
//! Only what the two-spin problem needs: products, traces, Kronecker
//! products and symmetric eigenvalues. The 4×4 eigen-solver is a cyclic
//! Jacobi sweep, which converges quadratically for symmetric input.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

/// A 2×2 real matrix, `self.0[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

/// A 4×4 real matrix, `self.0[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[f64; 4]; 4]);

macro_rules! square_matrix {
    ($name:ident, $n:expr) => {
        impl $name {
            pub const DIM: usize = $n;

            pub const fn zeros() -> Self {
                Self([[0.0; $n]; $n])
            }

            pub fn identity() -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.0[i][i] = 1.0;
                }
                m
            }

            pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] = f(i, j);
                    }
                }
                m
            }

            pub fn scale(&self, k: f64) -> Self {
                Self::from_fn(|i, j| self.0[i][j] * k)
            }

            pub fn transpose(&self) -> Self {
                Self::from_fn(|i, j| self.0[j][i])
            }

            pub fn trace(&self) -> f64 {
                (0..$n).map(|i| self.0[i][i]).sum()
            }

            /// `Tr(self · other)` without forming the product.
            pub fn trace_of_product(&self, other: &Self) -> f64 {
                let mut acc = 0.0;
                for i in 0..$n {
                    for k in 0..$n {
                        acc += self.0[i][k] * other.0[k][i];
                    }
                }
                acc
            }

            /// Largest entrywise absolute difference.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                let mut worst = 0.0_f64;
                for i in 0..$n {
                    for j in 0..$n {
                        worst = worst.max((self.0[i][j] - other.0[i][j]).abs());
                    }
                }
                worst
            }

            pub fn is_symmetric(&self, tol: f64) -> bool {
                self.max_abs_diff(&self.transpose()) <= tol
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().flatten().all(|x| x.is_finite())
            }
        }

        impl Index<(usize, usize)> for $name {
            type Output = f64;
            fn index(&self, (i, j): (usize, usize)) -> &f64 {
                &self.0[i][j]
            }
        }

        impl IndexMut<(usize, usize)> for $name {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
                &mut self.0[i][j]
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
            }
        }

        impl Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                Self::from_fn(|i, j| (0..$n).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
            }
        }
    };
}

square_matrix!(Mat2, 2);
square_matrix!(Mat4, 4);

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn determinant(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Kronecker product `self ⊗ right`; `self` supplies the block structure,
    /// so entry `(2i+k, 2j+l)` is `self[i][j] · right[k][l]`.
    pub fn kron(&self, right: &Mat2) -> Mat4 {
        Mat4::from_fn(|r, c| self.0[r / 2][c / 2] * right.0[r % 2][c % 2])
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn symmetric_eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0];
        let d = self.0[1][1];
        let b = 0.5 * (self.0[0][1] + self.0[1][0]);
        let mean = 0.5 * (a + d);
        let radius = (0.5 * (a - d)).hypot(b);
        [mean - radius, mean + radius]
    }
}

impl Mat4 {
    /// Eigenvalues of the symmetric part, ascending, via cyclic Jacobi rotations.
    pub fn symmetric_eigenvalues(&self) -> [f64; 4] {
        let mut m = Mat4::from_fn(|i, j| 0.5 * (self.0[i][j] + self.0[j][i]));
        let scale: f64 = m.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();

        for _sweep in 0..64 {
            let off: f64 = (0..4)
                .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m.0[i][j] * m.0[i][j])
                .sum::<f64>()
                .sqrt();
            if off <= f64::EPSILON * scale || off == 0.0 {
                break;
            }
            for p in 0..3 {
                for q in (p + 1)..4 {
                    let apq = m.0[p][q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (m.0[q][q] - m.0[p][p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    // m <- Jᵀ m J with J the (p, q) Givens rotation
                    for k in 0..4 {
                        let mkp = m.0[k][p];
                        let mkq = m.0[k][q];
                        m.0[k][p] = c * mkp - s * mkq;
                        m.0[k][q] = s * mkp + c * mkq;
                    }
                    for k in 0..4 {
                        let mpk = m.0[p][k];
                        let mqk = m.0[q][k];
                        m.0[p][k] = c * mpk - s * mqk;
                        m.0[q][k] = s * mpk + c * mqk;
                    }
                }
            }
        }

        let mut eig = [m.0[0][0], m.0[1][1], m.0[2][2], m.0[3][3]];
        eig.sort_by(f64::total_cmp);
        eig
    }
}
