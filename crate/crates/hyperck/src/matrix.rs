//! Dense complex matrices of the small sizes this crate verifies, with the
//! spectral quantities the relation checks need: operator norm and the
//! eigenvalue floor of Hermitian matrices.
//!
//! Hermitian eigenvalues are computed by cyclic Jacobi on the real symmetric
//! embedding `[[X, -Y], [Y, X]]` of `A = X + iY`, whose spectrum is that of
//! `A` doubled.

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must be square");
        CMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix unit `E_{rc}` (1-based callers should subtract themselves).
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        m[(row, col)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Spectral norm, via the largest eigenvalue of `A* A`.
    pub fn op_norm(&self) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        let gram = self.adjoint().mul(self);
        let eigs = hermitian_eigenvalues(&gram);
        eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    /// `(A + A*) / 2`.
    pub fn hermitize(&self) -> CMatrix {
        self.add(&self.adjoint()).scale(Complex64::new(0.5, 0.0))
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Ascending eigenvalues of a Hermitian matrix (the caller is responsible
/// for hermitizing first if the input is only approximately Hermitian).
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let n = a.dim;
    if n == 0 {
        return Vec::new();
    }
    // Real symmetric embedding of dimension 2n.
    let m = 2 * n;
    let mut s = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            s[i * m + j] = z.re;
            s[(i + n) * m + (j + n)] = z.re;
            s[i * m + (j + n)] = -z.im;
            s[(i + n) * m + j] = z.im;
        }
    }
    jacobi_symmetric(&mut s, m);
    let mut diag: Vec<f64> = (0..m).map(|i| s[i * m + i]).collect();
    diag.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    // every eigenvalue appears twice in the embedding
    diag.into_iter().step_by(2).collect()
}

/// Floor of the spectrum of the hermitization, for order-relation checks.
pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(&a.hermitize())
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// Cyclic Jacobi sweeps on a real symmetric matrix until off-diagonal mass
/// is negligible; the diagonal then holds the eigenvalues.
fn jacobi_symmetric(s: &mut [f64], n: usize) {
    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += s[p * n + q] * s[p * n + q];
            }
        }
        if off.sqrt() < 1e-14 {
            return;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = s[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = s[p * n + p];
                let aqq = s[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let skp = s[k * n + p];
                    let skq = s[k * n + q];
                    s[k * n + p] = c * skp - sn * skq;
                    s[k * n + q] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let spk = s[p * n + k];
                    let sqk = s[q * n + k];
                    s[p * n + k] = c * spk - sn * sqk;
                    s[q * n + k] = sn * spk + c * sqk;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let mut a = CMatrix::zeros(3);
        a[(0, 0)] = c(2.0, 0.0);
        a[(1, 1)] = c(-1.0, 0.0);
        a[(2, 2)] = c(0.5, 0.0);
        let eigs = hermitian_eigenvalues(&a);
        assert!((eigs[0] + 1.0).abs() < 1e-12);
        assert!((eigs[1] - 0.5).abs() < 1e-12);
        assert!((eigs[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_pauli_like_matrix() {
        // [[0, -i], [i, 0]] has eigenvalues ±1.
        let mut a = CMatrix::zeros(2);
        a[(0, 1)] = c(0.0, -1.0);
        a[(1, 0)] = c(0.0, 1.0);
        let eigs = hermitian_eigenvalues(&a);
        assert!((eigs[0] + 1.0).abs() < 1e-12);
        assert!((eigs[1] - 1.0).abs() < 1e-12);
        assert!((min_eigenvalue(&a) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn op_norm_of_partial_isometry_is_one() {
        let s = CMatrix::unit(2, 0, 1);
        assert!((s.op_norm() - 1.0).abs() < 1e-12);
        assert!((CMatrix::identity(4).op_norm() - 1.0).abs() < 1e-12);
        assert_eq!(CMatrix::zeros(3).op_norm(), 0.0);
    }

    #[test]
    fn adjoint_and_products() {
        let a = CMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(0.0, -1.0)],
            vec![c(3.0, 0.0), c(0.0, 0.0)],
        ]);
        let aa = a.adjoint().adjoint();
        assert_eq!(a, aa);
        let gram = a.adjoint().mul(&a);
        assert!(min_eigenvalue(&gram) > -1e-12);
    }
}
