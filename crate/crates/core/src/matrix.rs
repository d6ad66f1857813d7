//! Dense complex matrices for few-qubit gate algebra and density operators.
//!
//! Everything here is tiny (dimension at most 16), so the representation is a
//! plain row-major `Vec<Complex64>` and products are written out naively.
//! [`Unitary`] wraps a [`Mat`] whose unitarity has been checked at
//! construction; gate constructors only ever hand out dimension 2 or 4.

use std::fmt;
use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the Frobenius norm of `U†U − I` accepted at [`Unitary`] construction.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Mat {
    dim: usize,
    a: Vec<Complex64>,
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Mat {
            dim,
            a: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Mat::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from nested rows; panics if rows are ragged.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut m = Mat::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "ragged matrix rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.dim + j] = v;
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let lik = self.at(i, k);
                if lik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.at(i, j) + lik * rhs.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(rhs.a.iter()) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(rhs.a.iter()) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Mat {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x *= c;
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Mat {
        let n = self.dim;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.at(j, i).conj());
            }
        }
        out
    }

    /// Tensor product; `self` is the left factor (first / control-side qubit).
    pub fn kron(&self, rhs: &Mat) -> Mat {
        let n = self.dim;
        let m = rhs.dim;
        let mut out = Mat::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let s = self.at(i, j);
                if s == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, s * rhs.at(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    /// Largest entry-wise absolute difference.
    pub fn max_abs_diff(&self, rhs: &Mat) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.a
            .iter()
            .zip(rhs.a.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_dist(&self, rhs: &Mat) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.a
            .iter()
            .zip(rhs.a.iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of `U†U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        self.dagger().mul(self).frobenius_dist(&Mat::identity(self.dim))
    }

    /// Embed a gate acting on `targets` into an `n_qubits` register.
    ///
    /// Basis convention: qubit 0 is the first ket label, i.e. the most
    /// significant bit of the basis index, so two qubits order as
    /// |00⟩,|01⟩,|10⟩,|11⟩. `targets[0]` is the gate's own first qubit.
    pub fn embed(&self, targets: &[usize], n_qubits: usize) -> Result<Mat> {
        let k = targets.len();
        if self.dim != 1 << k {
            return Err(Error::DimMismatch(format!(
                "gate dim {} does not act on {} qubit(s)",
                self.dim, k
            )));
        }
        for (idx, &t) in targets.iter().enumerate() {
            if t >= n_qubits {
                return Err(Error::DimMismatch(format!(
                    "target qubit {t} out of range for {n_qubits} qubits"
                )));
            }
            if targets[..idx].contains(&t) {
                return Err(Error::DimMismatch(format!("duplicate target qubit {t}")));
            }
        }
        let dim = 1usize << n_qubits;
        let bit = |index: usize, q: usize| (index >> (n_qubits - 1 - q)) & 1;
        let mut out = Mat::zeros(dim);
        for col in 0..dim {
            let mut cg = 0usize;
            for &t in targets {
                cg = (cg << 1) | bit(col, t);
            }
            for rg in 0..self.dim {
                let mut row = col;
                for (pos, &t) in targets.iter().enumerate() {
                    let b = (rg >> (k - 1 - pos)) & 1;
                    let shift = n_qubits - 1 - t;
                    row = (row & !(1 << shift)) | (b << shift);
                }
                let v = self.at(rg, cg);
                if v != Complex64::new(0.0, 0.0) {
                    out.set(row, col, v);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.at(i, j);
                write!(f, " {:+.4}{:+.4}i", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A matrix verified unitary to [`UNITARITY_TOL`] at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary(Mat);

impl Unitary {
    /// Validate `m` as a 2x2 or 4x4 unitary gate matrix.
    pub fn new(m: Mat) -> Result<Unitary> {
        if m.dim() != 2 && m.dim() != 4 {
            return Err(Error::DimMismatch(format!(
                "gate unitaries are 2x2 or 4x4, got {}x{}",
                m.dim(),
                m.dim()
            )));
        }
        let defect = m.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                defect,
                tol: UNITARITY_TOL,
            });
        }
        Ok(Unitary(m))
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }

    pub fn mat(&self) -> &Mat {
        &self.0
    }
}

impl Deref for Unitary {
    type Target = Mat;
    fn deref(&self) -> &Mat {
        &self.0
    }
}

/// `‖u − e^{iφ}v‖_max` with the phase φ read off the largest-magnitude entry
/// of `v` (which minimizes the norm up to rounding).
pub fn global_phase_distance(u: &Mat, v: &Mat) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimMismatch(format!(
            "cannot compare {}x{} with {}x{}",
            u.dim(),
            u.dim(),
            v.dim(),
            v.dim()
        )));
    }
    let n = v.dim();
    let mut best = (0usize, 0usize);
    let mut best_mag = -1.0;
    for i in 0..n {
        for j in 0..n {
            let mag = v.at(i, j).norm();
            if mag > best_mag {
                best_mag = mag;
                best = (i, j);
            }
        }
    }
    if best_mag == 0.0 {
        return Ok(u.max_abs_diff(&Mat::zeros(n)));
    }
    let ratio = u.at(best.0, best.1) / v.at(best.0, best.1);
    if ratio.norm() == 0.0 {
        return Ok(u.max_abs_diff(v).max(best_mag));
    }
    let phase = ratio / ratio.norm();
    Ok(u.max_abs_diff(&v.scale(phase)))
}

/// Phase equivalence: true iff `min_φ ‖u − e^{iφ}v‖_max ≤ tol`.
pub fn equal_up_to_global_phase(u: &Mat, v: &Mat, tol: f64) -> Result<bool> {
    Ok(global_phase_distance(u, v)? <= tol)
}
