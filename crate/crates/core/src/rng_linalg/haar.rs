use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{RngStream, STRUCTURAL_TOL};
use crate::{Error, Result, C64};

/// Complex Gaussian with N(0, 1/2) real and imaginary parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows x cols` matrix of i.i.d. complex Gaussians (column-major fill order).
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Householder QR of a Gaussian matrix, then rescale each column of Q by the
/// phase of the matching diagonal entry of R. Without the phase fix the
/// distribution of Q depends on the QR convention and is not Haar.
fn haar_columns<R: Rng + ?Sized>(d: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    let qr = gaussian_matrix(d, cols, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        if n > 0.0 {
            let phase = rjj / n;
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
    q
}

/// A `d x d` unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: DMatrix<C64>,
}

impl UnitaryMatrix {
    /// Wraps `m` after checking `U^dag U = 1` entrywise to 1e-10.
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "unitary must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let u = UnitaryMatrix { m };
        let err = u.unitarity_error();
        if err > STRUCTURAL_TOL {
            return Err(Error::Numerical(format!("matrix is not unitary (error {err:e})")));
        }
        Ok(u)
    }

    pub fn identity(d: usize) -> Self {
        UnitaryMatrix { m: DMatrix::identity(d, d) }
    }

    /// Diagonal clock matrix `diag(exp(2 pi i k / d))`. Traceless for `d >= 2`.
    pub fn clock(d: usize) -> Self {
        let mut m = DMatrix::zeros(d, d);
        for k in 0..d {
            m[(k, k)] = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64);
        }
        UnitaryMatrix { m }
    }

    /// Exchanges two tensor factors of dimensions `d1` and `d2`:
    /// `|a b> -> |b a>` with input index `a*d2 + b`.
    pub fn swap(d1: usize, d2: usize) -> Self {
        let n = d1 * d2;
        let mut m = DMatrix::zeros(n, n);
        for a in 0..d1 {
            for b in 0..d2 {
                m[(b * d1 + a, a * d2 + b)] = C64::new(1.0, 0.0);
            }
        }
        UnitaryMatrix { m }
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &UnitaryMatrix) -> Self {
        UnitaryMatrix { m: self.m.kronecker(&other.m) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix { m: self.m.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// `max |(U^dag U - 1)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        max_abs(&(self.m.adjoint() * &self.m - DMatrix::<C64>::identity(d, d)))
    }
}

/// Haar-random element of U(d).
pub fn sample_haar_unitary(d: usize, rng: &RngStream) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(Error::InvalidDimension("unitary dimension must be >= 1".into()));
    }
    sample_haar_unitary_with(d, &mut rng.rng())
}

/// Haar unitary drawn from an existing generator (for code that samples many
/// gates from one stream).
pub fn sample_haar_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(Error::InvalidDimension("unitary dimension must be >= 1".into()));
    }
    Ok(UnitaryMatrix { m: haar_columns(d, d, rng) })
}

/// First `cols` columns of a Haar unitary: a Haar-random isometry `C^cols -> C^d`.
pub fn sample_haar_isometry<R: Rng + ?Sized>(d: usize, cols: usize, rng: &mut R) -> Result<DMatrix<C64>> {
    if d == 0 {
        return Err(Error::InvalidDimension("dimension must be >= 1".into()));
    }
    if cols == 0 || cols > d {
        return Err(Error::InvalidRank { rank: cols, dim: d });
    }
    Ok(haar_columns(d, cols, rng))
}

/// Rank-`r` orthogonal projector `P = V V^dag` stored through its orthonormal
/// basis `V` (`d x r`).
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    basis: DMatrix<C64>,
}

impl Projector {
    /// Projector onto the span of the orthonormal columns of `basis`.
    pub fn from_basis(basis: DMatrix<C64>) -> Result<Self> {
        let r = basis.ncols();
        let d = basis.nrows();
        if r == 0 || r > d {
            return Err(Error::InvalidRank { rank: r, dim: d });
        }
        let gram_err = max_abs(&(basis.adjoint() * &basis - DMatrix::<C64>::identity(r, r)));
        if gram_err > STRUCTURAL_TOL {
            return Err(Error::Numerical(format!("basis is not orthonormal (error {gram_err:e})")));
        }
        Ok(Projector { basis })
    }

    /// The projector onto the first `r` coordinate axes.
    pub fn coordinate(d: usize, r: usize) -> Result<Self> {
        if r == 0 || r > d {
            return Err(Error::InvalidRank { rank: r, dim: d });
        }
        Ok(Projector { basis: DMatrix::identity(d, r) })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    /// Dense `d x d` matrix.
    pub fn matrix(&self) -> DMatrix<C64> {
        &self.basis * self.basis.adjoint()
    }

    /// `Tr(P1 P2) = ||V1^dag V2||_F^2`.
    pub fn overlap(&self, other: &Projector) -> f64 {
        (self.basis.adjoint() * &other.basis).norm_squared()
    }

    /// Worst violation among `P^2 = P`, `P^dag = P` (entrywise) and
    /// `|Tr P - r|`.
    pub fn projector_error(&self) -> f64 {
        let p = self.matrix();
        let idem = max_abs(&(&p * &p - &p));
        let herm = max_abs(&(p.adjoint() - &p));
        let tr = (p.trace().re - self.rank() as f64).abs();
        idem.max(herm).max(tr)
    }
}

/// `P = U diag(1^r, 0^{d-r}) U^dag` with `U` Haar.
pub fn sample_projector(d: usize, r: usize, rng: &RngStream) -> Result<Projector> {
    if d == 0 {
        return Err(Error::InvalidDimension("dimension must be >= 1".into()));
    }
    if r == 0 || r > d {
        return Err(Error::InvalidRank { rank: r, dim: d });
    }
    let mut g = rng.rng();
    Ok(Projector { basis: sample_haar_isometry(d, r, &mut g)? })
}
