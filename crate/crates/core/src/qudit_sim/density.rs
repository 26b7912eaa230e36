use std::cell::OnceCell;

use faer::complex_native::c64;
use faer::{Mat, Side};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::StateVector;
use crate::{Error, Result, C64};

/// Hermiticity tolerance (entrywise).
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Trace tolerance.
pub const TRACE_TOL: f64 = 1e-8;
/// Eigenvalues in `[-EIG_CLIP, 0)` are treated as roundoff and clipped to zero.
pub const EIG_CLIP: f64 = 1e-10;

/// Which entropy a mutual information or region entropy uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyKind {
    #[default]
    VonNeumann,
    Renyi2,
}

/// A validated density matrix on a register of qudits.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    dims: Vec<usize>,
    m: DMatrix<C64>,
    eig: OnceCell<Vec<f64>>,
}

impl PartialEq for DensityOperator {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.m == other.m
    }
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity (eigenvalues clipped
    /// within [`EIG_CLIP`]).
    pub fn from_matrix(dims: Vec<usize>, m: DMatrix<C64>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.nrows() });
        }
        let herm = m.iter().zip(m.adjoint().iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return Err(Error::Numerical(format!("matrix is not Hermitian (error {herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Numerical(format!("trace is {tr}, expected 1")));
        }
        let rho = DensityOperator { dims, m, eig: OnceCell::new() };
        rho.eigenvalues()?;
        Ok(rho)
    }

    /// Skips the spectral check for matrices that are PSD by construction
    /// (Gram matrices); the spectrum is still validated when first needed.
    fn from_gram(dims: Vec<usize>, m: DMatrix<C64>) -> Result<Self> {
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL {
            return Err(Error::Numerical(format!("trace is {tr}, expected 1")));
        }
        Ok(DensityOperator { dims, m, eig: OnceCell::new() })
    }

    /// `|psi><psi|` for the whole register.
    pub fn pure(state: &StateVector) -> Result<Self> {
        let v = DMatrix::from_column_slice(state.amplitudes().len(), 1, state.amplitudes());
        Self::from_gram(state.dims().to_vec(), &v * v.adjoint())
    }

    /// `1/n` on a register with the given site dimensions.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        let m = DMatrix::identity(n, n) / C64::new(n as f64, 0.0);
        let eig = OnceCell::from(vec![1.0 / n as f64; n]);
        DensityOperator { dims, m, eig }
    }

    /// Diagonal state with the given probabilities on a single site.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let n = probs.len();
        let m = DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(probs[i], 0.0) } else { C64::new(0.0, 0.0) });
        Self::from_matrix(vec![n], m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// Eigenvalues in ascending order, negative roundoff clipped to zero.
    pub fn eigenvalues(&self) -> Result<&[f64]> {
        if let Some(e) = self.eig.get() {
            return Ok(e);
        }
        let e = clipped_spectrum(&self.m)?;
        Ok(self.eig.get_or_init(|| e))
    }

    pub fn purity(&self) -> f64 {
        self.m.norm_squared()
    }

    pub fn renyi2(&self) -> f64 {
        -self.purity().ln()
    }

    pub fn von_neumann(&self) -> f64 {
        // Validated on construction, so the spectrum is available.
        let e = self.eigenvalues().expect("validated density operator");
        e.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()).sum()
    }

    pub fn entropy(&self, kind: EntropyKind) -> f64 {
        match kind {
            EntropyKind::VonNeumann => self.von_neumann(),
            EntropyKind::Renyi2 => self.renyi2(),
        }
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().expect("validated density operator").iter().filter(|&&l| l > tol).count()
    }

    /// Traces out every site not listed in `keep` (positions within this
    /// register, kept in the given order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let k = self.dims.len();
        check_sites(keep, k)?;
        let rest: Vec<usize> = (0..k).filter(|s| !keep.contains(s)).collect();
        let strides = strides(&self.dims);
        let off_a = offsets(&self.dims, &strides, keep);
        let off_b = offsets(&self.dims, &strides, &rest);
        let n = off_a.len();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = off_b.iter().map(|b| self.m[(off_a[i] + b, off_a[j] + b)]).sum();
            }
        }
        let dims = keep.iter().map(|&s| self.dims[s]).collect();
        Self::from_matrix(dims, hermitize(out))
    }

    /// `(1/2) ||rho - sigma||_1`.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        self.check_same_dim(other)?;
        let e = hermitian_eigenvalues(&(&self.m - &other.m));
        Ok(0.5 * e.iter().map(|l| l.abs()).sum::<f64>())
    }

    /// `Tr sqrt(sqrt(rho) sigma sqrt(rho))`, evaluated as the trace norm of
    /// `sqrt(rho) sqrt(sigma)`. Identical operators give exactly 1.
    pub fn fidelity(&self, other: &DensityOperator) -> Result<f64> {
        self.check_same_dim(other)?;
        if self.m == other.m {
            return Ok(1.0);
        }
        let prod = self.sqrt_matrix() * other.sqrt_matrix();
        Ok(prod.singular_values().iter().sum())
    }

    /// `Tr(rho sigma)`.
    pub fn overlap(&self, other: &DensityOperator) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self.m.iter().zip(other.m.iter()).map(|(a, b)| (a.conj() * b).re).sum())
    }

    fn sqrt_matrix(&self) -> DMatrix<C64> {
        let eig = self.m.clone().symmetric_eigen();
        let v = &eig.eigenvectors;
        // Eigenvalues at roundoff scale are zeroed: their square roots would
        // otherwise add O(1e-8) spurious weight.
        let cut = self.dim() as f64 * f64::EPSILON * eig.eigenvalues.amax();
        let roots = eig.eigenvalues.map(|l| C64::new(if l > cut { l.sqrt() } else { 0.0 }, 0.0));
        let mut scaled = v.clone();
        for (j, r) in roots.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= r);
        }
        scaled * v.adjoint()
    }

    fn check_same_dim(&self, other: &DensityOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }
}

fn to_faer(m: &DMatrix<C64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        c64::new(z.re, z.im)
    })
}

/// Eigenvalues of a Hermitian matrix, ascending.
fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut e = to_faer(m).selfadjoint_eigenvalues(Side::Lower);
    e.sort_by(f64::total_cmp);
    e
}

fn clipped_spectrum(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let mut e = hermitian_eigenvalues(m);
    if let Some(&min) = e.first() {
        if min < -EIG_CLIP {
            return Err(Error::NotPositive(min));
        }
    }
    e.iter_mut().for_each(|l| *l = l.max(0.0));
    Ok(e)
}

fn hermitize(m: DMatrix<C64>) -> DMatrix<C64> {
    let adj = m.adjoint();
    (m + adj) * C64::new(0.5, 0.0)
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Flat-index offsets of every basis state of `sites` (first site most
/// significant), all other digits zero.
fn offsets(dims: &[usize], strides: &[usize], sites: &[usize]) -> Vec<usize> {
    let mut off = vec![0usize];
    for &s in sites {
        let mut next = Vec::with_capacity(off.len() * dims[s]);
        for &o in &off {
            for v in 0..dims[s] {
                next.push(o + v * strides[s]);
            }
        }
        off = next;
    }
    off
}

fn check_sites(sites: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &s in sites {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::arg(format!("site list {sites:?} is invalid for {n} sites")));
        }
    }
    Ok(())
}


/// Reduced density operator of `state` on `sites` (kept in the given order).
pub fn reduce(state: &StateVector, sites: &[usize]) -> Result<DensityOperator> {
    let dims = state.dims();
    check_sites(sites, dims.len())?;
    let rest: Vec<usize> = (0..dims.len()).filter(|s| !sites.contains(s)).collect();
    let strides = state.strides();
    let off_a = offsets(dims, &strides, sites);
    let off_b = offsets(dims, &strides, &rest);
    let amps = state.amplitudes();
    let (na, nb) = (off_a.len(), off_b.len());
    let m = Mat::from_fn(na, nb, |a, b| {
        let z = amps[off_a[a] + off_b[b]];
        c64::new(z.re, z.im)
    });
    let g = &m * m.adjoint();
    let rho = DMatrix::from_fn(na, na, |i, j| {
        let (u, v) = (g.read(i, j), g.read(j, i));
        C64::new(0.5 * (u.re + v.re), 0.5 * (u.im - v.im))
    });
    DensityOperator::from_gram(sites.iter().map(|&s| dims[s]).collect(), rho)
}

/// The nonzero spectrum of a region and its complement coincide for a pure
/// state, so reduce whichever side is smaller.
fn reduce_small_side(state: &StateVector, sites: &[usize]) -> Result<DensityOperator> {
    let dims = state.dims();
    check_sites(sites, dims.len())?;
    let rest: Vec<usize> = (0..dims.len()).filter(|s| !sites.contains(s)).collect();
    let da: usize = sites.iter().map(|&s| dims[s]).product();
    let db: usize = rest.iter().map(|&s| dims[s]).product();
    if da <= db {
        reduce(state, sites)
    } else {
        reduce(state, &rest)
    }
}

/// Purity of the reduced state on `sites`.
pub fn region_purity(state: &StateVector, sites: &[usize]) -> Result<f64> {
    Ok(reduce_small_side(state, sites)?.purity())
}

/// Entropy of the reduced state on `sites` (natural log).
pub fn region_entropy(state: &StateVector, sites: &[usize], kind: EntropyKind) -> Result<f64> {
    if sites.is_empty() || sites.len() == state.dims().len() {
        check_sites(sites, state.dims().len())?;
        return Ok(0.0);
    }
    Ok(reduce_small_side(state, sites)?.entropy(kind))
}

/// `S(A) + S(B) - S(AB)` for disjoint regions of a pure state.
pub fn mutual_information(state: &StateVector, a: &[usize], b: &[usize], kind: EntropyKind) -> Result<f64> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::arg("mutual information needs disjoint regions"));
    }
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    Ok(region_entropy(state, a, kind)? + region_entropy(state, b, kind)? - region_entropy(state, &ab, kind)?)
}

/// Mutual information between two disjoint register positions of `rho`.
pub fn mutual_information_rho(rho: &DensityOperator, a: &[usize], b: &[usize], kind: EntropyKind) -> Result<f64> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::arg("mutual information needs disjoint regions"));
    }
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    let s = |sites: &[usize]| -> Result<f64> {
        if sites.is_empty() {
            return Ok(0.0);
        }
        Ok(rho.partial_trace(sites)?.entropy(kind))
    };
    Ok(s(a)? + s(b)? - s(&ab)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit_sim::{run_brickwork, Boundary, CircuitGeometry};
    use crate::rng_linalg::RngStream;
    use std::f64::consts::LN_2;

    fn bell() -> StateVector {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        StateVector::from_amplitudes(vec![2, 2], vec![C64::new(h, 0.0), z, z, C64::new(h, 0.0)]).unwrap()
    }

    #[test]
    fn product_state_reductions_are_pure() {
        let g = CircuitGeometry::uniform(3, 4, Boundary::Ring).unwrap();
        let s = StateVector::zero(&g).unwrap();
        for sites in [vec![0], vec![1, 2], vec![3, 0, 1]] {
            assert!((reduce(&s, &sites).unwrap().purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_pair() {
        let s = bell();
        let rho = reduce(&s, &[0]).unwrap();
        assert!((rho.matrix() - DensityOperator::maximally_mixed(vec![2]).matrix()).norm() < 1e-12);
        assert!((rho.von_neumann() - LN_2).abs() < 1e-12);
        let mi = mutual_information(&s, &[0], &[1], EntropyKind::VonNeumann).unwrap();
        assert!((mi - 2.0 * LN_2).abs() < 1e-12);
        assert!(mutual_information(&s, &[0], &[0, 1], EntropyKind::Renyi2).is_err());
    }

    #[test]
    fn full_system_is_the_projector() {
        let g = CircuitGeometry::uniform(2, 4, Boundary::Ring).unwrap();
        let s = run_brickwork(&g, 2, &RngStream::new(5)).unwrap();
        let rho = reduce(&s, &[0, 1, 2, 3]).unwrap();
        let pure = DensityOperator::pure(&s).unwrap();
        assert!((rho.matrix() - pure.matrix()).norm() < 1e-12);
        assert_eq!(rho.rank(1e-8), 1);
    }

    #[test]
    fn entropies_of_simple_states() {
        let mm = DensityOperator::maximally_mixed(vec![5]);
        assert!((mm.purity() - 0.2).abs() < 1e-15);
        assert!((mm.renyi2() - 5f64.ln()).abs() < 1e-12);
        assert!((mm.von_neumann() - 5f64.ln()).abs() < 1e-12);
        let d = DensityOperator::diagonal(&[0.75, 0.25]).unwrap();
        assert!((d.purity() - 0.625).abs() < 1e-15);
        let s = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        assert!((d.von_neumann() - s).abs() < 1e-12);
    }

    #[test]
    fn distance_and_fidelity_examples() {
        let a = DensityOperator::diagonal(&[1.0, 0.0]).unwrap();
        let b = DensityOperator::diagonal(&[0.0, 1.0]).unwrap();
        let m = DensityOperator::maximally_mixed(vec![2]);
        assert!(a.trace_distance(&a).unwrap().abs() < 1e-12);
        assert!((a.fidelity(&a).unwrap() - 1.0).abs() < 1e-12);
        assert!((a.trace_distance(&b).unwrap() - 1.0).abs() < 1e-12);
        assert!(a.fidelity(&b).unwrap().abs() < 1e-12);
        assert!((a.trace_distance(&m).unwrap() - 0.5).abs() < 1e-12);
        assert!((a.fidelity(&m).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let bad = DMatrix::from_row_slice(2, 2, &[C64::new(1.1, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-0.1, 0.0)]);
        assert!(matches!(DensityOperator::from_matrix(vec![2], bad), Err(Error::NotPositive(_))));
        let nonh = DMatrix::from_row_slice(2, 2, &[C64::new(0.5, 0.0), C64::new(0.1, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)]);
        assert!(DensityOperator::from_matrix(vec![2], nonh).is_err());
        let tiny = DMatrix::from_row_slice(2, 2, &[C64::new(1.0 + 5e-11, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-5e-11, 0.0)]);
        let rho = DensityOperator::from_matrix(vec![2], tiny).unwrap();
        assert_eq!(rho.eigenvalues().unwrap()[0], 0.0);
    }

    #[test]
    fn schmidt_symmetry_and_partial_trace() {
        let g = CircuitGeometry::alternating(2, 3, 6, Boundary::Ring).unwrap();
        let s = run_brickwork(&g, 3, &RngStream::new(8)).unwrap();
        let a = [1, 2];
        let b = [3, 4, 5, 0];
        let pa = reduce(&s, &a).unwrap().purity();
        let pb = reduce(&s, &b).unwrap().purity();
        assert!((pa - pb).abs() < 1e-8);
        assert!((region_purity(&s, &b).unwrap() - pb).abs() < 1e-12);
        // Tracing in two steps agrees with one reduction.
        let big = reduce(&s, &[1, 2, 3]).unwrap();
        let small = big.partial_trace(&[0, 1]).unwrap();
        assert!((small.matrix() - reduce(&s, &a).unwrap().matrix()).norm() < 1e-10);
        // Order of the kept sites permutes the tensor factors only.
        let swapped = reduce(&s, &[2, 1]).unwrap();
        assert!((swapped.purity() - pa).abs() < 1e-12);
    }
}
