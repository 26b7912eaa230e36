use super::CircuitGeometry;
use crate::rng_linalg::UnitaryMatrix;
use crate::{Error, Result, C64};

/// Dense amplitudes over `prod(dims)` basis states, site 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>` on the geometry, after checking its memory budget.
    pub fn zero(geometry: &CircuitGeometry) -> Result<Self> {
        geometry.check_memory()?;
        let n = geometry.total_dim().expect("checked by memory guard");
        let mut amps = vec![C64::new(0.0, 0.0); n];
        amps[0] = C64::new(1.0, 0.0);
        Ok(StateVector { dims: geometry.site_dims().to_vec(), amps })
    }

    /// Wraps raw amplitudes (not renormalised).
    pub fn from_amplitudes(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if n != amps.len() {
            return Err(Error::DimensionMismatch { expected: n, got: amps.len() });
        }
        Ok(StateVector { dims, amps })
    }

    /// Computational basis state `|levels>`.
    pub fn basis(dims: Vec<usize>, levels: &[usize]) -> Result<Self> {
        if levels.len() != dims.len() || levels.iter().zip(&dims).any(|(l, d)| l >= d) {
            return Err(Error::arg("basis levels do not match site dimensions"));
        }
        let n: usize = dims.iter().product();
        let idx = levels.iter().zip(&dims).fold(0, |acc, (l, d)| acc * d + l);
        let mut amps = vec![C64::new(0.0, 0.0); n];
        amps[idx] = C64::new(1.0, 0.0);
        Ok(StateVector { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Stride of site `k` in the flat index.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    /// Applies `gate` to sites `(a, b)`; the gate's local index is
    /// `i_a * d_b + i_b`, so `a` is the more significant factor regardless of
    /// where the sites sit in the chain.
    pub fn apply_gate(&mut self, a: usize, b: usize, gate: &UnitaryMatrix) -> Result<()> {
        let l = self.dims.len();
        if a >= l || b >= l || a == b {
            return Err(Error::arg(format!("invalid site pair ({a}, {b}) for {l} sites")));
        }
        let (da, db) = (self.dims[a], self.dims[b]);
        let dg = da * db;
        if gate.dim() != dg {
            return Err(Error::DimensionMismatch { expected: dg, got: gate.dim() });
        }
        let strides = self.strides();
        let (sa, sb) = (strides[a], strides[b]);
        // Offsets of the gate's local basis inside the flat index.
        let local: Vec<usize> = (0..dg).map(|k| (k / db) * sa + (k % db) * sb).collect();
        // Enumerate bases: all indices with digit 0 on both sites.
        let others: Vec<usize> = (0..l).filter(|&k| k != a && k != b).collect();
        let mut bases = vec![0usize];
        for &k in &others {
            let mut next = Vec::with_capacity(bases.len() * self.dims[k]);
            for &base in &bases {
                for v in 0..self.dims[k] {
                    next.push(base + v * strides[k]);
                }
            }
            bases = next;
        }
        let g = gate.matrix();
        let mut inbuf = vec![C64::new(0.0, 0.0); dg];
        for base in bases {
            for (slot, off) in inbuf.iter_mut().zip(&local) {
                *slot = self.amps[base + off];
            }
            for (row, off) in local.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (col, x) in inbuf.iter().enumerate() {
                    acc += g[(row, col)] * x;
                }
                self.amps[base + off] = acc;
            }
        }
        Ok(())
    }

    /// Applies `gate` on bond `bond` of `geometry` (sites `bond` and its right neighbour).
    pub fn apply_bond(&mut self, geometry: &CircuitGeometry, bond: usize, gate: &UnitaryMatrix) -> Result<()> {
        let (a, b) = geometry.bond_sites(bond)?;
        self.apply_gate(a, b, gate)
    }
}
