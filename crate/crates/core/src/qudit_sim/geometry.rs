use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default statevector memory cap: 2 GiB.
pub const DEFAULT_MEM_CAP: u64 = 2 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Ring,
    Open,
}

/// A chain of qudits with per-site dimensions.
///
/// Layer `t` (1-based) acts on bonds `(i, i+1)` with `i = t - 1 (mod 2)`: odd
/// layers on `(0,1), (2,3), ...`, even layers on `(1,2), (3,4), ...`. On a ring
/// the bond `(L-1, 0)` belongs to the even layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitGeometry {
    site_dims: Vec<usize>,
    boundary: Boundary,
    mem_cap: u64,
}

impl CircuitGeometry {
    pub fn new(site_dims: Vec<usize>, boundary: Boundary) -> Result<Self> {
        let l = site_dims.len();
        if l < 2 {
            return Err(Error::arg("a chain needs at least two sites"));
        }
        if site_dims.contains(&0) {
            return Err(Error::InvalidDimension("site dimensions must be >= 1".into()));
        }
        if boundary == Boundary::Ring && !l.is_multiple_of(2) {
            return Err(Error::arg(format!("brickwork on a ring needs an even number of sites, got {l}")));
        }
        Ok(CircuitGeometry { site_dims, boundary, mem_cap: DEFAULT_MEM_CAP })
    }

    /// `L` sites of dimension `q`.
    pub fn uniform(q: usize, sites: usize, boundary: Boundary) -> Result<Self> {
        Self::new(vec![q; sites], boundary)
    }

    /// Even sites of dimension `q`, odd sites of dimension `big_q`.
    pub fn alternating(q: usize, big_q: usize, sites: usize, boundary: Boundary) -> Result<Self> {
        Self::new((0..sites).map(|i| if i % 2 == 0 { q } else { big_q }).collect(), boundary)
    }

    pub fn with_mem_cap(mut self, bytes: u64) -> Self {
        self.mem_cap = bytes;
        self
    }

    pub fn mem_cap(&self) -> u64 {
        self.mem_cap
    }

    pub fn sites(&self) -> usize {
        self.site_dims.len()
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Total Hilbert-space dimension, or `None` on overflow.
    pub fn total_dim(&self) -> Option<usize> {
        self.site_dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d))
    }

    /// Bytes for one statevector.
    pub fn state_bytes(&self) -> Option<u64> {
        self.total_dim().and_then(|n| (n as u64).checked_mul(16))
    }

    pub fn check_memory(&self) -> Result<()> {
        match self.state_bytes() {
            Some(b) if b <= self.mem_cap => Ok(()),
            other => Err(Error::ResourceLimit { needed: other.unwrap_or(u64::MAX), cap: self.mem_cap }),
        }
    }

    /// Bonds `(left, right)` acted on by layer `t >= 1`.
    pub fn layer_bonds(&self, t: usize) -> Vec<(usize, usize)> {
        let l = self.sites();
        let parity = (t + 1) % 2;
        (parity..l)
            .step_by(2)
            .filter_map(|i| {
                if i + 1 < l {
                    Some((i, i + 1))
                } else if self.boundary == Boundary::Ring {
                    Some((i, 0))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Site to the right of bond `bond` (wrapping on a ring).
    pub fn bond_sites(&self, bond: usize) -> Result<(usize, usize)> {
        let l = self.sites();
        match self.boundary {
            Boundary::Ring if bond < l => Ok((bond, (bond + 1) % l)),
            Boundary::Open if bond + 1 < l => Ok((bond, bond + 1)),
            _ => Err(Error::arg(format!("bond {bond} does not exist on this chain"))),
        }
    }
}

/// A contiguous interval `[start, start + len)` (wrapping on a ring).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSpec {
    pub start: usize,
    pub len: usize,
}

impl IntervalSpec {
    pub fn new(start: usize, len: usize) -> Self {
        IntervalSpec { start, len }
    }

    /// Interval of length `len` whose two end bonds carry gates of layer `t`:
    /// starts at site `t mod 2` on a ring, and at the first such site `>= 1`
    /// on an open chain.
    pub fn aligned(geometry: &CircuitGeometry, t: usize, len: usize) -> Result<Self> {
        let start = match geometry.boundary() {
            Boundary::Ring => t % 2,
            Boundary::Open => {
                if t % 2 == 1 {
                    1
                } else {
                    2
                }
            }
        };
        let iv = IntervalSpec { start, len };
        iv.validate(geometry, t)?;
        Ok(iv)
    }

    pub fn sites(&self, geometry: &CircuitGeometry) -> Vec<usize> {
        let l = geometry.sites();
        (0..self.len).map(|i| (self.start + i) % l).collect()
    }

    /// Interval sits on the chain, has even length, and (for `t >= 1`) both of
    /// its boundary bonds are gated in layer `t`.
    pub fn validate(&self, geometry: &CircuitGeometry, t: usize) -> Result<()> {
        let l = geometry.sites();
        if !self.len.is_multiple_of(2) || self.len == 0 {
            return Err(Error::arg(format!("interval length must be even and positive, got {}", self.len)));
        }
        if self.start >= l || self.len > l {
            return Err(Error::arg("interval does not fit on the chain"));
        }
        if geometry.boundary() == Boundary::Open && self.start + self.len > l {
            return Err(Error::arg("interval runs off the open chain"));
        }
        if t == 0 || self.len == l {
            return Ok(());
        }
        if self.start % 2 != t % 2 {
            return Err(Error::arg(format!(
                "interval start {} is not straddled by a gate at depth {t}; start must have the parity of the depth",
                self.start
            )));
        }
        if geometry.boundary() == Boundary::Open && (self.start == 0 || self.start + self.len >= l) {
            return Err(Error::arg("on an open chain the interval needs a site beyond each end"));
        }
        Ok(())
    }

    /// Sub-interval of the first `x` sites and the remaining `len - x`.
    pub fn split(&self, geometry: &CircuitGeometry, x: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        if x > self.len {
            return Err(Error::arg(format!("cut {x} outside interval of length {}", self.len)));
        }
        let s = self.sites(geometry);
        Ok((s[..x].to_vec(), s[x..].to_vec()))
    }
}
