use super::{CircuitGeometry, StateVector};
use crate::rng_linalg::{sample_haar_unitary_with, RngStream, UnitaryMatrix};
use crate::Result;

/// One brick: a gate on sites `(a, b)` at layer `layer` (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct Brick {
    pub layer: usize,
    pub a: usize,
    pub b: usize,
    pub gate: UnitaryMatrix,
}

/// A sampled brickwork circuit: `T` layers of independent Haar gates.
///
/// The gates are drawn in layer order, left to right, from a single generator
/// seeded by the stream, so a `(geometry, T, stream)` triple fixes every gate.
#[derive(Debug, Clone)]
pub struct Circuit {
    geometry: CircuitGeometry,
    layers: Vec<Vec<Brick>>,
}

impl Circuit {
    pub fn sample(geometry: &CircuitGeometry, depth: usize, rng: &RngStream) -> Result<Self> {
        let mut g = rng.rng();
        let dims = geometry.site_dims();
        let mut layers = Vec::with_capacity(depth);
        for t in 1..=depth {
            let mut bricks = Vec::new();
            for (a, b) in geometry.layer_bonds(t) {
                let gate = sample_haar_unitary_with(dims[a] * dims[b], &mut g)?;
                bricks.push(Brick { layer: t, a, b, gate });
            }
            layers.push(bricks);
        }
        Ok(Circuit { geometry: geometry.clone(), layers })
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn geometry(&self) -> &CircuitGeometry {
        &self.geometry
    }

    pub fn layer(&self, t: usize) -> &[Brick] {
        &self.layers[t - 1]
    }

    /// Applies layers `from..=to` (1-based, inclusive) to `state`.
    pub fn apply_layers(&self, state: &mut StateVector, from: usize, to: usize) -> Result<()> {
        for t in from..=to.min(self.depth()) {
            for brick in &self.layers[t - 1] {
                state.apply_gate(brick.a, brick.b, &brick.gate)?;
            }
        }
        Ok(())
    }

    /// `|0...0>` evolved through every layer.
    pub fn run(&self) -> Result<StateVector> {
        let mut s = StateVector::zero(&self.geometry)?;
        self.apply_layers(&mut s, 1, self.depth())?;
        Ok(s)
    }
}

/// `|0...0>` evolved by `depth` layers of independent Haar gates.
pub fn run_brickwork(geometry: &CircuitGeometry, depth: usize, rng: &RngStream) -> Result<StateVector> {
    geometry.check_memory()?;
    Circuit::sample(geometry, depth, rng)?.run()
}
