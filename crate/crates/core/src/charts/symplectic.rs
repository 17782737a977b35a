//! Pointwise symplectic curvature fixtures `E(r) + sum R(S, j)`.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::curvature::{build_e_of_r, CurvatureTensor};
use crate::spaces::{BilinearStructure, ComplexStructure, FiberSampler};
use crate::twistor::{r_of_s, random_anti_invariant};
use crate::Result;

/// A symplectic curvature tensor at a point: a Ricci-type part `E(r)` plus
/// Weyl-type pieces `R(S, j)`.
#[derive(Debug, Clone)]
pub struct SymplecticPointFixture {
    pub base: BilinearStructure,
    /// Symmetric matrix of the Ricci-type part.
    pub r: DMatrix<f64>,
    /// Pairs `(S, j)` with `S` anti-invariant for `j`.
    pub weyl_seeds: Vec<(DMatrix<f64>, ComplexStructure)>,
}

impl SymplecticPointFixture {
    pub fn new(n: usize, r: DMatrix<f64>) -> Result<Self> {
        Ok(Self { base: BilinearStructure::symplectic(n)?, r, weyl_seeds: Vec::new() })
    }

    pub fn with_seed(mut self, s: DMatrix<f64>, j: ComplexStructure) -> Self {
        self.weyl_seeds.push((s, j));
        self
    }

    /// Adds `count` random Weyl pieces derived from `seed`, each scaled by
    /// `weight`.
    pub fn with_random_seeds(mut self, count: usize, weight: f64, seed: u64) -> Self {
        let sampler = FiberSampler::new(&self.base, seed);
        for i in 0..count {
            let j = sampler.sample(i);
            let s = random_anti_invariant(&j, seed.wrapping_add(0x5eed).wrapping_add(i as u64)) * weight;
            self.weyl_seeds.push((s, j));
        }
        self
    }
}

/// `E(r) + sum R(S, j)`. Fails if `r` is not symmetric, a seed lives over
/// another structure, or `S` is not anti-invariant for its `j`.
pub fn symplectic_fixture_curvature(fx: &SymplecticPointFixture) -> Result<CurvatureTensor> {
    let mut total = build_e_of_r(&fx.r, &fx.base)?;
    for (s, j) in &fx.weyl_seeds {
        crate::twistor::check_base(&fx.base, j)?;
        total = total.combine(1.0, &r_of_s(s, j)?, 1.0);
    }
    Ok(total)
}
