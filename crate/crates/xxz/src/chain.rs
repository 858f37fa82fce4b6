//! The periodic XXZ ring `H = -½ Σᵢ (σˣᵢσˣᵢ₊₁ + σʸᵢσʸᵢ₊₁ + Δ σᶻᵢσᶻᵢ₊₁)` and its
//! fixed-magnetization blocks.

use crate::error::{Result, XxzError};

/// Largest supported ring; sector bases are stored as `u32` bit masks.
pub const MAX_SITES: usize = 16;
/// The coupling sets the energy unit.
pub const J: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    l: usize,
    delta: f64,
}

impl ChainSpec {
    pub fn new(l: usize, delta: f64) -> Result<Self> {
        if l < 4 || l % 2 != 0 || l > MAX_SITES {
            return Err(XxzError::InvalidSpec(format!(
                "L must be even with 4 ≤ L ≤ {MAX_SITES}, got {l}"
            )));
        }
        if !delta.is_finite() {
            return Err(XxzError::InvalidSpec(format!(
                "Δ must be finite, got {delta}"
            )));
        }
        Ok(Self { l, delta })
    }

    pub fn sites(&self) -> usize {
        self.l
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.l, delta)
    }
}

/// Basis states with exactly `n_up` up spins, as increasing bit masks
/// (bit `i` set means site `i` is up).
#[derive(Debug, Clone)]
pub struct SectorBasis {
    l: usize,
    n_up: usize,
    states: Vec<u32>,
}

impl SectorBasis {
    pub fn new(l: usize, n_up: usize) -> Result<Self> {
        if n_up > l || l > MAX_SITES {
            return Err(XxzError::InvalidSector { l, n_up });
        }
        let states = (0u32..1 << l)
            .filter(|s| s.count_ones() as usize == n_up)
            .collect();
        Ok(Self { l, n_up, states })
    }

    pub fn sites(&self) -> usize {
        self.l
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn index_of(&self, state: u32) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

/// Sparse symmetric sector block: Ising diagonal plus unit flip-flop
/// hops, each stored once as `(i, j)` with `i < j` and amplitude `-J`.
#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    basis: SectorBasis,
    diagonal: Vec<f64>,
    hops: Vec<(u32, u32)>,
}

pub const HOP_AMPLITUDE: f64 = -J;

pub fn build_sector_hamiltonian(spec: &ChainSpec, n_up: usize) -> Result<SectorHamiltonian> {
    let basis = SectorBasis::new(spec.sites(), n_up)?;
    let l = spec.sites();
    let mut diagonal = Vec::with_capacity(basis.dim());
    let mut hops = Vec::new();
    for (i, &s) in basis.states().iter().enumerate() {
        let mut aligned = 0i32;
        for site in 0..l {
            let next = (site + 1) % l;
            let up_here = (s >> site) & 1;
            let up_next = (s >> next) & 1;
            if up_here == up_next {
                aligned += 1;
            } else {
                let flipped = s ^ (1 << site) ^ (1 << next);
                let j = basis.index_of(flipped).expect("flip-flop stays in sector");
                if i < j {
                    hops.push((i as u32, j as u32));
                }
            }
        }
        let ising = 2 * aligned - l as i32;
        diagonal.push(-0.5 * J * spec.delta() * ising as f64);
    }
    Ok(SectorHamiltonian {
        basis,
        diagonal,
        hops,
    })
}

impl SectorHamiltonian {
    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn hops(&self) -> &[(u32, u32)] {
        &self.hops
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, d), xi) in y.iter_mut().zip(&self.diagonal).zip(x) {
            *yi = d * xi;
        }
        for &(i, j) in &self.hops {
            let (i, j) = (i as usize, j as usize);
            y[i] += HOP_AMPLITUDE * x[j];
            y[j] += HOP_AMPLITUDE * x[i];
        }
    }

    pub fn to_dense(&self) -> faer::Mat<f64> {
        let n = self.dim();
        let mut m = faer::Mat::from_fn(n, n, |i, j| if i == j { self.diagonal[i] } else { 0.0 });
        for &(i, j) in &self.hops {
            m[(i as usize, j as usize)] += HOP_AMPLITUDE;
            m[(j as usize, i as usize)] += HOP_AMPLITUDE;
        }
        m
    }
}
