//! Ground space of the ring and its nearest-neighbour two-site state.

use qcorr_core::CorrelationVector;
use serde::Serialize;

use crate::chain::{build_sector_hamiltonian, ChainSpec, SectorBasis};
use crate::error::{Result, XxzError};
use crate::solver::{sector_ground, SolverOptions};

/// Sector levels this close to the global minimum join the ground space.
pub const GROUND_TOL: f64 = 1e-10;
/// Tolerance of the structural checks on the two-site state.
pub const STRUCTURE_TOL: f64 = 1e-9;

/// Nearest-neighbour reduced state in the basis `↑↑, ↑↓, ↓↑, ↓↓`:
/// populations `a, b1, b2, d` and the real coherence `z` between `↑↓`
/// and `↓↑`. Magnetization conservation forces every other entry to zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TwoSiteState {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub d: f64,
    pub z: f64,
}

impl TwoSiteState {
    fn add_scaled(&mut self, other: &TwoSiteState, w: f64) {
        self.a += w * other.a;
        self.b1 += w * other.b1;
        self.b2 += w * other.b2;
        self.d += w * other.d;
        self.z += w * other.z;
    }

    /// The state with every spin flipped.
    fn flipped(&self) -> TwoSiteState {
        TwoSiteState {
            a: self.d,
            b1: self.b2,
            b2: self.b1,
            d: self.a,
            z: self.z,
        }
    }

    fn max_abs_diff(&self, o: &TwoSiteState) -> f64 {
        [
            self.a - o.a,
            self.b1 - o.b1,
            self.b2 - o.b2,
            self.d - o.d,
            self.z - o.z,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn gxx(&self) -> f64 {
        2.0 * self.z
    }

    pub fn gyy(&self) -> f64 {
        2.0 * self.z
    }

    pub fn gzz(&self) -> f64 {
        self.a - self.b1 - self.b2 + self.d
    }

    /// `⟨σᶻ⟩` on the first site of the bond.
    pub fn gz(&self) -> f64 {
        self.a + self.b1 - self.b2 - self.d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundStateObservables {
    pub sites: usize,
    pub delta: f64,
    pub energy: f64,
    pub energy_density: f64,
    pub gxx: f64,
    pub gyy: f64,
    pub gzz: f64,
    pub gz: f64,
    pub degeneracy: usize,
    /// `2 n_up - L` of each ground vector, ascending.
    pub sector_magnetizations: Vec<i32>,
    pub two_site: TwoSiteState,
}

/// Two-site state of bond `(site, site + 1)` for a real vector of a sector.
fn bond_state(basis: &SectorBasis, psi: &[f64], site: usize) -> TwoSiteState {
    let l = basis.sites();
    let next = (site + 1) % l;
    let mut t = TwoSiteState::default();
    for (k, &s) in basis.states().iter().enumerate() {
        let p = psi[k] * psi[k];
        let up_here = (s >> site) & 1 == 1;
        let up_next = (s >> next) & 1 == 1;
        match (up_here, up_next) {
            (true, true) => t.a += p,
            (true, false) => {
                t.b1 += p;
                let partner = s ^ (1 << site) ^ (1 << next);
                let j = basis.index_of(partner).expect("partner in sector");
                t.z += psi[k] * psi[j];
            }
            (false, true) => t.b2 += p,
            (false, false) => t.d += p,
        }
    }
    t
}

struct GroundVector {
    energy: f64,
    n_up: usize,
    bonds: Vec<TwoSiteState>,
}

/// Scans every magnetization sector, collects the ground space and
/// extracts its bond-averaged two-site state.
///
/// Only sectors with `n_up ≥ L/2` are diagonalized; the others follow by
/// flipping every spin.
pub fn ground_space(spec: &ChainSpec, options: &SolverOptions) -> Result<GroundStateObservables> {
    let l = spec.sites();
    let mut candidates: Vec<GroundVector> = Vec::new();
    for n_up in l / 2..=l {
        let h = build_sector_hamiltonian(spec, n_up)?;
        let g = sector_ground(&h, options)?;
        for (energy, psi) in &g.levels {
            let bonds: Vec<TwoSiteState> = (0..l).map(|i| bond_state(h.basis(), psi, i)).collect();
            if 2 * n_up != l {
                candidates.push(GroundVector {
                    energy: *energy,
                    n_up: l - n_up,
                    bonds: bonds.iter().map(TwoSiteState::flipped).collect(),
                });
            }
            candidates.push(GroundVector {
                energy: *energy,
                n_up,
                bonds,
            });
        }
    }

    let e0 = candidates
        .iter()
        .map(|c| c.energy)
        .fold(f64::INFINITY, f64::min);
    let ground: Vec<&GroundVector> = candidates
        .iter()
        .filter(|c| c.energy <= e0 + GROUND_TOL)
        .collect();
    let weight = 1.0 / ground.len() as f64;

    let mut per_bond = vec![TwoSiteState::default(); l];
    for g in &ground {
        for (acc, b) in per_bond.iter_mut().zip(&g.bonds) {
            acc.add_scaled(b, weight);
        }
    }
    let mut avg = TwoSiteState::default();
    for b in &per_bond {
        avg.add_scaled(b, 1.0 / l as f64);
    }
    for (i, b) in per_bond.iter().enumerate() {
        let dev = b.max_abs_diff(&avg);
        if dev > STRUCTURE_TOL {
            return Err(XxzError::InvariantViolated(format!(
                "bond {i} deviates from the bond average by {dev:e}"
            )));
        }
    }
    check_x_form(&avg)?;

    let mut sector_magnetizations: Vec<i32> = ground
        .iter()
        .map(|g| 2 * g.n_up as i32 - l as i32)
        .collect();
    sector_magnetizations.sort_unstable();

    let obs = GroundStateObservables {
        sites: l,
        delta: spec.delta(),
        energy: e0,
        energy_density: e0 / l as f64,
        gxx: avg.gxx(),
        gyy: avg.gyy(),
        gzz: avg.gzz(),
        gz: avg.gz(),
        degeneracy: ground.len(),
        sector_magnetizations,
        two_site: avg,
    };
    check_observables(&obs)?;
    Ok(obs)
}

fn check_x_form(t: &TwoSiteState) -> Result<()> {
    let trace = t.a + t.b1 + t.b2 + t.d;
    let checks = [
        ("a = d", (t.a - t.d).abs()),
        ("b1 = b2", (t.b1 - t.b2).abs()),
        ("unit trace", (trace - 1.0).abs()),
    ];
    for (what, dev) in checks {
        if dev > STRUCTURE_TOL {
            return Err(XxzError::InvariantViolated(format!(
                "two-site state breaks {what} by {dev:e}"
            )));
        }
    }
    Ok(())
}

/// Zero magnetization, `G_xx = G_yy` and the energy identity
/// `ε = -½(G_xx + G_yy + Δ G_zz)`.
pub fn check_observables(obs: &GroundStateObservables) -> Result<()> {
    if obs.gz.abs() >= 1e-10 {
        return Err(XxzError::InvariantViolated(format!(
            "G_z = {:e} ≠ 0",
            obs.gz
        )));
    }
    if (obs.gxx - obs.gyy).abs() >= 1e-10 {
        return Err(XxzError::InvariantViolated(format!(
            "G_xx = {} differs from G_yy = {}",
            obs.gxx, obs.gyy
        )));
    }
    let identity = -0.5 * (obs.gxx + obs.gyy + obs.delta * obs.gzz);
    if (obs.energy_density - identity).abs() > STRUCTURE_TOL {
        return Err(XxzError::InvariantViolated(format!(
            "energy density {} but correlators give {}",
            obs.energy_density, identity
        )));
    }
    Ok(())
}

/// Bell coordinates of the two-site state, `c₁ = c₂ = ½(G_xx + G_yy)` and
/// `c₃ = G_zz`.
pub fn bell_coordinates(obs: &GroundStateObservables) -> Result<CorrelationVector> {
    let c1 = 0.5 * (obs.gxx + obs.gyy);
    let c = CorrelationVector::new(c1, c1, obs.gzz);
    c.require_physical()?;
    Ok(c)
}

/// Lowest energy per site, without the observables.
pub fn ground_energy_density(spec: &ChainSpec, options: &SolverOptions) -> Result<f64> {
    let l = spec.sites();
    let mut e0 = f64::INFINITY;
    for n_up in l / 2..=l {
        let h = build_sector_hamiltonian(spec, n_up)?;
        e0 = e0.min(sector_ground(&h, options)?.energy);
    }
    Ok(e0 / l as f64)
}

/// `(|c₁ - (Δ ε' - ε)|, |c₃ + 2ε'|)` with `ε'` from a central difference
/// of step `h`, together with the smallest residuals double precision can
/// resolve at that step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HellmannFeynman {
    pub h: f64,
    pub derivative: f64,
    pub residual_c1: f64,
    pub residual_c3: f64,
    pub floor_c1: f64,
    pub floor_c3: f64,
}

/// Error assumed on each computed energy density, in units of its ulp.
const ENERGY_ULPS: f64 = 100.0;

impl HellmannFeynman {
    /// True when halving the step (`self` at `h`, `finer` at `h/2`) cuts
    /// each residual at least threefold, or leaves it below the roundoff
    /// floor where the truncation error can no longer be seen.
    pub fn converges_with(&self, finer: &HellmannFeynman) -> bool {
        let improves = |coarse: f64, fine: f64, floor: f64| fine * 3.0 <= coarse || fine <= floor;
        improves(self.residual_c1, finer.residual_c1, finer.floor_c1)
            && improves(self.residual_c3, finer.residual_c3, finer.floor_c3)
    }
}

pub const LEVEL_CROSSING: f64 = 1.0;

pub fn hellmann_feynman_check(
    spec: &ChainSpec,
    h: f64,
    options: &SolverOptions,
) -> Result<HellmannFeynman> {
    if !(1e-5..=1e-3).contains(&h) {
        return Err(XxzError::InvalidSpec(format!(
            "step h = {h} outside [1e-5, 1e-3]"
        )));
    }
    let delta = spec.delta();
    if (delta - LEVEL_CROSSING).abs() < 2.0 * h {
        return Err(XxzError::NearCrossing {
            delta,
            window: 2.0 * h,
        });
    }
    let obs = ground_space(spec, options)?;
    let c = bell_coordinates(&obs)?;
    let up = ground_energy_density(&spec.with_delta(delta + h)?, options)?;
    let down = ground_energy_density(&spec.with_delta(delta - h)?, options)?;
    let derivative = (up - down) / (2.0 * h);
    let energy_error = ENERGY_ULPS * f64::EPSILON * obs.energy_density.abs().max(1.0);
    let derivative_error = energy_error / h;
    Ok(HellmannFeynman {
        h,
        derivative,
        residual_c1: (c.c1 - (delta * derivative - obs.energy_density)).abs(),
        residual_c3: (c.c3 + 2.0 * derivative).abs(),
        floor_c1: delta.abs() * derivative_error + energy_error,
        floor_c3: 2.0 * derivative_error,
    })
}
