//! Seeded verification suites over random physical states.
//!
//! Per-state checks run in parallel but results are collected in sample
//! order before reduction, so a report depends only on `(seed, count)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropic::{c_e_closed, c_e_from_c_g, entropic_triple, mutual_information};
use crate::error::Result;
use crate::geometric::{geometric_triple, t_g_direct, GeometricTriple};
use crate::oracle::{
    brute_force_qg, brute_force_qg_spectral, counterexample_search, vertex_minimality, NonHierarchy,
};
use crate::sampling::PhysicalSampler;
use crate::state::{bell_density, order_magnitudes, CorrelationVector, OrderedMagnitudes};

pub const ORACLE_SIMPLEX_RESOLUTION: usize = 100;
pub const ORACLE_SPHERE_RESOLUTION: usize = 9;
pub const VERTEX_RESOLUTION: usize = 60;
pub const COUNTEREXAMPLE_BUDGET: usize = 10_000;

/// Deliberate corruption of a closed form, used to check that the suites
/// catch errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Replace the `max` in `T_G = ½[c₊ + max(c₊, c₀ + c₋)]` with `min`.
    TotalGeometricMin,
}

impl Fault {
    fn t_g(self, m: &OrderedMagnitudes) -> f64 {
        match self {
            Fault::None => 0.5 * (m.c_plus + m.c_plus.max(m.c_mid + m.c_minus)),
            Fault::TotalGeometricMin => 0.5 * (m.c_plus + m.c_plus.min(m.c_mid + m.c_minus)),
        }
    }
}

/// Outcome of one suite: how many states were checked, how many failed,
/// the first failing state and the largest raw violation seen.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub checked: u64,
    pub failed: u64,
    pub first_failure_state: Option<[f64; 3]>,
    pub max_violation: f64,
}

impl SuiteResult {
    fn empty() -> Self {
        Self {
            checked: 0,
            failed: 0,
            first_failure_state: None,
            max_violation: 0.0,
        }
    }

    /// Records a check whose raw `violation` (positive means the inequality
    /// without slack is broken) is tolerated up to `tol`.
    fn record(&mut self, c: &CorrelationVector, violation: f64, tol: f64) {
        self.checked += 1;
        if violation > self.max_violation || violation.is_nan() {
            self.max_violation = violation;
        }
        if !(violation <= tol) {
            self.failed += 1;
            if self.first_failure_state.is_none() {
                self.first_failure_state = Some(c.components());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Suite name to result, serialized in name order.
pub type AuditReport = BTreeMap<String, SuiteResult>;

pub fn all_passed(report: &AuditReport) -> bool {
    report.values().all(SuiteResult::passed)
}

#[derive(Debug, Clone, Copy)]
struct StateChecks {
    c: CorrelationVector,
    // (raw violation, tolerance) per entry of STATE_SUITES
    items: [(f64, f64); STATE_SUITES.len()],
}

const STATE_SUITES: [&str; 12] = [
    "additivity_entropic",
    "superadditivity_upper",
    "superadditivity_lower",
    "superadditivity_equality",
    "hierarchy_qg_ge_qe",
    "hierarchy_cg_ge_ce",
    "hierarchy_te_ge_ce_qe",
    "hierarchy_tg_ge_cg_qg",
    "hierarchy_cg_ge_qg",
    "tg_dual_path",
    "monotone_link",
    "te_mutual_information",
];

fn check_state(c: CorrelationVector, fault: Fault) -> Result<StateChecks> {
    let e = entropic_triple(&c)?;
    let mags = order_magnitudes(&c);
    let GeometricTriple { q_g, c_g, .. } = geometric_triple(&c)?;
    let t_g = fault.t_g(&mags);

    // Equality T_G = C_G + Q_G exactly when Q_G vanishes, strict excess
    // otherwise.
    let gap = c_g + q_g - t_g;
    let equality = if q_g < 1e-10 {
        gap.abs()
    } else if gap > 0.0 {
        0.0
    } else {
        -gap + f64::EPSILON
    };

    let items = [
        ((e.t_e - e.c_e - e.q_e).abs(), 1e-10),
        (t_g - c_g - q_g, 1e-10),
        (c_g + q_g - 2.0 * t_g, 1e-10),
        (equality, 1e-10),
        (e.q_e - q_g, 1e-8),
        (e.c_e - c_g, 1e-8),
        ((e.c_e - e.t_e).max(e.q_e - e.t_e), 1e-10),
        (c_g.max(q_g) - t_g, 1e-10),
        (q_g - c_g, 1e-10),
        ((t_g - t_g_direct(&c)?).abs(), 1e-10),
        ((c_e_closed(&c)? - c_e_from_c_g(c_g)?).abs(), 1e-12),
        ((e.t_e - mutual_information(&bell_density(c))?).abs(), 1e-8),
    ];
    Ok(StateChecks { c, items })
}

/// Runs every suite.
///
/// * closed-form relations on `count` states from stream 0 of `seed`;
/// * both `Q_G` oracles on `max(1, count/100)` states from stream 1;
/// * vertex minimality on `max(1, count/100)` states from stream 2, one in
///   ten of them drawn with two equal magnitudes;
/// * both counterexample searches with a budget of 10⁴ samples.
pub fn run_audit(seed: u64, count: usize, fault: Fault) -> Result<AuditReport> {
    let mut report = AuditReport::new();

    let states = PhysicalSampler::with_stream(seed, 0).take(count);
    let checks: Vec<StateChecks> = states
        .par_iter()
        .map(|&c| check_state(c, fault))
        .collect::<Result<_>>()?;
    for (k, name) in STATE_SUITES.iter().enumerate() {
        let mut suite = SuiteResult::empty();
        for s in &checks {
            let (violation, tol) = s.items[k];
            suite.record(&s.c, violation, tol);
        }
        report.insert((*name).to_string(), suite);
    }

    let small = (count / 100).max(1);
    let oracle_states = PhysicalSampler::with_stream(seed, 1).take(small);
    let verdicts: Vec<(f64, f64)> = oracle_states
        .par_iter()
        .map(|c| {
            let simplex = brute_force_qg(c, ORACLE_SIMPLEX_RESOLUTION)?;
            let spectral = brute_force_qg_spectral(c, ORACLE_SPHERE_RESOLUTION)?;
            Ok((simplex.gap.abs(), spectral.gap.abs()))
        })
        .collect::<Result<_>>()?;
    let mut simplex = SuiteResult::empty();
    let mut spectral = SuiteResult::empty();
    for (c, (g1, g2)) in oracle_states.iter().zip(&verdicts) {
        simplex.record(c, *g1, crate::oracle::SIMPLEX_ORACLE_TOL);
        spectral.record(c, *g2, crate::oracle::SPECTRAL_ORACLE_TOL);
    }
    report.insert("oracle_qg_simplex".into(), simplex);
    report.insert("oracle_qg_spectral".into(), spectral);

    let mut sampler = PhysicalSampler::with_stream(seed, 2);
    let vertex_states: Vec<CorrelationVector> = (0..small)
        .map(|k| {
            if k % 10 == 9 {
                sampler.next_tied_state()
            } else {
                sampler.next_state()
            }
        })
        .collect();
    let vertex: Vec<f64> = vertex_states
        .par_iter()
        .map(|c| vertex_minimality(c, VERTEX_RESOLUTION).map(|v| v.vertex_min - v.grid_min))
        .collect::<Result<_>>()?;
    let mut suite = SuiteResult::empty();
    for (c, v) in vertex_states.iter().zip(&vertex) {
        suite.record(c, *v, crate::oracle::VERTEX_TOL);
    }
    report.insert("vertex_minimality".into(), suite);

    for (name, relation) in [
        ("counterexample_tg_lt_te", NonHierarchy::TgLtTe),
        ("counterexample_qe_gt_ce", NonHierarchy::QeGtCe),
    ] {
        let found = counterexample_search(relation, seed, COUNTEREXAMPLE_BUDGET)?;
        let mut suite = SuiteResult::empty();
        suite.checked = 1;
        if found.is_none() {
            suite.failed = 1;
        }
        report.insert(name.into(), suite);
    }

    Ok(report)
}
