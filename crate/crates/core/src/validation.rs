//! Seeded invariant suites shared by `spincirc validate` and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    backscatter_report, builtin_scenarios, find_circulator_points, find_complete_routing,
    CirculatorPoint,
};
use crate::error::Result;
use crate::model::{load_preset, ReducedParams, CALIBRATED_GAMMA};
use crate::oracle::oracle_smatrix;
use crate::scattering::{closed_form_smatrix, smatrix, Port};

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 42;

/// Entrywise agreement required between independent solvers.
pub const EQUIVALENCE_TOL: f64 = 1e-10;
pub const UNITARITY_TOL: f64 = 1e-10;
pub const PROBABILITY_TOL: f64 = 1e-12;
pub const FORBIDDEN_TOL: f64 = 1e-12;
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub worst: f64,
    pub detail: String,
}

impl SuiteResult {
    fn from_worst(name: &'static str, checked: usize, worst: f64, tol: f64) -> Self {
        SuiteResult {
            name,
            passed: worst < tol,
            checked,
            worst,
            detail: format!("max deviation {worst:.3e} (tolerance {tol:.0e})"),
        }
    }

    fn failed(name: &'static str, detail: String) -> Self {
        SuiteResult {
            name,
            passed: false,
            checked: 0,
            worst: f64::NAN,
            detail,
        }
    }
}

/// One random device and detuning.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub params: ReducedParams,
    pub delta: f64,
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn signed_rate<R: Rng>(rng: &mut R) -> f64 {
    // Roughly one draw in eight is exactly zero (non-spinning resonator).
    if rng.random_range(0..8) == 0 {
        return 0.0;
    }
    let v = log_uniform(rng, 1e3, 1e8);
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Draws `n` samples: rates log-uniform in [1e3, 1e8] rad/s, signed Sagnac
/// shifts, δ uniform within ±3 times the largest rate. With `backscatter`
/// both χ are drawn log-uniformly from [1e3, 1e7].
pub fn random_samples(seed: u64, n: usize, backscatter: bool) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut params = ReducedParams {
                gamma_a: log_uniform(&mut rng, 1e3, 1e8),
                gamma_b: log_uniform(&mut rng, 1e3, 1e8),
                j: log_uniform(&mut rng, 1e3, 1e8),
                delta_f1: signed_rate(&mut rng),
                delta_f2: signed_rate(&mut rng),
                chi_1: 0.0,
                chi_2: 0.0,
            };
            if backscatter {
                params.chi_1 = log_uniform(&mut rng, 1e3, 1e7);
                params.chi_2 = log_uniform(&mut rng, 1e3, 1e7);
            }
            let span = 3.0 * params.scale();
            let delta = rng.random_range(-span..span);
            Sample { params, delta }
        })
        .collect()
}

/// Closed form, resolvent and real-space oracle agree with χ = 0.
pub fn oracle_equivalence_static(samples: &[Sample]) -> Result<SuiteResult> {
    let mut worst: f64 = 0.0;
    for s in samples {
        let a = smatrix(&s.params, s.delta)?;
        let b = closed_form_smatrix(&s.params, s.delta)?;
        let c = oracle_smatrix(&s.params, s.delta)?;
        worst = worst
            .max(a.max_abs_diff(&b))
            .max(a.max_abs_diff(&c))
            .max(b.max_abs_diff(&c));
    }
    Ok(SuiteResult::from_worst(
        "oracle equivalence (chi = 0)",
        samples.len(),
        worst,
        EQUIVALENCE_TOL,
    ))
}

/// Resolvent and real-space oracle agree with backscattering.
pub fn oracle_equivalence_backscatter(samples: &[Sample]) -> Result<SuiteResult> {
    let mut worst: f64 = 0.0;
    for s in samples {
        let a = smatrix(&s.params, s.delta)?;
        let c = oracle_smatrix(&s.params, s.delta)?;
        worst = worst.max(a.max_abs_diff(&c));
    }
    Ok(SuiteResult::from_worst(
        "oracle equivalence (chi > 0)",
        samples.len(),
        worst,
        EQUIVALENCE_TOL,
    ))
}

pub fn unitarity(samples: &[Sample]) -> Result<SuiteResult> {
    let mut unitary: f64 = 0.0;
    let mut probability: f64 = 0.0;
    for s in samples {
        let m = smatrix(&s.params, s.delta)?;
        unitary = unitary.max(m.unitarity_defect());
        probability = probability.max(m.probability_defect());
    }
    Ok(SuiteResult {
        name: "unitarity and conservation",
        passed: unitary < UNITARITY_TOL && probability < PROBABILITY_TOL,
        checked: samples.len(),
        worst: unitary.max(probability),
        detail: format!(
            "max |S^H S - I| {unitary:.3e} (tolerance {UNITARITY_TOL:.0e}), max |sum_j T - 1| {probability:.3e} (tolerance {PROBABILITY_TOL:.0e})"
        ),
    })
}

/// Amplitudes that vanish identically without backscattering: reflection
/// and the counter-propagating exit of the partner waveguide.
pub const FORBIDDEN: [(Port, Port); 8] = [
    (Port::P1, Port::P1),
    (Port::P1, Port::P4),
    (Port::P2, Port::P2),
    (Port::P2, Port::P3),
    (Port::P3, Port::P3),
    (Port::P3, Port::P2),
    (Port::P4, Port::P4),
    (Port::P4, Port::P1),
];

pub fn forbidden_amplitudes(samples: &[Sample]) -> Result<SuiteResult> {
    let mut worst: f64 = 0.0;
    for s in samples {
        let m = smatrix(&s.params, s.delta)?;
        for &(from, to) in &FORBIDDEN {
            worst = worst.max(m.t(from, to).norm());
        }
    }
    Ok(SuiteResult::from_worst(
        "forbidden amplitudes (chi = 0)",
        samples.len(),
        worst,
        FORBIDDEN_TOL,
    ))
}

fn negated(rp: &ReducedParams) -> ReducedParams {
    rp.with_shifts(-rp.delta_f1, -rp.delta_f2)
}

/// T(δ; Δ_F1, Δ_F2, χ) = T(−δ; −Δ_F1, −Δ_F2, χ).
pub fn mirror_symmetry(samples: &[Sample]) -> Result<SuiteResult> {
    let mut worst: f64 = 0.0;
    for s in samples {
        let a = smatrix(&s.params, s.delta)?.transmission();
        let b = smatrix(&negated(&s.params), -s.delta)?.transmission();
        worst = worst.max(a.max_abs_diff(&b));
    }
    Ok(SuiteResult::from_worst(
        "mirror symmetry",
        samples.len(),
        worst,
        SYMMETRY_TOL,
    ))
}

/// T_{i→j}(δ; Δ) = T_{j→i}(δ; −Δ): reversing every rotation reverses
/// every path.
pub fn transpose_reversal(samples: &[Sample]) -> Result<SuiteResult> {
    let mut worst: f64 = 0.0;
    for s in samples {
        let a = smatrix(&s.params, s.delta)?.transmission();
        let b = smatrix(&negated(&s.params), s.delta)?.transmission();
        worst = worst.max(a.max_abs_diff(&b.transpose()));
    }
    Ok(SuiteResult::from_worst(
        "rotation reversal transposes T",
        samples.len(),
        worst,
        SYMMETRY_TOL,
    ))
}

/// Largest mismatch between the points detected for `rp` and the mirror
/// image of those detected for the reversed rotation. `None` if the two
/// lists differ in length or direction labels.
pub fn detector_mirror_gap(
    rp: &ReducedParams,
    delta_span: f64,
    threshold: f64,
) -> Result<Option<f64>> {
    let fwd = find_circulator_points(rp, -delta_span, delta_span, threshold)?;
    let mut rev: Vec<CirculatorPoint> =
        find_circulator_points(&negated(rp), -delta_span, delta_span, threshold)?;
    rev.reverse();
    if fwd.len() != rev.len() {
        return Ok(None);
    }
    let mut gap: f64 = 0.0;
    for (a, b) in fwd.iter().zip(&rev) {
        if a.direction != b.direction {
            return Ok(None);
        }
        gap = gap.max((a.delta + b.delta).abs());
    }
    Ok(Some(gap))
}

/// Detected points mirror under rotation reversal within 10 Hz.
pub fn detector_mirror() -> Result<SuiteResult> {
    let name = "detector mirror";
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for (preset, threshold) in [("fig2-b", 0.75), ("fig3-counter", 0.5), ("fig5", 0.5)] {
        let p = load_preset(preset)?;
        let span = p.sweep_max.min(-p.sweep_min);
        match detector_mirror_gap(&p.reduced()?, span, threshold)? {
            Some(gap) => worst = worst.max(gap),
            None => {
                return Ok(SuiteResult::failed(
                    name,
                    format!("{preset}: point lists differ under rotation reversal"),
                ))
            }
        }
        checked += 1;
    }
    Ok(SuiteResult::from_worst(name, checked, worst, 10.0))
}

/// Complete routing is found for the calibrated template and for a few
/// seeded linewidth ratios.
pub fn complete_routing(seed: u64) -> Result<SuiteResult> {
    let name = "complete routing";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut templates = vec![ReducedParams::symmetric(CALIBRATED_GAMMA, 2.4e6)];
    for _ in 0..3 {
        let j = log_uniform(&mut rng, 1e5, 1e7);
        let ratio = rng.random_range(0.05..0.5);
        templates.push(ReducedParams::symmetric(ratio * j, j));
    }
    let mut cross_gap: f64 = 0.0;
    let mut offset: f64 = 0.0;
    for t in &templates {
        let report = match find_complete_routing(t) {
            Ok(r) => r,
            Err(e) => {
                return Ok(SuiteResult::failed(
                    name,
                    format!("Gamma {:e}, J {:e}: {e}", t.gamma_a, t.j),
                ))
            }
        };
        cross_gap = cross_gap.max(1.0 - report.min_cross);
        offset = offset.max(report.delta_star.abs());
    }
    Ok(SuiteResult {
        name,
        passed: cross_gap <= 1e-6 && offset < 10.0,
        checked: templates.len(),
        worst: cross_gap,
        detail: format!("max 1 - min_cross {cross_gap:.3e} (tolerance 1e-6), max |delta*| {offset:.3e} rad/s (tolerance 10)"),
    })
}

/// Rotation raises the backscattered cross transmission above each static
/// baseline, and counter-rotation raises it further.
pub fn backscatter_ordering() -> Result<SuiteResult> {
    let r = backscatter_report(&builtin_scenarios()?, -1e7, 1e7)?;
    let ordered = r[1].peak > r[0].peak && r[3].peak > r[2].peak && r[4].peak > r[3].peak;
    let peaks: Vec<String> = r.iter().map(|x| format!("{:.4}", x.peak)).collect();
    Ok(SuiteResult {
        name: "backscatter ordering",
        passed: ordered,
        checked: r.len(),
        worst: 0.0,
        detail: format!("peak T13: {}", peaks.join(", ")),
    })
}

type Suite<'a> = Box<dyn Fn() -> Result<SuiteResult> + 'a>;

/// Runs every suite. Numerical errors inside a suite are reported as a
/// failed suite rather than aborting the run.
pub fn run_all(samples: usize, seed: u64) -> Vec<SuiteResult> {
    let plain = random_samples(seed, samples, false);
    let scattered = random_samples(seed.wrapping_add(1), samples, true);
    let both: Vec<Sample> = plain.iter().chain(&scattered).copied().collect();

    let suites: Vec<(&'static str, Suite<'_>)> = vec![
        (
            "oracle equivalence (chi = 0)",
            Box::new(|| oracle_equivalence_static(&plain)),
        ),
        (
            "oracle equivalence (chi > 0)",
            Box::new(|| oracle_equivalence_backscatter(&scattered)),
        ),
        ("unitarity and conservation", Box::new(|| unitarity(&both))),
        (
            "forbidden amplitudes (chi = 0)",
            Box::new(|| forbidden_amplitudes(&plain)),
        ),
        ("mirror symmetry", Box::new(|| mirror_symmetry(&both))),
        (
            "rotation reversal transposes T",
            Box::new(|| transpose_reversal(&both)),
        ),
        ("detector mirror", Box::new(detector_mirror)),
        ("complete routing", Box::new(move || complete_routing(seed))),
        ("backscatter ordering", Box::new(backscatter_ordering)),
    ];
    suites
        .into_iter()
        .map(|(name, suite)| suite().unwrap_or_else(|e| SuiteResult::failed(name, e.to_string())))
        .collect()
}
