//! Spectra, circulator-point detection, complete-routing search and
//! backscattering robustness.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{load_preset, Preset, ReducedParams, Topology};
use crate::refine::{golden_section_max, interior_maxima, linspace};
use crate::scattering::{single_resonator_smatrix, smatrix, Port, SMatrix, Transmission};

/// Grid size of the coarse circulator-point scan.
pub const DETECTION_GRID: usize = 4096;
/// Bracket width at which peak refinement stops, rad/s.
pub const REFINE_TOL: f64 = 1.0;
/// Circulator detection threshold used when none is given.
pub const DEFAULT_THRESHOLD: f64 = 0.9;

/// Which scattering model to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Model {
    pub topology: Topology,
    pub params: ReducedParams,
}

impl Model {
    pub fn pair(params: ReducedParams) -> Self {
        Model {
            topology: Topology::Pair,
            params,
        }
    }

    /// The single-resonator comparison model uses `gamma_a`, `gamma_b`,
    /// `delta_f1` and `chi_1` of `params`.
    pub fn single(params: ReducedParams) -> Self {
        Model {
            topology: Topology::Single,
            params,
        }
    }

    pub fn smatrix(&self, delta: f64) -> Result<SMatrix> {
        let p = &self.params;
        match self.topology {
            Topology::Pair => smatrix(p, delta),
            Topology::Single => {
                single_resonator_smatrix(p.gamma_a, p.gamma_b, p.delta_f1, p.chi_1, delta)
            }
        }
    }

    pub fn transmission(&self, delta: f64) -> Result<Transmission> {
        self.smatrix(delta).map(|s| s.transmission())
    }
}

fn evaluate_grid<T, F>(deltas: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    // Ordered collect: identical output for any worker count.
    deltas.par_iter().map(|&d| f(d)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub deltas: Vec<f64>,
    pub tables: Vec<Transmission>,
    pub params: ReducedParams,
}

impl SweepResult {
    pub fn column(&self, from: Port, to: Port) -> Vec<f64> {
        self.tables.iter().map(|t| t.get(from, to)).collect()
    }
}

fn check_range(delta_min: f64, delta_max: f64) -> Result<()> {
    if !(delta_min.is_finite() && delta_max.is_finite()) {
        return Err(Error::invalid("delta_min", "sweep bounds must be finite"));
    }
    if delta_min >= delta_max {
        return Err(Error::invalid(
            "delta_min",
            format!("must be < delta_max ({delta_min} >= {delta_max})"),
        ));
    }
    Ok(())
}

pub fn sweep(
    rp: &ReducedParams,
    delta_min: f64,
    delta_max: f64,
    steps: usize,
) -> Result<SweepResult> {
    sweep_model(&Model::pair(*rp), delta_min, delta_max, steps)
}

pub fn sweep_model(
    model: &Model,
    delta_min: f64,
    delta_max: f64,
    steps: usize,
) -> Result<SweepResult> {
    check_range(delta_min, delta_max)?;
    if steps < 2 {
        return Err(Error::invalid(
            "steps",
            format!("must be >= 2, got {steps}"),
        ));
    }
    let deltas = linspace(delta_min, delta_max, steps);
    let tables = evaluate_grid(&deltas, |d| model.transmission(d))?;
    Ok(SweepResult {
        deltas,
        tables,
        params: model.params,
    })
}

/// The four port cycles a four-port circulator can realize.
///
/// Declaration order is the tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    /// 1→2→3→4→1
    #[serde(rename = "CW")]
    Cw,
    /// 1→4→3→2→1
    #[serde(rename = "CCW")]
    Ccw,
    /// Positive figure eight, 1→2→4→3→1
    #[serde(rename = "POS8")]
    Pos8,
    /// Reverse figure eight, 1→3→4→2→1 (equivalently 2→1→3→4→2)
    #[serde(rename = "REV8")]
    Rev8,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Cw,
        Direction::Ccw,
        Direction::Pos8,
        Direction::Rev8,
    ];

    /// Ports in visiting order starting from port 1.
    pub fn cycle(self) -> [Port; 4] {
        use Port::*;
        match self {
            Direction::Cw => [P1, P2, P3, P4],
            Direction::Ccw => [P1, P4, P3, P2],
            Direction::Pos8 => [P1, P2, P4, P3],
            Direction::Rev8 => [P1, P3, P4, P2],
        }
    }

    /// Directed edges (i → π(i)).
    pub fn edges(self) -> [(Port, Port); 4] {
        let c = self.cycle();
        std::array::from_fn(|k| (c[k], c[(k + 1) % 4]))
    }

    pub fn reversed(self) -> Direction {
        match self {
            Direction::Cw => Direction::Ccw,
            Direction::Ccw => Direction::Cw,
            Direction::Pos8 => Direction::Rev8,
            Direction::Rev8 => Direction::Pos8,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Direction::Cw => "CW",
            Direction::Ccw => "CCW",
            Direction::Pos8 => "POS8",
            Direction::Rev8 => "REV8",
        };
        f.write_str(s)
    }
}

/// Worst hop of the cycle: min over edges of T_{i→π(i)}.
pub fn circulation_fidelity(t: &Transmission, direction: Direction) -> f64 {
    direction
        .edges()
        .iter()
        .map(|&(from, to)| t.get(from, to))
        .fold(f64::INFINITY, f64::min)
}

/// Mean hop transmission of the cycle, reported for diagnostics.
pub fn circulation_mean(t: &Transmission, direction: Direction) -> f64 {
    direction
        .edges()
        .iter()
        .map(|&(from, to)| t.get(from, to))
        .sum::<f64>()
        / 4.0
}

fn best_fidelity(t: &Transmission) -> f64 {
    Direction::ALL
        .iter()
        .map(|&d| circulation_fidelity(t, d))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CirculatorPoint {
    pub delta: f64,
    pub direction: Direction,
    pub cycle: [Port; 4],
    pub fidelity: f64,
    pub mean: f64,
}

/// A closed-form frequency point and the circulation it is expected to carry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub delta: f64,
    pub direction: Direction,
}

fn require_no_backscatter(rp: &ReducedParams, what: &str) -> Result<()> {
    rp.validate()?;
    if rp.has_backscatter() {
        return Err(Error::Precondition(format!(
            "{what} needs chi_1 = chi_2 = 0 (got {}, {})",
            rp.chi_1, rp.chi_2
        )));
    }
    Ok(())
}

fn candidates_with(rp: &ReducedParams, radicand: f64) -> Vec<Candidate> {
    let mut out = Vec::new();
    if radicand < 0.0 {
        return out;
    }
    let root = radicand.sqrt();
    let (d1, d2) = (rp.delta_f1, rp.delta_f2);
    // Port-1 block resonances drive 1→3 and 4→2; port-2 block, 2→4 and 3→1.
    for sign in [1.0, -1.0] {
        out.push(Candidate {
            delta: sign * root + (d2 - d1) / 2.0,
            direction: Direction::Rev8,
        });
        out.push(Candidate {
            delta: sign * root + (d1 - d2) / 2.0,
            direction: Direction::Pos8,
        });
    }
    out.sort_by(|a, b| {
        a.delta
            .total_cmp(&b.delta)
            .then(a.direction.cmp(&b.direction))
    });
    out.dedup_by(|b, a| a.direction == b.direction && (a.delta - b.delta).abs() < 1.0);
    out
}

/// Frequency points where the real part of a hybridized-block determinant
/// vanishes:
///
/// REV8: δ = ±√(ΓaΓb + J² + (Δ_F1 + Δ_F2)²/4) + (Δ_F2 − Δ_F1)/2
/// POS8: δ = ±√(ΓaΓb + J² + (Δ_F1 + Δ_F2)²/4) + (Δ_F1 − Δ_F2)/2
pub fn closed_form_points(rp: &ReducedParams) -> Result<Vec<Candidate>> {
    require_no_backscatter(rp, "closed-form points")?;
    let s = rp.delta_f1 + rp.delta_f2;
    Ok(candidates_with(
        rp,
        rp.gamma_a * rp.gamma_b + rp.j * rp.j + s * s / 4.0,
    ))
}

/// Peaks of the cross-waveguide transmission, exact for Γa = Γb: same as
/// [`closed_form_points`] with −ΓaΓb under the radical.
pub fn cross_peak_candidates(rp: &ReducedParams) -> Result<Vec<Candidate>> {
    require_no_backscatter(rp, "cross-peak candidates")?;
    let s = rp.delta_f1 + rp.delta_f2;
    Ok(candidates_with(
        rp,
        rp.j * rp.j - rp.gamma_a * rp.gamma_b + s * s / 4.0,
    ))
}

pub fn find_circulator_points(
    rp: &ReducedParams,
    delta_min: f64,
    delta_max: f64,
    threshold: f64,
) -> Result<Vec<CirculatorPoint>> {
    find_circulator_points_in(&Model::pair(*rp), delta_min, delta_max, threshold)
}

pub fn find_circulator_points_in(
    model: &Model,
    delta_min: f64,
    delta_max: f64,
    threshold: f64,
) -> Result<Vec<CirculatorPoint>> {
    check_range(delta_min, delta_max)?;
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::invalid(
            "threshold",
            format!("must lie in (0, 1], got {threshold}"),
        ));
    }
    let grid = linspace(delta_min, delta_max, DETECTION_GRID);
    let coarse = evaluate_grid(&grid, |d| model.transmission(d).map(|t| best_fidelity(&t)))?;

    let refined: Vec<(f64, f64)> = interior_maxima(&coarse)
        .into_par_iter()
        .map(|i| {
            let seed = (grid[i], coarse[i]);
            let (x, fx) = golden_section_max(
                |d| {
                    model
                        .transmission(d)
                        .map(|t| best_fidelity(&t))
                        .unwrap_or(0.0)
                },
                grid[i - 1],
                grid[i + 1],
                REFINE_TOL,
                200,
            );
            if fx >= seed.1 {
                (x, fx)
            } else {
                seed
            }
        })
        .collect();

    let mut points = Vec::new();
    for (delta, best) in refined {
        if best < threshold {
            continue;
        }
        let t = model.transmission(delta)?;
        for d in Direction::ALL {
            let fid = circulation_fidelity(&t, d);
            if (fid - best).abs() <= 1e-12 {
                points.push(CirculatorPoint {
                    delta,
                    direction: d,
                    cycle: d.cycle(),
                    fidelity: fid,
                    mean: circulation_mean(&t, d),
                });
            }
        }
    }
    points.sort_by(|a, b| {
        a.delta
            .total_cmp(&b.delta)
            .then(a.direction.cmp(&b.direction))
    });
    points.dedup_by(|b, a| a.direction == b.direction && (a.delta - b.delta).abs() < REFINE_TOL);
    Ok(points)
}

/// Analytic expressions for the complete-routing Sagnac shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RoutingFormula {
    /// √(J² + ΓaΓb)
    #[serde(rename = "sqrt(J^2 + Ga*Gb)")]
    PlusProduct,
    /// √(J² − ΓaΓb)
    #[serde(rename = "sqrt(J^2 - Ga*Gb)")]
    MinusProduct,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoutingReport {
    pub delta_star: f64,
    /// Δ such that Δ_F1 = −Δ_F2 = Δ.
    pub shift_star: f64,
    pub min_cross: f64,
    pub candidate_plus: f64,
    pub candidate_minus: Option<f64>,
    pub matched: Option<RoutingFormula>,
}

fn min_cross(t: &Transmission) -> f64 {
    use Port::*;
    [(P1, P3), (P2, P4), (P3, P1), (P4, P2)]
        .iter()
        .map(|&(a, b)| t.get(a, b))
        .fold(f64::INFINITY, f64::min)
}

fn odd_grid_size(span: f64, linewidth: f64, per_linewidth: f64, min: usize, max: usize) -> usize {
    let n = ((per_linewidth * span / linewidth).ceil() as usize).clamp(min, max);
    n | 1
}

/// Best cross-waveguide routing over δ for opposite shifts ±`shift`.
fn routing_at_shift(template: &ReducedParams, shift: f64) -> (f64, f64) {
    let rp = template.with_shifts(shift, -shift);
    let objective = |d: f64| {
        smatrix(&rp, d)
            .map(|s| min_cross(&s.transmission()))
            .unwrap_or(0.0)
    };
    let half = 2.0 * (rp.j.abs() + rp.gamma_a + shift.abs());
    let n = odd_grid_size(2.0 * half, rp.gamma_a, 4.0, 201, 8193);
    let grid = linspace(-half, half, n);
    let (k, _) = grid.iter().map(|&d| objective(d)).enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, (k, v)| if v > best.1 { (k, v) } else { best },
    );
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(n - 1)];
    golden_section_max(objective, lo, hi, 1e-6, 300)
}

/// Searches opposite shifts Δ_F1 = −Δ_F2 = Δ > 0 and detuning δ for the
/// point where every photon leaves through the other waveguide.
///
/// The static configuration Δ = 0 also routes completely (at δ = ±√(J² −
/// Γ²)); only interior maxima of the outer objective are considered, which
/// selects the rotating solution.
pub fn find_complete_routing(template: &ReducedParams) -> Result<RoutingReport> {
    require_no_backscatter(template, "complete-routing search")?;
    if template.gamma_a != template.gamma_b {
        return Err(Error::Precondition(format!(
            "complete-routing search needs gamma_a = gamma_b (got {}, {})",
            template.gamma_a, template.gamma_b
        )));
    }
    let gamma = template.gamma_a;
    let j = template.j.abs();
    let span = 2.0 * (j + gamma);
    let n = odd_grid_size(span, gamma, 4.0, 129, 4097);
    let shifts = linspace(0.0, span, n);
    let outer: Vec<f64> = shifts
        .par_iter()
        .map(|&s| routing_at_shift(template, s).1)
        .collect();

    let best = interior_maxima(&outer)
        .into_iter()
        .max_by(|&a, &b| outer[a].total_cmp(&outer[b]).then(b.cmp(&a)))
        .ok_or_else(|| {
            Error::NonConvergence("no interior routing maximum over the shift grid".into())
        })?;

    let (shift_star, _) = golden_section_max(
        |s| routing_at_shift(template, s).1,
        shifts[best - 1],
        shifts[best + 1],
        1e-3,
        200,
    );
    let (delta_star, min_cross) = routing_at_shift(template, shift_star);

    let product = template.gamma_a * template.gamma_b;
    let candidate_plus = (j * j + product).sqrt();
    let candidate_minus = (j * j >= product).then(|| (j * j - product).sqrt());
    let matched = if candidate_minus.is_some_and(|c| (c - shift_star).abs() < 1.0) {
        Some(RoutingFormula::MinusProduct)
    } else if (candidate_plus - shift_star).abs() < 1.0 {
        Some(RoutingFormula::PlusProduct)
    } else {
        None
    };

    if min_cross < 0.999 {
        return Err(Error::NonConvergence(format!(
            "best cross-waveguide routing {min_cross:.6} at shift {shift_star:e}, delta {delta_star:e}"
        )));
    }
    Ok(RoutingReport {
        delta_star,
        shift_star,
        min_cross,
        candidate_plus,
        candidate_minus,
        matched,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub label: String,
    /// Maximum of T_{1→3} over the sweep.
    pub peak: f64,
    pub peak_delta: f64,
    /// Transmission-weighted mean detuning of the T_{1→3} spectrum.
    pub centroid: f64,
}

/// Grid size of the robustness sweep before local refinement.
pub const ROBUSTNESS_GRID: usize = 4001;

pub fn backscatter_report(
    scenarios: &[(String, ReducedParams)],
    delta_min: f64,
    delta_max: f64,
) -> Result<Vec<RobustnessReport>> {
    if scenarios.is_empty() {
        return Err(Error::invalid(
            "scenarios",
            "at least one scenario is required",
        ));
    }
    check_range(delta_min, delta_max)?;
    scenarios
        .iter()
        .map(|(label, rp)| {
            let s = sweep(rp, delta_min, delta_max, ROBUSTNESS_GRID)?;
            let t13 = s.column(Port::P1, Port::P3);
            let (k, &grid_peak) =
                t13.iter()
                    .enumerate()
                    .fold((0, &f64::NEG_INFINITY), |best, (k, v)| {
                        if v > best.1 {
                            (k, v)
                        } else {
                            best
                        }
                    });
            let n = t13.len();
            let lo = s.deltas[k.saturating_sub(1)];
            let hi = s.deltas[(k + 1).min(n - 1)];
            let (x, fx) = golden_section_max(
                |d| {
                    smatrix(rp, d)
                        .map(|m| m.t(Port::P1, Port::P3).norm_sqr())
                        .unwrap_or(0.0)
                },
                lo,
                hi,
                REFINE_TOL,
                200,
            );
            let (peak_delta, peak) = if fx >= grid_peak {
                (x, fx)
            } else {
                (s.deltas[k], grid_peak)
            };
            let weight: f64 = t13.iter().sum();
            let centroid = s.deltas.iter().zip(&t13).map(|(d, t)| d * t).sum::<f64>() / weight;
            Ok(RobustnessReport {
                label: label.clone(),
                peak,
                peak_delta,
                centroid,
            })
        })
        .collect()
}

/// Rotation rate of the spinning scenarios in [`builtin_scenarios`], rad/s.
pub const SCENARIO_OMEGA: f64 = 29e3;

/// The five backscattering scenarios: each static baseline, the same with
/// the first resonator spinning, and the two-χ case with counter-rotation.
pub fn builtin_scenarios() -> Result<Vec<(String, ReducedParams)>> {
    let single = load_preset("fig4-a")?;
    let double = load_preset("fig4-b")?;
    let spun = |p: &Preset, o1: f64, o2: f64| -> Result<ReducedParams> {
        let mut p = p.clone();
        p.spin.omega_1 = o1;
        p.spin.omega_2 = o2;
        p.reduced()
    };
    let w = SCENARIO_OMEGA;
    Ok(vec![
        ("static, chi1".to_string(), single.reduced()?),
        ("omega1, chi1".to_string(), spun(&single, w, 0.0)?),
        ("static, chi1 = chi2".to_string(), double.reduced()?),
        ("omega1, chi1 = chi2".to_string(), spun(&double, w, 0.0)?),
        (
            "omega1 = -omega2, chi1 = chi2".to_string(),
            spun(&double, w, -w)?,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CALIBRATED_GAMMA;

    fn preset_rp(name: &str) -> ReducedParams {
        load_preset(name).unwrap().reduced().unwrap()
    }

    fn table(entries: &[(Port, Port, f64)]) -> Transmission {
        let mut t = Transmission([[0.0; 4]; 4]);
        for &(from, to, v) in entries {
            t.0[to.index()][from.index()] = v;
        }
        t
    }

    #[test]
    fn sweep_two_steps_gives_endpoints() {
        let s = sweep(&preset_rp("fig2-b"), -1e6, 2e6, 2).unwrap();
        assert_eq!(s.deltas, vec![-1e6, 2e6]);
        assert_eq!(s.tables.len(), 2);
    }

    #[test]
    fn sweep_rejects_bad_arguments() {
        let rp = preset_rp("fig2-b");
        assert!(sweep(&rp, 0.0, 1.0, 1).is_err());
        assert!(sweep(&rp, 1.0, 1.0, 10).is_err());
        assert!(sweep(&rp, 2.0, 1.0, 10).is_err());
    }

    #[test]
    fn corotating_sweep_is_reciprocal_and_half_split() {
        let rp = preset_rp("fig3-corotate");
        let s = sweep(&rp, -8e6, 8e6, 2001).unwrap();
        for t in &s.tables {
            assert!((t.get(Port::P1, Port::P2) - t.get(Port::P2, Port::P1)).abs() < 1e-10);
            for p in Port::ALL {
                assert!((t.column_sum(p) - 1.0).abs() < 1e-10);
            }
        }
        // Mid-band resonance peaks of the cross transmission sit at 1/2.
        let peak = s.column(Port::P1, Port::P3).into_iter().fold(0.0, f64::max);
        assert!((peak - 0.5).abs() < 0.01, "peak {peak}");
    }

    #[test]
    fn fidelity_of_perfect_cw_routing() {
        use Port::*;
        let t = table(&[(P1, P2, 1.0), (P2, P3, 1.0), (P3, P4, 1.0), (P4, P1, 1.0)]);
        assert_eq!(circulation_fidelity(&t, Direction::Cw), 1.0);
        assert_eq!(circulation_fidelity(&t, Direction::Ccw), 0.0);
    }

    #[test]
    fn fidelity_of_uniform_table() {
        let t = Transmission([[0.25; 4]; 4]);
        for d in Direction::ALL {
            assert_eq!(circulation_fidelity(&t, d), 0.25);
            assert_eq!(circulation_mean(&t, d), 0.25);
        }
    }

    #[test]
    fn cycles_are_distinct_four_cycles() {
        for d in Direction::ALL {
            let mut seen = d.cycle().to_vec();
            seen.sort();
            assert_eq!(seen, Port::ALL.to_vec());
            let rev: Vec<_> = d.reversed().edges().iter().map(|&(a, b)| (b, a)).collect();
            for e in d.edges() {
                assert!(rev.contains(&e));
            }
        }
    }

    #[test]
    fn static_candidates_collapse() {
        let rp = ReducedParams::symmetric(CALIBRATED_GAMMA, 2.4e6);
        let c = closed_form_points(&rp).unwrap();
        let m = (CALIBRATED_GAMMA * CALIBRATED_GAMMA + 2.4e6 * 2.4e6).sqrt();
        assert_eq!(c.len(), 4);
        for cand in &c {
            assert!((cand.delta.abs() - m).abs() < 1e-6);
        }
        let tags: Vec<_> = c.iter().map(|c| c.direction).collect();
        assert_eq!(
            tags,
            vec![
                Direction::Pos8,
                Direction::Rev8,
                Direction::Pos8,
                Direction::Rev8
            ]
        );
    }

    #[test]
    fn one_spinning_candidates() {
        let rp = preset_rp("fig2-b");
        let c = closed_form_points(&rp).unwrap();
        assert_eq!(c.len(), 4);
        let root = (rp.gamma_a * rp.gamma_b + rp.j * rp.j + rp.delta_f1 * rp.delta_f1 / 4.0).sqrt();
        for cand in &c {
            let offset = match cand.direction {
                Direction::Rev8 => -rp.delta_f1 / 2.0,
                Direction::Pos8 => rp.delta_f1 / 2.0,
                _ => unreachable!(),
            };
            assert!(((cand.delta - offset).abs() - root).abs() < 1e-6);
        }
        let mut deltas: Vec<_> = c.iter().map(|c| (c.delta / 1.0).round()).collect();
        deltas.dedup();
        assert_eq!(deltas.len(), 4);
    }

    #[test]
    fn counter_rotating_candidates_two_per_direction() {
        let c = closed_form_points(&preset_rp("fig3-counter")).unwrap();
        for d in [Direction::Rev8, Direction::Pos8] {
            assert_eq!(c.iter().filter(|c| c.direction == d).count(), 2);
        }
    }

    #[test]
    fn candidates_need_no_backscatter() {
        assert!(closed_form_points(&preset_rp("fig5")).is_err());
    }

    #[test]
    fn corotating_has_no_circulator() {
        let rp = preset_rp("fig3-corotate");
        assert!(find_circulator_points(&rp, -8e6, 8e6, 0.9)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn static_has_no_circulator() {
        let rp = ReducedParams::symmetric(CALIBRATED_GAMMA, 2.4e6);
        assert!(find_circulator_points(&rp, -8e6, 8e6, 0.5)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn one_spinning_points_sit_on_cross_peaks() {
        let rp = preset_rp("fig2-b");
        let pts = find_circulator_points(&rp, -8e6, 8e6, 0.75).unwrap();
        assert_eq!(pts.len(), 4);
        let peaks = cross_peak_candidates(&rp).unwrap();
        for (p, c) in pts.iter().zip(&peaks) {
            assert_eq!(p.direction, c.direction);
            assert!(
                (p.delta - c.delta).abs() < 10.0,
                "{} vs {}",
                p.delta,
                c.delta
            );
            // 4J²/(Δ_F1² + 4J²)
            let cap = 4.0 * rp.j * rp.j / (rp.delta_f1 * rp.delta_f1 + 4.0 * rp.j * rp.j);
            assert!((p.fidelity - cap).abs() < 1e-9);
        }
    }

    #[test]
    fn threshold_validation() {
        let rp = preset_rp("fig2-b");
        assert!(find_circulator_points(&rp, -1e6, 1e6, 0.0).is_err());
        assert!(find_circulator_points(&rp, -1e6, 1e6, 1.5).is_err());
    }

    #[test]
    fn refinement_never_worse_than_seed() {
        let rp = preset_rp("fig3-counter");
        let grid = linspace(-8e6, 8e6, DETECTION_GRID);
        let pts = find_circulator_points(&rp, -8e6, 8e6, 0.5).unwrap();
        for p in pts {
            let k = grid
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - p.delta).abs().total_cmp(&(b.1 - p.delta).abs()))
                .unwrap()
                .0;
            let seed = best_fidelity(&smatrix(&rp, grid[k]).unwrap().transmission());
            assert!(p.fidelity >= seed);
        }
    }

    #[test]
    fn complete_routing_calibrated() {
        let r = find_complete_routing(&ReducedParams::symmetric(CALIBRATED_GAMMA, 2.4e6)).unwrap();
        assert!(r.min_cross >= 1.0 - 1e-6);
        assert!(r.delta_star.abs() < 10.0);
        assert_eq!(r.matched, Some(RoutingFormula::MinusProduct));
    }

    #[test]
    fn complete_routing_tends_to_j_as_gamma_vanishes() {
        let j = 2.4e6;
        let mut last = f64::INFINITY;
        for ratio in [0.2, 0.1, 0.05] {
            let r = find_complete_routing(&ReducedParams::symmetric(ratio * j, j)).unwrap();
            let gap = (r.shift_star - j).abs();
            assert!(gap < last);
            assert!(gap / j < ratio * ratio);
            last = gap;
        }
    }

    #[test]
    fn complete_routing_preconditions() {
        let rp = ReducedParams::symmetric(1e5, 1e6);
        assert!(find_complete_routing(&rp.with_backscatter(1.0, 0.0)).is_err());
        let mut asym = rp;
        asym.gamma_b = 2e5;
        assert!(matches!(
            find_complete_routing(&asym),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn builtin_scenarios_rank_above_static() {
        let r = backscatter_report(&builtin_scenarios().unwrap(), -1e7, 1e7).unwrap();
        assert_eq!(r.len(), 5);
        assert!(r[1].peak > r[0].peak);
        assert!(r[3].peak > r[2].peak);
        assert!(r[4].peak > r[3].peak);
        assert!(r[1].centroid < 0.0 && r[0].centroid.abs() < 1e3);
    }

    #[test]
    fn report_requires_scenarios() {
        assert!(backscatter_report(&[], -1.0, 1.0).is_err());
    }
}
