use analog_search::bounds::DistanceHarness;
use analog_search::discrimination::{
    delta_max_from_epsilon, epsilon_of_asymmetry, error_curve, fidelity_deficit,
    DiscriminationSetup,
};
use analog_search::kinematics::{
    first_crossing_time, imperfection_angle, max_transition_probability, peak_time_general, period,
    transition_probability_general, transition_probability_special, Curve,
};
use analog_search::output::ResultDocument;
use analog_search::prior::{prob_overlap_at_least, prob_overlap_sweep, uniform_prob_closed_check, PriorSpec};
use analog_search::regions::{gamma_linspace, make_table1, regions_coincide, scan_regions, x_midpoints};
use analog_search::{ProbabilityValue, Result, SearchConfig};

use crate::args::{Params, Prior, PriorChoice, RunConfig, Threshold};

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn linspace(end: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| end * i as f64 / (points - 1) as f64).collect()
}

/// Runs a validated configuration into its output document.
pub fn run(config: &RunConfig) -> Result<ResultDocument> {
    let mut doc = match &config.params {
        Params::Curve { x, gamma, energy, hbar, points, t_max } => {
            let cfg = SearchConfig::new(*x, *gamma, *energy, *hbar)?;
            let end = t_max.unwrap_or_else(|| period(Curve::General, &cfg));
            let mut doc = ResultDocument::new("curve", &["t", "p_general", "p_special"]);
            for t in linspace(end, *points) {
                doc.push_row(vec![
                    t,
                    transition_probability_general(&cfg, t)?.value(),
                    transition_probability_special(&cfg, t)?.value(),
                ])?;
            }
            doc
        }
        Params::Maxfid { x, gamma, energy, hbar } => {
            let cfg = SearchConfig::new(*x, *gamma, *energy, *hbar)?;
            let mut doc = ResultDocument::new("maxfid", &["x", "gamma", "pmax", "t_peak", "period"]);
            doc.push_row(vec![
                *x,
                *gamma,
                max_transition_probability(*x, *gamma)?.value(),
                peak_time_general(&cfg)?,
                period(Curve::General, &cfg),
            ])?;
            doc
        }
        Params::Delta { x, gamma } => {
            let delta = imperfection_angle(*x, *gamma)?;
            let mut doc = ResultDocument::new("delta", &["x", "gamma", "delta", "delta_f"]);
            doc.push_row(vec![*x, *gamma, delta, fidelity_deficit(delta)?])?;
            doc
        }
        Params::Discrim { prior, points } => {
            let setup = match *prior {
                Prior::Alpha(a) => DiscriminationSetup::from_asymmetry(a)?,
                Prior::PW(p) => DiscriminationSetup::from_prior(p)?,
            };
            let mut doc = ResultDocument::new("discrim", &["delta", "delta_f", "p_e"]);
            for pt in error_curve(&setup, *points)? {
                doc.push_row(vec![pt.delta, pt.deficit, pt.p_e])?;
            }
            let epsilon = epsilon_of_asymmetry(setup.alpha())?;
            doc.summary("p_w", setup.p_w());
            doc.summary("alpha", setup.alpha());
            doc.summary("epsilon", epsilon);
            doc.summary("delta_max", delta_max_from_epsilon(epsilon)?);
            doc
        }
        Params::Bound { n, gamma, energy, hbar, points } => {
            let harness = DistanceHarness::new(*n, *gamma, *energy, *hbar)?;
            let terminal = harness.terminal_report()?;
            let grid = linspace(terminal.t_check, *points);
            let mut doc = ResultDocument::new("bound", &["t", "lhs", "rhs_growth", "growth_ok"]);
            let reports = harness.growth_reports(&grid)?;
            for r in &reports {
                doc.push_row(vec![r.t_check, r.lhs, r.rhs_growth, flag(r.growth_satisfied)])?;
            }
            doc.summary("delta", terminal.delta);
            doc.summary("t_tilde", terminal.t_check);
            doc.summary("lhs_terminal", terminal.lhs);
            doc.summary("rhs_terminal", terminal.rhs_terminal);
            doc.summary("t_lower_bound", terminal.t_lower_bound);
            doc.summary("growth_ok", reports.iter().all(|r| r.growth_satisfied));
            doc.summary("terminal_ok", terminal.terminal_satisfied == Some(true));
            doc.summary("chain_ok", terminal.chain_satisfied == Some(true));
            doc.summary("small_delta", terminal.small_delta);
            doc
        }
        Params::VerifyProof { n, gamma, energy, hbar, points } => {
            let mut doc = ResultDocument::new(
                "verify-proof",
                &[
                    "n", "gamma", "delta", "t_tilde", "lhs", "rhs_terminal", "t_lower_bound",
                    "growth_ok", "terminal_ok", "chain_ok", "small_delta",
                ],
            );
            let mut all = true;
            for &dim in n {
                for &g in gamma {
                    let harness = DistanceHarness::new(dim, g, *energy, *hbar)?;
                    let terminal = harness.terminal_report()?;
                    let growth = harness
                        .growth_reports(&linspace(terminal.t_check, *points))?
                        .iter()
                        .all(|r| r.growth_satisfied);
                    let terminal_ok = terminal.terminal_satisfied == Some(true);
                    let chain_ok = terminal.chain_satisfied == Some(true);
                    all &= growth && terminal_ok && chain_ok;
                    doc.push_row(vec![
                        dim as f64,
                        g,
                        terminal.delta,
                        terminal.t_check,
                        terminal.lhs,
                        terminal.rhs_terminal,
                        terminal.t_lower_bound,
                        flag(growth),
                        flag(terminal_ok),
                        flag(chain_ok),
                        flag(terminal.small_delta),
                    ])?;
                }
            }
            doc.summary("all_satisfied", all);
            doc
        }
        Params::Regions { nx, ngamma, gamma_max, threshold, alpha } => {
            let setup = DiscriminationSetup::from_asymmetry(*alpha)?;
            let grid = scan_regions(&x_midpoints(*nx), &gamma_linspace(*ngamma, *gamma_max), *threshold, &setup)?;
            let mut doc = ResultDocument::new("regions", &["x", "gamma", "pmax", "in_Rt", "in_RP", "in_rP"]);
            for (j, &g) in grid.gamma_axis.iter().enumerate() {
                for (i, &x) in grid.x_axis.iter().enumerate() {
                    doc.push_row(vec![
                        x,
                        g,
                        grid.pmax.get(i, j),
                        flag(grid.in_rt.get(i, j)),
                        flag(grid.in_rp.get(i, j)),
                        flag(grid.in_rp_threshold.get(i, j)),
                    ])?;
                }
            }
            let count = |v: &[bool]| v.iter().filter(|&&b| b).count();
            doc.summary("regions_coincide", regions_coincide(&grid));
            doc.summary("rp_subset", grid.subset_holds());
            doc.summary("cells_rt", count(grid.in_rt.values()));
            doc.summary("cells_rp", count(grid.in_rp.values()));
            doc.summary("cells_rp_threshold", count(grid.in_rp_threshold.values()));
            doc
        }
        Params::Table1 { x, gamma, alpha, energy, hbar } => {
            let h = hbar * std::f64::consts::TAU;
            let mut doc = ResultDocument::new(
                "table1",
                &["x", "delta", "pmax", "delta_f", "p_e", "t_special", "t_general"],
            );
            for r in make_table1(x, *gamma, *alpha, *energy, h)? {
                doc.push_row(vec![r.x, r.delta, r.pmax, r.delta_f, r.p_e, r.t_special, r.t_general])?;
            }
            doc
        }
        Params::Prior { dim, choice, xbar } => match choice {
            PriorChoice::Uniform => {
                let spec = PriorSpec::uniform(*dim)?;
                let mut doc = ResultDocument::new(
                    "prior",
                    &["x_bar", "prob", "abs_error", "evaluations", "log_space_used", "recurrence"],
                );
                for &xb in xbar {
                    let r = prob_overlap_at_least(&spec, xb)?;
                    doc.push_row(vec![
                        xb,
                        r.value,
                        r.abs_error_estimate,
                        r.evaluations as f64,
                        flag(r.log_space_used),
                        uniform_prob_closed_check(*dim, xb)?,
                    ])?;
                }
                doc
            }
            PriorChoice::DampedGaussian { sigma_sq } => {
                let pairs: Vec<(f64, f64)> = sigma_sq
                    .iter()
                    .flat_map(|&s| xbar.iter().map(move |&xb| (s, xb)))
                    .collect();
                let specs = pairs
                    .iter()
                    .map(|&(s, xb)| Ok((PriorSpec::damped_gaussian(*dim, s)?, xb)))
                    .collect::<Result<Vec<_>>>()?;
                let mut doc = ResultDocument::new(
                    "prior",
                    &["sigma_sq", "x_bar", "prob", "abs_error", "evaluations", "log_space_used"],
                );
                for (pt, &(s, xb)) in prob_overlap_sweep(&specs)?.iter().zip(&pairs) {
                    doc.push_row(vec![
                        s,
                        xb,
                        pt.result.value,
                        pt.result.abs_error_estimate,
                        pt.result.evaluations as f64,
                        flag(pt.result.log_space_used),
                    ])?;
                }
                doc
            }
        },
        Params::Crossing { x, gamma, energy, hbar, thresholds } => {
            let cfg = SearchConfig::new(*x, *gamma, *energy, *hbar)?;
            let pmax = max_transition_probability(*x, *gamma)?;
            let mut doc = ResultDocument::new("crossing", &["threshold", "t_general", "t_special"]);
            for t in thresholds {
                let thr = match *t {
                    Threshold::Value(v) => ProbabilityValue::new(v)?,
                    Threshold::PeakProbability => pmax,
                };
                doc.push_row(vec![
                    thr.value(),
                    first_crossing_time(Curve::General, &cfg, thr)?.time,
                    first_crossing_time(Curve::Special, &cfg, thr)?.time,
                ])?;
            }
            doc.summary("pmax", pmax.value());
            doc
        }
    };
    for (k, v) in &config.parameters {
        doc.parameter(k, v);
    }
    Ok(doc)
}
