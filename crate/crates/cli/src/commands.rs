use std::time::Instant;

use anyhow::Result;
use expsum_core::decouple::{self, Ensemble, ScanConfig};
use expsum_core::expsum::{eval_quadruple_sum, eval_s, PhaseFunction};
use expsum_core::meanvalue::{
    count_vinogradov_j, count_windowed, estimate_a_r_quadrature, fit_growth_exponent,
    kernel_sum_a_r, CountResult, MeanValueRow, MeanValueSpec,
};
use expsum_core::pairs::{apply_word, search_words, zeta_exponent, ExponentPair, Objective};
use expsum_core::planner::{
    envelope_table, make_plan, verify_envelope_coverage, PlanConfig, Scenario,
};
use expsum_core::rational::{parse_rational, Rational};
use expsum_core::zeta::{
    afe_consistency, default_terms, growth_scan, growth_scan_with, zeta_em_oracle, ZetaValue,
};
use num_integer::Integer;

use crate::args::*;
use crate::output::{Cell, PlotSpec, Report};
use crate::UsageError;

pub struct Context {
    pub seed: u64,
    pub timing: bool,
}

pub fn run(cmd: &Command, ctx: &Context) -> Result<Report> {
    match cmd {
        Command::Expsum(c) => expsum(c),
        Command::Meanvalue(c) => meanvalue(c, ctx),
        Command::Decouple(c) => decouple(c, ctx),
        Command::Pairs(c) => pairs(c),
        Command::Planner(c) => planner(c),
        Command::Zeta(c) => zeta(c, ctx),
    }
}

fn expsum(cmd: &ExpsumCmd) -> Result<Report> {
    match cmd {
        ExpsumCmd::Quadruple { n, x } => {
            let x: [f64; 4] = x
                .as_slice()
                .try_into()
                .map_err(|_| UsageError("--x needs exactly four values".into()))?;
            let v = eval_quadruple_sum(*n, x, None)?;
            let mut r = Report::new(
                "expsum quadruple",
                &["N", "x1", "x2", "x3", "x4", "re", "im", "abs", "err"],
            );
            r.row(vec![
                (*n).into(),
                x[0].into(),
                x[1].into(),
                x[2].into(),
                x[3].into(),
                v.re.into(),
                v.im.into(),
                v.abs().into(),
                v.err.into(),
            ]);
            Ok(r)
        }
        ExpsumCmd::S {
            t,
            m,
            phase,
            exponent,
        } => {
            let (f, exp_cell) = match phase {
                Phase::Log => (PhaseFunction::Log, Cell::Missing),
                Phase::Monomial => {
                    let e = parse_rational(exponent)?;
                    (PhaseFunction::Monomial(e.clone()), Cell::Str(e.to_string()))
                }
            };
            let v = eval_s(*t, *m, &f)?;
            let mut r = Report::new(
                "expsum s",
                &["T", "M", "phase", "exponent", "re", "im", "abs", "err"],
            );
            let label = match phase {
                Phase::Log => "log",
                Phase::Monomial => "monomial",
            };
            r.row(vec![
                (*t).into(),
                (*m).into(),
                label.into(),
                exp_cell,
                v.re.into(),
                v.im.into(),
                v.abs().into(),
                v.err.into(),
            ]);
            Ok(r)
        }
    }
}

const MEAN_COLUMNS: [&str; 10] = [
    "method", "N", "r", "delta", "Delta", "window3", "window4", "value", "stderr", "seconds",
];

fn mean_row(row: MeanValueRow) -> Vec<Cell> {
    vec![
        row.method.into(),
        row.n.into(),
        row.r.into(),
        row.delta.into(),
        row.big_delta.into(),
        row.window3.into(),
        row.window4.into(),
        row.value.into(),
        row.stderr.into(),
        row.seconds.into(),
    ]
}

fn mean_plot() -> PlotSpec {
    PlotSpec {
        x: "2",
        y: "8",
        xlabel: "N",
        ylabel: "value",
        logx: true,
        logy: true,
    }
}

fn scaled(n: u32, r: u32, scales: &Scales) -> MeanValueSpec {
    let spec = MeanValueSpec::new(n, r);
    let (d, bd) = (spec.delta, spec.big_delta);
    spec.with_scales(scales.delta.unwrap_or(d), scales.big_delta.unwrap_or(bd))
}

fn meanvalue(cmd: &MeanvalueCmd, ctx: &Context) -> Result<Report> {
    let (name, ns) = match cmd {
        MeanvalueCmd::Windowed { common, .. } => ("meanvalue windowed", &common.n),
        MeanvalueCmd::Kernel { common, .. } => ("meanvalue kernel", &common.n),
        MeanvalueCmd::Quadrature { common, .. } => ("meanvalue quadrature", &common.n),
        MeanvalueCmd::Vinogradov { n, .. } => ("meanvalue vinogradov", n),
    };
    let mut report = Report::new(name, &MEAN_COLUMNS);
    report.plot = Some(mean_plot());
    let mut points = Vec::new();
    for &n in ns {
        let start = Instant::now();
        let (spec, result): (MeanValueSpec, CountResult) = match cmd {
            MeanvalueCmd::Windowed {
                common,
                window3,
                window4,
            } => {
                let spec = MeanValueSpec::new(n, common.r);
                let spec = spec.with_windows(
                    window3.unwrap_or(spec.window3),
                    window4.unwrap_or(spec.window4),
                );
                let res = count_windowed(n, common.r as usize, spec.window3, spec.window4)?;
                (spec, res)
            }
            MeanvalueCmd::Kernel { common, scales } => {
                let spec = scaled(n, common.r, scales);
                let res = kernel_sum_a_r(&spec)?;
                (spec, res)
            }
            MeanvalueCmd::Quadrature {
                common,
                scales,
                samples,
            } => {
                let spec = scaled(n, common.r, scales);
                let res = estimate_a_r_quadrature(&spec, *samples, ctx.seed)?;
                (spec, res)
            }
            MeanvalueCmd::Vinogradov { s, .. } => {
                let res = count_vinogradov_j(n, *s)?;
                let spec = MeanValueSpec::new(n, *s).with_windows(f64::INFINITY, f64::INFINITY);
                (spec, res)
            }
        };
        let elapsed = ctx.timing.then(|| start.elapsed());
        points.push((n as f64, result.value));
        report.row(mean_row(MeanValueRow::new(&spec, &result, elapsed)));
    }
    if points.len() >= 3 {
        let fit = fit_growth_exponent(&points)?;
        report.note("slope", fit.slope);
        report.note("slope_stderr", fit.stderr);
    }
    Ok(report)
}

fn decouple(cmd: &DecoupleCmd, ctx: &Context) -> Result<Report> {
    let DecoupleCmd::Scan {
        d,
        ns,
        ensemble,
        samples,
        exact,
    } = cmd;
    let ensemble = match ensemble {
        EnsembleArg::Ones => Ensemble::Ones,
        EnsembleArg::RandomSigns => Ensemble::RandomSigns,
        EnsembleArg::RandomPhase => Ensemble::RandomPhase,
    };
    let cfg = ScanConfig {
        d: *d,
        ensemble,
        samples: *samples,
        seed: ctx.seed,
        exact: *exact,
    };
    let rep = decouple::ratio_scan(ns, &cfg)?;
    let mut r = Report::new(
        "decouple scan",
        &[
            "d", "N", "ensemble", "lhs", "rhs", "ratio", "stderr", "samples", "seed",
        ],
    );
    for row in rep.rows {
        r.row(vec![
            row.d.into(),
            row.n.into(),
            row.ensemble.into(),
            row.lhs.into(),
            row.rhs.into(),
            row.ratio.into(),
            row.stderr.into(),
            row.samples.into(),
            row.seed.into(),
        ]);
    }
    r.note("slope", rep.fit.slope);
    r.note("slope_stderr", rep.fit.stderr);
    if *d == 4 {
        r.note("status", "exploratory");
    }
    r.plot = Some(PlotSpec {
        x: "2",
        y: "6",
        xlabel: "N",
        ylabel: "lhs/rhs",
        logx: true,
        logy: true,
    });
    Ok(r)
}

fn parse_pair(s: &str) -> Result<ExponentPair> {
    let (k, l) = s
        .split_once(',')
        .ok_or_else(|| UsageError(format!("pair '{s}' is not of the form k,l")))?;
    Ok(ExponentPair::new(
        parse_rational(k.trim())?,
        parse_rational(l.trim())?,
    )?)
}

fn parse_objective(s: &str) -> Result<Objective> {
    match s {
        "zeta" => Ok(Objective::ZetaExponent),
        "k-plus-l" => Ok(Objective::KPlusL),
        other => {
            let coeffs = other
                .strip_prefix("affine:")
                .and_then(|c| c.split_once(','))
                .ok_or_else(|| UsageError(format!("unknown objective '{other}'")))?;
            Ok(Objective::Affine(
                parse_rational(coeffs.0.trim())?,
                parse_rational(coeffs.1.trim())?,
            ))
        }
    }
}

fn pairs(cmd: &PairsCmd) -> Result<Report> {
    match cmd {
        PairsCmd::Word { word, seed_pair } => {
            let seed = parse_pair(seed_pair)?;
            let p = apply_word(word, &seed)?;
            let z = zeta_exponent(&p);
            let mut r = Report::new(
                "pairs word",
                &["word", "seed_k", "seed_l", "k", "l", "theta", "monotone"],
            );
            r.row(vec![
                word.as_str().into(),
                seed.k.to_string().into(),
                seed.l.to_string().into(),
                p.k.to_string().into(),
                p.l.to_string().into(),
                z.theta.to_string().into(),
                z.monotone.into(),
            ]);
            Ok(r)
        }
        PairsCmd::Search {
            max_len,
            seed_pairs,
            objective,
            no_axiom,
        } => {
            let seeds: Vec<ExponentPair> = seed_pairs
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(parse_pair)
                .collect::<Result<_>>()?;
            let obj = parse_objective(objective)?;
            let (best, value) = search_words(*max_len, &seeds, !no_axiom, &obj)?;
            let mut r = Report::new(
                "pairs search",
                &[
                    "objective",
                    "value",
                    "word",
                    "seed_k",
                    "seed_l",
                    "k",
                    "l",
                    "theta",
                ],
            );
            r.row(vec![
                objective.as_str().into(),
                value.to_string().into(),
                best.word.clone().into(),
                best.seed.0.to_string().into(),
                best.seed.1.to_string().into(),
                best.k.to_string().into(),
                best.l.to_string().into(),
                zeta_exponent(&best).theta.to_string().into(),
            ]);
            Ok(r)
        }
    }
}

/// `a` and `b` written over their common denominator.
fn common_denominator(a: &Rational, b: &Rational) -> (String, String) {
    let d = a.denom().lcm(b.denom());
    let scale = |x: &Rational| x.numer() * (&d / x.denom());
    (format!("{}/{d}", scale(a)), format!("{}/{d}", scale(b)))
}

fn planner(cmd: &PlannerCmd) -> Result<Report> {
    match cmd {
        PlannerCmd::Envelope { denominator_bound } => {
            let mut r = Report::new(
                "planner envelope",
                &["alpha_num", "alpha_den", "p_num", "p_den", "witness"],
            );
            for row in envelope_table(*denominator_bound)? {
                r.row(vec![
                    row.alpha_num.into(),
                    row.alpha_den.into(),
                    row.p_num.into(),
                    row.p_den.into(),
                    row.witness.into(),
                ]);
            }
            r.plot = Some(PlotSpec {
                x: "($1/$2)",
                y: "($3/$4)",
                xlabel: "alpha",
                ylabel: "exponent",
                logx: false,
                logy: false,
            });
            Ok(r)
        }
        PlannerCmd::Plan { t, m, c, t0 } => {
            let s = Scenario::new(*t, *m, *c)?;
            let plan = make_plan(&s, &PlanConfig { t0: *t0 })?;
            let mut r = Report::new(
                "planner plan",
                &[
                    "T",
                    "M",
                    "c",
                    "alpha",
                    "regime",
                    "witness",
                    "N",
                    "R",
                    "exponent",
                    "valid",
                    "n_comparable_r2",
                    "reasons",
                ],
            );
            r.row(vec![
                (*t).into(),
                (*m).into(),
                (*c).into(),
                plan.alpha.into(),
                plan.regime.label().into(),
                plan.witness.label().into(),
                plan.n.into(),
                plan.r.into(),
                plan.predicted_exponent.into(),
                plan.valid.into(),
                plan.n_comparable_r2.into(),
                plan.reasons.join("; ").into(),
            ]);
            Ok(r)
        }
        PlannerCmd::Coverage { denominator_bound } => {
            let rep = verify_envelope_coverage(*denominator_bound);
            let mut r = Report::new("planner coverage", &["piece", "crossover"]);
            for c in &rep.crossovers {
                r.row(vec![c.tag.label().into(), c.alpha.to_string().into()]);
            }
            for (tag, interval) in &rep.admissible {
                r.note(format!("admissible_{}", tag.label()), interval.to_string());
            }
            let (mid, target) = common_denominator(&rep.middle_at_edge, &rep.target_at_edge);
            r.note("edge_alpha", "17/42");
            r.note("edge_middle_piece", mid);
            r.note("edge_target", target);
            r.note("grid_points", rep.grid_points);
            r.note("failures", rep.failures.len());
            r.note("COVERAGE", if rep.passed() { "PASS" } else { "FAIL" });
            Ok(r)
        }
    }
}

const ZETA_COLUMNS: [&str; 4] = ["t", "abs_zeta", "ratio_13_84", "abs_err"];

fn zeta(cmd: &ZetaCmd, ctx: &Context) -> Result<Report> {
    match cmd {
        ZetaCmd::Scan {
            t_min,
            t_max,
            points,
            constant,
        } => {
            let scan = if *constant {
                growth_scan_with(*t_min, *t_max, *points, ctx.seed, |_| {
                    Ok(ZetaValue {
                        re: 1.0,
                        im: 0.0,
                        abs_err: 0.0,
                    })
                })?
            } else {
                growth_scan(*t_min, *t_max, *points, ctx.seed)?
            };
            let mut r = Report::new("zeta scan", &ZETA_COLUMNS);
            for row in &scan.rows {
                r.row(vec![
                    row.t.into(),
                    row.abs_zeta.into(),
                    row.ratio_13_84.into(),
                    row.abs_err.into(),
                ]);
            }
            r.note("max_ratio", scan.max_ratio());
            r.note("argmax_t", scan.argmax());
            r.plot = Some(PlotSpec {
                x: "1",
                y: "3",
                xlabel: "t",
                ylabel: "|zeta(1/2+it)| / t^(13/84)",
                logx: true,
                logy: false,
            });
            Ok(r)
        }
        ZetaCmd::Value { t, terms } => {
            let terms = terms.unwrap_or_else(|| default_terms(*t));
            let z = zeta_em_oracle(*t, terms)?;
            let mut r = Report::new("zeta value", &["t", "terms", "re", "im", "abs", "abs_err"]);
            r.row(vec![
                (*t).into(),
                terms.into(),
                z.re.into(),
                z.im.into(),
                z.abs().into(),
                z.abs_err.into(),
            ]);
            Ok(r)
        }
        ZetaCmd::Afe { t, slack } => {
            let c = afe_consistency(*t, *slack)?;
            let mut r = Report::new(
                "zeta afe",
                &[
                    "t",
                    "main_sum_abs",
                    "slack",
                    "zeta_abs",
                    "zeta_err",
                    "holds",
                ],
            );
            r.row(vec![
                c.t.into(),
                c.main_sum_abs.into(),
                c.slack.into(),
                c.zeta_abs.into(),
                c.zeta_err.into(),
                c.holds.into(),
            ]);
            r.note("o1_constant", "unquantified");
            Ok(r)
        }
    }
}
