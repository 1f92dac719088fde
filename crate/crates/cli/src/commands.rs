//! Execution of a [`RunConfig`] into an [`Artifact`].

use std::sync::Arc;

use num_traits::Zero;
use serde_json::json;
use tempered::algebra::{associated, default_probes, moderation_class, symmetric_product, AssocFit, FourierBackend};
use tempered::precision::PrecisionGuard;
use tempered::scalar::{c_is_finite, parse_rational};
use tempered::stochastic::{
    dynkin_residual, heat_evolve, heat_residual, ito_experiment, tanaka_experiment, PiecewiseLinear, ProcessKind,
    ProcessSpec, RunRow,
};
use tempered::{rate, Basis, BigComplex, BigFloat, Direction, Gps, PrecisionContext, Rate, Real, Region, Side};

use crate::artifact::Artifact;
use crate::config::{Backend, Command, Common, Dir, RunConfig};
use crate::error::{CliError, CliResult};
use crate::expr::{parse_expr, parse_stream};

type B = BigFloat;

struct Ctx {
    basis: Arc<Basis>,
    _guard: PrecisionGuard,
}

fn setup(common: &Common, max_order: usize) -> CliResult<Ctx> {
    let guard = PrecisionContext::new(common.prec_bits)?.enter_for_order(max_order);
    let basis = Basis::new(common.cap);
    basis.cap_check(max_order)?;
    Ok(Ctx { basis, _guard: guard })
}

fn rational(s: &str, what: &str) -> CliResult<Rate> {
    parse_rational(s).ok_or_else(|| CliError::usage(format!("{what}: {s:?} is not a number")))
}

fn real(s: &str, what: &str) -> CliResult<B> {
    Ok(B::of_ratio(&rational(s, what)?))
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| CliError::usage(format!("{what}: bad entry {p:?}"))))
        .collect::<CliResult<Vec<T>>>()?;
    if v.is_empty() {
        return Err(CliError::usage(format!("{what} is empty")));
    }
    Ok(v)
}

fn finite(v: f64, what: &str) -> CliResult<String> {
    if v.is_finite() {
        Ok(v.to_string())
    } else {
        Err(tempered::Error::NonFinite(what.into()).into())
    }
}

fn complex(c: &BigComplex, what: &str) -> CliResult<[String; 2]> {
    if !c_is_finite(c) {
        return Err(tempered::Error::NonFinite(what.into()).into());
    }
    Ok([c.re.to_decimal(), c.im.to_decimal()])
}

/// `lo:hi:points`, evenly spaced and exact in the rationals.
fn grid(s: &str) -> CliResult<Vec<B>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, k] = parts[..] else {
        return Err(CliError::usage(format!("grid {s:?} is not lo:hi:points")));
    };
    let (lo, hi) = (rational(lo, "grid")?, rational(hi, "grid")?);
    let k: i64 = k.parse().ok().filter(|k| *k >= 1).ok_or_else(|| CliError::usage("grid needs at least one point"))?;
    if k == 1 {
        return Ok(vec![B::of_ratio(&lo)]);
    }
    let step = (hi - lo.clone()) / rate(k - 1, 1);
    Ok((0..k).map(|i| B::of_ratio(&(lo.clone() + step.clone() * rate(i, 1)))).collect())
}

/// `full`, `halfline:a:left|right` or `intervals:a:b,c:d,..`.
fn region(s: &str) -> CliResult<Region<B>> {
    let bad = || CliError::usage(format!("region {s:?} is not full, halfline:a:side or intervals:a:b,.."));
    if s == "full" {
        return Ok(Region::Full);
    }
    if let Some(rest) = s.strip_prefix("halfline:") {
        let (a, side) = rest.rsplit_once(':').ok_or_else(bad)?;
        let side = match side {
            "left" => Side::Left,
            "right" => Side::Right,
            _ => return Err(bad()),
        };
        return Ok(Region::half_line(real(a, "region")?, side));
    }
    let rest = s.strip_prefix("intervals:").ok_or_else(bad)?;
    let iv = rest
        .split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(bad)?;
            Ok((real(a, "region")?, real(b, "region")?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Region::intervals(iv)?)
}

/// `bm[:x0[:sigma]]`, `drift_bm:x0:mu:sigma`, `ou:x0:theta:mean:sigma`,
/// `deterministic:c0,c1,..` or a JSON process spec.
pub fn parse_process(s: &str, fv: Option<&str>) -> CliResult<ProcessSpec> {
    let mut spec: ProcessSpec = if s.trim_start().starts_with('{') {
        serde_json::from_str(s)?
    } else {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let nums = |want: usize| -> CliResult<Vec<f64>> {
            if rest.len() != want {
                return Err(CliError::usage(format!("process {name} takes {want} parameters, got {s:?}")));
            }
            rest.iter()
                .map(|p| p.parse::<f64>().map_err(|_| CliError::usage(format!("bad process parameter {p:?}"))))
                .collect()
        };
        let kind = match name {
            "bm" => {
                let mut p = vec![0.0, 1.0];
                for (i, v) in rest.iter().enumerate().take(2) {
                    p[i] = v.parse().map_err(|_| CliError::usage(format!("bad process parameter {v:?}")))?;
                }
                if rest.len() > 2 {
                    return Err(CliError::usage(format!("process bm takes at most 2 parameters, got {s:?}")));
                }
                ProcessKind::Bm { x0: p[0], sigma: p[1] }
            }
            "drift_bm" => {
                let p = nums(3)?;
                ProcessKind::DriftBm { x0: p[0], mu: p[1], sigma: p[2] }
            }
            "ou" => {
                let p = nums(4)?;
                ProcessKind::Ou { x0: p[0], theta: p[1], mean: p[2], sigma: p[3] }
            }
            "deterministic" => {
                let coeffs = list::<f64>(rest.first().copied().unwrap_or_default(), "deterministic coefficients")?;
                ProcessKind::Deterministic { coeffs }
            }
            _ => return Err(CliError::usage(format!("unknown process {s:?}"))),
        };
        ProcessSpec::new(kind)?
    };
    if let Some(fv) = fv {
        let knots = fv
            .split(',')
            .map(|k| {
                let (t, v) = k.split_once(':').ok_or_else(|| CliError::usage(format!("bad knot {k:?}")))?;
                let num = |x: &str| x.parse::<f64>().map_err(|_| CliError::usage(format!("bad knot {k:?}")));
                Ok((num(t)?, num(v)?))
            })
            .collect::<CliResult<Vec<_>>>()?;
        spec = spec.with_fv(PiecewiseLinear::new(knots)?);
    }
    Ok(spec)
}

fn grid_table(f: &Gps, xs: &[B]) -> CliResult<Artifact> {
    let mut a = Artifact::new(&["x", "value", "imag"]);
    for x in xs {
        let [re, im] = complex(&f.eval(x), "representative value")?;
        a.push(vec![x.to_decimal(), re, im]);
    }
    a.result = json!({ "representative": serde_json::to_value(f)? });
    Ok(a)
}

fn number_table(values: &[BigComplex], from: usize) -> CliResult<Artifact> {
    let mut a = Artifact::new(&["n", "value", "imag"]);
    for (i, v) in values.iter().enumerate() {
        let [re, im] = complex(v, "tempered number")?;
        a.push(vec![(from + i).to_string(), re, im]);
    }
    Ok(a)
}

fn run_row(r: &RunRow) -> CliResult<Vec<String>> {
    Ok(vec![
        r.n.to_string(),
        finite(r.dt, "dt")?,
        r.paths.to_string(),
        finite(r.residual_rms, "residual")?,
        finite(r.residual_max, "residual")?,
        finite(r.stderr, "residual")?,
    ])
}

const RUN_COLUMNS: [&str; 6] = ["n", "dt", "paths", "residual_rms", "residual_max", "stderr"];

fn levels(given: Option<&str>, order: usize) -> CliResult<Vec<usize>> {
    given.map_or(Ok(vec![order]), |s| list(s, "levels"))
}

/// Runs `config` and returns its table.
pub fn execute(config: &RunConfig) -> CliResult<Artifact> {
    let common = &config.common;
    let order = common.order;
    match &config.run {
        Command::Coeffs { dist } => {
            let ctx = setup(common, order)?;
            let stream = parse_stream(dist, &ctx.basis)?;
            let coeffs = stream.prefix(order)?;
            let mut a = Artifact::new(&["n", "value", "imag"]);
            for (n, c) in coeffs.values.iter().enumerate() {
                let [re, im] = complex(c, "coefficient")?;
                a.push(vec![n.to_string(), re, im]);
            }
            a.result = json!({ "stream": stream.label(), "descriptor": stream.descriptor() });
            Ok(a)
        }
        Command::EmbedEval { expr, grid: g } => {
            let ctx = setup(common, order)?;
            let f = parse_expr(expr, &ctx.basis)?.at(order)?;
            grid_table(&f, &grid(g)?)
        }
        Command::Product { lhs, rhs, grid: g } => {
            let ctx = setup(common, order)?;
            let p = parse_expr(lhs, &ctx.basis)?.mul(&parse_expr(rhs, &ctx.basis)?).at(order)?;
            let mut a = grid_table(&p, &grid(g)?)?;
            let total = complex(&p.integral(&Region::Full), "integral")?;
            a.result["integral"] = json!(total);
            Ok(a)
        }
        Command::Fourier { expr, backend, direction, grid: g } => {
            let ctx = setup(common, order)?;
            let backend = match backend {
                Backend::Analytic => FourierBackend::Analytic,
                Backend::Spectral => FourierBackend::Spectral(ctx.basis.clone()),
            };
            let direction = match direction {
                Dir::Forward => Direction::Forward,
                Dir::Inverse => Direction::Inverse,
            };
            let f = parse_expr(expr, &ctx.basis)?.fourier(direction, &backend)?.at(order)?;
            grid_table(&f, &grid(g)?)
        }
        Command::Integrate { expr, region: r, from } => {
            let ctx = setup(common, order)?;
            let t = parse_expr(expr, &ctx.basis)?.integrate(&region(r)?);
            number_table(&t.prefix(*from..=order)?, *from)
        }
        Command::Pointvalue { expr, at, from } => {
            let ctx = setup(common, order)?;
            let t = parse_expr(expr, &ctx.basis)?.point_value(&real(at, "at")?);
            number_table(&t.prefix(*from..=order)?, *from)
        }
        Command::Associate { lhs, rhs, probes, assoc_tol } => {
            let ctx = setup(common, order.max(*probes))?;
            let (f, g) = (parse_expr(lhs, &ctx.basis)?, parse_expr(rhs, &ctx.basis)?);
            let probes = default_probes(&ctx.basis, *probes, common.seed)?;
            let report = associated(&f, &g, &probes, order, &AssocFit { assoc_tol: *assoc_tol })?;
            let mut a = Artifact::new(&["n", "probe", "value", "imag"]);
            for n in 0..=order {
                for (label, seq) in report.probe_labels.iter().zip(&report.pairings) {
                    let [re, im] = complex(&seq[n], "pairing")?;
                    a.push(vec![n.to_string(), label.clone(), re, im]);
                }
            }
            a.result = report.to_json();
            Ok(a)
        }
        Command::Moderation { expr, m } => {
            let ctx = setup(common, order)?;
            let verdict = moderation_class(&parse_expr(expr, &ctx.basis)?, *m, order)?;
            let mut a = Artifact::new(&["n", "log_norm"]);
            for (n, l) in verdict.diagnostics.log_norms.iter().enumerate() {
                let cell = match l {
                    Some(v) => finite(*v, "log norm")?,
                    None => "-inf".into(),
                };
                a.push(vec![n.to_string(), cell]);
            }
            a.result = verdict.to_json();
            Ok(a)
        }
        Command::Symprod { lhs, rhs, kmax } => {
            let ctx = setup(common, order.max(*kmax))?;
            let (s, t) = (parse_stream(lhs, &ctx.basis)?, parse_stream(rhs, &ctx.basis)?);
            let report = symmetric_product(&s, &t, &ctx.basis, *kmax, order)?;
            let mut a = Artifact::new(&["n", "k", "value", "imag"]);
            for n in 0..=order {
                for d in &report.diagnostics {
                    let [re, im] = complex(&d.values[n], "product coefficient")?;
                    a.push(vec![n.to_string(), d.k.to_string(), re, im]);
                }
            }
            a.result = report.to_json();
            Ok(a)
        }
        Command::Ito { expr, process, fv, t_end, dt, paths, levels: lv } => {
            let spec = parse_process(process, fv.as_deref())?;
            let lv = levels(lv.as_deref(), order)?;
            let dts = list::<f64>(dt, "dt")?;
            let ctx = setup(common, *lv.iter().max().expect("non-empty"))?;
            let f = parse_expr(expr, &ctx.basis)?;
            let mut a = Artifact::new(&RUN_COLUMNS);
            let mut ratios = Vec::new();
            for &n in &lv {
                let mut rms = Vec::new();
                for &h in &dts {
                    let res = ito_experiment(&f, n, &spec, *t_end, h, *paths, common.seed, &ctx.basis)?;
                    let row = RunRow::from_residuals(n, h, &res);
                    rms.push(row.residual_rms);
                    a.push(run_row(&row)?);
                }
                let r: Vec<String> = rms.windows(2).map(|w| (w[0] / w[1]).to_string()).collect();
                ratios.push(json!({ "n": n, "rms_ratios": r }));
            }
            a.result = json!({ "process": spec, "seed": common.seed, "levels": ratios });
            Ok(a)
        }
        Command::Tanaka { a: level_a, process, fv, t_end, dt, paths, levels: lv } => {
            let spec = parse_process(process, fv.as_deref())?;
            let lv = list::<usize>(lv, "levels")?;
            let ctx = setup(common, *lv.iter().max().expect("non-empty"))?;
            let point = real(level_a, "a")?;
            let mut cols = RUN_COLUMNS.to_vec();
            cols.extend(["mean_abs_residual", "mean_local_time"]);
            let mut a = Artifact::new(&cols);
            for &n in &lv {
                let terms = tanaka_experiment(&point, n, &spec, *t_end, *dt, *paths, common.seed, &ctx.basis)?;
                let res: Vec<f64> = terms.iter().map(|t| t.residual()).collect();
                let m = res.len() as f64;
                let mut row = run_row(&RunRow::from_residuals(n, *dt, &res))?;
                row.push(finite(res.iter().map(|r| r.abs()).sum::<f64>() / m, "residual")?);
                row.push(finite(terms.iter().map(|t| t.local_time).sum::<f64>() / m, "local time")?);
                a.push(row);
            }
            a.result = json!({ "process": spec, "seed": common.seed, "a": level_a });
            Ok(a)
        }
        Command::Dynkin { expr, x, t, paths, dt, levels: lv } => {
            let lv = levels(lv.as_deref(), order)?;
            let ctx = setup(common, *lv.iter().max().expect("non-empty"))?;
            let f = parse_expr(expr, &ctx.basis)?;
            let d = dynkin_residual(&f, *x, *t, *paths, *dt, common.seed, &ctx.basis)?;
            let mut a = Artifact::new(&["n", "residual", "stderr"]);
            for &n in &lv {
                let v = d.at(n)?;
                a.push(vec![n.to_string(), finite(v.mean, "dynkin defect")?, finite(v.stderr, "stderr")?]);
            }
            a.result = json!({ "process": ProcessSpec::brownian(*x), "seed": common.seed });
            Ok(a)
        }
        Command::Heat { expr, times, xs } => {
            let ctx = setup(common, order)?;
            let h = heat_evolve(&parse_expr(expr, &ctx.basis)?);
            let times = times.split(',').map(|t| rational(t, "times")).collect::<CliResult<Vec<_>>>()?;
            let xs = xs.split(',').map(|x| real(x, "xs")).collect::<CliResult<Vec<_>>>()?;
            let mut a = Artifact::new(&["t", "x", "value", "imag", "residual"]);
            for t in &times {
                let g = h.at(order, t)?;
                for x in &xs {
                    let [re, im] = complex(&g.eval(x), "heat value")?;
                    let residual = if t.is_zero() {
                        String::new()
                    } else {
                        heat_residual(&h, t, x, order)?.to_decimal()
                    };
                    a.push(vec![B::of_ratio(t).to_decimal(), x.to_decimal(), re, im, residual]);
                }
            }
            Ok(a)
        }
        Command::Replay { .. } => Err(CliError::usage("a replay config cannot itself be replayed")),
    }
}

/// The rendered artifact of `config`.
pub fn render(config: &RunConfig) -> CliResult<String> {
    execute(config)?.render(config)
}
