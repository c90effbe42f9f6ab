use std::io::Write;

use pspin_core::analytic::{
    agreement_identities, darmc_residual, first_level, gse as gse_value, partite_upper_bound,
    rate as rate_point, rate_domain_start, subag_solution,
};
use pspin_core::empirical::{
    alternating_max, brute_force_max, derive_seed, estimate_xi, estimate_xi_lower,
    sample_tensor_with_budget, tail_probability, Budget, EstimatorConfig, MaxMethod, McEstimate,
    TensorInstance,
};
use pspin_core::numerics::{find_root, Bracket, SolverConfig};
use pspin_core::{RatePoint, SpinSet};
use serde_json::{json, Value};

use crate::format::{fmt_num, round_sig, ReportRow};
use crate::{
    usage, AgreementArgs, CliError, EmpiricalArgs, EmpiricalMode, Format, GseArgs, MethodArg,
    RateArgs, P_LIMIT,
};

const TAG_MAX: u64 = 0x6d61_7800;

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round_sig(x))
    } else {
        Value::Null
    }
}

fn estimate(e: &McEstimate) -> Value {
    json!({ "mean": num(e.mean), "std_err": num(e.std_err), "samples": e.samples })
}

fn write_json(
    out: &mut dyn Write,
    params: Value,
    results: Value,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let doc = json!({ "params": params, "results": results, "seed": seed });
    let text = serde_json::to_string_pretty(&doc).map_err(std::io::Error::other)?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn check_p_range(p_min: u32, p_max: u32, floor: u32) -> Result<(), CliError> {
    if p_min < floor || p_min > p_max || p_max > P_LIMIT {
        return Err(usage(format!(
            "need {floor} <= p-min <= p-max <= {P_LIMIT}, got p-min = {p_min}, p-max = {p_max}"
        )));
    }
    Ok(())
}

pub(crate) fn gse(a: &GseArgs, out: &mut dyn Write) -> Result<(), CliError> {
    check_p_range(a.p_min, a.p_max, 2)?;
    let sets: Vec<SpinSet> = a.set.map_or(SpinSet::ALL.to_vec(), |s| vec![s]);
    let mut rows = Vec::new();
    for &set in &sets {
        for p in a.p_min..=a.p_max {
            rows.push(ReportRow::from(first_level(set, p)?));
            rows.push(ReportRow::from(gse_value(set, p)?));
        }
    }
    match a.format {
        Format::Csv => {
            writeln!(out, "{}", ReportRow::CSV_HEADER)?;
            for r in &rows {
                writeln!(out, "{}", r.to_csv())?;
            }
        }
        Format::Json => {
            let params =
                json!({ "set": a.set.map(|s| s.as_str()), "p_min": a.p_min, "p_max": a.p_max });
            write_json(out, params, json!(rows), None)?;
        }
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps)
        .map(|k| {
            if k + 1 == steps {
                hi
            } else {
                lo + h * k as f64
            }
        })
        .collect()
}

pub(crate) fn rate(a: &RateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if a.p < 2 || a.p > P_LIMIT {
        return Err(usage(format!("need 2 <= p <= {P_LIMIT}, got {}", a.p)));
    }
    if a.steps == 0 {
        return Err(usage("steps must be at least 1"));
    }
    let start = rate_domain_start(a.set, a.p)?;
    // the Ising domain is open at its left end
    let floor = match a.set {
        SpinSet::Spherical => start,
        SpinSet::Ising => start + 1e-9 * start.max(1.0),
    };
    let requested_from = a.u_from.unwrap_or(floor);
    let u_to = match a.u_to {
        Some(u) => u,
        None => gse_value(a.set, a.p)?.u_gs + 1.0,
    };
    let clipped = requested_from < floor;
    let u_from = requested_from.max(floor);
    if clipped {
        writeln!(
            err,
            "note: u-from {} clipped to the domain start {}",
            fmt_num(requested_from),
            fmt_num(u_from)
        )?;
    }
    if !(u_from <= u_to) || (a.steps > 1 && u_from == u_to) {
        return Err(usage(format!(
            "empty valid range: [{}, {}] after clipping to the domain start {}",
            fmt_num(u_from),
            fmt_num(u_to),
            fmt_num(floor)
        )));
    }

    let points: Vec<RatePoint> = linspace(u_from, u_to, a.steps)
        .into_iter()
        .map(|u| rate_point(a.set, a.p, u))
        .collect::<Result<_, _>>()?;

    let mut crossings = Vec::new();
    for w in points.windows(2) {
        let (l, r) = (&w[0], &w[1]);
        if l.phi == 0.0 {
            crossings.push((l.u, r.u, l.u));
        } else if l.phi * r.phi < 0.0 {
            let f = |u: f64| rate_point(a.set, a.p, u).map(|r| r.phi).unwrap_or(f64::NAN);
            let root = find_root(
                f,
                Bracket::from_values(l.u, r.u, l.phi, r.phi)?,
                &SolverConfig::default(),
            )?;
            crossings.push((l.u, r.u, root));
        }
    }
    if let Some(last) = points
        .last()
        .filter(|pt| pt.phi == 0.0 && points.len() == 1)
    {
        crossings.push((last.u, last.u, last.u));
    }
    for (lo, hi, root) in &crossings {
        writeln!(
            err,
            "note: phi changes sign in [{}, {}]; root at u = {}",
            fmt_num(*lo),
            fmt_num(*hi),
            fmt_num(*root)
        )?;
    }

    match a.format {
        Format::Csv => {
            writeln!(out, "p,u,phi,c3_hat")?;
            for pt in &points {
                writeln!(
                    out,
                    "{},{},{},{}",
                    pt.p,
                    fmt_num(pt.u),
                    fmt_num(pt.phi),
                    fmt_num(pt.c3_hat)
                )?;
            }
        }
        Format::Json => {
            let params = json!({
                "set": a.set.as_str(), "p": a.p, "u_from": num(u_from), "u_to": num(u_to),
                "steps": a.steps, "clipped": clipped, "requested_u_from": num(requested_from),
            });
            let pts: Vec<Value> = points
                .iter()
                .map(|pt| json!({ "u": num(pt.u), "phi": num(pt.phi), "c3_hat": num(pt.c3_hat) }))
                .collect();
            let signs: Vec<Value> = crossings
                .iter()
                .map(|(lo, hi, root)| json!({ "lo": num(*lo), "hi": num(*hi), "root": num(*root) }))
                .collect();
            write_json(
                out,
                params,
                json!({ "points": pts, "sign_changes": signs }),
                None,
            )?;
        }
    }
    Ok(())
}

pub(crate) fn agreement(a: &AgreementArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.p_min < 3 {
        return Err(usage(format!(
            "p-min must be at least 3 (got {}): at p = 2 the condition E0 sqrt(p/(p-1)) >= 2 holds \
             with equality and the fixed point degenerates",
            a.p_min
        )));
    }
    check_p_range(a.p_min, a.p_max, 3)?;
    let mut rows = Vec::new();
    for p in a.p_min..=a.p_max {
        let u = gse_value(SpinSet::Spherical, p)?.u_gs;
        let sol = subag_solution(p)?;
        let darmc = darmc_residual(p, u)?.abs();
        let (i1, i2) = agreement_identities(p)?;
        rows.push([
            p as f64,
            sol.e_star,
            u,
            (sol.e_star - u).abs(),
            darmc,
            i1,
            i2,
        ]);
    }
    const COLS: [&str; 7] = [
        "p",
        "e_star",
        "u_gs",
        "abs_diff",
        "darmc_residual",
        "identity1_residual",
        "identity2_residual",
    ];
    match a.format {
        Format::Csv => {
            writeln!(out, "{}", COLS.join(","))?;
            for r in &rows {
                let fields: Vec<String> = std::iter::once(format!("{}", r[0] as u32))
                    .chain(r[1..].iter().map(|x| fmt_num(*x)))
                    .collect();
                writeln!(out, "{}", fields.join(","))?;
            }
        }
        Format::Json => {
            let results: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut m = serde_json::Map::new();
                    m.insert(COLS[0].into(), json!(r[0] as u32));
                    for (c, x) in COLS[1..].iter().zip(&r[1..]) {
                        m.insert((*c).into(), num(*x));
                    }
                    Value::Object(m)
                })
                .collect();
            write_json(
                out,
                json!({ "p_min": a.p_min, "p_max": a.p_max }),
                json!(results),
                None,
            )?;
        }
    }
    Ok(())
}

fn budget(a: &EmpiricalArgs) -> Budget {
    let d = Budget::default();
    Budget {
        evals: a.budget_evals.unwrap_or(d.evals),
        entries: a.budget_entries.unwrap_or(d.entries),
    }
}

fn method(a: &EmpiricalArgs) -> Result<MaxMethod, CliError> {
    match (a.method, a.set) {
        (Some(MethodArg::Brute), SpinSet::Spherical) => Err(usage(
            "--method brute needs --set ising; the sphere has no finite enumeration",
        )),
        (Some(MethodArg::Brute), _) | (None, SpinSet::Ising) => Ok(MaxMethod::BruteForce),
        (Some(MethodArg::Alternating), _) | (None, SpinSet::Spherical) => {
            Ok(MaxMethod::Alternating)
        }
    }
}

pub(crate) fn empirical(
    a: &EmpiricalArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    if a.p < 2 || a.n < 1 {
        return Err(usage(format!(
            "need p >= 2 and n >= 1, got p = {}, n = {}",
            a.p, a.n
        )));
    }
    if !(a.c3 >= 0.0) || !a.c3.is_finite() {
        return Err(usage(format!("c3 must be finite and >= 0, got {}", a.c3)));
    }
    if a.restarts == 0 {
        return Err(usage("restarts must be at least 1"));
    }
    let method = method(a)?;
    let cfg = EstimatorConfig {
        budget: budget(a),
        method: Some(method),
        restarts: a.restarts,
        ..Default::default()
    };
    let params = json!({
        "mode": format!("{:?}", a.mode).to_lowercase(),
        "p": a.p, "n": a.n, "set": a.set.as_str(), "c3": num(a.c3), "samples": a.samples,
        "method": method.as_str(), "restarts": a.restarts, "u": num(a.u),
        "budget_evals": cfg.budget.evals.to_string(), "budget_entries": cfg.budget.entries.to_string(),
    });
    let results = match a.mode {
        EmpiricalMode::Max => empirical_max(a, method, &cfg.budget)?,
        EmpiricalMode::Sandwich => empirical_sandwich(a, &cfg, err)?,
        EmpiricalMode::Tail => empirical_tail(a, &cfg)?,
    };
    write_json(out, params, results, Some(a.seed))
}

fn empirical_max(a: &EmpiricalArgs, method: MaxMethod, budget: &Budget) -> Result<Value, CliError> {
    let sets = vec![a.set; a.p as usize];
    let tensors: Vec<TensorInstance> = match &a.entries {
        Some(entries) => vec![TensorInstance::from_entries(a.p, a.n, entries.clone())?],
        None => {
            if a.samples < 1 {
                return Err(usage("samples must be at least 1"));
            }
            (0..a.samples)
                .map(|i| {
                    sample_tensor_with_budget(a.p, a.n, derive_seed(a.seed, TAG_MAX, i), budget)
                })
                .collect::<Result<_, _>>()?
        }
    };
    let mut values = Vec::with_capacity(tensors.len());
    let mut converged = true;
    for (i, t) in tensors.iter().enumerate() {
        let r = match method {
            MaxMethod::BruteForce => brute_force_max(t, &sets, budget)?,
            _ => alternating_max(
                t,
                &sets,
                a.restarts,
                derive_seed(a.seed, TAG_MAX + 1, i as u64),
            )?,
        };
        converged &= r.converged;
        values.push(r.value);
    }
    let summary = (values.len() >= 2).then(|| McEstimate::from_samples(&values, a.seed));
    let root_n = (a.n as f64).sqrt();
    Ok(json!({
        "values": values.iter().map(|v| num(*v)).collect::<Vec<_>>(),
        "mean": summary.map_or(num(values[0]), |s| num(s.mean)),
        "std_err": summary.map_or(Value::Null, |s| num(s.std_err)),
        "mean_over_sqrt_n": num(values.iter().sum::<f64>() / values.len() as f64 / root_n),
        "converged": converged,
        "exact": method == MaxMethod::BruteForce,
        "source": if a.entries.is_some() { "entries" } else { "sampled" },
    }))
}

fn empirical_sandwich(
    a: &EmpiricalArgs,
    cfg: &EstimatorConfig,
    err: &mut dyn Write,
) -> Result<Value, CliError> {
    if !(a.c3 > 0.0) {
        return Err(usage("sandwich needs c3 > 0"));
    }
    let mid = estimate_xi(a.p, a.n, a.set, a.c3, a.samples, a.seed, cfg)?;
    let lower = if a.p.is_multiple_of(2) {
        Some(estimate_xi_lower(
            a.p,
            a.n,
            a.set,
            a.c3,
            a.samples,
            derive_seed(a.seed, 1, 0),
            cfg,
        )?)
    } else {
        writeln!(
            err,
            "note: the lower estimate needs even p; reporting mid and upper only"
        )?;
        None
    };
    let upper = partite_upper_bound(a.p, a.n, a.c3, a.set)?;
    let upper_ok = mid.mean <= upper + 3.0 * mid.std_err;
    let lower_ok = lower.is_none_or(|l| l.mean <= mid.mean + 3.0 * l.std_err.hypot(mid.std_err));
    Ok(json!({
        "lower": lower.as_ref().map(estimate),
        "mid": estimate(&mid),
        "upper": num(upper),
        "ordered_within_3se": lower_ok && upper_ok,
        "heuristic": a.set == SpinSet::Spherical,
    }))
}

fn empirical_tail(a: &EmpiricalArgs, cfg: &EstimatorConfig) -> Result<Value, CliError> {
    let t = tail_probability(a.p, a.n, a.set, a.u, a.samples, a.seed, cfg)?;
    let analytic = rate_point(a.set, a.p, a.u).ok().map(|r| num(r.phi));
    Ok(json!({
        "probability": num(t.probability.mean),
        "std_err": num(t.probability.std_err),
        "hits": t.hits,
        "log_rate": t.log_rate.map(num),
        "upper_bound": t.upper_bound.map(num),
        "log_rate_upper": t.log_rate_upper.map(num),
        "analytic_rate": analytic,
    }))
}
