//! One function per subcommand. Each fills the defaults it uses into the
//! config (so the output header shows the effective parameters) and returns
//! the result table, oracle values and checks.

use brickwork_core::analytics::{
    complexity_lower_bound, fidelity_extremal, gate_count_lower_bound, holographic_complexity, holographic_entropy,
    mi_continuity, mi_gate_bound, mi_profile, norm_extremal_onetwo, packing_design_bound, packing_fidelity_count,
    packing_full_bound, packing_rank_bound, prob_overlap_bound, thermalization_time, BoundReport, ExtremalRatio,
    Piecewise, Scale,
};
use brickwork_core::domainwall::{prop2_bounds, purity_exact};
use brickwork_core::memory_lab::{
    alternating_ring, memory_prediction, memory_samples, phase_boundary, Perturbation, Placement, WedgeRule,
};
use brickwork_core::projector_lab::{
    eigen_density_moment, fidelity_mean_analytic, fidelity_variance_analytic, greedy_packing, sample_fidelities,
};
use brickwork_core::qudit_sim::{
    ensemble_average, ensemble_profile, Boundary, CircuitGeometry, EntropyKind, IntervalSpec, Metric, DEFAULT_MEM_CAP,
};
use brickwork_core::rng_linalg::{sample_haar_unitary, UnitaryMatrix};
use brickwork_core::{EnsembleEstimate, Execution, RngStream};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::config::{BoundName, Command, DepthSpec, PerturbationKind, RunConfig};
use crate::error::CliError;
use crate::output::{Check, Outcome, Table};

type Result<T> = std::result::Result<T, CliError>;

const EXEC: Execution = Execution::Parallel;

pub fn execute(cfg: &mut RunConfig, seed: u64) -> Result<Outcome> {
    match cfg.command.expect("command set by the subcommand") {
        Command::Purity => purity(cfg, seed),
        Command::MiProfile => mi_profile_cmd(cfg, seed),
        Command::ProjectorStats => projector_stats(cfg, seed),
        Command::Packing => packing(cfg, seed),
        Command::Memory => memory(cfg, seed),
        Command::Bounds => bounds(cfg),
    }
}

fn int_dim(q: f64, name: &str, min: u64) -> Result<u64> {
    if q.fract() != 0.0 || q < min as f64 || q > u32::MAX as f64 {
        return Err(CliError::invalid(format!("{name} must be an integer >= {min}, got {q}")));
    }
    Ok(q as u64)
}

fn need<T>(v: Option<T>, name: &str, bound: BoundName) -> Result<T> {
    v.ok_or_else(|| {
        let b = serde_json::to_value(bound).unwrap_or_default();
        CliError::invalid(format!("bound {} needs --{}", b.as_str().unwrap_or("?"), name.replace('_', "-")))
    })
}

fn num(x: f64) -> Value {
    // Non-finite values have no JSON number; they are written as strings.
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}

fn opt(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

fn estimate_json(e: &EnsembleEstimate) -> Value {
    json!({ "mean": num(e.mean), "stderr": num(e.stderr), "trials": e.trials })
}

fn ring(cfg: &RunConfig, dims: Vec<usize>) -> Result<CircuitGeometry> {
    Ok(CircuitGeometry::new(dims, Boundary::Ring)?.with_mem_cap(cfg.mem_cap.unwrap_or(DEFAULT_MEM_CAP)))
}

fn interval(cfg: &RunConfig, g: &CircuitGeometry, t: usize, ell: usize) -> Result<IntervalSpec> {
    let iv = match cfg.interval_start {
        Some(s) => IntervalSpec::new(s, ell),
        None => IntervalSpec::aligned(g, t, ell)?,
    };
    iv.validate(g, t)?;
    Ok(iv)
}

fn purity(cfg: &mut RunConfig, seed: u64) -> Result<Outcome> {
    let q = int_dim(*cfg.q.get_or_insert(2.0), "q", 1)?;
    let ell = *cfg.interval_len.get_or_insert(4);
    let depths = cfg.depth.get_or_insert(DepthSpec::Range(0, 3)).values();
    let trials = *cfg.trials.get_or_insert(0);
    let allow = *cfg.allow_lightcone.get_or_insert(false);
    let t_max = depths.iter().copied().max().unwrap_or(0);
    let geometry = if trials > 0 {
        if q < 2 {
            return Err(CliError::invalid("Monte Carlo needs q >= 2"));
        }
        cfg.mem_cap.get_or_insert(DEFAULT_MEM_CAP);
        let l = *cfg.sites.get_or_insert(ell + 2 * t_max + 2);
        Some(ring(cfg, vec![q as usize; l])?)
    } else {
        None
    };
    let mut table = Table::new(&["T", "exact", "exact_rational", "lower", "upper", "sandwich", "mc_mean", "mc_stderr"]);
    let mut checks = Vec::new();
    let mut oracle = Map::new();
    let floor = BigRational::new(1.into(), BigInt::from(q).pow(ell as u32));
    for &t in &depths {
        let p = purity_exact(q, ell as u64, t as u64)?;
        let exact = p.exact.clone().expect("integer q gives an exact value");
        let b = prop2_bounds(q, ell as u64, t as u64)?;
        let in_bounds = b.contains(&(&exact - &floor));
        checks.push(Check::new(format!("T={t} sandwich"), in_bounds, "lower <= P - q^-l <= upper"));
        oracle.insert(format!("T={t}"), num(p.value));
        let mut mc = (Value::Null, Value::Null);
        if let Some(g) = &geometry {
            let l = g.sites();
            if l < ell + 2 * t + 2 && !allow {
                return Err(CliError::invalid(format!(
                    "ring of {l} sites is not lightcone-free for l={ell}, T={t} (need L >= {}); pass --allow-lightcone to override",
                    ell + 2 * t + 2
                )));
            }
            let iv = interval(cfg, g, t, ell)?;
            let est = ensemble_average(Metric::Purity, g, &iv, t, trials, &RngStream::new(seed).child(t as u64), EXEC)?;
            checks.push(Check::new(
                format!("T={t} mc within 4 stderr"),
                est.within(p.value, 4.0),
                format!("|{} - {}| vs 4 x {}", est.mean, p.value, est.stderr),
            ));
            mc = (num(est.mean), num(est.stderr));
        }
        table.push(vec![
            json!(t),
            num(p.value),
            json!(exact.to_string()),
            num(b.lower_f64()),
            num(b.upper_f64()),
            json!(in_bounds),
            mc.0,
            mc.1,
        ]);
    }
    Ok(Outcome { table, oracle: json!({ "purity_exact": oracle }), summary: Value::Null, checks })
}

fn mi_profile_cmd(cfg: &mut RunConfig, seed: u64) -> Result<Outcome> {
    let q = int_dim(*cfg.q.get_or_insert(6.0), "q", 2)?;
    let l = *cfg.sites.get_or_insert(8);
    let ell = *cfg.interval_len.get_or_insert(4);
    let depths = cfg.depth.get_or_insert(DepthSpec::List(vec![1])).values();
    let trials = *cfg.trials.get_or_insert(100);
    let kind = *cfg.entropy.get_or_insert(EntropyKind::Renyi2);
    cfg.mem_cap.get_or_insert(DEFAULT_MEM_CAP);
    let g = ring(cfg, vec![q as usize; l])?;
    let lq = (q as f64).ln();
    let mut table = Table::new(&["T", "x", "mi_mean", "mi_stderr", "mi_nats", "analytic"]);
    let mut checks = Vec::new();
    let mut oracle = Map::new();
    for &t in &depths {
        let iv = interval(cfg, &g, t, ell)?;
        let metrics: Vec<Metric> = (0..=ell).map(|x| Metric::MutualInformation { cut: x, kind }).collect();
        let est = ensemble_profile(&metrics, &g, &iv, t, trials, &RngStream::new(seed).child(t as u64), EXEC)?;
        let mut analytic = Vec::new();
        for (x, e) in est.iter().enumerate() {
            let a = mi_profile(x as u64, t as u64, ell as u64)?;
            analytic.push(a);
            table.push(vec![json!(t), json!(x), num(e.mean / lq), num(e.stderr / lq), num(e.mean), num(a)]);
        }
        oracle.insert(format!("T={t}"), json!(analytic));
        for x in [0, ell] {
            checks.push(Check::new(format!("T={t} x={x} vanishes"), est[x].mean.abs() < 1e-10, format!("{}", est[x].mean)));
        }
        for x in 1..ell / 2 + usize::from(ell % 2 == 1) {
            let (a, b) = (&est[x], &est[ell - x]);
            checks.push(Check::new(
                format!("T={t} symmetric x={x}"),
                (a.mean - b.mean).abs() <= 4.0 * a.joint_stderr(b) + 1e-12,
                format!("{} vs {}", a.mean, b.mean),
            ));
        }
    }
    Ok(Outcome { table, oracle: json!({ "trapezoid_log_q": oracle }), summary: Value::Null, checks })
}

const BUCKETS: [&str; 10] = ["h0", "h1", "h2", "h3", "h4", "h5", "h6", "h7", "h8", "h9"];

fn projector_stats(cfg: &mut RunConfig, seed: u64) -> Result<Outcome> {
    let d = *cfg.d.get_or_insert(128);
    let r = *cfg.r.get_or_insert(8);
    let pairs = *cfg.pairs.get_or_insert(500);
    if pairs == 0 {
        return Err(CliError::invalid("pairs must be positive"));
    }
    let samples = sample_fidelities(d, r, pairs, &RngStream::new(seed), EXEC)?;
    let mut columns = vec!["pair", "fidelity", "lambda_min", "lambda_max"];
    columns.extend(BUCKETS);
    let mut table = Table::new(&columns);
    for (i, s) in samples.iter().enumerate() {
        let mut hist = [0u64; 10];
        for &l in &s.eigenvalues {
            hist[((l * 10.0) as usize).min(9)] += 1;
        }
        let mut row = vec![
            json!(i),
            num(s.fidelity),
            num(s.eigenvalues.first().copied().unwrap_or(0.0)),
            num(s.eigenvalues.last().copied().unwrap_or(0.0)),
        ];
        row.extend(hist.iter().map(|h| json!(h)));
        table.push(row);
    }
    let fs: Vec<f64> = samples.iter().map(|s| s.fidelity).collect();
    let est = EnsembleEstimate::from_samples(&fs, seed);
    let w = r as f64 / d as f64;
    let mut checks = Vec::new();
    let mut oracle = json!({ "w": num(w) });
    if w <= 0.5 {
        let mean = fidelity_mean_analytic(w)?;
        let var = fidelity_variance_analytic(w, r)?;
        oracle["mean"] = num(mean);
        oracle["variance"] = num(var);
        checks.push(Check::new("mean within 4 stderr", est.within(mean, 4.0), format!("{} vs {mean}", est.mean)));
        if pairs >= 200 {
            checks.push(Check::new(
                "variance within 30%",
                (est.variance() / var - 1.0).abs() <= 0.3,
                format!("{} vs {var}", est.variance()),
            ));
        }
        if w < 0.5 {
            oracle["half_moment_quadrature"] = num(eigen_density_moment(w, 0.5)?);
            let edge = 4.0 * w * (1.0 - w) + 0.1;
            if d >= 256 {
                let inside = samples.iter().flat_map(|s| &s.eigenvalues).all(|&l| l <= edge);
                checks.push(Check::new("spectral edge", inside, format!("all eigenvalues <= {edge}")));
            }
        }
    }
    let summary = json!({ "fidelity": estimate_json(&est), "variance": num(est.variance()) });
    Ok(Outcome { table, oracle, summary, checks })
}

fn packing(cfg: &mut RunConfig, seed: u64) -> Result<Outcome> {
    let d = *cfg.d.get_or_insert(32);
    let r = *cfg.r.get_or_insert(2);
    let eps = *cfg.eps.get_or_insert(0.5);
    let draws = *cfg.max_draws.get_or_insert(2000);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let res = greedy_packing(d, r, eps, draws, &RngStream::new(seed), EXEC)?;
    let mut table = Table::new(&["state", "draw"]);
    for (i, &draw) in res.accepted.iter().enumerate() {
        table.push(vec![json!(i), json!(draw)]);
    }
    let bound = packing_fidelity_count(r as u64, d as u64, eps);
    let checks = vec![Check::new(
        "pairwise audit",
        res.count <= 1 || res.max_pairwise_fidelity < eps,
        format!("max pairwise fidelity {}", res.max_pairwise_fidelity),
    )];
    let summary = json!({ "count": res.count, "draws": res.draws, "max_pairwise_fidelity": num(res.max_pairwise_fidelity) });
    Ok(Outcome { table, oracle: json!({ "ln_count_estimate": bound }), summary, checks })
}

fn memory(cfg: &mut RunConfig, seed: u64) -> Result<Outcome> {
    let q = int_dim(*cfg.q.get_or_insert(2.0), "q", 2)? as usize;
    let big_q = int_dim(*cfg.big_q.get_or_insert(6) as f64, "bigQ", 2)? as usize;
    let l = *cfg.sites.get_or_insert(8);
    let ell = *cfg.interval_len.get_or_insert(4);
    let t = cfg.depth.get_or_insert(DepthSpec::List(vec![1])).single()?;
    let trials = *cfg.trials.get_or_insert(300);
    let kind = *cfg.perturbation.get_or_insert(PerturbationKind::Clock);
    cfg.mem_cap.get_or_insert(DEFAULT_MEM_CAP);
    let g = alternating_ring(q, big_q, l)?.with_mem_cap(cfg.mem_cap.unwrap_or(DEFAULT_MEM_CAP));
    if t == 0 {
        return Err(CliError::invalid("memory needs depth >= 1"));
    }
    let iv = interval(cfg, &g, t, ell)?;
    let rule = WedgeRule::new(iv, t);
    let (layer, bond) = match (cfg.layer, cfg.bond) {
        (Some(layer), Some(bond)) => (layer, bond),
        (None, None) => {
            let want = *cfg.placement.get_or_insert(Placement::Inside);
            find_brick(&g, &rule, t, want)?
                .ok_or_else(|| CliError::invalid(format!("no {want:?} brick for this interval and depth").to_lowercase()))?
        }
        _ => return Err(CliError::invalid("--layer and --bond go together")),
    };
    let dim = {
        let (a, b) = g.bond_sites(bond)?;
        g.site_dims()[a] * g.site_dims()[b]
    };
    let v = match kind {
        PerturbationKind::Clock => UnitaryMatrix::clock(dim),
        PerturbationKind::Identity => UnitaryMatrix::identity(dim),
        PerturbationKind::Haar => sample_haar_unitary(dim, &RngStream::new(seed).child(u64::MAX))?,
    };
    let p = Perturbation::new(layer, bond, v);
    let placement = p.placement(&g, &iv, t)?;
    if let Some(want) = cfg.placement {
        if want != placement {
            return Err(CliError::invalid(format!("brick ({layer}, {bond}) is {placement:?}, not {want:?}").to_lowercase()));
        }
    }
    (cfg.layer, cfg.bond, cfg.placement) = (Some(layer), Some(bond), Some(placement));
    let xs = memory_samples(&g, &iv, t, &p, trials, &RngStream::new(seed), EXEC)?;
    let est = EnsembleEstimate::from_samples(&xs, seed);
    let boundary = phase_boundary(q as f64, big_q as f64, ell as f64)?;
    let late = 2.0 * t as f64 * (q as f64).ln() > ell as f64 / 2.0 * ((q * big_q) as f64).ln();
    let phase = if late { "late" } else { "early" };
    let prediction = memory_prediction(q, big_q, ell, t, placement, &p.v);
    let placement_name = serde_json::to_value(placement).unwrap_or_default();
    let mut table = Table::new(&["trial", "fidelity", "phase", "placement"]);
    for (i, f) in xs.iter().enumerate() {
        table.push(vec![json!(i), num(*f), json!(phase), placement_name.clone()]);
    }
    let mut checks = vec![Check::new(
        "fidelity in [0, 1]",
        xs.iter().all(|f| (0.0..=1.0 + 1e-8).contains(f)),
        "every trial",
    )];
    if kind == PerturbationKind::Identity {
        checks.push(Check::new("identity gives F = 1", xs.iter().all(|&f| f == 1.0), "every trial"));
    } else if let Some(pred) = prediction {
        if pred == 1.0 {
            checks.push(Check::new("mean F > 0.9", est.mean > 0.9, format!("{}", est.mean)));
        } else if pred < 1e-12 {
            checks.push(Check::new("mean F < 0.6", est.mean < 0.6, format!("{}", est.mean)));
        }
    }
    let oracle = json!({
        "phase_boundary": num(boundary),
        "prediction": opt(prediction),
        "trace_v_over_qQ": num(p.v.trace().norm() / dim as f64),
    });
    let summary = json!({ "fidelity": estimate_json(&est), "layer": layer, "bond": bond, "placement": placement_name, "phase": phase });
    Ok(Outcome { table, oracle, summary, checks })
}

/// First brick with the wanted placement, scanning from the top layer down.
fn find_brick(g: &CircuitGeometry, rule: &WedgeRule, depth: usize, want: Placement) -> Result<Option<(usize, usize)>> {
    for layer in (1..=depth).rev() {
        for (a, b) in g.layer_bonds(layer) {
            if rule.classify(g, layer, (a, b))? == want {
                return Ok(Some((layer, a)));
            }
        }
    }
    Ok(None)
}

fn report_row(r: &BoundReport) -> Vec<Value> {
    vec![json!(r.name), opt(r.value), serde_json::to_value(r.scale).unwrap_or_default(), json!(r.valid())]
}

fn plain(name: &str, inputs: &[(&str, f64)], value: f64) -> BoundReport {
    BoundReport {
        name: name.to_string(),
        inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        value: Some(value),
        scale: Scale::Linear,
        conditions: Vec::new(),
    }
}

fn piecewise(name: &str, inputs: &[(&str, f64)], p: Piecewise) -> (BoundReport, Value) {
    let extra = json!({ "early": num(p.early), "late": num(p.late), "at_transition": p.at_transition });
    (plain(name, inputs, p.value), extra)
}

fn extremal(name: &str, inputs: &[(&str, f64)], x: ExtremalRatio, checks: &mut Vec<Check>) -> (BoundReport, Value) {
    checks.push(Check::new(
        "computed ratio matches closed form",
        x.degenerate || (x.computed - x.closed_form).abs() < 1e-6,
        format!("{} vs {}", x.computed, x.closed_form),
    ));
    let extra = json!({ "closed_form": num(x.closed_form), "degenerate": x.degenerate });
    (plain(name, inputs, x.computed), extra)
}

fn bounds(cfg: &mut RunConfig) -> Result<Outcome> {
    let name = cfg.bound.ok_or_else(|| CliError::invalid("bounds needs --bound"))?;
    macro_rules! n {
        ($f:ident) => {
            need(cfg.$f.clone(), stringify!($f), name)?
        };
    }
    let mut checks = Vec::new();
    let (report, extra) = match name {
        BoundName::Thermalization => {
            let (q, ell, eps) = (n!(q), n!(interval_len) as f64, n!(eps));
            (plain("thermalization", &[("q", q), ("ell", ell), ("eps", eps)], thermalization_time(q, ell, eps)?), Value::Null)
        }
        BoundName::ProbOverlap => {
            let r = prob_overlap_bound(
                n!(k),
                n!(eps_design),
                n!(delta),
                n!(interval_len) as u64,
                n!(sites) as u64,
                n!(q),
            )?;
            (r, Value::Null)
        }
        BoundName::GateCount => {
            let r = gate_count_lower_bound(n!(time), n!(sites) as f64, n!(poly_exponent))?;
            (r, Value::Null)
        }
        BoundName::Complexity => {
            let (t, ell, eps) = (n!(time), n!(interval_len) as f64, n!(eps));
            (plain("complexity", &[("T", t), ("ell", ell), ("eps", eps)], complexity_lower_bound(t, ell, eps)?), Value::Null)
        }
        BoundName::MiGate => {
            let (m, q, eps, ell) =
                (n!(gates), n!(q), n!(eps), n!(interval_len) as f64);
            (plain("mi_gate", &[("m", m), ("q", q), ("eps", eps), ("ell", ell)], mi_gate_bound(m, q, eps, ell)?), Value::Null)
        }
        BoundName::MiContinuity => {
            let (eps, dm) = (n!(eps), n!(d_min));
            (plain("mi_continuity", &[("eps", eps), ("d_min", dm)], mi_continuity(eps, dm)?), Value::Null)
        }
        BoundName::HolographicComplexity => {
            let ell = n!(interval_len) as f64;
            let big_l = n!(sites) as f64;
            let (t, s, b) = (n!(time), n!(entropy_density), n!(inv_temp));
            let region = n!(region);
            let p = holographic_complexity(ell, big_l, t, s, b, region)?;
            piecewise("holographic_complexity", &[("ell", ell), ("L", big_l), ("T", t), ("s", s), ("beta", b)], p)
        }
        BoundName::HolographicEntropy => {
            let ell = n!(interval_len) as f64;
            let (t, s) = (n!(time), n!(entropy_density));
            piecewise("holographic_entropy", &[("ell", ell), ("T", t), ("s", s)], holographic_entropy(ell, t, s)?)
        }
        BoundName::PackingDesign => {
            let r = packing_design_bound(
                n!(k),
                n!(d) as u64,
                n!(alpha),
                n!(beta),
                n!(eps_design),
            );
            (r, Value::Null)
        }
        BoundName::PackingFull => (packing_full_bound(n!(d) as u64, n!(alpha), n!(beta)), Value::Null),
        BoundName::PackingRank => {
            (packing_rank_bound(n!(r) as u64, n!(d) as u64, n!(eps)), Value::Null)
        }
        BoundName::PackingFidelity => {
            (packing_fidelity_count(n!(r) as u64, n!(d) as u64, n!(eps)), Value::Null)
        }
        BoundName::ExtremalNorm => {
            let (r, d, eps) = (n!(r), n!(d), n!(eps));
            let x = norm_extremal_onetwo(r, d, eps)?;
            extremal("norm_extremal", &[("r", r as f64), ("d", d as f64), ("eps", eps)], x, &mut checks)
        }
        BoundName::ExtremalFidelity => {
            let (d, eps) = (n!(d), n!(eps));
            extremal("fidelity_extremal", &[("d", d as f64), ("eps", eps)], fidelity_extremal(d, eps)?, &mut checks)
        }
        BoundName::Prop2 => {
            let q = int_dim(n!(q), "q", 1)?;
            let ell = n!(interval_len) as u64;
            let t = cfg.depth.as_ref().ok_or_else(|| CliError::invalid("bound prop2 needs --depth"))?.single()? as u64;
            let p = purity_exact(q, ell, t)?;
            let b = prop2_bounds(q, ell, t)?;
            let floor = BigRational::new(1.into(), BigInt::from(q).pow(ell as u32));
            let excess = p.exact.clone().expect("integer q") - floor;
            checks.push(Check::new("sandwich", b.contains(&excess), "lower <= P - q^-l <= upper"));
            let extra = json!({ "lower": num(b.lower_f64()), "upper": num(b.upper_f64()), "exact": p.exact.map(|e| e.to_string()) });
            (plain("purity", &[("q", q as f64), ("ell", ell as f64), ("T", t as f64)], p.value), extra)
        }
    };
    let mut table = Table::new(&["bound", "value", "scale", "valid"]);
    table.push(report_row(&report));
    Ok(Outcome { table, oracle: Value::Null, summary: json!({ "report": report, "detail": extra }), checks })
}
