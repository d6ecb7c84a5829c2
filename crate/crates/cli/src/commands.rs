//! Subcommand implementations.

use anyhow::anyhow;
use serde_json::{json, Value};

use spectra_core::criteria::{self, CriterionId, CriterionReport};
use spectra_core::geometry::{self, Configuration, Geometry};
use spectra_core::principal::{krein_correction, resolvent_kernel, PhiEvaluator};
use spectra_core::spectrum::{self, BoundState};

use crate::args::*;
use crate::output::{emit, fmt_f64, to_json_string};

/// Process exit codes: 0 success, 2 validation failure, 3 numerical failure.
pub struct CliFailure {
    pub code: i32,
    pub error: anyhow::Error,
}

pub type CliResult = Result<(), CliFailure>;

fn validation(err: impl Into<anyhow::Error>) -> CliFailure {
    CliFailure { code: 2, error: err.into() }
}

fn numerical(err: impl Into<anyhow::Error>) -> CliFailure {
    CliFailure { code: 3, error: err.into() }
}

fn classify(err: spectra_core::Error) -> CliFailure {
    use spectra_core::Error::*;
    match err {
        Domain { .. } | InvalidConfiguration(_) => validation(anyhow!(err.to_string())),
        _ => numerical(anyhow!(err.to_string())),
    }
}

fn build_config(cfg: &ConfigArgs) -> Result<(Geometry, Configuration), CliFailure> {
    let (geom, config) = cfg.build().map_err(validation)?;
    let violations = geometry::validate_configuration(&config, &geom);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(validation(anyhow!("invalid configuration: {}", lines.join("; "))));
    }
    Ok((geom, config))
}

fn geometry_json(geom: &Geometry) -> Value {
    serde_json::to_value(geom).expect("geometry serializes")
}

fn state_json(s: &BoundState) -> Value {
    json!({
        "location": s.location,
        "energy": s.energy,
        "multiplicity": s.multiplicity,
        "amplitudes": s.amplitudes,
        "normalization": s.normalization,
        "det_residual": s.det_residual,
    })
}

pub fn run_spectrum(args: &SpectrumArgs) -> CliResult {
    let (geom, cfg) = build_config(&args.config)?;
    let tol = args.tol.unwrap_or_else(|| spectrum::default_tol(&geom, &cfg));
    if !(tol > 0.0) {
        return Err(validation(anyhow!("--tol must be positive")));
    }
    let evaluator = PhiEvaluator::new(&geom, &cfg).map_err(classify)?;
    let states = spectrum::find_bound_states_with(&evaluator, &cfg, tol).map_err(classify)?;

    // branch diagnostics at the bottom of the spectral window
    let edge = if geom.is_relativistic() {
        -geom.mass().expect("mass") + tol.max(1e-9 * geom.mass().unwrap())
    } else {
        1e-8 * cfg.max_mu().max(geom.kappa().unwrap_or(0.0))
    };
    let edge_branches = spectrum::eigenvalue_branches_with(&evaluator, &cfg, &[edge])
        .map_err(classify)?
        .remove(0);

    let count: usize = states.iter().map(|s| s.multiplicity).sum();
    let text = match args.out.format {
        Format::Json => {
            let doc = json!({
                "command": "spectrum",
                "geometry": geometry_json(&geom),
                "mu": cfg.mu,
                "dist": cfg.dist,
                "tol": tol,
                "count": count,
                "states": states.iter().map(state_json).collect::<Vec<_>>(),
                "window_edge": edge,
                "branch_values_at_window_edge": edge_branches.eigenvalues,
            });
            to_json_string(&doc)
        }
        Format::Csv => {
            let mut s = String::from("location,energy,multiplicity,normalization,det_residual,amplitudes\n");
            for st in &states {
                let amps: Vec<String> = st.amplitudes[0].iter().map(|&a| fmt_f64(a)).collect();
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_f64(st.location),
                    fmt_f64(st.energy),
                    st.multiplicity,
                    fmt_f64(st.normalization),
                    fmt_f64(st.det_residual),
                    amps.join(";"),
                ));
            }
            s
        }
    };
    emit(&args.out.output, &text).map_err(numerical)
}

fn report_json(r: &CriterionReport) -> Value {
    json!({
        "criterion_id": r.criterion_id.as_str(),
        "lhs": r.lhs,
        "rhs": r.rhs,
        "satisfied": r.satisfied,
        "witness": r.witness,
        "predicted_count": r.predicted_count,
        "gerschgorin_at_witness": r.gerschgorin_at_witness,
    })
}

pub fn run_criteria(args: &CriteriaArgs) -> CliResult {
    // Shortcut form: --mu <single> --d <dist> --n <count> builds the
    // matching collinear configuration of n equal centers.
    let (geom, cfg) = if let (Some(d), Some(n)) = (args.d, args.n) {
        if args.config.config.is_some() {
            return Err(validation(anyhow!("--d/--n exclude --config")));
        }
        let kind = args
            .config
            .geometry
            .ok_or_else(|| validation(anyhow!("--geometry is required")))?;
        let geom = args.config.geometry_for(kind).map_err(validation)?;
        if args.config.mu.len() != 1 {
            return Err(validation(anyhow!("shortcut form takes exactly one --mu value")));
        }
        if n == 0 {
            return Err(validation(anyhow!("--n must be at least 1")));
        }
        let cfg = Configuration::collinear(vec![args.config.mu[0]; n], d);
        let violations = geometry::validate_configuration(&cfg, &geom);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(validation(anyhow!("invalid configuration: {}", lines.join("; "))));
        }
        (geom, cfg)
    } else if args.d.is_some() || args.n.is_some() {
        return Err(validation(anyhow!("--d and --n must be given together")));
    } else {
        build_config(&args.config)?
    };

    let reports = criteria::evaluate_applicable(&geom, &cfg).map_err(classify)?;
    if reports.is_empty() {
        return Err(validation(anyhow!("no criterion applies to this geometry/configuration pairing")));
    }

    let verify = if args.verify {
        let exact = spectrum::count_bound_states(&geom, &cfg).map_err(classify)?;
        let agreement = reports
            .iter()
            .filter(|r| r.satisfied)
            .all(|r| r.predicted_count == Some(exact));
        Some((exact, agreement))
    } else {
        None
    };

    let text = match args.out.format {
        Format::Json => {
            let mut doc = json!({
                "command": "criteria",
                "geometry": geometry_json(&geom),
                "n": cfg.n(),
                "mu_min": cfg.min_mu(),
                "d_min": if cfg.n() > 1 { Value::from(cfg.min_distance()) } else { Value::Null },
                "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
            });
            if let Some((exact, agreement)) = verify {
                doc["verify"] = json!({"exact_count": exact, "agreement": agreement});
            }
            to_json_string(&doc)
        }
        Format::Csv => {
            let mut s = String::from("criterion_id,lhs,rhs,satisfied,witness,predicted_count\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.criterion_id,
                    fmt_f64(r.lhs),
                    fmt_f64(r.rhs),
                    r.satisfied,
                    r.witness.map(fmt_f64).unwrap_or_else(|| "na".into()),
                    r.predicted_count.map(|c| c.to_string()).unwrap_or_else(|| "na".into()),
                ));
            }
            if let Some((exact, agreement)) = verify {
                s.push_str(&format!("exact_count,{exact},,{agreement},na,na\n"));
            }
            s
        }
    };
    emit(&args.out.output, &text).map_err(numerical)
}

const SWEEP_CRITERIA: [CriterionId; 7] = [
    CriterionId::Gerschgorin,
    CriterionId::H3Explicit,
    CriterionId::H2Explicit,
    CriterionId::FlatTwoCenter,
    CriterionId::Cassini,
    CriterionId::RelFlat2,
    CriterionId::RelH2,
];

struct SweepRow {
    param: f64,
    count: usize,
    deepest: f64,
    verdicts: Vec<Option<bool>>,
}

fn sweep_point(geom: &Geometry, cfg: &Configuration, axis: SweepAxis, v: f64) -> spectra_core::Result<SweepRow> {
    let evaluator = PhiEvaluator::new(geom, cfg)?;
    let states = spectrum::find_bound_states_with(&evaluator, cfg, spectrum::default_tol(geom, cfg))?;
    let count: usize = states.iter().map(|s| s.multiplicity).sum();
    let deepest = states.first().map(|s| s.location).unwrap_or(f64::NAN);

    let reports = if axis == SweepAxis::Nu {
        // fixed witness: matrix criteria evaluated exactly at v
        let mut out = Vec::new();
        out.push(criteria::gerschgorin_condition_with(&evaluator, cfg, v)?);
        if cfg.n() >= 2 {
            out.push(criteria::cassini_condition_with(&evaluator, cfg, v)?);
        }
        out
    } else {
        criteria::evaluate_applicable(geom, cfg)?
    };

    let mut verdicts: Vec<Option<bool>> = vec![None; SWEEP_CRITERIA.len()];
    for r in &reports {
        if let Some(slot) = SWEEP_CRITERIA.iter().position(|id| *id == r.criterion_id) {
            verdicts[slot] = Some(r.satisfied);
        }
    }
    Ok(SweepRow { param: v, count, deepest, verdicts })
}

pub fn run_sweep(args: &SweepArgs) -> CliResult {
    let (geom, cfg) = build_config(&args.config)?;
    let grid = parse_range(&args.range).map_err(validation)?;

    // materialize every grid point's (geometry, configuration) up front so
    // invalid sweeps fail before any computation
    let mut points: Vec<(Geometry, Configuration, f64)> = Vec::with_capacity(grid.len());
    for &v in &grid {
        let (g, c) = match args.axis {
            SweepAxis::D => {
                if !(v > 0.0) {
                    return Err(validation(anyhow!("swept spacing must stay positive, got {v}")));
                }
                (geom, Configuration::collinear(cfg.mu.clone(), v))
            }
            SweepAxis::Mu => (geom, Configuration { mu: vec![v; cfg.n()], dist: cfg.dist.clone() }),
            SweepAxis::Kappa => {
                let g = match geom {
                    Geometry::Hyperbolic2 { .. } => Geometry::Hyperbolic2 { kappa: v },
                    Geometry::Hyperbolic3 { .. } => Geometry::Hyperbolic3 { kappa: v },
                    Geometry::RelHyperbolic2 { m, .. } => Geometry::RelHyperbolic2 { kappa: v, m },
                    _ => return Err(validation(anyhow!("kappa sweep needs a hyperbolic geometry"))),
                };
                (g, cfg.clone())
            }
            SweepAxis::M => {
                let g = match geom {
                    Geometry::RelFlat2 { .. } => Geometry::RelFlat2 { m: v },
                    Geometry::RelHyperbolic2 { kappa, .. } => Geometry::RelHyperbolic2 { kappa, m: v },
                    _ => return Err(validation(anyhow!("m sweep needs a relativistic geometry"))),
                };
                (g, cfg.clone())
            }
            SweepAxis::Nu => (geom, cfg.clone()),
        };
        let violations = geometry::validate_configuration(&c, &g);
        if !violations.is_empty() {
            let lines: Vec<String> = violations.iter().map(|x| x.to_string()).collect();
            return Err(validation(anyhow!(
                "sweep point {v} leaves the valid domain: {}",
                lines.join("; ")
            )));
        }
        points.push((g, c, v));
    }

    // compute rows concurrently, capped by SPECTRA_THREADS, emitted in order
    let threads = std::env::var("SPECTRA_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .min(points.len().max(1));
    let axis = args.axis;
    let results: Vec<(usize, spectra_core::Result<SweepRow>)> = std::thread::scope(|scope| {
        let points = &points;
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut idx = w;
                    while idx < points.len() {
                        let (g, c, v) = &points[idx];
                        out.push((idx, sweep_point(g, c, axis, *v)));
                        idx += threads;
                    }
                    out
                })
            })
            .collect();
        let mut all: Vec<(usize, spectra_core::Result<SweepRow>)> =
            handles.into_iter().flat_map(|h| h.join().expect("sweep worker")).collect();
        all.sort_by_key(|r| r.0);
        all
    });

    let ids: Vec<&str> = SWEEP_CRITERIA.iter().map(|c| c.as_str()).collect();
    let mut text = format!("param,count,nu_max,{}\n", ids.join(","));
    for (_, row) in results {
        let row = row.map_err(classify)?;
        let verdicts: Vec<String> = row
            .verdicts
            .iter()
            .map(|v| match v {
                Some(true) => "true".into(),
                Some(false) => "false".into(),
                None => "na".to_string(),
            })
            .collect();
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(row.param),
            row.count,
            fmt_f64(row.deepest),
            verdicts.join(","),
        ));
    }
    emit(&args.output, &text).map_err(numerical)
}

pub fn run_heatkernel(args: &HeatkernelArgs) -> CliResult {
    let carrier = ConfigArgs {
        geometry: Some(args.geometry),
        kappa: args.kappa,
        mass: None,
        mu: vec![],
        dist_line: None,
        dist_matrix: None,
        config: None,
    };
    let geom = carrier.geometry_for(args.geometry).map_err(validation)?;
    if geom.is_relativistic() {
        return Err(validation(anyhow!("heat kernels are defined for the non-relativistic kinds")));
    }
    let is_h2 = matches!(geom, Geometry::Hyperbolic2 { .. });
    let mut rows = Vec::new();
    for &d in &args.d {
        for &t in &args.t {
            let k = geometry::heat_kernel(&geom, d, t).map_err(classify)?;
            let lower = if is_h2 && d == 0.0 {
                Some(geometry::heat_kernel_diag_lower_h2(t, geom.kappa().unwrap()).map_err(classify)?)
            } else {
                None
            };
            let upper = if is_h2 {
                Some(geometry::heat_kernel_upper_h2(d, t, geom.kappa().unwrap()).map_err(classify)?)
            } else {
                None
            };
            rows.push((d, t, k, lower, upper));
        }
    }
    let text = match args.out.format {
        Format::Json => {
            let doc = json!({
                "command": "heatkernel",
                "geometry": geometry_json(&geom),
                "values": rows.iter().map(|(d, t, k, lower, upper)| json!({
                    "d": d,
                    "t": t,
                    "value": k.value,
                    "method": match k.method {
                        geometry::KernelMethod::ClosedForm => "closed_form",
                        geometry::KernelMethod::Quadrature => "quadrature",
                    },
                    "diag_lower_bound": lower,
                    "upper_bound": upper,
                })).collect::<Vec<_>>(),
            });
            to_json_string(&doc)
        }
        Format::Csv => {
            let mut s = String::from("d,t,value,method,diag_lower_bound,upper_bound\n");
            for (d, t, k, lower, upper) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_f64(*d),
                    fmt_f64(*t),
                    fmt_f64(k.value),
                    match k.method {
                        geometry::KernelMethod::ClosedForm => "closed_form",
                        geometry::KernelMethod::Quadrature => "quadrature",
                    },
                    lower.map(fmt_f64).unwrap_or_else(|| "na".into()),
                    upper.map(fmt_f64).unwrap_or_else(|| "na".into()),
                ));
            }
            s
        }
    };
    emit(&args.out.output, &text).map_err(numerical)
}

pub fn run_resolvent(args: &ResolventArgs) -> CliResult {
    if !args.x_dists.is_empty() {
        // Krein-correction mode needs a full configuration.
        let (geom, cfg) = build_config(&args.config)?;
        let y = if args.y_dists.is_empty() { &args.x_dists } else { &args.y_dists };
        let corr =
            krein_correction(&geom, &cfg, args.nu, &args.x_dists, y).map_err(classify)?;
        let text = match args.out.format {
            Format::Json => to_json_string(&json!({
                "command": "resolvent",
                "geometry": geometry_json(&geom),
                "nu": args.nu,
                "krein_correction": corr.value,
                "pole_proximity": corr.pole_proximity,
            })),
            Format::Csv => format!(
                "krein_correction,pole_proximity\n{},{}\n",
                fmt_f64(corr.value),
                fmt_f64(corr.pole_proximity)
            ),
        };
        return emit(&args.out.output, &text).map_err(numerical);
    }

    if args.d.is_empty() {
        return Err(validation(anyhow!("--d (free kernel) or --x-dists (Krein mode) is required")));
    }
    let kind = args
        .config
        .geometry
        .ok_or_else(|| validation(anyhow!("--geometry is required")))?;
    let geom = args.config.geometry_for(kind).map_err(validation)?;
    let mut rows = Vec::new();
    for &d in &args.d {
        rows.push((d, resolvent_kernel(&geom, d, args.nu).map_err(classify)?));
    }
    let text = match args.out.format {
        Format::Json => to_json_string(&json!({
            "command": "resolvent",
            "geometry": geometry_json(&geom),
            "nu": args.nu,
            "values": rows.iter().map(|(d, v)| json!({"d": d, "value": v})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("d,value\n");
            for (d, v) in &rows {
                s.push_str(&format!("{},{}\n", fmt_f64(*d), fmt_f64(*v)));
            }
            s
        }
    };
    emit(&args.out.output, &text).map_err(numerical)
}
