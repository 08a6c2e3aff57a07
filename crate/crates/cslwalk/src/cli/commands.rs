use std::path::{Path, PathBuf};

use cslwalk_core::brownian::{
    collision_stats, equipartition_beta, fp_moments, realm_check, xi_mirror, xi_molecular,
    xi_radiation, xi_rotational, xi_slip_corrected, xi_stokes, xi_viscous_disc, DragCoefficient,
    Orientation, Realm, SlipParams,
};
use cslwalk_core::constants::{CslParams, AMU, CGS, ERG_PER_EV, E_CHARGE, M_ELECTRON, M_N2};
use cslwalk_core::constraints::{
    fig2_dataset, lambda_gravitational, linspace, thermal_relation, GravityMode, Relation,
    FIG2_DEFAULT,
};
use cslwalk_core::diffusion::{
    combined_rms, csl_rms_rotation, csl_rms_translation, equilibrium_width, qm_baseline_rotation,
    qm_baseline_translation, table1 as table1_values, table2 as table2_values, time_to_angle,
    time_to_distance, Regime, TABLE1_RADII, TABLE1_TIMES,
};
use cslwalk_core::factors::{
    f_disc_edge, f_disc_perp, f_rot_disc, f_sphere, fig1_dataset, DiscAspect,
};
use cslwalk_core::sde::{SdeMethod, SimConfig};
use cslwalk_core::units::{parse_quantity, Dimension, CM_PER_DMU, DYN_PER_TORR, SECONDS_PER_DAY};
use cslwalk_core::{Body, Environment, Error, Shape};
use serde_json::{json, Map, Value};

use super::{
    parse_angle, usage, BodyArgs, CliResult, DiffuseArgs, DiscDirection, EnvArgs, Fig1Args,
    Fig2Args, MechanismArg, MethodArg, RealmArg, RegimeArg, SimulateArgs, Sink, VISCOSITY_ROOM,
};
use crate::format::{general, sci, Precision, DEFAULT_DIGITS};
use crate::output::{document, Table};
use crate::parallel;

fn fmt(x: f64) -> String {
    sci(x, DEFAULT_DIGITS)
}

fn grid(x: f64) -> String {
    general(x, DEFAULT_DIGITS)
}

fn fields(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("fields are built from json objects"),
    }
}

fn csl_json(csl: &CslParams) -> Value {
    json!({"lambda_per_s": csl.lambda, "a_cm": csl.a})
}

fn body_json(body: &Body) -> Value {
    let shape = match body.shape {
        Shape::Sphere { radius } => json!({"kind": "sphere", "R_cm": radius}),
        Shape::Disc { radius, thickness } => {
            json!({"kind": "disc", "L_cm": radius, "b_cm": thickness})
        }
    };
    json!({"shape": shape, "density_g_cm3": body.density, "mass_g": body.mass()})
}

pub fn constants(sink: &mut Sink) -> CliResult<()> {
    let rows: [(&str, f64, &str); 17] = [
        ("hbar", CGS.hbar, "erg s"),
        ("k_boltzmann", CGS.k_boltzmann, "erg/K"),
        ("m_nucleon", CGS.m_nucleon, "g"),
        ("g_newton", CGS.g_newton, "cm^3/(g s^2)"),
        ("c", CGS.c, "cm/s"),
        ("room_temperature", CGS.room_temperature, "K"),
        ("m_electron", M_ELECTRON, "g"),
        ("e_charge", E_CHARGE, "esu"),
        ("erg_per_ev", ERG_PER_EV, "erg/eV"),
        ("amu", AMU, "g"),
        ("m_n2", M_N2, "g"),
        ("lambda_grw", CslParams::GRW.lambda, "1/s"),
        ("a_grw", CslParams::GRW.a, "cm"),
        ("dyn_per_torr", DYN_PER_TORR, "dyn/cm^2"),
        ("seconds_per_day", SECONDS_PER_DAY, "s"),
        ("cm_per_dmu", CM_PER_DMU, "cm"),
        ("viscosity_room", VISCOSITY_ROOM, "poise"),
    ];
    let mut t = Table::new(["name", "value", "unit"]);
    let mut values = Map::new();
    for (name, v, unit) in rows {
        t.push(vec![name.into(), fmt(v), unit.into()]);
        values.insert(name.into(), json!({"value": v, "unit": unit}));
    }
    let doc = document(
        "constants",
        fields(json!({
            "constants": values,
            "conventions": {
                "units": "CGS",
                "number_format": "6 significant digits; --paper-format rounds table1/table2 to 1",
                "constraints": "raw CGS numbers: lambda_inv in s, a in cm",
                "gravitational": "order of magnitude; numerical factors set to 1",
                "viscosity_default": "1.8e-4 poise x (T/293.15 K)^(1/2) when --viscosity is absent",
            }
        })),
    );
    sink.emit(&t, &doc)
}

pub fn table1(csl: &CslParams, p: Precision, sink: &mut Sink) -> CliResult<()> {
    let values = table1_values(csl)?;
    let mut header = vec!["R_cm".to_string()];
    header.extend(TABLE1_TIMES.iter().map(|t| format!("dQ_{t}s_cm")));
    let mut t = Table::new(header);
    let mut rows = Vec::new();
    for (r, row) in TABLE1_RADII.iter().zip(values.iter()) {
        let mut cells = vec![p.sci(*r)];
        cells.extend(row.iter().map(|&v| p.sci(v)));
        t.push(cells);
        for (time, &v) in TABLE1_TIMES.iter().zip(row) {
            rows.push(json!({"R_cm": r, "t_s": time, "dQ_cm": p.round(v)}));
        }
    }
    let doc = document(
        "table1",
        fields(json!({"csl": csl_json(csl), "rows": rows, "significant_digits": p.digits()})),
    );
    sink.emit(&t, &doc)
}

pub fn table2(csl: &CslParams, density: f64, p: Precision, sink: &mut Sink) -> CliResult<()> {
    let values = table2_values(csl, density)?;
    let mut t = Table::new(["R_cm", "s_inf_cm", "tau_s_s"]);
    let mut rows = Vec::new();
    for (r, eq) in TABLE1_RADII.iter().zip(values.iter()) {
        t.push(vec![p.sci(*r), p.sci(eq.s_inf), p.sci(eq.tau_s)]);
        rows.push(json!({
            "R_cm": r,
            "s_inf_cm": p.round(eq.s_inf),
            "tau_s_s": p.round(eq.tau_s),
            "width_ok": eq.width_ok,
            "nucleons_ok": eq.nucleons_ok,
        }));
    }
    let doc = document(
        "table2",
        fields(json!({
            "csl": csl_json(csl),
            "density_g_cm3": density,
            "rows": rows,
            "significant_digits": p.digits(),
        })),
    );
    sink.emit(&t, &doc)
}

pub fn fig1(args: &Fig1Args, sink: &mut Sink) -> CliResult<()> {
    let alphas = args
        .alpha
        .clone()
        .unwrap_or_else(|| (1..=40).map(|k| k as f64 / 10.0).collect());
    let table = fig1_dataset(&alphas, &args.beta)?;
    let rows = &table.rows;
    let mut t = Table::new(["alpha", "beta", "f_rot", "est_error"]);
    for r in rows {
        t.push(vec![
            grid(r.alpha),
            grid(r.beta),
            fmt(r.f_rot),
            fmt(r.est_error),
        ]);
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| json!({"alpha": r.alpha, "beta": r.beta, "f_rot": r.f_rot, "est_error": r.est_error}))
        .collect();
    let diagnostics: Vec<Value> = table
        .diagnostics
        .iter()
        .map(|d| {
            json!({
                "beta": d.beta,
                "direction_changes": d.direction_changes,
                "alpha_at_min": d.alpha_at_min,
                "min_f_rot": d.min_f_rot,
            })
        })
        .collect();
    let doc = document(
        "fig1",
        fields(json!({
            "rows": json_rows,
            "diagnostics": diagnostics,
            "alpha_definition": "L/2a",
            "beta_definition": "b/2a",
        })),
    );
    sink.emit(&t, &doc)
}

fn boundary_path(out: &Path, name: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("fig2");
    out.with_file_name(format!("{stem}.{name}.csv"))
}

pub fn fig2(args: &Fig2Args, sink: &mut Sink) -> CliResult<()> {
    let ids = args
        .constraints
        .clone()
        .unwrap_or_else(|| FIG2_DEFAULT.to_vec());
    let la = linspace(args.log_a_min, args.log_a_max, args.log_a_n);
    let ll = linspace(
        args.log_lambda_inv_min,
        args.log_lambda_inv_max,
        args.log_lambda_inv_n,
    );
    let map = fig2_dataset(&la, &ll, &ids)?;

    let mut header = vec!["log10_a".to_string(), "log10_lambda_inv".to_string()];
    header.extend((1..=ids.len()).map(|k| format!("c{k}")));
    let mut t = Table::new(header);
    for (i, &x) in map.log10_a.iter().enumerate() {
        for (j, &y) in map.log10_lambda_inv.iter().enumerate() {
            let mut row = vec![grid(x), grid(y)];
            row.extend(
                map.cell(i, j)
                    .iter()
                    .map(|&b| if b { "1" } else { "0" }.to_string()),
            );
            t.push(row);
        }
    }

    // Extra reference lines: gravitational λ and the γ = 1 thermal bath.
    let thermal = thermal_relation(1.0)?;
    let mut gravity = Vec::with_capacity(map.log10_a.len());
    let mut thermal_pts = Vec::with_capacity(map.log10_a.len());
    for &x in &map.log10_a {
        let a = 10f64.powf(x);
        gravity.push((x, -lambda_gravitational(a, GravityMode::Point)?.log10()));
        thermal_pts.push((x, thermal.lambda_inv(a).log10()));
    }
    let mut lines: Vec<(String, Vec<(f64, f64)>)> = map
        .boundaries
        .iter()
        .map(|b| (b.id.name().to_string(), b.points.clone()))
        .collect();
    lines.push(("lambda-gravitational".into(), gravity));
    lines.push(("thermal-gamma-1".into(), thermal_pts));

    if let Some(out) = sink.out {
        for (name, pts) in &lines {
            let mut bt = Table::new(["log10_a", "log10_lambda_inv"]);
            for &(x, y) in pts {
                bt.push(vec![grid(x), grid(y)]);
            }
            let f = std::fs::File::create(boundary_path(out, name))?;
            bt.write_csv(std::io::BufWriter::new(f))?;
        }
    }

    let columns: Vec<Value> = ids
        .iter()
        .enumerate()
        .map(|(k, id)| {
            let l = id.line();
            json!({
                "column": format!("c{}", k + 1),
                "id": id.name(),
                "power": l.power,
                "relation": match l.relation { Relation::Greater => ">", Relation::Less => "<" },
                "bound": l.bound,
                "label": l.label,
            })
        })
        .collect();
    let cells: Vec<Value> = map
        .log10_a
        .iter()
        .flat_map(|&x| map.log10_lambda_inv.iter().map(move |&y| (x, y)))
        .zip(&map.cells)
        .map(|((x, y), c)| json!({"log10_a": x, "log10_lambda_inv": y, "holds": c}))
        .collect();
    let boundaries: Map<String, Value> = lines
        .iter()
        .map(|(name, pts)| {
            (
                name.clone(),
                json!(pts.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>()),
            )
        })
        .collect();
    let subset = &ids[..ids.len().min(4)];
    let doc = document(
        "fig2",
        fields(json!({
            "convention": "raw CGS numbers: lambda_inv in s, a in cm; constraint is lambda_inv * a^power (relation) bound",
            "columns": columns,
            "cells": cells,
            "boundaries": boundaries,
            "order_of_magnitude": ["lambda-gravitational"],
            "first_four_region_nonempty": map.region_nonempty(subset),
            "all_region_nonempty": map.region_nonempty(&ids),
        })),
    );
    sink.emit(&t, &doc)
}

fn default_realm(body: &Body, env: &Environment) -> CliResult<Realm> {
    if env.pressure.is_none() {
        return Ok(Realm::Radiation);
    }
    if realm_check(body, env, Realm::Molecular)?.holds {
        Ok(Realm::Molecular)
    } else if realm_check(body, env, Realm::Viscous)?.holds {
        Ok(Realm::Viscous)
    } else {
        Ok(Realm::SlipCorrected)
    }
}

fn realm_of(arg: RealmArg) -> Realm {
    match arg {
        RealmArg::Viscous => Realm::Viscous,
        RealmArg::Slip => Realm::SlipCorrected,
        RealmArg::Molecular => Realm::Molecular,
        RealmArg::Radiation => Realm::Radiation,
    }
}

fn translation_drag(
    body: &Body,
    env: &Environment,
    realm: Realm,
    dir: DiscDirection,
) -> CliResult<DragCoefficient> {
    let orientation = match (body.shape, dir) {
        (Shape::Sphere { .. }, _) => Orientation::Sphere,
        (Shape::Disc { .. }, DiscDirection::Perp) => Orientation::DiscPerp,
        (Shape::Disc { .. }, DiscDirection::Edge) => Orientation::DiscEdge,
    };
    let t_rad = env.radiation_temperature.unwrap_or(env.temperature);
    let xi = match (realm, body.shape) {
        (Realm::Viscous, Shape::Sphere { radius }) => xi_stokes(radius, env.viscosity()?)?,
        (Realm::Viscous, Shape::Disc { radius, .. }) => {
            xi_viscous_disc(radius, env.viscosity()?, orientation)?
        }
        (Realm::SlipCorrected, Shape::Sphere { radius }) => xi_slip_corrected(
            radius,
            env.viscosity()?,
            env.mean_free_path()?,
            SlipParams::default(),
        )?,
        (Realm::Molecular, _) => xi_molecular(body, env, orientation)?,
        (Realm::Radiation, Shape::Sphere { radius }) => xi_radiation(radius, t_rad)?,
        (Realm::Radiation, Shape::Disc { radius, .. }) if orientation == Orientation::DiscPerp => {
            xi_mirror(std::f64::consts::PI * radius * radius, t_rad)?
        }
        _ => {
            return Err(Error::Unsupported("no drag law for this body, realm and direction").into())
        }
    };
    Ok(xi)
}

fn collapse_factor(args: &DiffuseArgs, body: &Body, csl: &CslParams) -> CliResult<f64> {
    if let Some(f) = args.f {
        return Ok(f);
    }
    let v = match (args.rot, body.shape) {
        (false, Shape::Sphere { radius }) => f_sphere(radius / csl.a)?.value,
        (false, Shape::Disc { radius, thickness }) => {
            let aspect = DiscAspect::from_disc(radius, thickness, csl.a)?;
            match args.direction {
                DiscDirection::Perp => f_disc_perp(aspect)?.value,
                DiscDirection::Edge => f_disc_edge(aspect)?.value,
            }
        }
        (true, Shape::Sphere { .. }) => 0.0,
        (true, Shape::Disc { radius, thickness }) => {
            f_rot_disc(DiscAspect::from_disc(radius, thickness, csl.a)?)?.value
        }
    };
    Ok(v)
}

fn log_times(t_min: f64, t_max: f64, n: usize) -> CliResult<Vec<f64>> {
    if !(t_min > 0.0) || t_max < t_min || n == 0 {
        return Err(usage(
            "need 0 < --t-min <= --t-max and --points >= 1".into(),
        ));
    }
    Ok(linspace(t_min.log10(), t_max.log10(), n)
        .into_iter()
        .map(|x| 10f64.powf(x))
        .collect())
}

pub fn diffuse(args: &DiffuseArgs, sink: &mut Sink) -> CliResult<()> {
    let csl = args.csl.params()?;
    let body = args.body.body(1e-5)?;
    let env = args.env.environment()?;
    let mode = if args.rot { "rotation" } else { "translation" };
    let f = collapse_factor(args, &body, &csl)?;

    if let Some(target) = &args.target {
        if args.mechanism != MechanismArg::Csl {
            return Err(usage(
                "--target is available for --mechanism csl only".into(),
            ));
        }
        let (value, time) = if args.rot {
            let angle = parse_angle(target).map_err(usage)?;
            (angle, time_to_angle(&csl, f, angle)?)
        } else {
            let d = parse_quantity(target, Dimension::Length)
                .map_err(|e| usage(format!("--target: {e}")))?;
            (d, time_to_distance(&csl, f, d)?)
        };
        let mut t = Table::new(["mode", "target", "f", "time_s"]);
        t.push(vec![mode.into(), fmt(value), fmt(f), fmt(time)]);
        let doc = document(
            "diffuse",
            fields(json!({
                "mode": mode,
                "mechanism": "csl",
                "target": value,
                "f": f,
                "time_s": time,
                "time_min": time / 60.0,
                "csl": csl_json(&csl),
                "body": body_json(&body),
            })),
        );
        return sink.emit(&t, &doc);
    }

    let times = log_times(args.t_min, args.t_max, args.points)?;
    let need_env = || -> CliResult<Environment> {
        env.ok_or_else(|| {
            usage(
                "this mechanism needs an environment: add --p <pressure> or --T <temperature>"
                    .into(),
            )
        })
    };
    let regime = match args.regime {
        RegimeArg::Short => Regime::Short,
        RegimeArg::Long => Regime::Long,
        RegimeArg::Auto => Regime::Auto,
    };
    let mut samples = Vec::with_capacity(times.len());
    let mut drag = None;
    for &t in &times {
        let rms = match (args.mechanism, args.rot) {
            (MechanismArg::Csl, false) => csl_rms_translation(&csl, f, t, args.initial)?,
            (MechanismArg::Csl, true) => csl_rms_rotation(&csl, f, t, args.initial)?,
            (MechanismArg::QmBaseline, false) => qm_baseline_translation(&body, t)?,
            (MechanismArg::QmBaseline, true) => qm_baseline_rotation(&body, t)?,
            (MechanismArg::Brownian | MechanismArg::Combined, rot) => {
                let env = need_env()?;
                let realm = match args.realm {
                    Some(r) => realm_of(r),
                    None => default_realm(&body, &env)?,
                };
                let xi = if rot {
                    xi_rotational(&body, &env, realm)?
                } else {
                    translation_drag(&body, &env, realm, args.direction)?
                };
                drag = Some(xi);
                if args.mechanism == MechanismArg::Combined {
                    if rot {
                        return Err(Error::Unsupported(
                            "combined diffusion is defined for translation",
                        )
                        .into());
                    }
                    combined_rms(xi.xi, &body, &env, &csl, f, t, regime)?.total
                } else {
                    let inertia = if rot {
                        body.moment_of_inertia()
                    } else {
                        body.mass()
                    };
                    let tau = xi.damping_time(&body);
                    let beta = equipartition_beta(env.temperature, tau, inertia);
                    fp_moments(tau, beta, 0.0, t)?.var_x.sqrt()
                }
            }
        };
        samples.push((t, rms));
    }

    let mech = match args.mechanism {
        MechanismArg::Csl => "csl",
        MechanismArg::Brownian => "brownian",
        MechanismArg::Combined => "combined",
        MechanismArg::QmBaseline => "qm-baseline",
    };
    let mut t = Table::new(["t_s", "rms", "mechanism", "mode"]);
    for &(time, rms) in &samples {
        t.push(vec![fmt(time), fmt(rms), mech.into(), mode.into()]);
    }
    let mut doc = fields(json!({
        "mechanism": mech,
        "mode": mode,
        "unit": if args.rot { "rad" } else { "cm" },
        "f": f,
        "samples": samples.iter().map(|&(t, r)| json!({"t_s": t, "rms": r})).collect::<Vec<_>>(),
        "csl": csl_json(&csl),
        "body": body_json(&body),
    }));
    if let Some(d) = drag {
        doc.insert(
            "drag".into(),
            json!({"xi": d.xi, "realm": format!("{:?}", d.realm).to_lowercase(), "damping_time_s": d.damping_time(&body)}),
        );
    }
    if let Some(e) = env {
        doc.insert(
            "environment".into(),
            json!({"T_K": e.temperature, "p_dyn_cm2": e.pressure, "viscosity_poise": e.gas_viscosity}),
        );
    }
    sink.emit(&t, &document("diffuse", doc))
}

pub fn simulate(args: &SimulateArgs, seed: u64, sink: &mut Sink) -> CliResult<()> {
    let csl = args.csl.params()?;
    let body = Body::sphere(args.radius, args.density)?;
    let f = f_sphere(args.radius / csl.a)?.value;
    let eq = equilibrium_width(&csl, &body, f)?;
    let method = match args.method {
        MethodArg::Exact => SdeMethod::ExactB15,
        MethodArg::EulerMaruyama => SdeMethod::EulerMaruyama,
    };
    let mut cfg = SimConfig::for_equilibrium(&eq, args.n, seed, method);
    if let Some(dt) = args.dt {
        cfg.dt = dt;
    }
    if let Some(te) = args.t_end {
        cfg.t_end = te;
    }
    cfg.record_every = args.record_every;
    let stats = match args.threads {
        Some(0) => return Err(usage("--threads must be at least 1".into())),
        Some(w) => parallel::with_workers(w, || parallel::simulate_ensemble(&eq, &cfg))?,
        None => parallel::simulate_ensemble(&eq, &cfg)?,
    };

    let mut t = Table::new([
        "t_s",
        "mean_Q",
        "mean_sq_Q",
        "se_mean_sq_Q",
        "mean_sq_P",
        "se_mean_sq_P",
    ]);
    for k in 0..stats.times.len() {
        t.push(vec![
            fmt(stats.times[k]),
            fmt(stats.mean_q[k]),
            fmt(stats.mean_sq_q[k]),
            fmt(stats.se_mean_sq_q[k]),
            fmt(stats.mean_sq_p[k]),
            fmt(stats.se_mean_sq_p[k]),
        ]);
    }
    let series: Vec<Value> = (0..stats.times.len())
        .map(|k| {
            json!({
                "t_s": stats.times[k],
                "mean_Q": stats.mean_q[k],
                "se_mean_Q": stats.se_mean_q[k],
                "mean_sq_Q": stats.mean_sq_q[k],
                "se_mean_sq_Q": stats.se_mean_sq_q[k],
                "mean_sq_P": stats.mean_sq_p[k],
                "se_mean_sq_P": stats.se_mean_sq_p[k],
                "expected_mean_sq_Q": stats.expected_mean_sq_q(stats.times[k]),
                "expected_mean_sq_P": stats.expected_mean_sq_p(stats.times[k]),
            })
        })
        .collect();
    let fit: Vec<Value> = stats
        .fit
        .iter()
        .zip([1.0, 0.5, 1.0 / 12.0])
        .map(|(&(m, se), e)| json!({"mean": m, "se": se, "expected": e}))
        .collect();
    let doc = document(
        "simulate",
        fields(json!({
            "n_traj": stats.n_traj,
            "seed": seed,
            "method": method.name(),
            "dt_s": cfg.dt,
            "t_end_s": cfg.t_end,
            "s_inf_cm": stats.s_inf,
            "tau_s_s": stats.tau_s,
            "f": f,
            "csl": csl_json(&csl),
            "series": series,
            "fit_coefficients": fit,
        })),
    );
    sink.emit(&t, &doc)
}

pub fn collide(body: &BodyArgs, env: &EnvArgs, sink: &mut Sink) -> CliResult<()> {
    let body = body.body(1e-5)?;
    let Some(env) = env.environment()? else {
        return Err(usage(
            "collide needs a gas: add --p <pressure> (and optionally --gas N2 --T <temperature>)"
                .into(),
        ));
    };
    if env.pressure.is_none() {
        return Err(usage(
            "collide needs a gas pressure: add --p <pressure>".into(),
        ));
    }
    let s = collision_stats(&body, &env)?;
    let mut t = Table::new([
        "flux_cm2_s",
        "tau_c_s",
        "tau_c_min",
        "delta_v_cm_s",
        "omega_kick_rad_s",
    ]);
    t.push(vec![
        fmt(s.flux),
        fmt(s.tau_c),
        fmt(s.tau_c / 60.0),
        fmt(s.delta_v),
        fmt(s.omega_kick),
    ]);
    let doc = document(
        "collide",
        fields(json!({
            "flux_cm2_s": s.flux,
            "tau_c_s": s.tau_c,
            "tau_c_min": s.tau_c / 60.0,
            "delta_v_cm_s": s.delta_v,
            "omega_kick_rad_s": s.omega_kick,
            "body": body_json(&body),
            "environment": {"T_K": env.temperature, "p_dyn_cm2": env.pressure, "gas": "N2"},
        })),
    );
    sink.emit(&t, &doc)
}
