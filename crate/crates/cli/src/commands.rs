use crate::{AnalyzeArgs, DarbouxArgs, Input, LeslieArgs, PortraitArgs};
use pdisc::compactify::{
    blowups_at, infinite_equilibria, sector_synthesis, to_chart, v_chart_matches, BlowupSystem,
    Chart,
};
use pdisc::darboux::extactic;
use pdisc::equilibria::{finite_equilibria, label_leslie, Classification, EquilibriumRecord};
use pdisc::exactalg::rat::fmt_rat;
use pdisc::exactalg::{MPoly, Rat};
use pdisc::integrability::{
    infinity_ansatz, liouville_verdict, IntegrabilityVerdict, SearchBounds,
};
use pdisc::modelio::{
    leslie_transform, parse_bindings, parse_system_with, seeded_triples, LeslieGowerParams,
    ParamBindings, PlanarSystem, DEFAULT_SAMPLE_SEED,
};
use pdisc::portrait::{
    build_portrait, render_json, render_svg, PortraitOptions, SvgStyle, Tolerances,
};
use pdisc::report::{
    BlowupJson, ChartJson, CurveJson, EquilibriumJson, ExpFactorJson, VerdictJson,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::Path;

pub enum Failure {
    Input(String),
    Invariant(String),
}

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn load(input: &Input) -> Result<(String, BTreeMap<String, Rat>, PlanarSystem), Failure> {
    let src = std::fs::read_to_string(&input.model)
        .map_err(|e| Failure::Input(format!("{}: {e}", input.model.display())))?;
    let overrides = match &input.params {
        Some(p) => parse_bindings(p).map_err(input_err)?,
        None => BTreeMap::new(),
    };
    let sys = parse_system_with(&src, &overrides)
        .map_err(|e| Failure::Input(format!("{}:{e}", input.model.display())))?;
    Ok((src, overrides, sys))
}

fn emit(v: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("report serializes") + "\n";
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn system_json(sys: &PlanarSystem) -> Value {
    json!({
        "dx": sys.p.to_string(),
        "dy": sys.q.to_string(),
        "degree": sys.degree(),
        "source_variables": sys.var_names,
    })
}

fn params_json(sys: &PlanarSystem) -> BTreeMap<String, String> {
    sys.params
        .iter()
        .map(|(k, v)| (k.clone(), fmt_rat(v)))
        .collect()
}

fn regime_json(b: &ParamBindings) -> Value {
    json!({ "one_minus_ac": fmt_rat(&b.one_minus_ac()), "sign": b.regime_sign() })
}

fn residual_ok(r: &EquilibriumRecord) -> bool {
    r.residual.iter().all(|i| i.contains_zero())
}

// u^k times the pushforward of the blown-up field must equal the original.
fn blow_down_ok(sys: &PlanarSystem, b: &BlowupSystem, x0: &Rat, y0: &Rat) -> bool {
    let r = |n: i64, d: i64| Rat::new(n.into(), d.into());
    let samples = [(r(1, 3), r(2, 5)), (r(-3, 7), r(5, 2))];
    samples.iter().all(|(a, c)| {
        let (u, v) = b.blow_down_point(a, c);
        let (x, y) = (&u + x0, &v + y0);
        b.blow_down(a, c) == (sys.p.eval(&x, &y), sys.q.eval(&x, &y))
    })
}

fn blowup_entry(
    sys: &PlanarSystem,
    at: String,
    x0: &Rat,
    y0: &Rat,
    failures: &mut Vec<String>,
) -> Value {
    match blowups_at(sys, x0, y0) {
        Ok((xb, yb)) => {
            for b in [&xb, &yb] {
                if !blow_down_ok(sys, b, x0, y0) {
                    failures.push(format!("blow-down mismatch at {at} ({:?})", b.direction));
                }
            }
            json!({
                "at": at,
                "x_direction": BlowupJson::new(&xb),
                "y_direction": BlowupJson::new(&yb),
                "sectors": sector_synthesis(&xb, &yb),
            })
        }
        Err(e) => json!({ "at": at, "error": e.to_string() }),
    }
}

/// Builds the `analyze` report and collects failed soundness checks.
pub fn analyze_report(sys: &PlanarSystem, quadrant: bool) -> Result<(Value, Vec<String>), Failure> {
    let mut failures = Vec::new();
    let mut finite = finite_equilibria(sys, quadrant).map_err(input_err)?;
    let bindings = ParamBindings::from_map(&sys.params);
    if let Some(b) = &bindings {
        label_leslie(&mut finite, b);
    }
    let mut blowups = Vec::new();
    for r in &finite {
        if !residual_ok(r) {
            failures.push(format!("residual excludes zero at {}", r.point));
        }
        if r.classification == Classification::DegenerateNeedsBlowup {
            if let Some((x, y)) = r.point.as_exact() {
                blowups.push(blowup_entry(
                    sys,
                    format!("({}, {})", fmt_rat(x), fmt_rat(y)),
                    x,
                    y,
                    &mut failures,
                ));
            }
        }
    }
    let mut charts = Vec::new();
    if sys.degree() > 0 {
        for chart in [Chart::U1, Chart::U2] {
            let cs = to_chart(sys, chart);
            let eqs = infinite_equilibria(&cs);
            if let Ok(recs) = &eqs {
                for r in recs {
                    if !residual_ok(r) {
                        failures.push(format!("{chart} residual excludes zero at {}", r.point));
                    }
                    let Some((u, v)) = r.point.as_exact() else {
                        continue;
                    };
                    let seen_from_u1 = chart == Chart::U2 && !num_traits::Zero::is_zero(u);
                    if r.classification == Classification::DegenerateNeedsBlowup && !seen_from_u1 {
                        let at = format!("{chart}:({}, {})", fmt_rat(u), fmt_rat(v));
                        blowups.push(blowup_entry(&cs.system(), at, u, v, &mut failures));
                    }
                }
            }
            let eqs = eqs
                .map(|v| v.iter().map(EquilibriumJson::new).collect())
                .map_err(|e| e.to_string());
            charts.push(ChartJson::new(&cs, eqs));
        }
        if !v_chart_matches(sys) {
            failures.push("V charts are not (-1)^(d-1) times the U charts".into());
        }
    }
    let report = json!({
        "system": system_json(sys),
        "params": params_json(sys),
        "regime": bindings.as_ref().map(regime_json),
        "quadrant_only": quadrant,
        "finite_equilibria": finite.iter().map(EquilibriumJson::new).collect::<Vec<_>>(),
        "charts": charts,
        "blowups": blowups,
        "checks": { "passed": failures.is_empty(), "failures": failures },
    });
    Ok((report, failures))
}

fn finish(report: &Value, out: Option<&Path>, failures: &[String]) -> Result<(), Failure> {
    emit(report, out)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(failures.join("; ")))
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let (_, _, sys) = load(&args.input)?;
    let (report, failures) = analyze_report(&sys, args.quadrant)?;
    finish(&report, args.out.as_deref(), &failures)
}

fn verdict_for(sys: &PlanarSystem, bounds: SearchBounds) -> Result<IntegrabilityVerdict, Failure> {
    let v = liouville_verdict(sys, bounds).map_err(|e| Failure::Invariant(e.to_string()))?;
    v.recheck(sys)
        .map_err(|e| Failure::Invariant(e.to_string()))?;
    Ok(v)
}

fn sample_seed(flag: Option<u64>) -> Result<u64, Failure> {
    match std::env::var("PDISC_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::Input(format!("PDISC_SEED must be an unsigned integer, got `{s}`"))
        }),
        Err(_) => Ok(flag.unwrap_or(DEFAULT_SAMPLE_SEED)),
    }
}

pub fn darboux(args: &DarbouxArgs) -> Result<(), Failure> {
    let (src, overrides, sys) = load(&args.input)?;
    let bounds = SearchBounds {
        max_curve_degree: args.max_curve_degree,
        exp_degree: args.exp_degree,
        extactic_order: args.extactic_order,
    };
    let v = verdict_for(&sys, bounds)?;
    let fs: Vec<_> = v.curves.iter().map(|c| c.f.clone()).collect();
    let ext = extactic(&sys, bounds.extactic_order, &fs);
    let ansatz = infinity_ansatz(&sys, bounds.exp_degree);
    let mut extactic_json = json!({
        "order": ext.order,
        "basis_size": ext.basis_size(),
        "terms": ext.e.len(),
        "degree": ext.e.degree(),
        "multiplicities": ext.multiplicities.iter().map(|(f, m)| json!({ "f": f.to_string(), "multiplicity": m })).collect::<Vec<_>>(),
    });
    if args.dump_extactic {
        extactic_json["polynomial"] = json!(ext.e.to_string());
    }
    let mut report = json!({
        "system": system_json(&sys),
        "params": params_json(&sys),
        "regime": ParamBindings::from_map(&sys.params).as_ref().map(regime_json),
        "curves": v.curves.iter().map(CurveJson::from).collect::<Vec<_>>(),
        "exponential_factors": v.factors.iter().map(ExpFactorJson::from).collect::<Vec<_>>(),
        "line_families": v.families,
        "irrational_lines": v.irrational,
        "extactic": extactic_json,
        "infinity_ansatz": {
            "monomials": ansatz.monomials.iter().map(|m| MPoly::term(Rat::from_integer(1.into()), m.x, m.y).to_string()).collect::<Vec<_>>(),
            "solutions": ansatz.solutions.iter().map(|s| s.iter().map(fmt_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
        },
        "verdict": VerdictJson::from(&v),
    });
    if args.generic {
        let seed = sample_seed(args.seed)?;
        let mut sample = Vec::new();
        for t in seeded_triples(seed, 5) {
            let mut binds = overrides.clone();
            binds.extend(t.as_map());
            let s = parse_system_with(&src, &binds).map_err(input_err)?;
            let tv = verdict_for(&s, bounds)?;
            sample.push(json!({
                "params": t,
                "verdict": tv.verdict.tag(),
                "rank": tv.integrating_factor.rank,
                "augmented_rank": tv.integrating_factor.augmented_rank,
                "first_integral_nullity": tv.first_integral_nullity,
            }));
        }
        report["generic_sample"] = json!({ "seed": seed, "triples": sample });
    }
    emit(&report, args.out.as_deref())
}

pub fn portrait(args: &PortraitArgs) -> Result<(), Failure> {
    let (_, _, sys) = load(&args.input)?;
    if !(args.tmax > 0.0 && args.eps > 0.0 && args.rtol > 0.0 && args.atol > 0.0) || args.grid == 0
    {
        return Err(Failure::Input(
            "tmax, eps, rtol, atol and grid must be positive".into(),
        ));
    }
    let opts = PortraitOptions {
        quadrant_only: !args.full_disc,
        tmax: args.tmax,
        tol: Tolerances {
            rtol: args.rtol,
            atol: args.atol,
        },
        eps: args.eps,
        grid: args.grid,
        leslie: ParamBindings::from_map(&sys.params),
    };
    let doc = build_portrait(&sys, &opts).map_err(input_err)?;
    for t in &doc.trajectories {
        if let Some(p) = t.points.iter().find(|p| p[0].hypot(p[1]) > 1.0 + 1e-12) {
            return Err(Failure::Invariant(format!(
                "trajectory {} left the disc at {p:?}",
                t.seed
            )));
        }
    }
    let style = SvgStyle {
        clip_quadrant: opts.quadrant_only,
    };
    let svg = render_svg(&doc, style);
    let js = render_json(&doc);
    if let Some(p) = &args.svg {
        std::fs::write(p, &svg).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    }
    match &args.json {
        Some(p) => emit(&js, Some(p)),
        None if args.svg.is_none() => {
            print!("{svg}");
            Ok(())
        }
        None => Ok(()),
    }
}

fn rat_arg(name: &str, s: &str) -> Result<Rat, Failure> {
    let m = parse_bindings(&format!("v={s}"))
        .map_err(|_| Failure::Input(format!("--{name}: not a rational: `{s}`")))?;
    Ok(m["v"].clone())
}

pub fn leslie(args: &LeslieArgs) -> Result<(), Failure> {
    let p = LeslieGowerParams {
        r: rat_arg("r", &args.r)?,
        k: rat_arg("k", &args.k)?,
        q: rat_arg("q", &args.q)?,
        s: rat_arg("s", &args.s)?,
        n: rat_arg("n", &args.n)?,
        c: rat_arg("c", &args.c)?,
    };
    let (b, sys) = leslie_transform(&p).map_err(input_err)?;
    let gap = b.one_minus_ac();
    println!("{b}");
    match b.regime_sign() {
        0 => println!("regime: 1-AC = 0"),
        1 => println!("regime: 1-AC = {} > 0", fmt_rat(&gap)),
        _ => println!("regime: 1-AC = {} < 0", fmt_rat(&gap)),
    }
    print!("{}", sys.to_source());
    if args.analyze {
        let (report, failures) = analyze_report(&sys, true)?;
        return finish(&report, args.out.as_deref(), &failures);
    }
    Ok(())
}
