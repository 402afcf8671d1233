//! One function per subcommand.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::Path;

use eccpie::charts::{apex_grid, render_svg, solve_chart, ChartLayout, ChartSpec, SvgOptions};
use eccpie::geometry::{pizza_check, Point2};
use eccpie::polysys::{
    build_piecut_system, build_single_sector_system, export_system, max_sector_fraction, parse_system,
    PolySystem, PIECUT_VARS, REFERENCE_SOLUTION_40_35_25,
};
use eccpie::solvers::{
    solve_piecut, solve_pipeline, total_degree_solve, PieCutConfig, PieCutMode, PieCutReport, PieCutSolution,
    PipelineConfig, RootClass,
};
use eccpie::taylor::arccos_taylor;
use eccpie::{Error, Orientation};
use clap::ValueEnum;
use serde_json::{json, Value};

use crate::report::{to_value, write_output, CliError, CliResult, RunReport, Stopwatch};
use crate::{Builtin, ChartArgs, CutArgs, GridArgs, Mode, Output, PizzaArgs, SolvePolyArgs};

const CHART_TOL: f64 = 1e-12;
const REFERENCE_SHARES: [f64; 3] = [0.4, 0.35, 0.25];
const REFERENCE_TOL: f64 = 1e-8;

fn json_to_stdout(path: Option<&Path>) -> bool {
    path == Some(Path::new("-"))
}

/// Writes the requested files; the human summary goes to stdout unless the
/// JSON report does.
fn finish(report: &RunReport, out: &Output, svg: Option<String>, summary: &str) -> CliResult {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let (Some(path), Some(svg)) = (&out.svg, svg) {
        write_output(path, &svg)?;
    }
    if let Some(path) = &out.json {
        write_output(path, &report.to_json())?;
    }
    if !json_to_stdout(out.json.as_deref()) {
        print!("{summary}");
    }
    Ok(())
}

fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Counterclockwise => "counterclockwise",
        Orientation::Clockwise => "clockwise",
    }
}

pub fn chart(a: ChartArgs) -> CliResult {
    let mut clock = Stopwatch::start();
    let orientation = if a.clockwise {
        Orientation::Clockwise
    } else {
        Orientation::Counterclockwise
    };
    let spec = ChartSpec::new(a.shares.clone(), Point2::new(a.apex.0, a.apex.1))
        .with_start(Point2::new(a.start.0, a.start.1))
        .with_orientation(orientation);
    let mut layout = solve_chart(&spec, CHART_TOL).map_err(|e| {
        let flag = match e {
            Error::ApexOutside { .. } => "--apex",
            Error::NotOnCircle { .. } => "--start",
            _ => "--shares",
        };
        CliError::flag(flag, e)
    })?;
    clock.lap("solve");
    let svg = render_svg(
        std::slice::from_ref(&layout),
        &SvgOptions {
            labels: !a.no_labels,
            ..SvgOptions::default()
        },
    );
    clock.lap("render");

    let mut report = RunReport::new(
        "chart",
        json!({
            "shares": a.shares,
            "apex": [a.apex.0, a.apex.1],
            "start": [a.start.0, a.start.1],
            "orientation": orientation_name(orientation),
        }),
    );
    report.warnings = std::mem::take(&mut layout.warnings);
    report.solutions = to_value(&layout);
    report.timing_ms = clock.into_report(a.out.timing);

    let mut summary = String::new();
    for i in 0..layout.len() {
        let p = layout.boundary_points[i];
        summary += &format!(
            "ray {}: angle {:.9}  boundary ({:.9}, {:.9})  area {:.9} ({:.4} π)\n",
            i + 1,
            layout.ray_angles[i],
            p.x,
            p.y,
            layout.sector_areas[i],
            layout.sector_areas[i] / PI
        );
    }
    finish(&report, &a.out, Some(svg), &summary)
}

fn check_proportions(p: &[f64], warnings: &mut Vec<String>) -> CliResult<[f64; 3]> {
    let &[a, b, c] = p else {
        return Err(CliError::invalid(format!(
            "--proportions: a regular 3-blade cutter makes exactly 3 slices, got {} proportions",
            p.len()
        )));
    };
    if [a, b, c].iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(CliError::invalid("--proportions: every proportion must be positive"));
    }
    let sum = a + b + c;
    let shares = if (sum - 1.0).abs() <= 1e-9 {
        [a, b, c]
    } else if (sum - 1.0).abs() <= 1e-3 {
        warnings.push(format!("proportions sum to {sum}; rescaled to 1"));
        [a / sum, b / sum, c / sum]
    } else {
        return Err(CliError::invalid(format!("--proportions: proportions sum to {sum}, not 1")));
    };
    let bound = max_sector_fraction::<f64>();
    let largest = shares.iter().copied().fold(0.0, f64::max);
    if largest > bound {
        return Err(CliError::invalid(format!(
            "--proportions: infeasible, largest proportion {largest} exceeds {bound:.6}; \
             one slice of a regular 3-blade cut has area at most π − 2(π/6 − √3/4) ≈ 0.9423π"
        )));
    }
    Ok(shares)
}

fn parse_start(s: &str) -> CliResult<Vec<f64>> {
    if s == "reference" {
        return Ok(REFERENCE_SOLUTION_40_35_25.to_vec());
    }
    let v = crate::parse_list(s).map_err(|e| CliError::invalid(format!("--start: {e}")))?;
    if v.len() != PIECUT_VARS.len() {
        return Err(CliError::invalid(format!(
            "--start: expected {} values ({}), got {}",
            PIECUT_VARS.len(),
            PIECUT_VARS.join(","),
            v.len()
        )));
    }
    Ok(v)
}

fn solution_value(s: &PieCutSolution<f64>) -> Value {
    json!({
        "values": s.values,
        "orientation": orientation_name(s.orientation),
        "residual": s.residual,
    })
}

/// Chart layout drawn by a cut: rays from the cutter center through the
/// three boundary points.
fn cut_layout(s: &PieCutSolution<f64>) -> eccpie::Result<ChartLayout<f64>> {
    let apex = s.apex();
    let sign = s.orientation.sign::<f64>();
    let first = s.boundary_points()[0].sub(apex).angle();
    let rays = s
        .boundary_points()
        .iter()
        .map(|p| first + sign * ((p.sub(apex).angle() - first) * sign).rem_euclid(2.0 * PI))
        .collect();
    ChartLayout::from_rays(apex, rays, s.orientation)
}

fn reference_check(shares: &[f64; 3], rep: &PieCutReport<f64>) -> Option<Value> {
    if *shares != REFERENCE_SHARES {
        return None;
    }
    let closest = rep
        .solutions()
        .map(|s| {
            s.values
                .iter()
                .zip(REFERENCE_SOLUTION_40_35_25)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min);
    let closest = closest.is_finite().then_some(closest);
    Some(json!({
        "reference": REFERENCE_SOLUTION_40_35_25,
        "closest_max_abs_deviation": closest,
        "tolerance": REFERENCE_TOL,
        "agrees": closest.is_some_and(|d| d < REFERENCE_TOL),
    }))
}

pub fn cut(a: CutArgs) -> CliResult {
    let mut clock = Stopwatch::start();
    let mut warnings = Vec::new();
    let shares = check_proportions(&a.proportions, &mut warnings)?;
    let mut cfg = PieCutConfig::with_seed(a.seed);
    cfg.pipeline.solve.path_budget = a.path_budget;
    let mode = match a.mode {
        Mode::Oracle => PieCutMode::Oracle,
        Mode::Pipeline => PieCutMode::Pipeline,
        Mode::Refine => {
            if a.start.is_empty() {
                return Err(CliError::invalid("--start: refine mode needs at least one starting point"));
            }
            cfg.starts = a.start.iter().map(|s| parse_start(s)).collect::<CliResult<_>>()?;
            PieCutMode::RefineOnly
        }
    };
    let rep = solve_piecut(shares[0], shares[1], mode, &cfg).map_err(|e| CliError::flag("--proportions", e))?;
    clock.lap("solve");
    if rep.classes.is_empty() {
        return Err(CliError::internal(format!(
            "no cut found for {shares:?}: {}",
            rep.diagnostics.join("; ")
        )));
    }
    let layouts = rep
        .classes
        .iter()
        .map(|c| cut_layout(&c.representative))
        .collect::<eccpie::Result<Vec<_>>>()?;
    let svg = render_svg(&layouts, &SvgOptions::default());
    clock.lap("render");

    let mut report = RunReport::new(
        "cut",
        json!({
            "proportions": shares,
            "mode": a.mode.to_possible_value().map(|v| v.get_name().to_string()),
            "seed": a.seed,
            "path_budget": a.path_budget.to_string(),
        }),
    );
    warnings.extend(rep.warnings.iter().cloned());
    report.warnings = warnings;
    report.reference_check = reference_check(&shares, &rep);
    report.solutions = json!({
        "variables": PIECUT_VARS,
        "classes": rep.classes.iter().map(|c| json!({
            "size": c.size,
            "representative": solution_value(&c.representative),
            "members": c.members.iter().map(solution_value).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "diagnostics": rep.diagnostics,
        "roots": rep.roots.as_ref().map(to_value),
    });
    report.timing_ms = clock.into_report(a.out.timing);

    let mut summary = String::new();
    for (k, c) in rep.classes.iter().enumerate() {
        let s = &c.representative;
        summary += &format!(
            "solution class {} ({} mirror images, {}; residual {:.1e})\n",
            k + 1,
            c.size,
            orientation_name(s.orientation),
            s.residual
        );
        for (name, v) in s.named() {
            summary += &format!("  {name:<7} = {v:.9}\n");
        }
    }
    if let Some(check) = &report.reference_check {
        summary += &format!("reference agreement: {}\n", check["agrees"]);
    }
    finish(&report, &a.out, Some(svg), &summary)
}

fn build_system(a: &SolvePolyArgs) -> CliResult<PolySystem<f64>> {
    if let Some(path) = &a.system {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("--system: cannot read {}: {e}", path.display())))?;
        return parse_system(&text).map_err(|e| CliError::flag("--system", e));
    }
    let taylor = arccos_taylor(a.taylor_center, a.taylor_terms).map_err(|e| CliError::flag("--taylor-center", e))?;
    match a.builtin.expect("clap requires --system or --builtin") {
        Builtin::Piecut => {
            let p = &a.proportions;
            if !(p.len() == 2 || p.len() == 3) {
                return Err(CliError::invalid("--proportions: expected 2 or 3 values"));
            }
            build_piecut_system(p[0], p[1], &taylor).map_err(|e| CliError::flag("--proportions", e))
        }
        Builtin::SingleSector => build_single_sector_system(a.lambda, Point2::new(a.apex.0, a.apex.1), &taylor)
            .map_err(|e| {
                let flag = if matches!(e, Error::ApexOutside { .. }) { "--apex" } else { "--lambda" };
                CliError::flag(flag, e)
            }),
    }
}

pub fn solve_poly(a: SolvePolyArgs) -> CliResult {
    let mut clock = Stopwatch::start();
    let sys = build_system(&a)?;
    if a.export_only {
        let text = export_system(&sys);
        return match &a.out {
            Some(path) => write_output(path, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        };
    }
    clock.lap("build");
    let mut cfg = PipelineConfig::with_seed(a.seed);
    cfg.solve.path_budget = a.path_budget;
    let budget_err = |e: Error| CliError::flag("--path-budget", e);
    let (roots, refined, failures) = if sys.exact().is_some() {
        let out = solve_pipeline(&sys, &cfg).map_err(budget_err)?;
        (out.roots, out.refined, out.failures)
    } else {
        (total_degree_solve(&sys, &cfg.solve).map_err(budget_err)?, Vec::new(), Vec::new())
    };
    clock.lap("solve");

    let mut report = RunReport::new(
        "solve-poly",
        json!({
            "system": a.system.as_ref().map(|p| p.display().to_string()),
            "builtin": a.builtin.and_then(|b| b.to_possible_value()).map(|v| v.get_name().to_string()),
            "variables": sys.var_names(),
            "degrees": sys.degrees(),
            "bezout_number": sys.bezout_number().to_string(),
            "seed": a.seed,
            "path_budget": a.path_budget.to_string(),
        }),
    );
    report.warnings = sys.warnings().to_vec();
    report.warnings.extend(roots.warnings.iter().cloned());
    report.solutions = json!({
        "roots": to_value(&roots),
        "refined": to_value(&refined),
        "refinement_failures": failures,
    });
    report.timing_ms = clock.into_report(a.timing);

    let count = |c: RootClass| roots.roots.iter().filter(|r| r.classification == c).count();
    let mut summary = format!(
        "{} paths ({} converged, {} diverged); {} complex, {} real rejected, {} real accepted\n",
        roots.paths.total,
        roots.paths.converged,
        roots.paths.diverged,
        count(RootClass::Complex),
        count(RootClass::RealRejected),
        count(RootClass::RealAccepted),
    );
    for r in &refined {
        summary += &format!("refined root ({} iterations):", r.iterations);
        for (name, v) in sys.var_names().iter().zip(&r.refined) {
            summary += &format!(" {name}={v:.9}");
        }
        summary.push('\n');
    }
    let out = Output {
        svg: None,
        json: a.json.clone(),
        timing: a.timing,
    };
    finish(&report, &out, None, &summary)
}

pub fn pizza(a: PizzaArgs) -> CliResult {
    let apex = Point2::new(a.apex.0, a.apex.1);
    let (even, odd) = pizza_check(apex, a.blades, a.alpha).map_err(|e| {
        let flag = if matches!(e, Error::ApexOutside { .. }) { "--apex" } else { "--blades" };
        CliError::flag(flag, e)
    })?;
    let mut report = RunReport::new(
        "pizza",
        json!({ "apex": [a.apex.0, a.apex.1], "blades": a.blades, "alpha": a.alpha }),
    );
    report.solutions = json!({
        "sectors": 2 * a.blades,
        "even_sum": even,
        "odd_sum": odd,
        "even_deviation": even - FRAC_PI_2,
        "odd_deviation": odd - FRAC_PI_2,
    });
    let summary = format!(
        "even sectors: {even:.15} (π/2 {:+.1e})\nodd sectors:  {odd:.15} (π/2 {:+.1e})\n",
        even - FRAC_PI_2,
        odd - FRAC_PI_2
    );
    let out = Output {
        svg: None,
        json: a.json,
        timing: false,
    };
    finish(&report, &out, None, &summary)
}

pub fn grid(a: GridArgs) -> CliResult {
    let mut clock = Stopwatch::start();
    let grid = apex_grid::<f64>()?;
    clock.lap("solve");
    let cells: Vec<ChartLayout<f64>> = grid.into_iter().flatten().collect();
    let svg = render_svg(
        &cells,
        &SvgOptions {
            labels: !a.no_labels,
            columns: 3,
            ..SvgOptions::default()
        },
    );
    clock.lap("render");
    let mut report = RunReport::new("grid", json!({ "shares": eccpie::charts::GRID_SHARES }));
    report.solutions = to_value(&cells);
    report.timing_ms = clock.into_report(a.out.timing);
    let mut summary = String::new();
    for c in &cells {
        let worst = c
            .sector_areas
            .iter()
            .zip(&c.shares)
            .map(|(x, s)| (x - s * PI).abs())
            .fold(0.0, f64::max);
        summary += &format!("apex ({:+.1}, {:+.1}): max area error {worst:.1e}\n", c.apex.x, c.apex.y);
    }
    finish(&report, &a.out, Some(svg), &summary)
}
