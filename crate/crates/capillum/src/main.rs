use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_8};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use capillum::io::{direction_file, read_body, read_directions};
use capillum::parallel::{parallel_estimate, sweep_many_timed};
use capillum::report::{
    grid_name, BoundRow, Format, IlpRow, MeasureRow, Output, StressRow, Tabular, VertexRow,
};
use capillum::{AppError, AppResult};
use capillum_core::explicit::{explicit_report, ExplicitReport};
use capillum_core::ilp::{build_weights, solve_exact, Grid, GridKind};
use capillum_core::oracle::{
    check_packing_lemma, illuminate, mc_cap_measure, mc_intersection_measure, mc_union_measure, sample_sphere,
    verify_illumination, Provenance, Rng,
};
use capillum_core::search::{SweepConfig, REFERENCE_ROWS};
use capillum_core::sphere::{
    cap_measure, cap_measure_bounds, intersection_measure_exact, intersection_measure_upper, union_measure_upper,
    Angle, MeasureKind, QuadratureConfig, VertexFamily,
};
use capillum_core::Error;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

/// Certified upper bounds on illumination numbers of cap bodies.
///
/// The thread count of parallel commands follows RAYON_NUM_THREADS; results do not
/// depend on it.
#[derive(Debug, Parser)]
#[command(name = "capillum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock runtimes (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    /// Number of radius buckets.
    #[arg(long, default_value_t = 200)]
    t: usize,
    /// Riemann steps for the pairwise-intersection bound.
    #[arg(long = "N", default_value_t = 200)]
    steps: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    grid: GridArg,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum GridArg {
    Uniform,
    Degree,
}

impl From<GridArg> for GridKind {
    fn from(g: GridArg) -> Self {
        match g {
            GridArg::Uniform => GridKind::Uniform,
            GridArg::Degree => GridKind::Degree,
        }
    }
}

impl GridArgs {
    fn sweep_config(&self, prune: bool) -> SweepConfig {
        SweepConfig { t: self.t, steps: self.steps, grid: self.grid.into(), prune }
    }

    fn json(&self) -> serde_json::Value {
        json!({"t": self.t, "N": self.steps, "grid": grid_name(self.grid.into())})
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bounds for every n in 4..=15 alongside the published values.
    Table {
        #[command(flatten)]
        grid: GridArgs,
        /// Solve every (s, l) cell instead of skipping hopeless ones.
        #[arg(long)]
        no_prune: bool,
    },
    /// Bound for a single dimension.
    Bound {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        no_prune: bool,
    },
    /// Solve one integer program M_{s,l}.
    Ilp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Closed-form bound from rotated cross-polytopes.
    Explicit {
        #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
        n: Option<usize>,
        /// Inclusive range such as 9..40.
        #[arg(long, value_parser = parse_range)]
        sweep: Option<(usize, usize)>,
    },
    /// Cap, cap-bound and union measures at one radius.
    Measures {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        theta: f64,
        /// Also report the intersection of two caps of radius theta at distance 2·beta.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long = "N", default_value_t = 200)]
        steps: usize,
    },
    /// Check a direction set against a cap body, or construct one.
    Verify {
        /// Cap body JSON: {"n": int, "vertices": [[...], ...]}.
        #[arg(long)]
        body: PathBuf,
        /// Direction set JSON: {"n": int, "directions": [[...], ...]}.
        #[arg(long, conflicts_with_all = ["s", "l", "extra"])]
        dirs: Option<PathBuf>,
        /// Rotated simplices used when constructing directions.
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Rotated cross-polytopes used when constructing directions.
        #[arg(long, default_value_t = 0)]
        l: usize,
        /// Extra per-vertex directions allowed when constructing.
        #[arg(long, default_value_t = 7)]
        extra: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Save the constructed direction set.
        #[arg(long)]
        save_dirs: Option<PathBuf>,
    },
    /// Randomized checks of the packing lemma and of the measure formulas.
    Stress {
        /// Monte Carlo samples per measure check.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Random point sets per dimension for the packing check.
        #[arg(long, default_value_t = 10_000)]
        sets: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a range like 9..40, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

fn kind_name(kind: MeasureKind) -> &'static str {
    match kind {
        MeasureKind::Exact => "exact",
        MeasureKind::UpperBound => "upper-bound",
        MeasureKind::LowerBound => "lower-bound",
    }
}

struct Rendered {
    text: String,
    failed: Option<String>,
}

fn render<T: Serialize + Tabular>(out: Output<'_, T>, cli: &Cli) -> AppResult<Rendered> {
    Ok(Rendered { text: out.render(cli.format)?, failed: None })
}

fn bounds(cli: &Cli, command: &'static str, dims: &[usize], grid: &GridArgs, prune: bool) -> AppResult<Rendered> {
    let start = Instant::now();
    let reports = sweep_many_timed(dims, &grid.sweep_config(prune))?;
    let rows: Vec<BoundRow> =
        reports.iter().map(|(r, secs)| BoundRow::new(r, cli.timing.then_some(*secs))).collect();
    let mut parameters = grid.json();
    parameters["prune"] = json!(prune);
    let notes: serde_json::Map<String, serde_json::Value> =
        rows.iter().filter_map(|r| r.note.map(|note| (format!("note_n{}", r.n), json!(note)))).collect();
    render(
        Output {
            command,
            parameters,
            summary: (!notes.is_empty()).then_some(serde_json::Value::Object(notes)),
            rows,
            runtime_seconds: cli.timing.then(|| start.elapsed().as_secs_f64()),
        },
        cli,
    )
}

fn run(cli: &Cli) -> AppResult<Rendered> {
    let start = Instant::now();
    let runtime = || cli.timing.then(|| start.elapsed().as_secs_f64());
    match &cli.command {
        Command::Table { grid, no_prune } => {
            let dims: Vec<usize> = REFERENCE_ROWS.iter().map(|r| r.0).collect();
            bounds(cli, "table", &dims, grid, !no_prune)
        }
        Command::Bound { n, grid, no_prune } => bounds(cli, "bound", &[*n], grid, !no_prune),
        Command::Ilp { n, s, l, grid } => {
            let g = Grid::new(grid.grid.into(), *n, grid.t)?;
            let table = build_weights(*n, &g, grid.steps)?;
            let sol = solve_exact(&table.instance(*s, *l));
            let row = IlpRow {
                n: *n,
                s: *s,
                l: *l,
                t: g.t(),
                steps: grid.steps,
                grid: grid_name(g.kind()),
                m: sol.objective,
                assignment: sol.sparse_assignment(),
                lp_bound: sol.lp_bound,
                gap: sol.gap,
                nodes_explored: sol.nodes_explored,
            };
            let mut parameters = grid.json();
            parameters["n"] = json!(n);
            parameters["s"] = json!(s);
            parameters["l"] = json!(l);
            render(Output { command: "ilp", parameters, summary: None, rows: vec![row], runtime_seconds: runtime() }, cli)
        }
        Command::Explicit { n, sweep } => {
            let (lo, hi) = match (n, sweep) {
                (Some(n), _) => (*n, *n),
                (None, Some(r)) => *r,
                (None, None) => unreachable!("clap requires one of --n / --sweep"),
            };
            let rows: Vec<ExplicitReport> =
                (lo..=hi).into_par_iter().map(explicit_report).collect::<capillum_core::Result<_>>()?;
            let parameters = json!({"n_min": lo, "n_max": hi});
            render(Output { command: "explicit", parameters, summary: None, rows, runtime_seconds: runtime() }, cli)
        }
        Command::Measures { n, theta, beta, steps } => {
            let (n, steps) = (*n, *steps);
            let angle = Angle::new(*theta)?;
            let row = |measure, kind, value| MeasureRow { n, theta: *theta, measure, kind, value };
            let cap = cap_measure(n, angle)?;
            let mut rows = vec![row("cap", kind_name(cap.kind), cap.value)];
            if angle.radians() > 0.0 {
                let b = cap_measure_bounds(n, angle)?;
                rows.push(row("cap_lower", "lower-bound", b.lower));
                if let Some(u) = b.upper {
                    rows.push(row("cap_upper", "upper-bound", u));
                }
                for (name, family) in
                    [("union_simplex", VertexFamily::simplex(n)?), ("union_cross_polytope", VertexFamily::cross_polytope(n)?)]
                {
                    if n >= 4 {
                        let u = union_measure_upper(&family, angle, steps)?;
                        rows.push(row(name, kind_name(u.kind), u.value));
                    }
                }
            }
            if let Some(beta) = beta {
                let b = Angle::new(*beta)?;
                let cfg = QuadratureConfig::new(steps, 1e-10)?;
                let exact = intersection_measure_exact(n, angle, b, &cfg)?;
                rows.push(row("intersection", kind_name(exact.kind), exact.value));
                let upper = intersection_measure_upper(n, angle, b, steps)?;
                rows.push(row("intersection_riemann", kind_name(upper.kind), upper.value));
            }
            let parameters = json!({"n": n, "theta": theta, "beta": beta, "N": steps});
            render(Output { command: "measures", parameters, summary: None, rows, runtime_seconds: runtime() }, cli)
        }
        Command::Verify { body, dirs, s, l, extra, seed, save_dirs } => {
            let body = read_body(body)?;
            let set = match dirs {
                Some(path) => read_directions(path)?,
                None => {
                    let mut rng = Rng::new(*seed);
                    illuminate(&body, *s, *l, *extra, &mut rng)?
                }
            };
            if let Some(path) = save_dirs {
                let text = serde_json::to_string_pretty(&direction_file(&set)).expect("directions serialize");
                std::fs::write(path, text + "\n")
                    .map_err(|source| AppError::Io { path: path.display().to_string(), source })?;
            }
            let verdict = verify_illumination(&body, &set)?;
            let rows: Vec<VertexRow> = verdict
                .lit
                .iter()
                .enumerate()
                .map(|(i, &lit)| VertexRow { vertex: i, radius: body.radius(i), lit })
                .collect();
            let extra_dirs = set.provenance().iter().filter(|p| matches!(p, Provenance::Vertex(_))).count();
            let summary = json!({
                "directions": set.len(),
                "vertex_directions": extra_dirs,
                "spans": verdict.spans,
                "illuminated": verdict.illuminated,
            });
            let parameters = json!({"n": body.dim(), "vertices": body.len(), "constructed": dirs.is_none(),
                "s": s, "l": l, "extra": extra, "seed": seed});
            render(
                Output { command: "verify", parameters, summary: Some(summary), rows, runtime_seconds: runtime() },
                cli,
            )
        }
        Command::Stress { samples, sets, seed } => {
            let rows = stress(*samples, *sets, *seed)?;
            let failures = rows.iter().filter(|r| !r.passed).count();
            let parameters = json!({"samples": samples, "sets": sets, "seed": seed, "rng": Rng::ALGORITHM});
            let summary = json!({"checks": rows.len(), "failures": failures});
            let text = Output { command: "stress", parameters, summary: Some(summary), rows, runtime_seconds: runtime() }
                .render(cli.format)?;
            Ok(Rendered { text, failed: (failures > 0).then(|| format!("{failures} stress checks failed")) })
        }
    }
}

fn stress(samples: u64, sets: usize, seed: u64) -> AppResult<Vec<StressRow>> {
    let root = Rng::new(seed);
    let mut rows: Vec<StressRow> = (3usize..=10)
        .into_par_iter()
        .map(|n| {
            let mut rng = root.split(n as u64);
            let mut bad = 0u64;
            for _ in 0..sets {
                let pts = sample_sphere(n, n + 2, &mut rng)?;
                match check_packing_lemma(&pts) {
                    Ok(_) => {}
                    Err(Error::PackingCounterexample(_)) => bad += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok(StressRow {
                check: "packing_lemma",
                n,
                parameter: (n + 2) as f64,
                expected: 0.0,
                estimate: bad as f64,
                std_error: 0.0,
                trials: sets as u64,
                passed: bad == 0,
            })
        })
        .collect::<capillum_core::Result<_>>()?;

    let mut stream = 100u64;
    let mut next_seed = || {
        stream += 1;
        seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream)
    };
    for (n, theta) in [(4, FRAC_PI_4), (6, 1.0), (8, 1.2), (10, 1.4)] {
        let a = Angle::new(theta)?;
        let exact = cap_measure(n, a)?.value;
        let est = parallel_estimate(samples, next_seed(), |s, rng| mc_cap_measure(n, a, s, rng))?;
        rows.push(mc_row("cap", n, theta, exact, est, est.agrees_with(exact, 4.0)));
    }
    let cfg = QuadratureConfig::default();
    for (n, alpha, beta) in [(5, FRAC_PI_3, FRAC_PI_8), (6, 1.1, FRAC_PI_4)] {
        let (a, b) = (Angle::new(alpha)?, Angle::new(beta)?);
        let exact = intersection_measure_exact(n, a, b, &cfg)?.value;
        let est = parallel_estimate(samples, next_seed(), |s, rng| mc_intersection_measure(n, a, b, s, rng))?;
        rows.push(mc_row("intersection", n, alpha, exact, est, est.agrees_with(exact, 4.0)));
    }
    for (name, family, theta) in [
        ("union_cross_polytope", VertexFamily::cross_polytope(6)?, 0.9),
        ("union_simplex", VertexFamily::simplex(5)?, 1.0),
    ] {
        let a = Angle::new(theta)?;
        let bound = union_measure_upper(&family, a, 200)?.value;
        let est = parallel_estimate(samples, next_seed(), |s, rng| mc_union_measure(&family, a, s, rng))?;
        let ok = bound <= est.estimate + 4.0 * est.std_error;
        rows.push(mc_row(name, family.dim(), theta, bound, est, ok));
    }
    Ok(rows)
}

fn mc_row(
    check: &'static str,
    n: usize,
    parameter: f64,
    expected: f64,
    est: capillum_core::oracle::McEstimate,
    passed: bool,
) -> StressRow {
    StressRow {
        check,
        n,
        parameter,
        expected,
        estimate: est.estimate,
        std_error: est.std_error,
        trials: est.samples,
        passed,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|r| {
        match &cli.out {
            Some(path) => std::fs::write(path, &r.text)
                .map_err(|source| AppError::Io { path: path.display().to_string(), source })?,
            None => print!("{}", r.text),
        }
        Ok(r.failed)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("capillum: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("capillum: {e}");
            match e {
                AppError::Usage(_) | AppError::Core(Error::Domain(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
