//! Command implementations. Output convention: machine-readable `key=value`
//! lines on stdout, human-readable summary lines prefixed with `# `. When a
//! command's payload (GMX/TMX/CSV/PLY) goes to stdout instead of a file,
//! only the payload is printed.

use std::fs;
use std::io::Read;

use dsm_core::analysis::{
    copula_sup_distance, d1_distance, first_nonuniform_cell, ks_uniformity, marginal,
    wasserstein1,
};
use dsm_core::cellset::{cellset_volume, hutchinson_iterate};
use dsm_core::chaos::{chaos_game, DEFAULT_BURN_IN};
use dsm_core::constructions::{checkerboard_tau, checkerboard_tau_from_cloud};
use dsm_core::error::Error as CoreError;
use dsm_core::formats::{
    parse_cloud_csv, parse_tmx_raw, write_cells_csv, write_cells_rects, write_cloud_csv,
    write_gmx, write_ifsp_dump, write_ply, write_tmx,
};
use dsm_core::grid::GridMeasure;
use dsm_core::ifsp::{attractor_dimension, build_ifsp, similarity_dimension};
use dsm_core::matrix::TransformationMatrix;
use dsm_core::rational::{format_ratio, to_f64};

use crate::input::{is_csv_path, load_cloud, load_matrix, load_measure, parse_preset, Preset};
use crate::{CliError, Ctx, ExportKind, MetricCommand, SupportFormat};

type CmdResult = Result<(), CliError>;

fn core(e: CoreError) -> CliError {
    CliError::Core(e)
}

/// Writes `content` to `path` and records it in the manifest, or prints it
/// when no path is given.
fn emit(ctx: &mut Ctx, path: &Option<String>, content: &str) -> CmdResult {
    match path {
        Some(p) => {
            fs::write(p, content).map_err(|source| CliError::Io {
                path: p.clone(),
                source,
            })?;
            ctx.manifest.record_output(p, content);
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn validate(ctx: &mut Ctx, input: &str) -> CmdResult {
    let t = match parse_preset(input)? {
        Some(Preset::Matrix(t)) => t,
        Some(Preset::Measure(_)) => {
            return Err(CliError::Usage(format!(
                "`{input}` is a measure preset; validate needs a transformation matrix"
            )))
        }
        None => {
            let text = fs::read_to_string(input).map_err(|source| CliError::Io {
                path: input.to_string(),
                source,
            })?;
            parse_tmx_raw(&text).map_err(core)?
        }
    };
    println!("input={input}");
    let report = t.validate();
    println!("matrix={}", if report.is_ok() { "ok" } else { "invalid" });
    println!("mass={}", format_ratio(&report.total_mass));
    for slice in &report.empty_slices {
        println!("violation=empty_slice j={} k={}", slice.axis + 1, slice.level);
    }
    if !report.is_ok() {
        println!("# invalid transformation matrix: {}", report.describe());
        return Err(CliError::ValidationFailed);
    }
    println!("support={}", t.support_size());
    for axis in 0..t.d() {
        let check = t.uniformity_wrt(axis);
        println!("uniform_coord_{}={}", axis + 1, check.holds);
        if let Some(v) = check.violation {
            println!("# coordinate {}: {}", axis + 1, v);
        }
    }
    let class_n = t.uniform_class_n();
    println!("uniform_class={}", class_n.is_some());
    if let Some(n) = class_n {
        println!("uniform_class_n={n}");
    }
    match attractor_dimension(&t) {
        Ok(dim) => println!("dimension={dim:.12}"),
        Err(CoreError::NotSimilaritySystem) => println!("dimension=unavailable"),
        Err(e) => return Err(core(e)),
    }
    println!(
        "# ok: {} support points on {:?}",
        t.support_size(),
        t.dims().m()
    );
    ctx.manifest.setting("validated", input);
    Ok(())
}

pub fn example(ctx: &mut Ctx, preset: &str, out: &Option<String>) -> CmdResult {
    match parse_preset(preset)? {
        Some(Preset::Matrix(t)) => emit(ctx, out, &write_tmx(&t)),
        Some(Preset::Measure(mu)) => emit(ctx, out, &write_gmx(&mu)),
        None => Err(CliError::Usage(format!("unknown preset `{preset}`"))),
    }
}

pub fn iterate(ctx: &mut Ctx, input: &str, n: usize, out_dir: &str) -> CmdResult {
    let t = load_matrix(input)?;
    let iterates = dsm_core::grid::iterate_markov(
        &t,
        &GridMeasure::lebesgue(t.d()),
        n,
        ctx.cell_budget,
    )
    .map_err(core)?;
    ctx.manifest.setting("budget", ctx.cell_budget);
    println!("input={input}");
    println!("n={n}");
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_string(),
        source,
    })?;
    // n = 0 echoes the start measure; otherwise iterates 1..n are written.
    let range = if n == 0 { 0..=0 } else { 1..=n };
    for k in range {
        let mu = &iterates[k];
        let path = format!("{out_dir}/iterate_{k}.gmx");
        let content = write_gmx(mu);
        fs::write(&path, &content).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        ctx.manifest.record_output(&path, &content);
        let mut verdicts = String::new();
        for axis in 0..mu.d() {
            let uniform = first_nonuniform_cell(mu, axis).map_err(core)?.is_none();
            verdicts.push_str(&format!(" marginal_uniform_{}={}", axis + 1, uniform));
        }
        println!("iterate={k} cells={} file={path}{verdicts}", mu.len());
    }
    Ok(())
}

pub fn support(
    ctx: &mut Ctx,
    input: &str,
    n: usize,
    format: SupportFormat,
    out: &Option<String>,
    weld: bool,
) -> CmdResult {
    let t = load_matrix(input)?;
    let cells = hutchinson_iterate(&t, n, ctx.cell_budget).map_err(core)?;
    ctx.manifest.setting("budget", ctx.cell_budget);
    let content = match format {
        SupportFormat::Rects => write_cells_rects(&cells),
        SupportFormat::Csv => write_cells_csv(&cells),
        SupportFormat::Ply => write_ply(&cells, weld).map_err(core)?,
    };
    let volume = cellset_volume(&cells);
    if out.is_some() {
        println!("input={input}");
        println!("n={n}");
        println!("cells={}", cells.len());
        println!("volume={}", format_ratio(&volume));
        if let Some(bound) = singular_volume_bound(&t, n) {
            println!("volume_bound={}", format_ratio(&bound));
        } else {
            println!("volume_bound=none");
        }
    }
    emit(ctx, out, &content)
}

/// `(1-q)^n` with `q` the largest cell volume among zero-mass indices;
/// `None` for full-support matrices.
fn singular_volume_bound(t: &TransformationMatrix, n: usize) -> Option<dsm_core::Rational> {
    let system = build_ifsp(t).ok()?;
    let partition = system.partition();
    let mut best: Option<dsm_core::Rational> = None;
    for index in t.dims().all_indices() {
        if t.contains(&index) {
            continue;
        }
        let volume: dsm_core::Rational = index
            .levels()
            .iter()
            .enumerate()
            .map(|(axis, &level)| partition.cell_length(axis, level))
            .product();
        if best.as_ref().is_none_or(|b| volume > *b) {
            best = Some(volume);
        }
    }
    let q = best?;
    let shrink = dsm_core::rational::one() - q;
    Some((0..n).map(|_| shrink.clone()).product())
}

pub fn sample(
    ctx: &mut Ctx,
    input: &str,
    count: usize,
    burn_in: Option<usize>,
    out: &Option<String>,
) -> CmdResult {
    let t = load_matrix(input)?;
    let burn_in = burn_in.unwrap_or(DEFAULT_BURN_IN);
    let cloud = chaos_game(&t, count, ctx.seed, burn_in).map_err(core)?;
    ctx.manifest.setting("seed", ctx.seed);
    ctx.manifest.setting("burn_in", burn_in);
    ctx.manifest.setting("algo", cloud.algo());
    emit(ctx, out, &write_cloud_csv(&cloud))?;
    if out.is_some() {
        println!("input={input}");
        println!("count={count}");
        println!("seed={}", ctx.seed);
        println!("algo={}", cloud.algo());
    }
    Ok(())
}

pub fn marginal_cmd(ctx: &mut Ctx, input: &str, drop: usize, out: &Option<String>) -> CmdResult {
    if drop == 0 {
        return Err(CliError::Usage("coordinates are 1-based".into()));
    }
    let mu = load_measure(input)?;
    let m = marginal(&mu, drop - 1).map_err(core)?;
    if out.is_some() {
        println!("input={input}");
        println!("drop={drop}");
        let res: Vec<String> = m.resolution().iter().map(|r| r.to_string()).collect();
        println!("resolution={}", res.join(" "));
        println!("uniform={}", m.is_uniform());
    }
    emit(ctx, out, &write_gmx(&m))
}

pub fn metric(ctx: &mut Ctx, cmd: &MetricCommand) -> CmdResult {
    match cmd {
        MetricCommand::Wasserstein { a, b, plan } => {
            let mu = load_measure(a)?;
            let nu = load_measure(b)?;
            let w = wasserstein1(&mu, &nu, ctx.transport_budget).map_err(core)?;
            ctx.manifest.setting("budget", ctx.transport_budget);
            w.plan.verify_feasibility(&mu, &nu).map_err(core)?;
            println!("metric=wasserstein");
            println!("a={a}");
            println!("b={b}");
            println!("cells_a={}", mu.len());
            println!("cells_b={}", nu.len());
            println!("distance={:.16e}", w.distance);
            println!("discretization_bound={:.16e}", w.discretization_bound);
            println!("feasible=true");
            if let Some(path) = plan {
                let mut text = String::from("# source target flow\n");
                for (i, j, flow) in &w.plan.flows {
                    let src: Vec<String> =
                        w.plan.source_cells[*i].iter().map(|c| c.to_string()).collect();
                    let dst: Vec<String> =
                        w.plan.target_cells[*j].iter().map(|c| c.to_string()).collect();
                    text.push_str(&format!(
                        "{} {} {:.16e}\n",
                        src.join(","),
                        dst.join(","),
                        to_f64(flow)
                    ));
                }
                emit(ctx, &Some(path.clone()), &text)?;
                println!("plan_file={path}");
            }
            println!(
                "# W1 = {:.6} (discretization bound {:.6})",
                w.distance, w.discretization_bound
            );
        }
        MetricCommand::D1 { a, b } => {
            let mu = load_measure(a)?;
            let nu = load_measure(b)?;
            let value = d1_distance(&mu, &nu).map_err(core)?;
            println!("metric=d1");
            println!("a={a}");
            println!("b={b}");
            println!("d1={}", format_ratio(&value));
            println!("d1_float={:.16e}", to_f64(&value));
            println!("# D1 = {:.6}", to_f64(&value));
        }
        MetricCommand::Sup { a, b } => {
            let mu = load_measure(a)?;
            let nu = load_measure(b)?;
            let dist = copula_sup_distance(&mu, &nu).map_err(core)?;
            println!("metric=sup");
            println!("a={a}");
            println!("b={b}");
            println!("vertex_max={}", format_ratio(&dist.vertex_max));
            println!("lipschitz_slack={}", format_ratio(&dist.lipschitz_slack));
            println!("bound={}", format_ratio(&dist.bound()));
            let refinement: Vec<String> =
                dist.refinement.iter().map(|r| r.to_string()).collect();
            println!("refinement={}", refinement.join(" "));
            println!(
                "# sup-distance <= {:.6} (vertex max {:.6} + slack {:.6})",
                dist.bound_f64(),
                dist.vertex_max_f64(),
                to_f64(&dist.lipschitz_slack)
            );
        }
        MetricCommand::Ks { file, coord } => {
            if *coord == 0 {
                return Err(CliError::Usage("coordinates are 1-based".into()));
            }
            let cloud = match file {
                Some(path) => load_cloud(path)?,
                None => {
                    let mut text = String::new();
                    std::io::stdin()
                        .read_to_string(&mut text)
                        .map_err(|source| CliError::Io {
                            path: "<stdin>".to_string(),
                            source,
                        })?;
                    parse_cloud_csv(&text).map_err(core)?
                }
            };
            if *coord > cloud.d() {
                return Err(CliError::Usage(format!(
                    "coordinate {coord} out of range for dimension {}",
                    cloud.d()
                )));
            }
            let result = ks_uniformity(&cloud.coordinate(coord - 1)).map_err(core)?;
            println!("metric=ks");
            println!("coord={coord}");
            println!("n={}", result.n);
            println!("statistic={:.16e}", result.statistic);
            println!("p_value={:.16e}", result.p_value);
            println!(
                "# KS D = {:.6}, p = {:.4}",
                result.statistic, result.p_value
            );
        }
    }
    Ok(())
}

pub fn dimension(ctx: &mut Ctx, input: &str) -> CmdResult {
    let t = load_matrix(input)?;
    println!("input={input}");
    println!("support={}", t.support_size());
    let class_n = t.uniform_class_n();
    println!("uniform_class={}", class_n.is_some());
    if let Some(n) = class_n {
        println!("uniform_class_n={n}");
        println!(
            "dimension_closed={:.12}",
            (t.support_size() as f64).ln() / (n as f64).ln()
        );
    }
    let system = build_ifsp(&t).map_err(core)?;
    match system.similarity_factors() {
        Ok(factors) => {
            let dim = similarity_dimension(&factors, ctx.tol).map_err(core)?;
            println!("dimension_bisection={dim:.12}");
            println!("tol={:e}", ctx.tol);
            ctx.manifest.setting("tol", format!("{:e}", ctx.tol));
            println!("# attractor dimension {dim:.9}");
        }
        Err(CoreError::NotSimilaritySystem) => {
            println!("dimension_bisection=unavailable");
            println!("# induced system is not a similarity system");
        }
        Err(e) => return Err(core(e)),
    }
    Ok(())
}

pub fn checkerboard(ctx: &mut Ctx, input: &str, boxes: usize, out: &Option<String>) -> CmdResult {
    let (t, from_samples) = if is_csv_path(input) {
        let cloud = load_cloud(input)?;
        (
            checkerboard_tau_from_cloud(&cloud, boxes).map_err(core)?,
            true,
        )
    } else {
        let mu = load_measure(input)?;
        (checkerboard_tau(&mu, boxes).map_err(core)?, false)
    };
    if out.is_some() {
        println!("input={input}");
        println!("boxes={boxes}");
        println!("source={}", if from_samples { "samples" } else { "grid" });
        println!("approx={from_samples}");
        println!("uniform_class={}", t.is_uniform_class(boxes));
    }
    ctx.manifest
        .setting("approx", if from_samples { "true" } else { "false" });
    emit(ctx, out, &write_tmx(&t))
}

pub fn export(ctx: &mut Ctx, input: &str, what: ExportKind, out: &Option<String>) -> CmdResult {
    let t = load_matrix(input)?;
    let content = match what {
        ExportKind::Ifsp => write_ifsp_dump(&build_ifsp(&t).map_err(core)?),
        ExportKind::Tmx => write_tmx(&t),
    };
    emit(ctx, out, &content)
}
