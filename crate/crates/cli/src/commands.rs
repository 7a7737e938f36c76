//! Subcommands and their handlers.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use halfspace_core::combinat::{SequenceKind, SequenceTable};
use halfspace_core::hankel::{build, closed_inverse, closed_inverse_factor, determinant_identity, factor, HankelKind};
use halfspace_core::lgv::{
    catalan_minor_graph, enumerate_detailed, grid_binomial, grid_catalan, lgv_check, two_taxis, GraphJson, WeightedDag,
};
use halfspace_core::network::planar_network_weights;
use halfspace_core::rational::{format_rational, matrix_from_json_str};
use halfspace_core::symbol::{alt_bc_scale, alt_bc_symbol, build_m, det_m, poisson_profile, product_operator_symbol};
use halfspace_core::ExactMatrix;
use halfspace_spectral::potential::truncation::worst_relative_moment;
use halfspace_spectral::potential::{
    calibrate, calibrate_fourier, kernel_k, moment_truncation, quadrature_tg, quadrature_tg_panels, riesz_decay_study,
    FundamentalSolution,
};
use halfspace_spectral::{extend_trace, forward_h, solve_g, validate, Density, Dirichlet, Field, Geometry};

use crate::acceptance;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::json;
use crate::synth::{band_pass_density, hermite, round_trip_band};

type DensityFn = Box<dyn Fn(&[f64]) -> f64 + Sync>;

/// Default bound on the number of paths explored by `lgv enumerate`.
const PATH_BOUND: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "halfspace", version, about = "Polyharmonic half-space toolkit")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sequence families as CSV (or JSON).
    Tables(TablesArgs),
    /// Hankel matrices B, B', C, C' with inverses, factors and determinants.
    Hankel(HankelArgs),
    /// Path counting on weighted DAGs.
    #[command(subcommand)]
    Lgv(LgvCommand),
    /// The boundary symbol matrix and its profiles.
    Symbol(SymbolArgs),
    /// Densities from Dirichlet data.
    Solve(SolveArgs),
    /// g → h → g through the boundary operator.
    Roundtrip(RoundtripArgs),
    /// The solution or one of its traces at a height.
    Extend(ExtendArgs),
    /// Direct-space potentials.
    #[command(subcommand)]
    Potential(PotentialCommand),
    /// The acceptance suite as a JSON scorecard.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_parser = SequenceKind::from_str)]
    pub kind: SequenceKind,
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct HankelArgs {
    #[arg(long, value_parser = HankelKind::from_str)]
    pub kind: HankelKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub inverse: bool,
    #[arg(long)]
    pub factor: bool,
    #[arg(long)]
    pub det: bool,
}

#[derive(Debug, Args)]
pub struct GraphSource {
    /// two-taxis, binomial, binomial-shifted, catalan, catalan-shifted or catalan-minor.
    #[arg(long, conflicts_with = "graph")]
    pub preset: Option<String>,
    /// Size for the grid presets.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Deleted origin and destination for catalan-minor.
    #[arg(long, default_value_t = 1)]
    pub row: usize,
    #[arg(long, default_value_t = 2)]
    pub col: usize,
    /// Graph JSON file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LgvCommand {
    /// Weighted number of paths between two vertices.
    Count {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Path matrix and its determinant.
    Matrix {
        #[command(flatten)]
        source: GraphSource,
        /// Also print the graph in JSON form.
        #[arg(long)]
        emit_graph: bool,
    },
    /// Brute-force search for non-intersecting path systems.
    Enumerate {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, default_value_t = PATH_BOUND)]
        bound: usize,
    },
    /// Determinant against the brute-force count.
    Verify {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Planar-network weights of a totally nonnegative matrix.
    Network {
        /// Matrix JSON file; defaults to the scaled H1 block for `--m`.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        m: usize,
    },
}

#[derive(Debug, Args)]
pub struct SymbolArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub det: bool,
    #[arg(long)]
    pub inverse: bool,
    #[arg(long)]
    pub tilde: bool,
    /// Poisson profile W_kj.
    #[arg(long, num_args = 2, value_names = ["K", "J"])]
    pub profile: Option<Vec<usize>>,
    #[arg(long)]
    pub alt_bc: bool,
    /// Radii of the product operator, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub product: Option<Vec<f64>>,
    /// Frequency for `--product`.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct OrderFlags {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GridFlags {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub extent: Option<f64>,
    #[arg(long = "grid-n")]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub order: OrderFlags,
    /// Field files h_0,…,h_{m-1}.
    #[arg(long, value_delimiter = ',')]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Exit 1 when the data fail validation.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub order: OrderFlags,
    #[command(flatten)]
    pub grid: GridFlags,
    /// Density files; seeded band-pass data when absent.
    #[arg(long, value_delimiter = ',')]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value_t = acceptance::ROUND_TRIP_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    #[command(flatten)]
    pub order: OrderFlags,
    #[arg(long, value_delimiter = ',')]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub xd: f64,
    /// Trace order; 0 is the solution itself.
    #[arg(long, default_value_t = 0)]
    pub trace: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PotentialCommand {
    /// Constant of the fundamental solution.
    Calibrate {
        #[command(flatten)]
        order: OrderFlags,
    },
    /// Layer kernel k_j(x, y).
    Kernel {
        #[command(flatten)]
        order: OrderFlags,
        #[arg(long)]
        j: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
    },
    /// Σ_j ∫ g_j k_j(x, ·) by quadrature.
    Quad {
        #[command(flatten)]
        order: OrderFlags,
        #[command(flatten)]
        grid: GridFlags,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        /// Sampled densities (grid rule).
        #[arg(long, value_delimiter = ',', conflicts_with = "hermite")]
        input: Vec<PathBuf>,
        /// Analytic densities g_j = G^{(k_j)} in the first coordinate times
        /// a Gaussian in the others (panel rule).
        #[arg(long, value_delimiter = ',')]
        hermite: Vec<usize>,
        /// Also evaluate the spectral extension at the nearest grid point.
        #[arg(long)]
        compare: bool,
    },
    /// Moment-preserving split into compact part and remainder.
    Truncate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fitted decay slope of D^α R_ℓ f.
    RieszDecay {
        #[command(flatten)]
        grid: GridFlags,
        #[arg(long, conflicts_with = "hermite")]
        input: Option<PathBuf>,
        /// Use the Gaussian derivative of this order on the configured grid.
        #[arg(long)]
        hermite: Option<usize>,
        /// Moment degree to check, if any.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 0)]
        dir: usize,
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<u32>>,
        #[arg(long, default_value_t = 8.0)]
        r_min: f64,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Criteria to run, comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<usize>,
}

fn load_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn apply_order(cfg: &mut RunConfig, o: &OrderFlags) -> CliResult<()> {
    if let Some(m) = o.m {
        cfg.solver.m = m;
    }
    if let Some(d) = o.d {
        cfg.solver.d = d;
    }
    cfg.check()
}

fn apply_grid(cfg: &mut RunConfig, g: &GridFlags) -> CliResult<()> {
    if let Some(v) = g.dim {
        cfg.grid.dim = v;
    }
    if let Some(v) = g.extent {
        cfg.grid.extent = v;
    }
    if let Some(v) = g.n {
        cfg.grid.n = v;
    }
    cfg.check()
}

/// Runs a parsed command. JSON goes to stdout.
pub fn execute(cli: &Cli) -> CliResult<()> {
    let mut cfg = load_config(cli)?;
    match &cli.command {
        Command::Tables(a) => tables(a),
        Command::Hankel(a) => hankel(a),
        Command::Lgv(c) => lgv(c),
        Command::Symbol(a) => symbol(a),
        Command::Solve(a) => {
            apply_order(&mut cfg, &a.order)?;
            solve(&cfg, a)
        }
        Command::Roundtrip(a) => {
            apply_order(&mut cfg, &a.order)?;
            apply_grid(&mut cfg, &a.grid)?;
            roundtrip(&cfg, a)
        }
        Command::Extend(a) => {
            apply_order(&mut cfg, &a.order)?;
            extend_cmd(&cfg, a)
        }
        Command::Potential(c) => potential(&mut cfg, c),
        Command::VerifyAll(a) => verify_all(a),
    }
}

fn tables(a: &TablesArgs) -> CliResult<()> {
    if a.n < 0 {
        return Err(CliError::Usage("--n must be non-negative".into()));
    }
    let rows = SequenceTable::new(a.kind).triangle(a.n);
    if a.json {
        let v: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(json::rational).collect()).collect();
        json::print(&json!({ "kind": a.kind.name(), "n": a.n, "rows": v }));
    } else {
        for (i, r) in rows.iter().enumerate() {
            let cells: Vec<String> = r.iter().map(format_rational).collect();
            println!("{i},{}", cells.join(","));
        }
    }
    Ok(())
}

fn hankel(a: &HankelArgs) -> CliResult<()> {
    let h = build(a.kind, a.n)?;
    let mut out = json!({ "kind": a.kind.label(), "n": a.n, "matrix": json::matrix(&h) });
    let mut ok = true;
    if a.inverse {
        let inv = closed_inverse(a.kind, a.n)?;
        let matches = h.inverse()? == inv;
        ok &= matches;
        out["inverse"] = json!({ "closed_form": json::matrix(&inv), "matches_elimination": matches });
    }
    if a.factor {
        let f = factor(a.kind, a.n)?;
        let linv = closed_inverse_factor(a.kind, a.n)?;
        let reconstructs = f.reconstruct() == h;
        let inv_ok = f.l.inverse()? == linv;
        ok &= reconstructs && inv_ok;
        out["factor"] = json!({
            "l": json::matrix(&f.l),
            "d": json::matrix(&f.d),
            "reconstructs": reconstructs,
            "l_inverse": json::matrix(&linv),
            "l_inverse_matches_elimination": inv_ok,
        });
    }
    if a.det {
        let d = determinant_identity(a.kind, a.n)?;
        ok &= d.holds();
        out["det"] = json!({ "computed": json::rational(&d.computed), "claimed": json::rational(&d.claimed), "holds": d.holds() });
    }
    json::print(&out);
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed("closed form and elimination disagree".into()))
    }
}

fn graph_from(s: &GraphSource) -> CliResult<WeightedDag> {
    if let Some(p) = &s.graph {
        let text = std::fs::read_to_string(p)?;
        let g: GraphJson = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
        return Ok(WeightedDag::from_json(&g)?);
    }
    let preset = s.preset.as_deref().unwrap_or("two-taxis");
    Ok(match preset {
        "two-taxis" => two_taxis(),
        "binomial" => grid_binomial(s.n, false)?,
        "binomial-shifted" => grid_binomial(s.n, true)?,
        "catalan" => grid_catalan(s.n, false)?,
        "catalan-shifted" => grid_catalan(s.n, true)?,
        "catalan-minor" => catalan_minor_graph(s.n, s.row, s.col)?,
        other => return Err(CliError::Usage(format!("unknown preset {other:?}"))),
    })
}

fn lgv(c: &LgvCommand) -> CliResult<()> {
    match c {
        LgvCommand::Count { source, from, to } => {
            let g = graph_from(source)?;
            let n = g.count_paths(*from, *to)?;
            json::print(&json!({ "from": from, "to": to, "paths": json::rational(&n) }));
        }
        LgvCommand::Matrix { source, emit_graph } => {
            let g = graph_from(source)?;
            let a = g.path_matrix();
            let mut out = json!({ "path_matrix": json::matrix(&a), "det": json::rational(&a.det()?) });
            if *emit_graph {
                out["graph"] = serde_json::to_value(g.to_json()).expect("graph serializes");
            }
            json::print(&out);
        }
        LgvCommand::Enumerate { source, bound } => {
            let g = graph_from(source)?;
            let e = enumerate_detailed(&g, *bound)?;
            let by: Vec<Value> = e
                .by_permutation
                .iter()
                .map(|(p, w)| json!({ "permutation": p, "weight": json::rational(w) }))
                .collect();
            json::print(&json!({
                "signed_total": json::rational(&e.signed_total),
                "systems": e.systems,
                "by_permutation": by,
                "identity_only": e.non_permutable(),
            }));
        }
        LgvCommand::Verify { source } => {
            let g = graph_from(source)?;
            let (det, count) = lgv_check(&g)?;
            json::print(&json!({ "det": json::rational(&det), "enumerated": json::rational(&count) }));
            if det != count {
                return Err(CliError::Failed("determinant and enumeration disagree".into()));
            }
        }
        LgvCommand::Network { matrix, m } => {
            let a: ExactMatrix = match matrix {
                Some(p) => matrix_from_json_str(&std::fs::read_to_string(p)?)?,
                None => alt_bc_symbol(*m)?.0.scale(&alt_bc_scale(*m)),
            };
            let net = planar_network_weights(&a)?;
            let labels: Vec<Value> = net.labelled().into_iter().map(|(l, w)| json!([l, w])).collect();
            let reconstructs = net.dag.path_matrix() == a;
            json::print(&json!({
                "matrix": json::matrix(&a),
                "central": net.central().iter().map(json::rational).collect::<Vec<_>>(),
                "labels": labels,
                "reconstructs": reconstructs,
            }));
            if !reconstructs {
                return Err(CliError::Failed("network does not reconstruct the matrix".into()));
            }
        }
    }
    Ok(())
}

fn symbol(a: &SymbolArgs) -> CliResult<()> {
    let t = build_m(a.m)?;
    let mut out = json!({ "m": a.m, "matrix": json::matrix(&t.matrix) });
    if a.det {
        let r = det_m(a.m)?;
        out["det"] = json!({
            "computed": json::rational(&r.computed),
            "claimed": json::rational(&r.claimed),
            "derived": json::rational(&r.derived),
            "matches_claim": r.matches_claim(),
            "matches_derived": r.matches_derived(),
            "sign": r.sign,
            "log2_abs": r.log2_abs,
        });
    }
    if a.inverse {
        out["inverse"] = json::matrix(&t.inverse);
    }
    if a.tilde {
        out["tilde"] = json!({ "tilde": json::matrix(&t.tilde), "d1": json::matrix(&t.d1), "d2": json::matrix(&t.d2), "perm": t.perm });
    }
    if let Some(kj) = &a.profile {
        let (k, j) = (kj[0], kj[1]);
        let p = poisson_profile(k, j, a.m)?;
        out["profile"] = json!({
            "k": k,
            "j": j,
            "formula": p.describe(),
            "coefficients": p.raw().iter().map(json::rational).collect::<Vec<_>>(),
            "at_zero_over_pi": json::rational(&p.at_zero_over_pi()),
        });
    }
    if a.alt_bc {
        let (h1, h2) = alt_bc_symbol(a.m)?;
        out["alt_bc"] =
            json!({ "h1": json::matrix(&h1), "h2": json::matrix(&h2), "scale": json::rational(&alt_bc_scale(a.m)) });
    }
    if let Some(r) = &a.product {
        let rows: Vec<Vec<Value>> = (0..a.m)
            .map(|j| (0..a.m).map(|k| product_operator_symbol(j, k, a.t, r).map(json::float)).collect())
            .collect::<halfspace_core::Result<_>>()?;
        out["product"] = json!({ "t": a.t, "radii": r, "symbol": rows });
    }
    json::print(&out);
    Ok(())
}

fn read_fields(paths: &[PathBuf], m: usize, what: &str) -> CliResult<Vec<Field>> {
    if paths.len() != m {
        return Err(CliError::Usage(format!("{what}: {} files for m = {m}", paths.len())));
    }
    paths.iter().map(|p| Field::read(p).map_err(CliError::from)).collect()
}

fn inputs<'a>(flag: &'a [PathBuf], cfg: &'a RunConfig) -> &'a [PathBuf] {
    if flag.is_empty() {
        &cfg.paths.input
    } else {
        flag
    }
}

fn output_dir(flag: &Option<PathBuf>, cfg: &RunConfig) -> CliResult<PathBuf> {
    let dir = flag
        .clone()
        .or_else(|| cfg.paths.output.clone())
        .ok_or_else(|| CliError::Usage("--output is required".into()))?;
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn geometry_json(g: Geometry) -> Value {
    json!({ "dim": g.dim, "extent": g.extent, "n": g.n })
}

fn solve(cfg: &RunConfig, a: &SolveArgs) -> CliResult<()> {
    let (m, d) = (cfg.solver.m, cfg.solver.d);
    let h = Dirichlet::new(read_fields(inputs(&a.input, cfg), m, "solve")?)?;
    let report = validate(&h, d)?;
    let g = solve_g(&h, d)?;
    let dir = output_dir(&a.output, cfg)?;
    let mut files = Vec::new();
    for (j, f) in g.g.iter().enumerate() {
        let p = dir.join(format!("g{j}.f64"));
        f.write(&p)?;
        files.push(p.display().to_string());
    }
    json::print(&json!({
        "m": m,
        "d": d,
        "geometry": geometry_json(h.geometry()),
        "validation": serde_json::to_value(&report).expect("report serializes"),
        "outputs": files,
    }));
    if a.strict && !report.passed {
        return Err(CliError::Failed("Dirichlet data fail validation".into()));
    }
    Ok(())
}

fn roundtrip(cfg: &RunConfig, a: &RoundtripArgs) -> CliResult<()> {
    let (m, d) = (cfg.solver.m, cfg.solver.d);
    let paths = inputs(&a.input, cfg);
    let (g, source) = if paths.is_empty() {
        let geom = cfg.geometry()?;
        let (kmin, kmax) = round_trip_band(geom);
        (band_pass_density(m, geom, kmin, kmax, cfg.seed), json!({ "seed": cfg.seed, "modes": [kmin, kmax] }))
    } else {
        (Density::new(read_fields(paths, m, "roundtrip")?)?, json!({ "files": paths }))
    };
    if g.geometry().dim + 1 != d {
        return Err(CliError::Usage(format!("{}-dimensional fields for d = {d}", g.geometry().dim)));
    }
    let h = forward_h(&g, d)?;
    let back = solve_g(&h, d)?;
    let err = back.relative_l2_error(&g)?;
    let passed = err <= a.tol;
    json::print(&json!({
        "m": m,
        "d": d,
        "geometry": geometry_json(g.geometry()),
        "source": source,
        "relative_l2_error": json::float(err),
        "tolerance": a.tol,
        "passed": passed,
    }));
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!("round-trip error {err:e} above {:e}", a.tol)))
    }
}

fn extend_cmd(cfg: &RunConfig, a: &ExtendArgs) -> CliResult<()> {
    let (m, d) = (cfg.solver.m, cfg.solver.d);
    let g = Density::new(read_fields(inputs(&a.input, cfg), m, "extend")?)?;
    let u = extend_trace(&g, a.trace, a.xd, d)?;
    let mut out = json!({
        "m": m,
        "d": d,
        "xd": a.xd,
        "trace": a.trace,
        "geometry": geometry_json(u.geometry()),
        "max_abs": json::float(u.max_abs()),
    });
    if let Some(p) = a.output.clone().or_else(|| cfg.paths.output.clone()) {
        if let Some(parent) = p.parent().filter(|q| !q.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        u.write(&p)?;
        out["output"] = json!(p.display().to_string());
    }
    json::print(&out);
    Ok(())
}

fn hermite_field(geom: Geometry, k: usize) -> CliResult<Field> {
    Ok(Field::from_fn(geom, |x| hermite(k, x[0]) * x[1..].iter().map(|&y| hermite(0, y)).product::<f64>())?)
}

fn potential(cfg: &mut RunConfig, c: &PotentialCommand) -> CliResult<()> {
    match c {
        PotentialCommand::Calibrate { order } => {
            // Calibration makes sense for any m ≥ 1, so m > d/2 is not imposed.
            let m = order.m.unwrap_or(cfg.solver.m);
            let d = order.d.unwrap_or(cfg.solver.d);
            let direct = calibrate(m, d)?;
            let fourier = calibrate_fourier(m, d)?;
            json::print(&json!({
                "m": m,
                "d": d,
                "constant": json::float(direct.constant),
                "error_estimate": json::float(direct.error_estimate),
                "fourier_constant": json::float(fourier.constant),
                "relative_gap": json::float(((direct.constant - fourier.constant) / direct.constant).abs()),
            }));
        }
        PotentialCommand::Kernel { order, j, x, y } => {
            apply_order(cfg, order)?;
            let fs = FundamentalSolution::calibrated(cfg.solver.m, cfg.solver.d)?;
            let v = kernel_k(*j, &fs, x, y)?;
            json::print(
                &json!({ "m": fs.m, "d": fs.d, "j": j, "x": x, "y": y, "value": json::float(v), "constant": json::float(fs.c) }),
            );
        }
        PotentialCommand::Quad { order, grid, x, input, hermite: ks, compare } => {
            apply_order(cfg, order)?;
            apply_grid(cfg, grid)?;
            let (m, d) = (cfg.solver.m, cfg.solver.d);
            let fs = FundamentalSolution::calibrated(m, d)?;
            let paths = inputs(input, cfg).to_vec();
            if !paths.is_empty() {
                let g = Density::new(read_fields(&paths, m, "quad")?)?;
                let q = quadrature_tg(&g, x, &fs)?;
                let mut out = json!({
                    "rule": "grid",
                    "x": x,
                    "value": json::float(q.value),
                    "error_estimate": json::float(q.error_estimate),
                    "tail_estimate": json::float(q.tail_estimate),
                });
                if *compare {
                    out["spectral"] = nearest_extension(&g, x, d)?;
                }
                json::print(&out);
            } else {
                if ks.len() != m {
                    return Err(CliError::Usage(format!("need --input files or {m} --hermite orders")));
                }
                if *compare {
                    return Err(CliError::Usage("--compare needs sampled densities".into()));
                }
                let fns: Vec<DensityFn> = ks
                    .iter()
                    .map(|&k| {
                        Box::new(move |y: &[f64]| {
                            hermite(k, y[0]) * y[1..].iter().map(|&t| hermite(0, t)).product::<f64>()
                        }) as DensityFn
                    })
                    .collect();
                let refs: Vec<_> = fns.iter().map(|f| f.as_ref()).collect();
                let q = quadrature_tg_panels(&refs, x, &fs, cfg.panel_config())?;
                json::print(&json!({
                    "rule": "panels",
                    "x": x,
                    "hermite": ks,
                    "value": json::float(q.value),
                    "error_estimate": json::float(q.error_estimate),
                }));
            }
        }
        PotentialCommand::Truncate { input, radius, degree, output } => {
            let f = Field::read(input)?;
            let t = moment_truncation(&f, *radius, *degree)?;
            let mut out = json!({
                "radius": t.radius,
                "degree": degree,
                "coefficients": json::floats(&t.coefficients),
                "compact_max": json::float(t.compact.max_abs()),
                "remainder_worst_relative_moment": json::float(worst_relative_moment(&t.remainder, *degree)),
            });
            if let Some(dir) = output.clone().or_else(|| cfg.paths.output.clone()) {
                std::fs::create_dir_all(&dir)?;
                t.compact.write(dir.join("compact.f64"))?;
                t.remainder.write(dir.join("remainder.f64"))?;
                out["outputs"] = json!([
                    dir.join("compact.f64").display().to_string(),
                    dir.join("remainder.f64").display().to_string()
                ]);
            }
            json::print(&out);
        }
        PotentialCommand::RieszDecay { grid, input, hermite: k, degree, dir, alpha, r_min } => {
            apply_grid(cfg, grid)?;
            let f = match (input, k) {
                (Some(p), _) => Field::read(p)?,
                (None, Some(k)) => hermite_field(cfg.geometry()?, *k)?,
                (None, None) => return Err(CliError::Usage("need --input or --hermite".into())),
            };
            let dim = f.geometry().dim;
            let alpha = alpha.clone().unwrap_or_else(|| vec![0; dim]);
            let s = riesz_decay_study(&f, *degree, *dir, &alpha, *r_min)?;
            let annuli: Vec<Value> = s.annuli.iter().map(|&(r, v)| json!([json::float(r), json::float(v)])).collect();
            json::print(
                &json!({ "degree": degree, "dir": dir, "alpha": alpha, "slope": json::float(s.slope), "annuli": annuli }),
            );
        }
    }
    Ok(())
}

/// Spectral value at the grid point nearest to the projection of `x`.
fn nearest_extension(g: &Density, x: &[f64], d: usize) -> CliResult<Value> {
    let geom = g.geometry();
    let idx = |c: f64| (((c + geom.extent) / geom.spacing()).round() as usize).min(geom.n - 1);
    let p = match geom.dim {
        1 => idx(x[0]),
        _ => idx(x[0]) * geom.n + idx(x[1]),
    };
    let u = extend_trace(g, 0, x[d - 1], d)?;
    let pt = geom.point(p);
    Ok(json!({ "point": &pt[..geom.dim], "value": json::float(u.samples()[p]) }))
}

fn verify_all(a: &VerifyArgs) -> CliResult<()> {
    let ids: Vec<usize> = if a.only.is_empty() { (1..=acceptance::CRITERIA).collect() } else { a.only.clone() };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i > acceptance::CRITERIA) {
        return Err(CliError::Usage(format!("no criterion {bad}")));
    }
    let outcomes: Vec<_> = ids.into_iter().map(acceptance::run).collect();
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let card = acceptance::scorecard(&outcomes);
    json::print(&card);
    if outcomes.iter().all(|o| o.passed()) {
        Ok(())
    } else {
        Err(CliError::Failed("some acceptance criteria failed".into()))
    }
}

/// Caps the global rayon pool from `HALFSPACE_THREADS`.
pub fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("HALFSPACE_THREADS") {
        let n: usize =
            v.trim().parse().map_err(|_| CliError::Usage(format!("HALFSPACE_THREADS={v:?} is not a count")))?;
        if n == 0 {
            return Err(CliError::Usage("HALFSPACE_THREADS must be at least 1".into()));
        }
        // A second initialization in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
