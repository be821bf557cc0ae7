//! One function per subcommand. Each returns the text to print and whether every check passed.

use std::path::Path;

use bloch_core::blaschke::{BlaschkeProduct, RadialLaw};
use bloch_core::constructive::{self, ProofChain};
use bloch_core::covering::{self, AnalyzerOptions};
use bloch_core::reference::{self, ReferenceValue};
use bloch_core::seminorm::{self, OptimizerConfig, SeminormEstimate};
use bloch_core::slit_disk;
use bloch_core::surface::{self, MaximizeOptions, SurfaceParameters};
use bloch_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Cli, Command, Common, OutputFormat, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::io::{
    self, pair, sig, ConstructiveJson, CoveringJson, ProductJson, SeminormJson, SlitDiskJson, SurfaceJson,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub pass: bool,
}

pub fn run(cli: &Cli) -> CliResult<Report> {
    let common = &cli.common;
    match &cli.command {
        Command::Constants => run_constants(common),
        Command::Seminorm { input, starts } => run_seminorm(common, input, *starts),
        Command::Sweep(args) => run_sweep(common, args),
        Command::Theorem4 { input, d, delta_override, samples } => {
            run_theorem4(common, input, *d, *delta_override, *samples)
        }
        Command::Analyze { input, a, perturb } => run_analyze(common, input, *a, *perturb),
        Command::Surface { a, nodes, starts, csv } => {
            run_surface(common, *a, *nodes, *starts, csv.as_deref())
        }
    }
}

fn no_csv(common: &Common, command: &str) -> CliResult<()> {
    if common.output_format == OutputFormat::Csv {
        return Err(CliError::Usage(format!("`{command}` has no CSV output")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantRow {
    pub name: &'static str,
    pub value: f64,
    pub reference: f64,
    pub abs_err: f64,
    pub tolerance: f64,
    pub status: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct CsvConstantRow {
    name: &'static str,
    value: f64,
    reference: f64,
    abs_err: f64,
    status: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub constants: Vec<ConstantRow>,
    pub slit_disk: SlitDiskJson,
    pub prevertex_residuals: [f64; 2],
    pub radius_point: [f64; 2],
    pub pass: bool,
}

/// Computes every published constant from scratch: the slit-disk chain fixes `a`, which feeds
/// the prevertex solve and the surface radius at the published point.
pub fn compute_constants(overrides: &Common) -> CliResult<ConstantsReport> {
    let target = slit_disk::solve_target(reference::RADIUS_TARGET)?;
    let slit = slit_disk::max_conformal_radius(target.a)?;
    let params = SurfaceParameters::solve(slit.a, surface::DEFAULT_NODES)?;
    let (x, y) = reference::R0_POINT;
    let r0 = surface::conformal_radius_at(Complex64::new(x, y), &params)?;
    let residuals = params.residuals()?;
    let values = [
        (reference::S0, slit.s0),
        (reference::SLIT_A, slit.a),
        (reference::LOG_A, slit.a.ln()),
        (reference::X0, slit.x0),
        (reference::SLIT_MAX_RADIUS, slit.max_radius),
        (reference::C, params.c),
        (reference::D, params.d),
        (reference::R0, r0),
        (reference::TWO_OVER_E, seminorm::znorm_closed_form(1_000_000)),
        (reference::SQRT3_R0_OVER_4, 3f64.sqrt() * r0 / 4.0),
        (reference::PI_R0_OVER_4, std::f64::consts::PI * r0 / 4.0),
    ];
    let constants: Vec<ConstantRow> = values
        .iter()
        .map(|&(reference, value)| constant_row(reference, value, overrides.tolerance(reference.name)))
        .collect();
    let pass = constants.iter().all(|r| r.status == "PASS");
    Ok(ConstantsReport {
        constants,
        slit_disk: SlitDiskJson::from(&slit),
        prevertex_residuals: [sig(residuals[0]), sig(residuals[1])],
        radius_point: [x, y],
        pass,
    })
}

fn constant_row(reference: ReferenceValue, value: f64, tolerance: Option<f64>) -> ConstantRow {
    let tolerance = tolerance.unwrap_or(reference.tolerance);
    let abs_err = (value - reference.value).abs();
    ConstantRow {
        name: reference.name,
        value: sig(value),
        reference: reference.value,
        abs_err: sig(abs_err),
        tolerance,
        status: if abs_err <= tolerance { "PASS" } else { "FAIL" },
    }
}

pub fn run_constants(common: &Common) -> CliResult<Report> {
    let names: Vec<&str> = reference::ALL.iter().map(|r| r.name).collect();
    common.check_tolerance_names(&names)?;
    let report = compute_constants(common)?;
    let text = match common.output_format {
        OutputFormat::Json => io::to_json(&report),
        OutputFormat::Csv => io::to_csv(
            &report
                .constants
                .iter()
                .map(|r| CsvConstantRow {
                    name: r.name,
                    value: r.value,
                    reference: r.reference,
                    abs_err: r.abs_err,
                    status: r.status,
                })
                .collect::<Vec<_>>(),
        )?,
    };
    Ok(Report { text, pass: report.pass })
}

/// Upper end allowed for a seminorm estimate; the seminorm of a self-map of the disk is at most 1.
pub const SCHWARZ_PICK_SLACK: f64 = 1e-9;

pub fn run_seminorm(common: &Common, input: &Path, starts: usize) -> CliResult<Report> {
    common.check_tolerance_names(&["schwarz_pick"])?;
    no_csv(common, "seminorm")?;
    let b = io::read_product(input)?;
    let config = OptimizerConfig { random_starts: starts, seed: common.seed, ..OptimizerConfig::default() };
    let estimate = seminorm::seminorm(&b, &config);
    let slack = common.tolerance("schwarz_pick").unwrap_or(SCHWARZ_PICK_SLACK);
    Ok(Report { text: io::to_json(&SeminormJson::from(&estimate)), pass: estimate.value <= 1.0 + slack })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTrial {
    pub product: BlaschkeProduct,
    pub law: &'static str,
}

/// The sweep family: `count` random products whose degree, radial law and zeros are all
/// drawn from `seed`, followed by `z^1, …, z^monomials`.
pub fn sweep_family(
    count: usize,
    max_degree: usize,
    monomials: usize,
    seed: u64,
) -> CliResult<Vec<SweepTrial>> {
    if count == 0 && monomials == 0 {
        return Err(CliError::Usage("sweep needs --count ≥ 1".into()));
    }
    if max_degree == 0 || max_degree > bloch_core::blaschke::MAX_DEGREE {
        return Err(CliError::Usage(format!(
            "--max-degree must lie in 1..={}",
            bloch_core::blaschke::MAX_DEGREE
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = Vec::with_capacity(count + monomials);
    for _ in 0..count {
        let degree = rng.gen_range(1..=max_degree);
        let (law, name) = if rng.gen::<bool>() {
            (RadialLaw::UniformDisk, "uniform")
        } else {
            (RadialLaw::BoundaryConcentrated { decades: f64::from(rng.gen_range(1u8..=6)) }, "boundary")
        };
        let product = BlaschkeProduct::random(degree, rng.gen(), law)?;
        trials.push(SweepTrial { product, law: name });
    }
    for n in 1..=monomials {
        trials.push(SweepTrial { product: BlaschkeProduct::monomial(n)?, law: "monomial" });
    }
    Ok(trials)
}

/// Seminorm estimates of `products`, in order, computed on `threads` workers.
pub fn estimate_all(
    products: &[BlaschkeProduct],
    config: &OptimizerConfig,
    threads: usize,
) -> Vec<SeminormEstimate> {
    let threads = if threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        threads
    };
    if threads <= 1 || products.len() < 2 {
        return products.iter().map(|b| seminorm::seminorm(b, config)).collect();
    }
    let chunk = products.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = products
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || part.iter().map(|b| seminorm::seminorm(b, config)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("seminorm worker panicked")).collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub count: usize,
    pub max_degree: usize,
    pub monomials: usize,
    pub seed: u64,
    pub lower_threshold: f64,
    pub upper_threshold: f64,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub violations: usize,
    pub argmin_index: usize,
    pub minimizer: ProductJson,
    pub minimizer_estimate: SeminormJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub degree: usize,
    pub law: &'static str,
    pub value: f64,
    pub argmax_re: f64,
    pub argmax_im: f64,
}

/// Default gap allowed below the published lower bound, for optimizer error.
pub const SWEEP_MARGIN: f64 = 1e-3;

pub fn sweep(common: &Common, args: &SweepArgs) -> CliResult<(SweepReport, Vec<SweepRow>)> {
    let trials = sweep_family(args.count, args.max_degree, args.monomials, common.seed)?;
    let products: Vec<BlaschkeProduct> = trials.iter().map(|t| t.product.clone()).collect();
    let estimates = estimate_all(&products, &OptimizerConfig::default(), args.threads);
    let lower = reference::R0.value - common.tolerance("r0_margin").unwrap_or(SWEEP_MARGIN);
    let upper = 1.0 + common.tolerance("schwarz_pick").unwrap_or(SCHWARZ_PICK_SLACK);
    let mut argmin = 0;
    let mut max = f64::NEG_INFINITY;
    let mut total = 0.0;
    let mut violations = 0;
    for (i, e) in estimates.iter().enumerate() {
        if e.value < estimates[argmin].value {
            argmin = i;
        }
        max = max.max(e.value);
        total += e.value;
        if !(e.value >= lower && e.value <= upper) {
            violations += 1;
        }
    }
    let rows = trials
        .iter()
        .zip(&estimates)
        .enumerate()
        .map(|(index, (t, e))| SweepRow {
            index,
            degree: t.product.degree(),
            law: t.law,
            value: sig(e.value),
            argmax_re: sig(e.argmax.re),
            argmax_im: sig(e.argmax.im),
        })
        .collect();
    let report = SweepReport {
        count: args.count,
        max_degree: args.max_degree,
        monomials: args.monomials,
        seed: common.seed,
        lower_threshold: sig(lower),
        upper_threshold: sig(upper),
        min: sig(estimates[argmin].value),
        mean: sig(total / estimates.len() as f64),
        max: sig(max),
        violations,
        argmin_index: argmin,
        minimizer: ProductJson::from_product(&products[argmin]),
        minimizer_estimate: SeminormJson::from(&estimates[argmin]),
    };
    Ok((report, rows))
}

pub fn run_sweep(common: &Common, args: &SweepArgs) -> CliResult<Report> {
    common.check_tolerance_names(&["r0_margin", "schwarz_pick"])?;
    let (report, rows) = sweep(common, args)?;
    let text = match common.output_format {
        OutputFormat::Json => io::to_json(&report),
        OutputFormat::Csv => io::to_csv(&rows)?,
    };
    Ok(Report { text, pass: report.violations == 0 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofChainJson {
    pub distance_margin: f64,
    pub pseudo_distance_margin: f64,
    pub modulus_margin: f64,
}

impl From<&ProofChain> for ProofChainJson {
    fn from(p: &ProofChain) -> Self {
        ProofChainJson {
            distance_margin: sig(p.distance_margin),
            pseudo_distance_margin: sig(p.pseudo_distance_margin),
            modulus_margin: sig(p.modulus_margin),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem4Report {
    #[serde(flatten)]
    pub result: ConstructiveJson,
    pub computed_delta: f64,
    /// `δ ≤ |B'(ζ)| dist(ζ, zeros)`; false only when `--delta-override` exceeds it.
    pub hypotheses_hold: bool,
    pub certified: bool,
    pub proof_chain: ProofChainJson,
}

/// Sample points on `[z₀, ζ]` where the intermediate inequalities are checked.
pub const PROOF_CHAIN_POINTS: usize = 20;
pub const PROOF_CHAIN_TOLERANCE: f64 = 1e-12;

pub fn run_theorem4(
    common: &Common,
    input: &Path,
    d: f64,
    delta_override: Option<f64>,
    samples: usize,
) -> CliResult<Report> {
    common.check_tolerance_names(&["proof_chain"])?;
    no_csv(common, "theorem4")?;
    let b = io::read_product(input)?;
    if !(d > 0.0 && d < 1.0) {
        return Err(CliError::Usage(format!("--d must lie in (0, 1), got {d}")));
    }
    let zeta = constructive::select_zeta(&b, samples).map_err(CliError::Input)?;
    let computed = constructive::compute_delta(&b, zeta)?;
    let delta = match delta_override {
        Some(x) if !(x > 0.0 && x <= 1.0) => {
            return Err(CliError::Usage(format!("--delta-override must lie in (0, 1], got {x}")))
        }
        Some(x) => x,
        None => computed,
    };
    let result = constructive::construct(&b, zeta, delta, d)?;
    let chain = constructive::proof_chain(&b, &result, PROOF_CHAIN_POINTS)?;
    let hypotheses_hold = delta <= computed;
    let tol = common.tolerance("proof_chain").unwrap_or(PROOF_CHAIN_TOLERANCE);
    let certified = result.certified();
    let report = Theorem4Report {
        result: ConstructiveJson::from(&result),
        computed_delta: sig(computed),
        hypotheses_hold,
        certified,
        proof_chain: ProofChainJson::from(&chain),
    };
    let pass = !hypotheses_hold || (certified && chain.holds(tol));
    Ok(Report { text: io::to_json(&report), pass })
}

pub fn run_analyze(common: &Common, input: &Path, a: f64, perturb: bool) -> CliResult<Report> {
    common.check_tolerance_names(&[])?;
    no_csv(common, "analyze")?;
    if !(a > 0.0 && a < 1.0) {
        return Err(CliError::Usage(format!("--a must lie in (0, 1), got {a}")));
    }
    let b = io::read_product(input)?;
    let options = AnalyzerOptions { a, perturb, perturb_seed: common.seed, ..AnalyzerOptions::default() };
    let report = covering::analyze(&b, &options)?;
    let pass = report.transitive;
    Ok(Report { text: io::to_json(&CoveringJson::from(&report)), pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub across: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceReport {
    #[serde(flatten)]
    pub solution: SurfaceJson,
    pub residuals: [f64; 2],
    pub jacobian_condition: f64,
    pub node_doubling_difference: f64,
    pub radius_at_published_point: f64,
    pub published_point: [f64; 2],
}

/// Largest accepted change of the parameter integrals when the node count doubles.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Node counts of the convergence table: powers of two from 16 up to twice `nodes`.
pub fn convergence_nodes(nodes: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 16;
    while n <= 2 * nodes {
        out.push(n);
        n *= 2;
    }
    out
}

pub fn run_surface(
    common: &Common,
    a: f64,
    nodes: usize,
    starts: usize,
    csv: Option<&Path>,
) -> CliResult<Report> {
    common.check_tolerance_names(&["quadrature", "residual"])?;
    if !(a > 0.0 && a < 1.0) {
        return Err(CliError::Usage(format!("--a must lie in (0, 1), got {a}")));
    }
    if nodes < 16 {
        return Err(CliError::Usage(format!("--nodes must be at least 16, got {nodes}")));
    }
    let mut options = MaximizeOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    for _ in 0..starts {
        options.starts.push(Complex64::new(rng.gen_range(-2.0..3.0), rng.gen_range(0.05..2.0)));
    }
    let solution = surface::solve_surface(a, nodes, &options)?;
    let params = solution.parameters();
    let residuals = params.residuals()?;
    let jacobian = surface::parameter_jacobian(params.c, params.d, nodes)?;
    let doubling = surface::node_doubling_difference(params.c, params.d, nodes)?;
    let (x, y) = reference::R0_POINT;
    let at_point = surface::conformal_radius_at(Complex64::new(x, y), &params)?;
    let table: Vec<ConvergenceRow> =
        surface::convergence_table(params.c, params.d, &convergence_nodes(nodes))?
            .into_iter()
            .map(|(nodes, across, gap)| ConvergenceRow { nodes, across, gap })
            .collect();
    let table_csv = io::to_csv(&table)?;
    if let Some(path) = csv {
        io::write_file(path, &table_csv)?;
    }
    let report = SurfaceReport {
        solution: SurfaceJson::from(&solution),
        residuals: [sig(residuals[0]), sig(residuals[1])],
        jacobian_condition: sig(surface::condition_number(jacobian)),
        node_doubling_difference: sig(doubling),
        radius_at_published_point: sig(at_point),
        published_point: pair(Complex64::new(x, y)),
    };
    let residual_tol = common.tolerance("residual").unwrap_or(RESIDUAL_TOLERANCE);
    let pass = residuals.iter().all(|r| r.abs() <= residual_tol)
        && doubling <= common.tolerance("quadrature").unwrap_or(QUADRATURE_TOLERANCE);
    let text = match common.output_format {
        OutputFormat::Json => io::to_json(&report),
        OutputFormat::Csv => table_csv,
    };
    Ok(Report { text, pass })
}
