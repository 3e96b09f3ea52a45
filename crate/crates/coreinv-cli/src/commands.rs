//! Subcommand implementations and exit-code policy.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use coreinv::batch::{run_fuzz, FuzzSpec, FuzzTheorem};
use coreinv::io::{
    digest, outcome_from_result, CertificateFile, FailedInstance, MatrixFile, Operation, Outcome,
    Report, RouteResult, WitnessFile, REPORT_SCHEMA,
};
use coreinv::{
    core_via_annihilator, core_via_composition, core_via_kernel,
    core_via_projectors, default_annihilator, dual_core_via_cokernel, dual_core_via_composition,
    dual_core_via_projectors, gen_random, group_inverse, group_inverse_hartwig, inner_inverse,
    mp_routes, one_four_inverse, one_three_inverse, verify, Field, GenInvResult, IndexClass,
    InverseKind, Morphism, Route,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_BUG: u8 = 1;
pub const EXIT_NOT_INVERTIBLE: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "coreinv",
    version,
    about = "Exact generalized inverses (Moore-Penrose, group, core, dual core) with machine-checked certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Core,
    Dualcore,
    Group,
    Mp,
    #[value(name = "13")]
    OneThree,
    #[value(name = "14")]
    OneFour,
}

impl KindArg {
    fn label(self) -> &'static str {
        match self {
            KindArg::Core => "core",
            KindArg::Dualcore => "dualcore",
            KindArg::Group => "group",
            KindArg::Mp => "mp",
            KindArg::OneThree => "13",
            KindArg::OneFour => "14",
        }
    }

    fn kind(self) -> InverseKind {
        match self {
            KindArg::Core => InverseKind::Core,
            KindArg::Dualcore => InverseKind::DualCore,
            KindArg::Group => InverseKind::Group,
            KindArg::Mp => InverseKind::MoorePenrose,
            KindArg::OneThree => InverseKind::OneThree,
            KindArg::OneFour => InverseKind::OneFour,
        }
    }

    fn needs_square(self) -> bool {
        matches!(self, KindArg::Core | KindArg::Dualcore | KindArg::Group)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Q,
    Qi,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Q => Field::Q,
            FieldArg::Qi => Field::Qi,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndexArg {
    #[value(name = "1")]
    One,
    Ge2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    KernelCore,
    RingUnit,
    Annihilator,
    BorderedGroup,
    BorderedCore,
    BorderedDual,
    Lemma13,
    All,
}

impl From<TheoremArg> for FuzzTheorem {
    fn from(t: TheoremArg) -> FuzzTheorem {
        match t {
            TheoremArg::KernelCore => FuzzTheorem::KernelCore,
            TheoremArg::RingUnit => FuzzTheorem::RingUnit,
            TheoremArg::Annihilator => FuzzTheorem::Annihilator,
            TheoremArg::BorderedGroup => FuzzTheorem::BorderedGroup,
            TheoremArg::BorderedCore => FuzzTheorem::BorderedCore,
            TheoremArg::BorderedDual => FuzzTheorem::BorderedDual,
            TheoremArg::Lemma13 => FuzzTheorem::Lemma13,
            TheoremArg::All => FuzzTheorem::All,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute a generalized inverse through one or all constructive routes.
    Inverse {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Route id for the kind, or "all" to run every applicable route
        /// and assert exact agreement.
        #[arg(long, default_value = "all")]
        route: String,
        /// Unit exponent for kernel/cokernel routes (default 3, minimum 3)
        /// and the annihilator route (default 2, minimum 2).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        input: PathBuf,
        /// Also write the report JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a candidate inverse against the defining equations of a kind.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded random instances through the theorem checks.
    Fuzz {
        #[arg(long, value_enum, default_value = "all")]
        theorem: TheoremArg,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        count: u32,
        /// Base seed; the COREINV_SEED environment variable overrides it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "q")]
        field: FieldArg,
        /// Where to write the reproducer file on failure.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded random matrix of controlled rank and index.
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value = "1")]
        index: IndexArg,
        /// Seed; the COREINV_SEED environment variable overrides it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "q")]
        field: FieldArg,
        /// Also write the generated matrix file to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn env_seed(cli_seed: u64) -> Result<u64, String> {
    match std::env::var("COREINV_SEED") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("COREINV_SEED must be a 64-bit unsigned integer, got {v:?}")),
        Err(_) => Ok(cli_seed),
    }
}

fn read_matrix(path: &Path) -> Result<(Morphism, String), String> {
    let bytes = fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let text = String::from_utf8(bytes).map_err(|_| format!("{} is not UTF-8", path.display()))?;
    let morphism = coreinv::io::parse_matrix(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((morphism, digest(text.as_bytes())))
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), String> {
    let json = report.to_json();
    println!("{json}");
    if let Some(path) = out {
        fs::write(path, json.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

/// Every route applicable to the request, as `(label, result)` pairs.
fn compute_routes(
    kind: KindArg,
    route: &str,
    phi: &Morphism,
    n: Option<u32>,
) -> Result<Vec<(String, GenInvResult)>, String> {
    let mut out = Vec::new();
    let all = route == "all";
    let want = |r: &str| all || route == r;
    let unit_n = n.unwrap_or(3);
    let ann_n = if all { 2 } else { n.unwrap_or(2) };
    let engine = |e: coreinv::EngineError| e.to_string();

    match kind {
        KindArg::Core => {
            if want("kernel") {
                out.push((
                    Route::CoreKernelUnit { n: unit_n }.to_string(),
                    core_via_kernel(phi, unit_n).map_err(engine)?,
                ));
            }
            if want("composition") {
                out.push((Route::CoreComposition.to_string(), core_via_composition(phi)));
            }
            if want("projectors") {
                let psi = inner_inverse(phi);
                out.push((
                    Route::CoreProjectors.to_string(),
                    core_via_projectors(phi, &psi).map_err(engine)?,
                ));
            }
            if want("annihilator") {
                let eta = default_annihilator(phi);
                out.push((
                    Route::CoreAnnihilator { n: ann_n }.to_string(),
                    core_via_annihilator(phi, &eta, ann_n).map_err(engine)?,
                ));
            }
        }
        KindArg::Dualcore => {
            if want("cokernel") {
                out.push((
                    Route::DualCokernelUnit { n: unit_n }.to_string(),
                    dual_core_via_cokernel(phi, unit_n).map_err(engine)?,
                ));
            }
            if want("composition") {
                out.push((Route::DualComposition.to_string(), dual_core_via_composition(phi)));
            }
            if want("projectors") {
                let psi = inner_inverse(phi);
                out.push((
                    Route::DualProjectors.to_string(),
                    dual_core_via_projectors(phi, &psi).map_err(engine)?,
                ));
            }
        }
        KindArg::Group => {
            if want("kernel") {
                out.push((Route::GroupKernelUnit.to_string(), group_inverse(phi)));
            }
            if want("solve") {
                let result = match group_inverse_hartwig(phi) {
                    Some(chi) => {
                        let cert = verify(phi, &chi, InverseKind::Group).map_err(engine)?;
                        GenInvResult::Found { chi, cert, route: Route::GroupHartwigSolve }
                    }
                    None => group_inverse(phi),
                };
                out.push((Route::GroupHartwigSolve.to_string(), result));
            }
        }
        KindArg::Mp => {
            let routes = mp_routes(phi);
            let mut push = |label: Route, chi: Morphism| -> Result<(), String> {
                let cert = verify(phi, &chi, InverseKind::MoorePenrose).map_err(engine)?;
                out.push((label.to_string(), GenInvResult::Found { chi, cert, route: label }));
                Ok(())
            };
            if want("kernel") {
                push(Route::MpKernelUnit, routes.kernel_unit.clone())?;
            }
            if want("cokernel") {
                push(Route::MpCokernelUnit, routes.cokernel_unit.clone())?;
            }
            if want("factorization") {
                push(Route::MpFactorization, routes.factorization.clone())?;
            }
            if all && !routes.kappa_identity_holds {
                return Err("kernel pseudoinverse identity failed".into());
            }
        }
        KindArg::OneThree | KindArg::OneFour => {
            if all || route == "projector" {
                let psi = inner_inverse(phi);
                let (label, chi) = match kind {
                    KindArg::OneThree => {
                        (Route::Projector13, one_three_inverse(phi, &psi).map_err(engine)?)
                    }
                    _ => (Route::Projector14, one_four_inverse(phi, &psi).map_err(engine)?),
                };
                let cert = verify(phi, &chi, kind.kind()).map_err(engine)?;
                out.push((label.to_string(), GenInvResult::Found { chi, cert, route: label }));
            }
        }
    }
    if out.is_empty() {
        return Err(format!(
            "unknown route {route:?} for kind {}; see --help for the per-kind route ids",
            kind.label()
        ));
    }
    Ok(out)
}

fn cmd_inverse(
    kind: KindArg,
    route: String,
    n: Option<u32>,
    input: PathBuf,
    out: Option<PathBuf>,
) -> Result<u8, String> {
    let start = Instant::now();
    let (phi, input_digest) = read_matrix(&input)?;
    if kind.needs_square() && !phi.is_endo() {
        return Err(format!(
            "{} inverse needs a square input, got {}x{}",
            kind.label(),
            phi.dom().0,
            phi.cod().0
        ));
    }
    if let Some(n) = n {
        let min = if route == "annihilator" { 2 } else { 3 };
        if matches!(kind, KindArg::Core | KindArg::Dualcore) && n < min {
            return Err(format!("--n must be at least {min} for this route"));
        }
    }

    let computed = catch_unwind(AssertUnwindSafe(|| compute_routes(kind, &route, &phi, n)));
    let operation = Operation::Inverse {
        kind: kind.label().to_owned(),
        route: route.clone(),
        n,
        input: input.display().to_string(),
    };
    let (outcome, agreement, code) = match computed {
        Err(panic) => {
            let msg = panic_message(panic);
            (
                Outcome::Disagreement { details: vec![format!("internal disagreement: {msg}")] },
                Some(false),
                EXIT_BUG,
            )
        }
        Ok(Err(msg)) => return Err(msg),
        Ok(Ok(results)) => summarize_routes(results),
    };

    let report = Report {
        schema: REPORT_SCHEMA.into(),
        operation,
        input_digest: Some(input_digest),
        outcome,
        route_agreement: agreement,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, out.as_deref())?;
    Ok(code)
}

fn summarize_routes(results: Vec<(String, GenInvResult)>) -> (Outcome, Option<bool>, u8) {
    let single = results.len() == 1;
    let first_found = results.iter().find_map(|(_, r)| r.found().cloned());
    match &first_found {
        Some(reference) => {
            let mut details = Vec::new();
            let mut routes = Vec::new();
            for (label, r) in &results {
                let agrees = r.found() == Some(reference);
                if !agrees {
                    details.push(match r {
                        GenInvResult::Found { .. } => format!("route {label} found a different inverse"),
                        GenInvResult::NotInvertible { reason, .. } => {
                            format!("route {label} reported not invertible ({reason})")
                        }
                    });
                }
                routes.push(RouteResult { route: label.clone(), found: r.is_found(), agrees });
            }
            if details.is_empty() {
                let (_, reference_result) = &results[0];
                let outcome = outcome_from_result(reference_result, routes);
                (outcome, if single { None } else { Some(true) }, EXIT_OK)
            } else {
                (Outcome::Disagreement { details }, Some(false), EXIT_BUG)
            }
        }
        None => {
            // Every route reported non-existence: report the first verdict.
            let (_, r) = &results[0];
            let GenInvResult::NotInvertible { reason, witness } = r else { unreachable!() };
            (
                Outcome::NotInvertible {
                    reason: *reason,
                    witness: WitnessFile::from_witness(witness),
                },
                if single { None } else { Some(true) },
                EXIT_NOT_INVERTIBLE,
            )
        }
    }
}

fn panic_message(panic: Box<dyn std::any::Any + Send>) -> String {
    panic
        .downcast_ref::<String>()
        .cloned()
        .or_else(|| panic.downcast_ref::<&str>().map(|s| (*s).to_owned()))
        .unwrap_or_else(|| "panic".to_owned())
}

fn cmd_verify(
    input: PathBuf,
    candidate: PathBuf,
    kind: KindArg,
    out: Option<PathBuf>,
) -> Result<u8, String> {
    let start = Instant::now();
    let (phi, input_digest) = read_matrix(&input)?;
    let (chi, _) = read_matrix(&candidate)?;
    let cert = verify(&phi, &chi, kind.kind()).map_err(|e| e.to_string())?;
    let all_hold = cert.all_hold();
    let report = Report {
        schema: REPORT_SCHEMA.into(),
        operation: Operation::Verify {
            kind: kind.label().to_owned(),
            input: input.display().to_string(),
            candidate: candidate.display().to_string(),
        },
        input_digest: Some(input_digest),
        outcome: Outcome::Verified {
            certificate: CertificateFile::from_certificate(&cert),
            all_hold,
        },
        route_agreement: None,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, out.as_deref())?;
    Ok(if all_hold { EXIT_OK } else { EXIT_NOT_INVERTIBLE })
}

fn cmd_fuzz(
    theorem: TheoremArg,
    dim: usize,
    count: u32,
    seed: u64,
    field: FieldArg,
    out: Option<PathBuf>,
) -> Result<u8, String> {
    let start = Instant::now();
    let seed = env_seed(seed)?;
    let spec = FuzzSpec { theorem: theorem.into(), dim, count, seed, field: field.into() };
    let outcomes = run_fuzz(&spec);
    let failed: Vec<FailedInstance> = outcomes
        .iter()
        .filter(|o| !o.ok)
        .map(|o| FailedInstance {
            seed: o.instance_seed,
            failures: o.failures.clone(),
            matrix: o.matrix.clone(),
        })
        .collect();
    let failures = failed.len() as u32;
    let passes = count - failures;
    let any_failed = !failed.is_empty();

    let reproducer = if let Some(first) = failed.first() {
        let path = out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("coreinv-reproducer-{}.json", first.seed)));
        let json = serde_json::to_string_pretty(first).expect("reproducer serialization");
        fs::write(&path, json).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        eprintln!("wrote reproducer for instance seed {} to {}", first.seed, path.display());
        Some(path.display().to_string())
    } else {
        None
    };

    let report = Report {
        schema: REPORT_SCHEMA.into(),
        operation: Operation::Fuzz {
            theorem: spec.theorem.to_string(),
            dim,
            count,
            seed,
            field: spec.field,
        },
        input_digest: None,
        outcome: Outcome::FuzzSummary { count, passes, failures, failed, reproducer },
        route_agreement: None,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, if any_failed { None } else { out.as_deref() })?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_BUG })
}

fn cmd_gen(
    dim: usize,
    rank: usize,
    index: IndexArg,
    seed: u64,
    field: FieldArg,
    out: Option<PathBuf>,
) -> Result<u8, String> {
    let start = Instant::now();
    let seed = env_seed(seed)?;
    let class = match index {
        IndexArg::One => IndexClass::One,
        IndexArg::Ge2 => IndexClass::GeTwo,
    };
    let phi = gen_random(dim, rank, class, seed, field.into()).map_err(|e| e.to_string())?;
    let matrix = MatrixFile::from_morphism(&phi);
    if let Some(path) = &out {
        let json = serde_json::to_string_pretty(&matrix).expect("matrix serialization");
        fs::write(path, json).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let report = Report {
        schema: REPORT_SCHEMA.into(),
        operation: Operation::Gen {
            dim,
            rank,
            index: match index {
                IndexArg::One => "1".into(),
                IndexArg::Ge2 => "ge2".into(),
            },
            seed,
            field: field.into(),
        },
        input_digest: None,
        outcome: Outcome::Generated { matrix },
        route_agreement: None,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    emit(&report, None)?;
    Ok(EXIT_OK)
}

pub fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Inverse { kind, route, n, input, out } => cmd_inverse(kind, route, n, input, out),
        Command::Verify { input, candidate, kind, out } => cmd_verify(input, candidate, kind, out),
        Command::Fuzz { theorem, dim, count, seed, field, out } => {
            cmd_fuzz(theorem, dim, count, seed, field, out)
        }
        Command::Gen { dim, rank, index, seed, field, out } => {
            cmd_gen(dim, rank, index, seed, field, out)
        }
    }
}
