//! Batch theorem fuzzing: derives a deterministic stream of instances
//! from a base seed, runs the selected theorem checks on each, and
//! aggregates outcomes sorted by instance seed. Instances are
//! independent, so the driver shards them across rayon workers when the
//! `parallel` feature is enabled; `run_fuzz_sequential` is the reference
//! single-threaded path either way.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::io::MatrixFile;
use crate::morphism::Morphism;
use crate::random::{gen_random_with, random_dense, IndexClass};
use crate::scalar::Field;
use crate::theorems::{
    check_annihilator_theorem, check_bordered_core, check_bordered_dual, check_bordered_group,
    check_core_kernel_theorem, check_ring_unit_core, lemma13_witnesses, TheoremReport,
};

/// Which theorem(s) a fuzzing run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzTheorem {
    KernelCore,
    RingUnit,
    Annihilator,
    BorderedGroup,
    BorderedCore,
    BorderedDual,
    Lemma13,
    All,
}

impl std::fmt::Display for FuzzTheorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FuzzTheorem::KernelCore => "kernel-core",
            FuzzTheorem::RingUnit => "ring-unit",
            FuzzTheorem::Annihilator => "annihilator",
            FuzzTheorem::BorderedGroup => "bordered-group",
            FuzzTheorem::BorderedCore => "bordered-core",
            FuzzTheorem::BorderedDual => "bordered-dual",
            FuzzTheorem::Lemma13 => "lemma13",
            FuzzTheorem::All => "all",
        };
        write!(f, "{s}")
    }
}

/// A deterministic fuzzing campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzSpec {
    pub theorem: FuzzTheorem,
    pub dim: usize,
    pub count: u32,
    pub seed: u64,
    pub field: Field,
}

/// Result of one instance: the theorem reports that failed, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub instance_seed: u64,
    pub ok: bool,
    pub failures: Vec<String>,
    pub matrix: MatrixFile,
}

/// Deterministic instance matrix for `(spec, i)`: cycles through index-1,
/// index->=2 and raw dense matrices with ranks drawn from the stream.
pub fn instance_matrix(spec: &FuzzSpec, instance_seed: u64) -> Morphism {
    let mut rng = ChaCha12Rng::seed_from_u64(instance_seed);
    let dim = spec.dim;
    match instance_seed % 3 {
        0 => {
            let rank = rng.random_range(0..=dim);
            gen_random_with(dim, rank, IndexClass::One, spec.field, &mut rng)
                .expect("rank <= dim is always feasible")
        }
        1 if dim >= 2 => {
            let rank = rng.random_range(1..dim);
            gen_random_with(dim, rank, IndexClass::GeTwo, spec.field, &mut rng)
                .expect("1 <= rank < dim is feasible")
        }
        _ => Morphism::from_mat(random_dense(dim, dim, spec.field, &mut rng)),
    }
}

fn report_failures(name: &str, report: &TheoremReport, failures: &mut Vec<String>) {
    if !report.ok() {
        let mut detail = Vec::new();
        if !report.forward_holds {
            detail.push("forward direction failed".to_owned());
        }
        if !report.converse_holds {
            detail.push("converse direction failed".to_owned());
        }
        detail.extend(report.discrepancies.iter().cloned());
        failures.push(format!("{name}: {}", detail.join("; ")));
    }
    for h in &report.hypotheses {
        if !h.holds {
            match &h.witness {
                Some(w) if w.verify() => {}
                Some(_) => failures.push(format!("{name}: witness for {} does not re-verify", h.name)),
                None => {}
            }
        }
    }
}

/// Runs the selected theorem checks on one instance.
pub fn run_instance(spec: &FuzzSpec, instance_seed: u64) -> InstanceOutcome {
    let phi = instance_matrix(spec, instance_seed);
    let matrix = MatrixFile::from_morphism(&phi);
    let mut failures = Vec::new();

    let run = |failures: &mut Vec<String>| -> Result<(), crate::error::EngineError> {
        let want = |t: FuzzTheorem| spec.theorem == FuzzTheorem::All || spec.theorem == t;
        if want(FuzzTheorem::KernelCore) {
            report_failures("kernel-core", &check_core_kernel_theorem(&phi, 3)?, failures);
        }
        if want(FuzzTheorem::RingUnit) {
            report_failures("ring-unit", &check_ring_unit_core(&phi, 3)?, failures);
        }
        if want(FuzzTheorem::Annihilator) {
            report_failures("annihilator", &check_annihilator_theorem(&phi, 2, None)?, failures);
        }
        if want(FuzzTheorem::BorderedGroup) {
            report_failures("bordered-group", &check_bordered_group(&phi), failures);
        }
        if want(FuzzTheorem::BorderedCore) {
            report_failures("bordered-core", &check_bordered_core(&phi), failures);
        }
        if want(FuzzTheorem::BorderedDual) {
            report_failures("bordered-dual", &check_bordered_dual(&phi), failures);
        }
        if want(FuzzTheorem::Lemma13) {
            match lemma13_witnesses(&phi, 2) {
                Ok((_, report)) => report_failures("lemma13", &report, failures),
                Err(crate::error::EngineError::NotCoreInvertible) => {
                    // Consistent only when the instance really is not core
                    // invertible.
                    if crate::theorems::index_oracle(&phi) {
                        failures.push("lemma13: reported not core invertible on an index-1 instance".into());
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(())
    };

    let caught = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut failures)));
    match caught {
        Ok(Ok(())) => {}
        Ok(Err(e)) => failures.push(format!("engine error: {e}")),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| (*s).to_owned()))
                .unwrap_or_else(|| "panic".to_owned());
            failures.push(format!("panicked: {msg}"));
        }
    }

    InstanceOutcome { instance_seed, ok: failures.is_empty(), failures, matrix }
}

fn instance_seeds(spec: &FuzzSpec) -> Vec<u64> {
    (0..spec.count as u64).map(|i| spec.seed.wrapping_add(i)).collect()
}

/// Sequential reference driver.
pub fn run_fuzz_sequential(spec: &FuzzSpec) -> Vec<InstanceOutcome> {
    let mut outcomes: Vec<_> = instance_seeds(spec)
        .into_iter()
        .map(|s| run_instance(spec, s))
        .collect();
    outcomes.sort_by_key(|o| o.instance_seed);
    outcomes
}

/// Data-parallel driver; falls back to the sequential path when the
/// `parallel` feature is disabled. Output order is identical either way.
#[cfg(feature = "parallel")]
pub fn run_fuzz(spec: &FuzzSpec) -> Vec<InstanceOutcome> {
    use rayon::prelude::*;
    let mut outcomes: Vec<_> = instance_seeds(spec)
        .into_par_iter()
        .map(|s| run_instance(spec, s))
        .collect();
    outcomes.sort_by_key(|o| o.instance_seed);
    outcomes
}

/// Data-parallel driver; falls back to the sequential path when the
/// `parallel` feature is disabled. Output order is identical either way.
#[cfg(not(feature = "parallel"))]
pub fn run_fuzz(spec: &FuzzSpec) -> Vec<InstanceOutcome> {
    run_fuzz_sequential(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuzz_passes_on_small_campaign() {
        let spec = FuzzSpec {
            theorem: FuzzTheorem::All,
            dim: 3,
            count: 12,
            seed: 7,
            field: Field::Q,
        };
        let outcomes = run_fuzz(&spec);
        assert_eq!(outcomes.len(), 12);
        for o in &outcomes {
            assert!(o.ok, "seed {} failed: {:?}", o.instance_seed, o.failures);
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let spec = FuzzSpec {
            theorem: FuzzTheorem::BorderedGroup,
            dim: 3,
            count: 8,
            seed: 11,
            field: Field::Q,
        };
        assert_eq!(run_fuzz(&spec), run_fuzz_sequential(&spec));
    }

    #[test]
    fn dim_zero_is_vacuous_but_legal() {
        let spec = FuzzSpec {
            theorem: FuzzTheorem::All,
            dim: 0,
            count: 3,
            seed: 0,
            field: Field::Q,
        };
        for o in run_fuzz(&spec) {
            assert!(o.ok, "{:?}", o.failures);
        }
    }

    #[test]
    fn gaussian_campaign() {
        let spec = FuzzSpec {
            theorem: FuzzTheorem::KernelCore,
            dim: 2,
            count: 6,
            seed: 3,
            field: Field::Qi,
        };
        for o in run_fuzz(&spec) {
            assert!(o.ok, "{:?}", o.failures);
        }
    }
}
