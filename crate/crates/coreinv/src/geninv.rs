//! Constructive routes to {1,3}-, {1,4}-, Moore-Penrose, group, core and
//! dual core inverses, each returning the inverse together with an
//! equation-level certificate, or a non-existence verdict carrying a
//! concrete singularity witness.
//!
//! Independent routes to the same inverse are cross-checked exactly; a
//! disagreement would be a bug and fails hard rather than silently.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::mat::SingularWitness;
use crate::morphism::{cokernel, inner_inverse, invert_positive, kernel, InvertOutcome, Morphism};

/// The inverse classes the engine computes and certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseKind {
    OneThree,
    OneFour,
    MoorePenrose,
    Group,
    Core,
    DualCore,
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InverseKind::OneThree => "{1,3}",
            InverseKind::OneFour => "{1,4}",
            InverseKind::MoorePenrose => "moore-penrose",
            InverseKind::Group => "group",
            InverseKind::Core => "core",
            InverseKind::DualCore => "dual-core",
        };
        write!(f, "{s}")
    }
}

/// One defining equation, its verdict and the exact residual (zero iff
/// the verdict is true).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationCheck {
    pub equation: String,
    pub holds: bool,
    pub residual: Morphism,
}

/// Per-equation verdicts for one candidate inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: InverseKind,
    pub checks: Vec<EquationCheck>,
}

impl Certificate {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn check(&self, equation: &str) -> Option<&EquationCheck> {
        self.checks.iter().find(|c| c.equation == equation)
    }
}

/// Why an inverse does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotInvertibleReason {
    SingularKappaLambda,
    SingularUnit,
    NotGroupInvertible,
}

impl fmt::Display for NotInvertibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NotInvertibleReason::SingularKappaLambda => "singular_kappa_lambda",
            NotInvertibleReason::SingularUnit => "singular_unit",
            NotInvertibleReason::NotGroupInvertible => "not_group_invertible",
        };
        write!(f, "{s}")
    }
}

/// Which constructive route produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    MpKernelUnit,
    MpCokernelUnit,
    MpFactorization,
    MpProjectors,
    GroupKernelUnit,
    GroupHartwigSolve,
    GroupProjectors,
    CoreKernelUnit { n: u32 },
    CoreComposition,
    CoreProjectors,
    CoreAnnihilator { n: u32 },
    DualCokernelUnit { n: u32 },
    DualComposition,
    DualProjectors,
    Projector13,
    Projector14,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::MpKernelUnit => write!(f, "mp-kernel-unit"),
            Route::MpCokernelUnit => write!(f, "mp-cokernel-unit"),
            Route::MpFactorization => write!(f, "mp-factorization"),
            Route::MpProjectors => write!(f, "mp-projectors"),
            Route::GroupKernelUnit => write!(f, "group-kernel-unit"),
            Route::GroupHartwigSolve => write!(f, "group-hartwig-solve"),
            Route::GroupProjectors => write!(f, "group-projectors"),
            Route::CoreKernelUnit { n } => write!(f, "core-kernel-unit(n={n})"),
            Route::CoreComposition => write!(f, "core-composition"),
            Route::CoreProjectors => write!(f, "core-projectors"),
            Route::CoreAnnihilator { n } => write!(f, "core-annihilator(n={n})"),
            Route::DualCokernelUnit { n } => write!(f, "dual-cokernel-unit(n={n})"),
            Route::DualComposition => write!(f, "dual-composition"),
            Route::DualProjectors => write!(f, "dual-projectors"),
            Route::Projector13 => write!(f, "projector-13"),
            Route::Projector14 => write!(f, "projector-14"),
        }
    }
}

/// Result of a generalized-inverse computation: either the inverse with
/// its certificate, or a non-existence verdict whose witness demonstrates
/// the failed invertibility (`x * m == 0` with `x != 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenInvResult {
    Found {
        chi: Morphism,
        cert: Certificate,
        route: Route,
    },
    NotInvertible {
        reason: NotInvertibleReason,
        witness: SingularWitness,
    },
}

impl GenInvResult {
    pub fn is_found(&self) -> bool {
        matches!(self, GenInvResult::Found { .. })
    }

    pub fn found(&self) -> Option<&Morphism> {
        match self {
            GenInvResult::Found { chi, .. } => Some(chi),
            GenInvResult::NotInvertible { .. } => None,
        }
    }
}

/// An invertible unit together with its exact inverse and the exponent
/// that built it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitData {
    pub unit: Morphism,
    pub inverse: Morphism,
    pub n: u32,
}

/// The three independent Moore-Penrose routes plus the kernel
/// pseudoinverse identity verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpRoutes {
    pub kernel_unit: Morphism,
    pub cokernel_unit: Morphism,
    pub factorization: Morphism,
    pub kappa_identity_holds: bool,
}

/// All four inverses produced from a single inner inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllFour {
    pub mp: GenInvResult,
    pub group: GenInvResult,
    pub core: GenInvResult,
    pub dual_core: GenInvResult,
}

fn equation(id: &str, lhs: &Morphism, rhs: &Morphism) -> EquationCheck {
    let residual = lhs - rhs;
    EquationCheck { equation: id.to_owned(), holds: residual.is_zero(), residual }
}

/// Evaluates the defining equation set of `kind` for the candidate `chi`
/// with exact residuals.
pub fn verify(phi: &Morphism, chi: &Morphism, kind: InverseKind) -> Result<Certificate, EngineError> {
    if phi.field() != chi.field() {
        return Err(EngineError::ShapeMismatch(
            "phi and chi live over different ground fields".into(),
        ));
    }
    let endo_kinds = matches!(kind, InverseKind::Group | InverseKind::Core | InverseKind::DualCore);
    if endo_kinds {
        if !phi.is_endo() || phi.dom() != chi.dom() || !chi.is_endo() {
            return Err(EngineError::ShapeMismatch(format!(
                "{kind} inverse requires endomorphisms on a common object, got phi: {} -> {}, chi: {} -> {}",
                phi.dom(), phi.cod(), chi.dom(), chi.cod()
            )));
        }
    } else if chi.dom() != phi.cod() || chi.cod() != phi.dom() {
        return Err(EngineError::ShapeMismatch(format!(
            "chi must map {} -> {}, got {} -> {}",
            phi.cod(), phi.dom(), chi.dom(), chi.cod()
        )));
    }

    let pc = phi.then(chi);
    let cp = chi.then(phi);
    let checks = match kind {
        InverseKind::OneThree => vec![
            equation("eq1", &pc.then(phi), phi),
            equation("eq3", &pc.adjoint(), &pc),
        ],
        InverseKind::OneFour => vec![
            equation("eq1", &pc.then(phi), phi),
            equation("eq4", &cp.adjoint(), &cp),
        ],
        InverseKind::MoorePenrose => vec![
            equation("eq1", &pc.then(phi), phi),
            equation("eq2", &cp.then(chi), chi),
            equation("eq3", &pc.adjoint(), &pc),
            equation("eq4", &cp.adjoint(), &cp),
        ],
        InverseKind::Group => vec![
            equation("eq1", &pc.then(phi), phi),
            equation("eq2", &cp.then(chi), chi),
            equation("commute", &pc, &cp),
        ],
        InverseKind::Core => vec![
            equation("sym", &pc.adjoint(), &pc),
            equation("absorb", &phi.then(chi).then(chi), chi),
            equation("recover", &chi.then(phi).then(phi), phi),
        ],
        InverseKind::DualCore => vec![
            equation("sym", &cp.adjoint(), &cp),
            equation("absorb", &chi.then(chi).then(phi), chi),
            equation("recover", &phi.then(phi).then(chi), phi),
        ],
    };
    Ok(Certificate { kind, checks })
}

fn certify(phi: &Morphism, chi: &Morphism, kind: InverseKind, route: Route) -> Certificate {
    let cert = verify(phi, chi, kind).expect("route output has the right shape");
    assert!(
        cert.all_hold(),
        "{kind} certificate must hold for route {route}; failing equations: {:?}",
        cert.checks.iter().filter(|c| !c.holds).map(|c| c.equation.clone()).collect::<Vec<_>>()
    );
    cert
}

fn invert_or_witness(m: &Morphism) -> Result<Morphism, SingularWitness> {
    match m.inverse().expect("unit morphisms are square") {
        InvertOutcome::Invertible(inv) => Ok(inv),
        InvertOutcome::Singular(w) => Err(w),
    }
}

/// Builds [`UnitData`] for a square unit, or the singularity witness.
pub fn unit_data(unit: Morphism, n: u32) -> Result<UnitData, SingularWitness> {
    let inverse = invert_or_witness(&unit)?;
    Ok(UnitData { unit, inverse, n })
}

/// The Hermitian idempotent `1_X - kappa^*(kappa kappa^*)^{-1} kappa` on
/// `dom(phi)`; it fixes `phi` from the left and equals `phi.then(chi)`
/// for every {1,3}-inverse `chi`.
pub(crate) fn range_projector(phi: &Morphism) -> Morphism {
    let kappa = kernel(phi);
    let gram_inv = invert_positive(&kappa.then(&kappa.adjoint()), "kappa kappa^*");
    let id = Morphism::identity(phi.dom(), phi.field());
    &id - &kappa.adjoint().then(&gram_inv).then(&kappa)
}

/// The Hermitian idempotent `1_Y - lambda(lambda^* lambda)^{-1} lambda^*`
/// on `cod(phi)`; it fixes `phi` from the right and equals
/// `chi.then(phi)` for every {1,4}-inverse `chi`.
pub(crate) fn corange_projector(phi: &Morphism) -> Morphism {
    let lambda = cokernel(phi);
    let gram_inv = invert_positive(&lambda.adjoint().then(&lambda), "lambda^* lambda");
    let id = Morphism::identity(phi.cod(), phi.field());
    &id - &lambda.then(&gram_inv).then(&lambda.adjoint())
}

fn require_inner(phi: &Morphism, psi: &Morphism) -> Result<(), EngineError> {
    if psi.dom() != phi.cod() || psi.cod() != phi.dom() {
        return Err(EngineError::ShapeMismatch(format!(
            "psi must map {} -> {}, got {} -> {}",
            phi.cod(), phi.dom(), psi.dom(), psi.cod()
        )));
    }
    if phi.then(psi).then(phi) != *phi {
        return Err(EngineError::NotInnerInverse);
    }
    Ok(())
}

/// {1,3}-inverse `psi.then(range_projector)` from any inner inverse `psi`.
pub fn one_three_inverse(phi: &Morphism, psi: &Morphism) -> Result<Morphism, EngineError> {
    require_inner(phi, psi)?;
    let chi = psi.then(&range_projector(phi));
    let cert = certify(phi, &chi, InverseKind::OneThree, Route::Projector13);
    debug_assert!(cert.all_hold());
    Ok(chi)
}

/// {1,4}-inverse `corange_projector.then(psi)` from any inner inverse `psi`.
pub fn one_four_inverse(phi: &Morphism, psi: &Morphism) -> Result<Morphism, EngineError> {
    require_inner(phi, psi)?;
    let chi = corange_projector(phi).then(psi);
    let cert = certify(phi, &chi, InverseKind::OneFour, Route::Projector14);
    debug_assert!(cert.all_hold());
    Ok(chi)
}

/// The three Moore-Penrose routes: `phi^*(phi phi^* + kappa^* kappa)^{-1}`,
/// `(phi^* phi + lambda lambda^*)^{-1} phi^*`, and the full-rank
/// factorization construction, plus the kernel pseudoinverse identity
/// `kappa^+ = kappa^*(kappa kappa^*)^{-1} = (phi phi^* + kappa^* kappa)^{-1} kappa^*`.
pub fn mp_routes(phi: &Morphism) -> MpRoutes {
    let kappa = kernel(phi);
    let unit = &phi.then(&phi.adjoint()) + &kappa.adjoint().then(&kappa);
    let unit_inv = invert_positive(&unit, "phi phi^* + kappa^* kappa");
    let kernel_unit = phi.adjoint().then(&unit_inv);

    let lambda = cokernel(phi);
    let dual_unit = &phi.adjoint().then(phi) + &lambda.then(&lambda.adjoint());
    let dual_inv = invert_positive(&dual_unit, "phi^* phi + lambda lambda^*");
    let cokernel_unit = dual_inv.then(&phi.adjoint());

    let factorization = inner_inverse(phi);

    let kk_inv = invert_positive(&kappa.then(&kappa.adjoint()), "kappa kappa^*");
    let kappa_dagger = kappa.adjoint().then(&kk_inv);
    let kappa_identity_holds = kappa_dagger == unit_inv.then(&kappa.adjoint());

    MpRoutes { kernel_unit, cokernel_unit, factorization, kappa_identity_holds }
}

/// Moore-Penrose inverse via the kernel unit. Over the supported fields
/// the unit is always invertible, so the result is always `Found`; the
/// cokernel-unit and factorization routes and the kernel pseudoinverse
/// identity are cross-checked exactly.
pub fn mp_inverse(phi: &Morphism) -> GenInvResult {
    let routes = mp_routes(phi);
    assert_eq!(
        routes.kernel_unit, routes.cokernel_unit,
        "kernel-unit and cokernel-unit Moore-Penrose routes must agree"
    );
    assert_eq!(
        routes.kernel_unit, routes.factorization,
        "kernel-unit and factorization Moore-Penrose routes must agree"
    );
    assert!(routes.kappa_identity_holds, "kernel pseudoinverse identity must hold");
    let cert = certify(phi, &routes.kernel_unit, InverseKind::MoorePenrose, Route::MpKernelUnit);
    GenInvResult::Found { chi: routes.kernel_unit, cert, route: Route::MpKernelUnit }
}

/// Group inverse by exactly solving `phi == phi^2 x` and `phi == y phi^2`
/// and forming `y phi x`; `None` when either system is inconsistent.
/// Entirely independent of the kernel/cokernel machinery.
pub fn group_inverse_hartwig(phi: &Morphism) -> Option<Morphism> {
    assert!(phi.is_endo(), "group inverse requires an endomorphism");
    let phi2 = phi.pow(2);
    let x = phi2.mat().solve_right(phi.mat());
    let y = phi2.mat().solve_left(phi.mat());
    match (x, y) {
        (Some(x), Some(y)) => {
            let x = Morphism::from_mat(x);
            let y = Morphism::from_mat(y);
            let g = y.then(phi).then(&x);
            assert_eq!(g, y.then(&y).then(phi), "y phi x and y^2 phi must agree");
            assert_eq!(g, phi.then(&x).then(&x), "y phi x and phi x^2 must agree");
            Some(g)
        }
        (None, None) => None,
        _ => unreachable!("phi in phi^2 R and R phi^2 fail together over a field"),
    }
}

/// Group inverse via `phi(phi^2 + gamma kappa)^{-1}`, with the mirrored
/// formula and the solve-based route cross-checked.
pub fn group_inverse(phi: &Morphism) -> GenInvResult {
    assert!(phi.is_endo(), "group inverse requires an endomorphism");
    let kappa = kernel(phi);
    let lambda = cokernel(phi);
    let kl = kappa.then(&lambda);
    let kl_inv = match invert_or_witness(&kl) {
        Ok(inv) => inv,
        Err(witness) => {
            debug_assert!(group_inverse_hartwig(phi).is_none());
            return GenInvResult::NotInvertible {
                reason: NotInvertibleReason::SingularKappaLambda,
                witness,
            };
        }
    };
    let gamma = lambda.then(&kl_inv);
    let unit = &phi.pow(2) + &gamma.then(&kappa);
    let unit_inv = match invert_or_witness(&unit) {
        Ok(inv) => inv,
        Err(witness) => {
            return GenInvResult::NotInvertible { reason: NotInvertibleReason::SingularUnit, witness }
        }
    };
    let chi = phi.then(&unit_inv);
    assert_eq!(chi, unit_inv.then(phi), "the two unit-formula variants must agree");
    let solved = group_inverse_hartwig(phi).expect("solve route must succeed when the unit route does");
    assert_eq!(chi, solved, "unit route and solve route must agree");
    let cert = certify(phi, &chi, InverseKind::Group, Route::GroupKernelUnit);
    GenInvResult::Found { chi, cert, route: Route::GroupKernelUnit }
}

/// Core inverse via `phi^{n-1}(phi^* phi^n + kappa^* kappa)^{-1} phi^*`
/// for `n >= 3`. Also verifies the projector completion
/// `chi phi + gamma kappa == 1` and the unit factorization
/// `(phi^* phi + kappa^* kappa)(phi^2 + gamma kappa) == phi^* phi^3 + kappa^* kappa`.
pub fn core_via_kernel(phi: &Morphism, n: u32) -> Result<GenInvResult, EngineError> {
    if n < 3 {
        return Err(EngineError::BadExponent { n, min: 3 });
    }
    assert!(phi.is_endo(), "core inverse requires an endomorphism");
    let kappa = kernel(phi);
    let lambda = cokernel(phi);
    let kl = kappa.then(&lambda);
    let kl_inv = match invert_or_witness(&kl) {
        Ok(inv) => inv,
        Err(witness) => {
            return Ok(GenInvResult::NotInvertible {
                reason: NotInvertibleReason::SingularKappaLambda,
                witness,
            })
        }
    };
    let ksk = kappa.adjoint().then(&kappa);
    let unit = &phi.adjoint().then(&phi.pow(n)) + &ksk;
    let data = match unit_data(unit, n) {
        Ok(d) => d,
        Err(witness) => {
            return Ok(GenInvResult::NotInvertible { reason: NotInvertibleReason::SingularUnit, witness })
        }
    };
    let chi = phi.pow(n - 1).then(&data.inverse).then(&phi.adjoint());
    let cert = certify(phi, &chi, InverseKind::Core, Route::CoreKernelUnit { n });

    let id = Morphism::identity(phi.dom(), phi.field());
    let gamma = lambda.then(&kl_inv);
    assert_eq!(
        &chi.then(phi) + &gamma.then(&kappa),
        id,
        "projector completion chi phi + gamma kappa == 1 must hold"
    );
    let sym_unit = &phi.adjoint().then(phi) + &ksk;
    let lhs = sym_unit.then(&(&phi.pow(2) + &gamma.then(&kappa)));
    let rhs = &phi.adjoint().then(&phi.pow(3)) + &ksk;
    assert_eq!(lhs, rhs, "unit factorization identity must hold");

    Ok(GenInvResult::Found { chi, cert, route: Route::CoreKernelUnit { n } })
}

/// Core inverse as `group_inverse(phi).then(phi).then(one_three_inverse)`;
/// the oracle route the other core routes are checked against.
pub fn core_via_composition(phi: &Morphism) -> GenInvResult {
    assert!(phi.is_endo(), "core inverse requires an endomorphism");
    let group = match group_inverse(phi) {
        GenInvResult::Found { chi, .. } => chi,
        GenInvResult::NotInvertible { witness, .. } => {
            return GenInvResult::NotInvertible {
                reason: NotInvertibleReason::NotGroupInvertible,
                witness,
            }
        }
    };
    let psi = inner_inverse(phi);
    let chi13 = one_three_inverse(phi, &psi).expect("canonical inner inverse");
    let chi = group.then(phi).then(&chi13);
    let cert = certify(phi, &chi, InverseKind::Core, Route::CoreComposition);
    GenInvResult::Found { chi, cert, route: Route::CoreComposition }
}

/// Core inverse `[1 - lambda(kappa lambda)^{-1} kappa] psi [1 - kappa^*
/// (kappa kappa^*)^{-1} kappa]` from any inner inverse `psi`; the output
/// does not depend on the choice of `psi`.
pub fn core_via_projectors(phi: &Morphism, psi: &Morphism) -> Result<GenInvResult, EngineError> {
    assert!(phi.is_endo(), "core inverse requires an endomorphism");
    require_inner(phi, psi)?;
    let kappa = kernel(phi);
    let lambda = cokernel(phi);
    let kl_inv = match invert_or_witness(&kappa.then(&lambda)) {
        Ok(inv) => inv,
        Err(witness) => {
            return Ok(GenInvResult::NotInvertible {
                reason: NotInvertibleReason::SingularKappaLambda,
                witness,
            })
        }
    };
    let id = Morphism::identity(phi.dom(), phi.field());
    let along_kernel = &id - &lambda.then(&kl_inv).then(&kappa);
    let chi = along_kernel.then(psi).then(&range_projector(phi));
    let cert = certify(phi, &chi, InverseKind::Core, Route::CoreProjectors);
    Ok(GenInvResult::Found { chi, cert, route: Route::CoreProjectors })
}

/// Core inverse `phi^{n-1} mu^{-1}` from an annihilator `eta` (any
/// morphism with `eta phi == 0`) whose unit `mu = phi^n + eta^* eta` is
/// invertible, `n >= 2`.
pub fn core_via_annihilator(phi: &Morphism, eta: &Morphism, n: u32) -> Result<GenInvResult, EngineError> {
    if n < 2 {
        return Err(EngineError::BadExponent { n, min: 2 });
    }
    assert!(phi.is_endo(), "core inverse requires an endomorphism");
    if eta.cod() != phi.dom() {
        return Err(EngineError::ShapeMismatch(format!(
            "annihilator must map into {}, got {} -> {}",
            phi.dom(), eta.dom(), eta.cod()
        )));
    }
    if !eta.then(phi).is_zero() {
        return Err(EngineError::NotAnnihilator);
    }
    let mu = &phi.pow(n) + &eta.adjoint().then(eta);
    let data = match unit_data(mu, n) {
        Ok(d) => d,
        Err(witness) => {
            return Ok(GenInvResult::NotInvertible { reason: NotInvertibleReason::SingularUnit, witness })
        }
    };
    let chi = phi.pow(n - 1).then(&data.inverse);
    let cert = certify(phi, &chi, InverseKind::Core, Route::CoreAnnihilator { n });
    Ok(GenInvResult::Found { chi, cert, route: Route::CoreAnnihilator { n } })
}

/// Canonical annihilator choice: `1_X - phi phi_core` when `phi` is core
/// invertible (computed through the composition route), the kernel
/// otherwise. Either way `eta.then(phi) == 0`.
pub fn default_annihilator(phi: &Morphism) -> Morphism {
    assert!(phi.is_endo(), "annihilators of endomorphisms only");
    match core_via_composition(phi) {
        GenInvResult::Found { chi, .. } => {
            &Morphism::identity(phi.dom(), phi.field()) - &phi.then(&chi)
        }
        GenInvResult::NotInvertible { .. } => kernel(phi),
    }
}

/// Dual core inverse via `phi^*(phi^n phi^* + lambda lambda^*)^{-1}
/// phi^{n-1}` for `n >= 3`. Also verifies the completion
/// `phi chi + lambda delta == 1` with `delta = (kappa lambda)^{-1} kappa`.
pub fn dual_core_via_cokernel(phi: &Morphism, n: u32) -> Result<GenInvResult, EngineError> {
    if n < 3 {
        return Err(EngineError::BadExponent { n, min: 3 });
    }
    assert!(phi.is_endo(), "dual core inverse requires an endomorphism");
    let kappa = kernel(phi);
    let lambda = cokernel(phi);
    let kl_inv = match invert_or_witness(&kappa.then(&lambda)) {
        Ok(inv) => inv,
        Err(witness) => {
            return Ok(GenInvResult::NotInvertible {
                reason: NotInvertibleReason::SingularKappaLambda,
                witness,
            })
        }
    };
    let unit = &phi.pow(n).then(&phi.adjoint()) + &lambda.then(&lambda.adjoint());
    let data = match unit_data(unit, n) {
        Ok(d) => d,
        Err(witness) => {
            return Ok(GenInvResult::NotInvertible { reason: NotInvertibleReason::SingularUnit, witness })
        }
    };
    let chi = phi.adjoint().then(&data.inverse).then(&phi.pow(n - 1));
    let cert = certify(phi, &chi, InverseKind::DualCore, Route::DualCokernelUnit { n });

    let delta = kl_inv.then(&kappa);
    assert_eq!(
        &phi.then(&chi) + &lambda.then(&delta),
        Morphism::identity(phi.dom(), phi.field()),
        "completion phi chi + lambda delta == 1 must hold"
    );

    Ok(GenInvResult::Found { chi, cert, route: Route::DualCokernelUnit { n } })
}

/// Dual core inverse as `one_four_inverse.then(phi).then(group_inverse)`;
/// the oracle route for the dual side.
pub fn dual_core_via_composition(phi: &Morphism) -> GenInvResult {
    assert!(phi.is_endo(), "dual core inverse requires an endomorphism");
    let group = match group_inverse(phi) {
        GenInvResult::Found { chi, .. } => chi,
        GenInvResult::NotInvertible { witness, .. } => {
            return GenInvResult::NotInvertible {
                reason: NotInvertibleReason::NotGroupInvertible,
                witness,
            }
        }
    };
    let psi = inner_inverse(phi);
    let chi14 = one_four_inverse(phi, &psi).expect("canonical inner inverse");
    let chi = chi14.then(phi).then(&group);
    let cert = certify(phi, &chi, InverseKind::DualCore, Route::DualComposition);
    GenInvResult::Found { chi, cert, route: Route::DualComposition }
}

/// Dual core inverse `[1 - lambda(lambda^* lambda)^{-1} lambda^*] psi
/// [1 - lambda(kappa lambda)^{-1} kappa]` from any inner inverse `psi`.
pub fn dual_core_via_projectors(phi: &Morphism, psi: &Morphism) -> Result<GenInvResult, EngineError> {
    assert!(phi.is_endo(), "dual core inverse requires an endomorphism");
    require_inner(phi, psi)?;
    let kappa = kernel(phi);
    let lambda = cokernel(phi);
    let kl_inv = match invert_or_witness(&kappa.then(&lambda)) {
        Ok(inv) => inv,
        Err(witness) => {
            return Ok(GenInvResult::NotInvertible {
                reason: NotInvertibleReason::SingularKappaLambda,
                witness,
            })
        }
    };
    let id = Morphism::identity(phi.dom(), phi.field());
    let along_kernel = &id - &lambda.then(&kl_inv).then(&kappa);
    let chi = corange_projector(phi).then(psi).then(&along_kernel);
    let cert = certify(phi, &chi, InverseKind::DualCore, Route::DualProjectors);
    Ok(GenInvResult::Found { chi, cert, route: Route::DualProjectors })
}

/// All four inverses from a single inner inverse `psi`: the
/// Moore-Penrose inverse always exists here, the other three exist iff
/// `kappa lambda` is invertible. Cross-consistency
/// `core == group phi mp` and `dual == mp phi group` is checked.
pub fn all_four_inverses(phi: &Morphism, psi: &Morphism) -> Result<AllFour, EngineError> {
    assert!(phi.is_endo(), "all-four requires an endomorphism");
    require_inner(phi, psi)?;
    let kappa = kernel(phi);
    let lambda = cokernel(phi);
    let p13 = range_projector(phi);
    let p14 = corange_projector(phi);

    let mp_chi = p14.then(psi).then(&p13);
    let mp_cert = certify(phi, &mp_chi, InverseKind::MoorePenrose, Route::MpProjectors);
    let mp = GenInvResult::Found { chi: mp_chi.clone(), cert: mp_cert, route: Route::MpProjectors };

    let kl_inv = match invert_or_witness(&kappa.then(&lambda)) {
        Ok(inv) => inv,
        Err(witness) => {
            let not = |w: SingularWitness| GenInvResult::NotInvertible {
                reason: NotInvertibleReason::SingularKappaLambda,
                witness: w,
            };
            return Ok(AllFour {
                mp,
                group: not(witness.clone()),
                core: not(witness.clone()),
                dual_core: not(witness),
            });
        }
    };
    let id = Morphism::identity(phi.dom(), phi.field());
    let along_kernel = &id - &lambda.then(&kl_inv).then(&kappa);

    let group_chi = along_kernel.then(psi).then(&along_kernel);
    let core_chi = along_kernel.then(psi).then(&p13);
    let dual_chi = p14.then(psi).then(&along_kernel);

    assert_eq!(core_chi, group_chi.then(phi).then(&mp_chi), "core == group phi mp must hold");
    assert_eq!(dual_chi, mp_chi.then(phi).then(&group_chi), "dual == mp phi group must hold");

    let group_cert = certify(phi, &group_chi, InverseKind::Group, Route::GroupProjectors);
    let core_cert = certify(phi, &core_chi, InverseKind::Core, Route::CoreProjectors);
    let dual_cert = certify(phi, &dual_chi, InverseKind::DualCore, Route::DualProjectors);

    Ok(AllFour {
        mp,
        group: GenInvResult::Found { chi: group_chi, cert: group_cert, route: Route::GroupProjectors },
        core: GenInvResult::Found { chi: core_chi, cert: core_cert, route: Route::CoreProjectors },
        dual_core: GenInvResult::Found { chi: dual_chi, cert: dual_cert, route: Route::DualProjectors },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Mat;
    use crate::morphism::Obj;
    use crate::scalar::{Field, Scalar};

    fn mq(rows: &[&[i64]]) -> Morphism {
        Morphism::from_int_rows(Field::Q, rows)
    }

    fn mq_frac(rows: &[&[(i64, i64)]]) -> Morphism {
        let r = rows.len();
        let c = rows[0].len();
        Morphism::from_mat(Mat::from_fn(r, c, Field::Q, |i, j| {
            Scalar::from_ratio_i64(rows[i][j].0, rows[i][j].1, Field::Q)
        }))
    }

    fn phi0() -> Morphism {
        mq(&[&[1, 1], &[0, 0]])
    }

    #[test]
    fn verify_core_triple_examples() {
        let cert = verify(&phi0(), &mq(&[&[1, 0], &[0, 0]]), InverseKind::Core).unwrap();
        assert!(cert.all_hold());

        let id = Morphism::identity(Obj(2), Field::Q);
        for kind in [
            InverseKind::OneThree,
            InverseKind::OneFour,
            InverseKind::MoorePenrose,
            InverseKind::Group,
            InverseKind::Core,
            InverseKind::DualCore,
        ] {
            assert!(verify(&id, &id, kind).unwrap().all_hold());
        }

        let nil = mq(&[&[0, 1], &[0, 0]]);
        let cert = verify(&nil, &nil.adjoint(), InverseKind::Core).unwrap();
        assert!(!cert.check("recover").unwrap().holds);
    }

    #[test]
    fn one_three_examples() {
        let phi = phi0();
        let chi = one_three_inverse(&phi, &phi).unwrap();
        assert_eq!(chi, mq(&[&[1, 0], &[0, 0]]));

        let id = Morphism::identity(Obj(2), Field::Q);
        assert_eq!(one_three_inverse(&id, &id).unwrap(), id);

        let psi = mq_frac(&[&[(1, 2), (0, 1)], &[(1, 2), (0, 1)]]);
        assert_eq!(one_three_inverse(&phi, &psi).unwrap(), psi);

        // A non-inner psi is rejected.
        assert!(matches!(
            one_three_inverse(&phi, &mq(&[&[0, 0], &[0, 1]])),
            Err(EngineError::NotInnerInverse)
        ));
    }

    #[test]
    fn one_four_examples() {
        let phi = phi0();
        let chi = one_four_inverse(&phi, &phi).unwrap();
        assert_eq!(chi, mq_frac(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]));

        let id = Morphism::identity(Obj(2), Field::Q);
        assert_eq!(one_four_inverse(&id, &id).unwrap(), id);

        let z = Morphism::zero(Obj(2), Obj(2), Field::Q);
        assert!(one_four_inverse(&z, &z).unwrap().is_zero());
    }

    #[test]
    fn mp_examples() {
        let phi = phi0();
        match mp_inverse(&phi) {
            GenInvResult::Found { chi, cert, .. } => {
                assert_eq!(chi, mq_frac(&[&[(1, 2), (0, 1)], &[(1, 2), (0, 1)]]));
                assert!(cert.all_hold());
            }
            _ => panic!("mp always exists"),
        }

        let a = mq(&[&[1, 1], &[1, 2]]);
        let inv = a.inverse().unwrap().into_inverse().unwrap();
        assert_eq!(mp_inverse(&a).found().unwrap(), &inv);

        let z = Morphism::zero(Obj(2), Obj(2), Field::Q);
        assert!(mp_inverse(&z).found().unwrap().is_zero());

        // Rectangular shapes work too.
        let rect = mq(&[&[1, 0, 2], &[0, 1, 1]]);
        let chi = mp_inverse(&rect).found().unwrap().clone();
        assert_eq!(rect.then(&chi).then(&rect), rect);
    }

    #[test]
    fn group_examples() {
        let phi = phi0();
        match group_inverse(&phi) {
            GenInvResult::Found { chi, cert, .. } => {
                assert_eq!(chi, phi);
                assert!(cert.all_hold());
            }
            _ => panic!("index-1 input"),
        }

        match group_inverse(&mq(&[&[0, 1], &[0, 0]])) {
            GenInvResult::NotInvertible { reason, witness } => {
                assert_eq!(reason, NotInvertibleReason::SingularKappaLambda);
                assert!(witness.verify());
            }
            _ => panic!("nilpotent has no group inverse"),
        }

        let a = mq(&[&[1, 1], &[1, 2]]);
        let inv = a.inverse().unwrap().into_inverse().unwrap();
        assert_eq!(group_inverse(&a).found().unwrap(), &inv);
    }

    #[test]
    fn core_kernel_route_examples() {
        let phi = phi0();
        let got = core_via_kernel(&phi, 3).unwrap();
        assert_eq!(got.found().unwrap(), &mq(&[&[1, 0], &[0, 0]]));

        let id = Morphism::identity(Obj(2), Field::Q);
        for n in [3, 4, 5] {
            assert_eq!(core_via_kernel(&id, n).unwrap().found().unwrap(), &id);
        }

        match core_via_kernel(&mq(&[&[0, 1], &[0, 0]]), 3).unwrap() {
            GenInvResult::NotInvertible { reason, witness } => {
                assert_eq!(reason, NotInvertibleReason::SingularKappaLambda);
                assert!(witness.verify());
            }
            _ => panic!("nilpotent is not core invertible"),
        }

        assert!(matches!(
            core_via_kernel(&phi, 2),
            Err(EngineError::BadExponent { n: 2, min: 3 })
        ));
    }

    #[test]
    fn core_composition_examples() {
        let phi = phi0();
        assert_eq!(core_via_composition(&phi).found().unwrap(), &mq(&[&[1, 0], &[0, 0]]));

        let a = mq(&[&[1, 1], &[1, 2]]);
        let inv = a.inverse().unwrap().into_inverse().unwrap();
        assert_eq!(core_via_composition(&a).found().unwrap(), &inv);

        let z = Morphism::zero(Obj(2), Obj(2), Field::Q);
        assert!(core_via_composition(&z).found().unwrap().is_zero());
    }

    #[test]
    fn core_projectors_examples() {
        let phi = phi0();
        let with_phi = core_via_projectors(&phi, &phi).unwrap();
        assert_eq!(with_phi.found().unwrap(), &mq(&[&[1, 0], &[0, 0]]));

        let psi = mq_frac(&[&[(1, 2), (0, 1)], &[(1, 2), (0, 1)]]);
        let with_psi = core_via_projectors(&phi, &psi).unwrap();
        assert_eq!(with_psi.found(), with_phi.found());

        let id = Morphism::identity(Obj(2), Field::Q);
        assert_eq!(core_via_projectors(&id, &id).unwrap().found().unwrap(), &id);
    }

    #[test]
    fn core_annihilator_examples() {
        let phi = phi0();
        let eta = mq(&[&[0, 0], &[0, 1]]);
        let got = core_via_annihilator(&phi, &eta, 2).unwrap();
        assert_eq!(got.found().unwrap(), &mq(&[&[1, 0], &[0, 0]]));

        let id = Morphism::identity(Obj(2), Field::Q);
        let empty = Morphism::zero(Obj(0), Obj(2), Field::Q);
        assert_eq!(core_via_annihilator(&id, &empty, 2).unwrap().found().unwrap(), &id);

        let nil = mq(&[&[0, 1], &[0, 0]]);
        let eta = mq(&[&[0, 1]]);
        match core_via_annihilator(&nil, &eta, 2).unwrap() {
            GenInvResult::NotInvertible { reason, witness } => {
                assert_eq!(reason, NotInvertibleReason::SingularUnit);
                assert!(witness.verify());
            }
            _ => panic!("mu is singular here"),
        }

        // eta must annihilate phi.
        assert!(matches!(
            core_via_annihilator(&phi, &mq(&[&[1, 0]]), 2),
            Err(EngineError::NotAnnihilator)
        ));
    }

    #[test]
    fn default_annihilator_matches_projector() {
        let phi = phi0();
        assert_eq!(default_annihilator(&phi), mq(&[&[0, 0], &[0, 1]]));
        let nil = mq(&[&[0, 1], &[0, 0]]);
        assert_eq!(default_annihilator(&nil), kernel(&nil));
    }

    #[test]
    fn dual_core_examples() {
        let phi = phi0();
        let expected = mq_frac(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]);
        assert_eq!(dual_core_via_cokernel(&phi, 3).unwrap().found().unwrap(), &expected);
        assert_eq!(dual_core_via_composition(&phi).found().unwrap(), &expected);
        assert_eq!(dual_core_via_projectors(&phi, &phi).unwrap().found().unwrap(), &expected);

        let a = mq(&[&[1, 1], &[1, 2]]);
        let inv = a.inverse().unwrap().into_inverse().unwrap();
        assert_eq!(dual_core_via_cokernel(&a, 3).unwrap().found().unwrap(), &inv);

        assert!(!dual_core_via_cokernel(&mq(&[&[0, 1], &[0, 0]]), 3).unwrap().is_found());

        // The inner-inverse hypothesis is checked.
        assert!(matches!(
            dual_core_via_projectors(&phi, &mq(&[&[0, 0], &[0, 1]])),
            Err(EngineError::NotInnerInverse)
        ));
    }

    #[test]
    fn all_four_collapse_to_the_inverse_when_invertible() {
        let a = mq(&[&[1, 1], &[1, 2]]);
        let inv = a.inverse().unwrap().into_inverse().unwrap();
        let four = all_four_inverses(&a, &inv).unwrap();
        for result in [&four.mp, &four.group, &four.core, &four.dual_core] {
            assert_eq!(result.found().unwrap(), &inv);
        }
    }

    #[test]
    fn all_four_on_the_worked_example() {
        let phi = phi0();
        let four = all_four_inverses(&phi, &phi).unwrap();
        assert_eq!(four.mp.found().unwrap(), &mq_frac(&[&[(1, 2), (0, 1)], &[(1, 2), (0, 1)]]));
        assert_eq!(four.group.found().unwrap(), &phi);
        assert_eq!(four.core.found().unwrap(), &mq(&[&[1, 0], &[0, 0]]));
        assert_eq!(
            four.dual_core.found().unwrap(),
            &mq_frac(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]])
        );
    }

    #[test]
    fn all_four_on_the_nilpotent_block() {
        let nil = mq(&[&[0, 1], &[0, 0]]);
        let psi = inner_inverse(&nil);
        let four = all_four_inverses(&nil, &psi).unwrap();
        assert_eq!(four.mp.found().unwrap(), &mq(&[&[0, 0], &[1, 0]]));
        assert!(!four.group.is_found());
        assert!(!four.core.is_found());
        assert!(!four.dual_core.is_found());
    }
}
