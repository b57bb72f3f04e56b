//! Heterogeneous (Marcus–Hush–Chidsey type) reduction rates at a metal
//! electrode in the wide-band limit.
//!
//! The rate integrates single-state barriers over the occupied electrode
//! continuum, with `ΔG°(ε) = eη_f − ε` for a metal level at `ε` (eV, relative
//! to the Fermi level). Overpotentials are in volts; for one electron `eη_f`
//! in eV has the same numerical value.

use std::cell::RefCell;

use crate::barriers::{barrier, effective_lambda, BarrierMethod};
use crate::error::{Error, Result};
use crate::model::{CouplingModel, DiabaticSystem};
use crate::numerics::{erfc, integrate, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};

/// CODATA 2018 values in eV-based units.
pub mod constants {
    /// Boltzmann constant, eV/K.
    pub const K_B: f64 = 8.617_333_262e-5;
    /// Planck constant, eV·s.
    pub const H: f64 = 4.135_667_696e-15;
    /// Reduced Planck constant, eV·s.
    pub const HBAR: f64 = 6.582_119_569e-16;
}

use constants::{H, HBAR, K_B};

/// Largest `βE*` kept in the integrand; `exp(-700)` is the floor.
const MAX_EXPONENT: f64 = 700.0;
/// Relative change below which doubling the energy window stops.
const WINDOW_REL_TOL: f64 = 1e-6;
const MAX_WINDOW_DOUBLINGS: usize = 8;

pub fn beta(temperature: f64) -> f64 {
    1.0 / (K_B * temperature)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefactorKind {
    /// Classical attempt frequency `k_B T / h`.
    Adiabatic,
    /// Golden-rule prefactor `(V²/ħ) √(πβ/λ)`.
    NonAdiabatic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectrodeConditions {
    /// Kelvin.
    pub temperature: f64,
    /// Formal overpotential in volts; negative values favour reduction.
    pub eta_f: f64,
    /// Wide-band density of states, eV⁻¹.
    pub rho: f64,
    pub prefactor: PrefactorKind,
}

impl ElectrodeConditions {
    pub fn new(temperature: f64, eta_f: f64, rho: f64, prefactor: PrefactorKind) -> Result<Self> {
        let c = Self {
            temperature,
            eta_f,
            rho,
            prefactor,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            problems.push(format!("temperature must be positive, got {}", self.temperature));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            problems.push(format!("density of states must be positive, got {}", self.rho));
        }
        if !self.eta_f.is_finite() {
            problems.push(format!("overpotential must be finite, got {}", self.eta_f));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }

    pub fn beta(&self) -> f64 {
        beta(self.temperature)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRequest {
    pub sys: DiabaticSystem,
    pub coupling: CouplingModel,
    pub cond: ElectrodeConditions,
    pub barrier_method: BarrierMethod,
}

/// Fermi–Dirac occupancy `1 / (1 + exp(ε / k_BT))`, stable for any `ε`.
pub fn fermi_dirac(eps: f64, temperature: f64) -> f64 {
    logistic_complement(eps * beta(temperature))
}

/// `1 / (1 + e^x)` without overflow.
fn logistic_complement(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Rate prefactor in s⁻¹. `coupling_at_crossing` is only read for the
/// non-adiabatic kind.
pub fn prefactor(kind: PrefactorKind, sys: &DiabaticSystem, coupling_at_crossing: f64, temperature: f64) -> f64 {
    match kind {
        PrefactorKind::Adiabatic => K_B * temperature / H,
        PrefactorKind::NonAdiabatic => {
            let v2 = coupling_at_crossing * coupling_at_crossing;
            v2 / HBAR * (std::f64::consts::PI * beta(temperature) / sys.lambda).sqrt()
        }
    }
}

/// Barrier of the ε-shifted system, surfacing model errors instead of NaN.
fn shifted_barrier(req: &RateRequest, eps: f64) -> Result<f64> {
    let sys = req.sys.with_dg0(req.cond.eta_f - eps);
    Ok(barrier(&sys, &req.coupling, req.barrier_method)?.e_star)
}

/// Half-width of the first energy window tried by [`mhc_rate_numeric`].
pub fn initial_window(req: &RateRequest) -> f64 {
    2.0 * req.sys.lambda + req.cond.eta_f.abs() + 40.0 * K_B * req.cond.temperature
}

/// `∫ n(ε) exp(−βE*(ΔG°(ε))) dε` over `[−half_width, half_width]`, in eV.
pub fn mhc_integral(req: &RateRequest, half_width: f64) -> Result<f64> {
    let b = req.cond.beta();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |eps: f64| -> f64 {
        match shifted_barrier(req, eps) {
            Ok(e_star) => fermi_dirac(eps, req.cond.temperature) * (-(b * e_star).min(MAX_EXPONENT)).exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let result = integrate(integrand, -half_width, half_width, DEFAULT_REL_TOL, DEFAULT_ABS_TOL);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    result
}

/// Rate constant (s⁻¹) from direct quadrature over the electrode continuum.
///
/// The window `[−W, W]` starts at `W = 2λ + |η_f| + 40 k_BT` and doubles
/// until the integral changes by less than 1e-6 relative.
pub fn mhc_rate_numeric(req: &RateRequest) -> Result<f64> {
    req.sys.validate()?;
    req.coupling.validate()?;
    req.cond.validate()?;
    let a = prefactor(
        req.cond.prefactor,
        &req.sys,
        req.coupling.eval(0.5),
        req.cond.temperature,
    );
    if a == 0.0 {
        return Ok(0.0);
    }
    let mut w = initial_window(req);
    let mut prev = mhc_integral(req, w)?;
    for _ in 0..MAX_WINDOW_DOUBLINGS {
        w *= 2.0;
        let next = mhc_integral(req, w)?;
        if (next - prev).abs() <= WINDOW_REL_TOL * next.abs() {
            return Ok(a * req.cond.rho * next);
        }
        prev = next;
    }
    Err(Error::Accuracy {
        estimate: a * req.cond.rho * prev,
        error: f64::NAN,
    })
}

/// `λ_eff` with the crossing coordinate taken at the Fermi level, i.e.
/// `λ − 4 V((λ + eη_f) / 2λ) + 4 V(0)² / λ`.
pub fn effective_lambda_overpotential(lambda: f64, c: &CouplingModel, eta_f: f64) -> Result<f64> {
    let sys = DiabaticSystem::new(lambda, eta_f)?;
    effective_lambda(&sys, c)
}

/// Closed-form adiabatic rate (s⁻¹):
///
/// ```text
/// k = ρ √(πλ_eff/β) / (βh (1 + e^{βeη_f}))
///     · erfc[(βλ_eff − √(1 + √(βλ_eff) + (βeη_f)²)) / (2√(βλ_eff))]
/// ```
pub fn mhc_rate_closed_form(lambda_eff: f64, cond: &ElectrodeConditions) -> Result<f64> {
    cond.validate()?;
    if !(lambda_eff > 0.0) {
        return Err(Error::SingularRegime { lambda_eff });
    }
    let b = cond.beta();
    let bl = b * lambda_eff;
    let be = b * cond.eta_f;
    let pre = cond.rho * (std::f64::consts::PI * lambda_eff / b).sqrt() / (b * H) * logistic_complement(be);
    let arg = (bl - (1.0 + bl.sqrt() + be * be).sqrt()) / (2.0 * bl.sqrt());
    Ok(pre * erfc(arg))
}

/// Coupling implied by a measured effective reorganization energy under the
/// Condon approximation: `V = λ/2 − ½ √(λ λ_eff)`.
pub fn extract_coupling(lambda: f64, lambda_eff: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!(
            "reorganization energy must be positive, got {lambda}"
        )));
    }
    if !(lambda_eff > 0.0) {
        return Err(Error::Domain(format!(
            "effective reorganization energy must be positive, got {lambda_eff}"
        )));
    }
    if lambda_eff > lambda {
        return Err(Error::Domain(format!(
            "effective reorganization energy {lambda_eff} exceeds λ = {lambda}"
        )));
    }
    // λ/2 − ½√(λ λ_eff) rearranged to avoid cancellation for weak coupling.
    Ok(lambda * (lambda - lambda_eff) / (2.0 * (lambda + (lambda * lambda_eff).sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cond(t: f64, eta: f64, kind: PrefactorKind) -> ElectrodeConditions {
        ElectrodeConditions::new(t, eta, 1.0, kind).unwrap()
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn fermi_values() {
        assert_eq!(fermi_dirac(0.0, 300.0), 0.5);
        assert_eq!(fermi_dirac(0.0, 1234.0), 0.5);
        let n = fermi_dirac(0.1, 300.0);
        assert!((n - 0.020_468_792_121_107_809_837).abs() < 1e-15, "{n}");
        let e = 0.237;
        assert!((fermi_dirac(e, 300.0) + fermi_dirac(-e, 300.0) - 1.0).abs() < 1e-15);
        assert_eq!(fermi_dirac(100.0, 300.0), 0.0);
        assert_eq!(fermi_dirac(-100.0, 300.0), 1.0);
    }

    #[test]
    fn prefactor_values() {
        let s = DiabaticSystem::new(4.0, 0.0).unwrap();
        let a300 = prefactor(PrefactorKind::Adiabatic, &s, 0.0, 300.0);
        assert!((a300 / 6_250_985_738_289.356 - 1.0).abs() < 1e-12);
        let a150 = prefactor(PrefactorKind::Adiabatic, &s, 0.0, 150.0);
        assert!((a150 - 0.5 * a300).abs() <= 1e-15 * a300);
        let na = prefactor(PrefactorKind::NonAdiabatic, &s, 0.5, 300.0);
        assert!((na / 2_093_495_878_481_287.7 - 1.0).abs() < 1e-12, "{na:e}");
    }

    #[test]
    fn overpotential_lambda_eff() {
        let c = CouplingModel::constant(0.5);
        let base = effective_lambda_overpotential(4.0, &c, 0.0).unwrap();
        for eta in [-1.0, -0.3, 0.4] {
            assert_eq!(effective_lambda_overpotential(4.0, &c, eta).unwrap(), base);
        }
        assert!((base - (4.0 - 2.0 + 0.25)).abs() < 1e-15);
        let a = effective_lambda_overpotential(4.0, &CouplingModel::linear(0.1, 0.5), 0.0).unwrap();
        assert!((a - 2.81).abs() < 1e-12);
        let b = effective_lambda_overpotential(4.0, &CouplingModel::linear(0.6, 1.0), -0.3).unwrap();
        assert!((b - 1.22).abs() < 1e-12);
        assert!(matches!(
            effective_lambda_overpotential(1.0, &CouplingModel::constant(0.5), 0.0),
            Err(Error::SingularRegime { .. })
        ));
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn closed_form_reference_value() {
        let k = mhc_rate_closed_form(2.25, &cond(300.0, 0.0, PrefactorKind::Adiabatic)).unwrap();
        assert!((k / 281.865_376_950_530_185_71 - 1.0).abs() < 1e-11, "{k}");
    }

    #[test]
    fn closed_form_limits() {
        let k0 = mhc_rate_closed_form(2.25, &cond(300.0, 0.0, PrefactorKind::Adiabatic)).unwrap();
        let k2 = mhc_rate_closed_form(2.25, &cond(300.0, 2.0, PrefactorKind::Adiabatic)).unwrap();
        assert!(k2 < 1e-6 * k0);
        let mut c = cond(300.0, -0.37, PrefactorKind::Adiabatic);
        let k = mhc_rate_closed_form(1.3, &c).unwrap();
        c.rho = 2.0;
        assert_eq!(mhc_rate_closed_form(1.3, &c).unwrap(), 2.0 * k);
        assert!(matches!(
            mhc_rate_closed_form(0.0, &c),
            Err(Error::SingularRegime { .. })
        ));
    }

    #[test]
    fn numeric_rate_vanishes_without_coupling() {
        let req = RateRequest {
            sys: DiabaticSystem::new(4.0, 0.0).unwrap(),
            coupling: CouplingModel::constant(0.0),
            cond: cond(300.0, -0.3, PrefactorKind::NonAdiabatic),
            barrier_method: BarrierMethod::Marcus,
        };
        assert_eq!(mhc_rate_numeric(&req).unwrap(), 0.0);
    }

    #[test]
    fn numeric_rate_grows_with_driving_force() {
        let mut req = RateRequest {
            sys: DiabaticSystem::new(4.0, 0.0).unwrap(),
            coupling: CouplingModel::constant(0.5),
            cond: cond(300.0, -0.3, PrefactorKind::Adiabatic),
            barrier_method: BarrierMethod::Marcus,
        };
        let k3 = mhc_rate_numeric(&req).unwrap();
        req.cond.eta_f = -0.5;
        let k5 = mhc_rate_numeric(&req).unwrap();
        assert!(k5 > k3);
    }

    #[test]
    fn numeric_rate_reports_singular_effective_lambda() {
        // Linear coupling whose λ_eff goes negative for strongly exothermic levels.
        let req = RateRequest {
            sys: DiabaticSystem::new(2.0, 0.0).unwrap(),
            coupling: CouplingModel::linear(0.0, 2.0),
            cond: cond(300.0, 0.0, PrefactorKind::Adiabatic),
            barrier_method: BarrierMethod::EffectiveLambda,
        };
        assert!(matches!(mhc_rate_numeric(&req), Err(Error::SingularRegime { .. })));
    }

    #[test]
    fn coupling_extraction() {
        let v = extract_coupling(6.3, 0.75).unwrap();
        assert!((v - 2.063_146_744_035_792_1).abs() < 1e-12);
        assert_eq!(extract_coupling(4.0, 4.0).unwrap(), 0.0);
        assert!((extract_coupling(4.0, 1e-300).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(extract_coupling(4.0, 5.0), Err(Error::Domain(_))));
        assert!(matches!(extract_coupling(4.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(extract_coupling(4.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn conditions_validation_aggregates() {
        let e = ElectrodeConditions::new(-1.0, 0.0, 0.0, PrefactorKind::Adiabatic).unwrap_err();
        let msg = e.to_string();
        assert!(
            msg.contains("temperature") && msg.contains("density of states"),
            "{msg}"
        );
    }
}
