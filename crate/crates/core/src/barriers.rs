//! Activation barriers of the two-level system by four routes, the effective
//! reorganization energy, and regime diagnostics.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{lower_adiabat, CouplingModel, DiabaticSystem, Q_WINDOW};
use crate::numerics::{
    maximize_1d, minimize_1d, scan_brackets, ExtremumKind, ExtremumResult, DEFAULT_SCAN_POINTS, DEFAULT_TOL_X,
};
use crate::rates::constants::K_B;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BarrierMethod {
    /// Uncoupled Marcus barrier `(λ + ΔG°)² / 4λ`.
    Marcus,
    /// Marcus barrier lowered by `V(½)`; not clamped, so it can go negative.
    ConstantShift,
    /// Marcus form evaluated with the reduced reorganization energy.
    EffectiveLambda,
    /// Numerically located extrema of the ground adiabat.
    ExactAdiabat,
}

impl BarrierMethod {
    /// Canonical output order.
    pub const ALL: [BarrierMethod; 4] = [
        Self::Marcus,
        Self::ConstantShift,
        Self::EffectiveLambda,
        Self::ExactAdiabat,
    ];

    /// Short name used in CLI flags and column headers.
    pub fn short_name(self) -> &'static str {
        match self {
            Self::Marcus => "marcus",
            Self::ConstantShift => "shift",
            Self::EffectiveLambda => "eff",
            Self::ExactAdiabat => "exact",
        }
    }
}

impl fmt::Display for BarrierMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for BarrierMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "marcus" => Ok(Self::Marcus),
            "shift" => Ok(Self::ConstantShift),
            "eff" => Ok(Self::EffectiveLambda),
            "exact" => Ok(Self::ExactAdiabat),
            other => Err(Error::InvalidInput(format!(
                "unknown barrier method {other:?}; expected marcus, shift, eff or exact"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierResult {
    /// Activation energy in eV.
    pub e_star: f64,
    /// Transition-state coordinate. `None` only for an activationless exact surface.
    pub q_ts: Option<f64>,
    /// Reactant-minimum coordinate (0 for the diabatic formulas).
    pub q_r: f64,
    /// Reorganization energy the barrier formula used (λ or λ_eff).
    pub lambda_used: f64,
    pub activationless: bool,
}

/// Diabatic crossing coordinate `½ (1 + ΔG°/λ)`.
pub fn marcus_ts(sys: &DiabaticSystem) -> f64 {
    0.5 * (1.0 + sys.dg0 / sys.lambda)
}

/// `(λ + ΔG°)² / 4λ`, also used unchanged in the inverted regime.
pub fn marcus_barrier_formula(lambda: f64, dg0: f64) -> f64 {
    let s = lambda + dg0;
    s * s / (4.0 * lambda)
}

pub fn marcus_barrier(sys: &DiabaticSystem) -> f64 {
    marcus_barrier_formula(sys.lambda, sys.dg0)
}

/// `λ_eff = λ − 4 V(q*) + 4 V(0)² / λ` with `q*` the diabatic crossing.
///
/// With a constant coupling this is `λ (1 − 2V/λ)²` for every ΔG°.
pub fn effective_lambda(sys: &DiabaticSystem, c: &CouplingModel) -> Result<f64> {
    let lambda_eff = effective_lambda_unchecked(sys, c);
    if lambda_eff > 0.0 {
        Ok(lambda_eff)
    } else {
        Err(Error::SingularRegime { lambda_eff })
    }
}

fn effective_lambda_unchecked(sys: &DiabaticSystem, c: &CouplingModel) -> f64 {
    let v_ts = c.eval(marcus_ts(sys));
    let v_r = c.eval(0.0);
    sys.lambda - 4.0 * v_ts + 4.0 * v_r * v_r / sys.lambda
}

/// Refined stationary points of the ground adiabat inside [`Q_WINDOW`].
#[derive(Debug, Clone)]
pub struct AdiabatExtrema {
    pub minima: Vec<ExtremumResult>,
    pub maxima: Vec<ExtremumResult>,
}

pub fn adiabat_extrema(sys: &DiabaticSystem, c: &CouplingModel) -> Result<AdiabatExtrema> {
    let f = |q: f64| lower_adiabat(sys, c, q);
    let brackets = scan_brackets(f, Q_WINDOW.0, Q_WINDOW.1, DEFAULT_SCAN_POINTS)?;
    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    for (b, kind) in brackets {
        match kind {
            ExtremumKind::Min => minima.push(minimize_1d(f, b, DEFAULT_TOL_X)),
            ExtremumKind::Max => maxima.push(maximize_1d(f, b, DEFAULT_TOL_X)),
        }
    }
    Ok(AdiabatExtrema { minima, maxima })
}

fn exact_adiabat_barrier(sys: &DiabaticSystem, c: &CouplingModel) -> Result<BarrierResult> {
    let ext = adiabat_extrema(sys, c)?;
    let reactant = *ext
        .minima
        .first()
        .ok_or_else(|| Error::SurfaceTopology(format!("lower adiabat has no minimum in q ∈ {Q_WINDOW:?}")))?;

    if let Some(product) = ext.minima.get(1) {
        if let Some(ts) = ext.maxima.iter().find(|m| m.x > reactant.x && m.x < product.x) {
            return Ok(BarrierResult {
                e_star: (ts.fx - reactant.fx).max(0.0),
                q_ts: Some(ts.x),
                q_r: reactant.x,
                lambda_used: sys.lambda,
                activationless: false,
            });
        }
    }

    // Single well. On the product side of the diabatic crossing the reaction
    // is downhill with no barrier. On the reactant side there is no product
    // basin in the window; the barrier is then the ground-state energy at the
    // diabatic crossing measured from the well.
    let q_cross = marcus_ts(sys);
    if reactant.x < q_cross {
        let e_star = lower_adiabat(sys, c, q_cross) - reactant.fx;
        if e_star > SINGLE_WELL_FLOOR {
            return Ok(BarrierResult {
                e_star,
                q_ts: Some(q_cross),
                q_r: reactant.x,
                lambda_used: sys.lambda,
                activationless: false,
            });
        }
    }
    Ok(BarrierResult {
        e_star: 0.0,
        q_ts: None,
        q_r: reactant.x,
        lambda_used: sys.lambda,
        activationless: true,
    })
}

/// Crossing-point barriers smaller than this on a single-well surface are
/// minimiser noise around a well centred on the crossing.
const SINGLE_WELL_FLOOR: f64 = 1e-12;

pub fn barrier(sys: &DiabaticSystem, c: &CouplingModel, method: BarrierMethod) -> Result<BarrierResult> {
    let q_star = marcus_ts(sys);
    let diabatic = |e_star: f64, lambda_used: f64| BarrierResult {
        e_star,
        q_ts: Some(q_star),
        q_r: 0.0,
        lambda_used,
        activationless: e_star == 0.0,
    };
    match method {
        BarrierMethod::Marcus => Ok(diabatic(marcus_barrier(sys), sys.lambda)),
        BarrierMethod::ConstantShift => Ok(diabatic(marcus_barrier(sys) - c.eval(0.5), sys.lambda)),
        BarrierMethod::EffectiveLambda => {
            let lambda_eff = effective_lambda(sys, c)?;
            Ok(diabatic(marcus_barrier_formula(lambda_eff, sys.dg0), lambda_eff))
        }
        BarrierMethod::ExactAdiabat => exact_adiabat_barrier(sys, c),
    }
}

/// Energy difference between the product and reactant minima of the ground
/// adiabat. Diagnostic only; differs from ΔG° at second order in the coupling.
pub fn adiabatic_driving_force(sys: &DiabaticSystem, c: &CouplingModel) -> Result<f64> {
    let ext = adiabat_extrema(sys, c)?;
    match (ext.minima.first(), ext.minima.last()) {
        (Some(r), Some(p)) if ext.minima.len() >= 2 => Ok(p.fx - r.fx),
        _ => Err(Error::SurfaceTopology(format!(
            "lower adiabat has {} minimum(s) in q ∈ {Q_WINDOW:?}; need a reactant and a product well",
            ext.minima.len()
        ))),
    }
}

/// Temperature at which the weak-coupling check is made.
pub const VALIDITY_TEMPERATURE: f64 = 300.0;

/// Regimes where the reduced-λ barrier is known to be unreliable. The
/// thresholds are heuristics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValidityWarning {
    /// `λ_eff ≤ 0.1 λ`: the Marcus form approaches its singularity.
    SmallEffectiveLambda { lambda_eff: f64, lambda: f64 },
    /// `|ΔG°| / λ > 0.25`: higher-order terms in ΔG° matter.
    LargeDrivingForce { ratio: f64 },
    /// `max V / λ > 0.5`: the coupling is not small next to λ.
    StrongCoupling { ratio: f64 },
    /// `max V < k_B T` at 300 K: the reaction is not adiabatic.
    WeakCoupling { v_max: f64, kt: f64 },
}

impl fmt::Display for ValidityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SmallEffectiveLambda { lambda_eff, lambda } => {
                write!(
                    f,
                    "effective reorganization energy {lambda_eff:.4} eV is at most 10% of λ = {lambda} eV"
                )
            }
            Self::LargeDrivingForce { ratio } => write!(f, "|ΔG°|/λ = {ratio:.3} exceeds 0.25"),
            Self::StrongCoupling { ratio } => write!(f, "max V/λ = {ratio:.3} exceeds 0.5"),
            Self::WeakCoupling { v_max, kt } => {
                write!(
                    f,
                    "max V = {v_max:.4} eV is below k_BT = {kt:.4} eV (non-adiabatic regime)"
                )
            }
        }
    }
}

pub fn validity_report(sys: &DiabaticSystem, c: &CouplingModel) -> Vec<ValidityWarning> {
    let mut out = Vec::new();
    let lambda_eff = effective_lambda_unchecked(sys, c);
    if lambda_eff <= 0.1 * sys.lambda {
        out.push(ValidityWarning::SmallEffectiveLambda {
            lambda_eff,
            lambda: sys.lambda,
        });
    }
    let ratio = sys.dg0.abs() / sys.lambda;
    if ratio > 0.25 {
        out.push(ValidityWarning::LargeDrivingForce { ratio });
    }
    let v_max = c.max_abs_on_unit();
    if v_max / sys.lambda > 0.5 {
        out.push(ValidityWarning::StrongCoupling {
            ratio: v_max / sys.lambda,
        });
    }
    let kt = K_B * VALIDITY_TEMPERATURE;
    if v_max < kt {
        out.push(ValidityWarning::WeakCoupling { v_max, kt });
    }
    out
}
