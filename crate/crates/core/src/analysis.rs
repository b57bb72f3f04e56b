//! Parameter sweeps (barrier, Tafel and Arrhenius tables), recovery of an
//! effective reorganization energy from Tafel data, and Arrhenius slopes.
//!
//! Sweep points are evaluated in parallel; rows are always assembled in
//! ascending abscissa order, so output is deterministic.

use rayon::prelude::*;

use crate::barriers::{barrier, BarrierMethod};
use crate::error::{Error, Result};
use crate::model::{CouplingModel, DiabaticSystem};
use crate::numerics::{minimize_1d, Bracket};
use crate::rates::constants::K_B;
use crate::rates::{
    effective_lambda_overpotential, mhc_rate_closed_form, mhc_rate_numeric, ElectrodeConditions, PrefactorKind,
    RateRequest,
};
use crate::table::SweepTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Driving force ΔG°, eV.
    Dg0,
    /// `V(0)` of the coupling model (the value of a constant coupling), eV.
    CouplingScalar,
    /// Reorganization energy λ, eV.
    Lambda,
    /// Formal overpotential, V.
    EtaF,
    /// Inverse temperature, K⁻¹.
    InvTemperature,
}

impl SweepVariable {
    pub fn column_name(self) -> &'static str {
        match self {
            Self::Dg0 => "dG0_eV",
            Self::CouplingScalar => "V_eV",
            Self::Lambda => "lambda_eV",
            Self::EtaF => "eta_f_V",
            Self::InvTemperature => "invT_per_K",
        }
    }
}

/// Everything held fixed during a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedParams {
    pub sys: DiabaticSystem,
    pub coupling: CouplingModel,
    pub cond: ElectrodeConditions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub n: usize,
    pub fixed: FixedParams,
    pub methods: Vec<BarrierMethod>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n < 2 {
            problems.push(format!("sweep needs n >= 2, got {}", self.n));
        }
        if !(self.from.is_finite() && self.to.is_finite()) || self.from == self.to {
            problems.push(format!(
                "sweep range must be finite with from != to, got [{}, {}]",
                self.from, self.to
            ));
        }
        if self.methods.is_empty() {
            problems.push("at least one method is required".into());
        }
        let lo = self.from.min(self.to);
        match self.variable {
            SweepVariable::Lambda if lo <= 0.0 => {
                problems.push("reorganization energy sweep must stay positive".into())
            }
            SweepVariable::InvTemperature if lo <= 0.0 => {
                problems.push("inverse temperature sweep must stay positive".into())
            }
            _ => {}
        }
        if let Err(e) = self.fixed.sys.validate() {
            problems.push(e.to_string());
        }
        if let Err(e) = self.fixed.coupling.validate() {
            problems.push(e.to_string());
        }
        if let Err(e) = self.fixed.cond.validate() {
            problems.push(e.to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }

    /// Sample abscissae in ascending order, endpoints exact.
    pub fn abscissae(&self) -> Vec<f64> {
        let (lo, hi) = if self.from < self.to {
            (self.from, self.to)
        } else {
            (self.to, self.from)
        };
        (0..self.n)
            .map(|i| {
                if i == self.n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (self.n - 1) as f64
                }
            })
            .collect()
    }
}

fn run_sweep<F>(spec: &SweepSpec, columns: Vec<String>, cell: F) -> SweepTable
where
    F: Fn(f64, BarrierMethod) -> Result<f64> + Sync,
{
    let xs = spec.abscissae();
    let results: Vec<(Vec<f64>, Vec<String>)> = xs
        .par_iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(1 + spec.methods.len());
            let mut warnings = Vec::new();
            row.push(x);
            for &m in &spec.methods {
                match cell(x, m) {
                    Ok(v) if v.is_finite() => row.push(v),
                    Ok(v) => {
                        warnings.push(format!(
                            "{}={x}: {m}: non-finite value {v}",
                            spec.variable.column_name()
                        ));
                        row.push(f64::NAN);
                    }
                    Err(e) => {
                        warnings.push(format!("{}={x}: {m}: {e}", spec.variable.column_name()));
                        row.push(f64::NAN);
                    }
                }
            }
            (row, warnings)
        })
        .collect();
    let mut table = SweepTable::new(columns);
    for (row, warnings) in results {
        table.push_row(row);
        table.warnings.extend(warnings);
    }
    table
}

fn columns(spec: &SweepSpec, prefix: &str, suffix: &str) -> Vec<String> {
    std::iter::once(spec.variable.column_name().to_string())
        .chain(
            spec.methods
                .iter()
                .map(|m| format!("{prefix}{}{suffix}", m.short_name())),
        )
        .collect()
}

/// System and coupling at one abscissa of a barrier sweep.
pub fn barrier_point(spec: &SweepSpec, x: f64) -> (DiabaticSystem, CouplingModel) {
    let f = &spec.fixed;
    match spec.variable {
        SweepVariable::Dg0 => (f.sys.with_dg0(x), f.coupling.clone()),
        SweepVariable::CouplingScalar => (f.sys, f.coupling.with_v0(x)),
        SweepVariable::Lambda => (DiabaticSystem { lambda: x, ..f.sys }, f.coupling.clone()),
        SweepVariable::EtaF | SweepVariable::InvTemperature => (f.sys, f.coupling.clone()),
    }
}

/// One `Estar_<method>_eV` column per requested method.
pub fn barrier_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    if !matches!(
        spec.variable,
        SweepVariable::Dg0 | SweepVariable::CouplingScalar | SweepVariable::Lambda
    ) {
        return Err(Error::InvalidInput(format!(
            "barrier sweeps vary dG0, V or lambda, not {}",
            spec.variable.column_name()
        )));
    }
    Ok(run_sweep(spec, columns(spec, "Estar_", "_eV"), |x, m| {
        let (sys, c) = barrier_point(spec, x);
        barrier(&sys, &c, m).map(|r| r.e_star)
    }))
}

/// Rate (s⁻¹) for one method at the given electrode conditions, as used by
/// the Tafel and Arrhenius sweeps:
///
/// - `Marcus`: quadrature with the non-adiabatic prefactor;
/// - `ConstantShift`, `ExactAdiabat`: quadrature with the adiabatic prefactor;
/// - `EffectiveLambda`: closed form with `λ_eff(η_f)`.
pub fn method_rate(
    sys: &DiabaticSystem,
    coupling: &CouplingModel,
    cond: &ElectrodeConditions,
    method: BarrierMethod,
) -> Result<f64> {
    let numeric = |prefactor: PrefactorKind| {
        mhc_rate_numeric(&RateRequest {
            sys: *sys,
            coupling: coupling.clone(),
            cond: ElectrodeConditions { prefactor, ..*cond },
            barrier_method: method,
        })
    };
    match method {
        BarrierMethod::Marcus => numeric(PrefactorKind::NonAdiabatic),
        BarrierMethod::ConstantShift | BarrierMethod::ExactAdiabat => numeric(PrefactorKind::Adiabatic),
        BarrierMethod::EffectiveLambda => {
            let lambda_eff = effective_lambda_overpotential(sys.lambda, coupling, cond.eta_f)?;
            mhc_rate_closed_form(lambda_eff, cond)
        }
    }
}

/// Columns `log10k_<method>` of `log₁₀(k · 1 s)` against the overpotential.
pub fn tafel_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    if spec.variable != SweepVariable::EtaF {
        return Err(Error::InvalidInput("Tafel sweeps vary the overpotential".into()));
    }
    let f = &spec.fixed;
    Ok(run_sweep(spec, columns(spec, "log10k_", ""), |eta, m| {
        let cond = ElectrodeConditions { eta_f: eta, ..f.cond };
        log_rate(method_rate(&f.sys, &f.coupling, &cond, m)?).map(|l| l / std::f64::consts::LN_10)
    }))
}

/// Columns `lnk_<method>` of `ln(k · 1 s)` against `1/T`.
pub fn arrhenius_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    if spec.variable != SweepVariable::InvTemperature {
        return Err(Error::InvalidInput(
            "Arrhenius sweeps vary the inverse temperature".into(),
        ));
    }
    let f = &spec.fixed;
    Ok(run_sweep(spec, columns(spec, "lnk_", ""), |inv_t, m| {
        let cond = ElectrodeConditions {
            temperature: 1.0 / inv_t,
            ..f.cond
        };
        log_rate(method_rate(&f.sys, &f.coupling, &cond, m)?)
    }))
}

fn log_rate(k: f64) -> Result<f64> {
    if k > 0.0 {
        Ok(k.ln())
    } else {
        Err(Error::Domain(format!("rate {k} has no logarithm")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub lambda_eff: f64,
    /// Vertical offset added to the model, in decades.
    pub log10_scale: f64,
    /// Root-mean-square residual, in decades.
    pub rms_residual: f64,
    pub n_points: usize,
    pub converged: bool,
}

/// Search range for [`fit_lambda_eff`], eV.
pub const FIT_RANGE: (f64, f64) = (0.05, 10.0);
const FIT_GRID: usize = 200;

/// Least-squares fit of the closed-form adiabatic rate to `log₁₀ k` data.
///
/// The vertical offset is eliminated analytically (it is the mean residual);
/// `λ_eff` comes from a 200-point log-spaced scan of [`FIT_RANGE`] followed by
/// Brent refinement around the best grid point.
pub fn fit_lambda_eff(eta_f: &[f64], log10_k: &[f64], temperature: f64, rho: f64) -> Result<FitResult> {
    if eta_f.len() != log10_k.len() {
        return Err(Error::InvalidInput(format!(
            "overpotential and rate columns differ in length ({} vs {})",
            eta_f.len(),
            log10_k.len()
        )));
    }
    let n = eta_f.len();
    if n < 5 {
        return Err(Error::InvalidInput(format!("fit needs at least 5 points, got {n}")));
    }
    if eta_f.iter().chain(log10_k).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("fit data must be finite".into()));
    }
    let conds: Vec<ElectrodeConditions> = eta_f
        .iter()
        .map(|&eta| ElectrodeConditions::new(temperature, eta, rho, PrefactorKind::Adiabatic))
        .collect::<Result<_>>()?;

    // (sum of squared centred residuals, mean residual)
    let objective = |lambda_eff: f64| -> (f64, f64) {
        let mut residuals = Vec::with_capacity(n);
        for (c, &y) in conds.iter().zip(log10_k) {
            match mhc_rate_closed_form(lambda_eff, c) {
                Ok(k) if k > 0.0 => residuals.push(y - k.log10()),
                _ => return (f64::INFINITY, f64::NAN),
            }
        }
        let mean = residuals.iter().sum::<f64>() / n as f64;
        (residuals.iter().map(|r| (r - mean) * (r - mean)).sum(), mean)
    };

    let (lo, hi) = FIT_RANGE;
    let grid: Vec<f64> = (0..FIT_GRID)
        .map(|i| lo * (hi / lo).powf(i as f64 / (FIT_GRID - 1) as f64))
        .collect();
    let sse: Vec<f64> = grid.iter().map(|&l| objective(l).0).collect();
    let best = (0..FIT_GRID)
        .min_by(|&a, &b| sse[a].total_cmp(&sse[b]))
        .expect("grid is non-empty");

    let degenerate = log10_k.iter().all(|&y| y == log10_k[0]);
    let interior = best > 0 && best < FIT_GRID - 1 && sse[best].is_finite();
    let (lambda_eff, brent_ok) = if interior {
        let bracket = Bracket {
            lo: grid[best - 1],
            mid: grid[best],
            hi: grid[best + 1],
        };
        let r = minimize_1d(|l| objective(l).0, bracket, 1e-10);
        (r.x, r.converged)
    } else {
        (grid[best], false)
    };
    let (sse_min, offset) = objective(lambda_eff);
    Ok(FitResult {
        lambda_eff,
        log10_scale: offset,
        rms_residual: (sse_min / n as f64).sqrt(),
        n_points: n,
        converged: brent_ok && !degenerate && lambda_eff > 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

/// Ordinary least-squares line through `(x, y)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Domain(
            "linear fit needs two equally long columns of at least 2 points".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("linear fit needs at least two distinct abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LinearFit {
        intercept,
        slope,
        r_squared,
    })
}

/// Finite `(β, ln k)` pairs of an Arrhenius table column, `β = 1/k_BT` in eV⁻¹.
pub fn arrhenius_points(table: &SweepTable, column: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let x_name = SweepVariable::InvTemperature.column_name();
    let inv_t = table
        .column(x_name)
        .ok_or_else(|| Error::Domain(format!("table has no {x_name} column")))?;
    let ln_k = table
        .column(column)
        .ok_or_else(|| Error::Domain(format!("table has no {column} column")))?;
    Ok(inv_t
        .iter()
        .zip(&ln_k)
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .map(|(a, b)| (a / K_B, *b))
        .unzip())
}

/// Apparent activation energy `−d ln k / dβ` (eV) of one Arrhenius column.
pub fn effective_activation_energy(table: &SweepTable, column: &str) -> Result<f64> {
    let (beta, ln_k) = arrhenius_points(table, column)?;
    if beta.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 finite points in {column}, got {}",
            beta.len()
        )));
    }
    Ok(-linear_fit(&beta, &ln_k)?.slope + 0.0)
}

/// Standard parameter sets for the barrier, Tafel and Arrhenius tables.
pub mod presets {
    use super::*;

    pub const DG0_RANGE: (f64, f64) = (-1.0, 0.6);
    pub const COUPLING_RANGE: (f64, f64) = (0.0, 1.2);
    pub const LAMBDA_RANGE: (f64, f64) = (1.0, 8.0);
    pub const ETA_RANGE: (f64, f64) = (-1.0, 0.5);
    pub const INV_T_RANGE: (f64, f64) = (1.0 / 350.0, 1.0 / 250.0);

    fn fixed(lambda: f64, dg0: f64, coupling: CouplingModel, eta_f: f64) -> FixedParams {
        FixedParams {
            sys: DiabaticSystem { lambda, dg0 },
            coupling,
            cond: ElectrodeConditions {
                temperature: 300.0,
                eta_f,
                rho: 1.0,
                prefactor: PrefactorKind::Adiabatic,
            },
        }
    }

    fn spec(variable: SweepVariable, range: (f64, f64), n: usize, fixed: FixedParams) -> SweepSpec {
        SweepSpec {
            variable,
            from: range.0,
            to: range.1,
            n,
            fixed,
            methods: BarrierMethod::ALL.to_vec(),
        }
    }

    /// Barrier against ΔG° (λ = 4 eV) in steps of 0.05 eV.
    pub fn barrier_vs_dg0(coupling: CouplingModel) -> SweepSpec {
        spec(SweepVariable::Dg0, DG0_RANGE, 33, fixed(4.0, 0.0, coupling, 0.0))
    }

    /// Barrier against the coupling `V(0)` (λ = 4 eV) in steps of 0.05 eV.
    pub fn barrier_vs_coupling(dg0: f64, coupling: CouplingModel) -> SweepSpec {
        spec(
            SweepVariable::CouplingScalar,
            COUPLING_RANGE,
            25,
            fixed(4.0, dg0, coupling, 0.0),
        )
    }

    /// Barrier against λ (constant V = 0.4 eV) in steps of 0.25 eV.
    pub fn barrier_vs_lambda(dg0: f64) -> SweepSpec {
        spec(
            SweepVariable::Lambda,
            LAMBDA_RANGE,
            29,
            fixed(4.0, dg0, CouplingModel::constant(0.4), 0.0),
        )
    }

    /// Tafel table, λ = 4 eV, T = 300 K, 61 points.
    pub fn tafel(coupling: CouplingModel) -> SweepSpec {
        spec(SweepVariable::EtaF, ETA_RANGE, 61, fixed(4.0, 0.0, coupling, 0.0))
    }

    /// Arrhenius table at η_f = −0.3 V, λ = 4 eV, 21 points.
    pub fn arrhenius(coupling: CouplingModel) -> SweepSpec {
        spec(
            SweepVariable::InvTemperature,
            INV_T_RANGE,
            21,
            fixed(4.0, 0.0, coupling, -0.3),
        )
    }

    /// Names accepted by [`named`].
    pub const NAMES: [&str; 13] = [
        "dg0-const-1.0",
        "dg0-const-0.5",
        "coupling-dg0-+0.3",
        "coupling-dg0--0.5",
        "lambda-dg0-+0.3",
        "lambda-dg0--0.5",
        "dg0-linear-0.6-1.0",
        "coupling-linear-dg0--0.5",
        "tafel-const-0.5",
        "arrhenius-const-0.5",
        "tafel-linear-0.1-0.5",
        "tafel-linear-0.2-1.0",
        "tafel-linear-0.6-1.0",
    ];

    /// Looks up one of [`NAMES`].
    pub fn named(name: &str) -> Option<SweepSpec> {
        let c = CouplingModel::constant;
        let l = CouplingModel::linear;
        Some(match name {
            "dg0-const-1.0" => barrier_vs_dg0(c(1.0)),
            "dg0-const-0.5" => barrier_vs_dg0(c(0.5)),
            "coupling-dg0-+0.3" => barrier_vs_coupling(0.3, c(0.0)),
            "coupling-dg0--0.5" => barrier_vs_coupling(-0.5, c(0.0)),
            "lambda-dg0-+0.3" => barrier_vs_lambda(0.3),
            "lambda-dg0--0.5" => barrier_vs_lambda(-0.5),
            "dg0-linear-0.6-1.0" => barrier_vs_dg0(l(0.6, 1.0)),
            "coupling-linear-dg0--0.5" => barrier_vs_coupling(-0.5, l(0.0, 1.0)),
            "tafel-const-0.5" => tafel(c(0.5)),
            "arrhenius-const-0.5" => arrhenius(c(0.5)),
            "tafel-linear-0.1-0.5" => tafel(l(0.1, 0.5)),
            "tafel-linear-0.2-1.0" => tafel(l(0.2, 1.0)),
            "tafel-linear-0.6-1.0" => tafel(l(0.6, 1.0)),
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg0_const_1() -> SweepSpec {
        presets::named("dg0-const-1.0").unwrap()
    }

    #[test]
    fn barrier_sweep_row_at_zero_driving_force() {
        let mut spec = dg0_const_1();
        spec.from = -0.1;
        spec.to = 0.1;
        spec.n = 3;
        let t = barrier_sweep(&spec).unwrap();
        assert_eq!(
            t.columns,
            [
                "dG0_eV",
                "Estar_marcus_eV",
                "Estar_shift_eV",
                "Estar_eff_eV",
                "Estar_exact_eV"
            ]
        );
        let row = &t.rows[1];
        assert!(row[0].abs() < 1e-15);
        assert!((row[1] - 1.0).abs() < 1e-12);
        assert!(row[2].abs() < 1e-12);
        assert!((row[3] - 0.25).abs() < 1e-12);
        assert!((row[4] - 0.25).abs() < 1e-8);
    }

    #[test]
    fn coupling_sweep_starts_uncoupled() {
        let t = barrier_sweep(&presets::named("coupling-dg0-+0.3").unwrap()).unwrap();
        let row = &t.rows[0];
        assert_eq!(row[0], 0.0);
        for v in &row[1..] {
            assert!((v - 1.155625).abs() < 1e-8, "{row:?}");
        }
    }

    #[test]
    fn two_point_sweep_hits_endpoints() {
        let mut spec = dg0_const_1();
        spec.n = 2;
        spec.from = 0.4;
        spec.to = -0.7;
        let t = barrier_sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0][0], -0.7);
        assert_eq!(t.rows[1][0], 0.4);
    }

    #[test]
    fn singular_cells_are_empty_with_warning() {
        let t = barrier_sweep(&presets::named("lambda-dg0-+0.3").unwrap()).unwrap();
        // λ = 1 with V = 0.4 → λ_eff = 0.04 (fine); λ = 0.8 would be singular, so
        // build a sweep that crosses λ = 4V.
        assert!(t.warnings.is_empty());
        let mut spec = presets::named("lambda-dg0-+0.3").unwrap();
        spec.fixed.coupling = CouplingModel::constant(0.5);
        spec.from = 1.0;
        spec.to = 2.0;
        spec.n = 3;
        let t = barrier_sweep(&spec).unwrap();
        let eff = t.column_index("Estar_eff_eV").unwrap();
        assert!(t.rows[0][eff].is_nan());
        assert!(t.rows[1][eff].is_finite());
        assert_eq!(t.warnings.len(), 1);
        assert!(t.warnings[0].contains("non-positive"));
    }

    #[test]
    fn sweep_kind_checks() {
        assert!(tafel_sweep(&dg0_const_1()).is_err());
        assert!(arrhenius_sweep(&dg0_const_1()).is_err());
        assert!(barrier_sweep(&presets::tafel(CouplingModel::constant(0.5))).is_err());
        let mut bad = dg0_const_1();
        bad.n = 1;
        bad.methods.clear();
        let msg = barrier_sweep(&bad).unwrap_err().to_string();
        assert!(msg.contains("n >= 2") && msg.contains("method"), "{msg}");
    }

    #[test]
    fn tafel_eff_column_matches_closed_form() {
        let mut spec = presets::tafel(CouplingModel::linear(0.6, 1.0));
        spec.methods = vec![BarrierMethod::EffectiveLambda];
        spec.n = 7;
        let t = tafel_sweep(&spec).unwrap();
        for row in &t.rows {
            let eta = row[0];
            let le = effective_lambda_overpotential(4.0, &spec.fixed.coupling, eta).unwrap();
            let cond = ElectrodeConditions {
                eta_f: eta,
                ..spec.fixed.cond
            };
            let k = mhc_rate_closed_form(le, &cond).unwrap();
            assert!((row[1] - k.log10()).abs() <= 1e-12 * k.log10().abs().max(1.0));
        }
    }

    #[test]
    fn arrhenius_zero_coupling_marcus_is_empty() {
        let mut spec = presets::arrhenius(CouplingModel::constant(0.0));
        spec.methods = vec![BarrierMethod::Marcus];
        spec.n = 3;
        let t = arrhenius_sweep(&spec).unwrap();
        assert!(t.rows.iter().all(|r| r[1].is_nan()));
        assert_eq!(t.warnings.len(), 3);
    }

    #[test]
    fn arrhenius_slope_is_negative() {
        let mut spec = presets::arrhenius(CouplingModel::constant(0.5));
        spec.methods = vec![BarrierMethod::EffectiveLambda];
        spec.n = 2;
        spec.from = 1.0 / 350.0;
        spec.to = 1.0 / 250.0;
        let t = arrhenius_sweep(&spec).unwrap();
        assert!(t.rows[1][1] < t.rows[0][1]);
    }

    fn synthetic(lambda_eff: f64) -> (Vec<f64>, Vec<f64>) {
        let eta: Vec<f64> = (0..31).map(|i| -1.0 + 0.05 * i as f64).collect();
        let y = eta
            .iter()
            .map(|&e| {
                let c = ElectrodeConditions::new(300.0, e, 1.0, PrefactorKind::Adiabatic).unwrap();
                mhc_rate_closed_form(lambda_eff, &c).unwrap().log10()
            })
            .collect();
        (eta, y)
    }

    #[test]
    fn fit_recovers_generating_lambda() {
        let (eta, y) = synthetic(1.0);
        let r = fit_lambda_eff(&eta, &y, 300.0, 1.0).unwrap();
        assert!(r.converged);
        assert!((r.lambda_eff - 1.0).abs() < 1e-6, "{r:?}");
        assert!(r.log10_scale.abs() < 1e-6);
        assert!(r.rms_residual < 1e-6);
        assert_eq!(r.n_points, 31);
    }

    #[test]
    fn fit_input_checks() {
        assert!(fit_lambda_eff(&[0.0; 4], &[1.0; 4], 300.0, 1.0).is_err());
        assert!(fit_lambda_eff(&[0.0; 5], &[1.0; 6], 300.0, 1.0).is_err());
        assert!(fit_lambda_eff(&[0.0, 0.1, 0.2, 0.3, f64::NAN], &[1.0; 5], 300.0, 1.0).is_err());
        let eta = [-0.4, -0.3, -0.2, -0.1, 0.0];
        let r = fit_lambda_eff(&eta, &[2.0; 5], 300.0, 1.0).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn activation_energy_of_exact_line() {
        let mut t = SweepTable::new(vec!["invT_per_K".into(), "lnk_x".into(), "lnk_c".into()]);
        for i in 0..5 {
            let inv_t = 1.0 / 350.0 + i as f64 * 1e-4;
            let beta = inv_t / K_B;
            t.push_row(vec![inv_t, 3.0 - 0.8 * beta, 7.0]);
        }
        assert!((effective_activation_energy(&t, "lnk_x").unwrap() - 0.8).abs() < 1e-10);
        assert_eq!(effective_activation_energy(&t, "lnk_c").unwrap(), 0.0);
        assert!(effective_activation_energy(&t, "lnk_missing").is_err());
        t.rows.truncate(2);
        assert!(effective_activation_energy(&t, "lnk_x").is_err());
    }

    #[test]
    fn presets_are_valid() {
        for name in presets::NAMES {
            presets::named(name).unwrap().validate().unwrap();
        }
        assert!(presets::named("unknown").is_none());
        let xs = dg0_const_1().abscissae();
        assert!((xs[1] - xs[0] - 0.05).abs() < 1e-12);
    }
}
