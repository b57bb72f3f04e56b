//! The two-level Marcus system: parabolic diabats, the electronic coupling
//! `V(q)`, and the adiabatic surfaces obtained by diagonalising the 2×2
//! Hamiltonian in the diabatic basis.
//!
//! Energies are in eV; the reaction coordinate `q` is dimensionless with the
//! reactant diabat minimum at `q = 0` and the product diabat minimum at `q = 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::table::SweepTable;

/// Default reaction-coordinate window. Both diabatic minima and, in the
/// normal regime, the diabatic crossing lie strictly inside it.
pub const Q_WINDOW: (f64, f64) = (-0.5, 1.5);

/// Symmetric reorganization energy `lambda` and driving force `dg0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiabaticSystem {
    pub lambda: f64,
    pub dg0: f64,
}

impl DiabaticSystem {
    pub fn new(lambda: f64, dg0: f64) -> Result<Self> {
        let sys = Self { lambda, dg0 };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidInput(format!(
                "reorganization energy must be positive and finite, got {}",
                self.lambda
            )));
        }
        if !self.dg0.is_finite() {
            return Err(Error::InvalidInput(format!(
                "driving force must be finite, got {}",
                self.dg0
            )));
        }
        Ok(())
    }

    /// Same reorganization energy, different driving force.
    pub fn with_dg0(&self, dg0: f64) -> Self {
        Self { dg0, ..*self }
    }
}

/// Electronic coupling as a function of the reaction coordinate.
///
/// Only `V(q)²` enters the adiabatic energies, so the sign of the coupling is
/// physically irrelevant there; it does matter for `Linear` models whose
/// value crosses zero inside the window, which is why signed values are kept.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingModel {
    /// Condon approximation: `V(q) = v`.
    Constant { v: f64 },
    /// `V(q) = v0 + q (v1 - v0)`.
    Linear { v0: f64, v1: f64 },
    /// `V(q) = Σ coeffs[k] q^k`.
    Polynomial { coeffs: Vec<f64> },
}

impl CouplingModel {
    pub fn constant(v: f64) -> Self {
        Self::Constant { v }
    }

    pub fn linear(v0: f64, v1: f64) -> Self {
        Self::Linear { v0, v1 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Self::Constant { v } => v.is_finite(),
            Self::Linear { v0, v1 } => v0.is_finite() && v1.is_finite(),
            Self::Polynomial { coeffs } => !coeffs.is_empty() && coeffs.iter().all(|c| c.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "coupling coefficients must be finite and non-empty: {self}"
            )))
        }
    }

    pub fn eval(&self, q: f64) -> f64 {
        match self {
            Self::Constant { v } => *v,
            Self::Linear { v0, v1 } => v0 + q * (v1 - v0),
            Self::Polynomial { coeffs } => horner(coeffs, q),
        }
    }

    /// Ascending-power coefficients. Evaluating the result with [`Self::eval`]
    /// reproduces the original model exactly.
    pub fn to_polynomial(&self) -> CouplingModel {
        let coeffs = match self {
            Self::Constant { v } => vec![*v],
            Self::Linear { v0, v1 } => vec![*v0, v1 - v0],
            Self::Polynomial { coeffs } => coeffs.clone(),
        };
        Self::Polynomial { coeffs }
    }

    /// `max |V(q)|` over `q ∈ [0, 1]`; closed form up to degree two, a
    /// 10001-point grid above that.
    pub fn max_abs_on_unit(&self) -> f64 {
        let Self::Polynomial { coeffs } = self.to_polynomial() else {
            unreachable!()
        };
        let degree = coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
        let at = |q: f64| horner(&coeffs, q).abs();
        match degree {
            0 | 1 => at(0.0).max(at(1.0)),
            2 => {
                let vertex = -coeffs[1] / (2.0 * coeffs[2]);
                let mut m = at(0.0).max(at(1.0));
                if (0.0..=1.0).contains(&vertex) {
                    m = m.max(at(vertex));
                }
                m
            }
            _ => (0..=10_000).map(|i| at(i as f64 / 10_000.0)).fold(0.0, f64::max),
        }
    }

    /// The coupling model with `V(0)` replaced by `v0`: sets a constant,
    /// the left end of a linear model, or the constant term of a polynomial.
    pub fn with_v0(&self, v0: f64) -> Self {
        match self {
            Self::Constant { .. } => Self::Constant { v: v0 },
            Self::Linear { v1, .. } => Self::Linear { v0, v1: *v1 },
            Self::Polynomial { coeffs } => {
                let mut c = coeffs.clone();
                c[0] = v0;
                Self::Polynomial { coeffs: c }
            }
        }
    }
}

fn horner(coeffs: &[f64], q: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * q + c)
}

impl fmt::Display for CouplingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant { v } => write!(f, "const:{v}"),
            Self::Linear { v0, v1 } => write!(f, "linear:{v0},{v1}"),
            Self::Polynomial { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

/// Parses `const:V`, `linear:V0,V1` or `poly:c0,c1,...`.
impl FromStr for CouplingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidInput(format!(
                "malformed coupling spec {s:?}; expected const:V, linear:V0,V1 or poly:c0,c1,..."
            ))
        };
        let (kind, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let model = match (kind.trim(), nums.as_slice()) {
            ("const", [v]) => Self::Constant { v: *v },
            ("linear", [v0, v1]) => Self::Linear { v0: *v0, v1: *v1 },
            ("poly", cs) if !cs.is_empty() => Self::Polynomial { coeffs: cs.to_vec() },
            _ => return Err(bad()),
        };
        model.validate().map_err(|_| bad())?;
        Ok(model)
    }
}

/// One point of the diabatic and adiabatic surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub q: f64,
    pub e_a: f64,
    pub e_b: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub v: f64,
}

/// Reactant diabat `λ q²`.
pub fn diabat_a(sys: &DiabaticSystem, q: f64) -> f64 {
    sys.lambda * q * q
}

/// Product diabat `λ (1 - q)² + ΔG°`.
pub fn diabat_b(sys: &DiabaticSystem, q: f64) -> f64 {
    let p = 1.0 - q;
    sys.lambda * p * p + sys.dg0
}

pub fn coupling_eval(c: &CouplingModel, q: f64) -> f64 {
    c.eval(q)
}

pub fn coupling_max(c: &CouplingModel) -> f64 {
    c.max_abs_on_unit()
}

/// Eigenvalues of the diabatic-basis Hamiltonian at `q`.
pub fn adiabats(sys: &DiabaticSystem, c: &CouplingModel, q: f64) -> SurfaceSample {
    let e_a = diabat_a(sys, q);
    let e_b = diabat_b(sys, q);
    let v = c.eval(q);
    let mean = 0.5 * (e_a + e_b);
    let half_gap = 0.5 * (e_a - e_b).hypot(2.0 * v);
    SurfaceSample {
        q,
        e_a,
        e_b,
        e_minus: mean - half_gap,
        e_plus: mean + half_gap,
        v,
    }
}

/// Ground adiabat `E₋(q)` alone.
pub fn lower_adiabat(sys: &DiabaticSystem, c: &CouplingModel, q: f64) -> f64 {
    adiabats(sys, c, q).e_minus
}

pub const SURFACE_COLUMNS: [&str; 6] = ["q", "E_a", "E_b", "E_minus", "E_plus", "V"];

/// `n` uniformly spaced samples over `[q_lo, q_hi]`, both ends included.
pub fn surface_table(sys: &DiabaticSystem, c: &CouplingModel, q_lo: f64, q_hi: f64, n: usize) -> Result<SweepTable> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("surface table needs n >= 2, got {n}")));
    }
    if !(q_lo < q_hi) {
        return Err(Error::InvalidInput(format!(
            "surface window requires q_lo < q_hi, got [{q_lo}, {q_hi}]"
        )));
    }
    sys.validate()?;
    c.validate()?;
    let mut t = SweepTable::new(SURFACE_COLUMNS.iter().map(|s| s.to_string()).collect());
    for i in 0..n {
        let q = if i == n - 1 {
            q_hi
        } else {
            q_lo + (q_hi - q_lo) * i as f64 / (n - 1) as f64
        };
        let s = adiabats(sys, c, q);
        t.push_row(vec![s.q, s.e_a, s.e_b, s.e_minus, s.e_plus, s.v]);
    }
    Ok(t)
}
