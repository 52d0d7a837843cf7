//! The correction-free Weierstrass sum `wp_F(z) = sum_F (z - (m*mu+n))^(-2)`
//! (no convergence correction terms, origin included when the descriptor
//! carries it), its derivative, and the residual of the cubic equation
//! `E(X, Y) = Y^2 - 4X^3 + 12 g1 X^2 - (12 g1^2 - g2) X + (4 g1^3 - g1 g2 + g3)`
//! evaluated on `(wp, wp')`. Over nested boxes the residual decays as the
//! box grows; over quantum windows every ingredient decays individually.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::eisenstein::{g_triple, EisTriple, EisensteinError, Mode};
use crate::foliation::{slope_direction, FoliationError, FoliationPoint, Modulus, Theta};
use crate::numerics::{
    guard_bits, sum_fixed_order, BigComplex, BigReal, CValue, ExactComplex, NumericsError, QuadIrr,
    Rational,
};
use crate::schemes::{SchemeId, SchemesError, SetDescriptor};

#[derive(Debug, Error)]
pub enum WeierstrassError {
    #[error("evaluation point lies on a lattice point of the descriptor")]
    PoleEncountered,
    #[error("exact mode needs exact z, mu, and slope data")]
    ExactModeUnavailable,
    #[error("quantum coefficient source needs a window descriptor for the same slope")]
    TripleMismatch,
    #[error("slope-line parameter needs a quantum scheme")]
    SlopeParamNeedsQuantum,
    #[error(transparent)]
    Schemes(#[from] SchemesError),
    #[error(transparent)]
    Eisenstein(#[from] EisensteinError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A Weierstrass value: a pole marker exactly when `z` hits a lattice point
/// of the descriptor, a finite value otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum WpValue {
    Pole,
    Value(CValue),
}

impl WpValue {
    pub fn value(&self) -> Option<&CValue> {
        match self {
            WpValue::Pole => None,
            WpValue::Value(v) => Some(v),
        }
    }

    fn into_result(self) -> Result<CValue, WeierstrassError> {
        match self {
            WpValue::Pole => Err(WeierstrassError::PoleEncountered),
            WpValue::Value(v) => Ok(v),
        }
    }
}

fn wp_sum(
    z: &CValue,
    mu: &Modulus,
    d: &SetDescriptor,
    prec: usize,
    mode: Mode,
    exponent: i64,
) -> Result<WpValue, WeierstrassError> {
    let pairs = d.enumerate()?;
    match mode {
        Mode::Exact => {
            let mue = mu
                .as_exact()
                .ok_or(WeierstrassError::ExactModeUnavailable)?;
            let ze = z.as_exact().ok_or(WeierstrassError::ExactModeUnavailable)?;
            let mut acc = ExactComplex::zero();
            for (m, n) in &pairs {
                let w = ze.sub(
                    &mue.mul_int(m)
                        .add(&ExactComplex::from_bigints(n, &BigInt::zero()))?,
                )?;
                if w.is_zero() {
                    return Ok(WpValue::Pole);
                }
                acc = acc.add(&w.powi(exponent)?)?;
            }
            Ok(WpValue::Value(CValue::Exact(acc)))
        }
        Mode::Float => {
            let pg = prec + guard_bits(pairs.len());
            let muc = mu.to_complex(pg);
            let zc = z.to_complex(pg);
            let terms: Option<Vec<BigComplex>> = pairs
                .par_iter()
                .map(|(m, n)| {
                    let w = zc.sub(&muc.mul_bigint(m).add_bigint_real(n));
                    if w.is_zero() {
                        None
                    } else {
                        Some(w.pow_int(exponent).expect("nonzero difference"))
                    }
                })
                .collect();
            let terms = match terms {
                None => return Ok(WpValue::Pole),
                Some(t) => t,
            };
            let sum = sum_fixed_order(&terms)?;
            Ok(WpValue::Value(CValue::Float(sum.round_to(prec))))
        }
    }
}

/// `sum_F (z - (m*mu + n))^(-2)`; pole marker when `z` is a lattice point
/// of the descriptor.
pub fn wp_nc(
    z: &CValue,
    mu: &Modulus,
    d: &SetDescriptor,
    prec: usize,
    mode: Mode,
) -> Result<WpValue, WeierstrassError> {
    wp_sum(z, mu, d, prec, mode, -2)
}

/// `-2 sum_F (z - (m*mu + n))^(-3)`.
pub fn wp_nc_prime(
    z: &CValue,
    mu: &Modulus,
    d: &SetDescriptor,
    prec: usize,
    mode: Mode,
) -> Result<WpValue, WeierstrassError> {
    match wp_sum(z, mu, d, prec, mode, -3)? {
        WpValue::Pole => Ok(WpValue::Pole),
        WpValue::Value(v) => Ok(WpValue::Value(v.scale_rational(-2, 1, prec)?)),
    }
}

/// A joint evaluation of the sum and its derivative at one point; the pole
/// markers land exactly when `z` is `m*mu + n` for some pair of the
/// descriptor.
#[derive(Clone, Debug)]
pub struct WeierstrassEval {
    pub z: CValue,
    pub wp: WpValue,
    pub wp_prime: WpValue,
    pub descriptor: SetDescriptor,
    pub mu: Modulus,
}

impl WeierstrassEval {
    pub fn evaluate(
        z: &CValue,
        mu: &Modulus,
        d: &SetDescriptor,
        prec: usize,
        mode: Mode,
    ) -> Result<Self, WeierstrassError> {
        Ok(WeierstrassEval {
            z: z.clone(),
            wp: wp_nc(z, mu, d, prec, mode)?,
            wp_prime: wp_nc_prime(z, mu, d, prec, mode)?,
            descriptor: d.clone(),
            mu: mu.clone(),
        })
    }

    pub fn is_pole(&self) -> bool {
        matches!(self.wp, WpValue::Pole)
    }
}

/// `wp_(F + (m0, n0))(z + (m0*mu + n0)) - wp_F(z)`: translating the index
/// set and shifting the argument by the matching lattice vector changes
/// nothing. Mathematically zero; exact mode returns an exact zero, float
/// mode measures rounding only.
pub fn translation_identity_residual(
    z: &CValue,
    shift: (&BigInt, &BigInt),
    mu: &Modulus,
    d: &SetDescriptor,
    prec: usize,
    mode: Mode,
) -> Result<CValue, WeierstrassError> {
    let (m0, n0) = shift;
    let lattice_shift = match (mode, mu.as_exact()) {
        (Mode::Exact, Some(mue)) => CValue::Exact(
            mue.mul_int(m0)
                .add(&ExactComplex::from_bigints(n0, &BigInt::zero()))?,
        ),
        _ => {
            let pw = prec + 32;
            CValue::Float(mu.to_complex(pw).mul_bigint(m0).add_bigint_real(n0))
        }
    };
    let z_shifted = z.add(&lattice_shift, prec + 32)?;
    let translated = SetDescriptor::Translated((m0.clone(), n0.clone()), Box::new(d.clone()));
    let lhs = wp_nc(&z_shifted, mu, &translated, prec, mode)?.into_result()?;
    let rhs = wp_nc(z, mu, d, prec, mode)?.into_result()?;
    Ok(lhs.sub(&rhs, prec)?)
}

/// The cubic in normal position built from a coefficient triple; the
/// coefficients are always recomputed from the triple.
#[derive(Clone, Debug)]
pub struct WeierPoly {
    pub g1: CValue,
    pub g2: CValue,
    pub g3: CValue,
}

impl WeierPoly {
    pub fn from_triple(t: &EisTriple) -> Self {
        WeierPoly {
            g1: t.g1.value.clone(),
            g2: t.g2.value.clone(),
            g3: t.g3.value.clone(),
        }
    }

    /// `E(X, Y) = Y^2 - 4X^3 + 12 g1 X^2 - (12 g1^2 - g2) X
    ///            + (4 g1^3 - g1 g2 + g3)`.
    pub fn eval(&self, x: &CValue, y: &CValue, prec: usize) -> Result<CValue, NumericsError> {
        let p = prec;
        let x2 = x.mul(x, p)?;
        let x3 = x2.mul(x, p)?;
        let g1_2 = self.g1.mul(&self.g1, p)?;
        let g1_3 = g1_2.mul(&self.g1, p)?;
        let mut acc = y.mul(y, p)?;
        acc = acc.sub(&x3.scale_rational(4, 1, p)?, p)?;
        acc = acc.add(&self.g1.mul(&x2, p)?.scale_rational(12, 1, p)?, p)?;
        let x_coeff = g1_2.scale_rational(12, 1, p)?.sub(&self.g2, p)?;
        acc = acc.sub(&x_coeff.mul(x, p)?, p)?;
        let constant = g1_3
            .scale_rational(4, 1, p)?
            .sub(&self.g1.mul(&self.g2, p)?, p)?
            .add(&self.g3, p)?;
        acc = acc.add(&constant, p)?;
        Ok(acc)
    }
}

/// Where the coefficient triple of the cubic comes from.
#[derive(Clone, Debug)]
pub enum TripleSource {
    /// Coefficients summed over the same descriptor as the evaluation.
    Classical,
    /// Coefficients summed over the paired quantum window; the descriptor
    /// must be a window of this slope.
    Quantum(QuadIrr),
}

/// Evaluates the cubic residual `E(wp(z), wp'(z))` with coefficients from
/// the same descriptor.
pub fn weier_residual(
    z: &CValue,
    mu: &Modulus,
    d: &SetDescriptor,
    prec: usize,
    mode: Mode,
    source: &TripleSource,
) -> Result<CValue, WeierstrassError> {
    if let TripleSource::Quantum(theta) = source {
        match d {
            SetDescriptor::QuantumWindow { theta: t, .. } if t == theta => {}
            _ => return Err(WeierstrassError::TripleMismatch),
        }
    }
    let pw = prec + 32;
    let eval = WeierstrassEval::evaluate(z, mu, d, pw, mode)?;
    let x = eval.wp.into_result()?;
    let y = eval.wp_prime.into_result()?;
    let triple = g_triple(mu, d, pw, mode)?;
    let poly = WeierPoly::from_triple(&triple);
    let r = poly.eval(&x, &y, pw)?;
    Ok(match r {
        CValue::Float(f) => CValue::Float(f.round_to(prec)),
        exact => exact,
    })
}

/// How the evaluation point is specified in a residual sweep.
#[derive(Clone, Debug)]
pub enum ZSpec {
    Absolute(CValue),
    /// `z = t * (1 + theta*mu)`, on the slope line through the origin;
    /// quantum schemes only.
    SlopeParam(Rational),
}

#[derive(Clone, Debug)]
pub struct StageResidual {
    pub stage: u64,
    /// Box radius for classical schemes, window start for quantum ones.
    pub label: u64,
    pub residual: BigReal,
    /// Quantum only: residual divided by `max(|g2|^(3/2), |wp|^3)`, probing
    /// decay beyond the trivial all-terms-vanish route.
    pub normalized: Option<BigReal>,
}

#[derive(Clone, Debug)]
pub struct ResidualSeries {
    pub rows: Vec<StageResidual>,
    /// Classical only: least-squares slope of `log |residual|` against
    /// `log N`.
    pub fitted_exponent: Option<f64>,
}

/// Residual decay profile over the stages of a scheme.
pub fn residual_series(
    z: &ZSpec,
    mu: &Modulus,
    scheme: &SchemeId,
    stages: &[u64],
    prec: usize,
) -> Result<ResidualSeries, WeierstrassError> {
    let (source, z_value) = match scheme {
        SchemeId::ClassicalCone { .. } => {
            let zv = match z {
                ZSpec::Absolute(v) => v.clone(),
                ZSpec::SlopeParam(_) => return Err(WeierstrassError::SlopeParamNeedsQuantum),
            };
            (TripleSource::Classical, zv)
        }
        SchemeId::QuantumTheta { theta, .. } => {
            let zv = match z {
                ZSpec::Absolute(v) => v.clone(),
                ZSpec::SlopeParam(t) => {
                    let point = FoliationPoint::new(mu.clone(), Theta::Finite(theta.clone()));
                    let dir = slope_direction(&point, prec + 32)?;
                    let scale = CValue::Exact(ExactComplex::new(
                        QuadIrr::from_rational(t),
                        QuadIrr::zero(),
                    ));
                    dir.mul(&scale, prec + 32)?
                }
            };
            (TripleSource::Quantum(theta.clone()), zv)
        }
    };
    let mut rows = Vec::with_capacity(stages.len());
    for &s in stages {
        let d = scheme.stage(s)?;
        let r = weier_residual(&z_value, mu, &d, prec, Mode::Float, &source)?;
        let residual = r.abs_real(prec);
        let (label, normalized) = match scheme {
            SchemeId::ClassicalCone { radii } => (radii[s as usize], None),
            SchemeId::QuantumTheta { .. } => {
                let pw = prec + 32;
                let triple = g_triple(mu, &d, pw, Mode::Float)?;
                let g2_mag = triple.g2.value.abs_real(pw);
                let g2_scale = g2_mag.mul(&g2_mag.sqrt());
                let wp_mag = wp_nc(&z_value, mu, &d, pw, Mode::Float)?
                    .into_result()?
                    .abs_real(pw);
                let wp_scale = wp_mag.square().mul(&wp_mag);
                let denom = g2_scale.max(&wp_scale);
                let norm = if denom.is_zero() {
                    BigReal::zero(prec)
                } else {
                    residual.round_to(pw).div(&denom).round_to(prec)
                };
                (s, Some(norm))
            }
        };
        rows.push(StageResidual {
            stage: s,
            label,
            residual,
            normalized,
        });
    }
    let fitted_exponent = match scheme {
        SchemeId::ClassicalCone { .. } => fit_loglog_slope(&rows),
        SchemeId::QuantumTheta { .. } => None,
    };
    Ok(ResidualSeries {
        rows,
        fitted_exponent,
    })
}

fn fit_loglog_slope(rows: &[StageResidual]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.residual.is_zero())
        .map(|r| {
            (
                (r.label as f64).ln(),
                r.residual.log2_abs() * std::f64::consts::LN_2,
            )
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}
