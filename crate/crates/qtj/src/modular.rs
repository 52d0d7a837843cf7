//! Normal-form reduction of the cubic, the `c4`/`c6` invariants, and the
//! modular invariant `j` along both routes: extrapolated box sums for the
//! classical value, convergent-window sweeps for the quantum one. The key
//! algebraic fact, checked exactly in the tests, is that `g1` cancels:
//! `c4 = 12 g2` and `c6 = 216 g3` whatever `g1` is, so
//! `j = 12^3 g2^3 / (g2^3 - 27 g3^2)` in both worlds.

use num_bigint::BigInt;
use thiserror::Error;

use crate::dioph::{cf_expand, DiophError};
use crate::eisenstein::{classical_g, g_multiplier, partial_g, EisTriple, EisensteinError, Mode};
use crate::foliation::Modulus;
use crate::numerics::{BigComplex, BigReal, CValue, NumericsError, QuadIrr};
use crate::schemes::{min_abs_n, SchemesError, SetDescriptor};

#[derive(Debug, Error)]
pub enum ModularError {
    #[error("degenerate discriminant: c4^3 = c6^2")]
    DegenerateDiscriminant,
    #[error("quantum invariant needs an irrational slope")]
    RationalSlope,
    #[error("stage list must be strictly increasing and nonempty")]
    BadStages,
    #[error(transparent)]
    Eisenstein(#[from] EisensteinError),
    #[error(transparent)]
    Dioph(#[from] DiophError),
    #[error(transparent)]
    Schemes(#[from] SchemesError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Coefficients of the normal form `Y^2 - X^3 - a2 X^2 - a4 X - a6`,
/// derived from a coefficient triple by the substitution `Y -> 2y`.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub a2: CValue,
    pub a4: CValue,
    pub a6: CValue,
}

/// `a2 = -3 g1`, `a4 = 3 g1^2 - g2/4`, `a6 = -(g1^3 - g1 g2/4 + g3/4)`.
pub fn normal_form_from_values(
    g1: &CValue,
    g2: &CValue,
    g3: &CValue,
    prec: usize,
) -> Result<NormalForm, NumericsError> {
    let g1_2 = g1.mul(g1, prec)?;
    let g1_3 = g1_2.mul(g1, prec)?;
    let a2 = g1.scale_rational(-3, 1, prec)?;
    let a4 = g1_2
        .scale_rational(3, 1, prec)?
        .sub(&g2.scale_rational(1, 4, prec)?, prec)?;
    let a6 = g1_3
        .sub(&g1.mul(g2, prec)?.scale_rational(1, 4, prec)?, prec)?
        .add(&g3.scale_rational(1, 4, prec)?, prec)?
        .neg();
    Ok(NormalForm { a2, a4, a6 })
}

pub fn normal_form(t: &EisTriple, prec: usize) -> Result<NormalForm, NumericsError> {
    normal_form_from_values(&t.g1.value, &t.g2.value, &t.g3.value, prec)
}

/// The displayed invariant formulas, evaluated literally:
/// `c4 = (4a2)^2 - 24*(2a4)` and
/// `c6 = -(4a2)^3 + 36(4a2)(2a4) - 216(4a6)`.
/// For a normal form built from a triple these collapse to
/// `(12 g2, 216 g3)`.
pub fn c_invariants(nf: &NormalForm, prec: usize) -> Result<(CValue, CValue), NumericsError> {
    let b2 = nf.a2.scale_rational(4, 1, prec)?;
    let b4 = nf.a4.scale_rational(2, 1, prec)?;
    let b6 = nf.a6.scale_rational(4, 1, prec)?;
    let c4 = b2
        .mul(&b2, prec)?
        .sub(&b4.scale_rational(24, 1, prec)?, prec)?;
    let c6 = b2
        .mul(&b2, prec)?
        .mul(&b2, prec)?
        .neg()
        .add(&b2.mul(&b4, prec)?.scale_rational(36, 1, prec)?, prec)?
        .sub(&b6.scale_rational(216, 1, prec)?, prec)?;
    Ok((c4, c6))
}

/// `j = 12^3 c4^3 / (c4^3 - c6^2)`.
pub fn j_from_c(c4: &CValue, c6: &CValue, prec: usize) -> Result<CValue, ModularError> {
    let u = c4.powi(3, prec)?;
    let v = c6.powi(2, prec)?;
    let den = u.sub(&v, prec)?;
    if den.is_zero() {
        return Err(ModularError::DegenerateDiscriminant);
    }
    Ok(u.scale_rational(1728, 1, prec)?.div(&den, prec)?)
}

/// `j = 12^3 g2^3 / (g2^3 - 27 g3^2)`; identical to
/// `j_from_c(12 g2, 216 g3)` since `216^2 = 12^3 * 27`.
pub fn j_from_g(g2: &CValue, g3: &CValue, prec: usize) -> Result<CValue, ModularError> {
    let u = g2.powi(3, prec)?;
    let v = g3.powi(2, prec)?.scale_rational(27, 1, prec)?;
    let den = u.sub(&v, prec)?;
    if den.is_zero() {
        return Err(ModularError::DegenerateDiscriminant);
    }
    Ok(u.scale_rational(1728, 1, prec)?.div(&den, prec)?)
}

/// An extrapolated classical `j` value with propagated bounds.
#[derive(Clone, Debug)]
pub struct JClassical {
    pub j: BigComplex,
    /// First-order propagation of the box tail bounds through `j`.
    pub error_bound: BigReal,
    pub g2: BigComplex,
    pub g3: BigComplex,
    pub g2_bound: BigReal,
    pub g3_bound: BigReal,
    pub g2_boxes: Vec<(u64, BigComplex)>,
    pub g3_boxes: Vec<(u64, BigComplex)>,
    pub n_max: u64,
    pub order: usize,
    pub precision: usize,
}

/// Classical route: extrapolated `G_2`, `G_3` box limits assembled into
/// `j`.
pub fn j_classical(
    mu: &Modulus,
    n_max: u64,
    prec: usize,
    order: usize,
) -> Result<JClassical, ModularError> {
    let est2 = classical_g(mu, 2, n_max, prec, order)?;
    let est3 = classical_g(mu, 3, n_max, prec, order)?;
    let g2 = est2.estimate.mul_i64(g_multiplier(2));
    let g3 = est3.estimate.mul_i64(g_multiplier(3));
    let g2_bound = est2.error_bound.mul_i64(g_multiplier(2));
    let g3_bound = est3.error_bound.mul_i64(g_multiplier(3));
    let j =
        j_from_g(&CValue::Float(g2.clone()), &CValue::Float(g3.clone()), prec)?.to_complex(prec);
    // d j = -1728 * 3 g2^2 v / D^2 dg2 + 1728 * u * 54 g3 / D^2 dg3,
    // with u = g2^3, v = 27 g3^2, D = u - v
    let u = g2.pow_int(3)?;
    let v = g3.pow_int(2)?.mul_i64(27);
    let den = u.sub(&v);
    let den2 = den.abs2();
    let dj_dg2 = g2.abs2().mul(&v.abs()).mul_i64(3 * 1728).div(&den2);
    let dj_dg3 = u.abs().mul(&g3.abs()).mul_i64(54 * 1728).div(&den2);
    let error_bound = dj_dg2.mul(&g2_bound).add(&dj_dg3.mul(&g3_bound));
    Ok(JClassical {
        j,
        error_bound,
        g2,
        g3,
        g2_bound,
        g3_bound,
        g2_boxes: est2.box_values,
        g3_boxes: est3.box_values,
        n_max,
        order,
        precision: prec,
    })
}

/// One stage of a quantum `j` sweep.
#[derive(Clone, Debug)]
pub struct JStage {
    pub stage: u64,
    /// Denominator of the window's first convergent (`min |n|`).
    pub q_den: BigInt,
    pub j: Option<BigComplex>,
    pub degenerate: bool,
    /// `|Im j| / |j|`, the reality diagnostic.
    pub im_fraction: Option<BigReal>,
    /// Residue class of the stage modulo the continued-fraction period.
    pub class: usize,
}

/// Summary of the `j` values observed inside one period class, over the
/// later half of its stages.
#[derive(Clone, Debug)]
pub struct ClassStat {
    pub class: usize,
    pub members: usize,
    /// Max pairwise distance of the late `j` values.
    pub diameter: BigReal,
    pub median_re: BigReal,
    pub median_im: BigReal,
}

#[derive(Clone, Debug)]
pub struct JReport {
    pub stages: Vec<JStage>,
    /// `(preperiod, period)` of the slope's continued fraction.
    pub period: (usize, usize),
    pub window_len: usize,
    pub precision: usize,
    pub class_stats: Vec<ClassStat>,
}

/// Quantum route: per-stage `j` over convergent windows, grouped by the
/// residue class of the stage modulo the continued-fraction period.
/// Degenerate stages are flagged, not fatal.
pub fn j_quantum(
    mu: &Modulus,
    theta: &QuadIrr,
    stages: &[u64],
    window_len: usize,
    prec: usize,
) -> Result<JReport, ModularError> {
    if theta.is_rational() {
        return Err(ModularError::RationalSlope);
    }
    if stages.is_empty() || !stages.windows(2).all(|w| w[0] < w[1]) || window_len == 0 {
        return Err(ModularError::BadStages);
    }
    let cf = cf_expand(theta, 2)?;
    let period = cf.period.unwrap_or((0, 1));
    let period_len = period.1.max(1);
    let mut rows = Vec::with_capacity(stages.len());
    for &s in stages {
        let d = SetDescriptor::window(theta.clone(), s as usize, window_len);
        let q_den = min_abs_n(&d)?;
        let g2 = scaled_partial(mu, 2, &d, prec)?;
        let g3 = scaled_partial(mu, 3, &d, prec)?;
        let (j, degenerate) = match j_from_g(&g2, &g3, prec) {
            Ok(j) => (Some(j.to_complex(prec)), false),
            Err(ModularError::DegenerateDiscriminant) => (None, true),
            Err(e) => return Err(e),
        };
        let im_fraction = j.as_ref().and_then(|j| {
            let mag = j.abs();
            if mag.is_zero() {
                None
            } else {
                Some(j.im().abs().div(&mag))
            }
        });
        rows.push(JStage {
            stage: s,
            q_den,
            j,
            degenerate,
            im_fraction,
            class: (s as usize) % period_len,
        });
    }
    let class_stats = class_statistics(&rows, period_len, prec);
    Ok(JReport {
        stages: rows,
        period,
        window_len,
        precision: prec,
        class_stats,
    })
}

fn scaled_partial(
    mu: &Modulus,
    k: i64,
    d: &SetDescriptor,
    prec: usize,
) -> Result<CValue, ModularError> {
    let ps = partial_g(mu, k, d, prec, Mode::Float)?;
    Ok(ps.value.scale_rational(g_multiplier(k), 1, prec)?)
}

fn class_statistics(rows: &[JStage], period_len: usize, prec: usize) -> Vec<ClassStat> {
    let mut stats = Vec::new();
    for class in 0..period_len {
        let members: Vec<&JStage> = rows
            .iter()
            .filter(|r| r.class == class && r.j.is_some())
            .collect();
        if members.is_empty() {
            continue;
        }
        // judge the limit set from the later half of the class's stages
        let start = if members.len() >= 4 {
            members.len() / 2
        } else {
            0
        };
        let late: Vec<&BigComplex> = members[start..]
            .iter()
            .map(|r| r.j.as_ref().unwrap())
            .collect();
        let mut diameter = BigReal::zero(prec);
        for i in 0..late.len() {
            for j in i + 1..late.len() {
                diameter = diameter.max(&late[i].sub(late[j]).abs());
            }
        }
        let median = |xs: &mut Vec<BigReal>| -> BigReal {
            xs.sort_by(|a, b| a.cmp(b));
            xs[(xs.len() - 1) / 2].clone()
        };
        let mut res: Vec<BigReal> = late.iter().map(|j| j.re().clone()).collect();
        let mut ims: Vec<BigReal> = late.iter().map(|j| j.im().clone()).collect();
        stats.push(ClassStat {
            class,
            members: members.len(),
            diameter,
            median_re: median(&mut res),
            median_im: median(&mut ims),
        });
    }
    stats
}
