//! Finite index-set descriptors for subsets of `Z^2` and the summation
//! schemes built from them. Nested boxes realize the classical exhaustion;
//! windows of convergent pairs realize the quantum one, whose members drift
//! away from every bounded region as the stage grows.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::dioph::{cf_expand, convergents, DiophError};
use crate::foliation::Gl2Z;
use crate::numerics::QuadIrr;

#[derive(Debug, Error)]
pub enum SchemesError {
    #[error("descriptor enumerates to the empty set")]
    EmptySet,
    #[error("stage {0} is not part of the scheme's stage sequence")]
    StageOutOfRange(u64),
    #[error("stage sequence must be strictly increasing")]
    StagesNotIncreasing,
    #[error("slope is rational; only {available} convergents exist, window needs {needed}")]
    WindowExhausted { available: usize, needed: usize },
    #[error(transparent)]
    Dioph(#[from] DiophError),
}

/// A finite subset of `Z^2` given by a construction rule. Enumeration is
/// duplicate-free and deterministically ordered (lexicographic on `(m, n)`).
#[derive(Clone, Debug, PartialEq)]
pub enum SetDescriptor {
    /// `{(m, n) : |m|, |n| <= radius}`, optionally without the origin.
    Box { radius: u64, include_origin: bool },
    /// Convergent pairs `(p_j, q_j)` of `theta` for `start <= j < start +
    /// len`, with `-(p_j, q_j)` included when `with_negation` is set, and
    /// depth-1 sums of adjacent convergents when `enriched` is set.
    QuantumWindow {
        theta: QuadIrr,
        start: usize,
        len: usize,
        with_negation: bool,
        enriched: bool,
    },
    /// An explicit list of pairs.
    Explicit(Vec<(BigInt, BigInt)>),
    /// Image of the inner descriptor under the column action of a matrix.
    Transformed(Gl2Z, Box<SetDescriptor>),
    /// Inner descriptor shifted by `(m0, n0)`.
    Translated((BigInt, BigInt), Box<SetDescriptor>),
}

impl SetDescriptor {
    pub fn window(theta: QuadIrr, start: usize, len: usize) -> Self {
        SetDescriptor::QuantumWindow {
            theta,
            start,
            len,
            with_negation: true,
            enriched: false,
        }
    }

    pub fn explicit_i64(pairs: &[(i64, i64)]) -> Self {
        SetDescriptor::Explicit(
            pairs
                .iter()
                .map(|(m, n)| (BigInt::from(*m), BigInt::from(*n)))
                .collect(),
        )
    }

    /// Materializes the set as a sorted, duplicate-free pair list.
    pub fn enumerate(&self) -> Result<Vec<(BigInt, BigInt)>, SchemesError> {
        let mut pairs = self.collect_raw()?;
        pairs.sort();
        pairs.dedup();
        Ok(pairs)
    }

    fn collect_raw(&self) -> Result<Vec<(BigInt, BigInt)>, SchemesError> {
        match self {
            SetDescriptor::Box {
                radius,
                include_origin,
            } => {
                let r = *radius as i64;
                let mut out = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
                for m in -r..=r {
                    for n in -r..=r {
                        if !include_origin && m == 0 && n == 0 {
                            continue;
                        }
                        out.push((BigInt::from(m), BigInt::from(n)));
                    }
                }
                Ok(out)
            }
            SetDescriptor::QuantumWindow {
                theta,
                start,
                len,
                with_negation,
                enriched,
            } => {
                let needed = start + len + if *enriched { 1 } else { 0 };
                let cf = cf_expand(theta, needed.max(1))?;
                if cf.available() < needed {
                    return Err(SchemesError::WindowExhausted {
                        available: cf.available(),
                        needed,
                    });
                }
                let conv = convergents(&cf, needed)?;
                let mut base: Vec<(BigInt, BigInt)> = conv[*start..start + len]
                    .iter()
                    .map(|p| (p.m.clone(), p.n.clone()))
                    .collect();
                if *enriched {
                    for j in *start..start + len {
                        base.push((&conv[j].m + &conv[j + 1].m, &conv[j].n + &conv[j + 1].n));
                    }
                }
                if *with_negation {
                    let neg: Vec<_> = base.iter().map(|(m, n)| (-m, -n)).collect();
                    base.extend(neg);
                }
                Ok(base)
            }
            SetDescriptor::Explicit(pairs) => Ok(pairs.clone()),
            SetDescriptor::Transformed(a, inner) => {
                let inner = inner.collect_raw()?;
                Ok(inner.iter().map(|(m, n)| a.apply_pair(m, n)).collect())
            }
            SetDescriptor::Translated((m0, n0), inner) => {
                let inner = inner.collect_raw()?;
                Ok(inner.iter().map(|(m, n)| (m + m0, n + n0)).collect())
            }
        }
    }

    /// Number of pairs in the enumeration.
    pub fn cardinality(&self) -> Result<usize, SchemesError> {
        Ok(self.enumerate()?.len())
    }

    /// Compact text form in the CLI set syntax.
    pub fn text_form(&self) -> String {
        match self {
            SetDescriptor::Box {
                radius,
                include_origin,
            } => {
                if *include_origin {
                    format!("box:{radius}")
                } else {
                    format!("box:{radius}:noorigin")
                }
            }
            SetDescriptor::QuantumWindow {
                start,
                len,
                with_negation,
                enriched,
                ..
            } => {
                let mut s = format!("qwin:{start}:{len}");
                if !with_negation {
                    s.push_str(":pos");
                }
                if *enriched {
                    s.push_str(":enriched");
                }
                s
            }
            SetDescriptor::Explicit(pairs) => {
                let body: Vec<String> = pairs.iter().map(|(m, n)| format!("{m},{n}")).collect();
                format!("explicit:{}", body.join(";"))
            }
            SetDescriptor::Transformed(a, inner) => {
                format!("T[{},{},{},{}]:{}", a.a, a.b, a.c, a.d, inner.text_form())
            }
            SetDescriptor::Translated((m0, n0), inner) => {
                format!("shift[{m0},{n0}]:{}", inner.text_form())
            }
        }
    }
}

/// Wraps a descriptor in the column action of `a`; the enumeration becomes
/// `{a.(m, n)}`, with cardinality preserved.
pub fn transform_set(a: &Gl2Z, d: &SetDescriptor) -> SetDescriptor {
    SetDescriptor::Transformed(a.clone(), Box::new(d.clone()))
}

/// Minimum of `|n|` over the non-origin pairs of the enumeration. Quantum
/// windows report the denominator of their first convergent, which grows
/// without bound along stages.
pub fn min_abs_n(d: &SetDescriptor) -> Result<BigInt, SchemesError> {
    let pairs = d.enumerate()?;
    pairs
        .iter()
        .filter(|(m, n)| !(m.is_zero() && n.is_zero()))
        .map(|(_, n)| {
            if n.sign() == num_bigint::Sign::Minus {
                -n
            } else {
                n.clone()
            }
        })
        .min()
        .ok_or(SchemesError::EmptySet)
}

/// A directed family of descriptors indexed by stage.
#[derive(Clone, Debug, PartialEq)]
pub enum SchemeId {
    /// Nested boxes `Box(radii[s])`; the radii sequence must strictly
    /// increase so stages are nested.
    ClassicalCone { radii: Vec<u64> },
    /// Convergent windows of fixed length; `stage(s)` is the window
    /// starting at index `s`, and the stage list must strictly increase.
    QuantumTheta {
        theta: QuadIrr,
        window_len: usize,
        stages: Vec<u64>,
        enriched: bool,
    },
}

impl SchemeId {
    pub fn classical(radii: Vec<u64>) -> Result<Self, SchemesError> {
        if !radii.windows(2).all(|w| w[0] < w[1]) || radii.is_empty() {
            return Err(SchemesError::StagesNotIncreasing);
        }
        Ok(SchemeId::ClassicalCone { radii })
    }

    pub fn quantum(
        theta: QuadIrr,
        window_len: usize,
        stages: Vec<u64>,
    ) -> Result<Self, SchemesError> {
        if !stages.windows(2).all(|w| w[0] < w[1]) || stages.is_empty() || window_len == 0 {
            return Err(SchemesError::StagesNotIncreasing);
        }
        Ok(SchemeId::QuantumTheta {
            theta,
            window_len,
            stages,
            enriched: false,
        })
    }

    pub fn stage_list(&self) -> Vec<u64> {
        match self {
            SchemeId::ClassicalCone { radii } => (0..radii.len() as u64).collect(),
            SchemeId::QuantumTheta { stages, .. } => stages.clone(),
        }
    }

    /// The `s`-th member of the directed family.
    pub fn stage(&self, s: u64) -> Result<SetDescriptor, SchemesError> {
        match self {
            SchemeId::ClassicalCone { radii } => {
                let r = radii
                    .get(s as usize)
                    .ok_or(SchemesError::StageOutOfRange(s))?;
                Ok(SetDescriptor::Box {
                    radius: *r,
                    include_origin: true,
                })
            }
            SchemeId::QuantumTheta {
                theta,
                window_len,
                stages,
                enriched,
            } => {
                if !stages.contains(&s) {
                    return Err(SchemesError::StageOutOfRange(s));
                }
                Ok(SetDescriptor::QuantumWindow {
                    theta: theta.clone(),
                    start: s as usize,
                    len: *window_len,
                    with_negation: true,
                    enriched: *enriched,
                })
            }
        }
    }
}
