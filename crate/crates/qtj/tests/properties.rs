//! Property tests for the module invariants: exact field laws, canonical
//! forms, group actions, and decay envelopes.

use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;

use qtj::dioph::{cf_expand, convergents, group_combination, transform_pair, DAPair};
use qtj::eisenstein::{classical_g, partial_g, Mode};
use qtj::foliation::{act, slope_direction, FoliationPoint, Gl2Z, Modulus, Theta};
use qtj::modular::j_classical;
use qtj::numerics::{
    embed_exact, BigComplex, BigReal, ExactComplex, ExactValue, GaussianRational, QuadIrr, Rational,
};
use qtj::schemes::{transform_set, SetDescriptor};
use qtj::weierstrass::wp_nc;

fn small_quad() -> impl Strategy<Value = QuadIrr> {
    (
        -20i64..=20,
        -20i64..=20,
        prop_oneof![1i64..=9, (-9i64..=-1)],
        prop_oneof![Just(1u64), Just(2), Just(3), Just(5), Just(7), Just(12)],
    )
        .prop_map(|(a, b, c, d)| QuadIrr::new(a.into(), b.into(), c.into(), d).unwrap())
}

fn small_gaussian() -> impl Strategy<Value = GaussianRational> {
    (-20i64..=20, 1i64..=9, -20i64..=20, 1i64..=9).prop_map(|(pn, pd, qn, qd)| {
        GaussianRational::new(
            Rational::new(pn.into(), pd.into()),
            Rational::new(qn.into(), qd.into()),
        )
    })
}

fn unimodular() -> impl Strategy<Value = Gl2Z> {
    // T^a S T^b S T^c hits plenty of GL(2, Z); mix in a determinant flip
    (-4i64..=4, -4i64..=4, -4i64..=4, any::<bool>()).prop_map(|(a, b, c, flip)| {
        let t = |k: i64| Gl2Z::translation(&BigInt::from(k));
        let s = Gl2Z::inversion();
        let m = t(a).mul(&s).mul(&t(b)).mul(&s).mul(&t(c));
        if flip {
            m.mul(&Gl2Z::half_plane_swap())
        } else {
            m
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quad_mul_is_associative_and_invertible(
        x in small_quad(), y in small_quad(), z in small_quad()
    ) {
        // shared radicand so every product exists
        let fix = |q: &QuadIrr| {
            let (a, b, c, _) = q.coefficients();
            QuadIrr::new(a.clone(), b.clone(), c.clone(), 5).unwrap()
        };
        let (x, y, z) = (fix(&x), fix(&y), fix(&z));
        let lhs = x.checked_mul(&y).unwrap().checked_mul(&z).unwrap();
        let rhs = x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        if !x.is_zero() {
            prop_assert_eq!(x.checked_mul(&x.inv().unwrap()).unwrap(), QuadIrr::one());
        }
    }

    #[test]
    fn quad_canonicalization_decides_equality(
        x in small_quad(), k in 1i64..=7, s in 1u64..=4
    ) {
        // the same number written with scaled coefficients and a non-squarefree
        // radicand canonicalizes identically
        let (a, b, c, d) = x.coefficients();
        let rebuilt = QuadIrr::new(
            a * k * s as i64,
            b * k,
            c * k * s as i64,
            d * s.pow(2),
        ).unwrap();
        // rebuilt = (k s a + k b sqrt(d s^2)) / (k s c) = x
        prop_assert_eq!(rebuilt, x);
    }

    #[test]
    fn gaussian_field_laws(x in small_gaussian(), y in small_gaussian(), z in small_gaussian()) {
        let lhs = x.mul(&y).mul(&z);
        let rhs = x.mul(&y.mul(&z));
        prop_assert_eq!(lhs, rhs);
        if !x.is_zero() {
            prop_assert_eq!(x.mul(&x.inv().unwrap()), GaussianRational::one());
        }
        prop_assert_eq!(x.add(&y).mul(&z), x.mul(&z).add(&y.mul(&z)));
    }

    #[test]
    fn embedding_is_monotone(x in small_quad(), y in small_quad()) {
        let fix = |q: &QuadIrr| {
            let (a, b, c, _) = q.coefficients();
            QuadIrr::new(a.clone(), b.clone(), c.clone(), 2).unwrap()
        };
        let (x, y) = (fix(&x), fix(&y));
        let cmp_exact = x.checked_cmp(&y).unwrap();
        if cmp_exact != Ordering::Equal {
            let xe = x.to_real(128);
            let ye = y.to_real(128);
            // distinct quadratic values at these heights are far beyond one ulp apart
            prop_assert_eq!(xe.cmp(&ye), cmp_exact);
        }
    }

    #[test]
    fn pair_error_is_additive(coeffs in proptest::collection::vec(-6i64..=6, 1..5)) {
        let phi = QuadIrr::golden();
        let cf = cf_expand(&phi, coeffs.len() + 2).unwrap();
        let pairs = convergents(&cf, coeffs.len()).unwrap();
        let coeffs_big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let combo = group_combination(&pairs, &coeffs_big, &phi, false).unwrap();
        let mut expected = QuadIrr::zero();
        for (p, c) in pairs.iter().zip(&coeffs_big) {
            let e = p.err.as_exact().unwrap().mul_int(c);
            expected = expected.checked_add(&e).unwrap();
        }
        prop_assert_eq!(combo.err.as_exact().unwrap().clone(), expected);
    }

    #[test]
    fn transform_pair_round_trips(a in unimodular(), idx in 0usize..8) {
        let phi = QuadIrr::golden();
        let cf = cf_expand(&phi, 12).unwrap();
        let pairs = convergents(&cf, 10).unwrap();
        let p: &DAPair = &pairs[idx];
        let image_theta = match a.moebius_quad(&phi) {
            Ok(t) => t,
            Err(_) => return Ok(()), // pole: only possible for rational slopes
        };
        let t = transform_pair(&a, p, &phi).unwrap();
        let back = transform_pair(&a.inverse(), &t, &image_theta).unwrap();
        prop_assert_eq!(&back, p);
    }

    #[test]
    fn moduli_action_composes(a in unimodular(), b in unimodular()) {
        let mu = Modulus::exact(ExactComplex::new(
            QuadIrr::new(1.into(), 0.into(), 3.into(), 1).unwrap(),
            QuadIrr::new(2.into(), 0.into(), 1.into(), 1).unwrap(),
        )).unwrap();
        let p = FoliationPoint::new(mu, Theta::Finite(QuadIrr::golden()));
        let lhs = act(&a, &act(&b, &p).unwrap()).unwrap();
        let rhs = act(&a.mul(&b), &p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn slope_direction_is_equivariant(a in unimodular()) {
        // (a - c mu') * (1 + theta mu) is a real multiple of 1 + theta' mu'
        let mu = Modulus::exact(ExactComplex::new(
            QuadIrr::new(1.into(), 0.into(), 2.into(), 1).unwrap(),
            QuadIrr::one(),
        )).unwrap();
        let p = FoliationPoint::new(mu, Theta::Finite(QuadIrr::golden()));
        let v = match slope_direction(&p, 64).unwrap() {
            qtj::numerics::CValue::Exact(e) => e,
            _ => unreachable!("exact point"),
        };
        let q = act(&a, &p).unwrap();
        if q.theta == Theta::Infinity {
            return Ok(());
        }
        let w = match slope_direction(&q, 64).unwrap() {
            qtj::numerics::CValue::Exact(e) => e,
            _ => unreachable!("exact point"),
        };
        let mu_image = q.modulus.as_exact().unwrap();
        let lambda = ExactComplex::from_bigints(&a.a, &BigInt::from(0))
            .sub(&mu_image.mul_int(&a.c)).unwrap();
        let u = lambda.mul(&v).unwrap();
        // cross product Im(conj(w) * u) vanishes exactly
        let cross = u.im.checked_mul(&w.re).unwrap()
            .checked_sub(&u.re.checked_mul(&w.im).unwrap()).unwrap();
        prop_assert!(cross.is_zero());
    }

    #[test]
    fn transformed_sets_enumerate_bijectively(a in unimodular(), r in 1u64..=3) {
        let d = SetDescriptor::Box { radius: r, include_origin: true };
        let img = transform_set(&a, &d).enumerate().unwrap();
        prop_assert_eq!(img.len(), d.enumerate().unwrap().len());
        let inv = a.inverse();
        let mut back: Vec<_> = img.iter().map(|(m, n)| inv.apply_pair(m, n)).collect();
        back.sort();
        prop_assert_eq!(back, d.enumerate().unwrap());
    }
}

// ------------------------------------------------------- derived oracles

/// Interval square root at 256 bits brackets the golden ratio embedding.
#[test]
fn golden_ratio_embedding_matches_interval_sqrt() {
    use num_integer::Roots;
    let scale: BigInt = BigInt::from(1) << 256usize;
    let five_scaled: BigInt = BigInt::from(5) * (&scale * &scale);
    let lo_root = Roots::sqrt(&five_scaled);
    let hi_root = &lo_root + 1;
    // lo^2 <= 5 * 2^512 < hi^2
    assert!(&lo_root * &lo_root <= five_scaled);
    assert!(&hi_root * &hi_root > five_scaled);
    let one = Rational::new(BigInt::from(1), BigInt::from(1));
    let two = Rational::new(2.into(), 1.into());
    let lo = (one.clone() + Rational::new(lo_root, scale.clone())) / two.clone();
    let hi = (one + Rational::new(hi_root, scale)) / two;
    let v = embed_exact(&ExactValue::Quad(QuadIrr::golden()), 128)
        .unwrap()
        .re()
        .to_rational();
    // |v - phi| <= 2^-127 relative, and phi is inside [lo, hi]
    let slack = Rational::new(1.into(), BigInt::from(1) << 120);
    assert!(
        v >= lo.clone() - slack.clone(),
        "embedding below the interval"
    );
    assert!(v <= hi + slack, "embedding above the interval");
    assert!(lo > Rational::new(161.into(), 100.into()));
}

/// Quantum windows obey the explicit decay envelope
/// `|G_k| <= 4.4 q_s^(-2k) |1 + phi i|^(-2k)` for stages `s >= 8`.
#[test]
fn quantum_decay_envelope() {
    let prec = 192;
    let phi = QuadIrr::golden();
    let cf = cf_expand(&phi, 20).unwrap();
    let conv = convergents(&cf, 20).unwrap();
    let dir2 = 1.0 + phi.to_real(64).to_f64().powi(2); // |1 + phi i|^2
    for k in [1i64, 2] {
        for s in 8u64..=16 {
            let d = SetDescriptor::window(phi.clone(), s as usize, 4);
            let g = partial_g(&Modulus::i(), k, &d, prec, Mode::Float).unwrap();
            let mag = g.value.abs_real(prec).to_f64();
            let q_s = i64::try_from(&conv[s as usize].n).unwrap() as f64;
            let bound = 4.4 * q_s.powi(-2 * k as i32) * dir2.powi(-(k as i32));
            assert!(mag <= bound, "k={k} s={s}: {mag} > {bound}");
        }
    }
}

/// The correction-free sum itself decays on the slope line: stage 12 of the
/// golden window pushes `|wp|` below 1e-4.
#[test]
fn quantum_wp_values_decay() {
    let prec = 160;
    let phi = QuadIrr::golden();
    let dir = ExactComplex::new(QuadIrr::one(), phi.clone());
    let z = qtj::numerics::CValue::Exact(dir.scale_rational(1, 3).unwrap());
    let d = SetDescriptor::window(phi, 12, 4);
    let wp = wp_nc(&z, &Modulus::i(), &d, prec, Mode::Float).unwrap();
    let mag = wp.value().unwrap().abs_real(prec).to_f64();
    assert!(mag < 1e-4, "|wp| = {mag}");
}

/// Extrapolated classical sums inherit automorphy within combined bounds.
#[test]
fn classical_limits_are_automorphic() {
    let prec = 192;
    let mu = Modulus::exact(ExactComplex::new(QuadIrr::zero(), QuadIrr::from_int(2))).unwrap();
    // A = S: (c mu + d)^(-4) G_2(-1/mu) should match G_2(mu)
    let s = Gl2Z::inversion();
    let image = mu.moebius(&s).unwrap();
    let est = classical_g(&mu, 2, 64, prec, 2).unwrap();
    let est_img = classical_g(&image, 2, 64, prec, 2).unwrap();
    let factor = mu.to_complex(prec).pow_int(-4).unwrap();
    let lhs = factor.mul(&est_img.estimate);
    let diff = lhs.sub(&est.estimate).abs();
    let combined = est.error_bound.add(&est_img.error_bound.mul(&factor.abs()));
    assert!(
        diff.cmp(&combined) != Ordering::Greater,
        "difference {} beyond combined bound {}",
        diff,
        combined
    );
}

/// Full modular invariance of the classical j limit for a few matrices.
#[test]
fn j_classical_is_modular_invariant() {
    let prec = 192;
    let mu = Modulus::exact(ExactComplex::new(QuadIrr::zero(), QuadIrr::from_int(2))).unwrap();
    let j_base = j_classical(&mu, 64, prec, 2).unwrap();
    for a in [
        Gl2Z::translation(&BigInt::from(1)),
        Gl2Z::inversion(),
        Gl2Z::from_i64(2, 1, 1, 1).unwrap(),
    ] {
        let image = mu.moebius(&a).unwrap();
        let j_img = j_classical(&image, 64, prec, 2).unwrap();
        let diff = j_img.j.sub(&j_base.j).abs();
        let combined = j_base.error_bound.add(&j_img.error_bound);
        assert!(
            diff.cmp(&combined) != Ordering::Greater,
            "matrix {a}: |j(A mu) - j(mu)| = {} beyond {}",
            diff,
            combined
        );
    }
}

/// Exact sums over a non-Gaussian modulus, pinned against values computed
/// with an independent multiprecision library.
#[test]
fn exact_rho_box_sums_match_frozen_oracle() {
    use qtj::numerics::parse_decimal;
    let prec = 256;
    let rho = Modulus::exact(ExactComplex::new(
        QuadIrr::new(1.into(), 0.into(), 2.into(), 1).unwrap(),
        QuadIrr::new(0.into(), 1.into(), 2.into(), 3).unwrap(),
    ))
    .unwrap();
    let d = SetDescriptor::Box { radius: 3, include_origin: true };
    let tol = BigReal::from_rational(
        &Rational::new(1.into(), num_traits::pow(BigInt::from(10), 55)),
        prec,
    );
    let close = |got: &BigReal, want: &str| {
        let w = BigReal::from_rational(&parse_decimal(want).unwrap(), prec);
        got.sub(&w).abs().cmp(&tol) == Ordering::Less
    };
    let s2 = partial_g(&rho, 2, &d, prec, Mode::Exact).unwrap();
    let v2 = s2.value.to_complex(prec);
    assert!(close(v2.re(), "-1.83927165633379481884538593788780873331345255434323063676675e-2"));
    assert!(close(v2.im(), "-3.1857119576914958592704821290759257879682433598311771431308e-2"));
    let s3 = partial_g(&rho, 3, &d, prec, Mode::Exact).unwrap();
    let v3 = s3.value.to_complex(prec);
    assert!(close(v3.re(), "5.86367325678492877340919239871416630411334934806501407850336"));
    assert!(v3.im().is_zero() || v3.im().log2_abs() < -180.0);
}

/// Replaying an operation sequence at the same precision is bit-identical.
#[test]
fn bigcomplex_replay_is_bit_identical() {
    let run = || {
        let mut acc = BigComplex::from_i64(1, 1, 192);
        for i in 1..200i64 {
            let t = BigComplex::from_i64(i, -i, 192).recip();
            acc = acc
                .mul(&t)
                .add(&BigComplex::from_real(BigReal::from_i64(i, 192).sqrt()));
        }
        acc.bit_pattern()
    };
    assert_eq!(run(), run());
}
