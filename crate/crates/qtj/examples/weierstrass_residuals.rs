//! Residuals of the cubic equation on the correction-free Weierstrass sum.
//! Over nested boxes the residual decays like a power of the radius; over
//! quantum windows every ingredient is already sinking, and the normalized
//! column probes what is left after dividing that trivial decay out.
//!
//! ```sh
//! cargo run --example weierstrass_residuals
//! ```

use num_bigint::BigInt;
use qtj::eisenstein::Mode;
use qtj::foliation::Modulus;
use qtj::numerics::QuadIrr;
use qtj::numerics::{CValue, ExactComplex, GaussianRational, Rational};
use qtj::schemes::SchemeId;
use qtj::schemes::SetDescriptor;
use qtj::weierstrass::{residual_series, translation_identity_residual, ZSpec};

fn main() {
    let prec = 192;
    let mu = Modulus::i();

    // the translation identity is exact at every finite stage
    let z = CValue::Exact(ExactComplex::from_gaussian(&GaussianRational::new(
        Rational::new(1.into(), 3.into()),
        Rational::new(1.into(), 7.into()),
    )));
    let r = translation_identity_residual(
        &z,
        (&BigInt::from(2), &BigInt::from(-1)),
        &mu,
        &SetDescriptor::Box {
            radius: 2,
            include_origin: true,
        },
        prec,
        Mode::Exact,
    )
    .expect("no pole");
    println!(
        "translation identity residual (exact mode): {}",
        if r.is_zero() { "0" } else { "?" }
    );
    println!();

    let z = CValue::Exact(ExactComplex::from_gaussian(&GaussianRational::new(
        Rational::new(31.into(), 100.into()),
        Rational::new(17.into(), 100.into()),
    )));
    let scheme = SchemeId::classical(vec![10, 20, 40, 80]).expect("radii increase");
    let series =
        residual_series(&ZSpec::Absolute(z), &mu, &scheme, &[0, 1, 2, 3], prec).expect("no pole");
    println!("classical residuals at z = 0.31 + 0.17i:");
    for row in &series.rows {
        println!(
            "  Box({:3}): |E(wp, wp')| = {}",
            row.label,
            row.residual.to_decimal(4)
        );
    }
    if let Some(slope) = series.fitted_exponent {
        println!("  fitted log-log slope: {slope:.2}");
    }
    println!();

    let scheme = SchemeId::quantum(QuadIrr::golden(), 3, (6..=14).collect()).expect("stages");
    let series = residual_series(
        &ZSpec::SlopeParam(Rational::new(1.into(), 3.into())),
        &mu,
        &scheme,
        &(6..=14).collect::<Vec<_>>(),
        prec,
    )
    .expect("no pole");
    println!("quantum residuals on the slope line z = (1/3)(1 + theta*mu), theta = golden ratio:");
    for row in &series.rows {
        println!(
            "  window at {:2}: raw {}   normalized {}",
            row.stage,
            row.residual.to_decimal(4),
            row.normalized
                .as_ref()
                .map(|n| n.to_decimal(4))
                .unwrap_or_default(),
        );
    }
}
