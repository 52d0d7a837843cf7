//! Finite-stage automorphy: once the index set is transported along the
//! transpose, the weight factor matches the Moebius image exactly --
//! an identity, not a limit statement. Exact mode returns literal zeros;
//! float mode shows the rounding floor.
//!
//! ```sh
//! cargo run --example automorphy_exact
//! ```

use num_bigint::BigInt;
use qtj::eisenstein::{automorphy_residual, Mode};
use qtj::foliation::{Gl2Z, Modulus};
use qtj::numerics::{ExactComplex, QuadIrr};
use qtj::schemes::SetDescriptor;

fn main() {
    let mu = Modulus::exact(ExactComplex::new(QuadIrr::zero(), QuadIrr::from_int(2)))
        .expect("2i is a modulus");
    let d = SetDescriptor::Box {
        radius: 3,
        include_origin: true,
    };
    let prec = 192;

    let matrices = [
        ("identity", Gl2Z::identity()),
        ("T", Gl2Z::translation(&BigInt::from(1))),
        ("S", Gl2Z::inversion()),
        (
            "TST",
            Gl2Z::translation(&BigInt::from(1))
                .mul(&Gl2Z::inversion())
                .mul(&Gl2Z::translation(&BigInt::from(1))),
        ),
        ("det -1 swap", Gl2Z::half_plane_swap()),
        ("[[2,5],[1,3]]", Gl2Z::from_i64(2, 5, 1, 3).unwrap()),
    ];

    for k in [1i64, 2, 3] {
        println!("weight index k = {k}:");
        for (name, a) in &matrices {
            let exact = automorphy_residual(a, &mu, k, &d, prec, Mode::Exact).expect("exact");
            let float = automorphy_residual(a, &mu, k, &d, prec, Mode::Float).expect("float");
            let mag = float.abs_real(prec);
            println!(
                "  {name:14} det {:2}  exact residual zero: {}   float residual: {}",
                a.det(),
                exact.is_zero(),
                if mag.is_zero() {
                    "0".to_string()
                } else {
                    mag.to_decimal(3)
                },
            );
        }
    }
}
