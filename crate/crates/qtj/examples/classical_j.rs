//! The classical modular invariant from extrapolated box sums: 1728 at the
//! square lattice, 0 at the hexagonal one, and 66^3 = 287496 at mu = 2i.
//!
//! ```sh
//! cargo run --release --example classical_j
//! ```

use qtj::foliation::Modulus;
use qtj::modular::j_classical;
use qtj::numerics::{ExactComplex, QuadIrr};

fn main() {
    let prec = 256;
    let cases = [
        ("i            ", Modulus::i(), 50, 2),
        (
            "(1+i sqrt3)/2",
            Modulus::exact(ExactComplex::new(
                QuadIrr::new(1.into(), 0.into(), 2.into(), 1).unwrap(),
                QuadIrr::new(0.into(), 1.into(), 2.into(), 3).unwrap(),
            ))
            .unwrap(),
            100,
            2,
        ),
        (
            "2i           ",
            Modulus::exact(ExactComplex::new(QuadIrr::zero(), QuadIrr::from_int(2))).unwrap(),
            200,
            3,
        ),
    ];
    for (name, mu, n_max, order) in cases {
        let jc = j_classical(&mu, n_max, prec, order).expect("classical j");
        println!(
            "mu = {name}  Box({n_max}), order {order}: j = {} + {} i",
            jc.j.re().to_decimal(20),
            jc.j.im().to_decimal(4),
        );
        println!(
            "    g2 = {} + {} i, g3 = {} + {} i, propagated bound {}",
            jc.g2.re().to_decimal(8),
            jc.g2.im().to_decimal(3),
            jc.g3.re().to_decimal(8),
            jc.g3.im().to_decimal(3),
            jc.error_bound.to_decimal(3),
        );
    }
    println!();
    println!("reference points: j(i) = 1728, j((1+i sqrt3)/2) = 0, j(2i) = 66^3 = 287496");
}
