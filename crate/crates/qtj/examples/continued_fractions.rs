//! Continued fractions of exact slopes, their convergents, and the exact
//! approximation errors.
//!
//! ```sh
//! cargo run --example continued_fractions
//! ```

use qtj::dioph::{cf_expand, cf_expand_heuristic, convergents, pair_quality};
use qtj::numerics::{QuadIrr, Rational};

fn main() {
    for (name, theta) in [
        ("golden ratio (1+sqrt5)/2", QuadIrr::golden()),
        ("sqrt(2)", QuadIrr::sqrt(2).unwrap()),
        ("sqrt(7)", QuadIrr::sqrt(7).unwrap()),
        (
            "7/5",
            QuadIrr::from_rational(&Rational::new(7.into(), 5.into())),
        ),
    ] {
        let cf = cf_expand(&theta, 12).expect("expansion");
        print!("{name}: [");
        for (i, a) in cf.quotients.iter().take(12).enumerate() {
            print!(
                "{}{a}",
                if i == 0 {
                    ""
                } else {
                    if i == 1 {
                        "; "
                    } else {
                        ", "
                    }
                }
            );
        }
        match cf.period {
            Some((pre, len)) => println!(", ...]  period ({pre}, {len})"),
            None => println!("]  terminating"),
        }

        let count = 8.min(cf.available());
        let pairs = convergents(&cf, count).expect("convergents");
        for (j, p) in pairs.iter().enumerate() {
            let quality = pair_quality(p).to_real(96);
            println!(
                "  convergent {j}: ({}, {})   |n*theta - m| = {}",
                p.m,
                p.n,
                quality.to_decimal(6)
            );
        }
        println!();
    }

    // a decimal slope is accepted, but flagged: nothing past the precision
    // budget is certified
    let x = QuadIrr::golden().to_real(96);
    let cf = cf_expand_heuristic(&x, 100).expect("heuristic expansion");
    println!(
        "heuristic expansion of a 96-bit float of the golden ratio stops after {} quotients",
        cf.quotients.len()
    );
}
