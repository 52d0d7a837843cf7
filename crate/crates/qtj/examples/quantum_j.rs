//! The quantum modular invariant: j over windows of convergent pairs. At
//! mu = i the values settle onto the real axis as the stage grows, and the
//! per-stage table shows how fast.
//!
//! ```sh
//! cargo run --example quantum_j
//! ```

use qtj::foliation::Modulus;
use qtj::modular::j_quantum;
use qtj::numerics::QuadIrr;

fn main() {
    let prec = 192;
    let stages: Vec<u64> = (5..=18).collect();
    for (name, theta) in [
        ("golden ratio", QuadIrr::golden()),
        ("sqrt(2)", QuadIrr::sqrt(2).unwrap()),
    ] {
        let rep = j_quantum(&Modulus::i(), &theta, &stages, 4, prec).expect("quantum j");
        println!(
            "theta = {name}, window length {}, continued-fraction period {:?}:",
            rep.window_len, rep.period
        );
        println!("  stage     q_s           Re j                 Im j        |Im j|/|j|");
        for row in &rep.stages {
            let j = row.j.as_ref().expect("no degenerate stages here");
            println!(
                "  {:5} {:>8}   {:>22} {:>12}  {:>10}",
                row.stage,
                row.q_den,
                j.re().to_decimal(16),
                j.im().to_decimal(3),
                row.im_fraction
                    .as_ref()
                    .map(|f| f.to_decimal(3))
                    .unwrap_or_default(),
            );
        }
        for c in &rep.class_stats {
            println!(
                "  class {} ({} stages): late diameter {}, median {} + {} i",
                c.class,
                c.members,
                c.diameter.to_decimal(3),
                c.median_re.to_decimal(12),
                c.median_im.to_decimal(3),
            );
        }
        println!();
    }
}
