//! Partially summed Eisenstein series: exact box sums at the square lattice,
//! cardinality at weight zero, and the decay of sums over quantum windows.
//!
//! ```sh
//! cargo run --example eisenstein_partial_sums
//! ```

use qtj::eisenstein::{g_triple, partial_g, quantum_g_sequence, Mode};
use qtj::foliation::Modulus;
use qtj::numerics::QuadIrr;
use qtj::schemes::SetDescriptor;

fn main() {
    let mu = Modulus::i();
    let prec = 160;

    println!("exact box sums at mu = i (odd weights cancel in pairs):");
    for k in 0..=3i64 {
        for radius in [1u64, 2, 4] {
            let d = SetDescriptor::Box {
                radius,
                include_origin: true,
            };
            let s = partial_g(&mu, k, &d, prec, Mode::Exact).expect("exact sum");
            println!(
                "  G_{k} over Box({radius}) = {}   ({} terms)",
                s.value, s.term_count
            );
        }
    }

    let d = SetDescriptor::Box {
        radius: 1,
        include_origin: true,
    };
    let t = g_triple(&mu, &d, prec, Mode::Exact).expect("triple");
    println!(
        "normalized triple over Box(1): g1 = {}, g2 = {}, g3 = {}",
        t.g1.value, t.g2.value, t.g3.value
    );

    println!();
    println!("quantum windows for theta = golden ratio, mu = i, k = 2 (values sink):");
    let stages: Vec<u64> = (5..=14).collect();
    let seq = quantum_g_sequence(&mu, &QuadIrr::golden(), 2, &stages, 4, prec, Mode::Float)
        .expect("sequence");
    for (s, ps) in stages.iter().zip(&seq) {
        println!(
            "  stage {s:2}: |g2| = {}",
            ps.value.abs_real(prec).to_decimal(4)
        );
    }
}
