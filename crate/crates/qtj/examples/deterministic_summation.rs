//! The reproducibility contract: chunked fixed-order summation gives
//! bit-identical results no matter how many workers participate.
//!
//! ```sh
//! RAYON_NUM_THREADS=3 cargo run --example deterministic_summation
//! ```

use qtj::numerics::{sum_terms_indexed, BigComplex, BigReal, CHUNK_TERMS};

fn main() {
    let prec = 256;
    let count = 5 * CHUNK_TERMS + 123;
    // a permutation-sensitive series: magnitudes spread over 60 binary orders
    let term = |i: usize| {
        let k = ((i as i64) * 1_103_515_245 % 1_000_003) - 500_000;
        let e = (i % 61) as i32 - 30;
        BigComplex::from_real(BigReal::from_i64(k, prec).mul(&BigReal::pow2(e, prec)))
    };

    let mut patterns = Vec::new();
    for threads in [1usize, 2, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("pool");
        let sum = pool.install(|| sum_terms_indexed(count, prec, term));
        println!(
            "{threads} worker(s): sum = {}   bits = {}...",
            sum.re().to_decimal(20),
            &sum.bit_pattern()[..40],
        );
        patterns.push(sum.bit_pattern());
    }
    assert!(patterns.windows(2).all(|w| w[0] == w[1]));
    println!("all {} runs bit-identical", patterns.len());
}
