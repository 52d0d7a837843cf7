//! Moduli-side bookkeeping: the action `A . (mu, theta) = (A(mu), A^{-T}(theta))`,
//! sign canonicalization, and reduction to the fundamental domain with the
//! matrix that achieves it.
//!
//! ```sh
//! cargo run --example moduli_reduction
//! ```

use qtj::foliation::{
    act, canonicalize_sign, reduce_modulus, slope_direction, FoliationPoint, Gl2Z, Modulus, Theta,
};
use qtj::numerics::{ExactComplex, QuadIrr};

fn exact_mu(re: (i64, i64), im: (i64, i64)) -> Modulus {
    Modulus::exact(ExactComplex::new(
        QuadIrr::new(re.0.into(), 0.into(), re.1.into(), 1).unwrap(),
        QuadIrr::new(im.0.into(), 0.into(), im.1.into(), 1).unwrap(),
    ))
    .expect("off the real axis")
}

fn main() {
    let p = FoliationPoint::new(Modulus::i(), Theta::Finite(QuadIrr::golden()));
    println!("point: mu = {}, theta = {}", p.modulus, p.theta);
    let dir = slope_direction(&p, 96).expect("direction");
    println!("slope direction 1 + theta*mu = {dir}");

    let a = Gl2Z::from_i64(2, 1, 1, 1).unwrap();
    let q = act(&a, &p).expect("action");
    println!("after {a}: mu = {}, theta = {}", q.modulus, q.theta);

    // the two-sided sign collapse
    let swapped = act(&Gl2Z::half_plane_swap(), &p).expect("action");
    let back = canonicalize_sign(&swapped);
    println!(
        "sign swap sends mu to {} and canonicalization returns it to {}",
        swapped.modulus, back.modulus
    );
    println!();

    for mu in [
        exact_mu((5, 1), (1, 1)),  // i + 5
        exact_mu((0, 1), (1, 2)),  // i/2
        exact_mu((13, 4), (3, 5)), // 13/4 + (3/5) i
        exact_mu((0, 1), (-3, 1)), // lower half plane
    ] {
        let (r, g) = reduce_modulus(&mu).expect("reduction");
        println!("reduce {mu}  ->  {r}   via {g}");
        // the matrix really maps input to output, and reduction is idempotent
        assert_eq!(mu.moebius(&g).unwrap(), r);
        let (r2, g2) = reduce_modulus(&r).expect("reduction");
        assert_eq!(r, r2);
        assert!(g2.is_identity());
    }
}
