//! Negative tripartite information of a unitary channel: how much
//! information about an input subsystem spreads over the whole output.
//!
//! Split the Choi state of U into input registers A, B and output
//! registers C, D. Then -I3 = S(AC) + S(AD) - log2(d_a d_b) is zero for
//! product-preserving unitaries and grows toward 2 log2(d_a) for
//! scramblers.
//!
//! ```bash
//! cargo run --example scrambling_tripartite
//! ```

use design_entropy::moments::ChoiPartitionSpec;
use design_entropy::quantum::{negative_tripartite, CMatrix, UnitaryMatrix};
use design_entropy::sampling::sample_haar_unitary;
use design_entropy::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cnot() -> UnitaryMatrix {
    let one = Complex64::new(1.0, 0.0);
    let mut m = CMatrix::zeros(4, 4);
    m.set(0, 0, one);
    m.set(1, 1, one);
    m.set(2, 3, one);
    m.set(3, 2, one);
    UnitaryMatrix::new(m).unwrap()
}

fn main() -> design_entropy::Result<()> {
    let spec = ChoiPartitionSpec::new(2, 2, 2, 2)?;

    let identity = negative_tripartite(&UnitaryMatrix::identity(4), &spec)?;
    println!("identity:     -I3 = {:+.6} bits", identity.direct);

    let swap = negative_tripartite(&UnitaryMatrix::swap(2), &spec)?;
    println!("swap:         -I3 = {:+.6} bits", swap.direct);

    let gate = negative_tripartite(&cnot(), &spec)?;
    println!(
        "cnot:         -I3 = {:+.6} bits  (S(AC) = {:.3}, S(AD) = {:.3})",
        gate.direct, gate.s_ac, gate.s_ad
    );

    // Haar-random unitaries scramble nearly maximally.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut best = f64::MIN;
    for _ in 0..8 {
        let u = sample_haar_unitary(&mut rng, 4);
        let report = negative_tripartite(&u, &spec)?;
        best = best.max(report.direct);
        assert!((report.direct - report.via_marginals).abs() < 1e-9);
    }
    println!("haar (best of 8): -I3 = {best:+.6} bits  (maximum possible 2.0)");

    // Larger registers: scrambling strength grows with subsystem size.
    let spec9 = ChoiPartitionSpec::new(3, 3, 3, 3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let u = sample_haar_unitary(&mut rng, 9);
    let report = negative_tripartite(&u, &spec9)?;
    println!(
        "haar on 3 x 3:   -I3 = {:+.6} bits  (maximum possible {:.3})",
        report.direct,
        2.0 * 3f64.log2()
    );
    Ok(())
}
