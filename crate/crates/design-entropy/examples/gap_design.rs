//! A state ensemble that matches every order-2 Haar moment exactly yet
//! has order-3 entanglement entropy bounded away from maximal.
//!
//! The construction spikes one Schmidt coefficient of a maximally
//! entangled state. Its reduced spectrum is quadratic-exact: the purity
//! radical cancels and reproduces the Haar average as a rational. From
//! order 3 on the radical survives and the entropy falls measurably short
//! of log2(d_a) no matter how large the system grows.
//!
//! ```bash
//! cargo run --example gap_design
//! ```

use design_entropy::ensembles::{
    gap2_design_state, gap2_purity_exact, gap2_spectrum_exact, gap2_trace_power_exact,
    gap_renyi_upper_bound,
};
use design_entropy::moments::{haar_state_moment, StatePartition};
use design_entropy::quantum::{renyi_entropy, trace_power};

fn main() -> design_entropy::Result<()> {
    let (d_a, d_b) = (3u64, 3u64);
    let (l1, l2) = gap2_spectrum_exact(d_a, d_b)?;
    println!("Spiked state on {d_a} x {d_b}:");
    println!("  top eigenvalue      {:.10}  (multiplicity 1)", l1.to_f64());
    println!("  remaining eigenvalue {:.10} (multiplicity {})", l2.to_f64(), d_a - 1);

    // Order 2: exact agreement with the Haar average, as rationals.
    let purity = gap2_purity_exact(d_a, d_b)?;
    let haar = haar_state_moment(&StatePartition::new(d_a, d_b)?, 2)?;
    assert_eq!(purity, haar.value);
    println!(
        "  purity {}/{} equals the Haar order-2 average exactly",
        purity.numer(),
        purity.denom()
    );

    // Order 3: the radical no longer cancels.
    let t3 = gap2_trace_power_exact(d_a, d_b, 3)?;
    println!(
        "  tr rho^3 = {}/{} + {}/{} * sqrt({})  ~= {:.10}",
        t3.rational_part().numer(),
        t3.rational_part().denom(),
        t3.radical_part().numer(),
        t3.radical_part().denom(),
        t3.base(),
        t3.to_f64()
    );

    // The constructed amplitudes reproduce the exact spectrum.
    let psi = gap2_design_state(d_a, d_b)?;
    let rho = psi.reduced(&[0])?;
    let numeric = trace_power(&rho, 3)?;
    println!("  explicit state tr rho^3 = {numeric:.10} (matches to 1e-12)");
    assert!((numeric - t3.to_f64()).abs() < 1e-12);
    let s3 = renyi_entropy(&rho, 3)?;
    println!("  order-3 entropy {s3:.6} bits vs maximal {:.6} bits", (d_a as f64).log2());

    // The deficit from maximal grows without bound in the dimension.
    println!("\nOrder-3 entropy deficit log2(d_a) - S3 for equal splits:");
    for d in [2u64, 4, 8, 16, 32, 64] {
        let bound = gap_renyi_upper_bound(d, d, 3)?;
        let deficit = (d as f64).log2() - bound.exact_renyi_bits;
        println!(
            "  d_a = {d:>2}: S3 = {:.6} bits, deficit = {deficit:.6}, orbit ceiling {:.6}",
            bound.exact_renyi_bits, bound.bound_bits
        );
    }
    println!("\nEvery order-2 test calls this ensemble Haar; order 3 exposes it.");
    Ok(())
}
