//! Exact Haar-averaged trace powers of the reduced state of a random
//! bipartite pure state.
//!
//! The average of tr(rho_A^alpha) over Haar-random |psi> on A x B is a sum
//! over the symmetric group S_alpha weighted by cycle counts, divided by
//! the symmetric-subspace dimension. Everything here is exact rational
//! arithmetic; floats appear only at the printing boundary.
//!
//! ```bash
//! cargo run --example state_moments
//! ```

use design_entropy::moments::{
    catalan, haar_state_moment, rational_to_f64, state_moment_asymptotic, StatePartition,
};
use design_entropy::Rational;
use num::ToPrimitive;

fn main() -> design_entropy::Result<()> {
    println!("Exact moments for a qubit entangled with environments of growing size:");
    for d_b in [2u64, 4, 16, 64] {
        let p = StatePartition::new(2, d_b)?;
        let mut row = format!("  d_b = {d_b:>3}: ");
        for alpha in 2..=4u32 {
            let m = haar_state_moment(&p, alpha)?;
            row.push_str(&format!(
                "a{alpha} = {}/{} ({:.6})  ",
                m.value.numer(),
                m.value.denom(),
                rational_to_f64(&m.value)
            ));
        }
        println!("{row}");
    }

    // The order-2 value has a famous closed form.
    println!("\nThe order-2 average is (d_a + d_b)/(d_a d_b + 1):");
    for (d_a, d_b) in [(2u64, 2u64), (3, 5), (8, 8)] {
        let p = StatePartition::new(d_a, d_b)?;
        let m = haar_state_moment(&p, 2)?;
        let closed = Rational::new(
            design_entropy::Integer::from(d_a + d_b),
            design_entropy::Integer::from(d_a * d_b + 1),
        );
        assert_eq!(m.value, closed);
        println!("  ({d_a},{d_b}): {}/{}", m.value.numer(), m.value.denom());
    }

    // At large dimension the scaled moment approaches a Catalan number:
    // the saturating permutations are exactly the non-crossing ones.
    println!("\nCatalan asymptotics at d_a = d_b = 64:");
    let p = StatePartition::new(64, 64)?;
    for alpha in 2..=5u32 {
        let exact = rational_to_f64(&haar_state_moment(&p, alpha)?.value);
        let scaled = exact * 64f64.powi(alpha as i32 - 1);
        let cat = catalan(alpha).to_u64().unwrap();
        let approx = state_moment_asymptotic(64, alpha);
        println!(
            "  alpha = {alpha}: moment * d^(alpha-1) = {scaled:.5} vs Cat_{alpha} = {cat} \
             (leading-term estimate {approx:.3e})"
        );
    }
    Ok(())
}
