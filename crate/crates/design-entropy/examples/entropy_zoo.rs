//! The generalized entropy families on one concrete spectrum, and the
//! orderings that relate them.
//!
//! ```bash
//! cargo run --example entropy_zoo
//! ```

use design_entropy::quantum::{
    min_entropy, renyi_entropy, tsallis_entropy, unified_entropy, von_neumann_entropy,
    DensityMatrix, EntropySelector,
};

fn main() -> design_entropy::Result<()> {
    let rho = DensityMatrix::from_diagonal(&[0.5, 0.25, 0.125, 0.125])?;
    println!("Spectrum (1/2, 1/4, 1/8, 1/8) on dimension 4:\n");

    println!("Renyi entropies decrease in the order:");
    for alpha in 2..=6u32 {
        println!("  S_{alpha} = {:.6} bits", renyi_entropy(&rho, alpha)?);
    }
    println!("  S_min = {:.6} bits (the alpha -> infinity limit)", min_entropy(&rho)?);
    println!("  S_vN  = {:.6} bits (the alpha -> 1 limit)", von_neumann_entropy(&rho)?);

    // The unified family interpolates: s = 1 is Tsallis, s -> 0 is Renyi
    // in nats.
    println!("\nUnified family at alpha = 2 across the s parameter:");
    for s in [1.0, 0.5, 0.1, 0.01, 0.001] {
        println!("  s = {s:<5}: {:.6}", unified_entropy(&rho, 2, s)?);
    }
    println!("  Tsallis alpha=2      : {:.6}", tsallis_entropy(&rho, 2)?);
    println!("  Renyi alpha=2 in nats: {:.6}", renyi_entropy(&rho, 2)? * 2f64.ln());

    // Min entropy bounds every Renyi order from below, with a quantitative
    // reverse inequality: S_min >= (alpha - 1)/alpha * S_alpha.
    println!("\nMin-entropy sandwich at alpha = 4:");
    let s4 = renyi_entropy(&rho, 4)?;
    let smin = min_entropy(&rho)?;
    println!("  {:.6} <= {smin:.6} <= {s4:.6}", 0.75 * s4);

    // Selectors drive the same computations generically.
    println!("\nThrough the selector interface:");
    for selector in [
        EntropySelector::Renyi { alpha: 3 },
        EntropySelector::Tsallis { alpha: 3 },
        EntropySelector::Unified { alpha: 3, s: 2.0 },
        EntropySelector::Min,
        EntropySelector::VonNeumann,
    ] {
        println!("  {:<22} {:.6}", selector.label(), selector.evaluate(&rho)?);
    }
    Ok(())
}
