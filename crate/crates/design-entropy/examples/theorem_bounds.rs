//! The six closed-form lower bounds on averaged Renyi and min entropies,
//! evaluated against the exact-moment Jensen value they approximate.
//!
//! T1-T3 bound the entanglement entropy of random pure states; T4-T6 the
//! entropy carried by a random unitary channel's Choi state. Each bound
//! reports whether its hypotheses hold at the requested parameters.
//!
//! ```bash
//! cargo run --example theorem_bounds
//! ```

use design_entropy::moments::{
    design_renyi_lower_bound, haar_state_moment, theorem_bound, BoundParams, StatePartition,
    TheoremId,
};

fn main() -> design_entropy::Result<()> {
    let params = BoundParams {
        d_a: Some(64),
        d_b: Some(64),
        d_total: None,
        alpha: Some(3),
        a: Some(0.75),
        complex_field: true,
    };
    println!("All six bounds at d_a = d_b = 64, alpha = 3, a = 0.75:");
    for id in TheoremId::ALL {
        let report = theorem_bound(id, &params)?;
        println!(
            "  {id:<3} bound = {:>9.5} bits  valid = {:<5}  [{}]",
            report.bound_bits, report.valid, report.constraint_report
        );
    }

    // The exact counterpart the state bounds chase: Jensen applied to the
    // exact order-3 moment.
    let p = StatePartition::new(64, 64)?;
    let exact = design_renyi_lower_bound(&haar_state_moment(&p, 3)?)?;
    println!("\nExact-moment Jensen value at the same parameters: {exact:.5} bits");
    println!("(log2 d_a = {:.5} bits is the ceiling)", 64f64.log2());

    // Where hypotheses fail the bound is still reported, flagged invalid.
    let cramped = BoundParams {
        d_a: Some(1 << 20),
        d_b: Some(16),
        alpha: Some(6),
        a: Some(1.0),
        ..Default::default()
    };
    println!("\nA cramped environment (d_a = 2^20, d_b = 16, alpha = 6):");
    for id in [TheoremId::T2a, TheoremId::T3, TheoremId::T6] {
        let report = theorem_bound(id, &cramped)?;
        println!(
            "  {id:<3} valid = {:<5} bound = {:>10.4}  [{}]",
            report.valid, report.bound_bits, report.constraint_report
        );
    }
    Ok(())
}
