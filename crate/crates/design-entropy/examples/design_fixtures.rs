//! Testing whether an ensemble is a t-design, three ways: frame
//! potentials, frame-operator distance, and moment deviation.
//!
//! The frame potential of a unitary ensemble reaches its minimum (the
//! Haar value) exactly when the ensemble is a t-design. For state
//! ensembles the trace distance between the averaged tensor power and the
//! symmetric-subspace projector plays the same role; moment deviation is
//! the cheap necessary condition.
//!
//! ```bash
//! cargo run --example design_fixtures
//! ```

use design_entropy::ensembles::{
    frame_operator_distance, haar_frame_potential_exact, mc_frame_potential, moment_deviation,
    pauli_group, single_qubit_clifford, StateEnsemble,
};
use design_entropy::moments::StatePartition;
use design_entropy::quantum::PureState;
use design_entropy::Complex64;
use num::ToPrimitive;

fn main() -> design_entropy::Result<()> {
    // The 24-element Clifford group: a 3-design that fails at order 4.
    let clifford = single_qubit_clifford();
    println!("Single-qubit Clifford group ({} elements):", clifford.len());
    for t in 1..=4u32 {
        let potential = clifford.frame_potential(t)?;
        let haar = haar_frame_potential_exact(2, t)?.to_f64().unwrap();
        let verdict = if (potential - haar).abs() < 1e-9 { "meets" } else { "exceeds" };
        println!("  F_{t} = {potential:>8.4}  {verdict} the Haar minimum {haar}");
    }

    // The Pauli group alone stops at order 1.
    let pauli = pauli_group(1)?;
    println!("\nSingle-qubit Pauli group ({} elements):", pauli.len());
    for t in 1..=2u32 {
        let potential = pauli.frame_potential(t)?;
        let haar = haar_frame_potential_exact(2, t)?.to_f64().unwrap();
        println!("  F_{t} = {potential:.4} vs Haar {haar}");
    }

    // A sampled Haar baseline sits near the minimum at every order.
    let sampled = mc_frame_potential(2, 3, 20_000, 11)?;
    println!(
        "\nSampled Haar pairs, order 3: {:.4} +- {:.4} (minimum 5)",
        sampled.mean, sampled.std_error
    );

    // State-ensemble testers on the computational basis of two qubits:
    // a 1-design (the frame operator is exactly maximally mixed) that
    // already fails the order-2 moment test.
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let basis: Vec<PureState> = (0..4)
        .map(|k| {
            let mut amps = vec![zero; 4];
            amps[k] = one;
            PureState::new(amps, &[2, 2]).unwrap()
        })
        .collect();
    let ensemble = StateEnsemble::new("computational basis", basis)?;
    let p = StatePartition::new(2, 2)?;
    for alpha in 1..=2u32 {
        let distance = frame_operator_distance(&ensemble, alpha)?;
        let deviation = moment_deviation(&ensemble, &p, alpha)?;
        println!(
            "\nBasis ensemble at order {alpha}: frame distance {distance:.6}, \
             moment deviation {deviation:.6}"
        );
    }
    println!("\nZero frame distance certifies a design; zero deviation alone does not.");
    Ok(())
}
