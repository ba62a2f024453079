//! Building ensembles as orbits, measuring their design quality, and
//! round-tripping them through the JSON interchange format.
//!
//! ```bash
//! cargo run --example ensemble_io
//! ```

use design_entropy::ensembles::{
    frame_operator_distance, moment_deviation, pauli_group, StateEnsemble, UnitaryEnsemble,
};
use design_entropy::moments::{haar_state_moment, rational_to_f64, StatePartition};
use design_entropy::quantum::PureState;
use design_entropy::Complex64;

fn main() -> design_entropy::Result<()> {
    // Orbit of the maximally entangled two-qubit state under local Paulis:
    // sixteen states whose order-2 moments match Haar poorly (they are all
    // maximally entangled), but which form an exact 1-design on average.
    let half = Complex64::new(0.5f64.sqrt(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let bell = PureState::new(vec![half, zero, zero, half], &[2, 2])?;
    let paulis = pauli_group(2)?;
    let orbit = StateEnsemble::orbit("bell pauli orbit", &bell, paulis.unitaries())?;
    println!("Orbit size {} on dimension {}", orbit.len(), orbit.dim());

    let p = StatePartition::new(2, 2)?;
    let average = orbit.average_trace_power(&p, 2)?;
    let haar = rational_to_f64(&haar_state_moment(&p, 2)?.value);
    println!("  average purity {average:.6} vs Haar {haar:.6}");
    println!("  order-1 frame distance {:.6}", frame_operator_distance(&orbit, 1)?);
    println!("  order-2 moment deviation {:.6}", moment_deviation(&orbit, &p, 2)?);

    // Serialize, reload, and confirm nothing was lost.
    let text = orbit.to_json_string()?;
    let reloaded = StateEnsemble::from_json_str(&text)?;
    assert_eq!(reloaded.len(), orbit.len());
    assert_eq!(reloaded.label(), orbit.label());
    let again = reloaded.average_trace_power(&p, 2)?;
    assert!((again - average).abs() < 1e-15);
    println!("  JSON round trip: {} bytes, averages agree", text.len());

    // The same interchange format carries unitary ensembles.
    let unitary_text = paulis.to_json_string()?;
    let paulis_again = UnitaryEnsemble::from_json_str(&unitary_text)?;
    println!(
        "\nUnitary ensemble `{}` round-tripped with {} elements, F_1 = {:.4}",
        paulis_again.label(),
        paulis_again.len(),
        paulis_again.frame_potential(1)?
    );
    Ok(())
}
