//! Haar-averaged trace powers for the Choi state of a random unitary
//! channel, computed with exact Weingarten calculus.
//!
//! A unitary U on dimension d defines the pure Choi state
//! (1/sqrt(d)) sum_i |i>|U i>. Splitting input and output registers each
//! in two gives a four-party state; averaging tr(rho_AC^alpha) over Haar
//! U is a double sum over S_alpha weighted by Weingarten functions.
//!
//! ```bash
//! cargo run --example choi_moments
//! ```

use design_entropy::moments::{haar_choi_moment, rational_to_f64, ChoiPartitionSpec};
use design_entropy::permgroup::IntegerPartition;
use design_entropy::weingarten::WeingartenTable;

fn main() -> design_entropy::Result<()> {
    // Two qubits in, two qubits out, keeping one of each.
    let spec = ChoiPartitionSpec::new(2, 2, 2, 2)?;
    let m = haar_choi_moment(&spec, 2)?;
    println!(
        "Balanced two-qubit split, order 2: {}/{} = {}",
        m.value.numer(),
        m.value.denom(),
        rational_to_f64(&m.value)
    );

    // Keeping everything makes the marginal pure, so every moment is 1.
    let trivial = ChoiPartitionSpec::new(4, 1, 4, 1)?;
    let one = haar_choi_moment(&trivial, 2)?;
    println!(
        "Trivial split (keep all registers), order 2: {}/{}",
        one.value.numer(),
        one.value.denom()
    );

    // Larger registers: the kept marginal approaches maximal mixedness, so
    // moments fall toward d_kept^(1-alpha).
    println!("\nOrder-2 and order-3 moments for balanced splits of growing size:");
    for s in [2u64, 3, 4] {
        let spec = ChoiPartitionSpec::new(s, s, s, s)?;
        let m2 = rational_to_f64(&haar_choi_moment(&spec, 2)?.value);
        let m3 = rational_to_f64(&haar_choi_moment(&spec, 3)?.value);
        println!(
            "  d = {:>2} total: a2 = {m2:.6} (floor {:.6}), a3 = {m3:.6} (floor {:.6})",
            s * s,
            1.0 / (s * s) as f64,
            1.0 / ((s * s) * (s * s)) as f64
        );
    }

    // The Weingarten weights behind the order-2 average on one qubit pair.
    let table = WeingartenTable::new(4, 2)?;
    println!("\nWeingarten values on S_2 at dimension 4 (identity and the swap):");
    for class in IntegerPartition::partitions_of(2) {
        let w = table.value(&class)?;
        println!("  class {:?}: {}/{}", class.parts(), w.numer(), w.denom());
    }

    // Orders above the total dimension are rejected: the Weingarten
    // function is only a true inverse when d >= alpha.
    let small = ChoiPartitionSpec::new(2, 1, 2, 1)?;
    match haar_choi_moment(&small, 5) {
        Err(e) => println!("\nOrder 5 on total dimension 2 is refused: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
