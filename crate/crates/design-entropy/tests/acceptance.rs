//! End-to-end acceptance gate. Each test covers one release criterion and
//! prints a single PASS/FAIL line (visible with `--nocapture`, and on any
//! failure). Tolerances are pinned here, next to the checks they gate.

use design_entropy::ensembles::{
    gap2_purity_exact, gap2_trace_power_exact, haar_frame_potential_exact, pauli_group,
    single_qubit_clifford,
};
use design_entropy::moments::{
    catalan, design_renyi_lower_bound, haar_choi_moment, haar_state_moment, rational_to_f64,
    theorem_bound, BoundParams, ChoiPartitionSpec, StatePartition, TheoremId,
};
use design_entropy::permgroup::verify_cycle_lemma;
use design_entropy::quantum::{hermitian_eigenvalues, min_entropy, renyi_entropy, trace_power};
use design_entropy::sampling::{
    mc_choi_moment, mc_state_moment, sample_haar_state, sample_hs_density,
};
use design_entropy::{Integer, Rational};
use num::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Monte Carlo estimates must land within this many standard errors.
const SIGMA_GATE: f64 = 4.0;
/// Exact-arithmetic results converted to floats, and float-only entropy
/// properties, must agree to this tolerance.
const PROPERTY_TOL: f64 = 1e-9;
/// Relative error allowed between the order-alpha moment and its leading
/// Catalan asymptotics at dimension 64.
const ASYMPTOTIC_REL_TOL: f64 = 0.01;
/// Sample counts for the two Monte Carlo confirmations.
const MC_SAMPLES: u64 = 100_000;

fn report(number: u32, name: &str, passed: bool, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("acceptance {number:2} [{verdict}] {name}: {detail}");
    assert!(passed, "acceptance criterion {number} ({name}) failed: {detail}");
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

#[test]
fn criterion_01_order2_moment_closed_form() {
    // <tr rho_A^2> = (d_a + d_b) / (d_a d_b + 1), exactly, across the grid.
    let mut failures = 0usize;
    for d_a in 2..=16u64 {
        for d_b in d_a..=16u64 {
            let p = StatePartition::new(d_a, d_b).unwrap();
            let got = haar_state_moment(&p, 2).unwrap().value;
            let want = rat((d_a + d_b) as i64, (d_a * d_b + 1) as i64);
            if got != want {
                failures += 1;
            }
        }
    }
    report(
        1,
        "order-2 closed form",
        failures == 0,
        &format!("{failures} mismatches over 2 <= d_a <= d_b <= 16 (exact rationals)"),
    );
}

#[test]
fn criterion_02_order3_moment_exact_and_sampled() {
    let p = StatePartition::new(2, 2).unwrap();
    let exact = haar_state_moment(&p, 3).unwrap().value;
    let exact_ok = exact == rat(7, 10);
    let est = mc_state_moment(&p, 3, MC_SAMPLES, 0xACC2).unwrap();
    let mc_ok = est.within(0.7, SIGMA_GATE);
    report(
        2,
        "order-3 qubit moment",
        exact_ok && mc_ok,
        &format!(
            "exact {}/{} (want 7/10), sampled {} +- {} at n = {MC_SAMPLES}",
            exact.numer(),
            exact.denom(),
            est.mean,
            est.std_error
        ),
    );
}

#[test]
fn criterion_03_choi_moment_exact_and_sampled() {
    let spec = ChoiPartitionSpec::new(2, 2, 2, 2).unwrap();
    let exact = haar_choi_moment(&spec, 2).unwrap().value;
    let exact_ok = exact == rat(2, 5);
    let est = mc_choi_moment(&spec, 2, MC_SAMPLES, 0xACC3).unwrap();
    let mc_ok = est.within(0.4, SIGMA_GATE);
    report(
        3,
        "two-qubit Choi moment",
        exact_ok && mc_ok,
        &format!(
            "exact {}/{} (want 2/5), sampled {} +- {} at n = {MC_SAMPLES}",
            exact.numer(),
            exact.denom(),
            est.mean,
            est.std_error
        ),
    );
}

#[test]
fn criterion_04_cycle_inequality_with_catalan_counts() {
    let mut passed = true;
    let mut counts = Vec::new();
    for alpha in 1..=8u32 {
        let r = verify_cycle_lemma(alpha).unwrap();
        let cat = catalan(alpha).to_u64().unwrap();
        passed &= r.holds && r.saturating_count == cat;
        counts.push(r.saturating_count.to_string());
    }
    report(
        4,
        "cycle inequality",
        passed,
        &format!("saturating counts 1..=8: [{}] match the Catalan numbers", counts.join(", ")),
    );
}

#[test]
fn criterion_05_weingarten_inverse_identity() {
    let mut passed = true;
    let mut pairs = 0usize;
    for d in 2..=6u64 {
        for alpha in 1..=(d.min(5) as u32) {
            passed &= design_entropy::weingarten::verify_wg_inverse(d, alpha).unwrap();
            pairs += 1;
        }
    }
    report(
        5,
        "Weingarten inverse",
        passed,
        &format!("exact group-algebra inverse on {pairs} (d, alpha) pairs, d <= 6"),
    );
}

#[test]
fn criterion_06_jensen_bound_dominance() {
    // The exact-moment Jensen value dominates the closed-form bounds
    // wherever their hypotheses hold, and always clears log2(d_a) - 2.
    let mut passed = true;
    let mut checked = 0usize;
    for d in [2u64, 4, 8, 16] {
        for alpha in 2..=4u32 {
            let p = StatePartition::new(d, d).unwrap();
            let exact = design_renyi_lower_bound(&haar_state_moment(&p, alpha).unwrap()).unwrap();
            let params = BoundParams {
                d_a: Some(d),
                d_b: Some(d),
                alpha: Some(alpha),
                ..Default::default()
            };
            for id in [TheoremId::T2a, TheoremId::T2b] {
                let b = theorem_bound(id, &params).unwrap();
                if b.valid {
                    passed &= exact >= b.bound_bits - PROPERTY_TOL;
                    checked += 1;
                }
            }
            passed &= exact >= (d as f64).log2() - 2.0 - PROPERTY_TOL;
        }
    }
    report(
        6,
        "bound dominance",
        passed,
        &format!("exact Jensen value above {checked} valid closed-form bounds and log2(d)-2"),
    );
}

#[test]
fn criterion_07_catalan_asymptotics_at_64() {
    let mut passed = true;
    let mut details = Vec::new();
    for alpha in 2..=4u32 {
        let p = StatePartition::new(64, 64).unwrap();
        let moment = rational_to_f64(&haar_state_moment(&p, alpha).unwrap().value);
        let scaled = moment * 64f64.powi(alpha as i32 - 1);
        let cat = catalan(alpha).to_u64().unwrap() as f64;
        let rel = (scaled - cat).abs() / cat;
        passed &= rel < ASYMPTOTIC_REL_TOL;
        details.push(format!("alpha={alpha}: {scaled:.4} vs {cat} ({:.2}%)", rel * 100.0));
    }
    report(7, "Catalan asymptotics", passed, &details.join("; "));
}

#[test]
fn criterion_08_gap_design_matches_order2_and_gap_grows() {
    let mut purity_ok = true;
    let mut gaps = Vec::new();
    for d in 2..=32u64 {
        let p = StatePartition::new(d, d).unwrap();
        purity_ok &= gap2_purity_exact(d, d).unwrap() == haar_state_moment(&p, 2).unwrap().value;
        let t3 = gap2_trace_power_exact(d, d, 3).unwrap().to_f64();
        gaps.push((d as f64).log2() + t3.log2() / 2.0);
    }
    let positive = gaps[0] > 0.0;
    let monotone = gaps.windows(2).all(|w| w[1] > w[0]);
    report(
        8,
        "spiked-state gap",
        purity_ok && positive && monotone,
        &format!(
            "purity exact over d = 2..=32; order-3 gap {:.6} -> {:.6} bits, strictly increasing",
            gaps[0],
            gaps[gaps.len() - 1]
        ),
    );
}

#[test]
fn criterion_09_entropy_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC9);
    let mut passed = true;
    let mut violations = Vec::new();

    // Renyi monotonicity in alpha, min entropy below every order, and
    // matrix-power vs spectrum agreement, on 1000 sampled densities.
    for i in 0..1000usize {
        let d = 2 + (i % 15);
        let rho = sample_hs_density(&mut rng, d);
        let spectrum = hermitian_eigenvalues(rho.matrix()).unwrap();
        let smin = min_entropy(&rho).unwrap();
        let mut previous = f64::INFINITY;
        for alpha in 2..=6u32 {
            let s = renyi_entropy(&rho, alpha).unwrap();
            if s > previous + PROPERTY_TOL {
                passed = false;
                violations.push(format!("monotonicity d={d} alpha={alpha}"));
            }
            if smin > s + PROPERTY_TOL {
                passed = false;
                violations.push(format!("min vs alpha={alpha} d={d}"));
            }
            let from_spectrum: f64 = spectrum.iter().map(|l| l.powi(alpha as i32)).sum();
            if (trace_power(&rho, alpha).unwrap() - from_spectrum).abs() > PROPERTY_TOL {
                passed = false;
                violations.push(format!("trace power vs spectrum d={d} alpha={alpha}"));
            }
            previous = s;
        }
    }

    // Additivity on product states.
    for _ in 0..150 {
        let (da, db) = (2 + (rng_usize(&mut rng) % 5), 2 + (rng_usize(&mut rng) % 5));
        let a = sample_hs_density(&mut rng, da);
        let b = sample_hs_density(&mut rng, db);
        let product = a.kron(&b);
        for alpha in 2..=4u32 {
            let lhs = renyi_entropy(&product, alpha).unwrap();
            let rhs = renyi_entropy(&a, alpha).unwrap() + renyi_entropy(&b, alpha).unwrap();
            if (lhs - rhs).abs() > PROPERTY_TOL {
                passed = false;
                violations.push(format!("additivity {}x{}", a.dim(), b.dim()));
            }
        }
    }

    // The maximality gap cannot increase under partial trace: purify a
    // mixed bipartite state with a third register and trace it out.
    for i in 0..150usize {
        let dims = [(2usize, 2usize, 3usize), (2, 3, 2), (3, 2, 4), (2, 4, 2)][i % 4];
        let psi = sample_haar_state(&mut rng, dims.0 * dims.1 * dims.2)
            .with_dims(&[dims.0, dims.1, dims.2])
            .unwrap();
        let rho_ab = psi.reduced(&[0, 1]).unwrap();
        let rho_a = psi.reduced(&[0]).unwrap();
        for alpha in 2..=4u32 {
            let gap_ab =
                ((dims.0 * dims.1) as f64).log2() - renyi_entropy(&rho_ab, alpha).unwrap();
            let gap_a = (dims.0 as f64).log2() - renyi_entropy(&rho_a, alpha).unwrap();
            if gap_ab < gap_a - PROPERTY_TOL {
                passed = false;
                violations.push(format!("partial-trace gap {dims:?} alpha={alpha}"));
            }
        }
    }

    violations.truncate(4);
    report(
        9,
        "entropy properties",
        passed,
        &if violations.is_empty() {
            "monotonicity, additivity, min-entropy floor, partial-trace gap, spectrum \
             agreement on 1000 sampled densities"
                .to_string()
        } else {
            format!("violations: {}", violations.join(", "))
        },
    );
}

fn rng_usize(rng: &mut ChaCha8Rng) -> usize {
    rand::Rng::gen_range(rng, 0..usize::MAX)
}

#[test]
fn criterion_10_design_order_witness() {
    // The qubit Pauli group is a 1-design and the 24-element Clifford
    // group a 3-design but not a 4-design: the potentials meet the exact
    // Haar values (1, 2, 5 at d = 2; the naive t! only applies for t <= d)
    // and exceed the order-4 value 14.
    let pauli = pauli_group(1).unwrap();
    let f1 = pauli.frame_potential(1).unwrap();
    let clifford = single_qubit_clifford();
    let f2 = clifford.frame_potential(2).unwrap();
    let f3 = clifford.frame_potential(3).unwrap();
    let f4 = clifford.frame_potential(4).unwrap();
    let haar3 = haar_frame_potential_exact(2, 3).unwrap().to_f64().unwrap();
    let haar4 = haar_frame_potential_exact(2, 4).unwrap().to_f64().unwrap();
    let passed = (f1 - 1.0).abs() < PROPERTY_TOL
        && (f2 - 2.0).abs() < PROPERTY_TOL
        && (f3 - haar3).abs() < PROPERTY_TOL
        && (haar3 - 5.0).abs() < PROPERTY_TOL
        && (f4 - 15.0).abs() < PROPERTY_TOL
        && f4 > haar4 + 0.5;
    report(
        10,
        "design fixtures",
        passed,
        &format!(
            "Pauli F1 = {f1}; Clifford F2 = {f2}, F3 = {f3} (Haar {haar3}), \
             F4 = {f4} > Haar {haar4}"
        ),
    );
}
