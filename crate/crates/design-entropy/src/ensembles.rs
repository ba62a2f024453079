//! Concrete state and unitary ensembles, and testers that measure how far
//! an ensemble is from a design.
//!
//! The centerpiece is an explicit two-eigenvalue ("spiked") bipartite state
//! whose marginal purity equals the Haar average exactly, so its local
//! unitary orbit reproduces second moments, while its higher Renyi
//! entropies stay far below the Haar values. Its spectrum lives in a
//! quadratic extension, so the exact computations use [`Surd`] arithmetic.
//! Alongside it: Pauli and single-qubit Clifford groups as worked examples,
//! JSON import/export for user-supplied ensembles, and three design
//! diagnostics (frame potential, frame operator distance, moment
//! deviation).

use crate::moments::{
    haar_choi_moment, haar_state_moment, rational_to_f64, ChoiPartitionSpec, StatePartition,
};
use crate::permgroup::{enumerate_group, factorial, sym_irrep_dim, IntegerPartition};
use crate::quantum::{
    choi_state, trace_norm_hermitian, trace_power, CMatrix, PureState, UnitaryMatrix,
};
use crate::sampling::{mc_average, sample_haar_unitary, McEstimate};
use crate::{Complex64, Error, Integer, Rational, Result};
use num::{BigInt, One, Zero};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest matrix dimension (`d^alpha`) the frame-operator tester builds.
pub const FRAME_DIM_CAP: usize = 4096;
/// Largest qubit count for [`pauli_group`].
pub const PAULI_QUBIT_CAP: u32 = 5;

/// Exact element of the quadratic extension `Q(sqrt(base))`:
/// `rational + radical * sqrt(base)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Surd {
    rational: Rational,
    radical: Rational,
    base: u64,
}

impl Surd {
    pub fn new(rational: Rational, radical: Rational, base: u64) -> Self {
        Self { rational, radical, base }
    }

    pub fn from_rational(rational: Rational, base: u64) -> Self {
        Self { rational, radical: Rational::zero(), base }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn radical_part(&self) -> &Rational {
        &self.radical
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn is_rational(&self) -> bool {
        self.radical.is_zero()
    }

    fn check_base(&self, other: &Surd) -> Result<()> {
        if self.base != other.base {
            return Err(Error::InvalidArgument(format!(
                "surd bases differ: sqrt({}) vs sqrt({})",
                self.base, other.base
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Surd) -> Result<Surd> {
        self.check_base(other)?;
        Ok(Surd::new(
            &self.rational + &other.rational,
            &self.radical + &other.radical,
            self.base,
        ))
    }

    pub fn sub(&self, other: &Surd) -> Result<Surd> {
        self.check_base(other)?;
        Ok(Surd::new(
            &self.rational - &other.rational,
            &self.radical - &other.radical,
            self.base,
        ))
    }

    pub fn mul(&self, other: &Surd) -> Result<Surd> {
        self.check_base(other)?;
        let base = Rational::from_integer(Integer::from(self.base));
        Ok(Surd::new(
            &self.rational * &other.rational + &self.radical * &other.radical * base,
            &self.rational * &other.radical + &self.radical * &other.rational,
            self.base,
        ))
    }

    pub fn scale(&self, factor: &Rational) -> Surd {
        Surd::new(&self.rational * factor, &self.radical * factor, self.base)
    }

    pub fn pow(&self, exponent: u32) -> Surd {
        let mut acc = Surd::from_rational(Rational::one(), self.base);
        for _ in 0..exponent {
            acc = acc.mul(self).expect("same base");
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational) + rational_to_f64(&self.radical) * (self.base as f64).sqrt()
    }
}

fn rat(n: u64, d: u64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

fn validate_spike_dims(d_a: u64, d_b: u64) -> Result<()> {
    if d_a < 2 {
        return Err(Error::InvalidArgument(format!(
            "the spiked construction needs d_a >= 2, got {d_a}"
        )));
    }
    if d_b < d_a {
        return Err(Error::InvalidArgument(format!(
            "the spiked construction needs d_b >= d_a, got {d_a} > {d_b}"
        )));
    }
    Ok(())
}

/// Exact Schmidt spectrum of the spiked moment-matched state: the large
/// eigenvalue (multiplicity 1) and the small one (multiplicity `d_a - 1`),
/// both in `Q(sqrt((d_a + 1)(d_a d_b + 1)))`.
pub fn gap2_spectrum_exact(d_a: u64, d_b: u64) -> Result<(Surd, Surd)> {
    validate_spike_dims(d_a, d_b)?;
    let big_d = d_a * d_b + 1;
    let base = (d_a + 1) * big_d;
    let lambda1 = Surd::new(rat(1, d_a), rat(d_a - 1, d_a * big_d), base);
    let lambda2 = Surd::new(rat(1, d_a), -rat(1, d_a * big_d), base);
    Ok((lambda1, lambda2))
}

/// Exact `tr rho_A^alpha` of the spiked state:
/// `lambda1^alpha + (d_a - 1) lambda2^alpha`.
pub fn gap2_trace_power_exact(d_a: u64, d_b: u64, alpha: u32) -> Result<Surd> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("trace power needs order at least 1".into()));
    }
    let (lambda1, lambda2) = gap2_spectrum_exact(d_a, d_b)?;
    lambda1.pow(alpha).add(&lambda2.pow(alpha).scale(&rat(d_a - 1, 1)))
}

/// Exact marginal purity of the spiked state. The radical cancels, leaving
/// `(d_a + d_b) / (d_a d_b + 1)`, which is exactly the Haar average purity:
/// matching it is what makes the state's local unitary orbit a 2-design.
pub fn gap2_purity_exact(d_a: u64, d_b: u64) -> Result<Rational> {
    let purity = gap2_trace_power_exact(d_a, d_b, 2)?;
    debug_assert!(purity.is_rational(), "the radical cancels in the purity");
    Ok(purity.rational_part().clone())
}

/// The spiked state itself, in Schmidt-diagonal form on `C^d_a x C^d_b`.
pub fn gap2_design_state(d_a: u64, d_b: u64) -> Result<PureState> {
    let (lambda1, lambda2) = gap2_spectrum_exact(d_a, d_b)?;
    let (da, db) = (d_a as usize, d_b as usize);
    let mut amps = vec![Complex64::new(0.0, 0.0); da * db];
    amps[0] = Complex64::new(lambda1.to_f64().sqrt(), 0.0);
    let small = lambda2.to_f64().sqrt();
    for k in 1..da {
        amps[k * db + k] = Complex64::new(small, 0.0);
    }
    PureState::new(amps, &[da, db])
}

/// Upper bound on the Renyi entropy of the spiked state (hence on the
/// average over its moment-matching orbit), with the exact value for
/// comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct GapBound {
    pub alpha: u32,
    /// `(alpha / (2 (alpha - 1))) * (log2 d_a + log2 (d_b / d_a))` bits:
    /// roughly half the maximum for balanced splits.
    pub bound_bits: f64,
    /// `-log2(tr rho_A^alpha) / (alpha - 1)` from the exact trace power.
    pub exact_renyi_bits: f64,
}

/// The entropy ceiling of the spiked 2-design orbit for orders
/// `alpha >= 3`, where it separates from the near-maximal Haar values.
pub fn gap_renyi_upper_bound(d_a: u64, d_b: u64, alpha: u32) -> Result<GapBound> {
    if alpha < 3 {
        return Err(Error::InvalidArgument(format!(
            "the orbit entropy ceiling applies for alpha >= 3, got {alpha}"
        )));
    }
    let trace_power = gap2_trace_power_exact(d_a, d_b, alpha)?;
    let af = alpha as f64;
    let ratio = (d_b as f64) / (d_a as f64);
    let bound_bits = af / (2.0 * (af - 1.0)) * ((d_a as f64).log2() + ratio.log2());
    let exact_renyi_bits = -trace_power.to_f64().log2() / (af - 1.0);
    Ok(GapBound { alpha, bound_bits, exact_renyi_bits })
}

/// A finite set of equally weighted pure states with a shared
/// factorization.
#[derive(Clone, Debug)]
pub struct StateEnsemble {
    label: String,
    states: Vec<PureState>,
}

impl StateEnsemble {
    pub fn new(label: impl Into<String>, states: Vec<PureState>) -> Result<Self> {
        let label = label.into();
        let Some(first) = states.first() else {
            return Err(Error::InvalidEnsemble("an ensemble needs at least one state".into()));
        };
        let dims = first.dims().to_vec();
        if states.iter().any(|s| s.dims() != dims) {
            return Err(Error::InvalidEnsemble("all states must share one factorization".into()));
        }
        Ok(Self { label, states })
    }

    /// The orbit of a base state under a list of unitaries on the full
    /// space.
    pub fn orbit(
        label: impl Into<String>,
        base: &PureState,
        unitaries: &[UnitaryMatrix],
    ) -> Result<Self> {
        let states = unitaries
            .iter()
            .map(|u| base.apply(u))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, states)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Ensemble average of `tr rho_A^alpha` under the given bipartition.
    pub fn average_trace_power(&self, p: &StatePartition, alpha: u32) -> Result<f64> {
        let dims = [p.d_a as usize, p.d_b as usize];
        let mut total = 0.0;
        for state in &self.states {
            let rho = state.with_dims(&dims)?.reduced(&[0])?;
            total += trace_power(&rho, alpha)?;
        }
        Ok(total / self.states.len() as f64)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let file = StateEnsembleFile {
            schema_version: SCHEMA_VERSION,
            kind: STATE_KIND.into(),
            label: self.label.clone(),
            dims: self.states[0].dims().to_vec(),
            states: self
                .states
                .iter()
                .map(|s| s.amplitudes().iter().map(complex_to_pair).collect())
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: StateEnsembleFile = serde_json::from_str(text)?;
        if file.kind != STATE_KIND {
            return Err(Error::InvalidEnsemble(format!(
                "expected kind {STATE_KIND:?}, got {:?}",
                file.kind
            )));
        }
        let states = file
            .states
            .iter()
            .map(|amps| {
                let amps = amps.iter().map(pair_to_complex).collect::<Result<Vec<_>>>()?;
                PureState::new(amps, &file.dims)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.label, states)
    }
}

/// A finite set of equally weighted unitaries of one dimension.
#[derive(Clone, Debug)]
pub struct UnitaryEnsemble {
    label: String,
    unitaries: Vec<UnitaryMatrix>,
}

impl UnitaryEnsemble {
    pub fn new(label: impl Into<String>, unitaries: Vec<UnitaryMatrix>) -> Result<Self> {
        let label = label.into();
        let Some(first) = unitaries.first() else {
            return Err(Error::InvalidEnsemble("an ensemble needs at least one unitary".into()));
        };
        let dim = first.dim();
        if unitaries.iter().any(|u| u.dim() != dim) {
            return Err(Error::InvalidEnsemble("all unitaries must share one dimension".into()));
        }
        Ok(Self { label, unitaries })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn unitaries(&self) -> &[UnitaryMatrix] {
        &self.unitaries
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].dim()
    }

    /// Ensemble average of `tr rho_AC^alpha` over the Choi states.
    pub fn average_choi_trace_power(&self, spec: &ChoiPartitionSpec, alpha: u32) -> Result<f64> {
        let dims =
            [spec.d_a as usize, spec.d_b as usize, spec.d_c as usize, spec.d_d as usize];
        let mut total = 0.0;
        for u in &self.unitaries {
            let rho = choi_state(u)?.with_dims(&dims)?.reduced(&[0, 2])?;
            total += trace_power(&rho, alpha)?;
        }
        Ok(total / self.unitaries.len() as f64)
    }

    /// `t`-th frame potential `mean over pairs of |tr(U* V)|^(2t)`. Equal
    /// to the Haar value exactly when the ensemble is a unitary
    /// `t`-design, strictly above it otherwise.
    pub fn frame_potential(&self, t: u32) -> Result<f64> {
        if t == 0 {
            return Err(Error::InvalidArgument("frame potential needs order at least 1".into()));
        }
        let k = self.unitaries.len();
        let mut total = 0.0;
        for a in &self.unitaries {
            let a_dag = a.matrix().dagger();
            for b in &self.unitaries {
                let overlap = a_dag.mul(b.matrix()).trace().norm_sqr();
                total += overlap.powi(t as i32);
            }
        }
        Ok(total / (k * k) as f64)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let file = UnitaryEnsembleFile {
            schema_version: SCHEMA_VERSION,
            kind: UNITARY_KIND.into(),
            label: self.label.clone(),
            dim: self.dim(),
            unitaries: self
                .unitaries
                .iter()
                .map(|u| {
                    (0..u.dim())
                        .map(|i| (0..u.dim()).map(|j| complex_to_pair(&u.matrix().get(i, j))).collect())
                        .collect()
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: UnitaryEnsembleFile = serde_json::from_str(text)?;
        if file.kind != UNITARY_KIND {
            return Err(Error::InvalidEnsemble(format!(
                "expected kind {UNITARY_KIND:?}, got {:?}",
                file.kind
            )));
        }
        let unitaries = file
            .unitaries
            .iter()
            .map(|rows| {
                if rows.len() != file.dim || rows.iter().any(|r| r.len() != file.dim) {
                    return Err(Error::InvalidEnsemble(format!(
                        "unitary entries must form a {0}x{0} matrix",
                        file.dim
                    )));
                }
                let mut mat = CMatrix::zeros(file.dim, file.dim);
                for (i, row) in rows.iter().enumerate() {
                    for (j, pair) in row.iter().enumerate() {
                        mat.set(i, j, pair_to_complex(pair)?);
                    }
                }
                UnitaryMatrix::new(mat)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.label, unitaries)
    }
}

const SCHEMA_VERSION: u32 = 1;
const STATE_KIND: &str = "state_ensemble";
const UNITARY_KIND: &str = "unitary_ensemble";

/// A real number in an ensemble file: either a JSON number or an exact
/// rational written as `"p/q"` (or `"p"`).
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumOrRat {
    Num(f64),
    Rat(String),
}

fn complex_to_pair(z: &Complex64) -> [NumOrRat; 2] {
    [NumOrRat::Num(z.re), NumOrRat::Num(z.im)]
}

fn pair_to_complex(pair: &[NumOrRat; 2]) -> Result<Complex64> {
    Ok(Complex64::new(num_or_rat(&pair[0])?, num_or_rat(&pair[1])?))
}

fn num_or_rat(v: &NumOrRat) -> Result<f64> {
    match v {
        NumOrRat::Num(x) => Ok(*x),
        NumOrRat::Rat(s) => {
            let mut parts = s.splitn(2, '/');
            let numer: BigInt = parts
                .next()
                .unwrap_or("")
                .trim()
                .parse()
                .map_err(|_| Error::InvalidEnsemble(format!("bad rational literal {s:?}")))?;
            let denom: BigInt = match parts.next() {
                None => BigInt::one(),
                Some(d) => d
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidEnsemble(format!("bad rational literal {s:?}")))?,
            };
            if denom.is_zero() {
                return Err(Error::InvalidEnsemble(format!("zero denominator in {s:?}")));
            }
            Ok(rational_to_f64(&Rational::new(numer, denom)))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateEnsembleFile {
    schema_version: u32,
    kind: String,
    label: String,
    dims: Vec<usize>,
    states: Vec<Vec<[NumOrRat; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct UnitaryEnsembleFile {
    schema_version: u32,
    kind: String,
    label: String,
    dim: usize,
    unitaries: Vec<Vec<Vec<[NumOrRat; 2]>>>,
}

/// Removes the global phase: the first entry of largest modulus is made
/// real and positive, so matrices equal up to phase become equal.
pub fn canonical_phase(mat: &CMatrix) -> CMatrix {
    let mut best = 0usize;
    let mut best_norm = 0.0f64;
    for i in 0..mat.rows() {
        for j in 0..mat.cols() {
            let n = mat.get(i, j).norm();
            if n > best_norm + 1e-9 {
                best_norm = n;
                best = i * mat.cols() + j;
            }
        }
    }
    let pivot = mat.get(best / mat.cols(), best % mat.cols());
    let mut out = mat.clone();
    if best_norm > 0.0 {
        let phase = pivot.conj() / best_norm;
        out.add_assign_scaled(mat, phase - Complex64::new(1.0, 0.0));
    }
    out
}

fn quantized_key(mat: &CMatrix) -> Vec<(i64, i64)> {
    let scale = (1u64 << 20) as f64;
    let mut key = Vec::with_capacity(mat.rows() * mat.cols());
    for i in 0..mat.rows() {
        for j in 0..mat.cols() {
            let z = mat.get(i, j);
            key.push(((z.re * scale).round() as i64, (z.im * scale).round() as i64));
        }
    }
    key
}

/// The `n`-qubit Pauli operators (one representative per phase class),
/// `4^n` of them. A unitary 1-design but not a 2-design.
pub fn pauli_group(n: u32) -> Result<UnitaryEnsemble> {
    if n == 0 || n > PAULI_QUBIT_CAP {
        return Err(Error::InvalidArgument(format!(
            "pauli_group supports 1..={PAULI_QUBIT_CAP} qubits, got {n}"
        )));
    }
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let singles: [CMatrix; 4] = [
        CMatrix::identity(2),
        CMatrix::from_rows(&[vec![z, o], vec![o, z]])?,
        CMatrix::from_rows(&[vec![z, -i], vec![i, z]])?,
        CMatrix::from_rows(&[vec![o, z], vec![z, -o]])?,
    ];
    let mut mats: Vec<CMatrix> = vec![CMatrix::identity(1)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(mats.len() * 4);
        for m in &mats {
            for s in &singles {
                next.push(m.kron(s));
            }
        }
        mats = next;
    }
    UnitaryEnsemble::new(
        format!("pauli-{n}"),
        mats.into_iter().map(UnitaryMatrix::from_matrix_unchecked).collect(),
    )
}

/// The single-qubit Clifford group modulo phase: the 24 unitaries
/// generated by the Hadamard and phase gates. A unitary 3-design on
/// `C^2` but not a 4-design.
pub fn single_qubit_clifford() -> UnitaryEnsemble {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = CMatrix::from_rows(&[
        vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
    ])
    .expect("fixed shape");
    let phase = CMatrix::from_rows(&[
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)],
    ])
    .expect("fixed shape");
    let gens = [hadamard, phase];
    let mut seen = std::collections::HashSet::new();
    let mut elements = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let identity = canonical_phase(&CMatrix::identity(2));
    seen.insert(quantized_key(&identity));
    queue.push_back(identity.clone());
    elements.push(identity);
    while let Some(u) = queue.pop_front() {
        for g in &gens {
            let candidate = canonical_phase(&g.mul(&u));
            if seen.insert(quantized_key(&candidate)) {
                elements.push(candidate.clone());
                queue.push_back(candidate);
            }
        }
    }
    assert_eq!(elements.len(), 24, "the closure of H and S modulo phase has 24 elements");
    UnitaryEnsemble::new(
        "clifford-1",
        elements.into_iter().map(UnitaryMatrix::from_matrix_unchecked).collect(),
    )
    .expect("non-empty by construction")
}

/// Frame potential of the Haar measure itself: the number of pairs of
/// standard Young tableaux on `t` boxes with at most `d` rows, i.e.
/// `sum over partitions of t with <= d rows of (dim lambda)^2`. Equals
/// `t!` exactly when `t <= d`.
pub fn haar_frame_potential_exact(d: u64, t: u32) -> Result<Integer> {
    if t == 0 {
        return Err(Error::InvalidArgument("frame potential needs order at least 1".into()));
    }
    let mut total = Integer::zero();
    for lambda in IntegerPartition::partitions_of(t) {
        if lambda.rows() as u64 <= d {
            let dim = sym_irrep_dim(&lambda);
            total += &dim * &dim;
        }
    }
    Ok(total)
}

/// Monte Carlo check of the Haar frame potential: averages
/// `|tr(U* V)|^(2t)` over independent Haar pairs.
pub fn mc_frame_potential(d: usize, t: u32, n: u64, seed: u64) -> Result<McEstimate> {
    if t == 0 {
        return Err(Error::InvalidArgument("frame potential needs order at least 1".into()));
    }
    mc_average(n, seed, &|rng: &mut ChaCha8Rng| {
        let u = sample_haar_unitary(rng, d);
        let v = sample_haar_unitary(rng, d);
        let overlap = u.matrix().dagger().mul(v.matrix()).trace().norm_sqr();
        Ok(overlap.powi(t as i32))
    })
}

/// Trace-norm distance between the scaled order-`alpha` frame operator of
/// the ensemble and the symmetric-subspace projector:
/// `|| binom(d + alpha - 1, alpha) * mean of (psi psi*)^(x alpha) - P_sym ||_1`.
/// Zero exactly when the ensemble is a state `alpha`-design.
pub fn frame_operator_distance(ensemble: &StateEnsemble, alpha: u32) -> Result<f64> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("design order must be at least 1".into()));
    }
    let d = ensemble.dim();
    let n = d
        .checked_pow(alpha)
        .filter(|&n| n <= FRAME_DIM_CAP)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "frame operator dimension {d}^{alpha} exceeds the cap {FRAME_DIM_CAP}"
            ))
        })?;
    let elems = enumerate_group(alpha)?;
    let mut p_sym = CMatrix::zeros(n, n);
    for sigma in &elems {
        p_sym.add_assign_scaled(
            UnitaryMatrix::factor_permutation(d, sigma).matrix(),
            Complex64::new(1.0, 0.0),
        );
    }
    let order = crate::moments::rational_to_f64(&Rational::from_integer(factorial(alpha)));
    p_sym.scale(1.0 / order);

    let mut frame = CMatrix::zeros(n, n);
    for state in ensemble.states() {
        // Tensor power of the amplitude vector, then a rank-1 update.
        let mut power = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..alpha {
            let mut next = Vec::with_capacity(power.len() * d);
            for a in &power {
                for b in state.amplitudes() {
                    next.push(a * b);
                }
            }
            power = next;
        }
        for (r, zr) in power.iter().enumerate() {
            if zr.norm_sqr() == 0.0 {
                continue;
            }
            for (c, zc) in power.iter().enumerate() {
                let v = frame.get(r, c) + zr * zc.conj();
                frame.set(r, c, v);
            }
        }
    }
    let sym_dim = num::integer::binomial(
        Integer::from(d as u64 + alpha as u64 - 1),
        Integer::from(alpha as u64),
    );
    frame.scale(rational_to_f64(&Rational::from_integer(sym_dim)) / ensemble.len() as f64);
    trace_norm_hermitian(&frame.sub(&p_sym))
}

/// Absolute deviation of the ensemble-averaged `tr rho_A^alpha` from the
/// exact Haar value. A necessary design condition only: the average
/// depends just on the Schmidt spectra of the members, so it can vanish
/// for ensembles that are far from designs.
pub fn moment_deviation(ensemble: &StateEnsemble, p: &StatePartition, alpha: u32) -> Result<f64> {
    let exact = rational_to_f64(&haar_state_moment(p, alpha)?.value);
    Ok((ensemble.average_trace_power(p, alpha)? - exact).abs())
}

/// Absolute deviation of the ensemble-averaged Choi-state moment from the
/// exact Haar-unitary value. Necessary, not sufficient, like
/// [`moment_deviation`].
pub fn unitary_moment_deviation(
    ensemble: &UnitaryEnsemble,
    spec: &ChoiPartitionSpec,
    alpha: u32,
) -> Result<f64> {
    let exact = rational_to_f64(&haar_choi_moment(spec, alpha)?.value);
    Ok((ensemble.average_choi_trace_power(spec, alpha)? - exact).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::von_neumann_entropy;

    fn irat(n: i64, d: i64) -> Rational {
        Rational::new(Integer::from(n), Integer::from(d))
    }

    #[test]
    fn surd_arithmetic() {
        let x = Surd::new(irat(1, 1), irat(1, 1), 2);
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq.rational_part(), &irat(3, 1));
        assert_eq!(sq.radical_part(), &irat(2, 1));
        assert_eq!(x.pow(2), sq);
        assert!((x.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        let other_base = Surd::new(irat(1, 1), irat(1, 1), 3);
        assert!(x.add(&other_base).is_err());
        let diff = sq.sub(&x).unwrap();
        assert_eq!(diff.rational_part(), &irat(2, 1));
        assert!(!diff.is_rational());
    }

    #[test]
    fn spike_spectrum_traces_to_one() {
        for (da, db) in [(2, 2), (3, 3), (3, 7), (4, 5)] {
            let (l1, l2) = gap2_spectrum_exact(da, db).unwrap();
            let total = l1.add(&l2.scale(&irat(da as i64 - 1, 1))).unwrap();
            assert!(total.is_rational());
            assert_eq!(total.rational_part(), &irat(1, 1));
            assert!(l1.to_f64() > l2.to_f64());
            assert!(l2.to_f64() > 0.0);
        }
    }

    #[test]
    fn spike_purity_matches_haar_average_exactly() {
        for (da, db) in [(2, 2), (3, 3), (3, 7), (5, 6)] {
            let purity = gap2_purity_exact(da, db).unwrap();
            assert_eq!(purity, irat((da + db) as i64, (da * db + 1) as i64));
            let p = StatePartition::new(da, db).unwrap();
            assert_eq!(purity, haar_state_moment(&p, 2).unwrap().value);
        }
    }

    #[test]
    fn spike_dimension_requirements() {
        assert!(gap2_spectrum_exact(1, 5).is_err());
        assert!(gap2_spectrum_exact(3, 2).is_err());
    }

    #[test]
    fn spike_third_moment_on_qubits_is_forced() {
        // For d_a = 2 the trace cubed is a polynomial in the purity, so
        // matching second moments forces the Haar third moment too.
        let t3 = gap2_trace_power_exact(2, 2, 3).unwrap();
        assert!(t3.is_rational());
        assert_eq!(t3.rational_part(), &irat(7, 10));
        // Not so for d_a = 3: the radical survives.
        let t3 = gap2_trace_power_exact(3, 3, 3).unwrap();
        assert!(!t3.is_rational());
        assert_eq!(t3.rational_part(), &irat(10200, 27000));
        assert_eq!(t3.radical_part(), &irat(240, 27000));
        assert!((t3.to_f64() - 0.4339960472918823).abs() < 1e-12);
    }

    #[test]
    fn spike_state_realizes_the_exact_spectrum() {
        for (da, db) in [(2, 2), (3, 4)] {
            let psi = gap2_design_state(da, db).unwrap();
            let rho = psi.reduced(&[0]).unwrap();
            for alpha in 2..=4u32 {
                let exact = gap2_trace_power_exact(da, db, alpha).unwrap().to_f64();
                let numeric = trace_power(&rho, alpha).unwrap();
                assert!((numeric - exact).abs() < 1e-12, "({da},{db}) alpha={alpha}");
            }
        }
    }

    #[test]
    fn spike_entropy_ceiling_holds_and_deficit_grows() {
        let b22 = gap_renyi_upper_bound(2, 2, 3).unwrap();
        let b33 = gap_renyi_upper_bound(3, 3, 3).unwrap();
        assert!(b22.exact_renyi_bits <= b22.bound_bits + 1e-12);
        assert!(b33.exact_renyi_bits <= b33.bound_bits + 1e-12);
        let deficit2 = 1.0 - b22.exact_renyi_bits;
        let deficit3 = 3f64.log2() - b33.exact_renyi_bits;
        assert!((deficit2 - 0.742713).abs() < 1e-5);
        assert!((deficit3 - 0.982839).abs() < 1e-5);
        assert!(deficit3 > deficit2);
        assert!(gap_renyi_upper_bound(2, 2, 2).is_err());
    }

    #[test]
    fn pauli_group_sizes_and_design_orders() {
        let p1 = pauli_group(1).unwrap();
        assert_eq!(p1.len(), 4);
        assert_eq!(pauli_group(2).unwrap().len(), 16);
        assert!(pauli_group(0).is_err());
        assert!(pauli_group(PAULI_QUBIT_CAP + 1).is_err());
        // Unitary 1-design: F_1 matches Haar. Not a 2-design: F_2 = 4 > 2.
        assert!((p1.frame_potential(1).unwrap() - 1.0).abs() < 1e-12);
        assert!((p1.frame_potential(2).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_matrices_are_unitary() {
        for u in pauli_group(2).unwrap().unitaries() {
            assert!(UnitaryMatrix::new(u.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn clifford_group_has_24_elements_and_is_a_3_design() {
        let cl = single_qubit_clifford();
        assert_eq!(cl.len(), 24);
        for u in cl.unitaries() {
            assert!(UnitaryMatrix::new(u.matrix().clone()).is_ok());
        }
        let haar: Vec<f64> = (1..=4)
            .map(|t| rational_to_f64(&Rational::from_integer(haar_frame_potential_exact(2, t).unwrap())))
            .collect();
        assert_eq!(haar, vec![1.0, 2.0, 5.0, 14.0]);
        assert!((cl.frame_potential(1).unwrap() - 1.0).abs() < 1e-9);
        assert!((cl.frame_potential(2).unwrap() - 2.0).abs() < 1e-9);
        assert!((cl.frame_potential(3).unwrap() - 5.0).abs() < 1e-9);
        let f4 = cl.frame_potential(4).unwrap();
        assert!((f4 - 15.0).abs() < 1e-9, "F_4 = {f4}");
        assert!(f4 > 14.0 + 0.5);
    }

    #[test]
    fn haar_frame_potential_is_factorial_below_the_dimension() {
        assert_eq!(haar_frame_potential_exact(3, 3).unwrap(), Integer::from(6));
        assert_eq!(haar_frame_potential_exact(4, 3).unwrap(), Integer::from(6));
        assert_eq!(haar_frame_potential_exact(2, 4).unwrap(), Integer::from(14));
        assert_eq!(haar_frame_potential_exact(3, 4).unwrap(), Integer::from(23));
        assert!(haar_frame_potential_exact(2, 0).is_err());
    }

    #[test]
    fn canonical_phase_identifies_phase_classes() {
        let cl = single_qubit_clifford();
        let u = cl.unitaries()[7].matrix().clone();
        let mut rotated = u.clone();
        let phase = Complex64::from_polar(1.0, 1.234);
        rotated.add_assign_scaled(&u, phase - Complex64::new(1.0, 0.0));
        let a = canonical_phase(&u);
        let b = canonical_phase(&rotated);
        assert!(a.sub(&b).frobenius_norm() < 1e-9);
    }

    #[test]
    fn frame_operator_distance_of_a_single_state() {
        // One fixed state at order 1: the scaled frame operator is
        // d |psi><psi| against the identity, at trace distance 2(d - 1).
        for d in [2usize, 3, 5] {
            let mut amps = vec![Complex64::new(0.0, 0.0); d];
            amps[0] = Complex64::new(1.0, 0.0);
            let ensemble =
                StateEnsemble::new("point", vec![PureState::from_amplitudes(amps).unwrap()])
                    .unwrap();
            let distance = frame_operator_distance(&ensemble, 1).unwrap();
            assert!((distance - 2.0 * (d as f64 - 1.0)).abs() < 1e-9, "d = {d}");
        }
    }

    #[test]
    fn stabilizer_states_are_a_3_design_but_not_a_4_design() {
        let zero = PureState::from_amplitudes(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let orbit = StateEnsemble::orbit("stabilizer", &zero, single_qubit_clifford().unitaries())
            .unwrap();
        assert_eq!(orbit.len(), 24);
        assert!(frame_operator_distance(&orbit, 1).unwrap() < 1e-9);
        assert!(frame_operator_distance(&orbit, 2).unwrap() < 1e-9);
        assert!(frame_operator_distance(&orbit, 3).unwrap() < 1e-9);
        assert!(frame_operator_distance(&orbit, 4).unwrap() > 1e-3);
    }

    #[test]
    fn frame_operator_distance_caps_dimension() {
        let mut amps = vec![Complex64::new(0.0, 0.0); 16];
        amps[0] = Complex64::new(1.0, 0.0);
        let ensemble =
            StateEnsemble::new("big", vec![PureState::from_amplitudes(amps).unwrap()]).unwrap();
        assert!(frame_operator_distance(&ensemble, 4).is_err());
    }

    #[test]
    fn basis_orbit_moment_deviation() {
        let zero = PureState::new(
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
            &[2, 2],
        )
        .unwrap();
        let x = UnitaryMatrix::new(
            CMatrix::from_rows(&[
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let id = UnitaryMatrix::identity(2);
        let us = vec![
            id.kron(&id),
            id.kron(&x),
            x.kron(&id),
            x.kron(&x),
        ];
        let orbit = StateEnsemble::orbit("basis", &zero, &us).unwrap();
        let p = StatePartition::new(2, 2).unwrap();
        // Product states have unit marginal purity; Haar average is 4/5.
        let dev = moment_deviation(&orbit, &p, 2).unwrap();
        assert!((dev - 0.2).abs() < 1e-12);
        assert!(moment_deviation(&orbit, &p, 1).unwrap() < 1e-15);
    }

    #[test]
    fn pauli_channel_choi_moment_deviation() {
        // Pauli conjugation is only a unitary 1-design, and its Choi
        // marginals are maximally mixed basis-like states; the order-2
        // deviation from the Haar-unitary value 2/5 is visible.
        let spec = ChoiPartitionSpec::new(2, 2, 2, 2).unwrap();
        let p1 = pauli_group(2).unwrap();
        let dev1 = unitary_moment_deviation(&p1, &spec, 1).unwrap();
        assert!(dev1 < 1e-12);
        let dev2 = unitary_moment_deviation(&p1, &spec, 2).unwrap();
        assert!(dev2 > 0.05, "deviation {dev2}");
    }

    #[test]
    fn state_ensemble_json_round_trip() {
        let zero = PureState::from_amplitudes(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let plus = PureState::from_amplitudes(vec![
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        ])
        .unwrap();
        let ensemble = StateEnsemble::new("pair", vec![zero, plus]).unwrap();
        let text = ensemble.to_json_string().unwrap();
        let parsed = StateEnsemble::from_json_str(&text).unwrap();
        assert_eq!(parsed.label(), "pair");
        assert_eq!(parsed.len(), 2);
        for (a, b) in ensemble.states().iter().zip(parsed.states()) {
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn unitary_ensemble_json_round_trip_and_rational_literals() {
        let ensemble = pauli_group(1).unwrap();
        let text = ensemble.to_json_string().unwrap();
        let parsed = UnitaryEnsemble::from_json_str(&text).unwrap();
        assert_eq!(parsed.len(), 4);
        for (a, b) in ensemble.unitaries().iter().zip(parsed.unitaries()) {
            assert!(a.matrix().sub(b.matrix()).frobenius_norm() < 1e-15);
        }

        let rational = r#"{
            "schema_version": 1,
            "kind": "state_ensemble",
            "label": "exact",
            "dims": [2],
            "states": [[["3/5", 0], ["4/5", "0/7"]]]
        }"#;
        let parsed = StateEnsemble::from_json_str(rational).unwrap();
        assert!((parsed.states()[0].amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!((parsed.states()[0].amplitudes()[1].re - 0.8).abs() < 1e-15);

        let bad_kind = rational.replace("state_ensemble", "unitary_ensemble");
        assert!(StateEnsemble::from_json_str(&bad_kind).is_err());
        let bad_rat = rational.replace("3/5", "3/0");
        assert!(StateEnsemble::from_json_str(&bad_rat).is_err());
    }

    #[test]
    fn ensemble_validation() {
        assert!(StateEnsemble::new("empty", vec![]).is_err());
        let a = PureState::from_amplitudes(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let b = PureState::from_amplitudes(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert!(StateEnsemble::new("mixed-dims", vec![a, b]).is_err());
        assert!(UnitaryEnsemble::new("empty", vec![]).is_err());
    }

    #[test]
    fn spike_von_neumann_stays_below_maximal() {
        let psi = gap2_design_state(3, 3).unwrap();
        let vn = von_neumann_entropy(&psi.reduced(&[0]).unwrap()).unwrap();
        assert!(vn < 3f64.log2());
        assert!(vn > 0.0);
    }
}
