//! Exact Haar-averaged trace powers and the entropy bounds they certify.
//!
//! For a bipartite pure state drawn from the Haar measure the average of
//! `tr rho_A^alpha` is a sum of `alpha!` integer terms divided by the
//! symmetric-subspace dimension; for the Choi state of a Haar unitary it is
//! a Weingarten double sum. Both are evaluated in exact rational arithmetic.
//! By Jensen's inequality, `(1/(1-alpha)) log2` of the exact moment lower
//! bounds the average Renyi-alpha entropy of any exact alpha-design, which
//! is what [`design_renyi_lower_bound`] reports. The [`theorem_bound`]
//! calculators evaluate the companion closed-form bounds (asymptotic
//! Catalan floors, finite-size corrections, and the min-entropy variants).

use crate::permgroup::{enumerate_group, factorial, Permutation};
use crate::weingarten::WeingartenTable;
use crate::{Error, Integer, Rational, Result};
use num::integer::binomial;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Bipartition of a pure-state Hilbert space, `A` of dimension `d_a` kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatePartition {
    pub d_a: u64,
    pub d_b: u64,
}

impl StatePartition {
    pub fn new(d_a: u64, d_b: u64) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidArgument("subsystem dimensions must be at least 1".into()));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn total(&self) -> u64 {
        self.d_a * self.d_b
    }
}

/// Four-way split of a Choi state: `A x B` is the input register, `C x D`
/// the output register, and the (A, C) marginal is the one whose moments
/// are computed. Requires `d_a * d_b == d_c * d_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiPartitionSpec {
    pub d_a: u64,
    pub d_b: u64,
    pub d_c: u64,
    pub d_d: u64,
}

impl ChoiPartitionSpec {
    pub fn new(d_a: u64, d_b: u64, d_c: u64, d_d: u64) -> Result<Self> {
        if d_a == 0 || d_b == 0 || d_c == 0 || d_d == 0 {
            return Err(Error::InvalidArgument("subsystem dimensions must be at least 1".into()));
        }
        if d_a * d_b != d_c * d_d {
            return Err(Error::DimensionMismatch(format!(
                "input split {d_a}x{d_b} and output split {d_c}x{d_d} disagree on the total dimension"
            )));
        }
        Ok(Self { d_a, d_b, d_c, d_d })
    }

    /// Total channel dimension `d = d_a d_b = d_c d_d`.
    pub fn total(&self) -> u64 {
        self.d_a * self.d_b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MomentContext {
    State(StatePartition),
    Choi(ChoiPartitionSpec),
}

/// An exact averaged trace power together with what it averaged over.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentResult {
    pub value: Rational,
    pub alpha: u32,
    pub context: MomentContext,
}

/// Largest order accepted by the Choi moment double sum (`(6!)^2` terms).
pub const CHOI_ALPHA_CAP: u32 = 6;

/// Catalan number `C(2n, n) / (n + 1)`.
pub fn catalan(alpha: u32) -> Integer {
    binomial(Integer::from(2 * alpha as u64), Integer::from(alpha as u64))
        / Integer::from(alpha as u64 + 1)
}

/// Dimension of the symmetric subspace of `alpha` copies of `C^d`.
fn symmetric_subspace_dim(d: u64, alpha: u32) -> Integer {
    binomial(Integer::from(d + alpha as u64 - 1), Integer::from(alpha as u64))
}

/// Exact Haar average of `tr rho_A^alpha` over pure states on `A x B`:
/// a sum over `S_alpha` of `d_A^cycles(s t) d_B^cycles(s)` with `t` the
/// canonical full cycle, normalized by `alpha!` times the symmetric-subspace
/// dimension of the total space.
pub fn haar_state_moment(p: &StatePartition, alpha: u32) -> Result<MomentResult> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    let tau = Permutation::full_cycle(alpha as usize);
    let apow: Vec<Integer> = (0..=alpha).map(|k| Integer::from(p.d_a).pow(k)).collect();
    let bpow: Vec<Integer> = (0..=alpha).map(|k| Integer::from(p.d_b).pow(k)).collect();
    let mut sum = Integer::zero();
    for sigma in enumerate_group(alpha)? {
        let xa = sigma.compose(&tau).cycle_count() as usize;
        let xb = sigma.cycle_count() as usize;
        sum += &apow[xa] * &bpow[xb];
    }
    let denom = factorial(alpha) * symmetric_subspace_dim(p.total(), alpha);
    let value = Rational::new(sum, denom);
    debug_assert!(value > Rational::zero() && value <= Rational::one());
    Ok(MomentResult { value, alpha, context: MomentContext::State(*p) })
}

/// Exact Haar average of `tr rho_AC^alpha` over Choi states of Haar
/// unitaries: the Weingarten double sum
/// `(1/d^alpha) sum over (s, g) of d_A^cycles(s t) d_B^cycles(s)
/// d_C^cycles(g t) d_D^cycles(g) Wg(d, s g^-1)`.
pub fn haar_choi_moment(p: &ChoiPartitionSpec, alpha: u32) -> Result<MomentResult> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("moment order must be at least 1".into()));
    }
    if alpha > CHOI_ALPHA_CAP {
        return Err(Error::InvalidArgument(format!(
            "Choi moment order {alpha} above the cap {CHOI_ALPHA_CAP} ({} summands)",
            (factorial(alpha) * factorial(alpha))
        )));
    }
    let d = p.total();
    if d < alpha as u64 {
        return Err(Error::Regime(format!(
            "total dimension {d} below order {alpha}: the Weingarten inverse does not exist"
        )));
    }
    let table = WeingartenTable::new(d, alpha)?;
    let elems = enumerate_group(alpha)?;
    let tau = Permutation::full_cycle(alpha as usize);

    let pow = |base: u64| -> Vec<Integer> {
        (0..=alpha).map(|k| Integer::from(base).pow(k)).collect()
    };
    let (apow, bpow, cpow, dpow) = (pow(p.d_a), pow(p.d_b), pow(p.d_c), pow(p.d_d));
    let f: Vec<Integer> = elems
        .iter()
        .map(|s| {
            &apow[s.compose(&tau).cycle_count() as usize] * &bpow[s.cycle_count() as usize]
        })
        .collect();
    let g: Vec<Integer> = elems
        .iter()
        .map(|s| {
            &cpow[s.compose(&tau).cycle_count() as usize] * &dpow[s.cycle_count() as usize]
        })
        .collect();

    // Group the double sum by the cycle type of s g^-1; the Weingarten
    // factor only depends on it.
    let classes = crate::permgroup::IntegerPartition::partitions_of(alpha);
    let class_index: std::collections::BTreeMap<_, _> =
        classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let inverses: Vec<Permutation> = elems.iter().map(|e| e.inverse()).collect();
    let mut weights = vec![Integer::zero(); classes.len()];
    for (i, si) in elems.iter().enumerate() {
        for (j, inv_j) in inverses.iter().enumerate() {
            let idx = class_index[&si.compose(inv_j).cycle_type()];
            weights[idx] += &f[i] * &g[j];
        }
    }

    let mut total = Rational::zero();
    for (idx, class) in classes.iter().enumerate() {
        total += table.value(class)? * Rational::from_integer(weights[idx].clone());
    }
    let value = total / Rational::from_integer(Integer::from(d).pow(alpha));
    debug_assert!(value > Rational::zero() && value <= Rational::one());
    Ok(MomentResult { value, alpha, context: MomentContext::Choi(*p) })
}

/// Leading-order value of the equal-split state moment:
/// `Catalan(alpha) * d_a^-(alpha-1)`, with an `O(d_a^-(alpha+1))` error.
pub fn state_moment_asymptotic(d_a: u64, alpha: u32) -> f64 {
    let cat = catalan(alpha).to_f64().expect("Catalan numbers of supported orders fit in f64");
    cat * (d_a as f64).powi(-((alpha as i32) - 1))
}

/// Jensen lower bound, in bits, on the average Renyi-alpha entropy of any
/// exact alpha-design: `(1/(1-alpha)) log2(moment)`. Needs `alpha >= 2`.
pub fn design_renyi_lower_bound(moment: &MomentResult) -> Result<f64> {
    if moment.alpha < 2 {
        return Err(Error::InvalidArgument(
            "the Jensen bound needs a moment of order at least 2".into(),
        ));
    }
    Ok(-log2_rational(&moment.value)? / (moment.alpha as f64 - 1.0))
}

/// Base-2 logarithm of a positive rational, accurate to well under one part
/// in `2^50`: each of numerator and denominator is reduced to its top 64
/// bits before the float log, so the only error is that truncation plus the
/// rounding of `f64::log2`.
pub fn log2_rational(r: &Rational) -> Result<f64> {
    if r <= &Rational::zero() {
        return Err(Error::InvalidArgument("log2 of a non-positive rational".into()));
    }
    Ok(log2_integer(r.numer()) - log2_integer(r.denom()))
}

pub(crate) fn log2_integer(n: &Integer) -> f64 {
    debug_assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().expect("fits").log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value fits");
    top.log2() + shift as f64
}

/// Nearest-enough `f64` for an arbitrary rational (used only for display
/// and Monte Carlo comparison columns; exact values stay rational).
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let negative = r.is_negative();
    let n = r.numer().abs();
    let d = r.denom().clone();
    // Scale the quotient to ~63 significant bits, divide exactly, then
    // apply the power of two in halves to dodge powi overflow.
    let shift = (d.bits() as i64 + 63) - n.bits() as i64;
    let q = if shift >= 0 { (n << shift as u64) / d } else { n / (d << (-shift) as u64) };
    let mut x = q.to_f64().expect("quotient limited to ~64 bits");
    let mut e = -shift;
    while e > 600 {
        x *= 2f64.powi(600);
        e -= 600;
    }
    while e < -600 {
        x *= 2f64.powi(-600);
        e += 600;
    }
    x *= 2f64.powi(e as i32);
    if negative {
        -x
    } else {
        x
    }
}

/// Identifiers of the closed-form bound calculators. T1-T3 bound state
/// entropies, T4-T6 the Choi-state entropies of unitary channels; T3 and T6
/// are the min-entropy variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremId {
    T1,
    T2a,
    T2b,
    T3,
    T4,
    T5,
    T6,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] =
        [Self::T1, Self::T2a, Self::T2b, Self::T3, Self::T4, Self::T5, Self::T6];
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::T1 => "T1",
            Self::T2a => "T2a",
            Self::T2b => "T2b",
            Self::T3 => "T3",
            Self::T4 => "T4",
            Self::T5 => "T5",
            Self::T6 => "T6",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(Self::T1),
            "t2a" => Ok(Self::T2a),
            "t2b" => Ok(Self::T2b),
            "t3" => Ok(Self::T3),
            "t4" => Ok(Self::T4),
            "t5" => Ok(Self::T5),
            "t6" => Ok(Self::T6),
            other => Err(Error::InvalidArgument(format!("unknown bound id {other:?}"))),
        }
    }
}

/// Inputs for [`theorem_bound`]; each calculator reads the fields it needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Kept-side dimension (states) or input-side `A` dimension (channels).
    pub d_a: Option<u64>,
    /// Traced-side dimension; also the scale entering the `q` correction.
    pub d_b: Option<u64>,
    /// Total channel dimension for the Choi-state bounds.
    pub d_total: Option<u64>,
    pub alpha: Option<u32>,
    /// Ratio parameter of the min-entropy bounds (`alpha ~ log2(dim)/a`).
    pub a: Option<f64>,
    /// Complex Haar ensemble if true (the default), real orthogonal if false.
    pub complex_field: bool,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self { d_a: None, d_b: None, d_total: None, alpha: None, a: None, complex_field: true }
    }
}

/// A closed-form bound evaluation: the bound in bits, whether the
/// hypotheses hold at these parameters, and a one-line account of the
/// constraints that were checked or assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub bound_bits: f64,
    pub valid: bool,
    pub constraint_report: String,
}

fn need(field: Option<u64>, name: &str) -> Result<u64> {
    field.ok_or_else(|| Error::InvalidArgument(format!("bound needs parameter {name}")))
}

fn need_alpha_ge2(params: &BoundParams) -> Result<u32> {
    match params.alpha {
        Some(a) if a >= 2 => Ok(a),
        Some(a) => Err(Error::InvalidArgument(format!("bound needs alpha >= 2, got {a}"))),
        None => Err(Error::InvalidArgument("bound needs parameter alpha".into())),
    }
}

fn log2_catalan_per_order(alpha: u32) -> f64 {
    log2_integer(&catalan(alpha)) / (alpha as f64 - 1.0)
}

/// `h(q) = 1 + 2q / (3(1-q))`, the finite-size correction factor; only
/// meaningful for `q < 1`.
fn h_correction(q: f64) -> f64 {
    1.0 + 2.0 * q / (3.0 * (1.0 - q))
}

/// Evaluates one of the closed-form lower bounds on design-averaged
/// entropies. Hypothesis violations yield `valid = false` (with the bound
/// still evaluated where the formula makes sense); missing or structurally
/// unusable parameters are errors.
pub fn theorem_bound(id: TheoremId, params: &BoundParams) -> Result<BoundReport> {
    match id {
        TheoremId::T1 => {
            let d_a = need(params.d_a, "d_a")?;
            let alpha = need_alpha_ge2(params)?;
            let mut valid = true;
            let mut notes = vec![
                "asymptotic: O(d_a^-2) correction omitted".to_string(),
                "equal split d_b = d_a assumed".to_string(),
            ];
            if let Some(d_b) = params.d_b {
                if d_b != d_a {
                    valid = false;
                    notes.push(format!("requires d_b = d_a, got d_b = {d_b}"));
                }
            }
            let bound = (d_a as f64).log2() - log2_catalan_per_order(alpha);
            Ok(BoundReport { bound_bits: bound, valid, constraint_report: notes.join("; ") })
        }
        TheoremId::T2a => {
            let d_a = need(params.d_a, "d_a")?;
            let d_b = need(params.d_b, "d_b")?;
            let alpha = need_alpha_ge2(params)?;
            let q = (alpha as f64).powi(3) / (32.0 * (d_b as f64) * (d_b as f64));
            let mut valid = true;
            let mut notes = vec![format!("q = alpha^3/(32 d_b^2) = {q:.6e}")];
            if q >= 1.0 {
                valid = false;
                notes.push("requires q < 1".into());
            }
            if d_a > d_b {
                valid = false;
                notes.push(format!("requires d_a <= d_b, got {d_a} > {d_b}"));
            }
            let bound_bits = if q < 1.0 {
                let af = alpha as f64;
                let numerator = 2.0 * af - 1.5 * af.log2() + h_correction(q).log2()
                    - 0.5 * std::f64::consts::PI.log2();
                (d_a as f64).log2() - numerator / (af - 1.0)
            } else {
                f64::NAN
            };
            Ok(BoundReport { bound_bits, valid, constraint_report: notes.join("; ") })
        }
        TheoremId::T2b => {
            let d_a = need(params.d_a, "d_a")?;
            let d_b = need(params.d_b, "d_b")?;
            let c: f64 = if params.complex_field { 2.0 } else { 1.0 };
            let mut valid = true;
            let mut notes =
                vec![format!("field constant c = {c} ({})", if params.complex_field { "complex" } else { "real" })];
            if d_a > d_b {
                valid = false;
                notes.push(format!("requires d_a <= d_b, got {d_a} > {d_b}"));
            }
            notes.push("alpha-independent; holds for every design order >= 2".into());
            let ratio = (d_a as f64) / (d_b as f64);
            let bound_bits =
                (d_a as f64).log2() - 2.0 * (1.0 + ratio.sqrt()).log2() - c.log2();
            Ok(BoundReport { bound_bits, valid, constraint_report: notes.join("; ") })
        }
        TheoremId::T3 => {
            let d_a = need(params.d_a, "d_a")?;
            let d_b = need(params.d_b, "d_b")?;
            let a = params
                .a
                .ok_or_else(|| Error::InvalidArgument("bound needs parameter a".into()))?;
            if a <= 0.0 {
                return Err(Error::InvalidArgument(format!("parameter a must be positive, got {a}")));
            }
            let alpha_eff = ((d_a as f64).log2() / a).ceil().max(1.0) as u128;
            let mut valid = true;
            let mut notes = vec![format!("effective order alpha = ceil(log2(d_a)/a) = {alpha_eff}")];
            if a > 1.0 {
                valid = false;
                notes.push(format!("requires a <= 1, got {a}"));
            }
            // alpha <= (16 d_b^2)^(1/3)  <=>  alpha^3 <= 16 d_b^2, checked exactly.
            let rhs = 16u128 * (d_b as u128) * (d_b as u128);
            if alpha_eff.pow(3) > rhs {
                valid = false;
                notes.push(format!("requires alpha^3 <= 16 d_b^2 = {rhs}, got alpha = {alpha_eff}"));
            }
            let bound_bits = (d_a as f64).log2() - 2.0 - a;
            Ok(BoundReport { bound_bits, valid, constraint_report: notes.join("; ") })
        }
        TheoremId::T4 => {
            let d = total_dim(params)?;
            let alpha = need_alpha_ge2(params)?;
            let bound = (d as f64).log2() - log2_catalan_per_order(alpha);
            Ok(BoundReport {
                bound_bits: bound,
                valid: true,
                constraint_report:
                    "asymptotic: O(d^-2) correction omitted; equal four-way split assumed".into(),
            })
        }
        TheoremId::T5 => {
            let d = total_dim(params)?;
            let d_b = need(params.d_b, "d_b")?;
            let alpha = need_alpha_ge2(params)?;
            let af = alpha as f64;
            let df = d as f64;
            let mut valid = true;
            let mut notes =
                vec!["q evaluated with the bipartite convention q = alpha^3/(32 d_b^2)".to_string()];
            // d > sqrt(6) alpha^(7/4)  <=>  d^4 > 36 alpha^7, checked exactly.
            let lhs = (d as u128).pow(4);
            let rhs = 36u128 * (alpha as u128).pow(7);
            if lhs <= rhs {
                valid = false;
                notes.push(format!("requires d^4 > 36 alpha^7 ({lhs} <= {rhs})"));
            }
            let q = af.powi(3) / (32.0 * (d_b as f64) * (d_b as f64));
            notes.push(format!("q = {q:.6e}"));
            if q >= 1.0 {
                valid = false;
                notes.push("requires q < 1".into());
            }
            let bound_bits = if valid {
                let a_alpha = 1.0 / (1.0 - 6.0 * af.powf(3.5) / (df * df));
                let correction =
                    a_alpha * h_correction(q) * (7.0 + (2.0 * af * (af - 1.0) / df).cosh()) / 8.0;
                df.log2() - log2_catalan_per_order(alpha) - correction.log2() / (af - 1.0)
            } else {
                f64::NAN
            };
            Ok(BoundReport { bound_bits, valid, constraint_report: notes.join("; ") })
        }
        TheoremId::T6 => {
            let d = total_dim(params)?;
            let a = params
                .a
                .ok_or_else(|| Error::InvalidArgument("bound needs parameter a".into()))?;
            if a <= 0.0 {
                return Err(Error::InvalidArgument(format!("parameter a must be positive, got {a}")));
            }
            let alpha_eff = ((d as f64).log2() / a).ceil().max(1.0) as u128;
            let mut valid = true;
            let mut notes = vec![format!("effective order alpha = ceil(log2(d)/a) = {alpha_eff}")];
            // alpha <= sqrt(d)/2  <=>  4 alpha^2 <= d, checked exactly.
            if 4 * alpha_eff * alpha_eff > d as u128 {
                valid = false;
                notes.push(format!("requires 4 alpha^2 <= d = {d}, got alpha = {alpha_eff}"));
            }
            let bound_bits = (d as f64).log2() - 2.0 - a;
            Ok(BoundReport { bound_bits, valid, constraint_report: notes.join("; ") })
        }
    }
}

fn total_dim(params: &BoundParams) -> Result<u64> {
    if let Some(d) = params.d_total {
        return Ok(d);
    }
    match (params.d_a, params.d_b) {
        (Some(a), Some(b)) => Ok(a * b),
        _ => Err(Error::InvalidArgument("bound needs parameter d (or d_a and d_b)".into())),
    }
}
