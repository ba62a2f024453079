//! Exact Weingarten functions of the unitary group `U(d)`.
//!
//! `Wg(d, s) = (1/(n!)^2) * sum over partitions lambda of n with at most d
//! rows of dim(lambda)^2 * chi^lambda(s) / s_lambda(1^d)`, a class function
//! of the cycle type of `s`. Restricting the sum to diagrams with at most
//! `d` rows gives the pseudo-inverse convention: for `d >= n` the function
//! inverts the Gram matrix `(s, g) -> d^cycles(s^-1 g)` exactly, while for
//! `d < n` the Gram matrix is singular and the table is flagged as
//! truncated.

use crate::permgroup::{
    enumerate_group_with_cap, factorial, mn_character, sym_irrep_dim, unitary_irrep_dim,
    IntegerPartition, Permutation,
};
use crate::{Error, Integer, Rational, Result};
use num::{Integer as NumInteger, One, Zero};
use std::collections::{BTreeMap, HashMap};

/// Largest order for which Gram matrices and the inverse identity are
/// materialized (`6! = 720` group elements, `720^3` products in the check).
pub const GRAM_ALPHA_CAP: u32 = 6;

/// Order cap for building a Weingarten table itself; the character table of
/// `S_n` is cheap far beyond this, the cap just keeps call sites honest.
pub const TABLE_ALPHA_CAP: u32 = 12;

/// All Weingarten values of a fixed order and dimension, keyed by cycle type.
#[derive(Clone, Debug)]
pub struct WeingartenTable {
    dimension: u64,
    order: u32,
    truncated: bool,
    values: BTreeMap<IntegerPartition, Rational>,
}

impl WeingartenTable {
    pub fn new(d: u64, alpha: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if alpha == 0 {
            return Err(Error::InvalidArgument("order must be at least 1".into()));
        }
        if alpha > TABLE_ALPHA_CAP {
            return Err(Error::InvalidArgument(format!(
                "order {alpha} above the Weingarten table cap {TABLE_ALPHA_CAP}"
            )));
        }
        let lambdas: Vec<IntegerPartition> = IntegerPartition::partitions_of(alpha)
            .into_iter()
            .filter(|l| (l.rows() as u64) <= d)
            .collect();
        let truncated = lambdas.len() < IntegerPartition::partitions_of(alpha).len();
        let fact = factorial(alpha);
        let norm = &fact * &fact;

        let mut values = BTreeMap::new();
        for mu in IntegerPartition::partitions_of(alpha) {
            let mut acc = Rational::zero();
            for lambda in &lambdas {
                let f = sym_irrep_dim(lambda);
                let chi = mn_character(lambda, &mu)?;
                let s = unitary_irrep_dim(lambda, d);
                debug_assert!(!s.is_zero());
                acc += Rational::new(&f * &f * chi, s);
            }
            values.insert(mu, acc / Rational::from_integer(norm.clone()));
        }
        Ok(Self { dimension: d, order: alpha, truncated, values })
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// True when `d < alpha`, i.e. diagrams with more than `d` rows were
    /// dropped and the function is only a pseudo-inverse of the Gram matrix.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn value(&self, cycle_type: &IntegerPartition) -> Result<&Rational> {
        if cycle_type.sum() != self.order {
            return Err(Error::OrderMismatch { expected: self.order, got: cycle_type.sum() });
        }
        self.values
            .get(cycle_type)
            .ok_or_else(|| Error::InvalidPartition(format!("unknown cycle type {cycle_type}")))
    }

    pub fn value_of(&self, sigma: &Permutation) -> Result<&Rational> {
        self.value(&sigma.cycle_type())
    }
}

/// One-shot Weingarten value for a permutation.
pub fn weingarten(d: u64, sigma: &Permutation) -> Result<Rational> {
    let table = WeingartenTable::new(d, sigma.degree() as u32)?;
    table.value_of(sigma).cloned()
}

/// One-shot Weingarten value for a conjugacy class.
pub fn weingarten_for_class(d: u64, cycle_type: &IntegerPartition) -> Result<Rational> {
    let table = WeingartenTable::new(d, cycle_type.sum())?;
    table.value(cycle_type).cloned()
}

/// Gram matrix of permutation operators in the lexicographic enumeration
/// order of `S_alpha`: entry `(i, j) = d^cycles(s_i^-1 s_j)`.
pub fn gram_matrix(d: u64, alpha: u32) -> Result<Vec<Vec<Rational>>> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if alpha == 0 || alpha > GRAM_ALPHA_CAP {
        return Err(Error::InvalidArgument(format!(
            "gram matrix supports orders 1..={GRAM_ALPHA_CAP}, got {alpha}"
        )));
    }
    let elems = enumerate_group_with_cap(alpha, GRAM_ALPHA_CAP)?;
    let dpow: Vec<Integer> =
        (0..=alpha).map(|k| Integer::from(d).pow(k)).collect();
    let gram = elems
        .iter()
        .map(|si| {
            let si_inv = si.inverse();
            elems
                .iter()
                .map(|sj| {
                    let xi = si_inv.compose(sj).cycle_count();
                    Rational::from_integer(dpow[xi as usize].clone())
                })
                .collect()
        })
        .collect();
    Ok(gram)
}

/// Verifies the exact pseudo-inverse identity
/// `sum over g of Wg(d, s g^-1) d^cycles(g r^-1) = delta(s, r)`
/// for every pair `(s, r)` in `S_alpha`. Requires `d >= alpha`; below that
/// the Gram matrix is singular and no inverse exists.
pub fn verify_wg_inverse(d: u64, alpha: u32) -> Result<bool> {
    if alpha == 0 || alpha > GRAM_ALPHA_CAP {
        return Err(Error::InvalidArgument(format!(
            "inverse check supports orders 1..={GRAM_ALPHA_CAP}, got {alpha}"
        )));
    }
    if d < alpha as u64 {
        return Err(Error::Regime(format!(
            "d = {d} < alpha = {alpha}: Gram matrix is singular, Weingarten is only a pseudo-inverse"
        )));
    }
    let table = WeingartenTable::new(d, alpha)?;
    let elems = enumerate_group_with_cap(alpha, GRAM_ALPHA_CAP)?;
    let m = elems.len();

    let index: HashMap<&[usize], u32> =
        elems.iter().enumerate().map(|(i, p)| (p.images(), i as u32)).collect();
    // right_div[x][y] = index of elems[x] * elems[y]^-1
    let inverses: Vec<Permutation> = elems.iter().map(|p| p.inverse()).collect();
    let mut right_div = vec![0u32; m * m];
    for (x, ex) in elems.iter().enumerate() {
        for (y, inv_y) in inverses.iter().enumerate() {
            let prod = ex.compose(inv_y);
            right_div[x * m + y] = index[prod.images()];
        }
    }

    let classes: Vec<IntegerPartition> = IntegerPartition::partitions_of(alpha);
    let class_index: BTreeMap<&IntegerPartition, usize> =
        classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let type_of: Vec<usize> =
        elems.iter().map(|p| class_index[&p.cycle_type()]).collect();

    // Clear denominators once: with L the lcm of all Weingarten denominators
    // the inner sums become integer arithmetic.
    let mut lcm = Integer::one();
    for c in &classes {
        lcm = lcm.lcm(table.value(c)?.denom());
    }
    let wg_num: Vec<Integer> = classes
        .iter()
        .map(|c| {
            let scaled = table.value(c).expect("class present") * Rational::from_integer(lcm.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    let dpow: Vec<Integer> = (0..=alpha).map(|k| Integer::from(d).pow(k)).collect();
    let pow_of: Vec<&Integer> =
        elems.iter().map(|p| &dpow[p.cycle_count() as usize]).collect();

    for s in 0..m {
        for r in 0..m {
            let mut acc = Integer::zero();
            for g in 0..m {
                let wg = &wg_num[type_of[right_div[s * m + g] as usize]];
                acc += wg * pow_of[right_div[g * m + r] as usize];
            }
            let expected = if s == r { lcm.clone() } else { Integer::zero() };
            if acc != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
