//! Symmetric-group combinatorics: permutations, integer partitions,
//! irreducible characters, and irrep dimensions.
//!
//! Everything here is exact. Characters are integers computed by the
//! Murnaghan-Nakayama recursion, dimensions come from the hook length and
//! hook content formulas, and the cycle inequality
//! `cycles(s*t) + cycles(s) <= alpha + 1` (with `t` the canonical full cycle)
//! is verified by exhaustive enumeration together with its count of
//! saturating elements.

use crate::{Error, Integer, Result};
use num::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Largest symmetric group enumerated by default (`9! = 362880` elements).
pub const DEFAULT_ENUMERATION_CAP: u32 = 9;

/// A permutation of `{0, 1, ..., n-1}` stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from `images[i] = sigma(i)`, rejecting
    /// non-bijective tables.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidPermutation("empty image table".into()));
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if im >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {im} out of range for degree {n}"
                )));
            }
            if seen[im] {
                return Err(Error::InvalidPermutation(format!("image {im} repeats")));
            }
            seen[im] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// The canonical full cycle mapping `i -> i + 1 (mod n)`.
    pub fn full_cycle(n: usize) -> Self {
        Self { images: (0..n).map(|i| (i + 1) % n).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Product `self * other`, with `other` applied first:
    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im] = i;
        }
        Self { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    /// Number of disjoint cycles, fixed points included.
    pub fn cycle_count(&self) -> u32 {
        let mut seen = vec![false; self.images.len()];
        let mut count = 0;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
            }
        }
        count
    }

    /// Cycle type as an integer partition of the degree.
    pub fn cycle_type(&self) -> IntegerPartition {
        let mut seen = vec![false; self.images.len()];
        let mut lengths = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u32;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        IntegerPartition { parts: lengths }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut wrote = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.images[i];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A partition of a positive integer, parts weakly decreasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerPartition {
    parts: Vec<u32>,
}

impl IntegerPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn sum(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of rows of the Young diagram.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// One-row partition `(n)`.
    pub fn single_row(n: u32) -> Self {
        Self { parts: vec![n] }
    }

    /// All-ones partition `(1^n)`, the cycle type of the identity.
    pub fn all_ones(n: u32) -> Self {
        Self { parts: vec![1; n as usize] }
    }

    /// Conjugate (transposed) partition.
    pub fn conjugate(&self) -> Self {
        let cols = self.parts[0] as usize;
        let mut parts = vec![0u32; cols];
        for &p in &self.parts {
            for c in parts.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Self { parts }
    }

    /// All partitions of `n` in descending lexicographic order.
    pub fn partitions_of(n: u32) -> Vec<Self> {
        fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<IntegerPartition>) {
            if remaining == 0 {
                out.push(IntegerPartition { parts: prefix.clone() });
                return;
            }
            let top = remaining.min(max_part);
            for part in (1..=top).rev() {
                prefix.push(part);
                rec(remaining - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

pub fn factorial(n: u32) -> Integer {
    let mut acc = Integer::one();
    for k in 2..=n as u64 {
        acc *= Integer::from(k);
    }
    acc
}

fn factorial_u128(n: u32) -> u128 {
    let mut acc: u128 = 1;
    for k in 2..=n as u128 {
        acc = acc.saturating_mul(k);
    }
    acc
}

/// Enumerates all of `S_alpha` in lexicographic order of image tables.
///
/// Refuses orders above [`DEFAULT_ENUMERATION_CAP`]; use
/// [`enumerate_group_with_cap`] to override deliberately.
pub fn enumerate_group(alpha: u32) -> Result<Vec<Permutation>> {
    enumerate_group_with_cap(alpha, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_group_with_cap(alpha: u32, cap: u32) -> Result<Vec<Permutation>> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("group order must be at least 1".into()));
    }
    if alpha > cap {
        return Err(Error::EnumerationCap { alpha, cap, size: factorial_u128(alpha) });
    }
    let n = alpha as usize;
    let mut images: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(factorial_u128(alpha) as usize);
    loop {
        out.push(Permutation { images: images.clone() });
        // next lexicographic permutation; stop after the last one
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).expect("successor exists");
        images.swap(i, j);
        images[i + 1..].reverse();
    }
    Ok(out)
}

type CharKey = (Vec<u32>, Vec<u32>);

fn char_memo() -> &'static Mutex<HashMap<CharKey, Integer>> {
    static MEMO: OnceLock<Mutex<HashMap<CharKey, Integer>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Irreducible character `chi^lambda` of `S_n` evaluated on the conjugacy
/// class of cycle type `mu`, by the Murnaghan-Nakayama border-strip
/// recursion. Results are memoized for the lifetime of the process.
pub fn mn_character(lambda: &IntegerPartition, mu: &IntegerPartition) -> Result<Integer> {
    if lambda.sum() != mu.sum() {
        return Err(Error::OrderMismatch { expected: lambda.sum(), got: mu.sum() });
    }
    Ok(mn_rec(lambda.parts(), mu.parts()))
}

fn mn_rec(lambda: &[u32], mu: &[u32]) -> Integer {
    if lambda.is_empty() {
        return Integer::one();
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(v) = char_memo().lock().unwrap().get(&key) {
        return v.clone();
    }

    // Beta-set encoding: strictly decreasing b_i = lambda_i + (rows - 1 - i).
    // Removing a border strip of length t replaces some b_i by b_i - t; the
    // strip height is the number of betas strictly between the two values.
    let rows = lambda.len();
    let betas: Vec<u32> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (rows - 1 - i) as u32)
        .collect();
    let strip = mu[0];
    let rest = &mu[1..];

    let mut total = Integer::zero();
    for (i, &b) in betas.iter().enumerate() {
        if b < strip {
            continue;
        }
        let target = b - strip;
        if betas.contains(&target) {
            continue;
        }
        let height = betas.iter().filter(|&&x| target < x && x < b).count();
        let mut next = betas.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let next_lambda: Vec<u32> = next
            .iter()
            .enumerate()
            .map(|(j, &bj)| bj - (rows - 1 - j) as u32)
            .filter(|&p| p > 0)
            .collect();
        let sub = mn_rec(&next_lambda, rest);
        if height % 2 == 0 {
            total += sub;
        } else {
            total -= sub;
        }
    }

    char_memo().lock().unwrap().insert(key, total.clone());
    total
}

fn hook_lengths(lambda: &IntegerPartition) -> Vec<u32> {
    let conj = lambda.conjugate();
    let mut hooks = Vec::with_capacity(lambda.sum() as usize);
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            let arm = row - 1 - j as u32;
            let leg = conj.parts()[j] - 1 - i as u32;
            hooks.push(arm + leg + 1);
        }
    }
    hooks
}

/// Dimension of the `S_n` irrep labeled by `lambda` (hook length formula).
pub fn sym_irrep_dim(lambda: &IntegerPartition) -> Integer {
    let mut num = factorial(lambda.sum());
    for h in hook_lengths(lambda) {
        num /= Integer::from(h);
    }
    num
}

/// Dimension of the `U(d)` irrep labeled by `lambda` (hook content formula),
/// equal to the Schur polynomial `s_lambda(1, ..., 1)` in `d` ones.
/// Zero whenever the diagram has more than `d` rows.
pub fn unitary_irrep_dim(lambda: &IntegerPartition, d: u64) -> Integer {
    if lambda.rows() as u64 > d {
        return Integer::zero();
    }
    let mut num = Integer::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as i64 {
            num *= Integer::from(d as i64 + j - i as i64);
        }
    }
    for h in hook_lengths(lambda) {
        let (q, r) = num::Integer::div_rem(&num, &Integer::from(h));
        debug_assert!(r.is_zero(), "hook content product must divide evenly");
        num = q;
    }
    num
}

/// Exhaustive verification report for the cycle inequality on `S_alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleLemmaReport {
    pub alpha: u32,
    /// Whether `cycles(s*t) + cycles(s) <= alpha + 1` held for every element.
    pub holds: bool,
    /// Number of elements attaining `alpha + 1` exactly.
    pub saturating_count: u64,
    pub group_order: u64,
}

/// Checks `cycles(s*t) + cycles(s) <= alpha + 1` over all of `S_alpha`,
/// `t` the canonical full cycle, and counts the saturating elements
/// (the count equals the Catalan number of `alpha`).
pub fn verify_cycle_lemma(alpha: u32) -> Result<CycleLemmaReport> {
    let tau = Permutation::full_cycle(alpha as usize);
    let mut holds = true;
    let mut saturating = 0u64;
    let mut order = 0u64;
    for sigma in enumerate_group(alpha)? {
        let total = sigma.compose(&tau).cycle_count() + sigma.cycle_count();
        if total > alpha + 1 {
            holds = false;
        }
        if total == alpha + 1 {
            saturating += 1;
        }
        order += 1;
    }
    Ok(CycleLemmaReport { alpha, holds, saturating_count: saturating, group_order: order })
}
