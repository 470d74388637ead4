//! Capped brute-force oracles.
//!
//! Every analysis in this crate has an exponential shadow here: plain sweeps
//! over all 2^n sequences (or all ideals of a dag), written without touching
//! the flow machinery so the two routes stay independent. Sweeps run over
//! i128 when the scaled coefficients provably fit, and over big integers
//! otherwise; both are exact.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::ops::{AddAssign, SubAssign};

use crate::error::{Error, Result};
use crate::model::{FitnessFunction, HpSequence, Rational};
use crate::pqdag::PqDag;

/// Size cap for exponential sweeps. Defaults to 20; 24 is a hard ceiling.
#[derive(Clone, Copy, Debug)]
pub struct OracleCap {
    max_n: usize,
}

impl OracleCap {
    pub const HARD_LIMIT: usize = 24;

    pub fn new(max_n: usize) -> Result<Self> {
        if max_n > Self::HARD_LIMIT {
            return Err(Error::CapExceeded {
                n: max_n,
                cap: Self::HARD_LIMIT,
            });
        }
        Ok(OracleCap { max_n })
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::CapExceeded { n, cap: self.max_n });
        }
        Ok(())
    }
}

impl Default for OracleCap {
    fn default() -> Self {
        OracleCap { max_n: 20 }
    }
}

// ── Sweep kernels ───────────────────────────────────────────────────────────

trait SweepInt: Clone + Ord + Zero + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self> {}
impl SweepInt for i128 {}
impl SweepInt for BigInt {}

struct Terms<T> {
    n: usize,
    pairs: Vec<(u32, T)>,
    linear: Vec<T>,
}

impl<T: SweepInt> Terms<T> {
    fn value(&self, mask: u32) -> T {
        let mut v = T::zero();
        for (pm, c) in &self.pairs {
            if mask & pm == *pm {
                v -= c;
            }
        }
        for (i, c) in self.linear.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v += c;
            }
        }
        v
    }

    /// Minimum scaled value and every minimizing mask, ascending.
    fn argmin(&self) -> (T, Vec<u32>) {
        let mut best = self.value(0);
        let mut masks = vec![0u32];
        for mask in 1..(1u32 << self.n) {
            let v = self.value(mask);
            if v < best {
                best = v;
                masks.clear();
                masks.push(mask);
            } else if v == best {
                masks.push(mask);
            }
        }
        (best, masks)
    }

    /// Minimum scaled value on every Hamming shell around `target`.
    fn shell_minima(&self, target: u32) -> Vec<T> {
        let mut mins: Vec<Option<T>> = vec![None; self.n + 1];
        for mask in 0..(1u32 << self.n) {
            let d = (mask ^ target).count_ones() as usize;
            let v = self.value(mask);
            if mins[d].as_ref().is_none_or(|m| &v < m) {
                mins[d] = Some(v);
            }
        }
        mins.into_iter().map(|m| m.expect("shell is nonempty")).collect()
    }
}

fn small_terms(phi: &FitnessFunction) -> Option<Terms<i128>> {
    let mut total = BigInt::zero();
    for k in 0..phi.m() {
        total += phi.pair_scaled(k).abs();
    }
    for i in 0..phi.n() {
        total += phi.linear_scaled(i).abs();
    }
    if total > BigInt::from(i128::MAX / 4) {
        return None;
    }
    Some(Terms {
        n: phi.n(),
        pairs: phi
            .pairs()
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| (1u32 << i | 1u32 << j, phi.pair_scaled(k).to_i128().unwrap()))
            .collect(),
        linear: (0..phi.n())
            .map(|i| phi.linear_scaled(i).to_i128().unwrap())
            .collect(),
    })
}

fn big_terms(phi: &FitnessFunction) -> Terms<BigInt> {
    Terms {
        n: phi.n(),
        pairs: phi
            .pairs()
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| (1u32 << i | 1u32 << j, phi.pair_scaled(k).clone()))
            .collect(),
        linear: (0..phi.n()).map(|i| phi.linear_scaled(i).clone()).collect(),
    }
}

fn optimum_masks(phi: &FitnessFunction) -> (BigInt, Vec<u32>) {
    match small_terms(phi) {
        Some(t) => {
            let (best, masks) = t.argmin();
            (BigInt::from(best), masks)
        }
        None => big_terms(phi).argmin(),
    }
}

fn shell_minima_scaled(phi: &FitnessFunction, target: u32) -> Vec<BigInt> {
    match small_terms(phi) {
        Some(t) => t.shell_minima(target).into_iter().map(BigInt::from).collect(),
        None => big_terms(phi).shell_minima(target),
    }
}

fn target_mask(phi: &FitnessFunction, x: &HpSequence) -> Result<u32> {
    if x.len() != phi.n() {
        return Err(Error::Dimension {
            expected: phi.n(),
            got: x.len(),
        });
    }
    Ok(x.bits()
        .iter()
        .enumerate()
        .fold(0u32, |m, (i, &b)| if b { m | 1 << i } else { m }))
}

// ── Oracle operations ───────────────────────────────────────────────────────

/// All global minimizers, in lexicographic sequence order.
pub fn brute_optima(phi: &FitnessFunction, cap: OracleCap) -> Result<Vec<HpSequence>> {
    cap.check(phi.n())?;
    let (_, masks) = optimum_masks(phi);
    let mut out: Vec<HpSequence> = masks
        .into_iter()
        .map(|m| HpSequence::from_mask(m, phi.n()))
        .collect();
    out.sort();
    Ok(out)
}

/// The minimum value of `phi`, by sweep.
pub fn brute_minimum(phi: &FitnessFunction, cap: OracleCap) -> Result<Rational> {
    cap.check(phi.n())?;
    let (best, _) = optimum_masks(phi);
    Ok(Rational::new(best, phi.denom().clone()))
}

/// Number of global minimizers.
pub fn brute_count(phi: &FitnessFunction, cap: OracleCap) -> Result<u64> {
    cap.check(phi.n())?;
    Ok(optimum_masks(phi).1.len() as u64)
}

/// Average H-count over all global minimizers.
pub fn brute_average_norm(phi: &FitnessFunction, cap: OracleCap) -> Result<Rational> {
    cap.check(phi.n())?;
    let (_, masks) = optimum_masks(phi);
    let total: u64 = masks.iter().map(|m| m.count_ones() as u64).sum();
    Ok(Rational::new(BigInt::from(total), BigInt::from(masks.len())))
}

/// Average Hamming distance from `x` over all global minimizers.
pub fn brute_average_distance(
    phi: &FitnessFunction,
    x: &HpSequence,
    cap: OracleCap,
) -> Result<Rational> {
    cap.check(phi.n())?;
    let t = target_mask(phi, x)?;
    let (_, masks) = optimum_masks(phi);
    let total: u64 = masks.iter().map(|m| (m ^ t).count_ones() as u64).sum();
    Ok(Rational::new(BigInt::from(total), BigInt::from(masks.len())))
}

/// Number of global minimizers at Hamming distance exactly `d` from `x`.
pub fn brute_count_at_distance(
    phi: &FitnessFunction,
    x: &HpSequence,
    d: usize,
    cap: OracleCap,
) -> Result<u64> {
    cap.check(phi.n())?;
    let t = target_mask(phi, x)?;
    let (_, masks) = optimum_masks(phi);
    Ok(masks
        .iter()
        .filter(|&&m| (m ^ t).count_ones() as usize == d)
        .count() as u64)
}

/// Minimum of `phi` over the Hamming shell at distance exactly `d` from
/// `target`.
pub fn brute_f(
    phi: &FitnessFunction,
    target: &HpSequence,
    d: usize,
    cap: OracleCap,
) -> Result<Rational> {
    cap.check(phi.n())?;
    if d > phi.n() {
        return Err(Error::PlotDomain(d.to_string()));
    }
    let t = target_mask(phi, target)?;
    let mins = shell_minima_scaled(phi, t);
    Ok(Rational::new(mins[d].clone(), phi.denom().clone()))
}

/// Whether some global minimizer has an H-count in `[d1, d2]`.
pub fn brute_bounded_norm_exists(
    phi: &FitnessFunction,
    d1: usize,
    d2: usize,
    cap: OracleCap,
) -> Result<bool> {
    cap.check(phi.n())?;
    let (_, masks) = optimum_masks(phi);
    Ok(masks.iter().any(|m| {
        let h = m.count_ones() as usize;
        d1 <= h && h <= d2
    }))
}

/// Exact ideal count of the interior dag, by memoized deletion-contraction:
/// ideals(G) = ideals(G - v) + ideals(G - v - descendants(v)) for a source v.
pub fn count_ideals(dag: &PqDag, cap: OracleCap) -> Result<u64> {
    cap.check(dag.interior_count())?;
    let full: u32 = if dag.interior_count() == 32 {
        u32::MAX
    } else {
        (1u32 << dag.interior_count()) - 1
    };
    let mut memo: HashMap<u32, u64> = HashMap::new();
    Ok(count_rec(dag, full, &mut memo))
}

fn count_rec(dag: &PqDag, remaining: u32, memo: &mut HashMap<u32, u64>) -> u64 {
    if remaining == 0 {
        return 1;
    }
    if let Some(&c) = memo.get(&remaining) {
        return c;
    }
    // The smallest remaining id is a source of the remaining graph: its
    // predecessors have smaller ids (topological order) and are decided.
    let v = remaining.trailing_zeros() as usize;
    let with_v = count_rec(dag, remaining & !(1 << v), memo);
    let mut dropped = remaining & !(1 << v);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &w in dag.succs(u) {
            if dropped >> w & 1 == 1 {
                dropped &= !(1 << w);
                stack.push(w);
            }
        }
    }
    let without_v = count_rec(dag, dropped, memo);
    let total = with_v + without_v;
    memo.insert(remaining, total);
    total
}
