//! Change-making: optimal and greedy coin counts, orderliness (canonical
//! coin systems) via the One-Point test, and greedy presentations over the
//! repunit base `B(b, k) = (1, (b²-1)/(b-1), …, (b^k-1)/(b-1))`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on DP table cells for [`opt_count`].
pub const DEFAULT_DP_CAP: usize = 100_000_000;

/// Base-`b` repunit `(b^i - 1)/(b - 1)`, i.e. `i` ones written in base `b`.
pub fn repunit(b: u32, i: u32) -> BigUint {
    let b = BigUint::from(b);
    (b.pow(i) - 1u32) / (b - 1u32)
}

/// Denominations `1 = c_1 < c_2 < … < c_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoinSystem {
    denominations: Vec<BigUint>,
}

impl CoinSystem {
    /// Sorts and dedupes; the smallest coin must be 1.
    pub fn new(mut denominations: Vec<BigUint>) -> Result<Self> {
        denominations.sort();
        denominations.dedup();
        match denominations.first() {
            Some(c) if c.is_one() => Ok(Self { denominations }),
            Some(_) => Err(Error::InvalidCoins(
                "smallest denomination must be 1".into(),
            )),
            None => Err(Error::InvalidCoins("no denominations".into())),
        }
    }

    pub fn from_u64s(denominations: &[u64]) -> Result<Self> {
        Self::new(denominations.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// `B(b, k)`.
    pub fn repunit_base(b: u32, k: u32) -> Result<Self> {
        check_base(b, k)?;
        Ok(Self {
            denominations: (1..=k).map(|i| repunit(b, i)).collect(),
        })
    }

    pub fn denominations(&self) -> &[BigUint] {
        &self.denominations
    }

    pub fn len(&self) -> usize {
        self.denominations.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn prefix(&self, len: usize) -> CoinSystem {
        CoinSystem {
            denominations: self.denominations[..len].to_vec(),
        }
    }

    /// Returns `Some(b)` if this system is exactly `B(b, k)` for some `b ≥ 2`.
    pub fn repunit_base_of(&self) -> Option<u32> {
        let k = u32::try_from(self.len()).ok()?;
        if k == 1 {
            // B(b, 1) = (1) for every b.
            return Some(2);
        }
        let b = (&self.denominations[1] - 1u32).to_u32()?;
        (b >= 2 && (1..=k).all(|i| self.denominations[i as usize - 1] == repunit(b, i)))
            .then_some(b)
    }
}

fn check_base(b: u32, k: u32) -> Result<()> {
    if b < 2 {
        return Err(Error::InvalidParams(format!(
            "base b = {b} must be at least 2"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidParams("length k must be at least 1".into()));
    }
    Ok(())
}

/// Minimum number of coins summing to `amount`, by bottom-up DP.
pub fn opt_count(coins: &CoinSystem, amount: &BigUint) -> Result<u64> {
    opt_count_with(coins, amount, DEFAULT_DP_CAP)
}

pub fn opt_count_with(coins: &CoinSystem, amount: &BigUint, cap: usize) -> Result<u64> {
    let m = table_len(amount, cap)?;
    let table = opt_table(coins, m);
    Ok(u64::from(table[m]))
}

fn table_len(amount: &BigUint, cap: usize) -> Result<usize> {
    match amount.to_usize() {
        Some(m) if m < cap => Ok(m),
        _ => Err(Error::AmountTooLarge {
            amount: amount.clone(),
            cap,
        }),
    }
}

/// `opt` for every amount `0..=max`. The caller is responsible for keeping
/// `max` reasonable; [`opt_count`] goes through the cap.
pub fn opt_table(coins: &CoinSystem, max: usize) -> Vec<u32> {
    let small: Vec<usize> = coins
        .denominations
        .iter()
        .filter_map(|c| c.to_usize())
        .filter(|&c| c <= max)
        .collect();
    let mut table = vec![u32::MAX; max + 1];
    table[0] = 0;
    for m in 1..=max {
        let mut best = u32::MAX;
        for &c in &small {
            if c > m {
                break;
            }
            best = best.min(table[m - c]);
        }
        // Coin 1 is always present, so best is finite.
        table[m] = best + 1;
    }
    table
}

/// Number of coins used by the largest-first strategy.
pub fn greedy_count(coins: &CoinSystem, amount: &BigUint) -> BigUint {
    let mut rest = amount.clone();
    let mut count = BigUint::zero();
    for c in coins.denominations.iter().rev() {
        if rest.is_zero() {
            break;
        }
        if &rest >= c {
            count += &rest / c;
            rest %= c;
        }
    }
    count
}

/// Outcome of an orderliness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orderliness {
    pub orderly: bool,
    /// An amount where greedy uses more coins than the optimum.
    pub counterexample: Option<BigUint>,
}

impl Orderliness {
    fn yes() -> Self {
        Self {
            orderly: true,
            counterexample: None,
        }
    }

    fn no(amount: BigUint) -> Self {
        Self {
            orderly: false,
            counterexample: Some(amount),
        }
    }
}

/// Decides whether greedy is optimal for every amount.
///
/// Each prefix `(c_1, …, c_j)` already known to be orderly is extended by
/// `c_{j+1}` and checked at the single amount `⌈c_{j+1}/c_j⌉·c_j`. When the
/// full system fails that test the failing amount is the counterexample. If
/// a proper prefix fails, the One-Point chain breaks, and the full system is
/// instead scanned exhaustively below `c_n + c_{n-1}` (the smallest
/// counterexample of a non-canonical system always lies below that bound);
/// the counterexample is then the smallest failing amount.
pub fn is_orderly(coins: &CoinSystem) -> Result<Orderliness> {
    is_orderly_with(coins, DEFAULT_DP_CAP)
}

pub fn is_orderly_with(coins: &CoinSystem, cap: usize) -> Result<Orderliness> {
    let n = coins.len();
    for j in 1..n {
        let prev = &coins.denominations[j - 1];
        let next = &coins.denominations[j];
        let s = (next + prev - 1u32) / prev;
        let amount = s * prev;
        let prefix = coins.prefix(j + 1);
        let opt = BigUint::from(opt_count_with(&prefix, &amount, cap)?);
        if opt < greedy_count(&prefix, &amount) {
            if j + 1 == n {
                return Ok(Orderliness::no(amount));
            }
            return exhaustive_orderly(coins, cap);
        }
    }
    Ok(Orderliness::yes())
}

fn exhaustive_orderly(coins: &CoinSystem, cap: usize) -> Result<Orderliness> {
    let n = coins.len();
    let bound = &coins.denominations[n - 1] + &coins.denominations[n - 2];
    let max = table_len(&bound, cap)?;
    let table = opt_table(coins, max);
    for (m, &opt) in table.iter().enumerate().skip(1) {
        let amount = BigUint::from(m);
        if BigUint::from(opt) < greedy_count(coins, &amount) {
            return Ok(Orderliness::no(amount));
        }
    }
    Ok(Orderliness::yes())
}

/// Orderliness with a shortcut for `B(b, k)`, which is always orderly.
pub fn is_orderly_fast(coins: &CoinSystem) -> Result<Orderliness> {
    if coins.repunit_base_of().is_some() {
        return Ok(Orderliness::yes());
    }
    is_orderly(coins)
}

/// Greedy digits `(x_1, …, x_k)` of an amount over `B(b, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GreedyPresentation {
    base: u32,
    digits: Vec<BigUint>,
}

impl GreedyPresentation {
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn k(&self) -> u32 {
        self.digits.len() as u32
    }

    /// `x_1..x_k`, lowest denomination first.
    pub fn digits(&self) -> &[BigUint] {
        &self.digits
    }

    /// `Σ x_i`.
    pub fn digit_sum(&self) -> BigUint {
        self.digits.iter().sum()
    }

    /// `w = Σ b^i x_i`.
    pub fn weight(&self) -> BigUint {
        let b = BigUint::from(self.base);
        let mut power = BigUint::one();
        let mut w = BigUint::zero();
        for x in &self.digits {
            power *= &b;
            w += &power * x;
        }
        w
    }

    /// The represented amount `Σ x_i (b^i-1)/(b-1)`.
    pub fn amount(&self) -> BigUint {
        self.digits
            .iter()
            .zip(1u32..)
            .map(|(x, i)| x * repunit(self.base, i))
            .sum()
    }

    /// Checks the three structural conditions: the top digit is
    /// `⌊(b-1)M/(b^k-1)⌋`, lower digits are at most `b`, and a lower digit
    /// equal to `b` (at index ≥ 2) forces every digit below it to zero.
    pub fn satisfies_greedy_conditions(&self) -> bool {
        let k = self.digits.len();
        let b = BigUint::from(self.base);
        let top = &self.amount() / repunit(self.base, k as u32);
        if self.digits[k - 1] != top {
            return false;
        }
        for i in 0..k - 1 {
            if self.digits[i] > b {
                return false;
            }
            if i >= 1 && self.digits[i] == b && self.digits[..i].iter().any(|x| !x.is_zero()) {
                return false;
            }
        }
        true
    }
}

/// Largest-first division of `amount` by `(b^i-1)/(b-1)` for `i = k, …, 1`.
pub fn greedy_presentation(b: u32, k: u32, amount: &BigUint) -> Result<GreedyPresentation> {
    check_base(b, k)?;
    let mut digits = vec![BigUint::zero(); k as usize];
    let mut rest = amount.clone();
    for i in (1..=k).rev() {
        let coin = repunit(b, i);
        digits[i as usize - 1] = &rest / &coin;
        rest %= &coin;
    }
    Ok(GreedyPresentation { base: b, digits })
}

/// `Σ x_i` of the greedy presentation.
pub fn digit_sum(b: u32, k: u32, amount: &BigUint) -> Result<BigUint> {
    Ok(greedy_presentation(b, k, amount)?.digit_sum())
}

/// Colexicographic comparison: the highest index where the vectors differ
/// decides.
pub fn colex_compare<T: Ord>(x: &[T], y: &[T]) -> Result<Ordering> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter()
        .rev()
        .zip(y.iter().rev())
        .map(|(a, b)| a.cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal))
}

/// `Σ_{r=0}^{n} (Σx_i)_r` over `B(b, k)` without enumerating every `r`.
///
/// Within one block of the top coin `c_j` the lower digits repeat the same
/// pattern, so with `n = q·c_j + s`:
/// `T_j(n) = c_j·q(q-1)/2 + q·T_{j-1}(c_j - 1) + q(s+1) + T_{j-1}(s)`
/// and `T_1(n) = n(n+1)/2`.
pub fn digit_sum_prefix(b: u32, k: u32, n: &BigUint) -> Result<BigUint> {
    check_base(b, k)?;
    let coins: Vec<BigUint> = (1..=k).map(|i| repunit(b, i)).collect();
    // full[j] = T_j(c_{j+1} - 1), block totals for the lower coins.
    let mut full = Vec::with_capacity(k as usize);
    for j in 0..k as usize {
        let t = prefix_sum_level(&coins, &full, j, &(repunit(b, j as u32 + 2) - 1u32));
        full.push(t);
    }
    Ok(prefix_sum_level(&coins, &full, k as usize - 1, n))
}

fn prefix_sum_level(coins: &[BigUint], full: &[BigUint], level: usize, n: &BigUint) -> BigUint {
    let mut total = BigUint::zero();
    let mut rest = n.clone();
    for j in (1..=level).rev() {
        let c = &coins[j];
        let q = &rest / c;
        let s = &rest % c;
        if !q.is_zero() {
            total += c * &q * (&q - 1u32) / 2u32;
            total += &q * &full[j - 1];
        }
        total += &q * (&s + 1u32);
        rest = s;
    }
    total + &rest * (&rest + 1u32) / 2u32
}
