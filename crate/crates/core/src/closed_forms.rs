//! Closed forms for the generator family
//! `A(a, b, d, k) = (a, ba + d, b²a + (b²-1)/(b-1)·d, …, b^k·a + (b^k-1)/(b-1)·d)`.
//!
//! With `B = B(b, k)` the repunit coin system and `(Σx_i)_r` the digit sum
//! of the greedy presentation of `r` over `B`, the least element of `⟨A⟩` in
//! the class of `d·r (mod a)` is
//!
//! ```text
//! N_{dr} = (Σx_i)_r · a + r·((b-1)a + d),      0 ≤ r < a,
//! ```
//!
//! valid whenever `a ≥ k - 1`. Because the weight of a greedy presentation
//! is monotone in colex order, the maximum sits at `r = a - 1`, which gives
//! the Frobenius number; summing over `r` gives the genus.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::changemaking::{digit_sum, digit_sum_prefix, repunit};
use crate::error::{Error, Result};
use crate::semigroup::{
    apery_set_with, AperySet, Engine, GeneratorList, OracleConfig, SemigroupReport,
};

/// Above this many residues the digit-sum series uses the block recurrence
/// instead of iterating presentations.
const ITERATE_LIMIT: u64 = 1_000_000;

/// Parameters `(a, b, d, k)` of the generator family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyParams {
    pub a: BigUint,
    pub b: u32,
    pub d: BigUint,
    pub k: u32,
}

impl FamilyParams {
    /// Validates `a ≥ 2`, `b ≥ 2`, `d ≥ 1`, `k ≥ 1` and `gcd(a, d) = 1`.
    pub fn new(a: BigUint, b: u32, d: BigUint, k: u32) -> Result<Self> {
        let p = Self { a, b, d, k };
        p.validate()?;
        Ok(p)
    }

    pub fn from_u64s(a: u64, b: u32, d: u64, k: u32) -> Result<Self> {
        Self::new(BigUint::from(a), b, BigUint::from(d), k)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a < BigUint::from(2u32) {
            return Err(Error::InvalidParams(format!(
                "a = {} must be at least 2",
                self.a
            )));
        }
        if self.b < 2 {
            return Err(Error::InvalidParams(format!(
                "b = {} must be at least 2",
                self.b
            )));
        }
        if self.d.is_zero() {
            return Err(Error::InvalidParams("d must be at least 1".into()));
        }
        if self.k < 1 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        let g = self.a.gcd(&self.d);
        if !g.is_one() {
            return Err(Error::InvalidParams(format!(
                "gcd(a, d) = gcd({}, {}) = {g}, must be 1",
                self.a, self.d
            )));
        }
        Ok(())
    }

    /// Whether `a ≥ k - 1`, the range where the closed forms are proven.
    pub fn meets_hypothesis(&self) -> bool {
        self.a.clone() + 1u32 >= BigUint::from(self.k)
    }

    fn require_hypothesis(&self) -> Result<()> {
        self.validate()?;
        if !self.meets_hypothesis() {
            return Err(Error::InvalidParams(format!(
                "closed forms need a >= k - 1 (a = {}, k = {})",
                self.a, self.k
            )));
        }
        Ok(())
    }

    /// `(b-1)a + d`, the per-residue slope of `N_{dr}`.
    fn slope(&self) -> BigUint {
        (self.b - 1) * &self.a + &self.d
    }

    /// `Some(n)` when this is the repunit specialization
    /// `a = (b^n-1)/(b-1)`, `k = n - 1`.
    pub fn repunit_n(&self) -> Option<u32> {
        let n = self.k.checked_add(1)?;
        (self.a == repunit(self.b, n)).then_some(n)
    }
}

impl std::fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(a={}, b={}, d={}, k={})",
            self.a, self.b, self.d, self.k
        )
    }
}

/// `(a, ba + d, …, b^k·a + (b^k-1)/(b-1)·d)`.
pub fn build_generators(p: &FamilyParams) -> Result<GeneratorList> {
    p.validate()?;
    let b = BigUint::from(p.b);
    let mut gens = Vec::with_capacity(p.k as usize + 1);
    gens.push(p.a.clone());
    let mut power = BigUint::one();
    for i in 1..=p.k {
        power *= &b;
        gens.push(&power * &p.a + repunit(p.b, i) * &p.d);
    }
    GeneratorList::new(gens)
}

/// `N_{dr}`, the least element of `⟨A⟩` congruent to `d·r (mod a)`.
pub fn n_dr(p: &FamilyParams, r: &BigUint) -> Result<BigUint> {
    p.require_hypothesis()?;
    if r >= &p.a {
        return Err(Error::InvalidParams(format!(
            "residue r = {r} must be below a = {}",
            p.a
        )));
    }
    n_dr_unchecked(p, r)
}

pub(crate) fn n_dr_unchecked(p: &FamilyParams, r: &BigUint) -> Result<BigUint> {
    Ok(digit_sum(p.b, p.k, r)? * &p.a + r * p.slope())
}

/// Full Apéry set of `a` in `⟨A⟩`: `N_{dr}` is placed at residue `d·r mod a`.
pub fn apery_closed(p: &FamilyParams, config: &OracleConfig) -> Result<AperySet> {
    p.require_hypothesis()?;
    apery_closed_unchecked(p, config)
}

pub(crate) fn apery_closed_unchecked(p: &FamilyParams, config: &OracleConfig) -> Result<AperySet> {
    let a = config.residues(&p.a)?;
    let d = (&p.d % &p.a).to_usize().expect("below a");
    let mut minima = vec![BigUint::zero(); a];
    for r in 0..a {
        let class = ((d as u128 * r as u128) % a as u128) as usize;
        minima[class] = n_dr_unchecked(p, &BigUint::from(r))?;
    }
    AperySet::from_parts(p.a.clone(), minima)
}

/// `F(A) = ((b-1)a - b + d + (Σx_i)_{a-1})·a - d`.
pub fn frobenius_closed(p: &FamilyParams) -> Result<BigInt> {
    p.require_hypothesis()?;
    frobenius_unchecked(p)
}

pub(crate) fn frobenius_unchecked(p: &FamilyParams) -> Result<BigInt> {
    let top = digit_sum(p.b, p.k, &(&p.a - 1u32))?;
    let inner = BigInt::from(p.slope() + top) - BigInt::from(p.b);
    Ok(inner * BigInt::from(p.a.clone()) - BigInt::from(p.d.clone()))
}

/// `g(A) = Σ_{r=1}^{a-1} (Σx_i)_r + (a-1)((b-1)a + d - 1)/2`.
pub fn genus_closed(p: &FamilyParams) -> Result<BigUint> {
    p.require_hypothesis()?;
    genus_unchecked(p)
}

pub(crate) fn genus_unchecked(p: &FamilyParams) -> Result<BigUint> {
    let series = match p.a.to_u64() {
        Some(a) if a <= ITERATE_LIMIT => digit_sum_series_iterative(p)?,
        _ => digit_sum_series_recurrence(p)?,
    };
    let a_minus_1 = &p.a - 1u32;
    // (a-1)(slope-1) is always even: if a is odd, a-1 is even; if a is even,
    // d is odd (gcd 1) and slope - 1 = (b-1)a + d - 1 is even.
    let tail = &a_minus_1 * (p.slope() - 1u32) / 2u32;
    Ok(series + tail)
}

/// `Σ_{r=1}^{a-1} (Σx_i)_r`, one greedy presentation per residue.
pub fn digit_sum_series_iterative(p: &FamilyParams) -> Result<BigUint> {
    let mut total = BigUint::zero();
    let mut r = BigUint::one();
    while r < p.a {
        total += digit_sum(p.b, p.k, &r)?;
        r += 1u32;
    }
    Ok(total)
}

/// `Σ_{r=1}^{a-1} (Σx_i)_r` via the block recurrence of
/// [`digit_sum_prefix`]; needs no enumeration.
pub fn digit_sum_series_recurrence(p: &FamilyParams) -> Result<BigUint> {
    digit_sum_prefix(p.b, p.k, &(&p.a - 1u32))
}

/// The repunit specialization `a = (b^n-1)/(b-1)`, `k = n - 1`.
pub fn repunit_params(b: u32, n: u32, d: &BigUint) -> Result<FamilyParams> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n = {n} must be at least 2")));
    }
    if b < 2 {
        return Err(Error::InvalidParams(format!("b = {b} must be at least 2")));
    }
    FamilyParams::new(repunit(b, n), b, d.clone(), n - 1)
}

/// `F = (b^n + d - 1)·(b^n-1)/(b-1) - d`.
pub fn repunit_general_frobenius(b: u32, n: u32, d: &BigUint) -> Result<BigInt> {
    let p = repunit_params(b, n, d)?;
    let bn = BigUint::from(b).pow(n);
    let f = BigInt::from((bn + d - 1u32) * &p.a) - BigInt::from(d.clone());
    Ok(f)
}

/// `g = (b^n-b)(b^n+d-1)/(2(b-1)) + b^n(n-1)/2`, evaluated over the common
/// denominator `2(b-1)`.
pub fn repunit_general_genus(b: u32, n: u32, d: &BigUint) -> Result<BigUint> {
    repunit_params(b, n, d)?;
    let bb = BigUint::from(b);
    let bn = bb.pow(n);
    let numerator = (&bn - &bb) * (&bn + d - 1u32) + &bn * (n - 1) * (b - 1);
    let denominator = BigUint::from(2 * (b - 1));
    let (q, rem) = numerator.div_rem(&denominator);
    debug_assert!(rem.is_zero(), "genus numerator must be divisible");
    Ok(q)
}

/// `PF = {F - (n-2)d, …, F - d, F}` (ascending) and type `n - 1`.
pub fn pf_closed(b: u32, n: u32, d: &BigUint) -> Result<(Vec<BigInt>, usize)> {
    let f = repunit_general_frobenius(b, n, d)?;
    let d = BigInt::from(d.clone());
    let pf: Vec<BigInt> = (0..n - 1).rev().map(|t| &f - &d * t).collect();
    let t = pf.len();
    Ok((pf, t))
}

/// Frobenius number and genus from the closed forms. The pseudo-Frobenius
/// set comes from [`pf_closed`] on the repunit specialization; for other
/// parameters no closed form exists and it is taken from the oracle.
pub fn report_closed(p: &FamilyParams, config: &OracleConfig) -> Result<SemigroupReport> {
    let frobenius = frobenius_closed(p)?;
    let genus = genus_closed(p)?;
    let pf = match p.repunit_n() {
        Some(n) => pf_closed(p.b, n, &p.d)?.0,
        None => apery_set_with(&build_generators(p)?, config)?.pseudo_frobenius(),
    };
    Ok(SemigroupReport {
        frobenius,
        genus,
        pf,
        engine: Engine::ClosedForm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::apery_set;

    fn params(a: u64, b: u32, d: u64, k: u32) -> FamilyParams {
        FamilyParams::from_u64s(a, b, d, k).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn elems(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn generator_examples() {
        let g = build_generators(&params(5, 2, 1, 2)).unwrap();
        assert_eq!(g.elements(), elems(&[5, 11, 23]).as_slice());
        let g = build_generators(&params(7, 2, 1, 1)).unwrap();
        assert_eq!(g.elements(), elems(&[7, 15]).as_slice());
        let g = build_generators(&params(7, 3, 2, 2)).unwrap();
        assert_eq!(g.elements(), elems(&[7, 23, 71]).as_slice());
    }

    #[test]
    fn params_validation() {
        assert!(FamilyParams::from_u64s(6, 2, 4, 2).is_err());
        assert!(FamilyParams::from_u64s(1, 2, 1, 2).is_err());
        assert!(FamilyParams::from_u64s(5, 1, 1, 2).is_err());
        assert!(FamilyParams::from_u64s(5, 2, 0, 2).is_err());
        assert!(FamilyParams::from_u64s(5, 2, 1, 0).is_err());
    }

    #[test]
    fn hypothesis_is_enforced() {
        // a = 2, k = 4: a < k - 1.
        let p = params(2, 2, 1, 4);
        assert!(!p.meets_hypothesis());
        assert!(frobenius_closed(&p).is_err());
        assert!(genus_closed(&p).is_err());
        assert!(n_dr(&p, &big(1)).is_err());
        assert!(apery_closed(&p, &OracleConfig::default()).is_err());
        // boundary a = k - 1 is allowed
        assert!(frobenius_closed(&params(3, 2, 1, 4)).is_ok());
    }

    #[test]
    fn n_dr_examples() {
        assert_eq!(n_dr(&params(5, 2, 1, 2), &big(4)).unwrap(), big(34));
        assert_eq!(n_dr(&params(9, 4, 2, 3), &big(0)).unwrap(), big(0));
        assert_eq!(n_dr(&params(7, 3, 2, 2), &big(6)).unwrap(), big(117));
        assert!(n_dr(&params(5, 2, 1, 2), &big(5)).is_err());
    }

    #[test]
    fn apery_closed_examples() {
        let cfg = OracleConfig::default();
        let ape = apery_closed(&params(5, 2, 1, 2), &cfg).unwrap();
        assert_eq!(ape.minima(), elems(&[0, 11, 22, 23, 34]).as_slice());
        let ape = apery_closed(&params(2, 2, 1, 1), &cfg).unwrap();
        assert_eq!(ape.minima(), elems(&[0, 5]).as_slice());
        let p = params(7, 3, 2, 2);
        let oracle = apery_set(&build_generators(&p).unwrap()).unwrap();
        assert_eq!(apery_closed(&p, &cfg).unwrap(), oracle);
    }

    #[test]
    fn d_larger_than_a() {
        let p = params(5, 2, 13, 2);
        let oracle = apery_set(&build_generators(&p).unwrap()).unwrap();
        assert_eq!(apery_closed(&p, &OracleConfig::default()).unwrap(), oracle);
        assert_eq!(frobenius_closed(&p).unwrap(), oracle.frobenius());
    }

    #[test]
    fn frobenius_and_genus_examples() {
        for (a, b, d, k, f, g) in [
            (5, 2, 1, 2, 29, 16),
            (7, 3, 2, 2, 110, 57),
            (3, 2, 1, 1, 11, 6),
        ] {
            let p = params(a, b, d, k);
            assert_eq!(frobenius_closed(&p).unwrap(), BigInt::from(f), "{p}");
            assert_eq!(genus_closed(&p).unwrap(), big(g), "{p}");
        }
    }

    #[test]
    fn repunit_examples() {
        let one = big(1);
        assert_eq!(
            repunit_general_frobenius(3, 2, &one).unwrap(),
            BigInt::from(35)
        );
        assert_eq!(
            repunit_general_frobenius(2, 3, &one).unwrap(),
            BigInt::from(55)
        );
        assert_eq!(
            repunit_general_frobenius(2, 2, &one).unwrap(),
            BigInt::from(11)
        );
        assert_eq!(repunit_general_genus(3, 2, &one).unwrap(), big(18));
        assert_eq!(repunit_general_genus(2, 3, &one).unwrap(), big(32));
        assert_eq!(repunit_general_genus(2, 2, &one).unwrap(), big(6));
        // a = 4, d = 2 share a factor
        assert!(repunit_general_frobenius(3, 2, &big(2)).is_err());
        assert!(repunit_general_genus(3, 1, &one).is_err());
    }

    #[test]
    fn pf_closed_examples() {
        let one = big(1);
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(pf_closed(2, 3, &one).unwrap(), (ints(&[54, 55]), 2));
        assert_eq!(pf_closed(3, 2, &one).unwrap(), (ints(&[35]), 1));
        assert_eq!(pf_closed(2, 4, &one).unwrap(), (ints(&[237, 238, 239]), 3));
    }

    #[test]
    fn series_methods_agree() {
        for (a, b, d, k) in [(5, 2, 1, 2), (61, 5, 3, 4), (121, 3, 2, 4), (1000, 7, 3, 6)] {
            let p = params(a, b, d, k);
            assert_eq!(
                digit_sum_series_iterative(&p).unwrap(),
                digit_sum_series_recurrence(&p).unwrap(),
                "{p}"
            );
        }
    }

    #[test]
    fn huge_repunit_uses_recurrence() {
        // b = 10, n = 30: a has 30 digits, far past iteration.
        let one = big(1);
        let p = repunit_params(10, 30, &one).unwrap();
        assert_eq!(
            genus_closed(&p).unwrap(),
            repunit_general_genus(10, 30, &one).unwrap()
        );
        assert_eq!(
            frobenius_closed(&p).unwrap(),
            repunit_general_frobenius(10, 30, &one).unwrap()
        );
    }

    #[test]
    fn report_closed_matches_oracle() {
        let cfg = OracleConfig::default();
        for p in [params(5, 2, 1, 2), params(7, 2, 1, 2), params(13, 3, 4, 2)] {
            let closed = report_closed(&p, &cfg).unwrap();
            let oracle = SemigroupReport::oracle(&build_generators(&p).unwrap(), &cfg).unwrap();
            assert_eq!(closed.frobenius, oracle.frobenius);
            assert_eq!(closed.genus, oracle.genus);
            assert_eq!(closed.pf, oracle.pf);
            assert_eq!(closed.engine, Engine::ClosedForm);
        }
    }
}
