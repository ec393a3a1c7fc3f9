//! Family-agnostic numerical-semigroup engine.
//!
//! Everything here is derived from the Apéry set of the least generator `a`:
//! `N_r` is the least element of the semigroup congruent to `r` modulo `a`.
//! The Apéry set is found by a Dijkstra relaxation over the residue graph
//! `Z_a`, where every other generator `g` contributes the edges
//! `r -> (r + g) mod a` of weight `g`.
//!
//! This module is the reference oracle the closed forms are checked against,
//! so it deliberately knows nothing about any particular generator family.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of residue classes the oracle will allocate.
pub const DEFAULT_RESIDUE_CAP: usize = 10_000_000;

/// Oracle feasibility limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub residue_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            residue_cap: DEFAULT_RESIDUE_CAP,
        }
    }
}

impl OracleConfig {
    pub fn with_residue_cap(residue_cap: usize) -> Self {
        Self { residue_cap }
    }

    /// Converts `modulus` to an index bound, failing if it is above the cap.
    pub(crate) fn residues(&self, modulus: &BigUint) -> Result<usize> {
        match modulus.to_usize() {
            Some(m) if m <= self.residue_cap => Ok(m),
            _ => Err(Error::ModulusTooLarge {
                modulus: modulus.clone(),
                cap: self.residue_cap,
            }),
        }
    }
}

/// A canonical (sorted, duplicate-free) generating list with gcd 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorList {
    elements: Vec<BigUint>,
}

impl GeneratorList {
    /// Sorts and dedupes `elements`; rejects an empty list, a zero entry or
    /// a gcd other than 1.
    pub fn new(mut elements: Vec<BigUint>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        if elements.iter().any(Zero::is_zero) {
            return Err(Error::ZeroGenerator);
        }
        elements.sort();
        elements.dedup();
        let gcd = elements.iter().fold(BigUint::zero(), |acc, g| acc.gcd(g));
        if !gcd.is_one() {
            return Err(Error::NotCoprime { gcd });
        }
        Ok(Self { elements })
    }

    pub fn from_u64s(elements: &[u64]) -> Result<Self> {
        Self::new(elements.iter().map(|&g| BigUint::from(g)).collect())
    }

    pub fn elements(&self) -> &[BigUint] {
        &self.elements
    }

    /// The least generator, used as the Apéry modulus.
    pub fn least(&self) -> &BigUint {
        &self.elements[0]
    }

    pub fn largest(&self) -> &BigUint {
        self.elements.last().expect("non-empty by construction")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for GeneratorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// Apéry set of the modulus `a`: `minima[r]` is the least element `≡ r (mod a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AperySet {
    modulus: BigUint,
    minima: Vec<BigUint>,
}

impl AperySet {
    /// Assembles an Apéry set from raw parts, checking the structural
    /// invariants (`minima[0] = 0`, `minima[r] ≡ r`, length = modulus).
    /// Membership minimality is not checked here.
    pub fn from_parts(modulus: BigUint, minima: Vec<BigUint>) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::InconsistentApery("modulus is zero".into()));
        }
        if BigUint::from(minima.len()) != modulus {
            return Err(Error::InconsistentApery(format!(
                "{} minima for modulus {}",
                minima.len(),
                modulus
            )));
        }
        if !minima[0].is_zero() {
            return Err(Error::InconsistentApery("N_0 is not 0".into()));
        }
        for (r, n) in minima.iter().enumerate() {
            if n % &modulus != BigUint::from(r) {
                return Err(Error::InconsistentApery(format!(
                    "N_{r} = {n} is not congruent to {r} mod {modulus}"
                )));
            }
        }
        Ok(Self { modulus, minima })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn minima(&self) -> &[BigUint] {
        &self.minima
    }

    pub fn into_minima(self) -> Vec<BigUint> {
        self.minima
    }

    /// `max_r N_r - a`; equals -1 exactly when the semigroup is ℕ.
    pub fn frobenius(&self) -> BigInt {
        let max = self.minima.iter().max().expect("non-empty");
        BigInt::from(max.clone()) - BigInt::from(self.modulus.clone())
    }

    /// `(Σ_{r≥1} N_r)/a - (a-1)/2`, computed as `(2ΣN_r - a(a-1)) / 2a`.
    pub fn genus(&self) -> Result<BigUint> {
        let a = BigInt::from(self.modulus.clone());
        let sum: BigUint = self.minima.iter().sum();
        let numerator = BigInt::from(sum) * 2u32 - &a * (&a - 1u32);
        let denominator = &a * 2u32;
        let (q, rem) = numerator.div_rem(&denominator);
        if !rem.is_zero() {
            return Err(Error::InconsistentApery(format!(
                "genus numerator {numerator} is not divisible by {denominator}"
            )));
        }
        q.to_biguint()
            .ok_or_else(|| Error::InconsistentApery(format!("negative genus {q}")))
    }

    /// `n ∈ S` iff `n ≥ N_{n mod a}`.
    pub fn contains(&self, n: &BigInt) -> bool {
        let Some(n) = n.to_biguint() else {
            return false;
        };
        let r = (&n % &self.modulus)
            .to_usize()
            .expect("residue below modulus fits usize");
        n >= self.minima[r]
    }

    /// All positive integers outside the semigroup, ascending. Class `r`
    /// contributes `N_r - a, N_r - 2a, …` down to the last positive value.
    pub fn gaps(&self) -> Vec<BigUint> {
        let mut out = Vec::new();
        for n in &self.minima {
            let mut g = n.clone();
            while g >= self.modulus {
                g -= &self.modulus;
                if g.is_zero() {
                    break;
                }
                out.push(g.clone());
            }
        }
        out.sort();
        out
    }

    /// Pseudo-Frobenius numbers: `w - a` for each `w` maximal in the Apéry
    /// set under `w ⪯ w'` iff `w' - w ∈ S`. Every pair is tested, so the cost
    /// is quadratic in the modulus.
    pub fn pseudo_frobenius(&self) -> Vec<BigInt> {
        let maximal = match self.minima_u128() {
            Some(small) => maximal_indices(&small),
            None => maximal_indices(&self.minima),
        };
        let a = BigInt::from(self.modulus.clone());
        let mut pf: Vec<BigInt> = maximal
            .into_iter()
            .map(|r| BigInt::from(self.minima[r].clone()) - &a)
            .collect();
        pf.sort();
        pf
    }

    fn minima_u128(&self) -> Option<Vec<u128>> {
        // Leave headroom so that w + N_s cannot overflow.
        self.minima
            .iter()
            .map(|n| n.to_u128().filter(|&v| v < u128::MAX / 2))
            .collect()
    }
}

/// Residues `r` whose `N_r` is not strictly below another Apéry element.
/// `N_r ⪯ N_t` iff `N_t - N_r ∈ S` iff `N_t ≥ N_r + N_{(t-r) mod a}`.
fn maximal_indices<W>(minima: &[W]) -> Vec<usize>
where
    W: Ord,
    for<'x> &'x W: Add<&'x W, Output = W>,
{
    let a = minima.len();
    (0..a)
        .filter(|&r| {
            !(0..a).any(|t| {
                if t == r {
                    return false;
                }
                let diff_class = (t + a - r) % a;
                minima[t] >= &minima[r] + &minima[diff_class]
            })
        })
        .collect()
}

/// Computes the Apéry set of the least generator with the default cap.
pub fn apery_set(gens: &GeneratorList) -> Result<AperySet> {
    apery_set_with(gens, &OracleConfig::default())
}

/// Computes the Apéry set of the least generator by shortest paths over the
/// residues modulo `a`.
pub fn apery_set_with(gens: &GeneratorList, config: &OracleConfig) -> Result<AperySet> {
    let modulus = gens.least().clone();
    let a = config.residues(&modulus)?;

    // Every N_r is at most (a-1) * max generator; use machine words when
    // that bound leaves room for one more edge.
    let bound = BigUint::from(a) * gens.largest() * 2u32;
    let minima = if bound.bits() < 127 {
        let steps: Vec<(usize, u128)> = edges(gens, &modulus)
            .map(|(r, g)| (r, g.to_u128().expect("bounded")))
            .collect();
        dijkstra(a, &steps).into_iter().map(BigUint::from).collect()
    } else {
        let steps: Vec<(usize, BigUint)> =
            edges(gens, &modulus).map(|(r, g)| (r, g.clone())).collect();
        dijkstra(a, &steps)
    };
    Ok(AperySet { modulus, minima })
}

/// `(g mod a, g)` for every non-least generator that moves between classes.
fn edges<'g>(
    gens: &'g GeneratorList,
    modulus: &'g BigUint,
) -> impl Iterator<Item = (usize, &'g BigUint)> + 'g {
    gens.elements()[1..].iter().filter_map(move |g| {
        let step = (g % modulus).to_usize().expect("residue fits usize");
        (step != 0).then_some((step, g))
    })
}

fn dijkstra<W>(a: usize, steps: &[(usize, W)]) -> Vec<W>
where
    W: Ord + Clone + Zero,
    for<'x> &'x W: Add<&'x W, Output = W>,
{
    let mut dist: Vec<Option<W>> = vec![None; a];
    let mut done = vec![false; a];
    let mut heap = BinaryHeap::new();
    dist[0] = Some(W::zero());
    heap.push(Reverse(HeapEntry(W::zero(), 0)));

    while let Some(Reverse(HeapEntry(d, r))) = heap.pop() {
        if done[r] {
            continue;
        }
        done[r] = true;
        for (step, weight) in steps {
            let next = (r + step) % a;
            if done[next] {
                continue;
            }
            let candidate = &d + weight;
            let improves = match &dist[next] {
                Some(current) => candidate < *current,
                None => true,
            };
            if improves {
                dist[next] = Some(candidate.clone());
                heap.push(Reverse(HeapEntry(candidate, next)));
            }
        }
    }

    dist.into_iter()
        .map(|d| d.expect("gcd 1 makes every residue reachable"))
        .collect()
}

#[derive(PartialEq, Eq)]
struct HeapEntry<W>(W, usize);

impl<W: Ord> PartialOrd for HeapEntry<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Ord> Ord for HeapEntry<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Which evaluator produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Engine {
    #[serde(rename = "oracle")]
    Oracle,
    #[serde(rename = "closed-form")]
    ClosedForm,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Oracle => "oracle",
            Engine::ClosedForm => "closed-form",
        })
    }
}

/// Frobenius number, genus, pseudo-Frobenius set and type of one semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupReport {
    pub frobenius: BigInt,
    pub genus: BigUint,
    /// Ascending; the last entry is the Frobenius number.
    pub pf: Vec<BigInt>,
    pub engine: Engine,
}

impl SemigroupReport {
    pub fn from_apery(ape: &AperySet) -> Result<Self> {
        Ok(Self {
            frobenius: ape.frobenius(),
            genus: ape.genus()?,
            pf: ape.pseudo_frobenius(),
            engine: Engine::Oracle,
        })
    }

    pub fn oracle(gens: &GeneratorList, config: &OracleConfig) -> Result<Self> {
        Self::from_apery(&apery_set_with(gens, config)?)
    }

    /// The type `t = |PF|`.
    pub fn semigroup_type(&self) -> usize {
        self.pf.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn ape(gens: &[u64]) -> AperySet {
        apery_set(&GeneratorList::from_u64s(gens).unwrap()).unwrap()
    }

    #[test]
    fn apery_examples() {
        assert_eq!(ape(&[3, 7]).minima(), big(&[0, 7, 14]).as_slice());
        assert_eq!(ape(&[2, 3]).minima(), big(&[0, 3]).as_slice());
        assert_eq!(
            ape(&[5, 11, 23]).minima(),
            big(&[0, 11, 22, 23, 34]).as_slice()
        );
        assert_eq!(
            ape(&[7, 23, 71]).minima(),
            big(&[0, 71, 23, 94, 46, 117, 69]).as_slice()
        );
    }

    #[test]
    fn frobenius_and_genus_examples() {
        for (gens, f, g) in [
            (&[3u64, 7][..], 11i64, 6u64),
            (&[2, 3], 1, 1),
            (&[5, 11, 23], 29, 16),
            (&[7, 15, 31], 55, 32),
        ] {
            let ape = ape(gens);
            assert_eq!(ape.frobenius(), BigInt::from(f), "{gens:?}");
            assert_eq!(ape.genus().unwrap(), BigUint::from(g), "{gens:?}");
        }
    }

    #[test]
    fn contains_examples() {
        let s37 = ape(&[3, 7]);
        assert!(!s37.contains(&BigInt::from(11)));
        assert!(s37.contains(&BigInt::from(0)));
        assert!(!s37.contains(&BigInt::from(-3)));
        assert!(ape(&[5, 11, 23]).contains(&BigInt::from(33)));
    }

    #[test]
    fn gaps_examples() {
        assert_eq!(ape(&[2, 3]).gaps(), big(&[1]));
        assert_eq!(ape(&[3, 7]).gaps(), big(&[1, 2, 4, 5, 8, 11]));
        let g = ape(&[5, 11, 23]).gaps();
        assert_eq!(g.len(), 16);
        assert_eq!(g.last(), Some(&BigUint::from(29u32)));
    }

    #[test]
    fn pseudo_frobenius_examples() {
        assert_eq!(ape(&[3, 7]).pseudo_frobenius(), ints(&[11]));
        assert_eq!(ape(&[7, 15, 31]).pseudo_frobenius(), ints(&[54, 55]));
        assert_eq!(ape(&[5, 11, 23]).pseudo_frobenius(), ints(&[17, 29]));
        assert_eq!(ape(&[7, 23, 71]).pseudo_frobenius(), ints(&[62, 110]));
    }

    #[test]
    fn naturals_convention() {
        let ape = ape(&[1, 5]);
        assert_eq!(ape.frobenius(), BigInt::from(-1));
        assert_eq!(ape.genus().unwrap(), BigUint::zero());
        assert_eq!(ape.pseudo_frobenius(), ints(&[-1]));
        assert!(ape.gaps().is_empty());
    }

    #[test]
    fn canonicalizes_and_rejects() {
        let g = GeneratorList::from_u64s(&[23, 5, 11, 5]).unwrap();
        assert_eq!(g.elements(), big(&[5, 11, 23]).as_slice());
        assert_eq!(GeneratorList::from_u64s(&[]), Err(Error::EmptyGenerators));
        assert_eq!(GeneratorList::from_u64s(&[0, 3]), Err(Error::ZeroGenerator));
        assert!(matches!(
            GeneratorList::from_u64s(&[4, 6, 10]),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn residue_cap_is_enforced() {
        let gens = GeneratorList::from_u64s(&[1001, 1002]).unwrap();
        let err = apery_set_with(&gens, &OracleConfig::with_residue_cap(1000)).unwrap_err();
        assert!(matches!(err, Error::ModulusTooLarge { cap: 1000, .. }));
    }

    #[test]
    fn big_generators_use_wide_path() {
        // Elements far beyond u128 still resolve through the BigUint path.
        let huge = BigUint::from(2u32).pow(200) + 1u32;
        let gens = GeneratorList::new(vec![BigUint::from(3u32), huge.clone()]).unwrap();
        let ape = apery_set(&gens).unwrap();
        let f = ape.frobenius();
        // Two generators: F = 3h - 3 - h.
        let h = BigInt::from(huge);
        assert_eq!(f, &h * 3 - 3 - &h);
    }

    #[test]
    fn corrupted_apery_is_detected() {
        assert!(AperySet::from_parts(BigUint::from(3u32), big(&[0, 7])).is_err());
        assert!(AperySet::from_parts(BigUint::from(3u32), big(&[0, 8, 14])).is_err());
        assert!(AperySet::from_parts(BigUint::from(3u32), big(&[3, 7, 14])).is_err());
        let ok = AperySet::from_parts(BigUint::from(3u32), big(&[0, 7, 14])).unwrap();
        assert_eq!(ok.genus().unwrap(), BigUint::from(6u32));
    }
}
