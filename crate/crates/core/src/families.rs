//! Named semigroups from the literature that are instances of the family
//! `A(a, b, d, k)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::changemaking::repunit;
use crate::closed_forms::FamilyParams;
use crate::error::{Error, Result};

/// A named family instantiated at concrete parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `S(n)`: `a = 2^n - 1`, `b = 2`, `d = 1`, `k = n - 1`.
    Mersenne { n: u32 },
    /// `T(n)`: `a = 3·2^n - 1`, `b = 2`, `d = 1`, `k = n + 1`.
    Thabit { n: u32 },
    /// `S(m, n)`: `a = (2^m - 1)·2^n - 1`, `b = 2`, `d = 1`, `k = n + m - 1`.
    GuZeTang { m: u32, n: u32 },
    /// `GT(n, m)`: `a = (2^m + 1)·2^n - (2^m - 1)`, `b = 2`, `d = 2^m - 1`,
    /// `k = n + δ`.
    SongGt { n: u32, m: u32 },
    /// `a = m(2^k - 1) + 2^{k-1} - 1`, `b = 2`, free `d` coprime to `a`.
    LiuXin { m: u32, k: u32, d: BigUint },
    /// `S(b, n)`: `a = (b^n - 1)/(b - 1)`, `d = 1`, `k = n - 1`.
    Repunit { b: u32, n: u32 },
    /// `a = b^{n+1} + (b^n - 1)/(b - 1)`, `d = 1`, `k = n + 1`.
    GuZe { b: u32, n: u32 },
    /// `T_{b,1}(n)`: `a = (b+1)·b^n - 1`, `d = b - 1`, `k = n + 1`.
    ThabitBaseB { b: u32, n: u32 },
}

/// CLI-stable family identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Mersenne,
    Thabit,
    GuZeTang,
    SongGt,
    LiuXin,
    Repunit,
    GuZe,
    ThabitBaseB,
}

impl FamilyName {
    pub const ALL: [FamilyName; 8] = [
        FamilyName::Mersenne,
        FamilyName::Thabit,
        FamilyName::GuZeTang,
        FamilyName::SongGt,
        FamilyName::LiuXin,
        FamilyName::Repunit,
        FamilyName::GuZe,
        FamilyName::ThabitBaseB,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Mersenne => "mersenne",
            FamilyName::Thabit => "thabit",
            FamilyName::GuZeTang => "gu-ze-tang",
            FamilyName::SongGt => "song-gt",
            FamilyName::LiuXin => "liu-xin",
            FamilyName::Repunit => "repunit",
            FamilyName::GuZe => "gu-ze",
            FamilyName::ThabitBaseB => "thabit-base-b",
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family `{s}`")))
    }
}

/// Loose parameter bag, as collected from the command line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FamilyArgs {
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub b: Option<u32>,
    pub k: Option<u32>,
    pub d: Option<BigUint>,
}

fn invalid(family: FamilyName, reason: impl Into<String>) -> Error {
    Error::InvalidFamilyParams {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn need(family: FamilyName, value: Option<u32>, name: &str) -> Result<u32> {
    value.ok_or_else(|| invalid(family, format!("missing parameter {name}")))
}

fn at_least(family: FamilyName, value: u32, min: u32, name: &str) -> Result<()> {
    if value < min {
        return Err(invalid(
            family,
            format!("{name} = {value} violates {name} >= {min}"),
        ));
    }
    Ok(())
}

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e as usize
}

impl FamilySpec {
    /// Assembles a spec from a loose argument bag. `liu-xin` takes `d`
    /// (default 1); the other families ignore it.
    pub fn from_args(name: FamilyName, args: &FamilyArgs) -> Result<Self> {
        let spec = match name {
            FamilyName::Mersenne => FamilySpec::Mersenne {
                n: need(name, args.n, "n")?,
            },
            FamilyName::Thabit => FamilySpec::Thabit {
                n: need(name, args.n, "n")?,
            },
            FamilyName::GuZeTang => FamilySpec::GuZeTang {
                m: need(name, args.m, "m")?,
                n: need(name, args.n, "n")?,
            },
            FamilyName::SongGt => FamilySpec::SongGt {
                n: need(name, args.n, "n")?,
                m: need(name, args.m, "m")?,
            },
            FamilyName::LiuXin => FamilySpec::LiuXin {
                m: need(name, args.m, "m")?,
                k: need(name, args.k, "k")?,
                d: args.d.clone().unwrap_or_else(BigUint::one),
            },
            FamilyName::Repunit => FamilySpec::Repunit {
                b: need(name, args.b, "b")?,
                n: need(name, args.n, "n")?,
            },
            FamilyName::GuZe => FamilySpec::GuZe {
                b: need(name, args.b, "b")?,
                n: need(name, args.n, "n")?,
            },
            FamilyName::ThabitBaseB => FamilySpec::ThabitBaseB {
                b: need(name, args.b, "b")?,
                n: need(name, args.n, "n")?,
            },
        };
        Ok(spec)
    }

    pub fn name(&self) -> FamilyName {
        match self {
            FamilySpec::Mersenne { .. } => FamilyName::Mersenne,
            FamilySpec::Thabit { .. } => FamilyName::Thabit,
            FamilySpec::GuZeTang { .. } => FamilyName::GuZeTang,
            FamilySpec::SongGt { .. } => FamilyName::SongGt,
            FamilySpec::LiuXin { .. } => FamilyName::LiuXin,
            FamilySpec::Repunit { .. } => FamilyName::Repunit,
            FamilySpec::GuZe { .. } => FamilyName::GuZe,
            FamilySpec::ThabitBaseB { .. } => FamilyName::ThabitBaseB,
        }
    }

    /// Same spec with `n` replaced, for range sweeps.
    pub fn with_n(&self, n: u32) -> Option<Self> {
        let mut spec = self.clone();
        match &mut spec {
            FamilySpec::Mersenne { n: x }
            | FamilySpec::Thabit { n: x }
            | FamilySpec::GuZeTang { n: x, .. }
            | FamilySpec::SongGt { n: x, .. }
            | FamilySpec::Repunit { n: x, .. }
            | FamilySpec::GuZe { n: x, .. }
            | FamilySpec::ThabitBaseB { n: x, .. } => *x = n,
            FamilySpec::LiuXin { .. } => return None,
        }
        Some(spec)
    }

    /// Maps the family to `(a, b, d, k)`.
    pub fn resolve(&self) -> Result<FamilyParams> {
        let name = self.name();
        let (a, b, d, k) = match *self {
            FamilySpec::Mersenne { n } => {
                at_least(name, n, 2, "n")?;
                (pow2(n) - 1u32, 2, BigUint::one(), n - 1)
            }
            FamilySpec::Thabit { n } => {
                at_least(name, n, 1, "n")?;
                (pow2(n) * 3u32 - 1u32, 2, BigUint::one(), n + 1)
            }
            FamilySpec::GuZeTang { m, n } => {
                at_least(name, n, 1, "n")?;
                at_least(name, m, 2, "m")?;
                if BigUint::from(m) > pow2(n) {
                    return Err(invalid(
                        name,
                        format!("m = {m} violates m <= 2^n = {}", pow2(n)),
                    ));
                }
                (
                    (pow2(m) - 1u32) * pow2(n) - 1u32,
                    2,
                    BigUint::one(),
                    n + m - 1,
                )
            }
            FamilySpec::SongGt { n, m } => {
                at_least(name, m, 2, "m")?;
                let delta = song_gt_delta(n, m);
                let d = pow2(m) - 1u32;
                ((pow2(m) + 1u32) * pow2(n) - &d, 2, d, n + delta)
            }
            FamilySpec::LiuXin { m, k, ref d } => {
                at_least(name, m, 1, "m")?;
                at_least(name, k, 3, "k")?;
                let a = (pow2(k) - 1u32) * m + pow2(k - 1) - 1u32;
                (a, 2, d.clone(), k)
            }
            FamilySpec::Repunit { b, n } => {
                at_least(name, b, 2, "b")?;
                at_least(name, n, 2, "n")?;
                (repunit(b, n), b, BigUint::one(), n - 1)
            }
            FamilySpec::GuZe { b, n } => {
                at_least(name, b, 2, "b")?;
                at_least(name, n, 1, "n")?;
                (
                    BigUint::from(b).pow(n + 1) + repunit(b, n),
                    b,
                    BigUint::one(),
                    n + 1,
                )
            }
            FamilySpec::ThabitBaseB { b, n } => {
                at_least(name, b, 2, "b")?;
                at_least(name, n, 1, "n")?;
                let a = BigUint::from(b + 1) * BigUint::from(b).pow(n) - 1u32;
                (a, b, BigUint::from(b - 1), n + 1)
            }
        };
        FamilyParams::new(a, b, d, k).map_err(|e| invalid(name, e.to_string()))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Mersenne { n } | FamilySpec::Thabit { n } => {
                write!(f, "{}(n={n})", self.name())
            }
            FamilySpec::GuZeTang { m, n } | FamilySpec::SongGt { n, m } => {
                write!(f, "{}(n={n}, m={m})", self.name())
            }
            FamilySpec::LiuXin { m, k, d } => write!(f, "{}(m={m}, k={k}, d={d})", self.name()),
            FamilySpec::Repunit { b, n }
            | FamilySpec::GuZe { b, n }
            | FamilySpec::ThabitBaseB { b, n } => write!(f, "{}(b={b}, n={n})", self.name()),
        }
    }
}

/// `δ = 1` if `n = 0`; `m` if `n ≠ 0` and `m ≤ n`; `m - 1` if `n ≠ 0` and `m > n`.
pub fn song_gt_delta(n: u32, m: u32) -> u32 {
    if n == 0 {
        1
    } else if m <= n {
        m
    } else {
        m - 1
    }
}

/// One free parameter and its lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamBound {
    pub name: &'static str,
    pub min: u32,
    pub note: Option<&'static str>,
}

/// Catalog entry describing a family and how it maps onto `(a, b, d, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyTemplate {
    pub name: FamilyName,
    pub params: Vec<ParamBound>,
    pub a: &'static str,
    pub b: &'static str,
    pub d: &'static str,
    pub k: &'static str,
    /// The smallest admissible parameters.
    #[serde(skip)]
    pub minimal: FamilySpec,
}

fn bound(name: &'static str, min: u32) -> ParamBound {
    ParamBound {
        name,
        min,
        note: None,
    }
}

fn bound_with(name: &'static str, min: u32, note: &'static str) -> ParamBound {
    ParamBound {
        name,
        min,
        note: Some(note),
    }
}

pub fn catalog() -> Vec<FamilyTemplate> {
    vec![
        FamilyTemplate {
            name: FamilyName::Mersenne,
            params: vec![bound("n", 2)],
            a: "2^n - 1",
            b: "2",
            d: "1",
            k: "n - 1",
            minimal: FamilySpec::Mersenne { n: 2 },
        },
        FamilyTemplate {
            name: FamilyName::Thabit,
            params: vec![bound("n", 1)],
            a: "3*2^n - 1",
            b: "2",
            d: "1",
            k: "n + 1",
            minimal: FamilySpec::Thabit { n: 1 },
        },
        FamilyTemplate {
            name: FamilyName::GuZeTang,
            params: vec![bound("n", 1), bound_with("m", 2, "m <= 2^n")],
            a: "(2^m - 1)*2^n - 1",
            b: "2",
            d: "1",
            k: "n + m - 1",
            minimal: FamilySpec::GuZeTang { m: 2, n: 1 },
        },
        FamilyTemplate {
            name: FamilyName::SongGt,
            params: vec![bound("n", 0), bound("m", 2)],
            a: "(2^m + 1)*2^n - (2^m - 1)",
            b: "2",
            d: "2^m - 1",
            k: "n + delta; delta = 1 if n = 0, m if 0 < n and m <= n, m - 1 if 0 < n < m",
            minimal: FamilySpec::SongGt { n: 0, m: 2 },
        },
        FamilyTemplate {
            name: FamilyName::LiuXin,
            params: vec![
                bound("m", 1),
                bound("k", 3),
                bound_with("d", 1, "gcd(a, d) = 1, default 1"),
            ],
            a: "m*(2^k - 1) + 2^(k-1) - 1",
            b: "2",
            d: "d",
            k: "k",
            minimal: FamilySpec::LiuXin {
                m: 1,
                k: 3,
                d: BigUint::one(),
            },
        },
        FamilyTemplate {
            name: FamilyName::Repunit,
            params: vec![bound("b", 2), bound("n", 2)],
            a: "(b^n - 1)/(b - 1)",
            b: "b",
            d: "1",
            k: "n - 1",
            minimal: FamilySpec::Repunit { b: 2, n: 2 },
        },
        FamilyTemplate {
            name: FamilyName::GuZe,
            params: vec![bound("b", 2), bound("n", 1)],
            a: "b^(n+1) + (b^n - 1)/(b - 1)",
            b: "b",
            d: "1",
            k: "n + 1",
            minimal: FamilySpec::GuZe { b: 2, n: 1 },
        },
        FamilyTemplate {
            name: FamilyName::ThabitBaseB,
            params: vec![bound("b", 2), bound("n", 1)],
            a: "(b + 1)*b^n - 1",
            b: "b",
            d: "b - 1",
            k: "n + 1",
            minimal: FamilySpec::ThabitBaseB { b: 2, n: 1 },
        },
    ]
}
