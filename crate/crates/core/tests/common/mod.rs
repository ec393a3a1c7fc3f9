//! Brute-force reference for small semigroups: a membership sieve, with
//! every quantity read directly off the definition. Shares no code with the
//! library's Apéry machinery.

#![allow(dead_code)]

pub struct Sieved {
    pub frobenius: i64,
    pub genus: u64,
    pub apery: Vec<u64>,
    pub gaps: Vec<u64>,
    pub pf: Vec<i64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn coprime(gens: &[u64]) -> bool {
    gens.iter().fold(0, |g, &x| gcd(g, x)) == 1
}

/// Everything past `min * max` is in the semigroup (Schur's bound), so the
/// sieve stops a little beyond it.
pub fn sieve(gens: &[u64]) -> Sieved {
    assert!(coprime(gens));
    let a = *gens.iter().min().unwrap();
    let top = *gens.iter().max().unwrap();
    let limit = (a * top + 2 * top) as usize;
    let mut member = vec![false; limit + 1];
    member[0] = true;
    for n in 1..=limit {
        member[n] = gens
            .iter()
            .any(|&g| g as usize <= n && member[n - g as usize]);
    }
    let contains = |n: i64| n >= 0 && (n as usize > limit || member[n as usize]);

    let gaps: Vec<u64> = (1..=limit as u64)
        .filter(|&n| !member[n as usize])
        .collect();
    let frobenius = gaps.last().map_or(-1, |&g| g as i64);
    let apery = (0..a)
        .map(|r| {
            (r..=limit as u64)
                .step_by(a as usize)
                .find(|&n| member[n as usize])
                .unwrap()
        })
        .collect();
    let pf = (-1..=frobenius)
        .filter(|&u| !contains(u) && gens.iter().all(|&g| contains(u + g as i64)))
        .collect();
    Sieved {
        frobenius,
        genus: gaps.len() as u64,
        apery,
        gaps,
        pf,
    }
}

/// Minimum coin count for `amount`, by enumerating
/// multiplicities of the largest coin recursively.
pub fn brute_opt(coins: &[u64], amount: u64) -> u64 {
    fn go(coins: &[u64], amount: u64) -> u64 {
        match coins.split_last() {
            None => {
                if amount == 0 {
                    0
                } else {
                    u64::MAX
                }
            }
            Some((&c, rest)) => (0..=amount / c)
                .filter_map(|x| {
                    let sub = go(rest, amount - x * c);
                    (sub != u64::MAX).then(|| sub + x)
                })
                .min()
                .unwrap_or(u64::MAX),
        }
    }
    go(coins, amount)
}

/// `opt` for every amount `0..=max` over coins that include 1.
pub fn opt_table(coins: &[u64], max: u64) -> Vec<u64> {
    let mut table = vec![0u64; max as usize + 1];
    for m in 1..=max as usize {
        table[m] = coins
            .iter()
            .filter(|&&c| c as usize <= m)
            .map(|&c| table[m - c as usize] + 1)
            .min()
            .unwrap();
    }
    table
}
