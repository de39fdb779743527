//! Exact counts for Vinogradov systems and the divisor-type bounds used
//! alongside them.
//!
//! `J_b(N; rho)` counts pairs of `rho`-tuples `m, n` in `[1, N]^rho` with
//! `sum m_i^j = sum n_i^j` for `1 <= j <= b`. Each tuple is reduced to its
//! vector of power sums; `J` is the sum of squared multiplicities.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::diophantine::clamped_reciprocal;
use crate::error::{invalid, Error, Result};
use crate::stats::CompensatedSum;
use crate::torus::TorusScalar;
#[allow(unused_imports)] // inherent under std
use num_traits::Float;

/// Largest number of `rho`-tuples enumerated by one count.
pub const TUPLE_LIMIT: f64 = 1e7;
/// Largest number of `h` terms in [`s2b_rhs`].
pub const H_LIMIT: f64 = 1e7;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VinogradovCount {
    pub b: u32,
    pub rho: u32,
    pub n: u64,
    #[cfg_attr(feature = "serde", serde(with = "biguint_string"))]
    pub j: BigUint,
}

#[cfg(feature = "serde")]
mod biguint_string {
    use alloc::string::{String, ToString};
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Packs power sums `s_1..s_b` of tuples from `[1, N]^rho` into one `u128`
/// with radix `rho N^j + 1` for digit `j`.
struct KeyPacker {
    radices: Vec<u128>,
}

impl KeyPacker {
    fn new(n: u64, b: u32, rho: u32) -> Result<Self> {
        let mut radices = Vec::with_capacity(b as usize);
        let mut span: u128 = 1;
        for j in 1..=b {
            let radix = (n as u128)
                .checked_pow(j)
                .and_then(|p| p.checked_mul(rho as u128))
                .and_then(|p| p.checked_add(1))
                .ok_or_else(too_wide)?;
            span = span.checked_mul(radix).ok_or_else(too_wide)?;
            radices.push(radix);
        }
        Ok(KeyPacker { radices })
    }

    fn pack(&self, sums: &[u128]) -> u128 {
        sums.iter()
            .zip(&self.radices)
            .rev()
            .fold(0, |acc, (&s, &r)| acc * r + s)
    }
}

fn too_wide() -> Error {
    Error::Infeasible {
        what: "power-sum key width",
        estimate: f64::INFINITY,
        limit: 128.0,
    }
}

fn check_tuples(n: u64, rho: u32) -> Result<()> {
    let tuples = (n as f64).powi(rho as i32);
    if tuples > TUPLE_LIMIT {
        return Err(Error::Infeasible {
            what: "rho-tuple enumeration",
            estimate: tuples,
            limit: TUPLE_LIMIT,
        });
    }
    Ok(())
}

/// Calls `f(power sums, ordered multiplicity)` for every non-decreasing
/// tuple in `[1, N]^rho`; `powers` holds the power sums of degrees `1..=b`.
fn for_each_multiset(n: u64, b: u32, rho: u32, f: &mut impl FnMut(&[u128], u64)) {
    let rho = rho as usize;
    let b = b as usize;
    let fact: Vec<u64> = (0..=rho as u64)
        .scan(1u64, |a, k| {
            if k > 0 {
                *a *= k;
            }
            Some(*a)
        })
        .collect();
    let mut tuple = vec![1u64; rho];
    let mut sums = vec![0u128; b * (rho + 1)];
    // row r of `sums` holds the power sums of tuple[..r]
    let fill = |sums: &mut Vec<u128>, tuple: &[u64], from: usize| {
        for r in from..rho {
            let v = tuple[r] as u128;
            let mut p = 1u128;
            for j in 0..b {
                p *= v;
                sums[(r + 1) * b + j] = sums[r * b + j] + p;
            }
        }
    };
    fill(&mut sums, &tuple, 0);
    loop {
        let mut weight = fact[rho];
        let mut run = 1usize;
        for r in 1..=rho {
            if r < rho && tuple[r] == tuple[r - 1] {
                run += 1;
            } else {
                weight /= fact[run];
                run = 1;
            }
        }
        f(&sums[rho * b..], weight);

        let Some(pos) = (0..rho).rev().find(|&r| tuple[r] < n) else {
            return;
        };
        let v = tuple[pos] + 1;
        for t in &mut tuple[pos..] {
            *t = v;
        }
        fill(&mut sums, &tuple, pos);
    }
}

/// Multiplicities of packed power-sum keys, sorted by key.
fn multiplicities(n: u64, b: u32, rho: u32) -> Result<Vec<(u128, u64)>> {
    let packer = KeyPacker::new(n, b, rho)?;
    let mut keys = Vec::new();
    for_each_multiset(n, b, rho, &mut |sums, w| keys.push((packer.pack(sums), w)));
    Ok(reduce_sorted(keys))
}

fn reduce_sorted<K: Ord + Copy>(mut keys: Vec<(K, u64)>) -> Vec<(K, u64)> {
    keys.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(K, u64)> = Vec::with_capacity(keys.len());
    for (k, w) in keys {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += w,
            _ => out.push((k, w)),
        }
    }
    out
}

/// `J_b(N; rho)`.
pub fn vinogradov_count(n: u64, b: u32, rho: u32) -> Result<VinogradovCount> {
    if n == 0 || b == 0 || rho == 0 {
        return Err(invalid("N, b and rho must be positive"));
    }
    check_tuples(n, rho)?;
    let j = multiplicities(n, b, rho)?
        .iter()
        .fold(BigUint::zero(), |acc, &(_, m)| acc + BigUint::from(m) * m);
    Ok(VinogradovCount { b, rho, n, j })
}

/// `J / (N^(rho + eps) + N^(2 rho - b(b+1)/2 + eps))`.
pub fn bdg_ratio(count: &VinogradovCount, epsilon: f64) -> f64 {
    let n = count.n as f64;
    let rho = count.rho as f64;
    let b = count.b as f64;
    let denom = n.powf(rho + epsilon) + n.powf(2.0 * rho - b * (b + 1.0) / 2.0 + epsilon);
    count.j.to_f64().unwrap_or(f64::INFINITY) / denom
}

/// `tau_n(M)`, the number of ordered `n`-tuples of positive integers with
/// product `M`.
pub fn ordered_factorizations(m: u64, n: u32) -> Result<u64> {
    if m == 0 || n == 0 {
        return Err(invalid("M and n must be positive"));
    }
    let mut divisors: Vec<u64> = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            divisors.push(d);
            if d * d != m {
                divisors.push(m / d);
            }
        }
        d += 1;
    }
    divisors.sort_unstable();
    // counts[i] = tau_k(divisors[i]) for the current k
    let mut counts = vec![1u64; divisors.len()];
    for _ in 1..n {
        let next: Vec<u64> = divisors
            .iter()
            .map(|&t| {
                divisors
                    .iter()
                    .zip(&counts)
                    .take_while(|(&e, _)| e <= t)
                    .filter(|(&e, _)| t % e == 0)
                    .map(|(_, &c)| c)
                    .sum()
            })
            .collect();
        counts = next;
    }
    Ok(*counts.last().expect("M has the divisor M"))
}

/// `tau_n(M)` for every `M` in `1..=max`, from the prime factorization:
/// `tau_n(p^e) = C(e + n - 1, n - 1)`.
pub fn ordered_factorization_table(max: u64, n: u32) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let len = max as usize + 1;
    let mut spf = vec![0u32; len];
    for i in 2..len {
        if spf[i] == 0 {
            let mut j = i;
            while j < len {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let choose = |e: u64| -> u64 {
        let k = n as u64 - 1;
        (1..=k).fold(1u64, |acc, i| acc * (e + i) / i)
    };
    let mut tau = vec![0u64; len];
    if len > 1 {
        tau[1] = 1;
    }
    for m in 2..len {
        let p = spf[m] as usize;
        let mut rest = m / p;
        let mut e = 1;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        tau[m] = tau[rest] * choose(e);
    }
    Ok(tau)
}

/// `R_2(h)`: solutions of `s_j(m) = s_j(n)` for `j <= b - 2` and
/// `s_{b-1}(m) = h + s_{b-1}(n)` with all variables in `[1, 3N]`.
pub fn shifted_count_r2(n: u64, b: u32, rho: u32, h: i128) -> Result<BigUint> {
    let table = R2Table::new(n, b, rho)?;
    Ok(table.count(h))
}

/// Multiplicity map reused across many shifts `h`.
pub struct R2Table {
    /// sorted by (low key, top power sum)
    entries: Vec<((u128, u128), u64)>,
}

impl R2Table {
    pub fn new(n: u64, b: u32, rho: u32) -> Result<Self> {
        if n == 0 || rho == 0 {
            return Err(invalid("N and rho must be positive"));
        }
        if b < 2 {
            return Err(invalid("R_2 needs b >= 2"));
        }
        let box_n = 3 * n;
        check_tuples(box_n, rho)?;
        KeyPacker::new(box_n, b - 1, rho)?;
        let low = b - 2;
        let packer = KeyPacker::new(box_n, low, rho)?;
        let mut keys = Vec::new();
        for_each_multiset(box_n, b - 1, rho, &mut |sums, w| {
            keys.push(((packer.pack(&sums[..low as usize]), sums[low as usize]), w));
        });
        Ok(R2Table {
            entries: reduce_sorted(keys),
        })
    }

    pub fn count(&self, h: i128) -> BigUint {
        let mut total = BigUint::zero();
        for &((low, top), mult) in &self.entries {
            let Some(target) = (top as i128).checked_sub(h).filter(|&t| t >= 0) else {
                continue;
            };
            let key = (low, target as u128);
            if let Ok(i) = self.entries.binary_search_by(|e| e.0.cmp(&key)) {
                total += BigUint::from(mult) * self.entries[i].1;
            }
        }
        total
    }
}

/// `N^((b-1)(b-2)/2 - 1) J_{b-1}(3N; rho) sum_{|h| <= 2 rho b N^(b-1)}
/// min(N, 1/||h alpha_b||)`.
pub fn s2b_rhs(n: u64, b: u32, rho: u32, alpha_b: TorusScalar) -> Result<f64> {
    if b < 3 {
        return Err(invalid("s2b_rhs needs b >= 3"));
    }
    if n == 0 || rho == 0 {
        return Err(invalid("N and rho must be positive"));
    }
    let h_max = 2.0 * rho as f64 * b as f64 * (n as f64).powi(b as i32 - 1);
    if 2.0 * h_max + 1.0 > H_LIMIT {
        return Err(Error::Infeasible {
            what: "s2b_rhs h-sum",
            estimate: 2.0 * h_max + 1.0,
            limit: H_LIMIT,
        });
    }
    let j = vinogradov_count(3 * n, b - 1, rho)?.j.to_f64().unwrap_or(f64::INFINITY);
    let cap = n as f64;
    let mut sum = CompensatedSum::default();
    sum.add(cap);
    let mut acc = TorusScalar::ZERO;
    for _ in 1..=h_max as u64 {
        acc += alpha_b;
        // ||h a|| = ||-h a||
        sum.add(2.0 * clamped_reciprocal(acc, cap));
    }
    let exponent = ((b - 1) * (b - 2)) as f64 / 2.0 - 1.0;
    Ok(cap.powf(exponent) * j * sum.value())
}
