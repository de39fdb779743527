//! Integer arithmetic modulo `2^128`.
//!
//! Multiplying a [`TorusScalar`](crate::TorusScalar) by an integer only needs
//! that integer modulo `2^128`, so huge binomial coefficients never have to be
//! materialized.

/// Inverse of an odd number modulo `2^128` (Newton iteration, each step
/// doubles the number of correct low bits).
pub fn odd_inverse(a: u128) -> u128 {
    debug_assert!(a & 1 == 1);
    // a * a == 1 (mod 8), so `a` is correct to 3 bits.
    let mut x = a;
    for _ in 0..6 {
        x = x.wrapping_mul(2u128.wrapping_sub(a.wrapping_mul(x)));
    }
    x
}

/// Generalized binomial coefficient `C(n, j) = n (n-1) ... (n-j+1) / j!`
/// modulo `2^128`, for any signed `n`.
///
/// Factors are split into a power of two and an odd part; the odd part of
/// `j!` is inverted modulo `2^128`.
pub fn binomial_mod(n: i128, j: u32) -> u128 {
    if j == 0 {
        return 1;
    }
    let mut twos: u32 = 0;
    let mut odd: u128 = 1;
    let mut negative = false;
    for i in 0..j as i128 {
        let f = n - i;
        if f == 0 {
            return 0;
        }
        negative ^= f < 0;
        let m = f.unsigned_abs();
        let tz = m.trailing_zeros();
        twos += tz;
        odd = odd.wrapping_mul(m >> tz);
    }
    let mut den_twos: u32 = 0;
    let mut den_odd: u128 = 1;
    for i in 2..=j as u128 {
        let tz = i.trailing_zeros();
        den_twos += tz;
        den_odd = den_odd.wrapping_mul(i >> tz);
    }
    let shift = twos - den_twos;
    if shift >= 128 {
        return 0;
    }
    let v = odd.wrapping_mul(odd_inverse(den_odd)) << shift;
    if negative {
        v.wrapping_neg()
    } else {
        v
    }
}

/// Signed Stirling numbers of the first kind `s(j, k)` for `0 <= k <= j <=
/// max`, so that `j! C(n, j) = sum_k s(j, k) n^k`.
pub fn stirling_first(max: usize) -> alloc::vec::Vec<alloc::vec::Vec<i128>> {
    let mut s = alloc::vec![alloc::vec![0i128; max + 1]; max + 1];
    s[0][0] = 1;
    for j in 1..=max {
        for k in 1..=j {
            s[j][k] = s[j - 1][k - 1] - (j as i128 - 1) * s[j - 1][k];
        }
    }
    s
}
