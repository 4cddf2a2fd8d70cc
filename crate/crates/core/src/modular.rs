//! Arithmetic mod 62-bit primes, CRT combination and rational reconstruction.
//!
//! These back the multi-modular strategy of the exact solvers: solve mod a
//! few word-sized primes, combine by CRT, reconstruct rationals, then verify
//! exactly. Bad primes are detected by the final exact verification.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod prime p (p must be prime, a != 0 mod p).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic stream of distinct primes just below 2^62.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> Self {
        PrimeStream { next: (1u64 << 62) - 1 }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
    }
}

/// Symmetric residue in (-m/2, m/2].
pub fn symmetric(r: &BigInt, m: &BigInt) -> BigInt {
    let mut r = r.mod_floor(m);
    if &r * 2 > *m {
        r -= m;
    }
    r
}

/// CRT combine: x = r1 mod m1, x = r2 mod m2 (m1, m2 coprime).
pub fn crt_pair(r1: &BigInt, m1: &BigInt, r2: u64, m2: u64) -> BigInt {
    let m2b = BigInt::from(m2);
    let r1m = r1.mod_floor(&m2b).to_u64().unwrap();
    let m1m = m1.mod_floor(&m2b).to_u64().unwrap();
    let diff = sub_mod(r2 % m2, r1m, m2);
    let t = mul_mod(diff, inv_mod(m1m, m2), m2);
    r1 + m1 * BigInt::from(t)
}

/// Wang rational reconstruction: find n/d with |n|, d <= sqrt(m/2),
/// n = r * d mod m. Returns None when no such fraction exists.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<crate::Rat> {
    let bound = {
        let half = m / 2u32;
        half.sqrt()
    };
    let mut r0 = m.clone();
    let mut r1 = r.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::from(1);
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() {
        return None;
    }
    let (n, d) = if t1.sign() == Sign::Minus {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if d.abs() > bound || d.is_zero() {
        return None;
    }
    if n.gcd(&d) != BigInt::from(1) {
        return None;
    }
    Some(crate::Rat::from_big(n, d))
}
