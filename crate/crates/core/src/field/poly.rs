//! Dense polynomials over GF(p), constant term first.
//!
//! Only what the field builder needs: multiplication modulo a monic
//! polynomial, exponentiation, gcd and Rabin's irreducibility test.

use crate::arith::prime_factors;

pub(crate) type Poly = Vec<u64>;

fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Remainder of `a` modulo `b` (b nonzero).
pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let mut b: Poly = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        if c != 0 {
            let shift = top - db;
            for (k, &bk) in b.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p - c * bk % p) % p;
            }
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, modulus, p)
}

pub(crate) fn pow_mod(a: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Poly {
    let mut result: Poly = vec![1];
    let mut base = rem(a, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, modulus, p);
        }
        base = mul_mod(&base, &base, modulus, p);
        e >>= 1;
    }
    rem(&result, modulus, p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a: Poly = a.to_vec();
    let mut b: Poly = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^(p^k) mod `modulus`, by k successive p-th powers.
fn frobenius_power_of_x(k: u32, modulus: &[u64], p: u64) -> Poly {
    let mut h: Poly = rem(&[0, 1], modulus, p);
    for _ in 0..k {
        h = pow_mod(&h, p, modulus, p);
    }
    h
}

/// Rabin's test: g of degree n is irreducible iff x^(p^n) = x mod g and
/// gcd(x^(p^(n/r)) - x, g) = 1 for every prime r dividing n.
pub(crate) fn is_irreducible(g: &[u64], p: u64) -> bool {
    let mut g: Poly = g.to_vec();
    trim(&mut g);
    if g.len() < 2 {
        return false;
    }
    let n = (g.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    let x: Poly = rem(&[0, 1], &g, p);
    if sub(&frobenius_power_of_x(n, &g, p), &x, p) != Poly::new() {
        return false;
    }
    for r in prime_factors(n as u64) {
        let h = sub(&frobenius_power_of_x(n / r as u32, &g, p), &x, p);
        if gcd(&h, &g, p).len() != 1 {
            return false;
        }
    }
    true
}
