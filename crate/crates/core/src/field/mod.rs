//! Table-driven arithmetic in GF(p^f).
//!
//! A [`FieldContext`] fixes a monic irreducible modulus and a primitive
//! element ω, then stores three tables of size q - 1: `exp[i]` (the
//! coefficient vector of ω^i, packed base p), `log` (its inverse) and the
//! Zech logarithms `zech[i] = log(1 + ω^i)`. Nonzero elements are carried
//! around as their discrete logarithm, so multiplication is index addition
//! and addition is one Zech lookup.
//!
//! Both the modulus and ω are chosen deterministically: candidates are
//! enumerated in increasing order of their packed integer
//! `c_0 + c_1 p + ... + c_{f-1} p^{f-1}`, i.e. lexicographically with the
//! highest-degree coefficient most significant.

mod poly;
mod subfield;

pub use subfield::Subfield;

use std::fmt;

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_ORDER: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub f: u32,
    /// Monic irreducible modulus, constant term first (length f + 1).
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u32 {
        self.p.pow(self.f)
    }
}

/// Zero, or ω^i stored as its log index i in [0, q - 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(NONE);
    pub const ONE: FieldElement = FieldElement(0);

    pub fn is_zero(self) -> bool {
        self.0 == NONE
    }

    /// The log index relative to the context's ω, `None` for zero.
    pub fn log(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(i) => write!(f, "w^{i}"),
        }
    }
}

pub struct FieldContext {
    spec: FieldSpec,
    q: u32,
    omega: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    trace: Vec<u32>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.spec.p)
            .field("f", &self.spec.f)
            .field("modulus", &self.spec.modulus)
            .field("omega", &self.omega)
            .finish()
    }
}

fn digits(mut v: u32, p: u32, f: u32) -> Vec<u64> {
    (0..f)
        .map(|_| {
            let d = v % p;
            v /= p;
            d as u64
        })
        .collect()
}

fn pack(coeffs: &[u64], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c as u32)
}

fn check_order(p: u32, f: u32) -> Result<u64> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if f == 0 {
        return Err(Error::BadModulus(
            "extension degree must be at least 1".into(),
        ));
    }
    let mut q: u64 = 1;
    for _ in 0..f {
        q = q.saturating_mul(p as u64);
        if q > MAX_ORDER {
            return Err(Error::TooLarge(q));
        }
    }
    Ok(q)
}

impl FieldContext {
    /// GF(p^f) with the least monic irreducible modulus and least primitive element.
    pub fn new(p: u32, f: u32) -> Result<Self> {
        let q = check_order(p, f)?;
        let pp = p as u64;
        let modulus = (0..q)
            .map(|k| {
                let mut g = digits(k as u32, p, f);
                g.push(1);
                g
            })
            .find(|g| poly::is_irreducible(g, pp))
            .expect("every degree has a monic irreducible polynomial over GF(p)");
        Self::from_modulus_poly(p, f, modulus)
    }

    /// GF(p^f) for an explicit modulus (constant term first, monic).
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::BadModulus(
                "modulus must have degree at least 1".into(),
            ));
        }
        let f = (modulus.len() - 1) as u32;
        check_order(p, f)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus(format!(
                "coefficients must lie in [0, {p})"
            )));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::BadModulus("modulus must be monic".into()));
        }
        let g: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !poly::is_irreducible(&g, p as u64) {
            return Err(Error::BadModulus(format!(
                "{modulus:?} is reducible over GF({p})"
            )));
        }
        Self::from_modulus_poly(p, f, g)
    }

    fn from_modulus_poly(p: u32, f: u32, modulus: Vec<u64>) -> Result<Self> {
        let q = p.pow(f);
        let n = (q - 1) as u64;
        let pp = p as u64;
        let factors = prime_factors(n);
        let one: Vec<u64> = vec![1];
        let is_primitive = |g: &[u64]| {
            factors.iter().all(|&r| {
                let mut h = poly::pow_mod(g, n / r, &modulus, pp);
                h.resize(f as usize, 0);
                let mut one_padded = one.clone();
                one_padded.resize(f as usize, 0);
                h != one_padded
            })
        };
        let omega = (1..q)
            .map(|k| digits(k, p, f))
            .find(|g| is_primitive(g))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![NONE; q as usize];
        let mut cur: Vec<u64> = one.clone();
        for i in 0..n {
            let mut padded = cur.clone();
            padded.resize(f as usize, 0);
            let code = pack(&padded, p);
            debug_assert_eq!(log[code as usize], NONE, "omega is not primitive");
            log[code as usize] = i as u32;
            exp.push(code);
            cur = poly::mul_mod(&cur, &omega, &modulus, pp);
        }

        let zech = exp
            .iter()
            .map(|&code| {
                let c0 = code % p;
                let shifted = code - c0 + (c0 + 1) % p;
                log[shifted as usize]
            })
            .collect();

        let spec = FieldSpec {
            p,
            f,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
        };
        let mut ctx = FieldContext {
            spec,
            q,
            omega: omega.iter().map(|&c| c as u32).collect(),
            exp,
            log,
            zech,
            trace: Vec::new(),
        };
        ctx.trace = ctx.build_trace_table();
        Ok(ctx)
    }

    fn build_trace_table(&self) -> Vec<u32> {
        let (p, f) = (self.spec.p, self.spec.f);
        // Tr is GF(p)-linear: tabulate it on the monomial basis 1, x, ..., x^(f-1).
        let basis_traces: Vec<u32> = (0..f)
            .map(|d| {
                let mut coeffs = vec![0u64; f as usize];
                coeffs[d as usize] = 1;
                let x = self.decode(pack(&coeffs, p));
                let mut acc = FieldElement::ZERO;
                let mut y = x;
                for _ in 0..f {
                    acc = self.add(acc, y);
                    y = self.pow(y, p as u64);
                }
                let code = self.encode(acc);
                debug_assert!(code < p, "trace must land in the prime field");
                code
            })
            .collect();
        self.exp
            .iter()
            .map(|&code| {
                digits(code, p, f)
                    .iter()
                    .zip(&basis_traces)
                    .map(|(&c, &t)| c as u32 * t % p)
                    .sum::<u32>()
                    % p
            })
            .collect()
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.f
    }

    /// Coefficient vector of the primitive element ω, constant term first.
    pub fn omega_coeffs(&self) -> &[u32] {
        &self.omega
    }

    pub fn omega(&self) -> FieldElement {
        self.exp_log(1)
    }

    /// ω^i for any integer i (reduced mod q - 1).
    pub fn exp_log(&self, i: i64) -> FieldElement {
        FieldElement(i.rem_euclid((self.q - 1) as i64) as u32)
    }

    /// Packed base-p coefficient vector of `x`.
    pub fn encode(&self, x: FieldElement) -> u32 {
        match x.log() {
            None => 0,
            Some(i) => self.exp[i as usize],
        }
    }

    pub fn decode(&self, code: u32) -> FieldElement {
        FieldElement(self.log[code as usize])
    }

    pub fn to_coeffs(&self, x: FieldElement) -> Vec<u32> {
        digits(self.encode(x), self.spec.p, self.spec.f)
            .into_iter()
            .map(|d| d as u32)
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        let c: Vec<u64> = (0..self.spec.f as usize)
            .map(|i| (coeffs.get(i).copied().unwrap_or(0) % self.spec.p) as u64)
            .collect();
        self.decode(pack(&c, self.spec.p))
    }

    /// The image of the integer `n` in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.decode(n.rem_euclid(self.spec.p as i64) as u32)
    }

    fn n(&self) -> u32 {
        self.q - 1
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.n();
        let d = (b.0 + n - a.0) % n;
        match self.zech[d as usize] {
            NONE => FieldElement::ZERO,
            z => FieldElement((a.0 + z) % n),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.is_zero() || self.spec.p == 2 {
            return a;
        }
        FieldElement((a.0 + self.n() / 2) % self.n())
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        FieldElement((a.0 + b.0) % self.n())
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        match a.log() {
            None => Err(Error::DivisionByZero),
            Some(i) => Ok(FieldElement((self.n() - i) % self.n())),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        match a.log() {
            None if k == 0 => FieldElement::ONE,
            None => FieldElement::ZERO,
            Some(i) => FieldElement((i as u64 * (k % self.n() as u64) % self.n() as u64) as u32),
        }
    }

    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.spec.p as u64)
    }

    /// Log index of `x` relative to ω.
    pub fn discrete_log(&self, x: FieldElement) -> Result<u32> {
        x.log().ok_or(Error::ZeroHasNoLog)
    }

    /// Absolute trace Tr_{q/p}(x) as an integer in [0, p).
    pub fn abs_trace(&self, x: FieldElement) -> u32 {
        match x.log() {
            None => 0,
            Some(i) => self.trace[i as usize],
        }
    }

    /// All elements in canonical order [0, ω^0, ω^1, ..., ω^(q-2)].
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        std::iter::once(FieldElement::ZERO).chain((0..self.n()).map(FieldElement))
    }

    /// The subfield GF(p^k) for k dividing the degree.
    pub fn subfield(&self, k: u32) -> Result<Subfield<'_>> {
        Subfield::new(self, k)
    }

    /// The whole field viewed as a subfield of itself.
    pub fn whole(&self) -> Subfield<'_> {
        Subfield::new(self, self.spec.f).expect("degree divides itself")
    }

    /// GF(p^(f/2)), the field fixed by x -> x^(p^(f/2)); requires even degree.
    pub fn half_subfield(&self) -> Result<Subfield<'_>> {
        if self.spec.f % 2 != 0 {
            return Err(Error::NoSubfield(self.spec.f, self.spec.f / 2));
        }
        Subfield::new(self, self.spec.f / 2)
    }

    /// Relative trace x + x^q' from GF(q'^2) down to GF(q'), where q' = p^(f/2).
    pub fn rel_trace(&self, x: FieldElement) -> Result<FieldElement> {
        if self.spec.f % 2 != 0 {
            return Err(Error::NoSubfield(self.spec.f, self.spec.f / 2));
        }
        let q_half = (self.spec.p as u64).pow(self.spec.f / 2);
        Ok(self.add(x, self.pow(x, q_half)))
    }
}

/// Builds GF(p^f) with the deterministic modulus and primitive element.
pub fn build_field(p: u32, f: u32) -> Result<FieldContext> {
    FieldContext::new(p, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent order computation by repeated multiplication mod 11.
    fn order_mod(g: u64, p: u64) -> u64 {
        let mut x = g % p;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    }

    #[test]
    fn gf11_primitive_is_two() {
        let ctx = build_field(11, 1).unwrap();
        let least = (1..11).find(|&g| order_mod(g, 11) == 10).unwrap();
        assert_eq!(least, 2);
        assert_eq!(ctx.omega_coeffs(), &[2]);
        // 2^6 = 64 = 9 mod 11
        assert_eq!(ctx.discrete_log(ctx.from_int(9)).unwrap(), 6);
    }

    #[test]
    fn gf2_is_trivial() {
        let ctx = build_field(2, 1).unwrap();
        assert_eq!(ctx.order(), 2);
        assert_eq!(ctx.omega(), FieldElement::ONE);
        assert_eq!(
            ctx.add(FieldElement::ONE, FieldElement::ONE),
            FieldElement::ZERO
        );
    }

    #[test]
    fn gf289_order_of_omega() {
        let ctx = build_field(17, 2).unwrap();
        let w = ctx.omega();
        // Repeated squaring route: w^288 = 1 and w^144 != 1.
        let mut sq = w;
        for _ in 0..4 {
            sq = ctx.mul(sq, sq);
        }
        // sq = w^16
        let w144 = ctx.mul(ctx.pow(sq, 9), FieldElement::ONE);
        assert_ne!(w144, FieldElement::ONE);
        assert_eq!(ctx.mul(w144, w144), FieldElement::ONE);
        assert_eq!(ctx.spec().modulus, vec![3, 0, 1]);
    }

    #[test]
    fn exp_log_roundtrip_and_bijection() {
        for (p, f) in [(3, 3), (5, 2), (2, 5), (7, 2)] {
            let ctx = build_field(p, f).unwrap();
            let mut seen = vec![false; ctx.order() as usize];
            for i in 0..ctx.order() - 1 {
                let x = ctx.exp_log(i as i64);
                assert_eq!(ctx.discrete_log(x).unwrap(), i);
                let code = ctx.encode(x) as usize;
                assert!(!seen[code]);
                seen[code] = true;
            }
            assert!(!seen[0]);
        }
    }

    #[test]
    fn addition_matches_coefficient_arithmetic() {
        let ctx = build_field(3, 4).unwrap();
        for a in ctx.elements() {
            for b in ctx.elements().step_by(7) {
                let ca = ctx.to_coeffs(a);
                let cb = ctx.to_coeffs(b);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(ctx.add(a, b), ctx.from_coeffs(&sum));
            }
            assert_eq!(ctx.add(a, ctx.neg(a)), FieldElement::ZERO);
        }
    }

    #[test]
    fn basic_identities() {
        let ctx = build_field(13, 2).unwrap();
        let w = |i| ctx.exp_log(i);
        assert_eq!(ctx.mul(w(3), w(5)), w(8));
        assert_eq!(ctx.inv(w(7)).unwrap(), w(168 - 7));
        assert!(matches!(
            ctx.inv(FieldElement::ZERO),
            Err(Error::DivisionByZero)
        ));
        assert!(matches!(
            ctx.discrete_log(FieldElement::ZERO),
            Err(Error::ZeroHasNoLog)
        ));
        assert_eq!(ctx.discrete_log(FieldElement::ONE).unwrap(), 0);
    }

    #[test]
    fn rel_trace_lands_in_subfield() {
        let ctx = build_field(5, 2).unwrap();
        let sub = ctx.half_subfield().unwrap();
        for x in ctx.elements() {
            let t = ctx.rel_trace(x).unwrap();
            assert_eq!(ctx.pow(t, 5), t);
            assert!(sub.contains(t));
        }
        for y in sub.elements() {
            assert_eq!(ctx.rel_trace(y).unwrap(), ctx.add(y, y));
        }
        assert_eq!(
            ctx.rel_trace(FieldElement::ZERO).unwrap(),
            FieldElement::ZERO
        );
        let odd = build_field(5, 3).unwrap();
        assert!(matches!(
            odd.rel_trace(FieldElement::ONE),
            Err(Error::NoSubfield(3, 1))
        ));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(build_field(12, 1), Err(Error::NotPrime(12))));
        assert!(matches!(build_field(2, 25), Err(Error::TooLarge(_))));
        assert!(FieldContext::with_modulus(5, &[1, 0, 1]).is_err());
        assert!(FieldContext::with_modulus(17, &[3, 16, 1]).is_ok());
    }

    #[test]
    fn conway_modulus_gives_x_as_omega() {
        let ctx = FieldContext::with_modulus(7, &[3, 4, 5, 0, 1]).unwrap();
        assert_eq!(ctx.omega_coeffs(), &[0, 1, 0, 0]);
    }
}
