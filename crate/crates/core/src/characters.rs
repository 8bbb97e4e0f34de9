//! Additive and multiplicative characters, Gauss and Jacobi sums.
//!
//! Every character here is normalised by χ_e(ω) = ζ_e for the primitive
//! element ω of the field (or subfield) it lives on. Sums are evaluated
//! numerically in `Complex64` and compared against closed forms with an
//! absolute tolerance of [`TOL`]. Nothing that feeds a matrix is ever read
//! off a floating-point value: integer counts come from enumeration and the
//! sums only decide signs and serve as cross-checks.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::{modulo, prime_power};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement, Subfield};

pub type ComplexValue = Complex64;

/// Absolute tolerance for every closed-form comparison.
pub const TOL: f64 = 1e-6;

/// ζ_n^k.
pub fn zeta(n: u64, k: i64) -> Complex64 {
    let r = modulo(k, n) as f64 / n as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

pub fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < TOL
}

/// χ_e^j, with χ(0) = 1 for the trivial character and 0 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharSpec {
    pub e: u64,
    pub j: i64,
}

impl CharSpec {
    pub fn new(e: u64, j: i64) -> Self {
        CharSpec { e, j }
    }

    pub fn is_trivial(&self) -> bool {
        modulo(self.j, self.e) == 0
    }

    fn check(&self, order: u32) -> Result<()> {
        let n = order as u64 - 1;
        if self.e == 0 || n % self.e != 0 {
            return Err(Error::BadOrder {
                e: self.e,
                modulus: n,
            });
        }
        Ok(())
    }

    /// Value at `x` on the field `sub`.
    pub fn value(&self, sub: &Subfield, x: FieldElement) -> Complex64 {
        match sub.log(x) {
            Ok(i) => zeta(self.e, self.j * i as i64),
            Err(_) if self.is_trivial() => Complex64::new(1.0, 0.0),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}

/// ψ(x) = ζ_p^{Tr(x)} on the field `sub`.
pub fn additive_char(sub: &Subfield, x: FieldElement) -> Complex64 {
    let p = sub.ambient().characteristic() as u64;
    zeta(p, sub.abs_trace(x) as i64)
}

/// Exponent k with χ_e(x) = ζ_e^k, i.e. log(x) mod e.
pub fn mult_char(sub: &Subfield, e: u64, x: FieldElement) -> Result<u64> {
    CharSpec::new(e, 1).check(sub.order())?;
    let i = sub.log(x).map_err(|_| Error::ZeroArgument)?;
    Ok(i as u64 % e)
}

/// G(χ_e^j) = Σ_{x ≠ 0} χ_e^j(x) ψ(x).
pub fn gauss_sum(sub: &Subfield, e: u64, j: i64) -> Result<Complex64> {
    let chi = CharSpec::new(e, j);
    chi.check(sub.order())?;
    Ok(sub
        .elements()
        .skip(1)
        .map(|x| chi.value(sub, x) * additive_char(sub, x))
        .sum())
}

/// Gauss period η_i = Σ_{x ∈ C_i^(e)} ψ(x).
pub fn gauss_period(sub: &Subfield, e: u64, i: u64) -> Result<Complex64> {
    Ok(gauss_periods(sub, e)?[(i % e) as usize])
}

/// All e Gauss periods of order e in one pass.
pub fn gauss_periods(sub: &Subfield, e: u64) -> Result<Vec<Complex64>> {
    CharSpec::new(e, 1).check(sub.order())?;
    let mut out = vec![Complex64::new(0.0, 0.0); e as usize];
    for (k, x) in sub.elements().skip(1).enumerate() {
        out[k % e as usize] += additive_char(sub, x);
    }
    Ok(out)
}

/// Σ_{x ∈ F} χ1(x) χ2(1 - x).
pub fn jacobi_sum(sub: &Subfield, chi1: CharSpec, chi2: CharSpec) -> Result<Complex64> {
    chi1.check(sub.order())?;
    chi2.check(sub.order())?;
    let ctx = sub.ambient();
    Ok(sub
        .elements()
        .map(|x| chi1.value(sub, x) * chi2.value(sub, ctx.sub(FieldElement::ONE, x)))
        .sum())
}

/// (a, b) with J(η, χ_4) = a + bi over GF(q), q ≡ 1 mod 4. Fails with
/// `NoMatch` when the sum is not within tolerance of a Gaussian integer.
pub fn jacobi_factorization(sub: &Subfield) -> Result<(i64, i64)> {
    let j = jacobi_sum(sub, CharSpec::new(2, 1), CharSpec::new(4, 1))?;
    let (a, b) = (j.re.round(), j.im.round());
    let r = (j - Complex64::new(a, b)).norm();
    if r >= TOL {
        return Err(Error::NoMatch(r));
    }
    Ok((a as i64, b as i64))
}

/// The quadratic Gauss sum of GF(q) in closed form:
/// (-1)^(s-1) √q for p ≡ 1 mod 4 and (-1)^(s-1) i^s √q for p ≡ 3 mod 4.
pub fn quadratic_gauss_closed_form(q: u64) -> Result<Complex64> {
    let (p, s) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if p == 2 {
        return Err(Error::BadOrder {
            e: 2,
            modulus: q - 1,
        });
    }
    let sign = if s % 2 == 1 { 1.0 } else { -1.0 };
    let root = (q as f64).sqrt() * sign;
    Ok(if p % 4 == 1 {
        Complex64::new(root, 0.0)
    } else {
        zeta(4, s as i64) * root
    })
}

/// Which closed form a Gauss sum of GF(q^2) is matched against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GaussForm {
    /// q = 4m²+4m+3: G_{q²}(χ_8) = G_q(η)(ε(2m+1) + δ√-2).
    Order8,
    /// q = 2m²+2m+1, m odd: G_q(η)G_{q²}(χ_4)/q = εm + δ(m+1)i.
    Order4Odd,
    /// q = 2m²+2m+1, m even: G_q(η)G_{q²}(χ_4)/q = ε(m+1) + δm i.
    Order4Even,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GaussDecomposition {
    pub epsilon: i32,
    pub delta: i32,
    pub form: GaussForm,
    /// Distance between the computed sum and the matched closed form.
    pub residual: f64,
}

/// m with q = 4m²+4m+3.
pub fn order8_parameter(q: u64) -> Option<u64> {
    (0..)
        .take_while(|m| 4 * m * m + 4 * m + 3 <= q)
        .find(|m| 4 * m * m + 4 * m + 3 == q)
}

/// m with q = 2m²+2m+1.
pub fn order4_parameter(q: u64) -> Option<u64> {
    (1..)
        .take_while(|m| 2 * m * m + 2 * m + 1 <= q)
        .find(|m| 2 * m * m + 2 * m + 1 == q)
}

/// Finds the unique sign pair (ε, δ) for the Gauss sums of `big` = GF(q²).
///
/// `order8` selects the order-8 family; otherwise the order-4 family, whose
/// odd/even form is read off m.
pub fn decompose_gauss(big: &FieldContext, order8: bool) -> Result<GaussDecomposition> {
    let sub = big.half_subfield()?;
    let q = sub.order() as u64;
    let whole = big.whole();
    let g_eta = gauss_sum(&sub, 2, 1)?;
    let (form, m, target): (GaussForm, u64, Complex64) = if order8 {
        let m = order8_parameter(q).ok_or(Error::NotInFamily {
            q,
            form: "4m^2+4m+3",
        })?;
        (GaussForm::Order8, m, gauss_sum(&whole, 8, 1)?)
    } else {
        let m = order4_parameter(q).ok_or(Error::NotInFamily {
            q,
            form: "2m^2+2m+1",
        })?;
        let form = if m % 2 == 1 {
            GaussForm::Order4Odd
        } else {
            GaussForm::Order4Even
        };
        (form, m, g_eta * gauss_sum(&whole, 4, 1)? / q as f64)
    };
    let m = m as f64;
    let candidate = |eps: f64, del: f64| match form {
        GaussForm::Order8 => g_eta * Complex64::new(eps * (2.0 * m + 1.0), del * 2f64.sqrt()),
        GaussForm::Order4Odd => Complex64::new(eps * m, del * (m + 1.0)),
        GaussForm::Order4Even => Complex64::new(eps * (m + 1.0), del * m),
    };
    let mut best: Option<GaussDecomposition> = None;
    let mut closest = f64::INFINITY;
    for eps in [1, -1] {
        for del in [1, -1] {
            let r = (target - candidate(eps as f64, del as f64)).norm();
            closest = closest.min(r);
            if r < TOL {
                best = Some(GaussDecomposition {
                    epsilon: eps,
                    delta: del,
                    form,
                    residual: r,
                });
            }
        }
    }
    best.ok_or(Error::NoMatch(closest))
}

/// Davenport–Hasse: G_{q^d}(χ) = (-1)^(d-1) G_q(χ')^d for χ = χ' ∘ Norm.
///
/// `ext` is GF(q^d); the base field GF(q) is its subfield of degree
/// `base_degree` and χ' = χ_e on it (nontrivial, so e > 1).
pub fn check_davenport_hasse(ext: &FieldContext, base_degree: u32, e: u64) -> Result<bool> {
    let base = ext.subfield(base_degree)?;
    let d = ext.degree() / base_degree;
    if e < 2 {
        return Err(Error::BadOrder {
            e,
            modulus: base.order() as u64 - 1,
        });
    }
    let chi = CharSpec::new(e, 1);
    chi.check(base.order())?;
    let whole = ext.whole();
    let lhs: Complex64 = whole
        .elements()
        .skip(1)
        .map(|a| chi.value(&base, base.norm(a)) * additive_char(&whole, a))
        .sum();
    let sign = if d % 2 == 1 { 1.0 } else { -1.0 };
    let rhs = gauss_sum(&base, e, 1)?.powu(d) * sign;
    Ok(close(lhs, rhs))
}

fn lemma_preconditions(big: &FieldContext, e: u64, ell: u64) -> Result<u64> {
    let sub = big.half_subfield()?;
    let q = sub.order() as u64;
    if ell % (q + 1) == 0 {
        return Err(Error::BadEll(ell));
    }
    let qq = q * q - 1;
    if e == 0 || qq % e != 0 || e / crate::arith::gcd(e, q + 1) != 2 {
        return Err(Error::BadE {
            e,
            reason: "need e | q^2-1 and e/gcd(e,q+1) = 2",
        });
    }
    Ok(q)
}

/// Both sides of Σ_{x ∈ F_q} χ_e(1+ω^ℓ x)
///   = χ_e(-1) G_{q²}(χ_e) G_q(η)/q · χ_e(ω^{-qℓ}) χ_e(ω^{ℓq} - ω^ℓ).
pub fn lemma_sum_line(big: &FieldContext, e: u64, ell: u64) -> Result<(Complex64, Complex64)> {
    let q = lemma_preconditions(big, e, ell)?;
    let sub = big.half_subfield()?;
    let whole = big.whole();
    let chi = CharSpec::new(e, 1);
    let w = |k: i64| big.exp_log(k);
    let wl = w(ell as i64);
    let lhs: Complex64 = sub
        .elements()
        .map(|x| chi.value(&whole, big.add(FieldElement::ONE, big.mul(wl, x))))
        .sum();
    let diff = big.sub(w((ell * q) as i64), wl);
    let minus_one = big.neg(FieldElement::ONE);
    let rhs = chi.value(&whole, minus_one) * gauss_sum(&whole, e, 1)? * gauss_sum(&sub, 2, 1)?
        / q as f64
        * chi.value(&whole, w(-((q * ell) as i64)))
        * chi.value(&whole, diff);
    Ok((lhs, rhs))
}

/// Both sides of Σ_{x ∈ F_q, x ≠ s} χ_e(1+ω^ℓ x) η(x - s)
///   = G_{q²}(χ_e) G_q(η)/q · χ_e^{-1}(1+ω^{qℓ}s) χ_e(ω^{ℓq} - ω^ℓ) - χ_e(ω^ℓ).
pub fn lemma_sum_shifted(
    big: &FieldContext,
    e: u64,
    ell: u64,
    s: FieldElement,
) -> Result<(Complex64, Complex64)> {
    let q = lemma_preconditions(big, e, ell)?;
    let sub = big.half_subfield()?;
    if !sub.contains(s) {
        return Err(Error::NotInSubfield);
    }
    let whole = big.whole();
    let chi = CharSpec::new(e, 1);
    let chi_inv = CharSpec::new(e, -1);
    let wl = big.exp_log(ell as i64);
    let wql = big.exp_log((ell * q) as i64);
    let lhs: Complex64 = sub
        .elements()
        .filter(|&x| x != s)
        .map(|x| {
            chi.value(&whole, big.add(FieldElement::ONE, big.mul(wl, x)))
                * sub.eta(big.sub(x, s)) as f64
        })
        .sum();
    let rhs = gauss_sum(&whole, e, 1)? * gauss_sum(&sub, 2, 1)? / q as f64
        * chi_inv.value(&whole, big.add(FieldElement::ONE, big.mul(wql, s)))
        * chi.value(&whole, big.sub(wql, wl))
        - chi.value(&whole, wl);
    Ok((lhs, rhs))
}

/// True when both character-sum identities hold at (ℓ, s).
pub fn check_lemma31_32(big: &FieldContext, e: u64, ell: u64, s: FieldElement) -> Result<bool> {
    let (a, b) = lemma_sum_line(big, e, ell)?;
    let (c, d) = lemma_sum_shifted(big, e, ell, s)?;
    Ok(close(a, b) && close(c, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn additive_character_basics() {
        let ctx = build_field(11, 1).unwrap();
        let f = ctx.whole();
        assert!(close(additive_char(&f, FieldElement::ZERO), c(1.0, 0.0)));
        assert!(close(additive_char(&f, FieldElement::ONE), zeta(11, 1)));
        let total: Complex64 = f.elements().map(|x| additive_char(&f, x)).sum();
        assert!(total.norm() < TOL);
    }

    #[test]
    fn multiplicative_exponents() {
        let ctx = build_field(17, 1).unwrap();
        let f = ctx.whole();
        assert_eq!(mult_char(&f, 8, FieldElement::ONE).unwrap(), 0);
        assert_eq!(mult_char(&f, 8, ctx.omega()).unwrap(), 1);
        assert_eq!(mult_char(&f, 4, ctx.exp_log(10)).unwrap(), 2);
        assert!(matches!(
            mult_char(&f, 8, FieldElement::ZERO),
            Err(Error::ZeroArgument)
        ));
        assert!(matches!(
            mult_char(&f, 5, FieldElement::ONE),
            Err(Error::BadOrder { .. })
        ));
    }

    #[test]
    fn quadratic_gauss_sums() {
        let f17 = build_field(17, 1).unwrap();
        assert!(close(
            gauss_sum(&f17.whole(), 2, 1).unwrap(),
            c(17f64.sqrt(), 0.0)
        ));
        let f11 = build_field(11, 1).unwrap();
        assert!(close(
            gauss_sum(&f11.whole(), 2, 1).unwrap(),
            c(0.0, 11f64.sqrt())
        ));
        assert!(close(gauss_sum(&f11.whole(), 2, 0).unwrap(), c(-1.0, 0.0)));
    }

    #[test]
    fn periods_follow_quadratic_formula() {
        let ctx = build_field(11, 1).unwrap();
        let f = ctx.whole();
        let g = gauss_sum(&f, 2, 1).unwrap();
        assert!(close(gauss_period(&f, 2, 0).unwrap(), (g - 1.0) / 2.0));
        assert!(close(gauss_period(&f, 2, 1).unwrap(), (-g - 1.0) / 2.0));
        assert!(close(gauss_period(&f, 1, 0).unwrap(), c(-1.0, 0.0)));
        let sum: Complex64 = gauss_periods(&f, 5).unwrap().into_iter().sum();
        assert!(close(sum, c(-1.0, 0.0)));
    }

    #[test]
    fn jacobi_sum_conventions() {
        let ctx = build_field(13, 1).unwrap();
        let f = ctx.whole();
        let j = jacobi_sum(&f, CharSpec::new(2, 1), CharSpec::new(4, 1)).unwrap();
        assert!((j.norm_sqr() - 13.0).abs() < TOL);
        // Both trivial: every x contributes 1.
        let t = jacobi_sum(&f, CharSpec::new(1, 0), CharSpec::new(1, 0)).unwrap();
        assert!(close(t, c(13.0, 0.0)));
    }

    #[test]
    fn decomposition_small_cases() {
        let big = build_field(11, 2).unwrap();
        let d = decompose_gauss(&big, true).unwrap();
        assert_eq!(d.form, GaussForm::Order8);
        let big = build_field(5, 2).unwrap();
        assert_eq!(
            decompose_gauss(&big, false).unwrap().form,
            GaussForm::Order4Odd
        );
        let big = build_field(13, 2).unwrap();
        assert_eq!(
            decompose_gauss(&big, false).unwrap().form,
            GaussForm::Order4Even
        );
        let big = build_field(7, 2).unwrap();
        assert!(matches!(
            decompose_gauss(&big, true),
            Err(Error::NotInFamily { .. })
        ));
    }

    #[test]
    fn davenport_hasse_quadratic_lift() {
        let ext = build_field(11, 2).unwrap();
        assert!(check_davenport_hasse(&ext, 1, 2).unwrap());
        let g: Complex64 = {
            let base = ext.subfield(1).unwrap();
            let w = ext.whole();
            w.elements()
                .skip(1)
                .map(|a| CharSpec::new(2, 1).value(&base, base.norm(a)) * additive_char(&w, a))
                .sum()
        };
        assert!(close(g, c(11.0, 0.0)));
    }

    #[test]
    fn lemma_identities_reject_bad_ell() {
        let big = build_field(5, 2).unwrap();
        assert!(matches!(lemma_sum_line(&big, 4, 6), Err(Error::BadEll(6))));
        assert!(check_lemma31_32(&big, 4, 1, FieldElement::ZERO).unwrap());
    }
}
