//! GF(p^k) sitting inside GF(p^f) for k | f.
//!
//! The subfield is {0} ∪ ⟨Ω^step⟩ with step = (p^f - 1)/(p^k - 1), where Ω is
//! the ambient primitive element. Its own primitive element is ω = Ω^step, so
//! subfield logs are ambient logs divided by step. Elements are listed in the
//! canonical order [0, ω^0, ω^1, ..., ω^(p^k - 2)].

use super::{FieldContext, FieldElement};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Subfield<'a> {
    ctx: &'a FieldContext,
    k: u32,
    order: u32,
    step: u32,
    // Tr_{p^k/p} indexed by subfield log; empty when k = f (ambient table is used).
    trace: Vec<u32>,
}

impl std::fmt::Debug for Subfield<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Subfield")
            .field("p", &self.ctx.characteristic())
            .field("k", &self.k)
            .field("step", &self.step)
            .finish()
    }
}

impl<'a> Subfield<'a> {
    pub(super) fn new(ctx: &'a FieldContext, k: u32) -> Result<Self> {
        let f = ctx.degree();
        if k == 0 || f % k != 0 {
            return Err(Error::NoSubfield(f, k));
        }
        let p = ctx.characteristic();
        let order = p.pow(k);
        let step = (ctx.order() - 1) / (order - 1);
        let mut sub = Subfield {
            ctx,
            k,
            order,
            step,
            trace: Vec::new(),
        };
        if k != f {
            sub.trace = (0..order - 1)
                .map(|i| {
                    let x = sub.element(i as usize + 1);
                    let mut acc = FieldElement::ZERO;
                    let mut y = x;
                    for _ in 0..k {
                        acc = ctx.add(acc, y);
                        y = ctx.frobenius(y);
                    }
                    ctx.encode(acc)
                })
                .collect();
        }
        Ok(sub)
    }

    pub fn ambient(&self) -> &'a FieldContext {
        self.ctx
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Exponent mapping the ambient primitive element onto the subfield's.
    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.log().is_none_or(|i| i % self.step == 0)
    }

    /// Position of `x` in the canonical order.
    pub fn index_of(&self, x: FieldElement) -> Result<usize> {
        match x.log() {
            None => Ok(0),
            Some(i) if i % self.step == 0 => Ok(1 + (i / self.step) as usize),
            Some(_) => Err(Error::NotInSubfield),
        }
    }

    /// Element at position `idx` of the canonical order.
    pub fn element(&self, idx: usize) -> FieldElement {
        if idx == 0 {
            FieldElement::ZERO
        } else {
            self.ctx.exp_log((idx as i64 - 1) * self.step as i64)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order as usize).map(|i| self.element(i))
    }

    /// Discrete log relative to the subfield's own primitive element.
    pub fn log(&self, x: FieldElement) -> Result<u32> {
        let i = x.log().ok_or(Error::ZeroHasNoLog)?;
        if i % self.step != 0 {
            return Err(Error::NotInSubfield);
        }
        Ok(i / self.step)
    }

    /// True for nonzero squares of the subfield (odd characteristic).
    pub fn is_square(&self, x: FieldElement) -> bool {
        match x.log() {
            None => false,
            Some(i) => self.ctx.characteristic() == 2 || (i / self.step) % 2 == 0,
        }
    }

    /// Quadratic character: 0 at zero, otherwise ±1.
    pub fn eta(&self, x: FieldElement) -> i32 {
        if x.is_zero() {
            0
        } else if self.is_square(x) {
            1
        } else {
            -1
        }
    }

    /// Tr_{p^k/p}(x) as an integer in [0, p).
    pub fn abs_trace(&self, x: FieldElement) -> u32 {
        if self.trace.is_empty() {
            return self.ctx.abs_trace(x);
        }
        match x.log() {
            None => 0,
            Some(i) => self.trace[(i / self.step) as usize],
        }
    }

    /// Norm from the ambient field down to this subfield, α ↦ α^step.
    pub fn norm(&self, x: FieldElement) -> FieldElement {
        self.ctx.pow(x, self.step as u64)
    }
}
