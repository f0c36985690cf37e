use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{join_terms, term_text, EvalContext, FunctionRing};
use crate::algebra::{Additive, Module, Ring};
use crate::error::{ForgeError, Result};
use crate::param::ParamPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Cos,
    Sin,
}

/// `s*x + sum c_{n,cos} cos(n x) + c_{n,sin} sin(n x)`.
#[derive(Clone, Debug, Default)]
pub struct FourierElem {
    secular: ParamPoly,
    modes: BTreeMap<(u32, Parity), ParamPoly>,
}

impl FourierElem {
    pub fn mode(n: u32, p: Parity, c: ParamPoly) -> Self {
        let mut out = Self::default();
        out.push(n, p, c);
        out
    }

    pub fn cos(n: u32, c: ParamPoly) -> Self {
        Self::mode(n, Parity::Cos, c)
    }

    pub fn sin(n: u32, c: ParamPoly) -> Self {
        Self::mode(n, Parity::Sin, c)
    }

    pub fn secular_term(c: ParamPoly) -> Self {
        Self {
            secular: c,
            modes: BTreeMap::new(),
        }
    }

    pub fn modes(&self) -> &BTreeMap<(u32, Parity), ParamPoly> {
        &self.modes
    }

    pub fn coeff(&self, n: u32, p: Parity) -> ParamPoly {
        self.modes.get(&(n, p)).cloned().unwrap_or_default()
    }

    fn push(&mut self, n: u32, p: Parity, c: ParamPoly) {
        if (n == 0 && p == Parity::Sin) || c.is_zero() {
            return;
        }
        let slot = self.modes.entry((n, p)).or_default();
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.modes.remove(&(n, p));
        }
    }

    /// Signed frequency for sin: sin(-m x) = -sin(m x).
    fn push_signed(&mut self, n: i64, p: Parity, c: ParamPoly) {
        let m = n.unsigned_abs() as u32;
        match (p, n < 0) {
            (Parity::Sin, true) => self.push(m, p, c.neg()),
            _ => self.push(m, p, c),
        }
    }
}

impl PartialEq for FourierElem {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Additive for FourierElem {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.secular.is_zero() && self.modes.values().all(|c| c.is_zero())
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.secular = out.secular.add(&other.secular);
        for (&(n, p), c) in &other.modes {
            out.push(n, p, c.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        self.map_coeffs(&|c| c.neg())
    }
}

impl Module<ParamPoly> for FourierElem {
    fn scale(&self, s: &ParamPoly) -> Self {
        self.map_coeffs(&|c| c.mul(s))
    }
}

impl FunctionRing for FourierElem {
    const NAME: &'static str = "fourier";

    fn constant(c: ParamPoly) -> Self {
        Self::cos(0, c)
    }

    fn coordinate() -> Result<Self> {
        Ok(Self::secular_term(ParamPoly::one()))
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        if !self.secular.is_zero() || !other.secular.is_zero() {
            return Err(ForgeError::RingMismatch(
                "secular x term in a Fourier product".into(),
            ));
        }
        let half = ParamPoly::frac(1, 2);
        let mut out = Self::default();
        for (&(a, pa), ca) in &self.modes {
            for (&(b, pb), cb) in &other.modes {
                let c = ca.mul(cb).mul(&half);
                let (a, b) = (a as i64, b as i64);
                match (pa, pb) {
                    (Parity::Cos, Parity::Cos) => {
                        out.push_signed(a - b, Parity::Cos, c.clone());
                        out.push_signed(a + b, Parity::Cos, c);
                    }
                    (Parity::Sin, Parity::Sin) => {
                        out.push_signed(a - b, Parity::Cos, c.clone());
                        out.push_signed(a + b, Parity::Cos, c.neg());
                    }
                    (Parity::Sin, Parity::Cos) => {
                        out.push_signed(a + b, Parity::Sin, c.clone());
                        out.push_signed(a - b, Parity::Sin, c);
                    }
                    (Parity::Cos, Parity::Sin) => {
                        out.push_signed(a + b, Parity::Sin, c.clone());
                        out.push_signed(b - a, Parity::Sin, c);
                    }
                }
            }
        }
        Ok(out)
    }

    fn diff(&self) -> Self {
        let mut out = Self::constant(self.secular.clone());
        for (&(n, p), c) in &self.modes {
            let f = ParamPoly::int(n as i64);
            match p {
                Parity::Cos => out.push(n, Parity::Sin, c.mul(&f).neg()),
                Parity::Sin => out.push(n, Parity::Cos, c.mul(&f)),
            }
        }
        out
    }

    fn antiderivative(&self) -> Result<Self> {
        if !self.secular.is_zero() {
            return Err(ForgeError::NoAntiderivative("secular x term".into()));
        }
        let mut out = Self::default();
        for (&(n, p), c) in &self.modes {
            if n == 0 {
                out.secular = out.secular.add(c);
                continue;
            }
            let f = ParamPoly::frac(1, n as i64);
            match p {
                Parity::Cos => out.push(n, Parity::Sin, c.mul(&f)),
                Parity::Sin => out.push(n, Parity::Cos, c.mul(&f).neg()),
            }
        }
        Ok(out)
    }

    fn secular(&self) -> ParamPoly {
        self.secular.clone()
    }

    fn constant_part(&self) -> ParamPoly {
        self.coeff(0, Parity::Cos)
    }

    fn reflect(&self) -> Self {
        let mut out = Self::secular_term(self.secular.neg());
        for (&(n, p), c) in &self.modes {
            match p {
                Parity::Cos => out.push(n, p, c.clone()),
                Parity::Sin => out.push(n, p, c.neg()),
            }
        }
        out
    }

    fn map_coeffs(&self, f: &dyn Fn(&ParamPoly) -> ParamPoly) -> Self {
        let mut out = Self::secular_term(f(&self.secular));
        for (&(n, p), c) in &self.modes {
            out.push(n, p, f(c));
        }
        out
    }

    fn coeff_polys(&self) -> Vec<ParamPoly> {
        std::iter::once(self.secular.clone())
            .chain(self.modes.values().cloned())
            .collect()
    }

    fn eval(&self, x: Complex64, ctx: &EvalContext) -> Result<Complex64> {
        let mut acc = self.secular.eval(&ctx.params)? * x;
        for (&(n, p), c) in &self.modes {
            let arg = x * n as f64;
            let basis = match p {
                Parity::Cos => arg.cos(),
                Parity::Sin => arg.sin(),
            };
            acc += c.eval(&ctx.params)? * basis;
        }
        Ok(acc)
    }
}

impl fmt::Display for FourierElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.secular.is_zero() {
            parts.push(term_text(&self.secular, "x"));
        }
        for (&(n, p), c) in &self.modes {
            let basis = match (n, p) {
                (0, _) => String::new(),
                (1, Parity::Cos) => "cos(x)".into(),
                (1, Parity::Sin) => "sin(x)".into(),
                (_, Parity::Cos) => format!("cos({n}x)"),
                (_, Parity::Sin) => format!("sin({n}x)"),
            };
            parts.push(term_text(c, &basis));
        }
        write!(f, "{}", join_terms(parts))
    }
}
