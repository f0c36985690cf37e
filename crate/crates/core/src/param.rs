//! Laurent polynomials over Q(i) in the named formal parameters.
//!
//! The complementary modulus `k'` is kept as its own symbol; every power
//! `k'^e` with `e >= 2` is rewritten through `k'^2 = 1 - k^2`, so the
//! canonical form carries `k'` to the power 0 or 1 (or a negative power,
//! which only appears through division and is cleared in zero tests).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Additive, Ring};
use crate::error::{ForgeError, Result};
use crate::gauss::GaussQ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    H,
    Delta,
    Alpha,
    K,
    Kp,
    Lambda,
    LambdaT,
    Zeta1,
    G2,
    G3,
    N,
    Mu,
    Nu,
    M,
    Eps1,
    A,
}

pub const NVARS: usize = 16;

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::H,
        Var::Delta,
        Var::Alpha,
        Var::K,
        Var::Kp,
        Var::Lambda,
        Var::LambdaT,
        Var::Zeta1,
        Var::G2,
        Var::G3,
        Var::N,
        Var::Mu,
        Var::Nu,
        Var::M,
        Var::Eps1,
        Var::A,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::H => "h",
            Var::Delta => "delta",
            Var::Alpha => "alpha",
            Var::K => "k",
            Var::Kp => "kp",
            Var::Lambda => "Lambda",
            Var::LambdaT => "Lambdat",
            Var::Zeta1 => "zeta1",
            Var::G2 => "g2",
            Var::G3 => "g3",
            Var::N => "n",
            Var::Mu => "mu",
            Var::Nu => "nu",
            Var::M => "m",
            Var::Eps1 => "eps1",
            Var::A => "a",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == s)
    }

    fn idx(self) -> usize {
        self as usize
    }
}

pub type Exponents = [i32; NVARS];

/// Numeric values for the formal parameters.
pub type Bindings = BTreeMap<Var, Complex64>;

#[derive(Clone, Debug, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Exponents, GaussQ>,
}

impl ParamPoly {
    pub fn constant(c: GaussQ) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; NVARS], c);
        }
        Self { terms }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussQ::int(n))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::constant(GaussQ::frac(p, q))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(GaussQ::one(), &[(v, 1)])
    }

    pub fn monomial(c: GaussQ, powers: &[(Var, i32)]) -> Self {
        let mut e = [0; NVARS];
        for &(v, p) in powers {
            e[v.idx()] += p;
        }
        let mut out = Self::default();
        if !c.is_zero() {
            out.terms.insert(e, c);
        }
        out.canonicalize()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &GaussQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient when the polynomial is a pure constant.
    pub fn as_constant(&self) -> Option<GaussQ> {
        match self.terms.len() {
            0 => Some(GaussQ::zero()),
            1 => self.terms.get(&[0; NVARS]).cloned(),
            _ => None,
        }
    }

    fn insert_add(&mut self, e: Exponents, c: GaussQ) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(GaussQ::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn canonicalize(self) -> Self {
        let kp = Var::Kp.idx();
        let k = Var::K.idx();
        if self.terms.keys().all(|e| e[kp] < 2) {
            return self;
        }
        let mut out = Self::default();
        for (e, c) in self.terms {
            if e[kp] < 2 {
                out.insert_add(e, c);
                continue;
            }
            // k'^(2j+r) = (1 - k^2)^j k'^r
            let j = (e[kp] / 2) as u32;
            let mut base = e;
            base[kp] -= 2 * j as i32;
            for i in 0..=j {
                let binom = binomial(j, i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let mut ee = base;
                ee[k] += 2 * i as i32;
                out.insert_add(ee, &c * &GaussQ::int(sign * binom));
            }
        }
        out
    }

    /// Semantic zero test in Q(i)[params^±1] / (k'^2 + k^2 - 1).
    pub fn is_zero_mod(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let kp = Var::Kp.idx();
        let min = self.terms.keys().map(|e| e[kp]).min().unwrap_or(0);
        if min >= 0 {
            return false;
        }
        let shift = (-min + 1) / 2 * 2;
        let mut lifted = Self::default();
        for (e, c) in &self.terms {
            let mut ee = *e;
            ee[kp] += shift;
            lifted.insert_add(ee, c.clone());
        }
        lifted.canonicalize().terms.is_empty()
    }

    pub fn degree_in(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|e| e[v.idx()]).max()
    }

    pub fn min_degree_in(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|e| e[v.idx()]).min()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.idx()] != 0)
    }

    /// Terms carrying `v^d`, with `v` removed.
    pub fn coeff_of_power(&self, v: Var, d: i32) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            if e[v.idx()] == d {
                let mut ee = *e;
                ee[v.idx()] = 0;
                out.insert_add(ee, c.clone());
            }
        }
        out
    }

    /// Replace `v` by a polynomial; negative powers of `v` need an invertible value.
    pub fn subs(&self, v: Var, value: &ParamPoly) -> Result<Self> {
        let mut out = Self::default();
        let inv = value.try_inv();
        for (e, c) in &self.terms {
            let p = e[v.idx()];
            let mut ee = *e;
            ee[v.idx()] = 0;
            let mut rest = Self::default();
            rest.insert_add(ee, c.clone());
            let factor = if p >= 0 {
                value.pow(p as u32)
            } else {
                inv.as_ref()
                    .ok_or(ForgeError::NotInvertible)?
                    .pow((-p) as u32)
            };
            out = out.add(&rest.mul(&factor));
        }
        Ok(out)
    }

    pub fn eval(&self, b: &Bindings) -> Result<Complex64> {
        let mut vals = [Complex64::new(0.0, 0.0); NVARS];
        let mut bound = [false; NVARS];
        for (v, x) in b {
            vals[v.idx()] = *x;
            bound[v.idx()] = true;
        }
        if !bound[Var::Kp.idx()] && bound[Var::K.idx()] {
            let k = vals[Var::K.idx()];
            vals[Var::Kp.idx()] = (Complex64::new(1.0, 0.0) - k * k).sqrt();
            bound[Var::Kp.idx()] = true;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_c64();
            for (i, &p) in e.iter().enumerate() {
                if p != 0 {
                    if !bound[i] {
                        return Err(ForgeError::Unbound(Var::ALL[i].name().into()));
                    }
                    t *= vals[i].powi(p);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn map_gauss(&self, f: impl Fn(&GaussQ) -> GaussQ) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            out.insert_add(*e, f(c));
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

impl PartialEq for ParamPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms || self.sub(other).is_zero_mod()
    }
}

impl Additive for ParamPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.is_zero_mod()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        self.map_gauss(|c| -c)
    }
}

impl Ring for ParamPoly {
    fn one() -> Self {
        Self::int(1)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = *e1;
                for i in 0..NVARS {
                    e[i] += e2[i];
                }
                out.insert_add(e, c1 * c2);
            }
        }
        out.canonicalize()
    }

    fn from_gauss(q: GaussQ) -> Self {
        Self::constant(q)
    }

    /// Only single-term elements are units.
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        let mut ee = *e;
        for x in ee.iter_mut() {
            *x = -*x;
        }
        let mut out = Self::default();
        out.insert_add(ee, c.inv()?);
        Some(out.canonicalize())
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest total degree first reads closer to hand-written tables
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(e, _)| std::cmp::Reverse(e.iter().map(|x| x.abs()).sum::<i32>()));
        for (e, c) in items {
            let mut factors = Vec::new();
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(Var::ALL[i].name().to_string()),
                    _ => factors.push(format!("{}^{}", Var::ALL[i].name(), p)),
                }
            }
            let coeff = c.to_string();
            let needs_paren = !c.is_real() && !c.re.is_zero_ref();
            let body = if factors.is_empty() {
                if needs_paren {
                    format!("({coeff})")
                } else {
                    coeff
                }
            } else if c.is_one() {
                factors.join("*")
            } else if *c == -GaussQ::one() {
                format!("-{}", factors.join("*"))
            } else if needs_paren {
                format!("({coeff})*{}", factors.join("*"))
            } else {
                format!("{coeff}*{}", factors.join("*"))
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else if let Some(rest) = body.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

trait IsZeroRef {
    fn is_zero_ref(&self) -> bool;
}

impl IsZeroRef for crate::gauss::Rational {
    fn is_zero_ref(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Shorthand constructors used throughout the derivations.
pub fn pv(v: Var) -> ParamPoly {
    ParamPoly::var(v)
}

pub fn pc(p: i64, q: i64) -> ParamPoly {
    ParamPoly::frac(p, q)
}

pub fn pi_unit() -> ParamPoly {
    ParamPoly::constant(GaussQ::i())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kprime_reduction() {
        let kp2 = pv(Var::Kp).pow(2);
        let expect = ParamPoly::one().sub(&pv(Var::K).pow(2));
        assert_eq!(kp2, expect);
        let kp3 = pv(Var::Kp).pow(3);
        assert_eq!(kp3.degree_in(Var::Kp), Some(1));
    }

    #[test]
    fn negative_kprime_zero_test() {
        // (1 - k^2) / k'^2 - 1 == 0
        let inv = pv(Var::Kp).pow(2).try_inv();
        assert!(inv.is_none(), "1 - k^2 has two terms and is no unit");
        let kpm2 = ParamPoly::monomial(GaussQ::one(), &[(Var::Kp, -2)]);
        let e = kpm2
            .mul(&ParamPoly::one().sub(&pv(Var::K).pow(2)))
            .sub(&ParamPoly::one());
        assert!(e.is_zero_mod());
        assert!(!kpm2.is_zero_mod());
    }

    #[test]
    fn substitution_and_eval() {
        let p = pv(Var::Delta).pow(2).add(&pc(3, 1));
        let q = p
            .subs(Var::Delta, &pv(Var::Nu).add(&ParamPoly::one()))
            .unwrap();
        let mut b = Bindings::new();
        b.insert(Var::Nu, Complex64::new(2.0, 0.0));
        assert!((q.eval(&b).unwrap() - Complex64::new(12.0, 0.0)).norm() < 1e-14);
        assert!(matches!(
            p.eval(&Bindings::new()),
            Err(ForgeError::Unbound(_))
        ));
    }

    #[test]
    fn display_is_readable() {
        let p = pc(-1, 2)
            .mul(&pv(Var::H).pow(2))
            .add(&pc(3, 1).mul(&pv(Var::Delta)));
        let s = p.to_string();
        assert!(s.contains("-1/2*h^2"), "{s}");
        assert!(s.contains("3*delta"), "{s}");
    }
}
