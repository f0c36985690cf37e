//! Truncated formal Laurent series in a single expansion symbol.
//!
//! A series stores the coefficients of `eps^lead .. eps^(order-1)`; the
//! remainder is `O(eps^order)`. Every binary operation returns the
//! smallest order its inputs justify, and asking for a coefficient at or
//! beyond `order` is an error rather than a silent zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Additive, Module, Ring};
use crate::error::{ForgeError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    symbol: String,
    lead: i64,
    coeffs: Vec<C>,
}

impl<C: Additive> TruncatedSeries<C> {
    /// Series with coefficients for `eps^lead ..`; `order = lead + coeffs.len()`.
    pub fn new(symbol: impl Into<String>, lead: i64, coeffs: Vec<C>) -> Self {
        Self {
            symbol: symbol.into(),
            lead,
            coeffs,
        }
    }

    /// `O(eps^order)` with no known terms.
    pub fn big_o(symbol: impl Into<String>, order: i64) -> Self {
        Self {
            symbol: symbol.into(),
            lead: order,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(symbol: impl Into<String>, exp: i64, c: C, order: i64) -> Self {
        let mut s = Self::big_o(symbol, exp.min(order));
        s.coeffs = (s.lead..order)
            .map(|e| if e == exp { c.clone() } else { C::zero() })
            .collect();
        s
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    pub fn order(&self) -> i64 {
        self.lead + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `eps^e`; exponents below `lead` are zero, beyond `order` unknown.
    pub fn coeff(&self, e: i64) -> Result<C> {
        if e >= self.order() {
            return Err(ForgeError::Truncation {
                requested: e,
                valid: self.order(),
            });
        }
        if e < self.lead {
            return Ok(C::zero());
        }
        Ok(self.coeffs[(e - self.lead) as usize].clone())
    }

    fn coeff_unchecked(&self, e: i64) -> C {
        if e < self.lead || e >= self.order() {
            C::zero()
        } else {
            self.coeffs[(e - self.lead) as usize].clone()
        }
    }

    /// Exponent of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.lead + i as i64)
    }

    /// Drops leading zeros so that `lead` is the valuation.
    pub fn normalized(&self) -> Self {
        match self.valuation() {
            Some(v) => self.restrict(v, self.order()),
            None => Self::big_o(self.symbol.clone(), self.order()),
        }
    }

    /// Re-window to `[lead, order)`; `order` may not exceed the known order.
    pub fn restrict(&self, lead: i64, order: i64) -> Self {
        let order = order.min(self.order());
        let lead = lead.min(order);
        Self {
            symbol: self.symbol.clone(),
            lead,
            coeffs: (lead..order).map(|e| self.coeff_unchecked(e)).collect(),
        }
    }

    pub fn truncate(&self, order: i64) -> Result<Self> {
        if order > self.order() {
            return Err(ForgeError::Truncation {
                requested: order,
                valid: self.order(),
            });
        }
        Ok(self.restrict(self.lead, order))
    }

    fn check_symbol(&self, other_symbol: &str) -> Result<()> {
        if self.symbol != other_symbol {
            return Err(ForgeError::SymbolMismatch(
                self.symbol.clone(),
                other_symbol.into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_symbol(&other.symbol)?;
        let order = self.order().min(other.order());
        let lead = self.lead.min(other.lead).min(order);
        let coeffs = (lead..order)
            .map(|e| self.coeff_unchecked(e).add(&other.coeff_unchecked(e)))
            .collect();
        Ok(Self {
            symbol: self.symbol.clone(),
            lead,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            symbol: self.symbol.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiply by `eps^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            symbol: self.symbol.clone(),
            lead: self.lead + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn map<D: Additive>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries {
            symbol: self.symbol.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<D: Additive>(&self, f: impl Fn(&C) -> Result<D>) -> Result<TruncatedSeries<D>> {
        Ok(TruncatedSeries {
            symbol: self.symbol.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Substitute `eps -> -eps`.
    pub fn alternate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (self.lead + i as i64).rem_euclid(2) == 1 {
                    c.neg()
                } else {
                    c.clone()
                }
            })
            .collect();
        Self {
            symbol: self.symbol.clone(),
            lead: self.lead,
            coeffs,
        }
    }

    pub fn with_symbol(&self, symbol: impl Into<String>) -> Self {
        Self {
            symbol: symbol.into(),
            lead: self.lead,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Exact equality of the common window; orders must agree.
    pub fn same_as(&self, other: &Self) -> bool {
        self.symbol == other.symbol
            && self.order() == other.order()
            && (self.lead.min(other.lead)..self.order())
                .all(|e| self.coeff_unchecked(e) == other.coeff_unchecked(e))
    }

    /// Scale each coefficient of `eps^e` by a module scalar series (Cauchy product).
    pub fn mul_scalar_series<S: Ring>(&self, s: &TruncatedSeries<S>) -> Result<Self>
    where
        C: Module<S>,
    {
        self.check_symbol(&s.symbol)?;
        let lead = self.lead + s.lead;
        let order = (self.order() + s.lead).min(s.order() + self.lead);
        let mut coeffs = Vec::with_capacity((order - lead).max(0) as usize);
        for e in lead..order {
            let mut acc = C::zero();
            for i in self.lead..self.order() {
                let j = e - i;
                if j < s.lead || j >= s.order() {
                    continue;
                }
                let a = &self.coeffs[(i - self.lead) as usize];
                let b = &s.coeffs[(j - s.lead) as usize];
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.scale(b));
            }
            coeffs.push(acc);
        }
        Ok(Self {
            symbol: self.symbol.clone(),
            lead,
            coeffs,
        })
    }

    pub fn scale<S: Ring>(&self, s: &S) -> Self
    where
        C: Module<S>,
    {
        self.map(|c| c.scale(s))
    }
}

impl<R: Ring> TruncatedSeries<R> {
    pub fn one(symbol: impl Into<String>, order: i64) -> Self {
        Self::monomial(symbol, 0, R::one(), order)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_scalar_series(other)
    }

    /// Multiplicative inverse; the first stored coefficient must be a unit.
    pub fn inv(&self) -> Result<Self> {
        let s = self.normalized();
        let n = s.coeffs.len();
        let a0inv = s
            .coeffs
            .first()
            .and_then(|c| c.try_inv())
            .ok_or(ForgeError::NotInvertible)?;
        let mut b: Vec<R> = Vec::with_capacity(n);
        b.push(a0inv.clone());
        for k in 1..n {
            let mut acc = R::zero();
            for j in 1..=k {
                acc = acc.add(&s.coeffs[j].mul(&b[k - j]));
            }
            b.push(acc.neg().mul(&a0inv));
        }
        Ok(Self {
            symbol: s.symbol,
            lead: -s.lead,
            coeffs: b,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Non-negative integer power.
    pub fn powi(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Ok(Self::one(self.symbol.clone(), self.order() - self.lead));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Square root by Newton iteration with doubling working precision.
    /// `branch` must square to the leading coefficient.
    pub fn sqrt(&self, branch: &R) -> Result<Self> {
        let a = self.normalized();
        if a.coeffs.is_empty() {
            return Err(ForgeError::NotInvertible);
        }
        if a.lead % 2 != 0 {
            return Err(ForgeError::OddLead(a.lead));
        }
        if branch.mul(branch) != a.coeffs[0] {
            return Err(ForgeError::BadBranch);
        }
        let n = a.coeffs.len() as i64;
        let half_lead = a.lead / 2;
        let half = R::from_gauss(crate::gauss::GaussQ::frac(1, 2));
        // work with the unit part u = a / eps^lead, sqrt(u) has lead 0
        let unit = a.shift(-a.lead);
        let mut r = Self::monomial(a.symbol.clone(), 0, branch.clone(), 1);
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let target = unit.truncate(prec)?;
            let r_ext = r.restrict(0, prec);
            let r_ext = Self {
                coeffs: pad(r_ext.coeffs, prec as usize),
                ..r_ext
            };
            let q = target.div(&r_ext)?;
            r = r_ext.add(&q)?.scale(&half).truncate(prec)?;
        }
        Ok(r.shift(half_lead))
    }

    /// Evaluates `outer(inner)`; the valuation of `inner` must be positive.
    /// Negative powers in `outer` are handled through the inverse of `inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        compose_module(outer, inner)
    }

    /// Compositional inverse.
    ///
    /// For `a = c eps + ...` returns `b(t)` with `a(b(t)) = t`. For
    /// `a = c eps^-1 + ...` returns `b(s)` with `a(b(s)) = 1/s`, which is the
    /// form needed to solve `i nu = sqrt(lambda) + ...` for `sqrt(lambda)^-1`.
    pub fn revert(&self, new_symbol: &str) -> Result<Self> {
        let a = self.normalized();
        match a.lead {
            1 => revert_lead_one(&a, new_symbol),
            -1 => {
                let recip = a.inv()?;
                revert_lead_one(&recip.normalized(), new_symbol)
            }
            other => Err(ForgeError::RevertLead(other)),
        }
    }

    /// Substitute `eps = factor * t`, i.e. multiply the `e`-th coefficient by `factor^e`.
    pub fn rescale(&self, factor: &R, new_symbol: &str) -> Result<Self> {
        let finv = factor.try_inv().ok_or(ForgeError::NotInvertible)?;
        let coeffs = (self.lead..self.order())
            .map(|e| {
                let p = if e >= 0 {
                    factor.pow(e as u32)
                } else {
                    finv.pow((-e) as u32)
                };
                self.coeff_unchecked(e).mul(&p)
            })
            .collect();
        Ok(Self {
            symbol: new_symbol.into(),
            lead: self.lead,
            coeffs,
        })
    }
}

fn pad<R: Additive>(mut v: Vec<R>, n: usize) -> Vec<R> {
    while v.len() < n {
        v.push(R::zero());
    }
    v
}

fn revert_lead_one<R: Ring>(
    a: &TruncatedSeries<R>,
    new_symbol: &str,
) -> Result<TruncatedSeries<R>> {
    let order = a.order();
    let a1inv = a.coeffs[0].try_inv().ok_or(ForgeError::NotInvertible)?;
    let sym = a.symbol.clone();
    // b = b1 t + ... ; solve term by term in the symbol of `a`
    let mut b = TruncatedSeries::new(sym.clone(), 1, vec![a1inv.clone()]);
    for n in 2..order {
        let trial =
            TruncatedSeries::new(sym.clone(), 1, pad(b.coeffs.clone(), (n - 1) as usize + 1));
        let comp = compose_module(a, &trial)?;
        let resid = comp.coeff(n)?;
        let mut coeffs = b.coeffs.clone();
        coeffs.push(resid.neg().mul(&a1inv));
        b = TruncatedSeries::new(sym.clone(), 1, coeffs);
    }
    Ok(b.with_symbol(new_symbol))
}

/// `outer(inner)` where `outer` has coefficients in a module over the ring of `inner`.
pub fn compose_module<S: Ring, M: Module<S>>(
    outer: &TruncatedSeries<M>,
    inner: &TruncatedSeries<S>,
) -> Result<TruncatedSeries<M>> {
    let inner = inner.normalized();
    let v = inner.valuation().ok_or(ForgeError::NotInvertible)?;
    if v < 1 {
        return Err(ForgeError::Config(format!(
            "composition needs inner valuation >= 1, got {v}"
        )));
    }
    let sym = inner.symbol.clone();
    // outer truncation O(eps^N) becomes O(t^(N v)) when N >= 0
    let tail_order = outer.order() * v;
    let mut acc = TruncatedSeries::<M>::big_o(sym.clone(), tail_order);
    let one = TruncatedSeries::<S>::one(sym.clone(), tail_order.max(inner.order()) + 1);
    let inv = if outer.lead < 0 {
        Some(inner.inv()?)
    } else {
        None
    };
    let mut power_pos = one.clone();
    let mut power_neg = one;
    for e in 0..outer.order().max(0) {
        if e >= outer.lead {
            let c = &outer.coeffs[(e - outer.lead) as usize];
            if !c.is_zero() {
                let term = power_pos.map(|p| c.scale(p));
                acc = acc.add(&term)?;
            }
        }
        power_pos = power_pos.mul(&inner)?;
    }
    if let Some(inv) = inv {
        for e in 1..=(-outer.lead) {
            power_neg = power_neg.mul(&inv)?;
            if -e < outer.order() {
                let c = &outer.coeffs[(-e - outer.lead) as usize];
                if !c.is_zero() {
                    acc = acc.add(&power_neg.map(|p| c.scale(p)))?;
                }
            }
        }
    }
    Ok(acc)
}

impl<C: Additive> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.lead + i as i64;
            parts.push(match e {
                0 => format!("({c})"),
                1 => format!("({c})*{}", self.symbol),
                _ => format!("({c})*{}^{e}", self.symbol),
            });
        }
        parts.push(format!("O({}^{})", self.symbol, self.order()));
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON carrier: `{symbol, lead, coeffs: [text]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub symbol: String,
    pub lead: i64,
    pub coeffs: Vec<String>,
}

impl<C: Additive> TruncatedSeries<C> {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            symbol: self.symbol.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TruncatedSeries<crate::gauss::GaussQ> {
    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(j.symbol.clone(), j.lead, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::GaussQ;

    fn q(v: &[i64]) -> Vec<GaussQ> {
        v.iter().map(|&x| GaussQ::int(x)).collect()
    }

    fn s(lead: i64, v: &[i64], order: i64) -> TruncatedSeries<GaussQ> {
        let mut c = q(v);
        c.resize((order - lead) as usize, GaussQ::zero());
        TruncatedSeries::new("e", lead, c)
    }

    #[test]
    fn difference_of_squares() {
        let a = s(0, &[1, 1], 3);
        let b = s(0, &[1, -1], 3);
        assert!(a.mul(&b).unwrap().same_as(&s(0, &[1, 0, -1], 3)));
    }

    #[test]
    fn monomial_product_shifts_lead() {
        let m = TruncatedSeries::monomial("e", -1, GaussQ::one(), 2);
        let p = m.mul(&m).unwrap();
        assert_eq!(p.lead(), -2);
        assert_eq!(p.coeff(-2).unwrap(), GaussQ::one());
    }

    #[test]
    fn hand_convolution() {
        let a = s(0, &[1, 2, 3], 3);
        assert!(a.mul(&a).unwrap().same_as(&s(0, &[1, 4, 10], 3)));
    }

    #[test]
    fn sqrt_binomial() {
        let a = s(0, &[1, 1], 3);
        let r = a.sqrt(&GaussQ::one()).unwrap();
        let want = TruncatedSeries::new(
            "e",
            0,
            vec![GaussQ::one(), GaussQ::frac(1, 2), GaussQ::frac(-1, 8)],
        );
        assert!(r.same_as(&want), "{r}");
        assert!(s(0, &[1], 1)
            .sqrt(&GaussQ::one())
            .unwrap()
            .same_as(&s(0, &[1], 1)));
        assert!(matches!(
            s(1, &[1], 3).sqrt(&GaussQ::one()),
            Err(ForgeError::OddLead(1))
        ));
        assert!(matches!(
            a.sqrt(&GaussQ::int(2)),
            Err(ForgeError::BadBranch)
        ));
    }

    #[test]
    fn compose_examples() {
        let id = s(1, &[1], 4);
        let inner = s(1, &[1, 1], 4);
        assert!(TruncatedSeries::compose(&id, &inner)
            .unwrap()
            .same_as(&inner.restrict(1, 4)));
        // (a + b t)^2 with a in the coefficient ring: use a module-valued outer
        let outer = s(2, &[1], 6);
        let inner2 = s(1, &[2, 3], 3);
        let c = TruncatedSeries::compose(&outer, &inner2).unwrap();
        assert_eq!(c.coeff(2).unwrap(), GaussQ::int(4));
        assert_eq!(c.coeff(3).unwrap(), GaussQ::int(12));
    }

    #[test]
    fn revert_lagrange() {
        let a = s(1, &[1, 1], 4);
        let r = a.revert("t").unwrap();
        assert_eq!(r.coeffs(), &q(&[1, -1, 2])[..]);
        assert_eq!(r.order(), 4);
        let id = s(1, &[1], 5);
        assert!(id.revert("e").unwrap().same_as(&id));
        assert!(matches!(
            s(2, &[1], 4).revert("t"),
            Err(ForgeError::RevertLead(2))
        ));
    }

    #[test]
    fn coefficient_past_order_is_error() {
        let a = s(0, &[1, 2], 2);
        assert!(matches!(a.coeff(2), Err(ForgeError::Truncation { .. })));
        assert_eq!(a.coeff(-3).unwrap(), GaussQ::zero());
        let b = TruncatedSeries::new("f", 0, q(&[1]));
        assert!(matches!(a.add(&b), Err(ForgeError::SymbolMismatch(..))));
    }

    #[test]
    fn json_round_trip() {
        let a = TruncatedSeries::new(
            "e",
            -1,
            vec![
                GaussQ::frac(1, 2),
                GaussQ::new(crate::gauss::rat(1, 3), crate::gauss::rat(-2, 5)),
            ],
        );
        let j = a.to_json();
        assert_eq!(j.coeffs[1], "1/3-2/5*i");
        assert!(TruncatedSeries::from_json(&j).unwrap().same_as(&a));
    }
}
