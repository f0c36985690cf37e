//! Minimal algebraic interfaces shared by the exact carriers.

use std::fmt::{Debug, Display};

use crate::gauss::GaussQ;

pub trait Additive: Clone + Debug + Display + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Commutative ring with a copy of Q(i) inside.
pub trait Ring: Additive {
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn from_gauss(q: GaussQ) -> Self;
    /// Multiplicative inverse when it exists inside the ring.
    fn try_inv(&self) -> Option<Self>;

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

pub trait Module<S: Ring>: Additive {
    fn scale(&self, s: &S) -> Self;
}

impl<R: Ring> Module<R> for R {
    fn scale(&self, s: &R) -> R {
        self.mul(s)
    }
}

impl Additive for GaussQ {
    fn zero() -> Self {
        GaussQ::zero()
    }
    fn is_zero(&self) -> bool {
        GaussQ::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for GaussQ {
    fn one() -> Self {
        GaussQ::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_gauss(q: GaussQ) -> Self {
        q
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}
