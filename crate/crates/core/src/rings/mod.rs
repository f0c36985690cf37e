//! Exact differential function rings carrying the x-dependent coefficients.
//!
//! * [`FourierElem`]: trigonometric polynomials with a secular `x` term (Mathieu, large energy).
//! * [`WeierstrassElem`]: span of `1, x, zeta~, d^k wp~` (Lame, large energy).
//! * [`JacobiElem`]: polynomials in `sn, cn, dn` over `sn^a cn^b` (small energy; `k = 0`
//!   gives the trigonometric ring with `sn -> sin`, `cn -> cos`).

mod fourier;
mod jacobi;
mod weierstrass;

pub use fourier::{FourierElem, Parity};
pub use jacobi::{JacobiElem, JacobiMode};
pub use weierstrass::{WeierstrassElem, WpPoly};

use num_complex::Complex64;

use crate::algebra::Module;
use crate::elliptic::EllipticParams;
use crate::error::{ForgeError, Result};
use crate::param::{Bindings, ParamPoly, Var};

/// Numeric context for [`FunctionRing::eval`].
#[derive(Clone, Debug, Default)]
pub struct EvalContext {
    pub params: Bindings,
    pub elliptic: Option<EllipticParams>,
}

impl EvalContext {
    pub fn new(params: Bindings) -> Self {
        Self {
            params,
            elliptic: None,
        }
    }

    pub fn with_elliptic(mut self, ell: EllipticParams) -> Self {
        self.elliptic = Some(ell);
        self
    }

    /// Parameter values with lattice invariants filled in where the caller left them unbound.
    pub fn bindings(&self) -> Bindings {
        let mut b = self.params.clone();
        if let Some(ell) = &self.elliptic {
            for (v, x) in [
                (Var::G2, ell.g2),
                (Var::G3, ell.g3),
                (Var::Zeta1, ell.zeta1),
                (Var::K, ell.k),
                (Var::Kp, ell.kp),
            ] {
                b.entry(v).or_insert(x);
            }
        }
        b
    }

    pub fn elliptic(&self) -> Result<&EllipticParams> {
        self.elliptic
            .as_ref()
            .ok_or_else(|| ForgeError::Unbound("elliptic lattice".into()))
    }
}

/// Interface every coefficient ring of the Riccati recursion provides.
pub trait FunctionRing: Module<ParamPoly> {
    const NAME: &'static str;

    fn constant(c: ParamPoly) -> Self;

    /// The coordinate function `x`, when the ring contains it.
    fn coordinate() -> Result<Self>;

    fn try_mul(&self, other: &Self) -> Result<Self>;

    fn diff(&self) -> Self;

    /// Exact antiderivative with zero integration constant.
    fn antiderivative(&self) -> Result<Self>;

    /// Coefficient of the secular basis element `x`.
    fn secular(&self) -> ParamPoly;

    /// The x-independent part.
    fn constant_part(&self) -> ParamPoly;

    /// `f(x) -> f(-x)`.
    fn reflect(&self) -> Self;

    fn map_coeffs(&self, f: &dyn Fn(&ParamPoly) -> ParamPoly) -> Self;

    fn coeff_polys(&self) -> Vec<ParamPoly>;

    fn eval(&self, x: Complex64, ctx: &EvalContext) -> Result<Complex64>;

    fn try_map_coeffs(&self, f: &dyn Fn(&ParamPoly) -> Result<ParamPoly>) -> Result<Self> {
        let err = std::cell::RefCell::new(None);
        let out = self.map_coeffs(&|p| match f(p) {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                ParamPoly::default()
            }
        });
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

/// Write `coeff * basis` with parentheses only where needed.
pub(crate) fn term_text(coeff: &ParamPoly, basis: &str) -> String {
    let c = coeff.to_string();
    let simple = coeff.num_terms() == 1 && !c.contains(' ') && !c.contains("*i");
    match (basis.is_empty(), c.as_str()) {
        (true, _) => {
            if simple {
                c
            } else {
                format!("({c})")
            }
        }
        (false, "1") => basis.to_string(),
        (false, "-1") => format!("-{basis}"),
        _ if simple => format!("{c}*{basis}"),
        _ => format!("({c})*{basis}"),
    }
}

pub(crate) fn join_terms(parts: Vec<String>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, p) in parts.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&p);
        }
    }
    out
}
