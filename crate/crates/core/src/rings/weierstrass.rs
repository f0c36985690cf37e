use std::cell::RefCell;
use std::fmt;

use num_complex::Complex64;

use super::{join_terms, term_text, EvalContext, FunctionRing};
use crate::algebra::{Additive, Module, Ring};
use crate::error::{ForgeError, Result};
use crate::param::{pc, pv, ParamPoly, Var};

type Poly = Vec<ParamPoly>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn padd(a: &[ParamPoly], b: &[ParamPoly]) -> Poly {
    let n = a.len().max(b.len());
    let z = ParamPoly::default();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

fn pmul(a: &[ParamPoly], b: &[ParamPoly]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ParamPoly::default(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(out)
}

fn pderiv(a: &[ParamPoly]) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&ParamPoly::int(i as i64)))
            .collect(),
    )
}

fn pscale(a: &[ParamPoly], s: &ParamPoly) -> Poly {
    trim(a.iter().map(|c| c.mul(s)).collect())
}

/// `4P^3 - g2 P - g3`.
fn curve() -> Poly {
    vec![
        pv(Var::G3).neg(),
        pv(Var::G2).neg(),
        ParamPoly::default(),
        ParamPoly::int(4),
    ]
}

/// `6P^2 - g2/2`.
fn half_curve_deriv() -> Poly {
    vec![
        pv(Var::G2).mul(&pc(-1, 2)),
        ParamPoly::default(),
        ParamPoly::int(6),
    ]
}

/// `A(P) + B(P) P'` with `P = wp`, reduced on `P'^2 = 4P^3 - g2 P - g3`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WpPoly {
    pub a: Vec<ParamPoly>,
    pub b: Vec<ParamPoly>,
}

impl WpPoly {
    pub fn constant(c: ParamPoly) -> Self {
        Self {
            a: trim(vec![c]),
            b: Vec::new(),
        }
    }

    pub fn wp() -> Self {
        Self {
            a: vec![ParamPoly::default(), ParamPoly::one()],
            b: Vec::new(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            a: padd(&self.a, &o.a),
            b: padd(&self.b, &o.b),
        }
    }

    pub fn scale(&self, s: &ParamPoly) -> Self {
        Self {
            a: pscale(&self.a, s),
            b: pscale(&self.b, s),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = padd(&pmul(&self.a, &o.a), &pmul(&pmul(&self.b, &o.b), &curve()));
        let b = padd(&pmul(&self.a, &o.b), &pmul(&o.a, &self.b));
        Self { a, b }
    }

    pub fn diff(&self) -> Self {
        let a = padd(
            &pmul(&pderiv(&self.b), &curve()),
            &pmul(&self.b, &half_curve_deriv()),
        );
        Self {
            a,
            b: pderiv(&self.a),
        }
    }
}

thread_local! {
    /// `d^k wp` as `WpPoly`, k = 0, 1, 2, ...
    static WP_DERIVS: RefCell<Vec<WpPoly>> = RefCell::new(vec![WpPoly::wp()]);
}

fn wp_deriv_image(k: usize) -> WpPoly {
    WP_DERIVS.with(|cell| {
        let mut v = cell.borrow_mut();
        while v.len() <= k {
            let next = v.last().unwrap().diff();
            v.push(next);
        }
        v[k].clone()
    })
}

/// `c + s x + z zeta~ + sum_k d_k d^k wp~`, with `wp~ = wp + zeta1` and `zeta~' = -wp~`.
#[derive(Clone, Debug, Default)]
pub struct WeierstrassElem {
    pub constant: ParamPoly,
    pub secular: ParamPoly,
    pub zeta: ParamPoly,
    pub derivs: Vec<ParamPoly>,
}

impl WeierstrassElem {
    /// `c * d^k wp~`.
    pub fn wp_tilde_deriv(k: usize, c: ParamPoly) -> Self {
        let mut derivs = vec![ParamPoly::default(); k + 1];
        derivs[k] = c;
        Self {
            derivs,
            ..Default::default()
        }
        .trimmed()
    }

    pub fn wp_tilde(c: ParamPoly) -> Self {
        Self::wp_tilde_deriv(0, c)
    }

    pub fn zeta_tilde(c: ParamPoly) -> Self {
        Self {
            zeta: c,
            ..Default::default()
        }
    }

    pub fn deriv_coeff(&self, k: usize) -> ParamPoly {
        self.derivs.get(k).cloned().unwrap_or_default()
    }

    fn trimmed(mut self) -> Self {
        self.derivs = trim(self.derivs);
        self
    }

    pub fn in_mul_subring(&self) -> bool {
        self.secular.is_zero() && self.zeta.is_zero()
    }

    pub fn to_wp_poly(&self) -> Result<WpPoly> {
        if !self.in_mul_subring() {
            return Err(ForgeError::SubringViolation);
        }
        let mut out = WpPoly::constant(self.constant.clone());
        for (k, c) in self.derivs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&wp_deriv_image(k).scale(c));
            if k == 0 {
                out = out.add(&WpPoly::constant(c.mul(&pv(Var::Zeta1))));
            }
        }
        Ok(out)
    }

    /// Rewrite `A(wp) + B(wp) wp'` in the derivative basis.
    pub fn from_wp_poly(p: &WpPoly) -> Result<Self> {
        // coefficients in the basis 1, wp, d wp, d^2 wp, ...
        let mut basis_coeffs: Vec<ParamPoly> = Vec::new();
        let mut set = |k: usize, c: ParamPoly| {
            if basis_coeffs.len() <= k {
                basis_coeffs.resize(k + 1, ParamPoly::default());
            }
            basis_coeffs[k] = c;
        };
        let mut constant = ParamPoly::default();

        let mut a = p.a.clone();
        let mut b = p.b.clone();
        while let Some(top) = b.last().cloned() {
            let d = b.len() - 1;
            // d^{2j+1} wp has P'-part of P-degree j
            let k = 2 * d + 1;
            let img = wp_deriv_image(k);
            let lead = img.b[d]
                .as_constant()
                .and_then(|x| x.inv())
                .ok_or(ForgeError::NotInvertible)?;
            let c = top.mul(&ParamPoly::constant(lead));
            set(k, c.clone());
            b = padd(&b, &pscale(&img.b, &c.neg()));
            a = padd(&a, &pscale(&img.a, &c.neg()));
            if b.len() > d {
                return Err(ForgeError::Residual(
                    "wp' reduction did not lower the degree".into(),
                ));
            }
        }
        while let Some(top) = a.last().cloned() {
            let d = a.len() - 1;
            if d == 0 {
                constant = top;
                a.clear();
                break;
            }
            // d^{2j} wp has P-degree j + 1
            let k = 2 * (d - 1);
            let img = wp_deriv_image(k);
            let lead = img.a[d]
                .as_constant()
                .and_then(|x| x.inv())
                .ok_or(ForgeError::NotInvertible)?;
            let c = top.mul(&ParamPoly::constant(lead));
            set(k, c.clone());
            a = padd(&a, &pscale(&img.a, &c.neg()));
            if a.len() > d {
                return Err(ForgeError::Residual(
                    "wp reduction did not lower the degree".into(),
                ));
            }
        }

        if !a.is_empty() {
            return Err(ForgeError::Residual(
                "odd wp derivatives left an even remainder".into(),
            ));
        }
        // wp = wp~ - zeta1
        if let Some(c0) = basis_coeffs.first() {
            constant = constant.sub(&c0.mul(&pv(Var::Zeta1)));
        }
        Ok(Self {
            constant,
            derivs: basis_coeffs,
            ..Default::default()
        }
        .trimmed())
    }

    fn max_deriv(&self) -> usize {
        self.derivs.len().saturating_sub(1)
    }

    /// True when no basis element has a first-order pole (`zeta~` and `x` are absent).
    pub fn pole_order_one_free(&self) -> bool {
        self.zeta.is_zero()
    }
}

impl PartialEq for WeierstrassElem {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Additive for WeierstrassElem {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.constant.is_zero()
            && self.secular.is_zero()
            && self.zeta.is_zero()
            && self.derivs.iter().all(|c| c.is_zero())
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            constant: self.constant.add(&o.constant),
            secular: self.secular.add(&o.secular),
            zeta: self.zeta.add(&o.zeta),
            derivs: padd(&self.derivs, &o.derivs),
        }
    }

    fn neg(&self) -> Self {
        self.map_coeffs(&|c| c.neg())
    }
}

impl Module<ParamPoly> for WeierstrassElem {
    fn scale(&self, s: &ParamPoly) -> Self {
        self.map_coeffs(&|c| c.mul(s))
    }
}

impl FunctionRing for WeierstrassElem {
    const NAME: &'static str = "weierstrass";

    fn constant(c: ParamPoly) -> Self {
        Self {
            constant: c,
            ..Default::default()
        }
    }

    fn coordinate() -> Result<Self> {
        Ok(Self {
            secular: ParamPoly::one(),
            ..Default::default()
        })
    }

    fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.derivs.is_empty() && self.secular.is_zero() && self.zeta.is_zero() {
            return Ok(other.scale(&self.constant));
        }
        if other.derivs.is_empty() && other.secular.is_zero() && other.zeta.is_zero() {
            return Ok(self.scale(&other.constant));
        }
        Self::from_wp_poly(&self.to_wp_poly()?.mul(&other.to_wp_poly()?))
    }

    fn diff(&self) -> Self {
        let mut derivs = vec![ParamPoly::default()];
        derivs.extend(self.derivs.iter().cloned());
        derivs[0] = derivs[0].sub(&self.zeta);
        Self {
            constant: self.secular.clone(),
            derivs,
            ..Default::default()
        }
        .trimmed()
    }

    fn antiderivative(&self) -> Result<Self> {
        if !self.in_mul_subring() {
            return Err(ForgeError::NoAntiderivative("x or zeta~ term".into()));
        }
        let zeta = self.deriv_coeff(0).neg();
        let derivs = self.derivs.iter().skip(1).cloned().collect();
        Ok(Self {
            constant: ParamPoly::default(),
            secular: self.constant.clone(),
            zeta,
            derivs,
        }
        .trimmed())
    }

    fn secular(&self) -> ParamPoly {
        self.secular.clone()
    }

    fn constant_part(&self) -> ParamPoly {
        self.constant.clone()
    }

    fn reflect(&self) -> Self {
        let derivs = self
            .derivs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        Self {
            constant: self.constant.clone(),
            secular: self.secular.neg(),
            zeta: self.zeta.neg(),
            derivs,
        }
    }

    fn map_coeffs(&self, f: &dyn Fn(&ParamPoly) -> ParamPoly) -> Self {
        Self {
            constant: f(&self.constant),
            secular: f(&self.secular),
            zeta: f(&self.zeta),
            derivs: self.derivs.iter().map(f).collect(),
        }
        .trimmed()
    }

    fn coeff_polys(&self) -> Vec<ParamPoly> {
        let mut v = vec![
            self.constant.clone(),
            self.secular.clone(),
            self.zeta.clone(),
        ];
        v.extend(self.derivs.iter().cloned());
        v
    }

    fn eval(&self, x: Complex64, ctx: &EvalContext) -> Result<Complex64> {
        let b = ctx.bindings();
        let mut acc = self.constant.eval(&b)?;
        if !self.secular.is_zero() {
            acc += self.secular.eval(&b)? * x;
        }
        if self.is_zero() || (self.derivs.is_empty() && self.zeta.is_zero()) {
            return Ok(acc);
        }
        let ell = ctx.elliptic()?;
        if !self.zeta.is_zero() {
            acc += self.zeta.eval(&b)? * ell.zeta_tilde(x)?;
        }
        if !self.derivs.is_empty() {
            let vals = ell.wp_tilde_derivs(x, self.max_deriv())?;
            for (c, v) in self.derivs.iter().zip(vals) {
                if !c.is_zero() {
                    acc += c.eval(&b)? * v;
                }
            }
        }
        Ok(acc)
    }
}

fn deriv_name(k: usize) -> String {
    match k {
        0 => "wp~".into(),
        1 => "wp~'".into(),
        2 => "wp~''".into(),
        _ => format!("d{k}wp~"),
    }
}

impl fmt::Display for WeierstrassElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.secular.is_zero() {
            parts.push(term_text(&self.secular, "x"));
        }
        if !self.zeta.is_zero() {
            parts.push(term_text(&self.zeta, "zeta~"));
        }
        for (k, c) in self.derivs.iter().enumerate().rev() {
            if !c.is_zero() {
                parts.push(term_text(c, &deriv_name(k)));
            }
        }
        if !self.constant.is_zero() {
            parts.push(term_text(&self.constant, ""));
        }
        write!(f, "{}", join_terms(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::EllipticParams;
    use crate::param::Bindings;
    use proptest::prelude::*;

    fn z1() -> ParamPoly {
        pv(Var::Zeta1)
    }

    #[test]
    fn wp_tilde_squared() {
        let p = WeierstrassElem::wp_tilde(ParamPoly::one());
        let got = p.try_mul(&p).unwrap();
        let want = WeierstrassElem::wp_tilde_deriv(2, pc(1, 6))
            .add(&WeierstrassElem::wp_tilde(z1().mul(&ParamPoly::int(2))))
            .add(&WeierstrassElem::constant(
                pv(Var::G2).mul(&pc(1, 12)).sub(&z1().pow(2)),
            ));
        assert_eq!(got, want, "{got}");
    }

    #[test]
    fn wp_prime_squared() {
        let p = WeierstrassElem::wp_tilde_deriv(1, ParamPoly::one());
        let got = p.try_mul(&p).unwrap();
        // wp'''' / 30 - (2/5) g2 (wp~ - zeta1) - (3/5) g3
        let g2 = pv(Var::G2);
        let want = WeierstrassElem::wp_tilde_deriv(4, pc(1, 30))
            .add(&WeierstrassElem::wp_tilde(g2.mul(&pc(-2, 5))))
            .add(&WeierstrassElem::constant(
                g2.mul(&z1())
                    .mul(&pc(2, 5))
                    .sub(&pv(Var::G3).mul(&pc(3, 5))),
            ));
        assert_eq!(got, want, "{got}");
    }

    #[test]
    fn subring_enforced() {
        let z = WeierstrassElem::zeta_tilde(ParamPoly::one());
        assert!(z
            .try_mul(&WeierstrassElem::wp_tilde(ParamPoly::one()))
            .is_err());
    }

    #[test]
    fn calculus() {
        let z = WeierstrassElem::zeta_tilde(ParamPoly::one());
        assert_eq!(z.diff(), WeierstrassElem::wp_tilde(ParamPoly::int(-1)));
        let half_alpha = pv(Var::Alpha).mul(&pc(1, 2));
        let u = WeierstrassElem::wp_tilde(half_alpha.clone());
        assert_eq!(
            u.antiderivative().unwrap(),
            WeierstrassElem::zeta_tilde(half_alpha.neg())
        );
        let e = WeierstrassElem::wp_tilde_deriv(3, pv(Var::G2))
            .add(&WeierstrassElem::constant(pc(3, 1)))
            .add(&u);
        assert_eq!(e.antiderivative().unwrap().diff(), e);
    }

    fn lattice() -> EllipticParams {
        EllipticParams::new(
            Complex64::new(std::f64::consts::FRAC_PI_2, 0.0),
            Complex64::new(0.2, 1.1),
        )
        .unwrap()
    }

    #[test]
    fn eval_at_half_period() {
        let ell = lattice();
        let ctx = EvalContext::new(Bindings::new()).with_elliptic(ell.clone());
        let v = WeierstrassElem::wp_tilde(ParamPoly::one())
            .eval(ell.omega1, &ctx)
            .unwrap();
        assert!((v - (ell.e1 + ell.zeta1)).norm() < 1e-12);
    }

    fn arb_elem() -> impl Strategy<Value = WeierstrassElem> {
        (prop::collection::vec(-3i64..=3, 5), -3i64..=3).prop_map(|(ds, c)| {
            let mut e = WeierstrassElem::constant(ParamPoly::int(c));
            for (k, d) in ds.into_iter().enumerate() {
                e = e.add(&WeierstrassElem::wp_tilde_deriv(k, ParamPoly::int(d)));
            }
            e
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn eval_is_multiplicative(a in arb_elem(), b in arb_elem(), xr in 0.2f64..1.3, xi in -0.3f64..0.3,
                                  wr in -0.4f64..0.4, wi in 0.8f64..1.6) {
            let ell = EllipticParams::new(Complex64::new(1.0, 0.0), Complex64::new(wr, wi)).unwrap();
            let ctx = EvalContext::new(Bindings::new()).with_elliptic(ell);
            let x = Complex64::new(xr, xi);
            let ab = a.try_mul(&b).unwrap().eval(x, &ctx).unwrap();
            let prod = a.eval(x, &ctx).unwrap() * b.eval(x, &ctx).unwrap();
            prop_assert!((ab - prod).norm() <= 1e-8 * prod.norm().max(1.0), "{} vs {}", ab, prod);
            let h = 1e-5;
            let fd = (a.eval(x + h, &ctx).unwrap() - a.eval(x - h, &ctx).unwrap()) / (2.0 * h);
            let d = a.diff().eval(x, &ctx).unwrap();
            prop_assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0));
        }
    }
}
