//! Order-by-order solution of `v_x + v^2 = u + lambda`.
//!
//! Large energy: `v = s + sum_{l>=1} v_l s^{-l}` with `s = sqrt(lambda)`.
//! Small energy: `v = unit * sum_{l>=-1} w_l g^{-l}` with `g` the square root of the coupling.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{Additive, Module, Ring};
use crate::error::{ForgeError, Result};
use crate::gauss::GaussQ;
use crate::param::{pc, pv, ParamPoly, Var};
use crate::rings::{
    EvalContext, FourierElem, FunctionRing, JacobiElem, JacobiMode, WeierstrassElem,
};

pub const DEFAULT_ORDER: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    Mathieu,
    LameWeierstrass,
    LameJacobi,
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Period {
    Pi,
    TwoOmega1,
    TwoK,
    Custom(String),
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Pi => write!(f, "pi"),
            Period::TwoOmega1 => write!(f, "2*omega1"),
            Period::TwoK => write!(f, "2*K"),
            Period::Custom(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub location: String,
    pub value: String,
}

#[derive(Clone, Debug)]
pub struct PotentialSpec<R> {
    pub kind: PotentialKind,
    pub potential: R,
    pub period: Period,
    pub minima: Vec<Minimum>,
}

fn minima(list: &[(&str, &str)]) -> Vec<Minimum> {
    list.iter()
        .map(|(l, v)| Minimum {
            location: l.to_string(),
            value: v.to_string(),
        })
        .collect()
}

/// `u = 2h cos 2x`.
pub fn mathieu_potential() -> PotentialSpec<FourierElem> {
    PotentialSpec {
        kind: PotentialKind::Mathieu,
        potential: FourierElem::cos(2, pc(2, 1).mul(&pv(Var::H))),
        period: Period::Pi,
        minima: minima(&[("0", "2*h"), ("pi/2", "-2*h")]),
    }
}

/// `u = alpha wp~(x)`.
pub fn lame_potential() -> PotentialSpec<WeierstrassElem> {
    PotentialSpec {
        kind: PotentialKind::LameWeierstrass,
        potential: WeierstrassElem::wp_tilde(pv(Var::Alpha)),
        period: Period::TwoOmega1,
        minima: minima(&[
            ("omega1", "alpha*(e1 + zeta1)"),
            ("omega2", "alpha*(e2 + zeta1)"),
            ("omega3", "alpha*(e3 + zeta1)"),
        ]),
    }
}

/// `u = alpha k^2 sn^2 z`.
pub fn lame_jacobi_potential() -> PotentialSpec<JacobiElem> {
    PotentialSpec {
        kind: PotentialKind::LameJacobi,
        potential: JacobiElem::monomial(
            JacobiMode::Formal,
            pv(Var::Alpha).mul(&pv(Var::K).pow(2)),
            2,
            0,
            0,
        ),
        period: Period::TwoK,
        minima: minima(&[("0", "0"), ("K", "alpha*k^2")]),
    }
}

/// `v_1 .. v_N` for `v = s + sum v_l s^{-l}`.
pub fn large_energy_densities<R: FunctionRing>(u: &R, n: usize) -> Result<Vec<R>> {
    if n == 0 {
        return Err(ForgeError::Config(
            "large-energy order must be at least 1".into(),
        ));
    }
    let half = pc(-1, 2);
    let mut v = vec![u.scale(&pc(1, 2))];
    for m in 1..n {
        let mut acc = v[m - 1].diff();
        for j in 1..m {
            acc = acc.add(&v[j - 1].try_mul(&v[m - j - 1])?);
        }
        v.push(acc.scale(&half));
    }
    Ok(v)
}

/// Coefficients of `s^{-m}`, m = 0..N-1, in `v_x + v^2 - u - s^2` for the truncated `v`.
pub fn large_energy_residual<R: FunctionRing>(u: &R, v: &[R]) -> Result<Vec<R>> {
    let n = v.len();
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        // v_m' + 2 v_{m+1} + sum_{i+j=m} v_i v_j; for m = 0 this is 2 v_1 - u
        let mut acc = v[m].scale(&ParamPoly::int(2));
        if m == 0 {
            acc = acc.sub(u);
        } else {
            acc = acc.add(&v[m - 1].diff());
            for i in 1..m {
                acc = acc.add(&v[i - 1].try_mul(&v[m - i - 1])?);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Small-energy expansion data: `u + lambda = sum_m r_m g^{-m}` and `v = unit * sum_l w_l g^{-l}`.
#[derive(Clone, Debug)]
pub struct SmallEnergyProblem {
    pub id: String,
    /// Expansion symbol, e.g. `h^{-1/2}`.
    pub symbol: String,
    pub coupling: Var,
    pub spectral: Var,
    pub unit: GaussQ,
    pub rhs: BTreeMap<i64, JacobiElem>,
    pub branch: JacobiElem,
    pub mode: JacobiMode,
}

impl SmallEnergyProblem {
    pub fn new(
        id: &str,
        coupling: Var,
        spectral: Var,
        unit: GaussQ,
        rhs: BTreeMap<i64, JacobiElem>,
        branch: JacobiElem,
    ) -> Result<Self> {
        let mode = branch.mode();
        let p = Self {
            id: id.into(),
            symbol: format!("{}^{{-1/2}}", coupling.name()),
            coupling,
            spectral,
            unit,
            rhs,
            branch,
            mode,
        };
        let lead = p.rhs_scaled(-2);
        if p.branch.try_mul(&p.branch)? != lead {
            return Err(ForgeError::BadBranch);
        }
        Ok(p)
    }

    /// `r_m / unit^2`.
    pub fn rhs_scaled(&self, m: i64) -> JacobiElem {
        let u2inv = self.unit.mul(&self.unit).inv().expect("unit is nonzero");
        match self.rhs.get(&m) {
            Some(r) => r.scale(&ParamPoly::constant(u2inv)),
            None => JacobiElem::zero_in(self.mode),
        }
    }

    /// `1 / unit`, the coefficient of `w_x`.
    fn diff_factor(&self) -> ParamPoly {
        ParamPoly::constant(self.unit.inv().expect("unit is nonzero"))
    }

    /// Same problem with the opposite branch `-w_{-1}`.
    pub fn conjugate_branch(&self) -> Self {
        Self {
            branch: self.branch.neg(),
            id: format!("{}-conj", self.id),
            ..self.clone()
        }
    }
}

fn trig(c: ParamPoly, s: i32, k: i32) -> JacobiElem {
    JacobiElem::monomial(JacobiMode::Trig, c, s, k, 0)
}

fn formal(c: ParamPoly, s: i32, k: i32, d: u32) -> JacobiElem {
    JacobiElem::monomial(JacobiMode::Formal, c, s, k, d)
}

fn k_pow(n: u32) -> ParamPoly {
    pv(Var::K).pow(n)
}

/// Around `x* = 0`, `lambda = -2h + delta`: `u + lambda = -4h sin^2 x + delta`.
pub fn mathieu_min0() -> SmallEnergyProblem {
    let rhs = BTreeMap::from([
        (-2, trig(ParamPoly::int(-4), 2, 0)),
        (0, trig(pv(Var::Delta), 0, 0)),
    ]);
    let branch = trig(crate::param::pi_unit().mul(&ParamPoly::int(2)), 1, 0);
    SmallEnergyProblem::new(
        "mathieu-min0",
        Var::H,
        Var::Delta,
        GaussQ::one(),
        rhs,
        branch,
    )
    .expect("catalog")
}

/// Around `x* = pi/2`, `lambda = 2h + delta`: `u + lambda = 4h cos^2 x + delta`.
pub fn mathieu_minpi2() -> SmallEnergyProblem {
    let rhs = BTreeMap::from([
        (-2, trig(ParamPoly::int(4), 0, 2)),
        (0, trig(pv(Var::Delta), 0, 0)),
    ]);
    let branch = trig(ParamPoly::int(2), 0, 1);
    SmallEnergyProblem::new(
        "mathieu-minpi2",
        Var::H,
        Var::Delta,
        GaussQ::one(),
        rhs,
        branch,
    )
    .expect("catalog")
}

/// Around `z* = 0`: `u + Lambda = alpha k^2 sn^2 z + Lambda`.
pub fn lame_z0() -> SmallEnergyProblem {
    let rhs = BTreeMap::from([
        (-2, formal(k_pow(2), 2, 0, 0)),
        (0, formal(pv(Var::Lambda), 0, 0, 0)),
    ]);
    let branch = formal(pv(Var::K), 1, 0, 0);
    SmallEnergyProblem::new(
        "lame-z0",
        Var::Alpha,
        Var::Lambda,
        GaussQ::one(),
        rhs,
        branch,
    )
    .expect("catalog")
}

/// Around `z* = K`, `Lambda = -alpha k^2 + Lambda~`: `u + Lambda = -alpha k^2 cn^2 z + Lambda~`,
/// solved with the overall unit `i`.
pub fn lame_zk() -> SmallEnergyProblem {
    let rhs = BTreeMap::from([
        (-2, formal(k_pow(2).neg(), 0, 2, 0)),
        (0, formal(pv(Var::LambdaT), 0, 0, 0)),
    ]);
    let branch = formal(pv(Var::K), 0, 1, 0);
    SmallEnergyProblem::new(
        "lame-zK",
        Var::Alpha,
        Var::LambdaT,
        GaussQ::i(),
        rhs,
        branch,
    )
    .expect("catalog")
}

/// `w_{-1} .. w_N` (index `l + 1` holds `w_l`).
pub fn small_energy_densities(p: &SmallEnergyProblem, n: usize) -> Result<Vec<JacobiElem>> {
    let a = p.diff_factor();
    let two_branch = p.branch.scale(&ParamPoly::int(2));
    let mut w = vec![p.branch.clone()];
    for m in -1..(n as i64) {
        let wm = &w[(m + 1) as usize];
        let mut acc = p.rhs_scaled(m).sub(&wm.diff().scale(&a));
        for j in 0..=m {
            acc = acc.sub(&w[(j + 1) as usize].try_mul(&w[(m - j + 1) as usize])?);
        }
        let next = acc.try_div(&two_branch).map_err(|e| match e {
            ForgeError::NonMonomialDivisor(s) => {
                ForgeError::NonMonomialDivisor(format!("{} at order {}: {s}", p.id, m + 1))
            }
            other => other,
        })?;
        w.push(next);
    }
    Ok(w)
}

/// Coefficients of `g^{-m}`, m = -2..N-1, of `w^2 + a w_x - R / unit^2`; all vanish for a solution.
pub fn small_energy_residual(p: &SmallEnergyProblem, w: &[JacobiElem]) -> Result<Vec<JacobiElem>> {
    let n = w.len() as i64 - 2;
    let a = p.diff_factor();
    let at = |l: i64| &w[(l + 1) as usize];
    let mut out = Vec::new();
    for m in -2..n {
        let mut acc = p.rhs_scaled(m).neg();
        if m >= -1 {
            acc = acc.add(&at(m).diff().scale(&a));
        }
        for i in -1..=(m + 1) {
            let j = m - i;
            if j < -1 || j > n || i > n {
                continue;
            }
            acc = acc.add(&at(i).try_mul(at(j))?);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Numeric residual of the truncated expansion: every exact residual coefficient evaluated at `z`.
pub fn numeric_residual_max<R: FunctionRing>(
    res: &[R],
    points: &[Complex64],
    ctx: &EvalContext,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for r in res {
        for &z in points {
            worst = worst.max(r.eval(z, ctx)?.norm());
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemId {
    MathieuLarge,
    MathieuMin0,
    MathieuMinPi2,
    LameLarge,
    LameZ0,
    LameZK,
}

impl ProblemId {
    pub const ALL: [ProblemId; 6] = [
        ProblemId::MathieuLarge,
        ProblemId::MathieuMin0,
        ProblemId::MathieuMinPi2,
        ProblemId::LameLarge,
        ProblemId::LameZ0,
        ProblemId::LameZK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::MathieuLarge => "mathieu-large",
            ProblemId::MathieuMin0 => "mathieu-min0",
            ProblemId::MathieuMinPi2 => "mathieu-minpi2",
            ProblemId::LameLarge => "lame-large",
            ProblemId::LameZ0 => "lame-z0",
            ProblemId::LameZK => "lame-zK",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| ForgeError::Config(format!("unknown problem `{s}`")))
    }

    pub fn small_energy(self) -> Option<SmallEnergyProblem> {
        match self {
            ProblemId::MathieuMin0 => Some(mathieu_min0()),
            ProblemId::MathieuMinPi2 => Some(mathieu_minpi2()),
            ProblemId::LameZ0 => Some(lame_z0()),
            ProblemId::LameZK => Some(lame_zk()),
            _ => None,
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
