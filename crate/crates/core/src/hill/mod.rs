//! Numeric Floquet oracle for `psi'' = (u(x) + lambda) psi`.
//!
//! The monodromy matrix transports `(psi, psi')` over one period; `tr M = 2 cos(nu T)`.

mod rk78;
pub mod sweeps;

pub use rk78::{Rk78, Stats};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{ForgeError, Result};

type C = Complex64;

/// Numeric potential callback.
pub type PotentialFn<'a> = dyn Fn(C) -> Result<C> + Sync + 'a;

/// Default mixed absolute/relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Smallest tolerance accepted by [`monodromy`].
pub const MIN_TOL: f64 = 1e-13;
/// Bound on `|det M - 1|`.
pub const WRONSKIAN_BOUND: f64 = 1e-9;

/// A period path: `start -> waypoints -> start + period`, all straight segments.
#[derive(Clone, Debug)]
pub struct PeriodPath {
    pub start: C,
    pub period: f64,
    pub waypoints: Vec<C>,
}

impl PeriodPath {
    pub fn real(period: f64) -> Self {
        Self {
            start: C::new(0.0, 0.0),
            period,
            waypoints: Vec::new(),
        }
    }

    pub fn shifted(start: C, period: f64) -> Self {
        Self {
            start,
            period,
            waypoints: Vec::new(),
        }
    }

    pub fn vertices(&self) -> Vec<C> {
        let mut v = vec![self.start];
        v.extend(self.waypoints.iter().copied());
        v.push(self.start + self.period);
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyResult {
    /// Row-major transfer matrix of `(psi, psi')`.
    pub matrix: [[C; 2]; 2],
    pub trace: C,
    /// Principal exponent `acos(tr / 2) / T`.
    pub nu: C,
    /// `(nu, -nu)`: the exponents of `psi_+` and `psi_-`.
    pub nu_pair: [C; 2],
    pub wronskian_defect: f64,
    /// `|tr^2 - 4|` is small: the exponent is ill-conditioned here.
    pub near_band_edge: bool,
    pub steps: usize,
    pub rejected: usize,
    pub tolerance: f64,
    pub period: f64,
}

impl MonodromyResult {
    /// The candidate `+-nu + 2 pi m / T` closest to `reference`.
    pub fn nu_near(&self, reference: C) -> C {
        let w = 2.0 * std::f64::consts::PI / self.period;
        let mut best = self.nu;
        let mut dist = f64::INFINITY;
        for cand in self.nu_pair {
            let m = ((reference.re - cand.re) / w).round();
            let c = cand + w * m;
            let d = (c - reference).norm();
            if d < dist {
                dist = d;
                best = c;
            }
        }
        best
    }
}

/// `psi'' = (u + lambda) psi` as a first-order system for two solutions at once.
fn hill_rhs<'a>(
    u: &'a PotentialFn<'a>,
    lambda: C,
) -> impl FnMut(C, &[C; 4]) -> Result<[C; 4]> + 'a {
    move |x, y| {
        let q = u(x)? + lambda;
        Ok([y[1], q * y[0], y[3], q * y[2]])
    }
}

/// Monodromy over one period of the real segment `[0, T]`.
pub fn monodromy(u: &PotentialFn, lambda: C, period: f64, tol: f64) -> Result<MonodromyResult> {
    monodromy_on(u, lambda, &PeriodPath::real(period), tol)
}

/// Monodromy along an explicit path. A pole on the path shows up as a step-size collapse.
pub fn monodromy_on(
    u: &PotentialFn,
    lambda: C,
    path: &PeriodPath,
    tol: f64,
) -> Result<MonodromyResult> {
    if !(tol >= MIN_TOL) {
        return Err(ForgeError::Config(format!(
            "tolerance {tol} is below {MIN_TOL}"
        )));
    }
    if !(path.period > 0.0) {
        return Err(ForgeError::Config("period must be positive".into()));
    }
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let mut f = hill_rhs(u, lambda);
    let mut stats = Stats::default();
    let pts = path.vertices();
    let ys = Rk78::new(tol).sample(&mut f, &pts, [one, zero, zero, one], &mut stats)?;
    let y = ys.last().expect("path has two vertices");
    let matrix = [[y[0], y[2]], [y[1], y[3]]];
    let trace = y[0] + y[3];
    let det = y[0] * y[3] - y[2] * y[1];
    let nu = (trace / 2.0).acos() / path.period;
    let defect = (det - 1.0).norm();
    if defect > WRONSKIAN_BOUND {
        return Err(ForgeError::Residual(format!(
            "Wronskian defect {defect:.3e} exceeds {WRONSKIAN_BOUND:e}"
        )));
    }
    Ok(MonodromyResult {
        matrix,
        trace,
        nu,
        nu_pair: [nu, -nu],
        wronskian_defect: defect,
        near_band_edge: (trace * trace - 4.0).norm() < 1e-6,
        steps: stats.accepted,
        rejected: stats.rejected,
        tolerance: tol,
        period: path.period,
    })
}

/// Oracle-versus-series record.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub lambda: C,
    pub nu_series: f64,
    pub nu_oracle: f64,
    pub abs_err: f64,
    pub omitted_term_bound: f64,
    pub wronskian_defect: f64,
}

/// Offsets, in units of `pi / T`, used when `nu T / pi` sits near an integer.
pub const EDGE_OFFSETS: [f64; 4] = [-0.3, -0.15, 0.15, 0.3];

/// `nu_oracle(lambda(nu)) - nu` at a real `nu`.
///
/// Near a band edge the difference is sampled at [`EDGE_OFFSETS`] and interpolated back to `nu`
/// with the cubic through the four samples.
pub fn exponent_error(
    u: &PotentialFn,
    lambda_of_nu: &dyn Fn(f64) -> Result<C>,
    nu: f64,
    path: &PeriodPath,
    tol: f64,
) -> Result<(f64, f64)> {
    let unit = std::f64::consts::PI / path.period;
    let frac = nu / unit - (nu / unit).round();
    let at = |n: f64| -> Result<(f64, f64)> {
        let m = monodromy_on(u, lambda_of_nu(n)?, path, tol)?;
        Ok(((m.nu_near(C::new(n, 0.0)) - n).re, m.wronskian_defect))
    };
    if frac.abs() > 0.1 {
        return at(nu);
    }
    let mut defect = 0.0f64;
    let mut samples = Vec::with_capacity(EDGE_OFFSETS.len());
    for s in EDGE_OFFSETS {
        let (e, d) = at(nu + s * unit)?;
        defect = defect.max(d);
        samples.push((s, e));
    }
    Ok((lagrange_at_zero(&samples), defect))
}

fn lagrange_at_zero(pts: &[(f64, f64)]) -> f64 {
    let mut acc = 0.0;
    for (i, &(xi, yi)) in pts.iter().enumerate() {
        let mut w = 1.0;
        for (j, &(xj, _)) in pts.iter().enumerate() {
            if i != j {
                w *= -xj / (xi - xj);
            }
        }
        acc += w * yi;
    }
    acc
}

/// Builds an [`ErrorReport`] at one `nu`.
pub fn oracle_report(
    u: &PotentialFn,
    lambda_of_nu: &dyn Fn(f64) -> Result<C>,
    nu: f64,
    omitted_term_bound: f64,
    path: &PeriodPath,
    tol: f64,
) -> Result<ErrorReport> {
    let (err, defect) = exponent_error(u, lambda_of_nu, nu, path, tol)?;
    Ok(ErrorReport {
        lambda: lambda_of_nu(nu)?,
        nu_series: nu,
        nu_oracle: nu + err,
        abs_err: err.abs(),
        omitted_term_bound,
        wronskian_defect: defect,
    })
}

/// How the asymptotic exponent `S` is evaluated.
pub enum Exponent<'a> {
    /// `(S, S', S'')` in closed form.
    Exact(Box<dyn Fn(C) -> Result<[C; 3]> + 'a>),
    /// `(S', S'')` only; `S` comes from quadrature along the same path as the ODE.
    LogDerivative(Box<dyn Fn(C) -> Result<[C; 2]> + 'a>),
}

impl Exponent<'_> {
    fn derivs(&self, x: C) -> Result<[C; 2]> {
        match self {
            Exponent::Exact(f) => f(x).map(|s| [s[1], s[2]]),
            Exponent::LogDerivative(f) => f(x),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WavefunctionPoint {
    pub x: C,
    /// `|psi_ode - psi_asym| / |psi_asym|`.
    pub rel_err: f64,
    /// `|S'' + S'^2 - u - lambda|`, the ODE residual divided by `|psi_asym|`.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WavefunctionReport {
    pub lambda: C,
    pub points: Vec<WavefunctionPoint>,
    pub max_rel_err: f64,
    pub max_residual: f64,
}

/// Compares `psi_asym = exp(S(x) - S(x0))` with the ODE solution that has the same data at `x0 = grid[0]`.
pub fn wavefunction_error(
    exponent: &Exponent,
    u: &PotentialFn,
    lambda: C,
    grid: &[C],
    tol: f64,
) -> Result<WavefunctionReport> {
    let x0 = *grid
        .first()
        .ok_or_else(|| ForgeError::Config("empty grid".into()))?;
    let [s1, _] = exponent.derivs(x0)?;
    let one = C::new(1.0, 0.0);
    // state: psi, psi', S - S(x0)
    let mut f = |x: C, y: &[C; 3]| -> Result<[C; 3]> {
        let q = u(x)? + lambda;
        let [sp, _] = exponent.derivs(x)?;
        Ok([y[1], q * y[0], sp])
    };
    let mut stats = Stats::default();
    let states = Rk78::new(tol).sample(&mut f, grid, [one, s1, C::new(0.0, 0.0)], &mut stats)?;
    let s0 = match exponent {
        Exponent::Exact(e) => Some(e(x0)?[0]),
        Exponent::LogDerivative(_) => None,
    };
    let mut points = Vec::with_capacity(grid.len());
    for (&x, y) in grid.iter().zip(&states) {
        let ds = match (exponent, s0) {
            (Exponent::Exact(e), Some(s0)) => e(x)?[0] - s0,
            _ => y[2],
        };
        let asym = ds.exp();
        let [sp, spp] = exponent.derivs(x)?;
        points.push(WavefunctionPoint {
            x,
            rel_err: (y[0] - asym).norm() / asym.norm(),
            residual: (spp + sp * sp - u(x)? - lambda).norm(),
        });
    }
    let max_rel_err = points.iter().map(|p| p.rel_err).fold(0.0, f64::max);
    let max_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(WavefunctionReport {
        lambda,
        points,
        max_rel_err,
        max_residual,
    })
}

/// Parity of a shooting solution about the launch point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Eigenvalue of a state symmetric about `center`: launch with even or odd data and require
/// `psi'` (even) or `psi` (odd) to vanish at `edge`.
///
/// The root is bracketed by stepping outward from `guess`, then refined by the Illinois rule.
pub fn symmetric_shooting(
    u: &PotentialFn,
    center: f64,
    edge: f64,
    parity: Parity,
    guess: f64,
    tol: f64,
) -> Result<f64> {
    let (one, zero) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    let y0 = match parity {
        Parity::Even => [one, zero],
        Parity::Odd => [zero, one],
    };
    let target = |lambda: f64| -> Result<f64> {
        let mut f = |x: C, y: &[C; 2]| -> Result<[C; 2]> { Ok([y[1], (u(x)? + lambda) * y[0]]) };
        let mut st = Stats::default();
        let y = Rk78::new(tol).integrate(
            &mut f,
            C::new(center, 0.0),
            C::new(edge, 0.0),
            y0,
            &mut st,
        )?;
        Ok(match parity {
            Parity::Even => y[1].re,
            Parity::Odd => y[0].re,
        })
    };
    let (mut a, mut b) = bracket(&target, guess)?;
    let (mut fa, mut fb) = (target(a)?, target(b)?);
    let mut side = 0i8;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = target(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
        if (b - a).abs() <= 4.0 * f64::EPSILON * c.abs().max(1.0) {
            return Ok(c);
        }
    }
    Err(ForgeError::Residual(format!(
        "shooting did not converge near {guess}"
    )))
}

fn bracket(target: &dyn Fn(f64) -> Result<f64>, guess: f64) -> Result<(f64, f64)> {
    let f0 = target(guess)?;
    let mut step = 1e-4 * guess.abs().max(1.0);
    for _ in 0..40 {
        for x in [guess - step, guess + step] {
            if (target(x)? > 0.0) != (f0 > 0.0) {
                return Ok(if x < guess { (x, guess) } else { (guess, x) });
            }
        }
        step *= 2.0;
    }
    Err(ForgeError::Residual(format!(
        "no sign change of the shooting function near {guess}"
    )))
}
