//! Theta, eta, Weierstrass and Jacobi numerics in double precision.
//!
//! Nome conventions: the lattice nome is `q = exp(2 pi i tau)` with `tau = omega2/omega1`.
//! Internally every series is summed in `tau` directly, so `q^{1/2}` and `q^{1/8}` carry
//! no branch ambiguity. `theta(j, chi, q)` takes `q` and uses the principal logarithm.

use num_complex::Complex64;

use crate::error::{ForgeError, Result};

type C = Complex64;

const PI: f64 = std::f64::consts::PI;
const SERIES_TOL: f64 = 1e-18;
const MAX_TERMS: usize = 2000;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `tau` from the lattice nome `q = exp(2 pi i tau)`.
pub fn tau_from_q(q: C) -> Result<C> {
    check_q(q)?;
    Ok(q.ln() / c(0.0, 2.0 * PI))
}

pub fn q_from_tau(tau: C) -> C {
    (c(0.0, 2.0 * PI) * tau).exp()
}

fn check_q(q: C) -> Result<()> {
    if !(q.norm() < 1.0) || q.norm() == 0.0 {
        return Err(ForgeError::NomeOutOfRange(q.norm()));
    }
    Ok(())
}

fn check_tau(tau: C) -> Result<()> {
    if !(tau.im > 0.0) {
        return Err(ForgeError::DegenerateLattice(format!(
            "Im tau = {} is not positive",
            tau.im
        )));
    }
    Ok(())
}

/// r-th derivative of cos(a) and sin(a).
fn dcos(r: usize, a: C) -> C {
    match r % 4 {
        0 => a.cos(),
        1 => -a.sin(),
        2 => -a.cos(),
        _ => a.sin(),
    }
}

fn dsin(r: usize, a: C) -> C {
    dcos(r + 3, a)
}

/// `d^r/dz^r theta_j(z | tau)` for r = 0..=m, standard nome `exp(i pi tau)`.
pub fn theta_derivs(j: u8, z: C, tau: C, m: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); m + 1];
    let iz = z.im.abs();
    let ipt = c(0.0, PI) * tau;
    if j == 3 || j == 4 {
        out[0] = c(1.0, 0.0);
    }
    let mut scale: f64 = 1.0;
    for n in 0..MAX_TERMS {
        let (freq, expo, sign, skip) = match j {
            1 | 2 => {
                let h = n as f64 + 0.5;
                let s = if j == 1 && n % 2 == 1 { -1.0 } else { 1.0 };
                (2.0 * h, h * h, s, false)
            }
            _ => {
                let nn = n as f64;
                let s = if j == 4 && n % 2 == 1 { -1.0 } else { 1.0 };
                (2.0 * nn, nn * nn, s, n == 0)
            }
        };
        if skip {
            continue;
        }
        let w = (ipt * expo).exp() * (2.0 * sign);
        let bound = w.norm() * freq.powi(m as i32).max(1.0) * (freq * iz).exp();
        let arg = z * freq;
        let mut fr = 1.0;
        for (r, slot) in out.iter_mut().enumerate() {
            let basis = if j == 1 { dsin(r, arg) } else { dcos(r, arg) };
            *slot += w * basis * fr;
            fr *= freq;
        }
        scale = scale.max(bound);
        if n > 1 && bound < SERIES_TOL * scale {
            break;
        }
    }
    out
}

pub fn theta_tau(j: u8, z: C, tau: C) -> C {
    theta_derivs(j, z, tau, 0)[0]
}

/// Theta function with lattice nome `q`; `theta(4, chi, q) = 1 + 2 sum (-1)^n q^{n^2/2} cos(2 n chi)`.
pub fn theta(j: u8, z: C, q: C) -> Result<C> {
    if !(1..=4).contains(&j) {
        return Err(ForgeError::Config(format!("theta index {j} not in 1..4")));
    }
    Ok(theta_tau(j, z, tau_from_q(q)?))
}

/// Product form of theta_4 in the lattice nome.
pub fn theta4_product(z: C, q: C) -> Result<C> {
    let tau = tau_from_q(q)?;
    let half = (c(0.0, PI) * tau).exp();
    let cos2 = (z * 2.0).cos();
    let mut acc = c(1.0, 0.0);
    for n in 1..MAX_TERMS {
        let qn = q.powu(n as u32);
        let qh = half * q.powu(n as u32 - 1);
        let f = (c(1.0, 0.0) - qn) * (c(1.0, 0.0) - qh * cos2 * 2.0 + qh * qh);
        acc *= f;
        if qh.norm() < SERIES_TOL {
            break;
        }
    }
    Ok(acc)
}

/// `d^r/dz^r ln f` for r = 0..=m from the derivatives of `f`.
pub fn log_derivs(f: &[C]) -> Vec<C> {
    let m = f.len() - 1;
    let mut g = vec![C::new(0.0, 0.0); m + 1];
    g[0] = f[0].ln();
    for n in 1..=m {
        let mut acc = f[n];
        let mut binom = 1.0;
        for k in 1..n {
            binom = binom * (n - k) as f64 / k as f64;
            acc -= f[k] * g[n - k] * binom;
        }
        g[n] = acc / f[0];
    }
    g
}

/// `E2(q) = 1 - 24 sum sigma_1(n) q^n`, lattice nome.
pub fn eisenstein_e2(q: C) -> Result<C> {
    if !(q.norm() < 1.0) {
        return Err(ForgeError::NomeOutOfRange(q.norm()));
    }
    let mut acc = c(1.0, 0.0);
    let mut qn = c(1.0, 0.0);
    for n in 1..MAX_TERMS {
        qn *= q;
        let t = qn * n as f64 / (c(1.0, 0.0) - qn);
        acc -= t * 24.0;
        if t.norm() < SERIES_TOL {
            break;
        }
    }
    Ok(acc)
}

/// `ln eta(q) = ln(q)/24 + sum ln(1 - q^n)`, principal logarithm of `q`.
pub fn log_eta(q: C) -> Result<C> {
    check_q(q)?;
    let mut acc = q.ln() / 24.0;
    let mut qn = c(1.0, 0.0);
    for _ in 1..MAX_TERMS {
        qn *= q;
        acc += (c(1.0, 0.0) - qn).ln();
        if qn.norm() < SERIES_TOL {
            break;
        }
    }
    Ok(acc)
}

pub fn eta(q: C) -> Result<C> {
    Ok(log_eta(q)?.exp())
}

/// Nome parameter `tau` with `k^2 = theta_2^4 / theta_3^4`.
pub fn tau_from_modulus(k: C) -> Result<C> {
    let k2 = k * k;
    if (k2 - 1.0).norm() < 1e-14 {
        return Err(ForgeError::UnitModulus);
    }
    if k2.norm() < 1e-300 {
        return Err(ForgeError::NomeOutOfRange(0.0));
    }
    let kp = (c(1.0, 0.0) - k2).sqrt();
    let skp = kp.sqrt();
    let eps = (c(1.0, 0.0) - skp) / ((c(1.0, 0.0) + skp) * 2.0);
    let e4 = eps.powu(4);
    let nome = eps
        * (c(1.0, 0.0)
            + e4 * (c(2.0, 0.0) + e4 * (c(15.0, 0.0) + e4 * (c(150.0, 0.0) + e4 * 1707.0))));
    let mut tau = nome.ln() / c(0.0, PI);
    let f = |t: C| {
        let r = theta_tau(2, C::new(0.0, 0.0), t) / theta_tau(3, C::new(0.0, 0.0), t);
        r.powu(4) - k2
    };
    for _ in 0..60 {
        let h = c(0.0, 1e-7 * tau.im.max(1e-3));
        let fv = f(tau);
        let d = (f(tau + h) - f(tau - h)) / (h * 2.0);
        let step = fv / d;
        tau -= step;
        if step.norm() < 1e-15 * tau.norm().max(1.0) {
            break;
        }
    }
    check_tau(tau)?;
    Ok(tau)
}

/// Lattice `2 omega1, 2 omega2` with derived Weierstrass and Jacobi data.
#[derive(Clone, Debug)]
pub struct EllipticParams {
    pub omega1: C,
    pub omega2: C,
    pub omega3: C,
    pub tau: C,
    /// `exp(2 pi i tau)`.
    pub q: C,
    pub zeta1: C,
    pub e1: C,
    pub e2: C,
    pub e3: C,
    pub g2: C,
    pub g3: C,
    pub k: C,
    pub kp: C,
    pub big_k: C,
    pub big_kp: C,
    theta1_prime0: C,
}

impl EllipticParams {
    pub fn new(omega1: C, omega2: C) -> Result<Self> {
        if omega1.norm() == 0.0 {
            return Err(ForgeError::DegenerateLattice("omega1 = 0".into()));
        }
        let tau = omega2 / omega1;
        check_tau(tau)?;
        let q = q_from_tau(tau);
        if !(q.norm() < 1.0) || q.norm() == 0.0 {
            return Err(ForgeError::NomeOutOfRange(q.norm()));
        }
        let zero = C::new(0.0, 0.0);
        let th2 = theta_tau(2, zero, tau);
        let th3 = theta_tau(3, zero, tau);
        let th4 = theta_tau(4, zero, tau);
        let s = c(PI, 0.0) / (omega1 * 2.0);
        let s2 = s * s;
        let (t2, t3, t4) = (th2.powu(4), th3.powu(4), th4.powu(4));
        let e2 = -s2 * (t3 + t2) / 3.0;
        let e1 = s2 * (t3 + t4) / 3.0;
        let e3 = e2 + s2 * t2;
        let g2 = (e1 * e1 + e2 * e2 + e3 * e3) * 2.0;
        let g3 = e1 * e2 * e3 * 4.0;
        let zeta1 = s2 * eisenstein_e2(q)? / 3.0;
        let big_k = th3 * th3 * (PI / 2.0);
        let d1 = theta_derivs(1, zero, tau, 1);
        Ok(Self {
            omega1,
            omega2,
            omega3: omega1 + omega2,
            tau,
            q,
            zeta1,
            e1,
            e2,
            e3,
            g2,
            g3,
            k: th2 * th2 / (th3 * th3),
            kp: th4 * th4 / (th3 * th3),
            big_k,
            big_kp: -c(0.0, 1.0) * tau * big_k,
            theta1_prime0: d1[1],
        })
    }

    /// Lattice with `omega1 = K(k)` and `omega2 = i K'(k)`.
    pub fn from_modulus(k: C) -> Result<Self> {
        let tau = tau_from_modulus(k)?;
        let big_k = theta_tau(3, C::new(0.0, 0.0), tau).powu(2) * (PI / 2.0);
        Self::new(big_k, tau * big_k)
    }

    /// `pi / (2 omega1)`.
    pub fn scale(&self) -> C {
        c(PI, 0.0) / (self.omega1 * 2.0)
    }

    /// Derivatives in `x` of `ln theta_j(pi x / 2 omega1)` for r = 0..=m.
    pub fn log_theta_x(&self, j: u8, x: C, m: usize) -> Result<Vec<C>> {
        let s = self.scale();
        let f = theta_derivs(j, s * x, self.tau, m);
        if j == 1 && f[0].norm() < 1e-13 * self.theta1_prime0.norm() {
            return Err(ForgeError::Pole(format!("lattice point at x = {x}")));
        }
        let mut g = log_derivs(&f);
        let mut sp = c(1.0, 0.0);
        for v in g.iter_mut() {
            *v *= sp;
            sp *= s;
        }
        Ok(g)
    }

    /// `zeta~(x) = d/dx ln theta_1(pi x / 2 omega1)`.
    pub fn zeta_tilde(&self, x: C) -> Result<C> {
        Ok(self.log_theta_x(1, x, 1)?[1])
    }

    pub fn zeta(&self, x: C) -> Result<C> {
        Ok(self.zeta_tilde(x)? + self.zeta1 * x)
    }

    /// `d^k wp~(x)` for k = 0..=m, with `wp~ = wp + zeta1 = -zeta~'`.
    pub fn wp_tilde_derivs(&self, x: C, m: usize) -> Result<Vec<C>> {
        let g = self.log_theta_x(1, x, m + 2)?;
        Ok(g[2..].iter().map(|v| -v).collect())
    }

    pub fn wp_tilde(&self, x: C) -> Result<C> {
        Ok(self.wp_tilde_derivs(x, 0)?[0])
    }

    pub fn wp(&self, x: C) -> Result<C> {
        Ok(self.wp_tilde(x)? - self.zeta1)
    }

    pub fn wp_prime(&self, x: C) -> Result<C> {
        Ok(self.wp_tilde_derivs(x, 1)?[1])
    }

    /// `theta_j(chi)` in the lattice nome.
    pub fn theta(&self, j: u8, chi: C) -> C {
        theta_tau(j, chi, self.tau)
    }

    /// `(sn, cn, dn)(u | k^2)` for the modulus of this lattice.
    pub fn sn_cn_dn(&self, u: C) -> Result<(C, C, C)> {
        let zero = C::new(0.0, 0.0);
        let (t2, t3, t4) = (
            self.theta(2, zero),
            self.theta(3, zero),
            self.theta(4, zero),
        );
        let v = u / (t3 * t3);
        let (a1, a2, a3, a4) = (
            self.theta(1, v),
            self.theta(2, v),
            self.theta(3, v),
            self.theta(4, v),
        );
        if a4.norm() < 1e-13 {
            return Err(ForgeError::Pole(format!("Jacobi pole at u = {u}")));
        }
        Ok((t3 / t2 * a1 / a4, t4 / t2 * a2 / a4, t4 / t3 * a3 / a4))
    }

    pub fn sn(&self, u: C) -> Result<C> {
        Ok(self.sn_cn_dn(u)?.0)
    }

    pub fn cn(&self, u: C) -> Result<C> {
        Ok(self.sn_cn_dn(u)?.1)
    }

    pub fn dn(&self, u: C) -> Result<C> {
        Ok(self.sn_cn_dn(u)?.2)
    }

    /// Jacobi zeta `zn(u) = (pi / 2K) theta_4'(v) / theta_4(v)`, `v = pi u / 2K`.
    pub fn zn(&self, u: C) -> Result<C> {
        let s = c(PI, 0.0) / (self.big_k * 2.0);
        let f = theta_derivs(4, u * s, self.tau, 1);
        if f[0].norm() < 1e-13 {
            return Err(ForgeError::Pole(format!("theta_4 zero at u = {u}")));
        }
        Ok(s * f[1] / f[0])
    }
}
