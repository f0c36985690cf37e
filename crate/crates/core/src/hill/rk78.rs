//! Fehlberg 7(8) embedded Runge-Kutta pair on straight segments of the complex plane.
//!
//! The eighth-order solution is propagated; the seventh-order companion only drives the step size.

use num_complex::Complex64;

use crate::error::{ForgeError, Result};

type C = Complex64;

const STAGES: usize = 13;

const NODES: [f64; STAGES] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    0.5,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

#[rustfmt::skip]
const A: [[f64; 12]; STAGES] = [
    [0.0; 12],
    [2.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 36.0, 1.0 / 12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 1.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-25.0 / 108.0, 0.0, 0.0, 125.0 / 108.0, -65.0 / 27.0, 125.0 / 54.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [31.0 / 300.0, 0.0, 0.0, 0.0, 61.0 / 225.0, -2.0 / 9.0, 13.0 / 900.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0, 0.0, 0.0, 0.0, 0.0],
    [-91.0 / 108.0, 0.0, 0.0, 23.0 / 108.0, -976.0 / 135.0, 311.0 / 54.0, -19.0 / 60.0, 17.0 / 6.0, -1.0 / 12.0, 0.0, 0.0, 0.0],
    [2383.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -301.0 / 82.0, 2133.0 / 4100.0, 45.0 / 82.0, 45.0 / 164.0, 18.0 / 41.0, 0.0, 0.0],
    [3.0 / 205.0, 0.0, 0.0, 0.0, 0.0, -6.0 / 41.0, -3.0 / 205.0, -3.0 / 41.0, 3.0 / 41.0, 6.0 / 41.0, 0.0, 0.0],
    [-1777.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -289.0 / 82.0, 2193.0 / 4100.0, 51.0 / 82.0, 33.0 / 164.0, 12.0 / 41.0, 0.0, 1.0],
];

#[rustfmt::skip]
const B8: [f64; STAGES] = [
    0.0, 0.0, 0.0, 0.0, 0.0, 34.0 / 105.0, 9.0 / 35.0, 9.0 / 35.0, 9.0 / 280.0, 9.0 / 280.0, 0.0, 41.0 / 840.0, 41.0 / 840.0,
];

/// `B8 - B7` is `41/840 (-1, 0, .., 0, -1, 1, 1)`.
const ERR_WEIGHT: f64 = 41.0 / 840.0;

/// Largest accepted growth of the state norm over one step.
const MAX_GROWTH: f64 = 1e4;

/// Adaptive driver settings. The error test is mixed: `|err_i| <= atol + rtol * |y_i|`.
#[derive(Clone, Copy, Debug)]
pub struct Rk78 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

impl Rk78 {
    pub fn new(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_steps: 200_000,
        }
    }

    /// Integrates `y' = f(x, y)` from `x0` to `x1` along the straight segment.
    pub fn integrate<const N: usize, F>(
        &self,
        f: &mut F,
        x0: C,
        x1: C,
        y0: [C; N],
        stats: &mut Stats,
    ) -> Result<[C; N]>
    where
        F: FnMut(C, &[C; N]) -> Result<[C; N]>,
    {
        let len = (x1 - x0).norm();
        if len == 0.0 {
            return Ok(y0);
        }
        let dir = (x1 - x0) / len;
        let mut t = 0.0;
        let mut y = y0;
        let mut dt = len.min(0.1);
        let min_dt = 1e-13 * len.max(1.0);
        let mut steps = 0usize;
        while t < len {
            if steps >= self.max_steps || dt < min_dt {
                return Err(collapse(x0 + dir * t));
            }
            steps += 1;
            let last = t + dt >= len;
            let step = if last { len - t } else { dt };
            let (y_new, err) = self.step(f, x0 + dir * t, dir * step, &y)?;
            let ratio = err.max(1e-300);
            if ratio <= 1.0 {
                t = if last { len } else { t + step };
                y = y_new;
                stats.accepted += 1;
            } else {
                stats.rejected += 1;
            }
            if !ratio.is_finite() {
                dt *= 0.2;
                continue;
            }
            dt = step * (0.9 * ratio.powf(-1.0 / 8.0)).clamp(0.2, 4.0);
        }
        Ok(y)
    }

    /// Follows the polyline `points[0] -> points[1] -> ...` and returns the state at every vertex.
    pub fn sample<const N: usize, F>(
        &self,
        f: &mut F,
        points: &[C],
        y0: [C; N],
        stats: &mut Stats,
    ) -> Result<Vec<[C; N]>>
    where
        F: FnMut(C, &[C; N]) -> Result<[C; N]>,
    {
        let mut out = Vec::with_capacity(points.len());
        let mut y = y0;
        for (i, &p) in points.iter().enumerate() {
            if i > 0 {
                y = self.integrate(f, points[i - 1], p, y, stats)?;
            }
            out.push(y);
        }
        Ok(out)
    }

    /// One step of complex size `h`; returns the new state and the scaled error norm.
    fn step<const N: usize, F>(&self, f: &mut F, x: C, h: C, y: &[C; N]) -> Result<([C; N], f64)>
    where
        F: FnMut(C, &[C; N]) -> Result<[C; N]>,
    {
        let mut k = [[C::new(0.0, 0.0); N]; STAGES];
        for s in 0..STAGES {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = match f(x + h * NODES[s], &ys) {
                Ok(v) => v,
                Err(ForgeError::Pole(_)) => return Ok((*y, f64::INFINITY)),
                Err(e) => return Err(e),
            };
        }
        let mut out = *y;
        let mut norm = 0.0f64;
        for i in 0..N {
            let mut acc = C::new(0.0, 0.0);
            for s in 0..STAGES {
                if B8[s] != 0.0 {
                    acc += B8[s] * k[s][i];
                }
            }
            out[i] += h * acc;
            let err = (h * ERR_WEIGHT * (k[0][i] + k[10][i] - k[11][i] - k[12][i])).norm();
            let scale = self.atol + self.rtol * y[i].norm().max(out[i].norm());
            norm = norm.max(err / scale);
        }
        // a step across a pole shows up as a jump; refusing it forces the step size to collapse
        let size = y.iter().map(|v| v.norm()).fold(0.0, f64::max) + self.atol;
        if out
            .iter()
            .any(|v| !v.is_finite() || v.norm() > MAX_GROWTH * size)
        {
            norm = f64::INFINITY;
        }
        Ok((out, norm))
    }
}

fn collapse(x: C) -> ForgeError {
    ForgeError::StepCollapse(format!("{:.6}{:+.6}i", x.re, x.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tableau_rows_sum_to_nodes() {
        for s in 0..STAGES {
            let row: f64 = A[s].iter().sum();
            assert!((row - NODES[s]).abs() < 1e-14, "stage {s}");
        }
        assert!((B8.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_is_exact_for_degree_seven() {
        // y' = x^7, one step from 0 to 1
        let r = Rk78::new(1e-3);
        let mut f = |x: C, _: &[C; 1]| Ok([x.powi(7)]);
        let (y, _) = r
            .step(
                &mut f,
                C::new(0.0, 0.0),
                C::new(1.0, 0.0),
                &[C::new(0.0, 0.0)],
            )
            .unwrap();
        assert!((y[0].re - 0.125).abs() < 1e-15);
    }

    #[test]
    fn exponential_along_complex_segment() {
        let r = Rk78::new(1e-13);
        let mut st = Stats::default();
        let mut f = |_: C, y: &[C; 1]| Ok([y[0]]);
        let x1 = C::new(1.0, 2.0);
        let y = r
            .integrate(&mut f, C::new(0.0, 0.0), x1, [C::new(1.0, 0.0)], &mut st)
            .unwrap();
        assert!(
            (y[0] - x1.exp()).norm() < 1e-12,
            "{}",
            (y[0] - x1.exp()).norm()
        );
        assert!(st.accepted > 0);
    }
}
