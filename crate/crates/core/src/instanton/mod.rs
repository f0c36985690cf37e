//! Double-series expansions of `-ln eta` and `-ln theta_4` in `x1 = q^{1/2} e^{-2i chi}`,
//! `x2 = q^{1/2} e^{2i chi}`, their divisor structure, and the gauge-side correspondence checks.

pub mod gauge;
pub mod printed;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::elliptic::{eisenstein_e2, log_eta, theta};
use crate::error::{ForgeError, Result};
use crate::gauss::{rat, Rational};

type C = Complex64;

/// Dense default dimension.
pub const DEFAULT_DIM: usize = 64;

/// Coefficients of `-(i/2)^k d^k/dchi^k ln theta_4` as a series in `x1, x2`; entry `[i][j]` multiplies `x1^i x2^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Theta4Matrix {
    pub k: u32,
    pub dim: usize,
    pub entries: Vec<Vec<Rational>>,
}

/// `-ln theta_4` from the product form, then `(i/2) d/dchi` acting on `x1^a x2^b` as multiplication by `a - b`.
pub fn log_theta4_matrix(k: u32, dim: usize) -> Theta4Matrix {
    let mut e = vec![vec![Rational::zero(); dim]; dim];
    if dim > 0 {
        for n in 1..dim {
            for m in 1..dim {
                let (hi, lo) = (m * n, m * (n - 1));
                if lo >= dim {
                    break;
                }
                let w = rat(1, m as i64);
                if hi < dim {
                    e[hi][lo] += &w;
                    e[lo][hi] += &w;
                    e[hi][hi] += &w;
                }
            }
        }
    }
    if k > 0 {
        for (i, row) in e.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if !v.is_zero() {
                    *v *= Rational::from_integer((i as i64 - j as i64).into()).pow(k as i32);
                }
            }
        }
    }
    Theta4Matrix { k, dim, entries: e }
}

impl Theta4Matrix {
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    /// `sum entries[i][j] x1^i x2^j`.
    pub fn eval(&self, x1: C, x2: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    acc += x1.powu(i as u32)
                        * x2.powu(j as u32)
                        * v.to_f64().expect("finite rational");
                }
            }
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// `entries[j][i] = (-1)^k entries[i][j]`.
    pub fn has_parity_symmetry(&self) -> bool {
        let odd = self.k % 2 == 1;
        (0..self.dim).all(|i| {
            (0..i).all(|j| {
                let (a, b) = (&self.entries[i][j], &self.entries[j][i]);
                if odd {
                    *a == -b.clone()
                } else {
                    a == b
                }
            })
        })
    }

    /// Comma-separated rational strings, one row per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Aligned text rendering of the leading `n x n` block.
    pub fn digest(&self, n: usize) -> String {
        let n = n.min(self.dim);
        let cells: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| self.entries[i][j].to_string()).collect())
            .collect();
        let w = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
        let mut s = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
            s.push_str(line.join(" ").trim_end());
            s.push('\n');
        }
        s
    }
}

/// Parses a rational token such as `0`, `7`, `13/6`.
pub fn parse_rational(tok: &str) -> Result<Rational> {
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| ForgeError::Parse(format!("bad rational `{tok}`")))
    };
    match tok.split_once('/') {
        Some((p, q)) => {
            let q = parse(q)?;
            if q == 0 {
                return Err(ForgeError::Parse(format!("zero denominator in `{tok}`")));
            }
            Ok(rat(parse(p)?, q))
        }
        None => Ok(Rational::from_integer(parse(tok)?.into())),
    }
}

/// The printed 22x22 table as rationals.
pub fn printed_theta4_matrix() -> Result<Vec<Vec<Rational>>> {
    printed::PRINTED_THETA4
        .iter()
        .map(|row| row.split_whitespace().map(parse_rational).collect())
        .collect()
}

/// Entry-by-entry comparison with the printed table; returns the mismatching positions.
pub fn compare_with_printed(m: &Theta4Matrix) -> Result<Vec<(usize, usize)>> {
    let p = printed_theta4_matrix()?;
    if m.dim < p.len() || m.k != 0 {
        return Err(ForgeError::Config(
            "need the k = 0 matrix with dim >= 22".into(),
        ));
    }
    let mut bad = Vec::new();
    for (i, row) in p.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if m.entries[i][j] != *v {
                bad.push((i, j));
            }
        }
    }
    Ok(bad)
}

/// Coefficients of `(x1 x2)^n`, n = 1..=count, in `-ln(eta / (x1 x2)^{1/24})`, from `prod (1 - q^n)`.
pub fn log_eta_series(count: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); count + 1];
    for n in 1..=count {
        for m in 1..=count / n {
            c[m * n] += rat(1, m as i64);
        }
    }
    c.remove(0);
    c
}

/// Positive divisors of `n` in increasing order, by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sigma_k(n)` for integer `k`, exact.
pub fn sigma(k: i32, n: u64) -> Rational {
    divisors(n)
        .into_iter()
        .map(|d| Rational::from_integer((d as i64).into()).pow(k))
        .sum()
}

/// `d(n) = prod (nu_i + 1)` from the prime factorization.
pub fn divisor_count_from_factorization(mut n: u64) -> u64 {
    let mut count = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        count *= e + 1;
        p += 1;
    }
    if n > 1 {
        count *= 2;
    }
    count
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DivisorReport {
    pub n_max: usize,
    pub k_max: u32,
    pub diagonal_is_sigma: bool,
    pub rows_are_reciprocal_divisors: bool,
    pub row_sums_match_diagonal: bool,
    pub counts_match_factorization: bool,
    /// Per `k`: every entry at `(mn, m(n-1))` has magnitude `m^{k-1}` and the diagonal vanishes.
    pub magnitude_law: Vec<(u32, bool)>,
    /// Row `d` of the matrix holds the divisors of every composite divisor `d`.
    pub divisor_closure: bool,
    pub failures: Vec<String>,
}

impl DivisorReport {
    pub fn passed(&self) -> bool {
        self.diagonal_is_sigma
            && self.rows_are_reciprocal_divisors
            && self.row_sums_match_diagonal
            && self.counts_match_factorization
            && self.magnitude_law.iter().all(|m| m.1)
            && self.divisor_closure
    }
}

/// Row `n`, columns `0..n`: `(column, value)` for every nonzero entry.
fn lower_row(m: &Theta4Matrix, n: usize) -> Vec<(usize, Rational)> {
    (0..n)
        .filter(|&j| !m.entries[n][j].is_zero())
        .map(|j| (j, m.entries[n][j].clone()))
        .collect()
}

/// Structure checks of the `k = 0` matrix for `n <= n_max`, and of the `k`-matrices for `k <= k_max`
/// on a `dim_k x dim_k` block.
pub fn divisor_checks(n_max: usize, k_max: u32, dim_k: usize) -> Result<DivisorReport> {
    if n_max < 2 {
        return Err(ForgeError::Config("divisor checks need N >= 2".into()));
    }
    let m0 = log_theta4_matrix(0, n_max + 1);
    let mut r = DivisorReport {
        n_max,
        k_max,
        ..Default::default()
    };
    let fail = |flag: &mut bool, msg: String, failures: &mut Vec<String>| {
        *flag = false;
        if failures.len() < 32 {
            failures.push(msg);
        }
    };
    let mut failures = Vec::new();
    let (mut diag, mut rows, mut sums, mut counts, mut closure) = (true, true, true, true, true);
    for n in 1..=n_max {
        let nn = n as u64;
        let s = sigma(-1, nn);
        if m0.entries[n][n] != s {
            fail(&mut diag, format!("diagonal {n}"), &mut failures);
        }
        let row = lower_row(&m0, n);
        let divs = divisors(nn);
        let expected: Vec<(usize, Rational)> = divs
            .iter()
            .rev()
            .map(|&d| (n - d as usize, rat(1, d as i64)))
            .collect();
        if row != expected {
            fail(
                &mut rows,
                format!("row {n} is not the reciprocal divisors"),
                &mut failures,
            );
        }
        let total: Rational = row.iter().map(|e| e.1.clone()).sum();
        if total != m0.entries[n][n] {
            fail(&mut sums, format!("row {n} sum"), &mut failures);
        }
        if row.len() as u64 != divisor_count_from_factorization(nn) {
            fail(
                &mut counts,
                format!("row {n} count {}", row.len()),
                &mut failures,
            );
        }
        if n <= 100 {
            for &d in divs
                .iter()
                .filter(|&&d| d > 1 && d < nn && divisors(d).len() > 2)
            {
                let sub: Vec<u64> = lower_row(&m0, d as usize)
                    .iter()
                    .map(|(j, _)| d - *j as u64)
                    .collect();
                let mut sub = sub;
                sub.sort_unstable();
                if sub != divisors(d) {
                    fail(
                        &mut closure,
                        format!("row {d} misses divisors (from row {n})"),
                        &mut failures,
                    );
                }
            }
        }
    }
    for k in 1..=k_max {
        let mk = log_theta4_matrix(k, dim_k);
        let mut ok = (0..dim_k).all(|i| mk.entries[i][i].is_zero());
        for n in 1..dim_k {
            for m in 1..dim_k {
                let (hi, lo) = (m * n, m * (n - 1));
                if hi >= dim_k {
                    break;
                }
                let want = Rational::from_integer((m as i64).into()).pow(k as i32 - 1);
                ok &= mk.entries[hi][lo].abs() == want && mk.entries[lo][hi].abs() == want;
            }
        }
        let nonzero = mk.entries.iter().flatten().filter(|v| !v.is_zero()).count();
        let expected: usize = (1..dim_k)
            .map(|n| (1..dim_k).filter(|m| m * n < dim_k).count() * 2)
            .sum();
        ok &= nonzero == expected;
        if !ok {
            failures.push(format!("magnitude law fails at k = {k}"));
        }
        r.magnitude_law.push((k, ok));
    }
    r.diagonal_is_sigma = diag;
    r.rows_are_reciprocal_divisors = rows;
    r.row_sums_match_diagonal = sums;
    r.counts_match_factorization = counts;
    r.divisor_closure = closure;
    r.failures = failures;
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct E2Report {
    pub n_max: usize,
    /// `n sigma_{-1}(n) = sigma_1(n)` with the eta coefficients as `sigma_{-1}`.
    pub exact_identity: bool,
    /// `(q, |E2 - 24 q d/dq ln eta|)`.
    pub numeric: Vec<(f64, f64)>,
    pub tolerance: f64,
}

impl E2Report {
    pub fn passed(&self) -> bool {
        self.exact_identity && self.numeric.iter().all(|p| p.1 < self.tolerance)
    }
}

/// `24 q d/dq ln eta` by a fourth-order central difference in `ln q`.
fn q_dq_log_eta(q: f64) -> Result<f64> {
    let h = 1e-3;
    let f = |t: f64| -> Result<f64> { Ok(log_eta(C::new(q * t.exp(), 0.0))?.re) };
    let d = (-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h);
    Ok(24.0 * d)
}

pub fn e2_identity_check(n_max: usize, qs: &[f64]) -> Result<E2Report> {
    if n_max < 2 {
        return Err(ForgeError::Config("E2 identity check needs N >= 2".into()));
    }
    let eta = log_eta_series(n_max);
    let exact_identity = eta.iter().enumerate().all(|(i, c)| {
        c * Rational::from_integer(((i + 1) as i64).into()) == sigma(1, (i + 1) as u64)
    });
    let numeric = qs
        .iter()
        .map(|&q| {
            Ok((
                q,
                (eisenstein_e2(C::new(q, 0.0))?.re - q_dq_log_eta(q)?).abs(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(E2Report {
        n_max,
        exact_identity,
        numeric,
        tolerance: 1e-10,
    })
}

/// `|matrix(x1, x2) + ln theta_4((i/4) ln(x1/x2), x1 x2)|`.
pub fn product_vs_sum_defect(m: &Theta4Matrix, x1: f64, x2: f64) -> Result<f64> {
    if m.k != 0 {
        return Err(ForgeError::Config(
            "numeric comparison is for the k = 0 matrix".into(),
        ));
    }
    let chi = C::new(0.0, 0.25 * (x1 / x2).ln());
    let th = theta(4, chi, C::new(x1 * x2, 0.0))?;
    Ok((m.eval(C::new(x1, 0.0), C::new(x2, 0.0)) + th.ln()).norm())
}

/// `true` when all entries of the `k = 0` matrix are non-negative.
pub fn all_nonnegative(m: &Theta4Matrix) -> bool {
    m.entries.iter().flatten().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn printed_diagonal_examples() {
        let m = log_theta4_matrix(0, 22);
        assert_eq!(m.get(2, 2), &rat(3, 2));
        assert_eq!(m.get(4, 4), &rat(7, 4));
        assert_eq!(m.get(18, 18), &rat(13, 6));
        for n in 1..22 {
            assert_eq!(m.get(0, n), &rat(1, n as i64));
        }
        assert!(log_theta4_matrix(0, 1).get(0, 0).is_zero());
    }

    #[test]
    fn matches_printed_table() {
        let m = log_theta4_matrix(0, 22);
        assert_eq!(compare_with_printed(&m).unwrap(), vec![]);
    }

    #[test]
    fn a_corrupted_table_is_caught() {
        let mut m = log_theta4_matrix(0, 22);
        m.entries[12][9] = rat(1, 4);
        assert_eq!(compare_with_printed(&m).unwrap(), vec![(12, 9)]);
    }

    #[test]
    fn eta_coefficients() {
        let e = log_eta_series(6);
        let want = [
            rat(1, 1),
            rat(3, 2),
            rat(4, 3),
            rat(7, 4),
            rat(6, 5),
            rat(2, 1),
        ];
        assert_eq!(e, want);
        for (i, c) in log_eta_series(200).iter().enumerate() {
            assert_eq!(*c, sigma(-1, i as u64 + 1));
        }
    }

    #[test]
    fn row_eighteen() {
        let m = log_theta4_matrix(0, 19);
        let row = lower_row(&m, 18);
        let total: Rational = row.iter().map(|e| e.1.clone()).sum();
        assert_eq!(total, rat(13, 6));
        assert_eq!(row.len(), 6);
        assert_eq!(divisor_count_from_factorization(18), 6);
    }

    #[test]
    fn structure_checks_pass() {
        let r = divisor_checks(200, 4, 64).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn first_derivative_matrix_is_unit_magnitude() {
        let m = log_theta4_matrix(1, 30);
        for v in m.entries.iter().flatten().filter(|v| !v.is_zero()) {
            assert!(v.abs().is_one());
        }
        assert!(m.has_parity_symmetry());
        assert!(log_theta4_matrix(2, 30).has_parity_symmetry());
        assert!(log_theta4_matrix(0, 30).is_symmetric());
        assert!(all_nonnegative(&log_theta4_matrix(0, 30)));
    }

    #[test]
    fn e2_identity() {
        let r = e2_identity_check(200, &[0.02, 0.1]).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(sigma(1, 6), rat(12, 1));
    }

    #[test]
    fn product_form_matches_numeric_theta() {
        let m = log_theta4_matrix(0, DEFAULT_DIM);
        assert!(product_vs_sum_defect(&m, 0.03, 0.04).unwrap() < 1e-10);
    }

    #[test]
    fn csv_round_trip() {
        let m = log_theta4_matrix(0, 5);
        let csv = m.to_csv();
        let back: Vec<Vec<Rational>> = csv
            .lines()
            .map(|l| l.split(',').map(|t| parse_rational(t).unwrap()).collect())
            .collect();
        assert_eq!(back, m.entries);
    }
}
