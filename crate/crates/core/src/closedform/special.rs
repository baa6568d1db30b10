//! Euler (secant) numbers and the Dirichlet beta function.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Largest `k` for which `E_k` fits in a `u128`.
pub fn max_euler_index() -> usize {
    euler_table().len() - 1
}

fn euler_table() -> &'static [u128] {
    static TABLE: OnceLock<Vec<u128>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // E_k = sum_{j<k} (-1)^(k-j+1) C(2k, 2j) E_j, from sec(x)·cos(x) = 1.
        let mut table: Vec<i128> = vec![1];
        'grow: loop {
            let k = table.len();
            let mut acc: i128 = 0;
            let mut binom: i128 = 1; // C(2k, 0)
            for (j, &e) in table.iter().enumerate() {
                if j > 0 {
                    // C(2k, 2j) from C(2k, 2j-2)
                    let n = 2 * k as i128;
                    let r = 2 * j as i128;
                    let Some(b) = binom
                        .checked_mul(n - r + 2)
                        .and_then(|b| b.checked_mul(n - r + 1))
                    else {
                        break 'grow;
                    };
                    binom = b / (r * (r - 1));
                }
                let Some(term) = binom.checked_mul(e) else {
                    break 'grow;
                };
                let sign = if (k - j + 1).is_multiple_of(2) { 1 } else { -1 };
                match acc.checked_add(sign * term) {
                    Some(a) => acc = a,
                    None => break 'grow,
                }
            }
            table.push(acc);
        }
        table.into_iter().map(|e| e as u128).collect()
    })
}

/// `E_k`, the coefficient of `x^(2k)/(2k)!` in `sec x`.
pub fn euler_number(k: usize) -> Result<u128> {
    euler_table().get(k).copied().ok_or_else(|| {
        Error::Range(format!(
            "Euler number index {k} exceeds {}",
            max_euler_index()
        ))
    })
}

/// Dirichlet beta `β(s) = Σ_{n≥0} (-1)^n / (2n+1)^s` for `s > 0`.
///
/// Uses the Cohen–Rodriguez Villegas–Zagier acceleration for alternating
/// series with totally monotone terms; 48 terms give about 36 digits.
pub fn dirichlet_beta(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "Dirichlet beta needs s > 0, got {s}"
        )));
    }
    if s >= 60.0 {
        // 3^-60 is below double precision relative to 1.
        return Ok(1.0 - 3f64.powf(-s) + 5f64.powf(-s));
    }
    const N: usize = 48;
    let n = N as f64;
    let mut d = (3.0 + 8f64.sqrt()).powf(n);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..N {
        let kf = k as f64;
        c = b - c;
        sum += c * (2.0 * kf + 1.0).powf(-s);
        b *= (kf + n) * (kf - n) / ((kf + 0.5) * (kf + 1.0));
    }
    Ok(sum / d)
}

/// Catalan's constant `K = β(2)`.
pub const CATALAN: f64 = 0.915_965_594_177_219;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_euler_numbers() {
        let want: [u128; 8] = [1, 1, 5, 61, 1385, 50521, 2702765, 199360981];
        for (k, &e) in want.iter().enumerate() {
            assert_eq!(euler_number(k).unwrap(), e, "E_{k}");
        }
    }

    #[test]
    fn euler_range_is_bounded() {
        let max = max_euler_index();
        assert!(max >= 18, "{max}");
        assert!(euler_number(max).is_ok());
        assert!(matches!(euler_number(max + 1), Err(Error::Range(_))));
        // E_10 = 370371188237525
        assert_eq!(euler_number(10).unwrap(), 370_371_188_237_525);
    }

    #[test]
    fn euler_numbers_are_sec_taylor_coefficients() {
        // Independent check: multiply the series by cos and recover 1.
        let x: f64 = 0.3;
        let mut sec = 0.0;
        let mut fact = 1.0;
        for k in 0..12 {
            if k > 0 {
                fact *= (2 * k - 1) as f64 * (2 * k) as f64;
            }
            sec += euler_number(k).unwrap() as f64 * x.powi(2 * k as i32) / fact;
        }
        assert!((sec * x.cos() - 1.0).abs() < 1e-14);
    }

    fn leibniz_partial(s: f64, terms: usize) -> f64 {
        // Averaging consecutive partial sums of an alternating series.
        let mut prev = 0.0;
        let mut sum = 0.0;
        for n in 0..terms {
            prev = sum;
            let t = (2.0 * n as f64 + 1.0).powf(-s);
            sum += if n % 2 == 0 { t } else { -t };
        }
        0.5 * (sum + prev)
    }

    #[test]
    fn beta_special_values() {
        assert!((dirichlet_beta(1.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((dirichlet_beta(2.0).unwrap() - CATALAN).abs() < 1e-15);
        assert!((dirichlet_beta(3.0).unwrap() - PI.powi(3) / 32.0).abs() < 1e-15);
        // β(5) = 5π⁵/1536
        assert!((dirichlet_beta(5.0).unwrap() - 5.0 * PI.powi(5) / 1536.0).abs() < 1e-15);
    }

    #[test]
    fn beta_matches_brute_force_series() {
        for &s in &[0.3, 0.5, 1.0, 1.7, 2.0, 4.5] {
            let brute = leibniz_partial(s, 2_000_000);
            let fast = dirichlet_beta(s).unwrap();
            assert!((brute - fast).abs() < 1e-7, "s={s}: {brute} vs {fast}");
        }
        assert!((dirichlet_beta(2.0).unwrap() - 0.9159655942).abs() < 1e-10);
    }

    #[test]
    fn beta_domain() {
        assert!(dirichlet_beta(0.0).is_err());
        assert!(dirichlet_beta(-1.0).is_err());
        assert!((dirichlet_beta(80.0).unwrap() - 1.0).abs() < 1e-30);
    }
}
