use std::f64::consts::PI;

use statrs::function::gamma::{gamma, gamma_ui};

use super::quad;
use super::special::{dirichlet_beta, euler_number};
use crate::{Error, Result};

/// Whether a distribution function returns the density or the survival
/// function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Pdf,
    Ccdf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    /// Transaction interval `I`.
    Interval,
    /// Absolute price change `|ΔP|`.
    AbsDprice,
}

/// Exact continuum laws of the plain two-dealer model for spread `L` and
/// noise amplitude `c`.
///
/// Between transactions `D = p1 - p2` diffuses with coefficient `c²` and is
/// absorbed at `|D| = L`, while the centre `G` diffuses with coefficient
/// `c²/4`. The interval law is the exit time from the strip, the price-change
/// law the centre displacement at exit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormLaw {
    pub spread: f64,
    pub noise: f64,
    /// Cap on eigenfunction terms for series that have no fast dual form.
    pub series_terms: usize,
    /// Target bound on the dropped tail of any truncated series.
    pub tolerance: f64,
}

/// Interval-law series switch: eigen series for `λ₁ I >= SWITCH`, image
/// (erfc) series below. Both need at most a handful of terms there.
const SWITCH: f64 = 0.5;

impl ClosedFormLaw {
    pub fn new(spread: f64, noise: f64) -> Result<Self> {
        let law = ClosedFormLaw {
            spread,
            noise,
            series_terms: 100_000,
            tolerance: 1e-12,
        };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spread > 0.0 && self.spread.is_finite()) {
            return Err(Error::Config(format!(
                "L must be positive (got {})",
                self.spread
            )));
        }
        if !(self.noise > 0.0 && self.noise.is_finite()) {
            return Err(Error::Config(format!(
                "c must be positive (got {})",
                self.noise
            )));
        }
        if self.series_terms == 0 || !(self.tolerance > 0.0) {
            return Err(Error::Config(
                "series_terms and tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Slowest decay rate `λ₁ = (cπ/2L)²` of the interval law.
    pub fn lambda1(&self) -> f64 {
        let r = self.noise * PI / (2.0 * self.spread);
        r * r
    }

    /// Exponential tail rates `((cπ/2L)², π/L)` of the interval and
    /// `|ΔP|` densities.
    pub fn tail_rates(&self) -> (f64, f64) {
        (self.lambda1(), PI / self.spread)
    }

    /// Interval law `Q1`.
    pub fn q1(&self, interval: f64, which: Which) -> Result<f64> {
        if !(interval >= 0.0) {
            return Err(Error::Domain(format!(
                "interval must be >= 0, got {interval}"
            )));
        }
        if interval == 0.0 {
            return Ok(match which {
                Which::Pdf => 0.0,
                Which::Ccdf => 1.0,
            });
        }
        if interval.is_infinite() {
            return Ok(0.0);
        }
        let s = self.lambda1() * interval;
        Ok(if s >= SWITCH {
            self.q1_eigen(interval, which)
        } else {
            self.q1_image(interval, which)
        })
    }

    /// `(4/π) Σ (-1)^(n+1)/(2n-1) · [λ_n] e^(-λ_n I)` with
    /// `λ_n = λ₁ (2n-1)²`; the pdf carries the extra `λ_n`.
    pub(crate) fn q1_eigen(&self, interval: f64, which: Which) -> f64 {
        let l1 = self.lambda1();
        let mut sum = 0.0;
        for n in 1..=self.series_terms {
            let m = (2 * n - 1) as f64;
            let lam = l1 * m * m;
            let e = (-lam * interval).exp();
            let term = match which {
                Which::Pdf => lam * e / m,
                Which::Ccdf => e / m,
            };
            sum += if n % 2 == 1 { term } else { -term };
            if term <= self.tolerance * 1e-3 * sum.abs() || term == 0.0 {
                break;
            }
        }
        4.0 / PI * sum
    }

    /// Method-of-images form: `ccdf = 1 - 2 Σ_k (-1)^k erfc(z_k)`,
    /// `pdf = 2/(I√π) Σ_k (-1)^k z_k e^(-z_k²)`, `z_k = (2k+1) L / (2c√I)`.
    pub(crate) fn q1_image(&self, interval: f64, which: Which) -> f64 {
        let z0 = self.spread / (2.0 * self.noise * interval.sqrt());
        let mut sum = 0.0;
        for k in 0..self.series_terms {
            let z = (2 * k + 1) as f64 * z0;
            let term = match which {
                Which::Pdf => z * (-z * z).exp(),
                Which::Ccdf => libm::erfc(z),
            };
            sum += if k % 2 == 0 { term } else { -term };
            if term == 0.0 || term <= 1e-3 * self.tolerance * sum.abs() {
                break;
            }
        }
        match which {
            Which::Pdf => 2.0 / (interval * PI.sqrt()) * sum,
            Which::Ccdf => 1.0 - 2.0 * sum,
        }
    }

    /// Law `Q2` of `|ΔP|`.
    ///
    /// The alternating geometric series resums in closed form:
    /// `pdf = (2/L) sech(πx/L)` and `ccdf = (4/π) atan(e^(-πx/L))`, which is
    /// finite at `x = 0` where the raw series does not converge.
    pub fn q2(&self, x: f64, which: Which) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("|ΔP| must be >= 0, got {x}")));
        }
        let u = PI * x / self.spread;
        Ok(match which {
            Which::Pdf => {
                if u > 700.0 {
                    0.0
                } else {
                    2.0 / self.spread / u.cosh()
                }
            }
            Which::Ccdf => 4.0 / PI * (-u).exp().atan(),
        })
    }

    /// Raw moments `<I^k>` and `<|ΔP|^k>` for integer `k >= 1`.
    ///
    /// `<I^k> = (L/c)^(2k) k! E_k / (2k)!` and
    /// `<|ΔP|^k> = 4 L^k k! β(k+1) / π^(k+1)`.
    pub fn moment(&self, kind: MomentKind, k: u32) -> Result<f64> {
        if k == 0 {
            return Err(Error::Range("moment order must be >= 1".into()));
        }
        let kf = k as f64;
        match kind {
            MomentKind::Interval => {
                let e = euler_number(k as usize)? as f64;
                // k!/(2k)! = 1/((k+1)(k+2)...(2k))
                let ratio: f64 = (k + 1..=2 * k).map(|j| 1.0 / j as f64).product();
                let scale = (self.spread / self.noise).powi(2 * k as i32);
                Ok(scale * ratio * e)
            }
            MomentKind::AbsDprice => {
                if k > 150 {
                    return Err(Error::Range(format!("|ΔP| moment order {k} too large")));
                }
                let fact: f64 = (1..=k).map(|j| j as f64).product();
                let b = dirichlet_beta(kf + 1.0)?;
                Ok(4.0 * self.spread.powi(k as i32) * fact * b / PI.powf(kf + 1.0))
            }
        }
    }

    pub fn mean_interval(&self) -> f64 {
        0.5 * (self.spread / self.noise).powi(2)
    }

    pub fn variance(&self, kind: MomentKind) -> Result<f64> {
        let m1 = self.moment(kind, 1)?;
        Ok(self.moment(kind, 2)? - m1 * m1)
    }

    /// `<I^β>` for real `β > 0`.
    ///
    /// Integer orders use the Euler-number formula. Other orders integrate
    /// `I^β Q1(I)` numerically on `[0, T]` with `λ₁T = 4` and add the tail
    /// beyond `T` term by term through upper incomplete gamma functions.
    pub fn interval_moment_real(&self, beta: f64) -> Result<f64> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!(
                "moment order must be > 0, got {beta}"
            )));
        }
        if beta.fract() == 0.0 && beta <= super::special::max_euler_index() as f64 {
            return self.moment(MomentKind::Interval, beta as u32);
        }
        let l1 = self.lambda1();
        let cut = 4.0 / l1;
        let head = quad::integrate(
            |i| {
                if i <= 0.0 {
                    0.0
                } else {
                    i.powf(beta) * self.q1(i, Which::Pdf).unwrap_or(0.0)
                }
            },
            0.0,
            cut,
            0.0,
            1e-14,
        )?;
        // ∫_T^∞ I^β λ e^(-λI) dI = λ^(-β) Γ(β+1, λT)
        let mut tail = 0.0;
        for n in 1..=self.series_terms {
            let m = (2 * n - 1) as f64;
            let lam = l1 * m * m;
            let term = gamma_ui(beta + 1.0, lam * cut) * lam.powf(-beta) / m;
            tail += if n % 2 == 1 { term } else { -term };
            if term <= 1e-17 * tail.abs() {
                break;
            }
        }
        let total = head + 4.0 / PI * tail;
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Numerical(format!(
                "interval moment of order {beta} evaluated to {total}"
            )));
        }
        Ok(total)
    }

    /// `<I^β>` from term-wise integration of the eigen series:
    /// `(4/π) Γ(β+1) (2L/(cπ))^(2β) β_D(2β+1)`.
    pub fn interval_moment_series(&self, beta: f64) -> Result<f64> {
        if !(beta > 0.0) {
            return Err(Error::Domain(format!(
                "moment order must be > 0, got {beta}"
            )));
        }
        let scale = (2.0 * self.spread / (self.noise * PI)).powf(2.0 * beta);
        Ok(4.0 / PI * gamma(beta + 1.0) * scale * dirichlet_beta(2.0 * beta + 1.0)?)
    }

    /// Density of the reduced walker at `(x, y)` (`x = ΔG`, `y = D + L`) at
    /// time `t`, started from `(0, L)` with absorbing walls at `y = 0, 2L`.
    pub fn density_u(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        let l = self.spread;
        if !(0.0..=2.0 * l).contains(&y) {
            return Err(Error::Domain(format!("y must lie in [0, 2L], got {y}")));
        }
        if !(t > 0.0) {
            return Err(Error::Domain(format!("t must be > 0, got {t}")));
        }
        if y == 0.0 || y == 2.0 * l {
            return Ok(0.0);
        }
        let c2t = self.noise * self.noise * t;
        let gauss = (-x * x / c2t).exp() / (self.noise * l * (PI * t).sqrt());
        // Only odd n contribute: sin(nπ/2) = ±1.
        let l1 = self.lambda1();
        let mut sum = 0.0;
        let mut converged = false;
        for j in 0..self.series_terms {
            let n = (2 * j + 1) as f64;
            let decay = (-l1 * n * n * t).exp();
            let term = (n * PI * y / (2.0 * l)).sin() * decay;
            sum += if j % 2 == 0 { term } else { -term };
            // Remaining terms are bounded by a geometric tail of `decay`.
            let ratio = (-l1 * 8.0 * (j as f64 + 1.0) * t).exp();
            if decay * ratio / (1.0 - ratio).max(1e-300) < self.tolerance * 1e-3 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numerical(format!(
                "density series needs more than {} terms at t = {t}",
                self.series_terms
            )));
        }
        Ok(gauss * sum)
    }
}
