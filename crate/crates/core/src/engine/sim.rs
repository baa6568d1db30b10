use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::params::{SimParams, Trend};
use super::series::{TickRecord, TickSeries};
use super::trend::ChangeHistory;
use super::window::{noise_for_mean_interval, IntervalWindow};
use crate::{Error, Result};

/// Which state the engine evolves between transactions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// The two dealer mid-prices `p1`, `p2`.
    Dealer,
    /// The gap `D = p1 - p2` and the centre displacement `ΔG` since the last
    /// transaction.
    Reduced,
}

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;
const ODD_BITS: u64 = 0xAAAA_AAAA_AAAA_AAAA;
const STEPS_PER_WORD: u32 = 32;

/// Coin flips for both dealers, two bits per clock step.
///
/// Each `u64` drawn from the generator serves 32 consecutive steps. For step
/// `j` within the word, bit `2j` is dealer 1's flip and bit `2j + 1` is
/// dealer 2's; a set bit means `+Δp`.
#[derive(Debug, Clone, PartialEq)]
struct CoinStream {
    rng: ChaCha8Rng,
    buf: u64,
    left: u32,
}

impl CoinStream {
    fn new(seed: u64) -> Self {
        CoinStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            buf: 0,
            left: 0,
        }
    }

    #[inline]
    fn refill(&mut self) {
        self.buf = self.rng.next_u64();
        self.left = STEPS_PER_WORD;
    }

    /// Consumes `m` steps (`1 <= m <= left`) and returns how many `+Δp`
    /// flips each dealer got.
    #[inline]
    fn take(&mut self, m: u32) -> (u32, u32) {
        debug_assert!(m >= 1 && m <= self.left);
        let bits = if m == STEPS_PER_WORD {
            self.buf
        } else {
            self.buf & ((1u64 << (2 * m)) - 1)
        };
        self.buf = if m == STEPS_PER_WORD {
            0
        } else {
            self.buf >> (2 * m)
        };
        self.left -= m;
        (
            (bits & EVEN_BITS).count_ones(),
            (bits & ODD_BITS).count_ones(),
        )
    }
}

/// Integer lattice displacements since the last transaction, in units of
/// the current noise step `c·Δp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Walker {
    Dealer { k1: i64, k2: i64 },
    Reduced { gap: i64, sum: i64 },
}

impl Walker {
    fn origin(repr: Representation) -> Self {
        match repr {
            Representation::Dealer => Walker::Dealer { k1: 0, k2: 0 },
            Representation::Reduced => Walker::Reduced { gap: 0, sum: 0 },
        }
    }

    #[inline]
    fn advance(&mut self, up1: u32, up2: u32, steps: u32) {
        let (u1, u2, m) = (up1 as i64, up2 as i64, steps as i64);
        match self {
            Walker::Dealer { k1, k2 } => {
                *k1 += 2 * u1 - m;
                *k2 += 2 * u2 - m;
            }
            Walker::Reduced { gap, sum } => {
                *gap += 2 * (u1 - u2);
                *sum += 2 * (u1 + u2) - 2 * m;
            }
        }
    }

    /// `D` in lattice units.
    #[inline]
    fn gap(&self) -> i64 {
        match *self {
            Walker::Dealer { k1, k2 } => k1 - k2,
            Walker::Reduced { gap, .. } => gap,
        }
    }

    /// `2·ΔG` (noise part) in lattice units.
    #[inline]
    fn sum(&self) -> i64 {
        match *self {
            Walker::Dealer { k1, k2 } => k1 + k2,
            Walker::Reduced { sum, .. } => sum,
        }
    }

    fn reset(&mut self) {
        match self {
            Walker::Dealer { k1, k2 } => {
                *k1 = 0;
                *k2 = 0;
            }
            Walker::Reduced { gap, sum } => {
                *gap = 0;
                *sum = 0;
            }
        }
    }
}

/// Smallest lattice gap `k` with `k·step >= spread`. Ratios within 1e-9 of
/// an integer are snapped to it so that `|D| = L` triggers despite rounding.
fn lattice_threshold(spread: f64, step: f64) -> u64 {
    if !(step > 0.0) {
        return u64::MAX;
    }
    let r = spread / step;
    if !r.is_finite() || r >= 1e18 {
        return u64::MAX;
    }
    let k = r.round();
    let t = if (r - k).abs() <= 1e-9 * r.max(1.0) {
        k
    } else {
        r.ceil()
    };
    (t as u64).max(1)
}

/// Live state of one simulation.
///
/// Between transactions the dealers (or the reduced walker) move on a lattice
/// of spacing `c_eff·Δp`; drift from the trend term is constant between
/// transactions and is accounted as `steps · d·<ΔP>_M·Δt`. Both
/// representations consume the same coin flips and evaluate the transaction
/// price from the same integers, so they emit identical tick series.
#[derive(Debug, Clone)]
pub struct SimState {
    params: SimParams,
    repr: Representation,
    coins: CoinStream,
    walker: Walker,
    /// Last market price (`p0` before the first transaction).
    price: f64,
    tick: u64,
    steps_total: u64,
    steps_since: u64,
    last_transaction_t: f64,
    noise: f64,
    step_size: f64,
    threshold: u64,
    trend: Trend,
    drift_per_step: f64,
    history: ChangeHistory,
    window: IntervalWindow,
    halted: bool,
}

impl SimState {
    pub fn new(params: SimParams, repr: Representation) -> Result<Self> {
        params.validate()?;
        let noise = if params.self_modulation {
            noise_for_mean_interval(
                params.bootstrap_mean_interval(),
                params.spread,
                params.clamp_lo,
                params.clamp_hi,
            )
        } else {
            params.noise
        };
        let step_size = noise * params.dp;
        Ok(SimState {
            repr,
            coins: CoinStream::new(params.seed),
            walker: Walker::origin(repr),
            price: params.p0,
            tick: 0,
            steps_total: 0,
            steps_since: 0,
            last_transaction_t: 0.0,
            noise,
            step_size,
            threshold: lattice_threshold(params.spread, step_size),
            trend: params.trend,
            drift_per_step: 0.0,
            history: ChangeHistory::new(params.ma_depth),
            window: IntervalWindow::new(params.tau),
            halted: false,
            params,
        })
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn time(&self) -> f64 {
        self.steps_total as f64 * self.params.dt
    }

    pub fn last_transaction_time(&self) -> f64 {
        self.last_transaction_t
    }

    /// Number of transactions so far.
    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn last_price(&self) -> f64 {
        self.price
    }

    /// Noise amplitude in force until the next transaction.
    pub fn noise_amplitude(&self) -> f64 {
        self.noise
    }

    pub fn trend(&self) -> Trend {
        self.trend
    }

    /// Current weighted moving average of price changes.
    pub fn trend_signal(&self) -> f64 {
        self.history.weighted_ma()
    }

    /// Changes the trend coefficient from now on (used for schedules where
    /// `d` varies by tick range).
    pub fn set_trend(&mut self, trend: Trend) {
        self.trend = trend;
        self.refresh_drift();
    }

    fn drift(&self) -> f64 {
        self.steps_since as f64 * self.drift_per_step
    }

    /// Dealer mid-prices `(p1, p2)`.
    pub fn dealer_prices(&self) -> (f64, f64) {
        let (k1, k2) = match self.walker {
            Walker::Dealer { k1, k2 } => (k1, k2),
            Walker::Reduced { gap, sum } => ((sum + gap) / 2, (sum - gap) / 2),
        };
        let base = self.price + self.drift();
        (
            base + self.step_size * k1 as f64,
            base + self.step_size * k2 as f64,
        )
    }

    /// Reduced coordinates `(D, ΔG)`.
    pub fn reduced_coordinates(&self) -> (f64, f64) {
        (self.step_size * self.walker.gap() as f64, self.delta_g())
    }

    #[inline]
    fn delta_g(&self) -> f64 {
        self.drift() + self.step_size * self.walker.sum() as f64 * 0.5
    }

    fn check_running(&self) -> Result<()> {
        if self.halted {
            Err(Error::Positivity {
                tick: self.tick,
                price: self.price,
            })
        } else {
            Ok(())
        }
    }

    /// Advances the clock by one `Δt`: both dealers move, then the spread
    /// condition is checked. Returns the transaction if one occurred.
    pub fn step(&mut self) -> Result<Option<TickRecord>> {
        self.check_running()?;
        if self.coins.left == 0 {
            self.coins.refill();
        }
        let (u1, u2) = self.coins.take(1);
        self.walker.advance(u1, u2, 1);
        self.steps_since += 1;
        self.steps_total += 1;
        if self.walker.gap().unsigned_abs() >= self.threshold {
            self.transact().map(Some)
        } else {
            Ok(None)
        }
    }

    /// Runs until the next transaction.
    ///
    /// Equivalent to calling [`SimState::step`] until it yields a record, but
    /// whenever the walker is far enough from the wall that no crossing is
    /// possible, a block of steps is consumed at once from the coin word.
    pub fn next_tick(&mut self) -> Result<TickRecord> {
        self.check_running()?;
        loop {
            if self.coins.left == 0 {
                self.coins.refill();
            }
            let budget = self.params.max_steps_per_tick
                - self.steps_since.min(self.params.max_steps_per_tick);
            if budget == 0 {
                return Err(Error::Timeout {
                    tick: self.tick + 1,
                    steps: self.steps_since,
                });
            }
            let gap = self.walker.gap().unsigned_abs();
            // |gap| moves by at most 2 per step.
            let room = self.threshold.saturating_sub(gap + 1) / 2;
            let m = (self.coins.left as u64).min(room).min(budget) as u32;
            if m > 0 {
                let (u1, u2) = self.coins.take(m);
                self.walker.advance(u1, u2, m);
                self.steps_since += m as u64;
                self.steps_total += m as u64;
            } else if let Some(rec) = self.step()? {
                return Ok(rec);
            }
        }
    }

    fn transact(&mut self) -> Result<TickRecord> {
        let dprice = self.delta_g();
        let price = self.price + dprice;
        let t = self.time();
        let interval = self.steps_since as f64 * self.params.dt;
        self.tick += 1;
        if !(price > 0.0) {
            self.halted = true;
            return Err(Error::Positivity {
                tick: self.tick,
                price,
            });
        }
        self.price = price;
        self.last_transaction_t = t;
        self.steps_since = 0;
        self.walker.reset();
        self.history.push(dprice);

        if self.params.self_modulation {
            let mean = self.window.push(t, interval);
            self.noise = noise_for_mean_interval(
                mean,
                self.params.spread,
                self.params.clamp_lo,
                self.params.clamp_hi,
            );
            self.step_size = self.noise * self.params.dp;
            self.threshold = lattice_threshold(self.params.spread, self.step_size);
        }
        self.refresh_drift();

        Ok(TickRecord {
            n: self.tick,
            t,
            price,
            interval,
            dprice,
        })
    }

    fn refresh_drift(&mut self) {
        let ma = self.history.weighted_ma();
        self.drift_per_step = self.trend.coefficient(ma) * ma * self.params.dt;
    }
}

/// Runs `params.n_ticks` transactions.
pub fn run(params: &SimParams, repr: Representation) -> Result<TickSeries> {
    let mut state = SimState::new(params.clone(), repr)?;
    let mut out = TickSeries::new(params.p0);
    out.ticks.reserve(params.n_ticks);
    for _ in 0..params.n_ticks {
        out.ticks.push(state.next_tick()?);
    }
    Ok(out)
}
