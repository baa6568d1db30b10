use std::io::{BufRead, Write};

use crate::{Error, Result};

pub const CSV_HEADER: &str = "n,t,price,interval,dprice";

/// One transaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickRecord {
    /// Tick index, starting at 1.
    pub n: u64,
    /// Wall time of the transaction.
    pub t: f64,
    pub price: f64,
    /// Time since the previous transaction (or since start for `n = 1`).
    pub interval: f64,
    /// `price(n) - price(n-1)`, with `price(0) = p0`.
    pub dprice: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TickSeries {
    pub p0: f64,
    pub ticks: Vec<TickRecord>,
}

impl TickSeries {
    pub fn new(p0: f64) -> Self {
        TickSeries {
            p0,
            ticks: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.ticks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ticks.is_empty()
    }

    pub fn prices(&self) -> Vec<f64> {
        self.ticks.iter().map(|r| r.price).collect()
    }

    pub fn intervals(&self) -> Vec<f64> {
        self.ticks.iter().map(|r| r.interval).collect()
    }

    pub fn dprices(&self) -> Vec<f64> {
        self.ticks.iter().map(|r| r.dprice).collect()
    }

    pub fn abs_dprices(&self) -> Vec<f64> {
        self.ticks.iter().map(|r| r.dprice.abs()).collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for r in &self.ticks {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.n,
                fmt_decimal(r.t),
                fmt_decimal(r.price),
                fmt_decimal(r.interval),
                fmt_decimal(r.dprice)
            )?;
        }
        Ok(())
    }

    /// Parses the CSV written by [`TickSeries::write_csv`]. `p0` is recovered
    /// from the first row as `price - dprice`.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })??;
        if header.trim_end() != CSV_HEADER {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `{CSV_HEADER}`, got `{header}`"),
            });
        }
        let mut ticks = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            let lineno = i + 2;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim_end().split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected 5 fields, got {}", fields.len()),
                });
            }
            let num = |k: usize| -> Result<f64> {
                fields[k].parse::<f64>().map_err(|e| Error::Parse {
                    line: lineno,
                    msg: format!("field {}: {e}", k + 1),
                })
            };
            let n = fields[0].parse::<u64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("field 1: {e}"),
            })?;
            ticks.push(TickRecord {
                n,
                t: num(1)?,
                price: num(2)?,
                interval: num(3)?,
                dprice: num(4)?,
            });
        }
        let p0 = ticks.first().map(|r| r.price - r.dprice).unwrap_or(0.0);
        Ok(TickSeries { p0, ticks })
    }
}

/// Plain decimal with 17 significant digits, which round-trips any `f64`.
pub fn fmt_decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (16 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}
