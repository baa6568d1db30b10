use dealer_core::closedform::{
    diffusion_ratio, dirichlet_beta, puck_b_mean, solve_tail_exponent, solve_trend_coefficient,
    MomentKind, Which,
};
use dealer_core::{ClosedFormLaw, Error, Result};

use crate::kv::KvLines;

/// Optional quantities on top of the basic laws.
#[derive(Debug, Clone, Default)]
pub struct OracleRequest {
    /// Tail exponent to solve the trend coefficient for.
    pub beta: Option<f64>,
    /// Trend coefficient for the exponent, potential and diffusion values.
    pub d: Option<f64>,
    /// Interval at which to evaluate the interval pdf and ccdf.
    pub interval: Option<f64>,
    /// |ΔP| at which to evaluate its pdf and ccdf.
    pub dprice: Option<f64>,
    /// Highest integer moment printed.
    pub max_moment: u32,
}

pub fn oracle_lines(law: &ClosedFormLaw, req: &OracleRequest) -> Result<KvLines> {
    let mut kv = KvLines::default();
    kv.push("L", law.spread);
    kv.push("c", law.noise);
    let (ri, rd) = law.tail_rates();
    kv.push("interval_rate", ri);
    kv.push("abs_dprice_rate", rd);
    kv.push("mean_interval", law.moment(MomentKind::Interval, 1)?);
    kv.push("var_interval", law.variance(MomentKind::Interval)?);
    kv.push("mean_abs_dprice", law.moment(MomentKind::AbsDprice, 1)?);
    kv.push("var_abs_dprice", law.variance(MomentKind::AbsDprice)?);
    for k in 1..=req.max_moment {
        kv.push(
            &format!("interval_moment_{k}"),
            law.moment(MomentKind::Interval, k)?,
        );
        kv.push(
            &format!("abs_dprice_moment_{k}"),
            law.moment(MomentKind::AbsDprice, k)?,
        );
    }
    kv.push("catalan", dirichlet_beta(2.0)?);
    kv.push(
        "trend_coefficient_beta3",
        solve_trend_coefficient(3.0, law)?,
    );
    if let Some(beta) = req.beta {
        kv.push("trend_coefficient", solve_trend_coefficient(beta, law)?);
    }
    if let Some(d) = req.d {
        kv.push("b_mean", puck_b_mean(d, law));
        kv.result("tail_exponent", solve_tail_exponent(d, law));
        match diffusion_ratio(d, law) {
            Ok(r) => kv.push("diffusion_ratio", r),
            Err(Error::BubbleRegime { bound, .. }) => {
                kv.push("diffusion_ratio", "bubble_regime");
                kv.push("bubble_threshold", bound);
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(i) = req.interval {
        kv.push("interval_pdf", law.q1(i, Which::Pdf)?);
        kv.push("interval_ccdf", law.q1(i, Which::Ccdf)?);
    }
    if let Some(x) = req.dprice {
        kv.push("abs_dprice_pdf", law.q2(x, Which::Pdf)?);
        kv.push("abs_dprice_ccdf", law.q2(x, Which::Ccdf)?);
    }
    Ok(kv)
}
