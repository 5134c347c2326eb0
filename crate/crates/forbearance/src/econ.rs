//! Static economic primitives for the two-firm market.
//!
//! Covers firm growth under an information-completeness index, stage profit
//! on linear differentiated demand, the first-order-condition composite,
//! best-response pricing, aggregate demand and Cobb–Douglas production.

use serde::{Deserialize, Serialize};

use crate::{ensure_finite, invalid, Result};

/// Absolute tolerance on the Cobb–Douglas exponent sum.
const EXPONENT_SUM_TOL: f64 = 1e-12;

/// Golden-section tolerance on the price argument.
const PRICE_SEARCH_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Inputs of the growth rule `A * sigma^(1 - phi)`.
///
/// `info_phi = 1` is perfect information; lower values mean greater business
/// uncertainty and, for export intensity above one, slower growth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    /// Firm age in years (`A >= 0`).
    pub age: f64,
    /// Export intensity ratio (`sigma >= 0`).
    pub export_intensity: f64,
    /// Information completeness index (`phi` in `[0, 1]`).
    pub info_phi: f64,
}

impl GrowthParams {
    pub fn new(age: f64, export_intensity: f64, info_phi: f64) -> Result<Self> {
        ensure_finite("age", age)?;
        ensure_finite("export_intensity", export_intensity)?;
        ensure_finite("info_phi", info_phi)?;
        if age < 0.0 {
            return Err(invalid(format!("age must be >= 0, got {age}")));
        }
        if export_intensity < 0.0 {
            return Err(invalid(format!(
                "export_intensity must be >= 0, got {export_intensity}"
            )));
        }
        if !(0.0..=1.0).contains(&info_phi) {
            return Err(invalid(format!("info_phi must lie in [0, 1], got {info_phi}")));
        }
        Ok(Self { age, export_intensity, info_phi })
    }
}

/// One firm's state in a pricing stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirmState {
    /// Initial factor endowment `x`.
    pub endowment: f64,
    /// Growth `y` in currency per period.
    pub growth: f64,
    /// Unit cost `c >= 0`.
    pub unit_cost: f64,
    /// Posted price `p >= 0`.
    pub price: f64,
}

impl FirmState {
    pub fn new(endowment: f64, growth: f64, unit_cost: f64, price: f64) -> Result<Self> {
        ensure_finite("endowment", endowment)?;
        ensure_finite("growth", growth)?;
        ensure_finite("unit_cost", unit_cost)?;
        ensure_finite("price", price)?;
        if unit_cost < 0.0 {
            return Err(invalid(format!("unit_cost must be >= 0, got {unit_cost}")));
        }
        if price < 0.0 {
            return Err(invalid(format!("price must be >= 0, got {price}")));
        }
        Ok(Self { endowment, growth, unit_cost, price })
    }
}

/// Linear differentiated demand `q_i = intercept - own_slope*p_i + cross_slope*p_j`,
/// clamped at zero. The own-price effect must dominate the cross effect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandSpec {
    pub intercept: f64,
    pub own_slope: f64,
    pub cross_slope: f64,
}

impl DemandSpec {
    pub fn new(intercept: f64, own_slope: f64, cross_slope: f64) -> Result<Self> {
        ensure_finite("intercept", intercept)?;
        ensure_finite("own_slope", own_slope)?;
        ensure_finite("cross_slope", cross_slope)?;
        if intercept <= 0.0 {
            return Err(invalid(format!("intercept must be > 0, got {intercept}")));
        }
        if !(cross_slope >= 0.0 && own_slope > cross_slope) {
            return Err(invalid(format!(
                "demand requires own_slope > cross_slope >= 0, got own {own_slope}, cross {cross_slope}"
            )));
        }
        Ok(Self { intercept, own_slope, cross_slope })
    }
}

/// Market-level environment shared by both firms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketEnv {
    /// Market scale `K > 0`.
    pub market_scale: f64,
    /// Per-period discount rate `r >= 0`.
    pub discount_rate: f64,
    /// Multiplier of the profit feasibility cap (`lambda > 0`).
    pub constraint_lambda: f64,
    /// Additive residual `e` carried into stage profit.
    pub residual: f64,
}

impl MarketEnv {
    pub fn new(
        market_scale: f64,
        discount_rate: f64,
        constraint_lambda: f64,
        residual: f64,
    ) -> Result<Self> {
        ensure_finite("market_scale", market_scale)?;
        ensure_finite("discount_rate", discount_rate)?;
        ensure_finite("constraint_lambda", constraint_lambda)?;
        ensure_finite("residual", residual)?;
        if market_scale <= 0.0 {
            return Err(invalid(format!("market_scale must be > 0, got {market_scale}")));
        }
        if discount_rate < 0.0 {
            return Err(invalid(format!("discount_rate must be >= 0, got {discount_rate}")));
        }
        if constraint_lambda <= 0.0 {
            return Err(invalid(format!(
                "constraint_lambda must be > 0, got {constraint_lambda}"
            )));
        }
        Ok(Self { market_scale, discount_rate, constraint_lambda, residual })
    }
}

impl Default for MarketEnv {
    fn default() -> Self {
        Self { market_scale: 1.0, discount_rate: 0.0, constraint_lambda: 1.0, residual: 0.0 }
    }
}

/// Degree-one Cobb–Douglas technology `tfp * W^alpha * Z^omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductionParams {
    pub tfp: f64,
    pub alpha: f64,
    pub omega: f64,
    pub w_input: f64,
    pub z_input: f64,
}

impl ProductionParams {
    pub fn new(tfp: f64, alpha: f64, omega: f64, w_input: f64, z_input: f64) -> Result<Self> {
        ensure_finite("tfp", tfp)?;
        ensure_finite("alpha", alpha)?;
        ensure_finite("omega", omega)?;
        ensure_finite("w_input", w_input)?;
        ensure_finite("z_input", z_input)?;
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&omega) {
            return Err(invalid(format!(
                "exponents must lie in [0, 1], got alpha {alpha}, omega {omega}"
            )));
        }
        if (alpha + omega - 1.0).abs() > EXPONENT_SUM_TOL {
            return Err(invalid(format!(
                "exponents must sum to 1 within {EXPONENT_SUM_TOL}, got {}",
                alpha + omega
            )));
        }
        if w_input <= 0.0 || z_input <= 0.0 {
            return Err(invalid(format!(
                "inputs must be > 0, got W {w_input}, Z {z_input}"
            )));
        }
        Ok(Self { tfp, alpha, omega, w_input, z_input })
    }
}

/// The composite first-order condition `(D - c) * E + S`.
///
/// `demand_term` is the margin-relevant demand value, `elasticity_term` the
/// own-price sensitivity of quantity, and `endowment_sum` the firm's
/// endowment-plus-growth total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocComposite {
    pub demand_term: f64,
    pub elasticity_term: f64,
    pub endowment_sum: f64,
}

/// Revenue and cost multipliers on the export margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExportMultipliers {
    pub mu: f64,
    pub beta: f64,
}

impl ExportMultipliers {
    pub fn new(mu: f64, beta: f64) -> Result<Self> {
        ensure_finite("mu", mu)?;
        ensure_finite("beta", beta)?;
        if mu < 0.0 || beta < 0.0 {
            return Err(invalid(format!(
                "export multipliers must be >= 0, got mu {mu}, beta {beta}"
            )));
        }
        Ok(Self { mu, beta })
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Growth rate `A * sigma^(1 - phi)`.
///
/// Constant in `phi` at `sigma = 1`, increasing in `sigma` whenever `phi < 1`.
pub fn growth_rate(g: &GrowthParams) -> f64 {
    g.age * g.export_intensity.powf(1.0 - g.info_phi)
}

/// Quantity demanded from the firm posting `own_price` against `rival_price`,
/// clamped at zero sales.
pub fn demand_quantity(d: &DemandSpec, own_price: f64, rival_price: f64) -> f64 {
    (d.intercept - d.own_slope * own_price + d.cross_slope * rival_price).max(0.0)
}

/// Stage profit `(x + y) + (p - c) * q(p, p_j) + e`.
pub fn stage_profit(
    firm: &FirmState,
    demand: &DemandSpec,
    rival_price: f64,
    env: &MarketEnv,
) -> Result<f64> {
    ensure_finite("rival_price", rival_price)?;
    ensure_finite("price", firm.price)?;
    let q = demand_quantity(demand, firm.price, rival_price);
    Ok(firm.endowment + firm.growth + (firm.price - firm.unit_cost) * q + env.residual)
}

/// Feasibility check `profit <= lambda * mean(market_scales)`.
///
/// The boundary is feasible (weak inequality).
pub fn constraint_satisfied(profit: f64, env: &MarketEnv, market_scales: &[f64]) -> Result<bool> {
    if market_scales.is_empty() {
        return Err(invalid("market_scales must be non-empty"));
    }
    let mean = market_scales.iter().sum::<f64>() / market_scales.len() as f64;
    Ok(profit <= env.constraint_lambda * mean)
}

/// Assembles the first-order-condition composite for one firm at the current
/// price pair: demand value, own-price slope of quantity, and the firm's
/// endowment-plus-growth sum (one firm per call).
pub fn assemble_foc(firm: &FirmState, demand: &DemandSpec, rival_price: f64) -> FocComposite {
    FocComposite {
        demand_term: demand_quantity(demand, firm.price, rival_price),
        elasticity_term: -demand.own_slope,
        endowment_sum: firm.endowment + firm.growth,
    }
}

/// First-order-condition residual `(D - c) * E + S`; a root in the price
/// defines the candidate interior optimum.
pub fn foc_residual(firm: &FirmState, composite: &FocComposite) -> f64 {
    (composite.demand_term - firm.unit_cost) * composite.elasticity_term
        + composite.endowment_sum
}

/// Profit-maximizing own price on `[bounds.0, bounds.1]` against a fixed
/// rival price, by golden-section search to an absolute argument tolerance of
/// `1e-8`.
///
/// The additive endowment, growth and residual terms do not move the
/// maximizer, so the search runs on the margin `(p - c) * q(p, p_j)` alone;
/// that margin is concave in `p` while sales are positive and flat once they
/// clamp to zero.
pub fn best_response_price(
    firm: &FirmState,
    demand: &DemandSpec,
    rival_price: f64,
    bounds: (f64, f64),
) -> Result<f64> {
    ensure_finite("rival_price", rival_price)?;
    ensure_finite("bounds.lo", bounds.0)?;
    ensure_finite("bounds.hi", bounds.1)?;
    let (mut lo, mut hi) = bounds;
    if lo < 0.0 || lo >= hi {
        return Err(invalid(format!(
            "price bounds must satisfy 0 <= lo < hi, got [{lo}, {hi}]"
        )));
    }
    let margin = |p: f64| (p - firm.unit_cost) * demand_quantity(demand, p, rival_price);

    let ratio = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let mut fc = margin(c);
    let mut fd = margin(d);
    while hi - lo > PRICE_SEARCH_TOL {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = margin(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = margin(d);
        }
    }
    // Guard against a maximum sitting exactly on an original endpoint.
    let mid = 0.5 * (lo + hi);
    let candidates = [mid, bounds.0, bounds.1];
    let best = candidates
        .into_iter()
        .max_by(|a, b| margin(*a).total_cmp(&margin(*b)))
        .expect("non-empty candidate set");
    Ok(best)
}

/// Aggregate demand `K * revenue_per_unit / (1 + r)`.
pub fn aggregate_demand(env: &MarketEnv, revenue_per_unit: f64) -> f64 {
    env.market_scale * revenue_per_unit / (1.0 + env.discount_rate)
}

/// Cobb–Douglas output `tfp * W^alpha * Z^omega`; homogeneous of degree one.
pub fn cobb_douglas_output(p: &ProductionParams) -> f64 {
    p.tfp * p.w_input.powf(p.alpha) * p.z_input.powf(p.omega)
}

/// Export-adjusted objective
/// `(x - A * sigma^(1 - phi)) + (mu*p - beta*c) * q(p, p_j)` for one firm.
///
/// With `mu = beta = 1` the margin term coincides with the domestic margin of
/// [`stage_profit`]; the growth term enters with the opposite sign.
pub fn export_objective(
    firm: &FirmState,
    growth: &GrowthParams,
    mult: &ExportMultipliers,
    demand: &DemandSpec,
    rival_price: f64,
) -> Result<f64> {
    ensure_finite("rival_price", rival_price)?;
    let q = demand_quantity(demand, firm.price, rival_price);
    Ok(firm.endowment - growth_rate(growth)
        + (mult.mu * firm.price - mult.beta * firm.unit_cost) * q)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
