//! The repeated two-firm Bertrand pricing game.
//!
//! Stage payoffs follow winner-takes-demand price competition with a
//! configurable tie split. The repeated game plays grim trigger (cooperate
//! until the first observed rival defection, then defect forever) against
//! the unconditional strategies, discounting per-period payoffs by `delta^t`.
//! Cooperation is sustainable exactly when the discount factor reaches the
//! critical threshold `(pi_defect - pi_coop) / (pi_defect - pi_punish)`.

use serde::{Deserialize, Serialize};

use crate::econ::{demand_quantity, DemandSpec};
use crate::{ensure_finite, invalid, Result};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// One period's move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    Cooperate,
    Defect,
}

/// Pure repeated-game strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrategyKind {
    /// Cooperate until the rival's first defection, then defect forever.
    GrimTrigger,
    AlwaysCooperate,
    AlwaysDefect,
}

/// Per-period payoffs of the stage game.
///
/// `pi_defect >= pi_coop >= pi_punish` keeps the dilemma non-vacuous;
/// `pi_monopoly >= pi_nash` anchors the collusion index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StagePayoffs {
    /// Per-period payoff under mutual cooperation.
    pub pi_coop: f64,
    /// One-shot payoff to a unilateral defector.
    pub pi_defect: f64,
    /// Per-period payoff in the punishment phase.
    pub pi_punish: f64,
    /// Static Nash benchmark.
    pub pi_nash: f64,
    /// Joint-monopoly benchmark.
    pub pi_monopoly: f64,
}

impl StagePayoffs {
    pub fn new(
        pi_coop: f64,
        pi_defect: f64,
        pi_punish: f64,
        pi_nash: f64,
        pi_monopoly: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("pi_coop", pi_coop),
            ("pi_defect", pi_defect),
            ("pi_punish", pi_punish),
            ("pi_nash", pi_nash),
            ("pi_monopoly", pi_monopoly),
        ] {
            ensure_finite(name, v)?;
        }
        if !(pi_defect >= pi_coop && pi_coop >= pi_punish) {
            return Err(invalid(format!(
                "payoffs must satisfy pi_defect >= pi_coop >= pi_punish, \
                 got D {pi_defect}, C {pi_coop}, P {pi_punish}"
            )));
        }
        if pi_monopoly < pi_nash {
            return Err(invalid(format!(
                "pi_monopoly must be >= pi_nash, got M {pi_monopoly}, N {pi_nash}"
            )));
        }
        Ok(Self { pi_coop, pi_defect, pi_punish, pi_nash, pi_monopoly })
    }

    /// Core triple with marginal-cost-pricing benchmarks: the Nash payoff
    /// equals the punishment payoff and the monopoly payoff the cooperative
    /// one.
    pub fn from_core(pi_coop: f64, pi_defect: f64, pi_punish: f64) -> Result<Self> {
        Self::new(pi_coop, pi_defect, pi_punish, pi_punish, pi_coop)
    }
}

/// Full configuration of a finite repeated game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub payoffs: StagePayoffs,
    /// Per-period discount factor in `[0, 1)`.
    pub delta: f64,
    /// Number of periods (`>= 1`).
    pub horizon: u32,
    pub strategy_i: StrategyKind,
    pub strategy_j: StrategyKind,
}

impl GameConfig {
    pub fn new(
        payoffs: StagePayoffs,
        delta: f64,
        horizon: u32,
        strategy_i: StrategyKind,
        strategy_j: StrategyKind,
    ) -> Result<Self> {
        ensure_finite("delta", delta)?;
        if !(0.0..1.0).contains(&delta) {
            return Err(invalid(format!("delta must lie in [0, 1), got {delta}")));
        }
        if horizon < 1 {
            return Err(invalid("horizon must be >= 1"));
        }
        Ok(Self { payoffs, delta, horizon, strategy_i, strategy_j })
    }
}

/// Realized play and discounted sums of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameOutcome {
    /// Per-period action pairs, one entry per period.
    pub actions: Vec<(Action, Action)>,
    /// Per-period payoff pairs, same length.
    pub per_period: Vec<(f64, f64)>,
    pub discounted_i: f64,
    pub discounted_j: f64,
}

/// Tie handling for the price-competition stage: firm `i` receives the
/// `sharing` fraction of tied demand, firm `j` the rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BertrandMarketRules {
    pub sharing: f64,
}

impl BertrandMarketRules {
    pub fn new(sharing: f64) -> Result<Self> {
        ensure_finite("sharing", sharing)?;
        if !(0.0..=1.0).contains(&sharing) {
            return Err(invalid(format!("sharing must lie in [0, 1], got {sharing}")));
        }
        Ok(Self { sharing })
    }
}

impl Default for BertrandMarketRules {
    fn default() -> Self {
        Self { sharing: 0.5 }
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Stage payoffs of price competition: the lower-priced firm serves the whole
/// market at its price, equal prices split it by the sharing fraction, and
/// the higher-priced firm sells nothing.
///
/// Market demand at a common price `p` is the symmetric evaluation
/// `q(p, p)` of the linear demand curve.
pub fn bertrand_stage_payoffs(
    p_i: f64,
    p_j: f64,
    demand: &DemandSpec,
    c_i: f64,
    c_j: f64,
    rules: &BertrandMarketRules,
) -> (f64, f64) {
    let market = |p: f64| demand_quantity(demand, p, p);
    if p_i < p_j {
        ((p_i - c_i) * market(p_i), 0.0)
    } else if p_j < p_i {
        (0.0, (p_j - c_j) * market(p_j))
    } else {
        let q = market(p_i);
        (rules.sharing * (p_i - c_i) * q, (1.0 - rules.sharing) * (p_j - c_j) * q)
    }
}

/// Critical discount factor `(pi_defect - pi_coop) / (pi_defect - pi_punish)`,
/// clamped to `[0, 1]`. Cooperation is sustainable for every `delta` at or
/// above it.
pub fn critical_discount(p: &StagePayoffs) -> Result<f64> {
    let denom = p.pi_defect - p.pi_punish;
    if denom == 0.0 {
        return Err(invalid(
            "critical discount undefined: pi_defect equals pi_punish".to_string(),
        ));
    }
    Ok(((p.pi_defect - p.pi_coop) / denom).clamp(0.0, 1.0))
}

/// Whether grim-trigger cooperation is sustainable at discount factor
/// `delta`: `pi_coop / (1 - delta) >= pi_defect + delta * pi_punish / (1 - delta)`,
/// equivalently `delta >= critical_discount` (boundary included).
pub fn is_sustainable(p: &StagePayoffs, delta: f64) -> bool {
    debug_assert!((0.0..1.0).contains(&delta));
    match critical_discount(p) {
        Ok(threshold) => delta >= threshold,
        // pi_defect == pi_punish forces all three payoffs equal under the
        // ordering invariant, so deviating never gains.
        Err(_) => p.pi_coop >= (1.0 - delta) * p.pi_defect + delta * p.pi_punish,
    }
}

fn choose(kind: StrategyKind, rival_defected_before: bool) -> Action {
    match kind {
        StrategyKind::AlwaysCooperate => Action::Cooperate,
        StrategyKind::AlwaysDefect => Action::Defect,
        StrategyKind::GrimTrigger => {
            if rival_defected_before {
                Action::Defect
            } else {
                Action::Cooperate
            }
        }
    }
}

fn stage_cell(p: &StagePayoffs, a_i: Action, a_j: Action) -> (f64, f64) {
    use Action::*;
    match (a_i, a_j) {
        (Cooperate, Cooperate) => (p.pi_coop, p.pi_coop),
        (Defect, Cooperate) => (p.pi_defect, p.pi_punish),
        (Cooperate, Defect) => (p.pi_punish, p.pi_defect),
        (Defect, Defect) => (p.pi_punish, p.pi_punish),
    }
}

/// Plays `horizon` rounds under perfect monitoring and returns the realized
/// actions, per-period payoffs and `delta^t`-discounted sums.
pub fn simulate_repeated_game(cfg: &GameConfig) -> GameOutcome {
    let horizon = cfg.horizon as usize;
    let mut actions = Vec::with_capacity(horizon);
    let mut per_period = Vec::with_capacity(horizon);
    let mut discounted_i = 0.0;
    let mut discounted_j = 0.0;
    let mut weight = 1.0;
    let mut i_saw_defection = false;
    let mut j_saw_defection = false;

    for _ in 0..horizon {
        let a_i = choose(cfg.strategy_i, i_saw_defection);
        let a_j = choose(cfg.strategy_j, j_saw_defection);
        let (u_i, u_j) = stage_cell(&cfg.payoffs, a_i, a_j);
        actions.push((a_i, a_j));
        per_period.push((u_i, u_j));
        discounted_i += weight * u_i;
        discounted_j += weight * u_j;
        weight *= cfg.delta;
        i_saw_defection |= a_j == Action::Defect;
        j_saw_defection |= a_i == Action::Defect;
    }

    GameOutcome { actions, per_period, discounted_i, discounted_j }
}

/// Smallest horizon whose truncated geometric tail `delta^T * max_pi / (1 - delta)`
/// stays under `bound`, capped at 10_000 periods.
///
/// Lets finite simulations stand in for the infinite super game: beyond this
/// horizon the discounted continuation differs from the infinite sum by less
/// than `bound`.
pub fn horizon_for_tail_bound(delta: f64, max_pi: f64, bound: f64) -> u32 {
    if delta == 0.0 {
        return 1;
    }
    let mut t = 1u32;
    let mut tail = delta * max_pi.abs().max(1e-300) / (1.0 - delta);
    while tail >= bound && t < 10_000 {
        tail *= delta;
        t += 1;
    }
    t
}

/// Collusion index `(observed - pi_nash) / (pi_monopoly - pi_nash)`:
/// zero at static Nash play, one at the joint monopoly.
pub fn collusion_index(observed: f64, p: &StagePayoffs) -> Result<f64> {
    ensure_finite("observed", observed)?;
    let span = p.pi_monopoly - p.pi_nash;
    if span == 0.0 {
        return Err(invalid(
            "collusion index degenerate: pi_monopoly equals pi_nash".to_string(),
        ));
    }
    Ok((observed - p.pi_nash) / span)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econ::DemandSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn core(c: f64, d: f64, p: f64) -> StagePayoffs {
        StagePayoffs::from_core(c, d, p).unwrap()
    }

    #[test]
    fn payoff_ordering_enforced() {
        assert!(StagePayoffs::from_core(2.0, 1.0, 0.0).is_err());
        assert!(StagePayoffs::from_core(1.0, 2.0, 1.5).is_err());
        assert!(StagePayoffs::new(1.0, 2.0, 0.0, 1.0, 0.5).is_err());
        assert!(StagePayoffs::from_core(1.0, 2.0, 0.0).is_ok());
    }

    #[test]
    fn bertrand_tie_splits_evenly_for_symmetric_costs() {
        let d = DemandSpec::new(5.0, 2.0, 1.0).unwrap();
        let (u_i, u_j) =
            bertrand_stage_payoffs(2.0, 2.0, &d, 1.0, 1.0, &BertrandMarketRules::default());
        assert_eq!(u_i, u_j);
        assert!((u_i - 0.5 * 3.0).abs() < 1e-12);
    }

    #[test]
    fn bertrand_loser_earns_nothing() {
        let d = DemandSpec::new(5.0, 2.0, 1.0).unwrap();
        let (u_i, u_j) =
            bertrand_stage_payoffs(2.0, 3.0, &d, 1.0, 1.0, &BertrandMarketRules::default());
        // winner takes q(2, 2) = 3 at unit margin 1
        assert!((u_i - 3.0).abs() < 1e-12);
        assert_eq!(u_j, 0.0);
    }

    #[test]
    fn bertrand_is_anonymous() {
        let d = DemandSpec::new(6.0, 2.0, 0.5).unwrap();
        let rules = BertrandMarketRules::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p_i: f64 = rng.random_range(0.0..4.0);
            let p_j: f64 = rng.random_range(0.0..4.0);
            let c_i: f64 = rng.random_range(0.0..2.0);
            let c_j: f64 = rng.random_range(0.0..2.0);
            let (a, b) = bertrand_stage_payoffs(p_i, p_j, &d, c_i, c_j, &rules);
            let (b2, a2) = bertrand_stage_payoffs(p_j, p_i, &d, c_j, c_i, &rules);
            assert_eq!((a, b), (a2, b2));
        }
    }

    #[test]
    fn critical_discount_cases() {
        assert_eq!(critical_discount(&core(2.0, 2.0, 0.0)).unwrap(), 0.0);
        assert_eq!(critical_discount(&core(1.0, 2.0, 0.0)).unwrap(), 0.5);
        assert_eq!(critical_discount(&core(1.0, 2.0, 1.0)).unwrap(), 1.0);
        assert!(critical_discount(&core(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn sustainability_cases() {
        let p = core(1.0, 2.0, 0.0);
        assert!(!is_sustainable(&p, 0.0));
        assert!(is_sustainable(&p, 0.6));
        // boundary delta = delta* counts as sustainable
        assert!(is_sustainable(&p, 0.5));
    }

    #[test]
    fn sustainability_matches_payoff_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..500 {
            let pi_p: f64 = rng.random_range(0.0..1.0);
            let pi_c = pi_p + rng.random_range(0.05..1.0);
            let pi_d = pi_c + rng.random_range(0.05..1.0);
            let p = core(pi_c, pi_d, pi_p);
            let delta: f64 = rng.random_range(0.0..0.999);
            let direct = pi_c / (1.0 - delta) >= pi_d + delta * pi_p / (1.0 - delta);
            if (delta - critical_discount(&p).unwrap()).abs() > 1e-12 {
                assert_eq!(is_sustainable(&p, delta), direct);
            }
        }
    }

    #[test]
    fn threshold_splits_delta_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let pi_p: f64 = rng.random_range(0.0..1.0);
            let pi_c = pi_p + rng.random_range(0.05..1.0);
            let pi_d = pi_c + rng.random_range(0.05..1.0);
            let p = core(pi_c, pi_d, pi_p);
            let threshold = critical_discount(&p).unwrap();
            for k in 0..=100 {
                let delta = 0.99 * k as f64 / 100.0;
                assert_eq!(is_sustainable(&p, delta), delta >= threshold);
            }
        }
    }

    #[test]
    fn grim_pair_cooperates_forever() {
        let cfg = GameConfig::new(
            core(1.0, 2.0, 0.0),
            0.5,
            40,
            StrategyKind::GrimTrigger,
            StrategyKind::GrimTrigger,
        )
        .unwrap();
        let out = simulate_repeated_game(&cfg);
        assert_eq!(out.actions.len(), 40);
        assert!(out
            .actions
            .iter()
            .all(|&(a, b)| a == Action::Cooperate && b == Action::Cooperate));
        // geometric sum pi_c * (1 - delta^T) / (1 - delta)
        let expect = 1.0 * (1.0 - 0.5f64.powi(40)) / 0.5;
        assert!((out.discounted_i - expect).abs() < 1e-12);
        assert!((out.discounted_j - expect).abs() < 1e-12);
    }

    #[test]
    fn defector_against_grim_gets_one_shot_gain() {
        let cfg = GameConfig::new(
            core(1.0, 2.0, 0.0),
            0.5,
            3,
            StrategyKind::AlwaysDefect,
            StrategyKind::GrimTrigger,
        )
        .unwrap();
        let out = simulate_repeated_game(&cfg);
        assert_eq!(out.actions[0], (Action::Defect, Action::Cooperate));
        assert_eq!(out.actions[1], (Action::Defect, Action::Defect));
        assert!((out.discounted_i - 2.0).abs() < 1e-12);
        assert_eq!(out.discounted_j, 0.0);
    }

    #[test]
    fn one_period_game_is_the_stage_game() {
        let cfg = GameConfig::new(
            core(1.0, 2.0, 0.25),
            0.9,
            1,
            StrategyKind::AlwaysDefect,
            StrategyKind::AlwaysCooperate,
        )
        .unwrap();
        let out = simulate_repeated_game(&cfg);
        assert_eq!(out.per_period, vec![(2.0, 0.25)]);
        assert_eq!(out.discounted_i, 2.0);
        assert_eq!(out.discounted_j, 0.25);
    }

    #[test]
    fn grim_pair_beats_deviation_when_sustainable() {
        // Finite-horizon check with the tail bound delta^T max_pi/(1-delta) < 1e-9.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let pi_p: f64 = rng.random_range(0.0..1.0);
            let pi_c = pi_p + rng.random_range(0.05..1.0);
            let pi_d = pi_c + rng.random_range(0.05..1.0);
            let p = core(pi_c, pi_d, pi_p);
            let threshold = critical_discount(&p).unwrap();
            let delta: f64 = rng.random_range(threshold..0.95);
            let horizon = horizon_for_tail_bound(delta, pi_d, 1e-9);
            let coop = GameConfig::new(
                p,
                delta,
                horizon,
                StrategyKind::GrimTrigger,
                StrategyKind::GrimTrigger,
            )
            .unwrap();
            let dev = GameConfig::new(
                p,
                delta,
                horizon,
                StrategyKind::AlwaysDefect,
                StrategyKind::GrimTrigger,
            )
            .unwrap();
            let v_coop = simulate_repeated_game(&coop).discounted_i;
            let v_dev = simulate_repeated_game(&dev).discounted_i;
            assert!(
                v_coop >= v_dev - 2e-9,
                "delta={delta} threshold={threshold} coop={v_coop} dev={v_dev}"
            );
        }
    }

    #[test]
    fn collusion_index_cases() {
        let p = StagePayoffs::new(1.0, 2.0, 0.0, 0.0, 4.0).unwrap();
        assert_eq!(collusion_index(0.0, &p).unwrap(), 0.0);
        assert_eq!(collusion_index(4.0, &p).unwrap(), 1.0);
        assert_eq!(collusion_index(2.0, &p).unwrap(), 0.5);
        let degenerate = StagePayoffs::new(1.0, 2.0, 0.0, 3.0, 3.0).unwrap();
        assert!(collusion_index(1.0, &degenerate).is_err());
    }

    #[test]
    fn collusion_index_affine_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let nash: f64 = rng.random_range(-2.0..2.0);
            let mono = nash + rng.random_range(0.1..4.0);
            let obs: f64 = rng.random_range(-3.0..6.0);
            let shift: f64 = rng.random_range(-5.0..5.0);
            let scale: f64 = rng.random_range(0.1..4.0);
            let base = StagePayoffs::new(0.0, 1.0, 0.0, nash, mono).unwrap();
            let moved = StagePayoffs::new(
                0.0,
                1.0,
                0.0,
                scale * nash + shift,
                scale * mono + shift,
            )
            .unwrap();
            let a = collusion_index(obs, &base).unwrap();
            let b = collusion_index(scale * obs + shift, &moved).unwrap();
            assert!((a - b).abs() < 1e-12, "a={a} b={b}");
        }
    }
}
