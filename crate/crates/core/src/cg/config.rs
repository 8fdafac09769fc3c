use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepsizeRule {
    /// `α = −gᵀd / dᵀAd`
    #[default]
    ExactLineSearch,
    /// `α = −gᵀg / gᵀAd`
    GradientOrthogonality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaRule {
    #[default]
    FletcherReeves,
    HestenesStiefel,
    PolakRibierePolyak,
    DaiYuan,
}

impl BetaRule {
    pub const ALL: [BetaRule; 4] = [
        BetaRule::FletcherReeves,
        BetaRule::HestenesStiefel,
        BetaRule::PolakRibierePolyak,
        BetaRule::DaiYuan,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            BetaRule::FletcherReeves => "FR",
            BetaRule::HestenesStiefel => "HS",
            BetaRule::PolakRibierePolyak => "PRP",
            BetaRule::DaiYuan => "DY",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientUpdate {
    /// `g_{k+1} = g_k + α_k A d_k`, one matvec per iteration.
    #[default]
    Recurrence,
    /// `g_{k+1} = A x_{k+1} + b`, a second matvec per iteration.
    Explicit,
}

/// Stopping threshold on `‖g_k‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tolerance {
    /// Multiple of `‖g_0‖`.
    Relative(f64),
    Absolute(f64),
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::Relative(1e-12)
    }
}

impl Tolerance {
    pub fn resolve(self, initial_gradient_norm: f64) -> f64 {
        match self {
            Tolerance::Relative(r) => r * initial_gradient_norm,
            Tolerance::Absolute(a) => a,
        }
    }

    fn value(self) -> f64 {
        match self {
            Tolerance::Relative(v) | Tolerance::Absolute(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverConfig {
    pub stepsize: StepsizeRule,
    pub beta: BetaRule,
    pub gradient_update: GradientUpdate,
    pub tolerance: Tolerance,
    /// Defaults to the problem order when `None`.
    pub max_iterations: Option<usize>,
    pub record_trace: bool,
}

impl SolverConfig {
    /// Default rules with trace recording on.
    pub fn traced() -> Self {
        Self {
            record_trace: true,
            ..Self::default()
        }
    }

    pub fn with_stepsize(mut self, rule: StepsizeRule) -> Self {
        self.stepsize = rule;
        self
    }

    pub fn with_beta(mut self, rule: BetaRule) -> Self {
        self.beta = rule;
        self
    }

    pub fn with_gradient_update(mut self, mode: GradientUpdate) -> Self {
        self.gradient_update = mode;
        self
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = Some(cap);
        self
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        let t = self.tolerance.value();
        if !(t.is_finite() && t >= 0.0) {
            return Err(crate::Error::InvalidSpec(format!(
                "tolerance {t} must be finite and >= 0"
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(crate::Error::InvalidSpec("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}
