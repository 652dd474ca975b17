use super::channel::{validate_probabilities, KrausChannel};
use super::state::{check_dims, DensityMatrix};
use crate::error::{Error, Result};

/// Encoding ensemble `{p_x, N_x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingEnsemble {
    probs: Vec<f64>,
    channels: Vec<KrausChannel>,
}

impl EncodingEnsemble {
    pub fn new(probs: Vec<f64>, channels: Vec<KrausChannel>) -> Result<Self> {
        if probs.len() != channels.len() {
            return Err(Error::InvalidDistribution("one probability per channel"));
        }
        validate_probabilities(&probs)?;
        let d = channels[0].dim();
        for c in &channels {
            check_dims(d, c.dim())?;
        }
        Ok(Self { probs, channels })
    }

    pub fn uniform(channels: Vec<KrausChannel>) -> Result<Self> {
        let n = channels.len();
        if n == 0 {
            return Err(Error::EmptyPool);
        }
        Self::new(vec![1.0 / n as f64; n], channels)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn channels(&self) -> &[KrausChannel] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.channels[0].dim()
    }

    /// The classical-quantum ensemble `{p_x, N_x(ρ)}`.
    pub fn outputs(&self, rho: &DensityMatrix) -> Result<CqEnsemble> {
        let states = self
            .channels
            .iter()
            .map(|c| c.apply(rho))
            .collect::<Result<Vec<_>>>()?;
        CqEnsemble::new(self.probs.clone(), states)
    }

    /// `{p_x, N_x ∘ inner}`.
    pub fn precompose(&self, inner: &KrausChannel) -> Result<Self> {
        let channels = self
            .channels
            .iter()
            .map(|c| KrausChannel::compose(c, inner))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.probs.clone(), channels)
    }
}

/// Classical-quantum ensemble `{p_x, ρ_x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CqEnsemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl CqEnsemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::InvalidDistribution("one probability per state"));
        }
        validate_probabilities(&probs)?;
        let d = states[0].dim();
        for s in &states {
            check_dims(d, s.dim())?;
        }
        Ok(Self { probs, states })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// `ρ̄ = Σ_x p_x ρ_x`.
    pub fn average(&self) -> Result<DensityMatrix> {
        let refs: Vec<&DensityMatrix> = self.states.iter().collect();
        DensityMatrix::mixture(&self.probs, &refs)
    }
}

/// `Σ_x p_x N_x(ρ)`.
pub fn average_output(rho: &DensityMatrix, e: &EncodingEnsemble) -> Result<DensityMatrix> {
    e.outputs(rho)?.average()
}
