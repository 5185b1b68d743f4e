//! Column samplers.
//!
//! Every sampler is a pure function of its inputs and a `u64` seed. SRS
//! variants require unit-norm columns (see [`crate::matrix::normalize_columns`]);
//! the others work on raw data.

mod directions;
mod index;
mod srs;
mod volume;

use std::fmt;
use std::str::FromStr;

pub use directions::{sample_gaussian_directions, DirectionMatrix};
pub use index::{
    leverage_probabilities, leverage_sampling, norm_probabilities, norm_sampling, ris,
    NormConvention,
};
pub use srs::{
    srs_select_with_replacement, srs_select_without_replacement, srs_with_replacement,
    srs_without_replacement,
};
pub use volume::volume_sampling;
pub(crate) use srs::for_each_projection;

use crate::error::{Error, Result};
use crate::matrix::{numerical_rank, DataMatrix, SketchResult, DEFAULT_RANK_TOL};

/// Allowed deviation of a column norm from one for SRS inputs.
pub const UNIT_NORM_TOL: f64 = 1e-6;

pub(crate) fn check_sample_count(requested: usize, available: usize) -> Result<()> {
    if requested == 0 {
        return Err(Error::BadParams("sample count must be positive".into()));
    }
    if requested > available {
        return Err(Error::TooManySamples {
            requested,
            available,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Method {
    /// Spatial random sampling without replacement.
    Srs,
    /// Spatial random sampling with replacement.
    SrsRepl,
    /// Uniform index sampling without replacement.
    Ris,
    /// Uniform index sampling with replacement.
    RisRepl,
    Norm,
    Leverage,
    Volume,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Srs,
        Method::SrsRepl,
        Method::Ris,
        Method::RisRepl,
        Method::Norm,
        Method::Leverage,
        Method::Volume,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Srs => "srs",
            Method::SrsRepl => "srs_repl",
            Method::Ris => "ris",
            Method::RisRepl => "ris_repl",
            Method::Norm => "norm",
            Method::Leverage => "leverage",
            Method::Volume => "volume",
        }
    }

    pub fn with_replacement(self) -> bool {
        matches!(
            self,
            Method::SrsRepl | Method::RisRepl | Method::Norm | Method::Leverage
        )
    }

    pub fn needs_unit_columns(self) -> bool {
        matches!(self, Method::Srs | Method::SrsRepl)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown sampling method {s:?}")))
    }
}

/// A fully specified sampler invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerSpec {
    pub method: Method,
    pub n: usize,
    pub seed: u64,
    /// Number of right singular vectors for leverage sampling; defaults to
    /// the numerical rank of the data.
    pub leverage_k: Option<usize>,
    pub norm_convention: NormConvention,
}

impl SamplerSpec {
    pub fn new(method: Method, n: usize, seed: u64) -> Self {
        Self {
            method,
            n,
            seed,
            leverage_k: None,
            norm_convention: NormConvention::Squared,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn sample(&self, data: &DataMatrix) -> Result<SketchResult> {
        match self.method {
            Method::Srs => srs_without_replacement(data, self.n, self.seed),
            Method::SrsRepl => srs_with_replacement(data, self.n, self.seed),
            Method::Ris => ris(data, self.n, false, self.seed),
            Method::RisRepl => ris(data, self.n, true, self.seed),
            Method::Norm => norm_sampling(data, self.n, self.norm_convention, self.seed),
            Method::Leverage => {
                let k = match self.leverage_k {
                    Some(k) => k,
                    None => numerical_rank(data, DEFAULT_RANK_TOL),
                };
                leverage_sampling(data, self.n, k, self.seed)
            }
            Method::Volume => volume_sampling(data, self.n, self.seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_roundtrip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn spec_dispatch_records_metadata() {
        let x = DataMatrix::identity(4);
        for m in Method::ALL {
            let s = SamplerSpec::new(m, 3, 17).sample(&x).unwrap();
            assert_eq!(s.method, m.name());
            assert_eq!(s.seed, 17);
            assert_eq!(s.with_replacement, m.with_replacement());
            assert_eq!(s.columns.cols(), 3);
            for (i, &j) in s.indices.iter().enumerate() {
                assert_eq!(s.columns.column(i), x.column(j));
            }
        }
    }
}
