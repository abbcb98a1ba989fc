//! Achievable-rate formulas for the synchronization-error codes.

use serde::Serialize;

use crate::error::{Error, Result};

/// Fractions of the length consumed by errors (delta) and by the gap to
/// the erasure-code Singleton bound (epsilon).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundSpec {
    pub delta: f64,
    pub epsilon: f64,
}

impl BoundSpec {
    pub fn new(delta: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) || delta == 0.0 || !(0.0..1.0).contains(&epsilon) || epsilon == 0.0 {
            return Err(Error::InvalidInput(
                "delta and epsilon must lie strictly between 0 and 1".into(),
            ));
        }
        Ok(BoundSpec { delta, epsilon })
    }
}

/// Which code family the rate refers to.
#[derive(Debug, Clone, Copy)]
pub enum RateModel {
    /// Bursts of deletions only, bursts of length up to b.
    DeletionOnly { b: usize },
    /// Bursts plus any number of sticky insertions.
    WithSticky { b: usize },
    /// Extra read heads over the first of m segments; `r_db` is the
    /// asymptotic rate of the constrained code on that segment.
    ExtraHeads { m: usize, r_db: f64 },
}

/// Evaluate the achievable rate of the selected construction; pure
/// formula evaluation for reporting.
pub fn achievable_rate(spec: &BoundSpec, q: f64, model: RateModel) -> Result<f64> {
    if q < 2.0 {
        return Err(Error::InvalidInput("alphabet size must be at least 2".into()));
    }
    let payload = 1.0 - spec.delta - spec.epsilon;
    let rate = match model {
        RateModel::DeletionOnly { b } => (1.0 - ((b + 1) as f64).log(q)) * payload,
        RateModel::WithSticky { b } => (1.0 - ((b + 2) as f64).log(q)) * payload,
        RateModel::ExtraHeads { m, r_db } => {
            if m < 2 {
                return Err(Error::InvalidInput("extra-head layout needs m >= 2".into()));
            }
            let m = m as f64;
            (m - 1.0) / m * payload + r_db / m
        }
    };
    Ok(rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deletion_only_limit() {
        // as delta, epsilon -> 0 the rate approaches 1 - log_q(b+1)
        let spec = BoundSpec::new(1e-9, 1e-9).unwrap();
        let r = achievable_rate(&spec, 1024.0, RateModel::DeletionOnly { b: 3 }).unwrap();
        assert!((r - (1.0 - 4f64.log(1024.0))).abs() < 1e-6);
    }

    #[test]
    fn numeric_evaluation_cross_check() {
        let spec = BoundSpec::new(0.1, 0.01).unwrap();
        let q: f64 = 1024.0;
        let expect = (1.0 - (4.0f64.ln() / q.ln())) * (1.0 - 0.1 - 0.01);
        let r = achievable_rate(&spec, q, RateModel::DeletionOnly { b: 3 }).unwrap();
        assert!((r - expect).abs() < 1e-12);

        let with_sticky = achievable_rate(&spec, q, RateModel::WithSticky { b: 3 }).unwrap();
        assert!(with_sticky < r, "tolerating stickies costs rate");
    }

    #[test]
    fn extra_heads_beat_plain_whenever_the_segment_rate_exceeds_the_bound() {
        // with r_db = 0.7946 the extra-head rate exceeds 1 - delta exactly
        // when 1 - delta < 0.7946
        let r_db = 0.7946;
        for delta in [0.25, 0.3, 0.4] {
            let spec = BoundSpec::new(delta, 1e-9).unwrap();
            let rate =
                achievable_rate(&spec, 2.0, RateModel::ExtraHeads { m: 3, r_db }).unwrap();
            let plain = 1.0 - delta;
            if plain < r_db {
                assert!(rate > plain - 1e-6, "delta={delta}: {rate} vs {plain}");
            }
        }
        // and for small delta the plain bound wins
        let spec = BoundSpec::new(0.05, 1e-9).unwrap();
        let rate = achievable_rate(&spec, 2.0, RateModel::ExtraHeads { m: 3, r_db }).unwrap();
        assert!(rate < 1.0 - 0.05);
    }

    #[test]
    fn out_of_range_parameters() {
        assert!(BoundSpec::new(0.0, 0.5).is_err());
        assert!(BoundSpec::new(0.5, 1.0).is_err());
    }
}
