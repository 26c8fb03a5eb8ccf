//! Normalized link-quality scale.
//!
//! Consumer WiGig chipsets expose link quality as a dimensionless value on a
//! 0..10 scale rather than raw PHY metrics. All models in this crate work on
//! that scale; continuous values are used internally and quantized to the
//! integer steps the device API reports when a trace is rendered.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest value of the normalized quality scale.
pub const QUALITY_MAX: f64 = 10.0;

/// Normalized signal quality in `[0.0, 10.0]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignalQuality(f64);

impl SignalQuality {
    pub const ZERO: SignalQuality = SignalQuality(0.0);

    /// Builds a quality value, clamping into `[0, 10]`.
    pub fn clamped(value: f64) -> SignalQuality {
        SignalQuality(value.clamp(0.0, QUALITY_MAX))
    }

    /// Builds a quality value, rejecting out-of-range input.
    pub fn checked(value: f64) -> Result<SignalQuality> {
        if !(0.0..=QUALITY_MAX).contains(&value) {
            return Err(Error::QualityOutOfRange(value));
        }
        Ok(SignalQuality(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Rounds to the integer step the device API reports.
    pub fn quantize(self) -> u8 {
        self.0.round().clamp(0.0, QUALITY_MAX) as u8
    }
}

impl From<u8> for SignalQuality {
    fn from(q: u8) -> Self {
        SignalQuality::clamped(f64::from(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_into_scale() {
        assert_eq!(SignalQuality::clamped(-1.0).value(), 0.0);
        assert_eq!(SignalQuality::clamped(42.0).value(), 10.0);
        assert_eq!(SignalQuality::clamped(7.3).value(), 7.3);
    }

    #[test]
    fn checked_rejects_out_of_range() {
        assert!(SignalQuality::checked(10.1).is_err());
        assert!(SignalQuality::checked(-0.1).is_err());
        assert!(SignalQuality::checked(0.0).is_ok());
        assert!(SignalQuality::checked(10.0).is_ok());
    }

    #[test]
    fn quantizes_to_nearest_step() {
        assert_eq!(SignalQuality::clamped(8.5).quantize(), 9);
        assert_eq!(SignalQuality::clamped(8.49).quantize(), 8);
        assert_eq!(SignalQuality::clamped(0.2).quantize(), 0);
        assert_eq!(SignalQuality::clamped(10.0).quantize(), 10);
    }
}
