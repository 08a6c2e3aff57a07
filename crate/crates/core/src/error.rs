use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("cannot convert from `{from}` to `{to}`")]
    UnsupportedConversion {
        from: &'static str,
        to: &'static str,
    },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    /// A numerical procedure stopped before reaching its tolerance.
    /// `value` is the best estimate available.
    #[error(
        "no convergence: achieved error {achieved:e}, target {target:e} (best value {value:e})"
    )]
    NonConvergence {
        achieved: f64,
        target: f64,
        value: f64,
    },

    /// The requested time falls in the decade around τ where neither
    /// asymptotic diffusion law holds.
    #[error(
        "t = {t:e} s is within [0.1, 10] x tau = {tau:e} s; short-time form gives {short:e}, long-time form gives {long:e}"
    )]
    Crossover {
        t: f64,
        tau: f64,
        short: f64,
        long: f64,
    },

    #[error("unknown constraint id `{0}`")]
    UnknownConstraint(String),
}

pub(crate) fn positive(name: &'static str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, x: f64) -> Result<f64> {
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be non-negative and finite",
        })
    }
}
