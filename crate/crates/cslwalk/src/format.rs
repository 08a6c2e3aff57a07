//! Number formatting for CSV cells.

/// Significant digits used unless a command asks for paper rounding.
pub const DEFAULT_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Six significant digits.
    Full,
    /// One significant digit, as printed in the paper's tables.
    Paper,
}

impl Precision {
    pub fn digits(self) -> usize {
        match self {
            Precision::Full => DEFAULT_DIGITS,
            Precision::Paper => 1,
        }
    }

    pub fn sci(self, x: f64) -> String {
        sci(x, self.digits())
    }

    /// Value after rounding, for JSON output.
    pub fn round(self, x: f64) -> f64 {
        self.sci(x).parse().unwrap_or(x)
    }
}

/// Scientific notation with `digits` significant digits: `5.96238e-3`.
pub fn sci(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    format!("{:.*e}", digits - 1, x)
}

/// Like C's `%g`: fixed notation for moderate exponents, trailing zeros
/// removed.
pub fn general(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let s = sci(x, digits);
    let exp: i32 = s[s.find('e').unwrap() + 1..].parse().unwrap();
    if exp < -4 || exp >= digits as i32 {
        let (mant, e) = s.split_at(s.find('e').unwrap());
        return format!("{}{}", trim_zeros(mant), e);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
