use std::cmp::Ordering;
use std::fmt;

/// A finite, non-negative filtration value compared exactly.
#[derive(Debug, Clone, Copy)]
pub struct Time(f64);

impl Time {
    pub const ZERO: Time = Time(0.0);

    /// Returns `None` for negative, infinite or NaN values.
    pub fn new(value: f64) -> Option<Time> {
        if value.is_finite() && value >= 0.0 {
            // folds -0.0 into 0.0 so equality and ordering agree
            Some(Time(value + 0.0))
        } else {
            None
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl PartialEq for Time {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Time {}

impl PartialOrd for Time {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Time {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Time {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Right endpoint of an interval: a finite time or never.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    At(Time),
    Never,
}

impl Death {
    pub fn is_finite(self) -> bool {
        matches!(self, Death::At(_))
    }

    pub fn time(self) -> Option<Time> {
        match self {
            Death::At(t) => Some(t),
            Death::Never => None,
        }
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::At(t) => t.fmt(f),
            Death::Never => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Death {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Death::Never);
        }
        let v: f64 = s.parse().map_err(|_| format!("invalid time `{s}`"))?;
        Time::new(v)
            .map(Death::At)
            .ok_or_else(|| format!("time `{s}` must be finite and non-negative"))
    }
}
