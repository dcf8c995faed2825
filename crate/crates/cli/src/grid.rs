use std::fmt;
use std::str::FromStr;

/// Evenly spaced grid `start:stop:count`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + step * i as f64 })
            .collect()
    }

    /// Rejects grids leaving `[lo, hi]`.
    pub fn within(self, name: &str, lo: f64, hi: f64) -> Result<Self, String> {
        if self.start < lo || self.stop > hi {
            return Err(format!("{name}: values must lie in [{lo}, {hi}], got {self}"));
        }
        Ok(self)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected start:stop:count, got '{s}'"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        let start = num(a)?;
        let stop = num(b)?;
        let count = n.trim().parse::<usize>().map_err(|e| format!("count '{n}': {e}"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(format!("grid bounds must be finite, got '{s}'"));
        }
        if count < 2 {
            return Err(format!("grid needs at least 2 points, got {count}"));
        }
        if start > stop {
            return Err(format!("grid start {start} exceeds stop {stop}"));
        }
        Ok(Grid { start, stop, count })
    }
}
