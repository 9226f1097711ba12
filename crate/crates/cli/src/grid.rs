//! `start:end:count` grids, inclusive of both ends.

use std::fmt;
use std::str::FromStr;

use solnoon_core::numerics::linspace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.count).unwrap_or_default()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("expected start:end:count, got {s:?}"));
        };
        let start: f64 = a
            .trim()
            .parse()
            .map_err(|_| format!("bad grid start {a:?}"))?;
        let end: f64 = b
            .trim()
            .parse()
            .map_err(|_| format!("bad grid end {b:?}"))?;
        let count: usize = c
            .trim()
            .parse()
            .map_err(|_| format!("bad grid count {c:?}"))?;
        if !(start.is_finite() && end.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        Ok(Self { start, end, count })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_expands() {
        let g: GridSpec = "0:1:101".parse().unwrap();
        let pts = g.points();
        assert_eq!((pts.len(), pts[0], pts[100]), (101, 0.0, 1.0));
        assert_eq!(g.to_string(), "0:1:101");
        let g: GridSpec = "-3.5:2:4".parse().unwrap();
        assert_eq!(g.points()[0], -3.5);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["0:1", "0:1:0", "a:1:3", "0:inf:3", "0:1:2:3", "0:1:-1"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }
}
