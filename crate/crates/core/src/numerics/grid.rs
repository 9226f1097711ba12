use crate::error::{Error, Result};

/// `count` evenly spaced points from `start` to `end`, both included.
/// The last point is `end` exactly.
pub fn linspace(start: f64, end: f64, count: usize) -> Result<Vec<f64>> {
    if !(start.is_finite() && end.is_finite()) {
        return Err(Error::InvalidParameter("grid bounds must be finite".into()));
    }
    match count {
        0 => Err(Error::InvalidParameter(
            "grid needs at least one point".into(),
        )),
        1 => Ok(vec![start]),
        _ => {
            let step = (end - start) / (count - 1) as f64;
            Ok((0..count)
                .map(|k| {
                    if k == count - 1 {
                        end
                    } else {
                        start + step * k as f64
                    }
                })
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = linspace(0.0, 1.0, 101).unwrap();
        assert_eq!((g.len(), g[0], g[100]), (101, 0.0, 1.0));
        assert_eq!(g[50], 0.5);
        assert_eq!(linspace(2.0, 3.0, 1).unwrap(), vec![2.0]);
        assert!(linspace(0.0, 1.0, 0).is_err());
        assert!(linspace(0.0, f64::NAN, 3).is_err());
    }
}
