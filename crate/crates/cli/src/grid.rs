//! Grid specifications: `start:stop:count:log|lin` or a comma list.

use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid grid `{spec}`: {reason}")]
pub struct GridError {
    pub spec: String,
    pub reason: &'static str,
}

/// A parsed grid, kept in the order it will be emitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl Grid {
    /// Short echo for output headers: the full list when short, otherwise
    /// first, last and count.
    pub fn describe(&self) -> String {
        let f = |x: f64| crate::record::format_f64(x);
        match self.0.as_slice() {
            pts if pts.len() <= 12 => pts.iter().map(|&x| f(x)).collect::<Vec<_>>().join(","),
            pts => format!(
                "{}..{} ({} points)",
                f(pts[0]),
                f(pts[pts.len() - 1]),
                pts.len()
            ),
        }
    }

    /// Checks that every point is strictly positive.
    pub fn positive(self, spec: &str) -> Result<Self, GridError> {
        if self.0.iter().all(|&x| x > 0.0) {
            Ok(self)
        } else {
            Err(GridError {
                spec: spec.to_string(),
                reason: "all points must be positive",
            })
        }
    }
}

impl FromStr for Grid {
    type Err = GridError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let err = |reason| GridError {
            spec: spec.to_string(),
            reason,
        };
        let num = |s: &str| -> Result<f64, GridError> {
            let x: f64 = s.trim().parse().map_err(|_| err("not a number"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(err("points must be finite"))
            }
        };
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            [single] => {
                let pts = single.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
                Ok(Grid(pts))
            }
            [start, stop, count, kind] => {
                let (start, stop) = (num(start)?, num(stop)?);
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| err("count must be a positive integer"))?;
                if n == 0 {
                    return Err(err("count must be a positive integer"));
                }
                let frac = |i: usize| {
                    if n == 1 {
                        0.0
                    } else {
                        i as f64 / (n - 1) as f64
                    }
                };
                let pts = match kind.trim() {
                    "lin" => (0..n).map(|i| start + (stop - start) * frac(i)).collect(),
                    "log" => {
                        if start <= 0.0 || stop <= 0.0 {
                            return Err(err("log grids need positive end points"));
                        }
                        let (a, b) = (start.ln(), stop.ln());
                        (0..n).map(|i| (a + (b - a) * frac(i)).exp()).collect()
                    }
                    _ => return Err(err("spacing must be `log` or `lin`")),
                };
                let mut pts: Vec<f64> = pts;
                // pin the end points against rounding in exp/ln
                pts[0] = start;
                if n > 1 {
                    pts[n - 1] = stop;
                }
                Ok(Grid(pts))
            }
            _ => Err(err("expected start:stop:count:log|lin or a comma list")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_ranges() {
        assert_eq!("0.5,1,1.5".parse::<Grid>().unwrap().0, vec![0.5, 1.0, 1.5]);
        assert_eq!("0:1:3:lin".parse::<Grid>().unwrap().0, vec![0.0, 0.5, 1.0]);
        let g = "1e-2:1e2:5:log".parse::<Grid>().unwrap().0;
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 1e-2);
        assert!((g[2] - 1.0).abs() < 1e-15);
        assert_eq!(g[4], 1e2);
        assert_eq!("2:3:1:lin".parse::<Grid>().unwrap().0, vec![2.0]);
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad in [
            "",
            "a,b",
            "1:2:0:lin",
            "1:2:3",
            "0:1:3:log",
            "1:2:3:cubic",
            "1,nan",
            "1:inf:2:lin",
        ] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
        assert!("0,1".parse::<Grid>().unwrap().positive("0,1").is_err());
    }
}
