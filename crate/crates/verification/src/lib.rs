//! Bookkeeping for the acceptance suite: one outcome per criterion, printed
//! as a single `[PASS]` or `[FAIL]` line.

use std::f64::consts::TAU;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: String,
    pub title: String,
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(
        id: impl Into<String>,
        title: impl Into<String>,
        pass: bool,
        detail: impl Into<String>,
    ) -> Self {
        Outcome {
            id: id.into(),
            title: title.into(),
            pass,
            detail: detail.into(),
        }
    }

    /// `value <= limit`, with both in the detail.
    pub fn at_most(
        id: impl Into<String>,
        title: impl Into<String>,
        value: f64,
        limit: f64,
    ) -> Self {
        Self::new(
            id,
            title,
            value <= limit,
            format!("{value:.3e} <= {limit:.3e}"),
        )
    }

    pub fn errored(
        id: impl Into<String>,
        title: impl Into<String>,
        err: impl fmt::Display,
    ) -> Self {
        Self::new(id, title, false, format!("error: {err}"))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn record(&mut self, o: Outcome) {
        println!("{o}");
        self.outcomes.push(o);
    }

    pub fn failures(&self) -> Vec<&Outcome> {
        self.outcomes.iter().filter(|o| !o.pass).collect()
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

/// Largest gap between neighbouring values on the circle `[0, 2 pi)`,
/// including the wrap from the largest back to the smallest.
pub fn circular_max_gap(values: &[f64]) -> f64 {
    if values.is_empty() {
        return TAU;
    }
    let mut v: Vec<f64> = values.iter().map(|x| x.rem_euclid(TAU)).collect();
    v.sort_by(f64::total_cmp);
    let inner = v.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    inner.max(v[0] + TAU - v[v.len() - 1])
}

/// `max - min`.
pub fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
            (a.min(x), b.max(x))
        });
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_includes_wrap_around() {
        assert!((circular_max_gap(&[1.0, 2.0, 3.0]) - (TAU - 2.0)).abs() < 1e-15);
        let even: Vec<f64> = (0..8).map(|k| TAU * k as f64 / 8.0).collect();
        assert!((circular_max_gap(&even) - TAU / 8.0).abs() < 1e-12);
        assert_eq!(circular_max_gap(&[]), TAU);
    }

    #[test]
    fn outcome_lines() {
        let o = Outcome::at_most("3", "dichotomy", 0.2, 0.5);
        assert_eq!(o.to_string(), "[PASS] 3 dichotomy: 2.000e-1 <= 5.000e-1");
        assert!(Outcome::errored("1", "x", "boom")
            .to_string()
            .starts_with("[FAIL] 1 x: error"));
    }
}
