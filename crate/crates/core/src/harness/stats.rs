use serde::Serialize;

/// Two-sided standard normal quantile for 99% coverage.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Observed successes out of a number of Bernoulli trials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: usize,
    pub trials: usize,
}

impl Proportion {
    pub fn new(successes: usize, trials: usize) -> Self {
        Proportion { successes, trials }
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// Binomial standard error of the observed rate.
    pub fn sigma(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Wilson score interval at quantile `z`.
    pub fn wilson(&self, z: f64) -> (f64, f64) {
        if self.trials == 0 {
            return (0.0, 1.0);
        }
        let n = self.trials as f64;
        let p = self.rate();
        let denom = 1.0 + z * z / n;
        let centre = (p + z * z / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
        ((centre - half).max(0.0), (centre + half).min(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_and_sigma() {
        let p = Proportion::new(50, 200);
        assert_eq!(p.rate(), 0.25);
        assert!((p.sigma() - (0.25f64 * 0.75 / 200.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn wilson_contains_rate_and_stays_in_unit_interval() {
        for (s, n) in [(0, 10), (10, 10), (3, 7), (499, 500)] {
            let p = Proportion::new(s, n);
            let (lo, hi) = p.wilson(Z_99);
            assert!(0.0 <= lo && lo <= p.rate() && p.rate() <= hi && hi <= 1.0);
        }
    }
}
