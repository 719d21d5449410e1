use serde::Serialize;

use super::{InfiniteError, LineFamily};

/// Compensated (Neumaier) summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Tail diagnostics for a positive series `Σ_{k ≥ 1} t_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailTest {
    /// Largest ratio `t_{k+1}/t_k` over the tail window.
    pub max_ratio: f64,
    /// Local decay exponent `p` fitted to `t_k ~ k^{−p}` across the window.
    pub exponent: f64,
    pub verdict: Verdict,
}

// A power law k^{−p} has ratios 1 − p/k, so the geometric margin must stay
// well clear of 1 for any realistic tail index.
const RATIO_MARGIN: f64 = 0.05;
const CONVERGENT_EXPONENT: f64 = 1.1;
// Slack for the exact 1/k case, whose fitted exponent is 1 up to rounding.
const DIVERGENT_EXPONENT: f64 = 1.0 + 1e-9;

/// Classifies from the last `window` terms: ratios bounded below `1 − ε` is
/// geometric decay (convergent); a decay exponent of at most 1 means terms are
/// not smaller than `const/k` (divergent); an exponent of at least 1.1 is
/// convergent; anything between is inconclusive. Terms that underflow to 0
/// count as convergent.
fn classify(terms: &[f64], window: usize) -> TailTest {
    let k = terms.len();
    let window = window.clamp(1, k.saturating_sub(1).max(1));
    let tail = &terms[k - window - 1..];
    if tail.contains(&0.0) {
        return TailTest {
            max_ratio: 0.0,
            exponent: f64::INFINITY,
            verdict: Verdict::Convergent,
        };
    }
    let max_ratio = tail
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max);
    let (k_hi, k_lo) = (k as f64, (k - window) as f64);
    let exponent = (tail[0] / tail[window]).ln() / (k_hi / k_lo).ln();
    let verdict = if max_ratio <= 1.0 - RATIO_MARGIN || exponent >= CONVERGENT_EXPONENT {
        Verdict::Convergent
    } else if exponent <= DIVERGENT_EXPONENT {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    TailTest {
        max_ratio,
        exponent,
        verdict,
    }
}

/// Partial sums at 10, 100, … and at the last index.
fn checkpoints(partial: impl Fn(usize) -> f64, n_max: usize) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut p = 10;
    while p < n_max {
        out.push((p, partial(p)));
        p *= 10;
    }
    out.push((n_max, partial(n_max)));
    out
}

fn partial_sums(terms: &[f64]) -> Vec<f64> {
    let mut acc = NeumaierSum::new();
    terms
        .iter()
        .map(|&t| {
            acc.add(t);
            acc.value()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KerDeltaReport {
    pub family: String,
    pub n_max: usize,
    /// `(N, S_N)` with `S_N = Σ_{n=−N}^{N−1} 1/c(n, n+1)`.
    pub partial_sums: Vec<(usize, f64)>,
    pub tail: TailTest,
    pub verdict: Verdict,
    /// Whether the verdict says `ker δ ≠ {0}`, i.e. 0 is an eigenvalue of
    /// `Δ₁`; `None` when inconclusive.
    pub zero_is_eigenvalue: Option<bool>,
}

/// Summability test for `Σ_e 1/c(e)` on a chord-free family. The `k`-th term
/// pairs the two edges at distance `k` from the origin,
/// `1/c(k−1, k) + 1/c(−k, −k+1)`.
pub fn ker_delta_criterion(fam: &LineFamily, n_max: usize, window: usize) -> Result<KerDeltaReport, InfiniteError> {
    if fam.has_chords() {
        return Err(InfiniteError::ChordsUnsupported);
    }
    if n_max < 3 {
        return Err(InfiniteError::WindowTooSmall { radius: n_max, min: 3 });
    }
    let mut terms = Vec::with_capacity(n_max);
    for k in 1..=n_max as i64 {
        let inv = |n: i64| {
            let c = fam.conductance_unchecked(n);
            if c == f64::INFINITY {
                Ok(0.0)
            } else if c > 0.0 && c.is_finite() {
                Ok(1.0 / c)
            } else {
                fam.conductance(n).map(|c| 1.0 / c)
            }
        };
        terms.push(inv(k - 1)? + inv(-k)?);
    }
    let sums = partial_sums(&terms);
    let tail = classify(&terms, window);
    Ok(KerDeltaReport {
        family: fam.name.clone(),
        n_max,
        partial_sums: checkpoints(|n| sums[n - 1], n_max),
        tail,
        verdict: tail.verdict,
        zero_is_eigenvalue: match tail.verdict {
            Verdict::Convergent => Some(true),
            Verdict::Divergent => Some(false),
            Verdict::Inconclusive => None,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BgjReport {
    pub family: String,
    pub n_max: usize,
    /// `(N, Σ_{n=2}^{N} 1/√(a_n⁺ + a_{n+1}⁻))`.
    pub partial_sums: Vec<(usize, f64)>,
    /// Increase of the partial sum over each decade `(N/10, N]`.
    pub decade_increments: Vec<(usize, f64)>,
    pub tail: TailTest,
    pub verdict: Verdict,
}

/// Series `Σ_{n ≥ 2} 1/√(a_n⁺ + a_{n+1}⁻)` over the shells `S_n = {n, −n}`,
/// where `a_n⁺` is the largest weighted conductance from a vertex of `S_n`
/// out to `S_{n+1}` and `a_n⁻` the largest back to `S_{n−1}`. Chords stay
/// inside a shell and do not contribute. Divergence is the χ-completeness
/// criterion.
pub fn bgj_series(fam: &LineFamily, n_max: usize, window: usize) -> Result<BgjReport, InfiniteError> {
    if n_max < 12 {
        return Err(InfiniteError::WindowTooSmall { radius: n_max, min: 12 });
    }
    let out = |n: i64| -> Result<f64, InfiniteError> {
        Ok((fam.conductance(n)? / fam.mass(n)?).max(fam.conductance(-n - 1)? / fam.mass(-n)?))
    };
    let back = |n: i64| -> Result<f64, InfiniteError> {
        Ok((fam.conductance(n - 1)? / fam.mass(n)?).max(fam.conductance(-n)? / fam.mass(-n)?))
    };
    let mut terms = Vec::with_capacity(n_max - 1);
    for n in 2..=n_max as i64 {
        terms.push(1.0 / (out(n)? + back(n + 1)?).sqrt());
    }
    let sums = partial_sums(&terms);
    // terms[i] is the n = i + 2 term
    let at = |n: usize| sums[n - 2];
    let partial = checkpoints(at, n_max);
    let decade_increments = partial
        .windows(2)
        .filter(|w| w[1].0 == 10 * w[0].0)
        .map(|w| (w[1].0, w[1].1 - w[0].1))
        .collect();
    let tail = classify(&terms, window);
    Ok(BgjReport {
        family: fam.name.clone(),
        n_max,
        partial_sums: partial,
        decade_increments,
        tail,
        verdict: tail.verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = NeumaierSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn classifier_on_model_series() {
        let geometric: Vec<f64> = (0..200).map(|k| 0.9f64.powi(k)).collect();
        assert_eq!(classify(&geometric, 50).verdict, Verdict::Convergent);
        let harmonic: Vec<f64> = (1..=1000).map(|k| 1.0 / k as f64).collect();
        assert_eq!(classify(&harmonic, 100).verdict, Verdict::Divergent);
        let square: Vec<f64> = (1..=1000).map(|k| 1.0 / (k * k) as f64).collect();
        assert_eq!(classify(&square, 100).verdict, Verdict::Convergent);
        let borderline: Vec<f64> = (1..=1000).map(|k| (k as f64).powf(-1.05)).collect();
        assert_eq!(classify(&borderline, 100).verdict, Verdict::Inconclusive);
        let mut underflow = square.clone();
        *underflow.last_mut().unwrap() = 0.0;
        assert_eq!(classify(&underflow, 100).verdict, Verdict::Convergent);
    }

    #[test]
    fn chords_are_rejected() {
        let g2 = LineFamily::builtin("G2", None).unwrap();
        assert!(matches!(
            ker_delta_criterion(&g2, 100, 10),
            Err(InfiniteError::ChordsUnsupported)
        ));
    }

    #[test]
    fn checkpoints_are_decades_then_end() {
        let z = LineFamily::builtin("simple-Z", None).unwrap();
        let r = ker_delta_criterion(&z, 2500, 100).unwrap();
        let ns: Vec<usize> = r.partial_sums.iter().map(|p| p.0).collect();
        assert_eq!(ns, vec![10, 100, 1000, 2500]);
        assert_eq!(r.partial_sums[3].1, 5000.0);
    }
}
