use nalgebra::DMatrix;
use serde::Serialize;

use crate::expr::Expr;
use crate::spectra::{eigenpairs, SpectraError};

use super::{InfiniteError, LineFamily, Truncation};

/// Window data for the Dirichlet problem: off-diagonal conductances, the
/// conductance from each window vertex to the outside, and masses.
struct Grounded {
    weights: DMatrix<f64>,
    ground: Vec<f64>,
    masses: Vec<f64>,
}

fn grounded(fam: &LineFamily, t: &Truncation) -> Result<Grounded, InfiniteError> {
    let n = t.graph.num_vertices();
    let r = t.radius as i64;
    let mut weights = DMatrix::zeros(n, n);
    for e in t.graph.edges() {
        weights[(e.tail, e.head)] += e.conductance;
        weights[(e.head, e.tail)] += e.conductance;
    }
    let mut ground = vec![0.0; n];
    // Line edges leaving the window; chords never leave it.
    ground[t.vertex(r)] += fam.conductance(r)?;
    ground[t.vertex(-r)] += fam.conductance(-r - 1)?;
    Ok(Grounded {
        weights,
        ground,
        masses: t.graph.masses().to_vec(),
    })
}

/// The compression of the family's `Δ₀` to functions supported in the
/// window, symmetrized as `M^{1/2} Δ₀ M^{−1/2}`. Its diagonal includes the
/// conductances of edges leaving the window.
pub fn dirichlet_operator(fam: &LineFamily, radius: usize) -> Result<DMatrix<f64>, InfiniteError> {
    let t = fam.truncate(radius)?;
    let g = grounded(fam, &t)?;
    let n = g.masses.len();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let row_sum: f64 = g.weights.row(i).sum() + g.ground[i];
        a[(i, i)] = row_sum / g.masses[i];
        for j in 0..n {
            if i != j && g.weights[(i, j)] != 0.0 {
                a[(i, j)] = -g.weights[(i, j)] / (g.masses[i] * g.masses[j]).sqrt();
            }
        }
    }
    Ok(a)
}

/// Green's matrix `L⁻¹` of the grounded Laplacian `L = D + G − W`.
///
/// The elimination only ever adds and divides positive numbers (pivots are
/// recomputed as row sums, never by subtraction), so every entry of the
/// result carries full relative accuracy regardless of how spread out the
/// conductances are.
fn green_matrix(g: &Grounded) -> DMatrix<f64> {
    let n = g.masses.len();
    let mut w = g.weights.clone();
    let mut ground = g.ground.clone();
    let mut pivot = vec![0.0; n];
    // factor[(i, k)] = w_ik / p_k for i > k, so that L = (I − F) D (I − F)ᵀ.
    let mut factor = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let p = ground[k] + (k + 1..n).map(|j| w[(k, j)]).sum::<f64>();
        pivot[k] = p;
        let neighbours: Vec<usize> = (k + 1..n).filter(|&i| w[(i, k)] > 0.0).collect();
        for &i in &neighbours {
            let wik = w[(i, k)];
            factor[(i, k)] = wik / p;
            ground[i] += wik * (ground[k] / p);
            for &j in &neighbours {
                if j != i {
                    w[(i, j)] += wik * (w[(k, j)] / p);
                }
            }
        }
    }
    // X = (I − F)⁻¹ is unit lower triangular with nonnegative entries.
    let mut x = DMatrix::<f64>::identity(n, n);
    for col in 0..n {
        for i in col + 1..n {
            let mut s = 0.0;
            for k in col..i {
                if factor[(i, k)] != 0.0 {
                    s += factor[(i, k)] * x[(k, col)];
                }
            }
            x[(i, col)] = s;
        }
    }
    // L⁻¹ = Xᵀ D⁻¹ X
    let mut green = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let start = a.max(b);
            let s: f64 = (start..n).map(|k| x[(k, a)] * x[(k, b)] / pivot[k]).sum();
            green[(a, b)] = s;
            green[(b, a)] = s;
        }
    }
    green
}

/// Smallest eigenvalue of the family's `Δ₀` over functions supported in the
/// window `{−N, …, N}`, i.e. the minimum Rayleigh quotient
/// `⟨Δ₀f, f⟩ / ⟨f, f⟩` over such `f`.
///
/// Computed as `1 / λ_max(M^{1/2} L⁻¹ M^{1/2})` from the grounded Green's
/// matrix, which stays accurate when conductances span many orders of
/// magnitude.
pub fn dirichlet_gap(fam: &LineFamily, radius: usize, tol: f64) -> Result<f64, InfiniteError> {
    if !(tol > 0.0) {
        return Err(SpectraError::BadTolerance(tol).into());
    }
    if radius < 2 {
        return Err(InfiniteError::WindowTooSmall { radius, min: 2 });
    }
    let t = fam.truncate(radius)?;
    let g = grounded(fam, &t)?;
    let mut s = green_matrix(&g);
    let n = g.masses.len();
    let root: Vec<f64> = g.masses.iter().map(|m| m.sqrt()).collect();
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] *= root[i] * root[j];
        }
    }
    let values = eigenpairs(&s)?.values;
    let top = *values.last().expect("window is nonempty");
    Ok(1.0 / top)
}

/// A checked instance of the `a²/4` spectral gap bound for families on `Z`
/// with unit masses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapCertificate {
    pub family: String,
    pub witness: String,
    pub radius: usize,
    /// Smallest increment `A(n,n+1) − A(n−1,n)` over `|n| ≤ N`.
    pub a: f64,
    pub argmin: i64,
    pub bound: f64,
    /// Largest `|A² − c| / c` seen on the window.
    pub max_witness_error: f64,
}

const WITNESS_RTOL: f64 = 1e-12;

/// Witness `A(n, n+1) = sign(n + 1/2)·α^{|n|/2}` for the exponential family.
pub fn exponential_witness(alpha: f64) -> Expr {
    Expr::parse_with("sign(n + 0.5) * alpha^(abs(n)/2)", &[("alpha", alpha)])
        .expect("witness parses")
}

/// Witness `A(n, n+1) = sign(n + 1/2)·√((n+1)²+1)` for `G1`.
pub fn g1_witness() -> Expr {
    Expr::parse("sign(n + 0.5) * sqrt((n+1)^2 + 1)").expect("witness parses")
}

/// Checks `A(n,n+1)² = c(n,n+1)` (relative 1e−12) and computes the smallest
/// increment `a = min A(n,n+1) − A(n−1,n)` over `|n| ≤ N`. The bound is
/// `a²/4`.
pub fn gap_certificate(fam: &LineFamily, witness: &Expr, radius: usize) -> Result<GapCertificate, InfiniteError> {
    if fam.has_chords() {
        return Err(InfiniteError::ChordsUnsupported);
    }
    let r = radius as i64;
    for n in -r..=r {
        let m = fam.mass(n)?;
        if m != 1.0 {
            return Err(InfiniteError::NonUnitMass { n, mass: m });
        }
    }
    let mut max_err: f64 = 0.0;
    for n in -r - 1..=r {
        let a = witness.eval(n);
        let c = fam.conductance(n)?;
        let err = (a * a - c).abs() / c;
        if !(err <= WITNESS_RTOL) {
            return Err(InfiniteError::WitnessMismatch { n, a_sq: a * a, c });
        }
        max_err = max_err.max(err);
    }
    let (mut a, mut argmin) = (f64::INFINITY, 0);
    for n in -r..=r {
        let inc = witness.eval(n) - witness.eval(n - 1);
        if inc < a {
            a = inc;
            argmin = n;
        }
    }
    if !(a > 0.0) {
        return Err(InfiniteError::NoPositiveGap { n: argmin, increment: a });
    }
    Ok(GapCertificate {
        family: fam.name.clone(),
        witness: witness.source().to_string(),
        radius,
        a,
        argmin,
        bound: a * a / 4.0,
        max_witness_error: max_err,
    })
}

/// `χ_n(x) = min(max(2 − |x|/(n+1), 0), 1)`: 1 on `|x| ≤ n+1`, 0 beyond
/// `2(n+1)`, linear between.
pub fn chi_cutoff(n: u64, x: i64) -> f64 {
    (2.0 - x.unsigned_abs() as f64 / (n + 1) as f64).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiRow {
    pub n: u64,
    /// `sup_x (1/m(x)) Σ_{e ∋ x} c(e) dχ_n(e)²` over the checked `x`.
    pub sup: f64,
    pub argmax: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiCertificate {
    pub family: String,
    pub rows: Vec<ChiRow>,
    /// Largest supremum over all checked `n`.
    pub constant: f64,
    /// `0 ≤ χ_n ≤ 1` and `χ_n = 1` on `|x| ≤ n`, at every checked point.
    pub cutoff_conditions_hold: bool,
    pub n_range: (u64, u64),
    /// `x` ranges over `|x| ≤ x_factor·(n+1)`.
    pub x_factor: u64,
}

/// Evaluates the gradient bound of the `χ_n` cutoffs for `n` in `n_range`
/// and `|x| ≤ x_factor·(n+1)`. Each edge at `x` is counted once.
pub fn chi_certificate(
    fam: &LineFamily,
    n_range: (u64, u64),
    x_factor: u64,
) -> Result<ChiCertificate, InfiniteError> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in n_range.0..=n_range.1 {
        let reach = (x_factor * (n + 1)) as i64;
        let (mut sup, mut argmax) = (0.0_f64, 0);
        for x in -reach..=reach {
            let chi = chi_cutoff(n, x);
            ok &= (0.0..=1.0).contains(&chi);
            if x.unsigned_abs() <= n {
                ok &= chi == 1.0;
            }
            let grad = |y: i64| chi_cutoff(n, y) - chi;
            let mut s = fam.conductance(x)? * grad(x + 1).powi(2)
                + fam.conductance(x - 1)? * grad(x - 1).powi(2);
            if x != 0 {
                if let Some(c) = fam.chord_conductance(x.abs()) {
                    s += c? * grad(-x).powi(2);
                }
            }
            let q = s / fam.mass(x)?;
            if q > sup {
                sup = q;
                argmax = x;
            }
        }
        rows.push(ChiRow { n, sup, argmax });
    }
    let constant = rows.iter().map(|r| r.sup).fold(0.0, f64::max);
    Ok(ChiCertificate {
        family: fam.name.clone(),
        rows,
        constant,
        cutoff_conditions_hold: ok,
        n_range,
        x_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::eigenpairs;

    fn fam(name: &str) -> LineFamily {
        LineFamily::builtin(name, None).unwrap()
    }

    #[test]
    fn green_route_agrees_with_direct_eigensolve() {
        for name in ["G1", "simple-Z", "G2"] {
            let f = fam(name);
            for n in [2, 5, 12] {
                let direct = eigenpairs(&dirichlet_operator(&f, n).unwrap()).unwrap().values[0];
                let green = dirichlet_gap(&f, n, 1e-8).unwrap();
                assert!((direct - green).abs() <= 1e-10 * direct.max(1.0), "{name} {n}: {direct} vs {green}");
            }
        }
    }

    #[test]
    fn simple_z_gap_matches_path_dirichlet_formula() {
        // Dirichlet path with 2N+1 interior vertices: 2 − 2cos(π/(2N+2)).
        let z = fam("simple-Z");
        for n in [3usize, 10, 40] {
            let expect = 2.0 - 2.0 * (std::f64::consts::PI / (2 * n + 2) as f64).cos();
            let got = dirichlet_gap(&z, n, 1e-8).unwrap();
            assert!((got - expect).abs() < 1e-12 * expect.max(1e-3), "{n}: {got} vs {expect}");
        }
    }

    #[test]
    fn radius_one_is_rejected() {
        assert!(matches!(
            dirichlet_gap(&fam("G1"), 1, 1e-8),
            Err(InfiniteError::WindowTooSmall { min: 2, .. })
        ));
    }

    #[test]
    fn certificates() {
        let z = fam("simple-Z");
        let sign = Expr::parse("sign(n + 0.5)").unwrap();
        assert!(matches!(
            gap_certificate(&z, &sign, 10),
            Err(InfiniteError::NoPositiveGap { .. })
        ));
        let wrong = Expr::parse("2").unwrap();
        assert!(matches!(
            gap_certificate(&z, &wrong, 10),
            Err(InfiniteError::WitnessMismatch { .. })
        ));
        let cert = gap_certificate(&fam("G1"), &g1_witness(), 100).unwrap();
        assert!((cert.a - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert_eq!(cert.argmin, -1);
        assert!(matches!(
            gap_certificate(&fam("G2"), &g1_witness(), 5),
            Err(InfiniteError::ChordsUnsupported)
        ));
    }

    #[test]
    fn chi_for_simple_z_is_two_over_square() {
        let cert = chi_certificate(&fam("simple-Z"), (1, 12), 4).unwrap();
        assert!(cert.cutoff_conditions_hold);
        for row in &cert.rows {
            let bound = 2.0 / ((row.n + 1) * (row.n + 1)) as f64;
            assert!(row.sup <= bound + 1e-15, "{row:?}");
        }
        assert!(cert.constant <= 0.5);
    }
}
