//! Structural diagnostics on the zero set: gap statistics, Delone
//! verification, arithmetic-progression counting and decomposition, and an
//! empirical integer-relation probe.
//!
//! Everything here is a finite-window measurement. The probe in particular
//! is labeled honestly: failing to find an integer relation at a fixed
//! precision and coefficient bound is evidence of rational independence,
//! never a proof of it.

mod lll;

use crate::dirichlet::ZeroList;
use crate::measure::CrystallineMeasure;
use serde::Serialize;
use thiserror::Error;

/// Two atom positions match a progression slot within this.
pub const HIT_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("need at least two atoms, found {0}")]
    TooFewAtoms(usize),
    #[error("window length {0:.3} is shorter than 10 R = {1:.3}")]
    WindowTooShort(f64, f64),
    #[error("frequency ratios admit no rational reconstruction with denominators <= {0}")]
    NotPeriodic(u64),
    #[error("relation probe rejected its input: {0}")]
    InvalidProbe(&'static str),
    #[error("zero residual {0:.3e} exceeds the {1:.3e} required for the requested precision")]
    PrecisionUnattainable(f64, f64),
}

/// Consecutive-gap summary over a window.
#[derive(Clone, Debug, Serialize)]
pub struct GapStats {
    pub min_gap: f64,
    pub max_gap: f64,
    pub count: usize,
    pub window: (f64, f64),
}

/// Gap statistics of a measure's atom positions.
pub fn gap_stats(measure: &CrystallineMeasure) -> Result<GapStats, AnalysisError> {
    let positions: Vec<f64> = measure.atoms().map(|(g, _)| g).collect();
    gap_stats_of(&positions, measure.window())
}

/// Gap statistics of any strictly increasing position list (translation
/// invariant by construction).
pub fn gap_stats_of(positions: &[f64], window: (f64, f64)) -> Result<GapStats, AnalysisError> {
    if positions.len() < 2 {
        return Err(AnalysisError::TooFewAtoms(positions.len()));
    }
    let mut min_gap = f64::INFINITY;
    let mut max_gap = 0.0f64;
    for w in positions.windows(2) {
        let gap = w[1] - w[0];
        min_gap = min_gap.min(gap);
        max_gap = max_gap.max(gap);
    }
    Ok(GapStats {
        min_gap,
        max_gap,
        count: positions.len(),
        window,
    })
}

/// Outcome of the two Delone conditions on a window.
#[derive(Clone, Debug, Serialize)]
pub struct DeloneReport {
    pub r: f64,
    pub big_r: f64,
    pub min_gap: f64,
    /// Longest atom-free stretch, boundary margins included.
    pub widest_hole: f64,
    /// min_gap >= r (uniform discreteness).
    pub separated: bool,
    /// Every closed interval of length big_r inside the window has an atom.
    pub dense: bool,
    pub pass: bool,
}

/// Check uniform discreteness at radius `r` and relative density at radius
/// `big_r`. The window must be at least 10 big_r long for the density
/// statement to mean anything.
pub fn delone_check(
    measure: &CrystallineMeasure,
    r: f64,
    big_r: f64,
) -> Result<DeloneReport, AnalysisError> {
    let (lo, hi) = measure.window();
    if hi - lo < 10.0 * big_r {
        return Err(AnalysisError::WindowTooShort(hi - lo, 10.0 * big_r));
    }
    let positions: Vec<f64> = measure.atoms().map(|(g, _)| g).collect();
    if positions.len() < 2 {
        return Err(AnalysisError::TooFewAtoms(positions.len()));
    }
    let stats = gap_stats_of(&positions, (lo, hi))?;
    let mut widest_hole = (positions[0] - lo).max(hi - positions[positions.len() - 1]);
    widest_hole = widest_hole.max(stats.max_gap);
    let separated = stats.min_gap >= r;
    let dense = widest_hole <= big_r;
    Ok(DeloneReport {
        r,
        big_r,
        min_gap: stats.min_gap,
        widest_hole,
        separated,
        dense,
        pass: separated && dense,
    })
}

/// Atoms of a measure lying on the progression `{a + n d}`.
#[derive(Clone, Debug, Serialize)]
pub struct ProgressionHits {
    pub offset: f64,
    pub step: f64,
    /// Total number of atoms within `HIT_TOL` of a progression slot.
    pub count: usize,
    /// The first matches as `(n, position)`, capped at the requested limit.
    pub hits: Vec<(i64, f64)>,
    pub truncated: bool,
}

/// Count atoms meeting the arithmetic progression `a + n d` (`d > 0`).
pub fn progression_intersection(
    measure: &CrystallineMeasure,
    a: f64,
    d: f64,
    limit: usize,
) -> ProgressionHits {
    let mut hits = Vec::new();
    let mut count = 0usize;
    for (g, _) in measure.atoms() {
        let n = ((g - a) / d).round();
        if (g - (a + n * d)).abs() < HIT_TOL {
            count += 1;
            if hits.len() < limit {
                hits.push((n as i64, g));
            }
        }
    }
    ProgressionHits {
        offset: a,
        step: d,
        count,
        hits,
        truncated: count > limit,
    }
}

/// Exact decomposition of a periodic zero set into arithmetic progressions.
#[derive(Clone, Debug, Serialize)]
pub struct ProgressionDecomposition {
    /// Common period reconstructed from the frequency ratios.
    pub period: f64,
    /// Reduced denominators of xi_j / xi_1.
    pub denominators: Vec<u64>,
    /// One offset in [0, period) per progression.
    pub offsets: Vec<f64>,
    /// Atoms matched to some progression slot.
    pub matched: usize,
    /// Atom positions matching no progression (empty for a true comb).
    pub leftover: Vec<f64>,
}

/// Reconstruct `xi_j / xi_1` as reduced fractions by continued-fraction
/// expansion (denominators up to `max_den`, accuracy 1e-9 / q^2), derive
/// the common period `T = (2 pi / xi_1) lcm(q_j)`, and sort every atom into
/// residue classes mod T. Fails with `NotPeriodic` when some ratio has no
/// admissible rational reconstruction — for genuinely irrational ratios the
/// zero set is not a finite union of progressions.
pub fn progression_decompose(
    measure: &CrystallineMeasure,
    max_den: u64,
) -> Result<ProgressionDecomposition, AnalysisError> {
    let xi = measure.freq().as_slice();
    let mut lcm_q = 1u64;
    let mut denominators = Vec::with_capacity(xi.len());
    for &x in xi {
        let ratio = x / xi[0];
        let (_, q) =
            rational_reconstruct(ratio, max_den).ok_or(AnalysisError::NotPeriodic(max_den))?;
        denominators.push(q);
        lcm_q = lcm(lcm_q, q);
    }
    let period = std::f64::consts::TAU / xi[0] * lcm_q as f64;

    // Cluster residues mod T on the circle. rem_euclid can return -0.0;
    // adding 0.0 normalizes the sign for display and sorting.
    let mut residues: Vec<f64> = measure
        .atoms()
        .map(|(g, _)| g.rem_euclid(period) + 0.0)
        .collect();
    residues.sort_by(f64::total_cmp);
    let mut offsets: Vec<f64> = Vec::new();
    for &r in &residues {
        if offsets.last().is_some_and(|o| (r - o).abs() < HIT_TOL) {
            continue;
        }
        offsets.push(r);
    }
    // A cluster straddling the wrap point appears at both ends.
    if offsets.len() >= 2 {
        let (first, last) = (offsets[0], *offsets.last().unwrap());
        if first + period - last < HIT_TOL {
            offsets.pop();
        }
    }

    let mut matched = 0usize;
    let mut leftover = Vec::new();
    for (g, _) in measure.atoms() {
        let r = g.rem_euclid(period);
        let hit = offsets.iter().any(|o| {
            let d = (r - o).abs();
            d < HIT_TOL || (period - d) < HIT_TOL
        });
        if hit {
            matched += 1;
        } else {
            leftover.push(g);
        }
    }
    Ok(ProgressionDecomposition {
        period,
        denominators,
        offsets,
        matched,
        leftover,
    })
}

/// Best rational p/q approximation with q <= max_den and
/// |x - p/q| < 1e-9 / q^2, via the continued-fraction convergents.
fn rational_reconstruct(x: f64, max_den: u64) -> Option<(i64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0u64, x.floor() as i64, 1u64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let err = x - p1 as f64 / q1 as f64;
        if err.abs() < 1e-9 / (q1 as f64 * q1 as f64) {
            return Some((p1, q1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let next = 1.0 / frac;
        let a = next.floor();
        frac = next - a;
        let p2 = a as i64 * p1 + p0;
        let q2 = a as u64 * q1 + q0;
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    None
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    a / gcd(a, b) * b
}

/// Result of one integer-relation search.
#[derive(Clone, Debug, Serialize)]
pub struct RelationProbe {
    /// The real values tested.
    pub vector: Vec<f64>,
    /// Decimal digits used for the lattice scale.
    pub precision: u32,
    /// Max-norm bound on accepted coefficient vectors.
    pub max_coeff: i64,
    /// An integer q with |q . vector| tiny, if one was accepted.
    pub found: Option<Vec<i64>>,
    /// |q . vector| for the accepted relation.
    pub residual: Option<f64>,
}

/// Search for a small integer relation `q . values ~ 0` by reducing the
/// standard relation lattice `(e_i | round(v_i 10^precision))`.
///
/// A candidate row is accepted only when it clears two gates: the
/// norm-relative bound `|q . v| < 10^{2-precision} |q|_2`, and an absolute
/// significance gate `|q . v| < 10^{-precision}`. The second is essential:
/// for generic (relation-free) inputs, reduction still produces rows whose
/// residual is near the lattice quantization scale, and those pass the
/// relative bound alone with moderate |q|. Residuals are always re-checked
/// against the original f64 values, never read off the scaled lattice.
pub fn relation_probe(
    values: &[f64],
    precision: u32,
    max_coeff: i64,
) -> Result<RelationProbe, AnalysisError> {
    if values.len() < 2 || values.len() > 12 {
        return Err(AnalysisError::InvalidProbe("need 2..=12 values"));
    }
    if precision == 0 || precision > 14 {
        return Err(AnalysisError::InvalidProbe(
            "precision must be 1..=14 (f64 limit)",
        ));
    }
    if max_coeff <= 0 {
        return Err(AnalysisError::InvalidProbe("max_coeff must be positive"));
    }
    let n = values.len();
    let scale = 10f64.powi(precision as i32);
    let mut basis: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row = vec![0i128; n + 1];
            row[i] = 1;
            row[n] = (values[i] * scale).round() as i128;
            row
        })
        .collect();
    lll::lll_reduce(&mut basis);

    let relative_gate = 10f64.powi(2 - precision as i32);
    let absolute_gate = 10f64.powi(-(precision as i32));
    let mut best: Option<(Vec<i64>, f64)> = None;
    for row in &basis {
        let q: Vec<i64> = row[..n].iter().map(|x| *x as i64).collect();
        if q.iter().all(|x| *x == 0) {
            continue;
        }
        if q.iter().map(|x| x.abs()).max().unwrap() > max_coeff {
            continue;
        }
        let residual: f64 = q
            .iter()
            .zip(values)
            .map(|(c, v)| *c as f64 * v)
            .sum::<f64>()
            .abs();
        let norm2: f64 = q.iter().map(|x| (*x as f64).powi(2)).sum::<f64>().sqrt();
        if residual < relative_gate * norm2 && residual < absolute_gate {
            match &best {
                Some((_, r)) if *r <= residual => {}
                _ => best = Some((q, residual)),
            }
        }
    }
    let (found, residual) = match best {
        Some((q, r)) => (Some(q), Some(r)),
        None => (None, None),
    };
    Ok(RelationProbe {
        vector: values.to_vec(),
        precision,
        max_coeff,
        found,
        residual,
    })
}

/// Run the relation probe on the first `count` positive zeros of a list.
/// Zero locations must carry residuals below both 1e-12 and
/// `10^{-precision}`; probing at a precision the zeros cannot support is
/// refused rather than silently answered.
pub fn relation_probe_from_zeros(
    zeros: &ZeroList,
    count: usize,
    precision: u32,
    max_coeff: i64,
) -> Result<RelationProbe, AnalysisError> {
    let mut values = Vec::with_capacity(count);
    let threshold = residual_requirement(precision);
    for ((g, _, r), _) in zeros.iter().filter(|(g, _, _)| *g > HIT_TOL).zip(0..count) {
        if r >= threshold {
            return Err(AnalysisError::PrecisionUnattainable(r, threshold));
        }
        values.push(g);
    }
    if values.len() < count {
        return Err(AnalysisError::InvalidProbe(
            "fewer positive zeros than requested",
        ));
    }
    relation_probe(&values, precision, max_coeff)
}

fn residual_requirement(precision: u32) -> f64 {
    (1e-12f64).min(10f64.powi(-(precision as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::dirichlet::FrequencyVec;
    use crate::measure::build_measure;

    #[test]
    fn poisson_gaps_are_one_period_wide() {
        let (pair, xi) = builtins::poisson();
        let m = build_measure(&pair, &xi, 100.0).unwrap();
        let stats = gap_stats(&m).unwrap();
        let tau = std::f64::consts::TAU;
        assert!((stats.min_gap - tau).abs() < 1e-9);
        assert!((stats.max_gap - tau).abs() < 1e-9);
    }

    #[test]
    fn gap_stats_ignore_translation() {
        let a = [0.0, 1.0, 2.5, 7.0];
        let b: Vec<f64> = a.iter().map(|x| x + 1234.5).collect();
        let sa = gap_stats_of(&a, (0.0, 7.0)).unwrap();
        let sb = gap_stats_of(&b, (1234.5, 1241.5)).unwrap();
        assert_eq!(sa.min_gap, sb.min_gap);
        assert_eq!(sa.max_gap, sb.max_gap);
        assert!(gap_stats_of(&[1.0], (0.0, 2.0)).is_err());
    }

    #[test]
    fn lasso_window_is_delone_at_the_interval_bound() {
        let (pair, xi) = builtins::lasso();
        let m = build_measure(&pair, &xi, 200.0).unwrap();
        let big_r = std::f64::consts::TAU / (0.5 + std::f64::consts::SQRT_2);
        let report = delone_check(&m, 0.01, big_r).unwrap();
        assert!(report.separated, "min gap {}", report.min_gap);
        assert!(report.dense, "widest hole {}", report.widest_hole);
        assert!(report.pass);
        // Monotonicity: shrinking r and growing R keeps it true.
        for (r, big) in [(0.005, big_r), (0.01, big_r * 2.0), (0.001, big_r * 4.0)] {
            assert!(delone_check(&m, r, big).unwrap().pass);
        }
        // r above the true minimal gap must fail.
        let stats = gap_stats(&m).unwrap();
        let report = delone_check(&m, stats.min_gap * 1.01, big_r).unwrap();
        assert!(!report.pass);
        // Too short a window for the density claim is refused.
        assert!(matches!(
            delone_check(&m, 0.01, 100.0),
            Err(AnalysisError::WindowTooShort(_, _))
        ));
    }

    #[test]
    fn every_poisson_atom_lies_on_the_lattice_progression() {
        let (pair, xi) = builtins::poisson();
        let m = build_measure(&pair, &xi, 100.0).unwrap();
        let hits = progression_intersection(&m, 0.0, std::f64::consts::TAU, 8);
        assert_eq!(hits.count, m.len());
        assert!(hits.truncated);
        assert_eq!(hits.hits.len(), 8);
    }

    #[test]
    fn irrational_lasso_progression_hits_thin_out() {
        let (pair, xi) = builtins::lasso();
        let m_small = build_measure(&pair, &xi, 40.0).unwrap();
        let m_large = build_measure(&pair, &xi, 120.0).unwrap();
        let gamma1 = m_small
            .atoms()
            .map(|(g, _)| g)
            .find(|g| *g > HIT_TOL)
            .unwrap();
        let small = progression_intersection(&m_small, 0.0, gamma1, 1000);
        let large = progression_intersection(&m_large, 0.0, gamma1, 1000);
        let density_small = small.count as f64 / 80.0;
        let density_large = large.count as f64 / 240.0;
        assert!(density_large <= density_small + 1e-12);
    }

    #[test]
    fn rational_frequencies_decompose_into_four_progressions() {
        let (pair, _) = builtins::lasso();
        let xi = FrequencyVec::new(vec![1.0, 0.5]).unwrap();
        let m = build_measure(&pair, &xi, 200.0).unwrap();
        let dec = progression_decompose(&m, 1000).unwrap();
        let tau = std::f64::consts::TAU;
        assert!((dec.period - 2.0 * tau).abs() < 1e-9, "period {}", dec.period);
        assert_eq!(dec.offsets.len(), 4, "offsets {:?}", dec.offsets);
        assert!(dec.leftover.is_empty());
        assert_eq!(dec.matched, m.len());
    }

    #[test]
    fn irrational_frequencies_are_not_periodic() {
        let (pair, xi) = builtins::lasso();
        let m = build_measure(&pair, &xi, 50.0).unwrap();
        assert!(matches!(
            progression_decompose(&m, 1000),
            Err(AnalysisError::NotPeriodic(1000))
        ));
    }

    #[test]
    fn trivial_relation_is_found() {
        let probe = relation_probe(&[1.0, 2.0], 10, 100).unwrap();
        let q = probe.found.expect("relation");
        assert_eq!(q.len(), 2);
        assert_eq!(q[0] + 2 * q[1], 0);
        assert!(probe.residual.unwrap() < 1e-12);
    }

    #[test]
    fn planted_three_term_relation_is_found() {
        let v = [1.0, std::f64::consts::SQRT_2, 1.0 + std::f64::consts::SQRT_2];
        let probe = relation_probe(&v, 10, 100).unwrap();
        let q = probe.found.expect("relation");
        let dot: f64 = q.iter().zip(&v).map(|(c, x)| *c as f64 * x).sum();
        assert!(dot.abs() < 1e-10);
        assert!(q.iter().any(|c| *c != 0));
    }

    #[test]
    fn generic_irrational_values_yield_no_relation() {
        let v = [1.0, std::f64::consts::SQRT_2];
        let probe = relation_probe(&v, 10, 1000).unwrap();
        assert!(probe.found.is_none(), "spurious {:?}", probe.found);
    }

    #[test]
    fn probe_input_validation() {
        assert!(matches!(
            relation_probe(&[1.0], 10, 10),
            Err(AnalysisError::InvalidProbe(_))
        ));
        assert!(matches!(
            relation_probe(&[1.0, 2.0], 15, 10),
            Err(AnalysisError::InvalidProbe(_))
        ));
        assert_eq!(residual_requirement(10), 1e-12);
        assert_eq!(residual_requirement(14), 1e-14);
    }

    #[test]
    fn zeros_feed_the_probe_only_when_sharp_enough() {
        let (pair, _) = builtins::lasso();
        let xi = FrequencyVec::new(vec![1.0, 0.5]).unwrap();
        let m = build_measure(&pair, &xi, 100.0).unwrap();
        let probe = relation_probe_from_zeros(m.zeros(), 6, 10, 100).unwrap();
        let q = probe.found.expect("periodic zeros admit a relation");
        assert!(q.iter().map(|x| x.abs()).max().unwrap() <= 100);
        // Asking for more positive zeros than the window holds is refused.
        let small = build_measure(&pair, &xi, 5.0).unwrap();
        assert!(matches!(
            relation_probe_from_zeros(small.zeros(), 50, 10, 100),
            Err(AnalysisError::InvalidProbe(_))
        ));
    }
}
