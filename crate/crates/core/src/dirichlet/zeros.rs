//! Locating the imaginary-axis zeros of an exponential sum.
//!
//! The scan grid has spacing `2 pi / ((xi . ell) * oversample)`; since the
//! zero counting function of F grows like `(xi . ell) / (2 pi)` per unit,
//! the default oversample of 32 puts dozens of grid points between
//! consecutive zeros on average.
//!
//! Candidate generation depends on the coefficient symmetry. With a real
//! secular form g, candidates are sign-change brackets plus local minima of
//! |g| that dip below a scale-aware gate (the latter catch even-order zeros,
//! where g touches without crossing). Without it, candidates are local
//! minima of |F(i gamma)|. Brackets are closed by bisection on g followed
//! by a Newton cleanup on F; bare candidates go straight to damped Newton
//! and are dropped if they wander out of their grid cell or fail to reach
//! the residual target. Two candidates anchored more than 1e-6 apart that
//! polish into the same zero mean the grid missed structure between them;
//! that aborts the scan with `WindowTooCoarse` rather than reporting a
//! silently wrong list.
//!
//! Multiplicities come from the argument principle on a small circle around
//! each polished zero (they are 1 for all stable pairs in general position,
//! but products of pairs legitimately produce higher orders).

use super::{DirichletError, DirichletSeries};
use num_complex::Complex64;
use serde::Serialize;

/// Newton acceptance target, relative to the coefficient mass of the sum.
pub const NEWTON_TOL: f64 = 1e-12;
/// Reported zeros closer than this are considered one zero.
pub const DEDUP_TOL: f64 = 1e-8;
/// Distinct-candidate anchors further apart than this may not merge.
const COLLISION_ANCHOR_GAP: f64 = 1e-6;
const NEWTON_MAX_ITERS: usize = 60;

/// Zeros of one series on a window of the imaginary axis.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroList {
    gammas: Vec<f64>,
    multiplicities: Vec<u32>,
    residuals: Vec<f64>,
    window: (f64, f64),
    oversample: u32,
}

impl ZeroList {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Zero positions, strictly increasing.
    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// |F(i gamma)| at each reported zero.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn oversample(&self) -> u32 {
        self.oversample
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, u32, f64)> + '_ {
        self.gammas
            .iter()
            .zip(&self.multiplicities)
            .zip(&self.residuals)
            .map(|((g, m), r)| (*g, *m, *r))
    }

    /// Zero count with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicities.iter().map(|&m| m as u64).sum()
    }

    /// The first `count` zeros to the right of `min_gamma`.
    pub fn positive(&self, min_gamma: f64) -> impl Iterator<Item = f64> + '_ {
        self.gammas.iter().copied().filter(move |g| *g > min_gamma)
    }

    /// Worst-case distance from `-gamma_j` to the nearest reported zero;
    /// 0 for a perfectly symmetric list.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for &g in &self.gammas {
            let target = -g;
            let i = self
                .gammas
                .partition_point(|x| *x < target)
                .min(self.gammas.len().saturating_sub(1));
            let mut best = f64::INFINITY;
            for j in i.saturating_sub(1)..=(i + 1).min(self.gammas.len() - 1) {
                best = best.min((self.gammas[j] - target).abs());
            }
            worst = worst.max(best);
        }
        worst
    }
}

struct Candidate {
    /// Grid point (or bracket midpoint) this came from.
    anchor: f64,
    /// Bracket endpoints when a sign change backs the candidate.
    bracket: Option<(f64, f64)>,
    start: f64,
}

/// Scan `window` for zeros of the series on the imaginary axis.
pub fn find_zeros(
    series: &DirichletSeries,
    window: (f64, f64),
    oversample: u32,
) -> Result<ZeroList, DirichletError> {
    let (lo, hi) = window;
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(DirichletError::InvalidWindow(lo, hi));
    }
    let os = oversample.max(1);
    let target = NEWTON_TOL * series.sum_abs().max(1.0);
    let delta = std::f64::consts::TAU / (series.total_frequency() * os as f64);
    let npts = if hi == lo {
        1
    } else {
        ((hi - lo) / delta).ceil() as usize + 1
    };
    let grid: Vec<f64> = if npts == 1 {
        vec![lo]
    } else {
        (0..npts)
            .map(|i| lo + (hi - lo) * i as f64 / (npts - 1) as f64)
            .collect()
    };
    let cell = if npts > 1 { grid[1] - grid[0] } else { delta };

    let candidates = if series.has_real_secular() {
        secular_candidates(series, &grid, os)
    } else {
        minima_candidates(series, &grid, os)
    };

    // Polish every candidate; remember its anchor for the coarseness check.
    let mut polished: Vec<(f64, f64, f64)> = Vec::new(); // (gamma, residual, anchor)
    for c in candidates {
        let hit = match c.bracket {
            Some((a, b)) => polish_bracket(series, a, b, target),
            None => polish_newton(series, c.start, 2.0 * cell, target),
        };
        if let Some((gamma, residual)) = hit {
            if gamma >= lo - DEDUP_TOL && gamma <= hi + DEDUP_TOL {
                polished.push((gamma.clamp(lo, hi), residual, c.anchor));
            }
        }
    }
    polished.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Deduplicate, flagging merges of candidates from far-apart anchors.
    let mut zeros: Vec<(f64, f64)> = Vec::new();
    let mut last_anchor = f64::NEG_INFINITY;
    for (gamma, residual, anchor) in polished {
        match zeros.last_mut() {
            Some((g, r)) if (gamma - *g).abs() < DEDUP_TOL => {
                if (anchor - last_anchor).abs() > COLLISION_ANCHOR_GAP {
                    return Err(DirichletError::WindowTooCoarse {
                        first: last_anchor,
                        second: anchor,
                        zero: gamma,
                    });
                }
                if residual < *r {
                    *g = gamma;
                    *r = residual;
                }
            }
            _ => {
                zeros.push((gamma, residual));
                last_anchor = anchor;
            }
        }
    }

    let mut gammas = Vec::with_capacity(zeros.len());
    let mut residuals = Vec::with_capacity(zeros.len());
    let mut multiplicities = Vec::with_capacity(zeros.len());
    for (i, &(gamma, residual)) in zeros.iter().enumerate() {
        let mut gap = f64::INFINITY;
        if i > 0 {
            gap = gap.min(gamma - zeros[i - 1].0);
        }
        if i + 1 < zeros.len() {
            gap = gap.min(zeros[i + 1].0 - gamma);
        }
        let radius = (gap / 2.0).min(1e-4);
        gammas.push(gamma);
        residuals.push(residual);
        multiplicities.push(winding_multiplicity(series, gamma, radius));
    }

    Ok(ZeroList {
        gammas,
        multiplicities,
        residuals,
        window,
        oversample: os,
    })
}

fn secular_candidates(series: &DirichletSeries, grid: &[f64], os: u32) -> Vec<Candidate> {
    let g: Vec<f64> = grid
        .iter()
        .map(|x| series.secular(*x).expect("secular mode"))
        .collect();
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let exact: Vec<bool> = g.iter().map(|v| v.abs() < 1e-12 * scale).collect();
    let n = grid.len();
    let mut out = Vec::new();
    for i in 0..n {
        if exact[i] && (i == 0 || !exact[i - 1]) {
            out.push(Candidate {
                anchor: grid[i],
                bracket: None,
                start: grid[i],
            });
        }
    }
    for i in 0..n.saturating_sub(1) {
        if !exact[i] && !exact[i + 1] && g[i] * g[i + 1] < 0.0 {
            out.push(Candidate {
                anchor: 0.5 * (grid[i] + grid[i + 1]),
                bracket: Some((grid[i], grid[i + 1])),
                start: 0.5 * (grid[i] + grid[i + 1]),
            });
        }
    }
    // Even-order zeros: |g| dips near zero without a sign change. The gate
    // reflects that near a touch point |g| at the nearest grid node is
    // O(scale (2 pi / oversample)^2).
    let gate = scale * (1e-3f64).max((std::f64::consts::TAU / os as f64).powi(2));
    for i in 1..n.saturating_sub(1) {
        if exact[i - 1] || exact[i] || exact[i + 1] {
            continue;
        }
        if g[i - 1] * g[i] < 0.0 || g[i] * g[i + 1] < 0.0 {
            continue;
        }
        if g[i].abs() < g[i - 1].abs() && g[i].abs() <= g[i + 1].abs() && g[i].abs() < gate {
            out.push(Candidate {
                anchor: grid[i],
                bracket: None,
                start: grid[i],
            });
        }
    }
    out
}

fn minima_candidates(series: &DirichletSeries, grid: &[f64], os: u32) -> Vec<Candidate> {
    let v: Vec<f64> = grid.iter().map(|x| series.eval_line(*x).norm()).collect();
    let n = grid.len();
    // |F'| <= (xi . ell) sum|a|, so next to a zero the grid still sees
    // |F| ~ pi sum|a| / oversample; gate with a factor-2 margin.
    let gate = (1e-3f64).max(4.0 * std::f64::consts::PI * series.sum_abs() / os as f64);
    let mut out = Vec::new();
    if n == 1 {
        if v[0] < gate {
            out.push(Candidate {
                anchor: grid[0],
                bracket: None,
                start: grid[0],
            });
        }
        return out;
    }
    for i in 0..n {
        let left_higher = i == 0 || v[i - 1] > v[i];
        let right_not_lower = i + 1 == n || v[i + 1] >= v[i];
        if left_higher && right_not_lower && v[i] < gate {
            out.push(Candidate {
                anchor: grid[i],
                bracket: None,
                start: grid[i],
            });
        }
    }
    out
}

/// Bisection on the secular function to machine width, then a short Newton
/// cleanup on F itself. The bracket guarantees convergence.
fn polish_bracket(
    series: &DirichletSeries,
    mut a: f64,
    mut b: f64,
    target: f64,
) -> Option<(f64, f64)> {
    let mut ga = series.secular(a).expect("bracket implies secular mode");
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // interval at floating-point resolution
        }
        let gm = series.secular(mid).unwrap();
        if gm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if ga * gm < 0.0 {
            b = mid;
        } else {
            a = mid;
            ga = gm;
        }
    }
    let mut gamma = 0.5 * (a + b);
    let mut residual = series.eval_line(gamma).norm();
    for _ in 0..4 {
        if residual < target * 1e-2 {
            break;
        }
        let f = series.eval_line(gamma);
        let d = series.deriv_line(gamma);
        if d.norm() == 0.0 {
            break;
        }
        let next = gamma - (f / d).re;
        let next_res = series.eval_line(next).norm();
        if next_res < residual {
            gamma = next;
            residual = next_res;
        } else {
            break;
        }
    }
    (residual < target).then_some((gamma, residual))
}

/// Newton from a bare grid candidate. Rejects runs that leave the
/// originating cell (those belong to some other zero or to no zero at all).
/// Iterates on step size rather than residual: at an even-order zero the
/// residual scales like the square of the position error, so stopping at
/// the residual target would leave the location three or four digits short.
fn polish_newton(
    series: &DirichletSeries,
    start: f64,
    max_travel: f64,
    target: f64,
) -> Option<(f64, f64)> {
    let mut gamma = start;
    let mut best = (gamma, series.eval_line(gamma).norm());
    for _ in 0..NEWTON_MAX_ITERS {
        let f = series.eval_line(gamma);
        if f.norm() < best.1 {
            best = (gamma, f.norm());
        }
        let d = series.deriv_line(gamma);
        if d.norm() == 0.0 {
            break;
        }
        let step = (f / d).re;
        gamma -= step;
        if (gamma - start).abs() > max_travel {
            return None;
        }
        if step.abs() < 1e-15 * gamma.abs().max(1.0) {
            let r = series.eval_line(gamma).norm();
            if r < best.1 {
                best = (gamma, r);
            }
            break;
        }
    }
    (best.1 < target).then_some(best)
}

/// Argument-principle winding of F around a circle centred on the zero.
/// Falls back to multiplicity 1 if the contour cannot be stabilized.
fn winding_multiplicity(series: &DirichletSeries, gamma: f64, radius: f64) -> u32 {
    let mut r = radius.max(1e-12);
    for _ in 0..6 {
        match winding_on_circle(series, gamma, r) {
            Some(w) if w >= 1 => return w as u32,
            _ => r *= 0.5,
        }
    }
    1
}

fn winding_on_circle(series: &DirichletSeries, gamma: f64, radius: f64) -> Option<i64> {
    let floor = 1e-13 * series.sum_abs().max(1.0);
    let mut m = 64usize;
    'outer: while m <= 4096 {
        let mut total = 0.0f64;
        let mut prev: Option<f64> = None;
        for k in 0..=m {
            let phi = std::f64::consts::TAU * k as f64 / m as f64;
            let s = Complex64::new(0.0, gamma) + Complex64::from_polar(radius, phi);
            let v = series.eval(s);
            if v.norm() < floor {
                return None;
            }
            let arg = v.arg();
            if let Some(p) = prev {
                let mut d = arg - p;
                while d > std::f64::consts::PI {
                    d -= std::f64::consts::TAU;
                }
                while d < -std::f64::consts::PI {
                    d += std::f64::consts::TAU;
                }
                if d.abs() > std::f64::consts::FRAC_PI_2 {
                    m *= 2;
                    continue 'outer;
                }
                total += d;
            }
            prev = Some(arg);
        }
        return Some((total / std::f64::consts::TAU).round() as i64);
    }
    None
}

/// Argument-principle count of zeros in the rectangle
/// `[-re_halfwidth, re_halfwidth] x [gamma_lo, gamma_hi]` of the s-plane.
/// Counts with multiplicity; the off-axis diagnostic compares this against
/// the on-axis list.
pub fn count_zeros_rect(
    series: &DirichletSeries,
    re_halfwidth: f64,
    gamma_lo: f64,
    gamma_hi: f64,
) -> Result<i64, DirichletError> {
    if !(gamma_lo < gamma_hi) || !(re_halfwidth > 0.0) {
        return Err(DirichletError::InvalidWindow(gamma_lo, gamma_hi));
    }
    let corners = [
        Complex64::new(re_halfwidth, gamma_lo),
        Complex64::new(re_halfwidth, gamma_hi),
        Complex64::new(-re_halfwidth, gamma_hi),
        Complex64::new(-re_halfwidth, gamma_lo),
    ];
    let floor = 1e-13 * series.sum_abs().max(1.0);
    let mut m = 256usize;
    'outer: while m <= 1 << 14 {
        let mut total = 0.0f64;
        let mut prev: Option<f64> = None;
        for e in 0..4 {
            let (a, b) = (corners[e], corners[(e + 1) % 4]);
            for k in 0..m {
                let t = k as f64 / m as f64;
                let s = a + (b - a) * t;
                let v = series.eval(s);
                if v.norm() < floor {
                    return Err(DirichletError::ContourHitsZero);
                }
                let arg = v.arg();
                if let Some(p) = prev {
                    let mut d = arg - p;
                    while d > std::f64::consts::PI {
                        d -= std::f64::consts::TAU;
                    }
                    while d < -std::f64::consts::PI {
                        d += std::f64::consts::TAU;
                    }
                    if d.abs() > std::f64::consts::FRAC_PI_2 {
                        m *= 2;
                        continue 'outer;
                    }
                    total += d;
                }
                prev = Some(arg);
            }
        }
        // Close the contour back to the first sample.
        let first = series.eval(corners[0]).arg();
        if let Some(p) = prev {
            let mut d = first - p;
            while d > std::f64::consts::PI {
                d -= std::f64::consts::TAU;
            }
            while d < -std::f64::consts::PI {
                d += std::f64::consts::TAU;
            }
            total += d;
        }
        return Ok((total / std::f64::consts::TAU).round() as i64);
    }
    Err(DirichletError::ContourHitsZero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::dirichlet::Side;

    fn series(name: &str) -> DirichletSeries {
        let (pair, xi) = builtins::by_name(name).unwrap();
        DirichletSeries::new(&pair, &xi, Side::P).unwrap()
    }

    #[test]
    fn poisson_zeros_are_the_lattice() {
        let f = series("poisson");
        let zl = find_zeros(&f, (-20.0, 20.0), 32).unwrap();
        let tau = std::f64::consts::TAU;
        let want: Vec<f64> = (-3..=3).map(|n| tau * n as f64).collect();
        assert_eq!(zl.len(), want.len());
        for (got, want) in zl.gammas().iter().zip(&want) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        assert!(zl.multiplicities().iter().all(|&m| m == 1));
        assert!(zl.residuals().iter().all(|&r| r < 1e-9));
    }

    #[test]
    fn lasso_zeros_kill_the_closed_form_secular_function() {
        let (pair, xi) = builtins::lasso();
        let f = DirichletSeries::new(&pair, &xi, Side::P).unwrap();
        let zl = find_zeros(&f, (-40.0, 40.0), 32).unwrap();
        assert!(zl.len() > 20);
        let l = crate::dirichlet::secular_values(&xi, zl.gammas()).unwrap();
        for (g, l) in zl.gammas().iter().zip(&l) {
            assert!(l.abs() < 1e-8, "L({g}) = {l}");
        }
        // Symmetric zero set, gamma = 0 included.
        assert!(zl.symmetry_defect() < 1e-9);
        assert!(zl.gammas().iter().any(|g| g.abs() < 1e-12));
    }

    #[test]
    fn shifted_lattice_zeros_are_found_without_the_secular_form() {
        // P = 1 - e^i z1: zeros at gamma = 1 + 2 pi n exactly.
        let f = series("spectral-phase");
        assert!(!f.has_real_secular());
        let zl = find_zeros(&f, (-30.0, 30.0), 32).unwrap();
        let tau = std::f64::consts::TAU;
        assert!(!zl.is_empty());
        for g in zl.gammas() {
            let n = ((g - 1.0) / tau).round();
            assert!((g - (1.0 + tau * n)).abs() < 1e-10, "gamma {g}");
        }
        // The lattice is complete inside the window.
        let expected = (1 + ((30.0 - 1.0) / tau) as i64) + ((30.0 + 1.0) / tau) as i64;
        assert_eq!(zl.len() as i64, expected);
    }

    #[test]
    fn double_zeros_get_multiplicity_two() {
        // (1 - z1)^2 has zeros 2 pi n, each of order 2; the secular function
        // touches without crossing.
        let p = crate::polynomial::MultiPoly::from_rational_terms(
            1,
            &[(&[0], 1, 1), (&[1], -2, 1), (&[2], 1, 1)],
        )
        .unwrap();
        let pair = crate::polynomial::StablePair::derive_dual(p).unwrap();
        let xi = crate::dirichlet::FrequencyVec::new(vec![1.0]).unwrap();
        let f = DirichletSeries::new(&pair, &xi, Side::P).unwrap();
        let zl = find_zeros(&f, (-10.0, 10.0), 32).unwrap();
        let tau = std::f64::consts::TAU;
        assert_eq!(zl.len(), 3);
        for (g, m, _) in zl.iter() {
            assert!((g / tau - (g / tau).round()).abs() < 1e-9);
            assert_eq!(m, 2, "multiplicity at {g}");
        }
    }

    #[test]
    fn degenerate_window_reports_the_origin_zero() {
        let f = series("poisson");
        let zl = find_zeros(&f, (0.0, 0.0), 32).unwrap();
        assert_eq!(zl.len(), 1);
        assert_eq!(zl.gammas()[0], 0.0);
    }

    #[test]
    fn rectangle_count_matches_the_axis_count() {
        let (pair, xi) = builtins::lasso();
        let f = DirichletSeries::new(&pair, &xi, Side::P).unwrap();
        let zl = find_zeros(&f, (0.5, 20.5), 32).unwrap();
        let rect = count_zeros_rect(&f, 1.0, 0.5, 20.5).unwrap();
        assert_eq!(rect as u64, zl.total_multiplicity());
    }

    #[test]
    fn empty_windows_and_bad_oversample_are_handled() {
        let f = series("poisson");
        assert!(find_zeros(&f, (3.0, 2.0), 32).is_err());
        // oversample 0 is clamped, not fatal.
        let zl = find_zeros(&f, (-1.0, 1.0), 0).unwrap();
        assert_eq!(zl.len(), 1);
    }

    #[test]
    fn zero_lists_are_strictly_increasing() {
        let f = series("lasso");
        let zl = find_zeros(&f, (-60.0, 60.0), 32).unwrap();
        for w in zl.gammas().windows(2) {
            assert!(w[1] > w[0] + DEDUP_TOL / 2.0);
        }
    }
}
