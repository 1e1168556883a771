//! Tracing the zero set of a polynomial on the 2-torus.
//!
//! For a palindromic polynomial (real coefficients with `a(m) = ±a(l-m)`)
//! the phase-normalized restriction to the torus,
//! `R(t) = Re[a e^{i t.l/2} P(e^{i t1}, e^{i t2})]`, is real-valued with
//! identically vanishing imaginary part, so `|P| = |R|` pointwise and the
//! zero set is the level set `R = 0`. That level set is traced with
//! marching squares over `[0, 2 pi]^2`. Because `R` involves half-integer
//! shifts `m - l/2`, it need not be periodic, so components are reported on
//! the closed square without stitching opposite edges together.
//!
//! Grid nodes with `R >= 0` count as positive. Saddle cells (diagonal sign
//! patterns) are disambiguated by the sign at the cell centre. Edge
//! crossings are refined by bisection until `|R| < 1e-9` and shared between
//! adjacent cells, so chains link up exactly. Isolated touch points, where
//! `R` meets zero without changing sign, are not traced: when a grid node
//! happens to land exactly on one (the square's corner can do this), every
//! incident crossing collapses onto that node and the resulting zero-length
//! chain is discarded rather than reported as a phantom component.
//!
//! Without the palindrome symmetry, `Re P` and `Im P` are independent
//! fields and the zero set is generically a finite point set: both level
//! sets are traced, their segments intersected cell by cell, and every
//! intersection polished with a damped Newton step on `(Re P, Im P)`. When
//! the true zero set happens to be a curve (the two level sets coincide
//! along it), the returned points sample that curve instead.

use super::DirichletError;
use crate::polynomial::MultiPoly;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::TAU;

const EDGE_TOL: f64 = 1e-9;
const POINT_TOL: f64 = 1e-9;

/// One connected piece of the traced zero set.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    /// Polyline vertices `(t1, t2)` in `[0, 2 pi]^2`, ordered along the
    /// component. A single entry is an isolated point.
    pub points: Vec<(f64, f64)>,
    /// Whether the polyline closes back on its first vertex.
    pub closed: bool,
}

/// Zero set of a polynomial restricted to the unit torus.
#[derive(Clone, Debug, Serialize)]
pub struct CurveSet {
    pub components: Vec<Component>,
    pub resolution: usize,
}

impl CurveSet {
    pub fn open_count(&self) -> usize {
        self.components.iter().filter(|c| !c.closed).count()
    }

    pub fn closed_count(&self) -> usize {
        self.components.len() - self.open_count()
    }

    pub fn total_points(&self) -> usize {
        self.components.iter().map(|c| c.points.len()).sum()
    }

    /// Largest `|P|` over all reported vertices.
    pub fn max_residual(&self, poly: &MultiPoly) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.components {
            for &(a, b) in &c.points {
                let z = [
                    Complex64::from_polar(1.0, a),
                    Complex64::from_polar(1.0, b),
                ];
                worst = worst.max(poly.eval(&z).norm());
            }
        }
        worst
    }
}

/// Trace the zero set of `poly` on the unit 2-torus at the given grid
/// resolution (cells per axis).
pub fn torus_zero_curve(poly: &MultiPoly, resolution: usize) -> Result<CurveSet, DirichletError> {
    if poly.n() != 2 {
        return Err(DirichletError::WrongArity {
            expected: 2,
            got: poly.n(),
        });
    }
    let res = resolution.max(8);
    let ell = poly.max_degree_vec();
    if let Some(kind) = super::palindrome_kind(poly, &ell) {
        let field = palindromic_field(poly, &ell, kind);
        let (points, segments) = march(&field, res);
        let components = chain(points, segments);
        Ok(CurveSet {
            components,
            resolution: res,
        })
    } else {
        let components = point_zeros(poly, res)?;
        Ok(CurveSet {
            components,
            resolution: res,
        })
    }
}

/// The real field whose level set is the torus zero curve: a cosine sum for
/// even palindromes, a sine sum for odd ones (global sign is irrelevant for
/// the zero set).
fn palindromic_field(
    poly: &MultiPoly,
    ell: &crate::polynomial::ExponentVec,
    kind: super::Palindrome,
) -> Box<dyn Fn(f64, f64) -> f64> {
    let terms: Vec<(f64, f64, f64)> = poly
        .terms()
        .map(|(m, c)| {
            (
                c.value().re,
                m.entry(0) as f64 - ell.entry(0) as f64 / 2.0,
                m.entry(1) as f64 - ell.entry(1) as f64 / 2.0,
            )
        })
        .collect();
    match kind {
        super::Palindrome::Even => Box::new(move |a, b| {
            terms
                .iter()
                .map(|(c, e1, e2)| c * (e1 * a + e2 * b).cos())
                .sum()
        }),
        super::Palindrome::Odd => Box::new(move |a, b| {
            terms
                .iter()
                .map(|(c, e1, e2)| c * (e1 * a + e2 * b).sin())
                .sum()
        }),
    }
}

/// Grid edge identifier: (node i, node j, axis), axis 0 running toward
/// +t1 and axis 1 toward +t2.
type EdgeKey = (usize, usize, u8);

/// Marching squares for one scalar field. Returns the refined crossing
/// point on every sign-change edge and the per-cell segments connecting
/// them.
fn march(
    field: &dyn Fn(f64, f64) -> f64,
    res: usize,
) -> (HashMap<EdgeKey, (f64, f64)>, Vec<(EdgeKey, EdgeKey)>) {
    let node = |i: usize| TAU * i as f64 / res as f64;
    let mut values = vec![0.0f64; (res + 1) * (res + 1)];
    for i in 0..=res {
        for j in 0..=res {
            values[i * (res + 1) + j] = field(node(i), node(j));
        }
    }
    let val = |i: usize, j: usize| values[i * (res + 1) + j];
    let pos = |i: usize, j: usize| val(i, j) >= 0.0;

    let mut points: HashMap<EdgeKey, (f64, f64)> = HashMap::new();
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    let crossing = |key: EdgeKey, points: &mut HashMap<EdgeKey, (f64, f64)>| {
        if points.contains_key(&key) {
            return;
        }
        let (i, j, axis) = key;
        let (pa, pb) = if axis == 0 {
            ((node(i), node(j)), (node(i + 1), node(j)))
        } else {
            ((node(i), node(j)), (node(i), node(j + 1)))
        };
        points.insert(key, refine_edge(field, pa, pb));
    };

    for i in 0..res {
        for j in 0..res {
            // Corners: bit 0 = (i, j), bit 1 = (i+1, j), bit 2 = (i+1, j+1),
            // bit 3 = (i, j+1), set when the field is non-negative there.
            let mut case = 0u8;
            if pos(i, j) {
                case |= 1;
            }
            if pos(i + 1, j) {
                case |= 2;
            }
            if pos(i + 1, j + 1) {
                case |= 4;
            }
            if pos(i, j + 1) {
                case |= 8;
            }
            if case == 0 || case == 15 {
                continue;
            }
            let bottom: EdgeKey = (i, j, 0);
            let top: EdgeKey = (i, j + 1, 0);
            let left: EdgeKey = (i, j, 1);
            let right: EdgeKey = (i + 1, j, 1);
            let mut emit = |a: EdgeKey, b: EdgeKey, points: &mut HashMap<_, _>| {
                crossing(a, points);
                crossing(b, points);
                segments.push((a, b));
            };
            match case {
                1 | 14 => emit(left, bottom, &mut points),
                2 | 13 => emit(bottom, right, &mut points),
                3 | 12 => emit(left, right, &mut points),
                4 | 11 => emit(top, right, &mut points),
                6 | 9 => emit(bottom, top, &mut points),
                7 | 8 => emit(top, left, &mut points),
                5 | 10 => {
                    let centre = field(node(i) + TAU / (2.0 * res as f64), node(j) + TAU / (2.0 * res as f64));
                    let diag_join = centre >= 0.0;
                    match (case, diag_join) {
                        (5, true) | (10, false) => {
                            emit(top, left, &mut points);
                            emit(bottom, right, &mut points);
                        }
                        _ => {
                            emit(left, bottom, &mut points);
                            emit(top, right, &mut points);
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    (points, segments)
}

/// Bisect along an edge whose endpoint signs differ (under the `>= 0`
/// convention) down to `|field| < EDGE_TOL`.
fn refine_edge(field: &dyn Fn(f64, f64) -> f64, pa: (f64, f64), pb: (f64, f64)) -> (f64, f64) {
    let fa = field(pa.0, pa.1);
    // Orient so `lo` carries the non-negative end.
    let (mut lo, mut hi) = if fa >= 0.0 { (pa, pb) } else { (pb, pa) };
    if fa == 0.0 {
        return pa;
    }
    for _ in 0..70 {
        let mid = (0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1));
        let fm = field(mid.0, mid.1);
        if fm.abs() < EDGE_TOL {
            return mid;
        }
        if fm >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1))
}

/// Link per-cell segments into polylines. Interior grid edges are shared by
/// two cells (degree 2); edges on the square boundary belong to one cell
/// and terminate an open chain. Whatever remains after all open chains are
/// extracted forms closed loops. Chains that collapse to a single distinct
/// vertex (a node sitting exactly on a touch point) are dropped.
fn chain(
    points: HashMap<EdgeKey, (f64, f64)>,
    segments: Vec<(EdgeKey, EdgeKey)>,
) -> Vec<Component> {
    let mut adj: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adj.entry(*a).or_default().push(idx);
        adj.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut components = Vec::new();

    let walk = |start: EdgeKey, used: &mut Vec<bool>| -> Vec<EdgeKey> {
        let mut path = vec![start];
        let mut current = start;
        loop {
            let Some(&idx) = adj[&current].iter().find(|&&s| !used[s]) else {
                break;
            };
            used[idx] = true;
            let (a, b) = segments[idx];
            current = if a == current { b } else { a };
            path.push(current);
        }
        path
    };

    let mut starts: Vec<EdgeKey> = adj
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(k, _)| *k)
        .collect();
    starts.sort_unstable();
    for start in starts {
        if adj[&start].iter().all(|&s| used[s]) {
            continue;
        }
        let path = walk(start, &mut used);
        if let Some(points) = distinct_vertices(&path, &points) {
            components.push(Component {
                points,
                closed: false,
            });
        }
    }
    for idx in 0..segments.len() {
        if used[idx] {
            continue;
        }
        used[idx] = true;
        let (a, b) = segments[idx];
        let mut path = vec![a, b];
        path.extend(walk(b, &mut used).into_iter().skip(1));
        // A loop returns to its first edge; drop the duplicated vertex.
        if path.len() > 1 && path.first() == path.last() {
            path.pop();
        }
        if let Some(points) = distinct_vertices(&path, &points) {
            components.push(Component {
                points,
                closed: true,
            });
        }
    }
    components
}

/// Resolve a key path to vertices, merging consecutive coincident points
/// (distinct grid edges can refine to the same spot when a node lies
/// exactly on the curve). Returns `None` when fewer than two distinct
/// vertices remain.
fn distinct_vertices(
    path: &[EdgeKey],
    points: &HashMap<EdgeKey, (f64, f64)>,
) -> Option<Vec<(f64, f64)>> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(path.len());
    for k in path {
        let p = points[k];
        if out
            .last()
            .is_some_and(|q| (q.0 - p.0).hypot(q.1 - p.1) < 1e-12)
        {
            continue;
        }
        out.push(p);
    }
    (out.len() >= 2).then_some(out)
}

/// General (non-palindromic) branch: trace `Re P = 0` and `Im P = 0`
/// separately, intersect their segments, and polish each intersection.
fn point_zeros(poly: &MultiPoly, res: usize) -> Result<Vec<Component>, DirichletError> {
    let p = poly.clone();
    let re_field: Box<dyn Fn(f64, f64) -> f64> = {
        let p = p.clone();
        Box::new(move |a, b| eval_torus(&p, a, b).re)
    };
    let im_field: Box<dyn Fn(f64, f64) -> f64> = {
        let p = p.clone();
        Box::new(move |a, b| eval_torus(&p, a, b).im)
    };
    let (re_pts, re_segs) = march(re_field.as_ref(), res);
    let (im_pts, im_segs) = march(im_field.as_ref(), res);

    // Bucket segments by cell so only co-located pairs are intersected.
    let h = TAU / res as f64;
    let cell_of = |pt: (f64, f64)| {
        (
            ((pt.0 / h) as usize).min(res - 1),
            ((pt.1 / h) as usize).min(res - 1),
        )
    };
    let mut re_by_cell: HashMap<(usize, usize), Vec<((f64, f64), (f64, f64))>> = HashMap::new();
    for (a, b) in &re_segs {
        let (pa, pb) = (re_pts[a], re_pts[b]);
        let mid = (0.5 * (pa.0 + pb.0), 0.5 * (pa.1 + pb.1));
        re_by_cell.entry(cell_of(mid)).or_default().push((pa, pb));
    }
    let mut candidates = Vec::new();
    for (a, b) in &im_segs {
        let (pa, pb) = (im_pts[a], im_pts[b]);
        let mid = (0.5 * (pa.0 + pb.0), 0.5 * (pa.1 + pb.1));
        let (ci, cj) = cell_of(mid);
        for di in ci.saturating_sub(1)..=(ci + 1).min(res - 1) {
            for dj in cj.saturating_sub(1)..=(cj + 1).min(res - 1) {
                if let Some(list) = re_by_cell.get(&(di, dj)) {
                    for &(qa, qb) in list {
                        if let Some(x) = segment_intersection(pa, pb, qa, qb) {
                            candidates.push(x);
                        }
                    }
                }
            }
        }
    }

    let mut found: Vec<(f64, f64)> = Vec::new();
    for c in candidates {
        if let Some(z) = newton_2d(&p, c) {
            let dup = found
                .iter()
                .any(|f| (f.0 - z.0).hypot(f.1 - z.1) < 1e-6);
            if !dup {
                found.push(z);
            }
        }
    }
    found.sort_by(|a, b| (a.0, a.1).partial_cmp(&(b.0, b.1)).unwrap());
    Ok(found
        .into_iter()
        .map(|pt| Component {
            points: vec![pt],
            closed: true,
        })
        .collect())
}

fn eval_torus(poly: &MultiPoly, a: f64, b: f64) -> Complex64 {
    poly.eval(&[
        Complex64::from_polar(1.0, a),
        Complex64::from_polar(1.0, b),
    ])
}

/// Proper intersection of two segments, if any.
fn segment_intersection(
    a0: (f64, f64),
    a1: (f64, f64),
    b0: (f64, f64),
    b1: (f64, f64),
) -> Option<(f64, f64)> {
    let d1 = (a1.0 - a0.0, a1.1 - a0.1);
    let d2 = (b1.0 - b0.0, b1.1 - b0.1);
    let det = d1.0 * d2.1 - d1.1 * d2.0;
    if det.abs() < 1e-14 {
        return None;
    }
    let r = (b0.0 - a0.0, b0.1 - a0.1);
    let t = (r.0 * d2.1 - r.1 * d2.0) / det;
    let u = (r.0 * d1.1 - r.1 * d1.0) / det;
    if !(-0.05..=1.05).contains(&t) || !(-0.05..=1.05).contains(&u) {
        return None;
    }
    Some((a0.0 + t * d1.0, a0.1 + t * d1.1))
}

/// Damped Newton on `(Re P, Im P)` as a map of the two torus angles. The
/// Levenberg term keeps the step sane when the Jacobian degenerates (which
/// happens exactly when the zero set is locally a curve).
fn newton_2d(poly: &MultiPoly, start: (f64, f64)) -> Option<(f64, f64)> {
    let (mut a, mut b) = start;
    let mut best = (start, eval_torus(poly, a, b).norm());
    for _ in 0..40 {
        let f = eval_torus(poly, a, b);
        if f.norm() < best.1 {
            best = ((a, b), f.norm());
        }
        if f.norm() < POINT_TOL * 1e-2 {
            break;
        }
        let mut da = Complex64::new(0.0, 0.0);
        let mut db = Complex64::new(0.0, 0.0);
        for (m, c) in poly.terms() {
            let phase = Complex64::from_polar(
                1.0,
                m.entry(0) as f64 * a + m.entry(1) as f64 * b,
            );
            let term = c.value() * phase * Complex64::i();
            da += term * m.entry(0) as f64;
            db += term * m.entry(1) as f64;
        }
        // 2x2 normal equations with Levenberg damping.
        let j = [[da.re, db.re], [da.im, db.im]];
        let jtj = [
            [
                j[0][0] * j[0][0] + j[1][0] * j[1][0],
                j[0][0] * j[0][1] + j[1][0] * j[1][1],
            ],
            [
                j[0][0] * j[0][1] + j[1][0] * j[1][1],
                j[0][1] * j[0][1] + j[1][1] * j[1][1],
            ],
        ];
        let lambda = 1e-10 * (jtj[0][0] + jtj[1][1]).max(1e-300);
        let m00 = jtj[0][0] + lambda;
        let m11 = jtj[1][1] + lambda;
        let m01 = jtj[0][1];
        let det = m00 * m11 - m01 * m01;
        if det.abs() < 1e-300 {
            break;
        }
        let g = [
            j[0][0] * f.re + j[1][0] * f.im,
            j[0][1] * f.re + j[1][1] * f.im,
        ];
        let step = [
            (m11 * g[0] - m01 * g[1]) / det,
            (m00 * g[1] - m01 * g[0]) / det,
        ];
        a -= step[0];
        b -= step[1];
        if step[0].hypot(step[1]) > 1.0 {
            return None; // diverging, not a real zero
        }
    }
    let ((a, b), r) = best;
    if r < POINT_TOL && (0.0..=TAU + 1e-9).contains(&a) && (0.0..=TAU + 1e-9).contains(&b) {
        Some((a.clamp(0.0, TAU), b.clamp(0.0, TAU)))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::polynomial::MultiPoly;
    use crate::scalar::Scalar;
    use crate::ExponentVec;

    #[test]
    fn lasso_curve_has_two_open_branches() {
        let (pair, _) = builtins::lasso();
        let set = torus_zero_curve(pair.p(), 256).unwrap();
        assert_eq!(set.components.len(), 2, "components: {}", set.components.len());
        assert_eq!(set.open_count(), 2);
        assert!(set.max_residual(pair.p()) < 1e-8);

        // Expected endpoints: (0, 2pi) -> (2pi, pi) and (0, pi) -> (2pi, 0).
        let pi = std::f64::consts::PI;
        let mut matched = [false; 2];
        for c in &set.components {
            let mut pts = c.points.clone();
            if pts.first().unwrap().0 > pts.last().unwrap().0 {
                pts.reverse();
            }
            let (sx, sy) = *pts.first().unwrap();
            let (ex, ey) = *pts.last().unwrap();
            assert!(sx < 0.05 && ex > TAU - 0.05, "branch spans the square");
            assert!(sy > ey, "descending branch");
            if (sy - TAU).abs() < 0.06 && (ey - pi).abs() < 0.06 {
                matched[0] = true;
            }
            if (sy - pi).abs() < 0.06 && ey < 0.06 {
                matched[1] = true;
            }
        }
        assert!(matched[0] && matched[1], "both documented branches present");
    }

    #[test]
    fn self_dual_rotation_pair_yields_a_clean_curve() {
        let (pair, _) = builtins::spectral();
        let set = torus_zero_curve(pair.p(), 128).unwrap();
        assert!(!set.components.is_empty());
        assert!(set.max_residual(pair.p()) < 1e-8);
    }

    #[test]
    fn complex_coefficients_fall_back_to_point_sampling() {
        // (1 - e^i z1)(1 - e^{-i} z2): the zero set is the union of the two
        // circles z1 = e^{-i} and z2 = e^{i}; the point sampler must land on
        // them.
        let e_pos = num_complex::Complex64::from_polar(1.0, 1.0);
        let e_neg = e_pos.conj();
        let p = MultiPoly::new(
            2,
            vec![
                (ExponentVec::new(vec![0, 0]), Scalar::one()),
                (ExponentVec::new(vec![1, 0]), Scalar::complex(-e_pos.re, -e_pos.im)),
                (ExponentVec::new(vec![0, 1]), Scalar::complex(-e_neg.re, -e_neg.im)),
                (ExponentVec::new(vec![1, 1]), Scalar::complex((e_pos * e_neg).re, (e_pos * e_neg).im)),
            ],
        )
        .unwrap();
        let set = torus_zero_curve(&p, 96).unwrap();
        assert!(!set.components.is_empty());
        assert!(set.max_residual(&p) < 1e-8);
        for c in &set.components {
            assert!(c.points.len() == 1);
            let (a, b) = c.points[0];
            let on_first = (a - (TAU - 1.0)).abs() < 0.05;
            let on_second = (b - 1.0).abs() < 0.05;
            assert!(on_first || on_second, "({a}, {b}) off both circles");
        }
    }

    #[test]
    fn arity_is_checked() {
        let (pair, _) = builtins::poisson();
        assert!(matches!(
            torus_zero_curve(pair.p(), 64),
            Err(DirichletError::WrongArity { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn closed_loops_are_closed() {
        // R = cos t1 + cos t2 + 1/2 has a closed oval around (pi, pi); the
        // polynomial with that secular field is
        // z1 z2 + (z1^2 z2 + z2 + z1 z2^2 + z1) / 2 + z1 z2 / 2, scaled to
        // constant term 1 after multiplying by z^{-l/2}... simpler: take
        // P = 1 + (z1 + z2)/4 + z1 z2, whose normalized field is
        // 2 cos((t1+t2)/2) + cos((t1-t2)/2)/2: its zero set avoids the
        // square boundary in places and closes up there.
        let p = MultiPoly::from_rational_terms(
            2,
            &[
                (&[0, 0], 1, 1),
                (&[1, 0], 1, 4),
                (&[0, 1], 1, 4),
                (&[1, 1], 1, 1),
            ],
        )
        .unwrap();
        let set = torus_zero_curve(&p, 128).unwrap();
        assert!(!set.components.is_empty());
        assert!(set.max_residual(&p) < 1e-8);
        for c in &set.components {
            if c.closed {
                assert!(c.points.len() >= 8);
            }
        }
    }
}
