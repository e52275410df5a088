//! Rest points of the replicator field: closed forms, a Newton search over a
//! barycentric lattice, and linear stability classification.

use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{payoff_matrix, GameParams, PayoffMatrix, Strategy, Variant};
use crate::scalar::Scalar;
use crate::simplex::{compositions, lattice, SimplexPoint};

use super::{gradient_raw, max_abs, mean_raw, payoffs_raw};

/// Largest `|gradient|` accepted at a point handed to [`classify_rest_point`].
pub const REST_TOLERANCE: f64 = 1e-8;
/// Convergence threshold of the Newton search.
pub const NEWTON_TOLERANCE: f64 = 1e-10;
/// Points closer than this (max norm) are the same rest point.
pub const DEDUP_TOLERANCE: f64 = 1e-6;
/// Central-difference step for Jacobians.
pub const CLASSIFY_FD_STEP: f64 = 1e-6;
/// Eigenvalue real parts within this of zero are treated as zero.
pub const EIGEN_THRESHOLD: f64 = 1e-7;

const NEWTON_MAX_ITERS: usize = 100;
const LINE_SEARCH_HALVINGS: usize = 40;
const FACE_PROBE_RESOLUTION: usize = 8;
const EDGE_SCAN_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Saddle,
    Marginal,
}

impl Stability {
    pub fn name(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::Saddle => "saddle",
            Stability::Marginal => "marginal",
        }
    }

    fn from_real_parts(parts: &[f64]) -> Self {
        if parts.iter().any(|re| re.abs() <= EIGEN_THRESHOLD) {
            Stability::Marginal
        } else if parts.iter().all(|&re| re < 0.0) {
            Stability::Stable
        } else if parts.iter().all(|&re| re > 0.0) {
            Stability::Unstable
        } else {
            Stability::Saddle
        }
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestPointSource {
    ClosedForm,
    Numeric,
}

impl RestPointSource {
    pub fn name(self) -> &'static str {
        match self {
            RestPointSource::ClosedForm => "closed-form",
            RestPointSource::Numeric => "numeric",
        }
    }
}

/// A rest point is either a single state or a whole edge of rest points,
/// stored as the segment from the point to `end`.
#[derive(Debug, Clone, PartialEq)]
pub enum RestPointKind<S> {
    Point,
    Segment { end: SimplexPoint<S> },
}

#[derive(Debug, Clone)]
pub struct RestPoint {
    pub point: SimplexPoint<f64>,
    pub kind: RestPointKind<f64>,
    pub source: RestPointSource,
    /// Linear stability in the full simplex.
    pub classification: Stability,
    /// Sorted real parts of the reduced Jacobian's eigenvalues.
    pub eigen_real_parts: Vec<f64>,
    /// Stability restricted to the face spanned by the point's support;
    /// `None` for vertices.
    pub face_classification: Option<Stability>,
    pub max_abs_gradient: f64,
}

impl RestPoint {
    pub fn is_segment(&self) -> bool {
        matches!(self.kind, RestPointKind::Segment { .. })
    }
}

/// A closed-form rest point before classification.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormPoint<S> {
    pub label: String,
    pub point: SimplexPoint<S>,
    pub kind: RestPointKind<S>,
}

/// A closed form that was not reported, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct Omission {
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSet<S> {
    pub points: Vec<ClosedFormPoint<S>>,
    pub omitted: Vec<Omission>,
}

impl<S: Scalar> ClosedFormSet<S> {
    fn push_point(&mut self, label: String, coords: Vec<S>) {
        let point = SimplexPoint::from_unchecked(coords);
        let duplicate = self
            .points
            .iter()
            .any(|p| p.kind == RestPointKind::Point && p.point.max_abs_diff(&point) <= 1e-12);
        if duplicate {
            self.omitted.push(Omission {
                label,
                reason: "coincides with a vertex".into(),
            });
        } else {
            self.points.push(ClosedFormPoint {
                label,
                point,
                kind: RestPointKind::Point,
            });
        }
    }
}

fn in_unit<S: Scalar>(v: S) -> bool {
    v >= S::zero() && v <= S::one()
}

/// Rest points known in closed form, computed in the scalar type `S` (exact
/// with a rational type). Vertices are always present. For the punishment
/// game the P-D edge point
/// `x_P = (P - S + p) / (R - S - T + P + p + q)` is added; for the
/// three-strategy threat game the PT-D edge point, the point on the D-DT
/// edge where PT's payoff equals the defectors' and the D-DT segment.
pub fn closed_form_candidates<S: Scalar>(
    variant: Variant,
    params: &GameParams<S>,
) -> Result<ClosedFormSet<S>> {
    params.validate()?;
    if variant == Variant::Threat4 {
        return Err(Error::UnsupportedVariant(variant));
    }
    let GameParams {
        temptation: t,
        reward: r,
        punishment: pp,
        sucker: s,
        punish_cost: p,
        penalty: q,
        signal_cost: theta,
    } = *params;
    let k = variant.len();
    let labels: Vec<&str> = variant.strategies().iter().map(|s| s.label()).collect();
    let mut set = ClosedFormSet {
        points: (0..k)
            .map(|i| ClosedFormPoint {
                label: format!("vertex {}", labels[i]),
                point: SimplexPoint::vertex(k, i),
                kind: RestPointKind::Point,
            })
            .collect(),
        omitted: Vec::new(),
    };
    let zero = S::zero();
    let one = S::one();

    let edge = |set: &mut ClosedFormSet<S>, label: String, den: S, nums: [S; 3]| {
        if den == zero {
            set.omitted.push(Omission {
                label,
                reason: "denominator is zero".into(),
            });
            return;
        }
        let coords: Vec<S> = nums.iter().map(|&n| n / den).collect();
        if coords.iter().all(|&c| in_unit(c)) {
            set.push_point(label, coords);
        } else {
            set.omitted.push(Omission {
                label,
                reason: "outside the simplex".into(),
            });
        }
    };

    match variant {
        Variant::Pdc => {
            let den = r - s - t + pp + p + q;
            let num_p = pp - s + p;
            edge(&mut set, "edge P-D".into(), den, [num_p, den - num_p, zero]);
        }
        Variant::Threat3 => {
            let den = r - s - t + pp + p + q + theta;
            edge(
                &mut set,
                "edge PT-D".into(),
                den,
                [pp - s + p + theta, r - t + q, zero],
            );
            let den = r - s + p + theta;
            edge(
                &mut set,
                "edge D-DT".into(),
                den,
                [zero, r - pp, pp - s + p + theta],
            );
            set.points.push(ClosedFormPoint {
                label: "segment D-DT".into(),
                point: SimplexPoint::from_unchecked(vec![zero, one, zero]),
                kind: RestPointKind::Segment {
                    end: SimplexPoint::from_unchecked(vec![zero, zero, one]),
                },
            });
        }
        Variant::Threat4 => unreachable!(),
    }
    Ok(set)
}

/// Closed-form rest points with their linear stability.
pub fn closed_form_rest_points(
    variant: Variant,
    params: &GameParams<f64>,
) -> Result<(Vec<RestPoint>, Vec<Omission>)> {
    let set = closed_form_candidates(variant, params)?;
    let m = payoff_matrix(variant, params)?;
    let points = set
        .points
        .into_iter()
        .map(|c| analyse(c.point, c.kind, RestPointSource::ClosedForm, &m))
        .collect::<Result<Vec<_>>>()?;
    Ok((points, set.omitted))
}

fn analyse(
    point: SimplexPoint<f64>,
    kind: RestPointKind<f64>,
    source: RestPointSource,
    m: &PayoffMatrix<f64>,
) -> Result<RestPoint> {
    // Segments are classified at their midpoint.
    let probe = match &kind {
        RestPointKind::Point => point.clone(),
        RestPointKind::Segment { end } => SimplexPoint::from_unchecked(
            point
                .as_slice()
                .iter()
                .zip(end.as_slice())
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        ),
    };
    let (classification, eigen_real_parts) = classify_rest_point(&probe, m)?;
    let support = probe.support();
    let face_classification = if support.len() >= 2 {
        let (vars, elim) = support.split_at(support.len() - 1);
        Some(Stability::from_real_parts(&real_eigen_parts(
            &reduced_jacobian(probe.as_slice(), m, vars, elim[0]),
        )))
    } else {
        None
    };
    let max_abs_gradient = max_abs(&gradient_raw(probe.as_slice(), m));
    Ok(RestPoint {
        point,
        kind,
        source,
        classification,
        eigen_real_parts,
        face_classification,
        max_abs_gradient,
    })
}

/// Jacobian of the field restricted to the coordinates `vars`, with `elim`
/// absorbing the simplex constraint (`x_elim = 1 - sum of the others`).
fn reduced_jacobian(x: &[f64], m: &PayoffMatrix<f64>, vars: &[usize], elim: usize) -> DMatrix<f64> {
    let n = vars.len();
    let h = CLASSIFY_FD_STEP;
    let mut jac = DMatrix::zeros(n, n);
    for (col, &j) in vars.iter().enumerate() {
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[j] += h;
        plus[elim] -= h;
        minus[j] -= h;
        minus[elim] += h;
        let gp = gradient_raw(&plus, m);
        let gm = gradient_raw(&minus, m);
        for (row, &i) in vars.iter().enumerate() {
            jac[(row, col)] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    jac
}

fn real_eigen_parts(jac: &DMatrix<f64>) -> Vec<f64> {
    let mut parts: Vec<f64> = match jac.nrows() {
        0 => Vec::new(),
        1 => vec![jac[(0, 0)]],
        _ => jac
            .clone()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .collect(),
    };
    parts.sort_by(|a, b| a.total_cmp(b));
    parts
}

/// Linear stability of a rest point from the eigenvalues of the Jacobian
/// in the reduced coordinates `x_1 .. x_{k-1}`.
pub fn classify_rest_point(
    point: &SimplexPoint<f64>,
    m: &PayoffMatrix<f64>,
) -> Result<(Stability, Vec<f64>)> {
    if point.dim() != m.size() {
        return Err(Error::Dimension {
            expected: m.size(),
            got: point.dim(),
        });
    }
    let residual = max_abs(&gradient_raw(point.as_slice(), m));
    if residual > REST_TOLERANCE {
        return Err(Error::NotRestPoint(residual));
    }
    let k = point.dim();
    let vars: Vec<usize> = (0..k - 1).collect();
    let parts = real_eigen_parts(&reduced_jacobian(point.as_slice(), m, &vars, k - 1));
    Ok((Stability::from_real_parts(&parts), parts))
}

fn project(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.max(0.0);
    }
    let total: f64 = x.iter().sum();
    if total > 0.0 {
        for v in x.iter_mut() {
            *v /= total;
        }
    }
}

/// Damped Gauss-Newton on the reduced gradient. The step uses the SVD
/// pseudo-inverse so seeds next to a line of rest points still converge.
fn newton(seed: &[f64], m: &PayoffMatrix<f64>) -> Option<Vec<f64>> {
    let k = seed.len();
    let vars: Vec<usize> = (0..k - 1).collect();
    let mut x = seed.to_vec();
    let mut residual = max_abs(&gradient_raw(&x, m));
    for _ in 0..NEWTON_MAX_ITERS {
        if residual <= NEWTON_TOLERANCE {
            return Some(x);
        }
        let g = gradient_raw(&x, m);
        let jac = reduced_jacobian(&x, m, &vars, k - 1);
        let rhs = DMatrix::from_iterator(k - 1, 1, g[..k - 1].iter().map(|v| -v));
        let step = jac.svd(true, true).solve(&rhs, 1e-12).ok()?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..LINE_SEARCH_HALVINGS {
            let mut trial = x.clone();
            let mut shift = 0.0;
            for (r, &j) in vars.iter().enumerate() {
                trial[j] += lambda * step[(r, 0)];
                shift += lambda * step[(r, 0)];
            }
            trial[k - 1] -= shift;
            project(&mut trial);
            let r = max_abs(&gradient_raw(&trial, m));
            if r < residual {
                x = trial;
                residual = r;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    (residual <= NEWTON_TOLERANCE).then_some(x)
}

/// Supports (as index lists) of the faces on which the field vanishes
/// identically.
fn null_faces(k: usize, m: &PayoffMatrix<f64>) -> Vec<Vec<usize>> {
    let mut faces = Vec::new();
    for mask in 1u32..(1 << k) {
        let support: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if support.len() < 2 {
            continue;
        }
        let vanishes = compositions(support.len(), FACE_PROBE_RESOLUTION)
            .into_iter()
            .all(|a| {
                let mut x = vec![0.0; k];
                for (&i, &ai) in support.iter().zip(&a) {
                    x[i] = ai as f64 / FACE_PROBE_RESOLUTION as f64;
                }
                max_abs(&gradient_raw(&x, m)) <= NEWTON_TOLERANCE
            });
        if vanishes {
            faces.push(support);
        }
    }
    faces
}

fn on_face(x: &[f64], support: &[usize]) -> bool {
    x.iter()
        .enumerate()
        .all(|(i, &v)| support.contains(&i) || v.abs() <= 1e-9)
}

fn edge_point(k: usize, a: usize, b: usize, s: f64) -> Vec<f64> {
    let mut x = vec![0.0; k];
    x[a] = 1.0 - s;
    x[b] = s;
    x
}

/// Points strictly inside the edge `a-b` where the growth rate
/// `Pi_j - Pi_bar` of some absent strategy `j` changes sign. On an edge of
/// rest points these separate the part that resists invasion by `j` from
/// the part that does not.
fn invasion_boundaries(k: usize, a: usize, b: usize, m: &PayoffMatrix<f64>) -> Vec<Vec<f64>> {
    let rate = |j: usize, s: f64| {
        let x = edge_point(k, a, b, s);
        let pi = payoffs_raw(&x, m);
        pi[j] - mean_raw(&x, &pi)
    };
    let mut found = Vec::new();
    for j in (0..k).filter(|&j| j != a && j != b) {
        let samples: Vec<(f64, f64)> = (0..=EDGE_SCAN_POINTS)
            .map(|i| {
                let s = i as f64 / EDGE_SCAN_POINTS as f64;
                (s, rate(j, s))
            })
            .collect();
        if samples.iter().all(|&(_, g)| g.abs() <= 1e-12) {
            continue;
        }
        for w in samples.windows(2) {
            let (mut lo, mut glo) = w[0];
            let (mut hi, ghi) = w[1];
            let root = if ghi == 0.0 {
                Some(hi)
            } else if glo * ghi < 0.0 {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let gm = rate(j, mid);
                    if gm == 0.0 || (hi - lo) < 1e-16 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if glo * gm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        glo = gm;
                    }
                }
                Some(0.5 * (lo + hi))
            } else {
                None
            };
            if let Some(s) = root {
                if s > 1e-9 && s < 1.0 - 1e-9 {
                    found.push(edge_point(k, a, b, s));
                }
            }
        }
    }
    found
}

/// Rest points found by Newton iteration from every point of the
/// barycentric lattice of resolution `resolution` (at least 10).
///
/// Edges on which the field vanishes identically are reported as segments,
/// together with the points on them where an absent strategy's growth rate
/// changes sign; Newton limits lying on such a face are dropped.
pub fn numeric_rest_points(
    variant: Variant,
    params: &GameParams<f64>,
    resolution: usize,
) -> Result<Vec<RestPoint>> {
    if resolution < 10 {
        return Err(Error::InvalidConfig(format!(
            "resolution must be >= 10, got {resolution}"
        )));
    }
    let m = payoff_matrix(variant, params)?;
    let k = variant.len();
    let faces = null_faces(k, &m);

    let seeds = lattice::<f64>(k, resolution);
    let limits: Vec<Option<Vec<f64>>> =
        seeds.par_iter().map(|s| newton(s.as_slice(), &m)).collect();

    let mut kept: Vec<Vec<f64>> = (0..k)
        .map(|i| SimplexPoint::<f64>::vertex(k, i).into_vec())
        .collect();
    let is_new = |kept: &[Vec<f64>], x: &[f64]| {
        kept.iter().all(|y| {
            y.iter()
                .zip(x)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
                > DEDUP_TOLERANCE
        })
    };
    for x in limits.into_iter().flatten() {
        if faces.iter().any(|f| on_face(&x, f)) {
            continue;
        }
        if is_new(&kept, &x) {
            kept.push(x);
        }
    }

    let mut out = kept
        .into_iter()
        .map(|x| {
            analyse(
                SimplexPoint::from_unchecked(x),
                RestPointKind::Point,
                RestPointSource::Numeric,
                &m,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let mut extra: Vec<Vec<f64>> = Vec::new();
    for face in faces.iter().filter(|f| f.len() == 2) {
        let (a, b) = (face[0], face[1]);
        out.push(analyse(
            SimplexPoint::vertex(k, a),
            RestPointKind::Segment {
                end: SimplexPoint::vertex(k, b),
            },
            RestPointSource::Numeric,
            &m,
        )?);
        for x in invasion_boundaries(k, a, b, &m) {
            let known = out
                .iter()
                .map(|r| r.point.as_slice().to_vec())
                .chain(extra.iter().cloned())
                .collect::<Vec<_>>();
            if is_new(&known, &x) {
                extra.push(x);
            }
        }
    }
    for x in extra {
        out.push(analyse(
            SimplexPoint::from_unchecked(x),
            RestPointKind::Point,
            RestPointSource::Numeric,
            &m,
        )?);
    }
    Ok(out)
}

/// Labels a rest point by its support, e.g. `PT-D`.
pub fn support_label(variant: Variant, point: &SimplexPoint<f64>) -> String {
    let names: Vec<&str> = point
        .support()
        .into_iter()
        .map(|i| variant.strategies()[i])
        .map(Strategy::label)
        .collect();
    names.join("-")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn reference() -> GameParams<f64> {
        GameParams::reference()
    }

    fn find<'a>(points: &'a [RestPoint], target: &[f64]) -> Option<&'a RestPoint> {
        points.iter().filter(|r| !r.is_segment()).find(|r| {
            r.point
                .as_slice()
                .iter()
                .zip(target)
                .all(|(a, b)| (a - b).abs() <= 1e-6)
        })
    }

    #[test]
    fn pdc_edge_point_is_one_half() {
        let set = closed_form_candidates(Variant::Pdc, &reference()).unwrap();
        let edge = set.points.iter().find(|p| p.label == "edge P-D").unwrap();
        assert_eq!(edge.point.as_slice(), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn threat3_closed_forms_exact() {
        let r = |n, d| Rational64::new(n, d);
        let set = closed_form_candidates(Variant::Threat3, &GameParams::<Rational64>::reference())
            .unwrap();
        let get = |label: &str| {
            set.points
                .iter()
                .find(|p| p.label == label)
                .unwrap()
                .point
                .clone()
        };
        assert_eq!(get("edge PT-D").as_slice(), &[r(3, 5), r(2, 5), r(0, 1)]);
        assert_eq!(get("edge D-DT").as_slice(), &[r(0, 1), r(1, 4), r(3, 4)]);
        assert!(set
            .points
            .iter()
            .any(|p| matches!(p.kind, RestPointKind::Segment { .. })));
    }

    #[test]
    fn out_of_simplex_forms_are_omitted() {
        // q small: (R - T + q) < 0 puts the PT-D point outside the simplex
        let mut params = reference();
        params.penalty = 0.5;
        let set = closed_form_candidates(Variant::Threat3, &params).unwrap();
        assert!(set.points.iter().all(|p| p.label != "edge PT-D"));
        assert!(set
            .omitted
            .iter()
            .any(|o| o.label == "edge PT-D" && o.reason.contains("outside")));
    }

    #[test]
    fn zero_denominator_is_reported() {
        // R - S - T + P + p + q = 1 + 1 - 2 + 0 + 0 + 0
        let params = GameParams::new(2.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0);
        let set = closed_form_candidates(Variant::Pdc, &params).unwrap();
        assert_eq!(set.omitted[0].reason, "denominator is zero");
        assert_eq!(set.points.len(), 3);
    }

    #[test]
    fn threat4_has_no_closed_forms() {
        assert!(matches!(
            closed_form_candidates(Variant::Threat4, &reference()),
            Err(Error::UnsupportedVariant(Variant::Threat4))
        ));
    }

    #[test]
    fn all_defector_vertex_is_stable() {
        let m = payoff_matrix(Variant::Pdc, &reference()).unwrap();
        let (stab, parts) = classify_rest_point(&SimplexPoint::vertex(3, 1), &m).unwrap();
        assert_eq!(stab, Stability::Stable);
        // invasion rates of P and C into all-D: S - p - P and S - P
        assert!((parts[0] - -2.0).abs() < 1e-6 && (parts[1] - -1.0).abs() < 1e-6);
    }

    #[test]
    fn defector_edge_point_is_marginal() {
        let m = payoff_matrix(Variant::Threat3, &reference()).unwrap();
        let x = SimplexPoint::new(vec![0.0, 0.5, 0.5]).unwrap();
        assert_eq!(classify_rest_point(&x, &m).unwrap().0, Stability::Marginal);
    }

    #[test]
    fn pdc_edge_point_linearization() {
        // Eigenvalues: along the P-D edge d/dx[x(1-x)(4x-2)] = 1 at x = 1/2,
        // transversal growth of C is Pi_C - Pi_bar = 0 - (-1/2).
        let (points, _) = closed_form_rest_points(Variant::Pdc, &reference()).unwrap();
        let edge = find(&points, &[0.5, 0.5, 0.0]).unwrap();
        assert!((edge.eigen_real_parts[0] - 0.5).abs() < 1e-6);
        assert!((edge.eigen_real_parts[1] - 1.0).abs() < 1e-6);
        assert_eq!(edge.classification, Stability::Unstable);
        assert_eq!(edge.face_classification, Some(Stability::Unstable));
    }

    #[test]
    fn not_a_rest_point() {
        let m = payoff_matrix(Variant::Threat3, &reference()).unwrap();
        let x = SimplexPoint::new(vec![0.3, 0.3, 0.4]).unwrap();
        assert!(matches!(
            classify_rest_point(&x, &m),
            Err(Error::NotRestPoint(_))
        ));
    }

    #[test]
    fn numeric_matches_pdc_closed_form() {
        let pts = numeric_rest_points(Variant::Pdc, &reference(), 12).unwrap();
        assert!(find(&pts, &[0.5, 0.5, 0.0]).is_some());
        for i in 0..3 {
            assert!(find(&pts, SimplexPoint::<f64>::vertex(3, i).as_slice()).is_some());
        }
        // P-C edge is neutral; D invades it where x_P < (T - R) / q = 1/3
        assert!(pts.iter().any(|r| r.is_segment()));
        assert!(find(&pts, &[1.0 / 3.0, 0.0, 2.0 / 3.0]).is_some());
        assert!(pts.iter().all(|r| r.max_abs_gradient <= REST_TOLERANCE));
    }

    #[test]
    fn numeric_matches_threat3_closed_forms() {
        let pts = numeric_rest_points(Variant::Threat3, &reference(), 13).unwrap();
        assert!(find(&pts, &[0.6, 0.4, 0.0]).is_some());
        let crit = find(&pts, &[0.0, 0.25, 0.75]).unwrap();
        assert_eq!(crit.classification, Stability::Marginal);
        let segs: Vec<_> = pts.iter().filter(|r| r.is_segment()).collect();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].point.as_slice(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn numeric_threat4_finds_vertices() {
        let pts = numeric_rest_points(Variant::Threat4, &reference(), 10).unwrap();
        for i in 0..4 {
            assert!(find(&pts, SimplexPoint::<f64>::vertex(4, i).as_slice()).is_some());
        }
        assert!(find(&pts, &[0.6, 0.4, 0.0, 0.0]).is_some());
    }

    #[test]
    fn resolution_floor() {
        assert!(numeric_rest_points(Variant::Pdc, &reference(), 9).is_err());
    }

    #[test]
    fn labels_follow_support() {
        let x = SimplexPoint::new(vec![0.6, 0.4, 0.0]).unwrap();
        assert_eq!(support_label(Variant::Threat3, &x), "PT-D");
    }
}
