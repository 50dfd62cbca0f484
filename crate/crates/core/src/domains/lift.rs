//! Sphere-lift grids and greedy farthest-point selection.
//!
//! Each domain's arccos metric is the quotient of a round-sphere metric
//! under a sign-flip action on a canonical lift:
//!
//! * interval: `t ↦ (t, √(1−t²))` on the upper unit semicircle;
//! * sphere `S^1`/`S^2`: the identity;
//! * ball `B²`: `x ↦ (x, √(1−‖x‖²))` on the upper hemisphere;
//! * simplex `△²`: `x ↦ (√x_1, √x_2, √(1−|x|))` on the positive octant;
//! * conic surface: `(x, t) ↦ (√t cos(φ/2), √t sin(φ/2), √(1−t))`, with a
//!   two-point orbit `±(u_1, u_2)` from the half-angle seam.
//!
//! Candidate grids are therefore generated once on the circle or the
//! 2-sphere and folded through the lift, and metric balls can be searched
//! with a chordal spatial hash.

use super::{Domain, DomainSpec, PointOnDomain};
use crate::error::{Error, Result};
use rand::Rng;
use std::collections::{BinaryHeap, HashMap};

/// A maximal `epsilon`-separated point set.
#[derive(Debug, Clone)]
pub struct SeparatedSet {
    pub points: Vec<PointOnDomain>,
    pub epsilon: f64,
    /// Largest observed number of set members whose `epsilon`-balls cover a
    /// single grid point (the covering-multiplicity constant).
    pub multiplicity_bound: usize,
    /// Largest grid-point distance to the set; below `epsilon` on success.
    pub covering_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LiftKind {
    IntervalArc,
    Circle,
    Sphere2,
    UpperHemisphere,
    Octant,
    ConeHalf,
}

fn lift_kind(spec: &DomainSpec) -> Result<LiftKind> {
    match spec {
        DomainSpec::Interval { .. } => Ok(LiftKind::IntervalArc),
        DomainSpec::Sphere { dim: 2 } => Ok(LiftKind::Circle),
        DomainSpec::Sphere { dim: 3 } => Ok(LiftKind::Sphere2),
        DomainSpec::Ball { dim: 2, .. } => Ok(LiftKind::UpperHemisphere),
        DomainSpec::Simplex { dim: 2, .. } => Ok(LiftKind::Octant),
        DomainSpec::ConicSurface { dim: 2, .. } => Ok(LiftKind::ConeHalf),
        other => Err(Error::Unsupported(format!(
            "point grids are implemented for the interval, S^1, S^2, B^2, the 2-simplex, \
             and the 3d conic surface; got {other:?}"
        ))),
    }
}

fn lift_point(kind: LiftKind, p: &PointOnDomain) -> [f64; 3] {
    let c = p.coords();
    match kind {
        LiftKind::IntervalArc => {
            let t = c[0];
            [t, (1.0 - t * t).max(0.0).sqrt(), 0.0]
        }
        LiftKind::Circle => [c[0], c[1], 0.0],
        LiftKind::Sphere2 => [c[0], c[1], c[2]],
        LiftKind::UpperHemisphere => {
            let r2 = c[0] * c[0] + c[1] * c[1];
            [c[0], c[1], (1.0 - r2).max(0.0).sqrt()]
        }
        LiftKind::Octant => {
            let rest = (1.0 - c[0] - c[1]).max(0.0);
            [c[0].max(0.0).sqrt(), c[1].max(0.0).sqrt(), rest.sqrt()]
        }
        LiftKind::ConeHalf => {
            let t = c[2];
            let half = 0.5 * c[1].atan2(c[0]);
            let rt = t.max(0.0).sqrt();
            [rt * half.cos(), rt * half.sin(), (1.0 - t).max(0.0).sqrt()]
        }
    }
}

fn unlift(kind: LiftKind, u: [f64; 3]) -> PointOnDomain {
    let coords = match kind {
        LiftKind::IntervalArc => vec![u[0].clamp(-1.0, 1.0)],
        LiftKind::Circle => {
            let n = (u[0] * u[0] + u[1] * u[1]).sqrt();
            vec![u[0] / n, u[1] / n]
        }
        LiftKind::Sphere2 => vec![u[0], u[1], u[2]],
        LiftKind::UpperHemisphere => vec![u[0], u[1]],
        LiftKind::Octant => vec![u[0] * u[0], u[1] * u[1]],
        LiftKind::ConeHalf => {
            let t = (1.0 - u[2] * u[2]).clamp(0.0, 1.0);
            let phi = 2.0 * u[1].atan2(u[0]);
            vec![t * phi.cos(), t * phi.sin(), t]
        }
    };
    PointOnDomain::from_coords_unchecked(coords)
}

/// Fold an arbitrary sphere point into the canonical lift region.
fn canonicalize(kind: LiftKind, u: [f64; 3]) -> [f64; 3] {
    match kind {
        LiftKind::IntervalArc => [u[0], u[1].abs(), 0.0],
        LiftKind::Circle | LiftKind::Sphere2 => u,
        LiftKind::UpperHemisphere => [u[0], u[1], u[2].abs()],
        LiftKind::Octant => [u[0].abs(), u[1].abs(), u[2].abs()],
        LiftKind::ConeHalf => {
            let v = if u[0] < 0.0 || (u[0] == 0.0 && u[1] < 0.0) {
                [-u[0], -u[1], u[2].abs()]
            } else {
                [u[0], u[1], u[2].abs()]
            };
            v
        }
    }
}

/// Intrinsic distance between canonical lifts.
fn lift_distance(kind: LiftKind, u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let planar = u[0] * v[0] + u[1] * v[1];
    let c = match kind {
        LiftKind::ConeHalf => planar.abs() + u[2] * v[2],
        _ => planar + u[2] * v[2],
    };
    c.clamp(-1.0, 1.0).acos()
}

/// Hash positions of a site: the whole sign orbit, so chordal queries at the
/// canonical position of another point see it across the fold seam.
fn orbit(kind: LiftKind, u: [f64; 3]) -> Vec<[f64; 3]> {
    match kind {
        LiftKind::ConeHalf => vec![u, [-u[0], -u[1], u[2]]],
        _ => vec![u],
    }
}

fn chord(r: f64) -> f64 {
    2.0 * (r.clamp(0.0, std::f64::consts::PI) / 2.0).sin()
}

/// Uniform grid on the 2-sphere with covering mesh at most `h`: rings of
/// polar angle spacing `h`, each ring filled at arc spacing at most `h`.
fn sphere_ring_grid(h: f64) -> Vec<[f64; 3]> {
    let n_theta = (std::f64::consts::PI / h).ceil().max(2.0) as usize;
    let dtheta = std::f64::consts::PI / n_theta as f64;
    let mut out = Vec::new();
    for i in 0..n_theta {
        let theta = (i as f64 + 0.5) * dtheta;
        let (st, ct) = theta.sin_cos();
        let n_phi = ((2.0 * std::f64::consts::PI * st / h).ceil() as usize).max(1);
        for j in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            out.push([st * phi.cos(), st * phi.sin(), ct]);
        }
    }
    out
}

fn candidate_lifts(kind: LiftKind, mesh: f64) -> Vec<[f64; 3]> {
    match kind {
        LiftKind::IntervalArc => {
            let n = (std::f64::consts::PI / mesh).ceil().max(1.0) as usize;
            (0..=n)
                .map(|i| {
                    let theta = std::f64::consts::PI * i as f64 / n as f64;
                    [theta.cos(), theta.sin(), 0.0]
                })
                .collect()
        }
        LiftKind::Circle => {
            let n = (2.0 * std::f64::consts::PI / mesh).ceil().max(3.0) as usize;
            (0..n)
                .map(|j| {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                    [phi.cos(), phi.sin(), 0.0]
                })
                .collect()
        }
        _ => {
            // Boundary anchors first: pinning corners, apex, rim, and
            // equator keeps the extreme cells aligned across scales, the
            // way the interval grid always contains its endpoints.
            let mut cands: Vec<[f64; 3]> = Vec::new();
            match kind {
                LiftKind::Octant => {
                    cands.extend([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
                }
                LiftKind::ConeHalf => {
                    cands.push([0.0, 0.0, 1.0]); // apex
                    for j in 0..8 {
                        let psi = -std::f64::consts::FRAC_PI_2
                            + std::f64::consts::PI * (j as f64 + 0.5) / 8.0;
                        cands.push([psi.cos(), psi.sin(), 0.0]); // rim
                    }
                }
                LiftKind::UpperHemisphere => {
                    for j in 0..12 {
                        let psi = 2.0 * std::f64::consts::PI * j as f64 / 12.0;
                        cands.push([psi.cos(), psi.sin(), 0.0]); // equator
                    }
                }
                _ => {}
            }
            cands.extend(
                sphere_ring_grid(mesh)
                    .into_iter()
                    .map(|u| canonicalize(kind, u)),
            );
            cands
        }
    }
}

struct ChordHash {
    cell: f64,
    map: HashMap<(i32, i32, i32), Vec<u32>>,
}

impl ChordHash {
    fn new(cell: f64) -> Self {
        Self {
            cell: cell.max(1e-6),
            map: HashMap::new(),
        }
    }

    fn key(&self, u: &[f64; 3]) -> (i32, i32, i32) {
        (
            (u[0] / self.cell).floor() as i32,
            (u[1] / self.cell).floor() as i32,
            (u[2] / self.cell).floor() as i32,
        )
    }

    fn insert(&mut self, u: &[f64; 3], idx: u32) {
        self.map.entry(self.key(u)).or_default().push(idx);
    }

    /// Visit indices stored in all cells intersecting the chordal ball of
    /// radius `radius` around `u`. May visit an index more than once.
    fn visit_near(&self, u: &[f64; 3], radius: f64, mut f: impl FnMut(u32)) {
        let reach = (radius / self.cell).ceil() as i32 + 1;
        let (cx, cy, cz) = self.key(u);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                for dz in -reach..=reach {
                    if let Some(v) = self.map.get(&(cx + dx, cy + dy, cz + dz)) {
                        for &i in v {
                            f(i);
                        }
                    }
                }
            }
        }
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    idx: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Max-heap by distance; ties broken toward the earlier grid index,
        // which enumerates lexicographically in (ring, angle).
        self.dist
            .partial_cmp(&other.dist)
            .unwrap()
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Greedy farthest-point selection over the candidate lifts. Stops when the
/// farthest remaining candidate is closer than `stop_dist`, or when `max_pts`
/// points have been selected.
fn farthest_point_select(
    kind: LiftKind,
    cands: &[[f64; 3]],
    stop_dist: f64,
    max_pts: usize,
) -> (Vec<u32>, f64) {
    let n = cands.len();
    assert!(n > 0);
    let mut min_dist = vec![f64::INFINITY; n];
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let cell = chord(2.0 * stop_dist.max(1e-3));
    let mut hash = ChordHash::new(cell);
    for (i, u) in cands.iter().enumerate() {
        hash.insert(u, i as u32);
    }

    // Start from the lexicographically smallest domain point.
    let start = (0..n)
        .min_by(|&a, &b| {
            let pa = unlift(kind, cands[a]);
            let pb = unlift(kind, cands[b]);
            pa.coords()
                .iter()
                .zip(pb.coords())
                .map(|(x, y)| x.partial_cmp(y).unwrap())
                .find(|o| *o != std::cmp::Ordering::Equal)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap() as u32;

    let mut selected = vec![start];
    let mut covering = 0.0_f64;
    min_dist[start as usize] = 0.0;
    for (j, u) in cands.iter().enumerate() {
        let d = lift_distance(kind, &cands[start as usize], u);
        if d < min_dist[j] {
            min_dist[j] = d;
            heap.push(HeapEntry { dist: d, idx: j as u32 });
        }
    }

    let full_scan_radius = 8.0 * stop_dist;
    while selected.len() < max_pts {
        // Pop until an up-to-date entry appears.
        let (d, idx) = loop {
            match heap.pop() {
                None => break (0.0, u32::MAX),
                Some(e) => {
                    if (e.dist - min_dist[e.idx as usize]).abs() <= 0.0 {
                        break (e.dist, e.idx);
                    }
                }
            }
        };
        if idx == u32::MAX || d < stop_dist {
            covering = d;
            break;
        }
        selected.push(idx);
        min_dist[idx as usize] = 0.0;
        let center = cands[idx as usize];
        let mut relax = |j: u32| {
            let j = j as usize;
            let dn = lift_distance(kind, &center, &cands[j]);
            if dn < min_dist[j] {
                min_dist[j] = dn;
                heap.push(HeapEntry { dist: dn, idx: j as u32 });
            }
        };
        let radius = chord(d);
        let reach_cells = (radius / hash.cell).ceil() as i64 + 1;
        if d > full_scan_radius || reach_cells > 8 {
            for j in 0..n as u32 {
                relax(j);
            }
        } else {
            for pos in orbit(kind, center) {
                hash.visit_near(&pos, radius, &mut relax);
            }
        }
    }
    (selected, covering)
}

pub(super) fn maximal_separated_set(domain: &Domain, epsilon: f64) -> Result<SeparatedSet> {
    if !(epsilon > 0.0 && epsilon <= std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!(
            "separation must lie in (0, pi], got {epsilon}"
        )));
    }
    let kind = lift_kind(domain.spec())?;
    let mesh = epsilon / 4.0;
    if mesh < 1e-4 {
        return Err(Error::Resolution(format!(
            "separation {epsilon} needs a candidate mesh below 1e-4"
        )));
    }
    let cands = candidate_lifts(kind, mesh);
    let (selected, covering) = farthest_point_select(kind, &cands, epsilon, usize::MAX);

    // Covering multiplicity: how many selected centers cover one grid point.
    let mut site_hash = ChordHash::new(chord(epsilon));
    let mut sites: Vec<[f64; 3]> = Vec::new();
    for &s in &selected {
        for pos in orbit(kind, cands[s as usize]) {
            site_hash.insert(&pos, sites.len() as u32);
            sites.push(pos);
        }
    }
    let qr = chord(epsilon) * 1.0000001;
    let mut multiplicity = 0usize;
    for u in &cands {
        let mut count = 0usize;
        let mut seen: Vec<u32> = Vec::new();
        site_hash.visit_near(u, qr, |i| {
            if !seen.contains(&i) {
                seen.push(i);
                let v = &sites[i as usize];
                let c = (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]).clamp(-1.0, 1.0);
                if c.acos() <= epsilon {
                    count += 1;
                }
            }
        });
        multiplicity = multiplicity.max(count);
    }

    let points = selected
        .iter()
        .map(|&i| unlift(kind, cands[i as usize]))
        .collect();
    Ok(SeparatedSet {
        points,
        epsilon,
        multiplicity_bound: multiplicity,
        covering_radius: covering,
    })
}

pub(super) fn quasi_uniform_points(domain: &Domain, count: usize) -> Result<Vec<PointOnDomain>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let kind = lift_kind(domain.spec())?;
    let area_scale = match kind {
        LiftKind::IntervalArc | LiftKind::Circle => {
            // 1d: spacing ~ length / count
            std::f64::consts::PI / count as f64
        }
        _ => (4.0 * std::f64::consts::PI / count as f64).sqrt(),
    };
    let mesh = (area_scale / 6.0).max(1.5e-3);
    let cands = candidate_lifts(kind, mesh);
    let (selected, _) = farthest_point_select(kind, &cands, 0.0, count.min(cands.len()));
    Ok(selected
        .iter()
        .map(|&i| unlift(kind, cands[i as usize]))
        .collect())
}

pub(super) fn random_point(domain: &Domain, rng: &mut impl Rng) -> PointOnDomain {
    match lift_kind(domain.spec()) {
        Ok(kind @ (LiftKind::IntervalArc | LiftKind::Circle)) => {
            let max = if kind == LiftKind::IntervalArc {
                std::f64::consts::PI
            } else {
                2.0 * std::f64::consts::PI
            };
            let theta = rng.gen_range(0.0..max);
            unlift(kind, [theta.cos(), theta.sin(), 0.0])
        }
        Ok(kind) => {
            // Uniform on the round sphere, folded through the lift.
            loop {
                let u: [f64; 3] = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ];
                let n2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
                if n2 > 1e-6 && n2 <= 1.0 {
                    let n = n2.sqrt();
                    return unlift(kind, canonicalize(kind, [u[0] / n, u[1] / n, u[2] / n]));
                }
            }
        }
        Err(_) => unreachable!("random_point on unsupported lift"),
    }
}

/// Points at metric distance roughly `dist` from the domain boundary
/// (empty for the sphere, which has none).
pub(super) fn boundary_adjacent_points(domain: &Domain, dist: f64) -> Vec<PointOnDomain> {
    let s = dist.sin();
    let c = dist.cos();
    match domain.spec() {
        DomainSpec::Interval { .. } => {
            vec![
                PointOnDomain::from_coords_unchecked(vec![dist.cos()]),
                PointOnDomain::from_coords_unchecked(vec![-(dist.cos())]),
            ]
        }
        DomainSpec::Sphere { .. } => Vec::new(),
        DomainSpec::Ball { .. } => [0.4_f64, 2.1]
            .iter()
            .map(|&phi| {
                PointOnDomain::from_coords_unchecked(vec![c * phi.cos(), c * phi.sin()])
            })
            .collect(),
        DomainSpec::Simplex { .. } => {
            // Near the edge x_2 = 0 and near the hypotenuse 1 − |x| = 0.
            let u = [0.82 * c, s, (1.0 - (0.82 * c).powi(2) - s * s).max(0.0).sqrt()];
            let v = [0.77 * c, (1.0 - (0.77 * c).powi(2) - s * s).max(0.0).sqrt(), s];
            vec![
                PointOnDomain::from_coords_unchecked(vec![u[0] * u[0], u[1] * u[1]]),
                PointOnDomain::from_coords_unchecked(vec![v[0] * v[0], v[1] * v[1]]),
            ]
        }
        DomainSpec::ConicSurface { .. } => {
            // Near the apex (t ≈ dist²) and near the rim (t ≈ cos² dist).
            let t_apex = (s * s).min(1.0);
            let t_rim = (c * c).max(0.0);
            vec![
                PointOnDomain::from_coords_unchecked(vec![t_apex, 0.0, t_apex]),
                PointOnDomain::from_coords_unchecked(vec![
                    t_rim * 0.9_f64.cos(),
                    t_rim * 0.9_f64.sin(),
                    t_rim,
                ]),
            ]
        }
    }
}

impl Domain {
    /// Points at metric distance about `dist` from the boundary; empty for
    /// boundaryless domains.
    pub fn boundary_adjacent_points(&self, dist: f64) -> Vec<PointOnDomain> {
        boundary_adjacent_points(self, dist)
    }

    /// Index of the nearest site for each query point (used for the
    /// Voronoi-mass seeding of cubature weights).
    pub fn assign_to_nearest(
        &self,
        sites: &[PointOnDomain],
        queries: &[PointOnDomain],
    ) -> Result<Vec<usize>> {
        let kind = lift_kind(self.spec())?;
        let site_lifts: Vec<[f64; 3]> = sites.iter().map(|p| lift_point(kind, p)).collect();
        // Hash over orbit positions; search radius grows until a site shows.
        let mut spacing = 0.2_f64;
        if sites.len() > 4 {
            // estimate typical spacing from the site count
            let area = 4.0 * std::f64::consts::PI;
            spacing = (area / sites.len() as f64).sqrt().clamp(1e-3, 1.0);
        }
        let mut hash = ChordHash::new(chord(2.0 * spacing));
        for (i, u) in site_lifts.iter().enumerate() {
            for pos in orbit(kind, *u) {
                hash.insert(&pos, i as u32);
            }
        }
        let mut out = Vec::with_capacity(queries.len());
        for q in queries {
            let uq = lift_point(kind, q);
            let mut best = (f64::INFINITY, usize::MAX);
            let mut radius = 2.0 * spacing;
            while best.1 == usize::MAX {
                hash.visit_near(&uq, chord(radius), |i| {
                    let d = lift_distance(kind, &uq, &site_lifts[i as usize]);
                    if d < best.0 || (d == best.0 && (i as usize) < best.1) {
                        best = (d, i as usize);
                    }
                });
                // The hash box may truncate the true nearest; only accept a
                // hit comfortably inside the searched radius.
                if best.1 != usize::MAX && best.0 > 0.8 * radius {
                    best = (f64::INFINITY, usize::MAX);
                }
                radius *= 2.0;
                if radius > 8.0 {
                    // fall back to a full scan
                    for (i, s) in site_lifts.iter().enumerate() {
                        let d = lift_distance(kind, &uq, s);
                        if d < best.0 {
                            best = (d, i);
                        }
                    }
                    break;
                }
            }
            out.push(best.1);
        }
        Ok(out)
    }

    /// A deterministic companion point at metric distance at most `dist`
    /// from `p` (moves along a fixed tangent direction of the lift).
    pub fn nearby_point(&self, p: &PointOnDomain, dist: f64) -> PointOnDomain {
        let kind = match lift_kind(self.spec()) {
            Ok(k) => k,
            Err(_) => return p.clone(),
        };
        let u = lift_point(kind, p);
        let reference = [0.3100236_f64, 0.9498711, 0.0412345];
        let proj: f64 = u.iter().zip(&reference).map(|(&a, &b)| a * b).sum();
        let mut tangent = [
            reference[0] - proj * u[0],
            reference[1] - proj * u[1],
            reference[2] - proj * u[2],
        ];
        if matches!(kind, LiftKind::IntervalArc | LiftKind::Circle) {
            // stay in the plane of the circle
            tangent[2] = 0.0;
        }
        let norm: f64 = tangent.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm < 1e-9 {
            return p.clone();
        }
        let (s, c) = dist.sin_cos();
        let v = [
            c * u[0] + s * tangent[0] / norm,
            c * u[1] + s * tangent[1] / norm,
            c * u[2] + s * tangent[2] / norm,
        ];
        let v = canonicalize(kind, v);
        // Interval endpoints: folding may shorten the step, never lengthen.
        unlift(kind, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_fps_matches_arc_spacing() {
        let d = Domain::new(DomainSpec::interval(0.0, 0.0).unwrap());
        let set = d.maximal_separated_set(std::f64::consts::FRAC_PI_4).unwrap();
        assert_eq!(set.points.len(), 5);
        let mut angles: Vec<f64> = set
            .points
            .iter()
            .map(|p| p.coords()[0].clamp(-1.0, 1.0).acos())
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, a) in angles.iter().enumerate() {
            assert!(
                (a - k as f64 * std::f64::consts::FRAC_PI_4).abs() < 1e-9,
                "angle {a} vs expected {}",
                k as f64 * std::f64::consts::FRAC_PI_4
            );
        }
    }

    #[test]
    fn sphere_set_is_separated_and_covering() {
        let d = Domain::new(DomainSpec::sphere(3).unwrap());
        let eps = 0.5;
        let set = d.maximal_separated_set(eps).unwrap();
        assert!(set.points.len() > 10);
        assert!(set.covering_radius < eps);
        assert!(set.multiplicity_bound <= 20, "c_d = {}", set.multiplicity_bound);
        for i in 0..set.points.len() {
            for j in 0..i {
                let dist = d.distance(&set.points[i], &set.points[j]);
                assert!(dist >= eps - 1e-9, "pair at distance {dist}");
            }
        }
    }

    #[test]
    fn sphere_antipodal_case() {
        let d = Domain::new(DomainSpec::sphere(3).unwrap());
        let set = d.maximal_separated_set(std::f64::consts::PI).unwrap();
        assert!(set.points.len() <= 2);
        if set.points.len() == 2 {
            let dist = d.distance(&set.points[0], &set.points[1]);
            assert!(dist >= std::f64::consts::PI - 1e-9);
        }
    }

    #[test]
    fn folded_domains_separated() {
        for spec in [
            DomainSpec::ball(2, 0.5).unwrap(),
            DomainSpec::simplex(2, vec![0.5, 0.5, 0.5]).unwrap(),
            DomainSpec::conic_surface(2, 0.5).unwrap(),
        ] {
            let d = Domain::new(spec);
            let eps = 0.3;
            let set = d.maximal_separated_set(eps).unwrap();
            assert!(set.covering_radius < eps);
            for i in 0..set.points.len() {
                for j in 0..i {
                    let dist = d.distance(&set.points[i], &set.points[j]);
                    assert!(
                        dist >= eps - 1e-9,
                        "{}: pair at distance {dist}",
                        d.spec().kind_name()
                    );
                }
            }
        }
    }

    #[test]
    fn cone_seam_distance_is_continuous() {
        // Points just on either side of the angular seam are close on the
        // cone even though their canonical lifts are far apart.
        let d = Domain::new(DomainSpec::conic_surface(2, 0.5).unwrap());
        let t = 0.7_f64;
        let eps_angle = 1e-3;
        let a = d
            .point(&[
                t * (std::f64::consts::PI - eps_angle).cos(),
                t * (std::f64::consts::PI - eps_angle).sin(),
                t,
            ])
            .unwrap();
        let b = d
            .point(&[
                t * (std::f64::consts::PI + eps_angle).cos(),
                t * (std::f64::consts::PI + eps_angle).sin(),
                t,
            ])
            .unwrap();
        let dist = d.distance(&a, &b);
        assert!(dist < 2e-3, "seam distance {dist}");
        let ka = lift_kind(d.spec()).unwrap();
        let la = lift_point(ka, &a);
        let lb = lift_point(ka, &b);
        assert!((lift_distance(ka, &la, &lb) - dist).abs() < 1e-9);
    }

    #[test]
    fn quasi_uniform_and_random_points_are_members() {
        for spec in [
            DomainSpec::interval(0.0, 0.0).unwrap(),
            DomainSpec::sphere(3).unwrap(),
            DomainSpec::ball(2, 0.0).unwrap(),
            DomainSpec::simplex(2, vec![0.0, 0.0, 0.0]).unwrap(),
            DomainSpec::conic_surface(2, 0.5).unwrap(),
        ] {
            let d = Domain::new(spec);
            for p in d.quasi_uniform_points(16).unwrap() {
                assert!(d.point(p.coords()).is_ok(), "{:?}", p.coords());
            }
            let mut rng = rand::rngs::mock::StepRng::new(42, 0x9e3779b97f4a7c15);
            for _ in 0..8 {
                let p = random_point(&d, &mut rng);
                assert!(d.point(p.coords()).is_ok());
            }
        }
    }

    #[test]
    fn unsupported_dimension_errors() {
        let d = Domain::new(DomainSpec::ball(3, 0.5).unwrap());
        assert!(matches!(
            d.maximal_separated_set(0.5),
            Err(Error::Unsupported(_))
        ));
    }
}
