//! Finite metric spaces: point clouds, covering and packing numbers, and
//! entropy numbers with in-set centers.
//!
//! Three estimators are provided for the covering count at radius `eps`:
//! a deterministic farthest-point greedy (upper bound), an exact minimum
//! cover (1-D sweep for clouds on a line, branch-and-bound otherwise, capped
//! at 25 points), and a packing-based lower bound. Entropy numbers invert
//! those counts over the finite set of pairwise distances, which contains
//! every critical radius when centers are points of the set.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Hard cap for the branch-and-bound exact cover.
pub const EXACT_COVER_CAP: usize = 25;

/// Norm on the ambient space of a point cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    /// The `l_p` norm, `p >= 1`.
    P(f64),
    /// The sup norm.
    Inf,
}

impl Norm {
    pub fn validate(self) -> Result<Self> {
        match self {
            Norm::P(p) if p.is_finite() && p >= 1.0 => Ok(self),
            Norm::Inf => Ok(self),
            Norm::P(p) => Err(Error::validation(format!("norm exponent must be >= 1, got {p}"))),
        }
    }

    pub fn eval(self, v: impl Iterator<Item = f64>) -> f64 {
        match self {
            Norm::P(p) if p == 1.0 => v.map(f64::abs).sum(),
            Norm::P(p) if p == 2.0 => v.map(|x| x * x).sum::<f64>().sqrt(),
            Norm::P(p) => v.map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p),
            Norm::Inf => v.map(f64::abs).fold(0.0, f64::max),
        }
    }
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Norm::P(p) => write!(f, "{p}"),
            Norm::Inf => write!(f, "inf"),
        }
    }
}

/// A finite point cloud with its metric: coordinates plus an `l_p` norm, or an
/// explicit pseudo-distance table (symmetric, zero diagonal, triangle
/// inequality up to a construction tolerance).
#[derive(Debug, Clone)]
pub struct PointCloud {
    data: Vec<f64>,
    dim: usize,
    len: usize,
    norm: Norm,
    table: Option<Vec<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>, norm: Norm) -> Result<Self> {
        let norm = norm.validate()?;
        if points.is_empty() {
            return Err(Error::validation("PointCloud: no points"));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::validation("PointCloud: zero-dimensional points"));
        }
        let mut data = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::validation(format!(
                    "PointCloud: point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::validation(format!("PointCloud: point {i} has non-finite coordinate")));
            }
            data.extend_from_slice(p);
        }
        let len = points.len();
        Ok(PointCloud { data, dim, len, norm, table: None })
    }

    /// Builds a cloud from flat coordinate storage (row-major, `len * dim`).
    pub fn from_flat(data: Vec<f64>, dim: usize, norm: Norm) -> Result<Self> {
        let norm = norm.validate()?;
        if dim == 0 || data.is_empty() || data.len() % dim != 0 {
            return Err(Error::validation("PointCloud: flat data shape mismatch"));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::validation("PointCloud: non-finite coordinate"));
        }
        let len = data.len() / dim;
        Ok(PointCloud { data, dim, len, norm, table: None })
    }

    /// Attaches an explicit distance table, overriding the norm metric.
    ///
    /// `tol` bounds the permitted symmetry/triangle violation in absolute
    /// terms; use 1e-12 for exact tables and a quadrature-scaled tolerance for
    /// tables produced by numerical integration.
    pub fn with_table(mut self, table: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let n = self.len;
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::validation(format!("distance table must be {n}x{n}")));
        }
        let mut flat = vec![0.0; n * n];
        for (i, row) in table.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::validation(format!("table entry ({i},{j}) = {d} invalid")));
                }
                flat[i * n + j] = d;
            }
        }
        for i in 0..n {
            if flat[i * n + i].abs() > tol {
                return Err(Error::validation(format!("table diagonal entry {i} not zero")));
            }
            for j in (i + 1)..n {
                if (flat[i * n + j] - flat[j * n + i]).abs() > tol {
                    return Err(Error::validation(format!("table not symmetric at ({i},{j})")));
                }
            }
        }
        // Triangle inequality on all triples; O(n^3) but n is capped by the
        // sampled-metric grid limit.
        for i in 0..n {
            for j in 0..n {
                let dij = flat[i * n + j];
                for k in 0..n {
                    if dij > flat[i * n + k] + flat[k * n + j] + tol {
                        return Err(Error::validation(format!(
                            "triangle inequality fails at ({i},{j},{k}) by {}",
                            dij - flat[i * n + k] - flat[k * n + j]
                        )));
                    }
                }
            }
        }
        self.table = Some(flat);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Distance between points `i` and `j` of the cloud.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.table {
            Some(t) => t[i * self.len + j],
            None => {
                let a = self.point(i);
                let b = self.point(j);
                self.norm.eval(a.iter().zip(b).map(|(x, y)| x - y))
            }
        }
    }

    /// Distance from cloud point `i` to an external point (norm clouds only).
    pub fn dist_to(&self, i: usize, q: &[f64]) -> Result<f64> {
        if self.table.is_some() {
            return Err(Error::validation(
                "cross distances are undefined for table-backed clouds",
            ));
        }
        if q.len() != self.dim {
            return Err(Error::validation("dimension mismatch"));
        }
        let a = self.point(i);
        Ok(self.norm.eval(a.iter().zip(q).map(|(x, y)| x - y)))
    }

    /// Ambient norm of point `i` (norm clouds only).
    pub fn point_norm(&self, i: usize) -> Result<f64> {
        if self.table.is_some() {
            return Err(Error::validation("point norms undefined for table-backed clouds"));
        }
        Ok(self.norm.eval(self.point(i).iter().copied()))
    }

    /// True when the cloud lives on a line with the coordinate metric, where
    /// the exact cover has a polynomial sweep.
    pub fn is_line(&self) -> bool {
        self.table.is_none() && self.dim == 1
    }

    /// Sorted distinct pairwise distances (the candidate radii for inverting
    /// covering counts with in-set centers). Quadratic in the cloud size.
    pub fn distance_set(&self) -> Vec<f64> {
        let mut d = Vec::with_capacity(self.len * (self.len - 1) / 2 + 1);
        d.push(0.0);
        for i in 0..self.len {
            for j in (i + 1)..self.len {
                d.push(self.dist(i, j));
            }
        }
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        d.dedup();
        d
    }
}

/// How covering centers are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterPolicy {
    /// Centers are points of the cloud itself.
    InSet,
    /// Centers are drawn from a designated grid cloud (norm clouds only).
    FromGrid,
}

/// Which estimator produced a covering count or entropy number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMethod {
    Greedy,
    Exact,
    Packing,
}

impl std::fmt::Display for CoverMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverMethod::Greedy => write!(f, "GREEDY"),
            CoverMethod::Exact => write!(f, "EXACT"),
            CoverMethod::Packing => write!(f, "PACKING"),
        }
    }
}

/// A covering (or packing) certificate at a fixed radius.
#[derive(Debug, Clone)]
pub struct CoveringResult {
    pub epsilon: f64,
    pub count: usize,
    /// Indices of the chosen centers (into the cloud, or into the grid cloud
    /// under `CenterPolicy::FromGrid`); for packing results, the separated set.
    pub centers: Vec<usize>,
    pub method: CoverMethod,
}

fn validate_eps(eps: f64) -> Result<f64> {
    if eps.is_finite() && eps >= 0.0 {
        Ok(eps)
    } else {
        Err(Error::validation(format!("radius must be finite and >= 0, got {eps}")))
    }
}

/// Deterministic farthest-point greedy cover with in-set centers.
///
/// The first center is the lowest-index point; each subsequent center is the
/// uncovered point at maximal distance to the chosen centers, ties broken by
/// lowest index. Returns an upper bound on the covering number.
pub fn greedy_cover(cloud: &PointCloud, eps: f64) -> Result<CoveringResult> {
    let eps = validate_eps(eps)?;
    let n = cloud.len();
    // min_dist[i] tracks the distance from point i to the chosen centers.
    let mut min_dist = vec![f64::INFINITY; n];
    let mut centers = Vec::new();
    let mut next = 0usize; // lowest index is the first center
    loop {
        centers.push(next);
        if centers.len() > n {
            return Err(Error::numeric("greedy cover failed to terminate"));
        }
        let update = |(i, md): (usize, &mut f64)| {
            let d = cloud.dist(i, next);
            if d < *md {
                *md = d;
            }
        };
        if n > 4096 {
            min_dist.par_iter_mut().enumerate().map(|(i, md)| (i, md)).for_each(update);
        } else {
            min_dist.iter_mut().enumerate().map(|(i, md)| (i, md)).for_each(update);
        }
        // Farthest uncovered point; max distance wins, lowest index on ties.
        let mut best: Option<(f64, usize)> = None;
        for (i, &d) in min_dist.iter().enumerate() {
            if d > eps {
                let better = match best {
                    None => true,
                    Some((bd, _)) => d > bd,
                };
                if better {
                    best = Some((d, i));
                }
            }
        }
        match best {
            Some((_, i)) => next = i,
            None => break,
        }
    }
    Ok(CoveringResult { epsilon: eps, count: centers.len(), centers, method: CoverMethod::Greedy })
}

/// Greedy cover with centers drawn from a separate grid cloud.
///
/// Selection follows the in-set rule on the covered cloud: the point to be
/// covered is the farthest uncovered one (lowest index first), its center the
/// lowest-index grid point within `eps` of it. Fails if some point cannot be
/// covered from the grid.
pub fn greedy_cover_from_grid(
    cloud: &PointCloud,
    grid: &PointCloud,
    eps: f64,
) -> Result<CoveringResult> {
    let eps = validate_eps(eps)?;
    if cloud.has_table() || grid.has_table() {
        return Err(Error::validation("grid-center covers need coordinate clouds"));
    }
    if cloud.dim() != grid.dim() {
        return Err(Error::validation("cloud and grid dimension mismatch"));
    }
    let n = cloud.len();
    let mut min_dist = vec![f64::INFINITY; n];
    let mut centers: Vec<usize> = Vec::new();
    let mut target = 0usize;
    loop {
        // Lowest-index grid point covering the target.
        let mut chosen = None;
        for g in 0..grid.len() {
            if cloud.dist_to(target, grid.point(g))? <= eps {
                chosen = Some(g);
                break;
            }
        }
        let g = chosen.ok_or_else(|| {
            Error::validation(format!("point {target} cannot be covered from the grid at eps={eps}"))
        })?;
        centers.push(g);
        for i in 0..n {
            let d = cloud.dist_to(i, grid.point(g))?;
            if d < min_dist[i] {
                min_dist[i] = d;
            }
        }
        let mut best: Option<(f64, usize)> = None;
        for (i, &d) in min_dist.iter().enumerate() {
            if d > eps {
                let better = match best {
                    None => true,
                    Some((bd, _)) => d > bd,
                };
                if better {
                    best = Some((d, i));
                }
            }
        }
        match best {
            Some((_, i)) => target = i,
            None => break,
        }
    }
    Ok(CoveringResult { epsilon: eps, count: centers.len(), centers, method: CoverMethod::Greedy })
}

/// Exact minimum in-set cover for clouds on a line: sweep left to right,
/// covering the leftmost uncovered point with the rightmost in-set center
/// within reach. Optimal by the standard exchange argument.
///
/// Coverage tests go through [`PointCloud::dist`] so threshold radii drawn
/// from the distance set behave identically across all estimators (the normed
/// 1-D distance can differ from coordinate arithmetic by an ulp).
fn exact_cover_line(cloud: &PointCloud, eps: f64) -> CoveringResult {
    let n = cloud.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cloud.point(a)[0].partial_cmp(&cloud.point(b)[0]).unwrap());
    let mut centers = Vec::new();
    let mut i = 0usize;
    while i < n {
        // Rightmost in-set center still reaching the leftmost uncovered point.
        let mut c = i;
        while c + 1 < n && cloud.dist(order[i], order[c + 1]) <= eps {
            c += 1;
        }
        centers.push(order[c]);
        i += 1;
        while i < n && cloud.dist(order[c], order[i]) <= eps {
            i += 1;
        }
    }
    CoveringResult { epsilon: eps, count: centers.len(), centers, method: CoverMethod::Exact }
}

/// Exact minimum set cover by branch and bound over in-set balls.
///
/// Candidate centers are ordered by ball cardinality (descending); the greedy
/// cover count provides the initial upper bound, and branches are pruned with
/// the ceiling lower bound uncovered/largest-ball.
fn exact_cover_bnb(cloud: &PointCloud, eps: f64) -> Result<CoveringResult> {
    let n = cloud.len();
    if n > EXACT_COVER_CAP {
        return Err(Error::resource(format!(
            "exact cover is capped at {EXACT_COVER_CAP} points for general clouds, got {n}"
        )));
    }
    // Ball masks: bit j of ball[i] says point j is within eps of center i.
    let balls: Vec<u32> = (0..n)
        .map(|i| {
            let mut m = 0u32;
            for j in 0..n {
                if cloud.dist(i, j) <= eps {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(balls[i].count_ones()));

    let greedy = greedy_cover(cloud, eps)?;
    let mut best_count = greedy.count;
    let mut best_centers = greedy.centers;
    let max_ball = balls.iter().map(|b| b.count_ones()).max().unwrap_or(1).max(1);

    // Depth-first search over center subsets in cardinality order; at each node
    // the uncovered point with the fewest covering balls is branched on.
    struct State<'a> {
        balls: &'a [u32],
        covers_of: Vec<Vec<usize>>,
        max_ball: u32,
    }
    let covers_of: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..n).filter(|&i| balls[i] & (1 << j) != 0).collect())
        .collect();
    let st = State { balls: &balls, covers_of, max_ball };

    fn dfs(
        st: &State,
        covered: u32,
        full: u32,
        chosen: &mut Vec<usize>,
        best_count: &mut usize,
        best_centers: &mut Vec<usize>,
    ) {
        if covered == full {
            if chosen.len() < *best_count {
                *best_count = chosen.len();
                *best_centers = chosen.clone();
            }
            return;
        }
        let uncovered = (full & !covered).count_ones() as usize;
        let lower = chosen.len() + uncovered.div_ceil(st.max_ball as usize);
        if lower >= *best_count {
            return;
        }
        // Branch on the uncovered point with the fewest candidate centers.
        let mut pick = usize::MAX;
        let mut pick_deg = usize::MAX;
        let rest = full & !covered;
        for j in 0..32 {
            if rest & (1 << j) != 0 {
                let deg = st.covers_of[j].len();
                if deg < pick_deg {
                    pick_deg = deg;
                    pick = j;
                }
            }
        }
        for &c in &st.covers_of[pick] {
            chosen.push(c);
            dfs(st, covered | st.balls[c], full, chosen, best_count, best_centers);
            chosen.pop();
        }
    }
    let mut chosen = Vec::new();
    dfs(&st, 0, full, &mut chosen, &mut best_count, &mut best_centers);
    Ok(CoveringResult { epsilon: eps, count: best_count, centers: best_centers, method: CoverMethod::Exact })
}

/// Exact minimum covering number with in-set centers.
///
/// Line clouds use the optimal sweep (any size); general clouds use branch
/// and bound, refused above [`EXACT_COVER_CAP`] points.
pub fn exact_cover(cloud: &PointCloud, eps: f64) -> Result<CoveringResult> {
    let eps = validate_eps(eps)?;
    if cloud.is_line() {
        Ok(exact_cover_line(cloud, eps))
    } else {
        exact_cover_bnb(cloud, eps)
    }
}

/// Greedy maximal `2*eps`-separated subset, scanned in index order.
///
/// Any such set lower-bounds every covering number at radius `eps`, since an
/// `eps`-ball cannot hold two points more than `2*eps` apart.
pub fn packing_lower(cloud: &PointCloud, eps: f64) -> Result<CoveringResult> {
    let eps = validate_eps(eps)?;
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..cloud.len() {
        if chosen.iter().all(|&c| cloud.dist(i, c) > 2.0 * eps) {
            chosen.push(i);
        }
    }
    Ok(CoveringResult { epsilon: eps, count: chosen.len(), centers: chosen, method: CoverMethod::Packing })
}

/// Entropy numbers `eps_n = inf { eps : N(A, eps) <= n }` for `n = 1..=n_max`,
/// with in-set centers.
///
/// GREEDY returns the farthest-point traversal radii (the covering radius
/// after `n` greedy centers), an upper bound on the exact values. EXACT
/// inverts the exact covering count over the pairwise-distance set, which
/// contains every critical radius. PACKING returns certified lower bounds:
/// the largest candidate radius at which a maximal separated set still
/// exceeds `n` points.
pub fn entropy_numbers(cloud: &PointCloud, n_max: usize, method: CoverMethod) -> Result<Vec<f64>> {
    if n_max < 1 {
        return Err(Error::validation("n_max must be >= 1"));
    }
    match method {
        CoverMethod::Greedy => Ok(farthest_point_radii(cloud, n_max)),
        CoverMethod::Exact => {
            if !cloud.is_line() && cloud.len() > EXACT_COVER_CAP {
                return Err(Error::resource(format!(
                    "exact entropy numbers are capped at {EXACT_COVER_CAP} points for general clouds"
                )));
            }
            let candidates = cloud.distance_set();
            let mut out = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                // Exact counts are non-increasing in eps: binary search for the
                // smallest candidate radius with count <= n.
                let mut lo = 0usize;
                let mut hi = candidates.len() - 1;
                debug_assert!(exact_cover(cloud, candidates[hi])?.count == 1);
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if exact_cover(cloud, candidates[mid])?.count <= n {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                out.push(candidates[lo]);
            }
            Ok(out)
        }
        CoverMethod::Packing => {
            let candidates = cloud.distance_set();
            let mut out = Vec::with_capacity(n_max);
            for n in 1..=n_max {
                // Largest radius (half-distance candidates) whose maximal
                // separated set exceeds n points; validity is certified by the
                // evaluation at the returned radius itself.
                let mut lo = 0usize;
                let mut hi = candidates.len() - 1;
                let mut found = 0.0;
                while lo <= hi {
                    let mid = (lo + hi) / 2;
                    let eps = candidates[mid] / 2.0;
                    if packing_lower(cloud, eps)?.count > n {
                        found = eps;
                        lo = mid + 1;
                    } else {
                        if mid == 0 {
                            break;
                        }
                        hi = mid - 1;
                    }
                }
                out.push(found);
            }
            Ok(out)
        }
    }
}

/// Covering radii of the farthest-point traversal: entry `n-1` is the maximal
/// distance of any point to the first `n` greedy centers.
pub fn farthest_point_radii(cloud: &PointCloud, n_max: usize) -> Vec<f64> {
    let n = cloud.len();
    let mut min_dist = vec![f64::INFINITY; n];
    let mut radii = Vec::with_capacity(n_max);
    let mut next = 0usize;
    for _ in 0..n_max {
        if n > 4096 {
            min_dist.par_iter_mut().enumerate().for_each(|(i, md)| {
                let d = cloud.dist(i, next);
                if d < *md {
                    *md = d;
                }
            });
        } else {
            for (i, md) in min_dist.iter_mut().enumerate() {
                let d = cloud.dist(i, next);
                if d < *md {
                    *md = d;
                }
            }
        }
        // Deterministic parallel max: larger distance wins, lower index breaks ties.
        let (radius, far) = if n > 4096 {
            min_dist
                .par_iter()
                .enumerate()
                .map(|(i, &d)| (d, i))
                .reduce(|| (f64::NEG_INFINITY, usize::MAX), better_of)
        } else {
            min_dist
                .iter()
                .enumerate()
                .map(|(i, &d)| (d, i))
                .fold((f64::NEG_INFINITY, usize::MAX), better_of)
        };
        radii.push(radius);
        next = far;
    }
    radii
}

fn better_of(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}
