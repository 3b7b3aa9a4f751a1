//! Convex bodies `W` (ball, box, ellipsoid, H-polytope): membership,
//! volumes, shadow areas, uniform i.i.d. sampling and the grid-cell
//! occupancy counts used by the Poisson-grid experiment.
//!
//! Bodies are immutable after construction and safe to share across
//! threads. All randomness flows through [`Seed`], a (master, stream) pair
//! that pins the full sample deterministically.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geom::{self, Point, PointSet};
use crate::Result;

/// Sample count used for the construction-time Monte Carlo volume of
/// H-polytopes.
pub const DEFAULT_VOLUME_MC_SAMPLES: usize = 1 << 20;

const VOLUME_MC_MASTER: u64 = 0x7c07_9a5e_11aa_02d1;

/// Deterministic RNG handle: a master seed plus a stream index. The pair
/// determines the full sample; distinct streams are independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed { master, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Seed {
            master: self.master,
            stream,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// Closed halfspace `normal . x <= offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Parseable body description; the `kind` tag plus numeric parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BodySpec {
    /// Ball of the given radius centered at the origin.
    Ball { radius: f64 },
    /// Axis-aligned box `[0, extents_j]` per axis.
    Box { extents: Vec<f64> },
    /// Ellipsoid with the given semi-axes, centered at the origin.
    Ellipsoid { semi_axes: Vec<f64> },
    /// Bounded intersection of closed halfspaces.
    Polytope { halfspaces: Vec<Halfspace> },
}

/// Rejection-sampling counters reported by
/// [`ConvexBody::sample_uniform_with_stats`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RejectionStats {
    pub attempts: u64,
    pub accepted: u64,
}

/// A compact convex set with nonempty interior, with derived data (exact
/// volume where available, bounding box, inradius proxy) cached at
/// construction.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    dim: usize,
    spec: BodySpec,
    bbox_lo: Vec<f64>,
    bbox_hi: Vec<f64>,
    volume: f64,
    volume_stderr: f64,
    inradius_proxy: f64,
    /// Vertices of an H-polytope (enumerated at construction); empty
    /// otherwise.
    vertices: Vec<Vec<f64>>,
}

impl ConvexBody {
    pub fn from_spec(dim: usize, spec: BodySpec) -> Result<Self> {
        match spec {
            BodySpec::Ball { radius } => Self::ball(dim, radius),
            BodySpec::Box { extents } => {
                if extents.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: extents.len(),
                    });
                }
                Self::axis_box(extents)
            }
            BodySpec::Ellipsoid { semi_axes } => {
                if semi_axes.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: semi_axes.len(),
                    });
                }
                Self::ellipsoid(semi_axes)
            }
            BodySpec::Polytope { halfspaces } => Self::polytope(dim, halfspaces),
        }
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidBody(format!("ball radius {radius}")));
        }
        Ok(ConvexBody {
            dim,
            spec: BodySpec::Ball { radius },
            bbox_lo: vec![-radius; dim],
            bbox_hi: vec![radius; dim],
            volume: geom::unit_ball_volume(dim)? * radius.powi(dim as i32),
            volume_stderr: 0.0,
            inradius_proxy: radius,
            vertices: Vec::new(),
        })
    }

    /// Axis-aligned box `[0, extents_j]` per axis.
    pub fn axis_box(extents: Vec<f64>) -> Result<Self> {
        let dim = extents.len();
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if extents.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidBody("box extents must be positive".into()));
        }
        let volume = extents.iter().product();
        let inradius = extents.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0;
        Ok(ConvexBody {
            dim,
            bbox_lo: vec![0.0; dim],
            bbox_hi: extents.clone(),
            spec: BodySpec::Box { extents },
            volume,
            volume_stderr: 0.0,
            inradius_proxy: inradius,
            vertices: Vec::new(),
        })
    }

    pub fn ellipsoid(semi_axes: Vec<f64>) -> Result<Self> {
        let dim = semi_axes.len();
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if semi_axes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidBody("semi-axes must be positive".into()));
        }
        let volume = geom::unit_ball_volume(dim)? * semi_axes.iter().product::<f64>();
        let inradius = semi_axes.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(ConvexBody {
            dim,
            bbox_lo: semi_axes.iter().map(|a| -a).collect(),
            bbox_hi: semi_axes.clone(),
            spec: BodySpec::Ellipsoid { semi_axes },
            volume,
            volume_stderr: 0.0,
            inradius_proxy: inradius,
            vertices: Vec::new(),
        })
    }

    /// Bounded H-polytope. The bounding box is derived by enumerating the
    /// vertices (all `M`-subsets of active hyperplanes); the volume is a
    /// Monte Carlo estimate with its standard error.
    pub fn polytope(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if halfspaces.len() < dim + 1 {
            return Err(Error::InvalidBody(
                "a bounded polytope needs at least M+1 halfspaces".into(),
            ));
        }
        for h in &halfspaces {
            if h.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: h.normal.len(),
                });
            }
            let norm: f64 = h.normal.iter().map(|c| c * c).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite() && h.offset.is_finite()) {
                return Err(Error::InvalidBody("invalid halfspace".into()));
            }
        }

        let vertices = enumerate_vertices(dim, &halfspaces);
        if vertices.len() < dim + 1 {
            return Err(Error::InvalidBody(
                "polytope has too few vertices; empty, degenerate or unbounded".into(),
            ));
        }
        let mut lo = vertices[0].clone();
        let mut hi = vertices[0].clone();
        for v in &vertices[1..] {
            for j in 0..dim {
                lo[j] = lo[j].min(v[j]);
                hi[j] = hi[j].max(v[j]);
            }
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(b > a)) {
            return Err(Error::InvalidBody("polytope has empty interior".into()));
        }

        // centroid of the vertices is interior by convexity
        let mut centroid = vec![0.0; dim];
        for v in &vertices {
            for j in 0..dim {
                centroid[j] += v[j] / vertices.len() as f64;
            }
        }
        let inradius = halfspaces
            .iter()
            .map(|h| {
                let norm: f64 = h.normal.iter().map(|c| c * c).sum::<f64>().sqrt();
                (h.offset - dot(&h.normal, &centroid)) / norm
            })
            .fold(f64::INFINITY, f64::min)
            .max(0.0);

        let mut body = ConvexBody {
            dim,
            spec: BodySpec::Polytope { halfspaces },
            bbox_lo: lo,
            bbox_hi: hi,
            volume: 0.0,
            volume_stderr: 0.0,
            inradius_proxy: inradius,
            vertices,
        };
        let (vol, se) = body.volume_mc(
            DEFAULT_VOLUME_MC_SAMPLES,
            Seed::new(VOLUME_MC_MASTER),
        );
        body.volume = vol;
        body.volume_stderr = se;
        Ok(body)
    }

    pub fn unit_cube(dim: usize) -> Result<Self> {
        Self::axis_box(vec![1.0; dim])
    }

    pub fn unit_ball(dim: usize) -> Result<Self> {
        Self::ball(dim, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &BodySpec {
        &self.spec
    }

    pub fn bounding_box(&self) -> (&[f64], &[f64]) {
        (&self.bbox_lo, &self.bbox_hi)
    }

    /// Exact closed-form volume for ball/box/ellipsoid; a Monte Carlo
    /// estimate for H-polytopes (see [`ConvexBody::volume_stderr`]).
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Standard error of [`ConvexBody::volume`]; zero on exact paths.
    pub fn volume_stderr(&self) -> f64 {
        self.volume_stderr
    }

    /// Conservative interior-radius scale used for step schedules.
    pub fn inradius_proxy(&self) -> f64 {
        self.inradius_proxy
    }

    /// Diagonal of the bounding box.
    pub fn diameter_bbox(&self) -> f64 {
        self.bbox_lo
            .iter()
            .zip(&self.bbox_hi)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt()
    }

    /// Closed membership `p in W`; hot path, dimension checked by debug
    /// assertion only.
    #[inline]
    pub fn contains(&self, p: &[f64]) -> bool {
        debug_assert_eq!(p.len(), self.dim);
        match &self.spec {
            BodySpec::Ball { radius } => {
                p.iter().map(|c| c * c).sum::<f64>() <= radius * radius
            }
            BodySpec::Box { extents } => p
                .iter()
                .zip(extents)
                .all(|(&c, &a)| (0.0..=a).contains(&c)),
            BodySpec::Ellipsoid { semi_axes } => {
                p.iter()
                    .zip(semi_axes)
                    .map(|(&c, &a)| (c / a) * (c / a))
                    .sum::<f64>()
                    <= 1.0
            }
            BodySpec::Polytope { halfspaces } => halfspaces
                .iter()
                .all(|h| dot(&h.normal, p) <= h.offset),
        }
    }

    /// Checked closed membership (the indicator `1_W`).
    pub fn membership(&self, p: &Point) -> Result<bool> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        Ok(self.contains(p.coords()))
    }

    /// `H^(M-1)` measure of the orthogonal projection of `W` onto the
    /// hyperplane orthogonal to the unit direction `u`. Closed form for
    /// ball and box; deterministic Monte Carlo projection estimate
    /// otherwise.
    pub fn shadow_area(&self, u: &[f64]) -> Result<f64> {
        check_unit(self.dim, u)?;
        match &self.spec {
            BodySpec::Ball { radius } => {
                Ok(geom::unit_ball_volume(self.dim - 1)? * radius.powi(self.dim as i32 - 1))
            }
            BodySpec::Box { extents } => {
                // sum over axes of |u_j| times the product of the other extents
                let mut total = 0.0;
                for j in 0..self.dim {
                    let mut prod = 1.0;
                    for (i, &a) in extents.iter().enumerate() {
                        if i != j {
                            prod *= a;
                        }
                    }
                    total += u[j].abs() * prod;
                }
                Ok(total)
            }
            _ => {
                let (est, _) = self.shadow_area_mc(u, 1 << 18, Seed::new(VOLUME_MC_MASTER ^ 1))?;
                Ok(est)
            }
        }
    }

    /// Monte Carlo estimate of the shadow area with its standard error:
    /// rejection sampling in a bounding box of the projection, membership
    /// tested by intersecting the line `q + t u` with `W`.
    pub fn shadow_area_mc(&self, u: &[f64], samples: usize, seed: Seed) -> Result<(f64, f64)> {
        check_unit(self.dim, u)?;
        let m = self.dim;
        let basis = orthonormal_complement(u);
        // project bbox corners into the basis coordinates
        let mut lo = vec![f64::INFINITY; m - 1];
        let mut hi = vec![f64::NEG_INFINITY; m - 1];
        let n_corners = 1usize << m;
        for mask in 0..n_corners {
            let corner: Vec<f64> = (0..m)
                .map(|j| {
                    if mask >> j & 1 == 1 {
                        self.bbox_hi[j]
                    } else {
                        self.bbox_lo[j]
                    }
                })
                .collect();
            for (i, b) in basis.iter().enumerate() {
                let y = dot(b, &corner);
                lo[i] = lo[i].min(y);
                hi[i] = hi[i].max(y);
            }
        }
        let box_area: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        let mut rng = seed.rng();
        let mut hits = 0u64;
        let mut q = vec![0.0; m];
        for _ in 0..samples {
            q.fill(0.0);
            for (i, b) in basis.iter().enumerate() {
                let y = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
                for j in 0..m {
                    q[j] += y * b[j];
                }
            }
            if self.line_hits(&q, u) {
                hits += 1;
            }
        }
        let p = hits as f64 / samples as f64;
        let est = box_area * p;
        let se = box_area * (p * (1.0 - p) / samples as f64).sqrt();
        Ok((est, se))
    }

    /// True iff the line `q + t u` meets the body.
    fn line_hits(&self, q: &[f64], u: &[f64]) -> bool {
        match &self.spec {
            BodySpec::Ball { radius } => {
                quadratic_feasible(q, u, *radius, None)
            }
            BodySpec::Ellipsoid { semi_axes } => {
                quadratic_feasible(q, u, 1.0, Some(semi_axes))
            }
            BodySpec::Box { extents } => {
                let mut t_min = f64::NEG_INFINITY;
                let mut t_max = f64::INFINITY;
                for j in 0..q.len() {
                    if u[j].abs() < 1e-300 {
                        if q[j] < 0.0 || q[j] > extents[j] {
                            return false;
                        }
                    } else {
                        let a = (0.0 - q[j]) / u[j];
                        let b = (extents[j] - q[j]) / u[j];
                        t_min = t_min.max(a.min(b));
                        t_max = t_max.min(a.max(b));
                    }
                }
                t_min <= t_max
            }
            BodySpec::Polytope { halfspaces } => {
                let mut t_min = f64::NEG_INFINITY;
                let mut t_max = f64::INFINITY;
                for h in halfspaces {
                    let a = dot(&h.normal, u);
                    let b = h.offset - dot(&h.normal, q);
                    if a.abs() < 1e-300 {
                        if b < 0.0 {
                            return false;
                        }
                    } else if a > 0.0 {
                        t_max = t_max.min(b / a);
                    } else {
                        t_min = t_min.max(b / a);
                    }
                }
                t_min <= t_max
            }
        }
    }

    /// `n` i.i.d. uniform points in `W`, deterministic given the seed.
    pub fn sample_uniform(&self, n: usize, seed: Seed) -> Result<PointSet> {
        Ok(self.sample_uniform_with_stats(n, seed)?.0)
    }

    /// Like [`ConvexBody::sample_uniform`], also reporting the rejection
    /// counters (attempts == accepted on direct-transform paths).
    pub fn sample_uniform_with_stats(
        &self,
        n: usize,
        seed: Seed,
    ) -> Result<(PointSet, RejectionStats)> {
        let m = self.dim;
        let mut rng = seed.rng();
        let mut coords = Vec::with_capacity(n * m);
        let mut stats = RejectionStats::default();
        match &self.spec {
            BodySpec::Box { extents } => {
                for _ in 0..n {
                    for &a in extents {
                        coords.push(a * rng.random::<f64>());
                    }
                }
                stats.attempts = n as u64;
                stats.accepted = n as u64;
            }
            BodySpec::Ball { radius } => {
                let mut p = vec![0.0; m];
                for _ in 0..n {
                    sample_unit_ball(&mut rng, &mut p);
                    coords.extend(p.iter().map(|c| c * radius));
                }
                stats.attempts = n as u64;
                stats.accepted = n as u64;
            }
            BodySpec::Ellipsoid { semi_axes } => {
                let mut p = vec![0.0; m];
                for _ in 0..n {
                    sample_unit_ball(&mut rng, &mut p);
                    coords.extend(p.iter().zip(semi_axes).map(|(c, a)| c * a));
                }
                stats.attempts = n as u64;
                stats.accepted = n as u64;
            }
            BodySpec::Polytope { .. } => {
                let mut p = vec![0.0; m];
                while stats.accepted < n as u64 {
                    stats.attempts += 1;
                    for j in 0..m {
                        p[j] = self.bbox_lo[j]
                            + (self.bbox_hi[j] - self.bbox_lo[j]) * rng.random::<f64>();
                    }
                    if self.contains(&p) {
                        stats.accepted += 1;
                        coords.extend_from_slice(&p);
                    } else if stats.attempts >= 1_000_000
                        && (stats.accepted as f64) < 1e-6 * stats.attempts as f64
                    {
                        return Err(Error::RejectionTooThin {
                            attempts: stats.attempts,
                            accepted: stats.accepted,
                        });
                    }
                }
            }
        }
        Ok((PointSet::from_flat(m, coords)?, stats))
    }

    /// Construction-style Monte Carlo volume for any body kind.
    pub fn volume_mc(&self, samples: usize, seed: Seed) -> (f64, f64) {
        let m = self.dim;
        let mut rng = seed.rng();
        let mut p = vec![0.0; m];
        let mut hits = 0u64;
        for _ in 0..samples {
            for j in 0..m {
                p[j] = self.bbox_lo[j] + (self.bbox_hi[j] - self.bbox_lo[j]) * rng.random::<f64>();
            }
            if self.contains(&p) {
                hits += 1;
            }
        }
        let bbox_vol: f64 = self
            .bbox_lo
            .iter()
            .zip(&self.bbox_hi)
            .map(|(a, b)| b - a)
            .product();
        let frac = hits as f64 / samples as f64;
        (
            bbox_vol * frac,
            bbox_vol * (frac * (1.0 - frac) / samples as f64).sqrt(),
        )
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_unit(dim: usize, u: &[f64]) -> Result<()> {
    if u.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: u.len(),
        });
    }
    let norm = dot(u, u).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitDirection(norm));
    }
    Ok(())
}

/// Feasibility of `|diag(1/a) (q + t u)| <= r` for some `t` (ellipsoid line
/// intersection; `a = None` for the ball).
fn quadratic_feasible(q: &[f64], u: &[f64], r: f64, semi_axes: Option<&[f64]>) -> bool {
    let mut a = 0.0;
    let mut b = 0.0;
    let mut c = -r * r;
    for j in 0..q.len() {
        let s = semi_axes.map_or(1.0, |ax| ax[j]);
        let uj = u[j] / s;
        let qj = q[j] / s;
        a += uj * uj;
        b += 2.0 * uj * qj;
        c += qj * qj;
    }
    if a <= 0.0 {
        return c <= 0.0;
    }
    b * b - 4.0 * a * c >= 0.0
}

/// Uniform point in the closed unit ball: Gaussian direction, radius
/// `U^(1/M)`.
fn sample_unit_ball(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    let m = out.len();
    loop {
        let mut norm_sq = 0.0;
        for c in out.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *c = g;
            norm_sq += g * g;
        }
        if norm_sq > 0.0 {
            let r = rng.random::<f64>().powf(1.0 / m as f64) / norm_sq.sqrt();
            for c in out.iter_mut() {
                *c *= r;
            }
            return;
        }
    }
}

/// Householder-style orthonormal basis of the hyperplane orthogonal to `u`.
fn orthonormal_complement(u: &[f64]) -> Vec<Vec<f64>> {
    let m = u.len();
    let mut basis = Vec::with_capacity(m - 1);
    // reflect e_1 onto u: H = I - 2 w w^T with w = (u - e_1)/|u - e_1|;
    // the images of e_2..e_m span the complement
    let mut w: Vec<f64> = u.to_vec();
    w[0] -= 1.0;
    let wn = dot(&w, &w).sqrt();
    if wn < 1e-12 {
        for k in 1..m {
            let mut e = vec![0.0; m];
            e[k] = 1.0;
            basis.push(e);
        }
        return basis;
    }
    for c in w.iter_mut() {
        *c /= wn;
    }
    for k in 1..m {
        let mut e = vec![0.0; m];
        e[k] = 1.0;
        let f = 2.0 * w[k];
        for j in 0..m {
            e[j] -= f * w[j];
        }
        basis.push(e);
    }
    basis
}

/// All vertices of the H-polytope: solve each `M`-subset of hyperplane
/// equations and keep solutions satisfying every constraint.
fn enumerate_vertices(dim: usize, halfspaces: &[Halfspace]) -> Vec<Vec<f64>> {
    let h = halfspaces.len();
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let slack = 1e-9;
    geom::for_each_combination(h, dim, &mut |c| {
        let mut a = Vec::with_capacity(dim * dim);
        let mut b = Vec::with_capacity(dim);
        for &i in c {
            a.extend_from_slice(&halfspaces[i as usize].normal);
            b.push(halfspaces[i as usize].offset);
        }
        if let Some(x) = geom::solve_in_place(&mut a, &mut b, dim) {
            if x.iter().all(|c| c.is_finite())
                && halfspaces.iter().all(|hs| {
                    let scale = hs.normal.iter().map(|c| c.abs()).sum::<f64>()
                        * x.iter().map(|c| c.abs()).fold(1.0, f64::max)
                        + hs.offset.abs();
                    dot(&hs.normal, &x) <= hs.offset + slack * scale.max(1.0)
                })
                && !vertices
                    .iter()
                    .any(|v| v.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-9))
            {
                vertices.push(x);
            }
        }
        true
    });
    vertices
}

/// For each grid cube of side `mesh` (anchored at the bounding-box corner)
/// wholly contained in `W`, the number of points of `X` inside it. Cubes
/// straddling the boundary are excluded; by convexity a cube is contained
/// iff all `2^M` corners pass membership.
pub fn grid_cell_counts(x: &PointSet, body: &ConvexBody, mesh: f64) -> Result<Vec<u64>> {
    if !(mesh > 0.0 && mesh.is_finite()) {
        return Err(Error::InvalidMesh(mesh));
    }
    if x.dim() != body.dim() && !x.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: x.dim(),
        });
    }
    let m = body.dim();
    let (lo, hi) = body.bounding_box();
    let shape: Vec<usize> = (0..m)
        .map(|j| (((hi[j] - lo[j]) / mesh).ceil() as usize).max(1))
        .collect();
    let n_cells: usize = shape.iter().product();
    let mut strides = vec![1usize; m];
    for j in (0..m - 1).rev() {
        strides[j] = strides[j + 1] * shape[j + 1];
    }

    // map every fully contained cell to a slot in the counts vector
    let mut slot = vec![usize::MAX; n_cells];
    let mut n_contained = 0usize;
    let mut cell = vec![0usize; m];
    let mut corner = vec![0.0; m];
    'cells: loop {
        let mut contained = true;
        'corners: for mask in 0..(1usize << m) {
            for j in 0..m {
                let k = cell[j] + (mask >> j & 1);
                corner[j] = lo[j] + k as f64 * mesh;
            }
            if !body.contains(&corner) {
                contained = false;
                break 'corners;
            }
        }
        if contained {
            let c: usize = cell.iter().zip(&strides).map(|(a, s)| a * s).sum();
            slot[c] = n_contained;
            n_contained += 1;
        }
        // advance odometer
        let mut j = m;
        loop {
            if j == 0 {
                break 'cells;
            }
            j -= 1;
            if cell[j] + 1 < shape[j] {
                cell[j] += 1;
                for r in j + 1..m {
                    cell[r] = 0;
                }
                break;
            }
        }
    }

    let mut counts = vec![0u64; n_contained];
    if !x.is_empty() {
        for p in x.iter() {
            let mut c = 0usize;
            let mut inside = true;
            for j in 0..m {
                let k = ((p[j] - lo[j]) / mesh).floor();
                if k < 0.0 || k as usize >= shape[j] {
                    inside = false;
                    break;
                }
                c += (k as usize) * strides[j];
            }
            if inside {
                let s = slot[c];
                if s != usize::MAX {
                    counts[s] += 1;
                }
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn membership_examples() {
        let disc = ConvexBody::unit_ball(2).unwrap();
        assert!(disc.contains(&[0.0, 0.0]));
        assert!(!disc.contains(&[2.0, 0.0]));
        let cube = ConvexBody::unit_cube(3).unwrap();
        // boundary is included
        assert!(cube.contains(&[1.0, 1.0, 1.0]));
    }

    #[test]
    fn membership_checks_dimension() {
        let disc = ConvexBody::unit_ball(2).unwrap();
        let p = Point::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert!(disc.membership(&p).is_err());
    }

    #[test]
    fn exact_volumes() {
        let b = ConvexBody::axis_box(vec![2.0, 2.0, 2.0]).unwrap();
        assert_relative_eq!(b.volume(), 8.0);
        let d = ConvexBody::unit_ball(2).unwrap();
        assert_relative_eq!(d.volume(), std::f64::consts::PI);
        let e = ConvexBody::ellipsoid(vec![1.0, 2.0]).unwrap();
        assert_relative_eq!(e.volume(), 2.0 * std::f64::consts::PI);
    }

    fn triangle_polytope() -> ConvexBody {
        // {x >= 0, y >= 0, x + y <= 1}
        ConvexBody::polytope(
            2,
            vec![
                Halfspace {
                    normal: vec![-1.0, 0.0],
                    offset: 0.0,
                },
                Halfspace {
                    normal: vec![0.0, -1.0],
                    offset: 0.0,
                },
                Halfspace {
                    normal: vec![1.0, 1.0],
                    offset: 1.0,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn polytope_volume_brackets_exact() {
        let t = triangle_polytope();
        // MC estimate must bracket the exact area 0.5 within 3 stderr
        assert!(t.volume_stderr() > 0.0);
        assert!((t.volume() - 0.5).abs() <= 3.0 * t.volume_stderr());
        let (lo, hi) = t.bounding_box();
        assert_relative_eq!(lo[0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(hi[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn shadow_areas_closed_form() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        assert_relative_eq!(sq.shadow_area(&[1.0, 0.0]).unwrap(), 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(
            sq.shadow_area(&[s, s]).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
        let disc = ConvexBody::unit_ball(2).unwrap();
        assert_relative_eq!(disc.shadow_area(&[0.6, 0.8]).unwrap(), 2.0);
        let cube = ConvexBody::unit_cube(3).unwrap();
        assert_relative_eq!(cube.shadow_area(&[0.0, 0.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn shadow_rejects_non_unit() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        assert!(sq.shadow_area(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn shadow_mc_matches_exact_for_ellipsoid() {
        let e = ConvexBody::ellipsoid(vec![1.0, 2.0]).unwrap();
        // shadow along e_1 is the projection onto the y-axis: length 4
        let (est, se) = e
            .shadow_area_mc(&[1.0, 0.0], 200_000, Seed::new(7))
            .unwrap();
        assert!((est - 4.0).abs() <= 3.0 * se + 1e-9, "est {est} se {se}");
    }

    #[test]
    fn sampling_is_deterministic_and_inside() {
        let t = triangle_polytope();
        let a = t.sample_uniform(5, Seed::new(42)).unwrap();
        let b = t.sample_uniform(5, Seed::new(42)).unwrap();
        assert_eq!(a, b);
        for p in a.iter() {
            assert!(t.contains(p));
        }
        let c = t.sample_uniform(5, Seed::new(42).with_stream(1)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_empty_set() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        let ps = sq.sample_uniform(0, Seed::new(1)).unwrap();
        assert_eq!(ps.len(), 0);
    }

    #[test]
    fn sample_mean_near_center() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        let n = 10_000;
        let ps = sq.sample_uniform(n, Seed::new(11)).unwrap();
        let tol = 3.0 / (12.0 * n as f64).sqrt();
        for j in 0..2 {
            let mean: f64 = ps.iter().map(|p| p[j]).sum::<f64>() / n as f64;
            assert!((mean - 0.5).abs() < tol, "axis {j} mean {mean}");
        }
        for p in ps.iter() {
            assert!(sq.contains(p));
        }
    }

    #[test]
    fn rejection_acceptance_estimates_volume_ratio() {
        let t = triangle_polytope();
        let (_, stats) = t.sample_uniform_with_stats(50_000, Seed::new(3)).unwrap();
        let p = stats.accepted as f64 / stats.attempts as f64;
        let se = (p * (1.0 - p) / stats.attempts as f64).sqrt();
        // bbox is the unit square, so the true ratio is 0.5
        assert!((p - 0.5).abs() <= 3.0 * se);
    }

    #[test]
    fn ball_samples_inside() {
        let ball = ConvexBody::ball(3, 2.0).unwrap();
        let ps = ball.sample_uniform(2_000, Seed::new(5)).unwrap();
        for p in ps.iter() {
            assert!(ball.contains(p));
        }
    }

    #[test]
    fn grid_cell_counts_single_cell() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        let x = PointSet::from_flat(2, vec![0.5, 0.5]).unwrap();
        let counts = grid_cell_counts(&x, &sq, 1.0).unwrap();
        assert_eq!(counts, vec![1]);
    }

    #[test]
    fn grid_cell_counts_empty_set() {
        let sq = ConvexBody::unit_cube(2).unwrap();
        let x = PointSet::from_flat(2, vec![]).unwrap();
        let counts = grid_cell_counts(&x, &sq, 0.25).unwrap();
        assert_eq!(counts.len(), 16);
        assert!(counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn grid_cells_exclude_boundary_straddlers() {
        let disc = ConvexBody::unit_ball(2).unwrap();
        let x = disc.sample_uniform(500, Seed::new(9)).unwrap();
        let counts = grid_cell_counts(&x, &disc, 0.25).unwrap();
        // contained cells cover strictly less than the disc
        assert!((counts.len() as f64) * 0.25 * 0.25 < std::f64::consts::PI);
        let total: u64 = counts.iter().sum();
        assert!(total <= 500);
    }
}
