//! Robust low-level geometric predicates and measures in `R^M`.
//!
//! Predicates work in floating point with a fixed relative degeneracy
//! tolerance [`EPS_GEOM`] applied to normalized determinants: inputs within
//! the tolerance of a tie are classified as degenerate/boundary instead of
//! being silently pushed to one side. Random uniform inputs are almost
//! surely far from every tie; handcrafted inputs with exact ties (points on
//! edges, collinear triples with dyadic coordinates) evaluate to exact
//! zeros and are classified consistently on every code path.

use crate::error::Error;
use crate::Result;

/// Relative tolerance on normalized determinants below which a
/// configuration is reported degenerate.
pub const EPS_GEOM: f64 = 1e-12;

/// Sign of an orientation determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Negative,
    Zero,
    Positive,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Negative => -1,
            Orientation::Zero => 0,
            Orientation::Positive => 1,
        }
    }

    fn classify(det: f64, scale: f64) -> Orientation {
        if det.abs() <= EPS_GEOM * scale {
            Orientation::Zero
        } else if det > 0.0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        }
    }
}

/// A single point in `R^M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.coords
    }
}

/// An ordered set of `n` points of common dimension `M >= 2`, stored flat
/// (row-major) so hot loops can borrow coordinate slices directly.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Builds a point set, validating dimensions, finiteness and pairwise
    /// distinctness (exact coordinate equality).
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            coords.extend_from_slice(p.coords());
        }
        Self::from_flat(dim, coords)
    }

    /// Builds a point set from flat row-major coordinates.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: coords.len() % dim,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        let ps = PointSet { dim, coords };
        if ps.has_duplicates() {
            return Err(Error::DuplicatePoints);
        }
        Ok(ps)
    }

    fn has_duplicates(&self) -> bool {
        use std::collections::HashSet;
        let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(self.len());
        for p in self.iter() {
            let key: Vec<u64> = p.iter().map(|c| c.to_bits()).collect();
            if !seen.insert(key) {
                return true;
            }
        }
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Axis-aligned bounding box, `None` for the empty set.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.is_empty() {
            return None;
        }
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.iter().skip(1) {
            for (j, &c) in p.iter().enumerate() {
                lo[j] = lo[j].min(c);
                hi[j] = hi[j].max(c);
            }
        }
        Some((lo, hi))
    }

    /// Diagonal of the bounding box; a cheap diameter proxy.
    pub fn bbox_diameter(&self) -> f64 {
        match self.bounding_box() {
            None => 0.0,
            Some((lo, hi)) => lo
                .iter()
                .zip(&hi)
                .map(|(a, b)| (b - a) * (b - a))
                .sum::<f64>()
                .sqrt(),
        }
    }
}

/// The `M+1` vertices of an `M`-simplex, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexVertices {
    dim: usize,
    coords: Vec<f64>,
}

impl SimplexVertices {
    pub fn new(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::WrongVertexCount {
                expected: 1,
                got: 0,
            });
        }
        let dim = points[0].dim();
        let mut coords = Vec::with_capacity((dim + 1) * dim);
        for p in points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            coords.extend_from_slice(p.coords());
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if coords.len() != (dim + 1) * dim {
            return Err(Error::WrongVertexCount {
                expected: dim + 1,
                got: coords.len() / dim,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(SimplexVertices { dim, coords })
    }

    /// Gathers vertices from a point set by index.
    pub fn from_indices(ps: &PointSet, idx: &[usize]) -> Result<Self> {
        let dim = ps.dim();
        if idx.len() != dim + 1 {
            return Err(Error::WrongVertexCount {
                expected: dim + 1,
                got: idx.len(),
            });
        }
        let mut coords = Vec::with_capacity((dim + 1) * dim);
        for &i in idx {
            coords.extend_from_slice(ps.point(i));
        }
        Ok(SimplexVertices { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }
}

/// Determinant of a dense `m x m` matrix (row-major) by LU with partial
/// pivoting; destroys its input.
pub(crate) fn det_in_place(a: &mut [f64], m: usize) -> f64 {
    debug_assert_eq!(a.len(), m * m);
    match m {
        1 => return a[0],
        2 => return a[0] * a[3] - a[1] * a[2],
        3 => {
            return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6]);
        }
        _ => {}
    }
    let mut det = 1.0;
    for col in 0..m {
        let mut pivot = col;
        let mut best = a[col * m + col].abs();
        for row in col + 1..m {
            let v = a[row * m + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..m {
                a.swap(col * m + j, pivot * m + j);
            }
            det = -det;
        }
        let d = a[col * m + col];
        det *= d;
        for row in col + 1..m {
            let f = a[row * m + col] / d;
            if f != 0.0 {
                for j in col..m {
                    a[row * m + j] -= f * a[col * m + j];
                }
            }
        }
    }
    det
}

/// Solves `A x = b` for a dense `m x m` system; returns `None` if the
/// pivoting breaks down (singular within floating point).
pub(crate) fn solve_in_place(a: &mut [f64], b: &mut [f64], m: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), m * m);
    debug_assert_eq!(b.len(), m);
    for col in 0..m {
        let mut pivot = col;
        let mut best = a[col * m + col].abs();
        for row in col + 1..m {
            let v = a[row * m + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best < 1e-300 {
            return None;
        }
        if pivot != col {
            for j in 0..m {
                a.swap(col * m + j, pivot * m + j);
            }
            b.swap(col, pivot);
        }
        let d = a[col * m + col];
        for row in col + 1..m {
            let f = a[row * m + col] / d;
            if f != 0.0 {
                for j in col..m {
                    a[row * m + j] -= f * a[col * m + j];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; m];
    for row in (0..m).rev() {
        let mut s = b[row];
        for j in row + 1..m {
            s -= a[row * m + j] * x[j];
        }
        x[row] = s / a[row * m + row];
    }
    Some(x)
}

/// Edge-matrix determinant together with the product of edge norms used to
/// normalize the degeneracy test. `verts` is `(m+1) x m` flat; `mat` is an
/// `m x m` scratch buffer.
fn edge_det_and_scale_flat(verts: &[f64], m: usize, mat: &mut [f64]) -> (f64, f64) {
    let v0 = &verts[..m];
    let mut scale = 1.0;
    for i in 1..=m {
        let vi = &verts[i * m..(i + 1) * m];
        let mut norm_sq = 0.0;
        for j in 0..m {
            let e = vi[j] - v0[j];
            mat[(i - 1) * m + j] = e;
            norm_sq += e * e;
        }
        scale *= norm_sq.sqrt();
    }
    (det_in_place(mat, m), scale)
}

fn edge_det_and_scale(s: &SimplexVertices) -> (f64, f64) {
    let m = s.dim();
    let mut mat = vec![0.0; m * m];
    edge_det_and_scale_flat(&s.coords, m, &mut mat)
}

/// Sign of the determinant of edge vectors from vertex 0; `Zero` iff the
/// vertices are affinely dependent within [`EPS_GEOM`].
pub fn orientation(s: &SimplexVertices) -> Orientation {
    let (det, scale) = edge_det_and_scale(s);
    Orientation::classify(det, scale)
}

/// `M`-dimensional Lebesgue volume of the simplex: `|det| / M!`.
pub fn simplex_volume(s: &SimplexVertices) -> f64 {
    let (det, _) = edge_det_and_scale(s);
    det.abs() / factorial(s.dim())
}

pub(crate) fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// Reusable closed-simplex membership tester.
///
/// Construction precomputes, for every facet `i`, the affine form
/// `z -> det(simplex with vertex i replaced by z)`; a point lies in the
/// closed simplex iff every facet form has the sign of the full orientation
/// determinant or vanishes within tolerance. This is the orientation-sign
/// containment test with the per-facet determinants cached, so scanning
/// many candidates against one simplex is cheap.
///
/// Forms are anchored at vertex 0: facet `i >= 1` planes pass through
/// vertex 0 (base exactly 0), facet 0 has base equal to the full edge
/// determinant, and the facet-0 gradient is minus the sum of the others
/// (the forms sum to the full determinant identically).
#[derive(Debug, Clone)]
pub struct SimplexTester {
    dim: usize,
    /// Gradients of the sign-normalized facet forms, facet-major; facet 0
    /// first. `g_i(p) = base_i + grad_i . (p - v0) >= 0` means inside.
    grads: Vec<f64>,
    /// Full signed determinant (base of facet 0; others have base 0).
    base0: f64,
    grad_norm_sq: Vec<f64>,
    verts: Vec<f64>,
    mat: Vec<f64>,
}

impl SimplexTester {
    /// Preallocates an unloaded tester for dimension `m`; call
    /// [`SimplexTester::load`] before use. Loading never reallocates, so a
    /// single tester can be reused across many simplices.
    pub fn with_dim(m: usize) -> Self {
        SimplexTester {
            dim: m,
            grads: vec![0.0; (m + 1) * m],
            base0: 0.0,
            grad_norm_sq: vec![0.0; m + 1],
            verts: vec![0.0; (m + 1) * m],
            mat: vec![0.0; m * m],
        }
    }

    pub fn new(s: &SimplexVertices) -> Result<Self> {
        let mut t = Self::with_dim(s.dim());
        t.load(s)?;
        Ok(t)
    }

    /// Builds a tester directly from point-set indices.
    pub fn from_indices(ps: &PointSet, idx: &[usize]) -> Result<Self> {
        let mut t = Self::with_dim(ps.dim());
        let idx32: Vec<u32> = idx.iter().map(|&i| i as u32).collect();
        t.load_from_pointset(ps, &idx32)?;
        Ok(t)
    }

    pub fn load(&mut self, s: &SimplexVertices) -> Result<()> {
        assert_eq!(s.dim(), self.dim);
        self.verts.copy_from_slice(&s.coords);
        self.recompute()
    }

    /// Loads the simplex with the given vertex indices of `ps`.
    pub fn load_from_pointset(&mut self, ps: &PointSet, idx: &[u32]) -> Result<()> {
        let m = self.dim;
        assert_eq!(ps.dim(), m);
        assert_eq!(idx.len(), m + 1);
        for (slot, &i) in idx.iter().enumerate() {
            self.verts[slot * m..(slot + 1) * m].copy_from_slice(ps.point(i as usize));
        }
        self.recompute()
    }

    fn recompute(&mut self) -> Result<()> {
        let m = self.dim;
        let (full_det, scale) = edge_det_and_scale_flat(&self.verts, m, &mut self.mat);
        if Orientation::classify(full_det, scale) == Orientation::Zero {
            return Err(Error::DegenerateSimplex);
        }
        let sign = if full_det > 0.0 { 1.0 } else { -1.0 };

        for facet in 1..=m {
            for k in 0..m {
                // det of the edge matrix with row (facet-1) replaced by e_k
                for i in 1..=m {
                    let row = &mut self.mat[(i - 1) * m..i * m];
                    if i == facet {
                        row.fill(0.0);
                        row[k] = 1.0;
                    } else {
                        for j in 0..m {
                            row[j] = self.verts[i * m + j] - self.verts[j];
                        }
                    }
                }
                self.grads[facet * m + k] = sign * det_in_place(&mut self.mat, m);
            }
        }
        // facet forms sum to the full determinant identically
        for k in 0..m {
            let mut g0 = 0.0;
            for facet in 1..=m {
                g0 -= self.grads[facet * m + k];
            }
            self.grads[k] = g0;
        }
        for f in 0..=m {
            self.grad_norm_sq[f] = self.grads[f * m..(f + 1) * m]
                .iter()
                .map(|g| g * g)
                .sum();
        }
        self.base0 = sign * full_det;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn vertex(&self, i: usize) -> &[f64] {
        &self.verts[i * self.dim..(i + 1) * self.dim]
    }

    /// True iff `p` lies in the closed simplex (boundary included). Points
    /// within the relative tolerance of a facet plane count as on it.
    #[inline]
    pub fn contains_closed(&self, p: &[f64]) -> bool {
        debug_assert_eq!(p.len(), self.dim);
        let m = self.dim;
        let v0 = self.vertex(0);
        for facet in 0..=m {
            let grad = &self.grads[facet * m..(facet + 1) * m];
            let mut g = if facet == 0 { self.base0 } else { 0.0 };
            for j in 0..m {
                g += grad[j] * (p[j] - v0[j]);
            }
            if g >= 0.0 {
                continue;
            }
            // negative: inside only if within tolerance of the plane,
            // relative to the distance from an on-plane vertex
            let anchor = if facet == 0 { self.vertex(1) } else { v0 };
            let mut dist_sq = 0.0;
            for j in 0..m {
                let dj = p[j] - anchor[j];
                dist_sq += dj * dj;
            }
            if g * g > EPS_GEOM * EPS_GEOM * self.grad_norm_sq[facet] * dist_sq {
                return false;
            }
        }
        true
    }

    /// True iff `p` equals one of the simplex vertices exactly.
    pub fn is_vertex(&self, p: &[f64]) -> bool {
        self.verts
            .chunks_exact(self.dim)
            .any(|v| v.iter().zip(p).all(|(a, b)| a == b))
    }

    /// Closed containment excluding the vertices themselves.
    pub fn contains_nonvertex(&self, p: &[f64]) -> bool {
        self.contains_closed(p) && !self.is_vertex(p)
    }
}

/// True iff `p` lies in the closed simplex and is not a vertex. A point on
/// the boundary (non-vertex) counts as contained.
pub fn contains_strictly(s: &SimplexVertices, p: &Point) -> Result<bool> {
    if p.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: p.dim(),
        });
    }
    Ok(SimplexTester::new(s)?.contains_nonvertex(p.coords()))
}

/// Visits every k-combination of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[u32]) -> bool) {
    if k > n {
        return;
    }
    let mut c: Vec<u32> = (0..k as u32).collect();
    loop {
        if !f(&c) {
            return;
        }
        // advance odometer
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] + 1 <= (n - k + i) as u32 {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// True iff every `(M+1)`-subset of `X` is affinely independent, i.e. no
/// `M+1` points lie in a common hyperplane. Brute force over all subsets.
pub fn general_position(ps: &PointSet) -> bool {
    let m = ps.dim();
    let n = ps.len();
    if n < m + 1 {
        return true;
    }
    let mut ok = true;
    let mut idx = vec![0usize; m + 1];
    for_each_combination(n, m + 1, &mut |c| {
        for (a, &b) in idx.iter_mut().zip(c) {
            *a = b as usize;
        }
        let s = SimplexVertices::from_indices(ps, &idx).expect("valid indices");
        if orientation(&s) == Orientation::Zero {
            ok = false;
            return false;
        }
        true
    });
    ok
}

/// Volume of the unit ball in `R^m`: `kappa_m = pi^{m/2} / Gamma(m/2 + 1)`,
/// computed via the stable recurrence `kappa_m = 2 pi kappa_{m-2} / m`.
pub fn unit_ball_volume(m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::DimensionTooSmall(m));
    }
    let mut k_even = 1.0; // kappa_0
    let mut k_odd = 2.0; // kappa_1
    for i in 2..=m {
        let next = 2.0 * std::f64::consts::PI / i as f64 * if i % 2 == 0 { k_even } else { k_odd };
        if i % 2 == 0 {
            k_even = next;
        } else {
            k_odd = next;
        }
    }
    Ok(if m % 2 == 0 { k_even } else { k_odd })
}

/// Surface measure of the unit sphere in `R^m`: `omega_m = m * kappa_m`.
pub fn unit_sphere_measure(m: usize) -> Result<f64> {
    Ok(m as f64 * unit_ball_volume(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn simplex(pts: &[&[f64]]) -> SimplexVertices {
        let v: Vec<Point> = pts.iter().map(|p| pt(p)).collect();
        SimplexVertices::new(&v).unwrap()
    }

    #[test]
    fn orientation_canonical_triangle() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(orientation(&s), Orientation::Positive);
    }

    #[test]
    fn orientation_collinear_is_zero() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]);
        assert_eq!(orientation(&s), Orientation::Zero);
    }

    #[test]
    fn orientation_swap_flips_sign() {
        let s = simplex(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(orientation(&s), Orientation::Negative);
    }

    #[test]
    fn volume_unit_right_triangle() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert_relative_eq!(simplex_volume(&s), 0.5);
    }

    #[test]
    fn volume_unit_tetrahedron() {
        let s = simplex(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        assert_relative_eq!(simplex_volume(&s), 1.0 / 6.0);
    }

    #[test]
    fn volume_degenerate_is_zero() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]]);
        assert_eq!(simplex_volume(&s), 0.0);
    }

    #[test]
    fn contains_interior_point() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert!(contains_strictly(&s, &pt(&[0.2, 0.2])).unwrap());
    }

    #[test]
    fn contains_excludes_vertices() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert!(!contains_strictly(&s, &pt(&[1.0, 0.0])).unwrap());
    }

    #[test]
    fn contains_rejects_outside() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert!(!contains_strictly(&s, &pt(&[5.0, 5.0])).unwrap());
    }

    #[test]
    fn contains_boundary_point_counts() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        // midpoint of the hypotenuse: on the closed simplex, not a vertex
        assert!(contains_strictly(&s, &pt(&[0.5, 0.5])).unwrap());
    }

    #[test]
    fn contains_errors_on_degenerate() {
        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]);
        assert!(matches!(
            contains_strictly(&s, &pt(&[0.5, 0.5])),
            Err(Error::DegenerateSimplex)
        ));
    }

    #[test]
    fn general_position_collinear_triple() {
        let ps = PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 2.0, 0.0]).unwrap();
        assert!(!general_position(&ps));
    }

    #[test]
    fn general_position_square_corners() {
        let ps = PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(general_position(&ps));
    }

    #[test]
    fn unit_ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2).unwrap(), std::f64::consts::PI);
        assert_relative_eq!(
            unit_ball_volume(3).unwrap(),
            4.0 * std::f64::consts::PI / 3.0
        );
        assert_relative_eq!(
            unit_sphere_measure(2).unwrap(),
            2.0 * std::f64::consts::PI
        );
        assert_relative_eq!(
            unit_ball_volume(1).unwrap(),
            2.0
        );
    }

    #[test]
    fn omega_is_m_kappa() {
        for m in 1..8 {
            assert_relative_eq!(
                unit_sphere_measure(m).unwrap(),
                m as f64 * unit_ball_volume(m).unwrap()
            );
        }
    }

    #[test]
    fn duplicate_points_rejected() {
        let res = PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(res, Err(Error::DuplicatePoints)));
    }

    #[test]
    fn combinations_cover_all() {
        let mut seen = Vec::new();
        for_each_combination(5, 3, &mut |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
    }

    #[test]
    fn tester_matches_contains_on_boundary_tie() {
        // (0.5, 0.5) lies exactly on the segment (0,0)-(1,1)
        let s = simplex(&[&[0.0, 0.0], &[1.0, 1.0], &[1.0, 0.0]]);
        let t = SimplexTester::new(&s).unwrap();
        assert!(t.contains_closed(&[0.5, 0.5]));
        assert!(t.contains_nonvertex(&[0.5, 0.5]));
        assert!(t.is_vertex(&[1.0, 1.0]));
    }
}
