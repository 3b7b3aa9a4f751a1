//! Uniform spatial grid over a point set, used to prune emptiness tests and
//! fixed-radius neighbor queries. Built once per point set; immutable.

use crate::geom::PointSet;

#[derive(Debug, Clone)]
pub(crate) struct SpatialIndex {
    dim: usize,
    origin: Vec<f64>,
    cell: f64,
    shape: Vec<usize>,
    strides: Vec<usize>,
    /// CSR layout: `starts[c]..starts[c+1]` indexes `order` for cell `c`.
    starts: Vec<u32>,
    order: Vec<u32>,
    n_cells: usize,
}

impl SpatialIndex {
    /// Default cell size `diam(X) * n^(-1/M)`, so the expected occupancy per
    /// cell is O(1) for uniform-ish inputs.
    pub fn new(ps: &PointSet) -> Self {
        let n = ps.len().max(1);
        let diam = ps.bbox_diameter();
        let cell = if diam > 0.0 {
            diam * (n as f64).powf(-1.0 / ps.dim() as f64)
        } else {
            1.0
        };
        Self::with_cell_size(ps, cell)
    }

    pub fn with_cell_size(ps: &PointSet, cell: f64) -> Self {
        let dim = ps.dim();
        let n = ps.len();
        let (origin, hi) = ps
            .bounding_box()
            .unwrap_or((vec![0.0; dim], vec![0.0; dim]));
        let cell = if cell > 0.0 && cell.is_finite() { cell } else { 1.0 };
        let mut shape = Vec::with_capacity(dim);
        for j in 0..dim {
            let extent = hi[j] - origin[j];
            let k = if extent > 0.0 {
                (extent / cell).floor() as usize + 1
            } else {
                1
            };
            shape.push(k.max(1));
        }
        let mut strides = vec![1usize; dim];
        for j in (0..dim.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * shape[j + 1];
        }
        let n_cells: usize = shape.iter().product();

        let mut counts = vec![0u32; n_cells + 1];
        let cell_of = |p: &[f64]| -> usize {
            let mut c = 0;
            for j in 0..dim {
                let mut k = ((p[j] - origin[j]) / cell) as isize;
                if k < 0 {
                    k = 0;
                }
                let k = (k as usize).min(shape[j] - 1);
                c += k * strides[j];
            }
            c
        };
        for p in ps.iter() {
            counts[cell_of(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts;
        let mut fill = starts.clone();
        let mut order = vec![0u32; n];
        for (i, p) in ps.iter().enumerate() {
            let c = cell_of(p);
            order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }

        SpatialIndex {
            dim,
            origin,
            cell,
            shape,
            strides,
            starts,
            order,
            n_cells,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    fn axis_range(&self, j: usize, lo: f64, hi: f64) -> (usize, usize) {
        let a = ((lo - self.origin[j]) / self.cell).floor();
        let b = ((hi - self.origin[j]) / self.cell).floor();
        let a = if a < 0.0 { 0 } else { (a as usize).min(self.shape[j] - 1) };
        let b = if b < 0.0 { 0 } else { (b as usize).min(self.shape[j] - 1) };
        (a, b)
    }

    /// Number of grid cells overlapped by the box `[lo, hi]`.
    pub fn cells_in_bbox(&self, lo: &[f64], hi: &[f64]) -> usize {
        let mut total = 1usize;
        for j in 0..self.dim {
            let (a, b) = self.axis_range(j, lo[j], hi[j]);
            total *= b - a + 1;
        }
        total
    }

    /// Visits every point whose cell overlaps `[lo, hi]`. The callback
    /// returns `false` to abort the scan; the method then returns `false`.
    #[inline]
    pub fn scan_bbox(&self, lo: &[f64], hi: &[f64], mut f: impl FnMut(u32) -> bool) -> bool {
        let dim = self.dim;
        let mut ranges = [(0usize, 0usize); 8];
        let stack_ok = dim <= 8;
        let mut ranges_heap;
        let ranges: &mut [(usize, usize)] = if stack_ok {
            &mut ranges[..dim]
        } else {
            ranges_heap = vec![(0usize, 0usize); dim];
            &mut ranges_heap
        };
        for j in 0..dim {
            ranges[j] = self.axis_range(j, lo[j], hi[j]);
        }
        // odometer over the per-axis cell ranges
        let mut pos = [0usize; 8];
        let mut pos_heap;
        let pos: &mut [usize] = if stack_ok {
            &mut pos[..dim]
        } else {
            pos_heap = vec![0usize; dim];
            &mut pos_heap
        };
        for j in 0..dim {
            pos[j] = ranges[j].0;
        }
        loop {
            let mut c = 0;
            for j in 0..dim {
                c += pos[j] * self.strides[j];
            }
            let (s, e) = (self.starts[c] as usize, self.starts[c + 1] as usize);
            for &id in &self.order[s..e] {
                if !f(id) {
                    return false;
                }
            }
            // advance
            let mut j = dim;
            loop {
                if j == 0 {
                    return true;
                }
                j -= 1;
                if pos[j] < ranges[j].1 {
                    pos[j] += 1;
                    for r in j + 1..dim {
                        pos[r] = ranges[r].0;
                    }
                    break;
                }
            }
        }
    }

    /// Indices of all points within (closed) distance `t` of `center`,
    /// excluding `exclude` if given. Results are sorted.
    pub fn neighbors_within(
        &self,
        ps: &PointSet,
        center: &[f64],
        t: f64,
        exclude: Option<u32>,
        out: &mut Vec<u32>,
    ) {
        out.clear();
        let dim = self.dim;
        let lo: Vec<f64> = (0..dim).map(|j| center[j] - t).collect();
        let hi: Vec<f64> = (0..dim).map(|j| center[j] + t).collect();
        let t_sq = t * t;
        self.scan_bbox(&lo, &hi, |id| {
            if Some(id) != exclude {
                let p = ps.point(id as usize);
                let mut d = 0.0;
                for j in 0..dim {
                    let dj = p[j] - center[j];
                    d += dj * dj;
                }
                if d <= t_sq {
                    out.push(id);
                }
            }
            true
        });
        out.sort_unstable();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(coords: Vec<f64>) -> PointSet {
        PointSet::from_flat(2, coords).unwrap()
    }

    #[test]
    fn scan_finds_all_points() {
        let p = ps(vec![0.1, 0.1, 0.9, 0.9, 0.5, 0.5, 0.2, 0.8]);
        let idx = SpatialIndex::new(&p);
        let mut seen = Vec::new();
        idx.scan_bbox(&[0.0, 0.0], &[1.0, 1.0], |i| {
            seen.push(i);
            true
        });
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn neighbors_within_radius() {
        let p = ps(vec![0.0, 0.0, 0.5, 0.0, 3.0, 0.0]);
        let idx = SpatialIndex::new(&p);
        let mut out = Vec::new();
        idx.neighbors_within(&p, p.point(0), 1.0, Some(0), &mut out);
        assert_eq!(out, vec![1]);
        // closed ball: exact distance qualifies
        idx.neighbors_within(&p, p.point(1), 0.5, Some(1), &mut out);
        assert_eq!(out, vec![0]);
    }

    #[test]
    fn scan_abort_propagates() {
        let p = ps(vec![0.1, 0.1, 0.9, 0.9]);
        let idx = SpatialIndex::new(&p);
        let completed = idx.scan_bbox(&[0.0, 0.0], &[1.0, 1.0], |_| false);
        assert!(!completed);
    }
}
