//! Emptiness of simplices, subset degrees, the set degree `deg(X)` and
//! empty-simplex counts.
//!
//! The engine owns a spatial grid over the point set (cell size tuned to
//! `diam(X) * n^(-1/M)`); emptiness tests enumerate only candidate points
//! whose grid cells overlap the simplex bounding box, with an early exit on
//! the first contained point. Exact set degree enumerates every
//! `(M+1)`-subset once and charges each empty simplex to its `M+1` facet
//! subsets, so the per-subset degrees and the empty-simplex count come out
//! of one pass. Beyond the exact-mode cap only the local lower-bound mode
//! runs; it restricts the maximum to the `T`-clustered subsets counted by
//! `N_T` and therefore never exceeds the exact degree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::error::Error;
use crate::functionals::FunctionalValue;
use crate::geom::{PointSet, SimplexTester};
use crate::grid::SpatialIndex;
use crate::Result;

/// An `M`-element index subset with its computed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetDegree {
    /// Strictly increasing indices into the point set.
    pub indices: Vec<usize>,
    pub degree: u32,
}

/// How a [`DegreeReport`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeMode {
    Exact,
    /// Maximum restricted to `T`-clustered subsets; a lower bound on the
    /// exact degree, never an estimate of it.
    LocalLowerBound,
}

/// Result of a set-degree computation.
#[derive(Debug, Clone)]
pub struct DegreeReport {
    pub degree: u32,
    /// A maximizing subset (lexicographically smallest index tuple on
    /// ties); `None` when no subset qualified in local mode.
    pub argmax: Option<SubsetDegree>,
    pub mode: DegreeMode,
    /// Number of simplex emptiness tests performed.
    pub simplex_tests: u64,
}

/// Default exact-mode cap on `n` per dimension; exact cost grows like
/// `n^(M+2)` in the worst case.
pub fn default_exact_cap(dim: usize) -> usize {
    match dim {
        2 => 400,
        3 => 60,
        4 => 30,
        _ => 20,
    }
}

/// Degree computations over one immutable point set.
pub struct DegreeEngine<'a> {
    ps: &'a PointSet,
    index: SpatialIndex,
    /// `binom[i * (m + 2) + j] = C(i, j)` for `i <= n`, `j <= m + 1`.
    binom: Vec<u64>,
    bbox_margin: f64,
}

struct EnumAccum {
    /// Per-M-subset empty-simplex counts, indexed by colex rank; empty when
    /// only the total is needed.
    counts: Vec<u32>,
    empties: u64,
    tests: u64,
}

impl<'a> DegreeEngine<'a> {
    pub fn new(ps: &'a PointSet) -> Self {
        let m = ps.dim();
        let n = ps.len();
        let cols = m + 2;
        let mut binom = vec![0u64; (n + 1) * cols];
        for i in 0..=n {
            for j in 0..cols {
                binom[i * cols + j] = if j == 0 {
                    1
                } else if i == 0 {
                    0
                } else {
                    binom[(i - 1) * cols + j] + binom[(i - 1) * cols + j - 1]
                };
            }
        }
        DegreeEngine {
            ps,
            index: SpatialIndex::new(ps),
            binom,
            bbox_margin: ps.bbox_diameter() * 1e-9 + f64::MIN_POSITIVE,
        }
    }

    pub fn point_set(&self) -> &PointSet {
        self.ps
    }

    fn m(&self) -> usize {
        self.ps.dim()
    }

    fn n(&self) -> usize {
        self.ps.len()
    }

    fn choose(&self, i: usize, j: usize) -> u64 {
        self.binom[i * (self.m() + 2) + j]
    }

    /// Colex rank of a strictly increasing `M`-subset.
    fn rank(&self, subset: &[u32]) -> usize {
        subset
            .iter()
            .enumerate()
            .map(|(j, &c)| self.choose(c as usize, j + 1))
            .sum::<u64>() as usize
    }

    /// Inverse of [`DegreeEngine::rank`].
    fn unrank(&self, mut r: u64, m: usize) -> Vec<u32> {
        let mut out = vec![0u32; m];
        let mut hi = self.n();
        for j in (0..m).rev() {
            let mut c = hi - 1;
            while self.choose(c, j + 1) > r {
                c -= 1;
            }
            out[j] = c as u32;
            r -= self.choose(c, j + 1);
            hi = c;
        }
        out
    }

    fn validate_indices(&self, idx: &[u32], expected_len: usize) -> Result<()> {
        if idx.len() != expected_len {
            return Err(Error::WrongVertexCount {
                expected: expected_len,
                got: idx.len(),
            });
        }
        let n = self.n() as u32;
        let mut seen: Vec<u32> = idx.to_vec();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePoints);
            }
        }
        if seen.last().is_some_and(|&i| i >= n) {
            return Err(Error::NotEnoughPoints {
                needed: *seen.last().unwrap() as usize + 1,
                got: self.n(),
            });
        }
        Ok(())
    }

    /// Emptiness of a loaded simplex: no point of `X` off the chosen
    /// indices lies in the closed hull. Scans only grid cells overlapping
    /// the (tolerance-expanded) simplex bounding box, falling back to a
    /// linear pass when the box covers most of the grid.
    fn is_empty_loaded(&self, tester: &SimplexTester, idx: &[u32], tests: &mut u64) -> bool {
        *tests += 1;
        let m = self.m();
        let mut lo = [f64::INFINITY; 8];
        let mut hi = [f64::NEG_INFINITY; 8];
        let lo = &mut lo[..m];
        let hi = &mut hi[..m];
        for &i in idx {
            let p = self.ps.point(i as usize);
            for j in 0..m {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        for j in 0..m {
            lo[j] -= self.bbox_margin;
            hi[j] += self.bbox_margin;
        }

        let contains_other = |id: u32| -> bool {
            !idx.contains(&id) && tester.contains_closed(self.ps.point(id as usize))
        };

        if self.index.cells_in_bbox(lo, hi) * 2 >= self.index.n_cells() {
            !(0..self.n() as u32).any(contains_other)
        } else {
            self.index.scan_bbox(lo, hi, |id| !contains_other(id))
        }
    }

    /// True iff the `M+1` chosen points form an empty simplex in `X`.
    pub fn is_empty_simplex(&self, idx: &[u32]) -> Result<bool> {
        self.validate_indices(idx, self.m() + 1)?;
        let mut tester = SimplexTester::with_dim(self.m());
        tester.load_from_pointset(self.ps, idx)?;
        let mut tests = 0;
        Ok(self.is_empty_loaded(&tester, idx, &mut tests))
    }

    /// Number of points `z` completing the `M`-subset to an empty simplex.
    pub fn degree_of_subset(&self, idx: &[u32]) -> Result<u32> {
        let mut tests = 0;
        self.degree_of_subset_counted(idx, &mut tests)
    }

    fn degree_of_subset_counted(&self, idx: &[u32], tests: &mut u64) -> Result<u32> {
        let m = self.m();
        self.validate_indices(idx, m)?;
        let mut tester = SimplexTester::with_dim(m);
        let mut simplex: Vec<u32> = idx.to_vec();
        simplex.push(0);
        let mut degree = 0;
        for z in 0..self.n() as u32 {
            if idx.contains(&z) {
                continue;
            }
            simplex[m] = z;
            tester.load_from_pointset(self.ps, &simplex)?;
            if self.is_empty_loaded(&tester, &simplex, tests) {
                degree += 1;
            }
        }
        Ok(degree)
    }

    /// Shared exact enumeration: visits every `(M+1)`-subset once; when
    /// `with_counts`, charges each empty simplex to its `M+1` facet
    /// subsets by colex rank.
    fn enumerate_exact(&self, with_counts: bool) -> Result<EnumAccum> {
        let m = self.m();
        let n = self.n();
        let n_subsets = self.choose(n, m) as usize;
        let first_max = n - m; // first index of an (M+1)-subset

        (0..first_max)
            .into_par_iter()
            .try_fold(
                || EnumAccum {
                    counts: if with_counts {
                        vec![0u32; n_subsets]
                    } else {
                        Vec::new()
                    },
                    empties: 0,
                    tests: 0,
                },
                |mut acc, first| -> Result<EnumAccum> {
                    let mut tester = SimplexTester::with_dim(m);
                    let mut idx = vec![first as u32; m + 1];
                    let mut facet = vec![0u32; m];
                    for s in 1..=m {
                        idx[s] = (first + s) as u32;
                    }
                    loop {
                        tester.load_from_pointset(self.ps, &idx)?;
                        if self.is_empty_loaded(&tester, &idx, &mut acc.tests) {
                            acc.empties += 1;
                            if with_counts {
                                for drop in 0..=m {
                                    let mut w = 0;
                                    for (r, &v) in idx.iter().enumerate() {
                                        if r != drop {
                                            facet[w] = v;
                                            w += 1;
                                        }
                                    }
                                    acc.counts[self.rank(&facet)] += 1;
                                }
                            }
                        }
                        // advance the tail odometer over slots 1..=m
                        let mut s = m + 1;
                        loop {
                            if s == 1 {
                                return Ok(acc);
                            }
                            s -= 1;
                            if (idx[s] as usize) < n - (m + 1 - s) {
                                idx[s] += 1;
                                for r in s + 1..=m {
                                    idx[r] = idx[r - 1] + 1;
                                }
                                break;
                            }
                        }
                    }
                },
            )
            .try_reduce(
                || EnumAccum {
                    counts: if with_counts {
                        vec![0u32; n_subsets]
                    } else {
                        Vec::new()
                    },
                    empties: 0,
                    tests: 0,
                },
                |mut a, b| {
                    if a.counts.len() < b.counts.len() {
                        return Ok(EnumAccum {
                            counts: b.counts,
                            empties: a.empties + b.empties,
                            tests: a.tests + b.tests,
                        });
                    }
                    for (x, y) in a.counts.iter_mut().zip(&b.counts) {
                        *x += y;
                    }
                    a.empties += b.empties;
                    a.tests += b.tests;
                    Ok(a)
                },
            )
    }

    /// Number of `(M+1)`-subsets forming empty simplices.
    pub fn count_empty_simplices(&self) -> Result<u64> {
        if self.n() < self.m() + 1 {
            return Ok(0);
        }
        Ok(self.enumerate_exact(false)?.empties)
    }

    /// Exact `deg(X)` with a maximizing subset, under the default cap.
    pub fn degree_of_set_exact(&self) -> Result<DegreeReport> {
        self.degree_of_set_exact_with_cap(default_exact_cap(self.m()))
    }

    /// Exact `deg(X)` with an explicit cap on `n`.
    pub fn degree_of_set_exact_with_cap(&self, cap: usize) -> Result<DegreeReport> {
        let m = self.m();
        let n = self.n();
        if n < m + 1 {
            return Err(Error::NotEnoughPoints {
                needed: m + 1,
                got: n,
            });
        }
        if n > cap {
            return Err(Error::ExactCapExceeded { n, cap, dim: m });
        }
        let acc = self.enumerate_exact(true)?;
        let best = *acc.counts.iter().max().expect("at least one subset");
        let mut argmax: Option<Vec<u32>> = None;
        for (r, &c) in acc.counts.iter().enumerate() {
            if c == best {
                let tuple = self.unrank(r as u64, m);
                if argmax.as_ref().is_none_or(|cur| tuple < *cur) {
                    argmax = Some(tuple);
                }
            }
        }
        let indices = argmax.expect("nonempty counts");
        Ok(DegreeReport {
            degree: best,
            argmax: Some(SubsetDegree {
                indices: indices.iter().map(|&i| i as usize).collect(),
                degree: best,
            }),
            mode: DegreeMode::Exact,
            simplex_tests: acc.tests,
        })
    }

    /// All `M`-subsets counted by `N_T`: some member's closed `T`-ball
    /// covers the subset. Sorted tuples in sorted order, each counted once.
    pub(crate) fn clustered_subsets(&self, t: f64) -> Result<Vec<Vec<u32>>> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidRadius(t));
        }
        let m = self.m();
        let n = self.n();
        let mut set: HashSet<Vec<u32>> = HashSet::new();
        let mut nbrs = Vec::new();
        for i in 0..n as u32 {
            self.index
                .neighbors_within(self.ps, self.ps.point(i as usize), t, Some(i), &mut nbrs);
            let k = m - 1;
            if nbrs.len() < k {
                continue;
            }
            // all (M-1)-subsets of the neighbor list, plus the anchor
            let mut pick: Vec<usize> = (0..k).collect();
            'subsets: loop {
                let mut subset: Vec<u32> = pick.iter().map(|&q| nbrs[q]).collect();
                subset.push(i);
                subset.sort_unstable();
                set.insert(subset);
                // advance odometer over neighbor positions
                let mut s = k;
                loop {
                    if s == 0 {
                        break 'subsets;
                    }
                    s -= 1;
                    if pick[s] + 1 <= nbrs.len() - (k - s) {
                        pick[s] += 1;
                        for r in s + 1..k {
                            pick[r] = pick[r - 1] + 1;
                        }
                        break;
                    }
                }
            }
        }
        let mut out: Vec<Vec<u32>> = set.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `N_T(X)`: number of `M`-subsets clustered in some member's `T`-ball.
    pub fn n_t(&self, t: f64) -> Result<u64> {
        Ok(self.clustered_subsets(t)?.len() as u64)
    }

    /// `F_T^(k)(X)`: clustered subsets weighted by the `k`-th power of
    /// their degree.
    pub fn f_t_k(&self, t: f64, k: u32) -> Result<FunctionalValue> {
        let subsets = self.clustered_subsets(t)?;
        let values: Vec<u32> = subsets
            .par_iter()
            .map(|s| self.degree_of_subset(s))
            .collect::<Result<Vec<_>>>()?;
        let value: f64 = values.iter().map(|&d| (d as f64).powi(k as i32)).sum();
        Ok(FunctionalValue {
            t,
            k,
            value,
            qualifying_subsets: subsets.len() as u64,
        })
    }

    /// Maximum subset degree over exactly the `T`-clustered subsets; a
    /// certified lower bound for `deg(X)` (0 when nothing qualifies).
    pub fn degree_lower_bound_local(&self, t: f64) -> Result<DegreeReport> {
        let subsets = self.clustered_subsets(t)?;
        let results: Vec<(u32, u64)> = subsets
            .par_iter()
            .map(|s| {
                let mut tests = 0;
                let d = self.degree_of_subset_counted(s, &mut tests)?;
                Ok((d, tests))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut best: Option<(u32, &Vec<u32>)> = None;
        let mut total_tests = 0;
        for (s, &(d, tests)) in subsets.iter().zip(&results) {
            total_tests += tests;
            // subsets come sorted, so strict improvement keeps the
            // lexicographically smallest argmax
            if best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, s));
            }
        }
        Ok(DegreeReport {
            degree: best.map_or(0, |(d, _)| d),
            argmax: best.map(|(d, s)| SubsetDegree {
                indices: s.iter().map(|&i| i as usize).collect(),
                degree: d,
            }),
            mode: DegreeMode::LocalLowerBound,
            simplex_tests: total_tests,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_corners() -> PointSet {
        PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn empty_simplex_trivial_triangle() {
        let ps = PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 0.3, 0.8]).unwrap();
        let eng = DegreeEngine::new(&ps);
        assert!(eng.is_empty_simplex(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn centroid_breaks_emptiness() {
        let ps = PointSet::from_flat(2, vec![0.0, 0.0, 3.0, 0.0, 0.0, 3.0, 1.0, 1.0]).unwrap();
        let eng = DegreeEngine::new(&ps);
        assert!(!eng.is_empty_simplex(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn square_all_four_triangles_empty() {
        let ps = square_corners();
        let eng = DegreeEngine::new(&ps);
        assert!(eng.is_empty_simplex(&[0, 1, 2]).unwrap());
        assert!(eng.is_empty_simplex(&[0, 1, 3]).unwrap());
        assert!(eng.is_empty_simplex(&[0, 2, 3]).unwrap());
        assert!(eng.is_empty_simplex(&[1, 2, 3]).unwrap());
        assert_eq!(eng.count_empty_simplices().unwrap(), 4);
    }

    #[test]
    fn square_pair_degrees() {
        let ps = square_corners();
        let eng = DegreeEngine::new(&ps);
        for pair in [[0u32, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]] {
            assert_eq!(eng.degree_of_subset(&pair).unwrap(), 2, "pair {pair:?}");
        }
        let report = eng.degree_of_set_exact().unwrap();
        assert_eq!(report.degree, 2);
        assert_eq!(report.argmax.unwrap().indices, vec![0, 1]);
    }

    #[test]
    fn minimal_set_has_degree_one() {
        let ps = PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 0.3, 0.8]).unwrap();
        let eng = DegreeEngine::new(&ps);
        assert_eq!(eng.degree_of_subset(&[0, 1]).unwrap(), 1);
        let report = eng.degree_of_set_exact().unwrap();
        assert_eq!(report.degree, 1);
        assert_eq!(eng.count_empty_simplices().unwrap(), 1);
    }

    #[test]
    fn square_plus_center_pair_degree() {
        // the center lies on both diagonals (closed-hull policy): triangles
        // {(0,0),(1,0),(0,1)} and {(0,0),(1,0),(1,1)} are not empty, only
        // the apex (0.5,0.5) completes the bottom pair
        let ps =
            PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.5, 0.5])
                .unwrap();
        let eng = DegreeEngine::new(&ps);
        assert_eq!(eng.degree_of_subset(&[0, 1]).unwrap(), 1);
    }

    #[test]
    fn local_mode_brackets() {
        let ps = square_corners();
        let eng = DegreeEngine::new(&ps);
        let local = eng.degree_lower_bound_local(2.0).unwrap();
        let exact = eng.degree_of_set_exact().unwrap();
        assert_eq!(local.degree, exact.degree);
        assert_eq!(local.mode, DegreeMode::LocalLowerBound);
        let none = eng.degree_lower_bound_local(0.5).unwrap();
        assert_eq!(none.degree, 0);
        assert!(none.argmax.is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let ps = square_corners();
        let eng = DegreeEngine::new(&ps);
        assert!(matches!(
            eng.degree_of_set_exact_with_cap(3),
            Err(Error::ExactCapExceeded { .. })
        ));
    }

    #[test]
    fn degenerate_simplex_is_an_error() {
        let ps = PointSet::from_flat(2, vec![0.0, 0.0, 1.0, 0.0, 2.0, 0.0, 0.5, 1.0]).unwrap();
        let eng = DegreeEngine::new(&ps);
        assert!(matches!(
            eng.is_empty_simplex(&[0, 1, 2]),
            Err(Error::DegenerateSimplex)
        ));
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let ps = square_corners();
        let eng = DegreeEngine::new(&ps);
        let mut count = 0;
        crate::geom::for_each_combination(4, 2, &mut |c| {
            assert_eq!(eng.unrank(eng.rank(c) as u64, 2), c);
            count += 1;
            true
        });
        assert_eq!(count, 6);
    }
}
