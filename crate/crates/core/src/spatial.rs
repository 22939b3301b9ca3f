//! Uniform-grid index over a blockage realization.
//!
//! Each rectangle is registered in every cell its bounding box overlaps; a
//! segment query walks the cells the segment passes through (Amanatides–Woo
//! traversal) so only nearby rectangles are tested exactly.

use crate::geometry::{
    clip_segment, ray_rect_entry, segment_intersects_rect, Point2, Rect, Segment,
};

const MAX_CELLS_PER_SIDE: usize = 1024;

#[derive(Debug, Clone)]
pub struct BlockageIndex {
    rects: Vec<Rect>,
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
}

impl BlockageIndex {
    /// Builds an index covering the square `[c - half_extent, c + half_extent]²`.
    /// Rectangles sticking out of the square are clipped to the border cells;
    /// queries must stay inside the square.
    pub fn new(rects: Vec<Rect>, center: Point2, half_extent: f64) -> Self {
        let side = 2.0 * half_extent.max(1e-9);
        let mean_reach = if rects.is_empty() {
            side
        } else {
            2.0 * rects.iter().map(Rect::half_diagonal).sum::<f64>() / rects.len() as f64
        };
        let spacing = side / (rects.len().max(1) as f64).sqrt();
        let cell = mean_reach
            .max(spacing)
            .max(side / MAX_CELLS_PER_SIDE as f64);
        let n = ((side / cell).ceil() as usize).clamp(1, MAX_CELLS_PER_SIDE);
        let origin = Point2::new(center.x - half_extent, center.y - half_extent);
        let mut index = Self {
            rects,
            origin,
            cell,
            nx: n,
            ny: n,
            cells: vec![Vec::new(); n * n],
        };
        for (id, r) in index.rects.iter().enumerate() {
            let corners = r.corners();
            let (mut lo, mut hi) = (corners[0], corners[0]);
            for c in &corners[1..] {
                lo = Point2::new(lo.x.min(c.x), lo.y.min(c.y));
                hi = Point2::new(hi.x.max(c.x), hi.y.max(c.y));
            }
            let (ix0, iy0) = index.cell_of(lo);
            let (ix1, iy1) = index.cell_of(hi);
            for iy in iy0..=iy1 {
                for ix in ix0..=ix1 {
                    index.cells[iy * index.nx + ix].push(id as u32);
                }
            }
        }
        index
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    fn cell_of(&self, p: Point2) -> (usize, usize) {
        let fx = ((p.x - self.origin.x) / self.cell).floor();
        let fy = ((p.y - self.origin.y) / self.cell).floor();
        let clamp = |f: f64, n: usize| -> usize {
            if f.is_nan() || f < 0.0 {
                0
            } else {
                (f as usize).min(n - 1)
            }
        };
        (clamp(fx, self.nx), clamp(fy, self.ny))
    }

    /// Visits the cells crossed by `a → b` in order. The callback receives the
    /// cell's rectangle ids and the segment parameter at which the walk leaves
    /// the cell; returning `false` stops the walk.
    fn walk(&self, a: Point2, b: Point2, mut visit: impl FnMut(&[u32], f64) -> bool) {
        let (mut ix, mut iy) = self.cell_of(a);
        let (ex, ey) = self.cell_of(b);
        let d = b - a;
        let axis = |pos: f64, org: f64, i: usize, delta: f64| -> (i64, f64, f64) {
            if delta > 0.0 {
                let boundary = org + (i + 1) as f64 * self.cell;
                (1, (boundary - pos) / delta, self.cell / delta)
            } else if delta < 0.0 {
                let boundary = org + i as f64 * self.cell;
                (-1, (boundary - pos) / delta, -self.cell / delta)
            } else {
                (0, f64::INFINITY, f64::INFINITY)
            }
        };
        let (sx, mut tx, dtx) = axis(a.x, self.origin.x, ix, d.x);
        let (sy, mut ty, dty) = axis(a.y, self.origin.y, iy, d.y);
        let max_steps = ix.abs_diff(ex) + iy.abs_diff(ey) + 1;
        for _ in 0..max_steps {
            let leave = tx.min(ty).min(1.0);
            if !visit(&self.cells[iy * self.nx + ix], leave) {
                return;
            }
            if ix == ex && iy == ey {
                return;
            }
            if tx < ty {
                let next = ix as i64 + sx;
                if next < 0 || next as usize >= self.nx {
                    return;
                }
                ix = next as usize;
                tx += dtx;
            } else {
                let next = iy as i64 + sy;
                if next < 0 || next as usize >= self.ny {
                    return;
                }
                iy = next as usize;
                ty += dty;
            }
        }
    }

    fn candidates(&self, s: &Segment) -> Vec<u32> {
        let mut ids = Vec::new();
        self.walk(s.a, s.b, |cell, _| {
            ids.extend_from_slice(cell);
            true
        });
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Ids of all rectangles intersecting `s`, ascending.
    pub fn hits(&self, s: &Segment) -> Vec<usize> {
        self.candidates(s)
            .into_iter()
            .map(|id| id as usize)
            .filter(|&id| segment_intersects_rect(s, &self.rects[id]))
            .collect()
    }

    pub fn count(&self, s: &Segment) -> usize {
        self.candidates(s)
            .into_iter()
            .filter(|&id| segment_intersects_rect(s, &self.rects[id as usize]))
            .count()
    }

    /// True iff some rectangle intersects `s`; stops at the first hit.
    pub fn any(&self, s: &Segment) -> bool {
        let mut hit = false;
        self.walk(s.a, s.b, |cell, _| {
            hit = cell
                .iter()
                .any(|&id| segment_intersects_rect(s, &self.rects[id as usize]));
            !hit
        });
        hit
    }

    /// True iff some rectangle intersecting `s` is taller than the straight
    /// 3-D ray at its entry point. The ray runs from height `h_start` at `s.a`
    /// to `h_end` at `s.b`; rectangles without a height mark always block.
    pub fn any_blocking_3d(&self, s: &Segment, h_start: f64, h_end: f64) -> bool {
        let mut hit = false;
        self.walk(s.a, s.b, |cell, _| {
            hit = cell.iter().any(|&id| {
                let r = &self.rects[id as usize];
                clip_segment(s, r).is_some_and(|(t0, t1)| match r.height {
                    None => true,
                    // the ray is monotone in t, so its lowest point over the
                    // footprint is at one end of the clipped interval
                    Some(h) => {
                        let ray_low = (h_start + t0 * (h_end - h_start))
                            .min(h_start + t1 * (h_end - h_start));
                        h > ray_low
                    }
                })
            });
            !hit
        });
        hit
    }

    /// Distance from `origin` along unit `dir` to the first rectangle, capped
    /// at `max_dist`.
    pub fn first_hit_distance(&self, origin: Point2, dir: Point2, max_dist: f64) -> f64 {
        let end = origin + dir * max_dist;
        let mut best = max_dist;
        self.walk(origin, end, |cell, leave| {
            for &id in cell {
                if let Some(t) = ray_rect_entry(origin, dir, &self.rects[id as usize]) {
                    best = best.min(t);
                }
            }
            best > leave * max_dist
        });
        best
    }

    /// True iff `q` lies inside some rectangle.
    pub fn covers(&self, q: Point2) -> bool {
        let (ix, iy) = self.cell_of(q);
        self.cells[iy * self.nx + ix]
            .iter()
            .any(|&id| crate::geometry::rect_contains_point(&self.rects[id as usize], q))
    }
}
