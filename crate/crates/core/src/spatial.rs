//! Minimal 3D k-d tree for exact nearest-neighbour queries over world-space
//! points. Exactness matters: surface distances are defined point-to-point,
//! not via a sampled distance transform.

/// k-d tree over `[f64; 3]` points, built by median splits.
pub struct KdTree {
    // Flattened nodes: points reordered in place, node layout is an implicit
    // balanced tree over `points[lo..hi]` with the median at the split index.
    points: Vec<[f64; 3]>,
}

struct Frame {
    lo: usize,
    hi: usize,
    axis: usize,
}

impl KdTree {
    /// Build from a point set. Panics if `points` is empty.
    pub fn build(mut points: Vec<[f64; 3]>) -> Self {
        assert!(!points.is_empty(), "KdTree over empty point set");
        let n = points.len();
        let mut stack = vec![Frame { lo: 0, hi: n, axis: 0 }];
        while let Some(Frame { lo, hi, axis }) = stack.pop() {
            if hi - lo <= 1 {
                continue;
            }
            let mid = (lo + hi) / 2;
            points[lo..hi].select_nth_unstable_by(mid - lo, |a, b| {
                a[axis].partial_cmp(&b[axis]).unwrap()
            });
            let next = (axis + 1) % 3;
            stack.push(Frame { lo, hi: mid, axis: next });
            stack.push(Frame { lo: mid + 1, hi, axis: next });
        }
        KdTree { points }
    }

    /// Squared Euclidean distance to the nearest stored point.
    pub fn nearest_sq(&self, q: [f64; 3]) -> f64 {
        let mut best = f64::INFINITY;
        self.search(0, self.points.len(), 0, q, &mut best);
        best
    }

    /// Euclidean distance to the nearest stored point.
    pub fn nearest(&self, q: [f64; 3]) -> f64 {
        self.nearest_sq(q).sqrt()
    }

    fn search(&self, lo: usize, hi: usize, axis: usize, q: [f64; 3], best: &mut f64) {
        if lo >= hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let p = self.points[mid];
        let d = dist_sq(p, q);
        if d < *best {
            *best = d;
        }
        let delta = q[axis] - p[axis];
        let next = (axis + 1) % 3;
        let (near_lo, near_hi, far_lo, far_hi) = if delta < 0.0 {
            (lo, mid, mid + 1, hi)
        } else {
            (mid + 1, hi, lo, mid)
        };
        self.search(near_lo, near_hi, next, q, best);
        if delta * delta < *best {
            self.search(far_lo, far_hi, next, q, best);
        }
    }
}

#[inline]
fn dist_sq(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nearest_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..20 {
            let n = rng.random_range(1..200);
            let pts: Vec<[f64; 3]> = (0..n)
                .map(|_| {
                    [
                        rng.random::<f64>() * 10.0,
                        rng.random::<f64>() * 5.0,
                        rng.random::<f64>() * 20.0,
                    ]
                })
                .collect();
            let tree = KdTree::build(pts.clone());
            for _ in 0..50 {
                let q = [
                    rng.random::<f64>() * 12.0 - 1.0,
                    rng.random::<f64>() * 7.0 - 1.0,
                    rng.random::<f64>() * 22.0 - 1.0,
                ];
                let brute = pts
                    .iter()
                    .map(|&p| dist_sq(p, q))
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(tree.nearest_sq(q), brute, "trial {trial}");
            }
        }
    }

    #[test]
    fn single_point() {
        let tree = KdTree::build(vec![[1.0, 2.0, 3.0]]);
        assert_eq!(tree.nearest([1.0, 2.0, 3.0]), 0.0);
        assert!((tree.nearest([1.0, 2.0, 5.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn duplicate_points() {
        let tree = KdTree::build(vec![[0.0; 3]; 17]);
        assert_eq!(tree.nearest([3.0, 4.0, 0.0]), 5.0);
    }
}
