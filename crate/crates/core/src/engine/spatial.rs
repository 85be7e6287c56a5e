use crate::geom::Vec2;
use crate::num::Real;

/// Uniform bucket grid over the world rectangle. Each query returns every
/// stored item in the 3×3 block of buckets around a point, so any item
/// within one bucket edge of the point is found.
#[derive(Debug, Clone)]
pub struct SpatialHash<T> {
    bucket: T,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<usize>>,
}

impl<T: Real> SpatialHash<T> {
    pub fn new(extent: Vec2<T>, bucket: T) -> Self {
        let count = |len: T| (len / bucket).ceil().to_usize().unwrap_or(1).max(1);
        let cols = count(extent.x);
        let rows = count(extent.y);
        Self {
            bucket,
            cols,
            rows,
            buckets: vec![Vec::new(); cols * rows],
        }
    }

    pub fn bucket_size(&self) -> T {
        self.bucket
    }

    fn key(&self, p: Vec2<T>) -> (usize, usize) {
        let clamp = |v: T, n: usize| {
            let k = (v / self.bucket).floor();
            if k < T::zero() {
                0
            } else {
                k.to_usize().unwrap_or(usize::MAX).min(n - 1)
            }
        };
        (clamp(p.y, self.rows), clamp(p.x, self.cols))
    }

    pub fn clear(&mut self) {
        self.buckets.iter_mut().for_each(Vec::clear);
    }

    pub fn insert(&mut self, item: usize, p: Vec2<T>) {
        let (r, c) = self.key(p);
        self.buckets[r * self.cols + c].push(item);
    }

    pub fn rebuild(&mut self, items: impl IntoIterator<Item = (usize, Vec2<T>)>) {
        self.clear();
        for (item, p) in items {
            self.insert(item, p);
        }
    }

    /// Candidates near `p`, sorted ascending.
    pub fn query(&self, p: Vec2<T>, out: &mut Vec<usize>) {
        out.clear();
        let (r, c) = self.key(p);
        for rr in r.saturating_sub(1)..=(r + 1).min(self.rows - 1) {
            for cc in c.saturating_sub(1)..=(c + 1).min(self.cols - 1) {
                out.extend_from_slice(&self.buckets[rr * self.cols + cc]);
            }
        }
        out.sort_unstable();
    }
}
