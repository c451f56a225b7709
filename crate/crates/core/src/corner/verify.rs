use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::PointSet;

/// Three points `(x, y)`, `(x + d, y)`, `(x, y + d)` with `d != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CornerWitness {
    pub x: u64,
    pub y: u64,
    pub d: i64,
}

impl CornerWitness {
    /// The three corner points, as signed coordinates.
    pub fn points(&self) -> [(i128, i128); 3] {
        let (x, y, d) = (self.x as i128, self.y as i128, self.d as i128);
        [(x, y), (x + d, y), (x, y + d)]
    }

    /// True if `d != 0` and all three points are in `set`.
    pub fn holds_in(&self, set: &PointSet) -> bool {
        self.d != 0 && self.points().iter().all(|&(x, y)| set.contains_signed(x, y))
    }
}

/// Scans one row: every ordered pair `(x1, x2)` of distinct members gives
/// `d = x2 - x1`, and the corner closes iff `(x1, y + d)` is present.
fn row_corners<'a>(
    set: &'a PointSet,
    y: u64,
    xs: &'a [u64],
) -> impl Iterator<Item = CornerWitness> + 'a {
    xs.iter().flat_map(move |&x1| {
        xs.iter().filter_map(move |&x2| {
            if x1 == x2 {
                return None;
            }
            let d = x2 as i64 - x1 as i64;
            set.contains_signed(x1 as i128, y as i128 + d as i128)
                .then_some(CornerWitness { x: x1, y, d })
        })
    })
}

/// Finds a corner in `set`, if any.
///
/// Every corner has two points in a common row, so scanning ordered pairs
/// within each row is complete. Rows are checked in parallel; the returned
/// witness is the first in scan order (rows ascending, then pairs
/// lexicographically), independent of thread count.
pub fn find_corner(set: &PointSet) -> Option<CornerWitness> {
    let rows: Vec<(u64, &[u64])> = set.rows().filter(|(_, xs)| xs.len() >= 2).collect();
    let found = rows
        .par_iter()
        .find_map_first(|&(y, xs)| row_corners(set, y, xs).next());
    debug_assert!(found.map_or(true, |w| w.holds_in(set)));
    found
}

/// Every corner in `set`, in scan order.
pub fn all_corners(set: &PointSet) -> Vec<CornerWitness> {
    set.rows()
        .flat_map(|(y, xs)| row_corners(set, y, xs))
        .collect()
}

/// True iff no three distinct elements form `a, a + t, a + 2t` with `t != 0`.
pub fn is_3ap_free<'a, I>(set: I) -> bool
where
    I: IntoIterator<Item = &'a u64>,
{
    let mut sorted: Vec<u64> = set.into_iter().copied().collect();
    sorted.sort_unstable();
    sorted.dedup();
    let lookup: HashSet<u64> = sorted.iter().copied().collect();
    sorted.par_iter().enumerate().all(|(i, &a)| {
        sorted[i + 1..]
            .iter()
            .filter(|&&c| (c - a) % 2 == 0)
            .all(|&c| !lookup.contains(&(a + (c - a) / 2)))
    })
}
