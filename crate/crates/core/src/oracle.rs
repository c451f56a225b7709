//! Exact maximum corner-free subsets of tiny grids.
//!
//! Branch and bound over the cells of `[0, n)^2` in row-major order, include
//! branch first. Cells are bits of a `u64`, so `n <= 8`. Adding a point marks
//! every cell that would now complete a corner as forbidden, which keeps the
//! partial set corner-free without re-verification.
//!
//! The bound for a node in row `y` is the number of still-allowed cells left
//! in that row plus the optimum for the `n - 1 - y` rows below it. Those
//! optima come from solving rectangles of `1, 2, .., n - 1` rows first; a
//! block of consecutive rows is a translate of the rectangle at the origin.

use serde::Serialize;

use crate::corner::{find_corner, Point, PointSet};
use crate::error::{Error, Result};

pub const DEFAULT_CAP: u32 = 6;

/// Bitmask representation limits the grid to 64 cells.
pub const HARD_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub n: u32,
    pub max_size: usize,
    pub witness: PointSet,
    pub nodes_explored: u64,
}

#[derive(Serialize)]
struct OracleRecord {
    n: u32,
    max_size: usize,
    witness: Vec<[u64; 2]>,
    nodes_explored: u64,
}

impl OracleResult {
    pub fn to_json(&self) -> String {
        let record = OracleRecord {
            n: self.n,
            max_size: self.max_size,
            witness: self.witness.sorted_points().iter().map(|p| [p.x, p.y]).collect(),
            nodes_explored: self.nodes_explored,
        };
        serde_json::to_string(&record).expect("oracle result serializes")
    }
}

pub fn max_corner_free(n: u32) -> Result<OracleResult> {
    max_corner_free_with_cap(n, DEFAULT_CAP)
}

pub fn max_corner_free_with_cap(n: u32, cap: u32) -> Result<OracleResult> {
    if n == 0 {
        return Err(Error::domain("grid side must be >= 1"));
    }
    let cap = cap.min(HARD_CAP);
    if n > cap {
        return Err(Error::Resource(format!(
            "grid side {n} exceeds the oracle cap of {cap}"
        )));
    }
    let mut row_optimum = vec![0usize];
    let mut nodes = 0u64;
    let mut last = (0u64, 0usize);
    for height in 1..=n {
        let mut search = Search::new(n, height, &row_optimum);
        search.run();
        nodes += search.nodes;
        last = (search.best_mask, search.best_size);
        row_optimum.push(search.best_size);
    }
    let (mask, max_size) = last;
    let witness = PointSet::from_points(
        n as u64,
        (0..n * n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| Point::new((i % n) as u64, (i / n) as u64)),
    )?;
    assert!(find_corner(&witness).is_none(), "oracle produced a corner");
    assert_eq!(witness.len(), max_size);
    Ok(OracleResult {
        n,
        max_size,
        witness,
        nodes_explored: nodes,
    })
}

struct Search<'a> {
    width: u32,
    height: u32,
    cells: u32,
    /// `row_optimum[k]`: maximum for `k` full rows of this width.
    row_optimum: &'a [usize],
    row_masks: Vec<u64>,
    best_size: usize,
    best_mask: u64,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(width: u32, height: u32, row_optimum: &'a [usize]) -> Self {
        let row_masks = (0..height)
            .map(|y| ((1u64 << width) - 1) << (y * width))
            .collect();
        Search {
            width,
            height,
            cells: width * height,
            row_optimum,
            row_masks,
            best_size: 0,
            best_mask: 0,
            nodes: 0,
        }
    }

    fn run(&mut self) {
        self.branch(0, 0, 0, 0);
    }

    fn branch(&mut self, index: u32, chosen: u64, size: usize, forbidden: u64) {
        self.nodes += 1;
        if size > self.best_size {
            self.best_size = size;
            self.best_mask = chosen;
        }
        if index == self.cells {
            return;
        }
        let y = index / self.width;
        let rest_of_row = self.row_masks[y as usize] & !((1u64 << index) - 1) & !forbidden;
        let rows_below = (self.height - 1 - y) as usize;
        let bound = size + rest_of_row.count_ones() as usize + self.row_optimum[rows_below];
        if bound <= self.best_size {
            return;
        }
        if forbidden >> index & 1 == 0 {
            let extra = self.completions(index, chosen);
            self.branch(index + 1, chosen | 1 << index, size + 1, forbidden | extra);
        }
        self.branch(index + 1, chosen, size, forbidden);
    }

    /// Cells that would complete a corner together with the new point and one
    /// already chosen point.
    fn completions(&self, index: u32, chosen: u64) -> u64 {
        let w = self.width as i32;
        let (px, py) = ((index % self.width) as i32, (index / self.width) as i32);
        let mut out = 0u64;
        let mut mark = |x: i32, y: i32| {
            if (0..w).contains(&x) && (0..self.height as i32).contains(&y) {
                out |= 1 << (y * w + x);
            }
        };
        let mut rest = chosen;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            let (qx, qy) = ((j % self.width) as i32, (j / self.width) as i32);
            if py == qy {
                // horizontal leg; either point is the right angle
                mark(px, py + (qx - px));
                mark(qx, qy + (px - qx));
            } else if px == qx {
                mark(px + (qy - py), py);
                mark(qx + (py - qy), qy);
            } else if px + py == qx + qy {
                // hypotenuse; the right angle is at (qx, py) or (px, qy)
                mark(qx, py);
                mark(px, qy);
            }
        }
        out
    }
}
