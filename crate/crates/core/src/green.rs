//! The sphere-slice construction: pairs `(x, y)` whose base-`q` digits satisfy
//! `q <= 2 (x_i + y_i) < 3q` at every position and whose digit vectors lie at
//! squared distance exactly `r`.
//!
//! Within the digit window, `x + y` determines the coordinatewise digit sum
//! `pi(x) + pi(y)`, so a corner in a slice would give three points on a sphere
//! of the form `a`, `a + b`, `a - b`, which forces `b = 0`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::corner::{Point, PointSet, MAX_BOUND};
use crate::digits::{grid_size, grid_size_u64, to_digits};
use crate::error::{Error, Result};
use crate::radius_dp::square_sum_counts;
use crate::report::{log2, Construction, DensityReport};

/// `q <= 2 (a + b) < 3q`: the half-open window `[q/2, 3q/2)` in integers.
pub fn in_window(a: u32, b: u32, q: u32) -> Result<bool> {
    if a >= q || b >= q {
        return Err(Error::domain(format!(
            "digits ({a}, {b}) must lie in [0, {q})"
        )));
    }
    Ok(window_contains(a, b, q))
}

#[inline]
fn window_contains(a: u32, b: u32, q: u32) -> bool {
    let s = 2 * (a as u64 + b as u64);
    let q = q as u64;
    q <= s && s < 3 * q
}

/// The partners `b` of digit `a` inside the window, as an inclusive range.
fn window_partners(a: u32, q: u32) -> Option<(u32, u32)> {
    // a + b >= ceil(q/2) and a + b <= floor((3q - 1)/2)
    let lo_sum = (q as i64 + 1) / 2;
    let hi_sum = (3 * q as i64 - 1) / 2;
    let lo = (lo_sum - a as i64).max(0);
    let hi = (hi_sum - a as i64).min(q as i64 - 1);
    (lo <= hi).then_some((lo as u32, hi as u32))
}

/// `W(q)`: number of digit pairs `(a, b)` in the window.
pub fn window_size(q: u32) -> u64 {
    (0..q)
        .filter_map(|a| window_partners(a, q))
        .map(|(lo, hi)| (hi - lo + 1) as u64)
        .sum()
}

/// `weights[k]` = number of window pairs with `|a - b| = k`.
pub fn window_distance_weights(q: u32) -> Vec<u64> {
    let mut weights = vec![0u64; q as usize];
    for a in 0..q {
        if let Some((lo, hi)) = window_partners(a, q) {
            for b in lo..=hi {
                weights[a.abs_diff(b) as usize] += 1;
            }
        }
    }
    weights
}

fn max_radius(q: u32, d: u32) -> u64 {
    d as u64 * ((q - 1) as u64).pow(2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub q: u32,
    pub d: u32,
    /// `q^d`, exact.
    pub n: BigUint,
    pub r: Option<u64>,
}

impl ConstructionParams {
    pub fn new(q: u32, d: u32, r: Option<u64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain(format!("q must be >= 2, got {q}")));
        }
        if d < 1 {
            return Err(Error::domain(format!("d must be >= 1, got {d}")));
        }
        if let Some(r) = r {
            let top = max_radius(q, d);
            if r > top {
                return Err(Error::domain(format!(
                    "radius {r} exceeds the maximum d(q-1)^2 = {top}"
                )));
            }
        }
        Ok(ConstructionParams {
            q,
            d,
            n: grid_size(q, d),
            r,
        })
    }

    pub fn with_r(&self, r: u64) -> Result<Self> {
        Self::new(self.q, self.d, Some(r))
    }

    pub fn max_radius(&self) -> u64 {
        max_radius(self.q, self.d)
    }

    fn require_r(&self) -> Result<u64> {
        self.r
            .ok_or_else(|| Error::domain("a radius r is required for this operation"))
    }
}

/// Membership of `(x, y)` in the slice of radius `p.r`.
pub fn member(x: u64, y: u64, p: &ConstructionParams) -> Result<bool> {
    let r = p.require_r()?;
    if let Some(n) = grid_size_u64(p.q, p.d) {
        if x >= n || y >= n {
            return Err(Error::domain(format!(
                "point ({x},{y}) lies outside [0, {n})^2"
            )));
        }
    }
    let xs = to_digits(x, p.q, p.d)?;
    let ys = to_digits(y, p.q, p.d)?;
    let mut dist = 0u64;
    for (a, b) in xs.iter().zip(ys.iter()) {
        if !window_contains(a, b, p.q) {
            return Ok(false);
        }
        dist += (a.abs_diff(b) as u64).pow(2);
    }
    Ok(dist == r)
}

/// Exact slice sizes by radius. Only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub q: u32,
    pub d: u32,
    pub entries: BTreeMap<u64, BigUint>,
}

impl CountTable {
    pub fn get(&self, r: u64) -> BigUint {
        self.entries.get(&r).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    /// The most populous radius; ties go to the smallest `r`.
    pub fn best(&self) -> (u64, BigUint) {
        let mut best: Option<(u64, &BigUint)> = None;
        for (&r, c) in &self.entries {
            if best.map_or(true, |(_, b)| c > b) {
                best = Some((r, c));
            }
        }
        best.map(|(r, c)| (r, c.clone()))
            .expect("window is nonempty for q >= 2")
    }
}

/// Slice sizes for every radius, by `d`-fold convolution of the one-digit
/// distribution of `(a - b)^2` over window pairs. Pairs are never enumerated.
pub fn count_by_r(q: u32, d: u32) -> Result<CountTable> {
    ConstructionParams::new(q, d, None)?;
    let counts = square_sum_counts(&window_distance_weights(q), d);
    let entries = counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(r, c)| (r as u64, c))
        .collect();
    Ok(CountTable { q, d, entries })
}

pub fn best_r(q: u32, d: u32) -> Result<(u64, BigUint)> {
    Ok(count_by_r(q, d)?.best())
}

/// Parameters for a given `d`: `q` is the largest integer with
/// `q^2 * 3^d <= 4^d`, i.e. `floor((2/sqrt 3)^d)`, and `N = q^d`.
pub fn choose_params(d: u32) -> Result<ConstructionParams> {
    if d <= 4 {
        return Err(Error::domain(format!(
            "construction degenerate: q < 2 (d = {d})"
        )));
    }
    let four = BigUint::from(4u32).pow(d);
    let three = BigUint::from(3u32).pow(d);
    let q = (&four / &three).sqrt();
    debug_assert!(&q * &q * &three <= four);
    debug_assert!((&q + 1u32) * (&q + 1u32) * &three > four);
    let q = q
        .to_u32()
        .ok_or_else(|| Error::domain(format!("q does not fit in 32 bits at d = {d}")))?;
    ConstructionParams::new(q, d, None)
}

/// `-log2(size / N^2) / sqrt(log2 N)`.
pub fn c_empirical(size: &BigUint, n: &BigUint) -> Result<f64> {
    if size.is_zero() {
        return Err(Error::domain("size must be >= 1"));
    }
    if *n < BigUint::from(2u32) {
        return Err(Error::domain(format!("N must be >= 2, got {n}")));
    }
    if *size > n * n {
        return Err(Error::domain(format!("size {size} exceeds N^2")));
    }
    let log_n = log2(n);
    Ok((2.0 * log_n - log2(size)) / log_n.sqrt())
}

/// `2 sqrt(2 log2(4/3))`.
pub fn c_target() -> f64 {
    2.0 * (2.0 * (4.0f64 / 3.0).log2()).sqrt()
}

/// Size, density and empirical constant of one slice; `r` defaults to the
/// most populous radius.
pub fn density_report(p: &ConstructionParams) -> Result<DensityReport> {
    let table = count_by_r(p.q, p.d)?;
    let (r, size) = match p.r {
        Some(r) => (r, table.get(r)),
        None => table.best(),
    };
    if size.is_zero() {
        return Err(Error::domain(format!(
            "the slice of radius {r} is empty for q = {}, d = {}",
            p.q, p.d
        )));
    }
    DensityReport::new(Construction::Green, p.q as u64, p.d, p.n.clone(), r, size)
}

/// Streams the slice `A_r` in lexicographic `(x, y)` order.
///
/// Fails with a resource error, naming the exact size, when the slice has more
/// than `cap` points.
pub fn enumerate_a_r(p: &ConstructionParams, cap: u64) -> Result<SliceIter> {
    let r = p.require_r()?;
    count_by_r(p.q, p.d)?.enumerate(r, cap)
}

impl CountTable {
    /// [`enumerate_a_r`] for radius `r`, reusing this table for the size check.
    pub fn enumerate(&self, r: u64, cap: u64) -> Result<SliceIter> {
        let p = ConstructionParams::new(self.q, self.d, Some(r))?;
        let n = grid_size_u64(p.q, p.d)
            .filter(|&n| n <= MAX_BOUND)
            .ok_or_else(|| {
                Error::Resource(format!("grid side q^d = {} is too large to enumerate", p.n))
            })?;
        let expected = self.get(r);
        if expected > BigUint::from(cap) {
            return Err(Error::Resource(format!(
                "A_r would contain {expected} points, exceeding the cap of {cap}"
            )));
        }
        Ok(SliceIter::new(p.q, p.d, n, r, expected.to_u64().unwrap_or(u64::MAX)))
    }
}

/// Collects [`enumerate_a_r`] into a [`PointSet`].
pub fn construct(p: &ConstructionParams, cap: u64) -> Result<PointSet> {
    let iter = enumerate_a_r(p, cap)?;
    let n = iter.side();
    PointSet::from_points(n, iter)
}

/// Lexicographic enumerator for one slice. Memory is `O(d)`.
///
/// The outer loop walks `x`; for each `x` a depth-first search over the digits
/// of `y`, most significant first, keeps the remaining radius budget within
/// the min/max still reachable by the lower positions.
pub struct SliceIter {
    q: u32,
    d: usize,
    side: u64,
    radius: u64,
    expected: u64,
    next_x: u64,
    x: u64,
    // Per level, level 0 = most significant position.
    a: Vec<u32>,
    lo: Vec<u32>,
    hi: Vec<u32>,
    min_below: Vec<u64>,
    max_below: Vec<u64>,
    next_b: Vec<u32>,
    budget: Vec<u64>,
    chosen: Vec<u32>,
    level: Option<usize>,
}

impl SliceIter {
    fn new(q: u32, d: u32, side: u64, radius: u64, expected: u64) -> Self {
        let d = d as usize;
        SliceIter {
            q,
            d,
            side,
            radius,
            expected,
            next_x: 0,
            x: 0,
            a: vec![0; d],
            lo: vec![0; d],
            hi: vec![0; d],
            min_below: vec![0; d],
            max_below: vec![0; d],
            next_b: vec![0; d],
            budget: vec![0; d],
            chosen: vec![0; d],
            level: None,
        }
    }

    /// Grid side `N = q^d`.
    pub fn side(&self) -> u64 {
        self.side
    }

    /// Exact number of points the iterator yields in total.
    pub fn expected_len(&self) -> u64 {
        self.expected
    }

    /// Prepares the `y` search for the next `x`; false if `x` has no partner.
    fn load_x(&mut self, x: u64) -> bool {
        let q = self.q as u64;
        let mut rest = x;
        // digits least significant first, stored at level d-1-i
        for i in 0..self.d {
            let level = self.d - 1 - i;
            let a = (rest % q) as u32;
            rest /= q;
            let Some((lo, hi)) = window_partners(a, self.q) else {
                return false;
            };
            self.a[level] = a;
            self.lo[level] = lo;
            self.hi[level] = hi;
        }
        let mut min_sum = 0u64;
        let mut max_sum = 0u64;
        for level in (0..self.d).rev() {
            self.min_below[level] = min_sum;
            self.max_below[level] = max_sum;
            let (a, lo, hi) = (self.a[level], self.lo[level], self.hi[level]);
            let min_cost = if lo <= a && a <= hi {
                0
            } else {
                (a.abs_diff(lo).min(a.abs_diff(hi)) as u64).pow(2)
            };
            let max_cost = (a.abs_diff(lo).max(a.abs_diff(hi)) as u64).pow(2);
            min_sum += min_cost;
            max_sum += max_cost;
        }
        if self.radius < min_sum || self.radius > max_sum {
            return false;
        }
        self.x = x;
        self.budget[0] = self.radius;
        self.next_b[0] = self.lo[0];
        self.level = Some(0);
        true
    }

    /// Advances the digit search for the current `x`.
    fn next_y(&mut self) -> Option<u64> {
        while let Some(level) = self.level {
            let b = self.next_b[level];
            if b > self.hi[level] {
                self.level = level.checked_sub(1);
                continue;
            }
            self.next_b[level] = b + 1;
            let cost = (self.a[level].abs_diff(b) as u64).pow(2);
            let Some(rest) = self.budget[level].checked_sub(cost) else {
                continue;
            };
            if rest < self.min_below[level] || rest > self.max_below[level] {
                continue;
            }
            self.chosen[level] = b;
            if level + 1 == self.d {
                let q = self.q as u64;
                return Some(self.chosen.iter().fold(0u64, |acc, &b| acc * q + b as u64));
            }
            self.budget[level + 1] = rest;
            self.next_b[level + 1] = self.lo[level + 1];
            self.level = Some(level + 1);
        }
        None
    }
}

impl Iterator for SliceIter {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        loop {
            if self.level.is_some() {
                if let Some(y) = self.next_y() {
                    return Some(Point::new(self.x, y));
                }
            }
            if self.next_x >= self.side {
                return None;
            }
            let x = self.next_x;
            self.next_x += 1;
            self.load_x(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn in_window_examples() {
        assert!(!in_window(0, 0, 4).unwrap());
        assert!(in_window(1, 1, 4).unwrap());
        assert!(!in_window(3, 3, 4).unwrap());
        assert!(in_window(1, 2, 5).unwrap());
        assert!(!in_window(1, 1, 5).unwrap());
        assert!(in_window(4, 0, 4).is_err());
    }

    #[test]
    fn window_partners_match_predicate() {
        for q in 2..40 {
            for a in 0..q {
                let direct: Vec<u32> = (0..q).filter(|&b| window_contains(a, b, q)).collect();
                let range: Vec<u32> = window_partners(a, q)
                    .map(|(lo, hi)| (lo..=hi).collect())
                    .unwrap_or_default();
                assert_eq!(direct, range, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn member_examples() {
        let p = |r| ConstructionParams::new(4, 1, Some(r)).unwrap();
        assert!(member(1, 2, &p(1)).unwrap());
        assert!(member(0, 2, &p(4)).unwrap());
        for r in 0..=9 {
            assert!(!member(0, 0, &p(r)).unwrap());
        }
        assert!(member(4, 0, &p(1)).is_err());
        let no_r = ConstructionParams::new(4, 1, None).unwrap();
        assert!(member(1, 2, &no_r).is_err());
    }

    #[test]
    fn count_by_r_examples() {
        let table = count_by_r(4, 1).unwrap();
        let expect: BTreeMap<u64, BigUint> =
            [(0, 2), (1, 4), (4, 4), (9, 2)].into_iter().map(|(r, c)| (r, big(c))).collect();
        assert_eq!(table.entries, expect);

        let table = count_by_r(2, 1).unwrap();
        assert_eq!(table.get(0), big(1));
        assert_eq!(table.get(1), big(2));
        assert_eq!(table.entries.len(), 2);

        assert_eq!(count_by_r(2, 5).unwrap().get(3), big(80));
    }

    #[test]
    fn best_r_examples() {
        assert_eq!(best_r(4, 1).unwrap(), (1, big(4)));
        assert_eq!(best_r(2, 5).unwrap(), (3, big(80)));
        assert_eq!(best_r(2, 1).unwrap(), (1, big(2)));
    }

    #[test]
    fn choose_params_examples() {
        let p = choose_params(5).unwrap();
        assert_eq!((p.q, p.n.clone()), (2, big(32)));
        let p = choose_params(10).unwrap();
        assert_eq!((p.q, p.n.clone()), (4, big(1 << 20)));
        assert_eq!(choose_params(20).unwrap().q, 17);
        for d in 0..=4 {
            assert!(matches!(choose_params(d), Err(Error::Domain(m)) if m.contains("degenerate")));
        }
    }

    #[test]
    fn c_empirical_examples() {
        let n = big(32);
        assert!(c_empirical(&(&n * &n), &n).unwrap().abs() < 1e-12);
        let expect = (1024.0f64 / 80.0).log2() / 5f64.sqrt();
        assert!((c_empirical(&big(80), &n).unwrap() - expect).abs() < 1e-12);
        assert!((c_empirical(&big(80), &n).unwrap() - 1.6449).abs() < 1e-3);
        assert_eq!(c_empirical(&big(1), &big(2)).unwrap(), 2.0);
        assert!(c_empirical(&big(0), &n).is_err());
        assert!(c_empirical(&big(1), &big(1)).is_err());
        assert!(c_empirical(&big(1025), &n).is_err());
    }

    #[test]
    fn c_target_closed_form() {
        let c = c_target();
        assert!((c - 1.822).abs() < 5e-4);
        // 2 sqrt(2 ln(4/3) / ln 2) = 1.8221690355811533 (computed independently)
        assert!((c - 1.822_169_035_581_153).abs() < 1e-12);
        assert!((c - 2.0 * (2.0 * (4.0f64 / 3.0).ln() / 2f64.ln()).sqrt()).abs() < 1e-12);
        assert!((c - 2.0 * (2.0 * 4f64.log2() - 2.0 * 3f64.log2()).sqrt()).abs() < 1e-12);
        assert!(c < 2.0 * 2f64.sqrt());
    }

    #[test]
    fn enumerate_examples() {
        let pts = |q, d, r| -> Vec<(u64, u64)> {
            let p = ConstructionParams::new(q, d, Some(r)).unwrap();
            enumerate_a_r(&p, u64::MAX).unwrap().map(|p| (p.x, p.y)).collect()
        };
        assert_eq!(pts(4, 1, 1), vec![(1, 2), (2, 1), (2, 3), (3, 2)]);
        assert_eq!(pts(2, 1, 0), vec![(1, 1)]);
        assert_eq!(pts(2, 5, 3).len(), 80);
    }

    #[test]
    fn enumerate_respects_cap() {
        let p = ConstructionParams::new(2, 5, Some(3)).unwrap();
        match enumerate_a_r(&p, 79) {
            Err(Error::Resource(m)) => assert!(m.contains("80"), "{m}"),
            other => panic!("expected resource error, got {:?}", other.map(|_| ())),
        }
        assert!(enumerate_a_r(&p, 80).is_ok());
    }

    #[test]
    fn enumerate_is_lexicographic_and_matches_member() {
        for (q, d) in [(3, 3), (5, 2), (4, 3)] {
            let base = ConstructionParams::new(q, d, None).unwrap();
            for r in 0..=base.max_radius() {
                let p = base.with_r(r).unwrap();
                let pts: Vec<Point> = enumerate_a_r(&p, u64::MAX).unwrap().collect();
                assert!(pts.windows(2).all(|w| w[0] < w[1]));
                let n = grid_size_u64(q, d).unwrap();
                let brute: Vec<Point> = (0..n)
                    .flat_map(|x| (0..n).map(move |y| Point::new(x, y)))
                    .filter(|pt| member(pt.x, pt.y, &p).unwrap())
                    .collect();
                assert_eq!(pts, brute, "q={q} d={d} r={r}");
            }
        }
    }

    #[test]
    fn density_report_examples() {
        let rep = density_report(&ConstructionParams::new(2, 5, None).unwrap()).unwrap();
        assert_eq!((rep.r, rep.size.clone()), (3, big(80)));
        assert!((rep.density - 80.0 / 1024.0).abs() < 1e-12);
        assert!((rep.c_emp - 1.6449).abs() < 1e-3);

        let rep = density_report(&ConstructionParams::new(4, 1, None).unwrap()).unwrap();
        assert_eq!(rep.size, big(4));
        // N = 4^1, so the grid has 16 cells
        assert!((rep.density - 4.0 / 16.0).abs() < 1e-12);

        let rep = density_report(&ConstructionParams::new(4, 10, None).unwrap()).unwrap();
        assert!(rep.density > 0.0 && rep.density < 1.0);

        // q = 4, d = 1 has no pair at squared distance 2
        assert!(density_report(&ConstructionParams::new(4, 1, Some(2)).unwrap()).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ConstructionParams::new(1, 3, None).is_err());
        assert!(ConstructionParams::new(2, 0, None).is_err());
        assert!(ConstructionParams::new(4, 2, Some(19)).is_err());
        assert!(ConstructionParams::new(4, 2, Some(18)).is_ok());
    }
}
