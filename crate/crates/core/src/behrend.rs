//! Behrend-sphere baseline.
//!
//! Integers in `[0, (2D-1)^n)` whose base-`(2D-1)` digits are all below `D`
//! and whose digit vector has squared norm `r`. Adding two such integers never
//! carries, so a 3AP in the set is a 3AP of vectors on one sphere, which
//! strict convexity rules out. The usual reduction
//! `{(x, y) : x - y in S}` turns a 3AP-free `S` into a corner-free set.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::corner::{is_3ap_free, Point, PointSet};
use crate::error::{Error, Result};
use crate::radius_dp::{square_sum_counts, SquareSumDp};
use crate::report::{Construction, DensityReport};

/// Above this many elements `corner_from_3ap` trusts its input instead of
/// re-checking 3AP-freeness.
pub const THREE_AP_CHECK_LIMIT: usize = 4096;

/// Largest set `behrend_set` will materialize.
pub const MAX_SET_SIZE: u64 = 1 << 24;

/// Largest point set `corner_from_3ap` will materialize.
pub const MAX_CORNER_POINTS: u64 = 1 << 26;

/// Default cap on sphere-DP work per candidate in [`behrend_best`], in
/// multiply-accumulate operations.
pub const DEFAULT_WORK_BUDGET: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehrendParams {
    /// Digits are drawn from `[0, digit_bound)`.
    pub digit_bound: u32,
    pub dimension: u32,
    /// `2 * digit_bound - 1`.
    pub base: u64,
    /// `base^dimension`.
    pub n: BigUint,
    pub r: Option<u64>,
}

impl BehrendParams {
    pub fn new(digit_bound: u32, dimension: u32, r: Option<u64>) -> Result<Self> {
        if digit_bound < 2 {
            return Err(Error::domain(format!("D must be >= 2, got {digit_bound}")));
        }
        if dimension < 1 {
            return Err(Error::domain(format!("n must be >= 1, got {dimension}")));
        }
        let base = 2 * digit_bound as u64 - 1;
        if let Some(r) = r {
            let top = dimension as u64 * ((digit_bound - 1) as u64).pow(2);
            if r > top {
                return Err(Error::domain(format!("radius {r} exceeds n(D-1)^2 = {top}")));
            }
        }
        Ok(BehrendParams {
            digit_bound,
            dimension,
            base,
            n: BigUint::from(base).pow(dimension),
            r,
        })
    }

    /// Sphere sizes by squared radius.
    pub fn sphere_counts(&self) -> Vec<BigUint> {
        square_sum_counts(&vec![1; self.digit_bound as usize], self.dimension)
    }

    /// The given radius, or the most populous one (smallest on ties).
    pub fn radius(&self) -> u64 {
        self.r.unwrap_or_else(|| argmax(&self.sphere_counts()))
    }
}

fn argmax(counts: &[BigUint]) -> u64 {
    let mut best = 0;
    for (r, c) in counts.iter().enumerate() {
        if *c > counts[best] {
            best = r;
        }
    }
    best as u64
}

/// The sphere set, ascending.
pub fn behrend_set(p: &BehrendParams) -> Result<Vec<u64>> {
    p.n.to_u64()
        .ok_or_else(|| Error::Resource(format!("N = {} is too large to enumerate", p.n)))?;
    let r = p.radius();
    let mut out = Vec::new();
    let max_sq = ((p.digit_bound - 1) as u64).pow(2);
    if !sphere_dfs(p, p.dimension, r, 0, max_sq, &mut out) {
        return Err(Error::Resource(format!(
            "sphere has more than {MAX_SET_SIZE} elements"
        )));
    }
    Ok(out)
}

/// Most significant digit first, ascending, so `out` comes out sorted.
/// Returns false once `out` would exceed [`MAX_SET_SIZE`].
fn sphere_dfs(
    p: &BehrendParams,
    remaining: u32,
    budget: u64,
    prefix: u64,
    max_sq: u64,
    out: &mut Vec<u64>,
) -> bool {
    if remaining == 0 {
        if budget == 0 {
            if out.len() as u64 >= MAX_SET_SIZE {
                return false;
            }
            out.push(prefix);
        }
        return true;
    }
    let below = (remaining - 1) as u64 * max_sq;
    for a in 0..p.digit_bound as u64 {
        let cost = a * a;
        if cost > budget {
            break;
        }
        if budget - cost > below {
            continue;
        }
        if !sphere_dfs(p, remaining - 1, budget - cost, prefix * p.base + a, max_sq, out) {
            return false;
        }
    }
    true
}

/// `sum over s in S of (N - s)`, the size of the corner-free set built from `S`.
pub fn corner_size(set: &[u64], n: &BigUint) -> BigUint {
    set.iter().map(|&s| n - s).sum()
}

/// `{(x, y) in [0, N)^2 : x - y in S}`, which is corner-free when `S` is
/// 3AP-free: the differences `x - y`, `x - y + d`, `x - y - d` of a corner
/// form a 3AP.
pub fn corner_from_3ap(set: &[u64], n: u64) -> Result<PointSet> {
    if let Some(&s) = set.iter().find(|&&s| s >= n) {
        return Err(Error::domain(format!("element {s} is not below N = {n}")));
    }
    let size = corner_size(set, &BigUint::from(n));
    if size > BigUint::from(MAX_CORNER_POINTS) {
        return Err(Error::Resource(format!(
            "corner set would have {size} points, exceeding the cap of {MAX_CORNER_POINTS}"
        )));
    }
    if set.len() <= THREE_AP_CHECK_LIMIT && !is_3ap_free(set) {
        return Err(Error::domain("input set contains a 3-term arithmetic progression"));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("input set contains duplicates"));
    }
    PointSet::from_points(
        n,
        sorted
            .into_iter()
            .flat_map(|s| (0..n - s).map(move |y| Point::new(y + s, y))),
    )
}

/// One evaluated `(D, n)` shape in the parameter sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehrendCandidate {
    pub params: BehrendParams,
    pub sphere_size: BigUint,
    /// Size of the corner-free set in `[0, N_target)^2`.
    pub size: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehrendBest {
    pub n_target: BigUint,
    pub best: BehrendCandidate,
    pub candidates: Vec<BehrendCandidate>,
}

impl BehrendBest {
    pub fn report(&self) -> Result<DensityReport> {
        let p = &self.best.params;
        DensityReport::new(
            Construction::Behrend,
            p.base,
            p.dimension,
            self.n_target.clone(),
            p.r.expect("candidates carry a radius"),
            self.best.size.clone(),
        )
    }
}

fn sphere_work(digit_bound: u64, dimension: u64) -> u128 {
    let spread = ((digit_bound - 1) as u128).pow(2);
    (1..=dimension as u128)
        .map(|i| (i * spread + 1) * digit_bound as u128)
        .sum()
}

/// [`behrend_best_with_budget`] with [`DEFAULT_WORK_BUDGET`].
pub fn behrend_best(n_target: &BigUint) -> Result<BehrendBest> {
    behrend_best_with_budget(n_target, DEFAULT_WORK_BUDGET)
}

/// Searches shapes `(D, n)` with `(2D-1)^n <= N_target` for the largest
/// corner-free set `sum (N_target - s)`.
///
/// For each dimension `n` the largest feasible `D` is used, lowered until the
/// sphere DP fits in `budget`. The radius of each candidate maximizes the
/// corner-set size. Shapes are evaluated in order of decreasing upper bound
/// and skipped once the bound cannot reach the best size found; `candidates`
/// holds the evaluated ones by increasing `n`, and ties keep the smaller `n`.
pub fn behrend_best_with_budget(n_target: &BigUint, budget: u64) -> Result<BehrendBest> {
    if *n_target < BigUint::from(3u32) {
        return Err(Error::domain(format!("N_target must be >= 3, got {n_target}")));
    }
    let mut shapes = Vec::new();
    let mut dimension = 1u32;
    while BigUint::from(3u32).pow(dimension) <= *n_target {
        let root = n_target.nth_root(dimension);
        let base = if root.bit(0) { root } else { root - 1u32 };
        let mut digit_bound = ((base + 1u32) / 2u32).to_u64().unwrap_or(u64::MAX).min(u32::MAX as u64);
        if digit_bound > 2 && sphere_work(digit_bound, dimension as u64) > budget as u128 {
            digit_bound = shrink_to_budget(digit_bound, dimension as u64, budget);
        }
        let bound = sphere_size_bound(digit_bound as u32, dimension);
        shapes.push((digit_bound as u32, dimension, bound));
        dimension += 1;
    }
    shapes.sort_by(|a, b| b.2.cmp(&a.2).then(a.1.cmp(&b.1)));

    let mut candidates: Vec<BehrendCandidate> = Vec::new();
    let mut best_size = BigUint::default();
    for (digit_bound, dimension, bound) in shapes {
        if bound * n_target < best_size {
            continue;
        }
        let c = evaluate(digit_bound, dimension, n_target)?;
        if c.size > best_size {
            best_size = c.size.clone();
        }
        candidates.push(c);
    }
    candidates.sort_by_key(|c| c.params.dimension);
    let best = candidates
        .iter()
        .find(|c| c.size == best_size)
        .expect("at least one shape is evaluated")
        .clone();
    Ok(BehrendBest {
        n_target: n_target.clone(),
        best,
        candidates,
    })
}

/// Upper bound on any sphere size: fixing all but two coordinates leaves at
/// most `M2` completions, the largest two-dimensional sphere.
fn sphere_size_bound(digit_bound: u32, dimension: u32) -> BigUint {
    if dimension == 1 {
        return BigUint::from(1u32);
    }
    let d = digit_bound as usize;
    let mut reps = vec![0u32; 2 * (d - 1) * (d - 1) + 1];
    for a in 0..d {
        for b in 0..d {
            reps[a * a + b * b] += 1;
        }
    }
    let m2 = reps.into_iter().max().unwrap_or(1);
    BigUint::from(digit_bound).pow(dimension - 2) * m2
}

fn shrink_to_budget(digit_bound: u64, dimension: u64, budget: u64) -> u64 {
    // largest D in [2, digit_bound) within budget
    let (mut lo, mut hi) = (2u64, digit_bound - 1);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if sphere_work(mid, dimension) <= budget as u128 {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Sphere counts in `n - 1` and `n` dimensions give, per radius, both the
/// sphere size and the sum of its elements: each coordinate contributes
/// `sum_a a * count_{n-1}(r - a^2)` times `base^i`.
fn evaluate(digit_bound: u32, dimension: u32, n_target: &BigUint) -> Result<BehrendCandidate> {
    let mut params = BehrendParams::new(digit_bound, dimension, None)?;
    let mut dp = SquareSumDp::new(&vec![1; digit_bound as usize], dimension);
    for _ in 1..dimension {
        dp.step();
    }
    let prev = dp.counts();
    dp.step();
    let counts = dp.counts();
    debug_assert_eq!(counts.len(), dp.max_radius() + 1);

    let place_sum: BigUint = (0..dimension).map(|i| BigUint::from(params.base).pow(i)).sum();
    let max_element = &place_sum * (digit_bound - 1);
    // size(r) >= count(r) * (N_target - max_element); radii whose upper bound
    // count(r) * N_target falls below the best such lower bound cannot win.
    let peak = counts.iter().max().cloned().unwrap_or_default();
    let floor = &peak * (n_target - &max_element);

    let mut best: Option<(u64, BigUint, BigUint)> = None;
    for (r, count) in counts.iter().enumerate() {
        if count.is_zero() || count * n_target < floor {
            continue;
        }
        let coord_sum: BigUint = (0..digit_bound as usize)
            .filter(|a| a * a <= r)
            .filter_map(|a| prev.get(r - a * a).map(|c| c * a))
            .sum();
        let size = count * n_target - &place_sum * coord_sum;
        if best.as_ref().map_or(true, |(_, _, s)| size > *s) {
            best = Some((r as u64, count.clone(), size));
        }
    }
    let (r, sphere_size, size) = best.expect("some radius is populated");
    params.r = Some(r);
    Ok(BehrendCandidate {
        params,
        sphere_size,
        size,
    })
}
