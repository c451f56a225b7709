use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Largest accepted grid bound; keeps every offset representable as `i64`.
pub const MAX_BOUND: u64 = i64::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: u64,
    pub y: u64,
}

impl Point {
    pub const fn new(x: u64, y: u64) -> Self {
        Point { x, y }
    }
}

impl From<(u64, u64)> for Point {
    fn from((x, y): (u64, u64)) -> Self {
        Point { x, y }
    }
}

/// A finite subset of `[0, N)^2`, immutable once built.
///
/// Membership is a hash lookup; `rows` keeps, for each `y`, the sorted `x`
/// values present in that row.
#[derive(Debug, Clone)]
pub struct PointSet {
    bound: u64,
    points: HashSet<Point>,
    rows: BTreeMap<u64, Vec<u64>>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.points == other.points
    }
}

impl Eq for PointSet {}

impl PointSet {
    pub fn empty(bound: u64) -> Result<Self> {
        Self::from_points(bound, std::iter::empty::<Point>())
    }

    /// Rejects duplicates and points outside `[0, bound)^2`.
    pub fn from_points<I, P>(bound: u64, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: Into<Point>,
    {
        if bound > MAX_BOUND {
            return Err(Error::domain(format!(
                "grid bound {bound} exceeds the supported maximum {MAX_BOUND}"
            )));
        }
        let mut set = PointSet {
            bound,
            points: HashSet::new(),
            rows: BTreeMap::new(),
        };
        for p in points {
            let p = p.into();
            set.check_in_bounds(p)?;
            if !set.points.insert(p) {
                return Err(Error::domain(format!("duplicate point ({},{})", p.x, p.y)));
            }
            set.rows.entry(p.y).or_default().push(p.x);
        }
        for xs in set.rows.values_mut() {
            xs.sort_unstable();
        }
        Ok(set)
    }

    fn check_in_bounds(&self, p: Point) -> Result<()> {
        if p.x >= self.bound || p.y >= self.bound {
            return Err(Error::domain(format!(
                "point ({},{}) lies outside [0, {})^2",
                p.x, p.y, self.bound
            )));
        }
        Ok(())
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        self.points.contains(&Point { x, y })
    }

    /// Membership for signed coordinates; anything off-grid is absent.
    pub fn contains_signed(&self, x: i128, y: i128) -> bool {
        match (u64::try_from(x), u64::try_from(y)) {
            (Ok(x), Ok(y)) => self.contains(x, y),
            _ => false,
        }
    }

    /// Rows in ascending `y`, each with ascending `x` values.
    pub fn rows(&self) -> impl Iterator<Item = (u64, &[u64])> + '_ {
        self.rows.iter().map(|(&y, xs)| (y, xs.as_slice()))
    }

    /// Points in lexicographic `(x, y)` order.
    pub fn sorted_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.points.iter().copied().collect();
        pts.sort_unstable();
        pts
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.points.iter().copied()
    }

    /// Shifts every point by `(dx, dy)` into a grid of side `bound`.
    pub fn translated(&self, dx: u64, dy: u64, bound: u64) -> Result<Self> {
        PointSet::from_points(bound, self.iter().map(|p| Point::new(p.x + dx, p.y + dy)))
    }

    /// Parses the text format:
    ///
    /// ```text
    /// N=<bound>
    /// x,y
    /// x,y
    /// ```
    ///
    /// Whitespace around tokens and blank lines are ignored. Line numbers in
    /// errors are 1-based.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line \"N=<bound>\""))?;
        let bound = parse_header(header_line, header)?;
        if bound > MAX_BOUND {
            return Err(Error::parse(
                header_line,
                format!("bound {bound} exceeds the supported maximum {MAX_BOUND}"),
            ));
        }

        let mut set = PointSet {
            bound,
            points: HashSet::new(),
            rows: BTreeMap::new(),
        };
        for (line_no, line) in lines {
            let p = parse_point(line_no, line)?;
            if p.x >= bound || p.y >= bound {
                return Err(Error::parse(
                    line_no,
                    format!("point ({},{}) lies outside [0, {bound})^2", p.x, p.y),
                ));
            }
            if !set.points.insert(p) {
                return Err(Error::parse(
                    line_no,
                    format!("duplicate point ({},{})", p.x, p.y),
                ));
            }
            set.rows.entry(p.y).or_default().push(p.x);
        }
        for xs in set.rows.values_mut() {
            xs.sort_unstable();
        }
        Ok(set)
    }

    /// Serializes in the format accepted by [`PointSet::parse`], points sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + 12 * self.len());
        writeln!(out, "N={}", self.bound).unwrap();
        for p in self.sorted_points() {
            writeln!(out, "{},{}", p.x, p.y).unwrap();
        }
        out
    }
}

fn parse_header(line_no: usize, line: &str) -> Result<u64> {
    let (key, value) = line
        .split_once('=')
        .ok_or_else(|| Error::parse(line_no, "expected header \"N=<bound>\""))?;
    if key.trim() != "N" {
        return Err(Error::parse(line_no, format!("expected key N, found {:?}", key.trim())));
    }
    parse_u64(line_no, value.trim(), "bound")
}

fn parse_point(line_no: usize, line: &str) -> Result<Point> {
    let (x, y) = line
        .split_once(',')
        .ok_or_else(|| Error::parse(line_no, format!("expected \"x,y\", found {line:?}")))?;
    Ok(Point {
        x: parse_u64(line_no, x.trim(), "x")?,
        y: parse_u64(line_no, y.trim(), "y")?,
    })
}

fn parse_u64(line_no: usize, s: &str, what: &str) -> Result<u64> {
    // `u64::from_str` accepts a leading '+'; the format does not.
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(line_no, format!("{what} is not a decimal integer: {s:?}")));
    }
    s.parse()
        .map_err(|_| Error::parse(line_no, format!("{what} out of range: {s}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic() {
        let set = PointSet::parse("N=4\n0,0\n1,0\n0,1\n").unwrap();
        assert_eq!(set.bound(), 4);
        assert_eq!(set.len(), 3);
        assert!(set.contains(1, 0));
        assert!(!set.contains(1, 1));
    }

    #[test]
    fn parse_tolerates_whitespace() {
        let set = PointSet::parse("  N = 10 \n\n 3 , 4\n\t5,6  \n\n").unwrap();
        assert_eq!(set.bound(), 10);
        assert!(set.contains(3, 4) && set.contains(5, 6));
    }

    #[test]
    fn parse_empty_set() {
        let set = PointSet::parse("N=7\n").unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = |text: &str| PointSet::parse(text).unwrap_err();
        assert_eq!(err(""), Error::parse(1, "missing header line \"N=<bound>\""));
        assert!(matches!(err("0,0\n"), Error::Parse { line: 1, .. }));
        assert!(matches!(err("M=3\n"), Error::Parse { line: 1, .. }));
        assert!(matches!(err("N=4\n0,0\nx;y\n"), Error::Parse { line: 3, .. }));
        assert!(matches!(err("N=4\n0,0\n\n0,0\n"), Error::Parse { line: 4, ref message } if message.contains("duplicate")));
        assert!(matches!(err("N=4\n4,0\n"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("N=4\n-1,0\n"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("N=4\n+1,0\n"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("N=4\n1,2,3\n"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("N=99999999999999999999\n"), Error::Parse { line: 1, .. }));
        assert!(matches!(err("N=9223372036854775808\n"), Error::Parse { line: 1, .. }));
    }

    #[test]
    fn text_round_trip() {
        let set = PointSet::from_points(9, [(3, 1), (0, 0), (8, 8), (3, 0)]).unwrap();
        let text = set.to_text();
        assert_eq!(text, "N=9\n0,0\n3,0\n3,1\n8,8\n");
        assert_eq!(PointSet::parse(&text).unwrap(), set);
    }

    #[test]
    fn rows_are_sorted() {
        let set = PointSet::from_points(10, [(5, 2), (1, 2), (3, 0), (0, 2)]).unwrap();
        let rows: Vec<_> = set.rows().map(|(y, xs)| (y, xs.to_vec())).collect();
        assert_eq!(rows, vec![(0, vec![3]), (2, vec![0, 1, 5])]);
    }

    #[test]
    fn from_points_rejects_bad_input() {
        assert!(PointSet::from_points(3, [(0, 0), (0, 0)]).is_err());
        assert!(PointSet::from_points(3, [(3, 0)]).is_err());
        assert!(PointSet::from_points(u64::MAX, [(0, 0)]).is_err());
    }
}
