//! Base-`q` digit codec.
//!
//! Digits are stored least-significant first, so `digits[i]` is the
//! coefficient of `q^i`. Vectors always have exactly `d` entries; leading
//! zeros are kept.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    base: u32,
    digits: Vec<u32>,
}

impl DigitVector {
    /// Builds a vector from explicit digits, checking each against `base`.
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::domain(format!("base must be >= 2, got {base}")));
        }
        if digits.is_empty() {
            return Err(Error::domain("digit vector must have length >= 1"));
        }
        if let Some((i, &v)) = digits.iter().enumerate().find(|(_, &v)| v >= base) {
            return Err(Error::domain(format!(
                "digit {v} at position {i} is not in [0, {base})"
            )));
        }
        Ok(DigitVector { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.digits.iter().copied()
    }
}

/// `q^d` as an exact integer.
pub fn grid_size(q: u32, d: u32) -> BigUint {
    BigUint::from(q).pow(d)
}

/// `q^d` if it fits in a `u64`.
pub fn grid_size_u64(q: u32, d: u32) -> Option<u64> {
    (q as u64).checked_pow(d)
}

fn check_shape(q: u32, d: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::domain(format!("q must be >= 2, got {q}")));
    }
    if d < 1 {
        return Err(Error::domain(format!("d must be >= 1, got {d}")));
    }
    Ok(())
}

/// The base-`q` digits of `x`, padded to length `d`.
pub fn to_digits(x: u64, q: u32, d: u32) -> Result<DigitVector> {
    check_shape(q, d)?;
    if let Some(limit) = grid_size_u64(q, d) {
        if x >= limit {
            return Err(Error::domain(format!(
                "x = {x} is not below q^d = {limit}"
            )));
        }
    }
    let mut rest = x;
    let q64 = q as u64;
    let digits = (0..d)
        .map(|_| {
            let digit = (rest % q64) as u32;
            rest /= q64;
            digit
        })
        .collect();
    Ok(DigitVector { base: q, digits })
}

/// Inverse of [`to_digits`]. Fails if the value does not fit in a `u64`.
pub fn from_digits(v: &DigitVector) -> Result<u64> {
    from_digits_big(v)
        .to_u64()
        .ok_or_else(|| Error::domain("digit vector value exceeds u64"))
}

/// Horner evaluation with arbitrary precision.
pub fn from_digits_big(v: &DigitVector) -> BigUint {
    v.digits
        .iter()
        .rev()
        .fold(BigUint::default(), |acc, &digit| acc * v.base + digit)
}

/// Checked variant of [`from_digits`] for raw digit slices.
pub fn from_raw_digits(q: u32, digits: &[u32]) -> Result<u64> {
    from_digits(&DigitVector::new(q, digits.to_vec())?)
}

fn check_compatible(u: &DigitVector, v: &DigitVector) -> Result<()> {
    if u.base != v.base || u.len() != v.len() {
        return Err(Error::domain(format!(
            "digit vectors differ in shape: base {} len {} vs base {} len {}",
            u.base,
            u.len(),
            v.base,
            v.len()
        )));
    }
    Ok(())
}

/// Squared Euclidean distance between two digit vectors.
pub fn sq_distance(u: &DigitVector, v: &DigitVector) -> Result<u64> {
    check_compatible(u, v)?;
    Ok(u.iter()
        .zip(v.iter())
        .map(|(a, b)| {
            let diff = a.abs_diff(b) as u64;
            diff * diff
        })
        .sum())
}

/// Coordinatewise sum, as plain integers (no reduction mod `q`).
pub fn add_coordinates(u: &DigitVector, v: &DigitVector) -> Result<Vec<u64>> {
    check_compatible(u, v)?;
    Ok(u.iter().zip(v.iter()).map(|(a, b)| a as u64 + b as u64).collect())
}

/// Squared norm of an integer vector.
pub fn sq_norm(v: &[i64]) -> i128 {
    v.iter().map(|&c| (c as i128) * (c as i128)).sum()
}
