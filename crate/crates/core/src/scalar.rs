//! Coordinate scalar abstraction.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{NumCast, PrimInt, Signed, WrappingAdd, WrappingNeg, WrappingSub};

/// An exact signed integer coordinate.
///
/// Everything on the domination path only compares, adds and negates
/// coordinates, so any signed primitive integer works. Floating point types
/// are deliberately excluded: comparisons must be exact.
pub trait Coord:
    PrimInt
    + Signed
    + NumCast
    + WrappingAdd
    + WrappingSub
    + WrappingNeg
    + Debug
    + Display
    + Hash
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts from the double-width accumulator, `None` if out of range.
    fn from_wide(v: i128) -> Option<Self> {
        <Self as NumCast>::from(v)
    }

    fn to_wide(self) -> i128 {
        // every signed primitive fits in i128
        <i128 as NumCast>::from(self).unwrap()
    }
}

impl<T> Coord for T where
    T: PrimInt
        + Signed
        + NumCast
        + WrappingAdd
        + WrappingSub
        + WrappingNeg
        + Debug
        + Display
        + Hash
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Storage width chosen for a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoordWidth {
    W16,
    W32,
    W64,
    W128,
}

impl CoordWidth {
    /// Narrowest width holding every value of magnitude at most `bound`
    /// with a factor-two headroom, so that negation and one-step deltas
    /// between two in-range values never leave the type.
    pub fn for_bound(bound: u128) -> Self {
        let need = bound.saturating_mul(2);
        if need <= i16::MAX as u128 {
            CoordWidth::W16
        } else if need <= i32::MAX as u128 {
            CoordWidth::W32
        } else if need <= i64::MAX as u128 {
            CoordWidth::W64
        } else {
            CoordWidth::W128
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            CoordWidth::W16 => 16,
            CoordWidth::W32 => 32,
            CoordWidth::W64 => 64,
            CoordWidth::W128 => 128,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_selection() {
        assert_eq!(CoordWidth::for_bound(0), CoordWidth::W16);
        assert_eq!(CoordWidth::for_bound(16383), CoordWidth::W16);
        assert_eq!(CoordWidth::for_bound(16384), CoordWidth::W32);
        assert_eq!(CoordWidth::for_bound(i64::MAX as u128 / 2), CoordWidth::W64);
        assert_eq!(CoordWidth::for_bound(i64::MAX as u128), CoordWidth::W128);
    }

    #[test]
    fn wide_conversion() {
        assert_eq!(i16::from_wide(40000), None);
        assert_eq!(i16::from_wide(-7), Some(-7i16));
        assert_eq!((-5i32).to_wide(), -5);
    }
}
