//! Exact positive fractions, the unit of pitch-ratio arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

/// Error for attempts to build a rational with a zero numerator or denominator.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct ZeroRational;

impl fmt::Display for ZeroRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pitch ratios must be positive; zero is not allowed")
    }
}

impl std::error::Error for ZeroRational {}

/// A positive fraction stored in lowest terms.
///
/// Pitch ratios such as 3/2 or 5/4 are always strictly positive, so both
/// the numerator and denominator are kept as positive integers. Stored
/// reduced, so derived field equality is value equality.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    /// 1/1, the unison.
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Build a reduced fraction; fails if either part is zero.
    pub fn new(num: u64, den: u64) -> Result<Rational, ZeroRational> {
        if num == 0 || den == 0 {
            return Err(ZeroRational);
        }
        let g = num.gcd(&den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    /// A whole number n/1.
    pub fn integer(n: u64) -> Result<Rational, ZeroRational> {
        Rational::new(n, 1)
    }

    #[inline]
    pub fn num(&self) -> u64 {
        self.num
    }

    #[inline]
    pub fn den(&self) -> u64 {
        self.den
    }

    /// The reciprocal; always valid because both parts are nonzero.
    #[inline]
    pub fn recip(&self) -> Rational {
        Rational {
            num: self.den,
            den: self.num,
        }
    }

    #[inline]
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Halve the ratio by octaves until it lies in [1, 2].
    ///
    /// Ratios below the unison are first flipped upward, so the result is
    /// always a reduced fraction in [1, 2].
    pub fn octave_reduced(&self) -> Rational {
        let mut r = if self.num >= self.den {
            *self
        } else {
            self.recip()
        };
        // r >= 1; divide by 2 while strictly above the octave.
        while r.num > 2 * r.den {
            let g = r.num.gcd(&(2 * r.den));
            r = Rational {
                num: r.num / g,
                den: 2 * r.den / g,
            };
        }
        r
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        let r = Rational::new(6, 4).unwrap();
        assert_eq!((r.num(), r.den()), (3, 2));
    }

    #[test]
    fn rejects_zero() {
        assert_eq!(Rational::new(0, 5), Err(ZeroRational));
        assert_eq!(Rational::new(5, 0), Err(ZeroRational));
    }

    #[test]
    fn octave_reduction() {
        let r = Rational::new(8, 3).unwrap();
        assert_eq!(r.octave_reduced(), Rational::new(4, 3).unwrap());
        // 2/1 stays at the octave boundary.
        let octave = Rational::new(2, 1).unwrap();
        assert_eq!(octave.octave_reduced(), octave);
        // Ratios below unison are oriented upward first.
        let down = Rational::new(1, 3).unwrap();
        assert_eq!(down.octave_reduced(), Rational::new(3, 2).unwrap());
    }

    #[test]
    fn ordering_is_by_value() {
        let a = Rational::new(3, 2).unwrap();
        let b = Rational::new(7, 5).unwrap();
        assert!(b < a);
    }
}
