//! Canonical chord pitch proportions and their direct/inverse writings.
//!
//! A chord's relative pitches are written either as a direct proportion of
//! ascending integers `a1:a2:...:aM` or as the inverse proportion of their
//! reciprocals `/d1:/d2:...:/dM` with `di = lcm(a)/ai`. Both writings denote
//! the same chord; comparing the products of their terms is what separates
//! major, minor and symmetric chords.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::rational::Rational;

/// Errors from constructing or transforming a proportion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProportionError {
    /// No voices supplied.
    Empty,
    /// A zero term or zero ratio was supplied.
    ZeroTerm,
    /// Normalized terms do not fit the machine word; the input is far
    /// outside the musical range this library targets.
    TermOverflow,
}

impl fmt::Display for ProportionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProportionError::Empty => write!(f, "a proportion needs at least one voice"),
            ProportionError::ZeroTerm => write!(f, "proportion terms must be positive"),
            ProportionError::TermOverflow => {
                write!(f, "normalized proportion terms exceed the supported integer range")
            }
        }
    }
}

impl std::error::Error for ProportionError {}

/// Error from parsing proportion text such as `4:5:6` or `/6:/5:/4`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProportionParseError {
    text: String,
    position: usize,
    reason: &'static str,
}

impl ProportionParseError {
    pub fn position(&self) -> usize {
        self.position
    }
}

impl fmt::Display for ProportionParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "malformed proportion {:?} at position {}: {}",
            self.text, self.position, self.reason
        )
    }
}

impl std::error::Error for ProportionParseError {}

/// The canonical form of a chord's relative pitches: ascending positive
/// integers with no common factor, lowest voice first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Proportion {
    terms: Vec<u64>,
}

/// The two complexity products of a proportion: the product of the direct
/// terms and the product of the inverse numbers.
///
/// For two voices the writings are interchangeable and the products always
/// agree; only from three voices up can they differ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProportionProducts {
    pub p_dir: BigUint,
    pub p_inv: BigUint,
}

impl Proportion {
    /// Normalize a list of positive pitch ratios into the unique ascending
    /// coprime integer tuple proportional to the sorted input.
    pub fn normalize(raw: &[Rational]) -> Result<Proportion, ProportionError> {
        if raw.is_empty() {
            return Err(ProportionError::Empty);
        }
        let mut sorted = raw.to_vec();
        sorted.sort();
        // Common denominator, then clear fractions and divide out the gcd.
        let mut den_lcm = BigUint::one();
        for r in &sorted {
            den_lcm = den_lcm.lcm(&BigUint::from(r.den()));
        }
        let mut big_terms: Vec<BigUint> = sorted
            .iter()
            .map(|r| BigUint::from(r.num()) * (&den_lcm / BigUint::from(r.den())))
            .collect();
        let mut g = big_terms[0].clone();
        for t in &big_terms[1..] {
            g = g.gcd(t);
        }
        for t in &mut big_terms {
            *t /= &g;
        }
        let mut terms = Vec::with_capacity(big_terms.len());
        for t in big_terms {
            terms.push(t.to_u64().ok_or(ProportionError::TermOverflow)?);
        }
        Ok(Proportion { terms })
    }

    /// Build directly from integer terms; sorts them and divides out the gcd.
    pub fn from_terms(terms: &[u64]) -> Result<Proportion, ProportionError> {
        if terms.is_empty() {
            return Err(ProportionError::Empty);
        }
        if terms.contains(&0) {
            return Err(ProportionError::ZeroTerm);
        }
        let mut sorted = terms.to_vec();
        sorted.sort_unstable();
        let mut g = sorted[0];
        for &t in &sorted[1..] {
            g = g.gcd(&t);
        }
        for t in &mut sorted {
            *t /= g;
        }
        Ok(Proportion { terms: sorted })
    }

    /// The ascending terms, lowest voice first.
    #[inline]
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// Number of voices.
    #[inline]
    pub fn voices(&self) -> usize {
        self.terms.len()
    }

    /// Least common multiple of the terms, the common period of the chord.
    pub fn lcm_terms(&self) -> BigUint {
        let mut l = BigUint::one();
        for &t in &self.terms {
            l = l.lcm(&BigUint::from(t));
        }
        l
    }

    /// The inverse numbers `di = lcm(a)/ai`, aligned with voice order.
    ///
    /// The list is descending: the lowest voice gets the largest inverse
    /// number. Reducing `(1/d1):...:(1/dM)` recovers the proportion.
    pub fn inverse_numbers(&self) -> Vec<BigUint> {
        let l = self.lcm_terms();
        self.terms.iter().map(|&t| &l / BigUint::from(t)).collect()
    }

    /// The mirror chord: every pitch ratio reciprocated, then renormalized.
    ///
    /// Mirroring is an involution and swaps the two writings, so it turns
    /// major chords into minor ones and vice versa.
    pub fn mirror(&self) -> Result<Proportion, ProportionError> {
        let mut inv = self.inverse_numbers();
        inv.reverse();
        // The inverse numbers of a coprime tuple are themselves coprime:
        // every prime power of the lcm is missing from some term.
        let mut terms = Vec::with_capacity(inv.len());
        for t in inv {
            terms.push(t.to_u64().ok_or(ProportionError::TermOverflow)?);
        }
        Ok(Proportion { terms })
    }

    /// Both complexity products, computed exactly.
    pub fn products(&self) -> ProportionProducts {
        let mut p_dir = BigUint::one();
        for &t in &self.terms {
            p_dir *= BigUint::from(t);
        }
        let mut p_inv = BigUint::one();
        for d in self.inverse_numbers() {
            p_inv *= d;
        }
        ProportionProducts { p_dir, p_inv }
    }

    /// The inverse writing, e.g. `/15:/12:/10` for `4:5:6`.
    ///
    /// A unit inverse number is written as a bare `1` rather than `/1`.
    pub fn inverse_writing(&self) -> String {
        let mut out = String::new();
        for (k, d) in self.inverse_numbers().iter().enumerate() {
            if k > 0 {
                out.push(':');
            }
            if d.is_one() {
                out.push('1');
            } else {
                out.push('/');
                out.push_str(&d.to_string());
            }
        }
        out
    }
}

impl fmt::Display for Proportion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, ":")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Proportion {
    type Err = ProportionParseError;

    /// Parse proportion text. Terms are separated by `:`; each term is a
    /// positive integer, optionally prefixed with `/` for a reciprocal, so
    /// both `4:5:6` and `/6:/5:/4` (and mixed writings like `/4:/2:1`)
    /// are accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |position: usize, reason: &'static str| ProportionParseError {
            text: s.to_string(),
            position,
            reason,
        };
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(err(0, "empty input"));
        }
        let mut ratios = Vec::new();
        let mut offset = 0usize;
        for piece in trimmed.split(':') {
            let at = offset;
            offset += piece.len() + 1;
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(err(at, "empty term"));
            }
            let (reciprocal, digits) = match piece.strip_prefix('/') {
                Some(rest) => (true, rest),
                None => (false, piece),
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err(at, "expected an integer, optionally prefixed with '/'"));
            }
            let n: u64 = digits
                .parse()
                .map_err(|_| err(at, "integer out of range"))?;
            if n == 0 {
                return Err(err(at, "terms must be positive"));
            }
            let r = if reciprocal {
                Rational::new(1, n)
            } else {
                Rational::new(n, 1)
            }
            .expect("n is nonzero");
            ratios.push(r);
        }
        Proportion::normalize(&ratios).map_err(|_| err(0, "terms exceed the supported range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prop(terms: &[u64]) -> Proportion {
        Proportion::from_terms(terms).unwrap()
    }

    fn rat(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn normalize_frequencies() {
        let p = Proportion::normalize(&[rat(300, 1), rat(400, 1), rat(500, 1)]).unwrap();
        assert_eq!(p.terms(), &[3, 4, 5]);
    }

    #[test]
    fn normalize_reciprocals() {
        // /6:/5:/4 given low voice first as 1/6, 1/5, 1/4.
        let p = Proportion::normalize(&[rat(1, 6), rat(1, 5), rat(1, 4)]).unwrap();
        assert_eq!(p.terms(), &[10, 12, 15]);
    }

    #[test]
    fn single_voice_reduces_to_unity() {
        let p = Proportion::normalize(&[rat(7, 1)]).unwrap();
        assert_eq!(p.terms(), &[1]);
    }

    #[test]
    fn normalize_sorts_input() {
        let p = Proportion::normalize(&[rat(5, 1), rat(3, 1), rat(4, 1)]).unwrap();
        assert_eq!(p.terms(), &[3, 4, 5]);
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(Proportion::normalize(&[]), Err(ProportionError::Empty));
        assert_eq!(Proportion::from_terms(&[]), Err(ProportionError::Empty));
        assert_eq!(Proportion::from_terms(&[0, 2]), Err(ProportionError::ZeroTerm));
    }

    #[test]
    fn inverse_numbers_examples() {
        let to_u64 = |v: Vec<BigUint>| -> Vec<u64> {
            v.iter().map(|b| b.to_u64().unwrap()).collect()
        };
        assert_eq!(to_u64(prop(&[4, 5, 6]).inverse_numbers()), vec![15, 12, 10]);
        assert_eq!(
            to_u64(prop(&[16, 20, 25]).inverse_numbers()),
            vec![25, 20, 16]
        );
        assert_eq!(to_u64(prop(&[1, 1, 1]).inverse_numbers()), vec![1, 1, 1]);
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(prop(&[4, 5, 6]).mirror().unwrap(), prop(&[10, 12, 15]));
        assert_eq!(prop(&[1, 2, 4]).mirror().unwrap(), prop(&[1, 2, 4]));
        let p = prop(&[3, 4, 5]);
        assert_eq!(p.mirror().unwrap().mirror().unwrap(), p);
    }

    #[test]
    fn products_examples() {
        let pr = prop(&[4, 5, 6]).products();
        assert_eq!(pr.p_dir, BigUint::from(120u32));
        assert_eq!(pr.p_inv, BigUint::from(1800u32));

        let pr = prop(&[16, 20, 25]).products();
        assert_eq!(pr.p_dir, BigUint::from(8000u32));
        assert_eq!(pr.p_inv, BigUint::from(8000u32));

        let pr = prop(&[2, 3]).products();
        assert_eq!(pr.p_dir, pr.p_inv);
    }

    #[test]
    fn parse_direct_and_inverse_text() {
        assert_eq!("4:5:6".parse::<Proportion>().unwrap(), prop(&[4, 5, 6]));
        assert_eq!("/6:/5:/4".parse::<Proportion>().unwrap(), prop(&[10, 12, 15]));
        assert_eq!("/4:/5:/6".parse::<Proportion>().unwrap(), prop(&[10, 12, 15]));
        assert_eq!("/4:/2:1".parse::<Proportion>().unwrap(), prop(&[1, 2, 4]));
        assert_eq!("15:12:10".parse::<Proportion>().unwrap(), prop(&[10, 12, 15]));
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = "4:x:6".parse::<Proportion>().unwrap_err();
        assert_eq!(e.position(), 2);
        assert!("".parse::<Proportion>().is_err());
        assert!("4::6".parse::<Proportion>().is_err());
        assert!("4:0:6".parse::<Proportion>().is_err());
        assert!("4:5:/0".parse::<Proportion>().is_err());
    }

    #[test]
    fn display_round_trip() {
        let p = prop(&[10, 12, 15]);
        assert_eq!(p.to_string(), "10:12:15");
        assert_eq!(p.to_string().parse::<Proportion>().unwrap(), p);
        assert_eq!(p.inverse_writing(), "/6:/5:/4");
        assert_eq!(p.inverse_writing().parse::<Proportion>().unwrap(), p);
        assert_eq!(prop(&[1, 2, 4]).inverse_writing(), "/4:/2:1");
    }

    fn arbitrary_terms(max: u64) -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(1..=max, 1..=5)
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(terms in arbitrary_terms(64)) {
            let p = Proportion::from_terms(&terms).unwrap();
            let again = Proportion::from_terms(p.terms()).unwrap();
            prop_assert_eq!(p, again);
        }

        #[test]
        fn normalization_is_scale_invariant(
            terms in arbitrary_terms(64),
            num in 1u64..200,
            den in 1u64..200,
        ) {
            let p = Proportion::from_terms(&terms).unwrap();
            let scaled: Vec<Rational> = terms
                .iter()
                .map(|&t| Rational::new(t * num, den).unwrap())
                .collect();
            prop_assert_eq!(Proportion::normalize(&scaled).unwrap(), p);
        }

        #[test]
        fn mirror_is_an_involution(terms in arbitrary_terms(64)) {
            let p = Proportion::from_terms(&terms).unwrap();
            prop_assert_eq!(p.mirror().unwrap().mirror().unwrap(), p);
        }

        #[test]
        fn mirror_swaps_products(terms in arbitrary_terms(64)) {
            let p = Proportion::from_terms(&terms).unwrap();
            let m = p.mirror().unwrap();
            let pp = p.products();
            let mp = m.products();
            prop_assert_eq!(pp.p_dir, mp.p_inv);
            prop_assert_eq!(pp.p_inv, mp.p_dir);
        }

        #[test]
        fn two_voices_have_equal_products(a in 1u64..=64, b in 1u64..=64) {
            let pr = Proportion::from_terms(&[a, b]).unwrap().products();
            prop_assert_eq!(pr.p_dir, pr.p_inv);
        }

        #[test]
        fn text_round_trips(terms in arbitrary_terms(64)) {
            let p = Proportion::from_terms(&terms).unwrap();
            prop_assert_eq!(p.to_string().parse::<Proportion>().unwrap(), p.clone());
            prop_assert_eq!(p.inverse_writing().parse::<Proportion>().unwrap(), p);
        }
    }
}
