//! Base-10^18 limb representation of non-negative decimal integers.
//!
//! A [`BigNumber`] stores its limbs least-significant first. Each limb holds
//! exactly 18 decimal digits of the number (the most significant limb may hold
//! fewer), so `2 * (10^18 - 1) + 1` never overflows a `u64`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Decimal digits carried by one limb.
pub const LIMB_DIGITS: usize = 18;

/// Radix of a limb, `10^18`.
pub const LIMB_BASE: u64 = 1_000_000_000_000_000_000;

/// Largest value a normalized limb may hold.
pub const LIMB_MAX: u64 = LIMB_BASE - 1;

const _: () = assert!(2 * LIMB_MAX + 1 < 1 << 63);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid digit {found:?} at offset {offset}")]
    InvalidDigit { offset: usize, found: char },
}

/// One base-10^18 token.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Limb(u64);

impl Limb {
    pub const ZERO: Limb = Limb(0);
    pub const ONE: Limb = Limb(1);
    pub const MAX: Limb = Limb(LIMB_MAX);

    /// Returns `None` if `value` is not below `10^18`.
    pub const fn new(value: u64) -> Option<Limb> {
        if value < LIMB_BASE {
            Some(Limb(value))
        } else {
            None
        }
    }

    /// For sums already reduced below the base.
    #[inline]
    pub(crate) fn from_sum(value: u64) -> Limb {
        debug_assert!(value < LIMB_BASE);
        Limb(value)
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    /// Adds two limbs and an incoming carry, truncating the sum back into
    /// limb range. The returned flag is the carry out.
    #[inline]
    pub const fn carrying_add(self, rhs: Limb, carry: bool) -> (Limb, bool) {
        let sum = self.0 + rhs.0 + carry as u64;
        if sum >= LIMB_BASE {
            (Limb(sum - LIMB_BASE), true)
        } else {
            (Limb(sum), false)
        }
    }

    /// Number of decimal digits needed to write this limb without padding.
    pub fn digit_count(self) -> usize {
        let mut n = 1;
        let mut v = self.0 / 10;
        while v != 0 {
            n += 1;
            v /= 10;
        }
        n
    }
}

impl fmt::Display for Limb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Number of limbs an operand of `digits` significant decimal digits occupies.
pub fn token_count(digits: usize) -> usize {
    assert!(digits >= 1, "token_count requires at least one digit");
    digits.div_ceil(LIMB_DIGITS)
}

/// A non-negative integer as a canonical sequence of limbs.
///
/// Invariants: `limbs` is non-empty, the top limb is nonzero unless the value
/// is zero (`limbs == [0]`), and `digit_len` is the length of the canonical
/// decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BigNumber {
    limbs: Vec<Limb>,
    digit_len: usize,
}

impl BigNumber {
    pub fn zero() -> BigNumber {
        BigNumber {
            limbs: vec![Limb::ZERO],
            digit_len: 1,
        }
    }

    /// Builds a number from least-significant-first limbs, dropping zero limbs
    /// at the top.
    pub fn from_limbs(mut limbs: Vec<Limb>) -> BigNumber {
        while limbs.len() > 1 && limbs.last() == Some(&Limb::ZERO) {
            limbs.pop();
        }
        if limbs.is_empty() {
            limbs.push(Limb::ZERO);
        }
        let digit_len = LIMB_DIGITS * (limbs.len() - 1) + limbs[limbs.len() - 1].digit_count();
        BigNumber { limbs, digit_len }
    }

    /// Like [`BigNumber::from_limbs`] but from raw words; `None` if any word
    /// is out of limb range.
    pub fn from_words(words: &[u64]) -> Option<BigNumber> {
        let limbs = words
            .iter()
            .map(|&w| Limb::new(w))
            .collect::<Option<Vec<_>>>()?;
        Some(BigNumber::from_limbs(limbs))
    }

    #[inline]
    pub fn limbs(&self) -> &[Limb] {
        &self.limbs
    }

    #[inline]
    pub fn limb_count(&self) -> usize {
        self.limbs.len()
    }

    #[inline]
    pub fn digit_len(&self) -> usize {
        self.digit_len
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == Limb::ZERO
    }

    pub fn into_limbs(self) -> Vec<Limb> {
        self.limbs
    }
}

impl FromStr for BigNumber {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_decimal(s)
    }
}

impl fmt::Display for BigNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_decimal(self))
    }
}

/// Returns the offset and character of the first non-digit in `text`.
fn first_invalid(text: &str) -> Option<(usize, char)> {
    text.char_indices().find(|(_, c)| !c.is_ascii_digit())
}

/// Parses an unsigned decimal string into limbs.
///
/// Leading zeros are accepted and dropped. Signs, whitespace and radix
/// prefixes are rejected as invalid digits.
pub fn parse_decimal(text: &str) -> Result<BigNumber, ParseError> {
    if text.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    let bytes = text.as_bytes();
    if !bytes.iter().all(u8::is_ascii_digit) {
        let (offset, found) = first_invalid(text).expect("non-digit byte present");
        return Err(ParseError::InvalidDigit { offset, found });
    }

    let start = bytes.iter().position(|&b| b != b'0');
    let Some(start) = start else {
        return Ok(BigNumber::zero());
    };
    let digits = &bytes[start..];

    let mut limbs = Vec::with_capacity(token_count(digits.len()));
    for chunk in digits.rchunks(LIMB_DIGITS) {
        limbs.push(Limb(parse_chunk(chunk)));
    }
    Ok(BigNumber {
        digit_len: digits.len(),
        limbs,
    })
}

#[inline]
fn parse_chunk(chunk: &[u8]) -> u64 {
    chunk
        .iter()
        .fold(0u64, |acc, &b| acc * 10 + u64::from(b - b'0'))
}

const DIGIT_PAIRS: &[u8; 200] = b"\
0001020304050607080910111213141516171819\
2021222324252627282930313233343536373839\
4041424344454647484950515253545556575859\
6061626364656667686970717273747576777879\
8081828384858687888990919293949596979899";

#[inline]
fn write_pair(out: &mut [u8], pair: u32) {
    let i = pair as usize * 2;
    out[0] = DIGIT_PAIRS[i];
    out[1] = DIGIT_PAIRS[i + 1];
}

/// Writes `v < 10^9` as exactly nine digits.
#[inline]
fn write_nine(out: &mut [u8], v: u32) {
    let hi = v / 10_000;
    let lo = v % 10_000;
    out[0] = b'0' + (hi / 10_000) as u8;
    let hi = hi % 10_000;
    write_pair(&mut out[1..3], hi / 100);
    write_pair(&mut out[3..5], hi % 100);
    write_pair(&mut out[5..7], lo / 100);
    write_pair(&mut out[7..9], lo % 100);
}

/// Writes a limb as exactly 18 zero-padded digits.
#[inline]
pub(crate) fn write_limb_padded(out: &mut [u8], limb: Limb) {
    let out = &mut out[..LIMB_DIGITS];
    let hi = (limb.0 / 1_000_000_000) as u32;
    let lo = (limb.0 % 1_000_000_000) as u32;
    write_nine(&mut out[..9], hi);
    write_nine(&mut out[9..], lo);
}

/// Renders the canonical decimal string: the top limb unpadded, every other
/// limb padded to 18 digits.
pub fn render_decimal(num: &BigNumber) -> String {
    let mut buf = vec![0u8; num.digit_len];
    let (top, rest) = num.limbs.split_last().expect("limbs are non-empty");
    let head = top.digit_count();
    let mut scratch = [0u8; LIMB_DIGITS];
    write_limb_padded(&mut scratch, *top);
    buf[..head].copy_from_slice(&scratch[LIMB_DIGITS - head..]);
    for (chunk, limb) in buf[head..]
        .chunks_exact_mut(LIMB_DIGITS)
        .zip(rest.iter().rev())
    {
        write_limb_padded(chunk, *limb);
    }
    String::from_utf8(buf).expect("ascii digits")
}

/// Strips leading zeros, keeping a single `"0"` for zero.
pub fn canonicalize(text: &str) -> &str {
    let trimmed = text.trim_start_matches('0');
    if trimmed.is_empty() && !text.is_empty() {
        "0"
    } else {
        trimmed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(n: &BigNumber) -> Vec<u64> {
        n.limbs().iter().map(|l| l.get()).collect()
    }

    #[test]
    fn zero_parses_to_single_limb() {
        let n = parse_decimal("0").unwrap();
        assert_eq!(words(&n), vec![0]);
        assert_eq!(n.digit_len(), 1);
        assert!(n.is_zero());
    }

    #[test]
    fn eighteen_nines_is_one_full_limb() {
        let n = parse_decimal("999999999999999999").unwrap();
        assert_eq!(words(&n), vec![LIMB_MAX]);
        assert_eq!(n.digit_len(), 18);
    }

    #[test]
    fn twenty_digits_split_after_two() {
        let n = parse_decimal("12345678901234567890").unwrap();
        assert_eq!(words(&n), vec![345_678_901_234_567_890, 12]);
        assert_eq!(n.digit_len(), 20);
        // Independent check through u128 arithmetic.
        let v: u128 = 12345678901234567890;
        assert_eq!((v % LIMB_BASE as u128) as u64, 345_678_901_234_567_890);
        assert_eq!((v / LIMB_BASE as u128) as u64, 12);
        assert_eq!(render_decimal(&n), "12345678901234567890");
    }

    #[test]
    fn interior_limbs_are_padded() {
        let n = BigNumber::from_words(&[1, 1]).unwrap();
        assert_eq!(render_decimal(&n), "1000000000000000001");
        assert_eq!(n.digit_len(), 19);
        assert_eq!(render_decimal(&BigNumber::zero()), "0");
    }

    #[test]
    fn leading_zeros_are_absorbed() {
        let n = parse_decimal("000000000000000000000042").unwrap();
        assert_eq!(words(&n), vec![42]);
        assert_eq!(n.digit_len(), 2);
        assert_eq!(parse_decimal("0000").unwrap(), BigNumber::zero());
    }

    #[test]
    fn rejects_empty_and_non_digits() {
        assert_eq!(parse_decimal(""), Err(ParseError::EmptyInput));
        assert_eq!(
            parse_decimal("12x4"),
            Err(ParseError::InvalidDigit {
                offset: 2,
                found: 'x'
            })
        );
        for bad in ["-1", "+1", " 1", "1 ", "0x10", "1\n", "１"] {
            assert!(
                matches!(parse_decimal(bad), Err(ParseError::InvalidDigit { .. })),
                "{bad:?} accepted"
            );
        }
        assert_eq!(
            parse_decimal("9é"),
            Err(ParseError::InvalidDigit {
                offset: 1,
                found: 'é'
            })
        );
    }

    #[test]
    fn token_counts() {
        assert_eq!(token_count(1), 1);
        assert_eq!(token_count(10), 1);
        assert_eq!(token_count(18), 1);
        assert_eq!(token_count(19), 2);
        assert_eq!(token_count(32), 2);
        assert_eq!(token_count(101), 6);
        assert_eq!(token_count(1000), 56);
    }

    #[test]
    fn from_limbs_trims_top_zeros() {
        let n = BigNumber::from_words(&[5, 0, 0]).unwrap();
        assert_eq!(n.limb_count(), 1);
        assert_eq!(n.digit_len(), 1);
        assert!(BigNumber::from_words(&[LIMB_BASE]).is_none());
        assert_eq!(BigNumber::from_limbs(vec![]), BigNumber::zero());
    }

    #[test]
    fn carrying_add_truncates() {
        assert_eq!(Limb::MAX.carrying_add(Limb::MAX, true), (Limb::MAX, true));
        assert_eq!(Limb::MAX.carrying_add(Limb::ZERO, true), (Limb::ZERO, true));
        assert_eq!(Limb::ONE.carrying_add(Limb::ONE, false), (Limb(2), false));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonicalize("000"), "0");
        assert_eq!(canonicalize("0012"), "12");
        assert_eq!(canonicalize("7"), "7");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip(zeros in 0usize..40, s in "[0-9]{1,400}") {
                let padded = format!("{}{}", "0".repeat(zeros), s);
                let n = parse_decimal(&padded).unwrap();
                prop_assert_eq!(render_decimal(&n), canonicalize(&padded));
                let canon = canonicalize(&padded);
                prop_assert_eq!(n.limb_count(), token_count(canon.len()));
                prop_assert_eq!(n.digit_len(), canon.len());
                prop_assert!(n.limbs().iter().all(|l| l.get() < LIMB_BASE));
                prop_assert!(n.is_zero() || n.limbs().last().unwrap().get() != 0);
            }

            #[test]
            fn padded_limb_matches_format(v in 0u64..LIMB_BASE) {
                let mut buf = [0u8; LIMB_DIGITS];
                write_limb_padded(&mut buf, Limb(v));
                prop_assert_eq!(std::str::from_utf8(&buf).unwrap(), format!("{v:018}"));
                prop_assert_eq!(Limb(v).digit_count(), v.to_string().len());
            }
        }
    }
}
