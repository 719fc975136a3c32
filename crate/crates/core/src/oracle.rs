//! Reference adder working one decimal digit at a time.
//!
//! Nothing here touches the limb machinery: inputs and outputs are plain
//! digit strings, so it can serve as ground truth for the limb adders.

use thiserror::Error;

use crate::limb::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitLengthError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("bit length of zero is undefined")]
    ZeroInput,
}

/// Work counters for one digit-wise addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DigitMetrics {
    /// One per digit position of the longer operand.
    pub digit_ops: usize,
    pub carries: usize,
}

fn check_digits(s: &str) -> Result<(), ParseError> {
    if s.is_empty() {
        return Err(ParseError::EmptyInput);
    }
    match s.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
        Some((offset, found)) => Err(ParseError::InvalidDigit { offset, found }),
        None => Ok(()),
    }
}

pub fn add_digitwise(a: &str, b: &str) -> Result<String, ParseError> {
    add_digitwise_counted(a, b).map(|(s, _)| s)
}

/// Schoolbook decimal addition: sum = a[i] + b[i] + carry, right to left.
pub fn add_digitwise_counted(a: &str, b: &str) -> Result<(String, DigitMetrics), ParseError> {
    check_digits(a)?;
    check_digits(b)?;
    let a = a.as_bytes();
    let b = b.as_bytes();
    let len = a.len().max(b.len());

    let mut reversed = Vec::with_capacity(len + 1);
    let mut carry = 0u8;
    let mut carries = 0;
    for i in 0..len {
        let x = if i < a.len() {
            a[a.len() - 1 - i] - b'0'
        } else {
            0
        };
        let y = if i < b.len() {
            b[b.len() - 1 - i] - b'0'
        } else {
            0
        };
        let sum = x + y + carry;
        if sum >= 10 {
            reversed.push(sum - 10 + b'0');
            carry = 1;
            carries += 1;
        } else {
            reversed.push(sum + b'0');
            carry = 0;
        }
    }
    if carry == 1 {
        reversed.push(b'1');
    }
    while reversed.len() > 1 && reversed.last() == Some(&b'0') {
        reversed.pop();
    }
    reversed.reverse();

    let metrics = DigitMetrics {
        digit_ops: len,
        carries,
    };
    Ok((String::from_utf8(reversed).expect("ascii digits"), metrics))
}

/// Exact number of bits in the binary form of a positive decimal integer,
/// found by halving the digit string until it reaches zero.
pub fn bit_length(a: &str) -> Result<usize, BitLengthError> {
    check_digits(a)?;
    let mut digits: Vec<u8> = a
        .bytes()
        .skip_while(|&d| d == b'0')
        .map(|d| d - b'0')
        .collect();
    if digits.is_empty() {
        return Err(BitLengthError::ZeroInput);
    }

    let mut bits = 0;
    while !digits.is_empty() {
        let mut rem = 0;
        for d in digits.iter_mut() {
            let cur = rem * 10 + *d;
            *d = cur / 2;
            rem = cur % 2;
        }
        let lead = digits.iter().take_while(|&&d| d == 0).count();
        digits.drain(..lead);
        bits += 1;
    }
    Ok(bits)
}
