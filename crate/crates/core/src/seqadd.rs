//! Sequential ripple-carry addition over limbs.

use crate::limb::{BigNumber, Limb};

/// Work counters for one sequential addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpMetrics {
    /// Limb-level additions executed, one per position of the longer operand.
    pub basic_ops: usize,
    /// Positions whose sum reached `10^18` and was truncated.
    pub carries_generated: usize,
    pub result_limbs: usize,
}

/// Adds `a + b` limb by limb from the least significant end.
///
/// The shorter operand is read as zero past its end, and a carry out of the
/// top limb becomes a new limb of value 1.
pub fn add_sequential(a: &BigNumber, b: &BigNumber) -> (BigNumber, OpMetrics) {
    let (long, short) = if a.limb_count() >= b.limb_count() {
        (a.limbs(), b.limbs())
    } else {
        (b.limbs(), a.limbs())
    };

    let mut out = Vec::with_capacity(long.len() + 1);
    let mut carry = false;
    let mut carries_generated = 0;
    for (i, &x) in long.iter().enumerate() {
        let y = short.get(i).copied().unwrap_or(Limb::ZERO);
        let (sum, c) = x.carrying_add(y, carry);
        out.push(sum);
        carries_generated += c as usize;
        carry = c;
    }
    if carry {
        out.push(Limb::ONE);
    }

    let metrics = OpMetrics {
        basic_ops: long.len(),
        carries_generated,
        result_limbs: out.len(),
    };
    (BigNumber::from_limbs(out), metrics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limb::{parse_decimal, render_decimal};
    use crate::oracle::add_digitwise;

    fn add(a: &str, b: &str) -> (String, OpMetrics) {
        let (sum, m) = add_sequential(&parse_decimal(a).unwrap(), &parse_decimal(b).unwrap());
        (render_decimal(&sum), m)
    }

    #[test]
    fn identity() {
        let (s, m) = add("1", "0");
        assert_eq!(s, "1");
        assert_eq!(m.basic_ops, 1);
        assert_eq!(m.carries_generated, 0);
    }

    #[test]
    fn top_limb_overflow_appends_limb() {
        let nines = "9".repeat(18);
        let (s, m) = add(&nines, "1");
        assert_eq!(s, add_digitwise(&nines, "1").unwrap());
        assert_eq!(s, "1000000000000000000");
        assert_eq!(m.basic_ops, 1);
        assert_eq!(m.carries_generated, 1);
        assert_eq!(m.result_limbs, 2);
    }

    #[test]
    fn doubling_repeated_block() {
        let x = "12345678909876543211234567890987654321";
        let (s, m) = add(x, x);
        assert_eq!(s, "24691357819753086422469135781975308642");
        assert_eq!(s, add_digitwise(x, x).unwrap());
        assert_eq!(m.basic_ops, 3);
    }

    #[test]
    fn carry_ripples_through_longer_operand() {
        // 10^54 - 1 + 1: the carry crosses every limb of the longer operand.
        let nines = "9".repeat(54);
        let (s, m) = add("1", &nines);
        assert_eq!(s, format!("1{}", "0".repeat(54)));
        assert_eq!(m.basic_ops, 3);
        assert_eq!(m.carries_generated, 3);
        assert_eq!(m.result_limbs, 4);
    }

    #[test]
    fn zero_plus_zero() {
        let (s, m) = add("0", "000");
        assert_eq!(s, "0");
        assert_eq!(m.result_limbs, 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn num() -> impl Strategy<Value = String> {
            prop_oneof![
                "[0-9]{1,120}",
                (1usize..8).prop_map(|k| "9".repeat(18 * k)),
                "9{1,60}",
            ]
        }

        proptest! {
            #[test]
            fn matches_oracle(a in num(), b in num()) {
                let (s, _) = add(&a, &b);
                prop_assert_eq!(s, add_digitwise(&a, &b).unwrap());
            }

            #[test]
            fn commutes_with_equal_metrics(a in num(), b in num()) {
                prop_assert_eq!(add(&a, &b), add(&b, &a));
            }

            #[test]
            fn zero_is_identity(a in num()) {
                let x = parse_decimal(&a).unwrap();
                let (s, _) = add_sequential(&x, &BigNumber::zero());
                prop_assert_eq!(s, x);
            }

            #[test]
            fn associative(a in num(), b in num(), c in num()) {
                let (a, b, c) = (
                    parse_decimal(&a).unwrap(),
                    parse_decimal(&b).unwrap(),
                    parse_decimal(&c).unwrap(),
                );
                let left = add_sequential(&add_sequential(&a, &b).0, &c).0;
                let right = add_sequential(&a, &add_sequential(&b, &c).0).0;
                prop_assert_eq!(left, right);
            }

            #[test]
            fn length_and_op_counts(a in num(), b in num()) {
                let (x, y) = (parse_decimal(&a).unwrap(), parse_decimal(&b).unwrap());
                let (s, m) = add_sequential(&x, &y);
                let longest = x.digit_len().max(y.digit_len());
                prop_assert!(s.digit_len() == longest || s.digit_len() == longest + 1);
                prop_assert_eq!(m.basic_ops, x.limb_count().max(y.limb_count()));
                prop_assert!(m.carries_generated <= m.basic_ops);
                prop_assert_eq!(m.result_limbs, s.limb_count());
            }
        }
    }
}
