//! Exact rational scalars used throughout the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The ground ring: arbitrary-precision rationals.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// The fraction `n / d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Renders `x` as `n` or `n/d`, the same form `Q::from_str` accepts.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// True if `x` is an integer or half-integer.
pub fn is_half_integral(x: &Q) -> bool {
    (x * q(2)).denom().is_one()
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign_of(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub mod q_serde {
    //! Serde glue: rationals serialize as strings like `"-3/2"`.
    use super::Q;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        Q::from_str(&text).map_err(|e| D::Error::custom(format!("bad rational {text:?}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for x in [q(0), q(-3), qr(1, 2), qr(-7, 6)] {
            let s = fmt_q(&x);
            let y: Q = s.parse().unwrap();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn half_integrality() {
        assert!(is_half_integral(&qr(7, 2)));
        assert!(is_half_integral(&q(-4)));
        assert!(!is_half_integral(&qr(1, 3)));
    }
}
