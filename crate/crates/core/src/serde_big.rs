//! Big integers and rationals serialize as JSON strings so that no consumer
//! silently rounds them through a double.

pub mod biguint {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub mod rational {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    /// `"p/q"` in lowest terms, or `"p"` when the denominator is 1.
    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        match text.split_once('/') {
            Some((n, q)) => {
                let n: BigInt = n.trim().parse().map_err(serde::de::Error::custom)?;
                let q: BigInt = q.trim().parse().map_err(serde::de::Error::custom)?;
                if q == BigInt::from(0) {
                    return Err(serde::de::Error::custom("zero denominator"));
                }
                Ok(BigRational::new(n, q))
            }
            None => {
                let n: BigInt = text.trim().parse().map_err(serde::de::Error::custom)?;
                Ok(BigRational::from_integer(n))
            }
        }
    }

    pub mod option {
        use num_rational::BigRational;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.collect_str(v),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
            #[derive(Deserialize)]
            struct Wrapped(#[serde(with = "super")] BigRational);
            Ok(Option::<Wrapped>::deserialize(d)?.map(|w| w.0))
        }
    }
}
