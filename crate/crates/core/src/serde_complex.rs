//! Complex numbers serialize as `{"re": .., "im": ..}` objects.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Repr {
    re: f64,
    im: f64,
}

impl From<Complex64> for Repr {
    fn from(z: Complex64) -> Self {
        Repr { re: z.re, im: z.im }
    }
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    Repr::from(*z).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    let r = Repr::deserialize(d)?;
    Ok(Complex64::new(r.re, r.im))
}

pub mod seq {
    use super::Repr;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S, T>(zs: &T, s: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: AsRef<[Complex64]>,
    {
        let v: Vec<Repr> = zs.as_ref().iter().map(|&z| z.into()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D, T>(d: D) -> Result<T, D::Error>
    where
        D: Deserializer<'de>,
        T: TryFrom<Vec<Complex64>>,
    {
        let v = Vec::<Repr>::deserialize(d)?;
        let n = v.len();
        let zs: Vec<Complex64> = v.into_iter().map(|r| Complex64::new(r.re, r.im)).collect();
        T::try_from(zs).map_err(|_| serde::de::Error::invalid_length(n, &"fixed-size complex array"))
    }
}

pub mod option {
    use super::Repr;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(Repr::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<Repr>::deserialize(d)?.map(|r| Complex64::new(r.re, r.im)))
    }
}
