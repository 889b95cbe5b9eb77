use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PermutationKind {
    Uniform,
    Identity,
    Reversed,
    /// Uniform background with an increasing run of the given length planted
    /// at random positions.
    PlantedLis(usize),
}

impl fmt::Display for PermutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermutationKind::Uniform => f.write_str("uniform"),
            PermutationKind::Identity => f.write_str("identity"),
            PermutationKind::Reversed => f.write_str("reversed"),
            PermutationKind::PlantedLis(l) => write!(f, "planted-lis:{l}"),
        }
    }
}

impl FromStr for PermutationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "identity" => Ok(Self::Identity),
            "reversed" => Ok(Self::Reversed),
            _ => {
                let l = s
                    .strip_prefix("planted-lis:")
                    .or_else(|| s.strip_prefix("planted-lis="))
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("unknown permutation kind {s:?}"))
                    })?;
                l.parse()
                    .map(Self::PlantedLis)
                    .map_err(|_| Error::InvalidParameter(format!("bad planted length {l:?}")))
            }
        }
    }
}

impl TryFrom<String> for PermutationKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PermutationKind> for String {
    fn from(k: PermutationKind) -> Self {
        k.to_string()
    }
}

pub fn generate_permutation(kind: PermutationKind, n: usize, seed: u64) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameter(format!("n = {n} is too large")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems = match kind {
        PermutationKind::Identity => return Ok(Permutation::identity(n)),
        PermutationKind::Reversed => return Ok(Permutation::reversed(n)),
        PermutationKind::Uniform => {
            let mut v: Vec<u32> = (1..=n as u32).collect();
            v.shuffle(&mut rng);
            v
        }
        PermutationKind::PlantedLis(l) => {
            if l == 0 || l > n {
                return Err(Error::InvalidParameter(format!(
                    "planted length {l} must lie in 1..={n}"
                )));
            }
            let mut v: Vec<u32> = (1..=n as u32).collect();
            v.shuffle(&mut rng);
            let mut slots = index::sample(&mut rng, n, l).into_vec();
            slots.sort_unstable();
            let mut planted: Vec<u32> = slots.iter().map(|&i| v[i]).collect();
            planted.sort_unstable();
            for (&i, x) in slots.iter().zip(planted) {
                v[i] = x;
            }
            v
        }
    };
    Permutation::new(elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_kinds() {
        assert_eq!(
            generate_permutation(PermutationKind::Identity, 5, 0).unwrap().as_slice(),
            &[1, 2, 3, 4, 5]
        );
        assert_eq!(
            generate_permutation(PermutationKind::Reversed, 4, 0).unwrap().as_slice(),
            &[4, 3, 2, 1]
        );
    }

    #[test]
    fn uniform_is_seeded() {
        let a = generate_permutation(PermutationKind::Uniform, 100, 3).unwrap();
        let b = generate_permutation(PermutationKind::Uniform, 100, 3).unwrap();
        let c = generate_permutation(PermutationKind::Uniform, 100, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn bad_parameters() {
        assert!(generate_permutation(PermutationKind::Uniform, 0, 0).is_err());
        assert!(generate_permutation(PermutationKind::PlantedLis(11), 10, 0).is_err());
        assert!(generate_permutation(PermutationKind::PlantedLis(0), 10, 0).is_err());
    }

    #[test]
    fn kind_parsing() {
        for k in [
            PermutationKind::Uniform,
            PermutationKind::Identity,
            PermutationKind::Reversed,
            PermutationKind::PlantedLis(50),
        ] {
            assert_eq!(k.to_string().parse::<PermutationKind>().unwrap(), k);
        }
        assert!("sorted".parse::<PermutationKind>().is_err());
    }
}
