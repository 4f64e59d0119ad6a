//! Fixed inputs shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zeromap_core::verify::{random_roots, random_spec, sample_mus};
use zeromap_core::{Family, Polynomial, Result, Scalar, TransformSpec};

pub struct Fixture {
    pub family: Family,
    pub spec: TransformSpec,
    pub input: Polynomial,
    pub mu: Scalar,
}

/// One transform and input polynomial per family, the same on every run.
pub fn fixtures(seed: u64) -> Result<Vec<Fixture>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Family::ALL
        .iter()
        .map(|&family| {
            let spec = random_spec(family, &mut rng)?;
            let mut roots = random_roots(&spec, &mut rng);
            // keep degree fixed-ish so timings are comparable across families
            let cap = spec.max_degree().unwrap_or(6).min(6);
            while roots.len() < cap {
                roots.extend(random_roots(&spec, &mut rng));
            }
            roots.truncate(cap);
            let mu = sample_mus(&spec).swap_remove(1);
            Ok(Fixture { family, input: Polynomial::from_roots(&roots), spec, mu })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        let a = fixtures(3).unwrap();
        let b = fixtures(3).unwrap();
        assert_eq!(a.len(), Family::ALL.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.input, y.input);
            assert_eq!(x.mu, y.mu);
        }
    }
}
