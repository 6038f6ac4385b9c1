//! Named and seeded test quartics.

use crate::poly::HomPoly;
use crate::{elim, Precision, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// x⁴ + y⁴ + z⁴.
pub fn fermat() -> HomPoly {
    HomPoly::from_terms_re(4, &[(4, 0, 0, 1.0), (0, 4, 0, 1.0), (0, 0, 4, 1.0)])
}

/// x³y + y³z + z³x.
pub fn klein() -> HomPoly {
    HomPoly::from_terms_re(4, &[(3, 1, 0, 1.0), (0, 3, 1, 1.0), (1, 0, 3, 1.0)])
}

/// Seeded random real quartic, rejection-sampled for smoothness.
pub fn random_smooth_quartic(seed: u64, prec: &Precision) -> HomPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coeffs: Vec<C64> = (0..15)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0))
            .collect();
        let Ok(q) = HomPoly::new(4, coeffs) else { continue };
        let q = q.normalized().unwrap();
        if elim::is_smooth(&q, prec) {
            return q;
        }
    }
}

/// A named quartic perturbed by seeded noise of the given relative size,
/// rejection-sampled for smoothness.
pub fn perturbed(base: &HomPoly, seed: u64, eps: f64, prec: &Precision) -> HomPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = base.max_abs();
    loop {
        let coeffs: Vec<C64> = base
            .coeffs
            .iter()
            .map(|c| c + C64::new(rng.gen_range(-eps..eps) * scale, 0.0))
            .collect();
        let Ok(q) = HomPoly::new(4, coeffs) else { continue };
        if elim::is_smooth(&q, prec) {
            return q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_quartics_are_smooth() {
        let prec = Precision::default();
        for seed in 0..5 {
            let q = random_smooth_quartic(seed, &prec);
            assert!(elim::is_smooth(&q, &prec));
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let prec = Precision::default();
        assert_eq!(
            random_smooth_quartic(7, &prec).coeffs,
            random_smooth_quartic(7, &prec).coeffs
        );
    }
}
