//! Seeded random polynomials for the sampled checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcenter_core::{rat, Monomial, Poly, Scalar, SymplecticSpace};

use crate::scenario::Task;

/// One independent stream per task, so enabling or disabling a task never
/// changes the samples of another.
pub fn task_rng(seed: u64, task: &Task) -> ChaCha8Rng {
    let salt = Task::ALL.iter().position(|t| t == task).unwrap_or(0) as u64;
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let mut num = rng.gen_range(-9i64..=9);
    if num == 0 {
        num = 1;
    }
    rat(num, rng.gen_range(1i64..=4))
}

fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> Monomial {
    let mut exps = vec![0u32; nvars];
    for _ in 0..degree {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::new(exps)
}

/// Up to `max_terms` terms of degree at most `max_degree`.
pub fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32, max_terms: usize) -> Poly {
    let mut out = Poly::zero(nvars);
    if nvars == 0 {
        return Poly::constant(0, random_scalar(rng));
    }
    for _ in 0..rng.gen_range(1..=max_terms) {
        let d = rng.gen_range(0..=max_degree);
        out.add_term(random_monomial(rng, nvars, d), random_scalar(rng));
    }
    out
}

/// A random polynomial homogeneous for the space's `K^×`-weights: one
/// weight component of a random polynomial.
pub fn random_weight_homogeneous(
    rng: &mut ChaCha8Rng,
    space: &SymplecticSpace,
    max_degree: u32,
    max_terms: usize,
) -> Poly {
    loop {
        let f = random_poly(rng, space.nvars(), max_degree, max_terms);
        let parts: Vec<Poly> = space.grade_decompose(&f).into_values().collect();
        if !parts.is_empty() {
            let i = rng.gen_range(0..parts.len());
            return parts[i].clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = random_poly(&mut task_rng(7, &Task::Axioms), 4, 6, 3);
        let b = random_poly(&mut task_rng(7, &Task::Axioms), 4, 6, 3);
        assert_eq!(a, b);
        let seq = |seed, task| {
            let mut rng = task_rng(seed, task);
            (0..5).map(|_| random_poly(&mut rng, 4, 6, 3)).collect::<Vec<_>>()
        };
        assert_ne!(seq(7, &Task::Axioms), seq(8, &Task::Axioms));
        assert_ne!(seq(7, &Task::Axioms), seq(7, &Task::Eq25));
    }

    #[test]
    fn degree_bound_and_homogeneity() {
        let space = SymplecticSpace::standard(2);
        let mut rng = task_rng(1, &Task::Axioms);
        for _ in 0..50 {
            assert!(random_poly(&mut rng, 4, 6, 3).degree().unwrap_or(0) <= 6);
            let h = random_weight_homogeneous(&mut rng, &space, 6, 3);
            assert!(space.weighted_degree(&h).is_some());
        }
    }
}
