//! Random inputs for benchmarks and test suites.

use rand::Rng;

use crate::apolarity::essential_variables;
use crate::decompose::ForbiddenSet;
use crate::numerics::{Rational, Tolerance};
use crate::poly::{linear_power, monomials, Form, LinearForm};

/// splitmix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one `(n, d, trial)` cell of a sweep.
pub fn cell_seed(seed: u64, n: u64, d: u64, trial: u64) -> u64 {
    seed ^ splitmix64(splitmix64(splitmix64(n) ^ d) ^ trial)
}

fn coeff<R: Rng>(rng: &mut R, height: i64) -> Rational {
    Rational::from_integer(rng.gen_range(-height..=height).into())
}

/// Dense form with integer coefficients in `[-height, height]`.
pub fn random_form<R: Rng>(rng: &mut R, n: usize, d: u32, height: i64) -> Form<Rational> {
    let terms = monomials(n, d).into_iter().map(|m| (m, coeff(rng, height)));
    Form::from_terms(n, d, terms).expect("monomials of degree d")
}

/// [`random_form`] redrawn until all `n` variables are essential.
pub fn random_essential_form<R: Rng>(rng: &mut R, n: usize, d: u32, height: i64) -> Form<Rational> {
    loop {
        let f = random_form(rng, n, d, height);
        if !f.is_zero() && essential_variables(&f, Tolerance::default()).ok() == Some(n) {
            return f;
        }
    }
}

pub fn random_linear_form<R: Rng>(rng: &mut R, n: usize, height: i64) -> LinearForm<Rational> {
    loop {
        let l = LinearForm::new((0..n).map(|_| coeff(rng, height)).collect());
        if !l.is_zero() {
            return l;
        }
    }
}

/// `count` random hyperplane constraints.
pub fn random_hyperplanes<R: Rng>(rng: &mut R, n: usize, count: usize, height: i64) -> ForbiddenSet<Rational> {
    let constraints = (0..count)
        .map(|_| random_linear_form(rng, n, height).to_form())
        .collect();
    ForbiddenSet::new(n, constraints).expect("nonzero hyperplanes")
}

/// `sum_{i < r} c_i a_i^2` with independent `a_i`: a quadric of rank `r`.
pub fn random_quadric_of_rank<R: Rng>(rng: &mut R, n: usize, r: usize, height: i64) -> Form<Rational> {
    loop {
        let mut f = Form::zero(n, 2);
        for _ in 0..r {
            let c = loop {
                let c = coeff(rng, height);
                if !num_traits::Zero::is_zero(&c) {
                    break c;
                }
            };
            f = f.add(&linear_power(&random_linear_form(rng, n, height), 2).scale(&c));
        }
        if !f.is_zero() && essential_variables(&f, Tolerance::default()).ok() == Some(r) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cell_seeds_differ() {
        let a = cell_seed(1, 3, 3, 0);
        assert_ne!(a, cell_seed(1, 3, 3, 1));
        assert_ne!(a, cell_seed(1, 3, 4, 0));
        assert_ne!(a, cell_seed(1, 4, 3, 0));
        assert_eq!(a, cell_seed(1, 3, 3, 0));
    }

    #[test]
    fn quadric_rank_is_prescribed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for r in 1..=5 {
            let f = random_quadric_of_rank(&mut rng, 5, r, 5);
            assert_eq!(essential_variables(&f, Tolerance::default()).unwrap(), r);
        }
    }
}
