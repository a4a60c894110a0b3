//! Small ready-made spaces used across tests, benches and the packaged
//! CLI fixtures.

use crate::exact::{rat, rint, Rat};
use crate::field::ScalarField;
use crate::generator::Generator;
use crate::space::FiniteSpace;

/// Nine-state ring with symmetric nearest-neighbor rate 1/2 and the
/// two-valley profile `(1,0,0,1,2,1,1,2,1)`.
///
/// The profile has critical set `{1,2,5,6,8}` for the rate-descent
/// operator and order minima `{1,2,5,6}`: vertex 8 is critical but drains
/// through `8 -> 0 -> 1`.
pub fn nine_ring() -> (Generator, ScalarField) {
    let space = FiniteSpace::indexed(9);
    let gen = Generator::ring(space.clone(), rat(1, 2)).expect("ring generator");
    let f = ScalarField::from_ints(space, &[1, 0, 0, 1, 2, 1, 1, 2, 1]).expect("profile");
    (gen, f)
}

/// Cycle of `n` states (n even) plus a pendant vertex attached at state 0.
///
/// Vertex order: `["p", "0", "1", ..., "n-1"]`. Rates: cycle states jump to
/// their two neighbors at 1/2, state 0 jumps to `{p, 1, n-1}` at 1/3 each,
/// and the pendant jumps to 0 at rate 1. The off-diagonal part doubles as
/// the measure matrix of the nonlocal examples.
pub fn pendant_cycle(n: usize) -> Generator {
    assert!(n >= 3 && n.is_multiple_of(2), "need an even cycle of length >= 4");
    let labels: Vec<String> =
        std::iter::once("0bar".to_string()).chain((0..n).map(|i| i.to_string())).collect();
    let space = FiniteSpace::new(labels).expect("distinct labels");
    let m = n + 1;
    let mut rates = vec![vec![Rat::from_integer(0.into()); m]; m];
    let cyc = |k: usize| 1 + k % n; // index of cycle state k
    rates[0][cyc(0)] = rint(1); // pendant "0bar" -> 0
    rates[cyc(0)][0] = rat(1, 3);
    rates[cyc(0)][cyc(1)] = rat(1, 3);
    rates[cyc(0)][cyc(n - 1)] = rat(1, 3);
    for k in 1..n {
        rates[cyc(k)][cyc(k + 1)] = rat(1, 2);
        rates[cyc(k)][cyc(k + n - 1)] = rat(1, 2);
    }
    Generator::from_rates(space, rates).expect("valid rates")
}

/// Two admissible profiles on [`pendant_cycle`]: both vanish on the pendant
/// and state 0 and move by exactly ±1 along every cycle edge, but differ as
/// functions.
pub fn pendant_cycle_profiles(gen: &Generator) -> (ScalarField, ScalarField) {
    let n = gen.space().len() - 1;
    assert_eq!(n, 6, "profiles are spelled out for the 6-cycle");
    let f1 = ScalarField::from_ints(gen.space().clone(), &[0, 0, 1, 2, 1, 2, 1]).expect("f1");
    let f2 = ScalarField::from_ints(gen.space().clone(), &[0, 0, 1, 0, 1, 0, 1]).expect("f2");
    (f1, f2)
}

/// A deterministically seeded random generator on `n` states with rates
/// drawn from the given pool.
pub fn random_generator(n: usize, pool: &[Rat], seed: u64) -> Generator {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let space = FiniteSpace::indexed(n);
    let mut rates = vec![vec![Rat::from_integer(0.into()); n]; n];
    for (i, row) in rates.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i != j {
                *v = pool[rng.gen_range(0..pool.len())].clone();
            }
        }
    }
    Generator::from_rates(space, rates).expect("nonnegative rates")
}

/// A deterministically seeded random neighborhood system on `n` states.
pub fn random_system(n: usize, seed: u64) -> crate::neighbors::NeighborhoodSystem {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let space = FiniteSpace::indexed(n);
    let sets = (0..n)
        .map(|x| {
            let mut s: Vec<usize> = (0..n).filter(|&y| y == x || rng.gen_bool(0.5)).collect();
            s.sort_unstable();
            s
        })
        .collect();
    crate::neighbors::NeighborhoodSystem::new(space, sets).expect("self-membership holds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, Zero};

    #[test]
    fn pendant_cycle_matches_the_stated_rates() {
        let g = pendant_cycle(6);
        let s = g.space();
        let i = |l: &str| s.require(l).unwrap();
        assert_eq!(g.entry(i("0bar"), i("0")), &rint(1));
        assert_eq!(g.entry(i("0"), i("0bar")), &rat(1, 3));
        assert_eq!(g.entry(i("0"), i("1")), &rat(1, 3));
        assert_eq!(g.entry(i("0"), i("5")), &rat(1, 3));
        assert_eq!(g.entry(i("2"), i("1")), &rat(1, 2));
        assert_eq!(g.entry(i("2"), i("3")), &rat(1, 2));
        assert!(g.entry(i("0bar"), i("3")).is_zero());
    }

    #[test]
    fn profiles_step_by_one_and_differ() {
        let g = pendant_cycle(6);
        let (f1, f2) = pendant_cycle_profiles(&g);
        assert_ne!(f1, f2);
        for f in [&f1, &f2] {
            assert!(f.value(0).is_zero());
            assert!(f.value(1).is_zero());
            for k in 0..6usize {
                let a = f.value(1 + k);
                let b = f.value(1 + (k + 1) % 6);
                let step = (a - b).abs();
                assert_eq!(step, rint(1), "cycle edge {k} must step by 1");
            }
        }
    }
}
