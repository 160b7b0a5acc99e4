use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use proptest::prelude::*;

use ehrlab::random_walk::{default_measure, derive_seed, exact_convolution, lower_density, markov_lower_bound, sample_walk};

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=200, 1i64..=50).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

proptest! {
    #[test]
    fn markov_bound_is_attained_by_the_two_point_law(c in positive_rational(), gap in positive_rational(), room in positive_rational()) {
        let mean = &c + gap;
        let sup = &mean + room;
        let b = markov_lower_bound(mean.clone(), c.clone(), sup.clone()).unwrap();
        prop_assert!(b > BigRational::zero() && b <= BigRational::one());
        prop_assert_eq!(&b * &sup + (BigRational::one() - &b) * &c, mean);
    }

    #[test]
    fn markov_bound_rejects_thresholds_above_the_mean(mean in positive_rational(), extra in positive_rational()) {
        let c = &mean + extra;
        prop_assert!(markov_lower_bound(mean, c.clone(), &c + BigRational::one()).is_err());
    }

    #[test]
    fn lower_density_is_the_windowed_minimum(bits in prop::collection::vec(any::<bool>(), 1..200)) {
        let n = bits.len();
        let expected = (n.div_ceil(2).max(1)..=n)
            .map(|m| Ratio::new(bits[..m].iter().filter(|&&b| b).count() as u64, m as u64))
            .min()
            .unwrap();
        prop_assert_eq!(lower_density(&bits).unwrap(), expected);
    }

    #[test]
    fn walks_are_reproducible_from_their_seed(seed in any::<u64>(), trial in 0u64..100) {
        let p = default_measure(2).unwrap();
        let s = derive_seed(seed, trial);
        prop_assert_eq!(sample_walk(&p, 30, s).steps, sample_walk(&p, 30, s).steps);
    }
}

#[test]
fn convolutions_are_probability_measures_on_sl2() {
    let p = default_measure(2).unwrap();
    for n in 1..=4 {
        let law = exact_convolution(&p, n).unwrap();
        let total = law.values().fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(total, BigRational::one());
        assert!(law.keys().all(|g| g.determinant() == 1));
    }
}
