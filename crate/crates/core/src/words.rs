//! Breadth-first enumeration of `SL_r(Z)` elements as words in the
//! elementary generators `I ± E_ij`.

use std::collections::HashSet;

use crate::lattice::{elementary_generators, Unimodular};
use crate::scalar::IntScalar;

/// A group element together with the first word that reaches it.
#[derive(Clone, Debug)]
pub struct Word<T> {
    /// Indices into [`elementary_generators`]; the element is the ordered product.
    pub letters: Vec<usize>,
    pub element: Unimodular<T>,
}

/// All distinct elements reachable by words of length `<= max_len`, each
/// listed once with its first word in (length, lexicographic) order.
///
/// Extending only the kept words is enough: a dropped word has the same
/// matrix as a shorter or lexicographically smaller kept word, so all its
/// extensions are dominated too.
pub fn enumerate_words<T: IntScalar>(rank: usize, max_len: usize) -> Vec<Word<T>> {
    let gens = elementary_generators::<T>(rank);
    let mut seen = HashSet::new();
    let id = Unimodular::identity(rank);
    seen.insert(id.clone());
    let mut out = vec![Word { letters: Vec::new(), element: id }];
    let mut frontier = 0..1;
    for _ in 0..max_len {
        let start = out.len();
        for idx in frontier.clone() {
            for (g, gen) in gens.iter().enumerate() {
                let element = out[idx].element.compose(gen);
                if seen.insert(element.clone()) {
                    let mut letters = out[idx].letters.clone();
                    letters.push(g);
                    out.push(Word { letters, element });
                }
            }
        }
        frontier = start..out.len();
        if frontier.is_empty() {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Matrix;

    #[test]
    fn words_are_distinct_and_ordered() {
        let words = enumerate_words::<i64>(2, 4);
        assert!(words[0].letters.is_empty());
        let mut set = HashSet::new();
        for w in &words {
            assert!(set.insert(w.element.clone()));
        }
        for pair in words.windows(2) {
            let (a, b) = (&pair[0].letters, &pair[1].letters);
            assert!(a.len() < b.len() || (a.len() == b.len() && a < b), "{a:?} {b:?}");
        }
        // Length-1 words are exactly the 4 generators.
        assert_eq!(words.iter().filter(|w| w.letters.len() == 1).count(), 4);
    }

    #[test]
    fn words_evaluate_to_their_elements() {
        let gens = elementary_generators::<i64>(3);
        for w in enumerate_words::<i64>(3, 2) {
            let prod = w.letters.iter().fold(Unimodular::identity(3), |acc, &g| acc.compose(&gens[g]));
            assert_eq!(prod, w.element);
        }
    }

    #[test]
    fn ball_of_radius_two_in_rank_two() {
        // Brute force over all 4^2 words, counting distinct products.
        let gens = elementary_generators::<i64>(2);
        let mut all = HashSet::new();
        all.insert(Matrix::identity(2));
        for a in &gens {
            all.insert(a.matrix().clone());
            for b in &gens {
                all.insert(a.compose(b).into_matrix());
            }
        }
        assert_eq!(enumerate_words::<i64>(2, 2).len(), all.len());
    }
}
