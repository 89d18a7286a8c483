//! Seeded random elements of `V_n`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::address::Address;
use super::element::VnElement;
use crate::error::Result;

/// Leaves of a tree grown by `expansions` random leaf splits, in lexicographic order.
pub fn random_tree<R: Rng>(n: u8, expansions: usize, rng: &mut R) -> Vec<Address> {
    let mut leaves = vec![Address::root()];
    for _ in 0..expansions {
        let i = rng.gen_range(0..leaves.len());
        let parent = leaves.remove(i);
        for d in (0..n).rev() {
            leaves.insert(i, parent.child(d));
        }
    }
    leaves
}

/// A random tree pair with up to `max_expansions` splits per tree and a uniform leaf bijection.
pub fn random_element<R: Rng>(n: u8, max_expansions: usize, rng: &mut R) -> Result<VnElement> {
    let e = rng.gen_range(0..=max_expansions);
    let dom = random_tree(n, e, rng);
    let mut ran = random_tree(n, e, rng);
    ran.shuffle(rng);
    VnElement::from_pairs(n, dom.into_iter().zip(ran).collect())
}

/// `count` random elements from a fixed seed.
pub fn random_elements(n: u8, count: usize, max_expansions: usize, seed: u64) -> Result<Vec<VnElement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_element(n, max_expansions, &mut rng)).collect()
}
