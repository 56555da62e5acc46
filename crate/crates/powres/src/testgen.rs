//! Deterministic generator of random square-free pd-one instances, used by
//! the test suite. Three constructive families, one per `q`, each built so
//! that a supporting tree provably exists:
//!
//! * `q = 1`: two incomparable square-free monomials (any edge works);
//! * `q = 2`: a path `m_0 - m_1 - m_2` where the middle variable set splits
//!   into halves shared with each neighbor, so `m_1 | lcm(m_0, m_2)`;
//! * `q = 3`: complement ideals `m_v = c * prod_{u != v} z_u` over four
//!   blocks of variables, where every vertex divides every pairwise lcm and
//!   hence every spanning tree is valid.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::monomial::{Monomial, MonomialIdeal, Ring};

/// A generated instance: the ideal plus the largest power worth testing at
/// desk scale.
#[derive(Debug, Clone)]
pub struct TestInstance {
    pub name: String,
    pub ideal: MonomialIdeal,
    pub r_max: u32,
}

fn monomial_from_vars(n: usize, vars: &[usize]) -> Monomial {
    let mut e = vec![0u32; n];
    for &v in vars {
        e[v] = 1;
    }
    Monomial::new(e)
}

fn ring(n: usize) -> Ring {
    Ring::new((0..n).map(|i| format!("x{i}")).collect())
}

fn q1_instance(rng: &mut ChaCha8Rng, idx: usize) -> TestInstance {
    // Disjoint nonempty private blocks plus an optional shared block keep
    // the two generators incomparable.
    let shared = rng.gen_range(0..=2usize);
    let p0 = rng.gen_range(1..=2usize);
    let p1 = rng.gen_range(1..=2usize);
    let n = shared + p0 + p1;
    let a: Vec<usize> = (0..shared + p0).collect();
    let b: Vec<usize> = (0..shared).chain(shared + p0..n).collect();
    let ideal = MonomialIdeal::new(
        ring(n),
        vec![monomial_from_vars(n, &a), monomial_from_vars(n, &b)],
    )
    .expect("incomparable by construction");
    TestInstance {
        name: format!("q1-{idx}"),
        ideal,
        r_max: 4,
    }
}

fn q2_instance(rng: &mut ChaCha8Rng, idx: usize) -> TestInstance {
    // Middle generator A u B; neighbors A u P0 and B u P2 with nonempty
    // private blocks. The path through the middle satisfies the
    // divisibility criterion, and private blocks force incomparability.
    let a = rng.gen_range(1..=2usize);
    let b = rng.gen_range(1..=2usize);
    let p0 = rng.gen_range(1..=2usize);
    let p2 = rng.gen_range(1..=2usize);
    let n = a + b + p0 + p2;
    let block_a: Vec<usize> = (0..a).collect();
    let block_b: Vec<usize> = (a..a + b).collect();
    let block_p0: Vec<usize> = (a + b..a + b + p0).collect();
    let block_p2: Vec<usize> = (a + b + p0..n).collect();
    let m0 = [block_a.clone(), block_p0].concat();
    let m1 = [block_a, block_b.clone()].concat();
    let m2 = [block_b, block_p2].concat();
    let ideal = MonomialIdeal::new(
        ring(n),
        vec![
            monomial_from_vars(n, &m0),
            monomial_from_vars(n, &m1),
            monomial_from_vars(n, &m2),
        ],
    )
    .expect("pairwise incomparable by construction");
    TestInstance {
        name: format!("q2-{idx}"),
        ideal,
        r_max: 3,
    }
}

fn q3_instance(rng: &mut ChaCha8Rng, idx: usize) -> TestInstance {
    // Four variable blocks z_0..z_3 of random width, plus an optional
    // common block c; m_v = c * prod_{u != v} z_u.
    let widths: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=2usize)).collect();
    let common = rng.gen_range(0..=1usize);
    let n: usize = widths.iter().sum::<usize>() + common;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for w in &widths {
        blocks.push((next..next + w).collect());
        next += w;
    }
    let common_block: Vec<usize> = (next..n).collect();
    let gens = (0..4)
        .map(|v| {
            let mut vars = common_block.clone();
            for (u, blk) in blocks.iter().enumerate() {
                if u != v {
                    vars.extend(blk);
                }
            }
            monomial_from_vars(n, &vars)
        })
        .collect();
    let ideal = MonomialIdeal::new(ring(n), gens).expect("complement ideals are antichains");
    TestInstance {
        name: format!("q3-{idx}"),
        ideal,
        r_max: 2,
    }
}

/// The fixed instance corpus: 12 + 8 + 6 = 26 instances from a pinned seed.
pub fn instance_corpus() -> Vec<TestInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9d1c_e5a2);
    let mut out = Vec::with_capacity(26);
    for i in 0..12 {
        out.push(q1_instance(&mut rng, i));
    }
    for i in 0..8 {
        out.push(q2_instance(&mut rng, i));
    }
    for i in 0..6 {
        out.push(q3_instance(&mut rng, i));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{build_support_tree, validate_support};

    #[test]
    fn corpus_is_deterministic() {
        let a = instance_corpus();
        let b = instance_corpus();
        assert_eq!(a.len(), 26);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.ideal, y.ideal);
        }
    }

    #[test]
    fn every_instance_has_a_supporting_tree() {
        for inst in instance_corpus() {
            let tree = build_support_tree(&inst.ideal)
                .unwrap_or_else(|e| panic!("{}: {e}", inst.name));
            let report = validate_support(&tree, &inst.ideal).unwrap();
            assert!(report.supports_minimal_resolution(), "{}", inst.name);
        }
    }

    #[test]
    fn instances_are_squarefree_antichains() {
        for inst in instance_corpus() {
            assert!(inst.ideal.is_squarefree(), "{}", inst.name);
            assert!(inst.ideal.q() < inst.ideal.ring().n(), "{}", inst.name);
        }
    }
}
