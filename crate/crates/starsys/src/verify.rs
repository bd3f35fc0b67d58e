//! Exact verification of decompositions and colourings.
//!
//! The decomposition checker decides whether every unordered vertex pair of
//! `K_n` is covered by exactly one block. For small orders it keeps an exact
//! per-pair counter; above [`STREAMING_THRESHOLD`] it switches to a bitmap
//! plus an overflow map, which gives identical verdicts while staying at one
//! bit per pair. The reported problem lists are capped at
//! [`REPORT_EDGE_LIMIT`] entries so that verifying a badly broken
//! multi-million-block system cannot exhaust memory; the verdict itself is
//! always exact.

use std::collections::HashMap;

use crate::system::{Colouring, StarSystem, Vertex};

/// Orders above this use the streaming (bitmap) edge counter.
pub const STREAMING_THRESHOLD: u32 = 5000;

/// At most this many uncovered / multiply-covered edges are listed.
pub const REPORT_EDGE_LIMIT: usize = 10_000;

/// Outcome of an edge-partition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub ok: bool,
    /// Uncovered pairs `(u, v)` with `u < v`, capped at [`REPORT_EDGE_LIMIT`].
    pub uncovered_edges: Vec<(Vertex, Vertex)>,
    /// Pairs covered more than once, with their exact cover counts.
    pub multiply_covered_edges: Vec<((Vertex, Vertex), u64)>,
    pub uncovered_count: u64,
    pub multiply_covered_count: u64,
    pub block_count_expected: u64,
    pub block_count_actual: u64,
}

#[inline]
fn pair_index(u: Vertex, v: Vertex) -> usize {
    debug_assert!(u < v);
    let (u, v) = (u as u64, v as u64);
    ((v - 1) * (v - 2) / 2 + (u - 1)) as usize
}

fn pair_from_index(idx: usize) -> (Vertex, Vertex) {
    // Inverse of pair_index: find v with (v-1)(v-2)/2 <= idx.
    let idx = idx as u64;
    let mut v = (((8 * idx + 1) as f64).sqrt() as u64 + 3) / 2;
    while (v - 1) * (v - 2) / 2 > idx {
        v -= 1;
    }
    let u = idx - (v - 1) * (v - 2) / 2 + 1;
    (u as Vertex, v as Vertex)
}

/// Checks that the blocks of `sys` partition the edge set of `K_n`.
pub fn validate_decomposition(sys: &StarSystem) -> DecompositionReport {
    validate_decomposition_with_threshold(sys, STREAMING_THRESHOLD)
}

/// As [`validate_decomposition`], with an explicit streaming threshold
/// (exposed so both code paths can be differentially tested).
pub fn validate_decomposition_with_threshold(
    sys: &StarSystem,
    threshold: u32,
) -> DecompositionReport {
    let n = sys.n();
    let pair_count = (n as u64 * (n as u64 - 1) / 2) as usize;
    let mut uncovered_edges = Vec::new();
    let mut multiply_covered_edges = Vec::new();
    let mut uncovered_count = 0u64;
    let mut multiply_covered_count = 0u64;

    if n <= threshold {
        let mut counts = vec![0u8; pair_count];
        let mut overflow: HashMap<usize, u64> = HashMap::new();
        for b in sys.blocks() {
            let c = b.center();
            for &l in b.leaves() {
                let idx = pair_index(c.min(l), c.max(l));
                if counts[idx] == u8::MAX {
                    *overflow.entry(idx).or_insert(u8::MAX as u64) += 1;
                } else {
                    counts[idx] += 1;
                }
            }
        }
        for (idx, &c) in counts.iter().enumerate() {
            let total = overflow.get(&idx).copied().unwrap_or(c as u64);
            if total == 0 {
                uncovered_count += 1;
                if uncovered_edges.len() < REPORT_EDGE_LIMIT {
                    uncovered_edges.push(pair_from_index(idx));
                }
            } else if total > 1 {
                multiply_covered_count += 1;
                if multiply_covered_edges.len() < REPORT_EDGE_LIMIT {
                    multiply_covered_edges.push((pair_from_index(idx), total));
                }
            }
        }
    } else {
        // Pass 1: bitmap of seen pairs; duplicates spill into a map.
        let mut seen = vec![0u64; pair_count.div_ceil(64)];
        let mut dup: HashMap<usize, u64> = HashMap::new();
        for b in sys.blocks() {
            let c = b.center();
            for &l in b.leaves() {
                let idx = pair_index(c.min(l), c.max(l));
                let (w, bit) = (idx / 64, 1u64 << (idx % 64));
                if seen[w] & bit != 0 {
                    *dup.entry(idx).or_insert(1) += 1;
                } else {
                    seen[w] |= bit;
                }
            }
        }
        // Pass 2: uncovered pairs are the zero bits.
        for (w, &word) in seen.iter().enumerate() {
            if word == u64::MAX {
                continue;
            }
            let base = w * 64;
            for bit in 0..64 {
                let idx = base + bit;
                if idx >= pair_count {
                    break;
                }
                if word & (1u64 << bit) == 0 {
                    uncovered_count += 1;
                    if uncovered_edges.len() < REPORT_EDGE_LIMIT {
                        uncovered_edges.push(pair_from_index(idx));
                    }
                }
            }
        }
        let mut dups: Vec<(usize, u64)> = dup.into_iter().collect();
        dups.sort_unstable();
        multiply_covered_count = dups.len() as u64;
        for (idx, count) in dups.into_iter().take(REPORT_EDGE_LIMIT) {
            multiply_covered_edges.push((pair_from_index(idx), count));
        }
    }

    let block_count_expected = sys.expected_block_count();
    let block_count_actual = sys.block_count() as u64;
    DecompositionReport {
        ok: uncovered_count == 0
            && multiply_covered_count == 0
            && block_count_expected == block_count_actual,
        uncovered_edges,
        multiply_covered_edges,
        uncovered_count,
        multiply_covered_count,
        block_count_expected,
        block_count_actual,
    }
}

/// Outcome of a colouring check against a star system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringReport {
    /// No block is monochromatic.
    pub proper: bool,
    /// Indices of monochromatic blocks, capped at [`REPORT_EDGE_LIMIT`].
    pub monochromatic_blocks: Vec<usize>,
    pub monochromatic_count: u64,
    pub class_sizes: Vec<u64>,
    /// Class sizes differ by at most one.
    pub equitable: bool,
    /// All class sizes equal.
    pub strongly_equitable: bool,
    /// All `k` classes are nonempty.
    pub uses_all_classes: bool,
}

/// Checks a total colouring against every block of the system.
///
/// Panics if the colouring does not cover exactly `1..=n`.
pub fn check_colouring(sys: &StarSystem, col: &Colouring) -> ColouringReport {
    assert_eq!(
        col.n(),
        sys.n(),
        "colouring covers {} vertices, system has order {}",
        col.n(),
        sys.n()
    );
    let mut monochromatic_blocks = Vec::new();
    let mut monochromatic_count = 0u64;
    for (i, b) in sys.blocks().enumerate() {
        let c = col.class_of(b.center());
        if b.leaves().iter().all(|&l| col.class_of(l) == c) {
            monochromatic_count += 1;
            if monochromatic_blocks.len() < REPORT_EDGE_LIMIT {
                monochromatic_blocks.push(i);
            }
        }
    }
    let class_sizes = col.class_sizes();
    let max = class_sizes.iter().copied().max().unwrap_or(0);
    let min = class_sizes.iter().copied().min().unwrap_or(0);
    ColouringReport {
        proper: monochromatic_count == 0,
        monochromatic_blocks,
        monochromatic_count,
        equitable: max - min <= 1,
        strongly_equitable: max == min,
        uses_all_classes: min > 0 || class_sizes.is_empty(),
        class_sizes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::s3_6;

    fn s4_8() -> StarSystem {
        let mut s = StarSystem::new(4, 8).unwrap();
        for (c, ls) in [
            (1, [3, 5, 6, 8]),
            (2, [1, 3, 6, 8]),
            (4, [1, 2, 3, 8]),
            (5, [2, 3, 4, 7]),
            (6, [3, 4, 5, 7]),
            (7, [1, 2, 3, 4]),
            (8, [3, 5, 6, 7]),
        ] {
            s.push_block(c, &ls).unwrap();
        }
        s
    }

    #[test]
    fn base_3_star_system_of_order_six_is_a_decomposition() {
        let s = s3_6();
        let r = validate_decomposition(&s);
        assert!(r.ok, "{r:?}");
        assert_eq!(r.block_count_actual, 5);
        assert_eq!(r.block_count_expected, 5);
        assert_eq!(r.uncovered_count, 0);
    }

    #[test]
    fn order_eight_4_star_system_is_a_decomposition() {
        let r = validate_decomposition(&s4_8());
        assert!(r.ok, "{r:?}");
        assert_eq!(r.block_count_actual, 7);
    }

    #[test]
    fn deleting_a_block_uncovers_exactly_its_edges() {
        let s = s3_6();
        let mut broken = StarSystem::new(3, 6).unwrap();
        for b in s.blocks().filter(|b| b.center() != 6) {
            broken.push_star(&b.to_star()).unwrap();
        }
        let r = validate_decomposition(&broken);
        assert!(!r.ok);
        assert_eq!(r.uncovered_edges, vec![(3, 6), (4, 6), (5, 6)]);
        assert_eq!(r.multiply_covered_count, 0);
    }

    #[test]
    fn duplicated_block_is_reported_as_multiply_covered() {
        let mut s = s3_6();
        s.push_block(1, &[3, 5, 6]).unwrap();
        let r = validate_decomposition(&s);
        assert!(!r.ok);
        assert_eq!(r.uncovered_count, 0);
        assert_eq!(
            r.multiply_covered_edges,
            vec![((1, 3), 2), ((1, 5), 2), ((1, 6), 2)]
        );
    }

    #[test]
    fn streaming_and_counting_paths_agree() {
        let cases = [s3_6(), s4_8()];
        for s in &cases {
            let exact = validate_decomposition_with_threshold(s, u32::MAX);
            let stream = validate_decomposition_with_threshold(s, 0);
            assert_eq!(exact.ok, stream.ok);
            assert_eq!(exact.uncovered_edges, stream.uncovered_edges);
            assert_eq!(exact.multiply_covered_edges, stream.multiply_covered_edges);
        }
        // Also on a broken system.
        let mut broken = s3_6();
        broken.push_block(2, &[4, 5, 6]).unwrap();
        let exact = validate_decomposition_with_threshold(&broken, u32::MAX);
        let stream = validate_decomposition_with_threshold(&broken, 0);
        assert_eq!(exact.ok, stream.ok);
        assert_eq!(exact.multiply_covered_edges, stream.multiply_covered_edges);
    }

    #[test]
    fn validity_is_invariant_under_relabelling() {
        let s = s3_6();
        let swap12: Vec<Vertex> = vec![2, 1, 3, 4, 5, 6];
        assert!(validate_decomposition(&s.relabel(&swap12).unwrap()).ok);
        let rot: Vec<Vertex> = vec![2, 3, 4, 5, 6, 1];
        assert!(validate_decomposition(&s.relabel(&rot).unwrap()).ok);
    }

    #[test]
    fn paper_colouring_of_the_base_system_is_proper_and_equitable() {
        let s = s3_6();
        let col = Colouring::from_classes(6, &[vec![1, 3, 5], vec![2, 4, 6]]).unwrap();
        let r = check_colouring(&s, &col);
        assert!(r.proper);
        assert!(r.equitable);
        assert!(r.strongly_equitable);
        assert_eq!(r.class_sizes, vec![3, 3]);
    }

    #[test]
    fn one_class_makes_every_block_monochromatic() {
        let s = s3_6();
        let col = Colouring::new(1, vec![1; 6]).unwrap();
        let r = check_colouring(&s, &col);
        assert!(!r.proper);
        assert_eq!(r.monochromatic_count, 5);
        assert_eq!(r.monochromatic_blocks, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn five_one_split_scanned_by_hand() {
        // Classes {1,2,3,4,5} and {6}: the only candidate monochromatic
        // blocks are those avoiding vertex 6 entirely: {4;1,2,3} and
        // {5;2,3,4}. Both lie inside class 1, so the colouring is improper.
        let s = s3_6();
        let col = Colouring::from_classes(6, &[vec![1, 2, 3, 4, 5], vec![6]]).unwrap();
        let r = check_colouring(&s, &col);
        assert!(!r.proper);
        assert_eq!(r.monochromatic_blocks, vec![2, 3]);
        assert_eq!(r.class_sizes, vec![5, 1]);
        assert!(!r.equitable);
    }

    #[test]
    fn properness_is_invariant_under_class_permutation() {
        let s = s3_6();
        let col = Colouring::from_classes(6, &[vec![1, 3, 5], vec![2, 4, 6]]).unwrap();
        let swapped = Colouring::from_classes(6, &[vec![2, 4, 6], vec![1, 3, 5]]).unwrap();
        assert_eq!(
            check_colouring(&s, &col).proper,
            check_colouring(&s, &swapped).proper
        );
    }

    #[test]
    fn edge_count_identity_for_valid_systems() {
        let s = s3_6();
        assert_eq!(
            s.e() as u64 * s.block_count() as u64,
            s.n() as u64 * (s.n() as u64 - 1) / 2
        );
    }

    #[test]
    fn pair_index_roundtrip() {
        let mut idx = 0;
        for v in 2..=60u32 {
            for u in 1..v {
                assert_eq!(pair_index(u, v), idx);
                assert_eq!(pair_from_index(idx), (u, v));
                idx += 1;
            }
        }
    }
}
