//! Decomposition building blocks shared by the construction families.
//!
//! All of the proofs' "decompose in a similar manner" families reduce to
//! two partition shapes, both produced here deterministically:
//!
//! * split a vertex pool into e-chunks none of which lies inside one
//!   forbidden set (the leaf sets of stars whose center already carries the
//!   dangerous colour), and
//! * split a pool into e-chunks none of which lies inside any single
//!   colour class (leaf sets safe for a center of arbitrary colour).
//!
//! Both use the same trick: lay the pool out in one sequence with the
//! classes contiguous (largest first), then deal it into `total/e` columns.
//! A column is an arithmetic progression with stride `total/e`, so it can
//! only stay within one class if that class occupies at least
//! `(e-1)·total/e + 1` consecutive positions, which is exactly the
//! infeasibility bound. The edge-partition checker gates every caller, so
//! a violation (impossible for feasible inputs) would surface immediately.

use crate::system::{Star, Vertex};

use super::ConstructionError;

/// Deals `seq` into `seq.len() / e` columns of `e`: column `j` takes
/// positions `j, j + m, j + 2m, ...`.
fn deal(seq: &[Vertex], e: usize) -> Vec<Vec<Vertex>> {
    assert_eq!(seq.len() % e, 0);
    let m = seq.len() / e;
    (0..m)
        .map(|j| (0..e).map(|r| seq[j + r * m]).collect())
        .collect()
}

/// Partitions `pool` into e-chunks such that no chunk lies entirely inside
/// `forbidden`. `pool` must have size divisible by `e`.
pub fn chunks_avoiding(
    pool: &[Vertex],
    forbidden: impl Fn(Vertex) -> bool,
    e: usize,
) -> Result<Vec<Vec<Vertex>>, ConstructionError> {
    if pool.len() % e != 0 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "pool of {} vertices is not a multiple of e = {e}",
            pool.len()
        )));
    }
    if pool.is_empty() {
        return Ok(Vec::new());
    }
    let mut seq: Vec<Vertex> = pool.iter().copied().filter(|&v| forbidden(v)).collect();
    let bad = seq.len();
    seq.extend(pool.iter().copied().filter(|&v| !forbidden(v)));
    let m = pool.len() / e;
    if bad > (e - 1) * m {
        return Err(ConstructionError::UnsupportedCase(format!(
            "{bad} forbidden vertices in a pool of {} cannot avoid a pure e-chunk",
            pool.len()
        )));
    }
    let chunks = deal(&seq, e);
    debug_assert!(chunks.iter().all(|c| c.iter().any(|&v| !forbidden(v))));
    Ok(chunks)
}

/// Partitions the union of `classes` into e-chunks such that no chunk lies
/// entirely inside a single class.
pub fn chunks_no_pure_class(
    classes: &[Vec<Vertex>],
    e: usize,
) -> Result<Vec<Vec<Vertex>>, ConstructionError> {
    let total: usize = classes.iter().map(|c| c.len()).sum();
    if total % e != 0 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "pool of {total} vertices is not a multiple of e = {e}"
        )));
    }
    if total == 0 {
        return Ok(Vec::new());
    }
    let m = total / e;
    let mut order: Vec<&Vec<Vertex>> = classes.iter().collect();
    order.sort_by(|a, b| b.len().cmp(&a.len()));
    if order[0].len() > (e - 1) * m {
        return Err(ConstructionError::UnsupportedCase(format!(
            "class of {} vertices in a pool of {total} cannot avoid a pure e-chunk",
            order[0].len()
        )));
    }
    let seq: Vec<Vertex> = order.iter().flat_map(|c| c.iter().copied()).collect();
    let chunks = deal(&seq, e);
    #[cfg(debug_assertions)]
    for chunk in &chunks {
        let all_in_one = classes
            .iter()
            .any(|class| chunk.iter().all(|v| class.contains(v)));
        debug_assert!(!all_in_one, "pure chunk {chunk:?}");
    }
    Ok(chunks)
}

/// Stars from one center covering each chunk.
pub fn stars_from(center: Vertex, chunks: &[Vec<Vertex>]) -> Vec<Star> {
    chunks
        .iter()
        .map(|leaves| Star::new(center, leaves.clone()))
        .collect()
}

/// The `{first e-1 of a} + {first of b}` / `{last of a} + {rest of b}`
/// split of two e-sets: both parts meet both sets, so a star over either
/// part is never monochromatic whatever its center's colour.
pub fn mixed_two_split(a: &[Vertex], b: &[Vertex]) -> (Vec<Vertex>, Vec<Vertex>) {
    let e = a.len();
    assert_eq!(b.len(), e);
    assert!(e >= 2);
    let mut first: Vec<Vertex> = a[..e - 1].to_vec();
    first.push(b[0]);
    let mut second: Vec<Vertex> = vec![a[e - 1]];
    second.extend_from_slice(&b[1..]);
    (first, second)
}

/// The order-2e strongly equitable 2-chromatic base system, relabelled so
/// its odd-position class becomes `half1` and its even-position class
/// `half2`. Each block of the base meets both classes, so the relabelled
/// blocks are proper for any colouring that separates the halves.
pub fn base_2e_system_on(half1: &[Vertex], half2: &[Vertex]) -> Vec<Star> {
    let e = half1.len();
    assert_eq!(half2.len(), e);
    let blocks = super::estar::base_2e_blocks(e as u32);
    let map = |v: Vertex| -> Vertex {
        let v = v as usize;
        if v % 2 == 1 {
            half1[(v - 1) / 2]
        } else {
            half2[v / 2 - 1]
        }
    };
    blocks
        .into_iter()
        .map(|(c, leaves)| Star::new(map(c), leaves.into_iter().map(map).collect()))
        .collect()
}

/// Decomposes the complete graph on the union of an even number of e-sets,
/// where each set is (or will be forced) monochromatic in its own colour:
/// consecutive sets are paired into order-2e base systems, and cross-pair
/// edges become stars over mixed two-splits, which are never monochromatic.
pub fn pairwise_internal_system(sets: &[Vec<Vertex>]) -> Result<Vec<Star>, ConstructionError> {
    if sets.len() % 2 != 0 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "pairwise internal decomposition needs an even number of sets, got {}",
            sets.len()
        )));
    }
    let mut out = Vec::new();
    let pairs: Vec<(&Vec<Vertex>, &Vec<Vertex>)> =
        sets.chunks_exact(2).map(|p| (&p[0], &p[1])).collect();
    for (a, b) in &pairs {
        out.extend(base_2e_system_on(a, b));
    }
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (ja, jb) = pairs[j];
            let (s1, s2) = mixed_two_split(ja, jb);
            for &c in pairs[i].0.iter().chain(pairs[i].1.iter()) {
                out.push(Star::new(c, s1.clone()));
                out.push(Star::new(c, s2.clone()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::StarSystem;
    use crate::verify::validate_decomposition;

    #[test]
    fn chunks_avoid_forbidden_sets() {
        // 6 forbidden out of 9, e = 3: bound is 2·3 = 6, just feasible.
        let pool: Vec<Vertex> = (1..=9).collect();
        let chunks = chunks_avoiding(&pool, |v| v <= 6, 3).unwrap();
        assert_eq!(chunks.len(), 3);
        for c in &chunks {
            assert!(c.iter().any(|&v| v > 6), "{c:?}");
        }
        let mut all: Vec<Vertex> = chunks.into_iter().flatten().collect();
        all.sort_unstable();
        assert_eq!(all, pool);
    }

    #[test]
    fn chunks_avoiding_rejects_overfull_forbidden() {
        let pool: Vec<Vertex> = (1..=9).collect();
        assert!(chunks_avoiding(&pool, |v| v <= 7, 3).is_err());
    }

    #[test]
    fn no_pure_class_chunks() {
        let classes = vec![vec![1, 2, 3, 4], vec![5, 6, 7], vec![8, 9]];
        let chunks = chunks_no_pure_class(&classes, 3).unwrap();
        assert_eq!(chunks.len(), 3);
        for chunk in &chunks {
            for class in &classes {
                assert!(!chunk.iter().all(|v| class.contains(v)), "{chunk:?}");
            }
        }
    }

    #[test]
    fn pairwise_internal_system_decomposes_the_union() {
        let sets = vec![
            vec![1, 2, 3],
            vec![4, 5, 6],
            vec![7, 8, 9],
            vec![10, 11, 12],
        ];
        let stars = pairwise_internal_system(&sets).unwrap();
        let mut sys = StarSystem::new(3, 12).unwrap();
        for s in &stars {
            sys.push_star(s).unwrap();
        }
        let r = validate_decomposition(&sys);
        assert!(r.ok, "{r:?}");
        // No star lies inside one set.
        for s in &stars {
            for set in &sets {
                let all = std::iter::once(s.center)
                    .chain(s.leaves.iter().copied())
                    .all(|v| set.contains(&v));
                assert!(!all);
            }
        }
    }
}
