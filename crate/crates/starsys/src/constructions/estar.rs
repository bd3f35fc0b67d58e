//! e-star constructions: the order-2e strongly equitable 2-chromatic base,
//! order extensions preserving the chromatic number on the residues
//! 0,1 (mod 2e), and the chromatic lift from k-1 to k colours.

use crate::baranyai::{binomial, partition_all_subsets};
use crate::system::{is_admissible, Colouring, StarSystem, Vertex};

use super::helpers::{base_2e_system_on, chunks_avoiding, chunks_no_pure_class, stars_from};
use super::{finalize, Claims, ConstructionError, ConstructionResult, Provenance};

/// Block listing of the order-2e base system on `[1, 2e]`, grown
/// iteratively from the order-six 3-star system: at each step every block
/// gains one leaf (the blocks with low centers take the new even vertex,
/// the rest the new odd one) and two closing blocks are appended. Every
/// vertex except 3 is the center of exactly one block, which is what lets
/// the step extend each existing block uniquely.
pub(super) fn base_2e_blocks(e: u32) -> Vec<(Vertex, Vec<Vertex>)> {
    assert!(e >= 3);
    let mut blocks: Vec<(Vertex, Vec<Vertex>)> = vec![
        (1, vec![3, 5, 6]),
        (2, vec![1, 3, 6]),
        (4, vec![1, 2, 3]),
        (5, vec![2, 3, 4]),
        (6, vec![3, 4, 5]),
    ];
    for cur in 3..e {
        for (center, leaves) in blocks.iter_mut() {
            if *center <= cur + 1 {
                leaves.push(2 * cur + 2);
            } else {
                leaves.push(2 * cur + 1);
            }
        }
        blocks.push((2 * cur + 1, (1..=cur + 1).collect()));
        let mut last = vec![3];
        last.extend(cur + 2..=2 * cur);
        last.push(2 * cur + 1);
        blocks.push((2 * cur + 2, last));
    }
    blocks
}

fn odd_even_colouring(n: u32) -> Colouring {
    let assign = (1..=n).map(|v| if v % 2 == 1 { 1 } else { 2 }).collect();
    Colouring::new(2, assign).expect("classes within 1..=2")
}

/// Builds the strongly equitable 2-chromatic e-star system of order 2e,
/// coloured by vertex parity.
pub fn build_2chromatic_estar(e: u32) -> Result<ConstructionResult, ConstructionError> {
    if e < 3 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "e-star base needs e >= 3, got {e}"
        )));
    }
    let mut sys = StarSystem::new(e, 2 * e)?;
    for (c, leaves) in base_2e_blocks(e) {
        sys.push_block(c, &leaves)?;
    }
    let colouring = odd_even_colouring(2 * e);
    finalize(
        sys,
        colouring,
        Claims {
            k: 2,
            equitable: true,
            strongly_equitable: true,
            unique: false,
            provenance: Provenance::new("3.1", &[("e", e as u64)]),
        },
    )
}

pub(super) struct GrowState {
    pub e: u32,
    pub n: u32,
    pub k: u32,
    pub blocks: Vec<(Vertex, Vec<Vertex>)>,
    pub assign: Vec<u32>,
}

impl GrowState {
    pub fn from_result(base: &ConstructionResult) -> Self {
        GrowState {
            e: base.system.e(),
            n: base.system.n(),
            k: base.claims.k,
            blocks: base
                .system
                .blocks()
                .map(|b| (b.center(), b.leaves().to_vec()))
                .collect(),
            assign: base.colouring.assignments().to_vec(),
        }
    }

    /// The class new vertices join: the smallest one (ties towards the
    /// highest index), keeping leaf chunks feasible over long chains.
    pub fn receiving_class(&self) -> u32 {
        let mut sizes = vec![0u64; self.k as usize + 1];
        for &c in &self.assign {
            sizes[c as usize] += 1;
        }
        (1..=self.k).rev().min_by_key(|&c| sizes[c as usize]).unwrap()
    }

    pub fn class_members(&self, class: u32) -> Vec<Vertex> {
        (1..=self.n)
            .filter(|&v| self.assign[v as usize - 1] == class)
            .collect()
    }

    pub fn into_parts(self) -> Result<(StarSystem, Colouring), ConstructionError> {
        let mut sys = StarSystem::with_capacity(self.e, self.n, self.blocks.len())?;
        for (c, leaves) in &self.blocks {
            sys.push_block(*c, leaves)?;
        }
        let col = Colouring::new(self.k, self.assign)
            .map_err(|err| ConstructionError::SelfCheckFailed(err.to_string()))?;
        Ok((sys, col))
    }

    /// Adds one vertex to the receiving class; its stars cover the old
    /// vertex set in e-chunks that avoid that class.
    pub fn step_plus_one(&mut self) -> Result<(), ConstructionError> {
        let e = self.e as usize;
        let nu = self.n + 1;
        let top = self.receiving_class();
        let pool: Vec<Vertex> = (1..=self.n).collect();
        let chunks = chunks_avoiding(&pool, |v| self.assign[v as usize - 1] == top, e)?;
        for star in stars_from(nu, &chunks) {
            self.blocks.push((star.center, star.leaves));
        }
        self.assign.push(top);
        self.n += 1;
        Ok(())
    }

    /// Glues a fresh order-2e base block onto the whole vertex set; the new
    /// halves join classes 1 and 2.
    pub fn step_plus_2e(&mut self) -> Result<(), ConstructionError> {
        let e = self.e;
        let n = self.n;
        let half1: Vec<Vertex> = (1..=e).map(|i| n + 2 * i - 1).collect();
        let half2: Vec<Vertex> = (1..=e).map(|i| n + 2 * i).collect();
        for star in base_2e_system_on(&half1, &half2) {
            self.blocks.push((star.center, star.leaves));
        }
        let first: Vec<Vertex> = (n + 1..=n + e).collect();
        let second: Vec<Vertex> = (n + e + 1..=n + 2 * e).collect();
        for v in 1..=n {
            self.blocks.push((v, first.clone()));
            self.blocks.push((v, second.clone()));
        }
        for v in n + 1..=n + 2 * e {
            self.assign.push(if (v - n) % 2 == 1 { 1 } else { 2 });
        }
        self.n += 2 * e;
        Ok(())
    }

    /// From an order ≡ 1 (mod 2e): adds 2e-1 vertices by gluing an
    /// order-2e base block through a pivot vertex `v0` of the old system.
    pub fn step_plus_2e_minus_one(&mut self) -> Result<(), ConstructionError> {
        let e = self.e;
        let eu = e as usize;
        let n = self.n;
        let top = self.receiving_class();
        // A second class, distinct from the receiving one, for the other
        // half of the glued block.
        let other = {
            let mut sizes = vec![0u64; self.k as usize + 1];
            for &c in &self.assign {
                sizes[c as usize] += 1;
            }
            (1..=self.k)
                .rev()
                .filter(|&c| c != top)
                .min_by_key(|&c| sizes[c as usize])
                .expect("k >= 2")
        };
        let v0 = (1..=n)
            .rev()
            .find(|&v| self.assign[v as usize - 1] != top)
            .ok_or_else(|| {
                ConstructionError::UnsupportedCase(
                    "no vertex outside the top class to serve as pivot".into(),
                )
            })?;
        // New vertices n+1 .. n+2e-1. The order-2e block lives on
        // {v0} ∪ new; its first half is v0 plus the new vertices of the
        // second class, its second half the new vertices of the receiving
        // class.
        let v1: Vec<Vertex> = (n + 1..=n + e).collect();
        let v2: Vec<Vertex> = (n + e + 1..=n + 2 * e - 1).collect();
        let mut half1: Vec<Vertex> = vec![v0];
        half1.extend(&v1[1..]);
        let mut half2: Vec<Vertex> = vec![v1[0]];
        half2.extend(&v2);
        for star in base_2e_system_on(&half1, &half2) {
            self.blocks.push((star.center, star.leaves));
        }
        for v in 1..=n {
            if v != v0 {
                self.blocks.push((v, v1.clone()));
            }
        }
        let pool: Vec<Vertex> = (1..=n).filter(|&v| v != v0).collect();
        let chunks = chunks_avoiding(&pool, |v| self.assign[v as usize - 1] == top, eu)?;
        for &nu in &v2 {
            for star in stars_from(nu, &chunks) {
                self.blocks.push((star.center, star.leaves));
            }
        }
        // Colours: v1[0] and all of v2 join the receiving class, the rest
        // of v1 the second class.
        self.assign.push(top);
        for _ in &v1[1..] {
            self.assign.push(other);
        }
        for _ in &v2 {
            self.assign.push(top);
        }
        self.n += 2 * e - 1;
        Ok(())
    }
}

/// Extends a k-chromatic e-star system to every larger order on the
/// residues 0,1 (mod 2e), preserving the chromatic number: the base's
/// blocks are carried unchanged, new vertices are coloured with the top
/// class, and their stars avoid monochromatic leaf sets by construction.
///
/// The class-split parameter `ell` is validated against the claimed k for
/// interface fidelity; the derived decomposition depends only on the top
/// colour class.
pub fn extend_kchromatic_estar(
    base: &ConstructionResult,
    ell: Option<u32>,
    target_n: u32,
) -> Result<ConstructionResult, ConstructionError> {
    let e = base.system.e();
    let k = base.claims.k;
    if let Some(l) = ell {
        if l < 1 || l >= k {
            return Err(ConstructionError::UnsupportedCase(format!(
                "class split {l} outside 1..{k}"
            )));
        }
    }
    let n0 = base.system.n();
    let twoe = 2 * e;
    if n0 % twoe > 1 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "base order {n0} is not 0 or 1 (mod {twoe})"
        )));
    }
    if target_n <= n0 || target_n % twoe > 1 || !is_admissible(e as u64, target_n as u64) {
        return Err(ConstructionError::InadmissibleOrder {
            e,
            n: target_n as u64,
        });
    }
    let mut state = GrowState::from_result(base);
    while state.n < target_n {
        if state.n % twoe == 0 {
            if state.n + 1 == target_n {
                state.step_plus_one()?;
            } else {
                state.step_plus_2e()?;
            }
        } else {
            state.step_plus_2e_minus_one()?;
        }
    }
    let (sys, col) = state.into_parts()?;
    let report = crate::verify::check_colouring(&sys, &col);
    finalize(
        sys,
        col,
        Claims {
            k,
            equitable: report.equitable,
            strongly_equitable: report.strongly_equitable,
            unique: false,
            provenance: Provenance::new(
                "3.2",
                &[
                    ("e", e as u64),
                    ("k", k as u64),
                    ("base_n", n0 as u64),
                    ("n", target_n as u64),
                ],
            ),
        },
    )
}

/// Splits the largest class of the base colouring in two and returns the
/// resulting k final classes (members in ascending id order), given the
/// base's k-1 classes. The split halves stay proper because refining a
/// proper colouring never creates a monochromatic block.
pub(super) fn split_classes(
    col: &Colouring,
    km1: u32,
) -> Result<Vec<Vec<Vertex>>, ConstructionError> {
    let mut classes: Vec<Vec<Vertex>> = (1..=km1).map(|c| col.class_members(c)).collect();
    classes.sort_by_key(|c| c.len());
    let largest = classes.pop().expect("at least one class");
    if largest.len() < 2 {
        return Err(ConstructionError::UnsupportedCase(
            "largest class has fewer than 2 vertices; nothing to split".into(),
        ));
    }
    let cut = largest.len().div_ceil(2);
    let (first, second) = largest.split_at(cut);
    classes.push(first.to_vec());
    classes.push(second.to_vec());
    Ok(classes)
}

/// Builds a k-chromatic e-star system from a (k-1)-chromatic one of order
/// ≡ 0 (mod 2e): disjoint copies of the base are glued to a gadget vertex
/// set whose e-subsets are spread over the copies by a Baranyai partition,
/// so that in any putative (k-1)-colouring some gadget e-subset is
/// monochromatic and meets a copy vertex of its own colour.
pub fn lift_estar_chromatic(
    base: &ConstructionResult,
    seed: u64,
) -> Result<ConstructionResult, ConstructionError> {
    let e = base.system.e();
    let eu = e as usize;
    let n0 = base.system.n();
    let km1 = base.claims.k;
    let k = km1 + 1;
    if km1 < 2 {
        return Err(ConstructionError::UnsupportedCase(
            "lift needs a base claiming at least 2 colours".into(),
        ));
    }
    if n0 % (2 * e) != 0 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "lift needs base order ≡ 0 (mod {}), got {n0}",
            2 * e
        )));
    }

    // Gadget: W of size (e-1)(k-1)+1, a spare set of size k-2, and e more
    // vertices when k-1 is odd so the gadget order is a multiple of 2e.
    let w_len = (e - 1) * (k - 1) + 1;
    let spare_len = k - 2;
    let extra_len = if (k - 1) % 2 == 1 { e } else { 0 };
    let v_len = w_len + spare_len + extra_len;
    debug_assert_eq!(v_len % (2 * e), 0);
    let w: Vec<Vertex> = (1..=w_len).collect();
    let spare: Vec<Vertex> = (w_len + 1..=w_len + spare_len).collect();
    let extra: Vec<Vertex> = (w_len + spare_len + 1..=v_len).collect();

    // Baranyai partition of the e-subsets of W. The class size from the
    // lift's arithmetic degenerates to 0 for small e and k; any feasible
    // uniform size preserves the pigeonhole argument, so fall back to the
    // largest one.
    let n_subsets = binomial(w_len as u64, e as u64);
    let a_formula = (k as i64 - 2) + (2 - k as i64).div_euclid(e as i64);
    let a_max = (w_len / e) as i64;
    let a = if a_formula >= 1 && a_formula <= a_max {
        a_formula as u64
    } else {
        a_max as u64
    };
    let q = n_subsets / a;
    let r = n_subsets % a;
    let mut sizes = vec![a as usize; q as usize];
    if r > 0 {
        sizes.push(r as usize);
    }
    let partition = partition_all_subsets(w_len, e, &sizes, seed)?;
    let ell = sizes.len() as u32;

    let n = v_len + ell * n0;
    let copy_offset = |i: u32| v_len + (i - 1) * n0; // i is 1-based
    let mut blocks: Vec<(Vertex, Vec<Vertex>)> = Vec::new();

    // Gadget-internal: a 2-chromatic e-star system of order v_len. Every
    // gadget colour class will have at most e vertices, so no block on the
    // gadget can be monochromatic no matter which system is used.
    let gadget = if v_len == 2 * e {
        build_2chromatic_estar(e)?
    } else {
        extend_kchromatic_estar(&build_2chromatic_estar(e)?, None, v_len)?
    };
    for b in gadget.system.blocks() {
        blocks.push((b.center(), b.leaves().to_vec()));
    }

    // Final classes on the base: split the largest of the k-1 classes.
    let final_classes = split_classes(&base.colouring, km1)?;
    let mix = chunks_no_pure_class(&final_classes, eu)?;

    let base_blocks: Vec<(Vertex, Vec<Vertex>)> = base
        .system
        .blocks()
        .map(|b| (b.center(), b.leaves().to_vec()))
        .collect();

    for i in 1..=ell {
        let off = copy_offset(i);
        // The embedded copy.
        for (c, leaves) in &base_blocks {
            blocks.push((c + off, leaves.iter().map(|&l| l + off).collect()));
        }
        // Stars from every copy vertex onto this class's W-subsets.
        let class = &partition.classes[i as usize - 1];
        for u in 1..=n0 {
            for subset in class {
                blocks.push((u + off, subset.clone()));
            }
        }
        // Gadget vertices not covered by this class reach the copy through
        // the mixed chunks.
        let covered: std::collections::HashSet<Vertex> =
            class.iter().flatten().copied().collect();
        for &g in w
            .iter()
            .filter(|v| !covered.contains(v))
            .chain(spare.iter())
            .chain(extra.iter())
        {
            for part in &mix {
                blocks.push((g, part.iter().map(|&l| l + off).collect()));
            }
        }
    }
    // Copy-to-copy edges: stars from the lower-indexed copy over the mixed
    // chunks of the higher one.
    for i in 1..=ell {
        for j in i + 1..=ell {
            let (off_i, off_j) = (copy_offset(i), copy_offset(j));
            for u in 1..=n0 {
                for part in &mix {
                    blocks.push((u + off_i, part.iter().map(|&l| l + off_j).collect()));
                }
            }
        }
    }

    // Colouring: W in chunks of e-1 per class plus one spare vertex each
    // for the first k-2 classes; class k-1 takes the next e-1 W-vertices
    // (and one extra vertex when present), class k the last W-vertex (and
    // the remaining extras). Copy vertices follow the split base classes.
    let mut assign = vec![0u32; n as usize];
    let em1 = (e - 1) as usize;
    for s in 0..(k - 2) as usize {
        for &v in &w[s * em1..(s + 1) * em1] {
            assign[v as usize - 1] = s as u32 + 1;
        }
        assign[spare[s] as usize - 1] = s as u32 + 1;
    }
    for &v in &w[(k - 2) as usize * em1..(k - 1) as usize * em1] {
        assign[v as usize - 1] = k - 1;
    }
    assign[w[w.len() - 1] as usize - 1] = k;
    if !extra.is_empty() {
        assign[extra[0] as usize - 1] = k - 1;
        for &v in &extra[1..] {
            assign[v as usize - 1] = k;
        }
    }
    for i in 1..=ell {
        let off = copy_offset(i);
        for (ci, class) in final_classes.iter().enumerate() {
            for &v in class {
                assign[(v + off) as usize - 1] = ci as u32 + 1;
            }
        }
    }

    let mut sys = StarSystem::with_capacity(e, n, blocks.len())?;
    for (c, leaves) in &blocks {
        sys.push_block(*c, leaves)?;
    }
    let col = Colouring::new(k, assign)
        .map_err(|err| ConstructionError::SelfCheckFailed(err.to_string()))?;
    let report = crate::verify::check_colouring(&sys, &col);
    finalize(
        sys,
        col,
        Claims {
            k,
            equitable: report.equitable,
            strongly_equitable: report.strongly_equitable,
            unique: false,
            provenance: Provenance::new(
                "3.3",
                &[
                    ("e", e as u64),
                    ("k", k as u64),
                    ("base_n", n0 as u64),
                    ("seed", seed),
                    ("copies", ell as u64),
                ],
            ),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::{chromatic_number, ChromaticOutcome, SearchBudget};
    use crate::verify::{check_colouring, validate_decomposition};

    #[test]
    fn order_2e_base_matches_the_listed_systems() {
        // e = 3: the order-six base.
        let r3 = build_2chromatic_estar(3).unwrap();
        let got: Vec<(Vertex, Vec<Vertex>)> = r3
            .system
            .blocks()
            .map(|b| (b.center(), b.leaves().to_vec()))
            .collect();
        assert_eq!(
            got,
            vec![
                (1, vec![3, 5, 6]),
                (2, vec![1, 3, 6]),
                (4, vec![1, 2, 3]),
                (5, vec![2, 3, 4]),
                (6, vec![3, 4, 5]),
            ]
        );
        // e = 4: the listed order-eight system, block for block.
        let r4 = build_2chromatic_estar(4).unwrap();
        let got: Vec<(Vertex, Vec<Vertex>)> = r4
            .system
            .blocks()
            .map(|b| (b.center(), b.leaves().to_vec()))
            .collect();
        assert_eq!(
            got,
            vec![
                (1, vec![3, 5, 6, 8]),
                (2, vec![1, 3, 6, 8]),
                (4, vec![1, 2, 3, 8]),
                (5, vec![2, 3, 4, 7]),
                (6, vec![3, 4, 5, 7]),
                (7, vec![1, 2, 3, 4]),
                (8, vec![3, 5, 6, 7]),
            ]
        );
    }

    #[test]
    fn base_sweep_is_valid_and_strongly_equitable() {
        for e in 3..=8 {
            let r = build_2chromatic_estar(e).unwrap();
            assert_eq!(r.system.n(), 2 * e);
            assert!(validate_decomposition(&r.system).ok);
            let c = check_colouring(&r.system, &r.colouring);
            assert!(c.proper && c.strongly_equitable, "e={e}");
        }
        // Block count for e = 6: 12·11/12 = 11.
        let r6 = build_2chromatic_estar(6).unwrap();
        assert_eq!(r6.system.block_count(), 11);
        assert_eq!(r6.colouring.class_sizes(), vec![6, 6]);
    }

    #[test]
    fn extension_reaches_both_residues() {
        let base = build_2chromatic_estar(4).unwrap();
        for target in [9u32, 16, 17, 24] {
            let ext = extend_kchromatic_estar(&base, None, target).unwrap();
            assert_eq!(ext.system.n(), target);
            assert!(validate_decomposition(&ext.system).ok, "target={target}");
            // Base blocks are preserved.
            let blocks: std::collections::HashSet<(Vertex, Vec<Vertex>)> = ext
                .system
                .blocks()
                .map(|b| (b.center(), b.leaves().to_vec()))
                .collect();
            for b in base.system.blocks() {
                assert!(blocks.contains(&(b.center(), b.leaves().to_vec())));
            }
        }
    }

    #[test]
    fn extension_rejects_bad_targets() {
        let base = build_2chromatic_estar(4).unwrap();
        assert!(matches!(
            extend_kchromatic_estar(&base, None, 10),
            Err(ConstructionError::InadmissibleOrder { .. })
        ));
        assert!(matches!(
            extend_kchromatic_estar(&base, None, 8),
            Err(ConstructionError::InadmissibleOrder { .. })
        ));
    }

    #[test]
    fn extension_stays_2_chromatic() {
        let base = build_2chromatic_estar(4).unwrap();
        let ext = extend_kchromatic_estar(&base, None, 16).unwrap();
        match chromatic_number(&ext.system, SearchBudget::with_nodes(5_000_000)) {
            ChromaticOutcome::Determined(cert) => assert_eq!(cert.chi, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lift_produces_a_valid_3_chromatic_candidate() {
        let base = build_2chromatic_estar(3).unwrap();
        let lifted = lift_estar_chromatic(&base, 0).unwrap();
        // Gadget of order 6 plus 10 copies of order 6.
        assert_eq!(lifted.system.n(), 66);
        assert_eq!(lifted.claims.k, 3);
        assert!(validate_decomposition(&lifted.system).ok);
        assert!(check_colouring(&lifted.system, &lifted.colouring).proper);
        assert_eq!(lifted.colouring.nonempty_class_count(), 3);
    }
}
