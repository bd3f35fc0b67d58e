//! Uniquely colourable constructions: the 2-colour gadget system, its
//! order extensions, the copy-product lift to k colours, the k-colour
//! uniqueness gadget, and its order extensions.
//!
//! The uniqueness mechanism is always the same forcing chain: a family of
//! stars pins each colour to exactly e designated anchor vertices, further
//! star families transfer those anchors' colours to every other gadget
//! set, and finally to every vertex of every embedded copy. The attached
//! colouring is therefore reachable from the anchors by the forcing rule
//! alone, with no search.

use std::collections::BTreeSet;

use crate::baranyai::{all_e_subset_masks, pack_family_into_disjoint_classes};
use crate::system::{Colouring, StarSystem, Vertex};

use super::estar::GrowState;
use super::helpers::{
    base_2e_system_on, chunks_avoiding, chunks_no_pure_class, pairwise_internal_system,
};
use super::{finalize, Claims, ConstructionError, ConstructionResult, Provenance};

fn consecutive(start: Vertex, len: u32) -> Vec<Vertex> {
    (start..start + len).collect()
}

/// Builds the strongly equitable uniquely 2-chromatic e-star system of
/// order `10e + (C(2e,e) - 2)·2e`.
///
/// Five gadget blocks of 2e vertices each (A, F, G, H, K, in id order)
/// come first, then one copy of the order-2e base system per non-canonical
/// e-subset of A. Stars from copy vertices over those e-subsets force each
/// colour onto exactly e vertices of A, and chains of anchored stars
/// propagate the two colours to every other vertex.
pub fn build_unique_2chromatic_estar(e: u32) -> Result<ConstructionResult, ConstructionError> {
    if e < 3 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "uniqueness gadget needs e >= 3, got {e}"
        )));
    }
    let eu = e as usize;
    let half = |block: u32, side: u32| consecutive(2 * e * block + e * side + 1, e);
    let (a1, a2) = (half(0, 0), half(0, 1));
    let (f1, f2) = (half(1, 0), half(1, 1));
    let (g1, g2) = (half(2, 0), half(2, 1));
    let (h1, h2) = (half(3, 0), half(3, 1));
    let (k1, k2) = (half(4, 0), half(4, 1));

    // Non-canonical e-subsets of A = [1, 2e], in lexicographic order.
    let canon1: u64 = a1.iter().fold(0, |m, &v| m | 1 << (v - 1));
    let canon2: u64 = a2.iter().fold(0, |m, &v| m | 1 << (v - 1));
    let tees: Vec<Vec<Vertex>> = all_e_subset_masks(2 * e, e)
        .into_iter()
        .filter(|&m| m != canon1 && m != canon2)
        .map(|m| (0..64).filter(|&b| m & (1 << b) != 0).map(|b| b + 1).collect())
        .collect();
    let ell = tees.len() as u32;

    let n0 = 2 * e;
    let n = 10 * e + ell * n0;
    let copy_offset = |i: u32| 10 * e + (i - 1) * n0;

    let mut sys = StarSystem::with_capacity(e, n, (n as usize * (n as usize - 1)) / (2 * eu))?;
    let mut push = |c: Vertex, leaves: &[Vertex]| sys.push_block(c, leaves);

    // Gadget-internal systems, halves in agreement with the forced classes.
    for (x1, x2) in [(&a1, &a2), (&f1, &f2), (&g1, &g2), (&h1, &h2), (&k1, &k2)] {
        for s in base_2e_system_on(x1, x2) {
            push(s.center, &s.leaves)?;
        }
    }

    // Copies plus the A-forcing families.
    let base = super::estar::build_2chromatic_estar(e)?;
    let e1: Vec<Vertex> = consecutive(1, e); // mixed halves of the copy
    let e2: Vec<Vertex> = consecutive(e + 1, e);
    for (i, tee) in tees.iter().enumerate() {
        let off = copy_offset(i as u32 + 1);
        for b in base.system.blocks() {
            let leaves: Vec<Vertex> = b.leaves().iter().map(|&l| l + off).collect();
            push(b.center() + off, &leaves)?;
        }
        for u in 1..=n0 {
            push(u + off, tee)?;
        }
        let tee_set: BTreeSet<Vertex> = tee.iter().copied().collect();
        for w in (1..=2 * e).filter(|v| !tee_set.contains(v)) {
            let l1: Vec<Vertex> = e1.iter().map(|&l| l + off).collect();
            let l2: Vec<Vertex> = e2.iter().map(|&l| l + off).collect();
            push(w, &l1)?;
            push(w, &l2)?;
        }
    }

    // F is pinned by A, G by A, K by G, H by F and G.
    for i in 0..eu {
        push(f1[i], &a2)?;
        push(f2[i], &a1)?;
        push(g1[i], &a2)?;
        push(g2[i], &a1)?;
        push(k1[i], &g2)?;
        push(k2[i], &g1)?;
    }
    // H against F and G: one pure opposite-colour star plus three mixed.
    let trio = |own_f: &[Vertex], own_g: &[Vertex], other_g: &[Vertex]| {
        let mut s1: Vec<Vertex> = own_f[..eu - 1].to_vec();
        s1.push(other_g[0]);
        let mut s2: Vec<Vertex> = vec![own_f[eu - 1]];
        s2.extend_from_slice(&own_g[..eu - 2]);
        s2.push(other_g[1]);
        let mut s3: Vec<Vertex> = own_g[eu - 2..].to_vec();
        s3.extend_from_slice(&other_g[2..]);
        (s1, s2, s3)
    };
    for i in 0..eu {
        let (s1, s2, s3) = trio(&f1, &g1, &g2);
        push(h1[i], &f2)?;
        push(h1[i], &s1)?;
        push(h1[i], &s2)?;
        push(h1[i], &s3)?;
        let (s1, s2, s3) = trio(&f2, &g2, &g1);
        push(h2[i], &f1)?;
        push(h2[i], &s1)?;
        push(h2[i], &s2)?;
        push(h2[i], &s3)?;
    }

    // A to its own half's gadget remainder, anchored by opposite-colour
    // vertices so no star is monochromatic.
    let anchored = |pool: Vec<Vertex>, anchors: Vec<Vertex>| -> Vec<Vec<Vertex>> {
        debug_assert_eq!(pool.len(), anchors.len() * (eu - 1));
        pool.chunks(eu - 1)
            .zip(&anchors)
            .map(|(chunk, &anchor)| {
                let mut leaves = chunk.to_vec();
                leaves.push(anchor);
                leaves
            })
            .collect()
    };
    let m_anchors1 = vec![h2[0], h2[1], h2[2], k2[0], k2[1], k2[2]];
    let m_pool1: Vec<Vertex> = f1
        .iter()
        .chain(&g1)
        .chain(&h1)
        .chain(&h2)
        .chain(&k1)
        .chain(&k2)
        .copied()
        .filter(|v| !m_anchors1.contains(v))
        .collect();
    let m_anchors2 = vec![h1[0], h1[1], h1[2], k1[0], k1[1], k1[2]];
    let m_pool2: Vec<Vertex> = f2
        .iter()
        .chain(&g2)
        .chain(&h1)
        .chain(&h2)
        .chain(&k1)
        .chain(&k2)
        .copied()
        .filter(|v| !m_anchors2.contains(v))
        .collect();
    for i in 0..eu {
        for leaves in anchored(m_pool1.clone(), m_anchors1.clone()) {
            push(a1[i], &leaves)?;
        }
        for leaves in anchored(m_pool2.clone(), m_anchors2.clone()) {
            push(a2[i], &leaves)?;
        }
    }

    // K to the rest of F, G, H, likewise anchored.
    let k_anchors1 = vec![f2[0], f2[1], f2[2], h2[0], h2[1]];
    let k_pool1: Vec<Vertex> = g1
        .iter()
        .chain(&f1)
        .chain(&f2)
        .chain(&h1)
        .chain(&h2)
        .copied()
        .filter(|v| !k_anchors1.contains(v))
        .collect();
    let k_anchors2 = vec![f1[0], f1[1], f1[2], h1[0], h1[1]];
    let k_pool2: Vec<Vertex> = g2
        .iter()
        .chain(&f1)
        .chain(&f2)
        .chain(&h1)
        .chain(&h2)
        .copied()
        .filter(|v| !k_anchors2.contains(v))
        .collect();
    for i in 0..eu {
        for leaves in anchored(k_pool1.clone(), k_anchors1.clone()) {
            push(k1[i], &leaves)?;
        }
        for leaves in anchored(k_pool2.clone(), k_anchors2.clone()) {
            push(k2[i], &leaves)?;
        }
    }

    // F to G.
    for i in 0..eu {
        let mut s1: Vec<Vertex> = g1[..eu - 1].to_vec();
        s1.push(g2[0]);
        let mut s2: Vec<Vertex> = vec![g1[eu - 1]];
        s2.extend_from_slice(&g2[1..]);
        push(f1[i], &s1)?;
        push(f1[i], &s2)?;
        let mut s1: Vec<Vertex> = g2[..eu - 1].to_vec();
        s1.push(g1[0]);
        let mut s2: Vec<Vertex> = vec![g2[eu - 1]];
        s2.extend_from_slice(&g1[1..]);
        push(f2[i], &s1)?;
        push(f2[i], &s2)?;
    }

    // Copies to F, G (pinning every copy vertex), H and K.
    for i in 1..=ell {
        let off = copy_offset(i);
        for u in 1..=n0 {
            let u_abs = u + off;
            // Copy colour classes are the odd/even positions of the base.
            let (own_f, other_f, own_g, other_g, own_h, other_h, own_k, other_k) = if u % 2 == 1 {
                (&f1, &f2, &g1, &g2, &h1, &h2, &k1, &k2)
            } else {
                (&f2, &f1, &g2, &g1, &h2, &h1, &k2, &k1)
            };
            push(u_abs, other_f)?;
            let (s1, s2, s3) = trio(own_f, own_g, other_g);
            push(u_abs, &s1)?;
            push(u_abs, &s2)?;
            push(u_abs, &s3)?;
            let mut s1: Vec<Vertex> = own_h[..eu - 1].to_vec();
            s1.push(other_h[0]);
            let mut s2: Vec<Vertex> = vec![own_h[eu - 1]];
            s2.extend_from_slice(&other_h[1..]);
            push(u_abs, &s1)?;
            push(u_abs, &s2)?;
            let mut s1: Vec<Vertex> = own_k[..eu - 1].to_vec();
            s1.push(other_k[0]);
            let mut s2: Vec<Vertex> = vec![own_k[eu - 1]];
            s2.extend_from_slice(&other_k[1..]);
            push(u_abs, &s1)?;
            push(u_abs, &s2)?;
        }
    }

    // Copy-to-copy edges over the mixed halves.
    for i in 1..=ell {
        for j in i + 1..=ell {
            let (off_i, off_j) = (copy_offset(i), copy_offset(j));
            let l1: Vec<Vertex> = e1.iter().map(|&l| l + off_j).collect();
            let l2: Vec<Vertex> = e2.iter().map(|&l| l + off_j).collect();
            for u in 1..=n0 {
                push(u + off_i, &l1)?;
                push(u + off_i, &l2)?;
            }
        }
    }

    let mut assign = vec![0u32; n as usize];
    for &v in a1.iter().chain(&f1).chain(&g1).chain(&h1).chain(&k1) {
        assign[v as usize - 1] = 1;
    }
    for &v in a2.iter().chain(&f2).chain(&g2).chain(&h2).chain(&k2) {
        assign[v as usize - 1] = 2;
    }
    for i in 1..=ell {
        let off = copy_offset(i);
        for u in 1..=n0 {
            assign[(u + off) as usize - 1] = if u % 2 == 1 { 1 } else { 2 };
        }
    }
    let col = Colouring::new(2, assign)
        .map_err(|err| ConstructionError::SelfCheckFailed(err.to_string()))?;
    finalize(
        sys,
        col,
        Claims {
            k: 2,
            equitable: true,
            strongly_equitable: true,
            unique: true,
            provenance: Provenance::new("4.1", &[("e", e as u64), ("copies", ell as u64)]),
        },
    )
}

// ---------------------------------------------------------------------------
// Order extensions preserving unique k-colourability.
// ---------------------------------------------------------------------------

impl GrowState {
    /// Adds one vertex to a uniquely k-colourable system: one pure star
    /// into each class except the first pins the new vertex to colour 1;
    /// the rest of its edges avoid class-1-pure leaf sets.
    fn step_plus_one_unique(&mut self) -> Result<(), ConstructionError> {
        let e = self.e as usize;
        let nu = self.n + 1;
        let mut used: BTreeSet<Vertex> = BTreeSet::new();
        let mut anchor_blocks = Vec::new();
        for s in 2..=self.k {
            let members = self.class_members(s);
            if members.len() < e {
                return Err(ConstructionError::UnsupportedCase(format!(
                    "class {s} has fewer than e vertices to anchor against"
                )));
            }
            anchor_blocks.push(members[..e].to_vec());
            used.extend(&members[..e]);
        }
        let pool: Vec<Vertex> = (1..=self.n).filter(|v| !used.contains(v)).collect();
        let chunks = chunks_avoiding(&pool, |v| self.assign[v as usize - 1] == 1, e)?;
        for leaves in anchor_blocks.iter().chain(&chunks) {
            self.blocks.push((nu, leaves.clone()));
        }
        self.assign.push(1);
        self.n += 1;
        Ok(())
    }

    /// Adds 2e-1 vertices to a uniquely k-colourable system of order
    /// ≡ 1 (mod 2e): an order-2e base block glued through a pivot in class
    /// 1, with every new vertex pinned to its class by pure anchor stars.
    fn step_plus_2e_minus_one_unique(&mut self) -> Result<(), ConstructionError> {
        let e = self.e;
        let eu = e as usize;
        let n = self.n;
        let c1 = self.class_members(1);
        if c1.len() <= eu {
            return Err(ConstructionError::UnsupportedCase(
                "class 1 needs more than e vertices for the pivot".into(),
            ));
        }
        let v0 = c1[eu];
        // New vertices n+1 .. n+2e-1; even offsets join class 1, odd
        // offsets join class 2.
        let news1: Vec<Vertex> = (1..e).map(|i| n + 2 * i).collect();
        let news2: Vec<Vertex> = (1..=e).map(|i| n + 2 * i - 1).collect();
        let mut half1 = vec![v0];
        half1.extend(&news1);
        for s in base_2e_system_on(&half1, &news2) {
            self.blocks.push((s.center, s.leaves));
        }
        for (target, news) in [(1u32, &news1), (2u32, &news2)] {
            let mut used: BTreeSet<Vertex> = BTreeSet::new();
            used.insert(v0);
            let mut anchor_blocks = Vec::new();
            for s in (1..=self.k).filter(|&s| s != target) {
                let members: Vec<Vertex> = self
                    .class_members(s)
                    .into_iter()
                    .filter(|&v| v != v0)
                    .collect();
                if members.len() < eu {
                    return Err(ConstructionError::UnsupportedCase(format!(
                        "class {s} has fewer than e vertices to anchor against"
                    )));
                }
                anchor_blocks.push(members[..eu].to_vec());
                used.extend(&members[..eu]);
            }
            let pool: Vec<Vertex> = (1..=n).filter(|v| !used.contains(v)).collect();
            let chunks =
                chunks_avoiding(&pool, |v| self.assign[v as usize - 1] == target, eu)?;
            for &nu in news {
                for leaves in anchor_blocks.iter().chain(&chunks) {
                    self.blocks.push((nu, leaves.clone()));
                }
            }
        }
        for v in n + 1..=n + 2 * e - 1 {
            self.assign.push(if (v - n) % 2 == 0 { 1 } else { 2 });
        }
        self.n += 2 * e - 1;
        Ok(())
    }
}

fn extend_unique(
    base: &ConstructionResult,
    target_n: u32,
    theorem: &str,
) -> Result<ConstructionResult, ConstructionError> {
    let e = base.system.e();
    let twoe = 2 * e;
    let n0 = base.system.n();
    if !base.claims.unique {
        return Err(ConstructionError::UnsupportedCase(
            "extension preserves uniqueness only from a uniquely colourable base".into(),
        ));
    }
    if n0 % twoe != 0 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "base order {n0} is not 0 (mod {twoe})"
        )));
    }
    if target_n <= n0 || target_n % twoe > 1 {
        return Err(ConstructionError::InadmissibleOrder {
            e,
            n: target_n as u64,
        });
    }
    let k = base.claims.k;
    let mut state = GrowState::from_result(base);
    while state.n < target_n {
        if state.n % twoe == 0 {
            if state.n + 1 == target_n {
                state.step_plus_one_unique()?;
            } else {
                // Reach the next multiple of 2e through the +1 then +(2e-1)
                // steps, both of which preserve uniqueness.
                state.step_plus_one_unique()?;
            }
        } else {
            state.step_plus_2e_minus_one_unique()?;
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
            unique: true,
            provenance: Provenance::new(
                theorem,
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

/// Extends a uniquely 2-chromatic system to any larger order on the
/// residues 0,1 (mod 2e), preserving unique 2-colourability.
pub fn extend_unique_2chromatic(
    base: &ConstructionResult,
    target_n: u32,
) -> Result<ConstructionResult, ConstructionError> {
    if base.claims.k != 2 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "2-colour extension applied to a base claiming k = {}",
            base.claims.k
        )));
    }
    extend_unique(base, target_n, "4.2")
}

/// Extends a uniquely k-chromatic system to any larger order on the
/// residues 0,1 (mod 2e), preserving unique k-colourability.
pub fn extend_unique_kchromatic(
    base: &ConstructionResult,
    target_n: u32,
) -> Result<ConstructionResult, ConstructionError> {
    extend_unique(base, target_n, "4.5")
}

// ---------------------------------------------------------------------------
// Lift to k colours via k copies.
// ---------------------------------------------------------------------------

/// Builds a strongly equitable k-chromatic system of order `k·n_{k-1}`
/// from a strongly equitable uniquely (k-1)-chromatic one: k copies, where
/// anchor stars from every copy into designated e-sets of the first copy
/// leave each copy one forbidden colour, rotating which colour is missing.
pub fn lift_unique_to_strong_equitable_k(
    base: &ConstructionResult,
) -> Result<ConstructionResult, ConstructionError> {
    let e = base.system.e();
    let eu = e as usize;
    let n0 = base.system.n();
    let km1 = base.claims.k;
    let k = km1 + 1;
    if km1 < 2 || !base.claims.unique {
        return Err(ConstructionError::UnsupportedCase(
            "lift needs a uniquely colourable base with at least 2 classes".into(),
        ));
    }
    if n0 % (2 * e) != 0 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "lift needs base order ≡ 0 (mod {}), got {n0}",
            2 * e
        )));
    }
    let classes: Vec<Vec<Vertex>> = (1..=km1).map(|c| base.colouring.class_members(c)).collect();
    if classes.iter().any(|c| c.len() <= eu) {
        return Err(ConstructionError::UnsupportedCase(
            "lift needs every base class larger than e".into(),
        ));
    }
    // The designated anchor sets live in copy 1.
    let anchors: Vec<Vec<Vertex>> = classes.iter().map(|c| c[..eu].to_vec()).collect();

    // Copy i misses colour i-1 (copy 1 misses k): class s keeps colour s
    // except class i-1, which takes colour k.
    let target = |copy: u32, class: u32| -> u32 {
        if copy >= 2 && class == copy - 1 {
            k
        } else {
            class
        }
    };

    let n = k * n0;
    let off = |copy: u32| (copy - 1) * n0;
    let mut sys = StarSystem::with_capacity(e, n, (n as usize * (n as usize - 1)) / (2 * eu))?;

    let base_blocks: Vec<(Vertex, Vec<Vertex>)> = base
        .system
        .blocks()
        .map(|b| (b.center(), b.leaves().to_vec()))
        .collect();
    for copy in 1..=k {
        let o = off(copy);
        for (c, leaves) in &base_blocks {
            let shifted: Vec<Vertex> = leaves.iter().map(|&l| l + o).collect();
            sys.push_block(c + o, &shifted)?;
        }
    }

    // Copy 1 to copy i: anchor stars plus mixed chunks of the rest of
    // copy 1, one pool per target colour.
    let mut pool_chunks: Vec<Option<Vec<Vec<Vertex>>>> = vec![None; k as usize + 1];
    let mut chunks_for = |target_colour: u32| -> Result<Vec<Vec<Vertex>>, ConstructionError> {
        if pool_chunks[target_colour as usize].is_none() {
            let keep: Vec<Vec<Vertex>> = classes
                .iter()
                .enumerate()
                .map(|(ci, members)| {
                    if (ci as u32 + 1) == target_colour {
                        members.clone()
                    } else {
                        members[eu..].to_vec()
                    }
                })
                .collect();
            pool_chunks[target_colour as usize] = Some(chunks_no_pure_class(&keep, eu)?);
        }
        Ok(pool_chunks[target_colour as usize].clone().unwrap())
    };
    for copy in 2..=k {
        let o = off(copy);
        for (ci, members) in classes.iter().enumerate() {
            let class = ci as u32 + 1;
            let colour = target(copy, class);
            let chunks = chunks_for(colour)?;
            for &v in members {
                for (ai, anchor) in anchors.iter().enumerate() {
                    if (ai as u32 + 1) != colour {
                        sys.push_block(v + o, anchor)?;
                    }
                }
                for leaves in &chunks {
                    sys.push_block(v + o, leaves)?;
                }
            }
        }
    }

    // Copy i to copy j for 2 <= i < j: stars from the later copy over
    // chunks of the earlier one that respect its final classes.
    for i in 2..=k {
        let grouped: Vec<Vec<Vertex>> = {
            let mut by_colour: Vec<Vec<Vertex>> = vec![Vec::new(); k as usize];
            for (ci, members) in classes.iter().enumerate() {
                let colour = target(i, ci as u32 + 1);
                by_colour[colour as usize - 1].extend(members.iter().map(|&v| v + off(i)));
            }
            by_colour.retain(|c| !c.is_empty());
            by_colour
        };
        let chunks = chunks_no_pure_class(&grouped, eu)?;
        for j in i + 1..=k {
            let oj = off(j);
            for u in 1..=n0 {
                for leaves in &chunks {
                    sys.push_block(u + oj, leaves)?;
                }
            }
        }
    }

    let mut assign = vec![0u32; n as usize];
    for copy in 1..=k {
        let o = off(copy);
        for (ci, members) in classes.iter().enumerate() {
            let colour = target(copy, ci as u32 + 1);
            for &v in members {
                assign[(v + o) as usize - 1] = colour;
            }
        }
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
                "4.3",
                &[("e", e as u64), ("k", k as u64), ("base_n", n0 as u64)],
            ),
        },
    )
}

// ---------------------------------------------------------------------------
// The k-colour uniqueness gadget.
// ---------------------------------------------------------------------------

/// Builds a uniquely k-chromatic e-star system from a strongly equitable
/// k-chromatic one of order ≡ 0 (mod 2e): gadget sets A, F, G, H of k
/// (or, for odd k, k+1) e-sets each, with the non-canonical e-subsets of A
/// spread over embedded copies of the base. Anchored star chains force the
/// colouring of every vertex from the canonical A-sets alone.
pub fn make_unique_kchromatic(
    base: &ConstructionResult,
    seed: u64,
) -> Result<ConstructionResult, ConstructionError> {
    let e = base.system.e();
    let eu = e as usize;
    let n0 = base.system.n();
    let k = base.claims.k;
    if k < 3 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "k-colour uniqueness gadget needs k >= 3, got {k}"
        )));
    }
    if n0 % (2 * e) != 0 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "gadget needs base order ≡ 0 (mod {}), got {n0}",
            2 * e
        )));
    }
    let odd = k % 2 == 1;
    let sets_per_letter = if odd { k + 1 } else { k };
    let letter_len = sets_per_letter * e;
    // Letters in id order: A, F, G, H; within a letter the k colour sets,
    // then (odd k) the extra colour-1 set.
    let letter = |idx: u32| -> Vec<Vec<Vertex>> {
        (0..sets_per_letter)
            .map(|s| consecutive(idx * letter_len + s * e + 1, e))
            .collect()
    };
    let a_sets = letter(0);
    let f_sets = letter(1);
    let g_sets = letter(2);
    let h_sets = letter(3);
    let gadget_len = 4 * letter_len;

    // Pack the non-canonical e-subsets of A's first ke ids into classes of
    // k-1 pairwise-disjoint subsets.
    let canon: Vec<u64> = (0..k)
        .map(|s| a_sets[s as usize].iter().fold(0u64, |m, &v| m | 1 << (v - 1)))
        .collect();
    let family: Vec<u64> = all_e_subset_masks(k * e, e)
        .into_iter()
        .filter(|m| !canon.contains(m))
        .collect();
    let packed = pack_family_into_disjoint_classes(&family, k as usize - 1, seed);
    let ell = packed.len() as u32;
    let subset_of = |mask: u64| -> Vec<Vertex> {
        (0..64u32)
            .filter(|&b| mask & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    };

    let n = gadget_len + ell * n0;
    let off = |i: u32| gadget_len + (i - 1) * n0;
    let mut sys = StarSystem::with_capacity(e, n, (n as usize * (n as usize - 1)) / (2 * eu))?;

    let base_classes: Vec<Vec<Vertex>> =
        (1..=k).map(|c| base.colouring.class_members(c)).collect();
    let mix = chunks_no_pure_class(&base_classes, eu)?;
    // The two smallest colour indices different from s (0-based).
    let others = |s: usize| -> (usize, usize) {
        let mut it = (0..k as usize).filter(|&t| t != s);
        (it.next().unwrap(), it.next().unwrap())
    };
    let trio = |own_f: &[Vertex], own_g: &[Vertex], other_g: &[Vertex]| {
        let mut s1: Vec<Vertex> = own_f[..eu - 1].to_vec();
        s1.push(other_g[0]);
        let mut s2: Vec<Vertex> = vec![own_f[eu - 1]];
        s2.extend_from_slice(&own_g[..eu - 2]);
        s2.push(other_g[1]);
        let mut s3: Vec<Vertex> = own_g[eu - 2..].to_vec();
        s3.extend_from_slice(&other_g[2..]);
        [s1, s2, s3]
    };

    // Internal systems on each letter: the colour sets paired up into
    // order-2e blocks with mixed cross-pair stars.
    for sets in [&a_sets, &f_sets, &g_sets, &h_sets] {
        for star in pairwise_internal_system(sets)? {
            sys.push_block(star.center, &star.leaves)?;
        }
    }

    // Copies, the subset stars pinning A, and the remainder of A to each
    // copy over the mixed chunks.
    let base_blocks: Vec<(Vertex, Vec<Vertex>)> = base
        .system
        .blocks()
        .map(|b| (b.center(), b.leaves().to_vec()))
        .collect();
    for i in 1..=ell {
        let o = off(i);
        for (c, leaves) in &base_blocks {
            let shifted: Vec<Vertex> = leaves.iter().map(|&l| l + o).collect();
            sys.push_block(c + o, &shifted)?;
        }
        let class = &packed[i as usize - 1];
        let mut covered = 0u64;
        for &ti in class {
            covered |= family[ti];
            let subset = subset_of(family[ti]);
            for u in 1..=n0 {
                sys.push_block(u + o, &subset)?;
            }
        }
        for w in (1..=k * e).filter(|&v| covered & (1 << (v - 1)) == 0) {
            for part in &mix {
                let shifted: Vec<Vertex> = part.iter().map(|&l| l + o).collect();
                sys.push_block(w, &shifted)?;
            }
        }
    }

    // F and G pinned against the canonical A-sets.
    for s in 0..k as usize {
        for i in 0..eu {
            for t in (0..k as usize).filter(|&t| t != s) {
                sys.push_block(f_sets[s][i], &a_sets[t])?;
                sys.push_block(g_sets[s][i], &a_sets[t])?;
            }
        }
    }

    // H pinned against F, with the mixed trio closing its own colour's
    // F- and G-sets.
    for s in 0..k as usize {
        let (sp, _) = others(s);
        for i in 0..eu {
            let h = h_sets[s][i];
            for t in (0..k as usize).filter(|&t| t != s) {
                sys.push_block(h, &f_sets[t])?;
            }
            for leaves in trio(&f_sets[s], &g_sets[s], &g_sets[sp]) {
                sys.push_block(h, &leaves)?;
            }
            for t in (0..k as usize).filter(|&t| t != s && t != sp) {
                sys.push_block(h, &g_sets[t])?;
            }
        }
    }

    // A to its own colour's F- and G-sets and to all of H, anchored.
    for s in 0..k as usize {
        let (m1, m2) = others(s);
        for i in 0..eu {
            let a = a_sets[s][i];
            let mut s1: Vec<Vertex> = f_sets[s][..eu - 1].to_vec();
            s1.push(h_sets[m1][0]);
            let mut s2: Vec<Vertex> = vec![f_sets[s][eu - 1]];
            s2.extend_from_slice(&g_sets[s][..eu - 2]);
            s2.push(h_sets[m1][1]);
            let mut s3: Vec<Vertex> = g_sets[s][eu - 2..].to_vec();
            s3.extend_from_slice(&h_sets[m1][2..]);
            let mut s4: Vec<Vertex> = h_sets[s][..eu - 1].to_vec();
            s4.push(h_sets[m2][0]);
            let mut s5: Vec<Vertex> = vec![h_sets[s][eu - 1]];
            s5.extend_from_slice(&h_sets[m2][1..]);
            for leaves in [&s1, &s2, &s3, &s4, &s5] {
                sys.push_block(a, leaves)?;
            }
            for t in (0..k as usize).filter(|&t| t != s && t != m1 && t != m2) {
                sys.push_block(a, &h_sets[t])?;
            }
        }
    }

    // F to G.
    for s in 0..k as usize {
        let (sp, _) = others(s);
        for i in 0..eu {
            let f = f_sets[s][i];
            let mut s1: Vec<Vertex> = g_sets[s][..eu - 1].to_vec();
            s1.push(g_sets[sp][0]);
            let mut s2: Vec<Vertex> = vec![g_sets[s][eu - 1]];
            s2.extend_from_slice(&g_sets[sp][1..]);
            sys.push_block(f, &s1)?;
            sys.push_block(f, &s2)?;
            for t in (0..k as usize).filter(|&t| t != s && t != sp) {
                sys.push_block(f, &g_sets[t])?;
            }
        }
    }

    // Every copy vertex pinned against F, closing F, G and H.
    for i in 1..=ell {
        let o = off(i);
        for (ci, members) in base_classes.iter().enumerate() {
            let s = ci;
            let (sp, _) = others(s);
            for &v in members {
                let u = v + o;
                for t in (0..k as usize).filter(|&t| t != s) {
                    sys.push_block(u, &f_sets[t])?;
                }
                for leaves in trio(&f_sets[s], &g_sets[s], &g_sets[sp]) {
                    sys.push_block(u, &leaves)?;
                }
                for t in (0..k as usize).filter(|&t| t != s && t != sp) {
                    sys.push_block(u, &g_sets[t])?;
                }
                let mut s1: Vec<Vertex> = h_sets[s][..eu - 1].to_vec();
                s1.push(h_sets[sp][0]);
                let mut s2: Vec<Vertex> = vec![h_sets[s][eu - 1]];
                s2.extend_from_slice(&h_sets[sp][1..]);
                sys.push_block(u, &s1)?;
                sys.push_block(u, &s2)?;
                for t in (0..k as usize).filter(|&t| t != s && t != sp) {
                    sys.push_block(u, &h_sets[t])?;
                }
            }
        }
    }

    // Copy-to-copy edges over the mixed chunks.
    for i in 1..=ell {
        for j in i + 1..=ell {
            let (oi, oj) = (off(i), off(j));
            let shifted: Vec<Vec<Vertex>> = mix
                .iter()
                .map(|part| part.iter().map(|&l| l + oj).collect())
                .collect();
            for u in 1..=n0 {
                for leaves in &shifted {
                    sys.push_block(u + oi, leaves)?;
                }
            }
        }
    }

    // Odd k: the extra colour-1 sets, each pinned against the canonical
    // colour sets and spread over everything else with class-1-avoiding
    // chunks.
    if odd {
        let a0 = &a_sets[k as usize];
        let f0 = &f_sets[k as usize];
        let g0 = &g_sets[k as usize];
        let h0 = &h_sets[k as usize];
        let colour1_gadget: BTreeSet<Vertex> = a_sets[0]
            .iter()
            .chain(&f_sets[0])
            .chain(&g_sets[0])
            .chain(&h_sets[0])
            .chain(a0)
            .chain(f0)
            .chain(g0)
            .chain(h0)
            .copied()
            .collect();
        let avoid1 = |pool: Vec<Vertex>| -> Result<Vec<Vec<Vertex>>, ConstructionError> {
            chunks_avoiding(&pool, |v| colour1_gadget.contains(&v), eu)
        };
        let push_u_chunks =
            |sys: &mut StarSystem, center: Vertex| -> Result<(), ConstructionError> {
                for i in 1..=ell {
                    let o = off(i);
                    for part in &mix {
                        let shifted: Vec<Vertex> = part.iter().map(|&l| l + o).collect();
                        sys.push_block(center, &shifted)?;
                    }
                }
                Ok(())
            };

        // A_0^1 to F, G, H and the copies.
        for &v in a0 {
            for t in 1..k as usize {
                sys.push_block(v, &f_sets[t])?;
            }
            for leaves in trio(&f_sets[0], &g_sets[0], &g_sets[1]) {
                sys.push_block(v, &leaves)?;
            }
            for t in 2..k as usize {
                sys.push_block(v, &g_sets[t])?;
            }
            let mut s1: Vec<Vertex> = h_sets[0][..eu - 1].to_vec();
            s1.push(h_sets[1][0]);
            let mut s2: Vec<Vertex> = vec![h_sets[0][eu - 1]];
            s2.extend_from_slice(&h_sets[1][1..]);
            sys.push_block(v, &s1)?;
            sys.push_block(v, &s2)?;
            for t in 2..k as usize {
                sys.push_block(v, &h_sets[t])?;
            }
            push_u_chunks(&mut sys, v)?;
        }
        // F_0^1 to A^1, A_0^1, G, H and the copies; pinned by A^2..A^k.
        let w_pool: Vec<Vertex> = a_sets[0]
            .iter()
            .chain(a0)
            .chain(g_sets[..k as usize].iter().flatten())
            .chain(h_sets[..k as usize].iter().flatten())
            .copied()
            .collect();
        let w_chunks = avoid1(w_pool)?;
        for &v in f0 {
            for t in 1..k as usize {
                sys.push_block(v, &a_sets[t])?;
            }
            for leaves in &w_chunks {
                sys.push_block(v, leaves)?;
            }
            push_u_chunks(&mut sys, v)?;
        }
        // G_0^1 to A^1, A_0^1, F, F_0^1, H and the copies.
        let x_pool: Vec<Vertex> = a_sets[0]
            .iter()
            .chain(a0)
            .chain(f_sets[..k as usize].iter().flatten())
            .chain(f0)
            .chain(h_sets[..k as usize].iter().flatten())
            .copied()
            .collect();
        let x_chunks = avoid1(x_pool)?;
        for &v in g0 {
            for t in 1..k as usize {
                sys.push_block(v, &a_sets[t])?;
            }
            for leaves in &x_chunks {
                sys.push_block(v, leaves)?;
            }
            push_u_chunks(&mut sys, v)?;
        }
        // H_0^1 to A^1, A_0^1, F', G' and the copies.
        let y_pool: Vec<Vertex> = a_sets[0]
            .iter()
            .chain(a0)
            .chain(f_sets.iter().flatten())
            .chain(g_sets.iter().flatten())
            .copied()
            .collect();
        let y_chunks = avoid1(y_pool)?;
        for &v in h0 {
            for t in 1..k as usize {
                sys.push_block(v, &a_sets[t])?;
            }
            for leaves in &y_chunks {
                sys.push_block(v, leaves)?;
            }
            push_u_chunks(&mut sys, v)?;
        }
    }

    let mut assign = vec![0u32; n as usize];
    for (letter_sets, _) in [(&a_sets, 0), (&f_sets, 1), (&g_sets, 2), (&h_sets, 3)] {
        for (s, set) in letter_sets.iter().enumerate() {
            let colour = if s < k as usize { s as u32 + 1 } else { 1 };
            for &v in set {
                assign[v as usize - 1] = colour;
            }
        }
    }
    for i in 1..=ell {
        let o = off(i);
        for (ci, members) in base_classes.iter().enumerate() {
            for &v in members {
                assign[(v + o) as usize - 1] = ci as u32 + 1;
            }
        }
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
            unique: true,
            provenance: Provenance::new(
                "4.4",
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
    use crate::chromatic::{
        is_uniquely_k_colourable, propagate_forced, PartialColouring, PropagationOutcome,
        SearchBudget, UniquenessOutcome,
    };
    use crate::verify::{check_colouring, validate_decomposition};

    #[test]
    fn unique_gadget_at_e3_has_order_138_and_is_unique() {
        let r = build_unique_2chromatic_estar(3).unwrap();
        assert_eq!(r.system.n(), 138); // 30 + 18·6
        assert!(validate_decomposition(&r.system).ok);
        let c = check_colouring(&r.system, &r.colouring);
        assert!(c.proper && c.strongly_equitable);
        match is_uniquely_k_colourable(&r.system, 2, SearchBudget::default()) {
            UniquenessOutcome::Unique(col) => {
                assert!(check_colouring(&r.system, &col).proper);
            }
            other => panic!("expected Unique, got {other:?}"),
        }
    }

    #[test]
    fn unique_gadget_forcing_from_anchors_alone() {
        let r = build_unique_2chromatic_estar(3).unwrap();
        let mut partial = PartialColouring::unconstrained(r.system.n(), 2);
        for v in 1..=3 {
            partial.assign(v, 1);
        }
        for v in 4..=6 {
            partial.assign(v, 2);
        }
        match propagate_forced(&r.system, &partial) {
            PropagationOutcome::Extended(p) => {
                assert!(p.is_total(), "forcing chain left vertices undecided");
                let col = p.to_colouring().unwrap();
                assert!(check_colouring(&r.system, &col).proper);
                assert_eq!(col, r.colouring);
            }
            PropagationOutcome::Conflict { block } => panic!("conflict at block {block}"),
        }
    }

    #[test]
    fn unique_extension_covers_both_step_kinds() {
        let base = build_unique_2chromatic_estar(3).unwrap();
        let plus_one = extend_unique_2chromatic(&base, 139).unwrap();
        assert_eq!(plus_one.system.n(), 139);
        assert!(validate_decomposition(&plus_one.system).ok);
        let full = extend_unique_2chromatic(&base, 144).unwrap();
        assert_eq!(full.system.n(), 144);
        assert!(validate_decomposition(&full.system).ok);
    }

    #[test]
    fn strong_equitable_lift_reaches_order_414() {
        let base = build_unique_2chromatic_estar(3).unwrap();
        let lifted = lift_unique_to_strong_equitable_k(&base).unwrap();
        assert_eq!(lifted.system.n(), 414);
        assert_eq!(lifted.claims.k, 3);
        assert!(lifted.claims.strongly_equitable);
        assert_eq!(lifted.colouring.class_sizes(), vec![138, 138, 138]);
        assert!(validate_decomposition(&lifted.system).ok);
        assert!(check_colouring(&lifted.system, &lifted.colouring).proper);
    }
}
