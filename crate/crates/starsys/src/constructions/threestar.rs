//! 3-star constructions: equitable 2-chromatic systems of every admissible
//! order, order extensions preserving the chromatic number, and the lift
//! from k-1 to k colours.

use crate::baranyai::{binomial, partition_all_subsets};
use crate::system::{is_admissible, Colouring, StarSystem, Vertex};

use super::estar::{base_2e_blocks, split_classes};
use super::helpers::{chunks_avoiding, chunks_no_pure_class, stars_from};
use super::{finalize, Claims, ConstructionError, ConstructionResult, Provenance};

/// Builds the equitably 2-chromatic 3-star system of order n for any
/// admissible n, grown from the order-six base by single-vertex and
/// three-vertex steps. Colour classes are the odd and even ids.
pub fn build_equitable_2chromatic_3star(n: u32) -> Result<ConstructionResult, ConstructionError> {
    if !is_admissible(3, n as u64) {
        return Err(ConstructionError::InadmissibleOrder { e: 3, n: n as u64 });
    }
    let mut blocks: Vec<(Vertex, Vec<Vertex>)> = base_2e_blocks(3);
    let mut order: u32 = 6;
    while order < n {
        let t = order / 3;
        debug_assert_eq!(order % 3, 0);
        if order + 1 == n {
            // One new vertex joined to consecutive triples of the old set.
            for j in 0..t {
                blocks.push((order + 1, vec![3 * j + 1, 3 * j + 2, 3 * j + 3]));
            }
            order += 1;
        } else {
            // Three new vertices: consecutive triples of the first 3t-3 old
            // vertices, then four closing blocks over {3t-2, 3t-1, 3t}.
            for nu in [order + 1, order + 2, order + 3] {
                for j in 0..t - 1 {
                    blocks.push((nu, vec![3 * j + 1, 3 * j + 2, 3 * j + 3]));
                }
            }
            blocks.push((order + 1, vec![3 * t - 2, 3 * t - 1, order + 2]));
            blocks.push((order + 2, vec![3 * t - 2, 3 * t - 1, order + 3]));
            blocks.push((order + 3, vec![3 * t - 2, 3 * t - 1, order + 1]));
            blocks.push((3 * t, vec![order + 1, order + 2, order + 3]));
            order += 3;
        }
    }
    let mut sys = StarSystem::with_capacity(3, n, blocks.len())?;
    for (c, leaves) in &blocks {
        sys.push_block(*c, leaves)?;
    }
    let assign = (1..=n).map(|v| if v % 2 == 1 { 1 } else { 2 }).collect();
    let colouring = Colouring::new(2, assign).expect("parity classes");
    finalize(
        sys,
        colouring,
        Claims {
            k: 2,
            equitable: true,
            strongly_equitable: n % 2 == 0,
            unique: false,
            provenance: Provenance::new("2.1", &[("n", n as u64)]),
        },
    )
}

struct Grow3 {
    n: u32,
    k: u32,
    blocks: Vec<(Vertex, Vec<Vertex>)>,
    assign: Vec<u32>,
}

impl Grow3 {
    /// The class new vertices join: the smallest one (ties towards the
    /// highest index). Renaming classes between steps keeps the receiving
    /// class on the small side, which is what keeps the leaf chunks
    /// feasible over long extension chains.
    fn receiving_class(&self) -> u32 {
        let mut sizes = vec![0u64; self.k as usize + 1];
        for &c in &self.assign {
            sizes[c as usize] += 1;
        }
        (1..=self.k).rev().min_by_key(|&c| sizes[c as usize]).unwrap()
    }

    fn non_top(&self, top: u32) -> Vec<Vertex> {
        (1..=self.n)
            .filter(|&v| self.assign[v as usize - 1] != top)
            .collect()
    }

    /// Adds one vertex to the receiving class, over chunks avoiding it.
    fn plus_one(&mut self) -> Result<(), ConstructionError> {
        let pool: Vec<Vertex> = (1..=self.n).collect();
        let top = self.receiving_class();
        let chunks = chunks_avoiding(&pool, |v| self.assign[v as usize - 1] == top, 3)?;
        for star in stars_from(self.n + 1, &chunks) {
            self.blocks.push((star.center, star.leaves));
        }
        self.assign.push(top);
        self.n += 1;
        Ok(())
    }

    /// Adds three vertices: a closing 4-block group over three designated
    /// vertices, then chunks of the rest for each new vertex. The closing
    /// blocks need z and at least one of p, q outside the top class; taking
    /// p from the top class when the class is large keeps the leftover
    /// chunks feasible.
    fn plus_three(&mut self) -> Result<(), ConstructionError> {
        let top = self.receiving_class();
        let non_top = self.non_top(top);
        let top_members = (1..=self.n)
            .filter(|&v| self.assign[v as usize - 1] == top)
            .collect::<Vec<_>>();
        if non_top.len() < 3 && (non_top.len() < 2 || top_members.is_empty()) {
            return Err(ConstructionError::UnsupportedCase(
                "need vertices outside the top class for the closing blocks".into(),
            ));
        }
        let pool_after = (self.n - 3) as usize;
        let all_non_top_ok = non_top.len() >= 3
            && top_members.len() <= pool_after - pool_after / 3;
        let [p, q, z] = if all_non_top_ok {
            [
                non_top[non_top.len() - 3],
                non_top[non_top.len() - 2],
                non_top[non_top.len() - 1],
            ]
        } else {
            if top_members.is_empty() || non_top.len() < 2 {
                return Err(ConstructionError::UnsupportedCase(
                    "cannot balance the closing blocks against the top class".into(),
                ));
            }
            [
                top_members[top_members.len() - 1],
                non_top[non_top.len() - 2],
                non_top[non_top.len() - 1],
            ]
        };
        let (n1, n2, n3) = (self.n + 1, self.n + 2, self.n + 3);
        self.blocks.push((n1, vec![p, q, n2]));
        self.blocks.push((n2, vec![p, q, n3]));
        self.blocks.push((n3, vec![p, q, n1]));
        self.blocks.push((z, vec![n1, n2, n3]));
        let pool: Vec<Vertex> = (1..=self.n).filter(|v| ![p, q, z].contains(v)).collect();
        let chunks = chunks_avoiding(&pool, |v| self.assign[v as usize - 1] == top, 3)?;
        for nu in [n1, n2, n3] {
            for star in stars_from(nu, &chunks) {
                self.blocks.push((star.center, star.leaves));
            }
        }
        for _ in 0..3 {
            self.assign.push(top);
        }
        self.n += 3;
        Ok(())
    }

    /// From order ≡ 1 (mod 3): dismantles the block covering an edge
    /// between two non-top vertices and adds two new vertices.
    fn plus_two(&mut self) -> Result<(), ConstructionError> {
        let top = self.receiving_class();
        let non_top = self.non_top(top);
        if non_top.len() < 2 {
            return Err(ConstructionError::UnsupportedCase(
                "need an edge outside the top class to dismantle".into(),
            ));
        }
        let (u, v) = (non_top[0], non_top[1]);
        let idx = self
            .blocks
            .iter()
            .position(|(c, leaves)| {
                (*c == u && leaves.contains(&v)) || (*c == v && leaves.contains(&u))
            })
            .ok_or_else(|| {
                ConstructionError::SelfCheckFailed(format!("no block covers edge ({u}, {v})"))
            })?;
        let (center, leaves) = self.blocks.remove(idx);
        let other = if center == u { v } else { u };
        let rest: Vec<Vertex> = leaves.iter().copied().filter(|&l| l != other).collect();
        let (a, b) = (rest[0], rest[1]);
        // Replacement stars covering the dismantled edges and the new
        // vertices' edges into the dismantled block.
        let (n1, n2) = (self.n + 1, self.n + 2);
        self.blocks.push((n1, vec![center, other, a]));
        self.blocks.push((n2, vec![n1, other, a]));
        self.blocks.push((b, vec![n1, center, n2]));
        self.blocks.push((center, vec![n2, other, a]));
        let skip = [center, other, a, b];
        let pool: Vec<Vertex> = (1..=self.n).filter(|x| !skip.contains(x)).collect();
        let chunks = chunks_avoiding(&pool, |x| self.assign[x as usize - 1] == top, 3)?;
        for nu in [n1, n2] {
            for star in stars_from(nu, &chunks) {
                self.blocks.push((star.center, star.leaves));
            }
        }
        for _ in 0..2 {
            self.assign.push(top);
        }
        self.n += 2;
        Ok(())
    }
}

/// Extends a k-chromatic 3-star system to any larger admissible order,
/// preserving the chromatic number. From orders ≡ 0 (mod 3) the base's
/// blocks are carried unchanged; from orders ≡ 1 (mod 3) one block gets
/// dismantled and replaced.
///
/// The class-split parameter `ell` is validated for interface fidelity;
/// the derived decomposition depends only on the top colour class.
pub fn extend_kchromatic_3star(
    base: &ConstructionResult,
    ell: Option<u32>,
    target_n: u32,
) -> Result<ConstructionResult, ConstructionError> {
    if base.system.e() != 3 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "3-star extension applied to e = {}",
            base.system.e()
        )));
    }
    let k = base.claims.k;
    if let Some(l) = ell {
        if l < 1 || l >= k {
            return Err(ConstructionError::UnsupportedCase(format!(
                "class split {l} outside 1..{k}"
            )));
        }
    }
    let n0 = base.system.n();
    if target_n <= n0 || !is_admissible(3, target_n as u64) {
        return Err(ConstructionError::InadmissibleOrder {
            e: 3,
            n: target_n as u64,
        });
    }
    let mut state = Grow3 {
        n: n0,
        k,
        blocks: base
            .system
            .blocks()
            .map(|b| (b.center(), b.leaves().to_vec()))
            .collect(),
        assign: base.colouring.assignments().to_vec(),
    };
    while state.n < target_n {
        if state.n % 3 == 0 {
            if state.n + 1 == target_n {
                state.plus_one()?;
            } else {
                state.plus_three()?;
            }
        } else {
            state.plus_two()?;
        }
    }
    let mut sys = StarSystem::with_capacity(3, target_n, state.blocks.len())?;
    for (c, leaves) in &state.blocks {
        sys.push_block(*c, leaves)?;
    }
    let col = Colouring::new(k, state.assign)
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
                "2.2",
                &[
                    ("k", k as u64),
                    ("base_n", n0 as u64),
                    ("n", target_n as u64),
                ],
            ),
        },
    )
}

/// Builds a k-chromatic 3-star system from a (k-1)-chromatic one of order
/// ≡ 0 (mod 3): disjoint copies of the base are glued to a small gadget
/// clique whose 3-subsets are spread over the copies by a Baranyai
/// partition. In any putative (k-1)-colouring some gadget triple is
/// monochromatic, and the copy matched to it supplies a same-coloured star
/// center over that triple.
pub fn lift_3star_chromatic(
    base: &ConstructionResult,
    seed: u64,
) -> Result<ConstructionResult, ConstructionError> {
    if base.system.e() != 3 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "3-star lift applied to e = {}",
            base.system.e()
        )));
    }
    let n0 = base.system.n();
    let km1 = base.claims.k;
    let k = km1 + 1;
    if km1 < 2 {
        return Err(ConstructionError::UnsupportedCase(
            "lift needs a base claiming at least 2 colours".into(),
        ));
    }
    if n0 % 3 != 0 {
        return Err(ConstructionError::UnsupportedCase(format!(
            "lift needs base order ≡ 0 (mod 3), got {n0}"
        )));
    }

    // Gadget size: 2k-1 when that is admissible mod 3, else 2k.
    let v_len = if (2 * k - 1) % 3 <= 1 { 2 * k - 1 } else { 2 * k };
    // Class sizes for the Baranyai partition of the gadget's triples.
    let sizes: Vec<usize> = if v_len % 3 == 0 {
        let t = (v_len / 3) as usize;
        let count = binomial(v_len as u64, 3) as usize / t;
        vec![t; count]
    } else {
        // v_len = 3t+1: full-size classes of t plus 2k-1 classes of t/2.
        let t = ((v_len - 1) / 3) as usize;
        let tp = t / 2;
        let lp = ((2 * k - 1) * (k - 2)) as usize;
        let lpp = (2 * k - 1) as usize;
        let mut v = vec![t; lp];
        v.extend(vec![tp; lpp]);
        v
    };
    debug_assert_eq!(
        sizes.iter().map(|&s| s as u64).sum::<u64>(),
        binomial(v_len as u64, 3)
    );
    let partition = partition_all_subsets(v_len, 3, &sizes, seed)?;
    let ell = sizes.len() as u32;

    let n = v_len + ell * n0;
    let copy_offset = |i: u32| v_len + (i - 1) * n0;
    let mut blocks: Vec<(Vertex, Vec<Vertex>)> = Vec::new();

    // Gadget-internal system: any 3-star system of order v_len works; the
    // gadget colour classes have at most 2 vertices, so no gadget block can
    // be monochromatic.
    let gadget = build_equitable_2chromatic_3star(v_len)?;
    for b in gadget.system.blocks() {
        blocks.push((b.center(), b.leaves().to_vec()));
    }

    let final_classes = split_classes(&base.colouring, km1)?;
    let mix = chunks_no_pure_class(&final_classes, 3)?;

    let base_blocks: Vec<(Vertex, Vec<Vertex>)> = base
        .system
        .blocks()
        .map(|b| (b.center(), b.leaves().to_vec()))
        .collect();

    for i in 1..=ell {
        let off = copy_offset(i);
        for (c, leaves) in &base_blocks {
            blocks.push((c + off, leaves.iter().map(|&l| l + off).collect()));
        }
        let class = &partition.classes[i as usize - 1];
        for u in 1..=n0 {
            for subset in class {
                blocks.push((u + off, subset.clone()));
            }
        }
        let covered: std::collections::HashSet<Vertex> =
            class.iter().flatten().copied().collect();
        for g in (1..=v_len).filter(|v| !covered.contains(v)) {
            for part in &mix {
                blocks.push((g, part.iter().map(|&l| l + off).collect()));
            }
        }
    }
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

    // Colouring: the gadget in pairs {2s-1, 2s} per class (class k gets the
    // odd leftover, or the final pair when the gadget has 2k vertices);
    // copies follow the split base classes.
    let mut assign = vec![0u32; n as usize];
    for s in 1..=k {
        let lo = 2 * s - 1;
        let hi = (2 * s).min(v_len);
        for v in lo..=hi {
            assign[v as usize - 1] = s;
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

    let mut sys = StarSystem::with_capacity(3, n, blocks.len())?;
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
                "2.3",
                &[
                    ("k", k as u64),
                    ("base_n", n0 as u64),
                    ("seed", seed),
                    ("copies", ell as u64),
                ],
            ),
        },
    )
}
