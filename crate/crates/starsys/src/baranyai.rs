//! Partitioning all e-subsets of a ground set `[m]` into classes of
//! pairwise-disjoint subsets with prescribed class sizes.
//!
//! The primary path grows the ground set one element at a time. At each
//! stage every class holds a fixed number of partial subsets; the multiset
//! of partials equals the projections of all `C(m,e)` final subsets onto
//! the elements seen so far. Deciding which partials receive the next
//! element is a feasible-flow problem with unit capacities and floor/ceil
//! lower bounds derived from the fractional solution, so an integral
//! choice always exists and the method never fails on feasible input.
//!
//! A budgeted backtracking fallback ([`exact_cover_partition`]) serves as
//! an independent oracle for differential testing, and
//! [`pack_family_into_disjoint_classes`] packs an arbitrary subset family
//! (rather than all e-subsets) into disjoint classes, which the uniquely
//! colourable constructions need.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::system::Vertex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaranyaiError {
    #[error("infeasible request: {0}")]
    InfeasibleRequest(String),
    #[error("search budget exhausted after {0} nodes")]
    SearchExhausted(u64),
    #[error("internal error: {0}")]
    Internal(String),
}

/// A partition of all e-subsets of `[1, m]` into classes of pairwise
/// disjoint subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetPartition {
    pub m: u32,
    pub e: u32,
    /// Classes in request order; each class lists its subsets, each subset
    /// ascending.
    pub classes: Vec<Vec<Vec<Vertex>>>,
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

fn mask_to_subset(mask: u64) -> Vec<Vertex> {
    (0..64)
        .filter(|&b| mask & (1u64 << b) != 0)
        .map(|b| b as Vertex + 1)
        .collect()
}

// ---------------------------------------------------------------------------
// Dinic max-flow on a small graph, used once per stage.
// ---------------------------------------------------------------------------

struct Dinic {
    to: Vec<usize>,
    cap: Vec<i64>,
    head: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            to: Vec::new(),
            cap: Vec::new(),
            head: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Returns the arc id; the reverse arc is `id ^ 1`.
    fn add_edge(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.head[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.head[v].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = std::collections::VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &id in &self.head[u] {
                let v = self.to[id];
                if self.cap[id] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.iter[u] < self.head[u].len() {
            let id = self.head[u][self.iter[u]];
            let v = self.to[id];
            if self.cap[id] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, f.min(self.cap[id]));
                if d > 0 {
                    self.cap[id] -= d;
                    self.cap[id ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Flow routed on a forward arc, given its id.
    fn flow_on(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }
}

// ---------------------------------------------------------------------------
// Primary path: stage-wise integral rounding.
// ---------------------------------------------------------------------------

fn check_preconditions(m: u32, e: u32, sizes: &[usize]) -> Result<(), BaranyaiError> {
    if e < 1 || e > m {
        return Err(BaranyaiError::InfeasibleRequest(format!(
            "need 1 <= e <= m, got e={e}, m={m}"
        )));
    }
    let cap = (m / e) as usize;
    if let Some(&bad) = sizes.iter().find(|&&s| s == 0 || s > cap) {
        return Err(BaranyaiError::InfeasibleRequest(format!(
            "class size {bad} outside 1..={cap} (= floor(m/e))"
        )));
    }
    let total: u64 = sizes.iter().map(|&s| s as u64).sum();
    let want = binomial(m as u64, e as u64);
    if total != want {
        return Err(BaranyaiError::InfeasibleRequest(format!(
            "sizes sum to {total}, need C({m},{e}) = {want}"
        )));
    }
    Ok(())
}

/// Partitions all e-subsets of `[1, m]` into `sizes.len()` classes of
/// pairwise-disjoint subsets, class `i` holding exactly `sizes[i]` subsets.
///
/// Deterministic for fixed `(m, e, sizes, seed)`; the seed only perturbs
/// tie-breaking between equivalent integral roundings.
pub fn partition_all_subsets(
    m: u32,
    e: u32,
    sizes: &[usize],
    seed: u64,
) -> Result<SubsetPartition, BaranyaiError> {
    check_preconditions(m, e, sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // classes[i] = sizes[i] partial subsets as bitmasks (0 = still empty).
    let mut classes: Vec<Vec<u64>> = sizes.iter().map(|&s| vec![0u64; s]).collect();
    let nclasses = classes.len();

    for stage in 0..m {
        let x_bit = 1u64 << stage;
        let rem = (m - stage) as u64; // elements not yet placed, incl. x

        // Group identical partials: key -> list of (class, copies).
        let mut keys: Vec<u64> = Vec::new();
        let mut holders: std::collections::BTreeMap<u64, Vec<(usize, u64)>> =
            std::collections::BTreeMap::new();
        for (ci, slots) in classes.iter().enumerate() {
            let mut counts: std::collections::BTreeMap<u64, u64> = std::collections::BTreeMap::new();
            for &s in slots {
                if (s.count_ones()) < e {
                    *counts.entry(s).or_insert(0) += 1;
                }
            }
            for (key, copies) in counts {
                holders.entry(key).or_default().push((ci, copies));
            }
        }
        for (&key, list) in holders.iter_mut() {
            keys.push(key);
            // Seeded tie-breaking: the order classes are offered to the
            // augmenting search.
            list.shuffle(&mut rng);
        }

        // Node layout: 0 = S, 1 = T, 2.. keys, then classes, then SS, TT.
        let key_base = 2;
        let class_base = key_base + keys.len();
        let ss = class_base + nclasses;
        let tt = ss + 1;
        let mut net = Dinic::new(tt + 1);
        let mut excess = vec![0i64; tt + 1];
        let add_bounded = |net: &mut Dinic, excess: &mut Vec<i64>, u: usize, v: usize, lo: i64, hi: i64| -> usize {
            debug_assert!(lo <= hi);
            let id = net.add_edge(u, v, hi - lo);
            excess[v] += lo;
            excess[u] -= lo;
            id
        };

        // Source -> key arcs: demand exactly D = C(rem-1, e-d-1).
        for (ki, &key) in keys.iter().enumerate() {
            let d = key.count_ones() as u64;
            let demand = binomial(rem - 1, e as u64 - d - 1) as i64;
            add_bounded(&mut net, &mut excess, 0, key_base + ki, demand, demand);
        }
        // Key -> class arcs.
        let mut arc_ids: Vec<(usize, u64, usize)> = Vec::new(); // (arc, key, class)
        for (ki, &key) in keys.iter().enumerate() {
            let d = key.count_ones() as u64;
            for &(ci, copies) in &holders[&key] {
                let num = copies * (e as u64 - d);
                let lo = (num / rem) as i64;
                let hi = num.div_ceil(rem).min(1) as i64;
                let id = add_bounded(&mut net, &mut excess, key_base + ki, class_base + ci, lo, hi);
                arc_ids.push((id, key, ci));
            }
        }
        // Class -> sink arcs.
        for (ci, slots) in classes.iter().enumerate() {
            let need: u64 = slots.iter().map(|&s| e as u64 - s.count_ones() as u64).sum();
            if need > rem {
                return Err(BaranyaiError::Internal(format!(
                    "class {ci} needs {need} elements with only {rem} left"
                )));
            }
            let lo = (need / rem) as i64;
            let hi = need.div_ceil(rem) as i64;
            add_bounded(&mut net, &mut excess, class_base + ci, 1, lo, hi);
        }
        // Circulation closure and excess arcs.
        net.add_edge(1, 0, i64::MAX / 2);
        let mut required = 0;
        for w in 0..ss {
            if excess[w] > 0 {
                net.add_edge(ss, w, excess[w]);
                required += excess[w];
            } else if excess[w] < 0 {
                net.add_edge(w, tt, -excess[w]);
            }
        }
        let got = net.max_flow(ss, tt);
        if got != required {
            return Err(BaranyaiError::Internal(format!(
                "stage {stage}: feasible flow not found ({got}/{required})"
            )));
        }

        // Apply: promote one copy of `key` in the chosen class.
        for (id, key, ci) in arc_ids {
            let num = {
                let d = key.count_ones() as u64;
                let copies = holders[&key]
                    .iter()
                    .find(|&&(c, _)| c == ci)
                    .map(|&(_, n)| n)
                    .unwrap();
                copies * (e as u64 - d)
            };
            let lo = (num / rem) as i64;
            if lo + net.flow_on(id) > 0 {
                let slot = classes[ci]
                    .iter_mut()
                    .find(|s| **s == key)
                    .expect("holder class lost its partial subset");
                *slot |= x_bit;
            }
        }
    }

    let out = SubsetPartition {
        m,
        e,
        classes: classes
            .into_iter()
            .map(|slots| slots.into_iter().map(mask_to_subset).collect())
            .collect(),
    };
    debug_assert!(verify_partition(&out, sizes));
    Ok(out)
}

/// Checks every [`SubsetPartition`] invariant against `(m, e, sizes)`.
pub fn verify_partition(p: &SubsetPartition, sizes: &[usize]) -> bool {
    if p.classes.len() != sizes.len() {
        return false;
    }
    let mut seen: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    for (class, &want) in p.classes.iter().zip(sizes) {
        if class.len() != want {
            return false;
        }
        let mut class_mask = 0u64;
        for subset in class {
            if subset.len() != p.e as usize {
                return false;
            }
            let mut mask = 0u64;
            for &v in subset {
                if v < 1 || v > p.m {
                    return false;
                }
                mask |= 1u64 << (v - 1);
            }
            if mask.count_ones() != p.e {
                return false; // repeated element inside the subset
            }
            if class_mask & mask != 0 {
                return false; // subsets within a class must be disjoint
            }
            class_mask |= mask;
            *seen.entry(mask).or_insert(0) += 1;
        }
    }
    let want = binomial(p.m as u64, p.e as u64);
    seen.len() as u64 == want && seen.values().all(|&c| c == 1)
}

// ---------------------------------------------------------------------------
// Fallback: budgeted backtracking, for differential testing.
// ---------------------------------------------------------------------------

/// Backtracking assignment of all e-subsets to classes, independent of the
/// flow path. Picks the most-constrained subset first, fills classes
/// best-fit, and skips symmetric empty classes; the node budget is spread
/// over seeded restarts with reshuffled subset orders.
pub fn exact_cover_partition(
    m: u32,
    e: u32,
    sizes: &[usize],
    max_nodes: u64,
    seed: u64,
) -> Result<SubsetPartition, BaranyaiError> {
    check_preconditions(m, e, sizes)?;
    let subsets = all_e_subset_masks(m, e);
    let per_restart = (max_nodes / 64).max(10_000);
    let mut used = 0u64;
    let mut restart = 0u64;
    while used < max_nodes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ restart.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        restart += 1;
        let mut order: Vec<usize> = (0..subsets.len()).collect();
        if restart > 1 {
            order.shuffle(&mut rng);
        }
        let mut assignment = vec![usize::MAX; subsets.len()];
        let mut class_masks = vec![0u64; sizes.len()];
        let mut class_fill = vec![0usize; sizes.len()];
        let mut nodes_left = per_restart.min(max_nodes - used);
        let granted = nodes_left;
        if backtrack(
            &subsets,
            &order,
            sizes,
            &mut assignment,
            &mut class_masks,
            &mut class_fill,
            &mut nodes_left,
        ) {
            let mut classes: Vec<Vec<Vec<Vertex>>> = sizes.iter().map(|_| Vec::new()).collect();
            for (si, &ci) in assignment.iter().enumerate() {
                classes[ci].push(mask_to_subset(subsets[si]));
            }
            for class in &mut classes {
                class.sort();
            }
            let out = SubsetPartition { m, e, classes };
            debug_assert!(verify_partition(&out, sizes));
            return Ok(out);
        }
        used += granted - nodes_left;
        // A restart that exhausted its whole tree without spending its cap
        // proved infeasibility outright.
        if nodes_left > 0 {
            break;
        }
    }
    Err(BaranyaiError::SearchExhausted(used))
}

pub(crate) fn all_e_subset_masks(m: u32, e: u32) -> Vec<u64> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(e as usize);
    fn rec(m: u32, e: u32, start: u32, current: &mut Vec<u32>, out: &mut Vec<u64>) {
        if current.len() == e as usize {
            out.push(current.iter().fold(0u64, |acc, &v| acc | (1u64 << v)));
            return;
        }
        for v in start..m {
            current.push(v);
            rec(m, e, v + 1, current, out);
            current.pop();
        }
    }
    rec(m, e, 0, &mut current, &mut out);
    out
}

fn backtrack(
    subsets: &[u64],
    order: &[usize],
    sizes: &[usize],
    assignment: &mut [usize],
    class_masks: &mut [u64],
    class_fill: &mut [usize],
    nodes_left: &mut u64,
) -> bool {
    // Most-constrained unassigned subset, scanning in `order`.
    let mut best: Option<(usize, usize)> = None;
    for &si in order {
        if assignment[si] != usize::MAX {
            continue;
        }
        let mut feasible = 0;
        for ci in 0..sizes.len() {
            if class_fill[ci] < sizes[ci] && class_masks[ci] & subsets[si] == 0 {
                feasible += 1;
            }
        }
        if best.map_or(true, |(_, f)| feasible < f) {
            best = Some((si, feasible));
            if feasible <= 1 {
                break;
            }
        }
    }
    let Some((si, feasible)) = best else {
        return true; // everything assigned
    };
    if feasible == 0 {
        return false;
    }
    if *nodes_left == 0 {
        return false;
    }
    *nodes_left -= 1;
    // Candidate classes, best-fit first (fullest classes tried before
    // fresher ones); still-empty classes of equal target size are
    // interchangeable, so only the first of each size is tried.
    let mut candidates: Vec<usize> = Vec::new();
    let mut tried_fresh_sizes: Vec<usize> = Vec::new();
    for ci in 0..sizes.len() {
        if class_fill[ci] >= sizes[ci] || class_masks[ci] & subsets[si] != 0 {
            continue;
        }
        if class_fill[ci] == 0 {
            if tried_fresh_sizes.contains(&sizes[ci]) {
                continue;
            }
            tried_fresh_sizes.push(sizes[ci]);
        }
        candidates.push(ci);
    }
    candidates.sort_by(|&a, &b| {
        (sizes[a] - class_fill[a])
            .cmp(&(sizes[b] - class_fill[b]))
            .then(a.cmp(&b))
    });
    for ci in candidates {
        assignment[si] = ci;
        class_masks[ci] |= subsets[si];
        class_fill[ci] += 1;
        if backtrack(
            subsets, order, sizes, assignment, class_masks, class_fill, nodes_left,
        ) {
            return true;
        }
        assignment[si] = usize::MAX;
        class_masks[ci] &= !subsets[si];
        class_fill[ci] -= 1;
        if *nodes_left == 0 {
            return false;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Packing an arbitrary family into disjoint classes.
// ---------------------------------------------------------------------------

/// Packs the given subset family (as bitmasks) into classes of pairwise
/// disjoint members, aiming for `floor(n / class_size)` classes of
/// `class_size` plus one class holding the remainder. Returns classes of
/// indices into `family`, largest classes first.
///
/// For `class_size == 2` this is maximum matching on the disjointness
/// graph, approached by greedy matching plus length-3 augmentation over
/// seeded restarts; larger sizes use greedy filling with a move/merge
/// repair. If the target shape is not reached the packing is still a valid
/// disjoint-class cover, just with more classes, and the caller reports the
/// resulting count.
pub fn pack_family_into_disjoint_classes(
    family: &[u64],
    class_size: usize,
    seed: u64,
) -> Vec<Vec<usize>> {
    assert!(class_size >= 1);
    let n = family.len();
    if class_size == 1 {
        return (0..n).map(|i| vec![i]).collect();
    }
    let target = n / class_size + usize::from(n % class_size != 0);
    let mut best: Option<Vec<Vec<usize>>> = None;
    for attempt in 0..24u64 {
        let classes = if class_size == 2 {
            pack_pairs(family, seed.wrapping_add(attempt))
        } else {
            pack_greedy(family, class_size, seed.wrapping_add(attempt))
        };
        if best.as_ref().map_or(true, |b| classes.len() < b.len()) {
            let done = classes.len() <= target;
            best = Some(classes);
            if done {
                break;
            }
        }
    }
    let mut classes = best.unwrap();
    classes.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    classes
}

/// Greedy matching with length-3 augmentation on the disjointness graph.
fn pack_pairs(family: &[u64], seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.len();
    let disjoint = |a: usize, b: usize| family[a] & family[b] == 0;
    let mut mate = vec![usize::MAX; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    for &u in &order {
        if mate[u] != usize::MAX {
            continue;
        }
        if let Some(&v) = order.iter().find(|&&v| v != u && mate[v] == usize::MAX && disjoint(u, v)) {
            mate[u] = v;
            mate[v] = u;
        }
    }
    loop {
        let singles: Vec<usize> = (0..n).filter(|&u| mate[u] == usize::MAX).collect();
        if singles.len() <= 1 {
            break;
        }
        let mut improved = false;
        'pairs: for (i, &u) in singles.iter().enumerate() {
            if mate[u] != usize::MAX {
                continue;
            }
            for &v in &singles[i + 1..] {
                if mate[v] != usize::MAX {
                    continue;
                }
                if disjoint(u, v) {
                    mate[u] = v;
                    mate[v] = u;
                    improved = true;
                    continue 'pairs;
                }
                // Augment across one matched edge (a, b):
                // u-a and b-v, or u-b and a-v.
                for a in 0..n {
                    let b = mate[a];
                    if b == usize::MAX || b < a {
                        continue;
                    }
                    if disjoint(u, a) && disjoint(b, v) {
                        mate[u] = a;
                        mate[a] = u;
                        mate[b] = v;
                        mate[v] = b;
                        improved = true;
                        continue 'pairs;
                    }
                    if disjoint(u, b) && disjoint(a, v) {
                        mate[u] = b;
                        mate[b] = u;
                        mate[a] = v;
                        mate[v] = a;
                        improved = true;
                        continue 'pairs;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    let mut out = Vec::new();
    let mut seen = vec![false; n];
    for u in 0..n {
        if seen[u] {
            continue;
        }
        seen[u] = true;
        if mate[u] == usize::MAX {
            out.push(vec![u]);
        } else {
            seen[mate[u]] = true;
            out.push(vec![u.min(mate[u]), u.max(mate[u])]);
        }
    }
    out
}

fn pack_greedy(family: &[u64], class_size: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut classes: Vec<(u64, Vec<usize>)> = Vec::new();
    for &si in &order {
        match classes
            .iter_mut()
            .find(|(mask, members)| members.len() < class_size && mask & family[si] == 0)
        {
            Some((mask, members)) => {
                *mask |= family[si];
                members.push(si);
            }
            None => classes.push((family[si], vec![si])),
        }
    }
    // Drain small classes into any other class with room.
    loop {
        classes.sort_by_key(|(_, m)| m.len());
        let mut moved = false;
        'outer: for src in 0..classes.len() {
            if classes[src].1.len() >= class_size {
                break;
            }
            for mi in 0..classes[src].1.len() {
                let item = classes[src].1[mi];
                for dst in 0..classes.len() {
                    if dst != src
                        && classes[dst].1.len() < class_size
                        && classes[dst].1.len() > classes[src].1.len()
                        && classes[dst].0 & family[item] == 0
                    {
                        classes[src].1.remove(mi);
                        classes[src].0 &= !family[item];
                        classes[dst].0 |= family[item];
                        classes[dst].1.push(item);
                        moved = true;
                        break 'outer;
                    }
                }
            }
        }
        if !moved {
            break;
        }
    }
    classes.retain(|(_, m)| !m.is_empty());
    classes
        .into_iter()
        .map(|(_, mut members)| {
            members.sort_unstable();
            members
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(9, 3), 84);
        assert_eq!(binomial(2 * 3, 3), 20);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn single_subset_ground_set() {
        let p = partition_all_subsets(3, 3, &[1], 0).unwrap();
        assert_eq!(p.classes, vec![vec![vec![1, 2, 3]]]);
    }

    #[test]
    fn six_choose_three_into_ten_parallel_pairs() {
        let sizes = vec![2usize; 10];
        let p = partition_all_subsets(6, 3, &sizes, 0).unwrap();
        assert!(verify_partition(&p, &sizes));
        // Each class is a perfect parallel class on 6 points.
        for class in &p.classes {
            let union: u32 = class.iter().flatten().count() as u32;
            assert_eq!(union, 6);
        }
    }

    #[test]
    fn seven_choose_three_with_mixed_class_sizes() {
        let mut sizes = vec![2usize; 14];
        sizes.extend(vec![1usize; 7]);
        let p = partition_all_subsets(7, 3, &sizes, 3).unwrap();
        assert!(verify_partition(&p, &sizes));
        assert_eq!(p.classes.iter().map(|c| c.len()).sum::<usize>(), 35);
    }

    #[test]
    fn oversized_class_is_rejected() {
        assert_eq!(
            partition_all_subsets(6, 3, &[3; 7], 0),
            Err(BaranyaiError::InfeasibleRequest(
                "class size 3 outside 1..=2 (= floor(m/e))".into()
            ))
        );
    }

    #[test]
    fn wrong_total_is_rejected() {
        assert!(matches!(
            partition_all_subsets(6, 3, &[2; 9], 0),
            Err(BaranyaiError::InfeasibleRequest(_))
        ));
    }

    #[test]
    fn determinism_per_seed() {
        let sizes = vec![2usize; 10];
        let a = partition_all_subsets(6, 3, &sizes, 42).unwrap();
        let b = partition_all_subsets(6, 3, &sizes, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verify_rejects_a_moved_subset() {
        let sizes = vec![2usize; 10];
        let mut p = partition_all_subsets(6, 3, &sizes, 0).unwrap();
        let s = p.classes[0].pop().unwrap();
        p.classes[1].push(s);
        assert!(!verify_partition(&p, &sizes));
    }

    #[test]
    fn verify_accepts_hand_built_one_factorization_of_k4() {
        // The three perfect matchings of K_4, as 2-subset classes.
        let p = SubsetPartition {
            m: 4,
            e: 2,
            classes: vec![
                vec![vec![1, 2], vec![3, 4]],
                vec![vec![1, 3], vec![2, 4]],
                vec![vec![1, 4], vec![2, 3]],
            ],
        };
        assert!(verify_partition(&p, &[2, 2, 2]));
    }

    #[test]
    fn fallback_agrees_on_small_instances() {
        for (m, e, sizes) in [
            (6u32, 3u32, vec![2usize; 10]),
            (7, 3, {
                let mut v = vec![2; 14];
                v.extend(vec![1; 7]);
                v
            }),
            (5, 2, vec![2; 5]),
        ] {
            let flow = partition_all_subsets(m, e, &sizes, 1).unwrap();
            let bt = exact_cover_partition(m, e, &sizes, 5_000_000, 1).unwrap();
            assert!(verify_partition(&flow, &sizes));
            assert!(verify_partition(&bt, &sizes));
        }
    }

    #[test]
    fn family_packing_reaches_exact_shape_for_pairs() {
        // All 3-subsets of [9] except three disjoint canonical ones, packed
        // into classes of two disjoint subsets: 81 = 2*40 + 1.
        let canon = [0b000000111u64, 0b000111000, 0b111000000];
        let family: Vec<u64> = all_e_subset_masks(9, 3)
            .into_iter()
            .filter(|m| !canon.contains(m))
            .collect();
        assert_eq!(family.len(), 81);
        let classes = pack_family_into_disjoint_classes(&family, 2, 7);
        assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), 81);
        for class in &classes {
            let mut mask = 0u64;
            for &idx in class {
                assert_eq!(mask & family[idx], 0);
                mask |= family[idx];
            }
            assert!(class.len() <= 2);
        }
        assert_eq!(classes.len(), 41, "expected 40 pairs + 1 singleton");
    }
}
