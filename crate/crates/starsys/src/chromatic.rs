//! Deciding k-colourability, certifying chromatic numbers, and deciding
//! uniqueness of k-colourings by exhaustive, budgeted search.
//!
//! A weak k-colouring partitions the vertices into k classes so that no
//! block has all of its `e + 1` vertices in one class. The searcher runs a
//! depth-first enumeration over vertices in ascending id order (the
//! constructions lay gadget vertices out first, which makes this the
//! forcing-friendly order), propagates the "e vertices of a block share a
//! colour" rule incrementally, and breaks colour symmetry by only allowing
//! a branch to open colour `c` once colours below `c` are in use. With that
//! symmetry breaking the enumeration visits exactly one representative per
//! orbit of proper colourings under colour permutation, which is what the
//! uniqueness decision needs.

use std::time::Instant;

use crate::system::{Colouring, StarSystem, Vertex};
use crate::verify::check_colouring;

/// Node, wall-clock, and worker limits for a search call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: f64,
    pub workers: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000_000,
            max_seconds: 300.0,
            workers: 1,
        }
    }
}

impl SearchBudget {
    pub fn with_nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Default::default()
        }
    }
}

/// Evidence that an exhaustive search completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustionRecord {
    pub nodes: u64,
    pub max_depth: u32,
}

/// Progress statistics reported when a budget runs out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: u32,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Colourable(Colouring),
    NotColourable(ExhaustionRecord),
    BudgetExceeded(SearchStats),
}

#[derive(Debug, Clone, PartialEq)]
pub enum UniquenessOutcome {
    /// Exactly one proper k-colouring up to colour permutation.
    Unique(Colouring),
    /// Two proper colourings in distinct permutation orbits.
    Multiple(Colouring, Colouring),
    NotColourable(ExhaustionRecord),
    BudgetExceeded(SearchStats),
}

/// Paired evidence for a chromatic number: the k-colouring is the upper
/// bound, the exhaustion record at k-1 the lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ChromaticCertificate {
    pub chi: u32,
    pub colouring: Colouring,
    /// Exhaustion at `chi - 1`; `None` only when `chi == 1`.
    pub refutation: Option<ExhaustionRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChromaticOutcome {
    Determined(ChromaticCertificate),
    /// The budget ran out: the chromatic number lies in `lo..=hi`.
    Bounded { lo: u32, hi: u32, stats: SearchStats },
}

const MIXED: u32 = u32::MAX;

/// Incremental search state over one system.
struct Searcher<'a> {
    sys: &'a StarSystem,
    k: u32,
    /// incidence_off[v-1]..incidence_off[v] indexes block ids in incidence.
    incidence_off: Vec<u32>,
    incidence: Vec<u32>,
    domains: Vec<u32>,
    assignment: Vec<u32>, // 0 = unassigned
    block_assigned: Vec<u32>,
    block_mono: Vec<u32>, // colour shared by all assigned vertices, or MIXED
    colour_usage: Vec<u64>,
    used_mask: u32,
    nodes: u64,
    max_depth: u32,
    start: Instant,
    budget: SearchBudget,
    deadline_check: u64,
}

enum TrailEntry {
    Assigned(Vertex),
    Domain(Vertex, u32),
    Block(u32, u32, u32),
    Used(u32),
}

enum Step {
    Done,
    Conflict,
    Out(SearchStats),
}

impl<'a> Searcher<'a> {
    fn new(sys: &'a StarSystem, k: u32, budget: SearchBudget) -> Self {
        assert!(k >= 1 && k <= 32, "supported colour counts are 1..=32");
        let n = sys.n() as usize;
        let mut counts = vec![0u32; n];
        for b in sys.blocks() {
            for &v in b.vertices() {
                counts[v as usize - 1] += 1;
            }
        }
        let mut incidence_off = vec![0u32; n + 1];
        for i in 0..n {
            incidence_off[i + 1] = incidence_off[i] + counts[i];
        }
        let mut cursor: Vec<u32> = incidence_off[..n].to_vec();
        let mut incidence = vec![0u32; incidence_off[n] as usize];
        for (bi, b) in sys.blocks().enumerate() {
            for &v in b.vertices() {
                let slot = &mut cursor[v as usize - 1];
                incidence[*slot as usize] = bi as u32;
                *slot += 1;
            }
        }
        let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        Searcher {
            sys,
            k,
            incidence_off,
            incidence,
            domains: vec![full; n],
            assignment: vec![0; n],
            block_assigned: vec![0; sys.block_count()],
            block_mono: vec![0; sys.block_count()],
            colour_usage: vec![0; k as usize + 1],
            used_mask: 0,
            nodes: 0,
            max_depth: 0,
            start: Instant::now(),
            budget,
            deadline_check: 0,
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.nodes > self.budget.max_nodes {
            return true;
        }
        self.deadline_check += 1;
        if self.deadline_check % 4096 == 0
            && self.start.elapsed().as_secs_f64() > self.budget.max_seconds
        {
            return true;
        }
        false
    }

    fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            max_depth: self.max_depth,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
        }
    }

    /// Assigns `v := c` and propagates; pushes undo information to `trail`.
    /// Returns false on conflict.
    fn assign(&mut self, v: Vertex, c: u32, trail: &mut Vec<TrailEntry>) -> bool {
        let mut queue = vec![(v, c)];
        while let Some((v, c)) = queue.pop() {
            let vi = v as usize - 1;
            if self.assignment[vi] != 0 {
                if self.assignment[vi] == c {
                    continue;
                }
                return false;
            }
            if self.domains[vi] & (1 << (c - 1)) == 0 {
                return false;
            }
            trail.push(TrailEntry::Domain(v, self.domains[vi]));
            trail.push(TrailEntry::Assigned(v));
            self.assignment[vi] = c;
            self.domains[vi] = 1 << (c - 1);
            self.colour_usage[c as usize] += 1;
            if self.colour_usage[c as usize] == 1 {
                trail.push(TrailEntry::Used(self.used_mask));
                self.used_mask |= 1 << (c - 1);
            }

            let lo = self.incidence_off[vi] as usize;
            let hi = self.incidence_off[vi + 1] as usize;
            for idx in lo..hi {
                let bi = self.incidence[idx] as usize;
                let (count, mono) = (self.block_assigned[bi], self.block_mono[bi]);
                if mono == MIXED {
                    trail.push(TrailEntry::Block(bi as u32, count, mono));
                    self.block_assigned[bi] = count + 1;
                    continue;
                }
                if count == 0 {
                    trail.push(TrailEntry::Block(bi as u32, count, mono));
                    self.block_assigned[bi] = 1;
                    self.block_mono[bi] = c;
                    continue;
                }
                if mono != c {
                    trail.push(TrailEntry::Block(bi as u32, count, mono));
                    self.block_assigned[bi] = count + 1;
                    self.block_mono[bi] = MIXED;
                    continue;
                }
                // All assigned vertices of this block share colour c.
                let new_count = count + 1;
                trail.push(TrailEntry::Block(bi as u32, count, mono));
                self.block_assigned[bi] = new_count;
                let width = self.sys.e() + 1;
                if new_count == width {
                    return false; // monochromatic block
                }
                if new_count == width - 1 {
                    let block = self.sys.block(bi);
                    let w = block
                        .vertices()
                        .iter()
                        .copied()
                        .find(|&u| self.assignment[u as usize - 1] == 0)
                        .expect("one vertex of the block must be unassigned");
                    let wi = w as usize - 1;
                    let bit = 1 << (c - 1);
                    if self.domains[wi] & bit != 0 {
                        trail.push(TrailEntry::Domain(w, self.domains[wi]));
                        self.domains[wi] &= !bit;
                        let dom = self.domains[wi];
                        if dom == 0 {
                            return false;
                        }
                        if dom.count_ones() == 1 {
                            queue.push((w, dom.trailing_zeros() + 1));
                        }
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: &mut Vec<TrailEntry>, mark: usize) {
        while trail.len() > mark {
            match trail.pop().unwrap() {
                TrailEntry::Assigned(v) => {
                    let vi = v as usize - 1;
                    let c = self.assignment[vi];
                    self.colour_usage[c as usize] -= 1;
                    self.assignment[vi] = 0;
                }
                TrailEntry::Domain(v, old) => self.domains[v as usize - 1] = old,
                TrailEntry::Block(b, count, mono) => {
                    self.block_assigned[b as usize] = count;
                    self.block_mono[b as usize] = mono;
                }
                TrailEntry::Used(old) => self.used_mask = old,
            }
        }
    }

    fn next_unassigned(&self, from: Vertex) -> Option<Vertex> {
        (from..=self.sys.n()).find(|&v| self.assignment[v as usize - 1] == 0)
    }

    fn extract_colouring(&self) -> Colouring {
        Colouring::new(self.k, self.assignment.clone()).expect("search assigns all vertices")
    }

    /// Enumerates canonical proper colourings in DFS order, invoking `emit`
    /// on each; `emit` returns true to keep searching. Returns `Done` when
    /// `emit` stopped the search, `Conflict` when the subtree is exhausted,
    /// `Out` on budget exhaustion.
    fn enumerate(
        &mut self,
        from: Vertex,
        trail: &mut Vec<TrailEntry>,
        depth: u32,
        emit: &mut dyn FnMut(&Colouring) -> bool,
    ) -> Step {
        self.max_depth = self.max_depth.max(depth);
        let Some(v) = self.next_unassigned(from) else {
            let col = self.extract_colouring();
            return if emit(&col) { Step::Conflict } else { Step::Done };
        };
        let vi = v as usize - 1;
        let highest_used = 32 - self.used_mask.leading_zeros();
        let cap = (highest_used + 1).min(self.k);
        let dom = self.domains[vi];
        for c in 1..=cap {
            if dom & (1 << (c - 1)) == 0 {
                continue;
            }
            self.nodes += 1;
            if self.out_of_budget() {
                return Step::Out(self.stats());
            }
            let mark = trail.len();
            if self.assign(v, c, trail) {
                match self.enumerate(v + 1, trail, depth + 1, emit) {
                    Step::Conflict => {}
                    Step::Done => {
                        self.undo(trail, mark);
                        return Step::Done;
                    }
                    Step::Out(s) => {
                        self.undo(trail, mark);
                        return Step::Out(s);
                    }
                }
            }
            self.undo(trail, mark);
        }
        Step::Conflict
    }
}

/// Searches for a proper weak k-colouring.
///
/// `Colourable` carries a colouring re-validated as proper;
/// `NotColourable` certifies an exhaustive search under colour-symmetry
/// breaking. Budget exhaustion is a verdict, not an error.
pub fn find_colouring(sys: &StarSystem, k: u32, budget: SearchBudget) -> SearchOutcome {
    let mut searcher = Searcher::new(sys, k, budget);
    let mut trail = Vec::new();
    let mut found: Option<Colouring> = None;
    let step = searcher.enumerate(1, &mut trail, 0, &mut |col| {
        found = Some(col.clone());
        false // stop at the first solution
    });
    match step {
        Step::Out(stats) => SearchOutcome::BudgetExceeded(stats),
        Step::Done => {
            let col = found.expect("Done implies an emitted colouring");
            debug_assert!(check_colouring(sys, &col).proper);
            SearchOutcome::Colourable(col)
        }
        Step::Conflict => SearchOutcome::NotColourable(ExhaustionRecord {
            nodes: searcher.nodes,
            max_depth: searcher.max_depth,
        }),
    }
}

/// Finds the smallest k admitting a proper colouring, with certificates on
/// both sides. Requires at least one block (so the answer is at least 2).
pub fn chromatic_number(sys: &StarSystem, budget: SearchBudget) -> ChromaticOutcome {
    assert!(sys.block_count() > 0, "chromatic number needs >= 1 block");
    let mut refutation = None;
    for k in 1..=sys.n() {
        match find_colouring(sys, k, budget) {
            SearchOutcome::Colourable(colouring) => {
                let cert = ChromaticCertificate {
                    chi: k,
                    colouring,
                    refutation,
                };
                debug_assert!(k == 1 || cert.refutation.is_some());
                return ChromaticOutcome::Determined(cert);
            }
            SearchOutcome::NotColourable(record) => refutation = Some(record),
            SearchOutcome::BudgetExceeded(stats) => {
                return ChromaticOutcome::Bounded {
                    lo: k,
                    hi: sys.n(),
                    stats,
                };
            }
        }
    }
    unreachable!("every system is properly colourable with n colours");
}

/// Decides whether the system has exactly one proper k-colouring up to
/// colour permutation, by enumerating canonical representatives and
/// stopping at the second.
pub fn is_uniquely_k_colourable(
    sys: &StarSystem,
    k: u32,
    budget: SearchBudget,
) -> UniquenessOutcome {
    let mut searcher = Searcher::new(sys, k, budget);
    let mut trail = Vec::new();
    let mut witnesses: Vec<Colouring> = Vec::new();
    let step = searcher.enumerate(1, &mut trail, 0, &mut |col| {
        witnesses.push(col.clone());
        witnesses.len() < 2
    });
    match step {
        Step::Out(stats) => UniquenessOutcome::BudgetExceeded(stats),
        Step::Done => {
            debug_assert_eq!(witnesses.len(), 2);
            let second = witnesses.pop().unwrap();
            let first = witnesses.pop().unwrap();
            debug_assert!(check_colouring(sys, &first).proper);
            debug_assert!(check_colouring(sys, &second).proper);
            UniquenessOutcome::Multiple(first, second)
        }
        Step::Conflict => match witnesses.len() {
            0 => UniquenessOutcome::NotColourable(ExhaustionRecord {
                nodes: searcher.nodes,
                max_depth: searcher.max_depth,
            }),
            1 => {
                let col = witnesses.pop().unwrap();
                debug_assert!(check_colouring(sys, &col).proper);
                UniquenessOutcome::Unique(col)
            }
            _ => unreachable!(),
        },
    }
}

// ---------------------------------------------------------------------------
// Forcing propagation.
// ---------------------------------------------------------------------------

/// A partial colouring: per-vertex candidate colour sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColouring {
    pub k: u32,
    /// Bitmask of candidate colours per vertex; bit `c-1` = colour c.
    pub domains: Vec<u32>,
}

impl PartialColouring {
    /// All vertices unassigned with full candidate sets.
    pub fn unconstrained(n: u32, k: u32) -> Self {
        assert!((1..=32).contains(&k));
        let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        PartialColouring {
            k,
            domains: vec![full; n as usize],
        }
    }

    pub fn assign(&mut self, v: Vertex, c: u32) {
        assert!(c >= 1 && c <= self.k);
        self.domains[v as usize - 1] = 1 << (c - 1);
    }

    pub fn assigned_colour(&self, v: Vertex) -> Option<u32> {
        let d = self.domains[v as usize - 1];
        (d.count_ones() == 1).then(|| d.trailing_zeros() + 1)
    }

    pub fn is_total(&self) -> bool {
        self.domains.iter().all(|d| d.count_ones() == 1)
    }

    /// Converts a total partial colouring into a [`Colouring`].
    pub fn to_colouring(&self) -> Option<Colouring> {
        if !self.is_total() {
            return None;
        }
        let assign = self.domains.iter().map(|d| d.trailing_zeros() + 1).collect();
        Some(Colouring::new(self.k, assign).expect("domains are within 1..=k"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationOutcome {
    /// Fixpoint of the forcing rule.
    Extended(PartialColouring),
    /// A candidate set emptied (or a block is fully monochromatic); the
    /// offending block index is reported.
    Conflict { block: usize },
}

/// Runs the forcing rule to fixpoint: if all but one vertex of a block are
/// assigned the same colour c and the last vertex still has c as a
/// candidate, remove c; candidate sets that become singletons count as
/// assignments. The rule only ever shrinks candidate sets, so the fixpoint
/// is unique regardless of evaluation order.
///
/// Implemented as repeated full scans so it runs on systems far too large
/// for the search engine's per-block bookkeeping.
pub fn propagate_forced(sys: &StarSystem, partial: &PartialColouring) -> PropagationOutcome {
    assert_eq!(partial.domains.len(), sys.n() as usize);
    assert!(partial.domains.iter().all(|&d| d != 0), "empty candidate set");
    let mut domains = partial.domains.clone();
    let e = sys.e();
    loop {
        let mut changed = false;
        for (bi, block) in sys.blocks().enumerate() {
            // Count vertices assigned to a single shared colour; the rule
            // is silent as soon as two assigned colours differ or two
            // vertices are undecided.
            let mut shared: u32 = 0;
            let mut assigned = 0u32;
            let mut open: Option<Vertex> = None;
            let mut silent = false;
            for &v in block.vertices() {
                let d = domains[v as usize - 1];
                if d.count_ones() == 1 {
                    if assigned == 0 {
                        shared = d;
                    } else if d != shared {
                        silent = true;
                        break;
                    }
                    assigned += 1;
                } else {
                    if open.is_some() {
                        silent = true;
                        break;
                    }
                    open = Some(v);
                }
            }
            if silent {
                continue;
            }
            if assigned == e + 1 {
                return PropagationOutcome::Conflict { block: bi };
            }
            if assigned == e {
                let w = open.expect("e assigned of e+1 leaves one open");
                let wi = w as usize - 1;
                if domains[wi] & shared != 0 {
                    domains[wi] &= !shared;
                    if domains[wi] == 0 {
                        return PropagationOutcome::Conflict { block: bi };
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return PropagationOutcome::Extended(PartialColouring {
                k: partial.k,
                domains,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::s3_6;

    fn budget() -> SearchBudget {
        SearchBudget::with_nodes(10_000_000)
    }

    #[test]
    fn base_system_is_2_colourable_but_not_1() {
        let s = s3_6();
        assert!(matches!(
            find_colouring(&s, 2, budget()),
            SearchOutcome::Colourable(_)
        ));
        assert!(matches!(
            find_colouring(&s, 1, budget()),
            SearchOutcome::NotColourable(_)
        ));
    }

    #[test]
    fn chromatic_number_of_base_is_2() {
        let s = s3_6();
        match chromatic_number(&s, budget()) {
            ChromaticOutcome::Determined(cert) => {
                assert_eq!(cert.chi, 2);
                assert!(cert.refutation.is_some());
                assert!(check_colouring(&s, &cert.colouring).proper);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_a_verdict() {
        let s = s3_6();
        let tiny = SearchBudget {
            max_nodes: 0,
            max_seconds: 300.0,
            workers: 1,
        };
        assert!(matches!(
            find_colouring(&s, 2, tiny),
            SearchOutcome::BudgetExceeded(_)
        ));
    }

    // Independent oracle: enumerate all k^n assignments.
    fn brute_force_proper(sys: &StarSystem, k: u32) -> Vec<Vec<u32>> {
        let n = sys.n() as usize;
        let mut out = Vec::new();
        let mut assign = vec![1u32; n];
        loop {
            let col = Colouring::new(k, assign.clone()).unwrap();
            if check_colouring(sys, &col).proper {
                out.push(assign.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                assign[i] += 1;
                if assign[i] <= k {
                    break;
                }
                assign[i] = 1;
                i += 1;
            }
        }
    }

    fn canonicalize(assign: &[u32]) -> Vec<u32> {
        let mut map = std::collections::HashMap::new();
        let mut next = 1u32;
        assign
            .iter()
            .map(|&c| {
                *map.entry(c).or_insert_with(|| {
                    let v = next;
                    next += 1;
                    v
                })
            })
            .collect()
    }

    fn orbit_count(sys: &StarSystem, k: u32) -> usize {
        let mut canon: Vec<Vec<u32>> = brute_force_proper(sys, k)
            .iter()
            .map(|a| canonicalize(a))
            .collect();
        canon.sort();
        canon.dedup();
        canon.len()
    }

    #[test]
    fn solver_agrees_with_brute_force_on_base_system() {
        let s = s3_6();
        for k in 1..=3 {
            let sat = !brute_force_proper(&s, k).is_empty();
            let got = matches!(find_colouring(&s, k, budget()), SearchOutcome::Colourable(_));
            assert_eq!(sat, got, "k={k}");
        }
    }

    #[test]
    fn uniqueness_verdicts_match_orbit_counts_on_base_system() {
        let s = s3_6();
        let orbits = orbit_count(&s, 2);
        match is_uniquely_k_colourable(&s, 2, budget()) {
            UniquenessOutcome::Unique(_) => assert_eq!(orbits, 1),
            UniquenessOutcome::Multiple(a, b) => {
                assert!(orbits >= 2);
                assert!(check_colouring(&s, &a).proper);
                assert!(check_colouring(&s, &b).proper);
                assert_ne!(canonicalize(a.assignments()), canonicalize(b.assignments()));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            is_uniquely_k_colourable(&s, 1, budget()),
            UniquenessOutcome::NotColourable(_)
        ));
    }

    #[test]
    fn canonical_enumeration_counts_orbits_exactly() {
        // Count solutions via the searcher and compare with the oracle's
        // orbit count, for k = 2 and 3.
        let s = s3_6();
        for k in 2..=3u32 {
            let mut count = 0usize;
            let mut searcher = Searcher::new(&s, k, budget());
            let mut trail = Vec::new();
            let _ = searcher.enumerate(1, &mut trail, 0, &mut |_| {
                count += 1;
                true
            });
            assert_eq!(count, orbit_count(&s, k), "k={k}");
        }
    }

    #[test]
    fn propagation_applies_the_forcing_rule() {
        let s = s3_6();
        // Assign {3,5,6} to colour 1. Block {1;3,5,6} then removes colour 1
        // from vertex 1's candidates, leaving colour 2.
        let mut partial = PartialColouring::unconstrained(6, 2);
        partial.assign(3, 1);
        partial.assign(5, 1);
        partial.assign(6, 1);
        match propagate_forced(&s, &partial) {
            PropagationOutcome::Extended(p) => {
                assert_eq!(p.assigned_colour(1), Some(2));
            }
            PropagationOutcome::Conflict { block } => panic!("conflict at {block}"),
        }
    }

    #[test]
    fn propagation_on_all_unassigned_is_identity() {
        let s = s3_6();
        let partial = PartialColouring::unconstrained(6, 2);
        match propagate_forced(&s, &partial) {
            PropagationOutcome::Extended(p) => assert_eq!(p, partial),
            _ => panic!("no rule applies"),
        }
    }

    #[test]
    fn propagation_detects_monochromatic_block() {
        let s = s3_6();
        let mut partial = PartialColouring::unconstrained(6, 2);
        for v in [1, 3, 5, 6] {
            partial.assign(v, 1);
        }
        assert_eq!(
            propagate_forced(&s, &partial),
            PropagationOutcome::Conflict { block: 0 }
        );
    }

    #[test]
    fn propagation_fixpoint_is_order_independent() {
        let s = s3_6();
        let mut reversed = StarSystem::new(3, 6).unwrap();
        let blocks: Vec<_> = s.blocks().map(|b| b.to_star()).collect();
        for b in blocks.iter().rev() {
            reversed.push_star(b).unwrap();
        }
        let mut partial = PartialColouring::unconstrained(6, 2);
        partial.assign(3, 1);
        partial.assign(5, 1);
        partial.assign(6, 1);
        let a = propagate_forced(&s, &partial);
        let b = propagate_forced(&reversed, &partial);
        match (a, b) {
            (PropagationOutcome::Extended(x), PropagationOutcome::Extended(y)) => {
                assert_eq!(x.domains, y.domains);
            }
            (x, y) => panic!("outcomes differ: {x:?} vs {y:?}"),
        }
    }

    #[test]
    fn verdicts_invariant_under_vertex_relabelling() {
        let s = s3_6();
        let rot: Vec<Vertex> = vec![4, 5, 6, 1, 2, 3];
        let rel = s.relabel(&rot).unwrap();
        for k in 1..=3 {
            let a = matches!(find_colouring(&s, k, budget()), SearchOutcome::Colourable(_));
            let b = matches!(find_colouring(&rel, k, budget()), SearchOutcome::Colourable(_));
            assert_eq!(a, b, "k={k}");
        }
    }
}
