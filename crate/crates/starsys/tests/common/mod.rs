//! Shared oracles for integration tests: brute-force colouring checks that
//! stay independent of the search engine, and a rejection-sampling
//! generator for random valid star systems.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use starsys::system::{Colouring, StarSystem, Vertex};
use starsys::verify::check_colouring;

/// Enumerates all k^n assignments; returns as soon as a proper one exists.
pub fn brute_force_has_colouring(sys: &StarSystem, k: u32) -> bool {
    let n = sys.n() as usize;
    let mut assign = vec![1u32; n];
    loop {
        let col = Colouring::new(k, assign.clone()).unwrap();
        if check_colouring(sys, &col).proper {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
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

/// Counts orbits of proper k-colourings under colour permutation, stopping
/// once `cap` distinct orbits are seen.
pub fn brute_force_orbits_capped(sys: &StarSystem, k: u32, cap: usize) -> usize {
    let n = sys.n() as usize;
    let mut orbits = std::collections::HashSet::new();
    let mut assign = vec![1u32; n];
    loop {
        let col = Colouring::new(k, assign.clone()).unwrap();
        if check_colouring(sys, &col).proper {
            orbits.insert(canonicalize(&assign));
            if orbits.len() >= cap {
                return orbits.len();
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return orbits.len();
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

/// Random valid e-star system of order n by greedy edge partition with
/// rejection; deterministic per seed. Returns `None` when all restarts get
/// stuck (the caller picks another seed).
pub fn random_star_system(e: u32, n: u32, seed: u64) -> Option<StarSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'restart: for _ in 0..64 {
        let mut remaining: Vec<Vec<Vertex>> = (1..=n)
            .map(|v| (1..=n).filter(|&u| u != v).collect())
            .collect();
        let mut stars: Vec<(Vertex, Vec<Vertex>)> = Vec::new();
        let mut edges_left = n as usize * (n as usize - 1) / 2;
        while edges_left > 0 {
            // Pick a random center that still has at least e free edges.
            let candidates: Vec<Vertex> = (1..=n)
                .filter(|&v| remaining[v as usize - 1].len() >= e as usize)
                .collect();
            let Some(&center) = candidates.as_slice().choose(&mut rng) else {
                continue 'restart;
            };
            let mut pool = remaining[center as usize - 1].clone();
            let mut leaves = Vec::with_capacity(e as usize);
            for _ in 0..e {
                let idx = rng.gen_range(0..pool.len());
                leaves.push(pool.swap_remove(idx));
            }
            for &l in &leaves {
                remaining[center as usize - 1].retain(|&x| x != l);
                remaining[l as usize - 1].retain(|&x| x != center);
            }
            stars.push((center, leaves));
            edges_left -= e as usize;
        }
        let mut sys = StarSystem::new(e, n).ok()?;
        for (c, leaves) in &stars {
            sys.push_block(*c, leaves).ok()?;
        }
        if starsys::verify::validate_decomposition(&sys).ok {
            return Some(sys);
        }
    }
    None
}
