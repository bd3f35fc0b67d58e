//! Core domain types: stars, star systems, colourings.
//!
//! Vertices are 1-based integers everywhere a caller can see them; the
//! paper-style block listings and the text file formats both use 1-based
//! ids, so keeping the internal convention identical avoids a translation
//! layer.

use thiserror::Error;

/// 1-based vertex id.
pub type Vertex = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("leaf count {got} does not match e={e}")]
    WrongLeafCount { e: u32, got: usize },
    #[error("vertex id {0} out of range 1..={1}")]
    VertexOutOfRange(Vertex, u32),
    #[error("center {0} also appears as a leaf")]
    CenterIsLeaf(Vertex),
    #[error("duplicate leaf {0} in block")]
    DuplicateLeaf(Vertex),
    #[error("map is not a bijection on 1..={0}")]
    NotABijection(u32),
    #[error("e must be >= 1 and n >= 2e (got e={e}, n={n})")]
    BadParameters { e: u32, n: u32 },
}

/// A single block: a center joined to `e` distinct leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Star {
    pub center: Vertex,
    /// Leaves in ascending order.
    pub leaves: Vec<Vertex>,
}

impl Star {
    pub fn new(center: Vertex, mut leaves: Vec<Vertex>) -> Self {
        leaves.sort_unstable();
        Star { center, leaves }
    }
}

/// An e-star system candidate: order `n`, leaf count `e`, and an ordered
/// list of blocks.
///
/// Blocks are stored flattened (`e + 1` ids per block, center first, leaves
/// ascending) so that systems with tens of millions of blocks stay within a
/// single allocation. Whether the blocks actually partition the edge set of
/// `K_n` is decided by [`crate::verify::validate_decomposition`], not by the
/// type itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSystem {
    e: u32,
    n: u32,
    data: Vec<Vertex>,
}

/// Borrowed view of one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRef<'a> {
    slice: &'a [Vertex],
}

impl<'a> BlockRef<'a> {
    #[inline]
    pub fn center(&self) -> Vertex {
        self.slice[0]
    }

    /// Leaves in ascending order.
    #[inline]
    pub fn leaves(&self) -> &'a [Vertex] {
        &self.slice[1..]
    }

    /// All `e + 1` vertices of the block, center first.
    #[inline]
    pub fn vertices(&self) -> &'a [Vertex] {
        self.slice
    }

    pub fn to_star(&self) -> Star {
        Star {
            center: self.center(),
            leaves: self.leaves().to_vec(),
        }
    }
}

impl StarSystem {
    /// Creates an empty system shell; blocks are added with
    /// [`StarSystem::push_block`].
    pub fn new(e: u32, n: u32) -> Result<Self, SystemError> {
        if e < 1 || n < 2 * e {
            return Err(SystemError::BadParameters { e, n });
        }
        Ok(StarSystem {
            e,
            n,
            data: Vec::new(),
        })
    }

    /// Creates a system and reserves space for `blocks` blocks up front.
    pub fn with_capacity(e: u32, n: u32, blocks: usize) -> Result<Self, SystemError> {
        let mut s = Self::new(e, n)?;
        s.data.reserve_exact(blocks * (e as usize + 1));
        Ok(s)
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn block_count(&self) -> usize {
        self.data.len() / (self.e as usize + 1)
    }

    /// The block count a valid decomposition must have: `n(n-1) / (2e)`.
    pub fn expected_block_count(&self) -> u64 {
        (self.n as u64) * (self.n as u64 - 1) / (2 * self.e as u64)
    }

    /// Appends a block, validating the per-block invariants (leaf count,
    /// id range, distinctness). Leaves are stored in ascending order.
    pub fn push_block(&mut self, center: Vertex, leaves: &[Vertex]) -> Result<(), SystemError> {
        if leaves.len() != self.e as usize {
            return Err(SystemError::WrongLeafCount {
                e: self.e,
                got: leaves.len(),
            });
        }
        if center < 1 || center > self.n {
            return Err(SystemError::VertexOutOfRange(center, self.n));
        }
        let start = self.data.len();
        self.data.push(center);
        self.data.extend_from_slice(leaves);
        self.data[start + 1..].sort_unstable();
        for w in self.data[start + 1..].windows(2) {
            if w[0] == w[1] {
                let dup = w[0];
                self.data.truncate(start);
                return Err(SystemError::DuplicateLeaf(dup));
            }
        }
        for &l in &self.data[start + 1..] {
            if l < 1 || l > self.n {
                self.data.truncate(start);
                return Err(SystemError::VertexOutOfRange(l, self.n));
            }
            if l == center {
                self.data.truncate(start);
                return Err(SystemError::CenterIsLeaf(center));
            }
        }
        Ok(())
    }

    pub fn push_star(&mut self, star: &Star) -> Result<(), SystemError> {
        self.push_block(star.center, &star.leaves)
    }

    #[inline]
    pub fn block(&self, idx: usize) -> BlockRef<'_> {
        let w = self.e as usize + 1;
        BlockRef {
            slice: &self.data[idx * w..(idx + 1) * w],
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = BlockRef<'_>> + '_ {
        let w = self.e as usize + 1;
        self.data.chunks_exact(w).map(|slice| BlockRef { slice })
    }

    /// Applies a vertex bijection `f` (given as `f[v-1]` = image of `v`)
    /// to every block. Block order is preserved; leaves are re-sorted.
    pub fn relabel(&self, f: &[Vertex]) -> Result<StarSystem, SystemError> {
        if f.len() != self.n as usize {
            return Err(SystemError::NotABijection(self.n));
        }
        let mut seen = vec![false; self.n as usize];
        for &img in f {
            if img < 1 || img > self.n {
                return Err(SystemError::VertexOutOfRange(img, self.n));
            }
            if seen[img as usize - 1] {
                return Err(SystemError::NotABijection(self.n));
            }
            seen[img as usize - 1] = true;
        }
        let mut out = StarSystem::with_capacity(self.e, self.n, self.block_count())?;
        let mut leaves = vec![0; self.e as usize];
        for b in self.blocks() {
            for (dst, &l) in leaves.iter_mut().zip(b.leaves()) {
                *dst = f[l as usize - 1];
            }
            out.push_block(f[b.center() as usize - 1], &leaves)?;
        }
        Ok(out)
    }

    /// Returns the `i`-th disjoint copy (`i >= 1`) of this system: every
    /// vertex `v` becomes `(i-1)·n + v`, so copies with distinct tags use
    /// disjoint vertex ranges. The returned shell has order `i·n`; only the
    /// final range carries blocks, so it is a building block for embeddings
    /// rather than a valid decomposition in its own right.
    pub fn disjoint_copy(&self, tag: u32) -> Result<StarSystem, SystemError> {
        assert!(tag >= 1, "copy tags are 1-based");
        let offset = (tag - 1) * self.n;
        let mut out = StarSystem::with_capacity(self.e, tag * self.n, self.block_count())?;
        let mut leaves = vec![0; self.e as usize];
        for b in self.blocks() {
            for (dst, &l) in leaves.iter_mut().zip(b.leaves()) {
                *dst = l + offset;
            }
            out.push_block(b.center() + offset, &leaves)?;
        }
        Ok(out)
    }
}

/// A total assignment of vertices to colour classes `1..=k`.
///
/// Empty classes are permitted; "uses all k colours" is a predicate of the
/// verifier, not an invariant of the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    k: u32,
    assign: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColouringError {
    #[error("assignment for vertex {0} is class {1}, outside 1..={2}")]
    ClassOutOfRange(Vertex, u32, u32),
    #[error("assignment covers {got} vertices, expected {expected}")]
    NotTotal { expected: u32, got: usize },
}

impl Colouring {
    /// Builds a colouring from `assign[v-1]` = class of vertex `v`.
    pub fn new(k: u32, assign: Vec<u32>) -> Result<Self, ColouringError> {
        for (i, &c) in assign.iter().enumerate() {
            if c < 1 || c > k {
                return Err(ColouringError::ClassOutOfRange(i as Vertex + 1, c, k));
            }
        }
        Ok(Colouring { k, assign })
    }

    /// Builds a colouring from explicit colour classes, in class order.
    /// Every vertex of `1..=n` must appear in exactly one class.
    pub fn from_classes(n: u32, classes: &[Vec<Vertex>]) -> Result<Self, ColouringError> {
        let k = classes.len() as u32;
        let mut assign = vec![0u32; n as usize];
        let mut covered = 0usize;
        for (ci, class) in classes.iter().enumerate() {
            for &v in class {
                if v >= 1 && v <= n && assign[v as usize - 1] == 0 {
                    covered += 1;
                }
                if v < 1 || v > n {
                    return Err(ColouringError::ClassOutOfRange(v, ci as u32 + 1, k));
                }
                assign[v as usize - 1] = ci as u32 + 1;
            }
        }
        if covered != n as usize {
            return Err(ColouringError::NotTotal {
                expected: n,
                got: covered,
            });
        }
        Colouring::new(k, assign)
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.assign.len() as u32
    }

    #[inline]
    pub fn class_of(&self, v: Vertex) -> u32 {
        self.assign[v as usize - 1]
    }

    pub fn assignments(&self) -> &[u32] {
        &self.assign
    }

    /// Sizes of the classes `1..=k`.
    pub fn class_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.k as usize];
        for &c in &self.assign {
            sizes[c as usize - 1] += 1;
        }
        sizes
    }

    /// Vertices of one class, ascending.
    pub fn class_members(&self, class: u32) -> Vec<Vertex> {
        self.assign
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == class)
            .map(|(i, _)| i as Vertex + 1)
            .collect()
    }

    pub fn nonempty_class_count(&self) -> u32 {
        self.class_sizes().iter().filter(|&&s| s > 0).count() as u32
    }
}

/// Admissibility of an e-star system of order n: `e | n(n-1)/2` and
/// `n >= 2e`.
pub fn is_admissible(e: u64, n: u64) -> bool {
    e >= 1 && n >= 2 * e && (n * (n - 1) / 2) % e == 0
}


#[cfg(test)]
pub(crate) use tests::s3_6;
