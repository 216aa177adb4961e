//! The infinite biregular tree `T(d1, d2)`.
//!
//! Vertices at even level have `d1 + 1` neighbors and vertices at odd level
//! have `d2 + 1`. The root is always at level 0, so it has `d1 + 1` children;
//! every other vertex has one parent and `d1` (even level) or `d2` (odd level)
//! children. A vertex is named by the sequence of child indices leading to it
//! from the root.
//!
//! [`VertexAddr`] is the canonical value type used by the analytic oracles.
//! [`LazyTree`] is an arena that materializes vertices on demand and is what
//! the simulators walk on.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hitting::VertexType;
use crate::sim::rng::combine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeParams {
    d1: u32,
    d2: u32,
}

impl TreeParams {
    pub fn new(d1: u32, d2: u32) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidTree { d1, d2 });
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> u32 {
        self.d1
    }

    pub fn d2(&self) -> u32 {
        self.d2
    }

    /// Fails on `T(1, 1)`, which is the integer line and has no phase
    /// transition.
    pub fn require_branching(&self) -> Result<()> {
        if self.d1 < 2 && self.d2 < 2 {
            Err(Error::DegenerateTree { d1: self.d1, d2: self.d2 })
        } else {
            Ok(())
        }
    }

    /// The same tree re-rooted at an odd-level vertex.
    pub fn swapped(&self) -> Self {
        Self { d1: self.d2, d2: self.d1 }
    }

    /// `d + 1` for a vertex of the given type.
    pub fn degree_of(&self, ty: VertexType) -> u32 {
        match ty {
            VertexType::One => self.d1 + 1,
            VertexType::Two => self.d2 + 1,
        }
    }

    /// Number of children of a vertex at `level`.
    pub fn children_at(&self, level: usize) -> u32 {
        match level {
            0 => self.d1 + 1,
            l if l % 2 == 0 => self.d1,
            _ => self.d2,
        }
    }

    /// Largest vertex degree minus one, the `D` of `T_D`.
    pub fn max_branching(&self) -> u32 {
        self.d1.max(self.d2)
    }
}

impl fmt::Display for TreeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({}, {})", self.d1, self.d2)
    }
}

/// A vertex named by its child-index path from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexAddr {
    path: Vec<u32>,
}

impl VertexAddr {
    pub fn root() -> Self {
        Self { path: Vec::new() }
    }

    /// Builds an address after checking every index against the child count
    /// of its level.
    pub fn from_path(path: Vec<u32>, t: TreeParams) -> Result<Self> {
        for (level, &idx) in path.iter().enumerate() {
            let n = t.children_at(level);
            if idx >= n {
                return Err(Error::InvalidParam {
                    name: "path",
                    reason: format!("index {idx} at level {level} exceeds {} children", n),
                });
            }
        }
        Ok(Self { path })
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    pub fn level(&self) -> usize {
        self.path.len()
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn parent(&self) -> Option<Self> {
        if self.path.is_empty() {
            None
        } else {
            Some(Self { path: self.path[..self.path.len() - 1].to_vec() })
        }
    }

    pub fn child(&self, idx: u32) -> Self {
        let mut path = self.path.clone();
        path.push(idx);
        Self { path }
    }

    fn common_prefix(&self, other: &Self) -> usize {
        self.path.iter().zip(&other.path).take_while(|(a, b)| a == b).count()
    }

    /// Moves to a uniformly chosen neighbor in place.
    pub fn step_random<R: Rng + ?Sized>(&mut self, t: TreeParams, rng: &mut R) {
        let deg = degree(self, t);
        let j = rng.random_range(0..deg);
        if self.path.is_empty() {
            self.path.push(j);
        } else if j == 0 {
            self.path.pop();
        } else {
            self.path.push(j - 1);
        }
    }
}

impl fmt::Display for VertexAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, idx) in self.path.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, "]")
    }
}

pub fn parity(v: &VertexAddr) -> VertexType {
    VertexType::of_level(v.level())
}

pub fn degree(v: &VertexAddr, t: TreeParams) -> u32 {
    t.degree_of(parity(v))
}

/// Parent first (when present), then children in index order.
pub fn neighbors(v: &VertexAddr, t: TreeParams) -> Vec<VertexAddr> {
    let n_children = t.children_at(v.level());
    let mut out = Vec::with_capacity(n_children as usize + 1);
    if let Some(parent) = v.parent() {
        out.push(parent);
    }
    out.extend((0..n_children).map(|idx| v.child(idx)));
    out
}

pub fn distance(u: &VertexAddr, v: &VertexAddr) -> usize {
    u.level() + v.level() - 2 * u.common_prefix(v)
}

pub type NodeId = u32;

const NO_PARENT: NodeId = NodeId::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: NodeId,
    index_in_parent: u32,
    level: u32,
    key: u64,
}

/// Arena of materialized vertices of `T(d1, d2)`.
///
/// Node identity is canonical: a vertex is materialized at most once, so
/// `NodeId` equality is vertex equality. Each node also carries a 64-bit key
/// derived from its path, used only to seed per-vertex random streams.
#[derive(Debug, Clone)]
pub struct LazyTree {
    params: TreeParams,
    nodes: Vec<Node>,
    children: HashMap<(NodeId, u32), NodeId>,
    limit: usize,
}

impl LazyTree {
    pub const ROOT: NodeId = 0;

    pub fn new(params: TreeParams, root_key: u64, limit: usize) -> Self {
        let root = Node { parent: NO_PARENT, index_in_parent: 0, level: 0, key: root_key };
        Self { params, nodes: vec![root], children: HashMap::new(), limit }
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn level(&self, id: NodeId) -> usize {
        self.nodes[id as usize].level as usize
    }

    pub fn key(&self, id: NodeId) -> u64 {
        self.nodes[id as usize].key
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        let p = self.nodes[id as usize].parent;
        (p != NO_PARENT).then_some(p)
    }

    pub fn degree(&self, id: NodeId) -> u32 {
        self.params.degree_of(VertexType::of_level(self.level(id)))
    }

    pub fn child(&mut self, id: NodeId, idx: u32) -> Result<NodeId> {
        if let Some(&c) = self.children.get(&(id, idx)) {
            return Ok(c);
        }
        if self.nodes.len() >= self.limit {
            return Err(Error::ResourceLimit { what: "materialized vertices", limit: self.limit });
        }
        let parent = self.nodes[id as usize];
        let node = Node {
            parent: id,
            index_in_parent: idx,
            level: parent.level + 1,
            key: combine(parent.key, u64::from(idx) + 1),
        };
        let c = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.children.insert((id, idx), c);
        Ok(c)
    }

    /// Neighbor number `j` in `0..degree(id)`, ordered as in [`neighbors`].
    pub fn neighbor(&mut self, id: NodeId, j: u32) -> Result<NodeId> {
        match self.parent(id) {
            None => self.child(id, j),
            Some(p) if j == 0 => Ok(p),
            Some(_) => self.child(id, j - 1),
        }
    }

    pub fn address(&self, mut id: NodeId) -> VertexAddr {
        let mut path = Vec::with_capacity(self.level(id));
        while let Some(p) = self.parent(id) {
            path.push(self.nodes[id as usize].index_in_parent);
            id = p;
        }
        path.reverse();
        VertexAddr { path }
    }

    /// Materializes the vertex at `addr`.
    pub fn locate(&mut self, addr: &VertexAddr) -> Result<NodeId> {
        let mut id = Self::ROOT;
        for &idx in addr.path() {
            id = self.child(id, idx)?;
        }
        Ok(id)
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_addr(t: TreeParams) -> impl Strategy<Value = VertexAddr> {
        proptest::collection::vec(any::<u32>(), 0..8).prop_map(move |raw| {
            let path = raw.iter().enumerate().map(|(level, r)| r % t.children_at(level)).collect();
            VertexAddr::from_path(path, t).unwrap()
        })
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            (u, v, w) in (arb_addr(TreeParams::new(2, 3).unwrap()),
                          arb_addr(TreeParams::new(2, 3).unwrap()),
                          arb_addr(TreeParams::new(2, 3).unwrap()))
        ) {
            prop_assert!(distance(&u, &w) <= distance(&u, &v) + distance(&v, &w));
            prop_assert_eq!(distance(&u, &v), distance(&v, &u));
            prop_assert_eq!(distance(&u, &v) == 0, u == v);
        }
    }
}
