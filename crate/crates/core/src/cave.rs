//! Nested cave simulator.
//!
//! A cave is a tree of rooms and tunnels: every room holds a tunnel system
//! and every tunnel leads to rooms. Explorers wander through it in an
//! arbitrary order and each location is tagged the first time it is
//! entered. A tagged node owns three consecutive slots in its parent's
//! interior: its tag, then the lower and upper bounds of its own interior.
//! Children are tagged strictly inside that interior, siblings keep their
//! structural order, and later insertions between tagged siblings go into
//! the gap after the left sibling's interior.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocator::{between_tags, insert_between};
use crate::label::{Bound, EcnTag, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Room,
    Tunnel,
}

impl NodeKind {
    fn at_depth(depth: usize) -> Self {
        if depth.is_multiple_of(2) {
            NodeKind::Room
        } else {
            NodeKind::Tunnel
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaveNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub depth: usize,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub tag: Option<EcnTag>,
    /// Interior bounds, assigned together with the tag.
    pub region: Option<Region>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cave {
    nodes: Vec<CaveNode>,
}

impl Cave {
    pub const ROOT: NodeId = NodeId(0);

    fn with_root() -> Self {
        Cave {
            nodes: vec![CaveNode {
                id: Cave::ROOT,
                kind: NodeKind::Room,
                depth: 0,
                parent: None,
                children: Vec::new(),
                tag: None,
                region: None,
            }],
        }
    }

    pub fn node(&self, id: NodeId) -> &CaveNode {
        &self.nodes[id.0]
    }

    pub fn node_mut(&mut self, id: NodeId) -> &mut CaveNode {
        &mut self.nodes[id.0]
    }

    pub fn nodes(&self) -> &[CaveNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Adds an untagged child of `parent` at position `index` among its
    /// children.
    pub fn insert_child(&mut self, parent: NodeId, index: usize) -> NodeId {
        let id = NodeId(self.nodes.len());
        let depth = self.node(parent).depth + 1;
        self.nodes.push(CaveNode {
            id,
            kind: NodeKind::at_depth(depth),
            depth,
            parent: Some(parent),
            children: Vec::new(),
            tag: None,
            region: None,
        });
        self.node_mut(parent).children.insert(index, id);
        id
    }

    /// Returns the node's tag, assigning it (and its interior) on first
    /// call. Untagged ancestors are tagged first.
    pub fn ensure_tagged(&mut self, id: NodeId) -> EcnTag {
        if let Some(tag) = &self.node(id).tag {
            return tag.clone();
        }
        let (gap, count, position) = match self.node(id).parent {
            None => (Region::unbounded(), 1, 1),
            Some(parent) => {
                self.ensure_tagged(parent);
                self.sibling_gap(parent, id)
            }
        };
        let slot = |k: u64| {
            insert_between(&gap, 3 * count, 3 * (position - 1) + k)
                .expect("slot positions lie in 1..=3n")
        };
        let tag = slot(1);
        let region = Region::new(slot(2), slot(3)).expect("slots ascend");
        let node = self.node_mut(id);
        node.tag = Some(tag.clone());
        node.region = Some(region);
        tag
    }

    /// The free gap around the untagged child `id`: from the interior of
    /// the nearest tagged sibling on the left (or the parent's lower bound)
    /// to the nearest tagged sibling on the right (or the parent's upper
    /// bound). Also returns how many untagged siblings share the gap and
    /// the 1-based position of `id` among them.
    fn sibling_gap(&self, parent: NodeId, id: NodeId) -> (Region, u64, u64) {
        let p = self.node(parent);
        let inside = p.region.as_ref().expect("tagged parent has a region");
        let siblings = &p.children;
        let index = siblings.iter().position(|c| *c == id).expect("child of parent");
        let left = siblings[..index]
            .iter()
            .rposition(|c| self.node(*c).tag.is_some());
        let right = siblings[index + 1..]
            .iter()
            .position(|c| self.node(*c).tag.is_some())
            .map(|k| index + 1 + k);
        let lower = match left {
            Some(l) => self.node(siblings[l]).region.as_ref().unwrap().upper().clone(),
            None => inside.lower().clone(),
        };
        let upper = match right {
            Some(r) => Bound::Tag(self.node(siblings[r]).tag.clone().unwrap()),
            None => inside.upper().clone(),
        };
        let first = left.map_or(0, |l| l + 1);
        let end = right.unwrap_or(siblings.len());
        let gap = Region::new(lower, upper).expect("sibling gaps are nonempty");
        (gap, (end - first) as u64, (index - first + 1) as u64)
    }
}

/// Builds a cave `depth` levels deep. Every node above the last level gets
/// between 1 and `branching` children, drawn from a generator seeded with
/// `seed`.
pub fn generate_cave(seed: u64, depth: usize, branching: usize) -> Cave {
    assert!(branching >= 1, "branching must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cave = Cave::with_root();
    let mut stack = vec![Cave::ROOT];
    while let Some(id) = stack.pop() {
        if cave.node(id).depth == depth {
            continue;
        }
        let k = rng.gen_range(1..=branching);
        let children: Vec<NodeId> = (0..k).map(|i| cave.insert_child(id, i)).collect();
        stack.extend(children.into_iter().rev());
    }
    cave
}

/// How an explorer chooses the next location.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Random walk from the entrance: each move goes to a uniformly chosen
    /// neighbour, parent or child.
    Random { seed: u64 },
    /// Depth-first tour, logging every arrival including backtracking.
    DepthFirst,
    /// Enters the root and its first child, then keeps digging a new
    /// sibling between the first two tagged children of the root.
    AdversarialDense,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Visit {
    pub node: NodeId,
    pub tag: EcnTag,
}

impl fmt::Display for Visit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.node, self.tag)
    }
}

/// Walks `cave` for at most `steps` moves, tagging locations on first
/// entry. Entering the cave counts as the first move.
pub fn explore(cave: &mut Cave, policy: Policy, steps: usize) -> Vec<Visit> {
    let mut log = Vec::with_capacity(steps);
    if steps == 0 {
        return log;
    }
    let mut visit = |cave: &mut Cave, node: NodeId| {
        let tag = cave.ensure_tagged(node);
        log.push(Visit { node, tag });
    };
    visit(cave, Cave::ROOT);
    match policy {
        Policy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut here = Cave::ROOT;
            let mut neighbours = Vec::new();
            for _ in 1..steps {
                let node = cave.node(here);
                neighbours.clear();
                neighbours.extend(node.parent);
                neighbours.extend_from_slice(&node.children);
                let Some(&next) = neighbours.choose(&mut rng) else {
                    break;
                };
                here = next;
                visit(cave, here);
            }
        }
        Policy::DepthFirst => {
            let mut stack = vec![(Cave::ROOT, 0usize)];
            for _ in 1..steps {
                let Some((node, next_child)) = stack.last_mut() else {
                    break;
                };
                let arrive = match cave.node(*node).children.get(*next_child) {
                    Some(&child) => {
                        *next_child += 1;
                        stack.push((child, 0));
                        child
                    }
                    None => {
                        stack.pop();
                        match stack.last() {
                            Some((parent, _)) => *parent,
                            None => break,
                        }
                    }
                };
                visit(cave, arrive);
            }
        }
        Policy::AdversarialDense => {
            if steps >= 2 {
                if cave.node(Cave::ROOT).children.is_empty() {
                    cave.insert_child(Cave::ROOT, 0);
                }
                let first = cave.node(Cave::ROOT).children[0];
                visit(cave, first);
            }
            for _ in 2..steps {
                let dug = cave.insert_child(Cave::ROOT, 1);
                visit(cave, dug);
            }
        }
    }
    log
}

/// A broken tagging invariant, with the nodes that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateTag { first: NodeId, second: NodeId },
    OutsideParent { node: NodeId, parent: NodeId },
    RegionNotNested { node: NodeId, parent: NodeId },
    /// The node's own tag does not precede its interior.
    TagInsideOwnRegion { node: NodeId },
    /// Tagged siblings out of structural order, or overlapping.
    SiblingOrder { left: NodeId, right: NodeId },
    /// A child is not tagged at a strictly deeper level than its parent.
    ContainmentDepth { node: NodeId, parent: NodeId },
    UntaggedParent { node: NodeId },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaggingReport {
    pub tagged: usize,
    pub violations: Vec<Violation>,
}

impl TaggingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The level at which `tag` separates from both bounds of `region`.
/// Infinite bounds separate at the top level.
pub fn divergence_depth(tag: &EcnTag, region: &Region) -> usize {
    [region.lower(), region.upper()]
        .into_iter()
        .filter_map(Bound::as_tag)
        .filter_map(|b| tag.first_difference(b))
        .max()
        .unwrap_or(0)
}

/// Checks tag uniqueness, containment in the parent's interior, sibling
/// order and the deeper-level rule for nested nodes.
pub fn verify_tagging(cave: &Cave) -> TaggingReport {
    let mut report = TaggingReport::default();
    let mut tagged: Vec<(&EcnTag, NodeId)> = cave
        .nodes()
        .iter()
        .filter_map(|n| n.tag.as_ref().map(|t| (t, n.id)))
        .collect();
    report.tagged = tagged.len();
    tagged.sort();
    for w in tagged.windows(2) {
        if w[0].0 == w[1].0 {
            report.violations.push(Violation::DuplicateTag {
                first: w[0].1,
                second: w[1].1,
            });
        }
    }

    let unbounded = Region::unbounded();
    for node in cave.nodes() {
        let (Some(tag), Some(region)) = (&node.tag, &node.region) else {
            continue;
        };
        if region.lower() <= &Bound::Tag(tag.clone()) {
            report
                .violations
                .push(Violation::TagInsideOwnRegion { node: node.id });
        }

        let mut prev: Option<&CaveNode> = None;
        for child in node.children.iter().map(|c| cave.node(*c)) {
            let (Some(ctag), Some(cregion)) = (&child.tag, &child.region) else {
                continue;
            };
            if !region.contains(ctag) {
                report.violations.push(Violation::OutsideParent {
                    node: child.id,
                    parent: node.id,
                });
            }
            if !region.strictly_contains(cregion) {
                report.violations.push(Violation::RegionNotNested {
                    node: child.id,
                    parent: node.id,
                });
            }
            if let Some(left) = prev {
                let left_end = left.region.as_ref().unwrap().upper();
                if left_end > &Bound::Tag(ctag.clone()) {
                    report.violations.push(Violation::SiblingOrder {
                        left: left.id,
                        right: child.id,
                    });
                }
            }
            prev = Some(child);

            let outer = node
                .parent
                .and_then(|g| cave.node(g).region.as_ref())
                .unwrap_or(&unbounded);
            if divergence_depth(ctag, region) <= divergence_depth(tag, outer) {
                report.violations.push(Violation::ContainmentDepth {
                    node: child.id,
                    parent: node.id,
                });
            }
        }
    }
    for node in cave.nodes() {
        if let (Some(_), Some(parent)) = (&node.tag, node.parent) {
            if cave.node(parent).tag.is_none() {
                report
                    .violations
                    .push(Violation::UntaggedParent { node: node.id });
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub count: usize,
    pub elapsed: Duration,
    /// Deepest generated tag; 0 when nothing was generated.
    pub max_depth: usize,
}

/// Dense same-point insertion: starting from `1` and `2`, each new tag goes
/// between `1` and the previous new tag, `count` times per row.
pub fn benchmark_insertions(counts: &[usize]) -> Vec<BenchRow> {
    let lower = EcnTag::unit(0, 1);
    counts
        .iter()
        .map(|&count| {
            let start = Instant::now();
            let mut upper = EcnTag::unit(0, 2);
            let mut max_depth = 0;
            for _ in 0..count {
                upper = between_tags(&lower, &upper, 1, 1).expect("dense gap");
                max_depth = max_depth.max(upper.depth());
            }
            BenchRow {
                count,
                elapsed: start.elapsed(),
                max_depth,
            }
        })
        .collect()
}

pub fn render_bench(rows: &[BenchRow]) -> String {
    let mut out = format!("{:>10}  {:>12}  {:>9}\n", "count", "elapsed_us", "max_depth");
    for r in rows {
        out.push_str(&format!(
            "{:>10}  {:>12}  {:>9}\n",
            r.count,
            r.elapsed.as_micros(),
            r.max_depth
        ));
    }
    out
}
