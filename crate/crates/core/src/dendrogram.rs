//! Clusters, linkage records, merge events and the dendrogram they form.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// A set of object indices. Within a level, clusters are identified by their
/// position when sorted by smallest member, so the id is not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cluster {
    members: Vec<usize>,
}

impl Cluster {
    /// Sorts and deduplicates `members`; returns `None` if empty.
    pub fn new(mut members: Vec<usize>) -> Option<Self> {
        if members.is_empty() {
            return None;
        }
        members.sort_unstable();
        members.dedup();
        Some(Cluster { members })
    }

    pub fn singleton(i: usize) -> Self {
        Cluster { members: vec![i] }
    }

    /// Smallest member index.
    pub fn rep(&self) -> usize {
        self.members[0]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub(crate) fn merge(parts: impl IntoIterator<Item = Cluster>) -> Cluster {
        let mut members: Vec<usize> = parts.into_iter().flat_map(|c| c.members).collect();
        members.sort_unstable();
        Cluster { members }
    }
}

impl AsRef<[usize]> for Cluster {
    fn as_ref(&self) -> &[usize] {
        &self.members
    }
}

/// One of the `n - 1` binary links of a dendrogram.
///
/// `a` and `b` are objects from the two joined clusters. For the single
/// criterion they are the closest cross pair; otherwise they are the two
/// clusters' smallest members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkageRecord {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    /// Level created by the merge, starting at 1.
    pub level: usize,
    /// Position in the global record order.
    pub order: usize,
}

impl LinkageRecord {
    pub(crate) fn new(a: usize, b: usize, distance: f64, level: usize) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        LinkageRecord { a, b, distance, level, order: 0 }
    }

    /// Global record order: level, then distance, then endpoints.
    pub fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then(self.distance.total_cmp(&other.distance))
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }
}

/// A set of clusters from level `level - 1` collapsing into one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeEvent {
    pub level: usize,
    /// Ids of the merged clusters at level `level - 1`, ascending.
    pub inputs: Vec<usize>,
    /// Id of the resulting cluster at `level`.
    pub output: usize,
    /// `inputs.len() - 1` records connecting the inputs.
    pub linkages: Vec<LinkageRecord>,
}

/// Result of an agglomerative run.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    levels: usize,
    events: Vec<MergeEvent>,
    records: Vec<LinkageRecord>,
    join_level: Vec<usize>,
}

impl Dendrogram {
    /// Assembles a dendrogram, assigning the global record order. `events`
    /// must already be sorted by level and output id.
    pub(crate) fn assemble(n: usize, levels: usize, mut events: Vec<MergeEvent>) -> Result<Self> {
        let mut records: Vec<LinkageRecord> = events.iter().flat_map(|e| e.linkages.iter().copied()).collect();
        records.sort_by(LinkageRecord::sort_key_cmp);
        for (order, r) in records.iter_mut().enumerate() {
            r.order = order;
        }
        for e in &mut events {
            for l in &mut e.linkages {
                let pos = records
                    .binary_search_by(|r| r.sort_key_cmp(l))
                    .map_err(|_| Error::Internal("linkage record missing from global order"))?;
                l.order = pos;
            }
        }
        let mut d = Dendrogram {
            n,
            levels,
            events,
            records,
            join_level: Vec::new(),
        };
        d.join_level = d.compute_join_levels();
        Ok(d)
    }

    fn compute_join_levels(&self) -> Vec<usize> {
        let mut join = vec![0; self.n];
        let mut uf = UnionFind::new(self.n);
        let mut size = vec![1usize; self.n];
        let mut start = 0;
        while start < self.records.len() {
            let level = self.records[start].level;
            let end = start + self.records[start..].iter().take_while(|r| r.level == level).count();
            for r in &self.records[start..end] {
                let (ra, rb) = (uf.find(r.a), uf.find(r.b));
                let s = size[ra] + size[rb];
                uf.union(ra, rb);
                let root = uf.find(ra);
                size[root] = s;
            }
            for (x, j) in join.iter_mut().enumerate() {
                if *j == 0 {
                    let r = uf.find(x);
                    if size[r] > 1 {
                        *j = level;
                    }
                }
            }
            start = end;
        }
        join
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of levels above the singletons.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn events(&self) -> &[MergeEvent] {
        &self.events
    }

    /// All records, sorted by `order`.
    pub fn records(&self) -> &[LinkageRecord] {
        &self.records
    }

    /// For each object, the first level at which its cluster has more than
    /// one member; 0 if it never joined (only for `n = 1` or stopped runs).
    pub fn join_levels(&self) -> &[usize] {
        &self.join_level
    }

    /// True when the run ended with a single cluster.
    pub fn is_complete(&self) -> bool {
        self.records.len() + 1 == self.n
    }

    /// Clusters present after `level` merge levels, sorted by smallest member.
    pub fn clusters_at_level(&self, level: usize) -> Vec<Cluster> {
        let mut uf = UnionFind::new(self.n);
        for r in self.records.iter().take_while(|r| r.level <= level) {
            uf.union(r.a, r.b);
        }
        let (labels, k) = uf.labels();
        let mut members = vec![Vec::new(); k];
        for (x, &l) in labels.iter().enumerate() {
            members[l].push(x);
        }
        members.into_iter().map(|m| Cluster { members: m }).collect()
    }

    /// Smallest member of every input cluster of every event, in event order.
    pub fn event_input_reps(&self) -> Vec<Vec<usize>> {
        let mut current: Vec<usize> = (0..self.n).collect();
        let mut out = Vec::with_capacity(self.events.len());
        let mut i = 0;
        while i < self.events.len() {
            let level = self.events[i].level;
            let mut removed = Vec::new();
            while i < self.events.len() && self.events[i].level == level {
                let reps: Vec<usize> = self.events[i].inputs.iter().map(|&id| current[id]).collect();
                removed.extend_from_slice(&reps[1..]);
                out.push(reps);
                i += 1;
            }
            removed.sort_unstable();
            current.retain(|r| removed.binary_search(r).is_err());
        }
        out
    }
}
