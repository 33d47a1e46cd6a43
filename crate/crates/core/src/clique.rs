//! Exact maximum clique by branch and bound with greedy-coloring bounds.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    fn subtract_in_place(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

struct Search<'a> {
    adj: &'a [BitSet],
    best: Vec<usize>,
    /// Only cliques larger than this are recorded.
    floor: usize,
}

impl Search<'_> {
    /// Greedy sequential coloring of `cands`; returns vertices in nondecreasing color order.
    fn color_order(&self, cands: &BitSet) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(cands.len());
        let mut uncolored = cands.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.subtract_in_place(&self.adj[v]);
                uncolored.remove(v);
                out.push((v, color));
            }
        }
        out
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut cands: BitSet) {
        let order = self.color_order(&cands);
        for &(v, color) in order.iter().rev() {
            if current.len() + color <= self.best.len().max(self.floor) {
                return;
            }
            current.push(v);
            let next = cands.intersect(&self.adj[v]);
            if next.is_empty() {
                if current.len() > self.best.len().max(self.floor) {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            cands.remove(v);
        }
    }
}

/// A maximum clique inside the vertex set `cands`, provided it has more than
/// `floor` vertices.
pub fn max_clique_among(adj: &[BitSet], cands: &BitSet, floor: usize) -> Option<Vec<usize>> {
    if cands.is_empty() {
        return None;
    }
    let mut search = Search { adj, best: Vec::new(), floor };
    search.expand(&mut Vec::new(), cands.clone());
    let mut best = search.best;
    best.sort_unstable();
    (!best.is_empty()).then_some(best)
}

/// Maximum clique among cliques containing `root`.
pub fn max_clique_containing(adj: &[BitSet], root: usize) -> Vec<usize> {
    let mut out = vec![root];
    if let Some(rest) = max_clique_among(adj, &adj[root], 0) {
        out.extend(rest);
    }
    out.sort_unstable();
    out
}

/// Maximum clique of the whole graph.
pub fn max_clique(adj: &[BitSet]) -> Vec<usize> {
    let mut all = BitSet::new(adj.len());
    for v in 0..adj.len() {
        all.insert(v);
    }
    max_clique_among(adj, &all, 0).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<BitSet> {
        let mut adj = vec![BitSet::new(n); n];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj
    }

    #[test]
    fn small_graphs() {
        // Two triangles sharing vertex 2 plus a 4-clique on 3..7.
        let g = graph(7, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)]);
        assert_eq!(max_clique(&g), vec![3, 4, 5, 6]);
        assert_eq!(max_clique_containing(&g, 0).len(), 3);
        assert_eq!(max_clique(&graph(3, &[])).len(), 1);
        let mut upper = BitSet::new(7);
        for v in 3..7 {
            upper.insert(v);
        }
        assert_eq!(max_clique_among(&g, &upper, 3), Some(vec![3, 4, 5, 6]));
        assert_eq!(max_clique_among(&g, &upper, 4), None);
    }

    #[test]
    fn bitset_iter() {
        let mut b = BitSet::new(130);
        for i in [0, 63, 64, 129] {
            b.insert(i);
        }
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(b.len(), 4);
        assert_eq!(b.first(), Some(0));
    }
}
