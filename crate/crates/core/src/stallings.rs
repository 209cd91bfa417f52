//! Folded based core graphs of finitely generated subgroups.
//!
//! A [`SubgroupGraph`] is always folded, core (every vertex other than the base
//! has degree at least two) and canonically numbered: vertex 0 is the base and
//! the others are numbered in breadth-first order, exploring edges in letter
//! order `a, A, b, B, ...`. Two graphs are equal exactly when they represent
//! the same subgroup, so `==` is subgroup equality and `Ord` is a canonical order.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::union_find::UnionFind;
use crate::words::{Alphabet, Letter, Morphism, Word};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupGraph {
    alphabet: Alphabet,
    vertices: usize,
    /// `trans[v * 2n + code]` is the endpoint of the edge leaving `v` with that letter.
    trans: Vec<u32>,
}

/// Worklist folding of a labelled graph, merging vertices with a union-find.
pub(crate) struct Folder {
    alphabet: Alphabet,
    uf: UnionFind,
    adj: Vec<Vec<(Letter, usize)>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    pub(crate) fn new(alphabet: Alphabet, vertices: usize) -> Self {
        Folder {
            alphabet,
            uf: UnionFind::new(vertices),
            adj: vec![Vec::new(); vertices],
            pending: Vec::new(),
        }
    }

    pub(crate) fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.uf.push()
    }

    fn insert_half(&mut self, u: usize, x: Letter, v: usize) {
        let r = self.uf.find(u);
        match self.adj[r].iter().find(|(l, _)| *l == x) {
            Some(&(_, t)) => self.pending.push((t, v)),
            None => self.adj[r].push((x, v)),
        }
    }

    fn drain(&mut self) {
        while let Some((p, q)) = self.pending.pop() {
            if let Some((keep, gone)) = self.uf.union(p, q) {
                let moved = core::mem::take(&mut self.adj[gone]);
                for (x, t) in moved {
                    self.insert_half(keep, x, t);
                }
            }
        }
    }

    pub(crate) fn add_edge(&mut self, u: usize, x: Letter, v: usize) {
        self.insert_half(u, x, v);
        self.insert_half(v, x.inverse(), u);
        self.drain();
    }

    /// Adds a path spelling `word` from `from` to `to`.
    pub(crate) fn add_path(&mut self, from: usize, word: &Word, to: usize) {
        let letters = word.letters();
        if letters.is_empty() {
            if from != to {
                self.pending.push((from, to));
                self.drain();
            }
            return;
        }
        let mut cur = from;
        for (i, &x) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                to
            } else {
                self.add_vertex()
            };
            self.add_edge(cur, x, next);
            cur = next;
        }
    }

    /// Trims to the core at `base` and renumbers canonically.
    pub(crate) fn finish(mut self, base: usize) -> SubgroupGraph {
        let width = 2 * self.alphabet.rank();
        let n = self.adj.len();
        let mut index = vec![usize::MAX; n];
        let mut roots = Vec::new();
        for v in 0..n {
            let r = self.uf.find(v);
            if index[r] == usize::MAX {
                index[r] = roots.len();
                roots.push(r);
            }
        }
        let mut table = vec![NONE; roots.len() * width];
        for (i, &r) in roots.iter().enumerate() {
            for k in 0..self.adj[r].len() {
                let (x, t) = self.adj[r][k];
                let target = index[self.uf.find(t)];
                table[i * width + x.code()] = target as u32;
            }
        }
        let base = index[self.uf.find(base)];
        canonical_core(self.alphabet, roots.len(), base, table)
    }
}

/// Core-trims a folded transition table and renumbers it breadth-first from `base`.
fn canonical_core(alphabet: Alphabet, n: usize, base: usize, mut table: Vec<u32>) -> SubgroupGraph {
    let width = 2 * alphabet.rank();
    let mut degree: Vec<usize> = (0..n)
        .map(|v| {
            table[v * width..(v + 1) * width]
                .iter()
                .filter(|&&t| t != NONE)
                .count()
        })
        .collect();
    let mut removed = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&v| v != base && degree[v] <= 1).collect();
    while let Some(v) = queue.pop() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for code in 0..width {
            let t = table[v * width + code];
            if t == NONE {
                continue;
            }
            let t = t as usize;
            table[v * width + code] = NONE;
            table[t * width + (code ^ 1)] = NONE;
            degree[t] -= 1;
            if t != base && !removed[t] && degree[t] <= 1 {
                queue.push(t);
            }
        }
    }
    // Breadth-first renumbering from the base.
    let mut order = vec![usize::MAX; n];
    let mut seq = vec![base];
    order[base] = 0;
    let mut head = 0;
    while head < seq.len() {
        let v = seq[head];
        head += 1;
        for code in 0..width {
            let t = table[v * width + code];
            if t != NONE && order[t as usize] == usize::MAX {
                order[t as usize] = seq.len();
                seq.push(t as usize);
            }
        }
    }
    let mut trans = vec![NONE; seq.len() * width];
    for (new, &old) in seq.iter().enumerate() {
        for code in 0..width {
            let t = table[old * width + code];
            if t != NONE {
                trans[new * width + code] = order[t as usize] as u32;
            }
        }
    }
    SubgroupGraph {
        alphabet,
        vertices: seq.len(),
        trans,
    }
}

/// Spanning-tree data behind [`SubgroupGraph::basis`] and rewriting.
/// Word read along the tree from the base to `v`. Paths are rebuilt on demand
/// because storing one per vertex costs quadratic memory on long cycles.
fn tree_path(parent: &[Option<(usize, usize)>], mut v: usize) -> Word {
    let mut letters = Vec::new();
    while let Some((p, code)) = parent[v] {
        letters.push(Letter::from_code(code));
        v = p;
    }
    letters.reverse();
    Word::from_letters(letters)
}

struct Tree {
    /// Tree edge `(parent, code)` entering each vertex; `None` at the base.
    parent: Vec<Option<(usize, usize)>>,
    /// Basis letter carried by each `(vertex, code)` slot, `None` on tree edges.
    label: Vec<Option<Letter>>,
    basis: Vec<Word>,
}

impl SubgroupGraph {
    /// Flower-and-fold construction of `<gens>`.
    pub fn from_generators(alphabet: Alphabet, gens: &[Word]) -> Result<Self> {
        let mut folder = Folder::new(alphabet, 1);
        for g in gens {
            alphabet.check(g)?;
            folder.add_path(0, g, 0);
        }
        Ok(folder.finish(0))
    }

    /// Folds an arbitrary labelled graph and takes the core at `base`.
    pub fn from_edges<I>(alphabet: Alphabet, vertices: usize, base: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Letter, usize)>,
    {
        let mut folder = Folder::new(alphabet, vertices.max(1));
        for (u, x, v) in edges {
            if !alphabet.contains(x) {
                return Err(Error::AlphabetMismatch {
                    rank: alphabet.rank(),
                    index: x.generator(),
                });
            }
            folder.add_edge(u, x, v);
        }
        Ok(folder.finish(base))
    }

    pub fn trivial(alphabet: Alphabet) -> Self {
        SubgroupGraph {
            alphabet,
            vertices: 1,
            trans: vec![NONE; 2 * alphabet.rank()],
        }
    }

    /// The whole group: the rose on all letters.
    pub fn whole(alphabet: Alphabet) -> Self {
        SubgroupGraph::generated_by_letters(alphabet, 0..alphabet.rank())
    }

    /// `<a_i : i in generators>`, a free factor of the ambient group.
    pub fn generated_by_letters<I: IntoIterator<Item = usize>>(
        alphabet: Alphabet,
        generators: I,
    ) -> Self {
        let mut g = SubgroupGraph::trivial(alphabet);
        for i in generators {
            if i < alphabet.rank() {
                g.trans[2 * i] = 0;
                g.trans[2 * i + 1] = 0;
            }
        }
        g
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.trans.iter().filter(|&&t| t != NONE).count() / 2
    }

    /// Rank of the subgroup: `|E| - |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertices
    }

    pub fn is_trivial(&self) -> bool {
        self.edge_count() == 0
    }

    pub fn is_whole(&self) -> bool {
        self.vertices == 1 && self.trans.iter().all(|&t| t == 0)
    }

    /// Endpoint of the edge leaving `v` labelled `x`, if any.
    pub fn target(&self, v: usize, x: Letter) -> Option<usize> {
        match self.trans.get(v * 2 * self.alphabet.rank() + x.code()) {
            Some(&t) if t != NONE => Some(t as usize),
            _ => None,
        }
    }

    /// Edges `(source, positive letter, target)` in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        let width = 2 * self.alphabet.rank();
        (0..self.vertices).flat_map(move |v| {
            (0..width).step_by(2).filter_map(move |code| {
                let t = self.trans[v * width + code];
                (t != NONE).then(|| (v, Letter::from_code(code), t as usize))
            })
        })
    }

    /// Generators (by index) that label some edge.
    pub fn letters_used(&self) -> Vec<usize> {
        let mut used: Vec<usize> = self.edges().map(|(_, x, _)| x.generator()).collect();
        used.sort_unstable();
        used.dedup();
        used
    }

    /// Follows `w` from `from`; `None` if the path falls off the graph.
    pub fn trace(&self, from: usize, w: &Word) -> Option<usize> {
        let mut v = from;
        for &x in w.letters() {
            if !self.alphabet.contains(x) {
                return None;
            }
            v = self.target(v, x)?;
        }
        Some(v)
    }

    /// Membership: `w` reads a closed path at the base.
    pub fn contains(&self, w: &Word) -> bool {
        self.trace(0, w) == Some(0)
    }

    /// `other <= self`.
    pub fn contains_subgroup(&self, other: &SubgroupGraph) -> bool {
        other.basis().iter().all(|w| self.contains(w))
    }

    fn tree(&self) -> Tree {
        let width = 2 * self.alphabet.rank();
        let n = self.vertices;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for code in 0..width {
                let t = self.trans[v * width + code];
                if t != NONE && !seen[t as usize] {
                    let t = t as usize;
                    seen[t] = true;
                    parent[t] = Some((v, code));
                    queue.push_back(t);
                }
            }
        }
        let mut label = vec![None; n * width];
        let mut basis = Vec::new();
        for (v, x, t) in self.edges() {
            let code = x.code();
            let is_tree = parent[t] == Some((v, code)) || parent[v] == Some((t, code ^ 1));
            if is_tree {
                continue;
            }
            let i = basis.len();
            basis.push(
                tree_path(&parent, v)
                    .mul(&Word::letter(x))
                    .mul(&tree_path(&parent, t).inverse()),
            );
            label[v * width + code] = Some(Letter::new(i, false));
            label[t * width + (code ^ 1)] = Some(Letter::new(i, true));
        }
        Tree {
            parent,
            label,
            basis,
        }
    }

    /// Spanning-tree basis, one word per edge outside the breadth-first tree.
    pub fn basis(&self) -> Vec<Word> {
        self.tree().basis
    }

    /// Word read along the spanning tree from the base to each vertex.
    pub fn tree_paths(&self) -> Vec<Word> {
        let parent = self.tree().parent;
        (0..self.vertices).map(|v| tree_path(&parent, v)).collect()
    }

    /// Expresses the basis of `self` as words over the basis of `ambient`
    /// (letter `i` standing for `ambient.basis()[i]`).
    pub fn rewrite_in(&self, ambient: &SubgroupGraph) -> Result<Vec<Word>> {
        let tree = ambient.tree();
        self.basis()
            .iter()
            .map(|w| ambient.coordinates_with(&tree, w))
            .collect()
    }

    /// Coordinates of a single element in the basis of `self`.
    pub fn coordinates(&self, w: &Word) -> Result<Word> {
        self.coordinates_with(&self.tree(), w)
    }

    fn coordinates_with(&self, tree: &Tree, w: &Word) -> Result<Word> {
        let width = 2 * self.alphabet.rank();
        let mut v = 0;
        let mut out = Vec::new();
        for &x in w.letters() {
            let t = match self
                .alphabet
                .contains(x)
                .then(|| self.target(v, x))
                .flatten()
            {
                Some(t) => t,
                None => return Err(Error::NotASubgroup { word: w.clone() }),
            };
            if let Some(l) = tree.label[v * width + x.code()] {
                out.push(l);
            }
            v = t;
        }
        if v != 0 {
            return Err(Error::NotASubgroup { word: w.clone() });
        }
        Ok(Word::from_letters(out))
    }

    /// The subgroup generated by the images of a basis.
    pub fn image(&self, m: &Morphism) -> Result<SubgroupGraph> {
        if m.alphabet() != self.alphabet {
            return Err(Error::RankMismatch {
                left: self.alphabet.rank(),
                right: m.rank(),
            });
        }
        let gens: Vec<Word> = self
            .basis()
            .iter()
            .map(|w| w.substitute(m.images()))
            .collect();
        SubgroupGraph::from_generators(self.alphabet, &gens)
    }

    /// Pullback: the core at `(base, base)` of the product graph, i.e. `self ∩ other`.
    pub fn intersect(&self, other: &SubgroupGraph) -> Result<SubgroupGraph> {
        if self.alphabet != other.alphabet {
            return Err(Error::RankMismatch {
                left: self.alphabet.rank(),
                right: other.alphabet.rank(),
            });
        }
        let width = 2 * self.alphabet.rank();
        let m = other.vertices;
        let mut id = vec![usize::MAX; self.vertices * m];
        let mut states = vec![(0usize, 0usize)];
        id[0] = 0;
        let mut edges = Vec::new();
        let mut head = 0;
        while head < states.len() {
            let (p, q) = states[head];
            let here = head;
            head += 1;
            for code in 0..width {
                let (tp, tq) = (self.trans[p * width + code], other.trans[q * width + code]);
                if tp == NONE || tq == NONE {
                    continue;
                }
                let key = tp as usize * m + tq as usize;
                if id[key] == usize::MAX {
                    id[key] = states.len();
                    states.push((tp as usize, tq as usize));
                }
                if code % 2 == 0 {
                    edges.push((here, Letter::from_code(code), id[key]));
                }
            }
        }
        SubgroupGraph::from_edges(self.alphabet, states.len(), 0, edges)
    }

    /// Elements of the subgroup of length at most `max_len`, in shortlex
    /// order, stopping after `limit` words. The flag reports truncation.
    pub fn elements_up_to(&self, max_len: usize, limit: usize) -> (Vec<Word>, bool) {
        let mut out = Vec::new();
        let mut path: Vec<Letter> = Vec::new();
        let mut truncated = false;
        self.walk(0, max_len, limit, &mut path, &mut out, &mut truncated);
        out.sort();
        (out, truncated)
    }

    fn walk(
        &self,
        v: usize,
        max_len: usize,
        limit: usize,
        path: &mut Vec<Letter>,
        out: &mut Vec<Word>,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        if v == 0 {
            if out.len() >= limit {
                *truncated = true;
                return;
            }
            out.push(Word::from_letters(path.iter().copied()));
        }
        if path.len() == max_len {
            return;
        }
        for x in self.alphabet.signed_letters() {
            if path.last() == Some(&x.inverse()) {
                continue;
            }
            if let Some(t) = self.target(v, x) {
                path.push(x);
                self.walk(t, max_len, limit, path, out, truncated);
                path.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{morph, sub, w};

    #[test]
    fn repeated_generator_folds_to_one_loop() {
        let h = sub(2, &["a", "a"]);
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.rank(), 1);
    }

    #[test]
    fn ab_and_ab_inverse() {
        // base -a-> v, v -b-> base, v -B-> base: two vertices, three edges.
        let h = sub(2, &["ab", "aB"]);
        assert_eq!((h.vertex_count(), h.edge_count(), h.rank()), (2, 3, 2));
    }

    #[test]
    fn coprime_powers_generate_a() {
        assert_eq!(sub(2, &["aa", "aaa"]), sub(2, &["a"]));
        assert_eq!(sub(2, &["aa", "aaa"]).basis(), vec![w("a")]);
    }

    #[test]
    fn membership() {
        let h = sub(2, &["aa", "b"]);
        assert!(h.contains(&w("aa")));
        assert!(!h.contains(&w("a")));
        assert!(h.contains(&Word::identity()));
        assert!(!h.contains(&w("c")));
    }

    #[test]
    fn ranks() {
        assert_eq!(SubgroupGraph::trivial(Alphabet::new(2).unwrap()).rank(), 0);
        assert_eq!(sub(2, &["a", "b", "ab"]).rank(), 2);
        assert_eq!(sub(2, &["aa"]).rank(), 1);
        assert!(sub(2, &[]).basis().is_empty());
    }

    #[test]
    fn equality_is_subgroup_equality() {
        assert_eq!(sub(2, &["a", "b"]), sub(2, &["ab", "b"]));
        assert_ne!(sub(2, &["a"]), sub(2, &["aa"]));
        assert!(sub(2, &["a", "b"]).is_whole());
    }

    #[test]
    fn intersections() {
        assert!(sub(2, &["a"])
            .intersect(&sub(2, &["b"]))
            .unwrap()
            .is_trivial());
        assert_eq!(
            sub(2, &["a"]).intersect(&sub(2, &["aa", "b"])).unwrap(),
            sub(2, &["aa"])
        );
        assert_eq!(
            sub(2, &["a", "b"]).intersect(&sub(2, &["a"])).unwrap(),
            sub(2, &["a"])
        );
    }

    #[test]
    fn rewriting() {
        assert_eq!(
            sub(2, &["aa"]).rewrite_in(&sub(2, &["a"])).unwrap(),
            vec![w("aa")]
        );
        let h = sub(3, &["a", "baccbCCBA"]);
        let coords = h.rewrite_in(&h).unwrap();
        assert_eq!(coords, vec![w("a"), w("b")]);
        let k = sub(2, &["aa", "b"]);
        assert_eq!(k.basis(), vec![w("b"), w("aa")]);
        // a^4 = (a^2)^2 and a^2 is the second basis word of K
        assert_eq!(sub(2, &["aaaa"]).rewrite_in(&k).unwrap(), vec![w("bb")]);
        assert!(matches!(
            sub(2, &["a"]).rewrite_in(&k),
            Err(Error::NotASubgroup { word }) if word == w("a")
        ));
    }

    #[test]
    fn images() {
        let f3 = Alphabet::new(3).unwrap();
        let psi = morph(3, &["a", "baccbCCBA", "1"]);
        assert_eq!(
            SubgroupGraph::whole(f3).image(&psi).unwrap(),
            sub(3, &["a", "baccbCCBA"])
        );
        let h = sub(2, &["ab", "bAA"]);
        assert_eq!(
            h.image(&Morphism::identity(Alphabet::new(2).unwrap()))
                .unwrap(),
            h
        );
        assert_eq!(
            sub(2, &["a"]).image(&morph(2, &["aa", "b"])).unwrap(),
            sub(2, &["aa"])
        );
    }

    #[test]
    fn base_is_kept_even_with_a_tail() {
        let h = sub(2, &["baB"]);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.basis(), vec![w("baB")]);
    }

    #[test]
    fn elements_of_small_subgroups() {
        let (els, truncated) = sub(2, &["aa", "b"]).elements_up_to(2, 100);
        assert!(!truncated);
        assert_eq!(
            els,
            vec![w("1"), w("b"), w("B"), w("aa"), w("AA"), w("bb"), w("BB")]
        );
    }
}
