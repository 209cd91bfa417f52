//! The fringe of a subgroup, free-factor testing and algebraic extensions.
//!
//! Every algebraic extension of `H` is a quotient of the core graph of `H`, so
//! folding every vertex partition of `Γ(H)` yields a finite list (the fringe)
//! containing all of them. Removing the members that have a proper free factor
//! in the list leaves exactly the algebraic extensions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::budget::Budget;
use crate::error::{Cap, Error, Result};
use crate::stallings::SubgroupGraph;
use crate::whitehead::type_two_autos;
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtensionKind {
    Fringe,
    Algebraic,
}

/// Members are distinct and all contain `base`. `members[0]` is `base`; the
/// rest follow by decreasing vertex count, then canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSet {
    pub base: SubgroupGraph,
    pub members: Vec<SubgroupGraph>,
    pub kind: ExtensionKind,
}

impl ExtensionSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, k: &SubgroupGraph) -> bool {
        self.members.contains(k)
    }
}

/// Set partitions of `0..n` as restricted growth strings, in lexicographic order.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<usize>>,
}

impl Partitions {
    pub fn new(n: usize) -> Self {
        Partitions {
            current: Some(alloc::vec![0; n]),
        }
    }
}

impl Iterator for Partitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut a = out.clone();
        let mut prefix_max = alloc::vec![0; a.len()];
        for i in 1..a.len() {
            prefix_max[i] = prefix_max[i - 1].max(a[i - 1]);
        }
        for i in (1..a.len()).rev() {
            if a[i] <= prefix_max[i] {
                a[i] += 1;
                a[i + 1..].iter_mut().for_each(|x| *x = 0);
                self.current = Some(a);
                break;
            }
        }
        Some(out)
    }
}

fn sort_members(base: &SubgroupGraph, found: BTreeSet<SubgroupGraph>) -> Vec<SubgroupGraph> {
    let mut rest: Vec<SubgroupGraph> = found.into_iter().filter(|k| k != base).collect();
    rest.sort_by(|x, y| {
        y.vertex_count()
            .cmp(&x.vertex_count())
            .then_with(|| x.cmp(y))
    });
    let mut members = alloc::vec![base.clone()];
    members.extend(rest);
    members
}

/// All folded quotients of `Γ(H)`, deduplicated.
pub fn fringe(h: &SubgroupGraph, vertex_cap: usize) -> Result<ExtensionSet> {
    let n = h.vertex_count();
    if n > vertex_cap {
        return Err(Error::Budget {
            cap: Cap::FringeVertices,
            limit: vertex_cap,
            needed: n,
        });
    }
    let edges: Vec<_> = h.edges().collect();
    let mut found = BTreeSet::new();
    for part in Partitions::new(n) {
        let classes = part.iter().max().map_or(1, |m| m + 1);
        let quotient = edges.iter().map(|&(u, x, v)| (part[u], x, part[v]));
        found.insert(SubgroupGraph::from_edges(
            h.alphabet(),
            classes,
            0,
            quotient,
        )?);
    }
    Ok(ExtensionSet {
        base: h.clone(),
        members: sort_members(h, found),
        kind: ExtensionKind::Fringe,
    })
}

/// Vertex map of the immersion `Γ(H) -> Γ(K)` for `H <= K`.
fn immersion(h: &SubgroupGraph, k: &SubgroupGraph) -> Option<Vec<usize>> {
    let mut map = alloc::vec![usize::MAX; h.vertex_count()];
    map[0] = 0;
    let mut stack = alloc::vec![0usize];
    while let Some(v) = stack.pop() {
        for x in h.alphabet().signed_letters() {
            if let Some(t) = h.target(v, x) {
                let image = k.target(map[v], x)?;
                if map[t] == usize::MAX {
                    map[t] = image;
                    stack.push(t);
                } else if map[t] != image {
                    return None;
                }
            }
        }
    }
    Some(map)
}

/// Decides `H <=ff K`.
///
/// The image of `Γ(H)` in `Γ(K)` is a subgraph whose fundamental group `M` is
/// a free factor of `K` containing `H`, and `H <=ff K` iff `H <=ff M`. In the
/// coordinates of `M`, Whitehead moves are applied while they shrink the core
/// graph, exploring the plateau when no move shrinks it; `H` is a free factor
/// exactly when a one-vertex graph is reached.
pub fn is_free_factor(h: &SubgroupGraph, k: &SubgroupGraph, budget: &Budget) -> Result<bool> {
    if let Some(w) = h.basis().into_iter().find(|w| !k.contains(w)) {
        return Err(Error::NotASubgroup { word: w });
    }
    if h == k || h.is_trivial() {
        return Ok(true);
    }
    if h.rank() >= k.rank() {
        return Ok(false);
    }
    let map = immersion(h, k).expect("H <= K gives an immersion");
    let mut used = map.clone();
    used.sort_unstable();
    used.dedup();
    if used.len() == map.len() {
        return Ok(true);
    }
    // Fundamental group of the image subgraph.
    let index: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let image_edges: BTreeSet<_> = h
        .edges()
        .map(|(u, x, v)| (index[&map[u]], x, index[&map[v]]))
        .collect();
    let m = SubgroupGraph::from_edges(h.alphabet(), used.len(), 0, image_edges)?;
    if h == &m {
        return Ok(true);
    }
    if h.rank() >= m.rank() {
        return Ok(false);
    }
    if m.rank() > budget.free_factor_max_rank {
        return Err(Error::Budget {
            cap: Cap::FreeFactorRank,
            limit: budget.free_factor_max_rank,
            needed: m.rank(),
        });
    }
    let coords = h.rewrite_in(&m)?;
    let inner = Alphabet::new(m.rank())?;
    let g = SubgroupGraph::from_generators(inner, &coords)?;
    // Letters missing from the coordinates span a complementary free factor.
    let used = g.letters_used();
    let compact = Alphabet::new(used.len())?;
    let relabel: Vec<_> = {
        let mut images = alloc::vec![Word::identity(); inner.rank()];
        for (i, &gen) in used.iter().enumerate() {
            images[gen] = Word::letter(Letter::positive(i));
        }
        images
    };
    let coords: Vec<_> = coords.iter().map(|w| w.substitute(&relabel)).collect();
    let g = SubgroupGraph::from_generators(compact, &coords)?;
    Ok(whitehead_descent(g, budget)?.vertex_count() == 1)
}

/// Minimizes the core graph of a subgroup over its Whitehead orbit.
pub fn whitehead_descent(mut g: SubgroupGraph, budget: &Budget) -> Result<SubgroupGraph> {
    let autos = type_two_autos(g.alphabet());
    'descent: loop {
        let size = g.edge_count();
        if let Some(next) = autos
            .iter()
            .map(|w| g.image(&w.realized))
            .find(|r| r.as_ref().map_or(true, |r| r.edge_count() < size))
        {
            g = next?;
            continue;
        }
        let mut seen = BTreeSet::from([g.clone()]);
        let mut frontier = alloc::vec![g.clone()];
        while let Some(s) = frontier.pop() {
            for w in &autos {
                let t = s.image(&w.realized)?;
                if t.edge_count() < size {
                    g = t;
                    continue 'descent;
                }
                if t.edge_count() == size && !seen.contains(&t) {
                    if seen.len() >= budget.whitehead.max_states {
                        return Err(Error::Budget {
                            cap: Cap::LevelGraphStates,
                            limit: budget.whitehead.max_states,
                            needed: seen.len() + 1,
                        });
                    }
                    seen.insert(t.clone());
                    frontier.push(t);
                }
            }
        }
        return Ok(g);
    }
}

/// The algebraic extensions of `H`: fringe members with no proper free factor
/// in the fringe. Each deletion is judged against the full fringe.
pub fn algebraic_extensions(h: &SubgroupGraph, budget: &Budget) -> Result<ExtensionSet> {
    let fringe = fringe(h, budget.fringe_cap)?;
    let mut members = Vec::new();
    for (j, hj) in fringe.members.iter().enumerate() {
        let mut deleted = false;
        for (i, hi) in fringe.members.iter().enumerate() {
            if i != j && hj.contains_subgroup(hi) && is_free_factor(hi, hj, budget)? {
                deleted = true;
                break;
            }
        }
        if !deleted {
            members.push(hj.clone());
        }
    }
    Ok(ExtensionSet {
        base: h.clone(),
        members,
        kind: ExtensionKind::Algebraic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::sub;
    use crate::whitehead::whitehead_autos;

    fn budget() -> Budget {
        Budget::default()
    }

    /// Breadth-first search over Whitehead images of `H` to a fixed depth,
    /// looking for a one-vertex core graph.
    fn ball_oracle(h: &SubgroupGraph, depth: usize) -> bool {
        let autos = whitehead_autos(h.alphabet());
        let mut seen = BTreeSet::from([h.clone()]);
        let mut layer = alloc::vec![h.clone()];
        for _ in 0..=depth {
            if layer.iter().any(|g| g.vertex_count() == 1) {
                return true;
            }
            let mut next = Vec::new();
            for g in &layer {
                for a in &autos {
                    let t = g.image(&a.realized).unwrap();
                    if seen.insert(t.clone()) {
                        next.push(t);
                    }
                }
            }
            layer = next;
        }
        false
    }

    #[test]
    fn partitions_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(Partitions::new(n).count(), b);
        }
    }

    #[test]
    fn fringe_examples() {
        let f = fringe(&sub(2, &["a"]), 8).unwrap();
        assert_eq!(f.members, vec![sub(2, &["a"])]);
        let f = fringe(&sub(2, &["aa"]), 8).unwrap();
        assert_eq!(f.members, vec![sub(2, &["aa"]), sub(2, &["a"])]);
        let f = fringe(&sub(2, &["ab"]), 8).unwrap();
        assert_eq!(f.members, vec![sub(2, &["ab"]), sub(2, &["a", "b"])]);
    }

    #[test]
    fn fringe_contains_letter_subgroup() {
        let h = sub(3, &["abAB", "cc"]);
        let f = fringe(&h, 8).unwrap();
        assert_eq!(f.members[0], h);
        assert!(f.contains(&SubgroupGraph::generated_by_letters(
            h.alphabet(),
            h.letters_used()
        )));
        assert!(f.members.iter().all(|k| k.contains_subgroup(&h)));
    }

    #[test]
    fn fringe_cap_is_a_budget_error() {
        let h = sub(2, &["aaaaaaaaab"]);
        assert!(matches!(
            fringe(&h, 8),
            Err(Error::Budget {
                cap: Cap::FringeVertices,
                ..
            })
        ));
    }

    #[test]
    fn free_factor_examples() {
        let f2 = sub(2, &["a", "b"]);
        assert!(is_free_factor(&sub(2, &["a"]), &f2, &budget()).unwrap());
        assert!(!is_free_factor(&sub(2, &["aa"]), &f2, &budget()).unwrap());
        assert!(is_free_factor(&sub(2, &["ab"]), &f2, &budget()).unwrap());
        assert!(is_free_factor(&sub(2, &["baB"]), &f2, &budget()).unwrap());
        assert!(!is_free_factor(&sub(2, &["abAB"]), &f2, &budget()).unwrap());
        assert!(is_free_factor(
            &sub(3, &["ab", "cbc"]),
            &sub(3, &["a", "b", "c"]),
            &budget()
        )
        .unwrap());
        assert!(matches!(
            is_free_factor(&sub(2, &["a"]), &sub(2, &["b"]), &budget()),
            Err(Error::NotASubgroup { .. })
        ));
    }

    #[test]
    fn free_factor_inside_a_proper_subgroup() {
        let k = sub(2, &["aa", "b"]);
        assert!(is_free_factor(&sub(2, &["aab"]), &k, &budget()).unwrap());
        assert!(!is_free_factor(&sub(2, &["aaaa"]), &k, &budget()).unwrap());
    }

    #[test]
    fn free_factor_agrees_with_ball_oracle() {
        let f2 = sub(2, &["a", "b"]);
        for g in [
            "a", "aa", "ab", "aab", "abAB", "abb", "aBab", "abab", "aabb", "baaB", "abaB",
        ] {
            let h = sub(2, &[g]);
            assert_eq!(
                is_free_factor(&h, &f2, &budget()).unwrap(),
                ball_oracle(&h, 4),
                "{g}"
            );
        }
        let f3 = sub(3, &["a", "b", "c"]);
        for gens in [
            &["ab", "c"][..],
            &["abc", "bc"],
            &["aa", "bc"],
            &["abAB", "c"],
            &["acb"],
        ] {
            let h = sub(3, gens);
            assert_eq!(
                is_free_factor(&h, &f3, &budget()).unwrap(),
                ball_oracle(&h, 2),
                "{gens:?}"
            );
        }
    }

    #[test]
    fn algebraic_extension_examples() {
        let ae = algebraic_extensions(&sub(2, &["aa"]), &budget()).unwrap();
        assert_eq!(ae.members, vec![sub(2, &["aa"]), sub(2, &["a"])]);
        let ae = algebraic_extensions(&sub(2, &["ab"]), &budget()).unwrap();
        assert_eq!(ae.members, vec![sub(2, &["ab"])]);
        let ae = algebraic_extensions(&sub(2, &["a"]), &budget()).unwrap();
        assert_eq!(ae.members, vec![sub(2, &["a"])]);
        assert_eq!(ae.kind, ExtensionKind::Algebraic);
    }

    #[test]
    fn deleted_members_have_a_surviving_free_factor() {
        let h = sub(2, &["aab", "bb"]);
        let f = fringe(&h, 8).unwrap();
        let ae = algebraic_extensions(&h, &budget()).unwrap();
        for k in f.members.iter().filter(|k| !ae.contains(k)) {
            assert!(ae.members.iter().any(|s| s != k
                && k.contains_subgroup(s)
                && is_free_factor(s, k, &budget()).unwrap()));
        }
        assert!(ae
            .members
            .iter()
            .any(|k| is_free_factor(k, &sub(2, &["a", "b"]), &budget()).unwrap()));
    }
}
