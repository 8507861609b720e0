//! Exact search over factor multisets.
//!
//! A τ-factorization is a multiset of `R#` elements that is pairwise related
//! under τ (a repeated value additionally needs `x τ x`). Searching over such
//! multisets is a walk through states `(p, C)`: `p` is the running product
//! and `C` is the set of elements still compatible with everything used so
//! far. Adding factor `f ∈ C` moves to `(p·f, C ∩ N(f))`, where `N(f)` is
//! the τ-neighborhood of `f`. Every valid multiset is reachable in any
//! order, and every walk builds a valid multiset, so reachability questions
//! about factorizations are decided exactly on this finite graph:
//!
//! * existence of a factorization with constrained factors (`find`),
//! * unbounded factorization length, via a product-restoring cycle whose
//!   factors stay compatible with the whole used set (`pump`),
//! * exhaustive listing up to a length cap (`enumerate`).

use crate::bits::IndexSet;
use crate::ring::Ring;
use crate::tau::TauRelation;
use std::collections::{HashMap, VecDeque};

/// Where a search starts: a partial product already fixed (with `base_len`
/// factors consumed) and the compatibility set those factors imply.
#[derive(Clone)]
pub(crate) struct Start {
    pub product: usize,
    pub compat: IndexSet,
    pub base_len: usize,
}

impl Start {
    /// Empty prefix: product is the ring identity and every factor in
    /// `allowed` is still available.
    pub fn fresh(ring: &Ring, allowed: IndexSet) -> Start {
        Start { product: ring.one().index(), compat: allowed, base_len: 0 }
    }
}

pub(crate) struct Searcher<'a> {
    pub ring: &'a Ring,
    pub tau: &'a TauRelation,
}

/// Outcome of the unboundedness search.
pub(crate) enum PumpOutcome {
    /// `prefix` is a complete accepted multiset; inserting `cycle` any number
    /// of times keeps it accepted.
    Unbounded { prefix: Vec<usize>, cycle: Vec<usize> },
    /// No pump exists; `max_len` is the exact maximum accepted length
    /// (`None` when nothing is accepted at all).
    Bounded { max_len: Option<usize> },
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct StateKey {
    product: usize,
    compat: IndexSet,
}

impl<'a> Searcher<'a> {
    pub fn new(ring: &'a Ring, tau: &'a TauRelation) -> Self {
        Searcher { ring, tau }
    }

    /// Find a factor multiset extending `start` whose total length is at
    /// least `min_len` and whose product lands in `targets`. Returns only the
    /// extension factors, in discovery order.
    pub fn find(&self, start: &Start, targets: &IndexSet, min_len: usize) -> Option<Vec<usize>> {
        let len_cap = min_len.min(3);
        let key_len = |l: usize| l.min(len_cap);
        if start.base_len >= min_len && targets.contains(start.product) {
            return Some(Vec::new());
        }
        let mut seen: HashMap<(usize, IndexSet, usize), usize> = HashMap::new();
        // parent: (state index, factor used)
        let mut nodes: Vec<(usize, IndexSet, usize)> = Vec::new();
        let mut parents: Vec<Option<(usize, usize)>> = Vec::new();
        let mut queue = VecDeque::new();
        let root = (start.product, start.compat.clone(), key_len(start.base_len));
        seen.insert(root.clone(), 0);
        nodes.push(root);
        parents.push(None);
        queue.push_back(0usize);
        while let Some(id) = queue.pop_front() {
            let (p, compat, len) = nodes[id].clone();
            for f in compat.iter() {
                let np = self.ring.mul_idx(p, f);
                let ncompat = compat.intersection(self.tau.row(f));
                let nlen = key_len(len + 1);
                let key = (np, ncompat.clone(), nlen);
                if seen.contains_key(&key) {
                    continue;
                }
                let nid = nodes.len();
                seen.insert(key.clone(), nid);
                nodes.push(key);
                parents.push(Some((id, f)));
                if nlen >= key_len(min_len) && targets.contains(np) {
                    let mut out = Vec::new();
                    let mut cur = nid;
                    while let Some((prev, f)) = parents[cur] {
                        out.push(f);
                        cur = prev;
                    }
                    out.reverse();
                    return Some(out);
                }
                queue.push_back(nid);
            }
        }
        None
    }

    /// Decide whether arbitrarily long accepted multisets exist.
    ///
    /// Unbounded length is equivalent to a cycle in the state graph lying on
    /// some accepted walk: along a cycle the compatibility set cannot shrink,
    /// so every cycle factor is compatible with the entire used set and with
    /// itself, and the cycle can be replayed any number of times.
    pub fn pump(&self, start: &Start, targets: &IndexSet, min_len: usize) -> PumpOutcome {
        assert!(
            min_len == 0 || start.base_len >= min_len || !targets.contains(start.product),
            "accepting start states need min_len 0"
        );
        // Forward exploration of the whole reachable graph.
        let mut ids: HashMap<StateKey, usize> = HashMap::new();
        let mut states: Vec<StateKey> = Vec::new();
        let mut edges: Vec<Vec<(usize, usize)>> = Vec::new(); // (factor, dest)
        let root = StateKey { product: start.product, compat: start.compat.clone() };
        ids.insert(root.clone(), 0);
        states.push(root);
        edges.push(Vec::new());
        let mut frontier = vec![0usize];
        while let Some(id) = frontier.pop() {
            let st = states[id].clone();
            for f in st.compat.iter() {
                let key = StateKey {
                    product: self.ring.mul_idx(st.product, f),
                    compat: st.compat.intersection(self.tau.row(f)),
                };
                let nid = match ids.get(&key) {
                    Some(&n) => n,
                    None => {
                        let n = states.len();
                        ids.insert(key.clone(), n);
                        states.push(key);
                        edges.push(Vec::new());
                        frontier.push(n);
                        n
                    }
                };
                edges[id].push((f, nid));
            }
        }
        let n = states.len();
        let accepting: Vec<bool> = (0..n)
            .map(|i| targets.contains(states[i].product) && (i != 0 || start.base_len >= min_len))
            .collect();
        // Backward reachability to an accepting state.
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (src, outs) in edges.iter().enumerate() {
            for &(_, dst) in outs {
                rev[dst].push(src);
            }
        }
        let mut useful = vec![false; n];
        let mut queue: VecDeque<usize> =
            (0..n).filter(|&i| accepting[i]).inspect(|&i| useful[i] = true).collect();
        while let Some(i) = queue.pop_front() {
            for &prev in &rev[i] {
                if !useful[prev] {
                    useful[prev] = true;
                    queue.push_back(prev);
                }
            }
        }
        if !useful[0] {
            return PumpOutcome::Bounded { max_len: None };
        }
        // Cycle detection restricted to useful states, by iterative DFS.
        let mut color = vec![0u8; n]; // 0 white, 1 on stack, 2 done
        let mut cycle_at: Option<usize> = None;
        let mut dfs_parent: Vec<Option<(usize, usize)>> = vec![None; n];
        'outer: for root in 0..n {
            if !useful[root] || color[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            color[root] = 1;
            while let Some(&mut (node, ref mut ei)) = stack.last_mut() {
                if *ei < edges[node].len() {
                    let (f, dst) = edges[node][*ei];
                    *ei += 1;
                    if !useful[dst] {
                        continue;
                    }
                    match color[dst] {
                        0 => {
                            color[dst] = 1;
                            dfs_parent[dst] = Some((node, f));
                            stack.push((dst, 0));
                        }
                        1 => {
                            // Back edge: dst .. node .. dst is a cycle.
                            dfs_parent[dst] = Some((node, f));
                            cycle_at = Some(dst);
                            break 'outer;
                        }
                        _ => {}
                    }
                } else {
                    color[node] = 2;
                    stack.pop();
                }
            }
        }
        if let Some(entry) = cycle_at {
            // Cycle factors: walk parents from the back-edge source until we
            // close at `entry` again.
            let mut cycle = Vec::new();
            let mut cur = entry;
            loop {
                let (prev, f) = dfs_parent[cur].unwrap();
                cycle.push(f);
                cur = prev;
                if cur == entry {
                    break;
                }
            }
            cycle.reverse();
            let to_entry = self.shortest_path(&states, &edges, 0, |i| i == entry);
            let completion = self.shortest_path(&states, &edges, entry, |i| accepting[i]);
            let mut prefix = to_entry.expect("cycle entry is reachable");
            prefix.extend(completion.expect("cycle entry is co-reachable"));
            return PumpOutcome::Unbounded { prefix, cycle };
        }
        // Acyclic useful subgraph: longest accepted path by DP over a
        // topological order.
        let order = topo_order(&edges, &useful);
        let mut dist: Vec<Option<usize>> = vec![None; n];
        dist[0] = Some(start.base_len);
        let mut best = if accepting[0] { Some(start.base_len) } else { None };
        for &node in &order {
            let Some(d) = dist[node] else { continue };
            for &(_, dst) in &edges[node] {
                if !useful[dst] {
                    continue;
                }
                if dist[dst].is_none_or(|old| old < d + 1) {
                    dist[dst] = Some(d + 1);
                }
            }
        }
        for i in 0..n {
            if accepting[i] {
                if let Some(d) = dist[i] {
                    if best.is_none_or(|b| b < d) {
                        best = Some(d);
                    }
                }
            }
        }
        PumpOutcome::Bounded { max_len: best }
    }

    /// Every product reachable from `start` (including the start product).
    pub fn reach_products(&self, start: &Start) -> IndexSet {
        let mut seen: HashMap<StateKey, ()> = HashMap::new();
        let mut products = IndexSet::empty(self.ring.size());
        let root = StateKey { product: start.product, compat: start.compat.clone() };
        products.insert(root.product);
        let mut stack = vec![root.clone()];
        seen.insert(root, ());
        while let Some(st) = stack.pop() {
            for f in st.compat.iter() {
                let key = StateKey {
                    product: self.ring.mul_idx(st.product, f),
                    compat: st.compat.intersection(self.tau.row(f)),
                };
                if !seen.contains_key(&key) {
                    products.insert(key.product);
                    seen.insert(key.clone(), ());
                    stack.push(key);
                }
            }
        }
        products
    }

    fn shortest_path(
        &self,
        states: &[StateKey],
        edges: &[Vec<(usize, usize)>],
        from: usize,
        accept: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        if accept(from) {
            return Some(Vec::new());
        }
        let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; states.len()];
        seen[from] = true;
        while let Some(node) = queue.pop_front() {
            for &(f, dst) in &edges[node] {
                if seen[dst] {
                    continue;
                }
                seen[dst] = true;
                parent.insert(dst, (node, f));
                if accept(dst) {
                    let mut out = Vec::new();
                    let mut cur = dst;
                    while cur != from {
                        let (prev, f) = parent[&cur];
                        out.push(f);
                        cur = prev;
                    }
                    out.reverse();
                    return Some(out);
                }
                queue.push_back(dst);
            }
        }
        None
    }

    /// List every factor multiset of length `1..=cap` (beyond `start`) whose
    /// product lands in `targets`, as nondecreasing index sequences over
    /// `alphabet`. `norm` collapses products to class representatives when
    /// the caller walks a quotient alphabet; pass the identity otherwise.
    pub fn enumerate(
        &self,
        start: &Start,
        alphabet: &[usize],
        norm: &dyn Fn(usize) -> usize,
        targets: &IndexSet,
        cap: usize,
    ) -> Vec<Vec<usize>> {
        // Distance-to-accept over the quotient state graph, for pruning.
        let mut ids: HashMap<StateKey, usize> = HashMap::new();
        let mut states: Vec<StateKey> = Vec::new();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let root = StateKey { product: norm(start.product), compat: start.compat.clone() };
        ids.insert(root.clone(), 0);
        states.push(root);
        edges.push(Vec::new());
        let mut frontier = vec![0usize];
        while let Some(id) = frontier.pop() {
            let st = states[id].clone();
            for &f in alphabet {
                if !st.compat.contains(f) {
                    continue;
                }
                let key = StateKey {
                    product: norm(self.ring.mul_idx(st.product, f)),
                    compat: st.compat.intersection(self.tau.row(f)),
                };
                let nid = match ids.get(&key) {
                    Some(&n) => n,
                    None => {
                        let n = states.len();
                        ids.insert(key.clone(), n);
                        states.push(key);
                        edges.push(Vec::new());
                        frontier.push(n);
                        n
                    }
                };
                edges[id].push(nid);
            }
        }
        let n = states.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (src, outs) in edges.iter().enumerate() {
            for &dst in outs {
                rev[dst].push(src);
            }
        }
        let mut dist: Vec<Option<usize>> = vec![None; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for i in 0..n {
            if targets.contains(states[i].product) {
                dist[i] = Some(0);
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &prev in &rev[i] {
                if dist[prev].is_none() {
                    dist[prev] = Some(dist[i].unwrap() + 1);
                    queue.push_back(prev);
                }
            }
        }

        let mut out = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        self.enumerate_rec(
            &ids, alphabet, norm, targets, cap, &dist, 0, norm(start.product),
            &start.compat, 0, &mut current, &mut out,
        );
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_rec(
        &self,
        ids: &HashMap<StateKey, usize>,
        alphabet: &[usize],
        norm: &dyn Fn(usize) -> usize,
        targets: &IndexSet,
        cap: usize,
        dist: &[Option<usize>],
        min_pos: usize,
        product: usize,
        compat: &IndexSet,
        len: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if len >= cap {
            return;
        }
        for (pos, &f) in alphabet.iter().enumerate().skip(min_pos) {
            if !compat.contains(f) {
                continue;
            }
            let np = norm(self.ring.mul_idx(product, f));
            let ncompat = compat.intersection(self.tau.row(f));
            let key = StateKey { product: np, compat: ncompat.clone() };
            let id = ids[&key];
            match dist[id] {
                Some(d) if len + 1 + d <= cap => {}
                _ => continue,
            }
            current.push(f);
            if targets.contains(np) {
                out.push(current.clone());
            }
            self.enumerate_rec(
                ids, alphabet, norm, targets, cap, dist, pos, np, &ncompat, len + 1, current, out,
            );
            current.pop();
        }
    }
}

fn topo_order(edges: &[Vec<(usize, usize)>], useful: &[bool]) -> Vec<usize> {
    let n = edges.len();
    let mut indeg = vec![0usize; n];
    for (src, outs) in edges.iter().enumerate() {
        if !useful[src] {
            continue;
        }
        for &(_, dst) in outs {
            if useful[dst] {
                indeg[dst] += 1;
            }
        }
    }
    let mut queue: VecDeque<usize> =
        (0..n).filter(|&i| useful[i] && indeg[i] == 0).collect();
    let mut order = Vec::new();
    while let Some(i) = queue.pop_front() {
        order.push(i);
        for &(_, dst) in &edges[i] {
            if useful[dst] {
                indeg[dst] -= 1;
                if indeg[dst] == 0 {
                    queue.push_back(dst);
                }
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::tau::TauRelation;

    fn sharp_set(ring: &Ring) -> IndexSet {
        ring.r_sharp_set().clone()
    }

    #[test]
    fn find_factorization_of_zero_in_z6() {
        let z6 = Ring::modular(6).unwrap();
        let tau = TauRelation::full(&z6);
        let s = Searcher::new(&z6, &tau);
        let targets = z6.strong_orbit_set(0).clone();
        let got = s.find(&Start::fresh(&z6, sharp_set(&z6)), &targets, 1).unwrap();
        let prod = z6.product_of(got.iter().map(|&i| z6.el(i)));
        assert!(z6.is_zero(prod));
    }

    #[test]
    fn pump_detects_idempotent_in_z6() {
        let z6 = Ring::modular(6).unwrap();
        let tau = TauRelation::full(&z6);
        let s = Searcher::new(&z6, &tau);
        let targets = z6.strong_orbit_set(3).clone();
        match s.pump(&Start::fresh(&z6, sharp_set(&z6)), &targets, 1) {
            PumpOutcome::Unbounded { prefix, cycle } => {
                assert!(!cycle.is_empty());
                let p = z6.product_of(prefix.iter().map(|&i| z6.el(i)));
                assert!(targets.contains(p.index()));
            }
            PumpOutcome::Bounded { .. } => panic!("3 = 3^n should pump"),
        }
    }

    #[test]
    fn pump_bounded_in_z4() {
        let z4 = Ring::modular(4).unwrap();
        let tau = TauRelation::full(&z4);
        let s = Searcher::new(&z4, &tau);
        let targets = z4.strong_orbit_set(2).clone();
        match s.pump(&Start::fresh(&z4, sharp_set(&z4)), &targets, 1) {
            PumpOutcome::Bounded { max_len } => assert_eq!(max_len, Some(1)),
            PumpOutcome::Unbounded { .. } => panic!("2 has only the trivial factorization"),
        }
    }

    #[test]
    fn enumerate_factorizations_of_four_in_z6() {
        let z6 = Ring::modular(6).unwrap();
        let tau = TauRelation::full(&z6);
        let s = Searcher::new(&z6, &tau);
        let targets = z6.strong_orbit_set(4).clone();
        let alphabet: Vec<usize> = sharp_set(&z6).iter().collect();
        let got = s.enumerate(
            &Start::fresh(&z6, sharp_set(&z6)),
            &alphabet,
            &|x| x,
            &targets,
            3,
        );
        // Oracle: brute force over nondecreasing sequences of length <= 3.
        let vals = [2usize, 3, 4];
        let mut expect = Vec::new();
        for len in 1..=3usize {
            let mut seq = vec![0usize; len];
            loop {
                let m: Vec<usize> = seq.iter().map(|&i| vals[i]).collect();
                let sorted_ok = m.windows(2).all(|w| w[0] <= w[1]);
                if sorted_ok {
                    let prod = m.iter().fold(1usize, |a, &b| a * b % 6);
                    if targets.contains(prod) {
                        expect.push(m.clone());
                    }
                }
                let mut k = len;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    if seq[k] + 1 < vals.len() {
                        seq[k] += 1;
                        for slot in seq.iter_mut().skip(k + 1) {
                            *slot = 0;
                        }
                        break;
                    }
                    if k == 0 {
                        seq = vec![vals.len(); len];
                        break;
                    }
                }
                if seq.first() == Some(&vals.len()) {
                    break;
                }
            }
        }
        let mut got_sorted = got.clone();
        got_sorted.sort();
        expect.sort();
        expect.dedup();
        assert_eq!(got_sorted, expect);
    }
}
