//! Brute-force reference implementations, written without the library's
//! validators, enumerators or canonical forms.

use std::collections::BTreeMap;

use prymgraph::{HarmonicMorphism, WeightedGraph};

/// A double cover over a fixed base, in flat form. Source vertices are
/// numbered freely; `pre[v]` lists those over target vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub pre: Vec<Vec<usize>>,
    pub genus: Vec<u32>,
    /// Per target edge (in `edges()` order): lifts `(p, q, n)` with `p`
    /// over the first half and `q` over the second.
    pub edge_lifts: Vec<Vec<(usize, usize, u32)>>,
    /// Per target leg (in `legs()` order): lifts `(p, n)`.
    pub leg_lifts: Vec<Vec<(usize, u32)>>,
}

impl Cover {
    pub fn from_morphism(phi: &HarmonicMorphism) -> Cover {
        let t = &phi.target;
        let s = &phi.source;
        let mut pre = vec![Vec::new(); t.vertex_count()];
        for (w, &v) in phi.vertex_map.iter().enumerate() {
            pre[v].push(w);
        }
        let edge_lifts = t
            .edges()
            .into_iter()
            .map(|(h, _)| {
                let mut l: Vec<_> = (0..s.half_edge_count())
                    .filter(|&k| phi.half_edge_map[k] == h && !s.is_leg(k))
                    .map(|k| (s.anchor(k), s.anchor(s.partner(k)), phi.local_degrees[k]))
                    .collect();
                l.sort();
                l
            })
            .collect();
        let leg_lifts = t
            .legs()
            .keys()
            .map(|&h| {
                let mut l: Vec<_> = (0..s.half_edge_count())
                    .filter(|&k| phi.half_edge_map[k] == h)
                    .map(|k| (s.anchor(k), phi.local_degrees[k]))
                    .collect();
                l.sort();
                l
            })
            .collect();
        Cover {
            pre,
            genus: s.genera().to_vec(),
            edge_lifts,
            leg_lifts,
        }
    }

    pub fn source_genus(&self) -> i64 {
        let v = self.genus.len() as i64;
        let e: usize = self.edge_lifts.iter().map(Vec::len).sum();
        self.genus.iter().map(|&g| g as i64).sum::<i64>() + e as i64 - v + 1
    }
}

fn is_ram(label: &str, ramified: bool) -> bool {
    ramified && label.starts_with("ram:")
}

fn semistable_zero(g: &WeightedGraph, v: usize) -> bool {
    2 * g.genus_of(v) as i64 - 2 + g.half_edges_at(v).len() as i64 == 0
}

/// Prym admissibility of the target plus the local degree pattern.
fn admissible(g: &WeightedGraph, c: &Cover, ramified: bool) -> bool {
    let nv = g.vertex_count();
    let ss: Vec<bool> = (0..nv).map(|v| semistable_zero(g, v)).collect();
    for h in 0..g.half_edge_count() {
        if !ss[g.anchor(h)] {
            continue;
        }
        let o = g.partner(h);
        if o == h || ss[g.anchor(o)] {
            return false;
        }
    }
    for v in 0..nv {
        if ss[v] {
            continue;
        }
        let mut count = 0;
        for h in g.half_edges_at(v) {
            let o = g.partner(h);
            if o == h {
                if is_ram(g.leg_label(h).unwrap(), ramified) {
                    count += 1;
                }
            } else if ss[g.anchor(o)] {
                count += 1;
            }
        }
        if count % 2 != 0 {
            return false;
        }
    }
    for (e, &(h, hb)) in g.edges().iter().enumerate() {
        let want = if ss[g.anchor(h)] || ss[g.anchor(hb)] { 2 } else { 1 };
        if c.edge_lifts[e].iter().any(|&(_, _, n)| n != want) {
            return false;
        }
    }
    for (i, (_, label)) in g.legs().iter().enumerate() {
        let lifts = &c.leg_lifts[i];
        let ok = if is_ram(label, ramified) {
            lifts.len() == 1 && lifts[0].1 == 2
        } else {
            lifts.len() == 2 && lifts.iter().all(|&(_, n)| n == 1)
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Every target half-edge with its lifts `(p, n)` at source vertices.
fn lifts_by_half_edge(g: &WeightedGraph, c: &Cover) -> BTreeMap<usize, Vec<(usize, u32)>> {
    let mut out: BTreeMap<usize, Vec<(usize, u32)>> = BTreeMap::new();
    for (e, (h, hb)) in g.edges().into_iter().enumerate() {
        for &(p, q, n) in &c.edge_lifts[e] {
            out.entry(h).or_default().push((p, n));
            out.entry(hb).or_default().push((q, n));
        }
    }
    for (i, &h) in g.legs().keys().enumerate() {
        out.insert(h, c.leg_lifts[i].clone());
    }
    out
}

/// Local degree of each source vertex, if balanced.
fn local_degrees(g: &WeightedGraph, c: &Cover) -> Option<Vec<u32>> {
    let by_h = lifts_by_half_edge(g, c);
    let mut d = vec![0u32; c.genus.len()];
    for v in 0..g.vertex_count() {
        let hs = g.half_edges_at(v);
        for &p in &c.pre[v] {
            if hs.is_empty() {
                d[p] = 2 / c.pre[v].len() as u32;
                continue;
            }
            let sums: Vec<u32> = hs
                .iter()
                .map(|h| by_h[h].iter().filter(|&&(q, _)| q == p).map(|&(_, n)| n).sum())
                .collect();
            if sums[0] == 0 || sums.iter().any(|&s| s != sums[0]) {
                return None;
            }
            d[p] = sums[0];
        }
    }
    Some(d)
}

/// Ramification contributions `sum (n - 1)` per source vertex.
fn ramification(g: &WeightedGraph, c: &Cover) -> Vec<i64> {
    let mut r = vec![0i64; c.genus.len()];
    for (_, lifts) in lifts_by_half_edge(g, c) {
        for (p, n) in lifts {
            r[p] += n as i64 - 1;
        }
    }
    r
}

fn source_connected(c: &Cover) -> bool {
    let n = c.genus.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for lifts in &c.edge_lifts {
        for &(a, b, _) in lifts {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let root = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == root)
}

/// Degree, balance, Riemann-Hurwitz at every source vertex, connectivity
/// and Prym admissibility.
pub fn is_valid(g: &WeightedGraph, c: &Cover, ramified: bool) -> bool {
    if c.edge_lifts.iter().any(|l| l.iter().map(|x| x.2).sum::<u32>() != 2) {
        return false;
    }
    if !admissible(g, c, ramified) || !source_connected(c) {
        return false;
    }
    let Some(d) = local_degrees(g, c) else {
        return false;
    };
    let r = ramification(g, c);
    for v in 0..g.vertex_count() {
        for &p in &c.pre[v] {
            let lhs = 2 * c.genus[p] as i64 - 2;
            let rhs = d[p] as i64 * (2 * g.genus_of(v) as i64 - 2) + r[p];
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Isomorphism over the identity of the base: a fibre-preserving bijection
/// of source vertices matching genera and every lift multiset.
pub fn isomorphic(a: &Cover, b: &Cover) -> bool {
    if a.pre.iter().map(Vec::len).ne(b.pre.iter().map(Vec::len)) || a.genus.len() != b.genus.len() {
        return false;
    }
    let doubled: Vec<usize> = (0..a.pre.len()).filter(|&v| a.pre[v].len() == 2).collect();
    for swaps in 0..(1usize << doubled.len()) {
        let mut sigma = vec![0usize; a.genus.len()];
        for v in 0..a.pre.len() {
            for (i, &p) in a.pre[v].iter().enumerate() {
                let k = doubled.iter().position(|&x| x == v);
                let j = match k {
                    Some(k) if swaps & (1 << k) != 0 => 1 - i,
                    _ => i,
                };
                sigma[p] = b.pre[v][j];
            }
        }
        if (0..a.genus.len()).any(|p| a.genus[p] != b.genus[sigma[p]]) {
            continue;
        }
        let edges_match = a.edge_lifts.iter().zip(&b.edge_lifts).all(|(x, y)| {
            let mut m: Vec<_> = x.iter().map(|&(p, q, n)| (sigma[p], sigma[q], n)).collect();
            m.sort();
            m == *y
        });
        let legs_match = a.leg_lifts.iter().zip(&b.leg_lifts).all(|(x, y)| {
            let mut m: Vec<_> = x.iter().map(|&(p, n)| (sigma[p], n)).collect();
            m.sort();
            m == *y
        });
        if edges_match && legs_match {
            return true;
        }
    }
    false
}

enum Item {
    Edge(usize, usize, usize),
    Leg(usize),
}

struct Search<'a> {
    g: &'a WeightedGraph,
    edges: Vec<(usize, usize)>,
    legs: Vec<usize>,
    items: Vec<Item>,
    /// Per vertex, the half-edge assigned first.
    reference: Vec<Option<usize>>,
    /// `sums[h][p]`: total local degree at source vertex `p` over `h`.
    sums: Vec<Vec<u32>>,
    ramified: bool,
}

/// Every valid Prym cover of `g`, one per isomorphism class over the base.
pub fn brute_force_covers(g: &WeightedGraph, ramified: bool) -> Vec<Cover> {
    let nv = g.vertex_count();
    let edges = g.edges();
    let legs: Vec<usize> = g.legs().keys().copied().collect();
    let mut items: Vec<Item> = edges
        .iter()
        .enumerate()
        .map(|(e, &(h, hb))| Item::Edge(e, g.anchor(h), g.anchor(hb)))
        .collect();
    items.extend((0..legs.len()).map(Item::Leg));
    let mut reference = vec![None; nv];
    let order = edges.iter().flat_map(|&(h, hb)| [h, hb]).chain(legs.iter().copied());
    for h in order {
        reference[g.anchor(h)].get_or_insert(h);
    }
    let mut search = Search {
        g,
        edges,
        legs,
        items,
        reference,
        sums: Vec::new(),
        ramified,
    };
    let mut found: Vec<Cover> = Vec::new();
    for mask in 0..(1usize << nv) {
        let mut pre = Vec::new();
        let mut next = 0;
        for v in 0..nv {
            let k = if mask & (1 << v) != 0 { 2 } else { 1 };
            pre.push((next..next + k).collect::<Vec<_>>());
            next += k;
        }
        search.sums = vec![vec![0; next]; g.half_edge_count()];
        let mut cover = Cover {
            pre,
            genus: vec![0; next],
            edge_lifts: vec![Vec::new(); search.edges.len()],
            leg_lifts: vec![Vec::new(); search.legs.len()],
        };
        search.assign(0, &mut cover, &mut found);
    }
    found
}

impl Search<'_> {
    fn assign(&mut self, i: usize, c: &mut Cover, found: &mut Vec<Cover>) {
        if i == self.items.len() {
            finish(self.g, c, self.ramified, found);
            return;
        }
        let (touched, options): (Vec<usize>, Vec<Vec<(usize, usize, u32)>>) = match self.items[i] {
            Item::Edge(e, a, b) => {
                let mut opts = Vec::new();
                let pairs: Vec<(usize, usize)> = c.pre[a]
                    .iter()
                    .flat_map(|&p| c.pre[b].iter().map(move |&q| (p, q)))
                    .collect();
                for &(p, q) in &pairs {
                    opts.push(vec![(p, q, 2)]);
                }
                for x in 0..pairs.len() {
                    for y in x..pairs.len() {
                        opts.push(vec![(pairs[x].0, pairs[x].1, 1), (pairs[y].0, pairs[y].1, 1)]);
                    }
                }
                let (h, hb) = self.edges[e];
                (vec![h, hb], opts)
            }
            Item::Leg(l) => {
                let v = self.g.anchor(self.legs[l]);
                let p = &c.pre[v];
                let mut opts: Vec<Vec<(usize, usize, u32)>> = p.iter().map(|&x| vec![(x, 0, 2)]).collect();
                for x in 0..p.len() {
                    for y in x..p.len() {
                        opts.push(vec![(p[x], 0, 1), (p[y], 0, 1)]);
                    }
                }
                (vec![self.legs[l]], opts)
            }
        };
        for opt in options {
            for &(p, q, n) in &opt {
                self.sums[touched[0]][p] += n;
                if touched.len() == 2 {
                    self.sums[touched[1]][q] += n;
                }
            }
            match self.items[i] {
                Item::Edge(e, _, _) => c.edge_lifts[e] = opt.clone(),
                Item::Leg(l) => c.leg_lifts[l] = opt.iter().map(|&(p, _, n)| (p, n)).collect(),
            }
            if touched.iter().all(|&h| self.balanced(c, h)) {
                self.assign(i + 1, c, found);
            }
            for &(p, q, n) in &opt {
                self.sums[touched[0]][p] -= n;
                if touched.len() == 2 {
                    self.sums[touched[1]][q] -= n;
                }
            }
        }
        match self.items[i] {
            Item::Edge(e, _, _) => c.edge_lifts[e].clear(),
            Item::Leg(l) => c.leg_lifts[l].clear(),
        }
    }

    /// Local balance at the vertex of `h` against its reference half-edge.
    fn balanced(&self, c: &Cover, h: usize) -> bool {
        let v = self.g.anchor(h);
        let r = self.reference[v].expect("vertex has half-edges");
        c.pre[v]
            .iter()
            .all(|&p| self.sums[h][p] > 0 && self.sums[h][p] == self.sums[r][p])
    }
}

fn finish(g: &WeightedGraph, c: &Cover, ramified: bool, found: &mut Vec<Cover>) {
    if !admissible(g, c, ramified) {
        return;
    }
    let Some(d) = local_degrees(g, c) else {
        return;
    };
    let r = ramification(g, c);
    let mut cand = c.clone();
    for v in 0..g.vertex_count() {
        for &p in &c.pre[v] {
            let two_g = d[p] as i64 * (2 * g.genus_of(v) as i64 - 2) + r[p] + 2;
            if two_g < 0 || two_g % 2 != 0 {
                return;
            }
            cand.genus[p] = (two_g / 2) as u32;
        }
    }
    for l in &mut cand.edge_lifts {
        l.sort();
    }
    for l in &mut cand.leg_lifts {
        l.sort();
    }
    if is_valid(g, &cand, ramified) && !found.iter().any(|f| isomorphic(f, &cand)) {
        found.push(cand);
    }
}

/// Exhaustive graph isomorphism test over vertex bijections.
pub fn graphs_isomorphic(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.half_edge_count() != b.half_edge_count() {
        return false;
    }
    let legs = |g: &WeightedGraph, v: usize| {
        let mut l: Vec<String> = g
            .half_edges_at(v)
            .into_iter()
            .filter_map(|h| g.leg_label(h).map(str::to_string))
            .collect();
        l.sort();
        l
    };
    let mult = |g: &WeightedGraph| {
        let mut m = vec![vec![0usize; n]; n];
        for (h, hb) in g.edges() {
            let (u, v) = (g.anchor(h), g.anchor(hb));
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    };
    let (ma, mb) = (mult(a), mult(b));
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let ok = (0..n).all(|v| a.genus_of(v) == b.genus_of(perm[v]) && legs(a, v) == legs(b, perm[v]))
            && (0..n).all(|u| (0..n).all(|v| ma[u][v] == mb[perm[u]][perm[v]]));
        if ok {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
