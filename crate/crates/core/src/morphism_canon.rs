//! Canonical forms of morphisms, optionally with a coloring of target edges.
//!
//! Two flavours: the full form quotients by pairs of graph isomorphisms
//! (target and source) commuting with the maps and fixing target leg labels;
//! the fixed-target form keeps the target pointwise and only quotients by
//! source isomorphisms over the identity.

use std::collections::BTreeMap;

use crate::canon::{rank, search};
use crate::harmonic::HarmonicMorphism;

/// Result of canonicalizing a morphism.
#[derive(Clone, Debug)]
pub(crate) struct CanonicalMorphism {
    pub code: Vec<u8>,
    /// The relabeled morphism; target edges are numbered `(2k, 2k+1)`.
    pub morphism: HarmonicMorphism,
    /// Colors by edge index of the relabeled target.
    pub colors: Vec<u8>,
    /// Order of the automorphism group, half-edge permutations included.
    pub automorphisms: u64,
}

type Lift = (usize, usize, u32);

struct Prepared<'a> {
    phi: &'a HarmonicMorphism,
    edges: Vec<(usize, usize)>,
    colors: Vec<u8>,
    /// Per target edge: source half-edges over its first half.
    lifts: Vec<Vec<usize>>,
    /// Target legs `(half-edge, label, preimages)`.
    legs: Vec<(usize, &'a str, Vec<usize>)>,
    ordered: bool,
}

impl<'a> Prepared<'a> {
    fn new(phi: &'a HarmonicMorphism, colors: Option<&[u8]>, ordered: bool) -> Self {
        let edges = phi.target.edges();
        let colors = match colors {
            Some(c) => c.to_vec(),
            None => vec![0; edges.len()],
        };
        let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); phi.target.half_edge_count()];
        for (k, &h) in phi.half_edge_map.iter().enumerate() {
            by_target[h].push(k);
        }
        let lifts = edges
            .iter()
            .map(|&(h, _)| {
                by_target[h]
                    .iter()
                    .copied()
                    .filter(|&k| !phi.source.is_leg(k))
                    .collect()
            })
            .collect();
        let legs = phi
            .target
            .legs()
            .iter()
            .map(|(&l, label)| (l, label.as_str(), by_target[l].clone()))
            .collect();
        Prepared {
            phi,
            edges,
            colors,
            lifts,
            legs,
            ordered,
        }
    }

    fn source_label(&self, k: usize) -> &'a str {
        if self.ordered {
            self.phi.source.leg_label(k).unwrap_or("")
        } else {
            ""
        }
    }

    /// Lift pattern of edge `e` under a source numbering, oriented from its
    /// first half (or reversed).
    fn pattern(&self, e: usize, spos: impl Fn(usize) -> usize, reversed: bool) -> Vec<Lift> {
        let src = &self.phi.source;
        let mut p: Vec<Lift> = self.lifts[e]
            .iter()
            .map(|&k| {
                let (s, t) = (spos(src.anchor(k)), spos(src.anchor(src.partner(k))));
                let n = self.phi.local_degrees[k];
                if reversed {
                    (t, s, n)
                } else {
                    (s, t, n)
                }
            })
            .collect();
        p.sort_unstable();
        p
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct FullCode<'a> {
    target: Vec<(u32, Vec<&'a str>)>,
    source: Vec<(usize, u32)>,
    legs: Vec<(&'a str, usize, Vec<(usize, u32, &'a str)>)>,
    edges: Vec<(usize, usize, u8, Vec<Lift>)>,
}

/// Oriented edge key under given positions: `(a, b, color, pattern, flipped)`.
fn edge_key(
    p: &Prepared<'_>,
    e: usize,
    tpos: &[usize],
    spos: &dyn Fn(usize) -> usize,
) -> ((usize, usize, u8, Vec<Lift>), bool) {
    let tgt = &p.phi.target;
    let (h, hb) = p.edges[e];
    let (a, b) = (tpos[tgt.anchor(h)], tpos[tgt.anchor(hb)]);
    let c = p.colors[e];
    if a < b {
        ((a, b, c, p.pattern(e, spos, false)), false)
    } else if a > b {
        ((b, a, c, p.pattern(e, spos, true)), true)
    } else {
        let straight = p.pattern(e, spos, false);
        let flipped = p.pattern(e, spos, true);
        if flipped < straight {
            ((a, a, c, flipped), true)
        } else {
            ((a, a, c, straight), false)
        }
    }
}

pub(crate) fn canonical_morphism(
    phi: &HarmonicMorphism,
    colors: Option<&[u8]>,
    ordered_fibers: bool,
) -> CanonicalMorphism {
    let p = Prepared::new(phi, colors, ordered_fibers);
    let (src, tgt) = (&phi.source, &phi.target);
    let nt = tgt.vertex_count();
    let ns = src.vertex_count();

    let mut target_legs: Vec<Vec<&str>> = vec![Vec::new(); nt];
    for (&l, label) in tgt.legs() {
        target_legs[tgt.anchor(l)].push(label.as_str());
    }
    for s in &mut target_legs {
        s.sort_unstable();
    }
    let mut source_legs: Vec<Vec<String>> = vec![Vec::new(); ns];
    for &(_, label, ref pre) in &p.legs {
        for &k in pre {
            source_legs[src.anchor(k)].push(format!(
                "{label}/{}/{}",
                phi.local_degrees[k],
                p.source_label(k)
            ));
        }
    }
    for s in &mut source_legs {
        s.sort_unstable();
    }
    let mut initial: Vec<(u8, u32, usize, Vec<String>, usize)> = Vec::with_capacity(nt + ns);
    for v in 0..nt {
        initial.push((
            0,
            tgt.genus_of(v),
            tgt.half_edges_at(v).len(),
            target_legs[v].iter().map(|s| s.to_string()).collect(),
            phi.preimages(v).len(),
        ));
    }
    for w in 0..ns {
        initial.push((
            1,
            src.genus_of(w),
            src.half_edges_at(w).len(),
            source_legs[w].clone(),
            0,
        ));
    }
    let mut adjacency: Vec<Vec<(usize, u64)>> = vec![Vec::new(); nt + ns];
    for (e, &(h, hb)) in p.edges.iter().enumerate() {
        let (a, b) = (tgt.anchor(h), tgt.anchor(hb));
        let tag = 1 + p.colors[e] as u64;
        adjacency[a].push((b, tag));
        adjacency[b].push((a, tag));
    }
    for k in 0..src.half_edge_count() {
        if !src.is_leg(k) {
            let tag = 1000 + phi.local_degrees[k] as u64;
            adjacency[nt + src.anchor(k)].push((nt + src.anchor(src.partner(k)), tag));
        }
    }
    for (w, &v) in phi.vertex_map.iter().enumerate() {
        adjacency[nt + w].push((v, 2000));
        adjacency[v].push((nt + w, 2001));
    }

    let leaf = search(&rank(&initial), &adjacency, |pos| {
        let tpos = &pos[..nt];
        let spos = |w: usize| pos[nt + w] - nt;
        let mut target = vec![(0u32, Vec::new()); nt];
        for v in 0..nt {
            target[tpos[v]] = (tgt.genus_of(v), target_legs[v].clone());
        }
        let mut source = vec![(0usize, 0u32); ns];
        for w in 0..ns {
            source[spos(w)] = (tpos[phi.vertex_map[w]], src.genus_of(w));
        }
        let mut legs: Vec<(&str, usize, Vec<(usize, u32, &str)>)> = p
            .legs
            .iter()
            .map(|&(l, label, ref pre)| {
                let mut q: Vec<(usize, u32, &str)> = pre
                    .iter()
                    .map(|&k| (spos(src.anchor(k)), phi.local_degrees[k], p.source_label(k)))
                    .collect();
                q.sort_unstable();
                (label, tpos[tgt.anchor(l)], q)
            })
            .collect();
        legs.sort_unstable();
        let mut edges: Vec<(usize, usize, u8, Vec<Lift>)> = (0..p.edges.len())
            .map(|e| edge_key(&p, e, tpos, &spos).0)
            .collect();
        edges.sort_unstable();
        FullCode {
            target,
            source,
            legs,
            edges,
        }
    });

    let pos = leaf.positions;
    let tpos: Vec<usize> = pos[..nt].to_vec();
    let spos_vec: Vec<usize> = pos[nt..].iter().map(|&x| x - nt).collect();
    let spos = |w: usize| spos_vec[w];

    // target half-edges: edges by key, then legs by (position, label)
    let mut keyed: Vec<((usize, usize, u8, Vec<Lift>), bool, usize)> = (0..p.edges.len())
        .map(|e| {
            let (k, f) = edge_key(&p, e, &tpos, &spos);
            (k, f, e)
        })
        .collect();
    keyed.sort();
    let mut th = vec![0usize; tgt.half_edge_count()];
    let mut sh = vec![usize::MAX; src.half_edge_count()];
    let mut next_s = 0;
    let mut new_colors = Vec::with_capacity(keyed.len());
    for (i, (_, flipped, e)) in keyed.iter().enumerate() {
        let (h, hb) = p.edges[*e];
        let (first, second) = if *flipped { (hb, h) } else { (h, hb) };
        th[first] = 2 * i;
        th[second] = 2 * i + 1;
        new_colors.push(p.colors[*e]);
        let mut over: Vec<(usize, usize, u32, usize)> = phi
            .lifts(first)
            .into_iter()
            .filter(|&k| !src.is_leg(k))
            .map(|k| {
                (
                    spos(src.anchor(k)),
                    spos(src.anchor(src.partner(k))),
                    phi.local_degrees[k],
                    k,
                )
            })
            .collect();
        over.sort_unstable();
        for &(_, _, _, k) in &over {
            sh[k] = next_s;
            sh[src.partner(k)] = next_s + 1;
            next_s += 2;
        }
    }
    let mut next_t = 2 * keyed.len();
    let mut tlegs: Vec<(usize, &str, usize)> = p
        .legs
        .iter()
        .map(|&(l, label, _)| (tpos[tgt.anchor(l)], label, l))
        .collect();
    tlegs.sort_unstable();
    let mut renamed: BTreeMap<usize, String> = BTreeMap::new();
    for &(_, label, l) in &tlegs {
        th[l] = next_t;
        next_t += 1;
        let mut pre: Vec<(usize, u32, &str, usize)> = phi
            .lifts(l)
            .into_iter()
            .map(|k| (spos(src.anchor(k)), phi.local_degrees[k], p.source_label(k), k))
            .collect();
        pre.sort_unstable();
        let count = pre.len();
        for (j, &(_, _, _, k)) in pre.iter().enumerate() {
            sh[k] = next_s;
            next_s += 1;
            if !ordered_fibers {
                renamed.insert(k, fiber_label(label, j, count));
            }
        }
    }
    debug_assert!(sh.iter().all(|&x| x != usize::MAX));
    let mut morphism = phi.relabel(&tpos, &th, &spos_vec, &sh);
    if !ordered_fibers {
        let legs = renamed.into_iter().map(|(k, l)| (sh[k], l)).collect();
        morphism.source = crate::graph::WeightedGraph::from_parts(
            morphism.source.genera().to_vec(),
            morphism.source.anchors().to_vec(),
            morphism.source.involution().to_vec(),
            legs,
        );
    }
    let mut code = morphism.to_json().into_bytes();
    if colors.is_some() {
        code.push(b'|');
        code.extend(new_colors.iter().map(|c| b'0' + c));
    }
    let automorphisms = leaf.automorphisms * vertex_fixing_automorphisms(&p);
    CanonicalMorphism {
        code,
        morphism,
        colors: new_colors,
        automorphisms,
    }
}

/// Source leg names for the `j`-th of `count` preimages of `label`.
pub(crate) fn fiber_label(label: &str, j: usize, count: usize) -> String {
    match count {
        1 => label.to_string(),
        2 => format!("{label}{}", if j == 0 { '+' } else { '-' }),
        _ => format!("{label}#{}", j + 1),
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of bijections between two lift multisets respecting type.
fn lift_matchings(a: &[Lift], b: &[Lift]) -> u64 {
    if a != b {
        return 0;
    }
    let mut counts: BTreeMap<&Lift, usize> = BTreeMap::new();
    for x in a {
        *counts.entry(x).or_default() += 1;
    }
    counts.values().map(|&c| factorial(c)).product()
}

fn permanent(m: &[Vec<u64>]) -> u64 {
    let k = m.len();
    let mut dp = vec![0u64; 1 << k];
    dp[0] = 1;
    for mask in 0..(1usize << k) {
        if dp[mask] == 0 {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == k {
            continue;
        }
        for (col, &w) in m[row].iter().enumerate() {
            if mask & (1 << col) == 0 && w != 0 {
                dp[mask | (1 << col)] += dp[mask] * w;
            }
        }
    }
    dp[(1 << k) - 1]
}

/// Automorphisms acting trivially on vertices: permutations of parallel
/// edges (and flips of loops) together with their source lifts, and swaps of
/// unordered leg preimages sharing a vertex.
fn vertex_fixing_automorphisms(p: &Prepared<'_>) -> u64 {
    let phi = p.phi;
    let tgt = &phi.target;
    let src = &phi.source;
    let mut total: u64 = 1;
    if !p.ordered {
        for (_, _, pre) in &p.legs {
            let mut counts: BTreeMap<(usize, u32), usize> = BTreeMap::new();
            for &k in pre {
                *counts.entry((src.anchor(k), phi.local_degrees[k])).or_default() += 1;
            }
            total *= counts.values().map(|&c| factorial(c)).product::<u64>();
        }
    }
    let mut groups: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
    for (e, &(h, hb)) in p.edges.iter().enumerate() {
        let (a, b) = (tgt.anchor(h), tgt.anchor(hb));
        groups.entry((a.min(b), a.max(b))).or_default().push((e, a > b));
    }
    let id = |w: usize| w;
    for ((a, b), members) in groups {
        let pats: Vec<(Vec<Lift>, Vec<Lift>)> = members
            .iter()
            .map(|&(e, rev)| (p.pattern(e, id, rev), p.pattern(e, id, !rev)))
            .collect();
        let m: Vec<Vec<u64>> = members
            .iter()
            .enumerate()
            .map(|(i, &(e, _))| {
                members
                    .iter()
                    .enumerate()
                    .map(|(j, &(f, _))| {
                        if p.colors[e] != p.colors[f] {
                            return 0;
                        }
                        let same = lift_matchings(&pats[i].0, &pats[j].0);
                        if a == b {
                            same + lift_matchings(&pats[i].0, &pats[j].1)
                        } else {
                            same
                        }
                    })
                    .collect()
            })
            .collect();
        total *= permanent(&m);
    }
    total
}

/// Code invariant under source isomorphisms over the identity of the target.
pub(crate) fn fixed_target_code(phi: &HarmonicMorphism, ordered_fibers: bool) -> String {
    let p = Prepared::new(phi, None, ordered_fibers);
    let tgt = &phi.target;
    let fibers: Vec<Vec<usize>> = (0..tgt.vertex_count()).map(|v| phi.preimages(v)).collect();
    let swappable: Vec<usize> = (0..fibers.len()).filter(|&v| fibers[v].len() == 2).collect();
    let mut best: Option<String> = None;
    for mask in 0..(1usize << swappable.len()) {
        let mut order: Vec<usize> = Vec::with_capacity(phi.source.vertex_count());
        let mut flip = vec![false; fibers.len()];
        for (i, &v) in swappable.iter().enumerate() {
            flip[v] = mask & (1 << i) != 0;
        }
        for (v, f) in fibers.iter().enumerate() {
            if flip[v] {
                order.extend(f.iter().rev());
            } else {
                order.extend(f.iter());
            }
        }
        let mut spos_vec = vec![0; order.len()];
        for (i, &w) in order.iter().enumerate() {
            spos_vec[w] = i;
        }
        let spos = |w: usize| spos_vec[w];
        let genera: Vec<u32> = order.iter().map(|&w| phi.source.genus_of(w)).collect();
        let edges: Vec<Vec<Lift>> = (0..p.edges.len())
            .map(|e| p.pattern(e, spos, false))
            .collect();
        let legs: Vec<Vec<(usize, u32, &str)>> = p
            .legs
            .iter()
            .map(|(_, _, pre)| {
                let mut q: Vec<(usize, u32, &str)> = pre
                    .iter()
                    .map(|&k| {
                        (
                            spos(phi.source.anchor(k)),
                            phi.local_degrees[k],
                            p.source_label(k),
                        )
                    })
                    .collect();
                q.sort_unstable();
                q
            })
            .collect();
        let code = format!("{genera:?}{edges:?}{legs:?}");
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.expect("at least one ordering")
}
