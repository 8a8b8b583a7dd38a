//! Canonical labeling by individualization and refinement.
//!
//! The search is generic over the structure: callers supply an initial
//! (isomorphism-invariant) coloring of items, a tagged adjacency used for
//! color refinement, and a code function that, given a total order of the
//! items, returns a complete invariant of the structure in that order. The
//! search visits every leaf of the refinement tree and keeps the smallest
//! code. Structures here have at most a few dozen items.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate_structure, WeightedGraph};

pub(crate) struct Leaf<C> {
    /// `positions[item]` is the item's index in the canonical order.
    pub positions: Vec<usize>,
    pub code: C,
    /// Number of leaves reaching the minimal code; equals the number of
    /// item permutations preserving the structure.
    pub automorphisms: u64,
}

/// Dense ranks of `keys`, order-preserving.
pub(crate) fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

fn cell_count(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn refine(colors: &mut Vec<usize>, adjacency: &[Vec<(usize, u64)>]) {
    let mut cells = cell_count(colors);
    loop {
        let signatures: Vec<(usize, Vec<(u64, usize)>)> = (0..colors.len())
            .map(|v| {
                let mut s: Vec<(u64, usize)> =
                    adjacency[v].iter().map(|&(u, t)| (t, colors[u])).collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let next = rank(&signatures);
        let next_cells = cell_count(&next);
        *colors = next;
        if next_cells == cells {
            return;
        }
        cells = next_cells;
    }
}

pub(crate) fn search<C, F>(initial: &[usize], adjacency: &[Vec<(usize, u64)>], mut code: F) -> Leaf<C>
where
    C: Ord,
    F: FnMut(&[usize]) -> C,
{
    let mut colors = rank(initial);
    refine(&mut colors, adjacency);
    let mut best: Option<Leaf<C>> = None;
    descend(colors, adjacency, &mut code, &mut best);
    best.expect("search visits at least one leaf")
}

fn descend<C, F>(
    colors: Vec<usize>,
    adjacency: &[Vec<(usize, u64)>],
    code: &mut F,
    best: &mut Option<Leaf<C>>,
) where
    C: Ord,
    F: FnMut(&[usize]) -> C,
{
    let n = colors.len();
    let mut sizes = vec![0usize; n.max(1)];
    for &c in &colors {
        sizes[c] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let candidate = code(&colors);
        match best {
            Some(b) if candidate > b.code => {}
            Some(b) if candidate == b.code => b.automorphisms += 1,
            _ => {
                *best = Some(Leaf {
                    positions: colors,
                    code: candidate,
                    automorphisms: 1,
                })
            }
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == target) {
        let keyed: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| if u == v { 2 * c } else { 2 * c + 1 })
            .collect();
        let mut next = rank(&keyed);
        refine(&mut next, adjacency);
        descend(next, adjacency, code, best);
    }
}

/// A canonical representative of a graph's isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalGraph {
    /// Serialization of `graph`; equal for two inputs iff they are isomorphic.
    pub canonical_code: Vec<u8>,
    /// `vertex_perm[old] = new`.
    pub vertex_perm: Vec<usize>,
    /// `half_edge_perm[old] = new`.
    pub half_edge_perm: Vec<usize>,
    pub graph: WeightedGraph,
    /// Vertex permutations extending to automorphisms.
    pub vertex_automorphisms: u64,
}

impl CanonicalGraph {
    pub fn code_str(&self) -> &str {
        std::str::from_utf8(&self.canonical_code).expect("codes are JSON")
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct GraphCode<'a> {
    vertices: Vec<(u32, Vec<&'a str>)>,
    edges: Vec<(usize, usize)>,
}

/// Canonical form of a genus-weighted, leg-labeled graph.
pub fn canonical_form(g: &WeightedGraph) -> Result<CanonicalGraph> {
    let report = validate_structure(g);
    if !report.is_valid() {
        return Err(Error::MalformedGraph(report));
    }
    let nv = g.vertex_count();
    let mut leg_sets: Vec<Vec<&str>> = vec![Vec::new(); nv];
    for (&h, l) in g.legs() {
        leg_sets[g.anchor(h)].push(l.as_str());
    }
    for s in &mut leg_sets {
        s.sort_unstable();
    }
    let mut adjacency = vec![Vec::new(); nv];
    for h in 0..g.half_edge_count() {
        if !g.is_leg(h) {
            adjacency[g.anchor(h)].push((g.anchor(g.partner(h)), 0u64));
        }
    }
    let initial: Vec<(u32, usize, &Vec<&str>)> = (0..nv)
        .map(|v| (g.genus_of(v), adjacency[v].len(), &leg_sets[v]))
        .collect();
    let edges = g.edges();
    let leaf = search(&rank(&initial), &adjacency, |pos| {
        let mut vertices = vec![(0u32, Vec::new()); nv];
        for v in 0..nv {
            vertices[pos[v]] = (g.genus_of(v), leg_sets[v].clone());
        }
        let mut es: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(h, k)| {
                let (a, b) = (pos[g.anchor(h)], pos[g.anchor(k)]);
                (a.min(b), a.max(b))
            })
            .collect();
        es.sort_unstable();
        GraphCode {
            vertices,
            edges: es,
        }
    });
    let pos = leaf.positions;

    let mut keyed_edges: Vec<((usize, usize), usize, usize)> = edges
        .iter()
        .map(|&(h, k)| {
            let (a, b) = (pos[g.anchor(h)], pos[g.anchor(k)]);
            if a <= b {
                ((a, b), h, k)
            } else {
                ((b, a), k, h)
            }
        })
        .collect();
    keyed_edges.sort();
    let mut half_edge_perm = vec![0usize; g.half_edge_count()];
    let mut next = 0;
    for &(_, h, k) in &keyed_edges {
        half_edge_perm[h] = next;
        half_edge_perm[k] = next + 1;
        next += 2;
    }
    let mut legs: Vec<(usize, &str, usize)> = g
        .legs()
        .iter()
        .map(|(&h, l)| (pos[g.anchor(h)], l.as_str(), h))
        .collect();
    legs.sort();
    for &(_, _, h) in &legs {
        half_edge_perm[h] = next;
        next += 1;
    }
    let graph = g.relabel(&pos, &half_edge_perm);
    Ok(CanonicalGraph {
        canonical_code: graph.to_json().into_bytes(),
        vertex_perm: pos,
        half_edge_perm,
        graph,
        vertex_automorphisms: leaf.automorphisms,
    })
}

pub fn canonical_code(g: &WeightedGraph) -> Result<Vec<u8>> {
    Ok(canonical_form(g)?.canonical_code)
}
