//! Boundary strata: factor products and dimensions, the catalogue of
//! gluing maps, stable-graph degeneration and the stratum enumeration.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_code;
use crate::error::{Error, Result};
use crate::graph::{is_ram_label, GraphBuilder, WeightedGraph};
use crate::harmonic::Variant;
use crate::morphism_canon::canonical_morphism;
use crate::prym::{cover_with, enumerate_prym_structures_with, PrymStructure, VertexClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// Pointed Prym curves of genus `genus` with `n` points.
    PrymPointed,
    /// Pointed curves (the trivial cover).
    Curve,
    /// Prym curves with `two_r` ramification points and `m` further points.
    PrymRamified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumFactor {
    pub kind: FactorKind,
    /// Target vertex the factor belongs to.
    pub vertex: usize,
    pub genus: u32,
    pub n: usize,
    pub two_r: usize,
    pub m: usize,
    pub dimension: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDescriptor {
    pub structure: PrymStructure,
    pub factors: Vec<StratumFactor>,
    pub dimension: i64,
    pub codimension: i64,
    pub ambient_dimension: i64,
    pub automorphisms: u64,
}

/// Factor product of a Prym structure. One factor per non-exceptional
/// target vertex; exceptional vertices carry no moduli.
pub fn stratum_factors(p: &PrymStructure) -> Result<StratumDescriptor> {
    let g = p.target();
    let mut factors = Vec::new();
    for data in &p.classification.vertices {
        let v = data.vertex;
        if data.class == VertexClass::Exceptional {
            continue;
        }
        let genus = g.genus_of(v);
        let n = g.half_edges_at(v).len();
        let kind = match data.class {
            VertexClass::Trivial => FactorKind::Curve,
            _ if data.two_r > 0 => FactorKind::PrymRamified,
            _ => FactorKind::PrymPointed,
        };
        if 2 * genus as i64 - 2 + n as i64 <= 0 {
            return Err(Error::Parameter(format!(
                "factor at vertex {v} is unstable (genus {genus}, {n} points)"
            )));
        }
        let (two_r, m) = match kind {
            FactorKind::PrymRamified => (data.two_r, data.m),
            _ => (0, n),
        };
        factors.push(StratumFactor {
            kind,
            vertex: v,
            genus,
            n,
            two_r,
            m,
            dimension: 3 * genus as i64 - 3 + n as i64,
        });
    }
    let dimension: i64 = factors.iter().map(|f| f.dimension).sum();
    let ambient_dimension = p.ambient_dimension();
    let codimension = ambient_dimension - dimension;
    assert_eq!(
        codimension,
        p.codimension() as i64,
        "factor dimensions disagree with the node count"
    );
    Ok(StratumDescriptor {
        automorphisms: p.automorphisms(),
        structure: p.clone(),
        factors,
        dimension,
        codimension,
        ambient_dimension,
    })
}

/// Parameters of the gluing maps; unused fields are ignored by a kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GluingParams {
    pub g: u32,
    pub i: u32,
    pub r1: u32,
    pub r2: u32,
    pub x: u32,
    pub r: u32,
    pub m: u32,
}

fn x_labels(range: std::ops::Range<u32>) -> Vec<String> {
    range.map(|j| format!("x{}", j + 1)).collect()
}

fn ram_labels(range: std::ops::Range<u32>) -> Vec<String> {
    range.map(|j| format!("ram:p{}", j + 1)).collect()
}

fn param(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(msg()))
    }
}

fn add_legs(b: &mut GraphBuilder, v: usize, labels: &[String]) {
    for l in labels {
        b.leg(v, l);
    }
}

/// Checks stability and cover genera, then builds the structure.
fn finish(base: WeightedGraph, doubled: &[bool], crossed: &[bool]) -> Result<PrymStructure> {
    for v in 0..base.vertex_count() {
        param(base.euler_char(v) >= 0, || {
            format!("vertex {v} of the base graph would be unstable")
        })?;
    }
    for v in 0..base.vertex_count() {
        if !doubled[v] && !base.is_strictly_semistable(v) {
            let k = base
                .half_edges_at(v)
                .into_iter()
                .filter(|&h| {
                    base.leg_label(h).is_some_and(is_ram_label)
                        || (!base.is_leg(h)
                            && base.is_strictly_semistable(base.anchor(base.partner(h))))
                })
                .count() as i64;
            param(2 * base.genus_of(v) as i64 - 1 + k / 2 >= 0, || {
                format!("cover of vertex {v} would have negative genus")
            })?;
        }
    }
    let variant = Variant::detect(&base);
    let phi = cover_with(&base, variant, doubled, crossed);
    PrymStructure::new(phi, variant)
        .map_err(|e| Error::Parameter(format!("parameters give no Prym structure: {e}")))
}

/// The Prym structure of gluing map `kind` (1 to 6).
///
/// Leg labels are `x1..xm` and `ram:p1..`. In kinds 1-3 the genus-`i`
/// side carries `x1..x{x}`.
pub fn build_gluing(kind: u8, p: &GluingParams) -> Result<PrymStructure> {
    let GluingParams {
        g,
        i,
        r1,
        r2,
        x,
        r,
        m,
    } = *p;
    match kind {
        1 | 2 => {
            param(i <= g, || format!("i = {i} exceeds g = {g}"))?;
            param(x <= m, || format!("x = {x} exceeds m = {m}"))?;
            let (p1, p2) = if kind == 1 {
                (2 * r1, 2 * r2)
            } else {
                param(r1 >= 1 && r2 >= 1, || "kind 2 needs r1, r2 >= 1".into())?;
                (2 * r1 - 1, 2 * r2 - 1)
            };
            let mut b = GraphBuilder::new();
            let a = b.vertex(g - i);
            let c = b.vertex(i);
            add_legs(&mut b, a, &x_labels(x..m));
            add_legs(&mut b, a, &ram_labels(0..p1));
            add_legs(&mut b, c, &x_labels(0..x));
            add_legs(&mut b, c, &ram_labels(p1..p1 + p2));
            if kind == 1 {
                b.edge(a, c);
                finish(b.build(), &[false, false], &[false])
            } else {
                let e = b.vertex(0);
                b.edge(a, e);
                b.edge(e, c);
                finish(b.build(), &[false, false, false], &[false, false])
            }
        }
        3 => {
            param(i <= g, || format!("i = {i} exceeds g = {g}"))?;
            param(x <= m, || format!("x = {x} exceeds m = {m}"))?;
            let mut b = GraphBuilder::new();
            let a = b.vertex(g - i);
            let c = b.vertex(i);
            add_legs(&mut b, a, &x_labels(x..m));
            add_legs(&mut b, a, &ram_labels(0..2 * r));
            add_legs(&mut b, c, &x_labels(0..x));
            b.edge(a, c);
            finish(b.build(), &[false, true], &[false])
        }
        4 | 5 => {
            param(g >= 1, || "g must be at least 1".into())?;
            let mut b = GraphBuilder::new();
            let a = b.vertex(g - 1);
            b.edge(a, a);
            add_legs(&mut b, a, &x_labels(0..m));
            if kind == 4 {
                add_legs(&mut b, a, &ram_labels(0..2 * r));
                finish(b.build(), &[false], &[false])
            } else {
                finish(b.build(), &[true], &[true])
            }
        }
        6 => {
            param(g >= 1, || "g must be at least 1".into())?;
            let mut b = GraphBuilder::new();
            let a = b.vertex(g - 1);
            let e = b.vertex(0);
            b.edge(a, e);
            b.edge(e, a);
            add_legs(&mut b, a, &x_labels(0..m));
            add_legs(&mut b, a, &ram_labels(0..2 * r));
            finish(b.build(), &[false, false], &[false, false])
        }
        _ => Err(Error::Parameter(format!("gluing kind {kind} is not in 1..=6"))),
    }
}

/// Two elliptic vertices joined by `g - 1` edges with `k` legs each; each
/// vertex has one preimage and each edge two étale lifts.
pub fn build_elliptic_pair_gluing(g: u32, k: u32) -> Result<PrymStructure> {
    param(g >= 2, || format!("g = {g} must be at least 2"))?;
    let mut b = GraphBuilder::new();
    let u = b.vertex(1);
    let v = b.vertex(1);
    add_legs(&mut b, u, &x_labels(0..k));
    add_legs(&mut b, v, &x_labels(k..2 * k));
    for _ in 1..g {
        b.edge(u, v);
    }
    let crossed = vec![false; (g - 1) as usize];
    finish(b.build(), &[false, false], &crossed)
}

/// `m_2(g)`: the number of points from which the non-tautological classes
/// appear.
pub fn nontaut_bound(g: i64) -> Result<u32> {
    match g {
        g if g <= 0 => Err(Error::Parameter(format!("genus {g} must be positive"))),
        1 => Ok(7),
        g => Ok((2 * (8 - g)).max(0) as u32),
    }
}

/// Genus, leg labels and variant of a moduli space of Prym curves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ambient {
    pub genus: u32,
    pub labels: Vec<String>,
    pub variant: Variant,
}

impl Ambient {
    /// Unramified, labels `x1..xm`.
    pub fn standard(genus: u32, m: u32) -> Self {
        Ambient {
            genus,
            labels: x_labels(0..m),
            variant: Variant::Unramified,
        }
    }

    pub fn of(p: &PrymStructure) -> Self {
        let mut labels: Vec<String> = p.target().leg_labels().into_iter().collect();
        labels.sort();
        Ambient {
            genus: p.ambient_genus() as u32,
            labels,
            variant: p.variant,
        }
    }

    pub fn dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.labels.len() as i64
    }
}

/// Stable graphs of genus `g` with the given legs and at most `max_edges`
/// edges, up to isomorphism, in canonical labeling.
pub fn stable_graphs(g: u32, labels: &[String], max_edges: usize) -> Result<Vec<WeightedGraph>> {
    let smooth = WeightedGraph::smooth(g, labels);
    if smooth.euler_char(0) <= 0 {
        return Err(Error::Unstable(format!(
            "genus {g} with {} points is not stable",
            labels.len()
        )));
    }
    let mut level: BTreeMap<Vec<u8>, WeightedGraph> = BTreeMap::new();
    let first = crate::canon::canonical_form(&smooth)?;
    level.insert(first.canonical_code, first.graph);
    let mut all: Vec<WeightedGraph> = level.values().cloned().collect();
    for _ in 0..max_edges {
        let mut next: BTreeMap<Vec<u8>, WeightedGraph> = BTreeMap::new();
        for graph in level.values() {
            for d in degenerations(graph) {
                let c = crate::canon::canonical_form(&d)?;
                next.entry(c.canonical_code).or_insert(c.graph);
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.values().cloned());
        level = next;
    }
    Ok(all)
}

/// Stable graphs with one more edge mapping onto `g` by a contraction.
fn degenerations(g: &WeightedGraph) -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        let genus = g.genus_of(v);
        if genus >= 1 {
            let mut genera = g.genera().to_vec();
            genera[v] -= 1;
            let mut anchors = g.anchors().to_vec();
            let mut involution = g.involution().to_vec();
            let h = anchors.len();
            anchors.extend([v, v]);
            involution.extend([h + 1, h]);
            out.push(WeightedGraph::from_parts(genera, anchors, involution, g.legs().clone()));
        }
        let at_v = g.half_edges_at(v);
        for mask in 0..(1usize << at_v.len()) {
            let moved = mask.count_ones() as i64;
            let stay = at_v.len() as i64 - moved;
            for g2 in 0..=genus {
                let g1 = genus - g2;
                if 2 * g1 as i64 - 1 + stay <= 0 || 2 * g2 as i64 - 1 + moved <= 0 {
                    continue;
                }
                let mut genera = g.genera().to_vec();
                genera[v] = g1;
                genera.push(g2);
                let w = genera.len() - 1;
                let mut anchors = g.anchors().to_vec();
                for (i, &h) in at_v.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        anchors[h] = w;
                    }
                }
                let mut involution = g.involution().to_vec();
                let h = anchors.len();
                anchors.extend([v, w]);
                involution.extend([h + 1, h]);
                out.push(WeightedGraph::from_parts(genera, anchors, involution, g.legs().clone()));
            }
        }
    }
    out
}

/// Inserts a genus-0 vertex in the middle of each flagged edge.
pub(crate) fn insert_exceptional(g: &WeightedGraph, flagged: &[bool]) -> WeightedGraph {
    let mut genera = g.genera().to_vec();
    let mut anchors = g.anchors().to_vec();
    let mut involution = g.involution().to_vec();
    for (e, (h, hb)) in g.edges().into_iter().enumerate() {
        if !flagged[e] {
            continue;
        }
        genera.push(0);
        let x = genera.len() - 1;
        let k = anchors.len();
        anchors.extend([x, x]);
        involution.extend([h, hb]);
        involution[h] = k;
        involution[hb] = k + 1;
    }
    WeightedGraph::from_parts(genera, anchors, involution, g.legs().clone())
}

/// A stratum in canonical labeling with its code.
#[derive(Debug)]
pub(crate) struct Entry {
    pub code: Vec<u8>,
    pub structure: PrymStructure,
    pub codimension: usize,
    pub automorphisms: u64,
    contractions: OnceLock<BTreeMap<Vec<u8>, Vec<u64>>>,
}

impl Entry {
    /// Codes of all valid contractions, each with the node masks giving it.
    pub fn contractions(&self) -> &BTreeMap<Vec<u8>, Vec<u64>> {
        self.contractions.get_or_init(|| {
            let phi = &self.structure.morphism;
            let nodes = nodes(&self.structure);
            let ne = phi.target.edge_count();
            let mut out: BTreeMap<Vec<u8>, Vec<u64>> = BTreeMap::new();
            for mask in 0..(1u64 << nodes.len()) {
                let c = crate::prym::contract(phi, &node_flags(&nodes, ne, mask));
                if !crate::prym::validate_prym_in(&c, self.structure.variant).is_valid() {
                    continue;
                }
                out.entry(canonical_morphism(&c, None, false).code)
                    .or_default()
                    .push(mask);
            }
            out
        })
    }
}

/// A node of the stable model: a plain edge or an exceptional chain of two
/// edges. `halves` are the half-edges on the stable side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Node {
    pub edges: Vec<usize>,
    pub halves: (usize, usize),
    pub exceptional: bool,
}

/// Nodes in order of their first edge index in `target.edges()`.
pub(crate) fn nodes(p: &PrymStructure) -> Vec<Node> {
    let tgt = p.target();
    let edges = tgt.edges();
    let exc: Vec<bool> = (0..tgt.vertex_count())
        .map(|v| p.classification.class_of(v) == VertexClass::Exceptional)
        .collect();
    let mut seen = vec![false; edges.len()];
    let mut out = Vec::new();
    for e in 0..edges.len() {
        if seen[e] {
            continue;
        }
        seen[e] = true;
        let (h, hb) = edges[e];
        let x = [tgt.anchor(h), tgt.anchor(hb)].into_iter().find(|&v| exc[v]);
        let Some(x) = x else {
            out.push(Node {
                edges: vec![e],
                halves: (h, hb),
                exceptional: false,
            });
            continue;
        };
        let outer = if tgt.anchor(h) == x { hb } else { h };
        let f = (e + 1..edges.len())
            .find(|&f| {
                let (k, kb) = edges[f];
                tgt.anchor(k) == x || tgt.anchor(kb) == x
            })
            .expect("exceptional vertex has two edges");
        seen[f] = true;
        let (k, kb) = edges[f];
        let other = if tgt.anchor(k) == x { kb } else { k };
        out.push(Node {
            edges: vec![e, f],
            halves: (outer, other),
            exceptional: true,
        });
    }
    out
}

/// Edge flags of the nodes selected by `mask`.
pub(crate) fn node_flags(nodes: &[Node], edge_count: usize, mask: u64) -> Vec<bool> {
    let mut flags = vec![false; edge_count];
    for (i, n) in nodes.iter().enumerate() {
        if (mask >> i) & 1 == 1 {
            for &e in &n.edges {
                flags[e] = true;
            }
        }
    }
    flags
}

type Catalogue = Arc<Vec<Arc<Entry>>>;

fn cache() -> &'static Mutex<HashMap<(Ambient, usize), Catalogue>> {
    static CACHE: OnceLock<Mutex<HashMap<(Ambient, usize), Catalogue>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Every Prym structure of the ambient space with at most `max_codim`
/// nodes, sorted by `(codimension, code)`. Cached per process.
pub(crate) fn catalogue(ambient: &Ambient, max_codim: usize) -> Result<Catalogue> {
    let max_codim = max_codim.min(ambient.dimension().max(0) as usize);
    let key = (ambient.clone(), max_codim);
    if let Some(c) = cache().lock().expect("cache lock").get(&key) {
        return Ok(c.clone());
    }
    let graphs = stable_graphs(ambient.genus, &ambient.labels, max_codim)?;
    let variant = ambient.variant;
    let found: Vec<Vec<(Vec<u8>, PrymStructure, u64)>> = graphs
        .par_iter()
        .map(|g| structures_over(g, variant))
        .collect::<Result<_>>()?;
    let mut merged: BTreeMap<Vec<u8>, (PrymStructure, u64)> = BTreeMap::new();
    for (code, s, aut) in found.into_iter().flatten() {
        merged.entry(code).or_insert((s, aut));
    }
    let mut entries: Vec<Arc<Entry>> = merged
        .into_iter()
        .map(|(code, (structure, automorphisms))| {
            Arc::new(Entry {
                codimension: structure.codimension(),
                code,
                structure,
                automorphisms,
                contractions: OnceLock::new(),
            })
        })
        .collect();
    entries.sort_by(|a, b| (a.codimension, &a.code).cmp(&(b.codimension, &b.code)));
    let out = Arc::new(entries);
    cache().lock().expect("cache lock").insert(key, out.clone());
    Ok(out)
}

/// Prym structures over all exceptional insertions into a stable graph.
fn structures_over(g: &WeightedGraph, variant: Variant) -> Result<Vec<(Vec<u8>, PrymStructure, u64)>> {
    let edges = g.edges();
    let mut ram = vec![0usize; g.vertex_count()];
    for (&h, l) in g.legs() {
        if variant.is_ramified_leg(l) {
            ram[g.anchor(h)] += 1;
        }
    }
    let mut out = Vec::new();
    for mask in 0..(1usize << edges.len()) {
        let flagged: Vec<bool> = (0..edges.len()).map(|e| (mask >> e) & 1 == 1).collect();
        let mut parity = ram.clone();
        for (e, &(h, hb)) in edges.iter().enumerate() {
            if flagged[e] {
                parity[g.anchor(h)] += 1;
                parity[g.anchor(hb)] += 1;
            }
        }
        if parity.iter().any(|p| p % 2 != 0) {
            continue;
        }
        let base = insert_exceptional(g, &flagged);
        for s in enumerate_prym_structures_with(&base, variant, false)? {
            let c = canonical_morphism(&s.morphism, None, false);
            out.push((
                c.code,
                PrymStructure::new_unchecked(c.morphism, variant),
                c.automorphisms,
            ));
        }
    }
    Ok(out)
}

/// All strata of the standard `m`-pointed space of genus `g` up to
/// codimension `max_codim`, sorted by `(codimension, code)`.
pub fn enumerate_strata(g: u32, m: u32, max_codim: usize) -> Result<Vec<StratumDescriptor>> {
    enumerate_strata_in(&Ambient::standard(g, m), max_codim)
}

pub fn enumerate_strata_in(ambient: &Ambient, max_codim: usize) -> Result<Vec<StratumDescriptor>> {
    if 2 * ambient.genus as i64 - 2 + ambient.labels.len() as i64 <= 0 {
        return Err(Error::Unstable(format!(
            "genus {} with {} points is not stable",
            ambient.genus,
            ambient.labels.len()
        )));
    }
    if max_codim as i64 > ambient.dimension() {
        return Err(Error::Parameter(format!(
            "codimension {max_codim} exceeds the dimension {}",
            ambient.dimension()
        )));
    }
    catalogue(ambient, max_codim)?
        .iter()
        .map(|e| {
            let mut d = stratum_factors(&e.structure)?;
            d.automorphisms = e.automorphisms;
            Ok(d)
        })
        .collect()
}

/// Canonical code of a stable graph, used by callers that dedup bases.
pub fn stable_graph_code(g: &WeightedGraph) -> Result<Vec<u8>> {
    canonical_code(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prym::validate_prym;

    #[test]
    fn bounds_row() {
        let row: Vec<u32> = (1..=6).map(|g| nontaut_bound(g).unwrap()).collect();
        assert_eq!(row, [7, 12, 10, 8, 6, 4]);
        assert_eq!(nontaut_bound(8).unwrap(), 0);
        assert_eq!(nontaut_bound(11).unwrap(), 0);
        assert!(nontaut_bound(0).is_err());
    }

    #[test]
    fn stable_graph_counts() {
        // genus 2, no legs: 1, 2 one-edge, 2 two-edge, 2 three-edge graphs
        let labels: Vec<String> = Vec::new();
        let all = stable_graphs(2, &labels, 3).unwrap();
        let mut by_edges = [0usize; 4];
        for g in &all {
            by_edges[g.edge_count()] += 1;
        }
        assert_eq!(by_edges, [1, 2, 2, 2]);
    }

    #[test]
    fn gluings_validate() {
        let p = GluingParams {
            g: 3,
            m: 0,
            ..Default::default()
        };
        let s = build_gluing(5, &p).unwrap();
        assert_eq!(s.source().vertex_count(), 2);
        assert_eq!(s.source().edge_count(), 2);
        assert!(validate_prym(&s.morphism).is_valid());
        let d = stratum_factors(&s).unwrap();
        assert_eq!(d.codimension, 1);
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].kind, FactorKind::Curve);
    }

    #[test]
    fn elliptic_pair_codimension() {
        for g in 2..=8 {
            let s = build_elliptic_pair_gluing(g, 8 - g).unwrap();
            let d = stratum_factors(&s).unwrap();
            assert_eq!(d.codimension, g as i64 - 1);
            assert_eq!(d.ambient_dimension, g as i64 + 13);
            assert_eq!(d.factors.len(), 2);
            for f in &d.factors {
                assert_eq!((f.kind, f.genus, f.n, f.dimension), (FactorKind::PrymPointed, 1, 7, 7));
            }
        }
    }
}
