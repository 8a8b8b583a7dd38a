//! Prym structures: admissible degree-2 harmonic morphisms of semi-stable
//! graphs, their vertex classification, enumeration over a fixed base, and
//! edge contraction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{validate_graph, GraphBuilder, WeightedGraph};
use crate::harmonic::{structural_checks, validate_harmonic_in, HarmonicMorphism, Variant};
use crate::morphism_canon::{canonical_morphism, fixed_target_code};
use crate::report::{IssueKind, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    /// Strictly semistable.
    Exceptional,
    /// Stable, adjacent to an exceptional vertex.
    Ramified,
    /// Two preimages.
    Trivial,
    /// Remaining vertices with one preimage.
    Nontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexData {
    pub vertex: usize,
    pub class: VertexClass,
    /// Half-edges at the vertex whose edge leads to an exceptional vertex.
    pub exceptional_edges: usize,
    /// Ramification legs at the vertex.
    pub ramification_legs: usize,
    /// `exceptional_edges + ramification_legs`.
    pub two_r: usize,
    /// Valence minus `two_r`.
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub exceptional: Vec<usize>,
    pub ramified: Vec<usize>,
    pub trivial: Vec<usize>,
    pub nontrivial: Vec<usize>,
    pub vertices: Vec<VertexData>,
}

impl Classification {
    pub fn class_of(&self, v: usize) -> VertexClass {
        self.vertices[v].class
    }
}

/// A validated Prym structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrymStructure {
    pub morphism: HarmonicMorphism,
    pub variant: Variant,
    pub classification: Classification,
}

impl PrymStructure {
    pub fn new(morphism: HarmonicMorphism, variant: Variant) -> Result<Self> {
        let report = validate_prym_in(&morphism, variant);
        if !report.is_valid() {
            return Err(Error::InvalidPrym(report));
        }
        Ok(Self::new_unchecked(morphism, variant))
    }

    /// Variant read off the target's leg labels.
    pub fn from_morphism(morphism: HarmonicMorphism) -> Result<Self> {
        let variant = Variant::detect(&morphism.target);
        Self::new(morphism, variant)
    }

    pub(crate) fn new_unchecked(morphism: HarmonicMorphism, variant: Variant) -> Self {
        let classification = classify_morphism(&morphism, variant);
        PrymStructure {
            morphism,
            variant,
            classification,
        }
    }

    pub fn target(&self) -> &WeightedGraph {
        &self.morphism.target
    }

    pub fn source(&self) -> &WeightedGraph {
        &self.morphism.source
    }

    /// Nodes of the stable model: `#E - #V^exc`.
    pub fn codimension(&self) -> usize {
        self.target().edge_count() - self.classification.exceptional.len()
    }

    pub fn ambient_genus(&self) -> u64 {
        self.target().graph_genus().expect("connected target")
    }

    /// `3g - 3 + #legs`.
    pub fn ambient_dimension(&self) -> i64 {
        3 * self.ambient_genus() as i64 - 3 + self.target().leg_count() as i64
    }

    /// Full canonical code (target and source isomorphisms, unordered fibres).
    pub fn canonical_code(&self) -> Vec<u8> {
        canonical_morphism(&self.morphism, None, false).code
    }

    /// The same structure in canonical labeling.
    pub fn canonical(&self) -> PrymStructure {
        let c = canonical_morphism(&self.morphism, None, false);
        PrymStructure::new_unchecked(c.morphism, self.variant)
    }

    /// Order of the automorphism group of the structure.
    pub fn automorphisms(&self) -> u64 {
        canonical_morphism(&self.morphism, None, false).automorphisms
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure serialization cannot fail")
    }
}

pub fn validate_prym(phi: &HarmonicMorphism) -> ValidationReport {
    validate_prym_in(phi, Variant::detect(&phi.target))
}

/// Degree 2, semi-stable connected source and target, conditions i-iii.
pub fn validate_prym_in(phi: &HarmonicMorphism, variant: Variant) -> ValidationReport {
    let structural = structural_checks(phi);
    if !structural.is_valid() {
        return structural;
    }
    let mut r = validate_harmonic_in(phi, 2, variant);
    if let Ok(d) = phi.degree() {
        if d != 2 {
            r.push(IssueKind::WrongDegree, format!("degree is {d}, expected 2"));
        }
    }
    let (src, tgt) = (&phi.source, &phi.target);
    let tr = validate_graph(tgt);
    if tr.has(IssueKind::Disconnected) {
        r.push(IssueKind::Disconnected, "target: disconnected");
    }
    if !src.is_connected() {
        r.push(IssueKind::SourceDisconnected, "source: disconnected");
    }
    for (name, g) in [("target", tgt), ("source", src)] {
        for v in 0..g.vertex_count() {
            if g.euler_char(v) < 0 {
                r.push(
                    IssueKind::NotSemistable,
                    format!("{name}: vertex {v} is unstable"),
                );
            }
        }
    }
    let ss: Vec<bool> = (0..tgt.vertex_count())
        .map(|v| tgt.is_strictly_semistable(v))
        .collect();
    // i
    for h in 0..tgt.half_edge_count() {
        let v = tgt.anchor(h);
        if ss[v] && ss[tgt.anchor(tgt.partner(h))] {
            let what = if tgt.is_leg(h) {
                format!("carries leg {:?}", tgt.leg_label(h).unwrap_or(""))
            } else {
                "meets a strictly semistable vertex".to_string()
            };
            r.push(
                IssueKind::AdjacentSemistable,
                format!("condition i fails: strictly semistable vertex {v} {what}"),
            );
        }
    }
    // ii
    for v in 0..tgt.vertex_count() {
        if ss[v] || tgt.euler_char(v) < 0 {
            continue;
        }
        let count = exceptional_half_edges(tgt, &ss, v) + ramification_legs(tgt, variant, v);
        if count % 2 != 0 {
            r.push(
                IssueKind::ExceptionalParity,
                format!("condition ii fails at vertex {v}: {count} exceptional contacts"),
            );
        }
    }
    // iii
    for k in 0..src.half_edge_count() {
        let h = phi.half_edge_map[k];
        let n = phi.local_degrees[k];
        let expected = if src.is_leg(k) {
            tgt.leg_label(h).is_some_and(|l| variant.is_ramified_leg(l))
        } else {
            ss[tgt.anchor(h)] || ss[tgt.anchor(tgt.partner(h))]
        };
        if n > 2 || (n == 2) != expected {
            r.push(
                IssueKind::RamificationPattern,
                format!(
                    "condition iii fails at source half-edge {k}: local degree {n}, expected {}",
                    if expected { 2 } else { 1 }
                ),
            );
        }
    }
    r
}

fn exceptional_half_edges(g: &WeightedGraph, ss: &[bool], v: usize) -> usize {
    g.half_edges_at(v)
        .into_iter()
        .filter(|&h| !g.is_leg(h) && ss[g.anchor(g.partner(h))])
        .count()
}

fn ramification_legs(g: &WeightedGraph, variant: Variant, v: usize) -> usize {
    g.half_edges_at(v)
        .into_iter()
        .filter(|&h| g.leg_label(h).is_some_and(|l| variant.is_ramified_leg(l)))
        .count()
}

fn classify_morphism(phi: &HarmonicMorphism, variant: Variant) -> Classification {
    let tgt = &phi.target;
    let ss: Vec<bool> = (0..tgt.vertex_count())
        .map(|v| tgt.is_strictly_semistable(v))
        .collect();
    let mut c = Classification {
        exceptional: Vec::new(),
        ramified: Vec::new(),
        trivial: Vec::new(),
        nontrivial: Vec::new(),
        vertices: Vec::new(),
    };
    for v in 0..tgt.vertex_count() {
        let exc = if ss[v] {
            0
        } else {
            exceptional_half_edges(tgt, &ss, v)
        };
        let ram = ramification_legs(tgt, variant, v);
        let class = if ss[v] {
            VertexClass::Exceptional
        } else if exc > 0 {
            VertexClass::Ramified
        } else if phi.preimages(v).len() == 2 {
            VertexClass::Trivial
        } else {
            VertexClass::Nontrivial
        };
        match class {
            VertexClass::Exceptional => c.exceptional.push(v),
            VertexClass::Ramified => c.ramified.push(v),
            VertexClass::Trivial => c.trivial.push(v),
            VertexClass::Nontrivial => c.nontrivial.push(v),
        }
        let valence = tgt.half_edges_at(v).len();
        c.vertices.push(VertexData {
            vertex: v,
            class,
            exceptional_edges: exc,
            ramification_legs: ram,
            two_r: exc + ram,
            m: valence - (exc + ram).min(valence),
        });
    }
    c
}

pub fn classify(phi: &HarmonicMorphism) -> Result<Classification> {
    let variant = Variant::detect(&phi.target);
    let report = validate_prym_in(phi, variant);
    if !report.is_valid() {
        return Err(Error::InvalidPrym(report));
    }
    Ok(classify_morphism(phi, variant))
}

/// All Prym structures on `g` up to source isomorphism over the identity
/// of `g`, ordered by code.
pub fn enumerate_prym_structures(g: &WeightedGraph, ramified_variant: bool) -> Result<Vec<PrymStructure>> {
    let variant = if ramified_variant {
        Variant::Ramified
    } else {
        Variant::Unramified
    };
    enumerate_prym_structures_with(g, variant, false)
}

pub fn enumerate_prym_structures_with(
    g: &WeightedGraph,
    variant: Variant,
    ordered_fibers: bool,
) -> Result<Vec<PrymStructure>> {
    let report = validate_graph(g);
    if !report.is_valid() {
        return Err(Error::MalformedGraph(report));
    }
    if !g.is_semistable() {
        let v = (0..g.vertex_count())
            .find(|&v| g.euler_char(v) < 0)
            .unwrap_or(0);
        return Err(Error::Unstable(format!("vertex {v} is unstable")));
    }
    let mut found: BTreeMap<String, PrymStructure> = BTreeMap::new();
    for phi in covers(g, variant) {
        let code = fixed_target_code(&phi, ordered_fibers);
        found
            .entry(code)
            .or_insert_with(|| PrymStructure::new_unchecked(phi, variant));
    }
    Ok(found.into_values().collect())
}

/// Every connected cover candidate; duplicates under sheet swaps included.
fn covers(g: &WeightedGraph, variant: Variant) -> Vec<HarmonicMorphism> {
    let nv = g.vertex_count();
    let ss: Vec<bool> = (0..nv).map(|v| g.is_strictly_semistable(v)).collect();
    for h in 0..g.half_edge_count() {
        if ss[g.anchor(h)] && ss[g.anchor(g.partner(h))] {
            return Vec::new();
        }
    }
    let edges = g.edges();
    let ramified_edge: Vec<bool> = edges
        .iter()
        .map(|&(h, hb)| ss[g.anchor(h)] || ss[g.anchor(hb)])
        .collect();
    let mut k = vec![0usize; nv];
    for (e, &(h, hb)) in edges.iter().enumerate() {
        if ramified_edge[e] {
            k[g.anchor(h)] += 1;
            k[g.anchor(hb)] += 1;
        }
    }
    for v in 0..nv {
        k[v] += ramification_legs(g, variant, v);
        if k[v] % 2 != 0 {
            return Vec::new();
        }
    }
    let single_genus = |v: usize| 2 * g.genus_of(v) as i64 - 1 + (k[v] / 2) as i64;
    let mut free = Vec::new();
    for v in 0..nv {
        if ss[v] || k[v] > 0 {
            if single_genus(v) < 0 {
                return Vec::new();
            }
        } else {
            free.push(v);
        }
    }
    let mut out = Vec::new();
    for mask in 0..(1usize << free.len()) {
        let mut doubled = vec![false; nv];
        for (i, &v) in free.iter().enumerate() {
            doubled[v] = mask & (1 << i) != 0;
        }
        if (0..nv).any(|v| !doubled[v] && single_genus(v) < 0) {
            continue;
        }
        let wired: Vec<usize> = (0..edges.len())
            .filter(|&e| {
                let (h, hb) = edges[e];
                doubled[g.anchor(h)] && doubled[g.anchor(hb)]
            })
            .collect();
        for wiring in 0..(1usize << wired.len()) {
            let mut crossed = vec![false; edges.len()];
            for (i, &e) in wired.iter().enumerate() {
                crossed[e] = wiring & (1 << i) != 0;
            }
            let phi = build_cover(g, variant, &doubled, &crossed, &ramified_edge, &single_genus);
            if phi.source.is_connected() {
                out.push(phi);
            }
        }
    }
    out
}

/// The cover of `g` with the given doubled vertices and crossed edges.
/// Edges at strictly semistable vertices get one lift of local degree 2.
pub(crate) fn cover_with(
    g: &WeightedGraph,
    variant: Variant,
    doubled: &[bool],
    crossed: &[bool],
) -> HarmonicMorphism {
    let ss: Vec<bool> = (0..g.vertex_count())
        .map(|v| g.is_strictly_semistable(v))
        .collect();
    let edges = g.edges();
    let ramified_edge: Vec<bool> = edges
        .iter()
        .map(|&(h, hb)| ss[g.anchor(h)] || ss[g.anchor(hb)])
        .collect();
    let mut k = vec![0i64; g.vertex_count()];
    for (e, &(h, hb)) in edges.iter().enumerate() {
        if ramified_edge[e] {
            k[g.anchor(h)] += 1;
            k[g.anchor(hb)] += 1;
        }
    }
    for (v, kv) in k.iter_mut().enumerate() {
        *kv += ramification_legs(g, variant, v) as i64;
    }
    let single_genus = |v: usize| (2 * g.genus_of(v) as i64 - 1 + k[v] / 2).max(0);
    build_cover(g, variant, doubled, crossed, &ramified_edge, &single_genus)
}

fn build_cover(
    g: &WeightedGraph,
    variant: Variant,
    doubled: &[bool],
    crossed: &[bool],
    ramified_edge: &[bool],
    single_genus: &dyn Fn(usize) -> i64,
) -> HarmonicMorphism {
    let mut b = GraphBuilder::new();
    let mut sheets: Vec<[usize; 2]> = Vec::with_capacity(g.vertex_count());
    let mut vertex_map = Vec::new();
    for v in 0..g.vertex_count() {
        if doubled[v] {
            let s0 = b.vertex(g.genus_of(v));
            let s1 = b.vertex(g.genus_of(v));
            vertex_map.extend([v, v]);
            sheets.push([s0, s1]);
        } else {
            let s = b.vertex(single_genus(v) as u32);
            vertex_map.push(v);
            sheets.push([s, s]);
        }
    }
    let mut half_edge_map = Vec::new();
    let mut local_degrees = Vec::new();
    for (e, (h, hb)) in g.edges().into_iter().enumerate() {
        let (a, c) = (g.anchor(h), g.anchor(hb));
        if ramified_edge[e] {
            b.edge(sheets[a][0], sheets[c][0]);
            half_edge_map.extend([h, hb]);
            local_degrees.extend([2, 2]);
            continue;
        }
        for i in 0..2 {
            let j = if crossed[e] { 1 - i } else { i };
            b.edge(sheets[a][i], sheets[c][j]);
            half_edge_map.extend([h, hb]);
            local_degrees.extend([1, 1]);
        }
    }
    for (&l, label) in g.legs() {
        let v = g.anchor(l);
        if variant.is_ramified_leg(label) {
            b.leg(sheets[v][0], label);
            half_edge_map.push(l);
            local_degrees.push(2);
        } else {
            b.leg(sheets[v][0], &format!("{label}+"));
            b.leg(sheets[v][1], &format!("{label}-"));
            half_edge_map.extend([l, l]);
            local_degrees.extend([1, 1]);
        }
    }
    HarmonicMorphism {
        source: b.build(),
        target: g.clone(),
        vertex_map,
        half_edge_map,
        local_degrees,
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Contracts the edges in `contracted` (a subset of `g.edges()` indices
/// given as flags) and returns the vertex map old -> new alongside.
fn contract_graph(g: &WeightedGraph, contracted: &[bool]) -> (WeightedGraph, Vec<usize>, Vec<Option<usize>>) {
    let edges = g.edges();
    let mut uf = UnionFind::new(g.vertex_count());
    let mut dropped = vec![false; g.half_edge_count()];
    let mut internal = vec![0i64; g.vertex_count()];
    for (e, &(h, hb)) in edges.iter().enumerate() {
        if contracted[e] {
            uf.union(g.anchor(h), g.anchor(hb));
            dropped[h] = true;
            dropped[hb] = true;
        }
    }
    let mut new_index = vec![usize::MAX; g.vertex_count()];
    let mut roots = Vec::new();
    for v in 0..g.vertex_count() {
        let r = uf.find(v);
        if new_index[r] == usize::MAX {
            new_index[r] = roots.len();
            roots.push(r);
        }
        new_index[v] = new_index[r];
    }
    let mut genus_sum = vec![0i64; roots.len()];
    let mut size = vec![0i64; roots.len()];
    for v in 0..g.vertex_count() {
        genus_sum[new_index[v]] += g.genus_of(v) as i64;
        size[new_index[v]] += 1;
    }
    for (e, &(h, _)) in edges.iter().enumerate() {
        if contracted[e] {
            internal[new_index[g.anchor(h)]] += 1;
        }
    }
    let genera: Vec<u32> = (0..roots.len())
        .map(|i| (genus_sum[i] + internal[i] - size[i] + 1) as u32)
        .collect();
    let mut half_index = vec![None; g.half_edge_count()];
    let mut next = 0;
    for h in 0..g.half_edge_count() {
        if !dropped[h] {
            half_index[h] = Some(next);
            next += 1;
        }
    }
    let mut anchors = vec![0; next];
    let mut involution = vec![0; next];
    let mut legs = BTreeMap::new();
    for h in 0..g.half_edge_count() {
        if let Some(i) = half_index[h] {
            anchors[i] = new_index[g.anchor(h)];
            involution[i] = half_index[g.partner(h)].expect("partner kept");
            if let Some(l) = g.leg_label(h) {
                legs.insert(i, l.to_string());
            }
        }
    }
    (
        WeightedGraph::from_parts(genera, anchors, involution, legs),
        new_index,
        half_index,
    )
}

/// Contracts a set of target edges (flags indexed like `target.edges()`)
/// together with every source edge over them. The result is not validated.
pub fn contract(phi: &HarmonicMorphism, contracted: &[bool]) -> HarmonicMorphism {
    let tgt = &phi.target;
    let src = &phi.source;
    let (target, tv, th) = contract_graph(tgt, contracted);
    let mut dropped = vec![false; tgt.half_edge_count()];
    for (e, &(h, hb)) in tgt.edges().iter().enumerate() {
        if contracted[e] {
            dropped[h] = true;
            dropped[hb] = true;
        }
    }
    let source_flags: Vec<bool> = src
        .edges()
        .iter()
        .map(|&(k, _)| dropped[phi.half_edge_map[k]])
        .collect();
    let (source, sv, sh) = contract_graph(src, &source_flags);
    let mut vertex_map = vec![0; source.vertex_count()];
    for w in 0..src.vertex_count() {
        vertex_map[sv[w]] = tv[phi.vertex_map[w]];
    }
    let mut half_edge_map = vec![0; source.half_edge_count()];
    let mut local_degrees = vec![0; source.half_edge_count()];
    for k in 0..src.half_edge_count() {
        if let Some(i) = sh[k] {
            half_edge_map[i] = th[phi.half_edge_map[k]].expect("image kept");
            local_degrees[i] = phi.local_degrees[k];
        }
    }
    HarmonicMorphism {
        source,
        target,
        vertex_map,
        half_edge_map,
        local_degrees,
    }
}
