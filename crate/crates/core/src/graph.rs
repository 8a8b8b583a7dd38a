//! Genus-weighted graphs in half-edge form.
//!
//! A graph is a set of vertices carrying a genus, a set of half-edges each
//! anchored at a vertex, and an involution on half-edges. Two-element orbits
//! of the involution are edges; fixed points are legs and carry a marking
//! label. Loops and multi-edges need no special casing in this encoding.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{IssueKind, ValidationReport};

/// Largest admissible vertex genus.
pub const MAX_GENUS: u32 = i32::MAX as u32;

/// Label prefix marking a leg as a ramification point.
pub const RAM_PREFIX: &str = "ram:";

pub fn is_ram_label(label: &str) -> bool {
    label.starts_with(RAM_PREFIX)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct WeightedGraph {
    genera: Vec<u32>,
    anchors: Vec<usize>,
    involution: Vec<usize>,
    legs: BTreeMap<usize, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    Unstable,
    StrictlySemistable,
    Stable,
}

impl WeightedGraph {
    /// Builds a graph without checking any invariant; see [`validate_graph`].
    pub fn from_parts(
        genera: Vec<u32>,
        anchors: Vec<usize>,
        involution: Vec<usize>,
        legs: BTreeMap<usize, String>,
    ) -> Self {
        Self {
            genera,
            anchors,
            involution,
            legs,
        }
    }

    pub fn try_from_parts(
        genera: Vec<u32>,
        anchors: Vec<usize>,
        involution: Vec<usize>,
        legs: BTreeMap<usize, String>,
    ) -> Result<Self> {
        let g = Self::from_parts(genera, anchors, involution, legs);
        let report = validate_structure(&g);
        if report.is_valid() {
            Ok(g)
        } else {
            Err(Error::MalformedGraph(report))
        }
    }

    /// A single vertex of genus `genus` carrying the given legs.
    pub fn smooth<S: AsRef<str>>(genus: u32, legs: &[S]) -> Self {
        let mut b = GraphBuilder::new();
        let v = b.vertex(genus);
        for l in legs {
            b.leg(v, l.as_ref());
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.genera.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.anchors.len()
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn genus_of(&self, v: usize) -> u32 {
        self.genera[v]
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchors
    }

    pub fn anchor(&self, h: usize) -> usize {
        self.anchors[h]
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn partner(&self, h: usize) -> usize {
        self.involution[h]
    }

    pub fn is_leg(&self, h: usize) -> bool {
        self.involution[h] == h
    }

    pub fn leg_label(&self, h: usize) -> Option<&str> {
        self.legs.get(&h).map(String::as_str)
    }

    pub fn legs(&self) -> &BTreeMap<usize, String> {
        &self.legs
    }

    pub fn leg_labels(&self) -> BTreeSet<String> {
        self.legs.values().cloned().collect()
    }

    pub fn leg_count(&self) -> usize {
        self.legs.len()
    }

    /// Edges as `(h, ι(h))` with `h < ι(h)`, ordered by `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.anchors.len())
            .filter(|&h| self.involution[h] > h)
            .map(|h| (h, self.involution[h]))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.anchors.len())
            .filter(|&h| self.involution[h] > h)
            .count()
    }

    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.anchors.len())
            .filter(|&h| self.anchors[h] == v)
            .collect()
    }

    /// Number of half-edges anchored at `v`: loops count twice, legs once.
    pub fn valence(&self, v: usize) -> Result<usize> {
        if v >= self.genera.len() {
            return Err(Error::InvalidVertex(v));
        }
        Ok(self.anchors.iter().filter(|&&a| a == v).count())
    }

    /// Sign of `2g(v) - 2 + n(v)`.
    pub fn stability_class(&self, v: usize) -> Result<StabilityClass> {
        let n = self.valence(v)? as i64;
        let chi = 2 * self.genera[v] as i64 - 2 + n;
        Ok(match chi {
            x if x < 0 => StabilityClass::Unstable,
            0 => StabilityClass::StrictlySemistable,
            _ => StabilityClass::Stable,
        })
    }

    pub(crate) fn euler_char(&self, v: usize) -> i64 {
        2 * self.genera[v] as i64 - 2 + self.anchors.iter().filter(|&&a| a == v).count() as i64
    }

    pub fn is_strictly_semistable(&self, v: usize) -> bool {
        self.euler_char(v) == 0
    }

    pub fn is_connected(&self) -> bool {
        let n = self.genera.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for (h, &p) in self.involution.iter().enumerate() {
            if p != h && p < self.anchors.len() {
                let (a, b) = (self.anchors[h], self.anchors[p]);
                if a < n && b < n {
                    adj[a].push(b);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// Arithmetic genus `Σ g(v) + #E - #V + 1` of a connected graph.
    pub fn graph_genus(&self) -> Result<u64> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let total: i64 = self.genera.iter().map(|&g| g as i64).sum::<i64>()
            + self.edge_count() as i64
            - self.vertex_count() as i64
            + 1;
        Ok(total as u64)
    }

    pub fn is_semistable(&self) -> bool {
        self.is_connected() && (0..self.vertex_count()).all(|v| self.euler_char(v) >= 0)
    }

    pub fn is_stable(&self) -> bool {
        self.is_connected() && (0..self.vertex_count()).all(|v| self.euler_char(v) > 0)
    }

    /// Applies a relabeling: `vertex_perm[old] = new`, `half_edge_perm[old] = new`.
    pub fn relabel(&self, vertex_perm: &[usize], half_edge_perm: &[usize]) -> WeightedGraph {
        let nv = self.genera.len();
        let nh = self.anchors.len();
        let mut genera = vec![0; nv];
        for v in 0..nv {
            genera[vertex_perm[v]] = self.genera[v];
        }
        let mut anchors = vec![0; nh];
        let mut involution = vec![0; nh];
        for h in 0..nh {
            anchors[half_edge_perm[h]] = vertex_perm[self.anchors[h]];
            involution[half_edge_perm[h]] = half_edge_perm[self.involution[h]];
        }
        let legs = self
            .legs
            .iter()
            .map(|(&h, l)| (half_edge_perm[h], l.clone()))
            .collect();
        WeightedGraph {
            genera,
            anchors,
            involution,
            legs,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Incremental constructor for well-formed graphs.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    genera: Vec<u32>,
    anchors: Vec<usize>,
    involution: Vec<usize>,
    legs: BTreeMap<usize, String>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, genus: u32) -> usize {
        self.genera.push(genus);
        self.genera.len() - 1
    }

    /// Adds an edge from `u` to `v`, returning its half-edges (at `u`, at `v`).
    pub fn edge(&mut self, u: usize, v: usize) -> (usize, usize) {
        let h = self.anchors.len();
        self.anchors.push(u);
        self.anchors.push(v);
        self.involution.push(h + 1);
        self.involution.push(h);
        (h, h + 1)
    }

    pub fn leg(&mut self, v: usize, label: &str) -> usize {
        let h = self.anchors.len();
        self.anchors.push(v);
        self.involution.push(h);
        self.legs.insert(h, label.to_string());
        h
    }

    pub fn build(self) -> WeightedGraph {
        WeightedGraph::from_parts(self.genera, self.anchors, self.involution, self.legs)
    }
}

/// Checks every structural invariant except connectivity.
pub fn validate_structure(g: &WeightedGraph) -> ValidationReport {
    let mut report = ValidationReport::new();
    let nv = g.genera.len();
    let nh = g.anchors.len();
    for (v, &genus) in g.genera.iter().enumerate() {
        if genus > MAX_GENUS {
            report.push(
                IssueKind::GenusTooLarge,
                format!("genus of vertex {v} exceeds {MAX_GENUS}"),
            );
        }
    }
    for (h, &a) in g.anchors.iter().enumerate() {
        if a >= nv {
            report.push(
                IssueKind::AnchorOutOfRange,
                format!("half-edge {h} anchored at missing vertex {a}"),
            );
        }
    }
    if g.involution.len() != nh {
        report.push(
            IssueKind::InvolutionOutOfRange,
            format!(
                "involution has {} entries for {nh} half-edges",
                g.involution.len()
            ),
        );
        return report;
    }
    let mut involutive = true;
    for (h, &p) in g.involution.iter().enumerate() {
        if p >= nh {
            report.push(
                IssueKind::InvolutionOutOfRange,
                format!("involution sends half-edge {h} to missing half-edge {p}"),
            );
            involutive = false;
        } else if g.involution[p] != h {
            report.push(
                IssueKind::InvolutionNotSelfInverse,
                format!("involution not self-inverse at half-edge {h}"),
            );
            involutive = false;
        }
    }
    let mut seen = BTreeSet::new();
    for (&h, label) in &g.legs {
        if h >= nh {
            report.push(
                IssueKind::LegNotFixedPoint,
                format!("leg label {label:?} on missing half-edge {h}"),
            );
            continue;
        }
        if involutive && g.involution[h] != h {
            report.push(
                IssueKind::LegNotFixedPoint,
                format!("leg label {label:?} on half-edge {h}, which is not a fixed point"),
            );
        }
        if !seen.insert(label.as_str()) {
            report.push(
                IssueKind::DuplicateLegLabel,
                format!("leg label {label:?} used more than once"),
            );
        }
    }
    if involutive {
        for h in 0..nh {
            if g.involution[h] == h && !g.legs.contains_key(&h) {
                report.push(
                    IssueKind::FixedPointWithoutLabel,
                    format!("half-edge {h} is a fixed point of the involution but has no leg label"),
                );
            }
        }
    }
    report
}

/// Full well-formedness check for a (connected) weighted graph.
pub fn validate_graph(g: &WeightedGraph) -> ValidationReport {
    let mut report = validate_structure(g);
    if g.vertex_count() == 0 {
        report.push(IssueKind::NoVertices, "graph has no vertices");
    } else if !g.is_connected() {
        report.push(IssueKind::Disconnected, "disconnected");
    }
    report
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRepr {
    genus: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HalfEdgeRepr {
    vertex: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRepr {
    vertices: Vec<VertexRepr>,
    half_edges: Vec<HalfEdgeRepr>,
    involution: Vec<usize>,
    #[serde(default)]
    legs: BTreeMap<usize, String>,
}

impl From<WeightedGraph> for GraphRepr {
    fn from(g: WeightedGraph) -> Self {
        GraphRepr {
            vertices: g.genera.into_iter().map(|genus| VertexRepr { genus }).collect(),
            half_edges: g
                .anchors
                .into_iter()
                .map(|vertex| HalfEdgeRepr { vertex })
                .collect(),
            involution: g.involution,
            legs: g.legs,
        }
    }
}

impl TryFrom<GraphRepr> for WeightedGraph {
    type Error = String;

    fn try_from(r: GraphRepr) -> std::result::Result<Self, String> {
        if r.involution.len() != r.half_edges.len() {
            return Err(format!(
                "involution has {} entries for {} half-edges",
                r.involution.len(),
                r.half_edges.len()
            ));
        }
        Ok(WeightedGraph {
            genera: r.vertices.into_iter().map(|v| v.genus).collect(),
            anchors: r.half_edges.into_iter().map(|h| h.vertex).collect(),
            involution: r.involution,
            legs: r.legs,
        })
    }
}
