#![allow(dead_code)]

pub mod oracle;

use prymgraph::{GraphBuilder, WeightedGraph};

/// Connected semistable bases with at most `max_v` vertices, `max_e` edges,
/// ambient genus `max_g` and `max_legs` legs. Each entry is `(graph,
/// has_ram_legs)`; legs are `x1..` or `ram:p1..` and are spread in order.
pub fn small_bases(max_v: usize, max_e: usize, max_g: u32, max_legs: usize) -> Vec<(WeightedGraph, bool)> {
    let mut out = Vec::new();
    for nv in 1..=max_v {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
        let mut edge_sets = Vec::new();
        multisets(&pairs, max_e, 0, &mut Vec::new(), &mut edge_sets);
        for edges in edge_sets {
            if !connected(nv, &edges) {
                continue;
            }
            let loops = edges.len() as i64 - nv as i64 + 1;
            if loops > max_g as i64 {
                continue;
            }
            let budget = max_g - loops as u32;
            for genera in tuples(nv, budget) {
                for legs in 0..=max_legs {
                    for counts in compositions(legs, nv) {
                        for ram in 0..=legs {
                            let g = build(&genera, &edges, &counts, ram);
                            let semistable = (0..nv).all(|v| {
                                2 * genera[v] as i64 - 2 + g.half_edges_at(v).len() as i64 >= 0
                            });
                            if semistable {
                                out.push((g, ram > 0));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn build(genera: &[u32], edges: &[(usize, usize)], counts: &[usize], ram: usize) -> WeightedGraph {
    let mut b = GraphBuilder::new();
    for &g in genera {
        b.vertex(g);
    }
    for &(u, v) in edges {
        b.edge(u, v);
    }
    let mut k = 0;
    for (v, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            let label = if k < ram {
                format!("ram:p{}", k + 1)
            } else {
                format!("x{}", k + 1 - ram)
            };
            b.leg(v, &label);
            k += 1;
        }
    }
    b.build()
}

fn multisets<T: Clone>(items: &[T], max: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
    out.push(cur.clone());
    if cur.len() == max {
        return;
    }
    for i in start..items.len() {
        cur.push(items[i].clone());
        multisets(items, max, i, cur, out);
        cur.pop();
    }
}

fn connected(nv: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Tuples of `n` nonnegative integers with sum at most `budget`.
fn tuples(n: usize, budget: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=budget {
        for mut rest in tuples(n - 1, budget - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Ordered ways to write `total` as `parts` nonnegative summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
