//! Shared comparison helpers for the integration tests.

#![allow(dead_code)]

use std::mem::{discriminant, Discriminant};

use rand::rngs::StdRng;
use rand::Rng;
use rmm_core::oracle::{NaivePrimitives, NaiveTree};
use rmm_core::{Error, OrdinalTree, Primitives, Result};

/// Result with the error reduced to its variant, so that messages may differ.
pub type Kinded<T> = std::result::Result<T, Discriminant<Error>>;

pub fn kind<T>(r: Result<T>) -> Kinded<T> {
    r.map_err(|e| discriminant(&e))
}

macro_rules! same {
    ($ctx:expr, $name:literal, $got:expr, $want:expr) => {{
        let (g, w) = (kind($got), kind($want));
        assert_eq!(g, w, "{} {}", $name, $ctx);
    }};
}

/// Every tree operation at node (or position) `v`.
pub fn check_node<P: Primitives>(
    t: &OrdinalTree<P>,
    o: &NaiveTree,
    v: usize,
    max_depth: usize,
) -> usize {
    let ctx = || format!("v={v}");
    same!(ctx(), "find_close", t.find_close(v), o.find_close(v));
    same!(ctx(), "find_open", t.find_open(v), o.find_open(v));
    same!(ctx(), "enclose", t.enclose(v), o.enclose(v));
    same!(ctx(), "parent", t.parent(v), o.parent(v));
    same!(ctx(), "depth", t.depth(v), o.depth(v));
    same!(ctx(), "subtree_size", t.subtree_size(v), o.subtree_size(v));
    same!(ctx(), "is_leaf", t.is_leaf(v), o.is_leaf(v));
    same!(ctx(), "first_child", t.first_child(v), o.first_child(v));
    same!(ctx(), "last_child", t.last_child(v), o.last_child(v));
    same!(ctx(), "next_sibling", t.next_sibling(v), o.next_sibling(v));
    same!(ctx(), "prev_sibling", t.prev_sibling(v), o.prev_sibling(v));
    same!(ctx(), "pre_rank", t.pre_rank(v), o.pre_rank(v));
    same!(ctx(), "post_rank", t.post_rank(v), o.post_rank(v));
    same!(ctx(), "level_next", t.level_next(v), o.level_next(v));
    same!(ctx(), "level_prev", t.level_prev(v), o.level_prev(v));
    same!(ctx(), "deepest_node", t.deepest_node(v), o.deepest_node(v));
    same!(ctx(), "height", t.height(v), o.height(v));
    same!(ctx(), "degree", t.degree(v), o.degree(v));
    same!(ctx(), "child_rank", t.child_rank(v), o.child_rank(v));
    same!(ctx(), "leaf_rank", t.leaf_rank(v), o.leaf_rank(v));
    same!(ctx(), "lmost_leaf", t.lmost_leaf(v), o.lmost_leaf(v));
    same!(ctx(), "rmost_leaf", t.rmost_leaf(v), o.rmost_leaf(v));
    same!(ctx(), "in_rank", t.in_rank(v), o.in_rank(v));
    let mut n = 23;
    for d in 0..=max_depth + 1 {
        same!(
            format!("{} d={d}", ctx()),
            "level_ancestor",
            t.level_ancestor(v, d),
            o.level_ancestor(v, d)
        );
        n += 1;
    }
    let deg = o.degree(v).unwrap_or(0);
    for q in 0..=deg + 1 {
        same!(
            format!("{} q={q}", ctx()),
            "child",
            t.child(v, q),
            o.child(v, q)
        );
        n += 1;
    }
    n
}

/// Operations taking a rank or depth rather than a node.
pub fn check_rank<P: Primitives>(t: &OrdinalTree<P>, o: &NaiveTree, q: usize) -> usize {
    let ctx = || format!("q={q}");
    same!(ctx(), "pre_select", t.pre_select(q), o.pre_select(q));
    same!(ctx(), "post_select", t.post_select(q), o.post_select(q));
    same!(ctx(), "leaf_select", t.leaf_select(q), o.leaf_select(q));
    same!(ctx(), "in_select", t.in_select(q), o.in_select(q));
    same!(ctx(), "level_lmost", t.level_lmost(q), Ok(o.level_lmost(q)));
    same!(ctx(), "level_rmost", t.level_rmost(q), Ok(o.level_rmost(q)));
    6
}

pub fn check_pair<P: Primitives>(t: &OrdinalTree<P>, o: &NaiveTree, u: usize, v: usize) -> usize {
    let ctx = || format!("u={u} v={v}");
    same!(ctx(), "lca", t.lca(u, v), o.lca(u, v));
    same!(
        ctx(),
        "is_ancestor",
        t.is_ancestor(u, v),
        o.is_ancestor(u, v)
    );
    2
}

pub fn max_depth(o: &NaiveTree) -> usize {
    o.nodes().map(|v| o.depth(v).unwrap()).max().unwrap_or(0)
}

/// Exhaustive sweep: every position, every rank and depth, every node pair.
pub fn check_tree_exhaustive<P: Primitives>(t: &OrdinalTree<P>, o: &NaiveTree) -> usize {
    let len = 2 * o.node_count();
    let md = max_depth(o);
    let mut n = 0;
    for v in 0..=len {
        n += check_node(t, o, v, md);
    }
    for q in 0..=len + 1 {
        n += check_rank(t, o, q);
    }
    let nodes: Vec<usize> = o.nodes().collect();
    for &u in &nodes {
        for &v in &nodes {
            n += check_pair(t, o, u, v);
        }
    }
    n
}

/// `samples` random argument tuples per operation.
pub fn check_tree_sampled<P: Primitives>(
    t: &OrdinalTree<P>,
    o: &NaiveTree,
    rng: &mut StdRng,
    samples: usize,
) -> usize {
    let len = 2 * o.node_count();
    let nodes: Vec<usize> = o.nodes().collect();
    let md = max_depth(o);
    let mut n = 0;
    for k in 0..samples {
        // mostly valid nodes, occasionally an arbitrary position
        let v = if k % 10 == 0 {
            rng.random_range(0..=len)
        } else {
            nodes[rng.random_range(0..nodes.len())]
        };
        let ctx = || format!("v={v}");
        same!(ctx(), "find_close", t.find_close(v), o.find_close(v));
        same!(ctx(), "find_open", t.find_open(v), o.find_open(v));
        same!(ctx(), "enclose", t.enclose(v), o.enclose(v));
        same!(ctx(), "parent", t.parent(v), o.parent(v));
        same!(ctx(), "depth", t.depth(v), o.depth(v));
        same!(ctx(), "subtree_size", t.subtree_size(v), o.subtree_size(v));
        same!(ctx(), "is_leaf", t.is_leaf(v), o.is_leaf(v));
        same!(ctx(), "first_child", t.first_child(v), o.first_child(v));
        same!(ctx(), "last_child", t.last_child(v), o.last_child(v));
        same!(ctx(), "next_sibling", t.next_sibling(v), o.next_sibling(v));
        same!(ctx(), "prev_sibling", t.prev_sibling(v), o.prev_sibling(v));
        same!(ctx(), "pre_rank", t.pre_rank(v), o.pre_rank(v));
        same!(ctx(), "post_rank", t.post_rank(v), o.post_rank(v));
        same!(ctx(), "level_next", t.level_next(v), o.level_next(v));
        same!(ctx(), "level_prev", t.level_prev(v), o.level_prev(v));
        same!(ctx(), "deepest_node", t.deepest_node(v), o.deepest_node(v));
        same!(ctx(), "height", t.height(v), o.height(v));
        same!(ctx(), "degree", t.degree(v), o.degree(v));
        same!(ctx(), "child_rank", t.child_rank(v), o.child_rank(v));
        same!(ctx(), "leaf_rank", t.leaf_rank(v), o.leaf_rank(v));
        same!(ctx(), "lmost_leaf", t.lmost_leaf(v), o.lmost_leaf(v));
        same!(ctx(), "rmost_leaf", t.rmost_leaf(v), o.rmost_leaf(v));
        same!(ctx(), "in_rank", t.in_rank(v), o.in_rank(v));
        let d = rng.random_range(0..=md + 1);
        same!(
            format!("{} d={d}", ctx()),
            "level_ancestor",
            t.level_ancestor(v, d),
            o.level_ancestor(v, d)
        );
        let q = rng.random_range(0..=o.degree(v).unwrap_or(0) + 1);
        same!(
            format!("{} q={q}", ctx()),
            "child",
            t.child(v, q),
            o.child(v, q)
        );
        let u = nodes[rng.random_range(0..nodes.len())];
        n += 25 + check_pair(t, o, u, v);
        let q = rng.random_range(0..=len / 2 + 1);
        n += check_rank(t, o, q);
        n += check_rank(t, o, rng.random_range(0..=md + 1));
    }
    n
}

/// Every primitive at every argument combination (sequence length `len`).
pub fn check_primitives_exhaustive<P: Primitives>(p: &P, o: &NaivePrimitives) -> usize {
    let len = o.len() as i64;
    let mut n = 0;
    for i in 0..=o.len() {
        let ctx = || format!("i={i}");
        same!(ctx(), "excess", p.excess(i), o.excess(i));
        same!(ctx(), "rank1", p.rank1(i), o.rank1(i));
        same!(ctx(), "rank0", p.rank0(i), o.rank0(i));
        same!(ctx(), "rank_p1", p.rank_p1(i), o.rank_p1(i));
        same!(ctx(), "rank_p2", p.rank_p2(i), o.rank_p2(i));
        same!(ctx(), "select1", p.select1(i), o.select1(i));
        same!(ctx(), "select0", p.select0(i), o.select0(i));
        same!(ctx(), "select_p1", p.select_p1(i), o.select_p1(i));
        same!(ctx(), "select_p2", p.select_p2(i), o.select_p2(i));
        n += 9;
        for d in -len - 1..=len + 1 {
            let ctx = || format!("i={i} d={d}");
            same!(ctx(), "fwd_search", p.fwd_search(i, d), o.fwd_search(i, d));
            same!(ctx(), "bwd_search", p.bwd_search(i, d), o.bwd_search(i, d));
            n += 2;
        }
        for j in 0..=o.len() {
            n += check_range(p, o, i, j);
        }
    }
    n
}

pub fn check_range<P: Primitives>(p: &P, o: &NaivePrimitives, i: usize, j: usize) -> usize {
    let ctx = || format!("i={i} j={j}");
    same!(ctx(), "sum", p.sum(i, j), o.sum(i, j));
    same!(ctx(), "rmqi", p.rmqi(i, j), o.rmqi(i, j));
    same!(ctx(), "rmqi_max", p.rmqi_max(i, j), o.rmqi_max(i, j));
    same!(ctx(), "min_count", p.min_count(i, j), o.min_count(i, j));
    let c = o.min_count(i, j).unwrap_or(0);
    for q in 0..=c + 1 {
        same!(
            format!("{} q={q}", ctx()),
            "min_select",
            p.min_select(i, j, q),
            o.min_select(i, j, q)
        );
    }
    6 + c
}

/// Random argument tuples for every primitive.
pub fn check_primitives_sampled<P: Primitives>(
    p: &P,
    o: &NaivePrimitives,
    rng: &mut StdRng,
    samples: usize,
) -> usize {
    let len = o.len();
    let mut n = 0;
    for _ in 0..samples {
        let i = rng.random_range(0..len);
        let ctx = || format!("i={i}");
        same!(ctx(), "excess", p.excess(i), o.excess(i));
        same!(ctx(), "rank1", p.rank1(i), o.rank1(i));
        same!(ctx(), "rank0", p.rank0(i), o.rank0(i));
        same!(ctx(), "rank_p1", p.rank_p1(i), o.rank_p1(i));
        same!(ctx(), "rank_p2", p.rank_p2(i), o.rank_p2(i));
        let q = rng.random_range(0..=len / 2 + 1);
        same!(ctx(), "select1", p.select1(q), o.select1(q));
        same!(ctx(), "select0", p.select0(q), o.select0(q));
        same!(ctx(), "select_p1", p.select_p1(q), o.select_p1(q));
        same!(ctx(), "select_p2", p.select_p2(q), o.select_p2(q));
        // small distances are the interesting ones for navigation
        let d = if rng.random_bool(0.8) {
            rng.random_range(-4..=4)
        } else {
            rng.random_range(-64..=64)
        };
        same!(
            format!("{} d={d}", ctx()),
            "fwd_search",
            p.fwd_search(i, d),
            o.fwd_search(i, d)
        );
        same!(
            format!("{} d={d}", ctx()),
            "bwd_search",
            p.bwd_search(i, d),
            o.bwd_search(i, d)
        );
        let j = if rng.random_bool(0.5) {
            rng.random_range(i..len)
        } else {
            rng.random_range(i..len.min(i + 300))
        };
        n += 11 + check_range(p, o, i, j);
    }
    n
}
