//! Tree navigation over every backend, checked against the naive tree.

mod common;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rmm_core::oracle::{gen_balanced, NaiveTree};
use rmm_core::{DynamicRmm, OrdinalTree, Primitives, StaticRmm, StaticRmmConfig};

#[test]
fn dynamic_backend_matches_naive_exhaustively() {
    for seed in 0..150u64 {
        let n = 1 + (seed as usize * 37) % 90;
        let p = gen_balanced(n, seed);
        let o = NaiveTree::new(&p).unwrap();
        let t = OrdinalTree::new(DynamicRmm::from_bits_with(&p, 64).unwrap()).unwrap();
        check_tree_exhaustive(&t, &o);
    }
}

#[test]
fn borrowed_backends_match_naive_on_larger_trees() {
    let mut rng = StdRng::seed_from_u64(11);
    for seed in 0..4u64 {
        let p = gen_balanced(3000, 500 + seed);
        let o = NaiveTree::new(&p).unwrap();
        let s = StaticRmm::build(p.clone(), StaticRmmConfig::new(128, 8).unwrap()).unwrap();
        let d = DynamicRmm::from_bits_with(&p, 256).unwrap();
        check_tree_sampled(&OrdinalTree::new(&s).unwrap(), &o, &mut rng, 300);
        check_tree_sampled(&OrdinalTree::new(&d).unwrap(), &o, &mut rng, 300);
    }
}

#[test]
fn edited_dynamic_tree_navigates_like_a_rebuilt_one() {
    let mut d = DynamicRmm::from_bits_with(&gen_balanced(400, 3), 128).unwrap();
    for k in 0..200usize {
        let len = d.len();
        // wrap the child subtree that starts at the k-th opening position
        let opens: Vec<usize> = (1..len).filter(|&i| d.bit_at(i).unwrap()).collect();
        let v = opens[(k * 31) % opens.len()];
        let c = OrdinalTree::new(&d).unwrap().find_close(v).unwrap();
        d.insert_pair(v, c + 1).unwrap();
        if k % 3 == 0 {
            let u = (2..d.len()).find(|&i| d.bit_at(i).unwrap() && i % 7 == k % 7);
            if let Some(u) = u {
                d.delete_node(u).unwrap();
            }
        }
    }
    d.audit().unwrap();
    let o = NaiveTree::new(&d.to_bits()).unwrap();
    let mut rng = StdRng::seed_from_u64(12);
    check_tree_sampled(&OrdinalTree::new(&d).unwrap(), &o, &mut rng, 500);
}

fn tree(nodes: usize, seed: u64) -> OrdinalTree<StaticRmm> {
    let cfg = StaticRmmConfig::new(64, 2).unwrap();
    OrdinalTree::new(StaticRmm::build(gen_balanced(nodes, seed), cfg).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lca_laws(nodes in 1usize..300, seed in any::<u64>(), a in any::<usize>(), b in any::<usize>()) {
        let t = tree(nodes, seed);
        let u = t.pre_select(1 + a % nodes).unwrap();
        let v = t.pre_select(1 + b % nodes).unwrap();
        let w = t.lca(u, v).unwrap().unwrap();
        prop_assert_eq!(t.lca(v, u).unwrap(), Some(w));
        prop_assert!(t.is_ancestor(w, u).unwrap() && t.is_ancestor(w, v).unwrap());
        // no child of w contains both
        for q in 1..=t.degree(w).unwrap() {
            let c = t.child(w, q).unwrap();
            prop_assert!(!(t.is_ancestor(c, u).unwrap() && t.is_ancestor(c, v).unwrap()));
        }
        if t.is_ancestor(u, v).unwrap() {
            prop_assert_eq!(w, u);
        }
    }

    #[test]
    fn inverse_laws(nodes in 1usize..300, seed in any::<u64>()) {
        let t = tree(nodes, seed);
        for q in 1..=nodes {
            let v = t.pre_select(q).unwrap();
            prop_assert_eq!(t.pre_rank(v).unwrap(), q);
            prop_assert_eq!(t.find_open(t.find_close(v).unwrap()).unwrap(), v);
            prop_assert_eq!(t.post_select(t.post_rank(v).unwrap()).unwrap(), v);
            let d = t.depth(v).unwrap();
            prop_assert_eq!(t.level_ancestor(v, d - 1).unwrap(), Some(0));
            if let Some(r) = t.child_rank(v).unwrap() {
                let par = t.parent(v).unwrap().unwrap();
                prop_assert_eq!(t.child(par, r).unwrap(), v);
            }
            if t.is_leaf(v).unwrap() {
                prop_assert_eq!(t.leaf_select(t.leaf_rank(v).unwrap()).unwrap(), v);
                prop_assert_eq!(t.in_rank(v).unwrap(), None);
            }
            if let Some(r) = t.in_rank(v).unwrap() {
                prop_assert_eq!(t.in_select(r).unwrap(), v);
            }
            let size = t.subtree_size(v).unwrap();
            prop_assert_eq!(t.find_close(v).unwrap(), v + 2 * size - 1);
        }
    }
}
