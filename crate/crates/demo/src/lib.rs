//! Browser bindings for the demo page in `www/`: a dynamic parentheses
//! tree with navigation queries, node edits and range-minimum lookups.

use rmm_core::oracle::gen_balanced;
use rmm_core::{DynamicRmm, OrdinalTree, Primitives};
use wasm_bindgen::prelude::*;

/// Largest tree the page will generate.
const MAX_NODES: usize = 4096;

#[wasm_bindgen]
pub struct Demo {
    rmm: DynamicRmm,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[wasm_bindgen]
impl Demo {
    /// Parses `(`/`)` text holding a single balanced tree.
    #[wasm_bindgen(constructor)]
    pub fn new(parens: &str) -> Result<Demo, String> {
        let rmm = DynamicRmm::from_parens(parens).map_err(err)?;
        if rmm.is_empty() || !rmm.is_balanced() {
            return Err("need a non-empty balanced sequence".into());
        }
        if rmm.fwd_search(0, 0).map_err(err)? != Some(rmm.len() - 1) {
            return Err("need a single root".into());
        }
        Ok(Demo { rmm })
    }

    /// A uniformly random tree.
    pub fn random(nodes: usize, seed: u64) -> Demo {
        let p = gen_balanced(nodes.clamp(1, MAX_NODES), seed);
        Demo {
            rmm: DynamicRmm::from_bits(&p),
        }
    }

    pub fn parens(&self) -> String {
        self.rmm.to_paren_string()
    }

    /// Excess after each position.
    pub fn excess_curve(&self) -> Vec<i32> {
        let mut e = 0;
        self.rmm
            .to_bits()
            .iter()
            .map(|b| {
                e += if b { 1 } else { -1 };
                e
            })
            .collect()
    }

    /// Relatives of the node opened at `v`, as a flat array of positions:
    /// `[open, close, parent, first_child, next_sibling, lmost_leaf, depth,
    /// subtree_size]`, with `-1` for a missing relative. Any position may
    /// be passed; a closing parenthesis selects its node.
    pub fn inspect(&self, pos: usize) -> Result<Vec<i32>, String> {
        let t = self.tree()?;
        let v = if self.rmm.get(pos).map_err(err)? {
            pos
        } else {
            t.find_open(pos).map_err(err)?
        };
        let opt = |x: Option<usize>| x.map_or(-1, |x| x as i32);
        Ok(vec![
            v as i32,
            t.find_close(v).map_err(err)? as i32,
            opt(t.parent(v).map_err(err)?),
            opt(t.first_child(v).map_err(err)?),
            opt(t.next_sibling(v).map_err(err)?),
            t.lmost_leaf(v).map_err(err)? as i32,
            t.depth(v).map_err(err)? as i32,
            t.subtree_size(v).map_err(err)? as i32,
        ])
    }

    /// Lowest common ancestor of the nodes at `u` and `v`.
    pub fn lca(&self, u: usize, v: usize) -> Result<usize, String> {
        let t = self.tree()?;
        let u = if self.rmm.get(u).map_err(err)? {
            u
        } else {
            t.find_open(u).map_err(err)?
        };
        let v = if self.rmm.get(v).map_err(err)? {
            v
        } else {
            t.find_open(v).map_err(err)?
        };
        Ok(t.lca(u, v).map_err(err)?.expect("single-rooted"))
    }

    /// Leftmost minimum of the excess curve over `[i, j]`, as
    /// `[position, value, how many times it occurs]`.
    pub fn range_min(&self, i: usize, j: usize) -> Result<Vec<i32>, String> {
        let (i, j) = (i.min(j), i.max(j));
        let (pos, val) = self.rmm.rmqi(i, j).map_err(err)?;
        let count = self.rmm.min_count(i, j).map_err(err)?;
        Ok(vec![pos as i32, val as i32, count as i32])
    }

    /// Adds a node whose children are the siblings spanning positions
    /// `i..j` (an empty span makes a leaf).
    pub fn insert_node(&mut self, i: usize, j: usize) -> Result<(), String> {
        if i == 0 || j >= self.rmm.len() {
            return Err("new nodes go strictly inside the root".into());
        }
        self.rmm.insert_pair(i, j).map_err(err)
    }

    /// Removes a node, promoting its children.
    pub fn delete_node(&mut self, pos: usize) -> Result<(), String> {
        let t = self.tree()?;
        let v = if self.rmm.get(pos).map_err(err)? {
            pos
        } else {
            t.find_open(pos).map_err(err)?
        };
        if v == 0 {
            return Err("the root stays".into());
        }
        self.rmm.delete_node(v).map_err(err)
    }
}

impl Demo {
    fn tree(&self) -> Result<OrdinalTree<&DynamicRmm>, String> {
        OrdinalTree::new(&self.rmm).map_err(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_tree() {
        let d = Demo::new("(()(()()))").unwrap();
        assert_eq!(d.excess_curve(), vec![1, 2, 1, 2, 3, 2, 3, 2, 1, 0]);
        assert_eq!(d.inspect(3).unwrap(), vec![3, 8, 0, 4, -1, 4, 2, 3]);
        // a closing parenthesis selects its node
        assert_eq!(d.inspect(5).unwrap()[0], 4);
        assert_eq!(d.lca(5, 7).unwrap(), 3);
        assert_eq!(d.range_min(8, 1).unwrap(), vec![2, 1, 2]);
    }

    #[test]
    fn edits() {
        let mut d = Demo::new("(()(()()))").unwrap();
        d.delete_node(8).unwrap();
        assert_eq!(d.parens(), "(()()())");
        d.insert_node(3, 7).unwrap();
        assert_eq!(d.parens(), "(()(()()))");
        assert!(d.delete_node(0).is_err());
        assert!(d.insert_node(0, 2).is_err());
        assert!(d.insert_node(1, 2).is_err());
        assert!(Demo::new("(()").is_err());
        assert!(Demo::new("()()").is_err());
    }

    #[test]
    fn random_trees_are_clamped() {
        assert_eq!(Demo::random(0, 1).parens(), "()");
        assert_eq!(Demo::random(1 << 20, 1).parens().len(), 2 * MAX_NODES);
    }
}
