//! Line-oriented query scripts: one operation and its integer arguments per
//! line. Blank lines and lines starting with `#` are skipped.

use rmm_core::{OrdinalTree, Primitives, Result};

/// How a benchmark draws an argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arg {
    /// Any position.
    Pos,
    /// A position at or after the previous argument.
    PosAfter,
    /// Position of an opening parenthesis.
    Node,
    /// Position of a closing parenthesis.
    Close,
    /// A small signed excess difference.
    Delta,
    /// A 1-based rank into the given population.
    Rank(Population),
    /// A small depth or child index.
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Population {
    Ones,
    Zeros,
    Leaves,
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Get,
    Excess,
    Sum,
    FwdSearch,
    BwdSearch,
    Rmqi,
    RmqiMax,
    MinCount,
    MinSelect,
    Rank1,
    Rank0,
    Select1,
    Select0,
    RankP1,
    SelectP1,
    RankP2,
    SelectP2,
    FindClose,
    FindOpen,
    Enclose,
    Depth,
    Parent,
    SubtreeSize,
    IsLeaf,
    IsAncestor,
    FirstChild,
    LastChild,
    NextSibling,
    PrevSibling,
    PreRank,
    PreSelect,
    PostRank,
    PostSelect,
    LevelAncestor,
    LevelNext,
    LevelPrev,
    LevelLmost,
    LevelRmost,
    Lca,
    DeepestNode,
    Height,
    Degree,
    Child,
    ChildRank,
    LeafRank,
    LeafSelect,
    LmostLeaf,
    RmostLeaf,
    InRank,
    InSelect,
}

use Arg::*;
use Population::*;

const OPS: &[(Op, &str, &[Arg])] = &[
    (Op::Get, "get", &[Pos]),
    (Op::Excess, "excess", &[Pos]),
    (Op::Sum, "sum", &[Pos, PosAfter]),
    (Op::FwdSearch, "fwd_search", &[Pos, Delta]),
    (Op::BwdSearch, "bwd_search", &[Pos, Delta]),
    (Op::Rmqi, "rmqi", &[Pos, PosAfter]),
    (Op::RmqiMax, "RMQi", &[Pos, PosAfter]),
    (Op::MinCount, "min_count", &[Pos, PosAfter]),
    (Op::MinSelect, "min_select", &[Pos, PosAfter, Small]),
    (Op::Rank1, "rank1", &[Pos]),
    (Op::Rank0, "rank0", &[Pos]),
    (Op::Select1, "select1", &[Rank(Ones)]),
    (Op::Select0, "select0", &[Rank(Zeros)]),
    (Op::RankP1, "rank_p1", &[Pos]),
    (Op::SelectP1, "select_p1", &[Rank(Leaves)]),
    (Op::RankP2, "rank_p2", &[Pos]),
    (Op::SelectP2, "select_p2", &[Rank(Inner)]),
    (Op::FindClose, "find_close", &[Node]),
    (Op::FindOpen, "find_open", &[Close]),
    (Op::Enclose, "enclose", &[Node]),
    (Op::Depth, "depth", &[Node]),
    (Op::Parent, "parent", &[Node]),
    (Op::SubtreeSize, "subtree_size", &[Node]),
    (Op::IsLeaf, "is_leaf", &[Node]),
    (Op::IsAncestor, "is_ancestor", &[Node, Node]),
    (Op::FirstChild, "first_child", &[Node]),
    (Op::LastChild, "last_child", &[Node]),
    (Op::NextSibling, "next_sibling", &[Node]),
    (Op::PrevSibling, "prev_sibling", &[Node]),
    (Op::PreRank, "pre_rank", &[Node]),
    (Op::PreSelect, "pre_select", &[Rank(Ones)]),
    (Op::PostRank, "post_rank", &[Node]),
    (Op::PostSelect, "post_select", &[Rank(Ones)]),
    (Op::LevelAncestor, "level_ancestor", &[Node, Small]),
    (Op::LevelNext, "level_next", &[Node]),
    (Op::LevelPrev, "level_prev", &[Node]),
    (Op::LevelLmost, "level_lmost", &[Small]),
    (Op::LevelRmost, "level_rmost", &[Small]),
    (Op::Lca, "lca", &[Node, Node]),
    (Op::DeepestNode, "deepest_node", &[Node]),
    (Op::Height, "height", &[Node]),
    (Op::Degree, "degree", &[Node]),
    (Op::Child, "child", &[Node, Small]),
    (Op::ChildRank, "child_rank", &[Node]),
    (Op::LeafRank, "leaf_rank", &[Node]),
    (Op::LeafSelect, "leaf_select", &[Rank(Leaves)]),
    (Op::LmostLeaf, "lmost_leaf", &[Node]),
    (Op::RmostLeaf, "rmost_leaf", &[Node]),
    (Op::InRank, "in_rank", &[Node]),
    (Op::InSelect, "in_select", &[Rank(Inner)]),
];

impl Op {
    /// Looks up an operation. Underscores and case are ignored, so
    /// `findclose` and `find_close` name the same operation; `RMQi` is the
    /// one case-sensitive name (range maximum), also spelled `rmqi_max`.
    pub fn parse(name: &str) -> Option<Op> {
        if name == "RMQi" {
            return Some(Op::RmqiMax);
        }
        let key = squash(name);
        if key == "rmqimax" {
            return Some(Op::RmqiMax);
        }
        OPS.iter()
            .find(|(op, n, _)| *op != Op::RmqiMax && squash(n) == key)
            .map(|e| e.0)
    }

    fn entry(self) -> &'static (Op, &'static str, &'static [Arg]) {
        OPS.iter()
            .find(|e| e.0 == self)
            .expect("every op is listed")
    }

    pub fn name(self) -> &'static str {
        self.entry().1
    }

    pub fn args(self) -> &'static [Arg] {
        self.entry().2
    }

    pub fn all() -> impl Iterator<Item = Op> {
        OPS.iter().map(|e| e.0)
    }
}

fn squash(name: &str) -> String {
    name.chars()
        .filter(|&c| c != '_' && c != '-')
        .flat_map(char::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub op: Op,
    pub args: Vec<i64>,
}

/// Parses a whole script; the first bad line rejects it.
pub fn parse(text: &str) -> std::result::Result<Vec<Query>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let name = words.next().expect("non-empty line");
        let op =
            Op::parse(name).ok_or_else(|| format!("line {}: unknown operation {name:?}", n + 1))?;
        let args = words
            .map(|w| {
                w.parse::<i64>()
                    .map_err(|_| format!("line {}: bad argument {w:?}", n + 1))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if args.len() != op.args().len() {
            return Err(format!(
                "line {}: {} takes {} argument(s), got {}",
                n + 1,
                op.name(),
                op.args().len(),
                args.len()
            ));
        }
        for (a, kind) in args.iter().zip(op.args()) {
            if *a < 0 && *kind != Delta {
                return Err(format!("line {}: negative argument {a}", n + 1));
            }
        }
        out.push(Query { op, args });
    }
    Ok(out)
}

/// A query answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Nat(usize),
    Maybe(Option<usize>),
    Pair(usize, i64),
    Flag(bool),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Nat(v) | Value::Maybe(Some(v)) => write!(f, "{v}"),
            Value::Maybe(None) => f.write_str("none"),
            Value::Pair(i, v) => write!(f, "{i} {v}"),
            Value::Flag(b) => write!(f, "{b}"),
        }
    }
}

/// Evaluates one query. Tree operations need `tree`, which exists only for
/// balanced sequences.
pub fn eval<P: Primitives>(p: &P, tree: Option<&OrdinalTree<&P>>, q: &Query) -> Result<Value> {
    let a = |k: usize| q.args[k] as usize;
    let d = |k: usize| q.args[k];
    let t = || {
        tree.ok_or_else(|| {
            rmm_core::Error::Unbalanced("tree operations need a balanced sequence".into())
        })
    };
    use Value::*;
    Ok(match q.op {
        Op::Get => Int(p.get(a(0))? as i64),
        Op::Excess => Int(p.excess(a(0))?),
        Op::Sum => Int(p.sum(a(0), a(1))?),
        Op::FwdSearch => Maybe(p.fwd_search(a(0), d(1))?),
        Op::BwdSearch => Maybe(p.bwd_search(a(0), d(1))?),
        Op::Rmqi => {
            let (i, v) = p.rmqi(a(0), a(1))?;
            Pair(i, v)
        }
        Op::RmqiMax => {
            let (i, v) = p.rmqi_max(a(0), a(1))?;
            Pair(i, v)
        }
        Op::MinCount => Nat(p.min_count(a(0), a(1))?),
        Op::MinSelect => Nat(p.min_select(a(0), a(1), a(2))?),
        Op::Rank1 => Nat(p.rank1(a(0))?),
        Op::Rank0 => Nat(p.rank0(a(0))?),
        Op::Select1 => Nat(p.select1(a(0))?),
        Op::Select0 => Nat(p.select0(a(0))?),
        Op::RankP1 => Nat(p.rank_p1(a(0))?),
        Op::SelectP1 => Nat(p.select_p1(a(0))?),
        Op::RankP2 => Nat(p.rank_p2(a(0))?),
        Op::SelectP2 => Nat(p.select_p2(a(0))?),
        Op::FindClose => Nat(t()?.find_close(a(0))?),
        Op::FindOpen => Nat(t()?.find_open(a(0))?),
        Op::Enclose => Nat(t()?.enclose(a(0))?),
        Op::Depth => Nat(t()?.depth(a(0))?),
        // the root's missing parent is reported as an error line
        Op::Parent => Nat(t()?.parent(a(0))?.ok_or(rmm_core::Error::NoParent)?),
        Op::SubtreeSize => Nat(t()?.subtree_size(a(0))?),
        Op::IsLeaf => Flag(t()?.is_leaf(a(0))?),
        Op::IsAncestor => Flag(t()?.is_ancestor(a(0), a(1))?),
        Op::FirstChild => Maybe(t()?.first_child(a(0))?),
        Op::LastChild => Maybe(t()?.last_child(a(0))?),
        Op::NextSibling => Maybe(t()?.next_sibling(a(0))?),
        Op::PrevSibling => Maybe(t()?.prev_sibling(a(0))?),
        Op::PreRank => Nat(t()?.pre_rank(a(0))?),
        Op::PreSelect => Nat(t()?.pre_select(a(0))?),
        Op::PostRank => Nat(t()?.post_rank(a(0))?),
        Op::PostSelect => Nat(t()?.post_select(a(0))?),
        Op::LevelAncestor => Maybe(t()?.level_ancestor(a(0), a(1))?),
        Op::LevelNext => Maybe(t()?.level_next(a(0))?),
        Op::LevelPrev => Maybe(t()?.level_prev(a(0))?),
        Op::LevelLmost => Maybe(t()?.level_lmost(a(0))?),
        Op::LevelRmost => Maybe(t()?.level_rmost(a(0))?),
        Op::Lca => Maybe(t()?.lca(a(0), a(1))?),
        Op::DeepestNode => Nat(t()?.deepest_node(a(0))?),
        Op::Height => Nat(t()?.height(a(0))?),
        Op::Degree => Nat(t()?.degree(a(0))?),
        Op::Child => Nat(t()?.child(a(0), a(1))?),
        Op::ChildRank => Maybe(t()?.child_rank(a(0))?),
        Op::LeafRank => Nat(t()?.leaf_rank(a(0))?),
        Op::LeafSelect => Nat(t()?.leaf_select(a(0))?),
        Op::LmostLeaf => Nat(t()?.lmost_leaf(a(0))?),
        Op::RmostLeaf => Nat(t()?.rmost_leaf(a(0))?),
        Op::InRank => Maybe(t()?.in_rank(a(0))?),
        Op::InSelect => Nat(t()?.in_select(a(0))?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rmm_core::StaticRmm;

    #[test]
    fn names_are_forgiving_except_for_rmqi() {
        assert_eq!(Op::parse("findclose"), Some(Op::FindClose));
        assert_eq!(Op::parse("find_close"), Some(Op::FindClose));
        assert_eq!(Op::parse("isancestor"), Some(Op::IsAncestor));
        assert_eq!(Op::parse("rmqi"), Some(Op::Rmqi));
        assert_eq!(Op::parse("RMQi"), Some(Op::RmqiMax));
        assert_eq!(Op::parse("rmqi_max"), Some(Op::RmqiMax));
        assert_eq!(Op::parse("frobnicate"), None);
        for op in Op::all() {
            assert_eq!(Op::parse(op.name()), Some(op));
        }
    }

    #[test]
    fn parse_rejects_bad_lines() {
        assert!(parse("findclose 3\n# note\n\nlca 1 4\n").is_ok());
        assert!(parse("findclose 3\nnosuchop 1")
            .unwrap_err()
            .starts_with("line 2"));
        assert!(parse("findclose").is_err());
        assert!(parse("findclose x").is_err());
        assert!(parse("findclose -1").is_err());
        assert_eq!(parse("fwd_search 3 -1").unwrap()[0].args, vec![3, -1]);
    }

    #[test]
    fn evaluates_reference_queries() {
        let s = StaticRmm::from_parens("(()(()()))").unwrap();
        let t = OrdinalTree::new(&s).unwrap();
        let run = |line: &str| match eval(&s, Some(&t), &parse(line).unwrap()[0]) {
            Ok(v) => v.to_string(),
            Err(e) => format!("ERR {e}"),
        };
        assert_eq!(run("findclose 3"), "8");
        assert_eq!(run("parent 0"), "ERR no parent");
        assert_eq!(run("parent 4"), "3");
        assert_eq!(run("enclose 0"), "ERR no parent");
        assert_eq!(run("rmqi 1 8"), "2 1");
        assert_eq!(run("RMQi 0 9"), "4 3");
        assert_eq!(run("level_next 6"), "none");
        assert_eq!(run("lca 4 6"), "3");
    }
}
