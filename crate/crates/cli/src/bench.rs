//! Latency benchmark with CSV output.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rmm_core::{DynamicRmm, OrdinalTree, ParenBitVector, Primitives, StaticRmm, StaticRmmConfig};

use crate::script::{eval, Arg, Op, Population, Query};

pub const HEADER: &str = "op,n,samples,p50_ns,p99_ns";

pub struct Options {
    pub ops: Vec<Op>,
    pub samples: usize,
    pub dynamic: bool,
    pub seed: u64,
}

/// Latencies of one operation, in nanoseconds.
#[derive(Default)]
struct Timings(Vec<u64>);

impl Timings {
    fn row(&mut self, name: &str, n: usize) -> String {
        self.0.sort_unstable();
        let pct = |p: f64| {
            if self.0.is_empty() {
                0
            } else {
                self.0[((self.0.len() - 1) as f64 * p).round() as usize]
            }
        };
        format!("{name},{n},{},{},{}", self.0.len(), pct(0.5), pct(0.99))
    }
}

/// Draws arguments for `op` over the current sequence.
fn draw<P: Primitives>(p: &P, op: Op, rng: &mut StdRng) -> Query {
    let len = p.len();
    let ones = p.rank1(len - 1).unwrap();
    let mut args: Vec<i64> = Vec::with_capacity(3);
    for kind in op.args() {
        let v = match *kind {
            Arg::Pos => rng.random_range(0..len) as i64,
            Arg::PosAfter => rng.random_range(*args.last().unwrap() as usize..len) as i64,
            Arg::Node if ones > 0 => p.select1(rng.random_range(1..=ones)).unwrap() as i64,
            Arg::Close if ones < len => p.select0(rng.random_range(1..=len - ones)).unwrap() as i64,
            Arg::Node | Arg::Close => 0,
            Arg::Delta => rng.random_range(-2..=1),
            Arg::Small => rng.random_range(1..=4),
            Arg::Rank(pop) => {
                let count = match pop {
                    Population::Ones => ones,
                    Population::Zeros => len - ones,
                    Population::Leaves => p.rank_p1(len - 1).unwrap(),
                    Population::Inner => p.rank_p2(len - 1).unwrap(),
                };
                rng.random_range(1..=count.max(1)) as i64
            }
        };
        args.push(v);
    }
    Query { op, args }
}

fn time_query<P: Primitives>(p: &P, tree: Option<&OrdinalTree<&P>>, q: &Query) -> u64 {
    let t = Instant::now();
    let r = eval(p, tree, q);
    let ns = t.elapsed().as_nanos() as u64;
    std::hint::black_box(r.ok());
    ns
}

fn run_static(
    bits: ParenBitVector,
    config: StaticRmmConfig,
    o: &Options,
) -> rmm_core::Result<Vec<String>> {
    let s = StaticRmm::build(bits, config)?;
    let n = s.bits().count_ones();
    let tree = OrdinalTree::new(&s).ok();
    let mut rng = StdRng::seed_from_u64(o.seed);
    let mut rows = Vec::new();
    for &op in &o.ops {
        let queries: Vec<Query> = (0..o.samples).map(|_| draw(&s, op, &mut rng)).collect();
        // one untimed pass to warm caches
        for q in &queries {
            std::hint::black_box(eval(&s, tree.as_ref(), q).ok());
        }
        let mut t = Timings(
            queries
                .iter()
                .map(|q| time_query(&s, tree.as_ref(), q))
                .collect(),
        );
        rows.push(t.row(op.name(), n));
    }
    Ok(rows)
}

/// Alternates node insertions and deletions with the requested queries, so
/// the tree size stays roughly constant.
fn run_dynamic(bits: ParenBitVector, o: &Options) -> rmm_core::Result<Vec<String>> {
    let mut d = DynamicRmm::from_bits(&bits);
    let mut rng = StdRng::seed_from_u64(o.seed);
    let (mut ins, mut del) = (Timings::default(), Timings::default());
    let mut per_op: Vec<Timings> = o.ops.iter().map(|_| Timings::default()).collect();
    let balanced = d.is_balanced();
    for k in 0..o.samples {
        let len = d.len();
        if k % 2 == 0 || len <= 2 {
            // a new leaf strictly inside the sequence
            let i = if balanced {
                rng.random_range(1..len)
            } else {
                rng.random_range(0..=len)
            };
            let t = Instant::now();
            d.insert_pair(i, i)?;
            ins.0.push(t.elapsed().as_nanos() as u64);
        } else {
            let ones = d.rank1(len - 1)?;
            let v = d.select1(rng.random_range(if balanced { 2 } else { 1 }..=ones))?;
            let t = Instant::now();
            d.delete_node(v)?;
            del.0.push(t.elapsed().as_nanos() as u64);
        }
        let tree = OrdinalTree::new(&d).ok();
        for (op, t) in o.ops.iter().zip(&mut per_op) {
            let q = draw(&d, *op, &mut rng);
            t.0.push(time_query(&d, tree.as_ref(), &q));
        }
    }
    let n = d.rank1(d.len() - 1)?;
    let mut rows = vec![ins.row("insert_pair", n), del.row("delete_node", n)];
    for (op, t) in o.ops.iter().zip(&mut per_op) {
        rows.push(t.row(op.name(), n));
    }
    Ok(rows)
}

pub fn run(bits: ParenBitVector, config: StaticRmmConfig, o: &Options) -> rmm_core::Result<String> {
    let rows = if o.dynamic {
        run_dynamic(bits, o)?
    } else {
        run_static(bits, config, o)?
    };
    let mut out = String::from(HEADER);
    for r in rows {
        out.push('\n');
        out.push_str(&r);
    }
    out.push('\n');
    Ok(out)
}
