//! Serialized structures answer queries exactly like the originals.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rmm_core::oracle::{gen_balanced, gen_forest};
use rmm_core::{CompressedDynBitmap, DynamicRmm, Error, Primitives, StaticRmm, StaticRmmConfig};

#[test]
fn static_round_trip_keeps_config_and_answers() {
    let mut rng = StdRng::seed_from_u64(21);
    for (k, cfg) in [(64, 2), (256, 8), (512, 32)].into_iter().enumerate() {
        let cfg = StaticRmmConfig::new(cfg.0, cfg.1).unwrap();
        let s = StaticRmm::build(gen_balanced(5000, k as u64), cfg).unwrap();
        let bytes = s.to_bytes();
        assert_eq!(bytes, StaticRmm::from_bytes(&bytes).unwrap().to_bytes());
        let r = StaticRmm::from_bytes(&bytes).unwrap();
        assert_eq!(r.config(), cfg);
        for _ in 0..500 {
            let i = rng.random_range(0..s.len());
            let j = rng.random_range(i..s.len());
            assert_eq!(r.fwd_search(i, 0).unwrap(), s.fwd_search(i, 0).unwrap());
            assert_eq!(r.rmqi(i, j).unwrap(), s.rmqi(i, j).unwrap());
            assert_eq!(r.min_count(i, j).unwrap(), s.min_count(i, j).unwrap());
        }
    }
}

#[test]
fn dynamic_round_trip_after_edits() {
    let mut d = DynamicRmm::from_bits(&gen_forest(2000, 5));
    for i in (1..3000).step_by(97) {
        d.insert_pair(i, i).unwrap();
    }
    let r = DynamicRmm::from_bytes(&d.to_bytes()).unwrap();
    r.audit().unwrap();
    assert_eq!(r.to_bits(), d.to_bits());
}

#[test]
fn truncated_input_is_a_format_error() {
    let bytes = StaticRmm::from_parens("(()(()()))").unwrap().to_bytes();
    for cut in 0..bytes.len() {
        assert!(
            matches!(StaticRmm::from_bytes(&bytes[..cut]), Err(Error::Format(_))),
            "cut {cut}"
        );
    }
}

#[test]
fn bitmap_raw_round_trip_after_edits() {
    let mut rng = StdRng::seed_from_u64(22);
    let bits: Vec<bool> = (0..20_000).map(|_| rng.random_bool(0.1)).collect();
    let mut b = CompressedDynBitmap::from_bits(bits).unwrap();
    for _ in 0..2000 {
        let i = rng.random_range(0..b.len());
        if rng.random_bool(0.5) {
            b.insert(i, rng.random_bool(0.3)).unwrap();
        } else {
            b.delete(i).unwrap();
        }
    }
    let r = CompressedDynBitmap::from_raw_bytes(&b.to_raw_bytes()).unwrap();
    r.audit().unwrap();
    assert_eq!(r.to_bits(), b.to_bits());
}
