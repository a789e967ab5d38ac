mod common;

use common::check_stats_instance;

#[test]
fn stats_match_double_loop_oracles() {
    for seed in 0..100 {
        check_stats_instance(seed);
    }
}
