use regret_sched::verify::small_four_pp_instances;
use regret_sched_core::reductions::verify_theorem2;

/// Every 8-value 4-PP instance over 1..=4 (165 single-machine exact
/// solves, several minutes).
#[test]
#[ignore]
fn theorem2_threshold_on_all_small_instances() {
    let cases = small_four_pp_instances(4);
    for inst in &cases {
        let r = verify_theorem2(inst).unwrap();
        assert!(
            r.pass,
            "{:?}: Z* {} threshold {}",
            inst.values(),
            r.z_star,
            r.threshold
        );
    }
}
