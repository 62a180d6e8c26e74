mod common;

#[test]
fn library_matches_enumeration_on_random_worlds() {
    let failures: Vec<String> = (0..200).filter_map(|s| common::compare_world(s).err()).collect();
    assert!(failures.is_empty(), "{} mismatches, first:\n{}", failures.len(), failures[0]);
}

#[test]
fn worlds_exercise_every_violation_kind() {
    let mut seen = [false; 11];
    for s in 0..200 {
        let w = common::random_world(s);
        for stage in 1..=w.stages {
            let e = w.expected(stage);
            let nums = [
                e.cov_e.num < e.cov_e.den,
                e.cov_t.num < e.cov_t.den,
                e.corr_e.num < e.corr_e.den,
                e.corr_t.num < e.corr_t.den,
                e.dup_rate.num > 0,
                e.o_dt.num > 0,
                e.o_d.num > 0,
                e.o_r.num > 0,
                e.o_rd.num > 0,
                e.o_lt.num > 0,
                e.o_lf.num > 0,
            ];
            for (flag, hit) in seen.iter_mut().zip(nums) {
                *flag |= hit;
            }
        }
    }
    assert!(seen.iter().all(|s| *s), "{seen:?}");
}
