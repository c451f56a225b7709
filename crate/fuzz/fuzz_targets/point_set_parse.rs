#![no_main]

use cornerforge::corner::{all_corners, find_corner, PointSet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(set) = PointSet::parse(text) else {
        return;
    };
    // Serialized form must parse back to the same set.
    let again = PointSet::parse(&set.to_text()).expect("to_text output parses");
    assert_eq!(set, again);

    if set.len() <= 256 {
        let witness = find_corner(&set);
        if let Some(w) = witness {
            assert!(w.holds_in(&set));
        }
        let all = all_corners(&set);
        assert_eq!(witness, all.first().copied());
    }
});
