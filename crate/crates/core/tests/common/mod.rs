#![allow(dead_code)]

use coxkit::system::CoxeterSystem;

pub fn sys(names: &[&str], m: &[&[u32]]) -> CoxeterSystem {
    CoxeterSystem::new(
        names.iter().map(|s| s.to_string()).collect(),
        m.iter().map(|r| r.to_vec()).collect(),
    )
    .unwrap()
}

pub fn a2() -> CoxeterSystem {
    sys(&["s", "t"], &[&[1, 3], &[3, 1]])
}

pub fn b2() -> CoxeterSystem {
    sys(&["s", "t"], &[&[1, 4], &[4, 1]])
}

pub fn a3() -> CoxeterSystem {
    sys(&["s1", "s2", "s3"], &[&[1, 3, 2], &[3, 1, 3], &[2, 3, 1]])
}

pub fn b3() -> CoxeterSystem {
    sys(&["s1", "s2", "s3"], &[&[1, 4, 2], &[4, 1, 3], &[2, 3, 1]])
}

pub fn h3() -> CoxeterSystem {
    sys(&["s1", "s2", "s3"], &[&[1, 5, 2], &[5, 1, 3], &[2, 3, 1]])
}

pub fn a2tilde() -> CoxeterSystem {
    sys(&["s1", "s2", "s3"], &[&[1, 3, 3], &[3, 1, 3], &[3, 3, 1]])
}

pub fn dinfty() -> CoxeterSystem {
    sys(&["s", "t"], &[&[1, 0], &[0, 1]])
}

/// Right-angled pentagon: adjacent vertices commute, the rest are free.
pub fn pentagon() -> CoxeterSystem {
    let names = ["s1", "s2", "s3", "s4", "s5"];
    let mut m = vec![vec![0u32; 5]; 5];
    for i in 0..5 {
        m[i][i] = 1;
        m[i][(i + 1) % 5] = 2;
        m[(i + 1) % 5][i] = 2;
    }
    CoxeterSystem::new(names.iter().map(|s| s.to_string()).collect(), m).unwrap()
}

pub fn dinfty_squared() -> CoxeterSystem {
    sys(
        &["s", "t", "u", "v"],
        &[&[1, 0, 2, 2], &[0, 1, 2, 2], &[2, 2, 1, 0], &[2, 2, 0, 1]],
    )
}
