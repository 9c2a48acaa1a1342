//! Fixed workloads shared by the criterion benches.

use paramgame::{gen_family, Family, ReachGame};

/// Family instances measured by the benches, smallest first.
pub fn workloads(max_n: usize) -> Vec<(String, ReachGame)> {
    Family::ALL
        .into_iter()
        .flat_map(|f| {
            (2..=max_n).map(move |n| (format!("{f}/{n}"), gen_family(f, n).expect("n is at least 2")))
        })
        .collect()
}
