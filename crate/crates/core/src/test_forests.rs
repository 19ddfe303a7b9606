//! Small labelled trees shared by the unit tests.

use crate::graph::Forest;

fn labelled(labels: &[&str], edges: &[(usize, usize)]) -> Forest {
    Forest::with_labels(labels.iter().map(|s| s.to_string()).collect(), edges).unwrap()
}

/// Stretched tree with ara = pd = 6: `v` has leaves `v1, v2` and neighbour
/// `v3`, which leads to the hub `w1` carrying leaves `a, b, c`.
pub(crate) fn tree_pd6() -> Forest {
    labelled(
        &["v", "v1", "v2", "v3", "w1", "a", "b", "c"],
        &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (4, 6), (4, 7)],
    )
}

/// Stretched tree with ara = pd = 5.
pub(crate) fn tree_pd5() -> Forest {
    labelled(
        &["v", "v1", "v2", "w1", "w2", "a", "b", "c", "d"],
        &[(0, 1), (0, 2), (2, 3), (2, 4), (3, 5), (5, 6), (5, 7), (7, 8)],
    )
}
