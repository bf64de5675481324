//! Maximum bipartite matching via shortest-augmenting-path phases, plus the
//! alternating-reachability step that turns a maximum matching into a
//! maximum antichain witness (minimum chain cover, then the uncovered
//! elements).

const INF: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Matching {
    pub pair_left: Vec<Option<usize>>,
    pub pair_right: Vec<Option<usize>>,
    pub size: usize,
}

/// Hopcroft-Karp on an explicit left-to-right adjacency list.
pub fn maximum_matching(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> Matching {
    let mut pair_left: Vec<Option<usize>> = vec![None; n_left];
    let mut pair_right: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![INF; n_left];
    let mut queue = std::collections::VecDeque::new();
    let mut size = 0;

    loop {
        // BFS layering from free left vertices
        queue.clear();
        for l in 0..n_left {
            if pair_left[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match pair_right[r] {
                    None => found = true,
                    Some(l2) => {
                        if dist[l2] == INF {
                            dist[l2] = dist[l] + 1;
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if !found {
            break;
        }
        // DFS along layered shortest augmenting paths
        for l in 0..n_left {
            if pair_left[l].is_none() && augment(l, adj, &mut pair_left, &mut pair_right, &mut dist)
            {
                size += 1;
            }
        }
    }
    Matching { pair_left, pair_right, size }
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    pair_left: &mut [Option<usize>],
    pair_right: &mut [Option<usize>],
    dist: &mut [u32],
) -> bool {
    for &r in &adj[l] {
        let ok = match pair_right[r] {
            None => true,
            Some(l2) => {
                dist[l2] == dist[l] + 1 && augment(l2, adj, pair_left, pair_right, dist)
            }
        };
        if ok {
            pair_left[l] = Some(r);
            pair_right[r] = Some(l);
            return true;
        }
    }
    dist[l] = INF;
    false
}

/// Alternating reachability from the free left vertices: left-to-right along
/// non-matching edges, right-to-left along matching edges. Returns the
/// reached flags on each side (the Konig construction).
pub fn alternating_reach(
    n_left: usize,
    adj: &[Vec<usize>],
    m: &Matching,
) -> (Vec<bool>, Vec<bool>) {
    let mut z_left = vec![false; n_left];
    let mut z_right = vec![false; m.pair_right.len()];
    let mut stack: Vec<usize> = (0..n_left).filter(|&l| m.pair_left[l].is_none()).collect();
    for &l in &stack {
        z_left[l] = true;
    }
    while let Some(l) = stack.pop() {
        for &r in &adj[l] {
            if Some(r) == m.pair_left[l] || z_right[r] {
                continue;
            }
            z_right[r] = true;
            if let Some(l2) = m.pair_right[r] {
                if !z_left[l2] {
                    z_left[l2] = true;
                    stack.push(l2);
                }
            }
        }
    }
    (z_left, z_right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_matching_on_cycle() {
        // C4 as bipartite: left {0,1}, right {0,1}, complete
        let adj = vec![vec![0, 1], vec![0, 1]];
        let m = maximum_matching(2, 2, &adj);
        assert_eq!(m.size, 2);
    }

    #[test]
    fn star_matches_once() {
        let adj = vec![vec![0], vec![0], vec![0]];
        let m = maximum_matching(3, 1, &adj);
        assert_eq!(m.size, 1);
    }

    #[test]
    fn konig_cover_size_equals_matching() {
        // P(3) comparability as the strict-inclusion bipartite graph
        let n = 8usize;
        let adj: Vec<Vec<usize>> = (0..n as u64)
            .map(|a| {
                (0..n as u64)
                    .filter(|&b| a != b && a & !b == 0)
                    .map(|b| b as usize)
                    .collect()
            })
            .collect();
        let m = maximum_matching(n, n, &adj);
        let (z_left, z_right) = alternating_reach(n, &adj, &m);
        let cover: usize = (0..n).filter(|&l| !z_left[l]).count()
            + (0..n).filter(|&r| z_right[r]).count();
        assert_eq!(cover, m.size);
        // uncovered elements form the maximum antichain of size 3
        let antichain: Vec<usize> = (0..n).filter(|&x| z_left[x] && !z_right[x]).collect();
        assert_eq!(antichain.len(), n - m.size);
        assert_eq!(antichain.len(), 3);
        for &a in &antichain {
            for &b in &antichain {
                if a != b {
                    let (a, b) = (a as u64, b as u64);
                    assert!(a & !b != 0 && b & !a != 0, "antichain violated");
                }
            }
        }
    }
}
