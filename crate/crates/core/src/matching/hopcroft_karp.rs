//! Hopcroft-Karp maximum bipartite matching on prefix-limited adjacency lists.

use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Maximum matching where left vertex `u` may use `adj[u][..limit[u]]`.
///
/// Returns `match_left[u]`, `usize::MAX` for unmatched vertices, and the
/// matching size.
pub(crate) fn max_matching(
    adj: &[Vec<u32>],
    limit: &[usize],
    n_right: usize,
) -> (Vec<usize>, usize) {
    let n_left = adj.len();
    let mut match_l = vec![NONE; n_left];
    let mut match_r = vec![NONE; n_right];
    let mut size = 0;

    // Greedy seed.
    for u in 0..n_left {
        if let Some(&v) = adj[u][..limit[u]]
            .iter()
            .find(|&&v| match_r[v as usize] == NONE)
        {
            match_l[u] = v as usize;
            match_r[v as usize] = u;
            size += 1;
        }
    }

    let mut dist = vec![0usize; n_left];
    let mut it = vec![0usize; n_left];
    let mut queue = VecDeque::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut via: Vec<usize> = Vec::new();
    loop {
        // Layer the graph from the free left vertices.
        queue.clear();
        for u in 0..n_left {
            if match_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NONE;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u][..limit[u]] {
                match match_r[v as usize] {
                    NONE => found = true,
                    w if dist[w] == NONE => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }

        // Vertex-disjoint shortest augmenting paths, iterative DFS.
        it.fill(0);
        for root in 0..n_left {
            if match_l[root] != NONE {
                continue;
            }
            stack.clear();
            via.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                if it[u] == limit[u] {
                    dist[u] = NONE;
                    stack.pop();
                    via.pop();
                    continue;
                }
                let v = adj[u][it[u]] as usize;
                it[u] += 1;
                let w = match_r[v];
                if w == NONE {
                    via.push(v);
                    for (&a, &b) in stack.iter().zip(&via) {
                        match_l[a] = b;
                        match_r[b] = a;
                    }
                    size += 1;
                    break;
                }
                if dist[w] != NONE && dist[w] == dist[u] + 1 {
                    via.push(v);
                    stack.push(w);
                }
            }
        }
    }
    (match_l, size)
}
