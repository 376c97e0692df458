use std::collections::VecDeque;

use super::{CheckMode, Constants, PropertyId, PropertyReport, Witness};
use crate::graph::{degree_classes, mask_of, Graph};

/// `max(1, ⌊c ln n / ln ln n⌋)`, or `None` when `ln ln n` is not positive.
pub fn short_path_length(n: usize, c: &Constants) -> Option<usize> {
    if n < 3 {
        return None;
    }
    let ln = (n as f64).ln();
    Some(((c.short_path * ln / ln.ln()).floor() as usize).max(1))
}

pub fn check_max_degree(g: &Graph, c: &Constants) -> PropertyReport {
    let bound = c.max_degree * (g.n().max(1) as f64).ln();
    let worst = g
        .vertices()
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)));
    match worst {
        Some(v) if g.degree(v) as f64 > bound => {
            PropertyReport::violated(PropertyId::P1, Witness::vertex(v), CheckMode::Exact, g, c)
        }
        _ => PropertyReport::holds(PropertyId::P1, CheckMode::Exact, g, c),
    }
}

pub fn check_num_keys(g: &Graph, c: &Constants) -> PropertyReport {
    let ln = (g.n().max(1) as f64).ln();
    let classes = degree_classes(g, 0);
    let d1 = classes.class(1);
    let d2 = classes.class(2);
    if d1.len() as f64 > ln {
        PropertyReport::violated(
            PropertyId::P2,
            Witness::set(d1.to_vec()),
            CheckMode::Exact,
            g,
            c,
        )
    } else if (d2.len() as f64) < ln {
        PropertyReport::violated(
            PropertyId::P2,
            Witness::set(d2.to_vec()),
            CheckMode::Exact,
            g,
            c,
        )
    } else {
        PropertyReport::holds(PropertyId::P2, CheckMode::Exact, g, c)
    }
}

pub fn check_degree_properties(g: &Graph, c: &Constants) -> (PropertyReport, PropertyReport) {
    (check_max_degree(g, c), check_num_keys(g, c))
}

fn small_set(g: &Graph, c: &Constants) -> Vec<usize> {
    degree_classes(g, c.small_threshold(g.n())).small
}

/// P3. Breadth-first search to depth `L` from every Small vertex. Another
/// Small vertex within distance `L`, or a short cycle through the source
/// (detected as a non-tree edge joining two different branches), is a
/// violation.
pub fn check_small_distance(g: &Graph, c: &Constants) -> PropertyReport {
    let Some(limit) = short_path_length(g.n(), c) else {
        return PropertyReport::unknown(PropertyId::P3, CheckMode::Exact, g, c);
    };
    let small = small_set(g, c);
    let is_small = mask_of(g.n(), &small);
    let n = g.n();
    let mut depth = vec![usize::MAX; n + 1];
    let mut parent = vec![0usize; n + 1];
    let mut branch = vec![0usize; n + 1];
    let mut touched = Vec::new();

    let trace = |parent: &[usize], mut x: usize, s: usize| {
        let mut out = vec![x];
        while x != s {
            x = parent[x];
            out.push(x);
        }
        out
    };

    for &s in &small {
        for &v in &touched {
            depth[v] = usize::MAX;
        }
        touched.clear();
        depth[s] = 0;
        touched.push(s);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if depth[x] >= limit {
                continue;
            }
            for &y in g.neighbors(x) {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = x;
                    branch[y] = if x == s { y } else { branch[x] };
                    touched.push(y);
                    if is_small[y] {
                        let mut path = trace(&parent, y, s);
                        path.reverse();
                        return PropertyReport::violated(
                            PropertyId::P3,
                            Witness::path(path),
                            CheckMode::Exact,
                            g,
                            c,
                        );
                    }
                    queue.push_back(y);
                } else if y != s
                    && x != s
                    && parent[x] != y
                    && branch[x] != branch[y]
                    && depth[x] + depth[y] < limit
                {
                    let mut path = trace(&parent, x, s);
                    path.reverse();
                    path.extend(trace(&parent, y, s));
                    return PropertyReport::violated(
                        PropertyId::P3,
                        Witness::path(path),
                        CheckMode::Exact,
                        g,
                        c,
                    );
                }
            }
        }
    }
    PropertyReport::holds(PropertyId::P3, CheckMode::Exact, g, c)
}

pub fn check_small_cover(g: &Graph, c: &Constants) -> PropertyReport {
    let small = small_set(g, c);
    let mut mask = mask_of(g.n(), &small);
    for &v in &small {
        for &u in g.neighbors(v) {
            mask[u] = true;
        }
    }
    let cover: Vec<usize> = g.vertices().filter(|&v| mask[v]).collect();
    if cover.len() as f64 > (g.n() as f64).powf(c.small_cover_exponent) {
        PropertyReport::violated(PropertyId::P4, Witness::set(cover), CheckMode::Exact, g, c)
    } else {
        PropertyReport::holds(PropertyId::P4, CheckMode::Exact, g, c)
    }
}

pub fn check_small_structure(g: &Graph, c: &Constants) -> (PropertyReport, PropertyReport) {
    (check_small_distance(g, c), check_small_cover(g, c))
}
