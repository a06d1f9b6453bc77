//! Limits and colimits of finite-set diagrams, shared by every carrier.

use std::collections::HashMap;

use crate::unionfind::UnionFind;

/// An edge `from -> to` carrying a function between vertex sets.
pub type SetEdge<'a> = (usize, usize, &'a [usize]);

/// Compatible families over the diagram, in lexicographic order.
pub fn limit_tuples(sizes: &[usize], edges: &[SetEdge]) -> Vec<Vec<usize>> {
    let n = sizes.len();
    // For each vertex, the edges fully determined once it is assigned.
    let mut checks: Vec<Vec<(usize, usize, &[usize])>> = vec![Vec::new(); n];
    for &(i, j, m) in edges {
        checks[i.max(j)].push((i, j, m));
    }
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(n);
    fn rec(
        sizes: &[usize],
        checks: &[Vec<(usize, usize, &[usize])>],
        tuple: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let k = tuple.len();
        if k == sizes.len() {
            out.push(tuple.clone());
            return;
        }
        // A value forced by an edge from an earlier vertex.
        let forced = checks[k]
            .iter()
            .find(|&&(i, j, _)| j == k && i < k)
            .map(|&(i, _, m)| m[tuple[i]]);
        let candidates: Vec<usize> = match forced {
            Some(v) => vec![v],
            None => (0..sizes[k]).collect(),
        };
        for v in candidates {
            tuple.push(v);
            if checks[k].iter().all(|&(i, j, m)| m[tuple[i]] == tuple[j]) {
                rec(sizes, checks, tuple, out);
            }
            tuple.pop();
        }
    }
    rec(sizes, &checks, &mut tuple, &mut out);
    out
}

/// Index of each tuple, for locating mediating elements.
pub fn tuple_index(tuples: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect()
}

/// Quotient of the disjoint union by the edges. Classes are numbered by
/// first occurrence in (vertex, element) order.
pub fn colimit_classes(sizes: &[usize], edges: &[SetEdge]) -> (usize, Vec<Vec<usize>>) {
    colimit_classes_with(sizes, edges, 0, &[])
}

/// As [`colimit_classes`], with `extra` leading nodes and extra identifications
/// between global node indices (extra nodes first, then vertices in order).
pub fn colimit_classes_with(
    sizes: &[usize],
    edges: &[SetEdge],
    extra: usize,
    glue: &[(usize, usize)],
) -> (usize, Vec<Vec<usize>>) {
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut total = extra;
    for &s in sizes {
        offsets.push(total);
        total += s;
    }
    let mut uf = UnionFind::new(total);
    for &(i, j, m) in edges {
        for (x, &y) in m.iter().enumerate() {
            uf.union(offsets[i] + x, offsets[j] + y);
        }
    }
    for &(a, b) in glue {
        uf.union(a, b);
    }
    let (count, labels) = uf.canonical_labels();
    let per_vertex = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| labels[offsets[i]..offsets[i] + s].to_vec())
        .collect();
    (count, per_vertex)
}

/// Node offsets matching [`colimit_classes_with`].
pub fn offsets(sizes: &[usize], extra: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut total = extra;
    for &s in sizes {
        out.push(total);
        total += s;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pullback_of_constant_maps_is_product() {
        let f = [0usize, 0];
        let g = [0usize, 0];
        let t = limit_tuples(&[2, 2, 1], &[(0, 2, &f), (1, 2, &g)]);
        assert_eq!(t.len(), 4);
        assert_eq!(t[1], vec![0, 1, 0]);
    }

    #[test]
    fn coequalizer_glues() {
        let f = [0usize];
        let g = [1usize];
        let (n, labels) = colimit_classes(&[1, 2], &[(0, 1, &f), (0, 1, &g)]);
        assert_eq!(n, 1);
        assert_eq!(labels[1], vec![0, 0]);
    }
}
