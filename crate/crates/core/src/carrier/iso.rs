//! Canonical forms of presheaves and isomorphism testing.
//!
//! A presheaf is split into connected components; each component is
//! canonized by color refinement with individualization, pruning branches
//! related by a transposition automorphism. Components are then sorted.

use std::collections::BTreeMap;

use super::{NatTrans, Presheaf, PresheafCarrier};
use crate::fincat::FinCategory;
use crate::unionfind::UnionFind;

/// Canonical representative and relabeling `perm[a][old] = new`.
pub fn canonical_form(base: &FinCategory, x: &Presheaf) -> (Presheaf, Vec<Vec<usize>>) {
    let n = base.object_count();
    let comps = components(base, x);
    let mut canon: Vec<(Presheaf, Vec<Vec<usize>>)> = comps
        .iter()
        .map(|elems| {
            let (sub, embed) = restrict(base, x, elems);
            let (c, perm) = canonize_connected(base, &sub);
            // perm is indexed by sub elements; carry back to x's elements
            let mut back: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
            for a in 0..n {
                for (i, &e) in embed[a].iter().enumerate() {
                    back[a].push((e, perm[a][i]));
                }
            }
            let perm_x: Vec<Vec<usize>> = back
                .into_iter()
                .map(|pairs| {
                    let mut v = vec![0; pairs.len()];
                    let mut order: Vec<(usize, usize)> = pairs;
                    order.sort_by_key(|p| p.1);
                    for (k, (e, _)) in order.iter().enumerate() {
                        v[k] = *e;
                    }
                    v
                })
                .collect();
            // perm_x[a][new] = old element of x
            (c, perm_x)
        })
        .collect();
    canon.sort_by(|p, q| p.0.cmp(&q.0));
    let mut perm: Vec<Vec<usize>> = x.sizes().iter().map(|&s| vec![usize::MAX; s]).collect();
    let mut offset = vec![0usize; n];
    let mut actions: Vec<Vec<usize>> = vec![Vec::new(); base.morphism_count()];
    for (c, inv) in &canon {
        for f in 0..base.morphism_count() {
            let a = base.source(f);
            let shifted = c.action(f).iter().map(|&v| v + offset[a]);
            actions[f].extend(shifted);
        }
        for a in 0..n {
            for (k, &old) in inv[a].iter().enumerate() {
                perm[a][old] = offset[a] + k;
            }
            offset[a] += c.size(a);
        }
    }
    let out = Presheaf::from_actions(base, x.sizes().to_vec(), actions).expect("relabeling preserves validity");
    (out, perm)
}

/// An isomorphism `x -> y` if one exists.
pub fn iso_test(c: &PresheafCarrier, x: &Presheaf, y: &Presheaf) -> Option<NatTrans> {
    if x.sizes() != y.sizes() {
        return None;
    }
    let base = c.base();
    let (cx, px) = canonical_form(base, x);
    let (cy, py) = canonical_form(base, y);
    if cx != cy {
        return None;
    }
    let components = (0..base.object_count())
        .map(|a| {
            let mut inv_y = vec![0; py[a].len()];
            for (old, &new) in py[a].iter().enumerate() {
                inv_y[new] = old;
            }
            px[a].iter().map(|&new| inv_y[new]).collect()
        })
        .collect();
    c.nat(x.clone(), y.clone(), components).ok()
}

fn components(base: &FinCategory, x: &Presheaf) -> Vec<Vec<Vec<usize>>> {
    let n = base.object_count();
    let mut offsets = vec![0usize; n + 1];
    for a in 0..n {
        offsets[a + 1] = offsets[a] + x.size(a);
    }
    let mut uf = UnionFind::new(offsets[n]);
    for f in 0..base.morphism_count() {
        let (a, b) = (base.source(f), base.target(f));
        for (e, &v) in x.action(f).iter().enumerate() {
            uf.union(offsets[b] + e, offsets[a] + v);
        }
    }
    let (count, labels) = uf.canonical_labels();
    let mut out = vec![vec![Vec::new(); n]; count];
    for a in 0..n {
        for e in 0..x.size(a) {
            out[labels[offsets[a] + e]][a].push(e);
        }
    }
    out
}

fn restrict(base: &FinCategory, x: &Presheaf, elems: &[Vec<usize>]) -> (Presheaf, Vec<Vec<usize>>) {
    let n = base.object_count();
    let mut index: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for a in 0..n {
        for (i, &e) in elems[a].iter().enumerate() {
            index[a].insert(e, i);
        }
    }
    let actions = (0..base.morphism_count())
        .map(|f| {
            let (a, b) = (base.source(f), base.target(f));
            elems[b].iter().map(|&e| index[a][&x.action(f)[e]]).collect()
        })
        .collect();
    let sub = Presheaf::from_actions(base, elems.iter().map(Vec::len).collect(), actions)
        .expect("components are sub-presheaves");
    (sub, elems.to_vec())
}

type Coloring = Vec<Vec<usize>>;

fn refine(base: &FinCategory, x: &Presheaf, colors: &mut Coloring) {
    let n = base.object_count();
    let into: Vec<Vec<usize>> = (0..n)
        .map(|b| base.into_object(b).into_iter().filter(|&f| !base.is_identity(f)).collect())
        .collect();
    let outof: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..base.morphism_count())
                .filter(|&f| base.source(f) == a && !base.is_identity(f))
                .collect()
        })
        .collect();
    let mut count = colors.iter().flatten().collect::<std::collections::BTreeSet<_>>().len();
    loop {
        let mut sigs: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        let mut keyed: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); n];
        for b in 0..n {
            for e in 0..x.size(b) {
                let mut sig = Vec::new();
                for &f in &into[b] {
                    sig.push(colors[base.source(f)][x.action(f)[e]]);
                }
                for &f in &outof[b] {
                    // colors of preimages under X(f): X(c) -> X(b)
                    let c = base.target(f);
                    let mut pre: Vec<usize> = (0..x.size(c))
                        .filter(|&z| x.action(f)[z] == e)
                        .map(|z| colors[c][z])
                        .collect();
                    pre.sort_unstable();
                    sig.push(usize::MAX);
                    sig.extend(pre);
                }
                keyed[b].push((colors[b][e], sig.clone()));
                sigs.push((colors[b][e], b, sig));
            }
        }
        let mut uniq: Vec<(usize, usize, Vec<usize>)> = sigs;
        uniq.sort();
        uniq.dedup();
        let new_count = uniq.len();
        for b in 0..n {
            for e in 0..x.size(b) {
                let (c0, sig) = &keyed[b][e];
                let key = (*c0, b, sig.clone());
                colors[b][e] = uniq.binary_search(&key).expect("signature present");
            }
        }
        if new_count == count {
            return;
        }
        count = new_count;
    }
}

fn canonize_connected(base: &FinCategory, x: &Presheaf) -> (Presheaf, Vec<Vec<usize>>) {
    let n = base.object_count();
    // Initial color: the sort, so that colors are ordered by object first.
    let mut colors: Coloring = (0..n).map(|a| vec![a; x.size(a)]).collect();
    refine(base, x, &mut colors);
    let mut best: Option<(Presheaf, Vec<Vec<usize>>)> = None;
    search(base, x, colors, &mut best);
    best.expect("search yields a leaf")
}

fn search(base: &FinCategory, x: &Presheaf, colors: Coloring, best: &mut Option<(Presheaf, Vec<Vec<usize>>)>) {
    let n = base.object_count();
    // Smallest color shared by several elements.
    let mut cells: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..n {
        for e in 0..x.size(a) {
            cells.entry(colors[a][e]).or_default().push((a, e));
        }
    }
    let target = cells.iter().find(|(_, m)| m.len() > 1).map(|(&c, m)| (c, m.clone()));
    let Some((color, members)) = target else {
        // Discrete: new label = rank of color within its sort.
        let perm: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                let mut order: Vec<usize> = (0..x.size(a)).collect();
                order.sort_by_key(|&e| colors[a][e]);
                let mut p = vec![0; x.size(a)];
                for (k, &e) in order.iter().enumerate() {
                    p[e] = k;
                }
                p
            })
            .collect();
        let cand = x.permuted(base, &perm);
        if best.as_ref().map_or(true, |(b, _)| cand < *b) {
            *best = Some((cand, perm));
        }
        return;
    };
    let mut tried: Vec<(usize, usize)> = Vec::new();
    for &(a, e) in &members {
        if tried.iter().any(|&(_, t)| is_transposition_automorphism(base, x, a, t, e)) {
            continue;
        }
        tried.push((a, e));
        let mut c2 = colors.clone();
        // Individualize: the chosen element keeps `color`, the rest move up.
        for row in c2.iter_mut() {
            for v in row.iter_mut() {
                *v = *v * 2 + usize::from(*v > color);
            }
        }
        for &(b, z) in &members {
            if (b, z) != (a, e) {
                c2[b][z] += 1;
            }
        }
        refine(base, x, &mut c2);
        search(base, x, c2, best);
    }
}

fn is_transposition_automorphism(base: &FinCategory, x: &Presheaf, a: usize, e1: usize, e2: usize) -> bool {
    let perm: Vec<Vec<usize>> = (0..base.object_count())
        .map(|b| {
            (0..x.size(b))
                .map(|z| {
                    if b != a {
                        z
                    } else if z == e1 {
                        e2
                    } else if z == e2 {
                        e1
                    } else {
                        z
                    }
                })
                .collect()
        })
        .collect();
    x.permuted(base, &perm) == *x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::Carrier;
    use crate::fincat::{standard_shape, Shape};

    fn carrier() -> PresheafCarrier {
        PresheafCarrier::new("span", standard_shape(Shape::Span))
    }

    fn sample(c: &PresheafCarrier) -> Presheaf {
        let base = c.base();
        let m = base.morphism_index("m").unwrap();
        let f = base.morphism_index("f").unwrap();
        let mut gens = BTreeMap::new();
        gens.insert(m, vec![0, 1, 1]);
        gens.insert(f, vec![2, 0]);
        c.presheaf(vec![3, 3, 2], &gens).unwrap()
    }

    #[test]
    fn self_iso_found() {
        let c = carrier();
        let x = sample(&c);
        assert!(iso_test(&c, &x, &x).is_some());
    }

    #[test]
    fn permuted_copy_is_isomorphic() {
        let c = carrier();
        let x = sample(&c);
        let perm = vec![vec![2, 0, 1], vec![1, 2, 0], vec![1, 0]];
        let y = x.permuted(c.base(), &perm);
        let iso = iso_test(&c, &x, &y).unwrap();
        assert!(c.inverse(&iso).is_some());
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        let c = carrier();
        let x = sample(&c);
        let y = c.representable(0).clone();
        assert!(iso_test(&c, &x, &y).is_none());
    }

    #[test]
    fn large_symmetric_sets_canonize_quickly() {
        let base = standard_shape(Shape::Discrete(1));
        let x = Presheaf::from_actions(&base, vec![16], vec![(0..16).collect()]).unwrap();
        let (c, _) = canonical_form(&base, &x);
        assert_eq!(c, x);
    }
}
