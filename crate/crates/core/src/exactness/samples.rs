//! Element-level generators shared by the checkers.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::carrier::{image, jointly_surjective, product, pullback, Carrier, Enumerable};
use crate::error::Result;
use crate::relcalc::{Relation, Subobject};
use crate::unionfind::UnionFind;

/// Caps on exhaustive element-level enumeration.
pub const MAX_MASK_BITS: usize = 12;
pub const MAX_PARTITIONS: usize = 4096;

/// All subobjects given by closed element subsets, by increasing mask.
pub fn all_subobjects<C: Carrier>(c: &C, x: &C::Obj) -> Vec<C::Mor> {
    let sorts = c.sorts(x);
    let total: usize = sorts.iter().sum();
    if total > MAX_MASK_BITS {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << total) {
        let keep = mask_to_keep(&sorts, mask as u64);
        if let Some(m) = c.subobject(x, &keep) {
            out.push(m);
        }
    }
    out
}

pub fn mask_to_keep(sorts: &[usize], mask: u64) -> Vec<Vec<bool>> {
    let mut bit = 0;
    sorts
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| {
                    let b = mask >> bit & 1 == 1;
                    bit += 1;
                    b
                })
                .collect()
        })
        .collect()
}

/// Union of the images of a few random probes.
pub fn random_subobject<C: Carrier>(c: &C, rng: &mut ChaCha8Rng, x: &C::Obj) -> Result<C::Mor> {
    let probes = c.probes(x);
    let sorts = c.sorts(x);
    let mut keep: Vec<Vec<bool>> = sorts.iter().map(|&n| vec![false; n]).collect();
    if !probes.is_empty() {
        let k = rng.gen_range(0..=2.min(probes.len()));
        for p in probes.choose_multiple(rng, k) {
            let (_, m) = image(c, p)?;
            for (s, map) in c.graded(&m).iter().enumerate() {
                for &v in map {
                    keep[s][v] = true;
                }
            }
        }
    }
    // The empty subset may not be closed (pointed sets); fall back to the
    // least closed subset reachable from probe images.
    match c.subobject(x, &keep) {
        Some(m) => Ok(m),
        None => {
            let least = probes
                .iter()
                .map(|p| image(c, p).map(|(_, m)| m))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min_by_key(|m| c.total_size(c.dom(m)));
            Ok(least.unwrap_or_else(|| c.identity(x)))
        }
    }
}

/// Restricted-growth labelings of an `n`-element set.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max {
            cur.push(l);
            let next = if l == max { max + 1 } else { max };
            rec(n, next, cur, out);
            cur.pop();
        }
    }
    rec(n, 0, &mut cur, &mut out);
    out
}

fn labels_of(ufs: &mut [UnionFind]) -> Vec<Vec<usize>> {
    ufs.iter_mut().map(|u| u.canonical_labels().1).collect()
}

/// Congruences of `x` (sortwise partitions closed under the structure),
/// as label vectors, without duplicates.
pub fn all_congruences<C: Enumerable>(c: &C, x: &C::Obj) -> Vec<Vec<Vec<usize>>> {
    let sorts = c.sorts(x);
    let per_sort: Vec<Vec<Vec<usize>>> = sorts.iter().map(|&n| set_partitions(n)).collect();
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut idx = vec![0usize; sorts.len()];
    loop {
        let mut ufs: Vec<UnionFind> = sorts.iter().map(|&n| UnionFind::new(n)).collect();
        for (s, uf) in ufs.iter_mut().enumerate() {
            let labels = &per_sort[s][idx[s]];
            for e in 0..labels.len() {
                if let Some(first) = labels.iter().position(|&l| l == labels[e]) {
                    uf.union(first, e);
                }
            }
        }
        c.close_partition(x, &mut ufs);
        let labels = labels_of(&mut ufs);
        if seen.insert(labels.clone()) {
            out.push(labels);
            if out.len() >= MAX_PARTITIONS {
                return out;
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per_sort[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn random_congruence<C: Enumerable>(c: &C, rng: &mut ChaCha8Rng, x: &C::Obj) -> Vec<Vec<usize>> {
    let sorts = c.sorts(x);
    let mut ufs: Vec<UnionFind> = sorts.iter().map(|&n| UnionFind::new(n)).collect();
    for (s, &n) in sorts.iter().enumerate() {
        if n > 1 {
            for _ in 0..rng.gen_range(0..n) {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                ufs[s].union(a, b);
            }
        }
    }
    c.close_partition(x, &mut ufs);
    labels_of(&mut ufs)
}

/// The equivalence relation "same label" on `x`.
pub fn relation_from_labels<C: Carrier>(c: &C, x: &C::Obj, labels: &[Vec<usize>]) -> Result<Relation<C>> {
    Relation::from_predicate(c, x, |s, a, b| labels[s][a] == labels[s][b])
}

/// Reflexive relations on `x` given by closed subsets of `x × x`.
pub fn all_reflexive_relations<C: Carrier>(c: &C, x: &C::Obj) -> Result<Vec<Relation<C>>> {
    let square = product(c, &[x.clone(), x.clone()])?;
    let sorts = c.sorts(&square.apex);
    let mut free: Vec<(usize, usize)> = Vec::new();
    for (s, &n) in sorts.iter().enumerate() {
        for e in 0..n {
            if c.apply(&square.legs[0], s, e) != c.apply(&square.legs[1], s, e) {
                free.push((s, e));
            }
        }
    }
    if free.len() > MAX_MASK_BITS {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << free.len()) {
        let mut keep: Vec<Vec<bool>> = sorts
            .iter()
            .enumerate()
            .map(|(s, &n)| {
                (0..n)
                    .map(|e| c.apply(&square.legs[0], s, e) == c.apply(&square.legs[1], s, e))
                    .collect()
            })
            .collect();
        for (k, &(s, e)) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                keep[s][e] = true;
            }
        }
        if let Some(m) = c.subobject(&square.apex, &keep) {
            out.push(Relation::from_mono(c, x, m)?);
        }
    }
    Ok(out)
}

/// Diagonal joined with the images of a few random probes into `x × x`.
pub fn random_reflexive_relation<C: Carrier>(c: &C, rng: &mut ChaCha8Rng, x: &C::Obj) -> Result<Relation<C>> {
    let square = product(c, &[x.clone(), x.clone()])?;
    let sorts = c.sorts(&square.apex);
    let mut keep: Vec<Vec<bool>> = sorts
        .iter()
        .enumerate()
        .map(|(s, &n)| {
            (0..n)
                .map(|e| c.apply(&square.legs[0], s, e) == c.apply(&square.legs[1], s, e))
                .collect()
        })
        .collect();
    let probes = c.probes(&square.apex);
    if !probes.is_empty() {
        let k = rng.gen_range(0..=3.min(probes.len()));
        for p in probes.choose_multiple(rng, k) {
            let (_, m) = image(c, p)?;
            for (s, map) in c.graded(&m).iter().enumerate() {
                for &v in map {
                    keep[s][v] = true;
                }
            }
        }
    }
    match c.subobject(&square.apex, &keep) {
        Some(m) => Relation::from_mono(c, x, m),
        None => Relation::diagonal(c, x),
    }
}

/// Pullback of a subobject of `Y` along `p: Z -> Y`, as a subobject of `Z`.
pub fn pull_subobject<C: Carrier>(c: &C, sub: &Subobject<C>, p: &C::Mor) -> Result<Subobject<C>> {
    let cone = pullback(c, &sub.mono, p)?;
    Subobject::new(c, cone.legs[1].clone())
}

/// Element-level injectivity; agrees with monicity in every carrier here.
pub fn is_injective<C: Carrier>(c: &C, f: &C::Mor) -> bool {
    c.graded(f).iter().all(|map| {
        let mut seen = map.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    })
}

pub fn is_surjective<C: Carrier>(c: &C, f: &C::Mor) -> bool {
    jointly_surjective(c, c.cod(f), std::slice::from_ref(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::FinSetCarrier;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=4).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15]);
    }

    #[test]
    fn subsets_of_three() {
        assert_eq!(all_subobjects(&FinSetCarrier, &3).len(), 8);
        assert_eq!(all_reflexive_relations(&FinSetCarrier, &2).unwrap().len(), 4);
    }
}
