//! Instance generation: exhaustive small objects and seeded random ones.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::finset::Function;
use super::iso::canonical_form;
use super::{Audited, Carrier, FinPosetCarrier, FinSetCarrier, PointedCarrier, Poset, Presheaf, PresheafCarrier};
use crate::unionfind::UnionFind;

pub trait Enumerable: Carrier {
    /// Objects of size at most `max`, one per isomorphism class, in a fixed
    /// order (smaller first).
    fn objects_up_to(&self, max: usize) -> Vec<Self::Obj>;

    fn random_object(&self, rng: &mut ChaCha8Rng, max: usize) -> Self::Obj;

    fn random_morphism(&self, rng: &mut ChaCha8Rng, x: &Self::Obj, y: &Self::Obj) -> Option<Self::Mor> {
        let hom = self.hom(x, y);
        if hom.is_empty() {
            None
        } else {
            let i = rng.gen_range(0..hom.len());
            Some(hom[i].clone())
        }
    }

    /// Enlarges a sortwise partition until it is compatible with the
    /// structure maps of `x`.
    fn close_partition(&self, _x: &Self::Obj, _uf: &mut [UnionFind]) {}
}

impl Enumerable for FinSetCarrier {
    fn objects_up_to(&self, max: usize) -> Vec<usize> {
        (0..=max).collect()
    }

    fn random_object(&self, rng: &mut ChaCha8Rng, max: usize) -> usize {
        rng.gen_range(0..=max)
    }

    fn random_morphism(&self, rng: &mut ChaCha8Rng, x: &usize, y: &usize) -> Option<Function> {
        if *x > 0 && *y == 0 {
            return None;
        }
        Some(Function {
            source: *x,
            target: *y,
            map: (0..*x).map(|_| rng.gen_range(0..*y)).collect(),
        })
    }
}

impl Enumerable for PointedCarrier {
    fn objects_up_to(&self, max: usize) -> Vec<usize> {
        (1..=max.max(1)).collect()
    }

    fn random_object(&self, rng: &mut ChaCha8Rng, max: usize) -> usize {
        rng.gen_range(1..=max.max(1))
    }

    fn random_morphism(&self, rng: &mut ChaCha8Rng, x: &usize, y: &usize) -> Option<Function> {
        let mut map = vec![0];
        map.extend((1..*x).map(|_| rng.gen_range(0..*y)));
        Some(Function {
            source: *x,
            target: *y,
            map,
        })
    }
}

impl Enumerable for FinPosetCarrier {
    fn objects_up_to(&self, max: usize) -> Vec<Poset> {
        (0..=max).flat_map(Poset::all_up_to_iso).collect()
    }

    fn random_object(&self, rng: &mut ChaCha8Rng, max: usize) -> Poset {
        let n = rng.gen_range(0..=max);
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.35) {
                    pairs.push((i, j));
                }
            }
        }
        Poset::from_relations(n, &pairs).expect("upward relations are acyclic")
    }
}

impl PresheafCarrier {
    /// Every presheaf with the given sizes, as generator action tables.
    fn presheaves_with_sizes(&self, sizes: &[usize]) -> Vec<Presheaf> {
        let base = self.base();
        let gens: Vec<usize> = base.generators().to_vec();
        let spaces: Vec<Vec<Function>> = gens
            .iter()
            .map(|&g| Function::all(sizes[base.target(g)], sizes[base.source(g)]))
            .collect();
        if spaces.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; gens.len()];
        loop {
            let table: BTreeMap<usize, Vec<usize>> = gens
                .iter()
                .zip(&idx)
                .enumerate()
                .map(|(k, (&g, &i))| (g, spaces[k][i].map.clone()))
                .collect();
            if let Ok(p) = Presheaf::from_generators(base, sizes.to_vec(), &table) {
                out.push(p);
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < spaces[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

fn size_vectors(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for s in 0..=left {
            cur.push(s);
            rec(n, left - s, cur, out);
            cur.pop();
        }
    }
    rec(n, max_total, &mut cur, &mut out);
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

impl Enumerable for PresheafCarrier {
    /// Presheaves of total size at most `max`, up to isomorphism.
    fn objects_up_to(&self, max: usize) -> Vec<Presheaf> {
        let base = self.base();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for sizes in size_vectors(base.object_count(), max) {
            for p in self.presheaves_with_sizes(&sizes) {
                let (canon, _) = canonical_form(base, &p);
                if seen.insert(canon.clone()) {
                    out.push(canon);
                }
            }
        }
        out
    }

    /// Random generator actions with each set of size at most `max`; falls
    /// back to a quotient of a coproduct of representables when equations
    /// keep rejecting.
    fn random_object(&self, rng: &mut ChaCha8Rng, max: usize) -> Presheaf {
        let base = self.base();
        let n = base.object_count();
        for _ in 0..32 {
            let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
            let mut table = BTreeMap::new();
            let mut ok = true;
            for &g in base.generators() {
                let (s, t) = (sizes[base.source(g)], sizes[base.target(g)]);
                if s == 0 && t > 0 {
                    ok = false;
                    break;
                }
                table.insert(g, (0..t).map(|_| rng.gen_range(0..s)).collect::<Vec<_>>());
            }
            if ok {
                if let Ok(p) = Presheaf::from_generators(base, sizes, &table) {
                    return p;
                }
            }
        }
        let k = rng.gen_range(1..=2);
        let reps: Vec<Presheaf> = (0..k).map(|_| self.representable(rng.gen_range(0..n)).clone()).collect();
        let sum = super::coproduct(self, &reps).expect("coproducts exist").apex;
        let mut ufs: Vec<UnionFind> = sum.sizes().iter().map(|&s| UnionFind::new(s)).collect();
        for (a, uf) in ufs.iter_mut().enumerate() {
            if sum.size(a) > 1 && rng.gen_bool(0.5) {
                let x = rng.gen_range(0..sum.size(a));
                let y = rng.gen_range(0..sum.size(a));
                uf.union(x, y);
            }
        }
        self.close_partition(&sum, &mut ufs);
        quotient_presheaf(self, &sum, &mut ufs)
    }

    fn close_partition(&self, x: &Presheaf, uf: &mut [UnionFind]) {
        let base = self.base();
        loop {
            let mut changed = false;
            for f in 0..base.morphism_count() {
                let (a, b) = (base.source(f), base.target(f));
                let act = x.action(f);
                for e in 0..x.size(b) {
                    let r = uf[b].find(e);
                    if r != e {
                        let (u, v) = (act[e], act[r]);
                        changed |= uf[a].union(u, v);
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }
}

impl<C: Enumerable> Enumerable for Audited<C> {
    fn objects_up_to(&self, max: usize) -> Vec<C::Obj> {
        self.inner().objects_up_to(max)
    }

    fn random_object(&self, rng: &mut ChaCha8Rng, max: usize) -> C::Obj {
        self.inner().random_object(rng, max)
    }

    fn random_morphism(&self, rng: &mut ChaCha8Rng, x: &C::Obj, y: &C::Obj) -> Option<C::Mor> {
        self.inner().random_morphism(rng, x, y)
    }

    fn close_partition(&self, x: &C::Obj, uf: &mut [UnionFind]) {
        self.inner().close_partition(x, uf)
    }
}

/// Quotient of `x` by a congruence given sortwise.
pub fn quotient_presheaf(c: &PresheafCarrier, x: &Presheaf, uf: &mut [UnionFind]) -> Presheaf {
    let base = c.base();
    let labels: Vec<(usize, Vec<usize>)> = uf.iter_mut().map(|u| u.canonical_labels()).collect();
    let reps: Vec<Vec<usize>> = labels
        .iter()
        .map(|(count, lab)| {
            let mut r = vec![usize::MAX; *count];
            for (e, &l) in lab.iter().enumerate() {
                if r[l] == usize::MAX {
                    r[l] = e;
                }
            }
            r
        })
        .collect();
    let actions = (0..base.morphism_count())
        .map(|f| {
            let (a, b) = (base.source(f), base.target(f));
            reps[b].iter().map(|&e| labels[a].1[x.action(f)[e]]).collect()
        })
        .collect();
    Presheaf::from_actions(base, labels.iter().map(|l| l.0).collect(), actions).expect("congruence quotient")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{standard_shape, Shape};
    use rand::SeedableRng;

    #[test]
    fn presheaves_on_an_arrow_up_to_iso() {
        let c = PresheafCarrier::new("walking_arrow", standard_shape(Shape::WalkingArrow));
        // total size <= 2: (0,0) (1,0) (2,0) (1,1)  and (0,1) is impossible
        assert_eq!(c.objects_up_to(2).len(), 4);
    }

    #[test]
    fn random_presheaves_are_valid() {
        let c = PresheafCarrier::new("reflexive_pair", standard_shape(Shape::ReflexivePair));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = c.random_object(&mut rng, 3);
            p.validate(c.base()).unwrap();
        }
    }
}
