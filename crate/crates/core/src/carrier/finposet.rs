use std::sync::OnceLock;

use serde_json::{json, Value};

use super::finset::set_limit_parts;
use super::sets::{colimit_classes, SetEdge};
use super::{Carrier, Cocone, Cone, GraphDiagram};
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// A partial order on `{0, .., n-1}` stored as a dense `≤` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poset {
    n: usize,
    leq: Vec<bool>,
}

impl Poset {
    pub fn discrete(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        Poset { n, leq }
    }

    pub fn chain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                leq[i * n + j] = true;
            }
        }
        Poset { n, leq }
    }

    /// Reflexive-transitive closure of the given strict pairs; fails when
    /// the closure is not antisymmetric.
    pub fn from_relations(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = Self::discrete(n).leq;
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidMorphism(format!("order pair ({a},{b}) out of range")));
            }
            leq[a * n + b] = true;
        }
        warshall(n, &mut leq);
        let p = Poset { n, leq };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.leq.len() != n * n {
            return Err(Error::InvalidMorphism("order matrix has wrong size".into()));
        }
        for i in 0..n {
            if !self.le(i, i) {
                return Err(Error::InvalidMorphism("order is not reflexive".into()));
            }
            for j in 0..n {
                if i != j && self.le(i, j) && self.le(j, i) {
                    return Err(Error::InvalidMorphism("order is not antisymmetric".into()));
                }
                for k in 0..n {
                    if self.le(i, j) && self.le(j, k) && !self.le(i, k) {
                        return Err(Error::InvalidMorphism("order is not transitive".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    /// Strict pairs `a < b`, lexicographic.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.le(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Induced order on a subset given in increasing order.
    pub fn restrict(&self, elems: &[usize]) -> Poset {
        let m = elems.len();
        let mut leq = vec![false; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                leq[i * m + j] = self.le(a, b);
            }
        }
        Poset { n: m, leq }
    }

    pub fn permuted(&self, perm: &[usize]) -> Poset {
        // element i of self becomes perm[i]
        let n = self.n;
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[perm[a] * n + perm[b]] = self.le(a, b);
            }
        }
        Poset { n, leq }
    }

    /// Representatives of all posets of size `n` up to isomorphism, in a
    /// fixed order (by number of relations, then matrix).
    pub fn all_up_to_iso(n: usize) -> Vec<Poset> {
        static CACHE: [OnceLock<Vec<Poset>>; 6] = [const { OnceLock::new() }; 6];
        if n < CACHE.len() {
            return CACHE[n].get_or_init(|| enumerate_posets(n)).clone();
        }
        enumerate_posets(n)
    }

    fn canonical(&self) -> Poset {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = self.clone();
        permute_all(&mut perm, 0, &mut |p| {
            let q = self.permuted(p);
            if q.leq > best.leq {
                best = q;
            }
        });
        best
    }
}

fn permute_all(perm: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_all(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

fn enumerate_posets(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut choice = vec![0u8; pairs.len()];
    loop {
        let mut leq = Poset::discrete(n).leq;
        for (k, &(i, j)) in pairs.iter().enumerate() {
            match choice[k] {
                1 => leq[i * n + j] = true,
                2 => leq[j * n + i] = true,
                _ => {}
            }
        }
        let p = Poset { n, leq };
        if p.validate().is_ok() {
            seen.insert(p.canonical());
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                let mut out: Vec<Poset> = seen.into_iter().collect();
                out.sort_by_key(|p| (p.strict_pairs().len(), std::cmp::Reverse(p.leq.clone())));
                return out;
            }
            choice[k] += 1;
            if choice[k] < 3 {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn warshall(n: usize, leq: &mut [bool]) {
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monotone {
    pub source: Poset,
    pub target: Poset,
    pub map: Vec<usize>,
}

impl Monotone {
    pub fn new(source: Poset, target: Poset, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.n || map.iter().any(|&v| v >= target.n) {
            return Err(Error::InvalidMorphism("map has wrong shape".into()));
        }
        for a in 0..source.n {
            for b in 0..source.n {
                if source.le(a, b) && !target.le(map[a], map[b]) {
                    return Err(Error::InvalidMorphism(format!(
                        "map is not monotone at {a} <= {b}"
                    )));
                }
            }
        }
        Ok(Monotone { source, target, map })
    }
}

/// Finite posets and monotone maps.
#[derive(Clone, Debug)]
pub struct FinPosetCarrier {
    pub probe_bound: usize,
}

impl Default for FinPosetCarrier {
    fn default() -> Self {
        FinPosetCarrier { probe_bound: 3 }
    }
}

impl FinPosetCarrier {
    pub fn new(probe_bound: usize) -> Self {
        FinPosetCarrier { probe_bound }
    }
}

fn monotone_maps(x: &Poset, y: &Poset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(x.n);
    fn rec(x: &Poset, y: &Poset, map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = map.len();
        if k == x.n {
            out.push(map.clone());
            return;
        }
        for v in 0..y.n {
            let ok = (0..k).all(|a| (!x.le(a, k) || y.le(map[a], v)) && (!x.le(k, a) || y.le(v, map[a])));
            if ok {
                map.push(v);
                rec(x, y, map, out);
                map.pop();
            }
        }
    }
    rec(x, y, &mut map, &mut out);
    out
}

impl Carrier for FinPosetCarrier {
    type Obj = Poset;
    type Mor = Monotone;

    fn describe(&self) -> String {
        "finposet".into()
    }

    fn dom<'a>(&self, f: &'a Monotone) -> &'a Poset {
        &f.source
    }

    fn cod<'a>(&self, f: &'a Monotone) -> &'a Poset {
        &f.target
    }

    fn identity(&self, x: &Poset) -> Monotone {
        Monotone {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.n).collect(),
        }
    }

    fn compose(&self, g: &Monotone, f: &Monotone) -> Result<Monotone> {
        if f.target != g.source {
            return Err(Error::InvalidMorphism("monotone maps are not composable".into()));
        }
        Ok(Monotone {
            source: f.source.clone(),
            target: g.target.clone(),
            map: f.map.iter().map(|&x| g.map[x]).collect(),
        })
    }

    fn sorts(&self, x: &Poset) -> Vec<usize> {
        vec![x.n]
    }

    fn apply(&self, f: &Monotone, _sort: usize, e: usize) -> usize {
        f.map[e]
    }

    fn from_graded(&self, src: &Poset, tgt: &Poset, mut maps: Vec<Vec<usize>>) -> Result<Monotone> {
        Monotone::new(src.clone(), tgt.clone(), maps.pop().unwrap_or_default())
    }

    fn subobject(&self, x: &Poset, keep: &[Vec<bool>]) -> Option<Monotone> {
        let elems: Vec<usize> = (0..x.n).filter(|&e| keep[0][e]).collect();
        Some(Monotone {
            source: x.restrict(&elems),
            target: x.clone(),
            map: elems,
        })
    }

    fn hom(&self, x: &Poset, y: &Poset) -> Vec<Monotone> {
        monotone_maps(x, y)
            .into_iter()
            .map(|map| Monotone {
                source: x.clone(),
                target: y.clone(),
                map,
            })
            .collect()
    }

    fn limit(&self, d: &GraphDiagram<Self>) -> Result<Cone<Self>> {
        d.validate(self)?;
        let sizes: Vec<usize> = d.vertices.iter().map(|p| p.n).collect();
        let edges: Vec<SetEdge> = d.edges.iter().map(|(i, j, m)| (*i, *j, m.map.as_slice())).collect();
        let (tuples, legs) = set_limit_parts(&sizes, &edges);
        let m = tuples.len();
        let mut leq = vec![false; m * m];
        for a in 0..m {
            for b in 0..m {
                leq[a * m + b] = tuples[a]
                    .iter()
                    .zip(&tuples[b])
                    .zip(&d.vertices)
                    .all(|((&x, &y), p)| p.le(x, y));
            }
        }
        let apex = Poset { n: m, leq };
        Ok(Cone {
            legs: legs
                .into_iter()
                .zip(&d.vertices)
                .map(|(map, t)| Monotone {
                    source: apex.clone(),
                    target: t.clone(),
                    map,
                })
                .collect(),
            apex,
        })
    }

    fn colimit(&self, d: &GraphDiagram<Self>) -> Result<Cocone<Self>> {
        d.validate(self)?;
        let sizes: Vec<usize> = d.vertices.iter().map(|p| p.n).collect();
        let edges: Vec<SetEdge> = d.edges.iter().map(|(i, j, m)| (*i, *j, m.map.as_slice())).collect();
        let (count, labels) = colimit_classes(&sizes, &edges);
        let mut leq = Poset::discrete(count).leq;
        for (p, lab) in d.vertices.iter().zip(&labels) {
            for (a, b) in p.strict_pairs() {
                leq[lab[a] * count + lab[b]] = true;
            }
        }
        warshall(count, &mut leq);
        // Collapse order cycles to reach the poset reflection.
        let mut uf = UnionFind::new(count);
        let mut collapsed = false;
        for a in 0..count {
            for b in a + 1..count {
                if leq[a * count + b] && leq[b * count + a] {
                    collapsed |= uf.union(a, b);
                }
            }
        }
        let (final_count, relabel) = uf.canonical_labels();
        let mut fleq = Poset::discrete(final_count).leq;
        for a in 0..count {
            for b in 0..count {
                if leq[a * count + b] {
                    fleq[relabel[a] * final_count + relabel[b]] = true;
                }
            }
        }
        let apex = Poset {
            n: final_count,
            leq: fleq,
        };
        Ok(Cocone {
            legs: labels
                .into_iter()
                .zip(&d.vertices)
                .map(|(lab, s)| Monotone {
                    source: s.clone(),
                    target: apex.clone(),
                    map: lab.into_iter().map(|c| relabel[c]).collect(),
                })
                .collect(),
            apex,
            collapsed,
        })
    }

    fn probes(&self, x: &Poset) -> Vec<Monotone> {
        let mut out = Vec::new();
        for k in 1..=self.probe_bound {
            for p in Poset::all_up_to_iso(k) {
                out.extend(self.hom(&p, x));
            }
        }
        out
    }

    fn probes_exact(&self) -> bool {
        false
    }

    fn is_known_topos(&self) -> bool {
        false
    }

    fn limit_test_objects(&self) -> Vec<Poset> {
        vec![Poset::chain(1), Poset::chain(2)]
    }

    fn colimit_test_objects(&self) -> Vec<Poset> {
        vec![Poset::chain(2)]
    }

    fn obj_json(&self, x: &Poset) -> Value {
        let order: Vec<[usize; 2]> = x.strict_pairs().into_iter().map(|(a, b)| [a, b]).collect();
        json!({"size": x.n, "order": order})
    }

    fn mor_json(&self, f: &Monotone) -> Value {
        json!({"source": self.obj_json(&f.source), "target": self.obj_json(&f.target), "map": f.map})
    }

    fn obj_from_json(&self, v: &Value) -> Result<Poset> {
        let n = v["size"].as_u64().ok_or_else(|| Error::Json("poset needs a size".into()))? as usize;
        let pairs: Vec<(usize, usize)> = serde_json::from_value(v["order"].clone())?;
        Poset::from_relations(n, &pairs)
    }

    fn mor_from_json(&self, v: &Value) -> Result<Monotone> {
        let s = self.obj_from_json(&v["source"])?;
        let t = self.obj_from_json(&v["target"])?;
        let map: Vec<usize> = serde_json::from_value(v["map"].clone())?;
        Monotone::new(s, t, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::pushout;

    #[test]
    fn poset_counts_up_to_iso() {
        let counts: Vec<usize> = (0..=4).map(|n| Poset::all_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn pushout_of_two_chains_over_bottom_is_v_shaped() {
        let c = FinPosetCarrier::default();
        let point = Poset::chain(1);
        let two = Poset::chain(2);
        let f = Monotone::new(point.clone(), two.clone(), vec![0]).unwrap();
        let q = pushout(&c, &f, &f).unwrap();
        assert_eq!(q.apex.size(), 3);
        assert_eq!(q.apex.strict_pairs().len(), 2);
        assert!(!q.collapsed);
    }

    #[test]
    fn cyclic_quotient_collapses() {
        let c = FinPosetCarrier::default();
        let two = Poset::chain(2);
        let swap = Monotone::new(Poset::discrete(2), two.clone(), vec![1, 0]).unwrap();
        let id = Monotone::new(Poset::discrete(2), two, vec![0, 1]).unwrap();
        let q = crate::carrier::coequalizer(&c, &id, &swap).unwrap();
        assert_eq!(q.apex.size(), 1);
    }

    #[test]
    fn probe_counts() {
        let c = FinPosetCarrier::new(1);
        assert_eq!(c.probes(&Poset::chain(2)).len(), 2);
    }
}
