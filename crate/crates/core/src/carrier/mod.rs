//! Computable categories ("carriers") and constructions generic over them.
//!
//! Every carrier here is concrete over finite graded sets: an object has a
//! list of sorts with finitely many elements each, and a morphism acts on
//! elements sort by sort. That view drives images, subobjects, mediating
//! maps and the element-level instance generators.

mod diagram;
pub mod enumerate;
mod finposet;
mod finset;
pub mod iso;
mod pointed;
mod presheaf;
pub mod sets;
pub mod universal;

use std::fmt::Debug;
use std::hash::Hash;

use serde_json::Value;

use crate::error::{Error, Result};

pub use diagram::Diagram;
pub use enumerate::Enumerable;
pub use finposet::{FinPosetCarrier, Monotone, Poset};
pub use finset::{FinSetCarrier, Function};
pub use pointed::PointedCarrier;
pub use presheaf::{yoneda, yoneda_map, NatTrans, Presheaf, PresheafCarrier};
pub use universal::{Audited, AuditReport};

pub trait Carrier: Clone + Debug + Send + Sync {
    type Obj: Clone + Debug + Eq + Hash + Send + Sync;
    type Mor: Clone + Debug + Eq + Hash + Send + Sync;

    /// Selector string, e.g. `finset` or `presheaf:span`.
    fn describe(&self) -> String;

    fn dom<'a>(&self, f: &'a Self::Mor) -> &'a Self::Obj;
    fn cod<'a>(&self, f: &'a Self::Mor) -> &'a Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;

    /// Element counts per sort.
    fn sorts(&self, x: &Self::Obj) -> Vec<usize>;
    /// Action of `f` on element `e` of the given sort.
    fn apply(&self, f: &Self::Mor, sort: usize, e: usize) -> usize;
    /// Builds a morphism from its sortwise action, validating structure.
    fn from_graded(&self, src: &Self::Obj, tgt: &Self::Obj, maps: Vec<Vec<usize>>) -> Result<Self::Mor>;
    /// The sub-object on the kept elements with inclusion, or `None` when the
    /// kept elements are not closed under the structure.
    fn subobject(&self, x: &Self::Obj, keep: &[Vec<bool>]) -> Option<Self::Mor>;

    fn hom(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor>;
    fn limit(&self, d: &GraphDiagram<Self>) -> Result<Cone<Self>>;
    fn colimit(&self, d: &GraphDiagram<Self>) -> Result<Cocone<Self>>;

    /// Morphisms into `x` along which stability is tested.
    fn probes(&self, x: &Self::Obj) -> Vec<Self::Mor>;
    /// Whether pulling back along probes decides stability exactly.
    fn probes_exact(&self) -> bool;
    fn is_known_topos(&self) -> bool;
    fn limit_test_objects(&self) -> Vec<Self::Obj>;
    fn colimit_test_objects(&self) -> Vec<Self::Obj>;

    fn obj_json(&self, x: &Self::Obj) -> Value;
    fn mor_json(&self, f: &Self::Mor) -> Value;
    fn obj_from_json(&self, v: &Value) -> Result<Self::Obj>;
    fn mor_from_json(&self, v: &Value) -> Result<Self::Mor>;

    fn graded(&self, f: &Self::Mor) -> Vec<Vec<usize>> {
        self.sorts(self.dom(f))
            .iter()
            .enumerate()
            .map(|(s, &n)| (0..n).map(|e| self.apply(f, s, e)).collect())
            .collect()
    }

    fn total_size(&self, x: &Self::Obj) -> usize {
        self.sorts(x).iter().sum()
    }

    /// Unique `u: apex(d) -> lim` with `limit.legs[i] ∘ u = legs[i]`.
    fn mediate_limit(&self, limit: &Cone<Self>, apex: &Self::Obj, legs: &[Self::Mor]) -> Option<Self::Mor> {
        let lim_sorts = self.sorts(&limit.apex);
        let mut maps = Vec::with_capacity(lim_sorts.len());
        for (s, &n) in lim_sorts.iter().enumerate() {
            let index: std::collections::HashMap<Vec<usize>, usize> = (0..n)
                .map(|e| (limit.legs.iter().map(|l| self.apply(l, s, e)).collect(), e))
                .collect();
            let m = self.sorts(apex)[s];
            let mut map = Vec::with_capacity(m);
            for e in 0..m {
                let key: Vec<usize> = legs.iter().map(|l| self.apply(l, s, e)).collect();
                map.push(*index.get(&key)?);
            }
            maps.push(map);
        }
        self.from_graded(apex, &limit.apex, maps).ok()
    }

    /// Unique `u: colim -> apex` with `u ∘ colimit.legs[i] = legs[i]`.
    fn mediate_colimit(&self, colimit: &Cocone<Self>, apex: &Self::Obj, legs: &[Self::Mor]) -> Option<Self::Mor> {
        let q_sorts = self.sorts(&colimit.apex);
        let mut maps: Vec<Vec<Option<usize>>> = q_sorts.iter().map(|&n| vec![None; n]).collect();
        for (leg, given) in colimit.legs.iter().zip(legs) {
            let src_sorts = self.sorts(self.dom(leg));
            for (s, &n) in src_sorts.iter().enumerate() {
                for e in 0..n {
                    let q = self.apply(leg, s, e);
                    let v = self.apply(given, s, e);
                    match maps[s][q] {
                        None => maps[s][q] = Some(v),
                        Some(w) if w != v => return None,
                        _ => {}
                    }
                }
            }
        }
        let maps: Option<Vec<Vec<usize>>> = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        self.from_graded(&colimit.apex, apex, maps?).ok()
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let src = self.sorts(self.dom(f));
        let tgt = self.sorts(self.cod(f));
        if src != tgt {
            return None;
        }
        let mut maps = Vec::with_capacity(src.len());
        for (s, &n) in src.iter().enumerate() {
            let mut inv = vec![usize::MAX; n];
            for e in 0..n {
                let v = self.apply(f, s, e);
                if inv[v] != usize::MAX {
                    return None;
                }
                inv[v] = e;
            }
            maps.push(inv);
        }
        self.from_graded(self.cod(f), self.dom(f), maps).ok()
    }
}

/// A diagram indexed by a finite graph.
#[derive(Clone, Debug)]
pub struct GraphDiagram<C: Carrier + ?Sized> {
    pub vertices: Vec<C::Obj>,
    /// `(from, to, morphism)`
    pub edges: Vec<(usize, usize, C::Mor)>,
}

impl<C: Carrier> GraphDiagram<C> {
    pub fn new(vertices: Vec<C::Obj>, edges: Vec<(usize, usize, C::Mor)>) -> Self {
        GraphDiagram { vertices, edges }
    }

    pub fn discrete(vertices: Vec<C::Obj>) -> Self {
        GraphDiagram {
            vertices,
            edges: Vec::new(),
        }
    }

    pub fn validate(&self, c: &C) -> Result<()> {
        for (i, j, m) in &self.edges {
            if c.dom(m) != &self.vertices[*i] || c.cod(m) != &self.vertices[*j] {
                return Err(Error::InvalidMorphism(format!("edge {i}->{j} has wrong endpoints")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone<C: Carrier + ?Sized> {
    pub apex: C::Obj,
    pub legs: Vec<C::Mor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocone<C: Carrier + ?Sized> {
    pub apex: C::Obj,
    pub legs: Vec<C::Mor>,
    /// Set when a poset quotient had to collapse order cycles.
    pub collapsed: bool,
}

pub fn terminal<C: Carrier>(c: &C) -> Result<C::Obj> {
    Ok(c.limit(&GraphDiagram::discrete(Vec::new()))?.apex)
}

pub fn initial<C: Carrier>(c: &C) -> Result<C::Obj> {
    Ok(c.colimit(&GraphDiagram::discrete(Vec::new()))?.apex)
}

/// True when every morphism into the initial object is invertible.
pub fn is_strict_initial<C: Carrier + Enumerable>(c: &C, max_size: usize) -> Result<bool> {
    let zero = initial(c)?;
    for x in c.objects_up_to(max_size) {
        for f in c.hom(&x, &zero) {
            if c.inverse(&f).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn product<C: Carrier>(c: &C, xs: &[C::Obj]) -> Result<Cone<C>> {
    c.limit(&GraphDiagram::discrete(xs.to_vec()))
}

pub fn coproduct<C: Carrier>(c: &C, xs: &[C::Obj]) -> Result<Cocone<C>> {
    c.colimit(&GraphDiagram::discrete(xs.to_vec()))
}

/// Pullback of `f: X -> Z` and `g: Y -> Z`; the cone has legs to X, Y, Z.
pub fn pullback<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<Cone<C>> {
    if c.cod(f) != c.cod(g) {
        return Err(Error::InvalidMorphism("pullback of maps with different targets".into()));
    }
    c.limit(&GraphDiagram::new(
        vec![c.dom(f).clone(), c.dom(g).clone(), c.cod(f).clone()],
        vec![(0, 2, f.clone()), (1, 2, g.clone())],
    ))
}

/// Pushout of `f: Z -> X` and `g: Z -> Y`; legs from Z, X, Y.
pub fn pushout<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<Cocone<C>> {
    if c.dom(f) != c.dom(g) {
        return Err(Error::InvalidMorphism("pushout of maps with different sources".into()));
    }
    c.colimit(&GraphDiagram::new(
        vec![c.dom(f).clone(), c.cod(f).clone(), c.cod(g).clone()],
        vec![(0, 1, f.clone()), (0, 2, g.clone())],
    ))
}

/// Legs to X and Y.
pub fn equalizer<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<Cone<C>> {
    parallel_check(c, f, g)?;
    c.limit(&GraphDiagram::new(
        vec![c.dom(f).clone(), c.cod(f).clone()],
        vec![(0, 1, f.clone()), (0, 1, g.clone())],
    ))
}

/// Legs from X and Y.
pub fn coequalizer<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<Cocone<C>> {
    parallel_check(c, f, g)?;
    c.colimit(&GraphDiagram::new(
        vec![c.dom(f).clone(), c.cod(f).clone()],
        vec![(0, 1, f.clone()), (0, 1, g.clone())],
    ))
}

fn parallel_check<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<()> {
    if c.dom(f) != c.dom(g) || c.cod(f) != c.cod(g) {
        return Err(Error::InvalidMorphism("maps are not parallel".into()));
    }
    Ok(())
}

/// `(P, p1, p2)` with `f p1 = f p2`.
pub fn kernel_pair<C: Carrier>(c: &C, f: &C::Mor) -> Result<(C::Obj, C::Mor, C::Mor)> {
    let mut cone = pullback(c, f, f)?;
    cone.legs.truncate(2);
    let p2 = cone.legs.pop().expect("two legs");
    let p1 = cone.legs.pop().expect("two legs");
    Ok((cone.apex, p1, p2))
}

pub fn cokernel_pair<C: Carrier>(c: &C, f: &C::Mor) -> Result<(C::Obj, C::Mor, C::Mor)> {
    let cocone = pushout(c, f, f)?;
    Ok((cocone.apex, cocone.legs[1].clone(), cocone.legs[2].clone()))
}

/// Monic iff the kernel pair projections coincide.
pub fn is_mono<C: Carrier>(c: &C, f: &C::Mor) -> Result<bool> {
    let (_, p1, p2) = kernel_pair(c, f)?;
    Ok(p1 == p2)
}

/// Epic iff the cokernel pair injections coincide.
pub fn is_epi<C: Carrier>(c: &C, f: &C::Mor) -> Result<bool> {
    let (_, q1, q2) = cokernel_pair(c, f)?;
    Ok(q1 == q2)
}

pub fn is_iso<C: Carrier>(c: &C, f: &C::Mor) -> bool {
    c.inverse(f).is_some()
}

/// Regular epi iff the comparison from the coequalizer of the kernel pair
/// to the codomain is invertible.
pub fn is_regular_epi<C: Carrier>(c: &C, e: &C::Mor) -> Result<bool> {
    let (_, p1, p2) = kernel_pair(c, e)?;
    let q = coequalizer(c, &p1, &p2)?;
    let ep1 = c.compose(e, &p1)?;
    let Some(u) = c.mediate_colimit(&q, c.cod(e), &[ep1, e.clone()]) else {
        return Ok(false);
    };
    Ok(is_iso(c, &u))
}

/// Factorization `f = m ∘ e` through the set-theoretic image.
pub fn image<C: Carrier>(c: &C, f: &C::Mor) -> Result<(C::Mor, C::Mor)> {
    let tgt = c.sorts(c.cod(f));
    let mut keep: Vec<Vec<bool>> = tgt.iter().map(|&n| vec![false; n]).collect();
    for (s, map) in c.graded(f).iter().enumerate() {
        for &v in map {
            keep[s][v] = true;
        }
    }
    let m = c
        .subobject(c.cod(f), &keep)
        .ok_or_else(|| Error::Unsupported("image is not a sub-object".into()))?;
    let e = factor_through_mono(c, f, &m)?
        .ok_or_else(|| Error::Unsupported("map does not factor through its image".into()))?;
    Ok((e, m))
}

/// The unique `g` with `m ∘ g = f`, if `f` lands in the image of `m`.
pub fn factor_through_mono<C: Carrier>(c: &C, f: &C::Mor, m: &C::Mor) -> Result<Option<C::Mor>> {
    if c.cod(f) != c.cod(m) {
        return Err(Error::InvalidMorphism("factorization through a mono with another target".into()));
    }
    let msorts = c.sorts(c.dom(m));
    let tsorts = c.sorts(c.cod(m));
    let mut maps = Vec::with_capacity(msorts.len());
    for (s, map) in c.graded(f).into_iter().enumerate() {
        let mut pre = vec![usize::MAX; tsorts[s]];
        for e in 0..msorts[s] {
            pre[c.apply(m, s, e)] = e;
        }
        let mut out = Vec::with_capacity(map.len());
        for v in map {
            if pre[v] == usize::MAX {
                return Ok(None);
            }
            out.push(pre[v]);
        }
        maps.push(out);
    }
    Ok(c.from_graded(c.dom(f), c.dom(m), maps).ok())
}

/// Pulls `f: X -> Z` back along `g: Y -> Z`: returns the projection `P -> Y`
/// and the cone `(P -> X, P -> Y, P -> Z)`.
pub fn pullback_along<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<(C::Mor, Cone<C>)> {
    let cone = pullback(c, f, g)?;
    Ok((cone.legs[1].clone(), cone))
}

/// Pairing `⟨f, g⟩` into a chosen product cone.
pub fn pairing<C: Carrier>(c: &C, prod: &Cone<C>, maps: &[C::Mor]) -> Result<C::Mor> {
    let apex = c.dom(&maps[0]).clone();
    c.mediate_limit(prod, &apex, maps)
        .ok_or_else(|| Error::InvalidMorphism("maps do not form a cone over the product".into()))
}

/// Copairing out of a chosen coproduct cocone.
pub fn copairing<C: Carrier>(c: &C, coprod: &Cocone<C>, maps: &[C::Mor]) -> Result<C::Mor> {
    let apex = c.cod(&maps[0]).clone();
    c.mediate_colimit(coprod, &apex, maps)
        .ok_or_else(|| Error::InvalidMorphism("maps do not form a cocone under the coproduct".into()))
}

/// Whether the legs of a cocone are jointly surjective on elements.
pub fn jointly_surjective<C: Carrier>(c: &C, target: &C::Obj, legs: &[C::Mor]) -> bool {
    let sorts = c.sorts(target);
    let mut hit: Vec<Vec<bool>> = sorts.iter().map(|&n| vec![false; n]).collect();
    for l in legs {
        for (s, map) in c.graded(l).iter().enumerate() {
            for &v in map {
                hit[s][v] = true;
            }
        }
    }
    hit.iter().all(|h| h.iter().all(|&b| b))
}
