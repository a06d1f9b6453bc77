use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::sets::{colimit_classes, limit_tuples, tuple_index, SetEdge};
use super::{Carrier, Cocone, Cone, GraphDiagram};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

/// A functor `C^op -> FinSet` for a base category held by the carrier.
/// `actions[f]` is `X(f): X(b) -> X(a)` for `f: a -> b`, stored for every
/// morphism of the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Presheaf {
    sizes: Vec<usize>,
    actions: Vec<Vec<usize>>,
}

impl Presheaf {
    /// Extends generator actions along stored paths and checks functoriality.
    pub fn from_generators(base: &FinCategory, sizes: Vec<usize>, gens: &BTreeMap<usize, Vec<usize>>) -> Result<Self> {
        if sizes.len() != base.object_count() {
            return Err(Error::InvalidMorphism("presheaf needs one set per object".into()));
        }
        for &g in base.generators() {
            let act = gens.get(&g).ok_or_else(|| {
                Error::InvalidMorphism(format!("missing action of {}", base.morphism(g).name))
            })?;
            let (a, b) = (base.source(g), base.target(g));
            if act.len() != sizes[b] || act.iter().any(|&v| v >= sizes[a]) {
                return Err(Error::InvalidMorphism(format!(
                    "action of {} is not a function X({}) -> X({})",
                    base.morphism(g).name,
                    base.object_name(b),
                    base.object_name(a)
                )));
            }
        }
        let mut actions = Vec::with_capacity(base.morphism_count());
        for f in 0..base.morphism_count() {
            let info = base.morphism(f);
            // X(g_k ... g_1) = X(g_1) ... X(g_k): apply the last generator first.
            let mut map: Vec<usize> = (0..sizes[info.target]).collect();
            for &g in info.path.iter().rev() {
                let act = &gens[&g];
                for v in map.iter_mut() {
                    *v = act[*v];
                }
            }
            actions.push(map);
        }
        let p = Presheaf { sizes, actions };
        p.validate(base)?;
        Ok(p)
    }

    /// Builds from actions for every morphism.
    pub fn from_actions(base: &FinCategory, sizes: Vec<usize>, actions: Vec<Vec<usize>>) -> Result<Self> {
        let p = Presheaf { sizes, actions };
        p.validate(base)?;
        Ok(p)
    }

    pub fn validate(&self, base: &FinCategory) -> Result<()> {
        if self.sizes.len() != base.object_count() || self.actions.len() != base.morphism_count() {
            return Err(Error::InvalidMorphism("presheaf does not match its base".into()));
        }
        for f in 0..base.morphism_count() {
            let (a, b) = (base.source(f), base.target(f));
            let act = &self.actions[f];
            if act.len() != self.sizes[b] || act.iter().any(|&v| v >= self.sizes[a]) {
                return Err(Error::InvalidMorphism(format!(
                    "action of {} has wrong shape",
                    base.morphism(f).name
                )));
            }
            if base.is_identity(f) && act.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::InvalidMorphism("identity acts non-trivially".into()));
            }
        }
        for f in 0..base.morphism_count() {
            for g in 0..base.morphism_count() {
                let Some(gf) = base.compose(g, f) else { continue };
                // X(g f) = X(f) X(g)
                let ok = (0..self.sizes[base.target(g)])
                    .all(|e| self.actions[f][self.actions[g][e]] == self.actions[gf][e]);
                if !ok {
                    return Err(Error::InvalidMorphism(format!(
                        "presheaf is not functorial on {}.{}",
                        base.morphism(g).name,
                        base.morphism(f).name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, a: usize) -> usize {
        self.sizes[a]
    }

    pub fn action(&self, f: usize) -> &[usize] {
        &self.actions[f]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.actions
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Relabels elements: `perm[a][old] = new`.
    pub fn permuted(&self, base: &FinCategory, perm: &[Vec<usize>]) -> Presheaf {
        let mut actions = vec![Vec::new(); self.actions.len()];
        for (f, slot) in actions.iter_mut().enumerate() {
            let (a, b) = (base.source(f), base.target(f));
            let mut act = vec![0; self.sizes[b]];
            for (old, &v) in self.actions[f].iter().enumerate() {
                act[perm[b][old]] = perm[a][v];
            }
            *slot = act;
        }
        Presheaf {
            sizes: self.sizes.clone(),
            actions,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NatTrans {
    pub source: Presheaf,
    pub target: Presheaf,
    pub components: Vec<Vec<usize>>,
}

impl NatTrans {
    pub fn new(base: &FinCategory, source: Presheaf, target: Presheaf, components: Vec<Vec<usize>>) -> Result<Self> {
        if components.len() != base.object_count() {
            return Err(Error::InvalidMorphism("one component per object required".into()));
        }
        for (a, comp) in components.iter().enumerate() {
            if comp.len() != source.sizes[a] || comp.iter().any(|&v| v >= target.sizes[a]) {
                return Err(Error::InvalidMorphism(format!(
                    "component at {} has wrong shape",
                    base.object_name(a)
                )));
            }
        }
        for f in 0..base.morphism_count() {
            let (a, b) = (base.source(f), base.target(f));
            for e in 0..source.sizes[b] {
                if components[a][source.actions[f][e]] != target.actions[f][components[b][e]] {
                    return Err(Error::InvalidMorphism(format!(
                        "naturality fails at {}",
                        base.morphism(f).name
                    )));
                }
            }
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }
}

/// The representable presheaf `Hom(-, a)`; elements of `Y(a)(b)` follow the
/// order of `base.hom(b, a)`.
pub fn yoneda(base: &FinCategory, a: usize) -> Presheaf {
    let homs: Vec<Vec<usize>> = (0..base.object_count()).map(|b| base.hom(b, a)).collect();
    let sizes = homs.iter().map(Vec::len).collect();
    let actions = (0..base.morphism_count())
        .map(|f| {
            let src = base.source(f);
            homs[base.target(f)]
                .iter()
                .map(|&h| {
                    let hf = base.compose(h, f).expect("composable");
                    homs[src].iter().position(|&k| k == hf).expect("hom-set closed")
                })
                .collect()
        })
        .collect();
    Presheaf { sizes, actions }
}

/// `Y(f): Y(a) -> Y(a')` by postcomposition.
pub fn yoneda_map(base: &FinCategory, f: usize) -> NatTrans {
    let (a, a2) = (base.source(f), base.target(f));
    let (ya, ya2) = (yoneda(base, a), yoneda(base, a2));
    let components = (0..base.object_count())
        .map(|b| {
            let target_hom = base.hom(b, a2);
            base.hom(b, a)
                .iter()
                .map(|&h| {
                    let fh = base.compose(f, h).expect("composable");
                    target_hom.iter().position(|&k| k == fh).expect("hom-set closed")
                })
                .collect()
        })
        .collect();
    NatTrans {
        source: ya,
        target: ya2,
        components,
    }
}

/// The map `Y(a) -> X` classifying `x ∈ X(a)`.
pub fn element_map(base: &FinCategory, x: &Presheaf, a: usize, elem: usize) -> NatTrans {
    let components = (0..base.object_count())
        .map(|b| base.hom(b, a).iter().map(|&h| x.actions[h][elem]).collect())
        .collect();
    NatTrans {
        source: yoneda(base, a),
        target: x.clone(),
        components,
    }
}

/// `T_a(b)` = subsets of `Hom(a, b)`, so that maps `X -> T_a` are subsets of `X(a)`.
fn subset_test_object(base: &FinCategory, a: usize) -> Presheaf {
    let homs: Vec<Vec<usize>> = (0..base.object_count()).map(|b| base.hom(a, b)).collect();
    let sizes: Vec<usize> = homs.iter().map(|h| 1usize << h.len()).collect();
    let actions = (0..base.morphism_count())
        .map(|f| {
            let (b2, b) = (base.source(f), base.target(f));
            (0..sizes[b])
                .map(|mask| {
                    let mut out = 0usize;
                    for (i, &h) in homs[b2].iter().enumerate() {
                        let fh = base.compose(f, h).expect("composable");
                        let j = homs[b].iter().position(|&k| k == fh).expect("hom-set closed");
                        if mask >> j & 1 == 1 {
                            out |= 1 << i;
                        }
                    }
                    out
                })
                .collect()
        })
        .collect();
    Presheaf { sizes, actions }
}

/// Presheaves on a fixed finite base category.
#[derive(Clone, Debug)]
pub struct PresheafCarrier {
    name: String,
    base: Arc<FinCategory>,
    representables: Arc<Vec<Presheaf>>,
    subset_objects: Arc<Vec<Presheaf>>,
}

impl PresheafCarrier {
    pub fn new(name: &str, base: FinCategory) -> Self {
        let representables = (0..base.object_count()).map(|a| yoneda(&base, a)).collect();
        let subset_objects = (0..base.object_count())
            .map(|a| subset_test_object(&base, a))
            .collect();
        PresheafCarrier {
            name: name.to_string(),
            base: Arc::new(base),
            representables: Arc::new(representables),
            subset_objects: Arc::new(subset_objects),
        }
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn representable(&self, a: usize) -> &Presheaf {
        &self.representables[a]
    }

    pub fn element_map(&self, x: &Presheaf, a: usize, elem: usize) -> NatTrans {
        element_map(&self.base, x, a, elem)
    }

    pub fn nat(&self, source: Presheaf, target: Presheaf, components: Vec<Vec<usize>>) -> Result<NatTrans> {
        NatTrans::new(&self.base, source, target, components)
    }

    pub fn presheaf(&self, sizes: Vec<usize>, gens: &BTreeMap<usize, Vec<usize>>) -> Result<Presheaf> {
        Presheaf::from_generators(&self.base, sizes, gens)
    }

    /// Generator actions keyed by morphism index.
    pub fn generator_actions(&self, x: &Presheaf) -> BTreeMap<usize, Vec<usize>> {
        self.base
            .generators()
            .iter()
            .map(|&g| (g, x.actions[g].clone()))
            .collect()
    }

    /// All natural transformations, found by propagating naturality from
    /// a few branching elements.
    fn nat_all(&self, x: &Presheaf, y: &Presheaf) -> Vec<Vec<Vec<usize>>> {
        let base = &*self.base;
        let n = base.object_count();
        if (0..n).any(|a| x.sizes[a] > 0 && y.sizes[a] == 0) {
            return Vec::new();
        }
        let into: Vec<Vec<usize>> = (0..n).map(|b| base.into_object(b)).collect();
        // Branch first on elements generating the most others.
        let mut order: Vec<(usize, usize, usize)> = Vec::new();
        for b in 0..n {
            for e in 0..x.sizes[b] {
                let mut reach: Vec<(usize, usize)> = into[b]
                    .iter()
                    .map(|&f| (base.source(f), x.actions[f][e]))
                    .collect();
                reach.sort_unstable();
                reach.dedup();
                order.push((reach.len(), b, e));
            }
        }
        order.sort_by(|p, q| q.0.cmp(&p.0).then((p.1, p.2).cmp(&(q.1, q.2))));
        let mut comp: Vec<Vec<Option<usize>>> = (0..n).map(|a| vec![None; x.sizes[a]]).collect();
        let mut trail: Vec<(usize, usize)> = Vec::new();
        let mut out = Vec::new();

        fn assign(
            base: &FinCategory,
            into: &[Vec<usize>],
            x: &Presheaf,
            y: &Presheaf,
            comp: &mut [Vec<Option<usize>>],
            trail: &mut Vec<(usize, usize)>,
            b: usize,
            e: usize,
            v: usize,
        ) -> bool {
            let mut stack = vec![(b, e, v)];
            while let Some((b, e, v)) = stack.pop() {
                match comp[b][e] {
                    Some(w) if w != v => return false,
                    Some(_) => continue,
                    None => {}
                }
                comp[b][e] = Some(v);
                trail.push((b, e));
                for &f in &into[b] {
                    stack.push((base.source(f), x.actions[f][e], y.actions[f][v]));
                }
            }
            true
        }

        #[allow(clippy::too_many_arguments)]
        fn rec(
            base: &FinCategory,
            into: &[Vec<usize>],
            x: &Presheaf,
            y: &Presheaf,
            order: &[(usize, usize, usize)],
            pos: usize,
            comp: &mut Vec<Vec<Option<usize>>>,
            trail: &mut Vec<(usize, usize)>,
            out: &mut Vec<Vec<Vec<usize>>>,
        ) {
            let mut pos = pos;
            while pos < order.len() && comp[order[pos].1][order[pos].2].is_some() {
                pos += 1;
            }
            if pos == order.len() {
                out.push(comp.iter().map(|c| c.iter().map(|v| v.expect("assigned")).collect()).collect());
                return;
            }
            let (_, b, e) = order[pos];
            for v in 0..y.sizes[b] {
                let mark = trail.len();
                if assign(base, into, x, y, comp, trail, b, e, v) {
                    rec(base, into, x, y, order, pos + 1, comp, trail, out);
                }
                while trail.len() > mark {
                    let (b, e) = trail.pop().expect("trail");
                    comp[b][e] = None;
                }
            }
        }

        rec(base, &into, x, y, &order, 0, &mut comp, &mut trail, &mut out);
        out.sort();
        out
    }
}

impl Carrier for PresheafCarrier {
    type Obj = Presheaf;
    type Mor = NatTrans;

    fn describe(&self) -> String {
        format!("presheaf:{}", self.name)
    }

    fn dom<'a>(&self, f: &'a NatTrans) -> &'a Presheaf {
        &f.source
    }

    fn cod<'a>(&self, f: &'a NatTrans) -> &'a Presheaf {
        &f.target
    }

    fn identity(&self, x: &Presheaf) -> NatTrans {
        NatTrans {
            source: x.clone(),
            target: x.clone(),
            components: x.sizes.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    fn compose(&self, g: &NatTrans, f: &NatTrans) -> Result<NatTrans> {
        if f.target != g.source {
            return Err(Error::InvalidMorphism("natural transformations are not composable".into()));
        }
        Ok(NatTrans {
            source: f.source.clone(),
            target: g.target.clone(),
            components: f
                .components
                .iter()
                .zip(&g.components)
                .map(|(fc, gc)| fc.iter().map(|&v| gc[v]).collect())
                .collect(),
        })
    }

    fn sorts(&self, x: &Presheaf) -> Vec<usize> {
        x.sizes.clone()
    }

    fn apply(&self, f: &NatTrans, sort: usize, e: usize) -> usize {
        f.components[sort][e]
    }

    fn graded(&self, f: &NatTrans) -> Vec<Vec<usize>> {
        f.components.clone()
    }

    fn from_graded(&self, src: &Presheaf, tgt: &Presheaf, maps: Vec<Vec<usize>>) -> Result<NatTrans> {
        NatTrans::new(&self.base, src.clone(), tgt.clone(), maps)
    }

    fn subobject(&self, x: &Presheaf, keep: &[Vec<bool>]) -> Option<NatTrans> {
        let base = &*self.base;
        for f in 0..base.morphism_count() {
            let (a, b) = (base.source(f), base.target(f));
            for e in 0..x.sizes[b] {
                if keep[b][e] && !keep[a][x.actions[f][e]] {
                    return None;
                }
            }
        }
        let elems: Vec<Vec<usize>> = (0..base.object_count())
            .map(|a| (0..x.sizes[a]).filter(|&e| keep[a][e]).collect())
            .collect();
        let mut index: Vec<Vec<usize>> = x.sizes.iter().map(|&n| vec![usize::MAX; n]).collect();
        for (a, es) in elems.iter().enumerate() {
            for (i, &e) in es.iter().enumerate() {
                index[a][e] = i;
            }
        }
        let actions = (0..base.morphism_count())
            .map(|f| {
                let a = base.source(f);
                elems[base.target(f)]
                    .iter()
                    .map(|&e| index[a][x.actions[f][e]])
                    .collect()
            })
            .collect();
        let sub = Presheaf {
            sizes: elems.iter().map(Vec::len).collect(),
            actions,
        };
        Some(NatTrans {
            source: sub,
            target: x.clone(),
            components: elems,
        })
    }

    fn hom(&self, x: &Presheaf, y: &Presheaf) -> Vec<NatTrans> {
        self.nat_all(x, y)
            .into_iter()
            .map(|components| NatTrans {
                source: x.clone(),
                target: y.clone(),
                components,
            })
            .collect()
    }

    fn limit(&self, d: &GraphDiagram<Self>) -> Result<Cone<Self>> {
        d.validate(self)?;
        let base = &*self.base;
        let n = base.object_count();
        let mut tuples = Vec::with_capacity(n);
        for a in 0..n {
            let sizes: Vec<usize> = d.vertices.iter().map(|p| p.sizes[a]).collect();
            let edges: Vec<SetEdge> = d
                .edges
                .iter()
                .map(|(i, j, m)| (*i, *j, m.components[a].as_slice()))
                .collect();
            tuples.push(limit_tuples(&sizes, &edges));
        }
        let indices: Vec<_> = tuples.iter().map(|t| tuple_index(t)).collect();
        let actions = (0..base.morphism_count())
            .map(|f| {
                let (a, b) = (base.source(f), base.target(f));
                tuples[b]
                    .iter()
                    .map(|t| {
                        let image: Vec<usize> = t
                            .iter()
                            .zip(&d.vertices)
                            .map(|(&e, p)| p.actions[f][e])
                            .collect();
                        indices[a][&image]
                    })
                    .collect()
            })
            .collect();
        let apex = Presheaf {
            sizes: tuples.iter().map(Vec::len).collect(),
            actions,
        };
        let legs = d
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| NatTrans {
                source: apex.clone(),
                target: v.clone(),
                components: tuples.iter().map(|ts| ts.iter().map(|t| t[i]).collect()).collect(),
            })
            .collect();
        Ok(Cone { apex, legs })
    }

    fn colimit(&self, d: &GraphDiagram<Self>) -> Result<Cocone<Self>> {
        d.validate(self)?;
        let base = &*self.base;
        let n = base.object_count();
        let mut counts = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for a in 0..n {
            let sizes: Vec<usize> = d.vertices.iter().map(|p| p.sizes[a]).collect();
            let edges: Vec<SetEdge> = d
                .edges
                .iter()
                .map(|(i, j, m)| (*i, *j, m.components[a].as_slice()))
                .collect();
            let (c, l) = colimit_classes(&sizes, &edges);
            counts.push(c);
            labels.push(l);
        }
        // A representative (vertex, element) per class.
        let reps: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|a| {
                let mut r = vec![(usize::MAX, 0); counts[a]];
                for (i, lab) in labels[a].iter().enumerate() {
                    for (e, &c) in lab.iter().enumerate() {
                        if r[c].0 == usize::MAX {
                            r[c] = (i, e);
                        }
                    }
                }
                r
            })
            .collect();
        let actions = (0..base.morphism_count())
            .map(|f| {
                let (a, b) = (base.source(f), base.target(f));
                reps[b]
                    .iter()
                    .map(|&(i, e)| labels[a][i][d.vertices[i].actions[f][e]])
                    .collect()
            })
            .collect();
        let apex = Presheaf { sizes: counts, actions };
        let legs = d
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| NatTrans {
                source: v.clone(),
                target: apex.clone(),
                components: (0..n).map(|a| labels[a][i].clone()).collect(),
            })
            .collect();
        Ok(Cocone {
            apex,
            legs,
            collapsed: false,
        })
    }

    fn probes(&self, x: &Presheaf) -> Vec<NatTrans> {
        let mut out = Vec::new();
        for a in 0..self.base.object_count() {
            for e in 0..x.sizes[a] {
                out.push(self.element_map(x, a, e));
            }
        }
        out
    }

    fn probes_exact(&self) -> bool {
        true
    }

    fn is_known_topos(&self) -> bool {
        true
    }

    fn limit_test_objects(&self) -> Vec<Presheaf> {
        self.representables.to_vec()
    }

    fn colimit_test_objects(&self) -> Vec<Presheaf> {
        self.subset_objects.to_vec()
    }

    fn obj_json(&self, x: &Presheaf) -> Value {
        let base = &*self.base;
        let sizes: BTreeMap<&str, usize> = (0..base.object_count())
            .map(|a| (base.object_name(a), x.sizes[a]))
            .collect();
        let actions: BTreeMap<&str, &Vec<usize>> = base
            .generators()
            .iter()
            .map(|&g| (base.morphism(g).name.as_str(), &x.actions[g]))
            .collect();
        json!({"sizes": sizes, "actions": actions})
    }

    fn mor_json(&self, f: &NatTrans) -> Value {
        let base = &*self.base;
        let comps: BTreeMap<&str, &Vec<usize>> = (0..base.object_count())
            .map(|a| (base.object_name(a), &f.components[a]))
            .collect();
        json!({"source": self.obj_json(&f.source), "target": self.obj_json(&f.target), "components": comps})
    }

    fn obj_from_json(&self, v: &Value) -> Result<Presheaf> {
        let base = &*self.base;
        let sizes_map: BTreeMap<String, usize> = serde_json::from_value(v["sizes"].clone())?;
        let acts: BTreeMap<String, Vec<usize>> = serde_json::from_value(v["actions"].clone())?;
        let sizes = (0..base.object_count())
            .map(|a| {
                sizes_map
                    .get(base.object_name(a))
                    .copied()
                    .ok_or_else(|| Error::Json(format!("missing size of {}", base.object_name(a))))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut gens = BTreeMap::new();
        for (name, act) in acts {
            let g = base
                .morphism_index(&name)
                .ok_or_else(|| Error::Json(format!("unknown arrow {name}")))?;
            gens.insert(g, act);
        }
        Presheaf::from_generators(base, sizes, &gens)
    }

    fn mor_from_json(&self, v: &Value) -> Result<NatTrans> {
        let base = &*self.base;
        let s = self.obj_from_json(&v["source"])?;
        let t = self.obj_from_json(&v["target"])?;
        let comps: BTreeMap<String, Vec<usize>> = serde_json::from_value(v["components"].clone())?;
        let components = (0..base.object_count())
            .map(|a| {
                comps
                    .get(base.object_name(a))
                    .cloned()
                    .ok_or_else(|| Error::Json(format!("missing component at {}", base.object_name(a))))
            })
            .collect::<Result<Vec<_>>>()?;
        NatTrans::new(base, s, t, components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{standard_shape, Shape};

    fn arrow() -> PresheafCarrier {
        PresheafCarrier::new("walking_arrow", standard_shape(Shape::WalkingArrow))
    }

    #[test]
    fn representable_values_read_hom_sets() {
        let c = arrow();
        let yb = c.representable(1);
        assert_eq!(yb.sizes(), &[1, 1]);
        let two = PresheafCarrier::new("d2", standard_shape(Shape::Discrete(2)));
        assert_eq!(two.representable(0).sizes(), &[1, 0]);
    }

    #[test]
    fn yoneda_maps_are_natural() {
        let base = standard_shape(Shape::ReflexivePair);
        for f in 0..base.morphism_count() {
            let m = yoneda_map(&base, f);
            NatTrans::new(&base, m.source.clone(), m.target.clone(), m.components.clone()).unwrap();
        }
    }

    #[test]
    fn representable_probe_counts() {
        let c = arrow();
        let yb = c.representable(1).clone();
        let probes = c.probes(&yb);
        assert_eq!(probes.len(), 2);
        assert_eq!(probes[0].source, *c.representable(0));
    }

    #[test]
    fn maps_out_of_representable_are_elements() {
        let c = arrow();
        let yb = c.representable(1).clone();
        let t = c.colimit_test_objects()[0].clone();
        assert_eq!(c.hom(&yb, &t).len(), t.size(1));
    }

    #[test]
    fn maps_into_subset_object_are_subsets() {
        let c = arrow();
        let mut gens = BTreeMap::new();
        gens.insert(c.base().morphism_index("f").unwrap(), vec![0, 1, 1]);
        let x = c.presheaf(vec![2, 3], &gens).unwrap();
        for a in 0..2 {
            let t = c.colimit_test_objects()[a].clone();
            assert_eq!(c.hom(&x, &t).len(), 1 << x.size(a));
        }
    }
}
