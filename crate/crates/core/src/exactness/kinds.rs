//! Instance families: how to enumerate, sample, serialize and check one
//! instance of each condition.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::samples::{
    all_congruences, all_reflexive_relations, all_subobjects, is_injective, pull_subobject, random_congruence,
    random_reflexive_relation, random_subobject, relation_from_labels,
};
use crate::carrier::{
    coequalizer, coproduct, factor_through_mono, initial, is_iso, is_mono, kernel_pair, product,
    pullback, pushout, Carrier, Cocone, Diagram, Enumerable, GraphDiagram,
};
use crate::error::{Error, Result};
use crate::fincat::{parse_category, pretty_print, FinCategory};
use crate::relcalc::{
    image_subobject, is_effective_union, kernel_pair_relation, relation_chain, union, Relation, Subobject,
};

pub(crate) trait InstanceKind<C: Carrier + Enumerable>: Sync {
    type Inst: Send + Sync;

    fn name(&self) -> &'static str;
    /// Salt mixed into the seed so each family draws its own stream.
    fn salt(&self) -> u64;
    /// Instances built from objects in `objs`, each with a size weight.
    fn exhaustive(&self, c: &C, objs: &[C::Obj]) -> Result<Vec<(usize, Self::Inst)>>;
    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<Self::Inst>>;
    /// Instances with equal keys have equal outcomes.
    fn dedupe_key(&self, _c: &C, _inst: &Self::Inst) -> Option<String> {
        None
    }
    /// `Some(detail)` when the instance violates the condition.
    fn check(&self, c: &C, inst: &Self::Inst) -> Result<Option<Value>>;
    fn to_json(&self, c: &C, inst: &Self::Inst) -> Value;
    fn from_json(&self, c: &C, v: &Value) -> Result<Self::Inst>;
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse { line: 0, message: format!("instance is missing `{key}`") })
}

fn weight<C: Carrier>(c: &C, objs: &[&C::Obj]) -> usize {
    objs.iter().map(|x| c.total_size(x)).sum()
}

fn fibre_labels<C: Carrier>(c: &C, f: &C::Mor) -> Vec<Vec<usize>> {
    c.graded(f)
        .into_iter()
        .map(|map| {
            let mut seen: Vec<usize> = Vec::new();
            map.iter()
                .map(|v| match seen.iter().position(|w| w == v) {
                    Some(i) => i,
                    None => {
                        seen.push(*v);
                        seen.len() - 1
                    }
                })
                .collect()
        })
        .collect()
}

fn is_initial_object<C: Carrier>(c: &C, x: &C::Obj) -> Result<bool> {
    let zero = initial(c)?;
    let maps = c.hom(&zero, x);
    Ok(maps.len() == 1 && is_iso(c, &maps[0]))
}

/// Regular epis (coequalizers of kernel pairs) are stable under pullback.
pub(crate) struct RegularKind;

impl<C: Carrier + Enumerable> InstanceKind<C> for RegularKind {
    type Inst = C::Mor;

    fn name(&self) -> &'static str {
        "regular"
    }

    fn salt(&self) -> u64 {
        1
    }

    fn exhaustive(&self, c: &C, objs: &[C::Obj]) -> Result<Vec<(usize, C::Mor)>> {
        let mut out = Vec::new();
        for x in objs {
            for y in objs {
                for f in c.hom(x, y) {
                    out.push((weight(c, &[x, y]), f));
                }
            }
        }
        Ok(out)
    }

    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<C::Mor>> {
        let x = c.random_object(rng, max);
        let y = c.random_object(rng, max);
        Ok(c.random_morphism(rng, &x, &y))
    }

    fn dedupe_key(&self, c: &C, f: &C::Mor) -> Option<String> {
        // The regular-epi part depends only on the domain and the fibres.
        Some(format!("{}|{:?}", c.obj_json(c.dom(f)), fibre_labels(c, f)))
    }

    fn check(&self, c: &C, f: &C::Mor) -> Result<Option<Value>> {
        let (_, p1, p2) = kernel_pair(c, f)?;
        let q = coequalizer(c, &p1, &p2)?.legs[1].clone();
        for p in c.probes(c.cod(&q)) {
            let cone = pullback(c, &q, &p)?;
            let pulled = &cone.legs[1];
            if !crate::carrier::is_regular_epi(c, pulled)? {
                return Ok(Some(json!({
                    "reason": "pullback of a regular epi along a probe is not a regular epi",
                    "regular_epi": c.mor_json(&q),
                    "probe": c.mor_json(&p),
                    "pullback": c.mor_json(pulled),
                })));
            }
        }
        Ok(None)
    }

    fn to_json(&self, c: &C, f: &C::Mor) -> Value {
        json!({ "map": c.mor_json(f) })
    }

    fn from_json(&self, c: &C, v: &Value) -> Result<C::Mor> {
        c.mor_from_json(field(v, "map")?)
    }
}

/// Equivalence relations are kernel pairs of their coequalizers.
pub(crate) struct EffectiveKind;

impl<C: Carrier + Enumerable> InstanceKind<C> for EffectiveKind {
    type Inst = (C::Obj, Vec<Vec<usize>>);

    fn name(&self) -> &'static str {
        "effective_equivalence"
    }

    fn salt(&self) -> u64 {
        2
    }

    fn exhaustive(&self, c: &C, objs: &[C::Obj]) -> Result<Vec<(usize, Self::Inst)>> {
        let mut out = Vec::new();
        for x in objs {
            for labels in all_congruences(c, x) {
                out.push((weight(c, &[x]), (x.clone(), labels)));
            }
        }
        Ok(out)
    }

    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<Self::Inst>> {
        let x = c.random_object(rng, max);
        let labels = random_congruence(c, rng, &x);
        Ok(Some((x, labels)))
    }

    fn check(&self, c: &C, (x, labels): &Self::Inst) -> Result<Option<Value>> {
        let r = relation_from_labels(c, x, labels)?;
        if !r.is_equivalence(c)? {
            return Err(Error::InvalidMorphism("sampled partition is not a congruence".into()));
        }
        let q = coequalizer(c, &r.d, &r.c)?.legs[1].clone();
        let k = kernel_pair_relation(c, &q)?;
        if !k.same(c, &r)? {
            return Ok(Some(json!({
                "reason": "equivalence relation is not the kernel pair of its coequalizer",
                "relation": r.to_json(c),
                "coequalizer": c.mor_json(&q),
                "kernel_pair": k.to_json(c),
            })));
        }
        Ok(None)
    }

    fn to_json(&self, c: &C, (x, labels): &Self::Inst) -> Value {
        json!({ "object": c.obj_json(x), "classes": labels })
    }

    fn from_json(&self, c: &C, v: &Value) -> Result<Self::Inst> {
        let x = c.obj_from_json(field(v, "object")?)?;
        let labels: Vec<Vec<usize>> = serde_json::from_value(field(v, "classes")?.clone())?;
        if labels.len() != c.sorts(&x).len() || labels.iter().zip(c.sorts(&x)).any(|(l, n)| l.len() != n) {
            return Err(Error::ShapeMismatch("class labels do not match the object".into()));
        }
        Ok((x, labels))
    }
}

/// Binary coproducts are disjoint and stable under pullback.
pub(crate) struct ExtensiveKind;

impl<C: Carrier + Enumerable> InstanceKind<C> for ExtensiveKind {
    type Inst = (C::Obj, C::Obj);

    fn name(&self) -> &'static str {
        "lextensive"
    }

    fn salt(&self) -> u64 {
        3
    }

    fn exhaustive(&self, c: &C, objs: &[C::Obj]) -> Result<Vec<(usize, Self::Inst)>> {
        let mut out = Vec::new();
        for x in objs {
            for y in objs {
                out.push((weight(c, &[x, y]), (x.clone(), y.clone())));
            }
        }
        Ok(out)
    }

    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<Self::Inst>> {
        Ok(Some((c.random_object(rng, max), c.random_object(rng, max))))
    }

    fn check(&self, c: &C, (x, y): &Self::Inst) -> Result<Option<Value>> {
        let sum = coproduct(c, &[x.clone(), y.clone()])?;
        let (i, j) = (&sum.legs[0], &sum.legs[1]);
        if !is_mono(c, i)? || !is_mono(c, j)? {
            return Ok(Some(json!({ "reason": "coproduct injection is not monic" })));
        }
        let meet = pullback(c, i, j)?;
        if !is_initial_object(c, &meet.apex)? {
            return Ok(Some(json!({
                "reason": "coproduct injections do not have initial intersection",
                "intersection": c.obj_json(&meet.apex),
            })));
        }
        for p in c.probes(&sum.apex) {
            let px = pullback(c, i, &p)?;
            let py = pullback(c, j, &p)?;
            let parts = coproduct(c, &[px.apex.clone(), py.apex.clone()])?;
            let u = c.mediate_colimit(&parts, c.dom(&p), &[px.legs[1].clone(), py.legs[1].clone()]);
            if !u.is_some_and(|u| is_iso(c, &u)) {
                return Ok(Some(json!({
                    "reason": "coproduct is not stable under pullback along a probe",
                    "probe": c.mor_json(&p),
                    "left_part": c.obj_json(&px.apex),
                    "right_part": c.obj_json(&py.apex),
                })));
            }
        }
        Ok(None)
    }

    fn to_json(&self, c: &C, (x, y): &Self::Inst) -> Value {
        json!({ "left": c.obj_json(x), "right": c.obj_json(y) })
    }

    fn from_json(&self, c: &C, v: &Value) -> Result<Self::Inst> {
        Ok((c.obj_from_json(field(v, "left")?)?, c.obj_from_json(field(v, "right")?)?))
    }
}

/// Unions of subobject pairs are effective and stable under pullback.
pub(crate) struct UnionKind;

impl<C: Carrier + Enumerable> InstanceKind<C> for UnionKind {
    type Inst = (C::Mor, C::Mor);

    fn name(&self) -> &'static str {
        "effective_unions"
    }

    fn salt(&self) -> u64 {
        4
    }

    fn exhaustive(&self, c: &C, objs: &[C::Obj]) -> Result<Vec<(usize, Self::Inst)>> {
        let mut out = Vec::new();
        for x in objs {
            let subs = all_subobjects(c, x);
            for (k, a) in subs.iter().enumerate() {
                for b in &subs[k..] {
                    out.push((weight(c, &[x]), (a.clone(), b.clone())));
                }
            }
        }
        Ok(out)
    }

    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<Self::Inst>> {
        let x = c.random_object(rng, max);
        let a = random_subobject(c, rng, &x)?;
        let b = random_subobject(c, rng, &x)?;
        Ok(Some((a, b)))
    }

    fn check(&self, c: &C, (a, b): &Self::Inst) -> Result<Option<Value>> {
        let sa = Subobject::new(c, a.clone())?;
        let sb = Subobject::new(c, b.clone())?;
        if !is_effective_union(c, &sa, &sb)? {
            return Ok(Some(json!({
                "reason": "union is not the pushout over the intersection",
                "left": sa.to_json(c),
                "right": sb.to_json(c),
            })));
        }
        let u = union(c, &sa, &sb)?;
        for p in c.probes(&sa.ambient) {
            let joined = union(c, &pull_subobject(c, &sa, &p)?, &pull_subobject(c, &sb, &p)?)?;
            let pulled = pull_subobject(c, &u, &p)?;
            if !joined.same(c, &pulled)? {
                return Ok(Some(json!({
                    "reason": "union is not stable under pullback along a probe",
                    "probe": c.mor_json(&p),
                    "union_of_pullbacks": joined.to_json(c),
                    "pullback_of_union": pulled.to_json(c),
                })));
            }
        }
        Ok(None)
    }

    fn to_json(&self, c: &C, (a, b): &Self::Inst) -> Value {
        json!({ "left": c.mor_json(a), "right": c.mor_json(b) })
    }

    fn from_json(&self, c: &C, v: &Value) -> Result<Self::Inst> {
        let a = c.mor_from_json(field(v, "left")?)?;
        let b = c.mor_from_json(field(v, "right")?)?;
        if c.cod(&a) != c.cod(&b) || !is_injective(c, &a) || !is_injective(c, &b) {
            return Err(Error::MonoViolation("union instance needs two monos into one object".into()));
        }
        Ok((a, b))
    }
}

/// Colimit of the diagram
/// `A ×_C A ⇉ A ← A ×_C B → B ⇇ B ×_C B` built from `f: A -> C` and
/// `g: B -> C`. Vertex order: `A, B, A×A, A×B, B×B`.
pub fn double_kernel_colimit<C: Carrier>(c: &C, f: &C::Mor, g: &C::Mor) -> Result<Cocone<C>> {
    if c.cod(f) != c.cod(g) {
        return Err(Error::InvalidMorphism("double kernel needs a common codomain".into()));
    }
    let (kf, p1, p2) = kernel_pair(c, f)?;
    let mixed = pullback(c, f, g)?;
    let (kg, r1, r2) = kernel_pair(c, g)?;
    let d = GraphDiagram::new(
        vec![c.dom(f).clone(), c.dom(g).clone(), kf, mixed.apex.clone(), kg],
        vec![
            (2, 0, p1),
            (2, 0, p2),
            (3, 0, mixed.legs[0].clone()),
            (3, 1, mixed.legs[1].clone()),
            (4, 1, r1),
            (4, 1, r2),
        ],
    );
    c.colimit(&d)
}

/// The double-kernel colimit of a pair of maps is their joint image.
pub(crate) struct DoubleKernelKind;

impl<C: Carrier + Enumerable> InstanceKind<C> for DoubleKernelKind {
    type Inst = (C::Mor, C::Mor);

    fn name(&self) -> &'static str {
        "double_kernel"
    }

    fn salt(&self) -> u64 {
        5
    }

    fn exhaustive(&self, c: &C, objs: &[C::Obj]) -> Result<Vec<(usize, Self::Inst)>> {
        let mut out = Vec::new();
        for z in objs {
            for a in objs {
                let fs = c.hom(a, z);
                for b in objs {
                    let gs = c.hom(b, z);
                    for f in &fs {
                        for g in &gs {
                            out.push((weight(c, &[z, a, b]), (f.clone(), g.clone())));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<Self::Inst>> {
        let z = c.random_object(rng, max);
        let a = c.random_object(rng, max);
        let b = c.random_object(rng, max);
        let f = c.random_morphism(rng, &a, &z);
        let g = c.random_morphism(rng, &b, &z);
        Ok(f.zip(g))
    }

    fn check(&self, c: &C, (f, g): &Self::Inst) -> Result<Option<Value>> {
        let cocone = double_kernel_colimit(c, f, g)?;
        let legs = vec![
            f.clone(),
            g.clone(),
            c.compose(f, &kernel_pair(c, f)?.1)?,
            c.compose(f, &pullback(c, f, g)?.legs[0])?,
            c.compose(g, &kernel_pair(c, g)?.1)?,
        ];
        let u = c
            .mediate_colimit(&cocone, c.cod(f), &legs)
            .ok_or_else(|| Error::InvalidMorphism("double kernel legs do not form a cocone".into()))?;
        let joint = union(c, &image_subobject(c, f)?, &image_subobject(c, g)?)?;
        let ok = factor_through_mono(c, &u, &joint.mono)?.is_some_and(|v| is_iso(c, &v));
        if !ok {
            return Ok(Some(json!({
                "reason": "double kernel colimit differs from the union of images",
                "colimit": c.obj_json(&cocone.apex),
                "union_of_images": joint.to_json(c),
            })));
        }
        Ok(None)
    }

    fn to_json(&self, c: &C, (f, g): &Self::Inst) -> Value {
        json!({ "f": c.mor_json(f), "g": c.mor_json(g) })
    }

    fn from_json(&self, c: &C, v: &Value) -> Result<Self::Inst> {
        let f = c.mor_from_json(field(v, "f")?)?;
        let g = c.mor_from_json(field(v, "g")?)?;
        if c.cod(&f) != c.cod(&g) {
            return Err(Error::InvalidMorphism("maps have different codomains".into()));
        }
        Ok((f, g))
    }
}

/// Pushouts along monos are pullbacks and are stable under pullback, with
/// a cube cross-check.
pub(crate) struct AdhesiveKind;

impl AdhesiveKind {
    /// The adhesive conditions for a mono `m: C -> A` and `f: C -> B`.
    pub(crate) fn check_square<C: Carrier>(c: &C, m: &C::Mor, f: &C::Mor) -> Result<Option<Value>> {
        let po = pushout(c, m, f)?;
        let (q_c, q_a, q_b) = (&po.legs[0], &po.legs[1], &po.legs[2]);
        let back = pullback(c, q_a, q_b)?;
        let cmp = c.mediate_limit(&back, c.dom(m), &[m.clone(), f.clone(), q_c.clone()]);
        if !cmp.is_some_and(|u| is_iso(c, &u)) {
            return Ok(Some(json!({
                "reason": "pushout along a mono is not a pullback",
                "pushout": c.obj_json(&po.apex),
                "pullback": c.obj_json(&back.apex),
            })));
        }
        for p in c.probes(&po.apex) {
            let z = c.dom(&p);
            let pa = pullback(c, q_a, &p)?;
            let pb = pullback(c, q_b, &p)?;
            let pc = pullback(c, q_c, &p)?;
            let to_q = c.compose(q_c, &pc.legs[0])?;
            let m2 = c
                .mediate_limit(&pa, &pc.apex, &[c.compose(m, &pc.legs[0])?, pc.legs[1].clone(), to_q.clone()])
                .ok_or_else(|| Error::InvalidMorphism("pulled back square does not commute".into()))?;
            let f2 = c
                .mediate_limit(&pb, &pc.apex, &[c.compose(f, &pc.legs[0])?, pc.legs[1].clone(), to_q])
                .ok_or_else(|| Error::InvalidMorphism("pulled back square does not commute".into()))?;
            let top = pushout(c, &m2, &f2)?;
            let cmp = c.mediate_colimit(&top, z, &[pc.legs[1].clone(), pa.legs[1].clone(), pb.legs[1].clone()]);
            if !cmp.is_some_and(|u| is_iso(c, &u)) {
                return Ok(Some(json!({
                    "reason": "pushout along a mono is not stable under pullback along a probe",
                    "probe": c.mor_json(&p),
                    "pulled_pushout": c.obj_json(&top.apex),
                })));
            }
            // Cube with the pulled-back top: the front faces must be pullbacks.
            let w = c
                .mediate_colimit(
                    &top,
                    &po.apex,
                    &[
                        c.compose(q_c, &pc.legs[0])?,
                        c.compose(q_a, &pa.legs[0])?,
                        c.compose(q_b, &pb.legs[0])?,
                    ],
                )
                .ok_or_else(|| Error::InvalidMorphism("cube does not commute".into()))?;
            for (leg, part, q) in [(&top.legs[1], &pa, q_a), (&top.legs[2], &pb, q_b)] {
                let face = pullback(c, q, &w)?;
                let legs = [part.legs[0].clone(), leg.clone(), c.compose(q, &part.legs[0])?];
                let u = c.mediate_limit(&face, &part.apex, &legs);
                if !u.is_some_and(|u| is_iso(c, &u)) {
                    return Ok(Some(json!({
                        "reason": "cube over the pushout has a front face that is not a pullback",
                        "probe": c.mor_json(&p),
                    })));
                }
            }
        }
        Ok(None)
    }
}

impl<C: Carrier + Enumerable> InstanceKind<C> for AdhesiveKind {
    type Inst = (C::Mor, C::Mor);

    fn name(&self) -> &'static str {
        "adhesive"
    }

    fn salt(&self) -> u64 {
        6
    }

    fn exhaustive(&self, c: &C, objs: &[C::Obj]) -> Result<Vec<(usize, Self::Inst)>> {
        let mut out = Vec::new();
        for s in objs {
            for a in objs {
                let monos: Vec<C::Mor> = c.hom(s, a).into_iter().filter(|m| is_injective(c, m)).collect();
                if monos.is_empty() {
                    continue;
                }
                for b in objs {
                    for f in c.hom(s, b) {
                        for m in &monos {
                            out.push((weight(c, &[s, a, b]), (m.clone(), f.clone())));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<Self::Inst>> {
        let a = c.random_object(rng, max);
        let m = random_subobject(c, rng, &a)?;
        let b = c.random_object(rng, max);
        Ok(c.random_morphism(rng, c.dom(&m), &b).map(|f| (m, f)))
    }

    fn check(&self, c: &C, (m, f): &Self::Inst) -> Result<Option<Value>> {
        Self::check_square(c, m, f)
    }

    fn to_json(&self, c: &C, (m, f): &Self::Inst) -> Value {
        json!({ "mono": c.mor_json(m), "map": c.mor_json(f) })
    }

    fn from_json(&self, c: &C, v: &Value) -> Result<Self::Inst> {
        let m = c.mor_from_json(field(v, "mono")?)?;
        let f = c.mor_from_json(field(v, "map")?)?;
        if c.dom(&m) != c.dom(&f) {
            return Err(Error::InvalidMorphism("mono and map need a common source".into()));
        }
        if !is_mono(c, &m)? {
            return Err(Error::MonoViolation("first map of the span is not monic".into()));
        }
        Ok((m, f))
    }
}

fn chain_union_is_effective<C: Carrier>(c: &C, chain: &[Subobject<C>]) -> Result<bool> {
    let last = chain.last().expect("nonempty chain");
    let vertices: Vec<C::Obj> = chain.iter().map(|s| s.object(c)).collect();
    let mut edges = Vec::new();
    let mut into_last = Vec::new();
    for (k, s) in chain.iter().enumerate() {
        let Some(u) = factor_through_mono(c, &s.mono, &last.mono)? else {
            return Ok(false);
        };
        into_last.push(u);
        if k + 1 < chain.len() {
            let Some(e) = factor_through_mono(c, &s.mono, &chain[k + 1].mono)? else {
                return Ok(false);
            };
            edges.push((k, k + 1, e));
        }
    }
    let colim = c.colimit(&GraphDiagram::new(vertices, edges))?;
    Ok(c.mediate_colimit(&colim, &last.object(c), &into_last).is_some_and(|u| is_iso(c, &u)))
}

/// Reflexive relations: the chain `T ↦ T T° T` reaches an effective
/// equivalence relation with the same coequalizer.
pub(crate) struct ReflexiveKind;

impl<C: Carrier + Enumerable> InstanceKind<C> for ReflexiveKind {
    type Inst = Relation<C>;

    fn name(&self) -> &'static str {
        "reflexive_coequalizer"
    }

    fn salt(&self) -> u64 {
        7
    }

    fn exhaustive(&self, c: &C, objs: &[C::Obj]) -> Result<Vec<(usize, Relation<C>)>> {
        let mut out = Vec::new();
        for x in objs {
            for r in all_reflexive_relations(c, x)? {
                out.push((weight(c, &[x]), r));
            }
        }
        Ok(out)
    }

    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<Relation<C>>> {
        let x = c.random_object(rng, max);
        random_reflexive_relation(c, rng, &x).map(Some)
    }

    fn check(&self, c: &C, r: &Relation<C>) -> Result<Option<Value>> {
        let chain = relation_chain(c, r)?;
        let star = chain.last().expect("nonempty chain");
        if !star.is_equivalence(c)? {
            return Ok(Some(json!({
                "reason": "stable relation of the chain is not an equivalence relation",
                "stable": star.to_json(c),
            })));
        }
        let subs: Vec<Subobject<C>> = chain.iter().map(|t| t.sub.clone()).collect();
        if !chain_union_is_effective(c, &subs)? {
            return Ok(Some(json!({ "reason": "union of the relation chain is not effective" })));
        }
        let q_star = coequalizer(c, &star.d, &star.c)?;
        let k = kernel_pair_relation(c, &q_star.legs[1])?;
        if !k.same(c, star)? {
            return Ok(Some(json!({
                "reason": "stable relation is not the kernel pair of its coequalizer",
                "stable": star.to_json(c),
            })));
        }
        let square = &r.square.apex;
        for p in c.probes(square) {
            let pulled: Vec<Subobject<C>> = subs.iter().map(|s| pull_subobject(c, s, &p)).collect::<Result<_>>()?;
            if !chain_union_is_effective(c, &pulled)? {
                return Ok(Some(json!({
                    "reason": "union of the relation chain is not stable under pullback along a probe",
                    "probe": c.mor_json(&p),
                })));
            }
        }
        let q = coequalizer(c, &r.d, &r.c)?;
        let legs = [c.compose(&q_star.legs[1], &r.d)?, q_star.legs[1].clone()];
        let same = c.mediate_colimit(&q, &q_star.apex, &legs).is_some_and(|u| is_iso(c, &u));
        if !same {
            return Ok(Some(json!({
                "reason": "coequalizer of the relation differs from that of its chain limit",
                "coequalizer": c.obj_json(&q.apex),
                "stable_coequalizer": c.obj_json(&q_star.apex),
            })));
        }
        Ok(None)
    }

    fn to_json(&self, c: &C, r: &Relation<C>) -> Value {
        json!({ "object": c.obj_json(&r.carrier), "relation": c.mor_json(&r.sub.mono) })
    }

    fn from_json(&self, c: &C, v: &Value) -> Result<Relation<C>> {
        let x = c.obj_from_json(field(v, "object")?)?;
        let m = c.mor_from_json(field(v, "relation")?)?;
        Relation::from_mono(c, &x, m)
    }
}

/// A cospan `A => C <= B` of diagrams over a filtered shape.
#[derive(Clone, Debug)]
pub(crate) struct CospanOfDiagrams<C: Carrier> {
    pub a: Diagram<C>,
    pub b: Diagram<C>,
    pub c: Diagram<C>,
    pub alpha: Vec<C::Mor>,
    pub beta: Vec<C::Mor>,
}

/// Filtered colimits commute with pullbacks.
pub(crate) struct FilteredKind {
    pub shape: Arc<FinCategory>,
}

impl FilteredKind {
    pub(crate) fn new(shape: FinCategory) -> Result<Self> {
        if !shape.is_filtered() {
            return Err(Error::NotFiltered("shape admits a finite subdiagram without a cocone".into()));
        }
        Ok(FilteredKind { shape: Arc::new(shape) })
    }

    fn gens_of<C: Carrier>(&self, d: &Diagram<C>) -> Vec<C::Mor> {
        self.shape.generators().iter().map(|&g| d.morphism(g).clone()).collect()
    }

    fn diagram<C: Carrier>(&self, c: &C, objects: Vec<C::Obj>, maps: Vec<C::Mor>) -> Result<Diagram<C>> {
        let gens: BTreeMap<usize, C::Mor> = self.shape.generators().iter().copied().zip(maps).collect();
        Diagram::new(c, self.shape.clone(), objects, &gens)
    }

    fn random_functor<C: Enumerable>(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Diagram<C>> {
        let k = &self.shape;
        for _ in 0..16 {
            let objects: Vec<C::Obj> = (0..k.object_count()).map(|_| c.random_object(rng, max)).collect();
            let maps: Option<Vec<C::Mor>> = k
                .generators()
                .iter()
                .map(|&g| c.random_morphism(rng, &objects[k.source(g)], &objects[k.target(g)]))
                .collect();
            if let Some(maps) = maps {
                if let Ok(d) = self.diagram(c, objects, maps) {
                    return Ok(d);
                }
            }
        }
        let x = c.random_object(rng, max);
        let maps = k.generators().iter().map(|_| c.identity(&x)).collect();
        self.diagram(c, vec![x; k.object_count()], maps)
    }

    /// A random subfunctor of `D × const(S)`, with its projection to `D`.
    fn random_over<C: Enumerable>(
        &self,
        c: &C,
        rng: &mut ChaCha8Rng,
        d: &Diagram<C>,
        max: usize,
    ) -> Result<(Diagram<C>, Vec<C::Mor>)> {
        let k = &self.shape;
        let s = c.random_object(rng, max.min(2));
        let prods: Vec<_> = d
            .objects()
            .iter()
            .map(|x| product(c, &[x.clone(), s.clone()]))
            .collect::<Result<_>>()?;
        let mut e_maps = Vec::new();
        for &g in k.generators() {
            let (a, b) = (k.source(g), k.target(g));
            let legs = [c.compose(d.morphism(g), &prods[a].legs[0])?, prods[a].legs[1].clone()];
            let m = c
                .mediate_limit(&prods[b], &prods[a].apex, &legs)
                .ok_or_else(|| Error::InvalidMorphism("product map".into()))?;
            e_maps.push(m);
        }
        let mut keep: Vec<Vec<Vec<bool>>> = Vec::new();
        for p in &prods {
            let sub = if rng.gen_bool(0.75) {
                random_subobject(c, rng, &p.apex)?
            } else {
                c.identity(&p.apex)
            };
            let mut mask: Vec<Vec<bool>> = c.sorts(&p.apex).iter().map(|&n| vec![false; n]).collect();
            for (srt, map) in c.graded(&sub).iter().enumerate() {
                for &v in map {
                    mask[srt][v] = true;
                }
            }
            keep.push(mask);
        }
        loop {
            let mut changed = false;
            for (gi, &g) in k.generators().iter().enumerate() {
                let (a, b) = (k.source(g), k.target(g));
                for (srt, n) in c.sorts(&prods[a].apex).into_iter().enumerate() {
                    for e in 0..n {
                        if keep[a][srt][e] {
                            let v = c.apply(&e_maps[gi], srt, e);
                            if !keep[b][srt][v] {
                                keep[b][srt][v] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let incl: Vec<C::Mor> = prods
            .iter()
            .zip(&keep)
            .map(|(p, mask)| {
                c.subobject(&p.apex, mask)
                    .ok_or_else(|| Error::InvalidMorphism("generated subset is not a subobject".into()))
            })
            .collect::<Result<_>>()?;
        let mut maps = Vec::new();
        for (gi, &g) in k.generators().iter().enumerate() {
            let (a, b) = (k.source(g), k.target(g));
            let through = c.compose(&e_maps[gi], &incl[a])?;
            let m = factor_through_mono(c, &through, &incl[b])?
                .ok_or_else(|| Error::InvalidMorphism("generated subfunctor is not closed".into()))?;
            maps.push(m);
        }
        let objects = incl.iter().map(|m| c.dom(m).clone()).collect();
        let sub = self.diagram(c, objects, maps)?;
        let proj = incl
            .iter()
            .zip(&prods)
            .map(|(i, p)| c.compose(&p.legs[0], i))
            .collect::<Result<_>>()?;
        Ok((sub, proj))
    }

    fn diagram_json<C: Carrier>(&self, c: &C, d: &Diagram<C>) -> Value {
        json!({
            "objects": d.objects().iter().map(|x| c.obj_json(x)).collect::<Vec<_>>(),
            "maps": self.gens_of(d).iter().map(|m| c.mor_json(m)).collect::<Vec<_>>(),
        })
    }

    fn diagram_from_json<C: Carrier>(&self, c: &C, v: &Value) -> Result<Diagram<C>> {
        let objects = field(v, "objects")?
            .as_array()
            .ok_or_else(|| Error::parse(0, "`objects` must be an array"))?
            .iter()
            .map(|x| c.obj_from_json(x))
            .collect::<Result<Vec<_>>>()?;
        let maps = field(v, "maps")?
            .as_array()
            .ok_or_else(|| Error::parse(0, "`maps` must be an array"))?
            .iter()
            .map(|m| c.mor_from_json(m))
            .collect::<Result<Vec<_>>>()?;
        if maps.len() != self.shape.generators().len() {
            return Err(Error::ShapeMismatch("one map per generator of the shape is needed".into()));
        }
        self.diagram(c, objects, maps)
    }
}

fn colimit_of<C: Carrier>(c: &C, d: &Diagram<C>) -> Result<Cocone<C>> {
    c.colimit(&d.graph())
}

impl<C: Carrier + Enumerable> InstanceKind<C> for FilteredKind {
    type Inst = CospanOfDiagrams<C>;

    fn name(&self) -> &'static str {
        "filtered_commute"
    }

    fn salt(&self) -> u64 {
        8
    }

    fn exhaustive(&self, _c: &C, _objs: &[C::Obj]) -> Result<Vec<(usize, Self::Inst)>> {
        // Diagrams over a shape are only sampled.
        Ok(Vec::new())
    }

    fn random(&self, c: &C, rng: &mut ChaCha8Rng, max: usize) -> Result<Option<Self::Inst>> {
        let base = self.random_functor(c, rng, max)?;
        let (a, alpha) = self.random_over(c, rng, &base, max)?;
        let (b, beta) = self.random_over(c, rng, &base, max)?;
        Ok(Some(CospanOfDiagrams { a, b, c: base, alpha, beta }))
    }

    fn check(&self, c: &C, inst: &Self::Inst) -> Result<Option<Value>> {
        let k = &self.shape;
        let n = k.object_count();
        let pbs: Vec<_> = (0..n)
            .map(|i| pullback(c, &inst.alpha[i], &inst.beta[i]))
            .collect::<Result<_>>()?;
        let mut p_maps = Vec::new();
        for &g in k.generators() {
            let (a, b) = (k.source(g), k.target(g));
            let legs = [
                c.compose(inst.a.morphism(g), &pbs[a].legs[0])?,
                c.compose(inst.b.morphism(g), &pbs[a].legs[1])?,
                c.compose(inst.c.morphism(g), &pbs[a].legs[2])?,
            ];
            let m = c
                .mediate_limit(&pbs[b], &pbs[a].apex, &legs)
                .ok_or_else(|| Error::InvalidMorphism("components are not natural".into()))?;
            p_maps.push(m);
        }
        let p = self.diagram(c, pbs.iter().map(|x| x.apex.clone()).collect(), p_maps)?;
        let (lp, la, lb, lc) = (
            colimit_of(c, &p)?,
            colimit_of(c, &inst.a)?,
            colimit_of(c, &inst.b)?,
            colimit_of(c, &inst.c)?,
        );
        let induced = |from: &Cocone<C>, to: &Cocone<C>, comps: &[C::Mor]| -> Result<C::Mor> {
            let legs = (0..n)
                .map(|i| c.compose(&to.legs[i], &comps[i]))
                .collect::<Result<Vec<_>>>()?;
            c.mediate_colimit(from, &to.apex, &legs)
                .ok_or_else(|| Error::InvalidMorphism("components are not natural".into()))
        };
        let abar = induced(&la, &lc, &inst.alpha)?;
        let bbar = induced(&lb, &lc, &inst.beta)?;
        let rhs = pullback(c, &abar, &bbar)?;
        let p0: Vec<C::Mor> = pbs.iter().map(|x| x.legs[0].clone()).collect();
        let p1: Vec<C::Mor> = pbs.iter().map(|x| x.legs[1].clone()).collect();
        let to_a = induced(&lp, &la, &p0)?;
        let to_b = induced(&lp, &lb, &p1)?;
        let to_c = c.compose(&abar, &to_a)?;
        let cmp = c.mediate_limit(&rhs, &lp.apex, &[to_a, to_b, to_c]);
        if !cmp.is_some_and(|u| is_iso(c, &u)) {
            return Ok(Some(json!({
                "reason": "colimit of pointwise pullbacks differs from the pullback of colimits",
                "colimit_of_pullbacks": c.obj_json(&lp.apex),
                "pullback_of_colimits": c.obj_json(&rhs.apex),
            })));
        }
        Ok(None)
    }

    fn to_json(&self, c: &C, inst: &Self::Inst) -> Value {
        json!({
            "shape": pretty_print(&self.shape),
            "a": self.diagram_json(c, &inst.a),
            "b": self.diagram_json(c, &inst.b),
            "c": self.diagram_json(c, &inst.c),
            "alpha": inst.alpha.iter().map(|m| c.mor_json(m)).collect::<Vec<_>>(),
            "beta": inst.beta.iter().map(|m| c.mor_json(m)).collect::<Vec<_>>(),
        })
    }

    fn from_json(&self, c: &C, v: &Value) -> Result<Self::Inst> {
        let comps = |key: &str| -> Result<Vec<C::Mor>> {
            field(v, key)?
                .as_array()
                .ok_or_else(|| Error::parse(0, format!("`{key}` must be an array")))?
                .iter()
                .map(|m| c.mor_from_json(m))
                .collect()
        };
        let inst = CospanOfDiagrams {
            a: self.diagram_from_json(c, field(v, "a")?)?,
            b: self.diagram_from_json(c, field(v, "b")?)?,
            c: self.diagram_from_json(c, field(v, "c")?)?,
            alpha: comps("alpha")?,
            beta: comps("beta")?,
        };
        let n = self.shape.object_count();
        if inst.alpha.len() != n || inst.beta.len() != n {
            return Err(Error::ShapeMismatch("one component per object of the shape is needed".into()));
        }
        Ok(inst)
    }
}

/// The shape recorded in a filtered instance.
pub(crate) fn shape_from_instance(v: &Value) -> Result<Option<FinCategory>> {
    match v.get("shape").and_then(Value::as_str) {
        Some(text) => parse_category(text).map(Some),
        None => Ok(None),
    }
}
