//! Exhaustive verification of universal properties against the carrier's
//! test objects, and a carrier wrapper that audits every (co)limit it
//! computes.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde_json::Value;

use super::{Carrier, Cocone, Cone, GraphDiagram};
use crate::error::Result;

enum Side {
    Cone,
    Cocone,
}

fn enumerate<C: Carrier>(c: &C, d: &GraphDiagram<C>, t: &C::Obj, side: Side) -> Vec<Vec<C::Mor>> {
    let n = d.vertices.len();
    let mut legs: Vec<Option<C::Mor>> = vec![None; n];
    let mut out = Vec::new();
    let mut homs: Vec<Option<Vec<C::Mor>>> = vec![None; n];
    rec(c, d, t, &side, &mut legs, &mut homs, &mut out);
    out
}

fn consistent<C: Carrier>(c: &C, d: &GraphDiagram<C>, side: &Side, legs: &[Option<C::Mor>], v: usize) -> bool {
    d.edges.iter().all(|(i, j, m)| {
        if *i != v && *j != v {
            return true;
        }
        match (&legs[*i], &legs[*j]) {
            (Some(li), Some(lj)) => match side {
                // cone: m ∘ leg_i = leg_j
                Side::Cone => c.compose(m, li).map(|x| &x == lj).unwrap_or(false),
                // cocone: leg_j ∘ m = leg_i
                Side::Cocone => c.compose(lj, m).map(|x| &x == li).unwrap_or(false),
            },
            _ => true,
        }
    })
}

fn rec<C: Carrier>(
    c: &C,
    d: &GraphDiagram<C>,
    t: &C::Obj,
    side: &Side,
    legs: &mut Vec<Option<C::Mor>>,
    homs: &mut Vec<Option<Vec<C::Mor>>>,
    out: &mut Vec<Vec<C::Mor>>,
) {
    // A leg forced by an edge from (cone) or into (cocone) an assigned vertex.
    let forced = d.edges.iter().find_map(|(i, j, m)| match side {
        Side::Cone => match (&legs[*i], &legs[*j]) {
            (Some(li), None) => Some((*j, c.compose(m, li).ok()?)),
            _ => None,
        },
        Side::Cocone => match (&legs[*i], &legs[*j]) {
            (None, Some(lj)) => Some((*i, c.compose(lj, m).ok()?)),
            _ => None,
        },
    });
    if let Some((v, leg)) = forced {
        legs[v] = Some(leg);
        if consistent(c, d, side, legs, v) {
            rec(c, d, t, side, legs, homs, out);
        }
        legs[v] = None;
        return;
    }
    if legs.iter().all(Option::is_some) {
        out.push(legs.iter().map(|l| l.clone().expect("assigned")).collect());
        return;
    }
    // Branch where the legs determine the most: sinks for cocones, sources
    // for cones.
    let free = |v: usize| {
        legs[v].is_none()
            && !d.edges.iter().any(|(i, j, _)| match side {
                Side::Cone => *j == v && i != j,
                Side::Cocone => *i == v && i != j,
            })
    };
    let v = (0..legs.len())
        .find(|&v| free(v))
        .or_else(|| legs.iter().position(Option::is_none))
        .expect("some leg is unassigned");
    if homs[v].is_none() {
        homs[v] = Some(match side {
            Side::Cone => c.hom(t, &d.vertices[v]),
            Side::Cocone => c.hom(&d.vertices[v], t),
        });
    }
    let candidates = homs[v].clone().expect("computed");
    for leg in candidates {
        legs[v] = Some(leg);
        if consistent(c, d, side, legs, v) {
            rec(c, d, t, side, legs, homs, out);
        }
        legs[v] = None;
    }
}

pub fn enumerate_cones<C: Carrier>(c: &C, d: &GraphDiagram<C>, t: &C::Obj) -> Vec<Vec<C::Mor>> {
    enumerate(c, d, t, Side::Cone)
}

pub fn enumerate_cocones<C: Carrier>(c: &C, d: &GraphDiagram<C>, t: &C::Obj) -> Vec<Vec<C::Mor>> {
    enumerate(c, d, t, Side::Cocone)
}

/// Checks the cone commutes and that, for every limit test object `T`,
/// composing with the legs is a bijection from `Hom(T, apex)` to cones on `T`.
pub fn verify_limit<C: Carrier>(c: &C, d: &GraphDiagram<C>, cone: &Cone<C>) -> std::result::Result<(), String> {
    let legs: Vec<Option<C::Mor>> = cone.legs.iter().cloned().map(Some).collect();
    if legs.len() != d.vertices.len() || !(0..legs.len()).all(|v| consistent(c, d, &Side::Cone, &legs, v)) {
        return Err("cone does not commute".into());
    }
    for t in c.limit_test_objects() {
        let cones: HashSet<Vec<C::Mor>> = enumerate_cones(c, d, &t).into_iter().collect();
        let maps = c.hom(&t, &cone.apex);
        let mut induced = HashSet::new();
        for u in &maps {
            let composite: Vec<C::Mor> = cone
                .legs
                .iter()
                .map(|l| c.compose(l, u))
                .collect::<Result<_>>()
                .map_err(|e| e.to_string())?;
            if !induced.insert(composite) {
                return Err("mediating map is not unique".into());
            }
        }
        if induced != cones {
            return Err(format!(
                "{} cones from a test object but {} maps into the apex",
                cones.len(),
                maps.len()
            ));
        }
    }
    Ok(())
}

pub fn verify_colimit<C: Carrier>(c: &C, d: &GraphDiagram<C>, cocone: &Cocone<C>) -> std::result::Result<(), String> {
    let legs: Vec<Option<C::Mor>> = cocone.legs.iter().cloned().map(Some).collect();
    if legs.len() != d.vertices.len() || !(0..legs.len()).all(|v| consistent(c, d, &Side::Cocone, &legs, v)) {
        return Err("cocone does not commute".into());
    }
    for t in c.colimit_test_objects() {
        let cocones: HashSet<Vec<C::Mor>> = enumerate_cocones(c, d, &t).into_iter().collect();
        let maps = c.hom(&cocone.apex, &t);
        let mut induced = HashSet::new();
        for u in &maps {
            let composite: Vec<C::Mor> = cocone
                .legs
                .iter()
                .map(|l| c.compose(u, l))
                .collect::<Result<_>>()
                .map_err(|e| e.to_string())?;
            if !induced.insert(composite) {
                return Err("mediating map is not unique".into());
            }
        }
        if induced != cocones {
            return Err(format!(
                "{} cocones to a test object but {} maps out of the apex",
                cocones.len(),
                maps.len()
            ));
        }
    }
    Ok(())
}

#[derive(Debug, Default)]
struct AuditStats {
    limits: AtomicUsize,
    colimits: AtomicUsize,
    failures: Mutex<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub limits: usize,
    pub colimits: usize,
    pub failures: Vec<String>,
}

/// Delegates to `inner`, verifying every limit and colimit it returns.
#[derive(Clone, Debug)]
pub struct Audited<C: Carrier> {
    inner: C,
    stats: Arc<AuditStats>,
}

impl<C: Carrier> Audited<C> {
    pub fn new(inner: C) -> Self {
        Audited {
            inner,
            stats: Arc::new(AuditStats::default()),
        }
    }

    pub fn inner(&self) -> &C {
        &self.inner
    }

    pub fn report(&self) -> AuditReport {
        AuditReport {
            limits: self.stats.limits.load(Ordering::SeqCst),
            colimits: self.stats.colimits.load(Ordering::SeqCst),
            failures: self.stats.failures.lock().expect("audit lock").clone(),
        }
    }

    fn record(&self, what: &str, outcome: std::result::Result<(), String>) {
        if let Err(e) = outcome {
            self.stats
                .failures
                .lock()
                .expect("audit lock")
                .push(format!("{what}: {e}"));
        }
    }
}

impl<C: Carrier> Carrier for Audited<C> {
    type Obj = C::Obj;
    type Mor = C::Mor;

    fn describe(&self) -> String {
        self.inner.describe()
    }
    fn dom<'a>(&self, f: &'a C::Mor) -> &'a C::Obj {
        self.inner.dom(f)
    }
    fn cod<'a>(&self, f: &'a C::Mor) -> &'a C::Obj {
        self.inner.cod(f)
    }
    fn identity(&self, x: &C::Obj) -> C::Mor {
        self.inner.identity(x)
    }
    fn compose(&self, g: &C::Mor, f: &C::Mor) -> Result<C::Mor> {
        self.inner.compose(g, f)
    }
    fn sorts(&self, x: &C::Obj) -> Vec<usize> {
        self.inner.sorts(x)
    }
    fn apply(&self, f: &C::Mor, sort: usize, e: usize) -> usize {
        self.inner.apply(f, sort, e)
    }
    fn graded(&self, f: &C::Mor) -> Vec<Vec<usize>> {
        self.inner.graded(f)
    }
    fn from_graded(&self, src: &C::Obj, tgt: &C::Obj, maps: Vec<Vec<usize>>) -> Result<C::Mor> {
        self.inner.from_graded(src, tgt, maps)
    }
    fn subobject(&self, x: &C::Obj, keep: &[Vec<bool>]) -> Option<C::Mor> {
        self.inner.subobject(x, keep)
    }
    fn hom(&self, x: &C::Obj, y: &C::Obj) -> Vec<C::Mor> {
        self.inner.hom(x, y)
    }

    fn limit(&self, d: &GraphDiagram<Self>) -> Result<Cone<Self>> {
        let inner_d = GraphDiagram::<C>::new(d.vertices.clone(), d.edges.clone());
        let cone = self.inner.limit(&inner_d)?;
        self.stats.limits.fetch_add(1, Ordering::SeqCst);
        self.record("limit", verify_limit(&self.inner, &inner_d, &cone));
        Ok(Cone {
            apex: cone.apex,
            legs: cone.legs,
        })
    }

    fn colimit(&self, d: &GraphDiagram<Self>) -> Result<Cocone<Self>> {
        let inner_d = GraphDiagram::<C>::new(d.vertices.clone(), d.edges.clone());
        let cocone = self.inner.colimit(&inner_d)?;
        self.stats.colimits.fetch_add(1, Ordering::SeqCst);
        self.record("colimit", verify_colimit(&self.inner, &inner_d, &cocone));
        Ok(Cocone {
            apex: cocone.apex,
            legs: cocone.legs,
            collapsed: cocone.collapsed,
        })
    }

    fn probes(&self, x: &C::Obj) -> Vec<C::Mor> {
        self.inner.probes(x)
    }
    fn probes_exact(&self) -> bool {
        self.inner.probes_exact()
    }
    fn is_known_topos(&self) -> bool {
        self.inner.is_known_topos()
    }
    fn limit_test_objects(&self) -> Vec<C::Obj> {
        self.inner.limit_test_objects()
    }
    fn colimit_test_objects(&self) -> Vec<C::Obj> {
        self.inner.colimit_test_objects()
    }
    fn obj_json(&self, x: &C::Obj) -> Value {
        self.inner.obj_json(x)
    }
    fn mor_json(&self, f: &C::Mor) -> Value {
        self.inner.mor_json(f)
    }
    fn obj_from_json(&self, v: &Value) -> Result<C::Obj> {
        self.inner.obj_from_json(v)
    }
    fn mor_from_json(&self, v: &Value) -> Result<C::Mor> {
        self.inner.mor_from_json(v)
    }
    fn mediate_limit(&self, limit: &Cone<Self>, apex: &C::Obj, legs: &[C::Mor]) -> Option<C::Mor> {
        let l = Cone::<C> {
            apex: limit.apex.clone(),
            legs: limit.legs.clone(),
        };
        self.inner.mediate_limit(&l, apex, legs)
    }
    fn mediate_colimit(&self, colimit: &Cocone<Self>, apex: &C::Obj, legs: &[C::Mor]) -> Option<C::Mor> {
        let q = Cocone::<C> {
            apex: colimit.apex.clone(),
            legs: colimit.legs.clone(),
            collapsed: colimit.collapsed,
        };
        self.inner.mediate_colimit(&q, apex, legs)
    }
    fn inverse(&self, f: &C::Mor) -> Option<C::Mor> {
        self.inner.inverse(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::{pullback, pushout, FinPosetCarrier, FinSetCarrier, Function, Monotone, Poset};

    #[test]
    fn finset_pullback_and_pushout_verify() {
        let c = Audited::new(FinSetCarrier);
        let f = Function::new(3, 2, vec![0, 1, 1]).unwrap();
        let g = Function::new(2, 2, vec![1, 1]).unwrap();
        pullback(&c, &f, &g).unwrap();
        let m = Function::new(1, 2, vec![1]).unwrap();
        let h = Function::new(1, 3, vec![2]).unwrap();
        pushout(&c, &m, &h).unwrap();
        let r = c.report();
        assert_eq!((r.limits, r.colimits), (1, 1));
        assert!(r.failures.is_empty(), "{:?}", r.failures);
    }

    #[test]
    fn wrong_cone_is_rejected() {
        let c = FinSetCarrier;
        let d = GraphDiagram::<FinSetCarrier>::discrete(vec![2, 2]);
        // a 3-element apex cannot be the product of 2 and 2
        let cone = Cone {
            apex: 3,
            legs: vec![
                Function::new(3, 2, vec![0, 1, 1]).unwrap(),
                Function::new(3, 2, vec![0, 0, 1]).unwrap(),
            ],
        };
        assert!(verify_limit(&c, &d, &cone).is_err());
    }

    #[test]
    fn poset_pushout_verifies() {
        let c = Audited::new(FinPosetCarrier::default());
        let f = Monotone::new(Poset::chain(1), Poset::chain(2), vec![0]).unwrap();
        pushout(&c, &f, &f).unwrap();
        assert!(c.report().failures.is_empty());
    }
}
