use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::sets::{colimit_classes, limit_tuples, SetEdge};
use super::{Carrier, Cocone, Cone, GraphDiagram};
use crate::error::{Error, Result};

/// Finite sets `{0, .., n-1}` and functions between them.
#[derive(Clone, Copy, Debug, Default)]
pub struct FinSetCarrier;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Function {
    pub source: usize,
    pub target: usize,
    pub map: Vec<usize>,
}

impl Function {
    pub fn new(source: usize, target: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != source || map.iter().any(|&v| v >= target) {
            return Err(Error::InvalidMorphism(format!(
                "{map:?} is not a function {source} -> {target}"
            )));
        }
        Ok(Function { source, target, map })
    }

    pub fn identity(n: usize) -> Self {
        Function {
            source: n,
            target: n,
            map: (0..n).collect(),
        }
    }

    pub fn then(&self, g: &Function) -> Function {
        Function {
            source: self.source,
            target: g.target,
            map: self.map.iter().map(|&x| g.map[x]).collect(),
        }
    }

    /// All functions `source -> target` in lexicographic order.
    pub fn all(source: usize, target: usize) -> Vec<Function> {
        let mut out = Vec::new();
        if source > 0 && target == 0 {
            return out;
        }
        let mut map = vec![0; source];
        loop {
            out.push(Function {
                source,
                target,
                map: map.clone(),
            });
            let mut k = source;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                map[k] += 1;
                if map[k] < target {
                    break;
                }
                map[k] = 0;
            }
        }
    }
}

pub(crate) fn set_limit_parts(sizes: &[usize], edges: &[SetEdge]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let tuples = limit_tuples(sizes, edges);
    let legs = (0..sizes.len())
        .map(|i| tuples.iter().map(|t| t[i]).collect())
        .collect();
    (tuples, legs)
}

impl Carrier for FinSetCarrier {
    type Obj = usize;
    type Mor = Function;

    fn describe(&self) -> String {
        "finset".into()
    }

    fn dom<'a>(&self, f: &'a Function) -> &'a usize {
        &f.source
    }

    fn cod<'a>(&self, f: &'a Function) -> &'a usize {
        &f.target
    }

    fn identity(&self, x: &usize) -> Function {
        Function::identity(*x)
    }

    fn compose(&self, g: &Function, f: &Function) -> Result<Function> {
        if f.target != g.source {
            return Err(Error::InvalidMorphism("functions are not composable".into()));
        }
        Ok(f.then(g))
    }

    fn sorts(&self, x: &usize) -> Vec<usize> {
        vec![*x]
    }

    fn apply(&self, f: &Function, _sort: usize, e: usize) -> usize {
        f.map[e]
    }

    fn from_graded(&self, src: &usize, tgt: &usize, mut maps: Vec<Vec<usize>>) -> Result<Function> {
        let map = maps.pop().unwrap_or_default();
        Function::new(*src, *tgt, map)
    }

    fn subobject(&self, x: &usize, keep: &[Vec<bool>]) -> Option<Function> {
        let map: Vec<usize> = (0..*x).filter(|&e| keep[0][e]).collect();
        Some(Function {
            source: map.len(),
            target: *x,
            map,
        })
    }

    fn hom(&self, x: &usize, y: &usize) -> Vec<Function> {
        Function::all(*x, *y)
    }

    fn limit(&self, d: &GraphDiagram<Self>) -> Result<Cone<Self>> {
        d.validate(self)?;
        let edges: Vec<SetEdge> = d.edges.iter().map(|(i, j, m)| (*i, *j, m.map.as_slice())).collect();
        let (tuples, legs) = set_limit_parts(&d.vertices, &edges);
        let apex = tuples.len();
        Ok(Cone {
            apex,
            legs: legs
                .into_iter()
                .zip(&d.vertices)
                .map(|(map, &t)| Function { source: apex, target: t, map })
                .collect(),
        })
    }

    fn colimit(&self, d: &GraphDiagram<Self>) -> Result<Cocone<Self>> {
        d.validate(self)?;
        let edges: Vec<SetEdge> = d.edges.iter().map(|(i, j, m)| (*i, *j, m.map.as_slice())).collect();
        let (count, labels) = colimit_classes(&d.vertices, &edges);
        Ok(Cocone {
            apex: count,
            legs: labels
                .into_iter()
                .zip(&d.vertices)
                .map(|(map, &s)| Function { source: s, target: count, map })
                .collect(),
            collapsed: false,
        })
    }

    fn probes(&self, x: &usize) -> Vec<Function> {
        (0..*x).map(|e| Function { source: 1, target: *x, map: vec![e] }).collect()
    }

    fn probes_exact(&self) -> bool {
        true
    }

    fn is_known_topos(&self) -> bool {
        true
    }

    fn limit_test_objects(&self) -> Vec<usize> {
        vec![1]
    }

    fn colimit_test_objects(&self) -> Vec<usize> {
        vec![2]
    }

    fn obj_json(&self, x: &usize) -> Value {
        json!(x)
    }

    fn mor_json(&self, f: &Function) -> Value {
        json!({"source": f.source, "target": f.target, "map": f.map})
    }

    fn obj_from_json(&self, v: &Value) -> Result<usize> {
        v.as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| Error::Json("finite set must be a cardinality".into()))
    }

    fn mor_from_json(&self, v: &Value) -> Result<Function> {
        let f: Function = serde_json::from_value(v.clone())?;
        Function::new(f.source, f.target, f.map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::{coequalizer, pullback};

    #[test]
    fn function_enumeration_counts() {
        assert_eq!(Function::all(2, 3).len(), 9);
        assert_eq!(Function::all(0, 0).len(), 1);
        assert_eq!(Function::all(1, 0).len(), 0);
    }

    #[test]
    fn pullback_of_identities() {
        let id = Function::identity(2);
        let p = pullback(&FinSetCarrier, &id, &id).unwrap();
        assert_eq!(p.apex, 2);
        assert_eq!(p.legs[0], p.legs[1]);
    }

    #[test]
    fn coequalizer_of_identities_is_identity() {
        let id = Function::identity(3);
        let q = coequalizer(&FinSetCarrier, &id, &id).unwrap();
        assert_eq!(q.apex, 3);
        assert_eq!(q.legs[1], id);
    }
}
