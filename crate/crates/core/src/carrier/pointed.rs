//! Finite pointed sets with basepoint `0`. Used as a non-extensive test
//! carrier: the zero object is both initial and terminal.

use serde_json::{json, Value};

use super::finset::{set_limit_parts, Function};
use super::sets::{colimit_classes_with, offsets, SetEdge};
use super::{Carrier, Cocone, Cone, GraphDiagram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
pub struct PointedCarrier;

fn pointed(f: Function) -> Result<Function> {
    if f.source == 0 || f.target == 0 || f.map[0] != 0 {
        return Err(Error::InvalidMorphism("map does not preserve the basepoint".into()));
    }
    Ok(f)
}

impl Carrier for PointedCarrier {
    type Obj = usize;
    type Mor = Function;

    fn describe(&self) -> String {
        "pointed".into()
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
            return Err(Error::InvalidMorphism("maps are not composable".into()));
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
        pointed(Function::new(*src, *tgt, maps.pop().unwrap_or_default())?)
    }

    fn subobject(&self, x: &usize, keep: &[Vec<bool>]) -> Option<Function> {
        if !keep[0][0] {
            return None;
        }
        let map: Vec<usize> = (0..*x).filter(|&e| keep[0][e]).collect();
        Some(Function {
            source: map.len(),
            target: *x,
            map,
        })
    }

    fn hom(&self, x: &usize, y: &usize) -> Vec<Function> {
        Function::all(x - 1, *y)
            .into_iter()
            .map(|f| {
                let mut map = vec![0];
                map.extend(f.map);
                Function { source: *x, target: *y, map }
            })
            .collect()
    }

    fn limit(&self, d: &GraphDiagram<Self>) -> Result<Cone<Self>> {
        d.validate(self)?;
        let edges: Vec<SetEdge> = d.edges.iter().map(|(i, j, m)| (*i, *j, m.map.as_slice())).collect();
        // The all-basepoint tuple is lexicographically first.
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
        let offs = offsets(&d.vertices, 1);
        let glue: Vec<(usize, usize)> = offs.iter().map(|&o| (0, o)).collect();
        let (count, labels) = colimit_classes_with(&d.vertices, &edges, 1, &glue);
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
        (0..*x).map(|e| Function { source: 2, target: *x, map: vec![0, e] }).collect()
    }

    fn probes_exact(&self) -> bool {
        true
    }

    fn is_known_topos(&self) -> bool {
        false
    }

    fn limit_test_objects(&self) -> Vec<usize> {
        vec![2]
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
        match v.as_u64() {
            Some(n) if n >= 1 => Ok(n as usize),
            _ => Err(Error::Json("pointed set must have positive cardinality".into())),
        }
    }

    fn mor_from_json(&self, v: &Value) -> Result<Function> {
        let f: Function = serde_json::from_value(v.clone())?;
        pointed(Function::new(f.source, f.target, f.map)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::{coproduct, initial, terminal};

    #[test]
    fn zero_object() {
        assert_eq!(initial(&PointedCarrier).unwrap(), 1);
        assert_eq!(terminal(&PointedCarrier).unwrap(), 1);
    }

    #[test]
    fn coproduct_is_wedge() {
        let c = coproduct(&PointedCarrier, &[2, 3]).unwrap();
        assert_eq!(c.apex, 4);
        assert_eq!(c.legs[0].map[0], 0);
        assert_eq!(c.legs[1].map[0], 0);
    }
}
