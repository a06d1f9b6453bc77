use std::collections::BTreeMap;
use std::sync::Arc;

use super::{is_mono, Carrier, GraphDiagram};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

/// A functor from a finite shape into a carrier.
#[derive(Clone, Debug)]
pub struct Diagram<C: Carrier> {
    shape: Arc<FinCategory>,
    objects: Vec<C::Obj>,
    morphisms: Vec<C::Mor>,
}

impl<C: Carrier> Diagram<C> {
    /// Extends generator images along paths, then checks functoriality and
    /// that every mono-marked generator lands on a monomorphism.
    pub fn new(c: &C, shape: Arc<FinCategory>, objects: Vec<C::Obj>, gens: &BTreeMap<usize, C::Mor>) -> Result<Self> {
        if objects.len() != shape.object_count() {
            return Err(Error::ShapeMismatch(format!(
                "shape has {} objects, {} given",
                shape.object_count(),
                objects.len()
            )));
        }
        for &g in shape.generators() {
            let m = gens.get(&g).ok_or_else(|| {
                Error::ShapeMismatch(format!("no image for generator {}", shape.morphism(g).name))
            })?;
            if c.dom(m) != &objects[shape.source(g)] || c.cod(m) != &objects[shape.target(g)] {
                return Err(Error::InvalidMorphism(format!(
                    "image of {} has wrong endpoints",
                    shape.morphism(g).name
                )));
            }
        }
        let mut morphisms = Vec::with_capacity(shape.morphism_count());
        for f in 0..shape.morphism_count() {
            let info = shape.morphism(f);
            let mut acc = c.identity(&objects[info.source]);
            for g in &info.path {
                acc = c.compose(&gens[g], &acc)?;
            }
            morphisms.push(acc);
        }
        let d = Diagram {
            shape,
            objects,
            morphisms,
        };
        d.validate(c)?;
        Ok(d)
    }

    pub fn validate(&self, c: &C) -> Result<()> {
        let shape = &*self.shape;
        for f in 0..shape.morphism_count() {
            let m = &self.morphisms[f];
            if c.dom(m) != &self.objects[shape.source(f)] || c.cod(m) != &self.objects[shape.target(f)] {
                return Err(Error::InvalidMorphism(format!(
                    "image of {} has wrong endpoints",
                    shape.morphism(f).name
                )));
            }
        }
        for a in 0..shape.object_count() {
            if self.morphisms[shape.identity(a)] != c.identity(&self.objects[a]) {
                return Err(Error::InvalidMorphism("diagram does not preserve identities".into()));
            }
        }
        for g in 0..shape.morphism_count() {
            for f in 0..shape.morphism_count() {
                if let Some(gf) = shape.compose(g, f) {
                    if c.compose(&self.morphisms[g], &self.morphisms[f])? != self.morphisms[gf] {
                        return Err(Error::InvalidMorphism(format!(
                            "diagram is not functorial on {}.{}",
                            shape.morphism(g).name,
                            shape.morphism(f).name
                        )));
                    }
                }
            }
        }
        for &m in shape.mono_marks() {
            if !is_mono(c, &self.morphisms[m])? {
                return Err(Error::MonoViolation(format!(
                    "{} is marked mono but its image is not monic",
                    shape.morphism(m).name
                )));
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &FinCategory {
        &self.shape
    }

    pub fn shape_arc(&self) -> Arc<FinCategory> {
        self.shape.clone()
    }

    pub fn object(&self, a: usize) -> &C::Obj {
        &self.objects[a]
    }

    pub fn objects(&self) -> &[C::Obj] {
        &self.objects
    }

    pub fn morphism(&self, f: usize) -> &C::Mor {
        &self.morphisms[f]
    }

    /// Image of a named shape morphism.
    pub fn named(&self, name: &str) -> Option<&C::Mor> {
        self.shape.morphism_index(name).map(|f| &self.morphisms[f])
    }

    /// Generators as edges; the (co)limit of this graph is that of the diagram.
    pub fn graph(&self) -> GraphDiagram<C> {
        GraphDiagram::new(
            self.objects.clone(),
            self.shape
                .generators()
                .iter()
                .map(|&g| (self.shape.source(g), self.shape.target(g), self.morphisms[g].clone()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::{FinSetCarrier, Function};
    use crate::fincat::{standard_shape, Shape};

    #[test]
    fn mono_marks_are_enforced() {
        let shape = Arc::new(standard_shape(Shape::MonoSpan));
        let m = shape.morphism_index("m").unwrap();
        let f = shape.morphism_index("f").unwrap();
        let mut gens = BTreeMap::new();
        gens.insert(m, Function::new(2, 1, vec![0, 0]).unwrap());
        gens.insert(f, Function::new(2, 1, vec![0, 0]).unwrap());
        let err = Diagram::new(&FinSetCarrier, shape, vec![2, 1, 1], &gens).unwrap_err();
        assert!(matches!(err, Error::MonoViolation(_)));
    }

    #[test]
    fn reflexive_pair_requires_sections() {
        let shape = Arc::new(standard_shape(Shape::ReflexivePair));
        let ix = |n: &str| shape.morphism_index(n).unwrap();
        let mut gens = BTreeMap::new();
        gens.insert(ix("d"), Function::new(3, 2, vec![0, 1, 1]).unwrap());
        gens.insert(ix("c"), Function::new(3, 2, vec![0, 1, 0]).unwrap());
        gens.insert(ix("r"), Function::new(2, 3, vec![0, 1]).unwrap());
        Diagram::new(&FinSetCarrier, shape.clone(), vec![3, 2], &gens).unwrap();
        gens.insert(ix("r"), Function::new(2, 3, vec![0, 2]).unwrap());
        assert!(Diagram::new(&FinSetCarrier, shape, vec![3, 2], &gens).is_err());
    }
}
