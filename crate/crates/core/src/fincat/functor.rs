use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::FinCategory;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinFunctor {
    domain: FinCategory,
    codomain: FinCategory,
    object_map: Vec<usize>,
    morphism_map: Vec<usize>,
}

impl FinFunctor {
    /// Validates functoriality exhaustively.
    pub fn new(
        domain: FinCategory,
        codomain: FinCategory,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
    ) -> Result<Self> {
        if object_map.len() != domain.object_count() || morphism_map.len() != domain.morphism_count() {
            return Err(Error::IllFormed("functor maps have wrong length".into()));
        }
        if object_map.iter().any(|&a| a >= codomain.object_count())
            || morphism_map.iter().any(|&f| f >= codomain.morphism_count())
        {
            return Err(Error::IllFormed("functor maps out of range".into()));
        }
        for f in 0..domain.morphism_count() {
            let h = morphism_map[f];
            if codomain.source(h) != object_map[domain.source(f)]
                || codomain.target(h) != object_map[domain.target(f)]
            {
                return Err(Error::IllFormed(format!(
                    "functor does not preserve endpoints of {}",
                    domain.morphism(f).name
                )));
            }
        }
        for a in 0..domain.object_count() {
            if morphism_map[domain.identity(a)] != codomain.identity(object_map[a]) {
                return Err(Error::IllFormed("functor does not preserve identities".into()));
            }
        }
        for g in 0..domain.morphism_count() {
            for f in 0..domain.morphism_count() {
                if let Some(gf) = domain.compose(g, f) {
                    if codomain.compose(morphism_map[g], morphism_map[f]) != Some(morphism_map[gf]) {
                        return Err(Error::IllFormed("functor does not preserve composition".into()));
                    }
                }
            }
        }
        Ok(FinFunctor {
            domain,
            codomain,
            object_map,
            morphism_map,
        })
    }

    pub fn identity(c: &FinCategory) -> Self {
        FinFunctor {
            domain: c.clone(),
            codomain: c.clone(),
            object_map: (0..c.object_count()).collect(),
            morphism_map: (0..c.morphism_count()).collect(),
        }
    }

    pub fn domain(&self) -> &FinCategory {
        &self.domain
    }

    pub fn codomain(&self) -> &FinCategory {
        &self.codomain
    }

    pub fn object(&self, a: usize) -> usize {
        self.object_map[a]
    }

    pub fn morphism(&self, f: usize) -> usize {
        self.morphism_map[f]
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn morphism_map(&self) -> &[usize] {
        &self.morphism_map
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{standard_shape, Shape};

    #[test]
    fn non_functorial_map_is_rejected() {
        let arrow = standard_shape(Shape::WalkingArrow);
        let pair = standard_shape(Shape::Discrete(2));
        // sends f to an identity while separating its endpoints
        let err = FinFunctor::new(arrow.clone(), pair, vec![0, 1], vec![0, 1, 0]).unwrap_err();
        assert!(matches!(err, Error::IllFormed(_)));
        FinFunctor::identity(&arrow);
    }
}
