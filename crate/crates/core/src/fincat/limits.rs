//! Finite limits inside a [`FinCategory`], found by exhaustive search.

use super::FinCategory;

/// A diagram inside a finite category: vertices are objects, edges are
/// `(from, to, morphism)` with `morphism: vertices[from] -> vertices[to]`.
pub struct InnerDiagram<'a> {
    pub vertices: &'a [usize],
    pub edges: &'a [(usize, usize, usize)],
}

impl FinCategory {
    fn cones(&self, apex: usize, d: &InnerDiagram) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut legs = Vec::with_capacity(d.vertices.len());
        self.cones_rec(apex, d, &mut legs, &mut out);
        out
    }

    fn cones_rec(&self, apex: usize, d: &InnerDiagram, legs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = legs.len();
        if k == d.vertices.len() {
            let ok = d
                .edges
                .iter()
                .all(|&(i, j, m)| self.compose(m, legs[i]) == Some(legs[j]));
            if ok {
                out.push(legs.clone());
            }
            return;
        }
        for leg in self.hom(apex, d.vertices[k]) {
            legs.push(leg);
            self.cones_rec(apex, d, legs, out);
            legs.pop();
        }
    }

    /// First limiting cone in object order, if any.
    pub fn inner_limit(&self, d: &InnerDiagram) -> Option<(usize, Vec<usize>)> {
        let all_cones: Vec<Vec<Vec<usize>>> = (0..self.object_count()).map(|t| self.cones(t, d)).collect();
        for apex in 0..self.object_count() {
            'cone: for cone in &all_cones[apex] {
                for (t, cones_t) in all_cones.iter().enumerate() {
                    let maps = self.hom(t, apex);
                    if maps.len() != cones_t.len() {
                        continue 'cone;
                    }
                    let mut induced: Vec<Vec<usize>> = maps
                        .iter()
                        .map(|&u| cone.iter().map(|&leg| self.compose(leg, u).expect("composable")).collect())
                        .collect();
                    induced.sort();
                    let before = induced.len();
                    induced.dedup();
                    if induced.len() != before {
                        continue 'cone;
                    }
                    let mut expected = cones_t.clone();
                    expected.sort();
                    if induced != expected {
                        continue 'cone;
                    }
                }
                return Some((apex, cone.clone()));
            }
        }
        None
    }

    pub fn inner_terminal(&self) -> Option<usize> {
        self.inner_limit(&InnerDiagram {
            vertices: &[],
            edges: &[],
        })
        .map(|(a, _)| a)
    }

    pub fn inner_product(&self, a: usize, b: usize) -> Option<(usize, usize, usize)> {
        self.inner_limit(&InnerDiagram {
            vertices: &[a, b],
            edges: &[],
        })
        .map(|(p, legs)| (p, legs[0], legs[1]))
    }

    pub fn inner_equalizer(&self, f: usize, g: usize) -> Option<(usize, usize)> {
        let (a, b) = (self.source(f), self.target(f));
        self.inner_limit(&InnerDiagram {
            vertices: &[a, b],
            edges: &[(0, 1, f), (0, 1, g)],
        })
        .map(|(e, legs)| (e, legs[0]))
    }

    pub fn inner_pullback(&self, f: usize, g: usize) -> Option<(usize, usize, usize)> {
        self.inner_limit(&InnerDiagram {
            vertices: &[self.source(f), self.source(g), self.target(f)],
            edges: &[(0, 2, f), (1, 2, g)],
        })
        .map(|(p, legs)| (p, legs[0], legs[1]))
    }

    pub fn is_finitely_complete(&self) -> bool {
        if self.inner_terminal().is_none() {
            return false;
        }
        let n = self.object_count();
        for a in 0..n {
            for b in 0..n {
                if self.inner_product(a, b).is_none() {
                    return false;
                }
                let hom = self.hom(a, b);
                for &f in &hom {
                    for &g in &hom {
                        if self.inner_equalizer(f, g).is_none() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use crate::fincat::{parse_category, standard_shape, Shape};

    #[test]
    fn point_is_finitely_complete() {
        assert!(standard_shape(Shape::Discrete(1)).is_finitely_complete());
        assert!(!standard_shape(Shape::Discrete(2)).is_finitely_complete());
    }

    #[test]
    fn chain_has_meets() {
        // 0 <= 1 as a category: terminal is 1, products are meets.
        let c = parse_category("objects Z, O; arrows u: Z -> O;").unwrap();
        assert_eq!(c.inner_terminal(), c.object_index("O"));
        let (p, _, _) = c.inner_product(0, 1).unwrap();
        assert_eq!(p, 0);
        assert!(c.is_finitely_complete());
    }
}
