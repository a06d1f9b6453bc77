//! `Fam_f(C)`: finite families of objects of a finite category.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::carrier::{coproduct, copairing, is_iso, pairing, product, terminal, yoneda_map, Carrier, Presheaf, NatTrans, PresheafCarrier};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

/// A family `(X_i)_{i < n}` of base objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamObject(pub Vec<usize>);

/// `(f, g)` with `f: I -> J` and `g_i: X_i -> Y_{f(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamMorphism {
    pub source: FamObject,
    pub target: FamObject,
    pub reindex: Vec<usize>,
    pub components: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FamCategory {
    base: Arc<FinCategory>,
}

pub fn famf_build(base: &FinCategory) -> FamCategory {
    FamCategory {
        base: Arc::new(base.clone()),
    }
}

impl FamCategory {
    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn morphism(&self, source: FamObject, target: FamObject, reindex: Vec<usize>, components: Vec<usize>) -> Result<FamMorphism> {
        let b = &*self.base;
        if reindex.len() != source.0.len() || components.len() != source.0.len() {
            return Err(Error::InvalidMorphism("one index and component per member".into()));
        }
        for (i, (&j, &g)) in reindex.iter().zip(&components).enumerate() {
            if j >= target.0.len() || g >= b.morphism_count() || b.source(g) != source.0[i] || b.target(g) != target.0[j] {
                return Err(Error::InvalidMorphism(format!("component {i} has wrong endpoints")));
            }
        }
        Ok(FamMorphism {
            source,
            target,
            reindex,
            components,
        })
    }

    pub fn identity(&self, x: &FamObject) -> FamMorphism {
        FamMorphism {
            source: x.clone(),
            target: x.clone(),
            reindex: (0..x.0.len()).collect(),
            components: x.0.iter().map(|&a| self.base.identity(a)).collect(),
        }
    }

    pub fn compose(&self, g: &FamMorphism, f: &FamMorphism) -> Result<FamMorphism> {
        if f.target != g.source {
            return Err(Error::InvalidMorphism("family morphisms do not compose".into()));
        }
        let components = (0..f.reindex.len())
            .map(|i| self.base.compose(g.components[f.reindex[i]], f.components[i]).expect("composable"))
            .collect();
        Ok(FamMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            reindex: f.reindex.iter().map(|&j| g.reindex[j]).collect(),
            components,
        })
    }

    /// Every morphism, reindexing-major.
    pub fn hom(&self, x: &FamObject, y: &FamObject) -> Vec<FamMorphism> {
        let choices: Vec<Vec<(usize, usize)>> = x
            .0
            .iter()
            .map(|&a| {
                y.0.iter()
                    .enumerate()
                    .flat_map(|(j, &b)| self.base.hom(a, b).into_iter().map(move |g| (j, g)))
                    .collect()
            })
            .collect();
        if choices.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; choices.len()];
        loop {
            out.push(FamMorphism {
                source: x.clone(),
                target: y.clone(),
                reindex: idx.iter().enumerate().map(|(i, &k)| choices[i][k].0).collect(),
                components: idx.iter().enumerate().map(|(i, &k)| choices[i][k].1).collect(),
            });
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// All families with at most `max_len` members.
    pub fn objects_up_to(&self, max_len: usize) -> Vec<FamObject> {
        let n = self.base.object_count();
        let mut out = vec![FamObject(Vec::new())];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let next: Vec<Vec<usize>> = layer
                .iter()
                .flat_map(|v: &Vec<usize>| {
                    (0..n).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
            out.extend(next.iter().cloned().map(FamObject));
            layer = next;
        }
        out
    }

    /// `W(a) = (a)`.
    pub fn w(&self, a: usize) -> FamObject {
        FamObject(vec![a])
    }

    pub fn w_morphism(&self, f: usize) -> FamMorphism {
        FamMorphism {
            source: self.w(self.base.source(f)),
            target: self.w(self.base.target(f)),
            reindex: vec![0],
            components: vec![f],
        }
    }

    pub fn initial(&self) -> FamObject {
        FamObject(Vec::new())
    }

    /// Concatenation with its injections.
    pub fn coproduct(&self, xs: &[FamObject]) -> (FamObject, Vec<FamMorphism>) {
        let sum = FamObject(xs.iter().flat_map(|x| x.0.iter().copied()).collect());
        let mut offset = 0;
        let injections = xs
            .iter()
            .map(|x| {
                let m = FamMorphism {
                    source: x.clone(),
                    target: sum.clone(),
                    reindex: (offset..offset + x.0.len()).collect(),
                    components: x.0.iter().map(|&a| self.base.identity(a)).collect(),
                };
                offset += x.0.len();
                m
            })
            .collect();
        (sum, injections)
    }

    /// `(1)` when the base has a terminal object.
    pub fn terminal(&self) -> Option<FamObject> {
        self.base.inner_terminal().map(|t| self.w(t))
    }

    /// Indexed by `I × J` in row-major order.
    pub fn product(&self, x: &FamObject, y: &FamObject) -> Option<(FamObject, FamMorphism, FamMorphism)> {
        let mut objs = Vec::new();
        let (mut r1, mut c1, mut r2, mut c2) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (i, &a) in x.0.iter().enumerate() {
            for (j, &b) in y.0.iter().enumerate() {
                let (p, p1, p2) = self.base.inner_product(a, b)?;
                objs.push(p);
                r1.push(i);
                c1.push(p1);
                r2.push(j);
                c2.push(p2);
            }
        }
        let prod = FamObject(objs);
        let leg = |target: &FamObject, reindex, components| FamMorphism {
            source: prod.clone(),
            target: target.clone(),
            reindex,
            components,
        };
        let (l1, l2) = (leg(x, r1, c1), leg(y, r2, c2));
        Some((prod, l1, l2))
    }

    /// Members where both reindexings agree, each replaced by the base
    /// equalizer of the two components.
    pub fn equalizer(&self, f: &FamMorphism, g: &FamMorphism) -> Option<(FamObject, FamMorphism)> {
        let mut objs = Vec::new();
        let (mut reindex, mut components) = (Vec::new(), Vec::new());
        for i in 0..f.reindex.len() {
            if f.reindex[i] != g.reindex[i] {
                continue;
            }
            let (e, m) = self.base.inner_equalizer(f.components[i], g.components[i])?;
            objs.push(e);
            reindex.push(i);
            components.push(m);
        }
        let eq = FamObject(objs);
        Some((
            eq.clone(),
            FamMorphism {
                source: eq,
                target: f.source.clone(),
                reindex,
                components,
            },
        ))
    }

    /// `J(X) = ⊔ Y(X_i)` with its coproduct injections.
    pub fn j_object(&self, c: &PresheafCarrier, x: &FamObject) -> Result<(Presheaf, Vec<NatTrans>)> {
        let reps: Vec<Presheaf> = x.0.iter().map(|&a| c.representable(a).clone()).collect();
        let s = coproduct(c, &reps)?;
        Ok((s.apex, s.legs))
    }

    pub fn j_morphism(&self, c: &PresheafCarrier, f: &FamMorphism) -> Result<NatTrans> {
        let (jy, tgt_legs) = self.j_object(c, &f.target)?;
        let reps: Vec<Presheaf> = f.source.0.iter().map(|&a| c.representable(a).clone()).collect();
        let s = coproduct(c, &reps)?;
        if reps.is_empty() {
            return c.from_graded(&s.apex, &jy, vec![Vec::new(); self.base.object_count()]);
        }
        let maps = (0..f.reindex.len())
            .map(|i| c.compose(&tgt_legs[f.reindex[i]], &yoneda_map(&self.base, f.components[i])))
            .collect::<Result<Vec<_>>>()?;
        copairing(c, &s, &maps)
    }

    /// Sampled check that `J` preserves the terminal object, binary
    /// coproducts, binary products and equalizers.
    pub fn check_preservation(&self, c: &PresheafCarrier, max_len: usize, samples: usize, seed: u64) -> Result<PreservationReport> {
        if c.base() != &*self.base {
            return Err(Error::Unsupported("presheaf carrier over a different base".into()));
        }
        let mut rep = PreservationReport::default();
        if let Some(t) = self.terminal() {
            let (jt, _) = self.j_object(c, &t)?;
            let one = terminal(c)?;
            let hom = c.hom(&jt, &one);
            rep.terminal = Some(hom.len() == 1 && is_iso(c, &hom[0]));
        }
        let objs = self.objects_up_to(max_len);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = &objs[rng.gen_range(0..objs.len())];
            let y = &objs[rng.gen_range(0..objs.len())];
            let (jx, _) = self.j_object(c, x)?;
            let (jy, _) = self.j_object(c, y)?;

            let (_, inj) = self.coproduct(&[x.clone(), y.clone()]);
            let js = coproduct(c, &[jx.clone(), jy.clone()])?;
            let cmp = copairing(c, &js, &[self.j_morphism(c, &inj[0])?, self.j_morphism(c, &inj[1])?])?;
            rep.coproducts.record(is_iso(c, &cmp));

            if let Some((_, p1, p2)) = self.product(x, y) {
                let jp = product(c, &[jx.clone(), jy.clone()])?;
                let cmp = pairing(c, &jp, &[self.j_morphism(c, &p1)?, self.j_morphism(c, &p2)?])?;
                rep.products.record(is_iso(c, &cmp));
            }

            let hom = self.hom(x, y);
            if !hom.is_empty() {
                let f = &hom[rng.gen_range(0..hom.len())];
                let g = &hom[rng.gen_range(0..hom.len())];
                if let Some((_, e)) = self.equalizer(f, g) {
                    let je = self.j_morphism(c, &e)?;
                    let jf = self.j_morphism(c, f)?;
                    let eq = crate::carrier::equalizer(c, &jf, &self.j_morphism(c, g)?)?;
                    let legs = [je.clone(), c.compose(&jf, &je)?];
                    let ok = c.mediate_limit(&eq, c.dom(&je), &legs).is_some_and(|u| is_iso(c, &u));
                    rep.equalizers.record(ok);
                }
            }
        }
        Ok(rep)
    }

    /// Object and morphism counts over families of at most `max_len` members.
    pub fn summary(&self, max_len: usize) -> Value {
        let objs = self.objects_up_to(max_len);
        let morphisms: usize = objs
            .iter()
            .map(|x| objs.iter().map(|y| self.hom(x, y).len()).sum::<usize>())
            .sum();
        json!({
            "max_family_size": max_len,
            "objects": objs.len(),
            "morphisms": morphisms,
            "finitely_complete_base": self.base.is_finitely_complete(),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub total: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.total += 1;
        if ok {
            self.passed += 1;
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub terminal: Option<bool>,
    pub coproducts: Tally,
    pub products: Tally,
    pub equalizers: Tally,
}

impl PreservationReport {
    pub fn all_passed(&self) -> bool {
        self.terminal != Some(false)
            && self.coproducts.all_passed()
            && self.products.all_passed()
            && self.equalizers.all_passed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{standard_shape, Shape};

    #[test]
    fn product_over_point_multiplies() {
        let fam = famf_build(&standard_shape(Shape::Discrete(1)));
        let (p, _, _) = fam.product(&FamObject(vec![0, 0]), &FamObject(vec![0, 0, 0])).unwrap();
        assert_eq!(p.0.len(), 6);
        // Universal property: maps from (0) into the product pair up with
        // pairs of maps into the factors.
        let one = fam.w(0);
        assert_eq!(fam.hom(&one, &p).len(), 6);
    }

    #[test]
    fn w_is_full_and_faithful() {
        let base = standard_shape(Shape::WalkingArrow);
        let fam = famf_build(&base);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(fam.hom(&fam.w(a), &fam.w(b)).len(), base.hom(a, b).len());
            }
        }
    }

    #[test]
    fn empty_family_is_coproduct_unit() {
        let fam = famf_build(&standard_shape(Shape::WalkingArrow));
        let (s, _) = fam.coproduct(&[fam.initial(), fam.w(1)]);
        assert_eq!(s, fam.w(1));
    }

    #[test]
    fn composition_is_associative_with_identities() {
        let fam = famf_build(&standard_shape(Shape::WalkingArrow));
        let objs = fam.objects_up_to(2);
        for x in &objs {
            for f in fam.hom(x, &objs[4]) {
                assert_eq!(fam.compose(&fam.identity(&f.target), &f).unwrap(), f);
                assert_eq!(fam.compose(&f, &fam.identity(x)).unwrap(), f);
            }
        }
    }

    #[test]
    fn j_preserves_structure() {
        let base = standard_shape(Shape::WalkingArrow);
        let fam = famf_build(&base);
        let c = PresheafCarrier::new("walking_arrow", base);
        let rep = fam.check_preservation(&c, 2, 40, 3).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        assert_eq!(rep.terminal, Some(true));
    }
}
