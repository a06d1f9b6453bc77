//! Subobjects, images and internal relations.

use serde_json::{json, Value};

use crate::carrier::{
    coproduct, copairing, factor_through_mono, image, is_iso, is_mono, kernel_pair, pairing, product, pullback,
    pushout, Carrier, Cone,
};
use crate::error::{Error, Result};

/// A monomorphism into `ambient`, compared up to mutual factorization.
#[derive(Clone, Debug)]
pub struct Subobject<C: Carrier> {
    pub ambient: C::Obj,
    pub mono: C::Mor,
}

impl<C: Carrier> Subobject<C> {
    /// Checks monicity and replaces the mono by the canonical inclusion when
    /// the two represent the same subobject.
    pub fn new(c: &C, mono: C::Mor) -> Result<Self> {
        if !is_mono(c, &mono)? {
            return Err(Error::InvalidMorphism("subobject needs a monomorphism".into()));
        }
        let ambient = c.cod(&mono).clone();
        let (_, inclusion) = image(c, &mono)?;
        let mono = if factor_through_mono(c, &inclusion, &mono)?.is_some() {
            inclusion
        } else {
            mono
        };
        Ok(Subobject { ambient, mono })
    }

    pub fn whole(c: &C, x: &C::Obj) -> Self {
        Subobject {
            ambient: x.clone(),
            mono: c.identity(x),
        }
    }

    pub fn leq(&self, c: &C, other: &Self) -> Result<bool> {
        Ok(factor_through_mono(c, &self.mono, &other.mono)?.is_some())
    }

    pub fn same(&self, c: &C, other: &Self) -> Result<bool> {
        Ok(self.leq(c, other)? && other.leq(c, self)?)
    }

    pub fn object(&self, c: &C) -> C::Obj {
        c.dom(&self.mono).clone()
    }

    /// Elements of the ambient in the subobject, per sort.
    pub fn elements(&self, c: &C) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = c.graded(&self.mono);
        for v in out.iter_mut() {
            v.sort_unstable();
        }
        out
    }

    pub fn to_json(&self, c: &C) -> Value {
        json!({"ambient": c.obj_json(&self.ambient), "elements": self.elements(c), "mono": c.mor_json(&self.mono)})
    }
}

/// `im f` as a subobject of the codomain.
pub fn image_subobject<C: Carrier>(c: &C, f: &C::Mor) -> Result<Subobject<C>> {
    let (_, m) = image(c, f)?;
    Ok(Subobject {
        ambient: c.cod(f).clone(),
        mono: m,
    })
}

pub fn intersection<C: Carrier>(c: &C, a: &Subobject<C>, b: &Subobject<C>) -> Result<Subobject<C>> {
    let p = pullback(c, &a.mono, &b.mono)?;
    Subobject::new(c, c.compose(&a.mono, &p.legs[0])?)
}

/// Image of the copairing `A + B -> C`.
pub fn union<C: Carrier>(c: &C, a: &Subobject<C>, b: &Subobject<C>) -> Result<Subobject<C>> {
    let sum = coproduct(c, &[a.object(c), b.object(c)])?;
    let u = copairing(c, &sum, &[a.mono.clone(), b.mono.clone()])?;
    image_subobject(c, &u)
}

/// Whether `A ∩ B -> A, B -> A ∪ B` is a pushout square.
pub fn is_effective_union<C: Carrier>(c: &C, a: &Subobject<C>, b: &Subobject<C>) -> Result<bool> {
    let p = pullback(c, &a.mono, &b.mono)?;
    let q = pushout(c, &p.legs[0], &p.legs[1])?;
    let un = union(c, a, b)?;
    let ia = factor_through_mono(c, &a.mono, &un.mono)?.expect("A is below its union");
    let ib = factor_through_mono(c, &b.mono, &un.mono)?.expect("B is below its union");
    let corner = c.compose(&ia, &p.legs[0])?;
    let Some(u) = c.mediate_colimit(&q, &un.object(c), &[corner, ia, ib]) else {
        return Ok(false);
    };
    Ok(is_iso(c, &u))
}

/// A relation `R >-> X × X` with legs `d, c: R -> X`.
#[derive(Clone, Debug)]
pub struct Relation<C: Carrier> {
    pub carrier: C::Obj,
    pub square: Cone<C>,
    pub sub: Subobject<C>,
    pub d: C::Mor,
    pub c: C::Mor,
}

impl<C: Carrier> Relation<C> {
    pub fn from_mono(c: &C, x: &C::Obj, mono: C::Mor) -> Result<Self> {
        let square = product(c, &[x.clone(), x.clone()])?;
        if c.cod(&mono) != &square.apex {
            return Err(Error::InvalidMorphism("relation must be a subobject of X × X".into()));
        }
        let sub = Subobject::new(c, mono)?;
        let d = c.compose(&square.legs[0], &sub.mono)?;
        let cc = c.compose(&square.legs[1], &sub.mono)?;
        Ok(Relation {
            carrier: x.clone(),
            square,
            sub,
            d,
            c: cc,
        })
    }

    /// The relation represented by an arbitrary span, via its image.
    pub fn from_span(c: &C, x: &C::Obj, d: &C::Mor, cc: &C::Mor) -> Result<Self> {
        let square = product(c, &[x.clone(), x.clone()])?;
        let pair = pairing(c, &square, &[d.clone(), cc.clone()])?;
        let (_, m) = image(c, &pair)?;
        Self::from_mono(c, x, m)
    }

    /// Relation on the kept elements of `X × X`.
    pub fn from_predicate(c: &C, x: &C::Obj, keep: impl Fn(usize, usize, usize) -> bool) -> Result<Self> {
        let square = product(c, &[x.clone(), x.clone()])?;
        let sorts = c.sorts(&square.apex);
        let mask: Vec<Vec<bool>> = sorts
            .iter()
            .enumerate()
            .map(|(s, &n)| {
                (0..n)
                    .map(|e| keep(s, c.apply(&square.legs[0], s, e), c.apply(&square.legs[1], s, e)))
                    .collect()
            })
            .collect();
        let m = c
            .subobject(&square.apex, &mask)
            .ok_or_else(|| Error::InvalidMorphism("pairs do not form a sub-object".into()))?;
        Self::from_mono(c, x, m)
    }

    pub fn diagonal(c: &C, x: &C::Obj) -> Result<Self> {
        let id = c.identity(x);
        Self::from_span(c, x, &id, &id)
    }

    pub fn object(&self, c: &C) -> C::Obj {
        self.sub.object(c)
    }

    /// Pairs `(d r, c r)` per sort, sorted.
    pub fn pairs(&self, c: &C) -> Vec<Vec<(usize, usize)>> {
        let dg = c.graded(&self.d);
        let cg = c.graded(&self.c);
        dg.into_iter()
            .zip(cg)
            .map(|(ds, cs)| {
                let mut v: Vec<(usize, usize)> = ds.into_iter().zip(cs).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    pub fn same(&self, c: &C, other: &Self) -> Result<bool> {
        self.sub.same(c, &other.sub)
    }

    pub fn leq(&self, c: &C, other: &Self) -> Result<bool> {
        self.sub.leq(c, &other.sub)
    }

    pub fn is_reflexive(&self, c: &C) -> Result<bool> {
        Relation::diagonal(c, &self.carrier)?.leq(c, self)
    }

    pub fn is_symmetric(&self, c: &C) -> Result<bool> {
        rel_opposite(c, self)?.leq(c, self)
    }

    pub fn is_transitive(&self, c: &C) -> Result<bool> {
        rel_compose(c, self, self)?.leq(c, self)
    }

    pub fn is_equivalence(&self, c: &C) -> Result<bool> {
        Ok(self.is_reflexive(c)? && self.is_symmetric(c)? && self.is_transitive(c)?)
    }

    pub fn to_json(&self, c: &C) -> Value {
        json!({"carrier": c.obj_json(&self.carrier), "pairs": self.pairs(c)})
    }
}

/// Kernel pair of `f` as a relation on its domain.
pub fn kernel_pair_relation<C: Carrier>(c: &C, f: &C::Mor) -> Result<Relation<C>> {
    let (_, p1, p2) = kernel_pair(c, f)?;
    Relation::from_span(c, c.dom(f), &p1, &p2)
}

pub fn rel_opposite<C: Carrier>(c: &C, r: &Relation<C>) -> Result<Relation<C>> {
    Relation::from_span(c, &r.carrier, &r.c, &r.d)
}

/// `S ∘ R`: first `R`, then `S`.
pub fn rel_compose<C: Carrier>(c: &C, s: &Relation<C>, r: &Relation<C>) -> Result<Relation<C>> {
    if r.carrier != s.carrier {
        return Err(Error::InvalidMorphism("relations on different objects".into()));
    }
    let p = pullback(c, &r.c, &s.d)?;
    let d = c.compose(&r.d, &p.legs[0])?;
    let cc = c.compose(&s.c, &p.legs[1])?;
    Relation::from_span(c, &r.carrier, &d, &cc)
}

/// Iterates `T ↦ T T° T` from `R` until the subobject is stable; returns the
/// stable relation and the number of strict enlargements.
pub fn chain_stabilize<C: Carrier>(c: &C, r: &Relation<C>) -> Result<(Relation<C>, usize)> {
    let mut chain = relation_chain(c, r)?;
    let steps = chain.len() - 1;
    Ok((chain.pop().expect("chain starts at R"), steps))
}

/// The increasing chain `R = T_0 ⊆ T_1 ⊆ ... ⊆ T_n` with `T_n` stable.
pub fn relation_chain<C: Carrier>(c: &C, r: &Relation<C>) -> Result<Vec<Relation<C>>> {
    if !r.is_reflexive(c)? {
        return Err(Error::InvalidMorphism("chain needs a reflexive relation".into()));
    }
    let bound: usize = c.total_size(&r.square.apex) + 1;
    let mut chain = vec![r.clone()];
    for _ in 0..=bound {
        let t = chain.last().expect("nonempty");
        let next = rel_compose(c, t, &rel_compose(c, &rel_opposite(c, t)?, t)?)?;
        if next.same(c, t)? {
            return Ok(chain);
        }
        chain.push(next);
    }
    unreachable!("the subobject lattice of a finite object is finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::{FinSetCarrier, Function};

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation<FinSetCarrier> {
        Relation::from_predicate(&FinSetCarrier, &n, |_, a, b| pairs.contains(&(a, b))).unwrap()
    }

    #[test]
    fn opposite_swaps() {
        let r = rel(3, &[(0, 1)]);
        let o = rel_opposite(&FinSetCarrier, &r).unwrap();
        assert_eq!(o.pairs(&FinSetCarrier), vec![vec![(1, 0)]]);
    }

    #[test]
    fn composition_follows_r_then_s() {
        let c = FinSetCarrier;
        let s = rel(3, &[(1, 2)]);
        let r = rel(3, &[(0, 1)]);
        assert_eq!(rel_compose(&c, &s, &r).unwrap().pairs(&c), vec![vec![(0, 2)]]);
        let diag = Relation::diagonal(&c, &3).unwrap();
        assert!(rel_compose(&c, &diag, &r).unwrap().same(&c, &r).unwrap());
    }

    #[test]
    fn kernel_pair_example() {
        let c = FinSetCarrier;
        let f = Function::new(3, 2, vec![0, 0, 1]).unwrap();
        let k = kernel_pair_relation(&c, &f).unwrap();
        assert_eq!(k.pairs(&c), vec![vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]]);
        assert!(k.is_equivalence(&c).unwrap());
    }

    #[test]
    fn chain_of_path_relation_is_full() {
        let c = FinSetCarrier;
        let r = rel(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]);
        let (star, steps) = chain_stabilize(&c, &r).unwrap();
        assert_eq!(star.pairs(&c)[0].len(), 9);
        assert!(steps >= 1);
        let diag = Relation::diagonal(&c, &3).unwrap();
        assert_eq!(chain_stabilize(&c, &diag).unwrap().1, 0);
    }

    #[test]
    fn overlapping_union_is_effective() {
        let c = FinSetCarrier;
        let a = Subobject::new(&c, Function::new(2, 3, vec![0, 1]).unwrap()).unwrap();
        let b = Subobject::new(&c, Function::new(2, 3, vec![1, 2]).unwrap()).unwrap();
        assert_eq!(intersection(&c, &a, &b).unwrap().elements(&c), vec![vec![1]]);
        assert_eq!(union(&c, &a, &b).unwrap().elements(&c), vec![vec![0, 1, 2]]);
        assert!(is_effective_union(&c, &a, &b).unwrap());
    }
}
