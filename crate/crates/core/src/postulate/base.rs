use std::collections::HashSet;
use std::sync::Arc;

use serde_json::{json, Value};

use super::{zigzag_sieve, CoconePresentation};
use crate::carrier::{
    coequalizer, coproduct, image, pullback, yoneda_map, Carrier, Cocone, NatTrans, Presheaf, PresheafCarrier,
};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

/// Orthogonal to every representable: precomposition with `f` is a
/// bijection `P(ψ, YA) -> P(φ, YA)` for each object `A`.
pub fn is_final(c: &PresheafCarrier, f: &NatTrans) -> bool {
    (0..c.base().object_count()).all(|a| {
        let ya = c.representable(a);
        let from_target = c.hom(&f.target, ya);
        let from_source = c.hom(&f.source, ya);
        let mut seen = HashSet::new();
        for g in &from_target {
            let gf = c.compose(g, f).expect("composable");
            if !seen.insert(gf.components) {
                return false;
            }
        }
        seen.len() == from_source.len()
    })
}

/// Final, and every pullback along a map from a representable is final.
pub fn is_stably_final(c: &PresheafCarrier, f: &NatTrans) -> Result<bool> {
    if !is_final(c, f) {
        return Ok(false);
    }
    for p in c.probes(&f.target) {
        let pb = pullback(c, f, &p)?;
        if !is_final(c, &pb.legs[1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn copair(c: &PresheafCarrier, sum: &Cocone<PresheafCarrier>, maps: &[NatTrans], target: &Presheaf) -> Result<NatTrans> {
    c.mediate_colimit(sum, target, maps)
        .ok_or_else(|| Error::InvalidMorphism("maps do not form a cocone under the coproduct".into()))
}

/// A cocone presentation inside a finite category, with arrows given by
/// morphism index.
#[derive(Clone, Debug)]
pub struct BasePresentation {
    pub base: Arc<FinCategory>,
    pub target: usize,
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub r: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseVerdict {
    /// (P1) and (P2) for `f: φ -> YC`.
    pub p1: bool,
    pub p2: bool,
    /// (P1') and (P2') from the zig-zag sieves.
    pub p1_prime: bool,
    pub p2_prime: bool,
    pub f_stably_final: bool,
    pub max_rounds: usize,
}

impl BaseVerdict {
    pub fn by_definition(&self) -> bool {
        self.p1 && self.p2
    }

    pub fn by_sieves(&self) -> bool {
        self.p1_prime && self.p2_prime
    }

    pub fn by_finality(&self) -> bool {
        self.f_stably_final && self.p2_prime
    }

    pub fn consistent(&self) -> bool {
        self.by_definition() == self.by_sieves() && self.by_sieves() == self.by_finality()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": crate::exactness::SCHEMA_VERSION,
            "postulated": self.by_sieves(),
            "P1": self.p1,
            "P2": self.p2,
            "P1_prime": self.p1_prime,
            "P2_prime": self.p2_prime,
            "f_stably_final": self.f_stably_final,
            "routes_agree": self.consistent(),
            "max_rounds": self.max_rounds,
        })
    }
}

impl BasePresentation {
    pub fn new(
        base: Arc<FinCategory>,
        target: usize,
        sigma: Vec<usize>,
        tau: Vec<usize>,
        s: Vec<usize>,
        t: Vec<usize>,
        r: Vec<usize>,
    ) -> Result<Self> {
        if !base.is_finitely_complete() {
            return Err(Error::Unsupported("base category is not finitely complete".into()));
        }
        let ni = s.len();
        if sigma.len() != ni || tau.len() != ni || t.len() != ni {
            return Err(Error::IllFormed("presentation index sets disagree in size".into()));
        }
        for &rj in &r {
            if rj >= base.morphism_count() || base.target(rj) != target {
                return Err(Error::InvalidMorphism("leg does not reach the target".into()));
            }
        }
        for i in 0..ni {
            if sigma[i] >= r.len() || tau[i] >= r.len() {
                return Err(Error::IllFormed("relation points outside J".into()));
            }
            if s[i] >= base.morphism_count() || t[i] >= base.morphism_count() {
                return Err(Error::InvalidMorphism("unknown morphism".into()));
            }
            if base.source(s[i]) != base.source(t[i])
                || base.target(s[i]) != base.source(r[sigma[i]])
                || base.target(t[i]) != base.source(r[tau[i]])
            {
                return Err(Error::InvalidMorphism(format!("relation {i} has wrong endpoints")));
            }
            if base.compose(r[sigma[i]], s[i]) != base.compose(r[tau[i]], t[i]) {
                return Err(Error::InvalidMorphism(format!("cocone condition fails at relation {i}")));
            }
        }
        Ok(BasePresentation {
            base,
            target,
            sigma,
            tau,
            s,
            t,
            r,
        })
    }

    pub fn carrier(&self) -> PresheafCarrier {
        PresheafCarrier::new("presheaves", (*self.base).clone())
    }

    /// The image under Yoneda.
    pub fn yoneda_presentation(&self, c: &PresheafCarrier) -> Result<CoconePresentation<PresheafCarrier>> {
        let y = |f: usize| yoneda_map(&self.base, f);
        CoconePresentation::new(
            c,
            (0..self.s.len()).map(|i| format!("R{i}")).collect(),
            (0..self.r.len()).map(|j| format!("B{j}")).collect(),
            self.sigma.clone(),
            self.tau.clone(),
            self.s.iter().map(|&f| y(f)).collect(),
            self.t.iter().map(|&f| y(f)).collect(),
            self.r.iter().map(|&f| y(f)).collect(),
            c.representable(self.target).clone(),
        )
    }

    /// `f: φ -> YC`, where `φ` is the coequalizer of `⊔ YA_i ⇉ ⊔ YB_j`.
    pub fn weight_map(&self, c: &PresheafCarrier) -> Result<NatTrans> {
        let p = self.yoneda_presentation(c)?;
        let sum_a = coproduct(c, &p.a)?;
        let sum_b = coproduct(c, &p.b)?;
        let into_b = |side: &[usize], maps: &[NatTrans]| -> Result<Vec<NatTrans>> {
            side.iter()
                .zip(maps)
                .map(|(&j, m)| c.compose(&sum_b.legs[j], m))
                .collect()
        };
        let u = copair(c, &sum_a, &into_b(&p.sigma, &p.s)?, &sum_b.apex)?;
        let v = copair(c, &sum_a, &into_b(&p.tau, &p.t)?, &sum_b.apex)?;
        let rr = copair(c, &sum_b, &p.r, &p.target)?;
        let q = coequalizer(c, &u, &v)?;
        let ru = c.compose(&rr, &u)?;
        c.mediate_colimit(&q, &p.target, &[ru, rr])
            .ok_or_else(|| Error::InvalidMorphism("legs do not coequalize the relations".into()))
    }

    pub fn verdict(&self) -> Result<BaseVerdict> {
        let c = self.carrier();
        let p = self.yoneda_presentation(&c)?;
        let f = self.weight_map(&c)?;

        let (_, im) = image(&c, &f)?;
        let p1 = is_stably_final(&c, &im)?;
        let kp = pullback(&c, &f, &f)?;
        let id = c.identity(&f.source);
        let delta = c
            .mediate_limit(&kp, &f.source, &[id.clone(), id, f.clone()])
            .expect("diagonal");
        let p2 = is_stably_final(&c, &delta)?;

        let sum_b = coproduct(&c, &p.b)?;
        let rr = copair(&c, &sum_b, &p.r, &p.target)?;
        let (_, generated) = image(&c, &rr)?;
        let p1_prime = is_stably_final(&c, &generated)?;
        let mut p2_prime = true;
        let mut max_rounds = 0;
        for j in 0..p.b.len() {
            for k in 0..p.b.len() {
                let sieve = zigzag_sieve(&c, &p, j, k)?;
                max_rounds = max_rounds.max(sieve.rounds);
                if !is_stably_final(&c, &sieve.mono)? {
                    p2_prime = false;
                }
            }
        }
        Ok(BaseVerdict {
            p1,
            p2,
            p1_prime,
            p2_prime,
            f_stably_final: is_stably_final(&c, &f)?,
            max_rounds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::parse_category;

    fn cat(src: &str) -> Arc<FinCategory> {
        Arc::new(parse_category(src).unwrap())
    }

    fn m(c: &FinCategory, name: &str) -> usize {
        c.morphism_index(name).unwrap()
    }

    // The poset 0 < a, b < 1 with a, b incomparable; it has all finite
    // meets and a top, so it is finitely complete.
    const DIAMOND: &str = "objects z, a, b, top;
        arrows za: z -> a, zb: z -> b, at: a -> top, bt: b -> top;
        eq at.za = bt.zb;";

    #[test]
    fn identity_is_stably_final() {
        let base = cat(DIAMOND);
        let c = PresheafCarrier::new("p", (*base).clone());
        let id = c.identity(c.representable(0));
        assert!(is_stably_final(&c, &id).unwrap());
    }

    #[test]
    fn non_covering_map_is_not_final() {
        let base = cat(DIAMOND);
        let c = PresheafCarrier::new("p", (*base).clone());
        let f = yoneda_map(&base, m(&base, "at"));
        assert!(!is_final(&c, &f));
    }

    #[test]
    fn routes_agree_on_diamond() {
        let base = cat(DIAMOND);
        let top = base.object_index("top").unwrap();
        let id_top = base.identity(top);
        let (at, bt, za, zb) = (m(&base, "at"), m(&base, "bt"), m(&base, "za"), m(&base, "zb"));
        let cases = vec![
            // leg id: postulated
            BasePresentation::new(base.clone(), top, vec![], vec![], vec![], vec![], vec![id_top]).unwrap(),
            // z is initial, so a and b cover top with empty overlap
            BasePresentation::new(base.clone(), top, vec![], vec![], vec![], vec![], vec![at, bt]).unwrap(),
            // ... and glued along z
            BasePresentation::new(base.clone(), top, vec![0], vec![1], vec![za], vec![zb], vec![at, bt]).unwrap(),
            // top twice, unrelated: fails P2'
            BasePresentation::new(base.clone(), top, vec![], vec![], vec![], vec![], vec![id_top, id_top]).unwrap(),
            // top twice, glued by the identity
            BasePresentation::new(base.clone(), top, vec![0], vec![1], vec![id_top], vec![id_top], vec![id_top, id_top])
                .unwrap(),
            // a alone does not cover top
            BasePresentation::new(base.clone(), top, vec![], vec![], vec![], vec![], vec![at]).unwrap(),
        ];
        let expect = [true, true, true, false, true, false];
        for (p, e) in cases.iter().zip(expect) {
            let v = p.verdict().unwrap();
            assert!(v.consistent(), "{v:?}");
            assert_eq!(v.by_sieves(), e, "{v:?}");
        }
    }

    #[test]
    fn needs_finite_limits() {
        let base = cat("objects x, y; arrows f: x -> y, g: x -> y;");
        let err = BasePresentation::new(base, 1, vec![], vec![], vec![], vec![], vec![]).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }
}
