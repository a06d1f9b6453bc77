//! Postulated cocones.
//!
//! A cocone is presented by relation spans `B_σi <-s_i- A_i -t_i-> B_τi`
//! and legs `r_j: B_j -> C`. It is postulated when the legs form a stably
//! effective-epimorphic family (P1') and, for every pair `j, k`, the maps
//! `ℓ_z` induced by zig-zags from `j` to `k` form a stably
//! effective-epimorphic family into `B_j ×_C B_k` (P2').
//!
//! Two settings are supported. [`CoconePresentation`] lives in a carrier
//! and uses effective epimorphisms of the carrier category, tested along
//! probes. [`BasePresentation`] lives in a finite finitely complete
//! category and is tested through its Yoneda image in presheaves, where
//! the definition via finality can be compared directly.

mod adhesive;
mod base;

pub use adhesive::{adhesive_items, adhesive_presentation, AdhesiveItems, ItemReport};
pub use base::{is_final, is_stably_final, BasePresentation, BaseVerdict};

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::carrier::{
    coproduct, initial, is_iso, kernel_pair, pullback, Carrier, Cone, Diagram, GraphDiagram,
};
use crate::completions::{match_diagram, run_recipe, Recipe, WeightClass};
use crate::error::{Error, Result};
use crate::exactness::{with_pool, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `f = s_i`, `g = t_i`: from `B_σi` to `B_τi`
    Forward,
    /// `f = t_i`, `g = s_i`: from `B_τi` to `B_σi`
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZigZag {
    pub start: usize,
    pub steps: Vec<(usize, Orientation)>,
}

impl ZigZag {
    pub fn empty(j: usize) -> Self {
        ZigZag {
            start: j,
            steps: Vec::new(),
        }
    }

    /// Checks that consecutive spans meet and returns the final index.
    pub fn end<C: Carrier>(&self, p: &CoconePresentation<C>) -> Result<usize> {
        if self.start >= p.b.len() {
            return Err(Error::IllFormedZigZag(format!("no leg {}", self.start)));
        }
        let mut cur = self.start;
        for (m, &(i, o)) in self.steps.iter().enumerate() {
            if i >= p.a.len() {
                return Err(Error::IllFormedZigZag(format!("step {m}: no relation {i}")));
            }
            let (from, to) = p.ends(i, o);
            if from != cur {
                return Err(Error::IllFormedZigZag(format!(
                    "step {m} starts at {} but the previous one ends at {}",
                    p.j_names[from], p.j_names[cur]
                )));
            }
            cur = to;
        }
        Ok(cur)
    }

    pub fn to_json<C: Carrier>(&self, p: &CoconePresentation<C>) -> Value {
        json!({
            "start": p.j_names[self.start],
            "steps": self.steps.iter().map(|&(i, o)| json!([p.i_names[i], match o {
                Orientation::Forward => "forward",
                Orientation::Backward => "backward",
            }])).collect::<Vec<_>>(),
        })
    }
}

/// A cocone presentation instantiated in a carrier.
#[derive(Clone, Debug)]
pub struct CoconePresentation<C: Carrier> {
    pub a: Vec<C::Obj>,
    pub b: Vec<C::Obj>,
    pub target: C::Obj,
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub s: Vec<C::Mor>,
    pub t: Vec<C::Mor>,
    pub r: Vec<C::Mor>,
    pub i_names: Vec<String>,
    pub j_names: Vec<String>,
}

impl<C: Carrier> CoconePresentation<C> {
    /// Validates endpoints and the cocone condition `r_σi s_i = r_τi t_i`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        c: &C,
        i_names: Vec<String>,
        j_names: Vec<String>,
        sigma: Vec<usize>,
        tau: Vec<usize>,
        s: Vec<C::Mor>,
        t: Vec<C::Mor>,
        r: Vec<C::Mor>,
        target: C::Obj,
    ) -> Result<Self> {
        let ni = i_names.len();
        let nj = j_names.len();
        if [sigma.len(), tau.len(), s.len(), t.len()].iter().any(|&l| l != ni) || r.len() != nj {
            return Err(Error::IllFormed("presentation index sets disagree in size".into()));
        }
        let a: Vec<C::Obj> = s.iter().map(|m| c.dom(m).clone()).collect();
        let b: Vec<C::Obj> = r.iter().map(|m| c.dom(m).clone()).collect();
        for (j, rj) in r.iter().enumerate() {
            if c.cod(rj) != &target {
                return Err(Error::InvalidMorphism(format!("leg {} does not reach the target", j_names[j])));
            }
        }
        for i in 0..ni {
            if sigma[i] >= nj || tau[i] >= nj {
                return Err(Error::IllFormed(format!("relation {} points outside J", i_names[i])));
            }
            if c.dom(&t[i]) != &a[i] || c.cod(&s[i]) != &b[sigma[i]] || c.cod(&t[i]) != &b[tau[i]] {
                return Err(Error::InvalidMorphism(format!("relation {} has wrong endpoints", i_names[i])));
            }
            if c.compose(&r[sigma[i]], &s[i])? != c.compose(&r[tau[i]], &t[i])? {
                return Err(Error::InvalidMorphism(format!(
                    "cocone condition fails at {}",
                    i_names[i]
                )));
            }
        }
        Ok(CoconePresentation {
            a,
            b,
            target,
            sigma,
            tau,
            s,
            t,
            r,
            i_names,
            j_names,
        })
    }

    fn ends(&self, i: usize, o: Orientation) -> (usize, usize) {
        match o {
            Orientation::Forward => (self.sigma[i], self.tau[i]),
            Orientation::Backward => (self.tau[i], self.sigma[i]),
        }
    }

    fn span(&self, i: usize, o: Orientation) -> (&C::Mor, &C::Mor) {
        match o {
            Orientation::Forward => (&self.s[i], &self.t[i]),
            Orientation::Backward => (&self.t[i], &self.s[i]),
        }
    }

    pub fn j_index(&self, name: &str) -> Option<usize> {
        self.j_names.iter().position(|n| n == name)
    }

    pub fn to_json(&self, c: &C) -> Value {
        json!({
            "target": c.obj_json(&self.target),
            "J": self.j_names.iter().zip(&self.r).map(|(n, r)| json!({"name": n, "leg": c.mor_json(r)})).collect::<Vec<_>>(),
            "I": (0..self.a.len()).map(|i| json!({
                "name": self.i_names[i],
                "sigma": self.j_names[self.sigma[i]],
                "tau": self.j_names[self.tau[i]],
                "s": c.mor_json(&self.s[i]),
                "t": c.mor_json(&self.t[i]),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `B_j ×_C B_k` with legs `[to B_j, to B_k, to C]`.
pub fn leg_pullback<C: Carrier>(c: &C, p: &CoconePresentation<C>, j: usize, k: usize) -> Result<Cone<C>> {
    pullback(c, &p.r[j], &p.r[k])
}

/// The composite span `B_j <-a- L -b-> B_k` of a zig-zag.
pub fn zigzag_span<C: Carrier>(c: &C, p: &CoconePresentation<C>, z: &ZigZag) -> Result<(C::Obj, C::Mor, C::Mor)> {
    z.end(p)?;
    let bj = &p.b[z.start];
    let (mut l, mut a, mut b) = (bj.clone(), c.identity(bj), c.identity(bj));
    for &(i, o) in &z.steps {
        let (f, g) = p.span(i, o);
        let pb = pullback(c, &b, f)?;
        a = c.compose(&a, &pb.legs[0])?;
        b = c.compose(g, &pb.legs[1])?;
        l = pb.apex;
    }
    Ok((l, a, b))
}

/// `ℓ_z: L_z -> B_j ×_C B_k`.
pub fn zigzag_leg<C: Carrier>(c: &C, p: &CoconePresentation<C>, z: &ZigZag) -> Result<C::Mor> {
    let k = z.end(p)?;
    let (l, a, b) = zigzag_span(c, p, z)?;
    let cone = leg_pullback(c, p, z.start, k)?;
    let to_target = c.compose(&p.r[z.start], &a)?;
    c.mediate_limit(&cone, &l, &[a, b, to_target])
        .ok_or_else(|| Error::IllFormedZigZag("span composite does not commute over the target".into()))
}

/// The sieve on `B_j ×_C B_k` generated by all zig-zags from `j` to `k`.
#[derive(Clone, Debug)]
pub struct Sieve<C: Carrier> {
    pub j: usize,
    pub k: usize,
    pub pullback: Cone<C>,
    /// Elements of the pullback apex lying in the sieve, per sort.
    pub keep: Vec<Vec<bool>>,
    pub mono: C::Mor,
    /// Length of the last zig-zag that enlarged the sieve.
    pub rounds: usize,
    /// Zig-zag lengths explored before no new span relation appeared.
    pub explored: usize,
    pub states: usize,
    /// Zig-zags whose relations jointly cover the sieve.
    pub witnesses: Vec<ZigZag>,
}

impl<C: Carrier> Sieve<C> {
    pub fn is_whole(&self) -> bool {
        self.keep.iter().all(|s| s.iter().all(|&b| b))
    }

    pub fn size(&self) -> usize {
        self.keep.iter().map(|s| s.iter().filter(|&&b| b).count()).sum()
    }
}

type Rel = Vec<BTreeSet<(usize, usize)>>;

/// Relational composite of `rel ⊆ B_j × B_cur` with the span `(f, g)`.
fn step_relation<C: Carrier>(c: &C, rel: &Rel, f: &C::Mor, g: &C::Mor) -> Rel {
    let (gf, gg) = (c.graded(f), c.graded(g));
    rel.iter()
        .enumerate()
        .map(|(s, pairs)| {
            let mut fibre: HashMap<usize, Vec<usize>> = HashMap::new();
            for (a, &y) in gf[s].iter().enumerate() {
                fibre.entry(y).or_default().push(a);
            }
            let mut out = BTreeSet::new();
            for &(x, y) in pairs {
                for &a in fibre.get(&y).map(Vec::as_slice).unwrap_or(&[]) {
                    out.insert((x, gg[s][a]));
                }
            }
            out
        })
        .collect()
}

/// Breadth-first over zig-zag length with states `(current index, relation
/// to B_j)`; a state seen before adds nothing new, so the search stops
/// once a whole length produces only known states.
pub fn zigzag_sieve<C: Carrier>(c: &C, p: &CoconePresentation<C>, j: usize, k: usize) -> Result<Sieve<C>> {
    if j >= p.b.len() || k >= p.b.len() {
        return Err(Error::IllFormedZigZag("sieve endpoints outside J".into()));
    }
    let sorts = c.sorts(&p.b[j]);
    let diag: Rel = sorts.iter().map(|&n| (0..n).map(|x| (x, x)).collect()).collect();
    let mut theta: Rel = vec![BTreeSet::new(); sorts.len()];
    let mut witnesses = Vec::new();
    let mut rounds = 0;
    let mut seen: HashSet<(usize, Rel)> = HashSet::new();
    seen.insert((j, diag.clone()));
    if j == k {
        theta = diag.clone();
        witnesses.push(ZigZag::empty(j));
    }
    let mut level: Vec<(usize, Rel, ZigZag)> = vec![(j, diag, ZigZag::empty(j))];
    let mut len = 0;
    let moves: Vec<(usize, Orientation)> = (0..p.a.len())
        .flat_map(|i| [(i, Orientation::Forward), (i, Orientation::Backward)])
        .collect();
    while !level.is_empty() {
        len += 1;
        let succ: Vec<Vec<(usize, Rel, ZigZag)>> = with_pool(|| {
            level
                .par_iter()
                .map(|(cur, rel, z)| {
                    moves
                        .iter()
                        .filter(|&&(i, o)| p.ends(i, o).0 == *cur)
                        .map(|&(i, o)| {
                            let (f, g) = p.span(i, o);
                            let mut z2 = z.clone();
                            z2.steps.push((i, o));
                            (p.ends(i, o).1, step_relation(c, rel, f, g), z2)
                        })
                        .collect()
                })
                .collect()
        });
        let mut next = Vec::new();
        for (cur, rel, z) in succ.into_iter().flatten() {
            if !seen.insert((cur, rel.clone())) {
                continue;
            }
            if cur == k && rel.iter().zip(&theta).any(|(r, t)| !r.is_subset(t)) {
                for (t, r) in theta.iter_mut().zip(&rel) {
                    t.extend(r.iter().copied());
                }
                rounds = len;
                witnesses.push(z.clone());
            }
            next.push((cur, rel, z));
        }
        level = next;
    }
    let cone = leg_pullback(c, p, j, k)?;
    let keep: Vec<Vec<bool>> = c
        .sorts(&cone.apex)
        .iter()
        .enumerate()
        .map(|(s, &n)| {
            (0..n)
                .map(|e| theta[s].contains(&(c.apply(&cone.legs[0], s, e), c.apply(&cone.legs[1], s, e))))
                .collect()
        })
        .collect();
    let mono = c
        .subobject(&cone.apex, &keep)
        .ok_or_else(|| Error::IllFormed("zig-zag sieve is not a subobject".into()))?;
    Ok(Sieve {
        j,
        k,
        pullback: cone,
        keep,
        mono,
        rounds,
        explored: len,
        states: seen.len(),
        witnesses,
    })
}

/// Whether `target` is the colimit of the diagram formed by the family and
/// its pairwise pullbacks over `target`.
pub fn is_effective_epi_family<C: Carrier>(c: &C, target: &C::Obj, legs: &[C::Mor]) -> Result<bool> {
    if legs.is_empty() {
        let zero = initial(c)?;
        let hom = c.hom(&zero, target);
        return Ok(hom.len() == 1 && is_iso(c, &hom[0]));
    }
    let n = legs.len();
    let mut vertices: Vec<C::Obj> = legs.iter().map(|u| c.dom(u).clone()).collect();
    let mut edges = Vec::new();
    let mut cocone_legs: Vec<C::Mor> = legs.to_vec();
    for a in 0..n {
        for b in a..n {
            let pb = pullback(c, &legs[a], &legs[b])?;
            let v = vertices.len();
            vertices.push(pb.apex.clone());
            edges.push((v, a, pb.legs[0].clone()));
            edges.push((v, b, pb.legs[1].clone()));
            cocone_legs.push(pb.legs[2].clone());
        }
    }
    let colim = c.colimit(&GraphDiagram::new(vertices, edges))?;
    Ok(c
        .mediate_colimit(&colim, target, &cocone_legs)
        .is_some_and(|u| is_iso(c, &u)))
}

/// Outcome of a stability check: `failing_probe` is `None` with
/// `holds = false` when the family itself is not effective-epimorphic.
#[derive(Clone, Debug)]
pub struct StableCheck<C: Carrier> {
    pub holds: bool,
    pub failing_probe: Option<C::Mor>,
    pub probes: usize,
}

/// Effective-epimorphic, and still so after pullback along every probe.
pub fn stably_effective_epi<C: Carrier>(c: &C, target: &C::Obj, legs: &[C::Mor]) -> Result<StableCheck<C>> {
    if !is_effective_epi_family(c, target, legs)? {
        return Ok(StableCheck {
            holds: false,
            failing_probe: None,
            probes: 0,
        });
    }
    let probes = c.probes(target);
    for (n, p) in probes.iter().enumerate() {
        let pulled = legs
            .iter()
            .map(|u| pullback(c, u, p).map(|pb| pb.legs[1].clone()))
            .collect::<Result<Vec<_>>>()?;
        if !is_effective_epi_family(c, c.dom(p), &pulled)? {
            return Ok(StableCheck {
                holds: false,
                failing_probe: Some(p.clone()),
                probes: n + 1,
            });
        }
    }
    Ok(StableCheck {
        holds: true,
        failing_probe: None,
        probes: probes.len(),
    })
}

#[derive(Clone, Debug)]
pub struct PairReport<C: Carrier> {
    pub sieve: Sieve<C>,
    pub check: StableCheck<C>,
}

#[derive(Clone, Debug)]
pub struct PostulateReport<C: Carrier> {
    pub p1: StableCheck<C>,
    pub pairs: Vec<PairReport<C>>,
    pub status: Status,
    pub max_rounds: usize,
}

impl<C: Carrier> PostulateReport<C> {
    pub fn p2_holds(&self) -> bool {
        self.pairs.iter().all(|r| r.check.holds)
    }

    pub fn to_json(&self, c: &C, p: &CoconePresentation<C>) -> Value {
        let check = |s: &StableCheck<C>| {
            json!({
                "holds": s.holds,
                "probes_checked": s.probes,
                "failing_probe": s.failing_probe.as_ref().map(|m| c.mor_json(m)),
            })
        };
        json!({
            "schema_version": crate::exactness::SCHEMA_VERSION,
            "carrier": c.describe(),
            "status": self.status.as_str(),
            "postulated": self.status != Status::Fails,
            "P1": check(&self.p1),
            "P2": {
                "holds": self.p2_holds(),
                "pairs": self.pairs.iter().map(|r| json!({
                    "j": p.j_names[r.sieve.j],
                    "k": p.j_names[r.sieve.k],
                    "sieve_size": r.sieve.size(),
                    "pullback_size": c.total_size(&r.sieve.pullback.apex),
                    "whole": r.sieve.is_whole(),
                    "rounds": r.sieve.rounds,
                    "explored_lengths": r.sieve.explored,
                    "states": r.sieve.states,
                    "witnesses": r.sieve.witnesses.iter().map(|z| z.to_json(p)).collect::<Vec<_>>(),
                    "check": check(&r.check),
                })).collect::<Vec<_>>(),
            },
            "max_rounds": self.max_rounds,
        })
    }
}

pub fn check_p1<C: Carrier>(c: &C, p: &CoconePresentation<C>) -> Result<StableCheck<C>> {
    stably_effective_epi(c, &p.target, &p.r)
}

/// Runs the sieve for every ordered pair and tests its witness family.
pub fn check_p2<C: Carrier>(c: &C, p: &CoconePresentation<C>) -> Result<Vec<PairReport<C>>> {
    let mut out = Vec::new();
    for j in 0..p.b.len() {
        for k in 0..p.b.len() {
            let sieve = zigzag_sieve(c, p, j, k)?;
            let legs = sieve
                .witnesses
                .iter()
                .map(|z| zigzag_leg(c, p, z))
                .collect::<Result<Vec<_>>>()?;
            let check = stably_effective_epi(c, &sieve.pullback.apex, &legs)?;
            out.push(PairReport { sieve, check });
        }
    }
    Ok(out)
}

/// P1' ∧ P2'. Passing carriers whose probes are not exhaustive report
/// `unknown_bounded`.
pub fn is_postulated<C: Carrier>(c: &C, p: &CoconePresentation<C>) -> Result<PostulateReport<C>> {
    let p1 = check_p1(c, p)?;
    let pairs = check_p2(c, p)?;
    let ok = p1.holds && pairs.iter().all(|r| r.check.holds);
    let status = match (ok, c.probes_exact()) {
        (false, _) => Status::Fails,
        (true, true) => Status::Holds,
        (true, false) => Status::UnknownBounded,
    };
    let max_rounds = pairs.iter().map(|r| r.sieve.rounds).max().unwrap_or(0);
    Ok(PostulateReport {
        p1,
        pairs,
        status,
        max_rounds,
    })
}

/// The canonical presentation of a class colimit of `d`, with the
/// computed colimit cocone as legs.
pub fn presentation_of<C: Carrier>(c: &C, w: &WeightClass, d: &Diagram<C>) -> Result<CoconePresentation<C>> {
    let m = match_diagram(c, w, d)?;
    let wc = run_recipe(c, &m, d)?;
    let leg = |name: &str| -> C::Mor {
        wc.legs.iter().find(|(n, _)| n == name).expect("recipe leg").1.clone()
    };
    let n = |k: usize| m.names[k].clone();
    let ids = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match m.recipe {
        Recipe::Image => {
            let (_, p1, p2) = kernel_pair(c, &m.mors[0])?;
            CoconePresentation::new(c, ids(&["kernel"]), vec![n(0)], vec![0], vec![0], vec![p1], vec![p2], vec![leg(&n(0))], wc.object)
        }
        Recipe::Quotient | Recipe::ReflexiveCoequalizer => CoconePresentation::new(
            c,
            vec![n(0)],
            vec![n(1)],
            vec![0],
            vec![0],
            vec![m.mors[0].clone()],
            vec![m.mors[1].clone()],
            vec![leg(&n(1))],
            wc.object,
        ),
        Recipe::Coproduct | Recipe::Initial => {
            let r: Vec<C::Mor> = wc.legs.iter().map(|(_, l)| l.clone()).collect();
            let names = wc.legs.iter().map(|(n, _)| n.clone()).collect();
            CoconePresentation::new(c, vec![], names, vec![], vec![], vec![], vec![], r, wc.object)
        }
        Recipe::Union => {
            let meet = pullback(c, &m.mors[0], &m.mors[1])?;
            CoconePresentation::new(
                c,
                ids(&["meet"]),
                vec![n(0), n(1)],
                vec![0],
                vec![1],
                vec![meet.legs[0].clone()],
                vec![meet.legs[1].clone()],
                vec![leg(&n(0)), leg(&n(1))],
                wc.object,
            )
        }
        Recipe::DoubleKernel => {
            let (_, p1, p2) = kernel_pair(c, &m.mors[0])?;
            let mixed = pullback(c, &m.mors[0], &m.mors[1])?;
            let (_, q1, q2) = kernel_pair(c, &m.mors[1])?;
            CoconePresentation::new(
                c,
                ids(&["kernel_left", "mixed", "kernel_right"]),
                vec![n(0), n(1)],
                vec![0, 0, 1],
                vec![0, 1, 1],
                vec![p1, mixed.legs[0].clone(), q1],
                vec![p2, mixed.legs[1].clone(), q2],
                vec![leg(&n(0)), leg(&n(1))],
                wc.object,
            )
        }
        Recipe::Pushout => CoconePresentation::new(
            c,
            vec![n(0)],
            vec![n(1), n(2)],
            vec![0],
            vec![1],
            vec![m.mors[0].clone()],
            vec![m.mors[1].clone()],
            vec![leg(&n(1)), leg(&n(2))],
            wc.object,
        ),
        Recipe::Filtered => {
            let shape = d.shape();
            let gens = shape.generators();
            CoconePresentation::new(
                c,
                gens.iter().map(|&g| shape.morphism(g).name.clone()).collect(),
                m.names.clone(),
                gens.iter().map(|&g| shape.source(g)).collect(),
                gens.iter().map(|&g| shape.target(g)).collect(),
                gens.iter().map(|&g| c.identity(d.object(shape.source(g)))).collect(),
                gens.iter().map(|&g| d.morphism(g).clone()).collect(),
                wc.legs.iter().map(|(_, l)| l.clone()).collect(),
                wc.object,
            )
        }
    }
}

/// A presentation with a single leg `B -> B` and no relations.
pub fn trivial_presentation<C: Carrier>(c: &C, b: &C::Obj) -> Result<CoconePresentation<C>> {
    CoconePresentation::new(c, vec![], vec!["B".into()], vec![], vec![], vec![], vec![], vec![c.identity(b)], b.clone())
}

/// The coproduct cocone of `objs`, presented with no relations.
pub fn coproduct_presentation<C: Carrier>(c: &C, objs: &[C::Obj]) -> Result<CoconePresentation<C>> {
    let s = coproduct(c, objs)?;
    let names = (0..objs.len()).map(|k| format!("B{k}")).collect();
    CoconePresentation::new(c, vec![], names, vec![], vec![], vec![], vec![], s.legs, s.apex)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::carrier::{FinPosetCarrier, FinSetCarrier, Function, Monotone, Poset};
    use crate::fincat::{standard_shape, Shape};

    fn f(s: usize, t: usize, map: &[usize]) -> Function {
        Function::new(s, t, map.to_vec()).unwrap()
    }

    fn arrow(g: Function) -> Diagram<FinSetCarrier> {
        let cat = Arc::new(standard_shape(Shape::WalkingArrow));
        let gens = BTreeMap::from([(cat.morphism_index("f").unwrap(), g.clone())]);
        Diagram::new(&FinSetCarrier, cat, vec![g.source, g.target], &gens).unwrap()
    }

    #[test]
    fn empty_zigzag_gives_diagonal() {
        let p = presentation_of(&FinSetCarrier, &WeightClass::Reg, &arrow(f(3, 2, &[0, 0, 1]))).unwrap();
        let l = zigzag_leg(&FinSetCarrier, &p, &ZigZag::empty(0)).unwrap();
        let cone = leg_pullback(&FinSetCarrier, &p, 0, 0).unwrap();
        for e in 0..3 {
            let v = l.map[e];
            assert_eq!(cone.legs[0].map[v], e);
            assert_eq!(cone.legs[1].map[v], e);
        }
        let bad = ZigZag {
            start: 0,
            steps: vec![(5, Orientation::Forward)],
        };
        assert!(matches!(zigzag_leg(&FinSetCarrier, &p, &bad), Err(Error::IllFormedZigZag(_))));
    }

    #[test]
    fn kernel_pair_cocone_is_postulated() {
        let p = presentation_of(&FinSetCarrier, &WeightClass::Reg, &arrow(f(3, 2, &[0, 0, 1]))).unwrap();
        assert_eq!(p.a.len(), 1);
        assert_eq!(p.b.len(), 1);
        let rep = is_postulated(&FinSetCarrier, &p).unwrap();
        assert_eq!(rep.status, Status::Holds);
        assert!(rep.pairs[0].sieve.is_whole());
    }

    #[test]
    fn non_colimit_cocone_is_not_postulated() {
        // The single leg 2 -> 3 misses a point.
        let p = CoconePresentation::new(
            &FinSetCarrier,
            vec![],
            vec!["B".into()],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![f(2, 3, &[0, 1])],
            3,
        )
        .unwrap();
        assert_eq!(is_postulated(&FinSetCarrier, &p).unwrap().status, Status::Fails);
        // Identifying nothing while the leg identifies two points breaks P2'.
        let q = CoconePresentation::new(
            &FinSetCarrier,
            vec![],
            vec!["B".into()],
            vec![],
            vec![],
            vec![],
            vec![],
            vec![f(2, 1, &[0, 0])],
            1,
        )
        .unwrap();
        let rep = is_postulated(&FinSetCarrier, &q).unwrap();
        assert!(rep.p1.holds);
        assert!(!rep.p2_holds());
    }

    #[test]
    fn degenerate_presentation_is_postulated() {
        let p = trivial_presentation(&FinSetCarrier, &2).unwrap();
        assert_eq!(is_postulated(&FinSetCarrier, &p).unwrap().status, Status::Holds);
        let e = trivial_presentation(&FinSetCarrier, &0).unwrap();
        assert_eq!(is_postulated(&FinSetCarrier, &e).unwrap().status, Status::Holds);
    }

    #[test]
    fn discrete_presentation_sieves() {
        let p = coproduct_presentation(&FinSetCarrier, &[1, 2]).unwrap();
        let s = zigzag_sieve(&FinSetCarrier, &p, 0, 1).unwrap();
        assert_eq!(s.size(), 0);
        assert!(s.witnesses.is_empty());
        let d = zigzag_sieve(&FinSetCarrier, &p, 1, 1).unwrap();
        assert!(d.is_whole());
        assert_eq!(is_postulated(&FinSetCarrier, &p).unwrap().status, Status::Holds);
    }

    #[test]
    fn poset_quotient_fails_p1() {
        // Two 2-chains a<b, c<d onto the 3-chain with b, c identified.
        let c = FinPosetCarrier::default();
        let x = Poset::from_relations(4, &[(0, 1), (2, 3)]).unwrap();
        let y = Poset::from_relations(3, &[(0, 1), (1, 2)]).unwrap();
        let q = Monotone::new(x.clone(), y.clone(), vec![0, 1, 1, 2]).unwrap();
        let cat = Arc::new(standard_shape(Shape::WalkingArrow));
        let gens = BTreeMap::from([(cat.morphism_index("f").unwrap(), q)]);
        let d = Diagram::new(&c, cat, vec![x, y], &gens).unwrap();
        let p = presentation_of(&c, &WeightClass::Reg, &d).unwrap();
        let rep = is_postulated(&c, &p).unwrap();
        assert_eq!(rep.status, Status::Fails);
        assert!(!rep.p1.holds);
        assert!(rep.p1.failing_probe.is_some());
    }

    #[test]
    fn lext_presentation_has_no_relations() {
        let cat = Arc::new(standard_shape(Shape::Discrete(2)));
        let d = Diagram::new(&FinSetCarrier, cat, vec![1, 2], &BTreeMap::new()).unwrap();
        let p = presentation_of(&FinSetCarrier, &WeightClass::Lext, &d).unwrap();
        assert_eq!((p.a.len(), p.b.len()), (0, 2));
    }
}
