use std::sync::Arc;

use proptest::prelude::*;

use lexkit::carrier::iso::iso_test;
use lexkit::carrier::{Carrier, FinSetCarrier, Function, PresheafCarrier};
use lexkit::completions::{evaluate, phi_closure, ClosureConfig, Term, WeightClass};
use lexkit::fincat::{parse_category, standard_shape, Shape};
use lexkit::postulate::{is_postulated, stably_effective_epi, zigzag_sieve, BasePresentation, CoconePresentation};
use lexkit::relcalc::{chain_stabilize, Relation};
use lexkit::UnionFind;

/// Legs `B_j -> T` and relations given as lists of pairs over `(j, k)`.
#[derive(Clone, Debug)]
struct Family {
    target: usize,
    legs: Vec<Vec<usize>>,
    relations: Vec<(usize, usize, Vec<(usize, usize)>)>,
}

fn family() -> impl Strategy<Value = Family> {
    (1usize..=4)
        .prop_flat_map(|t| (Just(t), prop::collection::vec(prop::collection::vec(0..t, 0..=3), 1..=3)))
        .prop_flat_map(|(t, legs)| {
            let nj = legs.len();
            let rels = prop::collection::vec((0..nj, 0..nj, prop::collection::vec(any::<prop::sample::Index>(), 0..=4)), 0..=3);
            (Just(t), Just(legs), rels)
        })
        .prop_map(|(target, legs, rels)| {
            let relations = rels
                .into_iter()
                .map(|(j, k, picks)| {
                    let over: Vec<(usize, usize)> = (0..legs[j].len())
                        .flat_map(|x| (0..legs[k].len()).map(move |y| (x, y)))
                        .filter(|&(x, y)| legs[j][x] == legs[k][y])
                        .collect();
                    let chosen = if over.is_empty() { Vec::new() } else { picks.iter().map(|i| over[i.index(over.len())]).collect() };
                    (j, k, chosen)
                })
                .collect();
            Family { target, legs, relations }
        })
}

fn present(f: &Family) -> CoconePresentation<FinSetCarrier> {
    let c = FinSetCarrier;
    let fun = |s: usize, t: usize, m: Vec<usize>| Function::new(s, t, m).unwrap();
    let r = f.legs.iter().map(|l| fun(l.len(), f.target, l.clone())).collect();
    let (mut sigma, mut tau, mut s, mut t) = (vec![], vec![], vec![], vec![]);
    for (j, k, pairs) in &f.relations {
        sigma.push(*j);
        tau.push(*k);
        s.push(fun(pairs.len(), f.legs[*j].len(), pairs.iter().map(|p| p.0).collect()));
        t.push(fun(pairs.len(), f.legs[*k].len(), pairs.iter().map(|p| p.1).collect()));
    }
    CoconePresentation::new(
        &c,
        (0..f.relations.len()).map(|i| format!("R{i}")).collect(),
        (0..f.legs.len()).map(|j| format!("B{j}")).collect(),
        sigma,
        tau,
        s,
        t,
        r,
        f.target,
    )
    .unwrap()
}

/// Classes of `⊔ B_j` under the generated identifications.
fn classes(f: &Family) -> (Vec<usize>, UnionFind) {
    let offs: Vec<usize> = f.legs.iter().scan(0, |a, l| { let o = *a; *a += l.len(); Some(o) }).collect();
    let mut uf = UnionFind::new(f.legs.iter().map(Vec::len).sum());
    for (j, k, pairs) in &f.relations {
        for &(x, y) in pairs {
            uf.union(offs[*j] + x, offs[*k] + y);
        }
    }
    (offs, uf)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sieves_are_zigzag_classes(f in family()) {
        let c = FinSetCarrier;
        let p = present(&f);
        let (offs, mut uf) = classes(&f);
        for j in 0..f.legs.len() {
            for k in 0..f.legs.len() {
                let s = zigzag_sieve(&c, &p, j, k).unwrap();
                let (l0, l1) = (&s.pullback.legs[0], &s.pullback.legs[1]);
                for (e, &kept) in s.keep[0].iter().enumerate() {
                    let same = uf.find(offs[j] + l0.map[e]) == uf.find(offs[k] + l1.map[e]);
                    prop_assert_eq!(kept, same);
                }
            }
        }
    }

    #[test]
    fn postulated_iff_bijective_on_classes(f in family()) {
        let c = FinSetCarrier;
        let p = present(&f);
        let (offs, mut uf) = classes(&f);
        let covered: std::collections::BTreeSet<usize> = f.legs.iter().flatten().copied().collect();
        let mut injective = true;
        for j in 0..f.legs.len() {
            for k in 0..f.legs.len() {
                for x in 0..f.legs[j].len() {
                    for y in 0..f.legs[k].len() {
                        if f.legs[j][x] == f.legs[k][y] && uf.find(offs[j] + x) != uf.find(offs[k] + y) {
                            injective = false;
                        }
                    }
                }
            }
        }
        let rep = is_postulated(&c, &p).unwrap();
        prop_assert_eq!(rep.status == lexkit::exactness::Status::Holds, injective && covered.len() == f.target);
        if rep.status == lexkit::exactness::Status::Holds {
            prop_assert!(stably_effective_epi(&c, &f.target, &p.r).unwrap().holds);
        }
    }

    #[test]
    fn more_relations_give_larger_sieves(f in family(), extra in 0usize..16) {
        let c = FinSetCarrier;
        let fewer = Family { relations: f.relations.iter().take(f.relations.len().saturating_sub(1)).cloned().collect(), ..f.clone() };
        let (small, large) = (present(&fewer), present(&f));
        let j = extra % f.legs.len();
        let k = (extra / 4) % f.legs.len();
        let a = zigzag_sieve(&c, &small, j, k).unwrap();
        let b = zigzag_sieve(&c, &large, j, k).unwrap();
        for (x, y) in a.keep[0].iter().zip(&b.keep[0]) {
            prop_assert!(!x || *y);
        }
    }

    #[test]
    fn chain_stabilize_is_equivalence(n in 1usize..=5, bits in prop::collection::vec(any::<bool>(), 25)) {
        let c = FinSetCarrier;
        let r = Relation::from_predicate(&c, &n, |_, a, b| a == b || bits[a * 5 + b]).unwrap();
        let (e, _) = chain_stabilize(&c, &r).unwrap();
        prop_assert!(e.is_equivalence(&c).unwrap());
        prop_assert!(r.leq(&c, &e).unwrap());
    }
}

const DIAMOND: &str = "objects z, a, b, top;
    arrows za: z -> a, zb: z -> b, at: a -> top, bt: b -> top;
    eq at.za = bt.zb;";

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn base_routes_agree(leg_picks in prop::collection::vec(0usize..8, 1..=3), rel_picks in prop::collection::vec((0usize..3, 0usize..3, 0usize..16), 0..=2)) {
        let base = Arc::new(parse_category(DIAMOND).unwrap());
        let top = base.object_index("top").unwrap();
        let into = base.into_object(top);
        let r: Vec<usize> = leg_picks.iter().map(|i| into[i % into.len()]).collect();
        let (mut sigma, mut tau, mut s, mut t) = (vec![], vec![], vec![], vec![]);
        for (j, k, pick) in rel_picks {
            let (j, k) = (j % r.len(), k % r.len());
            let (bj, bk) = (base.source(r[j]), base.source(r[k]));
            let spans: Vec<(usize, usize)> = (0..base.morphism_count())
                .flat_map(|u| (0..base.morphism_count()).map(move |v| (u, v)))
                .filter(|&(u, v)| {
                    base.source(u) == base.source(v) && base.target(u) == bj && base.target(v) == bk
                        && base.compose(r[j], u) == base.compose(r[k], v)
                })
                .collect();
            if let Some(&(u, v)) = spans.get(pick % spans.len().max(1)) {
                sigma.push(j);
                tau.push(k);
                s.push(u);
                t.push(v);
            }
        }
        let p = BasePresentation::new(base, top, sigma, tau, s, t, r).unwrap();
        let v = p.verdict().unwrap();
        prop_assert!(v.consistent(), "{:?}", v);
    }
}

#[test]
fn closure_terms_replay() {
    for (shape, class, budget) in [(Shape::Discrete(1), "lext", 2), (Shape::WalkingArrow, "union", 1), (Shape::Cospan, "reg", 1)] {
        let base = standard_shape(shape);
        let set = phi_closure(&base, &[WeightClass::from_name(class).unwrap()], &ClosureConfig::with_budget(budget)).unwrap();
        let c = PresheafCarrier::new("b", base.clone());
        assert!(!set.elements.is_empty());
        for e in &set.elements {
            let term = Term::from_json(&base, &e.term.to_json(&base)).unwrap();
            let again = evaluate(&c, &term).unwrap();
            assert!(iso_test(&c, &again, &e.presheaf).is_some(), "{}", e.term.text(&base));
            assert_eq!(c.total_size(&again), c.total_size(&e.presheaf));
        }
    }
}
