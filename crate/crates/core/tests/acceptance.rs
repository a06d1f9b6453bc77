//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use lexkit::carrier::iso::iso_test;
use lexkit::carrier::{
    coequalizer, is_strict_initial, Audited, AuditReport, Carrier, Diagram, FinPosetCarrier, FinSetCarrier, Function,
    PresheafCarrier,
};
use lexkit::completions::{evaluate, phi_closure, weighted_colimit, ClosureConfig, Term, WeightClass};
use lexkit::exactness::{check_adhesive, check_barr_exact, check_property, check_regular, replay, CheckConfig, Property, Status};
use lexkit::fincat::{standard_shape, Shape};
use lexkit::postulate::{adhesive_items, is_postulated, presentation_of};
use lexkit::relcalc::{chain_stabilize, kernel_pair_relation, Relation};

/// Wall-clock ceiling for criterion 1.
const TOPOS_SUITE_LIMIT: Duration = Duration::from_secs(300);
const MIN_PRESHEAF_INSTANCES: usize = 200;
const RELATIONS: usize = 500;
const RELATION_MAX: usize = 6;
const RECIPE_INSTANCES: usize = 300;
const MAX_SIEVE_ROUNDS: usize = 3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn f(s: usize, t: usize, map: Vec<usize>) -> Function {
    Function::new(s, t, map).unwrap()
}

fn instances_in(v: &Value) -> usize {
    v["witness"]["families"]
        .as_array()
        .map(|fs| {
            fs.iter()
                .map(|f| f["exhaustive"].as_u64().unwrap_or(0) + f["random"].as_u64().unwrap_or(0))
                .min()
                .unwrap_or(0) as usize
        })
        .unwrap_or(0)
}

fn truncated(v: &Value) -> bool {
    v["witness"]["families"]
        .as_array()
        .is_some_and(|fs| fs.iter().any(|f| f["exhaustive_truncated"].as_bool() == Some(true)))
}

fn criterion_1(audits: &mut Vec<AuditReport>) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut checks = 0;

    let sets = Audited::new(FinSetCarrier);
    let cfg = CheckConfig::with_size(3).seed(1);
    for p in Property::ALL {
        let v = check_property(&sets, p, &cfg, None).unwrap();
        checks += 1;
        if v.status != Status::Holds || truncated(&v.to_json()) {
            bad.push(format!("finset/{}", p.name()));
        }
    }
    if !is_strict_initial(&sets, 3).unwrap() {
        bad.push("finset/strict_initial".into());
    }
    audits.push(sets.report());

    let mut min_instances = usize::MAX;
    for shape in [Shape::WalkingArrow, Shape::Span, Shape::ParallelPair] {
        let base = standard_shape(shape);
        let name = format!("{shape:?}");
        let c = Audited::new(PresheafCarrier::new(&name, base));
        let cfg = CheckConfig::with_size(2).seed(1).samples(MIN_PRESHEAF_INSTANCES);
        for p in Property::ALL {
            let v = check_property(&c, p, &cfg, None).unwrap();
            checks += 1;
            let n = instances_in(&v.to_json());
            min_instances = min_instances.min(n);
            if v.status != Status::Holds || n < MIN_PRESHEAF_INSTANCES {
                bad.push(format!("{name}/{} ({n} instances)", p.name()));
            }
        }
        if !is_strict_initial(&c, 2).unwrap() {
            bad.push(format!("{name}/strict_initial"));
        }
        audits.push(c.report());
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed <= TOPOS_SUITE_LIMIT,
        format!(
            "{checks} checker runs hold (min {min_instances} presheaf instances per family) in {:.1}s; failures: {bad:?}",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_2(audits: &mut Vec<AuditReport>) -> Outcome {
    let c = Audited::new(FinPosetCarrier::default());
    let cfg = CheckConfig::with_size(4).seed(1);
    let mut notes = Vec::new();
    let mut pass = true;
    type Check = fn(&Audited<FinPosetCarrier>, &CheckConfig) -> lexkit::Result<lexkit::exactness::Verdict>;
    let checks: [(&str, Check); 3] = [("adhesive", check_adhesive), ("regular", check_regular), ("exact", check_barr_exact)];
    for (name, check) in checks {
        let v = check(&c, &cfg).unwrap();
        let Some(cx) = v.counterexample.clone() else {
            pass = false;
            notes.push(format!("{name}: no counterexample"));
            continue;
        };
        let again = replay(&c, &cx).unwrap();
        let same = again
            .as_ref()
            .is_some_and(|a| serde_json::to_string(a).unwrap() == serde_json::to_string(&cx).unwrap());
        pass &= v.status == Status::Fails && same;
        notes.push(format!("{name}: {} / replay identical {same}", v.status.as_str()));
    }
    audits.push(c.report());
    outcome(pass, notes.join("; "))
}

/// Equivalence closure by Warshall on the reflexive-symmetric closure.
fn warshall(n: usize, pairs: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        m[i][i] = true;
    }
    for &(a, b) in pairs {
        m[a][b] = true;
        m[b][a] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in m.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            if b {
                out.insert((i, j));
            }
        }
    }
    out
}

fn relation_pairs<C: Carrier<Obj = usize>>(c: &C, r: &Relation<C>) -> BTreeSet<(usize, usize)> {
    r.pairs(c)[0].iter().copied().collect()
}

fn criterion_3(audits: &mut Vec<AuditReport>) -> Outcome {
    let c = Audited::new(FinSetCarrier);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut vs_warshall, mut vs_kernel) = (0, 0);
    for _ in 0..RELATIONS {
        let n = rng.gen_range(1..=RELATION_MAX);
        let density: f64 = rng.gen_range(0.0..0.4);
        let extra: BTreeSet<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        let r = Relation::from_predicate(&c, &n, |_, a, b| a == b || extra.contains(&(a, b))).unwrap();
        let (stable, _) = chain_stabilize(&c, &r).unwrap();
        let got = relation_pairs(&c, &stable);
        if got != warshall(n, &extra) {
            vs_warshall += 1;
        }
        let q = coequalizer(&c, &r.d, &r.c).unwrap();
        let kp = kernel_pair_relation(&c, &q.legs[1]).unwrap();
        if relation_pairs(&c, &kp) != got {
            vs_kernel += 1;
        }
    }
    audits.push(c.report());
    outcome(
        vs_warshall == 0 && vs_kernel == 0,
        format!("{RELATIONS} reflexive relations, |X| <= {RELATION_MAX}: {vs_warshall} mismatches vs Warshall, {vs_kernel} vs kernel pair of the coequalizer"),
    )
}

fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                rec(k, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(k, n, &mut cur, &mut out);
    out
}

fn all_maps(k: usize, n: usize) -> Vec<Vec<usize>> {
    (0..k).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (0..n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect()
    })
}

fn mono_spans() -> Vec<(Function, Function)> {
    let mut out = Vec::new();
    for nc in 0..=3 {
        for na in nc..=3 {
            for nb in 0..=3 {
                for m in injections(nc, na) {
                    for g in all_maps(nc, nb) {
                        out.push((f(nc, na, m.clone()), f(nc, nb, g)));
                    }
                }
            }
        }
    }
    out
}

fn diagram<C: Carrier>(c: &C, shape: Shape, objs: Vec<C::Obj>, gens: &[(&str, C::Mor)]) -> Diagram<C> {
    let cat = Arc::new(standard_shape(shape));
    let g = gens
        .iter()
        .map(|(n, m)| (cat.morphism_index(n).unwrap(), m.clone()))
        .collect::<BTreeMap<_, _>>();
    Diagram::new(c, cat, objs, &g).unwrap()
}

fn criteria_4_5(audits: &mut Vec<AuditReport>) -> (Outcome, Outcome) {
    let c = Audited::new(FinSetCarrier);
    let spans = mono_spans();
    let (mut disagree, mut sieve_bad, mut max_rounds) = (0, 0, 0);
    for (m, g) in &spans {
        let d = diagram(&c, Shape::MonoSpan, vec![m.source, m.target, g.target], &[("m", m.clone()), ("f", g.clone())]);
        let p = presentation_of(&c, &WeightClass::Adh, &d).unwrap();
        let rep = is_postulated(&c, &p).unwrap();
        let direct = lexkit::exactness::adhesive_square_holds(&c, m, g).unwrap();
        if (rep.status == Status::Holds) != direct {
            disagree += 1;
        }
        let items = adhesive_items(&c, m, g).unwrap();
        if !items.items[0].sieve_matches || !items.items[1].sieve_matches {
            sieve_bad += 1;
        }
        max_rounds = max_rounds.max(items.max_rounds).max(rep.max_rounds);
    }
    audits.push(c.report());
    (
        outcome(
            disagree == 0,
            format!("{} pushout-along-mono squares (objects <= 3): {disagree} disagreements with the direct check", spans.len()),
        ),
        outcome(
            sieve_bad == 0 && max_rounds <= MAX_SIEVE_ROUNDS,
            format!("(B,B) = diagonal image and (A,B) = image of (m,f) fail on {sieve_bad} squares; max stabilization rounds {max_rounds}"),
        ),
    )
}

/// Independent union-find for the set-theoretic oracles.
struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra.max(rb)] = ra.min(rb);
    }
    /// Class labels `0..k` in order of first appearance.
    fn labels(&mut self) -> (usize, Vec<usize>) {
        let mut ids = BTreeMap::new();
        let labels = (0..self.0.len())
            .map(|x| {
                let r = self.find(x);
                let k = ids.len();
                *ids.entry(r).or_insert(k)
            })
            .collect();
        (ids.len(), labels)
    }
}

/// A cocone as (apex size, legs).
type SetCocone = (usize, Vec<Vec<usize>>);

/// The quotient of a disjoint union of sets by generated identifications.
fn glue(sizes: &[usize], joins: &[((usize, usize), (usize, usize))]) -> SetCocone {
    let offs: Vec<usize> = sizes.iter().scan(0, |acc, &n| { let o = *acc; *acc += n; Some(o) }).collect();
    let total: usize = sizes.iter().sum();
    let mut dsu = Dsu::new(total);
    for &((i, a), (j, b)) in joins {
        dsu.join(offs[i] + a, offs[j] + b);
    }
    let (k, labels) = dsu.labels();
    (k, sizes.iter().enumerate().map(|(i, &n)| (0..n).map(|a| labels[offs[i] + a]).collect()).collect())
}

/// Equal up to a bijection of apexes compatible with every leg.
fn same_cocone(a: &SetCocone, b: &SetCocone) -> bool {
    if a.0 != b.0 || a.1.len() != b.1.len() {
        return false;
    }
    let mut fwd: BTreeMap<usize, usize> = BTreeMap::new();
    for (la, lb) in a.1.iter().zip(&b.1) {
        if la.len() != lb.len() {
            return false;
        }
        for (&x, &y) in la.iter().zip(lb) {
            if *fwd.entry(x).or_insert(y) != y {
                return false;
            }
        }
    }
    let targets: BTreeSet<usize> = fwd.values().copied().collect();
    fwd.len() == a.0 && targets.len() == a.0
}

fn rand_map(rng: &mut ChaCha8Rng, s: usize, t: usize) -> Function {
    f(s, t, (0..s).map(|_| rng.gen_range(0..t)).collect())
}

fn rand_injection(rng: &mut ChaCha8Rng, s: usize, t: usize) -> Function {
    let mut pool: Vec<usize> = (0..t).collect();
    let mut map = Vec::new();
    for _ in 0..s {
        map.push(pool.swap_remove(rng.gen_range(0..pool.len())));
    }
    f(s, t, map)
}

/// One random instance of a recipe class, with the oracle's cocone.
fn recipe_instance(c: &Audited<FinSetCarrier>, rng: &mut ChaCha8Rng, kind: &str) -> (Diagram<Audited<FinSetCarrier>>, SetCocone) {
    match kind {
        "image" => {
            let (a, b) = (rng.gen_range(0..=5), rng.gen_range(1..=5));
            let g = rand_map(rng, a, b);
            let img: BTreeSet<usize> = g.map.iter().copied().collect();
            let pos: Vec<usize> = img.iter().copied().collect();
            let leg = g.map.iter().map(|y| pos.iter().position(|z| z == y).unwrap()).collect();
            (diagram(c, Shape::WalkingArrow, vec![a, b], &[("f", g)]), (img.len(), vec![leg]))
        }
        "quotient" => {
            let y = rng.gen_range(0..=5);
            let labels: Vec<usize> = (0..y).map(|_| rng.gen_range(0..3)).collect();
            let mut pairs: Vec<(usize, usize)> = (0..y)
                .flat_map(|a| (0..y).map(move |b| (a, b)))
                .filter(|&(a, b)| labels[a] == labels[b])
                .collect();
            // Shuffle so the relation object is not in a canonical order.
            for i in (1..pairs.len()).rev() {
                pairs.swap(i, rng.gen_range(0..=i));
            }
            let x = pairs.len();
            let d = f(x, y, pairs.iter().map(|p| p.0).collect());
            let e = f(x, y, pairs.iter().map(|p| p.1).collect());
            let joins: Vec<_> = pairs.iter().map(|&(a, b)| ((0, a), (0, b))).collect();
            let (k, legs) = glue(&[y], &joins);
            (diagram(c, Shape::ParallelPair, vec![x, y], &[("f", d), ("g", e)]), (k, legs))
        }
        "coproduct" => {
            let (a, b) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
            let legs = vec![(0..a).collect(), (a..a + b).collect()];
            (diagram(c, Shape::Discrete(2), vec![a, b], &[]), (a + b, legs))
        }
        "initial" => (diagram(c, Shape::Discrete(0), vec![], &[]), (0, vec![])),
        "union" => {
            let n = rng.gen_range(0..=5);
            let (a, b) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
            let (m, g) = (rand_injection(rng, a, n), rand_injection(rng, b, n));
            let u: BTreeSet<usize> = m.map.iter().chain(&g.map).copied().collect();
            let pos: Vec<usize> = u.iter().copied().collect();
            let idx = |v: &usize| pos.iter().position(|z| z == v).unwrap();
            let legs = vec![m.map.iter().map(idx).collect(), g.map.iter().map(idx).collect()];
            (diagram(c, Shape::MonoCospan, vec![a, b, n], &[("m", m), ("g", g)]), (u.len(), legs))
        }
        "double_kernel" => {
            let n = rng.gen_range(1..=5);
            let (a, b) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
            let (p, q) = (rand_map(rng, a, n), rand_map(rng, b, n));
            let mut joins = Vec::new();
            for (i, &x) in p.map.iter().enumerate() {
                for (j, &y) in p.map.iter().enumerate() {
                    if x == y {
                        joins.push(((0, i), (0, j)));
                    }
                }
                for (j, &y) in q.map.iter().enumerate() {
                    if x == y {
                        joins.push(((0, i), (1, j)));
                    }
                }
            }
            for (i, &x) in q.map.iter().enumerate() {
                for (j, &y) in q.map.iter().enumerate() {
                    if x == y {
                        joins.push(((1, i), (1, j)));
                    }
                }
            }
            (diagram(c, Shape::Cospan, vec![a, b, n], &[("f", p), ("g", q)]), glue(&[a, b], &joins))
        }
        "pushout" => {
            let a = rng.gen_range(0..=5);
            let k = rng.gen_range(0..=a);
            let b = rng.gen_range(usize::from(k > 0)..=5);
            let (m, g) = (rand_injection(rng, k, a), rand_map(rng, k, b));
            let joins: Vec<_> = (0..k)
                .flat_map(|x| [((0, x), (1, m.map[x])), ((0, x), (2, g.map[x]))])
                .collect();
            (diagram(c, Shape::MonoSpan, vec![k, a, b], &[("m", m), ("f", g)]), glue(&[k, a, b], &joins))
        }
        "reflexive" => {
            let y = rng.gen_range(1..=5);
            let extra = rng.gen_range(0..=4);
            let x = y + extra;
            let mut d: Vec<usize> = (0..y).collect();
            let mut e: Vec<usize> = (0..y).collect();
            for _ in 0..extra {
                d.push(rng.gen_range(0..y));
                e.push(rng.gen_range(0..y));
            }
            let joins: Vec<_> = (0..x).map(|i| ((0, d[i]), (0, e[i]))).collect();
            let (k, legs) = glue(&[y], &joins);
            let r = f(y, x, (0..y).collect());
            (
                diagram(c, Shape::ReflexivePair, vec![x, y], &[("d", f(x, y, d)), ("c", f(x, y, e)), ("r", r)]),
                (k, legs),
            )
        }
        "filtered" => {
            let n = rng.gen_range(0..=4);
            let (a, b) = if n == 0 { (0, 0) } else { (rng.gen_range(0..=4), rng.gen_range(0..=4)) };
            let (p, q) = (rand_map(rng, a, n.max(1)), rand_map(rng, b, n.max(1)));
            let (p, q) = if n == 0 { (f(0, 0, vec![]), f(0, 0, vec![])) } else { (p, q) };
            let joins: Vec<_> = (0..a)
                .map(|i| ((0, i), (2, p.map[i])))
                .chain((0..b).map(|i| ((1, i), (2, q.map[i]))))
                .collect();
            (diagram(c, Shape::Cospan, vec![a, b, n], &[("f", p), ("g", q)]), glue(&[a, b, n], &joins))
        }
        other => panic!("unknown recipe kind {other}"),
    }
}

fn criterion_6(audits: &mut Vec<AuditReport>) -> Outcome {
    let c = Audited::new(FinSetCarrier);
    let classes: [(WeightClass, &[&str]); 9] = [
        (WeightClass::Reg, &["image"]),
        (WeightClass::Ex, &["quotient"]),
        (WeightClass::Lext, &["coproduct"]),
        (WeightClass::Union, &["union", "initial"]),
        (WeightClass::Coh, &["image", "initial", "union"]),
        (WeightClass::CohPrime, &["double_kernel", "initial"]),
        (WeightClass::Adh, &["pushout"]),
        (WeightClass::Rc, &["reflexive"]),
        (WeightClass::from_name("filt").unwrap(), &["filtered"]),
    ];
    let mut notes = Vec::new();
    let mut total_bad = 0;
    for (k, (w, kinds)) in classes.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + k as u64);
        let mut bad = 0;
        for i in 0..RECIPE_INSTANCES {
            let (d, oracle) = recipe_instance(&c, &mut rng, kinds[i % kinds.len()]);
            let wc = weighted_colimit(&c, w, &d).unwrap();
            let legs: Vec<Vec<usize>> = wc.legs.iter().map(|(_, l)| l.map.clone()).collect();
            if !same_cocone(&oracle, &(wc.object, legs)) || wc.cross_check == Some(false) {
                bad += 1;
            }
        }
        total_bad += bad;
        notes.push(format!("{} {bad}", w.name()));
    }
    audits.push(c.report());
    outcome(
        total_bad == 0,
        format!("{RECIPE_INSTANCES} instances per class; mismatches: {}", notes.join(", ")),
    )
}

/// Sizes reachable from the point by products, equalizers and binary sums,
/// capped at `max`, after `budget` rounds.
fn brute_force_sizes(budget: usize, max: usize) -> BTreeSet<usize> {
    let mut have: BTreeSet<usize> = BTreeSet::from([1]);
    for round in 1..=budget {
        let cur: Vec<usize> = have.iter().copied().collect();
        let mut next = have.clone();
        if round == 1 {
            next.insert(1);
            next.insert(0);
        }
        for &a in &cur {
            for &b in &cur {
                next.insert(a * b);
                next.insert(a + b);
                // Equalizers of two maps a -> b: with b >= 2 any subset size
                // is possible, with b = 1 only all of a; b = 0 forces a = 0.
                if b >= 2 {
                    next.extend(0..=a);
                } else if b == 1 || a == 0 {
                    next.insert(a);
                }
            }
        }
        next.retain(|&n| n <= max);
        if next == have {
            break;
        }
        have = next;
    }
    have
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let runs: [(Shape, &[&str], usize); 4] = [
        (Shape::Discrete(1), &["lext"], 3),
        (Shape::WalkingArrow, &["reg"], 2),
        (Shape::ParallelPair, &["ex"], 1),
        (Shape::Span, &[], 1),
    ];
    let mut replayed = 0;
    for (shape, classes, budget) in runs {
        let base = standard_shape(shape);
        let classes: Vec<WeightClass> = classes.iter().map(|n| WeightClass::from_name(n).unwrap()).collect();
        let set = phi_closure(&base, &classes, &ClosureConfig::with_budget(budget)).unwrap();
        let pc = PresheafCarrier::new("closure", base.clone());
        for e in &set.elements {
            let term = Term::from_json(&base, &e.term.to_json(&base)).unwrap();
            let again = evaluate(&pc, &term).unwrap();
            replayed += 1;
            if iso_test(&pc, &again, &e.presheaf).is_none() {
                pass = false;
                notes.push(format!("{shape:?}: {} does not replay", e.term.text(&base)));
            }
        }
    }
    let base = standard_shape(Shape::Discrete(1));
    let cfg = ClosureConfig::with_budget(3);
    let set = phi_closure(&base, &[WeightClass::Lext], &cfg).unwrap();
    let got: BTreeSet<usize> = set.elements.iter().map(|e| e.presheaf.size(0)).collect();
    let want = brute_force_sizes(3, cfg.max_size);
    let exact = got == want && set.elements.len() == want.len();
    pass &= exact;
    notes.push(format!(
        "discrete(1) lext budget 3: {} classes {:?}, enumerator {:?}",
        set.elements.len(),
        got,
        want
    ));
    outcome(pass, format!("{replayed} terms replayed; {}", notes.join("; ")))
}

fn criterion_8(audits: &[AuditReport]) -> Outcome {
    let limits: usize = audits.iter().map(|a| a.limits).sum();
    let colimits: usize = audits.iter().map(|a| a.colimits).sum();
    let failures: Vec<&String> = audits.iter().flat_map(|a| &a.failures).collect();
    outcome(
        failures.is_empty() && limits > 0 && colimits > 0,
        format!(
            "{limits} limits and {colimits} colimits verified, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_lexkit");
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    let adh = format!("{data}/adhesive.lex");
    let poset = format!("{data}/poset_reg.lex");
    let diamond = format!("{data}/diamond.lex");
    let arrow = format!("{data}/arrow.lex");
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", "--property", "adhesive", "--carrier", "finset", "--max-size", "3"],
        vec!["check", "--property", "regular", "--carrier", "finposet", "--max-size", "4", "--seed", "1"],
        vec!["check", "--property", "filtered", "--carrier", "presheaf:span", "--max-size", "2", "--seed", "1"],
        vec!["postulate", &adh],
        vec!["postulate", &poset],
        vec!["postulate", &diamond],
        vec!["complete", "--base", "discrete1", "--classes", "lext", "--budget", "3"],
        vec!["famf", "--base", "walking_arrow", "--seed", "1"],
        vec!["eval", "colimit", "--class", "reg", "--diagram", &arrow],
        vec!["eval", "limit", "--diagram", &arrow],
    ];
    let mut differing = Vec::new();
    for args in &commands {
        let run = || Command::new(bin).args(args).arg("--format").arg("json").output().unwrap();
        let (a, b) = (run(), run());
        if a.stdout != b.stdout || a.status.code() != b.status.code() || a.stdout.is_empty() {
            differing.push(args.join(" "));
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} commands run twice; differing: {differing:?}", commands.len()),
    )
}

fn main() {
    let mut audits = Vec::new();
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let mut report = |n: u32, o: Outcome| {
        println!("criterion {n}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, o));
    };
    report(1, criterion_1(&mut audits));
    report(2, criterion_2(&mut audits));
    report(3, criterion_3(&mut audits));
    let (c4, c5) = criteria_4_5(&mut audits);
    report(4, c4);
    report(5, c5);
    report(6, criterion_6(&mut audits));
    report(7, criterion_7());
    report(8, criterion_8(&audits));
    report(9, criterion_9());
    let failed: Vec<u32> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
