//! Budgeted closure of the representables under finite limits and class
//! colimits, with replayable construction terms.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{run_recipe, try_match, Recipe, WeightClass};
use crate::carrier::iso::{canonical_form, iso_test};
use crate::carrier::{equalizer, factor_through_mono, pairing, product, terminal, Carrier, Diagram, Presheaf, PresheafCarrier};
use crate::error::{Error, Result};
use crate::exactness::samples::{all_congruences, all_reflexive_relations, all_subobjects, relation_from_labels};
use crate::exactness::with_pool;
use crate::fincat::{parse_category, pretty_print, standard_shape, FinCategory, Shape};
use crate::relcalc::Relation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Rep(usize),
    Terminal,
    Product,
    /// children `[source, target]`; components of the two maps
    Equalizer { f: Vec<Vec<usize>>, g: Vec<Vec<usize>> },
    /// children follow the sketch objects; `maps` follow its generators
    Colimit {
        class: WeightClass,
        recipe: Recipe,
        maps: Vec<Vec<Vec<usize>>>,
    },
}

/// A construction tree whose leaves are representables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub op: Op,
    pub children: Vec<Term>,
}

impl Term {
    pub fn depth(&self) -> usize {
        match self.op {
            Op::Rep(_) => 0,
            _ => 1 + self.children.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn to_json(&self, base: &FinCategory) -> Value {
        let (op, params) = match &self.op {
            Op::Rep(a) => ("rep", json!({ "object": base.object_name(*a) })),
            Op::Terminal => ("terminal", json!({})),
            Op::Product => ("product", json!({})),
            Op::Equalizer { f, g } => ("equalizer", json!({ "f": f, "g": g })),
            Op::Colimit { class, recipe, maps } => {
                let mut p = json!({ "class": class.name(), "recipe": recipe.name(), "maps": maps });
                if let WeightClass::Filt(s) = class {
                    p["shape"] = json!(pretty_print(s));
                }
                ("colimit", p)
            }
        };
        json!({
            "op": op,
            "children": self.children.iter().map(|t| t.to_json(base)).collect::<Vec<_>>(),
            "params": params,
        })
    }

    pub fn from_json(base: &FinCategory, v: &Value) -> Result<Term> {
        let bad = |m: &str| Error::Json(format!("term: {m}"));
        let children = v["children"]
            .as_array()
            .ok_or_else(|| bad("children"))?
            .iter()
            .map(|c| Term::from_json(base, c))
            .collect::<Result<Vec<_>>>()?;
        let params = &v["params"];
        let grid = |key: &str| -> Result<Vec<Vec<usize>>> {
            Ok(serde_json::from_value(params[key].clone())?)
        };
        let op = match v["op"].as_str().ok_or_else(|| bad("op"))? {
            "rep" => {
                let name = params["object"].as_str().ok_or_else(|| bad("object"))?;
                Op::Rep(base.object_index(name).ok_or_else(|| bad("unknown object"))?)
            }
            "terminal" => Op::Terminal,
            "product" => Op::Product,
            "equalizer" => Op::Equalizer {
                f: grid("f")?,
                g: grid("g")?,
            },
            "colimit" => {
                let name = params["class"].as_str().ok_or_else(|| bad("class"))?;
                let class = match params["shape"].as_str() {
                    Some(text) => WeightClass::Filt(Arc::new(parse_category(text)?)),
                    None => WeightClass::from_name(name).ok_or_else(|| bad("unknown class"))?,
                };
                let rname = params["recipe"].as_str().ok_or_else(|| bad("recipe"))?;
                let recipe = class
                    .recipes()
                    .into_iter()
                    .find(|r| r.name() == rname)
                    .ok_or_else(|| bad("recipe not in class"))?;
                Op::Colimit {
                    class,
                    recipe,
                    maps: serde_json::from_value(params["maps"].clone())?,
                }
            }
            _ => return Err(bad("unknown op")),
        };
        Ok(Term { op, children })
    }

    pub fn text(&self, base: &FinCategory) -> String {
        let kids: Vec<String> = self.children.iter().map(|t| t.text(base)).collect();
        match &self.op {
            Op::Rep(_) if base.object_count() == 1 => "Y".into(),
            Op::Rep(a) => format!("Y({})", base.object_name(*a)),
            Op::Terminal => "1".into(),
            Op::Product => format!("({} × {})", kids[0], kids[1]),
            Op::Equalizer { .. } => format!("Eq({} ⇉ {})", kids[0], kids[1]),
            Op::Colimit { recipe: Recipe::Initial, .. } => "0".into(),
            Op::Colimit { recipe: Recipe::Coproduct, .. } if kids.is_empty() => "0".into(),
            Op::Colimit { recipe: Recipe::Coproduct, .. } => kids.join("+"),
            Op::Colimit { recipe, .. } => format!("{}({})", recipe.name(), kids.join(", ")),
        }
    }
}

fn maps_in_generator_order(sketch: &FinCategory, named: &[(&str, Vec<Vec<usize>>)]) -> Vec<Vec<Vec<usize>>> {
    sketch
        .generators()
        .iter()
        .map(|&g| {
            let name = &sketch.morphism(g).name;
            named.iter().find(|(n, _)| n == name).expect("layout names the generators").1.clone()
        })
        .collect()
}

/// One construction step on already evaluated inputs.
fn apply_op(c: &PresheafCarrier, op: &Op, inputs: &[&Presheaf]) -> Result<Presheaf> {
    match op {
        Op::Rep(a) => Ok(c.representable(*a).clone()),
        Op::Terminal => terminal(c),
        Op::Product => Ok(product(c, &[inputs[0].clone(), inputs[1].clone()])?.apex),
        Op::Equalizer { f, g } => {
            let f = c.from_graded(inputs[0], inputs[1], f.clone())?;
            let g = c.from_graded(inputs[0], inputs[1], g.clone())?;
            Ok(equalizer(c, &f, &g)?.apex)
        }
        Op::Colimit { class, recipe, maps } => {
            // Coproducts take any arity.
            let sketch = Arc::new(match recipe {
                Recipe::Coproduct => standard_shape(Shape::Discrete(inputs.len())),
                _ => recipe.sketch(class),
            });
            if inputs.len() != sketch.object_count() || maps.len() != sketch.generators().len() {
                return Err(Error::ShapeMismatch("term does not fit its sketch".into()));
            }
            let objs: Vec<Presheaf> = inputs.iter().map(|&p| p.clone()).collect();
            let mut gens = BTreeMap::new();
            for (k, &g) in sketch.generators().iter().enumerate() {
                let (s, t) = (sketch.source(g), sketch.target(g));
                gens.insert(g, c.from_graded(&objs[s], &objs[t], maps[k].clone())?);
            }
            let d = Diagram::new(c, sketch, objs, &gens)?;
            let m = try_match(c, class, *recipe, &d)?
                .ok_or_else(|| Error::ShapeMismatch("sketch does not match its recipe".into()))?;
            Ok(run_recipe(c, &m, &d)?.object)
        }
    }
}

/// Re-evaluates a term from the representables.
pub fn evaluate(c: &PresheafCarrier, t: &Term) -> Result<Presheaf> {
    let kids = t.children.iter().map(|k| evaluate(c, k)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Presheaf> = kids.iter().collect();
    apply_op(c, &t.op, &refs)
}

#[derive(Clone, Debug)]
pub struct ClosureConfig {
    /// Number of construction rounds; 0 keeps only the representables.
    pub budget: usize,
    /// Elements larger than this (total size) are discarded.
    pub max_size: usize,
    /// Hom-sets are truncated to this many maps when instantiating.
    pub max_hom: usize,
    /// Candidate cap per round.
    pub max_candidates: usize,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            budget: 2,
            max_size: 4,
            max_hom: 512,
            max_candidates: 20_000,
        }
    }
}

impl ClosureConfig {
    pub fn with_budget(budget: usize) -> Self {
        ClosureConfig {
            budget,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClosureElement {
    pub presheaf: Presheaf,
    pub term: Term,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct ClosureSet {
    pub base: FinCategory,
    pub classes: Vec<WeightClass>,
    pub config: ClosureConfig,
    pub elements: Vec<ClosureElement>,
    pub rounds: usize,
    /// A round added nothing.
    pub fixpoint: bool,
    /// Some hom-set or candidate list was cut off by a cap.
    pub truncated: bool,
}

impl ClosureSet {
    pub fn budget_exhausted(&self) -> bool {
        !self.fixpoint
    }

    pub fn find(&self, x: &Presheaf) -> Option<&ClosureElement> {
        let key = canonical_form(&self.base, x).0;
        self.elements
            .iter()
            .find(|e| canonical_form(&self.base, &e.presheaf).0 == key)
    }

    pub fn to_json(&self, c: &PresheafCarrier) -> Value {
        json!({
            "base": pretty_print(&self.base),
            "classes": self.classes.iter().map(|w| w.name()).collect::<Vec<_>>(),
            "budget": self.config.budget,
            "max_size": self.config.max_size,
            "max_hom": self.config.max_hom,
            "rounds": self.rounds,
            "fixpoint": self.fixpoint,
            "budget_exhausted": self.budget_exhausted(),
            "truncated": self.truncated,
            "elements": self.elements.iter().enumerate().map(|(i, e)| json!({
                "index": i,
                "depth": e.depth,
                "sizes": e.presheaf.sizes(),
                "text": e.term.text(&self.base),
                "term": e.term.to_json(&self.base),
                "presheaf": c.obj_json(&e.presheaf),
            })).collect::<Vec<_>>(),
        })
    }
}

struct Builder<'a> {
    c: &'a PresheafCarrier,
    cfg: &'a ClosureConfig,
    elems: Vec<ClosureElement>,
    keys: HashMap<Presheaf, usize>,
    truncated: bool,
}

/// A pending step: operation and indices of its inputs.
struct Cand {
    op: Op,
    inputs: Vec<usize>,
}

impl<'a> Builder<'a> {
    fn hom(&mut self, i: usize, j: usize) -> Vec<crate::carrier::NatTrans> {
        let mut h = self.c.hom(&self.elems[i].presheaf, &self.elems[j].presheaf);
        if h.len() > self.cfg.max_hom {
            h.truncate(self.cfg.max_hom);
            self.truncated = true;
        }
        h
    }

    fn index_of(&self, x: &Presheaf) -> Option<usize> {
        self.keys.get(&canonical_form(self.c.base(), x).0).copied()
    }

    /// Monos from elements into `elems[i]`, one per closed subset, as
    /// `(mask, source element, graded map)`.
    fn sub_elements(&self, i: usize) -> Vec<(Vec<bool>, usize, Vec<Vec<usize>>)> {
        let c = self.c;
        let x = &self.elems[i].presheaf;
        let mut out = Vec::new();
        for m in all_subobjects(c, x) {
            let Some(k) = self.index_of(c.dom(&m)) else { continue };
            let iso = iso_test(c, &self.elems[k].presheaf, c.dom(&m)).expect("same canonical form");
            let incl = c.compose(&m, &iso).expect("composable");
            out.push((mask_of(c, &incl), k, c.graded(&incl)));
        }
        out
    }

    /// A relation on `elems[i]` whose object is (isomorphic to) an element,
    /// as `(element, d, c, iso into the relation object)`.
    fn relation_legs(&self, rel: &Relation<PresheafCarrier>) -> Option<(usize, crate::carrier::NatTrans, crate::carrier::NatTrans, crate::carrier::NatTrans)> {
        let c = self.c;
        let obj = c.dom(&rel.sub.mono);
        let k = self.index_of(obj)?;
        let iso = iso_test(c, &self.elems[k].presheaf, obj).expect("same canonical form");
        let d = c.compose(&rel.d, &iso).ok()?;
        let cc = c.compose(&rel.c, &iso).ok()?;
        Some((k, d, cc, iso))
    }

    fn insert(&mut self, term: Term, p: Presheaf) -> bool {
        let key = canonical_form(self.c.base(), &p).0;
        if self.keys.contains_key(&key) {
            return false;
        }
        self.keys.insert(key, self.elems.len());
        let depth = term.depth();
        self.elems.push(ClosureElement { presheaf: p, term, depth });
        true
    }

    fn candidates(&mut self, round: usize, classes: &[WeightClass], frontier: &HashSet<usize>) -> Vec<Cand> {
        let c = self.c;
        let n = self.elems.len();
        let fresh = |xs: &[usize]| xs.iter().any(|k| frontier.contains(k));
        let mut out: Vec<Cand> = Vec::new();
        if round == 1 {
            out.push(Cand { op: Op::Terminal, inputs: vec![] });
        }
        for i in 0..n {
            for j in i..n {
                if fresh(&[i, j]) {
                    out.push(Cand { op: Op::Product, inputs: vec![i, j] });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !fresh(&[i, j]) {
                    continue;
                }
                let hom = self.hom(i, j);
                let maps: Vec<Vec<Vec<usize>>> = hom.iter().map(|h| c.graded(h)).collect();
                let mut seen = HashSet::new();
                for a in 0..maps.len() {
                    for b in a + 1..maps.len() {
                        let mask: Vec<bool> = maps[a]
                            .iter()
                            .zip(&maps[b])
                            .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| u == v))
                            .collect();
                        if seen.insert(mask) {
                            out.push(Cand {
                                op: Op::Equalizer {
                                    f: maps[a].clone(),
                                    g: maps[b].clone(),
                                },
                                inputs: vec![i, j],
                            });
                        }
                    }
                }
            }
        }

        let mut done: Vec<Recipe> = Vec::new();
        for class in classes {
            for recipe in class.recipes() {
                if done.contains(&recipe) {
                    continue;
                }
                done.push(recipe);
                let sketch = recipe.sketch(class);
                let colim = |maps: Vec<Vec<Vec<usize>>>, inputs: Vec<usize>| Cand {
                    op: Op::Colimit {
                        class: class.clone(),
                        recipe,
                        maps,
                    },
                    inputs,
                };
                match recipe {
                    Recipe::Initial => {
                        if round == 1 {
                            out.push(colim(vec![], vec![]));
                        }
                    }
                    Recipe::Coproduct => {
                        if round == 1 {
                            out.push(colim(vec![], vec![]));
                        }
                        for i in 0..n {
                            for j in i..n {
                                if fresh(&[i, j]) {
                                    out.push(colim(vec![], vec![i, j]));
                                }
                            }
                        }
                    }
                    Recipe::Image => {
                        for i in 0..n {
                            let mut seen = HashSet::new();
                            for j in 0..n {
                                if !fresh(&[i, j]) {
                                    continue;
                                }
                                for h in self.hom(i, j) {
                                    let g = c.graded(&h);
                                    if seen.insert(kernel_labels(&g)) {
                                        out.push(colim(maps_in_generator_order(&sketch, &[("f", g)]), vec![i, j]));
                                    }
                                }
                            }
                        }
                    }
                    Recipe::Quotient => {
                        for i in 0..n {
                            let x = self.elems[i].presheaf.clone();
                            for labels in all_congruences(c, &x) {
                                let Ok(rel) = relation_from_labels(c, &x, &labels) else { continue };
                                let Some((k, d, cc, _)) = self.relation_legs(&rel) else { continue };
                                if fresh(&[k, i]) {
                                    let maps = maps_in_generator_order(&sketch, &[("f", c.graded(&d)), ("g", c.graded(&cc))]);
                                    out.push(colim(maps, vec![k, i]));
                                }
                            }
                        }
                    }
                    Recipe::Union => {
                        for i in 0..n {
                            let subs = self.sub_elements(i);
                            let mut seen = HashSet::new();
                            for a in 0..subs.len() {
                                for b in a..subs.len() {
                                    let (ka, kb) = (subs[a].1, subs[b].1);
                                    if !fresh(&[ka, kb, i]) {
                                        continue;
                                    }
                                    let joint: Vec<bool> = subs[a].0.iter().zip(&subs[b].0).map(|(x, y)| *x || *y).collect();
                                    if seen.insert(joint) {
                                        let maps = maps_in_generator_order(
                                            &sketch,
                                            &[("m", subs[a].2.clone()), ("g", subs[b].2.clone())],
                                        );
                                        out.push(colim(maps, vec![ka, kb, i]));
                                    }
                                }
                            }
                        }
                    }
                    Recipe::DoubleKernel => {
                        for i in 0..n {
                            let mut images: Vec<(Vec<bool>, usize, Vec<Vec<usize>>)> = Vec::new();
                            let mut seen_img = HashSet::new();
                            for k in 0..n {
                                for h in self.hom(k, i) {
                                    let mask = mask_of(c, &h);
                                    if seen_img.insert((mask.clone(), k)) {
                                        images.push((mask, k, c.graded(&h)));
                                    }
                                }
                            }
                            let mut seen = HashSet::new();
                            for a in 0..images.len() {
                                for b in a..images.len() {
                                    let (ka, kb) = (images[a].1, images[b].1);
                                    if !fresh(&[ka, kb, i]) {
                                        continue;
                                    }
                                    let joint: Vec<bool> =
                                        images[a].0.iter().zip(&images[b].0).map(|(x, y)| *x || *y).collect();
                                    if seen.insert(joint) {
                                        let maps = maps_in_generator_order(
                                            &sketch,
                                            &[("f", images[a].2.clone()), ("g", images[b].2.clone())],
                                        );
                                        out.push(colim(maps, vec![ka, kb, i]));
                                    }
                                }
                            }
                        }
                    }
                    Recipe::Pushout => {
                        for a in 0..n {
                            for (_, k, m) in self.sub_elements(a) {
                                for b in 0..n {
                                    if !fresh(&[k, a, b]) {
                                        continue;
                                    }
                                    for h in self.hom(k, b) {
                                        let maps = maps_in_generator_order(&sketch, &[("m", m.clone()), ("f", c.graded(&h))]);
                                        out.push(colim(maps, vec![k, a, b]));
                                    }
                                }
                            }
                        }
                    }
                    Recipe::ReflexiveCoequalizer => {
                        for i in 0..n {
                            let x = self.elems[i].presheaf.clone();
                            let Ok(rels) = all_reflexive_relations(c, &x) else { continue };
                            for rel in rels {
                                let Some((k, d, cc, iso)) = self.relation_legs(&rel) else { continue };
                                if !fresh(&[k, i]) {
                                    continue;
                                }
                                let id = c.identity(&x);
                                let diag = pairing(c, &rel.square, &[id.clone(), id]).expect("pairing");
                                let Ok(Some(into_rel)) = factor_through_mono(c, &diag, &rel.sub.mono) else { continue };
                                let inv = c.inverse(&iso).expect("iso");
                                let r = c.compose(&inv, &into_rel).expect("composable");
                                let maps = maps_in_generator_order(
                                    &sketch,
                                    &[("d", c.graded(&d)), ("c", c.graded(&cc)), ("r", c.graded(&r))],
                                );
                                out.push(colim(maps, vec![k, i]));
                            }
                        }
                    }
                    Recipe::Filtered => self.filtered_candidates(class, &sketch, &fresh, &mut out),
                }
            }
        }
        if out.len() > self.cfg.max_candidates {
            out.truncate(self.cfg.max_candidates);
            self.truncated = true;
        }
        out
    }

    fn filtered_candidates(&mut self, class: &WeightClass, sketch: &FinCategory, fresh: &dyn Fn(&[usize]) -> bool, out: &mut Vec<Cand>) {
        let n = self.elems.len();
        let k = sketch.object_count();
        let gens = sketch.generators().to_vec();
        let mut assign = vec![0usize; k];
        loop {
            if fresh(&assign) {
                let homs: Vec<Vec<Vec<Vec<usize>>>> = gens
                    .iter()
                    .map(|&g| {
                        self.hom(assign[sketch.source(g)], assign[sketch.target(g)])
                            .iter()
                            .map(|h| self.c.graded(h))
                            .collect()
                    })
                    .collect();
                if homs.iter().all(|h| !h.is_empty()) {
                    let mut idx = vec![0usize; gens.len()];
                    'maps: loop {
                        if out.len() >= self.cfg.max_candidates {
                            self.truncated = true;
                            return;
                        }
                        out.push(Cand {
                            op: Op::Colimit {
                                class: class.clone(),
                                recipe: Recipe::Filtered,
                                maps: idx.iter().enumerate().map(|(g, &m)| homs[g][m].clone()).collect(),
                            },
                            inputs: assign.clone(),
                        });
                        let mut p = 0;
                        loop {
                            if p == idx.len() {
                                break 'maps;
                            }
                            idx[p] += 1;
                            if idx[p] < homs[p].len() {
                                break;
                            }
                            idx[p] = 0;
                            p += 1;
                        }
                    }
                }
            }
            let mut p = 0;
            loop {
                if p == k || n == 0 {
                    return;
                }
                assign[p] += 1;
                if assign[p] < n {
                    break;
                }
                assign[p] = 0;
                p += 1;
            }
        }
    }
}

fn mask_of(c: &PresheafCarrier, m: &crate::carrier::NatTrans) -> Vec<bool> {
    let mut keep: Vec<bool> = c.cod(m).sizes().iter().flat_map(|&s| vec![false; s]).collect();
    let mut offset = 0;
    for (a, comp) in m.components.iter().enumerate() {
        for &v in comp {
            keep[offset + v] = true;
        }
        offset += c.cod(m).size(a);
    }
    keep
}

fn kernel_labels(g: &[Vec<usize>]) -> Vec<Vec<usize>> {
    g.iter()
        .map(|map| {
            let mut first: HashMap<usize, usize> = HashMap::new();
            map.iter()
                .map(|&v| {
                    let next = first.len();
                    *first.entry(v).or_insert(next)
                })
                .collect()
        })
        .collect()
}

/// Closes the representables of `base` under finite limits and the
/// colimits of `classes`, one term depth per round.
pub fn phi_closure(base: &FinCategory, classes: &[WeightClass], cfg: &ClosureConfig) -> Result<ClosureSet> {
    let c = PresheafCarrier::new("closure", base.clone());
    let mut b = Builder {
        c: &c,
        cfg,
        elems: Vec::new(),
        keys: HashMap::new(),
        truncated: false,
    };
    for a in 0..base.object_count() {
        let t = Term {
            op: Op::Rep(a),
            children: vec![],
        };
        b.insert(t, c.representable(a).clone());
    }
    let mut frontier: HashSet<usize> = (0..b.elems.len()).collect();
    let mut rounds = 0;
    let mut fixpoint = false;
    for round in 1..=cfg.budget {
        rounds = round;
        let cands = b.candidates(round, classes, &frontier);
        let elems = &b.elems;
        let results: Vec<Result<Option<Presheaf>>> = with_pool(|| {
            cands
                .par_iter()
                .map(|cand| {
                    let inputs: Vec<&Presheaf> = cand.inputs.iter().map(|&k| &elems[k].presheaf).collect();
                    let p = apply_op(&c, &cand.op, &inputs)?;
                    Ok((p.total() <= cfg.max_size).then_some(p))
                })
                .collect()
        });
        let before = b.elems.len();
        for (cand, res) in cands.into_iter().zip(results) {
            if let Some(p) = res? {
                let term = Term {
                    op: cand.op,
                    children: cand.inputs.iter().map(|&k| b.elems[k].term.clone()).collect(),
                };
                b.insert(term, p);
            }
        }
        frontier = (before..b.elems.len()).collect();
        if frontier.is_empty() {
            fixpoint = true;
            break;
        }
    }
    if cfg.budget == 0 {
        fixpoint = false;
    }
    Ok(ClosureSet {
        base: base.clone(),
        classes: classes.to_vec(),
        config: cfg.clone(),
        elements: b.elems,
        rounds,
        fixpoint,
        truncated: b.truncated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Saturation {
    Yes(Term),
    NoWithinBudget,
}

/// Semi-decides whether `phi` lies in the closure, returning a witness term.
pub fn in_saturation(base: &FinCategory, phi: &Presheaf, classes: &[WeightClass], cfg: &ClosureConfig) -> Result<Saturation> {
    phi.validate(base)?;
    let cfg = ClosureConfig {
        max_size: cfg.max_size.max(phi.total()),
        ..cfg.clone()
    };
    let set = phi_closure(base, classes, &cfg)?;
    Ok(match set.find(phi) {
        Some(e) => Saturation::Yes(e.term.clone()),
        None => Saturation::NoWithinBudget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> FinCategory {
        standard_shape(Shape::Discrete(1))
    }

    fn set(n: usize) -> Presheaf {
        Presheaf::from_actions(&point(), vec![n], vec![(0..n).collect()]).unwrap()
    }

    #[test]
    fn representables_at_budget_zero() {
        let base = standard_shape(Shape::Span);
        let s = phi_closure(&base, &[], &ClosureConfig::with_budget(0)).unwrap();
        assert_eq!(s.elements.len(), 3);
    }

    #[test]
    fn lext_over_point_gives_small_sets() {
        let s = phi_closure(&point(), &[WeightClass::Lext], &ClosureConfig::with_budget(3)).unwrap();
        let mut sizes: Vec<usize> = s.elements.iter().map(|e| e.presheaf.total()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![0, 1, 2, 3, 4]);
        assert!(s.fixpoint);
        let c = PresheafCarrier::new("point", point());
        for e in &s.elements {
            assert_eq!(evaluate(&c, &e.term).unwrap(), e.presheaf);
            let back = Term::from_json(&point(), &e.term.to_json(&point())).unwrap();
            assert_eq!(back, e.term);
        }
    }

    #[test]
    fn three_is_a_triple_sum() {
        let r = in_saturation(&point(), &set(3), &[WeightClass::Lext], &ClosureConfig::with_budget(3)).unwrap();
        let Saturation::Yes(t) = r else { panic!("expected a witness") };
        assert_eq!(t.text(&point()), "Y+Y+Y");
        assert_eq!(in_saturation(&point(), &set(1), &[], &ClosureConfig::with_budget(0)).unwrap(), Saturation::Yes(Term { op: Op::Rep(0), children: vec![] }));
    }

    #[test]
    fn limits_alone_stay_at_the_point() {
        let r = in_saturation(&point(), &set(2), &[], &ClosureConfig::with_budget(3)).unwrap();
        assert_eq!(r, Saturation::NoWithinBudget);
    }
}
