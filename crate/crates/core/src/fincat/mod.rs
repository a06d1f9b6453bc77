//! Finite categories with explicit composition tables.
//!
//! A [`FinCategory`] stores every morphism, including identities and
//! composites, and a total table `compose[g][f] = g ∘ f` over composable pairs.
//! Categories are usually built from a presentation (objects, generating
//! arrows, equations between paths), either programmatically through
//! [`CategoryBuilder`] or from the text format in [`dsl`].

pub mod dsl;
mod functor;
mod limits;
mod shapes;

pub use dsl::{parse_category, pretty_print, Parser};
pub use functor::FinFunctor;
pub use shapes::{standard_shape, Shape};

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// Upper bound on the number of morphisms a presentation may generate.
pub const MAX_MORPHISMS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismInfo {
    pub name: String,
    pub source: usize,
    pub target: usize,
    /// Generators in application order (first applied first). Empty for identities.
    pub path: Vec<usize>,
}

/// An equation between two generator paths, both running `source -> target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub source: usize,
    pub target: usize,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismInfo>,
    identities: Vec<usize>,
    generators: Vec<usize>,
    compose: Vec<Vec<Option<usize>>>,
    monos: Vec<usize>,
    equations: Vec<Equation>,
}

impl FinCategory {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphisms(&self) -> &[MorphismInfo] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &MorphismInfo {
        &self.morphisms[f]
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        if let Some(obj) = name.strip_prefix("id_") {
            if let Some(a) = self.object_index(obj) {
                return Some(self.identities[a]);
            }
        }
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn source(&self, f: usize) -> usize {
        self.morphisms[f].source
    }

    pub fn target(&self, f: usize) -> usize {
        self.morphisms[f].target
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identities[a]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.source(f)] == f
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Generators carrying a mono marking.
    pub fn mono_marks(&self) -> &[usize] {
        &self.monos
    }

    pub fn is_marked_mono(&self, f: usize) -> bool {
        self.monos.binary_search(&f).is_ok()
    }

    /// `g ∘ f`, defined exactly when `target(f) = source(g)`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g][f]
    }

    /// Composite of a path given in application order.
    pub fn compose_path(&self, source: usize, path: &[usize]) -> Option<usize> {
        let mut acc = self.identities[source];
        for &g in path {
            acc = self.compose(g, acc)?;
        }
        Some(acc)
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&f| self.source(f) == a && self.target(f) == b)
            .collect()
    }

    /// Morphisms with the given target.
    pub fn into_object(&self, b: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&f| self.target(f) == b)
            .collect()
    }

    /// Builds a category from a complete table. Generators and paths are
    /// derived; identities must be listed.
    pub fn from_table(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identities: Vec<usize>,
        compose: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let mut infos: Vec<MorphismInfo> = morphisms
            .into_iter()
            .map(|(name, source, target)| MorphismInfo {
                name,
                source,
                target,
                path: Vec::new(),
            })
            .collect();
        let n = infos.len();
        if compose.len() != n || compose.iter().any(|row| row.len() != n) {
            return Err(Error::IllFormed("composition table has wrong dimensions".into()));
        }
        let is_id = |f: usize| identities.contains(&f);
        // Greedy generating set: add a morphism whenever the current
        // generators do not reach it.
        let mut generators: Vec<usize> = Vec::new();
        let mut reached: Vec<Option<Vec<usize>>> = vec![None; n];
        for &i in &identities {
            reached[i] = Some(Vec::new());
        }
        for f in 0..n {
            if reached[f].is_some() {
                continue;
            }
            generators.push(f);
            reached[f] = Some(vec![f]);
            // Close under post-composition with generators, breadth first.
            let mut queue: VecDeque<usize> = (0..n).filter(|&h| reached[h].is_some() && !is_id(h)).collect();
            while let Some(h) = queue.pop_front() {
                for &g in &generators {
                    if let Some(c) = compose[g][h] {
                        if reached[c].is_none() {
                            let mut p = reached[h].clone().unwrap_or_default();
                            p.push(g);
                            reached[c] = Some(p);
                            queue.push_back(c);
                        }
                    }
                }
                for &g in &generators {
                    if let Some(c) = compose[h][g] {
                        if reached[c].is_none() {
                            let mut p = vec![g];
                            p.extend(reached[h].clone().unwrap_or_default());
                            reached[c] = Some(p);
                            queue.push_back(c);
                        }
                    }
                }
            }
        }
        for (f, info) in infos.iter_mut().enumerate() {
            info.path = reached[f].clone().unwrap_or_default();
        }
        let cat = FinCategory {
            objects,
            morphisms: infos,
            identities,
            generators,
            compose,
            monos: Vec::new(),
            equations: Vec::new(),
        };
        cat.validate()?;
        Ok(cat)
    }

    pub fn with_mono_marks(mut self, marks: Vec<usize>) -> Result<Self> {
        let mut marks = marks;
        marks.sort_unstable();
        marks.dedup();
        if let Some(&bad) = marks.iter().find(|&&f| f >= self.morphisms.len()) {
            return Err(Error::IllFormed(format!("mono mark on unknown morphism {bad}")));
        }
        self.monos = marks;
        Ok(self)
    }

    /// Exhaustive check of the category axioms on the stored table.
    pub fn validate(&self) -> Result<()> {
        let n = self.morphisms.len();
        if self.identities.len() != self.objects.len() {
            return Err(Error::IllFormed("one identity per object required".into()));
        }
        for (a, &i) in self.identities.iter().enumerate() {
            if i >= n || self.source(i) != a || self.target(i) != a {
                return Err(Error::IllFormed(format!(
                    "identity of {} is not an endomorphism of it",
                    self.objects[a]
                )));
            }
        }
        for m in &self.morphisms {
            if m.source >= self.objects.len() || m.target >= self.objects.len() {
                return Err(Error::IllFormed(format!("morphism {} has unknown endpoint", m.name)));
            }
        }
        for g in 0..n {
            for f in 0..n {
                let composable = self.target(f) == self.source(g);
                match (composable, self.compose[g][f]) {
                    (true, None) => {
                        return Err(Error::IllFormed(format!(
                            "composite {}.{} undefined",
                            self.morphisms[g].name, self.morphisms[f].name
                        )))
                    }
                    (false, Some(_)) => {
                        return Err(Error::IllFormed(format!(
                            "composite {}.{} defined for non-composable pair",
                            self.morphisms[g].name, self.morphisms[f].name
                        )))
                    }
                    (true, Some(c)) => {
                        if c >= n || self.source(c) != self.source(f) || self.target(c) != self.target(g) {
                            return Err(Error::IllFormed(format!(
                                "composite {}.{} has wrong endpoints",
                                self.morphisms[g].name, self.morphisms[f].name
                            )));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for f in 0..n {
            let a = self.source(f);
            let b = self.target(f);
            if self.compose[self.identities[b]][f] != Some(f) || self.compose[f][self.identities[a]] != Some(f) {
                return Err(Error::IllFormed(format!(
                    "identity law fails for {}",
                    self.morphisms[f].name
                )));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(gf) = self.compose[g][f] else { continue };
                for h in 0..n {
                    let Some(hg) = self.compose[h][g] else { continue };
                    if self.compose[h][gf] != self.compose[hg][f] {
                        return Err(Error::IllFormed(format!(
                            "associativity fails for {}, {}, {}",
                            self.morphisms[h].name, self.morphisms[g].name, self.morphisms[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Reverses every morphism; composition is flipped.
    pub fn opposite(&self) -> FinCategory {
        let n = self.morphisms.len();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| MorphismInfo {
                name: m.name.clone(),
                source: m.target,
                target: m.source,
                path: m.path.iter().rev().copied().collect(),
            })
            .collect();
        let mut compose = vec![vec![None; n]; n];
        for (g, row) in compose.iter_mut().enumerate() {
            for (f, cell) in row.iter_mut().enumerate() {
                *cell = self.compose[f][g];
            }
        }
        let equations = self
            .equations
            .iter()
            .map(|e| Equation {
                source: e.target,
                target: e.source,
                lhs: e.lhs.iter().rev().copied().collect(),
                rhs: e.rhs.iter().rev().copied().collect(),
            })
            .collect();
        FinCategory {
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            generators: self.generators.clone(),
            compose,
            monos: self.monos.clone(),
            equations,
        }
    }

    /// Product category; objects and morphisms are pairs in row-major order.
    pub fn product(&self, other: &FinCategory) -> FinCategory {
        let (n1, n2) = (self.morphisms.len(), other.morphisms.len());
        let mut objects = Vec::new();
        for a in &self.objects {
            for b in &other.objects {
                objects.push(format!("{a}*{b}"));
            }
        }
        let pair_obj = |a: usize, b: usize| a * other.objects.len() + b;
        let pair_mor = |f: usize, g: usize| f * n2 + g;
        let mut morphisms = Vec::with_capacity(n1 * n2);
        for f in 0..n1 {
            for g in 0..n2 {
                morphisms.push((
                    format!("({},{})", self.morphisms[f].name, other.morphisms[g].name),
                    pair_obj(self.source(f), other.source(g)),
                    pair_obj(self.target(f), other.target(g)),
                ));
            }
        }
        let mut identities = Vec::new();
        for a in 0..self.objects.len() {
            for b in 0..other.objects.len() {
                identities.push(pair_mor(self.identities[a], other.identities[b]));
            }
        }
        let n = n1 * n2;
        let mut compose = vec![vec![None; n]; n];
        for f1 in 0..n1 {
            for f2 in 0..n2 {
                for g1 in 0..n1 {
                    for g2 in 0..n2 {
                        if let (Some(c1), Some(c2)) = (self.compose[g1][f1], other.compose[g2][f2]) {
                            compose[pair_mor(g1, g2)][pair_mor(f1, f2)] = Some(pair_mor(c1, c2));
                        }
                    }
                }
            }
        }
        FinCategory::from_table(objects, morphisms, identities, compose)
            .expect("product of valid categories is valid")
    }

    /// Filteredness: nonempty, every pair of objects has a common upper
    /// bound, and every parallel pair is coequalized by some morphism.
    pub fn is_filtered(&self) -> bool {
        if self.objects.is_empty() {
            return false;
        }
        let n = self.objects.len();
        for a in 0..n {
            for b in 0..n {
                let bound = (0..n).any(|c| !self.hom(a, c).is_empty() && !self.hom(b, c).is_empty());
                if !bound {
                    return false;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let hom = self.hom(a, b);
                for &f in &hom {
                    for &g in &hom {
                        let ok = (0..self.morphisms.len()).any(|h| {
                            self.source(h) == b && self.compose(h, f) == self.compose(h, g)
                        });
                        if !ok {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Searches for an isomorphism of categories `self -> other`.
    pub fn find_isomorphism(&self, other: &FinCategory) -> Option<FinFunctor> {
        if self.objects.len() != other.objects.len() || self.morphisms.len() != other.morphisms.len() {
            return None;
        }
        let n = self.objects.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut result = None;
        permutations(&mut perm, 0, &mut |objmap| {
            if result.is_some() {
                return;
            }
            // Hom-set sizes must agree.
            for a in 0..n {
                for b in 0..n {
                    if self.hom(a, b).len() != other.hom(objmap[a], objmap[b]).len() {
                        return;
                    }
                }
            }
            let gens = &self.generators;
            let mut images = vec![0usize; gens.len()];
            self.search_generator_images(other, objmap, 0, &mut images, &mut result);
        });
        result
    }

    fn search_generator_images(
        &self,
        other: &FinCategory,
        objmap: &[usize],
        k: usize,
        images: &mut Vec<usize>,
        result: &mut Option<FinFunctor>,
    ) {
        if result.is_some() {
            return;
        }
        if k == self.generators.len() {
            let mut genmap: HashMap<usize, usize> = HashMap::new();
            for (i, &g) in self.generators.iter().enumerate() {
                genmap.insert(g, images[i]);
            }
            let mut mormap = vec![0; self.morphisms.len()];
            for (f, info) in self.morphisms.iter().enumerate() {
                let path: Vec<usize> = info.path.iter().map(|g| genmap[g]).collect();
                match other.compose_path(objmap[info.source], &path) {
                    Some(h) => mormap[f] = h,
                    None => return,
                }
            }
            let mut seen = mormap.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != mormap.len() {
                return;
            }
            if let Ok(func) = FinFunctor::new(self.clone(), other.clone(), objmap.to_vec(), mormap) {
                *result = Some(func);
            }
            return;
        }
        let g = self.generators[k];
        for h in other.hom(objmap[self.source(g)], objmap[self.target(g)]) {
            images[k] = h;
            self.search_generator_images(other, objmap, k + 1, images, result);
        }
    }
}

fn permutations(perm: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// A presentation by objects, generating arrows and path equations.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    arrows: Vec<(String, usize, usize)>,
    equations: Vec<Equation>,
    monos: Vec<usize>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: &str) -> Result<usize> {
        if self.objects.iter().any(|o| o == name) {
            return Err(Error::IllFormed(format!("object {name} declared twice")));
        }
        self.objects.push(name.to_string());
        Ok(self.objects.len() - 1)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow(&mut self, name: &str, source: &str, target: &str) -> Result<usize> {
        if self.arrows.iter().any(|a| a.0 == name) || name.starts_with("id_") {
            return Err(Error::IllFormed(format!("arrow name {name} reused or reserved")));
        }
        let s = self
            .object_index(source)
            .ok_or_else(|| Error::IllFormed(format!("arrow {name}: undeclared object {source}")))?;
        let t = self
            .object_index(target)
            .ok_or_else(|| Error::IllFormed(format!("arrow {name}: undeclared object {target}")))?;
        self.arrows.push((name.to_string(), s, t));
        Ok(self.arrows.len() - 1)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.0 == name)
    }

    /// Resolves a `.`-separated path read right to left (`g.f` = g after f)
    /// into generator indices in application order, with its endpoints.
    pub fn resolve_path(&self, names: &[String]) -> Result<(usize, usize, Vec<usize>)> {
        let mut path = Vec::new();
        let mut endpoint: Option<(usize, usize)> = None;
        for name in names.iter().rev() {
            let (s, t, gen) = if let Some(obj) = name.strip_prefix("id_") {
                let a = self
                    .object_index(obj)
                    .ok_or_else(|| Error::IllFormed(format!("identity on undeclared object {obj}")))?;
                (a, a, None)
            } else {
                let i = self
                    .arrow_index(name)
                    .ok_or_else(|| Error::IllFormed(format!("unknown arrow {name}")))?;
                (self.arrows[i].1, self.arrows[i].2, Some(i))
            };
            endpoint = match endpoint {
                None => Some((s, t)),
                Some((src, cur)) => {
                    if cur != s {
                        return Err(Error::IllFormed(format!(
                            "path {} is not composable",
                            names.join(".")
                        )));
                    }
                    Some((src, t))
                }
            };
            if let Some(g) = gen {
                path.push(g);
            }
        }
        let (s, t) = endpoint.ok_or_else(|| Error::IllFormed("empty path".into()))?;
        Ok((s, t, path))
    }

    pub fn equation(&mut self, lhs: &[String], rhs: &[String]) -> Result<()> {
        let (s1, t1, l) = self.resolve_path(lhs)?;
        let (s2, t2, r) = self.resolve_path(rhs)?;
        if (s1, t1) != (s2, t2) {
            return Err(Error::IllFormed(format!(
                "equation {} = {} relates paths with different endpoints",
                lhs.join("."),
                rhs.join(".")
            )));
        }
        self.equations.push(Equation {
            source: s1,
            target: t1,
            lhs: l,
            rhs: r,
        });
        Ok(())
    }

    pub fn mono(&mut self, name: &str) -> Result<()> {
        let i = self
            .arrow_index(name)
            .ok_or_else(|| Error::IllFormed(format!("mono marking on unknown arrow {name}")))?;
        self.monos.push(i);
        Ok(())
    }

    /// Enumerates paths from each identity, using the equations oriented
    /// shortlex-decreasing as rewrite rules to keep the search finite, then
    /// merges states under the congruence generated by the equations.
    pub fn build(&self) -> Result<FinCategory> {
        let rules: Vec<(Vec<usize>, Vec<usize>)> = self
            .equations
            .iter()
            .filter(|e| e.lhs != e.rhs)
            .map(|e| {
                if shortlex_greater(&e.lhs, &e.rhs) {
                    (e.lhs.clone(), e.rhs.clone())
                } else {
                    (e.rhs.clone(), e.lhs.clone())
                }
            })
            .collect();
        let ngen = self.arrows.len();
        let nobj = self.objects.len();

        // States: (source, normal-form path). Identities come first.
        let mut states: Vec<(usize, Vec<usize>)> = (0..nobj).map(|a| (a, Vec::new())).collect();
        let mut index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            index.insert(s.clone(), i);
        }
        let target_of = |s: &(usize, Vec<usize>)| s.1.last().map_or(s.0, |&g| self.arrows[g].2);
        let mut act: Vec<Vec<Option<usize>>> = Vec::new();
        let mut next = 0;
        while next < states.len() {
            let (src, path) = states[next].clone();
            let tgt = target_of(&states[next]);
            let mut row = vec![None; ngen];
            for (g, slot) in row.iter_mut().enumerate() {
                if self.arrows[g].1 != tgt {
                    continue;
                }
                let mut p = path.clone();
                p.push(g);
                let key = (src, normal_form(&p, &rules));
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= MAX_MORPHISMS {
                            return Err(Error::IllFormed(format!(
                                "presentation generates more than {MAX_MORPHISMS} morphisms"
                            )));
                        }
                        states.push(key.clone());
                        index.insert(key, states.len() - 1);
                        states.len() - 1
                    }
                };
                *slot = Some(id);
            }
            act.push(row);
            next += 1;
        }

        // Congruence closure: x.lhs ~ x.rhs for every state x, and merged
        // states must stay merged after acting by any generator.
        let n = states.len();
        let mut uf = UnionFind::new(n);
        let traverse = |x: usize, path: &[usize], uf: &mut UnionFind| {
            let mut cur = x;
            for &g in path {
                cur = act[uf.find(cur)][g].expect("path composable");
            }
            cur
        };
        loop {
            let mut changed = false;
            for x in 0..n {
                let tx = target_of(&states[x]);
                for e in &self.equations {
                    if e.source != tx {
                        continue;
                    }
                    let l = traverse(x, &e.lhs, &mut uf);
                    let r = traverse(x, &e.rhs, &mut uf);
                    changed |= uf.union(l, r);
                }
            }
            let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
            for x in 0..n {
                for g in 0..ngen {
                    let Some(y) = act[x][g] else { continue };
                    let key = (uf.find(x), g);
                    match seen.get(&key) {
                        Some(&z) => changed |= uf.union(y, z),
                        None => {
                            seen.insert(key, y);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        // One morphism per class, represented by its shortlex-least path.
        let mut rep_of_class: HashMap<usize, usize> = HashMap::new();
        for x in 0..n {
            let root = uf.find(x);
            let better = match rep_of_class.get(&root) {
                None => true,
                Some(&r) => shortlex_greater(&states[r].1, &states[x].1),
            };
            if better {
                rep_of_class.insert(root, x);
            }
        }
        let mut reps: Vec<usize> = rep_of_class.values().copied().collect();
        reps.sort_by(|&a, &b| {
            let ida = states[a].1.is_empty();
            let idb = states[b].1.is_empty();
            idb.cmp(&ida)
                .then(states[a].1.len().cmp(&states[b].1.len()))
                .then(states[a].1.cmp(&states[b].1))
                .then(states[a].0.cmp(&states[b].0))
        });
        let mut id_of_root: HashMap<usize, usize> = HashMap::new();
        for (i, &r) in reps.iter().enumerate() {
            id_of_root.insert(uf.find(r), i);
        }
        let morph_of = |x: usize, uf: &mut UnionFind| id_of_root[&uf.find(x)];
        let mut identities = vec![0; nobj];
        for (a, slot) in identities.iter_mut().enumerate() {
            *slot = morph_of(a, &mut uf);
        }
        let gen_ids: Vec<usize> = (0..ngen)
            .map(|g| {
                let s = act[self.arrows[g].1][g].expect("generator applies to its source");
                morph_of(s, &mut uf)
            })
            .collect();
        let mut infos = Vec::with_capacity(reps.len());
        for &r in &reps {
            let (src, path) = &states[r];
            let name = if path.is_empty() {
                format!("id_{}", self.objects[*src])
            } else {
                path.iter()
                    .rev()
                    .map(|&g| self.arrows[g].0.as_str())
                    .collect::<Vec<_>>()
                    .join(".")
            };
            infos.push(MorphismInfo {
                name,
                source: *src,
                target: target_of(&states[r]),
                path: path.iter().map(|&g| gen_ids[g]).collect(),
            });
        }
        let m = infos.len();
        let mut compose = vec![vec![None; m]; m];
        for f in 0..m {
            for g in 0..m {
                if infos[f].target != infos[g].source {
                    continue;
                }
                let rep_g = &states[reps[g]].1;
                let c = traverse(reps[f], rep_g, &mut uf);
                compose[g][f] = Some(morph_of(c, &mut uf));
            }
        }
        let mut generators = gen_ids.clone();
        generators.sort_unstable();
        generators.dedup();
        generators.retain(|&g| !identities.contains(&g));
        let relabel = |p: &[usize]| p.iter().map(|&g| gen_ids[g]).collect::<Vec<_>>();
        let equations = self
            .equations
            .iter()
            .map(|e| Equation {
                source: e.source,
                target: e.target,
                lhs: relabel(&e.lhs),
                rhs: relabel(&e.rhs),
            })
            .collect();
        let cat = FinCategory {
            objects: self.objects.clone(),
            morphisms: infos,
            identities,
            generators,
            compose,
            monos: Vec::new(),
            equations,
        };
        cat.validate()?;
        let marks = self.monos.iter().map(|&g| gen_ids[g]).collect();
        cat.with_mono_marks(marks)
    }
}

fn shortlex_greater(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) > (b.len(), b)
}

fn normal_form(path: &[usize], rules: &[(Vec<usize>, Vec<usize>)]) -> Vec<usize> {
    let mut word = path.to_vec();
    'outer: loop {
        for (lhs, rhs) in rules {
            if lhs.is_empty() || lhs.len() > word.len() {
                continue;
            }
            if let Some(pos) = (0..=word.len() - lhs.len()).find(|&i| word[i..i + lhs.len()] == lhs[..]) {
                word.splice(pos..pos + lhs.len(), rhs.iter().copied());
                continue 'outer;
            }
        }
        return word;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_are_added() {
        let c = parse_category("objects A,B; arrows f:A->B;").unwrap();
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.morphism_count(), 3);
    }

    #[test]
    fn reflexive_pair_closes_with_two_idempotents() {
        let c = parse_category("objects X,Y; arrows d:X->Y, c:X->Y, r:Y->X; eq d.r=id_Y, c.r=id_Y;").unwrap();
        // id_X, id_Y, d, c, r, r.d, r.c
        assert_eq!(c.morphism_count(), 7);
        let rd = c.morphism_index("r.d").unwrap();
        assert_eq!(c.compose(rd, rd), Some(rd));
    }

    #[test]
    fn undeclared_object_is_ill_formed() {
        let err = parse_category("objects A; arrows f:A->B;").unwrap_err();
        assert!(matches!(err, Error::IllFormed(_)));
    }

    #[test]
    fn infinite_presentation_is_rejected() {
        let err = parse_category("objects A; arrows e:A->A;").unwrap_err();
        assert!(matches!(err, Error::IllFormed(_)));
    }

    #[test]
    fn idempotent_presentation_is_finite() {
        let c = parse_category("objects A; arrows e:A->A; eq e.e=e;").unwrap();
        assert_eq!(c.morphism_count(), 2);
    }

    #[test]
    fn opposite_reverses_arrows() {
        let c = standard_shape(Shape::WalkingArrow);
        let op = c.opposite();
        let f = op.morphism_index("f").unwrap();
        assert_eq!(op.object_name(op.source(f)), "B");
        assert_eq!(op.object_name(op.target(f)), "A");
        op.validate().unwrap();
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let c = standard_shape(Shape::Span);
        let p = c.product(&standard_shape(Shape::Discrete(1)));
        assert!(p.find_isomorphism(&c).is_some());
    }

    #[test]
    fn filteredness() {
        assert!(standard_shape(Shape::Cospan).is_filtered());
        assert!(standard_shape(Shape::Discrete(1)).is_filtered());
        assert!(!standard_shape(Shape::Span).is_filtered());
        assert!(!standard_shape(Shape::ParallelPair).is_filtered());
        assert!(!standard_shape(Shape::Discrete(2)).is_filtered());
    }
}
