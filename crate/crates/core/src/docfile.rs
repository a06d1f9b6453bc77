//! Input documents for the command line: carrier objects and maps, diagram
//! instances and cocone presentations, written in the category syntax.
//!
//! ```text
//! carrier finset;
//! category V { objects z, a, b, top; arrows za: z -> a, ...; }
//! object X = 3;
//! object P = poset 3 [0 < 1, 1 < 2];
//! presheaf Q on walking_arrow { A: {a0, a1}; B: {b0}; f: b0 -> a1; }
//! map g: X -> Y = [0, 0, 1];
//! map u: Q -> R = { A: [a0, a0], B: [b0] };
//! instance D of mono_span { C = X; A = Y; B = Z; m = g; f = h; }
//! cocone K = adh(D);
//! cocone L on V { target top; leg a = at; leg b = bt; relation z = za: a, zb: b; }
//! cocone M { target Y; leg y = id_Y; }
//! ```
//!
//! `cocone ... on V` reads paths in a declared category and is checked at
//! the base level; `on D` for an instance reads shape paths and maps them
//! into the carrier; with no `on`, paths name declared maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::carrier::{
    Carrier, Diagram, FinPosetCarrier, FinSetCarrier, Function, Monotone, NatTrans, Poset, Presheaf,
    PresheafCarrier,
};
use crate::completions::{match_diagram, WeightClass};
use crate::error::{Error, Result};
use crate::fincat::{parse_category, standard_shape, CategoryBuilder, FinCategory, Parser, Shape};
use crate::postulate::{presentation_of, BasePresentation, CoconePresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CarrierSpec {
    FinSet,
    FinPoset,
    /// Presheaves on a category given by name, standard shape or file.
    Presheaf(String),
}

impl CarrierSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "finset" => Ok(CarrierSpec::FinSet),
            "finposet" => Ok(CarrierSpec::FinPoset),
            _ => match s.strip_prefix("presheaf:") {
                Some(base) if !base.is_empty() => Ok(CarrierSpec::Presheaf(base.to_string())),
                _ => Err(Error::Unsupported(format!(
                    "unknown carrier `{s}` (expected finset, finposet or presheaf:<base>)"
                ))),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub enum ObjLit {
    Size(usize),
    Poset(usize, Vec<(usize, usize)>),
    Presheaf {
        base: String,
        elements: Vec<(String, Vec<String>)>,
        actions: Vec<(String, Vec<(String, String)>)>,
    },
}

#[derive(Clone, Debug)]
pub enum MapLit {
    List(Vec<String>),
    Components(Vec<(String, Vec<String>)>),
}

#[derive(Clone, Debug)]
pub struct ObjectDecl {
    pub name: String,
    pub lit: ObjLit,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub lit: MapLit,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct InstanceDecl {
    pub name: String,
    pub shape: String,
    pub objects: Vec<(String, String)>,
    pub arrows: Vec<(String, String)>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct RelationDecl {
    pub name: String,
    pub s: Vec<String>,
    pub s_leg: String,
    pub t: Vec<String>,
    pub t_leg: String,
}

#[derive(Clone, Debug)]
pub enum CoconeBody {
    Class { class: String, instance: String },
    Explicit {
        on: Option<String>,
        target: String,
        legs: Vec<(String, Vec<String>)>,
        relations: Vec<RelationDecl>,
    },
}

#[derive(Clone, Debug)]
pub struct CoconeDecl {
    pub name: String,
    pub body: CoconeBody,
    pub line: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub carrier: Option<CarrierSpec>,
    pub categories: Vec<(String, FinCategory)>,
    pub objects: Vec<ObjectDecl>,
    pub maps: Vec<MapDecl>,
    pub instances: Vec<InstanceDecl>,
    pub cocones: Vec<CoconeDecl>,
}

fn comma_list<T>(p: &mut Parser, close: &str, mut item: impl FnMut(&mut Parser) -> Result<T>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    if p.eat_sym(close) {
        return Ok(out);
    }
    loop {
        out.push(item(p)?);
        if p.eat_sym(close) {
            return Ok(out);
        }
        p.expect_sym(",")?;
    }
}

fn expect_usize(p: &mut Parser) -> Result<usize> {
    let n = p.expect_num()?;
    usize::try_from(n).map_err(|_| p.error("number too large"))
}

fn parse_object_lit(p: &mut Parser) -> Result<ObjLit> {
    if p.eat_keyword("poset") {
        let n = expect_usize(p)?;
        let mut rel = Vec::new();
        if p.eat_sym("[") {
            rel = comma_list(p, "]", |p| {
                let a = expect_usize(p)?;
                p.expect_sym("<")?;
                Ok((a, expect_usize(p)?))
            })?;
        }
        return Ok(ObjLit::Poset(n, rel));
    }
    if p.eat_keyword("chain") {
        let n = expect_usize(p)?;
        return Ok(ObjLit::Poset(n, (1..n).map(|k| (k - 1, k)).collect()));
    }
    Ok(ObjLit::Size(expect_usize(p)?))
}

fn parse_presheaf_body(p: &mut Parser, base: String) -> Result<ObjLit> {
    p.expect_sym("{")?;
    let (mut elements, mut actions) = (Vec::new(), Vec::new());
    while !p.eat_sym("}") {
        let name = p.expect_ident()?;
        p.expect_sym(":")?;
        if p.eat_sym("{") {
            elements.push((name, comma_list(p, "}", Parser::expect_atom)?));
        } else {
            let mut pairs = Vec::new();
            loop {
                let x = p.expect_atom()?;
                p.expect_sym("->")?;
                pairs.push((x, p.expect_atom()?));
                if !p.eat_sym(",") {
                    break;
                }
            }
            actions.push((name, pairs));
        }
        p.expect_sym(";")?;
    }
    Ok(ObjLit::Presheaf {
        base,
        elements,
        actions,
    })
}

fn parse_map_lit(p: &mut Parser) -> Result<MapLit> {
    if p.eat_sym("[") {
        return Ok(MapLit::List(comma_list(p, "]", Parser::expect_atom)?));
    }
    p.expect_sym("{")?;
    let comps = comma_list(p, "}", |p| {
        let a = p.expect_ident()?;
        p.expect_sym(":")?;
        p.expect_sym("[")?;
        Ok((a, comma_list(p, "]", Parser::expect_atom)?))
    })?;
    Ok(MapLit::Components(comps))
}

fn parse_cocone_body(p: &mut Parser, on: Option<String>) -> Result<CoconeBody> {
    p.expect_sym("{")?;
    let (mut target, mut legs, mut relations) = (None, Vec::new(), Vec::new());
    while !p.eat_sym("}") {
        if p.eat_keyword("target") {
            target = Some(p.expect_ident()?);
        } else if p.eat_keyword("leg") {
            let name = p.expect_ident()?;
            p.expect_sym("=")?;
            legs.push((name, p.path()?));
        } else if p.eat_keyword("relation") {
            let name = p.expect_ident()?;
            p.expect_sym("=")?;
            let s = p.path()?;
            p.expect_sym(":")?;
            let s_leg = p.expect_ident()?;
            p.expect_sym(",")?;
            let t = p.path()?;
            p.expect_sym(":")?;
            let t_leg = p.expect_ident()?;
            relations.push(RelationDecl { name, s, s_leg, t, t_leg });
        } else {
            return Err(p.error("expected 'target', 'leg' or 'relation'"));
        }
        p.expect_sym(";")?;
    }
    let target = target.ok_or_else(|| p.error("cocone has no target"))?;
    Ok(CoconeBody::Explicit {
        on,
        target,
        legs,
        relations,
    })
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let mut p = Parser::new(text)?;
        let mut doc = Document::default();
        while !p.at_end() {
            let line = p.line();
            if p.eat_keyword("carrier") {
                let mut spec = p.expect_ident()?;
                if p.eat_sym(":") {
                    spec = format!("{spec}:{}", p.expect_ident()?);
                }
                doc.carrier = Some(CarrierSpec::parse(&spec).map_err(|e| Error::parse(line, e.to_string()))?);
                p.expect_sym(";")?;
            } else if p.eat_keyword("category") {
                let name = p.expect_ident()?;
                p.expect_sym("{")?;
                let mut b = CategoryBuilder::new();
                while !p.eat_sym("}") {
                    if !p.category_statement(&mut b)? {
                        return Err(p.error("expected 'objects', 'arrows', 'eq' or 'mono'"));
                    }
                }
                doc.categories.push((name, b.build()?));
            } else if p.eat_keyword("object") {
                let name = p.expect_ident()?;
                p.expect_sym("=")?;
                let lit = parse_object_lit(&mut p)?;
                p.expect_sym(";")?;
                doc.objects.push(ObjectDecl { name, lit, line });
            } else if p.eat_keyword("presheaf") {
                let name = p.expect_ident()?;
                if !p.eat_keyword("on") {
                    return Err(p.error("expected 'on'"));
                }
                let base = p.expect_ident()?;
                let lit = parse_presheaf_body(&mut p, base)?;
                doc.objects.push(ObjectDecl { name, lit, line });
            } else if p.eat_keyword("map") {
                let name = p.expect_ident()?;
                p.expect_sym(":")?;
                let source = p.expect_ident()?;
                p.expect_sym("->")?;
                let target = p.expect_ident()?;
                p.expect_sym("=")?;
                let lit = parse_map_lit(&mut p)?;
                p.expect_sym(";")?;
                doc.maps.push(MapDecl {
                    name,
                    source,
                    target,
                    lit,
                    line,
                });
            } else if p.eat_keyword("instance") {
                let name = p.expect_ident()?;
                if !p.eat_keyword("of") {
                    return Err(p.error("expected 'of'"));
                }
                let shape = p.expect_ident()?;
                p.expect_sym("{")?;
                let mut assigns = Vec::new();
                while !p.eat_sym("}") {
                    let k = p.expect_ident()?;
                    p.expect_sym("=")?;
                    assigns.push((k, p.expect_ident()?));
                    p.expect_sym(";")?;
                }
                doc.instances.push(InstanceDecl {
                    name,
                    shape,
                    objects: assigns.clone(),
                    arrows: assigns,
                    line,
                });
            } else if p.eat_keyword("cocone") {
                let name = p.expect_ident()?;
                let body = if p.eat_sym("=") {
                    let class = p.expect_ident()?;
                    let class = if p.eat_sym(":") {
                        format!("{class}:{}", p.expect_ident()?)
                    } else {
                        class
                    };
                    p.expect_sym("(")?;
                    let instance = p.expect_ident()?;
                    p.expect_sym(")")?;
                    p.expect_sym(";")?;
                    CoconeBody::Class { class, instance }
                } else {
                    let on = if p.eat_keyword("on") { Some(p.expect_ident()?) } else { None };
                    parse_cocone_body(&mut p, on)?
                };
                doc.cocones.push(CoconeDecl { name, body, line });
            } else {
                return Err(p.error(
                    "expected 'carrier', 'category', 'object', 'presheaf', 'map', 'instance' or 'cocone'",
                ));
            }
        }
        Ok(doc)
    }

    pub fn category(&self, name: &str) -> Option<&FinCategory> {
        self.categories.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    fn object_decl(&self, name: &str) -> Option<&ObjectDecl> {
        self.objects.iter().find(|o| o.name == name)
    }

    /// A declared category, a standard shape, or a file holding a category.
    pub fn resolve_category(&self, name: &str) -> Result<FinCategory> {
        if let Some(c) = self.category(name) {
            return Ok(c.clone());
        }
        resolve_category(name)
    }

    /// The carrier named in the document, or the presheaf carrier implied by
    /// its presheaf declarations.
    pub fn implied_carrier(&self) -> Option<CarrierSpec> {
        self.carrier.clone().or_else(|| {
            self.objects.iter().find_map(|o| match &o.lit {
                ObjLit::Presheaf { base, .. } => Some(CarrierSpec::Presheaf(base.clone())),
                _ => None,
            })
        })
    }
}

/// A standard shape name or a path to a category file.
pub fn resolve_category(name: &str) -> Result<FinCategory> {
    if let Some(s) = Shape::from_name(name) {
        return Ok(standard_shape(s));
    }
    let text = std::fs::read_to_string(name)
        .map_err(|_| Error::Unsupported(format!("`{name}` is neither a known shape nor a readable file")))?;
    match parse_category(&text) {
        Ok(c) => Ok(c),
        Err(e) => {
            let doc = Document::parse(&text).map_err(|_| e)?;
            doc.categories
                .into_iter()
                .next()
                .map(|(_, c)| c)
                .ok_or_else(|| Error::IllFormed(format!("`{name}` declares no category")))
        }
    }
}

fn index_of(names: Option<&[String]>, atom: &str, bound: usize, line: usize) -> Result<usize> {
    let idx = names
        .and_then(|ns| ns.iter().position(|n| n == atom))
        .or_else(|| atom.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("unknown element `{atom}`")))?;
    if idx >= bound {
        return Err(Error::parse(line, format!("element `{atom}` out of range")));
    }
    Ok(idx)
}

fn list_map(lit: &MapLit, line: usize) -> Result<Vec<usize>> {
    match lit {
        MapLit::List(xs) => xs
            .iter()
            .map(|x| x.parse().map_err(|_| Error::parse(line, format!("expected a number, found `{x}`"))))
            .collect(),
        MapLit::Components(_) => Err(Error::parse(line, "this carrier takes maps as `[...]` lists")),
    }
}

/// Building carrier values from declarations.
pub trait Realize: Carrier {
    fn realize_object(&self, doc: &Document, decl: &ObjectDecl) -> Result<Self::Obj>;
    fn realize_map(&self, src: (&ObjectDecl, &Self::Obj), tgt: (&ObjectDecl, &Self::Obj), decl: &MapDecl) -> Result<Self::Mor>;
}

impl Realize for FinSetCarrier {
    fn realize_object(&self, _: &Document, decl: &ObjectDecl) -> Result<usize> {
        match decl.lit {
            ObjLit::Size(n) => Ok(n),
            _ => Err(Error::parse(decl.line, "finite sets are declared as `object X = n;`")),
        }
    }

    fn realize_map(&self, src: (&ObjectDecl, &usize), tgt: (&ObjectDecl, &usize), decl: &MapDecl) -> Result<Function> {
        Function::new(*src.1, *tgt.1, list_map(&decl.lit, decl.line)?)
    }
}

impl Realize for FinPosetCarrier {
    fn realize_object(&self, _: &Document, decl: &ObjectDecl) -> Result<Poset> {
        match &decl.lit {
            ObjLit::Size(n) => Ok(Poset::discrete(*n)),
            ObjLit::Poset(n, rel) => Poset::from_relations(*n, rel),
            ObjLit::Presheaf { .. } => Err(Error::parse(decl.line, "presheaf in a poset document")),
        }
    }

    fn realize_map(&self, src: (&ObjectDecl, &Poset), tgt: (&ObjectDecl, &Poset), decl: &MapDecl) -> Result<Monotone> {
        Monotone::new(src.1.clone(), tgt.1.clone(), list_map(&decl.lit, decl.line)?)
    }
}

fn element_names(decl: &ObjectDecl, base: &FinCategory) -> Vec<Option<Vec<String>>> {
    match &decl.lit {
        ObjLit::Presheaf { elements, .. } => (0..base.object_count())
            .map(|a| {
                elements
                    .iter()
                    .find(|(n, _)| n == base.object_name(a))
                    .map(|(_, es)| es.clone())
            })
            .collect(),
        _ => vec![None; base.object_count()],
    }
}

impl Realize for PresheafCarrier {
    fn realize_object(&self, doc: &Document, decl: &ObjectDecl) -> Result<Presheaf> {
        let base = self.base();
        match &decl.lit {
            ObjLit::Presheaf {
                base: bname,
                elements,
                actions,
            } => {
                if &doc.resolve_category(bname)? != base {
                    return Err(Error::parse(decl.line, format!("presheaf on `{bname}` outside the carrier's base")));
                }
                for (a, _) in elements {
                    if base.object_index(a).is_none() {
                        return Err(Error::parse(decl.line, format!("unknown object `{a}`")));
                    }
                }
                let names = element_names(decl, base);
                let sizes: Vec<usize> = names.iter().map(|n| n.as_ref().map_or(0, Vec::len)).collect();
                let mut gens = BTreeMap::new();
                for (g, pairs) in actions {
                    let gi = base
                        .morphism_index(g)
                        .filter(|i| base.generators().contains(i))
                        .ok_or_else(|| Error::parse(decl.line, format!("unknown generator `{g}`")))?;
                    let (src, tgt) = (base.source(gi), base.target(gi));
                    let mut act = vec![usize::MAX; sizes[tgt]];
                    for (x, y) in pairs {
                        let xi = index_of(names[tgt].as_deref(), x, sizes[tgt], decl.line)?;
                        act[xi] = index_of(names[src].as_deref(), y, sizes[src], decl.line)?;
                    }
                    if act.contains(&usize::MAX) {
                        return Err(Error::parse(decl.line, format!("action of `{g}` is not total")));
                    }
                    gens.insert(gi, act);
                }
                for &g in base.generators() {
                    if !gens.contains_key(&g) {
                        if sizes[base.target(g)] == 0 {
                            gens.insert(g, Vec::new());
                        } else {
                            return Err(Error::parse(
                                decl.line,
                                format!("missing action of `{}`", base.morphism(g).name),
                            ));
                        }
                    }
                }
                self.presheaf(sizes, &gens)
            }
            _ => Err(Error::parse(decl.line, "presheaf carrier objects are declared with `presheaf P on C {...}`")),
        }
    }

    fn realize_map(&self, src: (&ObjectDecl, &Presheaf), tgt: (&ObjectDecl, &Presheaf), decl: &MapDecl) -> Result<NatTrans> {
        let base = self.base();
        let MapLit::Components(comps) = &decl.lit else {
            return Err(Error::parse(decl.line, "presheaf maps are written `{ A: [...], ... }`"));
        };
        let tnames = element_names(tgt.0, base);
        let mut components = vec![Vec::new(); base.object_count()];
        for (a, xs) in comps {
            let ai = base
                .object_index(a)
                .ok_or_else(|| Error::parse(decl.line, format!("unknown object `{a}`")))?;
            components[ai] = xs
                .iter()
                .map(|x| index_of(tnames[ai].as_deref(), x, tgt.1.size(ai), decl.line))
                .collect::<Result<_>>()?;
        }
        self.nat(src.1.clone(), tgt.1.clone(), components)
    }
}

/// Declarations realized in a carrier.
#[derive(Clone, Debug)]
pub struct Env<C: Carrier> {
    pub objects: BTreeMap<String, C::Obj>,
    pub maps: BTreeMap<String, C::Mor>,
    pub instances: BTreeMap<String, Diagram<C>>,
}

pub fn realize<C: Realize>(c: &C, doc: &Document) -> Result<Env<C>> {
    let mut objects = BTreeMap::new();
    for o in &doc.objects {
        if objects.insert(o.name.clone(), c.realize_object(doc, o)?).is_some() {
            return Err(Error::parse(o.line, format!("object `{}` declared twice", o.name)));
        }
    }
    let mut maps = BTreeMap::new();
    for m in &doc.maps {
        let lookup = |n: &str| -> Result<(&ObjectDecl, &C::Obj)> {
            Ok((
                doc.object_decl(n)
                    .ok_or_else(|| Error::parse(m.line, format!("unknown object `{n}`")))?,
                &objects[n],
            ))
        };
        let f = c.realize_map(lookup(&m.source)?, lookup(&m.target)?, m)?;
        if maps.insert(m.name.clone(), f).is_some() {
            return Err(Error::parse(m.line, format!("map `{}` declared twice", m.name)));
        }
    }
    let mut instances = BTreeMap::new();
    for inst in &doc.instances {
        let shape = Arc::new(doc.resolve_category(&inst.shape)?);
        let mut objs = Vec::new();
        for a in 0..shape.object_count() {
            let name = shape.object_name(a);
            let v = inst
                .objects
                .iter()
                .find(|(k, _)| k == name)
                .ok_or_else(|| Error::parse(inst.line, format!("instance `{}` leaves `{name}` unassigned", inst.name)))?;
            objs.push(
                objects
                    .get(&v.1)
                    .cloned()
                    .ok_or_else(|| Error::parse(inst.line, format!("unknown object `{}`", v.1)))?,
            );
        }
        let mut gens = BTreeMap::new();
        for &g in shape.generators() {
            let name = &shape.morphism(g).name;
            let v = inst
                .arrows
                .iter()
                .find(|(k, _)| k == name)
                .ok_or_else(|| Error::parse(inst.line, format!("instance `{}` leaves `{name}` unassigned", inst.name)))?;
            gens.insert(
                g,
                maps.get(&v.1)
                    .cloned()
                    .ok_or_else(|| Error::parse(inst.line, format!("unknown map `{}`", v.1)))?,
            );
        }
        for (k, _) in &inst.objects {
            if shape.object_index(k).is_none() && !shape.generators().iter().any(|&g| &shape.morphism(g).name == k) {
                return Err(Error::parse(inst.line, format!("`{k}` is not part of the shape")));
            }
        }
        instances.insert(inst.name.clone(), Diagram::new(c, shape, objs, &gens)?);
    }
    Ok(Env {
        objects,
        maps,
        instances,
    })
}

/// `g.f` is `g` after `f`.
pub fn resolve_path(cat: &FinCategory, path: &[String]) -> Result<usize> {
    let mut acc: Option<usize> = None;
    for name in path.iter().rev() {
        let f = cat
            .morphism_index(name)
            .ok_or_else(|| Error::InvalidMorphism(format!("unknown arrow `{name}`")))?;
        acc = Some(match acc {
            None => f,
            Some(a) => cat
                .compose(f, a)
                .ok_or_else(|| Error::InvalidMorphism(format!("path {} does not compose", path.join("."))))?,
        });
    }
    acc.ok_or_else(|| Error::InvalidMorphism("empty path".into()))
}

/// A cocone ready to check.
#[derive(Clone, Debug)]
pub enum Realized<C: Carrier> {
    Carrier {
        presentation: CoconePresentation<C>,
        /// `(m, f)` when the cocone is the pushout of a mono-span.
        adhesive: Option<(C::Mor, C::Mor)>,
    },
    Base(BasePresentation),
}

fn leg_index(legs: &[(String, Vec<String>)], name: &str) -> Result<usize> {
    legs.iter()
        .position(|(n, _)| n == name)
        .ok_or_else(|| Error::IllFormed(format!("unknown leg `{name}`")))
}

pub fn realize_cocone<C: Realize>(c: &C, doc: &Document, env: &Env<C>, decl: &CoconeDecl) -> Result<Realized<C>> {
    match &decl.body {
        CoconeBody::Class { class, instance } => {
            let w = WeightClass::from_name(class)
                .ok_or_else(|| Error::Unsupported(format!("unknown weight class `{class}`")))?;
            let d = env
                .instances
                .get(instance)
                .ok_or_else(|| Error::parse(decl.line, format!("unknown instance `{instance}`")))?;
            let presentation = presentation_of(c, &w, d)?;
            let adhesive = if w == WeightClass::Adh {
                let m = match_diagram(c, &w, d)?;
                Some((m.mors[0].clone(), m.mors[1].clone()))
            } else {
                None
            };
            Ok(Realized::Carrier {
                presentation,
                adhesive,
            })
        }
        CoconeBody::Explicit {
            on,
            target,
            legs,
            relations,
        } => {
            let sigma = relations.iter().map(|r| leg_index(legs, &r.s_leg)).collect::<Result<Vec<_>>>()?;
            let tau = relations.iter().map(|r| leg_index(legs, &r.t_leg)).collect::<Result<Vec<_>>>()?;
            let i_names = relations.iter().map(|r| r.name.clone()).collect();
            let j_names = legs.iter().map(|(n, _)| n.clone()).collect();
            if let Some(cat) = on.as_deref().and_then(|n| doc.category(n)) {
                let cat = Arc::new(cat.clone());
                let path = |p: &[String]| resolve_path(&cat, p);
                let t = cat
                    .object_index(target)
                    .ok_or_else(|| Error::IllFormed(format!("unknown object `{target}`")))?;
                return Ok(Realized::Base(BasePresentation::new(
                    cat.clone(),
                    t,
                    sigma,
                    tau,
                    relations.iter().map(|r| path(&r.s)).collect::<Result<_>>()?,
                    relations.iter().map(|r| path(&r.t)).collect::<Result<_>>()?,
                    legs.iter().map(|(_, p)| path(p)).collect::<Result<_>>()?,
                )?));
            }
            let (mor, tgt): (Box<dyn Fn(&[String]) -> Result<C::Mor> + '_>, C::Obj) = match on {
                Some(inst) => {
                    let d = env
                        .instances
                        .get(inst)
                        .ok_or_else(|| Error::parse(decl.line, format!("unknown category or instance `{inst}`")))?;
                    let t = d
                        .shape()
                        .object_index(target)
                        .ok_or_else(|| Error::IllFormed(format!("unknown object `{target}`")))?;
                    (
                        Box::new(move |p: &[String]| Ok(d.morphism(resolve_path(d.shape(), p)?).clone())),
                        d.object(t).clone(),
                    )
                }
                None => {
                    let t = env
                        .objects
                        .get(target)
                        .ok_or_else(|| Error::IllFormed(format!("unknown object `{target}`")))?;
                    (Box::new(|p: &[String]| carrier_path(c, env, p)), t.clone())
                }
            };
            let presentation = CoconePresentation::new(
                c,
                i_names,
                j_names,
                sigma,
                tau,
                relations.iter().map(|r| mor(&r.s)).collect::<Result<_>>()?,
                relations.iter().map(|r| mor(&r.t)).collect::<Result<_>>()?,
                legs.iter().map(|(_, p)| mor(p)).collect::<Result<_>>()?,
                tgt,
            )?;
            Ok(Realized::Carrier {
                presentation,
                adhesive: None,
            })
        }
    }
}

/// A path of declared maps; `id_X` names the identity of object `X`.
fn carrier_path<C: Carrier>(c: &C, env: &Env<C>, path: &[String]) -> Result<C::Mor> {
    let one = |name: &String| -> Result<C::Mor> {
        if let Some(m) = env.maps.get(name) {
            return Ok(m.clone());
        }
        if let Some(x) = name.strip_prefix("id_").and_then(|o| env.objects.get(o)) {
            return Ok(c.identity(x));
        }
        Err(Error::InvalidMorphism(format!("unknown map `{name}`")))
    };
    let mut acc: Option<C::Mor> = None;
    for name in path.iter().rev() {
        let f = one(name)?;
        acc = Some(match acc {
            None => f,
            Some(a) => c.compose(&f, &a)?,
        });
    }
    acc.ok_or_else(|| Error::InvalidMorphism("empty path".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactness::Status;
    use crate::postulate::is_postulated;

    const ADH: &str = "
        carrier finset;
        object C = 1; object A = 2; object B = 2;
        map m: C -> A = [1];
        map f: C -> B = [0];
        instance D of mono_span { C = C; A = A; B = B; m = m; f = f; }
        cocone K = adh(D);
    ";

    #[test]
    fn parses_and_realizes_adhesive_document() {
        let doc = Document::parse(ADH).unwrap();
        assert_eq!(doc.implied_carrier(), Some(CarrierSpec::FinSet));
        let env = realize(&FinSetCarrier, &doc).unwrap();
        let Realized::Carrier { presentation, adhesive } =
            realize_cocone(&FinSetCarrier, &doc, &env, &doc.cocones[0]).unwrap()
        else {
            panic!("expected a carrier cocone")
        };
        assert!(adhesive.is_some());
        assert_eq!(presentation.target, 3);
        assert_eq!(is_postulated(&FinSetCarrier, &presentation).unwrap().status, Status::Holds);
    }

    #[test]
    fn base_cocone_and_presheaf() {
        let doc = Document::parse(
            "category V { objects z, a, b, top; arrows za: z -> a, zb: z -> b, at: a -> top, bt: b -> top; eq at.za = bt.zb; }
             cocone L on V { target top; leg a = at; leg b = bt; relation z = za: a, zb: b; }
             presheaf P on walking_arrow { A: {a0, a1}; B: {b0}; f: b0 -> a1; }",
        )
        .unwrap();
        assert_eq!(doc.implied_carrier(), Some(CarrierSpec::Presheaf("walking_arrow".into())));
        let c = PresheafCarrier::new("p", standard_shape(Shape::WalkingArrow));
        let env = realize(&c, &doc).unwrap();
        assert_eq!(env.objects["P"].sizes(), &[2, 1]);
        let Realized::Base(bp) = realize_cocone(&c, &doc, &env, &doc.cocones[0]).unwrap() else {
            panic!("expected a base cocone")
        };
        assert!(bp.verdict().unwrap().consistent());
    }

    #[test]
    fn explicit_cocone_over_maps() {
        let doc = Document::parse("object Y = 2; cocone M { target Y; leg y = id_Y; }").unwrap();
        let env = realize(&FinSetCarrier, &doc).unwrap();
        let Realized::Carrier { presentation, .. } = realize_cocone(&FinSetCarrier, &doc, &env, &doc.cocones[0]).unwrap()
        else {
            panic!()
        };
        assert_eq!(is_postulated(&FinSetCarrier, &presentation).unwrap().status, Status::Holds);
    }

    #[test]
    fn errors_carry_lines() {
        let err = Document::parse("object X = 2;\nmap f X -> X = [0, 1];").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let doc = Document::parse("object X = 2;\nmap f: X -> X = [0, 5];").unwrap();
        assert!(realize(&FinSetCarrier, &doc).is_err());
        assert!(CarrierSpec::parse("sets").is_err());
    }

    #[test]
    fn cocone_condition_is_validated() {
        let doc = Document::parse(
            "object X = 1; object Y = 2; map p: X -> Y = [0]; map q: X -> Y = [1];
             cocone K { target Y; leg y = id_Y; relation x = p: y, q: y; }",
        )
        .unwrap();
        let env = realize(&FinSetCarrier, &doc).unwrap();
        assert!(matches!(
            realize_cocone(&FinSetCarrier, &doc, &env, &doc.cocones[0]),
            Err(Error::InvalidMorphism(_))
        ));
    }
}
