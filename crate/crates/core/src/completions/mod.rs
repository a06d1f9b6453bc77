//! Weight classes for lex colimits, their colimit recipes, the finite
//! coproduct completion `Fam_f`, and a budgeted closure of representables
//! under finite limits and class colimits.
//!
//! A class is given operationally: a list of sketch shapes, each with a
//! recipe that computes the weighted colimit of a diagram of that shape.

mod closure;
mod famf;

pub use closure::{
    evaluate, in_saturation, phi_closure, ClosureConfig, ClosureElement, ClosureSet,
    Saturation, Term,
};
pub use famf::{famf_build, FamCategory, FamMorphism, FamObject};

use std::sync::Arc;

use crate::carrier::{
    coequalizer, coproduct, initial, is_mono, kernel_pair, pairing, product, pullback, pushout, Carrier, Diagram,
};
use crate::error::{Error, Result};
use crate::exactness::{default_filtered_shape, double_kernel_colimit};
use crate::fincat::{standard_shape, FinCategory, FinFunctor, Shape};
use crate::relcalc::{chain_stabilize, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightClass {
    Reg,
    Ex,
    Lext,
    Union,
    Coh,
    CohPrime,
    Adh,
    Rc,
    Filt(Arc<FinCategory>),
}

/// One sketch of a class together with the way its colimit is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recipe {
    /// coequalizer of the kernel pair of `f: A -> B`
    Image,
    /// coequalizer of an equivalence relation `d, c: R -> X`
    Quotient,
    /// finite coproduct of a discrete diagram
    Coproduct,
    Initial,
    /// pushout over the intersection of two subobjects
    Union,
    /// colimit of the kernel pairs and mixed pullback of a cospan
    DoubleKernel,
    /// pushout of a span with a monic leg
    Pushout,
    /// image, then relation chain, then quotient
    ReflexiveCoequalizer,
    /// colimit over the class shape
    Filtered,
}

impl Recipe {
    pub fn name(self) -> &'static str {
        match self {
            Recipe::Image => "image",
            Recipe::Quotient => "quotient",
            Recipe::Coproduct => "coproduct",
            Recipe::Initial => "initial",
            Recipe::Union => "union",
            Recipe::DoubleKernel => "double_kernel",
            Recipe::Pushout => "pushout",
            Recipe::ReflexiveCoequalizer => "reflexive_coequalizer",
            Recipe::Filtered => "filtered",
        }
    }

    /// The standard sketch, with the object and generator names the recipe
    /// reads positions from. `Coproduct` and `Filtered` read the diagram
    /// as given.
    fn layout(self) -> Option<(Shape, &'static [&'static str], &'static [&'static str])> {
        Some(match self {
            Recipe::Image => (Shape::WalkingArrow, &["A", "B"], &["f"]),
            Recipe::Quotient => (Shape::ParallelPair, &["X", "Y"], &["f", "g"]),
            Recipe::Union => (Shape::MonoCospan, &["A", "B", "C"], &["m", "g"]),
            Recipe::DoubleKernel => (Shape::Cospan, &["A", "B", "C"], &["f", "g"]),
            Recipe::Pushout => (Shape::MonoSpan, &["C", "A", "B"], &["m", "f"]),
            Recipe::ReflexiveCoequalizer => (Shape::ReflexivePair, &["X", "Y"], &["d", "c", "r"]),
            Recipe::Initial => (Shape::Discrete(0), &[], &[]),
            Recipe::Coproduct | Recipe::Filtered => return None,
        })
    }

    /// The sketch used when this recipe is instantiated by the closure engine.
    pub fn sketch(self, class: &WeightClass) -> FinCategory {
        match self {
            Recipe::Coproduct => standard_shape(Shape::Discrete(2)),
            Recipe::Filtered => match class {
                WeightClass::Filt(s) => (**s).clone(),
                _ => default_filtered_shape(),
            },
            r => standard_shape(r.layout().expect("fixed layout").0),
        }
    }
}

impl WeightClass {
    pub fn name(&self) -> &'static str {
        match self {
            WeightClass::Reg => "reg",
            WeightClass::Ex => "ex",
            WeightClass::Lext => "lext",
            WeightClass::Union => "union",
            WeightClass::Coh => "coh",
            WeightClass::CohPrime => "coh_prime",
            WeightClass::Adh => "adh",
            WeightClass::Rc => "rc",
            WeightClass::Filt(_) => "filt",
        }
    }

    /// `filt` alone uses the default cospan shape; `filt:<shape>` names a
    /// standard shape.
    pub fn from_name(s: &str) -> Option<WeightClass> {
        Some(match s {
            "reg" => WeightClass::Reg,
            "ex" => WeightClass::Ex,
            "lext" => WeightClass::Lext,
            "union" => WeightClass::Union,
            "coh" => WeightClass::Coh,
            "coh_prime" => WeightClass::CohPrime,
            "adh" => WeightClass::Adh,
            "rc" => WeightClass::Rc,
            "filt" => WeightClass::Filt(Arc::new(default_filtered_shape())),
            other => {
                let shape = Shape::from_name(other.strip_prefix("filt:")?)?;
                let cat = standard_shape(shape);
                if !cat.is_filtered() {
                    return None;
                }
                WeightClass::Filt(Arc::new(cat))
            }
        })
    }

    pub fn all_basic() -> Vec<WeightClass> {
        ["reg", "ex", "lext", "union", "coh", "coh_prime", "adh", "rc", "filt"]
            .iter()
            .map(|n| WeightClass::from_name(n).expect("known class"))
            .collect()
    }

    pub fn recipes(&self) -> Vec<Recipe> {
        match self {
            WeightClass::Reg => vec![Recipe::Image],
            WeightClass::Ex => vec![Recipe::Quotient],
            WeightClass::Lext => vec![Recipe::Coproduct],
            WeightClass::Union => vec![Recipe::Initial, Recipe::Union],
            WeightClass::Coh => vec![Recipe::Image, Recipe::Initial, Recipe::Union],
            WeightClass::CohPrime => vec![Recipe::Initial, Recipe::DoubleKernel],
            WeightClass::Adh => vec![Recipe::Pushout],
            WeightClass::Rc => vec![Recipe::ReflexiveCoequalizer],
            WeightClass::Filt(_) => vec![Recipe::Filtered],
        }
    }
}

/// A diagram read off along a recipe's layout.
#[derive(Clone, Debug)]
pub struct Matched<C: Carrier> {
    pub recipe: Recipe,
    /// Diagram object names in layout order.
    pub names: Vec<String>,
    pub objs: Vec<C::Obj>,
    pub mors: Vec<C::Mor>,
}

fn is_discrete(shape: &FinCategory) -> bool {
    shape.morphism_count() == shape.object_count()
}

fn read_layout<C: Carrier>(d: &Diagram<C>, sketch: &FinCategory, iso: &FinFunctor, objs: &[&str], mors: &[&str]) -> Matched<C> {
    let shape = d.shape();
    let obj_pos: Vec<usize> = objs
        .iter()
        .map(|n| iso.object(sketch.object_index(n).expect("layout object")))
        .collect();
    Matched {
        recipe: Recipe::Filtered,
        names: obj_pos.iter().map(|&a| shape.object_name(a).to_string()).collect(),
        objs: obj_pos.iter().map(|&a| d.object(a).clone()).collect(),
        mors: mors
            .iter()
            .map(|n| d.morphism(iso.morphism(sketch.morphism_index(n).expect("layout arrow"))).clone())
            .collect(),
    }
}

pub(crate) fn try_match<C: Carrier>(c: &C, w: &WeightClass, recipe: Recipe, d: &Diagram<C>) -> Result<Option<Matched<C>>> {
    let shape = d.shape();
    let whole = |recipe| Matched {
        recipe,
        names: shape.objects().to_vec(),
        objs: d.objects().to_vec(),
        mors: Vec::new(),
    };
    match recipe {
        Recipe::Coproduct => return Ok(is_discrete(shape).then(|| whole(recipe))),
        Recipe::Filtered => {
            let WeightClass::Filt(s) = w else { return Ok(None) };
            return Ok(s.find_isomorphism(shape).map(|_| whole(recipe)));
        }
        _ => {}
    }
    let (kind, objs, mors) = recipe.layout().expect("fixed layout");
    let sketch = standard_shape(kind);
    let Some(iso) = sketch.find_isomorphism(shape) else {
        return Ok(None);
    };
    let mut m = read_layout(d, &sketch, &iso, objs, mors);
    m.recipe = recipe;
    match recipe {
        Recipe::Quotient => {
            let rel = Relation::from_span(c, &m.objs[1], &m.mors[0], &m.mors[1])?;
            let square = product(c, &[m.objs[1].clone(), m.objs[1].clone()])?;
            let pair = pairing(c, &square, &[m.mors[0].clone(), m.mors[1].clone()])?;
            if !is_mono(c, &pair)? || !rel.is_equivalence(c)? {
                return Err(Error::InvalidMorphism("pair is not an equivalence relation".into()));
            }
        }
        Recipe::Union => {
            for (k, name) in ["first", "second"].iter().enumerate() {
                if !is_mono(c, &m.mors[k])? {
                    return Err(Error::MonoViolation(format!("{name} inclusion of a union is not monic")));
                }
            }
        }
        Recipe::Pushout => {
            // The span shape has a swap symmetry; put the monic leg first.
            if !is_mono(c, &m.mors[0])? {
                if !is_mono(c, &m.mors[1])? {
                    return Err(Error::MonoViolation("neither leg of the span is monic".into()));
                }
                m.mors.swap(0, 1);
                m.objs.swap(1, 2);
                m.names.swap(1, 2);
            }
        }
        _ => {}
    }
    Ok(Some(m))
}

/// Reads `d` along the first sketch of `w` it instantiates.
pub fn match_diagram<C: Carrier>(c: &C, w: &WeightClass, d: &Diagram<C>) -> Result<Matched<C>> {
    for recipe in w.recipes() {
        if let Some(m) = try_match(c, w, recipe, d)? {
            return Ok(m);
        }
    }
    Err(Error::ShapeMismatch(format!(
        "diagram shape does not instantiate a sketch of {}",
        w.name()
    )))
}

#[derive(Clone, Debug)]
pub struct WeightedColimit<C: Carrier> {
    pub recipe: Recipe,
    pub object: C::Obj,
    /// Colimit legs keyed by diagram object name.
    pub legs: Vec<(String, C::Mor)>,
    /// For reflexive coequalizers: whether the chain quotient has the same
    /// kernel as the direct coequalizer.
    pub cross_check: Option<bool>,
}

fn same_kernel<C: Carrier>(c: &C, p: &C::Mor, q: &C::Mor) -> bool {
    let (gp, gq) = (c.graded(p), c.graded(q));
    gp.iter().zip(&gq).all(|(a, b)| {
        (0..a.len()).all(|x| (0..a.len()).all(|y| (a[x] == a[y]) == (b[x] == b[y])))
    })
}

/// Runs the recipe on an already matched diagram.
pub fn run_recipe<C: Carrier>(c: &C, m: &Matched<C>, d: &Diagram<C>) -> Result<WeightedColimit<C>> {
    let n = |k: usize| m.names[k].clone();
    let mut cross_check = None;
    let (object, legs) = match m.recipe {
        Recipe::Image => {
            let (_, p1, p2) = kernel_pair(c, &m.mors[0])?;
            let q = coequalizer(c, &p1, &p2)?;
            (q.apex, vec![(n(0), q.legs[1].clone())])
        }
        Recipe::Quotient => {
            let q = coequalizer(c, &m.mors[0], &m.mors[1])?;
            (q.apex, vec![(n(1), q.legs[1].clone())])
        }
        Recipe::Coproduct => {
            let s = coproduct(c, &m.objs)?;
            (s.apex, m.names.iter().cloned().zip(s.legs).collect())
        }
        Recipe::Initial => (initial(c)?, Vec::new()),
        Recipe::Union => {
            let meet = pullback(c, &m.mors[0], &m.mors[1])?;
            let po = pushout(c, &meet.legs[0], &meet.legs[1])?;
            (po.apex, vec![(n(0), po.legs[1].clone()), (n(1), po.legs[2].clone())])
        }
        Recipe::DoubleKernel => {
            let k = double_kernel_colimit(c, &m.mors[0], &m.mors[1])?;
            (k.apex, vec![(n(0), k.legs[0].clone()), (n(1), k.legs[1].clone())])
        }
        Recipe::Pushout => {
            let po = pushout(c, &m.mors[0], &m.mors[1])?;
            (po.apex, (0..3).map(|k| (n(k), po.legs[k].clone())).collect())
        }
        Recipe::ReflexiveCoequalizer => {
            let rel = Relation::from_span(c, &m.objs[1], &m.mors[0], &m.mors[1])?;
            let (stable, _) = chain_stabilize(c, &rel)?;
            let q = coequalizer(c, &stable.d, &stable.c)?;
            let direct = coequalizer(c, &m.mors[0], &m.mors[1])?;
            cross_check = Some(same_kernel(c, &q.legs[1], &direct.legs[1]));
            (q.apex, vec![(n(1), q.legs[1].clone())])
        }
        Recipe::Filtered => {
            let k = c.colimit(&d.graph())?;
            (k.apex, m.names.iter().cloned().zip(k.legs).collect())
        }
    };
    Ok(WeightedColimit {
        recipe: m.recipe,
        object,
        legs,
        cross_check,
    })
}

/// The colimit of `d` weighted by the class `w`.
pub fn weighted_colimit<C: Carrier>(c: &C, w: &WeightClass, d: &Diagram<C>) -> Result<WeightedColimit<C>> {
    let m = match_diagram(c, w, d)?;
    run_recipe(c, &m, d)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::carrier::{FinSetCarrier, Function};

    fn f(s: usize, t: usize, map: &[usize]) -> Function {
        Function::new(s, t, map.to_vec()).unwrap()
    }

    fn diagram(shape: Shape, objs: Vec<usize>, gens: &[(&str, Function)]) -> Result<Diagram<FinSetCarrier>> {
        let cat = Arc::new(standard_shape(shape));
        let g: BTreeMap<usize, Function> = gens
            .iter()
            .map(|(n, m)| (cat.morphism_index(n).unwrap(), m.clone()))
            .collect();
        Diagram::new(&FinSetCarrier, cat, objs, &g)
    }

    #[test]
    fn reg_gives_image() {
        let d = diagram(Shape::WalkingArrow, vec![3, 2], &[("f", f(3, 2, &[0, 0, 1]))]).unwrap();
        let r = weighted_colimit(&FinSetCarrier, &WeightClass::Reg, &d).unwrap();
        assert_eq!(r.object, 2);
    }

    #[test]
    fn lext_is_disjoint_union() {
        let d = diagram(Shape::Discrete(2), vec![2, 3], &[]).unwrap();
        assert_eq!(weighted_colimit(&FinSetCarrier, &WeightClass::Lext, &d).unwrap().object, 5);
    }

    #[test]
    fn adh_pushout_and_mono_checks() {
        let d = diagram(
            Shape::MonoSpan,
            vec![1, 2, 1],
            &[("m", f(1, 2, &[1])), ("f", f(1, 1, &[0]))],
        )
        .unwrap();
        assert_eq!(weighted_colimit(&FinSetCarrier, &WeightClass::Adh, &d).unwrap().object, 2);
        let bad = diagram(
            Shape::Span,
            vec![2, 1, 1],
            &[("m", f(2, 1, &[0, 0])), ("f", f(2, 1, &[0, 0]))],
        )
        .unwrap();
        assert!(matches!(
            weighted_colimit(&FinSetCarrier, &WeightClass::Adh, &bad),
            Err(Error::MonoViolation(_))
        ));
        let wrong = diagram(Shape::Discrete(2), vec![1, 1], &[]).unwrap();
        assert!(matches!(
            weighted_colimit(&FinSetCarrier, &WeightClass::Adh, &wrong),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn rc_agrees_with_direct_coequalizer() {
        // R = {(0,0),(1,1),(2,2),(0,1)} on 3 points, with the diagonal section.
        let d = diagram(
            Shape::ReflexivePair,
            vec![4, 3],
            &[
                ("d", f(4, 3, &[0, 1, 2, 0])),
                ("c", f(4, 3, &[0, 1, 2, 1])),
                ("r", f(3, 4, &[0, 1, 2])),
            ],
        )
        .unwrap();
        let r = weighted_colimit(&FinSetCarrier, &WeightClass::Rc, &d).unwrap();
        assert_eq!(r.object, 2);
        assert_eq!(r.cross_check, Some(true));
    }

    #[test]
    fn class_names_round_trip() {
        for w in WeightClass::all_basic() {
            assert_eq!(WeightClass::from_name(w.name()).unwrap().name(), w.name());
        }
        assert!(WeightClass::from_name("filt:parallel_pair").is_none());
    }
}
