//! Bounded checkers for exactness conditions on a carrier.
//!
//! Every checker sweeps all instances built from small objects, then draws
//! seeded random instances. Instances are checked in parallel; the reported
//! counterexample is always the first failing one in sweep order.

mod kinds;
pub mod samples;

use std::collections::HashSet;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

pub use kinds::double_kernel_colimit;
use kinds::{
    AdhesiveKind, DoubleKernelKind, EffectiveKind, ExtensiveKind, FilteredKind, InstanceKind, ReflexiveKind,
    RegularKind, UnionKind,
};

use crate::carrier::{is_strict_initial, Carrier, Enumerable};
use crate::error::{Error, Result};
use crate::fincat::{standard_shape, FinCategory, Shape};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    UnknownBounded,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::UnknownBounded => "unknown_bounded",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::UnknownBounded => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Regular,
    Exact,
    Lextensive,
    Unions,
    Coherent,
    Adhesive,
    ReflexiveCoeq,
    Filtered,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Regular,
        Property::Exact,
        Property::Lextensive,
        Property::Unions,
        Property::Coherent,
        Property::Adhesive,
        Property::ReflexiveCoeq,
        Property::Filtered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Regular => "regular",
            Property::Exact => "exact",
            Property::Lextensive => "lextensive",
            Property::Unions => "unions",
            Property::Coherent => "coherent",
            Property::Adhesive => "adhesive",
            Property::ReflexiveCoeq => "rc",
            Property::Filtered => "filtered",
        }
    }

    pub fn from_name(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == s)
    }
}

/// Size cutoffs and the seed of the random stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Largest object size used for random instances.
    pub max_size: usize,
    /// Largest object size in the exhaustive sweep.
    pub exhaustive_size: usize,
    /// The sweep is cut after this many instances per family.
    pub exhaustive_cap: usize,
    /// Instances per family, counting the sweep; the rest are random.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_size: 3,
            exhaustive_size: 3,
            exhaustive_cap: 20_000,
            samples: 200,
            seed: 0,
        }
    }
}

impl CheckConfig {
    pub fn with_size(max_size: usize) -> Self {
        CheckConfig {
            max_size,
            exhaustive_size: max_size,
            ..Default::default()
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn exhaustive_size(mut self, n: usize) -> Self {
        self.exhaustive_size = n;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub property: String,
    pub carrier: String,
    pub seed: u64,
    pub cutoffs: CheckConfig,
    pub status: Status,
    pub witness: Value,
    /// Present iff the status is `Fails`.
    pub counterexample: Option<Value>,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("property".into(), json!(self.property));
        m.insert("carrier".into(), json!(self.carrier));
        m.insert("seed".into(), json!(self.seed));
        m.insert(
            "cutoffs".into(),
            json!({
                "max_size": self.cutoffs.max_size,
                "exhaustive_size": self.cutoffs.exhaustive_size,
                "exhaustive_cap": self.cutoffs.exhaustive_cap,
                "samples": self.cutoffs.samples,
            }),
        );
        m.insert("status".into(), json!(self.status.as_str()));
        m.insert("witness".into(), self.witness.clone());
        if let Some(cx) = &self.counterexample {
            m.insert("counterexample".into(), cx.clone());
        }
        Value::Object(m)
    }
}

fn thread_pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let n: usize = std::env::var("LEXKIT_THREADS").ok()?.parse().ok()?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
    })
    .as_ref()
}

/// Runs `f` inside the pool capped by `LEXKIT_THREADS`, if set.
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match thread_pool() {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn mix(seed: u64, salt: u64) -> u64 {
    seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Outcome of one family of instances.
struct FamilyRun {
    stats: Value,
    counterexample: Option<Value>,
}

fn counterexample_json(check: &str, instance: Value, detail: Value) -> Value {
    json!({ "check": check, "instance": instance, "detail": detail })
}

fn run_family<C: Carrier + Enumerable, K: InstanceKind<C>>(c: &C, kind: &K, cfg: &CheckConfig) -> Result<FamilyRun> {
    let objs = c.objects_up_to(cfg.exhaustive_size);
    let mut sweep = kind.exhaustive(c, &objs)?;
    sweep.sort_by_key(|(w, _)| *w);
    let truncated = sweep.len() > cfg.exhaustive_cap;
    sweep.truncate(cfg.exhaustive_cap);
    let swept = sweep.len();
    let mut instances: Vec<K::Inst> = sweep.into_iter().map(|(_, i)| i).collect();

    let wanted = cfg.samples.saturating_sub(swept);
    let mut rng = ChaCha8Rng::seed_from_u64(mix(cfg.seed, kind.salt()));
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < wanted && attempts < wanted * 8 + 16 {
        attempts += 1;
        if let Some(inst) = kind.random(c, &mut rng, cfg.max_size)? {
            instances.push(inst);
            drawn += 1;
        }
    }

    let mut seen = HashSet::new();
    let distinct: Vec<&K::Inst> = instances
        .iter()
        .filter(|i| kind.dedupe_key(c, i).map_or(true, |k| seen.insert(k)))
        .collect();

    let found = with_pool(|| {
        distinct.par_iter().find_map_first(|inst| match kind.check(c, inst) {
            Ok(None) => None,
            Ok(Some(detail)) => Some(Ok((*inst, detail))),
            Err(e) => Some(Err(e)),
        })
    });
    let counterexample = match found {
        None => None,
        Some(Err(e)) => return Err(e),
        Some(Ok((inst, detail))) => Some(counterexample_json(kind.name(), kind.to_json(c, inst), detail)),
    };
    Ok(FamilyRun {
        stats: json!({
            "check": kind.name(),
            "exhaustive": swept,
            "exhaustive_truncated": truncated,
            "random": drawn,
            "distinct": distinct.len(),
        }),
        counterexample,
    })
}

/// Accumulates families into a single verdict.
struct Run<'a, C: Carrier + Enumerable> {
    c: &'a C,
    cfg: &'a CheckConfig,
    families: Vec<Value>,
    extra: Map<String, Value>,
    counterexample: Option<Value>,
}

impl<'a, C: Carrier + Enumerable> Run<'a, C> {
    fn new(c: &'a C, cfg: &'a CheckConfig) -> Self {
        Run {
            c,
            cfg,
            families: Vec::new(),
            extra: Map::new(),
            counterexample: None,
        }
    }

    fn family<K: InstanceKind<C>>(&mut self, kind: &K) -> Result<()> {
        if self.counterexample.is_some() {
            return Ok(());
        }
        let run = run_family(self.c, kind, self.cfg)?;
        self.families.push(run.stats);
        self.counterexample = run.counterexample;
        Ok(())
    }

    fn strict_initial(&mut self) -> Result<()> {
        if self.counterexample.is_some() {
            return Ok(());
        }
        let ok = is_strict_initial(self.c, self.cfg.exhaustive_size)?;
        self.extra.insert("strict_initial".into(), json!(ok));
        if !ok {
            self.counterexample = Some(counterexample_json(
                "strict_initial",
                json!({ "max_size": self.cfg.exhaustive_size }),
                json!({ "reason": "some map into the initial object is not invertible" }),
            ));
        }
        Ok(())
    }

    fn finish(self, property: Property) -> Verdict {
        let status = if self.counterexample.is_some() {
            Status::Fails
        } else if self.c.is_known_topos() {
            Status::Holds
        } else {
            Status::UnknownBounded
        };
        let mut witness = self.extra;
        witness.insert("families".into(), Value::Array(self.families));
        witness.insert("known_topos".into(), json!(self.c.is_known_topos()));
        witness.insert("probes_exact".into(), json!(self.c.probes_exact()));
        Verdict {
            property: property.name().into(),
            carrier: self.c.describe(),
            seed: self.cfg.seed,
            cutoffs: self.cfg.clone(),
            status,
            witness: Value::Object(witness),
            counterexample: self.counterexample,
        }
    }
}

pub fn check_regular<C: Carrier + Enumerable>(c: &C, cfg: &CheckConfig) -> Result<Verdict> {
    let mut run = Run::new(c, cfg);
    run.family(&RegularKind)?;
    Ok(run.finish(Property::Regular))
}

pub fn check_barr_exact<C: Carrier + Enumerable>(c: &C, cfg: &CheckConfig) -> Result<Verdict> {
    let mut run = Run::new(c, cfg);
    run.family(&RegularKind)?;
    run.family(&EffectiveKind)?;
    Ok(run.finish(Property::Exact))
}

pub fn check_lextensive<C: Carrier + Enumerable>(c: &C, cfg: &CheckConfig) -> Result<Verdict> {
    let mut run = Run::new(c, cfg);
    run.family(&ExtensiveKind)?;
    Ok(run.finish(Property::Lextensive))
}

pub fn check_effective_unions<C: Carrier + Enumerable>(c: &C, cfg: &CheckConfig) -> Result<Verdict> {
    let mut run = Run::new(c, cfg);
    run.strict_initial()?;
    run.family(&UnionKind)?;
    Ok(run.finish(Property::Unions))
}

pub fn check_coherent<C: Carrier + Enumerable>(c: &C, cfg: &CheckConfig) -> Result<Verdict> {
    let mut run = Run::new(c, cfg);
    run.family(&RegularKind)?;
    run.strict_initial()?;
    run.family(&UnionKind)?;
    run.family(&DoubleKernelKind)?;
    Ok(run.finish(Property::Coherent))
}

pub fn check_adhesive<C: Carrier + Enumerable>(c: &C, cfg: &CheckConfig) -> Result<Verdict> {
    let mut run = Run::new(c, cfg);
    run.family(&AdhesiveKind)?;
    Ok(run.finish(Property::Adhesive))
}

pub fn check_reflexive_coeq<C: Carrier + Enumerable>(c: &C, cfg: &CheckConfig) -> Result<Verdict> {
    let mut run = Run::new(c, cfg);
    run.family(&RegularKind)?;
    run.family(&EffectiveKind)?;
    run.family(&ReflexiveKind)?;
    Ok(run.finish(Property::ReflexiveCoeq))
}

/// The default filtered shape: a cospan, which has a terminal object.
pub fn default_filtered_shape() -> FinCategory {
    standard_shape(Shape::Cospan)
}

pub fn check_filtered_commute<C: Carrier + Enumerable>(
    c: &C,
    shape: &FinCategory,
    cfg: &CheckConfig,
) -> Result<Verdict> {
    let kind = FilteredKind::new(shape.clone())?;
    let mut run = Run::new(c, cfg);
    run.family(&kind)?;
    Ok(run.finish(Property::Filtered))
}

pub fn check_property<C: Carrier + Enumerable>(
    c: &C,
    property: Property,
    cfg: &CheckConfig,
    shape: Option<&FinCategory>,
) -> Result<Verdict> {
    match property {
        Property::Regular => check_regular(c, cfg),
        Property::Exact => check_barr_exact(c, cfg),
        Property::Lextensive => check_lextensive(c, cfg),
        Property::Unions => check_effective_unions(c, cfg),
        Property::Coherent => check_coherent(c, cfg),
        Property::Adhesive => check_adhesive(c, cfg),
        Property::ReflexiveCoeq => check_reflexive_coeq(c, cfg),
        Property::Filtered => match shape {
            Some(s) => check_filtered_commute(c, s, cfg),
            None => check_filtered_commute(c, &default_filtered_shape(), cfg),
        },
    }
}

/// The adhesive conditions for one span `A <-m- C -f-> B` with `m` monic.
pub fn adhesive_square_holds<C: Carrier>(c: &C, m: &C::Mor, f: &C::Mor) -> Result<bool> {
    Ok(AdhesiveKind::check_square(c, m, f)?.is_none())
}

fn replay_kind<C: Carrier + Enumerable, K: InstanceKind<C>>(c: &C, kind: &K, cx: &Value) -> Result<Option<Value>> {
    let instance = cx
        .get("instance")
        .ok_or_else(|| Error::parse(0, "counterexample has no `instance`"))?;
    let inst = kind.from_json(c, instance)?;
    Ok(kind
        .check(c, &inst)?
        .map(|detail| counterexample_json(kind.name(), kind.to_json(c, &inst), detail)))
}

/// Re-runs the instance of a counterexample. Returns the regenerated
/// counterexample, or `None` if the instance no longer fails.
pub fn replay<C: Carrier + Enumerable>(c: &C, cx: &Value) -> Result<Option<Value>> {
    let check = cx
        .get("check")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse(0, "counterexample has no `check`"))?;
    match check {
        "regular" => replay_kind(c, &RegularKind, cx),
        "effective_equivalence" => replay_kind(c, &EffectiveKind, cx),
        "lextensive" => replay_kind(c, &ExtensiveKind, cx),
        "effective_unions" => replay_kind(c, &UnionKind, cx),
        "double_kernel" => replay_kind(c, &DoubleKernelKind, cx),
        "adhesive" => replay_kind(c, &AdhesiveKind, cx),
        "reflexive_coequalizer" => replay_kind(c, &ReflexiveKind, cx),
        "filtered_commute" => {
            let instance = cx.get("instance").unwrap_or(&Value::Null);
            let shape = kinds::shape_from_instance(instance)?.unwrap_or_else(default_filtered_shape);
            replay_kind(c, &FilteredKind::new(shape)?, cx)
        }
        "strict_initial" => {
            let max = cx
                .pointer("/instance/max_size")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::parse(0, "strict_initial instance needs `max_size`"))?;
            Ok((!is_strict_initial(c, max as usize)?).then(|| cx.clone()))
        }
        other => Err(Error::Unsupported(format!("unknown check `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carrier::{FinPosetCarrier, FinSetCarrier, Function, PointedCarrier, PresheafCarrier};

    fn small() -> CheckConfig {
        CheckConfig::with_size(2).samples(20).seed(1)
    }

    #[test]
    fn finset_checks_hold() {
        for p in Property::ALL {
            let v = check_property(&FinSetCarrier, p, &small(), None).unwrap();
            assert_eq!(v.status, Status::Holds, "{}: {:?}", p.name(), v.counterexample);
        }
    }

    #[test]
    fn pointed_sets_are_not_extensive() {
        let v = check_lextensive(&PointedCarrier, &small()).unwrap();
        assert_eq!(v.status, Status::Fails);
        let cx = v.counterexample.unwrap();
        assert_eq!(replay(&PointedCarrier, &cx).unwrap(), Some(cx));
    }

    #[test]
    fn posets_are_not_adhesive() {
        let c = FinPosetCarrier::default();
        let v = check_adhesive(&c, &CheckConfig::with_size(2).seed(1)).unwrap();
        assert_eq!(v.status, Status::Fails);
        let cx = v.counterexample.unwrap();
        let again = replay(&c, &cx).unwrap().unwrap();
        assert_eq!(serde_json::to_string(&again).unwrap(), serde_json::to_string(&cx).unwrap());
    }

    #[test]
    fn posets_have_a_non_effective_equivalence() {
        let c = FinPosetCarrier::default();
        let v = check_barr_exact(&c, &CheckConfig::with_size(3).seed(1)).unwrap();
        assert_eq!(v.status, Status::Fails);
    }

    #[test]
    fn three_chain_with_ends_identified_is_not_effective() {
        let c = FinPosetCarrier::default();
        let run = run_family(&c, &EffectiveKind, &CheckConfig::with_size(3).samples(0)).unwrap();
        let cx = run.counterexample.expect("a non-effective equivalence");
        assert_eq!(cx["instance"]["object"]["size"], 3);
        assert_eq!(cx["instance"]["classes"], json!([[0, 1, 0]]));
    }

    #[test]
    fn double_kernel_of_jointly_surjective_pair_is_the_codomain() {
        let c = FinSetCarrier;
        let f = Function::new(2, 3, vec![0, 1]).unwrap();
        let g = Function::new(2, 3, vec![1, 2]).unwrap();
        assert_eq!(double_kernel_colimit(&c, &f, &g).unwrap().apex, 3);
        let h = Function::new(1, 4, vec![3]).unwrap();
        let k = Function::new(2, 4, vec![0, 0]).unwrap();
        assert_eq!(double_kernel_colimit(&c, &h, &k).unwrap().apex, 2);
    }

    #[test]
    fn presheaf_carrier_is_coherent() {
        let c = PresheafCarrier::new("walking_arrow", standard_shape(Shape::WalkingArrow));
        let cfg = CheckConfig::with_size(2).exhaustive_size(1).samples(15).seed(1);
        let v = check_coherent(&c, &cfg).unwrap();
        assert_eq!(v.status, Status::Holds, "{:?}", v.counterexample);
    }

    #[test]
    fn non_filtered_shape_is_rejected() {
        let shape = standard_shape(Shape::Span);
        let err = check_filtered_commute(&FinSetCarrier, &shape, &small()).unwrap_err();
        assert!(matches!(err, Error::NotFiltered(_)));
    }

    #[test]
    fn verdicts_are_deterministic() {
        let c = FinPosetCarrier::default();
        let cfg = CheckConfig::with_size(2).samples(30).seed(9);
        let a = check_regular(&c, &cfg).unwrap().to_json();
        let b = check_regular(&c, &cfg).unwrap().to_json();
        assert_eq!(a, b);
    }
}
