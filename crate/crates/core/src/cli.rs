//! Command-line front end.
//!
//! Exit codes: 0 holds, 1 fails, 2 unknown within bounds, 3 usage or
//! input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::carrier::{Enumerable, FinPosetCarrier, FinSetCarrier, PresheafCarrier};
use crate::completions::{
    famf_build, in_saturation, phi_closure, weighted_colimit, ClosureConfig, Saturation, WeightClass,
};
use crate::docfile::{realize, realize_cocone, resolve_category, CarrierSpec, Document, Realize, Realized};
use crate::error::{Error, Result};
use crate::exactness::{check_property, replay, CheckConfig, Property, Status, SCHEMA_VERSION};
use crate::postulate::{adhesive_items, is_postulated};

pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lexkit", version, about = "Exactness checks, postulated cocones and lex-colimit closures on finite carriers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Test an exactness property on a carrier.
    Check {
        /// regular, exact, lextensive, unions, coherent, adhesive, rc or filtered
        #[arg(long)]
        property: String,
        /// finset, finposet or presheaf:<shape-or-file>
        #[arg(long, default_value = "finset")]
        carrier: String,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        max_size: u64,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        probe_bound: Option<u64>,
        /// Re-run the instance stored in a counterexample report.
        #[arg(long)]
        replay: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Decide postulatedness of the cocones in a document.
    Postulate {
        file: PathBuf,
        #[arg(long)]
        carrier: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        probe_bound: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Closure of the representables under finite limits and class colimits.
    Complete {
        /// Base category: a standard shape name or a file.
        #[arg(long)]
        base: String,
        /// Comma-separated weight classes; empty for finite limits only.
        #[arg(long, default_value = "")]
        classes: String,
        #[arg(long, default_value_t = 2)]
        budget: u64,
        /// Largest total size of a closure element.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        max_size: u64,
        /// A document whose first presheaf is tested for membership.
        #[arg(long)]
        query: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// The finite-family completion of a base category.
    Famf {
        #[arg(long)]
        base: String,
        /// Longest family enumerated.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        max_size: u64,
        #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Compute a limit or colimit of a diagram instance.
    Eval {
        #[arg(value_enum)]
        kind: EvalKind,
        #[arg(long)]
        diagram: PathBuf,
        /// Weight class whose recipe computes the colimit.
        #[arg(long)]
        class: Option<String>,
        /// Instance to use; defaults to the first one in the file.
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        carrier: Option<String>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EvalKind {
    Limit,
    Colimit,
}

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    pub text: String,
}

/// Work that runs in whichever carrier the flags select.
trait CarrierTask {
    fn run<C: Realize + Enumerable>(self, c: &C) -> Result<Outcome>;
}

fn dispatch<T: CarrierTask>(spec: &CarrierSpec, probe_bound: Option<u64>, doc: Option<&Document>, task: T) -> Result<Outcome> {
    match spec {
        CarrierSpec::FinSet => task.run(&FinSetCarrier),
        CarrierSpec::FinPoset => {
            let c = match probe_bound {
                Some(b) => FinPosetCarrier::new(b as usize),
                None => FinPosetCarrier::default(),
            };
            task.run(&c)
        }
        CarrierSpec::Presheaf(base) => {
            let cat = match doc {
                Some(d) => d.resolve_category(base)?,
                None => resolve_category(base)?,
            };
            task.run(&PresheafCarrier::new(base, cat))
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Unsupported(format!("cannot read {}: {e}", path.display())))
}

fn status_code(statuses: impl IntoIterator<Item = Status>) -> i32 {
    statuses.into_iter().map(Status::exit_code).max().unwrap_or(0)
}

struct CheckTask {
    property: Property,
    cfg: CheckConfig,
    replay: Option<Value>,
}

impl CarrierTask for CheckTask {
    fn run<C: Realize + Enumerable>(self, c: &C) -> Result<Outcome> {
        if let Some(stored) = self.replay {
            let cx = stored.get("counterexample").cloned().unwrap_or(stored);
            let again = replay(c, &cx)?;
            let identical = again.as_ref() == Some(&cx);
            let json = json!({
                "schema_version": SCHEMA_VERSION,
                "carrier": c.describe(),
                "reproduced": again.is_some(),
                "identical": identical,
                "counterexample": again,
            });
            let text = match (&again, identical) {
                (Some(_), true) => "replay: failure reproduced identically\n".to_string(),
                (Some(_), false) => "replay: failure reproduced with a different report\n".to_string(),
                (None, _) => "replay: the instance no longer fails\n".to_string(),
            };
            return Ok(Outcome {
                code: if again.is_some() { 1 } else { 0 },
                json,
                text,
            });
        }
        let v = check_property(c, self.property, &self.cfg, None)?;
        let mut text = format!(
            "property: {}\ncarrier: {}\nstatus: {}\n",
            v.property,
            v.carrier,
            v.status.as_str()
        );
        if let Some(cx) = &v.counterexample {
            text.push_str(&format!("counterexample: {}\n", serde_json::to_string(cx).unwrap_or_default()));
        }
        Ok(Outcome {
            code: v.status.exit_code(),
            json: v.to_json(),
            text,
        })
    }
}

struct PostulateTask<'a> {
    doc: &'a Document,
}

impl CarrierTask for PostulateTask<'_> {
    fn run<C: Realize + Enumerable>(self, c: &C) -> Result<Outcome> {
        let doc = self.doc;
        if doc.cocones.is_empty() {
            return Err(Error::IllFormed("the document declares no cocone".into()));
        }
        let env = realize(c, doc)?;
        let mut reports = Vec::new();
        let mut statuses = Vec::new();
        let mut text = String::new();
        for decl in &doc.cocones {
            match realize_cocone(c, doc, &env, decl)? {
                Realized::Carrier {
                    presentation,
                    adhesive,
                } => {
                    let rep = is_postulated(c, &presentation)?;
                    statuses.push(rep.status);
                    let mut j = rep.to_json(c, &presentation);
                    text.push_str(&format!(
                        "cocone {}: {}\n  P1': {}\n  P2': {}\n  max sieve rounds: {}\n",
                        decl.name,
                        rep.status.as_str(),
                        rep.p1.holds,
                        rep.p2_holds(),
                        rep.max_rounds
                    ));
                    if let Some(p) = &rep.p1.failing_probe {
                        text.push_str(&format!("  P1' fails along probe {}\n", c.mor_json(p)));
                    }
                    for pair in rep.pairs.iter().filter(|r| !r.check.holds) {
                        text.push_str(&format!(
                            "  P2' fails at ({}, {})\n",
                            presentation.j_names[pair.sieve.j], presentation.j_names[pair.sieve.k]
                        ));
                    }
                    if let Some((m, f)) = adhesive {
                        let items = adhesive_items(c, &m, &f)?;
                        for it in &items.items {
                            text.push_str(&format!(
                                "  item ({}) on ({}, {}): sieve matches {}, whole {}, condition {}, rounds {}\n",
                                it.name, it.j, it.k, it.sieve_matches, it.whole, it.condition, it.rounds
                            ));
                        }
                        j["adhesive_items"] = items.to_json();
                    }
                    j["presentation"] = presentation.to_json(c);
                    reports.push(json!({"name": decl.name, "level": "carrier", "report": j}));
                }
                Realized::Base(bp) => {
                    let v = bp.verdict()?;
                    let status = if v.by_sieves() { Status::Holds } else { Status::Fails };
                    statuses.push(status);
                    text.push_str(&format!(
                        "cocone {} (base): {}\n  P1: {}  P2: {}\n  P1': {}  P2': {}\n  f stably final: {}\n  routes agree: {}\n",
                        decl.name,
                        status.as_str(),
                        v.p1,
                        v.p2,
                        v.p1_prime,
                        v.p2_prime,
                        v.f_stably_final,
                        v.consistent()
                    ));
                    let mut j = v.to_json();
                    j["status"] = json!(status.as_str());
                    reports.push(json!({"name": decl.name, "level": "base", "report": j}));
                }
            }
        }
        Ok(Outcome {
            code: status_code(statuses),
            json: json!({
                "schema_version": SCHEMA_VERSION,
                "carrier": c.describe(),
                "cocones": reports,
            }),
            text,
        })
    }
}

struct EvalTask<'a> {
    doc: &'a Document,
    kind: EvalKind,
    class: Option<WeightClass>,
    instance: Option<String>,
}

impl CarrierTask for EvalTask<'_> {
    fn run<C: Realize + Enumerable>(self, c: &C) -> Result<Outcome> {
        let env = realize(c, self.doc)?;
        let name = match &self.instance {
            Some(n) => n.clone(),
            None => self
                .doc
                .instances
                .first()
                .map(|i| i.name.clone())
                .ok_or_else(|| Error::IllFormed("the document declares no instance".into()))?,
        };
        let d = env
            .instances
            .get(&name)
            .ok_or_else(|| Error::IllFormed(format!("unknown instance `{name}`")))?;
        let shape = d.shape();
        let mut json = json!({
            "schema_version": SCHEMA_VERSION,
            "carrier": c.describe(),
            "instance": name,
        });
        let (object, legs) = match (self.kind, &self.class) {
            (EvalKind::Colimit, Some(w)) => {
                let wc = weighted_colimit(c, w, d)?;
                json["class"] = json!(w.name());
                json["recipe"] = json!(wc.recipe.name());
                if let Some(x) = wc.cross_check {
                    json["cross_check"] = json!(x);
                }
                (wc.object, wc.legs)
            }
            (EvalKind::Colimit, None) => {
                let co = c.colimit(&d.graph())?;
                let legs = (0..shape.object_count()).map(|a| (shape.object_name(a).to_string(), co.legs[a].clone()));
                (co.apex.clone(), legs.collect())
            }
            (EvalKind::Limit, None) => {
                let cone = c.limit(&d.graph())?;
                let legs = (0..shape.object_count()).map(|a| (shape.object_name(a).to_string(), cone.legs[a].clone()));
                (cone.apex.clone(), legs.collect())
            }
            (EvalKind::Limit, Some(_)) => {
                return Err(Error::Unsupported("weight classes apply to colimits only".into()));
            }
        };
        json["kind"] = json!(match self.kind {
            EvalKind::Limit => "limit",
            EvalKind::Colimit => "colimit",
        });
        json["object"] = c.obj_json(&object);
        json["size"] = json!(c.total_size(&object));
        json["legs"] = legs.iter().map(|(n, m)| json!({"object": n, "map": c.mor_json(m)})).collect();
        let text = format!(
            "{} of {name}: {} (size {})\n",
            json["kind"].as_str().unwrap_or_default(),
            c.obj_json(&object),
            c.total_size(&object)
        );
        Ok(Outcome { code: 0, json, text })
    }
}

fn parse_classes(s: &str) -> Result<Vec<WeightClass>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty() && *t != "none")
        .map(|t| WeightClass::from_name(t).ok_or_else(|| Error::Unsupported(format!("unknown weight class `{t}`"))))
        .collect()
}

fn carrier_spec(flag: Option<&str>, doc: Option<&Document>) -> Result<CarrierSpec> {
    match flag {
        Some(s) => CarrierSpec::parse(s),
        None => Ok(doc.and_then(Document::implied_carrier).unwrap_or(CarrierSpec::FinSet)),
    }
}

pub fn execute(cmd: Command) -> Result<(Outcome, Format)> {
    match cmd {
        Command::Check {
            property,
            carrier,
            max_size,
            samples,
            seed,
            probe_bound,
            replay,
            out,
        } => {
            let property = Property::from_name(&property)
                .ok_or_else(|| Error::Unsupported(format!("unknown property `{property}`")))?;
            let cfg = CheckConfig::with_size(max_size as usize).seed(seed).samples(samples as usize);
            let replay = match replay {
                Some(p) => Some(serde_json::from_str(&read(&p)?).map_err(|e| Error::Json(e.to_string()))?),
                None => None,
            };
            let spec = CarrierSpec::parse(&carrier)?;
            let o = dispatch(&spec, probe_bound, None, CheckTask { property, cfg, replay })?;
            Ok((o, out.format))
        }
        Command::Postulate {
            file,
            carrier,
            probe_bound,
            out,
        } => {
            let doc = Document::parse(&read(&file)?)?;
            let spec = carrier_spec(carrier.as_deref(), Some(&doc))?;
            Ok((dispatch(&spec, probe_bound, Some(&doc), PostulateTask { doc: &doc })?, out.format))
        }
        Command::Complete {
            base,
            classes,
            budget,
            max_size,
            query,
            out,
        } => {
            let cat = resolve_category(&base)?;
            let classes = parse_classes(&classes)?;
            let cfg = ClosureConfig {
                max_size: max_size as usize,
                ..ClosureConfig::with_budget(budget as usize)
            };
            let set = phi_closure(&cat, &classes, &cfg)?;
            let c = PresheafCarrier::new(&base, cat.clone());
            let mut json = set.to_json(&c);
            json["schema_version"] = json!(SCHEMA_VERSION);
            let mut text = format!(
                "closure of {} under finite limits{}{}: {} elements, {} rounds{}\n",
                base,
                if classes.is_empty() { "" } else { " and " },
                classes.iter().map(|w| w.name()).collect::<Vec<_>>().join(", "),
                set.elements.len(),
                set.rounds,
                if set.fixpoint { ", fixpoint" } else { ", budget exhausted" }
            );
            for (i, e) in set.elements.iter().enumerate() {
                text.push_str(&format!("  [{i}] sizes {:?}  {}\n", e.presheaf.sizes(), e.term.text(&cat)));
            }
            let mut code = 0;
            if let Some(q) = query {
                let doc = Document::parse(&read(&q)?)?;
                let env = realize(&c, &doc)?;
                let decl = doc
                    .objects
                    .first()
                    .ok_or_else(|| Error::IllFormed("query document declares no presheaf".into()))?;
                let phi = &env.objects[&decl.name];
                let (member, term) = match in_saturation(&cat, phi, &classes, &cfg)? {
                    Saturation::Yes(t) => (true, Some(t)),
                    Saturation::NoWithinBudget => (false, None),
                };
                json["query"] = json!({
                    "name": decl.name,
                    "member": member,
                    "term": term.as_ref().map(|t| t.to_json(&cat)),
                    "text": term.as_ref().map(|t| t.text(&cat)),
                });
                text.push_str(&match &term {
                    Some(t) => format!("{} is in the closure: {}\n", decl.name, t.text(&cat)),
                    None => format!("{} not found within budget\n", decl.name),
                });
                code = if member { 0 } else { Status::UnknownBounded.exit_code() };
            }
            Ok((Outcome { code, json, text }, out.format))
        }
        Command::Famf {
            base,
            max_size,
            samples,
            seed,
            out,
        } => {
            let cat = resolve_category(&base)?;
            let fam = famf_build(&cat);
            let c = PresheafCarrier::new(&base, cat);
            let summary = fam.summary(max_size as usize);
            let rep = fam.check_preservation(&c, max_size as usize, samples as usize, seed)?;
            let text = format!(
                "Fam_f({base}) up to family size {max_size}: {} objects, {} morphisms\nJ preserves: terminal {}, coproducts {}/{}, products {}/{}, equalizers {}/{}\n",
                summary["objects"],
                summary["morphisms"],
                rep.terminal.map_or("n/a".to_string(), |b| b.to_string()),
                rep.coproducts.passed,
                rep.coproducts.total,
                rep.products.passed,
                rep.products.total,
                rep.equalizers.passed,
                rep.equalizers.total,
            );
            let json = json!({
                "schema_version": SCHEMA_VERSION,
                "base": base,
                "seed": seed,
                "samples": samples,
                "summary": summary,
                "preservation": serde_json::to_value(&rep).map_err(|e| Error::Json(e.to_string()))?,
            });
            let code = if rep.all_passed() { 0 } else { 1 };
            Ok((Outcome { code, json, text }, out.format))
        }
        Command::Eval {
            kind,
            diagram,
            class,
            instance,
            carrier,
            out,
        } => {
            let doc = Document::parse(&read(&diagram)?)?;
            let spec = carrier_spec(carrier.as_deref(), Some(&doc))?;
            let class = match class {
                Some(s) => Some(WeightClass::from_name(&s).ok_or_else(|| Error::Unsupported(format!("unknown weight class `{s}`")))?),
                None => None,
            };
            let task = EvalTask {
                doc: &doc,
                kind,
                class,
                instance,
            };
            Ok((dispatch(&spec, None, Some(&doc), task)?, out.format))
        }
    }
}

/// Parses `args`, runs the command and writes its report; returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok((o, format)) => {
            let _ = match format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&o.json).unwrap_or_default()),
                Format::Text => write!(out, "{}", o.text),
            };
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
