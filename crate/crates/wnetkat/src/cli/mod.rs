//! The `wnk` command line: loading schemas, policies and topologies, running
//! queries and rendering verdicts.

pub mod assets;
pub mod topology;

use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::denotational::eval_approx;
use crate::engine::DynWnka;
use crate::error::{Result, WnkError};
use crate::netcore::{
    parse_document, parse_predicate, parse_schema, print_policy, FieldSchema, History, PacketId, Policy, Pred,
};
use crate::semiring::{Semiring, SemiringHandle, SemiringKind, SemiringValue};
use crate::verify::{Verdict, VerifyOptions};
use crate::wnka::CompileOptions;

pub use topology::{describe_trace, load_topology, parse_topology, topology_to_policy, Flavor, TopologySpec};

#[derive(Debug, Parser)]
#[command(name = "wnk", version, about = "Weighted NetKAT policies, automata and quantitative queries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide an r-safety or r-reachability query.
    Check(CheckArgs),
    /// Weight of one input packet and output history.
    Eval(EvalArgs),
    /// Compile to an automaton and report its size.
    Compile(CompileArgs),
    /// Print the policy generated from a topology.
    Generate(GenerateArgs),
}

/// Where the network policy comes from.
#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["policy", "topology"])))]
pub struct SourceArgs {
    /// Semiring: boolean, tropical, arctic, viterbi, prob-union, bottleneck, security, nat-inf or real.
    #[arg(long)]
    pub semiring: String,
    /// Schema file (`fields { … }`), for policy files without a header.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long)]
    pub policy: Option<PathBuf>,
    /// Topology JSON file, or `@abilene` / `@fig2` for the bundled ones.
    #[arg(long)]
    pub topology: Option<String>,
    /// rel, band, latency or plain.
    #[arg(long, default_value = "plain")]
    pub flavor: String,
    /// Topology profile to apply.
    #[arg(long)]
    pub profile: Option<String>,
    /// Predicate placed before the network.
    #[arg(long)]
    pub ingress: Option<String>,
    /// Predicate placed after the network.
    #[arg(long)]
    pub egress: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("bound").required(true).args(["safe", "reach"])))]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Is every trace weight below this bound?
    #[arg(long)]
    pub safe: Option<String>,
    /// Is some trace weight at or above this bound?
    #[arg(long)]
    pub reach: Option<String>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = VerifyOptions::default().max_dups)]
    pub max_dups: usize,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Input packet, `f=v,g=w`.
    #[arg(long)]
    pub packet: String,
    /// Output history, head first: `f=v,g=w :: f=v,g=w`.
    #[arg(long)]
    pub history: Option<String>,
    /// Evaluate the denotation with iteration unrolled this many times instead of compiling.
    #[arg(long)]
    pub approx: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Print the automaton as JSON.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
}

/// A policy together with its schema, semiring and guards.
pub struct Loaded {
    pub schema: FieldSchema,
    pub policy: Policy,
    pub handle: SemiringHandle,
    pub topology: Option<TopologySpec>,
    pub ingress: Option<Pred>,
    pub egress: Option<Pred>,
}

impl Loaded {
    /// `ingress ; policy ; egress`
    pub fn guarded(&self) -> Policy {
        let mut p = self.policy.clone();
        if let Some(t) = &self.ingress {
            p = Policy::seq(Policy::Filter(t.clone()), p);
        }
        if let Some(t) = &self.egress {
            p = Policy::seq(p, Policy::Filter(t.clone()));
        }
        p
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| WnkError::Invalid(format!("cannot read {}: {e}", path.display())))
}

pub fn topology_source(arg: &str) -> Result<TopologySpec> {
    match arg.strip_prefix('@') {
        Some(name) => parse_topology(assets::topology(name)?),
        None => load_topology(arg),
    }
}

impl Loaded {
    /// A policy document, with the schema from its header or from `schema`.
    pub fn from_policy_text(text: &str, schema: Option<&FieldSchema>, handle: SemiringHandle) -> Result<Loaded> {
        let (schema, policy) = parse_document(text, schema, handle)?;
        Ok(Loaded { schema, policy, handle, topology: None, ingress: None, egress: None })
    }

    /// The generated network with the topology's guards for `profile`.
    pub fn from_topology(
        spec: TopologySpec,
        flavor: Flavor,
        handle: SemiringHandle,
        profile: Option<&str>,
    ) -> Result<Loaded> {
        let schema = spec.schema()?;
        let policy = topology_to_policy(&spec, &schema, flavor, handle, profile)?;
        let (ingress, egress) = spec.guards(profile)?;
        let mut l = Loaded { schema, policy, handle, topology: None, ingress: None, egress: None };
        l.set_guards(ingress.as_deref(), egress.as_deref())?;
        l.topology = Some(spec);
        Ok(l)
    }

    /// Replaces the guards that are given.
    pub fn set_guards(&mut self, ingress: Option<&str>, egress: Option<&str>) -> Result<()> {
        if let Some(t) = ingress {
            self.ingress = Some(parse_predicate(t, &self.schema)?);
        }
        if let Some(t) = egress {
            self.egress = Some(parse_predicate(t, &self.schema)?);
        }
        Ok(())
    }
}

pub fn load(src: &SourceArgs) -> Result<Loaded> {
    let handle = SemiringHandle::from_name(&src.semiring)?;
    let mut loaded = match (&src.policy, &src.topology) {
        (Some(path), _) => {
            let schema = src.schema.as_deref().map(|s| read(s).and_then(|t| parse_schema(&t))).transpose()?;
            Loaded::from_policy_text(&read(path)?, schema.as_ref(), handle)?
        }
        (None, Some(t)) => {
            Loaded::from_topology(topology_source(t)?, Flavor::from_name(&src.flavor)?, handle, src.profile.as_deref())?
        }
        (None, None) => return Err(WnkError::Invalid("give --policy or --topology".into())),
    };
    loaded.set_guards(src.ingress.as_deref(), src.egress.as_deref())?;
    Ok(loaded)
}

#[derive(Debug, Clone)]
pub enum QueryMode {
    Safe(SemiringValue),
    Reach(SemiringValue),
    Eval { packet: PacketId, history: History },
}

#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub mode: QueryMode,
    pub options: VerifyOptions,
}

/// The outcome of a query, with machine and human renderings.
#[derive(Debug, Clone)]
pub struct Report {
    pub verdict: Option<Verdict>,
    pub weight: Option<SemiringValue>,
    pub json: Value,
    pub text: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdict.as_ref().map_or(0, Verdict::exit_code)
    }
}

/// Compiles the guarded policy and answers `q`.
pub fn run_query(q: &QuerySpec, loaded: &Loaded) -> Result<Report> {
    let kind = loaded.handle.kind();
    if let QueryMode::Safe(r) | QueryMode::Reach(r) = &q.mode {
        if r.kind() != kind {
            return Err(WnkError::Invalid(format!("bound {r} is a {} value, not {kind}", r.kind())));
        }
    }
    let opts = CompileOptions { max_scc: q.options.max_scc };
    let a = DynWnka::compile(&loaded.guarded(), &loaded.schema, kind, opts)?;
    match &q.mode {
        QueryMode::Eval { packet, history } => {
            let w = a.eval_weight(*packet, history);
            let json = json!({
                "query": "eval",
                "semiring": kind.name(),
                "packet": loaded.schema.format_packet(*packet),
                "history": loaded.schema.format_history(history),
                "weight": w.to_string(),
            });
            Ok(Report { verdict: None, text: format!("{}\n", w), weight: Some(w), json })
        }
        QueryMode::Safe(r) | QueryMode::Reach(r) => {
            let safe = matches!(q.mode, QueryMode::Safe(_));
            let v = if safe { a.check_safety(r, &q.options)? } else { a.check_reachability(r, &q.options)? };
            Ok(render_verdict(v, if safe { "safe" } else { "reach" }, kind, loaded))
        }
    }
}

/// Renders a verdict as JSON and text; `query` is `safe` or `reach`.
pub fn render_verdict(v: Verdict, query: &str, kind: SemiringKind, loaded: &Loaded) -> Report {
    let schema = &loaded.schema;
    let mut json = json!({
        "query": query,
        "semiring": kind.name(),
        "bound": v.bound.to_string(),
        "verdict": v.kind.as_str(),
    });
    let mut text = format!("{} ({} query over {}, bound {})\n", v.kind.as_str(), query, kind, v.bound.display());
    if let Some(t) = &v.total_weight {
        json["total_weight"] = json!(t.to_string());
        text += &format!("total weight: {}\n", t.display());
    }
    if let Some(w) = &v.witness {
        let mut wj = json!({
            "input_packet": schema.format_packet(w.input_packet),
            "history": schema.format_history(&w.history),
            "guarded_string": w.guarded_string.render(schema),
            "weight": w.weight.to_string(),
        });
        text += &format!("witness weight: {} ({})\n", w.weight.display(), w.weight);
        if let Some(spec) = &loaded.topology {
            let (path, tunnels) = describe_trace(spec, schema, w.guarded_string.packets());
            text += &format!("path: {}\n", path.join(" -> "));
            if !spec.tunnels.is_empty() {
                let t: Vec<String> = tunnels.iter().map(u32::to_string).collect();
                text += &format!("tunnels: {}\n", t.join(","));
                wj["tunnels"] = json!(tunnels);
            }
            wj["path"] = json!(path);
        }
        text += &format!("input: {}\n", schema.format_packet(w.input_packet));
        text += &format!("history: {}\n", schema.format_history(&w.history));
        json["witness"] = wj;
    }
    let weight = v.witness.as_ref().map(|w| w.weight.clone());
    Report { verdict: Some(v), weight, json, text }
}

fn eval_command(args: &EvalArgs) -> Result<(String, i32)> {
    let loaded = load(&args.source)?;
    let packet = loaded.schema.parse_packet(&args.packet)?;
    let history = args.history.as_deref().map(|h| loaded.schema.parse_history(h)).transpose()?;
    if let Some(n) = args.approx {
        let start = History::single(packet);
        let p = loaded.guarded();
        let schema = &loaded.schema;
        let (rendered, at) = with_semiring!(loaded.handle.kind(), S => {
            let m = eval_approx::<S>(&p, n, schema, &start)?;
            let at = history.as_ref().map(|h| S::wrap(m.at(h)));
            (m.render(|h| schema.format_history(h)), at)
        });
        let out = if args.json {
            let mut j = json!({"query": "eval", "approx": n, "weighting": rendered});
            if let Some(w) = at {
                j["weight"] = json!(w.to_string());
            }
            format!("{j:#}\n")
        } else {
            match at {
                Some(w) => format!("{}\nweight: {w}\n", rendered.trim_end()),
                None => format!("{}\n", rendered.trim_end()),
            }
        };
        return Ok((out, 0));
    }
    let history = history.ok_or_else(|| WnkError::Invalid("--history is required unless --approx is given".into()))?;
    let q = QuerySpec { mode: QueryMode::Eval { packet, history }, options: VerifyOptions::default() };
    let r = run_query(&q, &loaded)?;
    Ok((if args.json { format!("{:#}\n", r.json) } else { r.text }, 0))
}

fn check_command(args: &CheckArgs) -> Result<(String, i32)> {
    let loaded = load(&args.source)?;
    let bound = |s: &str| loaded.handle.parse(s).map_err(WnkError::from);
    let mode = match (&args.safe, &args.reach) {
        (Some(r), _) => QueryMode::Safe(bound(r)?),
        (None, Some(r)) => QueryMode::Reach(bound(r)?),
        (None, None) => return Err(WnkError::Invalid("give --safe or --reach".into())),
    };
    let options = VerifyOptions { max_dups: args.max_dups, ..VerifyOptions::default() };
    let r = run_query(&QuerySpec { mode, options }, &loaded)?;
    let out = if args.json { format!("{:#}\n", r.json) } else { r.text.clone() };
    Ok((out, r.exit_code()))
}

fn compile_command(args: &CompileArgs) -> Result<(String, i32)> {
    let loaded = load(&args.source)?;
    let a = DynWnka::compile(&loaded.guarded(), &loaded.schema, loaded.handle.kind(), CompileOptions::default())?;
    if args.dump {
        Ok((format!("{:#}\n", a.dump_json(&loaded.schema)?), 0))
    } else {
        Ok((format!("states: {}\npackets: {}\n", a.state_count(), a.packet_count()), 0))
    }
}

fn generate_command(args: &GenerateArgs) -> Result<(String, i32)> {
    let loaded = load(&args.source)?;
    Ok((format!("{}\n{}\n", loaded.schema, print_policy(&loaded.guarded(), &loaded.schema)), 0))
}

/// Runs a parsed command line, returning what to print and the exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32)> {
    match &cli.command {
        Command::Check(a) => check_command(a),
        Command::Eval(a) => eval_command(a),
        Command::Compile(a) => compile_command(a),
        Command::Generate(a) => generate_command(a),
    }
}
