//! Topology descriptions and their translation into network policies.
//!
//! A topology lists nodes, directed links, tunnels and forwarding rules. The
//! generated policy has the shape
//!
//! ```text
//! net ≜ (p ; dup)*
//! p   ≜ if node=N₁ then W₁(P₁) else if node=N₂ then … else drop
//! ```
//!
//! When tunnels are present each node policy `Pᵢ` is the tunneling logic
//! (start, stitch, forward inside a tunnel) on the `tid` field, iterated as
//! `(Pᵢ)* ; node≠Nᵢ`. Without tunnels `Pᵢ` is the node's forwarding table.
//! Traffic a node has no rule for is dropped.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Deserialize;

use crate::error::{Result, WnkError};
use crate::netcore::{parse_predicate, FieldSchema, PacketId, Policy, Pred};
use crate::semiring::numeric::{format_rational, parse_rational};
use crate::semiring::{SemiringHandle, SemiringKind};

fn default_location() -> String {
    "node".into()
}

fn default_dst() -> String {
    "dst".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default = "default_location")]
    pub location_field: String,
    #[serde(default = "default_dst")]
    pub dst_field: String,
    /// Extra packet fields, e.g. a traffic class.
    #[serde(default)]
    pub fields: Vec<FieldSpec>,
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub links: Vec<LinkSpec>,
    #[serde(default)]
    pub tunnels: Vec<TunnelSpec>,
    /// Where tunnels start: at node `at`, traffic for `dst` enters one of `tids`.
    #[serde(default)]
    pub routes: Vec<RouteSpec>,
    /// Moves traffic arriving on tunnel `tid` straight onto tunnel `to`.
    #[serde(default)]
    pub reroutes: Vec<RerouteSpec>,
    /// Forwarding for traffic outside tunnels.
    #[serde(default)]
    pub forwarding: Vec<ForwardSpec>,
    #[serde(default)]
    pub profiles: BTreeMap<String, ProfileSpec>,
    #[serde(default)]
    pub ingress: Option<String>,
    #[serde(default)]
    pub egress: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub name: String,
    #[serde(default)]
    pub failure_pct: Option<serde_json::Number>,
    #[serde(default)]
    pub latency_ms: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub latency_ms: Option<u64>,
    #[serde(default)]
    pub bandwidth_mbps: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TunnelSpec {
    pub tid: u32,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteSpec {
    pub at: String,
    pub dst: String,
    #[serde(default)]
    pub when: Option<String>,
    pub tids: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RerouteSpec {
    pub at: String,
    pub tid: u32,
    pub dst: String,
    pub to: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForwardSpec {
    pub at: String,
    pub dst: String,
    #[serde(default)]
    pub when: Option<String>,
    pub next: Vec<String>,
}

/// A named variant of the configuration. Its rules take precedence over
/// those of the profile it extends and over the base rules.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    #[serde(default)]
    pub extends: Option<String>,
    #[serde(default)]
    pub routes: Vec<RouteSpec>,
    #[serde(default)]
    pub reroutes: Vec<RerouteSpec>,
    #[serde(default)]
    pub forwarding: Vec<ForwardSpec>,
    #[serde(default)]
    pub ingress: Option<String>,
    #[serde(default)]
    pub egress: Option<String>,
}

/// Which quantity the generated policy is weighted by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Node failure rates, on each node's iterated policy.
    Rel,
    /// Link bandwidths, on each forwarding action.
    Band,
    /// Node latencies on node policies plus link latencies on forwarding actions.
    Latency,
    Plain,
}

impl Flavor {
    pub fn from_name(s: &str) -> Result<Flavor> {
        match s {
            "rel" => Ok(Flavor::Rel),
            "band" => Ok(Flavor::Band),
            "latency" => Ok(Flavor::Latency),
            "plain" => Ok(Flavor::Plain),
            _ => Err(WnkError::Invalid(format!("unknown flavor `{s}` (expected rel, band, latency or plain)"))),
        }
    }
}

fn topo_err(path: impl Into<String>, message: impl Into<String>) -> WnkError {
    WnkError::Topology { path: path.into(), message: message.into() }
}

/// Reads and validates a topology file.
pub fn load_topology(path: impl AsRef<Path>) -> Result<TopologySpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_topology(&text).map_err(|e| match e {
        WnkError::Topology { path: p, message } => topo_err(format!("{}: {p}", path.display()), message),
        other => other,
    })
}

pub fn parse_topology(text: &str) -> Result<TopologySpec> {
    let spec: TopologySpec = serde_json::from_str(text)
        .map_err(|e| topo_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

impl TopologySpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(topo_err("nodes", "at least one node is required"));
        }
        let mut names = BTreeSet::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if !names.insert(n.name.as_str()) {
                return Err(topo_err(format!("nodes[{i}].name"), format!("duplicate node `{}`", n.name)));
            }
            if let Some(f) = &n.failure_pct {
                match parse_rational(&f.to_string()) {
                    Some(r)
                        if r >= BigRational::from_integer(0.into()) && r <= BigRational::from_integer(100.into()) => {}
                    _ => return Err(topo_err(format!("nodes[{i}].failure_pct"), "must be a percentage in [0, 100]")),
                }
            }
        }
        let known = |p: String, n: &str| -> Result<()> {
            if names.contains(n) {
                Ok(())
            } else {
                Err(topo_err(p, format!("unknown node `{n}`")))
            }
        };
        for (i, l) in self.links.iter().enumerate() {
            known(format!("links[{i}].from"), &l.from)?;
            known(format!("links[{i}].to"), &l.to)?;
        }
        let mut tids = BTreeSet::new();
        for (i, t) in self.tunnels.iter().enumerate() {
            if t.tid == 0 || !tids.insert(t.tid) {
                return Err(topo_err(format!("tunnels[{i}].tid"), "tunnel ids must be distinct and non-zero"));
            }
            if t.path.len() < 2 {
                return Err(topo_err(format!("tunnels[{i}].path"), "a tunnel spans at least two nodes"));
            }
            for (j, n) in t.path.iter().enumerate() {
                known(format!("tunnels[{i}].path[{j}]"), n)?;
            }
            for (j, w) in t.path.windows(2).enumerate() {
                if self.link(&w[0], &w[1]).is_none() {
                    return Err(topo_err(
                        format!("tunnels[{i}].path[{}]", j + 1),
                        format!("no link {} -> {}", w[0], w[1]),
                    ));
                }
            }
        }
        let check_rules = |prefix: &str, routes: &[RouteSpec], reroutes: &[RerouteSpec], fwd: &[ForwardSpec]| {
            for (i, r) in routes.iter().enumerate() {
                known(format!("{prefix}routes[{i}].at"), &r.at)?;
                known(format!("{prefix}routes[{i}].dst"), &r.dst)?;
                if let Some(t) = r.tids.iter().find(|t| !tids.contains(t)) {
                    return Err(topo_err(format!("{prefix}routes[{i}].tids"), format!("unknown tunnel {t}")));
                }
            }
            for (i, r) in reroutes.iter().enumerate() {
                known(format!("{prefix}reroutes[{i}].at"), &r.at)?;
                known(format!("{prefix}reroutes[{i}].dst"), &r.dst)?;
                if !tids.contains(&r.tid) || !tids.contains(&r.to) {
                    return Err(topo_err(format!("{prefix}reroutes[{i}]"), "unknown tunnel"));
                }
            }
            for (i, f) in fwd.iter().enumerate() {
                known(format!("{prefix}forwarding[{i}].at"), &f.at)?;
                known(format!("{prefix}forwarding[{i}].dst"), &f.dst)?;
                for (j, n) in f.next.iter().enumerate() {
                    known(format!("{prefix}forwarding[{i}].next[{j}]"), n)?;
                }
            }
            Ok::<(), WnkError>(())
        };
        check_rules("", &self.routes, &self.reroutes, &self.forwarding)?;
        for (name, p) in &self.profiles {
            check_rules(&format!("profiles.{name}."), &p.routes, &p.reroutes, &p.forwarding)?;
            if let Some(e) = &p.extends {
                if !self.profiles.contains_key(e) {
                    return Err(topo_err(format!("profiles.{name}.extends"), format!("unknown profile `{e}`")));
                }
            }
            self.profile_chain(Some(name))?;
        }
        let schema = self.schema()?;
        for (p, pred) in [("ingress", &self.ingress), ("egress", &self.egress)] {
            if let Some(t) = pred {
                parse_predicate(t, &schema).map_err(|e| topo_err(p, e.to_string()))?;
            }
        }
        Ok(())
    }

    pub fn link(&self, from: &str, to: &str) -> Option<&LinkSpec> {
        self.links.iter().find(|l| l.from == from && l.to == to)
    }

    pub fn node(&self, name: &str) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.name == name)
    }

    /// The packet fields: location, destination, `tid` when there are
    /// tunnels, then the extra fields.
    pub fn schema(&self) -> Result<FieldSchema> {
        let names: Vec<String> = self.nodes.iter().map(|n| n.name.clone()).collect();
        let mut fields = vec![(self.location_field.clone(), names.clone()), (self.dst_field.clone(), names)];
        if !self.tunnels.is_empty() {
            let mut tids: Vec<u32> = self.tunnels.iter().map(|t| t.tid).collect();
            tids.sort_unstable();
            let values = std::iter::once("0".to_string()).chain(tids.iter().map(u32::to_string)).collect();
            fields.push(("tid".into(), values));
        }
        fields.extend(self.fields.iter().map(|f| (f.name.clone(), f.values.clone())));
        FieldSchema::new(fields)
    }

    /// `[profile, its parent, …]`, rejecting cycles.
    fn profile_chain(&self, profile: Option<&str>) -> Result<Vec<&ProfileSpec>> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut cur = profile;
        while let Some(name) = cur {
            if !seen.insert(name) {
                return Err(topo_err(format!("profiles.{name}.extends"), "profiles extend each other in a cycle"));
            }
            let p = self.profiles.get(name).ok_or_else(|| WnkError::Invalid(format!("unknown profile `{name}`")))?;
            out.push(p);
            cur = p.extends.as_deref();
        }
        Ok(out)
    }

    /// Ingress and egress predicates after applying `profile`.
    pub fn guards(&self, profile: Option<&str>) -> Result<(Option<String>, Option<String>)> {
        let chain = self.profile_chain(profile)?;
        let ingress = chain.iter().find_map(|p| p.ingress.clone()).or_else(|| self.ingress.clone());
        let egress = chain.iter().find_map(|p| p.egress.clone()).or_else(|| self.egress.clone());
        Ok((ingress, egress))
    }
}

struct Rules<'a> {
    routes: Vec<&'a RouteSpec>,
    reroutes: Vec<&'a RerouteSpec>,
    forwarding: Vec<&'a ForwardSpec>,
}

struct Generator<'a> {
    spec: &'a TopologySpec,
    schema: &'a FieldSchema,
    flavor: Flavor,
    handle: SemiringHandle,
    rules: Rules<'a>,
    loc: usize,
    dst: usize,
    tid: Option<usize>,
}

impl Generator<'_> {
    fn value(&self, f: usize, name: &str) -> u32 {
        self.schema.value_index(f, name).expect("validated value")
    }

    fn test(&self, f: usize, name: &str) -> Pred {
        Pred::Test(f, self.value(f, name))
    }

    fn assign(&self, f: usize, name: &str) -> Policy {
        Policy::Assign(f, self.value(f, name))
    }

    fn tid(&self) -> usize {
        self.tid.expect("tunnel rules need a tid field")
    }

    fn weigh(&self, lit: &str, p: Policy) -> Result<Policy> {
        Ok(Policy::weigh(self.handle.parse(lit)?, p))
    }

    /// `node:=next`, weighted by the link when the flavor asks for it.
    fn hop(&self, at: &str, next: &str, required: bool) -> Result<Policy> {
        let p = self.assign(self.loc, next);
        let link = self.spec.link(at, next);
        match self.flavor {
            Flavor::Band => match link.and_then(|l| l.bandwidth_mbps) {
                Some(b) => self.weigh(&b.to_string(), p),
                None if required => Err(topo_err(
                    format!("links[{at}->{next}]"),
                    "the band flavor needs bandwidth_mbps on tunnel links",
                )),
                None => Ok(p),
            },
            Flavor::Latency => match link.and_then(|l| l.latency_ms) {
                Some(l) => self.weigh(&l.to_string(), p),
                None => Ok(p),
            },
            _ => Ok(p),
        }
    }

    fn when(&self, t: &Option<String>) -> Result<Option<Pred>> {
        t.as_deref().map(|s| parse_predicate(s, self.schema)).transpose()
    }

    /// Conditional rules in order, then the first unconditional one.
    fn guarded_choice<T>(
        &self,
        rules: &[&T],
        when: impl Fn(&T) -> &Option<String>,
        body: impl Fn(&T) -> Result<Policy>,
    ) -> Result<Policy> {
        let fallback = match rules.iter().find(|r| when(r).is_none()) {
            Some(r) => body(r)?,
            None => Policy::drop(),
        };
        let mut out = fallback;
        for r in rules.iter().rev().filter(|r| when(r).is_some()) {
            let t = self.when(when(r))?.expect("conditional rule");
            out = Policy::if_then_else(t, body(r)?, out);
        }
        Ok(out)
    }

    /// Dispatch on the destination over the rules at `at`.
    fn by_dst<T>(
        &self,
        rules: &[&T],
        dst_of: impl Fn(&T) -> &str,
        when: impl Fn(&T) -> &Option<String> + Copy,
        body: impl Fn(&T) -> Result<Policy> + Copy,
        fallback: Policy,
    ) -> Result<Policy> {
        let mut dsts: Vec<&str> = Vec::new();
        for r in rules {
            if !dsts.contains(&dst_of(r)) {
                dsts.push(dst_of(r));
            }
        }
        let mut out = fallback;
        for d in dsts.into_iter().rev() {
            let group: Vec<&T> = rules.iter().copied().filter(|r| dst_of(r) == d).collect();
            out = Policy::if_then_else(self.test(self.dst, d), self.guarded_choice(&group, when, body)?, out);
        }
        Ok(out)
    }

    fn default_forwarding(&self, at: &str) -> Result<Policy> {
        let rules: Vec<&ForwardSpec> = self.rules.forwarding.iter().copied().filter(|f| f.at == at).collect();
        self.by_dst(
            &rules,
            |f| f.dst.as_str(),
            |f| &f.when,
            |f| Ok(Policy::sum(f.next.iter().map(|n| self.hop(at, n, false)).collect::<Result<Vec<_>>>()?)),
            Policy::drop(),
        )
    }

    fn tunnel_logic(&self, at: &str) -> Result<Policy> {
        let tid = self.tid();
        let starts: Vec<&RouteSpec> = self.rules.routes.iter().copied().filter(|r| r.at == at).collect();
        let on_zero = self.by_dst(
            &starts,
            |r| r.dst.as_str(),
            |r| &r.when,
            |r| Ok(Policy::sum(r.tids.iter().map(|t| self.assign(tid, &t.to_string())))),
            self.default_forwarding(at)?,
        )?;
        let mut branches: Vec<(Pred, Policy)> = Vec::new();
        for r in self.rules.reroutes.iter().filter(|r| r.at == at) {
            let t = Pred::and(self.test(tid, &r.tid.to_string()), self.test(self.dst, &r.dst));
            branches.push((t, self.assign(tid, &r.to.to_string())));
        }
        // tunnels are stitched together at nodes that start tunnels
        if !starts.is_empty() {
            let ending: Vec<u32> = self
                .spec
                .tunnels
                .iter()
                .filter(|t| t.path.last().map(String::as_str) == Some(at))
                .map(|t| t.tid)
                .collect();
            if let Some(t) = ending.iter().map(|t| self.test(tid, &t.to_string())).reduce(Pred::or) {
                branches.push((t, self.assign(tid, "0")));
            }
        }
        for t in &self.spec.tunnels {
            if let Some(i) = t.path.iter().position(|n| n == at) {
                if i + 1 < t.path.len() {
                    branches.push((self.test(tid, &t.tid.to_string()), self.hop(at, &t.path[i + 1], true)?));
                }
            }
        }
        let mut rest = Policy::drop();
        for (t, p) in branches.into_iter().rev() {
            rest = Policy::if_then_else(t, p, rest);
        }
        Ok(Policy::if_then_else(self.test(tid, "0"), on_zero, rest))
    }

    fn rel_weight(&self, n: &NodeSpec) -> Result<String> {
        let pct = n.failure_pct.as_ref().and_then(|f| parse_rational(&f.to_string())).ok_or_else(|| {
            topo_err(format!("nodes[{}].failure_pct", n.name), "the rel flavor needs failure_pct on every node")
        })?;
        let rate = pct / BigRational::from_integer(BigInt::from(100));
        match self.handle.kind() {
            SemiringKind::ProbUnion => Ok(format_rational(&rate)),
            SemiringKind::Viterbi | SemiringKind::Real => Ok(format_rational(&(BigRational::one() - rate))),
            k => Err(WnkError::Capability(format!(
                "the rel flavor weights by failure or success rates and needs prob-union, viterbi or real, not {k}"
            ))),
        }
    }

    fn node_policy(&self, n: &NodeSpec) -> Result<Policy> {
        let inner = if self.tid.is_some() {
            let here = self.test(self.loc, &n.name);
            Policy::seq(Policy::star(self.tunnel_logic(&n.name)?), Policy::Filter(Pred::not(here)))
        } else {
            self.default_forwarding(&n.name)?
        };
        match self.flavor {
            Flavor::Rel => self.weigh(&self.rel_weight(n)?, inner),
            Flavor::Latency => match n.latency_ms {
                Some(l) => self.weigh(&l.to_string(), inner),
                None => Ok(inner),
            },
            Flavor::Band | Flavor::Plain => Ok(inner),
        }
    }
}

/// Generates `(p ; dup)*` for the topology under `profile`.
pub fn topology_to_policy(
    spec: &TopologySpec,
    schema: &FieldSchema,
    flavor: Flavor,
    handle: SemiringHandle,
    profile: Option<&str>,
) -> Result<Policy> {
    let chain = spec.profile_chain(profile)?;
    let mut rules = Rules { routes: Vec::new(), reroutes: Vec::new(), forwarding: Vec::new() };
    for p in &chain {
        rules.routes.extend(&p.routes);
        rules.reroutes.extend(&p.reroutes);
        rules.forwarding.extend(&p.forwarding);
    }
    rules.routes.extend(&spec.routes);
    rules.reroutes.extend(&spec.reroutes);
    rules.forwarding.extend(&spec.forwarding);
    let field = |name: &str| {
        schema.field_index(name).ok_or_else(|| WnkError::Schema(format!("the schema has no `{name}` field")))
    };
    let g = Generator {
        spec,
        schema,
        flavor,
        handle,
        rules,
        loc: field(&spec.location_field)?,
        dst: field(&spec.dst_field)?,
        tid: if spec.tunnels.is_empty() { None } else { Some(field("tid")?) },
    };
    if flavor == Flavor::Latency
        && spec.nodes.iter().all(|n| n.latency_ms.is_none())
        && spec.links.iter().all(|l| l.latency_ms.is_none())
    {
        return Err(topo_err("nodes", "the latency flavor needs latency_ms on nodes or links"));
    }
    let mut p = Policy::drop();
    for n in spec.nodes.iter().rev() {
        p = Policy::if_then_else(g.test(g.loc, &n.name), g.node_policy(n)?, p);
    }
    Ok(Policy::star(Policy::seq(p, Policy::Dup)))
}

/// Node names visited by a trace and the tunnels it used, each with
/// consecutive repeats collapsed.
pub fn describe_trace(spec: &TopologySpec, schema: &FieldSchema, packets: &[PacketId]) -> (Vec<String>, Vec<u32>) {
    let loc = schema.field_index(&spec.location_field);
    let tid = schema.field_index("tid");
    let mut nodes: Vec<String> = Vec::new();
    let mut tunnels: Vec<u32> = Vec::new();
    for &p in packets {
        if let Some(f) = loc {
            let n = schema.value_name(f, schema.get(p, f)).to_string();
            if nodes.last() != Some(&n) {
                nodes.push(n);
            }
        }
        if let Some(f) = tid {
            let t: u32 = schema.value_name(f, schema.get(p, f)).parse().unwrap_or(0);
            if t != 0 && tunnels.last() != Some(&t) {
                tunnels.push(t);
            }
        }
    }
    (nodes, tunnels)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
        "nodes": [{"name": "A", "failure_pct": 1}, {"name": "B", "failure_pct": 2.5}, {"name": "C", "failure_pct": 0}],
        "links": [{"from": "A", "to": "B", "bandwidth_mbps": 10}, {"from": "B", "to": "C", "bandwidth_mbps": 20}],
        "tunnels": [{"tid": 1, "path": ["A", "B", "C"]}],
        "routes": [{"at": "A", "dst": "C", "tids": [1]}],
        "ingress": "node=A & dst=C",
        "egress": "node=C & tid!=0"
    }"#;

    #[test]
    fn validation_errors_carry_paths() {
        let e = parse_topology(r#"{"nodes": []}"#).unwrap_err();
        assert!(matches!(e, WnkError::Topology { ref path, .. } if path == "nodes"), "{e}");
        let e = parse_topology(r#"{"nodes": [{"name": "A"}], "links": [{"from": "A", "to": "Z"}]}"#).unwrap_err();
        assert!(matches!(e, WnkError::Topology { ref path, .. } if path == "links[0].to"), "{e}");
        assert!(parse_topology(r#"{"nodes": [{"name": "A"}], "bogus": 1}"#).is_err());
    }

    #[test]
    fn schema_and_generation() {
        let t = parse_topology(TINY).unwrap();
        let s = t.schema().unwrap();
        assert_eq!(s.packet_count(), 3 * 3 * 2);
        let h = SemiringHandle::new(SemiringKind::ProbUnion);
        let p = topology_to_policy(&t, &s, Flavor::Rel, h, None).unwrap();
        let mut weights = Vec::new();
        p.for_each_weight(&mut |w| weights.push(w.to_string()));
        assert_eq!(weights.len(), 3);
        let plain = topology_to_policy(&t, &s, Flavor::Plain, h, None).unwrap();
        let mut n = 0;
        plain.for_each_weight(&mut |_| n += 1);
        assert_eq!(n, 0);
        let b = SemiringHandle::new(SemiringKind::Bottleneck);
        assert!(topology_to_policy(&t, &s, Flavor::Band, b, None).is_ok());
        assert!(matches!(topology_to_policy(&t, &s, Flavor::Rel, b, None), Err(WnkError::Capability(_))));
    }
}
