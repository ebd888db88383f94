use wnetkat::cli::{assets, describe_trace, parse_topology, topology_to_policy, Flavor};
use wnetkat::netcore::{parse_policy, print_policy};
use wnetkat::semiring::SemiringKind;
use wnetkat::{SemiringHandle, WnkError};

fn generated(name: &str, flavor: Flavor, kind: SemiringKind, profile: Option<&str>) -> String {
    let t = parse_topology(assets::topology(name).unwrap()).unwrap();
    let s = t.schema().unwrap();
    let h = SemiringHandle::new(kind);
    let p = topology_to_policy(&t, &s, flavor, h, profile).unwrap();
    let text = print_policy(&p, &s);
    assert_eq!(parse_policy(&text, &s, h).unwrap(), p, "generated policy does not re-parse");
    text
}

#[test]
fn bundled_topologies_load() {
    let a = parse_topology(assets::topology("abilene").unwrap()).unwrap();
    assert_eq!(a.nodes.len(), 11);
    assert_eq!(a.tunnels.len(), 5);
    assert_eq!(a.schema().unwrap().packet_count(), 11 * 11 * 6 * 2);
    let f = parse_topology(assets::topology("fig2").unwrap()).unwrap();
    assert_eq!(f.nodes.len(), 6);
    assert!(assets::topology("nowhere").is_err());
}

#[test]
fn flavors_place_the_right_weights() {
    let rel = generated("abilene", Flavor::Rel, SemiringKind::ProbUnion, None);
    assert!(rel.contains("node=ATL ; (weight(3/200) @"), "{rel}");
    let rel = generated("abilene", Flavor::Rel, SemiringKind::Viterbi, None);
    assert!(rel.contains("node=ATL ; (weight(197/200) @"), "{rel}");

    let band = generated("abilene", Flavor::Band, SemiringKind::Bottleneck, None);
    assert!(band.contains("tid=3 ; (weight(1250) @ node:=HOU)"), "{band}");

    let lat = generated("abilene", Flavor::Latency, SemiringKind::Arctic, None);
    assert!(lat.contains("node=NYC ; (weight(1) @"), "{lat}");

    let plain = generated("abilene", Flavor::Plain, SemiringKind::Boolean, None);
    assert!(!plain.contains("weight("), "{plain}");
    generated("fig2", Flavor::Rel, SemiringKind::Viterbi, None);
}

#[test]
fn profiles_add_rules() {
    let base = generated("abilene", Flavor::Plain, SemiringKind::Boolean, None);
    let safe = generated("abilene", Flavor::Plain, SemiringKind::Boolean, Some("safe"));
    let video = generated("abilene", Flavor::Plain, SemiringKind::Boolean, Some("video"));
    assert!(!base.contains("vid=TRUE"));
    assert!(safe.contains("tid:=4") && safe.len() > base.len());
    assert!(video.contains("vid=TRUE"));
    let t = parse_topology(assets::ABILENE).unwrap();
    let s = t.schema().unwrap();
    let h = SemiringHandle::new(SemiringKind::Boolean);
    assert!(matches!(topology_to_policy(&t, &s, Flavor::Plain, h, Some("nope")), Err(WnkError::Invalid(_))));
    let (ingress, _) = t.guards(Some("video")).unwrap();
    assert!(ingress.unwrap().contains("vid=TRUE"));
}

#[test]
fn flavors_check_the_semiring() {
    let t = parse_topology(assets::ABILENE).unwrap();
    let s = t.schema().unwrap();
    for k in [SemiringKind::Tropical, SemiringKind::Security, SemiringKind::Boolean] {
        let r = topology_to_policy(&t, &s, Flavor::Rel, SemiringHandle::new(k), None);
        assert!(matches!(r, Err(WnkError::Capability(_))), "{k}");
    }
}

#[test]
fn traces_decode_to_nodes_and_tunnels() {
    let t = parse_topology(assets::ABILENE).unwrap();
    let s = t.schema().unwrap();
    let pk = |text: &str| s.parse_packet(text).unwrap();
    let trace = [
        pk("node=BAY,dst=NYC,tid=0,vid=FALSE"),
        pk("node=DEN,dst=NYC,tid=1,vid=FALSE"),
        pk("node=KAN,dst=NYC,tid=1,vid=FALSE"),
        pk("node=HOU,dst=NYC,tid=3,vid=FALSE"),
    ];
    let (path, tunnels) = describe_trace(&t, &s, &trace);
    assert_eq!(path, ["BAY", "DEN", "KAN", "HOU"]);
    assert_eq!(tunnels, [1, 3]);
}

#[test]
fn invalid_documents_name_the_offending_entry() {
    let bad = r#"{"name":"t","nodes":[{"name":"A"},{"name":"B"}],"links":[{"from":"A","to":"C"}]}"#;
    let e = parse_topology(bad).unwrap_err();
    assert!(matches!(&e, WnkError::Topology { .. }), "{e}");
    assert!(e.to_string().contains("links[0].to"), "{e}");
    let e = parse_topology(r#"{"name":"t","nodes":[],"links":[],"extra":1}"#).unwrap_err();
    assert!(e.to_string().contains("line 1"), "{e}");
}
