//! The shipped configurations and the schema stay in step with the parser.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use gmac_regions::config::ModelTag;
use gmac_regions::LoadedConfig;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn shipped() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("configs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn figure_configs_exist() {
    let names: BTreeSet<String> =
        shipped().iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    for n in ["fig5.json", "fig6-regions.json", "fig6-sir.json", "fig7.json", "fig8.json"] {
        assert!(names.contains(n), "{n}");
    }
}

#[test]
fn shipped_configs_parse_and_resolve() {
    for p in shipped() {
        let cfg = LoadedConfig::from_path(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        if cfg.config.model == ModelTag::Discrete {
            continue;
        }
        if p.file_name().unwrap() == "verify.json" || p.file_name().unwrap() == "fig6-sir.json" {
            cfg.channel(&cfg.config.channel).unwrap();
            continue;
        }
        for panel in cfg.panels() {
            for o in cfg.overlays() {
                let spec = cfg.config.channel.overlay(&panel.channel).overlay(&o.channel);
                let ch = cfg.channel(&spec).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
                ch.validate().unwrap();
            }
        }
    }
}

#[test]
fn fig5_matches_the_figure_parameters() {
    let cfg = LoadedConfig::from_path(&root().join("configs/fig5.json")).unwrap();
    let q0: Vec<f64> =
        cfg.panels().iter().map(|p| cfg.channel(&cfg.config.channel.overlay(&p.channel)).unwrap().q0).collect();
    let db = |x: f64| 10f64.powf(x / 10.0);
    assert_eq!(q0, vec![db(2.0), db(5.0), db(8.0)]);
    let ch = cfg.channel(&cfg.config.channel).unwrap();
    assert_eq!((ch.p1, ch.p2, ch.n1, ch.n2), (10.0, 10.0, 1.0, 1.0));
    assert!((ch.n3 - db(7.0)).abs() < 1e-12);
}

fn schema() -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(root().join("docs/config-schema.json")).unwrap()).unwrap()
}

fn keys(v: &serde_json::Value) -> BTreeSet<String> {
    v["properties"].as_object().unwrap().keys().cloned().collect()
}

#[test]
fn schema_lists_every_top_level_key() {
    let s = schema();
    let expected: BTreeSet<String> = [
        "model", "units", "channel", "title", "sweep", "panels", "overlays", "sir_db", "formats", "out", "discrete",
        "verify",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    assert_eq!(keys(&s), expected);
    // every key the schema allows is accepted by the parser
    let all = r#"{"model": "prop1", "units": "db", "channel": {}, "title": "t", "sweep": {}, "panels": [],
        "overlays": [], "sir_db": [], "formats": ["csv"], "out": "o", "discrete": {"pmfs": []}, "verify": {}}"#;
    LoadedConfig::from_str(all, Path::new("all.json")).unwrap();
}

#[test]
fn schema_models_match_parser() {
    let s = schema();
    let listed: Vec<String> =
        s["$defs"]["model"]["enum"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
    let known: Vec<String> = ModelTag::ALL.iter().map(|m| m.tag().to_string()).collect();
    assert_eq!(listed, known);
    let sweep = keys(&s["$defs"]["sweep"]);
    assert_eq!(sweep.len(), 9);
    let channel = keys(&s["$defs"]["channel"]);
    assert_eq!(channel, ["n1", "n2", "n3", "p1", "p2", "q0", "q1", "q2"].into_iter().map(String::from).collect());
}
